//! A plane shock placed on a cell face stays put: the perturbation norm stays
//! at rounding level.
//!
//! cargo run --release --example plane_shock -- [mach] [steps]

use carbuncle::experiments::{plane_shock_config, run_experiment};

fn main() -> carbuncle::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let mut cfg = plane_shock_config();
    if let Some(m) = args.get(1) {
        cfg.mach_in = m.parse().expect("mach");
    }
    if let Some(n) = args.get(2) {
        cfg.max_steps = Some(n.parse().expect("steps"));
    }
    let out = run_experiment(&cfg)?;
    for r in &out.records {
        println!("t = {:10.6}  l1 = {:.3e}", r.time, r.l1_perturbation);
    }
    println!("shock at x = {}, {} steps", cfg.snapped_shock_x(), out.summary.steps);
    Ok(())
}
