//! Filament-triggered carbuncle on a plane Mach 3 shock in standard
//! coordinates. Prints the perturbation extent as it grows.
//!
//! cargo run --release --example filament_standard [mach] [t_end]

use carbuncle::diagnostics::growth_rate;
use carbuncle::experiments::{filament_standard_config, run_experiment};

fn main() -> carbuncle::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let mut cfg = filament_standard_config();
    if let Some(m) = args.get(1) {
        cfg.mach_in = m.parse().expect("mach");
    }
    if let Some(t) = args.get(2) {
        cfg.t_end = t.parse().expect("t_end");
    }
    let out = run_experiment(&cfg)?;
    println!("{:>8} {:>12} {:>10} {:>10} {:>8}", "t", "l1", "height", "x_min", "beta");
    for r in &out.records {
        println!(
            "{:8.4} {:12.4e} {:10.4} {:10.4} {:>8}",
            r.time,
            r.l1_perturbation,
            r.extent_height,
            r.extent.map_or(f64::NAN, |e| e.x_min),
            r.tip_angle_beta.map_or("-".to_string(), |b| format!("{:.1}", b.to_degrees()))
        );
    }
    let n = out.records.len();
    if n >= 5 {
        let (rate, r2) = growth_rate(&out.records, n - n * 6 / 10..n)?;
        println!("growth rate {rate:.4}, r^2 {r2:.4}, steps {}", out.summary.steps);
    }
    Ok(())
}
