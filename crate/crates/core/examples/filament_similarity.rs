//! Filament run in similarity coordinates. The change between snapshots at
//! `t` and `1.25 t` shrinks as the carbuncle settles into a fixed shape.
//!
//! cargo run --release --example filament_similarity -- [t_end] [rusanov]

use carbuncle::diagnostics::relative_l1_change;
use carbuncle::experiments::{filament_similarity_config, run_experiment};
use carbuncle::solver::FluxKind;

fn main() -> carbuncle::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let mut cfg = filament_similarity_config();
    if let Some(t) = args.get(1) {
        cfg.t_end = t.parse().expect("t_end");
    }
    if args.get(2).is_some_and(|s| s == "rusanov") {
        cfg.flux = FluxKind::Rusanov;
    }
    let out = run_experiment(&cfg)?;
    println!("{:>10} {:>10} {:>12}", "t", "height", "rel change");
    for (k, r) in out.records.iter().enumerate() {
        let change = match k {
            0 => String::from("-"),
            _ => format!("{:.3e}", relative_l1_change(&out.snapshots[k - 1], &out.snapshots[k])?),
        };
        println!("{:10.4} {:10.4} {:>12}", r.time, r.extent_height, change);
    }
    println!("{} steps", out.summary.steps);
    Ok(())
}
