//! Filament run with Rusanov dissipation blended in above a horizontal line
//! and pure Godunov below it, against the unblended run.
//!
//! cargo run --release --example blended_dissipation -- [y_cut] [theta_max]

use carbuncle::experiments::{filament_standard_config, run_experiment};
use carbuncle::solver::BlendKind;

fn main() -> carbuncle::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let y_cut = args.get(1).map_or(0.6, |s| s.parse().expect("y_cut"));
    let theta_max = args.get(2).map_or(1.0, |s| s.parse().expect("theta_max"));
    let plain = filament_standard_config();
    let blended = carbuncle::experiments::RunConfig {
        blend: BlendKind::Band { y_cut, theta_max },
        ..plain.clone()
    };
    for (label, cfg) in [("godunov", plain), ("blended", blended)] {
        let out = run_experiment(&cfg)?;
        let last = out.records.last().expect("final record");
        println!(
            "{label}: t = {:.3}, extent height {:.4}, l1 {:.4e}",
            last.time, last.extent_height, last.l1_perturbation
        );
    }
    Ok(())
}
