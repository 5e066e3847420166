//! Still-gas wedge behind an attached oblique shock, evolved in similarity
//! coordinates, with the change rate near the tip per snapshot pair.
//!
//! cargo run --release --example wedge_nuq -- [alpha_deg] [strong]

use carbuncle::diagnostics::{similarity_change_rate, Extent};
use carbuncle::experiments::{run_experiment, wedge_config, Branch, Setup};

fn main() -> carbuncle::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let mut cfg = wedge_config();
    if let Setup::Wedge { alpha_deg, branch, .. } = &mut cfg.setup {
        if let Some(a) = args.get(1) {
            *alpha_deg = a.parse().expect("alpha_deg");
        }
        if args.get(2).is_some_and(|s| s == "strong") {
            *branch = Branch::Strong;
        }
    }
    cfg.entropy = true;
    let out = run_experiment(&cfg)?;
    let tip = Extent { x_min: -0.5, x_max: 2.0, y_min: 0.0, y_max: 1.0 };
    for (k, w) in out.snapshots.windows(2).enumerate() {
        println!(
            "t = {:8.4}  l1 = {:.4}  tip change rate = {:.4e}",
            w[1].time,
            out.records[k + 1].l1_perturbation,
            similarity_change_rate(&w[0], &w[1], &tip)?
        );
    }
    println!(
        "{} steps, entropy production / tolerance <= {:.2e}",
        out.summary.steps,
        out.summary.max_entropy_ratio.unwrap_or(0.0)
    );
    Ok(())
}
