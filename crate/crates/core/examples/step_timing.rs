//! Wall-clock cost of one step on a uniform field and on a plane shock.

use std::time::Instant;

use carbuncle::experiments::{build_plane_shock, filament_standard_config};
use carbuncle::grid::FieldGrid;
use carbuncle::solver::{advance, cfl_dt, StepOptions};

fn main() -> carbuncle::Result<()> {
    let cfg = filament_standard_config();
    let scheme = cfg.scheme()?;
    let (shock, bc) = build_plane_shock(&cfg)?;
    let uniform = FieldGrid::uniform(cfg.geom, cfg.mode, cfg.inflow()?)?;
    let mut fields = vec![("uniform", uniform), ("plane shock", shock)];
    if let Some(path) = std::env::args().nth(1) {
        let text = std::fs::read_to_string(path)?;
        fields.push(("snapshot", carbuncle::io::parse_snapshot(&text, cfg.geom, cfg.mode, 0.0)?));
    }
    for (name, field) in fields {
        let mut f = field;
        f.fill_ghosts(&bc, None);
        let dt = cfl_dt(&f, &scheme, &cfg.gas)?;
        let n = 50;
        let start = Instant::now();
        for _ in 0..n {
            let (next, _) = advance(&f, &bc, None, &scheme, &cfg.gas, dt, StepOptions::default())?;
            std::hint::black_box(&next);
        }
        println!("{name}: {:.2} ms/step", start.elapsed().as_secs_f64() * 1e3 / n as f64);
    }
    Ok(())
}
