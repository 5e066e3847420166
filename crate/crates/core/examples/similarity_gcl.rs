//! Uniform flow on the expanding similarity grid stays uniform to rounding
//! while cell volumes grow like `t²`.
//!
//! cargo run --release --example similarity_gcl -- [steps]

use carbuncle::gas::{GasModel, Primitive};
use carbuncle::grid::{BoundarySpec, CoordinateMode, FieldGrid, GridGeometry, SideCondition, WallKind};
use carbuncle::solver::{advance, cfl_dt, FluxKind, SchemeSpec, StepOptions};

fn main() -> carbuncle::Result<()> {
    let steps: usize = std::env::args().nth(1).map_or(200, |s| s.parse().expect("steps"));
    let gas = GasModel::default();
    let u = Primitive::new(1.0, 3.0 * gas.sound_speed(1.0)?, 0.0);
    let geom = GridGeometry::new(64, 32, (-4.0, 2.4), (0.0, 3.2))?;
    let start = FieldGrid::uniform(geom, CoordinateMode::Similarity { t0: 1.0 }, u)?;
    let bc = BoundarySpec {
        left: SideCondition::Fixed(u),
        right: SideCondition::Fixed(u),
        bottom: WallKind::Symmetry,
        top: WallKind::Wall,
    };
    let scheme = SchemeSpec::new(FluxKind::Godunov);
    let mut f = start.clone();
    for step in 0..steps {
        let dt = cfl_dt(&f, &scheme, &gas)?;
        f = advance(&f, &bc, None, &scheme, &gas, dt, StepOptions { entropy: false, step_index: step })?.0;
        if (step + 1) % (steps / 10).max(1) == 0 {
            let dev = f
                .interior()
                .zip(start.interior())
                .map(|((_, _, a), (_, _, b))| (a.rho - b.rho).abs().max((a.mx - b.mx).abs()).max(a.my.abs()))
                .fold(0.0, f64::max);
            println!("step {:5}  t = {:9.4}  volume = {:.4e}  max deviation = {dev:.2e}", step + 1, f.time, f.volume());
        }
    }
    Ok(())
}
