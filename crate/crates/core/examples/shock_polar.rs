//! Weak and strong attached shocks over a range of wedge angles.
//!
//! cargo run --example shock_polar -- [mach]

use carbuncle::gas::{wedge_shock_angles, GasModel, Primitive};

fn main() -> carbuncle::Result<()> {
    let mach: f64 = std::env::args().nth(1).map_or(3.0, |s| s.parse().expect("mach"));
    let gas = GasModel::default();
    let up = Primitive::new(1.0, mach * gas.sound_speed(1.0)?, 0.0);
    println!("{:>6} {:>10} {:>10} {:>8} {:>8}", "alpha", "weak", "strong", "M weak", "M strong");
    for a in (0..=60).step_by(5) {
        match wedge_shock_angles((a as f64).to_radians(), &up, &gas) {
            Ok(s) => println!(
                "{a:6} {:10.4} {:10.4} {:8.4} {:8.4}",
                s.sigma_weak.to_degrees(),
                s.sigma_strong.to_degrees(),
                s.downstream_weak.mach(&gas)?,
                s.downstream_strong.mach(&gas)?
            ),
            Err(e) => {
                println!("{a:6} {e}");
                break;
            }
        }
    }
    Ok(())
}
