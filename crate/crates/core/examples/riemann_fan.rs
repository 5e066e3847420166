//! Exact Riemann fan for one pair of states, sampled along `x/t`.
//!
//! cargo run --example riemann_fan -- [rhoL uL rhoR uR]

use carbuncle::gas::{GasModel, Primitive};
use carbuncle::riemann::{solve_star, Wave};

fn main() -> carbuncle::Result<()> {
    let a: Vec<f64> = std::env::args().skip(1).map(|s| s.parse().expect("number")).collect();
    let (rl, ul, rr, ur) = match a.as_slice() {
        [rl, ul, rr, ur] => (*rl, *ul, *rr, *ur),
        _ => (2.0, 0.0, 1.0, 0.0),
    };
    let gas = GasModel::default();
    let fan = solve_star(&Primitive::new(rl, ul, 0.0), &Primitive::new(rr, ur, 0.0), [1.0, 0.0], &gas)?;
    println!("rho* = {:.12}  u* = {:.12}  residual = {:.2e}", fan.rho_star, fan.u_star, fan.residual());
    for (side, w) in [("left", fan.left_wave), ("right", fan.right_wave)] {
        match w {
            Wave::Shock { speed } => println!("{side}: shock, speed {speed:.6}"),
            Wave::Rarefaction { head, tail } => println!("{side}: rarefaction, head {head:.6} tail {tail:.6}"),
        }
    }
    println!("{:>8} {:>10} {:>10}", "x/t", "rho", "u");
    for k in -20..=20 {
        let s = k as f64 * 0.1;
        let p = fan.sample(s);
        println!("{s:8.2} {:10.6} {:10.6}", p.rho, p.ux);
    }
    Ok(())
}
