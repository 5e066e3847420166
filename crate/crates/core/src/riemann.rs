//! Exact Riemann solver for the isentropic Euler equations across an edge with
//! arbitrary unit normal, plus the Godunov, Rusanov and blended edge fluxes.
//!
//! Pressure depends on density alone, so the star region has a single density
//! on both sides of the contact and only the tangential velocity jumps there.
//! All fluxes accept an edge speed `s`: the edge moves with normal velocity `s`
//! and the flux returned is `f(U)·n - s·U` evaluated on the edge ray.

use crate::error::{Error, Result};
use crate::gas::{Conservative, GasModel, Primitive};
use crate::roots;

/// Relative step size at which the star iteration stops.
pub const STAR_REL_TOL: f64 = 1e-15;
/// Iteration cap before the star solve reports failure.
pub const STAR_MAX_ITER: usize = 200;
/// Residual, relative to the velocity scale, below which the star iteration
/// stops: rounding in `phi` is of this size.
pub const RESIDUAL_FLOOR: f64 = 4.0 * f64::EPSILON;
/// Distance from a shock speed, relative to the velocity scale, within which
/// a sampling ray is taken to lie on the shock.
pub const SHOCK_TIE: f64 = 64.0 * f64::EPSILON;

/// One nonlinear wave of the fan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Shock { speed: f64 },
    Rarefaction { head: f64, tail: f64 },
}

impl Wave {
    /// Slowest and fastest speed covered by the wave.
    pub fn speeds(&self) -> (f64, f64) {
        match *self {
            Wave::Shock { speed } => (speed, speed),
            Wave::Rarefaction { head, tail } => (head.min(tail), head.max(tail)),
        }
    }

    pub fn is_shock(&self) -> bool {
        matches!(self, Wave::Shock { .. })
    }
}

/// Per-side data in the edge frame with cached pressure and sound speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Side {
    pub rho: f64,
    pub un: f64,
    pub ut: f64,
    pub p: f64,
    pub c: f64,
}

impl Side {
    #[inline]
    pub fn new(rho: f64, un: f64, ut: f64, gas: &GasModel) -> Side {
        let p = gas.pressure(rho);
        Side {
            rho,
            un,
            ut,
            p,
            c: (gas.gamma * p / rho).sqrt(),
        }
    }

    fn primitive(&self) -> Primitive {
        Primitive::new(self.rho, self.un, self.ut)
    }
}

/// Complete self-similar solution of a normal Riemann problem.
///
/// `left` and `right` are stored in the edge frame: `ux` holds the normal and
/// `uy` the tangential velocity, with tangent `(-n_y, n_x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannFan {
    pub left: Primitive,
    pub right: Primitive,
    pub normal: [f64; 2],
    pub rho_star: f64,
    pub u_star: f64,
    pub left_wave: Wave,
    pub right_wave: Wave,
    pub contact_speed: f64,
    gas: GasModel,
    c_left: f64,
    c_right: f64,
    c_star: f64,
    p_star: f64,
}

#[inline]
pub(crate) fn rotate_in(p: &Primitive, n: [f64; 2]) -> (f64, f64) {
    (p.ux * n[0] + p.uy * n[1], -p.ux * n[1] + p.uy * n[0])
}

#[inline]
pub(crate) fn rotate_out(a: f64, b: f64, n: [f64; 2]) -> (f64, f64) {
    (a * n[0] - b * n[1], a * n[1] + b * n[0])
}

/// Wave curve `f_K(rho)` and its derivative; `p` and `c` belong to `rho`.
#[inline]
fn wave_curve(side: &Side, rho: f64, p: f64, c: f64, gas: &GasModel) -> (f64, f64) {
    if rho > side.rho {
        let dp = p - side.p;
        let dr = rho - side.rho;
        let denom = rho * side.rho;
        let a = dp * dr / denom;
        let f = a.sqrt();
        let dp_drho = c * c;
        let da = (dp_drho * dr + dp) / denom - a / rho;
        (f, 0.5 * da / f)
    } else {
        (2.0 / (gas.gamma - 1.0) * (c - side.c), c / rho)
    }
}

/// Mass flux through a shock joining `side` to the star density.
#[inline]
fn shock_mass_flux(side: &Side, rho_star: f64, p_star: f64, gas: &GasModel) -> f64 {
    let dr = rho_star - side.rho;
    // Secant slope dp/drho; the difference quotient cancels for weak shocks.
    let slope = if dr <= 1e-6 * side.rho {
        let mid = 0.5 * (rho_star + side.rho);
        gas.gamma * gas.pressure(mid) / mid
    } else {
        (p_star - side.p) / dr
    };
    (side.rho * rho_star * slope).sqrt()
}

pub(crate) fn solve_sides(l: Side, r: Side, normal: [f64; 2], gas: &GasModel) -> Result<RiemannFan> {
    let g1 = gas.gamma - 1.0;
    let du = r.un - l.un;
    let critical = 2.0 / g1 * (l.c + r.c);
    // States within rounding of the vacuum limit count as vacuum.
    if !(du < critical * (1.0 - 1e-14)) {
        return Err(Error::Vacuum { du, critical });
    }

    let (rho_star, p_star, c_star) = if l.rho == r.rho && l.un == r.un {
        (l.rho, l.p, l.c)
    } else {
        let phi = |rho: f64| {
            if rho <= 0.0 {
                return (du - critical, f64::INFINITY);
            }
            let p = gas.pressure(rho);
            let c = (gas.gamma * p / rho).sqrt();
            let (fl, dfl) = wave_curve(&l, rho, p, c, gas);
            let (fr, dfr) = wave_curve(&r, rho, p, c, gas);
            (fl + fr + du, dfl + dfr)
        };
        let mut hi = l.rho.max(r.rho);
        while phi(hi).0 <= 0.0 {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::NoConvergence("star density bracket overflow".into()));
            }
        }
        let root = roots::safeguarded_newton(
            phi,
            0.0,
            hi,
            0.5 * (l.rho + r.rho),
            STAR_REL_TOL,
            RESIDUAL_FLOOR * l.un.abs().max(r.un.abs()).max(l.c).max(r.c),
            STAR_MAX_ITER,
        );
        if !root.converged || !(root.x > 0.0) {
            return Err(Error::NoConvergence(format!(
                "star density after {STAR_MAX_ITER} iterations: {}",
                root.x
            )));
        }
        let p = gas.pressure(root.x);
        (root.x, p, (gas.gamma * p / root.x).sqrt())
    };

    // Symmetric in left/right so that mirrored problems give mirrored answers.
    let (fl, _) = wave_curve(&l, rho_star, p_star, c_star, gas);
    let (fr, _) = wave_curve(&r, rho_star, p_star, c_star, gas);
    let u_star = 0.5 * (l.un + r.un) + 0.5 * (fr - fl);

    let left_wave = if rho_star > l.rho {
        let m = shock_mass_flux(&l, rho_star, p_star, gas);
        Wave::Shock {
            speed: l.un - m / l.rho,
        }
    } else {
        Wave::Rarefaction {
            head: l.un - l.c,
            tail: u_star - c_star,
        }
    };
    let right_wave = if rho_star > r.rho {
        let m = shock_mass_flux(&r, rho_star, p_star, gas);
        Wave::Shock {
            speed: r.un + m / r.rho,
        }
    } else {
        Wave::Rarefaction {
            head: r.un + r.c,
            tail: u_star + c_star,
        }
    };

    Ok(RiemannFan {
        left: l.primitive(),
        right: r.primitive(),
        normal,
        rho_star,
        u_star,
        left_wave,
        right_wave,
        contact_speed: u_star,
        gas: *gas,
        c_left: l.c,
        c_right: r.c,
        c_star,
        p_star,
    })
}

/// Solves the Riemann problem normal to `normal` (a unit vector).
pub fn solve_star(
    left: &Primitive,
    right: &Primitive,
    normal: [f64; 2],
    gas: &GasModel,
) -> Result<RiemannFan> {
    left.validate("riemann left state")?;
    right.validate("riemann right state")?;
    let (unl, utl) = rotate_in(left, normal);
    let (unr, utr) = rotate_in(right, normal);
    solve_sides(
        Side::new(left.rho, unl, utl, gas),
        Side::new(right.rho, unr, utr, gas),
        normal,
        gas,
    )
}

impl RiemannFan {
    /// `phi(rho_star)`, the residual of the star equation.
    pub fn residual(&self) -> f64 {
        let gas = &self.gas;
        let l = Side::new(self.left.rho, self.left.ux, self.left.uy, gas);
        let r = Side::new(self.right.rho, self.right.ux, self.right.uy, gas);
        let p = gas.pressure(self.rho_star);
        let c = (gas.gamma * p / self.rho_star).sqrt();
        let (fl, _) = wave_curve(&l, self.rho_star, p, c, gas);
        let (fr, _) = wave_curve(&r, self.rho_star, p, c, gas);
        fl + fr + (self.right.ux - self.left.ux)
    }

    /// Velocity scale used to judge the star residual.
    pub fn velocity_scale(&self) -> f64 {
        self.left
            .ux
            .abs()
            .max(self.right.ux.abs())
            .max(self.c_left)
            .max(self.c_right)
    }

    /// Lax entropy inequalities for every shock in the fan, up to rounding
    /// (vanishingly weak shocks sit exactly on the characteristic speeds).
    pub fn is_admissible(&self) -> bool {
        let tol = 1e-12 * self.velocity_scale();
        let left_ok = match self.left_wave {
            Wave::Shock { speed } => {
                self.left.ux - self.c_left + tol >= speed && speed + tol >= self.u_star - self.c_star
            }
            Wave::Rarefaction { .. } => true,
        };
        let right_ok = match self.right_wave {
            Wave::Shock { speed } => {
                self.u_star + self.c_star + tol >= speed && speed + tol >= self.right.ux + self.c_right
            }
            Wave::Rarefaction { .. } => true,
        };
        left_ok && right_ok
    }

    /// Sound speed in the star region.
    pub fn c_star(&self) -> f64 {
        self.c_star
    }

    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    /// Solution on the ray `x/t = s`, in the edge frame. Rays that hit a
    /// discontinuity take the right-hand limit; a ray within rounding of a
    /// shock speed counts as hitting it.
    pub fn sample(&self, s: f64) -> Primitive {
        let g = &self.gas;
        let tie = SHOCK_TIE * self.velocity_scale();
        let ratio = (g.gamma - 1.0) / (g.gamma + 1.0);
        if s < self.u_star {
            let star = Primitive::new(self.rho_star, self.u_star, self.left.uy);
            match self.left_wave {
                Wave::Shock { speed } => {
                    if s < speed - tie {
                        self.left
                    } else {
                        star
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if s < head {
                        self.left
                    } else if s >= tail {
                        star
                    } else {
                        let invariant = self.left.ux + 2.0 * self.c_left / (g.gamma - 1.0);
                        let c = ratio * (invariant - s);
                        Primitive::new(g.density_from_sound_speed(c), s + c, self.left.uy)
                    }
                }
            }
        } else {
            let star = Primitive::new(self.rho_star, self.u_star, self.right.uy);
            match self.right_wave {
                Wave::Shock { speed } => {
                    if s < speed - tie {
                        star
                    } else {
                        self.right
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if s < tail {
                        star
                    } else if s >= head {
                        self.right
                    } else {
                        let invariant = self.right.ux - 2.0 * self.c_right / (g.gamma - 1.0);
                        let c = ratio * (s - invariant);
                        Primitive::new(g.density_from_sound_speed(c), s - c, self.right.uy)
                    }
                }
            }
        }
    }

    /// Same as [`RiemannFan::sample`] but rotated back to the fixed frame.
    pub fn sample_fixed(&self, s: f64) -> Primitive {
        let e = self.sample(s);
        let (ux, uy) = rotate_out(e.ux, e.uy, self.normal);
        Primitive::new(e.rho, ux, uy)
    }
}

pub fn sample_fan(fan: &RiemannFan, s: f64) -> Primitive {
    fan.sample(s)
}

/// Numerical flux through an edge, per unit length, in the fixed frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EdgeFlux {
    pub frho: f64,
    pub fmx: f64,
    pub fmy: f64,
}

impl EdgeFlux {
    pub fn as_array(&self) -> [f64; 3] {
        [self.frho, self.fmx, self.fmy]
    }

    fn lerp(a: EdgeFlux, b: EdgeFlux, theta: f64) -> EdgeFlux {
        let w = 1.0 - theta;
        EdgeFlux {
            frho: w * a.frho + theta * b.frho,
            fmx: w * a.fmx + theta * b.fmx,
            fmy: w * a.fmy + theta * b.fmy,
        }
    }
}

/// An edge flux together with the matching numerical entropy flux
/// `q·n - s·eta` (energy flux relative to the moving edge).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluxPair {
    pub flux: EdgeFlux,
    pub entropy: f64,
}

/// `f(U)·n - s·U` and `q·n - s·eta` for a state given in the edge frame.
#[inline]
fn moving_flux_rotated(rho: f64, un: f64, ut: f64, p: f64, s: f64, gas: &GasModel) -> ([f64; 3], f64) {
    let m = rho * (un - s);
    let eta = 0.5 * rho * (un * un + ut * ut) + p / (gas.gamma - 1.0);
    ([m, m * un + p, m * ut], eta * (un - s) + p * un)
}

#[inline]
fn to_fixed(f: [f64; 3], n: [f64; 2]) -> EdgeFlux {
    let (fmx, fmy) = rotate_out(f[1], f[2], n);
    EdgeFlux {
        frho: f[0],
        fmx,
        fmy,
    }
}

pub(crate) fn godunov_sides(l: Side, r: Side, n: [f64; 2], s: f64, gas: &GasModel) -> Result<FluxPair> {
    let fan = solve_sides(l, r, n, gas)?;
    let w = fan.sample(s);
    let p = if w.rho == fan.rho_star {
        fan.p_star
    } else if w.rho == l.rho {
        l.p
    } else if w.rho == r.rho {
        r.p
    } else {
        gas.pressure(w.rho)
    };
    let (f, q) = moving_flux_rotated(w.rho, w.ux, w.uy, p, s, gas);
    Ok(FluxPair {
        flux: to_fixed(f, n),
        entropy: q,
    })
}

pub(crate) fn rusanov_sides(l: Side, r: Side, n: [f64; 2], s: f64, gas: &GasModel) -> FluxPair {
    let (fl, ql) = moving_flux_rotated(l.rho, l.un, l.ut, l.p, s, gas);
    let (fr, qr) = moving_flux_rotated(r.rho, r.un, r.ut, r.p, s, gas);
    let a = ((l.un - s).abs() + l.c).max((r.un - s).abs() + r.c);
    let ul = [l.rho, l.rho * l.un, l.rho * l.ut];
    let ur = [r.rho, r.rho * r.un, r.rho * r.ut];
    let mut f = [0.0; 3];
    for k in 0..3 {
        f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * a * (ur[k] - ul[k]);
    }
    let eta_l = 0.5 * l.rho * (l.un * l.un + l.ut * l.ut) + l.p / (gas.gamma - 1.0);
    let eta_r = 0.5 * r.rho * (r.un * r.un + r.ut * r.ut) + r.p / (gas.gamma - 1.0);
    FluxPair {
        flux: to_fixed(f, n),
        entropy: 0.5 * (ql + qr) - 0.5 * a * (eta_r - eta_l),
    }
}

pub(crate) fn blended_sides(
    l: Side,
    r: Side,
    n: [f64; 2],
    s: f64,
    theta: f64,
    gas: &GasModel,
) -> Result<FluxPair> {
    if theta == 0.0 {
        return godunov_sides(l, r, n, s, gas);
    }
    let rus = rusanov_sides(l, r, n, s, gas);
    if theta == 1.0 {
        return Ok(rus);
    }
    let god = godunov_sides(l, r, n, s, gas)?;
    Ok(FluxPair {
        flux: EdgeFlux::lerp(god.flux, rus.flux, theta),
        entropy: (1.0 - theta) * god.entropy + theta * rus.entropy,
    })
}

fn sides(left: &Primitive, right: &Primitive, n: [f64; 2], gas: &GasModel) -> Result<(Side, Side)> {
    left.validate("flux left state")?;
    right.validate("flux right state")?;
    let (unl, utl) = rotate_in(left, n);
    let (unr, utr) = rotate_in(right, n);
    Ok((Side::new(left.rho, unl, utl, gas), Side::new(right.rho, unr, utr, gas)))
}

/// Godunov flux with the entropy flux of the sampled edge state.
pub fn godunov_flux_pair(
    left: &Primitive,
    right: &Primitive,
    normal: [f64; 2],
    edge_speed: f64,
    gas: &GasModel,
) -> Result<FluxPair> {
    let (l, r) = sides(left, right, normal, gas)?;
    godunov_sides(l, r, normal, edge_speed, gas)
}

pub fn godunov_flux(
    left: &Primitive,
    right: &Primitive,
    normal: [f64; 2],
    edge_speed: f64,
    gas: &GasModel,
) -> Result<EdgeFlux> {
    Ok(godunov_flux_pair(left, right, normal, edge_speed, gas)?.flux)
}

pub fn rusanov_flux_pair(
    left: &Primitive,
    right: &Primitive,
    normal: [f64; 2],
    edge_speed: f64,
    gas: &GasModel,
) -> Result<FluxPair> {
    let (l, r) = sides(left, right, normal, gas)?;
    Ok(rusanov_sides(l, r, normal, edge_speed, gas))
}

pub fn rusanov_flux(
    left: &Primitive,
    right: &Primitive,
    normal: [f64; 2],
    edge_speed: f64,
    gas: &GasModel,
) -> Result<EdgeFlux> {
    Ok(rusanov_flux_pair(left, right, normal, edge_speed, gas)?.flux)
}

/// `(1 - theta)·Godunov + theta·Rusanov`.
pub fn blended_flux(
    left: &Primitive,
    right: &Primitive,
    normal: [f64; 2],
    edge_speed: f64,
    theta: f64,
    gas: &GasModel,
) -> Result<EdgeFlux> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Usage(format!("blend weight {theta} outside [0, 1]")));
    }
    let (l, r) = sides(left, right, normal, gas)?;
    Ok(blended_sides(l, r, normal, edge_speed, theta, gas)?.flux)
}

/// Exact physical flux `f(U)·n - s·U` in the fixed frame.
pub fn physical_flux(u: &Primitive, normal: [f64; 2], edge_speed: f64, gas: &GasModel) -> EdgeFlux {
    let un = u.ux * normal[0] + u.uy * normal[1];
    let m = u.rho * (un - edge_speed);
    let p = gas.pressure(u.rho);
    EdgeFlux {
        frho: m,
        fmx: m * u.ux + p * normal[0],
        fmy: m * u.uy + p * normal[1],
    }
}

/// Conservative state of a primitive, as a flat array.
pub fn conserved(u: &Primitive) -> [f64; 3] {
    let c: Conservative = u.to_conservative();
    [c.rho, c.mx, c.my]
}
