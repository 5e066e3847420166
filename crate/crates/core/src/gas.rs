//! Polytropic equation of state `p = kappa * rho^gamma`, state conversions,
//! steady normal-shock relations and the oblique-shock polar.
//!
//! The isentropic system carries no energy equation, so a standing shock is
//! determined by mass and momentum balance alone.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::roots;

/// Equation-of-state parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    pub gamma: f64,
    pub kappa: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        GasModel {
            gamma: 1.4,
            kappa: 1.0,
        }
    }
}

impl GasModel {
    pub fn new(gamma: f64, kappa: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::Gas(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::Gas(format!("kappa must be positive, got {kappa}")));
        }
        Ok(GasModel { gamma, kappa })
    }

    #[inline]
    pub fn pressure(&self, rho: f64) -> f64 {
        self.kappa * rho.powf(self.gamma)
    }

    pub fn sound_speed(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::Density {
                rho,
                context: "sound speed",
            });
        }
        Ok(self.sound_speed_unchecked(rho))
    }

    /// `sqrt(gamma * kappa * rho^(gamma-1))` without the density check.
    #[inline]
    pub fn sound_speed_unchecked(&self, rho: f64) -> f64 {
        (self.gamma * self.kappa * rho.powf(self.gamma - 1.0)).sqrt()
    }

    /// Density at which the sound speed equals `c`.
    #[inline]
    pub fn density_from_sound_speed(&self, c: f64) -> f64 {
        (c * c / (self.gamma * self.kappa)).powf(1.0 / (self.gamma - 1.0))
    }

    /// Total energy density, the convex entropy of the isentropic system.
    #[inline]
    pub fn entropy(&self, u: &Conservative) -> f64 {
        let kinetic = 0.5 * (u.mx * u.mx + u.my * u.my) / u.rho;
        kinetic + self.kappa * u.rho.powf(self.gamma) / (self.gamma - 1.0)
    }

    /// Entropy flux `(eta + p) * u`.
    #[inline]
    pub fn entropy_flux(&self, u: &Conservative) -> [f64; 2] {
        let p = self.pressure(u.rho);
        let w = (self.entropy(u) + p) / u.rho;
        [w * u.mx, w * u.my]
    }
}

/// Density and velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub ux: f64,
    pub uy: f64,
}

/// Density and momentum density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conservative {
    pub rho: f64,
    pub mx: f64,
    pub my: f64,
}

impl Primitive {
    pub const fn new(rho: f64, ux: f64, uy: f64) -> Self {
        Primitive { rho, ux, uy }
    }

    pub fn to_conservative(&self) -> Conservative {
        Conservative {
            rho: self.rho,
            mx: self.rho * self.ux,
            my: self.rho * self.uy,
        }
    }

    pub fn speed(&self) -> f64 {
        self.ux.hypot(self.uy)
    }

    pub fn mach(&self, gas: &GasModel) -> Result<f64> {
        Ok(self.speed() / gas.sound_speed(self.rho)?)
    }

    pub fn validate(&self, context: &'static str) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Density {
                rho: self.rho,
                context,
            });
        }
        Ok(())
    }
}

impl Conservative {
    pub const fn new(rho: f64, mx: f64, my: f64) -> Self {
        Conservative { rho, mx, my }
    }

    pub fn to_primitive(&self) -> Result<Primitive> {
        if !(self.rho > 0.0) {
            return Err(Error::Density {
                rho: self.rho,
                context: "conservative to primitive",
            });
        }
        Ok(self.to_primitive_unchecked())
    }

    #[inline]
    pub fn to_primitive_unchecked(&self) -> Primitive {
        Primitive {
            rho: self.rho,
            ux: self.mx / self.rho,
            uy: self.my / self.rho,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.mx.is_finite() && self.my.is_finite()
    }
}

pub fn pressure(rho: f64, gas: &GasModel) -> f64 {
    gas.pressure(rho)
}

pub fn sound_speed(rho: f64, gas: &GasModel) -> Result<f64> {
    gas.sound_speed(rho)
}

pub fn prim_to_cons(p: &Primitive) -> Conservative {
    p.to_conservative()
}

pub fn cons_to_prim(c: &Conservative) -> Result<Primitive> {
    c.to_primitive()
}

/// Downstream state of a standing normal shock.
///
/// `upstream.ux` is the velocity normal to the shock (pointing downstream) and
/// `upstream.uy` the tangential velocity, which passes through unchanged.
pub fn normal_shock_downstream(upstream: &Primitive, gas: &GasModel) -> Result<Primitive> {
    upstream.validate("normal shock upstream")?;
    let rho_l = upstream.rho;
    let un_l = upstream.ux;
    let c_l = gas.sound_speed_unchecked(rho_l);
    let mach = un_l / c_l;
    if !(mach > 1.0) {
        return Err(Error::NoShock { mach });
    }

    let j = rho_l * un_l;
    let momentum_flux = j * un_l + gas.pressure(rho_l);
    // g is concave with g(rho_l) = 0 and its maximum at the sonic density;
    // the admissible root lies above that maximum.
    let g = |rho: f64| momentum_flux - (j * j / rho + gas.pressure(rho));
    let dg = |rho: f64| j * j / (rho * rho) - gas.gamma * gas.pressure(rho) / rho;

    let rho_sonic = (j * j / (gas.gamma * gas.kappa)).powf(1.0 / (gas.gamma + 1.0));
    let lo = rho_sonic.max(rho_l);
    let rho_r = if g(lo) <= 0.0 {
        // Jump below rounding resolution.
        lo
    } else {
        let mut hi = rho_l * ((gas.gamma + 1.0) * mach * mach).max(2.0);
        while g(hi) > 0.0 {
            hi *= 2.0;
        }
        roots::safeguarded_newton(|r| (g(r), dg(r)), lo, hi, hi, 1e-15, 0.0, 100).x
    };

    Ok(Primitive {
        rho: rho_r,
        ux: j / rho_r,
        uy: upstream.uy,
    })
}

/// Weak and strong attached oblique shocks for one deflection angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObliqueShockSolution {
    pub sigma_weak: f64,
    pub sigma_strong: f64,
    pub downstream_weak: Primitive,
    pub downstream_strong: Primitive,
}

// Shock with normal (sin s, -cos s) relative to a flow along +x: turns the
// flow towards +y, as behind the upper face of a wedge.
fn oblique_downstream(q: f64, sigma: f64, rho: f64, gas: &GasModel) -> Result<Primitive> {
    let (sin_s, cos_s) = sigma.sin_cos();
    let un = q * sin_s;
    let ut = q * cos_s;
    let c = gas.sound_speed_unchecked(rho);
    let (rho2, un2) = if un / c <= 1.0 + 1e-14 {
        (rho, un)
    } else {
        let d = normal_shock_downstream(&Primitive::new(rho, un, 0.0), gas)?;
        (d.rho, d.ux)
    };
    Ok(Primitive {
        rho: rho2,
        ux: un2 * sin_s + ut * cos_s,
        uy: -un2 * cos_s + ut * sin_s,
    })
}

fn rotate(p: Primitive, angle: f64) -> Primitive {
    let (s, c) = angle.sin_cos();
    Primitive {
        rho: p.rho,
        ux: c * p.ux - s * p.uy,
        uy: s * p.ux + c * p.uy,
    }
}

/// Flow turning angle behind an oblique shock at angle `sigma` to the
/// upstream flow. Zero at the Mach angle and at `pi/2`.
pub fn deflection(sigma: f64, upstream: &Primitive, gas: &GasModel) -> Result<f64> {
    upstream.validate("deflection upstream")?;
    let q = upstream.speed();
    let d = oblique_downstream(q, sigma, upstream.rho, gas)?;
    Ok(d.uy.atan2(d.ux))
}

fn deflection_fast(sigma: f64, q: f64, rho: f64, gas: &GasModel) -> f64 {
    match oblique_downstream(q, sigma, rho, gas) {
        Ok(d) => d.uy.atan2(d.ux),
        Err(_) => 0.0,
    }
}

/// Shock angle and value of the maximum deflection for an upstream state.
pub fn detachment(upstream: &Primitive, gas: &GasModel) -> Result<(f64, f64)> {
    let mach = upstream.mach(gas)?;
    if !(mach > 1.0) {
        return Err(Error::NoShock { mach });
    }
    let q = upstream.speed();
    let mu = (1.0 / mach).asin();
    let sigma_max = roots::golden_max(
        |s| deflection_fast(s, q, upstream.rho, gas),
        mu,
        FRAC_PI_2,
        1e-12,
    );
    Ok((sigma_max, deflection_fast(sigma_max, q, upstream.rho, gas)))
}

/// Both attached shock solutions for a wedge turning the flow by `alpha`.
///
/// Angles are measured from the upstream flow direction; the downstream states
/// are returned in the caller's frame.
pub fn wedge_shock_angles(
    alpha: f64,
    upstream: &Primitive,
    gas: &GasModel,
) -> Result<ObliqueShockSolution> {
    upstream.validate("wedge upstream")?;
    let mach = upstream.mach(gas)?;
    if !(mach > 1.0) {
        return Err(Error::NoShock { mach });
    }
    if !(alpha >= 0.0) {
        return Err(Error::Usage(format!(
            "deflection angle must be nonnegative, got {alpha}"
        )));
    }
    let q = upstream.speed();
    let flow_angle = upstream.uy.atan2(upstream.ux);
    let rho = upstream.rho;
    let mu = (1.0 / mach).asin();

    let (sigma_weak, sigma_strong) = if alpha == 0.0 {
        (mu, FRAC_PI_2)
    } else {
        let (sigma_max, alpha_max) = detachment(upstream, gas)?;
        if alpha >= alpha_max {
            return Err(Error::Detached { alpha, alpha_max });
        }
        let residual = |s: f64| deflection_fast(s, q, rho, gas) - alpha;
        (
            roots::bisect(residual, mu, sigma_max),
            roots::bisect(residual, sigma_max, FRAC_PI_2),
        )
    };

    let downstream_weak = rotate(oblique_downstream(q, sigma_weak, rho, gas)?, flow_angle);
    let downstream_strong = rotate(oblique_downstream(q, sigma_strong, rho, gas)?, flow_angle);
    Ok(ObliqueShockSolution {
        sigma_weak,
        sigma_strong,
        downstream_weak,
        downstream_strong,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gas() -> GasModel {
        GasModel::default()
    }

    #[test]
    fn pressure_values() {
        let g = gas();
        assert_eq!(pressure(1.0, &g), 1.0);
        assert_eq!(pressure(0.0, &g), 0.0);
        // 2^1.4 = exp(1.4 ln 2) = 2.6390158215457884...
        assert!((pressure(2.0, &g) - 2.639_015_821_545_788_5).abs() < 1e-15);
    }

    #[test]
    fn sound_speed_values() {
        let g = gas();
        assert!((sound_speed(1.0, &g).unwrap() - 1.4f64.sqrt()).abs() < 1e-15);
        let g2 = GasModel::new(1.4, 1.0 / 1.4).unwrap();
        assert!((sound_speed(1.0, &g2).unwrap() - 1.0).abs() < 1e-15);
        let ratio = sound_speed(4.0 * 0.3, &g).unwrap() / sound_speed(0.3, &g).unwrap();
        assert!((ratio - 4f64.powf(0.2)).abs() < 1e-14);
        assert!(matches!(sound_speed(0.0, &g), Err(Error::Density { .. })));
        assert!(matches!(sound_speed(-1.0, &g), Err(Error::Density { .. })));
    }

    #[test]
    fn gas_model_invariants() {
        assert!(GasModel::new(1.0, 1.0).is_err());
        assert!(GasModel::new(0.9, 1.0).is_err());
        assert!(GasModel::new(1.4, 0.0).is_err());
        assert!(GasModel::new(5.0 / 3.0, 2.0).is_ok());
    }

    #[test]
    fn conversions() {
        let c = prim_to_cons(&Primitive::new(1.0, 3.0, 0.0));
        assert_eq!(c, Conservative::new(1.0, 3.0, 0.0));
        let c = prim_to_cons(&Primitive::new(2.0, 0.0, 0.0));
        assert_eq!(c, Conservative::new(2.0, 0.0, 0.0));
        let p = Primitive::new(0.7, -1.3, 2.1);
        let back = cons_to_prim(&prim_to_cons(&p)).unwrap();
        assert!((back.ux - p.ux).abs() <= 4.0 * f64::EPSILON * p.ux.abs());
        assert!((back.uy - p.uy).abs() <= 4.0 * f64::EPSILON * p.uy.abs());
        assert_eq!(back.rho, p.rho);
        assert!(cons_to_prim(&Conservative::new(0.0, 1.0, 0.0)).is_err());
    }

    /// Independent oracle: plain bisection on the momentum residual.
    fn shock_oracle(rho_l: f64, un_l: f64, g: &GasModel) -> f64 {
        let j = rho_l * un_l;
        let res = |r: f64| rho_l * rho_l * un_l * un_l * (1.0 / rho_l - 1.0 / r) + g.pressure(rho_l) - g.pressure(r);
        let mut lo = rho_l * (1.0 + 1e-9);
        let mut hi = rho_l * 1e4;
        let _ = j;
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if res(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn rh_residuals(l: &Primitive, r: &Primitive, g: &GasModel) -> (f64, f64) {
        let mass_l = l.rho * l.ux;
        let mass_r = r.rho * r.ux;
        let mom_l = mass_l * l.ux + g.pressure(l.rho);
        let mom_r = mass_r * r.ux + g.pressure(r.rho);
        ((mass_l - mass_r).abs() / mass_l.abs(), (mom_l - mom_r).abs() / mom_l.abs())
    }

    #[test]
    fn normal_shock_mach3() {
        let g = gas();
        let c = g.sound_speed(1.0).unwrap();
        let up = Primitive::new(1.0, 3.0 * c, 0.0);
        let down = normal_shock_downstream(&up, &g).unwrap();
        let oracle = shock_oracle(1.0, 3.0 * c, &g);
        assert!((down.rho - oracle).abs() < 1e-12 * oracle);
        assert!(down.rho > 1.0 && down.ux > 0.0 && down.ux < up.ux);
        let (rm, rp) = rh_residuals(&up, &down, &g);
        assert!(rm <= 1e-13 && rp <= 1e-13, "{rm} {rp}");
    }

    #[test]
    fn normal_shock_sonic_is_error() {
        let g = gas();
        let c = g.sound_speed(1.0).unwrap();
        assert!(matches!(
            normal_shock_downstream(&Primitive::new(1.0, c, 0.0), &g),
            Err(Error::NoShock { .. })
        ));
        let weak = normal_shock_downstream(&Primitive::new(1.0, 1.0001 * c, 0.5), &g).unwrap();
        assert!(weak.rho > 1.0);
        assert_eq!(weak.uy, 0.5);
    }

    /// Independent oracle for the detachment angle: dense scan.
    fn scan_alpha_max(up: &Primitive, g: &GasModel) -> f64 {
        let mu = (1.0 / up.mach(g).unwrap()).asin();
        let n = 200_000;
        (0..=n)
            .map(|k| mu + (FRAC_PI_2 - mu) * k as f64 / n as f64)
            .map(|s| deflection(s, up, g).unwrap())
            .fold(f64::MIN, f64::max)
    }

    #[test]
    fn wedge_zero_deflection_limits() {
        let g = gas();
        let c = g.sound_speed(1.0).unwrap();
        let up = Primitive::new(1.0, 3.0 * c, 0.0);
        let sol = wedge_shock_angles(0.0, &up, &g).unwrap();
        assert!((sol.sigma_weak - (1.0f64 / 3.0).asin()).abs() < 1e-12);
        assert!((sol.sigma_strong - FRAC_PI_2).abs() < 1e-12);
        let normal = normal_shock_downstream(&up, &g).unwrap();
        assert!((sol.downstream_strong.rho - normal.rho).abs() < 1e-12);
        assert!((sol.downstream_strong.ux - normal.ux).abs() < 1e-12);
        assert!(sol.downstream_strong.uy.abs() < 1e-12);
        assert!(deflection(sol.sigma_weak, &up, &g).unwrap().abs() < 1e-12);
        assert!(deflection(FRAC_PI_2, &up, &g).unwrap().abs() < 1e-12);
    }

    #[test]
    fn wedge_detachment() {
        let g = gas();
        let c = g.sound_speed(1.0).unwrap();
        let up = Primitive::new(1.0, 3.0 * c, 0.0);
        let scanned = scan_alpha_max(&up, &g);
        let (_, alpha_max) = detachment(&up, &g).unwrap();
        assert!((alpha_max - scanned).abs() < 1e-9, "{alpha_max} vs {scanned}");
        assert!(matches!(
            wedge_shock_angles(scanned + 0.01, &up, &g),
            Err(Error::Detached { .. })
        ));
        let sub = Primitive::new(1.0, 0.5 * c, 0.0);
        assert!(matches!(wedge_shock_angles(0.1, &sub, &g), Err(Error::NoShock { .. })));
    }

    #[test]
    fn wedge_ten_degrees() {
        let g = gas();
        let c = g.sound_speed(1.0).unwrap();
        let up = Primitive::new(1.0, 3.0 * c, 0.0);
        let alpha = 10f64.to_radians();
        let sol = wedge_shock_angles(alpha, &up, &g).unwrap();
        assert!(sol.sigma_weak < sol.sigma_strong);
        for s in [sol.sigma_weak, sol.sigma_strong] {
            assert!((deflection(s, &up, &g).unwrap() - alpha).abs() < 1e-12);
        }
        let mw = sol.downstream_weak.mach(&g).unwrap();
        let ms = sol.downstream_strong.mach(&g).unwrap();
        assert!(mw > 1.0 && ms < 1.0, "{mw} {ms}");
        for d in [sol.downstream_weak, sol.downstream_strong] {
            assert!((d.uy.atan2(d.ux) - alpha).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn eos_monotone(a in 1e-3f64..100.0, b in 1e-3f64..100.0) {
            prop_assume!(a != b);
            let g = gas();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(g.pressure(lo) < g.pressure(hi));
            prop_assert!(g.sound_speed_unchecked(lo) < g.sound_speed_unchecked(hi));
        }

        #[test]
        fn shock_jump_conditions(mach in 1.01f64..10.0, rho in 0.1f64..10.0, ut in -3.0f64..3.0) {
            let g = gas();
            let c = g.sound_speed(rho).unwrap();
            let up = Primitive::new(rho, mach * c, ut);
            let down = normal_shock_downstream(&up, &g).unwrap();
            let (rm, rp) = rh_residuals(&up, &down, &g);
            prop_assert!(rm <= 1e-13 && rp <= 1e-13);
            prop_assert!(down.rho > rho);
            prop_assert!(down.ux > 0.0 && down.ux < up.ux);
            prop_assert_eq!(down.uy, ut);
        }

        #[test]
        fn polar_roots(mach in 1.5f64..6.0, frac in 0.02f64..0.95) {
            let g = gas();
            let c = g.sound_speed(1.0).unwrap();
            let up = Primitive::new(1.0, mach * c, 0.0);
            let (_, amax) = detachment(&up, &g).unwrap();
            let alpha = frac * amax;
            let sol = wedge_shock_angles(alpha, &up, &g).unwrap();
            prop_assert!(sol.sigma_weak < sol.sigma_strong);
            prop_assert!((deflection(sol.sigma_weak, &up, &g).unwrap() - alpha).abs() < 1e-12);
            prop_assert!((deflection(sol.sigma_strong, &up, &g).unwrap() - alpha).abs() < 1e-12);
        }
    }
}
