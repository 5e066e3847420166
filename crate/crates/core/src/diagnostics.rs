//! Carbuncle metrics: perturbation norms and extent, growth fits, shock-front
//! location, tip angle, self-similarity residuals and per-cell discrete
//! entropy production.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::gas::{Conservative, GasModel};
use crate::grid::{cell_volume, FieldGrid, GridGeometry};
use crate::solver::EdgeEntropyFluxes;

/// Relative rounding allowance for the entropy inequality.
pub const ENTROPY_REL_TOL: f64 = 1e-10;
/// Default detection threshold as a fraction of the inflow speed.
pub const DEFAULT_EPS_FRACTION: f64 = 0.01;
/// Default number of rows in each tip-angle fit.
pub const DEFAULT_BETA_ROWS: usize = 8;

/// Total energy and its flux, the entropy pair of the isentropic system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPair {
    pub gas: GasModel,
}

impl EntropyPair {
    pub fn eta(&self, u: &Conservative) -> f64 {
        self.gas.entropy(u)
    }

    pub fn q(&self, u: &Conservative) -> [f64; 2] {
        self.gas.entropy_flux(u)
    }
}

/// Per-cell entropy production of one step,
/// `[vol'·eta(U') - vol·eta(U)]/dt + Σ_e length·(q·n - s·eta)`.
///
/// `before` and `after` are consecutive fields; `edges` holds the numerical
/// entropy fluxes recorded by the step.
pub fn entropy_production(
    before: &FieldGrid,
    after: &FieldGrid,
    dt: f64,
    edges: Option<&EdgeEntropyFluxes>,
    gas: &GasModel,
) -> Result<Vec<f64>> {
    let edges = edges.ok_or_else(|| Error::Usage("entropy production needs edge entropy fluxes".into()))?;
    if before.geom != after.geom || before.mode != after.mode {
        return Err(Error::Usage("entropy production across different grids".into()));
    }
    let g = before.geom;
    let (nx, ny) = (g.nx, g.ny);
    if edges.x.len() != (nx + 1) * ny || edges.y.len() != nx * (ny + 1) {
        return Err(Error::Usage("edge entropy flux arrays do not match the grid".into()));
    }
    let mode = before.mode;
    let t = before.time;
    let t_mid = t + 0.5 * dt;
    let len_x = g.dy() * mode.scale(t_mid);
    let len_y = g.dx() * mode.scale(t_mid);
    let vol_old = cell_volume(&g, mode, t);
    let vol_new = cell_volume(&g, mode, t + dt);

    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let storage = (vol_new * gas.entropy(&after.get(i, j)) - vol_old * gas.entropy(&before.get(i, j))) / dt;
            let qx = edges.x[j * (nx + 1) + i + 1] - edges.x[j * (nx + 1) + i];
            let qy = edges.y[(j + 1) * nx + i] - edges.y[j * nx + i];
            out.push(storage + (len_x * qx + len_y * qy));
        }
    }
    Ok(out)
}

/// Allowed positive entropy production per cell for a step: rounding noise
/// relative to `vol/dt · max eta`.
pub fn entropy_tolerance(before: &FieldGrid, after: &FieldGrid, dt: f64, gas: &GasModel) -> f64 {
    let eta_max = before
        .interior()
        .chain(after.interior())
        .map(|(_, _, u)| gas.entropy(&u).abs())
        .fold(0.0, f64::max);
    ENTROPY_REL_TOL * after.volume().max(before.volume()) / dt * eta_max
}

/// Axis-aligned box in grid coordinates (`x` or `xi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extent {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Extent {
    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationMetrics {
    /// `Σ |ux - ux_ref| · cell area` in grid coordinates.
    pub l1: f64,
    /// Bounding box of cells with `|ux - ux_ref| > eps_c`.
    pub extent: Option<Extent>,
    pub extent_height: f64,
}

fn same_grid(a: &FieldGrid, b: &FieldGrid) -> Result<()> {
    if a.geom != b.geom {
        return Err(Error::Usage("fields live on different grids".into()));
    }
    Ok(())
}

pub fn perturbation_metrics(field: &FieldGrid, reference: &FieldGrid, eps_c: f64) -> Result<PerturbationMetrics> {
    same_grid(field, reference)?;
    let g = field.geom;
    let area = g.dx() * g.dy();
    let (hx, hy) = (0.5 * g.dx(), 0.5 * g.dy());
    let mut l1 = 0.0;
    let mut extent: Option<Extent> = None;
    for (i, j, u) in field.interior() {
        let du = (u.mx / u.rho - reference.primitive(i, j).ux).abs();
        l1 += du * area;
        if du > eps_c {
            let (x, y) = g.center(i, j);
            let cell = Extent {
                x_min: x - hx,
                x_max: x + hx,
                y_min: y - hy,
                y_max: y + hy,
            };
            extent = Some(match extent {
                None => cell,
                Some(e) => Extent {
                    x_min: e.x_min.min(cell.x_min),
                    x_max: e.x_max.max(cell.x_max),
                    y_min: e.y_min.min(cell.y_min),
                    y_max: e.y_max.max(cell.y_max),
                },
            });
        }
    }
    Ok(PerturbationMetrics {
        l1,
        extent,
        extent_height: extent.map_or(0.0, |e| e.height()),
    })
}

/// Least-squares line `y = intercept + slope·x` with its coefficient of
/// determination. A response with zero variance has `r² = 1`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Usage("linear fit needs two or more paired points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Usage("linear fit over a single abscissa".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok((slope, intercept, r2))
}

/// Snapshot metrics recorded during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub l1_perturbation: f64,
    pub extent: Option<Extent>,
    pub extent_height: f64,
    /// Largest per-cell entropy production since the previous record.
    pub max_entropy_production: Option<f64>,
    /// Largest ratio of entropy production to its rounding tolerance since the
    /// previous record; above 1 means the inequality failed somewhere.
    pub entropy_ratio: Option<f64>,
    pub shock_front: Vec<Option<f64>>,
    pub tip_angle_beta: Option<f64>,
}

/// Slope and `r²` of `extent_height` against time over `window`.
pub fn growth_rate(records: &[DiagnosticsRecord], window: Range<usize>) -> Result<(f64, f64)> {
    let w = records
        .get(window.clone())
        .ok_or_else(|| Error::Usage(format!("window {window:?} outside {} records", records.len())))?;
    if w.len() < 3 {
        return Err(Error::Usage("growth rate needs at least three records".into()));
    }
    let ts: Vec<f64> = w.iter().map(|r| r.time).collect();
    let hs: Vec<f64> = w.iter().map(|r| r.extent_height).collect();
    let (slope, _, r2) = linear_fit(&ts, &hs)?;
    Ok((slope, r2))
}

/// Shock abscissa per row, `None` where a row has no decrease of `ux`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShockFront {
    /// Row centres.
    pub y: Vec<f64>,
    pub x: Vec<Option<f64>>,
}

impl ShockFront {
    /// Row of the leftmost front point (first one on ties).
    pub fn leftmost_row(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (j, x) in self.x.iter().enumerate() {
            if let Some(x) = *x {
                if best.is_none_or(|(_, b)| x < b) {
                    best = Some((j, x));
                }
            }
        }
        best.map(|(j, _)| j)
    }
}

/// Steepest single-cell drop of `ux` in each row, refined to sub-cell position
/// by weighting the adjacent face differences.
pub fn shock_front(field: &FieldGrid) -> ShockFront {
    let g = field.geom;
    let nx = g.nx;
    let mut xs = Vec::with_capacity(g.ny);
    let mut ys = Vec::with_capacity(g.ny);
    let mut d = vec![0.0; nx.saturating_sub(1)];
    for j in 0..g.ny {
        ys.push(g.center(0, j).1);
        for (i, di) in d.iter_mut().enumerate() {
            *di = field.primitive(i + 1, j).ux - field.primitive(i, j).ux;
        }
        let steepest = d
            .iter()
            .enumerate()
            .fold(None::<(usize, f64)>, |acc, (i, &v)| match acc {
                Some((_, b)) if b <= v => acc,
                _ => Some((i, v)),
            });
        let front = match steepest {
            Some((k, v)) if v < 0.0 => {
                let mut num = 0.0;
                let mut den = 0.0;
                for m in k.saturating_sub(1)..=(k + 1).min(d.len() - 1) {
                    let w = (-d[m]).max(0.0);
                    num += w * g.face_x(m + 1);
                    den += w;
                }
                Some(num / den)
            }
            _ => None,
        };
        xs.push(front);
    }
    ShockFront { y: ys, x: xs }
}

/// Angle from the horizontal of the line fitted to one wing of the front.
fn wing_angle(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let (ds, xs): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    let (slope, _, _) = linear_fit(&ds, &xs).ok()?;
    Some(1f64.atan2(slope))
}

/// Half-opening angle of the front at `tip_row`, from least-squares lines over
/// `rows` rows above and below the tip. A side without enough rows (the tip
/// sits on a symmetry line) uses the mirror of the other side. `None` for a
/// straight or receding front.
pub fn tip_angle(front: &ShockFront, tip_row: usize, rows: usize) -> Option<f64> {
    let x_tip = front.x.get(tip_row).copied().flatten()?;
    let y_tip = front.y[tip_row];
    let collect = |range: Box<dyn Iterator<Item = usize>>| -> Vec<(f64, f64)> {
        range
            .filter_map(|j| front.x[j].map(|x| ((front.y[j] - y_tip).abs(), x)))
            .collect()
    };
    let n = front.x.len();
    let up: Vec<(f64, f64)> = collect(Box::new(tip_row..(tip_row + rows + 1).min(n)));
    let down: Vec<(f64, f64)> = collect(Box::new(tip_row.saturating_sub(rows)..=tip_row));
    let _ = x_tip;
    let beta_up = wing_angle(&up);
    let beta_down = wing_angle(&down);
    let beta = match (beta_up, beta_down) {
        (Some(a), Some(b)) => 0.5 * (a + b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return None,
    };
    if beta >= std::f64::consts::FRAC_PI_2 * (1.0 - 1e-9) {
        None
    } else {
        Some(beta)
    }
}

/// Bilinear interpolation of `ux` at a point inside the cell-centre hull.
fn sample_ux(field: &FieldGrid, x: f64, y: f64) -> f64 {
    let g = field.geom;
    let fx = ((x - g.x_min) / g.dx() - 0.5).clamp(0.0, (g.nx - 1) as f64);
    let fy = ((y - g.y_min) / g.dy() - 0.5).clamp(0.0, (g.ny - 1) as f64);
    let i0 = (fx.floor() as usize).min(g.nx.saturating_sub(2));
    let j0 = (fy.floor() as usize).min(g.ny.saturating_sub(2));
    let i1 = (i0 + 1).min(g.nx - 1);
    let j1 = (j0 + 1).min(g.ny - 1);
    let (ax, ay) = (fx - i0 as f64, fy - j0 as f64);
    let u = |i, j| field.primitive(i, j).ux;
    (1.0 - ay) * ((1.0 - ax) * u(i0, j0) + ax * u(i1, j0)) + ay * ((1.0 - ax) * u(i0, j1) + ax * u(i1, j1))
}

/// Compares two standard-mode fields after mapping both to `xi = (x - c)/t`
/// about `center`: the L¹ difference of `ux` over the common `xi` box divided
/// by the L¹ norm of the first field there.
pub fn self_similarity_residual(first: &FieldGrid, second: &FieldGrid, center: (f64, f64)) -> Result<f64> {
    let (t1, t2) = (first.time, second.time);
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(Error::Usage("self-similarity needs positive times".into()));
    }
    let hull = |f: &FieldGrid, t: f64| {
        let g = f.geom;
        let (x0, y0) = g.center(0, 0);
        let (x1, y1) = g.center(g.nx - 1, g.ny - 1);
        (
            (x0 - center.0) / t,
            (x1 - center.0) / t,
            (y0 - center.1) / t,
            (y1 - center.1) / t,
        )
    };
    let a = hull(first, t1);
    let b = hull(second, t2);
    let (xa, xb) = (a.0.max(b.0), a.1.min(b.1));
    let (ya, yb) = (a.2.max(b.2), a.3.min(b.3));
    if !(xb > xa && yb > ya) {
        return Err(Error::Usage("fields share no similarity-coordinate overlap".into()));
    }
    let h = (first.geom.dx() / t1.max(t2)).min(second.geom.dx() / t1.max(t2));
    let nx = (((xb - xa) / h).floor() as usize).max(1);
    let ny = (((yb - ya) / h).floor() as usize).max(1);
    let (hx, hy) = ((xb - xa) / nx as f64, (yb - ya) / ny as f64);
    let mut diff = 0.0;
    let mut norm = 0.0;
    for j in 0..ny {
        let eta = ya + (j as f64 + 0.5) * hy;
        for i in 0..nx {
            let xi = xa + (i as f64 + 0.5) * hx;
            let u1 = sample_ux(first, center.0 + xi * t1, center.1 + eta * t1);
            let u2 = sample_ux(second, center.0 + xi * t2, center.1 + eta * t2);
            diff += (u1 - u2).abs();
            norm += u1.abs();
        }
    }
    if norm == 0.0 {
        return Ok(if diff == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(diff / norm)
}

/// `Σ|ux_b - ux_a| / Σ|ux_a|` on a shared grid.
pub fn relative_l1_change(a: &FieldGrid, b: &FieldGrid) -> Result<f64> {
    same_grid(a, b)?;
    let mut diff = 0.0;
    let mut norm = 0.0;
    for (i, j, u) in a.interior() {
        let ua = u.mx / u.rho;
        diff += (b.primitive(i, j).ux - ua).abs();
        norm += ua.abs();
    }
    Ok(if norm == 0.0 { diff } else { diff / norm })
}

/// L¹ change of `ux` inside `region` per unit of similarity time `ln t`.
pub fn similarity_change_rate(a: &FieldGrid, b: &FieldGrid, region: &Extent) -> Result<f64> {
    same_grid(a, b)?;
    if !(a.time > 0.0 && b.time > a.time) {
        return Err(Error::Usage("change rate needs 0 < t_a < t_b".into()));
    }
    let g: GridGeometry = a.geom;
    let area = g.dx() * g.dy();
    let mut sum = 0.0;
    for (i, j, u) in a.interior() {
        let (x, y) = g.center(i, j);
        if x >= region.x_min && x <= region.x_max && y >= region.y_min && y <= region.y_max {
            sum += (b.primitive(i, j).ux - u.mx / u.rho).abs() * area;
        }
    }
    Ok(sum / (b.time / a.time).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::Primitive;
    use crate::grid::CoordinateMode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn geom() -> GridGeometry {
        GridGeometry::new(40, 20, (0.0, 2.0), (0.0, 1.0)).unwrap()
    }

    fn record(t: f64, h: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            time: t,
            l1_perturbation: 0.0,
            extent: None,
            extent_height: h,
            max_entropy_production: None,
            entropy_ratio: None,
            shock_front: vec![],
            tip_angle_beta: None,
        }
    }

    #[test]
    fn metrics_single_cell() {
        let g = geom();
        let u = Primitive::new(1.0, 3.0, 0.0);
        let reference = FieldGrid::uniform(g, CoordinateMode::Standard, u).unwrap();
        let m = perturbation_metrics(&reference, &reference, 0.03).unwrap();
        assert_eq!((m.l1, m.extent, m.extent_height), (0.0, None, 0.0));

        let mut f = reference.clone();
        f.set(5, 7, Primitive::new(1.0, 2.5, 0.0).to_conservative());
        let m = perturbation_metrics(&f, &reference, 0.03).unwrap();
        assert!((m.l1 - 0.5 * g.dx() * g.dy()).abs() < 1e-15);
        let e = m.extent.unwrap();
        assert!((e.x_min - 0.25).abs() < 1e-12 && (e.x_max - 0.3).abs() < 1e-12);
        assert!((e.y_min - 0.35).abs() < 1e-12 && (e.y_max - 0.4).abs() < 1e-12);
        assert!((m.extent_height - g.dy()).abs() < 1e-12);

        let other = FieldGrid::uniform(GridGeometry::new(4, 4, (0.0, 1.0), (0.0, 1.0)).unwrap(), CoordinateMode::Standard, u).unwrap();
        assert!(perturbation_metrics(&other, &reference, 0.03).is_err());
    }

    #[test]
    fn growth_rate_conventions() {
        let flat: Vec<_> = (0..5).map(|k| record(k as f64, 0.3)).collect();
        assert_eq!(growth_rate(&flat, 0..5).unwrap(), (0.0, 1.0));
        let lin: Vec<_> = (0..5).map(|k| record(k as f64, 2.0 * k as f64)).collect();
        let (rate, r2) = growth_rate(&lin, 0..5).unwrap();
        assert!((rate - 2.0).abs() < 1e-14 && (r2 - 1.0).abs() < 1e-14);
        assert!(growth_rate(&lin, 0..2).is_err());
        assert!(growth_rate(&lin, 3..9).is_err());
    }

    #[test]
    fn growth_rate_with_noise() {
        // Oracle: normal equations solved by Cramer's rule.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200;
        let ts: Vec<f64> = (0..n).map(|k| k as f64 * 0.05).collect();
        let hs: Vec<f64> = ts.iter().map(|t| 1.5 * t + 0.2 + 0.1 * (rng.random::<f64>() - 0.5)).collect();
        let recs: Vec<_> = ts.iter().zip(&hs).map(|(&t, &h)| record(t, h)).collect();
        let (rate, _) = growth_rate(&recs, 0..n).unwrap();

        let (s1, st, stt) = (n as f64, ts.iter().sum::<f64>(), ts.iter().map(|t| t * t).sum::<f64>());
        let (sh, sth) = (hs.iter().sum::<f64>(), ts.iter().zip(&hs).map(|(t, h)| t * h).sum::<f64>());
        let det = s1 * stt - st * st;
        let slope = (s1 * sth - st * sh) / det;
        let intercept = (stt * sh - st * sth) / det;
        assert!((rate - slope).abs() < 1e-10);
        let resid: f64 = ts.iter().zip(&hs).map(|(t, h)| (h - intercept - slope * t).powi(2)).sum();
        let se = (resid / (s1 - 2.0) / (stt - st * st / s1)).sqrt();
        assert!((rate - 1.5).abs() < 3.0 * se, "rate {rate} se {se}");
    }

    #[test]
    fn plane_front_and_wedge_front() {
        let g = geom();
        let l = Primitive::new(1.0, 3.0, 0.0);
        let r = Primitive::new(3.0, 1.0, 0.0);
        let f = FieldGrid::from_fn(g, CoordinateMode::Standard, |x, _| if x < 1.2 { l } else { r }).unwrap();
        let front = shock_front(&f);
        for x in &front.x {
            assert!((x.unwrap() - 1.2).abs() <= 0.5 * g.dx());
        }
        assert_eq!(tip_angle(&front, front.leftmost_row().unwrap(), 8), None);

        let beta0 = 35f64.to_radians();
        let y_tip = 0.5 * 1.0 + 0.025;
        let synthetic = ShockFront {
            y: front.y.clone(),
            x: front.y.iter().map(|y| Some(1.0 + (y - y_tip).abs() / beta0.tan())).collect(),
        };
        let tip = synthetic.leftmost_row().unwrap();
        let beta = tip_angle(&synthetic, tip, 8).unwrap();
        assert!((beta - beta0).abs() < 2f64.to_radians(), "{}", beta.to_degrees());

        let mut gappy = synthetic.clone();
        gappy.x[tip + 3] = None;
        assert!((tip_angle(&gappy, tip, 8).unwrap() - beta0).abs() < 2f64.to_radians());

        // Tip on the bottom row: the missing lower wing is mirrored.
        let half = ShockFront {
            y: front.y.clone(),
            x: front.y.iter().map(|y| Some(1.0 + (y - front.y[0]) / beta0.tan())).collect(),
        };
        assert!((tip_angle(&half, 0, 8).unwrap() - beta0).abs() < 1e-9);
    }

    #[test]
    fn wedge_front_from_field() {
        let g = GridGeometry::new(200, 100, (0.0, 2.0), (0.0, 1.0)).unwrap();
        let beta0 = 40f64.to_radians();
        let y_tip = 0.5;
        let l = Primitive::new(1.0, 3.0, 0.0);
        let r = Primitive::new(3.0, 1.0, 0.0);
        let f = FieldGrid::from_fn(g, CoordinateMode::Standard, |x, y| {
            if x < 0.8 + (y - y_tip).abs() / beta0.tan() { l } else { r }
        })
        .unwrap();
        let front = shock_front(&f);
        let tip = front.leftmost_row().unwrap();
        let beta = tip_angle(&front, tip, 8).unwrap();
        assert!((beta - beta0).abs() < 2f64.to_radians(), "{}", beta.to_degrees());
    }

    #[test]
    fn similarity_residual_cases() {
        let g = geom();
        let mk = |t: f64, f: &dyn Fn(f64, f64) -> Primitive| {
            let mut field = FieldGrid::from_fn(g, CoordinateMode::Standard, f).unwrap();
            field.time = t;
            field
        };
        let a = mk(1.0, &|_, _| Primitive::new(1.0, 2.0, 0.0));
        let b = mk(1.5, &|_, _| Primitive::new(1.0, 2.5, 0.0));
        let r = self_similarity_residual(&a, &b, (1.0, 0.5)).unwrap();
        assert!((r - 0.25).abs() < 1e-12);
        assert_eq!(self_similarity_residual(&a, &a, (1.0, 0.5)).unwrap(), 0.0);

        let profile = |xi: f64, eta: f64| Primitive::new(1.0, 1.0 + (xi * 3.0).tanh() + 0.2 * eta, 0.0);
        let c = (1.0, 0.5);
        let s1 = mk(1.0, &|x, y| profile((x - c.0) / 1.0, (y - c.1) / 1.0));
        let s2 = mk(2.0, &|x, y| profile((x - c.0) / 2.0, (y - c.1) / 2.0));
        let r = self_similarity_residual(&s1, &s2, c).unwrap();
        assert!(r < g.dx(), "{r}");
        let mut z = a.clone();
        z.time = 0.0;
        assert!(self_similarity_residual(&z, &a, c).is_err());
    }

    #[test]
    fn entropy_is_convex() {
        let gas = GasModel::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-4;
        for _ in 0..500 {
            let u = [rng.random_range(0.1..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
            let v = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let eta = |s: f64| gas.entropy(&Conservative::new(u[0] + s * v[0] * u[0] * 0.1, u[1] + s * v[1], u[2] + s * v[2]));
            let second = (eta(h) - 2.0 * eta(0.0) + eta(-h)) / (h * h);
            assert!(second > -1e-6, "{second}");
        }
        let pair = EntropyPair { gas };
        let u = Conservative::new(2.0, 1.0, -1.0);
        let q = pair.q(&u);
        let p = gas.pressure(2.0);
        assert!((q[0] - (pair.eta(&u) + p) * 0.5).abs() < 1e-14);
        assert!((q[1] + (pair.eta(&u) + p) * 0.5).abs() < 1e-14);
    }

    #[test]
    fn change_measures() {
        let g = geom();
        let mut a = FieldGrid::uniform(g, CoordinateMode::Similarity { t0: 1.0 }, Primitive::new(1.0, 2.0, 0.0)).unwrap();
        let mut b = a.clone();
        b.set(0, 0, Primitive::new(1.0, 3.0, 0.0).to_conservative());
        assert!((relative_l1_change(&a, &b).unwrap() - 1.0 / (2.0 * 800.0)).abs() < 1e-15);
        b.time = std::f64::consts::E;
        a.time = 1.0;
        let all = Extent { x_min: 0.0, x_max: 2.0, y_min: 0.0, y_max: 1.0 };
        assert!((similarity_change_rate(&a, &b, &all).unwrap() - g.dx() * g.dy()).abs() < 1e-15);
    }
}
