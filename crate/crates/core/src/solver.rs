//! Unsplit first-order finite-volume stepping in standard and similarity
//! coordinates.
//!
//! Both modes share one update,
//!
//! ```text
//! vol(t+dt)·U' = vol(t)·U - dt · Σ_e length(e, t+dt/2) · F_e,
//! ```
//!
//! where `F_e = f(U*)·n - s_e·U*` is evaluated on the ray of an edge moving
//! with normal speed `s_e`. In standard mode `s_e = 0` and volumes are
//! constant; in similarity mode `s_e = xi·n` and volumes grow like `t²`, and
//! the mid-time edge length makes uniform states exact fixed points.
//!
//! Per-cell accumulation is `(F_E - F_W)` plus `(F_N - F_S)` in that order, so
//! mirrored fields stay mirrored bit for bit.

use crate::error::{Error, Result};
use crate::gas::{Conservative, GasModel};
use crate::grid::{cell_volume, BoundarySpec, CoordinateMode, FieldGrid, GridGeometry, TriggerSpec};
use crate::riemann::{blended_sides, FluxPair, Side};

/// Default Courant number.
pub const DEFAULT_CFL: f64 = 0.45;
/// Upper bound on the Courant number for the unsplit 2D scheme.
pub const MAX_CFL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxKind {
    Godunov,
    Rusanov,
}

impl FluxKind {
    pub fn name(&self) -> &'static str {
        match self {
            FluxKind::Godunov => "godunov",
            FluxKind::Rusanov => "rusanov",
        }
    }
}

/// Where extra Rusanov dissipation is blended in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlendKind {
    None,
    /// `theta_max` on cells whose centre lies above `y_cut`, zero below.
    Band { y_cut: f64, theta_max: f64 },
}

/// Per-cell Rusanov weights, row-major `nx × ny`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlendMask {
    nx: usize,
    theta: Vec<f64>,
}

impl BlendMask {
    #[inline]
    pub fn theta(&self, i: usize, j: usize) -> f64 {
        self.theta[j * self.nx + i]
    }

    pub fn values(&self) -> &[f64] {
        &self.theta
    }
}

/// Builds the cell weights for `kind`; `None` leaves the scheme unblended.
pub fn make_blend_mask(kind: BlendKind, geom: &GridGeometry) -> Result<Option<BlendMask>> {
    match kind {
        BlendKind::None => Ok(None),
        BlendKind::Band { y_cut, theta_max } => {
            if !(0.0..=1.0).contains(&theta_max) {
                return Err(Error::Usage(format!("theta_max {theta_max} outside [0, 1]")));
            }
            if !(y_cut >= geom.y_min && y_cut <= geom.y_max) {
                return Err(Error::Usage(format!("y_cut {y_cut} outside the domain")));
            }
            let mut theta = Vec::with_capacity(geom.nx * geom.ny);
            for j in 0..geom.ny {
                let (_, y) = geom.center(0, j);
                let w = if y > y_cut { theta_max } else { 0.0 };
                theta.extend(std::iter::repeat_n(w, geom.nx));
            }
            Ok(Some(BlendMask { nx: geom.nx, theta }))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    /// Base flux; the blend mask mixes in Rusanov on top of Godunov.
    pub flux: FluxKind,
    pub blend_mask: Option<BlendMask>,
    pub cfl: f64,
}

impl SchemeSpec {
    pub fn new(flux: FluxKind) -> Self {
        SchemeSpec {
            flux,
            blend_mask: None,
            cfl: DEFAULT_CFL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= MAX_CFL) {
            return Err(Error::Usage(format!(
                "cfl {} outside (0, {MAX_CFL}]",
                self.cfl
            )));
        }
        if let Some(m) = &self.blend_mask {
            if m.theta.iter().any(|t| !(0.0..=1.0).contains(t)) {
                return Err(Error::Usage("blend weight outside [0, 1]".into()));
            }
        }
        Ok(())
    }

    /// Rusanov weight on the edge between two cells (`None` marks a ghost).
    #[inline]
    fn edge_theta(&self, a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> f64 {
        let base = match self.flux {
            FluxKind::Godunov => 0.0,
            FluxKind::Rusanov => 1.0,
        };
        match &self.blend_mask {
            None => base,
            Some(m) => {
                let ta = a.map_or(0.0, |(i, j)| m.theta(i, j));
                let tb = b.map_or(0.0, |(i, j)| m.theta(i, j));
                base.max(ta).max(tb)
            }
        }
    }

    pub fn is_pure_godunov(&self) -> bool {
        self.flux == FluxKind::Godunov
            && self
                .blend_mask
                .as_ref()
                .is_none_or(|m| m.theta.iter().all(|&t| t == 0.0))
    }
}

/// Entropy fluxes `q·n - s·eta` on every edge of one step, per unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeEntropyFluxes {
    /// Vertical faces, `(nx + 1) × ny`, row-major.
    pub x: Vec<f64>,
    /// Horizontal faces, `nx × (ny + 1)`, row-major.
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    /// Largest `|un - s| + c` seen on any edge.
    pub max_wave_speed: f64,
    /// `dt · Σ length·F` over boundary edges, outward positive.
    pub boundary_outflow: [f64; 3],
    pub edge_entropy: Option<EdgeEntropyFluxes>,
    /// Filled when [`StepOptions::entropy`] is set.
    pub entropy_production: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepOptions {
    /// Record edge entropy fluxes and per-cell entropy production.
    pub entropy: bool,
    /// Step counter used in error messages.
    pub step_index: usize,
}

/// Cached per-cell data for both edge orientations.
#[derive(Clone, Copy)]
struct CellData {
    rho: f64,
    ux: f64,
    uy: f64,
    p: f64,
    c: f64,
}

impl CellData {
    #[inline]
    fn x_side(&self) -> Side {
        Side {
            rho: self.rho,
            un: self.ux,
            ut: self.uy,
            p: self.p,
            c: self.c,
        }
    }

    #[inline]
    fn y_side(&self) -> Side {
        Side {
            rho: self.rho,
            un: self.uy,
            ut: -self.ux,
            p: self.p,
            c: self.c,
        }
    }
}

fn cell_data(field: &FieldGrid, gas: &GasModel, step: usize) -> Result<Vec<CellData>> {
    let stride = field.stride();
    field
        .raw()
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let (pi, pj) = (k % stride, k / stride);
            if !u.is_finite() || !(u.rho > 0.0) {
                return Err(Error::NonFinite {
                    i: pi.wrapping_sub(1),
                    j: pj.wrapping_sub(1),
                    step,
                });
            }
            let p = gas.pressure(u.rho);
            Ok(CellData {
                rho: u.rho,
                ux: u.mx / u.rho,
                uy: u.my / u.rho,
                p,
                c: (gas.gamma * p / u.rho).sqrt(),
            })
        })
        .collect()
}

fn corner(pi: usize, pj: usize, nx: usize, ny: usize) -> bool {
    (pi == 0 || pi == nx + 1) && (pj == 0 || pj == ny + 1)
}

/// Largest stable time step: `cfl · min_e width / (|un - s| + c)` over both
/// cells adjacent to every edge. Expects ghosts to be filled.
pub fn cfl_dt(field: &FieldGrid, scheme: &SchemeSpec, gas: &GasModel) -> Result<f64> {
    scheme.validate()?;
    let g = field.geom;
    let (nx, ny) = (g.nx, g.ny);
    let scale = field.mode.scale(field.time);
    let sim = field.mode.is_similarity();
    let (wx, wy) = (g.dx() * scale, g.dy() * scale);
    let stride = field.stride();
    let data = cell_data(field, gas, 0)?;
    let mut rate: f64 = 0.0;

    for pj in 0..ny + 2 {
        for pi in 0..nx + 2 {
            if corner(pi, pj, nx, ny) {
                continue;
            }
            let d = &data[pj * stride + pi];
            // Faces bordering padded cell (pi, pj): x-faces pi - 1 and pi, y-faces pj - 1 and pj.
            if (1..=ny).contains(&pj) {
                for face in [pi.wrapping_sub(1), pi] {
                    if face <= nx {
                        let s = if sim { g.face_x(face) } else { 0.0 };
                        rate = rate.max(((d.ux - s).abs() + d.c) / wx);
                    }
                }
            }
            if (1..=nx).contains(&pi) {
                for face in [pj.wrapping_sub(1), pj] {
                    if face <= ny {
                        let s = if sim { g.face_y(face) } else { 0.0 };
                        rate = rate.max(((d.uy - s).abs() + d.c) / wy);
                    }
                }
            }
        }
    }
    if !rate.is_finite() || rate <= 0.0 {
        return Err(Error::NonFinite { i: 0, j: 0, step: 0 });
    }
    Ok(scheme.cfl / rate)
}

fn edge_error(step: usize, what: String, e: Error) -> Error {
    Error::Edge {
        step,
        edge: what,
        source: Box::new(e),
    }
}

/// One explicit step in either coordinate mode; ghosts are refreshed first.
pub fn advance(
    field: &FieldGrid,
    bc: &BoundarySpec,
    trigger: Option<&TriggerSpec>,
    scheme: &SchemeSpec,
    gas: &GasModel,
    dt: f64,
    opts: StepOptions,
) -> Result<(FieldGrid, StepReport)> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Usage(format!("time step must be positive, got {dt}")));
    }
    let mut cur = field.clone();
    cur.fill_ghosts(bc, trigger);

    let g = cur.geom;
    let (nx, ny) = (g.nx, g.ny);
    let mode = cur.mode;
    let sim = mode.is_similarity();
    let t = cur.time;
    let t_mid = t + 0.5 * dt;
    let len_x = g.dy() * mode.scale(t_mid);
    let len_y = g.dx() * mode.scale(t_mid);
    let vol_old = cell_volume(&g, mode, t);
    let vol_new = cell_volume(&g, mode, t + dt);
    let stride = cur.stride();
    let data = cell_data(&cur, gas, opts.step_index)?;

    let mut max_speed: f64 = 0.0;
    let mut track = |side: &Side, s: f64| {
        max_speed = max_speed.max((side.un - s).abs() + side.c);
    };

    // Vertical faces: face i of row j joins padded cells (i, j+1) and (i+1, j+1).
    let mut fx: Vec<FluxPair> = Vec::with_capacity((nx + 1) * ny);
    for j in 0..ny {
        for i in 0..=nx {
            let l = data[(j + 1) * stride + i].x_side();
            let r = data[(j + 1) * stride + i + 1].x_side();
            let s = if sim { g.face_x(i) } else { 0.0 };
            track(&l, s);
            track(&r, s);
            let theta = scheme.edge_theta(
                (i > 0).then(|| (i - 1, j)),
                (i < nx).then_some((i, j)),
            );
            let pair = blended_sides(l, r, [1.0, 0.0], s, theta, gas).map_err(|e| {
                edge_error(opts.step_index, format!("vertical face i={i} j={j}"), e)
            })?;
            fx.push(pair);
        }
    }
    // Horizontal faces: face j of column i joins padded cells (i+1, j) and (i+1, j+1).
    let mut fy: Vec<FluxPair> = Vec::with_capacity(nx * (ny + 1));
    for j in 0..=ny {
        for i in 0..nx {
            let l = data[j * stride + i + 1].y_side();
            let r = data[(j + 1) * stride + i + 1].y_side();
            let s = if sim { g.face_y(j) } else { 0.0 };
            track(&l, s);
            track(&r, s);
            let theta = scheme.edge_theta(
                (j > 0).then(|| (i, j - 1)),
                (j < ny).then_some((i, j)),
            );
            let pair = blended_sides(l, r, [0.0, 1.0], s, theta, gas).map_err(|e| {
                edge_error(opts.step_index, format!("horizontal face i={i} j={j}"), e)
            })?;
            fy.push(pair);
        }
    }

    let mut next = cur.clone();
    next.time = t + dt;
    {
        let cells = next.raw_mut();
        for j in 0..ny {
            for i in 0..nx {
                let w = &fx[j * (nx + 1) + i].flux;
                let e = &fx[j * (nx + 1) + i + 1].flux;
                let s = &fy[j * nx + i].flux;
                let n = &fy[(j + 1) * nx + i].flux;
                let k = (j + 1) * stride + i + 1;
                let u = cells[k];
                let net = [
                    len_x * (e.frho - w.frho) + len_y * (n.frho - s.frho),
                    len_x * (e.fmx - w.fmx) + len_y * (n.fmx - s.fmx),
                    len_x * (e.fmy - w.fmy) + len_y * (n.fmy - s.fmy),
                ];
                let updated = if sim {
                    Conservative::new(
                        (vol_old * u.rho - dt * net[0]) / vol_new,
                        (vol_old * u.mx - dt * net[1]) / vol_new,
                        (vol_old * u.my - dt * net[2]) / vol_new,
                    )
                } else {
                    let r = dt / vol_old;
                    Conservative::new(u.rho - r * net[0], u.mx - r * net[1], u.my - r * net[2])
                };
                if !updated.is_finite() || !(updated.rho > 0.0) {
                    return Err(Error::NonFinite {
                        i,
                        j,
                        step: opts.step_index,
                    });
                }
                cells[k] = updated;
            }
        }
    }

    let mut outflow = [0.0; 3];
    let add = |acc: &mut [f64; 3], f: &crate::riemann::EdgeFlux, w: f64| {
        acc[0] += w * f.frho;
        acc[1] += w * f.fmx;
        acc[2] += w * f.fmy;
    };
    for j in 0..ny {
        add(&mut outflow, &fx[j * (nx + 1)].flux, -dt * len_x);
        add(&mut outflow, &fx[j * (nx + 1) + nx].flux, dt * len_x);
    }
    for i in 0..nx {
        add(&mut outflow, &fy[i].flux, -dt * len_y);
        add(&mut outflow, &fy[ny * nx + i].flux, dt * len_y);
    }

    let edge_entropy = opts.entropy.then(|| EdgeEntropyFluxes {
        x: fx.iter().map(|p| p.entropy).collect(),
        y: fy.iter().map(|p| p.entropy).collect(),
    });
    let entropy_production = match &edge_entropy {
        Some(edges) => Some(crate::diagnostics::entropy_production(
            &cur,
            &next,
            dt,
            Some(edges),
            gas,
        )?),
        None => None,
    };

    Ok((
        next,
        StepReport {
            dt,
            max_wave_speed: max_speed,
            boundary_outflow: outflow,
            edge_entropy,
            entropy_production,
        },
    ))
}

pub fn step_standard(
    field: &FieldGrid,
    bc: &BoundarySpec,
    trigger: Option<&TriggerSpec>,
    scheme: &SchemeSpec,
    gas: &GasModel,
    dt: f64,
) -> Result<(FieldGrid, StepReport)> {
    if field.mode != CoordinateMode::Standard {
        return Err(Error::Usage("step_standard on a similarity-mode field".into()));
    }
    advance(field, bc, trigger, scheme, gas, dt, StepOptions::default())
}

pub fn step_similarity(
    field: &FieldGrid,
    bc: &BoundarySpec,
    trigger: Option<&TriggerSpec>,
    scheme: &SchemeSpec,
    gas: &GasModel,
    dt: f64,
) -> Result<(FieldGrid, StepReport)> {
    if !field.mode.is_similarity() {
        return Err(Error::Usage("step_similarity on a standard-mode field".into()));
    }
    advance(field, bc, trigger, scheme, gas, dt, StepOptions::default())
}
