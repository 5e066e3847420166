//! Run configurations, initial data for the plane-shock, filament and wedge
//! setups, and the time-stepping driver.

use crate::diagnostics::{
    entropy_tolerance, perturbation_metrics, shock_front, tip_angle, DiagnosticsRecord,
    DEFAULT_BETA_ROWS, DEFAULT_EPS_FRACTION,
};
use crate::error::{Error, Result};
use crate::gas::{normal_shock_downstream, wedge_shock_angles, GasModel, Primitive};
use crate::grid::{
    BoundarySpec, CoordinateMode, FieldGrid, GridGeometry, SideCondition, TriggerSpec, WallKind,
};
use crate::solver::{
    advance, cfl_dt, make_blend_mask, BlendKind, FluxKind, SchemeSpec, StepOptions, DEFAULT_CFL,
};

/// Oblique-shock branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Weak,
    Strong,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Weak => "weak",
            Branch::Strong => "strong",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeConfig {
    /// Half-angle of the still-gas sector, radians.
    pub alpha: f64,
    pub branch: Branch,
    pub mach_in: f64,
    pub rho_in: f64,
    pub gas: GasModel,
}

/// Initial data family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Setup {
    /// Plane shock, optionally with a filament.
    PlaneShock,
    /// Still-gas wedge sector behind an oblique shock, tip at `(tip_x, y_min)`.
    Wedge {
        /// Sector half-angle in degrees.
        alpha_deg: f64,
        branch: Branch,
        tip_x: f64,
    },
}

/// When snapshots (and diagnostics records) are taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnapshotPlan {
    /// Every `n` steps.
    Every(usize),
    /// At `t0 + k·dt`, steps clipped to land on them.
    Interval(f64),
    /// At `t0·r^k` (similarity runs), steps clipped to land on them.
    Ratio(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gas: GasModel,
    pub geom: GridGeometry,
    pub mode: CoordinateMode,
    pub bottom: WallKind,
    pub top: WallKind,
    pub setup: Setup,
    /// Filament row; `None` runs without a trigger.
    pub trigger_row: Option<usize>,
    pub flux: FluxKind,
    pub cfl: f64,
    pub blend: BlendKind,
    pub rho_in: f64,
    pub mach_in: f64,
    /// Requested shock abscissa; snapped to the nearest vertical face.
    pub shock_x: f64,
    pub t_end: f64,
    pub max_steps: Option<usize>,
    pub snapshots: SnapshotPlan,
    /// Detection threshold; `None` means 1% of the inflow speed.
    pub eps_c: Option<f64>,
    pub beta_rows: usize,
    /// Track per-cell entropy production every step.
    pub entropy: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            gas: GasModel::default(),
            geom: GridGeometry {
                nx: 240,
                ny: 120,
                x_min: 0.0,
                x_max: 2.0,
                y_min: 0.0,
                y_max: 1.0,
            },
            mode: CoordinateMode::Standard,
            bottom: WallKind::Wall,
            top: WallKind::Wall,
            setup: Setup::PlaneShock,
            trigger_row: None,
            flux: FluxKind::Godunov,
            cfl: DEFAULT_CFL,
            blend: BlendKind::None,
            rho_in: 1.0,
            mach_in: 3.0,
            shock_x: 1.5,
            t_end: 1.0,
            max_steps: None,
            snapshots: SnapshotPlan::Every(100),
            eps_c: None,
            beta_rows: DEFAULT_BETA_ROWS,
            entropy: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.geom.validate()?;
        GasModel::new(self.gas.gamma, self.gas.kappa)?;
        if !(self.rho_in > 0.0 && self.rho_in.is_finite()) {
            return Err(Error::Usage(format!("rho_in must be positive, got {}", self.rho_in)));
        }
        if !(self.mach_in > 1.0 && self.mach_in.is_finite()) {
            return Err(Error::Usage(format!("mach_in must exceed 1, got {}", self.mach_in)));
        }
        if let Setup::PlaneShock = self.setup {
            if !(self.shock_x > self.geom.x_min && self.shock_x < self.geom.x_max) {
                return Err(Error::Usage(format!(
                    "shock_x {} outside ({}, {})",
                    self.shock_x, self.geom.x_min, self.geom.x_max
                )));
            }
        }
        if let Setup::Wedge { alpha_deg, tip_x, .. } = self.setup {
            if !(alpha_deg > 0.0 && alpha_deg < 90.0) {
                return Err(Error::Usage(format!("wedge angle {alpha_deg} deg outside (0, 90)")));
            }
            if !(tip_x >= self.geom.x_min && tip_x < self.geom.x_max) {
                return Err(Error::Usage(format!("wedge tip {tip_x} outside the domain")));
            }
        }
        if let CoordinateMode::Similarity { t0 } = self.mode {
            if !(t0 > 0.0 && t0.is_finite()) {
                return Err(Error::Usage(format!("similarity start time must be positive, got {t0}")));
            }
        }
        if let Some(row) = self.trigger_row {
            if row >= self.geom.ny {
                return Err(Error::Usage(format!("trigger row {row} outside 0..{}", self.geom.ny)));
            }
        }
        let t0 = self.mode.start_time();
        if !(self.t_end >= t0) {
            return Err(Error::Usage(format!("t_end {} before start time {t0}", self.t_end)));
        }
        match self.snapshots {
            SnapshotPlan::Every(0) => return Err(Error::Usage("snapshot_every must be positive".into())),
            SnapshotPlan::Interval(d) if !(d > 0.0 && d.is_finite()) => {
                return Err(Error::Usage("snapshot interval must be positive".into()))
            }
            SnapshotPlan::Ratio(r) if !(r > 1.0 && r.is_finite()) => {
                return Err(Error::Usage("snapshot ratio must exceed 1".into()))
            }
            SnapshotPlan::Ratio(_) if !self.mode.is_similarity() => {
                return Err(Error::Usage("snapshot ratio needs similarity mode".into()))
            }
            _ => {}
        }
        if let Some(e) = self.eps_c {
            if !(e > 0.0) {
                return Err(Error::Usage("eps_c must be positive".into()));
            }
        }
        if self.beta_rows < 2 {
            return Err(Error::Usage("beta_rows must be at least 2".into()));
        }
        self.scheme()?;
        Ok(())
    }

    pub fn inflow(&self) -> Result<Primitive> {
        let c = self.gas.sound_speed(self.rho_in)?;
        Ok(Primitive::new(self.rho_in, self.mach_in * c, 0.0))
    }

    pub fn scheme(&self) -> Result<SchemeSpec> {
        let s = SchemeSpec {
            flux: self.flux,
            blend_mask: make_blend_mask(self.blend, &self.geom)?,
            cfl: self.cfl,
        };
        s.validate()?;
        Ok(s)
    }

    /// Shock abscissa after snapping to the nearest vertical face.
    pub fn snapped_shock_x(&self) -> f64 {
        self.geom.face_x(self.geom.nearest_face(self.shock_x))
    }

    pub fn eps_c(&self) -> Result<f64> {
        Ok(self.eps_c.unwrap_or(DEFAULT_EPS_FRACTION * self.inflow()?.ux.abs()))
    }

    pub fn trigger(&self) -> Option<TriggerSpec> {
        self.trigger_row.map(|row| TriggerSpec {
            row,
            extent_x: self.snapped_shock_x(),
        })
    }

    /// Same run on a grid refined by `factor` in both directions; the
    /// filament keeps its lower edge and becomes `factor` times thinner.
    pub fn refined(&self, factor: usize) -> RunConfig {
        RunConfig {
            geom: self.geom.refined(factor),
            trigger_row: self.trigger_row.map(|r| r * factor),
            max_steps: self.max_steps.map(|n| n * factor),
            snapshots: match self.snapshots {
                SnapshotPlan::Every(n) => SnapshotPlan::Every(n * factor),
                other => other,
            },
            ..self.clone()
        }
    }

    pub fn wedge_config(&self) -> Option<WedgeConfig> {
        match self.setup {
            Setup::Wedge { alpha_deg, branch, .. } => Some(WedgeConfig {
                alpha: alpha_deg.to_radians(),
                branch,
                mach_in: self.mach_in,
                rho_in: self.rho_in,
                gas: self.gas,
            }),
            Setup::PlaneShock => None,
        }
    }
}

/// Two-state field with the shock on the vertical face nearest `shock_x`,
/// plus the matching inflow and outflow pseudo-cell states.
pub fn build_plane_shock(config: &RunConfig) -> Result<(FieldGrid, BoundarySpec)> {
    config.geom.validate()?;
    let left = config.inflow()?;
    let right = normal_shock_downstream(&left, &config.gas)?;
    let xs = config.snapped_shock_x();
    let field = FieldGrid::from_fn(config.geom, config.mode, |x, _| if x < xs { left } else { right })?;
    let bc = BoundarySpec {
        left: SideCondition::Fixed(left),
        right: SideCondition::Fixed(right),
        bottom: config.bottom,
        top: config.top,
    };
    Ok((field, bc))
}

/// Plane shock with the filament applied at the configured row (the centre
/// row when none is set).
pub fn build_filament_standard(config: &RunConfig) -> Result<(FieldGrid, BoundarySpec, TriggerSpec)> {
    if config.mode != CoordinateMode::Standard {
        return Err(Error::Usage("filament-standard needs standard coordinates".into()));
    }
    let row = config.trigger_row.unwrap_or(config.geom.ny / 2);
    filament(config, row)
}

/// Half-plane plane shock in similarity coordinates with the filament on the
/// bottom row by default.
pub fn build_filament_similarity(config: &RunConfig) -> Result<(FieldGrid, BoundarySpec, TriggerSpec)> {
    if !config.mode.is_similarity() {
        return Err(Error::Usage("filament-similarity needs similarity coordinates".into()));
    }
    if config.bottom != WallKind::Symmetry {
        return Err(Error::Usage("filament-similarity needs a symmetry bottom boundary".into()));
    }
    let row = config.trigger_row.unwrap_or(0);
    filament(config, row)
}

fn filament(config: &RunConfig, row: usize) -> Result<(FieldGrid, BoundarySpec, TriggerSpec)> {
    let (mut field, mut bc) = build_plane_shock(config)?;
    let trigger = TriggerSpec {
        row,
        extent_x: config.snapped_shock_x(),
    };
    trigger.validate(&config.geom)?;
    field.apply_filament(&trigger);
    if config.bottom == WallKind::Wall && row == 0 {
        bc.bottom = WallKind::WallWithFilament;
    }
    Ok((field, bc, trigger))
}

/// Still gas in the sector `0 <= y - y_min <= (x - tip_x)·tan(alpha)`,
/// oblique-shock downstream flow between the sector edge and the shock ray at
/// the branch's angle, inflow elsewhere. Regions are assigned at cell centres.
pub fn build_wedge_nuq(
    config: &WedgeConfig,
    geom: &GridGeometry,
    mode: CoordinateMode,
    tip_x: f64,
) -> Result<FieldGrid> {
    let c = config.gas.sound_speed(config.rho_in)?;
    let inflow = Primitive::new(config.rho_in, config.mach_in * c, 0.0);
    let sol = wedge_shock_angles(config.alpha, &inflow, &config.gas)?;
    let (sigma, down) = match config.branch {
        Branch::Weak => (sol.sigma_weak, sol.downstream_weak),
        Branch::Strong => (sol.sigma_strong, sol.downstream_strong),
    };
    let still = Primitive::new(down.rho, 0.0, 0.0);
    let (ta, ts) = (config.alpha.tan(), sigma.tan());
    let y0 = geom.y_min;
    FieldGrid::from_fn(*geom, mode, |x, y| {
        let (dx, dy) = (x - tip_x, y - y0);
        if dx <= 0.0 {
            inflow
        } else if dy <= dx * ta {
            still
        } else if sigma >= std::f64::consts::FRAC_PI_2 || dy <= dx * ts {
            down
        } else {
            inflow
        }
    })
}

/// Inflow on the left; the initial data's last column frozen on the right.
pub fn wedge_boundary(field: &FieldGrid, inflow: Primitive, bottom: WallKind, top: WallKind) -> BoundarySpec {
    let nx = field.geom.nx;
    BoundarySpec {
        left: SideCondition::Fixed(inflow),
        right: SideCondition::Column((0..field.geom.ny).map(|j| field.primitive(nx - 1, j)).collect()),
        bottom,
        top,
    }
}

/// Everything needed to start stepping.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub initial: FieldGrid,
    /// Unperturbed field the perturbation metrics are measured against.
    pub reference: FieldGrid,
    pub bc: BoundarySpec,
    pub trigger: Option<TriggerSpec>,
    pub scheme: SchemeSpec,
}

pub fn prepare(config: &RunConfig) -> Result<Prepared> {
    config.validate()?;
    let scheme = config.scheme()?;
    match config.setup {
        Setup::PlaneShock => {
            let (reference, _) = build_plane_shock(config)?;
            let (initial, bc, trigger) = match config.trigger_row {
                None => {
                    let (f, bc) = build_plane_shock(config)?;
                    (f, bc, None)
                }
                Some(_) if config.mode.is_similarity() => {
                    let (f, bc, t) = build_filament_similarity(config)?;
                    (f, bc, Some(t))
                }
                Some(_) => {
                    let (f, bc, t) = build_filament_standard(config)?;
                    (f, bc, Some(t))
                }
            };
            Ok(Prepared {
                initial,
                reference,
                bc,
                trigger,
                scheme,
            })
        }
        Setup::Wedge { tip_x, .. } => {
            let wc = config.wedge_config().expect("wedge setup");
            let initial = build_wedge_nuq(&wc, &config.geom, config.mode, tip_x)?;
            let bc = wedge_boundary(&initial, config.inflow()?, config.bottom, config.top);
            let trigger = config.trigger();
            Ok(Prepared {
                reference: initial.clone(),
                initial,
                bc,
                trigger,
                scheme,
            })
        }
    }
}

/// Summary returned by the driver.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub steps: usize,
    pub final_time: f64,
    /// Largest entropy production over all steps and cells, when tracked.
    pub max_entropy_production: Option<f64>,
    /// Largest entropy production relative to its per-step tolerance.
    pub max_entropy_ratio: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<FieldGrid>,
    pub records: Vec<DiagnosticsRecord>,
    pub summary: RunSummary,
}

fn make_record(
    field: &FieldGrid,
    reference: &FieldGrid,
    eps_c: f64,
    beta_rows: usize,
    entropy: Option<(f64, f64)>,
) -> Result<DiagnosticsRecord> {
    let m = perturbation_metrics(field, reference, eps_c)?;
    let front = shock_front(field);
    let beta = front.leftmost_row().and_then(|row| tip_angle(&front, row, beta_rows));
    Ok(DiagnosticsRecord {
        time: field.time,
        l1_perturbation: m.l1,
        extent: m.extent,
        extent_height: m.extent_height,
        max_entropy_production: entropy.map(|e| e.0),
        entropy_ratio: entropy.map(|e| e.1),
        shock_front: front.x,
        tip_angle_beta: beta,
    })
}

/// Runs a configuration, handing every snapshot and its record to `observe`
/// as it is produced. The first snapshot is the initial data; the last is the
/// final state.
pub fn run_experiment_with<F>(config: &RunConfig, mut observe: F) -> Result<RunSummary>
where
    F: FnMut(&FieldGrid, &DiagnosticsRecord) -> Result<()>,
{
    let prep = prepare(config)?;
    let eps_c = config.eps_c()?;
    let gas = config.gas;
    let t0 = config.mode.start_time();
    let mut field = prep.initial.clone();
    field.fill_ghosts(&prep.bc, prep.trigger.as_ref());

    let first = make_record(&field, &prep.reference, eps_c, config.beta_rows, config.entropy.then_some((0.0, 0.0)))?;
    observe(&field, &first)?;

    let mut steps = 0usize;
    let mut next_k = 1usize;
    let target = |k: usize| -> Option<f64> {
        match config.snapshots {
            SnapshotPlan::Every(_) => None,
            SnapshotPlan::Interval(d) => Some(t0 + k as f64 * d),
            SnapshotPlan::Ratio(r) => Some(t0 * r.powi(k as i32)),
        }
    };
    let mut window = config.entropy.then_some((f64::NEG_INFINITY, 0.0f64));
    let mut overall = window;
    let mut last_recorded = field.time;

    loop {
        let done_time = field.time >= config.t_end;
        let done_steps = config.max_steps.is_some_and(|n| steps >= n);
        if done_time || done_steps {
            break;
        }
        let mut dt = cfl_dt(&field, &prep.scheme, &gas)?;
        let mut snap_due = false;
        if let Some(ts) = target(next_k) {
            if field.time + dt >= ts {
                dt = ts - field.time;
                snap_due = true;
            }
        }
        if field.time + dt >= config.t_end {
            dt = config.t_end - field.time;
            snap_due = true;
        }
        let opts = StepOptions {
            entropy: config.entropy,
            step_index: steps,
        };
        let (mut next, report) = advance(&field, &prep.bc, prep.trigger.as_ref(), &prep.scheme, &gas, dt, opts)?;
        if snap_due {
            // Land exactly on the target time.
            next.time = if field.time + dt >= config.t_end {
                config.t_end
            } else {
                target(next_k).unwrap_or(next.time)
            };
        }
        if let (Some(prod), Some(w)) = (&report.entropy_production, window.as_mut()) {
            let tol = entropy_tolerance(&field, &next, dt, &gas);
            let max = prod.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            w.0 = w.0.max(max);
            w.1 = w.1.max(max / tol);
        }
        field = next;
        field.fill_ghosts(&prep.bc, prep.trigger.as_ref());
        steps += 1;

        let every_due = matches!(config.snapshots, SnapshotPlan::Every(n) if steps % n == 0);
        let last = field.time >= config.t_end || config.max_steps.is_some_and(|n| steps >= n);
        if snap_due || every_due || last {
            if snap_due && target(next_k).is_some_and(|ts| field.time >= ts) {
                next_k += 1;
            }
            if field.time > last_recorded {
                let rec = make_record(&field, &prep.reference, eps_c, config.beta_rows, window)?;
                observe(&field, &rec)?;
                last_recorded = field.time;
                if let (Some(o), Some(w)) = (overall.as_mut(), window) {
                    o.0 = o.0.max(w.0);
                    o.1 = o.1.max(w.1);
                }
                window = window.map(|_| (f64::NEG_INFINITY, 0.0));
            }
        }
    }

    Ok(RunSummary {
        steps,
        final_time: field.time,
        max_entropy_production: overall.map(|o| o.0),
        max_entropy_ratio: overall.map(|o| o.1),
    })
}

/// Runs a configuration and keeps every snapshot in memory.
pub fn run_experiment(config: &RunConfig) -> Result<RunOutput> {
    let mut snapshots = Vec::new();
    let mut records = Vec::new();
    let summary = run_experiment_with(config, |f, r| {
        snapshots.push(f.clone());
        records.push(r.clone());
        Ok(())
    })?;
    Ok(RunOutput {
        snapshots,
        records,
        summary,
    })
}

/// Named preset configurations.
pub const PRESETS: [&str; 6] = [
    "plane-shock",
    "filament-standard",
    "filament-similarity",
    "wedge-nuq",
    "mach-sweep",
    "refine-study",
];

/// Sweep over variants of one base configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    Mach(Vec<f64>),
    Refine(Vec<usize>),
}

impl Sweep {
    /// `(subdirectory name, configuration)` per variant.
    pub fn variants(&self, base: &RunConfig) -> Vec<(String, RunConfig)> {
        match self {
            Sweep::Mach(ms) => ms
                .iter()
                .map(|&m| {
                    (
                        format!("mach-{m}"),
                        RunConfig {
                            mach_in: m,
                            ..base.clone()
                        },
                    )
                })
                .collect(),
            Sweep::Refine(fs) => fs.iter().map(|&f| (format!("refine-{f}"), base.refined(f))).collect(),
        }
    }
}

/// Standard-coordinate filament run.
pub fn filament_standard_config() -> RunConfig {
    RunConfig {
        trigger_row: Some(60),
        t_end: 0.3,
        snapshots: SnapshotPlan::Interval(0.015),
        ..RunConfig::default()
    }
}

/// Half-plane filament run in similarity coordinates.
pub fn filament_similarity_config() -> RunConfig {
    RunConfig {
        geom: GridGeometry {
            nx: 320,
            ny: 160,
            x_min: -4.0,
            x_max: 2.4,
            y_min: 0.0,
            y_max: 3.2,
        },
        mode: CoordinateMode::Similarity { t0: 1.0 },
        bottom: WallKind::Symmetry,
        top: WallKind::Wall,
        trigger_row: Some(0),
        shock_x: 0.0,
        // 1.25^13: the last snapshot lands on t_end
        t_end: 18.189894035458565,
        snapshots: SnapshotPlan::Ratio(1.25),
        ..RunConfig::default()
    }
}

pub fn plane_shock_config() -> RunConfig {
    RunConfig {
        t_end: 1e9,
        max_steps: Some(1000),
        snapshots: SnapshotPlan::Every(100),
        ..RunConfig::default()
    }
}

pub fn wedge_config() -> RunConfig {
    RunConfig {
        geom: GridGeometry {
            nx: 320,
            ny: 160,
            x_min: -3.0,
            x_max: 7.0,
            y_min: 0.0,
            y_max: 5.0,
        },
        mode: CoordinateMode::Similarity { t0: 1.0 },
        bottom: WallKind::Symmetry,
        top: WallKind::Wall,
        setup: Setup::Wedge {
            alpha_deg: 10.0,
            branch: Branch::Weak,
            tip_x: 0.0,
        },
        // 1.25^6
        t_end: 3.814697265625,
        snapshots: SnapshotPlan::Ratio(1.25),
        ..RunConfig::default()
    }
}

/// Base configuration and optional sweep of a named preset.
pub fn preset(name: &str) -> Result<(RunConfig, Option<Sweep>)> {
    Ok(match name {
        "plane-shock" => (plane_shock_config(), None),
        "filament-standard" => (filament_standard_config(), None),
        "filament-similarity" => (filament_similarity_config(), None),
        "wedge-nuq" => (wedge_config(), None),
        "mach-sweep" => (filament_standard_config(), Some(Sweep::Mach(vec![1.2, 1.4, 2.0, 3.0]))),
        "refine-study" => (filament_standard_config(), Some(Sweep::Refine(vec![1, 2]))),
        other => {
            return Err(Error::Usage(format!(
                "unknown preset `{other}`; expected one of {}",
                PRESETS.join(", ")
            )))
        }
    })
}
