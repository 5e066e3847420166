//! Config files, snapshot and diagnostics files, run manifests.
//!
//! Configs are flat `key = value` lines with `#` comments. Floating-point
//! values are written in shortest round-trip form, so a rendered config parses
//! back to the identical `RunConfig`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::experiments::{run_experiment_with, Branch, RunConfig, RunSummary, Setup, SnapshotPlan, Sweep};
use crate::gas::{Conservative, GasModel, Primitive};
use crate::grid::{CoordinateMode, FieldGrid, GridGeometry, WallKind};
use crate::solver::{BlendKind, FluxKind};

pub const SNAPSHOT_HEADER: &str = "i,j,c1,c2,rho,ux,uy,p";
pub const DIAGNOSTICS_HEADER: &str =
    "time,l1_perturbation,extent_xmin,extent_xmax,extent_ymin,extent_ymax,extent_height,max_entropy_production,tip_angle_beta";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";

/// Every accepted key, in rendering order.
pub const KEYS: &[&str] = &[
    "gas.gamma",
    "gas.kappa",
    "grid.nx",
    "grid.ny",
    "grid.x_min",
    "grid.x_max",
    "grid.y_min",
    "grid.y_max",
    "mode",
    "mode.t0",
    "scheme.flux",
    "scheme.cfl",
    "scheme.blend.kind",
    "scheme.blend.y_cut",
    "scheme.blend.theta_max",
    "bc.bottom",
    "bc.top",
    "trigger.row",
    "run.setup",
    "run.rho_in",
    "run.mach_in",
    "run.shock_x",
    "run.t_end",
    "run.max_steps",
    "run.snapshot_every",
    "run.snapshot_interval",
    "run.snapshot_ratio",
    "wedge.alpha_deg",
    "wedge.branch",
    "wedge.tip_x",
    "diag.eps_c",
    "diag.beta_rows",
    "diag.entropy",
    "sweep.mach_list",
    "sweep.refine_list",
    "out.dir",
];

/// Shortest decimal text that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// A parsed config file.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub run: RunConfig,
    pub sweep: Option<Sweep>,
    pub out_dir: PathBuf,
    /// Keys that were absent and took their default value.
    pub defaulted: Vec<&'static str>,
}

impl Config {
    pub fn new(run: RunConfig, sweep: Option<Sweep>, out_dir: impl Into<PathBuf>) -> Config {
        Config {
            run,
            sweep,
            out_dir: out_dir.into(),
            defaulted: Vec::new(),
        }
    }
}

struct Entry<'a> {
    line: usize,
    value: &'a str,
}

struct Reader<'a> {
    entries: HashMap<&'static str, Entry<'a>>,
    defaulted: Vec<&'static str>,
}

impl<'a> Reader<'a> {
    fn err(&self, key: &str, msg: impl Into<String>) -> Error {
        Error::Config {
            line: self.entries.get(key).map_or(0, |e| e.line),
            key: key.to_string(),
            msg: msg.into(),
        }
    }

    fn raw(&mut self, key: &'static str) -> Option<&'a str> {
        match self.entries.get(key) {
            Some(e) => Some(e.value),
            None => {
                // An absent sweep is no sweep rather than a default value.
                if !key.starts_with("sweep.") {
                    self.defaulted.push(key);
                }
                None
            }
        }
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn f64(&mut self, key: &'static str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => parse_f64(v).ok_or_else(|| self.err(key, format!("malformed number `{v}`"))),
        }
    }

    fn usize(&mut self, key: &'static str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| self.err(key, format!("malformed integer `{v}`"))),
        }
    }

    fn opt_usize(&mut self, key: &'static str, default: Option<usize>) -> Result<Option<usize>> {
        match self.raw(key) {
            None => Ok(default),
            Some("none") => Ok(None),
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| self.err(key, format!("expected an integer or `none`, got `{v}`"))),
        }
    }

    fn word(&mut self, key: &'static str, default: &'a str, allowed: &[&str]) -> Result<&'a str> {
        let v = self.raw(key).unwrap_or(default);
        if allowed.contains(&v) {
            Ok(v)
        } else {
            Err(self.err(key, format!("expected one of {}, got `{v}`", allowed.join(" | "))))
        }
    }

    fn list<T: std::str::FromStr>(&mut self, key: &'static str) -> Result<Option<Vec<T>>> {
        match self.raw(key) {
            None | Some("none") => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<T>())
                .collect::<std::result::Result<Vec<T>, _>>()
                .map(Some)
                .map_err(|_| self.err(key, format!("malformed list `{v}`"))),
        }
    }

    /// Rejects a key that does not apply to the chosen options.
    fn forbid(&self, key: &str, why: &str) -> Result<()> {
        if self.has(key) {
            Err(self.err(key, format!("not allowed {why}")))
        } else {
            Ok(())
        }
    }
}

fn parse_f64(v: &str) -> Option<f64> {
    let ok = !v.is_empty()
        && v
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'));
    if ok {
        v.parse::<f64>().ok().filter(|x| x.is_finite())
    } else {
        None
    }
}

/// Parses and validates a config. Errors name the offending key and line.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut entries: HashMap<&'static str, Entry> = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content.split_once('=').ok_or_else(|| Error::Config {
            line,
            key: content.to_string(),
            msg: "expected `key = value`".into(),
        })?;
        let (k, v) = (k.trim(), v.trim());
        let key = *KEYS.iter().find(|&&known| known == k).ok_or_else(|| Error::Config {
            line,
            key: k.to_string(),
            msg: "unknown key".into(),
        })?;
        if let Some(prev) = entries.get(key) {
            return Err(Error::Config {
                line,
                key: key.to_string(),
                msg: format!("duplicate key, first set on line {}", prev.line),
            });
        }
        entries.insert(key, Entry { line, value: v });
    }
    let mut r = Reader {
        entries,
        defaulted: Vec::new(),
    };
    let d = RunConfig::default();

    let gamma = r.f64("gas.gamma", d.gas.gamma)?;
    if !(gamma > 1.0) {
        return Err(r.err("gas.gamma", format!("must exceed 1, got {gamma}")));
    }
    let kappa = r.f64("gas.kappa", d.gas.kappa)?;
    if !(kappa > 0.0) {
        return Err(r.err("gas.kappa", format!("must be positive, got {kappa}")));
    }
    let gas = GasModel::new(gamma, kappa)?;

    let nx = r.usize("grid.nx", d.geom.nx)?;
    let ny = r.usize("grid.ny", d.geom.ny)?;
    for (key, n) in [("grid.nx", nx), ("grid.ny", ny)] {
        if n < 2 {
            return Err(r.err(key, "needs at least 2 cells"));
        }
    }
    let x_min = r.f64("grid.x_min", d.geom.x_min)?;
    let x_max = r.f64("grid.x_max", d.geom.x_max)?;
    let y_min = r.f64("grid.y_min", d.geom.y_min)?;
    let y_max = r.f64("grid.y_max", d.geom.y_max)?;
    if !(x_max > x_min) {
        return Err(r.err("grid.x_max", "must exceed grid.x_min"));
    }
    if !(y_max > y_min) {
        return Err(r.err("grid.y_max", "must exceed grid.y_min"));
    }
    let geom = GridGeometry::new(nx, ny, (x_min, x_max), (y_min, y_max))?;

    let mode = match r.word("mode", "standard", &["standard", "similarity"])? {
        "similarity" => {
            let t0 = r.f64("mode.t0", 1.0)?;
            if !(t0 > 0.0) {
                return Err(r.err("mode.t0", "must be positive"));
            }
            CoordinateMode::Similarity { t0 }
        }
        _ => {
            r.forbid("mode.t0", "in standard mode")?;
            CoordinateMode::Standard
        }
    };

    let flux = match r.word("scheme.flux", "godunov", &["godunov", "rusanov"])? {
        "rusanov" => FluxKind::Rusanov,
        _ => FluxKind::Godunov,
    };
    let cfl = r.f64("scheme.cfl", d.cfl)?;
    if !(cfl > 0.0 && cfl <= crate::solver::MAX_CFL) {
        return Err(r.err("scheme.cfl", format!("must lie in (0, {}]", crate::solver::MAX_CFL)));
    }
    let blend = match r.word("scheme.blend.kind", "none", &["none", "band"])? {
        "band" => {
            let y_cut = r.f64("scheme.blend.y_cut", 0.5 * (y_min + y_max))?;
            if !(y_cut >= y_min && y_cut <= y_max) {
                return Err(r.err("scheme.blend.y_cut", "must lie inside the grid"));
            }
            let theta_max = r.f64("scheme.blend.theta_max", 1.0)?;
            if !(0.0..=1.0).contains(&theta_max) {
                return Err(r.err("scheme.blend.theta_max", "must lie in [0, 1]"));
            }
            BlendKind::Band { y_cut, theta_max }
        }
        _ => {
            r.forbid("scheme.blend.y_cut", "without scheme.blend.kind = band")?;
            r.forbid("scheme.blend.theta_max", "without scheme.blend.kind = band")?;
            BlendKind::None
        }
    };

    let wall = |w: &str| if w == "symmetry" { WallKind::Symmetry } else { WallKind::Wall };
    let bottom = wall(r.word("bc.bottom", "wall", &["wall", "symmetry"])?);
    let top = wall(r.word("bc.top", "wall", &["wall", "symmetry"])?);

    let trigger_row = r.opt_usize("trigger.row", None)?;
    if let Some(row) = trigger_row {
        if row >= ny {
            return Err(r.err("trigger.row", format!("row {row} outside 0..{ny}")));
        }
    }

    let rho_in = r.f64("run.rho_in", d.rho_in)?;
    if !(rho_in > 0.0) {
        return Err(r.err("run.rho_in", "must be positive"));
    }
    let mach_in = r.f64("run.mach_in", d.mach_in)?;
    if !(mach_in > 1.0) {
        return Err(r.err("run.mach_in", format!("must exceed 1, got {mach_in}")));
    }

    let setup_word = r.word("run.setup", "plane-shock", &["plane-shock", "wedge"])?;
    let default_shock = 0.75 * x_min + 0.25 * x_max;
    let default_shock = if (x_min..x_max).contains(&d.shock_x) { d.shock_x } else { default_shock };
    let (setup, shock_x) = if setup_word == "wedge" {
        r.forbid("run.shock_x", "with run.setup = wedge")?;
        let alpha_deg = r.f64("wedge.alpha_deg", 10.0)?;
        if !(alpha_deg > 0.0 && alpha_deg < 90.0) {
            return Err(r.err("wedge.alpha_deg", "must lie in (0, 90)"));
        }
        let branch = match r.word("wedge.branch", "weak", &["weak", "strong"])? {
            "strong" => Branch::Strong,
            _ => Branch::Weak,
        };
        let tip_x = r.f64("wedge.tip_x", x_min + 0.3 * (x_max - x_min))?;
        if !(tip_x >= x_min && tip_x < x_max) {
            return Err(r.err("wedge.tip_x", "must lie inside the grid"));
        }
        (
            Setup::Wedge {
                alpha_deg,
                branch,
                tip_x,
            },
            default_shock,
        )
    } else {
        for k in ["wedge.alpha_deg", "wedge.branch", "wedge.tip_x"] {
            r.forbid(k, "without run.setup = wedge")?;
        }
        let shock_x = r.f64("run.shock_x", default_shock)?;
        if !(shock_x > x_min && shock_x < x_max) {
            return Err(r.err("run.shock_x", "must lie strictly inside the grid"));
        }
        (Setup::PlaneShock, shock_x)
    };

    let t0 = mode.start_time();
    let t_end = r.f64("run.t_end", t0 + d.t_end)?;
    if !(t_end >= t0) {
        return Err(r.err("run.t_end", format!("must not precede the start time {t0}")));
    }
    let max_steps = r.opt_usize("run.max_steps", None)?;

    let plan_keys = ["run.snapshot_every", "run.snapshot_interval", "run.snapshot_ratio"];
    let given: Vec<&str> = plan_keys.iter().copied().filter(|k| r.has(k)).collect();
    if given.len() > 1 {
        return Err(r.err(given[1], format!("conflicts with {}", given[0])));
    }
    let snapshots = match given.first().copied() {
        Some("run.snapshot_interval") => {
            let v = r.f64("run.snapshot_interval", 0.0)?;
            if !(v > 0.0) {
                return Err(r.err("run.snapshot_interval", "must be positive"));
            }
            SnapshotPlan::Interval(v)
        }
        Some("run.snapshot_ratio") => {
            let v = r.f64("run.snapshot_ratio", 0.0)?;
            if !(v > 1.0) {
                return Err(r.err("run.snapshot_ratio", "must exceed 1"));
            }
            if !mode.is_similarity() {
                return Err(r.err("run.snapshot_ratio", "needs mode = similarity"));
            }
            SnapshotPlan::Ratio(v)
        }
        _ => {
            let n = r.usize("run.snapshot_every", 100)?;
            if n == 0 {
                return Err(r.err("run.snapshot_every", "must be positive"));
            }
            SnapshotPlan::Every(n)
        }
    };

    let eps_c = match r.raw("diag.eps_c") {
        None | Some("auto") => None,
        Some(v) => match parse_f64(v) {
            Some(e) if e > 0.0 => Some(e),
            _ => return Err(r.err("diag.eps_c", format!("expected a positive number or `auto`, got `{v}`"))),
        },
    };
    let beta_rows = r.usize("diag.beta_rows", d.beta_rows)?;
    if beta_rows < 2 {
        return Err(r.err("diag.beta_rows", "must be at least 2"));
    }
    let entropy = r.word("diag.entropy", "false", &["true", "false"])? == "true";

    let machs = r.list::<f64>("sweep.mach_list")?;
    let refines = r.list::<usize>("sweep.refine_list")?;
    let sweep = match (machs, refines) {
        (Some(_), Some(_)) => return Err(r.err("sweep.refine_list", "conflicts with sweep.mach_list")),
        (Some(ms), None) => {
            if ms.is_empty() || ms.iter().any(|&m| !(m > 1.0 && m.is_finite())) {
                return Err(r.err("sweep.mach_list", "every Mach number must exceed 1"));
            }
            Some(Sweep::Mach(ms))
        }
        (None, Some(fs)) => {
            if fs.is_empty() || fs.contains(&0) {
                return Err(r.err("sweep.refine_list", "factors must be positive"));
            }
            Some(Sweep::Refine(fs))
        }
        (None, None) => None,
    };

    let out_dir = PathBuf::from(r.raw("out.dir").unwrap_or("out"));

    let run = RunConfig {
        gas,
        geom,
        mode,
        bottom,
        top,
        setup,
        trigger_row,
        flux,
        cfl,
        blend,
        rho_in,
        mach_in,
        shock_x,
        t_end,
        max_steps,
        snapshots,
        eps_c,
        beta_rows,
        entropy,
    };
    run.validate().map_err(|e| Error::Config {
        line: 0,
        key: "config".into(),
        msg: e.to_string(),
    })?;
    Ok(Config {
        run,
        sweep,
        out_dir,
        defaulted: r.defaulted,
    })
}

/// Full config text with every applicable key set explicitly.
pub fn render_config(cfg: &Config) -> String {
    let r = &cfg.run;
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("gas.gamma", fmt_f64(r.gas.gamma));
    kv("gas.kappa", fmt_f64(r.gas.kappa));
    kv("grid.nx", r.geom.nx.to_string());
    kv("grid.ny", r.geom.ny.to_string());
    kv("grid.x_min", fmt_f64(r.geom.x_min));
    kv("grid.x_max", fmt_f64(r.geom.x_max));
    kv("grid.y_min", fmt_f64(r.geom.y_min));
    kv("grid.y_max", fmt_f64(r.geom.y_max));
    match r.mode {
        CoordinateMode::Standard => kv("mode", "standard".into()),
        CoordinateMode::Similarity { t0 } => {
            kv("mode", "similarity".into());
            kv("mode.t0", fmt_f64(t0));
        }
    }
    kv("scheme.flux", r.flux.name().into());
    kv("scheme.cfl", fmt_f64(r.cfl));
    match r.blend {
        BlendKind::None => kv("scheme.blend.kind", "none".into()),
        BlendKind::Band { y_cut, theta_max } => {
            kv("scheme.blend.kind", "band".into());
            kv("scheme.blend.y_cut", fmt_f64(y_cut));
            kv("scheme.blend.theta_max", fmt_f64(theta_max));
        }
    }
    let wall = |w: WallKind| if w == WallKind::Symmetry { "symmetry" } else { "wall" };
    kv("bc.bottom", wall(r.bottom).into());
    kv("bc.top", wall(r.top).into());
    kv("trigger.row", r.trigger_row.map_or("none".into(), |v| v.to_string()));
    match r.setup {
        Setup::PlaneShock => {
            kv("run.setup", "plane-shock".into());
        }
        Setup::Wedge { .. } => kv("run.setup", "wedge".into()),
    }
    kv("run.rho_in", fmt_f64(r.rho_in));
    kv("run.mach_in", fmt_f64(r.mach_in));
    if r.setup == Setup::PlaneShock {
        kv("run.shock_x", fmt_f64(r.shock_x));
    }
    kv("run.t_end", fmt_f64(r.t_end));
    kv("run.max_steps", r.max_steps.map_or("none".into(), |v| v.to_string()));
    match r.snapshots {
        SnapshotPlan::Every(n) => kv("run.snapshot_every", n.to_string()),
        SnapshotPlan::Interval(d) => kv("run.snapshot_interval", fmt_f64(d)),
        SnapshotPlan::Ratio(q) => kv("run.snapshot_ratio", fmt_f64(q)),
    }
    if let Setup::Wedge {
        alpha_deg,
        branch,
        tip_x,
    } = r.setup
    {
        kv("wedge.alpha_deg", fmt_f64(alpha_deg));
        kv("wedge.branch", branch.name().into());
        kv("wedge.tip_x", fmt_f64(tip_x));
    }
    kv("diag.eps_c", r.eps_c.map_or("auto".into(), fmt_f64));
    kv("diag.beta_rows", r.beta_rows.to_string());
    kv("diag.entropy", r.entropy.to_string());
    match &cfg.sweep {
        Some(Sweep::Mach(ms)) => kv("sweep.mach_list", ms.iter().map(|&m| fmt_f64(m)).collect::<Vec<_>>().join(",")),
        Some(Sweep::Refine(fs)) => kv("sweep.refine_list", fs.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(",")),
        None => {}
    }
    kv("out.dir", cfg.out_dir.display().to_string());
    s
}

/// Snapshot text: one row per interior cell, `j` outer, `i` inner.
pub fn snapshot_text(field: &FieldGrid, gas: &GasModel) -> String {
    let g = field.geom;
    let mut s = String::with_capacity(g.nx * g.ny * 96);
    s.push_str(SNAPSHOT_HEADER);
    s.push('\n');
    for j in 0..g.ny {
        for i in 0..g.nx {
            let (c1, c2) = g.center(i, j);
            let p = field.primitive(i, j);
            let _ = writeln!(
                s,
                "{i},{j},{},{},{},{},{},{}",
                fmt_f64(c1),
                fmt_f64(c2),
                fmt_f64(p.rho),
                fmt_f64(p.ux),
                fmt_f64(p.uy),
                fmt_f64(gas.pressure(p.rho))
            );
        }
    }
    s
}

/// Rebuilds a field from snapshot text. Density and velocities come back
/// exactly as written; momenta are recomputed from them.
pub fn parse_snapshot(text: &str, geom: GridGeometry, mode: CoordinateMode, time: f64) -> Result<FieldGrid> {
    let mut lines = text.lines();
    if lines.next() != Some(SNAPSHOT_HEADER) {
        return Err(Error::Parse(format!("snapshot header must be `{SNAPSHOT_HEADER}`")));
    }
    let mut field = FieldGrid::uniform(geom, mode, Primitive::new(1.0, 0.0, 0.0))?;
    field.time = time;
    let mut seen = vec![false; geom.nx * geom.ny];
    for (n, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(Error::Parse(format!("snapshot row {}: expected 8 columns", n + 2)));
        }
        let bad = || Error::Parse(format!("snapshot row {}: malformed value", n + 2));
        let i: usize = cols[0].parse().map_err(|_| bad())?;
        let j: usize = cols[1].parse().map_err(|_| bad())?;
        if i >= geom.nx || j >= geom.ny || seen[j * geom.nx + i] {
            return Err(Error::Parse(format!("snapshot row {}: bad or repeated cell ({i}, {j})", n + 2)));
        }
        seen[j * geom.nx + i] = true;
        let v: Vec<f64> = cols[4..7].iter().map(|c| c.parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
        field.set(i, j, Primitive::new(v[0], v[1], v[2]).to_conservative());
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Parse("snapshot does not cover every cell".into()));
    }
    Ok(field)
}

/// `(rho, ux, uy)` of every cell, the part of a field a snapshot preserves.
pub fn primitive_view(field: &FieldGrid) -> Vec<[f64; 3]> {
    field
        .interior()
        .map(|(_, _, u): (usize, usize, Conservative)| {
            let p = u.to_primitive_unchecked();
            [p.rho, p.ux, p.uy]
        })
        .collect()
}

pub fn diagnostics_row(r: &DiagnosticsRecord) -> String {
    let opt = |v: Option<f64>| v.map_or(String::new(), fmt_f64);
    let e = r.extent;
    format!(
        "{},{},{},{},{},{},{},{},{}",
        fmt_f64(r.time),
        fmt_f64(r.l1_perturbation),
        opt(e.map(|e| e.x_min)),
        opt(e.map(|e| e.x_max)),
        opt(e.map(|e| e.y_min)),
        opt(e.map(|e| e.y_max)),
        fmt_f64(r.extent_height),
        opt(r.max_entropy_production),
        opt(r.tip_angle_beta)
    )
}

/// Parses a diagnostics file into rows of optional values.
pub fn parse_diagnostics(text: &str) -> Result<Vec<[Option<f64>; 9]>> {
    let mut lines = text.lines();
    if lines.next() != Some(DIAGNOSTICS_HEADER) {
        return Err(Error::Parse("diagnostics header mismatch".into()));
    }
    lines
        .enumerate()
        .map(|(n, line)| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 9 {
                return Err(Error::Parse(format!("diagnostics row {}: expected 9 columns", n + 2)));
            }
            let mut row = [None; 9];
            for (slot, c) in row.iter_mut().zip(cols) {
                if !c.is_empty() {
                    *slot = Some(c.parse::<f64>().map_err(|_| Error::Parse(format!("diagnostics row {}: `{c}`", n + 2)))?);
                }
            }
            Ok(row)
        })
        .collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn snapshot_name(k: usize) -> String {
    format!("snapshot_{k:05}.csv")
}

/// What one run wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFiles {
    pub dir: PathBuf,
    pub summary: RunSummary,
    /// `(file name, sha256)` in write order, manifest excluded.
    pub checksums: Vec<(String, String)>,
}

fn write_file(path: &Path, text: &str) -> Result<String> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(sha256_hex(text.as_bytes()))
}

/// Runs one configuration (no sweep) and writes snapshots, diagnostics and
/// the manifest to `dir`.
pub fn write_single_run(run: &RunConfig, dir: &Path, defaulted: &[&'static str]) -> Result<RunFiles> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut diag = String::from(DIAGNOSTICS_HEADER);
    diag.push('\n');
    let mut checksums = Vec::new();
    let mut k = 0usize;
    let gas = run.gas;
    let summary = run_experiment_with(run, |field, rec| {
        let name = snapshot_name(k);
        let sum = write_file(&dir.join(&name), &snapshot_text(field, &gas))?;
        checksums.push((name, sum));
        diag.push_str(&diagnostics_row(rec));
        diag.push('\n');
        k += 1;
        Ok(())
    })?;
    let sum = write_file(&dir.join(DIAGNOSTICS_FILE), &diag)?;
    checksums.push((DIAGNOSTICS_FILE.to_string(), sum));

    let cfg = Config {
        run: run.clone(),
        sweep: None,
        out_dir: dir.to_path_buf(),
        defaulted: defaulted.to_vec(),
    };
    let manifest = manifest_text(&cfg, Some(&summary), &checksums);
    write_file(&dir.join(MANIFEST_FILE), &manifest)?;
    Ok(RunFiles {
        dir: dir.to_path_buf(),
        summary,
        checksums,
    })
}

/// Manifest: provenance as comments followed by the effective config, so the
/// file itself can be fed back to `run`.
pub fn manifest_text(cfg: &Config, summary: Option<&RunSummary>, checksums: &[(String, String)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# carbuncle run manifest");
    let _ = writeln!(s, "# version: {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
    if cfg.run.setup == Setup::PlaneShock {
        let _ = writeln!(s, "# snapped shock_x: {}", fmt_f64(cfg.run.snapped_shock_x()));
    }
    if !cfg.defaulted.is_empty() {
        let _ = writeln!(s, "# defaults applied: {}", cfg.defaulted.join(", "));
    }
    if let Some(sum) = summary {
        let _ = writeln!(s, "# steps: {}", sum.steps);
        let _ = writeln!(s, "# final time: {}", fmt_f64(sum.final_time));
        if let Some(e) = sum.max_entropy_production {
            let _ = writeln!(s, "# max entropy production: {}", fmt_f64(e));
        }
        if let Some(e) = sum.max_entropy_ratio {
            let _ = writeln!(s, "# max entropy production / tolerance: {}", fmt_f64(e));
        }
    }
    for (name, sum) in checksums {
        let _ = writeln!(s, "# sha256 {name}: {sum}");
    }
    s.push_str(&render_config(cfg));
    s
}

/// Runs a parsed config, one subdirectory per sweep variant.
pub fn write_runs(cfg: &Config) -> Result<Vec<RunFiles>> {
    match &cfg.sweep {
        None => Ok(vec![write_single_run(&cfg.run, &cfg.out_dir, &cfg.defaulted)?]),
        Some(sweep) => {
            let mut all = Vec::new();
            let mut sums = Vec::new();
            for (name, variant) in sweep.variants(&cfg.run) {
                let files = write_single_run(&variant, &cfg.out_dir.join(&name), &[])?;
                let manifest = fs::read(files.dir.join(MANIFEST_FILE))?;
                sums.push((format!("{name}/{MANIFEST_FILE}"), sha256_hex(&manifest)));
                all.push(files);
            }
            write_file(&cfg.out_dir.join(MANIFEST_FILE), &manifest_text(cfg, None, &sums))?;
            Ok(all)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{preset, PRESETS};

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = parse_config("run.mach_in = 3.0\n").unwrap();
        assert_eq!(cfg.run.mach_in, 3.0);
        assert_eq!(cfg.run.geom.nx, 240);
        assert!(cfg.defaulted.contains(&"gas.gamma"));
        assert!(!cfg.defaulted.contains(&"run.mach_in"));
        let m = manifest_text(&cfg, None, &[]);
        assert!(m.contains("# defaults applied:") && m.contains("gas.gamma"));
    }

    #[test]
    fn errors_name_key_and_line() {
        match parse_config("# comment\ngas.gamma = 0.9\n") {
            Err(Error::Config { line, key, .. }) => assert_eq!((line, key.as_str()), (2, "gas.gamma")),
            other => panic!("{other:?}"),
        }
        match parse_config("run.mach_in = 2\n\nrun.mach_in = 3\n") {
            Err(Error::Config { line, key, msg }) => {
                assert_eq!((line, key.as_str()), (3, "run.mach_in"));
                assert!(msg.contains("line 1"));
            }
            other => panic!("{other:?}"),
        }
        match parse_config("grid.nz = 4\n") {
            Err(Error::Config { line, key, .. }) => assert_eq!((line, key.as_str()), (1, "grid.nz")),
            other => panic!("{other:?}"),
        }
        match parse_config("run.t_end = 1,5\n") {
            Err(Error::Config { key, .. }) => assert_eq!(key, "run.t_end"),
            other => panic!("{other:?}"),
        }
        assert!(parse_config("run.snapshot_every = 3\nrun.snapshot_interval = 0.1\n").is_err());
        assert!(parse_config("mode.t0 = 2\n").is_err());
        assert!(parse_config("trigger.row = 500\n").is_err());
        assert!(parse_config("no equals sign\n").is_err());
    }

    #[test]
    fn render_round_trips() {
        for name in PRESETS {
            let (run, sweep) = preset(name).unwrap();
            let cfg = Config::new(run, sweep, format!("out/{name}"));
            let text = render_config(&cfg);
            let back = parse_config(&text).unwrap();
            assert_eq!(back.run, cfg.run, "{name}");
            assert_eq!(back.sweep, cfg.sweep);
            assert_eq!(back.out_dir, cfg.out_dir);
            assert!(back.defaulted.is_empty() || back.defaulted.iter().all(|k| !text.contains(&format!("{k} ="))));
            let manifest = manifest_text(&back, None, &[("a".into(), "b".into())]);
            assert_eq!(parse_config(&manifest).unwrap().run, cfg.run);
        }
    }

    #[test]
    fn float_text_round_trips() {
        for x in [0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 5e-324, 1.7976931348623157e308, -2.5e-7, 123456.789] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn snapshot_round_trip() {
        let gas = GasModel::default();
        let geom = GridGeometry::new(7, 5, (0.0, 1.0), (-1.0, 1.0)).unwrap();
        let f = FieldGrid::from_fn(geom, CoordinateMode::Standard, |x, y| {
            Primitive::new(1.0 + x * x + 0.1 * y, (3.0 * x).sin() / 7.0, y / 3.0)
        })
        .unwrap();
        let text = snapshot_text(&f, &gas);
        assert!(text.starts_with("i,j,c1,c2,rho,ux,uy,p\n0,0,"));
        let back = parse_snapshot(&text, geom, CoordinateMode::Standard, 0.0).unwrap();
        let a = primitive_view(&f);
        let b = primitive_view(&back);
        for (p, q) in a.iter().zip(&b) {
            for k in 0..3 {
                assert_eq!(p[k].to_bits(), q[k].to_bits());
            }
        }
        assert_eq!(snapshot_text(&back, &gas), text);
        assert!(parse_snapshot(&text.replace("i,j", "j,i"), geom, CoordinateMode::Standard, 0.0).is_err());
    }

    #[test]
    fn diagnostics_rows() {
        let r = DiagnosticsRecord {
            time: 0.5,
            l1_perturbation: 1e-3,
            extent: None,
            extent_height: 0.0,
            max_entropy_production: Some(-2.0),
            entropy_ratio: Some(0.0),
            shock_front: vec![],
            tip_angle_beta: None,
        };
        let row = diagnostics_row(&r);
        assert_eq!(row, "0.5,0.001,,,,,0,-2,");
        let parsed = parse_diagnostics(&format!("{DIAGNOSTICS_HEADER}\n{row}\n")).unwrap();
        assert_eq!(parsed[0][0], Some(0.5));
        assert_eq!(parsed[0][8], None);
    }
}
