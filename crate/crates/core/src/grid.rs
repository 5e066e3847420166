//! Cell-centred field storage with a one-cell ghost frame, boundary
//! conditions and the filament trigger.
//!
//! In similarity mode the grid coordinates are `xi = x / t`: a cell with fixed
//! indices covers a physical box that grows like `t`, and every edge moves with
//! normal speed `xi · n`.

use crate::error::{Error, Result};
use crate::gas::{Conservative, Primitive};

/// Ghost-layer width. The schemes are three-point, one layer suffices.
pub const GHOST: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl GridGeometry {
    pub fn new(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        let g = GridGeometry {
            nx,
            ny,
            x_min: x.0,
            x_max: x.1,
            y_min: y.0,
            y_max: y.1,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::Usage(format!(
                "grid needs at least one cell per direction, got {}x{}",
                self.nx, self.ny
            )));
        }
        let ok = self.x_min.is_finite()
            && self.x_max.is_finite()
            && self.y_min.is_finite()
            && self.y_max.is_finite()
            && self.x_max > self.x_min
            && self.y_max > self.y_min;
        if !ok {
            return Err(Error::Usage(format!(
                "degenerate domain [{}, {}] x [{}, {}]",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    /// Cell centre of interior cell `(i, j)`.
    #[inline]
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.x_min + (i as f64 + 0.5) * self.dx(),
            self.y_min + (j as f64 + 0.5) * self.dy(),
        )
    }

    /// Abscissa of vertical face `i` (between cells `i - 1` and `i`).
    #[inline]
    pub fn face_x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    #[inline]
    pub fn face_y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.dy()
    }

    /// Index of the vertical face nearest to `x`.
    pub fn nearest_face(&self, x: f64) -> usize {
        let k = ((x - self.x_min) / self.dx()).round();
        k.clamp(0.0, self.nx as f64) as usize
    }

    /// Same geometry with both cell counts multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> GridGeometry {
        GridGeometry {
            nx: self.nx * factor,
            ny: self.ny * factor,
            ..*self
        }
    }
}

/// Coordinate system the field lives in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoordinateMode {
    Standard,
    Similarity { t0: f64 },
}

impl CoordinateMode {
    /// Time at which a run in this mode starts.
    pub fn start_time(&self) -> f64 {
        match *self {
            CoordinateMode::Standard => 0.0,
            CoordinateMode::Similarity { t0 } => t0,
        }
    }

    pub fn is_similarity(&self) -> bool {
        matches!(self, CoordinateMode::Similarity { .. })
    }

    /// Physical length of one grid unit at time `t`.
    #[inline]
    pub fn scale(&self, t: f64) -> f64 {
        match self {
            CoordinateMode::Standard => 1.0,
            CoordinateMode::Similarity { .. } => t,
        }
    }
}

/// Identifies one edge of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// Face at `x_min + i·dx`, `0 <= i <= nx`, in cell row `j`.
    Vertical { i: usize, j: usize },
    /// Face at `y_min + j·dy`, `0 <= j <= ny`, in cell column `i`.
    Horizontal { i: usize, j: usize },
}

/// Physical cell volume at time `t`.
pub fn cell_volume(geom: &GridGeometry, mode: CoordinateMode, t: f64) -> f64 {
    let s = mode.scale(t);
    geom.dx() * geom.dy() * s * s
}

/// `(length, unit normal, normal edge speed)` of an edge at time `t`.
pub fn edge_geometry(
    geom: &GridGeometry,
    mode: CoordinateMode,
    t: f64,
    edge: Edge,
) -> (f64, [f64; 2], f64) {
    let s = mode.scale(t);
    match edge {
        Edge::Vertical { i, .. } => {
            let speed = if mode.is_similarity() { geom.face_x(i) } else { 0.0 };
            (geom.dy() * s, [1.0, 0.0], speed)
        }
        Edge::Horizontal { j, .. } => {
            let speed = if mode.is_similarity() { geom.face_y(j) } else { 0.0 };
            (geom.dx() * s, [0.0, 1.0], speed)
        }
    }
}

/// Condition on the left or right boundary: prescribed pseudo-cell states.
#[derive(Debug, Clone, PartialEq)]
pub enum SideCondition {
    Fixed(Primitive),
    /// One pseudo-cell state per row.
    Column(Vec<Primitive>),
}

impl SideCondition {
    fn state(&self, j: usize) -> Primitive {
        match self {
            SideCondition::Fixed(p) => *p,
            SideCondition::Column(v) => v[j],
        }
    }
}

/// Condition on the bottom or top boundary. All variants reflect the adjacent
/// cell with the wall-normal velocity negated: a slip wall and a mirror
/// symmetry line coincide for this system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallKind {
    Wall,
    Symmetry,
    WallWithFilament,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpec {
    pub left: SideCondition,
    pub right: SideCondition,
    pub bottom: WallKind,
    pub top: WallKind,
}

impl BoundarySpec {
    pub fn validate(&self, geom: &GridGeometry) -> Result<()> {
        for side in [&self.left, &self.right] {
            match side {
                SideCondition::Fixed(p) => p.validate("boundary state")?,
                SideCondition::Column(v) => {
                    if v.len() != geom.ny {
                        return Err(Error::Usage(format!(
                            "boundary column has {} states for {} rows",
                            v.len(),
                            geom.ny
                        )));
                    }
                    for p in v {
                        p.validate("boundary state")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// One-cell-high band in which the horizontal velocity is set to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriggerSpec {
    pub row: usize,
    /// Cells whose centre lies left of this abscissa belong to the filament.
    pub extent_x: f64,
}

impl TriggerSpec {
    pub fn validate(&self, geom: &GridGeometry) -> Result<()> {
        if self.row >= geom.ny {
            return Err(Error::Usage(format!(
                "filament row {} outside 0..{}",
                self.row, geom.ny
            )));
        }
        if !self.extent_x.is_finite() {
            return Err(Error::Usage("filament extent must be finite".into()));
        }
        Ok(())
    }
}

/// Conservative states on an `nx × ny` grid plus a ghost frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub geom: GridGeometry,
    pub mode: CoordinateMode,
    pub time: f64,
    cells: Vec<Conservative>,
}

impl FieldGrid {
    /// Field with every cell (ghosts included) set to `state`, at the mode's
    /// start time.
    pub fn uniform(geom: GridGeometry, mode: CoordinateMode, state: Primitive) -> Result<Self> {
        geom.validate()?;
        state.validate("initial state")?;
        if let CoordinateMode::Similarity { t0 } = mode {
            if !(t0 > 0.0) {
                return Err(Error::Usage(format!("similarity start time must be positive, got {t0}")));
            }
        }
        let n = (geom.nx + 2 * GHOST) * (geom.ny + 2 * GHOST);
        Ok(FieldGrid {
            geom,
            mode,
            time: mode.start_time(),
            cells: vec![state.to_conservative(); n],
        })
    }

    /// Field whose interior cells sample `f` at the cell centres.
    pub fn from_fn<F>(geom: GridGeometry, mode: CoordinateMode, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Primitive,
    {
        let (x0, y0) = geom.center(0, 0);
        let mut field = FieldGrid::uniform(geom, mode, f(x0, y0))?;
        for j in 0..geom.ny {
            for i in 0..geom.nx {
                let (x, y) = geom.center(i, j);
                let p = f(x, y);
                p.validate("initial state")?;
                field.set(i, j, p.to_conservative());
            }
        }
        Ok(field)
    }

    #[inline]
    pub(crate) fn stride(&self) -> usize {
        self.geom.nx + 2 * GHOST
    }

    /// Storage index of padded coordinates (`0` is the ghost layer).
    #[inline]
    pub(crate) fn raw_index(&self, pi: usize, pj: usize) -> usize {
        pj * self.stride() + pi
    }

    #[inline]
    pub(crate) fn raw(&self) -> &[Conservative] {
        &self.cells
    }

    #[inline]
    pub(crate) fn raw_mut(&mut self) -> &mut [Conservative] {
        &mut self.cells
    }

    /// Interior cell `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Conservative {
        self.cells[self.raw_index(i + GHOST, j + GHOST)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, u: Conservative) {
        let k = self.raw_index(i + GHOST, j + GHOST);
        self.cells[k] = u;
    }

    /// Cell in padded coordinates, `-1..=n` in each direction.
    pub fn get_padded(&self, i: isize, j: isize) -> Conservative {
        let pi = (i + GHOST as isize) as usize;
        let pj = (j + GHOST as isize) as usize;
        self.cells[self.raw_index(pi, pj)]
    }

    pub fn primitive(&self, i: usize, j: usize) -> Primitive {
        self.get(i, j).to_primitive_unchecked()
    }

    pub fn volume(&self) -> f64 {
        cell_volume(&self.geom, self.mode, self.time)
    }

    /// Interior cells, row-major with `i` fastest.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize, Conservative)> + '_ {
        let (nx, ny) = (self.geom.nx, self.geom.ny);
        (0..ny).flat_map(move |j| (0..nx).map(move |i| (i, j, self.get(i, j))))
    }

    /// Volume-weighted sum of the conserved variables over interior cells.
    pub fn totals(&self) -> [f64; 3] {
        let v = self.volume();
        let mut t = [0.0; 3];
        for (_, _, u) in self.interior() {
            t[0] += u.rho;
            t[1] += u.mx;
            t[2] += u.my;
        }
        [t[0] * v, t[1] * v, t[2] * v]
    }

    /// Checks interior states for finiteness and positive density.
    pub fn validate(&self, step: usize) -> Result<()> {
        for (i, j, u) in self.interior() {
            if !u.is_finite() || !(u.rho > 0.0) {
                return Err(Error::NonFinite { i, j, step });
            }
        }
        Ok(())
    }

    /// Refreshes the ghost frame in place.
    pub fn fill_ghosts(&mut self, bc: &BoundarySpec, trigger: Option<&TriggerSpec>) {
        let (nx, ny) = (self.geom.nx, self.geom.ny);
        for j in 0..ny {
            let mut left = bc.left.state(j);
            if let Some(t) = trigger {
                if t.row == j {
                    left.ux = 0.0;
                }
            }
            let k = self.raw_index(0, j + 1);
            self.cells[k] = left.to_conservative();
            let k = self.raw_index(nx + 1, j + 1);
            self.cells[k] = bc.right.state(j).to_conservative();
        }
        for i in 0..nx + 2 {
            let below = self.cells[self.raw_index(i, 1)];
            let k = self.raw_index(i, 0);
            self.cells[k] = Conservative::new(below.rho, below.mx, -below.my);
            let above = self.cells[self.raw_index(i, ny)];
            let k = self.raw_index(i, ny + 1);
            self.cells[k] = Conservative::new(above.rho, above.mx, -above.my);
        }
    }

    /// Sets `ux = 0` in the filament cells, keeping density and `uy`.
    pub fn apply_filament(&mut self, trigger: &TriggerSpec) {
        let j = trigger.row;
        for i in 0..self.geom.nx {
            let (x, _) = self.geom.center(i, j);
            if x < trigger.extent_x {
                let u = self.get(i, j);
                self.set(i, j, Conservative::new(u.rho, 0.0, u.my));
            }
        }
    }
}

/// Value-returning form of [`FieldGrid::fill_ghosts`].
pub fn fill_ghosts(field: &FieldGrid, bc: &BoundarySpec, trigger: Option<&TriggerSpec>) -> FieldGrid {
    let mut f = field.clone();
    f.fill_ghosts(bc, trigger);
    f
}

/// Value-returning form of [`FieldGrid::apply_filament`].
pub fn apply_filament(field: &FieldGrid, trigger: &TriggerSpec) -> FieldGrid {
    let mut f = field.clone();
    f.apply_filament(trigger);
    f
}
