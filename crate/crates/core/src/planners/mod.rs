//! CBoxes and Boxes: depth-first exploration of a cubical grid inside a
//! doubling virtual ellipsoid, with the optional improvements.

mod engine;
mod space;
mod subdiv;

use serde::{Deserialize, Serialize};

use crate::environment::{Binding, Scene};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::grid::Color;

pub use space::{gray_repaint, maximal_coloring};
pub use subdiv::SubdivSpace;

/// Version string stamped into run records.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Maximum number of restarts within one ellipsoid for the subdivided planner.
pub const RESTART_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cover,
    Nav,
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannerConfig {
    pub mode: Mode,
    #[serde(default)]
    pub diagonals: bool,
    #[serde(default)]
    pub maximal_coloring: bool,
    #[serde(default)]
    pub gray: bool,
    #[serde(default)]
    pub greedy: bool,
    #[serde(default)]
    pub noticing_t: bool,
    #[serde(default)]
    pub subdivision: bool,
    #[serde(default)]
    pub rng_seed: u64,
}

impl PlannerConfig {
    pub fn new(mode: Mode) -> Self {
        PlannerConfig {
            mode,
            diagonals: false,
            maximal_coloring: false,
            gray: false,
            greedy: false,
            noticing_t: false,
            subdivision: false,
            rng_seed: 0,
        }
    }

    pub fn cover() -> Self {
        Self::new(Mode::Cover)
    }

    pub fn nav() -> Self {
        Self::new(Mode::Nav)
    }

    pub fn search() -> Self {
        Self::new(Mode::Search)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == Mode::Cover && (self.greedy || self.gray || self.noticing_t) {
            return Err(Error::Config("greedy, gray and noticing-T need nav or search mode".into()));
        }
        if self.noticing_t && self.mode != Mode::Search {
            return Err(Error::Config("noticing-T applies to search mode only".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    ReachedTarget,
    TargetUnreachable,
    CoverComplete,
    NoRPrimePath,
}

/// Statistics for one ellipsoid (one pass in cover mode).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    /// Ellipsoid bound; 0 in cover mode.
    pub a: f64,
    pub cells_visited: usize,
    pub cells_probed_red: usize,
    #[serde(default)]
    pub restarts: usize,
    #[serde(default)]
    pub subdivisions: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorCounts {
    pub white: usize,
    pub yellow: usize,
    pub red: usize,
    pub pink: usize,
    pub gray: usize,
}

impl ColorCounts {
    pub fn add(&mut self, c: Color) {
        match c {
            Color::White => self.white += 1,
            Color::Yellow => self.yellow += 1,
            Color::Red => self.red += 1,
            Color::Pink => self.pink += 1,
            Color::Gray => self.gray += 1,
        }
    }
}

/// Grid layout needed to interpret a color snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub origin: Point,
    /// Side of level-0 cells.
    pub side: f64,
    pub dims: Vec<usize>,
    /// Side of the finest cells the planner may create.
    pub finest_side: f64,
}

/// One Yellow, Red or Gray cell at the end of a run. A cell at `level`
/// has side `side / 3^level` and integer coordinates `index` at that level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellSnap {
    pub level: u8,
    pub index: Vec<i64>,
    pub color: Color,
}

impl CellSnap {
    pub fn bounds(&self, grid: &GridInfo) -> (Vec<f64>, Vec<f64>) {
        let s = grid.side / 3f64.powi(self.level as i32);
        let lo: Vec<f64> = self.index.iter().enumerate().map(|(k, &i)| grid.origin[k] + i as f64 * s).collect();
        let hi = lo.iter().map(|x| x + s).collect();
        (lo, hi)
    }

    pub fn center(&self, grid: &GridInfo) -> Vec<f64> {
        let (lo, hi) = self.bounds(grid);
        lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }
}

/// Extra data recorded by the planar bug planners.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BugStats {
    pub h_wall: f64,
    /// CBUG base area; absent for BUG1.
    pub a0: Option<f64>,
    /// Ellipse areas of each CBUG iteration.
    pub areas: Vec<f64>,
    /// Whether each CBUG iteration touched its virtual ellipse.
    pub ellipse_touched: Vec<bool>,
    pub obstacles_circumnavigated: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: String,
    pub config: PlannerConfig,
    pub path: Vec<Point>,
    pub total_length: f64,
    pub outcome: Outcome,
    pub iterations: Vec<IterationStats>,
    pub color_counts: ColorCounts,
    /// Initial ellipsoid bound `a0`, when ellipsoids were used.
    #[serde(default)]
    pub a0: Option<f64>,
    /// Second focus of the ellipsoids (`T` for nav, `S` for search).
    #[serde(default)]
    pub t_prime: Option<Point>,
    #[serde(default)]
    pub tree_edges: usize,
    #[serde(default)]
    pub probes: usize,
    #[serde(default)]
    pub backtracks: usize,
    /// Literal enclosure signal: every neighbor of the start cell ended Red.
    #[serde(default)]
    pub s_enclosed_by_red: bool,
    #[serde(default)]
    pub grid: Option<GridInfo>,
    #[serde(default)]
    pub snapshot: Vec<CellSnap>,
    #[serde(default)]
    pub bug: Option<BugStats>,
    pub scene_hash: String,
    pub tool_version: String,
}

impl RunRecord {
    pub fn path_length(path: &[Point]) -> f64 {
        path.windows(2).map(|w| w[0].dist(&w[1])).sum()
    }

    pub fn yellow_cells(&self) -> Vec<&CellSnap> {
        self.snapshot.iter().filter(|c| c.color == Color::Yellow).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Encoding with the version stamp blanked, for determinism checks.
    pub fn canonical_json(&self) -> Result<String> {
        let mut c = self.clone();
        c.tool_version.clear();
        c.to_json()
    }
}

/// Receives every tactile contact made during a run.
pub trait Observer {
    fn on_contact(&mut self, _stop_center: &[f64], _contact: &[f64], _binding: Binding) {}
}

pub struct NoObserver;

impl Observer for NoObserver {}

/// Covers the space reachable by `r + eps` paths and returns to `S`.
pub fn cboxes(scene: &Scene, cfg: &PlannerConfig) -> Result<RunRecord> {
    if cfg.mode != Mode::Cover {
        return Err(Error::Config("cboxes needs cover mode".into()));
    }
    run_planner(scene, cfg, &mut NoObserver)
}

/// Navigates (or searches) toward `T` inside doubling ellipsoids.
pub fn boxes(scene: &Scene, cfg: &PlannerConfig) -> Result<RunRecord> {
    if cfg.mode == Mode::Cover {
        return Err(Error::Config("boxes needs nav or search mode".into()));
    }
    run_planner(scene, cfg, &mut NoObserver)
}

/// Boxes over a coarse grid that is refined around contact points.
pub fn boxes_subdivided(scene: &Scene, cfg: &PlannerConfig) -> Result<RunRecord> {
    if !cfg.subdivision {
        return Err(Error::Config("boxes_subdivided needs the subdivision flag".into()));
    }
    run_planner(scene, cfg, &mut NoObserver)
}

/// Runs the planner selected by `cfg` and reports every contact to `obs`.
pub fn run_planner(scene: &Scene, cfg: &PlannerConfig, obs: &mut dyn Observer) -> Result<RunRecord> {
    cfg.validate()?;
    scene.validate()?;
    if cfg.mode == Mode::Nav && scene.target.is_none() {
        return Err(Error::Config("nav mode needs a target".into()));
    }
    if cfg.subdivision {
        let space = SubdivSpace::for_scene(scene)?;
        engine::Engine::new(scene, cfg, space, obs)?.run()
    } else {
        let space = space::GridSpace::for_scene(scene)?;
        engine::Engine::new(scene, cfg, space, obs)?.run()
    }
}
