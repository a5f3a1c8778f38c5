//! Offline oracle, bound evaluators, run verification and file output.

pub mod bounds;
pub mod io;
pub mod oracle;
pub mod random;
pub mod report;
pub mod svg;
pub mod verify;

pub use bounds::{boxes_upper, cboxes_upper, cbug_upper, cover_lopt_proxy, held_karp_tour, iteration_bound};
pub use oracle::{default_resolution, offline_lopt, offline_lopt_with_budget, NeighborScheme, OracleResult};
pub use svg::{emit_svg, Slice};
pub use verify::{verify_run, BoundKind, BoundReport, BoundRow};

use crate::bug2d;
use crate::environment::Scene;
use crate::error::{Error, Result};
use crate::planners::{run_planner, Mode, NoObserver, PlannerConfig, RunRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Cboxes,
    Boxes,
    Bug1,
    Cbug,
}

impl std::str::FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cboxes" => Ok(Algo::Cboxes),
            "boxes" => Ok(Algo::Boxes),
            "bug1" => Ok(Algo::Bug1),
            "cbug" => Ok(Algo::Cbug),
            _ => Err(Error::Config(format!("unknown algorithm {s}"))),
        }
    }
}

/// Default CBUG base area: the area of the disc of radius `d(S,T)`, at
/// least that of a disc of radius `r`.
pub fn default_a0(scene: &Scene) -> f64 {
    let d = scene.target.as_ref().map(|t| scene.start.dist(t)).unwrap_or(0.0);
    std::f64::consts::PI * d.max(scene.r).powi(2)
}

/// Runs one algorithm; `cfg.mode` is forced to cover for `cboxes`.
pub fn run_algo(scene: &Scene, algo: Algo, cfg: &PlannerConfig, a0: Option<f64>) -> Result<RunRecord> {
    match algo {
        Algo::Cboxes => {
            let mut c = cfg.clone();
            c.mode = Mode::Cover;
            run_planner(scene, &c, &mut NoObserver)
        }
        Algo::Boxes => {
            if cfg.mode == Mode::Cover {
                return Err(Error::Config("boxes needs nav or search mode".into()));
            }
            run_planner(scene, cfg, &mut NoObserver)
        }
        Algo::Bug1 => bug2d::bug1(scene),
        Algo::Cbug => bug2d::cbug(scene, a0.unwrap_or_else(|| default_a0(scene))),
    }
}
