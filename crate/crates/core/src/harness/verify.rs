use serde::{Deserialize, Serialize};

use super::bounds::{boxes_upper, cboxes_upper, cbug_upper, cover_lopt_proxy, held_karp_tour, iteration_bound, HELD_KARP_LIMIT};
use super::oracle::OracleResult;
use crate::adversarial::{pc_lower_bound, pc_meta};
use crate::environment::Scene;
use crate::error::{Error, Result};
use crate::geometry::cell_side;
use crate::planners::{Outcome, RunRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    /// `lhs <= rhs`
    Upper,
    /// `lhs >= rhs`
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub name: String,
    pub kind: BoundKind,
    pub lhs_value: f64,
    pub rhs_value: f64,
    pub satisfied: bool,
    /// `rhs - lhs` for upper bounds, `lhs - rhs` for lower bounds.
    pub slack: f64,
    /// Rows computed from a proxy rather than a proved inequality.
    #[serde(default)]
    pub informational: bool,
}

impl BoundRow {
    pub fn new(name: &str, kind: BoundKind, lhs: f64, rhs: f64) -> Self {
        let slack = match kind {
            BoundKind::Upper => rhs - lhs,
            BoundKind::Lower => lhs - rhs,
        };
        BoundRow { name: name.into(), kind, lhs_value: lhs, rhs_value: rhs, satisfied: slack >= 0.0, slack, informational: false }
    }

    fn info(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    /// True when every non-informational row holds.
    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().filter(|r| !r.informational).all(|r| r.satisfied)
    }

    pub fn row(&self, name: &str) -> Option<&BoundRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

pub const ROW_COVER: &str = "cover_length";
pub const ROW_COVER_EXACT: &str = "cover_length_exact_tour";
pub const ROW_NAV: &str = "nav_length";
pub const ROW_ITER: &str = "iterations";
pub const ROW_PC: &str = "corridor_lower_bound";
pub const ROW_CBUG: &str = "cbug_length";
pub const ROW_RECORD: &str = "recorded_length";

/// Checks a run against every bound that applies to its algorithm and scene.
pub fn verify_run(run: &RunRecord, scene: &Scene, oracle: Option<&OracleResult>) -> Result<BoundReport> {
    let hash = scene.hash();
    if run.scene_hash != hash {
        return Err(Error::SceneHash { run: run.scene_hash.clone(), scene: hash });
    }
    if let Some(o) = oracle {
        if o.scene_hash != hash {
            return Err(Error::SceneHash { run: o.scene_hash.clone(), scene: hash });
        }
    }
    let n = scene.n;
    let lopt = oracle.filter(|o| o.found).map(|o| o.length);
    // the recorded total must match its own path
    let walked = RunRecord::path_length(&run.path);
    let mut rows = vec![BoundRow::new(ROW_RECORD, BoundKind::Upper, (run.total_length - walked).abs(), 1e-9 * walked.max(1.0))];
    match run.algo.as_str() {
        "cboxes" if run.outcome == Outcome::CoverComplete && scene.eps < 2.0 * scene.r => {
            let l = cell_side(n, scene.eps)?;
            let yellow = run.yellow_cells();
            let proxy = cover_lopt_proxy(yellow.len(), l, n);
            rows.push(BoundRow::new(ROW_COVER, BoundKind::Upper, run.total_length, cboxes_upper(proxy, n, scene.r, scene.eps)?).info());
            if yellow.len() <= HELD_KARP_LIMIT {
                if let Some(g) = &run.grid {
                    let pts: Vec<Vec<f64>> = yellow.iter().map(|c| c.center(g)).collect();
                    let tour = held_karp_tour(&scene.start.0, &pts)?;
                    rows.push(BoundRow::new(ROW_COVER_EXACT, BoundKind::Upper, run.total_length, cboxes_upper(tour, n, scene.r, scene.eps)?));
                }
            }
        }
        "boxes" => {
            if let Some(lopt) = lopt {
                if run.outcome == Outcome::ReachedTarget {
                    rows.push(BoundRow::new(ROW_NAV, BoundKind::Upper, run.total_length, boxes_upper(lopt, n, scene.eps)));
                    if let Some(a0) = run.a0 {
                        rows.push(BoundRow::new(ROW_ITER, BoundKind::Upper, run.iterations.len() as f64, iteration_bound(lopt, a0) as f64));
                    }
                }
            }
            if let Some(m) = pc_meta(scene) {
                if m.unblocked.is_some() {
                    rows.push(BoundRow::new(ROW_PC, BoundKind::Lower, run.total_length, pc_lower_bound(m.l0, m.kappa, m.r_prime, m.n)));
                }
            }
        }
        "cbug" => {
            if let (Some(lopt), Some(bug)) = (lopt, &run.bug) {
                if run.outcome == Outcome::ReachedTarget {
                    let d = scene.target.as_ref().map(|t| scene.start.dist(t)).unwrap_or(0.0);
                    let a0 = bug.a0.unwrap_or(0.0);
                    rows.push(BoundRow::new(ROW_CBUG, BoundKind::Upper, run.total_length, cbug_upper(lopt, d, scene.r, a0)));
                }
            }
        }
        _ => {}
    }
    Ok(BoundReport { rows })
}
