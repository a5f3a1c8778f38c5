use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracle::{default_resolution, offline_lopt};
use super::verify::{verify_run, BoundReport};
use super::{run_algo, Algo};
use crate::environment::Scene;
use crate::error::Result;
use crate::planners::{PlannerConfig, RunRecord};

/// One line of the experiment table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scene: String,
    pub algo: String,
    pub config: String,
    pub outcome: String,
    pub length: f64,
    pub oracle: Option<f64>,
    pub iterations: usize,
    pub cover_slack: Option<f64>,
    pub nav_slack: Option<f64>,
    pub iteration_slack: Option<f64>,
    pub corridor_slack: Option<f64>,
    pub cbug_slack: Option<f64>,
    pub verified: bool,
}

impl ReportRow {
    pub fn new(scene: &str, run: &RunRecord, oracle: Option<f64>, report: &BoundReport) -> Self {
        let slack = |name: &str| report.row(name).map(|r| r.slack);
        let c = &run.config;
        let mut flags = vec![format!("{:?}", c.mode).to_lowercase()];
        for (on, name) in [
            (c.diagonals, "diagonals"),
            (c.maximal_coloring, "maximal-coloring"),
            (c.gray, "gray"),
            (c.greedy, "greedy"),
            (c.noticing_t, "noticing-t"),
            (c.subdivision, "subdivide"),
        ] {
            if on {
                flags.push(name.into());
            }
        }
        ReportRow {
            scene: scene.into(),
            algo: run.algo.clone(),
            config: flags.join("+"),
            outcome: format!("{:?}", run.outcome),
            length: run.total_length,
            oracle,
            iterations: run.iterations.len(),
            cover_slack: slack(super::verify::ROW_COVER),
            nav_slack: slack(super::verify::ROW_NAV),
            iteration_slack: slack(super::verify::ROW_ITER),
            corridor_slack: slack(super::verify::ROW_PC),
            cbug_slack: slack(super::verify::ROW_CBUG),
            verified: report.all_satisfied(),
        }
    }
}

pub fn write_csv<W: Write>(w: W, rows: &[ReportRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

/// One (scene, algorithm, config) cell of an experiment.
#[derive(Clone, Debug)]
pub struct Job {
    pub name: String,
    pub scene: Scene,
    pub algo: Algo,
    pub cfg: PlannerConfig,
    pub a0: Option<f64>,
}

/// Runs, solves the oracle for, and verifies every job in parallel. Rows
/// come back in job order.
pub fn run_batch(jobs: &[Job]) -> Vec<Result<(RunRecord, ReportRow)>> {
    jobs.par_iter()
        .map(|job| {
            let run = run_algo(&job.scene, job.algo, &job.cfg, job.a0)?;
            let oracle = match (&job.scene.target, job.algo) {
                (Some(_), Algo::Boxes | Algo::Bug1 | Algo::Cbug) => {
                    Some(offline_lopt(&job.scene, default_resolution(&job.scene)?)?)
                }
                _ => None,
            };
            let report = verify_run(&run, &job.scene, oracle.as_ref())?;
            let lopt = oracle.filter(|o| o.found).map(|o| o.length);
            let row = ReportRow::new(&job.name, &run, lopt, &report);
            Ok((run, row))
        })
        .collect()
}
