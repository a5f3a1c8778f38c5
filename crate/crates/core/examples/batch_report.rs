//! Runs a small experiment grid in parallel and prints the CSV table.
use tactile_nav::harness::random::{random_scene, RandomSpec};
use tactile_nav::harness::report::{run_batch, write_csv, Job};
use tactile_nav::harness::Algo;
use tactile_nav::planners::PlannerConfig;

fn main() -> tactile_nav::error::Result<()> {
    let mut jobs = Vec::new();
    for seed in 0..4 {
        let scene = random_scene(&RandomSpec::small(2), seed)?;
        for (algo, cfg) in [
            (Algo::Boxes, PlannerConfig::nav()),
            (Algo::Boxes, PlannerConfig { diagonals: true, ..PlannerConfig::nav() }),
            (Algo::Cboxes, PlannerConfig::cover()),
        ] {
            jobs.push(Job { name: format!("random-{seed}"), scene: scene.clone(), algo, cfg, a0: None });
        }
    }
    let mut rows = Vec::new();
    for r in run_batch(&jobs) {
        rows.push(r?.1);
    }
    write_csv(std::io::stdout(), &rows)
}
