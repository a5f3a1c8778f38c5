//! Search mode: the robot knows only when it stands on T, not where T is.
use tactile_nav::harness::random::{random_scene, RandomSpec};
use tactile_nav::planners::{boxes, PlannerConfig};

fn main() -> tactile_nav::error::Result<()> {
    let scene = random_scene(&RandomSpec::small(2), 5)?;
    for noticing_t in [false, true] {
        let cfg = PlannerConfig { noticing_t, ..PlannerConfig::search() };
        let run = boxes(&scene, &cfg)?;
        println!("noticing_t={noticing_t}: {:?} length {:.3} cells {}", run.outcome, run.total_length, run.path.len());
    }
    Ok(())
}
