//! Navigates a random room with plain and greedy Boxes and compares both
//! against the offline optimum.
use tactile_nav::harness::random::{random_scene, RandomSpec};
use tactile_nav::harness::{boxes_upper, default_resolution, offline_lopt};
use tactile_nav::planners::{boxes, PlannerConfig};

fn main() -> tactile_nav::error::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let scene = random_scene(&RandomSpec::small(n), 11)?;
    let o = offline_lopt(&scene, default_resolution(&scene)?)?;
    println!("oracle: found={} length {:.3}", o.found, o.length);
    for (name, cfg) in [("plain", PlannerConfig::nav()), ("greedy", PlannerConfig { greedy: true, ..PlannerConfig::nav() })] {
        let run = boxes(&scene, &cfg)?;
        println!(
            "{name:<7} {:?} length {:.3} iterations {} (bound {:.1})",
            run.outcome,
            run.total_length,
            run.iterations.len(),
            boxes_upper(o.length, n, scene.eps)
        );
    }
    Ok(())
}
