//! Covers the reachable part of a random 2-D room and checks the tour length.
use tactile_nav::harness::random::{random_scene, RandomSpec};
use tactile_nav::harness::verify_run;
use tactile_nav::planners::{cboxes, PlannerConfig};

fn main() -> tactile_nav::error::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let mut scene = random_scene(&RandomSpec::small(2), seed)?;
    scene.target = None;
    let run = cboxes(&scene, &PlannerConfig::cover())?;
    let c = &run.color_counts;
    println!("{:?}: length {:.3}, {} edges", run.outcome, run.total_length, run.tree_edges);
    println!("cells yellow {} red {} white {}", c.yellow, c.red, c.white);
    for row in verify_run(&run, &scene, None)?.rows {
        println!("{:<24} lhs {:.3} rhs {:.3} ok={}", row.name, row.lhs_value, row.rhs_value, row.satisfied);
    }
    Ok(())
}
