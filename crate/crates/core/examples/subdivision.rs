//! Sparse large room, small clearance: cell counts with and without
//! adaptive subdivision.
use tactile_nav::harness::random::{random_scene, RandomSpec};
use tactile_nav::planners::{boxes, boxes_subdivided, PlannerConfig};

fn main() -> tactile_nav::error::Result<()> {
    for seed in 0..3 {
        let scene = random_scene(&RandomSpec::sparse_large(), seed)?;
        let plain = boxes(&scene, &PlannerConfig::nav())?;
        let sub = boxes_subdivided(&scene, &PlannerConfig { subdivision: true, ..PlannerConfig::nav() })?;
        let visited = |r: &tactile_nav::planners::RunRecord| r.iterations.iter().map(|i| i.cells_visited).sum::<usize>();
        println!(
            "seed {seed}: plain {:?} {} cells, subdivided {:?} {} cells ({} splits)",
            plain.outcome,
            visited(&plain),
            sub.outcome,
            visited(&sub),
            sub.iterations.iter().map(|i| i.subdivisions).sum::<usize>()
        );
    }
    Ok(())
}
