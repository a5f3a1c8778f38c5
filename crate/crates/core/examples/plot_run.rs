//! Writes an SVG of a nav run on a random room to the given path.
use tactile_nav::harness::emit_svg;
use tactile_nav::harness::random::{random_scene, RandomSpec};
use tactile_nav::planners::{boxes, PlannerConfig};

fn main() -> tactile_nav::error::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "run.svg".into());
    let scene = random_scene(&RandomSpec::small(2), 2)?;
    let run = boxes(&scene, &PlannerConfig { gray: true, ..PlannerConfig::nav() })?;
    std::fs::write(&out, emit_svg(Some(&run), &scene, None)?)?;
    println!("wrote {out}");
    Ok(())
}
