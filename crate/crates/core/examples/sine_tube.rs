//! Boxes through a sine-shaped tube. Path length grows with the frequency
//! even though S and T stay one unit apart.
use tactile_nav::adversarial::{build_sine_corridor, sine_arc_length, SineParams};
use tactile_nav::planners::{boxes, PlannerConfig};

fn main() -> tactile_nav::error::Result<()> {
    for k in [2.0, 4.0, 8.0] {
        let scene = build_sine_corridor(&SineParams { k, r: 0.2, segments: 200 })?;
        let run = boxes(&scene, &PlannerConfig::nav())?;
        println!(
            "k={k}: arc {:.3}, {:?} length {:.3}",
            sine_arc_length(k, 1000),
            run.outcome,
            run.total_length
        );
    }
    Ok(())
}
