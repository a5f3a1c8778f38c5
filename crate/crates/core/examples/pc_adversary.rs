//! Builds a parallel-corridor space against plain Boxes and reports how far
//! the planner had to travel compared with the closed-form lower bound.
use std::time::Instant;

use tactile_nav::adversarial::{adaptive_unblock, pc_lower_bound, pc_meta, PcParams, Unblocked};
use tactile_nav::planners::{boxes, PlannerConfig};

fn main() -> tactile_nav::error::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let eps = 2f64.sqrt() - 1.0;
    let params = PcParams::new(10.0, eps, 1.0, n, Unblocked::Adaptive);
    let cfg = PlannerConfig::nav();
    let t = Instant::now();
    let adv = adaptive_unblock(&params, &cfg)?;
    let meta = pc_meta(&adv.scene).unwrap();
    println!("n={n} corridors={} visit order={:?}", meta.corridor_count, adv.order);
    let run = boxes(&adv.scene, &cfg)?;
    println!("outcome={:?} length={:.3} iterations={}", run.outcome, run.total_length, run.iterations.len());
    println!(
        "bound as printed (r'=1): {:.1}, with actual r'={:.4}: {:.1}",
        pc_lower_bound(10.0, 2.0, 1.0, n),
        meta.r_prime,
        pc_lower_bound(meta.l0, meta.kappa, meta.r_prime, n)
    );
    println!("elapsed {:.1}s", t.elapsed().as_secs_f64());
    Ok(())
}
