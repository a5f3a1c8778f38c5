use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::environment::{Aabb, Scene, SceneMeta};
use crate::error::{Error, Result};
use crate::geometry::{ConvexPrimitive, Point};

/// Shape of a random scene family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub side: f64,
    pub r: f64,
    pub eps: f64,
    pub obstacles: usize,
    /// Obstacle size range, as a fraction of `side`.
    pub size: (f64, f64),
    /// Minimum distance between `S` and `T`, as a fraction of `side`.
    pub min_separation: f64,
}

impl RandomSpec {
    pub fn small(n: usize) -> Self {
        match n {
            2 => RandomSpec { n, side: 6.0, r: 0.2, eps: 0.2, obstacles: 6, size: (0.05, 0.14), min_separation: 0.4 },
            _ => RandomSpec { n, side: 3.0, r: 0.15, eps: 0.2, obstacles: 4, size: (0.07, 0.17), min_separation: 0.4 },
        }
    }

    /// Large box, few obstacles, clearance small against the radius.
    pub fn sparse_large() -> Self {
        RandomSpec { n: 2, side: 12.0, r: 0.5, eps: 0.05, obstacles: 3, size: (0.03, 0.06), min_separation: 0.6 }
    }
}

/// Random disks/balls and boxes in a cube, with `S` and `T` placed where a
/// ball of radius `r + eps` fits. Same seed, same scene.
pub fn random_scene(spec: &RandomSpec, seed: u64) -> Result<Scene> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.n;
    let side = spec.side;
    let bbox = Aabb::new(vec![0.0; n], vec![side; n]);
    let mut solids = Vec::with_capacity(spec.obstacles);
    for _ in 0..spec.obstacles {
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..side)).collect();
        let s = side * rng.gen_range(spec.size.0..spec.size.1);
        if rng.gen_bool(0.5) {
            solids.push(ConvexPrimitive::sphere(c, s));
        } else {
            let half: Vec<f64> = (0..n).map(|_| s * rng.gen_range(0.5..1.0)).collect();
            let lo: Vec<f64> = c.iter().zip(&half).map(|(a, h)| a - h).collect();
            let hi: Vec<f64> = c.iter().zip(&half).map(|(a, h)| a + h).collect();
            solids.push(ConvexPrimitive::axis_box(lo, hi));
        }
    }
    let probe = Scene::solid(bbox.clone(), solids.clone(), spec.r, spec.eps, vec![side / 2.0; n], None)?;
    let need = spec.r + spec.eps + 0.05 * side / 6.0;
    let pick = |rng: &mut ChaCha8Rng| -> Option<Vec<f64>> {
        (0..10_000).find_map(|_| {
            let p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..side)).collect();
            (probe.clearance_slice(&p) >= need).then_some(p)
        })
    };
    for _ in 0..1000 {
        let (Some(s), Some(t)) = (pick(&mut rng), pick(&mut rng)) else { break };
        if crate::geometry::dist(&s, &t) >= spec.min_separation * side {
            let mut scene = Scene::solid(bbox, solids, spec.r, spec.eps, s, Some(Point(t)))?;
            scene.meta = Some(SceneMeta::Random { seed });
            return Ok(scene);
        }
    }
    Err(Error::Scene(format!("could not place S and T for seed {seed}")))
}
