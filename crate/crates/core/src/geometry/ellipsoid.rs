use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::point::{dist, Point};
use super::primitive::ConvexPrimitive;
use super::{check_dim, DELTA_GEOM};
use crate::error::{Error, Result};

/// The closed region `{p : d(f1,p) + d(p,f2) <= bound_a}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FociEllipsoid {
    pub f1: Point,
    pub f2: Point,
    pub bound_a: f64,
}

impl FociEllipsoid {
    pub fn new(f1: Point, f2: Point, bound_a: f64) -> Result<Self> {
        check_dim(f1.dim(), f2.dim())?;
        let d = f1.dist(&f2);
        if !(bound_a >= d) || !bound_a.is_finite() {
            return Err(Error::Domain(format!("ellipsoid bound {bound_a} is below the focal distance {d}")));
        }
        Ok(FociEllipsoid { f1, f2, bound_a })
    }

    pub fn dim(&self) -> usize {
        self.f1.dim()
    }

    pub fn focal_sum(&self, p: &[f64]) -> f64 {
        dist(&self.f1.0, p) + dist(p, &self.f2.0)
    }

    /// Closed membership with the geometric tolerance.
    pub fn contains_slice(&self, p: &[f64]) -> bool {
        self.focal_sum(p) <= self.bound_a + DELTA_GEOM
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        check_dim(self.dim(), p.dim())?;
        Ok(self.contains_slice(&p.0))
    }

    pub fn center(&self) -> Vec<f64> {
        self.f1.0.iter().zip(&self.f2.0).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Semi-major and semi-minor axis lengths.
    pub fn semi_axes(&self) -> (f64, f64) {
        let big_a = 0.5 * self.bound_a;
        let c = 0.5 * self.f1.dist(&self.f2);
        (big_a, (big_a * big_a - c * c).max(0.0).sqrt())
    }

    /// Whether the closed box `[min, max]` meets the ellipsoid. Exact up to
    /// the geometric tolerance for `n <= 6`; in higher dimensions boxes the
    /// cheap tests cannot reject are reported as intersecting.
    pub fn intersects_box(&self, min: &[f64], max: &[f64]) -> bool {
        let n = min.len();
        let mid: Vec<f64> = min.iter().zip(max).map(|(a, b)| 0.5 * (a + b)).collect();
        let diag = dist(min, max);
        let f_mid = self.focal_sum(&mid);
        // the focal sum is 2-Lipschitz and every box point is within diag/2 of mid
        if f_mid - diag > self.bound_a + DELTA_GEOM {
            return false;
        }
        if f_mid <= self.bound_a + DELTA_GEOM {
            return true;
        }
        if n > 6 {
            return true;
        }
        let (big_a, big_b) = self.semi_axes();
        if big_b <= 1e-9 * big_a.max(1.0) {
            let seg = ConvexPrimitive::AxisBox { min: Point(min.to_vec()), max: Point(max.to_vec()) };
            return seg.segment_distance(&self.f1.0, &self.f2.0) <= DELTA_GEOM;
        }
        let q = self.quadratic_form(big_a, big_b);
        let c = self.center();
        box_quadratic_min(&q, &c, min, max) <= 1.0 + 1e-12
    }

    /// `M` such that the ellipsoid is `(p-c)^T M (p-c) <= 1`.
    fn quadratic_form(&self, big_a: f64, big_b: f64) -> DMatrix<f64> {
        let n = self.dim();
        let d = self.f1.dist(&self.f2);
        let ib = 1.0 / (big_b * big_b);
        let mut m = DMatrix::<f64>::identity(n, n) * ib;
        if d > 0.0 {
            let u = DVector::from_iterator(n, self.f1.0.iter().zip(&self.f2.0).map(|(a, b)| (b - a) / d));
            m += (u.clone() * u.transpose()) * (1.0 / (big_a * big_a) - ib);
        }
        m
    }
}

/// Minimum of `(p-c)^T M (p-c)` over the box, `M` positive definite. The
/// minimizer is the stationary point of the restriction to the relative
/// interior of some face, so all `3^n` faces are enumerated.
fn box_quadratic_min(m: &DMatrix<f64>, c: &[f64], min: &[f64], max: &[f64]) -> f64 {
    let n = c.len();
    let total = 3usize.pow(n as u32);
    let mut best = f64::INFINITY;
    let mut state = vec![0u8; n];
    for code in 0..total {
        let mut k = code;
        for s in state.iter_mut() {
            *s = (k % 3) as u8;
            k /= 3;
        }
        // 0: free, 1: at min, 2: at max
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 0).collect();
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = match state[i] {
                1 => min[i] - c[i],
                2 => max[i] - c[i],
                _ => 0.0,
            };
        }
        if !free.is_empty() {
            let nf = free.len();
            let mff = DMatrix::from_fn(nf, nf, |i, j| m[(free[i], free[j])]);
            let rhs = DVector::from_fn(nf, |i, _| {
                -(0..n).filter(|&j| state[j] != 0).map(|j| m[(free[i], j)] * y[j]).sum::<f64>()
            });
            let Some(chol) = mff.cholesky() else { continue };
            let x = chol.solve(&rhs);
            let mut feasible = true;
            for (i, &fi) in free.iter().enumerate() {
                let p = x[i] + c[fi];
                if p < min[fi] - 1e-12 || p > max[fi] + 1e-12 {
                    feasible = false;
                    break;
                }
                y[fi] = p.clamp(min[fi], max[fi]) - c[fi];
            }
            if !feasible {
                continue;
            }
        }
        let yv = DVector::from_vec(y);
        let val = (yv.transpose() * m * &yv)[(0, 0)];
        if val < best {
            best = val;
        }
    }
    best
}

/// Closed membership test `d(f1,p) + d(p,f2) <= bound_a`.
pub fn ellipsoid_contains(e: &FociEllipsoid, p: &Point) -> Result<bool> {
    e.contains(p)
}
