use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::cell_side;

/// Cover length bound `2l 3^n (l_opt/l + 1) ((3.5 eps + 2r)/l)^n`.
pub fn cboxes_upper(l_opt: f64, n: usize, r: f64, eps: f64) -> Result<f64> {
    if !(eps < 2.0 * r) {
        return Err(Error::Domain(format!("cover bound assumes eps < 2r, got eps={eps}, r={r}")));
    }
    let l = cell_side(n, eps)?;
    let k = n as i32;
    Ok(2.0 * l * 3f64.powi(k) * (l_opt / l + 1.0) * ((3.5 * eps + 2.0 * r) / l).powi(k))
}

pub fn boxes_c(n: usize) -> f64 {
    let k = n as i32;
    if n <= 3 {
        16.0 * 32f64.powi(k - 1) / (2f64.powi(k) - 1.0)
    } else {
        16f64.powi(k) * (n as f64).powf((n as f64 - 1.0) / 2.0) / (2f64.powi(k) - 1.0)
    }
}

pub fn boxes_d(n: usize) -> f64 {
    let k = n as i32;
    if n <= 3 {
        2.0 * 6f64.powi(k)
    } else {
        (n as f64).sqrt() * 6f64.powi(k)
    }
}

/// Navigation length bound `c_n l_opt^n (1/eps)^(n-1) + d_n/eps + eps`.
pub fn boxes_upper(l_opt: f64, n: usize, eps: f64) -> f64 {
    let k = n as i32;
    boxes_c(n) * l_opt.powi(k) * (1.0 / eps).powi(k - 1) + boxes_d(n) / eps + eps
}

/// CBUG length bound `(6 pi / 2r) l_opt^2 + d(S,T) + 6 A0 / 2r`.
pub fn cbug_upper(l_opt: f64, dist_st: f64, r: f64, a0: f64) -> f64 {
    6.0 * PI / (2.0 * r) * l_opt * l_opt + dist_st + 6.0 * a0 / (2.0 * r)
}

/// Ellipsoid doublings needed before one contains an optimal path:
/// `ceil(log2(max(1, 2 l_opt / a0))) + 1`.
pub fn iteration_bound(l_opt: f64, a0: f64) -> usize {
    (2.0 * l_opt / a0).max(1.0).log2().ceil() as usize + 1
}

/// Lower-bound proxy for an optimal cover length: `cells * l / 3^n`, since
/// a path of length `l` meets at most `3^n` cells.
pub fn cover_lopt_proxy(cells: usize, l: f64, n: usize) -> f64 {
    cells as f64 * l / 3f64.powi(n as i32)
}

/// Largest point count for the exact tour.
pub const HELD_KARP_LIMIT: usize = 14;

/// Shortest closed Euclidean tour from `start` through every point.
pub fn held_karp_tour(start: &[f64], points: &[Vec<f64>]) -> Result<f64> {
    let k = points.len();
    if k > HELD_KARP_LIMIT {
        return Err(Error::Domain(format!("exact tour limited to {HELD_KARP_LIMIT} points, got {k}")));
    }
    if k == 0 {
        return Ok(0.0);
    }
    let d = |a: &[f64], b: &[f64]| crate::geometry::dist(a, b);
    let full = 1usize << k;
    let mut dp = vec![f64::INFINITY; full * k];
    for j in 0..k {
        dp[(1 << j) * k + j] = d(start, &points[j]);
    }
    for mask in 1..full {
        for j in 0..k {
            let cur = dp[mask * k + j];
            if mask & (1 << j) == 0 || !cur.is_finite() {
                continue;
            }
            for nx in 0..k {
                if mask & (1 << nx) != 0 {
                    continue;
                }
                let m2 = mask | (1 << nx);
                let v = cur + d(&points[j], &points[nx]);
                if v < dp[m2 * k + nx] {
                    dp[m2 * k + nx] = v;
                }
            }
        }
    }
    Ok((0..k).map(|j| dp[(full - 1) * k + j] + d(&points[j], start)).fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_examples() {
        let v = cboxes_upper(5.0, 2, 0.5, 0.2).unwrap();
        assert!((v - 26530.2).abs() < 1e-6, "{v}");
        let c = cboxes_upper(0.0, 2, 0.5, 0.2).unwrap();
        assert!((c - 2.0 * 0.1 * 9.0 * 17f64.powi(2)).abs() < 1e-9);
        assert!(cboxes_upper(1.0, 2, 0.1, 0.3).is_err());
    }

    #[test]
    fn boxes_examples() {
        assert!((boxes_c(2) - 512.0 / 3.0).abs() < 1e-12);
        assert_eq!(boxes_d(2), 72.0);
        assert!((boxes_upper(2.0, 2, 0.5) - (512.0 / 3.0 * 8.0 + 144.5)).abs() < 1e-9);
        assert!((boxes_c(3) - 16.0 * 1024.0 / 7.0).abs() < 1e-9);
        assert_eq!(boxes_d(3), 432.0);
        assert!((boxes_c(4) - 16f64.powi(4) * 8.0 / 15.0).abs() < 1e-6);
    }

    #[test]
    fn cbug_examples() {
        assert!((cbug_upper(2.0, 1.0, 1.0, PI) - (15.0 * PI + 1.0)).abs() < 1e-12);
        assert!((cbug_upper(0.0, 0.0, 0.5, 2.0) - 12.0).abs() < 1e-12);
        assert!((cbug_upper(1.0, 1.0, 0.5, 1.0) - (6.0 * PI + 7.0)).abs() < 1e-12);
    }

    #[test]
    fn tour_square() {
        let pts = vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        assert!((held_karp_tour(&[0.0, 0.0], &pts).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn iteration_bound_examples() {
        assert_eq!(iteration_bound(1.0, 4.0), 1);
        assert_eq!(iteration_bound(4.0, 4.0), 2);
        assert_eq!(iteration_bound(4.1, 4.0), 3);
    }
}
