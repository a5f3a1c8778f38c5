//! n-dimensional points, convex primitives, exact distance queries and the
//! scalar quantities that size the planners' grids and the adversarial spaces.

mod ellipsoid;
mod point;
mod primitive;

pub use ellipsoid::{ellipsoid_contains, FociEllipsoid};
pub use point::{dist, dist2, dot, Point, Segment};
pub use primitive::{
    dist_point_primitive, inner_margin, nearest_boundary_point, point_segment_distance,
    segment_segment_distance, ConvexPrimitive,
};

use crate::error::{Error, Result};

/// Absolute tolerance for geometric predicates, in meters.
pub const DELTA_GEOM: f64 = 1e-9;

/// Maximum center offset at which two clearance-`r + eps` positions are
/// guaranteed to see each other along a straight radius-`r` move:
/// `2 * sqrt(2 r eps + eps^2)`.
pub fn kappa(r: f64, eps: f64) -> Result<f64> {
    if !(r >= 0.0) || !(eps >= 0.0) {
        return Err(Error::Domain(format!("kappa needs r >= 0 and eps >= 0, got r={r}, eps={eps}")));
    }
    Ok(2.0 * (2.0 * r * eps + eps * eps).sqrt())
}

/// Inflated radius `r + eps`.
pub fn r_prime(r: f64, eps: f64) -> Result<f64> {
    if !(r > 0.0) || !(eps >= 0.0) {
        return Err(Error::Domain(format!("r_prime needs r > 0 and eps >= 0, got r={r}, eps={eps}")));
    }
    Ok(r + eps)
}

/// Side of the exploration cubes: `min(eps/2, eps/sqrt(n))`. Any two points
/// of one cube are at most `eps` apart and a cube side never exceeds `eps/2`.
pub fn cell_side(n: usize, eps: f64) -> Result<f64> {
    if n == 0 || !(eps > 0.0) {
        return Err(Error::Domain(format!("cell_side needs n >= 1 and eps > 0, got n={n}, eps={eps}")));
    }
    Ok((eps / 2.0).min(eps / (n as f64).sqrt()))
}

pub fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kappa_values() {
        assert_relative_eq!(kappa(2.0, 0.5).unwrap(), 3.0, epsilon = 1e-12);
        assert_eq!(kappa(5.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(kappa(1.0, 1.0).unwrap(), 2.0 * 3f64.sqrt(), epsilon = 1e-12);
        assert!(kappa(-1.0, 0.1).is_err());
        assert!(kappa(1.0, -0.1).is_err());
    }

    #[test]
    fn r_prime_values() {
        assert_relative_eq!(r_prime(1.0, 0.1).unwrap(), 1.1);
        assert_eq!(r_prime(0.5, 0.0).unwrap(), 0.5);
        assert_eq!(r_prime(2.0, 0.25).unwrap(), 2.25);
        assert!(r_prime(0.0, 0.1).is_err());
    }

    #[test]
    fn cell_side_values() {
        assert_eq!(cell_side(2, 1.0).unwrap(), 0.5);
        assert_eq!(cell_side(4, 1.0).unwrap(), 0.5);
        assert_relative_eq!(cell_side(9, 3.0).unwrap(), 1.0);
        assert!(cell_side(0, 1.0).is_err());
        assert!(cell_side(2, 0.0).is_err());
    }

    #[test]
    fn kappa_identity() {
        for &(r, eps) in &[(1.0, 0.1), (0.3, 0.01), (2.0, 1.5), (1e-3, 1e-4), (7.0, 0.4142)] {
            let k = kappa(r, eps).unwrap();
            let lhs = (k / 2.0).powi(2) + r * r;
            let rhs = (r + eps).powi(2);
            assert!(((lhs - rhs) / rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn cell_side_fits_in_eps() {
        for n in 1..=12 {
            for &eps in &[1e-3, 0.1, 0.4142, 1.0, 3.0] {
                let l = cell_side(n, eps).unwrap();
                assert!((n as f64).sqrt() * l <= eps * (1.0 + 1e-15));
                assert!(2.0 * l <= eps * (1.0 + 1e-15));
            }
        }
    }
}
