use serde::{Deserialize, Serialize};

use super::point::{dist, dot, Point};
use super::check_dim;
use crate::error::{Error, Result};

/// Closed convex solids used both as obstacles and as free-space cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ConvexPrimitive {
    AxisBox { min: Point, max: Point },
    Sphere { center: Point, radius: f64 },
    Capsule { a: Point, b: Point, radius: f64 },
}

impl ConvexPrimitive {
    pub fn axis_box(min: impl Into<Point>, max: impl Into<Point>) -> Self {
        ConvexPrimitive::AxisBox { min: min.into(), max: max.into() }
    }

    pub fn sphere(center: impl Into<Point>, radius: f64) -> Self {
        ConvexPrimitive::Sphere { center: center.into(), radius }
    }

    pub fn capsule(a: impl Into<Point>, b: impl Into<Point>, radius: f64) -> Self {
        ConvexPrimitive::Capsule { a: a.into(), b: b.into(), radius }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexPrimitive::AxisBox { min, .. } => min.dim(),
            ConvexPrimitive::Sphere { center, .. } => center.dim(),
            ConvexPrimitive::Capsule { a, .. } => a.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            ConvexPrimitive::AxisBox { min, max } => {
                min.dim() == max.dim()
                    && min.is_finite()
                    && max.is_finite()
                    && min.0.iter().zip(&max.0).all(|(a, b)| a <= b)
            }
            ConvexPrimitive::Sphere { center, radius } => center.is_finite() && *radius > 0.0,
            ConvexPrimitive::Capsule { a, b, radius } => {
                a.dim() == b.dim() && a.is_finite() && b.is_finite() && *radius > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Scene(format!("malformed primitive {self:?}")))
        }
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn aabb(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            ConvexPrimitive::AxisBox { min, max } => (min.0.clone(), max.0.clone()),
            ConvexPrimitive::Sphere { center, radius } => (
                center.0.iter().map(|c| c - radius).collect(),
                center.0.iter().map(|c| c + radius).collect(),
            ),
            ConvexPrimitive::Capsule { a, b, radius } => (
                a.0.iter().zip(&b.0).map(|(x, y)| x.min(*y) - radius).collect(),
                a.0.iter().zip(&b.0).map(|(x, y)| x.max(*y) + radius).collect(),
            ),
        }
    }

    /// Euclidean distance from `p` to the closed solid (0 inside).
    pub fn distance(&self, p: &[f64]) -> f64 {
        match self {
            ConvexPrimitive::AxisBox { min, max } => {
                let mut s = 0.0;
                for k in 0..p.len() {
                    let d = if p[k] < min[k] {
                        min[k] - p[k]
                    } else if p[k] > max[k] {
                        p[k] - max[k]
                    } else {
                        0.0
                    };
                    s += d * d;
                }
                s.sqrt()
            }
            ConvexPrimitive::Sphere { center, radius } => (dist(p, &center.0) - radius).max(0.0),
            ConvexPrimitive::Capsule { a, b, radius } => {
                (point_segment_distance(p, &a.0, &b.0) - radius).max(0.0)
            }
        }
    }

    /// Distance from `p` to the complement of the solid when `p` is inside,
    /// minus the distance to the solid otherwise.
    pub fn margin(&self, p: &[f64]) -> f64 {
        match self {
            ConvexPrimitive::AxisBox { min, max } => {
                let inside = (0..p.len()).all(|k| p[k] >= min[k] && p[k] <= max[k]);
                if inside {
                    (0..p.len())
                        .map(|k| (p[k] - min[k]).min(max[k] - p[k]))
                        .fold(f64::INFINITY, f64::min)
                } else {
                    -self.distance(p)
                }
            }
            ConvexPrimitive::Sphere { center, radius } => radius - dist(p, &center.0),
            ConvexPrimitive::Capsule { a, b, radius } => radius - point_segment_distance(p, &a.0, &b.0),
        }
    }

    /// Minimum distance from the segment `p -> q` to the solid.
    pub fn segment_distance(&self, p: &[f64], q: &[f64]) -> f64 {
        match self {
            ConvexPrimitive::AxisBox { min, max } => segment_box_distance(p, q, &min.0, &max.0),
            ConvexPrimitive::Sphere { center, radius } => {
                (point_segment_distance(&center.0, p, q) - radius).max(0.0)
            }
            ConvexPrimitive::Capsule { a, b, radius } => {
                (segment_segment_distance(p, q, &a.0, &b.0) - radius).max(0.0)
            }
        }
    }

    /// Nearest point of the solid's boundary. Outside the solid this is the
    /// projection onto the solid; inside it is the closest exit point.
    pub fn nearest_boundary(&self, p: &[f64]) -> Vec<f64> {
        match self {
            ConvexPrimitive::AxisBox { min, max } => {
                let inside = (0..p.len()).all(|k| p[k] >= min[k] && p[k] <= max[k]);
                if inside {
                    let mut best = (f64::INFINITY, 0usize, 0.0);
                    for k in 0..p.len() {
                        let lo = p[k] - min[k];
                        let hi = max[k] - p[k];
                        if lo < best.0 {
                            best = (lo, k, min[k]);
                        }
                        if hi < best.0 {
                            best = (hi, k, max[k]);
                        }
                    }
                    let mut out = p.to_vec();
                    out[best.1] = best.2;
                    out
                } else {
                    (0..p.len()).map(|k| p[k].clamp(min[k], max[k])).collect()
                }
            }
            ConvexPrimitive::Sphere { center, radius } => {
                let dir = unit_or_fallback(&sub(p, &center.0), None);
                center.0.iter().zip(&dir).map(|(c, d)| c + radius * d).collect()
            }
            ConvexPrimitive::Capsule { a, b, radius } => {
                let foot = closest_on_segment(p, &a.0, &b.0);
                let axis = sub(&b.0, &a.0);
                let dir = unit_or_fallback(&sub(p, &foot), Some(&axis));
                foot.iter().zip(&dir).map(|(c, d)| c + radius * d).collect()
            }
        }
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Normalizes `v`; if `v` vanishes, returns a deterministic unit vector
/// orthogonal to `avoid` (or `e_0`).
fn unit_or_fallback(v: &[f64], avoid: Option<&[f64]>) -> Vec<f64> {
    let n = dot(v, v).sqrt();
    if n > 1e-15 {
        return v.iter().map(|x| x / n).collect();
    }
    let dim = v.len();
    match avoid {
        Some(axis) if dot(axis, axis) > 0.0 => {
            let an = dot(axis, axis).sqrt();
            let u: Vec<f64> = axis.iter().map(|x| x / an).collect();
            let k = (0..dim)
                .min_by(|&i, &j| u[i].abs().partial_cmp(&u[j].abs()).unwrap())
                .unwrap_or(0);
            let mut e = vec![0.0; dim];
            e[k] = 1.0;
            let proj = dot(&e, &u);
            let w: Vec<f64> = e.iter().zip(&u).map(|(ei, ui)| ei - proj * ui).collect();
            let wn = dot(&w, &w).sqrt();
            w.iter().map(|x| x / wn).collect()
        }
        _ => {
            let mut e = vec![0.0; dim];
            e[0] = 1.0;
            e
        }
    }
}

fn closest_on_segment(p: &[f64], a: &[f64], b: &[f64]) -> Vec<f64> {
    let ab = sub(b, a);
    let len2 = dot(&ab, &ab);
    let t = if len2 > 0.0 { (dot(&sub(p, a), &ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    a.iter().zip(&ab).map(|(x, d)| x + t * d).collect()
}

/// Distance from `p` to the segment `a -> b`.
pub fn point_segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut len2 = 0.0;
    let mut proj = 0.0;
    for k in 0..p.len() {
        let d = b[k] - a[k];
        len2 += d * d;
        proj += (p[k] - a[k]) * d;
    }
    let t = if len2 > 0.0 { (proj / len2).clamp(0.0, 1.0) } else { 0.0 };
    let mut s = 0.0;
    for k in 0..p.len() {
        let x = a[k] + t * (b[k] - a[k]) - p[k];
        s += x * x;
    }
    s.sqrt()
}

/// Distance between segments `p1 -> q1` and `p2 -> q2` in any dimension.
pub fn segment_segment_distance(p1: &[f64], q1: &[f64], p2: &[f64], q2: &[f64]) -> f64 {
    const TINY: f64 = 1e-300;
    let d1 = sub(q1, p1);
    let d2 = sub(q2, p2);
    let r = sub(p1, p2);
    let a = dot(&d1, &d1);
    let e = dot(&d2, &d2);
    let f = dot(&d2, &r);
    let (s, t);
    if a <= TINY && e <= TINY {
        return dist(p1, p2);
    }
    if a <= TINY {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = dot(&d1, &r);
        if e <= TINY {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = dot(&d1, &d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 1e-14 * a * e { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let mut acc = 0.0;
    for k in 0..p1.len() {
        let x = p1[k] + s * d1[k] - (p2[k] + t * d2[k]);
        acc += x * x;
    }
    acc.sqrt()
}

/// Exact segment-to-box distance. Squared distance along the segment is
/// piecewise quadratic in the parameter with breakpoints where a coordinate
/// crosses a slab face; each piece is minimized in closed form.
fn segment_box_distance(p: &[f64], q: &[f64], min: &[f64], max: &[f64]) -> f64 {
    let n = p.len();
    let d: Vec<f64> = (0..n).map(|k| q[k] - p[k]).collect();
    let mut ts = vec![0.0, 1.0];
    for k in 0..n {
        if d[k] != 0.0 {
            for bound in [min[k], max[k]] {
                let t = (bound - p[k]) / d[k];
                if t > 0.0 && t < 1.0 {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let eval = |t: f64| -> f64 {
        let mut s = 0.0;
        for k in 0..n {
            let x = p[k] + t * d[k];
            let e = if x < min[k] {
                min[k] - x
            } else if x > max[k] {
                x - max[k]
            } else {
                0.0
            };
            s += e * e;
        }
        s
    };
    let mut best = f64::INFINITY;
    for w in ts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        best = best.min(eval(t0)).min(eval(t1));
        if t1 <= t0 {
            continue;
        }
        let tm = 0.5 * (t0 + t1);
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..n {
            let x = p[k] + tm * d[k];
            let bound = if x < min[k] {
                min[k]
            } else if x > max[k] {
                max[k]
            } else {
                continue;
            };
            num += (p[k] - bound) * d[k];
            den += d[k] * d[k];
        }
        if den > 0.0 {
            let t = (-num / den).clamp(t0, t1);
            best = best.min(eval(t));
        }
    }
    best.sqrt()
}

/// Exact Euclidean distance from `p` to the closed solid `prim` (0 inside).
pub fn dist_point_primitive(p: &Point, prim: &ConvexPrimitive) -> Result<f64> {
    check_dim(prim.dim(), p.dim())?;
    Ok(prim.distance(&p.0))
}

/// Distance from `p` to the complement of `prim` if inside, else the negated
/// distance to `prim`. A ball of radius `rho` about `p` fits inside `prim`
/// iff the margin is at least `rho`.
pub fn inner_margin(p: &Point, prim: &ConvexPrimitive) -> Result<f64> {
    check_dim(prim.dim(), p.dim())?;
    Ok(prim.margin(&p.0))
}

/// Nearest point on the boundary of `prim`.
pub fn nearest_boundary_point(p: &Point, prim: &ConvexPrimitive) -> Result<Point> {
    check_dim(prim.dim(), p.dim())?;
    Ok(Point(prim.nearest_boundary(&p.0)))
}
