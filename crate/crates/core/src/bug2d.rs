//! Planar BUG1 and CBUG with discrete tactile wall-following.
//!
//! The robot center follows the contour where its clearance equals `r`,
//! keeping the obstacle on its right (clockwise circumnavigation). Each step
//! moves `h_wall` along the tangent and projects back onto the contour.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::environment::{SceneMode, Scene, DELTA_CONTACT, MAX_ADVANCE_STEPS};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::planners::{BugStats, ColorCounts, IterationStats, Outcome, PlannerConfig, RunRecord, TOOL_VERSION};

/// Cap on CBUG ellipse doublings.
pub const MAX_CBUG_ITERATIONS: usize = 64;

type P2 = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Clockwise,
}

/// One circumnavigation: where it started, the point closest to `T`, and
/// whether the loop closed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallFollowState {
    pub hit_point: Point,
    pub p_min: Point,
    pub loop_closed: bool,
    pub orientation: Orientation,
    /// Length of the closed loop.
    pub loop_length: f64,
    /// The virtual ellipse was part of the followed boundary.
    pub touched_ellipse: bool,
}

/// Ellipse with foci `S`, `T` and the given area, used by CBUG as an
/// obstacle for the robot center.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirtualEllipse {
    pub s: Point,
    pub t: Point,
    pub area: f64,
}

impl VirtualEllipse {
    pub fn new(s: Point, t: Point, area: f64) -> Result<Self> {
        if s.dim() != 2 || t.dim() != 2 {
            return Err(Error::Domain("virtual ellipses are planar".into()));
        }
        if !(area > 0.0) || !area.is_finite() {
            return Err(Error::Domain(format!("ellipse area must be positive, got {area}")));
        }
        Ok(VirtualEllipse { s, t, area })
    }

    /// Semi-major axis: solves `pi a sqrt(a^2 - c^2) = area`.
    pub fn semi_major(&self) -> f64 {
        let c = 0.5 * self.s.dist(&self.t);
        let k = self.area / PI;
        ((c * c + (c.powi(4) + 4.0 * k * k).sqrt()) / 2.0).sqrt()
    }

    pub fn semi_minor(&self) -> f64 {
        let a = self.semi_major();
        let c = 0.5 * self.s.dist(&self.t);
        (a * a - c * c).max(0.0).sqrt()
    }

    /// Bound on the focal sum of points inside.
    pub fn focal_bound(&self) -> f64 {
        2.0 * self.semi_major()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.focal_sum(p) <= self.focal_bound() + 1e-9
    }

    fn focal_sum(&self, p: &[f64]) -> f64 {
        crate::geometry::dist(p, &self.s.0) + crate::geometry::dist(p, &self.t.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Source {
    Solid(usize),
    Wall,
    Ellipse,
}

struct Constraint {
    f: f64,
    normal: P2,
    grad_norm: f64,
    source: Source,
}

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

fn d2(a: P2, b: P2) -> f64 {
    norm(sub(a, b))
}

struct Walker<'a> {
    scene: &'a Scene,
    r: f64,
    h: f64,
    ellipse: Option<&'a VirtualEllipse>,
    target: P2,
    path: Vec<Point>,
    pos: P2,
    states: Vec<WallFollowState>,
    steps: usize,
}

enum Bug1End {
    Reached,
    Blocked,
}

impl<'a> Walker<'a> {
    /// Signed slack of every constraint at `p`: obstacles offset by `r`, the
    /// box walls offset by `r`, and the virtual ellipse (robot center).
    fn constraints(&self, p: P2) -> Vec<Constraint> {
        let mut out = Vec::with_capacity(self.scene.solids.len() + 5);
        for (i, s) in self.scene.solids.iter().chain(&self.scene.extra_solids).enumerate() {
            let d = s.distance(&p);
            let q = s.nearest_boundary(&p);
            let v = sub(p, [q[0], q[1]]);
            let l = norm(v);
            let normal = if l > 0.0 { [v[0] / l, v[1] / l] } else { [1.0, 0.0] };
            out.push(Constraint { f: d - self.r, normal, grad_norm: 1.0, source: Source::Solid(i) });
        }
        let (lo, hi) = (&self.scene.bbox.min, &self.scene.bbox.max);
        for k in 0..2 {
            let mut e = [0.0; 2];
            e[k] = 1.0;
            out.push(Constraint { f: p[k] - lo[k] - self.r, normal: e, grad_norm: 1.0, source: Source::Wall });
            e[k] = -1.0;
            out.push(Constraint { f: hi[k] - p[k] - self.r, normal: e, grad_norm: 1.0, source: Source::Wall });
        }
        if let Some(el) = self.ellipse {
            let u1 = sub(p, [el.s[0], el.s[1]]);
            let u2 = sub(p, [el.t[0], el.t[1]]);
            let (n1, n2) = (norm(u1), norm(u2));
            let mut g = [0.0, 0.0];
            for k in 0..2 {
                if n1 > 0.0 {
                    g[k] -= 0.5 * u1[k] / n1;
                }
                if n2 > 0.0 {
                    g[k] -= 0.5 * u2[k] / n2;
                }
            }
            let gn = norm(g);
            if gn > 1e-12 {
                out.push(Constraint {
                    f: 0.5 * (el.focal_bound() - n1 - n2),
                    normal: [g[0] / gn, g[1] / gn],
                    grad_norm: gn,
                    source: Source::Ellipse,
                });
            }
        }
        out
    }

    /// Conservative slack: every constraint is 1-Lipschitz.
    fn slack(&self, p: P2) -> f64 {
        self.constraints(p).iter().map(|c| c.f).fold(f64::INFINITY, f64::min)
    }

    fn go(&mut self, p: P2) {
        if p != self.pos {
            self.pos = p;
            self.path.push(Point(p.to_vec()));
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > MAX_ADVANCE_STEPS {
            return Err(Error::StepCap(MAX_ADVANCE_STEPS));
        }
        Ok(())
    }

    /// Straight move toward `to` by conservative advancement; true if reached.
    fn advance(&mut self, to: P2) -> Result<bool> {
        let mut p = self.pos;
        loop {
            self.tick()?;
            let rem = d2(p, to);
            if rem <= 1e-12 {
                self.go(to);
                return Ok(true);
            }
            let f = self.slack(p);
            if f >= rem {
                self.go(to);
                return Ok(true);
            }
            if f <= DELTA_CONTACT {
                self.go(p);
                return Ok(false);
            }
            let t = f / rem;
            p = [p[0] + t * (to[0] - p[0]), p[1] + t * (to[1] - p[1])];
        }
    }

    /// Pushes `p` out of violated constraints, then onto the nearest contour.
    fn project(&self, mut p: P2) -> P2 {
        for _ in 0..200 {
            let cs = self.constraints(p);
            let worst = cs.iter().min_by(|a, b| a.f.total_cmp(&b.f)).expect("box walls");
            if worst.f.abs() <= 1e-12 {
                break;
            }
            let step = -worst.f / worst.grad_norm;
            p = [p[0] + step * worst.normal[0], p[1] + step * worst.normal[1]];
            if worst.f > 0.0 {
                // landed on the nearest contour; check nothing else got violated
                if self.slack(p) >= -1e-12 {
                    break;
                }
            }
        }
        p
    }

    /// Clockwise tangent that keeps every active constraint satisfied.
    fn tangent(&self, p: P2) -> (P2, bool) {
        let mut cs = self.constraints(p);
        cs.sort_by(|a, b| a.f.total_cmp(&b.f));
        let tol = 1e-6 * self.h.max(1e-9) + 1e-9;
        let active: Vec<&Constraint> = cs.iter().filter(|c| c.f <= tol).collect();
        let ellipse_active = active.iter().any(|c| c.source == Source::Ellipse);
        let cw = |n: P2| [n[1], -n[0]];
        let pick = active
            .iter()
            .map(|c| cw(c.normal))
            .find(|t| active.iter().all(|c| c.normal[0] * t[0] + c.normal[1] * t[1] >= -1e-9))
            .unwrap_or_else(|| cw(cs[0].normal));
        (pick, ellipse_active)
    }

    /// Clockwise circumnavigation starting at the current contact, returning
    /// the closed loop (first vertex = hit point, last = hit point).
    fn circumnavigate(&mut self) -> Result<(Vec<P2>, bool)> {
        let hit = self.project(self.pos);
        let mut pts = vec![hit];
        let mut p = hit;
        let mut left = false;
        let mut touched = false;
        loop {
            self.tick()?;
            let (t, e) = self.tangent(p);
            touched |= e;
            let q = self.project([p[0] + self.h * t[0], p[1] + self.h * t[1]]);
            pts.push(q);
            p = q;
            let dh = d2(q, hit);
            if dh > 2.0 * self.h {
                left = true;
            }
            if left && dh <= self.h {
                pts.push(hit);
                break;
            }
        }
        Ok((pts, touched))
    }

    fn bug1(&mut self) -> Result<Bug1End> {
        let mut best = f64::INFINITY;
        loop {
            if self.advance(self.target)? {
                return Ok(Bug1End::Reached);
            }
            if self.pos != self.project(self.pos) {
                let p = self.project(self.pos);
                self.go(p);
            }
            let hit = self.pos;
            let (pts, touched) = self.circumnavigate()?;
            let mut cum = vec![0.0];
            for w in pts.windows(2) {
                cum.push(cum.last().unwrap() + d2(w[0], w[1]));
            }
            let total = *cum.last().unwrap();
            let (idx, dmin) = pts
                .iter()
                .enumerate()
                .map(|(i, q)| (i, d2(*q, self.target)))
                .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            // walk the loop, then the shorter way back around to p_min
            for &q in &pts[1..] {
                self.go(q);
            }
            if cum[idx] <= total - cum[idx] {
                for &q in &pts[1..=idx] {
                    self.go(q);
                }
            } else {
                for &q in pts[idx..pts.len() - 1].iter().rev() {
                    self.go(q);
                }
            }
            let p_min = pts[idx];
            self.states.push(WallFollowState {
                hit_point: Point(hit.to_vec()),
                p_min: Point(p_min.to_vec()),
                loop_closed: true,
                orientation: Orientation::Clockwise,
                loop_length: total,
                touched_ellipse: touched,
            });
            if dmin <= 1e-12 {
                return Ok(Bug1End::Reached);
            }
            if !(dmin < best - 1e-9) {
                // no progress over the previous obstacle: grazing leave
                return Ok(Bug1End::Blocked);
            }
            best = dmin;
            // leave test: one step of h_wall toward T must gain clearance
            let u = sub(self.target, p_min);
            let step = self.h.min(dmin);
            let q = [p_min[0] + step * u[0] / dmin, p_min[1] + step * u[1] / dmin];
            let fq = self.slack(q);
            if !(fq >= 0.0 && fq > self.slack(p_min)) {
                return Ok(Bug1End::Blocked);
            }
            self.go(q);
        }
    }
}

fn check_scene(scene: &Scene) -> Result<P2> {
    scene.validate()?;
    if scene.n != 2 || scene.mode != SceneMode::Solid {
        return Err(Error::Scene("bug planners need a planar solid scene".into()));
    }
    let t = scene.target.as_ref().ok_or_else(|| Error::Config("bug planners need a target".into()))?;
    if scene.clearance_slice(&scene.start.0) < scene.r - 1e-9 {
        return Err(Error::Embedded(scene.start.0.clone()));
    }
    Ok([t[0], t[1]])
}

/// Wall-following step used by the bug planners.
pub fn h_wall(r: f64) -> f64 {
    r / 50.0
}

fn walker<'a>(scene: &'a Scene, target: P2) -> Walker<'a> {
    let s = [scene.start[0], scene.start[1]];
    Walker {
        scene,
        r: scene.r,
        h: h_wall(scene.r),
        ellipse: None,
        target,
        path: vec![scene.start.clone()],
        pos: s,
        states: Vec::new(),
        steps: 0,
    }
}

fn record(scene: &Scene, algo: &str, w: Walker, outcome: Outcome, iterations: Vec<IterationStats>, bug: BugStats) -> RunRecord {
    let total_length = RunRecord::path_length(&w.path);
    RunRecord {
        algo: algo.into(),
        config: PlannerConfig::nav(),
        path: w.path,
        total_length,
        outcome,
        iterations,
        color_counts: ColorCounts::default(),
        a0: None,
        t_prime: scene.target.clone(),
        tree_edges: 0,
        probes: 0,
        backtracks: 0,
        s_enclosed_by_red: false,
        grid: None,
        snapshot: Vec::new(),
        bug: Some(bug),
        scene_hash: scene.hash(),
        tool_version: TOOL_VERSION.into(),
    }
}

/// BUG1 from `S` to `T`, with the wall-follow states of every obstacle met.
pub fn bug1_traced(scene: &Scene) -> Result<(RunRecord, Vec<WallFollowState>)> {
    let target = check_scene(scene)?;
    let mut w = walker(scene, target);
    let outcome = match w.bug1()? {
        Bug1End::Reached => Outcome::ReachedTarget,
        Bug1End::Blocked => Outcome::TargetUnreachable,
    };
    let states = std::mem::take(&mut w.states);
    let bug = BugStats {
        h_wall: w.h,
        a0: None,
        areas: Vec::new(),
        ellipse_touched: Vec::new(),
        obstacles_circumnavigated: states.len(),
    };
    let it = IterationStats { a: 0.0, cells_visited: 0, cells_probed_red: 0, restarts: 0, subdivisions: 0 };
    Ok((record(scene, "bug1", w, outcome, vec![it], bug), states))
}

pub fn bug1(scene: &Scene) -> Result<RunRecord> {
    Ok(bug1_traced(scene)?.0)
}

/// CBUG: BUG1 inside virtual ellipses of area `2^i a0` around `S` and `T`.
/// Each pass continues from where the previous one stopped.
pub fn cbug(scene: &Scene, a0: f64) -> Result<RunRecord> {
    let target = check_scene(scene)?;
    let t = Point(target.to_vec());
    let mut w = walker(scene, target);
    let mut iterations = Vec::new();
    let mut areas = Vec::new();
    let mut touched_log = Vec::new();
    let mut circ = 0;
    for i in 0..MAX_CBUG_ITERATIONS {
        let area = a0 * 2f64.powi(i as i32);
        let el = VirtualEllipse::new(scene.start.clone(), t.clone(), area)?;
        let end = {
            // the walker borrows the ellipse only for this pass
            let mut pass = Walker {
                scene,
                r: w.r,
                h: w.h,
                ellipse: Some(&el),
                target,
                path: std::mem::take(&mut w.path),
                pos: w.pos,
                states: Vec::new(),
                steps: w.steps,
            };
            let end = pass.bug1()?;
            w.path = pass.path;
            w.pos = pass.pos;
            w.steps = pass.steps;
            let touched = pass.states.iter().any(|s| s.touched_ellipse);
            circ += pass.states.len();
            (end, touched)
        };
        areas.push(area);
        touched_log.push(end.1);
        iterations.push(IterationStats { a: el.focal_bound(), cells_visited: 0, cells_probed_red: 0, restarts: 0, subdivisions: 0 });
        let outcome = match end {
            (Bug1End::Reached, _) => Some(Outcome::ReachedTarget),
            (Bug1End::Blocked, false) => Some(Outcome::TargetUnreachable),
            (Bug1End::Blocked, true) => None,
        };
        if let Some(outcome) = outcome {
            let bug = BugStats { h_wall: w.h, a0: Some(a0), areas, ellipse_touched: touched_log, obstacles_circumnavigated: circ };
            return Ok(record(scene, "cbug", w, outcome, iterations, bug));
        }
    }
    Err(Error::Domain(format!("CBUG did not settle within {MAX_CBUG_ITERATIONS} ellipses")))
}

/// Right-hand side of the CBUG length bound.
pub fn cbug_length_bound(r: f64, l_opt: f64, d_st: f64, a0: f64) -> f64 {
    6.0 * PI / (2.0 * r) * l_opt * l_opt + d_st + 6.0 * a0 / (2.0 * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::Aabb;
    use crate::geometry::ConvexPrimitive;

    fn scene(solids: Vec<ConvexPrimitive>, s: [f64; 2], t: [f64; 2]) -> Scene {
        Scene::solid(Aabb::new([0.0, 0.0], [10.0, 10.0]), solids, 0.1, 0.05, s, Some(Point::from(t))).unwrap()
    }

    #[test]
    fn empty_scene_is_straight() {
        let sc = scene(vec![], [1.0, 1.0], [8.0, 5.0]);
        let rec = bug1(&sc).unwrap();
        assert_eq!(rec.outcome, Outcome::ReachedTarget);
        assert!((rec.total_length - 65f64.sqrt()).abs() < 1e-9);
        let rec = cbug(&sc, 1.0).unwrap();
        assert_eq!(rec.outcome, Outcome::ReachedTarget);
        assert_eq!(rec.iterations.len(), 1);
    }

    #[test]
    fn disk_on_the_segment() {
        let sc = scene(vec![ConvexPrimitive::sphere([5.0, 5.0], 1.0)], [1.0, 5.0], [9.0, 5.0]);
        let (rec, states) = bug1_traced(&sc).unwrap();
        assert_eq!(rec.outcome, Outcome::ReachedTarget);
        assert_eq!(states.len(), 1);
        let perim = 2.0 * PI * 1.1;
        assert!((states[0].loop_length - perim).abs() < 0.02 * perim);
        assert!(rec.total_length >= 8.0);
        assert!(rec.total_length <= 8.0 + 2.0 * perim);
        for p in &rec.path {
            assert!(sc.clearance_slice(&p.0) >= sc.r - 1e-6);
        }
    }

    #[test]
    fn ellipse_area() {
        let e = VirtualEllipse::new(Point::from([0.0, 0.0]), Point::from([2.0, 0.0]), 5.0).unwrap();
        let (a, b) = (e.semi_major(), e.semi_minor());
        assert!((PI * a * b - 5.0).abs() < 1e-9);
        assert!((a * a - b * b - 1.0).abs() < 1e-9);
    }

    fn ring() -> Vec<ConvexPrimitive> {
        vec![
            ConvexPrimitive::axis_box([6.0, 4.0], [8.0, 4.3]),
            ConvexPrimitive::axis_box([6.0, 5.7], [8.0, 6.0]),
            ConvexPrimitive::axis_box([6.0, 4.0], [6.3, 6.0]),
            ConvexPrimitive::axis_box([7.7, 4.0], [8.0, 6.0]),
        ]
    }

    #[test]
    fn enclosed_target() {
        let sc = scene(ring(), [1.0, 5.0], [7.0, 5.0]);
        let rec = bug1(&sc).unwrap();
        assert_eq!(rec.outcome, Outcome::TargetUnreachable);
        let rec = cbug(&sc, 1.0).unwrap();
        assert_eq!(rec.outcome, Outcome::TargetUnreachable);
        let bug = rec.bug.unwrap();
        assert!(!bug.ellipse_touched.last().unwrap());
        for (i, a) in bug.areas.iter().enumerate() {
            assert_eq!(*a, 2f64.powi(i as i32));
        }
    }

    #[test]
    fn concave_corner_and_ellipse() {
        // an L-shaped wall with the target in its notch side
        let walls = vec![ConvexPrimitive::axis_box([4.0, 2.0], [4.5, 8.0]), ConvexPrimitive::axis_box([4.0, 7.5], [7.0, 8.0])];
        let sc = scene(walls, [2.0, 5.0], [6.0, 5.0]);
        let rec = bug1(&sc).unwrap();
        assert_eq!(rec.outcome, Outcome::ReachedTarget);
        for p in &rec.path {
            assert!(sc.clearance_slice(&p.0) >= sc.r - 1e-6);
        }
        let rec = cbug(&sc, 1.0).unwrap();
        assert_eq!(rec.outcome, Outcome::ReachedTarget);
        assert!(rec.iterations.len() > 1);
        assert_eq!(rec.path.last().unwrap(), &Point::from([6.0, 5.0]));
    }
}
