//! Lower-bound environments: parallel-corridor spaces, the sine corridor and
//! the comb, plus the closed-form lower bounds that go with them.
//!
//! Axis conventions for corridor spaces: axis 0 runs along the corridors,
//! axes `1..n-1` carry the lattice, and the last axis is the floor height.

use serde::{Deserialize, Serialize};

use crate::environment::{Aabb, Binding, PcMeta, Scene, SceneMeta};
use crate::error::{Error, Result};
use crate::geometry::{kappa, r_prime, ConvexPrimitive, Point};
use crate::planners::{run_planner, Observer, PlannerConfig, RunRecord};

const FLOOR_TOL: f64 = 1e-9;

/// Number of values in `[0, l0]` spaced at least `d` apart.
pub fn np(l0: f64, d: f64) -> Result<usize> {
    if !(l0 > 0.0) || !(d > 0.0) {
        return Err(Error::Domain(format!("np needs l0 > 0 and d > 0, got {l0}, {d}")));
    }
    Ok(floor_tol(l0 / d) as usize + 1)
}

/// Floor that treats values within `1e-9` below an integer as that integer.
fn floor_tol(x: f64) -> f64 {
    (x + FLOOR_TOL).floor()
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() <= FLOOR_TOL
}

/// Lattice spacing `lambda > kappa` with the prescribed point count `m`;
/// `lambda` is the largest admissible value `l0 / (m - 1)`.
pub fn select_lambda(l0: f64, kappa: f64) -> Result<(f64, usize)> {
    if !(kappa > 0.0) || !(l0 > kappa) {
        return Err(Error::Domain(format!("need l0 > kappa > 0, got l0={l0}, kappa={kappa}")));
    }
    let q = l0 / kappa;
    let m = if is_integer(q) { q.round() as usize } else { q.floor() as usize + 1 };
    if m < 2 {
        return Err(Error::Domain(format!("lattice needs at least 2 points, got {m}")));
    }
    Ok((l0 / (m - 1) as f64, m))
}

/// Which corridor is left open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unblocked {
    Index(usize),
    /// Every corridor flapped; the first phase of the adaptive adversary.
    Sealed,
    Adaptive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcParams {
    pub l0: f64,
    pub eps: f64,
    pub r: f64,
    pub n: usize,
    pub unblocked: Unblocked,
}

impl PcParams {
    pub fn new(l0: f64, eps: f64, r: f64, n: usize, unblocked: Unblocked) -> Self {
        PcParams { l0, eps, r, n, unblocked }
    }

    /// Derived quantities; checks every construction invariant.
    pub fn derive(&self) -> Result<PcMeta> {
        let (l0, eps, r, n) = (self.l0, self.eps, self.r, self.n);
        if n < 2 {
            return Err(Error::Domain("corridor spaces need n >= 2".into()));
        }
        if !(eps < r) {
            return Err(Error::Domain(format!("corridor spaces need eps < r, got eps={eps}, r={r}")));
        }
        let k = kappa(r, eps)?;
        let rp = r_prime(r, eps)?;
        let (lambda, m_axis) = select_lambda(l0, k)?;
        let m = if n == 2 { 1 } else { m_axis };
        let h = floor_tol(l0 / (2.0 * rp)) as usize;
        if h < 1 {
            return Err(Error::Domain(format!("l0 = {l0} leaves no room for a second floor (r' = {rp})")));
        }
        let g2 = rp * rp - ((k + lambda) / 4.0).powi(2);
        if !(g2 > 0.0) || !(lambda > k) {
            return Err(Error::Domain("flap gap is not positive".into()));
        }
        let per_floor = m.pow((n - 2) as u32);
        let corridor_count = per_floor * (h + 1);
        let unblocked = match self.unblocked {
            Unblocked::Index(i) if i < corridor_count => Some(i),
            Unblocked::Index(i) => {
                return Err(Error::Domain(format!("corridor {i} out of range 0..{corridor_count}")));
            }
            Unblocked::Sealed => None,
            Unblocked::Adaptive => {
                return Err(Error::Config("adaptive corridor choice needs adaptive_unblock".into()));
            }
        };
        Ok(PcMeta {
            l0,
            eps,
            r,
            n,
            kappa: k,
            r_prime: rp,
            lambda,
            m,
            h,
            g: g2.sqrt(),
            tau: eps.min(l0 / 100.0),
            corridor_count,
            unblocked,
            flap_corridor: Vec::new(),
        })
    }
}

/// Axis point of corridor `idx` at position `x` along the corridor.
pub fn corridor_point(meta: &PcMeta, idx: usize, x: f64) -> Vec<f64> {
    let n = meta.n;
    let per_floor = meta.m.pow((n - 2) as u32);
    let floor = idx / per_floor;
    let mut rest = idx % per_floor;
    let mut p = vec![0.0; n];
    p[0] = x;
    for k in 1..n - 1 {
        let i = rest % meta.m;
        rest /= meta.m;
        // lattice coordinates by index, never re-derived from lambda
        p[k] = meta.l0 * i as f64 / (meta.m - 1) as f64;
    }
    p[n - 1] = 2.0 * meta.r_prime * floor as f64;
    p
}

/// Pairs of corridors one lattice step apart on the same floor, then pairs
/// directly above one another on neighbouring floors.
pub fn adjacent_corridors(meta: &PcMeta) -> Vec<(usize, usize)> {
    let n = meta.n;
    let per_floor = meta.m.pow((n - 2) as u32);
    let mut out = Vec::new();
    for idx in 0..meta.corridor_count {
        let local = idx % per_floor;
        let mut stride = 1;
        for _ in 1..n - 1 {
            if (local / stride) % meta.m + 1 < meta.m {
                out.push((idx, idx + stride));
            }
            stride *= meta.m;
        }
    }
    for idx in 0..meta.corridor_count.saturating_sub(per_floor) {
        out.push((idx, idx + per_floor));
    }
    out
}

/// Start-room and target-room boxes.
pub fn rooms(meta: &PcMeta) -> (ConvexPrimitive, ConvexPrimitive) {
    let n = meta.n;
    let rp = meta.r_prime;
    let top = 2.0 * rp * meta.h as f64 + rp;
    let mut lo = vec![-rp; n];
    let mut hi = vec![meta.l0 + rp; n];
    lo[n - 1] = -rp;
    hi[n - 1] = top;
    let (mut slo, mut shi) = (lo.clone(), hi.clone());
    slo[0] = -2.0 * rp;
    shi[0] = 0.0;
    let (mut tlo, mut thi) = (lo, hi);
    tlo[0] = meta.l0;
    thi[0] = meta.l0 + 2.0 * rp;
    (ConvexPrimitive::axis_box(slo, shi), ConvexPrimitive::axis_box(tlo, thi))
}

/// The two flap boxes sealing corridor `idx` at the target-room face.
pub fn flaps(meta: &PcMeta, idx: usize) -> [ConvexPrimitive; 2] {
    let n = meta.n;
    let c = corridor_point(meta, idx, 0.0);
    let w = ((meta.kappa + meta.lambda) / 4.0).min(meta.r_prime);
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    lo[0] = meta.l0 - meta.tau;
    hi[0] = meta.l0;
    for k in 1..n - 1 {
        lo[k] = c[k] - w;
        hi[k] = c[k] + w;
    }
    let z = c[n - 1];
    let (mut ulo, mut uhi) = (lo.clone(), hi.clone());
    ulo[n - 1] = z + meta.g;
    uhi[n - 1] = z + meta.r_prime;
    let (mut dlo, mut dhi) = (lo, hi);
    dlo[n - 1] = z - meta.r_prime;
    dhi[n - 1] = z - meta.g;
    [ConvexPrimitive::axis_box(ulo, uhi), ConvexPrimitive::axis_box(dlo, dhi)]
}

/// Builds the parallel-corridor space as a free-union scene.
pub fn build_pc(params: &PcParams) -> Result<Scene> {
    let mut meta = params.derive()?;
    let n = meta.n;
    let rp = meta.r_prime;
    let mut free = Vec::with_capacity(meta.corridor_count + 2);
    for idx in 0..meta.corridor_count {
        // axes reach r' into both rooms so room <-> corridor moves stay inside one cell
        free.push(ConvexPrimitive::capsule(corridor_point(&meta, idx, -rp), corridor_point(&meta, idx, meta.l0 + rp), rp));
    }
    let (start_room, target_room) = rooms(&meta);
    let (slo, shi) = start_room.aabb();
    let (tlo, thi) = target_room.aabb();
    let s: Vec<f64> = (0..n).map(|k| 0.5 * (slo[k] + shi[k])).collect();
    let t: Vec<f64> = (0..n).map(|k| 0.5 * (tlo[k] + thi[k])).collect();
    let bbox = Aabb::new(slo.clone(), thi.clone());
    free.push(start_room);
    free.push(target_room);
    let mut extra = Vec::new();
    for idx in 0..meta.corridor_count {
        if Some(idx) == meta.unblocked {
            continue;
        }
        for f in flaps(&meta, idx) {
            extra.push(f);
            meta.flap_corridor.push(idx);
        }
    }
    let mut scene = Scene::free_union(bbox, free, extra, params.r, params.eps, s, Some(Point(t)))?;
    scene.meta = Some(SceneMeta::ParallelCorridors(meta));
    Ok(scene)
}

pub fn pc_meta(scene: &Scene) -> Option<&PcMeta> {
    match &scene.meta {
        Some(SceneMeta::ParallelCorridors(m)) => Some(m),
        _ => None,
    }
}

/// Records the order in which flapped corridors are first touched.
#[derive(Default)]
pub struct FlapRecorder {
    flap_corridor: Vec<usize>,
    pub order: Vec<usize>,
}

impl FlapRecorder {
    pub fn for_scene(scene: &Scene) -> Self {
        FlapRecorder { flap_corridor: pc_meta(scene).map(|m| m.flap_corridor.clone()).unwrap_or_default(), order: Vec::new() }
    }
}

impl Observer for FlapRecorder {
    fn on_contact(&mut self, _stop: &[f64], _contact: &[f64], binding: Binding) {
        if let Binding::Extra(i) = binding {
            if let Some(&c) = self.flap_corridor.get(i) {
                if !self.order.contains(&c) {
                    self.order.push(c);
                }
            }
        }
    }
}

/// Result of the two-phase adversary.
pub struct AdaptiveResult {
    pub scene: Scene,
    /// Corridors in the order the planner first touched their flaps with
    /// every corridor sealed.
    pub order: Vec<usize>,
    pub sealed_run: RunRecord,
}

/// Seals every corridor, runs the planner, and reopens the corridor whose
/// flaps it touched last.
pub fn adaptive_unblock(params: &PcParams, cfg: &PlannerConfig) -> Result<AdaptiveResult> {
    let mut sealed = params.clone();
    sealed.unblocked = Unblocked::Sealed;
    let scene = build_pc(&sealed)?;
    let count = pc_meta(&scene).expect("pc scene").corridor_count;
    let mut rec = FlapRecorder::for_scene(&scene);
    let sealed_run = run_planner(&scene, cfg, &mut rec)?;
    if rec.order.len() != count {
        return Err(Error::Adversary(format!("planner touched {} of {} sealed corridors", rec.order.len(), count)));
    }
    let last = *rec.order.last().expect("at least one corridor");
    let mut open = params.clone();
    open.unblocked = Unblocked::Index(last);
    Ok(AdaptiveResult { scene: build_pc(&open)?, order: rec.order, sealed_run })
}

/// Lower bound on any online path in a corridor space, evaluated as printed.
pub fn pc_lower_bound(l0: f64, kappa: f64, r_prime: f64, n: usize) -> f64 {
    let corridors = (l0 / kappa).powi(n as i32 - 2) * floor_tol(l0 / (2.0 * r_prime));
    2.0 * (corridors - 1.0) * (l0 - r_prime) + l0
}

/// Corridor length implied by an optimal length.
pub fn eq1_l0(l_opt: f64, n: usize, r_prime: f64) -> Result<f64> {
    if l_opt < 2.0 * r_prime || n < 1 {
        return Err(Error::Domain(format!("need l_opt >= 2 r', got {l_opt} < {}", 2.0 * r_prime)));
    }
    Ok((l_opt - 2.0 * r_prime) / (1.0 + ((n - 1) as f64).sqrt()))
}

/// Route length bound through the open corridor: `(1 + sqrt(n-1)) l0 + 2 r'`.
pub fn pc_route_bound(l0: f64, n: usize, r_prime: f64) -> f64 {
    (1.0 + ((n - 1) as f64).sqrt()) * l0 + 2.0 * r_prime
}

/// Structural lower bound `l_opt^n / (kappa^(n-2) r')` with unit constant.
pub fn thm52_bound(l_opt: f64, n: usize, r: f64, eps: f64) -> Result<f64> {
    let k = kappa(r, eps)?;
    Ok(l_opt.powi(n as i32) / (k.powi(n as i32 - 2) * (r + eps)))
}

/// Separation distance used for corridor isolation: `sqrt((kappa/2)^2 + r^2)`.
pub fn separation(r: f64, eps: f64) -> Result<f64> {
    let k = kappa(r, eps)?;
    Ok(((k / 2.0).powi(2) + r * r).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SineParams {
    pub k: f64,
    pub r: f64,
    pub segments: usize,
}

/// Samples `(t, sin(k t), 0)` for `t` in `[0, 1]`.
pub fn sine_polyline(k: f64, segments: usize) -> Vec<[f64; 3]> {
    (0..=segments)
        .map(|i| {
            let t = i as f64 / segments as f64;
            [t, (k * t).sin(), 0.0]
        })
        .collect()
}

/// The `r`-neighbourhood of the sine curve as a union of capsules. The robot
/// is given radius `r/2` and clearance `r/4` so that it fits with room to move.
pub fn build_sine_corridor(p: &SineParams) -> Result<Scene> {
    if !(p.k > 0.0) || !(p.r > 0.0) {
        return Err(Error::Domain("sine corridor needs k > 0 and r > 0".into()));
    }
    if (p.segments as f64) < 16.0 * p.k {
        return Err(Error::Domain(format!("need at least 16 k segments, got {}", p.segments)));
    }
    let pts = sine_polyline(p.k, p.segments);
    let free = pts.windows(2).map(|w| ConvexPrimitive::capsule(w[0], w[1], p.r)).collect();
    let r = p.r;
    let bbox = Aabb::new([-r, -1.0 - r, -r], [1.0 + r, 1.0 + r, r]);
    let t = *pts.last().expect("segments >= 1");
    let mut scene = Scene::free_union(bbox, free, vec![], r / 2.0, r / 4.0, [0.0, 0.0, 0.0], Some(Point::from(t)))?;
    scene.meta = Some(SceneMeta::SineCorridor { k: p.k, segments: p.segments });
    Ok(scene)
}

/// Arc length of the sine curve on `[0, 1]` by composite Simpson quadrature.
pub fn sine_arc_length(k: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let f = |t: f64| (1.0 + (k * (t)).cos().powi(2) * k * k).sqrt();
    let h = 1.0 / n as f64;
    let mut s = f(0.0) + f(1.0);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}

/// A wall between `S` and `T` whose far end carries a spine with `teeth`
/// long prongs, so its boundary grows with `teeth` while `d(S,T)` stays
/// `20 r`. Clearance is `r/2`.
pub fn build_comb(teeth: usize, r: f64) -> Result<Scene> {
    if teeth < 1 || !(r > 0.0) {
        return Err(Error::Domain("comb needs teeth >= 1 and r > 0".into()));
    }
    let pitch = 6.0 * r;
    let width = 2.0 * r;
    let depth = 20.0 * r;
    let half = 0.5 * (teeth as f64 * pitch).max(4.0 * r);
    let mut solids = vec![
        // the wall separating S and T
        ConvexPrimitive::axis_box([-r, -10.0 * r], [r, 10.0 * r]),
        // spine along its lower end
        ConvexPrimitive::axis_box([-half, -12.0 * r], [half, -10.0 * r]),
    ];
    for i in 0..teeth {
        let x0 = -half + pitch * i as f64 + 0.5 * (pitch - width);
        solids.push(ConvexPrimitive::axis_box([x0, -12.0 * r - depth], [x0 + width, -12.0 * r]));
    }
    let side = (half + 4.0 * r).max(14.0 * r);
    let bbox = Aabb::new([-side, -12.0 * r - depth - 4.0 * r], [side, 16.0 * r]);
    let mut scene = Scene::solid(bbox, solids, r, r / 2.0, [-10.0 * r, 0.0], Some(Point::from([10.0 * r, 0.0])))?;
    scene.meta = Some(SceneMeta::Comb { teeth });
    Ok(scene)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::MoveResult;

    #[test]
    fn np_examples() {
        assert_eq!(np(10.0, 2.0).unwrap(), 6);
        assert_eq!(np(10.0, 3.0).unwrap(), 4);
        assert_eq!(np(10.0, 10.0).unwrap(), 2);
        assert!(np(0.0, 1.0).is_err());
    }

    #[test]
    fn lambda_examples() {
        for (l0, k, m) in [(10.0, 2.0, 5), (10.0, 3.0, 4), (10.0, 9.0, 2)] {
            let (lambda, got) = select_lambda(l0, k).unwrap();
            assert_eq!(got, m);
            assert!(lambda > k);
            assert_eq!(np(l0, lambda).unwrap(), m);
        }
        assert!(select_lambda(1.0, 2.0).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(pc_lower_bound(10.0, 2.0, 1.0, 3), 442.0);
        assert_eq!(pc_lower_bound(10.0, 2.0, 1.0, 2), 82.0);
        // one corridor only: the bound reduces to l0
        assert_eq!(pc_lower_bound(10.0, 10.0, 5.0, 3), 10.0);
        assert!((eq1_l0(10.0, 3, 1.0).unwrap() - 8.0 / (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(eq1_l0(10.0, 2, 1.0).unwrap(), 4.0);
        assert_eq!(eq1_l0(2.0, 4, 1.0).unwrap(), 0.0);
        assert!(eq1_l0(1.0, 2, 1.0).is_err());
    }

    #[test]
    fn thm52_examples() {
        let eps = 2f64.sqrt() - 1.0;
        let v = thm52_bound(10.0, 3, 1.0, eps).unwrap();
        assert!((v - 1000.0 / (2.0 * 2f64.sqrt())).abs() < 1e-6);
        assert!((thm52_bound(3.0, 2, 1.0, 0.5).unwrap() - 9.0 / 1.5).abs() < 1e-12);
    }

    #[test]
    fn pc_counts() {
        let eps = 2f64.sqrt() - 1.0;
        let s = build_pc(&PcParams::new(10.0, eps, 1.0, 3, Unblocked::Index(0))).unwrap();
        let m = pc_meta(&s).unwrap();
        assert!((m.kappa - 2.0).abs() < 1e-12);
        assert_eq!(m.m, 5);
        assert_eq!(m.h, 3);
        assert_eq!(m.corridor_count, 20);
        assert_eq!(s.extra_solids.len(), 2 * 19);
        let s2 = build_pc(&PcParams::new(10.0, eps, 1.0, 2, Unblocked::Sealed)).unwrap();
        assert_eq!(pc_meta(&s2).unwrap().corridor_count, 4);
    }

    #[test]
    fn open_corridor_passes_and_sealed_blocks() {
        let eps = 2f64.sqrt() - 1.0;
        let s = build_pc(&PcParams::new(10.0, eps, 1.0, 3, Unblocked::Index(7))).unwrap();
        let m = pc_meta(&s).unwrap().clone();
        for idx in 0..m.corridor_count {
            let a = corridor_point(&m, idx, -s.r);
            let b = corridor_point(&m, idx, m.l0 + s.r);
            let res = s.first_contact_slice(&a, &b, s.r).unwrap();
            assert_eq!(res.is_reached(), idx == 7, "corridor {idx}");
            if let MoveResult::Blocked { binding, .. } = res {
                assert!(matches!(binding, Binding::Extra(_)));
            }
        }
    }

    #[test]
    fn comb_and_sine_build() {
        let c = build_comb(20, 0.1).unwrap();
        assert_eq!(c.solids.len(), 22);
        assert!(c.is_ball_free_slice(&c.start.0, c.r_prime()));
        let s = build_sine_corridor(&SineParams { k: 6.0, r: 0.1, segments: 200 }).unwrap();
        assert!(s.is_ball_free_slice(&s.start.0, s.r_prime()));
        let len = sine_arc_length(2.0 * std::f64::consts::PI, 2000);
        let chords: f64 = sine_polyline(2.0 * std::f64::consts::PI, 400).windows(2).map(|w| crate::geometry::dist(&w[0], &w[1])).sum();
        assert!(chords <= len + 1e-9 && chords > 0.999 * len);
    }
}
