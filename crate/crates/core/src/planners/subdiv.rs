use std::collections::{HashMap, HashSet};

use super::space::{CellSpace, SplitReport};
use super::{CellSnap, ColorCounts, GridInfo};
use crate::environment::Scene;
use crate::error::{Error, Result};
use crate::geometry::{cell_side, dist, ConvexPrimitive, FociEllipsoid, Point, DELTA_GEOM};
use crate::grid::{box_corners, Color, GridSpec};

/// A cell of the hierarchy: level-`level` cells have side `side / 3^level`
/// and are numbered linearly (axis 0 fastest) on the refined lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeKey {
    pub level: u8,
    pub id: u64,
}

/// Coarse grid of side `r / (2 sqrt n)` whose cells are split into `3^n`
/// children around contact points, down to the plain cell side.
pub struct SubdivSpace {
    base: GridSpec,
    finest: u8,
    split: HashSet<NodeKey>,
    colors: HashMap<NodeKey, Color>,
    ellipsoid: Option<FociEllipsoid>,
}

impl SubdivSpace {
    pub fn for_scene(scene: &Scene) -> Result<Self> {
        let n = scene.n;
        let l = cell_side(n, scene.eps)?;
        // never coarser than needed, never finer than the plain grid
        let coarse = (scene.r / (2.0 * (n as f64).sqrt())).max(l);
        let mut finest = 0u8;
        while coarse / 3f64.powi(finest as i32) > l {
            finest += 1;
            if finest > 30 {
                return Err(Error::Domain("eps is too small for subdivision".into()));
            }
        }
        let base = GridSpec::covering(&scene.bbox, coarse)?;
        Self::new(base, finest)
    }

    pub fn new(base: GridSpec, finest: u8) -> Result<Self> {
        let units = 3f64.powi(finest as i32);
        let total: f64 = base.dims.iter().map(|&d| d as f64 * units).product();
        if total > 2f64.powi(62) {
            return Err(Error::Domain("subdivision lattice too large".into()));
        }
        Ok(SubdivSpace { base, finest, split: HashSet::new(), colors: HashMap::new(), ellipsoid: None })
    }

    pub fn finest_level(&self) -> u8 {
        self.finest
    }

    pub fn base(&self) -> &GridSpec {
        &self.base
    }

    fn n(&self) -> usize {
        self.base.dim()
    }

    fn pow3(e: u8) -> i64 {
        3i64.pow(e as u32)
    }

    fn dims_at(&self, level: u8) -> Vec<i64> {
        self.base.dims.iter().map(|&d| d as i64 * Self::pow3(level)).collect()
    }

    fn side_at(&self, level: u8) -> f64 {
        self.base.l / 3f64.powi(level as i32)
    }

    pub fn coords(&self, k: NodeKey) -> Vec<i64> {
        let mut id = k.id as i64;
        self.dims_at(k.level)
            .into_iter()
            .map(|d| {
                let c = id % d;
                id /= d;
                c
            })
            .collect()
    }

    fn key(&self, level: u8, c: &[i64]) -> NodeKey {
        let dims = self.dims_at(level);
        let mut id = 0i64;
        let mut stride = 1i64;
        for k in 0..c.len() {
            id += c[k] * stride;
            stride *= dims[k];
        }
        NodeKey { level, id: id as u64 }
    }

    /// Half-open box of `k` in units of the finest side.
    fn unit_box(&self, k: NodeKey) -> (Vec<i64>, Vec<i64>) {
        let f = Self::pow3(self.finest - k.level);
        let c = self.coords(k);
        (c.iter().map(|x| x * f).collect(), c.iter().map(|x| (x + 1) * f).collect())
    }

    fn children_of(&self, k: NodeKey) -> Vec<NodeKey> {
        let n = self.n();
        let c = self.coords(k);
        (0..3usize.pow(n as u32))
            .map(|code| {
                let mut rest = code;
                let child: Vec<i64> = (0..n)
                    .map(|i| {
                        let o = (rest % 3) as i64;
                        rest /= 3;
                        3 * c[i] + o
                    })
                    .collect();
                self.key(k.level + 1, &child)
            })
            .collect()
    }

    fn middle_child(&self, k: NodeKey) -> NodeKey {
        let c: Vec<i64> = self.coords(k).iter().map(|x| 3 * x + 1).collect();
        self.key(k.level + 1, &c)
    }

    /// Leaves whose boxes overlap the half-open unit box `[qlo, qhi)`.
    fn leaves_in_units(&self, qlo: &[i64], qhi: &[i64], out: &mut Vec<NodeKey>) {
        let n = self.n();
        let f = Self::pow3(self.finest);
        let mut lo = vec![0i64; n];
        let mut hi = vec![0i64; n];
        for i in 0..n {
            lo[i] = qlo[i].max(0).div_euclid(f);
            hi[i] = ((qhi[i] - 1).div_euclid(f)).min(self.base.dims[i] as i64 - 1);
            if qhi[i] <= qlo[i] || lo[i] > hi[i] {
                return;
            }
        }
        let mut cur = lo.clone();
        loop {
            let k = self.key(0, &cur);
            self.collect(k, qlo, qhi, out);
            let mut i = 0;
            loop {
                if i == n {
                    return;
                }
                cur[i] += 1;
                if cur[i] <= hi[i] {
                    break;
                }
                cur[i] = lo[i];
                i += 1;
            }
        }
    }

    fn collect(&self, k: NodeKey, qlo: &[i64], qhi: &[i64], out: &mut Vec<NodeKey>) {
        if !self.split.contains(&k) {
            out.push(k);
            return;
        }
        for ch in self.children_of(k) {
            let (a, b) = self.unit_box(ch);
            if (0..a.len()).all(|i| a[i] < qhi[i] && qlo[i] < b[i]) {
                self.collect(ch, qlo, qhi, out);
            }
        }
    }

    fn intersects_ball(&self, k: NodeKey, p: &[f64], rho: f64) -> bool {
        let (lo, hi) = self.bounds(k);
        ConvexPrimitive::AxisBox { min: Point(lo), max: Point(hi) }.distance(p) <= rho
    }

    fn corners_within(&self, k: NodeKey, p: &[f64], rho: f64) -> bool {
        let (lo, hi) = self.bounds(k);
        box_corners(&lo, &hi).iter().all(|c| dist(c, p) <= rho)
    }

    fn stored(&self, k: NodeKey) -> Color {
        self.colors.get(&k).copied().unwrap_or(Color::White)
    }

    fn split_rec(&mut self, k: NodeKey, p: &[f64], rho: f64, rep: &mut SplitReport<NodeKey>) {
        let before = self.colors.remove(&k).unwrap_or(Color::White);
        self.split.insert(k);
        rep.splits += 1;
        let mid = self.middle_child(k);
        for ch in self.children_of(k) {
            let inherits = before == Color::Yellow && ch == mid;
            if inherits {
                rep.renamed.push((k, ch));
            }
            if self.corners_within(ch, p, rho) {
                self.colors.insert(ch, Color::Red);
                if inherits {
                    rep.yellow_to_red.push(ch);
                }
                continue;
            }
            if inherits {
                self.colors.insert(ch, Color::Yellow);
            }
            if ch.level < self.finest && self.intersects_ball(ch, p, rho) {
                self.split_rec(ch, p, rho, rep);
            }
        }
    }
}

impl CellSpace for SubdivSpace {
    type Key = NodeKey;

    fn locate(&self, p: &[f64]) -> Option<NodeKey> {
        let n = self.n();
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let x = p[i] - self.base.origin[i];
            let ext = self.base.dims[i] as f64 * self.base.l;
            if !(x >= -DELTA_GEOM && x <= ext + DELTA_GEOM) {
                return None;
            }
            c.push(((x / self.base.l).floor().max(0.0) as i64).min(self.base.dims[i] as i64 - 1));
        }
        let mut k = self.key(0, &c);
        while self.split.contains(&k) {
            let level = k.level + 1;
            let s = self.side_at(level);
            for i in 0..n {
                let v = ((p[i] - self.base.origin[i]) / s).floor() as i64;
                c[i] = v.clamp(3 * c[i], 3 * c[i] + 2);
            }
            k = self.key(level, &c);
        }
        Some(k)
    }

    fn center(&self, k: NodeKey) -> Vec<f64> {
        let s = self.side_at(k.level);
        self.coords(k).iter().enumerate().map(|(i, &c)| self.base.origin[i] + (c as f64 + 0.5) * s).collect()
    }

    fn bounds(&self, k: NodeKey) -> (Vec<f64>, Vec<f64>) {
        let s = self.side_at(k.level);
        let lo: Vec<f64> = self.coords(k).iter().enumerate().map(|(i, &c)| self.base.origin[i] + c as f64 * s).collect();
        let hi = lo.iter().map(|x| x + s).collect();
        (lo, hi)
    }

    fn neighbors(&self, k: NodeKey, diagonals: bool, out: &mut Vec<NodeKey>) {
        out.clear();
        let n = self.n();
        let (lo, hi) = self.unit_box(k);
        let offsets: Vec<Vec<i64>> = if diagonals {
            (0..3usize.pow(n as u32))
                .filter_map(|code| {
                    let mut rest = code;
                    let mut off = vec![0i64; n];
                    for i in (0..n).rev() {
                        off[i] = (rest % 3) as i64 - 1;
                        rest /= 3;
                    }
                    off.iter().any(|&o| o != 0).then_some(off)
                })
                .collect()
        } else {
            (0..n)
                .flat_map(|i| {
                    [-1i64, 1].into_iter().map(move |s| {
                        let mut off = vec![0i64; n];
                        off[i] = s;
                        off
                    })
                })
                .collect()
        };
        let mut seen = HashSet::new();
        let mut buf = Vec::new();
        for off in offsets {
            let mut qlo = lo.clone();
            let mut qhi = hi.clone();
            for i in 0..n {
                match off[i] {
                    1 => {
                        qlo[i] = hi[i];
                        qhi[i] = hi[i] + 1;
                    }
                    -1 => {
                        qlo[i] = lo[i] - 1;
                        qhi[i] = lo[i];
                    }
                    _ => {}
                }
            }
            buf.clear();
            self.leaves_in_units(&qlo, &qhi, &mut buf);
            for &m in &buf {
                if m != k && seen.insert(m) {
                    out.push(m);
                }
            }
        }
    }

    fn probe_proves_red(&self, c: NodeKey, d: NodeKey) -> bool {
        if c.level != self.finest || d.level != self.finest {
            return false;
        }
        let (a, b) = (self.coords(c), self.coords(d));
        a.iter().zip(&b).filter(|(x, y)| x != y).count() == 1
    }

    fn color(&self, k: NodeKey) -> Color {
        let c = self.stored(k);
        if c == Color::White {
            if let Some(e) = &self.ellipsoid {
                let (lo, hi) = self.bounds(k);
                if !e.intersects_box(&lo, &hi) {
                    return Color::Pink;
                }
            }
        }
        c
    }

    fn set_color(&mut self, k: NodeKey, to: Color) -> Result<()> {
        let from = self.color(k);
        if !from.can_become(to) {
            return Err(Error::IllegalTransition { from, to });
        }
        if to == Color::White || to == Color::Pink {
            self.colors.remove(&k);
        } else {
            self.colors.insert(k, to);
        }
        Ok(())
    }

    fn cells_in_box(&self, lo: &[f64], hi: &[f64]) -> Vec<NodeKey> {
        let u = self.side_at(self.finest);
        let n = self.n();
        let qlo: Vec<i64> = (0..n).map(|i| ((lo[i] - self.base.origin[i]) / u).floor() as i64).collect();
        let qhi: Vec<i64> = (0..n).map(|i| ((hi[i] - self.base.origin[i]) / u).floor() as i64 + 1).collect();
        let mut out = Vec::new();
        self.leaves_in_units(&qlo, &qhi, &mut out);
        out
    }

    fn all_cells(&self) -> Vec<NodeKey> {
        let n = self.n();
        let f = Self::pow3(self.finest);
        let hi: Vec<i64> = self.base.dims.iter().map(|&d| d as i64 * f).collect();
        let mut out = Vec::new();
        self.leaves_in_units(&vec![0; n], &hi, &mut out);
        out
    }

    fn begin_iteration(&mut self, e: Option<&FociEllipsoid>) -> Result<()> {
        self.ellipsoid = e.cloned();
        self.colors.retain(|_, c| *c != Color::Gray);
        Ok(())
    }

    fn counts(&self) -> ColorCounts {
        let mut cc = ColorCounts::default();
        for k in self.all_cells() {
            cc.add(self.color(k));
        }
        cc
    }

    fn snapshot(&self) -> Vec<CellSnap> {
        let mut v: Vec<CellSnap> = self
            .colors
            .iter()
            .map(|(&k, &color)| CellSnap { level: k.level, index: self.coords(k), color })
            .collect();
        v.sort();
        v
    }

    fn info(&self) -> GridInfo {
        GridInfo {
            origin: self.base.origin.clone(),
            side: self.base.l,
            dims: self.base.dims.clone(),
            finest_side: self.side_at(self.finest),
        }
    }


    fn is_leaf(&self, k: NodeKey) -> bool {
        if self.split.contains(&k) {
            return false;
        }
        if k.level == 0 {
            return true;
        }
        let pc: Vec<i64> = self.coords(k).iter().map(|x| x.div_euclid(3)).collect();
        self.split.contains(&self.key(k.level - 1, &pc))
    }

    fn subdivide_around(&mut self, p: &[f64], rho: f64) -> Result<SplitReport<NodeKey>> {
        let lo: Vec<f64> = p.iter().map(|x| x - rho).collect();
        let hi: Vec<f64> = p.iter().map(|x| x + rho).collect();
        let mut rep = SplitReport::default();
        for k in self.cells_in_box(&lo, &hi) {
            if k.level < self.finest && self.stored(k) != Color::Red && self.intersects_ball(k, p, rho) {
                self.split_rec(k, p, rho, &mut rep);
            }
        }
        Ok(rep)
    }
}
