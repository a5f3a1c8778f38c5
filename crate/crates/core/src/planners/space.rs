use std::collections::{HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use super::{CellSnap, ColorCounts, GridInfo};
use crate::environment::Scene;
use crate::error::{Error, Result};
use crate::geometry::{cell_side, dist, FociEllipsoid, Point};
use crate::grid::{box_corners, pink_repaint, pink_unpaint, CellIndex, Color, ColorMap, GridSpec};

/// Cells the traversal engine can move between.
pub(crate) trait CellSpace {
    type Key: Copy + Eq + Hash + Ord + Debug;

    fn locate(&self, p: &[f64]) -> Option<Self::Key>;
    fn center(&self, k: Self::Key) -> Vec<f64>;
    fn bounds(&self, k: Self::Key) -> (Vec<f64>, Vec<f64>);
    fn neighbors(&self, k: Self::Key, diagonals: bool, out: &mut Vec<Self::Key>);
    /// Whether a blocked straight probe from `c` toward `d` proves that no
    /// `r + eps` ball fits anywhere in `d`.
    fn probe_proves_red(&self, c: Self::Key, d: Self::Key) -> bool;
    fn color(&self, k: Self::Key) -> Color;
    fn set_color(&mut self, k: Self::Key, c: Color) -> Result<()>;
    /// Cells meeting the axis box `[lo, hi]`.
    fn cells_in_box(&self, lo: &[f64], hi: &[f64]) -> Vec<Self::Key>;
    fn all_cells(&self) -> Vec<Self::Key>;
    /// Installs the ellipsoid of a new iteration (Pink handling) and clears Gray.
    fn begin_iteration(&mut self, e: Option<&FociEllipsoid>) -> Result<()>;
    fn counts(&self) -> ColorCounts;
    fn snapshot(&self) -> Vec<CellSnap>;
    fn info(&self) -> GridInfo;

    fn is_leaf(&self, _k: Self::Key) -> bool {
        true
    }

    /// Refines cells around a contact; returns the split report.
    fn subdivide_around(&mut self, _p: &[f64], _r_prime: f64) -> Result<SplitReport<Self::Key>> {
        Ok(SplitReport::default())
    }
}

#[derive(Debug)]
pub(crate) struct SplitReport<K> {
    pub splits: usize,
    /// Yellow cells that were split, with the child that inherits them.
    pub renamed: Vec<(K, K)>,
    /// Children that inherited a Yellow cell but were colored Red.
    pub yellow_to_red: Vec<K>,
}

impl<K> Default for SplitReport<K> {
    fn default() -> Self {
        SplitReport { splits: 0, renamed: Vec::new(), yellow_to_red: Vec::new() }
    }
}

/// Colors Red every cell of `space` whose corners all lie within `r_prime`
/// of `o`; returns the recolored cells with their previous colors.
pub(crate) fn maximal_coloring_in<S: CellSpace>(space: &mut S, o: &[f64], r_prime: f64) -> Result<Vec<(S::Key, Color)>> {
    let lo: Vec<f64> = o.iter().map(|x| x - r_prime).collect();
    let hi: Vec<f64> = o.iter().map(|x| x + r_prime).collect();
    let mut out = Vec::new();
    for k in space.cells_in_box(&lo, &hi) {
        let before = space.color(k);
        if before == Color::Red {
            continue;
        }
        let (blo, bhi) = space.bounds(k);
        if box_corners(&blo, &bhi).iter().all(|c| dist(c, o) <= r_prime) {
            space.set_color(k, Color::Red)?;
            out.push((k, before));
        }
    }
    Ok(out)
}

/// Grays every White cell whose White-or-Pink component misses `t`.
pub(crate) fn gray_repaint_in<S: CellSpace>(space: &mut S, t: Option<S::Key>, diagonals: bool) -> Result<usize> {
    let passable = |c: Color| c == Color::White || c == Color::Pink;
    let mut reach = HashSet::new();
    if let Some(t) = t {
        if passable(space.color(t)) {
            let mut q = VecDeque::from([t]);
            reach.insert(t);
            let mut nb = Vec::new();
            while let Some(k) = q.pop_front() {
                space.neighbors(k, diagonals, &mut nb);
                for &m in &nb {
                    if passable(space.color(m)) && reach.insert(m) {
                        q.push_back(m);
                    }
                }
            }
        }
    }
    let mut count = 0;
    for k in space.all_cells() {
        if space.color(k) == Color::White && !reach.contains(&k) {
            space.set_color(k, Color::Gray)?;
            count += 1;
        }
    }
    Ok(count)
}

/// The uniform grid of side `cell_side(n, eps)` over the scene's bounding box.
pub(crate) struct GridSpace {
    pub spec: GridSpec,
    pub colors: ColorMap,
}

impl GridSpace {
    pub fn for_scene(scene: &Scene) -> Result<Self> {
        let l = cell_side(scene.n, scene.eps)?;
        let spec = GridSpec::covering(&scene.bbox, l)?;
        if (scene.n as f64).sqrt() * l > scene.eps * (1.0 + 1e-12) {
            return Err(Error::Domain("cell diameter exceeds eps".into()));
        }
        let colors = ColorMap::new(&spec);
        Ok(GridSpace { spec, colors })
    }
}

impl CellSpace for GridSpace {
    type Key = usize;

    fn locate(&self, p: &[f64]) -> Option<usize> {
        self.spec.cell_id_of(p).ok()
    }

    fn center(&self, k: usize) -> Vec<f64> {
        self.spec.center_of_id(k)
    }

    fn bounds(&self, k: usize) -> (Vec<f64>, Vec<f64>) {
        self.spec.bounds_of_id(k)
    }

    fn neighbors(&self, k: usize, diagonals: bool, out: &mut Vec<usize>) {
        self.spec.neighbor_ids(k, diagonals, out);
    }

    fn probe_proves_red(&self, c: usize, d: usize) -> bool {
        let a = self.spec.index_of(c);
        let b = self.spec.index_of(d);
        a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count() == 1
    }

    fn color(&self, k: usize) -> Color {
        self.colors.get(k)
    }

    fn set_color(&mut self, k: usize, c: Color) -> Result<()> {
        self.colors.set(k, c)
    }

    fn cells_in_box(&self, lo: &[f64], hi: &[f64]) -> Vec<usize> {
        let n = self.spec.dim();
        let mut lo_ix = vec![0i64; n];
        let mut hi_ix = vec![0i64; n];
        for k in 0..n {
            let a = ((lo[k] - self.spec.origin[k]) / self.spec.l).floor() as i64;
            let b = ((hi[k] - self.spec.origin[k]) / self.spec.l).floor() as i64;
            lo_ix[k] = a.max(0);
            hi_ix[k] = b.min(self.spec.dims[k] as i64 - 1);
            if lo_ix[k] > hi_ix[k] {
                return Vec::new();
            }
        }
        let mut out = Vec::new();
        let mut cur = lo_ix.clone();
        loop {
            out.push(self.spec.id_of(&CellIndex(cur.clone())).expect("in range"));
            let mut k = 0;
            loop {
                if k == n {
                    return out;
                }
                cur[k] += 1;
                if cur[k] <= hi_ix[k] {
                    break;
                }
                cur[k] = lo_ix[k];
                k += 1;
            }
        }
    }

    fn all_cells(&self) -> Vec<usize> {
        (0..self.spec.num_cells()).collect()
    }

    fn begin_iteration(&mut self, e: Option<&FociEllipsoid>) -> Result<()> {
        pink_unpaint(&mut self.colors)?;
        for id in self.colors.ids_with(Color::Gray) {
            self.colors.set(id, Color::White)?;
        }
        if let Some(e) = e {
            pink_repaint(&mut self.colors, &self.spec, e)?;
        }
        Ok(())
    }

    fn counts(&self) -> ColorCounts {
        ColorCounts {
            white: self.colors.count(Color::White),
            yellow: self.colors.count(Color::Yellow),
            red: self.colors.count(Color::Red),
            pink: self.colors.count(Color::Pink),
            gray: self.colors.count(Color::Gray),
        }
    }

    fn snapshot(&self) -> Vec<CellSnap> {
        self.colors
            .non_white()
            .into_iter()
            .filter(|(_, c)| *c != Color::Pink)
            .map(|(id, color)| CellSnap { level: 0, index: self.spec.index_of(id).0, color })
            .collect()
    }

    fn info(&self) -> GridInfo {
        GridInfo { origin: self.spec.origin.clone(), side: self.spec.l, dims: self.spec.dims.clone(), finest_side: self.spec.l }
    }

}

/// Maximal coloring on a uniform grid: colors Red every cell whose corners
/// all lie within `r_prime` of the obstacle point `o`.
pub fn maximal_coloring(spec: &GridSpec, colors: &mut ColorMap, o: &Point, r_prime: f64) -> Result<Vec<CellIndex>> {
    crate::geometry::check_dim(spec.dim(), o.dim())?;
    let mut space = GridSpace { spec: spec.clone(), colors: std::mem::replace(colors, ColorMap::with_limit(spec, 0)) };
    let res = maximal_coloring_in(&mut space, &o.0, r_prime);
    *colors = space.colors;
    Ok(res?.into_iter().map(|(k, _)| spec.index_of(k)).collect())
}

/// Gray improvement on a uniform grid: every White cell that is not connected
/// to `t_cell` through White or Pink cells becomes Gray.
pub fn gray_repaint(spec: &GridSpec, colors: &mut ColorMap, t_cell: &CellIndex, diagonals: bool) -> Result<usize> {
    let t = spec.id_of(t_cell)?;
    let mut space = GridSpace { spec: spec.clone(), colors: std::mem::replace(colors, ColorMap::with_limit(spec, 0)) };
    let res = gray_repaint_in(&mut space, Some(t), diagonals);
    *colors = space.colors;
    res
}
