//! Cubical decomposition of the bounding box and per-cell color state.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::environment::Aabb;
use crate::error::{Error, Result};
use crate::geometry::{check_dim, FociEllipsoid, Point, DELTA_GEOM};

/// Grids with more cells than this keep their colors in a hash map.
pub const DENSE_LIMIT: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    White,
    Yellow,
    Red,
    Pink,
    Gray,
}

impl Color {
    pub const ALL: [Color; 5] = [Color::White, Color::Yellow, Color::Red, Color::Pink, Color::Gray];

    fn slot(self) -> usize {
        self as usize
    }

    pub fn can_become(self, to: Color) -> bool {
        use Color::*;
        self == to
            || matches!(
                (self, to),
                (White, Yellow | Red | Pink | Gray)
                    | (Pink, White | Red)
                    | (Gray, White | Red)
                    | (Yellow, Red | White)
            )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellIndex(pub Vec<i64>);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Point,
    pub l: f64,
    pub dims: Vec<usize>,
}

impl GridSpec {
    pub fn new(origin: Point, l: f64, dims: Vec<usize>) -> Result<Self> {
        check_dim(origin.dim(), dims.len())?;
        if !(l > 0.0) || dims.iter().any(|&d| d == 0) {
            return Err(Error::Domain(format!("grid needs l > 0 and nonempty dims, got l={l}, dims={dims:?}")));
        }
        Ok(GridSpec { origin, l, dims })
    }

    /// Smallest grid of side `l` anchored at `bbox.min` that covers `bbox`.
    pub fn covering(bbox: &Aabb, l: f64) -> Result<Self> {
        let dims = (0..bbox.dim())
            .map(|k| {
                let span = (bbox.max[k] - bbox.min[k]) / l;
                let mut d = span.ceil().max(1.0) as usize;
                if (d as f64) * l + bbox.min[k] < bbox.max[k] {
                    d += 1;
                }
                d
            })
            .collect();
        GridSpec::new(bbox.min.clone(), l, dims)
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn num_cells(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn id_of(&self, c: &CellIndex) -> Result<usize> {
        check_dim(self.dim(), c.0.len())?;
        let mut id = 0usize;
        let mut stride = 1usize;
        for k in 0..self.dim() {
            let v = c.0[k];
            if v < 0 || v as usize >= self.dims[k] {
                return Err(Error::CellOutOfRange(c.0.clone()));
            }
            id += v as usize * stride;
            stride *= self.dims[k];
        }
        Ok(id)
    }

    pub fn index_of(&self, mut id: usize) -> CellIndex {
        let mut ix = Vec::with_capacity(self.dim());
        for &d in &self.dims {
            ix.push((id % d) as i64);
            id /= d;
        }
        CellIndex(ix)
    }

    pub fn cell_of(&self, p: &Point) -> Result<CellIndex> {
        check_dim(self.dim(), p.dim())?;
        let mut ix = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let x = p[k] - self.origin[k];
            let ext = self.dims[k] as f64 * self.l;
            if !(x >= -DELTA_GEOM && x <= ext + DELTA_GEOM) {
                return Err(Error::OutOfGrid(p.0.clone()));
            }
            let v = ((x / self.l).floor().max(0.0) as usize).min(self.dims[k] - 1);
            ix.push(v as i64);
        }
        Ok(CellIndex(ix))
    }

    pub fn cell_id_of(&self, p: &[f64]) -> Result<usize> {
        self.id_of(&self.cell_of(&Point(p.to_vec()))?)
    }

    pub fn center_of(&self, c: &CellIndex) -> Result<Point> {
        self.id_of(c)?;
        Ok(Point((0..self.dim()).map(|k| self.origin[k] + (c.0[k] as f64 + 0.5) * self.l).collect()))
    }

    pub fn center_of_id(&self, id: usize) -> Vec<f64> {
        let c = self.index_of(id);
        (0..self.dim()).map(|k| self.origin[k] + (c.0[k] as f64 + 0.5) * self.l).collect()
    }

    pub fn bounds_of_id(&self, id: usize) -> (Vec<f64>, Vec<f64>) {
        let c = self.index_of(id);
        let lo: Vec<f64> = (0..self.dim()).map(|k| self.origin[k] + c.0[k] as f64 * self.l).collect();
        let hi = lo.iter().map(|x| x + self.l).collect();
        (lo, hi)
    }

    pub fn corners_of_id(&self, id: usize) -> Vec<Vec<f64>> {
        let (lo, hi) = self.bounds_of_id(id);
        box_corners(&lo, &hi)
    }

    pub fn neighbors(&self, c: &CellIndex, diagonals: bool) -> Result<Vec<CellIndex>> {
        let id = self.id_of(c)?;
        let mut out = Vec::new();
        self.neighbor_ids(id, diagonals, &mut out);
        Ok(out.into_iter().map(|i| self.index_of(i)).collect())
    }

    /// Neighbor ids in the deterministic order: axis 0 negative, axis 0
    /// positive, axis 1 negative, ... for faces; lexicographic offsets (axis 0
    /// most significant) with diagonals.
    pub fn neighbor_ids(&self, id: usize, diagonals: bool, out: &mut Vec<usize>) {
        out.clear();
        let c = self.index_of(id);
        let n = self.dim();
        if !diagonals {
            let mut stride = 1usize;
            for k in 0..n {
                if c.0[k] > 0 {
                    out.push(id - stride);
                }
                if (c.0[k] as usize) + 1 < self.dims[k] {
                    out.push(id + stride);
                }
                stride *= self.dims[k];
            }
            return;
        }
        let total = 3usize.pow(n as u32);
        'offsets: for code in 0..total {
            let mut rest = code;
            let mut off = vec![0i64; n];
            for k in (0..n).rev() {
                off[k] = (rest % 3) as i64 - 1;
                rest /= 3;
            }
            if off.iter().all(|&o| o == 0) {
                continue;
            }
            let mut nid = 0usize;
            let mut stride = 1usize;
            for k in 0..n {
                let v = c.0[k] + off[k];
                if v < 0 || v as usize >= self.dims[k] {
                    continue 'offsets;
                }
                nid += v as usize * stride;
                stride *= self.dims[k];
            }
            out.push(nid);
        }
    }
}

pub fn box_corners(lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let n = lo.len();
    (0..1usize << n)
        .map(|mask| (0..n).map(|k| if mask >> k & 1 == 1 { hi[k] } else { lo[k] }).collect())
        .collect()
}

#[derive(Clone, Debug)]
enum Store {
    Dense(Vec<Color>),
    Sparse(HashMap<usize, Color>),
}

/// Per-cell colors with transition checking; every cell starts White.
#[derive(Clone, Debug)]
pub struct ColorMap {
    store: Store,
    counts: [usize; 5],
    total: usize,
}

impl ColorMap {
    pub fn new(spec: &GridSpec) -> Self {
        Self::with_limit(spec, DENSE_LIMIT)
    }

    pub fn with_limit(spec: &GridSpec, dense_limit: usize) -> Self {
        let total = spec.num_cells();
        let store = if total <= dense_limit {
            Store::Dense(vec![Color::White; total])
        } else {
            Store::Sparse(HashMap::new())
        };
        let mut counts = [0; 5];
        counts[Color::White.slot()] = total;
        ColorMap { store, counts, total }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn get(&self, id: usize) -> Color {
        match &self.store {
            Store::Dense(v) => v[id],
            Store::Sparse(m) => m.get(&id).copied().unwrap_or(Color::White),
        }
    }

    pub fn set(&mut self, id: usize, to: Color) -> Result<()> {
        let from = self.get(id);
        if !from.can_become(to) {
            return Err(Error::IllegalTransition { from, to });
        }
        if from == to {
            return Ok(());
        }
        match &mut self.store {
            Store::Dense(v) => v[id] = to,
            Store::Sparse(m) => {
                if to == Color::White {
                    m.remove(&id);
                } else {
                    m.insert(id, to);
                }
            }
        }
        self.counts[from.slot()] -= 1;
        self.counts[to.slot()] += 1;
        Ok(())
    }

    pub fn count(&self, c: Color) -> usize {
        self.counts[c.slot()]
    }

    /// Ids currently holding color `c`, ascending.
    pub fn ids_with(&self, c: Color) -> Vec<usize> {
        match &self.store {
            Store::Dense(v) => (0..v.len()).filter(|&i| v[i] == c).collect(),
            Store::Sparse(m) => {
                if c == Color::White {
                    (0..self.total).filter(|i| !m.contains_key(i)).collect()
                } else {
                    let mut ids: Vec<usize> = m.iter().filter(|(_, &v)| v == c).map(|(&k, _)| k).collect();
                    ids.sort_unstable();
                    ids
                }
            }
        }
    }

    /// All cells that are not White, ascending by id.
    pub fn non_white(&self) -> Vec<(usize, Color)> {
        match &self.store {
            Store::Dense(v) => (0..v.len()).filter(|&i| v[i] != Color::White).map(|i| (i, v[i])).collect(),
            Store::Sparse(m) => {
                let mut out: Vec<(usize, Color)> = m.iter().map(|(&k, &v)| (k, v)).collect();
                out.sort_unstable();
                out
            }
        }
    }
}

/// Colors Pink every White cell that does not meet the ellipsoid.
pub fn pink_repaint(map: &mut ColorMap, spec: &GridSpec, e: &FociEllipsoid) -> Result<usize> {
    check_dim(spec.dim(), e.dim())?;
    let mut count = 0;
    for id in 0..spec.num_cells() {
        if map.get(id) != Color::White {
            continue;
        }
        let (lo, hi) = spec.bounds_of_id(id);
        if !e.intersects_box(&lo, &hi) {
            map.set(id, Color::Pink)?;
            count += 1;
        }
    }
    Ok(count)
}

/// Returns every Pink cell to White.
pub fn pink_unpaint(map: &mut ColorMap) -> Result<usize> {
    let ids = map.ids_with(Color::Pink);
    for &id in &ids {
        map.set(id, Color::White)?;
    }
    Ok(ids.len())
}

/// Flood fill over White cells from a White seed, in BFS order.
pub fn white_component_ids(map: &ColorMap, spec: &GridSpec, seed: usize, diagonals: bool) -> Result<Vec<usize>> {
    if map.get(seed) != Color::White {
        return Err(Error::SeedNotWhite);
    }
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::from([seed]);
    seen.insert(seed);
    let mut out = Vec::new();
    let mut nb = Vec::new();
    while let Some(id) = queue.pop_front() {
        out.push(id);
        spec.neighbor_ids(id, diagonals, &mut nb);
        for &m in &nb {
            if map.get(m) == Color::White && seen.insert(m) {
                queue.push_back(m);
            }
        }
    }
    Ok(out)
}

pub fn white_component(map: &ColorMap, spec: &GridSpec, seed: &CellIndex, diagonals: bool) -> Result<Vec<CellIndex>> {
    let id = spec.id_of(seed)?;
    Ok(white_component_ids(map, spec, id, diagonals)?.into_iter().map(|i| spec.index_of(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec2(l: f64, d: usize) -> GridSpec {
        GridSpec::new(Point::from([0.0, 0.0]), l, vec![d, d]).unwrap()
    }

    fn ci(v: &[i64]) -> CellIndex {
        CellIndex(v.to_vec())
    }

    #[test]
    fn cell_and_center_examples() {
        let s = spec2(0.5, 10);
        assert_eq!(s.cell_of(&Point::from([0.6, 0.1])).unwrap(), ci(&[1, 0]));
        assert_eq!(s.cell_of(&Point::from([0.0, 0.0])).unwrap(), ci(&[0, 0]));
        assert_eq!(s.cell_of(&Point::from([0.5, 0.5])).unwrap(), ci(&[1, 1]));
        assert!(s.cell_of(&Point::from([-0.1, 0.0])).is_err());
        assert_eq!(s.center_of(&ci(&[1, 0])).unwrap().0, vec![0.75, 0.25]);
        assert_eq!(s.center_of(&ci(&[0, 0])).unwrap().0, vec![0.25, 0.25]);
        let s2 = GridSpec::new(Point::from([-1.0, -1.0]), 1.0, vec![4, 4]).unwrap();
        assert_eq!(s2.center_of(&ci(&[1, 1])).unwrap().0, vec![0.5, 0.5]);
        assert!(s2.center_of(&ci(&[4, 0])).is_err());
    }

    #[test]
    fn neighbor_examples() {
        let s = spec2(1.0, 10);
        assert_eq!(
            s.neighbors(&ci(&[5, 5]), false).unwrap(),
            vec![ci(&[4, 5]), ci(&[6, 5]), ci(&[5, 4]), ci(&[5, 6])]
        );
        assert_eq!(s.neighbors(&ci(&[0, 0]), false).unwrap(), vec![ci(&[1, 0]), ci(&[0, 1])]);
        let d = s.neighbors(&ci(&[5, 5]), true).unwrap();
        assert_eq!(d.len(), 8);
        assert_eq!(d[0], ci(&[4, 4]));
        assert_eq!(d[7], ci(&[6, 6]));
    }

    #[test]
    fn transitions_are_checked() {
        let s = spec2(1.0, 3);
        let mut m = ColorMap::new(&s);
        m.set(0, Color::Yellow).unwrap();
        assert!(matches!(m.set(0, Color::Pink), Err(Error::IllegalTransition { .. })));
        m.set(1, Color::Red).unwrap();
        assert!(m.set(1, Color::White).is_err());
        assert!(m.set(1, Color::Yellow).is_err());
        m.set(2, Color::Pink).unwrap();
        assert!(m.set(2, Color::Yellow).is_err());
        m.set(2, Color::White).unwrap();
        assert_eq!(m.count(Color::White), 7);
    }

    #[test]
    fn pink_examples() {
        let s = spec2(1.0, 10);
        let mut m = ColorMap::new(&s);
        let big = FociEllipsoid::new(Point::from([5.0, 5.0]), Point::from([5.0, 5.0]), 1e6).unwrap();
        assert_eq!(pink_repaint(&mut m, &s, &big).unwrap(), 0);
        // degenerate ellipse: a segment inside cell (3,4)
        let seg = FociEllipsoid::new(Point::from([3.2, 4.5]), Point::from([3.8, 4.5]), 0.6).unwrap();
        m.set(0, Color::Yellow).unwrap();
        let pinked = pink_repaint(&mut m, &s, &seg).unwrap();
        assert_eq!(pinked, 98);
        assert_eq!(m.get(s.id_of(&ci(&[3, 4])).unwrap()), Color::White);
        assert_eq!(m.get(0), Color::Yellow);
        assert_eq!(pink_unpaint(&mut m).unwrap(), pinked);
        assert_eq!(m.count(Color::Pink), 0);
    }

    #[test]
    fn pink_matches_brute_force_outside_test() {
        let s = spec2(1.0, 10);
        let mut m = ColorMap::new(&s);
        let e = FociEllipsoid::new(Point::from([2.3, 3.1]), Point::from([6.6, 5.2]), 6.0).unwrap();
        pink_repaint(&mut m, &s, &e).unwrap();
        for id in 0..s.num_cells() {
            let (lo, hi) = s.bounds_of_id(id);
            let steps = 200;
            let touches = (0..=steps).any(|i| {
                (0..=steps).any(|j| {
                    let p = [lo[0] + (hi[0] - lo[0]) * i as f64 / steps as f64, lo[1] + (hi[1] - lo[1]) * j as f64 / steps as f64];
                    e.contains_slice(&p)
                })
            });
            if touches {
                assert_eq!(m.get(id), Color::White);
            }
            // every corner and the center outside is necessary for Pink
            if m.get(id) == Color::Pink {
                assert!(s.corners_of_id(id).iter().all(|c| !e.contains_slice(c)));
                assert!(!e.contains_slice(&s.center_of_id(id)));
            }
        }
    }

    #[test]
    fn white_component_examples() {
        let s = spec2(1.0, 3);
        let mut m = ColorMap::new(&s);
        assert_eq!(white_component(&m, &s, &ci(&[0, 0]), false).unwrap().len(), 9);
        for y in 0..3 {
            m.set(s.id_of(&ci(&[1, y])).unwrap(), Color::Red).unwrap();
        }
        let comp = white_component(&m, &s, &ci(&[0, 0]), false).unwrap();
        assert_eq!(comp.len(), 3);
        assert!(comp.iter().all(|c| c.0[0] == 0));
        assert!(matches!(white_component(&m, &s, &ci(&[1, 1]), false), Err(Error::SeedNotWhite)));
    }

    #[test]
    fn sparse_and_dense_agree() {
        let s = spec2(1.0, 6);
        let mut a = ColorMap::new(&s);
        let mut b = ColorMap::with_limit(&s, 4);
        assert!(!b.is_dense());
        for (id, c) in [(3, Color::Red), (7, Color::Yellow), (8, Color::Pink), (8, Color::White), (9, Color::Gray)] {
            a.set(id, c).unwrap();
            b.set(id, c).unwrap();
        }
        assert_eq!(a.non_white(), b.non_white());
        assert_eq!(a.ids_with(Color::White), b.ids_with(Color::White));
        for c in Color::ALL {
            assert_eq!(a.count(c), b.count(c));
        }
    }

    proptest! {
        #[test]
        fn cell_of_inverts_center_of(dims in prop::collection::vec(1usize..7, 1..4), l in 0.01..2.0f64, seed in 0usize..1000) {
            let n = dims.len();
            let s = GridSpec::new(Point(vec![-0.3; n]), l, dims).unwrap();
            let id = seed % s.num_cells();
            let c = s.index_of(id);
            prop_assert_eq!(s.id_of(&c).unwrap(), id);
            prop_assert_eq!(s.cell_of(&s.center_of(&c).unwrap()).unwrap(), c);
        }

        #[test]
        fn neighbors_are_symmetric(dims in prop::collection::vec(1usize..6, 1..4), seed in 0usize..1000, diag in any::<bool>()) {
            let n = dims.len();
            let s = GridSpec::new(Point(vec![0.0; n]), 1.0, dims).unwrap();
            let id = seed % s.num_cells();
            let mut nb = Vec::new();
            let mut back = Vec::new();
            s.neighbor_ids(id, diag, &mut nb);
            for &m in &nb {
                s.neighbor_ids(m, diag, &mut back);
                prop_assert!(back.contains(&id));
            }
            if !diag {
                prop_assert!(nb.len() <= 2 * n);
            } else {
                prop_assert!(nb.len() < 3usize.pow(n as u32));
            }
        }
    }
}
