use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::environment::{Scene, SceneMode};
use crate::error::{Error, Result};
use crate::geometry::{cell_side, dist, Point};

/// Default cap on grid nodes for the oracle.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeighborScheme {
    FaceOnly,
    AllDiagonals,
}

/// Offline shortest path for a ball of radius `r + eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub found: bool,
    /// Path length; 0 when no path was found.
    pub length: f64,
    pub path: Vec<Point>,
    pub resolution: f64,
    pub neighbor_scheme: NeighborScheme,
    /// Worst-case ratio between lattice-path and true lengths, when known.
    pub overhead_factor: Option<f64>,
    pub nodes_settled: u64,
    pub scene_hash: String,
}

/// Known lattice-metric overheads for all-diagonal neighbourhoods.
pub fn overhead_factor(n: usize) -> Option<f64> {
    match n {
        1 => Some(1.0),
        // 1 / cos(pi/8)
        2 => Some(1.0 / (std::f64::consts::PI / 8.0).cos()),
        3 => Some(1.09),
        _ => None,
    }
}

#[derive(PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

struct Lattice<'a> {
    scene: &'a Scene,
    rp: f64,
    origin: Vec<f64>,
    res: f64,
    dims: Vec<i64>,
    /// 0 unknown, 1 free, 2 blocked
    state: Vec<u8>,
}

impl<'a> Lattice<'a> {
    fn coords(&self, mut id: usize) -> Vec<i64> {
        self.dims
            .iter()
            .map(|&d| {
                let c = id as i64 % d;
                id /= d as usize;
                c
            })
            .collect()
    }

    fn id(&self, c: &[i64]) -> Option<usize> {
        let mut id = 0usize;
        let mut stride = 1usize;
        for k in 0..c.len() {
            if c[k] < 0 || c[k] >= self.dims[k] {
                return None;
            }
            id += c[k] as usize * stride;
            stride *= self.dims[k] as usize;
        }
        Some(id)
    }

    fn point(&self, c: &[i64]) -> Vec<f64> {
        c.iter().enumerate().map(|(k, &i)| self.origin[k] + i as f64 * self.res).collect()
    }

    fn free(&mut self, id: usize) -> bool {
        if self.state[id] == 0 {
            let p = self.point(&self.coords(id));
            self.state[id] = if self.scene.is_ball_free_slice(&p, self.rp) { 1 } else { 2 };
        }
        self.state[id] == 1
    }

    /// Exact segment test for solid scenes; endpoint + midpoint test for
    /// free unions, whose segment bound needs a single cell per segment.
    fn edge_ok(&self, a: &[f64], b: &[f64]) -> bool {
        match self.scene.mode {
            SceneMode::Solid => self.scene.segment_clearance(a, b) >= self.rp - 1e-9,
            SceneMode::FreeUnion => {
                let m: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
                self.scene.is_ball_free_slice(a, self.rp)
                    && self.scene.is_ball_free_slice(b, self.rp)
                    && self.scene.is_ball_free_slice(&m, self.rp)
            }
        }
    }
}

/// Dijkstra over a lattice of spacing `resolution` anchored at `S`, with
/// all-diagonal moves. Fails with `OracleBudget` when the lattice covering
/// the bounding box has more than `budget` nodes.
pub fn offline_lopt_with_budget(scene: &Scene, resolution: f64, budget: u64) -> Result<OracleResult> {
    scene.validate()?;
    let n = scene.n;
    let l = cell_side(n, scene.eps)?;
    if !(resolution > 0.0) || resolution > l / 2.0 + 1e-12 {
        return Err(Error::Domain(format!("resolution must be in (0, {}], got {resolution}", l / 2.0)));
    }
    let t = scene.target.clone().ok_or_else(|| Error::Config("oracle needs a target".into()))?;
    let s = &scene.start.0;
    let mut origin = Vec::with_capacity(n);
    let mut dims = Vec::with_capacity(n);
    let mut s_idx = Vec::with_capacity(n);
    let mut total: f64 = 1.0;
    for k in 0..n {
        let below = ((s[k] - scene.bbox.min[k]) / resolution + 1e-9).floor() as i64;
        let above = ((scene.bbox.max[k] - s[k]) / resolution + 1e-9).floor() as i64;
        origin.push(s[k] - below as f64 * resolution);
        dims.push(below + above + 1);
        s_idx.push(below);
        total *= (below + above + 1) as f64;
    }
    if total > budget as f64 || total > u32::MAX as f64 {
        return Err(Error::OracleBudget { nodes: total as u64, budget });
    }
    let mut lat = Lattice { scene, rp: scene.r_prime(), origin, res: resolution, dims, state: vec![0; total as usize] };
    let result = |found: bool, length: f64, path: Vec<Point>, settled: u64| OracleResult {
        found,
        length,
        path,
        resolution,
        neighbor_scheme: NeighborScheme::AllDiagonals,
        overhead_factor: overhead_factor(n),
        nodes_settled: settled,
        scene_hash: scene.hash(),
    };
    let src = lat.id(&s_idx).expect("S is in the lattice");
    if !lat.free(src) {
        return Ok(result(false, 0.0, Vec::new(), 0));
    }
    if lat.edge_ok(s, &t.0) {
        let d = dist(s, &t.0);
        return Ok(result(true, d, vec![scene.start.clone(), t], 1));
    }
    // Every free node within one cell side of T that sees it. The radius is
    // fixed in length so halving the resolution only adds links.
    let mut t_links: Vec<(usize, f64)> = Vec::new();
    {
        let reach = (l / resolution + 1e-9).floor() as i64;
        let base: Vec<i64> = (0..n).map(|k| ((t[k] - lat.origin[k]) / resolution).floor() as i64).collect();
        let span = (2 * reach + 2) as usize;
        for code in 0..span.pow(n as u32) {
            let mut rest = code;
            let c: Vec<i64> = (0..n)
                .map(|k| {
                    let v = base[k] - reach + (rest % span) as i64;
                    rest /= span;
                    v
                })
                .collect();
            let Some(id) = lat.id(&c) else { continue };
            let p = lat.point(&c);
            let d = dist(&p, &t.0);
            if d <= l + 1e-12 && lat.free(id) && lat.edge_ok(&p, &t.0) {
                t_links.push((id, d));
            }
        }
    }
    let t_link: HashMap<usize, f64> = t_links.into_iter().collect();
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(n as u32))
        .filter_map(|code| {
            let mut rest = code;
            let o: Vec<i64> = (0..n)
                .map(|_| {
                    let v = (rest % 3) as i64 - 1;
                    rest /= 3;
                    v
                })
                .collect();
            o.iter().any(|&v| v != 0).then_some(o)
        })
        .collect();
    let nn = total as usize;
    let mut distv = vec![f64::INFINITY; nn];
    let mut parent = vec![u32::MAX; nn];
    let mut done = vec![false; nn];
    let mut heap = BinaryHeap::new();
    distv[src] = 0.0;
    heap.push(Entry(0.0, src as u32));
    let mut best = (f64::INFINITY, usize::MAX);
    let mut settled = 0u64;
    while let Some(Entry(d, u)) = heap.pop() {
        let u = u as usize;
        if done[u] {
            continue;
        }
        if d >= best.0 {
            break;
        }
        done[u] = true;
        settled += 1;
        if let Some(&w) = t_link.get(&u) {
            if d + w < best.0 {
                best = (d + w, u);
            }
        }
        let cu = lat.coords(u);
        let pu = lat.point(&cu);
        for o in &offsets {
            let cv: Vec<i64> = cu.iter().zip(o).map(|(a, b)| a + b).collect();
            let Some(v) = lat.id(&cv) else { continue };
            if done[v] || !lat.free(v) {
                continue;
            }
            let w = resolution * (o.iter().filter(|&&x| x != 0).count() as f64).sqrt();
            if d + w >= distv[v] {
                continue;
            }
            let pv = lat.point(&cv);
            if !lat.edge_ok(&pu, &pv) {
                continue;
            }
            distv[v] = d + w;
            parent[v] = u as u32;
            heap.push(Entry(d + w, v as u32));
        }
    }
    if best.1 == usize::MAX {
        return Ok(result(false, 0.0, Vec::new(), settled));
    }
    let mut ids = vec![best.1];
    while *ids.last().unwrap() != src {
        ids.push(parent[*ids.last().unwrap()] as usize);
    }
    ids.reverse();
    let mut path: Vec<Point> = ids.iter().map(|&id| Point(lat.point(&lat.coords(id)))).collect();
    path[0] = scene.start.clone();
    path.push(t);
    let length = path.windows(2).map(|w| w[0].dist(&w[1])).sum();
    Ok(result(true, length, path, settled))
}

pub fn offline_lopt(scene: &Scene, resolution: f64) -> Result<OracleResult> {
    offline_lopt_with_budget(scene, resolution, DEFAULT_NODE_BUDGET)
}

/// Largest admissible oracle resolution for a scene.
pub fn default_resolution(scene: &Scene) -> Result<f64> {
    Ok(cell_side(scene.n, scene.eps)? / 2.0)
}
