//! The unknown space `X` and the robot's tactile sensor.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::geometry::{check_dim, ConvexPrimitive, Point, DELTA_GEOM};
use crate::error::{Error, Result};

/// Smallest advancement step and contact tolerance of the tactile sensor.
pub const DELTA_CONTACT: f64 = 1e-6;
/// Maximum number of advancement steps in one straight move.
pub const MAX_ADVANCE_STEPS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SceneMode {
    /// Free space is the union of `free_cells` minus `extra_solids`.
    FreeUnion,
    /// Free space is the bounding box minus `solids`.
    Solid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn new(min: impl Into<Point>, max: impl Into<Point>) -> Self {
        Aabb { min: min.into(), max: max.into() }
    }

    pub fn dim(&self) -> usize {
        self.min.dim()
    }

    /// Distance from `p` to the complement of the box (negative outside).
    pub fn margin(&self, p: &[f64]) -> (f64, usize, bool) {
        let mut best = (f64::INFINITY, 0, false);
        for k in 0..p.len() {
            let lo = p[k] - self.min[k];
            let hi = self.max[k] - p[k];
            if lo < best.0 {
                best = (lo, k, false);
            }
            if hi < best.0 {
                best = (hi, k, true);
            }
        }
        best
    }

    pub fn diameter(&self) -> f64 {
        self.min.dist(&self.max)
    }
}

/// Construction parameters of a parallel-corridor space, stored with the scene
/// so that bound evaluators and the adversary can recover them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcMeta {
    pub l0: f64,
    pub eps: f64,
    pub r: f64,
    pub n: usize,
    pub kappa: f64,
    pub r_prime: f64,
    pub lambda: f64,
    pub m: usize,
    pub h: usize,
    pub g: f64,
    pub tau: f64,
    pub corridor_count: usize,
    /// Index of the unblocked corridor, `None` when every corridor is flapped.
    pub unblocked: Option<usize>,
    /// For each extra solid, the corridor it seals.
    pub flap_corridor: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SceneMeta {
    ParallelCorridors(PcMeta),
    SineCorridor { k: f64, segments: usize },
    Comb { teeth: usize },
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub n: usize,
    pub bbox: Aabb,
    pub mode: SceneMode,
    #[serde(default)]
    pub free_cells: Vec<ConvexPrimitive>,
    #[serde(default)]
    pub solids: Vec<ConvexPrimitive>,
    #[serde(default)]
    pub extra_solids: Vec<ConvexPrimitive>,
    pub r: f64,
    pub eps: f64,
    #[serde(rename = "S")]
    pub start: Point,
    #[serde(rename = "T", default)]
    pub target: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<SceneMeta>,
}

/// Which constraint realizes the clearance at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Binding {
    Solid(usize),
    Bounds { axis: usize, upper: bool },
    FreeBoundary(usize),
    Extra(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MoveResult {
    Reached,
    Blocked { stop_center: Point, contact_point: Point, binding: Binding },
}

impl MoveResult {
    pub fn is_reached(&self) -> bool {
        matches!(self, MoveResult::Reached)
    }
}

impl Scene {
    pub fn solid(
        bbox: Aabb,
        solids: Vec<ConvexPrimitive>,
        r: f64,
        eps: f64,
        start: impl Into<Point>,
        target: Option<Point>,
    ) -> Result<Self> {
        let s = Scene {
            n: bbox.dim(),
            bbox,
            mode: SceneMode::Solid,
            free_cells: Vec::new(),
            solids,
            extra_solids: Vec::new(),
            r,
            eps,
            start: start.into(),
            target,
            meta: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn free_union(
        bbox: Aabb,
        free_cells: Vec<ConvexPrimitive>,
        extra_solids: Vec<ConvexPrimitive>,
        r: f64,
        eps: f64,
        start: impl Into<Point>,
        target: Option<Point>,
    ) -> Result<Self> {
        let s = Scene {
            n: bbox.dim(),
            bbox,
            mode: SceneMode::FreeUnion,
            free_cells,
            solids: Vec::new(),
            extra_solids,
            r,
            eps,
            start: start.into(),
            target,
            meta: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Scene("dimension must be at least 1".into()));
        }
        check_dim(n, self.bbox.min.dim())?;
        check_dim(n, self.bbox.max.dim())?;
        if !self.bbox.min.is_finite() || !self.bbox.max.is_finite() {
            return Err(Error::Scene("bounding box must be finite".into()));
        }
        if (0..n).any(|k| self.bbox.min[k] >= self.bbox.max[k]) {
            return Err(Error::Scene("bounding box is empty".into()));
        }
        if !(self.r > 0.0) || !(self.eps > 0.0) || !self.r.is_finite() || !self.eps.is_finite() {
            return Err(Error::Scene(format!("need r > 0 and eps > 0, got r={}, eps={}", self.r, self.eps)));
        }
        if self.mode == SceneMode::Solid && !self.free_cells.is_empty() {
            return Err(Error::Scene("solid scenes carry no free cells".into()));
        }
        if self.mode == SceneMode::FreeUnion && self.free_cells.is_empty() {
            return Err(Error::Scene("free-union scene has no free cells".into()));
        }
        for p in self.free_cells.iter().chain(&self.solids).chain(&self.extra_solids) {
            check_dim(n, p.dim())?;
            p.validate()?;
        }
        check_dim(n, self.start.dim())?;
        if !self.start.is_finite() || self.bbox.margin(&self.start.0).0 < 0.0 {
            return Err(Error::Scene("S must lie in the bounding box".into()));
        }
        if let Some(t) = &self.target {
            check_dim(n, t.dim())?;
            if !t.is_finite() {
                return Err(Error::Scene("T must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn r_prime(&self) -> f64 {
        self.r + self.eps
    }

    /// Lower bound on the distance from `c` to the obstacles (exact in Solid
    /// mode), together with the binding constraint.
    pub fn clearance_with_binding(&self, c: &[f64]) -> (f64, Binding) {
        let (bm, axis, upper) = self.bbox.margin(c);
        let mut best = (bm, Binding::Bounds { axis, upper });
        match self.mode {
            SceneMode::Solid => {
                for (i, s) in self.solids.iter().enumerate() {
                    let d = s.distance(c);
                    if d < best.0 {
                        best = (d, Binding::Solid(i));
                    }
                }
            }
            SceneMode::FreeUnion => {
                let mut inner = (f64::NEG_INFINITY, 0usize);
                for (i, cell) in self.free_cells.iter().enumerate() {
                    let m = cell.margin(c);
                    if m > inner.0 {
                        inner = (m, i);
                    }
                }
                if inner.0 < best.0 {
                    best = (inner.0, Binding::FreeBoundary(inner.1));
                }
                for (i, s) in self.extra_solids.iter().enumerate() {
                    let d = s.distance(c);
                    if d < best.0 {
                        best = (d, Binding::Extra(i));
                    }
                }
            }
        }
        best
    }

    pub fn clearance_slice(&self, c: &[f64]) -> f64 {
        self.clearance_with_binding(c).0
    }

    pub fn clearance(&self, c: &Point) -> Result<f64> {
        check_dim(self.n, c.dim())?;
        Ok(self.clearance_slice(&c.0))
    }

    /// The point of the binding obstacle nearest to `c`.
    pub fn contact_point(&self, c: &[f64], binding: Binding) -> Vec<f64> {
        match binding {
            Binding::Solid(i) => self.solids[i].nearest_boundary(c),
            Binding::Extra(i) => self.extra_solids[i].nearest_boundary(c),
            Binding::FreeBoundary(i) => self.free_cells[i].nearest_boundary(c),
            Binding::Bounds { axis, upper } => {
                let mut q = c.to_vec();
                q[axis] = if upper { self.bbox.max[axis] } else { self.bbox.min[axis] };
                q
            }
        }
    }

    /// Clearance at `c` with the witness obstacle point.
    pub fn nearest_obstacle(&self, c: &[f64]) -> (f64, Vec<f64>, Binding) {
        let (d, b) = self.clearance_with_binding(c);
        (d, self.contact_point(c, b), b)
    }

    pub fn is_ball_free_slice(&self, c: &[f64], radius: f64) -> bool {
        self.clearance_slice(c) >= radius - DELTA_GEOM
    }

    pub fn is_ball_free(&self, c: &Point, radius: f64) -> Result<bool> {
        check_dim(self.n, c.dim())?;
        Ok(self.is_ball_free_slice(&c.0, radius))
    }

    /// Lower bound on the clearance along the whole segment `a -> b`; exact
    /// in Solid mode.
    pub fn segment_clearance(&self, a: &[f64], b: &[f64]) -> f64 {
        // the box margin is concave, so its minimum on a segment is at an end
        let mut best = self.bbox.margin(a).0.min(self.bbox.margin(b).0);
        match self.mode {
            SceneMode::Solid => {
                for s in &self.solids {
                    best = best.min(s.segment_distance(a, b));
                }
            }
            SceneMode::FreeUnion => {
                let inner = self
                    .free_cells
                    .iter()
                    .map(|c| c.margin(a).min(c.margin(b)))
                    .fold(f64::NEG_INFINITY, f64::max);
                best = best.min(inner);
                for s in &self.extra_solids {
                    best = best.min(s.segment_distance(a, b));
                }
            }
        }
        best
    }

    /// Moves a ball of the given radius from `from` toward `to` by
    /// conservative advancement and reports the first contact, if any.
    pub fn first_contact_slice(&self, from: &[f64], to: &[f64], radius: f64) -> Result<MoveResult> {
        let c0 = self.clearance_slice(from);
        if c0 < radius - DELTA_GEOM {
            return Err(Error::Embedded(from.to_vec()));
        }
        let total = crate::geometry::dist(from, to);
        if total == 0.0 || self.segment_clearance(from, to) >= radius {
            return Ok(MoveResult::Reached);
        }
        let dir: Vec<f64> = from.iter().zip(to).map(|(a, b)| (b - a) / total).collect();
        let mut t = 0.0;
        let mut c = from.to_vec();
        for _ in 0..MAX_ADVANCE_STEPS {
            let (clr, binding) = self.clearance_with_binding(&c);
            let margin = clr - radius;
            if total - t <= margin.max(0.0) {
                return Ok(MoveResult::Reached);
            }
            if margin <= DELTA_CONTACT {
                let contact = self.contact_point(&c, binding);
                return Ok(MoveResult::Blocked { stop_center: Point(c), contact_point: Point(contact), binding });
            }
            t += margin;
            for k in 0..c.len() {
                c[k] = from[k] + t * dir[k];
            }
        }
        Err(Error::StepCap(MAX_ADVANCE_STEPS))
    }

    pub fn first_contact(&self, from: &Point, to: &Point, radius: f64) -> Result<MoveResult> {
        check_dim(self.n, from.dim())?;
        check_dim(self.n, to.dim())?;
        self.first_contact_slice(&from.0, &to.0, radius)
    }

    /// Canonical JSON encoding used for hashing and files.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let scene: Scene = serde_json::from_str(s)?;
        scene.validate()?;
        Ok(scene)
    }

    /// Hex SHA-256 of the compact JSON encoding.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("scene serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Predicate form of [`Scene::is_ball_free`].
pub fn is_ball_free(scene: &Scene, c: &Point, radius: f64) -> Result<bool> {
    scene.is_ball_free(c, radius)
}

pub fn first_contact(scene: &Scene, from: &Point, to: &Point, radius: f64) -> Result<MoveResult> {
    scene.first_contact(from, to, radius)
}

pub fn clearance(scene: &Scene, c: &Point) -> Result<f64> {
    scene.clearance(c)
}
