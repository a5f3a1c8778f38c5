use std::collections::{HashMap, HashSet, VecDeque};

use super::space::{gray_repaint_in, maximal_coloring_in, CellSpace};
use super::{IterationStats, Mode, Observer, Outcome, PlannerConfig, RunRecord, RESTART_CAP, TOOL_VERSION};
use crate::environment::{MoveResult, Scene};
use crate::error::{Error, Result};
use crate::geometry::{cell_side, dist, point_segment_distance, FociEllipsoid, Point, DELTA_GEOM};
use crate::grid::{box_corners, Color};

enum Action<K> {
    Probe(K),
    Descend(K),
}

enum PassEnd {
    FoundT,
    Exhausted,
    RootLost,
    TargetRed,
}

/// BFS distances from the target cell through White cells. Entries at or
/// below `valid_upto` stay exact while cells only leave the White set.
struct Field<K> {
    dist: HashMap<K, u32>,
    valid_upto: u32,
}

pub(crate) struct Engine<'a, S: CellSpace> {
    scene: &'a Scene,
    cfg: &'a PlannerConfig,
    space: S,
    obs: &'a mut dyn Observer,
    r: f64,
    r_prime: f64,
    path: Vec<Point>,
    pos: Vec<f64>,
    target: Option<Vec<f64>>,
    target_known: bool,
    root: S::Key,
    parent: HashMap<S::Key, S::Key>,
    children: HashMap<S::Key, Vec<S::Key>>,
    blocked: HashSet<(S::Key, S::Key)>,
    stack: Vec<S::Key>,
    visited: HashSet<S::Key>,
    rewalk: HashSet<S::Key>,
    field: Option<Field<S::Key>>,
    probes: usize,
    tree_edges: usize,
    backtracks: usize,
    iter_visited: usize,
    iter_red: usize,
    iter_splits: usize,
}

impl<'a, S: CellSpace> Engine<'a, S> {
    pub fn new(scene: &'a Scene, cfg: &'a PlannerConfig, space: S, obs: &'a mut dyn Observer) -> Result<Self> {
        let start = scene.start.0.clone();
        let root = space
            .locate(&start)
            .ok_or_else(|| Error::Scene("S lies outside the grid".into()))?;
        Ok(Engine {
            scene,
            cfg,
            space,
            obs,
            r: scene.r,
            r_prime: scene.r_prime(),
            path: vec![scene.start.clone()],
            pos: start,
            // cover ignores any target the scene carries
            target: scene.target.as_ref().filter(|_| cfg.mode != Mode::Cover).map(|t| t.0.clone()),
            target_known: cfg.mode == Mode::Nav,
            root,
            parent: HashMap::new(),
            children: HashMap::new(),
            blocked: HashSet::new(),
            stack: Vec::new(),
            visited: HashSet::new(),
            rewalk: HashSet::new(),
            field: None,
            probes: 0,
            tree_edges: 0,
            backtracks: 0,
            iter_visited: 0,
            iter_red: 0,
            iter_splits: 0,
        })
    }

    pub fn run(mut self) -> Result<RunRecord> {
        let mut iterations = Vec::new();
        let (outcome, a0, t_prime) = match self.enter_root()? {
            false => (Outcome::NoRPrimePath, None, None),
            true => match self.cfg.mode {
                Mode::Cover => (self.run_cover(&mut iterations)?, None, None),
                Mode::Nav | Mode::Search => {
                    let t_prime = if self.cfg.mode == Mode::Nav {
                        Point(self.target.clone().expect("nav has a target"))
                    } else {
                        self.scene.start.clone()
                    };
                    let a0 = self.scene.start.dist(&t_prime) + cell_side(self.scene.n, self.scene.eps)?;
                    (self.run_boxes(&mut iterations, &t_prime, a0)?, Some(a0), Some(t_prime))
                }
            },
        };
        Ok(self.finish(outcome, iterations, a0, t_prime))
    }

    // ---- robot motion ----

    fn go(&mut self, p: Vec<f64>) {
        if p == self.pos {
            return;
        }
        self.notice(&p);
        self.pos = p.clone();
        self.path.push(Point(p));
    }

    fn notice(&mut self, to: &[f64]) {
        if self.target_known || !self.cfg.noticing_t {
            return;
        }
        if let Some(t) = &self.target {
            if point_segment_distance(t, &self.pos, to) <= self.r + DELTA_GEOM {
                self.target_known = true;
                self.field = None;
            }
        }
    }

    fn probe(&mut self, to: &[f64]) -> Result<MoveResult> {
        let res = self.scene.first_contact_slice(&self.pos, to, self.r)?;
        match &res {
            MoveResult::Reached => self.go(to.to_vec()),
            MoveResult::Blocked { stop_center, contact_point, binding } => {
                self.go(stop_center.0.clone());
                self.obs.on_contact(&stop_center.0, &contact_point.0, *binding);
            }
        }
        Ok(res)
    }

    /// Moves from the current position (S) to the center of the root cell.
    fn enter_root(&mut self) -> Result<bool> {
        if self.space.color(self.root) == Color::Red {
            return Ok(false);
        }
        let c = self.space.center(self.root);
        if !self.probe(&c)?.is_reached() {
            return Ok(false);
        }
        self.paint(self.root, Color::Yellow)?;
        Ok(true)
    }

    // ---- bookkeeping ----

    fn paint(&mut self, k: S::Key, c: Color) -> Result<()> {
        let old = self.space.color(k);
        self.space.set_color(k, c)?;
        if old == Color::White && c != Color::White {
            self.field_removed(k);
        }
        Ok(())
    }

    fn field_removed(&mut self, k: S::Key) {
        if let Some(f) = &mut self.field {
            if let Some(&d) = f.dist.get(&k) {
                f.valid_upto = f.valid_upto.min(d);
            }
        }
    }

    fn target_cell(&self) -> Option<S::Key> {
        self.target.as_ref().and_then(|t| self.space.locate(t))
    }

    fn in_target(&self, k: S::Key) -> bool {
        self.target.is_some() && self.target_cell() == Some(k)
    }

    fn greedy_active(&self) -> bool {
        self.target_known && (self.cfg.greedy || self.cfg.noticing_t)
    }

    fn tree_nodes(&self) -> Vec<S::Key> {
        let mut v: Vec<S::Key> = self.parent.keys().copied().collect();
        v.push(self.root);
        v.sort_unstable();
        v
    }

    fn ensure_field(&mut self) {
        if self.field.is_some() {
            return;
        }
        let mut dist = HashMap::new();
        if let Some(t) = self.target_cell() {
            if self.space.color(t) == Color::White {
                dist.insert(t, 0u32);
                let mut q = VecDeque::from([t]);
                let mut nb = Vec::new();
                while let Some(k) = q.pop_front() {
                    let d = dist[&k];
                    self.space.neighbors(k, self.cfg.diagonals, &mut nb);
                    for &m in &nb {
                        if self.space.color(m) == Color::White && !dist.contains_key(&m) {
                            dist.insert(m, d + 1);
                            q.push_back(m);
                        }
                    }
                }
            }
        }
        self.field = Some(Field { dist, valid_upto: u32::MAX });
    }

    fn choose(&mut self, c: S::Key) -> Option<Action<S::Key>> {
        let mut nb = Vec::new();
        self.space.neighbors(c, self.cfg.diagonals, &mut nb);
        if self.greedy_active() {
            loop {
                self.ensure_field();
                let f = self.field.as_ref().expect("field");
                let mut best: Option<(S::Key, u32)> = None;
                for &d in &nb {
                    if self.space.color(d) != Color::White || self.blocked.contains(&(c, d)) {
                        continue;
                    }
                    if let Some(&dd) = f.dist.get(&d) {
                        if best.map_or(true, |(_, b)| dd < b) {
                            best = Some((d, dd));
                        }
                    }
                }
                match best {
                    Some((_, dd)) if dd > f.valid_upto => self.field = None,
                    Some((d, _)) => return Some(Action::Probe(d)),
                    None => break,
                }
            }
        } else if let Some(&d) = nb
            .iter()
            .find(|&&d| self.space.color(d) == Color::White && !self.blocked.contains(&(c, d)))
        {
            return Some(Action::Probe(d));
        }
        self.children
            .get(&c)
            .and_then(|ch| ch.iter().find(|y| self.rewalk.contains(y) && !self.visited.contains(y)))
            .map(|&y| Action::Descend(y))
    }

    /// Marks tree cells whose subtree holds a cell with unexplored neighbors.
    fn compute_rewalk(&mut self) {
        self.rewalk.clear();
        let greedy = self.greedy_active();
        if greedy {
            self.ensure_field();
        }
        let mut nb = Vec::new();
        for k in self.tree_nodes() {
            self.space.neighbors(k, self.cfg.diagonals, &mut nb);
            let frontier = nb.iter().any(|&m| {
                self.space.color(m) == Color::White
                    && !self.blocked.contains(&(k, m))
                    && (!greedy || self.field.as_ref().is_some_and(|f| f.dist.contains_key(&m)))
            });
            if frontier {
                let mut x = k;
                while self.rewalk.insert(x) {
                    match self.parent.get(&x) {
                        Some(&p) => x = p,
                        None => break,
                    }
                }
            }
        }
    }

    fn explore_pass(&mut self) -> Result<PassEnd> {
        self.stack = vec![self.root];
        self.visited.clear();
        self.visited.insert(self.root);
        let end = self.explore_inner();
        self.iter_visited += self.visited.len();
        end
    }

    fn explore_inner(&mut self) -> Result<PassEnd> {
        if self.in_target(self.root) {
            return Ok(PassEnd::FoundT);
        }
        loop {
            let c = *self.stack.last().expect("nonempty stack");
            match self.choose(c) {
                None => {
                    self.stack.pop();
                    match self.stack.last() {
                        None => return Ok(PassEnd::Exhausted),
                        Some(&p) => {
                            let pc = self.space.center(p);
                            self.go(pc);
                        }
                    }
                }
                Some(Action::Descend(y)) => {
                    let yc = self.space.center(y);
                    self.go(yc);
                    self.visited.insert(y);
                    self.stack.push(y);
                    if self.in_target(y) {
                        return Ok(PassEnd::FoundT);
                    }
                }
                Some(Action::Probe(d)) => {
                    self.probes += 1;
                    let to = self.space.center(d);
                    match self.probe(&to)? {
                        MoveResult::Reached => {
                            self.paint(d, Color::Yellow)?;
                            self.parent.insert(d, c);
                            self.children.entry(c).or_default().push(d);
                            self.tree_edges += 1;
                            self.visited.insert(d);
                            self.stack.push(d);
                            if self.in_target(d) {
                                return Ok(PassEnd::FoundT);
                            }
                        }
                        MoveResult::Blocked { contact_point, .. } => {
                            let (lo, hi) = self.space.bounds(d);
                            let red = self.space.probe_proves_red(c, d)
                                || box_corners(&lo, &hi).iter().all(|q| dist(q, &contact_point.0) <= self.r_prime);
                            if red {
                                self.paint(d, Color::Red)?;
                                self.iter_red += 1;
                            } else {
                                self.blocked.insert((c, d));
                            }
                            let cc = self.space.center(c);
                            self.go(cc);
                            if let Some(end) = self.after_contact(&contact_point.0)? {
                                return Ok(end);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Maximal coloring, subdivision and the resulting backtracking.
    fn after_contact(&mut self, o: &[f64]) -> Result<Option<PassEnd>> {
        let mut lost: Vec<S::Key> = Vec::new();
        if self.cfg.maximal_coloring || self.cfg.subdivision {
            for (k, before) in maximal_coloring_in(&mut self.space, o, self.r_prime)? {
                if before == Color::White {
                    self.field_removed(k);
                }
                if before == Color::Yellow {
                    lost.push(k);
                }
            }
        }
        if self.cfg.subdivision {
            let rep = self.space.subdivide_around(o, self.r_prime)?;
            if rep.splits > 0 {
                self.iter_splits += rep.splits;
                for (old, new) in rep.renamed {
                    self.rename(old, new);
                }
                lost.extend(rep.yellow_to_red);
                let space = &self.space;
                self.blocked.retain(|(a, b)| space.is_leaf(*a) && space.is_leaf(*b));
                self.field = None;
            }
        }
        if self.target_known {
            if let Some(t) = self.target_cell() {
                if self.space.color(t) == Color::Red && (self.cfg.maximal_coloring || self.cfg.subdivision) {
                    return Ok(Some(PassEnd::TargetRed));
                }
            }
        }
        if lost.is_empty() {
            return Ok(None);
        }
        let lost_set: HashSet<S::Key> = lost.iter().copied().collect();
        if let Some(i) = self.stack.iter().position(|k| lost_set.contains(k)) {
            if i == 0 {
                return Ok(Some(PassEnd::RootLost));
            }
            self.backtracks += 1;
            for j in (i - 1..self.stack.len() - 1).rev() {
                let p = self.space.center(self.stack[j]);
                self.go(p);
            }
            let cut = self.stack[i];
            self.stack.truncate(i);
            self.prune(cut)?;
        }
        for k in lost {
            if self.parent.contains_key(&k) || self.children.contains_key(&k) {
                self.prune(k)?;
            }
        }
        if self.space.color(self.root) == Color::Red {
            return Ok(Some(PassEnd::RootLost));
        }
        Ok(None)
    }

    /// Detaches the subtree rooted at `k`; its Yellow descendants become White.
    fn prune(&mut self, k: S::Key) -> Result<()> {
        if let Some(p) = self.parent.remove(&k) {
            if let Some(ch) = self.children.get_mut(&p) {
                ch.retain(|&x| x != k);
            }
        }
        let mut q: VecDeque<S::Key> = self.children.remove(&k).unwrap_or_default().into();
        while let Some(x) = q.pop_front() {
            self.parent.remove(&x);
            if let Some(ch) = self.children.remove(&x) {
                q.extend(ch);
            }
            if self.space.color(x) == Color::Yellow {
                self.paint(x, Color::White)?;
            }
            self.visited.remove(&x);
            self.rewalk.remove(&x);
        }
        Ok(())
    }

    fn rename(&mut self, old: S::Key, new: S::Key) {
        let swap = |x: &mut S::Key| {
            if *x == old {
                *x = new;
            }
        };
        if self.root == old {
            self.root = new;
        }
        self.stack.iter_mut().for_each(swap);
        if let Some(p) = self.parent.remove(&old) {
            self.parent.insert(new, p);
            if let Some(ch) = self.children.get_mut(&p) {
                ch.iter_mut().for_each(swap);
            }
        }
        if let Some(ch) = self.children.remove(&old) {
            for &c in &ch {
                self.parent.insert(c, new);
            }
            self.children.insert(new, ch);
        }
        if self.visited.remove(&old) {
            self.visited.insert(new);
        }
        if self.rewalk.remove(&old) {
            self.rewalk.insert(new);
        }
    }

    /// Returns to S along the tree, forgets all Yellow cells and re-enters
    /// the (possibly refined) start cell.
    fn restart(&mut self) -> Result<bool> {
        let mut k = self.stack.last().copied().unwrap_or(self.root);
        while let Some(&p) = self.parent.get(&k) {
            let pc = self.space.center(p);
            self.go(pc);
            k = p;
        }
        self.go(self.scene.start.0.clone());
        for k in self.tree_nodes() {
            if self.space.color(k) == Color::Yellow {
                self.paint(k, Color::White)?;
            }
        }
        self.parent.clear();
        self.children.clear();
        self.blocked.clear();
        self.stack.clear();
        self.field = None;
        self.root = self
            .space
            .locate(&self.scene.start.0)
            .ok_or_else(|| Error::Scene("S lies outside the grid".into()))?;
        self.enter_root()
    }

    fn yellow_touches_pink(&self) -> bool {
        let mut nb = Vec::new();
        self.tree_nodes().into_iter().any(|k| {
            self.space.neighbors(k, self.cfg.diagonals, &mut nb);
            nb.iter().any(|&m| self.space.color(m) == Color::Pink)
        })
    }

    /// Whether some Yellow cell reaches T's cell through White or Pink cells.
    fn target_component_touches_yellow(&self) -> bool {
        let Some(t) = self.target_cell() else { return false };
        let passable = |c: Color| c == Color::White || c == Color::Pink;
        if !passable(self.space.color(t)) {
            return false;
        }
        let mut seen = HashSet::from([t]);
        let mut q = VecDeque::from([t]);
        let mut nb = Vec::new();
        while let Some(k) = q.pop_front() {
            self.space.neighbors(k, self.cfg.diagonals, &mut nb);
            for &m in &nb {
                let c = self.space.color(m);
                if c == Color::Yellow {
                    return true;
                }
                if passable(c) && seen.insert(m) {
                    q.push_back(m);
                }
            }
        }
        false
    }

    fn take_iteration(&mut self, a: f64, restarts: usize) -> IterationStats {
        let it = IterationStats {
            a,
            cells_visited: self.iter_visited,
            cells_probed_red: self.iter_red,
            restarts,
            subdivisions: self.iter_splits,
        };
        self.iter_visited = 0;
        self.iter_red = 0;
        self.iter_splits = 0;
        it
    }

    fn run_cover(&mut self, iterations: &mut Vec<IterationStats>) -> Result<Outcome> {
        self.space.begin_iteration(None)?;
        let mut restarts = 0;
        loop {
            self.compute_rewalk();
            let splits_before = self.iter_splits;
            match self.explore_pass()? {
                PassEnd::RootLost => {
                    iterations.push(self.take_iteration(0.0, restarts));
                    return Ok(Outcome::NoRPrimePath);
                }
                PassEnd::FoundT | PassEnd::TargetRed => unreachable!("cover mode has no target"),
                PassEnd::Exhausted => {
                    if self.cfg.subdivision && self.iter_splits > splits_before {
                        restarts += 1;
                        if restarts > RESTART_CAP {
                            return Err(Error::RestartCap(RESTART_CAP));
                        }
                        if !self.restart()? {
                            iterations.push(self.take_iteration(0.0, restarts));
                            return Ok(Outcome::NoRPrimePath);
                        }
                        continue;
                    }
                    break;
                }
            }
        }
        iterations.push(self.take_iteration(0.0, restarts));
        self.go(self.scene.start.0.clone());
        Ok(Outcome::CoverComplete)
    }

    fn run_boxes(&mut self, iterations: &mut Vec<IterationStats>, t_prime: &Point, a0: f64) -> Result<Outcome> {
        let mut a = a0;
        loop {
            let e = FociEllipsoid::new(self.scene.start.clone(), t_prime.clone(), a)?;
            self.space.begin_iteration(Some(&e))?;
            self.field = None;
            let mut restarts = 0;
            let result = loop {
                if self.cfg.gray && self.target_known {
                    let t = self.target_cell();
                    gray_repaint_in(&mut self.space, t, self.cfg.diagonals)?;
                    self.field = None;
                }
                self.compute_rewalk();
                let splits_before = self.iter_splits;
                let restart_needed: bool;
                match self.explore_pass()? {
                    PassEnd::FoundT => {
                        let t = self.target.clone().expect("target");
                        match self.probe(&t)? {
                            MoveResult::Reached => break Some(Outcome::ReachedTarget),
                            MoveResult::Blocked { contact_point, .. } => {
                                let here = self.space.center(*self.stack.last().expect("stack"));
                                self.go(here);
                                if !self.cfg.subdivision {
                                    break Some(Outcome::TargetUnreachable);
                                }
                                match self.after_contact(&contact_point.0)? {
                                    Some(PassEnd::RootLost) => break Some(Outcome::NoRPrimePath),
                                    Some(_) => break Some(Outcome::TargetUnreachable),
                                    None => {}
                                }
                                if self.iter_splits == splits_before {
                                    break Some(Outcome::TargetUnreachable);
                                }
                                restart_needed = true;
                            }
                        }
                    }
                    PassEnd::RootLost => break Some(Outcome::NoRPrimePath),
                    PassEnd::TargetRed => break Some(Outcome::TargetUnreachable),
                    PassEnd::Exhausted => {
                        if self.cfg.subdivision && self.iter_splits > splits_before {
                            restart_needed = true;
                        } else {
                            let alive = if self.greedy_active() {
                                self.target_component_touches_yellow()
                            } else {
                                self.yellow_touches_pink()
                            };
                            if !alive || self.space.counts().pink == 0 {
                                break Some(Outcome::TargetUnreachable);
                            }
                            break None;
                        }
                    }
                }
                if restart_needed {
                    restarts += 1;
                    if restarts > RESTART_CAP {
                        return Err(Error::RestartCap(RESTART_CAP));
                    }
                    if !self.restart()? {
                        break Some(Outcome::NoRPrimePath);
                    }
                }
            };
            iterations.push(self.take_iteration(a, restarts));
            if let Some(outcome) = result {
                return Ok(outcome);
            }
            a *= 2.0;
        }
    }

    fn finish(mut self, outcome: Outcome, iterations: Vec<IterationStats>, a0: Option<f64>, t_prime: Option<Point>) -> RunRecord {
        let mut nb = Vec::new();
        self.space.neighbors(self.root, false, &mut nb);
        let s_enclosed_by_red = !nb.is_empty() && nb.iter().all(|&m| self.space.color(m) == Color::Red);
        let path = std::mem::take(&mut self.path);
        let total_length = RunRecord::path_length(&path);
        RunRecord {
            algo: if self.cfg.mode == Mode::Cover { "cboxes".into() } else { "boxes".into() },
            config: self.cfg.clone(),
            path,
            total_length,
            outcome,
            iterations,
            color_counts: self.space.counts(),
            a0,
            t_prime,
            tree_edges: self.tree_edges,
            probes: self.probes,
            backtracks: self.backtracks,
            s_enclosed_by_red,
            grid: Some(self.space.info()),
            snapshot: self.space.snapshot(),
            bug: None,
            scene_hash: self.scene.hash(),
            tool_version: TOOL_VERSION.into(),
        }
    }
}
