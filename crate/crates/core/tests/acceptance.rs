//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::{HashSet, VecDeque};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tactile_nav::adversarial::{
    adaptive_unblock, adjacent_corridors, build_comb, corridor_point, pc_meta, select_lambda, separation, PcParams,
    Unblocked,
};
use tactile_nav::bug2d::{bug1, cbug};
use tactile_nav::environment::{Aabb, MoveResult, Scene};
use tactile_nav::geometry::{dist, kappa, ConvexPrimitive};
use tactile_nav::grid::GridSpec;
use tactile_nav::harness::random::{random_scene, RandomSpec};
use tactile_nav::harness::verify::{ROW_COVER, ROW_COVER_EXACT, ROW_ITER, ROW_NAV, ROW_PC};
use tactile_nav::harness::{
    boxes_upper, cbug_upper, default_a0, default_resolution, iteration_bound, offline_lopt, verify_run, OracleResult,
};
use tactile_nav::planners::{boxes, cboxes, run_planner, NoObserver, Outcome, PlannerConfig, RunRecord};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Random scenes whose start and target the oracle connects.
struct Suite {
    scenes: Vec<(String, Scene, OracleResult)>,
}

impl Suite {
    fn build() -> Suite {
        let mut scenes = Vec::new();
        for (n, want) in [(2usize, 30usize), (3, 20)] {
            let spec = RandomSpec::small(n);
            let mut seed = 0u64;
            let mut got = 0;
            while got < want {
                seed += 1;
                let Ok(scene) = random_scene(&spec, 1000 * n as u64 + seed) else { continue };
                let o = offline_lopt(&scene, default_resolution(&scene).unwrap()).unwrap();
                if o.found {
                    scenes.push((format!("random{n}d-{seed}"), scene, o));
                    got += 1;
                }
            }
        }
        Suite { scenes }
    }
}

fn variants() -> Vec<(&'static str, PlannerConfig)> {
    let nav = PlannerConfig::nav;
    vec![
        ("greedy", PlannerConfig { greedy: true, ..nav() }),
        ("gray", PlannerConfig { gray: true, ..nav() }),
        ("diagonals", PlannerConfig { diagonals: true, ..nav() }),
        ("maximal-coloring", PlannerConfig { maximal_coloring: true, ..nav() }),
        ("subdivision", PlannerConfig { subdivision: true, ..nav() }),
    ]
}

fn criterion1(suite: &Suite) -> Check {
    let t = Instant::now();
    let mut reached = 0;
    for (name, scene, _) in &suite.scenes {
        let run = boxes(scene, &PlannerConfig::nav()).map_err(|e| format!("{name}: {e}"))?;
        ensure(run.outcome == Outcome::ReachedTarget, || format!("{name}: {:?}", run.outcome))?;
        reached += 1;
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 300.0, || format!("took {secs:.0}s"))?;
    Ok(format!("{reached}/{} reached in {secs:.1}s", suite.scenes.len()))
}

/// Bottleneck-free rooms for coverage: every gap between obstacles and
/// walls is at least `2r' + 2l` wide.
fn cover_scenes() -> Vec<Scene> {
    let disk = |c: [f64; 2], r: f64| ConvexPrimitive::sphere(c, r);
    let block = |lo: [f64; 2], hi: [f64; 2]| ConvexPrimitive::axis_box(lo, hi);
    let layouts: Vec<(f64, Vec<ConvexPrimitive>)> = vec![
        (3.0, vec![]),
        (3.0, vec![disk([1.5, 1.5], 0.4)]),
        (4.0, vec![disk([1.4, 2.6], 0.3), disk([2.6, 1.4], 0.3)]),
        (2.5, vec![disk([1.25, 1.25], 0.25)]),
        (4.0, vec![block([1.0, 1.0], [2.0, 1.6]), block([2.6, 2.2], [3.0, 3.0])]),
    ];
    layouts
        .into_iter()
        .map(|(side, solids)| {
            Scene::solid(Aabb::new([0.0, 0.0], [side, side]), solids, 0.2, 0.2, [0.5, 0.5], None).unwrap()
        })
        .collect()
}

/// Face-adjacent cells joined by radius-`r` clear segments, from the cell
/// the robot can enter from `S`.
fn flood_g0(scene: &Scene, spec: &GridSpec) -> HashSet<usize> {
    let root = spec.cell_id_of(scene.start.coords()).unwrap();
    let mut seen = HashSet::new();
    let mut q = VecDeque::new();
    if scene.segment_clearance(scene.start.coords(), &spec.center_of_id(root)) >= scene.r {
        seen.insert(root);
        q.push_back(root);
    }
    let mut nb = Vec::new();
    while let Some(c) = q.pop_front() {
        spec.neighbor_ids(c, false, &mut nb);
        let cc = spec.center_of_id(c);
        for &d in &nb {
            if !seen.contains(&d) && scene.segment_clearance(&cc, &spec.center_of_id(d)) >= scene.r {
                seen.insert(d);
                q.push_back(d);
            }
        }
    }
    seen
}

/// Fine lattice nodes reachable from `S` by an `r'`-clear path.
struct ReachR {
    origin: [f64; 2],
    h: f64,
    dims: [i64; 2],
    reach: Vec<bool>,
}

impl ReachR {
    fn new(scene: &Scene, h: f64) -> ReachR {
        let origin = [scene.bbox.min[0], scene.bbox.min[1]];
        let dims = [
            ((scene.bbox.max[0] - origin[0]) / h).floor() as i64 + 1,
            ((scene.bbox.max[1] - origin[1]) / h).floor() as i64 + 1,
        ];
        let rp = scene.r_prime();
        let pt = |i: i64, j: i64| [origin[0] + i as f64 * h, origin[1] + j as f64 * h];
        let mut reach = vec![false; (dims[0] * dims[1]) as usize];
        let mut q = VecDeque::new();
        let s = scene.start.coords();
        let si = ((s[0] - origin[0]) / h).round() as i64;
        let sj = ((s[1] - origin[1]) / h).round() as i64;
        for (i, j) in [(si, sj)] {
            if scene.segment_clearance(s, &pt(i, j)) >= rp {
                reach[(j * dims[0] + i) as usize] = true;
                q.push_back((i, j));
            }
        }
        while let Some((i, j)) = q.pop_front() {
            for di in -1..=1 {
                for dj in -1..=1 {
                    let (a, b) = (i + di, j + dj);
                    if a < 0 || b < 0 || a >= dims[0] || b >= dims[1] || reach[(b * dims[0] + a) as usize] {
                        continue;
                    }
                    if scene.segment_clearance(&pt(i, j), &pt(a, b)) >= rp {
                        reach[(b * dims[0] + a) as usize] = true;
                        q.push_back((a, b));
                    }
                }
            }
        }
        ReachR { origin, h, dims, reach }
    }

    fn within(&self, p: &[f64], r: f64) -> bool {
        let k = (r / self.h).ceil() as i64 + 1;
        let ci = ((p[0] - self.origin[0]) / self.h).round() as i64;
        let cj = ((p[1] - self.origin[1]) / self.h).round() as i64;
        for i in (ci - k).max(0)..=(ci + k).min(self.dims[0] - 1) {
            for j in (cj - k).max(0)..=(cj + k).min(self.dims[1] - 1) {
                let q = [self.origin[0] + i as f64 * self.h, self.origin[1] + j as f64 * self.h];
                if self.reach[(j * self.dims[0] + i) as usize] && dist(p, &q) <= r {
                    return true;
                }
            }
        }
        false
    }
}

fn criterion2(covers: &[(Scene, RunRecord)]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut sampled = 0;
    for (k, (scene, run)) in covers.iter().enumerate() {
        ensure(run.outcome == Outcome::CoverComplete, || format!("scene {k}: {:?}", run.outcome))?;
        let g = run.grid.clone().unwrap();
        let spec = GridSpec::new(g.origin.clone(), g.side, g.dims.clone()).unwrap();
        let oracle = flood_g0(scene, &spec);
        let centers: Vec<Vec<f64>> = run.yellow_cells().iter().map(|c| c.center(&g)).collect();
        let yellow: HashSet<usize> = centers.iter().map(|c| spec.cell_id_of(c).unwrap()).collect();
        ensure(yellow == oracle, || {
            let odd: Vec<Vec<f64>> = oracle.symmetric_difference(&yellow).map(|&c| spec.center_of_id(c)).collect();
            format!("scene {k}: yellow {} vs flood {}, differing cells at {odd:?}", yellow.len(), oracle.len())
        })?;
        let reach = ReachR::new(scene, g.side / 4.0);
        let mut tested = 0;
        while tested < 10_000 {
            let p = [
                rng.gen_range(scene.bbox.min[0]..scene.bbox.max[0]),
                rng.gen_range(scene.bbox.min[1]..scene.bbox.max[1]),
            ];
            if scene.clearance_slice(&p) < 0.0 || !reach.within(&p, scene.r) {
                continue;
            }
            tested += 1;
            let near = centers.iter().any(|c| dist(c, &p) <= scene.r + scene.eps);
            ensure(near, || format!("scene {k}: point {p:?} is {:.4} from every Yellow centre", centers.iter().map(|c| dist(c, &p)).fold(f64::INFINITY, f64::min)))?;
        }
        sampled += tested;
    }
    Ok(format!("{} scenes, Yellow == flood fill, {sampled} samples covered", covers.len()))
}

/// Rooms small enough for an exact tour over the Yellow cells.
fn tiny_rooms() -> Vec<Scene> {
    [(0.5, 0.4), (0.6, 0.4), (0.6, 0.5), (0.7, 0.4), (0.5, 0.5)]
        .iter()
        .map(|&(w, h)| {
            Scene::solid(Aabb::new([0.0, 0.0], [w, h]), vec![], 0.15, 0.2, [0.5 * w, 0.5 * h], None).unwrap()
        })
        .collect()
}

fn criterion3(covers: &[(Scene, RunRecord)], tiny: &[(Scene, RunRecord)]) -> Check {
    let mut exact = 0;
    for (k, (scene, run)) in covers.iter().chain(tiny).enumerate() {
        let rep = verify_run(run, scene, None).map_err(|e| e.to_string())?;
        let row = rep.row(ROW_COVER).ok_or_else(|| format!("run {k}: no cover row"))?;
        ensure(row.lhs_value < row.rhs_value, || format!("run {k}: {} >= {}", row.lhs_value, row.rhs_value))?;
        if let Some(row) = rep.row(ROW_COVER_EXACT) {
            ensure(row.satisfied, || format!("run {k}: exact tour bound {} > {}", row.lhs_value, row.rhs_value))?;
            exact += 1;
        }
    }
    ensure(exact >= tiny.len(), || format!("only {exact} runs small enough for the exact tour"))?;
    Ok(format!("{} cover runs under the bound, {exact} also against the exact tour", covers.len() + tiny.len()))
}

fn criterion4(suite: &Suite, runs: &[Vec<RunRecord>]) -> Check {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for ((name, scene, o), per) in suite.scenes.iter().zip(runs) {
        for run in per {
            if run.outcome != Outcome::ReachedTarget {
                continue;
            }
            let rhs = boxes_upper(o.length, scene.n, scene.eps);
            ensure(run.total_length <= rhs, || format!("{name}: length {} > {rhs}", run.total_length))?;
            let a0 = run.a0.ok_or_else(|| format!("{name}: no a0"))?;
            let bound = iteration_bound(o.length, a0);
            ensure(run.iterations.len() <= bound, || format!("{name}: {} iterations > {bound}", run.iterations.len()))?;
            let rep = verify_run(run, scene, Some(o)).map_err(|e| e.to_string())?;
            ensure(rep.row(ROW_NAV).is_some_and(|r| r.satisfied) && rep.row(ROW_ITER).is_some_and(|r| r.satisfied), || {
                format!("{name}: verify disagrees")
            })?;
            worst = worst.max(run.total_length / rhs);
            checked += 1;
        }
    }
    Ok(format!("{checked} nav/search runs within bounds, worst length/bound {worst:.4}"))
}

fn pc_params(n: usize, eps: f64) -> PcParams {
    PcParams::new(10.0, eps, 1.0, n, Unblocked::Adaptive)
}

fn criterion5(pcs: &[(usize, Scene, RunRecord)]) -> Check {
    let mut msg = Vec::new();
    for (n, scene, run) in pcs {
        let need = if *n == 3 { 442.0 } else { 82.0 };
        ensure(run.outcome == Outcome::ReachedTarget, || format!("n={n}: {:?}", run.outcome))?;
        ensure(run.total_length >= need, || format!("n={n}: length {} < {need}", run.total_length))?;
        let rep = verify_run(run, scene, None).map_err(|e| e.to_string())?;
        ensure(rep.row(ROW_PC).is_some_and(|r| r.satisfied), || format!("n={n}: corridor row not satisfied"))?;
        msg.push(format!("n={n} length {:.1} >= {need}", run.total_length));
    }
    // smallest m whose even spacing l0/(m-1) still exceeds kappa, plus one
    let count = |eps: f64| {
        let k = kappa(1.0, eps).unwrap();
        let mut m = 2usize;
        while 10.0 / (m as f64) > k {
            m += 1;
        }
        m
    };
    let eps = 2f64.sqrt() - 1.0;
    let sealed = |e: f64| PcParams::new(10.0, e, 1.0, 3, Unblocked::Sealed);
    let full = sealed(eps).derive().map_err(|e| e.to_string())?;
    let half = sealed(eps / 2.0).derive().map_err(|e| e.to_string())?;
    let k_half = kappa(1.0, eps / 2.0).unwrap();
    ensure(full.m == count(eps) && half.m == count(eps / 2.0), || format!("m {} / {} vs {} / {}", full.m, half.m, count(eps), count(eps / 2.0)))?;
    ensure(select_lambda(10.0, k_half).map(|x| x.1).ok() == Some(half.m), || "select_lambda disagrees".into())?;
    ensure(half.m > full.m, || format!("halving eps did not add corridors: {} -> {}", full.m, half.m))?;
    msg.push(format!("per-axis count {} -> {} when eps halves", full.m, half.m));
    Ok(msg.join(", "))
}

fn criterion6(scenes: &[&Scene]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut attempts = 0;
    for scene in scenes {
        let m = pc_meta(scene).ok_or("not a corridor scene")?;
        let sep = separation(m.r, m.eps).map_err(|e| e.to_string())?;
        ensure(sep >= m.r_prime - 1e-12, || format!("separation {sep} < r' {}", m.r_prime))?;
        let pairs = adjacent_corridors(m);
        ensure(!pairs.is_empty(), || "no adjacent corridors".into())?;
        for _ in 0..100 {
            let (i, j) = pairs[rng.gen_range(0..pairs.len())];
            let (i, j) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
            let lo = m.r_prime;
            let hi = m.l0 - m.tau - m.r_prime;
            let a = corridor_point(m, i, rng.gen_range(lo..hi));
            let b = corridor_point(m, j, rng.gen_range(lo..hi));
            let res = scene.first_contact_slice(&a, &b, m.r).map_err(|e| e.to_string())?;
            ensure(matches!(res, MoveResult::Blocked { .. }), || format!("crossing {i} -> {j} from {a:?} reached {b:?}"))?;
            attempts += 1;
        }
    }
    Ok(format!("{} corridor scenes, {attempts} crossing attempts all blocked", scenes.len()))
}

fn criterion7() -> Check {
    let r = 0.1;
    let scene = build_comb(20, r).map_err(|e| e.to_string())?;
    let o = offline_lopt(&scene, default_resolution(&scene).unwrap()).map_err(|e| e.to_string())?;
    ensure(o.found, || "oracle found no path".into())?;
    let b = bug1(&scene).map_err(|e| e.to_string())?;
    ensure(b.outcome == Outcome::ReachedTarget, || format!("bug1 {:?}", b.outcome))?;
    let ratio = b.total_length / o.length;
    ensure(ratio > 10.0, || format!("bug1 ratio {ratio:.2}"))?;
    let d = scene.start.dist(scene.target.as_ref().unwrap());
    let mut parts = vec![format!("bug1/l_opt {ratio:.1}")];
    for a0 in [default_a0(&scene), 0.02] {
        let c = cbug(&scene, a0).map_err(|e| e.to_string())?;
        ensure(c.outcome == Outcome::ReachedTarget, || format!("cbug {:?}", c.outcome))?;
        let bound = cbug_upper(o.length, d, r, a0);
        ensure(c.total_length <= bound, || format!("cbug {} > {bound}", c.total_length))?;
        let areas = &c.bug.as_ref().unwrap().areas;
        for (i, a) in areas.iter().enumerate() {
            ensure(*a == a0 * 2f64.powi(i as i32), || format!("area {i} = {a}"))?;
        }
        parts.push(format!("cbug(A0={a0:.3}) {:.2} <= {bound:.1} over {} areas", c.total_length, areas.len()));
    }
    Ok(parts.join(", "))
}

fn criterion8(suite: &Suite, runs: &[Vec<RunRecord>]) -> Check {
    let names: Vec<&str> = variants().iter().map(|v| v.0).collect();
    for ((name, _, _), per) in suite.scenes.iter().zip(runs) {
        let plain = per[0].outcome;
        for (v, run) in names.iter().zip(&per[1..]) {
            ensure(run.outcome == plain, || format!("{name}: {v} gave {:?}, plain {:?}", run.outcome, plain))?;
        }
    }
    let visited = |r: &RunRecord| r.iterations.iter().map(|i| i.cells_visited).sum::<usize>();
    let mut ratios = Vec::new();
    for seed in 0..3 {
        let scene = random_scene(&RandomSpec::sparse_large(), seed).map_err(|e| e.to_string())?;
        let plain = boxes(&scene, &PlannerConfig::nav()).map_err(|e| e.to_string())?;
        let sub = boxes(&scene, &PlannerConfig { subdivision: true, ..PlannerConfig::nav() }).map_err(|e| e.to_string())?;
        ensure(sub.outcome == plain.outcome, || format!("sparse {seed}: outcomes differ"))?;
        let ratio = visited(&sub) as f64 / visited(&plain) as f64;
        ensure(ratio <= 0.5, || format!("sparse {seed}: subdivision visits {:.0}% of plain", 100.0 * ratio))?;
        ratios.push(format!("{:.0}%", 100.0 * ratio));
    }
    Ok(format!("{} scenes x {} variants agree; sparse subdivision visits {}", suite.scenes.len(), names.len(), ratios.join("/")))
}

fn criterion9(suite: &Suite, runs: &[Vec<RunRecord>]) -> Check {
    let mut cfgs = vec![PlannerConfig::nav()];
    cfgs.extend(variants().into_iter().map(|v| v.1));
    let mut compared = 0;
    for ((name, scene, _), per) in suite.scenes.iter().zip(runs) {
        for (cfg, first) in cfgs.iter().zip(per) {
            let again = run_planner(scene, cfg, &mut NoObserver).map_err(|e| e.to_string())?;
            let (a, b) = (first.canonical_json().unwrap(), again.canonical_json().unwrap());
            ensure(a == b, || format!("{name}: rerun differs"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} reruns byte-identical"))
}

fn criterion10(pc: &(usize, Scene, RunRecord), nav: &(Scene, RunRecord, OracleResult)) -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, json: String| {
        let p = dir.path().join(name);
        std::fs::write(&p, json).unwrap();
        p
    };
    let verify = |run: &std::path::Path, scene: &std::path::Path, oracle: Option<&std::path::Path>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_tactile"));
        cmd.arg("verify").arg("--run").arg(run).arg("--scene").arg(scene);
        if let Some(o) = oracle {
            cmd.arg("--oracle").arg(o);
        }
        cmd.output().unwrap().status.code()
    };
    let mut cases = 0;

    let (_, scene, run) = pc;
    let sp = write("pc.json", scene.to_json().unwrap());
    let good = write("pc-run.json", run.to_json().unwrap());
    ensure(verify(&good, &sp, None) == Some(0), || "untampered corridor run did not verify".into())?;
    let mut halved = run.clone();
    halved.total_length /= 2.0;
    let p = write("pc-halved.json", halved.to_json().unwrap());
    ensure(verify(&p, &sp, None) == Some(1), || "halved corridor run verified".into())?;
    cases += 1;
    // shrink the path too, so the record is self-consistent but too short
    let mut short = run.clone();
    let s0 = short.path[0].clone();
    short.path = short.path.iter().map(|q| s0.lerp(q, 0.1)).collect();
    short.total_length = RunRecord::path_length(&short.path);
    let p = write("pc-short.json", short.to_json().unwrap());
    ensure(verify(&p, &sp, None) == Some(1), || "shrunken corridor run verified".into())?;
    cases += 1;

    let (scene, run, o) = nav;
    let sp = write("nav.json", scene.to_json().unwrap());
    let op = write("nav-oracle.json", serde_json::to_string(o).unwrap());
    let mut long = run.clone();
    long.total_length = boxes_upper(o.length, scene.n, scene.eps) * 2.0;
    let p = write("nav-long.json", long.to_json().unwrap());
    let code = verify(&p, &sp, Some(&op));
    ensure(code == Some(1), || format!("inflated nav run gave exit code {code:?}"))?;
    cases += 1;
    let mut iters = run.clone();
    let extra = iters.iterations[0].clone();
    for _ in 0..40 {
        iters.iterations.push(extra.clone());
    }
    let p = write("nav-iters.json", iters.to_json().unwrap());
    ensure(verify(&p, &sp, Some(&op)) == Some(1), || "nav run with padded iterations verified".into())?;
    cases += 1;
    Ok(format!("{cases} tampered records rejected with exit code 1"))
}

fn main() {
    let t = Instant::now();
    let mut results: Vec<(usize, Check)> = Vec::new();
    let mut report = |k: usize, c: Check| {
        match &c {
            Ok(m) => println!("criterion {k:>2}: PASS  {m}"),
            Err(m) => println!("criterion {k:>2}: FAIL  {m}"),
        }
        results.push((k, c));
    };

    let suite = Suite::build();
    report(1, criterion1(&suite));

    let covers: Vec<(Scene, RunRecord)> =
        cover_scenes().into_iter().map(|s| { let r = cboxes(&s, &PlannerConfig::cover()).unwrap(); (s, r) }).collect();
    let tiny: Vec<(Scene, RunRecord)> =
        tiny_rooms().into_iter().map(|s| { let r = cboxes(&s, &PlannerConfig::cover()).unwrap(); (s, r) }).collect();
    report(2, criterion2(&covers));
    report(3, criterion3(&covers, &tiny));

    // plain, the five variants, then search
    let mut cfgs = vec![PlannerConfig::nav()];
    cfgs.extend(variants().into_iter().map(|v| v.1));
    cfgs.push(PlannerConfig::search());
    let runs: Vec<Vec<RunRecord>> = suite
        .scenes
        .iter()
        .map(|(_, s, _)| cfgs.iter().map(|c| run_planner(s, c, &mut NoObserver).unwrap()).collect())
        .collect();
    report(4, criterion4(&suite, &runs));

    let eps = 2f64.sqrt() - 1.0;
    let pcs: Vec<(usize, Scene, RunRecord)> = [2usize, 3]
        .iter()
        .map(|&n| {
            let adv = adaptive_unblock(&pc_params(n, eps), &PlannerConfig::nav()).unwrap();
            let run = boxes(&adv.scene, &PlannerConfig::nav()).unwrap();
            (n, adv.scene, run)
        })
        .collect();
    report(5, criterion5(&pcs));
    let mut pc_scenes: Vec<&Scene> = pcs.iter().map(|p| &p.1).collect();
    let extra_pc = tactile_nav::adversarial::build_pc(&PcParams::new(8.0, 0.2, 1.0, 3, Unblocked::Index(3))).unwrap();
    pc_scenes.push(&extra_pc);
    report(6, criterion6(&pc_scenes));
    report(7, criterion7());
    report(8, criterion8(&suite, &runs));
    report(9, criterion9(&suite, &runs));
    let (_, s0, o0) = &suite.scenes[0];
    let nav = (s0.clone(), runs[0][0].clone(), o0.clone());
    report(10, criterion10(&pcs[0], &nav));

    let failed: Vec<usize> = results.iter().filter(|r| r.1.is_err()).map(|r| r.0).collect();
    println!("acceptance: {}/{} criteria pass in {:.1}s", results.len() - failed.len(), results.len(), t.elapsed().as_secs_f64());
    if !failed.is_empty() {
        println!("failing: {failed:?}");
        std::process::exit(1);
    }
}
