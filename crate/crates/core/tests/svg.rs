use std::path::PathBuf;

use tactile_nav::adversarial::{build_comb, build_pc, PcParams, Unblocked};
use tactile_nav::bug2d::cbug;
use tactile_nav::environment::{Aabb, Scene};
use tactile_nav::geometry::Point;
use tactile_nav::harness::{default_a0, emit_svg, Slice};

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDENS=1` rewrites it.
fn golden(name: &str, svg: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::write(&path, svg).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert!(want == svg, "{name} differs from its golden file");
}

#[test]
fn comb_run_golden() {
    let scene = build_comb(4, 0.1).unwrap();
    let run = cbug(&scene, default_a0(&scene)).unwrap();
    let svg = emit_svg(Some(&run), &scene, None).unwrap();
    assert!(svg.contains("<polyline"));
    golden("comb_cbug.svg", &svg);
}

#[test]
fn empty_run_shows_only_markers() {
    let scene = Scene::solid(Aabb::new([0.0, 0.0], [4.0, 2.0]), vec![], 0.2, 0.2, [0.5, 1.0], Some(Point::from([3.5, 1.0])))
        .unwrap();
    let svg = emit_svg(None, &scene, None).unwrap();
    assert_eq!(svg.matches("<circle").count(), 2);
    assert!(!svg.contains("<polyline"));
    golden("empty_markers.svg", &svg);
}

#[test]
fn corridor_slice_golden() {
    let eps = 2f64.sqrt() - 1.0;
    let scene = build_pc(&PcParams::new(10.0, eps, 1.0, 3, Unblocked::Index(7))).unwrap();
    let m = tactile_nav::adversarial::pc_meta(&scene).unwrap().clone();
    // just above floor 1, through the upper flaps
    let z = 2.0 * m.r_prime + 0.5 * (m.g + m.r_prime);
    let svg = emit_svg(None, &scene, Some(Slice { axis: 2, value: z })).unwrap();
    golden("pc_floor1.svg", &svg);
    // across the corridors, inside the flap layer
    let svg = emit_svg(None, &scene, Some(Slice { axis: 0, value: m.l0 - 0.5 * m.tau })).unwrap();
    assert!(svg.matches("<circle").count() > m.corridor_count);
    golden("pc_exit_section.svg", &svg);
}
