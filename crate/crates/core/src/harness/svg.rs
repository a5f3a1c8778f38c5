use std::fmt::Write;

use crate::bug2d::VirtualEllipse;
use crate::environment::Scene;
use crate::error::{Error, Result};
use crate::geometry::{ConvexPrimitive, Point};
use crate::grid::Color;
use crate::planners::RunRecord;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 10.0;

/// Axis-aligned section plane for 3-D drawings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Slice {
    pub axis: usize,
    pub value: f64,
}

impl std::str::FromStr for Slice {
    type Err = Error;

    /// Parses `axis=value`, e.g. `2=1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, v) = s.split_once('=').ok_or_else(|| Error::Config(format!("slice must be axis=value, got {s}")))?;
        let axis = a.trim().parse().map_err(|_| Error::Config(format!("bad slice axis {a}")))?;
        let value = v.trim().parse().map_err(|_| Error::Config(format!("bad slice value {v}")))?;
        Ok(Slice { axis, value })
    }
}

struct View {
    axes: [usize; 2],
    lo: [f64; 2],
    hi: [f64; 2],
    scale: f64,
}

impl View {
    fn x(&self, p: &[f64]) -> f64 {
        MARGIN + (p[self.axes[0]] - self.lo[0]) * self.scale
    }

    fn y(&self, p: &[f64]) -> f64 {
        MARGIN + (self.hi[1] - p[self.axes[1]]) * self.scale
    }

    fn len(&self, d: f64) -> f64 {
        d * self.scale
    }

    fn height(&self) -> f64 {
        2.0 * MARGIN + (self.hi[1] - self.lo[1]) * self.scale
    }
}

fn color_fill(c: Color) -> Option<&'static str> {
    match c {
        Color::White => None,
        Color::Yellow => Some("#f2d04b"),
        Color::Red => Some("#d64541"),
        Color::Pink => Some("#f4a7c0"),
        Color::Gray => Some("#9a9a9a"),
    }
}

fn draw_primitive(out: &mut String, v: &View, slice: Option<Slice>, p: &ConvexPrimitive, fill: &str) {
    let off = |c: &[f64]| slice.map(|s| (c[s.axis] - s.value).abs()).unwrap_or(0.0);
    match p {
        ConvexPrimitive::AxisBox { min, max } => {
            if let Some(s) = slice {
                if s.value < min[s.axis] || s.value > max[s.axis] {
                    return;
                }
            }
            let _ = writeln!(
                out,
                r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"##,
                v.x(&min.0),
                v.y(&max.0),
                v.len(max[v.axes[0]] - min[v.axes[0]]),
                v.len(max[v.axes[1]] - min[v.axes[1]])
            );
        }
        ConvexPrimitive::Sphere { center, radius } => {
            let d = off(&center.0);
            if d < *radius {
                let rr = (radius * radius - d * d).sqrt();
                let _ = writeln!(out, r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="{fill}"/>"##, v.x(&center.0), v.y(&center.0), v.len(rr));
            }
        }
        ConvexPrimitive::Capsule { a, b, radius } => {
            let (da, db) = (off(&a.0), off(&b.0));
            if (da - db).abs() < 1e-12 || slice.is_none() {
                if da < *radius {
                    let rr = (radius * radius - da * da).sqrt();
                    let _ = writeln!(
                        out,
                        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{fill}" stroke-width="{:.3}" stroke-linecap="round"/>"##,
                        v.x(&a.0),
                        v.y(&a.0),
                        v.x(&b.0),
                        v.y(&b.0),
                        v.len(2.0 * rr)
                    );
                }
            } else {
                // oblique to the plane: stack of sphere sections along the axis
                for i in 0..=16 {
                    let c = a.lerp(b, i as f64 / 16.0);
                    let d = off(&c.0);
                    if d < *radius {
                        let rr = (radius * radius - d * d).sqrt();
                        let _ = writeln!(out, r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="{fill}"/>"##, v.x(&c.0), v.y(&c.0), v.len(rr));
                    }
                }
            }
        }
    }
}

fn ellipse(out: &mut String, v: &View, f1: &[f64], f2: &[f64], semi_major: f64) {
    let c = 0.5 * crate::geometry::dist(f1, f2);
    if semi_major <= c {
        return;
    }
    let b = (semi_major * semi_major - c * c).sqrt();
    let (cx, cy) = (0.5 * (v.x(f1) + v.x(f2)), 0.5 * (v.y(f1) + v.y(f2)));
    let ang = (v.y(f2) - v.y(f1)).atan2(v.x(f2) - v.x(f1)).to_degrees();
    let _ = writeln!(
        out,
        r##"<ellipse cx="{cx:.3}" cy="{cy:.3}" rx="{:.3}" ry="{:.3}" transform="rotate({ang:.3} {cx:.3} {cy:.3})" fill="none" stroke="#3b6fb6" stroke-dasharray="4 3"/>"##,
        v.len(semi_major),
        v.len(b)
    );
}

fn marker(out: &mut String, v: &View, p: &Point, label: &str, fill: &str) {
    let (x, y) = (v.x(&p.0), v.y(&p.0));
    let _ = writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{fill}"/>"##);
    let _ = writeln!(out, r##"<text x="{:.3}" y="{:.3}" font-size="12" font-family="sans-serif">{label}</text>"##, x + 6.0, y - 6.0);
}

/// Deterministic drawing of a scene and, optionally, a run over it. 3-D
/// scenes need a section plane; 2-D scenes ignore it.
pub fn emit_svg(run: Option<&RunRecord>, scene: &Scene, slice: Option<Slice>) -> Result<String> {
    let n = scene.n;
    let slice = match n {
        2 => None,
        3 => {
            let s = slice.ok_or_else(|| Error::Config("3-D drawings need --slice axis=value".into()))?;
            if s.axis > 2 {
                return Err(Error::Config(format!("slice axis {} out of range", s.axis)));
            }
            Some(s)
        }
        _ => return Err(Error::Config(format!("cannot draw a {n}-D scene"))),
    };
    let axes = match slice {
        None => [0, 1],
        Some(s) => {
            let mut it = (0..3).filter(|&k| k != s.axis);
            [it.next().unwrap(), it.next().unwrap()]
        }
    };
    let lo = [scene.bbox.min[axes[0]], scene.bbox.min[axes[1]]];
    let hi = [scene.bbox.max[axes[0]], scene.bbox.max[axes[1]]];
    let scale = (WIDTH - 2.0 * MARGIN) / (hi[0] - lo[0]);
    let v = View { axes, lo, hi, scale };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{:.0}" viewBox="0 0 {WIDTH:.0} {:.3}">"##,
        v.height().ceil(),
        v.height()
    );
    let bg = if scene.free_cells.is_empty() { "#ffffff" } else { "#555555" };
    let _ = writeln!(
        out,
        r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{bg}" stroke="#000"/>"##,
        v.x(&scene.bbox.min.0),
        v.y(&scene.bbox.max.0),
        v.len(hi[0] - lo[0]),
        v.len(hi[1] - lo[1])
    );
    for c in &scene.free_cells {
        draw_primitive(&mut out, &v, slice, c, "#e8f1fb");
    }
    if let Some(run) = run {
        if let Some(g) = &run.grid {
            for cell in &run.snapshot {
                let Some(fill) = color_fill(cell.color) else { continue };
                let (clo, chi) = cell.bounds(g);
                if let Some(s) = slice {
                    if s.value < clo[s.axis] || s.value >= chi[s.axis] {
                        continue;
                    }
                }
                let _ = writeln!(
                    out,
                    r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}" fill-opacity="0.6"/>"##,
                    v.x(&clo),
                    v.y(&chi),
                    v.len(chi[axes[0]] - clo[axes[0]]),
                    v.len(chi[axes[1]] - clo[axes[1]])
                );
            }
        }
    }
    for s in scene.solids.iter().chain(&scene.extra_solids) {
        draw_primitive(&mut out, &v, slice, s, "#333333");
    }
    if let Some(run) = run {
        let on_plane = |p: &Point| slice.map(|s| (p[s.axis] - s.value).abs() < 1e-9).unwrap_or(true);
        if let Some(tp) = &run.t_prime {
            if on_plane(&scene.start) && on_plane(tp) {
                if let Some(bug) = &run.bug {
                    for &area in &bug.areas {
                        let e = VirtualEllipse::new(scene.start.clone(), tp.clone(), area)?;
                        ellipse(&mut out, &v, &scene.start.0, &tp.0, e.semi_major());
                    }
                } else {
                    for it in &run.iterations {
                        ellipse(&mut out, &v, &scene.start.0, &tp.0, 0.5 * it.a);
                    }
                }
            }
        }
        if run.path.len() > 1 {
            let mut pts = String::new();
            for (i, p) in run.path.iter().enumerate() {
                if i > 0 {
                    pts.push(' ');
                }
                let _ = write!(pts, "{:.3},{:.3}", v.x(&p.0), v.y(&p.0));
            }
            let _ = writeln!(out, r##"<polyline points="{pts}" fill="none" stroke="#1a7f37" stroke-width="1.5"/>"##);
        }
    }
    marker(&mut out, &v, &scene.start, "S", "#1a7f37");
    if let Some(t) = &scene.target {
        marker(&mut out, &v, t, "T", "#b3261e");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
