//! BUG1 against CBUG on a comb. BUG1 walks every tooth; CBUG's ellipse
//! keeps it near the straight line.
use tactile_nav::adversarial::build_comb;
use tactile_nav::bug2d::{bug1, cbug};
use tactile_nav::harness::{cbug_upper, default_a0, default_resolution, offline_lopt};

fn main() -> tactile_nav::error::Result<()> {
    let teeth = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let r = 0.1;
    let scene = build_comb(teeth, r)?;
    let lopt = offline_lopt(&scene, default_resolution(&scene)?)?.length;
    let a0 = default_a0(&scene);
    let b = bug1(&scene)?;
    let c = cbug(&scene, a0)?;
    let d = scene.start.dist(scene.target.as_ref().unwrap());
    println!("oracle {lopt:.3}");
    println!("bug1 {:.3} (x{:.1})", b.total_length, b.total_length / lopt);
    println!("cbug {:.3} (x{:.1}), bound {:.1}", c.total_length, c.total_length / lopt, cbug_upper(lopt, d, r, a0));
    if let Some(bs) = &c.bug {
        println!("cbug areas {:?}", bs.areas);
    }
    Ok(())
}
