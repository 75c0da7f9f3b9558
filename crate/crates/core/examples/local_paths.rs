//! The SMP rules on three small scenes: a low wall cleared by one lifted
//! SMP, a taller wall needing two, and a pair of opposite-facing MPs.
//!
//!     cargo run --example local_paths

use cmm_tour::localpath::{plan_local_path, LocalPath};
use cmm_tour::scene::NodeCloud;
use cmm_tour::{MeasurementPoint, PlanConfig, Point3, UnitVec3};

/// Nodes on the plane x = `x`, |y| ≤ 40, z from `z_lo` to `z_hi`.
fn wall(x: f64, z_lo: f64, z_hi: f64) -> Vec<Point3> {
    let mut out = Vec::new();
    let mut z = z_lo;
    while z <= z_hi + 1e-9 {
        let mut y = -40.0;
        while y <= 40.0 + 1e-9 {
            out.push(Point3::new(x, y, z));
            y += 2.0;
        }
        z += 2.0;
    }
    out
}

fn show(title: &str, p: &LocalPath) {
    println!("{title}: {:?}, {} SMPs, {} iterations, {:.4} s", p.rule_used, p.smp_count, p.iterations_used, p.transition_time);
    for w in &p.waypoints {
        println!("    {:?} ({:.2}, {:.2}, {:.2})", w.kind, w.position.x, w.position.y, w.position.z);
    }
}

fn main() {
    let cfg = PlanConfig::default();
    let up = UnitVec3::Z;
    let a = MeasurementPoint::new("a", Point3::ORIGIN, up);

    let cloud = NodeCloud::new(wall(50.0, 0.0, 40.0), 2.0);
    let b = MeasurementPoint::new("b", Point3::new(100.0, 0.0, 0.0), up);
    show("wall at the midpoint", &plan_local_path(&a, &b, &cloud, &cfg));

    let cloud = NodeCloud::new(wall(80.0, 0.0, 40.0), 2.0);
    show("wall near the far end", &plan_local_path(&a, &b, &cloud, &cfg));

    // block between x = -10 and x = 10, probed from both sides
    let left = MeasurementPoint::new("left", Point3::new(-10.0, 0.0, 0.0), UnitVec3::new(-1.0, 0.0, 0.0).unwrap());
    let right = MeasurementPoint::new("right", Point3::new(10.0, 0.0, 0.0), UnitVec3::X);
    let mut nodes = wall(-10.0, -30.0, 30.0);
    nodes.extend(wall(10.0, -30.0, 30.0));
    for x in [-8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0] {
        for y in (-20..=20).map(|k| 2.0 * k as f64) {
            nodes.push(Point3::new(x, y, 30.0));
            nodes.push(Point3::new(x, y, -30.0));
        }
    }
    let cloud = NodeCloud::new(nodes, 2.0);
    show("opposite faces of a block", &plan_local_path(&left, &right, &cloud, &cfg));
}
