//! Probe moves near a wall: the searching volume keeps the distance test
//! local, and a retract-over-descend detour clears the wall.
//!
//!     cargo run --example collision_check

use cmm_tour::collision::{polyline_collides, searching_volume, segment_collides};
use cmm_tour::scene::NodeCloud;
use cmm_tour::Point3;

fn main() {
    // wall in the plane x = 5, y and z from -50 to 50
    let mut nodes = Vec::new();
    for iy in 0..26 {
        for iz in 0..26 {
            nodes.push(Point3::new(5.0, -50.0 + 4.0 * iy as f64, -50.0 + 4.0 * iz as f64));
        }
    }
    let cloud = NodeCloud::new(nodes, 4.0);
    let (eps, d0) = (10.0, 4.0);

    let moves = [
        ("through the wall", Point3::ORIGIN, Point3::new(10.0, 0.0, 0.0)),
        ("over the top", Point3::new(0.0, 0.0, 60.0), Point3::new(10.0, 0.0, 60.0)),
        ("alongside", Point3::new(-20.0, -40.0, 0.0), Point3::new(-20.0, 40.0, 0.0)),
    ];
    for (label, a, b) in moves {
        let r = segment_collides(&cloud, &a, &b, eps, d0);
        println!(
            "{label:<18} collides={:<5} min distance {:8.3} mm, {} of {} nodes tested",
            r.collides,
            r.min_distance,
            searching_volume(&cloud, &a, &b, eps).len(),
            cloud.len()
        );
    }

    let detour = [
        Point3::ORIGIN,
        Point3::new(0.0, 0.0, 60.0),
        Point3::new(10.0, 0.0, 60.0),
        Point3::new(10.0, 0.0, 0.0),
    ];
    for (k, r) in polyline_collides(&cloud, &detour, eps, d0).iter().enumerate() {
        println!("detour segment {k}: collides={} min distance {:.3} mm", r.collides, r.min_distance);
    }
}
