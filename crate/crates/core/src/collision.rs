//! Dynamic-searching-volume collision detection.
//!
//! For a straight probe move `a → b`, only nodes inside the axis-aligned box
//! spanned by the endpoints and inflated by `ε` are distance-tested. The move
//! collides when any of them lies within `D₀` of the segment.
//!
//! With `ε ≥ D₀` the filter is exact: a node within `D₀` of the segment is
//! within `D₀` of some point of it, and every point of the segment lies in
//! the uninflated box.
//!
//! The detector only sees sampled nodes. Surface between nodes can be missed
//! by up to `l/√2`, so keep the element size `l ≤ D₀`. The probe is modelled
//! by its centreline; `D₀` has to absorb stylus radius plus clearance.

use serde::{Deserialize, Serialize};

use crate::geometry::{point_segment_distance, Point3};
use crate::scene::NodeCloud;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionResult {
    pub collides: bool,
    /// Minimum node-to-segment distance over the searching volume;
    /// `+∞` when the volume is empty.
    pub min_distance: f64,
    pub nearest_node: Option<Point3>,
    pub nodes_checked: usize,
}

impl CollisionResult {
    fn clear() -> Self {
        Self { collides: false, min_distance: f64::INFINITY, nearest_node: None, nodes_checked: 0 }
    }
}

/// Corners of the searching volume for the move `a → b`.
pub fn searching_box(a: &Point3, b: &Point3, eps: f64) -> (Point3, Point3) {
    let lo = Point3::new(a.x.min(b.x) - eps, a.y.min(b.y) - eps, a.z.min(b.z) - eps);
    let hi = Point3::new(a.x.max(b.x) + eps, a.y.max(b.y) + eps, a.z.max(b.z) + eps);
    (lo, hi)
}

/// Indices (ascending) of the nodes inside the searching volume.
pub fn searching_volume(cloud: &NodeCloud, a: &Point3, b: &Point3, eps: f64) -> Vec<usize> {
    debug_assert!(eps >= 0.0);
    let (lo, hi) = searching_box(a, b, eps);
    cloud.query_box(&lo, &hi)
}

/// Tests the straight move `a → b` against the cloud.
///
/// Ties on the nearest node resolve to the lowest node index, so the result
/// does not depend on index iteration order.
pub fn segment_collides(cloud: &NodeCloud, a: &Point3, b: &Point3, eps: f64, d0: f64) -> CollisionResult {
    debug_assert!(d0 > 0.0 && eps >= d0, "searching volume must cover the clearance");
    let (lo, hi) = searching_box(a, b, eps);
    let mut best = (f64::INFINITY, usize::MAX);
    let mut checked = 0;
    cloud.for_each_in_box(&lo, &hi, |idx, p| {
        checked += 1;
        let dist = point_segment_distance(p, a, b);
        if dist < best.0 || (dist == best.0 && idx < best.1) {
            best = (dist, idx);
        }
    });
    if checked == 0 {
        return CollisionResult::clear();
    }
    CollisionResult {
        collides: best.0 <= d0,
        min_distance: best.0,
        nearest_node: Some(cloud.nodes()[best.1]),
        nodes_checked: checked,
    }
}

/// One result per consecutive pair of `waypoints`.
pub fn polyline_collides(cloud: &NodeCloud, waypoints: &[Point3], eps: f64, d0: f64) -> Vec<CollisionResult> {
    debug_assert!(waypoints.len() >= 2);
    waypoints.windows(2).map(|w| segment_collides(cloud, &w[0], &w[1], eps, d0)).collect()
}

/// True when no segment of the polyline collides. Stops at the first hit.
pub fn polyline_is_clear(cloud: &NodeCloud, waypoints: &[Point3], eps: f64, d0: f64) -> bool {
    waypoints.windows(2).all(|w| !segment_collides(cloud, &w[0], &w[1], eps, d0).collides)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Nodes on the plane x = 5 with y, z ∈ {−50, −46, …, 50}.
    pub(crate) fn wall_x5() -> NodeCloud {
        let mut nodes = Vec::new();
        for iy in 0..26 {
            for iz in 0..26 {
                nodes.push(Point3::new(5.0, -50.0 + 4.0 * iy as f64, -50.0 + 4.0 * iz as f64));
            }
        }
        NodeCloud::new(nodes, 4.0)
    }

    fn brute(cloud: &NodeCloud, a: &Point3, b: &Point3) -> f64 {
        cloud.nodes().iter().map(|p| point_segment_distance(p, a, b)).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn searching_volume_examples() {
        let cloud = NodeCloud::new(
            vec![Point3::new(0., 0., 0.), Point3::new(5., 5., 5.), Point3::new(100., 0., 0.)],
            4.0,
        );
        let a = Point3::ORIGIN;
        let b = Point3::new(10., 10., 10.);
        assert_eq!(searching_volume(&cloud, &a, &b, 0.0), vec![0, 1]);
        assert_eq!(searching_volume(&cloud, &a, &b, 90.0), vec![0, 1, 2]);
        let empty = NodeCloud::new(Vec::new(), 4.0);
        assert!(searching_volume(&empty, &a, &b, 5.0).is_empty());
    }

    #[test]
    fn wall_blocks_crossing_move() {
        // nearest nodes to the x-axis are (5, ±2, ±2)
        let cloud = wall_x5();
        let a = Point3::ORIGIN;
        let b = Point3::new(10., 0., 0.);
        let r = segment_collides(&cloud, &a, &b, 10.0, 4.0);
        assert!(r.collides);
        assert!((r.min_distance - 8f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.min_distance, brute(&cloud, &a, &b));
    }

    #[test]
    fn move_above_wall_is_clear() {
        let cloud = wall_x5();
        let a = Point3::new(0., 0., 60.);
        let b = Point3::new(10., 0., 60.);
        let r = segment_collides(&cloud, &a, &b, 10.0, 4.0);
        assert!(!r.collides);
        // top row of the wall is z = 50, nearest node (5, −2 or 2, 50)
        assert_eq!(r.min_distance, brute(&cloud, &a, &b));
        assert!((r.min_distance - 104f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn empty_volume_is_clear() {
        let cloud = NodeCloud::new(vec![Point3::new(1000., 1000., 1000.)], 4.0);
        let r = segment_collides(&cloud, &Point3::ORIGIN, &Point3::new(3., 1., 0.), 5.0, 4.0);
        assert!(!r.collides);
        assert_eq!(r.min_distance, f64::INFINITY);
        assert_eq!(r.nodes_checked, 0);
        assert!(r.nearest_node.is_none());
    }

    #[test]
    fn polyline_examples() {
        let cloud = wall_x5();
        let a = Point3::ORIGIN;
        let b = Point3::new(10., 0., 0.);
        assert_eq!(polyline_collides(&cloud, &[a, b], 10.0, 4.0), vec![segment_collides(&cloud, &a, &b, 10.0, 4.0)]);

        let line = [Point3::new(-40., 80., 0.), Point3::new(0., 80., 0.), Point3::new(40., 80., 0.)];
        assert!(polyline_collides(&cloud, &line, 10.0, 4.0).iter().all(|r| !r.collides));

        // retract, cross over the top row (z = 50) through (5, 0, 60), descend
        let detour = [
            Point3::ORIGIN,
            Point3::new(0., 0., 60.),
            Point3::new(5., 0., 60.),
            Point3::new(10., 0., 60.),
            Point3::new(10., 0., 0.),
        ];
        let rs = polyline_collides(&cloud, &detour, 10.0, 4.0);
        assert_eq!(rs.len(), 4);
        for (r, w) in rs.iter().zip(detour.windows(2)) {
            assert!(!r.collides);
            assert_eq!(r.min_distance, brute(&cloud, &w[0], &w[1]));
        }
        assert!(polyline_is_clear(&cloud, &detour, 10.0, 4.0));
    }

    #[test]
    fn symmetric_and_monotone() {
        let cloud = wall_x5();
        let a = Point3::new(0., 3., 45.);
        let b = Point3::new(12., -7., 58.);
        let f = segment_collides(&cloud, &a, &b, 12.0, 4.0);
        let r = segment_collides(&cloud, &b, &a, 12.0, 4.0);
        assert_eq!(f, r);
        let mut prev = false;
        for d0 in [1.0, 2.0, 4.0, 6.0, 8.0, 12.0] {
            let c = segment_collides(&cloud, &a, &b, 12.0, d0).collides;
            assert!(!prev || c);
            prev = c;
        }
    }
}
