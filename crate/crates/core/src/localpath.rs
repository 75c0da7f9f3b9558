//! Collision-free local paths between two approach points.
//!
//! A straight move between approach points is tried first. When it collides,
//! spatial movement points (SMPs) are inserted and walked away from the
//! obstacle in steps of `h`:
//!
//! - normals not opposite: along the normalized sum of the two MP normals,
//!   either one SMP lifted from the AP midpoint ([`rule1_scenario1`]) or two
//!   SMPs lifted alternately from each AP ([`rule2_scenario1`]);
//! - normals opposite: two SMPs pushed together sideways along each direction
//!   perpendicular to the first normal ([`scenario2`]).
//!
//! Each rule or direction gets at most `k0` iterations. The AP↔MP touch moves
//! are not part of a local path and are never collision-checked.

use serde::{Deserialize, Serialize};

use crate::collision::polyline_is_clear;
use crate::config::PlanConfig;
use crate::geometry::{approach_point, perpendicular_directions, sum_direction, MeasurementPoint, NormalSum, Point3, UnitVec3};
use crate::scene::NodeCloud;
use crate::timing::transition_time;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum WaypointKind {
    Ap,
    Smp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub position: Point3,
    pub kind: WaypointKind,
}

impl Waypoint {
    pub fn ap(position: Point3) -> Self {
        Self { position, kind: WaypointKind::Ap }
    }

    pub fn smp(position: Point3) -> Self {
        Self { position, kind: WaypointKind::Smp }
    }
}

/// Which generation rule produced a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Direct,
    Rule1,
    Rule2,
    /// Opposite normals, escaping along perpendicular formula `u` (1..=6).
    Scenario2(usize),
    /// No feasible path found.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalPath {
    pub from_mp: String,
    pub to_mp: String,
    /// Starts at the departing AP and ends at the arriving AP.
    pub waypoints: Vec<Waypoint>,
    pub feasible: bool,
    pub smp_count: usize,
    pub rule_used: Rule,
    /// Seconds; the sentinel `a_inf` when infeasible.
    pub transition_time: f64,
    pub iterations_used: usize,
}

impl LocalPath {
    fn new(
        from: &Endpoint,
        to: &Endpoint,
        smps: &[Point3],
        rule: Rule,
        iterations: usize,
        feasible: bool,
        cfg: &PlanConfig,
    ) -> Self {
        let mut waypoints = Vec::with_capacity(smps.len() + 2);
        waypoints.push(Waypoint::ap(from.approach));
        waypoints.extend(smps.iter().map(|p| Waypoint::smp(*p)));
        waypoints.push(Waypoint::ap(to.approach));
        let mut path = Self {
            from_mp: from.id.clone(),
            to_mp: to.id.clone(),
            waypoints,
            feasible,
            smp_count: smps.len(),
            rule_used: rule,
            transition_time: 0.0,
            iterations_used: iterations,
        };
        path.transition_time = transition_time(&path, cfg.v, cfg.a_inf);
        path
    }

    fn infeasible(from: &Endpoint, to: &Endpoint, iterations: usize, cfg: &PlanConfig) -> Self {
        Self::new(from, to, &[], Rule::None, iterations, false, cfg)
    }

    /// Sum of segment lengths along the waypoints, mm.
    pub fn length(&self) -> f64 {
        self.waypoints.windows(2).map(|w| w[0].position.distance(&w[1].position)).sum()
    }

    pub fn positions(&self) -> Vec<Point3> {
        self.waypoints.iter().map(|w| w.position).collect()
    }

    /// The same path travelled backwards.
    pub fn reversed(&self) -> Self {
        let mut p = self.clone();
        p.waypoints.reverse();
        std::mem::swap(&mut p.from_mp, &mut p.to_mp);
        p
    }
}

/// One end of a local path: an approach point plus the normal that steers
/// SMP generation.
#[derive(Debug, Clone, PartialEq)]
pub struct Endpoint {
    pub id: String,
    pub approach: Point3,
    pub normal: UnitVec3,
}

impl Endpoint {
    pub fn from_mp(mp: &MeasurementPoint, d: f64) -> Self {
        Self { id: mp.id.clone(), approach: approach_point(mp, d), normal: mp.normal }
    }
}

fn clear(cloud: &NodeCloud, pts: &[Point3], cfg: &PlanConfig) -> bool {
    polyline_is_clear(cloud, pts, cfg.eps(), cfg.d0)
}

/// Plans the local path from `mp_i` to `mp_j`.
///
/// Returns the direct move when it is clear. Otherwise every applicable rule
/// (both scenario-1 rules, or all scenario-2 directions for opposite normals)
/// runs to completion and the fastest feasible candidate wins; ties go to
/// the earlier rule. With no feasible candidate the path is infeasible with
/// `iterations_used = k0`.
pub fn plan_local_path(mp_i: &MeasurementPoint, mp_j: &MeasurementPoint, cloud: &NodeCloud, cfg: &PlanConfig) -> LocalPath {
    plan_between(&Endpoint::from_mp(mp_i, cfg.d), &Endpoint::from_mp(mp_j, cfg.d), cloud, cfg)
}

pub fn plan_between(from: &Endpoint, to: &Endpoint, cloud: &NodeCloud, cfg: &PlanConfig) -> LocalPath {
    if clear(cloud, &[from.approach, to.approach], cfg) {
        return LocalPath::new(from, to, &[], Rule::Direct, 0, true, cfg);
    }
    let candidates = match sum_direction(&from.normal, &to.normal) {
        NormalSum::Direction(dir) => {
            vec![rule1(from, to, &dir, cloud, cfg), rule2(from, to, &dir, cloud, cfg)]
        }
        NormalSum::Opposite => vec![scenario2_between(from, to, cloud, cfg)],
    };
    fastest(candidates).unwrap_or_else(|| LocalPath::infeasible(from, to, cfg.k0, cfg))
}

fn fastest(candidates: impl IntoIterator<Item = LocalPath>) -> Option<LocalPath> {
    candidates.into_iter().filter(|p| p.feasible).fold(None, |best, p| match best {
        Some(b) if b.transition_time <= p.transition_time => Some(b),
        _ => Some(p),
    })
}

/// Single SMP starting at the AP midpoint, lifted by `h` along the normal sum.
///
/// The midpoint itself is tested as iteration 0, then up to `k0` lifts. For
/// opposite normals the rule does not apply and an infeasible path with zero
/// iterations comes back.
pub fn rule1_scenario1(mp_i: &MeasurementPoint, mp_j: &MeasurementPoint, cloud: &NodeCloud, cfg: &PlanConfig) -> LocalPath {
    let (from, to) = (Endpoint::from_mp(mp_i, cfg.d), Endpoint::from_mp(mp_j, cfg.d));
    match sum_direction(&from.normal, &to.normal) {
        NormalSum::Direction(dir) => rule1(&from, &to, &dir, cloud, cfg),
        NormalSum::Opposite => LocalPath::infeasible(&from, &to, 0, cfg),
    }
}

fn rule1(from: &Endpoint, to: &Endpoint, dir: &UnitVec3, cloud: &NodeCloud, cfg: &PlanConfig) -> LocalPath {
    let mid = from.approach.midpoint(&to.approach);
    for k in 0..=cfg.k0 {
        let smp = mid.offset(dir, k as f64 * cfg.h);
        if clear(cloud, &[from.approach, smp, to.approach], cfg) {
            return LocalPath::new(from, to, &[smp], Rule::Rule1, k, true, cfg);
        }
    }
    LocalPath::infeasible(from, to, cfg.k0, cfg)
}

/// Two SMPs, one per AP, lifted alternately (departing side first).
///
/// An iteration is one round: lift the departing SMP and test, then lift the
/// arriving SMP and test. Each SMP therefore moves at most `k0` times. SMPs
/// still sitting on their AP are left out of the returned path; if both are
/// (the direct move is clear) the result is [`Rule::Direct`].
pub fn rule2_scenario1(mp_i: &MeasurementPoint, mp_j: &MeasurementPoint, cloud: &NodeCloud, cfg: &PlanConfig) -> LocalPath {
    let (from, to) = (Endpoint::from_mp(mp_i, cfg.d), Endpoint::from_mp(mp_j, cfg.d));
    match sum_direction(&from.normal, &to.normal) {
        NormalSum::Direction(dir) => rule2(&from, &to, &dir, cloud, cfg),
        NormalSum::Opposite => LocalPath::infeasible(&from, &to, 0, cfg),
    }
}

fn rule2(from: &Endpoint, to: &Endpoint, dir: &UnitVec3, cloud: &NodeCloud, cfg: &PlanConfig) -> LocalPath {
    let (qa, qb) = (from.approach, to.approach);
    if clear(cloud, &[qa, qb], cfg) {
        return LocalPath::new(from, to, &[], Rule::Direct, 0, true, cfg);
    }
    let mut steps = [0usize; 2];
    for round in 1..=cfg.k0 {
        for side in 0..2 {
            steps[side] = round;
            let pa = qa.offset(dir, steps[0] as f64 * cfg.h);
            let pb = qb.offset(dir, steps[1] as f64 * cfg.h);
            let smps: Vec<Point3> = [(steps[0], pa), (steps[1], pb)]
                .into_iter()
                .filter(|(s, _)| *s > 0)
                .map(|(_, p)| p)
                .collect();
            let mut pts = Vec::with_capacity(4);
            pts.push(qa);
            pts.extend_from_slice(&smps);
            pts.push(qb);
            if clear(cloud, &pts, cfg) {
                return LocalPath::new(from, to, &smps, Rule::Rule2, round, true, cfg);
            }
        }
    }
    LocalPath::infeasible(from, to, cfg.k0, cfg)
}

/// Opposite normals: for each perpendicular escape direction of `mp_i`'s
/// normal, push both SMPs out together by `k·h` for `k = 1..=k0`. The fastest
/// feasible direction wins, ties to the lowest formula index.
pub fn scenario2(mp_i: &MeasurementPoint, mp_j: &MeasurementPoint, cloud: &NodeCloud, cfg: &PlanConfig) -> LocalPath {
    scenario2_between(&Endpoint::from_mp(mp_i, cfg.d), &Endpoint::from_mp(mp_j, cfg.d), cloud, cfg)
}

fn scenario2_between(from: &Endpoint, to: &Endpoint, cloud: &NodeCloud, cfg: &PlanConfig) -> LocalPath {
    let candidates = perpendicular_directions(&from.normal)
        .into_iter()
        .filter_map(|(u, dir)| scenario2_direction(from, to, u, &dir, cloud, cfg));
    fastest(candidates).unwrap_or_else(|| LocalPath::infeasible(from, to, cfg.k0, cfg))
}

/// Scenario 2 restricted to one escape direction.
pub fn scenario2_direction(
    from: &Endpoint,
    to: &Endpoint,
    u: usize,
    dir: &UnitVec3,
    cloud: &NodeCloud,
    cfg: &PlanConfig,
) -> Option<LocalPath> {
    (1..=cfg.k0).find_map(|k| {
        let pa = from.approach.offset(dir, k as f64 * cfg.h);
        let pb = to.approach.offset(dir, k as f64 * cfg.h);
        clear(cloud, &[from.approach, pa, pb, to.approach], cfg)
            .then(|| LocalPath::new(from, to, &[pa, pb], Rule::Scenario2(u), k, true, cfg))
    })
}
