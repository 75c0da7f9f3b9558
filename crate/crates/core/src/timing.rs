//! Local-path timing, stylus orientation, and the inspection time matrix.
//!
//! Matrix index 0 is the probe's park position; MPs occupy 1..=m. An entry is
//! the transition time of the local path plus the rotation time needed to
//! address the arriving MP. Touch moves between AP and MP are excluded: they
//! cost the same for every tour.
//!
//! Orientation model: `A` tilts the stylus away from straight down, `B` is the
//! azimuth, and the stylus points along `(sinA·cosB, sinA·sinB, −cosA)`. Both
//! axes index in 7.5° steps and `A` is limited to 105°.

use std::fmt::Write as _;
use std::path::Path;

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::PlanConfig;
use crate::error::{Error, Result};
use crate::geometry::{angle_between, MeasurementPoint, UnitVec3};
use crate::localpath::{plan_between, Endpoint, LocalPath};
use crate::scene::NodeCloud;

/// Rotary-head index step, degrees.
pub const INDEX_STEP_DEG: f64 = 7.5;
/// Largest reachable tilt, degrees.
pub const MAX_TILT_DEG: f64 = 105.0;

/// Time to travel a local path at velocity `v`; `a_inf` when infeasible.
pub fn transition_time(path: &LocalPath, v: f64, a_inf: f64) -> f64 {
    debug_assert!(v > 0.0);
    if !path.feasible {
        return a_inf;
    }
    path.length() / v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StylusOrientation {
    /// Tilt, degrees in [0, 105].
    pub a: f64,
    /// Azimuth, degrees in (−180, 180].
    pub b: f64,
    pub direction: UnitVec3,
}

impl StylusOrientation {
    /// Builds an orientation from head angles. `B` is wrapped into
    /// (−180, 180] and zeroed when `A = 0`, where it has no effect.
    pub fn new(a: f64, b: f64) -> Self {
        let b = if a == 0.0 { 0.0 } else { wrap_deg(b) };
        let (sa, ca) = a.to_radians().sin_cos();
        let (sb, cb) = b.to_radians().sin_cos();
        let direction = UnitVec3::new(sa * cb, sa * sb, -ca).expect("unit by construction");
        Self { a, b, direction }
    }
}

/// Wraps an angle into (−180, 180].
fn wrap_deg(x: f64) -> f64 {
    let w = x.rem_euclid(360.0);
    if w > 180.0 {
        w - 360.0
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum OrientationError {
    #[error("tilt {a}° exceeds the head envelope of {MAX_TILT_DEG}°")]
    OutOfEnvelope { a: f64 },
    #[error("indexed stylus direction is {angle}° off the approach axis")]
    OutsideCone { angle: f64 },
}

/// The indexed orientation that approaches `mp` along its negated normal.
pub fn required_orientation(mp: &MeasurementPoint, theta_max: f64) -> Result<StylusOrientation, OrientationError> {
    let n = mp.normal;
    let a = n.k.clamp(-1.0, 1.0).acos().to_degrees();
    let b = if n.i == 0.0 && n.j == 0.0 { 0.0 } else { (-n.j).atan2(-n.i).to_degrees() };
    let snap = |x: f64| (x / INDEX_STEP_DEG).round() * INDEX_STEP_DEG;
    let a = snap(a);
    if a > MAX_TILT_DEG {
        return Err(OrientationError::OutOfEnvelope { a });
    }
    let o = StylusOrientation::new(a, snap(b));
    let angle = angle_between(&o.direction, &-n);
    if angle > theta_max {
        return Err(OrientationError::OutsideCone { angle });
    }
    Ok(o)
}

/// Sequential-axis rotation angle `|ΔA| + |ΔB|`, with ΔB wrapped.
pub fn rotation_angle(from: &StylusOrientation, to: &StylusOrientation) -> f64 {
    (to.a - from.a).abs() + wrap_deg(to.b - from.b).abs()
}

/// Rotation time before measuring an MP with normal `mp_to_normal`.
///
/// Zero when the orientations coincide or the current stylus already lies
/// within `theta_max` of the approach axis; otherwise angle / ω plus the pause.
pub fn rotation_time(from: &StylusOrientation, to: &StylusOrientation, mp_to_normal: &UnitVec3, cfg: &PlanConfig) -> f64 {
    let theta = rotation_angle(from, to);
    if theta == 0.0 || angle_between(&from.direction, &-*mp_to_normal) <= cfg.theta_max {
        return 0.0;
    }
    theta / cfg.omega + cfg.t_s
}

/// Provenance of one matrix entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    /// The cheaper direction's path, oriented from the lower index to the
    /// higher one.
    pub path: LocalPath,
    pub transition: f64,
    pub rotation: f64,
    /// True when the reverse direction was the cheaper one and its path was
    /// inverted.
    pub inverted: bool,
}

/// Symmetric time matrix over the depot (index 0) and m MPs.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeMatrix {
    n: usize,
    entries: Vec<f64>,
    a_inf: f64,
    labels: Vec<String>,
    legs: Option<Vec<Option<Leg>>>,
}

impl TimeMatrix {
    /// Builds from full rows (depot row first). Entries at or above `a_inf`
    /// are stored as `a_inf`.
    pub fn from_rows(rows: &[Vec<f64>], a_inf: f64) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("matrix is empty".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (q, &v) in row.iter().enumerate() {
                if v.is_nan() || v < 0.0 {
                    return Err(Error::InvalidMatrix(format!("entry ({i},{q}) = {v} is not a time")));
                }
                if i == q && v != 0.0 {
                    return Err(Error::InvalidMatrix(format!("diagonal entry {i} is {v}, not 0")));
                }
                entries.push(if v >= a_inf { a_inf } else { v });
            }
        }
        let labels = std::iter::once("origin".to_owned()).chain((1..n).map(|i| i.to_string())).collect();
        Ok(Self { n, entries, a_inf, labels, legs: None })
    }

    /// Number of MPs (excluding the depot).
    pub fn m(&self) -> usize {
        self.n - 1
    }

    /// Matrix order, m + 1.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn a_inf(&self) -> f64 {
        self.a_inf
    }

    #[inline]
    pub fn get(&self, i: usize, q: usize) -> f64 {
        self.entries[i * self.n + q]
    }

    pub fn is_inf(&self, i: usize, q: usize) -> bool {
        self.get(i, q) >= self.a_inf
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Labels per index; MP ids when built from a scene.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|q| self.get(i, q) == self.get(q, i)))
    }

    /// Provenance of entry `(i, q)`, if the matrix was built from a scene.
    pub fn leg(&self, i: usize, q: usize) -> Option<&Leg> {
        let (lo, hi) = if i < q { (i, q) } else { (q, i) };
        self.legs.as_ref()?.get(pair_index(self.n, lo, hi))?.as_ref()
    }

    /// Local path for travelling `i → q`, oriented accordingly.
    pub fn oriented_path(&self, i: usize, q: usize) -> Option<LocalPath> {
        let leg = self.leg(i, q)?;
        Some(if i < q { leg.path.clone() } else { leg.path.reversed() })
    }

    /// Restriction to the given indices; `keep[0]` must be the depot.
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        debug_assert_eq!(keep.first(), Some(&0));
        let n = keep.len();
        let mut entries = Vec::with_capacity(n * n);
        for &i in keep {
            for &q in keep {
                entries.push(self.get(i, q));
            }
        }
        let legs = self.legs.as_ref().map(|_| {
            let mut out = vec![None; n * (n.saturating_sub(1)) / 2];
            for a in 0..n {
                for b in a + 1..n {
                    out[pair_index(n, a, b)] = self.leg(keep[a], keep[b]).cloned();
                }
            }
            out
        });
        Self {
            n,
            entries,
            a_inf: self.a_inf,
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            legs,
        }
    }

    /// CSV with one row per index; `a_inf` entries written as `inf`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            for q in 0..self.n {
                if q > 0 {
                    s.push(',');
                }
                if self.is_inf(i, q) {
                    s.push_str("inf");
                } else {
                    let _ = write!(s, "{}", self.get(i, q));
                }
            }
            s.push('\n');
        }
        s
    }

    /// Parses the [`TimeMatrix::to_csv`] format, mapping `inf` to `a_inf`.
    pub fn from_csv(text: &str, a_inf: f64) -> Result<Self> {
        let mut rows = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|f| {
                    let f = f.trim();
                    if f.eq_ignore_ascii_case("inf") {
                        Ok(a_inf)
                    } else {
                        f.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .ok_or_else(|| Error::InvalidMatrix(format!("line {}: bad entry `{f}`", n + 1)))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows, a_inf)
    }

    pub fn load_csv(path: &Path, a_inf: f64) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(&text, a_inf).map_err(|e| match e {
            Error::InvalidMatrix(m) => Error::InvalidMatrix(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

fn pair_index(n: usize, lo: usize, hi: usize) -> usize {
    debug_assert!(lo < hi && hi < n);
    lo * n - lo * (lo + 1) / 2 + (hi - lo - 1)
}

/// One direction of a matrix entry before symmetrization.
struct Directed {
    path: LocalPath,
    transition: f64,
    rotation: f64,
    total: f64,
}

/// Plans every ordered pair, caps slow legs, and symmetrizes by keeping the
/// cheaper direction of each pair.
///
/// The depot acts as an approach point with no orientation requirement; its
/// legs borrow the MP's normal to steer SMPs. MPs the head cannot address
/// get all-`a_inf` rows. Pairs are planned in parallel and merged in pair
/// order, so the result does not depend on scheduling.
pub fn build_time_matrix(mps: &[MeasurementPoint], cloud: &NodeCloud, cfg: &PlanConfig) -> TimeMatrix {
    let n = mps.len() + 1;
    let orientations: Vec<Option<StylusOrientation>> = mps
        .iter()
        .map(|mp| match required_orientation(mp, cfg.theta_max) {
            Ok(o) => Some(o),
            Err(e) => {
                warn!("measurement point `{}` is unreachable: {e}", mp.id);
                None
            }
        })
        .collect();
    let endpoints: Vec<Endpoint> = mps.iter().map(|mp| Endpoint::from_mp(mp, cfg.d)).collect();
    let depot_for = |mp: usize| Endpoint {
        id: "origin".to_owned(),
        approach: cfg.origin,
        normal: endpoints[mp].normal,
    };

    let directed = |from: usize, to: usize| -> Directed {
        let (a, b) = match (from, to) {
            (0, q) => (depot_for(q - 1), endpoints[q - 1].clone()),
            (i, 0) => (endpoints[i - 1].clone(), depot_for(i - 1)),
            (i, q) => (endpoints[i - 1].clone(), endpoints[q - 1].clone()),
        };
        let path = plan_between(&a, &b, cloud, cfg);
        let transition = path.transition_time;
        let rotation = match (from, to) {
            (0, _) | (_, 0) => 0.0,
            (i, q) => match (orientations[i - 1], orientations[q - 1]) {
                (Some(oi), Some(oq)) => rotation_time(&oi, &oq, &mps[q - 1].normal, cfg),
                _ => 0.0,
            },
        };
        let raw = transition + rotation;
        let total = if path.feasible && raw <= cfg.local_time_cap { raw } else { cfg.a_inf };
        Directed { path, transition, rotation, total }
    };

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |q| (i, q))).collect();
    let planned: Vec<(Option<Leg>, f64)> = pairs
        .par_iter()
        .map(|&(i, q)| {
            let unreachable = |k: usize| k > 0 && orientations[k - 1].is_none();
            if unreachable(i) || unreachable(q) {
                return (None, cfg.a_inf);
            }
            let fwd = directed(i, q);
            let rev = directed(q, i);
            let (chosen, inverted) = if rev.total < fwd.total { (rev, true) } else { (fwd, false) };
            let total = chosen.total;
            let (transition, rotation) =
                if total >= cfg.a_inf { (cfg.a_inf, 0.0) } else { (chosen.transition, chosen.rotation) };
            let path = if inverted { chosen.path.reversed() } else { chosen.path };
            debug!("T[{i}][{q}] = {total} via {:?}", path.rule_used);
            (Some(Leg { path, transition, rotation, inverted }), total)
        })
        .collect();

    let mut entries = vec![0.0; n * n];
    let mut legs = Vec::with_capacity(planned.len());
    for (&(i, q), (leg, total)) in pairs.iter().zip(planned) {
        entries[i * n + q] = total;
        entries[q * n + i] = total;
        legs.push(leg);
    }
    let labels = std::iter::once("origin".to_owned()).chain(mps.iter().map(|m| m.id.clone())).collect();
    TimeMatrix { n, entries, a_inf: cfg.a_inf, labels, legs: Some(legs) }
}

/// Cost of a closed tour through the depot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TourCost {
    pub total: f64,
    /// At least one leg is `a_inf`.
    pub tainted: bool,
}

/// `T[0][o₁] + Σ T[oₖ][oₖ₊₁] + T[oₘ][0]`, summed in that order.
pub fn tour_time(order: &[usize], t: &TimeMatrix) -> TourCost {
    let mut total = 0.0;
    let mut tainted = false;
    let mut prev = 0;
    for &next in order.iter().chain(std::iter::once(&0)) {
        if order.is_empty() {
            break;
        }
        let c = t.get(prev, next);
        tainted |= c >= t.a_inf();
        total += c;
        prev = next;
    }
    TourCost { total, tainted }
}
