//! Points, directions and the small geometric kernels the planner is built on.
//!
//! Lengths are millimetres throughout. [`Point3`] doubles as a free vector
//! where that reads naturally (differences, offsets); [`UnitVec3`] is only
//! ever constructed normalized.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Tolerance on `‖n‖ = 1` for an already-normalized direction.
pub const UNIT_TOL: f64 = 1e-9;

/// Normals are treated as opposite once the angle between them exceeds this.
pub const OPPOSITE_ANGLE_DEG: f64 = 179.9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(&self, other: &Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Point3) -> Point3 {
        Point3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        (*self - *other).norm()
    }

    pub fn midpoint(&self, other: &Point3) -> Point3 {
        Point3::new(
            0.5 * (self.x + other.x),
            0.5 * (self.y + other.y),
            0.5 * (self.z + other.z),
        )
    }

    /// `self + t · dir`.
    pub fn offset(&self, dir: &UnitVec3, t: f64) -> Point3 {
        Point3::new(self.x + t * dir.i, self.y + t * dir.j, self.z + t * dir.k)
    }

    fn lex_le(&self, other: &Point3) -> bool {
        (self.x, self.y, self.z) <= (other.x, other.y, other.z)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// A direction of unit length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitVec3 {
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl UnitVec3 {
    pub const X: UnitVec3 = UnitVec3 { i: 1.0, j: 0.0, k: 0.0 };
    pub const Y: UnitVec3 = UnitVec3 { i: 0.0, j: 1.0, k: 0.0 };
    pub const Z: UnitVec3 = UnitVec3 { i: 0.0, j: 0.0, k: 1.0 };

    /// Normalizes `(i, j, k)`. `None` for zero-length or non-finite input.
    pub fn new(i: f64, j: f64, k: f64) -> Option<Self> {
        Self::from_vec(Point3::new(i, j, k))
    }

    pub fn from_vec(v: Point3) -> Option<Self> {
        let n = v.norm();
        if !n.is_finite() || n < UNIT_TOL {
            return None;
        }
        Some(Self { i: v.x / n, j: v.y / n, k: v.z / n })
    }

    pub fn as_vec(&self) -> Point3 {
        Point3::new(self.i, self.j, self.k)
    }

    pub fn dot(&self, other: &UnitVec3) -> f64 {
        self.i * other.i + self.j * other.j + self.k * other.k
    }

    pub fn norm(&self) -> f64 {
        self.as_vec().norm()
    }
}

impl Neg for UnitVec3 {
    type Output = UnitVec3;
    fn neg(self) -> UnitVec3 {
        UnitVec3 { i: -self.i, j: -self.j, k: -self.k }
    }
}

impl fmt::Display for UnitVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}, {}>", self.i, self.j, self.k)
    }
}

impl<'de> Deserialize<'de> for UnitVec3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            i: f64,
            j: f64,
            k: f64,
        }
        let raw = Raw::deserialize(d)?;
        UnitVec3::new(raw.i, raw.j, raw.k)
            .ok_or_else(|| serde::de::Error::custom("direction has zero length"))
    }
}

/// A feature to inspect: surface position plus outward unit normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPoint {
    pub id: String,
    pub position: Point3,
    pub normal: UnitVec3,
}

impl MeasurementPoint {
    pub fn new(id: impl Into<String>, position: Point3, normal: UnitVec3) -> Self {
        Self { id: id.into(), position, normal }
    }
}

/// The approach point at safety distance `d` along the MP normal.
pub fn approach_point(mp: &MeasurementPoint, d: f64) -> Point3 {
    debug_assert!(d > 0.0, "safety distance must be positive");
    mp.position.offset(&mp.normal, d)
}

/// Distance from `p` to the closed segment `[a, b]`.
///
/// Endpoints are put in a canonical order first so the result is bitwise
/// identical for `(a, b)` and `(b, a)`. A degenerate segment gives the
/// point-to-point distance.
pub fn point_segment_distance(p: &Point3, a: &Point3, b: &Point3) -> f64 {
    let (a, b) = if a.lex_le(b) { (a, b) } else { (b, a) };
    let ab = *b - *a;
    let len2 = ab.dot(&ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((*p - *a).dot(&ab) / len2).clamp(0.0, 1.0);
    let foot = *a + ab * t;
    p.distance(&foot)
}

/// Outcome of summing two MP normals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalSum {
    Direction(UnitVec3),
    /// The normals point in (numerically) opposite directions.
    Opposite,
}

/// Normalized `n_i + n_j`, or [`NormalSum::Opposite`] when the angle between
/// the normals exceeds [`OPPOSITE_ANGLE_DEG`].
pub fn normal_sum_direction(a: &MeasurementPoint, b: &MeasurementPoint) -> NormalSum {
    sum_direction(&a.normal, &b.normal)
}

/// [`normal_sum_direction`] on bare directions.
pub fn sum_direction(a: &UnitVec3, b: &UnitVec3) -> NormalSum {
    if angle_between(a, b) > OPPOSITE_ANGLE_DEG {
        return NormalSum::Opposite;
    }
    match UnitVec3::from_vec(a.as_vec() + b.as_vec()) {
        Some(dir) => NormalSum::Direction(dir),
        None => NormalSum::Opposite,
    }
}

/// Escape directions perpendicular to `n`, in the fixed formula order
/// `(−J,I,0), (−K,0,I), (0,−K,J), (J,−I,0), (K,0,−I), (0,K,−J)`.
///
/// Each entry is tagged with its 1-based formula index. Formulas that vanish
/// (axis-aligned normals) are dropped, so 4 or 6 directions come back.
pub fn perpendicular_directions(n: &UnitVec3) -> Vec<(usize, UnitVec3)> {
    let (i, j, k) = (n.i, n.j, n.k);
    let raw = [
        Point3::new(-j, i, 0.0),
        Point3::new(-k, 0.0, i),
        Point3::new(0.0, -k, j),
        Point3::new(j, -i, 0.0),
        Point3::new(k, 0.0, -i),
        Point3::new(0.0, k, -j),
    ];
    raw.iter()
        .enumerate()
        .filter_map(|(u, v)| UnitVec3::from_vec(*v).map(|dir| (u + 1, dir)))
        .collect()
}

/// Angle between two directions in degrees, in `[0, 180]`.
pub fn angle_between(u: &UnitVec3, v: &UnitVec3) -> f64 {
    u.dot(v).clamp(-1.0, 1.0).acos().to_degrees()
}
