//! Planner configuration. Defaults follow the reference case-study values
//! (l = D₀ = 4 mm, d = 5 mm, h = 10 mm, k₀ = 10, ω = 1 °/s, tₛ = 0.3 s,
//! v = 85 mm/s, 200 s local-path cap).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanConfig {
    /// Element size of the node cloud, mm.
    pub l: f64,
    /// Collision clearance threshold, mm.
    pub d0: f64,
    /// Safety distance from MP to approach point, mm.
    pub d: f64,
    /// SMP step length, mm.
    pub h: f64,
    /// Maximum SMP-generation iterations per rule or direction.
    pub k0: usize,
    /// Average angular speed of the rotary axes, deg/s.
    pub omega: f64,
    /// Pause per probe rotation, s.
    pub t_s: f64,
    /// Average transition velocity, mm/s.
    pub v: f64,
    /// Searching-volume inflation ε, mm. `None` means `max(d0, l)`.
    pub eps: Option<f64>,
    /// Sentinel time for inaccessible legs, s.
    pub a_inf: f64,
    /// Stylus/normal tolerance cone half-angle, deg.
    pub theta_max: f64,
    /// Local paths slower than this are treated as inaccessible, s.
    pub local_time_cap: f64,
    /// Probe park position; tours start and end here.
    pub origin: Point3,
    pub seed: u64,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            l: 4.0,
            d0: 4.0,
            d: 5.0,
            h: 10.0,
            k0: 10,
            omega: 1.0,
            t_s: 0.3,
            v: 85.0,
            eps: None,
            a_inf: 1e6,
            theta_max: 30.0,
            local_time_cap: 200.0,
            origin: Point3::new(0.0, 0.0, 300.0),
            seed: 0,
        }
    }
}

impl PlanConfig {
    /// Effective searching-volume inflation.
    pub fn eps(&self) -> f64 {
        self.eps.unwrap_or(self.d0.max(self.l))
    }

    /// Grid cell size for node-cloud indexing.
    pub fn cell_size(&self) -> f64 {
        self.l.max(self.d0)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("l", self.l),
            ("d0", self.d0),
            ("d", self.d),
            ("h", self.h),
            ("omega", self.omega),
            ("v", self.v),
            ("a_inf", self.a_inf),
            ("local_time_cap", self.local_time_cap),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.t_s >= 0.0 && self.t_s.is_finite()) {
            return Err(Error::InvalidConfig(format!("t_s must be non-negative, got {}", self.t_s)));
        }
        if self.k0 == 0 {
            return Err(Error::InvalidConfig("k0 must be at least 1".into()));
        }
        if self.a_inf <= self.local_time_cap {
            return Err(Error::InvalidConfig("a_inf must exceed local_time_cap".into()));
        }
        if !(self.theta_max > 0.0 && self.theta_max <= 90.0) {
            return Err(Error::InvalidConfig("theta_max must lie in (0, 90]".into()));
        }
        if !(self.eps() >= self.d0 && self.eps().is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "eps ({}) must be at least d0 ({})",
                self.eps(),
                self.d0
            )));
        }
        if !self.origin.is_finite() {
            return Err(Error::InvalidConfig("origin must be finite".into()));
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: Self = serde_json::from_str(&text).map_err(|e| Error::json(path, e))?;
        cfg.validate()?;
        Ok(cfg)
    }
}
