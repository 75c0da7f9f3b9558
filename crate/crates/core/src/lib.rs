//! Collision-free, time-minimal probe inspection tours over surfaces
//! sampled as point clouds.
//!
//! The pipeline: sample or load a [`scene::NodeCloud`], plan a collision-free
//! [`localpath::LocalPath`] between every pair of approach points, assemble
//! the symmetric [`timing::TimeMatrix`], and solve the depot-anchored tour
//! with one of the [`tsp`] solvers. [`pipeline::run_plan`] strings it all
//! together.

pub mod collision;
pub mod config;
pub mod error;
pub mod geometry;
pub mod localpath;
pub mod pipeline;
pub mod scene;
pub mod timing;
pub mod tsp;

pub use config::PlanConfig;
pub use error::{Error, Result};
pub use geometry::{MeasurementPoint, Point3, UnitVec3};
