//! Planning for a disk robot on a fixed-length tether anchored in a grid map.
//!
//! The crate models the robot's world as an occupancy grid with disk
//! inflation, tracks the homotopy class of tether curves with signed
//! obstacle-crossing words, and shortens curves to taut any-angle polylines.
//! On top of those primitives it plans single reconfigurations (`planner::tr`),
//! point-to-point moves (`planner::tp`), ordered multi-goal visits
//! (`planner::tmv`) and free-order tours (`planner::ttsp`), always keeping the
//! tether no longer than the given limit. `oracle` holds the brute-force
//! ground truth the planners are verified against.

#![forbid(unsafe_code)]

pub mod cli;
pub mod curve;
pub mod error;
pub mod gcp;
pub mod gridmap;
pub mod homotopy;
pub mod oracle;
pub mod planner;
pub mod render;
pub mod scenario;
pub mod shorten;

pub use error::{PlanError, Result};
