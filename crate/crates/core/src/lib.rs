//! Multi-robot patrolling on metric roadmaps.
//!
//! Chains get optimal partitions and closed-form schedules for refresh time
//! and latency, plus a simulator of the distributed synchronization law.
//! Trees get an exhaustive optimal subtree collection, and general graphs get
//! two constant-factor approximations.

pub mod chain_traj;
pub mod cover;
pub mod cyclic;
pub mod error;
pub mod metrics;
pub mod partition;
pub mod roadmap;
pub mod sim;
pub mod trajectory;
pub mod tree;

pub use error::{Error, Result};
