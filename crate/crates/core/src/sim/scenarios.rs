//! Case-study setups for the synchronization law.

use serde::Serialize;

use super::{FailureSpec, SimConfig};
use crate::error::Result;
use crate::partition::{left_induced_cardinality, optimal_partition_bisect, BisectionReport, Partition};
use crate::roadmap::ChainRoadmap;

/// Cluster lengths of the case-study chain. Every pair of neighbours sums
/// to more than the longest, so each cluster forms its own group.
pub const CASE_STUDY_LENGTHS: [f64; 10] = [4.0, 3.0, 5.0, 3.5, 4.5, 3.0, 5.0, 4.0, 3.5, 4.5];
/// Distance between consecutive clusters of the case-study chain.
pub const CASE_STUDY_GAP: f64 = 2.5;
pub const CASE_STUDY_ROBOTS: usize = 10;

/// A 30-viewpoint chain whose optimal 10-partition is three viewpoints per
/// cluster with the lengths in [`CASE_STUDY_LENGTHS`].
pub fn case_study_chain() -> ChainRoadmap {
    let mut coords = Vec::with_capacity(30);
    let mut x = 0.0;
    for (k, &d) in CASE_STUDY_LENGTHS.iter().enumerate() {
        let inner = if k % 2 == 0 { 0.4 } else { 0.65 };
        coords.extend([x, x + inner * d, x + d]);
        x += d + CASE_STUDY_GAP;
    }
    ChainRoadmap::from_coordinates(coords).expect("case-study chain is valid")
}

pub const CASE_STUDY_DT: f64 = 0.05;

/// Robot 7 (index 6) stops during `[300, 400]`.
pub fn temporary_failure(seed: u64) -> SimConfig {
    SimConfig {
        failures: vec![FailureSpec {
            robot: 6,
            start: 300.0,
            end: Some(400.0),
        }],
        ..SimConfig::new(CASE_STUDY_DT, 800.0, seed)
    }
}

/// Robot 7 (index 6) stops for good at t = 500; the team declares it failed
/// after 120 s of silence.
pub fn permanent_failure(seed: u64) -> SimConfig {
    SimConfig {
        failures: vec![FailureSpec {
            robot: 6,
            start: 500.0,
            end: None,
        }],
        theta: Some(120.0),
        ..SimConfig::new(CASE_STUDY_DT, 1400.0, seed)
    }
}

/// Outcome of the scripted start-up: gather at the leftmost viewpoint,
/// count the team, and let the leader find the partition by surveying.
#[derive(Debug, Clone, Serialize)]
pub struct BootstrapReport {
    /// Time until every robot reaches the leftmost viewpoint at unit speed.
    pub gather_time: f64,
    pub team_size: usize,
    /// Distance the leader travels: one chain sweep per bisection step.
    pub survey_distance: f64,
    pub partition: Partition,
    pub bisection: BisectionReport,
}

pub fn bootstrap(chain: &ChainRoadmap, positions: &[f64], eps: f64) -> Result<BootstrapReport> {
    let left = chain.coords()[0];
    let gather_time = positions.iter().map(|&x| (x - left).abs()).fold(0.0, f64::max);
    let team_size = positions.len();
    let (partition, bisection) = optimal_partition_bisect(chain, team_size, eps)?;
    debug_assert!(left_induced_cardinality(chain.coords(), bisection.b) <= team_size);
    Ok(BootstrapReport {
        gather_time,
        team_size,
        survey_distance: bisection.iterations as f64 * 2.0 * chain.length(),
        partition,
        bisection,
    })
}
