//! Closed-form team trajectories on a partitioned chain.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::trajectory::{periodic_track, RobotTrack, TeamTrajectory};

/// Consecutive nonempty clusters grouped while their total length stays
/// within `d_max`. Robots of one group behave like a single robot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregatedClusters {
    /// Robot (cluster slot) indices per group, in chain order.
    pub groups: Vec<Vec<usize>>,
    /// Group index of each robot; `None` for empty clusters.
    pub group_of: Vec<Option<usize>>,
    /// Sum of member cluster lengths per group.
    pub lengths: Vec<f64>,
    pub left_extremes: Vec<f64>,
    pub right_extremes: Vec<f64>,
    pub d_max: f64,
}

impl AggregatedClusters {
    pub fn m_bar(&self) -> usize {
        self.groups.len()
    }

    /// Sum of lengths of the members of `robot`'s group that precede it.
    pub fn prefix_in_group(&self, partition: &Partition, robot: usize) -> Option<f64> {
        let g = self.group_of[robot]?;
        Some(
            self.groups[g]
                .iter()
                .take_while(|&&j| j != robot)
                .map(|&j| partition.cluster(j).length())
                .sum(),
        )
    }
}

pub fn aggregate_clusters(partition: &Partition) -> Result<AggregatedClusters> {
    let active = partition.active();
    if active.is_empty() {
        return Err(Error::InvalidArgument("partition has no nonempty cluster".into()));
    }
    let d_max = partition.dimension();
    if !(d_max > 0.0) {
        return Err(Error::InvalidArgument("partition has zero dimension".into()));
    }
    let d: Vec<f64> = active.iter().map(|&i| partition.cluster(i).length()).collect();
    let groups: Vec<Vec<usize>> = group_lengths(&d, d_max)
        .into_iter()
        .map(|g| g.into_iter().map(|k| active[k]).collect())
        .collect();
    let lengths: Vec<f64> = groups
        .iter()
        .map(|g| g.iter().map(|&i| partition.cluster(i).length()).sum())
        .collect();
    let mut group_of = vec![None; partition.m()];
    for (g, members) in groups.iter().enumerate() {
        for &i in members {
            group_of[i] = Some(g);
        }
    }
    let left_extremes = groups.iter().map(|g| partition.cluster(g[0]).l).collect();
    let right_extremes = groups.iter().map(|g| partition.cluster(*g.last().unwrap()).r).collect();
    Ok(AggregatedClusters {
        groups,
        group_of,
        lengths,
        left_extremes,
        right_extremes,
        d_max,
    })
}

/// Greedy grouping of consecutive lengths: a group grows while its total
/// stays within `d_max`. Returns positions into `lengths`.
pub fn group_lengths(lengths: &[f64], d_max: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut sum = f64::INFINITY;
    for (k, &d) in lengths.iter().enumerate() {
        if sum + d <= d_max {
            sum += d;
            groups.last_mut().unwrap().push(k);
        } else {
            sum = d;
            groups.push(vec![k]);
        }
    }
    groups
}

fn check_horizon(horizon: f64, period: f64) -> Result<()> {
    if !(horizon >= period) || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is shorter than one period ({period})"
        )));
    }
    Ok(())
}

/// Builds a track from one cycle, dropping zero-length dwells.
fn cycle_track(raw: &[(f64, f64)], horizon: f64) -> RobotTrack {
    let mut cycle: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
    for &p in raw {
        match cycle.last() {
            Some(&(t, _)) if p.0 <= t => {}
            _ => cycle.push(p),
        }
    }
    periodic_track(&cycle, horizon)
}

/// Every robot sweeps its own cluster back and forth at unit speed.
pub fn traj_min_refresh(partition: &Partition, horizon: f64) -> Result<TeamTrajectory> {
    let dim = partition.dimension();
    check_horizon(horizon, 2.0 * dim)?;
    let robots = partition
        .clusters()
        .iter()
        .map(|c| {
            if c.is_empty() {
                RobotTrack::stationary(c.l, horizon, true)
            } else if c.length() == 0.0 {
                RobotTrack::stationary(c.l, horizon, false)
            } else {
                let d = c.length();
                periodic_track(&[(0.0, c.l), (d, c.r), (2.0 * d, c.l)], horizon)
            }
        })
        .collect();
    Ok(TeamTrajectory {
        robots,
        horizon,
        period: Some(2.0 * dim),
    })
}

fn tracks_with_parking(
    partition: &Partition,
    horizon: f64,
    mut active_track: impl FnMut(usize) -> RobotTrack,
) -> Vec<RobotTrack> {
    partition
        .clusters()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.is_empty() {
                RobotTrack::stationary(c.l, horizon, true)
            } else if c.length() == 0.0 {
                RobotTrack::stationary(c.l, horizon, false)
            } else {
                active_track(i)
            }
        })
        .collect()
}

/// Relay schedule minimizing up-latency: robot `i` leaves `l_i` as soon as
/// robot `i-1` could hand over, so a message crosses each cluster once.
///
/// Robot `i` leaves `l_i` at `o_i + 2k d_max` with `o_i = sum_{j<i} d_j`,
/// reaches `r_i` after `d_i` and is back at `l_i` after `2 d_i`. The pattern
/// is extended periodically to negative `k`, so the trajectory is
/// `2 d_max`-periodic from time 0.
pub fn traj_min_uplatency(partition: &Partition, horizon: f64) -> Result<TeamTrajectory> {
    let active = partition.active();
    if active.len() < 2 {
        return Err(Error::InvalidArgument("latency needs at least two active robots".into()));
    }
    let d_max = partition.dimension();
    let period = 2.0 * d_max;
    check_horizon(horizon, period)?;
    let mut offset = vec![0.0; partition.m()];
    let mut acc = 0.0;
    for &i in &active {
        offset[i] = acc;
        acc += partition.cluster(i).length();
    }
    let robots = tracks_with_parking(partition, horizon, |i| {
        let c = partition.cluster(i);
        let (o, d) = (offset[i], c.length());
        cycle_track(
            &[(o, c.l), (o + d, c.r), (o + 2.0 * d, c.l), (o + period, c.l)],
            horizon,
        )
    });
    Ok(TeamTrajectory {
        robots,
        horizon,
        period: Some(period),
    })
}

/// Schedule with minimum refresh time and synchronized groups.
///
/// Within a group, robot `i+1` leaves its left end when robot `i` reaches its
/// right end, and the return trip mirrors this. Group `k` (counted from 1)
/// is centered at `l` on multiples of `2 d_max` when odd and shifted by
/// `d_max` when even, so neighbouring groups meet every `d_max`.
pub fn traj_min_latency(partition: &Partition, horizon: f64) -> Result<TeamTrajectory> {
    let active = partition.active();
    if active.len() < 2 {
        return Err(Error::InvalidArgument("latency needs at least two active robots".into()));
    }
    let agg = aggregate_clusters(partition)?;
    let d_max = agg.d_max;
    let period = 2.0 * d_max;
    check_horizon(horizon, period)?;
    let robots = tracks_with_parking(partition, horizon, |i| {
        let c = partition.cluster(i);
        let g = agg.group_of[i].expect("active robot has a group");
        let phase = if g % 2 == 0 { 0.0 } else { d_max };
        let p = agg.prefix_in_group(partition, i).expect("active robot");
        let d = c.length();
        cycle_track(
            &[
                (phase - p, c.l),
                (phase + p, c.l),
                (phase + p + d, c.r),
                (phase + period - p - d, c.r),
                (phase + period - p, c.l),
            ],
            horizon,
        )
    });
    Ok(TeamTrajectory {
        robots,
        horizon,
        period: Some(period),
    })
}
