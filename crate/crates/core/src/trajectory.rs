//! Piecewise-linear team trajectories.
//!
//! Chain trajectories store scalar arc-length positions. Graph trajectories
//! store vertices or points inside edges, with every segment confined to a
//! single edge so that vertex visits happen only at breakpoints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roadmap::{Roadmap, RoadmapPoint};

/// Slack allowed on the unit speed limit to absorb rounding.
pub const SPEED_SLACK: f64 = 1e-9;

/// One robot's position over time on a chain: `(t, x)` breakpoints with
/// strictly increasing times, linear in between.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotTrack {
    pub points: Vec<(f64, f64)>,
    /// Robot assigned to an empty cluster; excluded from latency chains.
    pub parked: bool,
}

impl RobotTrack {
    pub fn stationary(x: f64, horizon: f64, parked: bool) -> Self {
        RobotTrack {
            points: vec![(0.0, x), (horizon, x)],
            parked,
        }
    }

    pub fn position(&self, t: f64) -> f64 {
        let pts = &self.points;
        let k = pts.partition_point(|&(s, _)| s <= t);
        if k == 0 {
            return pts[0].1;
        }
        if k == pts.len() {
            return pts[k - 1].1;
        }
        let (t0, x0) = pts[k - 1];
        let (t1, x1) = pts[k];
        if t == t0 {
            return x0;
        }
        x0 + (x1 - x0) * (t - t0) / (t1 - t0)
    }
}

/// Repeats one period of motion over `[0, horizon]`.
///
/// `cycle` spans exactly one period starting at any (possibly negative) time,
/// and must return to its starting position.
pub fn periodic_track(cycle: &[(f64, f64)], horizon: f64) -> RobotTrack {
    assert!(cycle.len() >= 2, "a cycle needs two breakpoints");
    let c0 = cycle[0].0;
    let period = cycle[cycle.len() - 1].0 - c0;
    assert!(period > 0.0, "cycle must have positive duration");
    debug_assert!((cycle[0].1 - cycle[cycle.len() - 1].1).abs() < 1e-9);
    let k0 = ((0.0 - c0) / period).floor() as i64 - 1;
    let mut raw: Vec<(f64, f64)> = Vec::new();
    let mut k = k0;
    loop {
        let base = k as f64 * period;
        for &(t, x) in &cycle[..cycle.len() - 1] {
            raw.push((t + base, x));
        }
        if c0 + base > horizon {
            break;
        }
        k += 1;
    }
    let last = cycle[cycle.len() - 1];
    raw.push((last.0 + (k as f64) * period, last.1));
    clip(&raw, 0.0, horizon)
}

/// Restricts a breakpoint list to `[t0, t1]`, interpolating at the cut points
/// and removing zero-length segments.
fn clip(raw: &[(f64, f64)], t0: f64, t1: f64) -> RobotTrack {
    let full = RobotTrack {
        points: raw.to_vec(),
        parked: false,
    };
    let mut points = vec![(t0, full.position(t0))];
    for &(t, x) in raw {
        if t > t0 && t < t1 && t > points.last().unwrap().0 {
            points.push((t, x));
        }
    }
    if t1 > points.last().unwrap().0 {
        points.push((t1, full.position(t1)));
    }
    RobotTrack { points, parked: false }
}

/// Team trajectory on a chain roadmap.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamTrajectory {
    pub robots: Vec<RobotTrack>,
    pub horizon: f64,
    /// Declared period, when the team motion is periodic.
    pub period: Option<f64>,
}

impl TeamTrajectory {
    pub fn m(&self) -> usize {
        self.robots.len()
    }

    pub fn position(&self, robot: usize, t: f64) -> f64 {
        self.robots[robot].position(t)
    }

    /// Checks breakpoint ordering, coverage of `[0, horizon]` and the unit
    /// speed limit on every segment.
    pub fn validate(&self) -> Result<()> {
        if self.robots.is_empty() {
            return Err(Error::InvalidArgument("trajectory has no robots".into()));
        }
        for (i, r) in self.robots.iter().enumerate() {
            if r.points.len() < 2 {
                return Err(Error::InvalidArgument(format!("robot {i} has fewer than two breakpoints")));
            }
            if r.points[0].0 != 0.0 || r.points.last().unwrap().0 != self.horizon {
                return Err(Error::InvalidArgument(format!("robot {i} does not span [0, horizon]")));
            }
            for w in r.points.windows(2) {
                let (t0, x0) = w[0];
                let (t1, x1) = w[1];
                if !(t1 > t0) {
                    return Err(Error::InvalidArgument(format!("robot {i}: times not increasing at {t0}")));
                }
                if (x1 - x0).abs() > (t1 - t0) * (1.0 + SPEED_SLACK) + SPEED_SLACK {
                    return Err(Error::InvalidArgument(format!(
                        "robot {i}: speed {} exceeds 1 at t = {t0}",
                        (x1 - x0).abs() / (t1 - t0)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Sorted union of all breakpoint times.
    pub fn breakpoint_times(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self.robots.iter().flat_map(|r| r.points.iter().map(|p| p.0)).collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts
    }

    /// `x_i(t) <= x_{i+1}(t) + tol` at every breakpoint (sufficient, since
    /// positions are linear between union breakpoints).
    pub fn is_order_invariant(&self, tol: f64) -> bool {
        self.breakpoint_times().iter().all(|&t| {
            self.robots
                .windows(2)
                .all(|w| w[0].position(t) <= w[1].position(t) + tol)
        })
    }

    /// Largest deviation of `x(t + period)` from `x(t)` over `[0, horizon - period]`.
    pub fn periodicity_defect(&self, period: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for r in &self.robots {
            for &(t, _) in &r.points {
                for s in [t, t - period] {
                    if s >= 0.0 && s + period <= self.horizon {
                        worst = worst.max((r.position(s + period) - r.position(s)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Same motion delayed by `shift`; robots hold their initial positions
    /// during `[0, shift]`.
    pub fn time_shifted(&self, shift: f64) -> TeamTrajectory {
        assert!(shift >= 0.0);
        let robots = self
            .robots
            .iter()
            .map(|r| {
                let mut points = Vec::with_capacity(r.points.len() + 1);
                if shift > 0.0 {
                    points.push((0.0, r.points[0].1));
                }
                points.extend(r.points.iter().map(|&(t, x)| (t + shift, x)));
                RobotTrack {
                    points,
                    parked: r.parked,
                }
            })
            .collect();
        TeamTrajectory {
            robots,
            horizon: self.horizon + shift,
            period: self.period,
        }
    }

    /// Positions at `t = k dt` for `k = 0..=floor(horizon / dt)`.
    pub fn sample(&self, dt: f64) -> Vec<(f64, Vec<f64>)> {
        let steps = (self.horizon / dt).floor() as usize;
        (0..=steps)
            .map(|k| {
                let t = k as f64 * dt;
                (t, self.robots.iter().map(|r| r.position(t)).collect())
            })
            .collect()
    }

    /// Piecewise-linear reconstruction from samples taken every `dt`.
    pub fn resampled(&self, dt: f64) -> TeamTrajectory {
        let samples = self.sample(dt);
        let horizon = samples.last().map(|s| s.0).unwrap_or(0.0);
        let robots = (0..self.m())
            .map(|i| RobotTrack {
                points: samples.iter().map(|(t, xs)| (*t, xs[i])).collect(),
                parked: self.robots[i].parked,
            })
            .collect();
        TeamTrajectory {
            robots,
            horizon,
            period: self.period,
        }
    }

    /// The same motion cut at `horizon`.
    pub fn truncated(&self, horizon: f64) -> TeamTrajectory {
        let robots = self
            .robots
            .iter()
            .map(|r| {
                let mut points: Vec<(f64, f64)> = r.points.iter().copied().take_while(|&(t, _)| t < horizon).collect();
                points.push((horizon, r.position(horizon)));
                RobotTrack {
                    points,
                    parked: r.parked,
                }
            })
            .collect();
        TeamTrajectory {
            robots,
            horizon,
            period: self.period,
        }
    }

    pub fn to_doc(&self) -> TrajectoryDoc {
        TrajectoryDoc {
            period: self.period,
            horizon: Some(self.horizon),
            robots: self
                .robots
                .iter()
                .enumerate()
                .map(|(id, r)| RobotDoc {
                    id,
                    breakpoints: r.points.iter().map(|&(t, x)| [t, x]).collect(),
                    parked: r.parked,
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &TrajectoryDoc) -> Result<Self> {
        let mut robots: Vec<(usize, RobotTrack)> = doc
            .robots
            .iter()
            .map(|r| {
                (
                    r.id,
                    RobotTrack {
                        points: r.breakpoints.iter().map(|p| (p[0], p[1])).collect(),
                        parked: r.parked,
                    },
                )
            })
            .collect();
        robots.sort_by_key(|(id, _)| *id);
        let horizon = match doc.horizon {
            Some(h) => h,
            None => robots
                .iter()
                .filter_map(|(_, r)| r.points.last().map(|p| p.0))
                .fold(0.0, f64::max),
        };
        let traj = TeamTrajectory {
            robots: robots.into_iter().map(|(_, r)| r).collect(),
            horizon,
            period: doc.period,
        };
        traj.validate()?;
        Ok(traj)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobotDoc {
    pub id: usize,
    pub breakpoints: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub parked: bool,
}

/// File form of a chain trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    pub robots: Vec<RobotDoc>,
}

// ---------------------------------------------------------------------------
// Graph trajectories

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphPos {
    Vertex(usize),
    /// Point at distance `offset` from `edges[edge].u`, strictly inside the edge.
    Edge { edge: usize, offset: f64 },
}

impl GraphPos {
    pub fn from_point(g: &Roadmap, p: RoadmapPoint) -> Self {
        match p.vertex(g) {
            Some(v) => GraphPos::Vertex(v),
            None => GraphPos::Edge {
                edge: p.edge,
                offset: p.offset,
            },
        }
    }

    /// Point at `dist` along edge `edge` measured from endpoint `from`.
    pub fn along(g: &Roadmap, edge: usize, from: usize, dist: f64) -> Self {
        let e = g.edges()[edge];
        let offset = if from == e.u { dist } else { e.length - dist };
        if offset <= 0.0 {
            GraphPos::Vertex(e.u)
        } else if offset >= e.length {
            GraphPos::Vertex(e.v)
        } else {
            GraphPos::Edge { edge, offset }
        }
    }
}

/// Travel distance between two positions that share an edge (or vertex).
fn segment_length(g: &Roadmap, a: GraphPos, b: GraphPos) -> Option<f64> {
    let offset_on = |p: GraphPos, edge: usize| -> Option<f64> {
        let e = g.edges()[edge];
        match p {
            GraphPos::Vertex(v) if v == e.u => Some(0.0),
            GraphPos::Vertex(v) if v == e.v => Some(e.length),
            GraphPos::Edge { edge: k, offset } if k == edge => Some(offset),
            _ => None,
        }
    };
    match (a, b) {
        (GraphPos::Vertex(u), GraphPos::Vertex(v)) if u == v => Some(0.0),
        (GraphPos::Vertex(u), GraphPos::Vertex(v)) => g.edge_between(u, v).map(|k| g.edges()[k].length),
        (GraphPos::Edge { edge, .. }, _) | (_, GraphPos::Edge { edge, .. }) => {
            Some((offset_on(a, edge)? - offset_on(b, edge)?).abs())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphTrack {
    pub points: Vec<(f64, GraphPos)>,
}

/// Team trajectory on a general roadmap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphTrajectory {
    pub robots: Vec<GraphTrack>,
    pub horizon: f64,
    pub period: Option<f64>,
}

impl GraphTrajectory {
    /// Every segment must stay on one edge and respect the unit speed limit.
    pub fn validate(&self, g: &Roadmap) -> Result<()> {
        for (i, r) in self.robots.iter().enumerate() {
            if r.points.len() < 2 || r.points[0].0 != 0.0 || r.points.last().unwrap().0 != self.horizon {
                return Err(Error::InvalidArgument(format!("robot {i} does not span [0, horizon]")));
            }
            for w in r.points.windows(2) {
                let (t0, a) = w[0];
                let (t1, b) = w[1];
                if !(t1 > t0) {
                    return Err(Error::InvalidArgument(format!("robot {i}: times not increasing at {t0}")));
                }
                let len = segment_length(g, a, b).ok_or_else(|| {
                    Error::InvalidArgument(format!("robot {i}: segment at t = {t0} leaves its edge"))
                })?;
                if len > (t1 - t0) * (1.0 + SPEED_SLACK) + SPEED_SLACK {
                    return Err(Error::InvalidArgument(format!("robot {i}: speed exceeds 1 at t = {t0}")));
                }
            }
        }
        Ok(())
    }
}

/// Unit-speed motion around a closed walk, repeated until `horizon`.
///
/// `walk` lists vertices with consecutive entries adjacent in `g` and
/// `walk[0] == walk[last]`. The robot starts `start` length units along the
/// walk. A walk of one vertex keeps the robot there.
pub fn tour_track(g: &Roadmap, walk: &[usize], start: f64, horizon: f64) -> GraphTrack {
    assert!(!walk.is_empty());
    if walk.len() == 1 {
        return GraphTrack {
            points: vec![(0.0, GraphPos::Vertex(walk[0])), (horizon, GraphPos::Vertex(walk[0]))],
        };
    }
    assert_eq!(walk[0], walk[walk.len() - 1], "walk must be closed");
    let edges: Vec<usize> = walk
        .windows(2)
        .map(|w| g.edge_between(w[0], w[1]).expect("consecutive walk vertices are adjacent"))
        .collect();
    let mut cum = vec![0.0];
    for &k in &edges {
        cum.push(cum.last().unwrap() + g.edges()[k].length);
    }
    let total = *cum.last().unwrap();
    let start = start.rem_euclid(total);

    // Position at arc length s in [0, total).
    let at = |s: f64| -> GraphPos {
        let j = cum.partition_point(|&c| c <= s).saturating_sub(1).min(edges.len() - 1);
        GraphPos::along(g, edges[j], walk[j], s - cum[j])
    };

    let mut points = vec![(0.0, at(start))];
    let mut lap = 0.0;
    'outer: loop {
        for j in 1..cum.len() {
            let t = lap + cum[j] - start;
            if t <= 0.0 {
                continue;
            }
            if t >= horizon {
                break 'outer;
            }
            points.push((t, GraphPos::Vertex(walk[j])));
        }
        lap += total;
    }
    let end = (start + horizon).rem_euclid(total);
    points.push((horizon, at(end)));
    GraphTrack { points }
}
