//! Refresh time and latency of team trajectories.
//!
//! Visits are derived from breakpoints: a moving segment visits a viewpoint at
//! the instant it crosses it, and a dwell within `eta` of a viewpoint visits it
//! for the whole dwell. No sampling is involved unless the caller resamples.

use serde::Serialize;

use crate::chain_traj::aggregate_clusters;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::roadmap::{ChainRoadmap, Roadmap};
use crate::trajectory::{GraphPos, GraphTrajectory, RobotTrack, TeamTrajectory};

/// Default spatial tolerance for visit and adjacency detection.
pub const DEFAULT_ETA: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct RefreshOptions {
    /// Visits before this time are ignored.
    pub warmup: f64,
    pub eta: f64,
    /// Use the raw definition: boundary gaps are not capped by the period.
    pub strict: bool,
}

impl Default for RefreshOptions {
    fn default() -> Self {
        RefreshOptions {
            warmup: 0.0,
            eta: DEFAULT_ETA,
            strict: false,
        }
    }
}

type Intervals = Vec<(f64, f64)>;

fn merge(mut iv: Intervals) -> Intervals {
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Intervals = Vec::with_capacity(iv.len());
    for (s, e) in iv {
        match out.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => out.push((s, e)),
        }
    }
    out
}

/// Visit intervals of one robot, per viewpoint index.
fn robot_visits(track: &RobotTrack, coords: &[f64], eta: f64) -> Vec<Intervals> {
    let mut visits = vec![Vec::new(); coords.len()];
    let pts = &track.points;
    let mut record = |t0: f64, x0: f64, t1: f64, x1: f64| {
        let (lo, hi) = (x0.min(x1) - eta, x0.max(x1) + eta);
        let start = coords.partition_point(|&c| c < lo);
        for (v, &c) in coords.iter().enumerate().skip(start) {
            if c > hi {
                break;
            }
            if x0 == x1 {
                visits[v].push((t0, t1));
            } else if (x0 - c).abs() <= eta {
                visits[v].push((t0, t0));
            } else if (x1 - c).abs() <= eta {
                visits[v].push((t1, t1));
            } else if (c - x0) * (c - x1) < 0.0 {
                let t = t0 + (c - x0) * (t1 - t0) / (x1 - x0);
                visits[v].push((t, t));
            }
        }
    };
    if pts.len() == 1 {
        record(pts[0].0, pts[0].1, pts[0].0, pts[0].1);
    }
    for w in pts.windows(2) {
        record(w[0].0, w[0].1, w[1].0, w[1].1);
    }
    visits.into_iter().map(merge).collect()
}

/// Merged visit intervals per viewpoint over the whole team.
pub fn visit_log(x: &TeamTrajectory, chain: &ChainRoadmap, eta: f64) -> Vec<Intervals> {
    let mut all = vec![Vec::new(); chain.n()];
    for r in &x.robots {
        for (v, iv) in robot_visits(r, chain.coords(), eta).into_iter().enumerate() {
            all[v].extend(iv);
        }
    }
    all.into_iter().map(merge).collect()
}

/// Largest gap between consecutive visits within `[warmup, horizon]`.
fn worst_gap(visits: &[Intervals], warmup: f64, horizon: f64, cap: Option<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for iv in visits {
        let clipped: Intervals = iv
            .iter()
            .filter(|&&(s, e)| e >= warmup && s <= horizon)
            .map(|&(s, e)| (s.max(warmup), e.min(horizon)))
            .collect();
        if clipped.is_empty() {
            return f64::INFINITY;
        }
        let boundary = |g: f64| match cap {
            Some(p) => g.min(p),
            None => g,
        };
        worst = worst.max(boundary(clipped[0].0 - warmup));
        worst = worst.max(boundary(horizon - clipped[clipped.len() - 1].1));
        for w in clipped.windows(2) {
            worst = worst.max(w[1].0 - w[0].1);
        }
    }
    worst
}

/// Refresh time of a chain trajectory; infinite if a viewpoint is never visited.
pub fn eval_refresh_time(x: &TeamTrajectory, chain: &ChainRoadmap, opts: RefreshOptions) -> Result<f64> {
    if x.robots.is_empty() {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    }
    if !(opts.warmup >= 0.0 && opts.warmup < x.horizon) {
        return Err(Error::InvalidArgument(format!(
            "warmup {} must lie in [0, horizon = {})",
            opts.warmup, x.horizon
        )));
    }
    if let Some(p) = x.period {
        if !opts.strict && x.horizon - opts.warmup < p {
            return Err(Error::InvalidArgument(format!(
                "evaluation window {} is shorter than the declared period {p}",
                x.horizon - opts.warmup
            )));
        }
    }
    let visits = visit_log(x, chain, opts.eta);
    let cap = if opts.strict { None } else { x.period };
    Ok(worst_gap(&visits, opts.warmup, x.horizon, cap))
}

/// Refresh time measured on samples taken every `dt`: the trajectory is
/// rebuilt by linear interpolation and a viewpoint counts as visited when a
/// sample path passes within `dt` of it.
pub fn eval_refresh_time_sampled(x: &TeamTrajectory, chain: &ChainRoadmap, dt: f64, warmup: f64) -> Result<f64> {
    let sampled = x.resampled(dt);
    eval_refresh_time(
        &sampled,
        chain,
        RefreshOptions {
            warmup,
            eta: dt,
            strict: false,
        },
    )
}

/// Refresh time on a general roadmap. Vertices are visited only at
/// breakpoints, since every segment stays within one edge.
pub fn eval_refresh_time_graph(x: &GraphTrajectory, g: &Roadmap, warmup: f64, strict: bool) -> Result<f64> {
    if x.robots.is_empty() {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    }
    let mut visits = vec![Vec::new(); g.n()];
    for r in &x.robots {
        for (k, &(t, p)) in r.points.iter().enumerate() {
            if let GraphPos::Vertex(v) = p {
                let end = match r.points.get(k + 1) {
                    Some(&(t1, GraphPos::Vertex(w))) if w == v => t1,
                    _ => t,
                };
                visits[v].push((t, end));
            }
        }
    }
    let visits: Vec<Intervals> = visits.into_iter().map(merge).collect();
    let cap = if strict { None } else { x.period };
    Ok(worst_gap(&visits, warmup, x.horizon, cap))
}

/// Communication record between consecutive active robots.
#[derive(Debug, Clone, Serialize)]
pub struct CommLog {
    /// Active robot pairs `(i-1, i)` in chain order.
    pub pairs: Vec<(usize, usize)>,
    /// Merged communication intervals per pair.
    pub intervals: Vec<Intervals>,
    /// Interval starts per pair, with 0 prepended.
    pub phi: Vec<Vec<f64>>,
}

fn intersect(a: &Intervals, b: &Intervals) -> Intervals {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        let s = a[i].0.max(b[j].0);
        let e = a[i].1.min(b[j].1);
        if s <= e {
            out.push((s, e));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Instants at which consecutive active robots occupy adjacent viewpoints.
pub fn comm_instants(x: &TeamTrajectory, chain: &ChainRoadmap, eta: f64) -> CommLog {
    let active: Vec<usize> = (0..x.m()).filter(|&i| !x.robots[i].parked).collect();
    let visits: Vec<Vec<Intervals>> = active
        .iter()
        .map(|&i| robot_visits(&x.robots[i], chain.coords(), eta))
        .collect();
    let n = chain.n();
    let mut pairs = Vec::new();
    let mut intervals = Vec::new();
    let mut phi = Vec::new();
    for k in 1..active.len() {
        let (a, b) = (&visits[k - 1], &visits[k]);
        let mut iv = Vec::new();
        for u in 0..n {
            if a[u].is_empty() {
                continue;
            }
            for v in u.saturating_sub(1)..=(u + 1).min(n - 1) {
                if !b[v].is_empty() {
                    iv.extend(intersect(&a[u], &b[v]));
                }
            }
        }
        let iv = merge(iv);
        let mut starts = vec![0.0];
        starts.extend(iv.iter().map(|&(s, _)| s).filter(|&s| s > 0.0));
        pairs.push((active[k - 1], active[k]));
        intervals.push(iv);
        phi.push(starts);
    }
    CommLog { pairs, intervals, phi }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelayMode {
    /// Messages move only at the start of a communication interval.
    Starts,
    /// Messages may also move at any instant inside an interval.
    Intervals,
}

#[derive(Debug, Clone, Copy)]
pub struct LatencyOptions {
    pub eta: f64,
    /// Injections before this time are ignored.
    pub warmup: f64,
    pub mode: RelayMode,
}

impl Default for LatencyOptions {
    fn default() -> Self {
        LatencyOptions {
            eta: DEFAULT_ETA,
            warmup: 0.0,
            mode: RelayMode::Starts,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Latency {
    pub up: f64,
    pub down: f64,
    pub overall: f64,
}

/// Earliest relay instant at or after `t` for pair `k`.
fn next_relay(log: &CommLog, k: usize, t: f64, mode: RelayMode) -> Option<f64> {
    if mode == RelayMode::Intervals {
        if t == 0.0 {
            return Some(0.0);
        }
        let iv = &log.intervals[k];
        let idx = iv.partition_point(|&(_, e)| e < t);
        return iv.get(idx).map(|&(s, _)| s.max(t));
    }
    let phi = &log.phi[k];
    let idx = phi.partition_point(|&s| s < t);
    phi.get(idx).copied()
}

/// Up-, down- and overall latency by message propagation over the
/// communication instants. Chains that do not complete are charged up to the
/// horizon.
pub fn eval_latency(x: &TeamTrajectory, chain: &ChainRoadmap, opts: LatencyOptions) -> Result<Latency> {
    let log = comm_instants(x, chain, opts.eta);
    latency_from_log(&log, x.horizon, opts)
}

pub fn latency_from_log(log: &CommLog, horizon: f64, opts: LatencyOptions) -> Result<Latency> {
    let pairs = log.pairs.len();
    if pairs == 0 {
        return Err(Error::InvalidArgument("latency needs at least two active robots".into()));
    }
    let propagate = |order: &mut dyn Iterator<Item = usize>, t0: f64| -> f64 {
        let mut t = t0;
        for k in order {
            match next_relay(log, k, t, opts.mode) {
                Some(s) => t = s,
                None => return horizon,
            }
        }
        t
    };
    let mut up: f64 = 0.0;
    for &t in log.phi[0].iter().filter(|&&t| t >= opts.warmup) {
        let end = propagate(&mut (1..pairs), t);
        up = up.max(end - t);
    }
    let mut down: f64 = 0.0;
    for &t in log.phi[pairs - 1].iter().filter(|&&t| t >= opts.warmup) {
        let end = propagate(&mut (0..pairs - 1).rev(), t);
        down = down.max(end - t);
    }
    Ok(Latency {
        up,
        down,
        overall: up.max(down),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatencyBounds {
    /// Sum of interior cluster lengths.
    pub up_lb: f64,
    /// Bound for `2 d_max`-periodic trajectories on the same partition.
    pub periodic_lb: f64,
}

pub fn latency_lower_bounds(partition: &Partition) -> Result<LatencyBounds> {
    let active = partition.active();
    if active.len() < 2 {
        return Err(Error::InvalidArgument("latency needs at least two active robots".into()));
    }
    let d: Vec<f64> = active.iter().map(|&i| partition.cluster(i).length()).collect();
    let up_lb = d[1..d.len() - 1].iter().sum();
    let agg = aggregate_clusters(partition)?;
    let m_bar = agg.m_bar() as f64;
    let raw = (m_bar - 2.0) * agg.d_max + (agg.lengths[0] - d[0]) + (agg.lengths[agg.m_bar() - 1] - d[d.len() - 1]);
    Ok(LatencyBounds {
        up_lb,
        periodic_lb: raw.max(0.0),
    })
}
