//! Distributed synchronization of a patrolling team on a chain.
//!
//! Robots follow the extreme-viewpoint rules of the synchronization law:
//! reversal at the chain ends, waiting for the neighbour at shared cluster
//! boundaries, the alternating token inside a group of clusters and the
//! timer between groups. Integration uses a fixed step, but arrivals,
//! meetings and departures are placed at their exact instants.

pub mod scenarios;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain_traj::aggregate_clusters;
use crate::error::{Error, Result};
use crate::metrics::{eval_latency, eval_refresh_time, Latency, LatencyOptions, RefreshOptions, DEFAULT_ETA};
use crate::partition::{optimal_partition_bisect, Partition};
use crate::roadmap::ChainRoadmap;
use crate::trajectory::{RobotTrack, TeamTrajectory};

/// Robot `robot` (0-based) is stopped from `start` until `end`, or forever.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureSpec {
    pub robot: usize,
    pub start: f64,
    pub end: Option<f64>,
}

impl FailureSpec {
    fn covers(&self, t: f64) -> bool {
        t >= self.start && self.end.is_none_or(|e| t < e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub position: f64,
    /// +1 or -1.
    pub dir: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub horizon: f64,
    pub seed: u64,
    /// Variance of the additive speed noise.
    #[serde(default)]
    pub sigma2: f64,
    #[serde(default)]
    pub failures: Vec<FailureSpec>,
    /// Silence after which the team declares a robot failed; `None` disables detection.
    #[serde(default)]
    pub theta: Option<f64>,
    pub eta: f64,
    /// Bisection tolerance for repartitioning.
    pub eps: f64,
    /// Explicit start states for the robots of nonempty clusters, in order.
    #[serde(default)]
    pub initial: Option<Vec<InitialState>>,
}

impl SimConfig {
    pub fn new(dt: f64, horizon: f64, seed: u64) -> Self {
        SimConfig {
            dt,
            horizon,
            seed,
            sigma2: 0.0,
            failures: Vec::new(),
            theta: None,
            eta: DEFAULT_ETA,
            eps: 1e-9,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EventKind {
    Meet { with: usize },
    Fail,
    Resume,
    Detect { failed: usize },
    Repartition,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimEvent {
    pub time: f64,
    pub robot: usize,
    pub kind: EventKind,
}

impl SimEvent {
    pub fn label(&self) -> String {
        match self.kind {
            EventKind::Meet { with } => format!("meet:{with}"),
            EventKind::Fail => "fail".into(),
            EventKind::Resume => "resume".into(),
            EventKind::Detect { failed } => format!("detect:{failed}"),
            EventKind::Repartition => "repartition".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trace {
    /// Exact piecewise-linear motion of every robot over `[0, horizon]`.
    pub trajectory: TeamTrajectory,
    /// Direction changes per robot.
    pub dirs: Vec<Vec<(f64, i8)>>,
    pub events: Vec<SimEvent>,
    /// Partitions in force, with the time they took effect.
    pub partitions: Vec<(f64, Partition)>,
    /// Start of the final `2 d_max`-periodic regime, if one was reached.
    pub convergence_time: Option<f64>,
    /// `2 d_max` of the final partition.
    pub period: f64,
    pub config: SimConfig,
}

impl Trace {
    pub fn partition(&self) -> &Partition {
        &self.partitions.last().expect("trace has a partition").1
    }

    pub fn dir_at(&self, robot: usize, t: f64) -> i8 {
        let d = &self.dirs[robot];
        let k = d.partition_point(|&(s, _)| s <= t);
        if k == 0 {
            0
        } else {
            d[k - 1].1
        }
    }

    /// Refresh time and latency over `[from, to]`, treating the motion as
    /// periodic with the final period. Latency is `None` for a lone robot.
    pub fn window_metrics(&self, chain: &ChainRoadmap, from: f64, to: f64) -> Result<(f64, Option<Latency>)> {
        let mut x = self.trajectory.truncated(to);
        x.period = Some(self.period);
        let rt = eval_refresh_time(
            &x,
            chain,
            RefreshOptions {
                warmup: from,
                eta: self.config.eta,
                strict: false,
            },
        )?;
        if x.robots.iter().filter(|r| !r.parked).count() < 2 {
            return Ok((rt, None));
        }
        let lt = eval_latency(
            &x,
            chain,
            LatencyOptions {
                eta: self.config.eta,
                warmup: from,
                ..Default::default()
            },
        )?;
        Ok((rt, Some(lt)))
    }

    /// Samples every `dt` as CSV rows `time,robot,position,dir,event`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time,robot,position,dir,event\n");
        let dt = self.config.dt;
        let steps = (self.trajectory.horizon / dt).round() as usize;
        let mut ev = self.events.iter().peekable();
        for k in 0..=steps {
            let t = k as f64 * dt;
            while let Some(e) = ev.next_if(|e| e.time < t + 0.5 * dt) {
                let x = self.trajectory.position(e.robot, e.time);
                out.push_str(&format!("{},{},{},{},{}\n", e.time, e.robot, x, self.dir_at(e.robot, e.time), e.label()));
            }
            for i in 0..self.trajectory.m() {
                out.push_str(&format!("{},{},{},{},\n", t, i, self.trajectory.position(i, t), self.dir_at(i, t)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mode {
    Moving(i8),
    /// At an extreme viewpoint; leaves at the scheduled time, if any.
    Waiting(Option<(f64, i8)>),
    /// Outside the assigned cluster after a repartition, heading into it.
    Transit(i8),
}

#[derive(Debug, Clone)]
struct Robot {
    x: f64,
    l: f64,
    r: f64,
    mode: Mode,
    /// Arrival time at the current extreme.
    since: f64,
    a_time: f64,
    delta: f64,
    left_end: bool,
    right_end: bool,
    /// Left extreme of its group (timer side) rather than a token boundary.
    left_group_edge: bool,
    right_group_edge: bool,
    w: f64,
}

struct Sim<'a> {
    chain: &'a ChainRoadmap,
    cfg: &'a SimConfig,
    robots: Vec<Robot>,
    /// Robot ids of the operating team in chain order.
    team: Vec<usize>,
    failed: Vec<bool>,
    n_meet: Vec<u64>,
    contact: Vec<bool>,
    points: Vec<Vec<(f64, f64)>>,
    dirs: Vec<Vec<(f64, i8)>>,
    events: Vec<SimEvent>,
    partitions: Vec<(f64, Partition)>,
}

fn push_point(track: &mut Vec<(f64, f64)>, t: f64, x: f64) {
    match track.last_mut() {
        Some(last) if last.0 >= t => last.1 = x,
        _ => track.push((t, x)),
    }
}

impl<'a> Sim<'a> {
    fn record(&mut self, id: usize, t: f64) {
        let x = self.robots[id].x;
        push_point(&mut self.points[id], t, x);
    }

    fn set_dir(&mut self, id: usize, t: f64, d: i8) {
        let dirs = &mut self.dirs[id];
        if dirs.last().is_none_or(|&(_, old)| old != d) {
            dirs.push((t, d));
        }
    }

    /// Applies a partition to the surviving team in index order.
    fn assign(&mut self, partition: &Partition, survivors: &[usize], t: f64) -> Result<()> {
        let agg = aggregate_clusters(partition)?;
        let mut team = Vec::new();
        for (k, &id) in survivors.iter().enumerate() {
            let c = partition.cluster(k);
            if c.is_empty() {
                continue;
            }
            let g = agg.group_of[k].expect("nonempty cluster has a group");
            let members = &agg.groups[g];
            let rb = &mut self.robots[id];
            rb.l = c.l;
            rb.r = c.r;
            rb.delta = (agg.d_max - agg.lengths[g]) / 2.0;
            rb.left_group_edge = members[0] == k;
            rb.right_group_edge = *members.last().unwrap() == k;
            rb.a_time = t;
            team.push(id);
        }
        for (k, &id) in team.iter().enumerate() {
            self.robots[id].left_end = k == 0;
            self.robots[id].right_end = k + 1 == team.len();
        }
        self.n_meet = vec![0; team.len().saturating_sub(1)];
        self.contact = vec![false; team.len().saturating_sub(1)];
        self.team = team;
        self.partitions.push((t, partition.clone()));
        Ok(())
    }

    fn on_arrival(&mut self, id: usize, t: f64) {
        let rb = &mut self.robots[id];
        let at_left = rb.x == rb.l;
        if rb.x == rb.r {
            rb.a_time = t;
        }
        let next = if at_left && rb.left_end {
            Mode::Moving(1)
        } else if !at_left && rb.right_end {
            Mode::Moving(-1)
        } else {
            rb.since = t;
            Mode::Waiting(None)
        };
        rb.mode = next;
        let d = match next {
            Mode::Moving(d) => d,
            _ => 0,
        };
        self.set_dir(id, t, d);
    }

    fn depart(&mut self, id: usize, t: f64, d: i8) {
        self.record(id, t);
        self.robots[id].mode = Mode::Moving(d);
        self.set_dir(id, t, d);
        if let Some(k) = self.team.iter().position(|&j| j == id) {
            if k > 0 {
                self.contact[k - 1] = false;
            }
            if k < self.contact.len() {
                self.contact[k] = false;
            }
        }
    }

    /// Moves robot `id` from `from` to `to`, handling departures and arrivals
    /// at their exact times.
    fn advance(&mut self, id: usize, from: f64, to: f64) {
        let mut t = from;
        for _ in 0..8 {
            let rb = &self.robots[id];
            let (d, target, transit) = match rb.mode {
                Mode::Waiting(Some((s, d))) if s < to => {
                    self.depart(id, s.max(t), d);
                    t = s.max(t);
                    continue;
                }
                Mode::Waiting(_) => return,
                Mode::Moving(d) => (d, if d > 0 { rb.r } else { rb.l }, false),
                Mode::Transit(d) => (d, if d > 0 { rb.l } else { rb.r }, true),
            };
            let v = d as f64 + rb.w;
            let gap = target - rb.x;
            if gap == 0.0 || gap * v > 0.0 {
                let te = t + gap / v;
                if te <= to {
                    self.robots[id].x = target;
                    self.record(id, te);
                    self.on_arrival(id, te);
                    t = te;
                    continue;
                }
            }
            let rb = &mut self.robots[id];
            let x = rb.x + v * (to - t);
            rb.x = if transit { x } else { x.clamp(rb.l, rb.r) };
            return;
        }
        unreachable!("robot {id} changed mode too often in one step");
    }

    /// Processes meetings of consecutive team members waiting at their
    /// shared boundary. Returns robots that leave before `t1`.
    fn meetings(&mut self, t0: f64, t1: f64) -> Vec<(usize, f64)> {
        let mut leaving = Vec::new();
        for k in 0..self.contact.len() {
            let (a, b) = (self.team[k], self.team[k + 1]);
            let (ra, rb) = (&self.robots[a], &self.robots[b]);
            let ready = matches!(ra.mode, Mode::Waiting(_))
                && matches!(rb.mode, Mode::Waiting(_))
                && ra.x == ra.r
                && rb.x == rb.l
                && !self.failed[a]
                && !self.failed[b];
            if self.contact[k] || !ready {
                continue;
            }
            let c = ra.since.max(rb.since).max(t0);
            self.contact[k] = true;
            self.n_meet[k] += 1;
            let n = self.n_meet[k];
            self.events.push(SimEvent {
                time: c,
                robot: a,
                kind: EventKind::Meet { with: b },
            });
            let (plan_a, plan_b) = if self.robots[a].right_group_edge {
                let ra = &self.robots[a];
                let tau = (ra.a_time + ra.delta - c).max(0.0);
                (Some((c + ra.delta + tau, -1)), Some((c + tau, 1)))
            } else if n % 2 == 1 {
                (Some((c, -1)), None)
            } else {
                (None, Some((c, 1)))
            };
            for (id, plan) in [(a, plan_a), (b, plan_b)] {
                self.robots[id].mode = Mode::Waiting(plan);
                if let Some((s, _)) = plan {
                    if s < t1 {
                        leaving.push((id, s));
                    }
                }
            }
        }
        leaving
    }

    fn update_failures(&mut self, t: f64) {
        for id in 0..self.robots.len() {
            let now = self.cfg.failures.iter().any(|f| f.robot == id && f.covers(t));
            if now != self.failed[id] {
                self.failed[id] = now;
                self.events.push(SimEvent {
                    time: t,
                    robot: id,
                    kind: if now { EventKind::Fail } else { EventKind::Resume },
                });
                self.record(id, t);
                let d = match (now, self.robots[id].mode) {
                    (false, Mode::Moving(d) | Mode::Transit(d)) => d,
                    _ => 0,
                };
                self.set_dir(id, t, d);
            }
        }
    }

    /// Each robot waiting at a boundary suspects the neighbour it waits for
    /// once the wait reaches θ. A robot suspected by all of its neighbours
    /// is declared failed and the others repartition.
    fn detect(&mut self, t: f64) -> Result<()> {
        let Some(theta) = self.cfg.theta else {
            return Ok(());
        };
        if self.team.len() < 2 {
            return Ok(());
        }
        let waited = |id: usize, at_right: bool| {
            let rb = &self.robots[id];
            let at = if at_right { rb.r } else { rb.l };
            matches!(rb.mode, Mode::Waiting(None)) && rb.x == at && t - rb.since >= theta && !self.failed[id]
        };
        let n = self.team.len();
        let victim = (0..n).find(|&k| {
            let from_left = k == 0 || (!self.contact[k - 1] && waited(self.team[k - 1], true));
            let from_right = k + 1 == n || (!self.contact[k] && waited(self.team[k + 1], false));
            from_left && from_right
        });
        let Some(victim) = victim.map(|k| self.team[k]) else {
            return Ok(());
        };
        for &id in &self.team {
            if id != victim {
                self.events.push(SimEvent {
                    time: t,
                    robot: id,
                    kind: EventKind::Detect { failed: victim },
                });
            }
        }
        let survivors: Vec<usize> = self.team.iter().copied().filter(|&id| id != victim).collect();
        let (partition, _) = optimal_partition_bisect(self.chain, survivors.len(), self.cfg.eps)?;
        self.assign(&partition, &survivors, t)?;
        for &id in &survivors {
            self.events.push(SimEvent {
                time: t,
                robot: id,
                kind: EventKind::Repartition,
            });
            let rb = &mut self.robots[id];
            let prev = match rb.mode {
                Mode::Moving(d) | Mode::Transit(d) | Mode::Waiting(Some((_, d))) => d,
                Mode::Waiting(None) => 1,
            };
            if rb.x < rb.l {
                rb.mode = Mode::Transit(1);
            } else if rb.x > rb.r {
                rb.mode = Mode::Transit(-1);
            } else if rb.x == rb.l || rb.x == rb.r {
                self.on_arrival(id, t);
                continue;
            } else {
                rb.mode = Mode::Moving(prev);
            }
            let d = match self.robots[id].mode {
                Mode::Moving(d) | Mode::Transit(d) => d,
                Mode::Waiting(_) => 0,
            };
            self.set_dir(id, t, d);
        }
        Ok(())
    }
}

fn validate(chain: &ChainRoadmap, partition: &Partition, cfg: &SimConfig) -> Result<()> {
    let covered: usize = partition.clusters().iter().map(|c| c.vertices.len()).sum();
    if partition.cardinality() == 0 || covered != chain.n() {
        return Err(Error::InvalidArgument("partition does not match the chain".into()));
    }
    if !(cfg.dt > 0.0) || !(cfg.horizon > 0.0) {
        return Err(Error::InvalidArgument("dt and horizon must be positive".into()));
    }
    if !(cfg.sigma2 >= 0.0) {
        return Err(Error::InvalidArgument("noise variance must be nonnegative".into()));
    }
    let min_len = partition
        .active()
        .iter()
        .map(|&i| partition.cluster(i).length())
        .fold(f64::INFINITY, f64::min);
    if cfg.dt >= min_len / 4.0 {
        return Err(Error::InvalidArgument(format!(
            "dt = {} is too coarse for the shortest cluster ({min_len}); need dt < {}",
            cfg.dt,
            min_len / 4.0
        )));
    }
    for f in &cfg.failures {
        if f.robot >= partition.m() || !(f.start >= 0.0 && f.start < cfg.horizon) || f.end.is_some_and(|e| e <= f.start) {
            return Err(Error::InvalidArgument(format!("invalid failure scenario {f:?}")));
        }
    }
    if let Some(init) = &cfg.initial {
        let active = partition.active();
        if init.len() != active.len() {
            return Err(Error::InvalidArgument(format!(
                "{} initial states given for {} active robots",
                init.len(),
                active.len()
            )));
        }
        for (s, &i) in init.iter().zip(&active) {
            let c = partition.cluster(i);
            if !(s.position >= c.l && s.position <= c.r) || !(s.dir == 1 || s.dir == -1) {
                return Err(Error::InvalidArgument(format!(
                    "initial state {s:?} of robot {i} is outside [{}, {}] or has no direction",
                    c.l, c.r
                )));
            }
        }
    }
    Ok(())
}

/// Runs the synchronization law from random (or given) initial states.
pub fn simulate(chain: &ChainRoadmap, partition: &Partition, cfg: &SimConfig) -> Result<Trace> {
    validate(chain, partition, cfg)?;
    let m = partition.m();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let blank = Robot {
        x: 0.0,
        l: 0.0,
        r: 0.0,
        mode: Mode::Waiting(None),
        since: 0.0,
        a_time: 0.0,
        delta: 0.0,
        left_end: false,
        right_end: false,
        left_group_edge: false,
        right_group_edge: false,
        w: 0.0,
    };
    let mut sim = Sim {
        chain,
        cfg,
        robots: vec![blank; m],
        team: Vec::new(),
        failed: vec![false; m],
        n_meet: Vec::new(),
        contact: Vec::new(),
        points: vec![Vec::new(); m],
        dirs: vec![Vec::new(); m],
        events: Vec::new(),
        partitions: Vec::new(),
    };
    let all: Vec<usize> = (0..m).collect();
    sim.assign(partition, &all, 0.0)?;
    for i in 0..m {
        let c = partition.cluster(i);
        sim.robots[i].x = c.l;
    }
    for (k, &id) in sim.team.clone().iter().enumerate() {
        let (l, r) = (sim.robots[id].l, sim.robots[id].r);
        let state = match &cfg.initial {
            Some(init) => init[k],
            None => InitialState {
                position: l + rng.random::<f64>() * (r - l),
                dir: if rng.random::<bool>() { 1 } else { -1 },
            },
        };
        sim.robots[id].x = state.position;
        sim.robots[id].mode = Mode::Moving(state.dir);
        sim.set_dir(id, 0.0, state.dir);
    }
    for id in 0..m {
        sim.record(id, 0.0);
    }
    for id in sim.team.clone() {
        let rb = &sim.robots[id];
        let toward = match rb.mode {
            Mode::Moving(d) if d > 0 => rb.r,
            _ => rb.l,
        };
        if rb.x == toward {
            sim.on_arrival(id, 0.0);
        }
    }
    let noise = if cfg.sigma2 > 0.0 {
        Some(Normal::new(0.0, cfg.sigma2.sqrt()).map_err(|e| Error::InvalidArgument(e.to_string()))?)
    } else {
        None
    };
    let steps = (cfg.horizon / cfg.dt).round() as usize;
    for k in 0..steps {
        let t0 = k as f64 * cfg.dt;
        let t1 = if k + 1 == steps { cfg.horizon } else { (k + 1) as f64 * cfg.dt };
        sim.update_failures(t0);
        for id in sim.team.clone() {
            sim.robots[id].w = noise.map_or(0.0, |n| n.sample(&mut rng));
            if !sim.failed[id] {
                sim.advance(id, t0, t1);
            }
        }
        for (id, s) in sim.meetings(t0, t1) {
            sim.advance(id, s, t1);
        }
        sim.detect(t1)?;
        let record_all = noise.is_some() || k + 1 == steps;
        for id in 0..m {
            if record_all {
                sim.record(id, t1);
            }
        }
    }
    let in_team: Vec<bool> = (0..m).map(|i| sim.team.contains(&i)).collect();
    let robots = sim
        .points
        .into_iter()
        .zip(&in_team)
        .map(|(points, &active)| RobotTrack { points, parked: !active })
        .collect();
    let trajectory = TeamTrajectory {
        robots,
        horizon: cfg.horizon,
        period: None,
    };
    let (since, last) = sim.partitions.last().map(|(t, p)| (*t, p.clone())).unwrap();
    let period = 2.0 * last.dimension();
    let team = sim.team.clone();
    let convergence_time = convergence_time(&trajectory, &team, since, period, cfg.dt, cfg.eta.max(1e-9));
    Ok(Trace {
        trajectory,
        dirs: sim.dirs,
        events: sim.events,
        partitions: sim.partitions,
        convergence_time,
        period,
        config: cfg.clone(),
    })
}

/// First sample time after `from` from which every listed robot repeats its
/// motion with the given period, provided at least two periods remain.
pub fn convergence_time(x: &TeamTrajectory, robots: &[usize], from: f64, period: f64, dt: f64, tol: f64) -> Option<f64> {
    let horizon = x.horizon;
    let first = (from / dt).ceil() as usize;
    let last = ((horizon - period) / dt).floor() as usize;
    if last < first {
        return None;
    }
    let mut settled = None;
    for k in (first..=last).rev() {
        let s = k as f64 * dt;
        let defect = robots
            .iter()
            .map(|&i| (x.position(i, s + period) - x.position(i, s)).abs())
            .fold(0.0, f64::max);
        if defect > tol {
            break;
        }
        settled = Some(s);
    }
    settled.filter(|&s| horizon - s >= 2.0 * period)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma2: f64,
    pub rt_mean: f64,
    pub rt_min: f64,
    pub rt_max: f64,
    pub lt_mean: f64,
    pub lt_min: f64,
    pub lt_max: f64,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "sigma2,rt_mean,rt_min,rt_max,lt_mean,lt_min,lt_max";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.sigma2, self.rt_mean, self.rt_min, self.rt_max, self.lt_mean, self.lt_min, self.lt_max
        )
    }
}

/// Seed of run `index` under `master`: one ChaCha stream per run.
pub fn run_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.random()
}

/// Runs `runs` simulations per variance and summarizes refresh time and
/// latency over `[warmup, base.horizon]`. Runs execute in parallel on the
/// current rayon pool; results do not depend on scheduling.
pub fn noise_sweep(
    chain: &ChainRoadmap,
    partition: &Partition,
    variances: &[f64],
    runs: usize,
    master_seed: u64,
    base: &SimConfig,
    warmup: f64,
) -> Result<Vec<SweepRow>> {
    let jobs: Vec<(usize, u64)> = (0..variances.len())
        .flat_map(|v| (0..runs).map(move |r| (v, (v * runs + r) as u64)))
        .collect();
    let results: Vec<(usize, f64, f64)> = jobs
        .par_iter()
        .map(|&(v, idx)| {
            let cfg = SimConfig {
                seed: run_seed(master_seed, idx),
                sigma2: variances[v],
                ..base.clone()
            };
            let trace = simulate(chain, partition, &cfg)?;
            let (rt, lt) = trace.window_metrics(chain, warmup, cfg.horizon)?;
            Ok((v, rt, lt.map_or(0.0, |l| l.overall)))
        })
        .collect::<Result<_>>()?;
    Ok(variances
        .iter()
        .enumerate()
        .map(|(v, &sigma2)| {
            let rows: Vec<&(usize, f64, f64)> = results.iter().filter(|r| r.0 == v).collect();
            let stats = |f: fn(&(usize, f64, f64)) -> f64| {
                let vals: Vec<f64> = rows.iter().map(|r| f(r)).collect();
                let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (mean, min, max)
            };
            let (rt_mean, rt_min, rt_max) = stats(|r| r.1);
            let (lt_mean, lt_min, lt_max) = stats(|r| r.2);
            SweepRow {
                sigma2,
                rt_mean,
                rt_min,
                rt_max,
                lt_mean,
                lt_min,
                lt_max,
            }
        })
        .collect())
}
