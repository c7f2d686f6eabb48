use std::path::Path;

use serde::Serialize;

use patrol_core::chain_traj::{traj_min_latency, traj_min_refresh, traj_min_uplatency};
use patrol_core::cover::{exact_cover_oracle, improve_two_opt, minmax_path_cover, path_cover_trajectory, PathCover};
use patrol_core::cyclic::{chain_approximation, chainify, RatioCertificate};
use patrol_core::metrics::{
    eval_latency, eval_refresh_time, eval_refresh_time_graph, eval_refresh_time_sampled, latency_lower_bounds,
    Latency, LatencyBounds, LatencyOptions, RefreshOptions, RelayMode,
};
use patrol_core::partition::{optimal_partition_bisect, optimal_partition_exact, Partition};
use patrol_core::roadmap::{load_roadmap, ChainRoadmap, LoadOptions, LoadedRoadmap, Roadmap, TreeRoadmap};
use patrol_core::sim::scenarios::{case_study_chain, CASE_STUDY_ROBOTS};
use patrol_core::sim::{noise_sweep, simulate, FailureSpec, SimConfig, SweepRow};
use patrol_core::trajectory::{GraphTrajectory, TeamTrajectory, TrajectoryDoc};
use patrol_core::tree::{
    best_partition_strategy, cyclic_strategy, efficient_trajectory, optimal_subtree_collection, TreeLimits,
};

use crate::args::*;
use crate::{CliResult, Failure, Run};

pub fn execute(cmd: &Command) -> CliResult<Run> {
    let mut run = Run::default();
    match cmd {
        Command::Partition(a) => partition(&mut run, a)?,
        Command::Synth(a) => synth(&mut run, a)?,
        Command::Simulate(a) => simulate_cmd(&mut run, a)?,
        Command::Eval(a) => eval(&mut run, a)?,
        Command::Sweep(a) => sweep(&mut run, a)?,
        Command::Tree(a) => tree(&mut run, a)?,
        Command::Cover(a) => cover(&mut run, a)?,
        Command::Chainify(a) => chainify_cmd(&mut run, a)?,
        Command::Rerun(_) => unreachable!("reruns are dispatched before execution"),
    }
    Ok(run)
}

fn load(run: &mut Run, input: &RoadmapIn) -> CliResult<LoadedRoadmap> {
    let text = run.read(&input.roadmap)?;
    let loaded = load_roadmap(
        &text,
        LoadOptions {
            allow_triangle_violations: input.allow_triangle_violations,
        },
    )
    .map_err(|e| Failure::Invalid(format!("{}: {e}", input.roadmap.display())))?;
    for w in loaded.warnings {
        eprintln!("warning: {}: {w}", input.roadmap.display());
    }
    Ok(loaded.roadmap)
}

fn load_chain(run: &mut Run, input: &RoadmapIn) -> CliResult<ChainRoadmap> {
    match load(run, input)? {
        LoadedRoadmap::Chain(c) => Ok(c),
        other => Err(Failure::Invalid(format!(
            "{}: expected a chain roadmap, found {:?}",
            input.roadmap.display(),
            other.kind()
        ))),
    }
}

fn chain_and_m(run: &mut Run, input: &ChainIn, m: Option<usize>) -> CliResult<(ChainRoadmap, usize)> {
    if input.case_study {
        return Ok((case_study_chain(), m.unwrap_or(CASE_STUDY_ROBOTS)));
    }
    let path = input.roadmap.clone().expect("clap enforces a roadmap");
    let chain = load_chain(
        run,
        &RoadmapIn {
            roadmap: path,
            allow_triangle_violations: false,
        },
    )?;
    let m = m.ok_or_else(|| Failure::Invalid("--robots is required with --roadmap".into()))?;
    Ok((chain, m))
}

// ---------------------------------------------------------------------------
// partition

#[derive(Serialize)]
struct ClusterDoc {
    robot: usize,
    viewpoints: Vec<String>,
    l: f64,
    r: f64,
    length: f64,
}

#[derive(Serialize)]
struct BisectionDoc {
    a: f64,
    b: f64,
    iterations: usize,
    iteration_bound: usize,
    eps: f64,
}

#[derive(Serialize)]
struct PartitionDoc {
    method: &'static str,
    m: usize,
    dimension: f64,
    clusters: Vec<ClusterDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bisection: Option<BisectionDoc>,
}

fn cluster_docs(chain: &ChainRoadmap, p: &Partition) -> Vec<ClusterDoc> {
    p.clusters()
        .iter()
        .enumerate()
        .map(|(i, c)| ClusterDoc {
            robot: i,
            viewpoints: c.vertices.clone().map(|v| chain.graph().id(v).to_string()).collect(),
            l: c.l,
            r: c.r,
            length: c.length(),
        })
        .collect()
}

fn partition(run: &mut Run, a: &PartitionArgs) -> CliResult<()> {
    let chain = load_chain(run, &a.input)?;
    let (p, bisection) = if a.exact {
        (optimal_partition_exact(&chain, a.m)?, None)
    } else {
        let (p, r) = optimal_partition_bisect(&chain, a.m, a.eps)?;
        let doc = BisectionDoc {
            a: r.a,
            b: r.b,
            iterations: r.iterations,
            iteration_bound: r.iteration_bound,
            eps: r.eps,
        };
        (p, Some(doc))
    };
    run.note(format!("dimension {}", p.dimension()));
    let doc = PartitionDoc {
        method: if a.exact { "exact" } else { "bisect" },
        m: a.m,
        dimension: p.dimension(),
        clusters: cluster_docs(&chain, &p),
        bisection,
    };
    run.emit_json(&a.out, &doc);
    Ok(())
}

// ---------------------------------------------------------------------------
// synth

fn synth(run: &mut Run, a: &SynthArgs) -> CliResult<()> {
    let chain = load_chain(run, &a.input)?;
    let (p, _) = optimal_partition_bisect(&chain, a.m, a.eps)?;
    let horizon = a.horizon.unwrap_or(20.0 * p.dimension().max(1.0));
    let x = match a.mode {
        SynthMode::Rt => traj_min_refresh(&p, horizon)?,
        SynthMode::Up => traj_min_uplatency(&p, horizon)?,
        SynthMode::Lat => traj_min_latency(&p, horizon)?,
    };
    run.note(format!("{} robots, period {:?}, horizon {horizon}", x.m(), x.period));
    run.emit_json(&a.out, &x.to_doc());
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate

fn parse_failure(s: &str) -> CliResult<FailureSpec> {
    let bad = || Failure::Invalid(format!("--fail {s}: expected ROBOT:START[:END] with ROBOT >= 1"));
    let parts: Vec<&str> = s.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let robot: usize = parts[0].parse().map_err(|_| bad())?;
    if robot == 0 {
        return Err(bad());
    }
    let start: f64 = parts[1].parse().map_err(|_| bad())?;
    let end = match parts.get(2) {
        Some(e) => Some(e.parse::<f64>().map_err(|_| bad())?),
        None => None,
    };
    Ok(FailureSpec {
        robot: robot - 1,
        start,
        end,
    })
}

#[derive(Serialize)]
struct EventDoc {
    time: f64,
    robot: usize,
    event: String,
}

#[derive(Serialize)]
struct PartitionChange {
    time: f64,
    dimension: f64,
    lengths: Vec<f64>,
}

#[derive(Serialize)]
struct SimSummary {
    seed: u64,
    period: f64,
    convergence_time: Option<f64>,
    /// Metrics over `[convergence_time, horizon]`.
    refresh_time: Option<f64>,
    latency: Option<Latency>,
    bounds: Option<LatencyBounds>,
    partitions: Vec<PartitionChange>,
    events: Vec<EventDoc>,
}

fn simulate_cmd(run: &mut Run, a: &SimulateArgs) -> CliResult<()> {
    let (chain, m) = chain_and_m(run, &a.input, a.m)?;
    let (p, _) = optimal_partition_bisect(&chain, m, a.eps)?;
    let cfg = SimConfig {
        sigma2: a.sigma2,
        failures: a.fail.iter().map(|s| parse_failure(s)).collect::<CliResult<_>>()?,
        theta: a.theta,
        ..SimConfig::new(a.dt, a.horizon, a.seed)
    };
    run.seed = Some(a.seed);
    let trace = simulate(&chain, &p, &cfg)?;
    let (rt, lt) = match trace.convergence_time {
        Some(t) => {
            let (rt, lt) = trace.window_metrics(&chain, t, a.horizon)?;
            (Some(rt), lt)
        }
        None => (None, None),
    };
    run.note(match trace.convergence_time {
        Some(t) => format!("converged at {t}, refresh time {}", rt.unwrap_or(f64::NAN)),
        None => "no convergence within the horizon".to_string(),
    });
    run.emit(&a.out, trace.to_csv().into_bytes());
    if let Some(path) = &a.trajectory {
        run.emit_json(path, &trace.trajectory.to_doc());
    }
    if let Some(path) = &a.summary {
        let summary = SimSummary {
            seed: a.seed,
            period: trace.period,
            convergence_time: trace.convergence_time,
            refresh_time: rt,
            latency: lt,
            bounds: latency_lower_bounds(trace.partition()).ok(),
            partitions: trace
                .partitions
                .iter()
                .map(|(t, p)| PartitionChange {
                    time: *t,
                    dimension: p.dimension(),
                    lengths: p.lengths(),
                })
                .collect(),
            events: trace
                .events
                .iter()
                .map(|e| EventDoc {
                    time: e.time,
                    robot: e.robot,
                    event: e.label(),
                })
                .collect(),
        };
        run.emit_json(path, &summary);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// eval

#[derive(Serialize)]
struct EvalDoc {
    robots: usize,
    refresh_time: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    refresh_time_sampled: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    latency: Option<Latency>,
    /// Bounds for an optimal partition with as many robots as the trajectory.
    #[serde(skip_serializing_if = "Option::is_none")]
    bounds: Option<LatencyBounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dimension: Option<f64>,
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn eval(run: &mut Run, a: &EvalArgs) -> CliResult<()> {
    let roadmap = load(run, &a.input)?;
    let text = run.read(&a.trace)?;
    let doc = match roadmap {
        LoadedRoadmap::Chain(chain) => {
            let x = TeamTrajectory::from_doc(&parse_json::<TrajectoryDoc>(&a.trace, &text)?)
                .map_err(|e| Failure::Invalid(format!("{}: {e}", a.trace.display())))?;
            eval_chain(&chain, &x, a)?
        }
        other => {
            let g = other.graph();
            let x: GraphTrajectory = parse_json(&a.trace, &text)?;
            x.validate(g)
                .map_err(|e| Failure::Invalid(format!("{}: {e}", a.trace.display())))?;
            EvalDoc {
                robots: x.robots.len(),
                refresh_time: eval_refresh_time_graph(&x, g, a.warmup, a.strict)?,
                refresh_time_sampled: None,
                latency: None,
                bounds: None,
                dimension: None,
            }
        }
    };
    run.note(format!("refresh time {}", doc.refresh_time));
    if let Some(l) = &doc.latency {
        run.note(format!("latency up {} down {} overall {}", l.up, l.down, l.overall));
    }
    match &a.out {
        Some(path) => run.emit_json(path, &doc),
        None => run.note(serde_json::to_string_pretty(&doc).expect("serializes")),
    }
    Ok(())
}

fn eval_chain(chain: &ChainRoadmap, x: &TeamTrajectory, a: &EvalArgs) -> CliResult<EvalDoc> {
    let refresh_time = eval_refresh_time(
        x,
        chain,
        RefreshOptions {
            warmup: a.warmup,
            strict: a.strict,
            ..Default::default()
        },
    )?;
    let refresh_time_sampled = match a.dt {
        Some(dt) => Some(eval_refresh_time_sampled(x, chain, dt, a.warmup)?),
        None => None,
    };
    let active = x.robots.iter().filter(|r| !r.parked).count();
    let latency = if active >= 2 {
        let mode = match a.relay {
            Relay::Starts => RelayMode::Starts,
            Relay::Intervals => RelayMode::Intervals,
        };
        Some(eval_latency(
            x,
            chain,
            LatencyOptions {
                warmup: a.warmup,
                mode,
                ..Default::default()
            },
        )?)
    } else {
        None
    };
    let optimal = if x.m() < chain.n() {
        optimal_partition_exact(chain, x.m()).ok()
    } else {
        None
    };
    Ok(EvalDoc {
        robots: x.m(),
        refresh_time,
        refresh_time_sampled,
        latency,
        bounds: optimal.as_ref().and_then(|p| latency_lower_bounds(p).ok()),
        dimension: optimal.map(|p| p.dimension()),
    })
}

// ---------------------------------------------------------------------------
// sweep

/// Variances 0, 0.02, ..., 0.5.
pub fn default_variances() -> Vec<f64> {
    (0..=25).map(|k| k as f64 / 50.0).collect()
}

fn sweep(run: &mut Run, a: &SweepArgs) -> CliResult<()> {
    let (chain, m) = chain_and_m(run, &a.input, a.m)?;
    let (p, _) = optimal_partition_bisect(&chain, m, a.eps)?;
    let variances = if a.variances.is_empty() {
        default_variances()
    } else {
        a.variances.clone()
    };
    let base = SimConfig::new(a.dt, a.horizon, a.seed);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = a.workers {
        if w == 0 {
            return Err(Failure::Invalid("--workers must be at least 1".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::Invalid(format!("cannot start workers: {e}")))?;
    run.seed = Some(a.seed);
    let rows = pool.install(|| noise_sweep(&chain, &p, &variances, a.runs, a.seed, &base, a.warmup))?;
    let mut csv = String::from(SweepRow::CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv());
        csv.push('\n');
    }
    run.note(format!("{} variances x {} runs", rows.len(), a.runs));
    run.emit(&a.out, csv.into_bytes());
    Ok(())
}

// ---------------------------------------------------------------------------
// tree

#[derive(Serialize)]
struct SubtreeDoc {
    viewpoints: Vec<String>,
    robots: usize,
    dft: f64,
    tour: Vec<String>,
}

#[derive(Serialize)]
struct TreeDoc {
    strategy: TreeStrategy,
    m: usize,
    objective: f64,
    refresh_time: f64,
    removed: Vec<[String; 2]>,
    subtrees: Vec<SubtreeDoc>,
    trajectory: GraphTrajectory,
}

fn tree(run: &mut Run, a: &TreeArgs) -> CliResult<()> {
    let t: TreeRoadmap = match load(run, &a.input)? {
        LoadedRoadmap::Tree(t) => t,
        LoadedRoadmap::Chain(c) => TreeRoadmap::new(c.graph().clone())?,
        LoadedRoadmap::General(g) => TreeRoadmap::new(g)?,
    };
    let coll = match a.strategy {
        TreeStrategy::Optimal => optimal_subtree_collection(&t, a.m, TreeLimits::default())?,
        TreeStrategy::Partition => best_partition_strategy(&t, a.m, TreeLimits::default())?,
        TreeStrategy::Cyclic => cyclic_strategy(&t, a.m)?,
    };
    let g = t.graph();
    let x = efficient_trajectory(&t, &coll, a.horizon)?;
    let refresh_time = eval_refresh_time_graph(&x, g, 0.0, false)?;
    let ids = |vs: &[usize]| vs.iter().map(|&v| g.id(v).to_string()).collect::<Vec<_>>();
    let tours = coll.tours(&t);
    let doc = TreeDoc {
        strategy: a.strategy,
        m: a.m,
        objective: coll.objective,
        refresh_time,
        removed: coll
            .removed
            .iter()
            .map(|&e| [g.id(g.edges()[e].u).to_string(), g.id(g.edges()[e].v).to_string()])
            .collect(),
        subtrees: coll
            .subtrees
            .iter()
            .zip(&tours)
            .map(|(s, tour)| SubtreeDoc {
                viewpoints: ids(&s.vertices),
                robots: s.robots,
                dft: s.dft,
                tour: ids(&tour.walk),
            })
            .collect(),
        trajectory: x,
    };
    run.note(format!("objective {}, refresh time {refresh_time}", coll.objective));
    run.emit_json(&a.out, &doc);
    Ok(())
}

// ---------------------------------------------------------------------------
// cover

#[derive(Serialize)]
struct PathDoc {
    viewpoints: Vec<String>,
    cost: f64,
}

#[derive(Serialize)]
struct CoverCertificate {
    cover_cost: f64,
    /// Refresh time of the sweep schedule, at most twice the cover cost.
    refresh_time: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    factor: Option<f64>,
}

#[derive(Serialize)]
struct CoverDoc {
    m: usize,
    paths: Vec<PathDoc>,
    cost: f64,
    certificate: CoverCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Vec<PathDoc>>,
}

fn path_docs(g: &Roadmap, c: &PathCover) -> Vec<PathDoc> {
    c.paths
        .iter()
        .zip(&c.costs)
        .map(|(p, &cost)| PathDoc {
            viewpoints: p.iter().map(|&v| g.id(v).to_string()).collect(),
            cost,
        })
        .collect()
}

fn cover(run: &mut Run, a: &CoverArgs) -> CliResult<()> {
    let roadmap = load(run, &a.input)?;
    let g = roadmap.graph();
    let mut c = minmax_path_cover(g, a.m)?;
    if a.improve {
        c = improve_two_opt(g, &c);
    }
    let x = path_cover_trajectory(g, &c, a.m, a.horizon)?;
    let refresh_time = eval_refresh_time_graph(&x, g, 0.0, false)?;
    let oracle = if a.oracle { Some(exact_cover_oracle(g, a.m)?) } else { None };
    let doc = CoverDoc {
        m: a.m,
        paths: path_docs(g, &c),
        cost: c.cost,
        certificate: CoverCertificate {
            cover_cost: c.cost,
            refresh_time,
            oracle_cost: oracle.as_ref().map(|o| o.cost),
            factor: oracle.as_ref().filter(|o| o.cost > 0.0).map(|o| c.cost / o.cost),
        },
        oracle: oracle.as_ref().map(|o| path_docs(g, o)),
    };
    run.note(format!("{} paths, cover cost {}, refresh time {refresh_time}", c.k(), c.cost));
    run.emit_json(&a.out, &doc);
    if let Some(path) = &a.trajectory {
        run.emit_json(path, &x);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// chainify

#[derive(Serialize)]
struct ChainifyReport {
    tour: Vec<String>,
    /// Roadmap viewpoint of each chain viewpoint.
    back_map: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<RatioCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trajectory: Option<GraphTrajectory>,
}

fn chainify_cmd(run: &mut Run, a: &ChainifyArgs) -> CliResult<()> {
    let roadmap = load(run, &a.input)?;
    let g = roadmap.graph();
    let ch = chainify(g)?;
    let approx = match a.m {
        Some(m) => Some(chain_approximation(g, m, a.eps, a.horizon)?),
        None => None,
    };
    run.note(format!("chain of {} viewpoints, length {}", ch.chain.n(), ch.chain.length()));
    if let Some(ap) = &approx {
        let c = ap.certificate;
        run.note(format!("ratio {} (bound {})", c.ratio, c.ratio_bound));
    }
    run.emit(&a.out, {
        let mut s = LoadedRoadmap::Chain(ch.chain.clone()).to_json();
        s.push('\n');
        s.into_bytes()
    });
    if let Some(path) = &a.report {
        let names = |vs: &[usize]| vs.iter().map(|&v| g.id(v).to_string()).collect::<Vec<_>>();
        let report = ChainifyReport {
            tour: names(&ch.tour),
            back_map: names(&ch.back_map),
            certificate: approx.as_ref().map(|ap| ap.certificate),
            trajectory: approx.map(|ap| ap.trajectory),
        };
        run.emit_json(path, &report);
    }
    Ok(())
}
