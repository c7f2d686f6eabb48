//! Chainification: patrolling a general roadmap through a chain built from an
//! open spanning-tree tour.

use serde::Serialize;

use crate::chain_traj::traj_min_refresh;
use crate::error::{Error, Result};
use crate::metrics::{eval_refresh_time, RefreshOptions};
use crate::partition::{optimal_partition_bisect, Partition};
use crate::roadmap::{ChainRoadmap, Roadmap};
use crate::trajectory::{GraphPos, GraphTrack, GraphTrajectory, RobotTrack, TeamTrajectory};

#[derive(Debug, Clone)]
pub struct ChainifyResult {
    /// Open tour through every vertex of the roadmap.
    pub tour: Vec<usize>,
    /// Chain with one viewpoint per tour entry; repeated vertices get
    /// suffixed ids (`v#2`, `v#3`, ...).
    pub chain: ChainRoadmap,
    /// Roadmap vertex of each chain viewpoint.
    pub back_map: Vec<usize>,
    /// Roadmap edge behind each chain edge.
    pub tour_edges: Vec<usize>,
}

/// Kruskal's minimum spanning tree; ties resolved by edge index.
pub fn minimum_spanning_tree(g: &Roadmap) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.edges().len()).collect();
    order.sort_by(|&a, &b| g.edges()[a].length.total_cmp(&g.edges()[b].length).then(a.cmp(&b)));
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = Vec::with_capacity(g.n().saturating_sub(1));
    for e in order {
        let (a, b) = (find(&mut parent, g.edges()[e].u), find(&mut parent, g.edges()[e].v));
        if a != b {
            parent[a] = b;
            tree.push(e);
        }
    }
    tree.sort_unstable();
    tree
}

/// Open tour from a leaf of the minimum spanning tree: the depth-first walk
/// (children in index order) stopped at the last newly discovered vertex.
pub fn chainify(g: &Roadmap) -> Result<ChainifyResult> {
    let n = g.n();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "chainification needs at least 3 viewpoints (got {n}); the roadmap is already a chain"
        )));
    }
    let mut in_tree = vec![false; g.edges().len()];
    for e in minimum_spanning_tree(g) {
        in_tree[e] = true;
    }
    let degree = |v: usize| g.neighbors(v).iter().filter(|&&(_, e)| in_tree[e]).count();
    let root = (0..n).find(|&v| degree(v) == 1).expect("a spanning tree has a leaf");

    let mut walk = vec![root];
    let mut walk_edges = Vec::new();
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut discovered = 1;
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    'dfs: while let Some(top) = stack.last_mut() {
        let (v, slot) = *top;
        if let Some(&(w, e)) = g.neighbors(v).get(slot) {
            top.1 += 1;
            if in_tree[e] && !seen[w] {
                seen[w] = true;
                walk.push(w);
                walk_edges.push(e);
                discovered += 1;
                if discovered == n {
                    break 'dfs;
                }
                stack.push((w, 0));
            }
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                walk_edges.push(g.edge_between(v, p).expect("tree edge"));
                walk.push(p);
            }
        }
    }

    let mut coords = vec![0.0];
    for &e in &walk_edges {
        coords.push(coords.last().unwrap() + g.edges()[e].length);
    }
    let mut copies = vec![0usize; n];
    let ids = walk
        .iter()
        .map(|&v| {
            copies[v] += 1;
            match copies[v] {
                1 => g.id(v).to_string(),
                k => format!("{}#{k}", g.id(v)),
            }
        })
        .collect();
    let chain = ChainRoadmap::with_ids(ids, coords)?;
    Ok(ChainifyResult {
        back_map: walk.clone(),
        tour: walk,
        chain,
        tour_edges: walk_edges,
    })
}

impl ChainifyResult {
    /// Roadmap position of chain coordinate `s`.
    pub fn position(&self, g: &Roadmap, s: f64) -> GraphPos {
        let coords = self.chain.coords();
        let k = coords.partition_point(|&c| c <= s).clamp(1, coords.len() - 1) - 1;
        GraphPos::along(g, self.tour_edges[k], self.back_map[k], s - coords[k])
    }

    /// Maps a chain track onto the roadmap, adding a breakpoint wherever the
    /// robot crosses a chain viewpoint so each segment stays on one edge.
    pub fn map_track(&self, g: &Roadmap, track: &RobotTrack) -> GraphTrack {
        let coords = self.chain.coords();
        let mut points = Vec::with_capacity(track.points.len());
        for (k, &(t, x)) in track.points.iter().enumerate() {
            if k > 0 {
                let (t0, x0) = track.points[k - 1];
                if x != x0 {
                    let (lo, hi) = (x0.min(x), x0.max(x));
                    let mut inner: Vec<f64> = coords.iter().copied().filter(|&c| c > lo && c < hi).collect();
                    if x < x0 {
                        inner.reverse();
                    }
                    for c in inner {
                        let tc = t0 + (c - x0) / (x - x0) * (t - t0);
                        points.push((tc, self.position(g, c)));
                    }
                }
            }
            points.push((t, self.position(g, x)));
        }
        GraphTrack { points }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCertificate {
    /// Refresh time of the chain schedule, measured on the chain.
    pub rt_gamma: f64,
    /// `ceil(n/m - 1)` times the shortest edge.
    pub rt_lb: f64,
    /// Longest over shortest edge length.
    pub gamma: f64,
    pub ratio: f64,
    /// `((n - 2) / n) 8 gamma`.
    pub ratio_bound: f64,
}

#[derive(Debug, Clone)]
pub struct ChainApproximation {
    pub chainify: ChainifyResult,
    pub partition: Partition,
    pub chain_trajectory: TeamTrajectory,
    pub trajectory: GraphTrajectory,
    pub certificate: RatioCertificate,
}

/// Optimal partition and sweep schedule on the chainified roadmap, mapped
/// back onto the roadmap.
pub fn chain_approximation(g: &Roadmap, m: usize, eps: f64, horizon: f64) -> Result<ChainApproximation> {
    let n = g.n();
    if m == 0 || m >= n {
        return Err(Error::Infeasible(format!("need 1 <= m < n (got m = {m}, n = {n})")));
    }
    let ch = chainify(g)?;
    let (partition, _) = optimal_partition_bisect(&ch.chain, m, eps)?;
    let x = traj_min_refresh(&partition, horizon)?;
    let rt_gamma = eval_refresh_time(&x, &ch.chain, RefreshOptions::default())?;
    let gamma = g.edge_length_ratio()?;
    let rt_lb = ((n as f64 / m as f64) - 1.0).ceil() * g.min_edge_length();
    let trajectory = GraphTrajectory {
        robots: x.robots.iter().map(|r| ch.map_track(g, r)).collect(),
        horizon,
        period: x.period,
    };
    Ok(ChainApproximation {
        certificate: RatioCertificate {
            rt_gamma,
            rt_lb,
            gamma,
            ratio: rt_gamma / rt_lb,
            ratio_bound: (n as f64 - 2.0) / n as f64 * 8.0 * gamma,
        },
        chainify: ch,
        partition,
        chain_trajectory: x,
        trajectory,
    })
}
