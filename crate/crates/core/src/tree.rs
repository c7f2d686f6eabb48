//! Refresh-time patrolling on trees.
//!
//! A subtree collection splits the tree into vertex-disjoint subtrees by
//! dropping edges and assigns robots to each. Robots on a subtree circle its
//! depth-first tour in the same direction, equally spaced.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roadmap::{Roadmap, TreeRoadmap};
use crate::trajectory::{tour_track, GraphTrajectory};

/// Closed depth-first walk and its length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tour {
    pub walk: Vec<usize>,
    pub length: f64,
}

/// Depth-first walk from `root` over edges with `kept[e]`, children in
/// index order.
fn dft_walk(g: &Roadmap, kept: &[bool], root: usize) -> Tour {
    let mut walk = vec![root];
    let mut length = 0.0;
    // Stack of (vertex, parent, next neighbour slot).
    let mut stack = vec![(root, usize::MAX, 0usize)];
    while let Some(top) = stack.last_mut() {
        let (v, parent, slot) = *top;
        let nbrs = g.neighbors(v);
        if let Some(&(w, e)) = nbrs.get(slot) {
            top.2 += 1;
            if w != parent && kept[e] {
                length += 2.0 * g.edges()[e].length;
                walk.push(w);
                stack.push((w, v, 0));
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                walk.push(p);
            }
        }
    }
    Tour { walk, length }
}

/// Depth-first tour of the whole tree from its lowest-index vertex.
pub fn dft_tour(t: &TreeRoadmap) -> Tour {
    let g = t.graph();
    dft_walk(g, &vec![true; g.edges().len()], 0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subtree {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub dft: f64,
    pub robots: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubtreeCollection {
    /// Dropped (unused) edges, sorted.
    pub removed: Vec<usize>,
    /// Subtrees ordered by lowest vertex.
    pub subtrees: Vec<Subtree>,
    /// `max_j DFT(T_j) / m_j`.
    pub objective: f64,
}

/// Connected components after dropping `removed`, ordered by lowest vertex.
fn components(g: &Roadmap, kept: &[bool]) -> Vec<(Vec<usize>, Vec<usize>, f64)> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut vertices = vec![s];
        let mut edges = Vec::new();
        let mut weight = 0.0;
        comp[s] = id;
        let mut k = 0;
        while k < vertices.len() {
            let v = vertices[k];
            k += 1;
            for &(w, e) in g.neighbors(v) {
                if kept[e] && comp[w] == usize::MAX {
                    comp[w] = id;
                    vertices.push(w);
                    edges.push(e);
                    weight += g.edges()[e].length;
                }
            }
        }
        vertices.sort_unstable();
        edges.sort_unstable();
        out.push((vertices, edges, 2.0 * weight));
    }
    out
}

impl SubtreeCollection {
    /// Collection obtained by dropping `removed` and assigning `allocation[j]`
    /// robots to the `j`-th component (ordered by lowest vertex).
    pub fn new(t: &TreeRoadmap, removed: &[usize], allocation: &[usize]) -> Result<Self> {
        let g = t.graph();
        let mut kept = vec![true; g.edges().len()];
        for &e in removed {
            if e >= kept.len() {
                return Err(Error::InvalidArgument(format!("edge {e} does not exist")));
            }
            kept[e] = false;
        }
        let comps = components(g, &kept);
        if comps.len() != allocation.len() {
            return Err(Error::InvalidArgument(format!(
                "{} subtrees but {} allocation entries",
                comps.len(),
                allocation.len()
            )));
        }
        if allocation.contains(&0) {
            return Err(Error::InvalidArgument(
                "every subtree needs at least one robot for a finite refresh time".into(),
            ));
        }
        let subtrees: Vec<Subtree> = comps
            .into_iter()
            .zip(allocation)
            .map(|((vertices, edges, dft), &robots)| Subtree {
                vertices,
                edges,
                dft,
                robots,
            })
            .collect();
        let objective = subtrees.iter().map(|s| s.dft / s.robots as f64).fold(0.0, f64::max);
        let mut removed = removed.to_vec();
        removed.sort_unstable();
        removed.dedup();
        Ok(SubtreeCollection {
            removed,
            subtrees,
            objective,
        })
    }

    pub fn robots(&self) -> usize {
        self.subtrees.iter().map(|s| s.robots).sum()
    }

    pub fn tours(&self, t: &TreeRoadmap) -> Vec<Tour> {
        let g = t.graph();
        let mut kept = vec![true; g.edges().len()];
        for &e in &self.removed {
            kept[e] = false;
        }
        self.subtrees.iter().map(|s| dft_walk(g, &kept, s.vertices[0])).collect()
    }
}

/// Robots equally spaced on each subtree's tour, all moving forward at unit
/// speed. Robot `k` of a subtree starts `k · DFT / m_j` along the tour.
pub fn efficient_trajectory(t: &TreeRoadmap, coll: &SubtreeCollection, horizon: f64) -> Result<GraphTrajectory> {
    if coll.subtrees.iter().any(|s| s.robots == 0) {
        return Err(Error::InvalidArgument("a subtree without robots is never visited".into()));
    }
    let mut robots = Vec::with_capacity(coll.robots());
    for (s, tour) in coll.subtrees.iter().zip(coll.tours(t)) {
        for k in 0..s.robots {
            let start = k as f64 * tour.length / s.robots as f64;
            robots.push(tour_track(t.graph(), &tour.walk, start, horizon));
        }
    }
    Ok(GraphTrajectory {
        robots,
        horizon,
        period: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreeLimits {
    pub max_n: usize,
    pub max_m: usize,
}

impl Default for TreeLimits {
    fn default() -> Self {
        TreeLimits { max_n: 15, max_m: 6 }
    }
}

/// All compositions of `m` into `k` positive parts, in lexicographic order.
fn compositions(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 1..=left - (parts - 1) {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k >= 1 && k <= m {
        rec(m, k, &mut Vec::new(), &mut out);
    }
    out
}

fn check_limits(t: &TreeRoadmap, m: usize, limits: TreeLimits) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one robot".into()));
    }
    if t.n() > limits.max_n || m > limits.max_m {
        return Err(Error::SizeLimit(format!(
            "exhaustive tree search is limited to n <= {} and m <= {} (got n = {}, m = {}); \
             use the chain or cyclic approximations for larger instances",
            limits.max_n,
            limits.max_m,
            t.n(),
            m
        )));
    }
    Ok(())
}

/// Exhaustive search over dropped-edge sets and robot allocations. `each`
/// receives the component count and returns the allocations to try.
fn search(
    t: &TreeRoadmap,
    m: usize,
    limits: TreeLimits,
    each: impl Fn(usize) -> Vec<Vec<usize>>,
) -> Result<SubtreeCollection> {
    check_limits(t, m, limits)?;
    let g = t.graph();
    let ne = g.edges().len();
    let mut best: Option<(SubtreeCollection, Vec<usize>)> = None;
    for mask in 0u32..(1u32 << ne) {
        let removed: Vec<usize> = (0..ne).filter(|&e| mask >> e & 1 == 1).collect();
        let k = removed.len() + 1;
        if k > m {
            continue;
        }
        let mut kept = vec![true; ne];
        for &e in &removed {
            kept[e] = false;
        }
        let dft: Vec<f64> = components(g, &kept).into_iter().map(|c| c.2).collect();
        for alloc in each(k) {
            let obj = dft.iter().zip(&alloc).map(|(d, &r)| d / r as f64).fold(0.0, f64::max);
            let better = match &best {
                None => true,
                Some((b, ba)) => (obj, removed.len(), &removed, &alloc) < (b.objective, b.removed.len(), &b.removed, ba),
            };
            if better {
                best = Some((SubtreeCollection::new(t, &removed, &alloc)?, alloc));
            }
        }
    }
    best.map(|b| b.0)
        .ok_or_else(|| Error::Infeasible(format!("no subtree collection for m = {m}")))
}

/// Minimizes `max_j DFT(T_j) / m_j`. Ties go to fewer dropped edges, then
/// to the lexicographically smaller edge set and allocation.
pub fn optimal_subtree_collection(t: &TreeRoadmap, m: usize, limits: TreeLimits) -> Result<SubtreeCollection> {
    search(t, m, limits, |k| compositions(m, k))
}

/// Best strategy that gives every robot its own subtree.
pub fn best_partition_strategy(t: &TreeRoadmap, m: usize, limits: TreeLimits) -> Result<SubtreeCollection> {
    if m > t.n() {
        return Err(Error::Infeasible(format!("{m} robots cannot own disjoint subtrees of {} vertices", t.n())));
    }
    search(t, m, limits, |k| if k == m { vec![vec![1; m]] } else { Vec::new() })
}

/// All robots equally spaced on one tour of the whole tree.
pub fn cyclic_strategy(t: &TreeRoadmap, m: usize) -> Result<SubtreeCollection> {
    SubtreeCollection::new(t, &[], &[m])
}
