//! Min-max path covers on the shortest-path metric and the sweep schedule
//! built from them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roadmap::Roadmap;
use crate::trajectory::{tour_track, GraphTrajectory};

/// Paths over the metric closure whose vertices jointly cover the roadmap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathCover {
    pub paths: Vec<Vec<usize>>,
    pub costs: Vec<f64>,
    /// Largest path cost.
    pub cost: f64,
}

impl PathCover {
    pub fn new(g: &Roadmap, paths: Vec<Vec<usize>>) -> Self {
        let costs: Vec<f64> = paths.iter().map(|p| path_cost(g, p)).collect();
        let cost = costs.iter().copied().fold(0.0, f64::max);
        PathCover { paths, costs, cost }
    }

    pub fn k(&self) -> usize {
        self.paths.len()
    }

    /// Every vertex appears in some path.
    pub fn covers(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for &v in self.paths.iter().flatten() {
            seen[v] = true;
        }
        seen.into_iter().all(|s| s)
    }
}

pub fn path_cost(g: &Roadmap, p: &[usize]) -> f64 {
    p.windows(2).fold(0.0, |acc, w| acc + g.distance(w[0], w[1]))
}

/// Split constant of the feasibility test.
pub const SPLIT_FACTOR: f64 = 4.0;

/// Shortcut preorder tours of the components left after dropping the
/// closure-MST edges longer than `b`.
fn component_tours(g: &Roadmap, b: f64) -> Vec<Vec<usize>> {
    let n = g.n();
    // Prim on the complete metric closure; ties go to the lower index.
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut children = vec![Vec::new(); n];
    best[0] = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &c| best[a].total_cmp(&best[c]).then(a.cmp(&c)))
            .expect("vertex left");
        in_tree[u] = true;
        if parent[u] != usize::MAX && g.distance(parent[u], u) <= b {
            children[parent[u]].push(u);
        }
        for v in 0..n {
            if !in_tree[v] && g.distance(u, v) < best[v] {
                best[v] = g.distance(u, v);
                parent[v] = u;
            }
        }
    }
    let mut is_child = vec![false; n];
    for c in children.iter_mut() {
        c.sort_unstable();
        for &v in c.iter() {
            is_child[v] = true;
        }
    }
    let mut tours = Vec::new();
    for root in (0..n).filter(|&v| !is_child[v]) {
        let mut tour = Vec::new();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            tour.push(v);
            stack.extend(children[v].iter().rev());
        }
        tours.push(tour);
    }
    tours
}

/// Greedy maximal segments of cost at most `cap`.
fn split_tour(g: &Roadmap, tour: &[usize], cap: f64) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![tour[0]];
    let mut cost = 0.0;
    for &v in &tour[1..] {
        let d = g.distance(*cur.last().unwrap(), v);
        if cost + d <= cap {
            cost += d;
            cur.push(v);
        } else {
            out.push(std::mem::replace(&mut cur, vec![v]));
            cost = 0.0;
        }
    }
    out.push(cur);
    out
}

fn split_all(g: &Roadmap, tours: &[Vec<usize>], cap: f64) -> Vec<Vec<usize>> {
    tours.iter().flat_map(|t| split_tour(g, t, cap)).collect()
}

/// Number of segments the feasibility test produces at budget `b`.
pub fn cover_segments(g: &Roadmap, b: f64) -> usize {
    split_all(g, &component_tours(g, b), SPLIT_FACTOR * b).len()
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Candidate budgets: pairwise distances and their doubles, plus one that
/// keeps the whole closure tree in a single segment.
pub fn cover_candidates(g: &Roadmap) -> Vec<f64> {
    let n = g.n();
    let mut c = vec![0.0];
    let mut far: f64 = 0.0;
    for u in 0..n {
        for v in u + 1..n {
            let d = g.distance(u, v);
            far = far.max(d);
            c.extend([d, 2.0 * d]);
        }
    }
    let whole = &component_tours(g, f64::INFINITY)[0];
    c.push(far.max(path_cost(g, whole) / SPLIT_FACTOR));
    sorted_unique(c)
}

/// Smallest feasible candidate budget, then the
/// tightest split cap on that budget's tours that still fits in `m` paths.
pub fn minmax_path_cover(g: &Roadmap, m: usize) -> Result<PathCover> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one robot".into()));
    }
    let n = g.n();
    if m >= n {
        return Ok(PathCover::new(g, (0..n).map(|v| vec![v]).collect()));
    }
    // Feasibility is not monotone in the budget, so scan upwards.
    let b = cover_candidates(g)
        .into_iter()
        .find(|&b| cover_segments(g, b) <= m)
        .expect("largest candidate is feasible");
    let tours = component_tours(g, b);

    let mut caps = Vec::new();
    for t in &tours {
        for i in 0..t.len() {
            let mut c = 0.0;
            for j in i + 1..t.len() {
                c += g.distance(t[j - 1], t[j]);
                if c <= SPLIT_FACTOR * b {
                    caps.push(c);
                }
            }
        }
    }
    caps.push(0.0);
    caps.push(SPLIT_FACTOR * b);
    let caps = sorted_unique(caps);
    let k = caps.partition_point(|&c| split_all(g, &tours, c).len() > m);
    Ok(PathCover::new(g, split_all(g, &tours, caps[k])))
}

/// Sizes the brute-force oracle accepts.
pub const ORACLE_MAX_N: usize = 8;
pub const ORACLE_MAX_M: usize = 3;

/// Optimal min-max cover by dynamic programming over vertex subsets.
pub fn exact_cover_oracle(g: &Roadmap, m: usize) -> Result<PathCover> {
    let n = g.n();
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one robot".into()));
    }
    if n > ORACLE_MAX_N || m > ORACLE_MAX_M {
        return Err(Error::SizeLimit(format!(
            "cover oracle handles n <= {ORACLE_MAX_N} and m <= {ORACLE_MAX_M} (got n = {n}, m = {m})"
        )));
    }
    if n <= m {
        return Ok(PathCover::new(g, (0..n).map(|v| vec![v]).collect()));
    }
    let full = (1usize << n) - 1;
    // dp[s][v]: cheapest path visiting exactly s and ending at v.
    let mut dp = vec![vec![f64::INFINITY; n]; full + 1];
    let mut prev = vec![vec![usize::MAX; n]; full + 1];
    for v in 0..n {
        dp[1 << v][v] = 0.0;
    }
    for s in 1..=full {
        for v in 0..n {
            if s >> v & 1 == 0 || !dp[s][v].is_finite() {
                continue;
            }
            for w in 0..n {
                if s >> w & 1 == 1 {
                    continue;
                }
                let c = dp[s][v] + g.distance(v, w);
                let t = s | 1 << w;
                if c < dp[t][w] {
                    dp[t][w] = c;
                    prev[t][w] = v;
                }
            }
        }
    }
    let path_of = |s: usize| -> Vec<usize> {
        let mut v = (0..n)
            .filter(|&v| s >> v & 1 == 1)
            .min_by(|&a, &b| dp[s][a].total_cmp(&dp[s][b]))
            .unwrap();
        let mut s = s;
        let mut p = vec![v];
        while s != 1 << v {
            let u = prev[s][v];
            s &= !(1 << v);
            v = u;
            p.push(v);
        }
        p.reverse();
        p
    };
    let single: Vec<f64> = (0..=full)
        .map(|s| (0..n).map(|v| dp[s][v]).fold(f64::INFINITY, f64::min))
        .collect();

    // best[k][s]: min-max cost of covering s with at most k+1 paths.
    let mut best = vec![single.clone()];
    let mut choice = vec![(0..=full).collect::<Vec<usize>>()];
    for k in 1..m {
        let mut b = best[k - 1].clone();
        let mut ch = choice[k - 1].clone();
        for s in 1..=full {
            let low = s & s.wrapping_neg();
            let rest = s & !low;
            // First block holds the lowest vertex; enumerate its other members.
            let mut sub = rest;
            loop {
                let t = sub | low;
                if t != s {
                    let c = single[t].max(best[k - 1][s & !t]);
                    if c < b[s] {
                        b[s] = c;
                        ch[s] = t;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        best.push(b);
        choice.push(ch);
    }
    let mut paths = Vec::new();
    let mut s = full;
    let mut k = m - 1;
    while s != 0 {
        let t = choice[k][s];
        paths.push(path_of(t));
        s &= !t;
        if s != 0 {
            k -= 1;
        }
    }
    Ok(PathCover::new(g, paths))
}

/// Optional 2-opt pass on each path. It never raises a path's cost but
/// carries no approximation claim of its own.
pub fn improve_two_opt(g: &Roadmap, cover: &PathCover) -> PathCover {
    let paths = cover
        .paths
        .iter()
        .map(|p| {
            let mut p = p.clone();
            let mut improved = true;
            while improved {
                improved = false;
                for i in 0..p.len().saturating_sub(1) {
                    for j in i + 1..p.len() {
                        let before = path_cost(g, &p);
                        p[i..=j].reverse();
                        if path_cost(g, &p) < before - 1e-12 {
                            improved = true;
                        } else {
                            p[i..=j].reverse();
                        }
                    }
                }
            }
            p
        })
        .collect();
    PathCover::new(g, paths)
}

/// Robot `i` sweeps path `i` back and forth along shortest routes; robots
/// beyond the cover stay at the first viewpoint of the last path.
pub fn path_cover_trajectory(g: &Roadmap, cover: &PathCover, m: usize, horizon: f64) -> Result<GraphTrajectory> {
    if cover.k() > m {
        return Err(Error::Infeasible(format!("{} paths for {m} robots", cover.k())));
    }
    if cover.k() == 0 {
        return Err(Error::InvalidArgument("empty cover".into()));
    }
    let mut robots: Vec<_> = cover
        .paths
        .iter()
        .map(|p| {
            let mut walk = vec![p[0]];
            for w in p.windows(2) {
                walk.extend_from_slice(&g.shortest_path(w[0], w[1])[1..]);
            }
            let back: Vec<usize> = walk.iter().rev().skip(1).copied().collect();
            if !back.is_empty() {
                walk.extend(back);
            }
            tour_track(g, &walk, 0.0, horizon)
        })
        .collect();
    let park = cover.paths.last().unwrap()[0];
    while robots.len() < m {
        robots.push(tour_track(g, &[park], 0.0, horizon));
    }
    Ok(GraphTrajectory {
        robots,
        horizon,
        period: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::eval_refresh_time_graph;

    fn square() -> Roadmap {
        Roadmap::from_triples(
            &["a", "b", "c", "d"],
            &[("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0), ("d", "a", 1.0)],
        )
        .unwrap()
    }

    fn triangle() -> Roadmap {
        Roadmap::from_triples(&["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0)]).unwrap()
    }

    #[test]
    fn unit_square_two_robots() {
        let g = square();
        let c = minmax_path_cover(&g, 2).unwrap();
        assert_eq!(c.paths, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(c.cost, 1.0);
        assert_eq!(exact_cover_oracle(&g, 2).unwrap().cost, 1.0);
        let x = path_cover_trajectory(&g, &c, 2, 40.0).unwrap();
        x.validate(&g).unwrap();
        assert!((eval_refresh_time_graph(&x, &g, 0.0, false).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn trivial_covers() {
        let g = square();
        let c = minmax_path_cover(&g, 4).unwrap();
        assert_eq!(c.cost, 0.0);
        assert_eq!(exact_cover_oracle(&g, 3).unwrap().cost, 1.0);
        let x = path_cover_trajectory(&g, &c, 5, 10.0).unwrap();
        assert_eq!(eval_refresh_time_graph(&x, &g, 0.0, false).unwrap(), 0.0);

        let path = Roadmap::from_triples(&["a", "b", "c"], &[("a", "b", 2.0), ("b", "c", 3.0)]).unwrap();
        let c = minmax_path_cover(&path, 1).unwrap();
        assert_eq!(c.paths, vec![vec![0, 1, 2]]);
        assert_eq!(c.cost, 5.0);
        let x = path_cover_trajectory(&path, &c, 1, 50.0).unwrap();
        assert!((eval_refresh_time_graph(&x, &path, 0.0, false).unwrap() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn triangle_oracle() {
        let c = exact_cover_oracle(&triangle(), 1).unwrap();
        assert_eq!(c.cost, 2.0);
        assert!(c.covers(3));
        assert!(matches!(exact_cover_oracle(&triangle(), 4), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn too_many_paths_rejected() {
        let g = square();
        let c = minmax_path_cover(&g, 2).unwrap();
        assert!(path_cover_trajectory(&g, &c, 1, 10.0).is_err());
    }

    #[test]
    fn two_opt_never_worse() {
        let g = square();
        let c = PathCover::new(&g, vec![vec![0, 2, 1, 3]]);
        let d = improve_two_opt(&g, &c);
        assert!(d.cost <= c.cost);
        assert_eq!(d.cost, 3.0);
    }

    #[test]
    fn feasibility_not_monotone_in_budget() {
        let g = Roadmap::from_triples(
            &["a", "b", "c", "d", "e", "f", "g"],
            &[
                ("a", "b", 6.0),
                ("b", "c", 10.0),
                ("a", "d", 6.0),
                ("a", "e", 6.0),
                ("c", "f", 9.0),
                ("c", "g", 7.0),
            ],
        )
        .unwrap();
        assert_eq!(cover_segments(&g, 9.0), 2);
        assert_eq!(cover_segments(&g, 10.0), 3);
        let c = minmax_path_cover(&g, 2).unwrap();
        assert!(c.k() <= 2 && c.cost <= 36.0);
    }
}
