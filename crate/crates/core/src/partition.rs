//! Interval partitions of chain roadmaps.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roadmap::ChainRoadmap;

/// One interval cluster. Empty clusters carry `l == r ==` the parking coordinate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub vertices: Range<usize>,
    pub l: f64,
    pub r: f64,
}

impl Cluster {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.r - self.l
    }
}

/// Ordered interval clusters covering every viewpoint of a chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    clusters: Vec<Cluster>,
}

impl Partition {
    /// Builds a partition from consecutive index ranges, padding with empty
    /// clusters up to `slots` entries.
    pub fn from_ranges(chain: &ChainRoadmap, ranges: &[Range<usize>], slots: usize) -> Result<Self> {
        let mut expected = 0;
        let mut clusters = Vec::with_capacity(slots.max(ranges.len()));
        for range in ranges {
            if range.is_empty() {
                return Err(Error::InvalidArgument("empty range in cluster list".into()));
            }
            if range.start != expected {
                return Err(Error::InvalidArgument(format!(
                    "cluster starting at {} does not follow viewpoint {}",
                    range.start, expected
                )));
            }
            expected = range.end;
            clusters.push(Cluster {
                vertices: range.clone(),
                l: chain.coord(range.start),
                r: chain.coord(range.end - 1),
            });
        }
        if expected != chain.n() {
            return Err(Error::InvalidArgument("clusters do not cover the chain".into()));
        }
        if slots < clusters.len() {
            return Err(Error::InvalidArgument(format!(
                "{} clusters do not fit in {slots} slots",
                clusters.len()
            )));
        }
        let park = chain.length();
        while clusters.len() < slots {
            clusters.push(Cluster {
                vertices: chain.n()..chain.n(),
                l: park,
                r: park,
            });
        }
        Ok(Partition { clusters })
    }

    /// Number of slots (robots), including empty clusters.
    pub fn m(&self) -> usize {
        self.clusters.len()
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn cluster(&self, i: usize) -> &Cluster {
        &self.clusters[i]
    }

    /// Number of nonempty clusters.
    pub fn cardinality(&self) -> usize {
        self.clusters.iter().filter(|c| !c.is_empty()).count()
    }

    /// Cluster lengths `d_i`; empty clusters report 0.
    pub fn lengths(&self) -> Vec<f64> {
        self.clusters.iter().map(Cluster::length).collect()
    }

    pub fn dimension(&self) -> f64 {
        self.clusters.iter().map(Cluster::length).fold(0.0, f64::max)
    }

    /// Indices of nonempty clusters in chain order.
    pub fn active(&self) -> Vec<usize> {
        (0..self.m()).filter(|&i| !self.clusters[i].is_empty()).collect()
    }

    /// Cluster slot holding viewpoint `v`.
    pub fn owner(&self, v: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.vertices.contains(&v))
    }
}

/// Left-induced partition of length `rho`, computed by a single linear scan.
pub fn left_induced_partition(chain: &ChainRoadmap, rho: f64) -> Result<Partition> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("rho must be a finite value >= 0, got {rho}")));
    }
    let ranges = left_induced_ranges(chain.coords(), rho);
    let k = ranges.len();
    Partition::from_ranges(chain, &ranges, k)
}

/// Cluster count of the left-induced partition without allocating clusters.
pub fn left_induced_cardinality(coords: &[f64], rho: f64) -> usize {
    let mut count = 0;
    let mut start = 0;
    while start < coords.len() {
        let a = coords[start];
        count += 1;
        start += 1;
        while start < coords.len() && coords[start] - a <= rho {
            start += 1;
        }
    }
    count
}

fn left_induced_ranges(coords: &[f64], rho: f64) -> Vec<Range<usize>> {
    let mut ranges = Vec::new();
    let mut start = 0;
    while start < coords.len() {
        let a = coords[start];
        let mut end = start + 1;
        // Differences, not a + rho, so that rho taken as a coordinate gap
        // reproduces the same membership bit for bit.
        while end < coords.len() && coords[end] - a <= rho {
            end += 1;
        }
        ranges.push(start..end);
        start = end;
    }
    ranges
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BisectionReport {
    pub a: f64,
    pub b: f64,
    pub iterations: usize,
    pub eps: f64,
    /// `ceil(log2(2 v_n / (eps m)))`.
    pub iteration_bound: usize,
    pub partition: Partition,
}

fn check_m(chain: &ChainRoadmap, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("at least one robot is required".into()));
    }
    if m >= chain.n() {
        return Err(Error::Infeasible(format!(
            "m = {m} robots for n = {} viewpoints: place one robot per viewpoint instead",
            chain.n()
        )));
    }
    Ok(())
}

/// Bisection search for the shortest left-induced partition with at most `m`
/// clusters, padded with empty clusters to `m` slots.
pub fn optimal_partition_bisect(chain: &ChainRoadmap, m: usize, eps: f64) -> Result<(Partition, BisectionReport)> {
    check_m(chain, m)?;
    let vn = chain.length();
    let mf = m as f64;
    if !(eps > 0.0 && eps < vn / mf) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must lie in (0, v_n/m) = (0, {}), got {eps}",
            vn / mf
        )));
    }
    let coords = chain.coords();
    let mut a = 0.0;
    let mut b = 2.0 * vn / mf;
    assert!(
        left_induced_cardinality(coords, b) <= m,
        "the initial upper bound admits at most m clusters"
    );
    let mut best = b;
    let mut iterations = 0;
    // Stops once the bracket is within eps, which keeps the returned
    // dimension within eps of the optimum and the iteration count within the
    // logarithmic bound.
    while b - a > eps {
        let rho = 0.5 * (a + b);
        if left_induced_cardinality(coords, rho) > m {
            a = rho;
        } else {
            best = rho;
            b = rho;
        }
        iterations += 1;
    }
    let ranges = left_induced_ranges(coords, best);
    let partition = Partition::from_ranges(chain, &ranges, m)?;
    let iteration_bound = (2.0 * vn / (eps * mf)).log2().ceil().max(0.0) as usize;
    let report = BisectionReport {
        a,
        b,
        iterations,
        eps,
        iteration_bound,
        partition: partition.clone(),
    };
    Ok((partition, report))
}

/// Exact optimal partition: tries every pairwise coordinate gap (and 0).
pub fn optimal_partition_exact(chain: &ChainRoadmap, m: usize) -> Result<Partition> {
    check_m(chain, m)?;
    let coords = chain.coords();
    let n = coords.len();
    let mut candidates = Vec::with_capacity(n * (n - 1) / 2 + 1);
    candidates.push(0.0);
    for i in 0..n {
        for j in i + 1..n {
            candidates.push(coords[j] - coords[i]);
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // Cardinality is monotone in rho, so the smallest feasible candidate can
    // be found by binary search over the sorted list.
    let idx = candidates.partition_point(|&rho| left_induced_cardinality(coords, rho) > m);
    let rho = candidates[idx];
    let ranges = left_induced_ranges(coords, rho);
    Partition::from_ranges(chain, &ranges, m)
}

/// Builds a chain whose clusters have the given lengths, separated by `gap`.
/// Each cluster is represented by its two extreme viewpoints (one when its
/// length is zero). Useful for exercising trajectory synthesis directly.
pub fn chain_with_cluster_lengths(lengths: &[f64], gap: f64) -> Result<(ChainRoadmap, Partition)> {
    if lengths.is_empty() {
        return Err(Error::InvalidArgument("no clusters".into()));
    }
    if !(gap > 0.0) {
        return Err(Error::InvalidArgument("gap must be positive".into()));
    }
    let mut coords = Vec::new();
    let mut ranges = Vec::new();
    let mut x = 0.0;
    for (k, &d) in lengths.iter().enumerate() {
        if !(d >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative cluster length {d}")));
        }
        if k > 0 {
            x += gap;
        }
        let start = coords.len();
        coords.push(x);
        if d > 0.0 {
            x += d;
            coords.push(x);
        }
        ranges.push(start..coords.len());
    }
    let chain = ChainRoadmap::from_coordinates(coords)?;
    let partition = Partition::from_ranges(&chain, &ranges, lengths.len())?;
    Ok((chain, partition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chain(c: &[f64]) -> ChainRoadmap {
        ChainRoadmap::from_coordinates(c.to_vec()).unwrap()
    }

    fn coords_of(p: &Partition, ch: &ChainRoadmap) -> Vec<Vec<f64>> {
        p.clusters()
            .iter()
            .filter(|c| !c.is_empty())
            .map(|c| c.vertices.clone().map(|v| ch.coord(v)).collect())
            .collect()
    }

    /// Minimum dimension over all interval partitions with at most m parts.
    fn dp_oracle(c: &[f64], m: usize) -> f64 {
        let n = c.len();
        // best[k][j]: min max-span covering the first j points with k parts.
        let mut best = vec![vec![f64::INFINITY; n + 1]; m + 1];
        best[0][0] = 0.0;
        for k in 1..=m {
            for j in 1..=n {
                for i in 0..j {
                    let span = c[j - 1] - c[i];
                    let v = best[k - 1][i].max(span);
                    if v < best[k][j] {
                        best[k][j] = v;
                    }
                }
            }
        }
        (1..=m).map(|k| best[k][n]).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn left_induced_examples() {
        let ch = chain(&[0.0, 1.0, 3.0, 6.0]);
        let p = left_induced_partition(&ch, 2.0).unwrap();
        assert_eq!(coords_of(&p, &ch), vec![vec![0.0, 1.0], vec![3.0], vec![6.0]]);
        assert_eq!(p.cardinality(), 3);
        assert_eq!(left_induced_partition(&ch, 0.0).unwrap().cardinality(), 4);
        let whole = left_induced_partition(&ch, 6.0).unwrap();
        assert_eq!(coords_of(&whole, &ch), vec![vec![0.0, 1.0, 3.0, 6.0]]);
        assert!(left_induced_partition(&ch, -1.0).is_err());
    }

    #[test]
    fn bisect_examples() {
        let ch = chain(&[0.0, 1.0, 3.0, 6.0]);
        let (p, rep) = optimal_partition_bisect(&ch, 2, 1e-9).unwrap();
        assert_eq!(coords_of(&p, &ch), vec![vec![0.0, 1.0, 3.0], vec![6.0]]);
        assert!((p.dimension() - 3.0).abs() <= 1e-9);
        assert!(rep.b - rep.a <= 2.0 * rep.eps);
        assert!(rep.iterations <= rep.iteration_bound);

        let (p3, _) = optimal_partition_bisect(&ch, 3, 1e-9).unwrap();
        assert!((p3.dimension() - 1.0).abs() <= 1e-9);
        assert_eq!(coords_of(&p3, &ch), vec![vec![0.0, 1.0], vec![3.0], vec![6.0]]);

        let uniform = chain(&(0..10).map(f64::from).collect::<Vec<_>>());
        let (p5, _) = optimal_partition_bisect(&uniform, 5, 1e-9).unwrap();
        assert!((p5.dimension() - 1.0).abs() <= 1e-9);
        assert_eq!(p5.m(), 5);
    }

    #[test]
    fn exact_examples() {
        let ch = chain(&[0.0, 1.0, 3.0, 6.0]);
        assert_eq!(optimal_partition_exact(&ch, 2).unwrap().dimension(), 3.0);
        assert_eq!(optimal_partition_exact(&ch, 1).unwrap().dimension(), 6.0);
        let ch2 = chain(&[0.0, 2.0, 2.5, 3.0, 10.0]);
        let p = optimal_partition_exact(&ch2, 2).unwrap();
        assert_eq!(p.dimension(), 3.0);
        assert_eq!(coords_of(&p, &ch2), vec![vec![0.0, 2.0, 2.5, 3.0], vec![10.0]]);
    }

    #[test]
    fn rejects_bad_arguments() {
        let ch = chain(&[0.0, 1.0, 3.0, 6.0]);
        assert!(matches!(optimal_partition_exact(&ch, 4), Err(Error::Infeasible(_))));
        assert!(matches!(optimal_partition_bisect(&ch, 5, 1e-3), Err(Error::Infeasible(_))));
        assert!(optimal_partition_bisect(&ch, 2, 0.0).is_err());
        assert!(optimal_partition_bisect(&ch, 2, 3.0).is_err());
        assert!(optimal_partition_bisect(&ch, 0, 1e-3).is_err());
    }

    #[test]
    fn padding_parks_at_chain_end() {
        // Cardinality jumps from 5 straight to 3 on a uniform chain.
        let ch = chain(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let p = optimal_partition_exact(&ch, 4).unwrap();
        assert_eq!(p.m(), 4);
        assert_eq!(p.cardinality(), 3);
        let last = p.cluster(3);
        assert!(last.is_empty());
        assert_eq!((last.l, last.r), (4.0, 4.0));
    }

    #[test]
    fn removing_longest_edges_is_not_optimal() {
        let mut c = vec![0.0];
        for e in [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.5, 1.5, 1.5] {
            c.push(c.last().unwrap() + e);
        }
        let ch = chain(&c);
        // Cutting the three longest edges leaves the first six unit edges together.
        let naive = 6.0;
        let exact = optimal_partition_exact(&ch, 4).unwrap().dimension();
        assert_eq!(exact, dp_oracle(&c, 4));
        assert!(naive > exact, "naive {naive} vs exact {exact}");
    }

    #[test]
    fn synthetic_chain_matches_lengths() {
        let (ch, p) = chain_with_cluster_lengths(&[1.0, 0.0, 3.0], 0.5).unwrap();
        assert_eq!(ch.coords(), &[0.0, 1.0, 1.5, 2.0, 5.0]);
        assert_eq!(p.lengths(), vec![1.0, 0.0, 3.0]);
    }

    fn arb_chain(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.1f64..10.0, 1..max_n).prop_map(|edges| {
            let mut c = vec![0.0];
            for e in edges {
                c.push(c.last().unwrap() + e);
            }
            c
        })
    }

    proptest! {
        #[test]
        fn cardinality_is_monotone(c in arb_chain(40), r1 in 0.0f64..50.0, r2 in 0.0f64..50.0) {
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            prop_assert!(left_induced_cardinality(&c, lo) >= left_induced_cardinality(&c, hi));
        }

        #[test]
        fn left_induced_dimension_at_most_rho(c in arb_chain(40), rho in 0.0f64..50.0) {
            let p = left_induced_partition(&chain(&c), rho).unwrap();
            prop_assert!(p.dimension() <= rho);
        }

        #[test]
        fn exact_matches_dp(c in arb_chain(15), mseed in 0usize..100) {
            prop_assume!(c.len() >= 2);
            let m = 1 + mseed % (c.len() - 1);
            let p = optimal_partition_exact(&chain(&c), m).unwrap();
            prop_assert_eq!(p.dimension(), dp_oracle(&c, m));
            prop_assert!(p.cardinality() <= m);
            prop_assert_eq!(p.m(), m);
        }

        #[test]
        fn bisect_within_eps(c in arb_chain(60), mseed in 0usize..100) {
            prop_assume!(c.len() >= 2);
            let m = 1 + mseed % (c.len() - 1);
            let ch = chain(&c);
            let eps = 1e-9;
            let (p, rep) = optimal_partition_bisect(&ch, m, eps).unwrap();
            let exact = optimal_partition_exact(&ch, m).unwrap().dimension();
            let gap = p.dimension() - exact;
            prop_assert!((0.0..=eps).contains(&gap), "gap {}", gap);
            prop_assert!(rep.iterations <= rep.iteration_bound);
        }
    }
}
