//! Roadmap data model: general metric graphs, chains and trees of viewpoints.
//!
//! Viewpoint ids are strings in files and dense indices everywhere else. Edge
//! lengths double as travel times (unit maximum speed), so one length unit is
//! one time unit throughout the crate.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when comparing an edge length against a detour.
const TRIANGLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

impl Edge {
    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// All-pairs shortest paths with next-hop table for path reconstruction.
#[derive(Debug, Clone)]
struct Closure {
    dist: Vec<Vec<f64>>,
    next: Vec<Vec<Option<usize>>>,
}

/// Undirected, connected, weighted metric graph of viewpoints.
#[derive(Debug, Clone)]
pub struct Roadmap {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    xy: Vec<Option<[f64; 2]>>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
    closure: OnceLock<Closure>,
}

impl PartialEq for Roadmap {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.xy == other.xy && self.edges == other.edges
    }
}

impl Roadmap {
    /// Builds a roadmap and checks structure (no self-loops, no duplicate edges,
    /// positive lengths, connectivity). The triangle inequality is checked
    /// separately by [`Roadmap::triangle_violations`].
    pub fn new(ids: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let n = ids.len();
        Self::with_coordinates(ids, vec![None; n], edges)
    }

    pub fn with_coordinates(
        ids: Vec<String>,
        xy: Vec<Option<[f64; 2]>>,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::InvalidRoadmap("no vertices".into()));
        }
        if xy.len() != ids.len() {
            return Err(Error::InvalidRoadmap("coordinate list length mismatch".into()));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidRoadmap(format!("duplicate vertex id `{id}`")));
            }
        }
        let n = ids.len();
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashMap::new();
        for (k, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidRoadmap(format!("edge {k} references a missing vertex")));
            }
            if e.u == e.v {
                return Err(Error::InvalidRoadmap(format!("self-loop at `{}`", ids[e.u])));
            }
            if !(e.length > 0.0) || !e.length.is_finite() {
                return Err(Error::NonPositiveLength {
                    u: ids[e.u].clone(),
                    v: ids[e.v].clone(),
                    length: e.length,
                });
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            if seen.insert(key, k).is_some() {
                return Err(Error::InvalidRoadmap(format!(
                    "duplicate edge {}-{}",
                    ids[e.u], ids[e.v]
                )));
            }
            adj[e.u].push((e.v, k));
            adj[e.v].push((e.u, k));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let rm = Roadmap {
            ids,
            index,
            xy,
            edges,
            adj,
            closure: OnceLock::new(),
        };
        let components = rm.component_count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(rm)
    }

    /// Convenience constructor from `(u, v, length)` triples over ids.
    pub fn from_triples(ids: &[&str], triples: &[(&str, &str, f64)]) -> Result<Self> {
        let ids: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        let pos: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut edges = Vec::with_capacity(triples.len());
        for &(u, v, length) in triples {
            let u = *pos.get(u).ok_or_else(|| Error::UnknownVertex(u.to_string()))?;
            let v = *pos.get(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
            edges.push(Edge { u, v, length });
        }
        let n = ids.len();
        Self::with_coordinates(ids, vec![None; n], edges)
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn xy(&self) -> &[Option<[f64; 2]>] {
        &self.xy
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` as `(neighbor, edge id)`, sorted by neighbor index.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].iter().find(|&&(w, _)| w == v).map(|&(_, k)| k)
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n()
    }

    fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &(w, _) in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    fn closure(&self) -> &Closure {
        self.closure.get_or_init(|| {
            let n = self.n();
            let mut dist = vec![vec![f64::INFINITY; n]; n];
            let mut next = vec![vec![None; n]; n];
            for v in 0..n {
                dist[v][v] = 0.0;
                next[v][v] = Some(v);
            }
            for e in &self.edges {
                if e.length < dist[e.u][e.v] {
                    dist[e.u][e.v] = e.length;
                    dist[e.v][e.u] = e.length;
                    next[e.u][e.v] = Some(e.v);
                    next[e.v][e.u] = Some(e.u);
                }
            }
            for k in 0..n {
                for i in 0..n {
                    let dik = dist[i][k];
                    if !dik.is_finite() {
                        continue;
                    }
                    for j in 0..n {
                        let cand = dik + dist[k][j];
                        if cand < dist[i][j] {
                            dist[i][j] = cand;
                            next[i][j] = next[i][k];
                        }
                    }
                }
            }
            Closure { dist, next }
        })
    }

    /// Exact shortest-path length between two viewpoint indices.
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        self.closure().dist[u][v]
    }

    /// Shortest-path distance between two viewpoint ids.
    pub fn shortest_path_distance(&self, u: &str, v: &str) -> Result<f64> {
        let u = self.index_of(u)?;
        let v = self.index_of(v)?;
        Ok(self.distance(u, v))
    }

    /// Vertex sequence of a shortest path from `u` to `v`, both ends included.
    pub fn shortest_path(&self, u: usize, v: usize) -> Vec<usize> {
        let next = &self.closure().next;
        let mut path = vec![u];
        let mut cur = u;
        while cur != v {
            cur = next[cur][v].expect("roadmap is connected");
            path.push(cur);
        }
        path
    }

    /// Ratio of the longest to the shortest edge length.
    pub fn edge_length_ratio(&self) -> Result<f64> {
        if self.edges.is_empty() {
            return Err(Error::InvalidArgument("roadmap has no edges".into()));
        }
        let (lo, hi) = self
            .edges
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), e| (lo.min(e.length), hi.max(e.length)));
        Ok(hi / lo)
    }

    pub fn min_edge_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min)
    }

    /// Edges strictly longer than the shortest route between their endpoints.
    pub fn triangle_violations(&self) -> Vec<Error> {
        let closure = self.closure();
        let mut out = Vec::new();
        for e in &self.edges {
            let best = closure.dist[e.u][e.v];
            if e.length > best * (1.0 + TRIANGLE_SLACK) {
                let via = closure.next[e.u][e.v].expect("connected");
                out.push(Error::TriangleInequality {
                    u: self.ids[e.u].clone(),
                    via: self.ids[via].clone(),
                    v: self.ids[e.v].clone(),
                    length: e.length,
                    detour: best,
                });
            }
        }
        out
    }
}

/// A chain of viewpoints described by increasing arc-length coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainRoadmap {
    graph: Roadmap,
    coords: Vec<f64>,
}

impl ChainRoadmap {
    /// Chain with generated ids `v1..vn`.
    pub fn from_coordinates(coords: Vec<f64>) -> Result<Self> {
        let ids = (1..=coords.len()).map(|i| format!("v{i}")).collect();
        Self::with_ids(ids, coords)
    }

    pub fn with_ids(ids: Vec<String>, coords: Vec<f64>) -> Result<Self> {
        let n = ids.len();
        Self::build(ids, vec![None; n], coords)
    }

    fn build(ids: Vec<String>, xy: Vec<Option<[f64; 2]>>, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != ids.len() {
            return Err(Error::InvalidRoadmap(format!(
                "chain has {} vertices but {} coordinates",
                ids.len(),
                coords.len()
            )));
        }
        if coords.len() < 2 {
            return Err(Error::InvalidRoadmap("a chain needs at least two viewpoints".into()));
        }
        if coords[0] != 0.0 {
            return Err(Error::InvalidRoadmap("chain coordinates must start at 0".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidRoadmap("non-finite chain coordinate".into()));
        }
        for w in 0..coords.len() - 1 {
            if !(coords[w + 1] > coords[w]) {
                return Err(Error::NonPositiveLength {
                    u: ids[w].clone(),
                    v: ids[w + 1].clone(),
                    length: coords[w + 1] - coords[w],
                });
            }
        }
        let edges = (0..coords.len() - 1)
            .map(|w| Edge {
                u: w,
                v: w + 1,
                length: coords[w + 1] - coords[w],
            })
            .collect();
        let graph = Roadmap::with_coordinates(ids, xy, edges)?;
        Ok(ChainRoadmap { graph, coords })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, v: usize) -> f64 {
        self.coords[v]
    }

    /// Arc length of the whole chain (`v_n`).
    pub fn length(&self) -> f64 {
        *self.coords.last().expect("n >= 2")
    }

    pub fn graph(&self) -> &Roadmap {
        &self.graph
    }

    /// Indices of viewpoints whose coordinate lies in `[lo, hi]`.
    pub fn viewpoints_in(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = self.coords.partition_point(|&c| c < lo);
        let end = self.coords.partition_point(|&c| c <= hi);
        start..end.max(start)
    }

    /// Distance along the chain; identical to the graph metric.
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        (self.coords[u] - self.coords[v]).abs()
    }
}

/// A connected, acyclic roadmap.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeRoadmap(Roadmap);

impl TreeRoadmap {
    pub fn new(graph: Roadmap) -> Result<Self> {
        if !graph.is_tree() {
            return Err(Error::InvalidRoadmap(format!(
                "tree must have n-1 = {} edges, found {}",
                graph.n() - 1,
                graph.edges().len()
            )));
        }
        Ok(TreeRoadmap(graph))
    }

    pub fn graph(&self) -> &Roadmap {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn total_length(&self) -> f64 {
        self.0.edges().iter().map(|e| e.length).sum()
    }
}

/// A position on the roadmap: a point along an edge, measured from `edge.u`.
#[derive(Debug, Clone, Copy)]
pub struct RoadmapPoint {
    pub edge: usize,
    pub offset: f64,
}

impl RoadmapPoint {
    pub fn at_vertex(g: &Roadmap, v: usize) -> Self {
        let (_, edge) = g.neighbors(v)[0];
        let e = g.edges()[edge];
        let offset = if e.u == v { 0.0 } else { e.length };
        RoadmapPoint { edge, offset }
    }

    /// The vertex this point coincides with, if any.
    pub fn vertex(&self, g: &Roadmap) -> Option<usize> {
        let e = g.edges()[self.edge];
        if self.offset <= 0.0 {
            Some(e.u)
        } else if self.offset >= e.length {
            Some(e.v)
        } else {
            None
        }
    }

    pub fn same_place(&self, other: &Self, g: &Roadmap) -> bool {
        match (self.vertex(g), other.vertex(g)) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.edge == other.edge && self.offset == other.offset,
            _ => false,
        }
    }
}

// ---------------------------------------------------------------------------
// File format

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoadmapKind {
    Chain,
    Tree,
    General,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xy: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub u: String,
    pub v: String,
    pub length: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoadmapDoc {
    pub kind: RoadmapKind,
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedRoadmap {
    General(Roadmap),
    Chain(ChainRoadmap),
    Tree(TreeRoadmap),
}

impl LoadedRoadmap {
    pub fn graph(&self) -> &Roadmap {
        match self {
            LoadedRoadmap::General(g) => g,
            LoadedRoadmap::Chain(c) => c.graph(),
            LoadedRoadmap::Tree(t) => t.graph(),
        }
    }

    pub fn kind(&self) -> RoadmapKind {
        match self {
            LoadedRoadmap::General(_) => RoadmapKind::General,
            LoadedRoadmap::Chain(_) => RoadmapKind::Chain,
            LoadedRoadmap::Tree(_) => RoadmapKind::Tree,
        }
    }

    pub fn as_chain(&self) -> Option<&ChainRoadmap> {
        match self {
            LoadedRoadmap::Chain(c) => Some(c),
            _ => None,
        }
    }

    pub fn to_doc(&self) -> RoadmapDoc {
        let g = self.graph();
        let vertices = g
            .ids()
            .iter()
            .zip(g.xy())
            .map(|(id, xy)| VertexDoc { id: id.clone(), xy: *xy })
            .collect();
        let edges = g
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                u: g.id(e.u).to_string(),
                v: g.id(e.v).to_string(),
                length: e.length,
            })
            .collect();
        RoadmapDoc {
            kind: self.kind(),
            vertices,
            edges,
            coordinates: self.as_chain().map(|c| c.coords().to_vec()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("roadmap serializes")
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Demote triangle-inequality violations to warnings.
    pub allow_triangle_violations: bool,
}

#[derive(Debug)]
pub struct Loaded {
    pub roadmap: LoadedRoadmap,
    pub warnings: Vec<String>,
}

/// Parses and validates a roadmap document.
pub fn load_roadmap(source: &str, opts: LoadOptions) -> Result<Loaded> {
    let doc: RoadmapDoc = serde_json::from_str(source).map_err(|e| Error::Parse(e.to_string()))?;
    from_doc(doc, opts)
}

pub fn from_doc(doc: RoadmapDoc, opts: LoadOptions) -> Result<Loaded> {
    let ids: Vec<String> = doc.vertices.iter().map(|v| v.id.clone()).collect();
    let xy: Vec<Option<[f64; 2]>> = doc.vertices.iter().map(|v| v.xy).collect();

    if doc.kind == RoadmapKind::Chain {
        let coords = doc
            .coordinates
            .ok_or_else(|| Error::Parse("kind `chain` requires `coordinates`".into()))?;
        let chain = ChainRoadmap::build(ids, xy, coords)?;
        // Listed edges are optional for chains but must agree with the coordinates.
        for e in &doc.edges {
            let u = chain.graph().index_of(&e.u)?;
            let v = chain.graph().index_of(&e.v)?;
            if u.abs_diff(v) != 1 {
                return Err(Error::InvalidRoadmap(format!(
                    "chain edge {}-{} joins non-consecutive viewpoints",
                    e.u, e.v
                )));
            }
            let expect = chain.distance(u, v);
            if (e.length - expect).abs() > 1e-9 * expect.max(1.0) {
                return Err(Error::InvalidRoadmap(format!(
                    "chain edge {}-{} has length {} but coordinates give {}",
                    e.u, e.v, e.length, expect
                )));
            }
        }
        return Ok(Loaded {
            roadmap: LoadedRoadmap::Chain(chain),
            warnings: Vec::new(),
        });
    }

    if doc.coordinates.is_some() {
        return Err(Error::Parse("`coordinates` is only allowed for kind `chain`".into()));
    }
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        let u = *index.get(e.u.as_str()).ok_or_else(|| Error::UnknownVertex(e.u.clone()))?;
        let v = *index.get(e.v.as_str()).ok_or_else(|| Error::UnknownVertex(e.v.clone()))?;
        edges.push(Edge { u, v, length: e.length });
    }
    let graph = Roadmap::with_coordinates(ids, xy, edges)?;

    let mut warnings = Vec::new();
    let mut violations = graph.triangle_violations();
    if !violations.is_empty() {
        if opts.allow_triangle_violations {
            warnings.extend(violations.iter().map(|e| e.to_string()));
        } else {
            return Err(violations.swap_remove(0));
        }
    }

    let roadmap = match doc.kind {
        RoadmapKind::Tree => LoadedRoadmap::Tree(TreeRoadmap::new(graph)?),
        _ => LoadedRoadmap::General(graph),
    };
    Ok(Loaded { roadmap, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_triangle() -> Roadmap {
        Roadmap::from_triples(&["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0)]).unwrap()
    }

    #[test]
    fn chain_document_loads_as_chain() {
        let src = r#"{"kind":"chain","vertices":[{"id":"v1"},{"id":"v2"},{"id":"v3"},{"id":"v4"}],
                      "edges":[],"coordinates":[0,1,3,6]}"#;
        let loaded = load_roadmap(src, LoadOptions::default()).unwrap();
        let chain = loaded.roadmap.as_chain().unwrap();
        assert_eq!(chain.n(), 4);
        assert_eq!(chain.graph().shortest_path_distance("v1", "v4").unwrap(), 6.0);
    }

    #[test]
    fn triangle_is_general_and_cyclic() {
        let src = r#"{"kind":"general","vertices":[{"id":"a"},{"id":"b"},{"id":"c"}],
            "edges":[{"u":"a","v":"b","length":1},{"u":"b","v":"c","length":1},{"u":"a","v":"c","length":1}]}"#;
        let loaded = load_roadmap(src, LoadOptions::default()).unwrap();
        assert_eq!(loaded.roadmap.kind(), RoadmapKind::General);
        assert_eq!(loaded.roadmap.graph().n(), 3);
        assert!(!loaded.roadmap.graph().is_tree());
        assert_eq!(loaded.roadmap.graph().shortest_path_distance("a", "b").unwrap(), 1.0);
    }

    #[test]
    fn star_loads_as_tree() {
        let src = r#"{"kind":"tree","vertices":[{"id":"c"},{"id":"a"},{"id":"b"},{"id":"d"}],
            "edges":[{"u":"c","v":"a","length":1},{"u":"c","v":"b","length":1},{"u":"c","v":"d","length":1}]}"#;
        let loaded = load_roadmap(src, LoadOptions::default()).unwrap();
        match loaded.roadmap {
            LoadedRoadmap::Tree(t) => assert_eq!(t.graph().edges().len(), t.n() - 1),
            other => panic!("expected tree, got {:?}", other.kind()),
        }
    }

    #[test]
    fn square_opposite_corners() {
        let g = Roadmap::from_triples(
            &["a", "b", "c", "d"],
            &[("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0), ("d", "a", 1.0)],
        )
        .unwrap();
        assert_eq!(g.shortest_path_distance("a", "c").unwrap(), 2.0);
        assert_eq!(g.shortest_path(0, 2).len(), 3);
    }

    #[test]
    fn load_errors() {
        let disconnected = r#"{"kind":"general","vertices":[{"id":"a"},{"id":"b"},{"id":"c"}],
            "edges":[{"u":"a","v":"b","length":1}]}"#;
        assert!(matches!(
            load_roadmap(disconnected, LoadOptions::default()),
            Err(Error::Disconnected { components: 2 })
        ));
        let zero = r#"{"kind":"general","vertices":[{"id":"a"},{"id":"b"}],
            "edges":[{"u":"a","v":"b","length":0}]}"#;
        assert!(matches!(
            load_roadmap(zero, LoadOptions::default()),
            Err(Error::NonPositiveLength { .. })
        ));
        let broken = r#"{"kind":"general","vertices":[{"id":"a"},{"id":"b"},{"id":"c"}],
            "edges":[{"u":"a","v":"b","length":1},{"u":"b","v":"c","length":1},{"u":"a","v":"c","length":5}]}"#;
        match load_roadmap(broken, LoadOptions::default()) {
            Err(Error::TriangleInequality { u, via, v, .. }) => {
                assert_eq!((u.as_str(), via.as_str(), v.as_str()), ("a", "b", "c"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let relaxed = load_roadmap(
            broken,
            LoadOptions {
                allow_triangle_violations: true,
            },
        )
        .unwrap();
        assert_eq!(relaxed.warnings.len(), 1);
        assert!(matches!(load_roadmap("{", LoadOptions::default()), Err(Error::Parse(_))));
        assert!(matches!(
            unit_triangle().shortest_path_distance("a", "zz"),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn edge_ratios() {
        assert_eq!(unit_triangle().edge_length_ratio().unwrap(), 1.0);
        let two = Roadmap::from_triples(&["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 4.0)]).unwrap();
        assert_eq!(two.edge_length_ratio().unwrap(), 4.0);
        let chain = ChainRoadmap::from_coordinates(vec![0.0, 1.0, 3.0, 6.0]).unwrap();
        assert_eq!(chain.graph().edge_length_ratio().unwrap(), 3.0);
    }

    #[test]
    fn chain_rejects_bad_coordinates() {
        assert!(ChainRoadmap::from_coordinates(vec![0.0]).is_err());
        assert!(ChainRoadmap::from_coordinates(vec![1.0, 2.0]).is_err());
        assert!(ChainRoadmap::from_coordinates(vec![0.0, 2.0, 2.0]).is_err());
    }

    #[test]
    fn roadmap_point_at_endpoint_is_vertex() {
        let g = unit_triangle();
        let p = RoadmapPoint { edge: 0, offset: 1.0 };
        assert_eq!(p.vertex(&g), Some(1));
        assert!(p.same_place(&RoadmapPoint::at_vertex(&g, 1), &g));
        assert_eq!(RoadmapPoint { edge: 0, offset: 0.5 }.vertex(&g), None);
    }
}
