//! Graphs with coloured internal edges and labelled legs.
//!
//! Subgraphs are edge subsets of a parent graph; their vertex set is the set
//! of endpoints of the selected edges. Self-loops and multi-edges are allowed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;
pub type EdgeId = u32;
pub type Colour = u32;
pub type LegLabel = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edges[{index}] (id {edge}): endpoint {vertex} is not a declared vertex")]
    DanglingEndpoint { index: usize, edge: EdgeId, vertex: VertexId },
    #[error("legs[{index}] (label {label}): attachment vertex {vertex} is not a declared vertex")]
    DanglingLeg { index: usize, label: LegLabel, vertex: VertexId },
    #[error("edges[{index}]: duplicate edge id {edge}")]
    DuplicateEdge { index: usize, edge: EdgeId },
    #[error("vertices[{index}]: duplicate vertex id {vertex}")]
    DuplicateVertex { index: usize, vertex: VertexId },
    #[error("legs: labels must be exactly 1..={expected}, found {found:?}")]
    LegLabels { expected: u32, found: Vec<LegLabel> },
    #[error("edges[{index}] (id {edge}): colour must be positive")]
    ZeroColour { index: usize, edge: EdgeId },
    #[error("edges: colour {colour} used by edges {first} and {second} in a holocoloured graph")]
    RepeatedColour { colour: Colour, first: EdgeId, second: EdgeId },
    #[error("edge {0} does not belong to the graph")]
    UnknownEdge(EdgeId),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
}

/// A sorted set of edge ids. Ordering is lexicographic on the sorted id list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(Vec<EdgeId>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.iter().all(|e| other.contains(*e))
    }

    pub fn is_proper_subset(&self, other: &EdgeSet) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.iter().all(|e| !other.contains(*e))
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        self.iter().filter(|e| other.contains(*e)).collect()
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        self.iter().filter(|e| !other.contains(*e)).collect()
    }

    pub fn insert(&mut self, e: EdgeId) {
        if let Err(pos) = self.0.binary_search(&e) {
            self.0.insert(pos, e);
        }
    }

    /// Shortlex order: by cardinality, then lexicographically.
    pub fn shortlex_cmp(&self, other: &EdgeSet) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        let mut v: Vec<EdgeId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        EdgeSet(v)
    }
}

impl<const N: usize> From<[EdgeId; N]> for EdgeSet {
    fn from(ids: [EdgeId; N]) -> Self {
        ids.into_iter().collect()
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "e{e}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: [VertexId; 2],
    pub colour: Colour,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Leg {
    pub label: LegLabel,
    pub at: VertexId,
}

/// Serialised form of a [`Graph`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphData {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub legs: Vec<Leg>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub holocoloured: bool,
}

/// An undirected multigraph with coloured edges and labelled legs.
///
/// `leg_count` is the number of legs of the ambient graph; graphs derived
/// from a parent (subgraphs, quotients) keep the parent's value so that
/// momentum invariants stay canonical relative to the full set of legs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphData", into = "GraphData")]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    legs: Vec<Leg>,
    leg_count: u32,
    holocoloured: bool,
}

impl TryFrom<GraphData> for Graph {
    type Error = GraphError;

    fn try_from(data: GraphData) -> Result<Self, Self::Error> {
        let g = Graph::new(data.vertices, data.edges, data.legs)?;
        if data.holocoloured {
            g.into_holocoloured()
        } else {
            Ok(g)
        }
    }
}

impl From<Graph> for GraphData {
    fn from(g: Graph) -> Self {
        GraphData {
            vertices: g.vertices,
            edges: g.edges,
            legs: g.legs,
            holocoloured: g.holocoloured,
        }
    }
}

/// Union-find over vertex positions.
#[derive(Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // smaller root wins so representatives are deterministic
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// A pair of vertex-disjoint trees covering all vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForest {
    /// The two parts; the first contains the smallest vertex id.
    pub parts: [(Vec<VertexId>, EdgeSet); 2],
}

impl TwoForest {
    pub fn edges(&self) -> EdgeSet {
        self.parts[0].1.union(&self.parts[1].1)
    }
}

impl Graph {
    /// Builds and validates a graph. Leg labels must be exactly `1..=k`.
    pub fn new(
        vertices: Vec<VertexId>,
        edges: Vec<Edge>,
        legs: Vec<Leg>,
    ) -> Result<Self, GraphError> {
        let k = legs.len() as u32;
        let g = Self::build(vertices, edges, legs, k)?;
        let labels: Vec<LegLabel> = g.legs.iter().map(|l| l.label).collect();
        if labels != (1..=k).collect::<Vec<_>>() {
            return Err(GraphError::LegLabels { expected: k, found: labels });
        }
        Ok(g)
    }

    fn build(
        vertices: Vec<VertexId>,
        edges: Vec<Edge>,
        legs: Vec<Leg>,
        leg_count: u32,
    ) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for (index, v) in vertices.iter().enumerate() {
            if !seen.insert(*v) {
                return Err(GraphError::DuplicateVertex { index, vertex: *v });
            }
        }
        let mut ids = BTreeSet::new();
        for (index, e) in edges.iter().enumerate() {
            if !ids.insert(e.id) {
                return Err(GraphError::DuplicateEdge { index, edge: e.id });
            }
            if e.colour == 0 {
                return Err(GraphError::ZeroColour { index, edge: e.id });
            }
            for v in e.ends {
                if !seen.contains(&v) {
                    return Err(GraphError::DanglingEndpoint { index, edge: e.id, vertex: v });
                }
            }
        }
        let mut labels = BTreeSet::new();
        for (index, l) in legs.iter().enumerate() {
            if !seen.contains(&l.at) {
                return Err(GraphError::DanglingLeg { index, label: l.label, vertex: l.at });
            }
            if !labels.insert(l.label) || l.label == 0 || l.label > leg_count {
                return Err(GraphError::LegLabels {
                    expected: leg_count,
                    found: legs.iter().map(|l| l.label).collect(),
                });
            }
        }
        Ok(Self::from_parts(seen.into_iter().collect(), edges, legs, leg_count))
    }

    /// Assembles a graph from parts that are already known to be consistent.
    fn from_parts(
        vertices: Vec<VertexId>,
        mut edges: Vec<Edge>,
        mut legs: Vec<Leg>,
        leg_count: u32,
    ) -> Self {
        for e in edges.iter_mut() {
            e.ends.sort_unstable();
        }
        edges.sort_by_key(|e| e.id);
        legs.sort_by_key(|l| l.label);
        Graph { vertices, edges, legs, leg_count, holocoloured: false }
    }

    /// Marks the graph holocoloured after checking the colouring is injective.
    pub fn into_holocoloured(mut self) -> Result<Self, GraphError> {
        let mut by_colour: BTreeMap<Colour, EdgeId> = BTreeMap::new();
        for e in &self.edges {
            if let Some(first) = by_colour.insert(e.colour, e.id) {
                return Err(GraphError::RepeatedColour { colour: e.colour, first, second: e.id });
            }
        }
        self.holocoloured = true;
        Ok(self)
    }

    pub fn is_holocoloured(&self) -> bool {
        self.holocoloured
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    /// Number of legs of the ambient graph (labels range over `1..=leg_count`).
    pub fn leg_count(&self) -> u32 {
        self.leg_count
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok().map(|i| &self.edges[i])
    }

    pub fn edge_ids(&self) -> EdgeSet {
        EdgeSet(self.edges.iter().map(|e| e.id).collect())
    }

    pub(crate) fn vertex_index(&self, v: VertexId) -> usize {
        self.vertices.binary_search(&v).expect("vertex belongs to graph")
    }

    pub fn check_edges(&self, s: &EdgeSet) -> Result<(), GraphError> {
        match s.iter().find(|e| self.edge(*e).is_none()) {
            Some(e) => Err(GraphError::UnknownEdge(e)),
            None => Ok(()),
        }
    }

    /// Edges plus legs incident to `v`; a self-loop counts twice.
    pub fn valence(&self, v: VertexId) -> usize {
        let half_edges: usize = self
            .edges
            .iter()
            .map(|e| e.ends.iter().filter(|&&w| w == v).count())
            .sum();
        half_edges + self.legs.iter().filter(|l| l.at == v).count()
    }

    /// Vertex partition into connected components (isolated vertices included).
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut ds = DisjointSets::new(self.vertices.len());
        for e in &self.edges {
            ds.union(self.vertex_index(e.ends[0]), self.vertex_index(e.ends[1]));
        }
        let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            groups.entry(ds.find(i)).or_default().push(*v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Loop number `E - V + C`.
    pub fn rank(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertices.len()
    }

    /// The edges of `s` viewed as a graph on their endpoints, carrying every
    /// leg attached to those endpoints.
    pub fn restrict(&self, s: &EdgeSet) -> Graph {
        let edges: Vec<Edge> = self.edges.iter().filter(|e| s.contains(e.id)).cloned().collect();
        let vertices: BTreeSet<VertexId> = edges.iter().flat_map(|e| e.ends).collect();
        let legs = self.legs.iter().filter(|l| vertices.contains(&l.at)).cloned().collect();
        Self::from_parts(vertices.into_iter().collect(), edges, legs, self.leg_count)
    }

    pub fn subgraph(&self, s: EdgeSet) -> Result<Subgraph<'_>, GraphError> {
        self.check_edges(&s)?;
        Ok(Subgraph { parent: self, edges: s })
    }

    /// Rank of the edge subgraph `s` on its derived vertex set.
    pub fn subgraph_rank(&self, s: &EdgeSet) -> usize {
        let mut ds = DisjointSets::new(self.vertices.len());
        let mut rank = 0;
        for e in self.edges.iter().filter(|e| s.contains(e.id)) {
            if !ds.union(self.vertex_index(e.ends[0]), self.vertex_index(e.ends[1])) {
                rank += 1;
            }
        }
        rank
    }

    pub fn is_forest(&self, s: &EdgeSet) -> bool {
        self.subgraph_rank(s) == 0
    }

    /// True iff deleting any edge lowers the rank (no bridges).
    pub fn is_core(&self) -> bool {
        self.is_core_subgraph(&self.edge_ids())
    }

    pub fn is_core_subgraph(&self, s: &EdgeSet) -> bool {
        let r = self.subgraph_rank(s);
        s.iter().all(|e| {
            let mut without = s.clone();
            without.0.retain(|&f| f != e);
            self.subgraph_rank(&without) < r
        })
    }

    /// Contracts every connected component of `s` to a single vertex (the
    /// smallest vertex id of the component). Colours and legs are preserved.
    pub fn contract(&self, s: &EdgeSet) -> Graph {
        let mut ds = DisjointSets::new(self.vertices.len());
        for e in self.edges.iter().filter(|e| s.contains(e.id)) {
            ds.union(self.vertex_index(e.ends[0]), self.vertex_index(e.ends[1]));
        }
        // roots are minimal indices, hence minimal vertex ids
        let mut map = |v: VertexId| self.vertices[ds.find(self.vertex_index(v))];
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| !s.contains(e.id))
            .map(|e| Edge { id: e.id, ends: [map(e.ends[0]), map(e.ends[1])], colour: e.colour })
            .collect();
        let legs: Vec<Leg> =
            self.legs.iter().map(|l| Leg { label: l.label, at: map(l.at) }).collect();
        let vertices: BTreeSet<VertexId> = self.vertices.iter().map(|&v| map(v)).collect();
        let mut g = Self::from_parts(vertices.into_iter().collect(), edges, legs, self.leg_count);
        g.holocoloured = self.holocoloured;
        g
    }

    /// Removes the edges of `s`; the vertex set is unchanged.
    pub fn delete(&self, s: &EdgeSet) -> Graph {
        let edges = self.edges.iter().filter(|e| !s.contains(e.id)).cloned().collect();
        let mut g =
            Self::from_parts(self.vertices.clone(), edges, self.legs.clone(), self.leg_count);
        g.holocoloured = self.holocoloured;
        g
    }

    fn require_connected(&self) -> Result<(), GraphError> {
        let components = self.components().len();
        if components > 1 {
            return Err(GraphError::Disconnected { components });
        }
        Ok(())
    }

    /// All spanning trees in lexicographic order of their sorted edge ids.
    pub fn spanning_trees(&self) -> Result<Vec<EdgeSet>, GraphError> {
        self.require_connected()?;
        let need = self.vertices.len().saturating_sub(1);
        let mut out = Vec::new();
        self.grow_acyclic(0, need, &mut Vec::new(), DisjointSets::new(self.vertices.len()), &mut out);
        Ok(out)
    }

    /// All spanning 2-forests; isolated vertices count as single-vertex trees.
    pub fn spanning_two_forests(&self) -> Result<Vec<TwoForest>, GraphError> {
        self.require_connected()?;
        if self.vertices.len() < 2 {
            return Ok(Vec::new());
        }
        let need = self.vertices.len() - 2;
        let mut sets = Vec::new();
        self.grow_acyclic(0, need, &mut Vec::new(), DisjointSets::new(self.vertices.len()), &mut sets);
        Ok(sets.into_iter().map(|s| self.split_two_forest(s)).collect())
    }

    fn split_two_forest(&self, s: EdgeSet) -> TwoForest {
        let forest = self.restrict(&s);
        let mut ds = DisjointSets::new(self.vertices.len());
        for e in forest.edges() {
            ds.union(self.vertex_index(e.ends[0]), self.vertex_index(e.ends[1]));
        }
        let first_root = ds.find(0);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (i, v) in self.vertices.iter().enumerate() {
            if ds.find(i) == first_root {
                a.push(*v)
            } else {
                b.push(*v)
            }
        }
        let edges_of = |vs: &[VertexId]| -> EdgeSet {
            forest.edges().iter().filter(|e| vs.contains(&e.ends[0])).map(|e| e.id).collect()
        };
        let (ea, eb) = (edges_of(&a), edges_of(&b));
        TwoForest { parts: [(a, ea), (b, eb)] }
    }

    /// Include-first depth-first search over acyclic edge sets of size `need`.
    fn grow_acyclic(
        &self,
        idx: usize,
        need: usize,
        chosen: &mut Vec<EdgeId>,
        ds: DisjointSets,
        out: &mut Vec<EdgeSet>,
    ) {
        if chosen.len() == need {
            out.push(EdgeSet(chosen.clone()));
            return;
        }
        if self.edges.len() - idx < need - chosen.len() {
            return;
        }
        let e = &self.edges[idx];
        let mut with = ds.clone();
        if with.union(self.vertex_index(e.ends[0]), self.vertex_index(e.ends[1])) {
            chosen.push(e.id);
            self.grow_acyclic(idx + 1, need, chosen, with, out);
            chosen.pop();
        }
        self.grow_acyclic(idx + 1, need, chosen, ds, out);
    }

    /// Minimal cycles (circuits), in shortlex order.
    pub fn circuits(&self) -> Vec<EdgeSet> {
        let mut found = BTreeSet::new();
        for e in &self.edges {
            if e.is_loop() {
                found.insert(EdgeSet(vec![e.id]));
                continue;
            }
            // paths from ends[1] back to ends[0] through edges with larger ids
            let mut visited = vec![false; self.vertices.len()];
            visited[self.vertex_index(e.ends[1])] = true;
            let mut path = vec![e.id];
            self.close_cycles(e.ends[1], e.ends[0], e.id, &mut visited, &mut path, &mut found);
        }
        let mut out: Vec<EdgeSet> = found.into_iter().collect();
        out.sort_by(|a, b| a.shortlex_cmp(b));
        out
    }

    fn close_cycles(
        &self,
        at: VertexId,
        target: VertexId,
        min_id: EdgeId,
        visited: &mut [bool],
        path: &mut Vec<EdgeId>,
        found: &mut BTreeSet<EdgeSet>,
    ) {
        for f in self.edges.iter().filter(|f| f.id > min_id && !f.is_loop()) {
            let next = match f.ends {
                [a, b] if a == at => b,
                [a, b] if b == at => a,
                _ => continue,
            };
            if path.contains(&f.id) {
                continue;
            }
            if next == target {
                path.push(f.id);
                found.insert(path.iter().copied().collect());
                path.pop();
                continue;
            }
            let ni = self.vertex_index(next);
            if visited[ni] {
                continue;
            }
            visited[ni] = true;
            path.push(f.id);
            self.close_cycles(next, target, min_id, visited, path, found);
            path.pop();
            visited[ni] = false;
        }
    }

    /// All proper core subgraphs of positive rank, in shortlex order.
    ///
    /// A subgraph is core exactly when it is a union of circuits, so these are
    /// generated as the union closure of [`Graph::circuits`].
    pub fn core_subgraphs(&self) -> Vec<EdgeSet> {
        let mut closure: BTreeSet<EdgeSet> = BTreeSet::new();
        for c in self.circuits() {
            let grown: Vec<EdgeSet> = closure.iter().map(|s| s.union(&c)).collect();
            closure.insert(c);
            closure.extend(grown);
        }
        let all = self.edge_ids();
        let mut out: Vec<EdgeSet> = closure.into_iter().filter(|s| *s != all).collect();
        out.sort_by(|a, b| a.shortlex_cmp(b));
        out
    }
}

/// An edge subgraph of a parent graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph<'g> {
    parent: &'g Graph,
    edges: EdgeSet,
}

impl<'g> Subgraph<'g> {
    pub fn parent(&self) -> &'g Graph {
        self.parent
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        let vs: BTreeSet<VertexId> = self
            .edges
            .iter()
            .flat_map(|e| self.parent.edge(e).expect("checked on construction").ends)
            .collect();
        vs.into_iter().collect()
    }

    pub fn rank(&self) -> usize {
        self.parent.subgraph_rank(&self.edges)
    }

    pub fn is_core(&self) -> bool {
        self.parent.is_core_subgraph(&self.edges)
    }

    pub fn to_graph(&self) -> Graph {
        self.parent.restrict(&self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set<const N: usize>(ids: [EdgeId; N]) -> EdgeSet {
        EdgeSet::from(ids)
    }

    #[test]
    fn ranks() {
        assert_eq!(fixtures::dunce_cap().rank(), 2);
        assert_eq!(fixtures::rose(3).rank(), 3);
        let path = Graph::new(
            vec![0, 1, 2],
            vec![Edge { id: 1, ends: [0, 1], colour: 1 }, Edge { id: 2, ends: [1, 2], colour: 2 }],
            vec![],
        )
        .unwrap();
        assert_eq!(path.rank(), 0);
        assert_eq!(path.spanning_trees().unwrap(), vec![set([1, 2])]);
    }

    #[test]
    fn contraction() {
        let bubble = fixtures::bubble();
        let t = bubble.contract(&set([1]));
        assert_eq!(t.n_vertices(), 1);
        assert_eq!(t.edge_ids(), set([2]));
        assert!(t.legs().iter().all(|l| l.at == 0));

        let dunce = fixtures::dunce_cap();
        let rose = dunce.contract(&set([1, 2]));
        assert_eq!(rose.n_vertices(), 1);
        assert_eq!(rose.edge_ids(), set([3, 4]));
        assert!(rose.edges().iter().all(Edge::is_loop));

        let sunrise = fixtures::sunrise();
        assert_eq!(sunrise.contract(&set([1])).rank(), 2);
        // contracting a cycle lowers the rank by its rank
        assert_eq!(dunce.contract(&set([3, 4])).rank(), 1);
    }

    #[test]
    fn deletion() {
        let bubble = fixtures::bubble();
        let d = bubble.delete(&set([1]));
        assert_eq!(d.n_vertices(), 2);
        assert_eq!(d.rank(), 0);
        assert_eq!(fixtures::dunce_cap().delete(&set([3])).rank(), 1);
        let bare = fixtures::dunce_cap().delete(&fixtures::dunce_cap().edge_ids());
        assert_eq!(bare.n_edges(), 0);
        assert_eq!(bare.n_vertices(), 3);
    }

    #[test]
    fn core_checks() {
        let dunce = fixtures::dunce_cap();
        assert!(dunce.is_core());
        assert!(!dunce.is_core_subgraph(&set([1, 3, 4])));
        assert!(fixtures::tadpole(1).is_core());
        let sub = dunce.subgraph(set([1, 3, 4])).unwrap();
        assert_eq!(sub.rank(), 1);
        assert_eq!(sub.vertices(), vec![0, 1, 2]);
        assert!(dunce.subgraph(set([9])).is_err());
    }

    #[test]
    fn trees_and_two_forests() {
        let dunce = fixtures::dunce_cap();
        assert_eq!(
            dunce.spanning_trees().unwrap(),
            vec![set([1, 2]), set([1, 3]), set([1, 4]), set([2, 3]), set([2, 4])]
        );
        assert_eq!(
            fixtures::sunrise().spanning_trees().unwrap(),
            vec![set([1]), set([2]), set([3])]
        );
        let sf = fixtures::sunrise().spanning_two_forests().unwrap();
        assert_eq!(sf.len(), 1);
        assert_eq!(sf[0].parts[0], (vec![0], EdgeSet::new()));
        assert_eq!(sf[0].parts[1], (vec![1], EdgeSet::new()));
        assert_eq!(fixtures::bubble().spanning_two_forests().unwrap().len(), 1);
        let tri = fixtures::triangle().spanning_two_forests().unwrap();
        assert_eq!(tri.len(), 3);
        assert!(tri.iter().all(|f| f.edges().len() == 1));

        let split = Graph::new(vec![0, 1], vec![], vec![]).unwrap();
        assert_eq!(split.spanning_trees(), Err(GraphError::Disconnected { components: 2 }));
        assert!(split.spanning_two_forests().is_err());
    }

    #[test]
    fn core_subgraph_lists() {
        assert_eq!(
            fixtures::dunce_cap().core_subgraphs(),
            vec![set([3, 4]), set([1, 2, 3]), set([1, 2, 4])]
        );
        assert_eq!(
            fixtures::sunrise().core_subgraphs(),
            vec![set([1, 2]), set([1, 3]), set([2, 3])]
        );
        assert!(fixtures::triangle().core_subgraphs().is_empty());
        assert_eq!(fixtures::rose(2).core_subgraphs(), vec![set([1]), set([2])]);
    }

    #[test]
    fn validation_errors() {
        let dangling = Graph::new(vec![0], vec![Edge { id: 1, ends: [0, 5], colour: 1 }], vec![]);
        assert!(matches!(dangling, Err(GraphError::DanglingEndpoint { vertex: 5, .. })));
        let labels = Graph::new(vec![0], vec![], vec![Leg { label: 2, at: 0 }]);
        assert!(matches!(labels, Err(GraphError::LegLabels { .. })));
        let dup = Graph::new(
            vec![0],
            vec![Edge { id: 1, ends: [0, 0], colour: 1 }, Edge { id: 1, ends: [0, 0], colour: 2 }],
            vec![],
        );
        assert!(matches!(dup, Err(GraphError::DuplicateEdge { .. })));
        let twice = Graph::new(
            vec![0],
            vec![Edge { id: 1, ends: [0, 0], colour: 1 }, Edge { id: 2, ends: [0, 0], colour: 1 }],
            vec![],
        )
        .unwrap();
        assert!(matches!(twice.into_holocoloured(), Err(GraphError::RepeatedColour { .. })));
    }

    #[test]
    fn json_round_trip() {
        let g = fixtures::dunce_cap();
        let text = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&text).unwrap();
        assert_eq!(g, back);
    }
}
