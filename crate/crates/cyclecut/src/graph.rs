//! Directed graphs with stable vertex identities.
//!
//! [`DiGraph`] is the representation every solver module works on. Vertex
//! ids are never reused after a deletion, so witness sets collected on
//! derived graphs (deletions, bypasses, subgraphs) stay meaningful in every
//! ancestor graph. Derived-graph operations return new values instead of
//! mutating in place, because the branching search explores several
//! derivatives of the same parent.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Identity of a vertex, stable across deletions within one graph lineage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A directed edge as an ordered pair.
pub type Edge = (VertexId, VertexId);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("edge ({0}, {1}) is not in the graph")]
    MissingEdge(VertexId, VertexId),
    #[error("vertex {0} has a self-loop")]
    SelfLoop(VertexId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Adjacency {
    out: BTreeSet<VertexId>,
    inn: BTreeSet<VertexId>,
}

/// A mutable directed graph. No parallel edges (the edge set is a set of
/// ordered pairs); self-loops are representable but rejected by operations
/// that need them absent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiGraph {
    adj: BTreeMap<VertexId, Adjacency>,
    edge_count: usize,
    next_id: u32,
}

impl DiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph with vertices `v0..v{n-1}` and the given edges,
    /// where edge endpoints index into that range.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut g = Self::new();
        let ids = g.add_vertices(n);
        for &(u, v) in edges {
            let u = *ids
                .get(u as usize)
                .ok_or(GraphError::UnknownVertex(VertexId(u)))?;
            let v = *ids
                .get(v as usize)
                .ok_or(GraphError::UnknownVertex(VertexId(v)))?;
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds an isolated vertex with a fresh id.
    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        self.adj.insert(id, Adjacency::default());
        id
    }

    pub fn add_vertices(&mut self, count: usize) -> Vec<VertexId> {
        (0..count).map(|_| self.add_vertex()).collect()
    }

    /// Inserts the edge `(u, v)`. Idempotent if already present.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if !self.adj.contains_key(&u) {
            return Err(GraphError::UnknownVertex(u));
        }
        if !self.adj.contains_key(&v) {
            return Err(GraphError::UnknownVertex(v));
        }
        if self.adj.get_mut(&u).unwrap().out.insert(v) {
            self.adj.get_mut(&v).unwrap().inn.insert(u);
            self.edge_count += 1;
        }
        Ok(())
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|a| a.out.contains(&v))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.adj.keys().copied().collect()
    }

    /// Edges in ascending `(tail, head)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, a)| a.out.iter().map(move |&v| (u, v)))
    }

    pub fn out_neighbors(&self, v: VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.adj
            .get(&v)
            .map(|a| &a.out)
            .ok_or(GraphError::UnknownVertex(v))
    }

    pub fn in_neighbors(&self, v: VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.adj
            .get(&v)
            .map(|a| &a.inn)
            .ok_or(GraphError::UnknownVertex(v))
    }

    pub fn has_self_loop(&self, v: VertexId) -> bool {
        self.adj.get(&v).is_some_and(|a| a.out.contains(&v))
    }

    fn check_vertices<'a>(
        &self,
        vs: impl IntoIterator<Item = &'a VertexId>,
    ) -> Result<(), GraphError> {
        for &v in vs {
            if !self.adj.contains_key(&v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        Ok(())
    }

    /// Returns the graph with the vertices of `r` and all incident edges
    /// removed. `self` is unchanged.
    pub fn remove_vertices(&self, r: &BTreeSet<VertexId>) -> Result<DiGraph, GraphError> {
        self.check_vertices(r)?;
        let mut adj = BTreeMap::new();
        let mut edge_count = 0;
        for (&v, a) in &self.adj {
            if r.contains(&v) {
                continue;
            }
            let out: BTreeSet<_> = a.out.iter().filter(|w| !r.contains(w)).copied().collect();
            let inn: BTreeSet<_> = a.inn.iter().filter(|w| !r.contains(w)).copied().collect();
            edge_count += out.len();
            adj.insert(v, Adjacency { out, inn });
        }
        Ok(DiGraph {
            adj,
            edge_count,
            next_id: self.next_id,
        })
    }

    /// Returns the graph with the edges of `es` removed; absent edges are
    /// ignored. Vertices are retained.
    pub fn remove_edges(&self, es: &BTreeSet<Edge>) -> DiGraph {
        let mut g = self.clone();
        for &(u, v) in es {
            let present = g.adj.get_mut(&u).is_some_and(|a| a.out.remove(&v));
            if present {
                g.adj.get_mut(&v).unwrap().inn.remove(&u);
                g.edge_count -= 1;
            }
        }
        g
    }

    /// Returns the subgraph made of exactly the edges `es` and the vertices
    /// incident to them.
    pub fn edge_subgraph(&self, es: &BTreeSet<Edge>) -> Result<DiGraph, GraphError> {
        let mut g = DiGraph {
            adj: BTreeMap::new(),
            edge_count: 0,
            next_id: self.next_id,
        };
        for &(u, v) in es {
            if !self.contains_edge(u, v) {
                return Err(GraphError::MissingEdge(u, v));
            }
            g.adj.entry(u).or_default();
            g.adj.entry(v).or_default();
        }
        for &(u, v) in es {
            if g.adj.get_mut(&u).unwrap().out.insert(v) {
                g.adj.get_mut(&v).unwrap().inn.insert(u);
                g.edge_count += 1;
            }
        }
        Ok(g)
    }

    /// Returns the subgraph induced by `vs`: those vertices and every edge
    /// with both endpoints among them.
    pub fn induced_subgraph(&self, vs: &BTreeSet<VertexId>) -> Result<DiGraph, GraphError> {
        self.check_vertices(vs)?;
        let mut adj = BTreeMap::new();
        let mut edge_count = 0;
        for &v in vs {
            let a = &self.adj[&v];
            let out: BTreeSet<_> = a.out.iter().filter(|w| vs.contains(w)).copied().collect();
            let inn: BTreeSet<_> = a.inn.iter().filter(|w| vs.contains(w)).copied().collect();
            edge_count += out.len();
            adj.insert(v, Adjacency { out, inn });
        }
        Ok(DiGraph {
            adj,
            edge_count,
            next_id: self.next_id,
        })
    }

    /// True iff the graph has no directed cycle. A self-loop is a cycle.
    pub fn is_acyclic(&self) -> bool {
        // Kahn's peeling; a self-loop keeps its vertex's in-degree positive.
        let mut indeg: BTreeMap<VertexId, usize> =
            self.adj.iter().map(|(&v, a)| (v, a.inn.len())).collect();
        let mut queue: VecDeque<VertexId> = indeg
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&v, _)| v)
            .collect();
        let mut processed = 0;
        while let Some(v) = queue.pop_front() {
            processed += 1;
            for &w in &self.adj[&v].out {
                let d = indeg.get_mut(&w).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push_back(w);
                }
            }
        }
        processed == self.adj.len()
    }

    /// Removes `u` and connects every entering neighbor to every leaving
    /// neighbor, preserving all paths that passed through `u`.
    pub fn bypass_vertex(&self, u: VertexId) -> Result<DiGraph, GraphError> {
        let a = self.adj.get(&u).ok_or(GraphError::UnknownVertex(u))?;
        if a.out.contains(&u) {
            return Err(GraphError::SelfLoop(u));
        }
        let ins: Vec<VertexId> = a.inn.iter().copied().collect();
        let outs: Vec<VertexId> = a.out.iter().copied().collect();
        let mut g = self.remove_vertices(&BTreeSet::from([u]))?;
        for &p in &ins {
            for &q in &outs {
                if p != q {
                    g.add_edge(p, q)?;
                }
            }
        }
        Ok(g)
    }

    /// The seeds plus every vertex reachable from some seed by a directed
    /// path.
    pub fn reachable_from(
        &self,
        seeds: &BTreeSet<VertexId>,
    ) -> Result<BTreeSet<VertexId>, GraphError> {
        self.search(seeds, |a| &a.out)
    }

    /// The targets plus every vertex with a directed path to some target.
    pub fn co_reachable_to(
        &self,
        targets: &BTreeSet<VertexId>,
    ) -> Result<BTreeSet<VertexId>, GraphError> {
        self.search(targets, |a| &a.inn)
    }

    fn search(
        &self,
        seeds: &BTreeSet<VertexId>,
        dir: impl Fn(&Adjacency) -> &BTreeSet<VertexId>,
    ) -> Result<BTreeSet<VertexId>, GraphError> {
        self.check_vertices(seeds)?;
        let mut seen = seeds.clone();
        let mut stack: Vec<VertexId> = seeds.iter().copied().collect();
        while let Some(v) = stack.pop() {
            for &w in dir(&self.adj[&v]) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        Ok(seen)
    }

    /// The graph with every edge flipped.
    pub fn reverse(&self) -> DiGraph {
        let adj = self
            .adj
            .iter()
            .map(|(&v, a)| {
                (
                    v,
                    Adjacency {
                        out: a.inn.clone(),
                        inn: a.out.clone(),
                    },
                )
            })
            .collect();
        DiGraph {
            adj,
            edge_count: self.edge_count,
            next_id: self.next_id,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> DiGraph {
        DiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn ids(raw: &[u32]) -> BTreeSet<VertexId> {
        raw.iter().map(|&v| VertexId(v)).collect()
    }

    #[test]
    fn add_vertex_is_fresh_and_unique() {
        let mut g = DiGraph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let c = g.add_vertex();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 0);
        assert!(a != b && b != c && a != c);

        // ids of deleted vertices are never reused
        let g2 = g.remove_vertices(&BTreeSet::from([b])).unwrap();
        let mut g2 = g2;
        let d = g2.add_vertex();
        assert!(![a, b, c].contains(&d));
    }

    #[test]
    fn add_edge_set_semantics() {
        let mut g = DiGraph::new();
        let v = g.add_vertices(2);
        g.add_edge(v[0], v[1]).unwrap();
        g.add_edge(v[0], v[1]).unwrap();
        assert_eq!(g.edge_count(), 1);

        g.add_edge(v[0], v[0]).unwrap();
        assert!(g.has_self_loop(v[0]));

        assert_eq!(
            g.add_edge(v[0], VertexId(9)),
            Err(GraphError::UnknownVertex(VertexId(9)))
        );
    }

    #[test]
    fn remove_vertices_drops_incident_edges() {
        let g = triangle();
        let h = g.remove_vertices(&ids(&[1])).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(VertexId(2), VertexId(0))]);
        // input graph unchanged
        assert_eq!(g.edge_count(), 3);

        assert_eq!(g.remove_vertices(&BTreeSet::new()).unwrap(), g);

        let path = DiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let h = path.remove_vertices(&ids(&[0, 2])).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn remove_edges_keeps_vertices() {
        let g = triangle();
        let h = g.remove_edges(&BTreeSet::from([(VertexId(0), VertexId(1))]));
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 2);

        let all: BTreeSet<Edge> = g.edges().collect();
        let h = g.remove_edges(&all);
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 0);

        assert_eq!(g.remove_edges(&BTreeSet::new()), g);
        // absent edges are ignored
        let h = g.remove_edges(&BTreeSet::from([(VertexId(1), VertexId(0))]));
        assert_eq!(h.edge_count(), 3);
    }

    #[test]
    fn edge_subgraph_exact_edges() {
        let g = triangle();
        let h = g
            .edge_subgraph(&BTreeSet::from([(VertexId(0), VertexId(1))]))
            .unwrap();
        assert_eq!(h.vertex_set(), ids(&[0, 1]));
        assert_eq!(h.edge_count(), 1);

        let mut g2 = triangle();
        g2.add_vertex(); // isolated
        let all: BTreeSet<Edge> = g2.edges().collect();
        let h = g2.edge_subgraph(&all).unwrap();
        assert_eq!(h.vertex_set(), ids(&[0, 1, 2]));

        let h = g.edge_subgraph(&BTreeSet::new()).unwrap();
        assert_eq!(h.vertex_count(), 0);

        assert_eq!(
            g.edge_subgraph(&BTreeSet::from([(VertexId(1), VertexId(0))])),
            Err(GraphError::MissingEdge(VertexId(1), VertexId(0)))
        );
    }

    #[test]
    fn induced_subgraph_both_endpoints() {
        let g = triangle();
        let h = g.induced_subgraph(&ids(&[0, 1])).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(VertexId(0), VertexId(1))]);

        assert_eq!(g.induced_subgraph(&g.vertex_set()).unwrap(), g);
        assert_eq!(g.induced_subgraph(&BTreeSet::new()).unwrap().vertex_count(), 0);
    }

    #[test]
    fn acyclicity() {
        let path = DiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(path.is_acyclic());
        assert!(!triangle().is_acyclic());
        let looped = DiGraph::from_edges(1, &[(0, 0)]).unwrap();
        assert!(!looped.is_acyclic());
    }

    #[test]
    fn bypass_contracts_paths() {
        let path = DiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let h = path.bypass_vertex(VertexId(1)).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(VertexId(0), VertexId(2))]);

        // a -> u, b -> u, u -> c
        let star = DiGraph::from_edges(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        let h = star.bypass_vertex(VertexId(2)).unwrap();
        let es: BTreeSet<Edge> = h.edges().collect();
        assert_eq!(
            es,
            BTreeSet::from([(VertexId(0), VertexId(3)), (VertexId(1), VertexId(3))])
        );

        // existing edge not duplicated
        let g = DiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let h = g.bypass_vertex(VertexId(1)).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(VertexId(0), VertexId(2))]);

        let looped = DiGraph::from_edges(1, &[(0, 0)]).unwrap();
        assert_eq!(
            looped.bypass_vertex(VertexId(0)),
            Err(GraphError::SelfLoop(VertexId(0)))
        );
    }

    #[test]
    fn reachability() {
        let path = DiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.reachable_from(&ids(&[0])).unwrap(), ids(&[0, 1, 2]));
        assert_eq!(path.reachable_from(&ids(&[2])).unwrap(), ids(&[2]));
        assert_eq!(path.reachable_from(&BTreeSet::new()).unwrap(), BTreeSet::new());

        assert_eq!(path.co_reachable_to(&ids(&[2])).unwrap(), ids(&[0, 1, 2]));
        assert_eq!(path.co_reachable_to(&ids(&[0])).unwrap(), ids(&[0]));
    }
}
