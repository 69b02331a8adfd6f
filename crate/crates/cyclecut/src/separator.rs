//! Minimum vertex separators via unit-capacity max flow.
//!
//! `Sep(G, A, B)` is the smallest number of vertices outside `A ∪ B` whose
//! removal destroys every directed path from `A` to `B`; it is infinite
//! exactly when an edge runs directly from `A` to `B`. The computation uses
//! the classic vertex-splitting reduction: every removable vertex becomes an
//! in-node/out-node pair joined by a unit-capacity arc, original edges get
//! unbounded capacity, and the max-flow value equals the separator size.
//! The flow decomposition doubles as a family of internally vertex-disjoint
//! `A`→`B` paths witnessing optimality.
//!
//! The branching solver only ever compares separator sizes against its
//! remaining budget, so [`separator_size_bounded`] stops augmenting as soon
//! as the flow exceeds a caller-supplied cap.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{DiGraph, GraphError, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeparatorError {
    #[error("terminal sets must be nonempty")]
    EmptyTerminals,
    #[error("terminal sets overlap at {0}")]
    OverlappingTerminals(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A separator size: a finite count or the sentinel for "no vertex removal
/// can separate" (a direct terminal-to-terminal edge exists).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SeparatorSize {
    Finite(usize),
    Infinite,
}

impl SeparatorSize {
    pub fn is_finite(self) -> bool {
        matches!(self, SeparatorSize::Finite(_))
    }
}

/// A minimum separator together with its certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorResult {
    pub size: SeparatorSize,
    /// A minimum separating set; empty when `size` is `Infinite`.
    pub witness: BTreeSet<VertexId>,
    /// Internally vertex-disjoint `a`→`b` paths, one per unit of flow;
    /// `None` when `size` is `Infinite`.
    pub disjoint_paths: Option<Vec<Vec<VertexId>>>,
}

/// Unit-capacity split network. Node 0 is the contracted source (all of
/// `a`), node 1 the contracted sink (all of `b`); each removable vertex `i`
/// owns in-node `2 + 2i` and out-node `3 + 2i`.
struct SplitNetwork {
    removable: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    head: Vec<usize>,
    cap: Vec<u32>,
    /// Original graph edge behind a structural arc; `None` for split arcs.
    orig: Vec<Option<(VertexId, VertexId)>>,
}

const SOURCE: usize = 0;
const SINK: usize = 1;
const INF_CAP: u32 = u32::MAX / 2;

impl SplitNetwork {
    fn build(g: &DiGraph, a: &BTreeSet<VertexId>, b: &BTreeSet<VertexId>) -> Self {
        let removable: Vec<VertexId> = g
            .vertices()
            .filter(|v| !a.contains(v) && !b.contains(v))
            .collect();
        let mut net = SplitNetwork {
            adj: vec![Vec::new(); 2 + 2 * removable.len()],
            removable,
            head: Vec::new(),
            cap: Vec::new(),
            orig: Vec::new(),
        };
        let index: std::collections::BTreeMap<VertexId, usize> = net
            .removable
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        for i in 0..net.removable.len() {
            net.add_arc(2 + 2 * i, 3 + 2 * i, 1, None);
        }
        for (u, v) in g.edges() {
            // Edges entering `a` or leaving `b` lie on no clean a→b path;
            // self-loops never lie on one either.
            if u == v || a.contains(&v) || b.contains(&u) {
                continue;
            }
            let tail = if a.contains(&u) { SOURCE } else { 3 + 2 * index[&u] };
            let hd = if b.contains(&v) { SINK } else { 2 + 2 * index[&v] };
            net.add_arc(tail, hd, INF_CAP, Some((u, v)));
        }
        net
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: u32, orig: Option<(VertexId, VertexId)>) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.orig.push(orig);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
        self.orig.push(None);
    }

    /// Edmonds–Karp restricted to unit augmentations (every source→sink path
    /// crosses a unit split arc). Stops once `flow > limit` if given.
    fn max_flow(&mut self, limit: Option<usize>) -> usize {
        let mut flow = 0;
        loop {
            if limit.is_some_and(|l| flow > l) {
                return flow;
            }
            let Some(parent) = self.bfs() else {
                return flow;
            };
            let mut node = SINK;
            while node != SOURCE {
                let arc = parent[node];
                self.cap[arc] -= 1;
                self.cap[arc ^ 1] += 1;
                node = self.head[arc ^ 1];
            }
            flow += 1;
        }
    }

    fn bfs(&self) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        parent[SOURCE] = 0;
        let mut queue = std::collections::VecDeque::from([SOURCE]);
        while let Some(node) = queue.pop_front() {
            for &arc in &self.adj[node] {
                let to = self.head[arc];
                if self.cap[arc] > 0 && parent[to] == usize::MAX {
                    parent[to] = arc;
                    if to == SINK {
                        return Some(parent);
                    }
                    queue.push_back(to);
                }
            }
        }
        None
    }

    /// Min-cut reading: the separator is every removable vertex whose
    /// in-node is residually reachable from the source while its out-node
    /// is not.
    fn cut_witness(&self) -> BTreeSet<VertexId> {
        let mut seen = vec![false; self.adj.len()];
        seen[SOURCE] = true;
        let mut stack = vec![SOURCE];
        while let Some(node) = stack.pop() {
            for &arc in &self.adj[node] {
                let to = self.head[arc];
                if self.cap[arc] > 0 && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        self.removable
            .iter()
            .enumerate()
            .filter(|(i, _)| seen[2 + 2 * i] && !seen[3 + 2 * i])
            .map(|(_, &v)| v)
            .collect()
    }

    /// Decomposes the flow into one original-graph path per unit.
    fn flow_paths(&self) -> Vec<Vec<VertexId>> {
        // residual cap on the reverse arc equals the flow pushed forward
        let mut used: Vec<u32> = (0..self.head.len())
            .map(|e| if e % 2 == 0 { self.cap[e ^ 1] } else { 0 })
            .collect();
        let mut paths = Vec::new();
        loop {
            let Some(&first) = self.adj[SOURCE]
                .iter()
                .find(|&&e| e % 2 == 0 && used[e] > 0)
            else {
                return paths;
            };
            let mut path = vec![self.orig[first].unwrap().0];
            let mut arc = first;
            loop {
                used[arc] -= 1;
                if let Some((_, v)) = self.orig[arc] {
                    path.push(v);
                }
                let node = self.head[arc];
                if node == SINK {
                    break;
                }
                arc = *self.adj[node]
                    .iter()
                    .find(|&&e| e % 2 == 0 && used[e] > 0)
                    .expect("flow conservation");
            }
            paths.push(path);
        }
    }
}

fn validate(
    g: &DiGraph,
    a: &BTreeSet<VertexId>,
    b: &BTreeSet<VertexId>,
) -> Result<(), SeparatorError> {
    if a.is_empty() || b.is_empty() {
        return Err(SeparatorError::EmptyTerminals);
    }
    for &v in a.iter().chain(b) {
        if !g.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v).into());
        }
    }
    if let Some(&v) = a.intersection(b).next() {
        return Err(SeparatorError::OverlappingTerminals(v));
    }
    Ok(())
}

fn direct_edge(g: &DiGraph, a: &BTreeSet<VertexId>, b: &BTreeSet<VertexId>) -> bool {
    a.iter()
        .any(|&u| g.out_neighbors(u).unwrap().intersection(b).next().is_some())
}

/// Computes `Sep(g, a, b)` with a witness set attaining it and the
/// internally vertex-disjoint path family certifying optimality.
pub fn min_vertex_separator(
    g: &DiGraph,
    a: &BTreeSet<VertexId>,
    b: &BTreeSet<VertexId>,
) -> Result<SeparatorResult, SeparatorError> {
    validate(g, a, b)?;
    if direct_edge(g, a, b) {
        return Ok(SeparatorResult {
            size: SeparatorSize::Infinite,
            witness: BTreeSet::new(),
            disjoint_paths: None,
        });
    }
    let mut net = SplitNetwork::build(g, a, b);
    let flow = net.max_flow(None);
    Ok(SeparatorResult {
        size: SeparatorSize::Finite(flow),
        witness: net.cut_witness(),
        disjoint_paths: Some(net.flow_paths()),
    })
}

/// Exact `Sep(g, a, b)` when it is at most `cap`, `None` otherwise
/// (including the infinite case). Runs at most `cap + 1` augmentations.
pub fn separator_size_bounded(
    g: &DiGraph,
    a: &BTreeSet<VertexId>,
    b: &BTreeSet<VertexId>,
    cap: usize,
) -> Result<Option<usize>, SeparatorError> {
    validate(g, a, b)?;
    if direct_edge(g, a, b) {
        return Ok(None);
    }
    let flow = SplitNetwork::build(g, a, b).max_flow(Some(cap));
    Ok(if flow > cap { None } else { Some(flow) })
}

/// `Sep` of the graph with `u` bypassed, without making the caller
/// materialize the bypass graph itself.
pub fn separator_size_after_bypass(
    g: &DiGraph,
    u: VertexId,
    a: &BTreeSet<VertexId>,
    b: &BTreeSet<VertexId>,
) -> Result<SeparatorSize, SeparatorError> {
    if a.contains(&u) || b.contains(&u) {
        return Err(SeparatorError::OverlappingTerminals(u));
    }
    let bypassed = g.bypass_vertex(u)?;
    Ok(min_vertex_separator(&bypassed, a, b)?.size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_min_separator;
    use proptest::prelude::*;

    fn ids(raw: &[u32]) -> BTreeSet<VertexId> {
        raw.iter().map(|&v| VertexId(v)).collect()
    }

    #[test]
    fn diamond_needs_both_midpoints() {
        // x=0, p=1, q=2, y=3
        let g = DiGraph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let r = min_vertex_separator(&g, &ids(&[0]), &ids(&[3])).unwrap();
        assert_eq!(r.size, SeparatorSize::Finite(2));
        assert_eq!(r.witness, ids(&[1, 2]));
        assert_eq!(r.disjoint_paths.unwrap().len(), 2);
    }

    #[test]
    fn direct_edge_is_infinite() {
        let g = DiGraph::from_edges(2, &[(0, 1)]).unwrap();
        let r = min_vertex_separator(&g, &ids(&[0]), &ids(&[1])).unwrap();
        assert_eq!(r.size, SeparatorSize::Infinite);
        assert!(r.witness.is_empty());
        assert!(r.disjoint_paths.is_none());
    }

    #[test]
    fn disconnected_terminals_need_nothing() {
        let mut g = DiGraph::new();
        let v = g.add_vertices(2);
        let r = min_vertex_separator(&g, &BTreeSet::from([v[0]]), &BTreeSet::from([v[1]])).unwrap();
        assert_eq!(r.size, SeparatorSize::Finite(0));
        assert!(r.witness.is_empty());
        assert_eq!(r.disjoint_paths.unwrap().len(), 0);
    }

    #[test]
    fn invalid_terminals_rejected() {
        let g = DiGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(
            min_vertex_separator(&g, &BTreeSet::new(), &ids(&[1])),
            Err(SeparatorError::EmptyTerminals)
        );
        assert_eq!(
            min_vertex_separator(&g, &ids(&[0]), &ids(&[0])),
            Err(SeparatorError::OverlappingTerminals(VertexId(0)))
        );
        assert!(min_vertex_separator(&g, &ids(&[0]), &ids(&[7])).is_err());
    }

    #[test]
    fn bypass_size_examples() {
        // x -> u -> y: bypassing u creates the direct edge
        let g = DiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            min_vertex_separator(&g, &ids(&[0]), &ids(&[2])).unwrap().size,
            SeparatorSize::Finite(1)
        );
        assert_eq!(
            separator_size_after_bypass(&g, VertexId(1), &ids(&[0]), &ids(&[2])).unwrap(),
            SeparatorSize::Infinite
        );

        // x -> u -> v -> y: v still cuts after bypassing u
        let g = DiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            separator_size_after_bypass(&g, VertexId(1), &ids(&[0]), &ids(&[3])).unwrap(),
            SeparatorSize::Finite(1)
        );
    }

    #[test]
    fn bounded_mode_matches_full() {
        let g = DiGraph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let (a, b) = (ids(&[0]), ids(&[3]));
        assert_eq!(separator_size_bounded(&g, &a, &b, 0).unwrap(), None);
        assert_eq!(separator_size_bounded(&g, &a, &b, 1).unwrap(), None);
        assert_eq!(separator_size_bounded(&g, &a, &b, 2).unwrap(), Some(2));
        assert_eq!(separator_size_bounded(&g, &a, &b, 5).unwrap(), Some(2));

        let h = DiGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(separator_size_bounded(&h, &ids(&[0]), &ids(&[1]), 9).unwrap(), None);
    }

    /// Deterministic pick of two disjoint nonempty terminal sets.
    fn pick_terminals(g: &DiGraph, pick: u64) -> Option<(BTreeSet<VertexId>, BTreeSet<VertexId>)> {
        let vs: Vec<VertexId> = g.vertices().collect();
        if vs.len() < 2 {
            return None;
        }
        let mut a = BTreeSet::new();
        let mut b = BTreeSet::new();
        for (i, &v) in vs.iter().enumerate() {
            match pick >> (2 * i) & 3 {
                1 => {
                    a.insert(v);
                }
                2 => {
                    b.insert(v);
                }
                _ => {}
            }
        }
        if a.is_empty() || b.is_empty() {
            return None;
        }
        Some((a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn matches_brute_force_on_small_digraphs(
            n in 2usize..=7,
            mask: u64,
            pick: u64,
        ) {
            let g = crate::graph::props::graph_from_mask(n, mask);
            let Some((a, b)) = pick_terminals(&g, pick) else {
                return Ok(());
            };
            let fast = min_vertex_separator(&g, &a, &b).unwrap();
            let brute = brute_min_separator(&g, &a, &b).unwrap();
            prop_assert_eq!(fast.size, brute.size);

            if let SeparatorSize::Finite(size) = fast.size {
                // Menger consistency: matching path family and witness size.
                prop_assert_eq!(fast.witness.len(), size);
                let paths = fast.disjoint_paths.as_ref().unwrap();
                prop_assert_eq!(paths.len(), size);
                let mut interior_seen = BTreeSet::new();
                for path in paths {
                    prop_assert!(a.contains(&path[0]));
                    prop_assert!(b.contains(path.last().unwrap()));
                    for w in path.windows(2) {
                        prop_assert!(g.contains_edge(w[0], w[1]));
                    }
                    for &v in &path[1..path.len() - 1] {
                        prop_assert!(interior_seen.insert(v), "paths share {}", v);
                    }
                }
                // removing the witness kills every a→b path
                let rest = g.remove_vertices(&fast.witness).unwrap();
                let reach = rest.reachable_from(&a).unwrap();
                prop_assert!(reach.intersection(&b).next().is_none());
            }
        }

        #[test]
        fn monotone_under_bypass_and_deletion(n in 3usize..=6, mask: u64, pick: u64, uix: usize) {
            let g = crate::graph::props::graph_from_mask(n, mask);
            let Some((a, b)) = pick_terminals(&g, pick) else {
                return Ok(());
            };
            let free: Vec<VertexId> = g
                .vertices()
                .filter(|v| !a.contains(v) && !b.contains(v) && !g.has_self_loop(*v))
                .collect();
            if free.is_empty() {
                return Ok(());
            }
            let u = free[uix % free.len()];
            let base = min_vertex_separator(&g, &a, &b).unwrap().size;

            let after_bypass = separator_size_after_bypass(&g, u, &a, &b).unwrap();
            prop_assert!(after_bypass >= base);
            // agrees with the oracle on an explicitly built bypass graph
            let explicit = g.bypass_vertex(u).unwrap();
            prop_assert_eq!(after_bypass, brute_min_separator(&explicit, &a, &b).unwrap().size);

            let deleted = g.remove_vertices(&BTreeSet::from([u])).unwrap();
            let after_delete = min_vertex_separator(&deleted, &a, &b).unwrap().size;
            if let (SeparatorSize::Finite(s), SeparatorSize::Finite(d)) = (base, after_delete) {
                prop_assert!(d + 1 >= s);
            }
        }
    }
}
