//! Directed feedback vertex set by iterative compression.
//!
//! [`solve_dfvs`] inserts the vertices one at a time and maintains a
//! feedback vertex set of size at most `k` for the graph seen so far. When
//! an insertion pushes the set to size `k + 1`, [`compression_step`]
//! guesses the overlap between the old set and some smaller one, and
//! [`replace_dfvs`] looks for the disjoint remainder.
//!
//! The disjoint search is where the reduction to ordered multicut happens:
//! for each ordering of the old set `S`, [`build_auxiliary_instance`]
//! removes every edge entering `S`, attaches one fresh sink `t_i` per
//! position fed by the vertices that reached `s_i` through those removed
//! edges, and asks the multicut solver to orderly separate the ordering
//! from the sinks. A cut of the auxiliary instance is exactly a feedback
//! vertex set of the original graph disjoint from `S`, and some ordering
//! admits one whenever such a set exists.

use std::collections::BTreeSet;

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{DiGraph, Edge, GraphError, VertexId};
use crate::ordmc::{find_cut, CutResult, OrdmcError, SearchStats, TerminalSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DfvsError {
    #[error("the given set is not a feedback vertex set")]
    NotADfvs,
    #[error("ordering must enumerate the set exactly once")]
    InvalidOrdering,
    #[error("expected a set of size {expected}, got {got}")]
    WrongSetSize { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ordmc(#[from] OrdmcError),
}

/// Solver output: the witness set or `No`, plus the aggregate search
/// statistics over every multicut call made along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfvsResult {
    pub result: CutResult,
    pub stats: SearchStats,
}

/// True iff removing `s` leaves the graph acyclic.
pub fn is_dfvs(g: &DiGraph, s: &BTreeSet<VertexId>) -> Result<bool, GraphError> {
    Ok(g.remove_vertices(s)?.is_acyclic())
}

/// All edges whose head lies in `s` (self-loops on members included).
pub fn entering_edge_set(g: &DiGraph, s: &BTreeSet<VertexId>) -> BTreeSet<Edge> {
    g.edges().filter(|(_, v)| s.contains(v)).collect()
}

/// Builds the ordered multicut instance for one ordering of a feedback
/// vertex set: the graph without the edges entering the set, plus one
/// fresh sink per position, fed by every outside vertex that reached that
/// position through the removed edges.
pub fn build_auxiliary_instance(
    g: &DiGraph,
    ordering: &[VertexId],
) -> Result<(DiGraph, TerminalSystem), DfvsError> {
    let s: BTreeSet<VertexId> = ordering.iter().copied().collect();
    if s.len() != ordering.len() {
        return Err(DfvsError::InvalidOrdering);
    }
    for &v in &s {
        if !g.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v).into());
        }
    }
    let es = entering_edge_set(g, &s);
    let stripped = g.remove_edges(&es);
    if !stripped.is_acyclic() {
        return Err(DfvsError::NotADfvs);
    }
    let entering_sub = g.edge_subgraph(&es)?;

    let mut aux = stripped;
    let mut sinks = Vec::with_capacity(ordering.len());
    for &s_i in ordering {
        let feeders: BTreeSet<VertexId> = if entering_sub.contains_vertex(s_i) {
            entering_sub
                .co_reachable_to(&BTreeSet::from([s_i]))?
                .into_iter()
                .filter(|w| !s.contains(w))
                .collect()
        } else {
            BTreeSet::new() // s_i has no entering edges at all
        };
        let t_i = aux.add_vertex();
        for w in feeders {
            aux.add_edge(w, t_i)?;
        }
        sinks.push(t_i);
    }
    let terminals = TerminalSystem::new(ordering.to_vec(), sinks)?;
    Ok((aux, terminals))
}

/// Given a feedback vertex set `s` of `g`, finds one disjoint from `s` and
/// strictly smaller, or `No` if none exists.
pub fn replace_dfvs(
    g: &DiGraph,
    s: &BTreeSet<VertexId>,
    stats: &mut SearchStats,
) -> Result<CutResult, DfvsError> {
    if !is_dfvs(g, s)? {
        return Err(DfvsError::NotADfvs);
    }
    if g.is_acyclic() {
        return Ok(CutResult::Solution(BTreeSet::new()));
    }
    // a cycle made of entering edges lies wholly inside s: nothing
    // disjoint from s can hit it
    let es = entering_edge_set(g, s);
    if !g.edge_subgraph(&es)?.is_acyclic() {
        return Ok(CutResult::No);
    }
    let sorted: Vec<VertexId> = s.iter().copied().collect();
    let m = sorted.len();
    for ordering in sorted.into_iter().permutations(m) {
        stats.orderings_tried += 1;
        let (aux, terminals) = build_auxiliary_instance(g, &ordering)?;
        if let CutResult::Solution(r) = find_cut(&aux, &terminals, m - 1, stats)? {
            debug_assert!(r.is_disjoint(s) && r.len() < m);
            debug_assert!(is_dfvs(g, &r).unwrap());
            return Ok(CutResult::Solution(r));
        }
    }
    Ok(CutResult::No)
}

/// One compression: given a feedback vertex set of size `k + 1`, finds one
/// of size at most `k` or `No`. Tries every guess `F` of the overlap with
/// a smaller set, by increasing size and lexicographically within a size.
pub fn compression_step(
    g: &DiGraph,
    s_prime: &BTreeSet<VertexId>,
    k: usize,
    stats: &mut SearchStats,
) -> Result<CutResult, DfvsError> {
    if s_prime.len() != k + 1 {
        return Err(DfvsError::WrongSetSize {
            expected: k + 1,
            got: s_prime.len(),
        });
    }
    if !is_dfvs(g, s_prime)? {
        return Err(DfvsError::NotADfvs);
    }
    let members: Vec<VertexId> = s_prime.iter().copied().collect();
    // size k + 1 is skipped: keeping all of s_prime cannot get below k
    for size in 0..=k {
        for kept in members.iter().copied().combinations(size) {
            let f: BTreeSet<VertexId> = kept.into_iter().collect();
            let rest: BTreeSet<VertexId> = s_prime.difference(&f).copied().collect();
            let shrunk = g.remove_vertices(&f)?;
            if let CutResult::Solution(found) = replace_dfvs(&shrunk, &rest, stats)? {
                let solution: BTreeSet<VertexId> = f.union(&found).copied().collect();
                debug_assert!(solution.len() <= k);
                return Ok(CutResult::Solution(solution));
            }
        }
    }
    Ok(CutResult::No)
}

/// Solves parameterized directed feedback vertex set: a set of at most `k`
/// vertices whose removal makes `g` acyclic, or `No` if none exists.
pub fn solve_dfvs(g: &DiGraph, k: usize) -> DfvsResult {
    let mut stats = SearchStats::default();
    let order: Vec<VertexId> = g.vertices().collect();
    let mut current: BTreeSet<VertexId> = BTreeSet::new();
    let mut prefix: BTreeSet<VertexId> = BTreeSet::new();

    for &v in &order {
        prefix.insert(v);
        let seen = g.induced_subgraph(&prefix).expect("prefix of the graph");
        if is_dfvs(&seen, &current).expect("current lives in the prefix") {
            // keep
        } else if current.len() < k {
            current.insert(v);
        } else {
            let mut grown = current.clone();
            grown.insert(v);
            match compression_step(&seen, &grown, k, &mut stats)
                .expect("grown set is a feedback vertex set of the prefix")
            {
                CutResult::Solution(smaller) => current = smaller,
                CutResult::No => {
                    return DfvsResult {
                        result: CutResult::No,
                        stats,
                    }
                }
            }
        }
        debug_assert!(current.len() <= k);
        debug_assert!(is_dfvs(&seen, &current).unwrap());
    }

    DfvsResult {
        result: CutResult::Solution(current),
        stats,
    }
}
