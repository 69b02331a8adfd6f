//! Ordered multicut in a DAG.
//!
//! An instance is a DAG with two equal-length terminal sequences
//! `x_1..x_l` and `y_1..y_l` and a budget `k`. A set `R` of non-terminal
//! vertices *orderly separates* the terminals if deleting it leaves no path
//! from `x_i` to `y_j` for any `i ≥ j`; the task is to find such a set of
//! size at most `k` or decide that none exists.
//!
//! [`normalize_terminals`] rewrites an arbitrary instance into one where
//! every `x_i` is minimal and every `y_i` is maximal without changing which
//! sets orderly separate. [`find_cut`] then runs the separator-guided
//! branching search: compare `Sep(G, x_l, Y)` against the budget, shrink
//! the graph by bypassing a leaving neighbor of `x_l` whenever that keeps
//! the separator size unchanged, and branch on delete-vs-bypass otherwise.
//! The search tree of a budget-`k` call has at most `2^(2k+1)` leaves,
//! which [`SearchStats`] instruments.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{DiGraph, GraphError, VertexId};
use crate::separator::{
    min_vertex_separator, separator_size_bounded, SeparatorError, SeparatorSize,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdmcError {
    #[error("graph has a directed cycle")]
    CyclicGraph,
    #[error("terminal sequences must have equal nonzero length")]
    BadTerminalLength,
    #[error("terminal {0} appears more than once")]
    DuplicateTerminal(VertexId),
    #[error("cut set contains terminal {0}")]
    TerminalInCut(VertexId),
    #[error("terminal {0} is not minimal/maximal; normalize first")]
    NotNormalized(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Separator(#[from] SeparatorError),
}

/// The ordered terminal sequences of an instance. Both sequences have the
/// same length, contain no duplicates, and are disjoint as sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalSystem {
    xs: Vec<VertexId>,
    ys: Vec<VertexId>,
}

impl TerminalSystem {
    pub fn new(xs: Vec<VertexId>, ys: Vec<VertexId>) -> Result<Self, OrdmcError> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(OrdmcError::BadTerminalLength);
        }
        let mut seen = BTreeSet::new();
        for &v in xs.iter().chain(&ys) {
            if !seen.insert(v) {
                return Err(OrdmcError::DuplicateTerminal(v));
            }
        }
        Ok(Self { xs, ys })
    }

    /// Number of terminal pairs; at least one by construction.
    pub fn pair_count(&self) -> usize {
        self.xs.len()
    }

    pub fn xs(&self) -> &[VertexId] {
        &self.xs
    }

    pub fn ys(&self) -> &[VertexId] {
        &self.ys
    }

    /// All terminals as a set.
    pub fn all(&self) -> BTreeSet<VertexId> {
        self.xs.iter().chain(&self.ys).copied().collect()
    }

    fn check_membership(&self, g: &DiGraph) -> Result<(), OrdmcError> {
        for &v in self.xs.iter().chain(&self.ys) {
            if !g.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v).into());
            }
        }
        Ok(())
    }
}

/// A validated instance: an acyclic graph, terminals that live in it, and
/// a budget.
#[derive(Debug, Clone)]
pub struct OrdMcInstance {
    pub graph: DiGraph,
    pub terminals: TerminalSystem,
    pub k: usize,
}

impl OrdMcInstance {
    pub fn new(graph: DiGraph, terminals: TerminalSystem, k: usize) -> Result<Self, OrdmcError> {
        if !graph.is_acyclic() {
            return Err(OrdmcError::CyclicGraph);
        }
        terminals.check_membership(&graph)?;
        Ok(Self { graph, terminals, k })
    }
}

/// Either a witness cut set or the answer that none of size ≤ k exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutResult {
    Solution(BTreeSet<VertexId>),
    No,
}

impl CutResult {
    pub fn is_solution(&self) -> bool {
        matches!(self, CutResult::Solution(_))
    }

    pub fn solution(&self) -> Option<&BTreeSet<VertexId>> {
        match self {
            CutResult::Solution(s) => Some(s),
            CutResult::No => None,
        }
    }
}

/// Search-tree counters, threaded explicitly through the recursion.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    /// Recursive entries of the branching search.
    pub nodes: u64,
    /// Entries that returned without recursing.
    pub leaves: u64,
    /// Separator (flow) computations.
    pub flow_calls: u64,
    /// Bypass steps that kept the separator size unchanged.
    pub shrink_steps: u64,
    /// Two-way delete-vs-bypass branchings.
    pub branch_steps: u64,
    /// Terminal orderings tried by the compression driver.
    pub orderings_tried: u64,
    /// Top-level calls whose leaf count exceeded the `2^(2k+1)` bound.
    pub leaf_bound_violations: u64,
}

/// True iff `g ∖ r` has no path from `x_i` to `y_j` for any pair `i ≥ j`.
pub fn check_ordered_separation(
    g: &DiGraph,
    t: &TerminalSystem,
    r: &BTreeSet<VertexId>,
) -> Result<bool, OrdmcError> {
    t.check_membership(g)?;
    let terminals = t.all();
    for &v in r {
        if !g.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v).into());
        }
        if terminals.contains(&v) {
            return Err(OrdmcError::TerminalInCut(v));
        }
    }
    let rest = g.remove_vertices(r)?;
    for (i, &x) in t.xs.iter().enumerate() {
        let reach = rest.reachable_from(&BTreeSet::from([x]))?;
        if t.ys[..=i].iter().any(|y| reach.contains(y)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rewrites the instance so that every `x_i` has no entering edge and every
/// `y_i` has no leaving edge, preserving exactly which non-terminal sets
/// orderly separate the terminals.
///
/// Connectivity that ran through terminals is preserved by adding, for
/// every ordered pair `(u, v)`, an edge whenever the original graph has a
/// `u`→`v` path all of whose interior vertices are terminals; edges
/// entering an `x_i` or leaving a `y_i` are then dropped. The result is a
/// subgraph of the transitive closure, hence still acyclic, on the same
/// vertex set.
pub fn normalize_terminals(g: &DiGraph, t: &TerminalSystem) -> Result<DiGraph, OrdmcError> {
    if !g.is_acyclic() {
        return Err(OrdmcError::CyclicGraph);
    }
    t.check_membership(g)?;
    let terminals = t.all();
    let xset: BTreeSet<VertexId> = t.xs.iter().copied().collect();
    let yset: BTreeSet<VertexId> = t.ys.iter().copied().collect();

    // same vertex set and identities, edges rebuilt from scratch
    let mut out = g.remove_edges(&g.edges().collect());

    for u in g.vertices() {
        // vertices reachable from u through terminal-only interiors
        let mut seen = BTreeSet::from([u]);
        let mut stack = vec![u];
        while let Some(w) = stack.pop() {
            if w != u && !terminals.contains(&w) {
                continue; // non-terminals stop the walk
            }
            for &v in g.out_neighbors(w).unwrap() {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen.remove(&u);
        for v in seen {
            if xset.contains(&v) || yset.contains(&u) {
                continue; // entering X or leaving Y
            }
            out.add_edge(u, v)?;
        }
    }
    debug_assert!(out.is_acyclic());
    Ok(out)
}

/// Checks that the instance is legal for [`find_cut`]: acyclic graph,
/// terminals present, every `x_i` minimal and every `y_i` maximal.
fn check_legal(g: &DiGraph, t: &TerminalSystem) -> Result<(), OrdmcError> {
    if !g.is_acyclic() {
        return Err(OrdmcError::CyclicGraph);
    }
    t.check_membership(g)?;
    for &x in &t.xs {
        if !g.in_neighbors(x)?.is_empty() {
            return Err(OrdmcError::NotNormalized(x));
        }
    }
    for &y in &t.ys {
        if !g.out_neighbors(y)?.is_empty() {
            return Err(OrdmcError::NotNormalized(y));
        }
    }
    Ok(())
}

/// The branching search. Requires a legal input (see [`normalize_terminals`]);
/// returns a ≤ `k`-size orderly separating set or `No` iff none exists.
pub fn find_cut(
    g: &DiGraph,
    t: &TerminalSystem,
    k: usize,
    stats: &mut SearchStats,
) -> Result<CutResult, OrdmcError> {
    check_legal(g, t)?;
    let leaves_before = stats.leaves;
    let result = find_cut_inner(g.clone(), &t.xs, &t.ys, k, stats);

    let bound = 1u64 << (2 * k as u64 + 1).min(63);
    if stats.leaves - leaves_before > bound {
        stats.leaf_bound_violations += 1;
    }
    #[cfg(debug_assertions)]
    if let CutResult::Solution(r) = &result {
        debug_assert!(r.len() <= k);
        debug_assert!(check_ordered_separation(g, t, r).unwrap());
    }
    Ok(result)
}

fn find_cut_inner(
    g: DiGraph,
    xs: &[VertexId],
    ys: &[VertexId],
    k: usize,
    stats: &mut SearchStats,
) -> CutResult {
    stats.nodes += 1;
    let x_last = *xs.last().unwrap();
    let yset: BTreeSet<VertexId> = ys.iter().copied().collect();

    // base case: a single pair degenerates to plain separation
    if xs.len() == 1 {
        stats.leaves += 1;
        stats.flow_calls += 1;
        let sep = min_vertex_separator(&g, &BTreeSet::from([x_last]), &yset)
            .expect("legal inputs have valid terminals");
        return match sep.size {
            SeparatorSize::Finite(n) if n <= k => CutResult::Solution(sep.witness),
            _ => CutResult::No,
        };
    }

    // cutoff: x_l alone already needs more than the whole budget
    stats.flow_calls += 1;
    let Some(sep) = separator_size_bounded(&g, &BTreeSet::from([x_last]), &yset, k)
        .expect("legal inputs have valid terminals")
    else {
        stats.leaves += 1;
        return CutResult::No;
    };

    // a source pair that no longer interacts can be dropped
    let leaving = g.out_neighbors(x_last).unwrap();
    if leaving.is_empty() {
        let y_last = *ys.last().unwrap();
        let next = g
            .remove_vertices(&BTreeSet::from([x_last, y_last]))
            .unwrap();
        return find_cut_inner(next, &xs[..xs.len() - 1], &ys[..ys.len() - 1], k, stats);
    }

    let u = *leaving.first().unwrap();
    let bypassed = g.bypass_vertex(u).unwrap();

    // shrink: bypassing u does not change Sep(G, x_l, Y), so it cannot be
    // needed in an optimal cut and the graph shrinks for free
    stats.flow_calls += 1;
    let sep_bypassed = separator_size_bounded(&bypassed, &BTreeSet::from([x_last]), &yset, sep)
        .expect("legal inputs have valid terminals");
    if sep_bypassed == Some(sep) {
        stats.shrink_steps += 1;
        return find_cut_inner(bypassed, xs, ys, k, stats);
    }

    // branch: u in the cut (delete, budget shrinks) or out (bypass)
    stats.branch_steps += 1;
    debug_assert!(k > 0, "budget exhausted only after the cutoff fires");
    let deleted = g.remove_vertices(&BTreeSet::from([u])).unwrap();
    drop(g);
    if let CutResult::Solution(mut cut) = find_cut_inner(deleted, xs, ys, k - 1, stats) {
        cut.insert(u);
        return CutResult::Solution(cut);
    }
    find_cut_inner(bypassed, xs, ys, k, stats)
}

/// Top-level entry: normalizes the terminals, runs the search, and returns
/// the result together with the search statistics. A returned solution is
/// valid in the original (un-normalized) graph.
pub fn solve_ordmc(
    g: &DiGraph,
    t: &TerminalSystem,
    k: usize,
) -> Result<(CutResult, SearchStats), OrdmcError> {
    let instance = OrdMcInstance::new(g.clone(), t.clone(), k)?;
    let normalized = normalize_terminals(&instance.graph, t)?;
    let mut stats = SearchStats::default();
    let result = find_cut(&normalized, t, k, &mut stats)?;
    #[cfg(debug_assertions)]
    if let CutResult::Solution(r) = &result {
        debug_assert!(check_ordered_separation(g, t, r).unwrap());
    }
    Ok((result, stats))
}
