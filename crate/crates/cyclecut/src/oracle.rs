//! Brute-force reference solvers.
//!
//! Everything here is intentionally exponential and restricted to
//! desk-scale inputs: these are the ground truth that the real solvers are
//! differentially tested against, so they must stay obviously correct.
//! Enumeration order is part of the contract — subsets by increasing size,
//! lexicographic within a size — so expected values frozen in tests are
//! reproducible bit for bit.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::dfvs::is_dfvs;
use crate::graph::{DiGraph, VertexId};
use crate::ordmc::{check_ordered_separation, CutResult, OrdmcError, TerminalSystem};
use crate::separator::{SeparatorResult, SeparatorSize};

/// Largest graph the oracles accept.
pub const ORACLE_VERTEX_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for brute force: {0} vertices (cap {ORACLE_VERTEX_CAP})")]
    InstanceTooLarge(usize),
    #[error(transparent)]
    Ordmc(#[from] OrdmcError),
}

fn check_size(g: &DiGraph) -> Result<(), OracleError> {
    if g.vertex_count() > ORACLE_VERTEX_CAP {
        return Err(OracleError::InstanceTooLarge(g.vertex_count()));
    }
    Ok(())
}

/// Subsets of `pool` by increasing size up to `max_size`, lexicographic
/// within a size.
fn subsets_by_size(
    pool: Vec<VertexId>,
    max_size: usize,
) -> impl Iterator<Item = BTreeSet<VertexId>> {
    (0..=max_size.min(pool.len())).flat_map(move |size| {
        pool.clone()
            .into_iter()
            .combinations(size)
            .map(|c| c.into_iter().collect())
    })
}

/// Smallest feedback vertex set of size at most `max_size`, found by
/// exhaustive enumeration.
pub fn brute_min_dfvs(g: &DiGraph, max_size: usize) -> Result<CutResult, OracleError> {
    check_size(g)?;
    let pool: Vec<VertexId> = g.vertices().collect();
    for s in subsets_by_size(pool, max_size) {
        if is_dfvs(g, &s).expect("subset of the vertex set") {
            return Ok(CutResult::Solution(s));
        }
    }
    Ok(CutResult::No)
}

/// Smallest orderly separating set of size at most `k`, found by
/// exhaustive enumeration over non-terminal subsets.
pub fn brute_ordered_multicut(
    g: &DiGraph,
    t: &TerminalSystem,
    k: usize,
) -> Result<CutResult, OracleError> {
    check_size(g)?;
    let terminals = t.all();
    let pool: Vec<VertexId> = g.vertices().filter(|v| !terminals.contains(v)).collect();
    for r in subsets_by_size(pool, k) {
        if check_ordered_separation(g, t, &r)? {
            return Ok(CutResult::Solution(r));
        }
    }
    Ok(CutResult::No)
}

/// Exhaustive minimum vertex separator; no path certificates.
pub fn brute_min_separator(
    g: &DiGraph,
    a: &BTreeSet<VertexId>,
    b: &BTreeSet<VertexId>,
) -> Result<SeparatorResult, OracleError> {
    check_size(g)?;
    let direct = a
        .iter()
        .any(|&u| g.out_neighbors(u).unwrap().intersection(b).next().is_some());
    if direct {
        return Ok(SeparatorResult {
            size: SeparatorSize::Infinite,
            witness: BTreeSet::new(),
            disjoint_paths: None,
        });
    }
    let pool: Vec<VertexId> = g
        .vertices()
        .filter(|v| !a.contains(v) && !b.contains(v))
        .collect();
    let pool_len = pool.len();
    for r in subsets_by_size(pool, pool_len) {
        let rest = g.remove_vertices(&r).expect("subset of the vertex set");
        let reach = rest.reachable_from(a).expect("terminals survive removal");
        if reach.intersection(b).next().is_none() {
            return Ok(SeparatorResult {
                size: SeparatorSize::Finite(r.len()),
                witness: r,
                disjoint_paths: None,
            });
        }
    }
    unreachable!("removing every non-terminal separates unless a direct edge exists")
}

/// Small digraphs over the full ordered-pair edge universe, self-loops
/// included. Exhaustive for `n ≤ 4` (the `count` argument is ignored
/// there); seeded uniform edge-subset samples of `count` graphs otherwise.
pub fn enumerate_small_digraphs(n: usize, seed: u64, count: usize) -> Box<dyn Iterator<Item = DiGraph>> {
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|u| (0..n as u32).map(move |v| (u, v)))
        .collect();
    if n <= 4 {
        let iter = (0u64..1 << pairs.len()).map(move |mask| {
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            DiGraph::from_edges(n, &edges).expect("labels in range")
        });
        Box::new(iter)
    } else {
        let mut rng = StdRng::seed_from_u64(seed);
        let iter = (0..count).map(move |_| {
            let edges: Vec<(u32, u32)> = pairs.iter().filter(|_| rng.gen()).copied().collect();
            DiGraph::from_edges(n, &edges).expect("labels in range")
        });
        Box::new(iter)
    }
}

/// Seeded random DAGs on `n` vertices: a random topological order over the
/// ids, each forward edge present with probability 1/2. No self-loops.
pub fn sample_small_dags(n: usize, seed: u64, count: usize) -> Vec<DiGraph> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut position: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                position.swap(i, rng.gen_range(0..=i));
            }
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in 0..n as u32 {
                    if position[u as usize] < position[v as usize] && rng.gen() {
                        edges.push((u, v));
                    }
                }
            }
            DiGraph::from_edges(n, &edges).expect("labels in range")
        })
        .collect()
}
