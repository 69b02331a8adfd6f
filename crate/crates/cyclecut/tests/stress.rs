//! Larger differential sweeps than the acceptance gate runs. Ignored by
//! default; run with `cargo test -p cyclecut --test stress -- --ignored`.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cyclecut::dfvs::{is_dfvs, replace_dfvs, solve_dfvs};
use cyclecut::graph::{DiGraph, VertexId};
use cyclecut::oracle::{brute_min_dfvs, brute_ordered_multicut, sample_small_dags};
use cyclecut::ordmc::{check_ordered_separation, solve_ordmc, CutResult, SearchStats, TerminalSystem};

/// Random digraph with tunable density, self-loops included.
fn random_digraph(n: usize, density: f64, rng: &mut StdRng) -> DiGraph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    DiGraph::from_edges(n, &edges).unwrap()
}

#[test]
#[ignore = "long sweep; the acceptance suite covers the contract"]
fn dfvs_matches_oracle_on_larger_graphs() {
    let mut rng = StdRng::seed_from_u64(0x57E55);
    let mut runs = 0u64;
    for n in [7usize, 8] {
        for _ in 0..1500 {
            let density = rng.gen_range(0.05..0.5);
            let g = random_digraph(n, density, &mut rng);
            for k in 0..=3usize {
                let out = solve_dfvs(&g, k);
                let brute = brute_min_dfvs(&g, k).unwrap();
                assert_eq!(
                    out.result.is_solution(),
                    brute.is_solution(),
                    "mismatch at n={n} k={k} on {g:?}"
                );
                if let CutResult::Solution(s) = &out.result {
                    assert!(s.len() <= k && is_dfvs(&g, s).unwrap());
                }
                runs += 1;
            }
        }
    }
    println!("stress dfvs: {runs} runs, 0 mismatches");
}

#[test]
#[ignore = "long sweep; the acceptance suite covers the contract"]
fn ordmc_matches_oracle_on_larger_dags() {
    let mut runs = 0u64;
    for n in [8usize, 9] {
        for g in sample_small_dags(n, 0xACED + n as u64, 800) {
            let vs: Vec<VertexId> = g.vertices().collect();
            for l in 1..=3usize {
                let t =
                    TerminalSystem::new(vs[..l].to_vec(), vs[vs.len() - l..].to_vec()).unwrap();
                for k in 0..=3usize {
                    let (result, stats) = solve_ordmc(&g, &t, k).unwrap();
                    let brute = brute_ordered_multicut(&g, &t, k).unwrap();
                    assert_eq!(
                        result.is_solution(),
                        brute.is_solution(),
                        "mismatch at n={n} l={l} k={k} on {g:?}"
                    );
                    if let CutResult::Solution(r) = &result {
                        assert!(r.len() <= k);
                        assert!(check_ordered_separation(&g, &t, r).unwrap());
                    }
                    assert!(stats.leaves <= 1 << (2 * k as u64 + 1));
                    runs += 1;
                }
            }
        }
    }
    println!("stress ordmc: {runs} runs, 0 mismatches");
}

#[test]
#[ignore = "long sweep; the acceptance suite covers the contract"]
fn replacement_matches_oracle_with_larger_sets() {
    let mut rng = StdRng::seed_from_u64(0x0B5E55);
    let mut runs = 0u64;
    for _ in 0..4000 {
        // build the graph around s so that s is a feedback vertex set by
        // construction: the rest is oriented along a random order
        let n = rng.gen_range(5..=7);
        let size = rng.gen_range(1..=4.min(n - 1));
        let density = rng.gen_range(0.1..0.6);
        let mut order: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let s: BTreeSet<VertexId> = order[..size].iter().map(|&v| VertexId(v)).collect();
        let rank: std::collections::BTreeMap<u32, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in 0..n as u32 {
                let at_s = s.contains(&VertexId(u)) || s.contains(&VertexId(v));
                let forward = !at_s && u != v && rank[&u] < rank[&v];
                if (at_s || forward) && rng.gen_bool(density) {
                    edges.push((u, v));
                }
            }
        }
        let g = DiGraph::from_edges(n, &edges).unwrap();
        let vs: Vec<VertexId> = g.vertices().collect();
        assert!(is_dfvs(&g, &s).unwrap());
        let mut stats = SearchStats::default();
        let fast = replace_dfvs(&g, &s, &mut stats).unwrap();

        let free: Vec<VertexId> = vs.iter().filter(|v| !s.contains(v)).copied().collect();
        let mut exists = false;
        'outer: for mask in 0u32..1 << free.len() {
            let r: BTreeSet<VertexId> = free
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            if r.len() < s.len() && is_dfvs(&g, &r).unwrap() {
                exists = true;
                break 'outer;
            }
        }
        assert_eq!(fast.is_solution(), exists, "mismatch on {g:?} s={s:?}");
        runs += 1;
    }
    assert!(runs > 1000);
    println!("stress replacement: {runs} runs, 0 mismatches");
}
