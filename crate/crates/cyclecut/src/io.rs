//! Instance files, the instance generator, and result reports.
//!
//! Instances are line-oriented text. Blank lines and lines starting with
//! `#` are ignored anywhere. The first significant line is the header:
//!
//! ```text
//! p dfvs <n> <m> <k>
//! p ordmc <n> <m> <k> <l>
//! ```
//!
//! An `ordmc` header is followed by one `x` line and one `y` line carrying
//! the `l` terminals of each sequence in order. After that come exactly
//! `m` edge lines `<u> <v>` with labels in `[0, n)`. An `ordmc` graph must
//! be acyclic and its terminals distinct; duplicate edges are rejected.
//!
//! Solve and verify runs emit a single JSON document on standard output;
//! see [`ResultReport`] and [`VerifyReport`].

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dfvs::{is_dfvs, solve_dfvs};
use crate::graph::{DiGraph, VertexId};
use crate::ordmc::{check_ordered_separation, solve_ordmc, CutResult, OrdmcError, SearchStats, TerminalSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Semantic(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl IoError {
    fn parse(line: usize, message: impl Into<String>) -> Self {
        IoError::Parse {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Dfvs,
    Ordmc,
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProblemKind::Dfvs => write!(f, "dfvs"),
            ProblemKind::Ordmc => write!(f, "ordmc"),
        }
    }
}

/// A parsed, semantically validated instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub kind: ProblemKind,
    pub n: usize,
    pub k: usize,
    pub edges: Vec<(usize, usize)>,
    /// Terminal sequences; empty for `dfvs` instances.
    pub xs: Vec<usize>,
    pub ys: Vec<usize>,
}

impl InstanceFile {
    /// The instance graph, with label `i` mapped to vertex id `i`.
    pub fn graph(&self) -> DiGraph {
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .map(|&(u, v)| (u as u32, v as u32))
            .collect();
        DiGraph::from_edges(self.n, &edges).expect("validated labels")
    }

    pub fn terminals(&self) -> Option<TerminalSystem> {
        if self.kind != ProblemKind::Ordmc {
            return None;
        }
        let xs = self.xs.iter().map(|&v| VertexId(v as u32)).collect();
        let ys = self.ys.iter().map(|&v| VertexId(v as u32)).collect();
        Some(TerminalSystem::new(xs, ys).expect("validated terminals"))
    }
}

fn parse_fields<const N: usize>(
    line_no: usize,
    what: &str,
    fields: &[&str],
) -> Result<[usize; N], IoError> {
    if fields.len() != N {
        return Err(IoError::parse(
            line_no,
            format!("expected {N} fields for {what}, got {}", fields.len()),
        ));
    }
    let mut out = [0usize; N];
    for (slot, field) in out.iter_mut().zip(fields) {
        *slot = field
            .parse()
            .map_err(|_| IoError::parse(line_no, format!("bad number {field:?}")))?;
    }
    Ok(out)
}

/// Strict parse of the documented instance format.
pub fn parse_instance(text: &str) -> Result<InstanceFile, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| IoError::parse(0, "empty instance"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.first() != Some(&"p") {
        return Err(IoError::parse(header_no, "header must start with 'p'"));
    }
    let (kind, n, m, k, l) = match fields.get(1) {
        Some(&"dfvs") => {
            let [n, m, k] = parse_fields::<3>(header_no, "dfvs header", &fields[2..])?;
            (ProblemKind::Dfvs, n, m, k, 0)
        }
        Some(&"ordmc") => {
            let [n, m, k, l] = parse_fields::<4>(header_no, "ordmc header", &fields[2..])?;
            (ProblemKind::Ordmc, n, m, k, l)
        }
        other => {
            return Err(IoError::parse(
                header_no,
                format!("unknown problem kind {other:?}"),
            ))
        }
    };

    let mut take_terminals = |tag: &str| -> Result<Vec<usize>, IoError> {
        let (no, line) = lines
            .next()
            .ok_or_else(|| IoError::parse(0, format!("missing '{tag}' line")))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.first() != Some(&tag) {
            return Err(IoError::parse(no, format!("expected '{tag}' line")));
        }
        if fields.len() != l + 1 {
            return Err(IoError::parse(no, format!("expected {l} terminals")));
        }
        fields[1..]
            .iter()
            .map(|f| {
                f.parse()
                    .map_err(|_| IoError::parse(no, format!("bad number {f:?}")))
            })
            .collect()
    };

    let (xs, ys) = if kind == ProblemKind::Ordmc {
        if l == 0 {
            return Err(IoError::parse(header_no, "ordmc needs at least one terminal pair"));
        }
        (take_terminals("x")?, take_terminals("y")?)
    } else {
        (Vec::new(), Vec::new())
    };

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (no, line) = lines
            .next()
            .ok_or_else(|| IoError::parse(0, format!("expected {m} edges")))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = parse_fields::<2>(no, "edge", &fields)?;
        edges.push((u, v));
    }
    if let Some((no, _)) = lines.next() {
        return Err(IoError::parse(no, "trailing content after the edge list"));
    }

    let instance = InstanceFile { kind, n, k, edges, xs, ys };
    validate_instance(&instance)?;
    Ok(instance)
}

fn validate_instance(inst: &InstanceFile) -> Result<(), IoError> {
    let bad_label = |v: usize| IoError::Semantic(format!("label {v} out of range [0, {})", inst.n));
    let mut seen = BTreeSet::new();
    for &(u, v) in &inst.edges {
        if u >= inst.n {
            return Err(bad_label(u));
        }
        if v >= inst.n {
            return Err(bad_label(v));
        }
        if !seen.insert((u, v)) {
            return Err(IoError::Semantic(format!("duplicate edge ({u}, {v})")));
        }
    }
    if inst.kind == ProblemKind::Ordmc {
        let mut terminal_seen = BTreeSet::new();
        for &t in inst.xs.iter().chain(&inst.ys) {
            if t >= inst.n {
                return Err(bad_label(t));
            }
            if !terminal_seen.insert(t) {
                return Err(IoError::Semantic(format!("duplicate terminal {t}")));
            }
        }
        if !inst.graph().is_acyclic() {
            return Err(IoError::Semantic("ordmc graph has a directed cycle".into()));
        }
    }
    Ok(())
}

/// Renders an instance in the documented format; `parse_instance` is its
/// inverse on valid instances.
pub fn render_instance(inst: &InstanceFile) -> String {
    let mut out = String::new();
    match inst.kind {
        ProblemKind::Dfvs => {
            writeln!(out, "p dfvs {} {} {}", inst.n, inst.edges.len(), inst.k).unwrap();
        }
        ProblemKind::Ordmc => {
            writeln!(
                out,
                "p ordmc {} {} {} {}",
                inst.n,
                inst.edges.len(),
                inst.k,
                inst.xs.len()
            )
            .unwrap();
            let join = |vs: &[usize]| vs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
            writeln!(out, "x {}", join(&inst.xs)).unwrap();
            writeln!(out, "y {}", join(&inst.ys)).unwrap();
        }
    }
    for &(u, v) in &inst.edges {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Knobs for [`run_generate`].
#[derive(Debug, Clone, Copy)]
pub struct GenerateParams {
    pub kind: ProblemKind,
    pub n: usize,
    pub density: f64,
    pub k: usize,
    pub seed: u64,
    /// Construct the instance around a known solution of size `k`.
    pub planted: bool,
    /// Terminal pairs for `ordmc` instances.
    pub terminal_pairs: usize,
}

/// Deterministic instance generation; identical parameters give
/// byte-identical output.
pub fn run_generate(params: &GenerateParams) -> Result<InstanceFile, IoError> {
    if !(0.0..=1.0).contains(&params.density) {
        return Err(IoError::InvalidParameter(format!(
            "density {} outside [0, 1]",
            params.density
        )));
    }
    if params.n == 0 {
        return Err(IoError::InvalidParameter("n must be positive".into()));
    }
    let mut rng = StdRng::seed_from_u64(params.seed);
    match params.kind {
        ProblemKind::Dfvs => generate_dfvs(params, &mut rng),
        ProblemKind::Ordmc => generate_ordmc(params, &mut rng),
    }
}

fn generate_dfvs(params: &GenerateParams, rng: &mut StdRng) -> Result<InstanceFile, IoError> {
    let n = params.n;
    let mut edges = Vec::new();
    if params.planted {
        if params.k >= n {
            return Err(IoError::InvalidParameter(
                "planted dfvs needs k < n".into(),
            ));
        }
        // planted solution: k random labels; the rest is a random DAG in a
        // shuffled topological order, plus arbitrary edges at the plant
        let mut shuffled: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            shuffled.swap(i, rng.gen_range(0..=i));
        }
        let plant: BTreeSet<usize> = shuffled[..params.k].iter().copied().collect();
        let mut position = vec![0usize; n];
        for (pos, &v) in shuffled[params.k..].iter().enumerate() {
            position[v] = pos;
        }
        for u in 0..n {
            for v in 0..n {
                let at_plant = plant.contains(&u) || plant.contains(&v);
                if u == v && !at_plant {
                    continue;
                }
                let forward = !at_plant && position[u] < position[v];
                if (forward || at_plant) && rng.gen_bool(params.density) {
                    edges.push((u, v));
                }
            }
        }
    } else {
        for u in 0..n {
            for v in 0..n {
                if rng.gen_bool(params.density) {
                    edges.push((u, v));
                }
            }
        }
    }
    Ok(InstanceFile {
        kind: ProblemKind::Dfvs,
        n,
        k: params.k,
        edges,
        xs: Vec::new(),
        ys: Vec::new(),
    })
}

fn generate_ordmc(params: &GenerateParams, rng: &mut StdRng) -> Result<InstanceFile, IoError> {
    let (n, l, k) = (params.n, params.terminal_pairs, params.k);
    if l == 0 {
        return Err(IoError::InvalidParameter(
            "ordmc needs at least one terminal pair".into(),
        ));
    }
    if params.planted {
        generate_planted_ordmc(params, rng)
    } else {
        if n < 2 * l {
            return Err(IoError::InvalidParameter(format!(
                "n={n} too small for {l} terminal pairs"
            )));
        }
        // random DAG in a shuffled topological order, random terminals
        let mut position: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            position.swap(i, rng.gen_range(0..=i));
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if position[u] < position[v] && rng.gen_bool(params.density) {
                    edges.push((u, v));
                }
            }
        }
        let mut labels: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            labels.swap(i, rng.gen_range(0..=i));
        }
        let xs = labels[..l].to_vec();
        let ys = labels[l..2 * l].to_vec();
        Ok(InstanceFile {
            kind: ProblemKind::Ordmc,
            n,
            k,
            edges,
            xs,
            ys,
        })
    }
}

/// Layered construction around a planted cut: sources, left padding, the
/// cut layer (`k` vertices), right padding, sinks. Every source-to-sink
/// path crosses the cut layer, so the plant orderly separates.
fn generate_planted_ordmc(
    params: &GenerateParams,
    rng: &mut StdRng,
) -> Result<InstanceFile, IoError> {
    let (n, l, k) = (params.n, params.terminal_pairs, params.k);
    if n < 2 * l + k {
        return Err(IoError::InvalidParameter(format!(
            "n={n} too small for {l} terminal pairs and a plant of size {k}"
        )));
    }
    let xs: Vec<usize> = (0..l).collect();
    let ys: Vec<usize> = (l..2 * l).collect();
    let cut: Vec<usize> = (2 * l..2 * l + k).collect();
    let mid: Vec<usize> = (2 * l + k..n).collect();
    let (left, right) = mid.split_at(mid.len() / 2);

    #[derive(PartialEq, PartialOrd)]
    enum Layer {
        Source,
        Left,
        Cut,
        Right,
        Sink,
    }
    let layer = |v: usize| -> Layer {
        if v < l {
            Layer::Source
        } else if v < 2 * l {
            Layer::Sink
        } else if v < 2 * l + k {
            Layer::Cut
        } else if left.contains(&v) {
            Layer::Left
        } else {
            Layer::Right
        }
    };

    let mut edges = BTreeSet::new();
    // guaranteed routes through the cut keep Sep(x_l, Y) at k
    for (i, &x) in xs.iter().enumerate() {
        if k > 0 {
            edges.insert((x, cut[i % k]));
        }
    }
    for &c in &cut {
        if !right.is_empty() {
            edges.insert((c, right[rng.gen_range(0..right.len())]));
        } else {
            edges.insert((c, ys[rng.gen_range(0..l)]));
        }
    }
    for &r in right {
        edges.insert((r, ys[rng.gen_range(0..l)]));
    }
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let (lu, lv) = (layer(u), layer(v));
            // forward within the layer order, never skipping the cut layer
            let allowed = lu < lv
                && !(lu < Layer::Cut && lv > Layer::Cut)
                || (lu == lv && u < v && matches!(lu, Layer::Left | Layer::Right | Layer::Cut));
            if allowed && rng.gen_bool(params.density) {
                edges.insert((u, v));
            }
        }
    }
    Ok(InstanceFile {
        kind: ProblemKind::Ordmc,
        n,
        k,
        edges: edges.into_iter().collect(),
        xs,
        ys,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Solution,
    No,
    Error,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub nodes: u64,
    pub leaves: u64,
    pub flow_calls: u64,
    pub shrink_steps: u64,
    pub branch_steps: u64,
    pub orderings_tried: u64,
}

impl From<SearchStats> for StatsReport {
    fn from(s: SearchStats) -> Self {
        StatsReport {
            nodes: s.nodes,
            leaves: s.leaves,
            flow_calls: s.flow_calls,
            shrink_steps: s.shrink_steps,
            branch_steps: s.branch_steps,
            orderings_tried: s.orderings_tried,
        }
    }
}

/// The machine-readable solve report printed on standard output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultReport {
    pub status: ReportStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<usize>>,
    pub stats: StatsReport,
    /// Whether every search-tree leaf count stayed within its bound.
    pub leaf_bound_ok: bool,
    pub wall_time_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Ordmc(#[from] OrdmcError),
    #[error("solver returned a set that fails verification")]
    BadSolverOutput,
}

/// Dispatches the instance to the right solver, re-verifies any solution,
/// and assembles the report.
pub fn run_solve(inst: &InstanceFile, k_override: Option<usize>) -> Result<ResultReport, SolveError> {
    let start = Instant::now();
    let k = k_override.unwrap_or(inst.k);
    let g = inst.graph();
    let (result, stats) = match inst.kind {
        ProblemKind::Dfvs => {
            let out = solve_dfvs(&g, k);
            (out.result, out.stats)
        }
        ProblemKind::Ordmc => {
            let t = inst.terminals().expect("ordmc instance");
            solve_ordmc(&g, &t, k)?
        }
    };

    let solution = match result {
        CutResult::Solution(s) => {
            let verified = match inst.kind {
                ProblemKind::Dfvs => is_dfvs(&g, &s).map_err(OrdmcError::from)? && s.len() <= k,
                ProblemKind::Ordmc => {
                    let t = inst.terminals().expect("ordmc instance");
                    check_ordered_separation(&g, &t, &s)? && s.len() <= k
                }
            };
            if !verified {
                return Err(SolveError::BadSolverOutput);
            }
            Some(s.iter().map(|v| v.index()).collect::<Vec<usize>>())
        }
        CutResult::No => None,
    };

    Ok(ResultReport {
        status: if solution.is_some() {
            ReportStatus::Solution
        } else {
            ReportStatus::No
        },
        solution,
        stats: stats.into(),
        leaf_bound_ok: stats.leaf_bound_violations == 0,
        wall_time_ms: start.elapsed().as_millis() as u64,
        message: None,
    })
}

/// The verify report: an independent check of a proposed solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Checks a proposed solution against an instance without running the
/// solver, so third-party output can be audited.
pub fn run_verify(inst: &InstanceFile, proposed: &[usize]) -> VerifyReport {
    let fail = |reason: String| VerifyReport {
        valid: false,
        size: proposed.len(),
        reason: Some(reason),
    };
    let mut set = BTreeSet::new();
    for &v in proposed {
        if v >= inst.n {
            return fail(format!("label {v} out of range"));
        }
        if !set.insert(VertexId(v as u32)) {
            return fail(format!("duplicate vertex {v}"));
        }
    }
    if set.len() > inst.k {
        return fail(format!("size {} exceeds budget k={}", set.len(), inst.k));
    }
    let g = inst.graph();
    let holds = match inst.kind {
        ProblemKind::Dfvs => is_dfvs(&g, &set).expect("labels validated"),
        ProblemKind::Ordmc => {
            let t = inst.terminals().expect("ordmc instance");
            match check_ordered_separation(&g, &t, &set) {
                Ok(ok) => ok,
                Err(OrdmcError::TerminalInCut(v)) => {
                    return fail(format!("solution contains terminal {v}"));
                }
                Err(e) => return fail(e.to_string()),
            }
        }
    };
    if holds {
        VerifyReport {
            valid: true,
            size: set.len(),
            reason: None,
        }
    } else {
        fail(match inst.kind {
            ProblemKind::Dfvs => "graph stays cyclic after removal".into(),
            ProblemKind::Ordmc => "a constrained terminal pair stays connected".into(),
        })
    }
}
