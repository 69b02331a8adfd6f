//! Exact solver for the parameterized directed feedback vertex set problem.
//!
//! The solver works in two stages. The outer stage ([`dfvs`]) maintains a
//! small feedback vertex set under vertex insertions (iterative
//! compression) and reduces each compression step to a family of ordered
//! multicut instances on DAGs. The inner stage ([`ordmc`]) solves those
//! instances with a branching search whose decisions are driven by minimum
//! vertex separators ([`separator`]).
//!
//! [`oracle`] holds brute-force reference solvers used as ground truth in
//! differential tests, and [`io`] holds the instance file formats, the
//! instance generator, and the result reports behind the `cyclecut` binary.

pub mod book;
pub mod dfvs;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod ordmc;
pub mod separator;

pub use dfvs::{is_dfvs, solve_dfvs, DfvsResult};
pub use graph::{DiGraph, Edge, GraphError, VertexId};
pub use ordmc::{
    check_ordered_separation, solve_ordmc, CutResult, SearchStats, TerminalSystem,
};
pub use separator::{min_vertex_separator, SeparatorResult, SeparatorSize};
