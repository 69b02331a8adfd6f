//! The guide chapters from `book/src`, embedded as module docs so that
//! `cargo test --doc` compiles and runs every code block the book shows.
//! mdBook renders the same files, which keeps the book and the library
//! from drifting apart.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}

#[doc = include_str!("../../../book/src/separators.md")]
pub mod separators {}

#[doc = include_str!("../../../book/src/ordered-multicut.md")]
pub mod ordered_multicut {}

#[doc = include_str!("../../../book/src/feedback-vertex-set.md")]
pub mod feedback_vertex_set {}

#[doc = include_str!("../../../book/src/oracles-and-testing.md")]
pub mod oracles_and_testing {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
