//! 2-MAXSAT through a clause-pair reduction to DNF, a trie-like graph over
//! wildcard variable sequences, and a layered bottom-up search.
//!
//! The pipeline is [`reduction::reduce`] → [`sequencing`] → [`pstar`] →
//! [`triegraph::build_graph`] → [`search`]. The [`oracle`] module holds
//! exhaustive solvers and the differential-testing harness.

pub mod conjset;
pub mod formula;
pub mod reduction;
pub mod sequencing;
pub mod pstar;
pub mod triegraph;
pub mod search;
pub mod oracle;
pub mod dot;
