//! Exact and randomized solvers for no-rainbow hypergraph coloring.
//!
//! Given an r-uniform hypergraph, the question is whether its nodes can be
//! colored with all of `1..=r` so that no edge sees every color. The crate
//! provides a deterministic branching local search ([`det`]), a randomized
//! random-walk search ([`randomized`]), a brute-force oracle ([`oracle`]),
//! instance generators ([`generate`]) and a CSV benchmark harness
//! ([`bench`]). Every positive answer comes with a checked certificate.

pub mod bench;
pub mod cli;
pub mod coloring;
pub mod combinatorics;
pub mod det;
pub mod format;
pub mod generate;
pub mod hypergraph;
pub mod oracle;
pub mod outcome;
pub mod randomized;
pub mod state;

pub use coloring::{hamming, CandidatePair, Color, Coloring, FrozenSet};
pub use det::{
    det_nrc, det_nrc_with, enumerate_initial_pairs, local_search, search_radius, DetOptions,
    SearchBudget,
};
pub use format::{parse_instance, write_instance};
pub use generate::{gen_complete, gen_planted, gen_random, Family, InstanceSpec};
pub use hypergraph::{BranchTarget, Hypergraph};
pub use oracle::{oracle_decide, oracle_verify_certificate, OracleReport};
pub use outcome::{Decision, SearchOutcome, SearchStats};
pub use randomized::{rand_local_search, rand_nrc, trial_count, RandOptions, RandomStream};
