use std::fmt;
use std::ops::AddAssign;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    Colorable,
    NotColorable,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Colorable => "COLORABLE",
            Decision::NotColorable => "NOT_COLORABLE",
        })
    }
}

/// Counters collected while searching.
///
/// `recursion_nodes` counts every search node visited. `fallback_nodes` is
/// the subset of those reached through at least one fallback expansion, i.e.
/// a branch on a rainbow edge that did not have exactly `r - 1` frozen nodes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub recursion_nodes: u64,
    pub fallback_nodes: u64,
    /// Local-search invocations (initial pairs or random starts).
    pub starts: u64,
    /// Outer trials of the randomized solver.
    pub trials: u64,
    pub elapsed: Duration,
}

impl SearchStats {
    /// Nodes reached through standard expansions only.
    pub fn paper_nodes(&self) -> u64 {
        self.recursion_nodes - self.fallback_nodes
    }
}

impl AddAssign for SearchStats {
    fn add_assign(&mut self, other: SearchStats) {
        self.recursion_nodes += other.recursion_nodes;
        self.fallback_nodes += other.fallback_nodes;
        self.starts += other.starts;
        self.trials += other.trials;
        self.elapsed += other.elapsed;
    }
}

/// Result of a solver run. A `Colorable` outcome always carries a
/// certificate that has been checked against the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub decision: Decision,
    pub certificate: Option<Coloring>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn colorable(certificate: Coloring, stats: SearchStats) -> Self {
        SearchOutcome {
            decision: Decision::Colorable,
            certificate: Some(certificate),
            stats,
        }
    }

    pub fn not_colorable(stats: SearchStats) -> Self {
        SearchOutcome {
            decision: Decision::NotColorable,
            certificate: None,
            stats,
        }
    }

    pub fn is_colorable(&self) -> bool {
        self.decision == Decision::Colorable
    }
}
