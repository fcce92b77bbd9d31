//! Brute-force ground truth.
//!
//! Nothing here touches the incremental search state or the solver
//! predicates. Rainbow edges are detected by pairwise comparison of member
//! colors, which for an `r`-node edge over `r` colors is equivalent to
//! "every color appears".

use rayon::prelude::*;
use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::hypergraph::Hypergraph;
use crate::outcome::Decision;

/// Default number of colorings the oracle may enumerate.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration needs {required} colorings (r^n), budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub decision: Decision,
    /// Number of surjective colorings without a rainbow edge.
    pub witness_count: u64,
    /// The first witness in enumeration order.
    pub sample_witness: Option<Coloring>,
}

fn edge_is_rainbow(colors: &[Color], edge: &[usize]) -> bool {
    for (i, &u) in edge.iter().enumerate() {
        for &w in &edge[i + 1..] {
            if colors[u] == colors[w] {
                return false;
            }
        }
    }
    true
}

fn uses_every_color(colors: &[Color], r: usize) -> bool {
    (1..=r as Color).all(|k| colors.contains(&k))
}

fn is_witness(h: &Hypergraph, colors: &[Color]) -> bool {
    uses_every_color(colors, h.r()) && !h.edges().any(|e| edge_is_rainbow(colors, e))
}

/// Checks a certificate from the definitions alone.
pub fn oracle_verify_certificate(h: &Hypergraph, c: &Coloring) -> bool {
    let colors = c.as_slice();
    colors.len() == h.n()
        && colors.iter().all(|&k| k >= 1 && k as usize <= h.r())
        && is_witness(h, colors)
}

fn total_colorings(h: &Hypergraph) -> u128 {
    (h.r() as u128)
        .checked_pow(h.n() as u32)
        .unwrap_or(u128::MAX)
}

/// Counts witnesses among colorings with index in `range`, where index `k`
/// gives node `v` color `1 + (k / r^v) % r`.
fn scan(h: &Hypergraph, range: std::ops::Range<u64>) -> (u64, Option<Coloring>) {
    let (n, r) = (h.n(), h.r() as u64);
    let mut colors: Vec<Color> = Vec::with_capacity(n);
    let mut x = range.start;
    for _ in 0..n {
        colors.push((x % r) as Color + 1);
        x /= r;
    }
    let mut count = 0;
    let mut first = None;
    for _ in range {
        if is_witness(h, &colors) {
            count += 1;
            if first.is_none() {
                first = Some(Coloring::new(colors.clone()));
            }
        }
        for digit in colors.iter_mut() {
            if (*digit as u64) < r {
                *digit += 1;
                break;
            }
            *digit = 1;
        }
    }
    (count, first)
}

pub fn oracle_decide(h: &Hypergraph, budget: u64) -> Result<OracleReport, OracleError> {
    oracle_decide_parallel(h, budget, 1)
}

/// Splits the enumeration across `threads` workers; the report does not
/// depend on the split.
pub fn oracle_decide_parallel(
    h: &Hypergraph,
    budget: u64,
    threads: usize,
) -> Result<OracleReport, OracleError> {
    let total = total_colorings(h);
    if total > budget as u128 {
        return Err(OracleError::BudgetExceeded {
            required: total,
            budget,
        });
    }
    let total = total as u64;
    let (witness_count, sample_witness) = if threads <= 1 || total < 4096 {
        scan(h, 0..total)
    } else {
        let chunks = (threads * 8) as u64;
        let step = total.div_ceil(chunks);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        let parts: Vec<(u64, Option<Coloring>)> = pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|i| scan(h, (i * step).min(total)..((i + 1) * step).min(total)))
                .collect()
        });
        let count = parts.iter().map(|p| p.0).sum();
        let first = parts.into_iter().find_map(|p| p.1);
        (count, first)
    };
    Ok(OracleReport {
        decision: if witness_count > 0 {
            Decision::Colorable
        } else {
            Decision::NotColorable
        },
        witness_count,
        sample_witness,
    })
}
