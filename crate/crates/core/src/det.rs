//! Deterministic branching local search over frozen candidate pairs.
//!
//! Every r-subset `F` of the nodes, paired with every background color, is an
//! initial candidate pair: `F` receives the colors `1..=r` in node order and
//! all other nodes the background color. From each start, [`local_search`]
//! repairs rainbow edges one node at a time. The node it recolors is frozen
//! afterwards, and the radius bounds the recursion depth. If the input has a
//! no-rainbow coloring `c*`, some start agrees with `c*` on `F` and lies
//! within `floor((r - 1) n / r)` of it, and each repair can move one step
//! closer, so the search is exhaustive.

use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::coloring::{CandidatePair, Color, Coloring, FrozenSet};
use crate::combinatorics::Subsets;
use crate::hypergraph::{other_colors, Hypergraph};
use crate::outcome::{SearchOutcome, SearchStats};
use crate::state::SearchState;

/// Remaining search radius: the number of further recolorings allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SearchBudget(pub usize);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DetError {
    #[error("{n} nodes cannot carry {r} colors")]
    TooFewNodes { n: usize, r: usize },
}

/// `floor((r - 1) n / r)`.
pub fn search_radius(n: usize, r: usize) -> usize {
    (r - 1) * n / r
}

/// Largest number of search nodes a single [`local_search`] call can visit
/// through standard expansions: `1 + (r-1) + ... + (r-1)^g`, saturating.
pub fn branching_bound(r: usize, g: usize) -> u64 {
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..=g {
        total = total.saturating_add(level);
        level = level.saturating_mul(r as u64 - 1);
    }
    total
}

/// The initial candidate pair for frozen subset `subset` (ascending) and
/// background color `background`.
pub fn initial_pair(n: usize, r: usize, subset: &[usize], background: Color) -> CandidatePair {
    let mut colors = vec![background; n];
    for (i, &v) in subset.iter().enumerate() {
        colors[v] = i as Color + 1;
    }
    CandidatePair::new(
        Coloring::new(colors),
        FrozenSet::from_nodes(n, subset.iter().copied()),
        r,
    )
    .expect("frozen subset carries every color")
}

/// Iterator over the `C(n, r) * r` initial candidate pairs, subset-major.
pub struct InitialPairs {
    n: usize,
    r: usize,
    subsets: Subsets,
    current: Option<Vec<usize>>,
    background: Color,
}

impl Iterator for InitialPairs {
    type Item = CandidatePair;

    fn next(&mut self) -> Option<CandidatePair> {
        if self.current.is_none() || self.background as usize > self.r {
            self.current = Some(self.subsets.next()?);
            self.background = 1;
        }
        let pair = initial_pair(self.n, self.r, self.current.as_ref()?, self.background);
        self.background += 1;
        Some(pair)
    }
}

pub fn enumerate_initial_pairs(h: &Hypergraph) -> Result<InitialPairs, DetError> {
    let (n, r) = (h.n(), h.r());
    if n < r {
        return Err(DetError::TooFewNodes { n, r });
    }
    Ok(InitialPairs {
        n,
        r,
        subsets: Subsets::new(n, r),
        current: None,
        background: 1,
    })
}

/// Hook called at every search node, used by tests to check structural
/// invariants of the recursion.
pub trait SearchObserver {
    fn visit(&mut self, depth: usize, state: &SearchState<'_>);
}

impl SearchObserver for () {
    fn visit(&mut self, _: usize, _: &SearchState<'_>) {}
}

struct Searcher<'h, 'o, O> {
    state: SearchState<'h>,
    stats: SearchStats,
    observer: &'o mut O,
    certificate: Option<Coloring>,
}

impl<O: SearchObserver> Searcher<'_, '_, O> {
    fn visit(&mut self, g: usize, depth: usize, fallback: bool) -> bool {
        self.stats.recursion_nodes += 1;
        if fallback {
            self.stats.fallback_nodes += 1;
        }
        self.observer.visit(depth, &self.state);

        let s = &self.state;
        if g == 0 && s.has_rainbow() {
            return false;
        }
        if s.has_fully_frozen_rainbow() {
            return false;
        }
        if s.is_no_rainbow() {
            self.certificate = Some(s.coloring());
            return true;
        }
        if s.lemma2_applies() {
            let completed = s
                .hypergraph()
                .background_completion(&s.coloring(), &s.frozen_set())
                .expect("freeze completion must yield a no-rainbow coloring");
            self.certificate = Some(completed);
            return true;
        }
        if let Some(target) = s.select_branch_edge() {
            return self.branch(target.node, g, depth, fallback);
        }
        // A rainbow edge exists but none has exactly r - 1 frozen members:
        // try every unfrozen member of the most-frozen rainbow edge.
        let edge = s
            .select_fallback_edge()
            .expect("a rainbow edge that is not fully frozen");
        let nodes: Vec<usize> = s.unfrozen_members(edge).collect();
        nodes.into_iter().any(|v| self.branch(v, g, depth, true))
    }

    fn branch(&mut self, v: usize, g: usize, depth: usize, fallback: bool) -> bool {
        let r = self.state.hypergraph().r();
        let old = self.state.color(v);
        for j in other_colors(r, old) {
            self.state.recolor(v, j);
            self.state.freeze(v);
            let found = self.visit(g - 1, depth + 1, fallback);
            self.state.unfreeze(v);
            self.state.recolor(v, old);
            if found {
                return true;
            }
        }
        false
    }
}

/// Searches for a no-rainbow coloring within radius `g` of the pair that
/// agrees with it on the frozen set.
pub fn local_search(h: &Hypergraph, pair: &CandidatePair, g: SearchBudget) -> SearchOutcome {
    local_search_observed(h, pair, g, &mut ())
}

pub fn local_search_observed<O: SearchObserver>(
    h: &Hypergraph,
    pair: &CandidatePair,
    g: SearchBudget,
    observer: &mut O,
) -> SearchOutcome {
    let start = Instant::now();
    let mut searcher = Searcher {
        state: SearchState::new(h, pair),
        stats: SearchStats {
            starts: 1,
            ..SearchStats::default()
        },
        observer,
        certificate: None,
    };
    let found = searcher.visit(g.0, 0, false);
    let mut stats = searcher.stats;
    stats.elapsed = start.elapsed();
    match (found, searcher.certificate) {
        (true, Some(c)) => SearchOutcome::colorable(c, stats),
        _ => SearchOutcome::not_colorable(stats),
    }
}

#[derive(Debug, Clone, Default)]
pub struct DetOptions {
    /// Worker threads; 0 or 1 runs sequentially.
    pub threads: usize,
    /// Replaces the default radius. Values below the default give up
    /// completeness.
    pub radius: Option<usize>,
}

pub fn det_nrc(h: &Hypergraph) -> SearchOutcome {
    det_nrc_with(h, &DetOptions::default())
}

/// Runs [`local_search`] from every initial candidate pair and stops at the
/// first success.
pub fn det_nrc_with(h: &Hypergraph, options: &DetOptions) -> SearchOutcome {
    let start = Instant::now();
    let (n, r) = (h.n(), h.r());
    if n < r {
        return SearchOutcome::not_colorable(SearchStats::default());
    }
    let g = SearchBudget(options.radius.unwrap_or_else(|| search_radius(n, r)));

    let mut outcome = if h.m() == 0 {
        let pair = initial_pair(n, r, &(0..r).collect::<Vec<_>>(), 1);
        let (coloring, _) = pair.into_parts();
        SearchOutcome::colorable(coloring, SearchStats::default())
    } else if options.threads > 1 {
        det_parallel(h, g, options.threads)
    } else {
        let mut stats = SearchStats::default();
        let mut found = None;
        for pair in enumerate_initial_pairs(h).expect("n >= r") {
            let out = local_search(h, &pair, g);
            stats += out.stats;
            if out.is_colorable() {
                found = out.certificate;
                break;
            }
        }
        match found {
            Some(c) => SearchOutcome::colorable(c, stats),
            None => SearchOutcome::not_colorable(stats),
        }
    };

    if let Some(c) = &outcome.certificate {
        assert!(
            h.is_no_rainbow_coloring(c),
            "deterministic search produced an invalid certificate"
        );
    }
    outcome.stats.elapsed = start.elapsed();
    outcome
}

fn det_parallel(h: &Hypergraph, g: SearchBudget, threads: usize) -> SearchOutcome {
    let (n, r) = (h.n(), h.r());
    let subsets: Vec<Vec<usize>> = Subsets::new(n, r).collect();
    let stats = Mutex::new(SearchStats::default());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let found = pool.install(|| {
        (0..subsets.len() * r).into_par_iter().find_map_first(|i| {
            let pair = initial_pair(n, r, &subsets[i / r], (i % r) as Color + 1);
            let out = local_search(h, &pair, g);
            *stats.lock().unwrap() += out.stats;
            out.certificate
        })
    });
    let stats = stats.into_inner().unwrap();
    match found {
        Some(c) => SearchOutcome::colorable(c, stats),
        None => SearchOutcome::not_colorable(stats),
    }
}
