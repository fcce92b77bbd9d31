//! Randomized local search.
//!
//! Each trial visits every r-subset `F`, gives `F` the colors `1..=r` and every
//! other node an independent uniform color, and runs a single random walk
//! ([`rand_local_search`]) that repairs one rainbow edge per step with a
//! uniformly drawn new color. A start that agrees with a witness on `F`
//! succeeds with probability at least `(2/r)^n`. Running
//! `ceil(alpha * (r/2)^n)` trials therefore misses an existing witness with
//! probability at most `e^-alpha`.
//!
//! Randomness is counter-based: the start in trial `j` at subset index `s`
//! draws from a ChaCha stream keyed by `(master_seed, j)` with stream id `s`.
//! Trials can therefore run in any order, on any thread, and draw identical
//! bits.

use std::sync::Mutex;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::coloring::{CandidatePair, Color, Coloring};
use crate::combinatorics::Subsets;
use crate::hypergraph::{other_colors, Hypergraph};
use crate::outcome::{SearchOutcome, SearchStats};
use crate::state::SearchState;

/// Default refusal threshold for [`trial_count`].
pub const DEFAULT_TRIAL_CAP: u64 = 1 << 32;

#[derive(Debug, Error, PartialEq)]
pub enum RandError {
    #[error("alpha must be a finite number greater than 1, got {0}")]
    InvalidAlpha(f64),
    #[error("{required:.0} trials required, cap is {cap}")]
    TrialCap { required: f64, cap: u64 },
}

/// `ceil(alpha * (r/2)^n)`, refused above `cap`.
pub fn trial_count(n: usize, r: usize, alpha: f64, cap: u64) -> Result<u64, RandError> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(RandError::InvalidAlpha(alpha));
    }
    let required = alpha * (r as f64 / 2.0).powi(n as i32);
    if !required.is_finite() || required > cap as f64 {
        return Err(RandError::TrialCap { required, cap });
    }
    Ok(required.ceil() as u64)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d4_9bb1_3311_13eb);
    x ^ (x >> 31)
}

/// Source of the per-start random generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomStream {
    pub master_seed: u64,
}

impl RandomStream {
    pub fn new(master_seed: u64) -> Self {
        RandomStream { master_seed }
    }

    /// Generator for start `(trial, subset)`; successive draws are the
    /// successive steps of that start.
    pub fn start(&self, trial: u64, subset: u64) -> ChaCha8Rng {
        let key = splitmix64(self.master_seed ^ splitmix64(trial));
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream(subset);
        rng
    }
}

/// One recoloring step of [`rand_local_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecolorEvent {
    pub node: usize,
    pub from: Color,
    pub to: Color,
    /// The edge did not have exactly `r - 1` frozen members.
    pub fallback: bool,
}

/// Random walk from a candidate pair: at most `n - |F|` recolorings, each
/// freezing the recolored node.
pub fn rand_local_search<R: Rng>(
    h: &Hypergraph,
    pair: &CandidatePair,
    rng: &mut R,
) -> SearchOutcome {
    let mut state = SearchState::new(h, pair);
    walk(&mut state, rng, &mut |_| {})
}

/// [`rand_local_search`] reporting every recoloring to `trace`.
pub fn rand_local_search_traced<R: Rng, F: FnMut(&RecolorEvent)>(
    h: &Hypergraph,
    pair: &CandidatePair,
    rng: &mut R,
    trace: &mut F,
) -> SearchOutcome {
    let mut state = SearchState::new(h, pair);
    walk(&mut state, rng, trace)
}

fn walk<R: Rng, F: FnMut(&RecolorEvent)>(
    state: &mut SearchState<'_>,
    rng: &mut R,
    trace: &mut F,
) -> SearchOutcome {
    let h = state.hypergraph();
    let r = h.r();
    let steps = h.n() - state.frozen_len();
    let mut stats = SearchStats {
        starts: 1,
        ..SearchStats::default()
    };
    let mut off_path = false;

    // The checks run once more after the last recoloring, when every node is
    // frozen, so a walk that needs all `n - |F|` steps can still succeed.
    for step in 0..=steps {
        stats.recursion_nodes += 1;
        stats.fallback_nodes += off_path as u64;
        if state.has_fully_frozen_rainbow() {
            break;
        }
        if state.is_no_rainbow() {
            return SearchOutcome::colorable(state.coloring(), stats);
        }
        if state.lemma2_applies() {
            let completed = h
                .background_completion(&state.coloring(), &state.frozen_set())
                .expect("freeze completion must yield a no-rainbow coloring");
            return SearchOutcome::colorable(completed, stats);
        }
        if step == steps {
            break;
        }
        let (node, fallback) = match state.select_branch_edge() {
            Some(target) => (target.node, false),
            None => {
                let edge = state
                    .select_fallback_edge()
                    .expect("a rainbow edge that is not fully frozen");
                let unfrozen: Vec<usize> = state.unfrozen_members(edge).collect();
                (unfrozen[rng.gen_range(0..unfrozen.len())], true)
            }
        };
        let from = state.color(node);
        let pick = rng.gen_range(0..r - 1);
        let to = other_colors(r, from).nth(pick).expect("r - 1 other colors");
        trace(&RecolorEvent {
            node,
            from,
            to,
            fallback,
        });
        state.recolor(node, to);
        state.freeze(node);
        off_path |= fallback;
    }
    SearchOutcome::not_colorable(stats)
}

#[derive(Debug, Clone)]
pub struct RandOptions {
    pub alpha: f64,
    pub seed: u64,
    /// Worker threads; 0 or 1 runs sequentially.
    pub threads: usize,
    pub trial_cap: u64,
    /// Off-spec speedup: one uniformly drawn subset per trial instead of all
    /// of them. Voids the success-probability guarantee.
    pub sample_subsets: bool,
}

impl Default for RandOptions {
    fn default() -> Self {
        RandOptions {
            alpha: 3.0,
            seed: 0,
            threads: 1,
            trial_cap: DEFAULT_TRIAL_CAP,
            sample_subsets: false,
        }
    }
}

struct Trials<'h> {
    h: &'h Hypergraph,
    subsets: Vec<Vec<usize>>,
    stream: RandomStream,
    sample_subsets: bool,
}

impl<'h> Trials<'h> {
    fn start_colors(
        &self,
        subset: &[usize],
        rng: &mut ChaCha8Rng,
        colors: &mut Vec<Color>,
        frozen: &mut Vec<bool>,
    ) {
        let (n, r) = (self.h.n(), self.h.r());
        colors.clear();
        frozen.clear();
        frozen.resize(n, false);
        let mut next = subset.iter().peekable();
        let mut rank: Color = 0;
        for (v, is_frozen) in frozen.iter_mut().enumerate() {
            if next.peek() == Some(&&v) {
                next.next();
                rank += 1;
                colors.push(rank);
                *is_frozen = true;
            } else {
                colors.push(rng.gen_range(1..=r as Color));
            }
        }
    }

    /// Runs trial `j`; returns the first certificate found.
    fn run(
        &self,
        j: u64,
        state: &mut SearchState<'h>,
        stats: &mut SearchStats,
    ) -> Option<Coloring> {
        stats.trials += 1;
        let mut colors = Vec::with_capacity(self.h.n());
        let mut frozen = Vec::with_capacity(self.h.n());
        let indices: Box<dyn Iterator<Item = usize>> = if self.sample_subsets {
            let mut pick = self.stream.start(j, u64::MAX);
            Box::new(std::iter::once(pick.gen_range(0..self.subsets.len())))
        } else {
            Box::new(0..self.subsets.len())
        };
        for s in indices {
            let mut rng = self.stream.start(j, s as u64);
            self.start_colors(&self.subsets[s], &mut rng, &mut colors, &mut frozen);
            state.reset(&colors, &frozen);
            let out = walk(state, &mut rng, &mut |_| {});
            *stats += out.stats;
            if out.is_colorable() {
                return out.certificate;
            }
        }
        None
    }
}

/// Repeats random walks from every r-subset for `trial_count` trials and
/// stops at the first success. `NotColorable` can be wrong with probability
/// at most `e^-alpha`; `Colorable` always carries a verified certificate.
pub fn rand_nrc(h: &Hypergraph, options: &RandOptions) -> Result<SearchOutcome, RandError> {
    let start = Instant::now();
    let (n, r) = (h.n(), h.r());
    if !(options.alpha.is_finite() && options.alpha > 1.0) {
        return Err(RandError::InvalidAlpha(options.alpha));
    }
    if n < r {
        return Ok(SearchOutcome::not_colorable(SearchStats::default()));
    }
    let trials = trial_count(n, r, options.alpha, options.trial_cap)?;
    let runner = Trials {
        h,
        subsets: Subsets::new(n, r).collect(),
        stream: RandomStream::new(options.seed),
        sample_subsets: options.sample_subsets,
    };
    let empty = Coloring::uniform(n, 1);
    let no_frozen = crate::coloring::FrozenSet::empty(n);

    let (found, mut stats) = if options.threads > 1 {
        let stats = Mutex::new(SearchStats::default());
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .expect("thread pool");
        let found = pool.install(|| {
            (0..trials).into_par_iter().find_map_first(|j| {
                let mut state = SearchState::from_parts(h, &empty, &no_frozen);
                let mut local = SearchStats::default();
                let out = runner.run(j, &mut state, &mut local);
                *stats.lock().unwrap() += local;
                out
            })
        });
        (found, stats.into_inner().unwrap())
    } else {
        let mut state = SearchState::from_parts(h, &empty, &no_frozen);
        let mut stats = SearchStats::default();
        let found = (0..trials).find_map(|j| runner.run(j, &mut state, &mut stats));
        (found, stats)
    };

    stats.elapsed = start.elapsed();
    Ok(match found {
        Some(c) => {
            assert!(
                h.is_no_rainbow_coloring(&c),
                "randomized search produced an invalid certificate"
            );
            SearchOutcome::colorable(c, stats)
        }
        None => SearchOutcome::not_colorable(stats),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::FrozenSet;
    use crate::outcome::Decision;

    #[test]
    fn trial_counts() {
        assert_eq!(trial_count(8, 4, 2.0, DEFAULT_TRIAL_CAP), Ok(512));
        assert_eq!(trial_count(4, 3, 1.1, DEFAULT_TRIAL_CAP), Ok(6));
        assert_eq!(trial_count(5, 2, 2.0, DEFAULT_TRIAL_CAP), Ok(2));
        assert_eq!(
            trial_count(5, 2, 1.0, DEFAULT_TRIAL_CAP),
            Err(RandError::InvalidAlpha(1.0))
        );
        assert!(matches!(
            trial_count(40, 4, 2.0, 1000),
            Err(RandError::TrialCap { .. })
        ));
    }

    #[test]
    fn dead_end_on_first_check() {
        let h = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        let pair = CandidatePair::new(Coloring::new(vec![1, 2, 3]), FrozenSet::all(3), 3).unwrap();
        let out = rand_local_search(&h, &pair, &mut RandomStream::new(1).start(0, 0));
        assert_eq!(out.decision, Decision::NotColorable);
        assert_eq!(out.stats.recursion_nodes, 1);
    }

    #[test]
    fn unconstrained_succeeds_immediately() {
        let h = Hypergraph::empty(6, 3).unwrap();
        let pair = CandidatePair::new(
            Coloring::new(vec![1, 2, 3, 2, 2, 1]),
            FrozenSet::from_nodes(6, [0, 1, 2]),
            3,
        )
        .unwrap();
        let out = rand_local_search(&h, &pair, &mut RandomStream::new(5).start(0, 0));
        assert!(out.is_colorable());
        assert_eq!(out.stats.recursion_nodes, 1);
    }

    #[test]
    fn walk_freezes_each_recolored_node_once() {
        let h = Hypergraph::new(
            8,
            3,
            [
                [0, 3, 4],
                [1, 3, 5],
                [2, 4, 6],
                [3, 6, 7],
                [4, 5, 7],
                [0, 6, 7],
                [1, 2, 7],
            ],
        )
        .unwrap();
        for seed in 0..200 {
            let mut rng = RandomStream::new(seed).start(0, 0);
            let mut colors = vec![1u8, 2, 3];
            colors.extend((3..8).map(|_| rng.gen_range(1..=3u8)));
            let pair = CandidatePair::new(
                Coloring::new(colors),
                FrozenSet::from_nodes(8, [0, 1, 2]),
                3,
            )
            .unwrap();
            let mut seen = Vec::new();
            let out = rand_local_search_traced(&h, &pair, &mut rng, &mut |e| {
                assert!(!pair.frozen().contains(e.node));
                assert_ne!(e.from, e.to);
                seen.push(e.node);
            });
            assert!(seen.len() <= 5);
            let mut dedup = seen.clone();
            dedup.sort_unstable();
            dedup.dedup();
            assert_eq!(dedup.len(), seen.len());
            if let Some(c) = &out.certificate {
                assert!(h.is_no_rainbow_coloring(c));
            }
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let s = RandomStream::new(42);
        let draw = |mut g: ChaCha8Rng| (0..4).map(|_| g.gen::<u64>()).collect::<Vec<_>>();
        assert_eq!(draw(s.start(3, 7)), draw(s.start(3, 7)));
        assert_ne!(draw(s.start(3, 7)), draw(s.start(3, 8)));
        assert_ne!(draw(s.start(3, 7)), draw(s.start(4, 7)));
        assert_ne!(draw(s.start(3, 7)), draw(RandomStream::new(43).start(3, 7)));
    }

    #[test]
    fn rand_nrc_basic_cases() {
        let opts = RandOptions::default();
        let out = rand_nrc(&Hypergraph::empty(5, 3).unwrap(), &opts).unwrap();
        assert!(out.is_colorable());
        assert_eq!(out.stats.trials, 1);

        let complete = Hypergraph::new(4, 3, Subsets::new(4, 3)).unwrap();
        for seed in 0..5 {
            let out = rand_nrc(
                &complete,
                &RandOptions {
                    seed,
                    ..opts.clone()
                },
            )
            .unwrap();
            assert_eq!(out.decision, Decision::NotColorable);
        }
        assert!(!rand_nrc(&Hypergraph::empty(2, 3).unwrap(), &opts)
            .unwrap()
            .is_colorable());
        assert!(rand_nrc(&complete, &RandOptions { alpha: 0.5, ..opts }).is_err());
    }

    #[test]
    fn parallel_trials_match_sequential() {
        let h = Hypergraph::new(
            9,
            3,
            [
                [0, 1, 2],
                [3, 4, 5],
                [6, 7, 8],
                [0, 3, 6],
                [1, 4, 7],
                [2, 5, 8],
                [0, 4, 8],
                [2, 4, 6],
            ],
        )
        .unwrap();
        for seed in 0..4 {
            let seq = rand_nrc(
                &h,
                &RandOptions {
                    seed,
                    ..RandOptions::default()
                },
            )
            .unwrap();
            let par = rand_nrc(
                &h,
                &RandOptions {
                    seed,
                    threads: 4,
                    ..RandOptions::default()
                },
            )
            .unwrap();
            assert_eq!(seq.decision, par.decision);
            assert_eq!(seq.certificate, par.certificate);
        }
    }
}
