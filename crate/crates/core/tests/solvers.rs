//! Solver behavior checked against exhaustive search.

use proptest::prelude::*;
use rand::Rng;

use norainbow::coloring::{CandidatePair, Color, Coloring, FrozenSet};
use norainbow::det::{local_search, SearchBudget};
use norainbow::oracle::{oracle_decide, DEFAULT_BUDGET};
use norainbow::randomized::{rand_local_search_traced, RandOptions, RandomStream};
use norainbow::{det_nrc, gen_planted, rand_nrc, Decision, Hypergraph};

/// Whether some no-rainbow coloring agrees with `c` on `frozen`, by
/// enumerating the unfrozen nodes.
fn extendable(h: &Hypergraph, c: &Coloring, frozen: &FrozenSet) -> bool {
    let free: Vec<usize> = (0..h.n()).filter(|&v| !frozen.contains(v)).collect();
    let r = h.r();
    let mut colors = c.as_slice().to_vec();
    let total = r.pow(free.len() as u32);
    (0..total).any(|mut code| {
        for &v in &free {
            colors[v] = (code % r) as Color + 1;
            code /= r;
        }
        let cand = Coloring::new(colors.clone());
        cand.is_surjective(r)
            && h.edges().all(|e| {
                let mut seen: Vec<Color> = e.iter().map(|&v| cand.get(v)).collect();
                seen.sort_unstable();
                seen.dedup();
                seen.len() < r
            })
    })
}

fn instance(max_extra: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (3usize..=4, 0..=max_extra).prop_flat_map(move |(r, extra)| {
        let n = r + extra;
        let edge = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), r);
        proptest::collection::vec(edge, 0..max_edges)
            .prop_map(move |e| Hypergraph::new(n, r, e).unwrap())
    })
}

/// An arbitrary candidate pair: `F` holds one node per color plus extras,
/// and every color is arbitrary outside that witness set.
fn with_candidate_pair() -> impl Strategy<Value = (Hypergraph, CandidatePair)> {
    instance(4, 14).prop_flat_map(|h| {
        let (n, r) = (h.n(), h.r());
        (
            Just(h),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(1..=r as Color, n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(h, order, mut colors, extra)| {
                for (i, &v) in order[..r].iter().enumerate() {
                    colors[v] = i as Color + 1;
                }
                let frozen = FrozenSet::from_nodes(
                    n,
                    (0..n).filter(|&v| order[..r].contains(&v) || extra[v]),
                );
                let pair = CandidatePair::new(Coloring::new(colors), frozen, r).unwrap();
                (h, pair)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn det_matches_oracle(h in instance(5, 20)) {
        let det = det_nrc(&h);
        let truth = oracle_decide(&h, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(det.decision, truth.decision);
        if let Some(c) = &det.certificate {
            prop_assert!(h.is_no_rainbow_coloring(c));
        }
    }

    /// With an unrestricted radius the search, including fallback branching,
    /// succeeds exactly when the frozen colors extend to a witness.
    #[test]
    fn unrestricted_local_search_is_complete((h, pair) in with_candidate_pair()) {
        let g = h.n() - pair.frozen().len();
        let out = local_search(&h, &pair, SearchBudget(g));
        prop_assert_eq!(
            out.is_colorable(),
            extendable(&h, pair.coloring(), pair.frozen())
        );
        if let Some(c) = &out.certificate {
            prop_assert!(h.is_no_rainbow_coloring(c));
            for v in pair.frozen().iter() {
                prop_assert_eq!(c.get(v), pair.coloring().get(v));
            }
        }
    }

    #[test]
    fn rand_never_claims_a_false_positive(h in instance(4, 16), seed: u64) {
        let out = rand_nrc(&h, &RandOptions { alpha: 1.5, seed, ..RandOptions::default() }).unwrap();
        if out.is_colorable() {
            prop_assert!(h.is_no_rainbow_coloring(out.certificate.as_ref().unwrap()));
            prop_assert_eq!(oracle_decide(&h, DEFAULT_BUDGET).unwrap().decision, Decision::Colorable);
        }
    }
}

#[test]
fn rand_is_reproducible() {
    let (h, _) = gen_planted(10, 25, 3, 4).unwrap();
    let opts = RandOptions {
        seed: 99,
        ..RandOptions::default()
    };
    let a = rand_nrc(&h, &opts).unwrap();
    let b = rand_nrc(&h, &opts).unwrap();
    assert_eq!(a.decision, b.decision);
    assert_eq!(a.certificate, b.certificate);
    assert_eq!(
        (a.stats.trials, a.stats.starts, a.stats.recursion_nodes),
        (b.stats.trials, b.stats.starts, b.stats.recursion_nodes)
    );
}

#[test]
fn sampled_subsets_still_certify() {
    for seed in 0..20 {
        let (h, _) = gen_planted(9, 14, 3, seed).unwrap();
        let out = rand_nrc(
            &h,
            &RandOptions {
                seed,
                sample_subsets: true,
                ..RandOptions::default()
            },
        )
        .unwrap();
        if let Some(c) = &out.certificate {
            assert!(h.is_no_rainbow_coloring(c));
        }
    }
}

/// Recolor choices are uniform over the other `r - 1` colors: chi-squared on
/// the offset `(to - from) mod r`, which has `r - 1` equally likely values.
#[test]
fn recolor_distribution_is_uniform() {
    let r = 4;
    let (h, witness) = gen_planted(10, 40, r, 12).unwrap();
    let frozen_nodes: Vec<usize> = (1..=r as Color)
        .map(|k| (0..10).find(|&v| witness.get(v) == k).unwrap())
        .collect();
    let frozen = FrozenSet::from_nodes(10, frozen_nodes.iter().copied());
    let stream = RandomStream::new(2024);
    let mut counts = vec![0u64; r - 1];
    for s in 0..20_000 {
        let mut rng = stream.start(s, 0);
        let colors: Vec<Color> = (0..10)
            .map(|v| {
                if frozen.contains(v) {
                    witness.get(v)
                } else {
                    rng.gen_range(1..=r as Color)
                }
            })
            .collect();
        let pair = CandidatePair::new(Coloring::new(colors), frozen.clone(), r).unwrap();
        rand_local_search_traced(&h, &pair, &mut rng, &mut |e| {
            let offset = (e.to as usize + r - e.from as usize) % r;
            counts[offset - 1] += 1;
        });
    }
    let total: u64 = counts.iter().sum();
    assert!(total > 5_000, "too few recolorings: {total}");
    let expected = total as f64 / (r - 1) as f64;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    // 2 degrees of freedom, p = 0.001.
    assert!(chi2 < 13.82, "chi2 = {chi2}, counts = {counts:?}");
}
