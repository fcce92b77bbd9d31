//! Benchmark harness producing one CSV row per (instance, algorithm, seed).

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::det::{det_nrc_with, DetOptions};
use crate::hypergraph::Hypergraph;
use crate::oracle::oracle_decide_parallel;
use crate::outcome::Decision;
use crate::randomized::{rand_nrc, RandOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Det,
    Rand,
    Oracle,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Det => "det",
            Algo::Rand => "rand",
            Algo::Oracle => "oracle",
        })
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "det" => Ok(Algo::Det),
            "rand" => Ok(Algo::Rand),
            "oracle" => Ok(Algo::Oracle),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

/// One CSV row. For the oracle, `recursion_nodes` is the number of
/// colorings enumerated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub algo: Algo,
    pub seed: u64,
    pub alpha: Option<f64>,
    pub decision: Option<Decision>,
    pub recursion_nodes: u64,
    pub trials: u64,
    pub elapsed_ms: f64,
    pub error: String,
}

pub const CSV_HEADER: &str =
    "instance,n,m,r,algo,seed,alpha,decision,recursion_nodes,trials,elapsed_ms,error";

/// A corpus entry; generation failures are carried through so they show up
/// in the output rows.
#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub id: String,
    pub hypergraph: Result<Hypergraph, String>,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub alpha: f64,
    /// Repetition `k` runs with seed `seed + k`.
    pub seed: u64,
    pub threads: usize,
    pub oracle_budget: u64,
    pub trial_cap: u64,
}

fn run_one(
    h: &Hypergraph,
    algo: Algo,
    seed: u64,
    cfg: &BenchConfig,
) -> Result<(Decision, u64, u64), String> {
    match algo {
        Algo::Det => {
            let out = det_nrc_with(
                h,
                &DetOptions {
                    threads: cfg.threads,
                    radius: None,
                },
            );
            Ok((out.decision, out.stats.recursion_nodes, out.stats.trials))
        }
        Algo::Rand => {
            let out = rand_nrc(
                h,
                &RandOptions {
                    alpha: cfg.alpha,
                    seed,
                    threads: cfg.threads,
                    trial_cap: cfg.trial_cap,
                    sample_subsets: false,
                },
            )
            .map_err(|e| e.to_string())?;
            Ok((out.decision, out.stats.recursion_nodes, out.stats.trials))
        }
        Algo::Oracle => {
            let rep = oracle_decide_parallel(h, cfg.oracle_budget, cfg.threads)
                .map_err(|e| e.to_string())?;
            let enumerated = (h.r() as u64).pow(h.n() as u32);
            Ok((rep.decision, enumerated, 0))
        }
    }
}

/// Runs every algorithm `reps` times on every instance, writing rows in
/// instance-major, algorithm-minor, repetition-minor order. Returns the
/// number of data rows.
pub fn run_bench<W: Write>(
    corpus: &[BenchInstance],
    algos: &[Algo],
    reps: usize,
    cfg: &BenchConfig,
    out: W,
) -> csv::Result<usize> {
    let mut writer = csv::Writer::from_writer(out);
    let mut rows = 0;
    for inst in corpus {
        for &algo in algos {
            for rep in 0..reps {
                let seed = cfg.seed.wrapping_add(rep as u64);
                let mut record = BenchRecord {
                    instance: inst.id.clone(),
                    n: 0,
                    m: 0,
                    r: 0,
                    algo,
                    seed,
                    alpha: (algo == Algo::Rand).then_some(cfg.alpha),
                    decision: None,
                    recursion_nodes: 0,
                    trials: 0,
                    elapsed_ms: 0.0,
                    error: String::new(),
                };
                match &inst.hypergraph {
                    Ok(h) => {
                        record.n = h.n();
                        record.m = h.m();
                        record.r = h.r();
                        let start = std::time::Instant::now();
                        match run_one(h, algo, seed, cfg) {
                            Ok((decision, nodes, trials)) => {
                                record.decision = Some(decision);
                                record.recursion_nodes = nodes;
                                record.trials = trials;
                            }
                            Err(e) => record.error = e,
                        }
                        record.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
                    }
                    Err(e) => record.error = e.clone(),
                }
                writer.serialize(&record)?;
                rows += 1;
            }
        }
    }
    writer.flush()?;
    Ok(rows)
}

/// Parses rows written by [`run_bench`].
pub fn read_bench(text: &str) -> csv::Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_complete;

    fn cfg() -> BenchConfig {
        BenchConfig {
            alpha: 2.0,
            seed: 11,
            threads: 1,
            oracle_budget: crate::oracle::DEFAULT_BUDGET,
            trial_cap: crate::randomized::DEFAULT_TRIAL_CAP,
        }
    }

    #[test]
    fn row_count_order_and_round_trip() {
        let corpus = vec![BenchInstance {
            id: "k4".into(),
            hypergraph: Ok(gen_complete(4, 3).unwrap()),
        }];
        let mut buf = Vec::new();
        let rows = run_bench(&corpus, &[Algo::Det, Algo::Rand], 3, &cfg(), &mut buf).unwrap();
        assert_eq!(rows, 6);
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        let recs = read_bench(&text).unwrap();
        assert_eq!(recs.len(), 6);
        let order: Vec<(Algo, u64)> = recs.iter().map(|r| (r.algo, r.seed)).collect();
        assert_eq!(
            order,
            vec![
                (Algo::Det, 11),
                (Algo::Det, 12),
                (Algo::Det, 13),
                (Algo::Rand, 11),
                (Algo::Rand, 12),
                (Algo::Rand, 13)
            ]
        );
        assert!(recs
            .iter()
            .all(|r| r.decision == Some(Decision::NotColorable)));
        assert_eq!(recs[0].alpha, None);
        assert_eq!(recs[3].alpha, Some(2.0));

        let mut again = Vec::new();
        let mut w = csv::Writer::from_writer(&mut again);
        for r in &recs {
            w.serialize(r).unwrap();
        }
        drop(w);
        assert_eq!(
            read_bench(std::str::from_utf8(&again).unwrap()).unwrap(),
            recs
        );
    }

    #[test]
    fn errors_are_recorded_in_row() {
        let corpus = vec![
            BenchInstance {
                id: "bad".into(),
                hypergraph: Err("could not generate".into()),
            },
            BenchInstance {
                id: "big".into(),
                hypergraph: Ok(Hypergraph::empty(30, 4).unwrap()),
            },
        ];
        let mut buf = Vec::new();
        let rows = run_bench(&corpus, &[Algo::Oracle], 1, &cfg(), &mut buf).unwrap();
        assert_eq!(rows, 2);
        let recs = read_bench(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(recs[0].error, "could not generate");
        assert!(recs[1].error.contains("budget"));
        assert_eq!(recs[1].decision, None);
    }
}
