//! The `nrc` command line.
//!
//! Output follows SAT-solver conventions: `c` comment lines, one `s` status
//! line and, for positive answers, a `v` certificate line. Exit codes:
//! 10 colorable, 20 not colorable, 30 decisive, 31 not decisive, 0/2 for a
//! valid/invalid certificate in `verify`, 1 on error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::bench::{run_bench, Algo, BenchConfig, BenchInstance};
use crate::coloring::Coloring;
use crate::det::{det_nrc_with, search_radius, DetOptions};
use crate::format::{format_certificate, parse_certificate, parse_instance};
use crate::generate::{Family, InstanceSpec};
use crate::hypergraph::Hypergraph;
use crate::oracle::{oracle_decide_parallel, oracle_verify_certificate, DEFAULT_BUDGET};
use crate::outcome::{Decision, SearchOutcome};
use crate::randomized::{rand_nrc, RandOptions, DEFAULT_TRIAL_CAP};

pub const EXIT_COLORABLE: i32 = 10;
pub const EXIT_UNCOLORABLE: i32 = 20;
pub const EXIT_DECISIVE: i32 = 30;
pub const EXIT_NOT_DECISIVE: i32 = 31;
pub const EXIT_VALID: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ERROR: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "nrc",
    version,
    about = "No-rainbow hypergraph coloring solvers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide an instance and print a certificate when colorable
    Solve {
        path: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Exhaustive enumeration over all r^n colorings
    Oracle {
        path: PathBuf,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Generate an instance
    Gen {
        #[arg(long, default_value = "random")]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate ("v ..." line) against an instance
    Verify {
        path: PathBuf,
        /// File holding the certificate, or "-" for stdin
        certificate: PathBuf,
    },
    /// Decisiveness of a 4-uniform instance: decisive iff not 4-colorable without rainbow
    Decisive {
        path: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Run solvers over a corpus and emit CSV
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Limits {
    /// Maximum colorings the oracle may enumerate
    #[arg(long, env = "NRC_ORACLE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Maximum number of randomized trials
    #[arg(long, env = "NRC_TRIAL_CAP", default_value_t = DEFAULT_TRIAL_CAP)]
    pub trial_cap: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value_t = Algo::Det)]
    pub algo: Algo,
    /// Confidence parameter of the randomized solver (> 1)
    #[arg(long, default_value_t = 3.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Search radius for the deterministic solver (default floor((r-1)n/r))
    #[arg(long)]
    pub radius: Option<usize>,
    /// Randomized solver: one random subset per trial (not exhaustive)
    #[arg(long)]
    pub sample_subsets: bool,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Instance files; when absent the corpus is generated
    pub files: Vec<PathBuf>,
    #[arg(long, default_value = "random")]
    pub family: Family,
    /// Node counts, e.g. "6-12" or "6,8,10"
    #[arg(long, default_value = "6-10")]
    pub n: String,
    #[arg(long, default_value_t = 10)]
    pub m: usize,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    /// Generated instances per node count
    #[arg(long, default_value_t = 1)]
    pub instances: u64,
    #[arg(long, value_delimiter = ',', default_value = "det,rand")]
    pub algos: Vec<Algo>,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long, default_value_t = 3.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[command(flatten)]
    pub limits: Limits,
}

fn read_instance(path: &Path) -> Result<Hypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_node_list(spec: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once('-') {
            let (lo, hi): (usize, usize) = (lo.parse()?, hi.parse()?);
            out.extend(lo..=hi);
        } else {
            out.push(part.parse()?);
        }
    }
    Ok(out)
}

/// Runs the chosen solver. Certificates are re-checked by the oracle's
/// verifier before being handed back.
fn solve(h: &Hypergraph, args: &SolverArgs, out: &mut dyn Write) -> Result<SearchOutcome> {
    let (n, r) = (h.n(), h.r());
    writeln!(out, "c nrc {} n={} m={} r={}", args.algo, n, h.m(), r)?;
    let outcome = match args.algo {
        Algo::Det => {
            let default = if n >= r { search_radius(n, r) } else { 0 };
            let radius = args.radius.unwrap_or(default);
            writeln!(out, "c radius {radius}")?;
            if radius < default {
                writeln!(
                    out,
                    "c warning: radius below the default {default}; a negative answer is not conclusive"
                )?;
            }
            let o = det_nrc_with(
                h,
                &DetOptions {
                    threads: args.threads,
                    radius: Some(radius),
                },
            );
            writeln!(out, "c starts {}", o.stats.starts)?;
            writeln!(out, "c recursion_nodes {}", o.stats.recursion_nodes)?;
            writeln!(out, "c fallback_nodes {}", o.stats.fallback_nodes)?;
            o
        }
        Algo::Rand => {
            writeln!(out, "c alpha {} seed {}", args.alpha, args.seed)?;
            if args.sample_subsets {
                writeln!(
                    out,
                    "c warning: sampling one subset per trial; the success bound does not apply"
                )?;
            }
            let o = rand_nrc(
                h,
                &RandOptions {
                    alpha: args.alpha,
                    seed: args.seed,
                    threads: args.threads,
                    trial_cap: args.limits.trial_cap,
                    sample_subsets: args.sample_subsets,
                },
            )?;
            writeln!(out, "c trials {}", o.stats.trials)?;
            writeln!(out, "c starts {}", o.stats.starts)?;
            writeln!(out, "c recursion_nodes {}", o.stats.recursion_nodes)?;
            o
        }
        Algo::Oracle => {
            let rep = oracle_decide_parallel(h, args.limits.budget, args.threads)?;
            writeln!(out, "c witnesses {}", rep.witness_count)?;
            SearchOutcome {
                decision: rep.decision,
                certificate: rep.sample_witness,
                stats: Default::default(),
            }
        }
    };
    if let Some(c) = &outcome.certificate {
        if !oracle_verify_certificate(h, c) {
            bail!("internal error: certificate failed verification");
        }
    }
    Ok(outcome)
}

fn print_certificate(out: &mut dyn Write, c: Option<&Coloring>) -> Result<()> {
    if let Some(c) = c {
        writeln!(out, "{}", format_certificate(c))?;
    }
    Ok(())
}

/// Executes a parsed command, writing the report to `out`. Returns the exit
/// code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Solve { path, solver } => {
            let h = read_instance(&path)?;
            let outcome = solve(&h, &solver, out)?;
            match outcome.decision {
                Decision::Colorable => {
                    writeln!(out, "s COLORABLE")?;
                    print_certificate(out, outcome.certificate.as_ref())?;
                    Ok(EXIT_COLORABLE)
                }
                Decision::NotColorable => {
                    writeln!(out, "s UNCOLORABLE")?;
                    Ok(EXIT_UNCOLORABLE)
                }
            }
        }
        Command::Oracle {
            path,
            limits,
            threads,
        } => {
            let h = read_instance(&path)?;
            let args = SolverArgs {
                algo: Algo::Oracle,
                alpha: 3.0,
                seed: 0,
                threads,
                radius: None,
                sample_subsets: false,
                limits,
            };
            let outcome = solve(&h, &args, out)?;
            if outcome.is_colorable() {
                writeln!(out, "s COLORABLE")?;
                print_certificate(out, outcome.certificate.as_ref())?;
                Ok(EXIT_COLORABLE)
            } else {
                writeln!(out, "s UNCOLORABLE")?;
                Ok(EXIT_UNCOLORABLE)
            }
        }
        Command::Gen {
            family,
            n,
            m,
            r,
            seed,
            output,
        } => {
            let spec = InstanceSpec {
                family,
                n,
                m,
                r,
                seed,
            };
            let text = spec.generate()?.to_text();
            match output {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::Verify { path, certificate } => {
            let h = read_instance(&path)?;
            let text = if certificate.as_os_str() == "-" {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            } else {
                fs::read_to_string(&certificate)
                    .with_context(|| format!("reading {}", certificate.display()))?
            };
            let c = parse_certificate(&text)?;
            if oracle_verify_certificate(&h, &c) {
                writeln!(out, "s VALID")?;
                Ok(EXIT_VALID)
            } else {
                writeln!(out, "s INVALID")?;
                Ok(EXIT_INVALID)
            }
        }
        Command::Decisive { path, solver } => {
            let h = read_instance(&path)?;
            if h.r() != 4 {
                bail!(
                    "decisiveness is defined for 4-uniform instances, got r = {}",
                    h.r()
                );
            }
            let outcome = solve(&h, &solver, out)?;
            if outcome.is_colorable() {
                writeln!(out, "s NOT-DECISIVE")?;
                print_certificate(out, outcome.certificate.as_ref())?;
                Ok(EXIT_NOT_DECISIVE)
            } else {
                writeln!(out, "s DECISIVE")?;
                Ok(EXIT_DECISIVE)
            }
        }
        Command::Bench(args) => {
            let corpus = bench_corpus(&args)?;
            let cfg = BenchConfig {
                alpha: args.alpha,
                seed: args.seed,
                threads: args.threads,
                oracle_budget: args.limits.budget,
                trial_cap: args.limits.trial_cap,
            };
            run_bench(&corpus, &args.algos, args.reps, &cfg, out)?;
            Ok(0)
        }
    }
}

fn bench_corpus(args: &BenchArgs) -> Result<Vec<BenchInstance>> {
    if !args.files.is_empty() {
        return Ok(args
            .files
            .iter()
            .map(|p| BenchInstance {
                id: p.display().to_string(),
                hypergraph: read_instance(p).map_err(|e| format!("{e:#}")),
            })
            .collect());
    }
    let mut corpus = Vec::new();
    for n in parse_node_list(&args.n)? {
        let count = if args.family == Family::Complete {
            1
        } else {
            args.instances
        };
        for k in 0..count {
            let spec = InstanceSpec {
                family: args.family,
                n,
                m: args.m,
                r: args.r,
                seed: args.seed.wrapping_add(k),
            };
            corpus.push(BenchInstance {
                id: spec.id(),
                hypergraph: spec
                    .generate()
                    .map(|g| g.hypergraph)
                    .map_err(|e| e.to_string()),
            });
        }
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_lists() {
        assert_eq!(parse_node_list("6-9").unwrap(), vec![6, 7, 8, 9]);
        assert_eq!(parse_node_list("4,6, 8").unwrap(), vec![4, 6, 8]);
        assert!(parse_node_list("x").is_err());
    }
}
