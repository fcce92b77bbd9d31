//! Reproducible instance families.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::combinatorics::{binomial, unrank_subset, Subsets};
use crate::format::{format_certificate, write_instance_with_comments, PLANTED_PREFIX};
use crate::hypergraph::{Hypergraph, HypergraphError};

/// Rejections allowed per requested edge before the planted generator gives up.
pub const PLANTED_REJECTION_FACTOR: usize = 1000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("{n} nodes cannot carry {r} colors")]
    TooFewNodes { n: usize, r: usize },
    #[error("requested {m} edges but only {available} {r}-subsets exist")]
    TooManyEdges { m: usize, available: u64, r: usize },
    #[error("could not find {m} distinct non-rainbow edges under the planted coloring")]
    PlantedInfeasible { m: usize },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Random,
    Planted,
    Complete,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Random => "random",
            Family::Planted => "planted",
            Family::Complete => "complete",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(Family::Random),
            "planted" => Ok(Family::Planted),
            "complete" => Ok(Family::Complete),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

/// Generator parameters. `m` is ignored by the complete family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub hypergraph: Hypergraph,
    pub planted: Option<Coloring>,
}

impl GeneratedInstance {
    /// Instance text; a planted witness goes into a `c planted: v ...` line.
    pub fn to_text(&self) -> String {
        let comments: Vec<String> = self
            .planted
            .iter()
            .map(|c| format!("{PLANTED_PREFIX}{}", format_certificate(c)))
            .collect();
        write_instance_with_comments(&self.hypergraph, &comments)
    }
}

impl InstanceSpec {
    pub fn generate(&self) -> Result<GeneratedInstance, GenerateError> {
        match self.family {
            Family::Random => Ok(GeneratedInstance {
                hypergraph: gen_random(self.n, self.m, self.r, self.seed)?,
                planted: None,
            }),
            Family::Planted => {
                let (hypergraph, c) = gen_planted(self.n, self.m, self.r, self.seed)?;
                Ok(GeneratedInstance {
                    hypergraph,
                    planted: Some(c),
                })
            }
            Family::Complete => Ok(GeneratedInstance {
                hypergraph: gen_complete(self.n, self.r)?,
                planted: None,
            }),
        }
    }

    /// Short identifier, e.g. `planted-n10-m15-r3-s7`.
    pub fn id(&self) -> String {
        match self.family {
            Family::Complete => format!("complete-n{}-r{}", self.n, self.r),
            f => format!("{f}-n{}-m{}-r{}-s{}", self.n, self.m, self.r, self.seed),
        }
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` distinct r-subsets drawn uniformly without replacement.
pub fn gen_random(n: usize, m: usize, r: usize, seed: u64) -> Result<Hypergraph, GenerateError> {
    let available = binomial(n, r).unwrap_or(u64::MAX);
    if m as u64 > available {
        return Err(GenerateError::TooManyEdges { m, available, r });
    }
    let mut rng = rng_for(seed);
    let edges: Vec<Vec<usize>> = if available <= usize::MAX as u64 {
        index::sample(&mut rng, available as usize, m)
            .into_iter()
            .map(|rank| unrank_subset(n, r, rank as u64))
            .collect()
    } else {
        let mut seen = HashSet::new();
        while seen.len() < m {
            let mut e = index::sample(&mut rng, n, r).into_vec();
            e.sort_unstable();
            seen.insert(e);
        }
        seen.into_iter().collect()
    };
    Ok(Hypergraph::new(n, r, edges)?)
}

/// Uniform surjective coloring, by rejection from `[r]^n`.
fn surjective_coloring(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Coloring {
    loop {
        let c = Coloring::new((0..n).map(|_| rng.gen_range(1..=r as Color)).collect());
        if c.is_surjective(r) {
            return c;
        }
    }
}

/// A hypergraph built around a hidden no-rainbow coloring, returned alongside.
pub fn gen_planted(
    n: usize,
    m: usize,
    r: usize,
    seed: u64,
) -> Result<(Hypergraph, Coloring), GenerateError> {
    if n < r {
        return Err(GenerateError::TooFewNodes { n, r });
    }
    let available = binomial(n, r).unwrap_or(u64::MAX);
    if m as u64 > available {
        return Err(GenerateError::TooManyEdges { m, available, r });
    }
    let mut rng = rng_for(seed);
    let planted = surjective_coloring(n, r, &mut rng);
    let mut chosen: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut seen: HashSet<Vec<usize>> = HashSet::with_capacity(m);
    let mut rejections = 0;
    while chosen.len() < m {
        let mut e = index::sample(&mut rng, n, r).into_vec();
        e.sort_unstable();
        let mut colors: Vec<Color> = e.iter().map(|&v| planted.get(v)).collect();
        colors.sort_unstable();
        colors.dedup();
        if colors.len() == r || seen.contains(&e) {
            rejections += 1;
            if rejections > PLANTED_REJECTION_FACTOR * m {
                return Err(GenerateError::PlantedInfeasible { m });
            }
            continue;
        }
        seen.insert(e.clone());
        chosen.push(e);
    }
    Ok((Hypergraph::new(n, r, chosen)?, planted))
}

/// Every r-subset is an edge, so no surjective coloring avoids a rainbow.
pub fn gen_complete(n: usize, r: usize) -> Result<Hypergraph, GenerateError> {
    if n < r {
        return Err(GenerateError::TooFewNodes { n, r });
    }
    Ok(Hypergraph::new(n, r, Subsets::new(n, r))?)
}
