//! Corank stratification of the classical moduli by coordinate support.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use crate::bundles::ExtensionClass;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::poisson::Bivector;
use crate::ring::{Coeff, ParamPoly, Scalar};
use crate::sampling;

use super::engine::build_cancellation_system;
use super::{checked_matrix, dimension};

const DRAWS: u64 = 5;
const MAX_PATTERNS: usize = 4096;
const MINOR_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    SupportPatterns,
    SymbolicMinors,
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "support-patterns" => Ok(Strategy::SupportPatterns),
            "symbolic-minors" => Ok(Strategy::SymbolicMinors),
            _ => Err(Error::Parse(format!("unknown strategy {s:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::SupportPatterns => "support-patterns",
            Strategy::SymbolicMinors => "symbolic-minors",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stratum {
    pub corank: usize,
    /// Number of sampled points landing here.
    pub hits: usize,
    /// Indices of the nonzero coordinates of the first witness.
    pub support: Vec<usize>,
    pub witness: Vec<Scalar>,
    /// The witness corank, recomputed from a fresh numeric build.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinorCertificate {
    pub rows: Vec<usize>,
    pub columns: Vec<usize>,
    pub determinant: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratificationReport {
    pub k: u32,
    pub j: u32,
    pub sigma: String,
    pub strategy: Strategy,
    pub seed: u64,
    pub dimension: usize,
    pub patterns: usize,
    pub draws_per_pattern: u64,
    pub generic_rank: usize,
    pub generic_stalk: usize,
    /// Full-support point attaining the generic rank.
    pub generic_point: Vec<Scalar>,
    pub strata: Vec<Stratum>,
    pub max_corank: usize,
    /// Coranks strictly between generic and maximum that were never hit.
    pub gaps: Vec<usize>,
    /// Closed-form values for extremal structures, `2j-k-1` and `4j-k-4`.
    pub expected_generic_stalk: i64,
    pub expected_max_corank: i64,
    pub exceeds_max: bool,
    pub certificate: Option<MinorCertificate>,
}

impl StratificationReport {
    pub fn coranks(&self) -> Vec<usize> {
        self.strata.iter().map(|s| s.corank).collect()
    }

    pub fn stratum(&self, corank: usize) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.corank == corank)
    }
}

fn patterns(n: usize, seed: u64) -> Vec<u64> {
    let all = |v: &mut Vec<u64>| v.sort_by_key(|&m| (m.count_ones(), m));
    if n <= 12 {
        let mut v: Vec<u64> = (1..(1u64 << n)).collect();
        all(&mut v);
        return v;
    }
    let full = (1u64 << n) - 1;
    let mut set: std::collections::BTreeSet<u64> = (0..n).map(|i| 1u64 << i).collect();
    set.insert(full);
    let mut rng = sampling::rng(seed ^ 0x5eed_0f_5a11);
    while set.len() < MAX_PATTERNS {
        let size = rand::Rng::gen_range(&mut rng, 1..=n);
        let mut m = 0u64;
        for i in sample(&mut rng, n, size) {
            m |= 1 << i;
        }
        set.insert(m);
    }
    let mut v: Vec<u64> = set.into_iter().collect();
    all(&mut v);
    v
}

fn point_on(mask: u64, n: usize, rng: &mut impl rand::Rng) -> Vec<Scalar> {
    (0..n)
        .map(|i| if mask >> i & 1 == 1 { sampling::rational(rng) } else { Scalar::zero() })
        .collect()
}

fn certify(sym: &Matrix<ParamPoly>, at: &[Scalar]) -> Option<MinorCertificate> {
    let num = linalg::specialize(sym, at);
    let (rows, columns) = linalg::maximal_minor(&num);
    if rows.is_empty() || rows.len() > MINOR_CAP {
        return None;
    }
    let det = linalg::determinant(&sym.select(&rows, &columns));
    if det.is_zero() {
        return None;
    }
    Some(MinorCertificate { rows, columns, determinant: det.to_string() })
}

pub fn stratify(k: u32, j: u32, sigma: &Bivector, strategy: Strategy, seed: u64) -> Result<StratificationReport> {
    let n = dimension(k, j)?;
    let sym = build_cancellation_system(k, j, sigma, &ExtensionClass::symbolic(k, j)?)?;
    let pats = patterns(n, seed);

    let samples: Vec<Vec<(usize, Vec<Scalar>)>> = pats
        .par_iter()
        .enumerate()
        .map(|(idx, &mask)| {
            let mut rng = sampling::substream(seed, idx as u64);
            (0..DRAWS)
                .map(|_| {
                    let p = point_on(mask, n, &mut rng);
                    (n - linalg::rank(&sym.specialize(&p)), p)
                })
                .collect()
        })
        .collect();

    // the full-support draws double as the generic sample
    let full = (1u64 << n) - 1;
    let full_idx = pats.iter().position(|&m| m == full).expect("full pattern present");
    let (generic_stalk, generic_point) = samples[full_idx]
        .iter()
        .min_by_key(|(c, _)| *c)
        .cloned()
        .expect("draws per pattern is positive");
    let generic_rank = n - generic_stalk;

    let mut by_corank: BTreeMap<usize, (usize, u64, Vec<Scalar>)> = BTreeMap::new();
    for (mask, draws) in pats.iter().zip(samples) {
        for (corank, p) in draws {
            by_corank.entry(corank).and_modify(|e| e.0 += 1).or_insert((1, *mask, p));
        }
    }
    let mut strata = Vec::new();
    for (corank, (hits, mask, witness)) in by_corank {
        let (_, rank) = checked_matrix(k, j, sigma, &witness)?;
        strata.push(Stratum {
            corank,
            hits,
            support: (0..n).filter(|i| mask >> i & 1 == 1).collect(),
            witness,
            verified: n - rank == corank,
        });
    }

    let max_corank = strata.iter().map(|s| s.corank).max().unwrap_or(generic_stalk);
    let gaps = (generic_stalk..=max_corank).filter(|c| !strata.iter().any(|s| s.corank == *c)).collect();
    let expected_max_corank = 4 * j as i64 - k as i64 - 4;
    let certificate = match strategy {
        Strategy::SymbolicMinors => certify(&sym.matrix, &generic_point),
        Strategy::SupportPatterns => None,
    };
    Ok(StratificationReport {
        k,
        j,
        sigma: sigma.to_string(),
        strategy,
        seed,
        dimension: n,
        patterns: pats.len(),
        draws_per_pattern: DRAWS,
        generic_rank,
        generic_stalk,
        generic_point,
        strata,
        max_corank,
        gaps,
        expected_generic_stalk: 2 * j as i64 - k as i64 - 1,
        expected_max_corank,
        exceeds_max: max_corank as i64 > expected_max_corank,
        certificate,
    })
}
