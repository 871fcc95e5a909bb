//! Quantum moduli: the first-order cancellation system, stalks over the
//! classical moduli, stratification and the full-gauge cross-check.

mod engine;
mod oracle;
mod stratify;
mod verify;

pub use engine::{
    bracket_columns_vanish, build_cancellation_system, build_with, delta_image, engine_accepts, Column,
    Derivation, DirectionMatrix, Provenance, Unknown, Windows,
};
pub use oracle::{full_gauge_oracle, oracle_check, OracleCheckReport, OracleSystem, OracleTrial};
pub use stratify::{stratify, MinorCertificate, Stratum, StratificationReport, Strategy};
pub use verify::{verify_paper_claims, Claim, SigmaKind, Status, VerifyReport};

use serde::Serialize;

use crate::bundles::{extension_basis, Epsilon, ExtensionClass};
use crate::error::{Error, Result};
use crate::geometry::Threefold;
use crate::linalg;
use crate::poisson::Bivector;
use crate::ring::{Monomial, ParamPoly, Scalar};
use crate::sampling;

/// Monomials whose coefficients must be cancelled: `z^j` times the
/// first-neighbourhood extension basis, in the same order.
pub fn obstruction_basis(k: u32, j: u32) -> Result<Vec<Monomial>> {
    Threefold::for_moduli(k)?;
    if j < 2 {
        return Err(Error::Invalid(format!("no moduli for j = {j}: the extension class vanishes")));
    }
    Ok(extension_basis(k, j, 1, Epsilon::Both)?
        .into_iter()
        .map(|m| Monomial::new(m.l + j as i32, m.i, m.s))
        .collect())
}

/// Number of extension parameters, `4j - 4`.
pub fn dimension(k: u32, j: u32) -> Result<usize> {
    Ok(obstruction_basis(k, j)?.len())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StalkReport {
    pub k: u32,
    pub j: u32,
    pub sigma: String,
    pub point: Vec<Scalar>,
    pub rank: usize,
    pub stalk: usize,
    /// Obstruction rows whose unit vectors span a complement of the image.
    pub quotient_basis: Vec<String>,
    pub windows: Windows,
    pub columns: Vec<String>,
    pub rows: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

fn check_point(k: u32, j: u32, p: &[Scalar]) -> Result<()> {
    let n = dimension(k, j)?;
    if p.len() != n {
        return Err(Error::Invalid(format!("point has {} coordinates, expected {n}", p.len())));
    }
    if p.iter().all(|x| x.is_zero()) {
        return Err(Error::Invalid("p = 0 is not a point of the classical moduli".into()));
    }
    Ok(())
}

/// Rank of the numeric system at `p`, rebuilt with enlarged windows to guard
/// against truncation artefacts.
pub fn checked_matrix(k: u32, j: u32, sigma: &Bivector, p: &[Scalar]) -> Result<(DirectionMatrix<Scalar>, usize)> {
    check_point(k, j, p)?;
    let class = ExtensionClass::first_neighbourhood(k, j, p.to_vec())?;
    let w = Windows::default_for(k, j, sigma);
    let d = build_with(k, j, sigma, &class, w, Derivation::FirstPrinciples)?;
    if !d.offset_is_zero() {
        return Err(Error::Invalid("gauge-free part has obstruction coordinates".into()));
    }
    let rank = d.rank();
    let wide = build_with(k, j, sigma, &class, w.enlarged(2), Derivation::FirstPrinciples)?;
    let wide_rank = wide.rank();
    if wide_rank != rank {
        return Err(Error::WindowInstability(format!("rank {rank} grows to {wide_rank} with windows enlarged by 2")));
    }
    Ok((d, rank))
}

pub fn stalk_dimension(k: u32, j: u32, sigma: &Bivector, p: &[Scalar]) -> Result<StalkReport> {
    let (d, rank) = checked_matrix(k, j, sigma, p)?;
    let labels = d.row_labels();
    let quotient_basis = linalg::quotient_witness(&d.matrix).into_iter().map(|r| labels[r].clone()).collect();
    Ok(StalkReport {
        k,
        j,
        sigma: sigma.to_string(),
        point: p.to_vec(),
        rank,
        stalk: d.rows.len() - rank,
        quotient_basis,
        windows: d.windows,
        columns: d.column_labels(),
        rows: labels,
        matrix: d.matrix.to_strings(),
    })
}

/// Symbolic systems at the default and enlarged windows, for many stalk
/// queries with the same `(k, j, σ)`.
pub struct StalkSampler {
    pub k: u32,
    pub j: u32,
    narrow: DirectionMatrix<ParamPoly>,
    wide: DirectionMatrix<ParamPoly>,
}

impl StalkSampler {
    pub fn new(k: u32, j: u32, sigma: &Bivector) -> Result<Self> {
        let class = ExtensionClass::symbolic(k, j)?;
        let w = Windows::default_for(k, j, sigma);
        let narrow = build_with(k, j, sigma, &class, w, Derivation::FirstPrinciples)?;
        let wide = build_with(k, j, sigma, &class, w.enlarged(2), Derivation::FirstPrinciples)?;
        Ok(StalkSampler { k, j, narrow, wide })
    }

    pub fn system(&self) -> &DirectionMatrix<ParamPoly> {
        &self.narrow
    }

    /// `(4j-4) - rank` at `p`, with the same window guard as [`stalk_dimension`].
    pub fn stalk(&self, p: &[Scalar]) -> Result<usize> {
        check_point(self.k, self.j, p)?;
        let rank = linalg::rank(&self.narrow.specialize(p));
        let wide_rank = linalg::rank(&self.wide.specialize(p));
        if wide_rank != rank {
            return Err(Error::WindowInstability(format!("rank {rank} grows to {wide_rank} with windows enlarged by 2")));
        }
        Ok(self.narrow.rows.len() - rank)
    }
}

/// Maximum rank over `trials` random points drawn from `seed`.
pub fn generic_rank(k: u32, j: u32, sigma: &Bivector, trials: usize, seed: u64) -> Result<usize> {
    let n = dimension(k, j)?;
    let symbolic = build_cancellation_system(k, j, sigma, &ExtensionClass::symbolic(k, j)?)?;
    let mut rng = sampling::rng(seed);
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let p = sampling::rationals(&mut rng, n);
        best = best.max(linalg::rank(&symbolic.specialize(&p)));
    }
    Ok(best)
}
