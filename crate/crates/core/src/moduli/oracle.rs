//! Brute-force check of the reduced engine against the whole matrix equation
//! `A_V ⋆ T_q = T_p ⋆ A_U` with every gauge entry a windowed unknown.
//!
//! Works in `A / (ħ², ħ I², I^{cu+1})` with `I = (u1, u2)` and
//! `cu = 1 + drop(σ)`: the classical part is solved to u-degree `cu` so that
//! the brackets of the first-order part are determined mod `I²`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bundles::ExtensionClass;
use crate::error::{Error, Result};
use crate::linalg::{self, SparseSystem};
use crate::poisson::{bracket, Bivector};
use crate::ring::{LaurentPoly, Monomial, Scalar};
use crate::sampling;

use super::engine::{build_cancellation_system, delta_image};
use super::dimension;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    U,
    V,
}

/// Size and outcome of one assembled linear system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleSystem {
    pub window: i32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub solvable: bool,
}

fn unknown_monomials(k: u32, side: Side, maxu: u32, w: i32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in 0..=maxu {
        for s in 0..=(maxu - i) {
            let range = match side {
                Side::U => 0..=w,
                Side::V => -w..=(k * i + (2 - k) * s) as i32,
            };
            out.extend(range.map(|l| Monomial::new(l, i, s)));
        }
    }
    out
}

type RowKey = (u8, usize, usize, Monomial);

#[derive(Default)]
struct Assembler {
    rows: BTreeMap<RowKey, (Vec<(usize, Scalar)>, Scalar)>,
}

impl Assembler {
    fn add(&mut self, eq: u8, r: usize, c: usize, f: &LaurentPoly<Scalar>, col: Option<usize>, sign: i64) {
        for (m, v) in f.terms() {
            let v = if sign < 0 { -v } else { v.clone() };
            let row = self.rows.entry((eq, r, c, *m)).or_insert_with(|| (Vec::new(), Scalar::zero()));
            match col {
                Some(col) => row.0.push((col, v)),
                // known terms move to the right-hand side
                None => row.1 = &row.1 - &v,
            }
        }
    }
}

/// Assembles and solves the system with window `w`.
pub fn solve_system(
    k: u32,
    j: u32,
    sigma: &Bivector,
    p: &[Scalar],
    delta: &[Scalar],
    w: i32,
) -> Result<OracleSystem> {
    let cu = 1 + sigma.udeg_drop();
    let pp = ExtensionClass::first_neighbourhood(k, j, p.to_vec())?.poly();
    let dd = ExtensionClass::first_neighbourhood(k, j, delta.to_vec())?.poly();
    let ji = j as i32;
    let zero = LaurentPoly::zero();
    let t0 = [[LaurentPoly::mono(ji, 0, 0), pp], [zero.clone(), LaurentPoly::mono(-ji, 0, 0)]];
    let tq1 = [[zero.clone(), dd], [zero.clone(), zero]];
    let e0 = |f: LaurentPoly<Scalar>| f.truncate_neighborhood(cu);
    let e1 = |f: LaurentPoly<Scalar>| f.truncate_neighborhood(1);

    let mut asm = Assembler::default();
    let mut col = 0usize;
    // a = 1 + ...: the fixed constant only enters E0
    let one = LaurentPoly::<Scalar>::one();
    for i in 0..2 {
        asm.add(0, i, 0, &e0(&t0[i][0] * &one), None, -1);
    }
    for (first, side, maxu) in [(false, Side::U, cu), (false, Side::V, cu), (true, Side::U, 1), (true, Side::V, 1)] {
        let monos = unknown_monomials(k, side, maxu, w);
        for r in 0..2 {
            for c in 0..2 {
                for m in &monos {
                    if !first && side == Side::U && r == 0 && c == 0 && *m == Monomial::ONE {
                        continue;
                    }
                    let x = LaurentPoly::term(*m, Scalar::one());
                    match (first, side) {
                        (false, Side::U) => {
                            // - T0 A0 and - {T0, A0}
                            for i in 0..2 {
                                asm.add(0, i, c, &e0(&t0[i][r] * &x), Some(col), -1);
                                asm.add(1, i, c, &e1(bracket(sigma, &t0[i][r], &x)), Some(col), -1);
                            }
                        }
                        (false, Side::V) => {
                            // B0 T0, B0 Tq1 and {B0, T0}
                            for kk in 0..2 {
                                asm.add(0, r, kk, &e0(&x * &t0[c][kk]), Some(col), 1);
                                let f = &(&x * &tq1[c][kk]) + &bracket(sigma, &x, &t0[c][kk]);
                                asm.add(1, r, kk, &e1(f), Some(col), 1);
                            }
                        }
                        (true, Side::U) => {
                            for i in 0..2 {
                                asm.add(1, i, c, &e1(&t0[i][r] * &x), Some(col), -1);
                            }
                        }
                        (true, Side::V) => {
                            for kk in 0..2 {
                                asm.add(1, r, kk, &e1(&x * &t0[c][kk]), Some(col), 1);
                            }
                        }
                    }
                    col += 1;
                }
            }
        }
    }
    let mut sys = SparseSystem::new(col);
    let equations = asm.rows.len();
    for (_, (entries, rhs)) in asm.rows {
        sys.push(entries, rhs);
    }
    let (rank, solvable) = sys.solve_status();
    Ok(OracleSystem { window: w, unknowns: col, equations, rank, solvable })
}

/// Whether the first-order change `Δ = q' - p'` is realized by some gauge
/// transformation of the full matrix equation. The decision is recomputed
/// with windows enlarged by 2 and must not change.
pub fn full_gauge_oracle(k: u32, j: u32, sigma: &Bivector, p: &[Scalar], delta: &[Scalar]) -> Result<bool> {
    let n = dimension(k, j)?;
    if p.len() != n || delta.len() != n {
        return Err(Error::Invalid(format!("expected {n} coordinates for p and delta")));
    }
    let w = 2 * j as i32 + 4;
    let small = solve_system(k, j, sigma, p, delta, w)?;
    let large = solve_system(k, j, sigma, p, delta, w + 2)?;
    if small.solvable != large.solvable {
        return Err(Error::WindowInstability(format!(
            "oracle decision changes from {} to {} when the window grows from {w} to {}",
            small.solvable,
            large.solvable,
            w + 2
        )));
    }
    Ok(small.solvable)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleTrial {
    pub p: Vec<Scalar>,
    pub delta: Vec<Scalar>,
    /// Whether `Δ` was drawn from the engine's span.
    pub from_span: bool,
    pub engine: bool,
    pub oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheckReport {
    pub k: u32,
    pub j: u32,
    pub sigma: String,
    pub seed: u64,
    pub trials: Vec<OracleTrial>,
    pub agreements: usize,
    pub engine_true: usize,
    pub oracle_true: usize,
}

impl OracleCheckReport {
    pub fn all_agree(&self) -> bool {
        self.agreements == self.trials.len()
    }
}

/// Compares engine and oracle on `trials` random `(p, Δ)`. Even-numbered
/// trials draw `Δ` from the engine's span, odd ones uniformly.
pub fn oracle_check(k: u32, j: u32, sigma: &Bivector, trials: usize, seed: u64) -> Result<OracleCheckReport> {
    let n = dimension(k, j)?;
    let symbolic = build_cancellation_system(k, j, sigma, &ExtensionClass::symbolic(k, j)?)?;
    let draws: Vec<(Vec<Scalar>, Vec<Scalar>, bool)> = (0..trials)
        .map(|t| {
            let mut rng = sampling::substream(seed, t as u64);
            let p = sampling::rationals(&mut rng, n);
            let from_span = t % 2 == 0;
            let delta = if from_span {
                let d = symbolic.specialize(&p);
                let mut v = vec![Scalar::zero(); n];
                for c in 0..d.cols {
                    let x = if rng.gen_bool(0.5) { sampling::rational(&mut rng) } else { Scalar::zero() };
                    for (r, e) in v.iter_mut().enumerate() {
                        *e = &*e - &(d.get(r, c) * &x);
                    }
                }
                v
            } else {
                sampling::rationals(&mut rng, n)
            };
            (p, delta, from_span)
        })
        .collect();
    let out = draws
        .into_par_iter()
        .map(|(p, delta, from_span)| {
            let class = ExtensionClass::first_neighbourhood(k, j, p.clone())?;
            let img = delta_image(k, j, sigma, &class, &delta)?;
            let engine = linalg::in_column_span(&symbolic.specialize(&p), &img);
            let oracle = full_gauge_oracle(k, j, sigma, &p, &delta)?;
            Ok(OracleTrial { p, delta, from_span, engine, oracle })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleCheckReport {
        k,
        j,
        sigma: sigma.to_string(),
        seed,
        agreements: out.iter().filter(|t| t.engine == t.oracle).count(),
        engine_true: out.iter().filter(|t| t.engine).count(),
        oracle_true: out.iter().filter(|t| t.oracle).count(),
        trials: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::generator;

    fn v(x: &[i64]) -> Vec<Scalar> {
        x.iter().map(|&a| Scalar::from_int(a)).collect()
    }

    #[test]
    fn trivial_and_lambda0() {
        let s = generator(1, 1).unwrap().multiply(&LaurentPoly::mono(0, 1, 0)).unwrap();
        assert!(full_gauge_oracle(1, 2, &s, &v(&[1, 1, 0, 0]), &v(&[0, 0, 0, 0])).unwrap());
        assert!(full_gauge_oracle(1, 2, &s, &v(&[1, 1, 0, 0]), &v(&[1, 1, 0, 0])).unwrap());
    }

    #[test]
    fn zero_bivector_is_classical() {
        let s = Bivector::zero(1);
        let p = v(&[1, 2, 3, 4]);
        assert!(full_gauge_oracle(1, 2, &s, &p, &v(&[2, 4, 6, 8])).unwrap());
        assert!(!full_gauge_oracle(1, 2, &s, &p, &v(&[1, 0, 0, 0])).unwrap());
    }
}
