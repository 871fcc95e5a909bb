//! The reduced first-order cancellation system.
//!
//! With the gauge `A_U = (a, 0; c, d + d'ħ)`, `a = 1 + a1 u1 + a2 u2`,
//! `d = 1 + d1 u1 + d2 u2`, `c = c0(z)`, the ħ-part of the (1,2) entry of
//! `T_p ⋆ A_U ⋆ T_q^{-1}` must be holomorphic on `V` up to the `z^{2j} b'`
//! absorber. Each column is the obstruction-coordinate image of one unit
//! gauge coefficient.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bundles::ExtensionClass;
use crate::error::{Error, Result};
use crate::geometry::Threefold;
use crate::linalg::{self, Matrix};
use crate::poisson::{bracket_bounded, Bivector};
use crate::ring::{Coeff, LaurentPoly, Monomial, ParamPoly, Scalar};

use super::obstruction_basis;

/// A free gauge coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unknown {
    /// coefficient of `z^w u1` in `a`
    A1(i32),
    /// coefficient of `z^w u2` in `a`
    A2(i32),
    D1(i32),
    D2(i32),
    /// coefficient of `z^w` in `c`
    C0(i32),
    /// coefficient of `z^m` in `(d' - a')_0`
    Lambda(i32),
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::A1(w) => write!(f, "a1_{w}"),
            Unknown::A2(w) => write!(f, "a2_{w}"),
            Unknown::D1(w) => write!(f, "d1_{w}"),
            Unknown::D2(w) => write!(f, "d2_{w}"),
            Unknown::C0(w) => write!(f, "c0_{w}"),
            Unknown::Lambda(m) => write!(f, "lambda_{m}"),
        }
    }
}

impl Serialize for Unknown {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Lambda,
    Bracket,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Column {
    pub unknown: Unknown,
    pub provenance: Provenance,
}

/// Inclusive z-degree windows of the gauge coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Windows {
    pub ad: (i32, i32),
    pub c0: (i32, i32),
    pub lambda: (i32, i32),
}

impl Windows {
    /// λ in `[0, 2j-2]`, `c0` in `[0, 2j]`, and `a, d` up to the largest
    /// degree whose bracket images can still reach an obstruction row, plus 2.
    pub fn default_for(k: u32, j: u32, sigma: &Bivector) -> Self {
        let j = j as i32;
        let min_l = if k == 1 { 2 - j } else { 1 - j };
        let reach = j - 1 - min_l - sigma.z_shift();
        Windows {
            ad: (0, reach.max(0) + 2),
            c0: (0, 2 * j),
            lambda: (0, 2 * j - 2),
        }
    }

    pub fn enlarged(&self, by: i32) -> Self {
        Windows { ad: (self.ad.0, self.ad.1 + by), ..*self }
    }

    pub fn unknowns(&self) -> Vec<Unknown> {
        let mut out = Vec::new();
        let (lo, hi) = self.ad;
        for mk in [Unknown::A1, Unknown::A2, Unknown::D1, Unknown::D2] {
            out.extend((lo..=hi).map(mk));
        }
        out.extend((self.c0.0..=self.c0.1).map(Unknown::C0));
        out.extend((self.lambda.0..=self.lambda.1).map(Unknown::Lambda));
        out
    }
}

/// The linear system `𝔘_p`: rows are obstruction monomials, columns the
/// gauge coefficients whose image is not identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionMatrix<R: Coeff> {
    pub k: u32,
    pub j: u32,
    pub rows: Vec<Monomial>,
    pub columns: Vec<Column>,
    pub matrix: Matrix<R>,
    pub windows: Windows,
    /// Obstruction coordinates of the gauge-free part; zero by construction.
    pub offset: Vec<R>,
}

impl<R: Coeff> DirectionMatrix<R> {
    pub fn column_of(&self, u: Unknown) -> Option<Vec<R>> {
        self.columns.iter().position(|c| c.unknown == u).map(|i| self.matrix.column(i))
    }

    pub fn lambda_indices(&self) -> Vec<usize> {
        self.indices(Provenance::Lambda)
    }

    pub fn bracket_indices(&self) -> Vec<usize> {
        self.indices(Provenance::Bracket)
    }

    fn indices(&self, p: Provenance) -> Vec<usize> {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.provenance == p)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn column_labels(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.unknown.to_string()).collect()
    }

    pub fn row_labels(&self) -> Vec<String> {
        self.rows.iter().map(|m| LaurentPoly::<Scalar>::mono(m.l, m.i, m.s).to_string()).collect()
    }

    pub fn offset_is_zero(&self) -> bool {
        self.offset.iter().all(|x| x.is_zero())
    }
}

impl DirectionMatrix<Scalar> {
    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix)
    }
}

impl DirectionMatrix<ParamPoly> {
    pub fn specialize(&self, point: &[Scalar]) -> Matrix<Scalar> {
        linalg::specialize(&self.matrix, point)
    }
}

type Pair<R> = (LaurentPoly<R>, LaurentPoly<R>);

struct Ctx<'a> {
    sigma: &'a Bivector,
    ub: u32,
}

impl Ctx<'_> {
    fn mul<R: Coeff>(&self, a: &LaurentPoly<R>, b: &LaurentPoly<R>) -> LaurentPoly<R> {
        a.mul_bounded(b, self.ub)
    }

    fn br<R: Coeff>(&self, a: &LaurentPoly<R>, b: &LaurentPoly<R>) -> LaurentPoly<R> {
        bracket_bounded(self.sigma, a, b, self.ub)
    }

    /// First-order star product of `x0 + x1ħ` and `y0 + y1ħ`.
    fn star<R: Coeff>(&self, x: &Pair<R>, y: &Pair<R>) -> Pair<R> {
        let c0 = self.mul(&x.0, &y.0);
        let mut c1 = self.mul(&x.0, &y.1);
        c1.add_assign(&self.mul(&x.1, &y.0));
        c1.add_assign(&self.br(&x.0, &y.0));
        (c0, c1)
    }
}

fn add<R: Coeff>(x: &Pair<R>, y: &Pair<R>) -> Pair<R> {
    (&x.0 + &y.0, &x.1 + &y.1)
}

fn classical<R: Coeff>(f: LaurentPoly<R>) -> Pair<R> {
    (f, LaurentPoly::zero())
}

#[derive(Clone)]
struct Gauge<R: Coeff> {
    a: LaurentPoly<R>,
    d: LaurentPoly<R>,
    c: LaurentPoly<R>,
    dprime: LaurentPoly<R>,
}

impl<R: Coeff> Gauge<R> {
    fn identity() -> Self {
        Gauge {
            a: LaurentPoly::one(),
            d: LaurentPoly::one(),
            c: LaurentPoly::zero(),
            dprime: LaurentPoly::zero(),
        }
    }

    fn with(&self, u: Unknown) -> Self {
        let mut g = self.clone();
        let one = R::one();
        match u {
            Unknown::A1(w) => g.a.add_term(Monomial::new(w, 1, 0), one),
            Unknown::A2(w) => g.a.add_term(Monomial::new(w, 0, 1), one),
            Unknown::D1(w) => g.d.add_term(Monomial::new(w, 1, 0), one),
            Unknown::D2(w) => g.d.add_term(Monomial::new(w, 0, 1), one),
            Unknown::C0(w) => g.c.add_term(Monomial::new(w, 0, 0), one),
            Unknown::Lambda(m) => g.dprime.add_term(Monomial::new(m, 0, 0), one),
        }
        g
    }
}

/// ħ-part of the (1,2) entry of `T_p ⋆ A_U ⋆ R_q` on the first neighbourhood,
/// with `q = p`, `q' = delta`, `p' = 0`.
fn entry12<R: Coeff>(sigma: &Bivector, j: i32, p: &LaurentPoly<R>, delta: &LaurentPoly<R>, g: &Gauge<R>) -> LaurentPoly<R> {
    let cx = Ctx { sigma, ub: 1 + sigma.udeg_drop() };
    let zj = LaurentPoly::<R>::mono(j, 0, 0);
    let zmj = LaurentPoly::<R>::mono(-j, 0, 0);
    // T_p ⋆ A_U, first row
    let ta00 = add(
        &cx.star(&classical(zj.clone()), &classical(g.a.clone())),
        &cx.star(&classical(p.clone()), &classical(g.c.clone())),
    );
    let ta01 = cx.star(&classical(p.clone()), &(g.d.clone(), g.dprime.clone()));
    // right inverse, second column
    let corr = cx.mul(&zmj, &cx.br(&zj, p)).scale_scalar(&Scalar::from_int(2));
    let r01 = (p.neg(), &corr - delta);
    let r11 = classical(zj);
    let e = add(&cx.star(&ta00, &r01), &cx.star(&ta01, &r11));
    e.1.truncate_neighborhood(1)
}

/// The printed form of the (1,2) system, with `a' = 0`:
/// `{p, d+a} z^j − {z^j, a} p + {z^j, p} a + {pd, z^j} + 2z^{-j}{z^j, p} p c
///  + p d' z^j − q' z^j`.
fn entry12_printed<R: Coeff>(sigma: &Bivector, j: i32, p: &LaurentPoly<R>, delta: &LaurentPoly<R>, g: &Gauge<R>) -> LaurentPoly<R> {
    let cx = Ctx { sigma, ub: 1 + sigma.udeg_drop() };
    let zj = LaurentPoly::<R>::mono(j, 0, 0);
    let zmj = LaurentPoly::<R>::mono(-j, 0, 0);
    let two = Scalar::from_int(2);
    let mut e = cx.mul(&cx.br(p, &(&g.d + &g.a)), &zj);
    e = e.sub(&cx.mul(&cx.br(&zj, &g.a), p));
    e.add_assign(&cx.mul(&cx.br(&zj, p), &g.a));
    e.add_assign(&cx.br(&cx.mul(p, &g.d), &zj));
    let pc = cx.mul(p, &g.c);
    e.add_assign(&cx.mul(&cx.mul(&zmj, &cx.br(&zj, p)), &pc).scale_scalar(&two));
    e.add_assign(&cx.mul(&cx.mul(p, &g.dprime), &zj));
    e = e.sub(&cx.mul(delta, &zj));
    e.truncate_neighborhood(1)
}

fn coords<R: Coeff>(rows: &[Monomial], f: &LaurentPoly<R>) -> Vec<R> {
    rows.iter().map(|m| f.coeff(m)).collect()
}

/// Which derivation of the (1,2) entry to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// Star-product expansion of the gauge-fixed matrix equation.
    FirstPrinciples,
    /// The displayed closed form, for comparison.
    Printed,
}

fn check_class<R: Coeff>(k: u32, j: u32, p: &ExtensionClass<R>) -> Result<()> {
    Threefold::for_moduli(k)?;
    if p.k != k || p.j != j || p.n != 1 {
        return Err(Error::Invalid("extension class does not match (k, j) or is not first-neighbourhood".into()));
    }
    obstruction_basis(k, j)?;
    Ok(())
}

pub fn build_with<R: Coeff>(
    k: u32,
    j: u32,
    sigma: &Bivector,
    p: &ExtensionClass<R>,
    windows: Windows,
    how: Derivation,
) -> Result<DirectionMatrix<R>> {
    check_class(k, j, p)?;
    let rows = obstruction_basis(k, j)?;
    let pp = p.poly();
    let zero = LaurentPoly::zero();
    let ji = j as i32;
    let eval = |g: &Gauge<R>| match how {
        Derivation::FirstPrinciples => entry12(sigma, ji, &pp, &zero, g),
        Derivation::Printed => entry12_printed(sigma, ji, &pp, &zero, g),
    };
    let id = Gauge::identity();
    let base = eval(&id);
    let images: Vec<(Unknown, Vec<R>)> = windows
        .unknowns()
        .into_par_iter()
        .map(|u| (u, coords(&rows, &eval(&id.with(u)).sub(&base))))
        .collect();
    let mut columns = Vec::new();
    let mut data = Vec::new();
    for (u, col) in images {
        if col.iter().all(|x| x.is_zero()) {
            continue;
        }
        let provenance = match u {
            Unknown::Lambda(_) => Provenance::Lambda,
            _ => Provenance::Bracket,
        };
        columns.push(Column { unknown: u, provenance });
        data.push(col);
    }
    Ok(DirectionMatrix {
        k,
        j,
        matrix: Matrix::from_columns(rows.len(), &data),
        offset: coords(&rows, &base),
        rows,
        columns,
        windows,
    })
}

/// `𝔘_p` from the first-principles expansion with the default windows.
pub fn build_cancellation_system<R: Coeff>(
    k: u32,
    j: u32,
    sigma: &Bivector,
    p: &ExtensionClass<R>,
) -> Result<DirectionMatrix<R>> {
    build_with(k, j, sigma, p, Windows::default_for(k, j, sigma), Derivation::FirstPrinciples)
}

/// Obstruction coordinates contributed by a first-order change `Δ = q' − p'`.
/// A class change is realizable iff this lies in the column span.
pub fn delta_image<R: Coeff>(k: u32, j: u32, sigma: &Bivector, p: &ExtensionClass<R>, delta: &[R]) -> Result<Vec<R>> {
    check_class(k, j, p)?;
    let rows = obstruction_basis(k, j)?;
    let d = ExtensionClass::first_neighbourhood(k, j, delta.to_vec())?.poly();
    let pp = p.poly();
    let id = Gauge::identity();
    let img = entry12(sigma, j as i32, &pp, &d, &id).sub(&entry12(sigma, j as i32, &pp, &LaurentPoly::zero(), &id));
    Ok(coords(&rows, &img))
}

/// Whether the first-order change `Δ` is absorbed by the reduced gauge.
pub fn engine_accepts(k: u32, j: u32, sigma: &Bivector, p: &[Scalar], delta: &[Scalar]) -> Result<bool> {
    let class = ExtensionClass::first_neighbourhood(k, j, p.to_vec())?;
    let d = build_cancellation_system(k, j, sigma, &class)?;
    let img = delta_image(k, j, sigma, &class, delta)?;
    Ok(linalg::in_column_span(&d.matrix, &img))
}

/// True when no bracket-derived column survives in `𝔘_p` for generic `p`.
pub fn bracket_columns_vanish(sigma: &Bivector, k: u32, j: u32) -> Result<bool> {
    let p = ExtensionClass::symbolic(k, j)?;
    let d = build_cancellation_system(k, j, sigma, &p)?;
    Ok(d.bracket_indices().is_empty())
}
