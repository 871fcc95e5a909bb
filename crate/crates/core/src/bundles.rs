//! Extension classes, canonical transition matrices and line bundles.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{cech_split, Threefold};
use crate::poisson::{bracket, star, Bivector};
use crate::ring::{Coeff, FormalFunction, LaurentPoly, Monomial, ParamPoly, Scalar};

/// Which of the two sums in the canonical form is meant. `Both` is the
/// first-neighbourhood convention: every multiple of `u1` or `u2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Epsilon {
    Zero,
    One,
    Both,
}

fn admits(k: u32, j: u32, eps: Epsilon, i: u32, s: u32) -> bool {
    let j = j as i64;
    let (i, s) = (i as i64, s as i64);
    let in_sum = |e: i64| {
        let range_ok = match k {
            1 => s <= 2 * j - 2 && i <= 2 * j - 2 - s,
            _ => i <= j - 1,
        };
        s >= e && i >= 1 - e && range_ok
    };
    match eps {
        Epsilon::Zero => in_sum(0),
        Epsilon::One => in_sum(1),
        Epsilon::Both => in_sum(0) || in_sum(1),
    }
}

fn l_range(k: u32, j: u32, i: u32, s: u32) -> (i32, i32) {
    let (j, i, s) = (j as i32, i as i32, s as i32);
    let lo = match k {
        1 => i + s - j + 1,
        _ => 2 * i - j + 1,
    };
    (lo, j - 1)
}

/// Monomials of the canonical extension class up to fibre degree `n`.
///
/// Ordered by fibre degree, then `u1`-heavy first, then descending `l`; for
/// `n = 1` this is the `u1` block followed by the `u2` block.
pub fn extension_basis(k: u32, j: u32, n: u32, eps: Epsilon) -> Result<Vec<Monomial>> {
    Threefold::for_moduli(k)?;
    if j < 1 {
        return Err(Error::Invalid("splitting type j must be at least 1".into()));
    }
    let mut out = Vec::new();
    for d in 1..=n {
        for i in (0..=d).rev() {
            let s = d - i;
            if !admits(k, j, eps, i, s) {
                continue;
            }
            let (lo, hi) = l_range(k, j, i, s);
            out.extend((lo..=hi).rev().map(|l| Monomial::new(l, i, s)));
        }
    }
    Ok(out)
}

/// Coefficients of `p` (and optionally `p'`) in the canonical basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionClass<R: Coeff> {
    pub k: u32,
    pub j: u32,
    pub n: u32,
    pub eps: Epsilon,
    pub coeffs: Vec<R>,
    pub first_order: Option<Vec<R>>,
}

impl<R: Coeff> ExtensionClass<R> {
    pub fn new(k: u32, j: u32, n: u32, eps: Epsilon, coeffs: Vec<R>) -> Result<Self> {
        let len = extension_basis(k, j, n, eps)?.len();
        if coeffs.len() != len {
            return Err(Error::Invalid(format!(
                "extension class for k = {k}, j = {j} needs {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(ExtensionClass { k, j, n, eps, coeffs, first_order: None })
    }

    /// First-neighbourhood class, the setting of the moduli engine.
    pub fn first_neighbourhood(k: u32, j: u32, coeffs: Vec<R>) -> Result<Self> {
        Self::new(k, j, 1, Epsilon::Both, coeffs)
    }

    pub fn with_first_order(mut self, p1: Vec<R>) -> Result<Self> {
        if p1.len() != self.coeffs.len() {
            return Err(Error::Invalid("first-order part has the wrong length".into()));
        }
        self.first_order = Some(p1);
        Ok(self)
    }

    pub fn basis(&self) -> Vec<Monomial> {
        extension_basis(self.k, self.j, self.n, self.eps).expect("validated at construction")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn assemble(&self, c: &[R]) -> LaurentPoly<R> {
        LaurentPoly::from_terms(self.basis().into_iter().zip(c.iter().cloned()))
    }

    pub fn poly(&self) -> LaurentPoly<R> {
        self.assemble(&self.coeffs)
    }

    pub fn first_order_poly(&self) -> LaurentPoly<R> {
        match &self.first_order {
            Some(c) => self.assemble(c),
            None => LaurentPoly::zero(),
        }
    }
}

impl ExtensionClass<ParamPoly> {
    /// The generic class `Σ p_m · basis_m`.
    pub fn symbolic(k: u32, j: u32) -> Result<Self> {
        let len = extension_basis(k, j, 1, Epsilon::Both)?.len();
        Self::first_neighbourhood(k, j, (0..len as u32).map(ParamPoly::var).collect())
    }
}

/// Read a class off a polynomial; errors if it has terms outside the basis.
pub fn coordinates<R: Coeff>(k: u32, j: u32, f: &LaurentPoly<R>) -> Result<Vec<R>> {
    let basis = extension_basis(k, j, 1, Epsilon::Both)?;
    if let Some(m) = f.monomials().find(|m| !basis.contains(m)) {
        return Err(Error::Invalid(format!("monomial {m:?} is not in the extension basis")));
    }
    Ok(basis.iter().map(|m| f.coeff(m)).collect())
}

/// 2×2 matrix of truncated ħ-series.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix<R: Coeff> {
    pub entries: [[FormalFunction<R>; 2]; 2],
}

impl<R: Coeff> TransitionMatrix<R> {
    pub fn from_polys(order: usize, e: [[LaurentPoly<R>; 2]; 2], first: [[LaurentPoly<R>; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = e;
        let [[a1, b1], [c1, d1]] = first;
        let f = |x: LaurentPoly<R>, y: LaurentPoly<R>| FormalFunction::new(order, vec![x, y]);
        TransitionMatrix { entries: [[f(a, a1), f(b, b1)], [f(c, c1), f(d, d1)]] }
    }

    pub fn identity(order: usize) -> Self {
        let one = FormalFunction::one(order);
        let zero = FormalFunction::zero(order);
        TransitionMatrix { entries: [[one.clone(), zero.clone()], [zero, one]] }
    }

    pub fn entry(&self, r: usize, c: usize) -> &FormalFunction<R> {
        &self.entries[r][c]
    }

    pub fn order(&self) -> usize {
        self.entries[0][0].order()
    }

    pub fn map<F: Fn(&FormalFunction<R>) -> FormalFunction<R>>(&self, f: F) -> Self {
        let e = &self.entries;
        TransitionMatrix { entries: [[f(&e[0][0]), f(&e[0][1])], [f(&e[1][0]), f(&e[1][1])]] }
    }

    /// True when every entry has the canonical upper-triangular shape.
    pub fn is_canonical_shape(&self, j: u32) -> bool {
        let j = j as i32;
        let e = &self.entries;
        e[0][0] == FormalFunction::<R>::constant(self.order(), LaurentPoly::mono(j, 0, 0))
            && e[1][0].is_zero()
            && e[1][1] == FormalFunction::<R>::constant(self.order(), LaurentPoly::mono(-j, 0, 0))
    }
}

/// `(z^j, p + p'ħ; 0, z^-j)`.
pub fn canonical_matrix<R: Coeff>(j: u32, p: &ExtensionClass<R>) -> TransitionMatrix<R> {
    canonical_matrix_from(j as i32, &p.poly(), &p.first_order_poly())
}

pub fn canonical_matrix_from<R: Coeff>(j: i32, p: &LaurentPoly<R>, p1: &LaurentPoly<R>) -> TransitionMatrix<R> {
    let z = LaurentPoly::zero();
    TransitionMatrix::from_polys(
        1,
        [[LaurentPoly::mono(j, 0, 0), p.clone()], [z.clone(), LaurentPoly::mono(-j, 0, 0)]],
        [[z.clone(), p1.clone()], [z.clone(), z]],
    )
}

/// Matrix product with `⋆` in place of multiplication.
pub fn star_matrix_mul<R: Coeff>(
    sigma: &Bivector,
    a: &TransitionMatrix<R>,
    b: &TransitionMatrix<R>,
) -> TransitionMatrix<R> {
    let cell = |r: usize, c: usize| {
        let x = star(sigma, a.entry(r, 0), b.entry(0, c));
        x.add(&star(sigma, a.entry(r, 1), b.entry(1, c)))
    };
    TransitionMatrix { entries: [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]] }
}

/// Right inverse of the canonical matrix mod ħ²:
/// `(z^-j, -q - q'ħ + 2 z^-j {z^j, q} ħ; 0, z^j)`.
pub fn canonical_right_inverse<R: Coeff>(
    sigma: &Bivector,
    j: i32,
    q: &LaurentPoly<R>,
    q1: &LaurentPoly<R>,
) -> TransitionMatrix<R> {
    let zj = LaurentPoly::<R>::mono(j, 0, 0);
    let zmj = LaurentPoly::<R>::mono(-j, 0, 0);
    let corr = zmj.mul(&bracket(sigma, &zj, q)).scale_scalar(&Scalar::from_int(2));
    let z = LaurentPoly::zero();
    TransitionMatrix::from_polys(
        1,
        [[zmj.clone(), q.neg()], [z.clone(), zj]],
        [[z.clone(), corr.sub(q1)], [z.clone(), z]],
    )
}

/// Output of [`normalize_line_bundle`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineBundleNormalization {
    pub k: u32,
    pub j: i32,
    pub order: usize,
    /// The constant `c` with `f_0 = c·z^-j`; `f` is divided by it first.
    pub unit: Scalar,
    /// `S_1 … S_N`, the ħ^n coefficients before the order-n correction.
    #[serde(serialize_with = "polys")]
    pub s: Vec<LaurentPoly<Scalar>>,
    #[serde(serialize_with = "polys")]
    pub a: Vec<LaurentPoly<Scalar>>,
    #[serde(serialize_with = "polys")]
    pub alpha: Vec<LaurentPoly<Scalar>>,
    #[serde(serialize_with = "polys")]
    pub residuals: Vec<LaurentPoly<Scalar>>,
    /// `(1 + Σ α_n ħ^n) ⋆ f ⋆ (1 + Σ a_n ħ^n)` recomputed from scratch.
    #[serde(serialize_with = "polys")]
    pub product: Vec<LaurentPoly<Scalar>>,
    pub verified: bool,
}

fn polys<S: serde::Serializer>(v: &[LaurentPoly<Scalar>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

impl LineBundleNormalization {
    pub fn residual_free(&self) -> bool {
        self.residuals.iter().all(|r| r.is_zero())
    }
}

fn series(order: usize, head: LaurentPoly<Scalar>, tail: &[LaurentPoly<Scalar>]) -> FormalFunction<Scalar> {
    let mut c = vec![head];
    c.extend(tail.iter().cloned());
    FormalFunction::new(order, c)
}

/// Solve `(1 + Σα_n ħ^n) ⋆ f ⋆ (1 + Σa_n ħ^n) = z^-j` order by order, with
/// `a_n` holomorphic on `U` and `α_n` on `V`. Whatever cannot be split is
/// reported as a residual.
pub fn normalize_line_bundle(
    sigma: &Bivector,
    k: u32,
    f: &FormalFunction<Scalar>,
    order: usize,
) -> Result<LineBundleNormalization> {
    Threefold::new(k)?;
    let f0 = f.coeff(0);
    let (m0, unit) = match f0.terms().next() {
        Some((m, c)) if f0.len() == 1 && m.i == 0 && m.s == 0 => (*m, c.clone()),
        _ => return Err(Error::Invalid(format!("f_0 = {f0} is not of the form c*z^-j"))),
    };
    let j = -m0.l;
    let inv = unit.recip();
    let mut fc: Vec<LaurentPoly<Scalar>> = f.coeffs().iter().take(order + 1).map(|c| c.scale_scalar(&inv)).collect();
    fc.resize(order + 1, LaurentPoly::zero());
    let f = FormalFunction::new(order, fc);
    let zmj = LaurentPoly::<Scalar>::mono(-j, 0, 0);
    let zj = LaurentPoly::<Scalar>::mono(j, 0, 0);

    let mut a = Vec::new();
    let mut alpha = Vec::new();
    let mut s = Vec::new();
    let mut residuals = Vec::new();
    for n in 1..=order {
        let left = series(order, LaurentPoly::one(), &alpha);
        let right = series(order, LaurentPoly::one(), &a);
        let prod = star(sigma, &star(sigma, &left, &f), &right);
        let sn = prod.coeff(n).clone();
        let (u, v, rem) = cech_split(&zj.mul(&sn), k);
        a.push(u.neg());
        alpha.push(v.neg());
        s.push(sn);
        residuals.push(rem);
    }

    let left = series(order, LaurentPoly::one(), &alpha);
    let right = series(order, LaurentPoly::one(), &a);
    let product = star(sigma, &star(sigma, &left, &f), &right);
    let verified = product == FormalFunction::constant(order, zmj);
    Ok(LineBundleNormalization {
        k,
        j,
        order,
        unit,
        s,
        a,
        alpha,
        residuals,
        product: product.coeffs().to_vec(),
        verified,
    })
}
