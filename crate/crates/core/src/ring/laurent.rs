use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::{Coeff, ParamPoly, Scalar};

/// Chart coordinate on `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    Z,
    U1,
    U2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::Z, Var::U1, Var::U2];

    pub fn name(self) -> &'static str {
        match self {
            Var::Z => "z",
            Var::U1 => "u1",
            Var::U2 => "u2",
        }
    }

    pub fn is_fibre(self) -> bool {
        self != Var::Z
    }
}

/// `z^l u1^i u2^s`. Field order gives the canonical lex (i, s, l) ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub i: u32,
    pub s: u32,
    pub l: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { i: 0, s: 0, l: 0 };

    pub fn new(l: i32, i: u32, s: u32) -> Self {
        Monomial { i, s, l }
    }

    /// Total degree in the fibre coordinates.
    pub fn udeg(&self) -> u32 {
        self.i + self.s
    }

    pub fn exponent(&self, v: Var) -> i64 {
        match v {
            Var::Z => self.l as i64,
            Var::U1 => self.i as i64,
            Var::U2 => self.s as i64,
        }
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial::new(self.l + o.l, self.i + o.i, self.s + o.s)
    }
}

/// Sparse Laurent polynomial in `z` and polynomial in `u1, u2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<R> {
    terms: BTreeMap<Monomial, R>,
}

impl<R> Default for LaurentPoly<R> {
    fn default() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }
}

fn accumulate<R: Coeff>(map: &mut BTreeMap<Monomial, R>, m: Monomial, c: R) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

impl<R: Coeff> LaurentPoly<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    /// The monomial `z^l u1^i u2^s` with coefficient one.
    pub fn mono(l: i32, i: u32, s: u32) -> Self {
        Self::term(Monomial::new(l, i, s), R::one())
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::Z => Self::mono(1, 0, 0),
            Var::U1 => Self::mono(0, 1, 0),
            Var::U2 => Self::mono(0, 0, 1),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, R)>>(it: I) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in it {
            accumulate(&mut terms, m, c);
        }
        LaurentPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> + '_ {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            accumulate(&mut terms, *m, c.clone());
        }
        LaurentPoly { terms }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            accumulate(&mut self.terms, *m, c.clone());
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: R) {
        accumulate(&mut self.terms, m, c);
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            accumulate(&mut terms, *m, c.neg());
        }
        LaurentPoly { terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_bounded(o, u32::MAX)
    }

    /// Product with every term of fibre degree above `max_udeg` dropped.
    /// Equal to `truncate_neighborhood(self * o, max_udeg)`.
    pub fn mul_bounded(&self, o: &Self, max_udeg: u32) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            if ma.udeg() > max_udeg {
                continue;
            }
            for (mb, cb) in &o.terms {
                if ma.udeg() + mb.udeg() > max_udeg {
                    continue;
                }
                accumulate(&mut terms, ma.mul(mb), ca.mul(cb));
            }
        }
        LaurentPoly { terms }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly::from_terms(self.terms.iter().map(|(m, x)| (*m, x.mul(c))))
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, x)| (*m, x.scale(c))).collect(),
        }
    }

    /// Multiply by `z^l u1^i u2^s`.
    pub fn shift(&self, by: Monomial) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.mul(&by), c.clone())).collect(),
        }
    }

    pub fn partial_derivative(&self, v: Var) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut d = *m;
            match v {
                Var::Z => d.l -= 1,
                Var::U1 => d.i -= 1,
                Var::U2 => d.s -= 1,
            }
            accumulate(&mut terms, d, c.scale(&Scalar::from_int(e)));
        }
        LaurentPoly { terms }
    }

    /// Drop every term with `i + s > n`.
    pub fn truncate_neighborhood(&self, n: u32) -> Self {
        self.filter(|m| m.udeg() <= n)
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<S: Coeff, F: Fn(&R) -> S>(&self, f: F) -> LaurentPoly<S> {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn min_udeg(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.udeg()).min()
    }

    pub fn max_udeg(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.udeg()).max()
    }

    pub fn min_l(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.l).min()
    }

    pub fn max_l(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.l).max()
    }
}

impl LaurentPoly<Scalar> {
    /// Scalar polynomial viewed over any coefficient ring.
    pub fn to_coeff<S: Coeff>(&self) -> LaurentPoly<S> {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, S::from_scalar(c.clone()))).collect(),
        }
    }
}

impl LaurentPoly<ParamPoly> {
    /// Substitute rational values for the parameters.
    pub fn specialize(&self, point: &[Scalar]) -> LaurentPoly<Scalar> {
        self.map_coeffs(|c| c.eval(point))
    }
}

impl<'a, R: Coeff> Add for &'a LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn add(self, o: Self) -> LaurentPoly<R> {
        LaurentPoly::add(self, o)
    }
}

impl<'a, R: Coeff> Sub for &'a LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn sub(self, o: Self) -> LaurentPoly<R> {
        LaurentPoly::sub(self, o)
    }
}

impl<'a, R: Coeff> Mul for &'a LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn mul(self, o: Self) -> LaurentPoly<R> {
        LaurentPoly::mul(self, o)
    }
}

impl<'a, R: Coeff> Neg for &'a LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn neg(self) -> LaurentPoly<R> {
        LaurentPoly::neg(self)
    }
}

impl<R: Coeff> Add for LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn add(self, o: Self) -> LaurentPoly<R> {
        LaurentPoly::add(&self, &o)
    }
}

impl<R: Coeff> Sub for LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn sub(self, o: Self) -> LaurentPoly<R> {
        LaurentPoly::sub(&self, &o)
    }
}

impl<R: Coeff> Mul for LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn mul(self, o: Self) -> LaurentPoly<R> {
        LaurentPoly::mul(&self, &o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = LaurentPoly<Scalar>;

    #[test]
    fn monomial_products() {
        let a = P::mono(1, 1, 0);
        let b = P::mono(-1, 0, 1);
        assert_eq!(&a * &b, P::mono(0, 1, 1));
        let f = &P::mono(1, 0, 0) + &P::mono(-1, 0, 0);
        let expect = &(&P::mono(2, 0, 0) + &P::constant(Scalar::from_int(2))) + &P::mono(-2, 0, 0);
        assert_eq!(&f * &f, expect);
        assert_eq!(&f + &P::zero(), f);
    }

    #[test]
    fn derivatives() {
        let f = P::mono(3, 1, 0);
        assert_eq!(f.partial_derivative(Var::Z), P::mono(2, 1, 0).scale_scalar(&Scalar::from_int(3)));
        assert!(P::mono(4, 0, 0).partial_derivative(Var::U1).is_zero());
        assert_eq!(P::mono(2, 1, 1).partial_derivative(Var::U1), P::mono(2, 0, 1));
        assert_eq!(
            P::mono(-2, 0, 0).partial_derivative(Var::Z),
            P::mono(-3, 0, 0).scale_scalar(&Scalar::from_int(-2))
        );
    }

    #[test]
    fn neighbourhood_truncation() {
        let f = &P::mono(1, 2, 0) + &P::mono(1, 1, 0);
        assert_eq!(f.truncate_neighborhood(1), P::mono(1, 1, 0));
        assert!(P::mono(0, 1, 1).truncate_neighborhood(1).is_zero());
        assert_eq!(f.mul_bounded(&P::mono(0, 1, 0), 2), P::mono(1, 2, 0));
    }

    #[test]
    fn canonical_order_is_lex_i_s_l() {
        let f = P::from_terms([
            (Monomial::new(5, 0, 1), Scalar::one()),
            (Monomial::new(-3, 1, 0), Scalar::one()),
            (Monomial::new(2, 0, 0), Scalar::one()),
            (Monomial::new(-1, 0, 0), Scalar::one()),
        ]);
        let order: Vec<_> = f.monomials().map(|m| (m.l, m.i, m.s)).collect();
        assert_eq!(order, vec![(-1, 0, 0), (2, 0, 0), (5, 0, 1), (-3, 1, 0)]);
    }
}
