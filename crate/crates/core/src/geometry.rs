//! Two-chart geometry of `W_k = Tot(O(-k) + O(k-2))`.
//!
//! On `U ∩ V` the coordinates are related by
//! `(ξ, v1, v2) = (z^-1, z^k u1, z^(2-k) u2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{Coeff, LaurentPoly, Monomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Threefold {
    pub k: u32,
}

impl Threefold {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::UnsupportedK(k));
        }
        Ok(Threefold { k })
    }

    /// The moduli engine only handles `W_1` and `W_2`.
    pub fn for_moduli(k: u32) -> Result<Self> {
        match k {
            1 | 2 => Ok(Threefold { k }),
            _ => Err(Error::UnsupportedK(k)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialClass {
    UOnly,
    VOnly,
    Global,
    Obstruction,
}

/// The ξ-exponent of `z^l u1^i u2^s` after the chart change.
pub fn v_exponent(m: &Monomial, k: u32) -> i64 {
    let k = k as i64;
    -(m.l as i64) + k * m.i as i64 + (2 - k) * m.s as i64
}

pub fn is_u_holomorphic(m: &Monomial) -> bool {
    m.l >= 0
}

pub fn is_v_holomorphic(m: &Monomial, k: u32) -> bool {
    v_exponent(m, k) >= 0
}

pub fn classify_monomial(m: &Monomial, k: u32) -> MonomialClass {
    match (is_u_holomorphic(m), is_v_holomorphic(m, k)) {
        (true, true) => MonomialClass::Global,
        (true, false) => MonomialClass::UOnly,
        (false, true) => MonomialClass::VOnly,
        (false, false) => MonomialClass::Obstruction,
    }
}

/// Rewrite in `(ξ, v1, v2)`; the result reuses [`Monomial`] with `l` read as
/// the ξ-exponent and `(i, s)` as the exponents of `(v1, v2)`.
pub fn to_v_chart<R: Coeff>(f: &LaurentPoly<R>, k: u32) -> LaurentPoly<R> {
    LaurentPoly::from_terms(
        f.terms()
            .map(|(m, c)| (Monomial::new(v_exponent(m, k) as i32, m.i, m.s), c.clone())),
    )
}

/// Inverse of [`to_v_chart`]. The exponent map is an involution.
pub fn to_u_chart<R: Coeff>(f: &LaurentPoly<R>, k: u32) -> LaurentPoly<R> {
    to_v_chart(f, k)
}

/// Split into a `U`-holomorphic part, a `V`-holomorphic part and the
/// obstruction remainder. Monomials holomorphic on both charts go to `f_U`.
pub fn cech_split<R: Coeff>(
    f: &LaurentPoly<R>,
    k: u32,
) -> (LaurentPoly<R>, LaurentPoly<R>, LaurentPoly<R>) {
    let mut fu = LaurentPoly::zero();
    let mut fv = LaurentPoly::zero();
    let mut rem = LaurentPoly::zero();
    for (m, c) in f.terms() {
        let target = match classify_monomial(m, k) {
            MonomialClass::Global | MonomialClass::UOnly => &mut fu,
            MonomialClass::VOnly => &mut fv,
            MonomialClass::Obstruction => &mut rem,
        };
        target.add_term(*m, c.clone());
    }
    (fu, fv, rem)
}

/// Finite box `|l| ≤ max_l`, `i ≤ max_i`, `s ≤ max_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_l: u32,
    pub max_i: u32,
    pub max_s: u32,
}

fn box_monomials(b: Bounds) -> impl Iterator<Item = Monomial> {
    let ml = b.max_l as i32;
    (0..=b.max_i).flat_map(move |i| {
        (0..=b.max_s).flat_map(move |s| (-ml..=ml).map(move |l| Monomial::new(l, i, s)))
    })
}

/// Monomials spanning `H^1(W_k, O)` inside the box, in canonical order.
pub fn h1_obstruction_basis(k: u32, bounds: Bounds) -> Result<Vec<Monomial>> {
    Threefold::new(k)?;
    Ok(box_monomials(bounds)
        .filter(|m| classify_monomial(m, k) == MonomialClass::Obstruction)
        .collect())
}

/// Monomials of global functions on `W_k` inside the box.
pub fn global_function_monomials(k: u32, bounds: Bounds) -> Result<Vec<Monomial>> {
    Threefold::for_moduli(k)?;
    Ok(box_monomials(bounds)
        .filter(|m| classify_monomial(m, k) == MonomialClass::Global)
        .collect())
}

/// True when every monomial of `f` is a global function on `W_k`.
pub fn is_global<R: Coeff>(f: &LaurentPoly<R>, k: u32) -> bool {
    f.monomials().all(|m| classify_monomial(m, k) == MonomialClass::Global)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Scalar;

    type P = LaurentPoly<Scalar>;

    #[test]
    fn exponents() {
        assert_eq!(v_exponent(&Monomial::new(-1, 0, 1), 1), 2);
        assert_eq!(v_exponent(&Monomial::new(1, 0, 1), 2), -1);
        assert_eq!(v_exponent(&Monomial::new(-1, 0, 2), 3), -1);
    }

    #[test]
    fn classes() {
        assert_eq!(classify_monomial(&Monomial::new(1, 1, 0), 1), MonomialClass::Global);
        assert_eq!(classify_monomial(&Monomial::new(3, 1, 0), 2), MonomialClass::UOnly);
        assert_eq!(classify_monomial(&Monomial::new(-1, 0, 2), 3), MonomialClass::Obstruction);
        assert_eq!(classify_monomial(&Monomial::new(-1, 0, 0), 1), MonomialClass::VOnly);
    }

    #[test]
    fn chart_change() {
        assert_eq!(to_v_chart(&P::mono(0, 1, 0), 1), P::mono(1, 1, 0));
        assert_eq!(to_v_chart(&P::mono(0, 0, 1), 2), P::mono(0, 0, 1));
        let f: P = "3*z^-2*u1 + z^4*u2^3 - 1/2".parse().unwrap();
        assert_eq!(to_u_chart(&to_v_chart(&f, 3), 3), f);
    }

    #[test]
    fn splits() {
        let f = P::mono(-1, 1, 0);
        assert_eq!(cech_split(&f, 1), (P::zero(), f.clone(), P::zero()));
        let g: P = "z^3*u1 + z^-1".parse().unwrap();
        let (gu, gv, r) = cech_split(&g, 2);
        assert_eq!((gu, gv, r), (P::mono(3, 1, 0), P::mono(-1, 0, 0), P::zero()));
        let h = P::mono(-1, 0, 2);
        assert_eq!(cech_split(&h, 3), (P::zero(), P::zero(), h.clone()));
    }

    #[test]
    fn cohomology_boxes() {
        let b = Bounds { max_l: 6, max_i: 4, max_s: 6 };
        assert!(h1_obstruction_basis(1, b).unwrap().is_empty());
        assert!(h1_obstruction_basis(2, b).unwrap().is_empty());
        let basis = h1_obstruction_basis(3, Bounds { max_l: 1, max_i: 1, max_s: 4 }).unwrap();
        for s in 2..=4 {
            assert!(basis.contains(&Monomial::new(-1, 0, s)));
        }
    }

    #[test]
    fn global_lists() {
        let deg1 = |k| {
            global_function_monomials(k, Bounds { max_l: 4, max_i: 1, max_s: 1 })
                .unwrap()
                .into_iter()
                .filter(|m| m.udeg() <= 1)
                .collect::<Vec<_>>()
        };
        let m = Monomial::new;
        assert_eq!(deg1(1), vec![m(0, 0, 0), m(0, 0, 1), m(1, 0, 1), m(0, 1, 0), m(1, 1, 0)]);
        assert_eq!(deg1(2), vec![m(0, 0, 0), m(0, 0, 1), m(0, 1, 0), m(1, 1, 0), m(2, 1, 0)]);
        let pure_z: Vec<_> = global_function_monomials(1, Bounds { max_l: 5, max_i: 0, max_s: 0 }).unwrap();
        assert_eq!(pure_z, vec![m(0, 0, 0)]);
        assert!(global_function_monomials(3, Bounds { max_l: 1, max_i: 1, max_s: 1 }).is_err());
    }
}
