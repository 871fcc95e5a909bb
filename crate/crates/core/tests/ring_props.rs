use proptest::prelude::*;

use qmoduli::ring::{Coeff, FormalFunction, LaurentPoly, Monomial, ParamPoly, Scalar, Var};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| Scalar::new(n, d))
}

fn poly() -> impl Strategy<Value = LaurentPoly<Scalar>> {
    prop::collection::vec(((-3i32..=3, 0u32..=2, 0u32..=2), scalar()), 0..6)
        .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|((l, i, s), c)| (Monomial::new(l, i, s), c))))
}

fn param() -> impl Strategy<Value = ParamPoly> {
    prop::collection::vec((0u32..3, scalar()), 0..3).prop_map(|ts| {
        let mut p = ParamPoly::constant(Scalar::from_int(1));
        for (v, c) in ts {
            p = p.add(&ParamPoly::var(v).scale(&c));
        }
        p
    })
}

fn param_poly() -> impl Strategy<Value = LaurentPoly<ParamPoly>> {
    prop::collection::vec(((-2i32..=2, 0u32..=1, 0u32..=1), param()), 0..4)
        .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|((l, i, s), c)| (Monomial::new(l, i, s), c))))
}

proptest! {
    #[test]
    fn scalar_field(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip(), Scalar::one());
        }
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn ring_axioms(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &LaurentPoly::one(), f.clone());
        prop_assert!((&f + &f.neg()).is_zero());
        prop_assert_eq!(f.sub(&g), &f + &g.neg());
    }

    #[test]
    fn leibniz(f in poly(), g in poly()) {
        for v in Var::ALL {
            let lhs = (&f * &g).partial_derivative(v);
            let rhs = &(&f.partial_derivative(v) * &g) + &(&f * &g.partial_derivative(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn truncation_is_a_morphism(f in poly(), g in poly(), n in 0u32..3) {
        let t = |p: &LaurentPoly<Scalar>| p.truncate_neighborhood(n);
        prop_assert_eq!(t(&(&f * &g)), t(&(&t(&f) * &t(&g))));
        prop_assert_eq!(t(&(&f + &g)), &t(&f) + &t(&g));
        prop_assert_eq!(f.mul_bounded(&g, n), t(&(&f * &g)));
    }

    #[test]
    fn text_round_trip(f in poly()) {
        let back: LaurentPoly<Scalar> = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn specialization_is_a_morphism(
        f in param_poly(),
        g in param_poly(),
        pt in prop::collection::vec(scalar(), 3),
    ) {
        prop_assert_eq!((&f * &g).specialize(&pt), &f.specialize(&pt) * &g.specialize(&pt));
        prop_assert_eq!((&f + &g).specialize(&pt), &f.specialize(&pt) + &g.specialize(&pt));
    }

    #[test]
    fn series_product_associative(a in prop::collection::vec(poly(), 3), b in prop::collection::vec(poly(), 3), c in prop::collection::vec(poly(), 3)) {
        let [a, b, c] = [a, b, c].map(|v| FormalFunction::new(2, v));
        prop_assert_eq!(a.series_mul(&b).series_mul(&c), a.series_mul(&b.series_mul(&c)));
        prop_assert_eq!(a.series_mul(&FormalFunction::one(2)), a.clone());
    }
}

#[test]
fn canonical_text() {
    let f: LaurentPoly<Scalar> = "3/2*z^-1*u1*u2^2".parse().unwrap();
    assert_eq!(f.to_string(), "3/2*z^-1*u1*u2^2");
    assert_eq!(f.coeff(&Monomial::new(-1, 1, 2)), Scalar::new(3, 2));
    assert!("u1^-1".parse::<LaurentPoly<Scalar>>().is_err());
    assert!("w".parse::<LaurentPoly<Scalar>>().is_err());
}
