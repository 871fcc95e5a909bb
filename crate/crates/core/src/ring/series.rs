use super::{Coeff, LaurentPoly};

/// `f_0 + f_1 ħ + … + f_N ħ^N`, never carrying terms past `ħ^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalFunction<R: Coeff> {
    coeffs: Vec<LaurentPoly<R>>,
}

impl<R: Coeff> FormalFunction<R> {
    /// Series of order `order` from the given leading coefficients; missing
    /// coefficients are zero and extra ones are an error of the caller.
    pub fn new(order: usize, coeffs: Vec<LaurentPoly<R>>) -> Self {
        assert!(coeffs.len() <= order + 1, "series longer than its truncation order");
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, LaurentPoly::zero());
        FormalFunction { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn constant(order: usize, f: LaurentPoly<R>) -> Self {
        Self::new(order, vec![f])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, LaurentPoly::one())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &LaurentPoly<R> {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[LaurentPoly<R>] {
        &self.coeffs
    }

    pub fn set(&mut self, n: usize, f: LaurentPoly<R>) {
        self.coeffs[n] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.order(), o.order());
        FormalFunction {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.order(), o.order());
        FormalFunction {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        FormalFunction {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Commutative Cauchy product truncated at `ħ^N`.
    pub fn series_mul(&self, o: &Self) -> Self {
        assert_eq!(self.order(), o.order(), "series_mul needs equal truncation orders");
        let n = self.order();
        let mut out = vec![LaurentPoly::zero(); n + 1];
        for (a, fa) in self.coeffs.iter().enumerate() {
            if fa.is_zero() {
                continue;
            }
            for (b, gb) in o.coeffs.iter().enumerate().take(n + 1 - a) {
                out[a + b].add_assign(&(fa * gb));
            }
        }
        FormalFunction { coeffs: out }
    }

    pub fn map<F: Fn(&LaurentPoly<R>) -> LaurentPoly<R>>(&self, f: F) -> Self {
        FormalFunction {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Scalar;

    type P = LaurentPoly<Scalar>;

    #[test]
    fn cauchy_product_order_one() {
        let a = P::mono(1, 1, 0);
        let f = FormalFunction::new(1, vec![P::one(), a.clone()]);
        let g = FormalFunction::new(1, vec![P::one(), a.neg()]);
        assert_eq!(f.series_mul(&g), FormalFunction::one(1));

        let (f0, f1, g0, g1) = (P::mono(1, 0, 0), P::mono(0, 1, 0), P::mono(2, 0, 1), P::mono(-1, 0, 0));
        let f = FormalFunction::new(1, vec![f0.clone(), f1.clone()]);
        let g = FormalFunction::new(1, vec![g0.clone(), g1.clone()]);
        let h = f.series_mul(&g);
        assert_eq!(h.coeff(0), &(&f0 * &g0));
        assert_eq!(h.coeff(1), &(&(&f0 * &g1) + &(&f1 * &g0)));
    }

    #[test]
    fn never_exceeds_order() {
        let f = FormalFunction::new(2, vec![P::one(), P::one(), P::one()]);
        let h = f.series_mul(&f);
        assert_eq!(h.order(), 2);
        assert_eq!(h.coeff(2), &P::constant(Scalar::from_int(3)));
    }
}
