//! Exact Laurent polynomials in `z, u1, u2` and truncated ħ-series.

mod laurent;
mod param;
mod scalar;
mod series;
mod text;

pub use laurent::{LaurentPoly, Monomial, Var};
pub use param::{ParamMono, ParamPoly};
pub use scalar::Scalar;
pub use series::FormalFunction;

use std::fmt::{Debug, Display};

/// Coefficient ring of a [`LaurentPoly`]: either [`Scalar`] for point
/// evaluation or [`ParamPoly`] for symbolic construction.
pub trait Coeff: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
    fn from_scalar(s: Scalar) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn from_int(n: i64) -> Self {
        Self::from_scalar(Scalar::from_int(n))
    }

    /// True when rendering needs no parentheses in a product.
    fn is_atom(&self) -> bool;

    /// The value as a constant, when it is one.
    fn as_scalar(&self) -> Option<Scalar>;
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn is_atom(&self) -> bool {
        true
    }
    fn as_scalar(&self) -> Option<Scalar> {
        Some(self.clone())
    }
}
