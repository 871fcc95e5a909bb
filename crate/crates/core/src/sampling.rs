//! Seeded random rationals and polynomials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ring::{FormalFunction, LaurentPoly, Monomial, Scalar};

pub const DEFAULT_SEED: u64 = 20240917;

/// Environment variable that overrides [`DEFAULT_SEED`].
pub const SEED_ENV: &str = "QMODULI_SEED";

pub fn default_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for task `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

fn nonzero_small<R: Rng>(rng: &mut R) -> i64 {
    let v = rng.gen_range(1..=194);
    if v <= 97 {
        v
    } else {
        97 - v
    }
}

/// `a/b` with `a, b` uniform in `[-97, 97] \ {0}`.
pub fn rational<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::new(nonzero_small(rng), nonzero_small(rng))
}

pub fn rationals<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| rational(rng)).collect()
}

/// Random polynomial with up to `terms` terms, `l` in `l_range`,
/// `i, s ≤ max_u`.
pub fn poly<R: Rng>(rng: &mut R, terms: usize, l_range: (i32, i32), max_u: u32) -> LaurentPoly<Scalar> {
    let mut f = LaurentPoly::zero();
    for _ in 0..terms {
        let m = Monomial::new(
            rng.gen_range(l_range.0..=l_range.1),
            rng.gen_range(0..=max_u),
            rng.gen_range(0..=max_u),
        );
        f.add_term(m, rational(rng));
    }
    f
}

/// Random order-`order` series with [`poly`] coefficients.
pub fn series<R: Rng>(rng: &mut R, order: usize, terms: usize, l_range: (i32, i32), max_u: u32) -> FormalFunction<Scalar> {
    let coeffs = (0..=order).map(|_| poly(rng, terms, l_range, max_u)).collect();
    FormalFunction::new(order, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_in_range() {
        let a = rationals(&mut rng(7), 50);
        let b = rationals(&mut rng(7), 50);
        assert_eq!(a, b);
        assert!(a.iter().all(|x| !x.is_zero()));
        let mut r = rng(1);
        for _ in 0..2000 {
            let v = nonzero_small(&mut r);
            assert!(v != 0 && (-97..=97).contains(&v));
        }
        let s0 = rationals(&mut substream(7, 0), 5);
        let s1 = rationals(&mut substream(7, 1), 5);
        assert_ne!(s0, s1);
    }
}
