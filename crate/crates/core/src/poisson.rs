//! Bivectors on `W_k`, their brackets and the first-order star product.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{is_global, is_u_holomorphic, Threefold};
use crate::ring::{Coeff, FormalFunction, LaurentPoly, Scalar, Var};

/// One term `h ∂x∧∂y` with `x < y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivectorTerm {
    pub h: LaurentPoly<Scalar>,
    pub x: Var,
    pub y: Var,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivector {
    pub k: u32,
    terms: Vec<BivectorTerm>,
}

impl Bivector {
    /// Canonicalizes the pair order, merges equal pairs and drops zero terms.
    pub fn new(k: u32, raw: Vec<(LaurentPoly<Scalar>, Var, Var)>) -> Result<Self> {
        Threefold::new(k)?;
        let mut terms: Vec<BivectorTerm> = Vec::new();
        for (h, x, y) in raw {
            if x == y {
                continue;
            }
            if !h.monomials().all(is_u_holomorphic) {
                return Err(Error::Invalid(format!("bivector coefficient {h} is not holomorphic on U")));
            }
            let (h, x, y) = if x < y { (h, x, y) } else { (h.neg(), y, x) };
            match terms.iter_mut().find(|t| t.x == x && t.y == y) {
                Some(t) => t.h = &t.h + &h,
                None => terms.push(BivectorTerm { h, x, y }),
            }
        }
        terms.retain(|t| !t.h.is_zero());
        terms.sort_by_key(|t| (t.x, t.y));
        Ok(Bivector { k, terms })
    }

    pub fn zero(k: u32) -> Self {
        Bivector { k, terms: Vec::new() }
    }

    pub fn terms(&self) -> &[BivectorTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `f·σ`.
    pub fn multiply(&self, f: &LaurentPoly<Scalar>) -> Result<Self> {
        Bivector::new(self.k, self.terms.iter().map(|t| (f * &t.h, t.x, t.y)).collect())
    }

    /// Largest drop in fibre degree a bracket can cause: for `h ∂x∧∂y` the
    /// bracket of two functions of fibre degree `≥ d` has degree
    /// `≥ 2d - #fibre(x, y) + udeg(h)`.
    pub fn udeg_drop(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| {
                let fib = t.x.is_fibre() as i64 + t.y.is_fibre() as i64;
                fib - t.h.min_udeg().unwrap_or(0) as i64
            })
            .max()
            .unwrap_or(0)
            .max(0) as u32
    }

    /// Smallest change in z-degree a bracket term can cause.
    pub fn z_shift(&self) -> i32 {
        self.terms
            .iter()
            .map(|t| {
                let zs = (t.x == Var::Z) as i32 + (t.y == Var::Z) as i32;
                t.h.min_l().unwrap_or(0) - zs
            })
            .min()
            .unwrap_or(0)
    }
}

impl fmt::Display for Bivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, t) in self.terms.iter().enumerate() {
            let h = t.h.to_string();
            let d = format!("d{}^d{}", t.x.name(), t.y.name());
            let (neg, body) = match h.strip_prefix('-') {
                Some(rest) if t.h.len() == 1 => (true, rest.to_string()),
                _ => (false, h),
            };
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match body.as_str() {
                "1" => write!(f, "{d}")?,
                _ if t.h.len() == 1 => write!(f, "{body}*{d}")?,
                _ => write!(f, "({body})*{d}")?,
            }
        }
        Ok(())
    }
}

/// The generators listed for `W_1` (four) and `W_2` (five).
pub fn catalog(k: u32) -> Result<Vec<Bivector>> {
    let p = |s: &str| -> LaurentPoly<Scalar> { s.parse().expect("catalog literal") };
    let (z, u1, u2) = (Var::Z, Var::U1, Var::U2);
    let raw: Vec<Vec<(LaurentPoly<Scalar>, Var, Var)>> = match k {
        1 => vec![
            vec![(p("1"), z, u1)],
            vec![(p("1"), z, u2)],
            vec![(p("u1"), u1, u2), (p("-z"), z, u2)],
            vec![(p("u2"), u1, u2), (p("z"), z, u1)],
        ],
        2 => vec![
            vec![(p("1"), z, u1)],
            vec![(p("1"), z, u2)],
            vec![(p("z"), z, u2)],
            vec![(p("u1"), u1, u2)],
            vec![(p("2*z*u1"), u1, u2), (p("-z^2"), z, u2)],
        ],
        _ => return Err(Error::UnsupportedK(k)),
    };
    raw.into_iter().map(|t| Bivector::new(k, t)).collect()
}

pub fn generator(k: u32, n: usize) -> Result<Bivector> {
    let cat = catalog(k)?;
    let len = cat.len();
    cat.into_iter()
        .nth(n.wrapping_sub(1))
        .ok_or_else(|| Error::Invalid(format!("generator {n} out of range 1..={len} for k = {k}")))
}

/// `{f, g} = Σ h (∂x f ∂y g − ∂y f ∂x g)`.
pub fn bracket<R: Coeff>(sigma: &Bivector, f: &LaurentPoly<R>, g: &LaurentPoly<R>) -> LaurentPoly<R> {
    bracket_bounded(sigma, f, g, u32::MAX)
}

/// The bracket with all terms of fibre degree above `max_udeg` dropped.
pub fn bracket_bounded<R: Coeff>(
    sigma: &Bivector,
    f: &LaurentPoly<R>,
    g: &LaurentPoly<R>,
    max_udeg: u32,
) -> LaurentPoly<R> {
    let mut out = LaurentPoly::zero();
    if f.is_zero() || g.is_zero() {
        return out;
    }
    for t in &sigma.terms {
        let fx = f.partial_derivative(t.x);
        let gy = g.partial_derivative(t.y);
        let fy = f.partial_derivative(t.y);
        let gx = g.partial_derivative(t.x);
        let inner = fx.mul_bounded(&gy, max_udeg).sub(&fy.mul_bounded(&gx, max_udeg));
        if inner.is_zero() {
            continue;
        }
        out.add_assign(&t.h.to_coeff::<R>().mul_bounded(&inner, max_udeg));
    }
    out
}

pub fn jacobi_defect<R: Coeff>(
    sigma: &Bivector,
    f: &LaurentPoly<R>,
    g: &LaurentPoly<R>,
    h: &LaurentPoly<R>,
) -> LaurentPoly<R> {
    let b = |a: &LaurentPoly<R>, c: &LaurentPoly<R>| bracket(sigma, a, c);
    &(&b(f, &b(g, h)) + &b(g, &b(h, f))) + &b(h, &b(f, g))
}

/// `F ⋆ G` with `B_1 = {,}` and no higher bidifferential operators.
pub fn star<R: Coeff>(sigma: &Bivector, f: &FormalFunction<R>, g: &FormalFunction<R>) -> FormalFunction<R> {
    let n = f.order();
    let mut out = f.series_mul(g);
    for a in 0..n {
        for b in 0..n - a {
            let br = bracket(sigma, f.coeff(a), g.coeff(b));
            if !br.is_zero() {
                let mut c = out.coeff(a + b + 1).clone();
                c.add_assign(&br);
                out.set(a + b + 1, c);
            }
        }
    }
    out
}

pub fn associator_defect<R: Coeff>(
    sigma: &Bivector,
    f: &FormalFunction<R>,
    g: &FormalFunction<R>,
    h: &FormalFunction<R>,
) -> FormalFunction<R> {
    let left = star(sigma, &star(sigma, f, g), h);
    let right = star(sigma, f, &star(sigma, g, h));
    left.sub(&right)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarCheckReport {
    pub k: u32,
    pub sigma: String,
    pub seed: u64,
    pub trials: usize,
    /// Triples whose associator is nonzero mod ħ².
    pub associator_failures: usize,
    /// Triples with a nonzero Jacobiator.
    pub jacobi_failures: usize,
}

impl StarCheckReport {
    pub fn passed(&self) -> bool {
        self.associator_failures == 0 && self.jacobi_failures == 0
    }
}

/// Associativity mod ħ² and the Jacobi identity on random triples.
pub fn star_check(k: u32, sigma: &Bivector, trials: usize, seed: u64) -> StarCheckReport {
    let mut rng = crate::sampling::rng(seed);
    let (mut assoc, mut jac) = (0, 0);
    for _ in 0..trials {
        let [f, g, h] = [(); 3].map(|_| crate::sampling::series(&mut rng, 1, 4, (-3, 3), 2));
        let d = associator_defect(sigma, &f, &g, &h);
        if !(d.coeff(0).is_zero() && d.coeff(1).is_zero()) {
            assoc += 1;
        }
        if !jacobi_defect(sigma, f.coeff(0), g.coeff(0), h.coeff(0)).is_zero() {
            jac += 1;
        }
    }
    StarCheckReport { k, sigma: sigma.to_string(), seed, trials, associator_failures: assoc, jacobi_failures: jac }
}

/// Literal reading of "all brackets vanish on the first formal
/// neighbourhood": every coordinate bracket lies in `<u1, u2>^2`.
/// Informational only; see [`is_trevo_extremal`].
pub fn brackets_vanish_on_first_neighbourhood(sigma: &Bivector) -> bool {
    let coords: Vec<LaurentPoly<Scalar>> = Var::ALL.iter().map(|&v| LaurentPoly::var(v)).collect();
    coords.iter().all(|a| {
        coords
            .iter()
            .all(|b| bracket(sigma, a, b).min_udeg().map_or(true, |d| d >= 2))
    })
}

/// Operational extremality: every bracket-derived column of the first-order
/// cancellation system vanishes identically in the extension parameters.
pub fn is_trevo_extremal(sigma: &Bivector, k: u32, j: u32) -> Result<bool> {
    crate::moduli::bracket_columns_vanish(sigma, k, j)
}

/// A catalog generator times a global function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivectorSpec {
    pub k: u32,
    pub generator: usize,
    pub multiplier: LaurentPoly<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    k: u32,
    generator: usize,
    #[serde(default = "one_text")]
    multiplier: String,
}

fn one_text() -> String {
    "1".into()
}

impl BivectorSpec {
    pub fn new(k: u32, generator: usize, multiplier: LaurentPoly<Scalar>) -> Result<Self> {
        let len = catalog(k)?.len();
        if generator == 0 || generator > len {
            return Err(Error::Invalid(format!("generator {generator} out of range 1..={len} for k = {k}")));
        }
        if multiplier.is_zero() {
            return Err(Error::Invalid("zero multiplier".into()));
        }
        if !is_global(&multiplier, k) {
            return Err(Error::Invalid(format!("multiplier {multiplier} is not a global function on W_{k}")));
        }
        Ok(BivectorSpec { k, generator, multiplier })
    }

    pub fn basic(k: u32, generator: usize) -> Result<Self> {
        Self::new(k, generator, LaurentPoly::one())
    }

    /// Parse `genN`, `M*genN` or `(poly)*genN`; a JSON object in the
    /// serialized form is accepted as well.
    pub fn parse(k: u32, text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            let j: SpecJson =
                serde_json::from_str(t).map_err(|e| Error::Parse(format!("bad sigma spec object: {e}")))?;
            if j.k != k {
                return Err(Error::Invalid(format!("spec is for k = {}, run is for k = {k}", j.k)));
            }
            return Self::new(k, j.generator, j.multiplier.parse()?);
        }
        let bad = || Error::Parse(format!("bad sigma spec '{text}'"));
        let pos = t.rfind("gen").ok_or_else(bad)?;
        let generator: usize = t[pos + 3..].trim().parse().map_err(|_| bad())?;
        let head = t[..pos].trim();
        let multiplier = if head.is_empty() {
            LaurentPoly::one()
        } else {
            let head = head.strip_suffix('*').ok_or_else(bad)?.trim();
            let head = match head.strip_prefix('(') {
                Some(inner) => inner.strip_suffix(')').ok_or_else(bad)?,
                None if head.contains(['+', ' ']) || head[1..].contains('-') => return Err(bad()),
                None => head,
            };
            head.parse()?
        };
        Self::new(k, generator, multiplier)
    }

    pub fn to_bivector(&self) -> Result<Bivector> {
        generator(self.k, self.generator)?.multiply(&self.multiplier)
    }

    pub fn is_basic(&self) -> bool {
        self.multiplier == LaurentPoly::one()
    }

    pub fn to_json(&self) -> String {
        format!(
            "{{\"k\":{},\"generator\":{},\"multiplier\":\"{}\"}}",
            self.k, self.generator, self.multiplier
        )
    }
}

impl fmt::Display for BivectorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_basic() {
            return write!(f, "gen{}", self.generator);
        }
        let m = self.multiplier.to_string();
        if self.multiplier.len() == 1 && !m.starts_with('-') {
            write!(f, "{m}*gen{}", self.generator)
        } else {
            write!(f, "({m})*gen{}", self.generator)
        }
    }
}

impl Serialize for BivectorSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecJson {
            k: self.k,
            generator: self.generator,
            multiplier: self.multiplier.to_string(),
        }
        .serialize(s)
    }
}

impl FromStr for Var {
    type Err = Error;
    fn from_str(s: &str) -> Result<Var> {
        match s {
            "z" => Ok(Var::Z),
            "u1" => Ok(Var::U1),
            "u2" => Ok(Var::U2),
            _ => Err(Error::Parse(format!("unknown coordinate '{s}'"))),
        }
    }
}
