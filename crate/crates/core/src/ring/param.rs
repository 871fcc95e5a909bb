//! Polynomials in named parameters `p0, p1, ...` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use super::scalar::Scalar;
use super::Coeff;

/// Sparse exponent vector: `(parameter index, exponent)` sorted by index,
/// exponents strictly positive.
pub type ParamMono = Vec<(u32, u32)>;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMono, Scalar>,
}

fn mono_mul(a: &ParamMono, b: &ParamMono) -> ParamMono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].0.cmp(&b[y].0) {
            std::cmp::Ordering::Less => {
                out.push(a[x]);
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[y]);
                y += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[x].0, a[x].1 + b[y].1));
                x += 1;
                y += 1;
            }
        }
    }
    out.extend_from_slice(&a[x..]);
    out.extend_from_slice(&b[y..]);
    out
}

impl ParamPoly {
    pub fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        ParamPoly { terms }
    }

    /// The parameter `p_idx`.
    pub fn var(idx: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(idx, 1)], Scalar::one());
        ParamPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMono, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().map(|&(_, e)| e).sum()).max()
    }

    /// Highest parameter index that occurs, if any.
    pub fn max_var(&self) -> Option<u32> {
        self.terms.keys().filter_map(|m| m.last().map(|&(v, _)| v)).max()
    }

    /// Substitute rational values for the parameters. Missing values are zero.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m {
                match point.get(v as usize) {
                    Some(x) => t = &t * &x.pow(e),
                    None => {
                        t = Scalar::zero();
                        break;
                    }
                }
            }
            if !t.is_zero() {
                acc = &acc + &t;
            }
        }
        acc
    }

    fn insert_add(&mut self, m: ParamMono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

impl Coeff for ParamPoly {
    fn zero() -> Self {
        ParamPoly::default()
    }

    fn one() -> Self {
        ParamPoly::constant(Scalar::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = ParamPoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.insert_add(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return ParamPoly::default();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    fn from_scalar(s: Scalar) -> Self {
        ParamPoly::constant(s)
    }

    fn is_atom(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| m.is_empty())
    }

    fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }
}

fn write_mono(f: &mut fmt::Formatter<'_>, m: &ParamMono) -> fmt::Result {
    for (n, &(v, e)) in m.iter().enumerate() {
        if n > 0 {
            f.write_str("*")?;
        }
        if e == 1 {
            write!(f, "p{v}")?;
        } else {
            write!(f, "p{v}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_mono(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
