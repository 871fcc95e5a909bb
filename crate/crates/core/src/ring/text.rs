//! Canonical text form, e.g. `3/2*z^-1*u1*u2^2 - u2`.

use std::fmt;
use std::str::FromStr;

use super::{Coeff, LaurentPoly, Monomial, Scalar};
use crate::error::Error;

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    let mut put = |f: &mut fmt::Formatter<'_>, name: &str, e: i64| -> fmt::Result {
        if e == 0 {
            return Ok(());
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            f.write_str(name)
        } else {
            write!(f, "{name}^{e}")
        }
    };
    put(f, "z", m.l as i64)?;
    put(f, "u1", m.i as i64)?;
    put(f, "u2", m.s as i64)
}

impl<R: Coeff> fmt::Display for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms().enumerate() {
            let text = c.to_string();
            let compound = text.contains(' ');
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, text.clone()),
            };
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = if compound { format!("({mag})") } else { mag };
            if *m == Monomial::ONE {
                f.write_str(&mag)?;
            } else {
                if mag != "1" {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl<R: Coeff> fmt::Debug for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_term(src: &str, t: &str) -> Result<(Monomial, Scalar), Error> {
    let bad = |why: &str| Error::Parse(format!("{why} in '{src}'"));
    let mut coeff = Scalar::one();
    let mut mono = Monomial::ONE;
    if t.is_empty() {
        return Err(bad("empty term"));
    }
    for factor in t.split('*') {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => {
                let e: i64 = e.parse().map_err(|_| bad("bad exponent"))?;
                (b, Some(e))
            }
            None => (factor, None),
        };
        let e = exp.unwrap_or(1);
        match base {
            "z" => mono.l += i32::try_from(e).map_err(|_| bad("exponent out of range"))?,
            "u1" | "u2" => {
                let e = u32::try_from(e).map_err(|_| bad("negative fibre exponent"))?;
                if base == "u1" {
                    mono.i += e;
                } else {
                    mono.s += e;
                }
            }
            _ => {
                if exp.is_some() {
                    return Err(bad("exponent on a number"));
                }
                let c: Scalar = base.parse().map_err(|_| bad(&format!("unknown factor '{base}'")))?;
                coeff = &coeff * &c;
            }
        }
    }
    Ok((mono, coeff))
}

impl FromStr for LaurentPoly<Scalar> {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self, Error> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = LaurentPoly::zero();
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut sign = Scalar::one();
        if bytes[0] == b'-' || bytes[0] == b'+' {
            if bytes[0] == b'-' {
                sign = -Scalar::one();
            }
            start = 1;
        }
        let mut idx = start;
        loop {
            let at_split = idx == bytes.len()
                || ((bytes[idx] == b'+' || bytes[idx] == b'-') && idx > start && bytes[idx - 1] != b'^');
            if at_split {
                let (m, c) = parse_term(src, &s[start..idx])?;
                out.add_term(m, &c * &sign);
                if idx == bytes.len() {
                    break;
                }
                sign = if bytes[idx] == b'-' { -Scalar::one() } else { Scalar::one() };
                start = idx + 1;
            }
            idx += 1;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ParamPoly;

    type P = LaurentPoly<Scalar>;

    #[test]
    fn render_examples() {
        let f = P::term(Monomial::new(-1, 1, 2), Scalar::new(3, 2));
        assert_eq!(f.to_string(), "3/2*z^-1*u1*u2^2");
        let g: P = "z^2 - 2 + 1/3*u1 - z*u2".parse().unwrap();
        assert_eq!(g.to_string(), "-2 + z^2 - z*u2 + 1/3*u1");
        assert_eq!(P::zero().to_string(), "0");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["3/2*z^-1*u1*u2^2", "-z + u1", "7", "-1/2*z^-3 + z^3*u1^2 - 5*u2"] {
            let f: P = s.parse().unwrap();
            let again: P = f.to_string().parse().unwrap();
            assert_eq!(f, again);
        }
        assert!("z^".parse::<P>().is_err());
        assert!("u1^-1".parse::<P>().is_err());
        assert!("w".parse::<P>().is_err());
    }

    #[test]
    fn parametric_render() {
        let c = ParamPoly::var(0).add(&ParamPoly::var(1));
        let f = LaurentPoly::term(Monomial::new(1, 1, 0), c);
        assert_eq!(f.to_string(), "(p0 + p1)*z*u1");
        let g = LaurentPoly::term(Monomial::new(0, 0, 1), ParamPoly::var(3).neg());
        assert_eq!(g.to_string(), "-p3*u2");
    }
}
