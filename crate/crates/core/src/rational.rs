//! Exact rational scalars and small helpers shared by every module.
//!
//! Rationals are `num_rational::BigRational`; their `Display` form is the
//! canonical text encoding (`p/q` in lowest terms with `q > 0`, or just `p`
//! when the denominator is one).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` in lowest terms. Panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`. Zero denominators are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidInput(format!("malformed rational {text:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::InvalidInput(format!(
            "malformed rational {text:?}: zero denominator"
        )));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form, `p/q` or `p`.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Positive rescaling of `v` to a primitive integer vector (gcd of entries 1).
/// The zero vector is returned unchanged.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &scaled {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    scaled
        .into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

pub fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_and_fraction_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational(" 2/-4 ").unwrap(), frac(-1, 2));
    }

    #[test]
    fn rejects_zero_denominator_and_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&frac(4, -6)), "-2/3");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![frac(1, 2), frac(-3, 4), int(0)];
        assert_eq!(primitive(&v), ints(&[2, -3, 0]));
        assert_eq!(primitive(&ints(&[0, 0])), ints(&[0, 0]));
        assert_eq!(primitive(&ints(&[-4, 6])), ints(&[-2, 3]));
    }
}
