//! Arbitrary-precision rationals and small helpers shared by every module.
//!
//! [`Rat`] is `num`'s `BigRational`, which already maintains the invariant we
//! need (lowest terms, positive denominator); this module only adds parsing,
//! formatting and vector utilities.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Shorthand for a rational from machine integers.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from(BigInt::from(p))
}

/// Parse `"p/q"` or `"p"`, rejecting zero denominators.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = |m: &str| Error::schema("", format!("malformed rational {s:?}: {m}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
    let q: BigInt = q.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
    if q.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(p, q))
}

/// Canonical `"p/q"` form, always including the denominator.
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rat) -> Rat {
    let f = x - x.floor();
    debug_assert!(!f.is_negative() && f < Rat::one());
    f
}

/// Least common multiple of the denominators of a slice of rationals.
pub fn common_denominator(xs: &[Rat]) -> BigInt {
    let mut d = BigInt::one();
    for x in xs {
        d = num::integer::lcm(d, x.denom().clone());
    }
    d
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_vec(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

pub fn zero_vec(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    num::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-3/4", "0/1", "7/1", "21/14"] {
            let x = parse_rat(s).unwrap();
            let y = parse_rat(&format_rat(&x)).unwrap();
            assert_eq!(x, y);
        }
        assert_eq!(format_rat(&parse_rat("21/14").unwrap()), "3/2");
        assert_eq!(format_rat(&parse_rat("5").unwrap()), "5/1");
        assert_eq!(format_rat(&parse_rat("-4/-6").unwrap()), "2/3");
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x/2").is_err());
        assert!(parse_rat("1/2/3").is_err());
    }

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(frac(&rat(-7, 2)), rat(1, 2));
        assert_eq!(frac(&rat(9, 4)), rat(1, 4));
        assert_eq!(frac(&rat(-3, 1)), rat(0, 1));
    }

    #[test]
    fn common_denominator_is_lcm() {
        let xs = [rat(1, 4), rat(5, 6), rat(-2, 3)];
        assert_eq!(common_denominator(&xs), BigInt::from(12));
    }
}
