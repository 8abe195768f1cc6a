//! Exact rational scalars.
//!
//! Class verdicts in the coinvariants module must not depend on rounding, so
//! every scalar that can be rational is a [`Rat`]. Floating point enters only
//! through quadrature, and is converted at well-marked boundaries.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact fraction n/d.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders `p/q` in lowest terms, or just `p` for integers.
pub fn to_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a plain decimal like `-2.5`.
pub fn parse(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int: BigInt = if int == "-" || int.is_empty() {
            BigInt::zero()
        } else {
            int.trim().parse().ok()?
        };
        let digits: BigInt = frac.parse().ok()?;
        if digits.is_negative() {
            return None;
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Rat::new(digits, scale);
        let int_part = Rat::from_integer(int);
        return Some(if neg {
            int_part - frac_part
        } else {
            int_part + frac_part
        });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

/// Nearest rational with small denominator for an f64 known to be integral.
pub fn from_rounded_f64(x: f64) -> Option<Rat> {
    Rat::from_f64(x.round())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["3", "-7", "5/3", "-2/7", "0"] {
            let r = parse(s).unwrap();
            assert_eq!(to_string(&r), s);
        }
        assert_eq!(parse("-2.5").unwrap(), ratio(-5, 2));
        assert_eq!(parse("0.125").unwrap(), ratio(1, 8));
        assert!(parse("1/0").is_none());
    }

    #[test]
    fn arithmetic_is_exact() {
        let f = ratio(5, 12) + rat(1);
        assert_eq!(f / rat(3), ratio(17, 36));
    }
}
