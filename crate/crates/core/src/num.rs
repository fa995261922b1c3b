//! Exact rational arithmetic used for every weight, signature and count.
//!
//! All quantities in this crate are `Rat` values; there is no floating-point
//! code path anywhere. `num_rational::BigRational` already keeps values in
//! lowest terms with a positive denominator, which is exactly the invariant
//! we need.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"<int>"` or `"<int>/<int>"` (the wire format for weights).
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::BadRational(s.to_string()))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::BadRational(s.to_string()))?;
    if d.is_zero() {
        return Err(Error::BadRational(s.to_string()));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational in the same wire format `parse_rat` accepts.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `(-1)^k` as a rational.
pub fn sign_pow(k: usize) -> Rat {
    if k % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

pub fn is_odd_integer(r: &Rat) -> bool {
    r.denom().is_one() && r.numer().is_odd()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["0", "1", "-1", "-1/2", "7/3", "10/4"] {
            let r = parse_rat(s).unwrap();
            let back = parse_rat(&format_rat(&r)).unwrap();
            assert_eq!(r, back);
        }
        assert_eq!(format_rat(&parse_rat("10/4").unwrap()), "5/2");
        assert_eq!(format_rat(&parse_rat("-3/-6").unwrap()), "1/2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
        assert!(parse_rat("").is_err());
    }
}
