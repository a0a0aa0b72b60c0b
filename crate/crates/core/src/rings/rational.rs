use num::{BigInt, BigRational, One, Signed, Zero};

use super::RingError;

/// Exact rational number; always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Renders `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational, RingError> {
    let s = s.trim();
    let bad = || RingError::Mismatch(format!("malformed rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(RingError::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

pub(crate) fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_exact() {
        let s = rat(1, 2) + rat(1, 3);
        assert_eq!(s, rat(5, 6));
        assert_eq!(rat(4, -6), rat(-2, 3));
        assert!(rat(4, -6).denom() > &BigInt::zero());
    }

    #[test]
    fn text_round_trip() {
        for r in [rat(0, 1), rat(-7, 3), rat(12, 4), rat(1, 1000)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&rat(3, 1)), "3");
        assert_eq!(format_rational(&rat(-1, 2)), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
    }
}
