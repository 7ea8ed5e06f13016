//! Exact rational scalars and the uniform (L∞) metric on rational vectors.

use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

/// Builds `num / den`. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses an exact decimal (`-1.25`, `3`, `.5`) or a fraction (`7/3`, `-2/4`).
pub fn parse_rational(text: &str) -> Result<Rational, RationalError> {
    let s = text.trim();
    let malformed = || RationalError::Malformed(text.to_string());
    if s.is_empty() {
        return Err(malformed());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num).ok_or_else(malformed)?;
        let den = parse_integer(den).ok_or_else(malformed)?;
        if den.is_zero() {
            return Err(RationalError::ZeroDenominator(text.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(malformed());
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let digits = format!("{whole}{frac}");
    let numerator = BigInt::from_str(&digits).map_err(|_| malformed())?;
    let denominator = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numerator, denominator);
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Fallback for magnitudes outside f64's exponent range.
        let n = value.numer().to_f64().unwrap_or(f64::NAN);
        let d = value.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Sign of the first nonzero component, or 0 for the zero vector.
pub fn vector_sign(v: &[Rational]) -> i8 {
    for x in v {
        match x.cmp(&Rational::zero()) {
            Ordering::Greater => return 1,
            Ordering::Less => return -1,
            Ordering::Equal => {}
        }
    }
    0
}

pub fn scale(v: &[Rational], sign: i8) -> Vec<Rational> {
    match sign {
        1 => v.to_vec(),
        -1 => v.iter().map(|x| -x).collect(),
        _ => vec![Rational::zero(); v.len()],
    }
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Largest absolute component; 0 for an empty vector.
pub fn uniform_norm(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

/// Largest absolute componentwise difference.
pub fn uniform_distance(u: &[Rational], v: &[Rational]) -> Result<Rational, RationalError> {
    if u.len() != v.len() {
        return Err(RationalError::LengthMismatch { left: u.len(), right: v.len() });
    }
    Ok(u.iter()
        .zip(v)
        .map(|(a, b)| (a - b).abs())
        .max()
        .unwrap_or_else(Rational::zero))
}

/// `uniform_distance` for callers that have already checked the lengths.
pub(crate) fn dist(u: &[Rational], v: &[Rational]) -> Rational {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(Rational::zero)
}

pub(crate) fn add_assign(acc: &mut [Rational], v: &[Rational]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

pub(crate) fn sub_assign(acc: &mut [Rational], v: &[Rational]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a -= b;
    }
}

/// Centre of the bounding box of `points`, i.e. `(max + min) / 2` per coordinate.
pub fn bounding_box_centre(points: &[&[Rational]]) -> Vec<Rational> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    (0..first.len())
        .map(|k| {
            let lo = points.iter().map(|p| &p[k]).min().expect("nonempty");
            let hi = points.iter().map(|p| &p[k]).max().expect("nonempty");
            (lo + hi) * &half
        })
        .collect()
}

/// Largest per-coordinate spread `max - min` over `points`.
pub fn diameter(points: &[&[Rational]]) -> Rational {
    let Some(first) = points.first() else {
        return Rational::zero();
    };
    (0..first.len())
        .map(|k| {
            let lo = points.iter().map(|p| &p[k]).min().expect("nonempty");
            let hi = points.iter().map(|p| &p[k]).max().expect("nonempty");
            hi - lo
        })
        .max()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_fractions_exactly() {
        assert_eq!(q("1/3"), ratio(1, 3));
        assert_eq!(q("-2/4"), ratio(-1, 2));
        assert_eq!(q("6/-4"), ratio(-3, 2));
        assert_eq!(format_rational(&q("1/3")), "1/3");
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(q("0.1"), ratio(1, 10));
        assert_eq!(q("-1.25"), ratio(-5, 4));
        assert_eq!(q("3"), int(3));
        assert_eq!(q(".5"), ratio(1, 2));
        assert_eq!(q("+7."), int(7));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1e3", "--1", "1/2/3", ".", "1.2.3", "/3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn distance_examples() {
        let zero = vec![int(0), int(0)];
        assert_eq!(uniform_distance(&zero, &zero).unwrap(), int(0));
        assert_eq!(uniform_distance(&[int(1), int(-2)], &zero).unwrap(), int(2));
        assert_eq!(
            uniform_distance(&[ratio(1, 2), int(3)], &[int(1), ratio(5, 2)]).unwrap(),
            ratio(1, 2)
        );
        assert!(uniform_distance(&[int(1)], &zero).is_err());
    }

    #[test]
    fn sign_uses_first_nonzero_component() {
        assert_eq!(vector_sign(&[int(0), int(-3), int(5)]), -1);
        assert_eq!(vector_sign(&[int(0), int(0)]), 0);
        assert_eq!(vector_sign(&[ratio(1, 9), int(-3)]), 1);
    }

    #[test]
    fn box_centre_and_diameter() {
        let a = vec![int(0), int(0)];
        let b = vec![int(1), int(2)];
        assert_eq!(bounding_box_centre(&[&a, &b]), vec![ratio(1, 2), int(1)]);
        assert_eq!(diameter(&[&a, &b]), int(2));
    }
}
