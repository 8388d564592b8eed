//! Exact rational scalars.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// The ground field: arbitrary precision rationals, always in lowest terms.
pub type Scalar = num_rational::BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// `1/n!`
pub fn inv_factorial(n: usize) -> Scalar {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= k;
    }
    Scalar::new(BigInt::one(), f)
}

/// Parses `"p"` or `"p/q"` with decimal integers.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

pub fn format_scalar(s: &Scalar) -> String {
    s.to_string()
}

/// Formats a coefficient in front of a basis label: `x`, `-x`, `1/2 x`.
pub(crate) fn format_term(c: &Scalar, label: &str, first: bool) -> String {
    let neg = c.is_negative();
    let abs = c.abs();
    let body = if abs.is_one() {
        label.to_string()
    } else if label.is_empty() {
        abs.to_string()
    } else {
        format!("{abs} {label}")
    };
    match (first, neg) {
        (true, false) => body,
        (true, true) => format!("-{body}"),
        (false, false) => format!(" + {body}"),
        (false, true) => format!(" - {body}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_in_lowest_terms() {
        assert_eq!(parse_scalar("2/4"), Some(frac(1, 2)));
        assert_eq!(parse_scalar("-3"), Some(int(-3)));
        assert_eq!(parse_scalar("6/-4"), Some(frac(-3, 2)));
        assert_eq!(parse_scalar("1.5"), None);
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(parse_scalar(""), None);
    }

    #[test]
    fn factorials() {
        assert_eq!(inv_factorial(0), int(1));
        assert_eq!(inv_factorial(4), frac(1, 24));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_scalar(&frac(-6, 4)), "-3/2");
        assert_eq!(format_term(&frac(1, 2), "x", true), "1/2 x");
        assert_eq!(format_term(&int(-1), "x", false), " - x");
    }

    use proptest::prelude::*;

    fn small() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..12).prop_map(|(p, q)| frac(p, q))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a - &a, Scalar::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * a.recip(), Scalar::one());
            }
        }
    }
}
