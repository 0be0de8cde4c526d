//! Scalar traits shared by the matrix and polynomial code.
//!
//! Everything in the classification pipeline runs over [`BigRational`] or
//! [`BigInt`], but the containers are written against these traits so the
//! same routines can be exercised with `f64` or fixed-width rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed};

/// A ring element usable as a matrix or polynomial entry.
///
/// Division is only required to be exact when the divisor divides the
/// dividend (as in fraction-free elimination over the integers).
pub trait Scalar: Clone + Debug + PartialEq + Num + Signed + FromPrimitive {
    /// Whether `==` on this type is exact equality of the represented value.
    const EXACT: bool;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every i64 is representable")
    }
}

/// A scalar type whose division is a true field division.
pub trait Field: Scalar {}

impl Scalar for f64 {
    const EXACT: bool = false;
}
impl Scalar for f32 {
    const EXACT: bool = false;
}
impl Scalar for i64 {
    const EXACT: bool = true;
}
impl Scalar for BigInt {
    const EXACT: bool = true;
}
impl Scalar for BigRational {
    const EXACT: bool = true;
}
impl Scalar for Ratio<i64> {
    const EXACT: bool = true;
}

impl Field for f64 {}
impl Field for f32 {}
impl Field for BigRational {}
impl Field for Ratio<i64> {}

/// `p/q` rendering used throughout the JSON and CSV output; integers keep an
/// explicit `/1` so the format is uniform.
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `p/q`, `p`, or a terminating decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let mut p: BigInt = digits.parse().ok()?;
        if neg {
            p = -p;
        }
        let q = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(p, q));
    }
    let p: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(p))
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
