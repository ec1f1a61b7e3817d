//! Exact rational scalars.
//!
//! Everything in the calculus is an exact identity, so all values are
//! arbitrary-precision rationals. Rendering is `p` for integers and `p/q`
//! otherwise, with `q > 0` and the fraction reduced.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number used for every value in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `(-1)^dim` as a rational.
pub fn parity(dim: usize) -> Q {
    if dim.is_multiple_of(2) {
        one()
    } else {
        -one()
    }
}

/// `(-1)^dim` as a machine integer.
pub fn parity_i(dim: usize) -> i64 {
    if dim.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Render in the canonical `p/q` form (integers without denominator).
pub fn render(x: &Q) -> String {
    x.to_string()
}

/// Parse `"p/q"`, `"p"`, or `"-p/q"`. Zero denominators are rejected.
pub fn parse(s: &str) -> Result<Q, Error> {
    let t = s.trim();
    let bad = || Error::Parse {
        context: "rational".into(),
        message: format!("cannot parse {s:?} as p/q"),
    };
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn sign(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x * y)
}
