//! Exact integer and rational helpers for dimension bookkeeping.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest admissible row, column or vector dimension.
pub const MAX_DIM: u64 = 1 << 31;

/// Largest admissible number of stored entries in one matrix or vector.
pub const MAX_ELEMENTS: u64 = 1 << 26;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Returns `(gcd(a, b), lcm(a, b))`.
///
/// The lcm is formed as `a / gcd * b` and checked against [`MAX_DIM`].
pub fn gcd_lcm(a: u64, b: u64) -> Result<(u64, u64)> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroDimension);
    }
    let g = gcd(a, b);
    let l = (a / g) as u128 * b as u128;
    Ok((g, check_dim_u128(l)? as u64))
}

/// `lcm` over `usize` dimensions.
pub fn lcm(a: usize, b: usize) -> Result<usize> {
    gcd_lcm(a as u64, b as u64).map(|(_, l)| l as usize)
}

/// Multiply two dimensions, failing past [`MAX_DIM`].
pub fn mul_dim(a: usize, b: usize) -> Result<usize> {
    check_dim_u128(a as u128 * b as u128).map(|v| v as usize)
}

pub(crate) fn check_dim_u128(v: u128) -> Result<u128> {
    if v > MAX_DIM as u128 {
        Err(Error::DimensionOverflow { value: v, limit: MAX_DIM })
    } else {
        Ok(v)
    }
}

/// Fails when `rows * cols` entries would exceed [`MAX_ELEMENTS`].
pub(crate) fn check_elements(rows: usize, cols: usize) -> Result<()> {
    let n = rows as u128 * cols as u128;
    if n > MAX_ELEMENTS as u128 {
        Err(Error::DimensionOverflow { value: n, limit: MAX_ELEMENTS })
    } else {
        Ok(())
    }
}

/// All divisors of `n` in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A positive rational `num/den` kept in lowest terms.
///
/// Used as the shape class `rows/cols` of a matrix and as the exponent key
/// of a formal polynomial. Ordering is numeric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(u64, u64)", into = "(u64, u64)")]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::ZeroDimension);
        }
        let g = gcd(num, den);
        Ok(Ratio { num: num / g, den: den / g })
    }

    /// Shape class of an `rows x cols` matrix.
    pub fn of_shape(rows: usize, cols: usize) -> Self {
        Ratio::new(rows as u64, cols as u64).expect("matrix dimensions are positive")
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn checked_mul(self, other: Ratio) -> Result<Ratio> {
        // cross-reduce first so the intermediate products stay small
        let g1 = gcd(self.num, other.den);
        let g2 = gcd(other.num, self.den);
        let num = (self.num / g1) as u128 * (other.num / g2) as u128;
        let den = (self.den / g2) as u128 * (other.den / g1) as u128;
        let num = u64::try_from(num).map_err(|_| Error::DimensionOverflow { value: num, limit: u64::MAX })?;
        let den = u64::try_from(den).map_err(|_| Error::DimensionOverflow { value: den, limit: u64::MAX })?;
        Ok(Ratio { num, den })
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl TryFrom<(u64, u64)> for Ratio {
    type Error = Error;

    fn try_from((num, den): (u64, u64)) -> Result<Self> {
        Ratio::new(num, den)
    }
}

impl From<Ratio> for (u64, u64) {
    fn from(r: Ratio) -> Self {
        (r.num, r.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_lcm_examples() {
        assert_eq!(gcd_lcm(4, 3).unwrap(), (1, 12));
        assert_eq!(gcd_lcm(6, 4).unwrap(), (2, 12));
        assert_eq!(gcd_lcm(5, 5).unwrap(), (5, 5));
    }

    #[test]
    fn gcd_lcm_product_identity() {
        for a in 1..40u64 {
            for b in 1..40u64 {
                let (g, l) = gcd_lcm(a, b).unwrap();
                assert_eq!(g * l, a * b);
                assert_eq!(a % g, 0);
                assert_eq!(l % b, 0);
            }
        }
    }

    #[test]
    fn lcm_overflow_is_an_error() {
        let big = 1u64 << 30;
        assert!(gcd_lcm(big, big - 1).is_err());
        assert!(matches!(
            gcd_lcm(big + 1, big - 1),
            Err(Error::DimensionOverflow { .. })
        ));
        assert!(mul_dim(1 << 16, 1 << 16).is_err());
        assert_eq!(mul_dim(1 << 15, 1 << 16).unwrap(), 1 << 31);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(gcd_lcm(0, 3), Err(Error::ZeroDimension));
        assert!(Ratio::new(0, 1).is_err());
    }

    #[test]
    fn ratio_reduces_and_orders() {
        let r = Ratio::new(6, 4).unwrap();
        assert_eq!((r.num(), r.den()), (3, 2));
        assert_eq!(Ratio::of_shape(3, 6), Ratio::new(1, 2).unwrap());
        assert!(Ratio::new(1, 2).unwrap() < Ratio::ONE);
        assert!(Ratio::new(3, 2).unwrap() > Ratio::new(4, 3).unwrap());
        let p = Ratio::new(2, 3).unwrap().checked_mul(Ratio::new(3, 4).unwrap()).unwrap();
        assert_eq!(p, Ratio::new(1, 2).unwrap());
        assert_eq!(p.to_string(), "1/2");
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }
}
