use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::BrauerError;

/// An element of `Q/Z`, kept as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Qz(Ratio<i64>);

impl Qz {
    pub const ZERO: Qz = Qz(Ratio::new_raw(0, 1));

    /// `num/den` reduced modulo 1. Panics if `den` is zero.
    pub fn new(num: i64, den: i64) -> Qz {
        Qz::from_ratio(Ratio::new(num, den))
    }

    fn from_ratio(r: Ratio<i64>) -> Qz {
        let (n, d) = (*r.numer(), *r.denom());
        Qz(Ratio::new(n.mod_floor(&d), d))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `n·x`.
    pub fn times(self, n: i64) -> Qz {
        Qz::from_ratio(self.0 * n)
    }

    /// Order of `x` in `Q/Z`.
    pub fn order(&self) -> i64 {
        self.denom()
    }

    /// All `k/n` for `0 ≤ k < n`.
    pub fn multiples_of_inverse(n: i64) -> impl Iterator<Item = Qz> {
        (0..n).map(move |k| Qz::new(k, n))
    }
}

impl Add for Qz {
    type Output = Qz;
    fn add(self, rhs: Qz) -> Qz {
        Qz::from_ratio(self.0 + rhs.0)
    }
}

impl AddAssign for Qz {
    fn add_assign(&mut self, rhs: Qz) {
        *self = *self + rhs;
    }
}

impl Sub for Qz {
    type Output = Qz;
    fn sub(self, rhs: Qz) -> Qz {
        self + (-rhs)
    }
}

impl Neg for Qz {
    type Output = Qz;
    fn neg(self) -> Qz {
        Qz::from_ratio(-self.0)
    }
}

impl Sum for Qz {
    fn sum<I: Iterator<Item = Qz>>(iter: I) -> Qz {
        iter.fold(Qz::ZERO, Add::add)
    }
}

impl fmt::Display for Qz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// Strict parser: `num/den` with `den ≥ 1`, `0 ≤ num < den` and `gcd = 1`.
impl FromStr for Qz {
    type Err = BrauerError;

    fn from_str(s: &str) -> Result<Qz, BrauerError> {
        let bad = || BrauerError::BadFraction(s.to_string());
        let (n, d) = s.split_once('/').ok_or_else(bad)?;
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(n) || !digits(d) {
            return Err(bad());
        }
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d == 0 || n >= d || n.gcd(&d) != 1 {
            return Err(bad());
        }
        Ok(Qz(Ratio::new_raw(n, d)))
    }
}
