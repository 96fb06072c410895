//! Exact dyadic rationals `p / 2^k`.
//!
//! Every density and normalized Fourier coefficient over F₂ⁿ has a power of
//! two in its denominator, so this is the only number type the exact paths
//! need. Values are kept canonical: the numerator is odd, or the value is an
//! integer with `k = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigInt,
    log2_denominator: u32,
}

impl DyadicRational {
    pub fn new(numerator: impl Into<BigInt>, log2_denominator: u32) -> Self {
        let mut numerator = numerator.into();
        let mut log2_denominator = log2_denominator;
        if numerator.is_zero() {
            log2_denominator = 0;
        } else {
            let tz = numerator.trailing_zeros().unwrap_or(0);
            let shift = tz.min(u64::from(log2_denominator)) as u32;
            numerator >>= shift;
            log2_denominator -= shift;
        }
        Self {
            numerator,
            log2_denominator,
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// `count / 2^n`, the normalized counting measure of a set of size `count`.
    pub fn from_count(count: u64, n: u32) -> Self {
        Self::new(count, n)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.is_negative()
    }

    /// Divides by `2^k` exactly.
    pub fn shr(&self, k: u32) -> Self {
        Self::new(self.numerator.clone(), self.log2_denominator + k)
    }

    /// Multiplies by `2^k` exactly.
    pub fn shl(&self, k: u32) -> Self {
        if k >= self.log2_denominator {
            Self::new(&self.numerator << (k - self.log2_denominator), 0)
        } else {
            Self::new(self.numerator.clone(), self.log2_denominator - k)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), BigInt::one() << self.log2_denominator)
    }

    /// Exact conversion when the rational has a power-of-two denominator.
    pub fn from_rational(r: &BigRational) -> Option<Self> {
        let denom = r.denom();
        if denom.sign() != Sign::Plus {
            return None;
        }
        let bits = denom.bits();
        if bits == 0 || (denom - BigInt::one()) & denom != BigInt::zero() {
            return None;
        }
        Some(Self::new(r.numer().clone(), (bits - 1) as u32))
    }

    /// Nearest `f64`; only for reporting and transcendental comparisons.
    pub fn to_f64(&self) -> f64 {
        let num = self.numerator.to_f64().unwrap_or(f64::NAN);
        if self.log2_denominator <= 1000 {
            num / 2f64.powi(self.log2_denominator as i32)
        } else {
            let r = self.to_rational();
            r.to_f64().unwrap_or(f64::NAN)
        }
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let k = self.log2_denominator.max(other.log2_denominator);
        let a = &self.numerator << (k - self.log2_denominator);
        let b = &other.numerator << (k - other.log2_denominator);
        (a, b, k)
    }
}

impl Default for DyadicRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;
    fn add(self, rhs: Self) -> DyadicRational {
        let (a, b, k) = self.aligned(rhs);
        DyadicRational::new(a + b, k)
    }
}

impl Sub for &DyadicRational {
    type Output = DyadicRational;
    fn sub(self, rhs: Self) -> DyadicRational {
        let (a, b, k) = self.aligned(rhs);
        DyadicRational::new(a - b, k)
    }
}

impl Mul for &DyadicRational {
    type Output = DyadicRational;
    fn mul(self, rhs: Self) -> DyadicRational {
        DyadicRational::new(
            &self.numerator * &rhs.numerator,
            self.log2_denominator + rhs.log2_denominator,
        )
    }
}

impl Neg for &DyadicRational {
    type Output = DyadicRational;
    fn neg(self) -> DyadicRational {
        DyadicRational::new(-&self.numerator, self.log2_denominator)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for DyadicRational {
            type Output = DyadicRational;
            fn $f(self, rhs: Self) -> DyadicRational {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.log2_denominator)
    }
}

/// Accepts `p/2^k`, a bare integer `p`, or `p/q` with `q` a power of two.
impl FromStr for DyadicRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(Self::new(s.parse::<BigInt>().map_err(|_| bad())?, 0)),
            Some((num, den)) => {
                let num = num.trim().parse::<BigInt>().map_err(|_| bad())?;
                let den = den.trim();
                if let Some(exp) = den.strip_prefix("2^") {
                    let k = exp.parse::<u32>().map_err(|_| bad())?;
                    Ok(Self::new(num, k))
                } else {
                    let den = den.parse::<BigInt>().map_err(|_| bad())?;
                    if den.is_zero() {
                        return Err(bad());
                    }
                    Self::from_rational(&BigRational::new(num, den)).ok_or_else(bad)
                }
            }
        }
    }
}

impl Serialize for DyadicRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyadicRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
