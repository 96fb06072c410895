//! The niveau set `{x : weight(x) ≤ w*}`: a dense set whose sumset misses
//! every subspace of small codimension.
//!
//! With `η = 0.8ε`, the weight threshold is `w* = ⌊n/2 − η√(2πn)/2⌋` and the
//! zero bound is `d = ⌊η√(2πn)⌋`. Every element of `A + A` has weight at most
//! `2w*`, hence at least `n − 2w* ≥ d` zero coordinates, while every
//! subspace of codimension `c` contains a vector with at most `c` zeros.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::increment::ratio_string;
use crate::set::{weight, DenseSet, GroupElement};
use crate::subspace::Subspace;

/// Berry–Esseen constant for a sum of `n` fair bits, applied as `3.2/√n`.
pub const BERRY_ESSEEN_CONSTANT: f64 = 3.2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiveauParams {
    pub n: u32,
    #[serde(serialize_with = "opt_ratio")]
    pub epsilon: Option<BigRational>,
    #[serde(serialize_with = "opt_ratio")]
    pub eta: Option<BigRational>,
    pub w_star: u32,
    pub d: u32,
}

fn opt_ratio<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => ratio_string::serialize(r, s),
        None => s.serialize_none(),
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl NiveauParams {
    /// Parameters from `ε ∈ (0, 1/2]`, with `η = 4ε/5`.
    pub fn from_epsilon(n: u32, epsilon: BigRational) -> Result<Self> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if !epsilon.is_positive() || epsilon > half || n == 0 {
            return Err(Error::Precondition(format!(
                "need n >= 1 and 0 < epsilon <= 1/2, got {epsilon}"
            )));
        }
        let eta = &epsilon * BigRational::new(BigInt::from(4), BigInt::from(5));
        let radius = to_f64(&eta) * (2.0 * PI * f64::from(n)).sqrt();
        let w = ((f64::from(n) - radius) / 2.0).floor();
        if w < 0.0 {
            return Err(Error::Precondition(
                "threshold below zero, the set would be empty".into(),
            ));
        }
        Ok(Self {
            n,
            epsilon: Some(epsilon),
            eta: Some(eta),
            w_star: w as u32,
            d: radius.floor() as u32,
        })
    }

    /// Parameters from an explicit threshold `w* ≤ n/2`; the zero bound is
    /// then `n − 2w*`.
    pub fn from_threshold(n: u32, w_star: u32) -> Result<Self> {
        if 2 * w_star > n {
            return Err(Error::Precondition(format!("threshold {w_star} exceeds n/2")));
        }
        Ok(Self {
            n,
            epsilon: None,
            eta: None,
            w_star,
            d: n - 2 * w_star,
        })
    }

    /// Minimum number of zeros of any element of `A + A`.
    pub fn min_sumset_zeros(&self) -> u32 {
        self.n - 2 * self.w_star
    }

    /// `ε√n ≥ 4`, checked exactly as `ε²n ≥ 16`.
    pub fn regime_holds(&self) -> Option<bool> {
        self.epsilon.as_ref().map(|e| {
            e * e * BigRational::from_integer(BigInt::from(self.n)) >= BigRational::from_integer(BigInt::from(16))
        })
    }

    pub fn contains_weight(&self, w: u32) -> bool {
        w <= self.w_star
    }

    pub fn contains(&self, x: GroupElement) -> bool {
        self.contains_weight(weight(x))
    }
}

/// The niveau set as a dense set (within capacity).
pub fn niveau_set(params: &NiveauParams) -> Result<DenseSet> {
    DenseSet::from_predicate(params.n, |x| params.contains(x))
}

/// `C(n, k)` for `k = 0..=n`.
pub fn binomial_row(n: u32) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    for k in 0..=n {
        row.push(c.clone());
        c = c * (n - k) / (k + 1);
    }
    row
}

/// `Σ_{k ≤ w*} C(n, k) / 2ⁿ`, exactly.
pub fn exact_density(n: u32, w_star: u32) -> DyadicRational {
    let total: BigUint = binomial_row(n).into_iter().take(w_star.min(n) as usize + 1).sum();
    DyadicRational::new(BigInt::from(total), n)
}

/// The standard normal distribution function.
///
/// `Φ(x) = erfc(−x/√2)/2`, with `erf` summed from its Maclaurin series for
/// `|z| < 1` and `erfc` from its continued fraction (modified Lentz) beyond.
/// Absolute error is below 1e−14 on the whole line.
pub fn normal_cdf(x: f64) -> f64 {
    let z = -x / std::f64::consts::SQRT_2;
    if z.abs() < 1.0 {
        0.5 * (1.0 - erf_series(z))
    } else if z > 0.0 {
        0.5 * erfc_continued_fraction(z)
    } else {
        1.0 - 0.5 * erfc_continued_fraction(-z)
    }
}

/// `erf(z) = 2/√π Σ (−1)ᵏ z^(2k+1) / (k! (2k+1))`.
fn erf_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for k in 1..200 {
        term *= -z2 / k as f64;
        let contrib = term / (2 * k + 1) as f64;
        sum += contrib;
        if contrib.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / PI.sqrt()
}

/// `erfc(z) = e^(−z²)/√π · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + …))))`, `z > 0`.
fn erfc_continued_fraction(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for k in 1..5000 {
        let a = k as f64 / 2.0;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    (-z * z).exp() / (PI.sqrt() * f)
}

/// `Φ(−η√(2π)) − 3.2/√n`.
pub fn berry_esseen_lower(n: u32, eta: f64) -> f64 {
    normal_cdf(-eta * (2.0 * PI).sqrt()) - BERRY_ESSEEN_CONSTANT / f64::from(n).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityBounds {
    pub params: NiveauParams,
    pub exact: DyadicRational,
    pub exact_approx: f64,
    pub berry_esseen_lower: f64,
    /// `1/2 − η − 3.2/√n`.
    pub simplified_lower: f64,
    #[serde(with = "ratio_string")]
    pub target: BigRational,
    pub regime_ok: bool,
    /// Exact density strictly above `1/2 − ε`.
    pub holds: bool,
}

pub fn density_bounds_check(params: &NiveauParams) -> Result<DensityBounds> {
    let (Some(epsilon), Some(eta)) = (&params.epsilon, &params.eta) else {
        return Err(Error::Precondition(
            "density bounds need epsilon-derived parameters".into(),
        ));
    };
    let exact = exact_density(params.n, params.w_star);
    let target = BigRational::new(BigInt::one(), BigInt::from(2)) - epsilon;
    let eta_f = to_f64(eta);
    Ok(DensityBounds {
        params: params.clone(),
        exact_approx: exact.to_f64(),
        berry_esseen_lower: berry_esseen_lower(params.n, eta_f),
        simplified_lower: 0.5 - eta_f - BERRY_ESSEEN_CONSTANT / f64::from(params.n).sqrt(),
        holds: exact.to_rational() > target,
        regime_ok: params.regime_holds().unwrap_or(false),
        exact,
        target,
    })
}

/// Whether `x` has at least `n − 2w*` zero coordinates.
pub fn sumset_weight_bound_check(params: &NiveauParams, x: GroupElement) -> bool {
    params.n - weight(x).min(params.n) >= params.min_sumset_zeros()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessOutcome {
    /// `vector ∈ V` and has too few zeros to lie in `A + A`.
    NonMember { vector: GroupElement, zeros: u32 },
    /// The low-zero vector meets the zero bound exactly; nothing is claimed.
    Inconclusive { vector: GroupElement, zeros: u32 },
}

/// Tries to certify `V ⊄ A + A` with a low-zero vector of `V`.
pub fn codim_witness(params: &NiveauParams, v: &Subspace) -> Result<WitnessOutcome> {
    if v.n() != params.n {
        return Err(Error::DimensionMismatch {
            left: v.n(),
            right: params.n,
        });
    }
    if v.codim() > params.d {
        return Err(Error::Precondition(format!(
            "codimension {} exceeds d = {}",
            v.codim(),
            params.d
        )));
    }
    Ok(low_zero_outcome(params, v.low_zero_vector()?))
}

/// Classifies a vector of `V` by its number of zeros.
pub fn low_zero_outcome(params: &NiveauParams, vector: GroupElement) -> WitnessOutcome {
    let zeros = params.n - weight(vector);
    if zeros < params.min_sumset_zeros() {
        WitnessOutcome::NonMember { vector, zeros }
    } else {
        WitnessOutcome::Inconclusive { vector, zeros }
    }
}
