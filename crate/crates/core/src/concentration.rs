//! Hamming-cube expansion and the concentration inequality
//! `P(Ham_r(A)) ≥ 1 − exp(−r²/2n) / P(A)`.

use serde::Serialize;

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::set::{or_translate_into, DenseSet};
use crate::subspace::Subspace;

/// Slack granted to the transcendental side of every inequality check.
pub const TRANSCENDENTAL_SLACK: f64 = 1e-12;

/// A basis `E = {e₁, …, eₙ}` of F₂ⁿ; `F = E ∪ {0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisSet {
    n: u32,
    vectors: Vec<u32>,
}

impl BasisSet {
    pub fn new(n: u32, vectors: Vec<u32>) -> Result<Self> {
        let rank = Subspace::span(n, &vectors)?.dim();
        if rank != n || vectors.len() != n as usize {
            return Err(Error::NotABasis { rank, n });
        }
        Ok(Self { n, vectors })
    }

    pub fn standard(n: u32) -> Self {
        Self {
            n,
            vectors: (0..n).map(|i| 1 << i).collect(),
        }
    }

    /// Uniform random ordered basis: draw vectors outside the running span.
    pub fn random(n: u32, rng: &mut SplitMix64) -> Result<Self> {
        let mut vectors = Vec::with_capacity(n as usize);
        let mut span = Subspace::zero(n)?;
        while vectors.len() < n as usize {
            let v = rng.below(1 << n) as u32;
            if !span.contains(v) {
                vectors.push(v);
                span = span.extend(&[v])?;
            }
        }
        Ok(Self { n, vectors })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vectors(&self) -> &[u32] {
        &self.vectors
    }

    /// `φ_E(x) = Σ xᵢ eᵢ`.
    pub fn embed(&self, x: u32) -> u32 {
        self.vectors
            .iter()
            .enumerate()
            .filter(|(i, _)| x >> i & 1 == 1)
            .fold(0, |acc, (_, &e)| acc ^ e)
    }

    /// Table of `φ_E` over the whole cube.
    fn table(&self) -> Vec<u32> {
        let mut t = vec![0u32; 1 << self.n];
        for x in 1..t.len() {
            let low = x.trailing_zeros();
            t[x] = t[x & (x - 1)] ^ self.vectors[low as usize];
        }
        t
    }
}

/// Repeated `B ← B ∪ ⋃ᵢ (B + gᵢ)`, stopping early once nothing changes.
fn expand(a: &DenseSet, generators: &[u32], rounds: u32) -> DenseSet {
    let mut cur = a.words().to_vec();
    for _ in 0..rounds {
        let mut next = cur.clone();
        for &g in generators {
            or_translate_into(&mut next, &cur, g);
        }
        if next == cur {
            break;
        }
        cur = next;
    }
    DenseSet::from_words(a.n(), cur)
}

/// `Ham_r(A)`: points of Qₙ within Hamming distance `r` of `A`.
pub fn ham_ball(a: &DenseSet, r: u32) -> DenseSet {
    let units: Vec<u32> = (0..a.n()).map(|i| 1 << i).collect();
    expand(a, &units, r)
}

/// `A + rF` with `F = E ∪ {0}`.
pub fn basis_expand(a: &DenseSet, basis: &BasisSet, r: u32) -> Result<DenseSet> {
    if basis.n != a.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: basis.n,
        });
    }
    Ok(expand(a, &basis.vectors, r))
}

/// `φ_E(Ham_r(φ_E⁻¹(A)))`.
pub fn transported_ball(a: &DenseSet, basis: &BasisSet, r: u32) -> Result<DenseSet> {
    if basis.n != a.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: basis.n,
        });
    }
    let phi = basis.table();
    let cube = DenseSet::from_predicate(a.n(), |x| a.contains(phi[x as usize]))?;
    let ball = ham_ball(&cube, r);
    DenseSet::from_elements(a.n(), ball.iter().map(|x| phi[x as usize]))
}

/// Whether `φ_E(Ham_r(φ_E⁻¹(A))) ⊆ A + rF`.
pub fn expansion_containment(a: &DenseSet, basis: &BasisSet, r: u32) -> Result<bool> {
    transported_ball(a, basis, r)?.is_subset(&basis_expand(a, basis, r)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationCheck {
    pub r: u32,
    /// Exact density of the expanded set.
    pub lhs: DyadicRational,
    /// `1 − exp(−r²/2n) / P(A)`.
    pub rhs: f64,
    pub holds: bool,
}

fn check(a: &DenseSet, expanded: &DenseSet, r: u32) -> Result<ConcentrationCheck> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = f64::from(a.n().max(1));
    let r_f = f64::from(r);
    let rhs = 1.0 - (-r_f * r_f / (2.0 * n)).exp() / a.density().to_f64();
    let lhs = expanded.density();
    let holds = lhs.to_f64() >= rhs - TRANSCENDENTAL_SLACK;
    Ok(ConcentrationCheck { r, lhs, rhs, holds })
}

/// The cube inequality for `Ham_r(A)`.
pub fn mcdiarmid_check(a: &DenseSet, r: u32) -> Result<ConcentrationCheck> {
    check(a, &ham_ball(a, r), r)
}

/// The same inequality for `A + rF` with an arbitrary basis.
pub fn basis_concentration_check(a: &DenseSet, basis: &BasisSet, r: u32) -> Result<ConcentrationCheck> {
    check(a, &basis_expand(a, basis, r)?, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sample_exact;

    fn brute_ball(a: &DenseSet, r: u32) -> DenseSet {
        DenseSet::from_predicate(a.n(), |x| a.iter().any(|y| (x ^ y).count_ones() <= r)).unwrap()
    }

    #[test]
    fn ball_examples() {
        let mut rng = SplitMix64::new(97);
        let a = sample_exact(8, 5, &mut rng).unwrap();
        assert_eq!(ham_ball(&a, 0), a);
        let origin = DenseSet::from_elements(8, [0]).unwrap();
        assert!(ham_ball(&origin, 8).is_full());
        assert_eq!(ham_ball(&origin, 2).card(), 37);
        for r in 0..5 {
            assert_eq!(ham_ball(&a, r), brute_ball(&a, r));
        }
    }

    #[test]
    fn ball_composition_and_monotonicity() {
        let mut rng = SplitMix64::new(101);
        for _ in 0..10 {
            let a = sample_exact(10, 1 + rng.below(20), &mut rng).unwrap();
            let (r, s) = (rng.below(4) as u32, rng.below(4) as u32);
            let b = ham_ball(&a, r);
            assert!(a.is_subset(&b).unwrap());
            assert!(b.is_subset(&ham_ball(&a, r + 1)).unwrap());
            assert_eq!(ham_ball(&a, r + s), ham_ball(&b, s));
        }
    }

    #[test]
    fn basis_validation() {
        assert!(BasisSet::new(3, vec![1, 2, 3]).is_err());
        assert!(BasisSet::new(3, vec![1, 2]).is_err());
        assert!(BasisSet::new(3, vec![1, 3, 7]).is_ok());
        let mut rng = SplitMix64::new(103);
        let b = BasisSet::random(9, &mut rng).unwrap();
        assert_eq!(Subspace::span(9, b.vectors()).unwrap().dim(), 9);
    }

    #[test]
    fn standard_basis_expansion_is_the_ball() {
        let mut rng = SplitMix64::new(107);
        let a = sample_exact(9, 7, &mut rng).unwrap();
        let e = BasisSet::standard(9);
        for r in 0..4 {
            assert_eq!(basis_expand(&a, &e, r).unwrap(), ham_ball(&a, r));
            assert_eq!(transported_ball(&a, &e, r).unwrap(), ham_ball(&a, r));
        }
    }

    #[test]
    fn random_basis_containment() {
        let mut rng = SplitMix64::new(109);
        for _ in 0..10 {
            let a = sample_exact(10, 1 + rng.below(30), &mut rng).unwrap();
            let e = BasisSet::random(10, &mut rng).unwrap();
            assert!(expansion_containment(&a, &e, 3).unwrap());
            assert_eq!(basis_expand(&a, &e, 0).unwrap(), a);
            // linearity of φ_E makes the two sides coincide
            assert_eq!(transported_ball(&a, &e, 3).unwrap(), basis_expand(&a, &e, 3).unwrap());
        }
    }

    #[test]
    fn concentration_examples() {
        let mut rng = SplitMix64::new(113);
        let a = sample_exact(10, 3, &mut rng).unwrap();
        let c = mcdiarmid_check(&a, 10).unwrap();
        assert_eq!(c.lhs, DyadicRational::one());
        assert!(c.holds);
        let c = mcdiarmid_check(&a, 0).unwrap();
        assert!(c.rhs <= 0.0 && c.holds);
        assert!(mcdiarmid_check(&DenseSet::empty(4).unwrap(), 1).is_err());
        for _ in 0..200 {
            let a = sample_exact(12, 1 + rng.below(400), &mut rng).unwrap();
            let r = rng.below(13) as u32;
            assert!(mcdiarmid_check(&a, r).unwrap().holds);
            let e = BasisSet::random(12, &mut rng).unwrap();
            assert!(basis_concentration_check(&a, &e, r).unwrap().holds);
        }
    }
}
