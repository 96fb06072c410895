//! Exact Walsh–Hadamard analysis on F₂ᵐ.
//!
//! Spectra hold the unnormalized integers `raw[γ] = Σ_x f(x)(−1)^⟨γ,x⟩`; the
//! normalized coefficient `f̂(γ) = E_x f(x)(−1)^⟨γ,x⟩` is `raw[γ] / 2ᵐ` and is
//! only materialized as a [`DyadicRational`] at comparison boundaries.

use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::set::{check_dim, DenseSet, GroupElement};

/// A character `x ↦ (−1)^parity(mask & x)` of F₂ⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Character(pub u32);

impl Character {
    pub fn mask(self) -> u32 {
        self.0
    }

    /// `true` when the character takes the value −1 at `x`.
    #[inline]
    pub fn is_odd_at(self, x: GroupElement) -> bool {
        (self.0 & x).count_ones() & 1 == 1
    }

    #[inline]
    pub fn pairing(self, x: GroupElement) -> i8 {
        if self.is_odd_at(x) {
            -1
        } else {
            1
        }
    }
}

/// In-place unnormalized transform (butterfly). `data.len()` must be a power of two.
pub fn wht_in_place<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    assert!(len.is_power_of_two(), "transform length must be a power of two");
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    m: u32,
    raw: Vec<i64>,
}

impl Spectrum {
    /// Transform of an integer-valued function given by its table of 2ᵐ values.
    pub fn of_values(values: &[i64]) -> Result<Self> {
        if !values.len().is_power_of_two() {
            return Err(Error::Precondition("table length must be a power of two".into()));
        }
        let m = values.len().trailing_zeros();
        check_dim(m)?;
        let mut raw = values.to_vec();
        wht_in_place(&mut raw);
        Ok(Self { m, raw })
    }

    /// Transform of the indicator function of `set`.
    pub fn of_set(set: &DenseSet) -> Self {
        let m = set.n();
        let mut raw = vec![0i64; 1usize << m];
        for x in set.iter() {
            raw[x as usize] = 1;
        }
        wht_in_place(&mut raw);
        Self { m, raw }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn raw(&self) -> &[i64] {
        &self.raw
    }

    pub fn get(&self, gamma: Character) -> i64 {
        self.raw[gamma.0 as usize]
    }

    /// `f̂(γ) = raw[γ] / 2ᵐ`.
    pub fn normalized(&self, gamma: Character) -> DyadicRational {
        DyadicRational::new(self.get(gamma), self.m)
    }

    /// Applies the same butterfly again; the result is `2ᵐ · f`.
    pub fn inverse_unnormalized(&self) -> Vec<i64> {
        let mut v = self.raw.clone();
        wht_in_place(&mut v);
        v
    }

    /// `Σ_γ raw[γ]²`, in `i128` so large spectra do not overflow.
    pub fn energy(&self) -> i128 {
        self.raw.iter().map(|&r| i128::from(r) * i128::from(r)).sum()
    }

    /// The most negative coefficient, smallest mask on ties; `None` if no
    /// coefficient is negative.
    pub fn most_negative(&self) -> Option<(Character, i64)> {
        let mut best: Option<(usize, i64)> = None;
        for (g, &r) in self.raw.iter().enumerate() {
            if r < 0 && best.is_none_or(|(_, b)| r < b) {
                best = Some((g, r));
            }
        }
        best.map(|(g, r)| (Character(g as u32), r))
    }
}

/// `f ∗ g(x) = E_y f(y) g(x + y)` for indicators, stored as integer counts
/// `c(x) = |{y : y ∈ A, x + y ∈ B}|` so that `f ∗ g(x) = c(x) / 2ᵐ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convolution {
    m: u32,
    counts: Vec<u64>,
}

impl Convolution {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn value(&self, x: GroupElement) -> DyadicRational {
        DyadicRational::from_count(self.counts[x as usize], self.m)
    }

    pub fn support(&self) -> DenseSet {
        let words = self
            .counts
            .chunks(64)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u64, |w, (i, &c)| if c > 0 { w | 1 << i } else { w })
            })
            .collect();
        DenseSet::from_words(self.m, words)
    }
}

/// Convolution via the pointwise product of spectra.
pub fn convolve(a: &DenseSet, b: &DenseSet) -> Result<Convolution> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let m = a.n();
    let fa = Spectrum::of_set(a);
    let fb = Spectrum::of_set(b);
    let mut prod: Vec<i128> = fa
        .raw
        .iter()
        .zip(&fb.raw)
        .map(|(&x, &y)| i128::from(x) * i128::from(y))
        .collect();
    wht_in_place(&mut prod);
    let counts = prod
        .into_iter()
        .map(|v| {
            debug_assert!(v >= 0 && v % (1i128 << m) == 0);
            (v >> m) as u64
        })
        .collect();
    Ok(Convolution { m, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::set::weight;
    use proptest::prelude::*;

    fn direct_counts(a: &DenseSet, b: &DenseSet) -> Vec<u64> {
        let size = 1usize << a.n();
        (0..size)
            .map(|x| a.iter().filter(|&y| b.contains(x as u32 ^ y)).count() as u64)
            .collect()
    }

    fn naive_wht(values: &[i64]) -> Vec<i64> {
        (0..values.len())
            .map(|g| {
                values
                    .iter()
                    .enumerate()
                    .map(|(x, &v)| v * i64::from(Character(g as u32).pairing(x as u32)))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn character_laws() {
        for mask in 0..32 {
            let c = Character(mask);
            assert_eq!(c.pairing(0), 1);
            for x in 0..32 {
                for y in 0..32 {
                    assert_eq!(c.pairing(x) * c.pairing(y), c.pairing(x ^ y));
                }
            }
        }
    }

    #[test]
    fn delta_spectrum_is_flat() {
        let s = Spectrum::of_set(&DenseSet::from_elements(4, [0]).unwrap());
        assert!(s.raw().iter().all(|&r| r == 1));
    }

    #[test]
    fn hyperplane_spectrum() {
        let m = 6;
        let g0 = Character(0b10_1101);
        let h = DenseSet::from_predicate(m, |x| !g0.is_odd_at(x)).unwrap();
        let s = Spectrum::of_set(&h);
        for g in 0..(1u32 << m) {
            let expect = if g == 0 || g == g0.0 { 1 << (m - 1) } else { 0 };
            assert_eq!(s.get(Character(g)), expect);
        }
    }

    #[test]
    fn butterfly_matches_definition() {
        let mut rng = SplitMix64::new(17);
        let values: Vec<i64> = (0..64).map(|_| rng.below(21) as i64 - 10).collect();
        assert_eq!(Spectrum::of_values(&values).unwrap().raw(), &naive_wht(&values)[..]);
        assert!(Spectrum::of_values(&[1, 2, 3]).is_err());
    }

    #[test]
    fn convolution_examples() {
        let m = 5;
        let delta = DenseSet::from_elements(m, [0]).unwrap();
        let c = convolve(&delta, &delta).unwrap();
        assert_eq!(c.value(0), DyadicRational::new(1, m));
        let h = DenseSet::from_predicate(m, |x| weight(x).is_multiple_of(2)).unwrap();
        let c = convolve(&h, &h).unwrap();
        for x in 0..(1u32 << m) {
            let expect = if h.contains(x) {
                DyadicRational::new(1, 1)
            } else {
                DyadicRational::zero()
            };
            assert_eq!(c.value(x), expect);
        }
        let other = DenseSet::empty(4).unwrap();
        assert!(convolve(&h, &other).is_err());
    }

    #[test]
    fn convolution_matches_double_loop() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..10 {
            let a = DenseSet::from_predicate(8, |_| rng.below(3) == 0).unwrap();
            let b = DenseSet::from_predicate(8, |_| rng.below(5) == 0).unwrap();
            assert_eq!(convolve(&a, &b).unwrap().counts(), &direct_counts(&a, &b)[..]);
        }
    }

    #[test]
    fn convolution_theorem() {
        // spectrum of f∗g (E-normalized) = product of normalized spectra
        let mut rng = SplitMix64::new(29);
        let m = 6;
        let a = DenseSet::from_predicate(m, |_| rng.below(2) == 0).unwrap();
        let b = DenseSet::from_predicate(m, |_| rng.below(3) == 0).unwrap();
        let conv = convolve(&a, &b).unwrap();
        let counts: Vec<i64> = conv.counts().iter().map(|&c| c as i64).collect();
        let sc = Spectrum::of_values(&counts).unwrap();
        let (sa, sb) = (Spectrum::of_set(&a), Spectrum::of_set(&b));
        for g in 0..(1u32 << m) {
            let g = Character(g);
            // normalize: conv values are counts/2^m, then E over x adds another 2^m
            let lhs = DyadicRational::new(sc.get(g), 2 * m);
            assert_eq!(lhs, &sa.normalized(g) * &sb.normalized(g));
        }
    }

    #[test]
    fn most_negative_tie_breaks_low() {
        let s = Spectrum {
            m: 2,
            raw: vec![4, -2, 0, -2],
        };
        assert_eq!(s.most_negative(), Some((Character(1), -2)));
        let s = Spectrum { m: 1, raw: vec![1, 0] };
        assert_eq!(s.most_negative(), None);
    }

    proptest! {
        #[test]
        fn involution_and_parseval(m in 0u32..11, seed in any::<u64>()) {
            let mut rng = SplitMix64::new(seed);
            let values: Vec<i64> = (0..1usize << m).map(|_| rng.below(7) as i64 - 3).collect();
            let s = Spectrum::of_values(&values).unwrap();
            let back = s.inverse_unnormalized();
            prop_assert!(back.iter().zip(&values).all(|(&b, &v)| b == v << m));
            let sq: i128 = values.iter().map(|&v| i128::from(v * v)).sum();
            prop_assert_eq!(s.energy(), sq << m);
        }

        #[test]
        fn support_is_sumset(m in 0u32..10, seed in any::<u64>()) {
            let mut rng = SplitMix64::new(seed);
            let a = DenseSet::from_predicate(m, |_| rng.below(9) == 0).unwrap();
            let b = DenseSet::from_predicate(m, |_| rng.below(4) == 0).unwrap();
            prop_assert_eq!(convolve(&a, &b).unwrap().support(), a.sumset(&b).unwrap());
        }
    }
}
