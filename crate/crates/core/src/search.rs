//! Exhaustive search for subspaces inside a set.
//!
//! Depth-first basis extension: a subspace `U ⊆ T` is extended by `v` only
//! if `v` exceeds every vector chosen so far and is the minimum of its coset
//! `v + U`. Each subspace is then reached exactly once, through its greedy
//! basis (`v₁ = min V∖{0}`, `v₂ = min V∖span(v₁)`, ...), and candidates are
//! visited in ascending order.
//!
//! Along the way we keep `good(U) = {x : x + U ⊆ T}`, which extends as
//! `good(U + v) = good(U) ∩ (good(U) + v)`. Every new coset of `U` in an
//! extension has its minimum in the candidate list, so an extension by `t`
//! dimensions needs at least `2ᵗ − 1` candidates; that is the pruning bound.
//!
//! Intended for desk scale (n ≤ 14).

use crate::error::{Error, Result};
use crate::set::{or_translate_into, DenseSet};
use crate::subspace::Subspace;

#[inline]
fn top_bit(v: u32) -> u32 {
    31 - v.leading_zeros()
}

/// Largest `t` with `2ᵗ − 1 ≤ count`.
#[inline]
fn dims_from(count: usize) -> u32 {
    (count as u64 + 1).ilog2()
}

struct Dfs {
    goal: Goal,
    best: Vec<u32>,
    path: Vec<u32>,
    done: bool,
}

#[derive(Clone, Copy)]
enum Goal {
    Maximum,
    Dimension(u32),
}

impl Dfs {
    fn visit(&mut self, good: &[u64], cands: &[u32]) {
        let k = self.path.len() as u32;
        if k > self.best.len() as u32 {
            self.best = self.path.clone();
        }
        if let Goal::Dimension(d) = self.goal {
            if k >= d {
                self.done = true;
                return;
            }
        }
        for (j, &v) in cands.iter().enumerate() {
            let reachable = k + 1 + dims_from(cands.len() - j - 1);
            let needed = match self.goal {
                Goal::Maximum => self.best.len() as u32 + 1,
                Goal::Dimension(d) => d,
            };
            if reachable < needed {
                break;
            }
            let mut next_good = vec![0u64; good.len()];
            or_translate_into(&mut next_good, good, v);
            for (w, &g) in next_good.iter_mut().zip(good) {
                *w &= g;
            }
            let bit = top_bit(v);
            let next: Vec<u32> = cands[j + 1..]
                .iter()
                .copied()
                .filter(|&x| x >> bit & 1 == 0 && next_good[(x >> 6) as usize] >> (x & 63) & 1 == 1)
                .collect();
            self.path.push(v);
            self.visit(&next_good, &next);
            self.path.pop();
            if self.done {
                return;
            }
        }
    }
}

fn run(t: &DenseSet, goal: Goal) -> Result<Option<Subspace>> {
    if !t.contains(0) {
        return Err(Error::ZeroVector("not in the target set"));
    }
    let cands: Vec<u32> = t.iter().skip(1).collect();
    let mut dfs = Dfs {
        goal,
        best: Vec::new(),
        path: Vec::new(),
        done: false,
    };
    dfs.visit(t.words(), &cands);
    match goal {
        Goal::Dimension(d) if (dfs.best.len() as u32) < d => Ok(None),
        Goal::Dimension(d) => Ok(Some(Subspace::span(t.n(), &dfs.best[..d as usize])?)),
        Goal::Maximum => Ok(Some(Subspace::span(t.n(), &dfs.best)?)),
    }
}

/// A subspace of maximum dimension contained in `t`.
///
/// Among all maximum-dimension subspaces, returns the one whose greedy basis
/// is lexicographically smallest. Requires `0 ∈ t`.
pub fn max_subspace_in(t: &DenseSet) -> Result<Subspace> {
    run(t, Goal::Maximum).map(|v| v.expect("maximum search always yields a subspace"))
}

/// The first subspace of dimension `d` inside `t` in search order, if any.
pub fn subspace_of_dim_in(t: &DenseSet, d: u32) -> Result<Option<Subspace>> {
    if d > t.n() {
        return Ok(None);
    }
    run(t, Goal::Dimension(d))
}

/// `2^(n+1−d) − 1`: the least size of a set of nonzero vectors meeting
/// every `d`-dimensional subspace of F₂ⁿ.
pub fn metsch_bound(n: u32, d: u32) -> Result<u64> {
    if d > n || n >= 63 {
        return Err(Error::Precondition(format!("need d <= n < 63, got n = {n}, d = {d}")));
    }
    Ok((1u64 << (n + 1 - d)) - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetschOutcome {
    /// A `d`-dimensional subspace disjoint from `S`.
    Witness(Subspace),
    /// `S` meets every `d`-dimensional subspace.
    Blocking,
}

/// Searches for a `d`-dimensional subspace avoiding `S ⊆ G ∖ {0}`.
pub fn metsch_witness(s: &DenseSet, d: u32) -> Result<MetschOutcome> {
    if s.contains(0) {
        return Err(Error::ZeroVector("in the avoided set"));
    }
    Ok(match subspace_of_dim_in(&s.complement(), d)? {
        Some(v) => MetschOutcome::Witness(v),
        None => MetschOutcome::Blocking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{sample_exact, SplitMix64};
    use std::collections::HashSet;

    /// Every subspace of F₂ⁿ as a bitmask of its elements (n ≤ 5).
    fn all_subspaces(n: u32) -> Vec<(u32, u64)> {
        let mut seen = HashSet::new();
        let mut frontier = vec![(0u32, 1u64)];
        seen.insert(1u64);
        let mut out = vec![(0, 1)];
        while let Some((dim, mask)) = frontier.pop() {
            for v in 1..(1u32 << n) {
                if mask >> v & 1 == 1 {
                    continue;
                }
                let mut next = mask;
                for x in 0..(1u32 << n) {
                    if mask >> x & 1 == 1 {
                        next |= 1 << (x ^ v);
                    }
                }
                if seen.insert(next) {
                    out.push((dim + 1, next));
                    frontier.push((dim + 1, next));
                }
            }
        }
        out
    }

    fn brute_max_dim(t: &DenseSet, subspaces: &[(u32, u64)]) -> u32 {
        let tmask: u64 = t.iter().fold(0, |m, x| m | 1 << x);
        subspaces
            .iter()
            .filter(|(_, m)| m & !tmask == 0)
            .map(|&(d, _)| d)
            .max()
            .unwrap()
    }

    #[test]
    fn subspace_counts() {
        // Gaussian binomial sums for n = 4: 1 + 15 + 35 + 15 + 1
        assert_eq!(all_subspaces(4).len(), 67);
    }

    #[test]
    fn examples() {
        assert_eq!(max_subspace_in(&DenseSet::full(6).unwrap()).unwrap().dim(), 6);
        let h = Subspace::span(7, &[0x11, 0x06, 0x60]).unwrap();
        assert_eq!(max_subspace_in(&h.as_set()).unwrap(), h);
        let t = DenseSet::full(4)
            .unwrap()
            .difference(&DenseSet::from_elements(4, [1]).unwrap())
            .unwrap();
        let v = max_subspace_in(&t).unwrap();
        assert_eq!(v.dim(), 3);
        assert!(!v.contains(1));
        assert!(matches!(
            max_subspace_in(&DenseSet::from_elements(3, [1]).unwrap()),
            Err(Error::ZeroVector(_))
        ));
    }

    #[test]
    fn agrees_with_enumeration() {
        let mut rng = SplitMix64::new(61);
        for n in 1..=5 {
            let subs = all_subspaces(n);
            for _ in 0..40 {
                let t = DenseSet::from_predicate(n, |x| x == 0 || rng.below(4) != 0).unwrap();
                let v = max_subspace_in(&t).unwrap();
                assert!(v.as_set().is_subset(&t).unwrap());
                assert_eq!(v.dim(), brute_max_dim(&t, &subs), "n = {n}");
            }
        }
    }

    #[test]
    fn lexicographically_first_maximum() {
        // {0,1,2,3} and {0,4,8,12} both fit; ascending search must report the first
        let t = DenseSet::from_elements(4, [0, 1, 2, 3, 4, 8, 12]).unwrap();
        assert_eq!(max_subspace_in(&t).unwrap().elements(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn metsch_examples() {
        assert_eq!(metsch_bound(8, 1).unwrap(), 255);
        assert_eq!(metsch_bound(8, 2).unwrap(), 127);
        assert!(metsch_bound(3, 4).is_err());
        let empty = DenseSet::empty(6).unwrap();
        match metsch_witness(&empty, 3).unwrap() {
            MetschOutcome::Witness(v) => assert_eq!(v.dim(), 3),
            MetschOutcome::Blocking => panic!("empty set blocks nothing"),
        }
        // all nonzero vectors meet every line
        let nonzero = DenseSet::from_predicate(5, |x| x != 0).unwrap();
        assert_eq!(metsch_witness(&nonzero, 1).unwrap(), MetschOutcome::Blocking);
        assert!(metsch_witness(&DenseSet::full(3).unwrap(), 1).is_err());
        // G itself is the only 5-dimensional subspace
        let off = DenseSet::from_predicate(5, |x| x & 1 == 1).unwrap();
        assert_eq!(metsch_witness(&off, 5).unwrap(), MetschOutcome::Blocking);
    }

    #[test]
    fn metsch_contrapositive_random() {
        let mut rng = SplitMix64::new(67);
        for _ in 0..20 {
            let s = sample_exact(8, 100, &mut rng).unwrap();
            let s = s.difference(&DenseSet::from_elements(8, [0]).unwrap()).unwrap();
            match metsch_witness(&s, 2).unwrap() {
                MetschOutcome::Witness(v) => {
                    assert_eq!(v.dim(), 2);
                    assert!(v.elements().iter().all(|&x| !s.contains(x)));
                }
                MetschOutcome::Blocking => panic!("|S| < 127 cannot block"),
            }
        }
    }
}
