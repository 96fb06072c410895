//! Subspaces of F₂ⁿ in canonical form, cosets, and coordinate maps.
//!
//! A subspace is stored as its reduced row-echelon basis: the pivot of a row
//! is its highest set bit, pivots strictly decrease down the list, and every
//! pivot column is zero in all other rows. The annihilator is kept in the same
//! form. Both are unique, so structural equality is set equality.
//!
//! Coordinates: `φ(y) = Σ yᵢ bᵢ` where `b₀` is the row with the *smallest*
//! pivot. With a reduced basis this map is strictly increasing in `y`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fourier::Character;
use crate::set::{check_dim, DenseSet, GroupElement};

#[inline]
fn pivot(row: u32) -> u32 {
    31 - row.leading_zeros()
}

/// Reduced row-echelon form of the span of `vectors`, pivots decreasing.
pub(crate) fn rref(vectors: impl IntoIterator<Item = u32>) -> Vec<u32> {
    let mut by_pivot = [0u32; 32];
    for v in vectors {
        let v = reduce_with(v, &by_pivot);
        if v == 0 {
            continue;
        }
        let p = pivot(v);
        for row in by_pivot.iter_mut() {
            if *row >> p & 1 == 1 {
                *row ^= v;
            }
        }
        by_pivot[p as usize] = v;
    }
    by_pivot.iter().rev().copied().filter(|&r| r != 0).collect()
}

fn reduce_with(mut v: u32, by_pivot: &[u32; 32]) -> u32 {
    for p in (0..32).rev() {
        if v >> p & 1 == 1 && by_pivot[p] != 0 {
            v ^= by_pivot[p];
        }
    }
    v
}

/// Canonical basis of `{x : ⟨r, x⟩ = 0 for every row r}` given rows in
/// reduced echelon form.
fn kernel(n: u32, rows: &[u32]) -> Vec<u32> {
    let pivots: u32 = rows.iter().fold(0, |acc, &r| acc | 1 << pivot(r));
    let mut out = Vec::new();
    for f in 0..n {
        if pivots >> f & 1 == 1 {
            continue;
        }
        let mut v = 1u32 << f;
        for &r in rows {
            if r >> f & 1 == 1 {
                v |= 1 << pivot(r);
            }
        }
        out.push(v);
    }
    rref(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: u32,
    basis: Vec<u32>,
    annihilator: Vec<u32>,
}

impl Subspace {
    fn from_rref(n: u32, basis: Vec<u32>) -> Self {
        let annihilator = kernel(n, &basis);
        Self { n, basis, annihilator }
    }

    fn check_masks(n: u32, masks: &[u32]) -> Result<()> {
        check_dim(n)?;
        match masks.iter().find(|&&v| u64::from(v) >> n != 0) {
            Some(&v) => Err(Error::OutOfRange { value: u64::from(v), n }),
            None => Ok(()),
        }
    }

    /// The span of `vectors`.
    pub fn span(n: u32, vectors: &[u32]) -> Result<Self> {
        Self::check_masks(n, vectors)?;
        Ok(Self::from_rref(n, rref(vectors.iter().copied())))
    }

    /// `{x : γ(x) = 1 for all γ}`; codimension is the rank of the characters.
    pub fn perp(n: u32, gammas: &[Character]) -> Result<Self> {
        let masks: Vec<u32> = gammas.iter().map(|g| g.mask()).collect();
        Self::check_masks(n, &masks)?;
        let annihilator = rref(masks);
        let basis = kernel(n, &annihilator);
        Ok(Self { n, basis, annihilator })
    }

    pub fn full(n: u32) -> Result<Self> {
        Self::span(n, &(0..n).map(|i| 1u32 << i).collect::<Vec<_>>())
    }

    pub fn zero(n: u32) -> Result<Self> {
        Self::span(n, &[])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn codim(&self) -> u32 {
        self.n - self.dim()
    }

    /// Canonical basis, pivots decreasing.
    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// Canonical basis of the annihilator, as character masks.
    pub fn annihilator(&self) -> &[u32] {
        &self.annihilator
    }

    pub fn annihilator_characters(&self) -> Vec<Character> {
        self.annihilator.iter().map(|&m| Character(m)).collect()
    }

    /// Membership through the annihilator.
    #[inline]
    pub fn contains(&self, x: GroupElement) -> bool {
        u64::from(x) >> self.n == 0 && self.annihilator.iter().all(|&g| (g & x).count_ones() & 1 == 0)
    }

    /// Membership through the basis (reduction to zero).
    pub fn span_contains(&self, x: GroupElement) -> bool {
        u64::from(x) >> self.n == 0 && self.reduce(x) == 0
    }

    /// The minimum element of the coset `x + V`.
    #[inline]
    pub fn reduce(&self, mut x: GroupElement) -> GroupElement {
        for &b in &self.basis {
            if x >> pivot(b) & 1 == 1 {
                x ^= b;
            }
        }
        x
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.n == other.n && self.basis.iter().all(|&b| other.contains(b))
    }

    pub fn intersect_perp(&self, gamma: Character) -> Result<Subspace> {
        let mut chars = self.annihilator_characters();
        chars.push(gamma);
        Subspace::perp(self.n, &chars)
    }

    /// The sum `V + span(extra)`.
    pub fn extend(&self, extra: &[u32]) -> Result<Subspace> {
        let mut v = self.basis.clone();
        v.extend_from_slice(extra);
        Subspace::span(self.n, &v)
    }

    /// Basis vector for coordinate `i` (`b₀` has the smallest pivot).
    fn coordinate_vector(&self, i: u32) -> u32 {
        self.basis[self.basis.len() - 1 - i as usize]
    }

    /// `φ(y) = Σ yᵢ bᵢ`.
    pub fn embed(&self, y: u32) -> GroupElement {
        let mut x = 0;
        let mut bits = y;
        while bits != 0 {
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            x ^= self.coordinate_vector(i);
        }
        x
    }

    /// Inverse of [`Subspace::embed`] on `V`; `None` when `x ∉ V`.
    pub fn coordinates(&self, x: GroupElement) -> Option<u32> {
        if !self.span_contains(x) {
            return None;
        }
        let m = self.dim();
        let mut y = 0;
        for i in 0..m {
            if x >> pivot(self.coordinate_vector(i)) & 1 == 1 {
                y |= 1 << i;
            }
        }
        Some(y)
    }

    /// Calls `f(y, φ(y))` for every `y ∈ F₂ᵐ`, in Gray-code order.
    pub fn for_each_embedded(&self, mut f: impl FnMut(u32, GroupElement)) {
        let m = self.dim();
        let mut x = 0;
        f(0, 0);
        for step in 1..(1u64 << m) {
            let i = step.trailing_zeros();
            x ^= self.coordinate_vector(i);
            let gray = (step ^ (step >> 1)) as u32;
            f(gray, x);
        }
    }

    /// All elements, ascending.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..(1u32 << self.dim())).map(|y| self.embed(y)).collect()
    }

    pub fn as_set(&self) -> DenseSet {
        let mut words = vec![0u64; set_words(self.n)];
        self.for_each_embedded(|_, x| words[(x >> 6) as usize] |= 1 << (x & 63));
        DenseSet::from_words(self.n, words)
    }

    /// `{y ∈ F₂ᵐ : φ(y) ∈ T}`.
    pub fn pullback(&self, t: &DenseSet) -> Result<DenseSet> {
        if t.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: t.n(),
                right: self.n,
            });
        }
        self.pullback_shifted(t, 0)
    }

    fn pullback_shifted(&self, t: &DenseSet, shift: GroupElement) -> Result<DenseSet> {
        let mut words = vec![0u64; set_words(self.dim())];
        self.for_each_embedded(|y, x| {
            if t.contains(x ^ shift) {
                words[(y >> 6) as usize] |= 1 << (y & 63);
            }
        });
        Ok(DenseSet::from_words(self.dim(), words))
    }

    /// `φ(D) ⊆ V` for a set `D` on F₂ᵐ.
    pub fn pushforward(&self, d: &DenseSet) -> Result<DenseSet> {
        if d.n() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: d.n(),
                right: self.dim(),
            });
        }
        let mut words = vec![0u64; set_words(self.n)];
        self.for_each_embedded(|y, x| {
            if d.contains(y) {
                words[(x >> 6) as usize] |= 1 << (x & 63);
            }
        });
        Ok(DenseSet::from_words(self.n, words))
    }

    /// Image of a subspace of F₂ᵐ under `φ`.
    pub fn push_subspace(&self, inner: &Subspace) -> Result<Subspace> {
        if inner.n != self.dim() {
            return Err(Error::DimensionMismatch {
                left: inner.n,
                right: self.dim(),
            });
        }
        let image: Vec<u32> = inner.basis.iter().map(|&b| self.embed(b)).collect();
        Subspace::span(self.n, &image)
    }

    /// Lift of a character of F₂ᵐ to F₂ⁿ agreeing with it on `V`.
    ///
    /// Uses the pivot coordinates, so the lift is supported on pivot columns.
    pub fn lift_character(&self, local: Character) -> Character {
        let mut mask = 0;
        for i in 0..self.dim() {
            if local.mask() >> i & 1 == 1 {
                mask |= 1 << pivot(self.coordinate_vector(i));
            }
        }
        Character(mask)
    }

    pub fn coset_of(&self, x: GroupElement) -> CosetIndex<'_> {
        CosetIndex {
            subspace: self,
            rep: self.reduce(x),
        }
    }

    /// The 2^(n−m) cosets, ascending by representative.
    pub fn cosets(&self) -> impl Iterator<Item = CosetIndex<'_>> + '_ {
        let free: Vec<u32> = (0..self.n)
            .filter(|&b| self.basis.iter().all(|&r| pivot(r) != b))
            .collect();
        (0..(1u64 << free.len())).map(move |t| {
            let rep = free
                .iter()
                .enumerate()
                .filter(|(j, _)| t >> j & 1 == 1)
                .fold(0u32, |acc, (_, &b)| acc | 1 << b);
            CosetIndex { subspace: self, rep }
        })
    }

    /// `A_W = (A ∩ W) − x_W` pulled back to F₂ᵐ.
    pub fn coset_restrict(&self, a: &DenseSet, w: &CosetIndex<'_>) -> Result<DenseSet> {
        if w.subspace != self || self.reduce(w.rep) != w.rep {
            return Err(Error::NotACoset { rep: w.rep });
        }
        if a.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: a.n(),
                right: self.n,
            });
        }
        self.pullback_shifted(a, w.rep)
    }

    /// A vector of `V` with at most `codim(V)` zero coordinates.
    ///
    /// Chooses `dim(V)` independent coordinate columns of the basis matrix
    /// (greedily, lowest coordinate first) and solves for a combination that
    /// is 1 at each of them.
    pub fn low_zero_vector(&self) -> Result<GroupElement> {
        let m = self.dim() as usize;
        if m == 0 {
            return Err(Error::NoWitness);
        }
        let mut chosen_cols: Vec<u32> = Vec::with_capacity(m);
        let mut echelon = [0u32; 32];
        for j in 0..self.n {
            let col = self
                .basis
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &b)| acc | ((b >> j & 1) << i));
            let r = reduce_with(col, &echelon);
            if r != 0 {
                let p = pivot(r);
                for row in echelon.iter_mut() {
                    if *row >> p & 1 == 1 {
                        *row ^= r;
                    }
                }
                echelon[p as usize] = r;
                chosen_cols.push(col);
                if chosen_cols.len() == m {
                    break;
                }
            }
        }
        let lambda = solve_all_ones(&chosen_cols, m as u32)
            .ok_or_else(|| Error::Invariant("independent columns gave a singular system".into()))?;
        Ok(self
            .basis
            .iter()
            .enumerate()
            .filter(|(i, _)| lambda >> i & 1 == 1)
            .fold(0, |acc, (_, &b)| acc ^ b))
    }

    pub fn to_document(&self) -> SubspaceDocument {
        SubspaceDocument {
            n: self.n,
            basis: self.basis.iter().map(|b| format!("{b:#x}")).collect(),
            annihilator: self.annihilator.iter().map(|b| format!("{b:#x}")).collect(),
        }
    }

    pub fn from_document(doc: &SubspaceDocument) -> Result<Self> {
        let parse = |s: &String| {
            u32::from_str_radix(s.trim_start_matches("0x"), 16).map_err(|_| Error::Parse(format!("bad hex mask {s:?}")))
        };
        let basis = doc.basis.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let annihilator = doc.annihilator.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let v = Self::span(doc.n, &basis)?;
        if v.basis != basis || v.annihilator != annihilator {
            return Err(Error::Parse("subspace document is not in canonical form".into()));
        }
        Ok(v)
    }
}

fn set_words(n: u32) -> usize {
    if n >= 6 {
        1 << (n - 6)
    } else {
        1
    }
}

/// Solves `⟨rowⱼ, λ⟩ = 1` for all rows over GF(2) (`vars` unknowns).
fn solve_all_ones(rows: &[u32], vars: u32) -> Option<u32> {
    // augmented bit sits just above the variables
    let aug = 1u32 << vars;
    let mut eq: Vec<u64> = rows.iter().map(|&r| u64::from(r) | u64::from(aug)).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..vars {
        let Some(sel) = (row..eq.len()).find(|&i| eq[i] >> col & 1 == 1) else {
            continue;
        };
        eq.swap(row, sel);
        for i in 0..eq.len() {
            if i != row && eq[i] >> col & 1 == 1 {
                eq[i] ^= eq[row];
            }
        }
        pivots.push(col);
        row += 1;
    }
    if eq[row..].iter().any(|&e| e != 0) {
        return None;
    }
    let mut lambda = 0;
    for (i, &col) in pivots.iter().enumerate() {
        if eq[i] & u64::from(aug) != 0 {
            lambda |= 1 << col;
        }
    }
    Some(lambda)
}

/// A coset `x_W + V`, identified by its minimum element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosetIndex<'a> {
    pub subspace: &'a Subspace,
    pub rep: GroupElement,
}

impl CosetIndex<'_> {
    pub fn contains(&self, x: GroupElement) -> bool {
        self.subspace.reduce(x) == self.rep
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceDocument {
    pub n: u32,
    pub basis: Vec<String>,
    pub annihilator: Vec<String>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_document().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = SubspaceDocument::deserialize(deserializer)?;
        Subspace::from_document(&doc).map_err(serde::de::Error::custom)
    }
}
