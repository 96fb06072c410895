//! The density-increment search for a subspace inside `A + A`.
//!
//! Starting from `V₀ = G`, each step looks at the bad set
//! `S = V ∖ (A + A)` in the coordinates of `V`, takes the character with the
//! most negative coefficient of `1_S`, and passes to its kernel. With `α` the
//! density of `A` in `G`, the relative density of the bad set contracts by at
//! least `(1 − 2α)/(1 − α)` per step, so after
//! `⌈n / log₂((2 − 2α)/(1 − 2α))⌉` steps nothing bad is left.
//!
//! All quantities are exact; the report can be replayed by [`verify_report`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::fourier::{Character, Spectrum};
use crate::search::subspace_of_dim_in;
use crate::set::{DenseSet, MAX_DIM};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StoppingRule {
    /// Iterate until the bad set is empty.
    Plain,
    /// Iterate until the bad set is too small to meet every subspace of
    /// this dimension, then extract one.
    Metsch(u32),
}

impl fmt::Display for StoppingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StoppingRule::Plain => f.write_str("plain"),
            StoppingRule::Metsch(d) => write!(f, "metsch({d})"),
        }
    }
}

/// Accepts `plain`, `metsch(d)` and `metsch:d`.
impl FromStr for StoppingRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "plain" {
            return Ok(StoppingRule::Plain);
        }
        let arg = s
            .strip_prefix("metsch:")
            .or_else(|| s.strip_prefix("metsch(").and_then(|r| r.strip_suffix(')')));
        arg.and_then(|d| d.parse().ok())
            .map(StoppingRule::Metsch)
            .ok_or_else(|| Error::Parse(format!("unknown stopping rule {s:?}")))
    }
}

impl Serialize for StoppingRule {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StoppingRule {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Exact rationals in reports, written `p/q`.
pub mod ratio_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }

    pub fn parse(s: &str) -> Result<BigRational> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let (p, q) = s.split_once('/').unwrap_or((s, "1"));
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(p, q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationStep {
    pub step_index: u32,
    pub codim_before: u32,
    /// The chosen character in the coordinates of the current subspace.
    pub gamma_local: Character,
    /// Its lift to `G`; the next subspace is `V ∩ gamma_lift^⊥`.
    pub gamma_lift: Character,
    pub raw_coefficient: i64,
    pub bad_before: u64,
    pub bad_after: u64,
    pub density_s_before: DyadicRational,
    pub density_s_after: DyadicRational,
    #[serde(with = "ratio_string")]
    pub contraction_bound: BigRational,
    #[serde(with = "ratio_string")]
    pub measured_ratio: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinderReport {
    pub n: u32,
    pub alpha: DyadicRational,
    pub steps: Vec<IterationStep>,
    pub final_subspace: Subspace,
    pub achieved_codim: u32,
    pub theorem_bound: u32,
    pub stopping_rule: StoppingRule,
    pub verified: bool,
}

#[allow(clippy::large_enum_variant)]
pub enum StepOutcome {
    /// The current subspace already lies inside `A + A`.
    Done,
    Step(IterationStep, Subspace),
}

fn half() -> DyadicRational {
    DyadicRational::new(1, 1)
}

/// `(1 − 2α)/(1 − α)`.
pub fn contraction_factor(alpha: &DyadicRational) -> BigRational {
    let a = alpha.to_rational();
    let one = BigRational::one();
    (&one - &a - &a) / (&one - &a)
}

fn check_alpha(alpha: &DyadicRational) -> Result<()> {
    if alpha.is_negative() || alpha.is_zero() {
        Err(Error::NonPositiveDensity)
    } else {
        Ok(())
    }
}

/// Smallest `i` with `2^(n−i) · ((1−2α)/(1−α))^i < 1`, which is
/// `⌈n / log₂((2−2α)/(1−2α))⌉` for `α < 1/2`; 1 at `α = 1/2` and 0 above.
pub fn codim_bound(n: u32, alpha: &DyadicRational) -> Result<u32> {
    check_alpha(alpha)?;
    match alpha.cmp(&half()) {
        std::cmp::Ordering::Greater => return Ok(0),
        std::cmp::Ordering::Equal => return Ok(1),
        std::cmp::Ordering::Less => {}
    }
    let (num, den) = factor_parts(alpha);
    let mut lhs_pow = BigInt::one();
    let mut rhs_pow = BigInt::one();
    for i in 0..=n {
        // 2^(n-i) num^i < den^i
        if (&lhs_pow << (n - i)) < rhs_pow {
            return Ok(i);
        }
        lhs_pow *= &num;
        rhs_pow *= &den;
    }
    unreachable!("the factor is below 1 for positive alpha")
}

/// Smallest `i ≤ n − d` with `2^(n−i) · ((1−2α)/(1−α))^i < 2^(n−i+1−d) − 1`.
///
/// After that many steps the bad set inside `Vᵢ` is smaller than the least
/// size of a set meeting every `d`-dimensional subspace of `Vᵢ`.
pub fn metsch_step_bound(n: u32, alpha: &DyadicRational, d: u32) -> Result<u32> {
    check_alpha(alpha)?;
    if *alpha > half() {
        return Ok(0);
    }
    if d > n {
        return Err(Error::Precondition(format!("dimension {d} exceeds n = {n}")));
    }
    let (num, den) = factor_parts(alpha);
    let mut lhs_pow = BigInt::one();
    let mut rhs_pow = BigInt::one();
    for i in 0..=(n - d) {
        let threshold = (BigInt::one() << (n - i + 1 - d)) - 1;
        if (&lhs_pow << (n - i)) < threshold * &rhs_pow {
            return Ok(i);
        }
        lhs_pow *= &num;
        rhs_pow *= &den;
    }
    Err(Error::Precondition(format!(
        "no step count guarantees a {d}-dimensional subspace at this density"
    )))
}

/// Numerator and denominator of the contraction factor as integers.
fn factor_parts(alpha: &DyadicRational) -> (BigInt, BigInt) {
    let k = alpha.log2_denominator();
    let p = alpha.numerator();
    let scale = BigInt::one() << k;
    (&scale - p - p, &scale - p)
}

/// One density-increment step on `V` against the sumset `aa = A + A`.
pub fn iteration_step(aa: &DenseSet, v: &Subspace, alpha: &DyadicRational, step_index: u32) -> Result<StepOutcome> {
    check_alpha(alpha)?;
    let bad = v.pullback(aa)?.complement();
    if bad.is_empty() {
        return Ok(StepOutcome::Done);
    }
    let spectrum = Spectrum::of_set(&bad);
    let (gamma, raw) = spectrum
        .most_negative()
        .ok_or_else(|| Error::Invariant("bad set is nonempty but has no negative Fourier coefficient".into()))?;
    let m = v.dim();
    let bad_after = bad.iter().filter(|&y| !gamma.is_odd_at(y)).count() as u64;
    if 2 * bad_after as i64 != bad.card() as i64 + raw {
        return Err(Error::Invariant("kernel count disagrees with the coefficient".into()));
    }
    let gamma_lift = v.lift_character(gamma);
    let next = v.intersect_perp(gamma_lift)?;
    let density_s_before = DyadicRational::from_count(bad.card(), m);
    let density_s_after = DyadicRational::from_count(bad_after, m - 1);
    let measured_ratio = density_s_after.to_rational() / density_s_before.to_rational();
    let step = IterationStep {
        step_index,
        codim_before: v.codim(),
        gamma_local: gamma,
        gamma_lift,
        raw_coefficient: raw,
        bad_before: bad.card(),
        bad_after,
        density_s_before,
        density_s_after,
        contraction_bound: contraction_factor(alpha),
        measured_ratio,
    };
    Ok(StepOutcome::Step(step, next))
}

/// Runs the iteration on `A` and returns a self-verified report.
pub fn find_subspace(a: &DenseSet, stopping: StoppingRule) -> Result<FinderReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a.n();
    if n > MAX_DIM {
        return Err(Error::Capacity { n, max: MAX_DIM });
    }
    let alpha = a.density();
    let full = Subspace::full(n)?;
    if alpha > half() {
        let report = FinderReport {
            n,
            alpha,
            steps: Vec::new(),
            final_subspace: full,
            achieved_codim: 0,
            theorem_bound: 0,
            stopping_rule: stopping,
            verified: false,
        };
        return finish(a, report);
    }
    let aa = a.sumset(a)?;
    let theorem_bound = match stopping {
        StoppingRule::Plain => codim_bound(n, &alpha)?,
        StoppingRule::Metsch(d) => metsch_step_bound(n, &alpha, d)?,
    };
    let mut v = full;
    let mut steps = Vec::new();
    loop {
        if let StoppingRule::Metsch(d) = stopping {
            if v.dim() < d {
                return Err(Error::Invariant("iteration passed below the target dimension".into()));
            }
            let bad = (1u64 << v.dim()) - v.pullback(&aa)?.card();
            if bad < (1u64 << (v.dim() + 1 - d)) - 1 {
                break;
            }
        }
        match iteration_step(&aa, &v, &alpha, steps.len() as u32)? {
            StepOutcome::Done => break,
            StepOutcome::Step(step, next) => {
                steps.push(step);
                v = next;
            }
        }
    }
    let (final_subspace, achieved_codim) = match stopping {
        StoppingRule::Plain => {
            let codim = v.codim();
            (v, codim)
        }
        StoppingRule::Metsch(d) => {
            let local = v.pullback(&aa)?;
            let inner = subspace_of_dim_in(&local, d)?
                .ok_or_else(|| Error::Invariant(format!("no {d}-dimensional subspace below the blocking size")))?;
            (v.push_subspace(&inner)?, n - d)
        }
    };
    let report = FinderReport {
        n,
        alpha,
        steps,
        final_subspace,
        achieved_codim,
        theorem_bound,
        stopping_rule: stopping,
        verified: false,
    };
    finish(a, report)
}

fn finish(a: &DenseSet, mut report: FinderReport) -> Result<FinderReport> {
    let check = verify_report(a, &report);
    if !check.ok {
        return Err(Error::Invariant(check.diagnostics.join("; ")));
    }
    report.verified = true;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

/// Replays a report against `A` from scratch.
///
/// Checks the density, every step's recorded counts and densities, the
/// exact contraction inequality, the codimension bound and that the final
/// subspace lies inside `A + A`.
pub fn verify_report(a: &DenseSet, report: &FinderReport) -> Verification {
    let mut diag = Vec::new();
    if let Err(e) = replay(a, report, &mut diag) {
        diag.push(format!("replay failed: {e}"));
    }
    Verification {
        ok: diag.is_empty(),
        diagnostics: diag,
    }
}

fn replay(a: &DenseSet, r: &FinderReport, diag: &mut Vec<String>) -> Result<()> {
    let n = a.n();
    if r.n != n || r.final_subspace.n() != n {
        diag.push(format!("dimension mismatch: report n = {}, set n = {n}", r.n));
        return Ok(());
    }
    let alpha = a.density();
    if r.alpha != alpha {
        diag.push(format!("alpha {} does not match density {alpha}", r.alpha));
    }
    let aa = a.sumset(a)?;
    if !r.final_subspace.as_set().is_subset(&aa)? {
        diag.push("final subspace is not contained in A+A".into());
    }
    if alpha > half() {
        if !r.steps.is_empty() || r.achieved_codim != 0 || r.final_subspace.dim() != n || r.theorem_bound != 0 {
            diag.push("density above 1/2 must give codimension 0 with no steps".into());
        }
        return Ok(());
    }
    let factor = contraction_factor(&alpha);
    let mut v = Subspace::full(n)?;
    for (i, step) in r.steps.iter().enumerate() {
        let tag = format!("step {i}");
        if step.step_index != i as u32 {
            diag.push(format!("{tag}: index {}", step.step_index));
        }
        if step.codim_before != v.codim() {
            diag.push(format!("{tag}: codim_before {} != {}", step.codim_before, v.codim()));
        }
        if step.gamma_lift != v.lift_character(step.gamma_local) || step.gamma_local.mask() >> v.dim() != 0 {
            diag.push(format!("{tag}: character lift inconsistent"));
        }
        let bad = v.pullback(&aa)?.complement();
        let before = DyadicRational::from_count(bad.card(), v.dim());
        if step.bad_before != bad.card() || step.density_s_before != before {
            diag.push(format!("{tag}: bad-set density {} != {before}", step.density_s_before));
        }
        let next = v.intersect_perp(step.gamma_lift)?;
        if next.codim() != v.codim() + 1 {
            diag.push(format!("{tag}: codimension did not grow by one"));
            return Ok(());
        }
        let bad_next = (1u64 << next.dim()) - next.pullback(&aa)?.card();
        let after = DyadicRational::from_count(bad_next, next.dim());
        if step.bad_after != bad_next || step.density_s_after != after {
            diag.push(format!(
                "{tag}: bad-set density after {} != {after}",
                step.density_s_after
            ));
        }
        if step.contraction_bound != factor {
            diag.push(format!("{tag}: recorded factor differs from (1-2a)/(1-a)"));
        }
        if after.to_rational() > &factor * before.to_rational() {
            diag.push(format!("{tag}: contraction inequality fails"));
        }
        v = next;
    }
    match r.stopping_rule {
        StoppingRule::Plain => {
            if r.final_subspace != v {
                diag.push("final subspace is not the last iterate".into());
            }
            if r.achieved_codim != r.steps.len() as u32 || r.achieved_codim != r.final_subspace.codim() {
                diag.push("achieved codimension does not match the step count".into());
            }
            match codim_bound(n, &alpha) {
                Ok(b) if b == r.theorem_bound => {}
                _ => diag.push("theorem bound mismatch".into()),
            }
        }
        StoppingRule::Metsch(d) => {
            if !r.final_subspace.is_subspace_of(&v) || r.final_subspace.dim() != d {
                diag.push(format!(
                    "final subspace is not a {d}-dimensional subspace of the last iterate"
                ));
            }
            if r.achieved_codim != n - d.min(n) {
                diag.push("achieved codimension must be n - d".into());
            }
            match metsch_step_bound(n, &alpha, d) {
                Ok(b) if b == r.theorem_bound => {}
                _ => diag.push("theorem bound mismatch".into()),
            }
        }
    }
    if r.steps.len() as u32 > r.theorem_bound {
        diag.push(format!("{} steps exceed the bound {}", r.steps.len(), r.theorem_bound));
    }
    Ok(())
}
