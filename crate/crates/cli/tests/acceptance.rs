//! The nine acceptance criteria. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line.

use std::process::{Command, ExitCode};

use clap::Parser;
use std::time::{Duration, Instant};

use f2sum::fourier::wht_in_place;
use f2sum::niveau::{exact_density, niveau_set};
use f2sum::rng::{partial_shuffle, sample_exact};
use f2sum::{
    convolve, find_subspace, max_subspace_in, metsch_bound, metsch_witness, verify_report, Character, DenseSet,
    DyadicRational, MetschOutcome, NiveauParams, Spectrum, SplitMix64, StoppingRule, Subspace,
};
use f2sum_cli::{run, ExperimentConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn config(args: &[&str]) -> ExperimentConfig {
    ExperimentConfig::try_parse_from(std::iter::once("f2sum").chain(args.iter().copied())).expect("valid arguments")
}

fn summary(args: &[&str]) -> (bool, serde_json::Value) {
    let out = run(&config(args)).expect("command runs");
    let v: serde_json::Value = serde_json::from_slice(&out.data).expect("json report");
    (out.passed, v["summary"].clone())
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `⌈n / log₂((2−2α)/(1−2α))⌉` as the least `i` with `x^i ≥ 2ⁿ`; at `α = 1/2`
/// the proof's minimal `i` with `2^(n−i)·0^i < 1`, which is 1.
fn theorem_bound(n: u32, alpha: &BigRational) -> u32 {
    let one = BigRational::one();
    let two = ratio(2, 1);
    if *alpha == ratio(1, 2) {
        return 1;
    }
    let x = (&two - &two * alpha) / (&one - &two * alpha);
    let target = BigRational::from_integer(BigInt::from(1u64) << n);
    let mut pow = one;
    let mut i = 0;
    while pow < target {
        pow *= &x;
        i += 1;
    }
    i
}

fn random_set(n: u32, k: u64, seed: u64, trial: u64) -> DenseSet {
    sample_exact(n, k, &mut SplitMix64::new(seed).fork(trial)).unwrap()
}

fn criterion_1() -> Verdict {
    let mut rng = SplitMix64::new(0xacce_0001);
    for i in 0..200u32 {
        let m = 1 + i % 12;
        let k = rng.below(1 << m) + 1;
        let a = sample_exact(m, k, &mut rng).unwrap();
        let indicator: Vec<i64> = (0..1u32 << m).map(|x| i64::from(a.contains(x))).collect();
        let spectrum = Spectrum::of_set(&a);
        let mut twice = spectrum.raw().to_vec();
        wht_in_place(&mut twice);
        if twice.iter().zip(&indicator).any(|(t, x)| *t != x << m) {
            return verdict(false, format!("double transform mismatch at set {i}"));
        }
        let energy: i128 = spectrum.raw().iter().map(|&r| i128::from(r) * i128::from(r)).sum();
        if energy != i128::from(a.card() as i64) << m {
            return verdict(false, format!("Parseval fails at set {i}"));
        }
        let b = sample_exact(m, rng.below(1 << m) + 1, &mut rng).unwrap();
        if convolve(&a, &b).unwrap().support() != a.sumset(&b).unwrap() {
            return verdict(false, format!("support differs from sumset at set {i}"));
        }
    }
    verdict(true, "200 sets, m <= 12")
}

/// Steps checked against the contraction, and violations.
fn contraction_steps(a: &DenseSet, report: &f2sum::FinderReport) -> (u64, u64) {
    let aa = a.sumset(a).unwrap();
    let alpha = a.density().to_rational();
    let one = BigRational::one();
    let factor = (&one - ratio(2, 1) * &alpha) / (&one - &alpha);
    let bad_density = |v: &Subspace| {
        let bad = v.elements().into_iter().filter(|&x| !aa.contains(x)).count() as u64;
        DyadicRational::from_count(bad, v.dim()).to_rational()
    };
    let mut v = Subspace::full(a.n()).unwrap();
    let (mut checked, mut violations) = (0, 0);
    for step in &report.steps {
        let next = v.intersect_perp(step.gamma_lift).unwrap();
        checked += 1;
        if next.dim() + 1 != v.dim() || bad_density(&next) > &factor * bad_density(&v) {
            violations += 1;
        }
        v = next;
    }
    (checked, violations)
}

fn criterion_2_and_3() -> (Verdict, Verdict) {
    let mut failures = Vec::new();
    let (mut steps, mut violations) = (0, 0);
    for n in [8u32, 12, 16] {
        for (p, q) in [(1, 8), (1, 4), (3, 8), (1, 2)] {
            let alpha = ratio(p, q);
            let k = (1u64 << n) * p as u64 / q as u64;
            for trial in 0..100 {
                let a = random_set(n, k, 0xacce_0002 + u64::from(n), trial);
                let report = find_subspace(&a, StoppingRule::Plain).unwrap();
                let aa = a.sumset(&a).unwrap();
                let ok = a.density().to_rational() == alpha
                    && report.verified
                    && verify_report(&a, &report).ok
                    && report.final_subspace.as_set().is_subset(&aa).unwrap()
                    && report.achieved_codim <= theorem_bound(n, &alpha);
                if !ok {
                    failures.push(format!("n={n} alpha={alpha} trial={trial}"));
                }
                let (c, v) = contraction_steps(&a, &report);
                steps += c;
                violations += v;
            }
        }
    }
    let from_runs = steps;
    // the runs above rarely need a step, so sparse sets exercise the contraction too
    for n in [8u32, 12, 16] {
        for trial in 0..30 {
            let k = 4 * u64::from(n) + trial;
            let a = random_set(n, k, 0xacce_0003, trial);
            let report = find_subspace(&a, StoppingRule::Plain).unwrap();
            let (c, v) = contraction_steps(&a, &report);
            steps += c;
            violations += v;
        }
    }
    let c2 = verdict(
        failures.is_empty(),
        format!(
            "1200 runs, {} failures {:?}",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    );
    let c3 = verdict(
        violations == 0,
        format!("{steps} steps checked ({from_runs} from the criterion 2 runs), {violations} violations"),
    );
    (c2, c3)
}

fn criterion_4() -> Verdict {
    let mut details = Vec::new();
    let mut ok = true;
    for (n, eps) in [("9", "1/1536"), ("16", "1/2048")] {
        let (passed, s) = summary(&[
            "--command",
            "hyperplane-check",
            "--n",
            n,
            "--epsilon",
            eps,
            "--trials",
            "100",
            "--seed",
            "4",
        ]);
        ok &= passed && s["regime_ok"] == true && s["hyperplane_found"] == 100 && s["coset_found"] == 100;
        details.push(format!(
            "n={n}: hyperplane {}/100, coset {}/100",
            s["hyperplane_found"], s["coset_found"]
        ));
    }
    verdict(ok, details.join("; "))
}

fn criterion_5() -> Verdict {
    let n = 16;
    let w_star = 7;
    let binomial_sum: u64 = (0..=w_star)
        .map(|k| (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1)))
        .sum();
    let density = exact_density(n as u32, w_star as u32).to_rational();
    if density != ratio(binomial_sum as i64, 1 << n) || binomial_sum != 26333 {
        return verdict(false, format!("density {density}, binomial sum {binomial_sum}"));
    }
    let p = NiveauParams::from_threshold(16, 7).unwrap();
    let a = niveau_set(&p).unwrap();
    let aa = a.sumset(&a).unwrap();
    let min_zeros = p.min_sumset_zeros();
    if aa.iter().any(|x| 16 - x.count_ones() < min_zeros) {
        return verdict(false, "an element of A+A has too few zeros");
    }
    let mut rng = SplitMix64::new(0xacce_0005);
    let (mut non_members, mut inconclusive) = (0, 0);
    for _ in 0..50 {
        let c = 1 + rng.below(3) as usize;
        let gammas: Vec<Character> = (0..c).map(|_| Character(1 + rng.below(0xffff) as u32)).collect();
        let v = Subspace::perp(16, &gammas).unwrap();
        let x = v.low_zero_vector().unwrap();
        if !v.contains(x) {
            return verdict(false, "low-zero vector outside V");
        }
        if 16 - x.count_ones() < min_zeros {
            if aa.contains(x) {
                return verdict(false, format!("claimed non-member {x:#x} lies in A+A"));
            }
            non_members += 1;
        } else {
            inconclusive += 1;
        }
    }
    verdict(
        true,
        format!(
            "density {binomial_sum}/65536, {non_members} verified non-members, inconclusive rate {inconclusive}/50"
        ),
    )
}

fn criterion_6() -> Verdict {
    let (passed, s) = summary(&[
        "--command",
        "concentration",
        "--n",
        "14",
        "--trials",
        "1000",
        "--bases",
        "20",
        "--seed",
        "6",
    ]);
    let ok =
        passed && s["standard_holding"] == 1000 && s["basis_holding"] == 20000 && s["containment_holding"] == 20000;
    verdict(
        ok,
        format!(
            "standard {}/1000, random bases {}/20000, containment {}/20000",
            s["standard_holding"], s["basis_holding"], s["containment_holding"]
        ),
    )
}

/// All elements of the span of `basis`, by brute force.
fn span(basis: &[u32]) -> Vec<u32> {
    (0..1u32 << basis.len())
        .map(|bits| {
            basis
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .fold(0, |acc, (_, b)| acc ^ b)
        })
        .collect()
}

fn criterion_7() -> Verdict {
    let n = 8;
    let mut found = 0;
    for d in 1..=3u32 {
        let bound = metsch_bound(n, d).unwrap();
        assert_eq!(bound, (1 << (n + 1 - d)) - 1);
        for trial in 0..50u64 {
            let mut rng = SplitMix64::new(0xacce_0007 + u64::from(d)).fork(trial);
            let size = bound - 1 - rng.below(bound / 2);
            let picks = partial_shuffle(255, size, &mut rng);
            let s = DenseSet::from_elements(n, picks.iter().map(|&x| x as u32 + 1)).unwrap();
            let MetschOutcome::Witness(v) = metsch_witness(&s, d).unwrap() else {
                return verdict(false, format!("no witness at d={d}, |S|={size}"));
            };
            let elements = span(v.basis());
            let distinct: std::collections::BTreeSet<u32> = elements.iter().copied().collect();
            if v.dim() != d || distinct.len() != 1 << d || elements.iter().any(|&x| s.contains(x)) {
                return verdict(false, format!("bad witness at d={d}, trial {trial}"));
            }
            found += 1;
        }
    }
    verdict(true, format!("{found}/150 witnesses, |S| up to 2^(n+1-d) - 2"))
}

/// Every subspace of F₂ⁿ (n ≤ 5) as `(dim, element mask)`.
fn all_subspaces(n: u32) -> Vec<(u32, u64)> {
    let mut seen = std::collections::BTreeSet::from([(0u32, 1u64)]);
    let mut frontier = vec![(0u32, 1u64)];
    while let Some((dim, mask)) = frontier.pop() {
        for v in 1..1u32 << n {
            if mask >> v & 1 == 1 {
                continue;
            }
            let mut next = mask;
            for x in 0..1u32 << n {
                if mask >> x & 1 == 1 {
                    next |= 1 << (x ^ v);
                }
            }
            if seen.insert((dim + 1, next)) {
                frontier.push((dim + 1, next));
            }
        }
    }
    seen.into_iter().collect()
}

fn target_set(n: u32, trial: u64, rng: &mut SplitMix64) -> DenseSet {
    if trial.is_multiple_of(2) {
        let a = sample_exact(n, 1 + rng.below(2 * u64::from(n)), rng).unwrap();
        a.sumset(&a).unwrap()
    } else {
        let num = [2, 3, 7][(trial / 2 % 3) as usize];
        let den = [4, 4, 8][(trial / 2 % 3) as usize];
        let t = DenseSet::from_predicate(n, |_| rng.bernoulli(num, den)).unwrap();
        t.union(&DenseSet::from_elements(n, [0]).unwrap()).unwrap()
    }
}

fn criterion_8() -> Verdict {
    let mut rng = SplitMix64::new(0xacce_0008);
    for n in 2..=5u32 {
        let subspaces = all_subspaces(n);
        for trial in 0..20 {
            let t = target_set(n, trial, &mut rng);
            let tmask: u64 = t.iter().fold(0, |m, x| m | 1 << x);
            let best = subspaces
                .iter()
                .filter(|(_, m)| m & !tmask == 0)
                .map(|(d, _)| *d)
                .max()
                .unwrap();
            let v = max_subspace_in(&t).unwrap();
            if v.dim() != best || !v.as_set().is_subset(&t).unwrap() {
                return verdict(
                    false,
                    format!("n={n} trial {trial}: oracle {} vs enumeration {best}", v.dim()),
                );
            }
        }
    }
    for n in 6..=10u32 {
        for trial in 0..20 {
            let t = target_set(n, trial, &mut rng);
            let v = max_subspace_in(&t).unwrap();
            if !v.as_set().is_subset(&t).unwrap() {
                return verdict(false, format!("n={n} trial {trial}: not contained"));
            }
            if v.dim() == n {
                continue;
            }
            for _ in 0..100 {
                let x = loop {
                    let x = rng.below(1 << n) as u32;
                    if !v.contains(x) {
                        break x;
                    }
                };
                if v.extend(&[x]).unwrap().as_set().is_subset(&t).unwrap() {
                    return verdict(false, format!("n={n} trial {trial}: extension by {x:#x} fits"));
                }
            }
        }
    }
    verdict(true, "n <= 5 enumerated, n in 6..=10 spot-checked, 20 sets each")
}

fn criterion_9() -> Verdict {
    let commands: [&[&str]; 7] = [
        &[
            "--command",
            "find",
            "--n",
            "10",
            "--size",
            "30",
            "--trials",
            "8",
            "--seed",
            "9",
        ],
        &[
            "--command",
            "hyperplane-check",
            "--n",
            "9",
            "--epsilon",
            "1/1536",
            "--trials",
            "8",
            "--seed",
            "9",
        ],
        &[
            "--command",
            "niveau",
            "--n",
            "12",
            "--w-star",
            "5",
            "--trials",
            "8",
            "--seed",
            "9",
        ],
        &[
            "--command",
            "concentration",
            "--n",
            "10",
            "--trials",
            "8",
            "--bases",
            "3",
            "--seed",
            "9",
        ],
        &[
            "--command",
            "metsch",
            "--n",
            "8",
            "--d",
            "2",
            "--size",
            "100",
            "--trials",
            "8",
            "--seed",
            "9",
        ],
        &[
            "--command",
            "question-sweep",
            "--n",
            "10",
            "--trials",
            "3",
            "--seed",
            "9",
            "--format",
            "csv",
        ],
        &["--command", "gen-set", "--n", "10", "--alpha", "1/8", "--seed", "9"],
    ];
    let pool = |threads| rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    for args in commands {
        let cfg = config(args);
        let serial = pool(1).install(|| run(&cfg).unwrap().data);
        let parallel = pool(4).install(|| run(&cfg).unwrap().data);
        let binary = Command::new(env!("CARGO_BIN_EXE_f2sum")).args(args).output().unwrap();
        if serial != parallel || serial != binary.stdout {
            return verdict(false, format!("output differs for {}", args[1]));
        }
    }
    verdict(
        true,
        "7 commands, identical bytes across 1 and 4 threads and the binary",
    )
}

fn timed<T>(limit: Duration, f: impl FnOnce() -> T) -> (T, Duration, bool) {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    (out, took, took <= limit)
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut results: Vec<(u32, Verdict, Duration, bool)> = Vec::new();
    let mut push = |id, (v, took, in_time): (Verdict, Duration, bool)| results.push((id, v, took, in_time));

    push(1, timed(secs(5), criterion_1));
    let ((c2, c3), took, in_time) = timed(secs(60), criterion_2_and_3);
    push(2, (c2, took, in_time));
    push(3, (c3, took, true));
    push(4, timed(secs(60), criterion_4));
    push(5, timed(secs(30), criterion_5));
    push(6, timed(secs(60), criterion_6));
    push(7, timed(secs(60), criterion_7));
    push(8, timed(secs(120), criterion_8));
    push(9, timed(secs(120), criterion_9));

    let mut all = true;
    for (id, v, took, in_time) in &results {
        let ok = v.ok && *in_time;
        all &= ok;
        let late = if *in_time { "" } else { " (over time limit)" };
        println!(
            "criterion {id}: {} [{:.2}s{late}] {}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
