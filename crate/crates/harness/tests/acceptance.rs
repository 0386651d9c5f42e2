//! Acceptance run: one line per criterion, then a check that every outcome
//! matches the recorded expectation. Two criteria are known to fail as
//! stated (the literal maximal-weight window at k >= 2 and the literal
//! sensitivity threshold on the scaled metric); their lines say FAIL and the
//! measured structure of the failure is asserted instead.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use fusion_core::characters::{branching_function, branching_identity, char_principal, char_string_sum, i_of_s, partition_identity, StringFunctions};
use fusion_core::face::{neighbours, path_spread, w_fused, HeightQuad};
use fusion_core::{c64, Error, ModelParams};
use fusion_harness::calibrate::perturbation_probe;
use fusion_harness::config::{Overrides, SuiteConfig};
use fusion_harness::report::{Report, Status};

const SEED: u64 = 20261014;

/// Baseline r per level: the CLI default where the level allows it.
fn r_for(k: usize) -> f64 {
    if k <= 2 {
        5.0
    } else {
        7.7
    }
}

fn run(k: usize, r: f64, suites: &str, samples: usize) -> Report {
    let o = Overrides { k: Some(k), r: Some(r), x: Some(0.3), suites: Some(suites.into()), samples: Some(samples), seed: Some(SEED), ..Default::default() };
    fusion_harness::run(&SuiteConfig::resolve(None, &o).unwrap()).unwrap()
}

#[derive(Default, Debug, Clone, Copy)]
struct Tally {
    pass: usize,
    fail: usize,
    skipped: usize,
    inconclusive: usize,
    worst: f64,
}

impl Tally {
    fn ok(&self, min_pass: usize) -> bool {
        self.fail == 0 && self.pass >= min_pass
    }
}

fn tally(rep: &Report, identity: &str) -> Tally {
    let mut t = Tally::default();
    for r in rep.records.iter().filter(|r| r.identity == identity) {
        match r.status {
            Status::Pass => t.pass += 1,
            Status::Fail => t.fail += 1,
            Status::SkippedSingular => t.skipped += 1,
            Status::Inconclusive => t.inconclusive += 1,
        }
        if r.status != Status::SkippedSingular {
            t.worst = t.worst.max(r.residual.unwrap_or(f64::INFINITY));
        }
    }
    t
}

struct Outcome {
    pass: bool,
    text: String,
}

fn report_line(n: usize, o: &Outcome) {
    println!("criterion {n}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.text);
}

/// Runs `suites` at each level and requires every listed identity to pass at least `min_pass` times.
fn identities_over(levels: &[usize], suites: &str, samples: usize, ids: &[&str], min_pass: usize) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &k in levels {
        let rep = run(k, r_for(k), suites, samples);
        for id in ids {
            let t = tally(&rep, id);
            ok &= t.ok(min_pass);
            parts.push(format!("k={k} {id} {}/{} max {:.1e}", t.pass, t.pass + t.fail + t.skipped + t.inconclusive, t.worst));
        }
    }
    (ok, parts.join("; "))
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let (a, ta) = identities_over(&[1, 2], "ybe,unitarity,crossing", 20, &["vertex.ybe", "vertex.unitarity", "vertex.crossing"], 20);
    let (b, tb) = identities_over(&[3], "ybe,unitarity", 20, &["vertex.ybe", "vertex.unitarity"], 20);
    let secs = t0.elapsed().as_secs_f64();
    Outcome { pass: a && b && secs < 60.0, text: format!("{ta}; {tb}; {secs:.1} s (limit 60 s)") }
}

fn criterion_2() -> Outcome {
    let (ok, text) = identities_over(&[1], "unitarity", 50, &["r0.inversion", "r0.shifted-inversion"], 50);
    Outcome { pass: ok, text }
}

/// Every admissible quad with corners in `(0, r)` around a set of real and
/// integer base heights. A corner at 0 or r sits on a zero of `[·]`.
fn exhaustive_path_independence(k: usize) -> (usize, f64) {
    let p = ModelParams::new(0.3, 23.7, k).unwrap();
    let u = c64(-0.37, 0.04);
    let (mut n, mut worst) = (0usize, 0.0f64);
    let kf = k as f64;
    for base in [kf + 1.0, kf + 1.25, kf + 2.5, kf + 3.75, kf + 5.0, kf + 6.125] {
        for b in neighbours(base, k) {
            for d in neighbours(base, k) {
                for c in neighbours(b, k).into_iter().filter(|c| neighbours(d, k).iter().any(|x| (x - c).abs() < 1e-12)) {
                    if [b, d, c].iter().any(|&h| h <= 0.0 || h >= p.r) {
                        continue;
                    }
                    let q = HeightQuad::new(base, b, d, c);
                    match (path_spread(k, q, u, &p), w_fused(k, q, u, &p)) {
                        (Ok(s), Ok(w)) => {
                            n += 1;
                            worst = worst.max(s / w.norm().max(1.0));
                        }
                        (Err(Error::Singular(_)), _) | (_, Err(Error::Singular(_))) => {}
                        (Err(e), _) | (_, Err(e)) => panic!("path spread at {q:?}: {e}"),
                    }
                }
            }
        }
    }
    (n, worst)
}

fn criterion_3() -> Outcome {
    let (a, ta) = identities_over(&[1, 2, 3], "face-ybe,crossing", 20, &["face.ybe", "face.unitarity", "face.crossing", "face.reflection"], 20);
    let mut ok = a;
    let mut parts = vec![ta];
    for k in 1..=3 {
        let (n, worst) = exhaustive_path_independence(k);
        ok &= n > 0 && worst < 1e-10;
        parts.push(format!("k={k} path independence over {n} quads max {worst:.1e}"));
    }
    Outcome { pass: ok, text: parts.join("; ") }
}

fn criterion_4() -> Outcome {
    let (ok, text) = identities_over(&[1, 2, 3], "vertex-face", 20, &["intertwiner.vertex-face", "intertwiner.vertex-face-dual"], 20);
    Outcome { pass: ok, text }
}

fn criterion_5() -> Outcome {
    let ids = [
        "intertwiner.inversion-heights",
        "intertwiner.inversion-spins",
        "intertwiner.inversion-heights-prime",
        "intertwiner.inversion-spins-prime",
        "intertwiner.prime-shift",
        "intertwiner.c-squared-modulus",
    ];
    let (ok, text) = identities_over(&[1, 2, 3], "inversions", 20, &ids, 20);
    Outcome { pass: ok, text }
}

struct MaxWeightSummary {
    /// (k, ℓ) pairs with a literal-window violation.
    literal_failures: BTreeSet<(usize, usize)>,
    outcome: Outcome,
}

fn criterion_6() -> MaxWeightSummary {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut literal_failures = BTreeSet::new();
    let mut empirical_ok = true;
    for k in 1..=3usize {
        let rep = run(k, r_for(k), "lmatrix", 10 * (k + 1));
        for id in ["lmatrix.closed-form", "lmatrix.fusion-product", "lmatrix.tail-up", "lmatrix.tail-down"] {
            let t = tally(&rep, id);
            ok &= t.ok(10 * (k + 1));
            parts.push(format!("k={k} {id} max {:.1e}", t.worst));
        }
        let mut per_ell: BTreeMap<(&str, usize), (usize, usize)> = BTreeMap::new();
        for r in rep.records.iter().filter(|r| r.identity.starts_with("lmatrix.max-weight")) {
            let ell: usize = r.sample["ell"].parse().unwrap();
            let e = per_ell.entry((r.identity.as_str(), ell)).or_default();
            match r.status {
                Status::Pass => e.0 += 1,
                _ => e.1 += 1,
            }
        }
        for ell in 0..=k {
            let (lp, lf) = per_ell[&("lmatrix.max-weight", ell)];
            let (sp, sf) = per_ell[&("lmatrix.max-weight-shifted", ell)];
            if lf > 0 || lp < 10 {
                literal_failures.insert((k, ell));
            }
            empirical_ok &= sf == 0 && sp >= 10;
            parts.push(format!("k={k} l={ell} argmax literal window {lp}/{} empirical window {sp}/{}", lp + lf, sp + sf));
        }
    }
    let pass = ok && literal_failures.is_empty();
    parts.push(format!(
        "closed forms {}; literal window fails at (k, l) = {literal_failures:?}; empirical window -k - 1/2 < u < -k + 1/2 {}",
        if ok { "hold" } else { "FAIL" },
        if empirical_ok { "holds" } else { "FAILS" }
    ));
    MaxWeightSummary { literal_failures, outcome: Outcome { pass, text: parts.join("; ") } }
}

/// Partition numbers by Euler's pentagonal recursion.
fn partitions(n: usize) -> Vec<i128> {
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut tot = 0i128;
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            tot += sign * p[m - g1];
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= m {
                tot += sign * p[m - g2];
            }
        }
        p[m] = tot;
    }
    p
}

/// Minimal-model character of M(p, p') with Kac labels (r, s), built as an
/// integer q-series: q^{A²/4pp' - 1/24} Σ_N c_N q^N with A = p' r - p s.
fn minimal_model_oracle(p: i64, pp: i64, r: i64, s: i64, q: f64) -> f64 {
    const DEPTH: usize = 80;
    let mut num = vec![0i128; DEPTH + 1];
    let a0 = pp * r - p * s;
    let b0 = pp * r + p * s;
    for n in -20i64..=20 {
        let ea = p * pp * n * n + n * a0;
        let eb = p * pp * n * n + n * b0 + r * s;
        if (0..=DEPTH as i64).contains(&ea) {
            num[ea as usize] += 1;
        }
        if (0..=DEPTH as i64).contains(&eb) {
            num[eb as usize] -= 1;
        }
    }
    let part = partitions(DEPTH);
    let mut tot = 0.0;
    for nn in 0..=DEPTH {
        let c: i128 = (0..=nn).map(|i| num[i] * part[nn - i]).sum();
        tot += c as f64 * q.powi(nn as i32);
    }
    q.powf((a0 * a0) as f64 / (4 * p * pp) as f64 - 1.0 / 24.0) * tot
}

fn criterion_7() -> Outcome {
    let t0 = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    let (suite_ok, suite_text) = identities_over(
        &[1, 2, 3],
        "characters",
        20,
        &["characters.principal-vs-strings", "characters.partition-function", "characters.i-of-s", "characters.branching"],
        20,
    );
    ok &= suite_ok;
    parts.push(suite_text);
    for k in 1..=3usize {
        let sf = StringFunctions::new(k, 20).unwrap();
        let (mut principal, mut is) = (0.0f64, 0.0f64);
        for x in [0.2, 0.3, 0.4] {
            for ell in 0..=k {
                let ch = char_principal(k, ell, x).unwrap();
                principal = principal.max((char_string_sum(&sf, ell, x, 30) - ch).abs() / ch.abs());
                for s in -3..=3 {
                    is = is.max((i_of_s(&sf, ell, s, x, 30) - ch).abs() / ch.abs());
                }
            }
        }
        let mut part = 0.0f64;
        for (m, ell) in [(1i64, 0usize), (2, 1)] {
            part = part.max(partition_identity(&sf, m, ell, 0.3, 7.7, 20).unwrap().relative());
        }
        ok &= principal < 1e-8 && is < 1e-8 && part < 1e-7;
        parts.push(format!("k={k} principal vs strings {principal:.1e}, I(s) {is:.1e}, partition function {part:.1e}"));
    }
    let sf = StringFunctions::new(1, 20).unwrap();
    let (mut branch, mut oracle) = (0.0f64, 0.0f64);
    for r in [4i64, 5] {
        for x in [0.2, 0.3, 0.4] {
            for ell in 0..=1usize {
                for m in 1..r - 1 {
                    branch = branch.max(branching_identity(&sf, r, m, ell, x, 12).unwrap().relative());
                    for a in (1..r).filter(|a| (a - m - ell as i64).rem_euclid(2) == 0) {
                        let b = branching_function(&sf, ell, m, a, x, r, 12);
                        let o = minimal_model_oracle(r - 1, r, m, a, x.powi(4));
                        oracle = oracle.max((b - o).abs() / o.abs().max(1.0));
                    }
                }
            }
        }
    }
    ok &= branch < 1e-7 && oracle < 1e-8;
    let secs = t0.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    parts.push(format!("k=1 branching r in {{4, 5}} {branch:.1e}, minimal-model oracle {oracle:.1e}; {secs:.1} s (limit 300 s)"));
    Outcome { pass: ok, text: parts.join("; ") }
}

struct TailSummary {
    identities_ok: bool,
    perturbed: Vec<(f64, f64)>,
    outcome: Outcome,
}

fn criterion_8() -> TailSummary {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in 1..=3usize {
        let rep = run(k, r_for(k), "tail", 7 * (2 * k + 1));
        for id in ["tail.weak-phi", "tail.weak-lambda", "tail.proportionality", "tail.lw-proposition"] {
            let t = tally(&rep, id);
            ok &= t.ok(10);
            parts.push(format!("k={k} {id} {}/{} max {:.1e}", t.pass, t.pass + t.fail + t.skipped + t.inconclusive, t.worst));
        }
        let nec = tally(&rep, "tail.necessary-condition");
        ok &= nec.fail == 0;
        let mapped: BTreeSet<usize> = rep
            .records
            .iter()
            .filter(|r| r.identity == "tail.necessary-condition" && r.status == Status::Pass)
            .map(|r| r.sample["s"].parse().unwrap())
            .collect();
        parts.push(format!("k={k} necessary condition vanishes for s in {mapped:?} ({} outside the mapped range)", nec.inconclusive));
    }
    let mut perturbed = Vec::new();
    let mut literal = true;
    for k in 1..=3usize {
        let p = ModelParams::new(0.3, r_for(k), k).unwrap();
        let (clean, pert) = perturbation_probe(k, &p).unwrap();
        literal &= pert > 1e-4;
        perturbed.push((clean, pert));
        parts.push(format!("k={k} perturbation 1e-5: scaled residual {pert:.1e} (needs > 1e-4), clean {clean:.1e}, ratio {:.1e}", pert / clean.max(f64::MIN_POSITIVE)));
    }
    TailSummary { identities_ok: ok, perturbed, outcome: Outcome { pass: ok && literal, text: parts.join("; ") } }
}

fn criterion_9() -> Outcome {
    let o = Overrides { k: Some(2), r: Some(7.7), suites: Some("all".into()), samples: Some(4), seed: Some(SEED), ..Default::default() };
    let cfg = SuiteConfig::resolve(None, &o).unwrap();
    let a = fusion_harness::run(&cfg).unwrap();
    let b = fusion_harness::run(&cfg).unwrap();
    let (ja, jb) = (a.to_json().unwrap(), b.to_json().unwrap());
    let mut ca = Vec::new();
    let mut cb = Vec::new();
    a.write_csv(&mut ca).unwrap();
    b.write_csv(&mut cb).unwrap();
    let other = fusion_harness::run(&SuiteConfig { seed: SEED + 1, ..cfg }).unwrap().to_json().unwrap();
    let ok = ja == jb && ca == cb && ja != other;
    Outcome { pass: ok, text: format!("json {} bytes identical {}, csv identical {}, another seed differs {}", ja.len(), ja == jb, ca == cb, ja != other) }
}

fn main() {
    let c1 = criterion_1();
    report_line(1, &c1);
    let c2 = criterion_2();
    report_line(2, &c2);
    let c3 = criterion_3();
    report_line(3, &c3);
    let c4 = criterion_4();
    report_line(4, &c4);
    let c5 = criterion_5();
    report_line(5, &c5);
    let c6 = criterion_6();
    report_line(6, &c6.outcome);
    let c7 = criterion_7();
    report_line(7, &c7);
    let c8 = criterion_8();
    report_line(8, &c8.outcome);
    let c9 = criterion_9();
    report_line(9, &c9);

    for (n, o) in [(1, &c1), (2, &c2), (3, &c3), (4, &c4), (5, &c5), (7, &c7), (9, &c9)] {
        assert!(o.pass, "criterion {n} failed: {}", o.text);
    }
    // The argmax claim fails exactly at the extreme spins for k >= 2; all closed forms hold.
    let expected: BTreeSet<(usize, usize)> = [(2, 0), (2, 2), (3, 0), (3, 3)].into_iter().collect();
    assert_eq!(c6.literal_failures, expected, "{}", c6.outcome.text);
    assert!(!c6.outcome.text.contains("closed forms FAIL") && !c6.outcome.text.contains("FAILS"), "{}", c6.outcome.text);
    // The identities hold; the perturbation is detected by many orders of magnitude
    // but the scaled residual stays below the literal 1e-4.
    assert!(c8.identities_ok, "{}", c8.outcome.text);
    for (clean, pert) in &c8.perturbed {
        assert!(pert / clean.max(f64::MIN_POSITIVE) > 1e6 && *pert < 1e-4, "{}", c8.outcome.text);
    }
    println!("acceptance: criteria 1, 2, 3, 4, 5, 7, 9 pass; 6 and 8 fail as recorded");
}
