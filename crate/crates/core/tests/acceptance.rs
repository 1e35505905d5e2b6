//! One line per acceptance criterion. Run with
//! `cargo test -p ovp-core --test acceptance -- --nocapture --test-threads 1`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};

use ovp_core::harness::{Category, Params, Summary};
use ovp_core::identities::{
    database, p_dissection_residue_condition, triangular_split_support, verify_triangular_split,
};
use ovp_core::partitions::{compare_with_oracle, enumerate_overpartition};
use ovp_core::{
    enumerate_pjk, series_pjk, verify_p_dissection, Catalog, CongruenceClaim, Harness, HarnessConfig,
    RegularOverpartitionSpec, Verdict, VerificationReport,
};

const IDENTITY_LIMIT: Duration = Duration::from_secs(10);
const INTERMEDIATE_LIMIT: Duration = Duration::from_secs(30);
const SWEEP_LIMIT: Duration = Duration::from_secs(300);

fn line(n: u32, name: &str, ok: bool, detail: &str) {
    println!("criterion {n} {name}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
}

fn spec(j: u64, k: u64) -> RegularOverpartitionSpec {
    RegularOverpartitionSpec::new(j, k).unwrap()
}

#[test]
fn criterion_1_identities() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for e in database() {
        let c = e.verify(e.default_order);
        if !c.equal {
            bad.push(format!("{} at q^{}", e.id, c.first_mismatch.unwrap_or(0)));
        }
    }
    let t = start.elapsed();
    let ok = bad.is_empty() && t < IDENTITY_LIMIT;
    line(1, "identity suite", ok, &format!("{} identities, mismatches {bad:?}, {t:.2?}", database().len()));
    assert!(ok);
}

#[test]
fn criterion_2_p_dissection() {
    let mut bad = Vec::new();
    for p in [5, 7, 11, 13] {
        let c = verify_p_dissection(p, 300).unwrap();
        if !c.equal {
            bad.push(format!("p={p} series at q^{}", c.first_mismatch.unwrap()));
        }
    }
    for p in [5, 7, 11, 13, 17, 19] {
        if !p_dissection_residue_condition(p).unwrap() {
            bad.push(format!("p={p} residue condition"));
        }
    }
    line(2, "p-dissection", bad.is_empty(), &format!("order 300, failures {bad:?}"));
    assert!(bad.is_empty());
}

#[test]
fn criterion_3_triangular_splits() {
    let offsets = [0u64, 1, 3, 6, 10, 15, 21, 28, 36, 45];
    let mut bad = Vec::new();
    for p in [7u64, 11, 13, 17, 19] {
        let c = verify_triangular_split(p, 500).unwrap();
        let expect: BTreeSet<u64> = offsets.iter().take(p as usize / 2 + 1).map(|t| t % p).collect();
        if !c.holds() || c.support != expect || triangular_split_support(p) != expect {
            bad.push(p);
        }
    }
    line(3, "triangular splits", bad.is_empty(), &format!("order 500, failing primes {bad:?}"));
    assert!(bad.is_empty());
}

#[test]
fn criterion_4_oracle() {
    let mut bad = Vec::new();
    for (j, k) in [(4, 8), (6, 12), (8, 16)] {
        for r in compare_with_oracle(spec(j, k), 60).unwrap() {
            if !r.matches() {
                bad.push(format!("({j},{k}) n={}", r.n));
            }
        }
    }
    let anchors = enumerate_overpartition(4) == BigUint::from(14u32)
        && enumerate_pjk(spec(4, 8), 4) == BigUint::from(12u32)
        && series_pjk(spec(4, 8), 4).unwrap().coeff(4) == BigInt::from(12);
    let ok = bad.is_empty() && anchors;
    line(4, "oracle equivalence", ok, &format!("n <= 60, mismatches {bad:?}, anchors {anchors}"));
    assert!(ok);
}

#[test]
fn criterion_5_intermediate() {
    let cat = Catalog::builtin();
    let claims: Vec<_> = cat.by_category(Category::Intermediate).collect();
    let start = Instant::now();
    let reports = Harness::default().run(&claims).unwrap();
    let t = start.elapsed();
    let s = Summary::of(&reports);
    let ok = claims.len() == 9 && s.passed == 9 && reports.iter().all(|r| r.n_max == 1000) && t < INTERMEDIATE_LIMIT;
    line(5, "intermediate congruences", ok, &format!("{s}, n <= 1000, {t:.2?}"));
    assert!(ok);
}

fn check_at(cat: &Catalog, id: &str, params: Params) -> VerificationReport {
    let c = cat.get(id).unwrap();
    Harness::default().check_claim(c, &params, 300).unwrap()
}

#[test]
fn criterion_6_theorem_spot_checks() {
    let cat = Catalog::builtin();
    let p5 = Params::base().with_p(5);
    let targets = [
        ("t11a", Params::base()),
        ("r1a", Params::base()),
        ("y1", Params::base()),
        ("w1", Params::base()),
        ("t41", Params::base()),
        ("t51", Params::base()),
        ("t81a", p5.clone()),
        ("t62a", p5.clone()),
    ];
    let reports: Vec<_> = targets.iter().map(|(id, p)| check_at(&cat, id, p.clone())).collect();
    let failing: Vec<String> =
        reports.iter().filter(|r| !r.verdict.is_pass()).map(|r| format!("{} {}", r.id, r.verdict)).collect();
    // The same congruences with the scalar carried through the proof.
    let derived: Vec<_> = ["t81b", "t62b"].iter().map(|id| check_at(&cat, id, p5.clone())).collect();
    let derived_ok = derived.iter().all(|r| r.verdict.is_pass());
    let ok = failing.is_empty();
    line(
        6,
        "theorem spot checks",
        ok,
        &format!(
            "{}/8 exact to n=300; failing {failing:?}; t81b/t62b {}",
            8 - failing.len(),
            if derived_ok { "pass" } else { "fail" }
        ),
    );
    // The two f1 right-hand sides are off by a factor 2 (and t62's
    // argument by a factor 2 in its step); pin exactly that outcome.
    assert_eq!(
        reports.iter().filter(|r| r.verdict.is_fail()).map(|r| r.id.as_str()).collect::<Vec<_>>(),
        ["t81a", "t62a"]
    );
    assert_eq!(reports[6].verdict, Verdict::Fail { n: 0, lhs: 2, rhs: 1 });
    assert!(reports[..6].iter().all(|r| r.verdict.is_pass()));
    assert!(derived_ok);
}

/// Every failing claim variant, as the sweep reports them.
const EXPECTED_FAILURES: &[&str] = &[
    "3b2a", "3b3a", "t13b", "s22a", "s5a", "u2a", "u4a", "t31a", "t32a", "t33a", "t34a", "t35a", "t71a", "t72a",
    "t44a", "t61a", "t62a", "t63a", "t81a", "t132a",
];

fn minimal(h: &Harness, c: &CongruenceClaim, r: &VerificationReport) -> bool {
    match r.verdict {
        Verdict::Fail { n: 0, .. } => true,
        Verdict::Fail { n, .. } => h.check_claim(c, &r.params, n - 1).unwrap().verdict.is_pass(),
        _ => true,
    }
}

#[test]
fn criterion_7_full_sweep() {
    let cat = Catalog::builtin();
    let claims: Vec<_> = cat.claims().iter().collect();
    let h = Harness::new(HarnessConfig::default());
    let start = Instant::now();
    let reports = h.run(&claims).unwrap();
    let t = start.elapsed();
    let s = Summary::of(&reports);

    let covered: BTreeSet<&str> = reports.iter().map(|r| r.id.as_str()).collect();
    let all_covered = claims.iter().all(|c| covered.contains(c.id.as_str()));
    let failed: BTreeSet<&str> = reports.iter().filter(|r| r.verdict.is_fail()).map(|r| r.id.as_str()).collect();
    let expected: BTreeSet<&str> = EXPECTED_FAILURES.iter().copied().collect();
    let with_n = reports.iter().filter(|r| r.verdict.is_fail()).all(|r| r.counterexample_n.is_some());
    let minimal_ok = reports.iter().filter(|r| r.verdict.is_fail()).all(|r| minimal(&h, cat.get(&r.id).unwrap(), r));
    let ok = all_covered && with_n && minimal_ok && failed == expected && t < SWEEP_LIMIT;
    line(7, "full sweep", ok, &format!("{} claims, {s}, {t:.2?}; failing variants {:?}", claims.len(), failed));
    assert!(all_covered && with_n && minimal_ok && t < SWEEP_LIMIT);
    assert_eq!(failed, expected);
}

#[test]
fn criterion_8_self_test() {
    let cat = Catalog::builtin();
    let h = Harness::default();
    let exact = series_pjk(spec(4, 8), 8 * 1000 + 7).unwrap();
    let f1 = ovp_core::euler_f(1, 1000);
    let first = |hit: &dyn Fn(usize) -> bool| (0..=1000usize).find(|&n| hit(n)).map(|n| n as u64);

    let mut shifted = cat.get("p17").unwrap().clone();
    shifted.id = "p17_offset_plus_1".into();
    shifted.arg.offset = "7".parse().unwrap();
    let r1 = h.check_claim(&shifted, &Params::default(), 1000).unwrap();
    let e1 = first(&|n| exact.coeff(8 * n + 7) % 32 != BigInt::from(0));

    // 8 f1^9 replaced by 8 f1; the two agree mod 16 below q^8
    let mut wrong_rhs = cat.get("q13").unwrap().clone();
    wrong_rhs.id = "q13_rhs_f1".into();
    wrong_rhs.rhs = Some("8*f1".parse().unwrap());
    let r2 = h.check_claim(&wrong_rhs, &Params::default(), 1000).unwrap();
    let e2 = first(&|n| (exact.coeff(8 * n + 3) - 8 * f1.coeff(n)) % 16 != BigInt::from(0));

    let ok = r1.counterexample_n.is_some()
        && r1.counterexample_n == e1
        && r2.counterexample_n.is_some()
        && r2.counterexample_n == e2;
    line(
        8,
        "self-test",
        ok,
        &format!(
            "p17 offset 7 fails at n={:?} (scan {e1:?}); q13 with rhs 8 f1 fails at n={:?} (scan {e2:?})",
            r1.counterexample_n, r2.counterexample_n
        ),
    );
    assert!(ok);
}
