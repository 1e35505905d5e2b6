use num_bigint::{BigInt, BigUint};

use ovp_core::partitions::{
    compare_with_oracle, enumerate_overpartition, enumerate_partition, series_ell_regular, series_overpartition,
    series_partition,
};
use ovp_core::{enumerate_pjk, series_pjk, series_pjk_mod, RegularOverpartitionSpec};

/// Lists every partition of `n` (non-increasing parts) and counts overpartitions:
/// each distinct part size may have its first occurrence overlined.
fn brute_force(n: u64, allowed: &dyn Fn(u64) -> bool) -> u64 {
    fn walk(rest: u64, max: u64, parts: &mut Vec<u64>, allowed: &dyn Fn(u64) -> bool, total: &mut u64) {
        if rest == 0 {
            let mut distinct = parts.clone();
            distinct.dedup();
            *total += 1 << distinct.len();
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            if allowed(part) {
                parts.push(part);
                walk(rest - part, part, parts, allowed, total);
                parts.pop();
            }
        }
    }
    let mut total = 0;
    walk(n, n, &mut Vec::new(), allowed, &mut total);
    total
}

fn spec(j: u64, k: u64) -> RegularOverpartitionSpec {
    RegularOverpartitionSpec::new(j, k).unwrap()
}

#[test]
fn anchors() {
    assert_eq!(enumerate_overpartition(4), BigUint::from(14u32));
    assert_eq!(enumerate_pjk(spec(4, 8), 4), BigUint::from(12u32));
    let s = series_pjk(spec(4, 8), 4).unwrap();
    assert_eq!((0..=4).map(|i| s.coeff(i)).collect::<Vec<_>>(), [1, 2, 4, 8, 12].map(BigInt::from));
    let p: Vec<BigInt> = (0..=10).map(|i| series_partition(10).coeff(i)).collect();
    assert_eq!(p, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42].map(BigInt::from));
}

#[test]
fn brute_force_agrees_with_series_and_enumeration() {
    const N: u64 = 24;
    for (j, k) in [(4, 8), (6, 12), (8, 16), (1, 3), (2, 5), (3, 7)] {
        let s = series_pjk(spec(j, k), N as usize).unwrap();
        for n in 0..=N {
            let brute = brute_force(n, &|part| part % k != j % k);
            assert_eq!(s.coeff(n as usize), BigInt::from(brute), "({j},{k}) n={n}");
            assert_eq!(enumerate_pjk(spec(j, k), n), BigUint::from(brute), "({j},{k}) n={n}");
        }
    }
}

#[test]
fn related_families() {
    const N: usize = 30;
    let over = series_overpartition(N);
    let regular = series_ell_regular(3, N);
    for n in 0..=N {
        assert_eq!(over.coeff(n), BigInt::from(brute_force(n as u64, &|_| true)));
        assert_eq!(BigInt::from(enumerate_overpartition(n as u64)), over.coeff(n));
        assert_eq!(BigInt::from(enumerate_partition(n as u64)), series_partition(N).coeff(n));
        // 3-regular partitions: no part divisible by 3
        let mut count = vec![0u64; N + 1];
        count[0] = 1;
        for part in (1..=N).filter(|p| p % 3 != 0) {
            for m in part..=N {
                count[m] += count[m - part];
            }
        }
        assert_eq!(regular.coeff(n), BigInt::from(count[n]));
    }
}

#[test]
fn oracle_comparison_to_sixty() {
    for (j, k) in [(4, 8), (6, 12), (8, 16)] {
        let rows = compare_with_oracle(spec(j, k), 60).unwrap();
        assert_eq!(rows.len(), 61);
        assert!(rows.iter().all(|r| r.matches()), "({j},{k})");
    }
}

#[test]
fn modular_route_matches_exact_route() {
    for (j, k) in [(4, 8), (6, 12), (8, 16), (2, 5)] {
        let exact = series_pjk(spec(j, k), 400).unwrap();
        for m in [4, 32, 64] {
            assert_eq!(series_pjk_mod(spec(j, k), 400, m).unwrap(), exact.reduce_mod(m).unwrap(), "({j},{k}) mod {m}");
        }
    }
}

#[test]
fn spec_validation() {
    assert!(RegularOverpartitionSpec::new(0, 8).is_err());
    assert!(RegularOverpartitionSpec::new(8, 8).is_err());
    assert_eq!("(4,8)".parse::<RegularOverpartitionSpec>().unwrap(), spec(4, 8));
    assert_eq!("6, 12".parse::<RegularOverpartitionSpec>().unwrap(), spec(6, 12));
    assert!("4;8".parse::<RegularOverpartitionSpec>().is_err());
}
