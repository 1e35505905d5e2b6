//! Generating functions for partition-type counts and brute-force
//! enumeration oracles that never touch a generating function.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::products::{eta_quotient_series, eta_quotient_series_mod, pochhammer, EtaQuotient, Sign};
use crate::series::TruncatedSeries;

/// `(j, k)` with `1 ≤ j < k`: overpartitions with no part `≡ j (mod k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(u64, u64)", into = "(u64, u64)")]
pub struct RegularOverpartitionSpec {
    j: u64,
    k: u64,
}

impl RegularOverpartitionSpec {
    pub fn new(j: u64, k: u64) -> Result<Self> {
        if j == 0 || j >= k {
            return Err(Error::InvalidSpec { j, k });
        }
        Ok(RegularOverpartitionSpec { j, k })
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// `f_2 f_j² f_{4j} / (f_1² f_{2j}³)`, the reduced form when `k = 2j`.
    pub fn eta_form(&self) -> Option<EtaQuotient> {
        let j = self.j as usize;
        (self.k == 2 * self.j).then(|| EtaQuotient::new([(2, 1), (j, 2), (4 * j, 1), (1, -2), (2 * j, -3)]))
    }

    fn allows(&self, part: u64) -> bool {
        part % self.k != self.j
    }
}

impl TryFrom<(u64, u64)> for RegularOverpartitionSpec {
    type Error = Error;
    fn try_from((j, k): (u64, u64)) -> Result<Self> {
        Self::new(j, k)
    }
}

impl From<RegularOverpartitionSpec> for (u64, u64) {
    fn from(s: RegularOverpartitionSpec) -> Self {
        (s.j, s.k)
    }
}

impl fmt::Display for RegularOverpartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j, self.k)
    }
}

impl FromStr for RegularOverpartitionSpec {
    type Err = Error;

    /// Accepts `4,8` or `(4,8)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec { j: 0, k: 0 };
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (j, k) = t.split_once(',').ok_or_else(bad)?;
        let j = j.trim().parse().map_err(|_| bad())?;
        let k = k.trim().parse().map_err(|_| bad())?;
        Self::new(j, k)
    }
}

// Divides by (1 + sign·q^m) in place: B_n = A_n − sign·B_{n−m}.
fn div_binomial(s: &mut [BigInt], m: usize, sign: i64) {
    for n in m..s.len() {
        let prev = s[n - m].clone();
        if sign > 0 {
            s[n] -= prev;
        } else {
            s[n] += prev;
        }
    }
}

/// `(−q;q)_∞ (q^j;q^k)_∞ / ((q;q)_∞ (−q^j;q^k)_∞)` from its Pochhammer factors.
pub fn series_pjk_pochhammer(spec: RegularOverpartitionSpec, order: usize) -> TruncatedSeries {
    let (j, k) = (spec.j as usize, spec.k as usize);
    let num = &pochhammer(1, 1, Sign::Plus, order) * &pochhammer(j, k, Sign::Minus, order);
    let mut c = num.exact_coeffs().expect("exact").to_vec();
    for m in 1..=order {
        div_binomial(&mut c, m, -1);
    }
    let mut m = j;
    while m <= order {
        div_binomial(&mut c, m, 1);
        m += k;
    }
    TruncatedSeries::from_bigints(c)
}

/// Exact series of `p̄_{j,k}(n)`. When `k = 2j` the Pochhammer and
/// eta-quotient constructions are both built and must agree.
pub fn series_pjk(spec: RegularOverpartitionSpec, order: usize) -> Result<TruncatedSeries> {
    let s = series_pjk_pochhammer(spec, order);
    if let Some(eq) = spec.eta_form() {
        if let Some(index) = s.first_mismatch(&eta_quotient_series(&eq, order)) {
            return Err(Error::ConstructionMismatch { j: spec.j, k: spec.k, index });
        }
    }
    Ok(s)
}

/// `p̄_{j,k}(n) mod m` through `q^order`, computed entirely in ℤ/mℤ.
pub fn series_pjk_mod(spec: RegularOverpartitionSpec, order: usize, m: u64) -> Result<TruncatedSeries> {
    match spec.eta_form() {
        Some(eq) => eta_quotient_series_mod(&eq, order, m),
        None => series_pjk_pochhammer(spec, order).reduce_mod(m),
    }
}

/// `(−q;q)_∞ / (q;q)_∞`.
pub fn series_overpartition(order: usize) -> TruncatedSeries {
    eta_quotient_series(&EtaQuotient::new([(2, 1), (1, -2)]), order)
}

/// `1 / f_1`.
pub fn series_partition(order: usize) -> TruncatedSeries {
    eta_quotient_series(&EtaQuotient::new([(1, -1)]), order)
}

/// `f_ℓ / f_1`.
pub fn series_ell_regular(ell: u64, order: usize) -> TruncatedSeries {
    assert!(ell >= 1, "ell must be positive");
    eta_quotient_series(&EtaQuotient::new([(ell as usize, 1), (1, -1)]), order)
}

// Counts partitions of `n` into allowed parts no larger than `max`, weighting
// each partition by `weight^(number of distinct part sizes)`.
struct Enumerator<F: Fn(u64) -> bool> {
    allowed: F,
    weight: u32,
    memo: HashMap<(u64, u64), BigUint>,
}

impl<F: Fn(u64) -> bool> Enumerator<F> {
    fn new(allowed: F, weight: u32) -> Self {
        Enumerator { allowed, weight, memo: HashMap::new() }
    }

    fn count(&mut self, n: u64, max: u64) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        if max == 0 {
            return BigUint::zero();
        }
        if let Some(v) = self.memo.get(&(n, max)) {
            return v.clone();
        }
        // largest part is `max` (used `c ≥ 1` times) or smaller than `max`
        let mut total = self.count(n, max - 1);
        if (self.allowed)(max) {
            let mut used = max;
            while used <= n {
                total += self.count(n - used, max - 1) * self.weight;
                used += max;
            }
        }
        self.memo.insert((n, max), total.clone());
        total
    }
}

/// Overpartitions of `n` with no part `≡ j (mod k)`.
pub fn enumerate_pjk(spec: RegularOverpartitionSpec, n: u64) -> BigUint {
    Enumerator::new(|p| spec.allows(p), 2).count(n, n)
}

/// All values `enumerate_pjk(spec, 0..=n_max)`, sharing one memo table.
pub fn enumerate_pjk_upto(spec: RegularOverpartitionSpec, n_max: u64) -> Vec<BigUint> {
    let mut e = Enumerator::new(|p| spec.allows(p), 2);
    (0..=n_max).map(|n| e.count(n, n)).collect()
}

pub fn enumerate_overpartition(n: u64) -> BigUint {
    Enumerator::new(|_| true, 2).count(n, n)
}

pub fn enumerate_partition(n: u64) -> BigUint {
    Enumerator::new(|_| true, 1).count(n, n)
}

/// Partitions of `n` with no part divisible by `ell`.
pub fn enumerate_ell_regular(ell: u64, n: u64) -> BigUint {
    assert!(ell >= 1, "ell must be positive");
    Enumerator::new(|p| p % ell != 0, 1).count(n, n)
}

/// One row of a series-versus-enumeration comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRow {
    pub n: u64,
    pub series: BigInt,
    pub oracle: BigInt,
}

impl OracleRow {
    pub fn matches(&self) -> bool {
        self.series == self.oracle
    }
}

/// `p̄_{j,k}(n)` from [`series_pjk`] next to [`enumerate_pjk`] for `n ≤ n_max`.
pub fn compare_with_oracle(spec: RegularOverpartitionSpec, n_max: u64) -> Result<Vec<OracleRow>> {
    let s = series_pjk(spec, n_max as usize)?;
    let counts = enumerate_pjk_upto(spec, n_max);
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(n, c)| OracleRow { n: n as u64, series: s.coeff(n), oracle: BigInt::from(c) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(j: u64, k: u64) -> RegularOverpartitionSpec {
        RegularOverpartitionSpec::new(j, k).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn spec_validation_and_text() {
        assert!(RegularOverpartitionSpec::new(8, 4).is_err());
        assert!(RegularOverpartitionSpec::new(0, 4).is_err());
        assert!(RegularOverpartitionSpec::new(4, 4).is_err());
        assert_eq!("4,8".parse::<RegularOverpartitionSpec>().unwrap(), spec(4, 8));
        assert_eq!(" (6, 12) ".parse::<RegularOverpartitionSpec>().unwrap(), spec(6, 12));
        assert_eq!(spec(8, 16).to_string(), "(8,16)");
        assert!("4;8".parse::<RegularOverpartitionSpec>().is_err());
        assert!(spec(3, 7).eta_form().is_none());
    }

    #[test]
    fn small_values() {
        let s = series_pjk(spec(4, 8), 4).unwrap();
        let got: Vec<BigInt> = (0..=4).map(|i| s.coeff(i)).collect();
        assert_eq!(got, [1, 2, 4, 8, 12].map(BigInt::from));
        assert_eq!(series_overpartition(4).coeff(4), BigInt::from(14));
        assert_eq!(enumerate_pjk(spec(4, 8), 4), big(12));
        assert_eq!(enumerate_pjk(spec(4, 8), 1), big(2));
        assert_eq!(enumerate_pjk(spec(3, 5), 0), big(1));
        assert_eq!(enumerate_overpartition(4), big(14));
        assert_eq!(enumerate_partition(5), big(7));
        assert_eq!(enumerate_ell_regular(2, 5), big(3));
    }

    #[test]
    fn generating_functions_match_oracles() {
        for n in 0..=40u64 {
            let i = n as usize;
            assert_eq!(series_partition(40).coeff(i), enumerate_partition(n).into());
            assert_eq!(series_overpartition(40).coeff(i), enumerate_overpartition(n).into());
            assert_eq!(series_ell_regular(3, 40).coeff(i), enumerate_ell_regular(3, n).into());
        }
        for sp in [spec(4, 8), spec(3, 5), spec(1, 2)] {
            let s = series_pjk(sp, 30).unwrap();
            for (n, e) in enumerate_pjk_upto(sp, 30).into_iter().enumerate() {
                assert_eq!(s.coeff(n), BigInt::from(e), "{sp} n={n}");
            }
        }
    }

    #[test]
    fn overpartitions_are_even() {
        let s = series_overpartition(100);
        assert!((1..=100).all(|n| s.coeff(n) % 2 == BigInt::from(0)));
    }

    #[test]
    fn modular_series_agrees_with_exact() {
        for sp in [spec(4, 8), spec(6, 12), spec(3, 5)] {
            let exact = series_pjk(sp, 120).unwrap();
            assert_eq!(series_pjk_mod(sp, 120, 64).unwrap(), exact.reduce_mod(64).unwrap());
        }
    }
}
