//! Named q-series identities and binomial congruences, each checkable to any
//! truncation order.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::products::{
    euler_f, f1_cubed, p_product, p_series, septic_c, septic_d, septic_e, theta, theta_minus, EtaQuotient, EtaTerm,
    ThetaSpec,
};
use crate::series::{Ring, TruncatedSeries};

type Builder = Arc<dyn Fn(usize) -> TruncatedSeries + Send + Sync>;

/// How one side of an identity is built.
#[derive(Clone)]
pub enum Recipe {
    /// Sum of `scalar · q^shift · eta-quotient` terms.
    Terms(Vec<EtaTerm>),
    /// Anything else, as an exact-integer builder.
    Custom(Builder),
}

impl Recipe {
    fn terms(src: &[&str]) -> Recipe {
        Recipe::Terms(src.iter().map(|s| s.parse().expect("built-in term")).collect())
    }

    fn custom(f: impl Fn(usize) -> TruncatedSeries + Send + Sync + 'static) -> Recipe {
        Recipe::Custom(Arc::new(f))
    }

    pub fn build(&self, order: usize) -> TruncatedSeries {
        match self {
            Recipe::Terms(ts) => ts
                .iter()
                .map(|t| t.series(order, Ring::Exact))
                .fold(TruncatedSeries::zero(Ring::Exact, order), |acc, s| &acc + &s),
            Recipe::Custom(f) => f(order),
        }
    }
}

impl fmt::Debug for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Terms(ts) => {
                let parts: Vec<String> = ts.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" + "))
            }
            Recipe::Custom(_) => f.write_str("<custom>"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityEntry {
    pub id: String,
    pub summary: String,
    pub lhs: Recipe,
    pub rhs: Recipe,
    /// Compare after reduction mod this value; exact equality when absent.
    pub modulus: Option<u64>,
    pub default_order: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub equal: bool,
    pub first_mismatch: Option<usize>,
}

impl IdentityEntry {
    pub fn sides(&self, order: usize) -> (TruncatedSeries, TruncatedSeries) {
        let (l, r) = (self.lhs.build(order), self.rhs.build(order));
        match self.modulus {
            Some(m) => (l.reduce_mod(m).expect("catalog modulus"), r.reduce_mod(m).expect("catalog modulus")),
            None => (l, r),
        }
    }

    pub fn verify(&self, order: usize) -> IdentityCheck {
        let (l, r) = self.sides(order);
        let first_mismatch = l.first_mismatch(&r);
        IdentityCheck { equal: first_mismatch.is_none(), first_mismatch }
    }
}

fn entry(id: &str, summary: &str, lhs: Recipe, rhs: Recipe, modulus: Option<u64>, order: usize) -> IdentityEntry {
    IdentityEntry { id: id.into(), summary: summary.into(), lhs, rhs, modulus, default_order: order }
}

fn eta(src: &str, order: usize) -> TruncatedSeries {
    let t: EtaTerm = src.parse().expect("built-in term");
    t.series(order, Ring::Exact)
}

/// `f_1 = f_25 (R(q⁵) − q − q² R(q⁵)⁻¹)`, right-hand side.
pub fn five_dissection_rhs(order: usize) -> TruncatedSeries {
    let r5 = theta(ThetaSpec::RQuotient, order).inflate(5);
    let q = TruncatedSeries::monomial(Ring::Exact, order, 1, 1);
    let inner = &(&r5 - &q) - &r5.inverse().expect("R has constant term 1").shift(2);
    &euler_f(25, order) * &inner
}

/// `f_1 = f_49 (E/C − q D/E − q² + q⁵ C/D)` with `C, D, E` taken at `q⁷`.
pub fn seven_dissection_rhs(order: usize) -> TruncatedSeries {
    let c = septic_c(order).inflate(7);
    let d = septic_d(order).inflate(7);
    let e = septic_e(order).inflate(7);
    let div = |a: &TruncatedSeries, b: &TruncatedSeries| a.checked_div(b).expect("theta factors have constant term 1");
    let inner = &(&(&div(&e, &c) - &div(&d, &e).shift(1)) - &TruncatedSeries::monomial(Ring::Exact, order, 2, 1))
        + &div(&c, &d).shift(5);
    &euler_f(49, order) * &inner
}

fn build_database() -> Vec<IdentityEntry> {
    let mut db = vec![
        entry(
            "eq2.1",
            "1/f1^2 = f8^5/(f2^5 f16^2) + 2q f4^2 f16^2/(f2^5 f8)",
            Recipe::terms(&["f1^-2"]),
            Recipe::terms(&["f8^5 * f2^-5 * f16^-2", "2 * q * f4^2 * f16^2 * f2^-5 * f8^-1"]),
            None,
            200,
        ),
        entry(
            "eq2.2",
            "1/f1^4 = f4^14/(f2^14 f8^4) + 4q f4^2 f8^4/f2^10",
            Recipe::terms(&["f1^-4"]),
            Recipe::terms(&["f4^14 * f2^-14 * f8^-4", "4 * q * f4^2 * f8^4 * f2^-10"]),
            None,
            200,
        ),
        entry(
            "eq2.3",
            "f1^2 = f2 f8^5/(f4^2 f16^2) - 2q f2 f16^2/f8",
            Recipe::terms(&["f1^2"]),
            Recipe::terms(&["f2 * f8^5 * f4^-2 * f16^-2", "-2 * q * f2 * f16^2 * f8^-1"]),
            None,
            200,
        ),
        entry(
            "eq2.4",
            "f3^3/f1 = f4^3 f6^2/(f2^2 f12) + q f12^3/f4",
            Recipe::terms(&["f3^3 * f1^-1"]),
            Recipe::terms(&["f4^3 * f6^2 * f2^-2 * f12^-1", "q * f12^3 * f4^-1"]),
            None,
            200,
        ),
        entry(
            "eq2.5",
            "f2/f1^2 = f6^4 f9^6/(f3^8 f18^3) + 2q f6^3 f9^3/f3^7 + 4q^2 f6^2 f18^3/f3^6",
            Recipe::terms(&["f2 * f1^-2"]),
            Recipe::terms(&[
                "f6^4 * f9^6 * f3^-8 * f18^-3",
                "2 * q * f6^3 * f9^3 * f3^-7",
                "4 * q^2 * f6^2 * f18^3 * f3^-6",
            ]),
            None,
            200,
        ),
        entry(
            "eq2.6",
            "f1^2/f2 = f9^2/f18 - 2q f3 f18^2/(f6 f9)",
            Recipe::terms(&["f1^2 * f2^-1"]),
            Recipe::terms(&["f9^2 * f18^-1", "-2 * q * f3 * f18^2 * f6^-1 * f9^-1"]),
            None,
            200,
        ),
        entry(
            "eq2.3_from_eq2.1",
            "f2^6/f4^2 times the q -> -q image of the 1/f1^2 dissection equals the f1^2 dissection",
            Recipe::custom(|n| {
                let rhs1 = &eta("f8^5 * f2^-5 * f16^-2", n) + &eta("2 * q * f4^2 * f16^2 * f2^-5 * f8^-1", n);
                &eta("f2^6 * f4^-2", n) * &rhs1.negate_variable()
            }),
            Recipe::terms(&["f2 * f8^5 * f4^-2 * f16^-2", "-2 * q * f2 * f16^2 * f8^-1"]),
            None,
            200,
        ),
        entry(
            "f1_cubed_3_dissection",
            "f1^3 = P(q^3) - 3q f9^3",
            Recipe::terms(&["f1^3"]),
            Recipe::custom(|n| &p_series(n).inflate(3) - &eta("3 * q * f9^3", n)),
            None,
            200,
        ),
        entry(
            "p_series_product_form",
            "sum of (-1)^m (6m+1) q^(m(3m+1)/2) = f(-q) phi(q) phi(q^3) + 4q f(-q) psi(q^2) psi(q^6)",
            Recipe::custom(p_series),
            Recipe::custom(p_product),
            None,
            200,
        ),
        entry(
            "f1_cubed_triangular",
            "f1^3 = sum of (-1)^n (2n+1) q^(n(n+1)/2)",
            Recipe::terms(&["f1^3"]),
            Recipe::custom(f1_cubed),
            None,
            200,
        ),
        entry(
            "f1_5_dissection",
            "f1 = f25 (R(q^5) - q - q^2/R(q^5))",
            Recipe::terms(&["f1"]),
            Recipe::custom(five_dissection_rhs),
            None,
            300,
        ),
        entry(
            "f1_7_dissection",
            "f1 = f49 (E/C - q D/E - q^2 + q^5 C/D) at q^7",
            Recipe::terms(&["f1"]),
            Recipe::custom(seven_dissection_rhs),
            None,
            300,
        ),
    ];
    for p in [5u64, 7, 11, 13] {
        db.push(entry(
            &format!("f1_p_dissection_p{p}"),
            &format!("p-dissection of f1 for p = {p}"),
            Recipe::terms(&["f1"]),
            Recipe::custom(move |n| p_dissection_rhs(p, n).expect("admissible prime")),
            None,
            300,
        ));
    }
    for (s, modulus) in [(1u32, 2u64), (2, 4), (3, 8), (4, 16)] {
        let e = 1i64 << s;
        for k in 1..=3usize {
            for m in 1..=3i64 {
                db.push(entry(
                    &format!("fp{s}_k{k}_m{m}"),
                    &format!("f{k}^{} = f{}^{} (mod {modulus})", e * m, 2 * k, e * m / 2),
                    Recipe::Terms(vec![EtaTerm::new(1, 0, EtaQuotient::new([(k, e * m)]))]),
                    Recipe::Terms(vec![EtaTerm::new(1, 0, EtaQuotient::new([(2 * k, e * m / 2)]))]),
                    Some(modulus),
                    120,
                ));
            }
        }
    }
    db
}

pub fn database() -> &'static [IdentityEntry] {
    static DB: OnceLock<Vec<IdentityEntry>> = OnceLock::new();
    DB.get_or_init(build_database)
}

pub fn lookup(id: &str) -> Result<&'static IdentityEntry> {
    database().iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

pub fn verify_identity(id: &str, order: usize) -> Result<IdentityCheck> {
    Ok(lookup(id)?.verify(order))
}

fn admissible_prime(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::NotAdmissiblePrime(p));
    }
    Ok(())
}

/// `(±p − 1)/6`: `(p−1)/6` when `p ≡ 1 (mod 6)`, else `(−p−1)/6`.
pub fn exclusion_index(p: u64) -> Result<i64> {
    admissible_prime(p)?;
    let p = p as i64;
    Ok(if p % 6 == 1 { (p - 1) / 6 } else { (-p - 1) / 6 })
}

/// The `k` in `[−(p−1)/2, (p−1)/2]` that carry a theta summand.
pub fn admissible_ks(p: u64) -> Result<Vec<i64>> {
    let skip = exclusion_index(p)?;
    let h = (p as i64 - 1) / 2;
    Ok((-h..=h).filter(|&k| k != skip).collect())
}

/// The p-dissection sum
/// `Σ_k (−1)^k q^{(3k²+k)/2} f(−q^{(3p²+(6k+1)p)/2}, −q^{(3p²−(6k+1)p)/2})
///  + (−1)^{(±p−1)/6} q^{(p²−1)/24} f_{p²}`.
pub fn p_dissection_rhs(p: u64, order: usize) -> Result<TruncatedSeries> {
    let skip = exclusion_index(p)?;
    let pi = p as i64;
    let mut acc = TruncatedSeries::zero(Ring::Exact, order);
    for k in admissible_ks(p)? {
        let shift = ((3 * k * k + k) / 2) as usize;
        if shift > order {
            continue;
        }
        let x = (3 * pi * pi + (6 * k + 1) * pi) / 2;
        let y = (3 * pi * pi - (6 * k + 1) * pi) / 2;
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        let term = theta_minus(x as u64, y as u64, order).shift(shift).scale(sign);
        acc = &acc + &term;
    }
    let sign = if skip.rem_euclid(2) == 0 { 1 } else { -1 };
    let tail = euler_f((p * p) as usize, order).shift(((p * p - 1) / 24) as usize).scale(sign);
    Ok(&acc + &tail)
}

/// Checks `(3k²+k)/2 ≢ (p²−1)/24 (mod p)` for every admissible `k`.
pub fn p_dissection_residue_condition(p: u64) -> Result<bool> {
    let pi = p as i64;
    let target = ((pi * pi - 1) / 24).rem_euclid(pi);
    Ok(admissible_ks(p)?.iter().all(|&k| ((3 * k * k + k) / 2).rem_euclid(pi) != target))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PDissectionCheck {
    pub equal: bool,
    pub first_mismatch: Option<usize>,
    pub residue_condition: bool,
}

pub fn verify_p_dissection(p: u64, order: usize) -> Result<PDissectionCheck> {
    let rhs = p_dissection_rhs(p, order)?;
    let first_mismatch = euler_f(1, order).first_mismatch(&rhs);
    Ok(PDissectionCheck {
        equal: first_mismatch.is_none(),
        first_mismatch,
        residue_condition: p_dissection_residue_condition(p)?,
    })
}

/// `{ n(n+1)/2 mod p : 0 ≤ n < p }`, the residues mod `p` that can carry
/// exponents of `f_1³`.
pub fn triangular_split_support(p: u64) -> BTreeSet<u64> {
    (0..p).map(|n| (n * (n + 1) / 2) % p).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularSplitCheck {
    pub support: BTreeSet<u64>,
    /// Residue classes outside the support whose extracted series is nonzero.
    pub nonzero_outside: Vec<u64>,
    /// The class of `n` with `2n+1 ≡ 0 (mod p)`.
    pub divisible_class: u64,
    pub divisible: bool,
}

impl TriangularSplitCheck {
    pub fn holds(&self) -> bool {
        self.nonzero_outside.is_empty() && self.divisible
    }
}

/// Splits `f_1³` into its `p` progressions through `q^order` and checks the
/// support and divisibility claims. `p` must be an odd prime.
pub fn verify_triangular_split(p: u64, order: usize) -> Result<TriangularSplitCheck> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p as i64));
    }
    let support = triangular_split_support(p);
    let cube = f1_cubed(order);
    let part = |r: u64| cube.extract_progression(p as usize, r as usize).expect("r < p");
    let nonzero_outside = (0..p).filter(|r| !support.contains(r) && !part(*r).is_zero()).collect();
    let n = (p - 1) / 2;
    let divisible_class = (n * (n + 1) / 2) % p;
    let modp = part(divisible_class).reduce_mod(p).expect("p >= 3");
    Ok(TriangularSplitCheck { support, nonzero_outside, divisible_class, divisible: modp.is_zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn database_ids_are_unique() {
        let ids: BTreeSet<&str> = database().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids.len(), database().len());
        assert_eq!(database().iter().filter(|e| e.id.starts_with("fp")).count(), 36);
    }

    #[test]
    fn spot_identities() {
        for id in ["eq2.1", "fp1_k1_m1", "eq2.4"] {
            assert_eq!(verify_identity(id, 100).unwrap(), IdentityCheck { equal: true, first_mismatch: None });
        }
        assert_eq!(verify_identity("eq9.9", 10), Err(Error::UnknownIdentity("eq9.9".into())));
    }

    #[test]
    fn corrupted_identity_reports_first_mismatch() {
        let mut e = lookup("eq2.4").unwrap().clone();
        e.rhs = Recipe::terms(&["f4^3 * f6^2 * f2^-2 * f12^-1", "q^2 * f12^3 * f4^-1"]);
        let check = e.verify(50);
        assert!(!check.equal);
        assert_eq!(check.first_mismatch, Some(1));
    }

    #[test]
    fn fp_congruence_fails_one_level_up() {
        // f1^2 and f2 agree mod 2 but not mod 4
        let l = eta("f1^2", 20).reduce_mod(4).unwrap();
        let r = eta("f2", 20).reduce_mod(4).unwrap();
        assert_eq!(l.first_mismatch(&r), Some(1));
    }

    #[test]
    fn exclusion_indices() {
        assert_eq!(exclusion_index(5), Ok(-1));
        assert_eq!(exclusion_index(7), Ok(1));
        assert_eq!(exclusion_index(11), Ok(-2));
        assert_eq!(exclusion_index(13), Ok(2));
        assert_eq!(admissible_ks(5).unwrap(), [-2, 0, 1, 2]);
        assert!(exclusion_index(9).is_err());
        assert!(exclusion_index(3).is_err());
    }

    #[test]
    fn p_dissection_small() {
        for (p, n) in [(5, 60), (7, 80)] {
            let c = verify_p_dissection(p, n).unwrap();
            assert!(c.equal && c.residue_condition, "p={p}: {c:?}");
        }
    }

    // the excluded index is the one that hits the forbidden residue
    #[test]
    fn excluded_index_hits_target_residue() {
        for p in [5i64, 7, 11, 13, 17, 19, 23] {
            let k = exclusion_index(p as u64).unwrap();
            assert_eq!(((3 * k * k + k) / 2).rem_euclid(p), ((p * p - 1) / 24) % p);
        }
    }

    #[test]
    fn triangular_supports() {
        let s = |p| triangular_split_support(p).into_iter().collect::<Vec<_>>();
        assert_eq!(s(5), [0, 1, 3]);
        assert_eq!(s(7), [0, 1, 3, 6]);
        assert_eq!(s(11), [0, 1, 3, 4, 6, 10]);
        for p in [5, 7, 11, 13] {
            assert!(verify_triangular_split(p, 300).unwrap().holds());
        }
        assert!(verify_triangular_split(9, 10).is_err());
    }

    #[test]
    fn f1_cubed_three_components() {
        let n = 240;
        let cube = f1_cubed(n);
        assert!(cube.extract_progression(3, 2).unwrap().is_zero());
        let r1 = cube.extract_progression(3, 1).unwrap();
        assert_eq!(r1, eta("-3 * f3^3", r1.order()));
        let r0 = cube.extract_progression(3, 0).unwrap();
        assert_eq!(r0, p_product(r0.order()));
        assert_eq!(r0.coeff(1), BigInt::from(5));
    }
}
