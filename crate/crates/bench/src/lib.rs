//! Inputs shared by the criterion benches.

use ovp_core::{RegularOverpartitionSpec, Ring, TruncatedSeries};

/// `f1^-2 * f2`, the overpartition generating function.
pub fn overpartition_eta() -> ovp_core::EtaQuotient {
    "f1^-2 * f2".parse().expect("valid eta-quotient")
}

pub fn specs() -> [RegularOverpartitionSpec; 3] {
    [(4, 8), (6, 12), (8, 16)].map(|(j, k)| RegularOverpartitionSpec::new(j, k).expect("valid spec"))
}

/// A dense series with constant term 1, invertible in every ring.
pub fn dense(order: usize) -> TruncatedSeries {
    let mut coeffs: Vec<i64> = (0..=order as i64).map(|i| (i * i + 3 * i + 1) % 97 - 48).collect();
    coeffs[0] = 1;
    TruncatedSeries::from_i64s(Ring::Exact, &coeffs)
}
