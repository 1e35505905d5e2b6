//! Small integer helpers shared by the identity checks and the harness.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn mod_pow(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut b = base as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: i64) -> Result<i8> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::NotOddPrime(p));
    }
    let r = mod_pow(a.rem_euclid(p) as u64, (p as u64 - 1) / 2, p as u64);
    Ok(match r {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}
