//! Truncated formal power series over ℤ or ℤ/Mℤ.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of `q^0 ..= q^N`.
//! Every binary operation is defined as the exact result with all terms above
//! the smaller input order discarded, so identities can always be checked
//! "through order N" without hidden loss of precision.
//!
//! Modular series keep reduced representatives in `0..M`. When `M` is a power
//! of two the hot loops run in wrapping `u64` arithmetic and mask at the end,
//! which is exact because `M` divides `2^64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient ring of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Exact,
    Mod(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Exact => f.write_str("exact"),
            Ring::Mod(m) => write!(f, "mod {m}"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Zm {
    m: u64,
}

impl Zm {
    fn new(m: u64) -> Self {
        Zm { m }
    }

    #[inline]
    fn pow2(self) -> bool {
        self.m.is_power_of_two()
    }

    #[inline]
    fn reduce_i64(self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.m as i128) as u64
    }

    fn reduce_bigint(self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.m)).to_u64().expect("reduced residue fits in u64")
    }

    #[inline]
    fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.m as u128) as u64
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.m - (b - a)
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    fn inv(self, a: u64) -> Option<u64> {
        let e = (a as i128).extended_gcd(&(self.m as i128));
        (e.gcd == 1).then(|| e.x.rem_euclid(self.m as i128) as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Mod { m: u64, c: Vec<u64> },
}

/// A power series truncated after `q^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Coeffs,
}

impl TruncatedSeries {
    pub fn zero(ring: Ring, order: usize) -> Self {
        let coeffs = match ring {
            Ring::Exact => Coeffs::Exact(vec![BigInt::zero(); order + 1]),
            Ring::Mod(m) => Coeffs::Mod { m, c: vec![0; order + 1] },
        };
        TruncatedSeries { coeffs }
    }

    pub fn one(ring: Ring, order: usize) -> Self {
        Self::monomial(ring, order, 0, 1)
    }

    /// `coeff · q^exp`, or the zero series if `exp > order`.
    pub fn monomial(ring: Ring, order: usize, exp: usize, coeff: i64) -> Self {
        Self::from_sparse(ring, order, &[(exp, coeff)])
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Exponents above
    /// `order` are dropped; repeated exponents accumulate.
    pub fn from_sparse(ring: Ring, order: usize, terms: &[(usize, i64)]) -> Self {
        let mut s = Self::zero(ring, order);
        match &mut s.coeffs {
            Coeffs::Exact(c) => {
                for &(e, v) in terms.iter().filter(|t| t.0 <= order) {
                    c[e] += v;
                }
            }
            Coeffs::Mod { m, c } => {
                let zm = Zm::new(*m);
                for &(e, v) in terms.iter().filter(|t| t.0 <= order) {
                    c[e] = zm.add(c[e], zm.reduce_i64(v));
                }
            }
        }
        s
    }

    /// Builds a series whose order is `values.len() - 1`.
    ///
    /// # Panics
    /// Panics on an empty slice or a modulus below 2.
    pub fn from_i64s(ring: Ring, values: &[i64]) -> Self {
        assert!(!values.is_empty(), "a series needs at least one coefficient");
        let terms: Vec<_> = values.iter().copied().enumerate().collect();
        if let Ring::Mod(m) = ring {
            assert!(m >= 2, "modulus must be at least 2");
        }
        Self::from_sparse(ring, values.len() - 1, &terms)
    }

    /// # Panics
    /// Panics on an empty vector.
    pub fn from_bigints(values: Vec<BigInt>) -> Self {
        assert!(!values.is_empty(), "a series needs at least one coefficient");
        TruncatedSeries { coeffs: Coeffs::Exact(values) }
    }

    /// Builds a modular series from arbitrary residues, reducing them.
    pub fn from_residues(m: u64, values: Vec<u64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        if values.is_empty() {
            return Err(Error::SeriesSyntax("no coefficients".into()));
        }
        let c = values.into_iter().map(|v| v % m).collect();
        Ok(TruncatedSeries { coeffs: Coeffs::Mod { m, c } })
    }

    pub fn ring(&self) -> Ring {
        match &self.coeffs {
            Coeffs::Exact(_) => Ring::Exact,
            Coeffs::Mod { m, .. } => Ring::Mod(*m),
        }
    }

    pub fn order(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(c) => c.len(),
            Coeffs::Mod { c, .. } => c.len(),
        }
    }

    /// Coefficient of `q^i` as an integer (the reduced representative for
    /// modular series); zero beyond the order.
    pub fn coeff(&self, i: usize) -> BigInt {
        match &self.coeffs {
            Coeffs::Exact(c) => c.get(i).cloned().unwrap_or_default(),
            Coeffs::Mod { c, .. } => BigInt::from(c.get(i).copied().unwrap_or(0)),
        }
    }

    pub fn exact_coeffs(&self) -> Option<&[BigInt]> {
        match &self.coeffs {
            Coeffs::Exact(c) => Some(c),
            Coeffs::Mod { .. } => None,
        }
    }

    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Mod { c, .. } => Some(c),
            Coeffs::Exact(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coeffs::Exact(c) => c.iter().all(Zero::is_zero),
            Coeffs::Mod { c, .. } => c.iter().all(|&x| x == 0),
        }
    }

    fn nonzero_count(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(c) => c.iter().filter(|x| !x.is_zero()).count(),
            Coeffs::Mod { c, .. } => c.iter().filter(|&&x| x != 0).count(),
        }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring(), other.ring()))
        }
    }

    /// Drops every term above `q^order` (no-op if already shorter).
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order()) + 1;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(c) => Coeffs::Exact(c[..n].to_vec()),
            Coeffs::Mod { m, c } => Coeffs::Mod { m: *m, c: c[..n].to_vec() },
        };
        TruncatedSeries { coeffs }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.order().min(other.order()) + 1;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                Coeffs::Exact(a[..n].iter().zip(&b[..n]).map(|(x, y)| x + y).collect())
            }
            (Coeffs::Mod { m, c: a }, Coeffs::Mod { c: b, .. }) => {
                let zm = Zm::new(*m);
                let c = a[..n].iter().zip(&b[..n]).map(|(&x, &y)| zm.add(x, y)).collect();
                Coeffs::Mod { m: *m, c }
            }
            _ => unreachable!(),
        };
        Ok(TruncatedSeries { coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(c) => Coeffs::Exact(c.iter().map(|x| -x).collect()),
            Coeffs::Mod { m, c } => {
                let zm = Zm::new(*m);
                Coeffs::Mod { m: *m, c: c.iter().map(|&x| zm.neg(x)).collect() }
            }
        };
        TruncatedSeries { coeffs }
    }

    /// Multiplies every coefficient by an integer scalar.
    pub fn scale(&self, k: i64) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(c) => Coeffs::Exact(c.iter().map(|x| x * k).collect()),
            Coeffs::Mod { m, c } => {
                let zm = Zm::new(*m);
                let k = zm.reduce_i64(k);
                Coeffs::Mod { m: *m, c: c.iter().map(|&x| zm.mul(x, k)).collect() }
            }
        };
        TruncatedSeries { coeffs }
    }

    /// Multiplication by `q^s`, keeping the order.
    pub fn shift(&self, s: usize) -> Self {
        let n = self.len();
        let coeffs = match &self.coeffs {
            Coeffs::Exact(c) => {
                let mut out = vec![BigInt::zero(); n];
                if s < n {
                    out[s..].clone_from_slice(&c[..n - s]);
                }
                Coeffs::Exact(out)
            }
            Coeffs::Mod { m, c } => {
                let mut out = vec![0; n];
                if s < n {
                    out[s..].copy_from_slice(&c[..n - s]);
                }
                Coeffs::Mod { m: *m, c: out }
            }
        };
        TruncatedSeries { coeffs }
    }

    /// The substitution `q → -q`.
    pub fn negate_variable(&self) -> Self {
        let mut out = self.clone();
        match &mut out.coeffs {
            Coeffs::Exact(c) => {
                for x in c.iter_mut().skip(1).step_by(2) {
                    *x = -&*x;
                }
            }
            Coeffs::Mod { m, c } => {
                let zm = Zm::new(*m);
                for x in c.iter_mut().skip(1).step_by(2) {
                    *x = zm.neg(*x);
                }
            }
        }
        out
    }

    /// Truncated Cauchy product. The loop runs over the nonzero terms of the
    /// sparser factor, so multiplying by an Euler product costs
    /// `O(N·√N)` rather than `O(N²)`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let order = self.order().min(other.order());
        let (sparse, dense) = if self.nonzero_count() <= other.nonzero_count() { (self, other) } else { (other, self) };
        let n = order + 1;
        let coeffs = match (&sparse.coeffs, &dense.coeffs) {
            (Coeffs::Exact(s), Coeffs::Exact(d)) => {
                let mut out = vec![BigInt::zero(); n];
                for (i, si) in s[..n].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (j, dj) in d[..n - i].iter().enumerate() {
                        if !dj.is_zero() {
                            out[i + j] += si * dj;
                        }
                    }
                }
                Coeffs::Exact(out)
            }
            (Coeffs::Mod { m, c: s }, Coeffs::Mod { c: d, .. }) => {
                let zm = Zm::new(*m);
                let mut out = vec![0u64; n];
                if zm.pow2() {
                    for (i, &si) in s[..n].iter().enumerate().filter(|(_, &x)| x != 0) {
                        for (o, &dj) in out[i..].iter_mut().zip(&d[..n - i]) {
                            *o = o.wrapping_add(si.wrapping_mul(dj));
                        }
                    }
                    let mask = m - 1;
                    out.iter_mut().for_each(|x| *x &= mask);
                } else {
                    for (i, &si) in s[..n].iter().enumerate().filter(|(_, &x)| x != 0) {
                        for (o, &dj) in out[i..].iter_mut().zip(&d[..n - i]) {
                            *o = zm.add(*o, zm.mul(si, dj));
                        }
                    }
                }
                Coeffs::Mod { m: *m, c: out }
            }
            _ => unreachable!(),
        };
        Ok(TruncatedSeries { coeffs })
    }

    /// `self / divisor`, truncated to the smaller order. Uses the recurrence
    /// `out[n] = c0⁻¹·(self[n] − Σ_{i≥1} divisor[i]·out[n−i])`, iterating only
    /// over the nonzero terms of the divisor.
    pub fn checked_div(&self, divisor: &Self) -> Result<Self> {
        self.same_ring(divisor)?;
        let n = self.order().min(divisor.order()) + 1;
        let coeffs = match (&self.coeffs, &divisor.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                let c0 = &b[0];
                if !(c0.is_one() || (-c0).is_one()) {
                    return Err(Error::NonUnit(c0.to_string(), Ring::Exact));
                }
                let terms: Vec<(usize, &BigInt)> =
                    b[1..n].iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i + 1, x)).collect();
                let mut out: Vec<BigInt> = Vec::with_capacity(n);
                for k in 0..n {
                    let mut acc = a[k].clone();
                    for &(i, bi) in terms.iter().take_while(|t| t.0 <= k) {
                        acc -= bi * &out[k - i];
                    }
                    // c0 = ±1 is its own inverse
                    if c0.is_negative() {
                        acc = -acc;
                    }
                    out.push(acc);
                }
                Coeffs::Exact(out)
            }
            (Coeffs::Mod { m, c: a }, Coeffs::Mod { c: b, .. }) => {
                let zm = Zm::new(*m);
                let inv0 = zm.inv(b[0]).ok_or_else(|| Error::NonUnit(b[0].to_string(), Ring::Mod(*m)))?;
                let terms: Vec<(usize, u64)> =
                    b[1..n].iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i + 1, x)).collect();
                let mut out = vec![0u64; n];
                if zm.pow2() {
                    let mask = m - 1;
                    for k in 0..n {
                        let mut acc = a[k];
                        for &(i, bi) in terms.iter().take_while(|t| t.0 <= k) {
                            acc = acc.wrapping_sub(bi.wrapping_mul(out[k - i]));
                        }
                        out[k] = acc.wrapping_mul(inv0) & mask;
                    }
                } else {
                    for k in 0..n {
                        let mut acc = a[k];
                        for &(i, bi) in terms.iter().take_while(|t| t.0 <= k) {
                            acc = zm.sub(acc, zm.mul(bi, out[k - i]));
                        }
                        out[k] = zm.mul(acc, inv0);
                    }
                }
                Coeffs::Mod { m: *m, c: out }
            }
            _ => unreachable!(),
        };
        Ok(TruncatedSeries { coeffs })
    }

    /// Multiplicative inverse through the same order. The constant term must
    /// be ±1 over ℤ, or coprime to `M` over ℤ/Mℤ.
    pub fn inverse(&self) -> Result<Self> {
        Self::one(self.ring(), self.order()).checked_div(self)
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.ring(), self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// The substitution `q → q^t`; the order is unchanged.
    ///
    /// # Panics
    /// Panics if `t == 0`.
    pub fn inflate(&self, t: usize) -> Self {
        assert!(t >= 1, "inflation factor must be positive");
        let mut out = Self::zero(self.ring(), self.order());
        let n = self.len();
        match (&mut out.coeffs, &self.coeffs) {
            (Coeffs::Exact(o), Coeffs::Exact(c)) => {
                for (i, x) in c.iter().enumerate().take_while(|(i, _)| i * t < n) {
                    o[i * t] = x.clone();
                }
            }
            (Coeffs::Mod { c: o, .. }, Coeffs::Mod { c, .. }) => {
                for (i, &x) in c.iter().enumerate().take_while(|(i, _)| i * t < n) {
                    o[i * t] = x;
                }
            }
            _ => unreachable!(),
        }
        out
    }

    /// Coefficients at `m·n + r`, as a series in `q^n`.
    ///
    /// If `r` exceeds the order the result is the zero series of order 0.
    pub fn extract_progression(&self, m: usize, r: usize) -> Result<Self> {
        if r >= m {
            return Err(Error::ResidueOutOfRange { step: m, residue: r });
        }
        if r > self.order() {
            return Ok(Self::zero(self.ring(), 0));
        }
        let coeffs = match &self.coeffs {
            Coeffs::Exact(c) => Coeffs::Exact(c[r..].iter().step_by(m).cloned().collect()),
            Coeffs::Mod { m: modulus, c } => {
                Coeffs::Mod { m: *modulus, c: c[r..].iter().step_by(m).copied().collect() }
            }
        };
        Ok(TruncatedSeries { coeffs })
    }

    /// Reduces into ℤ/Mℤ. A modular series may be reduced further when the new
    /// modulus divides the old one.
    pub fn reduce_mod(&self, m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        let zm = Zm::new(m);
        let c = match &self.coeffs {
            Coeffs::Exact(c) => c.iter().map(|x| zm.reduce_bigint(x)).collect(),
            Coeffs::Mod { m: old, c } if old % m == 0 => c.iter().map(|x| x % m).collect(),
            Coeffs::Mod { m: old, .. } => {
                return Err(Error::IncompatibleReduction { from: Ring::Mod(*old), to: Ring::Mod(m) })
            }
        };
        Ok(TruncatedSeries { coeffs: Coeffs::Mod { m, c } })
    }

    /// Smallest exponent where the two series differ, comparing through the
    /// smaller order. Series over different rings differ at `q^0` by fiat.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        if self.ring() != other.ring() {
            return Some(0);
        }
        let n = self.order().min(other.order()) + 1;
        match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => (0..n).find(|&i| a[i] != b[i]),
            (Coeffs::Mod { c: a, .. }, Coeffs::Mod { c: b, .. }) => (0..n).find(|&i| a[i] != b[i]),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for TruncatedSeries {
    /// `exact order N; c0 c1 ...` or `mod M order N; c0 c1 ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} order {};", self.ring(), self.order())?;
        match &self.coeffs {
            Coeffs::Exact(c) => c.iter().try_for_each(|x| write!(f, " {x}")),
            Coeffs::Mod { c, .. } => c.iter().try_for_each(|x| write!(f, " {x}")),
        }
    }
}

impl FromStr for TruncatedSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::SeriesSyntax(format!("{why} in {s:?}"));
        let (head, body) = s.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        let (ring, rest) = match head.as_slice() {
            ["exact", rest @ ..] => (Ring::Exact, rest),
            ["mod", m, rest @ ..] => {
                let m: u64 = m.parse().map_err(|_| bad("bad modulus"))?;
                if m < 2 {
                    return Err(Error::InvalidModulus(m));
                }
                (Ring::Mod(m), rest)
            }
            _ => return Err(bad("expected 'exact' or 'mod M'")),
        };
        let order: usize = match rest {
            ["order", n] => n.parse().map_err(|_| bad("bad order"))?,
            _ => return Err(bad("expected 'order N'")),
        };
        let values: Vec<BigInt> = body
            .split_whitespace()
            .map(|t| t.parse::<BigInt>().map_err(|_| bad("bad coefficient")))
            .collect::<Result<_>>()?;
        if values.len() != order + 1 {
            return Err(bad("coefficient count does not match order"));
        }
        match ring {
            Ring::Exact => Ok(TruncatedSeries::from_bigints(values)),
            Ring::Mod(m) => {
                let c = values
                    .iter()
                    .map(|v| v.to_u64().filter(|&r| r < m))
                    .collect::<Option<Vec<u64>>>()
                    .ok_or_else(|| bad("coefficients must be reduced representatives"))?;
                TruncatedSeries::from_residues(m, c)
            }
        }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// # Panics
    /// Panics on a ring mismatch; use [`TruncatedSeries::checked_add`] to handle it.
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.checked_add(rhs).expect("series ring mismatch")
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.checked_sub(rhs).expect("series ring mismatch")
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.checked_mul(rhs).expect("series ring mismatch")
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::neg(self)
    }
}
