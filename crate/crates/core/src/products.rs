//! Named series: Euler products `f_k`, Pochhammer products, Ramanujan theta
//! functions and the eta-quotients built from them.
//!
//! Every constructor returns an exact-integer series. Modular work reduces
//! the Euler factors first and then multiplies in ℤ/Mℤ (see
//! [`eta_quotient_series_mod`]), which keeps large orders cheap.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Ring, TruncatedSeries};

/// Sign attached to a product factor or theta argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn pow(self, e: i64) -> i64 {
        if self == Sign::Minus && e.rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    }
}

/// Exponents `k·j(3j−1)/2` of `f_k = Σ_j (−1)^j q^{k·j(3j−1)/2}` up to `order`.
pub fn pentagonal_terms(k: usize, order: usize) -> Vec<(usize, i64)> {
    assert!(k >= 1, "Euler product step must be positive");
    let mut terms = vec![(0, 1)];
    for j in 1usize.. {
        let sign = if j % 2 == 1 { -1 } else { 1 };
        let lo = k * j * (3 * j - 1) / 2;
        if lo > order {
            break;
        }
        terms.push((lo, sign));
        let hi = k * j * (3 * j + 1) / 2;
        if hi <= order {
            terms.push((hi, sign));
        }
    }
    terms.sort_unstable();
    terms
}

/// `f_k = (q^k; q^k)_∞` through `q^order`, via the pentagonal number theorem.
pub fn euler_f(k: usize, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_sparse(Ring::Exact, order, &pentagonal_terms(k, order))
}

// Multiplies `s` in place by (1 + sign·q^m).
fn mul_binomial(s: &mut TruncatedSeries, m: usize, sign: Sign) {
    let factor = TruncatedSeries::from_sparse(s.ring(), s.order(), &[(0, 1), (m, sign.value())]);
    *s = &*s * &factor;
}

/// `∏_{i≥0}(1 + sign·q^{a+ic})`: `Sign::Minus` gives `(q^a; q^c)_∞`, `Sign::Plus`
/// gives `(−q^a; q^c)_∞`.
///
/// # Panics
/// Panics if `a` or `c` is zero.
pub fn pochhammer(a: usize, c: usize, sign: Sign, order: usize) -> TruncatedSeries {
    assert!(a >= 1 && c >= 1, "Pochhammer parameters must be positive");
    let mut s = TruncatedSeries::one(Ring::Exact, order);
    let mut m = a;
    while m <= order {
        mul_binomial(&mut s, m, sign);
        m += c;
    }
    s
}

/// Which theta-type series to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaSpec {
    /// Ramanujan's `f(±q^a, ±q^b) = Σ_{n∈ℤ} (±q^a)^{n(n+1)/2} (±q^b)^{n(n−1)/2}`.
    GeneralF { a: u64, b: u64, sign_a: Sign, sign_b: Sign },
    /// `φ(q) = Σ_{n∈ℤ} q^{n²}`.
    Phi,
    /// `ψ(q) = Σ_{n≥0} q^{n(n+1)/2}`.
    Psi,
    /// `R(q) = (q²;q⁵)(q³;q⁵) / ((q;q⁵)(q⁴;q⁵))`.
    RQuotient,
}

impl ThetaSpec {
    /// Checked constructor for `f(sign_a·q^a, sign_b·q^b)`. The weights must
    /// not both vanish, which keeps every exponent non-negative and strictly
    /// increasing in `|n|`.
    pub fn general_f(a: u64, b: u64, sign_a: Sign, sign_b: Sign) -> Result<Self> {
        if a + b == 0 {
            return Err(Error::InvalidTheta("f(a, b) needs a + b > 0".into()));
        }
        Ok(ThetaSpec::GeneralF { a, b, sign_a, sign_b })
    }
}

fn bilateral_f(a: u64, b: u64, sign_a: Sign, sign_b: Sign, order: usize) -> TruncatedSeries {
    let exponent = |n: i64| -> i128 {
        let (n, a, b) = (n as i128, a as i128, b as i128);
        a * n * (n + 1) / 2 + b * n * (n - 1) / 2
    };
    let sign = |n: i64| sign_a.pow(n * (n + 1) / 2) * sign_b.pow(n * (n - 1) / 2);
    let mut terms = Vec::new();
    for dir in [1i64, -1] {
        let mut n = if dir == 1 { 0 } else { -1 };
        // the exponent is non-decreasing in |n| on each side of zero
        while exponent(n) <= order as i128 {
            terms.push((exponent(n) as usize, sign(n)));
            n += dir;
        }
    }
    TruncatedSeries::from_sparse(Ring::Exact, order, &terms)
}

pub fn theta(spec: ThetaSpec, order: usize) -> TruncatedSeries {
    match spec {
        ThetaSpec::GeneralF { a, b, sign_a, sign_b } => bilateral_f(a, b, sign_a, sign_b, order),
        ThetaSpec::Phi => {
            let mut terms = vec![(0, 1)];
            terms.extend((1..).map(|n: usize| n * n).take_while(|&e| e <= order).map(|e| (e, 2)));
            TruncatedSeries::from_sparse(Ring::Exact, order, &terms)
        }
        ThetaSpec::Psi => {
            let terms: Vec<_> =
                (0..).map(|n: usize| n * (n + 1) / 2).take_while(|&e| e <= order).map(|e| (e, 1)).collect();
            TruncatedSeries::from_sparse(Ring::Exact, order, &terms)
        }
        ThetaSpec::RQuotient => {
            let num = &pochhammer(2, 5, Sign::Minus, order) * &pochhammer(3, 5, Sign::Minus, order);
            let den = &pochhammer(1, 5, Sign::Minus, order) * &pochhammer(4, 5, Sign::Minus, order);
            num.checked_div(&den).expect("Pochhammer products have constant term 1")
        }
    }
}

/// `f(−q^x, −q^y)`, the building block of the p- and 7-dissections of `f_1`.
pub fn theta_minus(x: u64, y: u64, order: usize) -> TruncatedSeries {
    bilateral_f(x, y, Sign::Minus, Sign::Minus, order)
}

/// `f_1³ = Σ_{n≥0} (−1)^n (2n+1) q^{n(n+1)/2}`.
pub fn f1_cubed(order: usize) -> TruncatedSeries {
    let terms: Vec<_> = (0..)
        .map(|n: usize| (n * (n + 1) / 2, n))
        .take_while(|&(e, _)| e <= order)
        .map(|(e, n)| (e, if n % 2 == 0 { 1 } else { -1 } * (2 * n as i64 + 1)))
        .collect();
    TruncatedSeries::from_sparse(Ring::Exact, order, &terms)
}

/// `P(q) = Σ_{m∈ℤ} (−1)^m (6m+1) q^{m(3m+1)/2}`, the non-`q f_9³` part of the
/// 3-dissection of `f_1³` (before `q → q³`).
pub fn p_series(order: usize) -> TruncatedSeries {
    let mut terms = Vec::new();
    for dir in [1i64, -1] {
        let mut m = if dir == 1 { 0i64 } else { -1 };
        loop {
            let e = m * (3 * m + 1) / 2;
            if e as usize > order {
                break;
            }
            let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
            terms.push((e as usize, sign * (6 * m + 1)));
            m += dir;
        }
    }
    TruncatedSeries::from_sparse(Ring::Exact, order, &terms)
}

/// The theta-product form `f(−q)φ(q)φ(q³) + 4q f(−q)ψ(q²)ψ(q⁶)` of `P(q)`.
pub fn p_product(order: usize) -> TruncatedSeries {
    let f = euler_f(1, order);
    let phi = theta(ThetaSpec::Phi, order);
    let psi = theta(ThetaSpec::Psi, order);
    let first = &(&f * &phi) * &phi.inflate(3);
    let second = &(&f * &psi.inflate(2)) * &psi.inflate(6);
    &first + &second.scale(4).shift(1)
}

/// `C(q) = f(−q, −q⁶)`.
pub fn septic_c(order: usize) -> TruncatedSeries {
    theta_minus(1, 6, order)
}

/// `D(q) = f(−q³, −q⁴)`.
pub fn septic_d(order: usize) -> TruncatedSeries {
    theta_minus(3, 4, order)
}

/// `E(q) = f(−q², −q⁵)`.
pub fn septic_e(order: usize) -> TruncatedSeries {
    theta_minus(2, 5, order)
}

/// Formal product `∏ f_k^{e_k}`, stored as a step → exponent map without
/// zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    factors: BTreeMap<usize, i64>,
}

impl EtaQuotient {
    /// Merges repeated steps and drops zero exponents.
    ///
    /// # Panics
    /// Panics on a zero step.
    pub fn new(pairs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut factors = BTreeMap::new();
        for (k, e) in pairs {
            assert!(k >= 1, "eta-quotient steps start at 1");
            *factors.entry(k).or_insert(0) += e;
        }
        factors.retain(|_, e| *e != 0);
        EtaQuotient { factors }
    }

    pub fn one() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &BTreeMap<usize, i64> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn times(&self, other: &EtaQuotient) -> EtaQuotient {
        EtaQuotient::new(self.factors.iter().chain(&other.factors).map(|(&k, &e)| (k, e)))
    }

    /// Replaces every `f_k` by `f_{t·k}` (the substitution `q → q^t`).
    pub fn inflate(&self, t: usize) -> EtaQuotient {
        EtaQuotient::new(self.factors.iter().map(|(&k, &e)| (k * t, e)))
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(|(k, e)| format!("f{k}^{e}")).collect();
        f.write_str(&parts.join(" * "))
    }
}

fn parse_factor(input: &str, tok: &str) -> Result<(usize, i64)> {
    let bad = |reason: &str| Error::EtaSyntax { input: input.to_string(), reason: reason.to_string() };
    let body = tok.strip_prefix('f').ok_or_else(|| bad(&format!("factor {tok:?} does not start with 'f'")))?;
    let (k, e) = match body.split_once('^') {
        Some((k, e)) => (k, e.parse::<i64>().map_err(|_| bad(&format!("bad exponent in {tok:?}")))?),
        None => (body, 1),
    };
    let k: usize = k.parse().map_err(|_| bad(&format!("bad step in {tok:?}")))?;
    if k == 0 {
        return Err(bad("step must be positive"));
    }
    Ok((k, e))
}

fn factor_tokens(input: &str) -> Vec<String> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    compact.split('*').map(str::to_string).collect()
}

impl FromStr for EtaQuotient {
    type Err = Error;

    /// Parses `f1^-2 * f2^1 * f4^2 * f8^-3 * f16`; whitespace is ignored and
    /// `1` denotes the empty product.
    fn from_str(s: &str) -> Result<Self> {
        let toks = factor_tokens(s);
        if toks == ["1"] {
            return Ok(EtaQuotient::one());
        }
        if toks.iter().any(String::is_empty) {
            return Err(Error::EtaSyntax { input: s.to_string(), reason: "empty factor".into() });
        }
        toks.iter().map(|t| parse_factor(s, t)).collect::<Result<Vec<_>>>().map(EtaQuotient::new)
    }
}

fn eta_quotient_in(eq: &EtaQuotient, order: usize, ring: Ring) -> TruncatedSeries {
    let mut acc = TruncatedSeries::one(ring, order);
    for (&k, &e) in &eq.factors {
        let f = TruncatedSeries::from_sparse(ring, order, &pentagonal_terms(k, order));
        for _ in 0..e.unsigned_abs() {
            acc = if e > 0 { &acc * &f } else { acc.checked_div(&f).expect("Euler products have constant term 1") };
        }
    }
    acc
}

/// `∏ f_k^{e_k}` over ℤ through `q^order`.
pub fn eta_quotient_series(eq: &EtaQuotient, order: usize) -> TruncatedSeries {
    eta_quotient_in(eq, order, Ring::Exact)
}

/// `∏ f_k^{e_k}` with every factor reduced mod `m` before multiplying.
pub fn eta_quotient_series_mod(eq: &EtaQuotient, order: usize, m: u64) -> Result<TruncatedSeries> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    Ok(eta_quotient_in(eq, order, Ring::Mod(m)))
}

/// `scalar · q^shift · ∏ f_k^{e_k}`: the shape of every right-hand side in the
/// congruence catalog and of every summand in the dissection identities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaTerm {
    pub scalar: i64,
    pub shift: usize,
    pub eta: EtaQuotient,
}

impl EtaTerm {
    pub fn new(scalar: i64, shift: usize, eta: EtaQuotient) -> Self {
        EtaTerm { scalar, shift, eta }
    }

    pub fn series(&self, order: usize, ring: Ring) -> TruncatedSeries {
        eta_quotient_in(&self.eta, order, ring).shift(self.shift).scale(self.scalar)
    }
}

impl fmt::Display for EtaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scalar)?;
        match self.shift {
            0 => {}
            1 => f.write_str(" * q")?,
            s => write!(f, " * q^{s}")?,
        }
        if !self.eta.is_one() {
            write!(f, " * {}", self.eta)?;
        }
        Ok(())
    }
}

impl FromStr for EtaTerm {
    type Err = Error;

    /// Parses products such as `-12 * f3^3`, `32 * q * f5 * f40` or
    /// `8 * q^2 * f7^9`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::EtaSyntax { input: s.to_string(), reason };
        let mut scalar = 1i64;
        let mut shift = 0usize;
        let mut factors = Vec::new();
        for tok in factor_tokens(s) {
            if tok.is_empty() {
                return Err(bad("empty factor".into()));
            } else if tok == "q" {
                shift += 1;
            } else if let Some(e) = tok.strip_prefix("q^") {
                shift += e.parse::<usize>().map_err(|_| bad(format!("bad power of q in {tok:?}")))?;
            } else if tok.starts_with('f') {
                factors.push(parse_factor(s, &tok)?);
            } else {
                let k: i64 = tok.parse().map_err(|_| bad(format!("unrecognised factor {tok:?}")))?;
                scalar = scalar.checked_mul(k).ok_or_else(|| bad("scalar overflow".into()))?;
            }
        }
        Ok(EtaTerm::new(scalar, shift, EtaQuotient::new(factors)))
    }
}
