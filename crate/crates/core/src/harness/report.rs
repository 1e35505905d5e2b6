use std::fmt;

use serde::Serialize;

use super::expr::Var;

/// One point of a sweep. Unused parameters stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Residue `r` of an argument `scale·(step·n + r) + offset`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<u64>,
}

impl Params {
    pub fn base() -> Self {
        Params { alpha: Some(0), beta: Some(0), gamma: Some(0), ..Default::default() }
    }

    pub fn with_p(mut self, p: u64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_residue(mut self, r: u64) -> Self {
        self.residue = Some(r);
        self
    }

    pub fn get(&self, v: Var) -> Option<i128> {
        match v {
            Var::Alpha => self.alpha.map(i128::from),
            Var::Beta => self.beta.map(i128::from),
            Var::Gamma => self.gamma.map(i128::from),
            Var::P => self.p.map(i128::from),
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        }
        if let Some(p) = self.p {
            parts.push(format!("p={p}"));
        }
        if let Some(r) = self.residue {
            parts.push(format!("r={r}"));
        }
        if parts.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// `lhs` and `rhs` are the residues mod the claim's modulus at the
    /// smallest failing `n`.
    Fail {
        n: u64,
        lhs: u64,
        rhs: u64,
    },
    Skipped {
        reason: String,
    },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, Verdict::Skipped { .. })
    }

    pub fn counterexample(&self) -> Option<u64> {
        match self {
            Verdict::Fail { n, .. } => Some(*n),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail { .. } => "FAIL",
            Verdict::Skipped { .. } => "SKIP",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail { n, lhs, rhs } => write!(f, "FAIL at n={n} (lhs {lhs}, rhs {rhs})"),
            Verdict::Skipped { reason } => write!(f, "SKIP ({reason})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub params: Params,
    /// Last `n` checked (after any shrinking to fit the budget).
    pub n_max: u64,
    pub verdict: Verdict,
    pub counterexample_n: Option<u64>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn new(id: &str, params: Params, n_max: u64, verdict: Verdict, elapsed_ms: u64) -> Self {
        let counterexample_n = verdict.counterexample();
        VerificationReport { id: id.to_string(), params, n_max, verdict, counterexample_n, elapsed_ms }
    }

    /// Equality on everything but wall time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.id == other.id && self.params == other.params && self.n_max == other.n_max && self.verdict == other.verdict
    }
}

pub const TABLE_HEADER: &str = "id         params                         n_max    verdict";

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<10} {:<30} {:<8} {}", self.id, self.params.to_string(), self.n_max, self.verdict)
    }
}

/// Pass/fail/skip counts and the first failing id, in report order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub first_failure: Option<String>,
}

impl Summary {
    pub fn of<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> Summary {
        let mut s = Summary::default();
        for r in reports {
            match r.verdict {
                Verdict::Pass => s.passed += 1,
                Verdict::Fail { .. } => {
                    s.failed += 1;
                    s.first_failure.get_or_insert_with(|| r.id.clone());
                }
                Verdict::Skipped { .. } => s.skipped += 1,
            }
        }
        s
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} passed, {} failed, {} skipped", self.passed, self.failed, self.skipped)?;
        if let Some(id) = &self.first_failure {
            write!(f, "; first failure: {id}")?;
        }
        Ok(())
    }
}
