//! Congruence claims and the catalog file they are loaded from.
//!
//! A claim asserts `p̄_{j,k}(U·n + V) ≡ rhs_n (mod M)` for every `n` up to a
//! bound, where `U` and `V` come from an [`ArgumentMap`] evaluated at a point
//! of the parameter sweep and `rhs_n` is either zero or the `n`-th
//! coefficient of an eta-quotient term.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Deserialize;

use super::expr::{Expr, Var};
use super::report::Params;
use crate::arith::{is_prime, legendre};
use crate::error::{Error, Result};
use crate::partitions::RegularOverpartitionSpec;
use crate::products::EtaTerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    /// Consequences of explicit scalar factors inside the proofs.
    Intermediate,
    /// Intermediate steps of the derivations.
    ProofStep,
    Theorem,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Intermediate => "intermediate",
            Category::ProofStep => "proof_step",
            Category::Theorem => "theorem",
        }
    }
}

impl std::str::FromStr for Category {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intermediate" => Ok(Category::Intermediate),
            "proof_step" => Ok(Category::ProofStep),
            "theorem" => Ok(Category::Theorem),
            _ => Err(Error::Catalog(format!("unknown category {s:?}"))),
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which primes a claim quantified over `p` admits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeFilter {
    /// Every prime `p ≥ 5`.
    #[default]
    Any,
    /// Primes `p ≥ 5` with `(−2/p) = −1`.
    LegendreMinus2,
}

impl PrimeFilter {
    /// `Ok(())` when `p` is admitted, otherwise the reason it is not.
    pub fn admits(self, p: u64) -> std::result::Result<(), String> {
        if p < 5 || !is_prime(p) {
            return Err(format!("p={p} is not a prime >= 5"));
        }
        match self {
            PrimeFilter::Any => Ok(()),
            PrimeFilter::LegendreMinus2 => match legendre(-2, p as i64) {
                Ok(-1) => Ok(()),
                _ => Err(format!("(-2/{p}) != -1")),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residues {
    List(Vec<u64>),
    /// `1, 2, …, step − 1`.
    NonzeroBelowStep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Progression {
    pub step: Expr,
    pub residues: Residues,
}

/// `n ↦ scale·n + offset`, or `n ↦ scale·(step·n + r) + offset` for each
/// residue `r` of a progression. The residue need not lie below the step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgumentMap {
    pub scale: Expr,
    pub offset: Expr,
    pub progression: Option<Progression>,
}

impl ArgumentMap {
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.scale.vars();
        v.extend(self.offset.vars());
        if let Some(pr) = &self.progression {
            v.extend(pr.step.vars());
        }
        v
    }

    pub fn residues(&self, params: &Params) -> Result<Vec<u64>> {
        let Some(pr) = &self.progression else { return Ok(Vec::new()) };
        Ok(match &pr.residues {
            Residues::List(rs) => rs.clone(),
            Residues::NonzeroBelowStep => {
                let step = pr.step.eval(|v| params.get(v))?;
                (1..step.max(1) as u64).collect()
            }
        })
    }

    /// `(U, V)` with `arg(n) = U·n + V`; requires `U ≥ 1` and `V ≥ 0`.
    pub fn affine(&self, id: &str, params: &Params) -> Result<(u128, u128)> {
        let look = |v| params.get(v);
        let scale = self.scale.eval(look)?;
        let offset = self.offset.eval(look)?;
        let (u, v) = match &self.progression {
            None => (Some(scale), Some(offset)),
            Some(pr) => {
                let step = pr.step.eval(look)?;
                let r = params.residue.ok_or_else(|| Error::ExprEval {
                    expr: pr.step.source().to_string(),
                    reason: "no residue given for a progression claim".into(),
                })? as i128;
                (scale.checked_mul(step), scale.checked_mul(r).and_then(|x| x.checked_add(offset)))
            }
        };
        let overflow = || Error::ExprEval { expr: self.scale.source().to_string(), reason: "overflow".into() };
        let (u, v) = (u.ok_or_else(overflow)?, v.ok_or_else(overflow)?);
        if u < 1 || v < 0 {
            return Err(Error::BadArgumentMap { id: id.to_string(), u, v });
        }
        Ok((u as u128, v as u128))
    }
}

impl fmt::Display for ArgumentMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.progression {
            None => write!(f, "({})*n + {}", self.scale, self.offset),
            Some(pr) => {
                let rs = match &pr.residues {
                    Residues::List(rs) => format!("{rs:?}"),
                    Residues::NonzeroBelowStep => "1..step-1".into(),
                };
                write!(f, "({})*(({})*n + r) + {}, r in {rs}", self.scale, pr.step, self.offset)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceClaim {
    pub id: String,
    pub category: Category,
    pub spec: RegularOverpartitionSpec,
    pub arg: ArgumentMap,
    pub modulus: u64,
    /// `None` means the right-hand side is zero.
    pub rhs: Option<EtaTerm>,
    pub prime_filter: PrimeFilter,
    pub n_max: u64,
    pub note: String,
    /// Set for readings that cannot be checked as an affine progression.
    pub unverifiable: Option<String>,
}

impl CongruenceClaim {
    pub fn vars(&self) -> BTreeSet<Var> {
        self.arg.vars()
    }

    pub fn describe(&self) -> String {
        let rhs = self.rhs.as_ref().map_or("0".to_string(), ToString::to_string);
        format!("pbar{}[{}] == {} (mod {})", self.spec, self.arg, rhs, self.modulus)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawResidues {
    List(Vec<u64>),
    Rule(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClaim {
    id: String,
    category: Category,
    spec: (u64, u64),
    modulus: u64,
    scale: String,
    offset: String,
    step: Option<String>,
    residues: Option<RawResidues>,
    rhs: Option<String>,
    primes: Option<PrimeFilter>,
    n_max: u64,
    #[serde(default)]
    note: String,
    unverifiable: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    claim: Vec<RawClaim>,
}

fn convert(raw: RawClaim) -> Result<CongruenceClaim> {
    let id = raw.id;
    let bad = |msg: String| Error::Catalog(format!("{id}: {msg}"));
    if !raw.modulus.is_power_of_two() || !(2..=64).contains(&raw.modulus) {
        return Err(bad(format!("modulus {} is not a power of two in [2, 64]", raw.modulus)));
    }
    let spec = RegularOverpartitionSpec::new(raw.spec.0, raw.spec.1)?;
    let progression = match (raw.step, raw.residues) {
        (None, None) => None,
        (Some(step), Some(res)) => Some(Progression {
            step: step.parse()?,
            residues: match res {
                RawResidues::List(rs) if rs.is_empty() => return Err(bad("empty residue list".into())),
                RawResidues::List(rs) => Residues::List(rs),
                RawResidues::Rule(r) if r == "1..step-1" => Residues::NonzeroBelowStep,
                RawResidues::Rule(r) => return Err(bad(format!("unknown residue rule {r:?}"))),
            },
        }),
        _ => return Err(bad("step and residues must be given together".into())),
    };
    let arg = ArgumentMap { scale: raw.scale.parse()?, offset: raw.offset.parse()?, progression };
    let uses_p = arg.vars().contains(&Var::P);
    if raw.primes.is_some() && !uses_p {
        return Err(bad("prime filter on a claim without p".into()));
    }
    let rhs = raw.rhs.map(|s| s.parse::<EtaTerm>()).transpose()?;
    Ok(CongruenceClaim {
        category: raw.category,
        spec,
        arg,
        modulus: raw.modulus,
        rhs,
        prime_filter: raw.primes.unwrap_or_default(),
        n_max: raw.n_max,
        note: raw.note,
        unverifiable: raw.unverifiable,
        id,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    claims: Vec<CongruenceClaim>,
}

const BUILTIN: &str = include_str!("../../data/claims.toml");

impl Catalog {
    pub fn from_toml_str(src: &str) -> Result<Catalog> {
        let raw: RawCatalog = toml::from_str(src).map_err(|e| Error::Catalog(e.to_string()))?;
        let claims = raw.claim.into_iter().map(convert).collect::<Result<Vec<_>>>()?;
        let mut seen = HashSet::new();
        if let Some(dup) = claims.iter().find(|c| !seen.insert(c.id.clone())) {
            return Err(Error::Catalog(format!("duplicate id {}", dup.id)));
        }
        Ok(Catalog { claims })
    }

    /// The catalog shipped with the crate.
    pub fn builtin() -> Catalog {
        Catalog::from_toml_str(BUILTIN).expect("built-in catalog is valid")
    }

    pub fn from_claims(claims: Vec<CongruenceClaim>) -> Catalog {
        Catalog { claims }
    }

    pub fn claims(&self) -> &[CongruenceClaim] {
        &self.claims
    }

    pub fn get(&self, id: &str) -> Result<&CongruenceClaim> {
        self.claims.iter().find(|c| c.id == id).ok_or_else(|| Error::UnknownClaim(id.to_string()))
    }

    pub fn by_category(&self, cat: Category) -> impl Iterator<Item = &CongruenceClaim> {
        self.claims.iter().filter(move |c| c.category == cat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = r#"
        [[claim]]
        id = "x"
        category = "theorem"
        spec = [4, 8]
        modulus = 8
        scale = "16*p^(2*alpha)"
        offset = "2"
        step = "p"
        residues = "1..step-1"
        primes = "legendre_minus2"
        n_max = 10
    "#;

    #[test]
    fn parses_a_claim() {
        let cat = Catalog::from_toml_str(ONE).unwrap();
        let c = cat.get("x").unwrap();
        assert_eq!(c.prime_filter, PrimeFilter::LegendreMinus2);
        assert_eq!(c.vars().into_iter().collect::<Vec<_>>(), [Var::Alpha, Var::P]);
        let params = Params::base().with_p(5).with_residue(3);
        assert_eq!(c.arg.residues(&params).unwrap(), [1, 2, 3, 4]);
        assert_eq!(c.arg.affine("x", &params).unwrap(), (80, 50));
        assert!(cat.get("y").is_err());
    }

    #[test]
    fn rejects_bad_records() {
        for (from, to) in [
            ("modulus = 8", "modulus = 12"),
            ("modulus = 8", "modulus = 128"),
            ("spec = [4, 8]", "spec = [8, 4]"),
            ("residues = \"1..step-1\"", "residues = \"odd\""),
            ("step = \"p\"", ""),
            ("scale = \"16*p^(2*alpha)\"", "scale = \"16*q\""),
            ("n_max = 10", "n_max = 10\nextra = 1"),
        ] {
            let src = ONE.replace(from, to);
            assert!(Catalog::from_toml_str(&src).is_err(), "{to}");
        }
        let twice = format!("{ONE}\n{ONE}");
        assert!(matches!(Catalog::from_toml_str(&twice), Err(Error::Catalog(m)) if m.contains("duplicate")));
    }

    #[test]
    fn affine_map_must_increase() {
        let cat = Catalog::from_toml_str(&ONE.replace("offset = \"2\"", "offset = \"0-200\"")).unwrap();
        let params = Params::base().with_p(5).with_residue(1);
        assert!(matches!(cat.get("x").unwrap().arg.affine("x", &params), Err(Error::BadArgumentMap { .. })));
    }

    #[test]
    fn prime_filter() {
        assert!(PrimeFilter::LegendreMinus2.admits(5).is_ok());
        assert!(PrimeFilter::LegendreMinus2.admits(11).is_err());
        assert!(PrimeFilter::Any.admits(11).is_ok());
        assert!(PrimeFilter::Any.admits(9).is_err());
        assert!(PrimeFilter::Any.admits(3).is_err());
    }

    #[test]
    fn builtin_catalog_loads() {
        let cat = Catalog::builtin();
        assert_eq!(cat.by_category(Category::Intermediate).count(), 9);
        for c in cat.claims() {
            assert!([2, 4, 8, 16, 32, 64].contains(&c.modulus));
        }
    }
}
