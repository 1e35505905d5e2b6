//! Command implementations behind the `ovp` binary. Each command writes its
//! report to the given sink and returns the process exit status.

use std::io::{self, Write};
use std::path::PathBuf;

use serde_json::json;

use ovp_core::harness::{Category, Summary, TABLE_HEADER};
use ovp_core::identities::{self, p_dissection_residue_condition, verify_triangular_split};
use ovp_core::partitions::compare_with_oracle;
use ovp_core::{
    eta_quotient_series, eta_quotient_series_mod, Catalog, CongruenceClaim, Error, EtaQuotient, Harness, HarnessConfig,
    RegularOverpartitionSpec, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN_ID: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Largest order `expand` will compute.
pub const EXPAND_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    /// One JSON object per line.
    Structured,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimFilter {
    /// Glob over claim ids, e.g. `t1*`.
    pub id: Option<String>,
    pub category: Option<Category>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Expand {
        eta: String,
        order: usize,
        modulus: Option<u64>,
    },
    VerifyIdentities {
        id: Option<String>,
        order: Option<usize>,
    },
    VerifyClaims {
        filter: ClaimFilter,
        harness: HarnessConfig,
        catalog: Option<PathBuf>,
    },
    OracleCompare {
        spec: String,
        n_max: u64,
    },
    List,
    /// Identities, oracle agreement and the intermediate congruences.
    Core,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::UnknownClaim(_) | Error::UnknownIdentity(_) => EXIT_UNKNOWN_ID,
        _ => EXIT_USAGE,
    }
}

pub fn run(config: &RunConfig, out: &mut impl Write) -> i32 {
    let fmt = config.format;
    let result = match &config.command {
        Command::Expand { eta, order, modulus } => expand(eta, *order, *modulus, out),
        Command::VerifyIdentities { id, order } => verify_identities(id.as_deref(), *order, fmt, out),
        Command::VerifyClaims { filter, harness, catalog } => {
            verify_claims(filter, harness, catalog.as_ref(), fmt, out)
        }
        Command::OracleCompare { spec, n_max } => oracle_compare(spec, *n_max, fmt, out),
        Command::List => list(out),
        Command::Core => core_suite(fmt, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Core(e)) => {
            let _ = writeln!(out, "error: {e}");
            exit_for(&e)
        }
        Err(Failure::Budget(msg)) => {
            let _ = writeln!(out, "error: budget exceeded: {msg}");
            EXIT_BUDGET
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(out, "error: {e}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Core(Error),
    Budget(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<i32, Failure>;

fn status(all_pass: bool) -> i32 {
    if all_pass {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn expand(eta: &str, order: usize, modulus: Option<u64>, out: &mut impl Write) -> Outcome {
    let eq: EtaQuotient = eta.parse()?;
    if order > EXPAND_LIMIT {
        return Err(Failure::Budget(format!("order {order} is above {EXPAND_LIMIT}")));
    }
    let s = match modulus {
        Some(m) => eta_quotient_series_mod(&eq, order, m)?,
        None => eta_quotient_series(&eq, order),
    };
    writeln!(out, "{s}")?;
    Ok(EXIT_OK)
}

struct IdentityRow {
    id: String,
    order: usize,
    pass: bool,
    first_mismatch: Option<usize>,
}

fn write_identity_rows(rows: &[IdentityRow], fmt: Format, out: &mut impl Write) -> io::Result<()> {
    if fmt == Format::Text {
        writeln!(out, "{:<24} {:>6}  verdict", "identity", "order")?;
    }
    for r in rows {
        match fmt {
            Format::Text => {
                let verdict = match r.first_mismatch {
                    None if r.pass => "PASS".to_string(),
                    None => "FAIL".to_string(),
                    Some(i) => format!("FAIL (first mismatch at q^{i})"),
                };
                writeln!(out, "{:<24} {:>6}  {verdict}", r.id, r.order)?;
            }
            Format::Structured => {
                let rec = json!({"kind": "identity", "id": r.id, "order": r.order, "pass": r.pass, "first_mismatch": r.first_mismatch});
                writeln!(out, "{rec}")?;
            }
        }
    }
    Ok(())
}

fn identity_rows(id: Option<&str>, order: Option<usize>) -> Result<Vec<IdentityRow>, Error> {
    let entries: Vec<_> = match id {
        Some(id) => vec![identities::lookup(id)?],
        None => identities::database().iter().collect(),
    };
    Ok(entries
        .iter()
        .map(|e| {
            let n = order.unwrap_or(e.default_order);
            let c = e.verify(n);
            IdentityRow { id: e.id.clone(), order: n, pass: c.equal, first_mismatch: c.first_mismatch }
        })
        .collect())
}

fn verify_identities(id: Option<&str>, order: Option<usize>, fmt: Format, out: &mut impl Write) -> Outcome {
    let rows = identity_rows(id, order)?;
    write_identity_rows(&rows, fmt, out)?;
    let failed = rows.iter().find(|r| !r.pass).map(|r| r.id.clone());
    write_summary(
        out,
        fmt,
        rows.len() - rows.iter().filter(|r| !r.pass).count(),
        rows.iter().filter(|r| !r.pass).count(),
        0,
        failed.as_deref(),
    )?;
    Ok(status(failed.is_none()))
}

fn write_summary(
    out: &mut impl Write,
    fmt: Format,
    passed: usize,
    failed: usize,
    skipped: usize,
    first: Option<&str>,
) -> io::Result<()> {
    match fmt {
        Format::Text => {
            write!(out, "summary: {passed} passed, {failed} failed, {skipped} skipped")?;
            match first {
                Some(id) => writeln!(out, "; first failure: {id}"),
                None => writeln!(out),
            }
        }
        Format::Structured => {
            let rec = json!({"kind": "summary", "passed": passed, "failed": failed, "skipped": skipped, "first_failure": first});
            writeln!(out, "{rec}")
        }
    }
}

fn write_reports(reports: &[VerificationReport], fmt: Format, out: &mut impl Write) -> io::Result<()> {
    match fmt {
        Format::Text => {
            writeln!(out, "{TABLE_HEADER}")?;
            for r in reports {
                writeln!(out, "{r}")?;
            }
        }
        Format::Structured => {
            for r in reports {
                let mut v = serde_json::to_value(r).expect("reports serialize");
                v["kind"] = json!("claim");
                writeln!(out, "{v}")?;
            }
        }
    }
    Ok(())
}

fn select<'a>(catalog: &'a Catalog, filter: &ClaimFilter) -> Result<Vec<&'a CongruenceClaim>, Failure> {
    let pattern = match &filter.id {
        Some(g) => Some(glob::Pattern::new(g).map_err(|e| Error::UnknownClaim(format!("{g} ({e})")))?),
        None => None,
    };
    let chosen: Vec<_> = catalog
        .claims()
        .iter()
        .filter(|c| pattern.as_ref().is_none_or(|p| p.matches(&c.id)))
        .filter(|c| filter.category.is_none_or(|cat| c.category == cat))
        .collect();
    if chosen.is_empty() {
        return Err(Error::UnknownClaim(filter.id.clone().unwrap_or_else(|| "<no claims selected>".into())).into());
    }
    Ok(chosen)
}

fn verify_claims(
    filter: &ClaimFilter,
    config: &HarnessConfig,
    catalog: Option<&PathBuf>,
    fmt: Format,
    out: &mut impl Write,
) -> Outcome {
    let catalog = match catalog {
        Some(path) => Catalog::from_toml_str(&std::fs::read_to_string(path)?)?,
        None => Catalog::builtin(),
    };
    let claims = select(&catalog, filter)?;
    let reports = Harness::new(config.clone()).run(&claims)?;
    write_reports(&reports, fmt, out)?;
    let s = Summary::of(&reports);
    write_summary(out, fmt, s.passed, s.failed, s.skipped, s.first_failure.as_deref())?;
    let all_over_budget = s.passed == 0
        && s.failed == 0
        && reports
            .iter()
            .all(|r| matches!(&r.verdict, ovp_core::Verdict::Skipped { reason } if reason.contains("budget")));
    if all_over_budget {
        return Err(Failure::Budget("every selected check needs a larger series order".into()));
    }
    Ok(status(s.failed == 0))
}

fn oracle_compare(spec: &str, n_max: u64, fmt: Format, out: &mut impl Write) -> Outcome {
    let spec: RegularOverpartitionSpec = spec.parse()?;
    let rows = compare_with_oracle(spec, n_max)?;
    if fmt == Format::Text {
        writeln!(out, "{:>5}  {:>24}  {:>24}  match", "n", "series", "enumeration")?;
    }
    for r in &rows {
        match fmt {
            Format::Text => writeln!(
                out,
                "{:>5}  {:>24}  {:>24}  {}",
                r.n,
                r.series,
                r.oracle,
                if r.matches() { "yes" } else { "NO" }
            )?,
            Format::Structured => {
                let rec = json!({"kind": "oracle", "spec": spec.to_string(), "n": r.n, "series": r.series.to_string(), "oracle": r.oracle.to_string(), "match": r.matches()});
                writeln!(out, "{rec}")?;
            }
        }
    }
    let bad = rows.iter().filter(|r| !r.matches()).count();
    let first = (bad > 0).then(|| format!("oracle{spec}"));
    write_summary(out, fmt, rows.len() - bad, bad, 0, first.as_deref())?;
    Ok(status(bad == 0))
}

fn list(out: &mut impl Write) -> Outcome {
    writeln!(out, "identities:")?;
    for e in identities::database() {
        writeln!(out, "  {:<24} order {:>4}  {}", e.id, e.default_order, e.summary)?;
    }
    writeln!(out, "claims:")?;
    for c in Catalog::builtin().claims() {
        writeln!(out, "  {:<6} {:<12} {}", c.id, c.category.name(), c.describe())?;
    }
    Ok(EXIT_OK)
}

/// Orders and windows used by the default suite.
pub const CORE_ORACLE_N: u64 = 60;
pub const CORE_TRIANGULAR_ORDER: usize = 500;

fn core_suite(fmt: Format, out: &mut impl Write) -> Outcome {
    let mut rows = identity_rows(None, None)?;
    for p in [5u64, 7, 11, 13, 17, 19] {
        rows.push(IdentityRow {
            id: format!("residue_condition_p{p}"),
            order: 0,
            pass: p_dissection_residue_condition(p)?,
            first_mismatch: None,
        });
    }
    for p in [7u64, 11, 13, 17, 19] {
        let c = verify_triangular_split(p, CORE_TRIANGULAR_ORDER)?;
        rows.push(IdentityRow {
            id: format!("triangular_split_p{p}"),
            order: CORE_TRIANGULAR_ORDER,
            pass: c.holds(),
            first_mismatch: None,
        });
    }
    for (j, k) in [(4, 8), (6, 12), (8, 16)] {
        let spec = RegularOverpartitionSpec::new(j, k)?;
        let cmp = compare_with_oracle(spec, CORE_ORACLE_N)?;
        let first = cmp.iter().find(|r| !r.matches()).map(|r| r.n as usize);
        rows.push(IdentityRow {
            id: format!("oracle_{j}_{k}"),
            order: CORE_ORACLE_N as usize,
            pass: first.is_none(),
            first_mismatch: first,
        });
    }
    write_identity_rows(&rows, fmt, out)?;

    let catalog = Catalog::builtin();
    let claims: Vec<_> = catalog.by_category(Category::Intermediate).collect();
    let reports = Harness::default().run(&claims)?;
    write_reports(&reports, fmt, out)?;

    let mut s = Summary::of(&reports);
    let id_failed: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
    s.passed += rows.len() - id_failed.len();
    s.failed += id_failed.len();
    if let Some(r) = id_failed.first() {
        s.first_failure = Some(r.id.clone());
    }
    write_summary(out, fmt, s.passed, s.failed, s.skipped, s.first_failure.as_deref())?;
    Ok(status(s.failed == 0))
}
