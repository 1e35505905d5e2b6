use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};
use std::time::Instant;

use rayon::prelude::*;

use super::catalog::CongruenceClaim;
use super::expr::Var;
use super::report::{Params, Verdict, VerificationReport};
use crate::error::Result;
use crate::partitions::{series_pjk, series_pjk_mod, RegularOverpartitionSpec};
use crate::series::{Ring, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarnessConfig {
    /// Largest series order any single check may request.
    pub budget: u64,
    /// A shrunk window must still cover at least this many values of `n`.
    pub min_window: u64,
    pub alpha_max: u32,
    pub beta_max: u32,
    pub gamma_max: u32,
    pub primes: Vec<u64>,
    /// In sweeps, lower `n_max` until the order fits the budget.
    pub shrink_to_budget: bool,
    /// Replaces every claim's own `n_max`.
    pub n_max_override: Option<u64>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            budget: 200_000,
            min_window: 5,
            alpha_max: 1,
            beta_max: 1,
            gamma_max: 1,
            primes: vec![5, 7, 11, 13],
            shrink_to_budget: true,
            n_max_override: None,
        }
    }
}

/// `U·n_max + V` for the claim's argument map at `params`.
pub fn required_order(claim: &CongruenceClaim, params: &Params, n_max: u64) -> Result<u128> {
    let (u, v) = claim.arg.affine(&claim.id, params)?;
    Ok(u * n_max as u128 + v)
}

type SeriesKey = (RegularOverpartitionSpec, u64);

enum Plan {
    Run { params: Params, u: u128, v: u128, n_max: u64 },
    Skip { params: Params, n_max: u64, reason: String },
}

impl Plan {
    fn order(&self) -> Option<usize> {
        match self {
            Plan::Run { u, v, n_max, .. } => Some((u * *n_max as u128 + v) as usize),
            Plan::Skip { .. } => None,
        }
    }
}

/// Runs congruence checks. Series of `p̄_{j,k}` mod `M` are cached per
/// `(spec, M)` and shared between checks.
pub struct Harness {
    config: HarnessConfig,
    cache: RwLock<HashMap<SeriesKey, Arc<TruncatedSeries>>>,
}

impl Default for Harness {
    fn default() -> Self {
        Harness::new(HarnessConfig::default())
    }
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

impl Harness {
    pub fn new(config: HarnessConfig) -> Self {
        Harness { config, cache: RwLock::new(HashMap::new()) }
    }

    pub fn config(&self) -> &HarnessConfig {
        &self.config
    }

    fn cached(&self, key: SeriesKey, order: usize) -> Option<Arc<TruncatedSeries>> {
        let cache = self.cache.read().expect("cache lock");
        cache.get(&key).filter(|s| s.order() >= order).cloned()
    }

    fn store(&self, key: SeriesKey, s: TruncatedSeries) -> Arc<TruncatedSeries> {
        let mut cache = self.cache.write().expect("cache lock");
        match cache.get(&key) {
            Some(e) if e.order() >= s.order() => e.clone(),
            _ => {
                let s = Arc::new(s);
                cache.insert(key, s.clone());
                s
            }
        }
    }

    fn series(&self, key: SeriesKey, order: usize) -> Result<Arc<TruncatedSeries>> {
        if let Some(s) = self.cached(key, order) {
            return Ok(s);
        }
        let s = series_pjk_mod(key.0, order, key.1)?;
        Ok(self.store(key, s))
    }

    fn n_max_for(&self, claim: &CongruenceClaim) -> u64 {
        self.config.n_max_override.unwrap_or(claim.n_max)
    }

    fn compare(claim: &CongruenceClaim, series: &TruncatedSeries, u: u128, v: u128, n_max: u64) -> Verdict {
        let m = claim.modulus;
        let lhs = series.residues().expect("harness series are modular");
        let rhs = claim.rhs.as_ref().map(|t| t.series(n_max as usize, Ring::Mod(m)));
        let rhs = rhs.as_ref().map(|s| s.residues().expect("modular"));
        for n in 0..=n_max {
            let l = lhs[(u * n as u128 + v) as usize] % m;
            let r = rhs.map_or(0, |c| c[n as usize] % m);
            if l != r {
                return Verdict::Fail { n, lhs: l, rhs: r };
            }
        }
        Verdict::Pass
    }

    /// Checks one parameter point for `0 ≤ n ≤ n_max`. An order above the
    /// budget is reported as skipped; the window is never shortened here.
    pub fn check_claim(&self, claim: &CongruenceClaim, params: &Params, n_max: u64) -> Result<VerificationReport> {
        let start = Instant::now();
        let skip = |reason: String| {
            Ok(VerificationReport::new(&claim.id, params.clone(), n_max, Verdict::Skipped { reason }, 0))
        };
        if let Some(why) = &claim.unverifiable {
            return skip(why.clone());
        }
        if claim.vars().contains(&Var::P) {
            if let Err(why) = claim.prime_filter.admits(params.p.unwrap_or(0)) {
                return skip(why);
            }
        }
        let (u, v) = claim.arg.affine(&claim.id, params)?;
        let order = u * n_max as u128 + v;
        if order > self.config.budget as u128 {
            return skip(format!("order {order} exceeds budget {}", self.config.budget));
        }
        let s = self.series((claim.spec, claim.modulus), order as usize)?;
        let verdict = Self::compare(claim, &s, u, v, n_max);
        Ok(VerificationReport::new(&claim.id, params.clone(), n_max, verdict, elapsed_ms(start)))
    }

    fn points(&self, claim: &CongruenceClaim) -> Vec<Params> {
        let vars = claim.vars();
        let range = |v: Var, max: u32| if vars.contains(&v) { (0..=max).map(Some).collect() } else { vec![None] };
        let ps: Vec<Option<u64>> =
            if vars.contains(&Var::P) { self.config.primes.iter().copied().map(Some).collect() } else { vec![None] };
        let mut out = Vec::new();
        for &p in &ps {
            for &alpha in &range(Var::Alpha, self.config.alpha_max) {
                for &beta in &range(Var::Beta, self.config.beta_max) {
                    for &gamma in &range(Var::Gamma, self.config.gamma_max) {
                        out.push(Params { alpha, beta, gamma, p, residue: None });
                    }
                }
            }
        }
        out
    }

    fn plan(&self, claim: &CongruenceClaim) -> Result<Vec<Plan>> {
        let n_max = self.n_max_for(claim);
        if let Some(why) = &claim.unverifiable {
            return Ok(vec![Plan::Skip { params: Params::default(), n_max, reason: why.clone() }]);
        }
        let uses_p = claim.vars().contains(&Var::P);
        let budget = self.config.budget as u128;
        let mut plans = Vec::new();
        for params in self.points(claim) {
            if uses_p {
                if let Err(reason) = claim.prime_filter.admits(params.p.unwrap_or(0)) {
                    plans.push(Plan::Skip { params, n_max, reason });
                    continue;
                }
            }
            let residues = claim.arg.residues(&params)?;
            let pts = if residues.is_empty() {
                vec![params]
            } else {
                residues.into_iter().map(|r| params.clone().with_residue(r)).collect()
            };
            for params in pts {
                let (u, v) = claim.arg.affine(&claim.id, &params)?;
                let need = u * n_max as u128 + v;
                if need <= budget {
                    plans.push(Plan::Run { params, u, v, n_max });
                    continue;
                }
                let fit =
                    if self.config.shrink_to_budget && v <= budget { Some(((budget - v) / u) as u64) } else { None };
                match fit {
                    Some(n) if n + 1 >= self.config.min_window => plans.push(Plan::Run { params, u, v, n_max: n }),
                    _ => plans.push(Plan::Skip {
                        params,
                        n_max,
                        reason: format!("order {need} exceeds budget {}", self.config.budget),
                    }),
                }
            }
        }
        Ok(plans)
    }

    /// Sweeps the claim's parameters (and residues, and primes) within the
    /// configured bounds. Windows are shortened to fit the budget when allowed,
    /// and the shortened `n_max` is what the report carries.
    pub fn check_family(&self, claim: &CongruenceClaim) -> Result<Vec<VerificationReport>> {
        self.run(&[claim])
    }

    /// Sweeps every claim. Reports come back in claim order, then sweep order,
    /// whatever order the checks finish in.
    pub fn run(&self, claims: &[&CongruenceClaim]) -> Result<Vec<VerificationReport>> {
        let mut jobs = Vec::new();
        for c in claims {
            for plan in self.plan(c)? {
                jobs.push((*c, plan));
            }
        }
        let mut need: BTreeMap<SeriesKey, usize> = BTreeMap::new();
        for (c, plan) in &jobs {
            if let Some(order) = plan.order() {
                let e = need.entry((c.spec, c.modulus)).or_insert(0);
                *e = (*e).max(order);
            }
        }
        let missing: Vec<(SeriesKey, usize)> =
            need.into_iter().filter(|&(key, order)| self.cached(key, order).is_none()).collect();
        let built: Vec<(SeriesKey, Result<TruncatedSeries>)> =
            missing.into_par_iter().map(|(key, order)| (key, series_pjk_mod(key.0, order, key.1))).collect();
        for (key, s) in built {
            self.store(key, s?);
        }
        jobs.into_par_iter()
            .map(|(c, plan)| match plan {
                Plan::Skip { params, n_max, reason } => {
                    Ok(VerificationReport::new(&c.id, params, n_max, Verdict::Skipped { reason }, 0))
                }
                Plan::Run { params, u, v, n_max } => {
                    let start = Instant::now();
                    let s = self.series((c.spec, c.modulus), (u * n_max as u128 + v) as usize)?;
                    let verdict = Self::compare(c, &s, u, v, n_max);
                    Ok(VerificationReport::new(&c.id, params, n_max, verdict, elapsed_ms(start)))
                }
            })
            .collect()
    }
}

/// The same check through the definitional route: the exact series of
/// `p̄_{j,k}` (both constructions), reduced mod `M`, scanned term by term.
pub fn reference_verdict(claim: &CongruenceClaim, params: &Params, n_max: u64) -> Result<Verdict> {
    let (u, v) = claim.arg.affine(&claim.id, params)?;
    let order = (u * n_max as u128 + v) as usize;
    let exact = series_pjk(claim.spec, order)?;
    let m = claim.modulus;
    let rhs = claim.rhs.as_ref().map(|t| t.series(n_max as usize, Ring::Exact));
    for n in 0..=n_max {
        let residue = |x: num_bigint::BigInt| {
            let r = x % m;
            let r = if r < 0.into() { r + m } else { r };
            u64::try_from(r).expect("reduced")
        };
        let l = residue(exact.coeff((u * n as u128 + v) as usize));
        let r = rhs.as_ref().map_or(0, |s| residue(s.coeff(n as usize)));
        if l != r {
            return Ok(Verdict::Fail { n, lhs: l, rhs: r });
        }
    }
    Ok(Verdict::Pass)
}
