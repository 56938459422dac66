//! Enumeration and randomized search over grid couples.

mod store;

use std::collections::BTreeMap;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds;
use crate::error::{domain, Error, Result};
use crate::geometry::{CoupleConfig, GridSpec};
use crate::objective::{check_condition, f_ratio, ConditionMode};
use crate::optimizer::{optimize_certified, optimize_certified_with, CertifiedValue, OptimizeOptions};
use crate::rational::{self, Rational};

pub use store::{append_records, find_record, read_records, write_records};

/// Version of the on-disk record layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest assignment count [`enumerate_grid`] will walk.
pub const MAX_ASSIGNMENTS: u128 = 100_000_000;

/// Rejections allowed per requested sample before the sampler gives up.
const REJECTION_FACTOR: u64 = 100;

/// One optimized qualifying couple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub schema: u32,
    pub id: String,
    #[serde(with = "rational::serde_str")]
    pub tau: Rational,
    pub mode: ConditionMode,
    pub spec: GridSpec,
    pub config: CoupleConfig,
    pub certified: CertifiedValue,
    pub seed: u64,
    pub timestamp: String,
}

#[derive(Serialize)]
struct HashedPart<'a> {
    schema: u32,
    #[serde(with = "rational::serde_str")]
    tau: &'a Rational,
    mode: ConditionMode,
    config: &'a CoupleConfig,
    certified: &'a CertifiedValue,
    seed: u64,
}

impl SearchRecord {
    /// Build a record; fails unless the couple qualifies.
    pub fn new(
        tau: Rational,
        mode: ConditionMode,
        config: CoupleConfig,
        certified: CertifiedValue,
        seed: u64,
        timestamp: String,
    ) -> Result<Self> {
        if !check_condition(&config, &tau, mode) {
            return Err(domain!(
                "couple does not satisfy the {mode} condition at tau = {}",
                rational::format(&tau)
            ));
        }
        let mut rec = SearchRecord {
            schema: SCHEMA_VERSION,
            id: String::new(),
            tau,
            mode,
            spec: config.spec(),
            config,
            certified,
            seed,
            timestamp,
        };
        rec.id = rec.content_id();
        Ok(rec)
    }

    /// First 16 hex digits of the SHA-256 of everything but id and timestamp.
    pub fn content_id(&self) -> String {
        let part = HashedPart {
            schema: self.schema,
            tau: &self.tau,
            mode: self.mode,
            config: &self.config,
            certified: &self.certified,
            seed: self.seed,
        };
        let bytes = serde_json::to_vec(&part).expect("record serializes");
        hex::encode(&Sha256::digest(&bytes)[..8])
    }

    /// Re-check the record's invariants: schema, id, condition and witness.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Input(format!(
                "record schema {} is not supported (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        if self.spec != self.config.spec() {
            return Err(Error::Invariant(format!("record {}: spec does not match config", self.id)));
        }
        if self.id != self.content_id() {
            return Err(Error::Invariant(format!("record {}: id does not match content", self.id)));
        }
        if !check_condition(&self.config, &self.tau, self.mode) {
            return Err(Error::Invariant(format!("record {}: couple does not qualify", self.id)));
        }
        let c = &self.certified;
        if c.lo > c.hi || f_ratio(&self.config, &c.witness)? < c.lo {
            return Err(Error::Invariant(format!("record {}: enclosure is not sound", self.id)));
        }
        Ok(())
    }
}

/// Outcome of a full enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub d: usize,
    pub m: u64,
    #[serde(with = "rational::serde_str")]
    pub tau: Rational,
    pub mode: ConditionMode,
    pub total_assignments: u64,
    /// Qualifying ordered couples `(F+, F-)`.
    pub qualifying: u64,
    /// Qualifying couples up to swapping `F+` and `F-`.
    pub qualifying_unordered: u64,
    /// `min s*` over qualifying couples lies in `[min_sstar_lo, min_sstar_hi]`.
    #[serde(with = "rational::serde_str")]
    pub min_sstar_lo: Rational,
    #[serde(with = "rational::serde_str")]
    pub min_sstar_hi: Rational,
    /// Couple with the smallest certified upper bound.
    pub argmin: Option<CoupleConfig>,
    pub argmin_certified: Option<CertifiedValue>,
    /// Couples whose optimization hit the iteration cap.
    pub unconverged: u64,
}

/// All labelings of the `2^d` half-cells, i.e. [`enumerate_grid`] with `m = 2`.
pub fn enumerate_halfcell(d: usize, tau: &Rational, mode: ConditionMode, eps: &Rational) -> Result<EnumerationSummary> {
    if d > 4 {
        return Err(Error::Capacity(format!("half-cell enumeration supports d <= 4, got {d}")));
    }
    enumerate_grid(d, 2, tau, mode, eps)
}

/// Decode assignment `code` in base 3, cell 0 in the lowest digit.
fn decode(mut code: u64, cells: usize) -> Vec<u8> {
    (0..cells)
        .map(|_| {
            let l = (code % 3) as u8;
            code /= 3;
            l
        })
        .collect()
}

fn swap_code(labels: &[u8]) -> u64 {
    labels.iter().rev().fold(0u64, |acc, &l| {
        let s = match l {
            1 => 2,
            2 => 1,
            x => x,
        };
        acc * 3 + s as u64
    })
}

/// Every assignment of gap / plus / minus to the `m^d` cells.
///
/// Each swap pair `(F+, F-)`, `(F-, F+)` is optimized once, since `f` does
/// not see the order.
pub fn enumerate_grid(d: usize, m: u64, tau: &Rational, mode: ConditionMode, eps: &Rational) -> Result<EnumerationSummary> {
    if !tau.is_positive() {
        return Err(domain!("tau must be positive, got {}", rational::format(tau)));
    }
    if !eps.is_positive() {
        return Err(domain!("eps must be positive, got {}", rational::format(eps)));
    }
    let spec = GridSpec::new(d, m)?;
    let cells = spec.cell_count();
    let total = (cells < 64)
        .then(|| 3u128.checked_pow(cells as u32))
        .flatten()
        .filter(|&t| t <= MAX_ASSIGNMENTS)
        .ok_or_else(|| {
            Error::Capacity(format!("{cells} cells give more than {MAX_ASSIGNMENTS} assignments"))
        })? as u64;
    let cells = cells as usize;

    let canonical: Vec<(u64, CoupleConfig)> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let labels = decode(code, cells);
            if swap_code(&labels) < code {
                return None;
            }
            let cfg = CoupleConfig::from_labels(spec, &labels).ok()?;
            check_condition(&cfg, tau, mode).then_some((code, cfg))
        })
        .collect();
    let results: Vec<(u64, CoupleConfig, CertifiedValue)> = canonical
        .into_par_iter()
        .map(|(code, cfg)| optimize_certified(&cfg, eps).map(|v| (code, cfg, v)))
        .collect::<Result<_>>()?;

    let mut qualifying = 0;
    let mut unconverged = 0;
    for (code, _, v) in &results {
        let pair = if swap_code(&decode(*code, cells)) == *code { 1 } else { 2 };
        qualifying += pair;
        if !v.converged {
            unconverged += pair;
        }
    }
    let min_lo = results.iter().map(|r| r.2.lo.clone()).min();
    let best = results
        .iter()
        .min_by(|a, b| a.2.hi.cmp(&b.2.hi).then(a.0.cmp(&b.0)));
    Ok(EnumerationSummary {
        d,
        m,
        tau: tau.clone(),
        mode,
        total_assignments: total,
        qualifying,
        qualifying_unordered: results.len() as u64,
        min_sstar_lo: min_lo.unwrap_or_else(|| rational::rat(1, 2)),
        min_sstar_hi: best.map(|b| b.2.hi.clone()).unwrap_or_else(|| rational::rat(1, 2)),
        argmin: best.map(|b| b.1.clone()),
        argmin_certified: best.map(|b| b.2.clone()),
        unconverged,
    })
}

/// Parameters of [`random_search`].
#[derive(Clone, Debug)]
pub struct SearchParams {
    pub d: usize,
    pub m: u64,
    pub tau: Rational,
    pub mode: ConditionMode,
    /// Number of qualifying samples to draw.
    pub budget: u64,
    pub seed: u64,
    pub eps: Rational,
    /// Extra couples scored alongside the samples.
    pub inject: Vec<CoupleConfig>,
    /// Draw gap cells with probability 1/6 instead of 1/3.
    pub low_gap_bias: bool,
    /// Stamped on every record.
    pub timestamp: String,
}

impl SearchParams {
    pub fn new(d: usize, m: u64, tau: Rational, mode: ConditionMode, budget: u64, seed: u64, eps: Rational) -> Self {
        SearchParams {
            d,
            m,
            tau,
            mode,
            budget,
            seed,
            eps,
            inject: Vec::new(),
            low_gap_bias: false,
            timestamp: now(),
        }
    }
}

/// Current UTC time in RFC 3339 form.
pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Sample qualifying couples, optimize each distinct one and return records
/// sorted by `(certified.hi, id)`.
pub fn random_search(p: &SearchParams) -> Result<Vec<SearchRecord>> {
    if p.budget == 0 {
        return Err(domain!("budget must be at least 1"));
    }
    if !p.tau.is_positive() || !p.eps.is_positive() {
        return Err(domain!("tau and eps must be positive"));
    }
    let spec = GridSpec::new(p.d, p.m)?;
    let cells = spec.cell_count() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut pool: BTreeMap<(usize, u64, Vec<u8>), CoupleConfig> = BTreeMap::new();
    let mut drawn = 0u64;
    let mut rejected = 0u64;
    while drawn < p.budget {
        let labels: Vec<u8> = (0..cells)
            .map(|_| {
                if p.low_gap_bias {
                    match rng.gen_range(0..6) {
                        0 => 0,
                        1..=2 => 1,
                        _ => 2,
                    }
                } else {
                    rng.gen_range(0..3)
                }
            })
            .collect();
        match CoupleConfig::from_labels(spec, &labels) {
            Ok(cfg) if check_condition(&cfg, &p.tau, p.mode) => {
                drawn += 1;
                pool.entry((p.d, p.m, labels)).or_insert(cfg);
            }
            _ => {
                rejected += 1;
                if rejected > REJECTION_FACTOR * p.budget {
                    return Err(Error::Exhausted(format!(
                        "{rejected} rejections after {drawn} qualifying samples (d={}, m={}, tau={}, {})",
                        p.d,
                        p.m,
                        rational::format(&p.tau),
                        p.mode
                    )));
                }
            }
        }
    }
    for cfg in &p.inject {
        if !check_condition(cfg, &p.tau, p.mode) {
            return Err(domain!("injected couple does not satisfy the {} condition", p.mode));
        }
        let spec = cfg.spec();
        pool.entry((spec.d(), spec.m(), cfg.labels())).or_insert_with(|| cfg.clone());
    }

    let configs: Vec<CoupleConfig> = pool.into_values().collect();
    let mut records: Vec<SearchRecord> = configs
        .into_par_iter()
        .map(|cfg| {
            let v = optimize_certified(&cfg, &p.eps)?;
            SearchRecord::new(p.tau.clone(), p.mode, cfg, v, p.seed, p.timestamp.clone())
        })
        .collect::<Result<_>>()?;
    records.sort_by(|a, b| a.certified.hi.cmp(&b.certified.hi).then_with(|| a.id.cmp(&b.id)));
    records.dedup_by(|a, b| a.id == b.id);

    // a record below the proven lower bound means the optimizer is wrong
    for r in &records {
        let phi = bounds::phi_lower(&crate::surd::QuadSurd::from_rational(p.tau.clone()), r.spec.d())?;
        if phi.cmp_rational(&(&r.certified.hi + &p.eps)) == std::cmp::Ordering::Greater {
            return Err(Error::Inconsistent(format!(
                "record {} has certified hi below phi(tau, d)",
                r.id
            )));
        }
    }
    Ok(records)
}

/// What a single couple says about a candidate pair `(τ, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// The couple does not contradict `(τ, s)`.
    Consistent,
    /// The couple qualifies and every cube has `f < s`, so `(τ, s)` is not a pair.
    Refuted,
    /// The enclosure straddles `s`.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub verdict: Verdict,
    pub condition_holds: bool,
    pub certified: Option<CertifiedValue>,
}

/// Test `(τ, s)` against one couple.
pub fn verify_js_candidate(
    tau: &Rational,
    s: &Rational,
    cfg: &CoupleConfig,
    mode: ConditionMode,
    eps: &Rational,
) -> Result<Verification> {
    if !tau.is_positive() || !s.is_positive() {
        return Err(domain!("tau and s must be positive"));
    }
    if !check_condition(cfg, tau, mode) {
        return Ok(Verification { verdict: Verdict::Consistent, condition_holds: false, certified: None });
    }
    let v = optimize_certified_with(cfg, &OptimizeOptions::new(eps.clone()).with_target(s.clone()))?;
    let verdict = if v.hi < *s {
        Verdict::Refuted
    } else if v.lo >= *s {
        Verdict::Consistent
    } else {
        Verdict::Inconclusive
    };
    Ok(Verification { verdict, condition_holds: true, certified: Some(v) })
}

/// `(F+ × [0,1], F- × [0,1])`.
pub fn lift_config(cfg: &CoupleConfig) -> Result<CoupleConfig> {
    CoupleConfig::new(cfg.f_plus().lift()?, cfg.f_minus().lift()?)
}
