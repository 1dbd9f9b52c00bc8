//! Brute-force ground truth for the sumset bounds.
//!
//! Subsets of Z/pZ are bitmasks here (bit `x` set iff `x` is in the set), so
//! exhaustive sweeps are limited to `p <= 63`. A shifted sumset is a cyclic
//! rotation of the mask. None of this goes through the moment machinery.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certificate::certify_anr;
use crate::field::{is_prime, PrimeField};
use crate::sumset::{anr_bound, cd_bound, eh_bound, FpSet};
use crate::verify::verify_certificate;

pub const DEFAULT_CAP: u64 = 1 << 24;
pub const DEFAULT_TIGHT_LIMIT: usize = 100_000;
const MAX_MASK_MODULUS: u64 = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not prime")]
    CompositeModulus(u64),
    #[error("budget exceeded: {pairs} cases > cap {cap}; use a seeded random sampler")]
    BudgetExceeded { pairs: u128, cap: u64 },
    #[error("p = {0} is too large for bitmask enumeration (p <= 63)")]
    ModulusTooLarge(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// `|A +' B| >= min{p, |A|+|B|-2}` over pairs with `|A| != |B|`.
    Anr,
    /// `|A +' A| >= min{p, 2|A|-3}`.
    Eh,
    /// `|A + B| >= min{p, |A|+|B|-1}`.
    Cd,
}

impl std::str::FromStr for BoundKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "anr" => Ok(Self::Anr),
            "eh" => Ok(Self::Eh),
            "cd" => Ok(Self::Cd),
            other => Err(format!(
                "unknown bound kind {other:?} (expected anr, eh or cd)"
            )),
        }
    }
}

/// Restrict a sweep to given set sizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SizeFilter {
    pub a: Option<u32>,
    pub b: Option<u32>,
}

impl SizeFilter {
    fn admits(&self, a: u64, b: u64) -> bool {
        self.a.is_none_or(|s| a.count_ones() == s) && self.b.is_none_or(|s| b.count_ones() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RandomSampler {
    pub seed: u64,
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOptions {
    pub cap: u64,
    pub workers: Option<usize>,
    pub size_filter: SizeFilter,
    /// When set, draw this many cases instead of enumerating.
    pub random: Option<RandomSampler>,
    /// At most this many tight cases are kept (all are counted).
    pub tight_limit: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            workers: None,
            size_filter: SizeFilter::default(),
            random: None,
            tight_limit: DEFAULT_TIGHT_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<u64>,
    pub actual: u64,
    pub bound: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TightCase {
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<u64>,
    pub size: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuntimeStats {
    pub elapsed_ms: f64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub p: u64,
    pub kind: BoundKind,
    pub mode: &'static str,
    pub seed: Option<u64>,
    pub pairs_checked: u64,
    pub violations: Vec<Violation>,
    pub tight_count: u64,
    pub tight_pairs: Vec<TightCase>,
    pub runtime_stats: RuntimeStats,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes the tight cases as CSV with columns `A`, `B`, `size`.
    pub fn write_tight_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["A", "B", "size"])?;
        for t in &self.tight_pairs {
            out.write_record([join(&t.a), join(&t.b), t.size.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Same content modulo timing.
    pub fn same_outcome(&self, other: &Self) -> bool {
        (
            self.p,
            self.kind,
            self.mode,
            self.seed,
            self.pairs_checked,
            self.tight_count,
        ) == (
            other.p,
            other.kind,
            other.mode,
            other.seed,
            other.pairs_checked,
            other.tight_count,
        ) && self.violations == other.violations
            && self.tight_pairs == other.tight_pairs
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Set bits of `mask` as residues.
pub fn mask_to_set(mask: u64) -> Vec<u64> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn set_to_mask(set: &[u64]) -> u64 {
    set.iter().fold(0, |m, &x| m | 1 << x)
}

#[inline]
fn rotate(x: u64, s: u64, p: u64, full: u64) -> u64 {
    if s == 0 {
        x
    } else {
        ((x << s) | (x >> (p - s))) & full
    }
}

fn full_mask(p: u64) -> u64 {
    (1u64 << p) - 1
}

/// `A + B` as a mask.
pub fn sumset_mask(p: u64, a: u64, b: u64) -> u64 {
    let full = full_mask(p);
    let mut acc = 0;
    let mut rest = a;
    while rest != 0 {
        let x = rest.trailing_zeros() as u64;
        rest &= rest - 1;
        acc |= rotate(b, x, p, full);
    }
    acc
}

/// `A +' B` as a mask.
pub fn restricted_sumset_mask(p: u64, a: u64, b: u64) -> u64 {
    let full = full_mask(p);
    let mut acc = 0;
    let mut rest = a;
    while rest != 0 {
        let x = rest.trailing_zeros() as u64;
        rest &= rest - 1;
        acc |= rotate(b & !(1 << x), x, p, full);
    }
    acc
}

/// `|A +' B|` by direct double loop over residue lists (any `p`).
pub fn restricted_sumset_size(p: u64, a: &[u64], b: &[u64]) -> u64 {
    let mut sums = BTreeSet::new();
    for &x in a {
        for &y in b {
            if x != y {
                sums.insert(((x as u128 + y as u128) % p as u128) as u64);
            }
        }
    }
    sums.len() as u64
}

#[derive(Default)]
struct Partial {
    checked: u64,
    violations: Vec<Violation>,
    tight_count: u64,
    tight: Vec<TightCase>,
}

impl Partial {
    fn merge(mut self, other: Partial, tight_limit: usize) -> Partial {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self.tight_count += other.tight_count;
        let room = tight_limit.saturating_sub(self.tight.len());
        self.tight.extend(other.tight.into_iter().take(room));
        self
    }
}

fn check_case(p: u64, kind: BoundKind, a: u64, b: u64, part: &mut Partial, tight_limit: usize) {
    let (m, k) = (a.count_ones() as u64, b.count_ones() as u64);
    let (actual, bound) = match kind {
        BoundKind::Anr => (
            restricted_sumset_mask(p, a, b).count_ones() as u64,
            anr_bound(p, m, k),
        ),
        BoundKind::Eh => (
            restricted_sumset_mask(p, a, a).count_ones() as u64,
            eh_bound(p, m),
        ),
        BoundKind::Cd => (sumset_mask(p, a, b).count_ones() as u64, cd_bound(p, m, k)),
    };
    part.checked += 1;
    if actual < bound {
        part.violations.push(Violation {
            a: mask_to_set(a),
            b: mask_to_set(b),
            actual,
            bound,
            reason: "sumset smaller than bound".into(),
        });
    } else if actual == bound {
        part.tight_count += 1;
        if part.tight.len() < tight_limit {
            part.tight.push(TightCase {
                a: mask_to_set(a),
                b: mask_to_set(b),
                size: actual,
            });
        }
    }
}

fn admissible(kind: BoundKind, filter: &SizeFilter, a: u64, b: u64) -> bool {
    match kind {
        BoundKind::Anr => a.count_ones() != b.count_ones() && filter.admits(a, b),
        BoundKind::Eh => filter.admits(a, a),
        BoundKind::Cd => filter.admits(a, b),
    }
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> (T, usize) {
    match workers {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool");
            (pool.install(job), n)
        }
        _ => (job(), rayon::current_num_threads()),
    }
}

fn validate(p: u64) -> Result<(), OracleError> {
    if !is_prime(p) {
        return Err(OracleError::CompositeModulus(p));
    }
    Ok(())
}

/// Case count of an exhaustive sweep before size filtering.
pub fn exhaustive_case_count(p: u64, kind: BoundKind) -> u128 {
    let sets = if p >= 127 {
        u128::MAX
    } else {
        (1u128 << p) - 1
    };
    match kind {
        BoundKind::Eh => sets,
        _ => sets.saturating_mul(sets),
    }
}

/// Draws `samples` admissible mask cases from a seeded generator. Gives up
/// after `1000 * samples` rejected draws.
fn draw_masks(
    p: u64,
    kind: BoundKind,
    filter: &SizeFilter,
    sampler: RandomSampler,
) -> Vec<(u64, u64)> {
    let full = full_mask(p);
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let mut out = Vec::with_capacity(sampler.samples as usize);
    let mut attempts = 0u64;
    while (out.len() as u64) < sampler.samples && attempts < sampler.samples.saturating_mul(1000) {
        attempts += 1;
        let a = rng.random::<u64>() & full;
        let b = if kind == BoundKind::Eh {
            a
        } else {
            rng.random::<u64>() & full
        };
        if a == 0 || b == 0 || !admissible(kind, filter, a, b) {
            continue;
        }
        out.push((a, b));
    }
    out
}

/// Checks a bound on every nonempty pair (or every set, for `Eh`), or on a
/// seeded random sample when `options.random` is set.
pub fn sweep_exhaustive(
    p: u64,
    kind: BoundKind,
    options: &SweepOptions,
) -> Result<SweepReport, OracleError> {
    validate(p)?;
    if p > MAX_MASK_MODULUS {
        return Err(OracleError::ModulusTooLarge(p));
    }
    let start = Instant::now();
    let limit = options.tight_limit;
    let filter = options.size_filter;

    let (part, workers, mode, seed) = if let Some(sampler) = options.random {
        let cases = draw_masks(p, kind, &filter, sampler);
        let (part, workers) = with_workers(options.workers, || {
            cases
                .par_chunks(4096)
                .map(|chunk| {
                    let mut part = Partial::default();
                    for &(a, b) in chunk {
                        check_case(p, kind, a, b, &mut part, limit);
                    }
                    part
                })
                .collect::<Vec<_>>()
                .into_iter()
                .fold(Partial::default(), |acc, x| acc.merge(x, limit))
        });
        (part, workers, "random", Some(sampler.seed))
    } else {
        let total = exhaustive_case_count(p, kind);
        if total > options.cap as u128 {
            return Err(OracleError::BudgetExceeded {
                pairs: total,
                cap: options.cap,
            });
        }
        let full = full_mask(p);
        let (part, workers) = with_workers(options.workers, || {
            (1..=full)
                .into_par_iter()
                .map(|a| {
                    let mut part = Partial::default();
                    match kind {
                        BoundKind::Eh => {
                            if admissible(kind, &filter, a, a) {
                                check_case(p, kind, a, a, &mut part, limit);
                            }
                        }
                        _ => {
                            for b in 1..=full {
                                if admissible(kind, &filter, a, b) {
                                    check_case(p, kind, a, b, &mut part, limit);
                                }
                            }
                        }
                    }
                    part
                })
                .collect::<Vec<_>>()
                .into_iter()
                .fold(Partial::default(), |acc, x| acc.merge(x, limit))
        });
        (part, workers, "exhaustive", None)
    };

    Ok(SweepReport {
        p,
        kind,
        mode,
        seed,
        pairs_checked: part.checked,
        violations: part.violations,
        tight_count: part.tight_count,
        tight_pairs: part.tight,
        runtime_stats: RuntimeStats {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            workers,
        },
    })
}

/// Source of `(A, B)` pairs for [`cross_check_certificates`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sampler {
    /// Every pair of nonempty subsets with distinct sizes.
    Exhaustive,
    Random(RandomSampler),
    /// Explicit pairs; equal-size pairs are skipped.
    Pairs(Vec<(Vec<u64>, Vec<u64>)>),
}

/// Generates a certificate for each sampled pair, verifies it, and compares
/// the claimed bound with the formula and with brute-force enumeration.
/// Generator errors are recorded as violations.
pub fn cross_check_certificates(
    p: u64,
    sampler: &Sampler,
    options: &SweepOptions,
) -> Result<SweepReport, OracleError> {
    validate(p)?;
    let field = PrimeField::new(p).map_err(|_| OracleError::ModulusTooLarge(p))?;
    let start = Instant::now();
    let limit = options.tight_limit;

    let (cases, mode, seed): (Vec<(Vec<u64>, Vec<u64>)>, _, _) = match sampler {
        Sampler::Exhaustive => {
            if p > MAX_MASK_MODULUS {
                return Err(OracleError::ModulusTooLarge(p));
            }
            let total = exhaustive_case_count(p, BoundKind::Anr);
            if total > options.cap as u128 {
                return Err(OracleError::BudgetExceeded {
                    pairs: total,
                    cap: options.cap,
                });
            }
            let full = full_mask(p);
            let filter = options.size_filter;
            let cases = (1..=full)
                .flat_map(|a| (1..=full).map(move |b| (a, b)))
                .filter(|&(a, b)| admissible(BoundKind::Anr, &filter, a, b))
                .map(|(a, b)| (mask_to_set(a), mask_to_set(b)))
                .collect();
            (cases, "exhaustive", None)
        }
        Sampler::Random(r) => {
            if p > MAX_MASK_MODULUS {
                return Err(OracleError::ModulusTooLarge(p));
            }
            let cases = draw_masks(p, BoundKind::Anr, &options.size_filter, *r)
                .into_iter()
                .map(|(a, b)| (mask_to_set(a), mask_to_set(b)))
                .collect();
            (cases, "random", Some(r.seed))
        }
        Sampler::Pairs(pairs) => {
            let cases = pairs
                .iter()
                .filter(|(a, b)| a.len() != b.len())
                .cloned()
                .collect();
            (cases, "pairs", None)
        }
    };

    let (part, workers) = with_workers(options.workers, || {
        cases
            .par_chunks(256)
            .map(|chunk| {
                let mut part = Partial::default();
                for (a, b) in chunk {
                    cross_check_one(field, a, b, &mut part, limit);
                }
                part
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Partial::default(), |acc, x| acc.merge(x, limit))
    });

    Ok(SweepReport {
        p,
        kind: BoundKind::Anr,
        mode,
        seed,
        pairs_checked: part.checked,
        violations: part.violations,
        tight_count: part.tight_count,
        tight_pairs: part.tight,
        runtime_stats: RuntimeStats {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            workers,
        },
    })
}

fn cross_check_one(
    field: PrimeField,
    a: &[u64],
    b: &[u64],
    part: &mut Partial,
    tight_limit: usize,
) {
    part.checked += 1;
    let p = field.modulus();
    let actual = restricted_sumset_size(p, a, b);
    let bound = anr_bound(p, a.len() as u64, b.len() as u64);
    let violation = |reason: String| Violation {
        a: a.to_vec(),
        b: b.to_vec(),
        actual,
        bound,
        reason,
    };
    let sets = FpSet::new(field, a.iter().copied())
        .and_then(|sa| Ok((sa, FpSet::new(field, b.iter().copied())?)));
    let (sa, sb) = match sets {
        Ok(s) => s,
        Err(e) => {
            part.violations
                .push(violation(format!("invalid input: {e}")));
            return;
        }
    };
    let cert = match certify_anr(&sa, &sb) {
        Ok(c) => c,
        Err(e) => {
            part.violations
                .push(violation(format!("certify_anr failed: {e}")));
            return;
        }
    };
    let report = verify_certificate(&cert);
    if let Some(fail) = report.first_failure() {
        part.violations
            .push(violation(format!("verification failed at {}", fail.name)));
    } else if cert.claimed_bound != bound {
        part.violations.push(violation(format!(
            "claimed bound {} differs from formula {bound}",
            cert.claimed_bound
        )));
    } else if cert.claimed_bound > actual {
        part.violations
            .push(violation("claimed bound exceeds enumerated size".into()));
    } else if cert.c_size != actual {
        part.violations.push(violation(format!(
            "certificate |C| = {} but enumeration gives {actual}",
            cert.c_size
        )));
    } else if actual == bound {
        part.tight_count += 1;
        if part.tight.len() < tight_limit {
            part.tight.push(TightCase {
                a: a.to_vec(),
                b: b.to_vec(),
                size: actual,
            });
        }
    }
}
