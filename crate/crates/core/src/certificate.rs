//! Certificates for `|A +' B| >= min{p, |A| + |B| - 2}` (`|A| != |B|`) and
//! for the diagonal bound `|A +' A| >= min{p, 2|A| - 3}`.
//!
//! Three arguments are used, selected by the sizes `m = |A|`, `k = |B|`:
//!
//! * one of the sets is a singleton `{a0}`: the sums `a0 + b` with `b != a0`
//!   are distinct, so the restricted sumset itself is the witness;
//! * `m + k - 2 <= p`, both sizes at least 2: extremal weights on `A` and `B`
//!   induce weights on `C = A +' B` whose excess index is exactly `m + k - 3`,
//!   forcing `|C| >= m + k - 2`;
//! * `m + k - 2 > p`: both sets are first trimmed to `A'`, `B'` with
//!   `|A'| + |B'| - 2 = p` and `|A'| != |B'|`, then the previous argument runs
//!   on the trimmed pair.
//!
//! The diagonal bound removes `a0 = min A` and certifies the pair `(A, A \ {a0})`,
//! which has the same restricted sumset.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::PrimeField;
use crate::moments::{
    extremal_weights, induced_weights, MomentError, MomentProfile, WeightSequence,
};
use crate::sumset::{anr_bound, eh_bound, restricted_sumset, FpSet, SetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("equal sizes: |A| = |B| = {0}")]
    EqualSizes(usize),
    #[error("not oversized: |A| + |B| - 2 = {0} <= p = {1}")]
    NotOversized(u64, u64),
    #[error("reduction invariant violated: {0}")]
    ReductionInvariant(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Moment(#[from] MomentError),
}

/// Which argument a certificate carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Singleton,
    Main,
    ReducedThenMain,
    EhCorollary,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Singleton => "singleton",
            Route::Main => "main",
            Route::ReducedThenMain => "reduced-then-main",
            Route::EhCorollary => "eh-corollary",
        }
    }
}

/// Trimming of an oversized pair down to `|A'| + |B'| - 2 = p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub removed_from_a: FpSet,
    pub removed_from_b: FpSet,
    pub a_prime: FpSet,
    pub b_prime: FpSet,
    pub d: u64,
    pub d1: u64,
    pub d2: u64,
}

impl Reduction {
    pub fn to_record(&self) -> ReductionRecord {
        ReductionRecord {
            removed_from_a: self.removed_from_a.elements().to_vec(),
            removed_from_b: self.removed_from_b.elements().to_vec(),
            a_prime: self.a_prime.elements().to_vec(),
            b_prime: self.b_prime.elements().to_vec(),
            d: self.d,
            d1: self.d1,
            d2: self.d2,
        }
    }
}

/// Splits `d = |A| + |B| - 2 - p` as `d1 = floor(d/2)`, `d2 = ceil(d/2)` and
/// removes the `d2` largest residues from the smaller set and the `d1`
/// largest from the larger one.
pub fn reduce_oversized(a: &FpSet, b: &FpSet) -> Result<Reduction, CertError> {
    if a.field() != b.field() {
        return Err(SetError::ModulusMismatch(a.field().modulus(), b.field().modulus()).into());
    }
    if a.is_empty() || b.is_empty() {
        return Err(SetError::EmptyInput.into());
    }
    let p = a.field().modulus();
    let (m, k) = (a.len() as u64, b.len() as u64);
    if m + k - 2 <= p {
        return Err(CertError::NotOversized(m + k - 2, p));
    }
    if m == k {
        return Err(CertError::EqualSizes(a.len()));
    }
    let d = m + k - 2 - p;
    let (d1, d2) = (d / 2, d - d / 2);
    let (cut_a, cut_b) = if m < k { (d2, d1) } else { (d1, d2) };
    let (a_prime, removed_from_a) = a.split_largest(cut_a as usize);
    let (b_prime, removed_from_b) = b.split_largest(cut_b as usize);

    let r = Reduction {
        removed_from_a,
        removed_from_b,
        a_prime,
        b_prime,
        d,
        d1,
        d2,
    };
    let (m2, k2) = (r.a_prime.len() as u64, r.b_prime.len() as u64);
    if m2 == 0 || k2 == 0 {
        return Err(CertError::ReductionInvariant(
            "a trimmed set is empty".into(),
        ));
    }
    if m2 + k2 - 2 != p {
        return Err(CertError::ReductionInvariant(format!(
            "|A'| + |B'| - 2 = {} != p = {p}",
            m2 + k2 - 2
        )));
    }
    if m2 == k2 {
        return Err(CertError::ReductionInvariant(format!("|A'| = |B'| = {m2}")));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionRecord {
    #[serde(rename = "removed_from_A")]
    pub removed_from_a: Vec<u64>,
    #[serde(rename = "removed_from_B")]
    pub removed_from_b: Vec<u64>,
    #[serde(rename = "A_prime")]
    pub a_prime: Vec<u64>,
    #[serde(rename = "B_prime")]
    pub b_prime: Vec<u64>,
    pub d: u64,
    pub d1: u64,
    pub d2: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub element: u64,
    pub weight: u64,
}

/// `C(n, r_choice) - C(n, s_choice) mod p` with `n = m + k - 3`,
/// `r_choice = m - 2`, `s_choice = k - 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinomialCheck {
    pub n: u64,
    pub r_choice: u64,
    pub s_choice: u64,
    pub value: u64,
}

/// The serialized witness bundle. Every residue is a plain integer so that a
/// certificate read from disk can be checked without trusting it.
///
/// Singleton-route certificates leave the weight and moment fields empty
/// (`[]`/`null`); the stored `C` is then the witness list of sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub p: u64,
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<u64>,
    pub route: Route,
    pub reduction: Option<ReductionRecord>,
    pub w1: Vec<WeightEntry>,
    pub w2: Vec<WeightEntry>,
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
    pub gamma: Vec<u64>,
    #[serde(rename = "e_C")]
    pub e_c: Option<u64>,
    pub binomial_check: Option<BinomialCheck>,
    pub claimed_bound: u64,
    #[serde(rename = "C")]
    pub c: Vec<u64>,
    #[serde(rename = "C_size")]
    pub c_size: u64,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Post-reduction sizes `(m, k)` the moment argument ran on, if any.
    pub fn main_sizes(&self) -> Option<(usize, usize)> {
        if self.w1.is_empty() {
            return None;
        }
        Some((self.w1.len(), self.w2.len()))
    }
}

fn entries(w: &WeightSequence) -> Vec<WeightEntry> {
    w.pairs()
        .map(|(element, weight)| WeightEntry {
            element,
            weight: weight.value(),
        })
        .collect()
}

fn check_inputs(a: &FpSet, b: &FpSet) -> Result<PrimeField, CertError> {
    if a.field() != b.field() {
        return Err(SetError::ModulusMismatch(a.field().modulus(), b.field().modulus()).into());
    }
    if a.is_empty() || b.is_empty() {
        return Err(SetError::EmptyInput.into());
    }
    Ok(a.field())
}

/// Certifies `|A +' B| >= min{p, |A| + |B| - 2}` for `|A| != |B|`.
pub fn certify_anr(a: &FpSet, b: &FpSet) -> Result<Certificate, CertError> {
    let field = check_inputs(a, b)?;
    if a.len() == b.len() {
        return Err(CertError::EqualSizes(a.len()));
    }
    let p = field.modulus();
    let (m, k) = (a.len() as u64, b.len() as u64);
    let c = restricted_sumset(a, b)?;
    let mut cert = Certificate {
        p,
        a: a.elements().to_vec(),
        b: b.elements().to_vec(),
        route: Route::Singleton,
        reduction: None,
        w1: Vec::new(),
        w2: Vec::new(),
        alpha: Vec::new(),
        beta: Vec::new(),
        gamma: Vec::new(),
        e_c: None,
        binomial_check: None,
        claimed_bound: anr_bound(p, m, k),
        c: c.elements().to_vec(),
        c_size: c.len() as u64,
    };

    if m.min(k) == 1 {
        if cert.c_size < cert.claimed_bound {
            return Err(CertError::Inconsistent(format!(
                "singleton witness has {} sums, bound {}",
                cert.c_size, cert.claimed_bound
            )));
        }
        return Ok(cert);
    }

    let (a_star, b_star) = if m + k - 2 > p {
        let r = reduce_oversized(a, b)?;
        let pair = (r.a_prime.clone(), r.b_prime.clone());
        cert.route = Route::ReducedThenMain;
        cert.reduction = Some(r.to_record());
        pair
    } else {
        cert.route = Route::Main;
        (a.clone(), b.clone())
    };
    fill_main(&mut cert, &a_star, &b_star)?;
    Ok(cert)
}

fn fill_main(cert: &mut Certificate, a: &FpSet, b: &FpSet) -> Result<(), CertError> {
    let field = a.field();
    let (m, k) = (a.len(), b.len());
    let n = m + k - 3;

    let w1 = extremal_weights(a)?;
    let w2 = extremal_weights(b)?;
    let alpha = MomentProfile::with_prefix(w1.clone(), n + 1);
    let beta = MomentProfile::with_prefix(w2.clone(), n + 1);
    let induced = induced_weights(&w1, &w2)?;
    let mut gamma = MomentProfile::with_prefix(induced, n);

    let e_c = gamma.excess()?;
    if e_c != n {
        return Err(CertError::Inconsistent(format!(
            "excess index of the induced weights is {e_c}, expected {n}"
        )));
    }
    let (r, s) = (m as u64 - 2, k as u64 - 2);
    let value = field.binomial(n as u64, r) - field.binomial(n as u64, s);
    if value.is_zero() {
        return Err(CertError::Inconsistent(format!(
            "C({n},{r}) - C({n},{s}) vanishes mod {}",
            field.modulus()
        )));
    }

    cert.w1 = entries(&w1);
    cert.w2 = entries(&w2);
    cert.alpha = alpha.values();
    cert.beta = beta.values();
    cert.gamma = gamma.values()[..=n].to_vec();
    cert.e_c = Some(e_c as u64);
    cert.binomial_check = Some(BinomialCheck {
        n: n as u64,
        r_choice: r,
        s_choice: s,
        value: value.value(),
    });
    if cert.c_size < cert.claimed_bound {
        return Err(CertError::Inconsistent(format!(
            "|C| = {} below bound {}",
            cert.c_size, cert.claimed_bound
        )));
    }
    Ok(())
}

/// Certifies `|A +' A| >= min{p, 2|A| - 3}` through the pair `(A, A \ {min A})`.
pub fn certify_eh(a: &FpSet) -> Result<Certificate, CertError> {
    if a.is_empty() {
        return Err(SetError::EmptyInput.into());
    }
    let p = a.field().modulus();
    let m = a.len() as u64;
    if m == 1 {
        return Ok(Certificate {
            p,
            a: a.elements().to_vec(),
            b: Vec::new(),
            route: Route::EhCorollary,
            reduction: None,
            w1: Vec::new(),
            w2: Vec::new(),
            alpha: Vec::new(),
            beta: Vec::new(),
            gamma: Vec::new(),
            e_c: None,
            binomial_check: None,
            claimed_bound: eh_bound(p, 1),
            c: Vec::new(),
            c_size: 0,
        });
    }
    let a0 = a.min().expect("nonempty");
    let a_minus = a.without(a0);
    let full = restricted_sumset(a, a)?;
    if restricted_sumset(a, &a_minus)? != full {
        return Err(CertError::Inconsistent(
            "A +' A differs from A +' (A \\ {a0})".into(),
        ));
    }
    let mut cert = certify_anr(a, &a_minus)?;
    cert.route = Route::EhCorollary;
    cert.claimed_bound = eh_bound(p, m);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: u64, v: &[u64]) -> FpSet {
        FpSet::new(PrimeField::new(p).unwrap(), v.iter().copied()).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_oversized(&set(5, &[0, 1, 2, 3]), &set(5, &[0, 1, 2, 3, 4])).unwrap();
        assert_eq!((r.d, r.d1, r.d2), (2, 1, 1));
        assert_eq!(r.a_prime.elements(), &[0, 1, 2]);
        assert_eq!(r.b_prime.elements(), &[0, 1, 2, 3]);
        assert_eq!(r.removed_from_a.elements(), &[3]);
        assert_eq!(r.removed_from_b.elements(), &[4]);

        assert_eq!(
            reduce_oversized(&set(3, &[0, 1]), &set(3, &[0, 1, 2])),
            Err(CertError::NotOversized(3, 3))
        );

        let r = reduce_oversized(&set(5, &[0, 1, 2, 3, 4]), &set(5, &[0, 1, 2, 3])).unwrap();
        assert_eq!(r.a_prime.len(), 4);
        assert_eq!(r.b_prime.len(), 3);
    }

    #[test]
    fn reduction_with_odd_excess() {
        // p = 7, m = 6, k = 7: d = 4
        let r = reduce_oversized(
            &set(7, &[0, 1, 2, 3, 4, 5]),
            &set(7, &[0, 1, 2, 3, 4, 5, 6]),
        )
        .unwrap();
        assert_eq!((r.d, r.d1, r.d2), (4, 2, 2));
        assert_eq!((r.a_prime.len(), r.b_prime.len()), (4, 5));
        // p = 7, m = 5, k = 7: d = 3, smaller set loses d2 = 2
        let r =
            reduce_oversized(&set(7, &[0, 1, 2, 3, 4]), &set(7, &[0, 1, 2, 3, 4, 5, 6])).unwrap();
        assert_eq!((r.d, r.d1, r.d2), (3, 1, 2));
        assert_eq!((r.a_prime.len(), r.b_prime.len()), (3, 6));
    }

    #[test]
    fn reduction_equal_sizes() {
        assert_eq!(
            reduce_oversized(&set(5, &[0, 1, 2, 3, 4]), &set(5, &[0, 1, 2, 3, 4])),
            Err(CertError::EqualSizes(5))
        );
    }

    #[test]
    fn worked_main_route() {
        let cert = certify_anr(&set(5, &[1, 2]), &set(5, &[0, 1, 2])).unwrap();
        assert_eq!(cert.route, Route::Main);
        let w: Vec<_> = cert.w1.iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![4, 1]);
        let w: Vec<_> = cert.w2.iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![3, 4, 3]);
        assert_eq!(cert.gamma, vec![0, 0, 4]);
        assert_eq!(cert.e_c, Some(2));
        assert_eq!(cert.binomial_check.unwrap().value, 4);
        assert_eq!(cert.claimed_bound, 3);
        assert_eq!(cert.c, vec![1, 2, 3]);
        assert_eq!(cert.c_size, 3);
    }

    #[test]
    fn singleton_route() {
        let cert = certify_anr(&set(5, &[2]), &set(5, &[0, 1, 2])).unwrap();
        assert_eq!(cert.route, Route::Singleton);
        assert_eq!(cert.claimed_bound, 2);
        assert_eq!(cert.c, vec![2, 3]);
        assert_eq!(cert.c_size, 2);
        assert!(cert.w1.is_empty() && cert.e_c.is_none());
    }

    #[test]
    fn equal_sizes_rejected() {
        assert_eq!(
            certify_anr(&set(5, &[1, 2]), &set(5, &[1, 3])),
            Err(CertError::EqualSizes(2))
        );
    }

    #[test]
    fn eh_examples() {
        let cert = certify_eh(&set(5, &[0, 1, 2])).unwrap();
        assert_eq!(cert.route, Route::EhCorollary);
        assert_eq!(cert.claimed_bound, 3);
        assert_eq!(cert.c, vec![1, 2, 3]);

        let cert = certify_eh(&set(5, &[4])).unwrap();
        assert_eq!(cert.claimed_bound, 0);
        assert!(cert.c.is_empty());

        let cert = certify_eh(&set(7, &[0, 1, 2, 3, 4, 5, 6])).unwrap();
        assert_eq!(cert.claimed_bound, 7);
        assert!(cert.reduction.is_some());
        assert_eq!(cert.c_size, 7);
    }

    #[test]
    fn json_round_trip_and_schema() {
        let cert = certify_anr(
            &set(7, &[0, 1, 2, 3, 4, 5]),
            &set(7, &[0, 1, 2, 3, 4, 5, 6]),
        )
        .unwrap();
        let json = cert.to_json();
        assert_eq!(Certificate::from_json(&json).unwrap(), cert);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        for key in [
            "p",
            "A",
            "B",
            "route",
            "reduction",
            "w1",
            "w2",
            "alpha",
            "beta",
            "gamma",
            "e_C",
            "binomial_check",
            "claimed_bound",
            "C",
            "C_size",
        ] {
            assert!(keys.contains(&key.to_string()), "missing {key}");
        }
        assert_eq!(keys.len(), 15);
        assert_eq!(v["route"], "reduced-then-main");
        assert!(v["reduction"]["A_prime"].is_array());

        let mut obj = v.as_object().unwrap().clone();
        obj.insert("extra".into(), serde_json::json!(1));
        assert!(Certificate::from_json(&serde_json::Value::Object(obj).to_string()).is_err());
    }
}
