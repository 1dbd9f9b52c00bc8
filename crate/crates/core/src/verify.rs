//! Independent checking of [`Certificate`]s.
//!
//! Only `p`, the two sets, the route, the reduction and the weights are taken
//! on trust as inputs; every moment, the induced weights, the excess index,
//! the binomial coefficient and the restricted sumset are recomputed here
//! with plain loops and compared against what the certificate stores. Checks
//! run in a fixed order and stop at the first failure.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::certificate::{Certificate, Route, WeightEntry};
use crate::field::{FieldElement, PrimeField};
use crate::sumset::{anr_bound, eh_bound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

struct Stop;

#[derive(Default)]
struct Checks(Vec<CheckResult>);

impl Checks {
    fn check(
        &mut self,
        name: &'static str,
        passed: bool,
        detail: impl Into<String>,
    ) -> Result<(), Stop> {
        self.0.push(CheckResult {
            name,
            passed,
            detail: detail.into(),
        });
        if passed {
            Ok(())
        } else {
            Err(Stop)
        }
    }
}

/// Parses and verifies a certificate document. Schema violations (unknown
/// fields, negative or non-integer numbers) are reported as a failed `schema`
/// check.
pub fn verify_json(json: &str) -> VerificationReport {
    match Certificate::from_json(json) {
        Ok(cert) => verify_certificate(&cert),
        Err(e) => VerificationReport {
            verdict: Verdict::Fail,
            checks: vec![CheckResult {
                name: "schema",
                passed: false,
                detail: e.to_string(),
            }],
        },
    }
}

pub fn verify_certificate(cert: &Certificate) -> VerificationReport {
    let mut checks = Checks::default();
    let _ = run(cert, &mut checks);
    let verdict = if checks.0.iter().all(|c| c.passed) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    VerificationReport {
        verdict,
        checks: checks.0,
    }
}

fn canonical(set: &[u64], p: u64) -> bool {
    set.windows(2).all(|w| w[0] < w[1]) && set.last().is_none_or(|&x| x < p)
}

fn restricted_sums(f: &PrimeField, a: &[u64], b: &[u64]) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for &x in a {
        for &y in b {
            if x != y {
                out.insert((f.element(x) + f.element(y)).value());
            }
        }
    }
    out
}

fn is_subset(sub: &[u64], sup: &[u64]) -> bool {
    sub.iter().all(|x| sup.binary_search(x).is_ok())
}

/// `sum_j w_j * x_j^i` for `i = 0..=upto`.
fn moments(f: &PrimeField, pts: &[(u64, FieldElement)], upto: usize) -> Vec<FieldElement> {
    (0..=upto)
        .map(|i| {
            pts.iter().fold(f.zero(), |acc, &(x, w)| {
                acc + w * f.element(x).pow(i as u64)
            })
        })
        .collect()
}

fn as_values(v: &[FieldElement]) -> Vec<u64> {
    v.iter().map(|x| x.value()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Argument {
    Empty,
    Singleton,
    Main,
    Reduced,
}

fn run(cert: &Certificate, ck: &mut Checks) -> Result<(), Stop> {
    let p = cert.p;
    let field = PrimeField::new(p);
    ck.check(
        "field-prime",
        field.is_ok(),
        field
            .as_ref()
            .map_or_else(|e| e.to_string(), |f| f.to_string()),
    )?;
    let f = field.expect("checked");

    let (a, b) = (&cert.a[..], &cert.b[..]);
    ck.check(
        "sets-canonical",
        canonical(a, p) && canonical(b, p),
        "A and B strictly increasing residues",
    )?;
    let (m, k) = (a.len(), b.len());

    let eh = cert.route == Route::EhCorollary;
    if eh {
        ck.check("hypothesis", m >= 1, format!("|A| = {m}"))?;
        let expected_b: Vec<u64> = a.iter().copied().skip(1).collect();
        ck.check("eh-pair", b == expected_b, "B = A \\ {min A}")?;
        ck.check(
            "eh-identity",
            restricted_sums(&f, a, a) == restricted_sums(&f, a, b),
            "A +' A = A +' B",
        )?;
    } else {
        ck.check(
            "hypothesis",
            m >= 1 && k >= 1 && m != k,
            format!("|A| = {m}, |B| = {k}"),
        )?;
    }

    let argument = if k == 0 {
        Argument::Empty
    } else if m.min(k) == 1 {
        Argument::Singleton
    } else if (m + k - 2) as u64 > p {
        Argument::Reduced
    } else {
        Argument::Main
    };
    if !eh {
        let expected = match argument {
            Argument::Singleton => Route::Singleton,
            Argument::Reduced => Route::ReducedThenMain,
            _ => Route::Main,
        };
        ck.check(
            "route-shape",
            cert.route == expected,
            format!("sizes ({m}, {k}) call for route {}", expected.as_str()),
        )?;
    }

    let expected_bound = if eh {
        eh_bound(p, m as u64)
    } else {
        anr_bound(p, m as u64, k as u64)
    };
    ck.check(
        "claimed-bound-formula",
        cert.claimed_bound == expected_bound,
        format!("stored {}, formula {expected_bound}", cert.claimed_bound),
    )?;

    let c: Vec<u64> = restricted_sums(&f, a, b).into_iter().collect();
    ck.check(
        "C-enumeration",
        cert.c == c,
        format!("recomputed C has {} elements", c.len()),
    )?;
    ck.check(
        "C-size",
        cert.c_size == c.len() as u64,
        format!("stored {}, recomputed {}", cert.c_size, c.len()),
    )?;

    match argument {
        Argument::Empty | Argument::Singleton => {
            ck.check(
                "no-moment-fields",
                cert.reduction.is_none()
                    && cert.w1.is_empty()
                    && cert.w2.is_empty()
                    && cert.alpha.is_empty()
                    && cert.beta.is_empty()
                    && cert.gamma.is_empty()
                    && cert.e_c.is_none()
                    && cert.binomial_check.is_none(),
                "direct-count routes carry no weights or moments",
            )?;
            if argument == Argument::Singleton {
                let (a0, other) = if m == 1 { (a[0], b) } else { (b[0], a) };
                let sums: BTreeSet<u64> = other
                    .iter()
                    .filter(|&&x| x != a0)
                    .map(|&x| (f.element(a0) + f.element(x)).value())
                    .collect();
                let witness_ok = sums.len() + 1 >= other.len()
                    && sums.iter().all(|s| cert.c.binary_search(s).is_ok());
                ck.check(
                    "singleton-witness",
                    witness_ok,
                    format!("{} distinct sums {a0} + x, x != {a0}", sums.len()),
                )?;
            }
        }
        Argument::Main | Argument::Reduced => {
            let (a_star, b_star) = if argument == Argument::Reduced {
                let Some(r) = &cert.reduction else {
                    return ck.check("reduction", false, "oversized pair without a reduction");
                };
                let d = (m + k - 2) as u64 - p;
                let (d1, d2) = (d / 2, d - d / 2);
                let (cut_a, cut_b) = if m < k { (d2, d1) } else { (d1, d2) };
                let mut removed_a = a.to_vec();
                removed_a.retain(|x| r.a_prime.binary_search(x).is_err());
                let mut removed_b = b.to_vec();
                removed_b.retain(|x| r.b_prime.binary_search(x).is_err());
                let (ma, kb) = (r.a_prime.len(), r.b_prime.len());
                let ok = canonical(&r.a_prime, p)
                    && canonical(&r.b_prime, p)
                    && is_subset(&r.a_prime, a)
                    && is_subset(&r.b_prime, b)
                    && r.removed_from_a == removed_a
                    && r.removed_from_b == removed_b
                    && (r.d, r.d1, r.d2) == (d, d1, d2)
                    && removed_a.len() as u64 == cut_a
                    && removed_b.len() as u64 == cut_b
                    && ma >= 1
                    && kb >= 1
                    && ma != kb
                    && (ma + kb - 2) as u64 == p;
                ck.check(
                    "reduction",
                    ok,
                    format!("|A'| = {ma}, |B'| = {kb}, d = {d}"),
                )?;
                let sub = restricted_sums(&f, &r.a_prime, &r.b_prime);
                ck.check(
                    "reduction-monotone",
                    sub.iter().all(|s| c.binary_search(s).is_ok()),
                    "A' +' B' is contained in A +' B",
                )?;
                (&r.a_prime[..], &r.b_prime[..])
            } else {
                ck.check(
                    "reduction",
                    cert.reduction.is_none(),
                    "no reduction for a pair within range",
                )?;
                (a, b)
            };
            check_moment_argument(cert, &f, a_star, b_star, ck)?;
        }
    }

    ck.check(
        "bound-holds",
        cert.c_size >= cert.claimed_bound,
        format!("|C| = {} >= {}", cert.c_size, cert.claimed_bound),
    )
}

fn weights_on(f: &PrimeField, set: &[u64], w: &[WeightEntry]) -> Option<Vec<(u64, FieldElement)>> {
    if w.len() != set.len() {
        return None;
    }
    set.iter()
        .zip(w)
        .map(|(&x, e)| (e.element == x && e.weight < f.modulus()).then(|| (x, f.element(e.weight))))
        .collect()
}

fn check_moment_argument(
    cert: &Certificate,
    f: &PrimeField,
    a: &[u64],
    b: &[u64],
    ck: &mut Checks,
) -> Result<(), Stop> {
    let (m, k) = (a.len(), b.len());
    let n = m + k - 3;

    let w1 = weights_on(f, a, &cert.w1);
    ck.check(
        "w1-support",
        w1.is_some(),
        "w1 pairs each element of A* with a residue",
    )?;
    let w2 = weights_on(f, b, &cert.w2);
    ck.check(
        "w2-support",
        w2.is_some(),
        "w2 pairs each element of B* with a residue",
    )?;
    let (w1, w2) = (w1.expect("checked"), w2.expect("checked"));
    ck.check(
        "nonzero-sequence",
        w1.iter().any(|(_, w)| !w.is_zero()) && w2.iter().any(|(_, w)| !w.is_zero()),
        "w1 and w2 are nonzero sequences",
    )?;

    let alpha = moments(f, &w1, n + 1);
    let beta = moments(f, &w2, n + 1);
    ck.check(
        "alpha-vs-stored",
        cert.alpha == as_values(&alpha),
        format!("recomputed alpha_0..={} = {:?}", n + 1, as_values(&alpha)),
    )?;
    ck.check(
        "beta-vs-stored",
        cert.beta == as_values(&beta),
        format!("recomputed beta_0..={} = {:?}", n + 1, as_values(&beta)),
    )?;
    let extremal = |mom: &[FieldElement], size: usize| {
        mom[..size - 1].iter().all(|x| x.is_zero()) && !mom[size - 1].is_zero()
    };
    ck.check(
        "alpha-excess",
        extremal(&alpha, m),
        format!("alpha_i = 0 for i < {}, alpha_{} != 0", m - 1, m - 1),
    )?;
    ck.check(
        "beta-excess",
        extremal(&beta, k),
        format!("beta_i = 0 for i < {}, beta_{} != 0", k - 1, k - 1),
    )?;

    // induced weights on C* = A* +' B*
    let mut induced: BTreeMap<u64, FieldElement> = BTreeMap::new();
    for &(x, wx) in &w1 {
        for &(y, wy) in &w2 {
            if x == y {
                continue;
            }
            let (ex, ey) = (f.element(x), f.element(y));
            *induced.entry((ex + ey).value()).or_insert(f.zero()) += wx * wy * (ex - ey);
        }
    }
    let c_star: Vec<(u64, FieldElement)> = induced.into_iter().collect();
    let gamma = moments(f, &c_star, n);
    ck.check(
        "gamma-direct-vs-stored",
        cert.gamma == as_values(&gamma),
        format!("recomputed gamma_0..={n} = {:?}", as_values(&gamma)),
    )?;

    let convolution: Vec<FieldElement> = (0..=n)
        .map(|t| {
            (0..=t).fold(f.zero(), |acc, i| {
                let c = f.binomial(t as u64, i as u64);
                acc + c * (alpha[i + 1] * beta[t - i] - alpha[i] * beta[t + 1 - i])
            })
        })
        .collect();
    ck.check(
        "gamma-convolution-vs-direct",
        convolution == gamma,
        "binomial convolution of alpha and beta reproduces gamma",
    )?;

    let (r, s) = ((m - 2) as u64, (k - 2) as u64);
    let diff = f.binomial(n as u64, r) - f.binomial(n as u64, s);
    ck.check(
        "leading-term",
        gamma[n] == diff * alpha[m - 1] * beta[k - 1],
        format!(
            "gamma_{n} = (C({n},{r}) - C({n},{s})) alpha_{} beta_{}",
            m - 1,
            k - 1
        ),
    )?;

    let expected = crate::certificate::BinomialCheck {
        n: n as u64,
        r_choice: r,
        s_choice: s,
        value: diff.value(),
    };
    ck.check(
        "binomial-check",
        cert.binomial_check == Some(expected),
        format!(
            "C({n},{r}) - C({n},{s}) = {} mod {}",
            diff.value(),
            f.modulus()
        ),
    )?;
    ck.check(
        "binomial-nonvanishing",
        n >= 1 && (n as u64) < f.modulus() && !diff.is_zero(),
        format!("1 <= {n} <= p - 1 and difference nonzero"),
    )?;

    let e_c = gamma.iter().position(|g| !g.is_zero());
    ck.check(
        "e_C",
        e_c == Some(n) && cert.e_c == Some(n as u64),
        format!("recomputed {e_c:?}, stored {:?}, expected {n}", cert.e_c),
    )?;
    ck.check(
        "excess-bound",
        c_star.len() > n,
        format!("|A* +' B*| = {} >= e_C + 1 = {}", c_star.len(), n + 1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{certify_anr, certify_eh};
    use crate::sumset::FpSet;

    fn set(p: u64, v: &[u64]) -> FpSet {
        FpSet::new(PrimeField::new(p).unwrap(), v.iter().copied()).unwrap()
    }

    fn worked() -> Certificate {
        certify_anr(&set(5, &[1, 2]), &set(5, &[0, 1, 2])).unwrap()
    }

    fn failed_at(cert: &Certificate) -> &'static str {
        verify_certificate(cert)
            .first_failure()
            .map(|c| c.name)
            .unwrap_or("none")
    }

    #[test]
    fn worked_example_passes() {
        let report = verify_certificate(&worked());
        assert!(report.passed(), "{:?}", report.first_failure());
    }

    #[test]
    fn tampered_gamma() {
        let mut cert = worked();
        cert.gamma[2] = 0;
        assert_eq!(failed_at(&cert), "gamma-direct-vs-stored");
    }

    #[test]
    fn zeroed_w1() {
        let mut cert = worked();
        for e in &mut cert.w1 {
            e.weight = 0;
        }
        assert_eq!(failed_at(&cert), "nonzero-sequence");
    }

    #[test]
    fn other_faults() {
        let mut cert = worked();
        cert.claimed_bound = 4;
        assert_eq!(failed_at(&cert), "claimed-bound-formula");

        let mut cert = worked();
        cert.e_c = Some(1);
        assert_eq!(failed_at(&cert), "e_C");

        let mut cert = worked();
        cert.binomial_check.as_mut().unwrap().value = 1;
        assert_eq!(failed_at(&cert), "binomial-check");

        let mut cert = worked();
        cert.p = 6;
        assert_eq!(failed_at(&cert), "field-prime");

        let mut cert = worked();
        cert.a = vec![2, 1];
        assert_eq!(failed_at(&cert), "sets-canonical");

        let mut cert = worked();
        cert.route = Route::Singleton;
        assert_eq!(failed_at(&cert), "route-shape");

        let mut cert = worked();
        cert.w1[0].weight = 9;
        assert_eq!(failed_at(&cert), "w1-support");

        let mut cert = worked();
        cert.c_size = 9;
        assert_eq!(failed_at(&cert), "C-size");
    }

    #[test]
    fn singleton_and_eh_certificates_pass() {
        for cert in [
            certify_anr(&set(5, &[2]), &set(5, &[0, 1, 2])).unwrap(),
            certify_anr(&set(5, &[0, 1, 2, 3]), &set(5, &[4])).unwrap(),
            certify_eh(&set(5, &[4])).unwrap(),
            certify_eh(&set(5, &[0, 3])).unwrap(),
            certify_eh(&set(5, &[0, 1, 2])).unwrap(),
            certify_eh(&set(7, &[0, 1, 2, 3, 4, 5, 6])).unwrap(),
        ] {
            let report = verify_certificate(&cert);
            assert!(report.passed(), "{cert:?}: {:?}", report.first_failure());
        }
    }

    #[test]
    fn singleton_rejects_moment_payload() {
        let mut cert = certify_anr(&set(5, &[2]), &set(5, &[0, 1, 2])).unwrap();
        cert.e_c = Some(0);
        assert_eq!(failed_at(&cert), "no-moment-fields");
    }

    #[test]
    fn malformed_json_is_reported() {
        let report = verify_json("{\"p\": -5}");
        assert!(!report.passed());
        assert_eq!(report.first_failure().unwrap().name, "schema");
        let report = verify_json("not json");
        assert_eq!(report.first_failure().unwrap().name, "schema");
    }

    #[test]
    fn out_of_range_values_do_not_panic() {
        let mut cert = worked();
        cert.gamma = vec![u64::MAX; 3];
        assert_eq!(failed_at(&cert), "gamma-direct-vs-stored");
        let mut cert = worked();
        cert.p = u64::MAX;
        assert_eq!(failed_at(&cert), "field-prime");
        let mut cert = worked();
        cert.a = vec![1, 7];
        assert_eq!(failed_at(&cert), "sets-canonical");
        let mut cert = certify_eh(&set(7, &[0, 1, 2, 3, 4, 5, 6])).unwrap();
        cert.reduction.as_mut().unwrap().a_prime = vec![];
        assert_eq!(failed_at(&cert), "reduction");
    }
}
