//! Certified lower bounds for restricted sumsets over Z/pZ.
//!
//! For nonempty `A, B` in Z/pZ with `|A| != |B|`, the restricted sumset
//! `A +' B = {a + b : a in A, b in B, a != b}` has at least
//! `min{p, |A| + |B| - 2}` elements; taking `B = A \ {a0}` gives
//! `|A +' A| >= min{p, 2|A| - 3}`. This crate builds the linear-algebraic
//! witnesses behind that bound (extremal weight sequences obtained from
//! Vandermonde systems, their power-sum moments, and the induced weights on
//! the sumset), packages them as JSON certificates, checks certificates
//! independently, and sweeps small primes by brute force.
//!
//! ```
//! use resum_core::{certify_anr, verify_certificate, FpSet, PrimeField};
//!
//! let f = PrimeField::new(5).unwrap();
//! let a = FpSet::parse(f, "1,2").unwrap();
//! let b = FpSet::parse(f, "0,1,2").unwrap();
//! let cert = certify_anr(&a, &b).unwrap();
//! assert_eq!(cert.claimed_bound, 3);
//! assert!(verify_certificate(&cert).passed());
//! ```

pub mod certificate;
pub mod field;
pub mod linalg;
pub mod moments;
pub mod oracle;
pub mod sumset;
pub mod verify;

pub use certificate::{
    certify_anr, certify_eh, reduce_oversized, BinomialCheck, CertError, Certificate, Reduction,
    ReductionRecord, Route, WeightEntry,
};
pub use field::{is_prime, FieldElement, FieldError, PrimeField};
pub use linalg::{solve, vandermonde, vandermonde_det, FpMatrix, FpVector, LinalgError};
pub use moments::{
    excess_index, extremal_weights, gamma_convolution, induced_weights, leading_gamma, power_sum,
    MomentError, MomentProfile, WeightSequence,
};
pub use oracle::{
    cross_check_certificates, sweep_exhaustive, BoundKind, OracleError, RandomSampler, Sampler,
    SizeFilter, SweepOptions, SweepReport,
};
pub use sumset::{anr_bound, cd_bound, eh_bound, restricted_sumset, sumset, FpSet, SetError};
pub use verify::{verify_certificate, verify_json, CheckResult, Verdict, VerificationReport};
