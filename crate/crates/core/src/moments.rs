//! Weighted power sums over subsets of Z/pZ.
//!
//! A [`WeightSequence`] attaches a field value to each element of a set. Its
//! `i`-th moment is `sum_a w(a) * a^i`, and its excess index is the first `i`
//! at which that moment is nonzero. For a nonzero weight sequence on `m`
//! distinct points the excess index is at most `m - 1`: vanishing moments
//! `0..m` would make the weight vector a nonzero kernel vector of an
//! invertible Vandermonde matrix. [`extremal_weights`] attains the bound.
//!
//! Given weighted sets `(A, w1)` and `(B, w2)`, [`induced_weights`] transfers
//! the weights onto `C = A +' B` via `w(c) = sum_{a+b=c} w1(a) w2(b) (a - b)`.
//! The moments of `C` then satisfy the binomial convolution computed by
//! [`gamma_convolution`], and [`leading_gamma`] is its closed form when the
//! low moments of both inputs vanish.

use thiserror::Error;

use crate::field::{FieldElement, PrimeField};
use crate::linalg::{self, FpVector};
use crate::sumset::{restricted_sumset, FpSet, SetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("weights ({weights}) are not aligned with a support of size {support}")]
    Alignment { support: usize, weights: usize },
    #[error("weights and support belong to different fields")]
    ModulusMismatch,
    #[error("weight sequence is identically zero")]
    ZeroWeights,
    #[error("no nonzero moment found below index {0}; arithmetic is inconsistent")]
    InternalInconsistency(usize),
    #[error("moment {needed} requested but only {available} are available")]
    InsufficientMoments { needed: usize, available: usize },
    #[error(transparent)]
    Set(#[from] SetError),
}

/// Field values aligned positionally with the sorted elements of a support set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSequence {
    support: FpSet,
    weights: Vec<FieldElement>,
}

impl WeightSequence {
    pub fn new(support: FpSet, weights: Vec<FieldElement>) -> Result<Self, MomentError> {
        if weights.len() != support.len() {
            return Err(MomentError::Alignment {
                support: support.len(),
                weights: weights.len(),
            });
        }
        let field = support.field();
        if !weights.iter().all(|&w| field.owns(w)) {
            return Err(MomentError::ModulusMismatch);
        }
        Ok(Self { support, weights })
    }

    /// Reduces each integer into the support's field.
    pub fn from_values(support: FpSet, values: &[u64]) -> Result<Self, MomentError> {
        let field = support.field();
        Self::new(support, values.iter().map(|&v| field.element(v)).collect())
    }

    pub fn support(&self) -> &FpSet {
        &self.support
    }

    pub fn weights(&self) -> &[FieldElement] {
        &self.weights
    }

    pub fn values(&self) -> Vec<u64> {
        self.weights.iter().map(|w| w.value()).collect()
    }

    pub fn field(&self) -> PrimeField {
        self.support.field()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// At least one weight is nonzero.
    pub fn is_nonzero(&self) -> bool {
        self.weights.iter().any(|w| !w.is_zero())
    }

    /// `(element, weight)` pairs in canonical order.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, FieldElement)> + '_ {
        self.support
            .elements()
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    /// Weight of `x`, or `None` if `x` is not in the support.
    pub fn weight_of(&self, x: u64) -> Option<FieldElement> {
        self.support.index_of(x).map(|i| self.weights[i])
    }

    pub fn negated(&self) -> Self {
        Self {
            support: self.support.clone(),
            weights: self.weights.iter().map(|&w| -w).collect(),
        }
    }

    /// `sum_j w(a_j) * a_j^i`.
    pub fn power_sum(&self, i: u64) -> FieldElement {
        self.pairs().fold(self.field().zero(), |acc, (a, w)| {
            acc + w * self.field().element(a).pow(i)
        })
    }
}

/// `sum_j w(a_j) * a_j^i`, checking that `w` is carried by `set`.
pub fn power_sum(set: &FpSet, w: &WeightSequence, i: u64) -> Result<FieldElement, MomentError> {
    if w.support() != set {
        return Err(MomentError::Alignment {
            support: set.len(),
            weights: w.len(),
        });
    }
    Ok(w.power_sum(i))
}

/// The smallest `i` with a nonzero `i`-th moment. Only indices up to
/// `|set| - 1` are searched.
pub fn excess_index(set: &FpSet, w: &WeightSequence) -> Result<usize, MomentError> {
    if w.support() != set {
        return Err(MomentError::Alignment {
            support: set.len(),
            weights: w.len(),
        });
    }
    MomentProfile::new(w.clone()).excess()
}

/// Power sums of one weighted set, computed on demand and cached.
///
/// Moments are filled incrementally: the running powers `a^i` are kept so that
/// extending the prefix costs one multiplication per element per index.
#[derive(Debug, Clone)]
pub struct MomentProfile {
    weights: WeightSequence,
    moments: Vec<FieldElement>,
    powers: Vec<FieldElement>,
}

impl MomentProfile {
    pub fn new(weights: WeightSequence) -> Self {
        let field = weights.field();
        let powers = vec![field.one(); weights.len()];
        Self {
            weights,
            moments: Vec::new(),
            powers,
        }
    }

    /// A profile with moments `0..=upto` already computed.
    pub fn with_prefix(weights: WeightSequence, upto: usize) -> Self {
        let mut profile = Self::new(weights);
        profile.extend_to(upto);
        profile
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    /// Ensures moments `0..=upto` are cached.
    pub fn extend_to(&mut self, upto: usize) {
        let field = self.weights.field();
        while self.moments.len() <= upto {
            let mut acc = field.zero();
            for ((pw, w), a) in self
                .powers
                .iter_mut()
                .zip(self.weights.weights())
                .zip(self.weights.support().iter())
            {
                acc += *w * *pw;
                *pw *= a;
            }
            self.moments.push(acc);
        }
    }

    /// The `i`-th moment, computing it if necessary.
    pub fn moment(&mut self, i: usize) -> FieldElement {
        self.extend_to(i);
        self.moments[i]
    }

    /// A cached moment, without extending.
    pub fn cached(&self, i: usize) -> Option<FieldElement> {
        self.moments.get(i).copied()
    }

    /// The cached prefix.
    pub fn moments(&self) -> &[FieldElement] {
        &self.moments
    }

    pub fn values(&self) -> Vec<u64> {
        self.moments.iter().map(|m| m.value()).collect()
    }

    /// The excess index. Errors if the weights are all zero, or if no nonzero
    /// moment exists below the support size (impossible over distinct points).
    pub fn excess(&mut self) -> Result<usize, MomentError> {
        if !self.weights.is_nonzero() {
            return Err(MomentError::ZeroWeights);
        }
        let m = self.weights.len();
        for i in 0..m {
            if !self.moment(i).is_zero() {
                return Ok(i);
            }
        }
        Err(MomentError::InternalInconsistency(m))
    }
}

/// The unique weights with moments `0, ..., 0, 1` at indices `0..|set|`,
/// obtained by solving the Vandermonde system with right side `(0, ..., 0, 1)`.
pub fn extremal_weights(set: &FpSet) -> Result<WeightSequence, MomentError> {
    if set.is_empty() {
        return Err(SetError::EmptyInput.into());
    }
    let field = set.field();
    let nodes = FpVector::new(field, set.iter().collect()).expect("nonempty, one field");
    let rhs = FpVector::last_unit(field, set.len()).expect("nonempty");
    let x = linalg::solve(&linalg::vandermonde(&nodes), &rhs)
        .expect("Vandermonde matrix on distinct nodes is invertible");
    WeightSequence::new(set.clone(), x.into_entries())
}

/// Transfers `(A, w1)` and `(B, w2)` onto `C = A +' B`:
/// `w(c) = sum_{a in A, b in B, a + b = c} w1(a) w2(b) (a - b)`.
///
/// The sum runs over all of `A x B`; diagonal pairs contribute `a - b = 0`.
pub fn induced_weights(
    w1: &WeightSequence,
    w2: &WeightSequence,
) -> Result<WeightSequence, MomentError> {
    let (a, b) = (w1.support(), w2.support());
    let c = restricted_sumset(a, b)?;
    let field = c.field();
    let mut acc = vec![field.zero(); c.len()];
    for (x, wx) in w1.pairs() {
        let x = field.element(x);
        for (y, wy) in w2.pairs() {
            let y = field.element(y);
            let term = wx * wy * (x - y);
            if term.is_zero() {
                continue;
            }
            let idx = c.index_of((x + y).value()).expect("a != b sums lie in C");
            acc[idx] += term;
        }
    }
    WeightSequence::new(c, acc)
}

/// `gamma_n = sum_i C(n,i) alpha_{i+1} beta_{n-i} - sum_i C(n,i) alpha_i beta_{n+1-i}`,
/// evaluated from cached moment prefixes. Both profiles need indices up to `n + 1`.
pub fn gamma_convolution(
    alpha: &MomentProfile,
    beta: &MomentProfile,
    n: usize,
) -> Result<FieldElement, MomentError> {
    for profile in [alpha, beta] {
        if profile.moments().len() < n + 2 {
            return Err(MomentError::InsufficientMoments {
                needed: n + 1,
                available: profile.moments().len(),
            });
        }
    }
    let field = alpha.weights().field();
    if beta.weights().field() != field {
        return Err(MomentError::ModulusMismatch);
    }
    let (al, be) = (alpha.moments(), beta.moments());
    let mut gamma = field.zero();
    for i in 0..=n {
        let c = field.binomial(n as u64, i as u64);
        gamma += c * (al[i + 1] * be[n - i] - al[i] * be[n + 1 - i]);
    }
    Ok(gamma)
}

/// `(C(r+s+1, r) - C(r+s+1, s)) * alpha_{r+1} * beta_{s+1}`: the value of
/// `gamma_{r+s+1}` when `alpha_i = 0` for `i <= r` and `beta_i = 0` for `i <= s`.
pub fn leading_gamma(
    field: PrimeField,
    r: u64,
    s: u64,
    alpha_r1: FieldElement,
    beta_s1: FieldElement,
) -> FieldElement {
    let n = r + s + 1;
    (field.binomial(n, r) - field.binomial(n, s)) * alpha_r1 * beta_s1
}
