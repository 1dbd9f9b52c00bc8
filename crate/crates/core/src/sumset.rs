//! Subsets of Z/pZ, sumsets and restricted sumsets, and the closed-form
//! lower bounds they are measured against.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{FieldElement, PrimeField};

/// Above this modulus, sumset enumeration deduplicates by sorting instead of
/// allocating a presence bitmap of size `p`.
const BITMAP_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("empty set")]
    EmptyInput,
    #[error("duplicate element {0}")]
    Duplicate(u64),
    #[error("element {0} is out of range for p = {1}")]
    OutOfRange(u64, u64),
    #[error("cannot parse set literal {0:?}")]
    Parse(String),
    #[error("sets belong to different fields (p = {0} and p = {1})")]
    ModulusMismatch(u64, u64),
}

/// A set of residues mod `p`, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpSet {
    field: PrimeField,
    elements: Vec<u64>,
}

impl FpSet {
    /// Builds a nonempty set from distinct residues in `[0, p)`, in any order.
    pub fn new(
        field: PrimeField,
        elements: impl IntoIterator<Item = u64>,
    ) -> Result<Self, SetError> {
        let set = Self::possibly_empty(field, elements)?;
        if set.is_empty() {
            return Err(SetError::EmptyInput);
        }
        Ok(set)
    }

    /// Like [`FpSet::new`] but accepts the empty set.
    pub fn possibly_empty(
        field: PrimeField,
        elements: impl IntoIterator<Item = u64>,
    ) -> Result<Self, SetError> {
        let p = field.modulus();
        let mut elements: Vec<u64> = elements.into_iter().collect();
        if let Some(&bad) = elements.iter().find(|&&x| x >= p) {
            return Err(SetError::OutOfRange(bad, p));
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(SetError::Duplicate(w[0]));
        }
        Ok(Self { field, elements })
    }

    pub fn empty(field: PrimeField) -> Self {
        Self {
            field,
            elements: Vec::new(),
        }
    }

    /// `{start, start+1, ..., start+len-1}` reduced mod `p`; `len` must not exceed `p`.
    pub fn interval(field: PrimeField, start: u64, len: u64) -> Result<Self, SetError> {
        let p = field.modulus();
        if len > p {
            return Err(SetError::OutOfRange(len, p));
        }
        Self::possibly_empty(field, (0..len).map(|i| (start % p + i) % p))
    }

    /// Parses `"r1,r2,..."`. Whitespace around entries is ignored; duplicates
    /// are rejected rather than merged. An empty literal is an error.
    pub fn parse(field: PrimeField, literal: &str) -> Result<Self, SetError> {
        let trimmed = literal.trim();
        if trimmed.is_empty() {
            return Err(SetError::EmptyInput);
        }
        let values = trimmed
            .split(',')
            .map(|tok| u64::from_str(tok.trim()).map_err(|_| SetError::Parse(literal.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(field, values)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.elements.iter().map(|&x| self.field.element(x))
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    /// Position of `x` in the canonical order.
    pub fn index_of(&self, x: u64) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// The set with `x` removed (unchanged if absent). May be empty.
    pub fn without(&self, x: u64) -> Self {
        Self {
            field: self.field,
            elements: self.elements.iter().copied().filter(|&y| y != x).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.field == other.field && self.elements.iter().all(|&x| other.contains(x))
    }

    /// Elements of `self` not in `other`.
    pub fn difference(&self, other: &Self) -> Self {
        Self {
            field: self.field,
            elements: self
                .elements
                .iter()
                .copied()
                .filter(|&x| !other.contains(x))
                .collect(),
        }
    }

    /// Splits off the `count` largest elements: returns `(kept, removed)`.
    pub fn split_largest(&self, count: usize) -> (Self, Self) {
        let cut = self.len().saturating_sub(count);
        let (kept, removed) = self.elements.split_at(cut);
        (
            Self {
                field: self.field,
                elements: kept.to_vec(),
            },
            Self {
                field: self.field,
                elements: removed.to_vec(),
            },
        )
    }

    fn check_pair(a: &Self, b: &Self) -> Result<(), SetError> {
        if a.field != b.field {
            return Err(SetError::ModulusMismatch(
                a.field.modulus(),
                b.field.modulus(),
            ));
        }
        if a.is_empty() || b.is_empty() {
            return Err(SetError::EmptyInput);
        }
        Ok(())
    }
}

impl fmt::Display for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

fn collect_sums(field: PrimeField, sums: impl Iterator<Item = u64>) -> FpSet {
    let p = field.modulus();
    let elements = if p <= BITMAP_LIMIT {
        let mut seen = vec![false; p as usize];
        for s in sums {
            seen[s as usize] = true;
        }
        seen.iter()
            .enumerate()
            .filter_map(|(i, &hit)| hit.then_some(i as u64))
            .collect()
    } else {
        let mut v: Vec<u64> = sums.collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    FpSet { field, elements }
}

fn add_mod(x: u64, y: u64, p: u64) -> u64 {
    let s = x + y;
    if s >= p {
        s - p
    } else {
        s
    }
}

/// `A + B = {a + b : a in A, b in B}`.
pub fn sumset(a: &FpSet, b: &FpSet) -> Result<FpSet, SetError> {
    FpSet::check_pair(a, b)?;
    let p = a.field.modulus();
    Ok(collect_sums(
        a.field,
        a.elements
            .iter()
            .flat_map(|&x| b.elements.iter().map(move |&y| add_mod(x, y, p))),
    ))
}

/// `A +' B = {a + b : a in A, b in B, a != b}`. The result may be empty.
pub fn restricted_sumset(a: &FpSet, b: &FpSet) -> Result<FpSet, SetError> {
    FpSet::check_pair(a, b)?;
    let p = a.field.modulus();
    Ok(collect_sums(
        a.field,
        a.elements.iter().flat_map(|&x| {
            b.elements
                .iter()
                .filter(move |&&y| y != x)
                .map(move |&y| add_mod(x, y, p))
        }),
    ))
}

/// `min{p, m + k - 2}`, clamped at zero.
pub fn anr_bound(p: u64, m: u64, k: u64) -> u64 {
    (m + k).saturating_sub(2).min(p)
}

/// `min{p, 2m - 3}`, clamped at zero.
pub fn eh_bound(p: u64, m: u64) -> u64 {
    (2 * m).saturating_sub(3).min(p)
}

/// `min{p, m + k - 1}`, clamped at zero.
pub fn cd_bound(p: u64, m: u64, k: u64) -> u64 {
    (m + k).saturating_sub(1).min(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: u64, v: &[u64]) -> FpSet {
        FpSet::new(PrimeField::new(p).unwrap(), v.iter().copied()).unwrap()
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(
            sumset(&set(5, &[0, 1]), &set(5, &[0, 1]))
                .unwrap()
                .elements(),
            &[0, 1, 2]
        );
        assert_eq!(
            sumset(&set(5, &[0]), &set(5, &[3])).unwrap().elements(),
            &[3]
        );
        assert_eq!(
            sumset(&set(3, &[0, 1, 2]), &set(3, &[0, 1, 2]))
                .unwrap()
                .elements(),
            &[0, 1, 2]
        );
    }

    #[test]
    fn restricted_sumset_examples() {
        assert_eq!(
            restricted_sumset(&set(5, &[1, 2]), &set(5, &[1, 3]))
                .unwrap()
                .elements(),
            &[0, 3, 4]
        );
        assert!(restricted_sumset(&set(5, &[3]), &set(5, &[3]))
            .unwrap()
            .is_empty());
        assert_eq!(
            restricted_sumset(&set(5, &[1, 2]), &set(5, &[0, 1, 2]))
                .unwrap()
                .elements(),
            &[1, 2, 3]
        );
    }

    #[test]
    fn empty_and_mismatched_inputs() {
        let k = PrimeField::new(5).unwrap();
        let e = FpSet::empty(k);
        assert_eq!(sumset(&e, &set(5, &[1])), Err(SetError::EmptyInput));
        assert_eq!(
            restricted_sumset(&set(5, &[1]), &e),
            Err(SetError::EmptyInput)
        );
        assert_eq!(
            restricted_sumset(&set(5, &[1]), &set(7, &[1])),
            Err(SetError::ModulusMismatch(5, 7))
        );
    }

    #[test]
    fn bounds() {
        assert_eq!(anr_bound(5, 2, 3), 3);
        assert_eq!(eh_bound(5, 1), 0);
        assert_eq!(cd_bound(5, 3, 4), 5);
        assert_eq!(anr_bound(5, 1, 1), 0);
        assert_eq!(eh_bound(7, 7), 7);
        assert_eq!(cd_bound(2, 1, 1), 1);
    }

    #[test]
    fn parse_literals() {
        let k = PrimeField::new(5).unwrap();
        assert_eq!(FpSet::parse(k, "3, 0,1").unwrap().elements(), &[0, 1, 3]);
        assert_eq!(FpSet::parse(k, "0,1,1"), Err(SetError::Duplicate(1)));
        assert_eq!(FpSet::parse(k, "0,5"), Err(SetError::OutOfRange(5, 5)));
        assert!(matches!(FpSet::parse(k, "0,x"), Err(SetError::Parse(_))));
        assert!(matches!(FpSet::parse(k, "0,,1"), Err(SetError::Parse(_))));
        assert_eq!(FpSet::parse(k, ""), Err(SetError::EmptyInput));
        assert_eq!(set(5, &[0, 1, 3]).to_string(), "{0,1,3}");
    }

    #[test]
    fn set_helpers() {
        let k = PrimeField::new(7).unwrap();
        let s = FpSet::interval(k, 5, 4).unwrap();
        assert_eq!(s.elements(), &[0, 1, 5, 6]);
        let (kept, removed) = s.split_largest(1);
        assert_eq!(kept.elements(), &[0, 1, 5]);
        assert_eq!(removed.elements(), &[6]);
        assert!(kept.is_subset_of(&s));
        assert_eq!(s.difference(&kept), removed);
        assert_eq!(s.without(0).elements(), &[1, 5, 6]);
    }

    #[test]
    fn large_modulus_uses_sorting_path() {
        let k = PrimeField::new(1_000_000_007).unwrap();
        let a = FpSet::new(k, [0, 1, 999_999_999]).unwrap();
        let b = FpSet::new(k, [1, 8]).unwrap();
        let c = restricted_sumset(&a, &b).unwrap();
        assert_eq!(c.elements(), &[0, 1, 8, 9, 1_000_000_000]);
    }
}
