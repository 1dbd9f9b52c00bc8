//! Dense exact linear algebra over Z/pZ.
//!
//! Entry `(i, j)` is addressed 0-based here. The Vandermonde matrix built by
//! [`vandermonde`] has row `i` equal to the `i`-th powers of the nodes, so its
//! first row is all ones.

use thiserror::Error;

use crate::field::{FieldElement, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty matrix or vector")]
    Empty,
    #[error("entries belong to different fields")]
    ModulusMismatch,
}

/// A nonempty vector of field elements over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpVector {
    field: PrimeField,
    entries: Vec<FieldElement>,
}

impl FpVector {
    pub fn new(field: PrimeField, entries: Vec<FieldElement>) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::Empty);
        }
        if !entries.iter().all(|&e| field.owns(e)) {
            return Err(LinalgError::ModulusMismatch);
        }
        Ok(Self { field, entries })
    }

    /// Reduces each integer into the field.
    pub fn from_values(field: PrimeField, values: &[u64]) -> Result<Self, LinalgError> {
        Self::new(field, values.iter().map(|&v| field.element(v)).collect())
    }

    /// The unit vector `(0, ..., 0, 1)` of length `len`.
    pub fn last_unit(field: PrimeField, len: usize) -> Result<Self, LinalgError> {
        if len == 0 {
            return Err(LinalgError::Empty);
        }
        let mut entries = vec![field.zero(); len];
        entries[len - 1] = field.one();
        Ok(Self { field, entries })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn values(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.value()).collect()
    }

    pub fn into_entries(self) -> Vec<FieldElement> {
        self.entries
    }
}

/// Row-major dense matrix over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl FpMatrix {
    pub fn new(
        field: PrimeField,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if !entries.iter().all(|&e| field.owns(e)) {
            return Err(LinalgError::ModulusMismatch);
        }
        Ok(Self {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows of integers, reducing each into the field.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        let entries = rows.iter().flatten().map(|&v| field.element(v)).collect();
        Self::new(field, rows.len(), cols, entries)
    }

    pub fn identity(field: PrimeField, n: usize) -> Result<Self, LinalgError> {
        let mut entries = vec![field.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = field.one();
        }
        Self::new(field, n, n, entries)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Entries as nested integer rows.
    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.value()).collect())
            .collect()
    }

    pub fn mul_vec(&self, x: &FpVector) -> Result<FpVector, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        if x.field() != self.field {
            return Err(LinalgError::ModulusMismatch);
        }
        let out = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.entries())
                    .fold(self.field.zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect();
        FpVector::new(self.field, out)
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<FieldElement, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Ok(self.field.zero());
            };
            if piv != col {
                swap_rows(&mut a, n, piv, col);
                det = -det;
            }
            let pivot = a[col * n + col];
            det *= pivot;
            let inv = pivot.inverse().expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = a[r * n + col] * inv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let t = a[col * n + c];
                    a[r * n + c] -= factor * t;
                }
            }
        }
        Ok(det)
    }
}

fn swap_rows(a: &mut [FieldElement], cols: usize, r1: usize, r2: usize) {
    for c in 0..cols {
        a.swap(r1 * cols + c, r2 * cols + c);
    }
}

/// The square matrix whose `(i, j)` entry is `nodes[j]^i`.
pub fn vandermonde(nodes: &FpVector) -> FpMatrix {
    let field = nodes.field();
    let m = nodes.len();
    let mut entries = Vec::with_capacity(m * m);
    let mut powers = vec![field.one(); m];
    for _ in 0..m {
        entries.extend_from_slice(&powers);
        for (pw, &x) in powers.iter_mut().zip(nodes.entries()) {
            *pw *= x;
        }
    }
    FpMatrix::new(field, m, m, entries).expect("nodes are nonempty and share a field")
}

/// `prod_{i<j} (nodes[j] - nodes[i])`, the Vandermonde determinant.
pub fn vandermonde_det(nodes: &FpVector) -> FieldElement {
    let x = nodes.entries();
    let mut det = nodes.field().one();
    for j in 0..x.len() {
        for i in 0..j {
            det *= x[j] - x[i];
        }
    }
    det
}

/// Solves `M x = b` by Gauss-Jordan elimination, pivoting on the first
/// nonzero entry at or below the diagonal.
pub fn solve(m: &FpMatrix, b: &FpVector) -> Result<FpVector, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "{}x{} system is not square",
            m.rows(),
            m.cols()
        )));
    }
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "{}x{} system with right side of length {}",
            m.rows(),
            m.cols(),
            b.len()
        )));
    }
    if b.field() != m.field() {
        return Err(LinalgError::ModulusMismatch);
    }
    let n = m.rows();
    let w = n + 1;
    // augmented [M | b]
    let mut a = Vec::with_capacity(n * w);
    for i in 0..n {
        a.extend_from_slice(m.row(i));
        a.push(b.entries()[i]);
    }
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r * w + col].is_zero())
            .ok_or(LinalgError::SingularMatrix)?;
        if piv != col {
            swap_rows(&mut a, w, piv, col);
        }
        let inv = a[col * w + col].inverse().expect("pivot is nonzero");
        for c in col..w {
            a[col * w + c] *= inv;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r * w + col];
            if factor.is_zero() {
                continue;
            }
            for c in col..w {
                let t = a[col * w + c];
                a[r * w + c] -= factor * t;
            }
        }
    }
    FpVector::new(m.field(), (0..n).map(|i| a[i * w + n]).collect())
}
