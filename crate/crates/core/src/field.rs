//! Exact arithmetic in the prime field F_q and small dense linear algebra
//! over it.
//!
//! Elements are canonical residues in `[0, q)` tagged with their field, so
//! mixing values from different fields is rejected instead of silently
//! producing garbage. Elimination uses a fixed pivoting rule (first nonzero
//! entry in the column) to keep every computation reproducible.

use std::fmt;

use crate::error::{Error, Result};

/// A validated prime field order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    q: u64,
}

impl FieldSpec {
    /// Creates the field F_q. Fails unless `q` is prime.
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(FieldSpec { q })
    }

    /// The field order q.
    pub fn order(&self) -> u64 {
        self.q
    }

    /// Wraps a canonical residue. Values outside `[0, q)` are rejected,
    /// not reduced.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.q {
            return Err(Error::NotCanonical { value, q: self.q });
        }
        Ok(FieldElement { value, spec: *self })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { value: 0, spec: *self }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { value: 1, spec: *self }
    }

    /// All q field elements in value order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let spec = *self;
        (0..self.q).map(move |value| FieldElement { value, spec })
    }

    // Raw residue arithmetic. Inputs must already be canonical.

    #[inline]
    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.q as u128) as u64
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.q - (b - a)
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub(crate) fn pow_raw(&self, base: u64, mut exp: u64) -> u64 {
        let q = self.q as u128;
        let mut base = base as u128 % q;
        let mut acc: u128 = 1 % q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            exp >>= 1;
        }
        acc as u64
    }

    /// Inverse by Fermat: x^(q-2). Caller must ensure `a != 0`.
    #[inline]
    pub(crate) fn inv_raw(&self, a: u64) -> u64 {
        debug_assert!(a != 0, "inverse of zero");
        self.pow_raw(a, self.q - 2)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

/// A canonical residue in `[0, q)` together with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u64,
    spec: FieldSpec,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn common_spec(&self, other: &FieldElement) -> Result<FieldSpec> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(self.spec.q, other.spec.q));
        }
        Ok(self.spec)
    }

    pub fn add(self, rhs: FieldElement) -> Result<FieldElement> {
        let spec = self.common_spec(&rhs)?;
        Ok(FieldElement { value: spec.add_raw(self.value, rhs.value), spec })
    }

    pub fn sub(self, rhs: FieldElement) -> Result<FieldElement> {
        let spec = self.common_spec(&rhs)?;
        Ok(FieldElement { value: spec.sub_raw(self.value, rhs.value), spec })
    }

    pub fn mul(self, rhs: FieldElement) -> Result<FieldElement> {
        let spec = self.common_spec(&rhs)?;
        Ok(FieldElement { value: spec.mul_raw(self.value, rhs.value), spec })
    }

    pub fn neg(self) -> FieldElement {
        FieldElement { value: self.spec.neg_raw(self.value), spec: self.spec }
    }

    /// Multiplicative inverse. Fails on zero.
    pub fn inv(self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::DivisionByZero(self.spec.q));
        }
        Ok(FieldElement { value: self.spec.inv_raw(self.value), spec: self.spec })
    }

    pub fn div(self, rhs: FieldElement) -> Result<FieldElement> {
        self.common_spec(&rhs)?;
        self.mul(rhs.inv()?)
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        FieldElement { value: self.spec.pow_raw(self.value, exp), spec: self.spec }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Deterministic Miller-Rabin; the witness set covers every u64.
fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let nn = n as u128;
    'witness: for &a in &WITNESSES {
        let mut x: u128 = 1;
        let mut base = a as u128 % nn;
        let mut exp = d;
        while exp > 0 {
            if exp & 1 == 1 {
                x = x * base % nn;
            }
            base = base * base % nn;
            exp >>= 1;
        }
        if x == 1 || x == nn - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = x * x % nn;
            if x == nn - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A dense row-major matrix over one prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("matrix dimensions {rows}x{cols} must be positive")));
        }
        Ok(Matrix { spec, rows, cols, data: vec![0; rows * cols] })
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Result<Self> {
        let mut m = Matrix::zeros(spec, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    /// Builds a matrix from rows of canonical residues.
    pub fn from_rows(spec: FieldSpec, rows: &[Vec<u64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Shape("matrix needs at least one row and one column".into()));
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "ragged rows: expected {cols} columns, found {}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= spec.order() {
                    return Err(Error::NotCanonical { value: v, q: spec.order() });
                }
                data.push(v);
            }
        }
        Ok(Matrix { spec, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from row-major elements that must share one field.
    pub fn from_elements(rows: usize, cols: usize, entries: &[FieldElement]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("matrix dimensions {rows}x{cols} must be positive")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, found {}",
                rows * cols,
                entries.len()
            )));
        }
        let spec = entries[0].spec();
        let mut data = Vec::with_capacity(entries.len());
        for e in entries {
            if e.spec() != spec {
                return Err(Error::SpecMismatch(spec.order(), e.spec().order()));
            }
            data.push(e.value());
        }
        Ok(Matrix { spec, rows, cols, data })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        FieldElement { value: self.data[r * self.cols + c], spec: self.spec }
    }

    pub fn set(&mut self, r: usize, c: usize, value: FieldElement) -> Result<()> {
        if value.spec() != self.spec {
            return Err(Error::SpecMismatch(self.spec.order(), value.spec().order()));
        }
        self.data[r * self.cols + c] = value.value();
        Ok(())
    }

    #[inline]
    pub(crate) fn row_raw(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = vec![0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        Matrix { spec: self.spec, rows: self.cols, cols: self.rows, data }
    }

    /// Extracts the given rows, in order, as a new matrix.
    pub fn submatrix_rows(&self, rows: &[usize]) -> Result<Matrix> {
        if rows.is_empty() {
            return Err(Error::Shape("row selection is empty".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            if r >= self.rows {
                return Err(Error::Shape(format!("row index {r} out of {}", self.rows)));
            }
            data.extend_from_slice(self.row_raw(r));
        }
        Ok(Matrix { spec: self.spec, rows: rows.len(), cols: self.cols, data })
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.spec != rhs.spec {
            return Err(Error::SpecMismatch(self.spec.order(), rhs.spec.order()));
        }
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.spec, self.rows, rhs.cols)?;
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let prod = self.spec.mul_raw(a, rhs.data[k * rhs.cols + c]);
                    let cur = out.data[r * rhs.cols + c];
                    out.data[r * rhs.cols + c] = self.spec.add_raw(cur, prod);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut raw = Vec::with_capacity(v.len());
        for e in v {
            if e.spec() != self.spec {
                return Err(Error::SpecMismatch(self.spec.order(), e.spec().order()));
            }
            raw.push(e.value());
        }
        let mut out = vec![0u64; self.rows];
        self.mul_vec_raw(&raw, &mut out);
        Ok(out.into_iter().map(|value| FieldElement { value, spec: self.spec }).collect())
    }

    #[inline]
    pub(crate) fn mul_vec_raw(&self, v: &[u64], out: &mut [u64]) {
        let q = self.spec.q as u128;
        for r in 0..self.rows {
            let row = self.row_raw(r);
            let mut acc: u128 = 0;
            for (a, b) in row.iter().zip(v) {
                acc += *a as u128 * *b as u128 % q;
            }
            out[r] = (acc % q) as u64;
        }
    }

    /// Solves `A x = b` for square regular `A` by Gaussian elimination,
    /// always pivoting on the first nonzero entry of the column.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let raw: Vec<u64> = self.check_vector(b)?;
        let x = self.solve_raw(&raw)?;
        Ok(x.into_iter().map(|value| FieldElement { value, spec: self.spec }).collect())
    }

    fn check_vector(&self, b: &[FieldElement]) -> Result<Vec<u64>> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!(
                "right-hand side of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        b.iter()
            .map(|e| {
                if e.spec() != self.spec {
                    Err(Error::SpecMismatch(self.spec.order(), e.spec().order()))
                } else {
                    Ok(e.value())
                }
            })
            .collect()
    }

    pub(crate) fn solve_raw(&self, b: &[u64]) -> Result<Vec<u64>> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("solve needs a square matrix, got {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut rhs = b.to_vec();
        let (rank, _) = eliminate_forward(self.spec, &mut a, n, n, Some((&mut rhs, 1)));
        if rank < n {
            return Err(Error::SingularMatrix { rank, dim: n });
        }
        back_substitute(self.spec, &a, n, &mut rhs, 1);
        Ok(rhs)
    }

    /// Determinant by elimination; zero exactly when the matrix is singular.
    pub fn det(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("determinant needs a square matrix, got {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let (rank, swaps) = eliminate_forward(self.spec, &mut a, n, n, None);
        if rank < n {
            return Ok(self.spec.zero());
        }
        let mut det = 1u64;
        for i in 0..n {
            det = self.spec.mul_raw(det, a[i * n + i]);
        }
        if swaps % 2 == 1 {
            det = self.spec.neg_raw(det);
        }
        Ok(FieldElement { value: det, spec: self.spec })
    }

    /// Row rank over F_q.
    pub fn rank(&self) -> usize {
        let mut a = self.data.clone();
        let (rank, _) = eliminate_forward(self.spec, &mut a, self.rows, self.cols, None);
        rank
    }

    /// Inverse of a square regular matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("inverse needs a square matrix, got {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut rhs = Matrix::identity(self.spec, n)?.data;
        let (rank, _) = eliminate_forward(self.spec, &mut a, n, n, Some((&mut rhs, n)));
        if rank < n {
            return Err(Error::SingularMatrix { rank, dim: n });
        }
        back_substitute(self.spec, &a, n, &mut rhs, n);
        Ok(Matrix { spec: self.spec, rows: n, cols: n, data: rhs })
    }
}

/// In-place forward elimination to row echelon form. Pivot rule: first
/// nonzero entry in the current column at or below the pivot row. Returns
/// the rank and the number of row swaps. `rhs`, when present, is a
/// row-major block with the given column count whose rows are transformed
/// alongside `a`.
pub(crate) fn eliminate_forward(
    spec: FieldSpec,
    a: &mut [u64],
    rows: usize,
    cols: usize,
    mut rhs: Option<(&mut [u64], usize)>,
) -> (usize, u32) {
    let mut rank = 0usize;
    let mut swaps = 0u32;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in 0..cols {
                a.swap(pivot * cols + j, rank * cols + j);
            }
            if let Some((rhs, rcols)) = rhs.as_mut() {
                for j in 0..*rcols {
                    rhs.swap(pivot * *rcols + j, rank * *rcols + j);
                }
            }
            swaps += 1;
        }
        let pivot_inv = spec.inv_raw(a[rank * cols + col]);
        for r in rank + 1..rows {
            let lead = a[r * cols + col];
            if lead == 0 {
                continue;
            }
            let factor = spec.mul_raw(lead, pivot_inv);
            for j in col..cols {
                let sub = spec.mul_raw(factor, a[rank * cols + j]);
                a[r * cols + j] = spec.sub_raw(a[r * cols + j], sub);
            }
            if let Some((rhs, rcols)) = rhs.as_mut() {
                for j in 0..*rcols {
                    let sub = spec.mul_raw(factor, rhs[rank * *rcols + j]);
                    rhs[r * *rcols + j] = spec.sub_raw(rhs[r * *rcols + j], sub);
                }
            }
        }
        rank += 1;
    }
    (rank, swaps)
}

/// Back substitution for a full-rank upper-triangular `a` (as produced by
/// forward elimination on a regular square matrix). Solves in place into
/// `rhs`, a row-major block of `rcols` columns.
pub(crate) fn back_substitute(spec: FieldSpec, a: &[u64], n: usize, rhs: &mut [u64], rcols: usize) {
    for i in (0..n).rev() {
        let diag_inv = spec.inv_raw(a[i * n + i]);
        for c in 0..rcols {
            let mut acc = rhs[i * rcols + c];
            for j in i + 1..n {
                let sub = spec.mul_raw(a[i * n + j], rhs[j * rcols + c]);
                acc = spec.sub_raw(acc, sub);
            }
            rhs[i * rcols + c] = spec.mul_raw(acc, diag_inv);
        }
    }
}
