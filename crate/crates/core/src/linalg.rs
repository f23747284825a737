//! Dense exact matrices: products, reduced row echelon form, affine solves,
//! kernels, inverses and subspace intersection.
//!
//! Pivoting takes the first nonzero entry scanning down the current column,
//! so every result (including particular solutions and kernel bases) is a
//! deterministic function of the input.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live in different fields")]
    MixedFields,
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
}

/// A column vector.
pub type Column<F> = Vec<<F as Field>::Elem>;

#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Output of [`DenseMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub reduced: DenseMatrix<F>,
    pub pivot_cols: Vec<usize>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Solution set `particular + span(kernel)` of a consistent system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution<F: Field> {
    pub particular: Column<F>,
    pub kernel: Vec<Column<F>>,
}

impl<F: Field> DenseMatrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &F, rows: &[Vec<F::Elem>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(field, rows.len(), cols, rows.concat())
    }

    /// Integer literal helper, mostly for tests and fixtures.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<F::Elem>> =
            rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, &rows).expect("ragged literal")
    }

    pub fn from_columns(field: &F, len: usize, columns: &[Column<F>]) -> Result<Self, LinalgError> {
        if columns.iter().any(|c| c.len() != len) {
            return Err(LinalgError::DimensionMismatch("columns of different lengths".into()));
        }
        let mut m = Self::zeros(field, len, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.data[i * columns.len() + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    /// Row-major entries.
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }
    pub fn into_entries(self) -> Vec<F::Elem> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: F::Elem) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Column<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { self.field.is_one(x) } else { self.field.is_zero(x) }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(&F::Elem) -> F::Elem) -> Self {
        Self { field: self.field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        self.map(|x| self.field.mul(s, x))
    }

    /// Copy of the `rows x cols` window starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "window out of range");
        let mut m = Self::zeros(&self.field, rows, cols);
        for i in 0..rows {
            m.data[i * cols..(i + 1) * cols].clone_from_slice(&self.data[(r0 + i) * self.cols + c0..][..cols]);
        }
        m
    }

    /// Overwrite the window starting at `(r0, c0)` with `other`.
    pub fn paste(&mut self, r0: usize, c0: usize, other: &Self) {
        assert!(r0 + other.rows <= self.rows && c0 + other.cols <= self.cols, "window out of range");
        for i in 0..other.rows {
            let start = (r0 + i) * self.cols + c0;
            self.data[start..start + other.cols].clone_from_slice(other.row(i));
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::MixedFields);
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !f.is_zero(b) {
                        let idx = i * other.cols + j;
                        out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F::Elem, &F::Elem) -> F::Elem) -> Result<Self, LinalgError> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect();
        Ok(Self { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn mul_vec(&self, x: &[F::Elem]) -> Result<Column<F>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!("{} columns, vector of length {}", self.cols, x.len())));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).fold(f.zero(), |acc, (a, b)| {
                    if f.is_zero(a) || f.is_zero(b) { acc } else { f.add(&acc, &f.mul(a, b)) }
                })
            })
            .collect())
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let cols = m.cols;
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
            if p != r {
                for j in c..cols {
                    m.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            // Entries left of `c` in row r are already zero.
            let mut pivot_row = Vec::new();
            for j in c..cols {
                let idx = r * cols + j;
                if !f.is_zero(&m.data[idx]) {
                    m.data[idx] = f.mul(&inv, &m.data[idx]);
                    pivot_row.push((j, m.data[idx].clone()));
                }
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                let row = &mut m.data[i * cols..(i + 1) * cols];
                for (j, v) in &pivot_row {
                    f.sub_mul_assign(&mut row[*j], &factor, v);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        Rref { reduced: m, pivot_cols }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Column<F>> {
        let rref = self.rref();
        kernel_from_rref(&rref, self.cols)
    }

    /// Solve `A x = b`. `None` when inconsistent.
    pub fn solve_affine(&self, b: &[F::Elem]) -> Result<Option<AffineSolution<F>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} rows but right-hand side of length {}",
                self.rows,
                b.len()
            )));
        }
        let f = &self.field;
        let n = self.cols;
        let mut aug = Self::zeros(f, self.rows, n + 1);
        for i in 0..self.rows {
            aug.data[i * (n + 1)..i * (n + 1) + n].clone_from_slice(self.row(i));
            aug.data[i * (n + 1) + n] = b[i].clone();
        }
        let rref = aug.rref();
        if rref.pivot_cols.last() == Some(&n) {
            return Ok(None);
        }
        let mut particular = vec![f.zero(); n];
        for (k, &c) in rref.pivot_cols.iter().enumerate() {
            particular[c] = rref.reduced.get(k, n).clone();
        }
        let kernel = kernel_from_rref(&rref, n);
        Ok(Some(AffineSolution { particular, kernel }))
    }

    /// Two-sided inverse, `None` when singular.
    pub fn inverse(&self) -> Result<Option<Self>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Self::zeros(f, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].clone_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = f.one();
        }
        let rref = aug.rref();
        if rref.pivot_cols.iter().filter(|&&c| c < n).count() < n {
            return Ok(None);
        }
        Ok(Some(rref.reduced.submatrix(0, n, n, n)))
    }
}

fn kernel_from_rref<F: Field>(rref: &Rref<F>, n: usize) -> Vec<Column<F>> {
    let f = rref.reduced.field();
    let mut is_pivot = vec![false; n];
    for &c in &rref.pivot_cols {
        if c < n {
            is_pivot[c] = true;
        }
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![f.zero(); n];
            v[free] = f.one();
            for (k, &c) in rref.pivot_cols.iter().enumerate() {
                if c < n {
                    v[c] = f.neg(rref.reduced.get(k, free));
                }
            }
            v
        })
        .collect()
}

/// Basis of `span(u) ∩ span(v)`, returned in reduced echelon form.
pub fn subspace_intersect<F: Field>(field: &F, u: &[Column<F>], v: &[Column<F>]) -> Result<Vec<Column<F>>, LinalgError> {
    let Some(len) = u.first().or(v.first()).map(Vec::len) else { return Ok(Vec::new()) };
    if u.iter().chain(v).any(|c| c.len() != len) {
        return Err(LinalgError::DimensionMismatch("generators of different lengths".into()));
    }
    if u.is_empty() || v.is_empty() {
        return Ok(Vec::new());
    }
    // (a, b) with U a = V b
    let negated: Vec<Column<F>> = v.iter().map(|c| c.iter().map(|x| field.neg(x)).collect()).collect();
    let gens: Vec<Column<F>> = u.iter().chain(&negated).cloned().collect();
    let stacked = DenseMatrix::from_columns(field, len, &gens)?;
    let umat = DenseMatrix::from_columns(field, len, u)?;
    let vectors: Vec<Column<F>> =
        stacked.kernel().into_iter().map(|ab| umat.mul_vec(&ab[..u.len()])).collect::<Result<_, _>>()?;
    Ok(row_space_basis(field, len, &vectors))
}

/// Reduced echelon basis of the span of `vectors` (each of length `len`).
pub fn row_space_basis<F: Field>(field: &F, len: usize, vectors: &[Column<F>]) -> Vec<Column<F>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = DenseMatrix::from_rows(field, vectors).expect("equal lengths");
    debug_assert_eq!(m.cols(), len);
    let rref = m.rref();
    (0..rref.rank()).map(|k| rref.reduced.row(k).to_vec()).collect()
}

impl<F: Field> fmt::Debug for DenseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<F: Field> fmt::Display for DenseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| self.field.format(x)).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")?;
        if self.rows == 0 || self.cols == 0 {
            write!(f, "({}x{})", self.rows, self.cols)?;
        }
        Ok(())
    }
}

impl<F: Field> Mul for &DenseMatrix<F> {
    type Output = DenseMatrix<F>;
    fn mul(self, rhs: Self) -> DenseMatrix<F> {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl<F: Field> Add for &DenseMatrix<F> {
    type Output = DenseMatrix<F>;
    fn add(self, rhs: Self) -> DenseMatrix<F> {
        self.try_add(rhs).expect("matrix sum")
    }
}

impl<F: Field> Sub for &DenseMatrix<F> {
    type Output = DenseMatrix<F>;
    fn sub(self, rhs: Self) -> DenseMatrix<F> {
        self.try_sub(rhs).expect("matrix difference")
    }
}

impl<F: Field> Neg for &DenseMatrix<F> {
    type Output = DenseMatrix<F>;
    fn neg(self) -> DenseMatrix<F> {
        self.map(|x| self.field.neg(x))
    }
}
