//! Linear systems whose unknowns are block matrices with the morphism shape
//! (zero below the block diagonal, σ-paired diagonal blocks equal).
//!
//! Variables are numbered by block `(i, j)` with `i <= j` in lexicographic
//! order, row-major inside a block. A diagonal block `(i, i)` with
//! `σ(i) < i` reuses the variables of block `(σ(i), σ(i))`, so the
//! σ-diagonal condition holds by construction.

use crate::block::{BlockMatrix, DimVector};
use crate::field::Field;
use crate::linalg::{AffineSolution, Column, DenseMatrix};

#[derive(Clone, Debug)]
pub struct ShapeLayout {
    rows: DimVector,
    cols: DimVector,
    nrows: usize,
    ncols: usize,
    var_of: Vec<Option<usize>>,
    nvars: usize,
}

impl ShapeLayout {
    /// Triangular, σ-tied layout for matrices from `rows`-bands to `cols`-bands.
    pub fn morphism(rows: &DimVector, cols: &DimVector) -> Self {
        let idx = rows.index_set();
        let n = idx.len();
        let (ro, co) = (rows.offsets(), cols.offsets());
        let (nrows, ncols) = (rows.total(), cols.total());
        let mut var_of = vec![None; nrows * ncols];
        let mut diag_start = vec![None; n];
        let mut next = 0;
        for i in 0..n {
            for j in i..n {
                let (h, w) = (rows.dim(i), cols.dim(j));
                if h == 0 || w == 0 {
                    continue;
                }
                let start = if i == j && idx.sigma(i) < i {
                    diag_start[idx.sigma(i)].expect("partner block numbered first")
                } else {
                    let s = next;
                    next += h * w;
                    if i == j {
                        diag_start[i] = Some(s);
                    }
                    s
                };
                for a in 0..h {
                    for b in 0..w {
                        var_of[(ro[i] + a) * ncols + co[j] + b] = Some(start + a * w + b);
                    }
                }
            }
        }
        Self { rows: rows.clone(), cols: cols.clone(), nrows, ncols, var_of, nvars: next }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn var(&self, r: usize, c: usize) -> Option<usize> {
        self.var_of[r * self.ncols + c]
    }

    pub fn to_block_matrix<F: Field>(&self, field: &F, values: &[F::Elem]) -> BlockMatrix<F> {
        assert_eq!(values.len(), self.nvars);
        let data = self.var_of.iter().map(|v| v.map_or_else(|| field.zero(), |v| values[v].clone())).collect();
        let dense = DenseMatrix::from_vec(field, self.nrows, self.ncols, data).expect("layout size");
        BlockMatrix::from_dense(field, &self.rows, &self.cols, &dense).expect("layout dims")
    }

    /// Inverse of [`Self::to_block_matrix`] for matrices of this shape;
    /// `None` if the matrix has entries outside the shape.
    pub fn coordinates<F: Field>(&self, m: &BlockMatrix<F>) -> Option<Column<F>> {
        let f = m.field();
        let dense = m.to_dense();
        let mut values: Vec<Option<F::Elem>> = vec![None; self.nvars];
        for r in 0..self.nrows {
            for c in 0..self.ncols {
                let x = dense.get(r, c);
                match self.var(r, c) {
                    None if !f.is_zero(x) => return None,
                    None => {}
                    Some(v) => match &values[v] {
                        Some(prev) if prev != x => return None,
                        _ => values[v] = Some(x.clone()),
                    },
                }
            }
        }
        Some(values.into_iter().map(|v| v.unwrap_or_else(|| f.zero())).collect())
    }
}

/// One summand of a matrix equation.
pub enum Term<'a, F: Field> {
    /// `coeff * L * X`
    Left(F::Elem, &'a DenseMatrix<F>, usize),
    /// `coeff * X * R`
    Right(F::Elem, usize, &'a DenseMatrix<F>),
    /// `coeff * X`
    Plain(F::Elem, usize),
}

pub struct LinearSystem<F: Field> {
    field: F,
    layouts: Vec<ShapeLayout>,
    offsets: Vec<usize>,
    nvars: usize,
    equations: Vec<Vec<(usize, F::Elem)>>,
    rhs: Vec<F::Elem>,
}

impl<F: Field> LinearSystem<F> {
    pub fn new(field: &F, layouts: Vec<ShapeLayout>) -> Self {
        let mut offsets = Vec::with_capacity(layouts.len());
        let mut nvars = 0;
        for l in &layouts {
            offsets.push(nvars);
            nvars += l.nvars;
        }
        Self { field: field.clone(), layouts, offsets, nvars, equations: Vec::new(), rhs: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Add the entrywise equations `sum(terms) = rhs`.
    pub fn add_equation(&mut self, terms: &[Term<'_, F>], rhs: &DenseMatrix<F>) {
        let f = self.field.clone();
        let (rows, cols) = rhs.shape();
        for t in terms {
            match t {
                Term::Left(_, l, u) => {
                    let lay = &self.layouts[*u];
                    assert!(l.rows() == rows && l.cols() == lay.nrows && lay.ncols == cols, "left term shape");
                }
                Term::Right(_, u, r) => {
                    let lay = &self.layouts[*u];
                    assert!(lay.nrows == rows && r.rows() == lay.ncols && r.cols() == cols, "right term shape");
                }
                Term::Plain(_, u) => {
                    let lay = &self.layouts[*u];
                    assert!(lay.nrows == rows && lay.ncols == cols, "plain term shape");
                }
            }
        }
        let mut acc = vec![f.zero(); self.nvars];
        let mut touched: Vec<usize> = Vec::new();
        let bump = |acc: &mut Vec<F::Elem>, touched: &mut Vec<usize>, v: usize, x: F::Elem| {
            if f.is_zero(&acc[v]) {
                touched.push(v);
            }
            acc[v] = f.add(&acc[v], &x);
        };
        for r in 0..rows {
            for c in 0..cols {
                for t in terms {
                    match t {
                        Term::Left(coeff, l, u) => {
                            let (lay, off) = (&self.layouts[*u], self.offsets[*u]);
                            for a in 0..lay.nrows {
                                let x = l.get(r, a);
                                if f.is_zero(x) {
                                    continue;
                                }
                                if let Some(v) = lay.var(a, c) {
                                    bump(&mut acc, &mut touched, off + v, f.mul(coeff, x));
                                }
                            }
                        }
                        Term::Right(coeff, u, rm) => {
                            let (lay, off) = (&self.layouts[*u], self.offsets[*u]);
                            for b in 0..lay.ncols {
                                let x = rm.get(b, c);
                                if f.is_zero(x) {
                                    continue;
                                }
                                if let Some(v) = lay.var(r, b) {
                                    bump(&mut acc, &mut touched, off + v, f.mul(coeff, x));
                                }
                            }
                        }
                        Term::Plain(coeff, u) => {
                            let (lay, off) = (&self.layouts[*u], self.offsets[*u]);
                            if let Some(v) = lay.var(r, c) {
                                bump(&mut acc, &mut touched, off + v, coeff.clone());
                            }
                        }
                    }
                }
                touched.sort_unstable();
                touched.dedup();
                let row: Vec<(usize, F::Elem)> = touched
                    .iter()
                    .filter(|&&v| !f.is_zero(&acc[v]))
                    .map(|&v| (v, acc[v].clone()))
                    .collect();
                for &v in &touched {
                    acc[v] = f.zero();
                }
                touched.clear();
                let b = rhs.get(r, c);
                if row.is_empty() && f.is_zero(b) {
                    continue;
                }
                self.equations.push(row);
                self.rhs.push(b.clone());
            }
        }
    }

    pub fn solve(&self) -> Option<AffineSolution<F>> {
        let f = &self.field;
        let mut a = DenseMatrix::zeros(f, self.equations.len(), self.nvars);
        for (r, row) in self.equations.iter().enumerate() {
            for (v, x) in row {
                a.set(r, *v, x.clone());
            }
        }
        a.solve_affine(&self.rhs).expect("rhs length matches")
    }

    /// The block matrix for unknown `u` read off a full solution vector.
    pub fn extract(&self, values: &[F::Elem], u: usize) -> BlockMatrix<F> {
        let start = self.offsets[u];
        self.layouts[u].to_block_matrix(&self.field, &values[start..start + self.layouts[u].nvars])
    }
}
