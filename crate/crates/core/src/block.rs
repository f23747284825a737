//! Block matrices indexed by a finite index set.
//!
//! Block `(i, j)` sits in block row `i` and block column `j`; its shape is
//! `rows.dim(i) x cols.dim(j)`. Only nonzero blocks are stored, so two block
//! matrices are equal exactly when their dimension vectors and stored blocks
//! agree. Flattening lays bands out in declared index order.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::Field;
use crate::linalg::DenseMatrix;
use crate::poset::IndexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("block ({row}, {col}) has shape {found:?}, expected {expected:?}")]
    ShapeViolation { row: String, col: String, found: (usize, usize), expected: (usize, usize) },
    #[error("block matrices are indexed by different index sets")]
    MixedIndexSets,
    #[error("operands live in different fields")]
    MixedFields,
    #[error("dimension vectors do not match: {0}")]
    DimensionMismatch(String),
}

/// One size per index: the number of rows of band `i` (equal to the number
/// of columns of band `i` for square representations).
#[derive(Clone, PartialEq, Eq)]
pub struct DimVector {
    idx: Arc<IndexSet>,
    dims: Vec<usize>,
}

impl DimVector {
    pub fn new(idx: Arc<IndexSet>, dims: Vec<usize>) -> Result<Self, BlockError> {
        if dims.len() != idx.len() {
            return Err(BlockError::DimensionMismatch(format!(
                "{} sizes for {} indices",
                dims.len(),
                idx.len()
            )));
        }
        Ok(Self { idx, dims })
    }

    pub fn zero(idx: Arc<IndexSet>) -> Self {
        let n = idx.len();
        Self { idx, dims: vec![0; n] }
    }

    pub fn index_set(&self) -> &Arc<IndexSet> {
        &self.idx
    }

    pub fn dim(&self, pos: usize) -> usize {
        self.dims[pos]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Start of each band in the flattened layout.
    pub fn offsets(&self) -> Vec<usize> {
        self.dims
            .iter()
            .scan(0, |acc, &d| {
                let start = *acc;
                *acc += d;
                Some(start)
            })
            .collect()
    }

    /// Indices with a nonempty band.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dims.len()).filter(|&i| self.dims[i] > 0).collect()
    }

    pub fn same_index_set(&self, other: &DimVector) -> bool {
        Arc::ptr_eq(&self.idx, &other.idx) || *self.idx == *other.idx
    }

    /// Per-index sum, the layout of a direct sum or cone.
    pub fn concat(parts: &[&DimVector]) -> Result<DimVector, BlockError> {
        let first = parts.first().ok_or_else(|| BlockError::DimensionMismatch("no parts".into()))?;
        if parts.iter().any(|p| !p.same_index_set(first)) {
            return Err(BlockError::MixedIndexSets);
        }
        let dims = (0..first.dims.len()).map(|i| parts.iter().map(|p| p.dims[i]).sum()).collect();
        Ok(DimVector { idx: first.idx.clone(), dims })
    }
}

impl fmt::Debug for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.support().iter().map(|&i| format!("{}:{}", self.idx.label(i), self.dims[i])).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct BlockMatrix<F: Field> {
    field: F,
    rows: DimVector,
    cols: DimVector,
    blocks: BTreeMap<(usize, usize), DenseMatrix<F>>,
}

impl<F: Field> BlockMatrix<F> {
    pub fn zero(field: &F, rows: &DimVector, cols: &DimVector) -> Result<Self, BlockError> {
        if !rows.same_index_set(cols) {
            return Err(BlockError::MixedIndexSets);
        }
        Ok(Self { field: field.clone(), rows: rows.clone(), cols: cols.clone(), blocks: BTreeMap::new() })
    }

    pub fn from_blocks(
        field: &F,
        rows: &DimVector,
        cols: &DimVector,
        blocks: impl IntoIterator<Item = ((usize, usize), DenseMatrix<F>)>,
    ) -> Result<Self, BlockError> {
        let mut m = Self::zero(field, rows, cols)?;
        for ((i, j), block) in blocks {
            m.set_block(i, j, block)?;
        }
        Ok(m)
    }

    pub fn identity(field: &F, dims: &DimVector) -> Self {
        let blocks = dims.support().into_iter().map(|i| ((i, i), DenseMatrix::identity(field, dims.dim(i))));
        Self::from_blocks(field, dims, dims, blocks).expect("identity blocks are well shaped")
    }

    /// Cut a flattened matrix back into blocks.
    pub fn from_dense(field: &F, rows: &DimVector, cols: &DimVector, dense: &DenseMatrix<F>) -> Result<Self, BlockError> {
        if dense.shape() != (rows.total(), cols.total()) {
            return Err(BlockError::DimensionMismatch(format!(
                "flat matrix is {:?}, layout needs {:?}",
                dense.shape(),
                (rows.total(), cols.total())
            )));
        }
        let (ro, co) = (rows.offsets(), cols.offsets());
        let mut m = Self::zero(field, rows, cols)?;
        for &i in &rows.support() {
            for &j in &cols.support() {
                let block = dense.submatrix(ro[i], co[j], rows.dim(i), cols.dim(j));
                if !block.is_zero() {
                    m.blocks.insert((i, j), block);
                }
            }
        }
        Ok(m)
    }

    /// Assemble from a grid of block matrices. Within every band the parts
    /// are laid out in the order given, so cell `(a, b)` lands in the
    /// `a`-th row part and `b`-th column part of each block.
    pub fn grid(field: &F, row_parts: &[&DimVector], col_parts: &[&DimVector], cells: &[Vec<Option<&BlockMatrix<F>>>]) -> Result<Self, BlockError> {
        let rows = DimVector::concat(row_parts)?;
        let cols = DimVector::concat(col_parts)?;
        if !rows.same_index_set(&cols) {
            return Err(BlockError::MixedIndexSets);
        }
        if cells.len() != row_parts.len() || cells.iter().any(|r| r.len() != col_parts.len()) {
            return Err(BlockError::DimensionMismatch("grid shape".into()));
        }
        let n = rows.idx.len();
        // offset of part a inside band i
        let part_offsets = |parts: &[&DimVector]| -> Vec<Vec<usize>> {
            (0..n)
                .map(|i| {
                    parts
                        .iter()
                        .scan(0, |acc, p| {
                            let start = *acc;
                            *acc += p.dim(i);
                            Some(start)
                        })
                        .collect()
                })
                .collect()
        };
        let (row_off, col_off) = (part_offsets(row_parts), part_offsets(col_parts));
        let mut out: BTreeMap<(usize, usize), DenseMatrix<F>> = BTreeMap::new();
        for (a, row) in cells.iter().enumerate() {
            for (b, cell) in row.iter().enumerate() {
                let Some(cell) = cell else { continue };
                if cell.field != *field {
                    return Err(BlockError::MixedFields);
                }
                if cell.rows != *row_parts[a] || cell.cols != *col_parts[b] {
                    return Err(BlockError::DimensionMismatch(format!("grid cell ({a}, {b})")));
                }
                for (&(i, j), block) in &cell.blocks {
                    let target = out
                        .entry((i, j))
                        .or_insert_with(|| DenseMatrix::zeros(field, rows.dim(i), cols.dim(j)));
                    target.paste(row_off[i][a], col_off[j][b], block);
                }
            }
        }
        out.retain(|_, m| !m.is_zero());
        Ok(Self { field: field.clone(), rows, cols, blocks: out })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn row_dims(&self) -> &DimVector {
        &self.rows
    }
    pub fn col_dims(&self) -> &DimVector {
        &self.cols
    }
    pub fn index_set(&self) -> &Arc<IndexSet> {
        &self.rows.idx
    }

    pub fn set_block(&mut self, i: usize, j: usize, block: DenseMatrix<F>) -> Result<(), BlockError> {
        let n = self.rows.idx.len();
        if i >= n || j >= n {
            return Err(BlockError::DimensionMismatch(format!("block position ({i}, {j}) out of range")));
        }
        let expected = (self.rows.dim(i), self.cols.dim(j));
        if block.shape() != expected {
            return Err(BlockError::ShapeViolation {
                row: self.rows.idx.label(i).to_string(),
                col: self.rows.idx.label(j).to_string(),
                found: block.shape(),
                expected,
            });
        }
        if block.field() != &self.field {
            return Err(BlockError::MixedFields);
        }
        if block.is_zero() {
            self.blocks.remove(&(i, j));
        } else {
            self.blocks.insert((i, j), block);
        }
        Ok(())
    }

    /// Stored (nonzero) block, if any.
    pub fn get_block(&self, i: usize, j: usize) -> Option<&DenseMatrix<F>> {
        self.blocks.get(&(i, j))
    }

    /// Block `(i, j)`, materializing zeros when absent.
    pub fn block(&self, i: usize, j: usize) -> Cow<'_, DenseMatrix<F>> {
        match self.blocks.get(&(i, j)) {
            Some(b) => Cow::Borrowed(b),
            None => Cow::Owned(DenseMatrix::zeros(&self.field, self.rows.dim(i), self.cols.dim(j))),
        }
    }

    /// Nonzero blocks in `(row, col)` order.
    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, usize), &DenseMatrix<F>)> {
        self.blocks.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn to_dense(&self) -> DenseMatrix<F> {
        let (ro, co) = (self.rows.offsets(), self.cols.offsets());
        let mut m = DenseMatrix::zeros(&self.field, self.rows.total(), self.cols.total());
        for (&(i, j), block) in &self.blocks {
            m.paste(ro[i], co[j], block);
        }
        m
    }

    fn check_compatible(&self, other: &Self) -> Result<(), BlockError> {
        if self.field != other.field {
            return Err(BlockError::MixedFields);
        }
        if !self.rows.same_index_set(&other.rows) {
            return Err(BlockError::MixedIndexSets);
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, BlockError> {
        self.check_compatible(other)?;
        if self.cols != other.rows {
            return Err(BlockError::DimensionMismatch(format!("{:?} against {:?}", self.cols, other.rows)));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &DenseMatrix<F>)>> = BTreeMap::new();
        for (&(k, j), b) in &other.blocks {
            by_row.entry(k).or_default().push((j, b));
        }
        let mut out: BTreeMap<(usize, usize), DenseMatrix<F>> = BTreeMap::new();
        for (&(i, k), a) in &self.blocks {
            for &(j, b) in by_row.get(&k).into_iter().flatten() {
                let prod = a * b;
                match out.get_mut(&(i, j)) {
                    Some(acc) => *acc = &*acc + &prod,
                    None => {
                        out.insert((i, j), prod);
                    }
                }
            }
        }
        out.retain(|_, m| !m.is_zero());
        Ok(Self { field: self.field.clone(), rows: self.rows.clone(), cols: other.cols.clone(), blocks: out })
    }

    fn combine(&self, other: &Self, subtract: bool) -> Result<Self, BlockError> {
        self.check_compatible(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(BlockError::DimensionMismatch("summands have different layouts".into()));
        }
        let mut out = self.blocks.clone();
        for (&key, b) in &other.blocks {
            let b = if subtract { -b } else { b.clone() };
            match out.get_mut(&key) {
                Some(acc) => *acc = &*acc + &b,
                None => {
                    out.insert(key, b);
                }
            }
        }
        out.retain(|_, m| !m.is_zero());
        Ok(Self { field: self.field.clone(), rows: self.rows.clone(), cols: self.cols.clone(), blocks: out })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, BlockError> {
        self.combine(other, false)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, BlockError> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        self.map_blocks(|b| -b)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        self.map_blocks(|b| b.scale(s))
    }

    fn map_blocks(&self, f: impl Fn(&DenseMatrix<F>) -> DenseMatrix<F>) -> Self {
        let mut blocks: BTreeMap<_, _> = self.blocks.iter().map(|(k, b)| (*k, f(b))).collect();
        blocks.retain(|_, m: &mut DenseMatrix<F>| !m.is_zero());
        Self { field: self.field.clone(), rows: self.rows.clone(), cols: self.cols.clone(), blocks }
    }

    /// Same entries, viewed with the given (equal-sized) layout.
    pub fn with_dims(&self, rows: &DimVector, cols: &DimVector) -> Result<Self, BlockError> {
        if rows.dims != self.rows.dims || cols.dims != self.cols.dims {
            return Err(BlockError::DimensionMismatch("relabelled layout differs".into()));
        }
        Ok(Self { field: self.field.clone(), rows: rows.clone(), cols: cols.clone(), blocks: self.blocks.clone() })
    }
}

impl<F: Field> fmt::Debug for BlockMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = &self.rows.idx;
        write!(f, "BlockMatrix {:?} x {:?} {{", self.rows, self.cols)?;
        for (&(i, j), b) in &self.blocks {
            write!(f, " ({},{}): {}", idx.label(i), idx.label(j), b)?;
        }
        write!(f, " }}")
    }
}
