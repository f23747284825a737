//! Objects and morphisms of the category of representations.
//!
//! An object is a square block matrix `B` with `d(i) = d(σ(i))` for every
//! index and `B·B = 0`. A morphism `T: B -> C` is a block matrix with rows
//! laid out like `B` and columns like `C` such that
//!
//! * `T·C = B·T`,
//! * `T` is zero below the block diagonal (`T[i][j] = 0` for `i > j`),
//! * paired diagonal blocks agree: `T[i][i] = T[σ(i)][σ(i)]`.
//!
//! Composition is written in diagram order: `T.compose(U)` is the matrix
//! product `T·U` and goes `B -> C -> D`.

use std::fmt;

use thiserror::Error;

use crate::block::{BlockError, BlockMatrix, DimVector};
use crate::field::Field;
use crate::linalg::DenseMatrix;
use crate::system::{LinearSystem, ShapeLayout, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObjectError {
    #[error("block ({row}, {col}) has the wrong shape")]
    ShapeViolation { row: String, col: String },
    #[error("bands {index} and {partner} are paired by the involution but have sizes {dim} and {partner_dim}")]
    InvolutionDimViolation { index: String, partner: String, dim: usize, partner_dim: usize },
    #[error("B·B is nonzero at block ({row}, {col})")]
    SquareNotZero { row: String, col: String },
    #[error(transparent)]
    Block(BlockError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("block ({row}, {col}) has the wrong shape")]
    ShapeViolation { row: String, col: String },
    #[error("T·C - B·T is nonzero at block ({row}, {col})")]
    IntertwiningViolation { row: String, col: String },
    #[error("block ({row}, {col}) lies below the diagonal but is nonzero")]
    TriangularityViolation { row: String, col: String },
    #[error("diagonal blocks at {index} and {partner} differ")]
    SigmaDiagonalViolation { index: String, partner: String },
    #[error("source or target does not line up")]
    SourceTargetMismatch,
    #[error("operands are indexed by different index sets")]
    MixedIndexSets,
    #[error("operands live in different fields")]
    MixedFields,
}

impl From<BlockError> for ObjectError {
    fn from(e: BlockError) -> Self {
        match e {
            BlockError::ShapeViolation { row, col, .. } => ObjectError::ShapeViolation { row, col },
            other => ObjectError::Block(other),
        }
    }
}

impl From<BlockError> for MorphismError {
    fn from(e: BlockError) -> Self {
        match e {
            BlockError::ShapeViolation { row, col, .. } => MorphismError::ShapeViolation { row, col },
            BlockError::MixedFields => MorphismError::MixedFields,
            BlockError::MixedIndexSets => MorphismError::MixedIndexSets,
            BlockError::DimensionMismatch(_) => MorphismError::SourceTargetMismatch,
        }
    }
}

/// A validated object.
#[derive(Clone, PartialEq, Eq)]
pub struct Representation<F: Field> {
    matrix: BlockMatrix<F>,
}

impl<F: Field> Representation<F> {
    /// Validate `matrix` as an object over `dims`.
    pub fn new(dims: &DimVector, matrix: BlockMatrix<F>) -> Result<Self, ObjectError> {
        let idx = dims.index_set().clone();
        for (layout, which) in [(matrix.row_dims(), "row"), (matrix.col_dims(), "column")] {
            if !layout.same_index_set(dims) {
                return Err(ObjectError::Block(BlockError::MixedIndexSets));
            }
            if let Some(i) = (0..idx.len()).find(|&i| layout.dim(i) != dims.dim(i)) {
                let _ = which;
                return Err(ObjectError::ShapeViolation { row: idx.label(i).into(), col: idx.label(i).into() });
            }
        }
        for i in 0..idx.len() {
            let s = idx.sigma(i);
            if dims.dim(i) != dims.dim(s) {
                return Err(ObjectError::InvolutionDimViolation {
                    index: idx.label(i).into(),
                    partner: idx.label(s).into(),
                    dim: dims.dim(i),
                    partner_dim: dims.dim(s),
                });
            }
        }
        let square = matrix.try_mul(&matrix)?;
        if let Some((&(i, j), _)) = square.blocks().next() {
            return Err(ObjectError::SquareNotZero { row: idx.label(i).into(), col: idx.label(j).into() });
        }
        Ok(Self { matrix })
    }

    pub fn from_blocks(
        field: &F,
        dims: &DimVector,
        blocks: impl IntoIterator<Item = ((usize, usize), DenseMatrix<F>)>,
    ) -> Result<Self, ObjectError> {
        let matrix = BlockMatrix::from_blocks(field, dims, dims, blocks)?;
        Self::new(dims, matrix)
    }

    /// The object with every band empty.
    pub fn zero_object(field: &F, idx: &std::sync::Arc<crate::poset::IndexSet>) -> Self {
        let dims = DimVector::zero(idx.clone());
        Self { matrix: BlockMatrix::zero(field, &dims, &dims).expect("same index set") }
    }

    pub fn matrix(&self) -> &BlockMatrix<F> {
        &self.matrix
    }
    pub fn dims(&self) -> &DimVector {
        self.matrix.row_dims()
    }
    pub fn field(&self) -> &F {
        self.matrix.field()
    }
    pub fn total_dim(&self) -> usize {
        self.dims().total()
    }

    pub(crate) fn from_matrix_unchecked(matrix: BlockMatrix<F>) -> Self {
        debug_assert!(Self::new(&matrix.row_dims().clone(), matrix.clone()).is_ok());
        Self { matrix }
    }

    pub fn identity(&self) -> Morphism<F> {
        Morphism { source: self.clone(), target: self.clone(), matrix: BlockMatrix::identity(self.field(), self.dims()) }
    }

    pub fn zero_to(&self, target: &Representation<F>) -> Result<Morphism<F>, MorphismError> {
        let matrix = BlockMatrix::zero(self.field(), self.dims(), target.dims())?;
        check_compatible(self, target)?;
        Ok(Morphism { source: self.clone(), target: target.clone(), matrix })
    }
}

impl<F: Field> fmt::Debug for Representation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation({:?})", self.matrix)
    }
}

fn check_compatible<F: Field>(b: &Representation<F>, c: &Representation<F>) -> Result<(), MorphismError> {
    if b.field() != c.field() {
        return Err(MorphismError::MixedFields);
    }
    if !b.dims().same_index_set(c.dims()) {
        return Err(MorphismError::MixedIndexSets);
    }
    Ok(())
}

/// Shape conditions shared by morphisms and homotopy matrices: layout,
/// zero below the diagonal, σ-paired diagonal blocks equal.
pub(crate) fn check_shape<F: Field>(
    matrix: &BlockMatrix<F>,
    source: &Representation<F>,
    target: &Representation<F>,
) -> Result<(), MorphismError> {
    check_compatible(source, target)?;
    if matrix.field() != source.field() {
        return Err(MorphismError::MixedFields);
    }
    let idx = source.dims().index_set();
    for (layout, expected) in [(matrix.row_dims(), source.dims()), (matrix.col_dims(), target.dims())] {
        if !layout.same_index_set(expected) {
            return Err(MorphismError::MixedIndexSets);
        }
        if let Some(i) = (0..idx.len()).find(|&i| layout.dim(i) != expected.dim(i)) {
            return Err(MorphismError::ShapeViolation { row: idx.label(i).into(), col: idx.label(i).into() });
        }
    }
    if let Some((&(i, j), _)) = matrix.blocks().find(|(&(i, j), _)| i > j) {
        return Err(MorphismError::TriangularityViolation { row: idx.label(i).into(), col: idx.label(j).into() });
    }
    for (i, s) in idx.swapped_pairs() {
        if matrix.block(i, i) != matrix.block(s, s) {
            return Err(MorphismError::SigmaDiagonalViolation { index: idx.label(i).into(), partner: idx.label(s).into() });
        }
    }
    Ok(())
}

/// A validated morphism.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism<F: Field> {
    source: Representation<F>,
    target: Representation<F>,
    matrix: BlockMatrix<F>,
}

impl<F: Field> Morphism<F> {
    /// Validate `matrix` as a morphism `source -> target`.
    pub fn new(matrix: BlockMatrix<F>, source: &Representation<F>, target: &Representation<F>) -> Result<Self, MorphismError> {
        check_shape(&matrix, source, target)?;
        let lhs = matrix.try_mul(target.matrix())?;
        let rhs = source.matrix().try_mul(&matrix)?;
        let diff = lhs.try_sub(&rhs)?;
        if let Some((&(i, j), _)) = diff.blocks().next() {
            let idx = source.dims().index_set();
            return Err(MorphismError::IntertwiningViolation { row: idx.label(i).into(), col: idx.label(j).into() });
        }
        Ok(Self { source: source.clone(), target: target.clone(), matrix })
    }

    pub(crate) fn from_parts_unchecked(matrix: BlockMatrix<F>, source: &Representation<F>, target: &Representation<F>) -> Self {
        debug_assert!(Self::new(matrix.clone(), source, target).is_ok(), "unchecked morphism fails validation");
        Self { source: source.clone(), target: target.clone(), matrix }
    }

    pub fn source(&self) -> &Representation<F> {
        &self.source
    }
    pub fn target(&self) -> &Representation<F> {
        &self.target
    }
    pub fn matrix(&self) -> &BlockMatrix<F> {
        &self.matrix
    }
    pub fn field(&self) -> &F {
        self.matrix.field()
    }
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self` followed by `next`, i.e. the product `self · next`.
    pub fn compose(&self, next: &Morphism<F>) -> Result<Morphism<F>, MorphismError> {
        if self.target != next.source {
            return Err(MorphismError::SourceTargetMismatch);
        }
        let matrix = self.matrix.try_mul(&next.matrix)?;
        Ok(Morphism { source: self.source.clone(), target: next.target.clone(), matrix })
    }

    fn check_parallel(&self, other: &Morphism<F>) -> Result<(), MorphismError> {
        if self.source != other.source || self.target != other.target {
            return Err(MorphismError::SourceTargetMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Morphism<F>) -> Result<Morphism<F>, MorphismError> {
        self.check_parallel(other)?;
        Ok(Morphism { matrix: self.matrix.try_add(&other.matrix)?, ..self.clone() })
    }

    pub fn sub(&self, other: &Morphism<F>) -> Result<Morphism<F>, MorphismError> {
        self.check_parallel(other)?;
        Ok(Morphism { matrix: self.matrix.try_sub(&other.matrix)?, ..self.clone() })
    }

    pub fn neg(&self) -> Morphism<F> {
        Morphism { matrix: self.matrix.neg(), ..self.clone() }
    }

    pub fn scale(&self, s: &F::Elem) -> Morphism<F> {
        Morphism { matrix: self.matrix.scale(s), ..self.clone() }
    }

    /// Same matrix between other objects; revalidated.
    pub fn retarget(&self, source: &Representation<F>, target: &Representation<F>) -> Result<Morphism<F>, MorphismError> {
        let matrix = self.matrix.with_dims(source.dims(), target.dims())?;
        Morphism::new(matrix, source, target)
    }

    /// Invertible in the category itself: every diagonal block invertible.
    pub fn is_strict_iso(&self) -> bool {
        let (s, t) = (self.source.dims(), self.target.dims());
        if s.dims() != t.dims() {
            return false;
        }
        s.support().into_iter().all(|i| {
            self.matrix.block(i, i).inverse().expect("diagonal blocks are square").is_some()
        })
    }
}

impl<F: Field> fmt::Debug for Morphism<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism {:?}", self.matrix)
    }
}

/// Basis of `Hom(B, C)`, in the deterministic order produced by the
/// elimination.
pub fn hom_basis<F: Field>(b: &Representation<F>, c: &Representation<F>) -> Result<Vec<Morphism<F>>, MorphismError> {
    check_compatible(b, c)?;
    let f = b.field();
    let layout = ShapeLayout::morphism(b.dims(), c.dims());
    let mut sys = LinearSystem::new(f, vec![layout]);
    let (bd, cd) = (b.matrix().to_dense(), c.matrix().to_dense());
    // T·C - B·T = 0
    sys.add_equation(
        &[Term::Right(f.one(), 0, &cd), Term::Left(f.neg(&f.one()), &bd, 0)],
        &DenseMatrix::zeros(f, b.total_dim(), c.total_dim()),
    );
    let sol = sys.solve().expect("homogeneous systems are consistent");
    Ok(sol
        .kernel
        .iter()
        .map(|v| Morphism::from_parts_unchecked(sys.extract(v, 0), b, c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::poset::IndexSet;
    use std::sync::Arc;

    fn alphas() -> Arc<IndexSet> {
        Arc::new(IndexSet::new(&["a1", "a2", "a3"], &[("a1", "a2")]).unwrap())
    }

    fn zero_obj<F: Field>(field: &F, idx: &Arc<IndexSet>, dims: Vec<usize>) -> Representation<F> {
        let d = DimVector::new(idx.clone(), dims).unwrap();
        Representation::new(&d, BlockMatrix::zero(field, &d, &d).unwrap()).unwrap()
    }

    #[test]
    fn nonabelian_example_objects_and_morphism() {
        let q = Rationals;
        let idx = alphas();
        let b12 = zero_obj(&q, &idx, vec![1, 1, 0]);
        let c3 = zero_obj(&q, &idx, vec![0, 0, 1]);
        let t = BlockMatrix::from_blocks(
            &q,
            b12.dims(),
            c3.dims(),
            [((0, 2), DenseMatrix::from_i64(&q, &[&[0]])), ((1, 2), DenseMatrix::from_i64(&q, &[&[1]]))],
        )
        .unwrap();
        let t = Morphism::new(t, &b12, &c3).unwrap();
        assert!(!t.is_zero());
        // nothing goes from the a3-object back to the a1a2-object
        assert!(hom_basis(&c3, &b12).unwrap().is_empty());
        assert_eq!(hom_basis(&b12, &c3).unwrap().len(), 2);
    }

    #[test]
    fn object_violations() {
        let q = Rationals;
        let idx = Arc::new(IndexSet::new(&["a"], &[]).unwrap());
        let d = DimVector::new(idx, vec![1]).unwrap();
        let err = Representation::from_blocks(&q, &d, [((0, 0), DenseMatrix::from_i64(&q, &[&[1]]))]).unwrap_err();
        assert_eq!(err, ObjectError::SquareNotZero { row: "a".into(), col: "a".into() });

        let idx = Arc::new(IndexSet::new(&["0", "1/2", "1", "2"], &[("1/2", "2")]).unwrap());
        let d = DimVector::new(idx, vec![1, 1, 0, 2]).unwrap();
        let err = Representation::from_blocks(&q, &d, []).unwrap_err();
        assert!(matches!(err, ObjectError::InvolutionDimViolation { ref index, .. } if index == "1/2"));

        let idx = alphas();
        let d = DimVector::new(idx, vec![1, 1, 2]).unwrap();
        let err = Representation::from_blocks(&q, &d, [((2, 2), DenseMatrix::from_i64(&q, &[&[1]]))]).unwrap_err();
        assert_eq!(err, ObjectError::ShapeViolation { row: "a3".into(), col: "a3".into() });
    }

    #[test]
    fn morphism_violations() {
        let q = Rationals;
        let idx = alphas();
        let b12 = zero_obj(&q, &idx, vec![1, 1, 0]);
        let c3 = zero_obj(&q, &idx, vec![0, 0, 1]);
        let below = BlockMatrix::from_blocks(&q, c3.dims(), b12.dims(), [((2, 0), DenseMatrix::from_i64(&q, &[&[1, ]]))]).unwrap();
        assert_eq!(
            Morphism::new(below, &c3, &b12).unwrap_err(),
            MorphismError::TriangularityViolation { row: "a3".into(), col: "a1".into() }
        );
        let diag = BlockMatrix::from_blocks(&q, b12.dims(), b12.dims(), [((0, 0), DenseMatrix::from_i64(&q, &[&[1]]))]).unwrap();
        assert!(matches!(Morphism::new(diag, &b12, &b12).unwrap_err(), MorphismError::SigmaDiagonalViolation { .. }));

        // intertwining: B = [[0,1],[0,0]] on a single band, T = diag(1, 0)
        let one = Arc::new(IndexSet::new(&["x"], &[]).unwrap());
        let d = DimVector::new(one, vec![2]).unwrap();
        let b = Representation::from_blocks(&q, &d, [((0, 0), DenseMatrix::from_i64(&q, &[&[0, 1], &[0, 0]]))]).unwrap();
        let t = BlockMatrix::from_blocks(&q, &d, &d, [((0, 0), DenseMatrix::from_i64(&q, &[&[1, 0], &[0, 0]]))]).unwrap();
        assert!(matches!(Morphism::new(t, &b, &b).unwrap_err(), MorphismError::IntertwiningViolation { .. }));
        assert!(Morphism::new(BlockMatrix::identity(&q, &d), &b, &b).is_ok());
    }

    #[test]
    fn identity_and_zero_object() {
        let f5 = PrimeField::new(5).unwrap();
        let idx = alphas();
        let o = Representation::zero_object(&f5, &idx);
        assert!(o.identity().matrix().is_zero());
        assert!(Morphism::new(o.matrix().clone(), &o, &o).is_ok());
        let b = zero_obj(&f5, &idx, vec![2, 2, 1]);
        assert!(hom_basis(&o, &b).unwrap().is_empty());
        let id = b.identity();
        assert!(Morphism::new(id.matrix().clone(), &b, &b).is_ok());
        assert!(id.is_strict_iso());
        assert!(!b.zero_to(&b).unwrap().is_strict_iso());
        let basis = hom_basis(&b, &b).unwrap();
        let lay = ShapeLayout::morphism(b.dims(), b.dims());
        // Id is in the span: solve for coordinates
        let gens: Vec<_> = basis.iter().map(|m| lay.coordinates(m.matrix()).unwrap()).collect();
        let target = lay.coordinates(id.matrix()).unwrap();
        let a = DenseMatrix::from_columns(&f5, lay.nvars(), &gens).unwrap();
        assert!(a.solve_affine(&target).unwrap().is_some());
    }

    #[test]
    fn compose_checks_endpoints() {
        let q = Rationals;
        let idx = alphas();
        let b = zero_obj(&q, &idx, vec![1, 1, 0]);
        let c = zero_obj(&q, &idx, vec![0, 0, 1]);
        let t = b.zero_to(&c).unwrap();
        assert_eq!(t.compose(&b.identity()), Err(MorphismError::SourceTargetMismatch));
        assert_eq!(b.identity().compose(&t).unwrap(), t);
        assert_eq!(t.compose(&c.identity()).unwrap(), t);
    }
}
