//! Seeded generators for index sets, objects, morphisms and squares that
//! commute up to homotopy. Everything is built so that it validates; nothing
//! is rejection-sampled.

use std::sync::Arc;

use thiserror::Error;

use crate::block::{BlockMatrix, DimVector};
use crate::field::Field;
use crate::homotopy::KappaMatrix;
use crate::linalg::{Column, DenseMatrix};
use crate::poset::IndexSet;
use crate::rep::{hom_basis, Morphism, Representation};
use crate::rng::SplitMix64;
use crate::system::{LinearSystem, ShapeLayout, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandError {
    #[error("only the zero square satisfies the constraints")]
    Degenerate,
}

/// Between 1 and `max_indices` labels `y0 < y1 < ...`, with random
/// disjoint pairs swapped by the involution.
pub fn random_index_set(max_indices: usize, rng: &mut SplitMix64) -> Arc<IndexSet> {
    let n = rng.range(1, max_indices.max(1));
    let labels: Vec<String> = (0..n).map(|i| format!("y{i}")).collect();
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut pairs = Vec::new();
    for chunk in order.chunks(2) {
        if chunk.len() == 2 && rng.coin() {
            pairs.push((labels[chunk[0]].clone(), labels[chunk[1]].clone()));
        }
    }
    Arc::new(IndexSet::new(&labels, &pairs).expect("generated labels are distinct"))
}

/// Dimensions in `0..=max_dim`, equal on σ-orbits.
pub fn random_dims(idx: &Arc<IndexSet>, max_dim: usize, rng: &mut SplitMix64) -> DimVector {
    let mut dims = vec![0; idx.len()];
    for i in 0..idx.len() {
        if idx.orbit_rep(i) == i {
            dims[i] = rng.range(0, max_dim);
        } else {
            dims[i] = dims[idx.orbit_rep(i)];
        }
    }
    DimVector::new(idx.clone(), dims).expect("one entry per index")
}

fn random_matrix<F: Field>(field: &F, rows: usize, cols: usize, rng: &mut SplitMix64) -> DenseMatrix<F> {
    let data = (0..rows * cols).map(|_| field.sample(rng)).collect();
    DenseMatrix::from_vec(field, rows, cols, data).expect("size")
}

fn random_combination<F: Field>(field: &F, len: usize, basis: &[Column<F>], rng: &mut SplitMix64) -> Column<F> {
    let mut out = vec![field.zero(); len];
    for v in basis {
        let c = field.sample(rng);
        for (o, x) in out.iter_mut().zip(v) {
            *o = field.add(o, &field.mul(&c, x));
        }
    }
    out
}

/// `B = U·V` with `V·U = 0`: `V` is a random `r × n` matrix with
/// `r <= n/2` and the columns of `U` are drawn from the kernel of `V`.
pub fn random_object<F: Field>(field: &F, dims: &DimVector, rng: &mut SplitMix64) -> Representation<F> {
    let n = dims.total();
    let r = rng.range(0, n / 2);
    let v = random_matrix(field, r, n, rng);
    let ker = v.kernel();
    let cols: Vec<Column<F>> = (0..r).map(|_| random_combination(field, n, &ker, rng)).collect();
    let u = DenseMatrix::from_columns(field, n, &cols).expect("column length");
    let b = &u * &v;
    let m = BlockMatrix::from_dense(field, dims, dims, &b).expect("layout");
    Representation::new(dims, m).expect("U·V squares to zero")
}

/// A random linear combination of a basis of `Hom(B, C)`.
pub fn random_morphism<F: Field>(b: &Representation<F>, c: &Representation<F>, rng: &mut SplitMix64) -> Morphism<F> {
    let f = b.field();
    let mut acc = b.zero_to(c).expect("compatible objects");
    for m in hom_basis(b, c).expect("compatible objects") {
        acc = acc.add(&m.scale(&f.sample(rng))).expect("parallel");
    }
    acc
}

/// `F: A -> A'`, `G: B -> B'`, `T: A -> B`, `T': A' -> B'` and `K` with
/// `F·T' - T·G = A·K + K·B'`.
#[derive(Clone, Debug)]
pub struct CommutingSquare<F: Field> {
    pub f: Morphism<F>,
    pub g: Morphism<F>,
    pub t: Morphism<F>,
    pub t2: Morphism<F>,
    pub k: KappaMatrix<F>,
}

impl<F: Field> CommutingSquare<F> {
    /// `F = G = Id`, `T' = T`, `K = 0`.
    pub fn trivial(t: &Morphism<F>) -> Self {
        Self {
            f: t.source().identity(),
            g: t.target().identity(),
            t: t.clone(),
            t2: t.clone(),
            k: KappaMatrix::zero(t.source(), t.target()).expect("shape"),
        }
    }

    pub fn holds(&self) -> bool {
        match (self.f.compose(&self.t2), self.t.compose(&self.g)) {
            (Ok(lhs), Ok(rhs)) => self.k.witnesses(&lhs, &rhs),
            _ => false,
        }
    }
}

/// Draw objects and `T`, `T'`, then a random point of the joint solution
/// space of `(F, G, K)`.
pub fn random_commuting_square<F: Field>(
    field: &F,
    idx: &Arc<IndexSet>,
    max_dim: usize,
    rng: &mut SplitMix64,
) -> Result<CommutingSquare<F>, RandError> {
    let mut obj = || {
        let d = random_dims(idx, max_dim, rng);
        random_object(field, &d, rng)
    };
    let (a, b, a2, b2) = (obj(), obj(), obj(), obj());
    let t = random_morphism(&a, &b, rng);
    let t2 = random_morphism(&a2, &b2, rng);
    let (ad, bd, a2d, b2d) = (a.matrix().to_dense(), b.matrix().to_dense(), a2.matrix().to_dense(), b2.matrix().to_dense());
    let (td, t2d) = (t.matrix().to_dense(), t2.matrix().to_dense());
    let layouts = vec![
        ShapeLayout::morphism(a.dims(), a2.dims()),
        ShapeLayout::morphism(b.dims(), b2.dims()),
        ShapeLayout::morphism(a.dims(), b2.dims()),
    ];
    let (one, minus) = (field.one(), field.from_i64(-1));
    let mut sys = LinearSystem::new(field, layouts);
    sys.add_equation(
        &[Term::Right(one.clone(), 0, &a2d), Term::Left(minus.clone(), &ad, 0)],
        &DenseMatrix::zeros(field, a.total_dim(), a2.total_dim()),
    );
    sys.add_equation(
        &[Term::Right(one.clone(), 1, &b2d), Term::Left(minus.clone(), &bd, 1)],
        &DenseMatrix::zeros(field, b.total_dim(), b2.total_dim()),
    );
    sys.add_equation(
        &[
            Term::Right(one, 0, &t2d),
            Term::Left(minus.clone(), &td, 1),
            Term::Left(minus.clone(), &ad, 2),
            Term::Right(minus, 2, &b2d),
        ],
        &DenseMatrix::zeros(field, a.total_dim(), b2.total_dim()),
    );
    let sol = sys.solve().expect("homogeneous");
    if sol.kernel.is_empty() {
        return Err(RandError::Degenerate);
    }
    let x = random_combination(field, sys.nvars(), &sol.kernel, rng);
    let square = CommutingSquare {
        f: Morphism::new(sys.extract(&x, 0), &a, &a2).expect("solved intertwining"),
        g: Morphism::new(sys.extract(&x, 1), &b, &b2).expect("solved intertwining"),
        t,
        t2,
        k: KappaMatrix::new(sys.extract(&x, 2), &a, &b2).expect("κ shape"),
    };
    debug_assert!(square.holds());
    Ok(square)
}
