//! Homotopy of morphisms and the quotient category.
//!
//! `S ≡ T` when `S - T = B·K + K·C` for some `K` shaped like a morphism
//! `B -> C` (zero below the diagonal, σ-paired diagonal blocks equal) but
//! not necessarily intertwining. `B` and `C` are the stored matrices of the
//! source and target, so shifted objects enter with their negated matrices.

use crate::block::BlockMatrix;
use crate::cone::cone;
use crate::field::Field;
use crate::linalg::{row_space_basis, subspace_intersect, DenseMatrix};
use crate::rep::{check_shape, hom_basis, Morphism, MorphismError, Representation};
use crate::system::{LinearSystem, ShapeLayout, Term};

/// A morphism-shaped matrix between two objects, used as a homotopy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaMatrix<F: Field> {
    source: Representation<F>,
    target: Representation<F>,
    matrix: BlockMatrix<F>,
}

impl<F: Field> KappaMatrix<F> {
    pub fn new(matrix: BlockMatrix<F>, source: &Representation<F>, target: &Representation<F>) -> Result<Self, MorphismError> {
        check_shape(&matrix, source, target)?;
        Ok(Self { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn zero(source: &Representation<F>, target: &Representation<F>) -> Result<Self, MorphismError> {
        let m = BlockMatrix::zero(source.field(), source.dims(), target.dims())?;
        Self::new(m, source, target)
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

    /// `B·K + K·C`.
    pub fn boundary(&self) -> BlockMatrix<F> {
        let left = self.source.matrix().try_mul(&self.matrix).expect("layout");
        let right = self.matrix.try_mul(self.target.matrix()).expect("layout");
        left.try_add(&right).expect("layout")
    }

    /// Whether `S - T = B·K + K·C`, checked by multiplication.
    pub fn witnesses(&self, s: &Morphism<F>, t: &Morphism<F>) -> bool {
        if s.source() != &self.source || s.target() != &self.target || t.source() != &self.source || t.target() != &self.target {
            return false;
        }
        s.matrix().try_sub(t.matrix()).expect("parallel") == self.boundary()
    }

    pub fn neg(&self) -> Self {
        Self { matrix: self.matrix.neg(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, MorphismError> {
        if self.source != other.source || self.target != other.target {
            return Err(MorphismError::SourceTargetMismatch);
        }
        Ok(Self { matrix: self.matrix.try_add(&other.matrix)?, ..self.clone() })
    }
}

fn homotopy_terms<'a, F: Field>(f: &F, src: &'a DenseMatrix<F>, tgt: &'a DenseMatrix<F>, k: usize, sign: i64) -> [Term<'a, F>; 2] {
    let c = f.from_i64(sign);
    [Term::Left(c.clone(), src, k), Term::Right(c, k, tgt)]
}

/// A homotopy from `S` to `T`, or `None` if they are not homotopic.
pub fn kappa_equiv<F: Field>(s: &Morphism<F>, t: &Morphism<F>) -> Result<Option<KappaMatrix<F>>, MorphismError> {
    if s.source() != t.source() || s.target() != t.target() {
        return Err(MorphismError::SourceTargetMismatch);
    }
    let (b, c, f) = (s.source(), s.target(), s.field());
    let mut sys = LinearSystem::new(f, vec![ShapeLayout::morphism(b.dims(), c.dims())]);
    let (bd, cd) = (b.matrix().to_dense(), c.matrix().to_dense());
    let rhs = s.matrix().try_sub(t.matrix())?.to_dense();
    sys.add_equation(&homotopy_terms(f, &bd, &cd, 0, 1), &rhs);
    let Some(sol) = sys.solve() else { return Ok(None) };
    let k = KappaMatrix::new(sys.extract(&sol.particular, 0), b, c)?;
    debug_assert!(k.witnesses(s, t));
    Ok(Some(k))
}

/// Basis of the null-homotopic morphisms `B -> C`.
pub fn null_homotopic_subspace<F: Field>(b: &Representation<F>, c: &Representation<F>) -> Result<Vec<Morphism<F>>, MorphismError> {
    let f = b.field();
    let homs = hom_basis(b, c)?;
    if homs.is_empty() {
        return Ok(Vec::new());
    }
    let layout = ShapeLayout::morphism(b.dims(), c.dims());
    let (bd, cd) = (b.matrix().to_dense(), c.matrix().to_dense());
    let mut image = Vec::with_capacity(layout.nvars());
    let mut unit = vec![f.zero(); layout.nvars()];
    for v in 0..layout.nvars() {
        unit[v] = f.one();
        let k = layout.to_block_matrix(f, &unit).to_dense();
        unit[v] = f.zero();
        let img = &(&bd * &k) + &(&k * &cd);
        image.push(img.into_entries());
    }
    let len = b.total_dim() * c.total_dim();
    let image = row_space_basis(f, len, &image);
    let hom_vectors: Vec<_> = homs.iter().map(|m| m.matrix().to_dense().into_entries()).collect();
    let common = subspace_intersect(f, &image, &hom_vectors).expect("vector lengths agree");
    Ok(common
        .into_iter()
        .map(|v| {
            let dense = DenseMatrix::from_vec(f, b.total_dim(), c.total_dim(), v).expect("length");
            let m = BlockMatrix::from_dense(f, b.dims(), c.dims(), &dense).expect("layout");
            Morphism::from_parts_unchecked(m, b, c)
        })
        .collect())
}

/// `dim Hom(B, C) / ≡`.
pub fn quotient_hom_dim<F: Field>(b: &Representation<F>, c: &Representation<F>) -> Result<usize, MorphismError> {
    Ok(hom_basis(b, c)?.len() - null_homotopic_subspace(b, c)?.len())
}

/// Certificate that `T: B -> C` is invertible up to homotopy:
/// `T·U - Id_B = B·K_B + K_B·B` and `U·T - Id_C = C·K_C + K_C·C`.
#[derive(Clone, Debug)]
pub struct KappaIso<F: Field> {
    pub inverse: Morphism<F>,
    pub k_source: KappaMatrix<F>,
    pub k_target: KappaMatrix<F>,
}

impl<F: Field> KappaIso<F> {
    pub fn verify(&self, t: &Morphism<F>) -> bool {
        let (Ok(tu), Ok(ut)) = (t.compose(&self.inverse), self.inverse.compose(t)) else { return false };
        self.k_source.witnesses(&tu, &t.source().identity()) && self.k_target.witnesses(&ut, &t.target().identity())
    }
}

pub fn is_kappa_iso<F: Field>(t: &Morphism<F>) -> Option<KappaIso<F>> {
    let (b, c, f) = (t.source(), t.target(), t.field());
    if t.is_strict_iso() {
        let inv = t.matrix().to_dense().inverse().expect("square").expect("invertible diagonal");
        let inv = BlockMatrix::from_dense(f, c.dims(), b.dims(), &inv).expect("layout");
        return Some(KappaIso {
            inverse: Morphism::from_parts_unchecked(inv, c, b),
            k_source: KappaMatrix::zero(b, b).expect("shape"),
            k_target: KappaMatrix::zero(c, c).expect("shape"),
        });
    }
    let (bd, cd, td) =(b.matrix().to_dense(), c.matrix().to_dense(), t.matrix().to_dense());
    let (nb, nc) = (b.total_dim(), c.total_dim());
    let layouts = vec![
        ShapeLayout::morphism(c.dims(), b.dims()),
        ShapeLayout::morphism(b.dims(), b.dims()),
        ShapeLayout::morphism(c.dims(), c.dims()),
    ];
    let (one, minus) = (f.one(), f.from_i64(-1));
    let mut sys = LinearSystem::new(f, layouts);
    // U·B - C·U = 0
    sys.add_equation(&[Term::Right(one.clone(), 0, &bd), Term::Left(minus.clone(), &cd, 0)], &DenseMatrix::zeros(f, nc, nb));
    // T·U - B·K_B - K_B·B = Id
    let [l, r] = homotopy_terms(f, &bd, &bd, 1, -1);
    sys.add_equation(&[Term::Left(one.clone(), &td, 0), l, r], &DenseMatrix::identity(f, nb));
    // U·T - C·K_C - K_C·C = Id
    let [l, r] = homotopy_terms(f, &cd, &cd, 2, -1);
    sys.add_equation(&[Term::Right(one, 0, &td), l, r], &DenseMatrix::identity(f, nc));
    let sol = sys.solve()?;
    let iso = KappaIso {
        inverse: Morphism::from_parts_unchecked(sys.extract(&sol.particular, 0), c, b),
        k_source: KappaMatrix::new(sys.extract(&sol.particular, 1), b, b).expect("shape"),
        k_target: KappaMatrix::new(sys.extract(&sol.particular, 2), c, c).expect("shape"),
    };
    debug_assert!(iso.verify(t));
    Some(iso)
}

/// `[[0, 0], [Id, 0]]` on the cone of `Id_B`: a homotopy from its identity
/// to zero.
pub fn cone_identity_contraction<F: Field>(b: &Representation<F>) -> KappaMatrix<F> {
    let ct = cone(&b.identity());
    let id = BlockMatrix::identity(b.field(), b.dims());
    let k = BlockMatrix::grid(b.field(), &[b.dims(), b.dims()], &[b.dims(), b.dims()], &[vec![None, None], vec![Some(&id), None]])
        .expect("layout");
    KappaMatrix::new(k, &ct, &ct).expect("κ shape")
}

/// `(Id_B | 0)`: a homotopy from `T·ι_C` to zero.
pub fn cone_inclusion_null_homotopy<F: Field>(t: &Morphism<F>) -> KappaMatrix<F> {
    let b = t.source();
    let id = BlockMatrix::identity(t.field(), b.dims());
    let k = BlockMatrix::grid(t.field(), &[b.dims()], &[b.dims(), t.target().dims()], &[vec![Some(&id), None]]).expect("layout");
    KappaMatrix::new(k, b, &cone(t)).expect("κ shape")
}

/// Objects isomorphic to zero in the quotient: `Id ≡ 0`.
pub fn is_contractible<F: Field>(b: &Representation<F>) -> bool {
    let zero = b.zero_to(b).expect("same object");
    kappa_equiv(&b.identity(), &zero).expect("parallel").is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::DimVector;
    use crate::cone::{canonical_maps, shift};
    use crate::field::{PrimeField, Rationals};
    use crate::poset::IndexSet;
    use std::sync::Arc;

    fn point<F: Field>(f: &F, n: usize) -> Representation<F> {
        let idx = Arc::new(IndexSet::new(&["x"], &[]).unwrap());
        let d = DimVector::new(idx, vec![n]).unwrap();
        Representation::from_blocks(f, &d, []).unwrap()
    }

    #[test]
    fn identity_of_contractible_cone_is_null() {
        let q = Rationals;
        let x = point(&q, 1);
        let ct = cone(&x.identity());
        let zero = ct.zero_to(&ct).unwrap();
        let k = kappa_equiv(&ct.identity(), &zero).unwrap().unwrap();
        assert_eq!(k, cone_identity_contraction(&x));
        assert!(k.witnesses(&ct.identity(), &zero));
        assert_eq!(quotient_hom_dim(&ct, &ct).unwrap(), 0);
        assert_eq!(null_homotopic_subspace(&ct, &ct).unwrap().len(), hom_basis(&ct, &ct).unwrap().len());
    }

    #[test]
    fn cone_inclusion_after_t_is_null() {
        let f5 = PrimeField::new(5).unwrap();
        let b = point(&f5, 2);
        let t = b.identity().scale(&2);
        let iota = canonical_maps(&t).iota;
        let ti = t.compose(&iota).unwrap();
        let k = cone_inclusion_null_homotopy(&t);
        assert!(k.witnesses(&ti, &ti.source().zero_to(ti.target()).unwrap()));
        assert!(kappa_equiv(&ti, &b.zero_to(ti.target()).unwrap()).unwrap().is_some());
    }

    #[test]
    fn reflexive_symmetric_transitive() {
        let q = Rationals;
        let x = point(&q, 1);
        let ct = cone(&x.identity());
        let id = ct.identity();
        let zero = ct.zero_to(&ct).unwrap();
        let k0 = kappa_equiv(&id, &id).unwrap().unwrap();
        assert!(k0.matrix().is_zero());
        let k = kappa_equiv(&id, &zero).unwrap().unwrap();
        assert!(k.neg().witnesses(&zero, &id));
        let half = id.scale(&q.parse("1/2").unwrap());
        let k2 = kappa_equiv(&zero, &half).unwrap().unwrap();
        assert!(k.add(&k2).unwrap().witnesses(&id, &half));
    }

    #[test]
    fn zero_is_not_an_iso_on_a_rigid_object() {
        let q = Rationals;
        let x = point(&q, 2);
        assert!(is_kappa_iso(&x.zero_to(&x).unwrap()).is_none());
        let iso = is_kappa_iso(&x.identity()).unwrap();
        assert_eq!(iso.inverse, x.identity());
        assert!(iso.verify(&x.identity()));
        assert!(!is_contractible(&x));
        assert_eq!(quotient_hom_dim(&x, &x).unwrap(), 4);
    }

    #[test]
    fn contractible_cone_to_zero_is_an_iso() {
        let f3 = PrimeField::new(3).unwrap();
        let x = point(&f3, 2);
        let ct = cone(&x.identity());
        let o = Representation::zero_object(&f3, x.dims().index_set());
        let z = ct.zero_to(&o).unwrap();
        let iso = is_kappa_iso(&z).unwrap();
        assert!(iso.verify(&z));
        assert!(is_contractible(&ct));
        assert_eq!(quotient_hom_dim(&shift(&ct), &shift(&ct)).unwrap(), 0);
    }
}
