//! Shift, mapping cones, the canonical maps into and out of a cone, direct
//! sums and standard triangles.
//!
//! Every cone is laid out with the source part of each band before the
//! target part, and iterated cones nest this rule.

use crate::block::BlockMatrix;
use crate::field::Field;
use crate::rep::{Morphism, MorphismError, Representation};

/// `[B]`: the same bands with the matrix negated.
pub fn shift<F: Field>(b: &Representation<F>) -> Representation<F> {
    Representation::from_matrix_unchecked(b.matrix().neg())
}

/// `[T]: [B] -> [C]`, carried by the same matrix.
pub fn shift_morphism<F: Field>(t: &Morphism<F>) -> Morphism<F> {
    Morphism::from_parts_unchecked(t.matrix().clone(), &shift(t.source()), &shift(t.target()))
}

/// The cone of `T: B -> C`: every block `(i, j)` is `[[-B, T], [0, C]]`.
pub fn cone<F: Field>(t: &Morphism<F>) -> Representation<F> {
    let (b, c) = (t.source(), t.target());
    let neg_b = b.matrix().neg();
    let m = BlockMatrix::grid(
        t.field(),
        &[b.dims(), c.dims()],
        &[b.dims(), c.dims()],
        &[vec![Some(&neg_b), Some(t.matrix())], vec![None, Some(c.matrix())]],
    )
    .expect("cone parts line up");
    Representation::from_matrix_unchecked(m)
}

/// `ι_C: C -> C_T` and `π_B: C_T -> [B]`.
#[derive(Clone, Debug)]
pub struct CanonicalMaps<F: Field> {
    pub iota: Morphism<F>,
    pub pi: Morphism<F>,
}

pub fn canonical_maps<F: Field>(t: &Morphism<F>) -> CanonicalMaps<F> {
    let (b, c, f) = (t.source(), t.target(), t.field());
    let ct = cone(t);
    let id_b = BlockMatrix::identity(f, b.dims());
    let id_c = BlockMatrix::identity(f, c.dims());
    let iota = BlockMatrix::grid(f, &[c.dims()], &[b.dims(), c.dims()], &[vec![None, Some(&id_c)]]).expect("layout");
    let pi = BlockMatrix::grid(f, &[b.dims(), c.dims()], &[b.dims()], &[vec![Some(&id_b)], vec![None]]).expect("layout");
    CanonicalMaps {
        iota: Morphism::from_parts_unchecked(iota, c, &ct),
        pi: Morphism::from_parts_unchecked(pi, &ct, &shift(b)),
    }
}

/// The matrices `(Id_B | 0)` and `(0 ; Id_C)` regardless of whether they
/// are morphisms `[B] -> C_T` and `C_T -> C`.
pub fn hat_candidates<F: Field>(t: &Morphism<F>) -> (BlockMatrix<F>, BlockMatrix<F>) {
    let (b, c, f) = (t.source(), t.target(), t.field());
    let id_b = BlockMatrix::identity(f, b.dims());
    let id_c = BlockMatrix::identity(f, c.dims());
    let iota_hat = BlockMatrix::grid(f, &[b.dims()], &[b.dims(), c.dims()], &[vec![Some(&id_b), None]]).expect("layout");
    let pi_hat = BlockMatrix::grid(f, &[b.dims(), c.dims()], &[c.dims()], &[vec![None], vec![Some(&id_c)]]).expect("layout");
    (iota_hat, pi_hat)
}

/// `ι̂_B: [B] -> C_T` and `π̂_C: C_T -> C`.
#[derive(Clone, Debug)]
pub struct HatMaps<F: Field> {
    pub iota_hat: Morphism<F>,
    pub pi_hat: Morphism<F>,
}

/// Present exactly when `T = 0`; otherwise the candidate matrices fail to
/// intertwine.
pub fn hat_maps<F: Field>(t: &Morphism<F>) -> Option<HatMaps<F>> {
    if !t.is_zero() {
        return None;
    }
    let ct = cone(t);
    let (iota_hat, pi_hat) = hat_candidates(t);
    Some(HatMaps {
        iota_hat: Morphism::from_parts_unchecked(iota_hat, &shift(t.source()), &ct),
        pi_hat: Morphism::from_parts_unchecked(pi_hat, &ct, t.target()),
    })
}

/// `B ⊕ C` as the cone of `0: [B] -> C`, with its four structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum<F: Field> {
    pub object: Representation<F>,
    pub iota_hat_b: Morphism<F>,
    pub iota_c: Morphism<F>,
    pub pi_b: Morphism<F>,
    pub pi_hat_c: Morphism<F>,
}

pub fn direct_sum<F: Field>(b: &Representation<F>, c: &Representation<F>) -> Result<DirectSum<F>, MorphismError> {
    let zero = shift(b).zero_to(c)?;
    let canon = canonical_maps(&zero);
    let hat = hat_maps(&zero).expect("zero morphism has hat maps");
    Ok(DirectSum { object: cone(&zero), iota_hat_b: hat.iota_hat, iota_c: canon.iota, pi_b: canon.pi, pi_hat_c: hat.pi_hat })
}

impl<F: Field> DirectSum<F> {
    /// The five biproduct identities in order
    /// `ι̂π̂ = 0`, `ιπ = 0`, `ι̂π = Id_B`, `ιπ̂ = Id_C`, `πι̂ + π̂ι = Id`.
    pub fn identities(&self) -> [bool; 5] {
        let c = |a: &Morphism<F>, b: &Morphism<F>| a.compose(b).expect("biproduct maps compose");
        let b_obj = self.pi_b.target();
        let c_obj = self.iota_c.source();
        let sum = c(&self.pi_b, &self.iota_hat_b).add(&c(&self.pi_hat_c, &self.iota_c)).expect("parallel");
        [
            c(&self.iota_hat_b, &self.pi_hat_c).is_zero(),
            c(&self.iota_c, &self.pi_b).is_zero(),
            c(&self.iota_hat_b, &self.pi_b) == b_obj.identity(),
            c(&self.iota_c, &self.pi_hat_c) == c_obj.identity(),
            sum == self.object.identity(),
        ]
    }
}

/// A sextuple `X -u-> Y -v-> Z -w-> [X]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle<F: Field> {
    pub x: Representation<F>,
    pub y: Representation<F>,
    pub z: Representation<F>,
    pub u: Morphism<F>,
    pub v: Morphism<F>,
    pub w: Morphism<F>,
}

impl<F: Field> Triangle<F> {
    pub fn new(u: Morphism<F>, v: Morphism<F>, w: Morphism<F>) -> Result<Self, MorphismError> {
        if u.target() != v.source() || v.target() != w.source() || *w.target() != shift(u.source()) {
            return Err(MorphismError::SourceTargetMismatch);
        }
        Ok(Self { x: u.source().clone(), y: v.source().clone(), z: w.source().clone(), u, v, w })
    }

    /// `(Y, Z, [X], v, w, -[u])`.
    pub fn rotated(&self) -> Self {
        let u = shift_morphism(&self.u).neg();
        Self::new(self.v.clone(), self.w.clone(), u).expect("rotation of a triangle is a triangle")
    }
}

/// `B -T-> C -ι_C-> C_T -π_B-> [B]`.
pub fn standard_triangle<F: Field>(t: &Morphism<F>) -> Triangle<F> {
    let maps = canonical_maps(t);
    Triangle::new(t.clone(), maps.iota, maps.pi).expect("standard triangle lines up")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::DimVector;
    use crate::field::{PrimeField, Rationals};
    use crate::linalg::DenseMatrix;
    use crate::poset::IndexSet;
    use std::sync::Arc;

    fn single<F: Field>(f: &F, m: &[&[i64]]) -> Representation<F> {
        let idx = Arc::new(IndexSet::new(&["x"], &[]).unwrap());
        let d = DimVector::new(idx, vec![m.len()]).unwrap();
        Representation::from_blocks(f, &d, [((0, 0), DenseMatrix::from_i64(f, m))]).unwrap()
    }

    #[test]
    fn cone_of_identity_on_a_point() {
        let q = Rationals;
        let b = single(&q, &[&[0]]);
        let ct = cone(&b.identity());
        assert_eq!(ct.matrix().to_dense(), DenseMatrix::from_i64(&q, &[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn shift_is_an_involution_and_trivial_in_characteristic_two() {
        let q = Rationals;
        let b = single(&q, &[&[0, 1], &[0, 0]]);
        assert_eq!(shift(&shift(&b)), b);
        assert_ne!(shift(&b), b);
        let f2 = PrimeField::new(2).unwrap();
        let b2 = single(&f2, &[&[0, 1], &[0, 0]]);
        assert_eq!(shift(&b2), b2);
        let id = shift_morphism(&b.identity());
        assert_eq!(id, shift(&b).identity());
    }

    #[test]
    fn hat_maps_only_for_zero() {
        let f5 = PrimeField::new(5).unwrap();
        let b = single(&f5, &[&[0, 1], &[0, 0]]);
        let t = b.identity();
        assert!(hat_maps(&t).is_none());
        let (iota_hat, _) = hat_candidates(&t);
        assert!(matches!(
            Morphism::new(iota_hat, &shift(&b), &cone(&t)),
            Err(MorphismError::IntertwiningViolation { .. })
        ));
        let z = b.zero_to(&b).unwrap();
        let hat = hat_maps(&z).unwrap();
        let ct = cone(&z);
        assert!(Morphism::new(hat.iota_hat.matrix().clone(), &shift(&b), &ct).is_ok());
        assert!(Morphism::new(hat.pi_hat.matrix().clone(), &ct, &b).is_ok());
    }

    #[test]
    fn direct_sum_identities_and_dims() {
        let f5 = PrimeField::new(5).unwrap();
        let b = single(&f5, &[&[0, 2], &[0, 0]]);
        let c = single(&f5, &[&[0]]);
        let s = direct_sum(&b, &c).unwrap();
        assert_eq!(s.identities(), [true; 5]);
        assert_eq!(s.object.dims().dims(), &[3]);
        assert_eq!(s.object.matrix().to_dense(), DenseMatrix::from_i64(&f5, &[&[0, 2, 0], &[0, 0, 0], &[0, 0, 0]]));
        let with_zero = direct_sum(&b, &Representation::zero_object(&f5, b.dims().index_set())).unwrap();
        assert!(with_zero.iota_hat_b.is_strict_iso());
    }

    #[test]
    fn standard_triangle_consecutive_maps() {
        let q = Rationals;
        let b = single(&q, &[&[0, 1], &[0, 0]]);
        let t = b.identity().scale(&q.from_i64(3));
        let tri = standard_triangle(&t);
        assert!(tri.v.compose(&tri.w).unwrap().is_zero());
        for m in [&tri.u, &tri.v, &tri.w] {
            assert!(Morphism::new(m.matrix().clone(), m.source(), m.target()).is_ok());
        }
        let r = tri.rotated().rotated().rotated();
        assert_eq!(r.x, shift(&tri.x));
        assert_eq!(r.u, shift_morphism(&tri.u).neg());
    }
}
