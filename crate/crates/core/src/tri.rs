//! Witnesses for the triangulated structure on the homotopy quotient.
//!
//! Each construction checks exactly the identities that hold on the nose
//! and produces homotopies for the ones that hold only up to `≡`. Every
//! homotopy is re-checked by multiplication before it is returned.

use thiserror::Error;

use crate::block::BlockMatrix;
use crate::cone::{canonical_maps, cone, shift, shift_morphism, standard_triangle, Triangle};
use crate::field::Field;
use crate::homotopy::{is_kappa_iso, kappa_equiv, KappaIso, KappaMatrix};
use crate::rep::{Morphism, MorphismError, Representation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("vertical maps do not connect the two triangles")]
    Mismatch,
    #[error("vertical map {0} is not invertible up to homotopy")]
    NotIso(usize),
    #[error("square {0} does not commute up to homotopy")]
    SquareFails(usize),
    #[error("the κ-matrix does not witness F·T' ≡ T·G")]
    InvalidWitness,
    #[error("identity {0} fails")]
    Identity(&'static str),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// An isomorphism of triangles in the quotient.
#[derive(Clone, Debug)]
pub struct TriangleIso<F: Field> {
    pub maps: [Morphism<F>; 3],
    /// Homotopies for the squares, in the order `u·f2 ≡ f1·u'`,
    /// `v·f3 ≡ f2·v'`, `w·[f1] ≡ f3·w'`.
    pub square_witnesses: [KappaMatrix<F>; 3],
    pub inverses: [KappaIso<F>; 3],
}

pub fn certify_triangle_iso<F: Field>(
    t1: &Triangle<F>,
    t2: &Triangle<F>,
    f1: &Morphism<F>,
    f2: &Morphism<F>,
    f3: &Morphism<F>,
) -> Result<TriangleIso<F>, AxiomError> {
    let ends = [(f1, &t1.x, &t2.x), (f2, &t1.y, &t2.y), (f3, &t1.z, &t2.z)];
    if ends.iter().any(|(f, s, t)| f.source() != *s || f.target() != *t) {
        return Err(AxiomError::Mismatch);
    }
    let mut inverses = Vec::with_capacity(3);
    for (n, f) in [f1, f2, f3].into_iter().enumerate() {
        inverses.push(is_kappa_iso(f).ok_or(AxiomError::NotIso(n + 1))?);
    }
    let squares = [
        (t1.u.compose(f2)?, f1.compose(&t2.u)?),
        (t1.v.compose(f3)?, f2.compose(&t2.v)?),
        (t1.w.compose(&shift_morphism(f1))?, f3.compose(&t2.w)?),
    ];
    let mut witnesses = Vec::with_capacity(3);
    for (n, (lhs, rhs)) in squares.iter().enumerate() {
        witnesses.push(kappa_equiv(lhs, rhs)?.ok_or(AxiomError::SquareFails(n + 1))?);
    }
    Ok(TriangleIso {
        maps: [f1.clone(), f2.clone(), f3.clone()],
        square_witnesses: witnesses.try_into().expect("three squares"),
        inverses: inverses.try_into().expect("three maps"),
    })
}

fn require(ok: bool, what: &'static str) -> Result<(), AxiomError> {
    if ok {
        Ok(())
    } else {
        Err(AxiomError::Identity(what))
    }
}

fn assemble<F: Field>(
    field: &F,
    source: &Representation<F>,
    target: &Representation<F>,
    row_parts: &[&Representation<F>],
    col_parts: &[&Representation<F>],
    cells: &[Vec<Option<&BlockMatrix<F>>>],
) -> Result<BlockMatrix<F>, AxiomError> {
    let rows: Vec<_> = row_parts.iter().map(|r| r.dims()).collect();
    let cols: Vec<_> = col_parts.iter().map(|r| r.dims()).collect();
    let m = BlockMatrix::grid(field, &rows, &cols, cells).map_err(MorphismError::from)?;
    Ok(m.with_dims(source.dims(), target.dims()).map_err(MorphismError::from)?)
}

/// The cone of the identity is contractible and the triangle
/// `B -Id-> B -> 0 -> [B]` is isomorphic to the standard triangle of `Id_B`.
#[derive(Clone, Debug)]
pub struct Tr1<F: Field> {
    pub to_zero: KappaIso<F>,
    pub iso: TriangleIso<F>,
}

pub fn tr1<F: Field>(b: &Representation<F>) -> Result<Tr1<F>, AxiomError> {
    let id = b.identity();
    let std = standard_triangle(&id);
    let zero = Representation::zero_object(b.field(), b.dims().index_set());
    let to_zero_map = std.z.zero_to(&zero)?;
    let to_zero = is_kappa_iso(&to_zero_map).ok_or(AxiomError::NotIso(3))?;
    let trivial = Triangle::new(id.clone(), b.zero_to(&zero)?, zero.zero_to(&shift(b))?)?;
    let iso = certify_triangle_iso(&std, &trivial, &id, &id, &to_zero_map)?;
    Ok(Tr1 { to_zero, iso })
}

/// The rotated standard triangle `(C, C_T, [B], ι_C, π_B, -[T])` and its
/// identification with the standard triangle of `ι_C`.
#[derive(Clone, Debug)]
pub struct Rotation<F: Field> {
    pub triangle: Triangle<F>,
    /// From the standard triangle of `ι_C` to `triangle`: `(Id, Id, S)`.
    pub iso: TriangleIso<F>,
    pub r: Morphism<F>,
    pub s: Morphism<F>,
    /// `Id - S·R` on the cone of `ι_C` is null-homotopic via this matrix.
    pub k_sr: KappaMatrix<F>,
    /// `π_C + S·T ≡ 0` via this matrix.
    pub k_square: KappaMatrix<F>,
}

pub fn rotate<F: Field>(t: &Morphism<F>) -> Result<Rotation<F>, AxiomError> {
    let f = t.field();
    let (b, c) = (t.source(), t.target());
    let std_t = standard_triangle(t);
    let rotated = std_t.rotated();
    let iota = &std_t.v;
    let std_iota = standard_triangle(iota);
    let big = &std_iota.z;
    let shifted_b = shift(b);
    let id_b = BlockMatrix::identity(f, b.dims());
    let id_c = BlockMatrix::identity(f, c.dims());
    let neg_t = t.matrix().neg();
    // parts of every band of the cone of ι_C are (C, B, C)
    let s = assemble(f, big, &shifted_b, &[c, b, c], &[b], &[vec![None], vec![Some(&id_b)], vec![None]])?;
    let s = Morphism::new(s, big, &shifted_b)?;
    let r = assemble(f, &shifted_b, big, &[b], &[c, b, c], &[vec![Some(&neg_t), Some(&id_b), None]])?;
    let r = Morphism::new(r, &shifted_b, big)?;

    require(r.compose(&s)? == shifted_b.identity(), "R·S = Id")?;
    let k_sr = assemble(f, big, big, &[c, b, c], &[c, b, c], &[
        vec![None, None, None],
        vec![None, None, None],
        vec![Some(&id_c), None, None],
    ])?;
    let k_sr = KappaMatrix::new(k_sr, big, big)?;
    require(k_sr.witnesses(&big.identity(), &s.compose(&r)?), "Id - S·R ≡ 0")?;

    let iota_ct = canonical_maps(iota).iota;
    require(iota_ct.compose(&s)? == std_t.w, "ι·S = π_B")?;
    let shifted_c = shift(c);
    let k_square = assemble(f, big, &shifted_c, &[c, b, c], &[c], &[vec![None], vec![None], vec![Some(&id_c)]])?;
    let k_square = KappaMatrix::new(k_square, big, &shifted_c)?;
    let pi_c = &std_iota.w;
    let s_t = s.compose(&shift_morphism(t).neg())?;
    require(k_square.witnesses(pi_c, &s_t), "π_C + S·T ≡ 0")?;

    let iso = certify_triangle_iso(&std_iota, &rotated, &c.identity(), &std_t.z.identity(), &s)?;
    Ok(Rotation { triangle: rotated, iso, r, s, k_sr, k_square })
}

/// A triangle together with an isomorphism from a standard triangle.
#[derive(Clone, Debug)]
pub struct Distinguished<F: Field> {
    pub triangle: Triangle<F>,
    pub base: Morphism<F>,
    pub iso: TriangleIso<F>,
}

impl<F: Field> Distinguished<F> {
    pub fn standard(t: &Morphism<F>) -> Result<Self, AxiomError> {
        let triangle = standard_triangle(t);
        let iso = certify_triangle_iso(&triangle, &triangle, &triangle.x.identity(), &triangle.y.identity(), &triangle.z.identity())?;
        Ok(Self { triangle, base: t.clone(), iso })
    }

    /// Rotate, carrying the certificate along: if `(f1, f2, f3)` identifies
    /// the standard triangle of `T` with this one, then
    /// `(f2, f3, S·[f1])` identifies the standard triangle of `ι_C` with
    /// the rotation.
    pub fn rotate(&self) -> Result<Self, AxiomError> {
        let rot = rotate(&self.base)?;
        let [f1, f2, f3] = &self.iso.maps;
        let g3 = rot.s.compose(&shift_morphism(f1))?;
        let std_iota = standard_triangle(&rot.triangle.u);
        let triangle = self.triangle.rotated();
        let iso = certify_triangle_iso(&std_iota, &triangle, f2, f3, &g3)?;
        Ok(Self { triangle, base: rot.triangle.u.clone(), iso })
    }
}

/// Completion `H: C_T -> C_T'` of a square commuting up to homotopy.
pub fn fill_tr3<F: Field>(
    f: &Morphism<F>,
    g: &Morphism<F>,
    t: &Morphism<F>,
    t2: &Morphism<F>,
    k: &KappaMatrix<F>,
) -> Result<Morphism<F>, AxiomError> {
    let field = f.field();
    if t.source() != f.source() || t.target() != g.source() || t2.source() != f.target() || t2.target() != g.target() {
        return Err(AxiomError::Mismatch);
    }
    if !k.witnesses(&f.compose(t2)?, &t.compose(g)?) {
        return Err(AxiomError::InvalidWitness);
    }
    let (a, b, a2, b2) = (t.source(), t.target(), t2.source(), t2.target());
    let (ct, ct2) = (cone(t), cone(t2));
    let neg_k = k.matrix().neg();
    let h = assemble(field, &ct, &ct2, &[a, b], &[a2, b2], &[
        vec![Some(f.matrix()), Some(&neg_k)],
        vec![None, Some(g.matrix())],
    ])?;
    let h = Morphism::new(h, &ct, &ct2)?;
    let (m, m2) = (canonical_maps(t), canonical_maps(t2));
    require(m.iota.compose(&h)? == g.compose(&m2.iota)?, "ι·H = G·ι'")?;
    require(m.pi.compose(&shift_morphism(f))? == h.compose(&m2.pi)?, "π·[F] = H·π'")?;
    Ok(h)
}

/// Data for the octahedral axiom applied to `S: A -> B`, `T: B -> C`.
#[derive(Clone, Debug)]
pub struct Octahedron<F: Field> {
    pub f: Morphism<F>,
    pub g: Morphism<F>,
    pub lambda: Morphism<F>,
    /// `ι - G·Λ ≡ 0` on `C_ST -> C_F`.
    pub lambda_witness: KappaMatrix<F>,
    pub lambda_inverse: KappaIso<F>,
    /// `(C_S, C_ST, C_T, F, G, π_B·[ι_B])`.
    pub triangle: Triangle<F>,
    /// From `triangle` to the standard triangle of `F`: `(Id, Id, Λ)`.
    pub iso: TriangleIso<F>,
}

pub fn octahedron<F: Field>(s: &Morphism<F>, t: &Morphism<F>) -> Result<Octahedron<F>, AxiomError> {
    if s.target() != t.source() {
        return Err(AxiomError::Morphism(MorphismError::SourceTargetMismatch));
    }
    let field = s.field();
    let (a, b, c) = (s.source(), s.target(), t.target());
    let st = s.compose(t)?;
    let (cs, cst, ct) = (cone(s), cone(&st), cone(t));
    let (id_a, id_b, id_c) = (
        BlockMatrix::identity(field, a.dims()),
        BlockMatrix::identity(field, b.dims()),
        BlockMatrix::identity(field, c.dims()),
    );
    let fm = assemble(field, &cs, &cst, &[a, b], &[a, c], &[vec![Some(&id_a), None], vec![None, Some(t.matrix())]])?;
    let fm = Morphism::new(fm, &cs, &cst)?;
    let gm = assemble(field, &cst, &ct, &[a, c], &[b, c], &[vec![Some(s.matrix()), None], vec![None, Some(&id_c)]])?;
    let gm = Morphism::new(gm, &cst, &ct)?;
    let cf = cone(&fm);
    // parts of every band of the cone of F are (A, B, A, C)
    let lambda = assemble(field, &ct, &cf, &[b, c], &[a, b, a, c], &[
        vec![None, Some(&id_b), None, None],
        vec![None, None, None, Some(&id_c)],
    ])?;
    let lambda = Morphism::new(lambda, &ct, &cf)?;

    let (ms, mst, mt, mf) = (canonical_maps(s), canonical_maps(&st), canonical_maps(t), canonical_maps(&fm));
    require(ms.iota.compose(&fm)? == t.compose(&mst.iota)?, "ι_B·F = T·ι_C")?;
    require(gm.compose(&mt.pi)? == mst.pi.compose(&shift_morphism(s))?, "G·π_B = π_A·[S]")?;
    require(ms.pi == fm.compose(&mst.pi)?, "π_A = F·π_A")?;
    require(mst.iota.compose(&gm)? == mt.iota, "ι_C·G = ι_C")?;
    let w = mt.pi.compose(&shift_morphism(&ms.iota))?;
    require(lambda.compose(&mf.pi)? == w, "Λ·π = π_B·[ι_B]")?;
    let k = assemble(field, &cst, &cf, &[a, c], &[a, b, a, c], &[
        vec![Some(&id_a), None, None, None],
        vec![None, None, None, None],
    ])?;
    let lambda_witness = KappaMatrix::new(k, &cst, &cf)?;
    require(lambda_witness.witnesses(&mf.iota, &gm.compose(&lambda)?), "ι - G·Λ ≡ 0")?;
    let lambda_inverse = is_kappa_iso(&lambda).ok_or(AxiomError::NotIso(3))?;

    let triangle = Triangle::new(fm.clone(), gm.clone(), w)?;
    let std_f = standard_triangle(&fm);
    let iso = certify_triangle_iso(&triangle, &std_f, &cs.identity(), &cst.identity(), &lambda)?;
    Ok(Octahedron { f: fm, g: gm, lambda, lambda_witness, lambda_inverse, triangle, iso })
}
