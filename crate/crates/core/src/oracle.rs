//! Exhaustive search over small prime fields, used to cross-check the
//! elimination-based solvers. Shares no arithmetic with them: candidates are
//! flat `u32` arrays multiplied with schoolbook loops, and the shape rules
//! are re-read from the definitions.
//!
//! Every search is capped; `None` means the instance is too large.

use std::collections::HashSet;

use crate::block::DimVector;
use crate::field::PrimeField;
use crate::rep::{Morphism, Representation};

/// Upper bound on the number of candidates any single search visits.
pub const SEARCH_LIMIT: u64 = 1 << 20;

struct Shape {
    rows: usize,
    cols: usize,
    /// Flat positions `(r, c)` with `band(r) <= band(c)`.
    free: Vec<usize>,
    /// Pairs of flat positions that must hold equal values.
    tied: Vec<(usize, usize)>,
}

fn bands(d: &DimVector) -> Vec<usize> {
    (0..d.dims().len()).flat_map(|i| std::iter::repeat_n(i, d.dim(i))).collect()
}

fn shape(rows: &DimVector, cols: &DimVector) -> Shape {
    let (rb, cb) = (bands(rows), bands(cols));
    let (nr, nc) = (rb.len(), cb.len());
    let free = (0..nr * nc).filter(|&x| rb[x / nc] <= cb[x % nc]).collect();
    let idx = rows.index_set();
    let (ro, co) = (rows.offsets(), cols.offsets());
    let mut tied = Vec::new();
    for i in 0..idx.len() {
        let s = idx.sigma(i);
        if s <= i {
            continue;
        }
        for a in 0..rows.dim(i) {
            for b in 0..cols.dim(i) {
                tied.push(((ro[i] + a) * nc + co[i] + b, (ro[s] + a) * nc + co[s] + b));
            }
        }
    }
    Shape { rows: nr, cols: nc, free, tied }
}

fn flat(p: u32, m: &crate::block::BlockMatrix<PrimeField>) -> Vec<u32> {
    let d = m.to_dense();
    d.entries().iter().map(|&x| x % p).collect()
}

fn mul(p: u32, a: &[u32], b: &[u32], n: usize, k: usize, m: usize) -> Vec<u32> {
    let mut out = vec![0u32; n * m];
    for i in 0..n {
        for j in 0..m {
            let mut s = 0u64;
            for t in 0..k {
                s += a[i * k + t] as u64 * b[t * m + j] as u64;
            }
            out[i * m + j] = (s % p as u64) as u32;
        }
    }
    out
}

fn add(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
}

fn sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
}

/// Call `visit` on every matrix of the given shape; `None` if there are
/// more than [`SEARCH_LIMIT`] of them.
fn for_each(p: u32, sh: &Shape, mut visit: impl FnMut(&[u32])) -> Option<()> {
    let count = (p as u64).checked_pow(sh.free.len() as u32)?;
    if count > SEARCH_LIMIT {
        return None;
    }
    let mut m = vec![0u32; sh.rows * sh.cols];
    let mut digits = vec![0u32; sh.free.len()];
    loop {
        if sh.tied.iter().all(|&(x, y)| m[x] == m[y]) {
            visit(&m);
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Some(());
            }
            digits[pos] += 1;
            if digits[pos] == p {
                digits[pos] = 0;
                m[sh.free[pos]] = 0;
                pos += 1;
            } else {
                m[sh.free[pos]] = digits[pos];
                break;
            }
        }
    }
}

/// Every morphism `B -> C`, as flat row-major matrices.
pub fn all_morphisms(b: &Representation<PrimeField>, c: &Representation<PrimeField>) -> Option<Vec<Vec<u32>>> {
    let p = b.field().modulus();
    let sh = shape(b.dims(), c.dims());
    let (bm, cm) = (flat(p, b.matrix()), flat(p, c.matrix()));
    let (nb, nc) = (sh.rows, sh.cols);
    let mut out = Vec::new();
    for_each(p, &sh, |x| {
        if mul(p, x, &cm, nb, nc, nc) == mul(p, &bm, x, nb, nb, nc) {
            out.push(x.to_vec());
        }
    })?;
    Some(out)
}

fn log_p(p: u32, mut n: u64) -> usize {
    let mut d = 0;
    while n > 1 {
        assert_eq!(n % p as u64, 0, "subspace sizes are powers of p");
        n /= p as u64;
        d += 1;
    }
    d
}

/// `dim Hom(B, C)` by counting.
pub fn hom_dim(b: &Representation<PrimeField>, c: &Representation<PrimeField>) -> Option<usize> {
    let p = b.field().modulus();
    Some(log_p(p, all_morphisms(b, c)?.len() as u64))
}

/// Whether some morphism-shaped `K` has `S - T = B·K + K·C`.
pub fn kappa_equiv(s: &Morphism<PrimeField>, t: &Morphism<PrimeField>) -> Option<bool> {
    let p = s.field().modulus();
    let (b, c) = (s.source(), s.target());
    let sh = shape(b.dims(), c.dims());
    let (bm, cm) = (flat(p, b.matrix()), flat(p, c.matrix()));
    let diff = sub(p, &flat(p, s.matrix()), &flat(p, t.matrix()));
    let (nb, nc) = (sh.rows, sh.cols);
    let mut found = false;
    for_each(p, &sh, |k| {
        if !found && add(p, &mul(p, &bm, k, nb, nb, nc), &mul(p, k, &cm, nb, nc, nc)) == diff {
            found = true;
        }
    })?;
    Some(found)
}

/// `dim Hom(B, C)/≡` by counting the null-homotopic morphisms.
pub fn quotient_hom_dim(b: &Representation<PrimeField>, c: &Representation<PrimeField>) -> Option<usize> {
    let p = b.field().modulus();
    let homs: HashSet<Vec<u32>> = all_morphisms(b, c)?.into_iter().collect();
    let sh = shape(b.dims(), c.dims());
    let (bm, cm) = (flat(p, b.matrix()), flat(p, c.matrix()));
    let (nb, nc) = (sh.rows, sh.cols);
    let mut null = HashSet::new();
    for_each(p, &sh, |k| {
        let img = add(p, &mul(p, &bm, k, nb, nb, nc), &mul(p, k, &cm, nb, nc, nc));
        if homs.contains(&img) {
            null.insert(img);
        }
    })?;
    Some(log_p(p, homs.len() as u64) - log_p(p, null.len() as u64))
}
