#![allow(dead_code)]

use std::sync::Arc;

use posetcat::field::Field;
use posetcat::poset::IndexSet;
use posetcat::randgen::{random_dims, random_index_set, random_morphism, random_object};
use posetcat::rep::{Morphism, Representation};
use posetcat::rng::SplitMix64;

pub fn object<F: Field>(field: &F, idx: &Arc<IndexSet>, max_dim: usize, rng: &mut SplitMix64) -> Representation<F> {
    let d = random_dims(idx, max_dim, rng);
    random_object(field, &d, rng)
}

/// A random morphism between random objects on a random index set.
pub fn morphism<F: Field>(field: &F, max_indices: usize, max_dim: usize, rng: &mut SplitMix64) -> Morphism<F> {
    let idx = random_index_set(max_indices, rng);
    let b = object(field, &idx, max_dim, rng);
    let c = object(field, &idx, max_dim, rng);
    random_morphism(&b, &c, rng)
}

/// Like [`morphism`] but redrawn until the result is nonzero.
pub fn nonzero_morphism<F: Field>(field: &F, max_indices: usize, max_dim: usize, rng: &mut SplitMix64) -> Morphism<F> {
    loop {
        let t = morphism(field, max_indices, max_dim, rng);
        if !t.is_zero() {
            return t;
        }
    }
}

/// A composable pair `S: A -> B`, `T: B -> C`.
pub fn composable<F: Field>(field: &F, max_indices: usize, max_dim: usize, rng: &mut SplitMix64) -> (Morphism<F>, Morphism<F>) {
    let idx = random_index_set(max_indices, rng);
    let a = object(field, &idx, max_dim, rng);
    let b = object(field, &idx, max_dim, rng);
    let c = object(field, &idx, max_dim, rng);
    (random_morphism(&a, &b, rng), random_morphism(&b, &c, rng))
}
