//! Deterministic random instances.
//!
//! Every generator draws from [`instance_rng`]: a ChaCha8 stream whose key is
//! `seed_from_u64(seed)` and whose stream id is `n`. Outputs depend only on
//! `(n, seed)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::SymMatrix;
use crate::structure::decompose::{cut_matrix, CutWeights};
use crate::structure::predicates::ToeplitzProfile;

pub fn instance_rng(n: usize, seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    rng
}

/// A nonnegative integer combination of `2n` random cut matrices (weights
/// 1..=4), returned with the accumulated weights.
pub fn gen_cut_combination(n: usize, seed: u64) -> (SymMatrix, CutWeights) {
    assert!(n >= 1, "n must be at least 1");
    let mut rng = instance_rng(n, seed);
    let mut weights = CutWeights::zeros(n);
    for _ in 0..2 * n {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(u..n);
        let w = rng.gen_range(1..=4) as f64;
        weights.set(u, v, weights.get(u, v) + w);
    }
    let mut a = SymMatrix::zeros(n);
    for (u, v, w) in weights.nonzero() {
        a = a
            .add(&cut_matrix(n, u, v).expect("valid interval").scale(w))
            .expect("same dimension");
    }
    (a, weights)
}

/// A Robinson similarity built as a conic combination of cut matrices.
pub fn gen_robinson_similarity(n: usize, seed: u64) -> SymMatrix {
    gen_cut_combination(n, seed).0
}

/// A Toeplitz Robinson dissimilarity from a random nondecreasing integer
/// profile with `β_0 = 0` and increments in 0..=3.
pub fn gen_toeplitz_dissimilarity(n: usize, seed: u64) -> SymMatrix {
    gen_toeplitz_profile(n, seed).to_matrix()
}

pub fn gen_toeplitz_profile(n: usize, seed: u64) -> ToeplitzProfile {
    assert!(n >= 1, "n must be at least 1");
    let mut rng = instance_rng(n, seed);
    let mut beta = vec![0.0; n];
    for k in 1..n {
        beta[k] = beta[k - 1] + rng.gen_range(0..=3) as f64;
    }
    ToeplitzProfile { beta }
}

/// A general integer Robinson similarity, not restricted to the cut cone.
///
/// The diagonal is drawn from 6..=12, then each superdiagonal entry is the
/// smaller of its left and lower neighbours minus a draw from 0..=2, so rows
/// decrease to the right of the diagonal and columns decrease upwards.
pub fn gen_robinson_similarity_general(n: usize, seed: u64) -> SymMatrix {
    assert!(n >= 1, "n must be at least 1");
    let mut rng = instance_rng(n, seed ^ 0x5EED_0F2B);
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = rng.gen_range(6..=12) as f64;
    }
    for d in 1..n {
        for i in 0..n - d {
            let j = i + d;
            let bound = v[i * n + j - 1].min(v[(i + 1) * n + j]);
            v[i * n + j] = bound - rng.gen_range(0..=2) as f64;
        }
    }
    SymMatrix::from_upper_fn(n, |i, j| v[i * n + j])
}
