//! Exact linear expansions: Toeplitz matrices over the 0/1 band matrices
//! `B^Δ_n`, and arbitrary symmetric matrices over the interval cut matrices.

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::structure::predicates::{ToeplitzProfile, PREDICATE_TOLERANCE};

/// The 0/1 matrix with ones exactly where `|i - j| >= n - Δ`, for `1 <= Δ <= n`.
/// `Δ = n` gives `J`.
pub fn build_b_delta(n: usize, delta: usize) -> Result<SymMatrix> {
    if n == 0 || delta == 0 || delta > n {
        return Err(Error::Range(format!(
            "delta must lie in [1, n] (got delta = {delta}, n = {n})"
        )));
    }
    Ok(SymMatrix::from_upper_fn(n, |i, j| {
        if j - i >= n - delta {
            1.0
        } else {
            0.0
        }
    }))
}

/// `β_0 · J + Σ_Δ c[Δ] · B^Δ_n` for `Δ = 1, …, n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BDeltaCombination {
    pub n: usize,
    pub j_coefficient: f64,
    /// `coefficients[Δ - 1]` is the weight on `B^Δ_n`.
    pub coefficients: Vec<f64>,
}

impl BDeltaCombination {
    /// Weight on `B^Δ_n`, `1 <= Δ <= n - 1`.
    pub fn coefficient(&self, delta: usize) -> f64 {
        self.coefficients[delta - 1]
    }

    /// True when every band weight is nonnegative.
    pub fn is_conic(&self) -> bool {
        self.coefficients.iter().all(|&c| c >= -PREDICATE_TOLERANCE)
    }

    /// Sums the weighted matrices back up.
    pub fn reconstruct(&self) -> SymMatrix {
        let mut acc = SymMatrix::ones(self.n).scale(self.j_coefficient);
        for (d, &c) in self.coefficients.iter().enumerate() {
            if c != 0.0 {
                let band = build_b_delta(self.n, d + 1).expect("delta in range");
                acc = acc.add(&band.scale(c)).expect("same dimension");
            }
        }
        acc
    }
}

/// Expands a Toeplitz profile. `B^{n-k}_n` is supported on `|i - j| >= k`, so
/// the weight on it is the jump `β_k - β_{k-1}`; partial sums telescope back
/// to `β_m` on diagonal `m`.
pub fn decompose_toeplitz(profile: &ToeplitzProfile) -> BDeltaCombination {
    let n = profile.n();
    let beta = &profile.beta;
    let mut coefficients = vec![0.0; n.saturating_sub(1)];
    for k in 1..n {
        coefficients[n - k - 1] = beta[k] - beta[k - 1];
    }
    BDeltaCombination {
        n,
        j_coefficient: beta[0],
        coefficients,
    }
}

/// The 0/1 matrix with ones on the block `[u, v] × [u, v]` (zero-based, `u <= v`).
pub fn cut_matrix(n: usize, u: usize, v: usize) -> Result<SymMatrix> {
    if n == 0 || u > v || v >= n {
        return Err(Error::Range(format!(
            "cut interval must satisfy 1 <= u <= v <= n (got u = {}, v = {}, n = {n})",
            u + 1,
            v + 1
        )));
    }
    Ok(SymMatrix::from_upper_fn(n, |i, j| {
        if u <= i && j <= v {
            1.0
        } else {
            0.0
        }
    }))
}

/// Coefficients `λ_uv` of the expansion `Σ λ_uv CUT(u, v)` over all intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct CutWeights {
    n: usize,
    /// Row-major over `(u, v)`; only `u <= v` is meaningful.
    lambda: Vec<f64>,
}

impl CutWeights {
    pub fn zeros(n: usize) -> Self {
        CutWeights {
            n,
            lambda: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight of `CUT(u, v)`, zero-based with `u <= v`.
    pub fn get(&self, u: usize, v: usize) -> f64 {
        debug_assert!(u <= v);
        self.lambda[u * self.n + v]
    }

    pub fn set(&mut self, u: usize, v: usize, value: f64) {
        assert!(u <= v && v < self.n, "interval out of range");
        self.lambda[u * self.n + v] = value;
    }

    /// `(u, v, λ_uv)` for every interval with a nonzero weight, in
    /// lexicographic order of `(u, v)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n)
            .flat_map(move |u| (u..self.n).map(move |v| (u, v, self.get(u, v))))
            .filter(|&(_, _, w)| w != 0.0)
    }

    /// Membership in the cut cone: all weights `>= -ε`.
    pub fn in_cone(&self) -> bool {
        self.nonzero().all(|(_, _, w)| w >= -PREDICATE_TOLERANCE)
    }

    pub fn reconstruct(&self) -> SymMatrix {
        let mut acc = SymMatrix::zeros(self.n);
        for (u, v, w) in self.nonzero() {
            let cut = cut_matrix(self.n, u, v).expect("interval in range");
            acc = acc.add(&cut.scale(w)).expect("same dimension");
        }
        acc
    }
}

/// Inverts the cut expansion with the second difference
/// `λ_uv = A[u][v] - A[u-1][v] - A[u][v+1] + A[u-1][v+1]` (out-of-range terms 0).
/// The expansion is unique because this formula is an explicit inverse.
pub fn decompose_cuts(a: &SymMatrix) -> CutWeights {
    let n = a.n();
    let at = |i: Option<usize>, j: usize| match i {
        Some(i) if j < n => a.get(i, j),
        _ => 0.0,
    };
    let mut w = CutWeights::zeros(n);
    for u in 0..n {
        let up = u.checked_sub(1);
        for v in u..n {
            let value = at(Some(u), v) - at(up, v) - at(Some(u), v + 1) + at(up, v + 1);
            w.set(u, v, value);
        }
    }
    w
}
