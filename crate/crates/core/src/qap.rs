//! Koopmans–Beckman QAP: objective, exhaustive oracle, and the closed-form
//! solver for Robinsonian instances with Toeplitz structure.
//!
//! The objective of an assignment `σ` is `<A_σ, B> = Σ_ij A[σ(i)][σ(j)] B_ij`.
//! Writing the cost as `Σ_ij A_ij B[σ(i)][σ(j)]` describes the same problem
//! with `σ` replaced by `σ⁻¹`, so optimal values agree between the two forms.

use std::fmt;

use crate::error::{Error, Result, Side};
use crate::fixtures;
use crate::matrix::{check_dims, inner_product, SymMatrix};
use crate::permutation::{apply_permutation, compose, invert, Permutation};
use crate::seriation::seriate;
use crate::structure::{
    build_b_delta, is_robinson_similarity, robinson_dissimilarity_violation,
    robinson_similarity_violation, toeplitz_profile,
};

/// Default size limit for [`brute_force`].
pub const DEFAULT_BRUTE_CAP: usize = 10;
/// Largest `n` accepted by [`verify_theorem1`].
pub const BAND_CHECK_CAP: usize = 9;

/// A flow matrix `A` and a distance matrix `B` of equal size.
#[derive(Debug, Clone, PartialEq)]
pub struct QapInstance {
    pub a: SymMatrix,
    pub b: SymMatrix,
}

impl QapInstance {
    pub fn new(a: SymMatrix, b: SymMatrix) -> Result<Self> {
        check_dims(a.n(), b.n())?;
        Ok(QapInstance { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    BruteForce,
    SpectralHeuristic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::BruteForce => "brute-force",
            Method::SpectralHeuristic => "spectral-heuristic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Orderings that justify a closed-form answer: `A_π` is a Robinson
/// similarity, `B_τ` a Robinson dissimilarity, and the `toeplitz` side is
/// Toeplitz after reordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub pi: Permutation,
    pub tau: Permutation,
    pub toeplitz: Side,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QapSolution {
    pub permutation: Permutation,
    /// Always `qap_value(A, B, permutation)`.
    pub value: f64,
    pub method: Method,
    pub certificate: Option<Certificate>,
}

/// Integer copies of both matrices when the whole objective fits in `i64`.
fn exact_integers(a: &SymMatrix, b: &SymMatrix) -> Option<(Vec<i64>, Vec<i64>)> {
    let (x, y) = (a.to_integers()?, b.to_integers()?);
    let max_x = x.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0) as u128;
    let max_y = y.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0) as u128;
    let n = a.n() as u128;
    (2 * max_x * max_y * n * n < (1u128 << 62)).then_some((x, y))
}

/// `<A_σ, B> = Σ_ij A[σ(i)][σ(j)] B_ij`, exact for integral inputs.
pub fn qap_value(a: &SymMatrix, b: &SymMatrix, sigma: &Permutation) -> Result<f64> {
    check_dims(a.n(), b.n())?;
    inner_product(&apply_permutation(a, sigma)?, b)
}

/// Depth-first search over `σ` in lexicographic order minimising
/// `Σ_ij a_ij b[σ(i)][σ(j)]`; each level adds the terms between the new
/// position and the ones already placed.
struct Search<'a, T> {
    n: usize,
    a: &'a [T],
    b: &'a [T],
    assigned: Vec<usize>,
    used: Vec<bool>,
    best: Option<(T, Vec<usize>)>,
}

impl<T> Search<'_, T>
where
    T: Copy + PartialOrd + Default + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    fn run(&mut self, partial: T) {
        let n = self.n;
        let pos = self.assigned.len();
        if pos == n {
            if self.best.as_ref().is_none_or(|(v, _)| partial < *v) {
                self.best = Some((partial, self.assigned.clone()));
            }
            return;
        }
        for loc in 0..n {
            if self.used[loc] {
                continue;
            }
            let mut cross = T::default();
            for (q, &other) in self.assigned.iter().enumerate() {
                cross = cross + self.a[pos * n + q] * self.b[loc * n + other];
            }
            let inc = self.a[pos * n + pos] * self.b[loc * n + loc] + cross + cross;
            self.used[loc] = true;
            self.assigned.push(loc);
            self.run(partial + inc);
            self.assigned.pop();
            self.used[loc] = false;
        }
    }
}

fn search_min<T>(n: usize, a: &[T], b: &[T]) -> Vec<usize>
where
    T: Copy + PartialOrd + Default + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    let mut s = Search {
        n,
        a,
        b,
        assigned: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
    };
    s.run(T::default());
    s.best.expect("at least one permutation").1
}

/// Enumerates all `n!` assignments and returns the minimum together with the
/// lexicographically smallest permutation attaining it.
pub fn brute_force(a: &SymMatrix, b: &SymMatrix, cap: usize) -> Result<QapSolution> {
    check_dims(a.n(), b.n())?;
    let n = a.n();
    if n > cap {
        return Err(Error::InstanceTooLarge { n, cap });
    }
    let image = match exact_integers(a, b) {
        Some((x, y)) => search_min(n, &y, &x),
        None => search_min(n, b.as_slice(), a.as_slice()),
    };
    let permutation = Permutation::new(image)?;
    Ok(QapSolution {
        value: qap_value(a, b, &permutation)?,
        permutation,
        method: Method::BruteForce,
        certificate: None,
    })
}

/// Copies of `A` and `B` in which a diagonal that cannot affect the ranking of
/// permutations is replaced by a neutral value. When `B` has a constant
/// diagonal, `Σ_i A_ii B[σ(i)][σ(i)]` does not depend on `σ`, so `A`'s diagonal
/// may be raised to `max(A)` (and symmetrically `B`'s lowered to `min(B)`).
fn detection_views(a: &SymMatrix, b: &SymMatrix) -> (SymMatrix, SymMatrix) {
    let constant = |m: &SymMatrix| {
        let d = m.diagonal();
        d.iter().all(|&x| x == d[0])
    };
    let a_view = if constant(b) {
        a.with_diagonal(a.max_entry())
    } else {
        a.clone()
    };
    let b_view = if constant(a) {
        b.with_diagonal(b.min_entry())
    } else {
        b.clone()
    };
    (a_view, b_view)
}

fn similarity_order(a: &SymMatrix, known: Option<&Permutation>, side: Side) -> Result<Permutation> {
    let not_found = |cause: String| Error::NotRobinsonianDetected { side, cause };
    let pi = match known {
        Some(p) => p.clone(),
        None if is_robinson_similarity(a, false) => Permutation::identity(a.n()),
        None => {
            seriate(a)
                .map_err(|e| not_found(e.to_string()))?
                .permutation
        }
    };
    match robinson_similarity_violation(&apply_permutation(a, &pi)?, false) {
        None => Ok(pi),
        Some(v) => Err(not_found(format!("reordered matrix fails at {v}"))),
    }
}

fn dissimilarity_order(b: &SymMatrix, known: Option<&Permutation>) -> Result<Permutation> {
    let side = Side::Distance;
    let not_found = |cause: String| Error::NotRobinsonianDetected { side, cause };
    let tau = match known {
        Some(t) => t.clone(),
        None if robinson_dissimilarity_violation(b, false).is_none() => {
            Permutation::identity(b.n())
        }
        None => {
            let similarity = b.neg().shift(b.max_entry());
            seriate(&similarity)
                .map_err(|e| not_found(e.to_string()))?
                .permutation
        }
    };
    match robinson_dissimilarity_violation(&apply_permutation(b, &tau)?, false) {
        None => Ok(tau),
        Some(v) => Err(not_found(format!("reordered matrix fails at {v}"))),
    }
}

/// Closed-form optimum for Robinsonian `A`, `B` with one of `A_π`, `B_τ` Toeplitz.
///
/// `π` reorders `A` into a Robinson similarity and `τ` reorders `B` into a
/// Robinson dissimilarity; each is taken from the caller, else the identity
/// when the matrix is already Robinson, else spectral seriation. The identity
/// is optimal for `(A_π, B_τ)`, and `σ* = compose(π, invert(τ))` satisfies
/// `<A_σ*, B> = <(A_π)_{τ⁻¹}, B> = <A_π, B_τ>`, so `σ*` is optimal for `(A, B)`.
///
/// Toeplitz structure is checked only for the orderings found, so
/// `NotToeplitzAfterReordering` means the sufficient condition was not
/// verified, not that no closed form exists.
pub fn solve_robinsonian(
    a: &SymMatrix,
    b: &SymMatrix,
    known_pi: Option<&Permutation>,
    known_tau: Option<&Permutation>,
) -> Result<QapSolution> {
    check_dims(a.n(), b.n())?;
    for p in known_pi.into_iter().chain(known_tau) {
        check_dims(a.n(), p.n())?;
    }
    let (a_view, b_view) = detection_views(a, b);
    let pi = similarity_order(&a_view, known_pi, Side::Flow)?;
    let tau = dissimilarity_order(&b_view, known_tau)?;

    let toeplitz = if toeplitz_profile(&apply_permutation(&b_view, &tau)?).is_ok() {
        Side::Distance
    } else if toeplitz_profile(&apply_permutation(&a_view, &pi)?).is_ok() {
        Side::Flow
    } else {
        return Err(Error::NotToeplitzAfterReordering);
    };

    let sigma = compose(&pi, &invert(&tau))?;
    Ok(QapSolution {
        value: qap_value(a, b, &sigma)?,
        permutation: sigma,
        method: Method::ClosedForm,
        certificate: Some(Certificate { pi, tau, toeplitz }),
    })
}

/// Distance matrices of the classical layout problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceKind {
    /// `(i - j)²`
    TwoSum,
    /// `|i - j|^p`, `p >= 1`
    PSum(f64),
    /// `|i - j|`
    LinearArrangement,
    /// `B^Δ_n`, `1 <= Δ <= n - 1`
    Bandwidth(usize),
}

pub fn build_distance(kind: DistanceKind, n: usize) -> Result<SymMatrix> {
    if n == 0 {
        return Err(Error::Range("n must be at least 1".into()));
    }
    let from_gap = |f: &dyn Fn(f64) -> f64| SymMatrix::from_upper_fn(n, |i, j| f((j - i) as f64));
    match kind {
        DistanceKind::TwoSum => Ok(from_gap(&|d| d * d)),
        DistanceKind::LinearArrangement => Ok(from_gap(&|d| d)),
        DistanceKind::PSum(p) if p.is_finite() && p >= 1.0 => Ok(from_gap(&|d| d.powf(p))),
        DistanceKind::PSum(p) => Err(Error::Range(format!(
            "p must be a finite value >= 1 (got {p})"
        ))),
        DistanceKind::Bandwidth(delta) if (1..n).contains(&delta) => build_b_delta(n, delta),
        DistanceKind::Bandwidth(delta) => Err(Error::Range(format!(
            "bandwidth delta must lie in [1, n-1] (got delta = {delta}, n = {n})"
        ))),
    }
}

/// Spectral 2-SUM heuristic: seriate `A`, then evaluate the ordering and its
/// reversal as assignments.
pub fn spectral_heuristic_2sum(a: &SymMatrix) -> Result<QapSolution> {
    let n = a.n();
    let b = build_distance(DistanceKind::TwoSum, n)?;
    let pi = seriate(a)?.permutation;
    let mut best: Option<(f64, Permutation)> = None;
    for order in [pi.clone(), compose(&pi, &Permutation::reversal(n))?] {
        let value = qap_value(a, &b, &order)?;
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, order));
        }
    }
    let (value, permutation) = best.expect("two candidates");
    Ok(QapSolution {
        permutation,
        value,
        method: Method::SpectralHeuristic,
        certificate: None,
    })
}

/// The 5 × 5 Robinson pair, neither Toeplitz, for which the identity is not optimal.
pub fn counterexample_instance() -> QapInstance {
    QapInstance {
        a: fixtures::counterexample_a(),
        b: fixtures::counterexample_b(),
    }
}

/// Checks `<A_π, B^Δ_n> >= <A, B^Δ_n>` for every permutation `π` and returns
/// the first violator in lexicographic order, if any. Both sides are summed
/// over the support `{(i, j) : i < j, j - i >= n - Δ}`, which halves them.
pub fn verify_theorem1(a: &SymMatrix, delta: usize) -> Result<Option<Permutation>> {
    let n = a.n();
    if let Some(v) = robinson_similarity_violation(a, false) {
        return Err(Error::PredicateFailed(format!(
            "A is not a Robinson similarity: {v}"
        )));
    }
    if delta == 0 || delta >= n {
        return Err(Error::Range(format!(
            "delta must lie in [1, n-1] (got delta = {delta}, n = {n})"
        )));
    }
    if n > BAND_CHECK_CAP {
        return Err(Error::InstanceTooLarge {
            n,
            cap: BAND_CHECK_CAP,
        });
    }
    let support: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + n - delta..n).map(move |j| (i, j)))
        .collect();

    let mut pi = Permutation::identity(n);
    if let Some(x) = a.to_integers() {
        let sum = |p: &Permutation| -> i128 {
            support
                .iter()
                .map(|&(i, j)| x[p.at(i) * n + p.at(j)] as i128)
                .sum()
        };
        let base = sum(&pi);
        loop {
            if sum(&pi) < base {
                return Ok(Some(pi));
            }
            if !pi.advance() {
                return Ok(None);
            }
        }
    }
    let sum =
        |p: &Permutation| -> f64 { support.iter().map(|&(i, j)| a.get(p.at(i), p.at(j))).sum() };
    let base = sum(&pi);
    let tol = 1e-9 * a.max_abs().max(1.0) * support.len() as f64;
    loop {
        if sum(&pi) < base - tol {
            return Ok(Some(pi));
        }
        if !pi.advance() {
            return Ok(None);
        }
    }
}

/// `Σ_ij A_ij (π(i) - π(j))²` with one-based positions.
///
/// This equals `2 · x_πᵀ L_A x_π` for `x_π = (π(1), …, π(n))`: every unordered
/// pair is counted twice by the double sum.
pub fn squared_spread(a: &SymMatrix, pi: &Permutation) -> Result<f64> {
    check_dims(a.n(), pi.n())?;
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = pi.at(i) as f64 - pi.at(j) as f64;
            s += a.get(i, j) * d * d;
        }
    }
    Ok(s)
}
