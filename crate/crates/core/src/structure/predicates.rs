//! Structural predicates. Each `*_violation` function returns the
//! lexicographically first witness (zero-based indices), or `None` when the
//! property holds; the `is_*` wrappers return a plain `bool`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

/// Absolute tolerance for every predicate comparison.
pub const PREDICATE_TOLERANCE: f64 = 1e-9;

/// Which Robinson variant a violation was found for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RobinsonKind {
    Similarity,
    Dissimilarity,
}

/// A triple `i <= j <= k` at which the Robinson condition fails.
///
/// For a similarity, `lhs = A[i][k]` and `rhs = min(A[i][j], A[j][k])` with
/// `lhs > rhs`. For a dissimilarity the same triple is reported in the
/// matrix's own sign: `lhs = B[i][k]`, `rhs = max(B[i][j], B[j][k])`, `lhs < rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinsonViolation {
    pub kind: RobinsonKind,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
}

impl fmt::Display for RobinsonViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, agg) = match self.kind {
            RobinsonKind::Similarity => (">", "min"),
            RobinsonKind::Dissimilarity => ("<", "max"),
        };
        write!(
            f,
            "triple ({}, {}, {}): entry ({},{}) = {} {op} {agg} of neighbours = {}",
            self.i + 1,
            self.j + 1,
            self.k + 1,
            self.i + 1,
            self.k + 1,
            self.lhs,
            self.rhs
        )
    }
}

/// Checks `A[i][k] <= min(A[i][j], A[j][k])` for all `i <= j <= k`.
///
/// With `ignore_diagonal`, only strict triples `i < j < k` are examined, so
/// diagonal entries do not take part (they only constrain the literal
/// condition through `A[i][k] <= A[i][i]` and `A[i][k] <= A[k][k]`).
pub fn robinson_similarity_violation(
    a: &SymMatrix,
    ignore_diagonal: bool,
) -> Option<RobinsonViolation> {
    let n = a.n();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                if ignore_diagonal && (i == j || j == k) {
                    continue;
                }
                let lhs = a.get(i, k);
                let rhs = a.get(i, j).min(a.get(j, k));
                if lhs > rhs + PREDICATE_TOLERANCE {
                    return Some(RobinsonViolation {
                        kind: RobinsonKind::Similarity,
                        i,
                        j,
                        k,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    None
}

pub fn is_robinson_similarity(a: &SymMatrix, ignore_diagonal: bool) -> bool {
    robinson_similarity_violation(a, ignore_diagonal).is_none()
}

/// The dissimilarity condition: `-B` is a Robinson similarity.
pub fn robinson_dissimilarity_violation(
    b: &SymMatrix,
    ignore_diagonal: bool,
) -> Option<RobinsonViolation> {
    robinson_similarity_violation(&b.neg(), ignore_diagonal).map(|v| RobinsonViolation {
        kind: RobinsonKind::Dissimilarity,
        lhs: -v.lhs,
        rhs: -v.rhs,
        ..v
    })
}

pub fn is_robinson_dissimilarity(b: &SymMatrix, ignore_diagonal: bool) -> bool {
    robinson_dissimilarity_violation(b, ignore_diagonal).is_none()
}

/// Values `β_0, …, β_{n-1}` on the diagonals `|i - j| = k` of a Toeplitz matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzProfile {
    pub beta: Vec<f64>,
}

impl ToeplitzProfile {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::Range(
                "Toeplitz profile needs at least one value".into(),
            ));
        }
        Ok(ToeplitzProfile { beta })
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    pub fn to_matrix(&self) -> SymMatrix {
        SymMatrix::from_upper_fn(self.n(), |i, j| self.beta[j - i])
    }
}

/// Two positions `(i, j)` and `(i+1, j+1)` on one diagonal holding different values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToeplitzMismatch {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub first_value: f64,
    pub second_value: f64,
}

impl fmt::Display for ToeplitzMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{}) = {} differs from ({},{}) = {}",
            self.first.0 + 1,
            self.first.1 + 1,
            self.first_value,
            self.second.0 + 1,
            self.second.1 + 1,
            self.second_value
        )
    }
}

/// Extracts the Toeplitz profile, scanning diagonals `k = 0, 1, …` and
/// comparing consecutive positions along each.
pub fn toeplitz_profile(a: &SymMatrix) -> std::result::Result<ToeplitzProfile, ToeplitzMismatch> {
    let n = a.n();
    for k in 0..n {
        for i in 0..n - k - 1 {
            let (x, y) = (a.get(i, i + k), a.get(i + 1, i + k + 1));
            if (x - y).abs() > PREDICATE_TOLERANCE {
                return Err(ToeplitzMismatch {
                    first: (i, i + k),
                    second: (i + 1, i + k + 1),
                    first_value: x,
                    second_value: y,
                });
            }
        }
    }
    Ok(ToeplitzProfile {
        beta: a.row(0).to_vec(),
    })
}

pub fn is_toeplitz(a: &SymMatrix) -> bool {
    toeplitz_profile(a).is_ok()
}

/// Indices `i < j < k < l` of a failed four-point condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadruple(pub [usize; 4]);

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k, l] = self.0;
        write!(f, "({}, {}, {}, {})", i + 1, j + 1, k + 1, l + 1)
    }
}

fn quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |i| {
        (i + 1..n)
            .flat_map(move |j| (j + 1..n).flat_map(move |k| (k + 1..n).map(move |l| [i, j, k, l])))
    })
}

/// Kalmanson condition: `max(A_ij + A_kl, A_il + A_jk) <= A_ik + A_jl` for all `i < j < k < l`.
pub fn kalmanson_violation(a: &SymMatrix) -> Option<Quadruple> {
    quadruples(a.n())
        .find(|&[i, j, k, l]| {
            let lhs = (a.get(i, j) + a.get(k, l)).max(a.get(i, l) + a.get(j, k));
            lhs > a.get(i, k) + a.get(j, l) + PREDICATE_TOLERANCE
        })
        .map(Quadruple)
}

pub fn is_kalmanson(a: &SymMatrix) -> bool {
    kalmanson_violation(a).is_none()
}

/// A triple `(i, j, k)` with `B[i][k] > B[i][j] + B[j][k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple(pub [usize; 3]);

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k] = self.0;
        write!(f, "({}, {}, {})", i + 1, j + 1, k + 1)
    }
}

/// Triangle inequality over all triples. The diagonal must be zero.
pub fn metric_violation(b: &SymMatrix) -> Result<Option<Triple>> {
    let n = b.n();
    if let Some(index) = (0..n).find(|&i| b.get(i, i).abs() > PREDICATE_TOLERANCE) {
        return Err(Error::NonzeroDiagonal { index });
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if b.get(i, k) > b.get(i, j) + b.get(j, k) + PREDICATE_TOLERANCE {
                    return Ok(Some(Triple([i, j, k])));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_metric(b: &SymMatrix) -> Result<bool> {
    metric_violation(b).map(|v| v.is_none())
}

/// A failed strong-monotonicity implication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotoneViolation {
    pub quadruple: Quadruple,
    /// `1` for `B_jk = B_jl ⇒ B_ik = B_il`, `2` for `B_jk = B_ik ⇒ B_jl = B_il`.
    pub implication: u8,
}

impl fmt::Display for MonotoneViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (implication {})", self.quadruple, self.implication)
    }
}

/// Both implications of strong monotonicity over all `i < j < k < l`.
pub fn strongly_monotone_violation(b: &SymMatrix) -> Option<MonotoneViolation> {
    let eq = |x: f64, y: f64| (x - y).abs() <= PREDICATE_TOLERANCE;
    quadruples(b.n()).find_map(|q @ [i, j, k, l]| {
        let implication = if eq(b.get(j, k), b.get(j, l)) && !eq(b.get(i, k), b.get(i, l)) {
            1
        } else if eq(b.get(j, k), b.get(i, k)) && !eq(b.get(j, l), b.get(i, l)) {
            2
        } else {
            return None;
        };
        Some(MonotoneViolation {
            quadruple: Quadruple(q),
            implication,
        })
    })
}

pub fn is_strongly_monotone(b: &SymMatrix) -> bool {
    strongly_monotone_violation(b).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{counterexample_a, counterexample_b};

    fn m<const N: usize>(rows: [[f64; N]; N]) -> SymMatrix {
        SymMatrix::from_rows(&rows).unwrap()
    }

    fn abs_diff(n: usize, pow: i32) -> SymMatrix {
        SymMatrix::from_upper_fn(n, |i, j| ((j - i) as f64).powi(pow))
    }

    #[test]
    fn robinson_similarity_examples() {
        assert!(is_robinson_similarity(&counterexample_a(), false));
        for n in 1..6 {
            assert!(is_robinson_similarity(&SymMatrix::ones(n), false));
            assert!(is_robinson_dissimilarity(&SymMatrix::ones(n), false));
        }
        let bad = m([[1., 0., 2.], [0., 1., 0.], [2., 0., 1.]]);
        let v = robinson_similarity_violation(&bad, true).unwrap();
        assert_eq!((v.i, v.j, v.k, v.lhs, v.rhs), (0, 1, 2, 2.0, 0.0));
        // the literal condition already fails at (1,1,3): A_13 = 2 > A_11 = 1
        let v = robinson_similarity_violation(&bad, false).unwrap();
        assert_eq!((v.i, v.j, v.k, v.lhs, v.rhs), (0, 0, 2, 2.0, 1.0));
    }

    #[test]
    fn diagonal_flag_matters_only_for_diagonal() {
        // zero-diagonal path adjacency: off-diagonal monotone, diagonal too small
        let path = m([[0., 1., 0.], [1., 0., 1.], [0., 1., 0.]]);
        assert!(!is_robinson_similarity(&path, false));
        assert!(is_robinson_similarity(&path, true));
    }

    #[test]
    fn robinson_dissimilarity_examples() {
        assert!(is_robinson_dissimilarity(&counterexample_b(), false));
        assert!(is_robinson_dissimilarity(&abs_diff(4, 2), false));
        let bad = m([[0., 2., 1.], [2., 0., 1.], [1., 1., 0.]]);
        let v = robinson_dissimilarity_violation(&bad, false).unwrap();
        assert_eq!((v.i, v.j, v.k), (0, 1, 2));
        assert_eq!((v.lhs, v.rhs), (1.0, 2.0));
        assert_eq!(v.kind, RobinsonKind::Dissimilarity);
    }

    #[test]
    fn toeplitz_examples() {
        assert_eq!(
            toeplitz_profile(&abs_diff(3, 2)).unwrap().beta,
            vec![0., 1., 4.]
        );
        assert_eq!(
            toeplitz_profile(&SymMatrix::ones(4)).unwrap().beta,
            vec![1.; 4]
        );
        let w = toeplitz_profile(&counterexample_b()).unwrap_err();
        assert_eq!((w.first, w.second), ((1, 2), (2, 3)));
        assert_eq!((w.first_value, w.second_value), (1.0, 0.0));
        assert!(!is_toeplitz(&counterexample_a()));
    }

    #[test]
    fn profile_round_trip() {
        let p = ToeplitzProfile::new(vec![0., 2., 3., 7.]).unwrap();
        assert_eq!(toeplitz_profile(&p.to_matrix()).unwrap(), p);
        assert!(ToeplitzProfile::new(vec![]).is_err());
    }

    #[test]
    fn kalmanson_examples() {
        let x: [f64; 4] = [0., 1., 3., 6.];
        let line = SymMatrix::from_upper_fn(4, |i, j| (x[i] - x[j]).abs());
        assert!(is_kalmanson(&line));
        let bad = SymMatrix::from_upper_fn(4, |i, j| match (i, j) {
            (0, 1) | (2, 3) => 5.,
            _ if i == j => 0.,
            _ => 1.,
        });
        assert_eq!(kalmanson_violation(&bad), Some(Quadruple([0, 1, 2, 3])));
        let any3 = m([[0., 9., -4.], [9., 1., 2.], [-4., 2., 7.]]);
        assert!(is_kalmanson(&any3));
    }

    #[test]
    fn metric_examples() {
        assert!(is_metric(&abs_diff(4, 1)).unwrap());
        let bad = m([[0., 1., 5.], [1., 0., 1.], [5., 1., 0.]]);
        assert_eq!(metric_violation(&bad).unwrap(), Some(Triple([0, 1, 2])));
        assert!(is_metric(&SymMatrix::zeros(1)).unwrap());
        assert!(matches!(
            metric_violation(&SymMatrix::ones(2)),
            Err(Error::NonzeroDiagonal { index: 0 })
        ));
    }

    #[test]
    fn strongly_monotone_examples() {
        assert!(is_strongly_monotone(&abs_diff(6, 1)));
        assert!(is_strongly_monotone(&SymMatrix::ones(5).with_diagonal(0.)));
        let bad = m([
            [0., 1., 1., 2.],
            [1., 0., 1., 1.],
            [1., 1., 0., 1.],
            [2., 1., 1., 0.],
        ]);
        let v = strongly_monotone_violation(&bad).unwrap();
        assert_eq!(v.quadruple, Quadruple([0, 1, 2, 3]));
        assert_eq!(v.implication, 1);
    }

    #[test]
    fn second_implication_detected() {
        // B_23 = B_13 but B_24 != B_14
        let b = m([
            [0., 1., 2., 3.],
            [1., 0., 2., 4.],
            [2., 2., 0., 1.],
            [3., 4., 1., 0.],
        ]);
        let v = strongly_monotone_violation(&b).unwrap();
        assert_eq!(v.implication, 2);
    }
}
