//! Spectral seriation: Laplacian, Fiedler pair, and the ordering obtained by
//! sorting the Fiedler vector.
//!
//! For a Robinsonian similarity whose Fiedler value is simple and whose
//! Fiedler vector has distinct entries, sorting the vector yields an ordering
//! under which the matrix is Robinson. Degenerate inputs are reported as errors
//! rather than resolved by arbitrary tie-breaking.

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::permutation::Permutation;

/// Stop sweeping once the off-diagonal Frobenius mass is below this fraction of `‖L‖_F`.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative gap below which `λ₂` and `λ₃` count as one eigenvalue.
pub const SPECTRAL_GAP_TOLERANCE: f64 = 1e-8;
/// Entries of the Fiedler vector closer than this count as repeated.
pub const FIEDLER_ENTRY_TOLERANCE: f64 = 1e-8;

/// `diag(A e) - A`. Off-diagonal entries are `-A_ij`; the diagonal is the
/// sum of the off-diagonal row entries, so `A_ii` cancels.
pub fn laplacian(a: &SymMatrix) -> SymMatrix {
    let n = a.n();
    let degree: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| a.get(i, j)).sum())
        .collect();
    SymMatrix::from_upper_fn(n, |i, j| if i == j { degree[i] } else { -a.get(i, j) })
}

/// `xᵀ L_A x`.
pub fn laplacian_quadratic_form(a: &SymMatrix, x: &[f64]) -> f64 {
    let l = laplacian(a);
    (0..a.n())
        .map(|i| x[i] * (0..a.n()).map(|j| l.get(i, j) * x[j]).sum::<f64>())
        .sum()
}

/// Eigen-decomposition of a symmetric matrix: ascending eigenvalues and the
/// matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi with a fixed sweep order, so results are reproducible.
pub fn symmetric_eigen(m: &SymMatrix) -> Result<SymmetricEigen> {
    let n = m.n();
    let mut a = m.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let target = JACOBI_TOLERANCE * m.frobenius_norm();
    let off_mass = |a: &[f64]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_mass(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off_mass(&a) > target {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].total_cmp(&a[y * n + y]).then(x.cmp(&y)));
    Ok(SymmetricEigen {
        values: order.iter().map(|&k| a[k * n + k]).collect(),
        vectors: order
            .iter()
            .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
            .collect(),
    })
}

/// Connected components of the graph with an edge `{i, j}` wherever
/// `A_ij != 0` (`i != j`), each listed in ascending order.
pub fn support_components(a: &SymMatrix) -> Vec<Vec<usize>> {
    let n = a.n();
    let mut label = vec![usize::MAX; n];
    let mut components = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        label[start] = id;
        while let Some(i) = stack.pop() {
            members.push(i);
            for (j, &w) in a.row(i).iter().enumerate() {
                if j != i && w != 0.0 && label[j] == usize::MAX {
                    label[j] = id;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// Fiedler value and unit Fiedler vector (orthogonal to the all-ones vector,
/// first significant entry negative).
#[derive(Debug, Clone, PartialEq)]
pub struct Fiedler {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Computes the Fiedler pair of `L_A`.
///
/// Inputs with negative entries are first shifted by a multiple of `J`. This
/// moves every eigenvalue on the complement of the all-ones vector by the same
/// amount and leaves those eigenvectors unchanged; the reported value is the
/// one for `L_A` itself.
pub fn fiedler(a: &SymMatrix) -> Result<Fiedler> {
    let n = a.n();
    if n < 2 {
        return Err(Error::TrivialDimension);
    }
    let shift = (-a.min_entry()).max(0.0);
    let shifted = if shift > 0.0 {
        a.shift(shift)
    } else {
        a.clone()
    };

    let components = support_components(&shifted);
    if components.len() > 1 {
        return Err(Error::ReducibleMatrix { components });
    }

    let l = laplacian(&shifted);
    let eig = symmetric_eigen(&l)?;
    let norm = l.frobenius_norm();
    let offset = shift * n as f64;
    if n >= 3 && eig.values[2] - eig.values[1] <= SPECTRAL_GAP_TOLERANCE * norm {
        return Err(Error::DegenerateSpectrum {
            lambda2: eig.values[1] - offset,
            lambda3: eig.values[2] - offset,
        });
    }

    let mut y = eig.vectors[1].clone();
    let mean = y.iter().sum::<f64>() / n as f64;
    y.iter_mut().for_each(|v| *v -= mean);
    let len = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    y.iter_mut().for_each(|v| *v /= len);
    if let Some(first) = y.iter().find(|v| v.abs() > FIEDLER_ENTRY_TOLERANCE) {
        if *first > 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
    }

    let value = laplacian_quadratic_form(a, &y);
    Ok(Fiedler { value, vector: y })
}

/// Output of [`seriate`].
#[derive(Debug, Clone, PartialEq)]
pub struct SeriationResult {
    /// Sorts the Fiedler vector ascending: `y[π(0)] < y[π(1)] < …`.
    pub permutation: Permutation,
    pub fiedler_value: f64,
    pub fiedler_vector: Vec<f64>,
    /// The descending order is equally valid; always true for spectral orderings.
    pub reversal_ambiguous: bool,
}

/// Orders a similarity matrix by its Fiedler vector. To seriate a
/// dissimilarity `D`, pass `max(D) · J - D`.
pub fn seriate(a: &SymMatrix) -> Result<SeriationResult> {
    let Fiedler { value, vector } = fiedler(a)?;
    let permutation = Permutation::sorting(&vector);
    for w in permutation.as_slice().windows(2) {
        if vector[w[1]] - vector[w[0]] <= FIEDLER_ENTRY_TOLERANCE {
            return Err(Error::RepeatedFiedlerEntries {
                i: w[0].min(w[1]),
                j: w[0].max(w[1]),
            });
        }
    }
    Ok(SeriationResult {
        permutation,
        fiedler_value: value,
        fiedler_vector: vector,
        reversal_ambiguous: true,
    })
}

/// Residual `‖L_A y - λ y‖₂`.
pub fn fiedler_residual(a: &SymMatrix, f: &Fiedler) -> f64 {
    let l = laplacian(a);
    (0..a.n())
        .map(|i| {
            let ly: f64 = (0..a.n()).map(|j| l.get(i, j) * f.vector[j]).sum();
            (ly - f.value * f.vector[i]).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::apply_permutation;
    use crate::structure::{gen_robinson_similarity, instance_rng, is_robinson_similarity};
    use proptest::prelude::*;

    fn m<const N: usize>(rows: [[f64; N]; N]) -> SymMatrix {
        SymMatrix::from_rows(&rows).unwrap()
    }

    fn tridiagonal() -> SymMatrix {
        m([[1., 1., 0.], [1., 1., 1.], [0., 1., 1.]])
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(
            laplacian(&SymMatrix::ones(3)),
            m([[2., -1., -1.], [-1., 2., -1.], [-1., -1., 2.]])
        );
        assert_eq!(
            laplacian(&tridiagonal()),
            m([[1., -1., 0.], [-1., 2., -1.], [0., -1., 1.]])
        );
        assert_eq!(laplacian(&SymMatrix::zeros(4)), SymMatrix::zeros(4));
    }

    #[test]
    fn fiedler_of_path() {
        // spectrum {0, 1, 3}; L (1,0,-1) = (1,0,-1)
        let f = fiedler(&tridiagonal()).unwrap();
        assert!((f.value - 1.0).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (got, want) in f.vector.iter().zip([-h, 0.0, h]) {
            assert!((got - want).abs() < 1e-12, "{:?}", f.vector);
        }
    }

    #[test]
    fn fiedler_errors() {
        match fiedler(&SymMatrix::identity(3)) {
            Err(Error::ReducibleMatrix { components }) => {
                assert_eq!(components, vec![vec![0], vec![1], vec![2]])
            }
            other => panic!("unexpected {other:?}"),
        }
        match fiedler(&SymMatrix::ones(3)) {
            Err(Error::DegenerateSpectrum { lambda2, lambda3 }) => {
                assert!((lambda2 - 3.0).abs() < 1e-9 && (lambda3 - 3.0).abs() < 1e-9)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(fiedler(&m([[4.]])), Err(Error::TrivialDimension)));
        assert!(matches!(
            seriate(&SymMatrix::identity(4)),
            Err(Error::ReducibleMatrix { .. })
        ));
    }

    #[test]
    fn two_by_two() {
        let f = fiedler(&m([[0., 3.], [3., 0.]])).unwrap();
        assert!((f.value - 6.0).abs() < 1e-12);
        assert!(f.vector[0] < 0.0 && f.vector[1] > 0.0);
    }

    #[test]
    fn repeated_entries_are_rejected() {
        // star graph centred at 2: leaves 1 and 3 are interchangeable
        let star = m([
            [0., 1., 0., 0.],
            [1., 0., 1., 1.],
            [0., 1., 0., 0.],
            [0., 1., 0., 0.],
        ]);
        assert!(seriate(&star).is_err());
    }

    #[test]
    fn seriate_recovers_scrambled_path() {
        let a = tridiagonal();
        let r = seriate(&a).unwrap();
        assert!(r.permutation.is_identity());
        assert!(r.reversal_ambiguous);
        let sigma = Permutation::from_one_based(&[3, 1, 2]).unwrap();
        let scrambled = apply_permutation(&a, &sigma).unwrap();
        let r = seriate(&scrambled).unwrap();
        assert!(is_robinson_similarity(
            &apply_permutation(&scrambled, &r.permutation).unwrap(),
            false
        ));
    }

    #[test]
    fn negative_entries_are_shifted() {
        let a = tridiagonal();
        let f = fiedler(&a).unwrap();
        let g = fiedler(&a.shift(-5.0)).unwrap();
        assert!((g.value - (f.value - 15.0)).abs() < 1e-9);
        for (x, y) in f.vector.iter().zip(&g.vector) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn jacobi_matches_known_spectrum() {
        let e = symmetric_eigen(&m([[2., 1.], [1., 2.]])).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
        let e = symmetric_eigen(&SymMatrix::zeros(3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
    }

    #[test]
    fn jacobi_agrees_with_nalgebra() {
        use rand::Rng;
        let mut rng = instance_rng(12, 99);
        for _ in 0..10 {
            let n = rng.gen_range(2..15);
            let a = SymMatrix::from_upper_fn(n, |_, _| rng.gen_range(-3.0..3.0));
            let ours = symmetric_eigen(&a).unwrap();
            let mut theirs = nalgebra::DMatrix::from_row_slice(n, n, a.as_slice())
                .symmetric_eigen()
                .eigenvalues
                .as_slice()
                .to_vec();
            theirs.sort_by(f64::total_cmp);
            for (x, y) in ours.values.iter().zip(&theirs) {
                assert!((x - y).abs() < 1e-10, "{x} vs {y}");
            }
            for (val, vec) in ours.values.iter().zip(&ours.vectors) {
                let r: f64 = (0..n)
                    .map(|i| {
                        ((0..n).map(|j| a.get(i, j) * vec[j]).sum::<f64>() - val * vec[i]).powi(2)
                    })
                    .sum::<f64>()
                    .sqrt();
                assert!(r <= 1e-10 * a.frobenius_norm());
            }
        }
    }

    #[test]
    fn generated_robinson_has_monotone_fiedler_vector() {
        let mut checked = 0;
        for seed in 0..200 {
            let a = gen_robinson_similarity(10, seed);
            let Ok(r) = seriate(&a) else { continue };
            checked += 1;
            let p = &r.permutation;
            assert!(
                p.is_identity() || *p == Permutation::reversal(10),
                "seed {seed}: {p}"
            );
        }
        assert!(checked > 20, "only {checked} nondegenerate instances");
    }

    proptest! {
        #[test]
        fn laplacian_rows_sum_to_zero(
            (n, entries) in (1usize..12).prop_flat_map(|n| (Just(n), proptest::collection::vec(-100i64..100, n * n)))
        ) {
            let a = SymMatrix::from_upper_fn(n, |i, j| entries[i * n + j] as f64);
            let l = laplacian(&a);
            for row in l.rows() {
                prop_assert_eq!(row.iter().sum::<f64>(), 0.0);
            }
        }

        #[test]
        fn fiedler_contract_holds(
            (n, entries) in (2usize..14).prop_flat_map(|n| (Just(n), proptest::collection::vec(0.05f64..5.0, n * n)))
        ) {
            let a = SymMatrix::from_upper_fn(n, |i, j| entries[i * n + j]);
            if let Ok(f) = fiedler(&a) {
                let ones: f64 = f.vector.iter().sum();
                let norm: f64 = f.vector.iter().map(|v| v * v).sum::<f64>().sqrt();
                prop_assert!(ones.abs() <= 1e-9);
                prop_assert!((norm - 1.0).abs() <= 1e-9);
                prop_assert!(f.value >= -1e-9);
                prop_assert!(fiedler_residual(&a, &f) <= 1e-9 * laplacian(&a).frobenius_norm());
            }
        }

        #[test]
        fn fiedler_scale_shift_equivariance(
            (n, entries) in (2usize..12).prop_flat_map(|n| (Just(n), proptest::collection::vec(0.05f64..5.0, n * n))),
            c in 0.1f64..10.0,
            d in -3.0f64..3.0,
        ) {
            let a = SymMatrix::from_upper_fn(n, |i, j| entries[i * n + j]);
            let b = a.scale(c).shift(d);
            if let (Ok(f), Ok(g)) = (fiedler(&a), fiedler(&b)) {
                let same = f.vector.iter().zip(&g.vector).all(|(x, y)| (x - y).abs() <= 1e-8);
                let flipped = f.vector.iter().zip(&g.vector).all(|(x, y)| (x + y).abs() <= 1e-8);
                prop_assert!(same || flipped);
                let expected = c * f.value + d * n as f64;
                prop_assert!((g.value - expected).abs() <= 1e-8 * (1.0 + expected.abs()));
            }
        }
    }
}
