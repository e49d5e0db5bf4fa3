//! Permutations of `{0, …, n-1}` and their action on symmetric matrices.
//!
//! Storage is zero-based. Everything that crosses a text boundary (parsing,
//! `Display`, JSON) is one-based, so `(4 5 1 2 3)` is the permutation sending
//! position 1 to 4, position 2 to 5, and so on.
//!
//! Composition follows the matrix action: [`compose`]`(π, τ)` is the map
//! `i ↦ π(τ(i))`, which is exactly what makes
//! `apply(apply(A, π), τ) == apply(A, compose(π, τ))` hold. Every other module
//! states its compositions through this function.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{check_dims, SymMatrix};

/// A bijection of `{0, …, n-1}`; `image[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Validates a zero-based image vector.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n {
                return Err(Error::InvalidPermutation(format!(
                    "value {} out of range 1..={n}",
                    v + 1
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!(
                    "value {} appears twice",
                    v + 1
                )));
            }
        }
        Ok(Permutation { image })
    }

    /// Builds a permutation from one-based values, e.g. `[4, 5, 1, 2, 3]`.
    pub fn from_one_based(values: &[usize]) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v == 0) {
            return Err(Error::InvalidPermutation(format!(
                "value {bad} out of range 1..={}",
                values.len()
            )));
        }
        Self::new(values.iter().map(|v| v - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// The order-reversing permutation `i ↦ n-1-i`.
    pub fn reversal(n: usize) -> Self {
        Permutation {
            image: (0..n).rev().collect(),
        }
    }

    /// A uniformly random permutation drawn from `rng`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.shuffle(rng);
        Permutation { image }
    }

    /// The permutation that lists indices in ascending order of `keys`
    /// (ties broken by index): `keys[p(0)] <= keys[p(1)] <= …`.
    pub fn sorting(keys: &[f64]) -> Self {
        let mut image: Vec<usize> = (0..keys.len()).collect();
        image.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
        Permutation { image }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Self {
        invert(self)
    }

    /// Steps to the lexicographically next permutation in place. Returns
    /// `false` (leaving the last permutation untouched) when none exists.
    pub fn advance(&mut self) -> bool {
        let p = &mut self.image;
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }
}

/// `i ↦ π(τ(i))`.
pub fn compose(pi: &Permutation, tau: &Permutation) -> Result<Permutation> {
    check_dims(pi.n(), tau.n())?;
    Ok(Permutation {
        image: tau.image.iter().map(|&t| pi.image[t]).collect(),
    })
}

pub fn invert(pi: &Permutation) -> Permutation {
    let mut image = vec![0; pi.n()];
    for (i, &v) in pi.image.iter().enumerate() {
        image[v] = i;
    }
    Permutation { image }
}

/// `A_π` with entries `A[π(i)][π(j)]`.
pub fn apply_permutation(a: &SymMatrix, pi: &Permutation) -> Result<SymMatrix> {
    check_dims(a.n(), pi.n())?;
    Ok(SymMatrix::from_upper_fn(a.n(), |i, j| {
        a.get(pi.at(i), pi.at(j))
    }))
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// One-based, e.g. `(4 5 1 2 3)`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Parses one-based values separated by spaces and/or commas, optionally
/// wrapped in parentheses or brackets.
impl std::str::FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s
            .trim()
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']']);
        let values = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad token {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(&values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_one_based(v).unwrap()
    }

    fn counterexample_a() -> SymMatrix {
        SymMatrix::from_rows(&[
            [1., 1., 1., 0., 0.],
            [1., 1., 1., 1., 0.],
            [1., 1., 1., 1., 0.],
            [0., 1., 1., 1., 0.],
            [0., 0., 0., 0., 1.],
        ])
        .unwrap()
    }

    #[test]
    fn apply_reorders_counterexample_as_displayed() {
        let expected = SymMatrix::from_rows(&[
            [1., 0., 0., 1., 1.],
            [0., 1., 0., 0., 0.],
            [0., 0., 1., 1., 1.],
            [1., 0., 1., 1., 1.],
            [1., 0., 1., 1., 1.],
        ])
        .unwrap();
        let got = apply_permutation(&counterexample_a(), &p(&[4, 5, 1, 2, 3])).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn apply_small_cases() {
        let a = SymMatrix::from_rows(&[[1., 2.], [2., 3.]]).unwrap();
        let swapped = apply_permutation(&a, &p(&[2, 1])).unwrap();
        assert_eq!(
            swapped,
            SymMatrix::from_rows(&[[3., 2.], [2., 1.]]).unwrap()
        );
        assert_eq!(apply_permutation(&a, &Permutation::identity(2)).unwrap(), a);
        assert!(matches!(
            apply_permutation(&a, &Permutation::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let c = p(&[2, 3, 1]);
        assert!(compose(&c, &p(&[3, 1, 2])).unwrap().is_identity());
        assert!(compose(&p(&[2, 1]), &p(&[2, 1])).unwrap().is_identity());
        // π(τ(i)) by table: τ = (2,3,1) then π = (2,3,1): 1→2→3, 2→3→1, 3→1→2
        assert_eq!(compose(&c, &c).unwrap(), p(&[3, 1, 2]));
        assert!(compose(&c, &Permutation::identity(2)).is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert(&p(&[2, 3, 1])), p(&[3, 1, 2]));
        assert!(invert(&Permutation::identity(4)).is_identity());
        // solve π(x) = i: π = (4,5,1,2,3) sends 3→1, 4→2, 5→3, 1→4, 2→5
        assert_eq!(invert(&p(&[4, 5, 1, 2, 3])), p(&[3, 4, 5, 1, 2]));
    }

    #[test]
    fn reversal_examples() {
        assert_eq!(Permutation::reversal(3), p(&[3, 2, 1]));
        assert_eq!(Permutation::reversal(1), p(&[1]));
        assert_eq!(Permutation::reversal(5), p(&[5, 4, 3, 2, 1]));
    }

    #[test]
    fn parse_and_display() {
        let q: Permutation = "4 5 1 2 3".parse().unwrap();
        assert_eq!(q, p(&[4, 5, 1, 2, 3]));
        let q: Permutation = "[4,5, 1,2,3]".parse().unwrap();
        assert_eq!(q.to_string(), "(4 5 1 2 3)");
        assert!("1 1 2".parse::<Permutation>().is_err());
        assert!("0 1".parse::<Permutation>().is_err());
        assert!("1 x".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
    }

    #[test]
    fn advance_enumerates_in_lexicographic_order() {
        let mut q = Permutation::identity(4);
        let mut all = vec![q.clone()];
        while q.advance() {
            all.push(q.clone());
        }
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn action_composes_exhaustively_for_small_n() {
        for n in 1..=5 {
            let a = SymMatrix::from_upper_fn(n, |i, j| (3 * i + 7 * j + i * j) as f64);
            let mut pi = Permutation::identity(n);
            loop {
                let mut tau = Permutation::identity(n);
                loop {
                    let lhs =
                        apply_permutation(&apply_permutation(&a, &pi).unwrap(), &tau).unwrap();
                    let rhs = apply_permutation(&a, &compose(&pi, &tau).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                    if !tau.advance() {
                        break;
                    }
                }
                if !pi.advance() {
                    break;
                }
            }
        }
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    }

    fn arb_case() -> impl Strategy<Value = (SymMatrix, SymMatrix, Permutation, Permutation)> {
        (1usize..12).prop_flat_map(|n| {
            let entries = proptest::collection::vec(-50i32..50, n * n);
            (entries.clone(), entries, arb_perm(n), arb_perm(n)).prop_map(move |(x, y, p, t)| {
                let a = SymMatrix::from_upper_fn(n, |i, j| x[i * n + j] as f64);
                let b = SymMatrix::from_upper_fn(n, |i, j| y[i * n + j] as f64 * 0.37);
                (a, b, p, t)
            })
        })
    }

    proptest! {
        #[test]
        fn action_composition((a, _b, pi, tau) in arb_case()) {
            let lhs = apply_permutation(&apply_permutation(&a, &pi).unwrap(), &tau).unwrap();
            prop_assert_eq!(lhs, apply_permutation(&a, &compose(&pi, &tau).unwrap()).unwrap());
        }

        #[test]
        fn adjoint_identity((a, b, _pi, tau) in arb_case()) {
            let lhs = crate::matrix::inner_product(&a, &apply_permutation(&b, &tau).unwrap()).unwrap();
            let rhs = crate::matrix::inner_product(&apply_permutation(&a, &invert(&tau)).unwrap(), &b).unwrap();
            let scale = 1.0 + a.max_abs() * b.max_abs() * (a.n() * a.n()) as f64;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn apply_preserves_entry_multiset((a, _b, pi, _tau) in arb_case()) {
            let mut x = a.as_slice().to_vec();
            let mut y = apply_permutation(&a, &pi).unwrap().as_slice().to_vec();
            x.sort_by(f64::total_cmp);
            y.sort_by(f64::total_cmp);
            prop_assert_eq!(x, y);
        }

        #[test]
        fn invert_is_involution_and_two_sided((_a, _b, pi, _tau) in arb_case()) {
            let inv = invert(&pi);
            prop_assert_eq!(invert(&inv), pi.clone());
            prop_assert!(compose(&pi, &inv).unwrap().is_identity());
            prop_assert!(compose(&inv, &pi).unwrap().is_identity());
        }
    }
}
