//! Dense real symmetric matrices.

use std::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance for accepting a nearly symmetric input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Largest magnitude for which an integral `f64` is treated as an exact integer.
const EXACT_INT_LIMIT: f64 = (1u64 << 40) as f64;

/// A dense `n × n` real symmetric matrix, stored row-major with both
/// triangles present. Symmetry is exact: every constructor mirrors the upper
/// triangle.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle `i <= j`.
    ///
    /// # Panics
    /// If `n == 0`.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "SymMatrix requires n >= 1");
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix { n, data }
    }

    /// Builds a matrix from rows, checking shape, finiteness and symmetry
    /// within [`SYMMETRY_TOLERANCE`]. The upper triangle is kept.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Range("matrix dimension must be at least 1".into()));
        }
        for (row, r) in rows.iter().enumerate() {
            let len = r.as_ref().len();
            if len != n {
                return Err(Error::NotSquare { row, len, n });
            }
            if let Some(j) = r.as_ref().iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { i: row, j });
            }
        }
        let mut worst: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            for j in i + 1..n {
                let diff = (rows[i].as_ref()[j] - rows[j].as_ref()[i]).abs();
                if diff > SYMMETRY_TOLERANCE && worst.is_none_or(|w| diff > w.2) {
                    worst = Some((i, j, diff));
                }
            }
        }
        if let Some((i, j, diff)) = worst {
            return Err(Error::AsymmetricInput { i, j, diff });
        }
        Ok(Self::from_upper_fn(n, |i, j| rows[i].as_ref()[j]))
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_upper_fn(n, |_, _| 0.0)
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        Self::from_upper_fn(n, |_, _| 1.0)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_upper_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n)
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest absolute entry; used as the scale for relative tolerances.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// True when every entry is an integer of magnitude below 2^40, so sums of
    /// products over the matrix can be carried out exactly in `i128`.
    pub fn is_integral(&self) -> bool {
        self.data
            .iter()
            .all(|v| v.fract() == 0.0 && v.abs() < EXACT_INT_LIMIT)
    }

    /// Entries as integers, when [`is_integral`](Self::is_integral) holds.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.is_integral()
            .then(|| self.data.iter().map(|&v| v as i64).collect())
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `c · self`.
    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// `self + c · J`.
    pub fn shift(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    /// `-self`.
    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    pub fn add(&self, other: &SymMatrix) -> Result<Self> {
        check_dims(self.n, other.n)?;
        Ok(SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<Self> {
        check_dims(self.n, other.n)?;
        Ok(SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Returns a copy whose diagonal is replaced by `value`.
    pub fn with_diagonal(&self, value: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] = value;
        }
        out
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &SymMatrix) -> Result<f64> {
        check_dims(self.n, other.n)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// Trace inner product `<A, B> = Σ_ij A_ij B_ij`. Computed exactly when
/// both matrices are integral.
pub fn inner_product(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    check_dims(a.n, b.n)?;
    if let (Some(x), Some(y)) = (a.to_integers(), b.to_integers()) {
        let s: i128 = x.iter().zip(&y).map(|(&p, &q)| p as i128 * q as i128).sum();
        return Ok(s as f64);
    }
    Ok(a.data.iter().zip(&b.data).map(|(p, q)| p * q).sum())
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

/// Formats a number the way the text formats expect: integers without a
/// decimal point, everything else with round-trip precision.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Writes the matrix in the text file format: `n` on the first line followed
/// by `n` rows of space-separated entries.
impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
