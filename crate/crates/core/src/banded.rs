//! Real symmetric band matrices stored by superdiagonals.

use crate::error::{Error, Result};

/// Symmetric matrix with `bandwidth` stored superdiagonals.
///
/// `bands[k][i]` holds entry `(i, i + k)`; the lower triangle is implied.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymmetricMatrix {
    dim: usize,
    bands: Vec<Vec<f64>>,
}

impl BandedSymmetricMatrix {
    pub fn zeros(dim: usize, bandwidth: usize) -> Self {
        let bands = (0..=bandwidth)
            .map(|k| vec![0.0; dim.saturating_sub(k)])
            .collect();
        Self { dim, bands }
    }

    pub fn diagonal(diag: Vec<f64>) -> Self {
        Self {
            dim: diag.len(),
            bands: vec![diag],
        }
    }

    pub fn tridiagonal(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        Self::from_bands(vec![diag, off])
    }

    /// Builds from explicit superdiagonals; band `k` must have `dim - k` entries.
    pub fn from_bands(bands: Vec<Vec<f64>>) -> Result<Self> {
        let dim = bands.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::Empty("matrix diagonal"));
        }
        for (k, b) in bands.iter().enumerate() {
            if b.len() != dim.saturating_sub(k) {
                return Err(Error::param(
                    "band length",
                    b.len() as f64,
                    "band k must hold dim - k entries",
                ));
            }
        }
        Ok(Self { dim, bands })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored superdiagonals.
    pub fn bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn band(&self, k: usize) -> &[f64] {
        &self.bands[k]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let k = hi - lo;
        if k < self.bands.len() && hi < self.dim {
            self.bands[k][lo]
        } else {
            0.0
        }
    }

    /// Sets entries `(i, j)` and `(j, i)`. Panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.bands[hi - lo][lo] = value;
    }

    pub fn check_finite(&self) -> Result<()> {
        for (k, b) in self.bands.iter().enumerate() {
            if let Some(i) = b.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: i, col: i + k });
            }
        }
        Ok(())
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "matvec length mismatch");
        let mut y: Vec<f64> = self.bands[0].iter().zip(x).map(|(a, v)| a * v).collect();
        for (k, b) in self.bands.iter().enumerate().skip(1) {
            for (i, &a) in b.iter().enumerate() {
                y[i] += a * x[i + k];
                y[i + k] += a * x[i];
            }
        }
        y
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.dim]; self.dim];
        for (k, b) in self.bands.iter().enumerate() {
            for (i, &a) in b.iter().enumerate() {
                out[i][i + k] = a;
                out[i + k][i] = a;
            }
        }
        out
    }

    /// Maximum absolute row sum; bounds the spectral norm.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0f64; self.dim];
        for (k, b) in self.bands.iter().enumerate() {
            for (i, &a) in b.iter().enumerate() {
                rows[i] += a.abs();
                if k > 0 {
                    rows[i + k] += a.abs();
                }
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            dim: self.dim,
            bands: self
                .bands
                .iter()
                .map(|b| b.iter().map(|v| alpha * v).collect())
                .collect(),
        }
    }

    /// `self + alpha * other`, widening the band as needed.
    pub fn add_scaled(&self, alpha: f64, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let bw = self.bandwidth().max(other.bandwidth());
        let mut out = Self::zeros(self.dim, bw);
        for (k, b) in self.bands.iter().enumerate() {
            out.bands[k].copy_from_slice(b);
        }
        for (k, b) in other.bands.iter().enumerate() {
            for (o, v) in out.bands[k].iter_mut().zip(b) {
                *o += alpha * v;
            }
        }
        out
    }

    /// Exact product `self * self`, bandwidth doubled.
    pub fn square(&self) -> Self {
        let b = self.bandwidth();
        let n = self.dim;
        let mut out = Self::zeros(n, (2 * b).min(n.saturating_sub(1)));
        for k in 0..out.bands.len() {
            for i in 0..n - k {
                let j = i + k;
                let lo = j.saturating_sub(b);
                let hi = (i + b).min(n - 1);
                let mut s = 0.0;
                for m in lo..=hi {
                    s += self.get(i, m) * self.get(m, j);
                }
                out.bands[k][i] = s;
            }
        }
        out
    }

    /// Returns `self - sigma * I`.
    pub fn shifted(&self, sigma: f64) -> Self {
        let mut out = self.clone();
        for d in &mut out.bands[0] {
            *d -= sigma;
        }
        out
    }

    pub(crate) fn bands(&self) -> &[Vec<f64>] {
        &self.bands
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_tridiagonal_matches_dense() {
        let a = BandedSymmetricMatrix::tridiagonal(vec![1.0, 2.0, 3.0, 4.0], vec![0.5, -1.0, 2.0])
            .unwrap();
        let sq = a.square();
        let d = a.to_dense();
        for i in 0..4 {
            for j in 0..4 {
                let s: f64 = (0..4).map(|m| d[i][m] * d[m][j]).sum();
                assert!((sq.get(i, j) - s).abs() < 1e-15, "{i} {j}");
            }
        }
        assert_eq!(sq.bandwidth(), 2);
    }

    #[test]
    fn matvec_uses_both_triangles() {
        let a = BandedSymmetricMatrix::tridiagonal(vec![0.0; 3], vec![1.0, 2.0]).unwrap();
        assert_eq!(a.matvec(&[1.0, 1.0, 1.0]), vec![1.0, 3.0, 2.0]);
    }

    #[test]
    fn bad_band_length_rejected() {
        assert!(BandedSymmetricMatrix::from_bands(vec![vec![1.0; 3], vec![1.0; 3]]).is_err());
    }
}
