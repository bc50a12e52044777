//! Slow, literal implementation of the decomposition for equivalence testing.
//!
//! Builds the trajectory matrix, the explicit circulant matrix, the closed-form
//! complex eigenvectors and every elementary matrix by frequency, then averages
//! antidiagonals with the three-branch formula. Shares no code with the fast
//! path beyond the result types. Eigenpairs are matched to frequencies by their
//! closed forms, never by solver ordering.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::decompose::Decomposition;
use crate::error::{CissaError, Result};
use crate::extension::ExtensionMode;
use crate::spectral::PsdVector;

pub const MAX_WINDOW: usize = 32;
pub const MAX_SERIES_LEN: usize = 400;

/// Every intermediate object of the literal algorithm.
#[derive(Debug, Clone)]
pub struct DenseArtifacts {
    /// `L x N`, `trajectory[i][j] = x[i + j]`.
    pub trajectory: Vec<Vec<f64>>,
    /// `L x L`, row `i` is the first row shifted right by `i`.
    pub circulant: Vec<Vec<f64>>,
    /// Rayleigh quotients `u_k^H S_C u_k`, `k = 1..L`.
    pub eigenvalues: Vec<f64>,
    /// Largest `|S_C u_k - lambda_k u_k|` over all `k`.
    pub eigen_residual: f64,
    /// Real elementary matrices `X_{B_k}`, `k = 1..floor(L/2)+1`.
    pub elementary: Vec<Vec<Vec<f64>>>,
    /// Largest imaginary part dropped when forming `X_{B_k}`.
    pub imag_residue: f64,
}

fn eigenvector(k: usize, l: usize) -> Vec<Complex64> {
    let norm = (l as f64).sqrt().recip();
    (0..l)
        .map(|j| {
            let u = Complex64::from_polar(1.0, -2.0 * PI * (j * (k - 1)) as f64 / l as f64);
            u.conj() * norm
        })
        .collect()
}

/// Builds all dense objects for `x` with window `L` (guarded: `L <= 32`, `T <= 400`).
pub fn dense_artifacts(x: &[f64], window: usize) -> Result<DenseArtifacts> {
    let t = x.len();
    let l = window;
    if l > MAX_WINDOW || t > MAX_SERIES_LEN {
        return Err(CissaError::param(format!(
            "reference implementation limited to L <= {MAX_WINDOW}, T <= {MAX_SERIES_LEN}"
        )));
    }
    if l < 2 || 2 * l >= t {
        return Err(CissaError::param(format!(
            "window length L={l} violates 1<L<T/2 for series length T={t}"
        )));
    }
    let n = t - l + 1;

    let trajectory: Vec<Vec<f64>> = (0..l).map(|i| (0..n).map(|j| x[i + j]).collect()).collect();

    let mut gamma = vec![0.0; l];
    for (m, g) in gamma.iter_mut().enumerate() {
        let mut s = 0.0;
        for i in 0..t - m {
            s += x[i] * x[i + m];
        }
        *g = s / (t - m) as f64;
    }
    let mut row = vec![0.0; l];
    for m in 0..l {
        let far = if m == 0 { 0.0 } else { gamma[l - m] };
        row[m] = (l - m) as f64 / l as f64 * gamma[m] + m as f64 / l as f64 * far;
    }
    let circulant: Vec<Vec<f64>> = (0..l)
        .map(|i| (0..l).map(|j| row[(j + l - i) % l]).collect())
        .collect();

    let vectors: Vec<Vec<Complex64>> = (1..=l).map(|k| eigenvector(k, l)).collect();
    let mut eigenvalues = Vec::with_capacity(l);
    let mut eigen_residual = 0.0f64;
    for u in &vectors {
        let su: Vec<Complex64> = circulant
            .iter()
            .map(|r| r.iter().zip(u).map(|(a, b)| b * a).sum())
            .collect();
        let lambda: Complex64 = u.iter().zip(&su).map(|(a, b)| a.conj() * b).sum();
        for (a, b) in su.iter().zip(u) {
            eigen_residual = eigen_residual.max((a - b * lambda).norm());
        }
        eigenvalues.push(lambda.re);
    }

    // X_k = u_k (u_k^H X)
    let elementary_complex = |k: usize| -> Vec<Vec<Complex64>> {
        let u = &vectors[k - 1];
        let w: Vec<Complex64> = (0..n)
            .map(|j| (0..l).map(|i| u[i].conj() * trajectory[i][j]).sum())
            .collect();
        (0..l)
            .map(|i| (0..n).map(|j| u[i] * w[j]).collect())
            .collect()
    };

    let mut elementary = Vec::new();
    let mut imag_residue = 0.0f64;
    for k in 1..=l / 2 + 1 {
        let mut xb = elementary_complex(k);
        let partner = l + 2 - k;
        if k > 1 && partner != k && partner <= l {
            let other = elementary_complex(partner);
            for (ra, rb) in xb.iter_mut().zip(&other) {
                for (a, b) in ra.iter_mut().zip(rb) {
                    *a += b;
                }
            }
        }
        let real = xb
            .iter()
            .map(|r| {
                r.iter()
                    .map(|z| {
                        imag_residue = imag_residue.max(z.im.abs());
                        z.re
                    })
                    .collect()
            })
            .collect();
        elementary.push(real);
    }

    Ok(DenseArtifacts {
        trajectory,
        circulant,
        eigenvalues,
        eigen_residual,
        elementary,
        imag_residue,
    })
}

/// Three-branch antidiagonal average of an `L x N` matrix, `L <= N`.
pub fn diagonal_average(m: &[Vec<f64>]) -> Vec<f64> {
    let l = m.len();
    let n = m[0].len();
    let t_len = l + n - 1;
    // 1-based t and i as in the textbook statement
    (1..=t_len)
        .map(|t| {
            let (lo, hi, div) = if t < l {
                (1, t, t)
            } else if t <= n {
                (1, l, l)
            } else {
                (t - n + 1, l, t_len - t + 1)
            };
            let s: f64 = (lo..=hi).map(|i| m[i - 1][t - i]).sum();
            s / div as f64
        })
        .collect()
}

/// Literal decomposition without extension.
pub fn oracle_decompose(x: &[f64], window: usize) -> Result<Decomposition> {
    let art = dense_artifacts(x, window)?;
    let components = art.elementary.iter().map(|m| diagonal_average(m)).collect();
    Decomposition::from_parts(
        components,
        PsdVector::from_values(art.eigenvalues)?,
        ExtensionMode::None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_enforced() {
        assert!(dense_artifacts(&vec![0.0; 401], 10).is_err());
        assert!(dense_artifacts(&vec![0.0; 100], 33).is_err());
        assert!(dense_artifacts(&[0.0; 20], 10).is_err());
    }

    #[test]
    fn constant_series_single_column() {
        let dec = oracle_decompose(&[1.5; 30], 8).unwrap();
        assert!(dec.component(1).iter().all(|v| (v - 1.5).abs() < 1e-12));
        for k in 2..=5 {
            assert!(dec.component(k).iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn elementary_matrices_complete_and_real() {
        let x: Vec<f64> = (0..40).map(|t| ((t * t) as f64 * 0.13).sin()).collect();
        for l in [7usize, 8] {
            let art = dense_artifacts(&x, l).unwrap();
            assert!(art.imag_residue < 1e-11);
            assert!(art.eigen_residual < 1e-11);
            for i in 0..l {
                for j in 0..x.len() - l + 1 {
                    let s: f64 = art.elementary.iter().map(|m| m[i][j]).sum();
                    assert!((s - art.trajectory[i][j]).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn circulant_rows_are_shifts() {
        let x: Vec<f64> = (0..30).map(|t| (t as f64).cos()).collect();
        let art = dense_artifacts(&x, 5).unwrap();
        for i in 1..5 {
            for j in 0..5 {
                assert_eq!(art.circulant[i][j], art.circulant[0][(j + 5 - i) % 5]);
            }
        }
    }
}
