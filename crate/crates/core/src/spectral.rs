//! Second-moment estimation and the circulant eigenstructure.
//!
//! The circulant matrix built from the lag-window autocovariances is diagonalised
//! by the Fourier basis, so its eigenvalues are a spectral density estimate on the
//! grid `w_k = (k - 1) / L` and its eigenvectors are known in closed form. Nothing
//! here calls a general eigensolver.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{CissaError, Result};

/// Relative tolerance for the imaginary residue left by the transform in [`psd`].
pub const PSD_IMAG_TOLERANCE: f64 = 1e-8;

/// Checks `1 < L < T/2`.
pub fn validate_window(series_len: usize, window: usize) -> Result<()> {
    if window < 2 || 2 * window >= series_len {
        return Err(CissaError::param(format!(
            "window length L={window} violates 1<L<T/2 for series length T={series_len}"
        )));
    }
    Ok(())
}

pub(crate) fn ensure_finite(x: &[f64]) -> Result<()> {
    if let Some(pos) = x.iter().position(|v| !v.is_finite()) {
        return Err(CissaError::input(format!(
            "non-finite value at sample {}",
            pos + 1
        )));
    }
    Ok(())
}

/// Normalized frequency `(k - 1) / L` in cycles per sample, `k` 1-based.
pub fn frequency(k: usize, window: usize) -> f64 {
    (k - 1) as f64 / window as f64
}

/// Number of distinct frequency groups, `floor(L/2) + 1`.
pub fn num_frequencies(window: usize) -> usize {
    window / 2 + 1
}

/// Sample autocovariances at lags `0..L`, without demeaning.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocovarianceVector {
    gamma: Vec<f64>,
    series_len: usize,
}

impl AutocovarianceVector {
    pub fn values(&self) -> &[f64] {
        &self.gamma
    }

    pub fn window(&self) -> usize {
        self.gamma.len()
    }

    pub fn series_len(&self) -> usize {
        self.series_len
    }
}

/// `gamma[m] = 1/(T-m) * sum_{t} x_t x_{t+m}` for `m = 0..L-1`.
pub fn autocovariances(x: &[f64], window: usize) -> Result<AutocovarianceVector> {
    validate_window(x.len(), window)?;
    ensure_finite(x)?;
    let n = x.len();
    let gamma = (0..window)
        .map(|m| {
            let s: f64 = x[..n - m].iter().zip(&x[m..]).map(|(a, b)| a * b).sum();
            s / (n - m) as f64
        })
        .collect();
    Ok(AutocovarianceVector {
        gamma,
        series_len: n,
    })
}

/// First row of the symmetric circulant second-moment matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantRow {
    c: Vec<f64>,
}

impl CirculantRow {
    /// Wraps an explicit row, checking `c[m] == c[L-m]` to `1e-12 * max|c|`.
    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.len() < 2 {
            return Err(CissaError::param("circulant row needs at least 2 entries"));
        }
        ensure_finite(&c)?;
        let l = c.len();
        let scale = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for m in 1..l {
            if (c[m] - c[l - m]).abs() > 1e-12 * scale {
                return Err(CissaError::numeric(format!(
                    "circulant row is not symmetric at lag {m}"
                )));
            }
        }
        Ok(CirculantRow { c })
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }

    pub fn window(&self) -> usize {
        self.c.len()
    }
}

/// `c[m] = (L-m)/L * gamma[m] + m/L * gamma[L-m]`; symmetric by construction.
pub fn circulant_row(gamma: &AutocovarianceVector) -> CirculantRow {
    let g = gamma.values();
    let l = g.len();
    let lf = l as f64;
    let mut c = Vec::with_capacity(l);
    c.push(g[0]);
    for m in 1..l {
        let near = (l - m) as f64 / lf * g[m];
        let far = m as f64 / lf * g[l - m];
        c.push(near + far);
    }
    CirculantRow { c }
}

/// Eigenvalues of the circulant matrix, indexed by `k = 1..L`.
///
/// These are the power spectral density estimates at `w_k`. The estimate is not
/// guaranteed nonnegative; small negative values are kept as computed.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdVector {
    lambda: Vec<f64>,
}

impl PsdVector {
    /// Wraps stored eigenvalues (e.g. read back from disk).
    pub fn from_values(lambda: Vec<f64>) -> Result<Self> {
        if lambda.len() < 2 {
            return Err(CissaError::param("psd needs at least 2 values"));
        }
        ensure_finite(&lambda)?;
        Ok(PsdVector { lambda })
    }

    pub fn values(&self) -> &[f64] {
        &self.lambda
    }

    pub fn window(&self) -> usize {
        self.lambda.len()
    }

    /// Eigenvalue at 1-based index `k`.
    pub fn get(&self, k: usize) -> f64 {
        self.lambda[k - 1]
    }

    pub fn frequency(&self, k: usize) -> f64 {
        frequency(k, self.window())
    }

    pub fn num_frequencies(&self) -> usize {
        num_frequencies(self.window())
    }

    pub fn total(&self) -> f64 {
        self.lambda.iter().sum()
    }

    /// 1-based indices whose estimate came out negative.
    pub fn negative_indices(&self) -> Vec<usize> {
        self.lambda
            .iter()
            .enumerate()
            .filter(|(_, v)| **v < 0.0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// `lambda_k = sum_m c_m exp(i 2 pi m (k-1) / L)`, evaluated with an FFT.
pub fn psd(c: &CirculantRow) -> Result<PsdVector> {
    let l = c.window();
    let mut buf: Vec<Complex64> = c.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(l).process(&mut buf);

    let scale = buf.iter().fold(0.0f64, |a, z| a.max(z.re.abs()));
    let residue = buf.iter().fold(0.0f64, |a, z| a.max(z.im.abs()));
    if residue > PSD_IMAG_TOLERANCE * scale {
        return Err(CissaError::numeric(format!(
            "psd imaginary residue {residue:e} exceeds tolerance (max |lambda| = {scale:e}); circulant row not symmetric"
        )));
    }
    Ok(PsdVector {
        lambda: buf.into_iter().map(|z| z.re).collect(),
    })
}

/// Real and imaginary parts of the unit eigenvector `u_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyEigenpair {
    pub k: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl FrequencyEigenpair {
    pub fn window(&self) -> usize {
        self.re.len()
    }

    /// True for `k = 1` and, when `L` is even, the Nyquist index.
    pub fn is_self_conjugate(&self) -> bool {
        is_self_conjugate(self.k, self.window())
    }
}

pub(crate) fn is_self_conjugate(k: usize, window: usize) -> bool {
    k == 1 || (window.is_multiple_of(2) && k == window / 2 + 1)
}

/// Closed-form eigenvector for frequency index `k` in `1..=floor(L/2)+1`.
pub fn eigenpair(k: usize, window: usize) -> Result<FrequencyEigenpair> {
    if window < 2 {
        return Err(CissaError::param(format!("window length {window} < 2")));
    }
    let f = num_frequencies(window);
    if k == 0 || k > f {
        return Err(CissaError::param(format!(
            "frequency index k={k} outside 1..={f} for L={window}"
        )));
    }
    let norm = (window as f64).sqrt().recip();
    let mut re = Vec::with_capacity(window);
    let mut im = Vec::with_capacity(window);
    for j in 0..window {
        // reduce the phase modulo L so large indices keep full precision
        let phase = 2.0 * PI * ((j * (k - 1)) % window) as f64 / window as f64;
        re.push(norm * phase.cos());
        im.push(-norm * phase.sin());
    }
    if is_self_conjugate(k, window) {
        // sin(pi * j) is not exactly zero in floating point
        im.iter_mut().for_each(|v| *v = 0.0);
        if k > 1 {
            re.iter_mut()
                .enumerate()
                .for_each(|(j, v)| *v = if j % 2 == 0 { norm } else { -norm });
        }
    }
    Ok(FrequencyEigenpair { k, re, im })
}
