//! The decomposition pipeline: extend, estimate the circulant spectrum, project
//! the trajectory matrix onto each frequency pair and diagonally average.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{CissaError, Result};
use crate::extension::{extend, ExtendedSeries, ExtensionMode};
use crate::spectral::{
    autocovariances, circulant_row, eigenpair, ensure_finite, is_self_conjugate, num_frequencies,
    psd, validate_window, FrequencyEigenpair, PsdVector,
};

/// Shortest series accepted by [`cissa`].
pub const MIN_SERIES_LEN: usize = 12;

/// Conjugate index set `B_k`: `{1}`, `{k, L+2-k}`, or `{L/2+1}` for even `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyGroupIndex {
    pub k: usize,
    pub partner: Option<usize>,
}

/// All `floor(L/2)+1` frequency groups for window `L`.
pub fn frequency_groups(window: usize) -> Vec<FrequencyGroupIndex> {
    (1..=num_frequencies(window))
        .map(|k| FrequencyGroupIndex {
            k,
            partner: (!is_self_conjugate(k, window)).then(|| window + 2 - k),
        })
        .collect()
}

/// How each elementary component is projected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProjectionPath {
    /// Prefix-sum identity, `O(T)` per frequency.
    #[default]
    Transform,
    /// Explicit `R'X`, `I'X` products and antidiagonal accumulation, `O(L*N)`.
    Direct,
}

/// Per-frequency components of a series plus its spectral estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    components: Vec<Vec<f64>>,
    psd: PsdVector,
    window: usize,
    mode: ExtensionMode,
}

impl Decomposition {
    /// Reassembles a decomposition, e.g. from files. Checks shapes only.
    pub fn from_parts(
        components: Vec<Vec<f64>>,
        psd: PsdVector,
        mode: ExtensionMode,
    ) -> Result<Self> {
        let window = psd.window();
        let f = num_frequencies(window);
        if components.len() != f {
            return Err(CissaError::input(format!(
                "expected {f} components for L={window}, found {}",
                components.len()
            )));
        }
        let t = components[0].len();
        if components.iter().any(|c| c.len() != t) {
            return Err(CissaError::input("components have unequal lengths"));
        }
        Ok(Decomposition {
            components,
            psd,
            window,
            mode,
        })
    }

    /// Series length `T`.
    pub fn len(&self) -> usize {
        self.components[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Number of components `F = floor(L/2)+1`.
    pub fn num_frequencies(&self) -> usize {
        self.components.len()
    }

    pub fn psd(&self) -> &PsdVector {
        &self.psd
    }

    pub fn mode(&self) -> ExtensionMode {
        self.mode
    }

    /// Component at 1-based frequency index `k`.
    pub fn component(&self, k: usize) -> &[f64] {
        &self.components[k - 1]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// `sum_k Z[t, k]` for every `t`; equals the input series up to rounding.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        for c in &self.components {
            out.iter_mut().zip(c).for_each(|(o, v)| *o += v);
        }
        out
    }
}

/// Decomposes `x` into `floor(L/2)+1` components at frequencies `(k-1)/L`.
pub fn cissa(x: &[f64], window: usize, mode: ExtensionMode) -> Result<Decomposition> {
    cissa_with_path(x, window, mode, ProjectionPath::Transform)
}

pub fn cissa_with_path(
    x: &[f64],
    window: usize,
    mode: ExtensionMode,
    path: ProjectionPath,
) -> Result<Decomposition> {
    if x.len() < MIN_SERIES_LEN {
        return Err(CissaError::param(format!(
            "series has {} samples, at least {MIN_SERIES_LEN} required",
            x.len()
        )));
    }
    validate_window(x.len(), window)?;
    ensure_finite(x)?;

    let ext = extend(x, window, mode)?;
    // second moments come from observed samples only; extended points would
    // bias the spectrum (a mirrored sinusoid changes phase at the fold)
    let gamma = autocovariances(x, window)?;
    let spectrum = psd(&circulant_row(&gamma))?;

    let components = (1..=num_frequencies(window))
        .into_par_iter()
        .map(|k| {
            let pair = eigenpair(k, window)?;
            let full = match path {
                ProjectionPath::Transform => component_series(&ext, &pair)?,
                ProjectionPath::Direct => component_series_direct(&ext, &pair)?,
            };
            Ok(ext.trim(&full).to_vec())
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Decomposition {
        components,
        psd: spectrum,
        window,
        mode,
    })
}

fn projector_weight(pair: &FrequencyEigenpair) -> f64 {
    if pair.is_self_conjugate() {
        1.0
    } else {
        2.0
    }
}

fn check_lengths(series_len: usize, window: usize) -> Result<()> {
    if window < 2 || series_len < window {
        return Err(CissaError::param(format!(
            "series of length {series_len} cannot be embedded with window {window}"
        )));
    }
    Ok(())
}

/// `H(P_k X)` over the whole extended series.
///
/// Uses `(P_k X)[i, j] = (c/L) Re(e^{i a (i+j)} S_j)` with `S_j` a windowed sum of
/// the demodulated series, so each antidiagonal average reduces to a range sum of
/// `S` read from prefix sums.
pub fn component_series(x_ext: &ExtendedSeries, pair: &FrequencyEigenpair) -> Result<Vec<f64>> {
    let x = &x_ext.values;
    let l = pair.window();
    check_lengths(x.len(), l)?;
    let t_len = x.len();
    let n = t_len - l + 1;
    let step = pair.k - 1;

    let twiddle: Vec<Complex64> = (0..l)
        .map(|m| Complex64::from_polar(1.0, -2.0 * PI * m as f64 / l as f64))
        .collect();
    let phase = |idx: usize| twiddle[(idx * step) % l];

    let mut prefix_y = Vec::with_capacity(t_len + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    prefix_y.push(acc);
    for (idx, &v) in x.iter().enumerate() {
        acc += phase(idx) * v;
        prefix_y.push(acc);
    }
    let mut prefix_s = Vec::with_capacity(n + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    prefix_s.push(acc);
    for j in 0..n {
        acc += prefix_y[j + l] - prefix_y[j];
        prefix_s.push(acc);
    }

    let scale = projector_weight(pair) / l as f64;
    let out = (0..t_len)
        .map(|t| {
            let lo = (t + 1).saturating_sub(l);
            let hi = t.min(n - 1);
            let sum = prefix_s[hi + 1] - prefix_s[lo];
            let count = (hi + 1 - lo) as f64;
            // e^{+i a t} is the conjugate of the stored twiddle
            let rot = phase(t).conj();
            scale * (rot * sum).re / count
        })
        .collect();
    Ok(out)
}

/// Same contract as [`component_series`], computed from `R'X` and `I'X` directly.
pub fn component_series_direct(
    x_ext: &ExtendedSeries,
    pair: &FrequencyEigenpair,
) -> Result<Vec<f64>> {
    let x = &x_ext.values;
    let l = pair.window();
    check_lengths(x.len(), l)?;
    let n = x.len() - l + 1;
    let weight = projector_weight(pair);

    let project = |basis: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|j| basis.iter().zip(&x[j..j + l]).map(|(b, v)| b * v).sum())
            .collect()
    };
    let re_x = project(&pair.re);
    let im_x = project(&pair.im);

    let mut sums = vec![0.0; x.len()];
    let mut counts = vec![0usize; x.len()];
    for i in 0..l {
        let (r, m) = (pair.re[i], pair.im[i]);
        for j in 0..n {
            sums[i + j] += weight * (r * re_x[j] + m * im_x[j]);
            counts[i + j] += 1;
        }
    }
    Ok(sums
        .into_iter()
        .zip(counts)
        .map(|(s, c)| s / c as f64)
        .collect())
}

/// Diagonal averaging of an `L x N` matrix (rows given) into a series of length `L+N-1`.
pub fn hankelize(rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    let l = rows.len();
    if l == 0 {
        return Err(CissaError::param("cannot hankelize an empty matrix"));
    }
    let n = rows[0].len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(CissaError::param("matrix rows have unequal lengths"));
    }
    if l > n {
        return Err(CissaError::param(format!(
            "hankelization expects L <= N, got {l} x {n}"
        )));
    }
    let t_len = l + n - 1;
    let mut out = vec![0.0; t_len];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[i + j] += v;
        }
    }
    for (t, v) in out.iter_mut().enumerate() {
        let count = if t < l {
            t + 1
        } else if t < n {
            l
        } else {
            t_len - t
        };
        *v /= count as f64;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(x: &[f64]) -> ExtendedSeries {
        ExtendedSeries {
            values: x.to_vec(),
            offset: 0,
            original_len: x.len(),
        }
    }

    #[test]
    fn hankelize_two_by_two() {
        let out = hankelize(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(out, vec![1.0, 2.5, 4.0]);
    }

    #[test]
    fn hankelize_recovers_hankel_source() {
        let s: Vec<f64> = (0..9).map(|v| (v as f64).powi(2) - 3.0).collect();
        let l = 4;
        let rows: Vec<Vec<f64>> = (0..l).map(|i| s[i..i + s.len() - l + 1].to_vec()).collect();
        assert_eq!(hankelize(&rows).unwrap(), s);
    }

    #[test]
    fn hankelize_rejects_tall_or_ragged() {
        assert!(hankelize(&[vec![1.0], vec![2.0]]).is_err());
        assert!(hankelize(&[vec![1.0, 2.0], vec![2.0]]).is_err());
        assert!(hankelize(&[]).is_err());
    }

    #[test]
    fn zero_frequency_of_constant() {
        let x = vec![3.25; 40];
        let pair = eigenpair(1, 8).unwrap();
        let z = component_series(&raw(&x), &pair).unwrap();
        assert!(z.iter().all(|v| (v - 3.25).abs() < 1e-13));
        let z = component_series_direct(&raw(&x), &pair).unwrap();
        assert!(z.iter().all(|v| (v - 3.25).abs() < 1e-13));
    }

    #[test]
    fn paths_agree() {
        let x: Vec<f64> = (0..57)
            .map(|t| (t as f64 * 0.37).sin() * 2.0 + (t as f64 * 1.3).cos() + 0.01 * t as f64)
            .collect();
        for l in [6usize, 7] {
            for k in 1..=num_frequencies(l) {
                let pair = eigenpair(k, l).unwrap();
                let a = component_series(&raw(&x), &pair).unwrap();
                let b = component_series_direct(&raw(&x), &pair).unwrap();
                let diff = a
                    .iter()
                    .zip(&b)
                    .fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
                assert!(diff < 1e-12, "L={l} k={k} diff={diff}");
            }
        }
    }

    #[test]
    fn constant_series_loads_on_first_column() {
        let dec = cissa(&[2.0; 30], 6, ExtensionMode::None).unwrap();
        assert_eq!(dec.num_frequencies(), 4);
        assert!(dec
            .component(1)
            .iter()
            .all(|v| (v - 2.0).abs() < 1e-10 * 2.0));
        for k in 2..=4 {
            assert!(dec.component(k).iter().all(|v| v.abs() < 1e-10 * 2.0));
        }
    }

    #[test]
    fn group_index_structure() {
        let g = frequency_groups(6);
        assert_eq!(g.len(), 4);
        assert_eq!(g[0].partner, None);
        assert_eq!(g[1].partner, Some(6));
        assert_eq!(g[2].partner, Some(5));
        assert_eq!(g[3].partner, None);
        let g = frequency_groups(7);
        assert_eq!(g.len(), 4);
        assert_eq!(g[3].partner, Some(5));
    }

    #[test]
    fn short_series_rejected() {
        assert!(matches!(
            cissa(&[1.0; 11], 3, ExtensionMode::None),
            Err(CissaError::Parameter(_))
        ));
        let err = cissa(&[1.0; 20], 10, ExtensionMode::None).unwrap_err();
        assert!(err.to_string().contains("1<L<T/2"));
    }
}
