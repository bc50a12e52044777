//! Boundary extension applied before decomposition.
//!
//! Points near either end of the sample appear in few cells of the trajectory
//! matrix, so their reconstruction is averaged over few elements. Extending the
//! series by `L` points per side puts every original sample in the full-window
//! band of the diagonal averaging.

use std::fmt;
use std::str::FromStr;

use crate::error::{CissaError, Result};
use crate::spectral::{ensure_finite, validate_window};

/// How the series is extended at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionMode {
    /// AR forecast/backcast of the first differences, integrated back to levels.
    /// `order` overrides the default `floor(T/3)`.
    Ar { order: Option<usize> },
    /// Reflection about each endpoint.
    Mirror,
    /// No extension.
    None,
}

impl Default for ExtensionMode {
    fn default() -> Self {
        ExtensionMode::Ar { order: None }
    }
}

impl ExtensionMode {
    pub fn name(&self) -> &'static str {
        match self {
            ExtensionMode::Ar { .. } => "ar",
            ExtensionMode::Mirror => "mirror",
            ExtensionMode::None => "none",
        }
    }

    /// Points added on each side for a given window length.
    pub fn extension_len(&self, window: usize) -> usize {
        match self {
            ExtensionMode::None => 0,
            _ => window,
        }
    }
}

impl fmt::Display for ExtensionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtensionMode {
    type Err = CissaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ar" | "0" => Ok(ExtensionMode::Ar { order: None }),
            "mirror" | "1" => Ok(ExtensionMode::Mirror),
            "none" | "2" => Ok(ExtensionMode::None),
            other => Err(CissaError::param(format!(
                "unknown extension mode '{other}' (expected ar, mirror or none)"
            ))),
        }
    }
}

/// Default AR order for a series of length `T`.
pub fn default_ar_order(series_len: usize) -> usize {
    series_len / 3
}

/// A series padded on both sides; the original occupies `offset..offset+len`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedSeries {
    pub values: Vec<f64>,
    pub offset: usize,
    pub original_len: usize,
}

impl ExtendedSeries {
    pub fn original(&self) -> &[f64] {
        &self.values[self.offset..self.offset + self.original_len]
    }

    /// Cuts a series aligned with `values` down to the original sample range.
    pub fn trim<'a>(&self, aligned: &'a [f64]) -> &'a [f64] {
        &aligned[self.offset..self.offset + self.original_len]
    }
}

/// Extends `x` by `L` points per side (none for [`ExtensionMode::None`]).
pub fn extend(x: &[f64], window: usize, mode: ExtensionMode) -> Result<ExtendedSeries> {
    validate_window(x.len(), window)?;
    ensure_finite(x)?;
    let t = x.len();
    match mode {
        ExtensionMode::None => Ok(ExtendedSeries {
            values: x.to_vec(),
            offset: 0,
            original_len: t,
        }),
        ExtensionMode::Mirror => {
            let mut values = Vec::with_capacity(t + 2 * window);
            values.extend(x[..window].iter().rev());
            values.extend_from_slice(x);
            values.extend(x[t - window..].iter().rev());
            Ok(ExtendedSeries {
                values,
                offset: window,
                original_len: t,
            })
        }
        ExtensionMode::Ar { order } => {
            let p = order.unwrap_or_else(|| default_ar_order(t));
            let diffs: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
            if diffs.len() <= p + 1 {
                return Err(CissaError::param(format!(
                    "series of length {t} is too short for AR order {p}; lower it with the AR order override"
                )));
            }
            let model = fit_ar(&diffs, p)?;
            let ahead = forecast_ar(&diffs, &model, window)?;
            let behind = backcast_ar(&diffs, &model, window)?;

            let mut left = Vec::with_capacity(window);
            let mut level = x[0];
            for d in &behind {
                level -= d;
                left.push(level);
            }
            let mut values = Vec::with_capacity(t + 2 * window);
            values.extend(left.iter().rev());
            values.extend_from_slice(x);
            let mut level = x[t - 1];
            for d in &ahead {
                level += d;
                values.push(level);
            }
            if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
                let side = if pos < window { "left" } else { "right" };
                return Err(CissaError::numeric(format!(
                    "AR extension produced non-finite values at the {side} boundary"
                )));
            }
            Ok(ExtendedSeries {
                values,
                offset: window,
                original_len: t,
            })
        }
    }
}

/// A fitted AR(p) model on a demeaned series: `y_t = sum_i coefficients[i] * y_{t-1-i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArModel {
    pub coefficients: Vec<f64>,
    pub mean: f64,
}

impl ArModel {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }
}

/// Fits an AR(p) by the Burg recursion on the demeaned series.
///
/// Every reflection coefficient satisfies `|k| <= 1`, so the model is stable.
/// A zero-variance series yields all-zero coefficients.
pub fn fit_ar(d: &[f64], order: usize) -> Result<ArModel> {
    let n = d.len();
    if n <= order + 1 {
        return Err(CissaError::param(format!(
            "AR order {order} needs more than {} observations, got {n}",
            order + 1
        )));
    }
    ensure_finite(d)?;
    let mean = d.iter().sum::<f64>() / n as f64;
    let mut coefficients = vec![0.0; order];

    let mut fwd: Vec<f64> = d.iter().map(|v| v - mean).collect();
    let scale = d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let rms = (fwd.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
    if rms <= 16.0 * f64::EPSILON * scale {
        return Ok(ArModel { coefficients, mean });
    }
    let mut bwd = fwd.clone();
    let mut prev = vec![0.0; order];

    for m in 0..order {
        let mut num = 0.0;
        let mut den = 0.0;
        for t in m + 1..n {
            num += fwd[t] * bwd[t - 1];
            den += fwd[t] * fwd[t] + bwd[t - 1] * bwd[t - 1];
        }
        if den.is_nan() || den <= 0.0 {
            // residual is exactly zero: the model already predicts perfectly
            break;
        }
        let k = 2.0 * num / den;
        if !k.is_finite() {
            return Err(CissaError::numeric(format!(
                "Burg recursion broke down at stage {}",
                m + 1
            )));
        }
        prev[..m].copy_from_slice(&coefficients[..m]);
        for i in 0..m {
            coefficients[i] = prev[i] - k * prev[m - 1 - i];
        }
        coefficients[m] = k;
        for t in (m + 1..n).rev() {
            let f = fwd[t];
            let b = bwd[t - 1];
            fwd[t] = f - k * b;
            bwd[t] = b - k * f;
        }
    }
    Ok(ArModel { coefficients, mean })
}

/// `h` forecasts continuing `d`, seeded with its last `p` observations.
pub fn forecast_ar(d: &[f64], model: &ArModel, horizon: usize) -> Result<Vec<f64>> {
    let p = model.order();
    if d.len() < p {
        return Err(CissaError::param(format!(
            "AR({p}) forecast needs at least {p} observations, got {}",
            d.len()
        )));
    }
    let mut hist: Vec<f64> = d[d.len() - p..].iter().map(|v| v - model.mean).collect();
    hist.reserve(horizon);
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let last = hist.len();
        let y: f64 = model
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, a)| a * hist[last - 1 - i])
            .sum();
        hist.push(y);
        out.push(y + model.mean);
    }
    Ok(out)
}

/// `h` backcasts preceding `d`, nearest first: forecasting the reversed series.
pub fn backcast_ar(d: &[f64], model: &ArModel, horizon: usize) -> Result<Vec<f64>> {
    let reversed: Vec<f64> = d.iter().rev().copied().collect();
    forecast_ar(&reversed, model, horizon)
}
