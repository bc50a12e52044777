//! Circulant singular spectrum analysis.
//!
//! A series is embedded in a trajectory matrix whose lag-window second-moment
//! matrix is replaced by a circulant one. The circulant eigenvectors are the
//! Fourier vectors, so every elementary component belongs to a known frequency
//! `w_k = (k-1)/L` and the components add back up to the series exactly.
//!
//! ```
//! use cissa::{cissa, group, ExtensionMode, GroupingSpec};
//!
//! let x: Vec<f64> = (0..200)
//!     .map(|t| (2.0 * std::f64::consts::PI * t as f64 / 10.0).cos())
//!     .collect();
//! let dec = cissa(&x, 20, ExtensionMode::None).unwrap();
//! assert_eq!(dec.num_frequencies(), 11);
//! let r = group(&dec, &GroupingSpec::Manual(vec![vec![3]])).unwrap();
//! assert!(r.shares[0] > 0.99);
//! ```

pub mod cli;
pub mod decompose;
pub mod error;
pub mod extension;
pub mod grouping;
pub mod io;
pub mod reference;
pub mod spectral;

pub use decompose::{
    cissa, cissa_with_path, component_series, component_series_direct, frequency_groups, hankelize,
    Decomposition, FrequencyGroupIndex, ProjectionPath,
};
pub use error::{CissaError, Result};
pub use extension::{
    backcast_ar, extend, fit_ar, forecast_ar, ArModel, ExtendedSeries, ExtensionMode,
};
pub use grouping::{
    economic_bands, group, reconstruct_manual, select_by_cumulative_share, select_by_percentile,
    shares, EconomicBands, GroupingResult, GroupingSpec, ShareVector,
};
pub use spectral::{
    autocovariances, circulant_row, eigenpair, frequency, num_frequencies, psd,
    AutocovarianceVector, CirculantRow, FrequencyEigenpair, PsdVector,
};
