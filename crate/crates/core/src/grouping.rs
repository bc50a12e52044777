//! Regrouping of frequency components into signals.
//!
//! Four strategies: fixed economic bands (trend, business cycle, seasonal),
//! user-supplied index sets, the smallest set of frequencies reaching a target
//! share of the spectrum, and the frequencies whose psd exceeds a percentile.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::decompose::Decomposition;
use crate::error::{CissaError, Result};
use crate::spectral::{is_self_conjugate, PsdVector};

/// How to cluster the `F` frequency components.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupingSpec {
    /// Trend, business cycle and seasonal bands for `per_year` observations a year.
    Economic { per_year: usize },
    /// Explicit disjoint sets of 1-based frequency indices.
    Manual(Vec<Vec<usize>>),
    /// Largest-share frequencies until the cumulative share reaches the target in (0, 1).
    CumulativeShare(f64),
    /// Frequencies whose psd exceeds the given percentile in (0, 1).
    PsdPercentile(f64),
}

impl GroupingSpec {
    /// Parses the command-line form: `economic:12`, `manual:@groups.json`,
    /// `manual:21;3-11`, `share:0.80`, `percentile:0.95`, or a bare number
    /// (positive integer = economic, (0,1) = share, (-1,0) = percentile).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let Some((kind, arg)) = text.split_once(':') else {
            return Self::from_number(text);
        };
        let arg = arg.trim();
        match kind.trim().to_ascii_lowercase().as_str() {
            "economic" => {
                let per_year = arg.parse::<usize>().map_err(|_| {
                    CissaError::param(format!(
                        "economic spec needs a positive integer, got '{arg}'"
                    ))
                })?;
                if per_year == 0 {
                    return Err(CissaError::param("observations per year must be positive"));
                }
                Ok(GroupingSpec::Economic { per_year })
            }
            "manual" => {
                if let Some(path) = arg.strip_prefix('@') {
                    read_manual_groups(Path::new(path)).map(GroupingSpec::Manual)
                } else {
                    parse_inline_groups(arg).map(GroupingSpec::Manual)
                }
            }
            "share" => parse_unit(arg, "share").map(GroupingSpec::CumulativeShare),
            "percentile" => parse_unit(arg, "percentile").map(GroupingSpec::PsdPercentile),
            other => Err(CissaError::param(format!(
                "unknown grouping '{other}' (expected economic, manual, share or percentile)"
            ))),
        }
    }

    fn from_number(text: &str) -> Result<Self> {
        let v: f64 = text
            .parse()
            .map_err(|_| CissaError::param(format!("cannot parse grouping spec '{text}'")))?;
        if v >= 1.0 && v.fract() == 0.0 {
            Ok(GroupingSpec::Economic {
                per_year: v as usize,
            })
        } else if v > 0.0 && v < 1.0 {
            Ok(GroupingSpec::CumulativeShare(v))
        } else if v > -1.0 && v < 0.0 {
            Ok(GroupingSpec::PsdPercentile(-v))
        } else {
            Err(CissaError::param(format!(
                "numeric grouping spec {v} is not a positive integer or in (-1,0) or (0,1)"
            )))
        }
    }

    /// Column labels used when writing results.
    pub fn group_names(&self, groups: usize) -> Vec<String> {
        match self {
            GroupingSpec::Economic { .. } => {
                vec!["trend".into(), "cycle".into(), "seasonal".into()]
            }
            GroupingSpec::CumulativeShare(_) => vec!["share".into()],
            GroupingSpec::PsdPercentile(_) => vec!["percentile".into()],
            GroupingSpec::Manual(_) => (1..=groups).map(|g| format!("group{g}")).collect(),
        }
    }
}

impl FromStr for GroupingSpec {
    type Err = CissaError;

    fn from_str(s: &str) -> Result<Self> {
        GroupingSpec::parse(s)
    }
}

impl fmt::Display for GroupingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupingSpec::Economic { per_year } => write!(f, "economic:{per_year}"),
            GroupingSpec::Manual(groups) => {
                let parts: Vec<String> = groups
                    .iter()
                    .map(|g| {
                        g.iter()
                            .map(|k| k.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                write!(f, "manual:{}", parts.join(";"))
            }
            GroupingSpec::CumulativeShare(x) => write!(f, "share:{x}"),
            GroupingSpec::PsdPercentile(q) => write!(f, "percentile:{q}"),
        }
    }
}

fn parse_unit(arg: &str, what: &str) -> Result<f64> {
    let v: f64 = arg
        .parse()
        .map_err(|_| CissaError::param(format!("{what} needs a number in (0,1), got '{arg}'")))?;
    if !(v > 0.0 && v < 1.0) {
        return Err(CissaError::param(format!(
            "{what} must lie in (0,1), got {v}"
        )));
    }
    Ok(v)
}

/// `21;3-11;4,6` style groups.
fn parse_inline_groups(arg: &str) -> Result<Vec<Vec<usize>>> {
    let bad = |tok: &str| CissaError::param(format!("bad frequency index '{tok}' in manual spec"));
    arg.split(';')
        .map(|group| {
            let mut ks = Vec::new();
            for tok in group.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                if let Some((a, b)) = tok.split_once('-') {
                    let a: usize = a.trim().parse().map_err(|_| bad(tok))?;
                    let b: usize = b.trim().parse().map_err(|_| bad(tok))?;
                    if a > b {
                        return Err(bad(tok));
                    }
                    ks.extend(a..=b);
                } else {
                    ks.push(tok.parse().map_err(|_| bad(tok))?);
                }
            }
            Ok(ks)
        })
        .collect()
}

/// Reads a JSON array of index arrays, e.g. `[[21], [3,4,5,6,7,8,9,10,11]]`.
pub fn read_manual_groups(path: &Path) -> Result<Vec<Vec<usize>>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CissaError::input(format!("cannot read groups file {}: {e}", path.display()))
    })?;
    serde_json::from_str(&text).map_err(|e| {
        CissaError::input(format!(
            "groups file {} is not a list of index lists: {e}",
            path.display()
        ))
    })
}

/// Fraction of total spectral mass at each of the `F` frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareVector(Vec<f64>);

impl ShareVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Share at 1-based index `k`.
    pub fn get(&self, k: usize) -> f64 {
        self.0[k - 1]
    }

    pub fn sum_over(&self, ks: &[usize]) -> f64 {
        ks.iter().map(|&k| self.get(k)).sum()
    }
}

/// `sh_1 = lambda_1 / sum`, `sh_k = 2 lambda_k / sum` for paired `k`, Nyquist counted once.
pub fn shares(psd: &PsdVector) -> Result<ShareVector> {
    let total = psd.total();
    if total.is_nan() || total <= 0.0 {
        return Err(CissaError::numeric(format!(
            "total spectral mass {total:e} is not positive; shares undefined"
        )));
    }
    let l = psd.window();
    Ok(ShareVector(
        (1..=psd.num_frequencies())
            .map(|k| {
                let w = if is_self_conjugate(k, l) { 1.0 } else { 2.0 };
                w * psd.get(k) / total
            })
            .collect(),
    ))
}

/// Index sets of the three economic signals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EconomicBands {
    pub trend: Vec<usize>,
    pub cycle: Vec<usize>,
    pub seasonal: Vec<usize>,
}

/// Trend: periods above 8 years. Cycle: periods from 1.5 to 8 years, both ends
/// included. Seasonal: the harmonics `j/s`, `j = 1..floor(s/2)`.
pub fn economic_bands(window: usize, per_year: usize) -> Result<EconomicBands> {
    if per_year == 0 {
        return Err(CissaError::param("observations per year must be positive"));
    }
    if !window.is_multiple_of(per_year) {
        return Err(CissaError::param(format!(
            "economic grouping requires L to be a multiple of the observations per year (L={window}, s={per_year})"
        )));
    }
    if window < 2 * per_year {
        return Err(CissaError::param(format!(
            "economic grouping requires L >= 2s (L={window}, s={per_year})"
        )));
    }
    let f = window / 2 + 1;
    // w = (k-1)/L compared against 1/(8s) and 1/(1.5s) in integer arithmetic
    let lag = |k: usize| k - 1;
    let trend = (1..=f)
        .filter(|&k| 8 * per_year * lag(k) < window)
        .collect();
    let cycle = (1..=f)
        .filter(|&k| 8 * per_year * lag(k) >= window && 3 * per_year * lag(k) <= 2 * window)
        .collect();
    let seasonal = (1..=per_year / 2)
        .map(|j| j * window / per_year + 1)
        .collect();
    Ok(EconomicBands {
        trend,
        cycle,
        seasonal,
    })
}

/// Frequencies sorted by share descending (ties by ascending `k`), cut at the
/// shortest prefix whose cumulative share reaches `target`.
pub fn select_by_cumulative_share(shares: &ShareVector, target: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=shares.values().len()).collect();
    order.sort_by(|&a, &b| shares.get(b).total_cmp(&shares.get(a)));
    let mut acc = 0.0;
    let mut out = Vec::new();
    for k in order {
        out.push(k);
        acc += shares.get(k);
        if acc >= target {
            break;
        }
    }
    out
}

/// Frequencies whose psd is strictly above the nearest-rank `ceil(q F)`-th
/// smallest of the `F` frequency-level values. Returned in ascending `k`.
pub fn select_by_percentile(psd: &PsdVector, q: f64) -> Result<Vec<usize>> {
    if !(q > 0.0 && q < 1.0) {
        return Err(CissaError::param(format!(
            "percentile must lie in (0,1), got {q}"
        )));
    }
    let f = psd.num_frequencies();
    let values: Vec<f64> = (1..=f).map(|k| psd.get(k)).collect();
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    // absorb representation error when q*F is mathematically an integer
    let rank = ((q * f as f64 - 1e-9).ceil() as usize).clamp(1, f);
    let threshold = sorted[rank - 1];
    let picked: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > threshold)
        .map(|(i, _)| i + 1)
        .collect();
    if picked.is_empty() {
        return Err(CissaError::param(format!(
            "percentile {q} selects no frequency (threshold {threshold:e} is the maximum)"
        )));
    }
    Ok(picked)
}

/// Grouped signals with their spectral shares and member indices.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupingResult {
    /// One reconstructed series per group.
    pub series: Vec<Vec<f64>>,
    /// Share of total psd per group, as a fraction.
    pub shares: Vec<f64>,
    /// Member frequency indices per group.
    pub indices: Vec<Vec<usize>>,
    pub names: Vec<String>,
}

impl GroupingResult {
    pub fn num_groups(&self) -> usize {
        self.series.len()
    }
}

/// Clusters the components of `dec` according to `spec`.
pub fn group(dec: &Decomposition, spec: &GroupingSpec) -> Result<GroupingResult> {
    let indices = match spec {
        GroupingSpec::Economic { per_year } => {
            let b = economic_bands(dec.window(), *per_year)?;
            vec![b.trend, b.cycle, b.seasonal]
        }
        GroupingSpec::Manual(groups) => {
            validate_manual(groups, dec.num_frequencies())?;
            groups.clone()
        }
        GroupingSpec::CumulativeShare(x) => {
            if !(*x > 0.0 && *x < 1.0) {
                return Err(CissaError::param(format!(
                    "share must lie in (0,1), got {x}"
                )));
            }
            vec![select_by_cumulative_share(&shares(dec.psd())?, *x)]
        }
        GroupingSpec::PsdPercentile(q) => vec![select_by_percentile(dec.psd(), *q)?],
    };
    let sh = shares(dec.psd())?;
    let names = spec.group_names(indices.len());
    Ok(assemble(dec, &sh, indices, names))
}

/// Manual grouping with default names `group1..groupG`.
pub fn reconstruct_manual(
    dec: &Decomposition,
    index_sets: &[Vec<usize>],
) -> Result<GroupingResult> {
    group(dec, &GroupingSpec::Manual(index_sets.to_vec()))
}

fn validate_manual(groups: &[Vec<usize>], f: usize) -> Result<()> {
    if groups.is_empty() {
        return Err(CissaError::param(
            "manual grouping needs at least one group",
        ));
    }
    let mut seen = BTreeSet::new();
    for (g, ks) in groups.iter().enumerate() {
        if ks.is_empty() {
            return Err(CissaError::param(format!(
                "manual group {} is empty",
                g + 1
            )));
        }
        for &k in ks {
            if k == 0 || k > f {
                return Err(CissaError::param(format!(
                    "frequency index {k} in group {} is outside 1..={f}",
                    g + 1
                )));
            }
            if !seen.insert(k) {
                return Err(CissaError::param(format!(
                    "frequency index {k} appears in more than one place; groups must be disjoint"
                )));
            }
        }
    }
    Ok(())
}

fn assemble(
    dec: &Decomposition,
    sh: &ShareVector,
    indices: Vec<Vec<usize>>,
    names: Vec<String>,
) -> GroupingResult {
    let t = dec.len();
    let series = indices
        .iter()
        .map(|ks| {
            let mut col = vec![0.0; t];
            for &k in ks {
                col.iter_mut()
                    .zip(dec.component(k))
                    .for_each(|(c, v)| *c += v);
            }
            col
        })
        .collect();
    let shares = indices.iter().map(|ks| sh.sum_over(ks)).collect();
    GroupingResult {
        series,
        shares,
        indices,
        names,
    }
}
