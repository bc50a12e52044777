//! Reading input series (CSV, 16-bit PCM WAV) and writing results as CSV + JSON.
//!
//! Every floating-point value is written with 17 significant digits (C `%.17g`),
//! which round-trips an `f64` exactly.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::decompose::Decomposition;
use crate::error::{CissaError, Result};
use crate::extension::ExtensionMode;
use crate::grouping::GroupingResult;
use crate::spectral::{frequency, PsdVector};

pub const COMPONENTS_FILE: &str = "components.csv";
pub const PSD_FILE: &str = "psd.csv";
pub const META_FILE: &str = "meta.json";
pub const GROUPS_FILE: &str = "groups.csv";
pub const SHARES_FILE: &str = "shares.csv";
pub const KG_FILE: &str = "kg.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Wav,
}

impl InputFormat {
    /// `.wav` (any case) is WAV, everything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("wav") => InputFormat::Wav,
            _ => InputFormat::Csv,
        }
    }
}

/// Where and how to read a series.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    pub path: PathBuf,
    pub format: InputFormat,
    /// 1-based CSV column.
    pub column: usize,
    /// `None` detects a header from a non-numeric first line.
    pub header: Option<bool>,
    /// Apply the natural log to every sample.
    pub log_transform: bool,
}

impl InputSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        InputSpec {
            format: InputFormat::from_path(&path),
            path,
            column: 1,
            header: None,
            log_transform: false,
        }
    }
}

pub fn read_series(spec: &InputSpec) -> Result<Vec<f64>> {
    let raw = match spec.format {
        InputFormat::Csv => {
            let text = fs::read_to_string(&spec.path).map_err(|e| {
                CissaError::input(format!("cannot read {}: {e}", spec.path.display()))
            })?;
            parse_csv_column(&text, spec.column, spec.header)?
        }
        InputFormat::Wav => read_wav(&spec.path)?,
    };
    if spec.log_transform {
        log_transform(raw)
    } else {
        Ok(raw)
    }
}

fn log_transform(values: Vec<f64>) -> Result<Vec<f64>> {
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            if v > 0.0 {
                Ok(v.ln())
            } else {
                Err(CissaError::input(format!(
                    "log transform needs positive values; sample {} is {v}",
                    i + 1
                )))
            }
        })
        .collect()
}

/// Extracts one column of numbers from CSV text.
pub fn parse_csv_column(text: &str, column: usize, header: Option<bool>) -> Result<Vec<f64>> {
    if column == 0 {
        return Err(CissaError::param("CSV column index is 1-based"));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CissaError::input(format!("CSV error: {e}")))?;
        let line = record.position().map_or(idx as u64 + 1, |p| p.line());
        if idx == 0 && header == Some(true) {
            continue;
        }
        let field = record
            .get(column - 1)
            .ok_or_else(|| CissaError::input(format!("line {line}: no column {column}")))?;
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            Ok(v) => {
                return Err(CissaError::input(format!(
                    "line {line}: non-finite value {v}"
                )))
            }
            Err(_) if idx == 0 && header.is_none() => continue,
            Err(_) => {
                return Err(CissaError::input(format!(
                    "line {line}: cannot parse '{field}' as a number"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(CissaError::input("input contains no numeric samples"));
    }
    Ok(out)
}

/// Mono 16-bit PCM, scaled to [-1, 1) by 1/32768.
pub fn read_wav(path: &Path) -> Result<Vec<f64>> {
    let reader = hound::WavReader::open(path)
        .map_err(|e| CissaError::input(format!("cannot read WAV {}: {e}", path.display())))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(CissaError::input(format!(
            "WAV has {} channels; only mono is supported",
            spec.channels
        )));
    }
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(CissaError::input(format!(
            "unsupported WAV encoding ({:?}, {} bits); only 16-bit PCM is supported",
            spec.sample_format, spec.bits_per_sample
        )));
    }
    reader
        .into_samples::<i16>()
        .enumerate()
        .map(|(i, s)| {
            s.map(|v| f64::from(v) / 32768.0)
                .map_err(|e| CissaError::input(format!("WAV sample {}: {e}", i + 1)))
        })
        .collect()
}

/// C-style `%.17g`.
pub fn format_g17(v: f64) -> String {
    const PRECISION: i32 = 17;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let mantissa = strip_fraction_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        strip_fraction_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_fraction_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Sidecar metadata written next to the component files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(rename = "T")]
    pub series_len: usize,
    #[serde(rename = "L")]
    pub window: usize,
    #[serde(rename = "F")]
    pub frequencies: usize,
    pub extension: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ar_order: Option<usize>,
    /// 1-based `k` whose psd estimate is negative.
    #[serde(default)]
    pub negative_psd: Vec<usize>,
    pub version: String,
}

impl Meta {
    pub fn for_decomposition(dec: &Decomposition) -> Self {
        let ar_order = match dec.mode() {
            ExtensionMode::Ar { order } => {
                Some(order.unwrap_or_else(|| crate::extension::default_ar_order(dec.len())))
            }
            _ => None,
        };
        Meta {
            series_len: dec.len(),
            window: dec.window(),
            frequencies: dec.num_frequencies(),
            extension: dec.mode().name().to_string(),
            ar_order,
            negative_psd: dec.psd().negative_indices(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn mode(&self) -> Result<ExtensionMode> {
        Ok(match self.extension.parse()? {
            ExtensionMode::Ar { .. } => ExtensionMode::Ar {
                order: self.ar_order,
            },
            m => m,
        })
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(dir.join(name))?))
}

/// Writes `components.csv`, `psd.csv` and `meta.json` into `dir`.
pub fn write_decomposition(dec: &Decomposition, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let l = dec.window();

    let mut out = create(dir, COMPONENTS_FILE)?;
    let header: Vec<String> = (1..=dec.num_frequencies())
        .map(|k| format!("k={k} (w={:.6})", frequency(k, l)))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    let mut line = String::new();
    for t in 0..dec.len() {
        line.clear();
        for (i, c) in dec.components().iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format_g17(c[t]));
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;

    let mut out = create(dir, PSD_FILE)?;
    writeln!(out, "k,w,lambda")?;
    for (i, v) in dec.psd().values().iter().enumerate() {
        let k = i + 1;
        writeln!(
            out,
            "{k},{},{}",
            format_g17(frequency(k, l)),
            format_g17(*v)
        )?;
    }
    out.flush()?;

    let meta = serde_json::to_string_pretty(&Meta::for_decomposition(dec))
        .map_err(|e| CissaError::numeric(format!("cannot serialize metadata: {e}")))?;
    fs::write(dir.join(META_FILE), meta + "\n")?;
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| CissaError::input(format!("cannot read {}: {e}", path.display())))
}

fn parse_number(field: &str, file: &str, line: usize) -> Result<f64> {
    field.trim().parse().map_err(|_| {
        CissaError::input(format!(
            "{file} line {line}: cannot parse '{field}' as a number"
        ))
    })
}

/// Loads a decomposition previously written by [`write_decomposition`].
pub fn read_decomposition(dir: &Path) -> Result<Decomposition> {
    let meta: Meta = serde_json::from_str(&read_text(&dir.join(META_FILE))?)
        .map_err(|e| CissaError::input(format!("{META_FILE}: {e}")))?;

    let psd_text = read_text(&dir.join(PSD_FILE))?;
    let mut lambda = Vec::with_capacity(meta.window);
    for (i, row) in psd_text.lines().enumerate().skip(1) {
        if row.trim().is_empty() {
            continue;
        }
        let field = row.split(',').nth(2).ok_or_else(|| {
            CissaError::input(format!("{PSD_FILE} line {}: expected k,w,lambda", i + 1))
        })?;
        lambda.push(parse_number(field, PSD_FILE, i + 1)?);
    }
    if lambda.len() != meta.window {
        return Err(CissaError::input(format!(
            "{PSD_FILE} has {} rows but meta.json says L={}",
            lambda.len(),
            meta.window
        )));
    }

    let comp_text = read_text(&dir.join(COMPONENTS_FILE))?;
    let mut columns = vec![Vec::with_capacity(meta.series_len); meta.frequencies];
    for (i, row) in comp_text.lines().enumerate().skip(1) {
        if row.trim().is_empty() {
            continue;
        }
        let mut n = 0;
        for (col, field) in columns.iter_mut().zip(row.split(',')) {
            col.push(parse_number(field, COMPONENTS_FILE, i + 1)?);
            n += 1;
        }
        if n != meta.frequencies || row.split(',').count() != meta.frequencies {
            return Err(CissaError::input(format!(
                "{COMPONENTS_FILE} line {}: expected {} columns",
                i + 1,
                meta.frequencies
            )));
        }
    }
    if columns[0].len() != meta.series_len {
        return Err(CissaError::input(format!(
            "{COMPONENTS_FILE} has {} rows but meta.json says T={}",
            columns[0].len(),
            meta.series_len
        )));
    }
    Decomposition::from_parts(columns, PsdVector::from_values(lambda)?, meta.mode()?)
}

#[derive(Serialize)]
struct GroupMembers<'a> {
    group: &'a str,
    k: &'a [usize],
}

/// Writes `groups.csv`, `shares.csv` (fraction and percent) and `kg.json`.
pub fn write_grouping(result: &GroupingResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut out = create(dir, GROUPS_FILE)?;
    writeln!(out, "{}", result.names.join(","))?;
    let t = result.series.first().map_or(0, Vec::len);
    for i in 0..t {
        let row: Vec<String> = result.series.iter().map(|c| format_g17(c[i])).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;

    let mut out = create(dir, SHARES_FILE)?;
    writeln!(out, "group,share,percent")?;
    for (name, sh) in result.names.iter().zip(&result.shares) {
        writeln!(out, "{name},{},{:.1}", format_g17(*sh), 100.0 * sh)?;
    }
    out.flush()?;

    let members: Vec<GroupMembers> = result
        .names
        .iter()
        .zip(&result.indices)
        .map(|(group, k)| GroupMembers { group, k })
        .collect();
    let json = serde_json::to_string_pretty(&members)
        .map_err(|e| CissaError::numeric(format!("cannot serialize kg: {e}")))?;
    fs::write(dir.join(KG_FILE), json + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_plain_and_header() {
        assert_eq!(
            parse_csv_column("1\n2\n3\n", 1, None).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        assert_eq!(
            parse_csv_column("value\n1.5\n-2\n", 1, None).unwrap(),
            vec![1.5, -2.0]
        );
        assert_eq!(
            parse_csv_column("date,value\n2020-01,4\n2020-02,5\n", 2, None).unwrap(),
            vec![4.0, 5.0]
        );
        assert!(parse_csv_column("value\n1\n", 1, Some(false)).is_err());
        assert_eq!(
            parse_csv_column("9\n1\n", 1, Some(true)).unwrap(),
            vec![1.0]
        );
    }

    #[test]
    fn csv_error_names_line() {
        let err = parse_csv_column("1\n2\nabc\n", 1, None).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_csv_column("1\nNaN\n", 1, None).is_err());
        assert!(parse_csv_column("1,2\n3\n", 2, None).is_err());
    }

    #[test]
    fn log_rejects_nonpositive() {
        assert!(log_transform(vec![1.0, 0.0]).is_err());
        assert_eq!(log_transform(vec![1.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn g17_matches_c() {
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(-2.5), "-2.5");
        assert_eq!(format_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(format_g17(123456.0), "123456");
        assert_eq!(format_g17(1e17), "1e+17");
        assert_eq!(format_g17(0.0001), "0.0001");
        assert_eq!(format_g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_g17(0.0), "0");
    }

    #[test]
    fn wav_scaling_and_rejections() {
        let dir = tempfile::tempdir().unwrap();
        let mono = dir.path().join("m.wav");
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: 8000,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(&mono, spec).unwrap();
        for s in [0i16, 16384, -32768] {
            w.write_sample(s).unwrap();
        }
        w.finalize().unwrap();
        assert_eq!(read_wav(&mono).unwrap(), vec![0.0, 0.5, -1.0]);

        let stereo = dir.path().join("s.wav");
        let mut w = hound::WavWriter::create(
            &stereo,
            hound::WavSpec {
                channels: 2,
                ..spec
            },
        )
        .unwrap();
        w.write_sample(1i16).unwrap();
        w.write_sample(1i16).unwrap();
        w.finalize().unwrap();
        assert!(matches!(read_wav(&stereo), Err(CissaError::Input(_))));

        let float = dir.path().join("f.wav");
        let fspec = hound::WavSpec {
            bits_per_sample: 32,
            sample_format: hound::SampleFormat::Float,
            ..spec
        };
        let mut w = hound::WavWriter::create(&float, fspec).unwrap();
        w.write_sample(0.5f32).unwrap();
        w.finalize().unwrap();
        assert!(read_wav(&float).is_err());
    }
}
