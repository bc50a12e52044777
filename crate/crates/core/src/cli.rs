//! Command line front end: `decompose`, `group` and `run`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decompose::{cissa, Decomposition};
use crate::error::{CissaError, Result};
use crate::extension::ExtensionMode;
use crate::grouping::{group, GroupingResult, GroupingSpec};
use crate::io::{
    read_decomposition, read_series, write_decomposition, write_grouping, InputFormat, InputSpec,
};

/// Environment variable capping worker threads (0 or unset = automatic).
pub const THREADS_ENV: &str = "CISSA_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "cissa",
    version,
    about = "Circulant singular spectrum analysis of a time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose a series into per-frequency components and its psd.
    Decompose(DecomposeArgs),
    /// Group the components of a stored decomposition.
    Group(GroupArgs),
    /// Decompose and group in one pass.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Wav,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExtensionArg {
    Ar,
    Mirror,
    None,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    /// Input file (CSV or 16-bit PCM mono WAV).
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// 1-based CSV column.
    #[arg(long, default_value_t = 1)]
    column: usize,
    /// Treat the first CSV line as a header.
    #[arg(long, conflicts_with = "no_header")]
    header: bool,
    /// The first CSV line is data.
    #[arg(long)]
    no_header: bool,
    /// Take natural logs of the input.
    #[arg(long)]
    log: bool,
    /// Window length L, with 1 < L < T/2.
    #[arg(short = 'L', long = "window")]
    window: usize,
    /// Boundary extension.
    #[arg(long, value_enum, default_value = "ar")]
    extension: ExtensionArg,
    /// AR order for the ar extension (default floor(T/3)).
    #[arg(long)]
    ar_order: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GroupArgs {
    /// Directory written by `decompose`.
    #[arg(long)]
    decomposition: PathBuf,
    /// economic:S | manual:@FILE.json | manual:21;3-11 | share:X | percentile:Q
    #[arg(long, allow_hyphen_values = true)]
    spec: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    decompose: DecomposeArgs,
    /// Grouping spec, as for `group`.
    #[arg(long, allow_hyphen_values = true)]
    spec: String,
}

impl DecomposeArgs {
    fn input_spec(&self) -> InputSpec {
        let mut spec = InputSpec::new(&self.input);
        if let Some(f) = self.format {
            spec.format = match f {
                FormatArg::Csv => InputFormat::Csv,
                FormatArg::Wav => InputFormat::Wav,
            };
        }
        spec.column = self.column;
        spec.header = if self.header {
            Some(true)
        } else if self.no_header {
            Some(false)
        } else {
            None
        };
        spec.log_transform = self.log;
        spec
    }

    fn mode(&self) -> Result<ExtensionMode> {
        match (self.extension, self.ar_order) {
            (ExtensionArg::Ar, order) => {
                if order == Some(0) {
                    return Err(CissaError::param("--ar-order must be positive"));
                }
                Ok(ExtensionMode::Ar { order })
            }
            (_, Some(_)) => Err(CissaError::param(
                "--ar-order only applies to --extension ar",
            )),
            (ExtensionArg::Mirror, None) => Ok(ExtensionMode::Mirror),
            (ExtensionArg::None, None) => Ok(ExtensionMode::None),
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        CissaError::param(format!(
            "{THREADS_ENV} must be a non-negative integer, got '{raw}'"
        ))
    })?;
    if n > 0 {
        // a pool may already exist when embedded; keep it
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

fn do_decompose(args: &DecomposeArgs) -> Result<Decomposition> {
    let x = read_series(&args.input_spec())?;
    let mode = args.mode()?;
    let dec = cissa(&x, args.window, mode)?;
    write_decomposition(&dec, &args.out)?;
    println!(
        "decomposed T={} L={} F={} extension={}",
        dec.len(),
        dec.window(),
        dec.num_frequencies(),
        mode
    );
    let negative = dec.psd().negative_indices();
    if !negative.is_empty() {
        eprintln!(
            "warning: {} negative psd estimate(s), first at k={}",
            negative.len(),
            negative[0]
        );
    }
    Ok(dec)
}

fn do_group(dec: &Decomposition, spec: &str, out: &std::path::Path) -> Result<GroupingResult> {
    let spec = GroupingSpec::parse(spec)?;
    let result = group(dec, &spec)?;
    write_grouping(&result, out)?;
    for ((name, sh), ks) in result.names.iter().zip(&result.shares).zip(&result.indices) {
        println!("{name}: {:.1}% ({} components)", 100.0 * sh, ks.len());
    }
    Ok(result)
}

fn dispatch(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Decompose(args) => do_decompose(&args).map(|_| ()),
        Command::Group(args) => {
            let dec = read_decomposition(&args.decomposition)?;
            do_group(&dec, &args.spec, &args.out).map(|_| ())
        }
        Command::Run(args) => {
            let dec = do_decompose(&args.decompose)?;
            do_group(&dec, &args.spec, &args.decompose.out).map(|_| ())
        }
    }
}

/// Runs the tool on `argv` (including the program name) and returns the exit code:
/// 0 ok, 2 argument error, 3 input error, 4 numeric failure.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("error[ARG]: {first}");
            for line in rendered.lines().skip(1) {
                eprintln!("{line}");
            }
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.tag());
            e.exit_code()
        }
    }
}
