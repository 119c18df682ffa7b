//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage, 3 invalid parameter, 4 unreadable input or
//! unwritable output, 5 malformed market data, 6 computation failure.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::backtest::{
    run, sweep_commission, sweep_max_window, sweep_window, RunSpec, StrategyParams, StrategySpec, DEFAULT_ETA,
    DEFAULT_MAX_WINDOW, DEFAULT_SEED, DEFAULT_UNIVERSAL_SAMPLES,
};
use crate::error::{Error, Result};
use crate::market_data::{
    cover_gluss, load_prices, reverse_market, write_relatives, InputFormat, Loaded, MarketSequence,
};
use crate::portfolio::check_gamma;
use crate::report::{emit_report, metric_cells, Cell, ReportData, ReportFormat, ResultTable};

const STRATEGY_HELP: &str =
    "Strategy id: u-bah, best-stock, u-cbal, cbal-star, eg, universal, lz, anticor, anti1, anti2";

#[derive(Debug, Parser)]
#[command(name = "olps", version, about = "Online portfolio selection backtests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a price CSV into price relatives
    Convert(ConvertArgs),
    /// Reverse time and invert every relative
    Reverse(IoArgs),
    /// Run one strategy and print its final wealth and risk metrics
    Run(RunArgs),
    /// Final wealth as a function of one parameter
    Sweep {
        #[command(subcommand)]
        axis: SweepAxis,
    },
    /// Final wealth of several strategies on several markets
    Table(TableArgs),
    /// Generate a synthetic market
    Synth {
        #[command(subcommand)]
        kind: SynthKind,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    #[value(name = "csv-prices", alias = "prices")]
    Prices,
    #[value(name = "csv-relatives", alias = "relatives")]
    Relatives,
}

impl From<FormatArg> for InputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Prices => InputFormat::CsvPrices,
            FormatArg::Relatives => InputFormat::CsvRelatives,
        }
    }
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Input CSV path, or `-` for standard input
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "csv-relatives")]
    pub format: FormatArg,
    /// Output path; standard output when omitted
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StrategyArgs {
    /// ANTICOR window
    #[arg(long, default_value_t = 5)]
    pub w: usize,
    /// Largest window compounded by anti1 and anti2
    #[arg(long = "max-w", default_value_t = DEFAULT_MAX_WINDOW)]
    pub max_w: usize,
    /// EG learning rate
    #[arg(long, default_value_t = DEFAULT_ETA, allow_negative_numbers = true)]
    pub eta: f64,
    /// Monte Carlo samples for universal
    #[arg(long, default_value_t = DEFAULT_UNIVERSAL_SAMPLES)]
    pub samples: usize,
    /// Convergence tolerance for cbal-star
    #[arg(long, default_value_t = 1e-10, allow_negative_numbers = true)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl StrategyArgs {
    fn params(&self) -> StrategyParams {
        StrategyParams {
            w: self.w,
            max_w: self.max_w,
            eta: self.eta,
            samples: self.samples,
            tol: self.tol,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, help = STRATEGY_HELP)]
    pub strategy: String,
    #[command(flatten)]
    pub params: StrategyArgs,
    /// Proportional commission rate in [0, 1)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "csv-relatives")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "csv-relatives")]
    pub format: FormatArg,
    /// tsv, csv or svg-lines
    #[arg(long = "report-format", default_value = "tsv")]
    pub report_format: String,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SweepAxis {
    /// ANTICOR_w for w in FROM..=TO
    Window {
        #[command(flatten)]
        io: ReportArgs,
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_WINDOW)]
        to: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// ANTI1 over maximal windows FROM..=TO
    Maxwindow {
        #[command(flatten)]
        io: ReportArgs,
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_WINDOW)]
        to: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// Commission rates 0, STEP, ..., STEPS * STEP
    Commission {
        #[command(flatten)]
        io: ReportArgs,
        #[arg(long, default_value_t = 0.001, allow_negative_numbers = true)]
        step: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Comma-separated strategy ids
        #[arg(long, value_delimiter = ',', default_value = "anti1,anti2")]
        strategies: Vec<String>,
        #[command(flatten)]
        params: StrategyArgs,
    },
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Market CSV files; each becomes a column
    #[arg(long, short, num_args = 1.., required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "csv-relatives")]
    pub format: FormatArg,
    /// Also add a column for each reversed market
    #[arg(long)]
    pub reversed: bool,
    /// Comma-separated strategy ids; the full comparison suite when omitted
    #[arg(long, value_delimiter = ',')]
    pub strategies: Vec<String>,
    #[command(flatten)]
    pub params: StrategyArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Print annualized return, risk and Sharpe instead of final wealth
    #[arg(long)]
    pub metrics: bool,
    #[arg(long = "report-format", default_value = "tsv")]
    pub report_format: String,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SynthKind {
    /// Cash and a stock alternating between halving and doubling
    CoverGluss {
        #[arg(long)]
        days: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to `stderr`.
pub fn main<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{}", rendered.lines().next().unwrap_or("usage error")).and_then(|_| writeln!(stderr))
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Argument(_) | Error::UnknownFormat(_) => 3,
        Error::Io(_) => 4,
        Error::Parse { .. } | Error::Validation { .. } | Error::Dimension(_) => 5,
        Error::InsufficientHistory { .. } | Error::NonConvergence { .. } => 6,
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Convert(a) => {
            let x = match load_prices(open_input(&a.input)?, InputFormat::CsvPrices)? {
                Loaded::Prices(p) => p.to_relatives()?,
                Loaded::Relatives(x) => x,
            };
            with_output(a.output.as_deref(), stdout, |out| write_relatives(&x, out))
        }
        Command::Reverse(a) => {
            let x = read_market(&a.input, a.format)?;
            with_output(a.output.as_deref(), stdout, |out| {
                write_relatives(&reverse_market(&x), out)
            })
        }
        Command::Run(a) => {
            let spec = StrategySpec::parse(&a.strategy, &a.params.params())?;
            check_gamma(a.gamma)?;
            let x = read_market(&a.input, a.format)?;
            let run_spec = RunSpec::new(market_name(&a.input), spec.clone())
                .with_gamma(a.gamma)
                .with_seed(a.params.seed);
            let out = run(&run_spec, &x)?;
            let r = out.report;
            writeln!(stdout, "# seed: {}", a.params.seed)?;
            writeln!(stdout, "strategy\t{}", spec.label())?;
            writeln!(stdout, "days\t{}", x.n_days())?;
            writeln!(stdout, "gamma\t{}", a.gamma)?;
            writeln!(stdout, "final_wealth\t{}", out.trace.wealth.final_wealth())?;
            writeln!(stdout, "annualized_return\t{}", r.annualized_return)?;
            writeln!(stdout, "annualized_risk\t{}", r.annualized_risk)?;
            match r.sharpe {
                Some(s) => writeln!(stdout, "sharpe\t{s}")?,
                None => writeln!(stdout, "sharpe\tundefined")?,
            }
            Ok(())
        }
        Command::Sweep { axis } => sweep(axis, stdout),
        Command::Table(a) => table(a, stdout),
        Command::Synth {
            kind: SynthKind::CoverGluss { days, output },
        } => {
            let x = cover_gluss(days)?;
            with_output(output.as_deref(), stdout, |out| write_relatives(&x, out))
        }
    }
}

fn sweep(axis: SweepAxis, stdout: &mut dyn Write) -> Result<()> {
    let (io, result) = match axis {
        SweepAxis::Window { io, from, to, gamma } => {
            let fmt: ReportFormat = io.report_format.parse()?;
            let windows = int_range(from, to)?;
            check_gamma(gamma)?;
            let x = read_market(&io.input, io.format)?;
            ((io, fmt), sweep_window(&x, &windows, gamma)?)
        }
        SweepAxis::Maxwindow { io, from, to, gamma } => {
            let fmt: ReportFormat = io.report_format.parse()?;
            let windows = int_range(from, to)?;
            check_gamma(gamma)?;
            let x = read_market(&io.input, io.format)?;
            ((io, fmt), sweep_max_window(&x, &windows, gamma)?)
        }
        SweepAxis::Commission {
            io,
            step,
            steps,
            strategies,
            params,
        } => {
            let fmt: ReportFormat = io.report_format.parse()?;
            if step.is_nan() || step <= 0.0 {
                return Err(Error::Argument(format!("commission step must be positive, got {step}")));
            }
            // rounded so that e.g. 9 * 0.001 prints as 0.009
            let gammas: Vec<f64> = (0..=steps).map(|k| (k as f64 * step * 1e12).round() / 1e12).collect();
            for &g in &gammas {
                check_gamma(g)?;
            }
            let specs = parse_strategies(&strategies, &params.params())?;
            let x = read_market(&io.input, io.format)?;
            ((io, fmt), sweep_commission(&x, &gammas, &specs)?)
        }
    };
    let (io, fmt) = io;
    with_output(io.output.as_deref(), stdout, |out| {
        emit_report(&ReportData::Sweep(result), fmt, out)
    })
}

fn table(a: TableArgs, stdout: &mut dyn Write) -> Result<()> {
    let fmt: ReportFormat = a.report_format.parse()?;
    check_gamma(a.gamma)?;
    let params = a.params.params();
    let specs = if a.strategies.is_empty() {
        let mut suite = StrategySpec::suite();
        for s in &mut suite {
            *s = StrategySpec::parse(s.id(), &params)?;
        }
        suite
    } else {
        parse_strategies(&a.strategies, &params)?
    };

    let mut markets = Vec::new();
    for path in &a.input {
        let x = read_market(path, a.format)?;
        let name = market_name(path);
        let reversed = a.reversed.then(|| (format!("{name}-reversed"), reverse_market(&x)));
        markets.push((name, x));
        markets.extend(reversed);
    }

    let mut columns = Vec::new();
    for (name, _) in &markets {
        if a.metrics {
            columns.push(format!("{name} return ± risk"));
            columns.push(format!("{name} sharpe"));
        } else {
            columns.push(name.clone());
        }
    }
    let mut t = ResultTable::new("Algorithm", columns);
    t.notes.push(format!("seed: {}", a.params.seed));
    t.notes.push(format!("gamma: {}", a.gamma));
    for spec in &specs {
        let mut cells = Vec::new();
        for (name, x) in &markets {
            let run_spec = RunSpec::new(name.clone(), spec.clone())
                .with_gamma(a.gamma)
                .with_seed(a.params.seed);
            let out = run(&run_spec, x)?;
            if a.metrics {
                let (ret, sharpe) = metric_cells(&out.report);
                cells.push(Cell::Text(ret));
                cells.push(Cell::Text(sharpe));
            } else {
                cells.push(Cell::Value(out.trace.wealth.final_wealth()));
            }
        }
        t.push_row(spec.label(), cells);
    }
    with_output(a.output.as_deref(), stdout, |out| {
        emit_report(&ReportData::Table(t), fmt, out)
    })
}

fn parse_strategies(ids: &[String], params: &StrategyParams) -> Result<Vec<StrategySpec>> {
    if ids.is_empty() {
        return Err(Error::Argument("no strategies given".into()));
    }
    ids.iter().map(|id| StrategySpec::parse(id.trim(), params)).collect()
}

fn int_range(from: usize, to: usize) -> Result<Vec<usize>> {
    if from < 2 || to < from {
        return Err(Error::Argument(format!(
            "window range {from}..={to} must satisfy 2 <= from <= to"
        )));
    }
    Ok((from..=to).collect())
}

fn market_name(path: &Path) -> String {
    if path.as_os_str() == "-" {
        return "stdin".into();
    }
    path.file_stem()
        .map_or_else(|| "market".into(), |s| s.to_string_lossy().into_owned())
}

fn open_input(path: &Path) -> Result<Box<dyn Read>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(io::stdin().lock()));
    }
    let f = File::open(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok(Box::new(BufReader::new(f)))
}

fn read_market(path: &Path, format: FormatArg) -> Result<MarketSequence> {
    load_prices(open_input(path)?, format.into())?.into_market()
}

fn with_output<F>(path: Option<&Path>, stdout: &mut dyn Write, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}
