#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod expr;
mod plot;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nondiophantine::cosmology::{friedman_comparison, FriedmanConfig};
use nondiophantine::fields::{beta_curve, BetaKind};
use nondiophantine::selftest::{self, SelfTestOptions};
use nondiophantine::spacetime::{lightcone_surface, Axis, FourVector, GridSpec, Variance};
use nondiophantine::table::TableError;
use nondiophantine::{Bijection, Execution, SeriesTable};

#[derive(Parser, Debug)]
#[command(name = "nondio", version, about = "Non-Diophantine arithmetic, light cones and scale factors")]
struct Cli {
    /// Bijection: id | pow:p=3 | fechner:mu=10,nu=-20 | tan:L=1 | artanh:L=1
    #[arg(long = "f", global = true, default_value = "id")]
    bijection: String,

    /// Run grid computations on a single thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression such as "1 (+) 1" in the upper arithmetic.
    Ops {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Light-cone surfaces X0(X1, X2) through an apex.
    Lightcone {
        /// Apex Y0,Y1,Y2[,Y3]; `0p` and `one` name the neutral elements.
        #[arg(long, default_value = "0p,0p,0p", allow_hyphen_values = true)]
        apex: String,
        #[arg(long, allow_hyphen_values = true)]
        x1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        x2: Option<String>,
        /// Samples per axis.
        #[arg(long, default_value_t = 101)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Apparent velocity of a static charge.
    Beta {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long = "L", default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 10_001)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Matter-dominated scale factor against the classical (t/t0)^(2/3).
    Friedman {
        #[arg(long = "T0", default_value = "one", allow_hyphen_values = true)]
        reference: String,
        /// Classical reference time; defaults to matching the curves at T0.
        #[arg(long = "t0", allow_hyphen_values = true)]
        classical_reference: Option<f64>,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, requires = "t_max")]
        t_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "t_min")]
        t_max: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Axiom, calculus, boost, light-cone, beta and scale-factor checks.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random triples per bijection in the axiom suite.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
    },
}

#[derive(clap::Args, Debug)]
struct Output {
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a matplotlib script next to the CSV.
    #[arg(long)]
    plot_script: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Tan,
    Artanh,
    Fechner,
}

enum Failure {
    SelfTest,
    Parameter(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::SelfTest => 1,
            Failure::Parameter(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<nondiophantine::Error> for Failure {
    fn from(e: nondiophantine::Error) -> Self {
        Failure::Parameter(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<TableError> for Failure {
    fn from(e: TableError) -> Self {
        match e {
            TableError::Io(e) => Failure::Io(e.to_string()),
            other => Failure::Io(other.to_string()),
        }
    }
}

fn param(message: impl Into<String>) -> Failure {
    Failure::Parameter(message.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::SelfTest => {}
                Failure::Parameter(m) => eprintln!("error: {m}"),
                Failure::Io(m) => eprintln!("i/o error: {m}"),
            }
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let ctx: Bijection = cli.bijection.parse().map_err(|e: nondiophantine::Error| param(e.to_string()))?;
    match cli.command {
        Command::Ops { expr } => {
            let parsed = expr::parse(&expr).map_err(|e| param(e.to_string()))?;
            let value = parsed.eval(&ctx)?;
            println!("{}", value.value());
            println!("f = {}", ctx.to_lower(value)?);
            Ok(())
        }
        Command::Lightcone { apex, x1, x2, n, output } => {
            if n < 2 {
                return Err(param("--n must be at least 2"));
            }
            let apex = parse_apex(&ctx, &apex)?;
            let mut grid = GridSpec::default_for(&ctx, n);
            if let Some(range) = x1 {
                grid.x1 = parse_range(&range, n)?;
            }
            if let Some(range) = x2 {
                grid.x2 = parse_range(&range, n)?;
            }
            let table = lightcone_surface(&ctx, &apex, &grid, exec)?;
            emit(&table, &output, plot::lightcone)
        }
        Command::Beta { kind, length, n, output } => {
            if n < 2 {
                return Err(param("--n must be at least 2"));
            }
            if !(length > 0.0 && length.is_finite()) {
                return Err(param(format!("--L must be positive, got {length}")));
            }
            let kind = match kind {
                Kind::Tan => BetaKind::Tan { length },
                Kind::Artanh => BetaKind::Artanh { length },
                Kind::Fechner => BetaKind::Fechner,
            };
            let table = beta_curve(kind, &kind.default_axis(n), exec)?;
            emit(&table, &output, |csv| plot::beta(csv, kind.coordinate_name()))
        }
        Command::Friedman { reference, classical_reference, n, t_min, t_max, output } => {
            if n < 3 {
                return Err(param("--n must be at least 3"));
            }
            let reference = expr::parse_value(&ctx, &reference).map_err(param)?;
            let grid = match (t_min, t_max) {
                (Some(lo), Some(hi)) if lo < hi => Axis::new(lo, hi, n),
                (Some(lo), Some(hi)) => return Err(param(format!("empty time range {lo}:{hi}"))),
                _ => FriedmanConfig::default_grid(&ctx, reference, n)?,
            };
            let mut cfg = FriedmanConfig::new(&ctx, reference, grid)?;
            if let Some(t0) = classical_reference {
                cfg = cfg.with_classical_reference(t0)?;
            }
            let comparison = friedman_comparison(&cfg, exec)?;
            match comparison.acceleration_onset {
                Some(t) => eprintln!("T* = {t}"),
                None => eprintln!("T* = none (no convex tail on this grid)"),
            }
            emit(&comparison.table, &output, plot::friedman)
        }
        Command::Selftest { seed, n } => {
            let report = selftest::run(&SelfTestOptions { seed, triples: n, exec });
            println!("{report}");
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::SelfTest)
            }
        }
    }
}

fn parse_apex(ctx: &Bijection, text: &str) -> Result<FourVector, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(param(format!("--apex needs 3 or 4 comma-separated values, got {}", parts.len())));
    }
    let mut raw = [ctx.zero().value(); 4];
    for (slot, part) in raw.iter_mut().zip(&parts) {
        *slot = expr::parse_value(ctx, part).map_err(param)?.value();
    }
    Ok(FourVector::new(ctx, raw, Variance::Contravariant)?)
}

fn parse_range(text: &str, n: usize) -> Result<Axis, Failure> {
    let (lo, hi) = text.split_once(':').ok_or_else(|| param(format!("range `{text}` must look like lo:hi")))?;
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| param(format!("`{s}` in range `{text}` is not a number")));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if !(lo < hi) {
        return Err(param(format!("range `{text}` is empty")));
    }
    Ok(Axis::new(lo, hi, n))
}

fn emit(table: &SeriesTable, output: &Output, script: impl Fn(&Path) -> String) -> Result<(), Failure> {
    match &output.out {
        Some(path) => {
            let file = fs::File::create(path)?;
            let mut writer = io::BufWriter::new(file);
            table.write_csv(&mut writer)?;
            writer.flush()?;
            if output.plot_script {
                fs::write(path.with_extension("py"), script(path))?;
            }
        }
        None => {
            if output.plot_script {
                return Err(param("--plot-script needs --out"));
            }
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write_csv(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}
