mod commands;
mod input;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::{conventions, run, Command, Config};
use input::InputError;
use opalg::exactalg::is_prime;
use opalg::{Fp, Rational};
use report::{envelope, render_json, render_text, Report};

#[derive(Parser, Debug)]
#[command(name = "opalg", version, about = "Exact operadic homological algebra")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// `Q` or a prime `p` (also written `F7`, `GF(7)`).
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    #[arg(long, global = true, default_value_t = 4)]
    max_arity: usize,
    #[arg(long, global = true, default_value_t = 4)]
    max_weight: i64,
    #[arg(long, global = true, default_value_t = 3)]
    max_level: usize,
    /// Degree window `n-:n+` for semi-infinite homology.
    #[arg(long, global = true, default_value = "-2:2", allow_hyphen_values = true)]
    window: String,
    /// Single weight for semi-infinite homology; all |w| ≤ max-weight when omitted.
    #[arg(long, global = true, allow_hyphen_values = true)]
    weight: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate the algebra and module of an input file.
    CheckAlgebra { input: String },
    /// Dimensions of an operad (tag or input file) per arity.
    OperadDims { operad: String },
    /// Koszulness certificate of a binary quadratic operad.
    KoszulCheck { operad: String },
    /// Operadic chain homology with trivial coefficients.
    Homology { input: String },
    /// Operadic cochain cohomology with coefficients in the module.
    Cohomology { input: String },
    /// Homology of the relative bar complex along `[morphism]`.
    RelativeHomology { input: String },
    /// Cohomology of the relative bar complex along `[morphism]`.
    RelativeCohomology { input: String },
    /// Relative (co)homology over the zero base against operadic (co)homology.
    CompareKoszul { input: String },
    /// Validate the `[seminf]` structure.
    SeminfCheck { input: String },
    /// Semi-infinite homology in a degree window.
    SeminfHomology { input: String },
}

impl Cmd {
    fn split(&self) -> (Command, &str, &'static str) {
        match self {
            Cmd::CheckAlgebra { input } => (Command::CheckAlgebra, input, "check-algebra"),
            Cmd::OperadDims { operad } => (Command::OperadDims, operad, "operad-dims"),
            Cmd::KoszulCheck { operad } => (Command::KoszulCheck, operad, "koszul-check"),
            Cmd::Homology { input } => (Command::Homology, input, "homology"),
            Cmd::Cohomology { input } => (Command::Cohomology, input, "cohomology"),
            Cmd::RelativeHomology { input } => (Command::RelativeHomology, input, "relative-homology"),
            Cmd::RelativeCohomology { input } => (Command::RelativeCohomology, input, "relative-cohomology"),
            Cmd::CompareKoszul { input } => (Command::CompareKoszul, input, "compare-koszul"),
            Cmd::SeminfCheck { input } => (Command::SeminfCheck, input, "seminf-check"),
            Cmd::SeminfHomology { input } => (Command::SeminfHomology, input, "seminf-homology"),
        }
    }
}

fn parse_window(s: &str) -> Result<(i64, i64), InputError> {
    let bad = || InputError(format!("window `{}` must look like n-:n+", s));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (i64, i64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(InputError(format!("window [{}, {}] is empty", lo, hi)));
    }
    Ok((lo, hi))
}

fn parse_field(s: &str) -> Result<u64, InputError> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(0);
    }
    let digits = t.trim_start_matches(['F', 'f']).trim_start_matches("GF(").trim_end_matches(')');
    let p: u64 = digits.parse().map_err(|_| InputError(format!("unknown field `{}`", s)))?;
    if !is_prime(p) {
        return Err(InputError(format!("{} is not prime", p)));
    }
    Ok(p)
}

macro_rules! dispatch_prime {
    ($p:expr, $cmd:expr, $target:expr, $cfg:expr; $($q:literal),*) => {
        match $p {
            0 => run::<Rational>($cmd, $target, $cfg),
            $($q => run::<Fp<$q>>($cmd, $target, $cfg),)*
            p => Err(InputError(format!("prime {} is not built in; supported primes are at most 31", p))),
        }
    };
}

fn execute(cli: &Cli) -> Result<(Report, serde_json::Value), InputError> {
    let p = parse_field(&cli.field)?;
    let window = parse_window(&cli.window)?;
    if cli.max_arity < 1 || cli.max_weight < 1 || cli.max_level < 1 {
        return Err(InputError("bounds must be at least 1".into()));
    }
    if window.0 > 0 || window.1 < 0 {
        return Err(InputError("the window must contain degree 0".into()));
    }
    let cfg = Config { max_arity: cli.max_arity, max_weight: cli.max_weight, max_level: cli.max_level, window, weight: cli.weight, seed: cli.seed };
    let (cmd, target, _) = cli.command.split();
    let report = dispatch_prime!(p, cmd, target, &cfg; 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)?;
    let config = json!({
        "field": if p == 0 { "Q".to_string() } else { format!("F{}", p) },
        "max_arity": cfg.max_arity,
        "max_weight": cfg.max_weight,
        "max_level": cfg.max_level,
        "window": [window.0, window.1],
        "weight": cfg.weight,
        "seed": cfg.seed,
        "input": target,
        "conventions": conventions(),
    });
    Ok((report, config))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (_, _, name) = cli.command.split();
    match execute(&cli) {
        Ok((report, config)) => {
            let v = envelope(name, config, &report);
            let out = match cli.format {
                Format::Json => render_json(&v),
                Format::Text => render_text(&v),
            };
            print!("{}", out);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
