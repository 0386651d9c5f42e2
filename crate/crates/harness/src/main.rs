use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use fusion_core::{c64, Error, ModelParams};
use fusion_harness::config::{ConfigFile, Format, Overrides, SuiteConfig, CONFIG_ENV};
use fusion_harness::error::HarnessError;
use fusion_harness::tables;

#[derive(Parser)]
#[command(name = "fusion", version, about = "Check fused elliptic identities, print weight tables and string-function tables")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and write a report.
    Check(CheckArgs),
    /// Print one family of weights at a single spectral parameter.
    Table(TableArgs),
    /// Print string-function multiplicities as CSV.
    Chars(CharsArgs),
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Samples per suite.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Threshold applied to every selected suite.
    #[arg(long)]
    tol: Option<f64>,
    /// Comma separated suite ids, or `all`.
    #[arg(long)]
    suite: Option<String>,
    /// json | csv
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Config file; defaults to $FUSION_CONFIG when set.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    R,
    W,
    L,
    Psi,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum TableFormat {
    #[default]
    Text,
    Csv,
}

#[derive(Args)]
struct TableArgs {
    what: What,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0.3)]
    x: f64,
    #[arg(long, default_value_t = 5.0)]
    r: f64,
    /// Real part of the spectral parameter.
    #[arg(long, allow_hyphen_values = true)]
    u: f64,
    /// Imaginary part of the spectral parameter.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    u_im: f64,
    /// Four heights: `a,b,d,c` for w, `m0,mk,n0,nk` for l.
    #[arg(long)]
    heights: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Include zero entries of the R-matrix.
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value_t)]
    format: TableFormat,
}

#[derive(Args)]
struct CharsArgs {
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 20)]
    depth: usize,
    /// Restrict to one highest weight `0..=k`.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn usage_error(msg: &str, sub: &str) -> ExitCode {
    let mut cmd = Cli::command();
    let usage = cmd.find_subcommand_mut(sub).map(|c| c.render_usage().to_string()).unwrap_or_default();
    eprintln!("error: {msg}\n\n{usage}");
    ExitCode::from(2)
}

fn check(args: CheckArgs) -> ExitCode {
    let format = match args.format.as_deref().map(str::parse::<Format>).transpose() {
        Ok(f) => f,
        Err(e) => return usage_error(&e.to_string(), "check"),
    };
    let flags = Overrides {
        x: args.x,
        r: args.r,
        k: args.k,
        samples: args.samples,
        seed: args.seed,
        tol: args.tol,
        suites: args.suite,
        format,
        out: args.out,
    };
    let path = args.config.or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let file = match path.as_deref().map(ConfigFile::load).transpose() {
        Ok(f) => f,
        Err(e) => return usage_error(&e.to_string(), "check"),
    };
    let cfg = match SuiteConfig::resolve(file.as_ref(), &flags) {
        Ok(c) => c,
        Err(e) => return usage_error(&e.to_string(), "check"),
    };
    let result = fusion_harness::run(&cfg).and_then(|report| {
        let bytes = report.render(cfg.format)?;
        match &cfg.out {
            Some(p) => std::fs::write(p, &bytes)?,
            None => std::io::stdout().write_all(&bytes)?,
        }
        Ok(report)
    });
    match result {
        Ok(report) => {
            let c = report.counts();
            eprintln!("pass {} fail {} skipped-singular {} inconclusive {}", c.pass, c.fail, c.skipped_singular, c.inconclusive);
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn parse_heights(s: &str) -> Option<[f64; 4]> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
    v.try_into().ok()
}

fn table(args: TableArgs) -> ExitCode {
    let p = match ModelParams::new(args.x, args.r, args.k) {
        Ok(p) => p,
        Err(e) => return usage_error(&e.to_string(), "table"),
    };
    let u = c64(args.u, args.u_im);
    let k = args.k;
    let rows = match args.what {
        What::R => tables::r_table(k, u, &p, args.all),
        What::W | What::L => {
            let Some(h) = args.heights.as_deref().and_then(parse_heights) else {
                return usage_error("--heights needs four comma separated numbers", "table");
            };
            if matches!(args.what, What::W) {
                tables::w_table(k, h, u, &p)
            } else {
                tables::l_table(k, h, u, &p)
            }
        }
        What::Psi => {
            let (Some(a), Some(b)) = (args.a, args.b) else {
                return usage_error("psi needs --a and --b", "table");
            };
            tables::psi_table(k, a, b, u, &p)
        }
    };
    let rows = rows.and_then(|r| tables::check_finite(&r).map(|_| r));
    match rows {
        Ok(rows) => {
            let out = std::io::stdout();
            let res = match args.format {
                TableFormat::Text => tables::write_text(&rows, out.lock()).map_err(HarnessError::from),
                TableFormat::Csv => tables::write_csv(&rows, out.lock()).map_err(HarnessError::from),
            };
            match res {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(Error::Singular(what)) => {
            eprintln!("singular at u = {}{:+}i: {what}", u.re, u.im);
            ExitCode::from(1)
        }
        Err(e) => usage_error(&e.to_string(), "table"),
    }
}

fn chars(args: CharsArgs) -> ExitCode {
    let rows = match tables::char_rows(args.k, args.ell, args.depth) {
        Ok(r) => r,
        Err(Error::Capacity) => {
            eprintln!("error: multiplicities overflow at this depth");
            return ExitCode::from(1);
        }
        Err(e) => return usage_error(&e.to_string(), "chars"),
    };
    let res = match &args.out {
        Some(p) => std::fs::File::create(p).map_err(HarnessError::from).and_then(|f| tables::write_chars_csv(&rows, f).map_err(HarnessError::from)),
        None => tables::write_chars_csv(&rows, std::io::stdout().lock()).map_err(HarnessError::from),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Check(a) => check(a),
        Cmd::Table(a) => table(a),
        Cmd::Chars(a) => chars(a),
    }
}
