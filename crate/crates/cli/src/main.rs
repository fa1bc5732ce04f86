use std::fmt::Display;
use std::process::ExitCode;

use charsum::field::DEFAULT_SIZE_CAP;
use charsum::hyperf::hf_idx;
use charsum::suites::{run_count, run_suite};
use charsum::{
    Fe, FieldCtx, FieldOptions, Pairs, Suite, SuiteOptions, SumCtx, Tolerance, VerifyReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Character sums, hypergeometric series and point counts over finite fields.
#[derive(Parser, Debug)]
#[command(name = "charsum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare theorem and brute-force counts of y^e = x^d + ax + b.
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        pairs: PairArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a named identity or application suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        field: FieldArgs,
        /// Degree for davenport-hasse (default: every divisor of q-1).
        #[arg(long)]
        d: Option<u32>,
        #[command(flatten)]
        pairs: PairArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate a single quantity.
    Eval {
        #[command(subcommand)]
        what: EvalCommand,
    },
}

#[derive(Subcommand, Debug)]
enum EvalCommand {
    /// Gauss sum G_m.
    Gauss {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Jacobi sum J(T^m, T^k).
    Jacobi {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        /// Exponent of the second character.
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Binomial coefficient (T^m choose T^k).
    Binom {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        /// Exponent of the second character.
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Hypergeometric series with parameters given as character exponents.
    Hf {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        upper: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lower: Vec<i64>,
        #[arg(long)]
        x: String,
    },
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Field order (alternative to --p/--n).
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Base tolerance for floating comparisons.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, env = "CHARSUM_SIZE_CAP", default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: u32,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long, requires = "b")]
    a: Option<String>,
    #[arg(long, requires = "a")]
    b: Option<String>,
    /// Every pair of nonzero coefficients (the default).
    #[arg(long, conflicts_with_all = ["a", "samples"])]
    sweep: bool,
    /// Number of seeded random pairs.
    #[arg(long, conflicts_with = "a")]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Table,
}

/// Failure before any report was produced.
struct InvalidInput(String);

impl<E: Display> From<E> for InvalidInput {
    fn from(e: E) -> Self {
        InvalidInput(e.to_string())
    }
}

impl FieldArgs {
    fn context(&self) -> Result<SumCtx, InvalidInput> {
        let mut opts = FieldOptions {
            size_cap: self.size_cap,
            ..Default::default()
        };
        if let Some(base) = self.tol {
            opts.tol = Tolerance { base };
        }
        let field = match (self.q, self.p) {
            (Some(q), None) => FieldCtx::from_order(q, opts)?,
            (None, Some(p)) => FieldCtx::with_options(p, self.n, opts)?,
            _ => return Err(InvalidInput("give exactly one of --q or --p".into())),
        };
        Ok(SumCtx::new(field))
    }
}

impl PairArgs {
    fn pairs(&self, f: &FieldCtx) -> Result<Pairs, InvalidInput> {
        Ok(match (&self.a, &self.b, self.samples) {
            (Some(a), Some(b), _) => Pairs::Single(f.parse_elem(a)?, f.parse_elem(b)?),
            (_, _, Some(samples)) => Pairs::Random {
                samples,
                seed: self.seed,
            },
            _ => Pairs::Sweep,
        })
    }
}

fn emit(reports: &[VerifyReport], format: Format) {
    if format == Format::Csv {
        println!("{}", VerifyReport::CSV_HEADER);
    }
    for r in reports {
        match format {
            Format::Json => println!("{}", r.to_json()),
            Format::Csv => println!("{}", r.to_csv()),
            Format::Table => println!("{}", r.to_table()),
        }
    }
}

fn show_value(re: f64, im: f64) {
    println!("{re:.12} {im:+.12}i");
}

fn run(cli: Cli) -> Result<bool, InvalidInput> {
    match cli.command {
        Command::Count {
            field,
            e,
            d,
            pairs,
            format,
        } => {
            let ctx = field.context()?;
            let pairs = pairs.pairs(ctx.field())?.select(ctx.field());
            if pairs.iter().any(|(a, b)| a.is_zero() || b.is_zero()) {
                return Err(InvalidInput("a and b must be nonzero".into()));
            }
            let reports = run_count(&ctx, e, d, &pairs)?;
            emit(&reports, format);
            Ok(reports.iter().all(|r| r.matched))
        }
        Command::Verify {
            suite,
            field,
            d,
            pairs,
            format,
        } => {
            let suite: Suite = suite.parse()?;
            let ctx = field.context()?;
            let opts = SuiteOptions {
                d,
                pairs: pairs.pairs(ctx.field())?,
            };
            let reports = run_suite(&ctx, suite, &opts)?;
            emit(&reports, format);
            Ok(reports.iter().all(|r| r.matched))
        }
        Command::Eval { what } => {
            match what {
                EvalCommand::Gauss { field, m } => {
                    let g = field.context()?.g(m);
                    show_value(g.re, g.im);
                }
                EvalCommand::Jacobi { field, m, k } => {
                    let ctx = field.context()?;
                    let f = ctx.field();
                    let j = ctx.jacobi(f.character(m), f.character(k));
                    show_value(j.re, j.im);
                }
                EvalCommand::Binom { field, m, k } => {
                    let v = field.context()?.binom_idx(m, k);
                    show_value(v.re, v.im);
                }
                EvalCommand::Hf {
                    field,
                    upper,
                    lower,
                    x,
                } => {
                    let ctx = field.context()?;
                    let x: Fe = ctx.field().parse_elem(&x)?;
                    let v = hf_idx(&ctx, &upper, &lower, x)?;
                    show_value(v.re, v.im);
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InvalidInput(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
