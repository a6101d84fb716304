// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. [`run`] parses an argument vector, writes to the
//! given streams and returns the process exit status.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::Discriminant;
use crate::census::{
    census, census_by_genus, compare_with_constant, convergence_series, set_memory_budget,
    sieve_representable, CENSUS_CSV_HEADER,
};
use crate::constants::table::REFERENCE_TABLE;
use crate::constants::{
    bernays_constant, genus_sum_check, ConstantOptions, ConstantReport, Method, CSV_HEADER,
    DEFAULT_DEPTH, DEFAULT_PRIME_BOUND,
};
use crate::error::{Error, Result};
use crate::forms::{genus_partition, principal_form, QuadraticForm};
use crate::lfunc::DEFAULT_L_EVEN_BOUND;
use crate::search::{
    l_diagnostics_with_class_number, scan_with_checkpoint, Family, SearchConfig,
    DEFAULT_RANK_BOUND, SEARCH_CSV_HEADER,
};

pub const THREADS_ENV: &str = "BERNAYS_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_FUNDAMENTAL: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "bernays",
    version,
    about = "Bernays' constant C(D) for negative fundamental discriminants"
)]
pub struct Cli {
    /// Output format.
    #[arg(short, long, value_enum, global = true, default_value = "human")]
    pub output: Output,

    /// Memory budget in bytes for censuses (overrides BERNAYS_MEMORY_BUDGET).
    #[arg(long, global = true)]
    pub memory_budget: Option<u64>,

    /// Worker threads (overrides BERNAYS_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct PrecisionArgs {
    #[arg(long, value_enum, default_value = "direct")]
    pub method: MethodArg,
    /// Prime bound of the direct Euler product.
    #[arg(long, default_value_t = DEFAULT_PRIME_BOUND)]
    pub prime_bound: u64,
    /// Truncation depth of the accelerated product.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: u32,
    /// Prime bound for L(2^k, χ) in the accelerated product.
    #[arg(long, default_value_t = DEFAULT_L_EVEN_BOUND)]
    pub l_bound: u64,
}

impl PrecisionArgs {
    fn options(&self) -> ConstantOptions {
        ConstantOptions {
            method: match self.method {
                MethodArg::Direct => Method::Direct,
                MethodArg::Accelerated => Method::Accelerated,
                MethodArg::Both => Method::Both,
            },
            prime_bound: self.prime_bound,
            depth: self.depth,
            l_even_bound: self.l_bound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Accelerated,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "minus-q")]
    MinusQ,
    #[value(name = "minus-4q")]
    MinusFourQ,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute C(D) with error bound and intermediate quantities.
    Constant {
        #[arg(short = 'D', allow_negative_numbers = true)]
        d: i64,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Compute C(D) for a list of discriminants (a file with one per line, or builtin60).
    Table {
        #[arg(long)]
        discs: String,
        /// Record wall-clock runtimes (otherwise runtime_ms is 0, keeping the output reproducible).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Reduced forms of discriminant D grouped by genus.
    Classgroup {
        #[arg(short = 'D', allow_negative_numbers = true)]
        d: i64,
    },
    /// Count the integers up to x represented by a form of discriminant D.
    Census {
        #[arg(short = 'D', allow_negative_numbers = true)]
        d: i64,
        /// Form as a,b,c (defaults to the principal form).
        #[arg(long, allow_hyphen_values = true)]
        form: Option<String>,
        #[arg(short = 'x')]
        x: u64,
        /// Report only integers coprime to D.
        #[arg(long)]
        coprime: bool,
        /// Split the coprime count by genus.
        #[arg(long)]
        per_genus: bool,
        /// Write (y, B(y) sqrt(ln y)/y) pairs to this CSV file.
        #[arg(long)]
        plot_data: Option<PathBuf>,
        /// Number of points in the plot data.
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Compare B(x) with C x/sqrt(ln x) and C ∫_2^x dt/sqrt(ln t).
    Compare {
        #[arg(short = 'D', allow_negative_numbers = true)]
        d: i64,
        /// Comma-separated cutoffs.
        #[arg(short = 'x', value_delimiter = ',', required = true)]
        x: Vec<u64>,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Scan primes q ≡ r (mod m) for large C(-q) or C(-4q).
    Search {
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long = "res")]
        residue: u64,
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long, value_enum, default_value = "minus-q")]
        family: FamilyArg,
        #[arg(long, default_value_t = DEFAULT_RANK_BOUND)]
        rank_bound: u64,
        #[arg(long, default_value_t = DEFAULT_PRIME_BOUND)]
        refine_bound: u64,
        /// Checkpoint file, created if missing and resumed from otherwise.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Truncated genus sum against |D|/φ(|D|).
    Gsum {
        #[arg(short = 'D', allow_negative_numbers = true)]
        d: i64,
        #[arg(short = 'M')]
        m: u64,
    },
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidDiscriminant(_)
        | Error::DiscriminantOutOfRange(_)
        | Error::InvalidForm { .. }
        | Error::InvalidArgument(_) => EXIT_USAGE,
        Error::NotFundamental(_) => EXIT_NOT_FUNDAMENTAL,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_FAILURE,
    }
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let threads = match cli.threads.map(Ok).or_else(|| env_threads().transpose()) {
        None => None,
        Some(Ok(n)) => Some(n),
        Some(Err(e)) => return report(e, err),
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => return report(Error::InvalidArgument(e.to_string()), err),
    };
    if cli.memory_budget.is_some() {
        set_memory_budget(cli.memory_budget);
    }
    let mut buf = Vec::new();
    let result = pool.install(|| execute(&cli, &mut buf));
    if cli.memory_budget.is_some() {
        set_memory_budget(None);
    }
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        return report(e.into(), err);
    }
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => report(e, err),
    }
}

fn env_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Error::InvalidArgument(format!("{THREADS_ENV}={v:?} is not a thread count"))
        }),
    }
}

fn report(e: Error, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "error: {e}");
    exit_code(&e)
}

fn json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn parse_form(s: &str) -> Result<QuadraticForm> {
    let parts: Vec<i64> = s
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidArgument(format!("form {s:?} is not a,b,c")))?;
    match parts[..] {
        [a, b, c] => Ok(QuadraticForm::new(a, b, c)),
        _ => Err(Error::InvalidArgument(format!("form {s:?} is not a,b,c"))),
    }
}

fn read_discriminants(source: &str) -> Result<Vec<i64>> {
    if source == "builtin60" {
        return Ok(REFERENCE_TABLE.iter().map(|&(d, _)| d).collect());
    }
    let text = fs::read_to_string(source)?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<i64>()
                .map_err(|_| Error::InvalidArgument(format!("{source}: {l:?} is not an integer")))
        })
        .collect()
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Constant { d, precision } => {
            let d = Discriminant::fundamental(*d)?;
            let opts = precision.options();
            let report = bernays_constant(&d, &opts)?;
            print_constant(cli.output, out, &d, &report)
        }
        Command::Table {
            discs,
            timing,
            precision,
        } => {
            let ds = read_discriminants(discs)?
                .into_iter()
                .map(Discriminant::fundamental)
                .collect::<Result<Vec<_>>>()?;
            let opts = precision.options();
            let mut reports = Vec::with_capacity(ds.len());
            for d in &ds {
                let mut r = bernays_constant(d, &opts)?;
                if !timing {
                    r.runtime_ms = 0;
                }
                reports.push(r);
            }
            match cli.output {
                Output::Json => json(out, &reports),
                Output::Csv => {
                    writeln!(out, "{CSV_HEADER}")?;
                    for r in &reports {
                        writeln!(out, "{}", r.csv_row())?;
                    }
                    Ok(())
                }
                Output::Human => {
                    writeln!(
                        out,
                        "{:>12} {:>6} {:>2} {:>12} {:>12}  error",
                        "D", "h", "ω", "E(D)", "C(D)"
                    )?;
                    for r in &reports {
                        writeln!(
                            out,
                            "{:>12} {:>6} {:>2} {:>12.9} {:>12.9}  ± {:.1e}",
                            r.discriminant, r.h, r.omega, r.e_d.value, r.c_d.value, r.c_d.abs_error
                        )?;
                    }
                    Ok(())
                }
            }
        }
        Command::Classgroup { d } => {
            let d = Discriminant::fundamental(*d)?;
            let p = genus_partition(&d)?;
            match cli.output {
                Output::Json => json(out, &p),
                Output::Csv => {
                    writeln!(out, "D,genus,a,b,c")?;
                    for (g, members) in p.genera.iter().enumerate() {
                        for &i in members {
                            let f = p.classes[i];
                            writeln!(out, "{},{},{},{},{}", d.value(), g, f.a, f.b, f.c)?;
                        }
                    }
                    Ok(())
                }
                Output::Human => {
                    writeln!(
                        out,
                        "D = {}: h = {}, {} genera (characters {:?})",
                        d.value(),
                        p.classes.len(),
                        p.genus_count(),
                        p.character_labels
                    )?;
                    for g in 0..p.genus_count() {
                        let forms: Vec<String> = p.genus_forms(g).map(|f| f.to_string()).collect();
                        writeln!(out, "  genus {g}: {}", forms.join(" "))?;
                    }
                    Ok(())
                }
            }
        }
        Command::Census {
            d,
            form,
            x,
            coprime,
            per_genus,
            plot_data,
            points,
            precision,
        } => {
            let d = Discriminant::fundamental(*d)?;
            let f = match form {
                Some(s) => parse_form(s)?,
                None => principal_form(d.value())?,
            };
            if f.discriminant() != Some(d.value()) {
                return Err(Error::InvalidArgument(format!(
                    "form {f} does not have discriminant {}",
                    d.value()
                )));
            }
            if *per_genus {
                let g = census_by_genus(&d, *x)?;
                return match cli.output {
                    Output::Json => json(out, &g),
                    Output::Csv => {
                        writeln!(out, "D,x,genus,count,share")?;
                        for (i, (n, s)) in g.genus_counts.iter().zip(g.shares()).enumerate() {
                            writeln!(out, "{},{},{},{},{:.9}", g.discriminant, g.x, i, n, s)?;
                        }
                        Ok(())
                    }
                    Output::Human => {
                        writeln!(
                            out,
                            "D = {}, x = {}: {} coprime represented integers",
                            g.discriminant, g.x, g.total
                        )?;
                        for (i, (n, s)) in g.genus_counts.iter().zip(g.shares()).enumerate() {
                            writeln!(out, "  genus {i}: {n} ({s:.9})")?;
                        }
                        writeln!(out, "  represented by several genera: {}", g.overlaps)?;
                        Ok(())
                    }
                };
            }
            let c = bernays_constant(&d, &precision.options())?.c_d.value;
            let rec = census(&f, *x, c)?;
            if let Some(path) = plot_data {
                let set = sieve_representable(&f, *x)?;
                let mut file = std::io::BufWriter::new(fs::File::create(path)?);
                writeln!(file, "y,ratio")?;
                for (y, r) in convergence_series(&set, *points) {
                    writeln!(file, "{y},{r:.9}")?;
                }
                file.flush()?;
            }
            match cli.output {
                Output::Json => json(out, &rec),
                Output::Csv => {
                    writeln!(out, "{CENSUS_CSV_HEADER}")?;
                    writeln!(out, "{}", rec.csv_row())?;
                    Ok(())
                }
                Output::Human if *coprime => {
                    writeln!(
                        out,
                        "{} x = {}: {} represented integers coprime to {}",
                        f,
                        rec.x,
                        rec.count_coprime,
                        d.abs()
                    )?;
                    Ok(())
                }
                Output::Human => {
                    writeln!(out, "{} x = {}: B(x) = {}", f, rec.x, rec.count)?;
                    writeln!(out, "  C x/sqrt(ln x)          = {:.9}", rec.landau_pred)?;
                    writeln!(out, "  C ∫_2^x dt/sqrt(ln t)   = {:.9}", rec.integral_pred)?;
                    writeln!(out, "  C(D) used               = {:.9}", rec.c_used)?;
                    Ok(())
                }
            }
        }
        Command::Compare { d, x, precision } => {
            let d = Discriminant::fundamental(*d)?;
            let c = bernays_constant(&d, &precision.options())?.c_d.value;
            let rows = compare_with_constant(&d, x, c)?;
            match cli.output {
                Output::Json => json(out, &rows),
                Output::Csv => {
                    writeln!(out, "x,count,landau_error,integral_error")?;
                    for r in &rows {
                        writeln!(
                            out,
                            "{},{},{:.9},{:.9}",
                            r.x, r.count, r.landau_error, r.integral_error
                        )?;
                    }
                    Ok(())
                }
                Output::Human => {
                    writeln!(out, "D = {}, C(D) = {:.9}", d.value(), c)?;
                    writeln!(
                        out,
                        "{:>12} {:>12} {:>18} {:>18}",
                        "x", "B(x)", "|B - Cx/√ln x|", "|B - C∫|"
                    )?;
                    for r in &rows {
                        writeln!(
                            out,
                            "{:>12} {:>12} {:>18.9} {:>18.9}",
                            r.x, r.count, r.landau_error, r.integral_error
                        )?;
                    }
                    Ok(())
                }
            }
        }
        Command::Search {
            modulus,
            residue,
            limit,
            top,
            family,
            rank_bound,
            refine_bound,
            resume,
        } => {
            let cfg = SearchConfig {
                modulus: *modulus,
                residue: *residue,
                limit: *limit,
                top_n: *top,
                family: match family {
                    FamilyArg::MinusQ => Family::MinusQ,
                    FamilyArg::MinusFourQ => Family::MinusFourQ,
                },
                rank_bound: *rank_bound,
                refine_bound: *refine_bound,
            };
            let r = scan_with_checkpoint(&cfg, resume.as_deref())?;
            match cli.output {
                Output::Json => json(out, &r),
                Output::Csv => {
                    writeln!(out, "{SEARCH_CSV_HEADER}")?;
                    for row in r.csv_rows() {
                        writeln!(out, "{row}")?;
                    }
                    Ok(())
                }
                Output::Human => {
                    writeln!(
                        out,
                        "q ≡ {} (mod {}), q ≤ {}, family {}: {} primes, {} with C > C(-8)",
                        r.residue, r.modulus, r.limit, r.family, r.scanned, r.exceed_count
                    )?;
                    for e in &r.top {
                        writeln!(
                            out,
                            "  q = {:>10}  D = {:>11}  h = {:>6}  L(1) = {:.9}  C = {:.9} ± {:.1e}",
                            e.q, e.discriminant, e.h, e.l_one, e.c, e.c_err
                        )?;
                    }
                    Ok(())
                }
            }
        }
        Command::Gsum { d, m } => {
            let d = Discriminant::fundamental(*d)?;
            let g = genus_sum_check(&d, *m)?;
            let (lo, hi) = g.bracket();
            match cli.output {
                Output::Json => json(out, &g),
                Output::Csv => {
                    writeln!(
                        out,
                        "D,M,terms,partial_sum,tail_upper,closed_form,bracketed"
                    )?;
                    writeln!(
                        out,
                        "{},{},{},{:.9},{:.3e},{:.9},{}",
                        g.discriminant,
                        g.bound,
                        g.terms,
                        g.partial_sum,
                        g.tail_upper,
                        g.closed_form,
                        g.brackets_closed_form()
                    )?;
                    Ok(())
                }
                Output::Human => {
                    writeln!(
                        out,
                        "D = {}, M = {}: {} terms",
                        g.discriminant, g.bound, g.terms
                    )?;
                    writeln!(out, "  sum in [{lo:.9}, {hi:.9}]")?;
                    writeln!(
                        out,
                        "  |D|/φ(|D|) = {:.9} {}",
                        g.closed_form,
                        if g.brackets_closed_form() {
                            "(inside)"
                        } else {
                            "(OUTSIDE)"
                        }
                    )?;
                    Ok(())
                }
            }
        }
    }
}

fn print_constant(
    mode: Output,
    out: &mut dyn Write,
    d: &Discriminant,
    r: &ConstantReport,
) -> Result<()> {
    match mode {
        Output::Json => json(out, r),
        Output::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            writeln!(out, "{}", r.csv_row())?;
            Ok(())
        }
        Output::Human => {
            let diag = l_diagnostics_with_class_number(d, r.h)?;
            writeln!(out, "D        = {}", r.discriminant)?;
            writeln!(out, "h        = {}", r.h)?;
            writeln!(out, "omega    = {}", r.omega)?;
            writeln!(out, "phi      = {}", r.phi)?;
            writeln!(
                out,
                "L(1,chi) = {:.9} ± {:.1e}",
                r.l_one.value, r.l_one.abs_error_bound
            )?;
            writeln!(
                out,
                "E(D)     = {:.9} ± {:.1e}",
                r.e_d.value, r.e_d.abs_error
            )?;
            writeln!(out, "J(D)     = {:.9}", r.j_d)?;
            writeln!(
                out,
                "C        = {:.9} ± {:.1e}",
                r.c_d.value, r.c_d.abs_error
            )?;
            writeln!(
                out,
                "L(1,chi) < (10/3)(phi/|D|) ln|D| + 1 = {:.9}: {}",
                diag.bec_bound,
                diag.bec_holds()
            )?;
            writeln!(
                out,
                "method   = {} (prime bound {}, depth {})",
                r.method, r.prime_bound, r.depth
            )?;
            Ok(())
        }
    }
}
