//! `logfree`: freeness and stable freeness of hyperplane arrangements from the command line.

mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logfree::arrangement::{catalog, catalog_names, parse_arrangement, Arrangement, ArrangementData, FieldSpec};
use logfree::classifier::{classify_with_lattice, ClassifyOptions, Dossier};
use logfree::harness::{self, cache::CACHE_ENV, Cache, EnumerationSpec, Property};
use logfree::lattice::{intersection_lattice, lattices_isomorphic};
use logfree::{Error, Field, Fp, Rational, Result};
use serde_json::json;

use report::Output;

#[derive(Parser, Debug)]
#[command(name = "logfree", version, about = "Freeness, stable freeness and cohomology of hyperplane arrangements")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Coefficient field, `Q` or `F<p>`; overrides the field named in the input file.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Print the machine-readable report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Dossier cache directory (default for `search`: $LOGFREE_CACHE or ./logfree-cache).
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Never read or write the dossier cache.
    #[arg(long, global = true, conflicts_with = "cache")]
    no_cache: bool,
    /// Maximum number of S-pairs per classification; exhausting it leaves the verdict undecided.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
    /// Include wall-clock timings in reports.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intersection lattice and its invariants.
    Lattice { file: String },
    /// Generators and relations of the logarithmic tangent module, with its Betti table.
    Module { file: String },
    /// Freeness verdict, exponents and Saito certificate.
    Free { file: String },
    /// Stable freeness (vanishing of H^i_* for 2 <= i <= n-2).
    Stablefree { file: String },
    /// Table of h^i(T_A(d)) over a window of twists.
    Cohomology {
        file: String,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        window: Option<Vec<i32>>,
    },
    /// Full dossier.
    Classify {
        file: String,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        window: Option<Vec<i32>>,
    },
    /// Lattice isomorphism and property comparison of two arrangements.
    Compare { file1: String, file2: String },
    /// Exhaustive sweep grouped by lattice class, checking that a property is combinatorial.
    Search {
        #[arg(long)]
        n: usize,
        /// A number, or a range `a..b` (inclusive); `..b` means `1..b`.
        #[arg(long)]
        k: String,
        #[arg(long, value_enum, default_value_t = PropertyArg::Free)]
        property: PropertyArg,
        /// Integer coefficient pool for searches over Q, as a range `a..b`.
        #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
        pool: String,
        /// Keep only essential arrangements.
        #[arg(long)]
        essential_only: bool,
        /// Maximum number of arrangements to enumerate.
        #[arg(long, default_value_t = harness::DEFAULT_CAP)]
        cap: usize,
    },
    /// List the named arrangements accepted in place of a file.
    Catalog,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropertyArg {
    Free,
    Stablyfree,
}

impl From<PropertyArg> for Property {
    fn from(p: PropertyArg) -> Self {
        match p {
            PropertyArg::Free => Property::Free,
            PropertyArg::Stablyfree => Property::StablyFree,
        }
    }
}

/// Runs `$body` with `$K` bound to the scalar type of `$fld`.
macro_rules! with_field {
    ($fld:expr, $K:ident => $body:expr) => {
        match $fld {
            FieldSpec::Rational => {
                type $K = Rational;
                $body
            }
            FieldSpec::Prime(2) => {
                type $K = Fp<2>;
                $body
            }
            FieldSpec::Prime(3) => {
                type $K = Fp<3>;
                $body
            }
            FieldSpec::Prime(5) => {
                type $K = Fp<5>;
                $body
            }
            FieldSpec::Prime(7) => {
                type $K = Fp<7>;
                $body
            }
            FieldSpec::Prime(11) => {
                type $K = Fp<11>;
                $body
            }
            FieldSpec::Prime(13) => {
                type $K = Fp<13>;
                $body
            }
            FieldSpec::Prime(17) => {
                type $K = Fp<17>;
                $body
            }
            FieldSpec::Prime(19) => {
                type $K = Fp<19>;
                $body
            }
            FieldSpec::Prime(23) => {
                type $K = Fp<23>;
                $body
            }
            FieldSpec::Prime(29) => {
                type $K = Fp<29>;
                $body
            }
            FieldSpec::Prime(31) => {
                type $K = Fp<31>;
                $body
            }
            FieldSpec::Prime(32003) => {
                type $K = Fp<32003>;
                $body
            }
            FieldSpec::Prime(p) => Err(Error::UnsupportedField(format!(
                "F{p} (supported: Q, F2 .. F31, F32003)"
            ))),
        }
    };
}

struct Ctx {
    field: Option<FieldSpec>,
    opts: ClassifyOptions,
    cache: Option<Cache>,
}

fn load(arg: &str) -> Result<ArrangementData> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
        let mut data = parse_arrangement(&text)?;
        data.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        return Ok(data);
    }
    match catalog(arg) {
        Ok(d) => Ok(d),
        Err(e) if arg.contains('/') || arg.contains('.') => Err(Error::Io(format!("{arg}: no such file ({e})"))),
        Err(e) => Err(e),
    }
}

fn dossier<K: Field>(a: &Arrangement<K>, ctx: &mut Ctx) -> Result<Dossier> {
    let key = harness::cache_key(a, &ctx.opts);
    if let Some(d) = ctx.cache.as_ref().and_then(|c| c.get(&key)) {
        if !ctx.opts.timings {
            // The key ignores the display name.
            let mut d = d.clone();
            d.arrangement.name = a.name().map(str::to_string);
            return Ok(d);
        }
    }
    let d = classify_with_lattice(a, &ctx.opts, None)?;
    if let Some(c) = ctx.cache.as_mut() {
        let mut stored = d.clone();
        stored.timings = None;
        c.append(&[(key, stored)])?;
    }
    Ok(d)
}

fn single<K: Field>(cmd: &Command, data: &ArrangementData, ctx: &mut Ctx) -> Result<Output> {
    let a: Arrangement<K> = data.instantiate()?;
    match cmd {
        Command::Lattice { .. } => Ok(report::lattice(&a, &intersection_lattice(&a)?)),
        Command::Module { .. } => Ok(report::module(&dossier(&a, ctx)?)),
        Command::Free { .. } => Ok(report::free(&dossier(&a, ctx)?)),
        Command::Stablefree { .. } => Ok(report::stablefree(&dossier(&a, ctx)?)),
        Command::Cohomology { .. } => Ok(report::cohomology(&dossier(&a, ctx)?)),
        Command::Classify { .. } => Ok(report::classify(&dossier(&a, ctx)?)),
        _ => unreachable!("not a single-arrangement command"),
    }
}

fn side<K: Field>(data: &ArrangementData, ctx: &mut Ctx) -> Result<(logfree::lattice::Lattice, Dossier)> {
    let a: Arrangement<K> = data.instantiate()?;
    Ok((intersection_lattice(&a)?, dossier(&a, ctx)?))
}

fn field_of(data: &ArrangementData, ctx: &Ctx) -> FieldSpec {
    ctx.field.unwrap_or(data.field)
}

fn parse_range(s: &str, default_lo: i64) -> Result<(i64, i64)> {
    let bad = || Error::Usage(format!("invalid range '{s}' (expected N or a..b)"));
    let s = s.trim();
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            if a.is_empty() { default_lo } else { a.trim().parse().map_err(|_| bad())? },
            b.trim().trim_start_matches('=').parse().map_err(|_| bad())?,
        ),
        None => {
            let v = s.parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<(Output, u8)> {
    let g = &cli.global;
    let field = g.field.as_deref().map(FieldSpec::parse).transpose()?;
    let opts = ClassifyOptions {
        max_pairs: g.budget,
        window: None,
        timings: g.timings,
    };
    let explicit_cache = g.cache.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let cache_dir = match (&cli.command, g.no_cache) {
        (_, true) => None,
        (Command::Search { .. }, false) => Some(explicit_cache.unwrap_or_else(Cache::default_dir)),
        (_, false) => explicit_cache,
    };
    let cache = cache_dir.map(|d| Cache::open(&d)).transpose()?;
    if let Some(c) = &cache {
        if c.stats().quarantined > 0 {
            eprintln!(
                "warning: {} corrupt cache record(s) moved to quarantine in {}",
                c.stats().quarantined,
                c.file_path().display()
            );
        }
    }
    let mut ctx = Ctx { field, opts, cache };
    match &cli.command {
        Command::Catalog => Ok((report::catalog(&catalog_names()), 0)),
        Command::Cohomology { file, window } | Command::Classify { file, window } => {
            ctx.opts.window = window.as_ref().map(|w| (w[0], w[1]));
            let data = load(file)?;
            let out = with_field!(field_of(&data, &ctx), K => single::<K>(&cli.command, &data, &mut ctx))?;
            Ok((out, 0))
        }
        Command::Lattice { file } | Command::Module { file } | Command::Free { file } | Command::Stablefree { file } => {
            let data = load(file)?;
            let out = with_field!(field_of(&data, &ctx), K => single::<K>(&cli.command, &data, &mut ctx))?;
            Ok((out, 0))
        }
        Command::Compare { file1, file2 } => {
            let (d1, d2) = (load(file1)?, load(file2)?);
            let (l1, s1) = with_field!(field_of(&d1, &ctx), K => side::<K>(&d1, &mut ctx))?;
            let (l2, s2) = with_field!(field_of(&d2, &ctx), K => side::<K>(&d2, &mut ctx))?;
            let verdict = lattices_isomorphic(&l1, &l2);
            Ok((report::compare([file1, file2], [&s1, &s2], &verdict), 0))
        }
        Command::Search {
            n,
            k,
            property,
            pool,
            essential_only,
            cap,
        } => {
            let (klo, khi) = parse_range(k, 1)?;
            if klo < 1 {
                return Err(Error::Usage("k must be at least 1".into()));
            }
            let spec_field = ctx.field.unwrap_or(FieldSpec::Prime(5));
            let values: Vec<i64> = match spec_field {
                FieldSpec::Rational => {
                    let (a, b) = parse_range(pool, 0)?;
                    (a..=b).collect()
                }
                FieldSpec::Prime(p) => (0..p as i64).collect(),
            };
            let spec = EnumerationSpec {
                n: *n,
                ks: (klo as usize..=khi as usize).collect(),
                values,
                essential_only: *essential_only,
                cap: *cap,
            };
            let (rep, stats) = with_field!(spec_field, K => harness::search::<K>(
                &spec,
                (*property).into(),
                &ctx.opts,
                ctx.cache.as_mut(),
            ))?;
            if let Some(c) = &ctx.cache {
                eprintln!(
                    "cache {}: {} hits, {} new records",
                    c.file_path().display(),
                    stats.cache_hits,
                    stats.cache_added
                );
            }
            let code = if rep.summary.undecided_members > 0 { 2 } else { 0 };
            Ok((report::search(&rep), code))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::UnknownCatalogName { .. }
        | Error::UnsupportedField(_)
        | Error::InvalidArrangement(_)
        | Error::Usage(_)
        | Error::Io(_) => 1,
        Error::BudgetExhausted { .. } => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.global.json;
    match run(cli) {
        Ok((out, code)) => {
            let text = if json { format!("{}\n", out.json_string()) } else { out.text };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            let code = exit_code(&e);
            let prefix = match code {
                2 => "undecided",
                3 => "internal error (this is a bug)",
                _ => "error",
            };
            eprintln!("{prefix}: {e}");
            if json {
                let doc = json!({
                    "schema": report::SCHEMA,
                    "error": { "exit_code": code, "message": e.to_string() },
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            ExitCode::from(code)
        }
    }
}
