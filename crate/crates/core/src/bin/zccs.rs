//! `zccs`: construct, verify and catalog ZPU matrices from the command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 a verified claim is
//! false, 3 internal failure (postcondition or oracle disagreement).

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use zccs_core::constructions::{catalog_families, default_seeds, SeedChoice, UnifyingMode};
use zccs_core::correlation::{accf_sum_matrix, check_optimal, is_zpu};
use zccs_core::io::{CodeSetDocument, Format};
use zccs_core::oracle;
use zccs_core::recipe::{evaluate, BhSpec, Constructed, Recipe, Source};
use zccs_core::report::VerifySummary;
use zccs_core::Error;

#[derive(Parser)]
#[command(
    name = "zccs",
    version,
    about = "Exact construction and verification of Z-paraunitary matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code matrix and emit it as a document.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Report energy, zone width, PU/ZPU and optimality of a document.
    Verify {
        /// Document path, or `-` for standard input.
        document: String,
        /// Zone width to check; overrides the width recorded in the document.
        #[arg(long)]
        claim_z: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Recompute every ACCF sum by the direct double loop and compare.
    Oracle {
        document: String,
        #[arg(long)]
        json: bool,
    },
    /// List verified seed-and-extend families.
    Catalog {
        #[arg(long, default_value_t = 4096)]
        max_l: usize,
        #[arg(long)]
        max_m: Option<usize>,
        #[arg(long)]
        max_k: Option<usize>,
        /// Seed pairs as UM:UK, comma separated (default H2:H4,F3:BH63,H4:H8,F3:F6).
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Json, global = true)]
    format: FormatArg,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Table,
    Signs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Interleave,
    Concatenate,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// (1_P⊗U_M)·D_K(z)·U_K from two BH matrices.
    Seed {
        #[arg(long)]
        um: String,
        #[arg(long)]
        uk: String,
    },
    /// U_M·D_M(z)·G(z^M), multiplying length and zone width by M.
    Extend {
        #[arg(long)]
        um: String,
        /// Input document path, BH name, or `-` for standard input.
        #[arg(long, alias = "seed-file")]
        seed: String,
        /// Zone width of the input; defaults to its recorded or achieved width.
        #[arg(long)]
        z: Option<usize>,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
    },
    /// Combine a K×K PU matrix and an M×M PU matrix.
    Unifying {
        #[arg(long)]
        g0: String,
        #[arg(long)]
        g1: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Interleave)]
        mode: ModeArg,
    },
    /// Recursive PU generator with identical stages.
    PuRecursive {
        /// P×P stage matrix.
        #[arg(long)]
        a: String,
        #[arg(long)]
        u0: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Stage delay exponents as a permutation of 0..N.
        #[arg(long, value_delimiter = ',')]
        pi: Option<Vec<usize>>,
    },
    /// X·Y for PU X and ZPU Y.
    Product {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: Option<usize>,
    },
    /// X⊗Y for ZPU X and PU Y.
    Kron {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: Option<usize>,
    },
    /// Entrywise complex conjugate.
    Conjugate {
        #[arg(long)]
        x: String,
    },
    /// Evaluate a JSON recipe file (or `-`).
    Recipe {
        #[arg(long)]
        config: String,
    },
}

/// Failure carrying a specific exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

struct CliLoader {
    stdin: Option<String>,
}

impl CliLoader {
    fn read(&mut self, name: &str) -> zccs_core::Result<String> {
        if name == "-" {
            if self.stdin.is_none() {
                let mut buf = String::new();
                std::io::stdin().read_to_string(&mut buf).map_err(|e| {
                    Error::InvalidArgument(format!("cannot read standard input: {e}"))
                })?;
                self.stdin = Some(buf);
            }
            return Ok(self.stdin.clone().unwrap_or_default());
        }
        std::fs::read_to_string(name)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {name}: {e}")))
    }
}

fn name(s: &str) -> BhSpec {
    BhSpec::Name(s.to_string())
}

fn source(s: &str) -> Source {
    Source::Name(s.to_string())
}

fn recipe_of(kind: &ConstructKind, loader: &mut CliLoader) -> anyhow::Result<Recipe> {
    Ok(match kind {
        ConstructKind::Seed { um, uk } => Recipe::Seed {
            um: name(um),
            uk: name(uk),
        },
        ConstructKind::Extend {
            um,
            seed,
            z,
            repeat,
        } => Recipe::Extend {
            um: name(um),
            seed: source(seed),
            z: *z,
            repeat: Some(*repeat),
        },
        ConstructKind::Unifying { g0, g1, mode } => Recipe::Unifying {
            g0: source(g0),
            g1: source(g1),
            mode: match mode {
                ModeArg::Interleave => UnifyingMode::Interleave,
                ModeArg::Concatenate => UnifyingMode::Concatenate,
            },
        },
        ConstructKind::PuRecursive { a, u0, n, pi } => Recipe::PuRecursive {
            a: Some(name(a)),
            n: Some(*n),
            stages: None,
            u0: name(u0),
            pi: pi.clone(),
            row_perms: None,
            col_perms: None,
        },
        ConstructKind::Product { x, y, z } => Recipe::Product {
            x: source(x),
            y: source(y),
            z: *z,
        },
        ConstructKind::Kron { x, y, z } => Recipe::Kron {
            x: source(x),
            y: source(y),
            z: *z,
        },
        ConstructKind::Conjugate { x } => Recipe::Conjugate { x: source(x) },
        ConstructKind::Recipe { config } => {
            let text = loader.read(config)?;
            serde_json::from_str(&text).with_context(|| format!("invalid recipe in {config}"))?
        }
    })
}

fn write_output(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn check_postcondition(c: &Constructed) -> anyhow::Result<()> {
    let Some(z) = c.claimed_z else { return Ok(()) };
    let holds = is_zpu(&c.matrix, z).unwrap_or(false);
    if !holds {
        return Err(Exit(
            3,
            format!("constructed matrix is not ZPU at its guaranteed width Z={z}"),
        )
        .into());
    }
    Ok(())
}

fn construct(kind: &ConstructKind, output: &OutputArgs) -> anyhow::Result<()> {
    let mut loader = CliLoader { stdin: None };
    let recipe = recipe_of(kind, &mut loader)?;
    let constructed = evaluate(&recipe, &mut |n: &str| loader.read(n))?;
    check_postcondition(&constructed)?;
    let mut doc = CodeSetDocument::from_matrix(&constructed.matrix).map_err(|e| match e {
        Error::NotUnimodular(msg) => anyhow::anyhow!(
            "the result is not a unimodular code set and has no document form: {msg}"
        ),
        other => other.into(),
    })?;
    doc.metadata.construction = Some(serde_json::to_value(&recipe)?);
    doc.metadata.claimed_z = constructed.claimed_z;
    let format = match output.format {
        FormatArg::Json => Format::Json,
        FormatArg::Table => Format::Table,
        FormatArg::Signs => Format::Signs,
    };
    write_output(&doc.emit(format)?, output.out.as_ref())
}

fn load_doc(path: &str) -> anyhow::Result<CodeSetDocument> {
    let text = CliLoader { stdin: None }.read(path)?;
    Ok(CodeSetDocument::parse(&text)?)
}

fn verify(document: &str, claim_z: Option<usize>, json: bool) -> anyhow::Result<()> {
    let doc = load_doc(document)?;
    let report = check_optimal(&doc.to_matrix()?)?;
    let summary = VerifySummary::new(&report, claim_z.or(doc.metadata.claimed_z))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&summary)?);
    } else {
        print!("{summary}");
    }
    if !summary.claim_holds() {
        return Err(Exit(2, "claimed zone width does not hold".into()).into());
    }
    Ok(())
}

fn run_oracle(document: &str, json: bool) -> anyhow::Result<()> {
    let doc = load_doc(document)?;
    let grid = doc.to_grid()?;
    let accf = accf_sum_matrix(&doc.to_matrix()?)?;
    let outcome = oracle::compare(&grid, &accf)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&outcome)?);
    } else {
        println!("coefficients checked  {}", outcome.coefficients_checked);
        println!("exact agreement       {}", outcome.exact_agreement);
        println!("max float error       {:.3e}", outcome.max_float_error);
        if let Some((mu, nu, tau)) = outcome.first_disagreement {
            println!("first disagreement    mu={mu} nu={nu} tau={tau}");
        }
    }
    if !outcome.agrees() {
        return Err(Exit(3, "oracle disagrees with the polynomial path".into()).into());
    }
    Ok(())
}

fn parse_seeds(specs: &[String]) -> anyhow::Result<Vec<SeedChoice>> {
    if specs.is_empty() {
        return Ok(default_seeds());
    }
    specs
        .iter()
        .map(|s| match s.split_once(':') {
            Some((um, uk)) => Ok(SeedChoice::new(um, uk)),
            None => bail!("seed {s:?} is not of the form UM:UK"),
        })
        .collect()
}

fn catalog(
    max_l: usize,
    max_m: Option<usize>,
    max_k: Option<usize>,
    seeds: &[String],
    json: bool,
) -> anyhow::Result<()> {
    let seeds = parse_seeds(seeds)?;
    let rows: Vec<_> = catalog_families(max_l, &seeds)?
        .into_iter()
        .filter(|r| max_m.is_none_or(|m| r.m <= m) && max_k.is_none_or(|k| r.k <= k))
        .collect();
    if json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
        return Ok(());
    }
    println!(
        "{:>3} {:>3} {:>6} {:>6} {:>3} {:>8} {:>7}  command",
        "M", "K", "L", "Z", "q", "energy", "optimal"
    );
    for r in &rows {
        println!(
            "{:>3} {:>3} {:>6} {:>6} {:>3} {:>8} {:>7}  {}",
            r.m, r.k, r.l, r.z, r.q, r.energy, r.optimal, r.command
        );
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Construct { kind, output } => construct(&kind, &output),
        Command::Verify {
            document,
            claim_z,
            json,
        } => verify(&document, claim_z, json),
        Command::Oracle { document, json } => run_oracle(&document, json),
        Command::Catalog {
            max_l,
            max_m,
            max_k,
            seeds,
            json,
        } => catalog(max_l, max_m, max_k, &seeds, json),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(Exit(code, _)) = err.downcast_ref::<Exit>() {
        return *code;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::CoefficientOverflow(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
