use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use selfsim::catalog::{construct, entries, entry, CatalogParams};
use selfsim::json::{from_str, to_pretty, AlgebraJson, CatalogJson, OperatorJson, PsiJson, ThetaJson};
use selfsim::report::{verify, CheckKind, VerificationReport};
use selfsim::structure::{build_psi, check_conditions, ConditionProfile};
use selfsim::wreath::level_operator_matrix;

/// Build and verify self-similar Lie algebras.
#[derive(Parser)]
#[command(name = "selfsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog of example algebras.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Run checks on a catalog example and print the report.
    Verify {
        #[command(flatten)]
        example: ExampleArgs,
        /// Comma-separated: conditions, homo, faithful, transitive, states, recurrent, kernel.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Highest tensor level for level-based checks.
        #[arg(long, default_value_t = 3)]
        level: usize,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build ψ from an algebra, a virtual endomorphism and a profile.
    Psi {
        /// Algebra JSON.
        #[arg(long = "in")]
        input: PathBuf,
        /// Virtual endomorphism JSON.
        #[arg(long)]
        theta: PathBuf,
        /// abelian_B, witt_sl2:J0, frank:N, sl_np1:N, heisenberg, heisenberg_central.
        #[arg(long)]
        profile: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the matrix of an element on X^⊗m.
    Action {
        /// ψ JSON.
        #[arg(long = "in")]
        input: PathBuf,
        /// Element such as "q1 - 2*a0".
        #[arg(long)]
        element: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print verification report JSON files as text.
    Report {
        #[arg(long = "in", required = true, num_args = 1..)]
        input: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Print the entry table.
    List,
    /// Write a constructed entry as JSON.
    Dump {
        #[command(flatten)]
        example: ExampleArgs,
        #[arg(long, value_enum, default_value_t = Part::All)]
        part: Part,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Part {
    All,
    Algebra,
    Theta,
    Psi,
}

#[derive(Args)]
struct ExampleArgs {
    #[arg(long)]
    example: String,
    /// Characteristic; 0 selects the rationals.
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    /// Degree bound of truncated algebras.
    #[arg(long = "D", alias = "degree")]
    degree: Option<u32>,
    #[arg(long)]
    profile: Option<String>,
}

enum Failure {
    Usage(String),
    Checks(String),
}

impl From<selfsim::Error> for Failure {
    fn from(e: selfsim::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn params(args: &ExampleArgs) -> Result<CatalogParams, Failure> {
    let known = entry(&args.example).ok_or_else(|| {
        let names: Vec<&str> = entries().iter().map(|e| e.name).collect();
        Failure::Usage(format!("unknown example {}; available: {}", args.example, names.join(", ")))
    })?;
    let mut p = known.defaults;
    if let Some(v) = args.p {
        p.p = v;
    }
    if let Some(v) = args.n {
        p.n = v;
    }
    if let Some(v) = args.degree {
        p.degree = v;
    }
    if let Some(v) = &args.profile {
        p.profile = Some(v.clone());
    }
    Ok(p)
}

fn catalog_list() -> Outcome {
    let table = entries();
    let width = table.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for e in table {
        let d = &e.defaults;
        let mut defaults = format!("p={} n={} D={}", d.p, d.n, d.degree);
        if let Some(profile) = &d.profile {
            defaults.push_str(&format!(" profile={profile}"));
        }
        println!("{:<width$}  [{}] {}  ({})", e.name, e.params, e.anchor, defaults);
    }
    Ok(())
}

fn catalog_dump(example: &ExampleArgs, part: Part, out: &Path) -> Outcome {
    let object = construct(&example.example, &params(example)?)?;
    let dump = CatalogJson::from_object(&object);
    let missing = |what: &str| Failure::Usage(format!("{} has no {what}", example.example));
    let text = match part {
        Part::All => to_pretty(&dump),
        Part::Algebra => to_pretty(&dump.algebra),
        Part::Theta => to_pretty(&dump.theta.ok_or_else(|| missing("virtual endomorphism"))?),
        Part::Psi => to_pretty(&dump.psi.ok_or_else(|| missing("structure"))?),
    };
    write(out, &text)
}

fn run_verify(example: &ExampleArgs, checks: &[String], level: usize, out: Option<&Path>) -> Outcome {
    let kinds = if checks.is_empty() {
        CheckKind::ALL.to_vec()
    } else {
        checks
            .iter()
            .map(|c| c.trim().parse::<CheckKind>())
            .collect::<selfsim::Result<Vec<_>>>()?
    };
    let object = construct(&example.example, &params(example)?)?;
    let report = verify(&object, &kinds, level)?;
    print!("{}", report.to_text());
    if let Some(path) = out {
        write(path, &to_pretty(&report))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks("some checks failed".into()))
    }
}

fn run_psi(input: &Path, theta: &Path, profile: &str, out: &Path) -> Outcome {
    let algebra: AlgebraJson = from_str(&read(input)?)?;
    let algebra = Arc::new(algebra.to_algebra()?);
    let theta: ThetaJson = from_str(&read(theta)?)?;
    let ve = theta.to_endomorphism(algebra)?;
    let profile: ConditionProfile = profile.parse()?;
    let report = check_conditions(&profile, &ve)?;
    if let Some(f) = &report.failure {
        return Err(Failure::Checks(format!("{} [{}]: {}", f.identity, f.stage, f.witness)));
    }
    let psi = build_psi(&ve, &profile).map_err(|e| Failure::Checks(e.to_string()))?;
    for line in psi.describe() {
        println!("{line}");
    }
    write(out, &to_pretty(&PsiJson::from_structure(&psi)))
}

fn run_action(input: &Path, element: &str, level: usize, out: &Path) -> Outcome {
    let psi: PsiJson = from_str(&read(input)?)?;
    let psi = psi.to_structure()?;
    let a = psi.algebra().parse_element(element)?;
    let matrix = level_operator_matrix(&psi.engine(), &a, level)?;
    let op = OperatorJson::from_matrix(&matrix);
    println!("dim {}, {} nonzero entries", op.dim, op.entries.len());
    write(out, &to_pretty(&op))
}

fn run_report(inputs: &[PathBuf]) -> Outcome {
    let mut all = true;
    for path in inputs {
        let report: VerificationReport = from_str(&read(path)?)?;
        all &= report.passed();
        print!("{}", report.to_text());
    }
    let verdict = if all { "all checks passed" } else { "some checks failed" };
    println!("{verdict}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Catalog { command } => match command {
            CatalogCommand::List => catalog_list(),
            CatalogCommand::Dump { example, part, out } => catalog_dump(example, *part, out),
        },
        Command::Verify { example, checks, level, out } => run_verify(example, checks, *level, out.as_deref()),
        Command::Psi { input, theta, profile, out } => run_psi(input, theta, profile, out),
        Command::Action { input, element, level, out } => run_action(input, element, *level, out),
        Command::Report { input } => run_report(input),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
