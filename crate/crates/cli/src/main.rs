use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use multstrat::field::Field;
use multstrat_cli::config::ConfigFile;
use multstrat_cli::problem::parse_field;
use multstrat_cli::{dispatch, Command, Options, VerifyTarget};

#[derive(Parser)]
#[command(name = "multstrat", version, about = "Multiplicity strata, finite covers and blow-ups")]
struct Cli {
    /// Override the field declared in the problem file, e.g. `Q` or `GF(5)`.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    /// Prime modulus for the point-counting oracle.
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Hilbert-Samuel depth used by the oracle.
    #[arg(long, global = true)]
    nmax: Option<u32>,
    /// Cap on reduction steps per Groebner computation.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for genericity draws.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Maximal chart-path depth for sequences.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Print the canonical JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Recompute the oracle multiplicity at a witness printed by a FAIL verdict.
    #[arg(long, global = true)]
    replay: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Multiplicity at the point.
    Mult { file: PathBuf },
    /// Hilbert-Samuel function up to --nmax.
    Hs { file: PathBuf },
    /// Tangent cone and its Hilbert series.
    TangentCone { file: PathBuf },
    /// Codimension of the cone stratum of the tangent cone.
    Tau { file: PathBuf },
    /// Oracle multiplicity of every GF(q) point.
    Stratify { file: PathBuf },
    /// Cone stratum of a homogeneous ideal.
    ConeStratum { file: PathBuf },
    /// Finite projection and minimal polynomials.
    Cover { file: PathBuf },
    /// Complete-intersection approximation of the cover.
    Ci { file: PathBuf },
    /// Charts, strict transforms and fiber points.
    Blowup { file: PathBuf },
    /// Sequence of blow-ups with a per-stage audit.
    Sequence { file: PathBuf },
    /// Check a statement and print PASS/FAIL verdicts.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        file: PathBuf,
    },
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("cannot read stdin: {e}"))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match ConfigFile::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut o = config.apply(Options::default());
    o.field = cli.field;
    o.q = cli.q.or(o.q);
    o.nmax = cli.nmax.unwrap_or(o.nmax);
    o.budget = cli.budget.unwrap_or(o.budget);
    o.seed = cli.seed.unwrap_or(o.seed);
    o.depth = cli.depth.unwrap_or(o.depth);
    o.replay = cli.replay;

    let (cmd, file) = match cli.cmd {
        Cmd::Mult { file } => (Command::Mult, file),
        Cmd::Hs { file } => (Command::Hs, file),
        Cmd::TangentCone { file } => (Command::TangentCone, file),
        Cmd::Tau { file } => (Command::Tau, file),
        Cmd::Stratify { file } => (Command::Stratify, file),
        Cmd::ConeStratum { file } => (Command::ConeStratum, file),
        Cmd::Cover { file } => (Command::Cover, file),
        Cmd::Ci { file } => (Command::Ci, file),
        Cmd::Blowup { file } => (Command::Blowup, file),
        Cmd::Sequence { file } => (Command::Sequence, file),
        Cmd::Verify { target, file } => (Command::Verify(target), file),
    };
    let text = match read_input(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = dispatch(&cmd, &text, &o);
    if cli.json {
        print!("{}", report.canonical_json());
    } else {
        print!("{}", report.human());
    }
    ExitCode::from(report.exit_code() as u8)
}
