use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use ahcert::report::{self, par_map, Certificate, Command, ExperimentConfig, SequenceSpec, Verdict};
use ahcert::{Rational, Space};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact finite-stage certificates for threshold-map inductive limits.
#[derive(Parser, Debug)]
#[command(name = "ahcert", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The ideal lattice collapses to a point: stage zero sets are up-sets.
    IdealCert(Flags),
    /// Comparison witness x*x = g orthogonal to phi(f) for f below t_{m-1}.
    Stability(Flags),
    /// Exponential decay bound on mu([0,s]) / mu([0,r]).
    Traceless(Flags),
    /// Ratio bound for Goodearl maps with multiplicities l_j.
    Goodearl(Flags),
    /// Approximately central 2x2 matrix copies and the commutator bound.
    ApproxDiv(Flags),
    /// Intertwining, triangularity and solvability of the beta tables.
    K0Verify(Flags),
    /// Sign decisions in the limit group for random K0 elements.
    TotalOrder(Flags),
    /// lambda monotonicity, section property and commuting squares.
    EmbedCheck(Flags),
    /// Every experiment; --out names a directory receiving one file each.
    All(Flags),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceArg {
    Interval,
    Cantor,
}

#[derive(Args, Debug, Clone)]
struct Flags {
    /// Base space; each experiment has its own default.
    #[arg(long, value_enum)]
    space: Option<SpaceArg>,
    /// `canonical`, `random:LEN:DEPTH`, or comma-separated points such as `1/2,1/4`.
    #[arg(long = "seq", default_value = "canonical", value_parser = parse_seq)]
    sequence: SequenceSpec,
    /// Stage index n.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    /// Tolerance as an exact rational `p/q`.
    #[arg(long, value_parser = parse_epsilon)]
    epsilon: Option<Rational>,
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    r: Option<String>,
    /// Lower end of the initial zero set for ideal-cert.
    #[arg(long)]
    cut: Option<String>,
    #[arg(long)]
    mesh_level: Option<u32>,
    /// `quadratic`, `constant:L` or `l1,l2,...`.
    #[arg(long)]
    multiplicity: Option<String>,
    /// Number of random corpus elements.
    #[arg(long)]
    corpus: Option<usize>,
    /// Number of random sample points or contractions.
    #[arg(long)]
    samples: Option<usize>,
    /// Longest window of sequence terms searched.
    #[arg(long, default_value_t = 100_000)]
    horizon: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// JSON output file (a directory for `all`); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Attach wall-clock milliseconds to the certificate.
    #[arg(long)]
    timing: bool,
}

fn parse_seq(text: &str) -> Result<SequenceSpec, String> {
    text.parse().map_err(|e: ahcert::Error| e.to_string())
}

fn parse_epsilon(text: &str) -> Result<Rational, String> {
    ExperimentConfig::parse_epsilon(text).map_err(|e| e.to_string())
}

impl Flags {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            space: self.space.map(|s| match s {
                SpaceArg::Interval => Space::Interval,
                SpaceArg::Cantor => Space::Cantor,
            }),
            sequence: self.sequence.clone(),
            n: self.n,
            depth: self.depth,
            epsilon: self.epsilon.clone(),
            s: self.s.clone(),
            r: self.r.clone(),
            cut: self.cut.clone(),
            mesh_level: self.mesh_level,
            multiplicity: self.multiplicity.clone(),
            corpus: self.corpus,
            samples: self.samples,
            horizon: self.horizon,
            seed: self.seed,
            jobs: self.jobs,
        }
    }
}

fn run_one(command: Command, flags: &Flags) -> Result<Certificate, ahcert::Error> {
    let start = Instant::now();
    let mut cert = report::run(command, &flags.config())?;
    if flags.timing {
        cert.wall_clock_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(cert)
}

fn write(path: &Path, cert: &Certificate) -> Result<(), String> {
    std::fs::write(path, cert.to_json() + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn single(command: Command, flags: &Flags) -> Result<Verdict, String> {
    let cert = run_one(command, flags).map_err(|e| format!("{command}: {e}"))?;
    match &flags.out {
        Some(path) => {
            write(path, &cert)?;
            println!("{}", cert.summary);
        }
        None => {
            eprintln!("{}", cert.summary);
            println!("{}", cert.to_json());
        }
    }
    Ok(cert.verdict)
}

fn all(flags: &Flags) -> Result<Verdict, String> {
    let dir = flags.out.clone().ok_or("`all` needs --out DIR")?;
    std::fs::create_dir_all(&dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    // Experiments run side by side; each runs its own corpus sequentially.
    let inner = Flags { jobs: 1, ..flags.clone() };
    let results = par_map(&Command::ALL, flags.jobs, |&c| run_one(c, &inner));
    let mut worst = Verdict::Certified;
    for (command, result) in Command::ALL.into_iter().zip(results) {
        let cert = result.map_err(|e| format!("{command}: {e}"))?;
        write(&dir.join(format!("{command}.json")), &cert)?;
        println!("{}", cert.summary);
        worst = match (worst, cert.verdict) {
            (Verdict::Failed, _) | (_, Verdict::Failed) => Verdict::Failed,
            (Verdict::HorizonExhausted, _) | (_, Verdict::HorizonExhausted) => Verdict::HorizonExhausted,
            _ => Verdict::Certified,
        };
    }
    Ok(worst)
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
    let result = match &cli.command {
        Cmd::IdealCert(f) => single(Command::IdealCert, f),
        Cmd::Stability(f) => single(Command::Stability, f),
        Cmd::Traceless(f) => single(Command::Traceless, f),
        Cmd::Goodearl(f) => single(Command::Goodearl, f),
        Cmd::ApproxDiv(f) => single(Command::ApproxDiv, f),
        Cmd::K0Verify(f) => single(Command::K0Verify, f),
        Cmd::TotalOrder(f) => single(Command::TotalOrder, f),
        Cmd::EmbedCheck(f) => single(Command::EmbedCheck, f),
        Cmd::All(f) => all(f),
    };
    match result {
        Ok(verdict) => ExitCode::from(verdict.exit_code() as u8),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
