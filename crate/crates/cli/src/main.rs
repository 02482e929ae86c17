//! `birkhoff`: volumes, Ehrhart polynomials and magic-square counts for the
//! Birkhoff polytope.
//!
//! Exit codes: 0 success, 2 usage, 3 invalid face, 4 record budget exceeded,
//! 5 a `--verify` cross-check failed, 1 anything else.

use std::path::PathBuf;
use std::process::ExitCode;

use birkhoff::ehrhart::{ehrhart_polynomial, MagicCounter};
use birkhoff::montecarlo::{estimate_alpha_partitioned, exact_alpha, DEFAULT_PARTITIONS};
use birkhoff::triangulate::{
    build_lattice, census_minimal_simplices, true_volume, BuildOptions, Canonicalization,
    FaceLattice, DEFAULT_RECORD_CAP,
};
use birkhoff::young::verify_conjecture;
use birkhoff::{known_relative_volume, BinaryMatrix, Error};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "birkhoff", version, about = "Exact volumes of the Birkhoff polytope and its faces")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Maximum number of face records a lattice build may hold.
    #[arg(long, global = true, default_value_t = DEFAULT_RECORD_CAP)]
    memory_cap: usize,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Run cross-checks and exit with code 5 on mismatch.
    #[arg(long, global = true)]
    verify: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Relative and Euclidean volume of B_n by triangulation.
    Volume {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Canon::Scores)]
        canonicalization: Canon,
        /// Write the face lattice as JSON to this file.
        #[arg(long)]
        dump_lattice: Option<PathBuf>,
    },
    /// Relative volume of a face given as a 0-1 matrix file.
    FaceVolume {
        #[arg(long)]
        face: PathBuf,
        #[arg(long, value_enum, default_value_t = Canon::Scores)]
        canonicalization: Canon,
        #[arg(long)]
        dump_lattice: Option<PathBuf>,
    },
    /// Ehrhart polynomial of B_n in the basis C(t+n-1+k, n-1+2k).
    Ehrhart {
        #[arg(long)]
        n: usize,
    },
    /// Number of n x n magic squares with line sum t.
    MagicCount {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: u32,
    },
    /// Monte Carlo estimate of vol(A_n) / vol(C_n).
    Montecarlo {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independent RNG streams; part of the reproducibility contract.
        #[arg(long, default_value_t = DEFAULT_PARTITIONS)]
        partitions: u32,
    },
    /// Checks vol(F_n) against the product of the first n-1 Catalan numbers.
    Conjecture {
        #[arg(long)]
        n: usize,
    },
    /// Counts minimal simplices of B_n and those in some standard triangulation.
    Census {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Canon {
    Scores,
    Exact,
    Off,
}

impl From<Canon> for Canonicalization {
    fn from(c: Canon) -> Self {
        match c {
            Canon::Scores => Self::Scores,
            Canon::Exact => Self::Exact,
            Canon::Off => Self::Off,
        }
    }
}

/// A failed command: exit code plus message, and optionally a report to
/// print anyway.
struct Failure {
    code: u8,
    message: String,
    report: Option<Report>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::OrderOutOfRange(_) | Error::OrderMismatch(..) | Error::Unsupported(_) => 2,
            Error::Parse { .. } | Error::InvalidFace(_) | Error::InvalidPermutation(_) => 3,
            Error::BudgetExceeded { .. } => 4,
        };
        let report = match &e {
            Error::BudgetExceeded { stats, .. } => Some(Report {
                json: json!({ "error": "budget_exceeded", "partial_stats": stats }),
                text: format!(
                    "partial records per level: {}",
                    stats
                        .levels
                        .iter()
                        .map(|l| format!("dim {}: {}", l.dim, l.records))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            }),
            _ => None,
        };
        Self {
            code,
            message: e.to_string(),
            report,
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
        report: None,
    }
}

fn mismatch(message: impl Into<String>) -> Failure {
    fail(5, message)
}

struct Report {
    json: Value,
    text: String,
}

impl Report {
    fn print(&self, as_json: bool) {
        if as_json {
            println!("{}", serde_json::to_string_pretty(&self.json).expect("serializable"));
        } else {
            println!("{}", self.text);
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(report) => {
            report.print(cli.json);
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(report) = &f.report {
                report.print(cli.json);
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Volume {
            n,
            canonicalization,
            dump_lattice,
        } => {
            let top = BinaryMatrix::full(*n)?;
            let lattice = build(cli, &top, *canonicalization, dump_lattice.as_ref())?;
            volume(cli, *n, &lattice)
        }
        Command::FaceVolume {
            face,
            canonicalization,
            dump_lattice,
        } => face_volume(cli, face, *canonicalization, dump_lattice.as_ref()),
        Command::Ehrhart { n } => ehrhart(cli, *n),
        Command::MagicCount { n, t } => magic_count(cli, *n, *t),
        Command::Montecarlo {
            n,
            trials,
            seed,
            partitions,
        } => montecarlo(cli, *n, *trials, *seed, *partitions),
        Command::Conjecture { n } => conjecture(cli, *n),
        Command::Census { n } => census(cli, *n),
    }
}

fn build(
    cli: &Cli,
    top: &BinaryMatrix,
    canonicalization: Canon,
    dump: Option<&PathBuf>,
) -> Result<FaceLattice, Failure> {
    let options = BuildOptions {
        canonicalization: canonicalization.into(),
        record_cap: cli.memory_cap,
    };
    let lattice = build_lattice(top, &options)?;
    if let Some(path) = dump {
        let text = serde_json::to_string(&lattice.to_json()).expect("serializable");
        std::fs::write(path, text).map_err(|e| fail(1, format!("{}: {e}", path.display())))?;
    }
    Ok(lattice)
}

fn stats_text(lattice: &FaceLattice) -> String {
    let stats = lattice.stats();
    let per_level: Vec<String> = stats.levels.iter().map(|l| l.records.to_string()).collect();
    format!(
        "records per level (dim {} down to 0): {}\ntotal records: {}, parent links: {}",
        lattice.dimension(),
        per_level.join(" "),
        stats.total_records(),
        stats.total_pointers()
    )
}

fn volume(cli: &Cli, n: usize, lattice: &FaceLattice) -> Result<Report, Failure> {
    let relvol = lattice.relative_volume();
    if cli.verify {
        if let Some(known) = known_relative_volume(n) {
            if known != relvol {
                return Err(mismatch(format!("relative volume {relvol} differs from published {known}")));
            }
        }
        let p = ehrhart_polynomial(n)?;
        if p.relative_volume() != &relvol {
            return Err(mismatch(format!(
                "triangulation gives {relvol}, Ehrhart leading coefficient {}",
                p.relative_volume()
            )));
        }
    }
    let truevol = true_volume(n, &relvol);
    Ok(Report {
        json: json!({
            "n": n,
            "dimension": lattice.dimension(),
            "relative_volume": relvol.to_string(),
            "true_volume": truevol.to_string(),
            "stats": lattice.stats(),
        }),
        text: format!(
            "relative volume of B_{n}: {relvol}\ntrue volume: {truevol}\n{}",
            stats_text(lattice)
        ),
    })
}

fn face_volume(
    cli: &Cli,
    path: &PathBuf,
    canonicalization: Canon,
    dump: Option<&PathBuf>,
) -> Result<Report, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(3, format!("{}: {e}", path.display())))?;
    let input: BinaryMatrix = text.parse()?;
    let face = input.face_closure();
    if face.is_zero() {
        return Err(fail(3, "the matrix contains no permutation matrix"));
    }
    let closed = face != input;
    if closed {
        eprint!("warning: input is not a face; using its closure:\n{face}");
    }
    let lattice = build(cli, &face, canonicalization, dump)?;
    let relvol = lattice.relative_volume();
    if cli.verify {
        let exact = build_lattice(
            &face,
            &BuildOptions {
                canonicalization: Canonicalization::Exact,
                record_cap: cli.memory_cap,
            },
        )?
        .relative_volume();
        if exact != relvol {
            return Err(mismatch(format!("score canonicalization gives {relvol}, exact gives {exact}")));
        }
    }
    Ok(Report {
        json: json!({
            "n": face.n(),
            "face": face.to_string(),
            "closed_from_input": closed,
            "dimension": face.dimension(),
            "vertices": face.vertices().len(),
            "relative_volume": relvol.to_string(),
            "stats": lattice.stats(),
        }),
        text: format!(
            "dimension: {}\nvertices: {}\nrelative volume: {relvol}\n{}",
            face.dimension(),
            face.vertices().len(),
            stats_text(&lattice)
        ),
    })
}

fn ehrhart(cli: &Cli, n: usize) -> Result<Report, Failure> {
    let p = ehrhart_polynomial(n)?;
    if cli.verify {
        if let Some(known) = known_relative_volume(n) {
            if &known != p.relative_volume() {
                return Err(mismatch(format!(
                    "leading coefficient {} differs from published {known}",
                    p.relative_volume()
                )));
            }
        }
        let ni = n as i64;
        let sign = if n % 2 == 1 { 1 } else { -1 };
        for t in 1..ni {
            if p.evaluate(-t) != 0.into() {
                return Err(mismatch(format!("e(B_{n}, -{t}) is not zero")));
            }
        }
        for t in 0..=ni * (ni - 1) / 2 {
            if p.evaluate(-ni - t) != sign * p.evaluate(t) {
                return Err(mismatch(format!("reflection identity fails at t={t}")));
            }
        }
        // Triangulation is practical through n = 6.
        if n <= 6 {
            let vol = birkhoff::relative_volume(&BinaryMatrix::full(n)?)?;
            if &vol != p.relative_volume() {
                return Err(mismatch(format!(
                    "leading coefficient {} differs from triangulation {vol}",
                    p.relative_volume()
                )));
            }
        }
    }
    Ok(Report {
        json: p.to_json(),
        text: format!("e(B_{n}, t) = {p}"),
    })
}

fn magic_count(cli: &Cli, n: usize, t: u32) -> Result<Report, Failure> {
    let count = MagicCounter::new(n, t)?.count(t)?;
    if cli.verify {
        let p = ehrhart_polynomial(n)?;
        let predicted = p.evaluate(i64::from(t));
        if predicted != count {
            return Err(mismatch(format!("count {count} differs from polynomial value {predicted}")));
        }
    }
    Ok(Report {
        json: json!({ "n": n, "t": t, "count": count.to_string() }),
        text: count.to_string(),
    })
}

fn montecarlo(cli: &Cli, n: usize, trials: u64, seed: u64, partitions: u32) -> Result<Report, Failure> {
    let exact = known_relative_volume(n).map(|v| exact_alpha(n, &v));
    if let Some(alpha) = &exact {
        let predicted = alpha.to_f64().unwrap_or(0.0) * trials as f64;
        if predicted < 10.0 {
            eprintln!(
                "warning: only about {predicted:.2} hits expected in {trials} trials; the estimate will be unreliable"
            );
        }
    }
    let report = estimate_alpha_partitioned(n, trials, seed, partitions)?;
    if cli.verify {
        if let Some(alpha) = &exact {
            let a = alpha.to_f64().unwrap_or(0.0);
            if (report.alpha_hat - a).abs() > 5.0 * report.stderr {
                return Err(mismatch(format!(
                    "estimate {} is more than 5 standard errors from {alpha}",
                    report.alpha_hat
                )));
            }
        }
    }
    let mut value = serde_json::to_value(&report).expect("serializable");
    if let Some(alpha) = &exact {
        value["exact_alpha"] = json!(alpha.to_string());
    }
    let mut text = format!(
        "n={n} trials={trials} hits={} alpha_hat={:.6} stderr={:.6} seed={seed}",
        report.hits, report.alpha_hat, report.stderr
    );
    if let Some(alpha) = &exact {
        text.push_str(&format!("\nexact alpha: {alpha} ({:.6})", alpha.to_f64().unwrap_or(0.0)));
    }
    Ok(Report { json: value, text })
}

fn conjecture(cli: &Cli, n: usize) -> Result<Report, Failure> {
    let options = BuildOptions {
        record_cap: cli.memory_cap,
        ..BuildOptions::default()
    };
    let check = verify_conjecture(n, &options)?;
    let report = Report {
        json: json!({
            "n": n,
            "volume": check.volume.to_string(),
            "expected": check.expected.to_string(),
            "holds": check.holds(),
        }),
        text: if check.holds() {
            format!("verified: {}", check.volume)
        } else {
            format!("FAILED: volume {} but Catalan product {}", check.volume, check.expected)
        },
    };
    if check.holds() {
        Ok(report)
    } else {
        Err(Failure {
            code: 5,
            message: "conjecture check failed".into(),
            report: Some(report),
        })
    }
}

fn census(cli: &Cli, n: usize) -> Result<Report, Failure> {
    let c = census_minimal_simplices(n)?;
    if cli.verify && n == 4 && (c.total, c.in_standard) != (658_584, 641_112) {
        return Err(mismatch(format!(
            "census gives {} / {}, published 658584 / 641112",
            c.total, c.in_standard
        )));
    }
    Ok(Report {
        json: json!({ "n": n, "minimal_simplices": c.total, "in_standard": c.in_standard }),
        text: format!(
            "minimal simplices: {}\nin some standard triangulation: {}",
            c.total, c.in_standard
        ),
    })
}
