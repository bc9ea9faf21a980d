//! Command-line surface for the toric string-operator verifier.
//!
//! Subcommands: `verify` checks the contradiction for a canonical embedding
//! or a serialized record, `enumerate` streams paradox sets as JSON lines,
//! `fringe` emits interference curves as CSV, and `oracle-check` certifies
//! the stabilizer engine against the dense state vector. Exit codes: 0
//! success / paradox confirmed, 1 domain-level negative result, 2 usage or
//! validation error, 3 I/O failure. Every flag can also be supplied via a
//! `TORIC_`-prefixed environment variable; flags win.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toric_ghz::{
    build_record_with, canonical_dset, dense_ground_state, equivalence_check, face_op,
    fringe_scan, generate_paradox_sets, ground_stabilizers, parity_contradiction, phi_grid,
    stabilized_dimension, vertex_op, DSet, DSetRecord, EquationRecord, InterferometryError,
    MeasurementEquation, PauliTerm, SampleMode, Sign, TorusLattice,
};

#[derive(Parser)]
#[command(
    name = "toric-ghz",
    version,
    about = "Exact verification of the toric-code string-operator contradiction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four-operator contradiction for a canonical embedding or a
    /// record file
    Verify(VerifyArgs),
    /// Stream paradox sets as JSON lines
    Enumerate(EnumerateArgs),
    /// Emit the interference fringe of one composite operation as CSV
    Fringe(FringeArgs),
    /// Certify the stabilizer engine against the dense state vector
    OracleCheck(OracleCheckArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct VerifyArgs {
    /// Lattice side length for the canonical embedding (k >= 3)
    #[arg(long, env = "TORIC_K", group = "source")]
    k: Option<usize>,
    /// Anchor vertex "r,c" for the canonical embedding (default 0,0)
    #[arg(long, env = "TORIC_ANCHOR", value_parser = parse_anchor, requires = "k")]
    anchor: Option<(usize, usize)>,
    /// Verify a serialized record instead of building one
    #[arg(long, env = "TORIC_INPUT", group = "source")]
    input: Option<PathBuf>,
    /// Report format on stdout
    #[arg(long, env = "TORIC_FORMAT", value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Lattice side length (3 or 4)
    #[arg(long, env = "TORIC_K")]
    k: usize,
    /// Largest edge count for the x- and z-loops
    #[arg(long, env = "TORIC_MAX_LOOP_LEN", default_value_t = 4)]
    max_loop_len: usize,
    /// Stop after this many emitted sets
    #[arg(long, env = "TORIC_LIMIT", default_value_t = 100)]
    limit: usize,
    /// Write JSON lines here instead of stdout
    #[arg(long, env = "TORIC_OUTPUT")]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct FringeArgs {
    /// Lattice side length for the canonical embedding (k >= 3)
    #[arg(long, env = "TORIC_K", group = "source")]
    k: Option<usize>,
    /// Anchor vertex "r,c" for the canonical embedding (default 0,0)
    #[arg(long, env = "TORIC_ANCHOR", value_parser = parse_anchor, requires = "k")]
    anchor: Option<(usize, usize)>,
    /// Take the operation set from a record file
    #[arg(long, env = "TORIC_INPUT", group = "source")]
    input: Option<PathBuf>,
    /// Which operation of the set to scan
    #[arg(long, env = "TORIC_OP", value_enum, default_value_t = OpChoice::D1)]
    op: OpChoice,
    /// Number of uniform phi points over [0, 2pi)
    #[arg(long, env = "TORIC_POINTS", default_value_t = 64)]
    points: usize,
    /// Sample this many shots per point instead of the analytic curve
    #[arg(long, env = "TORIC_SHOTS", requires = "seed")]
    shots: Option<u64>,
    /// Seed for shot sampling (point i uses seed + i)
    #[arg(long, env = "TORIC_SEED", requires = "shots")]
    seed: Option<u64>,
    /// Write CSV here instead of stdout
    #[arg(long, env = "TORIC_OUTPUT")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpChoice {
    D1,
    D2,
    D3,
    D4,
}

impl OpChoice {
    fn index(self) -> usize {
        match self {
            OpChoice::D1 => 0,
            OpChoice::D2 => 1,
            OpChoice::D3 => 2,
            OpChoice::D4 => 3,
        }
    }
}

#[derive(Args)]
struct OracleCheckArgs {
    /// Lattice side length (2 or 3; the dense oracle stops at 18 qubits)
    #[arg(long, env = "TORIC_K")]
    k: usize,
    /// Number of random Hermitian terms to classify both ways
    #[arg(long, env = "TORIC_TRIALS", default_value_t = 1000)]
    trials: usize,
    /// Seed for the trial generator
    #[arg(long, env = "TORIC_SEED", default_value_t = 1)]
    seed: u64,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn domain(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn io_failure(context: &str, err: std::io::Error) -> Failure {
    Failure {
        code: 3,
        message: format!("{context}: {err}"),
    }
}

fn parse_anchor(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(',')
        .ok_or_else(|| "expected \"r,c\"".to_string())?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad coordinate {v:?}: {e}"))
    };
    Ok((parse(r)?, parse(c)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Fringe(args) => cmd_fringe(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// Build the canonical set for (k, anchor), mapping geometry errors to
/// usage failures.
fn canonical_source(k: usize, anchor: Option<(usize, usize)>) -> Result<(TorusLattice, DSet), Failure> {
    let lattice = TorusLattice::new(k).map_err(|e| usage(e.to_string()))?;
    let dset = canonical_dset(&lattice, anchor.unwrap_or((0, 0)))
        .map_err(|e| usage(e.to_string()))?;
    Ok((lattice, dset))
}

/// Load and structurally validate a record file.
fn record_source(path: &Path) -> Result<(TorusLattice, DSet, DSetRecord), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| io_failure(&format!("reading {}", path.display()), e))?;
    let record: DSetRecord = serde_json::from_str(&text)
        .map_err(|e| usage(format!("malformed record JSON in {}: {e}", path.display())))?;
    let dset = record.to_dset().map_err(|e| usage(e.to_string()))?;
    let lattice = TorusLattice::new(record.k).map_err(|e| usage(e.to_string()))?;
    Ok((lattice, dset, record))
}

fn open_sink(output: Option<&Path>) -> Result<Box<dyn std::io::Write>, Failure> {
    match output {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| io_failure(&format!("creating {}", path.display()), e))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn equations_of(record: &DSetRecord) -> Vec<MeasurementEquation> {
    record
        .equations
        .iter()
        .map(|eq| {
            MeasurementEquation::new(
                eq.terms.clone(),
                Sign::from_i8(eq.parity).expect("record parities validated"),
            )
            .expect("record terms validated")
        })
        .collect()
}

fn term_symbols(eq: &EquationRecord) -> String {
    let mut out = String::new();
    for (i, (qubit, axis)) in eq.terms.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{axis}{qubit}");
    }
    out
}

fn report_text(record: &DSetRecord, contradiction: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "k: {}", record.k);
    match record.anchor {
        Some([r, c]) => {
            let _ = writeln!(out, "anchor: {r},{c}");
        }
        None => {
            let _ = writeln!(out, "anchor: none");
        }
    }
    let _ = writeln!(out, "x_loop: {:?}", record.lx);
    let _ = writeln!(out, "lz1: {:?}", record.lz1);
    let _ = writeln!(out, "lz2: {:?}", record.lz2);
    for (i, eq) in record.equations.iter().enumerate() {
        let _ = writeln!(
            out,
            "D{} (eigenvalue {:+}): {}",
            i + 1,
            eq.parity,
            term_symbols(eq)
        );
    }
    let _ = writeln!(out, "lr_satisfying: {}", record.lr_satisfying);
    let _ = writeln!(out, "parity_contradiction: {contradiction}");
    let _ = writeln!(
        out,
        "verdict: {}",
        if record.lr_satisfying == 0 && contradiction {
            "paradox confirmed"
        } else {
            "paradox absent"
        }
    );
    out
}

/// Field-level differences between a stored record and its recomputation.
fn record_diff(stored: &DSetRecord, recomputed: &DSetRecord) -> Vec<String> {
    let mut diffs = Vec::new();
    for (i, (a, b)) in stored
        .equations
        .iter()
        .zip(&recomputed.equations)
        .enumerate()
    {
        if a.terms != b.terms {
            diffs.push(format!(
                "equations[{i}].terms: recorded {}, recomputed {}",
                term_symbols(a),
                term_symbols(b)
            ));
        }
        if a.parity != b.parity {
            diffs.push(format!(
                "equations[{i}].parity: recorded {:+}, recomputed {:+}",
                a.parity, b.parity
            ));
        }
    }
    if stored.eigenvalues != recomputed.eigenvalues {
        diffs.push(format!(
            "eigenvalues: recorded {:?}, recomputed {:?}",
            stored.eigenvalues, recomputed.eigenvalues
        ));
    }
    if stored.lr_satisfying != recomputed.lr_satisfying {
        diffs.push(format!(
            "lr_satisfying: recorded {}, recomputed {}",
            stored.lr_satisfying, recomputed.lr_satisfying
        ));
    }
    diffs
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let (lattice, dset, stored) = match (&args.input, args.k) {
        (Some(path), _) => {
            let (lattice, dset, record) = record_source(path)?;
            (lattice, dset, Some(record))
        }
        (None, Some(k)) => {
            let (lattice, dset) = canonical_source(k, args.anchor)?;
            (lattice, dset, None)
        }
        (None, None) => unreachable!("clap enforces the source group"),
    };
    let ground = ground_stabilizers(&lattice).map_err(|e| usage(e.to_string()))?;
    let recomputed =
        build_record_with(&lattice, &ground, &dset).map_err(|e| usage(e.to_string()))?;

    if let Some(stored) = stored {
        let diffs = record_diff(&stored, &recomputed);
        if !diffs.is_empty() {
            return Err(domain(format!(
                "record does not match recomputation:\n  {}",
                diffs.join("\n  ")
            )));
        }
    }

    let contradiction = parity_contradiction(&equations_of(&recomputed));
    match args.format {
        ReportFormat::Text => print!("{}", report_text(&recomputed, contradiction)),
        ReportFormat::Json => {
            println!(
                "{}",
                serde_json::to_string(&recomputed).expect("record serialization is infallible")
            );
        }
    }
    if recomputed.lr_satisfying == 0 && contradiction {
        Ok(())
    } else {
        Err(domain("paradox absent for this operation set"))
    }
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), Failure> {
    let lattice = TorusLattice::new(args.k).map_err(|e| usage(e.to_string()))?;
    let stream = generate_paradox_sets(&lattice, args.max_loop_len, args.limit)
        .map_err(|e| usage(e.to_string()))?;
    let ground = ground_stabilizers(&lattice).map_err(|e| usage(e.to_string()))?;
    let mut sink = open_sink(args.output.as_deref())?;
    let mut count = 0usize;
    for dset in stream {
        let record = build_record_with(&lattice, &ground, &dset)
            .map_err(|e| usage(e.to_string()))?;
        let line = serde_json::to_string(&record).expect("record serialization is infallible");
        writeln!(sink, "{line}").map_err(|e| io_failure("writing stream", e))?;
        count += 1;
    }
    sink.flush().map_err(|e| io_failure("flushing stream", e))?;
    eprintln!(
        "emitted {count} sets (k={}, max_loop_len={}, limit={})",
        args.k, args.max_loop_len, args.limit
    );
    Ok(())
}

fn cmd_fringe(args: FringeArgs) -> Result<(), Failure> {
    let (lattice, dset) = match (&args.input, args.k) {
        (Some(path), _) => {
            let (lattice, dset, _) = record_source(path)?;
            (lattice, dset)
        }
        (None, Some(k)) => canonical_source(k, args.anchor)?,
        (None, None) => unreachable!("clap enforces the source group"),
    };
    let ground = ground_stabilizers(&lattice).map_err(|e| usage(e.to_string()))?;
    let op = &dset.ops()[args.op.index()];
    let mode = match args.shots {
        Some(shots) => SampleMode::Sampled {
            shots,
            seed: args.seed.expect("clap ties seed to shots"),
        },
        None => SampleMode::Analytic,
    };
    let phis = phi_grid(args.points);
    let series = fringe_scan(&lattice, &ground, op, &phis, mode).map_err(|e| match e {
        InterferometryError::WouldDecohere { .. } => domain(e.to_string()),
        InterferometryError::ZeroShots => usage(e.to_string()),
        other => usage(other.to_string()),
    })?;
    let mut sink = open_sink(args.output.as_deref())?;
    sink.write_all(series.to_csv().as_bytes())
        .map_err(|e| io_failure("writing CSV", e))?;
    sink.flush().map_err(|e| io_failure("flushing CSV", e))?;
    eprintln!(
        "theta = {:.11e} ({} points, {})",
        series.theta(),
        args.points,
        match mode {
            SampleMode::Analytic => "analytic".to_string(),
            SampleMode::Sampled { shots, seed } => format!("{shots} shots, seed {seed}"),
        }
    );
    Ok(())
}

fn cmd_oracle_check(args: OracleCheckArgs) -> Result<(), Failure> {
    if args.k > 3 {
        return Err(usage(format!(
            "the dense oracle covers k <= 3 (2k^2 <= 18 qubits); got k = {}",
            args.k
        )));
    }
    let lattice = TorusLattice::new(args.k).map_err(|e| usage(e.to_string()))?;
    let report = equivalence_check(&lattice, args.trials, args.seed)
        .map_err(|e| usage(e.to_string()))?;
    println!("trials: {}", report.trials);
    println!("member_trials: {}", report.member_trials);
    println!("mismatches: {}", report.mismatches.len());
    for mismatch in &report.mismatches {
        println!(
            "  trial {}: engine {} vs dense {} on {}",
            mismatch.trial, mismatch.engine_value, mismatch.dense_value, mismatch.term
        );
    }

    let k = args.k;
    let expansion = dense_ground_state(&lattice).map_err(|e| usage(e.to_string()))?;
    let expected_norm = 2f64.powf(-((k * k + 1) as f64) / 2.0);
    let norm_ok = (expansion.normalization - expected_norm).abs() < 1e-12;
    println!(
        "normalization: {:.12e} (expected {:.12e})",
        expansion.normalization, expected_norm
    );

    let degeneracy_ok = if k == 2 {
        let mut gens: Vec<PauliTerm> = Vec::new();
        for (r, c) in lattice.vertices() {
            if (r, c) != (k - 1, k - 1) {
                gens.push(vertex_op(&lattice, r, c).map_err(|e| usage(e.to_string()))?);
            }
        }
        for (r, c) in lattice.faces() {
            if (r, c) != (k - 1, k - 1) {
                gens.push(face_op(&lattice, r, c).map_err(|e| usage(e.to_string()))?);
            }
        }
        let dim = stabilized_dimension(lattice.edge_count(), &gens)
            .map_err(|e| usage(e.to_string()))?;
        println!("degeneracy: {dim:.1} (expected 4.0)");
        (dim - 4.0).abs() < 1e-9
    } else {
        println!("degeneracy: skipped (dense trace bound is 12 qubits)");
        true
    };

    let clean = report.is_clean() && norm_ok && degeneracy_ok;
    println!("verdict: {}", if clean { "clean" } else { "mismatch" });
    if clean {
        Ok(())
    } else {
        Err(domain("oracle check found disagreements"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_parsing() {
        assert_eq!(parse_anchor("1,2").unwrap(), (1, 2));
        assert_eq!(parse_anchor(" 0 , 0 ").unwrap(), (0, 0));
        assert!(parse_anchor("12").is_err());
        assert!(parse_anchor("a,b").is_err());
    }

    #[test]
    fn cli_declaration_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
