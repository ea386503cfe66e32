//! Command-line front end: analyze, synthesize, verify, and shannon
//! workflows over the JSON file formats.
//!
//! Exit codes: 0 ok, 2 parse/input errors, 3 size guard, 4 failed
//! self-verification, 5 verification mismatch.

mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kinv::chains::{decrease, inversion_power};
use kinv::circuit::{check_weight_bound, Circuit};
use kinv::oracle::{scan_systems, scan_systems_sampled, ScanReport};
use kinv::synth::{best_omega, bounds, shannon_value, synthesize, t_value, BaseKind};
use kinv::{Basis, Error, FunctionSystem, Limits};

use report::{
    chain_points, chain_text, emit, AnalyzeReport, ShannonReport, ShannonScan, SynthesizeReport,
    VerifyReport,
};

#[derive(Parser)]
#[command(
    name = "kinv",
    version,
    about = "Inversion complexity of k-valued logic: exact metrics, bounds, and optimal-weight circuit synthesis",
    after_help = "Exit codes: 0 ok, 2 parse/input error, 3 size guard, 4 self-verification failure, 5 verification mismatch."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute d(F), per-member inversion powers, basis profile, and
    /// complexity bounds for a system file
    Analyze {
        /// System file: {"k", "n", "functions": [[..], ..]}
        system: PathBuf,
        /// Basis: bp, bl, or file:PATH
        #[arg(long, default_value = "bp")]
        basis: String,
        /// Emit the canonical JSON report instead of text
        #[arg(long)]
        json: bool,
        /// Override the k^n analysis guard (default 4096)
        #[arg(long)]
        max_points: Option<u64>,
    },
    /// Synthesize a circuit realizing the system with the optimal number
    /// of non-monotone gates, and write it in canonical form
    Synthesize {
        system: PathBuf,
        #[arg(long, default_value = "bp")]
        basis: String,
        /// Where to write the circuit file
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        max_points: Option<u64>,
    },
    /// Check that a circuit file is valid over the basis, realizes the
    /// system, and respects the weight bound
    Verify {
        circuit: PathBuf,
        system: PathBuf,
        #[arg(long, default_value = "bp")]
        basis: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        max_points: Option<u64>,
    },
    /// Worst-case inversion complexity values, optionally confirmed by an
    /// exhaustive or sampled scan
    Shannon {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        /// System size (omit for single functions; m ≥ 2)
        #[arg(long)]
        m: Option<u64>,
        /// bp or bl (the scan itself is basis-independent)
        #[arg(long, default_value = "bp")]
        basis: String,
        /// Also scan the function space and check the worst case
        #[arg(long)]
        scan: bool,
        /// Sample this many instances instead of exhausting the space
        #[arg(long)]
        sample: Option<u64>,
        /// Seed for --sample (default 0)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeGuard { .. } | Error::TableTooLarge { .. } => 3,
            Error::Invariant(_) => 1,
            _ => 2,
        };
        CliError::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::new(2, format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &PathBuf) -> Result<FunctionSystem, CliError> {
    Ok(FunctionSystem::from_json(&read_file(path)?)?)
}

fn parse_basis(spec: &str, k: u32) -> Result<Basis, CliError> {
    match spec {
        "bp" => Ok(Basis::post(k)?),
        "bl" => Ok(Basis::lukasiewicz(k)?),
        other => {
            if let Some(path) = other.strip_prefix("file:") {
                let basis = Basis::from_json(&read_file(&PathBuf::from(path))?)?;
                if basis.k() as u32 != k {
                    return Err(CliError::new(
                        2,
                        format!("basis file has k={}, inputs have k={k}", basis.k()),
                    ));
                }
                Ok(basis)
            } else {
                Err(CliError::new(
                    2,
                    format!("unknown basis `{other}` (expected bp, bl, or file:PATH)"),
                ))
            }
        }
    }
}

fn limits_from(max_points: Option<u64>) -> Limits {
    max_points.map_or_else(Limits::default, Limits::with_max_points)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze {
            system,
            basis,
            json,
            max_points,
        } => cmd_analyze(&system, &basis, json, limits_from(max_points)),
        Command::Synthesize {
            system,
            basis,
            out,
            json,
            max_points,
        } => cmd_synthesize(&system, &basis, &out, json, limits_from(max_points)),
        Command::Verify {
            circuit,
            system,
            basis,
            json,
            max_points,
        } => cmd_verify(&circuit, &system, &basis, json, limits_from(max_points)),
        Command::Shannon {
            k,
            n,
            m,
            basis,
            scan,
            sample,
            seed,
            json,
        } => cmd_shannon(k, n, m, &basis, scan, sample, seed.unwrap_or(0), json),
    }
}

fn cmd_analyze(
    system_path: &PathBuf,
    basis_spec: &str,
    json: bool,
    limits: Limits,
) -> Result<(), CliError> {
    let system = load_system(system_path)?;
    let basis = parse_basis(basis_spec, system.k() as u32)?;
    let b = bounds(&system, &basis, &limits)?;
    let (_, witness_d) = decrease(&system, &limits)?;
    let mut u = Vec::new();
    let mut witness_u = Vec::new();
    let mut witness_u_text = Vec::new();
    for f in system.members() {
        let (uf, w) = inversion_power(f, &limits)?;
        u.push(uf);
        witness_u.push(chain_points(&w.chain));
        witness_u_text.push(chain_text(&w.chain));
    }
    let report = AnalyzeReport {
        k: system.k() as u32,
        n: system.n(),
        m: system.len(),
        basis: basis_spec.to_string(),
        d_b: b.d_b,
        u_b: b.u_b,
        d_f: b.d_f,
        u,
        lower: b.lower,
        upper: b.upper,
        exact: b.exact,
        witness_d: chain_points(&witness_d.chain),
        witness_u,
        witness_d_text: chain_text(&witness_d.chain),
        witness_u_text,
    };
    let text = report.text();
    emit(&report, text, json);
    Ok(())
}

fn cmd_synthesize(
    system_path: &PathBuf,
    basis_spec: &str,
    out: &PathBuf,
    json: bool,
    limits: Limits,
) -> Result<(), CliError> {
    let system = load_system(system_path)?;
    let basis = parse_basis(basis_spec, system.k() as u32)?;
    let (omega, u_omega) = best_omega(&basis, &limits)?;
    let circuit = synthesize(&system, omega, &limits)?;
    let b = bounds(&system, &basis, &limits)?;

    // self-verification before reporting success
    let realized = circuit.realized_system(&limits)?;
    if realized != system {
        return Err(CliError::new(
            4,
            "self-verification failed: realized system differs",
        ));
    }
    if !circuit.validate(&basis).is_empty() {
        return Err(CliError::new(
            4,
            "self-verification failed: circuit invalid over basis",
        ));
    }
    let bound = kinv::synth::ceil_log(u_omega as u64, b.d_f as u64 + 1);
    if circuit.inversion_weight() as u32 > bound {
        return Err(CliError::new(
            4,
            "self-verification failed: weight exceeds the bound",
        ));
    }

    fs::write(out, circuit.to_canonical_json())
        .map_err(|e| CliError::new(2, format!("cannot write {}: {e}", out.display())))?;

    let report = SynthesizeReport {
        k: system.k() as u32,
        n: system.n(),
        m: system.len(),
        basis: basis_spec.to_string(),
        omega: omega.name().to_string(),
        d_f: b.d_f,
        u_omega,
        weight: circuit.inversion_weight(),
        bound,
        verified: true,
        wrote: out.display().to_string(),
    };
    let text = report.text();
    emit(&report, text, json);
    Ok(())
}

fn cmd_verify(
    circuit_path: &PathBuf,
    system_path: &PathBuf,
    basis_spec: &str,
    json: bool,
    limits: Limits,
) -> Result<(), CliError> {
    let circuit = Circuit::from_json(&read_file(circuit_path)?)?;
    let system = load_system(system_path)?;
    let basis = parse_basis(basis_spec, system.k() as u32)?;

    let violations = circuit.validate(&basis);
    let valid = violations.is_empty();
    let mut report = VerifyReport {
        k: system.k() as u32,
        n: system.n(),
        m: system.len(),
        basis: basis_spec.to_string(),
        valid,
        violations,
        realizes: false,
        weight: circuit.inversion_weight(),
        d_f: None,
        lower: None,
        upper: None,
        exact: None,
        optimal: None,
        weight_bound_ok: None,
    };
    if !valid {
        let text = report.text();
        emit(&report, text, json);
        return Err(CliError::new(5, "circuit invalid over basis"));
    }

    let realized = circuit.realized_system(&limits)?;
    report.realizes = realized == system;
    let b = bounds(&system, &basis, &limits)?;
    report.d_f = Some(b.d_f);
    report.lower = Some(b.lower);
    report.upper = Some(b.upper);
    report.exact = b.exact;
    report.optimal = b.exact.map(|e| circuit.inversion_weight() as u32 == e);
    if !report.realizes {
        let text = report.text();
        emit(&report, text, json);
        return Err(CliError::new(5, "realization mismatch"));
    }

    let weight_bound = check_weight_bound(&circuit, &basis, &limits)?;
    report.weight_bound_ok = Some(weight_bound);
    let text = report.text();
    emit(&report, text, json);
    if !weight_bound {
        return Err(CliError::new(5, "weight bound violated"));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_shannon(
    k: u32,
    n: u64,
    m: Option<u64>,
    basis_spec: &str,
    scan: bool,
    sample: Option<u64>,
    seed: u64,
    json: bool,
) -> Result<(), CliError> {
    let kind = match basis_spec {
        "bp" => BaseKind::Post,
        "bl" => BaseKind::Lukasiewicz,
        other => {
            return Err(CliError::new(
                2,
                format!("shannon values are defined for --basis bp or bl, got `{other}`"),
            ))
        }
    };
    let value = shannon_value(k, n, m, kind)?;
    let max_d_expected = match m {
        None => t_value(k, n)? - 1,
        Some(_) => (k as u64 - 1) * n,
    };
    let mut report = ShannonReport {
        k,
        n,
        m,
        basis: basis_spec.to_string(),
        value,
        max_d_expected,
        scan: None,
    };
    let mut scan_shortfall = None;
    if scan {
        let n32 = u32::try_from(n).map_err(|_| CliError::new(2, "n too large to scan"))?;
        let members = m.unwrap_or(1) as usize;
        let (mode, result): (String, ScanReport) = match sample {
            Some(count) => (
                format!("sample {count} seed {seed}"),
                scan_systems_sampled(k, n32, members, count, seed)?,
            ),
            None => {
                let result = scan_systems(k, n32, members).map_err(|e| match e {
                    Error::SizeGuard { points, limit } => CliError::new(
                        3,
                        format!(
                            "space of {points} instances exceeds the scan cap {limit}; use --sample N"
                        ),
                    ),
                    other => CliError::from(other),
                })?;
                ("exhaustive".to_string(), result)
            }
        };
        if result.max_decrease as u64 > max_d_expected
            || (sample.is_none() && (result.max_decrease as u64) < max_d_expected)
        {
            scan_shortfall = Some(result.max_decrease);
        }
        report.scan = Some(ShannonScan {
            mode,
            instances: result.scanned,
            max_d: result.max_decrease,
            histogram: result.histogram.iter().map(|(&d, &c)| (d, c)).collect(),
            extremal: result
                .extremal
                .members()
                .iter()
                .map(|f| f.table().to_vec())
                .collect(),
        });
    }
    let text = report.text();
    emit(&report, text, json);
    if let Some(got) = scan_shortfall {
        return Err(CliError::new(
            4,
            format!("scan found max decrease {got}, formula expects {max_d_expected}"),
        ));
    }
    Ok(())
}
