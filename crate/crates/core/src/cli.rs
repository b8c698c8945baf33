//! Command-line front end. [`run`] returns the process exit code:
//! 0 on success, 1 on usage or input errors, 2 when verification fails.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::circuit::emit_qasm;
use crate::cost::CostReport;
use crate::error::{Error, Result};
use crate::exponentiation::{
    expo_cost, synth_exponentiation, verify_exponentiation, ExpoVerification,
};
use crate::gf2m::{BinaryPolynomial, FieldSpec};
use crate::report::{build_table, Which};
use crate::sim::CheckReport;
use crate::squaring::{check_squarer, synth_square};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

/// Above this degree `exp` costs the circuit analytically unless it has to
/// be built for `--qasm` or `--verify`.
pub const EXP_BUILD_MAX_N: usize = 32;
/// Largest degree for which `verify` also checks the exponentiator.
pub const VERIFY_EXP_MAX_N: usize = 16;

#[derive(Debug, Parser)]
#[command(
    name = "gf2m-qsynth",
    version,
    about = "Quantum squaring and exponentiation circuits over GF(2^n)"
)]
pub struct Cli {
    /// Accept a reducible modulus.
    #[arg(long, global = true)]
    pub allow_reducible: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize the squarer for a modulus.
    Square {
        poly: String,
        /// Write the circuit as OpenQASM 2.0.
        #[arg(long, value_name = "FILE")]
        qasm: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Synthesize the exponentiation (inversion) circuit.
    Exp {
        poly: String,
        #[arg(long, value_name = "FILE")]
        qasm: Option<PathBuf>,
        /// Simulate and check the result, restored input and cleared ancillae.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check the squarer (and the exponentiator for small fields) by simulation.
    Verify {
        poly: String,
        /// Enumerate every input when there are at most this many; sample this many otherwise.
        #[arg(long, default_value_t = 1 << 16)]
        exhaustive_limit: u64,
    },
    /// Print a comparison table.
    Report {
        which: TableKind,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TableKind {
    Squaring,
    Exponentiation,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Verification(_) => EXIT_VERIFY,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn field(cli: &Cli, poly: &str) -> Result<FieldSpec> {
    let p: BinaryPolynomial = poly.parse()?;
    if cli.allow_reducible {
        FieldSpec::new_allow_reducible(p)
    } else {
        FieldSpec::new(p)
    }
}

fn print_cost(out: &mut dyn Write, cost: &CostReport, json: bool) -> Result<()> {
    if json {
        let _ = writeln!(out, "{}", cost.to_json());
        return Ok(());
    }
    let _ = writeln!(out, "field: {}", cost.field);
    let _ = writeln!(
        out,
        "gates: {} ({} CNOT, {} Toffoli)",
        cost.gate_count, cost.cnot_count, cost.toffoli_count
    );
    let _ = writeln!(
        out,
        "qubits: {} ({} ancillae)",
        cost.qubit_count, cost.ancilla_count
    );
    match cost.depth {
        Some(d) => {
            let _ = writeln!(out, "depth: {d}");
        }
        None => {
            let _ = writeln!(out, "depth: not computed");
        }
    }
    if let Some(m) = cost.squaring_metric {
        let _ = writeln!(out, "squaring gates (forward): {m}");
    }
    if let Some(m) = cost.squaring_gates_total {
        let _ = writeln!(out, "squaring gates (total): {m}");
    }
    if let Some(m) = cost.closed_form_total {
        let _ = writeln!(out, "closed-form total: {m}");
    }
    for (k, v) in &cost.breakdown {
        let _ = writeln!(out, "  {k}: {v}");
    }
    if cost.fallback {
        let _ = writeln!(out, "note: squarer built by elimination fallback");
    }
    Ok(())
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse {
        input: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn squarer_line(r: &CheckReport) -> String {
    format!(
        "squarer: {} {} inputs, {} mismatches",
        if r.exhaustive { "all" } else { "sampled" },
        r.checked,
        r.mismatch_count
    )
}

fn expo_line(v: &ExpoVerification) -> String {
    let mut s = format!(
        "exponentiator: {} {} inputs, {} failures",
        if v.exhaustive { "all" } else { "sampled" },
        v.checked,
        v.failure_count
    );
    if let Some(f) = v.first_failure() {
        s.push_str(&format!(
            " (first: a = {}, {:?}: {})",
            f.input, f.clause, f.detail
        ));
    }
    s
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Square { poly, qasm, json } => {
            let spec = field(cli, poly)?;
            let sq = synth_square(&spec)?;
            if let Some(path) = qasm {
                write_file(path, &emit_qasm(&sq.circuit))?;
            }
            print_cost(out, &sq.cost(), *json)?;
            Ok(EXIT_OK)
        }
        Command::Exp {
            poly,
            qasm,
            verify,
            json,
        } => {
            let spec = field(cli, poly)?;
            let build = qasm.is_some() || *verify || spec.degree() <= EXP_BUILD_MAX_N;
            if !build {
                print_cost(out, &expo_cost(&spec)?, *json)?;
                return Ok(EXIT_OK);
            }
            let e = synth_exponentiation(&spec)?;
            if let Some(path) = qasm {
                write_file(path, &emit_qasm(&e.circuit))?;
            }
            print_cost(out, &e.cost, *json)?;
            if *verify {
                // every field element when 2^n <= 2^16, else 2^16 samples
                let v = verify_exponentiation(&e, 1 << 16)?;
                let _ = writeln!(out, "{}", expo_line(&v));
                if !v.passed() {
                    return Ok(EXIT_VERIFY);
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            poly,
            exhaustive_limit,
        } => {
            let spec = field(cli, poly)?;
            let sq = synth_square(&spec)?;
            let r = check_squarer(&sq, *exhaustive_limit);
            let _ = writeln!(out, "{}", squarer_line(&r));
            let mut ok = r.passed();
            if spec.degree() >= 2 && spec.degree() <= VERIFY_EXP_MAX_N {
                let e = synth_exponentiation(&spec)?;
                let v = verify_exponentiation(&e, *exhaustive_limit)?;
                let _ = writeln!(out, "{}", expo_line(&v));
                ok &= v.passed();
            } else {
                let _ = writeln!(out, "exponentiator: skipped (n > {VERIFY_EXP_MAX_N})");
            }
            let _ = writeln!(out, "{}", if ok { "PASS" } else { "FAIL" });
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Report { which, json } => {
            let which = match which {
                TableKind::Squaring => Which::Squaring,
                TableKind::Exponentiation => Which::Exponentiation,
            };
            let table = build_table(which)?;
            if *json {
                let _ = writeln!(out, "{}", table.to_json());
            } else {
                let _ = write!(out, "{}", table.to_text());
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("gf2m-qsynth").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn square_json() {
        let (code, out, _) = run_capture(&["square", "x^10+x^3+1", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["gate_count"], 6);
        assert_eq!(v["qubit_count"], 10);
        assert_eq!(v["depth"], 2);
    }

    #[test]
    fn reducible_rejected_unless_allowed() {
        let (code, _, err) = run_capture(&["square", "x^2+1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(
            err.contains("irreducible") || err.contains("reducible"),
            "{err}"
        );
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["square"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["square", "x^^3"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["exp", "x"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn exp_metrics() {
        let (code, out, _) = run_capture(&["exp", "x^10+x^3+1", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["squaring_metric"], 54);
        assert_eq!(v["qubit_count"], 100);
    }

    #[test]
    fn verify_small_field() {
        let (code, out, _) = run_capture(&["verify", "x^4+x+1"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("squarer: all 16 inputs, 0 mismatches"));
        assert!(out.contains("exponentiator: all 16 inputs, 0 failures"));
    }
}
