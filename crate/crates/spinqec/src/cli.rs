//! Command-line front end for the crate: build code families, certify their
//! error-correction conditions, synthesize pulse programs, sweep the noise
//! simulation, and tabulate resource costs.
//!
//! Exit codes follow the certification convention: 0 for success (including
//! PASS verdicts), 1 for a FAIL verdict or a runtime failure, 2 for usage
//! errors. Every command is deterministic, so repeated runs with the same
//! arguments produce byte-identical files.

use std::fs;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::codes::{
    alt_qutrit_distance5, build_multiqudit_code, build_xyz_code, build_z_code,
    perturbed_qutrit_code, CodeFamily, ErrorModel,
};
use crate::kl::{verify_full_kl, verify_z_kl, ErrorSet, KlReport};
use crate::pulse::{default_input_levels, synthesize_decoder, synthesize_encoder, PulseSequence};
use crate::resources::{comparison_csv, emit_comparison};
use crate::sim::{log_grid, sweep_gain, sweep_gates};
use crate::{Error, Result};

/// Logical qudits in one large spin: codes, certification, pulses, noise
/// sweeps, and resource comparison.
#[derive(Parser, Debug)]
#[command(name = "spinqec", version, disable_help_subcommand = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Residual tolerance for numeric verification.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,

    /// Output format. Tables (simulate, resources) default to csv, structured
    /// results (codes, verify, pulses) to json; not every command supports
    /// every format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a codeword family and emit it with exact rational amplitudes.
    Codes(CodesArgs),
    /// Certify the Knill-Laflamme conditions and exit 0 on PASS, 1 on FAIL.
    Verify(VerifyArgs),
    /// Synthesize the encoding and decoding pulse sequences for a family.
    Pulses(PulsesArgs),
    /// Sweep the error-correction cycle over dephasing time and emit a table.
    Simulate(SimulateArgs),
    /// Tabulate qudit versus qubit-register Hilbert-space costs.
    Resources(ResourcesArgs),
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Which code family a command acts on. The `--alt` and `--perturb` switches
/// select fixed qutrit tables and override the other selectors.
#[derive(Args, Clone, Debug)]
pub struct SelectArgs {
    /// Logical qudit dimension.
    #[arg(long, default_value_t = 3)]
    pub d: u32,

    /// Correctable error order; the code distance is 2t+1.
    #[arg(long, default_value_t = 1)]
    pub t: u32,

    /// Error set the family is built against.
    #[arg(long, value_enum, default_value_t = ModelArg::Z)]
    pub model: ModelArg,

    /// Number of identical spins carrying the code; values above 1 select the
    /// diagonal multi-spin family and must equal 2t+1.
    #[arg(long, default_value_t = 1)]
    pub qudits: u32,

    /// Use the alternative qutrit distance-5 coefficient table.
    #[arg(long)]
    pub alt: bool,

    /// Apply a deliberate coefficient perturbation; verification is expected
    /// to FAIL on the result.
    #[arg(long, value_enum)]
    pub perturb: Option<PerturbArg>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModelArg {
    Z,
    Xyz,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum PerturbArg {
    /// Swap the a1 and b1 coefficients of the qutrit distance-3 family.
    #[value(name = "swap-a1-b1")]
    SwapA1B1,
}

#[derive(Args, Debug)]
pub struct CodesArgs {
    #[command(flatten)]
    pub select: SelectArgs,

    /// Also print the codewords in ket notation to stdout.
    #[arg(long)]
    pub print: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub select: SelectArgs,

    /// Verify a family loaded from an exported JSON file instead of building
    /// one; the selector flags are then ignored.
    #[arg(long)]
    pub code_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PulsesArgs {
    #[command(flatten)]
    pub select: SelectArgs,

    /// Which sequences to synthesize.
    #[arg(long, value_enum, default_value_t = PulseKind::Both)]
    pub kind: PulseKind,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum PulseKind {
    Encoder,
    Decoder,
    Both,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Which sweep to run: `gain` compares distance-3 and distance-5
    /// correction under ideal gates, `gates` adds gate imperfections at
    /// distance 3.
    #[arg(long, value_enum, default_value_t = FigureArg::Gain)]
    pub figure: FigureArg,

    /// Logical qudit dimension of the simulated codes.
    #[arg(long, default_value_t = 3)]
    pub d: u32,

    /// Smallest dephasing time on the log grid, in units of T2.
    #[arg(long, default_value_t = 1e-4)]
    pub t_min: f64,

    /// Largest dephasing time on the log grid, in units of T2.
    #[arg(long, default_value_t = 1.0)]
    pub t_max: f64,

    /// Number of log-spaced grid points.
    #[arg(long, default_value_t = 25)]
    pub points: usize,

    /// Per-pulse infidelity for the `gates` figure.
    #[arg(long, default_value_t = 1e-3)]
    pub gate_infidelity: f64,

    /// Pulse duration as a fraction of T2 for the `gates` figure.
    #[arg(long, default_value_t = 1e-4)]
    pub gate_time_ratio: f64,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum FigureArg {
    Gain,
    Gates,
}

#[derive(Args, Debug)]
pub struct ResourcesArgs {
    /// Smallest logical dimension to tabulate.
    #[arg(long, default_value_t = 2)]
    pub d_min: u32,

    /// Largest logical dimension to tabulate.
    #[arg(long, default_value_t = 8)]
    pub d_max: u32,

    /// Code distances to include (odd, at least 3).
    #[arg(long, value_delimiter = ',', default_values_t = vec![3, 5])]
    pub distances: Vec<u32>,

    /// Override the physical-qubit count per surface-code logical qubit
    /// (default 2*distance^2 - 1).
    #[arg(long)]
    pub phys_per_logical: Option<u64>,
}

/// Whether the command's check (if any) passed; drives the process exit code.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    Pass,
    Fail,
}

/// Everything a command produces: the main payload for `--out`/stdout, an
/// optional extra block that always goes to stdout, and the verdict.
pub struct CommandOutput {
    pub payload: String,
    pub side_print: Option<String>,
    pub outcome: Outcome,
}

/// Parses real process arguments and runs; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Same as [`run`] but over an explicit argument list, for tests.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // clap exits 2 on usage errors and 0 on --help/--version
            let _ = err.print();
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(output) => {
            if let Some(text) = &output.side_print {
                print!("{text}");
            }
            match deliver(&cli.out, &output.payload) {
                Ok(()) => match output.outcome {
                    Outcome::Pass => 0,
                    Outcome::Fail => 1,
                },
                Err(err) => {
                    eprintln!("error: {err}");
                    1
                }
            }
        }
        Err(Error::Domain(msg)) => {
            eprintln!("usage error: {msg}");
            eprintln!("{}", Cli::command().render_usage());
            2
        }
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn deliver(out: &Option<PathBuf>, payload: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, payload)?,
        None => print!("{payload}"),
    }
    Ok(())
}

/// Runs one parsed command and renders its output. Pure except for reading
/// `--code-file`, so unit tests can drive it directly.
pub fn execute(cli: &Cli) -> Result<CommandOutput> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance {} must be positive", cli.tol)));
    }
    match &cli.command {
        Command::Codes(args) => cmd_codes(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Pulses(args) => cmd_pulses(cli, args),
        Command::Simulate(args) => cmd_simulate(cli, args),
        Command::Resources(args) => cmd_resources(cli, args),
    }
}

/// Builds the family a selector describes.
pub fn build_selected(select: &SelectArgs) -> Result<CodeFamily> {
    if select.perturb.is_some() {
        return Ok(perturbed_qutrit_code());
    }
    if select.alt {
        return Ok(alt_qutrit_distance5());
    }
    if select.qudits != 1 {
        if select.qudits != 2 * select.t + 1 {
            return Err(Error::Domain(format!(
                "{} qudits requested; the multi-spin family uses exactly 2t+1 = {}",
                select.qudits,
                2 * select.t + 1
            )));
        }
        return build_multiqudit_code(select.d, select.t);
    }
    match select.model {
        ModelArg::Z => build_z_code(select.d, select.t),
        ModelArg::Xyz => build_xyz_code(select.d, select.t),
    }
}

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

fn reject_format(command: &str, format: Format, supported: &str) -> Error {
    Error::Domain(format!("the {command} command renders {supported}, not {format:?}"))
}

fn with_newline(mut text: String) -> String {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text
}

/// 17 significant digits: enough for an exact f64 round-trip, so regression
/// diffs on the CSV artifacts stay byte-stable.
fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_codes(cli: &Cli, args: &CodesArgs) -> Result<CommandOutput> {
    let code = build_selected(&args.select)?;
    let payload = match format_or(cli, Format::Json) {
        Format::Json => with_newline(code.to_json()?),
        Format::Pretty => with_newline(code.pretty()),
        Format::Csv => return Err(reject_format("codes", Format::Csv, "json or pretty")),
    };
    let side_print = args.print.then(|| with_newline(code.pretty()));
    Ok(CommandOutput { payload, side_print, outcome: Outcome::Pass })
}

/// Certification dispatch: exact moment checks for single-spin Z families,
/// numeric operator-word checks otherwise (sparse for multi-spin tuples).
pub fn verify_code(code: &CodeFamily, tol: f64) -> Result<KlReport> {
    let t = code.spec.t;
    if !code.is_single_qudit() {
        let set = ErrorSet::xyz_words_multi(t, code.spec.n_qudits as usize);
        return verify_full_kl(code, &set, tol);
    }
    match code.spec.error_model {
        ErrorModel::Z => Ok(verify_z_kl(code, t)),
        ErrorModel::Xyz => verify_full_kl(code, &ErrorSet::xyz_words(t), tol),
    }
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<CommandOutput> {
    let code = match &args.code_file {
        Some(path) => CodeFamily::from_json(&fs::read_to_string(path)?)?,
        None => build_selected(&args.select)?,
    };
    let report = verify_code(&code, cli.tol)?;
    let payload = match format_or(cli, Format::Json) {
        Format::Json => with_newline(serde_json::to_string_pretty(&report)?),
        Format::Pretty => render_report(&report),
        Format::Csv => return Err(reject_format("verify", Format::Csv, "json or pretty")),
    };
    let outcome = if report.passed() { Outcome::Pass } else { Outcome::Fail };
    Ok(CommandOutput { payload, side_print: None, outcome })
}

fn render_report(report: &KlReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("code: {}\n", report.code));
    out.push_str(&format!("mode: {:?}, error words: {}\n", report.mode, report.words));
    for row in &report.moments {
        let mark = if row.equal { "ok" } else { "MISMATCH" };
        out.push_str(&format!("moment n={}: {} [{}]\n", row.n, row.values.join(" | "), mark));
    }
    if report.words > 0 {
        out.push_str(&format!(
            "max off-diagonal {:.3e}, max diagonal mismatch {:.3e} (scale {:.3e})\n",
            report.max_offdiag, report.max_diag_mismatch, report.residual_scale
        ));
    }
    for v in &report.violations {
        out.push_str(&format!("violation: {} ({:.6e})\n", v.context, v.magnitude));
    }
    out.push_str(&format!("verdict: {:?}\n", report.verdict));
    out
}

fn cmd_pulses(cli: &Cli, args: &PulsesArgs) -> Result<CommandOutput> {
    let code = build_selected(&args.select)?;
    let encoder = || -> Result<PulseSequence> {
        synthesize_encoder(&code, &default_input_levels(&code))
    };
    let payload = match format_or(cli, Format::Json) {
        Format::Json => {
            let value = match args.kind {
                PulseKind::Encoder => serde_json::to_value(encoder()?.to_file()?)?,
                PulseKind::Decoder => serde_json::to_value(synthesize_decoder(&code)?.to_file()?)?,
                PulseKind::Both => json!({
                    "encoder": encoder()?.to_file()?,
                    "decoder": synthesize_decoder(&code)?.to_file()?,
                }),
            };
            with_newline(serde_json::to_string_pretty(&value)?)
        }
        Format::Pretty => {
            let mut out = String::new();
            if matches!(args.kind, PulseKind::Encoder | PulseKind::Both) {
                render_sequence(&mut out, "encoder", &encoder()?);
            }
            if matches!(args.kind, PulseKind::Decoder | PulseKind::Both) {
                render_sequence(&mut out, "decoder", &synthesize_decoder(&code)?);
            }
            out
        }
        Format::Csv => return Err(reject_format("pulses", Format::Csv, "json or pretty")),
    };
    Ok(CommandOutput { payload, side_print: None, outcome: Outcome::Pass })
}

fn render_sequence(out: &mut String, name: &str, seq: &PulseSequence) {
    out.push_str(&format!(
        "{name}: {} steps on spin {}/2\n",
        seq.steps.len(),
        seq.space.two_s()
    ));
    for (i, step) in seq.steps.iter().enumerate() {
        let cos = match &step.cos_exact {
            Some(a) => format!("{a}"),
            None => format!("{:.6}", step.angle.cos()),
        };
        out.push_str(&format!(
            "  {:>3}: G({}, {})  theta {:+.16e}  cos {}\n",
            i + 1,
            step.levels.0,
            step.levels.1,
            step.angle,
            cos
        ));
    }
    if let Some(split) = &seq.ancilla {
        for (b, branch) in split.branches.iter().enumerate() {
            let levels: Vec<String> = branch.iter().map(|m| m.to_string()).collect();
            out.push_str(&format!("  branch {b}: [{}]\n", levels.join(", ")));
        }
    }
}

fn sweep_grid(args: &SimulateArgs) -> Result<Vec<f64>> {
    if args.t_min.is_nan() || args.t_max.is_nan() || args.t_min <= 0.0 || args.t_max < args.t_min {
        return Err(Error::Domain(format!(
            "need 0 < t_min <= t_max, got {} and {}",
            args.t_min, args.t_max
        )));
    }
    if args.points < 2 {
        return Err(Error::Domain(format!("grid needs at least 2 points, got {}", args.points)));
    }
    Ok(log_grid(args.t_min, args.t_max, args.points))
}

fn cmd_simulate(cli: &Cli, args: &SimulateArgs) -> Result<CommandOutput> {
    let grid = sweep_grid(args)?;
    let payload = match args.figure {
        FigureArg::Gain => {
            let d3 = sweep_gain(&build_z_code(args.d, 1)?, &grid)?;
            let d5 = sweep_gain(&build_z_code(args.d, 2)?, &grid)?;
            match format_or(cli, Format::Csv) {
                Format::Csv => {
                    let mut out = String::from(
                        "t_over_T2, E_uncorrected, E_corr_d3, E_corr_d5, gain_d3, gain_d5\n",
                    );
                    for (a, b) in d3.iter().zip(&d5) {
                        out.push_str(&format!(
                            "{}, {}, {}, {}, {}, {}\n",
                            csv_float(a.t_over_t2),
                            csv_float(a.e_uncorrected),
                            csv_float(a.e_corrected),
                            csv_float(b.e_corrected),
                            csv_float(a.gain),
                            csv_float(b.gain)
                        ));
                    }
                    out
                }
                Format::Json => {
                    let rows: Vec<_> = d3
                        .iter()
                        .zip(&d5)
                        .map(|(a, b)| {
                            json!({
                                "t_over_T2": a.t_over_t2,
                                "E_uncorrected": a.e_uncorrected,
                                "E_corr_d3": a.e_corrected,
                                "E_corr_d5": b.e_corrected,
                                "gain_d3": a.gain,
                                "gain_d5": b.gain,
                            })
                        })
                        .collect();
                    with_newline(serde_json::to_string_pretty(&rows)?)
                }
                Format::Pretty => {
                    return Err(reject_format("simulate", Format::Pretty, "csv or json"))
                }
            }
        }
        FigureArg::Gates => {
            let code = build_z_code(args.d, 1)?;
            let rows = sweep_gates(&code, &grid, args.gate_infidelity, args.gate_time_ratio)?;
            match format_or(cli, Format::Csv) {
                Format::Csv => {
                    let mut out = String::from(
                        "t_over_T2, E_uncorrected, E_corr_ideal, E_corr_imperfect\n",
                    );
                    for r in &rows {
                        out.push_str(&format!(
                            "{}, {}, {}, {}\n",
                            csv_float(r.t_over_t2),
                            csv_float(r.e_uncorrected),
                            csv_float(r.e_corrected_ideal),
                            csv_float(r.e_corrected_imperfect)
                        ));
                    }
                    out
                }
                Format::Json => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "t_over_T2": r.t_over_t2,
                                "E_uncorrected": r.e_uncorrected,
                                "E_corr_ideal": r.e_corrected_ideal,
                                "E_corr_imperfect": r.e_corrected_imperfect,
                            })
                        })
                        .collect();
                    with_newline(serde_json::to_string_pretty(&rows)?)
                }
                Format::Pretty => {
                    return Err(reject_format("simulate", Format::Pretty, "csv or json"))
                }
            }
        }
    };
    Ok(CommandOutput { payload, side_print: None, outcome: Outcome::Pass })
}

fn cmd_resources(cli: &Cli, args: &ResourcesArgs) -> Result<CommandOutput> {
    if args.d_min > args.d_max {
        return Err(Error::Domain(format!(
            "d range is empty: {} > {}",
            args.d_min, args.d_max
        )));
    }
    let d_values: Vec<u32> = (args.d_min..=args.d_max).collect();
    let rows = emit_comparison(&d_values, &args.distances, args.phys_per_logical)?;
    let payload = match format_or(cli, Format::Csv) {
        Format::Csv => comparison_csv(&rows),
        Format::Json => with_newline(serde_json::to_string_pretty(&rows)?),
        Format::Pretty => return Err(reject_format("resources", Format::Pretty, "csv or json")),
    };
    Ok(CommandOutput { payload, side_print: None, outcome: Outcome::Pass })
}
