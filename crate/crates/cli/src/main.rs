use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deloc_core::analysis::{classify, operator_schmidt_decomposition, Classification, ControlledUnitaryForm};
use deloc_core::entangling::{entangling_power, OptimizationConfig};
use deloc_core::gates::{build_gate, GateParams, GALLERY};
use deloc_core::io::{parse_protocol_file, parse_unitary_file, to_json, write_protocol_file, write_unitary_file};
use deloc_core::locc::verify::DEFAULT_SAMPLES;
use deloc_core::locc::{
    check_bob_accumulated_unitary, fixed_input_relocalization_demo, synthesize_relocalization_protocol,
    verify_one_piece_relocalization, LoccProtocol, RelocalizationReport,
};
use deloc_core::{BipartiteUnitary, Side, ToleranceConfig};

#[derive(Parser)]
#[command(name = "deloc", version, about = "Relocalization analysis for two-party unitaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operator Schmidt rank, controlled-unitary detection and verdict.
    Classify {
        #[command(flatten)]
        gate: GateArgs,
        /// Reconstruction tolerance for detection.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build the LOCC protocol restoring one party's input.
    Synthesize {
        #[command(flatten)]
        gate: GateArgs,
        /// Control party. Defaults to A, then B.
        #[arg(long)]
        side: Option<Side>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a protocol after the gate and check that one party's input is restored.
    Simulate {
        /// Unitary file then protocol file, or only the protocol file with --gate.
        #[arg(num_args = 0..=2)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        gate: NamedGate,
        /// Fixed-input swap_phase demonstration with A's input set to |+>.
        #[arg(long, conflicts_with_all = ["files", "gate"])]
        demo: bool,
        #[arg(long, default_value = "B")]
        side: Side,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Fidelity tolerance of the verdict.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Largest entanglement entropy (bits) created from product inputs.
    EntanglingPower {
        #[command(flatten)]
        gate: GateArgs,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Operator Schmidt coefficients and rank.
    Osr {
        #[command(flatten)]
        gate: GateArgs,
        /// Relative rank tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// List the built-in gates, or write them as unitary files into a directory.
    Gallery {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Directory for the gate files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GateArgs {
    /// Unitary file in JSON.
    #[arg(conflicts_with = "gate")]
    path: Option<PathBuf>,
    #[command(flatten)]
    named: NamedGate,
}

#[derive(Args)]
struct NamedGate {
    /// Built-in gate instead of a file (see `deloc gallery`).
    #[arg(long)]
    gate: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    d_a: Option<usize>,
    #[arg(long)]
    d_b: Option<usize>,
    #[arg(long)]
    blocks: Option<usize>,
    /// Seed for randomly generated gates.
    #[arg(long)]
    gate_seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<deloc_core::Error> for Failure {
    fn from(e: deloc_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn load_gate(g: &GateArgs) -> Result<BipartiteUnitary, Failure> {
    load(g.path.as_ref(), &g.named)
}

fn load(path: Option<&PathBuf>, g: &NamedGate) -> Result<BipartiteUnitary, Failure> {
    match (&g.gate, path) {
        (Some(name), None) => {
            let params = GateParams { alpha: g.alpha, d_a: g.d_a, d_b: g.d_b, n_blocks: g.blocks, seed: g.gate_seed };
            Ok(build_gate(name, &params)?.unitary)
        }
        (None, Some(path)) => Ok(parse_unitary_file(&read(path)?)?),
        _ => Err(Failure::Input("give a unitary file or --gate".into())),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &OutputArgs, text: String) -> CmdResult {
    match &out.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    to_json(value).map(|s| s + "\n").map_err(|e| Failure::Internal(e.to_string()))
}

fn tolerances(tol: Option<f64>) -> Result<ToleranceConfig, Failure> {
    Ok(match tol {
        Some(t) => ToleranceConfig::with_reconstruct(t)?,
        None => ToleranceConfig::default(),
    })
}

fn describe_form(s: &mut String, form: &ControlledUnitaryForm) {
    let _ = writeln!(
        s,
        "  control on {}: {} blocks, ranks {:?}",
        form.control_side,
        form.blocks.len(),
        form.blocks.iter().map(|b| b.projector.trace().re.round() as usize).collect::<Vec<_>>()
    );
}

fn classification_text(c: &Classification) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dimensions: {}x{}", c.d_a, c.d_b);
    let _ = writeln!(s, "operator Schmidt rank: {}", c.osr);
    let _ = writeln!(s, "schmidt coefficients: {:?}", &c.schmidt_coefficients[..c.osr.max(1)]);
    for (side, form, det) in
        [(Side::A, &c.controlled_from_a, &c.detection_a), (Side::B, &c.controlled_from_b, &c.detection_b)]
    {
        let residual = det.residual.map_or("n/a".to_string(), |r| format!("{r:.3e}"));
        let _ = writeln!(s, "controlled from {side}: {} (residual {residual})", form.is_some());
        if let Some(form) = form {
            describe_form(&mut s, form);
        }
    }
    let _ = writeln!(s, "relocalizable: {}", c.relocalizable);
    s
}

fn report_text(r: &RelocalizationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "restored party: {}", r.side);
    let _ = writeln!(s, "inputs checked: {}", r.inputs_checked);
    let _ = writeln!(s, "min fidelity: {:.15}", r.min_fidelity);
    let _ = writeln!(s, "max channel residual: {:.3e}", r.max_channel_residual);
    let _ = writeln!(s, "verdict: {}", if r.verdict { "restored" } else { "not restored" });
    s
}

/// Protocol for the first control side that works; it restores the other party.
fn synthesize(
    u: &BipartiteUnitary,
    side: Option<Side>,
    tol: &ToleranceConfig,
    seed: u64,
) -> Result<(Side, LoccProtocol), Failure> {
    let c = classify(u, tol, seed);
    let candidates = match side {
        Some(s) => vec![s],
        None => vec![Side::A, Side::B],
    };
    for control in candidates {
        if let Some(form) = c.form(control) {
            return Ok((control.other(), synthesize_relocalization_protocol(form)?));
        }
    }
    Err(Failure::Input(match side {
        Some(s) => format!("not a local unitary equivalent of a controlled-unitary with control on {s}"),
        None => "not a local unitary equivalent of a controlled-unitary".into(),
    }))
}

fn gallery_files() -> Result<Vec<(String, BipartiteUnitary)>, Failure> {
    let gate = |name: &str, params: GateParams| -> Result<BipartiteUnitary, Failure> {
        Ok(build_gate(name, &params)?.unitary)
    };
    let mut out = vec![
        ("cnot".to_string(), gate("cnot", GateParams::default())?),
        ("swap_phase".to_string(), gate("swap_phase", GateParams::default())?),
        ("swap".to_string(), gate("swap", GateParams::default())?),
        ("identity".to_string(), gate("identity", GateParams::default())?),
    ];
    for (label, alpha) in [("0", 0.0), ("0.1", 0.1), ("0.2", 0.2), ("0.3", 0.3), ("pi_5", std::f64::consts::PI / 5.0)] {
        out.push((
            format!("heisenberg_{label}"),
            gate("heisenberg", GateParams { alpha: Some(alpha), ..Default::default() })?,
        ));
    }
    let params = GateParams { d_a: Some(3), d_b: Some(3), n_blocks: Some(2), seed: Some(0), ..Default::default() };
    out.push(("controlled_random_3x3_2_seed0".to_string(), gate("controlled_random", params)?));
    Ok(out)
}

fn write_gallery(dir: &PathBuf) -> CmdResult {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("cannot create {}: {e}", dir.display())))?;
    for (name, u) in gallery_files()? {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, write_unitary_file(&u) + "\n")
            .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Classify { gate, tol, seed, out } => {
            let u = load_gate(&gate)?;
            let c = classify(&u, &tolerances(tol)?, seed);
            let text = match out.format {
                Format::Text => classification_text(&c),
                Format::Json => json(&c)?,
            };
            emit(&out, text)
        }
        Command::Synthesize { gate, side, tol, seed, out } => {
            let u = load_gate(&gate)?;
            let (restored, p) = synthesize(&u, side, &tolerances(tol)?, seed)?;
            let text = match out.format {
                Format::Json => write_protocol_file(&p) + "\n",
                Format::Text => {
                    let m = p.root.measurement.as_ref();
                    let mut s = String::new();
                    let _ = writeln!(s, "restores party {restored}");
                    let _ = writeln!(
                        s,
                        "party {} measures with {} outcomes; party {restored} applies a correction per outcome",
                        restored.other(),
                        m.map_or(1, |m| m.outcomes())
                    );
                    s
                }
            };
            emit(&out, text)
        }
        Command::Simulate { files, gate, demo, side, samples, tol, seed, out } => {
            let report = if demo {
                fixed_input_relocalization_demo(samples, seed)?
            } else {
                let (u, path) = match (files.as_slice(), gate.gate.is_some()) {
                    ([unitary, protocol], false) => (load(Some(unitary), &gate)?, protocol),
                    ([protocol], true) => (load(None, &gate)?, protocol),
                    _ => return Err(Failure::Input("expected UNITARY PROTOCOL, or --gate NAME PROTOCOL".into())),
                };
                let p = parse_protocol_file(&read(path)?)?;
                if !(tol > 0.0 && tol < 1.0) {
                    return Err(Failure::Input(format!("--tol {tol} is outside (0, 1)")));
                }
                let r = verify_one_piece_relocalization(&u, &p, side, samples, seed, tol)?;
                if r.verdict && side == Side::B && check_bob_accumulated_unitary(&p, 1e-9).iter().any(|b| !b.pass) {
                    return Err(Failure::Internal("restored B but an accumulated B operator is not unitary".into()));
                }
                r
            };
            let text = match out.format {
                Format::Text => report_text(&report),
                Format::Json => json(&report)?,
            };
            emit(&out, text)
        }
        Command::EntanglingPower { gate, restarts, iters, seed, out } => {
            let u = load_gate(&gate)?;
            let cfg = OptimizationConfig { restarts, max_iters: iters, seed, ..Default::default() };
            let r = entangling_power(&u, &cfg)?;
            let text = match out.format {
                Format::Text => format!("entangling power: {:.10} bits\nconverged: {}\n", r.value, r.converged),
                Format::Json => json(&r)?,
            };
            emit(&out, text)
        }
        Command::Osr { gate, tol, out } => {
            let u = load_gate(&gate)?;
            let tol_rank = tol.unwrap_or(ToleranceConfig::default().tol_rank);
            if !(tol_rank > 0.0 && tol_rank < 1.0) {
                return Err(Failure::Input(format!("--tol {tol_rank} is outside (0, 1)")));
            }
            let sd = operator_schmidt_decomposition(&u);
            let rank = sd.rank(tol_rank);
            let text = match out.format {
                Format::Text => format!("operator Schmidt rank: {rank}\ncoefficients: {:?}\n", sd.lambdas),
                Format::Json => json(&serde_json::json!({ "osr": rank, "coefficients": sd.lambdas }))?,
            };
            emit(&out, text)
        }
        Command::Gallery { format, out } => match out {
            Some(dir) => write_gallery(&dir),
            None => {
                match format {
                    Format::Text => GALLERY.iter().for_each(|g| println!("{g}")),
                    Format::Json => print!("{}", json(&GALLERY)?),
                }
                Ok(())
            }
        },
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
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
