use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gl_workbench::algebra::{
    check_claim, classify_algebra, CofinElement, FinModalAlgebra, OmegaPlusAlgebra, OmegaValuation,
};
use gl_workbench::duality::{check_embedding, dual_frame, omega_duality, q_filters, QSet};
use gl_workbench::experiments::{
    claim_corpus, run_separate, run_verify, small_cofin_elements, Demo, ExperimentReport, Theorem,
    VerifyBounds,
};
use gl_workbench::kripke::{classify_frame, frame_refutation, ValidityLimits};
use gl_workbench::prover::{Countermodel, Prover, ProverLimits, ProverOutcome};
use gl_workbench::{parse, Formula, Frame};

#[derive(Parser)]
#[command(name = "glw", version, about = "Provability logic workbench")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Sequents the prover may examine before giving up.
    #[arg(
        long,
        global = true,
        env = "GLW_MAX_NODES",
        default_value_t = 2_000_000
    )]
    max_nodes: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a formula in GL: exit 0 if provable, 1 if not.
    Prove {
        formula: String,
        /// Print the proof tree.
        #[arg(long)]
        tree: bool,
    },
    /// Print a countermodel: exit 0 if one exists, 1 if the formula is GL-valid.
    Countermodel { formula: String },
    /// Inspect a frame file.
    Frame {
        file: PathBuf,
        #[command(subcommand)]
        action: FrameAction,
    },
    /// Classify the complex algebra of a frame, or the ω+1 algebra.
    Algebra {
        #[arg(required_unless_present = "omega")]
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        omega: bool,
        /// Horizon for the ω-tracking checks backing the ω+1 report.
        #[arg(long, env = "GLW_N_MAX", default_value_t = 40)]
        n_max: u64,
    },
    /// Dual frame over the Q₀-filters.
    Dual {
        #[arg(required_unless_present = "omega")]
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        omega: bool,
        /// Principal filters at 0..window-1 are listed for --omega.
        #[arg(long, env = "GLW_WINDOW", default_value_t = 8)]
        window: u64,
    },
    /// Separation demos for the classes A_diamond, A_nc, A_Loeb.
    Separate {
        #[arg(value_parser = parse_demo)]
        demo: Demo,
        /// Window for `diamond`, largest fan for `nc` and `loeb`.
        #[arg(long, env = "GLW_SIZE")]
        size: Option<usize>,
    },
    /// Run a theorem's check suite up to the given bounds.
    Verify {
        #[arg(value_parser = parse_theorem)]
        theorem: Theorem,
        #[arg(long, env = "GLW_MAX_WORLDS")]
        max_worlds: Option<usize>,
        #[arg(long, env = "GLW_MAX_SIZE")]
        max_size: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Search for N past which n tracks ω under v_n on the ω+1 algebra.
    ClaimCheck {
        formula: String,
        /// Valuation entries such as `p=~{5}` or `q={0,3,w}`.
        #[arg(long = "val")]
        vals: Vec<String>,
        #[arg(long, env = "GLW_N_MAX", default_value_t = 40)]
        n_max: u64,
    },
}

#[derive(Subcommand)]
enum FrameAction {
    /// Frame class report.
    Check,
    /// Height of every world.
    Height,
    /// Frame validity of a formula: exit 0 if valid, 1 if not.
    Valid { formula: String },
}

fn parse_demo(s: &str) -> Result<Demo, String> {
    s.parse()
        .map_err(|e: gl_workbench::experiments::ExperimentError| e.to_string())
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse()
        .map_err(|e: gl_workbench::experiments::ExperimentError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn formula_arg(text: &str) -> Result<Formula> {
    parse(text).with_context(|| format!("cannot parse `{text}`"))
}

fn load_frame(path: &Path) -> Result<Frame> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Frame::from_json(&text).with_context(|| format!("bad frame file {}", path.display()))
}

fn emit(format: Format, text: &str, value: Value) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("json values serialize")
        ),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let limits = ProverLimits {
        max_nodes: cli.max_nodes,
    };
    match &cli.command {
        Command::Prove { formula, tree } => {
            let phi = formula_arg(formula)?;
            match Prover::new(limits).prove(&phi)? {
                ProverOutcome::Proof(proof) => {
                    let mut text = "PROOF\n".to_string();
                    if *tree {
                        text.push_str(&proof.render());
                    }
                    let mut value = json!({ "verdict": "proof", "formula": phi });
                    if *tree {
                        value["tree"] = serde_json::to_value(&proof)?;
                    }
                    emit(cli.format, &text, value);
                    Ok(ExitCode::SUCCESS)
                }
                ProverOutcome::Countermodel(cm) => {
                    let (text, value) = countermodel_report(&phi, &cm);
                    emit(cli.format, &text, value);
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Countermodel { formula } => {
            let phi = formula_arg(formula)?;
            match Prover::new(limits).prove(&phi)? {
                ProverOutcome::Countermodel(cm) => {
                    let (text, value) = countermodel_report(&phi, &cm);
                    emit(cli.format, &text, value);
                    Ok(ExitCode::SUCCESS)
                }
                ProverOutcome::Proof(_) => {
                    emit(
                        cli.format,
                        "NONE: the formula is GL-valid\n",
                        json!({ "verdict": "valid", "formula": phi }),
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Frame { file, action } => frame_command(cli.format, &load_frame(file)?, action),
        Command::Algebra { file, omega, n_max } => {
            if *omega {
                algebra_omega(cli.format, *n_max)
            } else {
                let path = file.as_ref().expect("clap requires a file");
                algebra_finite(cli.format, load_frame(path)?)
            }
        }
        Command::Dual {
            file,
            omega,
            window,
        } => {
            if *omega {
                let s = omega_duality(*window)?;
                let mut text = format!(
                    "window: principal filters at 0..{} and w (truncation)\n",
                    s.window.saturating_sub(1)
                );
                text.push_str(&format!("prime filters: {}\n", join(&s.prime_filters)));
                text.push_str(&format!("Q0-filters: {}\n", join(&s.q_filters)));
                text.push_str(&format!("excluded: {}\n", join(&s.excluded)));
                text.push_str(&format!(
                    "intersection of eta(<>^n 1): {}\n",
                    join(&s.chain_intersection)
                ));
                let edges: Vec<String> = s
                    .dual_edges
                    .iter()
                    .map(|(a, b)| format!("{a}->{b}"))
                    .collect();
                text.push_str(&format!("edges: {}\n", edges.join(" ")));
                emit(cli.format, &text, serde_json::to_value(&s)?);
            } else {
                let path = file.as_ref().expect("clap requires a file");
                let alg = FinModalAlgebra::from_frame(load_frame(path)?);
                let q0 = QSet::q0();
                let filters = q_filters(&alg, &q0)?;
                let dual = dual_frame(&alg, &filters)?;
                let embedding = check_embedding(&alg, &q0)?;
                let iso = gl_workbench::duality::find_isomorphism(&dual, alg.frame());
                let mut text = format!("dual frame: {}\n", dual.to_json());
                text.push_str(&format!(
                    "isomorphic to input: {}\nembedding: {}\n",
                    iso.is_some(),
                    embedding.is_embedding()
                ));
                emit(
                    cli.format,
                    &text,
                    json!({
                        "dual": dual.to_file(),
                        "isomorphic": iso.is_some(),
                        "embedding": embedding,
                    }),
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Separate { demo, size } => {
            let size = size.unwrap_or(match demo {
                Demo::Diamond => 8,
                Demo::Nc | Demo::Loeb => 10,
            });
            report_exit(cli.format, run_separate(*demo, size)?)
        }
        Command::Verify {
            theorem,
            max_worlds,
            max_size,
            samples,
            seed,
        } => {
            let bounds = VerifyBounds {
                max_worlds: *max_worlds,
                max_size: *max_size,
                samples: *samples,
                seed: *seed,
            };
            report_exit(cli.format, run_verify(*theorem, &bounds)?)
        }
        Command::ClaimCheck {
            formula,
            vals,
            n_max,
        } => {
            let psi = formula_arg(formula)?;
            let mut valuation = OmegaValuation::new();
            for entry in vals {
                let (var, elem) = entry
                    .split_once('=')
                    .with_context(|| format!("expected VAR=ELEMENT, got `{entry}`"))?;
                let x: CofinElement = elem
                    .parse()
                    .with_context(|| format!("bad element `{elem}`"))?;
                valuation.insert(var.trim().to_string(), x);
            }
            for v in psi.vars() {
                if !valuation.contains_key(&v) {
                    bail!("no value given for variable `{v}`");
                }
            }
            let outcome = check_claim(&psi, &valuation, *n_max)?;
            let text = match outcome.witness {
                Some(n) => format!("N = {n} (checked n <= {})\n", outcome.n_max),
                None => format!("no N <= {} found\n", outcome.n_max),
            };
            let text = if outcome.failing.is_empty() {
                text
            } else {
                format!("{text}failing n: {:?}\n", outcome.failing)
            };
            emit(cli.format, &text, serde_json::to_value(&outcome)?);
            Ok(verdict(outcome.witness.is_some()))
        }
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn report_exit(format: Format, report: ExperimentReport) -> Result<ExitCode> {
    emit(
        format,
        &report.render_text(),
        serde_json::to_value(&report)?,
    );
    Ok(verdict(report.pass))
}

fn countermodel_report(phi: &Formula, cm: &Countermodel) -> (String, Value) {
    let frame = &cm.model.frame;
    let names = |set: gl_workbench::WorldSet| -> Vec<String> {
        set.iter().map(|w| frame.name(w).to_string()).collect()
    };
    let valuation: BTreeMap<&String, Vec<String>> = cm
        .model
        .valuation()
        .iter()
        .map(|(v, set)| (v, names(*set)))
        .collect();
    let edges: Vec<String> = frame
        .edges()
        .map(|(a, b)| format!("{}->{}", frame.name(a), frame.name(b)))
        .collect();
    let mut text = "COUNTERMODEL\n".to_string();
    text.push_str(&format!("worlds: {}\n", frame.names().join(" ")));
    text.push_str(&format!("edges: {}\n", edges.join(" ")));
    for (v, ws) in &valuation {
        text.push_str(&format!("{v} = {{{}}}\n", ws.join(", ")));
    }
    text.push_str(&format!("refuted at: {}\n", frame.name(cm.world)));
    let value = json!({
        "verdict": "countermodel",
        "formula": phi,
        "frame": frame.to_file(),
        "valuation": valuation,
        "world": frame.name(cm.world),
    });
    (text, value)
}

fn frame_command(format: Format, frame: &Frame, action: &FrameAction) -> Result<ExitCode> {
    match action {
        FrameAction::Check => {
            let r = classify_frame(frame);
            let text = format!(
                "transitive: {}\nirreflexive: {}\nacyclic: {}\nlocally finite height: {}\nLF: {}\nFI: {}\n",
                r.transitive,
                r.irreflexive,
                r.acyclic,
                r.locally_finite_height,
                r.in_lf(),
                r.in_fi()
            );
            emit(format, &text, serde_json::to_value(&r)?);
            Ok(ExitCode::SUCCESS)
        }
        FrameAction::Height => {
            let r = classify_frame(frame);
            let mut text = String::new();
            let mut map = serde_json::Map::new();
            for (w, h) in r.heights.iter().enumerate() {
                text.push_str(&format!("{}: {h}\n", frame.name(w)));
                map.insert(frame.name(w).to_string(), json!(h.to_string()));
            }
            emit(format, &text, Value::Object(map));
            Ok(ExitCode::SUCCESS)
        }
        FrameAction::Valid { formula } => {
            let phi = formula_arg(formula)?;
            match frame_refutation(frame, &phi, &ValidityLimits::default())? {
                None => {
                    emit(
                        format,
                        "VALID\n",
                        json!({ "verdict": "valid", "formula": phi }),
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Some(r) => {
                    let valuation: BTreeMap<&String, Vec<&str>> = r
                        .valuation
                        .iter()
                        .map(|(v, set)| (v, set.iter().map(|w| frame.name(w)).collect()))
                        .collect();
                    let mut text = format!("INVALID\nrefuted at: {}\n", frame.name(r.world));
                    for (v, ws) in &valuation {
                        text.push_str(&format!("{v} = {{{}}}\n", ws.join(", ")));
                    }
                    emit(
                        format,
                        &text,
                        json!({
                            "verdict": "invalid",
                            "formula": phi,
                            "world": frame.name(r.world),
                            "valuation": valuation,
                        }),
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn algebra_finite(format: Format, frame: Frame) -> Result<ExitCode> {
    let alg = FinModalAlgebra::from_frame(frame);
    let report = classify_algebra(&alg)?;
    let chain = alg.diamond_chain();
    let frame = alg.frame();
    let show = |x: gl_workbench::algebra::Element| -> String {
        let ws: Vec<&str> = x.atoms().iter().map(|w| frame.name(w)).collect();
        format!("{{{}}}", ws.join(","))
    };
    let chain_text: Vec<String> = chain.chain.iter().map(|&x| show(x)).collect();
    let text = format!(
        "diamond chain: {}\nstabilizes at: {} with value {}\n4-equation: {}\nA_diamond: {:?}\nA_nc: {:?}\nA_Loeb: {}\n",
        chain_text.join(" "),
        chain.index,
        show(chain.value),
        report.satisfies_4,
        report.in_a_diamond,
        report.in_a_nc,
        report.in_a_loeb
    );
    emit(
        format,
        &text,
        json!({ "chain": chain_text, "report": report }),
    );
    Ok(ExitCode::SUCCESS)
}

fn algebra_omega(format: Format, n_max: u64) -> Result<ExitCode> {
    let samples = small_cofin_elements(5);
    let corpus = claim_corpus();
    let r = OmegaPlusAlgebra.classify(&samples, &corpus, n_max)?;
    let text = format!(
        "diamond chain: <>^n 1 = ~{{0..n-1}}, never stabilizes\nchain meet: {}\n4-equation (on {} samples): {}\nA_diamond: {:?}\nA_nc: {:?} ({} of {} claim instances verified)\nA_Loeb (on samples): {}\n",
        OmegaPlusAlgebra.chain_meet(),
        r.samples_checked,
        r.report.satisfies_4,
        r.report.in_a_diamond,
        r.report.in_a_nc,
        r.claims_verified,
        r.claims_checked,
        r.report.in_a_loeb
    );
    emit(format, &text, serde_json::to_value(&r)?);
    Ok(ExitCode::SUCCESS)
}
