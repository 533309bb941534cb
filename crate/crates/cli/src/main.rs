//! `infoengine` command-line front end.
//!
//! Reports go to stdout as JSON and a summary goes to stderr. Exit status is
//! 0 when every check passes, 1 when a check fails, 2 on usage or model errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use infoengine::instruments::groenewold_majorizes;
use infoengine::json::{
    center_state, omega_bar_fixture_json, parse_decomposition, parse_instrument, parse_state,
    resolve_space, sep_quadruple_json,
};
use infoengine::linalg::{fourier_basis, ket, HermMat};
use infoengine::models::{load_omega_bar, SepQuadruple};
use infoengine::report::{Report, Verdict};
use infoengine::space::{MatrixKind, Representation};
use infoengine::suites::{self, SuiteOptions, Target};
use infoengine::thermo::{
    basis_decomposition, check_entropy_uniqueness, cycle_delta_work, enumerate_pdp_decompositions,
    info_gain, oracle_for, quantum_pdp, work_curve, Gas, PdpDecomposition, Uniqueness,
};
use infoengine::{Error, State, StateSpace};

#[derive(Parser)]
#[command(
    name = "infoengine",
    version,
    about = "Spectral entropy, measurement and work cycles in convex state spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Separate along one decomposition and mix along another; report the work.
    Cycle(CycleArgs),
    /// Decide whether instrument `t` majorizes `s` at a state.
    Majorize(MajorizeArgs),
    /// Enumerate decompositions of a state into distinguishable pure states.
    Decompose(DecomposeArgs),
    /// Print a built-in fixture as JSON.
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct Output {
    /// Also write the JSON report to this file.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// appendix-b, appendix-c, lemma1, theorem1, theorem2 or theorem3.
    target: String,
    /// Restrict randomized trials to one model.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = suites::DEFAULT_SEED)]
    seed: u64,
    /// Slack tolerance of randomized property checks.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct CycleArgs {
    /// Model name, or a model description inline or in a JSON file.
    #[arg(long, default_value = "omega-bar")]
    model: String,
    /// State as `center` or as coordinates or a matrix, inline or in a file.
    #[arg(long)]
    state: Option<String>,
    /// Decomposition used on the separation leg, `{"probs": [...], "states": [...]}`.
    #[arg(long)]
    decomp_q: Option<String>,
    /// Decomposition used on the mixing leg.
    #[arg(long)]
    decomp_p: Option<String>,
    /// Number of particles.
    #[arg(long = "N", default_value_t = 1.0)]
    particles: f64,
    /// Temperature times the Boltzmann constant.
    #[arg(long = "kT", default_value_t = 1.0)]
    kt: f64,
    /// Curve points per component and leg.
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// Net work magnitude, per N kT, tolerated before reporting a violation.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Write the work curve here as CSV.
    #[arg(long)]
    csv_out: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct MajorizeArgs {
    #[arg(long)]
    model: String,
    #[arg(long, default_value = "center")]
    state: String,
    /// Instrument file of the finer instrument.
    #[arg(long)]
    t: String,
    /// Instrument file of the coarser instrument.
    #[arg(long)]
    s: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    model: String,
    #[arg(long, default_value = "center")]
    state: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct FixtureArgs {
    /// omega-bar or appendix-b.
    name: String,
    #[command(flatten)]
    out: Output,
}

/// Reads `arg` as a file when it names one, otherwise returns it verbatim.
fn text_or_file(arg: &str) -> Result<String, Error> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with(['{', '[']) && path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn load_model(arg: &str) -> Result<StateSpace, Error> {
    resolve_space(&text_or_file(arg)?)
}

fn load_state(space: &StateSpace, arg: &str) -> Result<State, Error> {
    parse_state(space, &text_or_file(arg)?)
}

fn emit(value: &serde_json::Value, out: &Output) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)?;
    println!("{text}");
    if let Some(path) = &out.json_out {
        std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn finish(report: &Report, out: &Output) -> Result<ExitCode, Error> {
    emit(&serde_json::to_value(report)?, out)?;
    eprint!("{}", report.summary());
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn verify(a: &VerifyArgs) -> Result<ExitCode, Error> {
    let target: Target = a.target.parse()?;
    let opts = SuiteOptions {
        trials: a.trials,
        seed: Some(a.seed),
        model: a.model.clone(),
        tol: a.tol,
    };
    finish(&suites::run(target, &opts)?, &a.out)
}

/// Decompositions used when none are given on the command line.
fn default_decompositions(
    space: &StateSpace,
    state: Option<&State>,
) -> Result<(PdpDecomposition, PdpDecomposition), Error> {
    match space.representation() {
        Representation::Matrix(m) if m.kind == MatrixKind::OmegaBar && state.is_none() => {
            let (_, fx) = load_omega_bar()?;
            Ok((fx.decomp_q, fx.decomp_p))
        }
        Representation::Matrix(m) if m.kind == MatrixKind::Quantum => {
            let d = m.dim();
            match state {
                Some(s) => {
                    let spectral = quantum_pdp(&space.matrix_of(s.coords())?)?;
                    Ok((spectral.clone(), spectral))
                }
                None => {
                    let rho = HermMat::identity(d).scale(1.0 / d as f64);
                    let z: Vec<_> = (0..d).map(|i| ket(d, i)).collect();
                    let x = fourier_basis(d);
                    Ok((
                        basis_decomposition(space, &rho, &z)?,
                        basis_decomposition(space, &rho, &x)?,
                    ))
                }
            }
        }
        Representation::Polytope { .. } => {
            let rho = state.cloned().unwrap_or_else(|| center_state(space));
            let set = enumerate_pdp_decompositions(&rho, space, usize::MAX)?;
            let first = set.decompositions.first().cloned().ok_or_else(|| {
                Error::EntropyUndefined(
                    "state has no decomposition into distinguishable pure states".into(),
                )
            })?;
            let last = set
                .decompositions
                .last()
                .cloned()
                .unwrap_or_else(|| first.clone());
            Ok((first, last))
        }
        Representation::Matrix(_) => Err(Error::Unsupported(format!(
            "`{}` needs --decomp-q and --decomp-p",
            space.name()
        ))),
    }
}

fn cycle(a: &CycleArgs) -> Result<ExitCode, Error> {
    let space = load_model(&a.model)?;
    let state = a
        .state
        .as_deref()
        .map(|s| load_state(&space, s))
        .transpose()?;
    let (q, p) = match (&a.decomp_q, &a.decomp_p) {
        (Some(q), Some(p)) => (
            parse_decomposition(&space, &text_or_file(q)?)?,
            parse_decomposition(&space, &text_or_file(p)?)?,
        ),
        (None, None) => default_decompositions(&space, state.as_ref())?,
        _ => {
            return Err(Error::Parse(
                "give both --decomp-q and --decomp-p or neither".into(),
            ))
        }
    };
    if let Some(s) = &state {
        let dev = s.max_abs_diff(&q.target());
        if dev > infoengine::thermo::CLOSURE_TOL {
            return Err(Error::CycleNotClosed(dev));
        }
    }
    let gas = Gas::new(a.particles, a.kt);
    let cyc = cycle_delta_work(&q, &p, &gas)?;
    let curve = work_curve(&q, &p, &gas, a.steps);
    if let Some(path) = &a.csv_out {
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        for pt in &curve {
            w.serialize(pt).map_err(|e| Error::Parse(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    }
    let mut r = Report::new("cycle", 0);
    r.model = Some(space.name().to_string());
    let scale = gas.nkt().abs().max(f64::MIN_POSITIVE);
    r.push(Verdict::at_most(
        "no-net-work",
        cyc.delta_w.abs() / scale,
        a.tol,
    ));
    r.data = json!({
        "cycle": cyc,
        "separation": { "probs": q.probs(), "states": q.states() },
        "mixing": { "probs": p.probs(), "states": p.states() },
    });
    eprintln!(
        "W_separation = {:.9}  W_mixing = {:.9}  delta_W = {:.9}",
        cyc.w_separation, cyc.w_mixing, cyc.delta_w
    );
    finish(&r, &a.out)
}

fn majorize(a: &MajorizeArgs) -> Result<ExitCode, Error> {
    let space = load_model(&a.model)?;
    let rho = load_state(&space, &a.state)?;
    let t = parse_instrument(&space, &text_or_file(&a.t)?)?;
    let s = parse_instrument(&space, &text_or_file(&a.s)?)?;
    let kernel = groenewold_majorizes(&space, &t, &s, &rho)?;
    let mut r = Report::new("majorize", 0);
    r.model = Some(space.name().to_string());
    let gains = match (&kernel, oracle_for(&space)) {
        (_, None) => None,
        (_, Some(oracle)) => {
            let gt = info_gain(&space, &rho, &t, oracle.as_ref());
            let gs = info_gain(&space, &rho, &s, oracle.as_ref());
            match (gt, gs) {
                (Ok(gt), Ok(gs)) => Some((gt, gs)),
                (Err(e), _) | (_, Err(e)) => {
                    eprintln!("information gain unavailable: {e}");
                    None
                }
            }
        }
    };
    if let (Some(_), Some((gt, gs))) = (&kernel, gains) {
        r.push(Verdict::at_least(
            "information-gain-monotone",
            gt - gs,
            -a.tol,
        ));
    }
    r.data = json!({
        "majorizes": kernel.is_some(),
        "kernel": kernel,
        "info_gain": gains.map(|(gt, gs)| json!({ "t": gt, "s": gs })),
    });
    eprintln!(
        "{}",
        if kernel.is_some() {
            "Feasible"
        } else {
            "Infeasible"
        }
    );
    finish(&r, &a.out)
}

fn decompose(a: &DecomposeArgs) -> Result<ExitCode, Error> {
    let space = load_model(&a.model)?;
    let rho = load_state(&space, &a.state)?;
    let set = match space.representation() {
        Representation::Matrix(m) if m.kind == MatrixKind::Quantum => {
            infoengine::thermo::QuantumEntropy { dim: m.dim() }.decomposition_set(&rho)?
        }
        _ => enumerate_pdp_decompositions(&rho, &space, usize::MAX)?,
    };
    let uniq = check_entropy_uniqueness(&set);
    let mut r = Report::new("decompose", 0);
    r.model = Some(space.name().to_string());
    r.push(Verdict::new(
        "entropy-unique",
        !matches!(uniq, Uniqueness::NonUnique(_)),
        serde_json::to_value(&uniq)?,
        "unique or empty",
    ));
    r.data =
        json!({ "decompositions": set, "distributions": set.distributions(), "entropy": uniq });
    finish(&r, &a.out)
}

fn fixture(a: &FixtureArgs) -> Result<ExitCode, Error> {
    let value = match a.name.as_str() {
        "omega-bar" => omega_bar_fixture_json(&load_omega_bar()?.1)?,
        "appendix-b" => sep_quadruple_json(&SepQuadruple::default())?,
        other => return Err(Error::UnknownModel(format!("no fixture named `{other}`"))),
    };
    emit(&value, &a.out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Cycle(a) => cycle(a),
        Command::Majorize(a) => majorize(a),
        Command::Decompose(a) => decompose(a),
        Command::Fixture(a) => fixture(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
