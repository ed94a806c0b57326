//! `csing`: command line front end. Every command reads JSON documents and
//! writes JSON to stdout (or `--output`); `verify` prints one line per check.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use csing_core::algebra::codec::{GermDocument, JetDocument, JsonScalar};
use csing_core::algebra::group::DiagonalGroup;
use csing_core::batch::{classify_batch, Execution};
use csing_core::classify::{AdmissibleDataDocument, ClassifyOptions, Mode};
use csing_core::graph::{
    abs_determinant, hj_expand, hj_fold, intersection_matrix, is_negative_definite, leading_minors,
    minimal_negative_model, shape, CyclicQuotientData, DualGraph,
};
use csing_core::normal_form::{identify_form, koenigs, poincare_dulac};
use csing_core::orbifold::{
    canonical_cover_degree, classify_orbifold, euler_characteristic, is_contractible, orbidegree, smooth_cover_data,
    OrbifoldDocument,
};
use csing_core::verify::{run_suite, SuiteConfig};
use csing_core::{Cyclotomic, Float, DEFAULT_TOLERANCE};

#[derive(Parser)]
#[command(name = "csing", version, about = "Contracting automorphisms of normal surface singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Args)]
struct GermArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 8)]
    order: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Equivariant Poincaré-Dulac normal form of a germ.
    Normalize(GermArgs),
    /// Koenigs linearization of a family `(z, g(z, w))`.
    Koenigs(GermArgs),
    /// Dual graph checks.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Hirzebruch-Jung continued fractions.
    Hj {
        #[command(subcommand)]
        action: HjAction,
    },
    /// Orbifold surfaces and orbibundles.
    Orbifold {
        #[command(subcommand)]
        action: OrbifoldAction,
    },
    /// Classify admissible data documents (several inputs run concurrently).
    Classify {
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long, default_value_t = 8)]
        order: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Run the randomized property suite; exit code 0 iff every check passes.
    Verify {
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphAction {
    /// Validity, intersection matrix and negative definiteness.
    Check(InputArgs),
    /// Minimal negative model.
    Contract(InputArgs),
    /// Chain, cycle, star or general tree.
    Shape(InputArgs),
}

#[derive(Subcommand)]
enum HjAction {
    /// `m/q` as `[b_1, …, b_n]`.
    Expand { m: i64, q: i64 },
    /// `[b_1, …, b_n]` as `(m, q)`.
    Fold {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        b: Vec<i64>,
    },
}

#[derive(Subcommand)]
enum OrbifoldAction {
    /// Euler characteristic and geometry.
    Classify(InputArgs),
    /// Smooth cover at `--degree` (default: the canonical degree).
    Cover {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Orbidegree of the bundle.
    Degree(InputArgs),
}

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(value: &Value, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match output {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => match writeln!(io::stdout().lock(), "{text}") {
            // a closed pipe (`| head`) is not an error
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            r => Ok(r?),
        },
    }
}

fn normalize<S: JsonScalar>(germ: &GermDocument, order: u32) -> Result<Value> {
    let f = germ.jet.to_jet::<S>()?;
    let group = match &germ.group {
        Some(g) => g.clone(),
        None => DiagonalGroup::trivial(f.dim()),
    };
    let k = germ.k_twist.unwrap_or(1);
    let r = poincare_dulac(&f, &group, k, order, DEFAULT_TOLERANCE)?;
    Ok(json!({
        "normal_form": JetDocument::from_jet(&r.normal_form),
        "conjugacy": JetDocument::from_jet(&r.conjugacy),
        "form": identify_form(&r.normal_form, DEFAULT_TOLERANCE).name(),
        "treatment": format!("{:?}", r.treatment),
        "linear": r.is_linear(DEFAULT_TOLERANCE),
        "resonant_monomials": r.resonance.as_ref().map_or(0, |x| x.count()),
        "group": r.group,
        "k_twist": r.k_twist,
        "residual_norm": r.residual_norm,
        "group_residual_norm": r.group_residual_norm,
    }))
}

fn linearize<S: JsonScalar>(germ: &GermDocument, order: u32) -> Result<Value> {
    let f = germ.jet.to_jet::<S>()?;
    let r = koenigs(&f, order, DEFAULT_TOLERANCE)?;
    Ok(json!({
        "linearization": JetDocument::from_jet(&r.linearization),
        "alpha": r.alpha.to_string(),
        "method": format!("{:?}", r.method),
        "depth": r.depth,
        "residual_norm": r.residual_norm,
    }))
}

fn graph(action: GraphAction) -> Result<()> {
    match action {
        GraphAction::Check(io) => {
            let g: DualGraph = read(&io.input)?;
            g.validate()?;
            let m = intersection_matrix(&g);
            let minors: Vec<String> = leading_minors(&m).iter().map(ToString::to_string).collect();
            emit(
                &json!({
                    "vertices": g.len(),
                    "connected": g.is_connected(),
                    "tree": g.is_tree(),
                    "snc": g.is_snc(),
                    "intersection_matrix": m,
                    "leading_minors": minors,
                    "abs_determinant": abs_determinant(&m).to_string(),
                    "negative_definite": is_negative_definite(&m),
                }),
                io.output.as_deref(),
            )
        }
        GraphAction::Contract(io) => {
            let g: DualGraph = read(&io.input)?;
            emit(&serde_json::to_value(minimal_negative_model(&g)?)?, io.output.as_deref())
        }
        GraphAction::Shape(io) => {
            let g: DualGraph = read(&io.input)?;
            g.validate()?;
            emit(&serde_json::to_value(shape(&g))?, io.output.as_deref())
        }
    }
}

fn hj(action: HjAction) -> Result<()> {
    match action {
        HjAction::Expand { m, q } => {
            let c = CyclicQuotientData::new(m, q)?;
            emit(&json!({ "m": c.m, "q": c.q, "chain": hj_expand(c) }), None)
        }
        HjAction::Fold { b } => {
            let c = hj_fold(&b)?;
            emit(&json!({ "chain": b, "m": c.m, "q": c.q }), None)
        }
    }
}

fn orbifold(action: OrbifoldAction) -> Result<()> {
    match action {
        OrbifoldAction::Classify(io) => {
            let d: OrbifoldDocument = read(&io.input)?;
            let s = d.surface()?;
            emit(
                &json!({
                    "surface": s.to_string(),
                    "euler_characteristic": euler_characteristic(&s).to_string(),
                    "geometry": classify_orbifold(&s),
                }),
                io.output.as_deref(),
            )
        }
        OrbifoldAction::Cover { io, degree } => {
            let d: OrbifoldDocument = read(&io.input)?;
            let s = d.surface()?;
            let nn = match degree {
                Some(n) => n,
                None => canonical_cover_degree(&s)?,
            };
            emit(&serde_json::to_value(smooth_cover_data(&s, nn)?)?, io.output.as_deref())
        }
        OrbifoldAction::Degree(io) => {
            let d: OrbifoldDocument = read(&io.input)?;
            let Some(l) = d.bundle()? else { bail!("{} has no bundle", io.input.display()) };
            emit(
                &json!({ "orbidegree": orbidegree(&l).to_string(), "contractible": is_contractible(&l) }),
                io.output.as_deref(),
            )
        }
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn classify(inputs: &[PathBuf], opts: &ClassifyOptions, exec: Execution, output: Option<&Path>) -> Result<()> {
    let docs: Vec<AdmissibleDataDocument> = inputs.iter().map(|p| read(p)).collect::<Result<_>>()?;
    let mut reports = Vec::new();
    for (path, r) in inputs.iter().zip(classify_batch(&docs, opts, exec)) {
        let r = r.with_context(|| format!("classifying {}", path.display()))?;
        reports.push(serde_json::to_value(r)?);
    }
    let value = if reports.len() == 1 { reports.pop().expect("one report") } else { Value::Array(reports) };
    emit(&value, output)
}

fn verify(seed: u64, exec: Execution, output: Option<&Path>) -> Result<bool> {
    let cfg = SuiteConfig { seed, execution: exec, ..Default::default() };
    let outcomes = run_suite(&cfg);
    for o in &outcomes {
        let status = if o.passed() { "PASS" } else { "FAIL" };
        println!("{status} {:<28} {:>5} samples {:>4} failures {:>7} ms", o.name, o.samples, o.failures, o.millis);
        for m in &o.messages {
            println!("    {m}");
        }
    }
    if let Some(p) = output {
        emit(&serde_json::to_value(&outcomes)?, Some(p))?;
    }
    Ok(outcomes.iter().all(|o| o.passed()))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Normalize(a) => {
            let germ: GermDocument = read(&a.input)?;
            let v = match a.mode {
                ModeArg::Exact => normalize::<Cyclotomic>(&germ, a.order)?,
                ModeArg::Float => normalize::<Float>(&germ, a.order)?,
            };
            emit(&v, a.output.as_deref())?;
        }
        Command::Koenigs(a) => {
            let germ: GermDocument = read(&a.input)?;
            let v = match a.mode {
                ModeArg::Exact => linearize::<Cyclotomic>(&germ, a.order)?,
                ModeArg::Float => linearize::<Float>(&germ, a.order)?,
            };
            emit(&v, a.output.as_deref())?;
        }
        Command::Graph { action } => graph(action)?,
        Command::Hj { action } => hj(action)?,
        Command::Orbifold { action } => orbifold(action)?,
        Command::Classify { input, order, mode, output, sequential } => {
            let opts = ClassifyOptions { order, mode: mode.into(), ..Default::default() };
            classify(&input, &opts, execution(sequential), output.as_deref())?;
        }
        Command::Verify { seed, sequential, output } => return verify(seed, execution(sequential), output.as_deref()),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
