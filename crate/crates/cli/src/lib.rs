//! Command dispatch for the `sponge` binary.

pub mod render;
pub mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sponge::dimension::{
    assouad_formula, dynamical_dimension, ly_dimension, mcmullen_dimension, separation_constant, DynOptions,
};
use sponge::estimate::{
    default_depth, depth_below, diffuseness_witness, estimate_assouad, flatness_certificate, sample_points,
    EstimateOptions, EstimateSource, DEFAULT_CENTERS, DEFAULT_POINTS,
};
use sponge::structure::{classify, decide_diffuseness, irreducibility, measure_profile, partial_order};
use sponge::subsystem::{build_subsystem, convergence_study, SubsystemOptions, DEFAULT_CAP, DEFAULT_TAU_MAX_LEN};
use sponge::{parse_template, parse_weights, BernoulliWeights, Error, Result, SpongeTemplate, Word};

use report::*;

#[derive(Debug, Parser)]
#[command(name = "sponge", version, about = "Dimension theory toolkit for self-affine sponges")]
pub struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a template (and optional weights) and echo the normalized form.
    Validate(WithMeasure),
    /// Structural classification, irreducibility and diffuseness.
    Check(WithMeasure),
    /// Assouad formulas, Ledrappier–Young and McMullen dimensions.
    Dims(WithMeasure),
    /// Dynamical dimension by multistart optimization over Bernoulli weights.
    Dyndim(DyndimArgs),
    /// Build the subsystem of typical words.
    Subsystem(SubsystemArgs),
    /// Tabulate the subsystem bounds over schedules of ε and N.
    Converge(ConvergeArgs),
    /// Empirical Assouad estimates and diffuseness constructions.
    Estimate(EstimateArgs),
    /// Draw the generating template as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct WithMeasure {
    pub template: PathBuf,
    /// Weights document aligned with the digits; uniform when omitted.
    #[arg(long)]
    pub measure: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DyndimArgs {
    pub template: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SubsystemArgs {
    pub template: PathBuf,
    #[arg(long)]
    pub measure: Option<PathBuf>,
    #[arg(long)]
    pub eps: f64,
    #[arg(short = 'N', long = "n")]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_TAU_MAX_LEN)]
    pub tau_max_len: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    pub template: PathBuf,
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// Comma-separated ε values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    /// Comma-separated word lengths.
    #[arg(short = 'N', long = "n", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_TAU_MAX_LEN)]
    pub tau_max_len: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    pub template: PathBuf,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    /// Sampling depth; chosen from the finest counting scale when omitted.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Exponent range `a:b` for β ∈ {2^-a, …, 2^-b}.
    #[arg(long, default_value = "2:7")]
    pub beta: String,
    /// Exponent range `a:b` for ρ ∈ {2^-a, …, 2^-b}.
    #[arg(long, default_value = "1:9")]
    pub rho: String,
    #[arg(long, default_value_t = DEFAULT_CENTERS)]
    pub centers: usize,
    /// Count on the sampled points instead of cylinder nets.
    #[arg(long)]
    pub cloud: bool,
    /// Also write the (β, ρ, count) table to this CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Build a diffuseness witness at this radius.
    #[arg(long)]
    pub witness_rho: Option<f64>,
    /// Length of the random coding prefix used by the witness.
    #[arg(long, default_value_t = 40)]
    pub witness_len: usize,
    /// Attach a flatness certificate when the template is reducible.
    #[arg(long)]
    pub flatness: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub template: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = render::DEFAULT_SIZE)]
    pub size: u32,
}

/// Exit status and the document destined for standard output.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        1
    } else {
        2
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.display().to_string()),
        _ => Error::Io(format!("{}: {e}", path.display())),
    })
}

fn load_template(path: &Path) -> Result<SpongeTemplate> {
    parse_template(&read(path)?)
}

fn load_weights(path: Option<&Path>, t: &SpongeTemplate) -> Result<BernoulliWeights> {
    match path {
        Some(p) => parse_weights(&read(p)?, t),
        None => Ok(BernoulliWeights::uniform(t.num_digits())),
    }
}

/// Writes `contents` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn parse_range(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::MalformedInput(format!("expected an exponent range a:b, got {text:?}"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: i32 = a.trim().parse().map_err(|_| bad())?;
    let b: i32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(sponge::estimate::geometric_grid(a, b))
}

fn validate(a: &WithMeasure) -> Result<String> {
    let t = load_template(&a.template)?;
    let w = a.measure.as_deref().map(|p| parse_weights(&read(p)?, &t)).transpose()?;
    Ok(to_text(&ValidateDoc::new(&t, w.as_ref())))
}

fn check(a: &WithMeasure) -> Result<String> {
    let t = load_template(&a.template)?;
    let measure = match &a.measure {
        Some(p) => {
            let w = parse_weights(&read(p)?, &t)?;
            Some(ProfileDoc::new(&t, &w, &measure_profile(&t, &w)?))
        }
        None => None,
    };
    let doc = CheckDoc::new(&t, &classify(&t), &partial_order(&t), &irreducibility(&t), &decide_diffuseness(&t), measure);
    Ok(to_text(&doc))
}

fn dimension_doc(command: &str, t: &SpongeTemplate, w: &BernoulliWeights) -> Result<DimensionDoc> {
    let formula = match assouad_formula(t) {
        Ok(f) => Some(f),
        Err(Error::NotLalleyGatzouras) => None,
        Err(e) => return Err(e),
    };
    let separation = match &formula {
        Some(f) => Some(separation_constant(t, &f.sigma)?),
        None => None,
    };
    let mut doc = DimensionDoc::new(command, formula.as_ref(), separation.as_ref());
    if formula.is_none() {
        doc.warnings.push("not Lalley-Gatzouras: no Assouad formula applies".into());
    }
    let ly = ly_dimension(t, w)?;
    doc.warnings.extend(ly.warnings.iter().cloned());
    doc.ly_dimension = Some(LyDoc::new(w, &ly));
    doc.mcmullen = mcmullen_dimension(t).ok();
    Ok(doc)
}

fn dims(a: &WithMeasure) -> Result<String> {
    let t = load_template(&a.template)?;
    let w = load_weights(a.measure.as_deref(), &t)?;
    Ok(to_text(&dimension_doc("dims", &t, &w)?))
}

fn dyndim(a: &DyndimArgs) -> Result<String> {
    let t = load_template(&a.template)?;
    if a.restarts == 0 || !(a.tol > 0.0) {
        return Err(Error::MalformedInput("need at least one restart and a positive tolerance".into()));
    }
    let mut doc = dimension_doc("dyndim", &t, &BernoulliWeights::uniform(t.num_digits()))?;
    let opts = DynOptions { restarts: a.restarts, tol: a.tol, seed: a.seed };
    doc.seed = Some(a.seed);
    doc.dynamical_dimension = Some(DynDoc::new(&dynamical_dimension(&t, &opts), a.tol));
    Ok(to_text(&doc))
}

fn subsystem(a: &SubsystemArgs) -> Result<String> {
    let t = load_template(&a.template)?;
    let w = load_weights(a.measure.as_deref(), &t)?;
    let opts = SubsystemOptions { cap: a.cap, tau_max_len: a.tau_max_len, tau: None };
    let r = build_subsystem(&t, &w, a.eps, a.n, &opts)?;
    Ok(to_text(&SubsystemDoc::new(&t, &w, &r)))
}

fn converge(a: &ConvergeArgs) -> Result<String> {
    let t = load_template(&a.template)?;
    let w = load_weights(a.measure.as_deref(), &t)?;
    let opts = SubsystemOptions { cap: a.cap, tau_max_len: a.tau_max_len, tau: None };
    let study = convergence_study(&t, &w, &a.eps, &a.n, &opts)?;
    Ok(to_text(&ConvergeDoc::new(&w, &study)))
}

fn estimate(a: &EstimateArgs) -> Result<String> {
    let t = load_template(&a.template)?;
    let betas = parse_range(&a.beta)?;
    let rhos = parse_range(&a.rho)?;
    if a.points == 0 || a.centers == 0 {
        return Err(Error::MalformedInput("points and centers must be positive".into()));
    }
    let finest = rhos.last().copied().unwrap_or(1.0) * betas.last().copied().unwrap_or(1.0);
    let depth = a.depth.unwrap_or_else(|| {
        if a.cloud {
            default_depth(&t)
        } else {
            depth_below(&t, finest).max(default_depth(&t))
        }
    });
    let opts = EstimateOptions { betas, rhos, centers: a.centers, points: a.points, depth: Some(depth), seed: a.seed };
    let cloud = (a.cloud || a.flatness).then(|| sample_points(&t, a.points, depth, a.seed));
    let e = match (&cloud, a.cloud) {
        (Some(c), true) => estimate_assouad(EstimateSource::Cloud(c), &opts)?,
        _ => estimate_assouad(EstimateSource::Template(&t), &opts)?,
    };
    let formula = assouad_formula(&t).ok();
    let mut doc = EstimateDoc::new(if a.cloud { "cloud" } else { "template" }, a.points, depth, &e, formula.as_ref());
    if let Some(rho) = a.witness_rho {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let prefix = Word((0..a.witness_len).map(|_| rng.gen_range(0..t.num_digits())).collect());
        match diffuseness_witness(&t, &prefix, rho) {
            Ok(w) => doc.witness = Some((&w).into()),
            Err(e @ (Error::ReducibleCoordinate { .. } | Error::PrefixTooShort { .. })) => {
                doc.warnings.push(format!("no witness: {e}"))
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(c) = &cloud {
        if a.flatness {
            match flatness_certificate(&t, c) {
                Ok(f) => doc.flatness = Some((&f).into()),
                Err(Error::NotReducible) => doc.warnings.push("no flatness certificate: template is irreducible".into()),
                Err(e) => return Err(e),
            }
        }
    }
    if let Some(path) = &a.csv {
        write_atomic(path, doc.csv().as_bytes())?;
    }
    Ok(to_text(&doc))
}

fn render_cmd(a: &RenderArgs) -> Result<String> {
    let t = load_template(&a.template)?;
    if a.size == 0 {
        return Err(Error::MalformedInput("size must be positive".into()));
    }
    let svg = render::render_svg(&t, a.size)?;
    write_atomic(&a.out, svg.as_bytes())?;
    let doc = RenderDoc {
        command: "render".into(),
        output: a.out.display().to_string(),
        dimension: t.dim(),
        panels: if t.dim() == 3 { 3 } else { 1 },
        size: a.size,
        bytes: svg.len(),
    };
    Ok(to_text(&doc))
}

fn dispatch(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Validate(a) => validate(a),
        Command::Check(a) => check(a),
        Command::Dims(a) => dims(a),
        Command::Dyndim(a) => dyndim(a),
        Command::Subsystem(a) => subsystem(a),
        Command::Converge(a) => converge(a),
        Command::Estimate(a) => estimate(a),
        Command::Render(a) => render_cmd(a),
    }
}

fn failure(e: &Error) -> Outcome {
    Outcome { code: exit_code(e), stdout: to_text(&ErrorDoc::from(e)) }
}

/// Runs a parsed command. With `--output` the report goes to that file and
/// standard output stays empty.
pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(text) => match &cli.output {
            Some(path) => match write_atomic(path, text.as_bytes()) {
                Ok(()) => Outcome { code: 0, stdout: String::new() },
                Err(e) => failure(&e),
            },
            None => Outcome { code: 0, stdout: text },
        },
        Err(e) => failure(&e),
    }
}

/// Parses and runs an argument vector (program name first).
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.render().to_string() }
                }
                _ => failure(&Error::MalformedInput(e.render().to_string().trim().to_string())),
            }
        }
    }
}
