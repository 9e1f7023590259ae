//! Report documents emitted by the subcommands.
//!
//! Coordinates are 1-based, digit tuples keep the 0-based letters of the
//! template file, and exact rationals are written as strings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use sponge::dimension::{AssouadFormula, DynamicalDimension, LyDimension, SeparationConstant};
use sponge::estimate::{AssouadEstimate, AssouadFit, FlatnessCertificate, SlopeFit, WitnessReport};
use sponge::structure::{Classification, DiffusenessDecision, Irreducibility, MeasureProfile, PartialOrder};
use sponge::subsystem::{ConvergenceStudy, SubsystemReport};
use sponge::{BernoulliWeights, Error, SpongeTemplate};

fn one_based(coords: &[usize]) -> Vec<usize> {
    coords.iter().map(|c| c + 1).collect()
}

fn weight_strings(w: &BernoulliWeights) -> Vec<String> {
    w.values().iter().map(|v| v.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub error: String,
    pub message: String,
}

impl From<&Error> for ErrorDoc {
    fn from(e: &Error) -> Self {
        ErrorDoc { error: e.kind().to_string(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateDoc {
    pub command: String,
    pub dimension: usize,
    pub digits: usize,
    pub exact: bool,
    /// Per coordinate, the contraction ratio of every base map.
    pub ratios: Vec<Vec<String>>,
    pub template: Value,
    pub weights: Option<Vec<String>>,
}

impl ValidateDoc {
    pub fn new(t: &SpongeTemplate, w: Option<&BernoulliWeights>) -> Self {
        ValidateDoc {
            command: "validate".into(),
            dimension: t.dim(),
            digits: t.num_digits(),
            exact: t.is_exact() && w.map_or(true, BernoulliWeights::is_exact),
            ratios: t.bases().iter().map(|b| b.maps.iter().map(|m| m.ratio().to_string()).collect()).collect(),
            template: t.to_document(),
            weights: w.map(weight_strings),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateWitness {
    pub coordinate: usize,
    /// Two digits that differ in this coordinate and agree on every strictly faster one.
    pub pair: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub coordinate: usize,
    pub digit: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrreducibilityDoc {
    pub irreducible: bool,
    pub witnesses: Vec<CoordinateWitness>,
    pub uniformly_irreducible: bool,
    pub counterexample: Option<Counterexample>,
}

impl IrreducibilityDoc {
    fn new(t: &SpongeTemplate, irr: &Irreducibility) -> Self {
        let digit = |k: usize| t.digits()[k].clone();
        IrreducibilityDoc {
            irreducible: irr.irreducible,
            witnesses: irr
                .witnesses
                .iter()
                .enumerate()
                .map(|(c, p)| CoordinateWitness { coordinate: c + 1, pair: p.map(|(a, b)| (digit(a), digit(b))) })
                .collect(),
            uniformly_irreducible: irr.uniformly_irreducible,
            counterexample: irr.counterexample.map(|(c, a)| Counterexample { coordinate: c + 1, digit: digit(a) }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub weights: Vec<String>,
    pub chi: Vec<f64>,
    pub ascending: Vec<usize>,
    pub level_sets: Vec<Vec<usize>>,
    pub order: Vec<Vec<bool>>,
    pub distinct_lyapunov: bool,
    pub good: bool,
    pub strongly_good: bool,
    pub irreducibility: IrreducibilityDoc,
    pub warnings: Vec<String>,
}

impl ProfileDoc {
    pub fn new(t: &SpongeTemplate, w: &BernoulliWeights, p: &MeasureProfile) -> Self {
        ProfileDoc {
            weights: weight_strings(w),
            chi: p.chi.clone(),
            ascending: one_based(&p.ascending),
            level_sets: p.level_sets.iter().map(|s| one_based(s)).collect(),
            order: p.order_p.matrix().to_vec(),
            distinct_lyapunov: p.distinct_lyapunov,
            good: p.good,
            strongly_good: p.strongly_good,
            irreducibility: IrreducibilityDoc::new(t, &p.irreducible_wrt),
            warnings: p.warnings.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub command: String,
    pub dimension: usize,
    pub baranski: bool,
    pub strongly_baranski: bool,
    pub sierpinski: bool,
    pub distinguishable: bool,
    pub lalley_gatzouras: bool,
    pub strongly_lg: bool,
    /// Coordinates from slowest to fastest contraction.
    pub lg_sigma: Option<Vec<usize>>,
    /// `partial_order[i][j]` is `i ≺ j`.
    pub partial_order: Vec<Vec<bool>>,
    pub irreducible: bool,
    pub uniformly_irreducible: bool,
    pub irreducibility: IrreducibilityDoc,
    pub diffuseness: String,
    pub diffuseness_reason: String,
    pub measure: Option<ProfileDoc>,
}

impl CheckDoc {
    pub fn new(
        t: &SpongeTemplate,
        class: &Classification,
        order: &PartialOrder,
        irr: &Irreducibility,
        diffuse: &DiffusenessDecision,
        measure: Option<ProfileDoc>,
    ) -> Self {
        CheckDoc {
            command: "check".into(),
            dimension: t.dim(),
            baranski: class.baranski,
            strongly_baranski: class.strongly_baranski,
            sierpinski: class.sierpinski,
            distinguishable: class.distinguishable,
            lalley_gatzouras: class.lalley_gatzouras,
            strongly_lg: class.strongly_lg,
            lg_sigma: class.lg_sigma.as_deref().map(one_based),
            partial_order: order.matrix().to_vec(),
            irreducible: irr.irreducible,
            uniformly_irreducible: irr.uniformly_irreducible,
            irreducibility: IrreducibilityDoc::new(t, irr),
            diffuseness: diffuse.verdict.as_str().into(),
            diffuseness_reason: diffuse.reason.clone(),
            measure,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberDimDoc {
    pub level: usize,
    pub coordinate: usize,
    /// Letters of the earlier coordinates in the ordering.
    pub prefix: Vec<usize>,
    pub dimension: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyTermDoc {
    pub coordinates: Vec<usize>,
    pub entropy: f64,
    pub chi: f64,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyDoc {
    pub weights: Vec<String>,
    pub value: f64,
    pub chi: Vec<f64>,
    pub terms: Vec<LyTermDoc>,
}

impl LyDoc {
    pub fn new(w: &BernoulliWeights, ly: &LyDimension) -> Self {
        LyDoc {
            weights: weight_strings(w),
            value: ly.value,
            chi: ly.chi.clone(),
            terms: ly
                .terms
                .iter()
                .map(|t| LyTermDoc {
                    coordinates: one_based(&t.coordinates),
                    entropy: t.entropy,
                    chi: t.chi,
                    contribution: t.ratio(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartDoc {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynDoc {
    pub value: f64,
    pub weights: Vec<f64>,
    pub uniform_value: f64,
    pub tol: f64,
    pub pruned: bool,
    pub restarts: Vec<RestartDoc>,
}

impl DynDoc {
    pub fn new(d: &DynamicalDimension, tol: f64) -> Self {
        DynDoc {
            value: d.value,
            weights: d.weights.clone(),
            uniform_value: d.uniform_value,
            tol,
            pruned: d.pruned,
            restarts: d
                .restarts
                .iter()
                .map(|r| RestartDoc { value: r.value, iterations: r.iterations, converged: r.converged })
                .collect(),
        }
    }
}

/// Structural flags and every dimension computed for one template.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionDoc {
    pub command: String,
    pub seed: Option<u64>,
    pub sigma: Option<Vec<usize>>,
    pub strongly_lg: bool,
    pub fiber_dims: Vec<FiberDimDoc>,
    pub lower_assouad: Option<f64>,
    pub upper_assouad: Option<f64>,
    pub separation_constant: Option<String>,
    pub ly_dimension: Option<LyDoc>,
    pub mcmullen: Option<f64>,
    pub dynamical_dimension: Option<DynDoc>,
    pub warnings: Vec<String>,
}

impl DimensionDoc {
    pub fn new(command: &str, formula: Option<&AssouadFormula>, separation: Option<&SeparationConstant>) -> Self {
        let mut warnings = Vec::new();
        let mut fiber_dims = Vec::new();
        if let Some(f) = formula {
            warnings.extend(f.warnings.iter().cloned());
            for (k, level) in f.levels.iter().enumerate() {
                for (prefix, dim) in &level.fiber_dims {
                    fiber_dims.push(FiberDimDoc {
                        level: k + 1,
                        coordinate: level.coordinate + 1,
                        prefix: prefix.clone(),
                        dimension: *dim,
                    });
                }
            }
        }
        if let Some(s) = separation {
            warnings.extend(s.warnings.iter().cloned());
        }
        DimensionDoc {
            command: command.into(),
            seed: None,
            sigma: formula.map(|f| one_based(&f.sigma)),
            strongly_lg: formula.is_some_and(|f| f.strongly_lg),
            fiber_dims,
            lower_assouad: formula.map(|f| f.lower),
            upper_assouad: formula.map(|f| f.upper),
            separation_constant: separation.and_then(|s| s.value.as_ref()).map(|v| v.to_string()),
            ly_dimension: None,
            mcmullen: None,
            dynamical_dimension: None,
            warnings,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsystemDoc {
    pub command: String,
    pub eps: f64,
    pub n: usize,
    pub weights: Vec<String>,
    pub ascending: Vec<usize>,
    pub chi: Vec<f64>,
    pub entropy: Vec<f64>,
    pub s_size: usize,
    pub s_mass: f64,
    /// Sizes and masses of `T_d, …, T_0`.
    pub chain_sizes: Vec<usize>,
    pub chain_masses: Vec<f64>,
    pub tau: Vec<Vec<usize>>,
    pub t0_size: usize,
    pub delta_bounds: Vec<f64>,
    pub delta_sum: f64,
    pub formula_lower_assouad: Option<f64>,
    pub formula_upper_assouad: Option<f64>,
    pub strongly_lg: bool,
    pub uniformly_irreducible: bool,
    pub min_fiber_size: usize,
    pub fiber_criterion_agrees: bool,
    pub claim_4_1: bool,
    pub t0_inequality: bool,
    pub chain_loss_bounded: bool,
    pub warnings: Vec<String>,
    /// The subsystem as a template document.
    pub psi: Value,
}

impl SubsystemDoc {
    pub fn new(t: &SpongeTemplate, w: &BernoulliWeights, r: &SubsystemReport) -> Self {
        SubsystemDoc {
            command: "subsystem".into(),
            eps: r.eps,
            n: r.n,
            weights: weight_strings(w),
            ascending: one_based(&r.ascending),
            chi: r.chi.clone(),
            entropy: r.entropy.clone(),
            s_size: r.s_size,
            s_mass: r.s_mass,
            chain_sizes: r.chain_sizes.clone(),
            chain_masses: r.chain_masses.clone(),
            tau: r.tau.to_digits(t),
            t0_size: r.psi.num_digits(),
            delta_bounds: r.delta_bounds.clone(),
            delta_sum: r.delta_sum,
            formula_lower_assouad: r.formula_lower_assouad,
            formula_upper_assouad: r.formula_upper_assouad,
            strongly_lg: r.strongly_lg,
            uniformly_irreducible: r.uniformly_irreducible,
            min_fiber_size: r.min_fiber_size,
            fiber_criterion_agrees: r.fiber_criterion_agrees,
            claim_4_1: r.claim_4_1,
            t0_inequality: r.t0_inequality,
            chain_loss_bounded: r.chain_loss_bounded,
            warnings: r.warnings.clone(),
            psi: r.psi.to_document(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergeRowDoc {
    pub eps: f64,
    pub n: usize,
    pub delta_sum: f64,
    pub formula_lower_assouad: Option<f64>,
    pub s_mass: f64,
    pub t0_mass: f64,
    pub uniformly_irreducible: bool,
    pub limit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergeDoc {
    pub command: String,
    pub weights: Vec<String>,
    pub ly_dimension: f64,
    pub rows: Vec<ConvergeRowDoc>,
}

impl ConvergeDoc {
    pub fn new(w: &BernoulliWeights, study: &ConvergenceStudy) -> Self {
        ConvergeDoc {
            command: "converge".into(),
            weights: weight_strings(w),
            ly_dimension: study.ly_dimension,
            rows: study
                .rows
                .iter()
                .map(|r| ConvergeRowDoc {
                    eps: r.eps,
                    n: r.n,
                    delta_sum: r.delta_sum,
                    formula_lower_assouad: r.formula_lower_assouad,
                    s_mass: r.s_mass,
                    t0_mass: r.t0_mass,
                    uniformly_irreducible: r.uniformly_irreducible,
                    limit: r.limit,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitDoc {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Extremal count for each `β`.
    pub counts: Vec<usize>,
}

impl From<&SlopeFit> for FitDoc {
    fn from(f: &SlopeFit) -> Self {
        FitDoc { slope: f.slope, intercept: f.intercept, r_squared: f.r_squared, counts: f.counts.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitPairDoc {
    pub delta1: FitDoc,
    pub delta2: FitDoc,
}

impl From<&AssouadFit> for FitPairDoc {
    fn from(f: &AssouadFit) -> Self {
        FitPairDoc { delta1: (&f.delta1).into(), delta2: (&f.delta2).into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRowDoc {
    pub center: usize,
    pub rho: f64,
    pub beta: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub sigma: Vec<usize>,
    pub rho: f64,
    pub x: Vec<f64>,
    pub witnesses: Vec<Vec<f64>>,
    pub swap_positions: Vec<usize>,
    pub matrix: Vec<Vec<f64>>,
    pub diagonal_ratios: Vec<f64>,
    pub c: f64,
    pub lower_bound: f64,
    pub max_below_diagonal: f64,
    pub tolerance: f64,
    pub upper_triangular: bool,
    pub in_ball: bool,
    pub warnings: Vec<String>,
}

impl From<&WitnessReport> for WitnessDoc {
    fn from(w: &WitnessReport) -> Self {
        WitnessDoc {
            sigma: one_based(&w.sigma),
            rho: w.rho,
            x: w.x.clone(),
            witnesses: w.witnesses.clone(),
            swap_positions: w.swap_positions.clone(),
            matrix: w.matrix.clone(),
            diagonal_ratios: w.diagonal_ratios.clone(),
            c: w.c,
            lower_bound: w.lower_bound,
            max_below_diagonal: w.max_below_diagonal,
            tolerance: w.tolerance,
            upper_triangular: w.upper_triangular,
            in_ball: w.in_ball,
            warnings: w.warnings.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessScaleDoc {
    pub rho: f64,
    pub points_in_ball: usize,
    pub max_dist: f64,
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessDoc {
    pub coordinate: usize,
    pub digit: Vec<usize>,
    pub x: Vec<f64>,
    pub alpha: f64,
    pub degenerate: bool,
    pub separation: f64,
    pub constant_bound: Option<f64>,
    pub scales: Vec<FlatnessScaleDoc>,
    pub stable: bool,
    pub within_bound: bool,
    pub passed: bool,
}

impl From<&FlatnessCertificate> for FlatnessDoc {
    fn from(f: &FlatnessCertificate) -> Self {
        FlatnessDoc {
            coordinate: f.coordinate + 1,
            digit: f.digit.clone(),
            x: f.x.clone(),
            alpha: f.alpha,
            degenerate: f.degenerate,
            separation: f.separation,
            constant_bound: f.constant_bound,
            scales: f
                .scales
                .iter()
                .map(|s| FlatnessScaleDoc {
                    rho: s.rho,
                    points_in_ball: s.points_in_ball,
                    max_dist: s.max_dist,
                    constant: s.constant,
                })
                .collect(),
            stable: f.stable,
            within_bound: f.within_bound,
            passed: f.passed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateDoc {
    pub command: String,
    pub seed: u64,
    /// `template` counts on cylinder nets, `cloud` counts on the sampled points.
    pub source: String,
    pub points: usize,
    pub depth: usize,
    pub betas: Vec<f64>,
    pub rhos: Vec<f64>,
    pub centers: Vec<Vec<f64>>,
    pub lower: FitPairDoc,
    pub upper: FitPairDoc,
    pub formula_lower_assouad: Option<f64>,
    pub formula_upper_assouad: Option<f64>,
    pub table: Vec<CountRowDoc>,
    pub witness: Option<WitnessDoc>,
    pub flatness: Option<FlatnessDoc>,
    pub warnings: Vec<String>,
}

impl EstimateDoc {
    pub fn new(source: &str, points: usize, depth: usize, e: &AssouadEstimate, formula: Option<&AssouadFormula>) -> Self {
        EstimateDoc {
            command: "estimate".into(),
            seed: e.seed,
            source: source.into(),
            points,
            depth,
            betas: e.betas.clone(),
            rhos: e.rhos.clone(),
            centers: e.centers.clone(),
            lower: (&e.lower).into(),
            upper: (&e.upper).into(),
            formula_lower_assouad: formula.map(|f| f.lower),
            formula_upper_assouad: formula.map(|f| f.upper),
            table: e
                .table
                .iter()
                .map(|r| CountRowDoc { center: r.center, rho: r.rho, beta: r.beta, count: r.count })
                .collect(),
            witness: None,
            flatness: None,
            warnings: Vec::new(),
        }
    }

    /// The `(β, ρ, count)` table with a header line.
    pub fn csv(&self) -> String {
        let mut out = String::from("center,rho,beta,count\n");
        for r in &self.table {
            out.push_str(&format!("{},{},{},{}\n", r.center, r.rho, r.beta, r.count));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderDoc {
    pub command: String,
    pub output: String,
    pub dimension: usize,
    pub panels: usize,
    pub size: u32,
    pub bytes: usize,
}

/// Pretty JSON with a trailing newline; field order follows the struct.
pub fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn from_text<T: for<'de> Deserialize<'de>>(text: &str) -> serde_json::Result<T> {
    serde_json::from_str(text)
}
