//! Typical-word subsystems `Ψ_N`: the word sets `S_N`, the pruning chain
//! `T_d ⊇ … ⊇ T_0`, the interior word `τ` and the fiber dimension bounds `δ_i(N,ε)`.
//!
//! Words of length `N` over `E` are encoded as base-`|E|` integers with the
//! first letter most significant, so sorted codes are in lexicographic order.

use std::collections::{BTreeMap, HashMap};

use crate::dimension::{assouad_formula, fiber_systems, ly_dimension, LyEvaluator};
use crate::error::{Error, Result};
use crate::model::{BaseIfs, BernoulliWeights, SpongeTemplate, Word};
use crate::structure::{classify, irreducibility, lyapunov_groups, measure_profile};

pub const DEFAULT_CAP: u64 = 10_000_000;
pub const DEFAULT_TAU_MAX_LEN: usize = 8;
/// Relative slack on mass comparisons, shared by the chain and its checks.
const MASS_RTOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct WordSet {
    pub n: usize,
    pub alphabet: usize,
    /// Sorted word codes.
    pub members: Vec<u64>,
    /// `log μ(ω)` aligned with `members`.
    pub log_masses: Vec<f64>,
    pub mass: f64,
}

impl WordSet {
    fn from_members(n: usize, alphabet: usize, members: Vec<u64>, log_masses: Vec<f64>) -> Self {
        let mass = log_masses.iter().map(|l| l.exp()).sum();
        WordSet { n, alphabet, members, log_masses, mass }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn word(&self, index: usize) -> Word {
        Word(decode(self.members[index], self.n, self.alphabet))
    }

    pub fn words(&self) -> Vec<Word> {
        (0..self.len()).map(|k| self.word(k)).collect()
    }
}

pub fn decode(code: u64, n: usize, alphabet: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    let mut c = code;
    for slot in out.iter_mut().rev() {
        *slot = (c % alphabet as u64) as usize;
        c /= alphabet as u64;
    }
    out
}

/// Per-letter quantities of a measure, with coordinates in ascending-`χ` order.
#[derive(Clone, Debug)]
pub struct MeasureSetup {
    pub ascending: Vec<usize>,
    /// `χ` of the `k`-th ascending coordinate.
    pub chi: Vec<f64>,
    /// `h_p(I_{≤k} | I_{<k})` of the `k`-th ascending coordinate.
    pub entropy: Vec<f64>,
    log_p: Vec<f64>,
    /// `-log|φ'_{a,asc[k]}|`, indexed `[a][k]`.
    lyap_inc: Vec<Vec<f64>>,
    /// `log p([a]_{I<k}) / p([a]_{I≤k})`, indexed `[a][k]`.
    ent_inc: Vec<Vec<f64>>,
    /// Class of each letter under the first `k` ascending coordinates, `k = 0..=d`.
    class_of: Vec<Vec<u32>>,
    /// `log p` of each class, per `k`.
    class_log_mass: Vec<Vec<f64>>,
}

impl MeasureSetup {
    pub fn new(t: &SpongeTemplate, w: &BernoulliWeights) -> Result<Self> {
        if w.len() != t.num_digits() {
            return Err(Error::InvalidWeights(format!("{} weights for {} digits", w.len(), t.num_digits())));
        }
        if !w.is_strictly_positive() {
            return Err(Error::NonPositiveWeights);
        }
        let d = t.dim();
        let p = w.probs();
        let (chi_all, groups) = lyapunov_groups(t, w);
        let ascending: Vec<usize> = groups.iter().flatten().copied().collect();
        let eval = LyEvaluator::new(t);
        let mut class_of = Vec::with_capacity(d + 1);
        let mut class_log_mass = Vec::with_capacity(d + 1);
        let mut entropy_prefix = Vec::with_capacity(d + 1);
        let mut mask = 0u64;
        for k in 0..=d {
            if k > 0 {
                mask |= 1 << ascending[k - 1];
            }
            let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
            let of: Vec<u32> = t
                .digits()
                .iter()
                .map(|a| {
                    let key: Vec<usize> = ascending[..k].iter().map(|&c| a[c]).collect();
                    let next = ids.len() as u32;
                    *ids.entry(key).or_insert(next)
                })
                .collect();
            let mut mass = vec![0.0; ids.len()];
            of.iter().zip(p).for_each(|(&c, &pa)| mass[c as usize] += pa);
            class_log_mass.push(mass.iter().map(|m| m.ln()).collect::<Vec<f64>>());
            class_of.push(of);
            entropy_prefix.push(eval.entropy(p, mask));
        }
        let n_digits = t.num_digits();
        let lyap_inc = (0..n_digits).map(|a| ascending.iter().map(|&c| t.log_contraction(a, c)).collect()).collect();
        let ent_inc = (0..n_digits)
            .map(|a| {
                (0..d)
                    .map(|k| {
                        class_log_mass[k][class_of[k][a] as usize] - class_log_mass[k + 1][class_of[k + 1][a] as usize]
                    })
                    .collect()
            })
            .collect();
        Ok(MeasureSetup {
            chi: ascending.iter().map(|&c| chi_all[c]).collect(),
            entropy: (0..d).map(|k| entropy_prefix[k + 1] - entropy_prefix[k]).collect(),
            ascending,
            log_p: p.iter().map(|x| x.ln()).collect(),
            lyap_inc,
            ent_inc,
            class_of,
            class_log_mass,
        })
    }

    fn dim(&self) -> usize {
        self.ascending.len()
    }

    /// Class key of a word under the first `k` ascending coordinates.
    fn class_key(&self, code: u64, n: usize, alphabet: usize, k: usize) -> Vec<u32> {
        decode(code, n, alphabet).iter().map(|&a| self.class_of[k][a]).collect()
    }

    /// `log μ([ω]_{I_{<k+1}})` as a product of marginal class weights.
    fn class_log_mass(&self, code: u64, n: usize, alphabet: usize, k: usize) -> f64 {
        decode(code, n, alphabet).iter().map(|&a| self.class_log_mass[k][self.class_of[k][a] as usize]).sum()
    }
}

fn check_eps(eps: f64, positive: bool) -> Result<()> {
    let ok = eps.is_finite() && eps <= 1.0 && if positive { eps > 0.0 } else { eps >= 0.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::MalformedInput(format!("eps = {eps} is outside the allowed range")))
    }
}

fn check_cap(alphabet: usize, n: usize, cap: u64) -> Result<()> {
    let size = (alphabet as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap as u128 || size > u64::MAX as u128 {
        return Err(Error::EnumerationCapExceeded { size, cap });
    }
    Ok(())
}

struct Search<'a> {
    setup: &'a MeasureSetup,
    n: usize,
    alphabet: usize,
    lyap_lo: Vec<f64>,
    lyap_hi: Vec<f64>,
    ent_lo: Vec<f64>,
    min_lyap: Vec<f64>,
    max_lyap: Vec<f64>,
    max_ent: Vec<f64>,
    slack: f64,
    members: Vec<u64>,
    log_masses: Vec<f64>,
}

impl Search<'_> {
    fn feasible(&self, lyap: &[f64], ent: &[f64], remaining: usize) -> bool {
        let r = remaining as f64;
        (0..self.setup.dim()).all(|k| {
            lyap[k] + r * self.min_lyap[k] <= self.lyap_hi[k] + self.slack
                && lyap[k] + r * self.max_lyap[k] >= self.lyap_lo[k] - self.slack
                && ent[k] + r * self.max_ent[k] >= self.ent_lo[k] - self.slack
        })
    }

    fn descend(&mut self, depth: usize, code: u64, log_mass: f64, lyap: &mut Vec<f64>, ent: &mut Vec<f64>) {
        if depth == self.n {
            self.members.push(code);
            self.log_masses.push(log_mass);
            return;
        }
        let d = self.setup.dim();
        for a in 0..self.alphabet {
            for k in 0..d {
                lyap[k] += self.setup.lyap_inc[a][k];
                ent[k] += self.setup.ent_inc[a][k];
            }
            if self.feasible(lyap, ent, self.n - depth - 1) {
                let next = code * self.alphabet as u64 + a as u64;
                self.descend(depth + 1, next, log_mass + self.setup.log_p[a], lyap, ent);
            }
            for k in 0..d {
                lyap[k] -= self.setup.lyap_inc[a][k];
                ent[k] -= self.setup.ent_inc[a][k];
            }
        }
    }
}

/// `S_N`: words whose Lyapunov sums lie in the `(1±ε)Nχ_i` windows and whose
/// entropy sums reach `(1−ε)N h_i`.
/// Any finite `ε ≥ 0` is allowed; wide windows simply keep more words.
pub fn typical_words(t: &SpongeTemplate, w: &BernoulliWeights, eps: f64, n: usize, cap: u64) -> Result<WordSet> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::MalformedInput(format!("eps = {eps} is outside the allowed range")));
    }
    let setup = MeasureSetup::new(t, w)?;
    typical_words_with(&setup, t.num_digits(), eps, n, cap)
}

fn typical_words_with(setup: &MeasureSetup, alphabet: usize, eps: f64, n: usize, cap: u64) -> Result<WordSet> {
    check_cap(alphabet, n, cap)?;
    let d = setup.dim();
    let nf = n as f64;
    let mut search = Search {
        setup,
        n,
        alphabet,
        lyap_lo: (0..d).map(|k| (1.0 - eps) * nf * setup.chi[k]).collect(),
        lyap_hi: (0..d).map(|k| (1.0 + eps) * nf * setup.chi[k]).collect(),
        ent_lo: (0..d).map(|k| (1.0 - eps) * nf * setup.entropy[k]).collect(),
        min_lyap: (0..d).map(|k| setup.lyap_inc.iter().map(|row| row[k]).fold(f64::INFINITY, f64::min)).collect(),
        max_lyap: (0..d).map(|k| setup.lyap_inc.iter().map(|row| row[k]).fold(f64::NEG_INFINITY, f64::max)).collect(),
        max_ent: (0..d).map(|k| setup.ent_inc.iter().map(|row| row[k]).fold(f64::NEG_INFINITY, f64::max)).collect(),
        slack: 1e-9 * nf.max(1.0),
        members: Vec::new(),
        log_masses: Vec::new(),
    };
    let mut lyap = vec![0.0; d];
    let mut ent = vec![0.0; d];
    if search.feasible(&lyap, &ent, n) {
        search.descend(0, 0, 0.0, &mut lyap, &mut ent);
    }
    let (members, log_masses) = (search.members, search.log_masses);
    Ok(WordSet::from_members(n, alphabet, members, log_masses))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    /// `sets[i]` is `T_i`; `sets[d]` is `S_N`.
    pub sets: Vec<WordSet>,
}

impl Chain {
    pub fn t0(&self) -> &WordSet {
        &self.sets[0]
    }

    /// `μ(T_d), …, μ(T_0)`.
    pub fn masses(&self) -> Vec<f64> {
        self.sets.iter().rev().map(|s| s.mass).collect()
    }
}

fn group_by_class(setup: &MeasureSetup, set: &WordSet, k: usize) -> BTreeMap<Vec<u32>, Vec<usize>> {
    let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for (idx, &code) in set.members.iter().enumerate() {
        groups.entry(setup.class_key(code, set.n, set.alphabet, k)).or_default().push(idx);
    }
    groups
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let top = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + v.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
}

/// `log(mass) ≥ log(ε · class mass)` up to the shared relative slack.
fn meets_threshold(log_mass: f64, eps: f64, log_class_mass: f64) -> bool {
    eps == 0.0 || log_mass >= eps.ln() + log_class_mass + (1.0 - MASS_RTOL).ln()
}

/// Backward recursion `T_{i−1} = {ω ∈ T_i : μ(T_i ∩ [ω]_{I<i}) ≥ ε μ([ω]_{I<i})}`.
pub fn prune_chain(s: &WordSet, t: &SpongeTemplate, w: &BernoulliWeights, eps: f64) -> Result<Chain> {
    check_eps(eps, false)?;
    let setup = MeasureSetup::new(t, w)?;
    Ok(prune_chain_with(&setup, s, eps))
}

fn prune_chain_with(setup: &MeasureSetup, s: &WordSet, eps: f64) -> Chain {
    let d = setup.dim();
    let mut sets = vec![s.clone(); d + 1];
    for i in (1..=d).rev() {
        let current = &sets[i];
        let mut keep = vec![false; current.len()];
        for members in group_by_class(setup, current, i - 1).values() {
            let log_mass = log_sum_exp(members.iter().map(|&m| current.log_masses[m]));
            let log_class = setup.class_log_mass(current.members[members[0]], s.n, s.alphabet, i - 1);
            if meets_threshold(log_mass, eps, log_class) {
                members.iter().for_each(|&m| keep[m] = true);
            }
        }
        let (members, log_masses): (Vec<u64>, Vec<f64>) = current
            .members
            .iter()
            .zip(&current.log_masses)
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|((c, l), _)| (*c, *l))
            .unzip();
        sets[i - 1] = WordSet::from_members(s.n, s.alphabet, members, log_masses);
    }
    Chain { sets }
}

/// First word in length-then-lexicographic order whose image box lies in `(0,1)^d`.
pub fn interior_word(t: &SpongeTemplate, max_len: usize) -> Result<Word> {
    let k = t.num_digits();
    for len in 1..=max_len {
        if check_cap(k, len, DEFAULT_CAP).is_err() {
            break;
        }
        let total = (k as u64).pow(len as u32);
        for code in 0..total {
            let letters = decode(code, len, k);
            let inside = t.word_box_f64(&letters).iter().all(|&(lo, hi)| lo > -1e-9 && hi < 1.0 + 1e-9);
            if inside {
                let word = Word(letters);
                if t.apply_word(&word).strictly_inside_unit() {
                    return Ok(word);
                }
            }
        }
    }
    Err(Error::NoInteriorWord(max_len))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsystemOptions {
    pub cap: u64,
    pub tau_max_len: usize,
    /// Overrides the breadth-first choice of `τ`.
    pub tau: Option<Word>,
}

impl Default for SubsystemOptions {
    fn default() -> Self {
        SubsystemOptions { cap: DEFAULT_CAP, tau_max_len: DEFAULT_TAU_MAX_LEN, tau: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsystemReport {
    pub eps: f64,
    pub n: usize,
    pub ascending: Vec<usize>,
    pub chi: Vec<f64>,
    pub entropy: Vec<f64>,
    pub s_size: usize,
    pub s_mass: f64,
    /// `|T_d|, …, |T_0|`.
    pub chain_sizes: Vec<usize>,
    /// `μ(T_d), …, μ(T_0)`.
    pub chain_masses: Vec<f64>,
    pub tau: Word,
    pub t0: WordSet,
    pub psi: SpongeTemplate,
    /// `δ_i(N,ε)` in ascending-`χ` order.
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
}

/// `δ_i(N,ε) = ((1−ε)N h + log ε) / ((1+ε)N χ − log|φ'_τ|)`, clamped below at 0.
/// `log_tau_contraction` is `−log|φ'_τ|`, so it is non-negative.
pub fn delta_bound(entropy: f64, chi: f64, eps: f64, n: usize, log_tau_contraction: f64) -> f64 {
    let nf = n as f64;
    let num = (1.0 - eps) * nf * entropy + eps.ln();
    let den = (1.0 + eps) * nf * chi + log_tau_contraction;
    (num / den).max(0.0)
}

fn check_claim_and_t0(setup: &MeasureSetup, chain: &Chain, eps: f64) -> (bool, bool) {
    let t0 = chain.t0();
    let mut claim = true;
    let mut inequality = true;
    for i in 1..=setup.dim() {
        let ti = &chain.sets[i];
        let in_ti = group_by_class(setup, ti, i - 1);
        for (key, members0) in group_by_class(setup, t0, i - 1) {
            let codes0: Vec<u64> = members0.iter().map(|&m| t0.members[m]).collect();
            let codes_i: Vec<u64> = in_ti.get(&key).map(|v| v.iter().map(|&m| ti.members[m]).collect()).unwrap_or_default();
            claim &= codes0 == codes_i;
            let log_mass = log_sum_exp(members0.iter().map(|&m| t0.log_masses[m]));
            let log_class = setup.class_log_mass(codes0[0], t0.n, t0.alphabet, i - 1);
            inequality &= meets_threshold(log_mass, eps, log_class);
        }
    }
    (claim, inequality)
}

/// Builds `Ψ_N = (φ_ω ∘ φ_τ)_{ω ∈ T_0}`, keeping the original coordinate order.
fn assemble_psi(t: &SpongeTemplate, t0: &WordSet, tau: &Word) -> Result<SpongeTemplate> {
    let d = t.dim();
    let words: Vec<Vec<usize>> = t0.members.iter().map(|&c| decode(c, t0.n, t0.alphabet)).collect();
    let mut bases = Vec::with_capacity(d);
    let mut letter_of: Vec<Vec<usize>> = vec![Vec::with_capacity(d); words.len()];
    for c in 0..d {
        let mut alphabet: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut representative: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (idx, w) in words.iter().enumerate() {
            let coordinate_word: Vec<usize> = w.iter().map(|&a| t.digits()[a][c]).collect();
            representative.entry(coordinate_word).or_insert(idx);
        }
        let maps = representative
            .iter()
            .enumerate()
            .map(|(slot, (cw, &idx))| {
                alphabet.insert(cw.clone(), slot);
                t.word_map(&Word(words[idx].clone()).concat(tau), c)
            })
            .collect();
        for (idx, w) in words.iter().enumerate() {
            let coordinate_word: Vec<usize> = w.iter().map(|&a| t.digits()[a][c]).collect();
            letter_of[idx].push(alphabet[&coordinate_word]);
        }
        bases.push(BaseIfs { maps, grid: None });
    }
    SpongeTemplate::new(bases, letter_of)
}

pub fn build_subsystem(
    t: &SpongeTemplate,
    w: &BernoulliWeights,
    eps: f64,
    n: usize,
    opts: &SubsystemOptions,
) -> Result<SubsystemReport> {
    check_eps(eps, true)?;
    let profile = measure_profile(t, w)?;
    let mut violated = Vec::new();
    if !profile.distinct_lyapunov {
        violated.push("Lyapunov exponents are not distinct".to_string());
    }
    if !profile.irreducible_wrt.irreducible {
        violated.push("template is not irreducible with respect to the measure".to_string());
    }
    if !profile.good {
        violated.push("measure is not good".to_string());
    }
    if !violated.is_empty() {
        return Err(Error::HypothesesViolated(violated));
    }
    let setup = MeasureSetup::new(t, w)?;
    let s = typical_words_with(&setup, t.num_digits(), eps, n, opts.cap)?;
    let chain = prune_chain_with(&setup, &s, eps);
    if chain.t0().is_empty() {
        return Err(Error::EmptySubsystem);
    }
    let tau = match &opts.tau {
        Some(tau) => tau.clone(),
        None => interior_word(t, opts.tau_max_len)?,
    };
    let psi = assemble_psi(t, chain.t0(), &tau)?;
    let mut warnings = Vec::new();
    let delta_bounds: Vec<f64> = (0..setup.dim())
        .map(|k| {
            let c = setup.ascending[k];
            let log_tau: f64 = tau.letters().iter().map(|&a| t.log_contraction(a, c)).sum();
            let delta = delta_bound(setup.entropy[k], setup.chi[k], eps, n, log_tau);
            if delta == 0.0 {
                warnings.push(format!("delta bound for coordinate {} clamped at 0", c + 1));
            }
            delta
        })
        .collect();
    let class = classify(&psi);
    let uniformly_irreducible = irreducibility(&psi).uniformly_irreducible;
    let min_fiber_size = fiber_systems(&psi, &setup.ascending)?.min_fiber_size();
    let (formula_lower_assouad, formula_upper_assouad) = match assouad_formula(&psi) {
        Ok(f) => (Some(f.lower), Some(f.upper)),
        Err(e) => {
            warnings.push(format!("no Assouad formula for the subsystem: {e}"));
            (None, None)
        }
    };
    let (claim_4_1, t0_inequality) = check_claim_and_t0(&setup, &chain, eps);
    let masses = chain.masses();
    let chain_loss_bounded = masses.windows(2).all(|m| m[0] - m[1] <= eps + 1e-12);
    Ok(SubsystemReport {
        eps,
        n,
        chi: setup.chi.clone(),
        entropy: setup.entropy.clone(),
        ascending: setup.ascending.clone(),
        s_size: s.len(),
        s_mass: s.mass,
        chain_sizes: chain.sets.iter().rev().map(WordSet::len).collect(),
        chain_masses: masses,
        tau,
        t0: chain.sets[0].clone(),
        delta_sum: delta_bounds.iter().sum(),
        delta_bounds,
        formula_lower_assouad,
        formula_upper_assouad,
        strongly_lg: class.strongly_lg,
        uniformly_irreducible,
        fiber_criterion_agrees: (min_fiber_size >= 2) == uniformly_irreducible,
        min_fiber_size,
        psi,
        claim_4_1,
        t0_inequality,
        chain_loss_bounded,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub eps: f64,
    pub n: usize,
    pub delta_sum: f64,
    pub formula_lower_assouad: Option<f64>,
    pub s_mass: f64,
    pub t0_mass: f64,
    pub uniformly_irreducible: bool,
    /// `(1−ε)/(1+ε)` times the Ledrappier–Young dimension.
    pub limit: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    pub ly_dimension: f64,
}

pub fn convergence_study(
    t: &SpongeTemplate,
    w: &BernoulliWeights,
    eps_schedule: &[f64],
    n_schedule: &[usize],
    opts: &SubsystemOptions,
) -> Result<ConvergenceStudy> {
    if eps_schedule.is_empty() || n_schedule.is_empty() {
        return Err(Error::EmptyList);
    }
    if n_schedule.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::MalformedInput("N schedule must be strictly ascending".into()));
    }
    let ly = ly_dimension(t, w)?.value;
    let mut rows = Vec::new();
    for &eps in eps_schedule {
        for &n in n_schedule {
            let r = build_subsystem(t, w, eps, n, opts)?;
            rows.push(ConvergenceRow {
                eps,
                n,
                delta_sum: r.delta_sum,
                formula_lower_assouad: r.formula_lower_assouad,
                s_mass: r.s_mass,
                t0_mass: r.t0.mass,
                uniformly_irreducible: r.uniformly_irreducible,
                limit: (1.0 - eps) / (1.0 + eps) * ly,
            });
        }
    }
    Ok(ConvergenceStudy { rows, ly_dimension: ly })
}
