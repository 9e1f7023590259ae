//! Dimension formulas: Moran equations, fiber systems, Assouad bounds,
//! Ledrappier–Young dimension of Bernoulli measures, the McMullen closed form
//! and the dynamical dimension optimizer.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{BernoulliWeights, SpongeTemplate};
use crate::numeric::{cmp, Num, EQ_TOL};
use crate::optimize::{bfgs_maximize, nelder_mead_maximize};
use crate::structure::{classify, is_good, lyapunov_groups, projections, LYAPUNOV_TOL};

/// Solves `Σ r_b^s = 1` by bisection.
pub fn moran_dimension(ratios: &[f64]) -> Result<f64> {
    if ratios.is_empty() {
        return Err(Error::EmptyList);
    }
    if let Some(r) = ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::RatioOutOfRange(r.to_string()));
    }
    if ratios.len() == 1 {
        return Ok(0.0);
    }
    let logs: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let residual = |s: f64| logs.iter().map(|l| (s * l).exp()).sum::<f64>() - 1.0;
    let max_log = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (0.0_f64, (ratios.len() as f64).ln() / -max_log + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if residual(lo).abs() <= residual(hi).abs() { lo } else { hi })
}

fn check_permutation(d: usize, sigma: &[usize]) -> Result<()> {
    let mut seen = vec![false; d];
    let ok = sigma.len() == d && sigma.iter().all(|&c| c < d && !std::mem::replace(&mut seen[c], true));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidPermutation(sigma.to_vec()))
    }
}

/// One fiber IFS: the letters allowed in the next coordinate after a fixed prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct Fiber {
    /// Letters of the digit in the σ-first coordinates.
    pub prefix: Vec<usize>,
    pub letters: Vec<usize>,
    pub ratios: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberLevel {
    /// Original coordinate index `σ(i)`.
    pub coordinate: usize,
    pub fibers: Vec<Fiber>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberSystem {
    pub sigma: Vec<usize>,
    pub levels: Vec<FiberLevel>,
}

impl FiberSystem {
    /// Smallest fiber alphabet over all levels and prefixes.
    pub fn min_fiber_size(&self) -> usize {
        self.levels.iter().flat_map(|l| l.fibers.iter().map(|f| f.letters.len())).min().unwrap_or(0)
    }
}

pub fn fiber_systems(t: &SpongeTemplate, sigma: &[usize]) -> Result<FiberSystem> {
    check_permutation(t.dim(), sigma)?;
    let levels = (0..t.dim())
        .map(|i| {
            let coordinate = sigma[i];
            let mut table: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            for a in t.digits() {
                let prefix: Vec<usize> = sigma[..i].iter().map(|&c| a[c]).collect();
                let letters = table.entry(prefix).or_default();
                if !letters.contains(&a[coordinate]) {
                    letters.push(a[coordinate]);
                }
            }
            let fibers = table
                .into_iter()
                .map(|(prefix, mut letters)| {
                    letters.sort_unstable();
                    let ratios =
                        letters.iter().map(|&l| t.bases()[coordinate].maps[l].magnitude().to_f64()).collect();
                    Fiber { prefix, letters, ratios }
                })
                .collect();
            FiberLevel { coordinate, fibers }
        })
        .collect();
    Ok(FiberSystem { sigma: sigma.to_vec(), levels })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssouadLevel {
    pub coordinate: usize,
    pub lower: f64,
    pub upper: f64,
    /// Similarity dimension of every fiber at this level, keyed by prefix.
    pub fiber_dims: Vec<(Vec<usize>, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssouadFormula {
    pub sigma: Vec<usize>,
    pub levels: Vec<AssouadLevel>,
    pub lower: f64,
    pub upper: f64,
    pub strongly_lg: bool,
    pub warnings: Vec<String>,
}

/// Lower and upper Assouad dimension of a Lalley–Gatzouras sponge from its fiber IFSes.
pub fn assouad_formula(t: &SpongeTemplate) -> Result<AssouadFormula> {
    let class = classify(t);
    let sigma = class.lg_sigma.clone().filter(|_| class.lalley_gatzouras).ok_or(Error::NotLalleyGatzouras)?;
    let system = fiber_systems(t, &sigma)?;
    let mut levels = Vec::with_capacity(system.levels.len());
    for level in &system.levels {
        let fiber_dims = level
            .fibers
            .iter()
            .map(|f| Ok((f.prefix.clone(), moran_dimension(&f.ratios)?)))
            .collect::<Result<Vec<_>>>()?;
        let lower = fiber_dims.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
        let upper = fiber_dims.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
        levels.push(AssouadLevel { coordinate: level.coordinate, lower, upper, fiber_dims });
    }
    let mut warnings = Vec::new();
    if !class.strongly_lg {
        if t.dim() >= 3 && !class.sierpinski {
            warnings.push("not strongly Lalley-Gatzouras: formula conjectural for d>=3 non-strong case".into());
        } else {
            warnings.push("not strongly Lalley-Gatzouras: formula relies on known results for carpets and Sierpinski sponges".into());
        }
    }
    Ok(AssouadFormula {
        lower: levels.iter().map(|l| l.lower).sum(),
        upper: levels.iter().map(|l| l.upper).sum(),
        sigma,
        levels,
        strongly_lg: class.strongly_lg,
        warnings,
    })
}

/// Evaluates Ledrappier–Young dimensions of Bernoulli measures on a fixed template.
#[derive(Clone, Debug)]
pub struct LyEvaluator {
    dim: usize,
    /// `-log|φ'_{a,i}|`, indexed `[a][i]`.
    logs: Vec<Vec<f64>>,
    digits: Vec<Vec<usize>>,
    /// Class ids of every digit for each coordinate subset (bitmask), when `d` is small.
    classes: Option<Vec<(Vec<u32>, usize)>>,
}

const EAGER_CLASS_DIM: usize = 12;

fn class_ids(digits: &[Vec<usize>], mask: u64) -> (Vec<u32>, usize) {
    let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
    let out = digits
        .iter()
        .map(|a| {
            let key: Vec<usize> = a.iter().enumerate().filter(|(c, _)| mask >> c & 1 == 1).map(|(_, &l)| l).collect();
            let next = ids.len() as u32;
            *ids.entry(key).or_insert(next)
        })
        .collect();
    (out, ids.len())
}

impl LyEvaluator {
    pub fn new(t: &SpongeTemplate) -> Self {
        let d = t.dim();
        let logs = (0..t.num_digits()).map(|a| (0..d).map(|i| t.log_contraction(a, i)).collect()).collect();
        let digits = t.digits().to_vec();
        let classes =
            (d <= EAGER_CLASS_DIM).then(|| (0..1u64 << d).map(|mask| class_ids(&digits, mask)).collect());
        LyEvaluator { dim: d, logs, digits, classes }
    }

    pub fn chi(&self, probs: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| probs.iter().zip(&self.logs).map(|(p, l)| p * l[i]).sum()).collect()
    }

    /// Entropy of the projection of `p` onto the coordinates in `mask`.
    pub fn entropy(&self, probs: &[f64], mask: u64) -> f64 {
        let owned;
        let (ids, n) = match &self.classes {
            Some(c) => (&c[mask as usize].0, c[mask as usize].1),
            None => {
                owned = class_ids(&self.digits, mask);
                (&owned.0, owned.1)
            }
        };
        let mut mass = vec![0.0; n];
        for (p, &k) in probs.iter().zip(ids) {
            mass[k as usize] += p;
        }
        -mass.iter().filter(|m| **m > 0.0).map(|m| m * m.ln()).sum::<f64>()
    }

    /// Terms `h(I_{≤g} | I_{<g}) / χ_g` over tie groups in ascending-`χ` order.
    pub fn terms(&self, probs: &[f64], chi: &[f64], groups: &[Vec<usize>]) -> Vec<LyTerm> {
        let mut mask = 0u64;
        let mut prev = 0.0;
        groups
            .iter()
            .map(|g| {
                g.iter().for_each(|&c| mask |= 1 << c);
                let h = self.entropy(probs, mask);
                let chi_g = g.iter().map(|&c| chi[c]).sum::<f64>() / g.len() as f64;
                let term = LyTerm { coordinates: g.clone(), entropy: h - prev, chi: chi_g };
                prev = h;
                term
            })
            .collect()
    }

    /// Dimension of `ν_p`, ordering coordinates by the floating-point exponents.
    pub fn value(&self, probs: &[f64]) -> f64 {
        let chi = self.chi(probs);
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&i, &j| chi[i].partial_cmp(&chi[j]).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in order {
            match groups.last_mut() {
                Some(g) if (chi[g[0]] - chi[i]).abs() <= LYAPUNOV_TOL => g.push(i),
                _ => groups.push(vec![i]),
            }
        }
        self.terms(probs, &chi, &groups).iter().map(LyTerm::ratio).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LyTerm {
    /// Coordinates sharing this Lyapunov exponent.
    pub coordinates: Vec<usize>,
    /// Conditional entropy `h_p(I_{≤i} | I_{<i})` in nats.
    pub entropy: f64,
    pub chi: f64,
}

impl LyTerm {
    pub fn ratio(&self) -> f64 {
        if self.entropy <= 0.0 {
            0.0
        } else {
            self.entropy / self.chi
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LyDimension {
    pub value: f64,
    pub chi: Vec<f64>,
    pub ascending: Vec<usize>,
    pub terms: Vec<LyTerm>,
    pub warnings: Vec<String>,
}

pub fn ly_dimension(t: &SpongeTemplate, w: &BernoulliWeights) -> Result<LyDimension> {
    if w.len() != t.num_digits() {
        return Err(Error::InvalidWeights(format!("{} weights for {} digits", w.len(), t.num_digits())));
    }
    let (chi, groups) = lyapunov_groups(t, w);
    let terms = LyEvaluator::new(t).terms(w.probs(), &chi, &groups);
    let mut warnings = Vec::new();
    if groups.len() < t.dim() {
        warnings.push("Lyapunov exponents tie; tied coordinates contribute their joint entropy".into());
    }
    Ok(LyDimension {
        value: terms.iter().map(LyTerm::ratio).sum(),
        ascending: groups.iter().flatten().copied().collect(),
        chi,
        terms,
        warnings,
    })
}

/// Bedford–McMullen formula `log_n Σ_b t_b^{log n / log m}` for carpets.
pub fn mcmullen_dimension(t: &SpongeTemplate) -> Result<f64> {
    if t.dim() != 2 {
        return Err(Error::NotSierpinskiCarpet(format!("dimension {} is not 2", t.dim())));
    }
    let class = classify(t);
    if !class.sierpinski {
        return Err(Error::NotSierpinskiCarpet("contraction ratios vary between digits".into()));
    }
    if !class.baranski {
        return Err(Error::NotSierpinskiCarpet("base images overlap".into()));
    }
    let (rx, ry) = (t.magnitude(0, 0), t.magnitude(0, 1));
    let slow = if cmp(&rx, &ry, EQ_TOL) == Ordering::Less { 1 } else { 0 };
    let (r_slow, r_fast) = (t.magnitude_f64(0, slow), t.magnitude_f64(0, 1 - slow));
    let theta = r_slow.ln() / r_fast.ln();
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    for a in t.digits() {
        *rows.entry(a[slow]).or_default() += 1;
    }
    let total: f64 = rows.values().map(|&c| (c as f64).powf(theta)).sum();
    Ok(total.ln() / -r_slow.ln())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynOptions {
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for DynOptions {
    fn default() -> Self {
        DynOptions { restarts: 16, tol: 1e-10, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartRecord {
    pub start: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynamicalDimension {
    pub value: f64,
    pub weights: Vec<f64>,
    pub uniform_value: f64,
    pub restarts: Vec<RestartRecord>,
    pub seed: u64,
    pub pruned: bool,
}

/// Smallest weight kept during the ascent.
const WEIGHT_FLOOR: f64 = 1e-12;
/// Weights below this after the ascent are dropped from the support.
const PRUNE_BELOW: f64 = 1e-7;

fn softmax_on(z: &[f64], support: &[usize], k: usize) -> Vec<f64> {
    let top = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - top).exp()).collect();
    let s: f64 = e.iter().sum();
    let mut p = vec![0.0; k];
    for (&idx, v) in support.iter().zip(&e) {
        p[idx] = (v / s).max(WEIGHT_FLOOR);
    }
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= s);
    p
}

fn ascend(eval: &LyEvaluator, start: &[f64], support: &[usize], tol: f64) -> (Vec<f64>, f64, usize, bool) {
    let k = start.len();
    let objective = |z: &[f64]| eval.value(&softmax_on(z, support, k));
    let z0: Vec<f64> = support.iter().map(|&i| start[i].max(WEIGHT_FLOOR).ln()).collect();
    let quasi = bfgs_maximize(objective, &z0, tol, 500);
    let polish = nelder_mead_maximize(objective, &quasi.x, 0.05, tol * 1e-3, 200 * support.len().max(1));
    let best = if polish.value >= quasi.value { polish.x } else { quasi.x };
    let p = softmax_on(&best, support, k);
    let value = eval.value(&p);
    (p, value, quasi.iterations + polish.iterations, quasi.converged || polish.converged)
}

fn dirichlet_start(k: usize, seed: u64, index: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let draws: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = draws.iter().sum();
    draws.iter().map(|x| x / s).collect()
}

/// Maximizes the Ledrappier–Young dimension over Bernoulli weights.
pub fn dynamical_dimension(t: &SpongeTemplate, opts: &DynOptions) -> DynamicalDimension {
    let k = t.num_digits();
    let eval = LyEvaluator::new(t);
    let uniform = vec![1.0 / k as f64; k];
    let uniform_value = eval.value(&uniform);
    if k == 1 {
        return DynamicalDimension {
            value: uniform_value,
            weights: uniform,
            uniform_value,
            restarts: Vec::new(),
            seed: opts.seed,
            pruned: false,
        };
    }
    let all: Vec<usize> = (0..k).collect();
    let runs: Vec<(RestartRecord, Vec<f64>)> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 { uniform.clone() } else { dirichlet_start(k, opts.seed, r) };
            let (p, value, iterations, converged) = ascend(&eval, &start, &all, opts.tol);
            (RestartRecord { start, value, iterations, converged }, p)
        })
        .collect();
    let mut best_value = uniform_value;
    let mut best = uniform.clone();
    for (rec, p) in &runs {
        if rec.value > best_value {
            best_value = rec.value;
            best = p.clone();
        }
    }
    let support: Vec<usize> = (0..k).filter(|&i| best[i] >= PRUNE_BELOW).collect();
    let mut pruned = false;
    if support.len() < k {
        let (p, _, _, _) = ascend(&eval, &best, &support, opts.tol);
        let mut exact = vec![0.0; k];
        let s: f64 = support.iter().map(|&i| p[i]).sum();
        support.iter().for_each(|&i| exact[i] = p[i] / s);
        let v = eval.value(&exact);
        if v >= best_value - 1e-10 {
            best_value = best_value.max(v);
            best = exact;
            pruned = true;
        }
    }
    DynamicalDimension {
        value: best_value,
        weights: best,
        uniform_value,
        restarts: runs.into_iter().map(|x| x.0).collect(),
        seed: opts.seed,
        pruned,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationConstant {
    /// `None` when there are no pairs of distinct projections.
    pub value: Option<Num>,
    pub warnings: Vec<String>,
}

/// Smallest sup-metric gap between distinct projected cylinder boxes over the
/// nested coordinate sets `σ(I_{≤j})`.
pub fn separation_constant(t: &SpongeTemplate, sigma: &[usize]) -> Result<SeparationConstant> {
    check_permutation(t.dim(), sigma)?;
    let ordered = (0..t.num_digits()).all(|a| {
        sigma.windows(2).all(|w| cmp(&t.magnitude(a, w[0]), &t.magnitude(a, w[1]), EQ_TOL) == Ordering::Greater)
    });
    if !ordered {
        return Err(Error::NotLalleyGatzouras);
    }
    for j in 1..=t.dim() {
        if !is_good(t, &sigma[..j], true) {
            return Ok(SeparationConstant {
                value: Some(Num::zero()),
                warnings: vec![format!("coordinates {:?} are not strongly good", sigma[..j].iter().map(|c| c + 1).collect::<Vec<_>>())],
            });
        }
    }
    let mut best: Option<Num> = None;
    for j in 1..=t.dim() {
        let coords = &sigma[..j];
        let projs = projections(t, coords);
        for x in 0..projs.len() {
            for y in x + 1..projs.len() {
                let dist = coords
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| {
                        let maps = &t.bases()[c].maps;
                        maps[projs[x][k]].image().gap(&maps[projs[y][k]].image())
                    })
                    .reduce(|a, b| Num::max(&a, &b))
                    .unwrap_or_else(Num::zero);
                best = Some(match best {
                    Some(b) if cmp(&b, &dist, 0.0) != Ordering::Greater => b,
                    _ => dist,
                });
            }
        }
    }
    Ok(SeparationConstant { value: best, warnings: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn moran_analytic_cases() {
        assert!((moran_dimension(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(moran_dimension(&[0.3]).unwrap(), 0.0);
        let s = moran_dimension(&[1.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!((s - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert_eq!(moran_dimension(&[]), Err(Error::EmptyList));
        assert!(matches!(moran_dimension(&[0.5, 1.0]), Err(Error::RatioOutOfRange(_))));
    }

    #[test]
    fn fibers_of_example_carpets() {
        let f = fiber_systems(&fixtures::phi1(), &[1, 0]).unwrap();
        assert_eq!(f.levels[0].fibers[0].letters, vec![0, 1]);
        assert_eq!(f.levels[1].fibers[0].prefix, vec![0]);
        assert_eq!(f.levels[1].fibers[0].letters, vec![0, 2]);
        assert_eq!(f.levels[1].fibers[1].letters, vec![1]);
        let f = fiber_systems(&fixtures::phi2(), &[1, 0]).unwrap();
        assert_eq!(f.levels[1].fibers[0].letters, vec![0]);
        assert_eq!(f.levels[1].fibers[1].letters, vec![2]);
        let f = fiber_systems(&fixtures::full_grid(3, 2), &[1, 0]).unwrap();
        assert_eq!(f.min_fiber_size(), 2);
        assert!(f.levels[1].fibers.iter().all(|x| x.letters == vec![0, 1, 2]));
        assert!(matches!(fiber_systems(&fixtures::phi1(), &[0, 0]), Err(Error::InvalidPermutation(_))));
    }

    #[test]
    fn assouad_examples() {
        let a = assouad_formula(&fixtures::phi1()).unwrap();
        assert!((a.lower - 1.0).abs() < 1e-12);
        assert!((a.upper - (1.0 + 2f64.ln() / 3f64.ln())).abs() < 1e-9);
        assert!(!a.warnings.is_empty());
        let a = assouad_formula(&fixtures::slg9()).unwrap();
        let want = 3f64.ln() / 4f64.ln() + 3f64.ln() / 5f64.ln();
        assert!((a.lower - want).abs() < 1e-9 && (a.upper - want).abs() < 1e-9);
        assert!(a.warnings.is_empty());
        assert_eq!(assouad_formula(&fixtures::full_grid(2, 2)), Err(Error::NotLalleyGatzouras));
        let a = assouad_formula(&fixtures::full_grid(3, 2)).unwrap();
        assert!((a.lower - 2.0).abs() < 1e-12 && (a.upper - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ly_examples() {
        let t = fixtures::phi1();
        let v = ly_dimension(&t, &BernoulliWeights::uniform(3)).unwrap().value;
        let want = (3f64.ln() - 2.0 / 3.0 * 2f64.ln()) / 2f64.ln() + (2.0 / 3.0 * 2f64.ln()) / 3f64.ln();
        assert!((v - want).abs() < 1e-12 && (v - 1.33890).abs() < 1e-4);
        let g = fixtures::full_grid(3, 2);
        assert!((ly_dimension(&g, &BernoulliWeights::uniform(6)).unwrap().value - 2.0).abs() < 1e-12);
        let point = BernoulliWeights::from_f64(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(ly_dimension(&t, &point).unwrap().value, 0.0);
        let sq = fixtures::full_grid(2, 2);
        let r = ly_dimension(&sq, &BernoulliWeights::uniform(4)).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert!(!r.warnings.is_empty());
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mcmullen_examples() {
        let v = mcmullen_dimension(&fixtures::phi1()).unwrap();
        let theta = 2f64.ln() / 3f64.ln();
        assert!((v - (2f64.powf(theta) + 1.0).log2()).abs() < 1e-12);
        assert!((mcmullen_dimension(&fixtures::full_grid(4, 3)).unwrap() - 2.0).abs() < 1e-12);
        let row = SpongeTemplate::from_grid(&[4, 3], (0..4).map(|a| vec![a, 0]).collect()).unwrap();
        assert!((mcmullen_dimension(&row).unwrap() - 1.0).abs() < 1e-12);
        assert!(mcmullen_dimension(&fixtures::slg9()).is_ok());
        assert!(matches!(mcmullen_dimension(&fixtures::separated_cube()), Err(Error::NotSierpinskiCarpet(_))));
    }

    #[test]
    fn dynamical_examples() {
        let opts = DynOptions::default();
        let r = dynamical_dimension(&fixtures::phi1(), &opts);
        assert!((r.value - mcmullen_dimension(&fixtures::phi1()).unwrap()).abs() < 1e-6, "{}", r.value);
        let r = dynamical_dimension(&fixtures::full_grid(3, 2), &opts);
        assert!((r.value - 2.0).abs() < 1e-9);
        assert!(r.weights.iter().all(|w| (w - 1.0 / 6.0).abs() < 1e-9));
        let single = SpongeTemplate::from_grid(&[3, 2], vec![vec![1, 1]]).unwrap();
        assert_eq!(dynamical_dimension(&single, &opts).value, 0.0);
        let again = dynamical_dimension(&fixtures::phi1(), &opts);
        assert_eq!(again, dynamical_dimension(&fixtures::phi1(), &opts));
    }

    #[test]
    fn separation_examples() {
        let s = separation_constant(&fixtures::slg9(), &[0, 1]).unwrap();
        assert_eq!(s.value, Some(Num::ratio(1, 8)));
        let s = separation_constant(&fixtures::phi1(), &[1, 0]).unwrap();
        assert_eq!(s.value, Some(Num::zero()));
        assert_eq!(s.warnings.len(), 1);
        let single = SpongeTemplate::from_grid(&[3, 2], vec![vec![1, 1]]).unwrap();
        assert_eq!(separation_constant(&single, &[1, 0]).unwrap().value, None);
        assert_eq!(separation_constant(&fixtures::slg9(), &[1, 0]), Err(Error::NotLalleyGatzouras));
    }
}
