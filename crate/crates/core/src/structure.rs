//! Combinatorial predicates on diagonal IFSes: coordinate orders, goodness,
//! Barański/Lalley–Gatzouras classification, irreducibility and measure profiles.
//!
//! Coordinates and digits are 0-based indices throughout.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::Result;
use crate::model::{BernoulliWeights, SpongeTemplate};
use crate::numeric::{cmp, Interval, Num, EQ_TOL};

/// Lyapunov exponents closer than this compare equal when no exact comparison is available.
pub const LYAPUNOV_TOL: f64 = 1e-9;

/// Largest common weight denominator for which Lyapunov exponents are compared exactly.
const EXACT_LYAPUNOV_MAX_DENOM: u64 = 4096;

/// Reflexive relation on coordinates; `rel[i][j]` means `i ≺ j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialOrder {
    rel: Vec<Vec<bool>>,
}

impl PartialOrder {
    pub fn from_matrix(rel: Vec<Vec<bool>>) -> Self {
        PartialOrder { rel }
    }

    pub fn dim(&self) -> usize {
        self.rel.len()
    }

    /// `i ≺ j`.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.rel[i][j]
    }

    /// `j ≻ i`, i.e. `i ≺ j`.
    pub fn succeeds(&self, j: usize, i: usize) -> bool {
        self.rel[i][j]
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.rel
    }

    pub fn is_transitive(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            (0..d).all(|j| !self.rel[i][j] || (0..d).all(|k| !self.rel[j][k] || self.rel[i][k]))
        })
    }

    /// Every pair of coordinates is comparable.
    pub fn is_total(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.rel[i][j] || self.rel[j][i]))
    }
}

/// `i ≺ j` iff `|φ'_{a,i}| ≥ |φ'_{a,j}|` for every `a ∈ E`.
pub fn partial_order(t: &SpongeTemplate) -> PartialOrder {
    let d = t.dim();
    let mags: Vec<Vec<Num>> = (0..t.num_digits())
        .map(|a| (0..d).map(|i| t.magnitude(a, i)).collect())
        .collect();
    let rel = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| i == j || mags.iter().all(|m| cmp(&m[i], &m[j], EQ_TOL) != Ordering::Less))
                .collect()
        })
        .collect();
    PartialOrder { rel }
}

/// Distinct projections `π_I(E)` in first-appearance order.
pub fn projections(t: &SpongeTemplate, coords: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for a in t.digits() {
        let key: Vec<usize> = coords.iter().map(|&c| a[c]).collect();
        if seen.insert(key.clone(), ()).is_none() {
            out.push(key);
        }
    }
    out
}

fn base_interval(t: &SpongeTemplate, coord: usize, letter: usize) -> Interval {
    t.bases()[coord].maps[letter].image()
}

fn intervals_disjoint(a: &Interval, b: &Interval, strong: bool) -> bool {
    if strong {
        a.disjoint_closed(b)
    } else {
        a.disjoint_open(b)
    }
}

/// The given letters' images in one base IFS are pairwise disjoint.
fn letters_separated(t: &SpongeTemplate, coord: usize, letters: &[usize], strong: bool) -> bool {
    let mut ivs: Vec<Interval> = letters.iter().map(|&l| base_interval(t, coord, l)).collect();
    ivs.sort_by(|a, b| cmp(&a.lo, &b.lo, 0.0));
    ivs.windows(2).all(|w| intervals_disjoint(&w[0], &w[1], strong))
}

/// `I` is good (open interiors) or strongly good (closed boxes): the boxes
/// `φ_{I,a}(𝕀^I)`, `a ∈ π_I(E)`, are pairwise disjoint.
pub fn is_good(t: &SpongeTemplate, coords: &[usize], strong: bool) -> bool {
    if coords.is_empty() {
        return true;
    }
    let projs = projections(t, coords);
    if projs.len() < 2 {
        return true;
    }
    // Coordinates whose used letters are pairwise disjoint separate any two
    // projections that differ there; only projections agreeing on all of them
    // need a pairwise check.
    let separating: Vec<bool> = coords
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let mut letters: Vec<usize> = projs.iter().map(|p| p[k]).collect();
            letters.sort_unstable();
            letters.dedup();
            letters_separated(t, c, &letters, strong)
        })
        .collect();
    let mut groups: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (idx, p) in projs.iter().enumerate() {
        let key: Vec<usize> = p
            .iter()
            .zip(&separating)
            .filter(|(_, &s)| s)
            .map(|(&l, _)| l)
            .collect();
        groups.entry(key).or_default().push(idx);
    }
    let mut cache: HashMap<(usize, usize, usize), bool> = HashMap::new();
    for members in groups.values() {
        for (x, &p) in members.iter().enumerate() {
            for &q in &members[x + 1..] {
                let disjoint = coords.iter().enumerate().any(|(k, &c)| {
                    let (lp, lq) = (projs[p][k], projs[q][k]);
                    lp != lq
                        && *cache.entry((c, lp.min(lq), lp.max(lq))).or_insert_with(|| {
                            intervals_disjoint(&base_interval(t, c, lp), &base_interval(t, c, lq), strong)
                        })
                });
                if !disjoint {
                    return false;
                }
            }
        }
    }
    true
}

/// Structural flags of a template. `lg_sigma` lists coordinates from slowest to fastest contraction.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub baranski: bool,
    pub strongly_baranski: bool,
    pub sierpinski: bool,
    pub distinguishable: bool,
    pub lg_sigma: Option<Vec<usize>>,
    /// `lg_sigma` exists and every `σ(I_{≤i})` is good.
    pub lalley_gatzouras: bool,
    pub strongly_lg: bool,
}

/// The permutation with `|φ'_{a,σ(1)}| > ⋯ > |φ'_{a,σ(d)}|` for every `a`, if any.
pub fn ordering_permutation(t: &SpongeTemplate) -> Option<Vec<usize>> {
    let d = t.dim();
    let mut sigma: Vec<usize> = (0..d).collect();
    sigma.sort_by(|&i, &j| cmp(&t.magnitude(0, j), &t.magnitude(0, i), EQ_TOL).then(i.cmp(&j)));
    let strict = (0..t.num_digits()).all(|a| {
        sigma
            .windows(2)
            .all(|w| cmp(&t.magnitude(a, w[0]), &t.magnitude(a, w[1]), EQ_TOL) == Ordering::Greater)
    });
    strict.then_some(sigma)
}

pub fn classify(t: &SpongeTemplate) -> Classification {
    let d = t.dim();
    let all_letters = |c: usize| (0..t.bases()[c].len()).collect::<Vec<_>>();
    let baranski = (0..d).all(|c| letters_separated(t, c, &all_letters(c), false));
    let strongly_baranski = (0..d).all(|c| letters_separated(t, c, &all_letters(c), true));
    let sierpinski = (0..d).all(|c| {
        let first = t.magnitude(0, c);
        (1..t.num_digits()).all(|a| cmp(&t.magnitude(a, c), &first, EQ_TOL) == Ordering::Equal)
    });
    let distinguishable = (0..d).all(|i| {
        (0..d).all(|j| {
            i == j
                || (0..t.num_digits())
                    .any(|a| cmp(&t.magnitude(a, i), &t.magnitude(a, j), EQ_TOL) != Ordering::Equal)
        })
    });
    let lg_sigma = ordering_permutation(t);
    let (lalley_gatzouras, strongly_lg) = match &lg_sigma {
        Some(sigma) => {
            let nested = |strong: bool| (1..=d).all(|k| is_good(t, &sigma[..k], strong));
            (nested(false), nested(true))
        }
        None => (false, false),
    };
    Classification {
        baranski,
        strongly_baranski,
        sierpinski,
        distinguishable,
        lg_sigma,
        lalley_gatzouras,
        strongly_lg,
    }
}

/// Irreducibility verdicts with audit data.
#[derive(Clone, Debug, PartialEq)]
pub struct Irreducibility {
    pub irreducible: bool,
    /// Per coordinate, the first pair `(a, b)` of digit indices witnessing irreducibility.
    pub witnesses: Vec<Option<(usize, usize)>>,
    pub uniformly_irreducible: bool,
    /// First `(coordinate, digit index)` with no admissible partner.
    pub counterexample: Option<(usize, usize)>,
}

/// Digits are grouped by their letters on the coordinates where a partner may
/// not differ from them; a partner of `a` for coordinate `i` is a member of
/// `a`'s group with a different `i`-letter.
struct PartnerIndex {
    group_of: Vec<usize>,
    groups: Vec<Vec<usize>>,
}

impl PartnerIndex {
    fn new(t: &SpongeTemplate, order: &PartialOrder, i: usize) -> Self {
        let frozen: Vec<usize> = (0..t.dim()).filter(|&j| !order.succeeds(j, i)).collect();
        let mut keys: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_of = Vec::with_capacity(t.num_digits());
        for a in t.digits() {
            let key: Vec<usize> = frozen.iter().map(|&j| a[j]).collect();
            let g = *keys.entry(key).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(group_of.len());
            group_of.push(g);
        }
        PartnerIndex { group_of, groups }
    }

    fn partner(&self, t: &SpongeTemplate, i: usize, a: usize) -> Option<usize> {
        let letter = t.digits()[a][i];
        self.groups[self.group_of[a]].iter().copied().find(|&b| t.digits()[b][i] != letter)
    }
}

/// Irreducibility of `t` with respect to an arbitrary order (`≺` or `≺_p`).
pub fn irreducibility_under(t: &SpongeTemplate, order: &PartialOrder) -> Irreducibility {
    let mut witnesses = Vec::with_capacity(t.dim());
    let mut counterexample = None;
    for i in 0..t.dim() {
        let index = PartnerIndex::new(t, order, i);
        let mut witness = None;
        for a in 0..t.num_digits() {
            match index.partner(t, i, a) {
                Some(b) => {
                    if witness.is_none() {
                        witness = Some((a, b));
                    }
                }
                None => {
                    if counterexample.is_none() {
                        counterexample = Some((i, a));
                    }
                }
            }
            if witness.is_some() && counterexample.is_some() {
                break;
            }
        }
        witnesses.push(witness);
    }
    Irreducibility {
        irreducible: witnesses.iter().all(Option::is_some),
        witnesses,
        uniformly_irreducible: counterexample.is_none(),
        counterexample,
    }
}

pub fn irreducibility(t: &SpongeTemplate) -> Irreducibility {
    irreducibility_under(t, &partial_order(t))
}

/// A digit `b` with `b_i ≠ a_i` differing from `a` only in coordinates `j ≻ i`.
pub fn swap_partner(t: &SpongeTemplate, order: &PartialOrder, i: usize, a: usize) -> Option<usize> {
    PartnerIndex::new(t, order, i).partner(t, i, a)
}

/// Lyapunov data and goodness of a Bernoulli measure.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureProfile {
    /// `χ_i(p)` in nats.
    pub chi: Vec<f64>,
    /// `i ≺_p j` iff `χ_i ≤ χ_j`.
    pub order_p: PartialOrder,
    pub irreducible_wrt: Irreducibility,
    pub distinct_lyapunov: bool,
    pub good: bool,
    pub strongly_good: bool,
    /// `I(p,x)` at each threshold `x ∈ {χ_i}`, nested and increasing.
    pub level_sets: Vec<Vec<usize>>,
    /// Coordinates sorted by ascending `χ`, ties broken by index.
    pub ascending: Vec<usize>,
    pub warnings: Vec<String>,
}

/// `χ_i(p) = -Σ_a p(a) log|φ'_{a,i}|`.
pub fn lyapunov_exponents(t: &SpongeTemplate, probs: &[f64]) -> Vec<f64> {
    (0..t.dim())
        .map(|i| probs.iter().enumerate().map(|(a, p)| p * t.log_contraction(a, i)).sum())
        .collect()
}

/// For rational weights `n_a/L` and ratios, `χ_i ≤ χ_j` iff `∏ r_{a,i}^{n_a} ≥ ∏ r_{a,j}^{n_a}`.
fn exact_lyapunov_keys(t: &SpongeTemplate, w: &BernoulliWeights) -> Option<Vec<BigRational>> {
    if !t.is_exact() || !w.is_exact() {
        return None;
    }
    let qs: Vec<&BigRational> = w.values().iter().map(|v| v.as_exact()).collect::<Option<_>>()?;
    let l = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    if l > BigInt::from(EXACT_LYAPUNOV_MAX_DENOM) {
        return None;
    }
    let exps: Vec<u32> = qs
        .iter()
        .map(|q| (q.numer() * (&l / q.denom())).to_u32())
        .collect::<Option<_>>()?;
    Some(
        (0..t.dim())
            .map(|i| {
                exps.iter().enumerate().fold(BigRational::one(), |acc, (a, &n)| {
                    if n == 0 {
                        acc
                    } else {
                        let r = t.magnitude(a, i).as_exact().cloned().unwrap_or_else(BigRational::zero);
                        acc * Pow::pow(r, n)
                    }
                })
            })
            .collect(),
    )
}

/// Orders `χ_i` against `χ_j`, exactly when possible.
fn lyapunov_comparator(t: &SpongeTemplate, w: &BernoulliWeights, chi: &[f64]) -> impl Fn(usize, usize) -> Ordering {
    let keys = exact_lyapunov_keys(t, w);
    let chi = chi.to_vec();
    move |i, j| match &keys {
        // Larger product of ratios means smaller exponent.
        Some(k) => k[j].cmp(&k[i]),
        None => {
            if (chi[i] - chi[j]).abs() <= LYAPUNOV_TOL {
                Ordering::Equal
            } else {
                chi[i].partial_cmp(&chi[j]).unwrap_or(Ordering::Equal)
            }
        }
    }
}

/// Coordinates sorted by ascending `χ` (stable) and grouped into ties.
pub fn lyapunov_groups(t: &SpongeTemplate, w: &BernoulliWeights) -> (Vec<f64>, Vec<Vec<usize>>) {
    let chi = lyapunov_exponents(t, w.probs());
    let cmp_chi = lyapunov_comparator(t, w, &chi);
    let mut order: Vec<usize> = (0..t.dim()).collect();
    order.sort_by(|&i, &j| cmp_chi(i, j).then(i.cmp(&j)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if cmp_chi(g[0], i) == Ordering::Equal => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    (chi, groups)
}

pub fn measure_profile(t: &SpongeTemplate, w: &BernoulliWeights) -> Result<MeasureProfile> {
    if w.len() != t.num_digits() {
        return Err(crate::error::Error::InvalidWeights(format!(
            "{} weights for {} digits",
            w.len(),
            t.num_digits()
        )));
    }
    let mut warnings = Vec::new();
    if !w.is_strictly_positive() {
        warnings.push("some digits carry zero weight".to_string());
    }
    let (chi, groups) = lyapunov_groups(t, w);
    let cmp_chi = lyapunov_comparator(t, w, &chi);
    let d = t.dim();
    let rel = (0..d)
        .map(|i| (0..d).map(|j| cmp_chi(i, j) != Ordering::Greater).collect())
        .collect();
    let order_p = PartialOrder { rel };
    let ascending: Vec<usize> = groups.iter().flatten().copied().collect();
    let mut level_sets = Vec::with_capacity(groups.len());
    let mut acc = Vec::new();
    for g in &groups {
        acc.extend_from_slice(g);
        let mut set = acc.clone();
        set.sort_unstable();
        level_sets.push(set);
    }
    let good = level_sets.iter().all(|s| is_good(t, s, false));
    let strongly_good = level_sets.iter().all(|s| is_good(t, s, true));
    Ok(MeasureProfile {
        irreducible_wrt: irreducibility_under(t, &order_p),
        order_p,
        distinct_lyapunov: groups.len() == d,
        good,
        strongly_good,
        level_sets,
        ascending,
        chi,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diffuseness {
    /// Hyperplane diffuse.
    Diffuse,
    /// Not hyperplane diffuse, though it may contain diffuse subsponges.
    NotDiffuse,
    /// Reducible: no subset is hyperplane diffuse.
    NotDiffuseNoSubsets,
    /// Not strongly Lalley–Gatzouras; no decision rule applies.
    Undecided,
}

impl Diffuseness {
    pub fn as_str(self) -> &'static str {
        match self {
            Diffuseness::Diffuse => "diffuse",
            Diffuseness::NotDiffuse => "not_diffuse",
            Diffuseness::NotDiffuseNoSubsets => "not_diffuse_no_subsets",
            Diffuseness::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffusenessDecision {
    pub verdict: Diffuseness,
    pub reason: String,
}

pub fn decide_diffuseness(t: &SpongeTemplate) -> DiffusenessDecision {
    let class = classify(t);
    if !class.strongly_lg {
        return DiffusenessDecision {
            verdict: Diffuseness::Undecided,
            reason: "not strongly Lalley-Gatzouras; run the empirical diffuseness witness instead".into(),
        };
    }
    let irr = irreducibility(t);
    let (verdict, reason) = if irr.uniformly_irreducible {
        (Diffuseness::Diffuse, "strongly Lalley-Gatzouras and uniformly irreducible".to_string())
    } else if !irr.irreducible {
        let i = irr.witnesses.iter().position(Option::is_none).unwrap_or(0);
        (
            Diffuseness::NotDiffuseNoSubsets,
            format!("reducible at coordinate {}", i + 1),
        )
    } else {
        let (i, a) = irr.counterexample.unwrap_or((0, 0));
        (
            Diffuseness::NotDiffuse,
            format!(
                "irreducible but not uniformly: digit {:?} has no partner at coordinate {}",
                t.digits()[a],
                i + 1
            ),
        )
    };
    DiffusenessDecision { verdict, reason }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn partial_order_examples() {
        let po = partial_order(&fixtures::phi1());
        assert!(po.precedes(1, 0));
        assert!(!po.precedes(0, 1));
        let sq = fixtures::full_grid(2, 2);
        let po = partial_order(&sq);
        assert!(po.precedes(0, 1) && po.precedes(1, 0));
        let chain = SpongeTemplate::from_grid(&[2, 3, 5], vec![vec![0, 0, 0], vec![1, 2, 4]]).unwrap();
        let po = partial_order(&chain);
        assert!(po.precedes(0, 1) && po.precedes(1, 2) && po.precedes(0, 2));
        assert!(!po.precedes(1, 0) && !po.precedes(2, 1));
        assert!(po.is_total() && po.is_transitive());
    }

    #[test]
    fn goodness_examples() {
        let t = fixtures::phi1();
        assert!(is_good(&t, &[1], false));
        assert!(!is_good(&t, &[1], true));
        assert!(is_good(&t, &[0, 1], false));
        assert!(is_good(&t, &[], true));
    }

    #[test]
    fn classify_phi1() {
        let c = classify(&fixtures::phi1());
        assert!(c.baranski);
        assert!(!c.strongly_baranski);
        assert!(c.distinguishable);
        assert!(c.sierpinski);
        assert_eq!(c.lg_sigma, Some(vec![1, 0]));
        assert!(c.lalley_gatzouras);
        assert!(!c.strongly_lg);
    }

    #[test]
    fn classify_slg9() {
        let c = classify(&fixtures::slg9());
        assert!(c.strongly_lg);
        assert!(c.strongly_baranski);
        assert_eq!(c.lg_sigma, Some(vec![0, 1]));
    }

    #[test]
    fn classify_square_has_no_sigma() {
        let c = classify(&fixtures::full_grid(3, 3));
        assert_eq!(c.lg_sigma, None);
        assert!(!c.strongly_lg);
        assert!(!c.distinguishable);
    }

    #[test]
    fn irreducibility_examples() {
        let t = fixtures::phi1();
        let irr = irreducibility(&t);
        assert!(irr.irreducible);
        let (a, b) = irr.witnesses[0].unwrap();
        assert_eq!((t.digits()[a].clone(), t.digits()[b].clone()), (vec![0, 0], vec![2, 0]));
        let (a, b) = irr.witnesses[1].unwrap();
        assert_eq!((t.digits()[a].clone(), t.digits()[b].clone()), (vec![0, 0], vec![1, 1]));
        assert!(!irr.uniformly_irreducible);
        let (i, a) = irr.counterexample.unwrap();
        assert_eq!((i, t.digits()[a].clone()), (0, vec![1, 1]));

        let irr2 = irreducibility(&fixtures::phi2());
        assert!(!irr2.irreducible);
        assert!(irr2.witnesses[0].is_none());

        let irr3 = irreducibility(&fixtures::phi3());
        assert!(irr3.irreducible && irr3.uniformly_irreducible);
    }

    #[test]
    fn measure_profile_uniform_phi1() {
        let t = fixtures::phi1();
        let p = measure_profile(&t, &BernoulliWeights::uniform(3)).unwrap();
        assert!((p.chi[0] - 3f64.ln()).abs() < 1e-14);
        assert!((p.chi[1] - 2f64.ln()).abs() < 1e-14);
        assert!(p.order_p.precedes(1, 0) && !p.order_p.precedes(0, 1));
        assert!(p.distinct_lyapunov);
        assert!(p.good);
        assert_eq!(p.level_sets, vec![vec![1], vec![0, 1]]);
        assert!(p.irreducible_wrt.irreducible);
    }

    #[test]
    fn measure_profile_ties() {
        let t = fixtures::full_grid(2, 2);
        let p = measure_profile(&t, &BernoulliWeights::uniform(4)).unwrap();
        assert!(!p.distinct_lyapunov);
        assert_eq!(p.level_sets, vec![vec![0, 1]]);
    }

    #[test]
    fn exact_tie_detected_for_rational_weights() {
        // χ_1 = χ_2 exactly although the per-digit ratios differ.
        let doc = r#"{"dimension": 2,
            "bases": [{"maps": [{"ratio": "1/2", "offset": "0"}, {"ratio": "1/4", "offset": "3/4"}]},
                      {"maps": [{"ratio": "1/4", "offset": "0"}, {"ratio": "1/2", "offset": "1/2"}]}],
            "digits": [[0,0],[1,1]]}"#;
        let t = crate::model::parse_template(doc).unwrap();
        let p = measure_profile(&t, &BernoulliWeights::uniform(2)).unwrap();
        assert!(!p.distinct_lyapunov);
    }

    #[test]
    fn zero_weight_warns() {
        let t = fixtures::phi1();
        let w = BernoulliWeights::new(vec![Num::ratio(1, 2), Num::ratio(1, 2), Num::zero()]).unwrap();
        let p = measure_profile(&t, &w).unwrap();
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn baranski_measures_are_good() {
        let t = fixtures::phi3();
        for w in [vec![0.1, 0.2, 0.3, 0.4], vec![0.7, 0.1, 0.1, 0.1], vec![0.25; 4]] {
            let p = measure_profile(&t, &BernoulliWeights::from_f64(w).unwrap()).unwrap();
            assert!(p.good);
        }
    }

    #[test]
    fn diffuseness_examples() {
        assert_eq!(decide_diffuseness(&fixtures::slg9()).verdict, Diffuseness::Diffuse);
        assert_eq!(
            decide_diffuseness(&fixtures::separated_reducible()).verdict,
            Diffuseness::NotDiffuseNoSubsets
        );
        assert_eq!(decide_diffuseness(&fixtures::phi1()).verdict, Diffuseness::Undecided);
    }
}
