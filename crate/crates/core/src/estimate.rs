//! Empirical checks on attractors: point sampling, separated-set counts,
//! Assouad dimension estimates, diffuseness witnesses and flatness certificates.
//!
//! Distances use the sup metric.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::dimension::separation_constant;
use crate::error::{Error, Result};
use crate::model::{SpongeTemplate, Word};
use crate::structure::{classify, irreducibility, partial_order};

pub const DEFAULT_POINTS: usize = 100_000;
pub const DEFAULT_CENTERS: usize = 64;
/// Fewest cloud points accepted in a ball when counting on a cloud.
pub const MIN_BALL_POINTS: usize = 10;
const CHUNK: usize = 4096;

pub fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
    pub depth: usize,
    pub seed: u64,
}

/// Smallest depth at which every cylinder has diameter at most `1e-4`.
pub fn default_depth(t: &SpongeTemplate) -> usize {
    ((1e-4f64).ln() / t.max_magnitude().ln()).ceil().max(1.0) as usize
}

/// Depth at which every cylinder is a thousand times smaller than `scale`.
pub fn depth_below(t: &SpongeTemplate, scale: f64) -> usize {
    ((1e-3 * scale).ln() / t.max_magnitude().ln()).ceil().max(1.0) as usize
}

/// Points `π(ω a^∞)` for i.i.d. uniform words `ω` of length `depth` ending in `a`.
pub fn sample_points(t: &SpongeTemplate, count: usize, depth: usize, seed: u64) -> PointCloud {
    let depth = depth.max(1);
    let k = t.num_digits();
    let chunks = count.div_ceil(CHUNK);
    let points = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let n = CHUNK.min(count - c * CHUNK);
            let mut word = vec![0usize; depth];
            (0..n)
                .map(|_| {
                    word.iter_mut().for_each(|l| *l = rng.gen_range(0..k));
                    t.attractor_point(&word)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    PointCloud { points, depth, seed }
}

/// Hash of a grid cell; collisions only merge lists, never change counts.
fn cell_key(cell: impl Iterator<Item = i64>) -> u64 {
    cell.fold(0xcbf2_9ce4_8422_2325u64, |h, c| (h ^ c as u64).wrapping_mul(0x0100_0000_01b3).rotate_left(17))
}

const NONE: u32 = u32::MAX;

/// Heads of per-cell lists of accepted points, dense when the ball's grid is small.
enum Cells {
    Dense(Vec<u32>),
    Sparse(FxHashMap<u64, u32>),
}

impl Cells {
    fn head(&self, key: u64) -> u32 {
        match self {
            Cells::Dense(v) => v[key as usize],
            Cells::Sparse(m) => m.get(&key).copied().unwrap_or(NONE),
        }
    }

    fn set_head(&mut self, key: u64, k: u32) {
        match self {
            Cells::Dense(v) => v[key as usize] = k,
            Cells::Sparse(m) => {
                m.insert(key, k);
            }
        }
    }
}

/// Greedy separated count over `n` points given by `point(k)`, taken in order
/// of distance from `center`. Accepted points are filed in cells of side `delta`.
fn greedy_count<'a>(n: usize, point: impl Fn(usize) -> &'a [f64], center: &[f64], rho: f64, delta: f64) -> usize {
    if !(rho > 0.0 && delta > 0.0) {
        return 0;
    }
    let d = center.len();
    // Distances are non-negative, so their bit patterns sort like the values.
    let mut inside: Vec<(u64, u32)> = (0..n)
        .filter_map(|k| {
            let r = sup_dist(point(k), center);
            (r <= rho).then_some((r.to_bits(), k as u32))
        })
        .collect();
    inside.sort_unstable();
    let side = (2.0 * rho / delta).floor().min(1e15) as u64 + 1;
    let exact = (0..d).try_fold(1u64, |acc, _| acc.checked_mul(side));
    let mut cells = match exact {
        Some(total) if total <= (64 * inside.len() as u64).max(1 << 16) => Cells::Dense(vec![NONE; total as usize]),
        _ => Cells::Sparse(FxHashMap::default()),
    };
    let key_of = |idx: &[i64]| match exact {
        Some(_) => idx.iter().rev().fold(0u64, |acc, &i| acc * side + i as u64),
        None => cell_key(idx.iter().copied()),
    };
    let mut next: Vec<u32> = vec![NONE; n];
    let mut idx = vec![0i64; d];
    let mut near = vec![0i64; d];
    let mut count = 0;
    'points: for &(_, k) in &inside {
        let p = point(k as usize);
        for c in 0..d {
            idx[c] = (((p[c] - center[c] + rho) / delta).floor() as i64).clamp(0, side as i64 - 1);
        }
        'cells: for code in 0..3usize.pow(d as u32) {
            let mut rest = code;
            for c in 0..d {
                near[c] = idx[c] + (rest % 3) as i64 - 1;
                rest /= 3;
                if near[c] < 0 || near[c] >= side as i64 {
                    continue 'cells;
                }
            }
            let mut q = cells.head(key_of(&near));
            while q != NONE {
                if sup_dist(point(q as usize), p) < delta {
                    continue 'points;
                }
                q = next[q as usize];
            }
        }
        let key = key_of(&idx);
        next[k as usize] = cells.head(key);
        cells.set_head(key, k);
        count += 1;
    }
    count
}

/// Size of a maximal `delta`-separated subset of `points ∩ B(center, rho)`, built
/// greedily in order of distance from `center`. Returns 0 for non-positive radii.
pub fn count_separated(points: &[Vec<f64>], center: &[f64], rho: f64, delta: f64) -> usize {
    greedy_count(points.len(), |k| &points[k], center, rho, delta)
}

/// Farthest-point traversal variant: the count is non-increasing in `delta`
/// exactly, at quadratic cost.
pub fn count_separated_farthest(points: &[Vec<f64>], center: &[f64], rho: f64, delta: f64) -> usize {
    if !(rho > 0.0 && delta > 0.0) {
        return 0;
    }
    let inside: Vec<&Vec<f64>> = points.iter().filter(|p| sup_dist(p, center) <= rho).collect();
    let Some(first) = (0..inside.len()).min_by(|&a, &b| sup_dist(inside[a], center).total_cmp(&sup_dist(inside[b], center)))
    else {
        return 0;
    };
    let mut gap: Vec<f64> = inside.iter().map(|p| sup_dist(p, inside[first])).collect();
    let mut count = 1;
    loop {
        let (next, &far) = match gap.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0))) {
            Some(x) => x,
            None => break,
        };
        if far < delta {
            break;
        }
        count += 1;
        let chosen = inside[next];
        gap.iter_mut().zip(&inside).for_each(|(g, p)| *g = g.min(sup_dist(p, chosen)));
    }
    count
}

/// Ball-local net of approximate cubes: a cylinder is refined only in the
/// coordinates still wider than the target side, merging digits that agree there.
struct CylinderNet {
    dim: usize,
    ratio: Vec<Vec<f64>>,
    offset: Vec<Vec<f64>>,
    /// Per active-coordinate mask, one digit for each distinct projection.
    reps: Vec<Vec<Vec<usize>>>,
}

impl CylinderNet {
    fn new(t: &SpongeTemplate) -> Self {
        let d = t.dim();
        let ratio = (0..d).map(|c| t.bases()[c].maps.iter().map(|m| m.ratio().to_f64()).collect()).collect();
        let offset = (0..d).map(|c| t.bases()[c].maps.iter().map(|m| m.offset().to_f64()).collect()).collect();
        let reps = (0..1usize << d)
            .map(|mask| {
                let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
                t.digits()
                    .iter()
                    .filter(|a| {
                        let key: Vec<usize> = (0..d).filter(|c| mask >> c & 1 == 1).map(|c| a[c]).collect();
                        seen.insert(key, ()).is_none()
                    })
                    .cloned()
                    .collect()
            })
            .collect();
        CylinderNet { dim: d, ratio, offset, reps }
    }

    /// Midpoints of net cells of side at most `side` that meet `B(center, rho)`,
    /// flattened with stride `dim`.
    fn points(&self, center: &[f64], rho: f64, side: f64) -> Vec<f64> {
        let d = self.dim;
        let mut out = Vec::new();
        // Each coordinate of a node is the affine map x ↦ scale·x + shift.
        let mut stack: Vec<f64> = [1.0, 0.0].repeat(d);
        let mut node = vec![0.0; 2 * d];
        while stack.len() >= 2 * d {
            node.copy_from_slice(&stack[stack.len() - 2 * d..]);
            stack.truncate(stack.len() - 2 * d);
            let mut mask = 0usize;
            let mut meets = true;
            for c in 0..d {
                let (s, t) = (node[2 * c], node[2 * c + 1]);
                let (lo, hi) = if s >= 0.0 { (t, t + s) } else { (t + s, t) };
                meets &= hi >= center[c] - rho && lo <= center[c] + rho;
                if hi - lo > side {
                    mask |= 1 << c;
                }
            }
            if !meets {
                continue;
            }
            if mask == 0 {
                let start = out.len();
                out.extend((0..d).map(|c| node[2 * c + 1] + 0.5 * node[2 * c]));
                if sup_dist(&out[start..], center) > rho {
                    out.truncate(start);
                }
                continue;
            }
            for digit in &self.reps[mask] {
                for c in 0..d {
                    let (s, t) = (node[2 * c], node[2 * c + 1]);
                    if mask >> c & 1 == 1 {
                        let l = digit[c];
                        stack.extend([s * self.ratio[c][l], s * self.offset[c][l] + t]);
                    } else {
                        stack.extend([s, t]);
                    }
                }
            }
        }
        out
    }
}

pub enum EstimateSource<'a> {
    /// Counts on cylinder nets of the template; centers come from a sampled cloud.
    Template(&'a SpongeTemplate),
    /// Counts directly on the points of a cloud.
    Cloud(&'a PointCloud),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateOptions {
    pub betas: Vec<f64>,
    pub rhos: Vec<f64>,
    pub centers: usize,
    pub points: usize,
    pub depth: Option<usize>,
    pub seed: u64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            betas: geometric_grid(2, 7),
            rhos: geometric_grid(1, 9),
            centers: DEFAULT_CENTERS,
            points: DEFAULT_POINTS,
            depth: None,
            seed: 1,
        }
    }
}

/// `{2^-from, …, 2^-to}`.
pub fn geometric_grid(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 2f64.powi(-k)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountRow {
    pub center: usize,
    pub rho: f64,
    pub beta: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    /// Extremal count per `β`, aligned with the `β` grid.
    pub counts: Vec<usize>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssouadFit {
    /// Extremum over every `ρ` in the grid.
    pub delta1: SlopeFit,
    /// Extremum over the smallest half of the `ρ` grid.
    pub delta2: SlopeFit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssouadEstimate {
    pub lower: AssouadFit,
    pub upper: AssouadFit,
    pub betas: Vec<f64>,
    pub rhos: Vec<f64>,
    pub centers: Vec<Vec<f64>>,
    pub table: Vec<CountRow>,
    pub seed: u64,
}

/// Least-squares line through `(x, y)`.
pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let r2 = if sxx > 0.0 && syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, my - slope * mx, r2)
}

fn fit(betas: &[f64], counts: Vec<usize>) -> SlopeFit {
    let x: Vec<f64> = betas.iter().map(|b| -b.ln()).collect();
    let y: Vec<f64> = counts.iter().map(|&c| (c.max(1) as f64).ln()).collect();
    let (slope, intercept, r_squared) = least_squares(&x, &y);
    SlopeFit { counts, slope, intercept, r_squared }
}

fn pick_centers(cloud: &PointCloud, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    (0..count.min(cloud.points.len()))
        .map(|_| cloud.points[rng.gen_range(0..cloud.points.len())].clone())
        .collect()
}

/// Lower and upper Assouad dimension estimates from local separated-set counts.
pub fn estimate_assouad(source: EstimateSource<'_>, opts: &EstimateOptions) -> Result<AssouadEstimate> {
    if opts.betas.len() < 2 || opts.rhos.is_empty() || opts.centers == 0 {
        return Err(Error::MalformedInput("need at least two betas, one rho and one center".into()));
    }
    let sampled;
    let (cloud, net) = match source {
        EstimateSource::Template(t) => {
            // Deep codings keep centers off cylinder edges at every counting scale.
            let finest = opts.rhos.iter().fold(f64::INFINITY, |m, &r| m.min(r))
                * opts.betas.iter().fold(f64::INFINITY, |m, &b| m.min(b));
            let depth = opts.depth.unwrap_or_else(|| depth_below(t, finest).max(default_depth(t)));
            sampled = sample_points(t, opts.points, depth, opts.seed);
            (&sampled, Some(CylinderNet::new(t)))
        }
        EstimateSource::Cloud(c) => (c, None),
    };
    if cloud.points.is_empty() {
        return Err(Error::MalformedInput("empty point cloud".into()));
    }
    let centers = pick_centers(cloud, opts.centers, opts.seed);
    let dim = centers[0].len();
    if net.is_none() {
        for x in &centers {
            for &rho in &opts.rhos {
                let found = cloud.points.iter().filter(|p| sup_dist(p, x) <= rho).count();
                if found < MIN_BALL_POINTS {
                    return Err(Error::InsufficientPoints { center: x.clone(), rho, found, needed: MIN_BALL_POINTS });
                }
            }
        }
    }
    let table: Vec<CountRow> = centers
        .par_iter()
        .enumerate()
        .flat_map_iter(|(ci, x)| {
            let mut rows = Vec::new();
            for &rho in &opts.rhos {
                for &beta in &opts.betas {
                    let delta = beta * rho;
                    let count = match &net {
                        Some(net) => {
                            let flat = net.points(x, rho, delta);
                            greedy_count(flat.len() / dim, |k| &flat[k * dim..(k + 1) * dim], x, rho, delta)
                        }
                        None => count_separated(&cloud.points, x, rho, delta),
                    };
                    rows.push(CountRow { center: ci, rho, beta, count });
                }
            }
            rows
        })
        .collect();
    let mut sorted_rhos = opts.rhos.clone();
    sorted_rhos.sort_by(|a, b| a.total_cmp(b));
    let small: Vec<f64> = sorted_rhos[..sorted_rhos.len().div_ceil(2)].to_vec();
    let extremal = |upper: bool, only_small: bool| -> Vec<usize> {
        opts.betas
            .iter()
            .map(|&b| {
                let it = table.iter().filter(|r| r.beta == b && (!only_small || small.contains(&r.rho))).map(|r| r.count);
                if upper {
                    it.max().unwrap_or(0)
                } else {
                    it.min().unwrap_or(0)
                }
            })
            .collect()
    };
    Ok(AssouadEstimate {
        lower: AssouadFit { delta1: fit(&opts.betas, extremal(false, false)), delta2: fit(&opts.betas, extremal(false, true)) },
        upper: AssouadFit { delta1: fit(&opts.betas, extremal(true, false)), delta2: fit(&opts.betas, extremal(true, true)) },
        betas: opts.betas.clone(),
        rhos: opts.rhos.clone(),
        centers,
        table,
        seed: opts.seed,
    })
}

/// `π(ω t^∞)` with an explicit tail letter `t`.
fn point_with_tail(t: &SpongeTemplate, word: &[usize], tail: usize) -> Vec<f64> {
    (0..t.dim())
        .map(|i| {
            let m = t.map(tail, i);
            let r = m.ratio().to_f64();
            let mut x = m.offset().to_f64() / (1.0 - r);
            for &a in word.iter().rev() {
                let m = t.map(a, i);
                x = m.ratio().to_f64() * x + m.offset().to_f64();
            }
            x
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub sigma: Vec<usize>,
    pub rho: f64,
    pub x: Vec<f64>,
    /// Witness points in σ-order: `witnesses[i]` moves coordinate `σ(i)`.
    pub witnesses: Vec<Vec<f64>>,
    /// Swap position `N_i + 1` (1-based) for each σ-ordered coordinate.
    pub swap_positions: Vec<usize>,
    /// `M[i][j] = y^(i)_{σ(j)} − x_{σ(j)}`.
    pub matrix: Vec<Vec<f64>>,
    /// `|M_ii| / ρ`.
    pub diagonal_ratios: Vec<f64>,
    /// Smallest diagonal ratio.
    pub c: f64,
    /// `ε_sep · λ_min`, the guaranteed lower bound for the diagonal ratios.
    pub lower_bound: f64,
    pub max_below_diagonal: f64,
    /// Allowed error below the diagonal: twice the largest depth cylinder diameter.
    pub tolerance: f64,
    pub upper_triangular: bool,
    pub in_ball: bool,
    pub warnings: Vec<String>,
}

/// Builds the points `y^(i)` that swap the letter after the `ρ`-scale prefix in
/// coordinate `σ(i)` and checks that `M` is upper triangular with a large diagonal.
pub fn diffuseness_witness(t: &SpongeTemplate, omega_prefix: &Word, rho: f64) -> Result<WitnessReport> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::MalformedInput(format!("rho = {rho} is outside (0, 1]")));
    }
    let class = classify(t);
    let sigma = class.lg_sigma.clone().ok_or(Error::NotLalleyGatzouras)?;
    let irr = irreducibility(t);
    if let Some((coordinate, digit)) = irr.counterexample {
        return Err(Error::ReducibleCoordinate { coordinate: coordinate + 1, digit: t.digits()[digit].clone() });
    }
    let omega = omega_prefix.letters();
    if omega.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut warnings = Vec::new();
    if !class.strongly_lg {
        warnings.push("template is not strongly Lalley-Gatzouras; the diagonal lower bound is vacuous".into());
    }
    let d = t.dim();
    // N_i: smallest n with ∏_{k≤n} |φ'_{ω_k,σ(i)}| ≤ ρ.
    let mut stops = Vec::with_capacity(d);
    for &c in &sigma {
        let mut scale = 1.0;
        let mut n = 0;
        while scale > rho {
            let letter = if n < omega.len() { omega[n] } else { *omega.last().unwrap_or(&0) };
            scale *= t.magnitude_f64(letter, c);
            n += 1;
        }
        stops.push(n);
    }
    let needed = stops.iter().max().copied().unwrap_or(0) + 1;
    if omega.len() < needed {
        return Err(Error::PrefixTooShort { len: omega.len(), needed });
    }
    let order = partial_order(t);
    let tail = *omega.last().unwrap_or(&0);
    let x = point_with_tail(t, omega, tail);
    let mut witnesses = Vec::with_capacity(d);
    for (i, &c) in sigma.iter().enumerate() {
        let pos = stops[i];
        let a = omega[pos];
        // Partners differ from a only in coordinates j with c ≺ j; take the one
        // whose image in coordinate c lies nearest to a's.
        let here = t.map(a, c).image();
        let partner = (0..t.num_digits())
            .filter(|&b| {
                t.digits()[b][c] != t.digits()[a][c]
                    && (0..d).all(|j| order.succeeds(j, c) || t.digits()[b][j] == t.digits()[a][j])
            })
            .min_by(|&p, &q| {
                let gp = here.gap(&t.map(p, c).image()).to_f64();
                let gq = here.gap(&t.map(q, c).image()).to_f64();
                gp.total_cmp(&gq).then(p.cmp(&q))
            })
            .ok_or_else(|| Error::ReducibleCoordinate { coordinate: c + 1, digit: t.digits()[a].clone() })?;
        let mut swapped = omega.to_vec();
        swapped[pos] = partner;
        witnesses.push(point_with_tail(t, &swapped, tail));
    }
    let matrix: Vec<Vec<f64>> =
        witnesses.iter().map(|y| sigma.iter().map(|&c| y[c] - x[c]).collect()).collect();
    let diagonal_ratios: Vec<f64> = (0..d).map(|i| matrix[i][i].abs() / rho).collect();
    let max_below_diagonal =
        (0..d).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| matrix[i][j].abs()).fold(0.0, f64::max);
    let depth_diam = (0..d)
        .map(|c| omega.iter().map(|&a| t.magnitude_f64(a, c)).product::<f64>())
        .fold(0.0, f64::max);
    let tolerance = 2.0 * depth_diam;
    let eps_sep = separation_constant(t, &sigma)?.value.map(|v| v.to_f64()).unwrap_or(1.0);
    Ok(WitnessReport {
        c: diagonal_ratios.iter().copied().fold(f64::INFINITY, f64::min),
        lower_bound: eps_sep * t.min_magnitude(),
        upper_triangular: max_below_diagonal <= tolerance,
        in_ball: witnesses.iter().all(|y| sup_dist(y, &x) <= rho * (1.0 + 1e-12)),
        sigma,
        rho,
        x,
        witnesses,
        swap_positions: stops.iter().map(|n| n + 1).collect(),
        matrix,
        diagonal_ratios,
        max_below_diagonal,
        tolerance,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatnessScale {
    pub rho: f64,
    pub points_in_ball: usize,
    /// Largest distance to `L` over cloud points in `B(x, ρ)`.
    pub max_dist: f64,
    /// `max_dist / ρ^α`.
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatnessCertificate {
    /// Coordinate normal to the hyperplane `L`.
    pub coordinate: usize,
    pub digit: Vec<usize>,
    pub x: Vec<f64>,
    pub alpha: f64,
    pub degenerate: bool,
    pub separation: f64,
    /// `ε_sep^{-α}` when the template is strongly separated.
    pub constant_bound: Option<f64>,
    pub scales: Vec<FlatnessScale>,
    pub stable: bool,
    pub within_bound: bool,
    pub passed: bool,
}

/// Measures how close the cloud stays to the hyperplane through `π(a^∞)`
/// normal to the first reducible coordinate.
pub fn flatness_certificate(t: &SpongeTemplate, cloud: &PointCloud) -> Result<FlatnessCertificate> {
    flatness_certificate_at(t, cloud, &geometric_grid(2, 8))
}

pub fn flatness_certificate_at(t: &SpongeTemplate, cloud: &PointCloud, rhos: &[f64]) -> Result<FlatnessCertificate> {
    let irr = irreducibility(t);
    if irr.irreducible {
        return Err(Error::NotReducible);
    }
    let sigma = classify(t).lg_sigma.ok_or(Error::NotLalleyGatzouras)?;
    let pos = sigma.iter().position(|&c| irr.witnesses[c].is_none()).unwrap_or(0);
    let i = sigma[pos];
    let a = 0;
    let x = point_with_tail(t, &[a], a);
    let degenerate = pos == 0;
    let alpha = if degenerate {
        1.0
    } else {
        t.magnitude_f64(a, i).ln() / t.magnitude_f64(a, sigma[pos - 1]).ln()
    };
    let separation = separation_constant(t, &sigma)?.value.map(|v| v.to_f64()).unwrap_or(1.0);
    let constant_bound = (separation > 0.0).then(|| separation.powf(-alpha));
    let scales: Vec<FlatnessScale> = rhos
        .iter()
        .map(|&rho| {
            let near: Vec<&Vec<f64>> = cloud.points.iter().filter(|p| sup_dist(p, &x) <= rho).collect();
            let max_dist = near.iter().map(|p| (p[i] - x[i]).abs()).fold(0.0, f64::max);
            FlatnessScale { rho, points_in_ball: near.len(), max_dist, constant: max_dist / rho.powf(alpha) }
        })
        .collect();
    let mut by_rho: Vec<&FlatnessScale> = scales.iter().collect();
    by_rho.sort_by(|p, q| q.rho.total_cmp(&p.rho));
    let half = by_rho.len() / 2;
    let large = by_rho[..half.max(1)].iter().map(|s| s.constant).fold(0.0, f64::max);
    let small = by_rho[half..].iter().map(|s| s.constant).fold(0.0, f64::max);
    let stable = if degenerate { scales.iter().all(|s| s.max_dist == 0.0) } else { small <= 4.0 * large.max(f64::MIN_POSITIVE) };
    let within_bound = match constant_bound {
        Some(c) => scales.iter().all(|s| s.constant <= c * (1.0 + 1e-9)),
        None => true,
    };
    Ok(FlatnessCertificate {
        coordinate: i,
        digit: t.digits()[a].clone(),
        x,
        alpha,
        degenerate,
        separation,
        constant_bound,
        passed: stable && within_bound,
        scales,
        stable,
        within_bound,
    })
}
