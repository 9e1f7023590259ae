//! Sponge templates, Bernoulli weights and exact evaluation of words.

use std::collections::HashSet;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numeric::{cmp, Interval, Num, EQ_TOL};

/// `x ↦ ratio·x + offset`, a contracting similarity of `[0,1]` into itself.
#[derive(Clone, Debug, PartialEq)]
pub struct Similarity1D {
    ratio: Num,
    offset: Num,
}

impl Similarity1D {
    pub fn new(ratio: Num, offset: Num) -> Result<Self> {
        let mag = ratio.abs();
        if cmp(&mag, &Num::zero(), 0.0).is_le() || cmp(&mag, &Num::one(), 0.0).is_ge() {
            return Err(Error::RatioOutOfRange(ratio.to_string()));
        }
        let map = Similarity1D { ratio, offset };
        if !Interval::unit().contains(&map.image()) {
            return Err(Error::ImageEscapes {
                ratio: map.ratio.to_string(),
                offset: map.offset.to_string(),
            });
        }
        Ok(map)
    }

    /// The map `x ↦ (a + x)/m` of an `m`-adic grid.
    pub fn grid(m: u32, a: u32) -> Self {
        Similarity1D {
            ratio: Num::ratio(1, m as i64),
            offset: Num::ratio(a as i64, m as i64),
        }
    }

    pub fn identity() -> Self {
        Similarity1D { ratio: Num::one(), offset: Num::zero() }
    }

    pub fn ratio(&self) -> &Num {
        &self.ratio
    }

    pub fn offset(&self) -> &Num {
        &self.offset
    }

    /// `|φ'|`.
    pub fn magnitude(&self) -> Num {
        self.ratio.abs()
    }

    pub fn apply(&self, x: &Num) -> Num {
        &(&self.ratio * x) + &self.offset
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Similarity1D) -> Similarity1D {
        Similarity1D {
            ratio: &self.ratio * &inner.ratio,
            offset: &(&self.ratio * &inner.offset) + &self.offset,
        }
    }

    pub fn image(&self) -> Interval {
        Interval::new(self.offset.clone(), &self.ratio + &self.offset)
    }

    pub fn fixed_point(&self) -> Num {
        let denom = &Num::one() - &self.ratio;
        &self.offset * &denom.recip()
    }
}

/// One coordinate's base IFS. `grid` remembers the shorthand it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseIfs {
    pub maps: Vec<Similarity1D>,
    pub grid: Option<u32>,
}

impl BaseIfs {
    pub fn grid(m: u32) -> Self {
        BaseIfs {
            maps: (0..m).map(|a| Similarity1D::grid(m, a)).collect(),
            grid: Some(m),
        }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// A digit tuple `a = (a_1, …, a_d)`, one base index per coordinate.
pub type Digit = Vec<usize>;

/// A diagonal IFS: per-coordinate base IFSes and the selected digit set `E`.
#[derive(Clone, Debug)]
pub struct SpongeTemplate {
    bases: Vec<BaseIfs>,
    digits: Vec<Digit>,
    magnitudes: Vec<Vec<f64>>,
    log_contraction: Vec<Vec<f64>>,
    exact: bool,
}

impl PartialEq for SpongeTemplate {
    fn eq(&self, other: &Self) -> bool {
        self.bases == other.bases && self.digits == other.digits
    }
}

impl SpongeTemplate {
    pub fn new(bases: Vec<BaseIfs>, digits: Vec<Digit>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::MalformedInput("dimension must be at least 1".into()));
        }
        if let Some(i) = bases.iter().position(|b| b.is_empty()) {
            return Err(Error::MalformedInput(format!("base IFS {} is empty", i + 1)));
        }
        if digits.is_empty() {
            return Err(Error::EmptyDigitSet);
        }
        let d = bases.len();
        let mut seen = HashSet::with_capacity(digits.len());
        for digit in &digits {
            if digit.len() != d {
                return Err(Error::MalformedInput(format!(
                    "digit {digit:?} has {} entries, expected {d}",
                    digit.len()
                )));
            }
            for (i, &a) in digit.iter().enumerate() {
                if a >= bases[i].len() {
                    return Err(Error::MalformedInput(format!(
                        "digit {digit:?} indexes map {a} of coordinate {} which has {} maps",
                        i + 1,
                        bases[i].len()
                    )));
                }
            }
            if !seen.insert(digit.clone()) {
                return Err(Error::DuplicateDigit(digit.clone()));
            }
        }
        let magnitudes: Vec<Vec<f64>> = digits
            .iter()
            .map(|a| a.iter().enumerate().map(|(i, &ai)| bases[i].maps[ai].magnitude().to_f64()).collect())
            .collect();
        let log_contraction = magnitudes
            .iter()
            .map(|row| row.iter().map(|m| -m.ln()).collect())
            .collect();
        let exact = bases
            .iter()
            .all(|b| b.maps.iter().all(|m| m.ratio.is_exact() && m.offset.is_exact()));
        Ok(SpongeTemplate { bases, digits, magnitudes, log_contraction, exact })
    }

    /// Product of `m_i`-adic grids with the given digits.
    pub fn from_grid(ms: &[u32], digits: Vec<Digit>) -> Result<Self> {
        if ms.iter().any(|&m| m < 2) {
            return Err(Error::RatioOutOfRange("1".into()));
        }
        SpongeTemplate::new(ms.iter().map(|&m| BaseIfs::grid(m)).collect(), digits)
    }

    pub fn dim(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[BaseIfs] {
        &self.bases
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn num_digits(&self) -> usize {
        self.digits.len()
    }

    /// All ratios and offsets are rational.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// `φ_{a,i}` for digit index `a`.
    pub fn map(&self, digit: usize, coord: usize) -> &Similarity1D {
        &self.bases[coord].maps[self.digits[digit][coord]]
    }

    /// `|φ'_{a,i}|` as an exact-when-possible value.
    pub fn magnitude(&self, digit: usize, coord: usize) -> Num {
        self.map(digit, coord).magnitude()
    }

    /// `|φ'_{a,i}|` as a float.
    pub fn magnitude_f64(&self, digit: usize, coord: usize) -> f64 {
        self.magnitudes[digit][coord]
    }

    /// `-log|φ'_{a,i}|`.
    pub fn log_contraction(&self, digit: usize, coord: usize) -> f64 {
        self.log_contraction[digit][coord]
    }

    pub fn max_magnitude(&self) -> f64 {
        self.magnitudes.iter().flatten().copied().fold(0.0, f64::max)
    }

    pub fn min_magnitude(&self) -> f64 {
        self.magnitudes.iter().flatten().copied().fold(1.0, f64::min)
    }

    /// Composite map `φ_{ω_1,i} ∘ ⋯ ∘ φ_{ω_n,i}` in coordinate `i`.
    pub fn word_map(&self, word: &Word, coord: usize) -> Similarity1D {
        word.0.iter().fold(Similarity1D::identity(), |acc, &a| acc.compose(self.map(a, coord)))
    }

    /// The box `φ_ω([0,1]^d)`.
    pub fn apply_word(&self, word: &Word) -> CylinderBox {
        CylinderBox((0..self.dim()).map(|i| self.word_map(word, i).image()).collect())
    }

    /// Image of the cube's center under `φ_ω`, with per-coordinate radius
    /// `∏|φ'_{ω_n,i}|/2`; `π(ωξ)` lies within that radius for every tail `ξ`.
    pub fn coding_point(&self, word: &Word) -> Result<(Vec<Num>, Vec<Num>)> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let cube = self.apply_word(word);
        let point = cube.0.iter().map(Interval::midpoint).collect();
        let half = Num::ratio(1, 2);
        let radii = cube.0.iter().map(|iv| &iv.width() * &half).collect();
        Ok((point, radii))
    }

    /// `π(ω a^∞)` in floating point, where `a` is the last letter of `ω`.
    pub fn attractor_point(&self, word: &[usize]) -> Vec<f64> {
        let mut point = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let mut x = match word.last() {
                Some(&a) => {
                    let m = self.map(a, i);
                    let r = m.ratio.to_f64();
                    m.offset.to_f64() / (1.0 - r)
                }
                None => 0.5,
            };
            for &a in word.iter().rev() {
                let m = self.map(a, i);
                x = m.ratio.to_f64() * x + m.offset.to_f64();
            }
            point.push(x);
        }
        point
    }

    /// Floating box `φ_ω([0,1]^d)` as `(lo, hi)` per coordinate.
    pub fn word_box_f64(&self, word: &[usize]) -> Vec<(f64, f64)> {
        (0..self.dim())
            .map(|i| {
                let (mut r, mut t) = (1.0f64, 0.0f64);
                for &a in word {
                    let m = self.map(a, i);
                    t += r * m.offset.to_f64();
                    r *= m.ratio.to_f64();
                }
                if r >= 0.0 {
                    (t, t + r)
                } else {
                    (t + r, t)
                }
            })
            .collect()
    }

    /// Serializes to the template document; `parse_template` reads it back unchanged.
    pub fn to_document(&self) -> Value {
        let bases: Vec<Value> = self
            .bases
            .iter()
            .map(|b| match b.grid {
                Some(m) => json!({ "grid": m }),
                None => json!({
                    "maps": b.maps.iter().map(|m| json!({
                        "ratio": m.ratio.to_string(),
                        "offset": m.offset.to_string(),
                    })).collect::<Vec<_>>()
                }),
            })
            .collect();
        json!({ "dimension": self.dim(), "bases": bases, "digits": self.digits })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("template serializes")
    }
}

/// Parses a template document:
/// `{"dimension": d, "bases": [{"grid": m} | {"maps": [{"ratio": .., "offset": ..}]}], "digits": [[..]]}`.
pub fn parse_template(document: &str) -> Result<SpongeTemplate> {
    let value: Value =
        serde_json::from_str(document).map_err(|e| Error::MalformedInput(e.to_string()))?;
    template_from_value(&value)
}

pub fn template_from_value(value: &Value) -> Result<SpongeTemplate> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::MalformedInput("template must be an object".into()))?;
    let bases_val = obj
        .get("bases")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::MalformedInput("missing \"bases\" array".into()))?;
    if let Some(d) = obj.get("dimension") {
        let d = d
            .as_u64()
            .ok_or_else(|| Error::MalformedInput("\"dimension\" must be a positive integer".into()))?;
        if d as usize != bases_val.len() {
            return Err(Error::MalformedInput(format!(
                "dimension {d} but {} bases",
                bases_val.len()
            )));
        }
    }
    let mut bases = Vec::with_capacity(bases_val.len());
    for (i, b) in bases_val.iter().enumerate() {
        if let Some(m) = b.get("grid") {
            let m = m
                .as_u64()
                .ok_or_else(|| Error::MalformedInput(format!("base {}: grid must be an integer", i + 1)))?;
            if m < 2 {
                return Err(Error::RatioOutOfRange(format!("1/{m}")));
            }
            bases.push(BaseIfs::grid(m as u32));
        } else if let Some(maps) = b.get("maps").and_then(Value::as_array) {
            let maps = maps
                .iter()
                .map(|m| {
                    let ratio = m
                        .get("ratio")
                        .ok_or_else(|| Error::MalformedInput(format!("base {}: map without ratio", i + 1)))?;
                    let offset = m
                        .get("offset")
                        .ok_or_else(|| Error::MalformedInput(format!("base {}: map without offset", i + 1)))?;
                    Similarity1D::new(Num::from_json(ratio)?, Num::from_json(offset)?)
                })
                .collect::<Result<Vec<_>>>()?;
            bases.push(BaseIfs { maps, grid: None });
        } else {
            return Err(Error::MalformedInput(format!(
                "base {} needs \"grid\" or \"maps\"",
                i + 1
            )));
        }
    }
    let digits_val = obj
        .get("digits")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::MalformedInput("missing \"digits\" array".into()))?;
    let digits = digits_val
        .iter()
        .map(|t| {
            t.as_array()
                .ok_or_else(|| Error::MalformedInput("digit must be an array".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::MalformedInput(format!("bad digit entry {x}")))
                })
                .collect::<Result<Digit>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SpongeTemplate::new(bases, digits)
}

/// A probability vector on `E`, aligned with the template's digit order.
#[derive(Clone, Debug, PartialEq)]
pub struct BernoulliWeights {
    values: Vec<Num>,
    probs: Vec<f64>,
}

impl BernoulliWeights {
    pub fn new(values: Vec<Num>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        if let Some(index) = values.iter().position(Num::is_negative) {
            return Err(Error::NegativeWeight { index });
        }
        let sum = values.iter().fold(Num::zero(), |acc, v| &acc + v);
        let ok = match &sum {
            Num::Exact(_) => sum == Num::one(),
            Num::Float(s) => (s - 1.0).abs() <= EQ_TOL,
        };
        if !ok {
            return Err(Error::SumNotOne(sum.to_string()));
        }
        if values.iter().any(|v| cmp(v, &Num::one(), 0.0).is_gt()) {
            return Err(Error::InvalidWeights("weight exceeds 1".into()));
        }
        let probs = values.iter().map(Num::to_f64).collect();
        Ok(BernoulliWeights { values, probs })
    }

    /// Floating weights, used directly by the numerical routines.
    pub fn from_f64(probs: Vec<f64>) -> Result<Self> {
        BernoulliWeights::new(probs.into_iter().map(Num::Float).collect())
    }

    pub fn uniform(n: usize) -> Self {
        let values = vec![Num::ratio(1, n as i64); n];
        let probs = vec![1.0 / n as f64; n];
        BernoulliWeights { values, probs }
    }

    pub fn values(&self) -> &[Num] {
        &self.values
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(Num::is_exact)
    }

    /// `(1-η)p + η·uniform`: a strictly positive perturbation of `p`.
    pub fn mix_uniform(&self, eta: f64) -> Self {
        let n = self.probs.len() as f64;
        let probs = self.probs.iter().map(|p| (1.0 - eta) * p + eta / n).collect::<Vec<_>>();
        let s: f64 = probs.iter().sum();
        let probs: Vec<f64> = probs.iter().map(|p| p / s).collect();
        BernoulliWeights { values: probs.iter().map(|&p| Num::Float(p)).collect(), probs }
    }

    pub fn to_document(&self) -> Value {
        json!({ "weights": self.values.iter().map(Num::to_string).collect::<Vec<_>>() })
    }
}

/// Parses `{"weights": [...]}` against the template's digit list.
pub fn parse_weights(document: &str, template: &SpongeTemplate) -> Result<BernoulliWeights> {
    let value: Value =
        serde_json::from_str(document).map_err(|e| Error::MalformedInput(e.to_string()))?;
    let arr = value
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::MalformedInput("missing \"weights\" array".into()))?;
    if arr.len() != template.num_digits() {
        return Err(Error::LengthMismatch { expected: template.num_digits(), found: arr.len() });
    }
    BernoulliWeights::new(arr.iter().map(Num::from_json).collect::<Result<_>>()?)
}

/// A finite word over `E`, stored as digit indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Looks up digit tuples in the template; every tuple must belong to `E`.
    pub fn from_digits(template: &SpongeTemplate, tuples: &[Digit]) -> Result<Word> {
        tuples
            .iter()
            .map(|t| {
                template
                    .digits()
                    .iter()
                    .position(|d| d == t)
                    .ok_or_else(|| Error::MalformedInput(format!("{t:?} is not a digit")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn to_digits(&self, template: &SpongeTemplate) -> Vec<Digit> {
        self.0.iter().map(|&a| template.digits()[a].clone()).collect()
    }
}

/// Axis-aligned box, one closed interval per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderBox(pub Vec<Interval>);

impl CylinderBox {
    pub fn contains(&self, other: &CylinderBox) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.contains(b))
    }

    pub fn widths(&self) -> Vec<Num> {
        self.0.iter().map(Interval::width).collect()
    }

    pub fn strictly_inside_unit(&self) -> bool {
        self.0.iter().all(Interval::strictly_inside_unit)
    }
}

impl fmt::Display for CylinderBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, iv) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "×")?;
            }
            write!(f, "[{},{}]", iv.lo, iv.hi)?;
        }
        Ok(())
    }
}
