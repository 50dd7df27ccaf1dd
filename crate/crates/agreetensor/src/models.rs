//! The six agreement models over three raters and n categories.
//!
//! Two parameterization styles coexist:
//! * toric families (`QI`, `qI`, `pQI`): monomial weights renormalized by
//!   their total, so parameters are projective and need not be normalized;
//! * mixture families (`Mix`, `mix`, `pMix`): convex combinations of an
//!   independence tensor with diagonal or agreement-slab tensors, so simplex
//!   constraints are part of validity and no renormalization happens.

use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};
use crate::tensor::{classify_cell, CellClass, ProbabilityTensor, Tensor};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Model family tags. Text names: `QI`, `Mix`, `qI`, `mix`, `pQI`, `pMix`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Quasi-independence: one agreement weight per category.
    QI,
    /// Independence mixed with a free diagonal distribution.
    Mix,
    /// Homogeneous quasi-independence: a single agreement weight.
    HomQI,
    /// Independence mixed with the uniform diagonal.
    HomMix,
    /// Pairwise quasi-independence: one weight per rater pair.
    PairQI,
    /// Independence mixed with three agreement slabs and the diagonal.
    PairMix,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::QI,
        Family::Mix,
        Family::HomQI,
        Family::HomMix,
        Family::PairQI,
        Family::PairMix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::QI => "QI",
            Family::Mix => "Mix",
            Family::HomQI => "qI",
            Family::HomMix => "mix",
            Family::PairQI => "pQI",
            Family::PairMix => "pMix",
        }
    }

    /// True for the renormalized monomial families.
    pub fn is_toric(self) -> bool {
        matches!(self, Family::QI | Family::HomQI | Family::PairQI)
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    /// Exact names always parse. Case-insensitive aliases are accepted only
    /// where unambiguous (`pqi`, `pmix`); `qi`/`mix` in the wrong case stay
    /// errors because `QI`/`qI` and `Mix`/`mix` are distinct families.
    fn from_str(s: &str) -> Result<Family> {
        for fam in Family::ALL {
            if fam.name() == s {
                return Ok(fam);
            }
        }
        match s.to_ascii_lowercase().as_str() {
            "pqi" => Ok(Family::PairQI),
            "pmix" => Ok(Family::PairMix),
            _ => Err(Error::UnsupportedFamily(s.to_string())),
        }
    }
}

/// Parameter point of one family; vector lengths all equal n.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams<T> {
    QI {
        a: Vec<T>,
        b: Vec<T>,
        c: Vec<T>,
        gamma: Vec<T>,
    },
    Mix {
        alpha: T,
        a: Vec<T>,
        b: Vec<T>,
        c: Vec<T>,
        d: Vec<T>,
    },
    HomQI {
        a: Vec<T>,
        b: Vec<T>,
        c: Vec<T>,
        gamma: T,
    },
    HomMix {
        alpha: T,
        a: Vec<T>,
        b: Vec<T>,
        c: Vec<T>,
    },
    PairQI {
        a: Vec<T>,
        b: Vec<T>,
        c: Vec<T>,
        gamma12: T,
        gamma13: T,
        gamma23: T,
    },
    PairMix {
        alpha0: T,
        alpha12: T,
        alpha13: T,
        alpha23: T,
        alpha123: T,
        a: Vec<T>,
        b: Vec<T>,
        c: Vec<T>,
    },
}

fn vec_sum<T: Scalar>(v: &[T]) -> T {
    let mut acc = T::zero();
    for x in v {
        acc += x.clone();
    }
    acc
}

fn check_nonneg<T: Scalar>(name: &str, v: &[T]) -> Result<()> {
    for (ix, x) in v.iter().enumerate() {
        if x.is_negative() {
            return Err(Error::InvalidParams(format!(
                "{name}[{}] is negative",
                ix + 1
            )));
        }
    }
    Ok(())
}

fn check_simplex<T: Scalar>(name: &str, v: &[T]) -> Result<()> {
    check_nonneg(name, v)?;
    let total = vec_sum(v);
    if !total.close_abs(&T::one(), 1e-12) {
        return Err(Error::InvalidParams(format!(
            "{name} sums to {}, expected 1",
            total.format_number()
        )));
    }
    Ok(())
}

fn check_unit_interval<T: Scalar>(name: &str, x: &T) -> Result<()> {
    if x.is_negative() || x > &T::one() {
        return Err(Error::InvalidParams(format!("{name} must lie in [0, 1]")));
    }
    Ok(())
}

impl<T: Scalar> ModelParams<T> {
    pub fn family(&self) -> Family {
        match self {
            ModelParams::QI { .. } => Family::QI,
            ModelParams::Mix { .. } => Family::Mix,
            ModelParams::HomQI { .. } => Family::HomQI,
            ModelParams::HomMix { .. } => Family::HomMix,
            ModelParams::PairQI { .. } => Family::PairQI,
            ModelParams::PairMix { .. } => Family::PairMix,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            ModelParams::QI { a, .. }
            | ModelParams::Mix { a, .. }
            | ModelParams::HomQI { a, .. }
            | ModelParams::HomMix { a, .. }
            | ModelParams::PairQI { a, .. }
            | ModelParams::PairMix { a, .. } => a.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 2 {
            return Err(Error::UnsupportedN(n));
        }
        let check_len = |name: &str, v: &[T]| -> Result<()> {
            if v.len() != n {
                return Err(Error::InvalidParams(format!(
                    "{name} has length {}, expected {n}",
                    v.len()
                )));
            }
            Ok(())
        };
        match self {
            ModelParams::QI { a, b, c, gamma } => {
                for (name, v) in [("a", a), ("b", b), ("c", c), ("gamma", gamma)] {
                    check_len(name, v)?;
                    check_nonneg(name, v)?;
                }
            }
            ModelParams::HomQI { a, b, c, gamma } => {
                for (name, v) in [("a", a), ("b", b), ("c", c)] {
                    check_len(name, v)?;
                    check_nonneg(name, v)?;
                }
                if gamma.is_negative() {
                    return Err(Error::InvalidParams("gamma is negative".into()));
                }
            }
            ModelParams::PairQI {
                a,
                b,
                c,
                gamma12,
                gamma13,
                gamma23,
            } => {
                for (name, v) in [("a", a), ("b", b), ("c", c)] {
                    check_len(name, v)?;
                    check_nonneg(name, v)?;
                }
                for (name, g) in [("gamma12", gamma12), ("gamma13", gamma13), ("gamma23", gamma23)]
                {
                    if g.is_negative() {
                        return Err(Error::InvalidParams(format!("{name} is negative")));
                    }
                }
            }
            ModelParams::Mix { alpha, a, b, c, d } => {
                check_unit_interval("alpha", alpha)?;
                for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
                    check_len(name, v)?;
                    check_simplex(name, v)?;
                }
            }
            ModelParams::HomMix { alpha, a, b, c } => {
                check_unit_interval("alpha", alpha)?;
                for (name, v) in [("a", a), ("b", b), ("c", c)] {
                    check_len(name, v)?;
                    check_simplex(name, v)?;
                }
            }
            ModelParams::PairMix {
                alpha0,
                alpha12,
                alpha13,
                alpha23,
                alpha123,
                a,
                b,
                c,
            } => {
                let weights = [
                    alpha0.clone(),
                    alpha12.clone(),
                    alpha13.clone(),
                    alpha23.clone(),
                    alpha123.clone(),
                ];
                check_simplex("alpha weights", &weights)?;
                for (name, v) in [("a", a), ("b", b), ("c", c)] {
                    check_len(name, v)?;
                    check_simplex(name, v)?;
                }
            }
        }
        Ok(())
    }

    /// Evaluates the model map at this parameter point.
    ///
    /// Toric families renormalize their weight tensor (error [`Error::ZeroMass`]
    /// when every weight vanishes); mixture families already sum to one.
    pub fn materialize(&self) -> Result<ProbabilityTensor<T>> {
        self.validate()?;
        let n = self.n();
        match self {
            ModelParams::QI { a, b, c, gamma } => {
                let w = Tensor::from_fn(n, |i, j, k| {
                    let base = a[i - 1].clone() * b[j - 1].clone() * c[k - 1].clone();
                    if i == j && j == k {
                        base * gamma[i - 1].clone()
                    } else {
                        base
                    }
                });
                ProbabilityTensor::from_unnormalized(w)
            }
            ModelParams::HomQI { a, b, c, gamma } => {
                let w = Tensor::from_fn(n, |i, j, k| {
                    let base = a[i - 1].clone() * b[j - 1].clone() * c[k - 1].clone();
                    if i == j && j == k {
                        base * gamma.clone()
                    } else {
                        base
                    }
                });
                ProbabilityTensor::from_unnormalized(w)
            }
            ModelParams::PairQI {
                a,
                b,
                c,
                gamma12,
                gamma13,
                gamma23,
            } => {
                let w = Tensor::from_fn(n, |i, j, k| {
                    let base = a[i - 1].clone() * b[j - 1].clone() * c[k - 1].clone();
                    match classify_cell(i, j, k) {
                        CellClass::AllEqual => {
                            base * gamma12.clone() * gamma13.clone() * gamma23.clone()
                        }
                        CellClass::Eq12 => base * gamma12.clone(),
                        CellClass::Eq13 => base * gamma13.clone(),
                        CellClass::Eq23 => base * gamma23.clone(),
                        CellClass::AllDistinct => base,
                    }
                });
                ProbabilityTensor::from_unnormalized(w)
            }
            ModelParams::Mix { alpha, a, b, c, d } => {
                let one_minus = T::one() - alpha.clone();
                let t = Tensor::from_fn(n, |i, j, k| {
                    let mut v = alpha.clone()
                        * a[i - 1].clone()
                        * b[j - 1].clone()
                        * c[k - 1].clone();
                    if i == j && j == k {
                        v += one_minus.clone() * d[i - 1].clone();
                    }
                    v
                });
                ProbabilityTensor::new(t)
            }
            ModelParams::HomMix { alpha, a, b, c } => {
                let share = (T::one() - alpha.clone()) / T::from_int(n as i64);
                let t = Tensor::from_fn(n, |i, j, k| {
                    let mut v = alpha.clone()
                        * a[i - 1].clone()
                        * b[j - 1].clone()
                        * c[k - 1].clone();
                    if i == j && j == k {
                        v += share.clone();
                    }
                    v
                });
                ProbabilityTensor::new(t)
            }
            ModelParams::PairMix {
                alpha0,
                alpha12,
                alpha13,
                alpha23,
                alpha123,
                a,
                b,
                c,
            } => {
                let nn = T::from_int((n * n) as i64);
                let nt = T::from_int(n as i64);
                let t = Tensor::from_fn(n, |i, j, k| {
                    let mut v = alpha0.clone()
                        * a[i - 1].clone()
                        * b[j - 1].clone()
                        * c[k - 1].clone();
                    if i == j {
                        v += alpha12.clone() / nn.clone();
                    }
                    if i == k {
                        v += alpha13.clone() / nn.clone();
                    }
                    if j == k {
                        v += alpha23.clone() / nn.clone();
                    }
                    if i == j && j == k {
                        v += alpha123.clone() / nt.clone();
                    }
                    v
                });
                ProbabilityTensor::new(t)
            }
        }
    }

    pub fn to_f64(&self) -> ModelParams<f64> {
        let fv = |v: &[T]| v.iter().map(|x| x.to_f64()).collect::<Vec<_>>();
        match self {
            ModelParams::QI { a, b, c, gamma } => ModelParams::QI {
                a: fv(a),
                b: fv(b),
                c: fv(c),
                gamma: fv(gamma),
            },
            ModelParams::Mix { alpha, a, b, c, d } => ModelParams::Mix {
                alpha: alpha.to_f64(),
                a: fv(a),
                b: fv(b),
                c: fv(c),
                d: fv(d),
            },
            ModelParams::HomQI { a, b, c, gamma } => ModelParams::HomQI {
                a: fv(a),
                b: fv(b),
                c: fv(c),
                gamma: gamma.to_f64(),
            },
            ModelParams::HomMix { alpha, a, b, c } => ModelParams::HomMix {
                alpha: alpha.to_f64(),
                a: fv(a),
                b: fv(b),
                c: fv(c),
            },
            ModelParams::PairQI {
                a,
                b,
                c,
                gamma12,
                gamma13,
                gamma23,
            } => ModelParams::PairQI {
                a: fv(a),
                b: fv(b),
                c: fv(c),
                gamma12: gamma12.to_f64(),
                gamma13: gamma13.to_f64(),
                gamma23: gamma23.to_f64(),
            },
            ModelParams::PairMix {
                alpha0,
                alpha12,
                alpha13,
                alpha23,
                alpha123,
                a,
                b,
                c,
            } => ModelParams::PairMix {
                alpha0: alpha0.to_f64(),
                alpha12: alpha12.to_f64(),
                alpha13: alpha13.to_f64(),
                alpha23: alpha23.to_f64(),
                alpha123: alpha123.to_f64(),
                a: fv(a),
                b: fv(b),
                c: fv(c),
            },
        }
    }
}

/// Controls for [`sample_params`]. All drawn coordinates are exact multiples
/// of `1/grid_denominator` (scaled into `gamma_range` for agreement weights),
/// so samples stay exact on the rational backend.
#[derive(Debug, Clone)]
pub struct SampleOptions {
    /// Inclusive range for agreement weights of the toric families.
    pub gamma_range: (Rat, Rat),
    /// Grid resolution for all draws; must be >= n.
    pub grid_denominator: u32,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            gamma_range: (Rat::from_int(0), Rat::from_int(4)),
            grid_denominator: 60,
        }
    }
}

/// Draws a uniformly random composition of `denom` into `n` positive parts
/// and returns it divided by `denom`: an exact simplex point with every
/// coordinate at least `1/denom`.
fn sample_simplex(rng: &mut ChaCha8Rng, n: usize, denom: u32) -> Vec<Rat> {
    assert!(denom as usize >= n, "grid denominator must be >= n");
    // n-1 distinct cut points inside 1..denom-1 partition denom into n parts.
    let mut cuts: Vec<u32> = rand::seq::index::sample(rng, denom as usize - 1, n - 1)
        .into_iter()
        .map(|x| x as u32 + 1)
        .collect();
    cuts.sort_unstable();
    cuts.push(denom);
    let mut prev = 0u32;
    let mut out = Vec::with_capacity(n);
    for cut in cuts {
        out.push(Rat::from_ratio((cut - prev) as i64, denom as i64));
        prev = cut;
    }
    out
}

fn sample_gamma(rng: &mut ChaCha8Rng, opts: &SampleOptions) -> Rat {
    let d = opts.grid_denominator;
    let u = rng.gen_range(0..=d);
    let (lo, hi) = &opts.gamma_range;
    lo.clone() + (hi.clone() - lo.clone()) * Rat::from_ratio(u as i64, d as i64)
}

/// Deterministic exact parameter draw: same (family, n, seed, options) gives
/// the same point. Marginal vectors are strictly positive; mixture weights
/// are strictly positive; agreement weights range over `gamma_range`
/// (boundary values included).
pub fn sample_params(
    family: Family,
    n: usize,
    seed: u64,
    opts: &SampleOptions,
) -> Result<ModelParams<Rat>> {
    if n < 2 {
        return Err(Error::UnsupportedN(n));
    }
    if (opts.grid_denominator as usize) < n.max(5) {
        return Err(Error::InvalidParams(
            "grid denominator too small for the simplex dimension".into(),
        ));
    }
    if opts.gamma_range.0.is_negative() || opts.gamma_range.1 < opts.gamma_range.0 {
        return Err(Error::InvalidParams("bad gamma range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = opts.grid_denominator;
    let a = sample_simplex(&mut rng, n, d);
    let b = sample_simplex(&mut rng, n, d);
    let c = sample_simplex(&mut rng, n, d);
    let params = match family {
        Family::QI => {
            let gamma = (0..n).map(|_| sample_gamma(&mut rng, opts)).collect();
            ModelParams::QI { a, b, c, gamma }
        }
        Family::HomQI => ModelParams::HomQI {
            a,
            b,
            c,
            gamma: sample_gamma(&mut rng, opts),
        },
        Family::PairQI => ModelParams::PairQI {
            a,
            b,
            c,
            gamma12: sample_gamma(&mut rng, opts),
            gamma13: sample_gamma(&mut rng, opts),
            gamma23: sample_gamma(&mut rng, opts),
        },
        Family::Mix => {
            let alpha = Rat::from_ratio(rng.gen_range(1..=d) as i64, d as i64);
            let dd = sample_simplex(&mut rng, n, d);
            ModelParams::Mix { alpha, a, b, c, d: dd }
        }
        Family::HomMix => {
            let alpha = Rat::from_ratio(rng.gen_range(1..=d) as i64, d as i64);
            ModelParams::HomMix { alpha, a, b, c }
        }
        Family::PairMix => {
            let w = sample_simplex(&mut rng, 5, d);
            ModelParams::PairMix {
                alpha0: w[0].clone(),
                alpha12: w[1].clone(),
                alpha13: w[2].clone(),
                alpha23: w[3].clone(),
                alpha123: w[4].clone(),
                a,
                b,
                c,
            }
        }
    };
    params.validate()?;
    Ok(params)
}

#[derive(Serialize, Deserialize)]
struct ParamsDoc {
    family: String,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha12: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha13: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha23: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha123: Option<String>,
    a: Vec<String>,
    b: Vec<String>,
    c: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma12: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma13: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma23: Option<String>,
}

/// Serializes parameters as JSON with every number in exact text form.
pub fn params_to_json<T: Scalar>(params: &ModelParams<T>) -> String {
    let sv = |v: &[T]| v.iter().map(|x| x.format_number()).collect::<Vec<_>>();
    let mut doc = ParamsDoc {
        family: params.family().name().to_string(),
        n: params.n(),
        alpha: None,
        alpha0: None,
        alpha12: None,
        alpha13: None,
        alpha23: None,
        alpha123: None,
        a: vec![],
        b: vec![],
        c: vec![],
        d: None,
        gamma: None,
        gamma12: None,
        gamma13: None,
        gamma23: None,
    };
    match params {
        ModelParams::QI { a, b, c, gamma } => {
            doc.a = sv(a);
            doc.b = sv(b);
            doc.c = sv(c);
            doc.gamma = Some(serde_json::json!(sv(gamma)));
        }
        ModelParams::HomQI { a, b, c, gamma } => {
            doc.a = sv(a);
            doc.b = sv(b);
            doc.c = sv(c);
            doc.gamma = Some(serde_json::json!(gamma.format_number()));
        }
        ModelParams::PairQI {
            a,
            b,
            c,
            gamma12,
            gamma13,
            gamma23,
        } => {
            doc.a = sv(a);
            doc.b = sv(b);
            doc.c = sv(c);
            doc.gamma12 = Some(gamma12.format_number());
            doc.gamma13 = Some(gamma13.format_number());
            doc.gamma23 = Some(gamma23.format_number());
        }
        ModelParams::Mix { alpha, a, b, c, d } => {
            doc.alpha = Some(alpha.format_number());
            doc.a = sv(a);
            doc.b = sv(b);
            doc.c = sv(c);
            doc.d = Some(sv(d));
        }
        ModelParams::HomMix { alpha, a, b, c } => {
            doc.alpha = Some(alpha.format_number());
            doc.a = sv(a);
            doc.b = sv(b);
            doc.c = sv(c);
        }
        ModelParams::PairMix {
            alpha0,
            alpha12,
            alpha13,
            alpha23,
            alpha123,
            a,
            b,
            c,
        } => {
            doc.alpha0 = Some(alpha0.format_number());
            doc.alpha12 = Some(alpha12.format_number());
            doc.alpha13 = Some(alpha13.format_number());
            doc.alpha23 = Some(alpha23.format_number());
            doc.alpha123 = Some(alpha123.format_number());
            doc.a = sv(a);
            doc.b = sv(b);
            doc.c = sv(c);
        }
    }
    serde_json::to_string_pretty(&doc).expect("params serialize")
}

/// Parses the parameter JSON produced by [`params_to_json`] (numbers may be
/// fractions or decimals).
pub fn params_from_json<T: Scalar>(input: &str) -> Result<ModelParams<T>> {
    let doc: ParamsDoc =
        serde_json::from_str(input).map_err(|e| Error::Parse(format!("params json: {e}")))?;
    let family: Family = doc.family.parse()?;
    let pv = |v: &[String]| -> Result<Vec<T>> { v.iter().map(|s| T::parse_number(s)).collect() };
    let need = |field: &Option<String>, name: &str| -> Result<T> {
        let s = field
            .as_ref()
            .ok_or_else(|| Error::Parse(format!("missing field {name}")))?;
        T::parse_number(s)
    };
    let a = pv(&doc.a)?;
    let b = pv(&doc.b)?;
    let c = pv(&doc.c)?;
    let params = match family {
        Family::QI => {
            let g = doc
                .gamma
                .as_ref()
                .ok_or_else(|| Error::Parse("missing field gamma".into()))?;
            let list: Vec<String> = serde_json::from_value(g.clone())
                .map_err(|_| Error::Parse("QI gamma must be a list".into()))?;
            ModelParams::QI {
                a,
                b,
                c,
                gamma: pv(&list)?,
            }
        }
        Family::HomQI => {
            let g = doc
                .gamma
                .as_ref()
                .ok_or_else(|| Error::Parse("missing field gamma".into()))?;
            let s: String = serde_json::from_value(g.clone())
                .map_err(|_| Error::Parse("qI gamma must be a single number".into()))?;
            ModelParams::HomQI {
                a,
                b,
                c,
                gamma: T::parse_number(&s)?,
            }
        }
        Family::PairQI => ModelParams::PairQI {
            a,
            b,
            c,
            gamma12: need(&doc.gamma12, "gamma12")?,
            gamma13: need(&doc.gamma13, "gamma13")?,
            gamma23: need(&doc.gamma23, "gamma23")?,
        },
        Family::Mix => {
            let d = doc
                .d
                .as_ref()
                .ok_or_else(|| Error::Parse("missing field d".into()))?;
            ModelParams::Mix {
                alpha: need(&doc.alpha, "alpha")?,
                a,
                b,
                c,
                d: pv(d)?,
            }
        }
        Family::HomMix => ModelParams::HomMix {
            alpha: need(&doc.alpha, "alpha")?,
            a,
            b,
            c,
        },
        Family::PairMix => ModelParams::PairMix {
            alpha0: need(&doc.alpha0, "alpha0")?,
            alpha12: need(&doc.alpha12, "alpha12")?,
            alpha13: need(&doc.alpha13, "alpha13")?,
            alpha23: need(&doc.alpha23, "alpha23")?,
            alpha123: need(&doc.alpha123, "alpha123")?,
            a,
            b,
            c,
        },
    };
    if doc.n != params.n() {
        return Err(Error::Parse(format!(
            "declared n={} but vectors have length {}",
            doc.n,
            params.n()
        )));
    }
    params.validate()?;
    Ok(params)
}

/// Uniform marginal vector (1/n, ..., 1/n).
pub fn uniform_vec(n: usize) -> Vec<Rat> {
    vec![Rat::from_ratio(1, n as i64); n]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::from_ratio(n, d)
    }

    fn half_vec() -> Vec<Rat> {
        vec![r(1, 2), r(1, 2)]
    }

    #[test]
    fn hom_qi_uniform_gamma_one_is_uniform() {
        let p = ModelParams::HomQI {
            a: half_vec(),
            b: half_vec(),
            c: half_vec(),
            gamma: r(1, 1),
        }
        .materialize()
        .unwrap();
        for ((_, _, _), v) in p.as_tensor().iter_cells() {
            assert_eq!(*v, r(1, 8));
        }
    }

    #[test]
    fn mix_half_alpha_values() {
        let p = ModelParams::Mix {
            alpha: r(1, 2),
            a: half_vec(),
            b: half_vec(),
            c: half_vec(),
            d: half_vec(),
        }
        .materialize()
        .unwrap();
        assert_eq!(*p.get(1, 1, 1), r(5, 16));
        assert_eq!(*p.get(2, 2, 2), r(5, 16));
        assert_eq!(*p.get(1, 2, 1), r(1, 16));
    }

    #[test]
    fn pair_qi_gamma_three_values() {
        let p = ModelParams::PairQI {
            a: half_vec(),
            b: half_vec(),
            c: half_vec(),
            gamma12: r(3, 1),
            gamma13: r(3, 1),
            gamma23: r(3, 1),
        }
        .materialize()
        .unwrap();
        assert_eq!(*p.get(1, 1, 1), r(3, 8));
        assert_eq!(*p.get(1, 2, 2), r(1, 24));
        assert_eq!(*p.get(1, 1, 2), r(1, 24));
    }

    #[test]
    fn hom_qi_embeds_in_qi() {
        let opts = SampleOptions::default();
        for seed in 0..20 {
            let ModelParams::HomQI { a, b, c, gamma } =
                sample_params(Family::HomQI, 3, seed, &opts).unwrap()
            else {
                unreachable!()
            };
            let hom = ModelParams::HomQI {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
                gamma: gamma.clone(),
            }
            .materialize()
            .unwrap();
            let qi = ModelParams::QI {
                a,
                b,
                c,
                gamma: vec![gamma; 3],
            }
            .materialize()
            .unwrap();
            assert_eq!(hom, qi);
        }
    }

    #[test]
    fn hom_mix_embeds_in_mix() {
        let opts = SampleOptions::default();
        for seed in 0..20 {
            let ModelParams::HomMix { alpha, a, b, c } =
                sample_params(Family::HomMix, 3, seed, &opts).unwrap()
            else {
                unreachable!()
            };
            let hom = ModelParams::HomMix {
                alpha: alpha.clone(),
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
            }
            .materialize()
            .unwrap();
            let mix = ModelParams::Mix {
                alpha,
                a,
                b,
                c,
                d: uniform_vec(3),
            }
            .materialize()
            .unwrap();
            assert_eq!(hom, mix);
        }
    }

    #[test]
    fn pair_qi_unit_gammas_is_independence() {
        let opts = SampleOptions::default();
        for seed in 0..10 {
            let ModelParams::PairQI { a, b, c, .. } =
                sample_params(Family::PairQI, 3, seed, &opts).unwrap()
            else {
                unreachable!()
            };
            let one = r(1, 1);
            let p = ModelParams::PairQI {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
                gamma12: one.clone(),
                gamma13: one.clone(),
                gamma23: one,
            }
            .materialize()
            .unwrap();
            for ((i, j, k), v) in p.as_tensor().iter_cells() {
                // a, b, c are simplex points, so the product needs no rescaling.
                assert_eq!(*v, a[i - 1].clone() * b[j - 1].clone() * c[k - 1].clone());
            }
        }
    }

    #[test]
    fn toric_parameters_are_projective() {
        let ModelParams::QI { a, b, c, gamma } =
            sample_params(Family::QI, 3, 11, &SampleOptions::default()).unwrap()
        else {
            unreachable!()
        };
        let lhs = ModelParams::QI {
            a: a.iter().map(|x| x.clone() * r(7, 3)).collect(),
            b: b.clone(),
            c: c.clone(),
            gamma: gamma.clone(),
        }
        .materialize()
        .unwrap();
        let rhs = ModelParams::QI { a, b, c, gamma }.materialize().unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_mass_is_reported() {
        let err = ModelParams::HomQI {
            a: vec![r(0, 1), r(0, 1)],
            b: half_vec(),
            c: half_vec(),
            gamma: r(1, 1),
        }
        .materialize();
        assert!(matches!(err, Err(Error::ZeroMass)));
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let opts = SampleOptions::default();
        for family in Family::ALL {
            let p1 = sample_params(family, 4, 99, &opts).unwrap();
            let p2 = sample_params(family, 4, 99, &opts).unwrap();
            assert_eq!(p1, p2);
            let p3 = sample_params(family, 4, 100, &opts).unwrap();
            assert_ne!(p1, p3);
            p1.materialize().unwrap();
        }
    }

    #[test]
    fn simplex_draws_sum_exactly_to_one() {
        let opts = SampleOptions::default();
        for seed in 0..50 {
            let p = sample_params(Family::Mix, 5, seed, &opts).unwrap();
            let ModelParams::Mix { a, b, c, d, .. } = &p else {
                unreachable!()
            };
            for v in [a, b, c, d] {
                assert_eq!(vec_sum(v), r(1, 1));
                assert!(v.iter().all(|x| !x.is_negative() && !x.is_zero()));
            }
        }
    }

    #[test]
    fn params_json_round_trips() {
        let opts = SampleOptions::default();
        for family in Family::ALL {
            let p = sample_params(family, 3, 7, &opts).unwrap();
            let text = params_to_json(&p);
            let q: ModelParams<Rat> = params_from_json(&text).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn params_json_matches_documented_shape() {
        let p = ModelParams::PairQI {
            a: vec![r(1, 10), r(1, 10), r(4, 5)],
            b: vec![r(1, 15), r(2, 15), r(4, 5)],
            c: vec![r(1, 6), r(1, 6), r(2, 3)],
            gamma12: r(2, 1),
            gamma13: r(3, 1),
            gamma23: r(3, 2),
        };
        let text = params_to_json(&p);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["family"], "pQI");
        assert_eq!(v["n"], 3);
        assert_eq!(v["a"][0], "1/10");
        assert_eq!(v["gamma12"], "2");
        assert_eq!(v["gamma23"], "3/2");
    }

    #[test]
    fn family_names_round_trip() {
        for fam in Family::ALL {
            let parsed: Family = fam.name().parse().unwrap();
            assert_eq!(parsed, fam);
        }
        assert_eq!("pqi".parse::<Family>().unwrap(), Family::PairQI);
        assert_eq!("PMIX".parse::<Family>().unwrap(), Family::PairMix);
        assert!("qi".parse::<Family>().is_err());
        assert!("MIX".parse::<Family>().is_err());
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn float_backend_materializes_too() {
        let p = ModelParams::PairMix {
            alpha0: 0.3,
            alpha12: 0.3,
            alpha13: 0.1,
            alpha23: 0.1,
            alpha123: 0.2,
            a: vec![0.25; 4],
            b: vec![0.25; 4],
            c: vec![0.25; 4],
        }
        .materialize()
        .unwrap();
        let total: f64 = p.as_tensor().values().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
