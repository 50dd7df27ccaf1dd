//! Maximum-likelihood fitting of the families to observed count tensors:
//! iterative proportional fitting for the renormalized monomial families,
//! expectation-maximization for the mixtures.

use crate::error::{Error, Result};
use crate::models::{params_to_json, Family, ModelParams};
use crate::scalar::{Rat, Scalar};
use crate::tensor::{all_cells, read_tensor_text, ProbabilityTensor, Tensor};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stopping gap for the fitted sufficient statistics.
pub const DEFAULT_IPF_TOL: f64 = 1e-10;
/// Stopping gap for the log-likelihood increase.
pub const DEFAULT_EM_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Independent seeded starts per EM fit; the best final likelihood wins.
pub const DEFAULT_RESTARTS: usize = 5;

/// Observed joint rates: non-negative integer counts over the n^3 cells,
/// at least one positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTensor {
    n: usize,
    values: Vec<u64>,
    total: u64,
}

impl CountTensor {
    pub fn new(n: usize, values: Vec<u64>) -> Result<CountTensor> {
        if n < 2 {
            return Err(Error::UnsupportedN(n));
        }
        if values.len() != n * n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} counts, got {}",
                n * n * n,
                values.len()
            )));
        }
        let total: u64 = values.iter().sum();
        if total == 0 {
            return Err(Error::InvalidParams("all counts are zero".into()));
        }
        Ok(CountTensor { n, values, total })
    }

    /// Rounds `total * p` cellwise. The rounded total may differ slightly
    /// from the requested one; the struct records the actual sum.
    pub fn from_rounded(p: &ProbabilityTensor<f64>, total: u64) -> Result<CountTensor> {
        let values = p
            .as_tensor()
            .values()
            .iter()
            .map(|v| (total as f64 * v).round().max(0.0) as u64)
            .collect();
        CountTensor::new(p.n(), values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        let n = self.n;
        self.values[(i - 1) * n * n + (j - 1) * n + (k - 1)]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// The empirical probability tensor counts/N.
    pub fn to_probabilities(&self) -> ProbabilityTensor<f64> {
        let n = self.n;
        let total = self.total as f64;
        let t = Tensor::from_fn(n, |i, j, k| self.get(i, j, k) as f64 / total);
        ProbabilityTensor::from_unnormalized(t).expect("positive total")
    }

    /// Reads the tensor text format with integer entries.
    pub fn from_text(input: &str) -> Result<CountTensor> {
        let t: Tensor<Rat> = read_tensor_text(input)?;
        let mut values = Vec::with_capacity(t.values().len());
        for ((i, j, k), v) in t.iter_cells() {
            if v.is_negative() {
                return Err(Error::NegativeEntry(i, j, k));
            }
            if !v.is_integer() {
                return Err(Error::Parse(format!(
                    "count at ({i}, {j}, {k}) is not an integer: {}",
                    v.format_number()
                )));
            }
            let count = num::ToPrimitive::to_u64(&v.to_integer()).ok_or_else(|| {
                Error::Parse(format!("count at ({i}, {j}, {k}) exceeds u64"))
            })?;
            values.push(count);
        }
        CountTensor::new(t.n(), values)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for (i, j, k) in all_cells(self.n) {
            out.push_str(&format!("{i} {j} {k} {}\n", self.get(i, j, k)));
        }
        out
    }
}

/// Outcome of one fit: the parameter readout, the fitted probability
/// tensor, and the run diagnostics. `converged` is false when the iteration
/// cap was hit; the best iterate is still returned.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: ModelParams<f64>,
    pub fitted: ProbabilityTensor<f64>,
    pub loglik: f64,
    pub iterations: usize,
    pub converged: bool,
    pub warnings: Vec<String>,
    /// Per-iteration log-likelihood of the winning EM start; empty for IPF.
    pub loglik_trace: Vec<f64>,
}

impl FitResult {
    /// The parameter JSON with a `fit` metadata block appended.
    pub fn to_json(&self) -> String {
        let mut doc: serde_json::Value =
            serde_json::from_str(&params_to_json(&self.params)).expect("params json");
        doc["fit"] = serde_json::json!({
            "loglik": self.loglik,
            "iterations": self.iterations,
            "converged": self.converged,
            "warnings": self.warnings,
        });
        serde_json::to_string_pretty(&doc).expect("fit json")
    }
}

/// Multinomial log-likelihood sum N_ijk log P_ijk over the observed support.
pub fn loglik(counts: &CountTensor, p: &ProbabilityTensor<f64>) -> Result<f64> {
    if counts.n() != p.n() {
        return Err(Error::DimensionMismatch(format!(
            "counts have n={}, tensor has n={}",
            counts.n(),
            p.n()
        )));
    }
    let mut total = 0.0;
    for (i, j, k) in all_cells(counts.n()) {
        let nk = counts.get(i, j, k);
        if nk == 0 {
            continue;
        }
        let prob = *p.get(i, j, k);
        if prob <= 0.0 {
            return Err(Error::SupportMismatch(i, j, k));
        }
        total += nk as f64 * prob.ln();
    }
    Ok(total)
}

fn margin(t: &Tensor<f64>, axis: usize, v: usize) -> f64 {
    let n = t.n();
    let mut acc = 0.0;
    for (i, j, k) in all_cells(n) {
        if [i, j, k][axis] == v {
            acc += t.get(i, j, k);
        }
    }
    acc
}

fn slab_total(t: &Tensor<f64>, which: usize) -> f64 {
    let mut acc = 0.0;
    for (i, j, k) in all_cells(t.n()) {
        let hit = match which {
            12 => i == j,
            13 => i == k,
            _ => j == k,
        };
        if hit {
            acc += t.get(i, j, k);
        }
    }
    acc
}

fn diag_total(t: &Tensor<f64>) -> f64 {
    (1..=t.n()).map(|i| *t.get(i, i, i)).sum()
}

/// Fits a renormalized monomial family by cyclically rescaling a uniform
/// start to match each sufficient statistic of the data: the three one-way
/// margins always, plus each diagonal cell (`QI`), the diagonal total
/// (`qI`), or the three agreement-slab totals (`pQI`).
///
/// Stops when the largest statistic discrepancy drops below `tol`. A data
/// statistic that is exactly zero cannot be matched at finite parameters;
/// the fit zeroes those cells, records a warning, and proceeds on the
/// support.
pub fn ipf_fit(
    counts: &CountTensor,
    family: Family,
    tol: f64,
    max_iter: usize,
) -> Result<FitResult> {
    if !family.is_toric() {
        return Err(Error::UnsupportedFamily(format!(
            "{family}: IPF fits the renormalized monomial families; use em_fit"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParams("tol must be positive".into()));
    }
    let n = counts.n();
    let target = counts.to_probabilities();
    let target = target.as_tensor();
    let mut warnings = Vec::new();

    let target_margins: Vec<Vec<f64>> = (0..3)
        .map(|axis| (1..=n).map(|v| margin(target, axis, v)).collect())
        .collect();
    for (axis, vals) in target_margins.iter().enumerate() {
        for (ix, &m) in vals.iter().enumerate() {
            if m == 0.0 {
                warnings.push(format!(
                    "margin {} of axis {} is zero in the data; no finite parameters match it, fitting on the support",
                    ix + 1,
                    axis + 1
                ));
            }
        }
    }
    match family {
        Family::QI => {
            for i in 1..=n {
                if *target.get(i, i, i) == 0.0 && margin(target, 0, i) > 0.0 {
                    warnings.push(format!(
                        "diagonal cell ({i}, {i}, {i}) is zero in the data; its agreement weight is driven to the boundary"
                    ));
                }
            }
        }
        Family::HomQI => {
            if diag_total(target) == 0.0 {
                warnings.push(
                    "diagonal total is zero in the data; the agreement weight is driven to the boundary"
                        .into(),
                );
            }
        }
        Family::PairQI => {
            for which in [12, 13, 23] {
                if slab_total(target, which) == 0.0 {
                    warnings.push(format!(
                        "agreement slab {which} is zero in the data; its weight is driven to the boundary"
                    ));
                }
            }
        }
        _ => unreachable!(),
    }

    let cube = (n * n * n) as f64;
    let mut q = Tensor::new_fill(n, 1.0 / cube);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        for axis in 0..3 {
            for v in 1..=n {
                let cur = margin(&q, axis, v);
                if cur == 0.0 {
                    continue;
                }
                let r = target_margins[axis][v - 1] / cur;
                for (i, j, k) in all_cells(n) {
                    if [i, j, k][axis] == v {
                        let scaled = q.get(i, j, k) * r;
                        q.set(i, j, k, scaled);
                    }
                }
            }
        }
        match family {
            Family::QI => {
                // The statistic is the cell itself, so the rescale is a
                // direct assignment.
                for i in 1..=n {
                    if *q.get(i, i, i) > 0.0 {
                        q.set(i, i, i, *target.get(i, i, i));
                    }
                }
            }
            Family::HomQI => {
                let cur = diag_total(&q);
                if cur > 0.0 {
                    let r = diag_total(target) / cur;
                    for i in 1..=n {
                        let scaled = q.get(i, i, i) * r;
                        q.set(i, i, i, scaled);
                    }
                }
            }
            Family::PairQI => {
                for which in [12, 13, 23] {
                    let cur = slab_total(&q, which);
                    if cur == 0.0 {
                        continue;
                    }
                    let r = slab_total(target, which) / cur;
                    for (i, j, k) in all_cells(n) {
                        let hit = match which {
                            12 => i == j,
                            13 => i == k,
                            _ => j == k,
                        };
                        if hit {
                            let scaled = q.get(i, j, k) * r;
                            q.set(i, j, k, scaled);
                        }
                    }
                }
            }
            _ => unreachable!(),
        }

        let mut dev: f64 = 0.0;
        for axis in 0..3 {
            for v in 1..=n {
                dev = dev.max((margin(&q, axis, v) - target_margins[axis][v - 1]).abs());
            }
        }
        match family {
            Family::QI => {
                for i in 1..=n {
                    dev = dev.max((q.get(i, i, i) - target.get(i, i, i)).abs());
                }
            }
            Family::HomQI => {
                dev = dev.max((diag_total(&q) - diag_total(target)).abs());
            }
            Family::PairQI => {
                for which in [12, 13, 23] {
                    dev = dev.max((slab_total(&q, which) - slab_total(target, which)).abs());
                }
            }
            _ => unreachable!(),
        }
        if dev < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        warnings.push(format!(
            "statistic gap still above tol after {max_iter} iterations; returning the best iterate"
        ));
    }

    let fitted = ProbabilityTensor::from_unnormalized(q)?;
    let (params, extraction_warnings) = extract_toric_params(&fitted, family)?;
    warnings.extend(extraction_warnings);
    let ll = match loglik(counts, &fitted) {
        Ok(v) => v,
        Err(Error::SupportMismatch(i, j, k)) => {
            warnings.push(format!(
                "fitted tensor is zero at observed cell ({i}, {j}, {k}); log-likelihood is -inf"
            ));
            f64::NEG_INFINITY
        }
        Err(e) => return Err(e),
    };
    Ok(FitResult {
        params,
        fitted,
        loglik: ll,
        iterations,
        converged,
        warnings,
        loglik_trace: Vec::new(),
    })
}

/// Solves the square system by Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<f64>>, mut y: Vec<f64>) -> Option<Vec<f64>> {
    let m = y.len();
    for col in 0..m {
        let pivot_row = (col..m)
            .max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap())?;
        if a[pivot_row][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot_row);
        y.swap(col, pivot_row);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..m {
                a[row][c] -= f * a[col][c];
            }
            y[row] -= f * y[col];
        }
    }
    let mut x = vec![0.0; m];
    for row in (0..m).rev() {
        let mut acc = y[row];
        for c in row + 1..m {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Reads model parameters off a fitted tensor by least squares on the log
/// scale: one gauge per margin is fixed by pinning its last log-coordinate
/// to zero, the normal equations are solved directly and, when singular
/// (boundary fits knock out columns), with a tiny ridge. Coordinates whose
/// entire data slab vanished are set to zero afterwards.
fn extract_toric_params(
    fitted: &ProbabilityTensor<f64>,
    family: Family,
) -> Result<(ModelParams<f64>, Vec<String>)> {
    let n = fitted.n();
    let t = fitted.as_tensor();
    let za = 1;
    let zb = za + (n - 1);
    let zc = zb + (n - 1);
    let ze = zc + (n - 1);
    let extras = match family {
        Family::QI => n,
        Family::HomQI => 1,
        Family::PairQI => 3,
        _ => unreachable!(),
    };
    let m = ze + extras;

    let mut ata = vec![vec![0.0; m]; m];
    let mut aty = vec![0.0; m];
    for (i, j, k) in all_cells(n) {
        let v = *t.get(i, j, k);
        if v <= 0.0 {
            continue;
        }
        let mut row = vec![0.0; m];
        row[0] = 1.0;
        if i < n {
            row[za + i - 1] = 1.0;
        }
        if j < n {
            row[zb + j - 1] = 1.0;
        }
        if k < n {
            row[zc + k - 1] = 1.0;
        }
        match family {
            Family::QI => {
                if i == j && j == k {
                    row[ze + i - 1] = 1.0;
                }
            }
            Family::HomQI => {
                if i == j && j == k {
                    row[ze] = 1.0;
                }
            }
            Family::PairQI => {
                if i == j {
                    row[ze] += 1.0;
                }
                if i == k {
                    row[ze + 1] += 1.0;
                }
                if j == k {
                    row[ze + 2] += 1.0;
                }
            }
            _ => unreachable!(),
        }
        let logv = v.ln();
        for r in 0..m {
            if row[r] == 0.0 {
                continue;
            }
            aty[r] += row[r] * logv;
            for c in 0..m {
                ata[r][c] += row[r] * row[c];
            }
        }
    }

    let mut warnings = Vec::new();
    let x = match solve_linear(ata.clone(), aty.clone()) {
        Some(x) => x,
        None => {
            let mut ridged = ata;
            for r in 0..m {
                ridged[r][r] += 1e-12;
            }
            solve_linear(ridged, aty).ok_or_else(|| {
                Error::InvalidParams("parameter extraction system is singular".into())
            })?
        }
    };

    let coords = |base: usize, axis: usize| -> Vec<f64> {
        (1..=n)
            .map(|v| {
                if margin(t, axis, v) == 0.0 {
                    0.0
                } else if v < n {
                    x[base + v - 1].exp()
                } else {
                    1.0
                }
            })
            .collect()
    };
    let normalize = |mut v: Vec<f64>| -> Vec<f64> {
        let s: f64 = v.iter().sum();
        if s > 0.0 {
            for e in &mut v {
                *e /= s;
            }
        }
        v
    };
    let a = normalize(coords(za, 0));
    let b = normalize(coords(zb, 1));
    let c = normalize(coords(zc, 2));

    let params = match family {
        Family::QI => {
            let gamma = (1..=n)
                .map(|i| {
                    if *t.get(i, i, i) == 0.0 {
                        0.0
                    } else {
                        x[ze + i - 1].exp()
                    }
                })
                .collect();
            ModelParams::QI { a, b, c, gamma }
        }
        Family::HomQI => {
            let gamma = if diag_total(t) == 0.0 { 0.0 } else { x[ze].exp() };
            ModelParams::HomQI { a, b, c, gamma }
        }
        Family::PairQI => {
            let gs: Vec<f64> = (0..3)
                .zip([12, 13, 23])
                .map(|(ix, which)| {
                    if slab_total(t, which) == 0.0 {
                        0.0
                    } else {
                        x[ze + ix].exp()
                    }
                })
                .collect();
            ModelParams::PairQI {
                a,
                b,
                c,
                gamma12: gs[0],
                gamma13: gs[1],
                gamma23: gs[2],
            }
        }
        _ => unreachable!(),
    };
    let materialized = params.materialize()?;
    let residual = all_cells(n)
        .map(|(i, j, k)| (materialized.get(i, j, k) - t.get(i, j, k)).abs())
        .fold(0.0f64, f64::max);
    if residual > 1e-6 {
        warnings.push(format!(
            "parameter readout reproduces the fitted tensor only within {residual:.2e}"
        ));
    }
    Ok((params, warnings))
}

/// Which mixture components exist and where they put mass.
struct MixtureState {
    weights: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    /// Diagonal distribution; learned for `Mix`, fixed uniform otherwise.
    d: Vec<f64>,
}

impl MixtureState {
    /// Component densities at one cell, in weight order.
    fn densities(&self, family: Family, n: usize, i: usize, j: usize, k: usize) -> Vec<f64> {
        let ind = self.weights[0] * self.a[i - 1] * self.b[j - 1] * self.c[k - 1];
        match family {
            Family::Mix | Family::HomMix => {
                let diag = if i == j && j == k {
                    self.weights[1] * self.d[i - 1]
                } else {
                    0.0
                };
                vec![ind, diag]
            }
            Family::PairMix => {
                let nn = (n * n) as f64;
                let w12 = if i == j { self.weights[1] / nn } else { 0.0 };
                let w13 = if i == k { self.weights[2] / nn } else { 0.0 };
                let w23 = if j == k { self.weights[3] / nn } else { 0.0 };
                let w123 = if i == j && j == k {
                    self.weights[4] / n as f64
                } else {
                    0.0
                };
                vec![ind, w12, w13, w23, w123]
            }
            _ => unreachable!(),
        }
    }

    fn to_params(&self, family: Family) -> ModelParams<f64> {
        match family {
            Family::Mix => ModelParams::Mix {
                alpha: self.weights[0],
                a: self.a.clone(),
                b: self.b.clone(),
                c: self.c.clone(),
                d: self.d.clone(),
            },
            Family::HomMix => ModelParams::HomMix {
                alpha: self.weights[0],
                a: self.a.clone(),
                b: self.b.clone(),
                c: self.c.clone(),
            },
            Family::PairMix => ModelParams::PairMix {
                alpha0: self.weights[0],
                alpha12: self.weights[1],
                alpha13: self.weights[2],
                alpha23: self.weights[3],
                alpha123: self.weights[4],
                a: self.a.clone(),
                b: self.b.clone(),
                c: self.c.clone(),
            },
            _ => unreachable!(),
        }
    }
}

fn component_count(family: Family) -> usize {
    match family {
        Family::Mix | Family::HomMix => 2,
        Family::PairMix => 5,
        _ => unreachable!(),
    }
}

/// True when the component can put mass on the cell.
fn component_supports(family: Family, comp: usize, i: usize, j: usize, k: usize) -> bool {
    match (family, comp) {
        (_, 0) => true,
        (Family::Mix | Family::HomMix, 1) => i == j && j == k,
        (Family::PairMix, 1) => i == j,
        (Family::PairMix, 2) => i == k,
        (Family::PairMix, 3) => j == k,
        (Family::PairMix, 4) => i == j && j == k,
        _ => unreachable!(),
    }
}

struct Accumulators {
    comp: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
}

impl Accumulators {
    fn zero(k: usize, n: usize) -> Accumulators {
        Accumulators {
            comp: vec![0.0; k],
            a: vec![0.0; n],
            b: vec![0.0; n],
            c: vec![0.0; n],
            d: vec![0.0; n],
        }
    }

    fn add(&mut self, weight: f64, comp: usize, i: usize, j: usize, k: usize) {
        self.comp[comp] += weight;
        if comp == 0 {
            self.a[i - 1] += weight;
            self.b[j - 1] += weight;
            self.c[k - 1] += weight;
        } else if comp == 1 && i == j && j == k {
            self.d[i - 1] += weight;
        }
    }
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    if s <= 0.0 {
        vec![1.0 / v.len() as f64; v.len()]
    } else {
        v.iter().map(|x| x / s).collect()
    }
}

/// One M-step from the accumulated responsibilities.
fn m_step(state: &mut MixtureState, acc: &Accumulators, family: Family, warnings: &mut Vec<String>) {
    if acc.comp[0] <= 0.0 && !warnings.iter().any(|w| w.contains("independence")) {
        warnings.push(
            "independence component received no responsibility; its margins are left uniform"
                .into(),
        );
    }
    state.weights = normalized(&acc.comp);
    state.a = normalized(&acc.a);
    state.b = normalized(&acc.b);
    state.c = normalized(&acc.c);
    if family == Family::Mix {
        state.d = normalized(&acc.d);
    }
}

/// Fits a mixture family by expectation-maximization from seeded random
/// responsibilities, running [`DEFAULT_RESTARTS`] independent starts and
/// keeping the best final log-likelihood. The E-step splits each cell's
/// count across the components supported there; the M-step updates are
/// closed-form (weights from responsibility totals, margins from the
/// independence component, the diagonal distribution from the diagonal
/// component for `Mix`). The log-likelihood is non-decreasing; a decrease
/// beyond float noise reverts to the previous iterate and stops.
pub fn em_fit(
    counts: &CountTensor,
    family: Family,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<FitResult> {
    if family.is_toric() {
        return Err(Error::UnsupportedFamily(format!(
            "{family}: EM fits the mixture families; use ipf_fit"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParams("tol must be positive".into()));
    }
    let n = counts.n();
    let k = component_count(family);

    let mut best: Option<FitResult> = None;
    for restart in 0..DEFAULT_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        let mut warnings = Vec::new();

        // Initial M-step from random responsibilities on the support.
        let mut acc = Accumulators::zero(k, n);
        for (i, j, kk) in all_cells(n) {
            let nk = counts.get(i, j, kk);
            if nk == 0 {
                continue;
            }
            let raw: Vec<f64> = (0..k)
                .map(|comp| {
                    if component_supports(family, comp, i, j, kk) {
                        rng.gen_range(0.05..1.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            let s: f64 = raw.iter().sum();
            for (comp, r) in raw.iter().enumerate() {
                if *r > 0.0 {
                    acc.add(nk as f64 * r / s, comp, i, j, kk);
                }
            }
        }
        let mut state = MixtureState {
            weights: vec![1.0 / k as f64; k],
            a: vec![1.0 / n as f64; n],
            b: vec![1.0 / n as f64; n],
            c: vec![1.0 / n as f64; n],
            d: vec![1.0 / n as f64; n],
        };
        m_step(&mut state, &acc, family, &mut warnings);

        let mut trace: Vec<f64> = Vec::new();
        let mut prev_ll = f64::NEG_INFINITY;
        let mut prev_state: Option<MixtureState> = None;
        let mut converged = false;
        let mut iterations = 0;
        while iterations < max_iter {
            iterations += 1;
            let mut acc = Accumulators::zero(k, n);
            let mut ll = 0.0;
            let mut dead_support = None;
            for (i, j, kk) in all_cells(n) {
                let nk = counts.get(i, j, kk);
                if nk == 0 {
                    continue;
                }
                let dens = state.densities(family, n, i, j, kk);
                let p: f64 = dens.iter().sum();
                if p <= 0.0 {
                    dead_support = Some((i, j, kk));
                    break;
                }
                ll += nk as f64 * p.ln();
                for (comp, dv) in dens.iter().enumerate() {
                    if *dv > 0.0 {
                        acc.add(nk as f64 * dv / p, comp, i, j, kk);
                    }
                }
            }
            if let Some((i, j, kk)) = dead_support {
                warnings.push(format!(
                    "iterate lost the observed cell ({i}, {j}, {kk}); stopping this start"
                ));
                break;
            }
            if ll < prev_ll - 1e-9 {
                warnings.push(format!(
                    "log-likelihood decreased by {:.2e} at iteration {iterations}; reverting to the previous iterate",
                    prev_ll - ll
                ));
                if let Some(ps) = prev_state.take() {
                    state = ps;
                }
                converged = true;
                break;
            }
            trace.push(ll);
            if ll - prev_ll < tol && iterations > 1 {
                converged = true;
                break;
            }
            prev_ll = ll;
            prev_state = Some(MixtureState {
                weights: state.weights.clone(),
                a: state.a.clone(),
                b: state.b.clone(),
                c: state.c.clone(),
                d: state.d.clone(),
            });
            m_step(&mut state, &acc, family, &mut warnings);
        }
        if !converged {
            warnings.push(format!(
                "log-likelihood gap still above tol after {max_iter} iterations; returning the best iterate"
            ));
        }
        debug_assert!((state.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);

        let params = state.to_params(family);
        let fitted = params.materialize()?;
        let final_ll = match loglik(counts, &fitted) {
            Ok(v) => v,
            Err(Error::SupportMismatch(..)) => f64::NEG_INFINITY,
            Err(e) => return Err(e),
        };
        let candidate = FitResult {
            params,
            fitted,
            loglik: final_ll,
            iterations,
            converged,
            warnings,
            loglik_trace: trace,
        };
        let better = match &best {
            None => true,
            Some(cur) => candidate.loglik > cur.loglik,
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("at least one restart"))
}
