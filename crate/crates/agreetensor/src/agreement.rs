//! Cohen's kappa for rater pairs, closed forms under uniform marginals, and
//! the kappa-map parameter sweeps.
//!
//! Sweeps are evaluated in exact rational arithmetic even though grid
//! coordinates and CSV payloads are floats: each f64 grid value is embedded as
//! the rational it exactly denotes, kappa is computed exactly, and the result
//! is projected to f64 once. Boundary zeros therefore come out exactly zero
//! instead of carrying sign noise, and repeated runs are byte-identical.

use crate::error::{Error, Result};
use crate::models::ModelParams;
use crate::scalar::{rat_to_f64, Rat, Scalar};
use crate::tensor::{Axis, ProbabilityTensor, TwoWayTable};
use num::rational::BigRational;

/// Chance-corrected agreement of a two-way table.
///
/// Computed in the scale-free form
/// `(s * sum_i M_ii - sum_i r_i c_i) / (s^2 - sum_i r_i c_i)` with `s` the
/// table total and `r`, `c` the row and column sums, which agrees with the
/// usual probability-table formula and is invariant under rescaling the
/// table.
pub fn cohen_kappa<T: Scalar>(table: &TwoWayTable<T>) -> Result<T> {
    let n = table.n();
    let s = table.total();
    let diag = table.diag_sum();
    let mut chance = T::zero();
    for i in 1..=n {
        chance += table.row_sum(i) * table.col_sum(i);
    }
    let denom = s.clone() * s.clone() - chance.clone();
    if denom.is_zero() {
        return Err(Error::DegenerateChance);
    }
    Ok((s * diag - chance) / denom)
}

/// Kappa values of the three rater pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaTriple<T> {
    pub kappa12: T,
    pub kappa13: T,
    pub kappa23: T,
}

impl<T: Scalar> KappaTriple<T> {
    pub fn to_f64(&self) -> KappaTriple<f64> {
        KappaTriple {
            kappa12: self.kappa12.to_f64(),
            kappa13: self.kappa13.to_f64(),
            kappa23: self.kappa23.to_f64(),
        }
    }
}

/// Kappa of each two-way marginal: raters (1,2) pair up when axis 3 is
/// summed away, and so on.
pub fn pairwise_kappas<T: Scalar>(p: &ProbabilityTensor<T>) -> Result<KappaTriple<T>> {
    Ok(KappaTriple {
        kappa12: cohen_kappa(&p.marginalize(Axis::Third))?,
        kappa13: cohen_kappa(&p.marginalize(Axis::Second))?,
        kappa23: cohen_kappa(&p.marginalize(Axis::First))?,
    })
}

/// Closed-form pairwise kappas of the pairwise quasi-independence model with
/// uniform marginal vectors.
///
/// With `g = g12*g13*g23` and `t = g + (n-1)(g12+g13+g23) + (n-1)(n-2)`,
/// `kappa12 = (g + (n-1) g12 - g13 - g23 - n + 2) / t`, and the other two
/// permute the roles. Equals the marginal-table kappa of the materialized
/// tensor exactly.
pub fn kappa_pqi_uniform<T: Scalar>(
    n: usize,
    gamma12: &T,
    gamma13: &T,
    gamma23: &T,
) -> Result<KappaTriple<T>> {
    if n < 2 {
        return Err(Error::UnsupportedN(n));
    }
    let nm1 = T::from_int(n as i64 - 1);
    let nm2 = T::from_int(n as i64 - 2);
    let g = gamma12.clone() * gamma13.clone() * gamma23.clone();
    let total = g.clone()
        + nm1.clone() * (gamma12.clone() + gamma13.clone() + gamma23.clone())
        + nm1.clone() * nm2.clone();
    if total.is_zero() {
        return Err(Error::ZeroMass);
    }
    let component = |own: &T, other1: &T, other2: &T| -> T {
        (g.clone() + nm1.clone() * own.clone() - other1.clone() - other2.clone() - nm2.clone())
            / total.clone()
    };
    Ok(KappaTriple {
        kappa12: component(gamma12, gamma13, gamma23),
        kappa13: component(gamma13, gamma12, gamma23),
        kappa23: component(gamma23, gamma12, gamma13),
    })
}

/// Closed-form pairwise kappas of the pairwise mixture model with uniform
/// marginal vectors: `kappa12 = alpha12 + alpha123` and cyclically, free of n.
pub fn kappa_pmix_uniform<T: Scalar>(
    alpha12: &T,
    alpha13: &T,
    alpha23: &T,
    alpha123: &T,
) -> KappaTriple<T> {
    KappaTriple {
        kappa12: alpha12.clone() + alpha123.clone(),
        kappa13: alpha13.clone() + alpha123.clone(),
        kappa23: alpha23.clone() + alpha123.clone(),
    }
}

/// One sweep grid point: coordinates, the kappa triple, or a flag for points
/// where kappa is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub coords: Vec<f64>,
    pub kappas: Option<[f64; 3]>,
    pub error: Option<String>,
}

/// Default agreement-weight grid: `10^(t/10)` for `t = 0..=20`.
pub fn default_gamma_grid() -> Vec<f64> {
    (0..=20).map(|t| 10f64.powf(t as f64 / 10.0)).collect()
}

/// Embeds the exact value of an f64 grid coordinate as a rational.
///
/// This is not a public float-to-rational conversion: it exists so sweep
/// evaluation can run exactly on the very numbers the grid denotes.
fn embed_f64(x: f64) -> Rat {
    BigRational::from_float(x).expect("finite grid coordinate")
}

/// Pairwise-quasi-independence sweep over a gamma grid (cube, lexicographic
/// order). `marginals` of None means uniform vectors, evaluated through the
/// closed form; explicit marginals go through exact materialization.
pub fn sweep_pqi(
    n: usize,
    marginals: Option<(&[Rat], &[Rat], &[Rat])>,
    grid: &[f64],
) -> Result<Vec<SweepRecord>> {
    if n < 2 {
        return Err(Error::UnsupportedN(n));
    }
    if let Some((a, b, c)) = marginals {
        if a.len() != n || b.len() != n || c.len() != n {
            return Err(Error::DimensionMismatch(
                "marginal vectors must have length n".into(),
            ));
        }
    }
    let mut out = Vec::with_capacity(grid.len().pow(3));
    for &g12 in grid {
        for &g13 in grid {
            for &g23 in grid {
                let (r12, r13, r23) = (embed_f64(g12), embed_f64(g13), embed_f64(g23));
                let kappas = match marginals {
                    None => kappa_pqi_uniform(n, &r12, &r13, &r23),
                    Some((a, b, c)) => ModelParams::PairQI {
                        a: a.to_vec(),
                        b: b.to_vec(),
                        c: c.to_vec(),
                        gamma12: r12,
                        gamma13: r13,
                        gamma23: r23,
                    }
                    .materialize()
                    .and_then(|p| pairwise_kappas(&p)),
                };
                let record = match kappas {
                    Ok(t) => SweepRecord {
                        coords: vec![g12, g13, g23],
                        kappas: Some([
                            rat_to_f64(&t.kappa12),
                            rat_to_f64(&t.kappa13),
                            rat_to_f64(&t.kappa23),
                        ]),
                        error: None,
                    },
                    Err(e) => SweepRecord {
                        coords: vec![g12, g13, g23],
                        kappas: None,
                        error: Some(e.to_string()),
                    },
                };
                out.push(record);
            }
        }
    }
    Ok(out)
}

/// Pairwise-mixture sweep over the step-1/10 feasible weight simplex, in
/// loop order alpha0, alpha12, alpha13, alpha23 with alpha123 the remainder.
/// Kappas are n-free (closed form), so `n` only validates the request.
pub fn sweep_pmix(n: usize) -> Result<Vec<SweepRecord>> {
    if n < 2 {
        return Err(Error::UnsupportedN(n));
    }
    let step = |t: i64| Rat::from_ratio(t, 10);
    let mut out = Vec::with_capacity(1001);
    for t0 in 0..=10i64 {
        for t12 in 0..=(10 - t0) {
            for t13 in 0..=(10 - t0 - t12) {
                for t23 in 0..=(10 - t0 - t12 - t13) {
                    let t123 = 10 - t0 - t12 - t13 - t23;
                    let kt = kappa_pmix_uniform(
                        &step(t12),
                        &step(t13),
                        &step(t23),
                        &step(t123),
                    );
                    out.push(SweepRecord {
                        coords: vec![
                            t0 as f64 / 10.0,
                            t12 as f64 / 10.0,
                            t13 as f64 / 10.0,
                            t23 as f64 / 10.0,
                            t123 as f64 / 10.0,
                        ],
                        kappas: Some([
                            rat_to_f64(&kt.kappa12),
                            rat_to_f64(&kt.kappa13),
                            rat_to_f64(&kt.kappa23),
                        ]),
                        error: None,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Rounds to 10 significant digits, trimming trailing zeros. Zero prints as
/// `0`; negative zero is normalized away.
pub fn format_sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let prec = (9 - exp).clamp(0, 30) as usize;
    let s = format!("{x:.prec$}");
    let trimmed = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed
    }
}

/// Renders sweep records as CSV: coordinate columns, three kappa columns,
/// and an error column (empty on clean rows; kappas empty on flagged rows).
pub fn sweep_to_csv(coord_names: &[&str], records: &[SweepRecord]) -> String {
    let mut out = String::new();
    out.push_str(&coord_names.join(","));
    out.push_str(",kappa12,kappa13,kappa23,error\n");
    for rec in records {
        let mut fields: Vec<String> = rec.coords.iter().map(|&v| format_sig10(v)).collect();
        match &rec.kappas {
            Some([k12, k13, k23]) => {
                fields.push(format_sig10(*k12));
                fields.push(format_sig10(*k13));
                fields.push(format_sig10(*k23));
                fields.push(String::new());
            }
            None => {
                fields.extend([String::new(), String::new(), String::new()]);
                fields.push(rec.error.clone().unwrap_or_default());
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// CSV column names for the two sweep kinds.
pub const PQI_SWEEP_COORDS: [&str; 3] = ["g12", "g13", "g23"];
pub const PMIX_SWEEP_COORDS: [&str; 5] = ["a0", "a12", "a13", "a23", "a123"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{sample_params, Family, SampleOptions};
    use crate::tensor::Tensor;

    fn r(n: i64, d: i64) -> Rat {
        Rat::from_ratio(n, d)
    }

    #[test]
    fn kappa_of_documented_table() {
        let vals = [
            [r(5, 12), r(1, 12)],
            [r(1, 12), r(5, 12)],
        ];
        let table = TwoWayTable::from_fn(2, |i, j| vals[i - 1][j - 1].clone());
        assert_eq!(cohen_kappa(&table).unwrap(), r(2, 3));
    }

    #[test]
    fn kappa_is_scale_invariant() {
        let base = TwoWayTable::from_fn(3, |i, j| r((i * j + i) as i64, 100));
        let scaled = TwoWayTable::from_fn(3, |i, j| r((i * j + i) as i64 * 7, 100));
        assert_eq!(
            cohen_kappa(&base).unwrap(),
            cohen_kappa(&scaled).unwrap()
        );
    }

    #[test]
    fn degenerate_chance_is_flagged() {
        // All mass in one row and one column: chance agreement is 1.
        let table = TwoWayTable::from_fn(2, |i, j| if i == 1 && j == 1 { r(1, 1) } else { r(0, 1) });
        assert!(matches!(
            cohen_kappa(&table),
            Err(Error::DegenerateChance)
        ));
    }

    #[test]
    fn pqi_closed_form_spot_value() {
        let kt = kappa_pqi_uniform(2, &r(3, 1), &r(3, 1), &r(3, 1)).unwrap();
        assert_eq!(kt.kappa12, r(2, 3));
        assert_eq!(kt.kappa13, r(2, 3));
        assert_eq!(kt.kappa23, r(2, 3));
    }

    #[test]
    fn pqi_closed_form_matches_marginal_kappa() {
        for n in [2usize, 3, 5] {
            for seed in 0..25 {
                let p = sample_params(Family::PairQI, n, seed, &SampleOptions::default())
                    .unwrap();
                let ModelParams::PairQI {
                    gamma12,
                    gamma13,
                    gamma23,
                    ..
                } = &p
                else {
                    unreachable!()
                };
                let uniform = crate::models::uniform_vec(n);
                let with_uniform = ModelParams::PairQI {
                    a: uniform.clone(),
                    b: uniform.clone(),
                    c: uniform,
                    gamma12: gamma12.clone(),
                    gamma13: gamma13.clone(),
                    gamma23: gamma23.clone(),
                };
                match with_uniform.materialize() {
                    Ok(t) => {
                        let direct = pairwise_kappas(&t).unwrap();
                        let closed =
                            kappa_pqi_uniform(n, gamma12, gamma13, gamma23).unwrap();
                        assert_eq!(direct, closed);
                    }
                    Err(Error::ZeroMass) => {
                        assert!(matches!(
                            kappa_pqi_uniform(n, gamma12, gamma13, gamma23),
                            Err(Error::ZeroMass)
                        ));
                    }
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
        }
    }

    #[test]
    fn pmix_closed_form_spot_value() {
        let kt = kappa_pmix_uniform(&r(3, 10), &r(1, 10), &r(1, 10), &r(1, 5));
        assert_eq!(kt.kappa12, r(1, 2));
        assert_eq!(kt.kappa13, r(3, 10));
        assert_eq!(kt.kappa23, r(3, 10));
    }

    #[test]
    fn kappas_stay_in_range_on_samples() {
        let opts = SampleOptions::default();
        for family in Family::ALL {
            for seed in 0..20 {
                let params = sample_params(family, 3, seed, &opts).unwrap();
                let Ok(p) = params.materialize() else {
                    continue;
                };
                let Ok(kt) = pairwise_kappas(&p) else {
                    continue;
                };
                for k in [&kt.kappa12, &kt.kappa13, &kt.kappa23] {
                    assert!(*k >= r(-1, 1) && *k <= r(1, 1), "kappa out of range: {k:?}");
                }
            }
        }
    }

    #[test]
    fn grid_has_21_points_starting_at_one() {
        let g = default_gamma_grid();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 1.0);
        assert!((g[20] - 100.0).abs() < 1e-9);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn pqi_sweep_shape_and_range() {
        let grid = default_gamma_grid();
        let recs = sweep_pqi(2, None, &grid).unwrap();
        assert_eq!(recs.len(), 9261);
        for rec in &recs {
            let [k12, k13, k23] = rec.kappas.expect("no degenerate points on this grid");
            for k in [k12, k13, k23] {
                assert!((0.0..=1.0).contains(&k), "kappa out of [0,1]: {k}");
            }
        }
        // Independence corner: all kappas exactly zero.
        assert_eq!(recs[0].coords, vec![1.0, 1.0, 1.0]);
        assert_eq!(recs[0].kappas, Some([0.0, 0.0, 0.0]));
    }

    #[test]
    fn pmix_sweep_counts_and_rows() {
        let recs = sweep_pmix(2).unwrap();
        assert_eq!(recs.len(), 1001);
        let recs5 = sweep_pmix(5).unwrap();
        assert_eq!(recs, recs5);
        // Documented spot value: alpha12 = 3/10, alpha123 = 1/5.
        let target = recs
            .iter()
            .find(|r| r.coords == vec![0.3, 0.3, 0.1, 0.1, 0.2])
            .unwrap();
        let [k12, k13, k23] = target.kappas.unwrap();
        assert_eq!(k12, 0.5);
        // 1/10 + 2/10 is summed exactly before the one projection to f64,
        // so the column holds 0.3 rather than float-accumulation noise.
        assert_eq!(k13, 0.3);
        assert_eq!(k23, k13);
    }

    #[test]
    fn sig10_formatting() {
        assert_eq!(format_sig10(0.0), "0");
        assert_eq!(format_sig10(-0.0), "0");
        assert_eq!(format_sig10(1.0), "1");
        assert_eq!(format_sig10(100.0), "100");
        assert_eq!(format_sig10(0.5), "0.5");
        assert_eq!(format_sig10(2.0 / 3.0), "0.6666666667");
        assert_eq!(format_sig10(10f64.powf(0.1)), "1.258925412");
        assert_eq!(format_sig10(-2.0 / 3.0), "-0.6666666667");
        assert_eq!(format_sig10(1e-12), "0.000000000001");
    }

    #[test]
    fn csv_layout() {
        let recs = vec![
            SweepRecord {
                coords: vec![1.0, 1.0, 1.0],
                kappas: Some([0.0, 0.5, 1.0 / 3.0]),
                error: None,
            },
            SweepRecord {
                coords: vec![0.0, 0.0, 0.0],
                kappas: None,
                error: Some("total mass is zero; no normalized tensor exists".into()),
            },
        ];
        let csv = sweep_to_csv(&PQI_SWEEP_COORDS, &recs);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "g12,g13,g23,kappa12,kappa13,kappa23,error");
        assert_eq!(lines[1], "1,1,1,0,0.5,0.3333333333,");
        assert_eq!(
            lines[2],
            "0,0,0,,,,total mass is zero; no normalized tensor exists"
        );
    }

    #[test]
    fn marginal_kappa_example_tensor() {
        // gamma = 3 pairwise tensor at n = 2: marginal [[5/12,1/12],[1/12,5/12]].
        let p = ModelParams::PairQI {
            a: vec![r(1, 2); 2],
            b: vec![r(1, 2); 2],
            c: vec![r(1, 2); 2],
            gamma12: r(3, 1),
            gamma13: r(3, 1),
            gamma23: r(3, 1),
        }
        .materialize()
        .unwrap();
        let m = p.marginalize(Axis::Third);
        assert_eq!(*m.get(1, 1), r(5, 12));
        assert_eq!(*m.get(1, 2), r(1, 12));
        let kt = pairwise_kappas(&p).unwrap();
        assert_eq!(kt.kappa12, r(2, 3));
    }

    #[test]
    fn projective_kappa_handles_unnormalized_tables() {
        let w = Tensor::from_fn(2, |i, j, k| r((i + j + k) as i64, 1));
        let m = crate::tensor::marginalize_tensor(&w, Axis::Third);
        let p = ProbabilityTensor::from_unnormalized(w).unwrap();
        let normalized = cohen_kappa(&p.marginalize(Axis::Third)).unwrap();
        let raw = cohen_kappa(&m).unwrap();
        assert_eq!(normalized, raw);
    }
}
