//! Fits models to synthetic count data: iterative proportional fitting for
//! a toric family and expectation-maximization for a mixture family, each
//! recovering the parameters that generated the counts. Run with
//! `cargo run --example fit_counts`.

use agreetensor::estimation::{DEFAULT_EM_TOL, DEFAULT_IPF_TOL, DEFAULT_MAX_ITER};
use agreetensor::models::{params_from_json, uniform_vec, ModelParams};
use agreetensor::{em_fit, ipf_fit, CountTensor, Family, Rat, Result, Scalar};

fn r(num: i64, den: i64) -> Rat {
    Rat::from_ratio(num, den)
}

fn main() -> Result<()> {
    // Ground truth for the toric fit comes from the skewed-marginals
    // parameter file shipped with the crate.
    let json = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/skewed_marginals.json"
    ))?;
    let truth = params_from_json::<Rat>(&json)?;
    let p = truth.materialize()?;
    let counts = CountTensor::from_rounded(&p.to_f64(), 1_000_000)?;
    println!("IPF on {} rounded draws from a pQI point:", counts.total());

    let fit = ipf_fit(&counts, Family::PairQI, DEFAULT_IPF_TOL, DEFAULT_MAX_ITER)?;
    println!("{}", fit.to_json());

    let max_err = (1..=3)
        .flat_map(|i| (1..=3).flat_map(move |j| (1..=3).map(move |k| (i, j, k))))
        .map(|(i, j, k)| {
            (fit.fitted.get(i, j, k) - Scalar::to_f64(p.get(i, j, k))).abs()
        })
        .fold(0.0f64, f64::max);
    println!("max entrywise distance from the generating tensor: {max_err:.2e}");
    assert!(max_err < 1e-3);

    if let ModelParams::PairQI { gamma12, gamma13, gamma23, .. } = &fit.params {
        println!(
            "recovered weights: gamma12 = {gamma12:.4} (true 2), gamma13 = {gamma13:.4} (true 3), gamma23 = {gamma23:.4} (true 3/2)"
        );
    }

    // EM on mixture counts: seventy percent independence, thirty percent
    // uniform diagonal.
    let truth = ModelParams::HomMix {
        alpha: r(7, 10),
        a: vec![r(1, 2), r(3, 10), r(1, 5)],
        b: uniform_vec(3),
        c: vec![r(1, 4), r(1, 4), r(1, 2)],
    };
    let p = truth.materialize()?;
    let counts = CountTensor::from_rounded(&p.to_f64(), 1_000_000)?;
    println!("\nEM on {} rounded draws from a mix point:", counts.total());
    let fit = em_fit(&counts, Family::HomMix, DEFAULT_EM_TOL, DEFAULT_MAX_ITER, 0)?;
    let ModelParams::HomMix { alpha, .. } = &fit.params else {
        unreachable!("family is fixed by the call");
    };
    println!(
        "recovered alpha = {alpha:.4} (true 0.7) in {} iterations, converged: {}",
        fit.iterations, fit.converged
    );
    assert!((alpha - 0.7).abs() < 0.02);

    // The likelihood trace never decreases; each EM step is a true ascent.
    let monotone = fit
        .loglik_trace
        .windows(2)
        .all(|w| w[1] >= w[0] - 1e-9);
    println!("log-likelihood trace is non-decreasing: {monotone}");
    assert!(monotone);
    Ok(())
}
