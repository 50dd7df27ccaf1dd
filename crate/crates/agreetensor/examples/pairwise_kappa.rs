//! Computes the three pairwise Cohen's kappas of a probability tensor: each
//! rater pair's two-way marginal table is formed by summing out the third
//! axis, then chance-corrected agreement is read off that table. All
//! arithmetic is exact. Run with `cargo run --example pairwise_kappa`.

use agreetensor::agreement::{cohen_kappa, pairwise_kappas};
use agreetensor::models::ModelParams;
use agreetensor::scalar::{Rat, Scalar};
use agreetensor::tensor::{marginalize_tensor, Axis};
use agreetensor::Result;

fn r(num: i64, den: i64) -> Rat {
    Rat::from_ratio(num, den)
}

fn show(label: &str, k: &Rat) {
    println!("  {label} = {} ({:.6})", k.format_number(), Scalar::to_f64(k));
}

fn main() -> Result<()> {
    // Three raters, two categories, exact probabilities.
    let p = ModelParams::QI {
        a: vec![r(1, 4), r(3, 4)],
        b: vec![r(2, 5), r(3, 5)],
        c: vec![r(1, 2), r(1, 2)],
        gamma: vec![r(5, 1), r(1, 2)],
    }
    .materialize()?;

    let triple = pairwise_kappas(&p)?;
    println!("pairwise kappas of a two-category tensor:");
    show("kappa12", &triple.kappa12);
    show("kappa13", &triple.kappa13);
    show("kappa23", &triple.kappa23);

    // The kappa12 value is the kappa of the raters-1-and-2 marginal table.
    let table = marginalize_tensor(p.as_tensor(), Axis::Third);
    assert_eq!(cohen_kappa(&table)?, triple.kappa12);
    println!("kappa12 agrees with the kappa of the axis-3 marginal table: ok");

    // Independence gives kappa = 0 on every pair; perfect agreement with
    // uniform diagonal gives kappa = 1.
    let independent = ModelParams::HomQI {
        a: vec![r(1, 3), r(1, 3), r(1, 3)],
        b: vec![r(1, 6), r(1, 3), r(1, 2)],
        c: vec![r(1, 2), r(1, 4), r(1, 4)],
        gamma: Scalar::one(),
    }
    .materialize()?;
    let at_zero = pairwise_kappas(&independent)?;
    assert!(at_zero.kappa12.is_zero() && at_zero.kappa13.is_zero() && at_zero.kappa23.is_zero());
    println!("independence tensor: all three kappas are exactly 0");

    let perfect = agreetensor::geometry::boundary_counterexample(
        agreetensor::geometry::BoundaryDirection::MixNotInQI,
        3,
    )?
    .0;
    let at_one = pairwise_kappas(&perfect)?;
    assert_eq!(at_one.kappa12, Scalar::one());
    println!("uniform diagonal tensor: all three kappas are exactly 1");
    Ok(())
}
