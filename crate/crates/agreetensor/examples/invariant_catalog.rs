//! Walks the built-in polynomial catalogs: counts per family, the ten
//! homogeneous-quasi-independence quadrics at n = 2 in full, and an exact
//! vanishing check on seeded model points. Run with
//! `cargo run --example invariant_catalog`.

use agreetensor::invariants::{catalog, first_nonvanishing_homogeneous, SparsePolynomial};
use agreetensor::models::{sample_params, SampleOptions};
use agreetensor::scalar::{Rat, Scalar};
use agreetensor::{Family, Result, Tensor};

fn main() -> Result<()> {
    for family in [
        Family::QI,
        Family::Mix,
        Family::HomQI,
        Family::HomMix,
        Family::PairQI,
    ] {
        let polys = catalog(family, 2)?;
        println!("{} at n=2: catalog size {}", family, polys.len());
    }
    println!("QI at n=3: catalog size {}", catalog(Family::QI, 3)?.len());

    println!("\nthe ten qI invariants at n=2:");
    for p in catalog(Family::HomQI, 2)? {
        println!("  {p}");
    }

    // Each catalog vanishes identically on its own model: sample interior
    // parameter points and scan with exact rational arithmetic.
    println!();
    let opts = SampleOptions::default();
    for family in [
        Family::QI,
        Family::Mix,
        Family::HomQI,
        Family::HomMix,
        Family::PairQI,
    ] {
        let polys = catalog(family, 2)?;
        for seed in 0..10u64 {
            let p = sample_params(family, 2, seed, &opts)?.materialize()?;
            let hit = first_nonvanishing_homogeneous(&polys, p.as_tensor())?;
            assert!(hit.is_none(), "{family} invariant failed to vanish");
        }
        println!("{family} catalog vanishes exactly on 10 sampled points");
    }

    // A generic tensor is caught immediately: perturb one off-diagonal cell
    // of a model point and the scan reports a violated polynomial.
    let p = sample_params(Family::HomQI, 2, 0, &opts)?.materialize()?;
    let mut t: Tensor<Rat> = p.as_tensor().clone();
    let bumped = t.get(1, 2, 2).clone() + Rat::from_ratio(1, 100);
    t.set(1, 2, 2, bumped);
    let polys = catalog(Family::HomQI, 2)?;
    let witness: &SparsePolynomial =
        first_nonvanishing_homogeneous(&polys, &t)?.expect("perturbed point must violate");
    println!("\nperturbed point violates: {witness}");
    Ok(())
}
