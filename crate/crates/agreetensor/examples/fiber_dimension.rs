//! Counts linearly independent degree-d invariants by exact rank
//! computation over the rationals, including the checks that pin the
//! pairwise model's first interesting graded piece. Run with
//! `cargo run --example fiber_dimension`.

use agreetensor::invariants::fiber_dimension;
use agreetensor::{Error, Family, Result};

fn main() -> Result<()> {
    // The pairwise-coefficient model at n = 3 admits no quadric invariants
    // at all, then jumps to a 52-dimensional space of cubics.
    let quadrics = fiber_dimension(Family::PairQI, 3, 2)?;
    let cubics = fiber_dimension(Family::PairQI, 3, 3)?;
    println!("pQI, n=3: {quadrics} independent quadrics, {cubics} independent cubics");
    assert_eq!((quadrics, cubics), (0, 52));

    // The two-category diagonal-coefficient model has exactly the two
    // independence quadrics.
    let qi2 = fiber_dimension(Family::QI, 2, 2)?;
    println!("QI, n=2: {qi2} independent quadrics");
    assert_eq!(qi2, 2);

    println!("\ndegree table:");
    println!("  family  n  degree  dimension");
    for (family, n, degrees) in [
        (Family::QI, 2, &[2usize, 3][..]),
        (Family::HomQI, 2, &[2, 3]),
        (Family::PairQI, 2, &[2, 3, 4]),
        (Family::PairQI, 3, &[2, 3]),
    ] {
        for &d in degrees {
            println!("  {:6}  {n}  {d}       {}", family.name(), fiber_dimension(family, n, d)?);
        }
    }

    // The computation enumerates all monomials of the given degree, so its
    // cost is explicit up front and guarded by a budget.
    match fiber_dimension(Family::QI, 5, 4) {
        Err(Error::BudgetExceeded { needed, budget }) => {
            println!("\nQI, n=5, degree 4 refused: {needed} monomials exceed the budget of {budget}");
        }
        other => panic!("expected a budget refusal, got {other:?}"),
    }
    Ok(())
}
