//! Shows the combinatorial machinery behind the n = 2 generators: the index
//! matrix of a monomial with its column-shuffle set, the occurrence matrix,
//! and the two membership criteria (binomial and four-term). Run with
//! `cargo run --example matrix_criterion`.

use agreetensor::invariants::{
    catalog, matrix_criterion, matrix_criterion_tetra, occurrence_matrix, sigma_set, Cell,
    Monomial, MonomialMatrix, SigmaVariant,
};
use agreetensor::{Error, Family, Result};

fn mono(cells: &[(u8, u8, u8)]) -> Monomial {
    Monomial::from_cells(cells.iter().map(|&(i, j, k)| Cell::new(i, j, k)))
}

fn main() -> Result<()> {
    // Index matrix and its shuffles. Each row is one variable occurrence;
    // shuffling columns independently (keeping row order immaterial) yields
    // the candidates paired with the original to form binomial invariants.
    let f = mono(&[(1, 1, 2), (2, 2, 1)]);
    let a = MonomialMatrix::from_monomial(&f);
    println!("monomial {f} has index matrix rows {:?}", a.rows());
    println!("  constant rows (rho): {}", a.rho());
    for variant in [SigmaVariant::Preserve, SigmaVariant::NonIncrease] {
        let shuffles = sigma_set(&a, variant)?;
        let monos: Vec<String> = shuffles.iter().map(|m| m.to_monomial().to_string()).collect();
        println!("  sigma set ({variant:?}): {}", monos.join(", "));
    }

    // Occurrence matrix: row v, column s counts appearances of value v in
    // index position s.
    println!("\noccurrence matrices:");
    for m in [mono(&[(1, 1, 2), (2, 2, 1)]), mono(&[(1, 2, 1), (2, 1, 2)])] {
        println!("  {m}: {:?}", occurrence_matrix(&m, 2)?.rows());
    }

    // Binomial criterion: f - g lies in the single-coefficient model ideal
    // exactly when the occurrence matrices agree (under the coprimality and
    // extreme-diagonal hypotheses).
    let g = mono(&[(1, 2, 1), (2, 1, 2)]);
    println!("\nbinomial criterion:");
    println!("  {f} - ({g}): {}", matrix_criterion(&f, &g, 2)?);
    let f2 = mono(&[(1, 1, 2), (1, 1, 2)]);
    println!("  {f2} - ({g}): {}", matrix_criterion(&f2, &g, 2)?);
    assert!(matrix_criterion(&f, &g, 2)?);
    assert!(!matrix_criterion(&f2, &g, 2)?);

    // The hypotheses are checked, not assumed.
    let overlap = mono(&[(1, 1, 2), (2, 1, 2)]);
    match matrix_criterion(&overlap, &g, 2) {
        Err(Error::HypothesisViolated(msg)) => println!("  shared variable rejected: {msg}"),
        other => panic!("expected hypothesis violation, got {other:?}"),
    }

    // Four-term criterion, fed from an actual mixture-model generator:
    // h - f + g - w with f holding the all-ones diagonal cell and g the
    // all-twos one.
    let tetra = &catalog(Family::HomMix, 2)?[2];
    println!("\nfour-term criterion on: {tetra}");
    let p111 = Cell::new(1, 1, 1);
    let p222 = Cell::new(2, 2, 2);
    let pick = |pred: &dyn Fn(&Monomial) -> bool| -> Monomial {
        tetra
            .terms()
            .iter()
            .map(|t| t.monomial.clone())
            .find(|m| pred(m))
            .expect("term present")
    };
    let f = pick(&|m| m.degree_of(p111) == 1);
    let g = pick(&|m| m.degree_of(p222) == 1);
    let rest: Vec<Monomial> = tetra
        .terms()
        .iter()
        .map(|t| t.monomial.clone())
        .filter(|m| m.degree_of(p111) == 0 && m.degree_of(p222) == 0)
        .collect();
    let ok = matrix_criterion_tetra(&f, &g, &rest[0], &rest[1], 2)?;
    println!("  f = {f}\n  g = {g}\n  h = {}\n  w = {}\n  member: {ok}", rest[0], rest[1]);
    assert!(ok);
    Ok(())
}
