//! Known invariant catalogs: fixed n = 2 lists for every family, plus the
//! index-change binomial construction for the QI/Mix families at larger n.

use super::off_diagonal_cells;
use super::poly::{Cell, Monomial, SparsePolynomial};
use crate::error::{Error, Result};
use crate::models::Family;
use itertools::Itertools;
use std::collections::BTreeMap;

/// The two quadrics cutting out the n = 2 diagonal-coefficient model (Mix
/// shares them: both models satisfy exactly these).
const QI2_CATALOG: &str = "\
P[1,2,1]*P[2,1,2] - P[1,1,2]*P[2,2,1]
P[1,2,2]*P[2,1,1] - P[1,2,1]*P[2,1,2]
";

/// The ten binomials of the n = 2 single-coefficient model.
const HOM_QI2_CATALOG: &str = "\
P[1,2,1]*P[2,1,2] - P[1,1,2]*P[2,2,1]
P[1,2,2]*P[2,1,1] - P[1,2,1]*P[2,1,2]
P[1,1,1]*P[2,1,2]*P[2,2,1]^2 - P[1,2,1]*P[2,1,1]^2*P[2,2,2]
P[1,1,1]*P[1,2,2]*P[2,2,1]^2 - P[1,2,1]^2*P[2,1,1]*P[2,2,2]
P[1,1,1]*P[2,1,2]^2*P[2,2,1] - P[1,1,2]*P[2,1,1]^2*P[2,2,2]
P[1,1,1]*P[1,2,2]^2*P[2,2,1] - P[1,1,2]*P[1,2,1]^2*P[2,2,2]
P[1,1,1]*P[1,2,2]*P[2,1,2]^2 - P[1,1,2]^2*P[2,1,1]*P[2,2,2]
P[1,1,1]*P[1,2,2]^2*P[2,1,2] - P[1,1,2]^2*P[1,2,1]*P[2,2,2]
P[1,1,1]*P[1,1,2]*P[2,2,1]^3 - P[1,2,1]^2*P[2,1,1]^2*P[2,2,2]
P[1,1,1]*P[1,2,2]*P[2,1,2]*P[2,2,1] - P[1,1,2]*P[1,2,1]*P[2,1,1]*P[2,2,2]
";

/// The ten generators of the n = 2 homogeneous mixture model: the two
/// independence quadrics, seven tetranomials, and one quartic tetranomial.
const HOM_MIX2_CATALOG: &str = "\
P[1,2,1]*P[2,1,2] - P[1,1,2]*P[2,2,1]
P[1,2,2]*P[2,1,1] - P[1,2,1]*P[2,1,2]
P[1,2,1]*P[2,1,1]^2 - P[1,1,1]*P[2,1,1]*P[2,2,1] - P[2,1,2]*P[2,2,1]^2 + P[2,1,1]*P[2,2,1]*P[2,2,2]
P[1,1,2]*P[2,1,1]^2 - P[1,1,1]*P[2,1,1]*P[2,1,2] - P[2,1,2]^2*P[2,2,1] + P[2,1,1]*P[2,1,2]*P[2,2,2]
P[1,2,1]^2*P[2,1,1] - P[1,1,1]*P[1,2,1]*P[2,2,1] - P[1,2,2]*P[2,2,1]^2 + P[1,2,1]*P[2,2,1]*P[2,2,2]
P[1,1,2]*P[1,2,1]*P[2,1,1] - P[1,1,1]*P[1,1,2]*P[2,2,1] - P[1,2,2]*P[2,1,2]*P[2,2,1] + P[1,1,2]*P[2,2,1]*P[2,2,2]
P[1,1,2]^2*P[2,1,1] - P[1,1,1]*P[1,1,2]*P[2,1,2] - P[1,2,2]*P[2,1,2]^2 + P[1,1,2]*P[2,1,2]*P[2,2,2]
P[1,1,2]*P[1,2,1]^2 - P[1,1,1]*P[1,2,1]*P[1,2,2] - P[1,2,2]^2*P[2,2,1] + P[1,2,1]*P[1,2,2]*P[2,2,2]
P[1,1,2]^2*P[1,2,1] - P[1,1,1]*P[1,1,2]*P[1,2,2] - P[1,2,2]^2*P[2,1,2] + P[1,1,2]*P[1,2,2]*P[2,2,2]
P[1,1,1]*P[1,1,2]*P[1,2,2]*P[2,1,2] + P[1,2,2]^2*P[2,1,2]^2 - P[1,1,2]^3*P[2,2,1] - P[1,1,2]*P[1,2,2]*P[2,1,2]*P[2,2,2]
";

/// The single quartic cutting out the n = 2 pairwise-coefficient model.
const PAIR_QI2_CATALOG: &str = "\
P[1,1,1]*P[1,2,2]*P[2,1,2]*P[2,2,1] - P[1,1,2]*P[1,2,1]*P[2,1,1]*P[2,2,2]
";

/// Largest n for which the index-change catalog is built; the list size
/// grows past a million binomials at n = 5.
pub const MAX_CATALOG_N: usize = 5;

fn parse_catalog(text: &str) -> Vec<SparsePolynomial> {
    super::poly::read_polynomials(text).expect("built-in catalog must parse")
}

/// Returns the known invariants of a family.
///
/// Fixed catalogs exist for every family at n = 2 (the pairwise mixture list
/// is empty: that model fills its ambient space). For QI and Mix at
/// 3 <= n <= 5 the list holds every binomial built from degree-2 and
/// degree-3 off-diagonal monomials by exchanging index positions, the two
/// families sharing one list. Catalogs are sound but make no completeness
/// claim beyond n = 2.
pub fn catalog(family: Family, n: usize) -> Result<Vec<SparsePolynomial>> {
    match (family, n) {
        (Family::QI | Family::Mix, 2) => Ok(parse_catalog(QI2_CATALOG)),
        (Family::HomQI, 2) => Ok(parse_catalog(HOM_QI2_CATALOG)),
        (Family::HomMix, 2) => Ok(parse_catalog(HOM_MIX2_CATALOG)),
        (Family::PairQI, 2) => Ok(parse_catalog(PAIR_QI2_CATALOG)),
        (Family::PairMix, 2) => Ok(Vec::new()),
        (Family::QI | Family::Mix, 3..=MAX_CATALOG_N) => Ok(index_change_catalog(n)),
        _ => Err(Error::UnsupportedFamily(format!(
            "{family} at n={n}: fixed catalogs cover n=2, index-change catalogs cover QI and Mix at 3 <= n <= {MAX_CATALOG_N}"
        ))),
    }
}

/// Key identifying an index-exchange orbit: per-axis value counts.
fn column_count_key(cells: &[Cell], n: usize) -> Vec<u8> {
    let mut key = vec![0u8; 3 * n];
    for c in cells {
        key[c.i as usize - 1] += 1;
        key[n + c.j as usize - 1] += 1;
        key[2 * n + c.k as usize - 1] += 1;
    }
    key
}

/// All binomials `m1 - m2` where m1 and m2 are distinct off-diagonal
/// monomials of degree 2 or 3 with identical per-axis value counts. Two
/// such monomials are always related by an index exchange, and the shared
/// counts make the difference vanish on every QI/Mix tensor.
fn index_change_catalog(n: usize) -> Vec<SparsePolynomial> {
    let cells = off_diagonal_cells(n as u8);
    let mut out = Vec::new();
    for degree in [2usize, 3] {
        let mut fibers: BTreeMap<Vec<u8>, Vec<Vec<Cell>>> = BTreeMap::new();
        for chosen in cells
            .iter()
            .copied()
            .combinations_with_replacement(degree)
        {
            fibers
                .entry(column_count_key(&chosen, n))
                .or_default()
                .push(chosen);
        }
        for monos in fibers.values() {
            for a in 0..monos.len() {
                for b in a + 1..monos.len() {
                    out.push(SparsePolynomial::binomial(
                        Monomial::from_cells(monos[a].iter().copied()),
                        Monomial::from_cells(monos[b].iter().copied()),
                    ));
                }
            }
        }
    }
    out.sort();
    out
}
