//! Dimension of the degree-d graded piece of a toric model ideal, computed
//! by fibering all degree-d monomials over their parameter exponent images.

use crate::error::{Error, Result};
use crate::models::Family;
use itertools::Itertools;
use std::collections::HashMap;

/// Cap on the number of degree-d monomials enumerated by
/// [`fiber_dimension`].
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

/// C(m + d - 1, d), the number of degree-d monomials in m variables; `None`
/// when the value overflows u128 (then it certainly exceeds any budget).
fn monomial_count(m: u128, d: u128) -> Option<u128> {
    let mut num: u128 = 1;
    for step in 0..d {
        num = num.checked_mul(m.checked_add(step)?)?;
        // Divide as soon as divisible to limit growth: product of k
        // consecutive integers is divisible by k!.
        num /= step + 1;
    }
    Some(num)
}

/// The parameter exponent image of one monomial: per-axis value counts plus
/// the family's diagonal coefficient exponents. The normalization constant
/// contributes only total degree, which is fixed, so it is omitted.
fn exponent_image(family: Family, n: usize, cells: &[(u8, u8, u8)]) -> Vec<u16> {
    let extras = match family {
        Family::QI => n,
        Family::HomQI => 1,
        Family::PairQI => 3,
        _ => unreachable!("filtered by fiber_dimension"),
    };
    let mut key = vec![0u16; 3 * n + extras];
    for &(i, j, k) in cells {
        key[i as usize - 1] += 1;
        key[n + j as usize - 1] += 1;
        key[2 * n + k as usize - 1] += 1;
        let base = 3 * n;
        match family {
            Family::QI => {
                if i == j && j == k {
                    key[base + i as usize - 1] += 1;
                }
            }
            Family::HomQI => {
                if i == j && j == k {
                    key[base] += 1;
                }
            }
            Family::PairQI => {
                if i == j {
                    key[base] += 1;
                }
                if i == k {
                    key[base + 1] += 1;
                }
                if j == k {
                    key[base + 2] += 1;
                }
            }
            _ => unreachable!(),
        }
    }
    key
}

/// Counts the linearly independent degree-`degree` binomial relations of a
/// toric family: monomials with equal parameter exponent images take equal
/// values on every model tensor, so each fiber of size k contributes k - 1
/// to the graded piece. When no smaller degree has relations, this equals
/// the number of degree-`degree` minimal generators.
pub fn fiber_dimension(family: Family, n: usize, degree: usize) -> Result<u64> {
    if !matches!(family, Family::QI | Family::HomQI | Family::PairQI) {
        return Err(Error::UnsupportedFamily(format!(
            "{family}: fiber dimensions apply to the toric families QI, qI, pQI"
        )));
    }
    if n < 2 {
        return Err(Error::UnsupportedN(n));
    }
    let m = n.pow(3) as u128;
    let needed = monomial_count(m, degree as u128).unwrap_or(u128::MAX);
    if needed > DEFAULT_ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            needed,
            budget: DEFAULT_ENUMERATION_BUDGET,
        });
    }
    let mut cells = Vec::with_capacity(m as usize);
    for i in 1..=n as u8 {
        for j in 1..=n as u8 {
            for k in 1..=n as u8 {
                cells.push((i, j, k));
            }
        }
    }
    let mut fibers: HashMap<Vec<u16>, u64> = HashMap::new();
    for combo in cells.iter().copied().combinations_with_replacement(degree) {
        *fibers
            .entry(exponent_image(family, n, &combo))
            .or_insert(0) += 1;
    }
    Ok(fibers.values().map(|&k| k - 1).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_targets() {
        assert_eq!(fiber_dimension(Family::PairQI, 3, 2).unwrap(), 0);
        assert_eq!(fiber_dimension(Family::PairQI, 3, 3).unwrap(), 52);
        assert_eq!(fiber_dimension(Family::QI, 2, 2).unwrap(), 2);
    }

    #[test]
    fn degree_one_pieces_are_empty() {
        for family in [Family::QI, Family::HomQI, Family::PairQI] {
            for n in 2..=3 {
                assert_eq!(fiber_dimension(family, n, 1).unwrap(), 0);
            }
        }
    }

    #[test]
    fn qi2_degree2_fiber_is_the_independence_triple() {
        // The only nontrivial fiber at (QI, 2, 2) holds three monomials, so
        // the dimension 2 comes from a single fiber.
        assert_eq!(fiber_dimension(Family::QI, 2, 2).unwrap(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        // n=5, degree=4: C(128, 4) is about 10.6M, just over the cap.
        match fiber_dimension(Family::QI, 5, 4) {
            Err(Error::BudgetExceeded { needed, budget }) => {
                assert!(needed > budget);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn mixture_families_are_rejected() {
        assert!(matches!(
            fiber_dimension(Family::Mix, 2, 2),
            Err(Error::UnsupportedFamily(_))
        ));
        assert!(matches!(
            fiber_dimension(Family::PairMix, 2, 2),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn single_gamma_never_exceeds_per_class_relations() {
        // Collapsing per-class coefficients to one merges fibers, so the qI
        // dimension dominates the QI dimension at every degree.
        for d in 1..=3 {
            let qi = fiber_dimension(Family::QI, 2, d).unwrap();
            let hom = fiber_dimension(Family::HomQI, 2, d).unwrap();
            assert!(hom >= qi, "degree {d}: qI {hom} < QI {qi}");
        }
    }
}
