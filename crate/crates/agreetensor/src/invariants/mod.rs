//! Polynomial invariants of the agreement models: representation, fixed
//! catalogs, combinatorial generators, matrix criteria, and graded-piece
//! dimension counts.

pub mod catalog;
pub mod fiber;
pub mod generate;
pub mod matrices;
pub mod poly;

pub use catalog::{catalog, MAX_CATALOG_N};
pub use fiber::{fiber_dimension, DEFAULT_ENUMERATION_BUDGET};
pub use generate::{generate_mixn_invariants, generate_qin_invariants};
pub use matrices::{
    matrix_criterion, matrix_criterion_tetra, occurrence_matrix, sigma_set, MonomialMatrix,
    OccurrenceMatrix, SigmaVariant, MAX_SIGMA_DEGREE,
};
pub use poly::{read_polynomials, write_polynomials, Cell, Monomial, SparsePolynomial, Term};

use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};
use crate::tensor::Tensor;
use num::BigInt;
use num::Integer as _;
use num::One;
use num::Zero;
use rayon::prelude::*;
use std::collections::HashMap;

pub(crate) fn off_diagonal_cells(n: u8) -> Vec<Cell> {
    let mut out = Vec::with_capacity(usize::from(n).pow(3) - usize::from(n));
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if !(i == j && j == k) {
                    out.push(Cell::new(i, j, k));
                }
            }
        }
    }
    out
}

fn first_nonvanishing_in<'a, T: Scalar>(
    polys: &'a [SparsePolynomial],
    t: &Tensor<T>,
) -> Result<Option<(&'a SparsePolynomial, T)>> {
    let mut cache: HashMap<&Monomial, T> = HashMap::new();
    for poly in polys {
        let mut value = T::zero();
        for term in poly.terms() {
            let mv = match cache.get(&term.monomial) {
                Some(v) => v.clone(),
                None => {
                    let v = term.monomial.eval(t)?;
                    cache.insert(&term.monomial, v.clone());
                    v
                }
            };
            value += T::from_int(term.coeff) * mv;
        }
        if !value.is_zero() {
            return Ok(Some((poly, value)));
        }
    }
    Ok(None)
}

/// Evaluates every polynomial exactly at `t`, sharing monomial values across
/// the list, and returns the first one that fails to vanish (with its value).
/// `Ok(None)` means the whole list vanishes.
pub fn first_nonvanishing<'a, T: Scalar>(
    polys: &'a [SparsePolynomial],
    t: &Tensor<T>,
) -> Result<Option<(&'a SparsePolynomial, T)>> {
    const PAR_CHUNK: usize = 16_384;
    if polys.len() <= PAR_CHUNK {
        return first_nonvanishing_in(polys, t);
    }
    let hits: Vec<_> = polys
        .par_chunks(PAR_CHUNK)
        .map(|chunk| first_nonvanishing_in(chunk, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.into_iter().flatten().next())
}

/// Exact vanishing scan for lists of per-polynomial-homogeneous polynomials
/// (every term of one polynomial shares its degree), the shape of all
/// catalog and generated invariants. Homogeneity makes vanishing invariant
/// under scaling, so the tensor is cleared to integers once and each
/// polynomial evaluates from per-cell power tables in integer arithmetic.
/// Returns the first polynomial with a nonzero value, in list order.
pub fn first_nonvanishing_homogeneous<'a>(
    polys: &'a [SparsePolynomial],
    t: &Tensor<Rat>,
) -> Result<Option<&'a SparsePolynomial>> {
    let n = t.n();
    let mut max_exp = 1u32;
    for poly in polys {
        if usize::from(poly.max_index()) > n {
            return Err(Error::DimensionMismatch(format!(
                "{poly} indexes category {} but the tensor has n={n}",
                poly.max_index()
            )));
        }
        let degree = poly.degree();
        for term in poly.terms() {
            if term.monomial.degree() != degree {
                return Err(Error::InvalidParams(format!(
                    "{poly} is not homogeneous; exact scaling does not apply"
                )));
            }
            for (_, e) in term.monomial.factors() {
                max_exp = max_exp.max(*e);
            }
        }
    }

    // Clear denominators: entry -> numer * (D / denom) with D the common
    // denominator, then tabulate powers 0..=max_exp per cell.
    let mut denom = BigInt::one();
    for v in t.values() {
        denom = denom.lcm(v.denom());
    }
    let tables: Vec<Vec<BigInt>> = t
        .values()
        .iter()
        .map(|v| {
            let base = v.numer() * (&denom / v.denom());
            let mut powers = Vec::with_capacity(max_exp as usize + 1);
            powers.push(BigInt::one());
            for _ in 0..max_exp {
                powers.push(powers.last().unwrap() * &base);
            }
            powers
        })
        .collect();
    let cell_index =
        |c: &Cell| (usize::from(c.i) - 1) * n * n + (usize::from(c.j) - 1) * n + usize::from(c.k) - 1;
    let is_nonzero = |poly: &SparsePolynomial| -> bool {
        let mut value = BigInt::zero();
        for term in poly.terms() {
            let mut prod = BigInt::from(term.coeff);
            for (cell, e) in term.monomial.factors() {
                prod *= &tables[cell_index(cell)][*e as usize];
            }
            value += prod;
        }
        !value.is_zero()
    };

    const PAR_THRESHOLD: usize = 4_096;
    if polys.len() <= PAR_THRESHOLD {
        Ok(polys.iter().find(|p| is_nonzero(p)))
    } else {
        Ok(polys.par_iter().find_first(|p| is_nonzero(p)))
    }
}

/// Largest normalized float residual of the list at `t`; see
/// [`SparsePolynomial::evaluate_normalized`].
pub fn max_normalized_residual(polys: &[SparsePolynomial], t: &Tensor<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    for poly in polys {
        let r = poly.evaluate_normalized(t)?.abs();
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}
