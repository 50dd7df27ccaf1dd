//! Matrix views of monomials: the t x 3 index matrix with its column
//! shuffles, and the 2 x 3 occurrence matrix driving the n = 2 membership
//! criteria.

use super::poly::{Cell, Monomial};
use crate::error::{Error, Result};

/// Maximum monomial degree accepted by [`sigma_set`]; the shuffle count
/// grows factorially with the number of rows.
pub const MAX_SIGMA_DEGREE: usize = 8;

/// The index matrix of a monomial: one `[i, j, k]` row per variable
/// occurrence (with multiplicity), rows sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialMatrix {
    rows: Vec<[u8; 3]>,
}

impl MonomialMatrix {
    pub fn from_rows(mut rows: Vec<[u8; 3]>) -> MonomialMatrix {
        assert!(
            rows.iter().all(|r| r.iter().all(|&v| v >= 1)),
            "matrix entries are 1-based indices"
        );
        rows.sort_unstable();
        MonomialMatrix { rows }
    }

    pub fn from_monomial(m: &Monomial) -> MonomialMatrix {
        MonomialMatrix::from_rows(
            m.expanded_cells()
                .into_iter()
                .map(|c| [c.i, c.j, c.k])
                .collect(),
        )
    }

    pub fn to_monomial(&self) -> Monomial {
        Monomial::from_cells(self.rows.iter().map(|r| Cell::new(r[0], r[1], r[2])))
    }

    pub fn rows(&self) -> &[[u8; 3]] {
        &self.rows
    }

    /// Number of rows, i.e. the degree of the underlying monomial.
    pub fn t(&self) -> usize {
        self.rows.len()
    }

    /// Number of constant rows `[i, i, i]`.
    pub fn rho(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r[0] == r[1] && r[1] == r[2])
            .count()
    }

    /// The three column value multisets, each sorted.
    pub fn column_multisets(&self) -> [Vec<u8>; 3] {
        let mut cols = [
            Vec::with_capacity(self.rows.len()),
            Vec::with_capacity(self.rows.len()),
            Vec::with_capacity(self.rows.len()),
        ];
        for r in &self.rows {
            for s in 0..3 {
                cols[s].push(r[s]);
            }
        }
        for c in &mut cols {
            c.sort_unstable();
        }
        cols
    }
}

/// Whether a column shuffle must keep the constant-row count fixed or may
/// only decrease it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaVariant {
    /// Same number of constant rows as the input.
    Preserve,
    /// At most as many constant rows as the input.
    NonIncrease,
}

/// All matrices obtained from `a` by permuting its three columns
/// independently, excluding anything row-equivalent to `a` itself and
/// filtering by the constant-row rule. Matrices are identified up to row
/// order, so fixing the first column in sorted position and ranging over the
/// arrangements of the other two columns covers every case. Output is sorted
/// and free of duplicates.
pub fn sigma_set(a: &MonomialMatrix, variant: SigmaVariant) -> Result<Vec<MonomialMatrix>> {
    let t = a.t();
    if t > MAX_SIGMA_DEGREE {
        return Err(Error::DegreeTooLarge(t, MAX_SIGMA_DEGREE));
    }
    let cols = a.column_multisets();
    let rho = a.rho();
    let perms2 = multiset_permutations(&cols[1]);
    let perms3 = multiset_permutations(&cols[2]);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for p2 in &perms2 {
        for p3 in &perms3 {
            let rows: Vec<[u8; 3]> = (0..t).map(|s| [cols[0][s], p2[s], p3[s]]).collect();
            let cand = MonomialMatrix::from_rows(rows);
            if cand.rows == a.rows {
                continue;
            }
            let ok = match variant {
                SigmaVariant::Preserve => cand.rho() == rho,
                SigmaVariant::NonIncrease => cand.rho() <= rho,
            };
            if ok && seen.insert(cand.clone()) {
                out.push(cand);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Distinct permutations of a multiset, in lexicographic order.
pub fn multiset_permutations(values: &[u8]) -> Vec<Vec<u8>> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mut counts: Vec<(u8, usize)> = Vec::new();
    for v in sorted {
        match counts.last_mut() {
            Some((u, c)) if *u == v => *c += 1,
            _ => counts.push((v, 1)),
        }
    }
    let total = values.len();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(total);
    fn rec(
        counts: &mut Vec<(u8, usize)>,
        cur: &mut Vec<u8>,
        total: usize,
        out: &mut Vec<Vec<u8>>,
    ) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for ix in 0..counts.len() {
            if counts[ix].1 == 0 {
                continue;
            }
            counts[ix].1 -= 1;
            cur.push(counts[ix].0);
            rec(counts, cur, total, out);
            cur.pop();
            counts[ix].1 += 1;
        }
    }
    rec(&mut counts, &mut cur, total, &mut out);
    out
}

/// Occurrence counts of index values inside a monomial: row `v-1`, column
/// `s` counts, with multiplicity, how often value `v` appears in index
/// position `s+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceMatrix {
    rows: Vec<[u32; 3]>,
}

impl OccurrenceMatrix {
    pub fn rows(&self) -> &[[u32; 3]] {
        &self.rows
    }
}

/// Builds the n-row occurrence matrix of a monomial whose indices all lie in
/// 1..=n.
pub fn occurrence_matrix(f: &Monomial, n: usize) -> Result<OccurrenceMatrix> {
    if usize::from(f.max_index()) > n {
        return Err(Error::DimensionMismatch(format!(
            "monomial mentions index {} but n={}",
            f.max_index(),
            n
        )));
    }
    let mut rows = vec![[0u32; 3]; n];
    for (cell, exp) in f.factors() {
        for (s, v) in [cell.i, cell.j, cell.k].into_iter().enumerate() {
            rows[(v - 1) as usize][s] += exp;
        }
    }
    Ok(OccurrenceMatrix { rows })
}

fn p111() -> Cell {
    Cell::new(1, 1, 1)
}

fn p222() -> Cell {
    Cell::new(2, 2, 2)
}

/// Binomial membership test for the n = 2 single-coefficient diagonal model:
/// for coprime monomials with matching extreme-diagonal degrees, `f - g`
/// lies in the model ideal exactly when the occurrence matrices agree.
pub fn matrix_criterion(f: &Monomial, g: &Monomial, n: usize) -> Result<bool> {
    if n != 2 {
        return Err(Error::UnsupportedN(n));
    }
    if f.max_index() > 2 || g.max_index() > 2 {
        return Err(Error::HypothesisViolated(
            "monomial indices must lie in {1, 2}".into(),
        ));
    }
    if !f.is_coprime_with(g) {
        return Err(Error::HypothesisViolated(
            "monomials must be coprime".into(),
        ));
    }
    if f.degree_of(p111()) != g.degree_of(p222()) {
        return Err(Error::HypothesisViolated(
            "degree of P[1,1,1] in f must equal degree of P[2,2,2] in g".into(),
        ));
    }
    Ok(occurrence_matrix(f, 2)? == occurrence_matrix(g, 2)?)
}

/// Four-monomial membership test for the n = 2 mixture model: decides
/// whether `h - f + g - w` lies in the model ideal. Hypotheses: `f` contains
/// P[1,1,1] exactly once and no P[2,2,2], `g` the reverse, `f` and `g` agree
/// away from those two variables, and `h`, `w` avoid both.
pub fn matrix_criterion_tetra(
    f: &Monomial,
    g: &Monomial,
    h: &Monomial,
    w: &Monomial,
    n: usize,
) -> Result<bool> {
    if n != 2 {
        return Err(Error::UnsupportedN(n));
    }
    for (name, m) in [("f", f), ("g", g), ("h", h), ("w", w)] {
        if m.max_index() > 2 {
            return Err(Error::HypothesisViolated(format!(
                "{name} has an index outside {{1, 2}}"
            )));
        }
    }
    if f.degree_of(p111()) != 1 || f.degree_of(p222()) != 0 {
        return Err(Error::HypothesisViolated(
            "f must contain P[1,1,1] exactly once and no P[2,2,2]".into(),
        ));
    }
    if g.degree_of(p222()) != 1 || g.degree_of(p111()) != 0 {
        return Err(Error::HypothesisViolated(
            "g must contain P[2,2,2] exactly once and no P[1,1,1]".into(),
        ));
    }
    let f_rest = Monomial::from_factors(
        f.factors()
            .iter()
            .filter(|(c, _)| *c != p111())
            .map(|&(c, e)| (c, e)),
    );
    let g_rest = Monomial::from_factors(
        g.factors()
            .iter()
            .filter(|(c, _)| *c != p222())
            .map(|&(c, e)| (c, e)),
    );
    if f_rest != g_rest {
        return Err(Error::HypothesisViolated(
            "f and g must agree apart from P[1,1,1] and P[2,2,2]".into(),
        ));
    }
    for (name, m) in [("h", h), ("w", w)] {
        if m.degree_of(p111()) != 0 || m.degree_of(p222()) != 0 {
            return Err(Error::HypothesisViolated(format!(
                "{name} must avoid P[1,1,1] and P[2,2,2]"
            )));
        }
    }
    let (fm, gm) = (occurrence_matrix(f, 2)?, occurrence_matrix(g, 2)?);
    let (hm, wm) = (occurrence_matrix(h, 2)?, occurrence_matrix(w, 2)?);
    Ok((hm == fm && wm == gm) || (hm == gm && wm == fm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::poly::SparsePolynomial;

    fn mono(text: &str) -> Monomial {
        let p = SparsePolynomial::parse(text).unwrap();
        assert_eq!(p.terms().len(), 1);
        p.terms()[0].monomial.clone()
    }

    #[test]
    fn matrix_round_trip_and_rho() {
        let m = mono("P[1,1,1]*P[2,1,2]*P[2,2,1]^2");
        let a = MonomialMatrix::from_monomial(&m);
        assert_eq!(
            a.rows(),
            &[[1, 1, 1], [2, 1, 2], [2, 2, 1], [2, 2, 1]]
        );
        assert_eq!(a.t(), 4);
        assert_eq!(a.rho(), 1);
        assert_eq!(a.to_monomial(), m);
    }

    #[test]
    fn sigma_preserves_column_multisets_and_rho() {
        let a = MonomialMatrix::from_monomial(&mono("P[1,1,1]*P[2,1,2]*P[2,2,1]^2"));
        let images = sigma_set(&a, SigmaVariant::Preserve).unwrap();
        assert!(!images.is_empty());
        for b in &images {
            assert_eq!(b.column_multisets(), a.column_multisets());
            assert_eq!(b.rho(), a.rho());
            assert_ne!(b, &a);
        }
        let relaxed = sigma_set(&a, SigmaVariant::NonIncrease).unwrap();
        assert!(relaxed.len() >= images.len());
        for b in &relaxed {
            assert!(b.rho() <= a.rho());
        }
        for b in &images {
            assert!(relaxed.contains(b));
        }
    }

    #[test]
    fn sigma_is_deterministic_and_sorted() {
        let a = MonomialMatrix::from_monomial(&mono("P[1,2,3]*P[2,3,1]*P[3,1,2]"));
        let one = sigma_set(&a, SigmaVariant::Preserve).unwrap();
        let two = sigma_set(&a, SigmaVariant::Preserve).unwrap();
        assert_eq!(one, two);
        let mut sorted = one.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, one);
    }

    #[test]
    fn sigma_degree_guard() {
        let rows = vec![[1, 2, 3]; 9];
        let a = MonomialMatrix::from_rows(rows);
        assert!(matches!(
            sigma_set(&a, SigmaVariant::Preserve),
            Err(Error::DegreeTooLarge(9, 8))
        ));
    }

    #[test]
    fn sigma_of_two_row_matrix_by_hand() {
        // Rows [1,1,2],[2,2,1]: shuffles reach [1,2,1],[2,1,2] and
        // [1,2,2],[2,1,1] with the constant-row count staying 0, while
        // [1,1,1],[2,2,2] raises it to 2 and is excluded by both variants.
        let a = MonomialMatrix::from_monomial(&mono("P[1,1,2]*P[2,2,1]"));
        let images = sigma_set(&a, SigmaVariant::Preserve).unwrap();
        let swapped = MonomialMatrix::from_monomial(&mono("P[1,2,1]*P[2,1,2]"));
        let swapped2 = MonomialMatrix::from_monomial(&mono("P[1,2,2]*P[2,1,1]"));
        let diag = MonomialMatrix::from_monomial(&mono("P[1,1,1]*P[2,2,2]"));
        assert!(images.contains(&swapped));
        assert!(images.contains(&swapped2));
        assert!(!images.contains(&diag));
        assert_eq!(images.len(), 2);
        let relaxed = sigma_set(&a, SigmaVariant::NonIncrease).unwrap();
        assert!(!relaxed.contains(&diag));
        assert_eq!(relaxed, images);
        // Starting from the diagonal matrix, the relaxed variant can lower
        // rho while the strict one cannot.
        let from_diag_strict = sigma_set(&diag, SigmaVariant::Preserve).unwrap();
        assert!(from_diag_strict.is_empty());
        let from_diag_relaxed = sigma_set(&diag, SigmaVariant::NonIncrease).unwrap();
        assert!(from_diag_relaxed.contains(&a));
        assert!(from_diag_relaxed.contains(&swapped));
        assert!(from_diag_relaxed.contains(&swapped2));
        assert_eq!(from_diag_relaxed.len(), 3);
    }

    #[test]
    fn sigma_of_single_offdiagonal_row_is_empty_under_preserve() {
        // One row [1,2,2]: the only shuffles are itself or reorderings that
        // keep the row, so nothing new appears.
        let a = MonomialMatrix::from_monomial(&mono("P[1,2,2]"));
        assert!(sigma_set(&a, SigmaVariant::Preserve).unwrap().is_empty());
    }

    #[test]
    fn occurrence_matrix_examples() {
        let f = mono("P[1,1,1]*P[2,1,2]*P[2,2,1]^2");
        let m = occurrence_matrix(&f, 2).unwrap();
        assert_eq!(m.rows(), &[[1, 2, 3], [3, 2, 1]]);
        let g = mono("P[1,2,1]*P[2,1,1]^2*P[2,2,2]");
        let mg = occurrence_matrix(&g, 2).unwrap();
        assert_eq!(mg.rows(), &[[1, 2, 3], [3, 2, 1]]);
        // Column sums recover the degree.
        for s in 0..3 {
            let total: u32 = m.rows().iter().map(|r| r[s]).sum();
            assert_eq!(total, 4);
        }
        assert!(occurrence_matrix(&f, 1).is_err());
        let wide = occurrence_matrix(&mono("P[1,3,2]"), 3).unwrap();
        assert_eq!(wide.rows(), &[[1, 0, 0], [0, 0, 1], [0, 1, 0]]);
    }

    #[test]
    fn binomial_criterion_accepts_known_invariant() {
        let f = mono("P[1,1,1]*P[2,1,2]*P[2,2,1]^2");
        let g = mono("P[1,2,1]*P[2,1,1]^2*P[2,2,2]");
        assert!(matrix_criterion(&f, &g, 2).unwrap());
    }

    #[test]
    fn binomial_criterion_rejects_mismatched_columns() {
        let f = mono("P[1,1,1]*P[2,1,2]");
        let g = mono("P[1,2,1]*P[2,2,2]");
        assert!(!matrix_criterion(&f, &g, 2).unwrap());
    }

    #[test]
    fn binomial_criterion_hypotheses() {
        let f = mono("P[1,1,1]*P[2,1,2]");
        assert!(matches!(
            matrix_criterion(&f, &f, 2),
            Err(Error::HypothesisViolated(_))
        ));
        let g = mono("P[1,2,1]*P[2,1,2]");
        assert!(matches!(
            matrix_criterion(&f, &g, 2),
            Err(Error::HypothesisViolated(_))
        ));
        let g2 = mono("P[1,2,1]*P[2,2,2]");
        assert!(matches!(
            matrix_criterion(&f, &g2, 3),
            Err(Error::UnsupportedN(3))
        ));
        let big = mono("P[1,3,1]*P[2,2,2]");
        assert!(matches!(
            matrix_criterion(&big, &g2, 2),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn tetra_criterion_accepts_known_invariant() {
        // h - f + g - w = P[1,2,1]*P[2,1,1]^2 - P[1,1,1]*P[2,1,1]*P[2,2,1]
        //                 + P[2,1,1]*P[2,2,1]*P[2,2,2] - P[2,1,2]*P[2,2,1]^2
        let f = mono("P[1,1,1]*P[2,1,1]*P[2,2,1]");
        let g = mono("P[2,1,1]*P[2,2,1]*P[2,2,2]");
        let h = mono("P[1,2,1]*P[2,1,1]^2");
        let w = mono("P[2,1,2]*P[2,2,1]^2");
        assert!(matrix_criterion_tetra(&f, &g, &h, &w, 2).unwrap());
    }

    #[test]
    fn tetra_criterion_accepts_quartic_with_swapped_match() {
        let f = mono("P[1,1,1]*P[1,1,2]*P[1,2,2]*P[2,1,2]");
        let g = mono("P[1,1,2]*P[1,2,2]*P[2,1,2]*P[2,2,2]");
        let h = mono("P[1,1,2]^3*P[2,2,1]");
        let w = mono("P[1,2,2]^2*P[2,1,2]^2");
        assert!(matrix_criterion_tetra(&f, &g, &h, &w, 2).unwrap());
        // Swapping h and w still matches through the crossed pairing.
        assert!(matrix_criterion_tetra(&f, &g, &w, &h, 2).unwrap());
    }

    #[test]
    fn tetra_criterion_rejects_unbalanced_quadruple() {
        let f = mono("P[1,1,1]*P[2,1,1]*P[2,2,1]");
        let g = mono("P[2,1,1]*P[2,2,1]*P[2,2,2]");
        let h = mono("P[1,2,1]*P[2,1,1]^2");
        let w = mono("P[1,2,1]*P[2,2,1]^2");
        assert_eq!(matrix_criterion_tetra(&f, &g, &h, &w, 2).unwrap(), false);
    }

    #[test]
    fn tetra_criterion_hypotheses() {
        let f = mono("P[1,1,1]*P[2,1,1]*P[2,2,1]");
        let g = mono("P[2,1,1]*P[2,2,1]*P[2,2,2]");
        let h = mono("P[1,2,1]*P[2,1,1]^2");
        let w = mono("P[2,1,2]*P[2,2,1]^2");
        // h mentioning an extreme diagonal variable breaks the setup.
        let bad_h = mono("P[1,1,1]*P[2,1,1]^2");
        assert!(matches!(
            matrix_criterion_tetra(&f, &g, &bad_h, &w, 2),
            Err(Error::HypothesisViolated(_))
        ));
        // f and g with different residuals break the setup.
        let bad_g = mono("P[2,1,1]^2*P[2,2,2]");
        assert!(matches!(
            matrix_criterion_tetra(&f, &bad_g, &h, &w, 2),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            matrix_criterion_tetra(&f, &g, &h, &w, 3),
            Err(Error::UnsupportedN(3))
        ));
    }

    #[test]
    fn multiset_permutation_counts() {
        assert_eq!(multiset_permutations(&[1, 2, 3]).len(), 6);
        assert_eq!(multiset_permutations(&[1, 1, 2]).len(), 3);
        assert_eq!(multiset_permutations(&[2, 2, 2]).len(), 1);
        assert_eq!(multiset_permutations(&[]).len(), 1);
    }
}
