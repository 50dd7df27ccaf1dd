//! Sparse polynomials in the cell variables P[i,j,k] with integer
//! coefficients, exact evaluation, and a line-oriented text format.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use std::cmp::Ordering;
use std::fmt;

/// A cell variable index (1-based, one digit per rater).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub i: u8,
    pub j: u8,
    pub k: u8,
}

impl Cell {
    pub fn new(i: u8, j: u8, k: u8) -> Cell {
        assert!(i >= 1 && j >= 1 && k >= 1, "cell indices are 1-based");
        Cell { i, j, k }
    }

    pub fn is_diagonal(self) -> bool {
        self.i == self.j && self.j == self.k
    }

    pub fn max_index(self) -> u8 {
        self.i.max(self.j).max(self.k)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[{},{},{}]", self.i, self.j, self.k)
    }
}

/// Product of cell variables with positive exponents, kept sorted by cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Cell, u32)>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Cell, u32)>) -> Monomial {
        let mut map = std::collections::BTreeMap::new();
        for (cell, exp) in factors {
            if exp > 0 {
                *map.entry(cell).or_insert(0u32) += exp;
            }
        }
        Monomial {
            factors: map.into_iter().collect(),
        }
    }

    pub fn from_cells(cells: impl IntoIterator<Item = Cell>) -> Monomial {
        Monomial::from_factors(cells.into_iter().map(|c| (c, 1)))
    }

    pub fn factors(&self) -> &[(Cell, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_of(&self, cell: Cell) -> u32 {
        self.factors
            .iter()
            .find(|(c, _)| *c == cell)
            .map_or(0, |(_, e)| *e)
    }

    pub fn max_index(&self) -> u8 {
        self.factors
            .iter()
            .map(|(c, _)| c.max_index())
            .max()
            .unwrap_or(1)
    }

    pub fn is_coprime_with(&self, other: &Monomial) -> bool {
        self.factors
            .iter()
            .all(|(c, _)| other.degree_of(*c) == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_factors(
            self.factors
                .iter()
                .chain(other.factors.iter())
                .map(|&(c, e)| (c, e)),
        )
    }

    /// Cells listed with multiplicity, in sorted order.
    pub fn expanded_cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for &(c, e) in &self.factors {
            for _ in 0..e {
                out.push(c);
            }
        }
        out
    }

    pub fn eval<T: Scalar>(&self, t: &Tensor<T>) -> Result<T> {
        if usize::from(self.max_index()) > t.n() {
            return Err(Error::DimensionMismatch(format!(
                "monomial mentions index {} but tensor has n={}",
                self.max_index(),
                t.n()
            )));
        }
        let mut acc = T::one();
        for &(c, e) in &self.factors {
            let v = t.get(c.i as usize, c.j as usize, c.k as usize);
            acc = acc * v.powu(e);
        }
        Ok(acc)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order with earlier cells ranking higher: degree
    /// first, then the exponent vectors compared variable by variable in
    /// cell order (so a monomial containing P[1,1,1] outranks one that does
    /// not, at equal degree).
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let mut a = self.factors.iter();
            let mut b = other.factors.iter();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((ca, ea)), Some((cb, eb))) => {
                        if ca != cb {
                            return if ca < cb {
                                Ordering::Greater
                            } else {
                                Ordering::Less
                            };
                        }
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                    }
                }
            }
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for &(c, e) in &self.factors {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{c}")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// One signed term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: i64,
    pub monomial: Monomial,
}

/// Canonical sum of terms: monomials strictly decreasing, no zero
/// coefficients, leading coefficient positive (polynomials are kept up to
/// overall sign so equal invariants compare equal).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    terms: Vec<Term>,
}

impl PartialOrd for SparsePolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SparsePolynomial {
    /// Total degree first, then the term sequences compared monomial-first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let a = self.terms.iter().map(|t| (&t.monomial, t.coeff));
            let b = other.terms.iter().map(|t| (&t.monomial, t.coeff));
            a.cmp(b)
        })
    }
}

impl SparsePolynomial {
    pub fn new(terms: impl IntoIterator<Item = (i64, Monomial)>) -> SparsePolynomial {
        let mut map: std::collections::BTreeMap<Monomial, i64> = std::collections::BTreeMap::new();
        for (coeff, monomial) in terms {
            *map.entry(monomial).or_insert(0) += coeff;
        }
        let mut terms: Vec<Term> = map
            .into_iter()
            .rev()
            .filter(|(_, c)| *c != 0)
            .map(|(monomial, coeff)| Term { coeff, monomial })
            .collect();
        if terms.first().is_some_and(|t| t.coeff < 0) {
            for t in &mut terms {
                t.coeff = -t.coeff;
            }
        }
        SparsePolynomial { terms }
    }

    /// The difference of two monomials.
    pub fn binomial(plus: Monomial, minus: Monomial) -> SparsePolynomial {
        SparsePolynomial::new([(1, plus), (-1, minus)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.monomial.degree()).max().unwrap_or(0)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.monomial)
    }

    pub fn max_index(&self) -> u8 {
        self.terms
            .iter()
            .map(|t| t.monomial.max_index())
            .max()
            .unwrap_or(1)
    }

    /// True when no diagonal variable P[i,i,i] occurs.
    pub fn omits_diagonal(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.monomial.factors().iter().all(|(c, _)| !c.is_diagonal()))
    }

    /// Exact evaluation at a tensor point. Fails when the polynomial mentions
    /// an index beyond the tensor's n.
    pub fn evaluate<T: Scalar>(&self, t: &Tensor<T>) -> Result<T> {
        if usize::from(self.max_index()) > t.n() {
            return Err(Error::DimensionMismatch(format!(
                "polynomial mentions index {} but tensor has n={}",
                self.max_index(),
                t.n()
            )));
        }
        let mut acc = T::zero();
        for term in &self.terms {
            acc += T::from_int(term.coeff) * term.monomial.eval(t)?;
        }
        Ok(acc)
    }

    /// Float evaluation divided by the scale `sum_t |coeff_t| * |m_t(P)|`,
    /// making residuals comparable across polynomials of different degrees.
    /// Returns 0 when the scale itself vanishes.
    pub fn evaluate_normalized(&self, t: &Tensor<f64>) -> Result<f64> {
        if usize::from(self.max_index()) > t.n() {
            return Err(Error::DimensionMismatch(format!(
                "polynomial mentions index {} but tensor has n={}",
                self.max_index(),
                t.n()
            )));
        }
        let mut value = 0.0;
        let mut scale = 0.0;
        for term in &self.terms {
            let m = term.monomial.eval(t)?;
            value += term.coeff as f64 * m;
            scale += term.coeff.unsigned_abs() as f64 * m.abs();
        }
        if scale == 0.0 {
            Ok(0.0)
        } else {
            Ok(value / scale)
        }
    }

    /// Parses the text format produced by [`Display`]: terms joined by `+`
    /// or `-`, each an optional integer coefficient times `P[i,j,k]^e`
    /// factors joined by `*`.
    pub fn parse(input: &str) -> Result<SparsePolynomial> {
        let input = input.trim();
        if input.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(i64, Monomial)> = Vec::new();
        let mut sign = 1i64;
        let mut rest = input;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        }
        loop {
            let split = find_top_level_sign(rest);
            let (term_text, next) = match split {
                Some(pos) => (&rest[..pos], Some(rest.split_at(pos))),
                None => (rest, None),
            };
            let (coeff, monomial) = parse_term(term_text.trim())?;
            terms.push((sign * coeff, monomial));
            match next {
                Some((_, tail)) => {
                    let mut chars = tail.chars();
                    sign = if chars.next() == Some('-') { -1 } else { 1 };
                    rest = chars.as_str().trim_start();
                }
                None => break,
            }
        }
        let poly = SparsePolynomial::new(terms);
        Ok(poly)
    }
}

fn find_top_level_sign(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    for (ix, &b) in bytes.iter().enumerate() {
        match b {
            b'[' => depth += 1,
            b']' => depth -= 1,
            b'+' | b'-' if depth == 0 && ix > 0 => {
                // Not part of an exponent or coefficient (format never emits
                // interior signs outside term separators).
                return Some(ix);
            }
            _ => {}
        }
    }
    None
}

fn parse_term(s: &str) -> Result<(i64, Monomial)> {
    if s.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let mut coeff = 1i64;
    let mut factors = Vec::new();
    for piece in s.split('*') {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(Error::Parse(format!("empty factor in term {s:?}")));
        }
        if let Some(rest) = piece.strip_prefix('P') {
            let rest = rest.trim();
            let (inside, exp_text) = match rest.split_once(']') {
                Some((head, tail)) => (
                    head.strip_prefix('[')
                        .ok_or_else(|| Error::Parse(format!("bad factor {piece:?}")))?,
                    tail.trim(),
                ),
                None => return Err(Error::Parse(format!("bad factor {piece:?}"))),
            };
            let idx: Vec<u8> = inside
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::Parse(format!("bad index in {piece:?}")))
                })
                .collect::<Result<_>>()?;
            if idx.len() != 3 || idx.iter().any(|&v| v == 0) {
                return Err(Error::Parse(format!("bad cell in {piece:?}")));
            }
            let exp = if exp_text.is_empty() {
                1u32
            } else {
                exp_text
                    .strip_prefix('^')
                    .and_then(|e| e.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad exponent in {piece:?}")))?
            };
            factors.push((Cell::new(idx[0], idx[1], idx[2]), exp));
        } else {
            let c: i64 = piece
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {piece:?}")))?;
            coeff = coeff
                .checked_mul(c)
                .ok_or_else(|| Error::Parse("coefficient overflow".into()))?;
        }
    }
    Ok((coeff, Monomial::from_factors(factors)))
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (ix, term) in self.terms.iter().enumerate() {
            let mag = term.coeff.unsigned_abs();
            if ix == 0 {
                if term.coeff < 0 {
                    f.write_str("-")?;
                }
            } else if term.coeff < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if mag != 1 || term.monomial.factors().is_empty() {
                write!(f, "{mag}")?;
                if !term.monomial.factors().is_empty() {
                    f.write_str("*")?;
                }
            }
            if !term.monomial.factors().is_empty() {
                write!(f, "{}", term.monomial)?;
            }
        }
        Ok(())
    }
}

/// Writes one polynomial per line.
pub fn write_polynomials(polys: &[SparsePolynomial]) -> String {
    let mut out = String::new();
    for p in polys {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

/// Reads one polynomial per line (blank lines and `#` comments skipped).
pub fn read_polynomials(input: &str) -> Result<Vec<SparsePolynomial>> {
    input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(SparsePolynomial::parse)
        .collect()
}
