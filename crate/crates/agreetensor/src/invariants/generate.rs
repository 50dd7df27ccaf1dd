//! Combinatorial invariant generators for the single-coefficient and
//! homogeneous-mixture families, built from index-exchange images of
//! monomial matrices.
//!
//! Every emitted polynomial is an invariant (soundness is enforced per
//! candidate, symbolically where the construction alone does not already
//! guarantee it); no completeness is claimed. The enumeration is exhaustive
//! over the structural patterns, so list sizes grow steeply with n: n = 2
//! and 3 are cheap, n = 4 takes minutes and emits millions of binomials,
//! n = 5 is accepted but impractical for anything beyond sampling.

use super::matrices::{sigma_set, MonomialMatrix, SigmaVariant};
use super::off_diagonal_cells;
use super::poly::{Cell, Monomial, SparsePolynomial};
use crate::error::{Error, Result};
use itertools::Itertools;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap, HashSet};

type Row = [u8; 3];

fn is_diag_row(r: &Row) -> bool {
    r[0] == r[1] && r[1] == r[2]
}

/// Packs a sorted row list into one integer, 4 bits per index. Supports up
/// to five rows of indices below 16, which covers every monomial built here.
fn pack_rows(rows: &[Row]) -> u64 {
    debug_assert!(rows.len() <= 5);
    let mut v: u64 = 0;
    for r in rows {
        debug_assert!(r.iter().all(|&x| x >= 1 && x < 16));
        v = (v << 12) | (u64::from(r[0]) << 8) | (u64::from(r[1]) << 4) | u64::from(r[2]);
    }
    v
}

fn unpack_rows(mut v: u64) -> Vec<Row> {
    let mut rows = Vec::new();
    while v != 0 {
        let r = [
            ((v >> 8) & 0xf) as u8,
            ((v >> 4) & 0xf) as u8,
            (v & 0xf) as u8,
        ];
        rows.push(r);
        v >>= 12;
    }
    rows.reverse();
    rows
}

fn rows_to_monomial(rows: &[Row]) -> Monomial {
    Monomial::from_cells(rows.iter().map(|r| Cell::new(r[0], r[1], r[2])))
}

fn sorted_with(extra: &[Row], base: &[Cell]) -> Vec<Row> {
    let mut rows: Vec<Row> = base.iter().map(|c| [c.i, c.j, c.k]).collect();
    rows.extend_from_slice(extra);
    rows.sort_unstable();
    rows
}

fn canon_pair(a: u64, b: u64) -> (u64, u64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Binomial pairs (base, image) over sigma images of each base row list.
fn collect_sigma_pairs(
    bases: impl IntoIterator<Item = Vec<Row>>,
    variant: SigmaVariant,
) -> HashSet<(u64, u64)> {
    let bases: Vec<Vec<Row>> = bases.into_iter().collect();
    bases
        .into_par_iter()
        .fold(HashSet::new, |mut set: HashSet<(u64, u64)>, rows| {
            let a = MonomialMatrix::from_rows(rows);
            let packed = pack_rows(a.rows());
            for img in sigma_set(&a, variant).expect("generator degrees stay within bounds") {
                set.insert(canon_pair(packed, pack_rows(img.rows())));
            }
            set
        })
        .reduce(HashSet::new, |mut a, mut b| {
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
            }
            a.extend(b);
            a
        })
}

/// The witness condition of the diagonal-times-offdiagonal families: some
/// index a distinct from i appears in every index position across the
/// off-diagonal rows.
fn witness_exists(i: u8, rows: &[Row], n: u8) -> bool {
    (1..=n).any(|a| {
        a != i
            && rows.iter().any(|r| r[0] == a)
            && rows.iter().any(|r| r[1] == a)
            && rows.iter().any(|r| r[2] == a)
    })
}

fn check_n(n: usize) -> Result<u8> {
    if (2..=5).contains(&n) {
        Ok(n as u8)
    } else {
        Err(Error::UnsupportedN(n))
    }
}

/// Invariants of the single-coefficient diagonal model, in five structural
/// families: exchanges of two or three off-diagonal factors (constant-row
/// count preserved), and exchanges of a diagonal factor times two, three, or
/// four off-diagonal factors guarded by the witness condition. Distinctness
/// in the largest family is relaxed to two off-diagonal values so the full
/// known n = 2 list is reproduced. Output is sorted and deduplicated up to
/// sign.
pub fn generate_qin_invariants(n: usize) -> Result<Vec<SparsePolynomial>> {
    let n = check_n(n)?;
    let s = off_diagonal_cells(n);
    let mut pairs: HashSet<(u64, u64)> = HashSet::new();

    // Two distinct off-diagonal factors.
    pairs.extend(collect_sigma_pairs(
        s.iter().copied().combinations(2).map(|m| sorted_with(&[], &m)),
        SigmaVariant::Preserve,
    ));
    // Three off-diagonal factors, at least two distinct.
    pairs.extend(collect_sigma_pairs(
        s.iter()
            .copied()
            .combinations_with_replacement(3)
            .filter(|m| m.iter().collect::<HashSet<_>>().len() >= 2)
            .map(|m| sorted_with(&[], &m)),
        SigmaVariant::Preserve,
    ));
    // One diagonal factor times two, three, or four off-diagonal factors,
    // always with at least two distinct off-diagonal cells.
    for size in 2..=4usize {
        let mut bases: Vec<Vec<Row>> = Vec::new();
        for i in 1..=n {
            let d: Row = [i, i, i];
            for m in s.iter().copied().combinations_with_replacement(size) {
                if m.iter().collect::<HashSet<_>>().len() < 2 {
                    continue;
                }
                let rows: Vec<Row> = m.iter().map(|c| [c.i, c.j, c.k]).collect();
                if !witness_exists(i, &rows, n) {
                    continue;
                }
                bases.push(sorted_with(&[d], &m));
            }
        }
        pairs.extend(collect_sigma_pairs(bases, SigmaVariant::Preserve));
    }

    let mut out: Vec<SparsePolynomial> = pairs
        .into_par_iter()
        .map(|(a, b)| {
            SparsePolynomial::binomial(
                rows_to_monomial(&unpack_rows(a)),
                rows_to_monomial(&unpack_rows(b)),
            )
        })
        .collect();
    out.par_sort();
    out.dedup();
    Ok(out)
}

/// Column multisets of a row list, the exponent image over the three margin
/// parameter blocks.
fn col_multisets(rows: &[Row]) -> [Vec<u8>; 3] {
    let mut cols = [
        Vec::with_capacity(rows.len()),
        Vec::with_capacity(rows.len()),
        Vec::with_capacity(rows.len()),
    ];
    for r in rows {
        for s in 0..3 {
            cols[s].push(r[s]);
        }
    }
    for c in &mut cols {
        c.sort_unstable();
    }
    cols
}

/// Symbolic value key of one monomial under the homogeneous mixture: expand
/// the product of (margin term + diagonal term) over the rows and collect
/// the resulting (diagonal-factor count, margin column multisets) exponents.
/// Two row lists with equal keys have equal values on every model tensor.
type SymKey = (u32, [Vec<u8>; 3]);

fn symval(rows: &[Row]) -> Vec<(SymKey, i64)> {
    fn rec(
        rows: &[Row],
        idx: usize,
        beta: u32,
        abc: &mut Vec<Row>,
        acc: &mut BTreeMap<SymKey, i64>,
    ) {
        if idx == rows.len() {
            *acc.entry((beta, col_multisets(abc))).or_insert(0) += 1;
            return;
        }
        let r = rows[idx];
        abc.push(r);
        rec(rows, idx + 1, beta, abc, acc);
        abc.pop();
        if is_diag_row(&r) {
            rec(rows, idx + 1, beta + 1, abc, acc);
        }
    }
    let mut acc = BTreeMap::new();
    rec(rows, 0, 0, &mut Vec::with_capacity(rows.len()), &mut acc);
    acc.into_iter().collect()
}

/// True when the signed combination of monomials vanishes identically on the
/// homogeneous mixture model, checked by symbolic expansion.
fn vanishes_symbolically(terms: &[(i64, Vec<Row>)]) -> bool {
    let mut acc: BTreeMap<SymKey, i64> = BTreeMap::new();
    for (coeff, rows) in terms {
        for (key, mult) in symval(rows) {
            *acc.entry(key).or_insert(0) += coeff * mult;
        }
    }
    acc.values().all(|&v| v == 0)
}

/// Residue key of a sigma image of (diagonal row + off-diagonal block): the
/// symbolic difference base - image collapses to a signed pair of margin
/// exponent keys, and images with equal residues pair up across two diagonal
/// indices into vanishing four-term combinations.
type ResidueKey = Vec<([Vec<u8>; 3], i64)>;

fn residue_grouped_images(
    diag: Row,
    m_rows: &[Row],
) -> HashMap<ResidueKey, Vec<Vec<Row>>> {
    let mut rows = m_rows.to_vec();
    rows.push(diag);
    rows.sort_unstable();
    let base = MonomialMatrix::from_rows(rows);
    let s_m = col_multisets(m_rows);
    let mut groups: HashMap<ResidueKey, Vec<Vec<Row>>> = HashMap::new();
    for img in sigma_set(&base, SigmaVariant::NonIncrease)
        .expect("generator degrees stay within bounds")
    {
        let rho = img.rho();
        let key: ResidueKey = match rho {
            0 => vec![(s_m.clone(), 1)],
            1 => {
                let off: Vec<Row> = img
                    .rows()
                    .iter()
                    .copied()
                    .filter(|r| !is_diag_row(r))
                    .collect();
                let s_off = col_multisets(&off);
                if s_off == s_m {
                    Vec::new()
                } else {
                    let mut k = vec![(s_m.clone(), 1), (s_off, -1)];
                    k.sort();
                    k
                }
            }
            _ => continue,
        };
        groups.entry(key).or_default().push(img.rows().to_vec());
    }
    groups
}

/// Sigma images of (d1 d2 q) grouped by full symbolic value; used by the
/// eight-term family where the residue shortcut does not apply.
fn symval_grouped_images(d1: Row, d2: Row, q: Row) -> HashMap<Vec<(SymKey, i64)>, Vec<Vec<Row>>> {
    let base = MonomialMatrix::from_rows(vec![d1, d2, q]);
    let mut groups: HashMap<Vec<(SymKey, i64)>, Vec<Vec<Row>>> = HashMap::new();
    for img in sigma_set(&base, SigmaVariant::NonIncrease)
        .expect("generator degrees stay within bounds")
    {
        groups
            .entry(symval(img.rows()))
            .or_default()
            .push(img.rows().to_vec());
    }
    groups
}

fn poly_from_terms(terms: &[(i64, Vec<Row>)]) -> SparsePolynomial {
    SparsePolynomial::new(
        terms
            .iter()
            .map(|(coeff, rows)| (*coeff, rows_to_monomial(rows))),
    )
}

/// Invariants of the homogeneous mixture model, in seven structural
/// families: the off-diagonal exchange binomials, three four-term families
/// pairing a diagonal-times-block monomial and one exchange image across two
/// diagonal indices, one eight-term family and one twelve-term family over
/// triples of diagonal indices. Multi-term candidates are kept only when
/// their symbolic expansion vanishes. Output is sorted and deduplicated up
/// to sign.
pub fn generate_mixn_invariants(n: usize) -> Result<Vec<SparsePolynomial>> {
    let n = check_n(n)?;
    let s = off_diagonal_cells(n);
    let mut out: HashSet<SparsePolynomial> = HashSet::new();

    // Off-diagonal exchange binomials (two factors, then three with at
    // least two distinct), with the relaxed constant-row rule.
    for pair in collect_sigma_pairs(
        s.iter().copied().combinations(2).map(|m| sorted_with(&[], &m)),
        SigmaVariant::NonIncrease,
    ) {
        out.insert(SparsePolynomial::binomial(
            rows_to_monomial(&unpack_rows(pair.0)),
            rows_to_monomial(&unpack_rows(pair.1)),
        ));
    }
    for pair in collect_sigma_pairs(
        s.iter()
            .copied()
            .combinations_with_replacement(3)
            .filter(|m| m.iter().collect::<HashSet<_>>().len() >= 2)
            .map(|m| sorted_with(&[], &m)),
        SigmaVariant::NonIncrease,
    ) {
        out.insert(SparsePolynomial::binomial(
            rows_to_monomial(&unpack_rows(pair.0)),
            rows_to_monomial(&unpack_rows(pair.1)),
        ));
    }

    // Four-term families: P_iii M - P_jjj M - image_i + image_j where the
    // two images share a residue key. Block sizes one, two, three.
    for (size, min_distinct) in [(1usize, 1usize), (2, 2), (3, 2)] {
        let blocks: Vec<Vec<Cell>> = s
            .iter()
            .copied()
            .combinations_with_replacement(size)
            .filter(|m| m.iter().collect::<HashSet<_>>().len() >= min_distinct)
            .collect();
        let found: Vec<SparsePolynomial> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .collect::<Vec<_>>()
            .into_par_iter()
            .flat_map_iter(|(i, j)| {
                let mut local = Vec::new();
                for m in &blocks {
                    let m_rows: Vec<Row> = m.iter().map(|c| [c.i, c.j, c.k]).collect();
                    // Each factor needs two index positions outside {i, j};
                    // at n = 2 there is no third value, so the guard is
                    // vacuous there and the known n = 2 list requires
                    // dropping it.
                    if n >= 3
                        && !m_rows.iter().all(|r| {
                            r.iter().filter(|&&x| x != i && x != j).count() >= 2
                        })
                    {
                        continue;
                    }
                    let gi = residue_grouped_images([i, i, i], &m_rows);
                    let gj = residue_grouped_images([j, j, j], &m_rows);
                    let base_i = sorted_with(&[[i, i, i]], m);
                    let base_j = sorted_with(&[[j, j, j]], m);
                    for (key, ims_a) in &gi {
                        let Some(ims_b) = gj.get(key) else { continue };
                        for ia in ims_a {
                            for ib in ims_b {
                                local.push(poly_from_terms(&[
                                    (1, base_i.clone()),
                                    (-1, base_j.clone()),
                                    (-1, ia.clone()),
                                    (1, ib.clone()),
                                ]));
                            }
                        }
                    }
                }
                local
            })
            .collect();
        out.extend(found);
    }

    // Eight-term family over ordered triples of diagonal indices and one
    // off-diagonal factor avoiding the middle index.
    if n >= 3 {
        let triples: Vec<(u8, u8, u8)> = (1..=n)
            .flat_map(|i| (1..=n).flat_map(move |j| (1..=n).map(move |k| (i, j, k))))
            .filter(|(i, j, k)| i != j && j != k && i != k)
            .collect();
        let found: Vec<SparsePolynomial> = triples
            .into_par_iter()
            .flat_map_iter(|(i, j, k)| {
                let (di, dj, dk): (Row, Row, Row) = ([i, i, i], [j, j, j], [k, k, k]);
                let mut local = Vec::new();
                for q in &s {
                    let qr: Row = [q.i, q.j, q.k];
                    if qr.contains(&j) {
                        continue;
                    }
                    let u_opts = sigma_set(
                        &MonomialMatrix::from_rows(vec![dj, qr]),
                        SigmaVariant::NonIncrease,
                    )
                    .expect("degree two");
                    let gik = symval_grouped_images(di, dk, qr);
                    let gjk = symval_grouped_images(dj, dk, qr);
                    for u in &u_opts {
                        for (key, ims_a) in &gik {
                            let Some(ims_b) = gjk.get(key) else { continue };
                            for ia in ims_a {
                                for ib in ims_b {
                                    let terms = vec![
                                        (1, sorted_rows(&[di, dj, qr])),
                                        (-1, sorted_rows(&[di, dk, qr])),
                                        (1, sorted_rows(&[dj, dk, qr])),
                                        (-1, sorted_rows(&[dj, dj, qr])),
                                        (1, with_row(u.rows(), dj)),
                                        (-1, with_row(u.rows(), di)),
                                        (1, ia.clone()),
                                        (-1, ib.clone()),
                                    ];
                                    if vanishes_symbolically(&terms) {
                                        local.push(poly_from_terms(&terms));
                                    }
                                }
                            }
                        }
                    }
                }
                local
            })
            .collect();
        out.extend(found);
    }

    // Twelve-term family over unordered triples of diagonal indices, one
    // exchange image for each pair.
    if n >= 3 {
        let triples: Vec<(u8, u8, u8)> = (1..=n)
            .tuple_combinations()
            .collect();
        let found: Vec<SparsePolynomial> = triples
            .into_par_iter()
            .flat_map_iter(|(i, j, k)| {
                let (di, dj, dk): (Row, Row, Row) = ([i, i, i], [j, j, j], [k, k, k]);
                let mut local = Vec::new();
                let uij = sigma_set(
                    &MonomialMatrix::from_rows(vec![di, dj]),
                    SigmaVariant::NonIncrease,
                )
                .expect("degree two");
                let uik = sigma_set(
                    &MonomialMatrix::from_rows(vec![di, dk]),
                    SigmaVariant::NonIncrease,
                )
                .expect("degree two");
                let ujk = sigma_set(
                    &MonomialMatrix::from_rows(vec![dj, dk]),
                    SigmaVariant::NonIncrease,
                )
                .expect("degree two");
                for ua in &uij {
                    for ub in &uik {
                        for uc in &ujk {
                            let terms = vec![
                                (1, sorted_rows(&[di, dj, dj])),
                                (-1, sorted_rows(&[di, di, dj])),
                                (1, sorted_rows(&[di, di, dk])),
                                (-1, sorted_rows(&[di, dk, dk])),
                                (1, sorted_rows(&[dj, dk, dk])),
                                (-1, sorted_rows(&[dj, dj, dk])),
                                (1, with_row(ua.rows(), di)),
                                (-1, with_row(ua.rows(), dj)),
                                (1, with_row(ub.rows(), dk)),
                                (-1, with_row(ub.rows(), di)),
                                (1, with_row(uc.rows(), dj)),
                                (-1, with_row(uc.rows(), dk)),
                            ];
                            if vanishes_symbolically(&terms) {
                                local.push(poly_from_terms(&terms));
                            }
                        }
                    }
                }
                local
            })
            .collect();
        out.extend(found);
    }

    let mut out: Vec<SparsePolynomial> = out.into_iter().filter(|p| !p.is_zero()).collect();
    out.par_sort();
    Ok(out)
}

fn sorted_rows(rows: &[Row]) -> Vec<Row> {
    let mut v = rows.to_vec();
    v.sort_unstable();
    v
}

fn with_row(rows: &[Row], extra: Row) -> Vec<Row> {
    let mut v = rows.to_vec();
    v.push(extra);
    v.sort_unstable();
    v
}
