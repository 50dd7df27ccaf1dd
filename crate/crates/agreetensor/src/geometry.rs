//! Geometric relations between the models: Hadamard products of tensor
//! points, membership in the linear varieties behind the diagonal-scaling
//! constructions, the exact mixture-to-toric parameter transfer, and the
//! two boundary counterexamples separating the model pair.

use crate::error::{Error, Result};
use crate::invariants::Cell;
use crate::models::ModelParams;
use crate::scalar::{Rat, Scalar};
use crate::tensor::{all_cells, classify_cell, CellClass, ProbabilityTensor, Tensor};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Entrywise product of two projective tensor points, left unnormalized.
/// Defined only when some coordinate product survives.
pub fn hadamard<T: Scalar>(p: &Tensor<T>, q: &Tensor<T>) -> Result<Tensor<T>> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch(format!(
            "points have n={} and n={}",
            p.n(),
            q.n()
        )));
    }
    let mut out = Tensor::new_fill(p.n(), T::zero());
    let mut any_nonzero = false;
    for (i, j, k) in all_cells(p.n()) {
        let v = p.get(i, j, k).clone() * q.get(i, j, k).clone();
        if !v.is_zero() {
            any_nonzero = true;
        }
        out.set(i, j, k, v);
    }
    if !any_nonzero {
        return Err(Error::NotDefined);
    }
    Ok(out)
}

/// The linear varieties whose Hadamard products with the independence
/// surface produce the diagonal-scaling models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearVarietyId {
    /// All off-diagonal entries equal.
    H,
    /// All off-diagonal entries equal and all diagonal entries equal.
    Hhat,
    /// Entries constant on each two-rater agreement class, diagonal
    /// constant; cells with three distinct indices are unconstrained.
    Htilde,
    /// All off-diagonal entries zero.
    Diag,
}

/// One linear equation of a variety: two cells with equal values, or one
/// cell pinned to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarietyEquation {
    Equal(Cell, Cell),
    Zero(Cell),
}

fn cell_of(i: usize, j: usize, k: usize) -> Cell {
    Cell::new(i as u8, j as u8, k as u8)
}

/// The defining equations of a variety at size n, each class chained to its
/// first cell in lexicographic order (equivalent to the pairwise
/// formulation and linear in count).
pub fn variety_equations(id: LinearVarietyId, n: usize) -> Vec<VarietyEquation> {
    assert!(n >= 2, "varieties are defined for n >= 2");
    let mut eqs = Vec::new();
    let mut chain_class = |pred: &dyn Fn(usize, usize, usize) -> bool| {
        let mut rep: Option<Cell> = None;
        for (i, j, k) in all_cells(n) {
            if !pred(i, j, k) {
                continue;
            }
            let c = cell_of(i, j, k);
            match rep {
                None => rep = Some(c),
                Some(r) => eqs.push(VarietyEquation::Equal(r, c)),
            }
        }
    };
    match id {
        LinearVarietyId::H => {
            chain_class(&|i, j, k| !(i == j && j == k));
        }
        LinearVarietyId::Hhat => {
            chain_class(&|i, j, k| !(i == j && j == k));
            chain_class(&|i, j, k| i == j && j == k);
        }
        LinearVarietyId::Htilde => {
            for class in [CellClass::Eq12, CellClass::Eq13, CellClass::Eq23] {
                chain_class(&move |i, j, k| classify_cell(i, j, k) == class);
            }
            chain_class(&|i, j, k| i == j && j == k);
        }
        LinearVarietyId::Diag => {
            for (i, j, k) in all_cells(n) {
                if !(i == j && j == k) {
                    eqs.push(VarietyEquation::Zero(cell_of(i, j, k)));
                }
            }
        }
    }
    eqs
}

/// True when every defining equation of the variety holds: exactly on the
/// rational backend, within 1e-10 of the largest entry magnitude on floats.
pub fn variety_membership<T: Scalar>(p: &Tensor<T>, id: LinearVarietyId) -> bool {
    let scale = p
        .values()
        .iter()
        .map(|v| v.abs_val())
        .fold(T::zero(), |acc, v| if v > acc { v } else { acc });
    let holds = |a: &T, b: &T| -> bool {
        if T::EXACT {
            a == b
        } else {
            let diff = (a.clone() - b.clone()).abs_val();
            diff <= scale.clone() * T::from_ratio(1, 10_000_000_000)
        }
    };
    variety_equations(id, p.n()).iter().all(|eq| match eq {
        VarietyEquation::Equal(a, b) => holds(
            p.get(a.i as usize, a.j as usize, a.k as usize),
            p.get(b.i as usize, b.j as usize, b.k as usize),
        ),
        VarietyEquation::Zero(c) => holds(
            p.get(c.i as usize, c.j as usize, c.k as usize),
            &T::zero(),
        ),
    })
}

/// The H-point with the given diagonal weights: gamma_i at cell (i,i,i) and
/// one elsewhere. Its Hadamard product with an independence tensor is a
/// diagonal-scaling model point.
pub fn h_point<T: Scalar>(gammas: &[T]) -> Tensor<T> {
    let n = gammas.len();
    assert!(n >= 2, "need at least two classes");
    let mut t = Tensor::new_fill(n, T::one());
    for i in 1..=n {
        t.set(i, i, i, gammas[i - 1].clone());
    }
    t
}

/// The Htilde-point with the given pair weights: g12 on cells with i = j,
/// g13 on i = k, g23 on j = k, the triple product on the diagonal, one on
/// cells with three distinct indices.
pub fn h_tilde_point<T: Scalar>(n: usize, g12: &T, g13: &T, g23: &T) -> Tensor<T> {
    assert!(n >= 2, "need at least two classes");
    let mut t = Tensor::new_fill(n, T::one());
    for (i, j, k) in all_cells(n) {
        let v = match classify_cell(i, j, k) {
            CellClass::AllEqual => g12.clone() * g13.clone() * g23.clone(),
            CellClass::Eq12 => g12.clone(),
            CellClass::Eq13 => g13.clone(),
            CellClass::Eq23 => g23.clone(),
            CellClass::AllDistinct => continue,
        };
        t.set(i, j, k, v);
    }
    t
}

/// Transfers interior mixture parameters to diagonal-scaling parameters
/// producing the identical tensor: the margin vectors carry over (the first
/// scaled by the mixture weight) and each diagonal coefficient absorbs the
/// mixture's diagonal mass. Exact on the rational backend.
///
/// The transfer needs a strictly interior point: mixture weight positive
/// and every coordinate of the margins and the diagonal distribution
/// positive. On the boundary the inclusion genuinely fails, see
/// [`boundary_counterexample`].
pub fn mix_to_qi(params: &ModelParams<Rat>) -> Result<ModelParams<Rat>> {
    let ModelParams::Mix { alpha, a, b, c, d } = params else {
        return Err(Error::UnsupportedFamily(format!(
            "{}: the transfer starts from Mix parameters",
            params.family()
        )));
    };
    params.validate()?;
    if alpha.is_zero() {
        return Err(Error::BoundaryPoint("alpha = 0".into()));
    }
    for (name, vec) in [("a", a), ("b", b), ("c", c), ("d", d)] {
        if let Some(ix) = vec.iter().position(|v| v.is_zero()) {
            return Err(Error::BoundaryPoint(format!("{name}[{}] = 0", ix + 1)));
        }
    }
    let one: Rat = Scalar::one();
    let gamma: Vec<Rat> = (0..a.len())
        .map(|ix| {
            let idx_mass = alpha.clone() * a[ix].clone() * b[ix].clone() * c[ix].clone();
            one.clone() + (one.clone() - alpha.clone()) * d[ix].clone() / idx_mass
        })
        .collect();
    let out = ModelParams::QI {
        a: a.iter().map(|v| alpha.clone() * v.clone()).collect(),
        b: b.clone(),
        c: c.clone(),
        gamma,
    };
    out.validate()?;
    Ok(out)
}

/// Which inclusion failure to exhibit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryDirection {
    /// A mixture tensor outside the diagonal-scaling family.
    MixNotInQI,
    /// A diagonal-scaling tensor outside the mixture family.
    QINotInMix,
}

impl fmt::Display for BoundaryDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryDirection::MixNotInQI => "mix-not-in-qi",
            BoundaryDirection::QINotInMix => "qi-not-in-mix",
        })
    }
}

impl FromStr for BoundaryDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mix-not-in-qi" | "mixnotinqi" => Ok(BoundaryDirection::MixNotInQI),
            "qi-not-in-mix" | "qinotinmix" => Ok(BoundaryDirection::QINotInMix),
            other => Err(Error::Parse(format!(
                "unknown direction {other:?}; use mix-not-in-qi or qi-not-in-mix"
            ))),
        }
    }
}

/// Sign condition a witness places on one entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryRelation {
    Zero,
    Positive,
}

/// One machine-checkable entry condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryCheck {
    pub cell: (usize, usize, usize),
    pub relation: EntryRelation,
}

/// A counterexample certificate: the deduction in prose, one step per line,
/// plus the entry conditions the deduction rests on. [`WitnessReport::verify`]
/// re-evaluates the conditions against a tensor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessReport {
    pub lines: Vec<String>,
    pub checks: Vec<EntryCheck>,
}

impl WitnessReport {
    pub fn verify<T: Scalar>(&self, t: &Tensor<T>) -> bool {
        self.checks.iter().all(|check| {
            let (i, j, k) = check.cell;
            let v = t.get(i, j, k);
            match check.relation {
                EntryRelation::Zero => v.is_zero(),
                EntryRelation::Positive => !v.is_zero() && !v.is_negative(),
            }
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        for check in &self.checks {
            let (i, j, k) = check.cell;
            let rel = match check.relation {
                EntryRelation::Zero => "= 0",
                EntryRelation::Positive => "> 0",
            };
            out.push_str(&format!("check: P[{i},{j},{k}] {rel}\n"));
        }
        out
    }
}

/// Produces a tensor lying on one model but not the other, with a witness
/// certificate for the exclusion. Both directions use boundary parameter
/// points, the interior being shared by [`mix_to_qi`].
pub fn boundary_counterexample(
    direction: BoundaryDirection,
    n: usize,
) -> Result<(ProbabilityTensor<Rat>, WitnessReport)> {
    if n < 2 {
        return Err(Error::UnsupportedN(n));
    }
    match direction {
        BoundaryDirection::MixNotInQI => {
            let mut t = Tensor::new_fill(n, <Rat as Scalar>::zero());
            for i in 1..=n {
                t.set(i, i, i, Rat::from_ratio(1, n as i64));
            }
            let p = ProbabilityTensor::new(t)?;
            let mut checks: Vec<EntryCheck> = (1..=n)
                .map(|i| EntryCheck {
                    cell: (i, i, i),
                    relation: EntryRelation::Positive,
                })
                .collect();
            checks.push(EntryCheck {
                cell: (1, 1, 2),
                relation: EntryRelation::Zero,
            });
            let report = WitnessReport {
                lines: vec![
                    "The tensor is the pure-agreement mixture: zero weight on the product part, uniform diagonal.".into(),
                    "Every diagonal entry is positive, so any product-with-scaled-diagonal factorization needs every margin coordinate and every diagonal coefficient positive.".into(),
                    "Positive margins force every off-diagonal entry positive, but P[1,1,2] is zero.".into(),
                ],
                checks,
            };
            Ok((p, report))
        }
        BoundaryDirection::QINotInMix => {
            let one: Rat = Scalar::one();
            let mut gamma = vec![one.clone(); n];
            gamma[0] = Scalar::zero();
            let params = ModelParams::QI {
                a: vec![one.clone(); n],
                b: vec![one.clone(); n],
                c: vec![one; n],
                gamma,
            };
            let p = params.materialize()?;
            let checks = vec![
                EntryCheck { cell: (1, 1, 1), relation: EntryRelation::Zero },
                EntryCheck { cell: (1, 1, 2), relation: EntryRelation::Positive },
                EntryCheck { cell: (1, 2, 2), relation: EntryRelation::Positive },
                EntryCheck { cell: (2, 1, 2), relation: EntryRelation::Positive },
                EntryCheck { cell: (2, 2, 1), relation: EntryRelation::Positive },
            ];
            let report = WitnessReport {
                lines: vec![
                    "The tensor kills the first diagonal coefficient and keeps flat margins, so only P[1,1,1] vanishes.".into(),
                    "A mixture representation of P[1,1,1] = 0 needs both the product mass and the diagonal mass at class 1 to vanish.".into(),
                    "P[1,1,2] > 0 rules out a pure diagonal tensor, so the mixture weight is positive.".into(),
                    "P[1,2,2] > 0, P[2,1,2] > 0, P[2,2,1] > 0 force the first coordinate of each margin positive, so the product mass at class 1 is positive after all.".into(),
                ],
                checks,
            };
            Ok((p, report))
        }
    }
}

/// True for the perfect-agreement tensor: all mass on the diagonal, split
/// evenly. The pairwise families approach this point without containing it,
/// so model-membership queries about it answer false with reason
/// [`PERFECT_AGREEMENT_REASON`] even though every pairwise invariant
/// vanishes there.
pub fn is_perfect_agreement<T: Scalar>(t: &Tensor<T>) -> bool {
    let diag = t.get(1, 1, 1);
    if diag.is_zero() {
        return false;
    }
    all_cells(t.n()).all(|(i, j, k)| {
        let v = t.get(i, j, k);
        if i == j && j == k {
            v == diag
        } else {
            v.is_zero()
        }
    })
}

/// Reason attached to membership answers at the perfect-agreement tensor.
pub const PERFECT_AGREEMENT_REASON: &str = "limit_point";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{catalog, first_nonvanishing};
    use crate::models::{sample_params, Family, SampleOptions};

    fn r(num: i64, den: i64) -> Rat {
        Rat::from_ratio(num, den)
    }

    #[test]
    fn hadamard_identity_and_disjoint_supports() {
        let p = sample_params(Family::QI, 2, 5, &SampleOptions::default())
            .unwrap()
            .materialize()
            .unwrap();
        let ones = Tensor::new_fill(2, <Rat as Scalar>::one());
        let prod = hadamard(p.as_tensor(), &ones).unwrap();
        assert_eq!(&prod, p.as_tensor());

        let mut diag = Tensor::new_fill(2, <Rat as Scalar>::zero());
        diag.set(1, 1, 1, r(1, 2));
        diag.set(2, 2, 2, r(1, 2));
        let mut off = Tensor::new_fill(2, r(1, 6));
        off.set(1, 1, 1, <Rat as Scalar>::zero());
        off.set(2, 2, 2, <Rat as Scalar>::zero());
        assert!(matches!(hadamard(&diag, &off), Err(Error::NotDefined)));
    }

    #[test]
    fn hadamard_commutes_and_associates() {
        let opts = SampleOptions::default();
        let p = sample_params(Family::QI, 3, 1, &opts).unwrap().materialize().unwrap();
        let q = sample_params(Family::Mix, 3, 2, &opts).unwrap().materialize().unwrap();
        let s = sample_params(Family::PairMix, 3, 3, &opts).unwrap().materialize().unwrap();
        let pq = hadamard(p.as_tensor(), q.as_tensor()).unwrap();
        let qp = hadamard(q.as_tensor(), p.as_tensor()).unwrap();
        assert_eq!(pq, qp);
        let left = hadamard(&pq, s.as_tensor()).unwrap();
        let right = hadamard(p.as_tensor(), &hadamard(q.as_tensor(), s.as_tensor()).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn independence_times_h_point_is_a_qi_tensor() {
        // Flat independence point times the H-point with weights (5,5),
        // renormalized: the single-coefficient catalog vanishes on it.
        let ind = sample_params(Family::HomQI, 2, 0, &SampleOptions::default())
            .unwrap();
        let ModelParams::HomQI { a, b, c, .. } = ind else { unreachable!() };
        let flat = ModelParams::HomQI { a, b, c, gamma: <Rat as Scalar>::one() }
            .materialize()
            .unwrap();
        let h = h_point(&[r(5, 1), r(5, 1)]);
        let prod = hadamard(flat.as_tensor(), &h).unwrap();
        let renorm = ProbabilityTensor::from_unnormalized(prod).unwrap();
        let list = catalog(Family::HomQI, 2).unwrap();
        assert!(first_nonvanishing::<Rat>(&list, renorm.as_tensor())
            .unwrap()
            .is_none());
        assert!(variety_membership(&h, LinearVarietyId::H));
        assert!(variety_membership(&h, LinearVarietyId::Hhat));
    }

    #[test]
    fn qi_tensor_is_independence_times_h_point() {
        for seed in 0..20u64 {
            let params = sample_params(Family::QI, 3, seed, &SampleOptions::default()).unwrap();
            let ModelParams::QI { a, b, c, gamma } = params.clone() else { unreachable!() };
            let p = params.materialize().unwrap();
            let flat = ModelParams::QI {
                a,
                b,
                c,
                gamma: vec![<Rat as Scalar>::one(); 3],
            }
            .materialize()
            .unwrap();
            let h = h_point(&gamma);
            let prod = hadamard(flat.as_tensor(), &h).unwrap();
            let renorm = ProbabilityTensor::from_unnormalized(prod).unwrap();
            assert_eq!(renorm.as_tensor(), p.as_tensor());
            assert!(variety_membership(&h, LinearVarietyId::H));
        }
    }

    #[test]
    fn variety_membership_examples() {
        let mut diag = Tensor::new_fill(2, <Rat as Scalar>::zero());
        diag.set(1, 1, 1, r(1, 2));
        diag.set(2, 2, 2, r(1, 2));
        assert!(variety_membership(&diag, LinearVarietyId::Diag));

        let ones = Tensor::new_fill(3, <Rat as Scalar>::one());
        for id in [LinearVarietyId::H, LinearVarietyId::Hhat, LinearVarietyId::Htilde] {
            assert!(variety_membership(&ones, id));
        }

        let gamma_pattern = h_point(&[r(2, 1), r(3, 1)]);
        assert!(variety_membership(&gamma_pattern, LinearVarietyId::H));
        assert!(!variety_membership(&gamma_pattern, LinearVarietyId::Hhat));
        assert!(!variety_membership(&gamma_pattern, LinearVarietyId::Diag));
    }

    #[test]
    fn htilde_point_membership_and_pair_classes() {
        let p = h_tilde_point(3, &r(2, 1), &r(3, 1), &r(5, 1));
        assert!(variety_membership(&p, LinearVarietyId::Htilde));
        assert!(!variety_membership(&p, LinearVarietyId::H));
        assert_eq!(p.get(1, 1, 1), &r(30, 1));
        assert_eq!(p.get(1, 1, 2), &r(2, 1));
        assert_eq!(p.get(1, 2, 1), &r(3, 1));
        assert_eq!(p.get(2, 1, 1), &r(5, 1));
        assert_eq!(p.get(1, 2, 3), &r(1, 1));
    }

    #[test]
    fn float_membership_uses_relative_tolerance() {
        let mut p = Tensor::new_fill(2, 1.0f64);
        p.set(1, 1, 1, 1.0 + 1e-13);
        assert!(variety_membership(&p, LinearVarietyId::Hhat));
        p.set(1, 1, 1, 1.0 + 1e-6);
        assert!(!variety_membership(&p, LinearVarietyId::Hhat));
    }

    #[test]
    fn mix_to_qi_worked_example() {
        let params = ModelParams::Mix {
            alpha: r(1, 2),
            a: vec![r(1, 2); 2],
            b: vec![r(1, 2); 2],
            c: vec![r(1, 2); 2],
            d: vec![r(1, 2); 2],
        };
        let qi = mix_to_qi(&params).unwrap();
        let ModelParams::QI { a, b, c, gamma } = &qi else { panic!() };
        assert_eq!(a, &vec![r(1, 4); 2]);
        assert_eq!(b, &vec![r(1, 2); 2]);
        assert_eq!(c, &vec![r(1, 2); 2]);
        assert_eq!(gamma, &vec![r(5, 1); 2]);
        let left = params.materialize().unwrap();
        let right = qi.materialize().unwrap();
        assert_eq!(left.as_tensor(), right.as_tensor());
        assert_eq!(left.get(1, 1, 1), &r(5, 16));
        assert_eq!(left.get(1, 1, 2), &r(1, 16));
    }

    #[test]
    fn mix_to_qi_alpha_one_gives_unit_gammas() {
        let params = ModelParams::Mix {
            alpha: <Rat as Scalar>::one(),
            a: vec![r(1, 4), r(3, 4)],
            b: vec![r(1, 3), r(2, 3)],
            c: vec![r(2, 5), r(3, 5)],
            d: vec![r(1, 2), r(1, 2)],
        };
        let ModelParams::QI { gamma, .. } = mix_to_qi(&params).unwrap() else { panic!() };
        assert_eq!(gamma, vec![<Rat as Scalar>::one(); 2]);
    }

    #[test]
    fn mix_to_qi_is_exact_on_samples() {
        for n in 2..=4usize {
            for seed in 0..20u64 {
                let params = sample_params(Family::Mix, n, seed, &SampleOptions::default()).unwrap();
                let qi = mix_to_qi(&params).unwrap();
                assert_eq!(
                    params.materialize().unwrap().as_tensor(),
                    qi.materialize().unwrap().as_tensor(),
                    "n={n} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn mix_to_qi_rejects_boundary() {
        let params = ModelParams::Mix {
            alpha: <Rat as Scalar>::zero(),
            a: vec![r(1, 2); 2],
            b: vec![r(1, 2); 2],
            c: vec![r(1, 2); 2],
            d: vec![r(1, 2); 2],
        };
        assert!(matches!(mix_to_qi(&params), Err(Error::BoundaryPoint(_))));
        let params = ModelParams::Mix {
            alpha: r(1, 2),
            a: vec![<Rat as Scalar>::zero(), <Rat as Scalar>::one()],
            b: vec![r(1, 2); 2],
            c: vec![r(1, 2); 2],
            d: vec![r(1, 2); 2],
        };
        assert!(matches!(mix_to_qi(&params), Err(Error::BoundaryPoint(_))));
    }

    #[test]
    fn mix_not_in_qi_counterexample() {
        for n in 2..=6usize {
            let (p, report) = boundary_counterexample(BoundaryDirection::MixNotInQI, n).unwrap();
            assert!(report.verify(p.as_tensor()), "n={n}");
            assert_eq!(p.get(1, 1, 1), &Rat::from_ratio(1, n as i64));
            assert!(p.get(1, 1, 2).is_zero());
            assert!(variety_membership(p.as_tensor(), LinearVarietyId::Diag));
            let text = report.to_text();
            assert!(text.contains("check: P[1,1,2] = 0"));
        }
    }

    #[test]
    fn qi_not_in_mix_counterexample() {
        for n in 2..=6usize {
            let (p, report) = boundary_counterexample(BoundaryDirection::QINotInMix, n).unwrap();
            assert!(report.verify(p.as_tensor()), "n={n}");
            assert!(p.get(1, 1, 1).is_zero());
            let cube = n.pow(3) as i64;
            assert_eq!(p.get(1, 1, 2), &Rat::from_ratio(1, cube - 1));
        }
        let (p, _) = boundary_counterexample(BoundaryDirection::QINotInMix, 2).unwrap();
        assert_eq!(p.get(2, 2, 2), &r(1, 7));
    }

    #[test]
    fn witness_fails_on_the_wrong_tensor() {
        let (_, report) = boundary_counterexample(BoundaryDirection::MixNotInQI, 2).unwrap();
        let uniform = Tensor::new_fill(2, r(1, 8));
        assert!(!report.verify(&uniform));
    }

    #[test]
    fn perfect_agreement_is_flagged_as_limit_point() {
        let (p, _) = boundary_counterexample(BoundaryDirection::MixNotInQI, 3).unwrap();
        assert!(is_perfect_agreement(p.as_tensor()));
        // Every pairwise invariant vanishes there, yet the point is only a
        // limit of the pairwise family.
        let quartic = catalog(Family::PairQI, 2).unwrap();
        let (p2, _) = boundary_counterexample(BoundaryDirection::MixNotInQI, 2).unwrap();
        assert!(first_nonvanishing::<Rat>(&quartic, p2.as_tensor())
            .unwrap()
            .is_none());
        assert_eq!(PERFECT_AGREEMENT_REASON, "limit_point");
        let uniform = Tensor::new_fill(2, r(1, 8));
        assert!(!is_perfect_agreement(&uniform));
    }

    #[test]
    fn direction_parses_both_spellings() {
        assert_eq!(
            "mix-not-in-qi".parse::<BoundaryDirection>().unwrap(),
            BoundaryDirection::MixNotInQI
        );
        assert_eq!(
            "QiNotInMix".parse::<BoundaryDirection>().unwrap(),
            BoundaryDirection::QINotInMix
        );
        assert!("sideways".parse::<BoundaryDirection>().is_err());
        assert_eq!(BoundaryDirection::MixNotInQI.to_string(), "mix-not-in-qi");
    }
}
