//! Three-way probability tensors over n categories and their marginal tables.
//!
//! Cells are addressed 1-based as (i, j, k), one index per rater. Storage is
//! dense in lexicographic cell order.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense n x n x n array, 1-based accessors.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone> Tensor<T> {
    pub fn new_fill(n: usize, value: T) -> Self {
        assert!(n >= 1, "tensor needs at least one category");
        Tensor {
            n,
            data: vec![value; n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        assert!(n >= 1, "tensor needs at least one category");
        let mut data = Vec::with_capacity(n * n * n);
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    data.push(f(i, j, k));
                }
            }
        }
        Tensor { n, data }
    }
}

impl<T> Tensor<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.n;
        assert!(
            (1..=n).contains(&i) && (1..=n).contains(&j) && (1..=n).contains(&k),
            "cell ({i}, {j}, {k}) out of range for n={n}"
        );
        (i - 1) * n * n + (j - 1) * n + (k - 1)
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &T {
        &self.data[self.idx(i, j, k)]
    }

    pub fn get_mut(&mut self, i: usize, j: usize, k: usize) -> &mut T {
        let ix = self.idx(i, j, k);
        &mut self.data[ix]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: T) {
        let ix = self.idx(i, j, k);
        self.data[ix] = value;
    }

    /// Cells in lexicographic order with their values.
    pub fn iter_cells(&self) -> impl Iterator<Item = ((usize, usize, usize), &T)> {
        let n = self.n;
        self.data.iter().enumerate().map(move |(pos, v)| {
            let i = pos / (n * n) + 1;
            let j = (pos / n) % n + 1;
            let k = pos % n + 1;
            ((i, j, k), v)
        })
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }
}

impl<T: Scalar> Tensor<T> {
    pub fn total(&self) -> T {
        let mut acc = T::zero();
        for v in &self.data {
            acc += v.clone();
        }
        acc
    }
}

/// All cells of an n-cube in lexicographic order.
pub fn all_cells(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=n).flat_map(move |i| (1..=n).flat_map(move |j| (1..=n).map(move |k| (i, j, k))))
}

/// Agreement pattern of a cell: which raters coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellClass {
    /// i = j = k (all three raters agree).
    AllEqual,
    /// i = j != k.
    Eq12,
    /// i = k != j.
    Eq13,
    /// j = k != i.
    Eq23,
    /// i, j, k pairwise distinct.
    AllDistinct,
}

pub fn classify_cell(i: usize, j: usize, k: usize) -> CellClass {
    if i == j && j == k {
        CellClass::AllEqual
    } else if i == j {
        CellClass::Eq12
    } else if i == k {
        CellClass::Eq13
    } else if j == k {
        CellClass::Eq23
    } else {
        CellClass::AllDistinct
    }
}

/// Number of cells of the class in an n-cube.
pub fn class_size(class: CellClass, n: usize) -> usize {
    match class {
        CellClass::AllEqual => n,
        CellClass::Eq12 | CellClass::Eq13 | CellClass::Eq23 => n * (n - 1),
        CellClass::AllDistinct => n * (n - 1) * (n - 2),
    }
}

/// Axis summed away by [`marginalize`]; axes are numbered 1..3 like raters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    First,
    Second,
    Third,
}

impl Axis {
    pub fn from_index(ix: usize) -> Result<Axis> {
        match ix {
            1 => Ok(Axis::First),
            2 => Ok(Axis::Second),
            3 => Ok(Axis::Third),
            other => Err(Error::DimensionMismatch(format!(
                "axis must be 1, 2, or 3, got {other}"
            ))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Axis::First => 1,
            Axis::Second => 2,
            Axis::Third => 3,
        }
    }
}

/// Two-way n x n table, 1-based accessors.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoWayTable<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> TwoWayTable<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(n >= 1);
        let mut data = Vec::with_capacity(n * n);
        for r in 1..=n {
            for c in 1..=n {
                data.push(f(r, c));
            }
        }
        TwoWayTable { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        assert!((1..=self.n).contains(&r) && (1..=self.n).contains(&c));
        &self.data[(r - 1) * self.n + (c - 1)]
    }

    pub fn row_sum(&self, r: usize) -> T {
        let mut acc = T::zero();
        for c in 1..=self.n {
            acc += self.get(r, c).clone();
        }
        acc
    }

    pub fn col_sum(&self, c: usize) -> T {
        let mut acc = T::zero();
        for r in 1..=self.n {
            acc += self.get(r, c).clone();
        }
        acc
    }

    pub fn diag_sum(&self) -> T {
        let mut acc = T::zero();
        for r in 1..=self.n {
            acc += self.get(r, r).clone();
        }
        acc
    }

    pub fn total(&self) -> T {
        let mut acc = T::zero();
        for v in &self.data {
            acc += v.clone();
        }
        acc
    }
}

/// Joint distribution of three raters: entrywise non-negative, total mass 1
/// (exactly on the rational backend, within 1e-12 on floats).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTensor<T: Scalar> {
    tensor: Tensor<T>,
}

impl<T: Scalar> ProbabilityTensor<T> {
    /// Validates an already-normalized tensor.
    pub fn new(tensor: Tensor<T>) -> Result<Self> {
        for ((i, j, k), v) in tensor.iter_cells() {
            if v.is_negative() {
                return Err(Error::NegativeEntry(i, j, k));
            }
        }
        let total = tensor.total();
        if !total.close_abs(&T::one(), 1e-12) {
            return Err(Error::NotNormalized {
                got: total.format_number(),
            });
        }
        Ok(ProbabilityTensor { tensor })
    }

    /// Normalizes a non-negative weight tensor by its total mass.
    pub fn from_unnormalized(tensor: Tensor<T>) -> Result<Self> {
        for ((i, j, k), v) in tensor.iter_cells() {
            if v.is_negative() {
                return Err(Error::NegativeEntry(i, j, k));
            }
        }
        let total = tensor.total();
        if total.is_zero() {
            return Err(Error::ZeroMass);
        }
        let data = Tensor::from_fn(tensor.n(), |i, j, k| {
            tensor.get(i, j, k).clone() / total.clone()
        });
        Ok(ProbabilityTensor { tensor: data })
    }

    pub fn n(&self) -> usize {
        self.tensor.n()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &T {
        self.tensor.get(i, j, k)
    }

    pub fn as_tensor(&self) -> &Tensor<T> {
        &self.tensor
    }

    pub fn into_tensor(self) -> Tensor<T> {
        self.tensor
    }

    /// Sums away one axis. Summing axis 3 pairs raters 1 and 2, and so on.
    /// The output total equals the input total exactly (same additions, no
    /// renormalization).
    pub fn marginalize(&self, summed_axis: Axis) -> TwoWayTable<T> {
        marginalize_tensor(&self.tensor, summed_axis)
    }

    /// Converts the backend to f64.
    pub fn to_f64(&self) -> ProbabilityTensor<f64> {
        ProbabilityTensor {
            tensor: Tensor::from_fn(self.n(), |i, j, k| self.get(i, j, k).to_f64()),
        }
    }
}

/// Marginalization of a raw tensor (no normalization requirement).
pub fn marginalize_tensor<T: Scalar>(t: &Tensor<T>, summed_axis: Axis) -> TwoWayTable<T> {
    let n = t.n();
    TwoWayTable::from_fn(n, |r, c| {
        let mut acc = T::zero();
        for s in 1..=n {
            let (i, j, k) = match summed_axis {
                Axis::Third => (r, c, s),
                Axis::Second => (r, s, c),
                Axis::First => (s, r, c),
            };
            acc += t.get(i, j, k).clone();
        }
        acc
    })
}

/// Reads the tensor text format:
/// a header line `n=<int>` followed by one `i j k value` line per cell.
/// Values may be fractions (`p/q`) or decimals; every cell must appear
/// exactly once, in any order.
pub fn read_tensor_text<T: Scalar>(input: &str) -> Result<Tensor<T>> {
    let mut lines = input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty tensor file".into()))?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected header n=<int>, got {header:?}")))?;
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    let mut seen = vec![false; n * n * n];
    let mut tensor = Tensor::new_fill(n, T::zero());
    let mut count = 0usize;
    for line in lines {
        let mut parts = line.split_whitespace();
        let mut next_index = || -> Result<usize> {
            let tok = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("short line {line:?}")))?;
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {tok:?} in line {line:?}")))?;
            if !(1..=n).contains(&v) {
                return Err(Error::Parse(format!("index {v} out of range 1..={n}")));
            }
            Ok(v)
        };
        let i = next_index()?;
        let j = next_index()?;
        let k = next_index()?;
        let val_tok = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("missing value in line {line:?}")))?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens in line {line:?}")));
        }
        let value = T::parse_number(val_tok)?;
        let pos = (i - 1) * n * n + (j - 1) * n + (k - 1);
        if seen[pos] {
            return Err(Error::Parse(format!("cell ({i}, {j}, {k}) listed twice")));
        }
        seen[pos] = true;
        tensor.set(i, j, k, value);
        count += 1;
    }
    if count != n * n * n {
        return Err(Error::Parse(format!(
            "expected {} cells, found {count}",
            n * n * n
        )));
    }
    Ok(tensor)
}

/// Writes the tensor text format in lexicographic cell order.
pub fn write_tensor_text<T: Scalar>(t: &Tensor<T>) -> String {
    let mut out = format!("n={}\n", t.n());
    for ((i, j, k), v) in t.iter_cells() {
        out.push_str(&format!("{i} {j} {k} {}\n", v.format_number()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn r(n: i64, d: i64) -> Rat {
        Rat::from_ratio(n, d)
    }

    #[test]
    fn cell_classes_partition_the_cube() {
        for n in 2..=8 {
            let mut counts = std::collections::HashMap::new();
            for (i, j, k) in all_cells(n) {
                *counts.entry(classify_cell(i, j, k)).or_insert(0usize) += 1;
            }
            assert_eq!(counts[&CellClass::AllEqual], n);
            assert_eq!(counts[&CellClass::Eq12], n * (n - 1));
            assert_eq!(counts[&CellClass::Eq13], n * (n - 1));
            assert_eq!(counts[&CellClass::Eq23], n * (n - 1));
            let distinct = counts.get(&CellClass::AllDistinct).copied().unwrap_or(0);
            assert_eq!(distinct, n * (n - 1) * (n - 2));
            for (&cl, &got) in &counts {
                assert_eq!(class_size(cl, n), got);
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_cell(2, 2, 2), CellClass::AllEqual);
        assert_eq!(classify_cell(1, 1, 2), CellClass::Eq12);
        assert_eq!(classify_cell(1, 2, 1), CellClass::Eq13);
        assert_eq!(classify_cell(2, 1, 1), CellClass::Eq23);
        assert_eq!(classify_cell(1, 2, 3), CellClass::AllDistinct);
    }

    #[test]
    fn normalization_and_validation() {
        let t = Tensor::new_fill(2, r(1, 8));
        let p = ProbabilityTensor::new(t).unwrap();
        assert_eq!(*p.get(1, 2, 1), r(1, 8));

        let w = Tensor::new_fill(2, r(3, 1));
        let p = ProbabilityTensor::from_unnormalized(w).unwrap();
        assert_eq!(*p.get(2, 2, 2), r(1, 8));

        let zero = Tensor::new_fill(2, r(0, 1));
        assert!(matches!(
            ProbabilityTensor::from_unnormalized(zero),
            Err(Error::ZeroMass)
        ));

        let mut bad = Tensor::new_fill(2, r(1, 8));
        bad.set(1, 1, 2, r(-1, 8));
        assert!(matches!(
            ProbabilityTensor::new(bad),
            Err(Error::NegativeEntry(1, 1, 2))
        ));

        let short = Tensor::new_fill(2, r(1, 16));
        assert!(matches!(
            ProbabilityTensor::new(short),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn marginal_totals_are_exact() {
        // Arbitrary normalized rational tensor with distinct entries.
        let mut w = Tensor::new_fill(3, r(0, 1));
        let mut c = 1i64;
        for i in 1..=3 {
            for j in 1..=3 {
                for k in 1..=3 {
                    w.set(i, j, k, r(c, 1));
                    c += 1;
                }
            }
        }
        let p = ProbabilityTensor::from_unnormalized(w).unwrap();
        for axis in [Axis::First, Axis::Second, Axis::Third] {
            let m = p.marginalize(axis);
            assert_eq!(m.total(), r(1, 1));
        }
        // Summing axis 3 leaves the (rater1, rater2) table.
        let m12 = p.marginalize(Axis::Third);
        let expect = (1..=3).fold(r(0, 1), |acc, k| {
            acc + p.get(2, 3, k).clone()
        });
        assert_eq!(*m12.get(2, 3), expect);
    }

    #[test]
    fn text_format_round_trips() {
        let t = Tensor::from_fn(2, |i, j, k| r((i * 4 + j * 2 + k) as i64, 37));
        let s = write_tensor_text(&t);
        let back: Tensor<Rat> = read_tensor_text(&s).unwrap();
        assert_eq!(back, t);

        // Decimal values are accepted too.
        let txt = "n=1\n1 1 1 0.25\n";
        let t: Tensor<Rat> = read_tensor_text(txt).unwrap();
        assert_eq!(*t.get(1, 1, 1), r(1, 4));

        let missing = "n=2\n1 1 1 1\n";
        assert!(read_tensor_text::<Rat>(missing).is_err());
        let dup = "n=1\n1 1 1 0.5\n1 1 1 0.5\n";
        assert!(read_tensor_text::<Rat>(dup).is_err());
    }

    #[test]
    fn axis_indexing() {
        assert!(Axis::from_index(0).is_err());
        assert!(Axis::from_index(4).is_err());
        for ix in 1..=3 {
            assert_eq!(Axis::from_index(ix).unwrap().index(), ix);
        }
    }
}
