//! Exact algebra over the generator semigroup and traversal of its word tree.

mod counting;
mod enumerate;
mod exact;
mod svd;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

pub use counting::{count_norm_cap, count_norm_cap_dfs, for_each_norm, is_rauzy_triple};
pub use enumerate::{enumerate_words, Execution, PruningPolicy, TraversalSummary, WordNode, WordVisitor};
pub use exact::ExactMatrix;
pub use svd::{singular_values, singular_values_real};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A finite word over the generator alphabet. Letters are stored 0-based and
/// displayed 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Builds a word from 0-based letters, checking them against the alphabet size.
    pub fn new(letters: Vec<u16>, alphabet: usize) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l as usize >= alphabet) {
            return Err(Error::InvalidArgument(format!(
                "letter {} outside alphabet of size {alphabet}",
                bad + 1
            )));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn push(&mut self, letter: u16) {
        self.0.push(letter);
    }

    pub(crate) fn pop(&mut self) -> Option<u16> {
        self.0.pop()
    }

    pub(crate) fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    /// Number of distinct letters used.
    pub fn distinct_letters(&self) -> usize {
        let mut seen: Vec<u16> = self.0.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", l + 1)?;
        }
        write!(f, ")")
    }
}

/// A word followed by a hole index, naming the hole `T_word(∇_hole)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedWord {
    pub word: Word,
    pub hole: usize,
}

impl ExtendedWord {
    pub fn new(word: Word, hole: usize, holes: usize) -> Result<Self> {
        if hole >= holes {
            return Err(Error::InvalidArgument(format!(
                "hole index {} outside 1..={holes}",
                hole + 1
            )));
        }
        Ok(Self { word, hole })
    }
}

/// Non-negative integer matrix with determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    matrix: ExactMatrix,
    det_sign: i8,
}

impl GeneratorMatrix {
    /// Validates non-negativity and unimodularity. `index` is only used in
    /// error messages.
    pub fn new(rows: &[Vec<i64>], index: usize) -> Result<Self> {
        let matrix = ExactMatrix::from_rows(rows).ok_or_else(|| {
            Error::Config(format!("generator {} is not a square matrix", index + 1))
        })?;
        for (r, row) in rows.iter().enumerate() {
            if let Some(c) = row.iter().position(|&x| x < 0) {
                return Err(Error::NegativeEntry { what: "generator", index: index + 1, row: r + 1, col: c + 1 });
            }
        }
        let det = matrix.determinant();
        if det.abs() != BigInt::from(1) {
            return Err(Error::NotUnimodular { index: index + 1, det: det.to_string() });
        }
        let det_sign = if det.is_negative() { -1 } else { 1 };
        Ok(Self { matrix, det_sign })
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Non-negative real matrix with |det| = 1 whose projectivisation maps Δ onto
/// the closure of a main hole.
#[derive(Clone, Debug, PartialEq)]
pub struct HoleMatrix {
    n: usize,
    entries: Vec<f64>,
    det: f64,
}

impl HoleMatrix {
    pub fn new(rows: &[Vec<f64>], index: usize) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Config(format!("hole matrix {} is not square", index + 1)));
        }
        for (r, row) in rows.iter().enumerate() {
            if let Some(c) = row.iter().position(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::NegativeEntry { what: "hole matrix", index: index + 1, row: r + 1, col: c + 1 });
            }
        }
        let entries: Vec<f64> = rows.iter().flatten().copied().collect();
        let det = crate::geometry::linalg::determinant(&entries, n);
        if (det.abs() - 1.0).abs() > 1e-12 {
            return Err(Error::HoleDeterminant { index: index + 1, det });
        }
        Ok(Self { n, entries, det })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn determinant(&self) -> f64 {
        self.det
    }

    /// Columns normalised to unit l¹ norm: the vertices of the hole simplex.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        (0..n)
            .map(|c| {
                let col: Vec<f64> = (0..n).map(|r| self.entries[r * n + c]).collect();
                let s: f64 = col.iter().sum();
                col.into_iter().map(|x| x / s).collect()
            })
            .collect()
    }
}

/// Validated family of generators of one dimension.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    generators: Vec<GeneratorMatrix>,
    prunable: bool,
}

impl GeneratorSet {
    pub fn new(generators: Vec<GeneratorMatrix>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::Config("at least one generator is required".into()));
        };
        let n = first.dim();
        if n < 3 {
            return Err(Error::Config("dimension must be at least 2".into()));
        }
        if let Some(i) = generators.iter().position(|g| g.dim() != n) {
            return Err(Error::Config(format!("generator {} has the wrong size", i + 1)));
        }
        if let Some(i) = generators
            .iter()
            .position(|g| g.matrix().column_sums().iter().any(|s| *s < BigInt::from(1)))
        {
            return Err(Error::ColumnSumTooSmall { index: i + 1 });
        }
        // A permutation generator leaves the norm unchanged, so norm-capped
        // sets would be infinite.
        let prunable = generators.iter().all(|g| !g.matrix().is_permutation());
        Ok(Self { generators, prunable })
    }

    pub fn from_rows(rows: &[Vec<Vec<i64>>]) -> Result<Self> {
        let gens = rows
            .iter()
            .enumerate()
            .map(|(i, r)| GeneratorMatrix::new(r, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens)
    }

    /// The three parabolic generators of the Rauzy gasket.
    pub fn rauzy() -> Self {
        Self::from_rows(&rauzy_rows()).expect("Rauzy generators are valid")
    }

    pub fn generators(&self) -> &[GeneratorMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Matrix size `d + 1`.
    pub fn matrix_size(&self) -> usize {
        self.generators[0].dim()
    }

    /// Simplex dimension `d`.
    pub fn dimension(&self) -> usize {
        self.matrix_size() - 1
    }

    /// Whether norm-cap traversal is guaranteed to terminate.
    pub fn supports_norm_cap(&self) -> bool {
        self.prunable
    }
}

pub(crate) fn rauzy_rows() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![1, 1, 1], vec![0, 1, 0], vec![0, 0, 1]],
        vec![vec![1, 0, 0], vec![1, 1, 1], vec![0, 0, 1]],
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 1]],
    ]
}

/// An exact product `N_{i₁}⋯N_{iₙ}` together with its word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixProduct {
    pub matrix: ExactMatrix,
    pub word: Word,
}

impl MatrixProduct {
    pub fn identity(size: usize) -> Self {
        Self { matrix: ExactMatrix::identity(size), word: Word::empty() }
    }

    /// Product for a whole word, by repeated [`compose`].
    pub fn of_word(gens: &GeneratorSet, word: &Word) -> Result<Self> {
        word.letters()
            .iter()
            .try_fold(Self::identity(gens.matrix_size()), |p, &l| compose(gens, &p, l as usize))
    }
}

/// Right-multiplies `prefix` by generator `letter` (0-based).
pub fn compose(gens: &GeneratorSet, prefix: &MatrixProduct, letter: usize) -> Result<MatrixProduct> {
    let g = gens.generators().get(letter).ok_or_else(|| {
        Error::InvalidArgument(format!("letter {} outside alphabet of size {}", letter + 1, gens.len()))
    })?;
    let mut word = prefix.word.clone();
    word.push(letter as u16);
    Ok(MatrixProduct { matrix: prefix.matrix.mul(g.matrix()), word })
}

/// l¹→l¹ operator norm (maximum column sum) of a non-negative product.
pub fn l1_operator_norm(product: &MatrixProduct) -> BigInt {
    product.matrix.max_column_sum()
}

/// Anything with a linear action on ℝ^{d+1}.
pub trait LinearMap {
    fn size(&self) -> usize;
    fn real_entries<T: Real>(&self) -> Vec<T>;
    /// The exact integer matrix, when there is one.
    fn exact(&self) -> Option<&ExactMatrix> {
        None
    }
}

impl LinearMap for ExactMatrix {
    fn size(&self) -> usize {
        self.dim()
    }
    fn real_entries<T: Real>(&self) -> Vec<T> {
        self.to_real()
    }
    fn exact(&self) -> Option<&ExactMatrix> {
        Some(self)
    }
}

impl LinearMap for MatrixProduct {
    fn size(&self) -> usize {
        self.matrix.dim()
    }
    fn real_entries<T: Real>(&self) -> Vec<T> {
        self.matrix.to_real()
    }
    fn exact(&self) -> Option<&ExactMatrix> {
        Some(&self.matrix)
    }
}

impl LinearMap for GeneratorMatrix {
    fn size(&self) -> usize {
        self.dim()
    }
    fn real_entries<T: Real>(&self) -> Vec<T> {
        self.matrix.to_real()
    }
    fn exact(&self) -> Option<&ExactMatrix> {
        Some(&self.matrix)
    }
}

impl LinearMap for HoleMatrix {
    fn size(&self) -> usize {
        self.n
    }
    fn real_entries<T: Real>(&self) -> Vec<T> {
        self.entries.iter().map(|&x| T::lit(x)).collect()
    }
}

/// A dense real matrix, e.g. `N_i · M_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    pub size: usize,
    pub entries: Vec<f64>,
}

impl RealMatrix {
    /// `lhs · rhs` in floating point.
    pub fn product<A: LinearMap, B: LinearMap>(lhs: &A, rhs: &B) -> Self {
        let n = lhs.size();
        assert_eq!(n, rhs.size(), "dimension mismatch");
        let (a, b) = (lhs.real_entries::<f64>(), rhs.real_entries::<f64>());
        let entries = (0..n * n)
            .map(|ij| (0..n).map(|k| a[(ij / n) * n + k] * b[k * n + ij % n]).sum())
            .collect();
        Self { size: n, entries }
    }

    pub fn max_column_sum(&self) -> f64 {
        let n = self.size;
        (0..n)
            .map(|c| (0..n).map(|r| self.entries[r * n + c]).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl LinearMap for RealMatrix {
    fn size(&self) -> usize {
        self.size
    }
    fn real_entries<T: Real>(&self) -> Vec<T> {
        self.entries.iter().map(|&x| T::lit(x)).collect()
    }
}

/// Applies `N` and renormalises to unit l¹ norm.
pub fn apply_normalized<T: Real>(entries: &[T], n: usize, x: &[T]) -> Vec<T> {
    let mut y: Vec<T> = (0..n)
        .map(|r| (0..n).map(|c| entries[r * n + c] * x[c]).sum())
        .collect();
    let s: T = y.iter().copied().sum();
    for v in &mut y {
        *v /= s;
    }
    y
}

/// Checks that `x` is a point of the standard simplex.
pub fn check_on_simplex<T: Real>(x: &[T]) -> Result<()> {
    let tol = T::default_tolerance().sqrt();
    if x.iter().any(|&v| v < -tol || !v.is_finite()) {
        return Err(Error::InvalidArgument("point has a negative coordinate".into()));
    }
    let s: T = x.iter().copied().sum();
    if (s - T::one()).abs() > tol {
        return Err(Error::InvalidArgument(format!("point has l¹ norm {s}, expected 1")));
    }
    Ok(())
}

/// The projective action `x ↦ N·x / |N·x|` on the standard simplex.
pub fn projectivize<T: Real, A: LinearMap>(map: &A, x: &[T]) -> Result<Vec<T>> {
    let n = map.size();
    if x.len() != n {
        return Err(Error::InvalidArgument(format!("point has {} coordinates, expected {n}", x.len())));
    }
    check_on_simplex(x)?;
    Ok(apply_normalized(&map.real_entries::<T>(), n, x))
}

/// Exact norm as an `f64`, saturating at infinity.
pub fn norm_f64(product: &MatrixProduct) -> f64 {
    l1_operator_norm(product).to_f64().unwrap_or(f64::INFINITY)
}
