//! Square integer matrices with 64-bit fast path and arbitrary precision fallback.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Real;

#[derive(Clone, Debug)]
enum Repr {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

/// Exact square integer matrix, row-major.
///
/// Entries live in `i64` until a product would overflow, at which point the
/// whole matrix is promoted to [`BigInt`]. Promotion is one-way.
#[derive(Clone, Debug)]
pub struct ExactMatrix {
    n: usize,
    repr: Repr,
}

impl ExactMatrix {
    pub fn identity(n: usize) -> Self {
        let mut v = vec![0i64; n * n];
        for i in 0..n {
            v[i * n + i] = 1;
        }
        Self { n, repr: Repr::Small(v) }
    }

    /// Builds from rows; `None` if the rows are ragged or not square.
    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self {
            n,
            repr: Repr::Small(rows.iter().flatten().copied().collect()),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Whether the entries have been promoted past 64 bits.
    pub fn is_promoted(&self) -> bool {
        matches!(self.repr, Repr::Big(_))
    }

    pub fn get(&self, row: usize, col: usize) -> BigInt {
        match &self.repr {
            Repr::Small(v) => BigInt::from(v[row * self.n + col]),
            Repr::Big(v) => v[row * self.n + col].clone(),
        }
    }

    pub fn get_f64(&self, row: usize, col: usize) -> f64 {
        match &self.repr {
            Repr::Small(v) => v[row * self.n + col] as f64,
            Repr::Big(v) => v[row * self.n + col].to_f64().unwrap_or(f64::INFINITY),
        }
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// Entries as `i64` rows, if no promotion happened.
    pub fn rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        match &self.repr {
            Repr::Small(v) => Some(v.chunks(self.n).map(<[i64]>::to_vec).collect()),
            Repr::Big(_) => None,
        }
    }

    fn to_big(&self) -> Vec<BigInt> {
        match &self.repr {
            Repr::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            Repr::Big(v) => v.clone(),
        }
    }

    pub fn min_entry_is_nonnegative(&self) -> bool {
        match &self.repr {
            Repr::Small(v) => v.iter().all(|&x| x >= 0),
            Repr::Big(v) => v.iter().all(|x| !x.is_negative()),
        }
    }

    pub fn max_abs_entry(&self) -> BigInt {
        match &self.repr {
            Repr::Small(v) => BigInt::from(v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)),
            Repr::Big(v) => v.iter().map(|x| x.abs()).max().unwrap_or_default(),
        }
    }

    /// Exact product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        if let (Repr::Small(a), Repr::Small(b)) = (&self.repr, &rhs.repr) {
            if let Some(out) = mul_small(a, b, n) {
                return Self { n, repr: Repr::Small(out) };
            }
        }
        let (a, b) = (self.to_big(), rhs.to_big());
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = &a[i * n + k];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += aik * &b[k * n + j];
                }
            }
        }
        Self { n, repr: Repr::Big(out) }
    }

    /// Column sums, i.e. the row vector `1ᵀ·self`.
    pub fn column_sums(&self) -> Vec<BigInt> {
        let n = self.n;
        match &self.repr {
            Repr::Small(v) => (0..n)
                .map(|c| (0..n).map(|r| BigInt::from(v[r * n + c])).sum())
                .collect(),
            Repr::Big(v) => (0..n)
                .map(|c| (0..n).map(|r| &v[r * n + c]).sum())
                .collect(),
        }
    }

    /// Column sums as `u64` when they fit and the matrix is non-negative.
    pub fn column_sums_u64(&self) -> Option<Vec<u64>> {
        let n = self.n;
        match &self.repr {
            Repr::Small(v) => (0..n)
                .map(|c| {
                    (0..n).try_fold(0u64, |acc, r| {
                        let x = u64::try_from(v[r * n + c]).ok()?;
                        acc.checked_add(x)
                    })
                })
                .collect(),
            Repr::Big(_) => self.column_sums().iter().map(|s| s.to_u64()).collect(),
        }
    }

    pub fn column_sums_f64(&self) -> Vec<f64> {
        let n = self.n;
        match &self.repr {
            Repr::Small(v) => (0..n)
                .map(|c| (0..n).map(|r| v[r * n + c] as f64).sum())
                .collect(),
            Repr::Big(_) => self
                .column_sums()
                .iter()
                .map(|s| s.to_f64().unwrap_or(f64::INFINITY))
                .collect(),
        }
    }

    /// Maximum column sum. For a non-negative matrix this is the l¹→l¹
    /// operator norm.
    pub fn max_column_sum(&self) -> BigInt {
        self.column_sums().into_iter().max().unwrap_or_default()
    }

    /// Row-major floating point copy.
    pub fn to_real<T: Real>(&self) -> Vec<T> {
        match &self.repr {
            Repr::Small(v) => v.iter().map(|&x| T::lit(x as f64)).collect(),
            Repr::Big(v) => v
                .iter()
                .map(|x| T::lit(x.to_f64().unwrap_or(f64::INFINITY)))
                .collect(),
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        let mut a = self.to_big();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[(n - 1) * n + (n - 1)]
    }

    /// k-th compound matrix: all k×k minors, rows and columns indexed by
    /// k-subsets in lexicographic order. Minors are exact; only the final
    /// conversion rounds.
    pub fn compound_f64(&self, k: usize) -> Vec<f64> {
        let subsets = subsets(self.n, k);
        if let Some(out) = self.compound_i128(k, &subsets) {
            return out;
        }
        let big = self.to_big();
        let mut out = Vec::with_capacity(subsets.len() * subsets.len());
        for rows in &subsets {
            for cols in &subsets {
                let sub: Vec<BigInt> = rows
                    .iter()
                    .flat_map(|&r| cols.iter().map(move |&c| r * self.n + c))
                    .map(|i| big[i].clone())
                    .collect();
                let minor = Self { n: k, repr: Repr::Big(sub) }.determinant();
                out.push(minor.to_f64().unwrap_or(f64::INFINITY));
            }
        }
        out
    }

    /// Fast path when every Bareiss intermediate provably fits in `i128`:
    /// products of two minors stay below `(k^{k/2} M^k)² < 2^124`.
    fn compound_i128(&self, k: usize, subsets: &[Vec<usize>]) -> Option<Vec<f64>> {
        let Repr::Small(v) = &self.repr else {
            return None;
        };
        let m = v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0).max(1) as f64;
        let kf = k as f64;
        if 2.0 * (0.5 * kf * kf.log2() + kf * m.log2()) >= 124.0 {
            return None;
        }
        let n = self.n;
        let mut out = Vec::with_capacity(subsets.len() * subsets.len());
        let mut a = vec![0i128; k * k];
        for rows in subsets {
            for cols in subsets {
                for (i, &r) in rows.iter().enumerate() {
                    for (j, &c) in cols.iter().enumerate() {
                        a[i * k + j] = v[r * n + c] as i128;
                    }
                }
                out.push(bareiss_i128(&mut a, k) as f64);
            }
        }
        Some(out)
    }

    /// True when every row and column holds exactly one 1 and zeros elsewhere.
    pub fn is_permutation(&self) -> bool {
        let n = self.n;
        let Some(rows) = self.rows_i64() else {
            return false;
        };
        let ones_ok = |it: &mut dyn Iterator<Item = i64>| {
            let v: Vec<i64> = it.collect();
            v.iter().filter(|&&x| x == 1).count() == 1 && v.iter().all(|&x| x == 0 || x == 1)
        };
        (0..n).all(|r| ones_ok(&mut rows[r].iter().copied()))
            && (0..n).all(|c| ones_ok(&mut (0..n).map(|r| rows[r][c])))
    }
}

fn mul_small(a: &[i64], b: &[i64], n: usize) -> Option<Vec<i64>> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let t = aik.checked_mul(b[k * n + j])?;
                out[i * n + j] = out[i * n + j].checked_add(t)?;
            }
        }
    }
    Some(out)
}

impl PartialEq for ExactMatrix {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for ExactMatrix {}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.n {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.n {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn bareiss_i128(a: &mut [i128], n: usize) -> i128 {
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return 0;
            };
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = a[k * n + k];
    }
    sign * a[(n - 1) * n + (n - 1)]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
