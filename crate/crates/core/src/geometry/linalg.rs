//! Small dense linear algebra on row-major slices.

use crate::scalar::Real;

/// LU factorisation with partial pivoting. Returns `(lu, sign)` or `None`
/// when a pivot is exactly zero.
fn lu<T: Real>(a: &[T], n: usize) -> Option<(Vec<T>, T)> {
    let mut m = a.to_vec();
    let mut sign = T::one();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| {
            m[i * n + k]
                .abs()
                .partial_cmp(&m[j * n + k].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[p * n + k] == T::zero() {
            return None;
        }
        if p != k {
            for c in 0..n {
                m.swap(k * n + c, p * n + c);
            }
            sign = -sign;
        }
        let pivot = m[k * n + k];
        for i in k + 1..n {
            let f = m[i * n + k] / pivot;
            m[i * n + k] = f;
            for j in k + 1..n {
                let v = m[k * n + j];
                m[i * n + j] -= f * v;
            }
        }
    }
    Some((m, sign))
}

pub fn determinant<T: Real>(a: &[T], n: usize) -> T {
    match lu(a, n) {
        Some((m, sign)) => (0..n).fold(sign, |acc, i| acc * m[i * n + i]),
        None => T::zero(),
    }
}

/// `ln |det a|`, or `-∞` for a singular matrix. Does not underflow for
/// products of many small pivots.
pub fn log_abs_determinant<T: Real>(a: &[T], n: usize) -> T {
    match lu(a, n) {
        Some((m, _)) => (0..n).map(|i| m[i * n + i].abs().ln()).sum(),
        None => T::neg_infinity(),
    }
}

/// Solves `a·x = b`.
pub fn solve<T: Real>(a: &[T], n: usize, b: &[T]) -> Option<Vec<T>> {
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| {
            m[i * n + k]
                .abs()
                .partial_cmp(&m[j * n + k].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[p * n + k] == T::zero() {
            return None;
        }
        if p != k {
            for c in 0..n {
                m.swap(k * n + c, p * n + c);
            }
            rhs.swap(k, p);
        }
        for i in k + 1..n {
            let f = m[i * n + k] / m[k * n + k];
            for j in k..n {
                let v = m[k * n + j];
                m[i * n + j] -= f * v;
            }
            let v = rhs[k];
            rhs[i] -= f * v;
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let s: T = (i + 1..n).map(|j| m[i * n + j] * x[j]).sum();
        x[i] = (rhs[i] - s) / m[i * n + i];
    }
    Some(x)
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// Determinant of the Gram matrix of `vectors`: the squared k-volume of the
/// parallelotope they span.
pub fn gram_determinant<T: Real>(vectors: &[Vec<T>]) -> T {
    let k = vectors.len();
    if k == 0 {
        return T::one();
    }
    let mut g = vec![T::zero(); k * k];
    for i in 0..k {
        for j in i..k {
            let v = dot(&vectors[i], &vectors[j]);
            g[i * k + j] = v;
            g[j * k + i] = v;
        }
    }
    determinant(&g, k).max(T::zero())
}

/// Vector orthogonal to the `k - 1` rows of `rows` in ℝᵏ (generalised cross
/// product by cofactors). Zero when the rows are dependent.
pub fn cofactor_normal<T: Real>(rows: &[Vec<T>], k: usize) -> Vec<T> {
    debug_assert_eq!(rows.len() + 1, k);
    (0..k)
        .map(|skip| {
            let minor: Vec<T> = rows
                .iter()
                .flat_map(|r| r.iter().enumerate().filter(|&(c, _)| c != skip).map(|(_, &v)| v))
                .collect();
            let det = determinant(&minor, k - 1);
            if skip % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Orthonormal basis of the orthogonal complement of unit vector `a` in ℝᵏ.
pub fn complement_basis<T: Real>(a: &[T]) -> Vec<Vec<T>> {
    let k = a.len();
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(k - 1);
    let mut candidates: Vec<usize> = (0..k).collect();
    // start from the axes least aligned with a
    candidates.sort_by(|&i, &j| a[i].abs().partial_cmp(&a[j].abs()).unwrap_or(std::cmp::Ordering::Equal));
    for i in candidates {
        if basis.len() == k - 1 {
            break;
        }
        let mut v = vec![T::zero(); k];
        v[i] = T::one();
        let p = dot(&v, a);
        for (x, &ai) in v.iter_mut().zip(a) {
            *x -= p * ai;
        }
        for b in &basis {
            let p = dot(&v, b);
            for (x, &bi) in v.iter_mut().zip(b) {
                *x -= p * bi;
            }
        }
        let nv = norm(&v);
        if nv > T::lit(1e-3) {
            basis.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    basis
}
