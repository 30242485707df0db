//! Dense simplex method for the Chebyshev-centre linear program.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_PIVOTS: usize = 10_000;

/// Maximises `cᵀx` subject to `Ax ≤ b`, `x ≥ 0`, for `b ≥ 0` (the slack basis
/// is feasible, so no phase one). Bland's rule rules out cycling.
pub fn maximize<T: Real>(c: &[T], a: &[Vec<T>], b: &[T]) -> Result<(Vec<T>, T)> {
    let n = c.len();
    let m = a.len();
    if b.iter().any(|&x| x < T::zero()) {
        return Err(Error::LpFailure("right-hand side must be non-negative".into()));
    }
    let width = n + m + 1;
    let mut tab = vec![T::zero(); (m + 1) * width];
    for i in 0..m {
        tab[i * width..i * width + n].copy_from_slice(&a[i]);
        tab[i * width + n + i] = T::one();
        tab[i * width + width - 1] = b[i];
    }
    // objective row holds -c; optimal when no entry is negative
    for j in 0..n {
        tab[m * width + j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let tol = T::epsilon() * T::lit(1e3);
    for _ in 0..MAX_PIVOTS {
        let Some(col) = (0..n + m).find(|&j| tab[m * width + j] < -tol) else {
            let mut x = vec![T::zero(); n];
            for (i, &bi) in basis.iter().enumerate() {
                if bi < n {
                    x[bi] = tab[i * width + width - 1];
                }
            }
            return Ok((x, tab[m * width + width - 1]));
        };
        let mut row: Option<(usize, T)> = None;
        for i in 0..m {
            let aij = tab[i * width + col];
            if aij > tol {
                let ratio = tab[i * width + width - 1] / aij;
                row = match row {
                    Some((r, best)) if ratio > best || (ratio == best && basis[i] > basis[r]) => Some((r, best)),
                    _ => Some((i, ratio)),
                };
            }
        }
        let Some((r, _)) = row else {
            return Err(Error::LpFailure("objective is unbounded".into()));
        };
        let pivot = tab[r * width + col];
        for j in 0..width {
            tab[r * width + j] /= pivot;
        }
        for i in 0..=m {
            if i == r {
                continue;
            }
            let f = tab[i * width + col];
            if f != T::zero() {
                for j in 0..width {
                    let v = tab[r * width + j];
                    tab[i * width + j] -= f * v;
                }
            }
        }
        basis[r] = col;
    }
    Err(Error::LpFailure(format!("no optimum after {MAX_PIVOTS} pivots")))
}

/// Largest ball inside `{y : a_i·y ≤ b_i}` given a strictly interior point.
/// Returns `(centre, radius)`.
pub fn chebyshev_center_halfspaces<T: Real>(
    normals: &[Vec<T>],
    offsets: &[T],
    interior: &[T],
) -> Result<(Vec<T>, T)> {
    let d = interior.len();
    let mut a = Vec::with_capacity(normals.len());
    let mut b = Vec::with_capacity(normals.len());
    for (ai, &bi) in normals.iter().zip(offsets) {
        let slack = bi - crate::geometry::linalg::dot(ai, interior);
        if !(slack > T::zero()) {
            return Err(Error::LpFailure("reference point is not strictly interior".into()));
        }
        let norm = crate::geometry::linalg::norm(ai);
        let mut row: Vec<T> = ai.clone();
        row.extend(ai.iter().map(|&x| -x));
        row.push(norm);
        a.push(row);
        b.push(slack);
    }
    let mut c = vec![T::zero(); 2 * d + 1];
    c[2 * d] = T::one();
    let (x, r) = maximize(&c, &a, &b)?;
    let centre = (0..d).map(|j| interior[j] + x[j] - x[d + j]).collect();
    Ok((centre, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_program() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let (x, v): (Vec<f64>, f64) = maximize(
            &[3.0, 5.0],
            &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            &[4.0, 12.0, 18.0],
        )
        .unwrap();
        assert!((v - 36.0).abs() < 1e-12);
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_program_is_reported() {
        assert!(matches!(
            maximize(&[1.0, 0.0], &[vec![0.0, 1.0]], &[1.0]),
            Err(Error::LpFailure(_))
        ));
    }

    #[test]
    fn rectangle_radius_is_half_the_short_side() {
        // [0, 4] × [0, 1]
        let normals: Vec<Vec<f64>> = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let offsets = [4.0, 0.0, 1.0, 0.0];
        let (c, r) = chebyshev_center_halfspaces(&normals, &offsets, &[2.0, 0.5]).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
        assert!((c[1] - 0.5).abs() < 1e-12);
        assert!(c[0] >= 0.5 - 1e-12 && c[0] <= 3.5 + 1e-12);
    }
}
