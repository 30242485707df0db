//! Singular values of small dense matrices.
//!
//! The primary route takes square roots of the eigenvalues of `AᵀA`, found by
//! cyclic Jacobi rotations. The Gram matrix squares the condition number, so
//! σ_min carries a relative error near ε·(σ_max/σ_min)². Once the spread drops
//! below [`ESCALATE_RATIO`] we recompute. Exact integer matrices go through
//! compound matrices: `σ₁⋯σ_k` is the largest singular value of the matrix of
//! k×k minors, the minors are exact, and a largest singular value is always
//! relatively accurate. Real matrices fall back to one-sided (Hestenes)
//! Jacobi directly on `A`.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{ExactMatrix, LinearMap};

const MAX_SWEEPS: usize = 64;

/// σ_min/σ_max below which the Gram route is not trusted.
pub const ESCALATE_RATIO: f64 = 1e-2;

/// Descending singular values of an exact or real matrix.
pub fn singular_values<A: LinearMap>(map: &A) -> Result<Vec<f64>> {
    let n = map.size();
    let sv = gram_route(&map.real_entries::<f64>(), n)?;
    if sv[n - 1] >= ESCALATE_RATIO * sv[0] {
        return Ok(sv);
    }
    match map.exact() {
        Some(m) => compound_route(m),
        None => one_sided_jacobi(&map.real_entries::<f64>(), n),
    }
}

pub fn singular_values_real<T: Real>(a: &[T], n: usize) -> Result<Vec<T>> {
    let sv = gram_route(a, n)?;
    if sv[n - 1] < T::lit(ESCALATE_RATIO) * sv[0] {
        return one_sided_jacobi(a, n);
    }
    Ok(sv)
}

fn compound_route(m: &ExactMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    let mut prev = 1.0;
    let mut sv = Vec::with_capacity(n);
    for k in 1..=n {
        let c = m.compound_f64(k);
        let size = (c.len() as f64).sqrt().round() as usize;
        let top = gram_route(&c, size)?[0];
        sv.push(top / prev);
        prev = top;
    }
    Ok(sv)
}

fn gram_route<T: Real>(a: &[T], n: usize) -> Result<Vec<T>> {
    let mut gram = vec![T::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let v: T = (0..n).map(|k| a[k * n + i] * a[k * n + j]).sum();
            gram[i * n + j] = v;
            gram[j * n + i] = v;
        }
    }
    let mut sv: Vec<T> = jacobi_eigenvalues(&mut gram, n)?
        .into_iter()
        .map(|e| e.max(T::zero()).sqrt())
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(sv)
}

fn jacobi_eigenvalues<T: Real>(s: &mut [T], n: usize) -> Result<Vec<T>> {
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = s[p * n + q];
                // negligible against the diagonal: the eigenvalues are already
                // relatively accurate, and rounding would keep it from reaching 0
                if apq.abs() <= eps * (s[p * n + p] * s[q * n + q]).abs().sqrt() {
                    s[p * n + q] = T::zero();
                    s[q * n + p] = T::zero();
                    continue;
                }
                rotated = true;
                let theta = (s[q * n + q] - s[p * n + p]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (skp, skq) = (s[k * n + p], s[k * n + q]);
                    s[k * n + p] = c * skp - sn * skq;
                    s[k * n + q] = sn * skp + c * skq;
                }
                for k in 0..n {
                    let (spk, sqk) = (s[p * n + k], s[q * n + k]);
                    s[p * n + k] = c * spk - sn * sqk;
                    s[q * n + k] = sn * spk + c * sqk;
                }
            }
        }
        if !rotated {
            return Ok((0..n).map(|i| s[i * n + i]).collect());
        }
    }
    Err(Error::SvdFailure)
}

fn one_sided_jacobi<T: Real>(a: &[T], n: usize) -> Result<Vec<T>> {
    // columns of u are rotated until mutually orthogonal
    let mut u: Vec<T> = a.to_vec();
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for k in 0..n {
                    let (up, uq) = (u[k * n + p], u[k * n + q]);
                    alpha += up * up;
                    beta += uq * uq;
                    gamma += up * uq;
                }
                if gamma.abs() <= eps * (alpha * beta).sqrt() || gamma == T::zero() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let (up, uq) = (u[k * n + p], u[k * n + q]);
                    u[k * n + p] = c * up - s * uq;
                    u[k * n + q] = s * up + c * uq;
                }
            }
        }
        if !rotated {
            let mut sv: Vec<T> = (0..n)
                .map(|c| (0..n).map(|k| u[k * n + c] * u[k * n + c]).sum::<T>().sqrt())
                .collect();
            sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
            return Ok(sv);
        }
    }
    Err(Error::SvdFailure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{ExactMatrix, GeneratorSet, MatrixProduct, Word};
    use proptest::prelude::*;

    fn oracle(a: &[f64], n: usize) -> Vec<f64> {
        let m = nalgebra::DMatrix::from_row_slice(n, n, a);
        let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
        s.sort_by(|x, y| y.partial_cmp(x).unwrap());
        s
    }

    #[test]
    fn identity_and_permutation() {
        assert_eq!(singular_values(&ExactMatrix::identity(3)).unwrap(), vec![1.0; 3]);
        let p = ExactMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap();
        for s in singular_values(&p).unwrap() {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rauzy_generator_product_is_one() {
        let g = GeneratorSet::rauzy();
        let s = singular_values(g.generators()[0].matrix()).unwrap();
        assert!((s.iter().product::<f64>() - 1.0).abs() < 1e-9);
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn ill_conditioned_falls_back_to_one_sided() {
        let a: [f64; 9] = [1e8, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1e-8];
        let s = singular_values_real(&a, 3).unwrap();
        assert!((s[2] - 1e-8).abs() < 1e-20);
        assert!((s[0] - 1e8).abs() < 1e-6);
    }

    #[test]
    fn works_in_single_precision() {
        let s = singular_values_real(&[2.0f32, 0.0, 0.0, 3.0], 2).unwrap();
        assert!((s[0] - 3.0).abs() < 1e-5 && (s[1] - 2.0).abs() < 1e-5);
    }

    #[test]
    fn deep_products_keep_the_determinant_constraint() {
        let g = GeneratorSet::rauzy();
        let letters: Vec<u16> = (0..60).map(|i| ((i * 7 + i / 3) % 3) as u16).collect();
        let p = MatrixProduct::of_word(&g, &Word::new(letters, 3).unwrap()).unwrap();
        let s = singular_values(&p).unwrap();
        assert!(s[2] < 1e-12 * s[0]);
        assert!((s.iter().product::<f64>() - 1.0).abs() < 1e-12);
        let o = oracle(&p.matrix.to_real::<f64>(), 3);
        assert!((s[0] - o[0]).abs() < 1e-12 * o[0]);
    }

    proptest! {
        #[test]
        fn determinant_constraint_to_length_20(letters in prop::collection::vec(0u16..3, 0..=20)) {
            let g = GeneratorSet::rauzy();
            let p = MatrixProduct::of_word(&g, &Word::new(letters, 3).unwrap()).unwrap();
            let s = singular_values(&p).unwrap();
            prop_assert!((s.iter().product::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(s.iter().all(|&x| x > 0.0));
            let o = oracle(&p.matrix.to_real::<f64>(), 3);
            for (x, y) in s.iter().zip(&o) {
                prop_assert!((x - y).abs() <= 1e-9 * y.max(1.0));
            }
        }
    }
}
