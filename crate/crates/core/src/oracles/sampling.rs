//! Uniform sampling in simplices by exponential spacings: normalised
//! i.i.d. Exp(1) weights are uniform on the standard simplex, and an affine
//! map carries that to any simplex with constant Jacobian.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::scalar::Real;

/// Uniform barycentric weights for `n` vertices.
pub fn uniform_weights<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    let e: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| T::lit(x / s)).collect()
}

/// Uniform point in the simplex with the given vertices.
pub fn uniform_in_simplex<T: Real, R: Rng + ?Sized>(rng: &mut R, vertices: &[Vec<T>]) -> Vec<T> {
    let w: Vec<T> = uniform_weights(rng, vertices.len());
    let dim = vertices[0].len();
    let mut x = vec![T::zero(); dim];
    for (v, &wi) in vertices.iter().zip(&w) {
        for (xi, &vi) in x.iter_mut().zip(v) {
            *xi += wi * vi;
        }
    }
    x
}
