//! Geometry of simplices and convex polytopes lying on the unit simplex
//! `Δ = {x ≥ 0 : |x|₁ = 1}`.
//!
//! Volumes are d-dimensional Lebesgue measure inside the hyperplane
//! `{|x|₁ = 1}` of ℝ^{d+1}, not the measure of a coordinate projection.

pub mod linalg;
mod polytope;
mod simplex;

pub use polytope::{ConvexPolytope, Halfspaces};
pub use simplex::{
    facet_measures_of, image_simplex, inner_neighborhood_volume, log_volume_ratio, simplex_volume, volume_ratio, Simplex,
};

use crate::scalar::{ln_factorial, Real};

/// `ln vol(Δ)` for the standard d-simplex: `vol(Δ) = √(d+1)/d!`.
pub fn standard_simplex_log_volume(d: usize) -> f64 {
    0.5 * ((d + 1) as f64).ln() - ln_factorial(d)
}

pub fn standard_simplex_volume<T: Real>(d: usize) -> T {
    T::lit(standard_simplex_log_volume(d).exp())
}

/// Orthonormal coordinates on the hyperplane `{|x|₁ = 1}` centred at the
/// barycentre of Δ (Helmert basis).
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<T> {
    origin: Vec<T>,
    basis: Vec<Vec<T>>,
}

impl<T: Real> Frame<T> {
    pub fn new(d: usize) -> Self {
        let n = d + 1;
        let origin = vec![T::one() / T::from_usize_lossy(n); n];
        let basis = (1..n)
            .map(|i| {
                let scale = T::from_usize_lossy(i * (i + 1)).sqrt();
                let mut v = vec![T::zero(); n];
                for x in v.iter_mut().take(i) {
                    *x = T::one() / scale;
                }
                v[i] = -T::from_usize_lossy(i) / scale;
                v
            })
            .collect();
        Self { origin, basis }
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn to_local(&self, x: &[T]) -> Vec<T> {
        let shifted = linalg::sub(x, &self.origin);
        self.basis.iter().map(|b| linalg::dot(b, &shifted)).collect()
    }

    pub fn to_ambient(&self, y: &[T]) -> Vec<T> {
        let mut x = self.origin.clone();
        for (b, &c) in self.basis.iter().zip(y) {
            for (xi, &bi) in x.iter_mut().zip(b) {
                *xi += c * bi;
            }
        }
        x
    }
}
