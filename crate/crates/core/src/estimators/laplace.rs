//! The Laplace-type transform `f(t) = ∫₀¹ ε^{t−1} vol(𝓖_ε) dε` and the
//! ε-neighbourhood volumes it integrates, over a truncated hole set.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::standard_simplex_log_volume;
use crate::ifs::{enumerate_holes, HoleNode, HoleVisitor, IfsSystem};
use crate::scalar::ln_factorial;
use crate::words::{Execution, PruningPolicy};

use super::LogSum;

/// `d!/(t(t+1)⋯(t+d)) = ∫₀¹ y^{t−1}(1−y)^d dy`.
pub fn bernoulli_coefficient(t: f64, d: usize) -> f64 {
    let log_den: f64 = (0..=d).map(|k| (t + k as f64).ln()).sum();
    (ln_factorial(d) - log_den).exp()
}

/// `(ln vol, ln In)` of every hole admitted by a policy.
#[derive(Clone, Debug, PartialEq)]
pub struct HoleTable {
    pub dimension: usize,
    pub holes: Vec<(f64, f64)>,
}

struct Collect(Vec<(f64, f64)>);

impl HoleVisitor for Collect {
    fn visit(&mut self, h: &HoleNode<'_>) {
        self.0.push((h.log_volume, h.log_inradius));
    }
    fn split(&self) -> Self {
        Self(Vec::new())
    }
    fn merge(&mut self, other: Self) {
        self.0.extend(other.0);
    }
}

impl HoleTable {
    pub fn collect(system: &IfsSystem, policy: PruningPolicy, execution: Execution) -> Result<Self> {
        let mut v = Collect(Vec::new());
        enumerate_holes(system, policy, &mut v, execution)?;
        Ok(Self { dimension: system.dimension(), holes: v.0 })
    }

    pub fn len(&self) -> usize {
        self.holes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.holes.is_empty()
    }

    /// `vol(Δ)`.
    pub fn full_volume(&self) -> f64 {
        standard_simplex_log_volume(self.dimension).exp()
    }

    /// `Σ vol(∇)`.
    pub fn hole_volume(&self) -> f64 {
        self.holes.iter().map(|h| h.0.exp()).sum()
    }

    /// `ln Σ vol(∇) In(∇)^t`.
    pub fn log_series(&self, t: f64) -> f64 {
        self.holes.iter().map(|&(v, r)| v + t * r).collect::<LogSum>().ln()
    }

    /// `Σ vol(L_ε(∇))` over the table.
    pub fn neighborhood_lower(&self, eps: f64) -> f64 {
        let d = self.dimension as i32;
        self.holes
            .iter()
            .map(|&(v, r)| {
                let keep = (1.0 - eps / r.exp()).max(0.0);
                v.exp() * (1.0 - keep.powi(d))
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaplaceReport {
    pub t: f64,
    /// `Σ vol(∇)/t − c(t)·Σ vol(∇) In(∇)^t`, the exact transform of the
    /// truncated neighbourhood volume.
    pub truncated: f64,
    /// `vol(Δ)/t − c(t)·Σ vol(∇) In(∇)^t`.
    pub completed: f64,
    /// `c(t) = d!/(t(t+1)⋯(t+d))`.
    pub coefficient: f64,
    pub hole_sum: f64,
    pub hole_volume: f64,
    pub holes: usize,
}

impl HoleTable {
    pub fn laplace(&self, t: f64) -> Result<LaplaceReport> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!("the transform needs t > 0, got {t}")));
        }
        let coefficient = bernoulli_coefficient(t, self.dimension);
        let hole_sum = self.log_series(t).exp();
        let hole_volume = self.hole_volume();
        Ok(LaplaceReport {
            t,
            truncated: hole_volume / t - coefficient * hole_sum,
            completed: self.full_volume() / t - coefficient * hole_sum,
            coefficient,
            hole_sum,
            hole_volume,
            holes: self.len(),
        })
    }
}

/// Closed form of the transform with the holes admitted by `policy`.
pub fn laplace_transform_closed(system: &IfsSystem, t: f64, policy: PruningPolicy) -> Result<LaplaceReport> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("the transform needs t > 0, got {t}")));
    }
    HoleTable::collect(system, policy, Execution::Sequential)?.laplace(t)
}

/// `(lower, upper)` for `vol(𝓖_ε)`: the enumerated holes' inner
/// neighbourhoods, then the same plus the volume not yet excised.
pub fn neighborhood_volume(system: &IfsSystem, eps: f64, policy: PruningPolicy) -> Result<(f64, f64)> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let table = HoleTable::collect(system, policy, Execution::Sequential)?;
    let lower = table.neighborhood_lower(eps);
    let residual = (table.full_volume() - table.hole_volume()).max(0.0);
    Ok((lower, lower + residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Simplex;

    #[test]
    fn bernoulli_small_cases() {
        assert!((bernoulli_coefficient(1.0, 2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((bernoulli_coefficient(2.0, 2) - 2.0 / 24.0).abs() < 1e-15);
        assert!((bernoulli_coefficient(1.0, 3) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn transform_checks_t() {
        let s = IfsSystem::rauzy();
        assert!(laplace_transform_closed(&s, 0.0, PruningPolicy::MaxDepth(1)).is_err());
        assert!(laplace_transform_closed(&s, -1.0, PruningPolicy::MaxDepth(1)).is_err());
    }

    #[test]
    fn large_t_approaches_volume_over_t() {
        let s = IfsSystem::rauzy();
        let full = Simplex::<f64>::standard(2).volume();
        for t in [10.0, 40.0] {
            let r = laplace_transform_closed(&s, t, PruningPolicy::MaxDepth(4)).unwrap();
            assert!((r.completed * t / full - 1.0).abs() < 10.0 / t.powi(3));
        }
    }

    #[test]
    fn neighborhood_examples() {
        let s = IfsSystem::rauzy();
        let full = Simplex::<f64>::standard(2);
        let (_, upper) = neighborhood_volume(&s, full.inradius().unwrap(), PruningPolicy::MaxDepth(3)).unwrap();
        assert!((upper - full.volume()).abs() < 1e-12);
        let main = &s.main_holes().unwrap()[0];
        let eps = main.inradius().unwrap() / 2.0;
        let (lower, upper) = neighborhood_volume(&s, eps, PruningPolicy::MaxDepth(0)).unwrap();
        assert!((lower - 0.75 * main.volume()).abs() < 1e-14);
        assert!((upper - (full.volume() - 0.25 * main.volume())).abs() < 1e-12);
        assert!(neighborhood_volume(&s, 0.0, PruningPolicy::MaxDepth(0)).is_err());
    }
}
