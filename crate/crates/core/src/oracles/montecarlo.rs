//! Monte Carlo volume of inner ε-neighbourhoods, and the LP Chebyshev centre.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolytope, Simplex};
use crate::words::Execution;

pub const MIN_MC_SAMPLES: usize = 10_000;
/// Fixed number of independent streams; results do not depend on threads.
const SHARDS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub standard_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// `|value − x| ≤ k·SE`.
    pub fn agrees_with(&self, x: f64, k: f64) -> bool {
        (self.value - x).abs() <= k * self.standard_error
    }
}

/// A region a uniform sample can be drawn from.
#[derive(Clone, Copy, Debug)]
pub enum Region<'a> {
    Simplex(&'a Simplex<f64>),
    Polytope(&'a ConvexPolytope<f64>),
}

impl Region<'_> {
    pub fn volume(&self) -> f64 {
        match self {
            Self::Simplex(s) => s.volume(),
            Self::Polytope(p) => p.volume(),
        }
    }

    fn check(&self) -> Result<()> {
        if let Self::Simplex(s) = self {
            if s.is_degenerate() {
                return Err(Error::Degenerate("Monte Carlo needs a non-degenerate simplex".into()));
            }
        }
        Ok(())
    }
}

/// Rejection sampler in frame coordinates of a polytope.
struct BoxSampler {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxSampler {
    fn new(p: &ConvexPolytope<f64>) -> Self {
        let local: Vec<Vec<f64>> = p.vertices().iter().map(|v| p.frame().to_local(v)).collect();
        let d = p.dimension();
        let lo = (0..d).map(|j| local.iter().map(|y| y[j]).fold(f64::INFINITY, f64::min)).collect();
        let hi = (0..d).map(|j| local.iter().map(|y| y[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
        Self { lo, hi }
    }

    fn distance<R: Rng>(&self, p: &ConvexPolytope<f64>, rng: &mut R) -> f64 {
        loop {
            let y: Vec<f64> = self.lo.iter().zip(&self.hi).map(|(&a, &b)| rng.random_range(a..=b)).collect();
            let h = p.halfspaces();
            if h.contains(&y) {
                return h.distance_to_boundary(&y);
            }
        }
    }
}

fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

fn count_within(region: Region<'_>, eps: f64, n: usize, seed: u64, shard: u64) -> u64 {
    let mut rng = shard_rng(seed, shard);
    let mut hits = 0;
    match region {
        Region::Simplex(s) => {
            // The Exp(1) weights are the barycentric coordinates of the sample
            // (up to their sum), and facet k lies at distance λ_k·h_k.
            let d = s.dimension() as f64;
            let heights: Vec<f64> =
                s.facet_measures().expect("non-degenerate").iter().map(|&f| d * s.volume() / f).collect();
            let mut e = vec![0.0; heights.len()];
            for _ in 0..n {
                for w in e.iter_mut() {
                    *w = Exp1.sample(&mut rng);
                }
                let total: f64 = e.iter().sum();
                let nearest = e.iter().zip(&heights).map(|(&w, &h)| w * h).fold(f64::INFINITY, f64::min);
                if nearest < eps * total {
                    hits += 1;
                }
            }
        }
        Region::Polytope(p) => {
            let sampler = BoxSampler::new(p);
            for _ in 0..n {
                if sampler.distance(p, &mut rng) < eps {
                    hits += 1;
                }
            }
        }
    }
    hits
}

/// Volume of `L_ε(region)` as region volume times the fraction of uniform
/// samples within `ε` of the boundary.
pub fn mc_inner_volume(region: Region<'_>, eps: f64, samples: usize, seed: u64, execution: Execution) -> Result<McEstimate> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidArgument(format!("Monte Carlo needs at least {MIN_MC_SAMPLES} samples")));
    }
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("ε must be non-negative, got {eps}")));
    }
    region.check()?;
    let per = |k: u64| samples / SHARDS as usize + usize::from((k as usize) < samples % SHARDS as usize);
    let hits: u64 = match execution {
        Execution::Sequential => (0..SHARDS).map(|k| count_within(region, eps, per(k), seed, k)).sum(),
        Execution::Parallel => (0..SHARDS).into_par_iter().map(|k| count_within(region, eps, per(k), seed, k)).sum(),
    };
    Ok(bernoulli_estimate(hits, samples, region.volume(), seed))
}

pub(crate) fn bernoulli_estimate(hits: u64, samples: usize, scale: f64, seed: u64) -> McEstimate {
    let n = samples as f64;
    let p = hits as f64 / n;
    let var = p * (1.0 - p) * n / (n - 1.0);
    McEstimate { value: scale * p, standard_error: scale * (var / n).sqrt(), samples, seed }
}

/// Centre and radius of the largest inscribed ball, from the linear program
/// on the facet description; the centre is in ambient coordinates.
pub fn chebyshev_center(region: Region<'_>) -> Result<(Vec<f64>, f64)> {
    let owned;
    let p = match region {
        Region::Simplex(s) => {
            region.check()?;
            owned = ConvexPolytope::from_simplex(s)?;
            &owned
        }
        Region::Polytope(p) => p,
    };
    Ok((p.chebyshev_centre().to_vec(), p.inradius()))
}
