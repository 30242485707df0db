//! Monte Carlo volume of the ε-neighbourhood of the attractor, by locating
//! sample points in the tree of images.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{linalg, standard_simplex_log_volume, Simplex};
use crate::ifs::IfsSystem;
use crate::words::{Execution, LinearMap};

use super::montecarlo::{bernoulli_estimate, McEstimate, MIN_MC_SAMPLES};
use super::sampling::uniform_in_simplex;

const SHARDS: u64 = 16;
/// Descent steps after which a point is declared inside the neighbourhood.
const MAX_STEPS: usize = 100_000;

fn inverse(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for c in 0..n {
        let mut e = vec![0.0; n];
        e[c] = 1.0;
        let col = linalg::solve(a, n, &e).ok_or_else(|| Error::Degenerate("singular map".into()))?;
        for r in 0..n {
            inv[r * n + c] = col[r];
        }
    }
    Ok(inv)
}

fn mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn pull_back(inv: &[f64], n: usize, y: &[f64]) -> Vec<f64> {
    (0..n).map(|r| (0..n).map(|c| inv[r * n + c] * y[c]).sum()).collect()
}

fn image_vertices(p: &[f64], n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|c| {
            let col: Vec<f64> = (0..n).map(|r| p[r * n + c]).collect();
            let s: f64 = col.iter().sum();
            col.into_iter().map(|x| x / s).collect()
        })
        .collect()
}

fn diameter(v: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            d = d.max(linalg::norm(&linalg::sub(&v[i], &v[j])));
        }
    }
    d
}

struct Locator {
    n: usize,
    gens: Vec<Vec<f64>>,
    gen_inv: Vec<Vec<f64>>,
    holes: Vec<Vec<f64>>,
    hole_inv: Vec<Vec<f64>>,
}

impl Locator {
    fn new(system: &IfsSystem) -> Result<Self> {
        let n = system.dimension() + 1;
        let gens: Vec<Vec<f64>> = system.generators().generators().iter().map(|g| g.real_entries()).collect();
        let holes: Vec<Vec<f64>> = system.holes().iter().map(|h| h.entries().to_vec()).collect();
        Ok(Self {
            n,
            gen_inv: gens.iter().map(|g| inverse(g, n)).collect::<Result<_>>()?,
            hole_inv: holes.iter().map(|h| inverse(h, n)).collect::<Result<_>>()?,
            gens,
            holes,
        })
    }

    /// Whether `x` lies within `eps` of the attractor. `y` tracks the point
    /// pulled back through the current word, `p` the word's matrix.
    fn near_attractor(&self, x: &[f64], eps: f64) -> bool {
        let n = self.n;
        let mut y = x.to_vec();
        let mut p = vec![0.0; n * n];
        for i in 0..n {
            p[i * n + i] = 1.0;
        }
        for _ in 0..MAX_STEPS {
            let verts = image_vertices(&p, n);
            // the image's vertices belong to the attractor
            if diameter(&verts) < eps || verts.iter().any(|v| linalg::norm(&linalg::sub(v, x)) < eps) {
                return true;
            }
            let inside = |inv: &[f64]| {
                let z = pull_back(inv, n, &y);
                z.iter().all(|&c| c >= 0.0).then(|| {
                    let s: f64 = z.iter().sum();
                    z.into_iter().map(|c| c / s).collect::<Vec<f64>>()
                })
            };
            if let Some(j) = (0..self.gens.len()).find(|&j| inside(&self.gen_inv[j]).is_some()) {
                y = inside(&self.gen_inv[j]).expect("just checked");
                p = mul(&p, &self.gens[j], n);
                continue;
            }
            for (h, inv) in self.holes.iter().zip(&self.hole_inv) {
                if inside(inv).is_some() {
                    let hole = image_vertices(&mul(&p, h, n), n);
                    return match Simplex::new(hole) {
                        Ok(s) if !s.is_degenerate() => s.distance_to_boundary(x).map_or(true, |r| r < eps),
                        _ => true,
                    };
                }
            }
            // on a boundary between pieces, which the attractor contains
            return true;
        }
        true
    }
}

/// `vol(𝓖_ε)` as vol(Δ) times the fraction of uniform points of Δ within `ε`
/// of the attractor.
pub fn mc_gasket_neighborhood(
    system: &IfsSystem,
    eps: f64,
    samples: usize,
    seed: u64,
    execution: Execution,
) -> Result<McEstimate> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidArgument(format!("Monte Carlo needs at least {MIN_MC_SAMPLES} samples")));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let locator = Locator::new(system)?;
    let d = system.dimension();
    let delta = Simplex::<f64>::standard(d);
    let shard = |k: u64| -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k);
        let count = samples / SHARDS as usize + usize::from((k as usize) < samples % SHARDS as usize);
        (0..count)
            .filter(|_| locator.near_attractor(&uniform_in_simplex(&mut rng, delta.vertices()), eps))
            .count() as u64
    };
    let hits: u64 = match execution {
        Execution::Sequential => (0..SHARDS).map(shard).sum(),
        Execution::Parallel => (0..SHARDS).into_par_iter().map(shard).sum(),
    };
    Ok(bernoulli_estimate(hits, samples, standard_simplex_log_volume(d).exp(), seed))
}
