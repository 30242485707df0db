//! Self-projective iterated function systems: generators, hole matrices and
//! the hole decomposition of Δ.

mod config;
mod holes;

pub use config::{parse_expression, Entry, SystemConfig, PRESETS};
pub use holes::{enumerate_holes, HoleNode, HoleRecord, HoleSummary, HoleVisitor};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{image_simplex, volume_ratio, Simplex};
use crate::oracles::sampling::uniform_weights;
use crate::words::{GeneratorMatrix, GeneratorSet, HoleMatrix, LinearMap};

pub const TILING_VOLUME_TOLERANCE: f64 = 1e-9;
pub const TILING_SAMPLES: usize = 100_000;

/// Generators `N_1..N_m` and hole matrices `M_1..M_K` on Δ^{(d)}.
#[derive(Clone, Debug)]
pub struct IfsSystem {
    name: String,
    generators: GeneratorSet,
    holes: Vec<HoleMatrix>,
}

impl IfsSystem {
    /// Checks shapes and matrix invariants. The tiling hypotheses are checked
    /// separately by [`validate_tiling`].
    pub fn new(name: impl Into<String>, generators: GeneratorSet, holes: Vec<HoleMatrix>) -> Result<Self> {
        if holes.is_empty() {
            return Err(Error::Config("at least one hole matrix is required".into()));
        }
        let n = generators.matrix_size();
        if let Some(k) = holes.iter().position(|h| h.dim() != n) {
            return Err(Error::Config(format!("hole matrix {} is not {n}×{n}", k + 1)));
        }
        Ok(Self { name: name.into(), generators, holes })
    }

    pub fn from_config(config: &SystemConfig) -> Result<Self> {
        let n = config.dimension + 1;
        if config.dimension < 2 {
            return Err(Error::Config(format!("dimension must be at least 2, got {}", config.dimension)));
        }
        let gens = config
            .generators
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                if rows.len() != n {
                    return Err(Error::Config(format!("generator {} is not {n}×{n}", i + 1)));
                }
                GeneratorMatrix::new(rows, i)
            })
            .collect::<Result<Vec<_>>>()?;
        let generators = GeneratorSet::new(gens)?;
        let holes = config
            .hole_rows()?
            .iter()
            .enumerate()
            .map(|(k, rows)| HoleMatrix::new(rows, k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(config.name.clone(), generators, holes)
    }

    pub fn rauzy() -> Self {
        Self::from_config(&SystemConfig::rauzy()).expect("preset is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.generators.dimension()
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn holes(&self) -> &[HoleMatrix] {
        &self.holes
    }

    /// The main holes `∇_k = M_k(Δ)`.
    pub fn main_holes(&self) -> Result<Vec<Simplex<f64>>> {
        let full = Simplex::standard(self.dimension());
        self.holes.iter().map(|m| image_simplex(m, &full)).collect()
    }

    /// First-level images `Δ_j = T_j(Δ)`.
    pub fn first_level_images(&self) -> Result<Vec<Simplex<f64>>> {
        let full = Simplex::standard(self.dimension());
        self.generators.generators().iter().map(|g| image_simplex(g, &full)).collect()
    }
}

/// Parses a preset name or a JSON document, builds the system and certifies
/// the tiling hypotheses.
pub fn load_system(source: &str) -> Result<IfsSystem> {
    let config = match SystemConfig::preset(source.trim()) {
        Some(c) => c,
        None => SystemConfig::from_json(source)?,
    };
    let system = IfsSystem::from_config(&config)?;
    let report = validate_tiling(&system)?;
    if !report.passed() {
        return Err(Error::Tiling(report.summary()));
    }
    Ok(system)
}

/// Outcome of the three tiling checks.
#[derive(Clone, Debug, Serialize)]
pub struct TilingReport {
    pub image_volumes: Vec<f64>,
    pub hole_volumes: Vec<f64>,
    pub total_volume: f64,
    /// `Σ vol(Δ_j) + Σ vol(∇_k) − vol(Δ)`.
    pub volume_defect: f64,
    pub additivity_ok: bool,
    pub samples: usize,
    pub seed: u64,
    /// Sample points lying in the interior of two or more first-level cells.
    pub collisions: usize,
    pub disjoint_ok: bool,
    pub degenerate_holes: Vec<usize>,
    pub holes_ok: bool,
}

impl TilingReport {
    pub fn passed(&self) -> bool {
        self.additivity_ok && self.disjoint_ok && self.holes_ok
    }

    pub fn summary(&self) -> String {
        let mut failed = Vec::new();
        if !self.additivity_ok {
            failed.push(format!("volume additivity defect {:.3e}", self.volume_defect));
        }
        if !self.disjoint_ok {
            failed.push(format!("{} interior collisions in {} samples", self.collisions, self.samples));
        }
        if !self.holes_ok {
            let ks: Vec<String> = self.degenerate_holes.iter().map(|k| (k + 1).to_string()).collect();
            failed.push(format!("degenerate hole simplices {}", ks.join(", ")));
        }
        if failed.is_empty() {
            "all tiling checks passed".into()
        } else {
            failed.join("; ")
        }
    }
}

pub fn validate_tiling(system: &IfsSystem) -> Result<TilingReport> {
    validate_tiling_with(system, TILING_SAMPLES, 0)
}

/// Volume additivity, sampled interior disjointness of the `m + K`
/// first-level cells, and non-degeneracy of the main holes.
pub fn validate_tiling_with(system: &IfsSystem, samples: usize, seed: u64) -> Result<TilingReport> {
    let d = system.dimension();
    let full = Simplex::<f64>::standard(d);
    let images = system.first_level_images()?;
    let holes = system.main_holes()?;
    let image_volumes = system
        .generators()
        .generators()
        .iter()
        .map(|g| Ok(volume_ratio(g, &full)? * full.volume()))
        .collect::<Result<Vec<f64>>>()?;
    let hole_volumes = system
        .holes()
        .iter()
        .map(|h| Ok(volume_ratio(h, &full)? * full.volume()))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = image_volumes.iter().chain(&hole_volumes).sum();
    let volume_defect = total - full.volume();

    let degenerate_holes: Vec<usize> = (0..holes.len()).filter(|&k| holes[k].is_degenerate()).collect();

    // barycentric coordinates w.r.t. each cell via the inverse vertex matrix
    let cells: Vec<&Simplex<f64>> = images.iter().chain(&holes).filter(|s| !s.is_degenerate()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut collisions = 0;
    for _ in 0..samples {
        let x: Vec<f64> = uniform_weights(&mut rng, d + 1);
        let mut inside = 0;
        for c in &cells {
            if c.barycentric(&x)?.iter().all(|&l| l > 1e-12) {
                inside += 1;
            }
        }
        if inside > 1 {
            collisions += 1;
        }
    }
    Ok(TilingReport {
        image_volumes,
        hole_volumes,
        total_volume: full.volume(),
        volume_defect,
        additivity_ok: volume_defect.abs() <= TILING_VOLUME_TOLERANCE,
        samples,
        seed,
        collisions,
        disjoint_ok: collisions == 0,
        holes_ok: degenerate_holes.is_empty(),
        degenerate_holes,
    })
}

/// Real entries of `N · M` for a generator product and a hole matrix.
pub fn times_hole<A: LinearMap>(a: &A, hole: &HoleMatrix) -> Vec<f64> {
    let n = a.size();
    let x = a.real_entries::<f64>();
    let m = hole.entries();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let xik = x[i * n + k];
            for j in 0..n {
                out[i * n + j] += xik * m[k * n + j];
            }
        }
    }
    out
}
