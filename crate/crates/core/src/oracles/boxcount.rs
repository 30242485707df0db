//! Grid box counting on point clouds.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::least_squares;
use crate::geometry::Frame;
use crate::ifs::IfsSystem;
use crate::words::LinearMap;

pub const MIN_POINTS: usize = 100_000;
pub const MIN_SCALES: usize = 4;
pub const SIERPINSKI_DIMENSION: f64 = 1.584_962_500_721_156;
/// Allowed distance of the calibration slope from `log 3/log 2`.
pub const CALIBRATION_TOLERANCE: f64 = 0.05;
const BURN_IN: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxCountReport {
    pub scales: Vec<f64>,
    pub counts: Vec<u64>,
    /// Slope of `ln N(ε)` against `ln(1/ε)`.
    pub slope: f64,
    /// Root-mean-square residual of that fit.
    pub residual: f64,
    pub points: usize,
}

/// Occupied boxes of side `ε` for each scale, and the log-log slope.
pub fn grid_box_count(points: &[Vec<f64>], scales: &[f64]) -> Result<BoxCountReport> {
    if points.len() < MIN_POINTS {
        return Err(Error::InvalidArgument(format!(
            "box counting needs at least {MIN_POINTS} points, got {}",
            points.len()
        )));
    }
    if scales.len() < MIN_SCALES || scales.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidArgument(format!("box counting needs at least {MIN_SCALES} positive scales")));
    }
    let counts: Vec<u64> = scales
        .iter()
        .map(|&eps| {
            points
                .iter()
                .map(|p| p.iter().map(|&x| (x / eps).floor() as i64).collect::<Vec<_>>())
                .collect::<HashSet<_>>()
                .len() as u64
        })
        .collect();
    let pts: Vec<(f64, f64)> = scales.iter().zip(&counts).map(|(&e, &c)| (-e.ln(), (c as f64).ln())).collect();
    let (slope, intercept) = least_squares(&pts);
    let residual = (pts.iter().map(|&(x, y)| (y - slope * x - intercept).powi(2)).sum::<f64>() / pts.len() as f64).sqrt();
    Ok(BoxCountReport { scales: scales.to_vec(), counts, slope, residual, points: points.len() })
}

/// `2^{-from}, …, 2^{-to}`.
pub fn dyadic_scales(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 2f64.powi(-k)).collect()
}

/// Chaos-game points of `x ↦ ½(x + e_k)` on the 2-simplex, in plane coordinates.
pub fn sierpinski_cloud(points: usize, seed: u64) -> Vec<Vec<f64>> {
    let frame = Frame::<f64>::new(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![1.0 / 3.0; 3];
    let mut out = Vec::with_capacity(points);
    for i in 0..points + BURN_IN {
        let k = rng.random_range(0..3);
        for (j, v) in x.iter_mut().enumerate() {
            *v = 0.5 * (*v + if j == k { 1.0 } else { 0.0 });
        }
        if i >= BURN_IN {
            out.push(frame.to_local(&x));
        }
    }
    out
}

/// Chaos-game orbit of the incentre of Δ under uniformly chosen `T_j`, in
/// plane coordinates.
pub fn orbit_cloud(system: &IfsSystem, points: usize, seed: u64) -> Vec<Vec<f64>> {
    let d = system.dimension();
    let n = d + 1;
    let frame = Frame::<f64>::new(d);
    let maps: Vec<Vec<f64>> = system.generators().generators().iter().map(|g| g.real_entries()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![1.0 / n as f64; n];
    let mut out = Vec::with_capacity(points);
    for i in 0..points + BURN_IN {
        let m = &maps[rng.random_range(0..maps.len())];
        x = crate::words::apply_normalized(m, n, &x);
        if i >= BURN_IN {
            out.push(frame.to_local(&x));
        }
    }
    out
}

/// Box counts of the system's orbit cloud, only after the Sierpiński cloud
/// at the same sizes reproduces its known dimension.
pub fn calibrated_box_count(
    system: &IfsSystem,
    points: usize,
    scales: &[f64],
    seed: u64,
) -> Result<(BoxCountReport, BoxCountReport)> {
    let gate = grid_box_count(&sierpinski_cloud(points, seed), scales)?;
    if (gate.slope - SIERPINSKI_DIMENSION).abs() > CALIBRATION_TOLERANCE {
        return Err(Error::Calibration(format!(
            "Sierpiński slope {:.4} is more than {CALIBRATION_TOLERANCE} from {SIERPINSKI_DIMENSION:.4}",
            gate.slope
        )));
    }
    let report = grid_box_count(&orbit_cloud(system, points, seed), scales)?;
    Ok((gate, report))
}
