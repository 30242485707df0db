//! Adaptive Gauss–Kronrod (7/15) quadrature and the integrals it checks.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::HoleTable;
use crate::ifs::IfsSystem;
use crate::words::{Execution, PruningPolicy};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const DEFAULT_MAX_EVALUATIONS: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Piece { a, b, value: k * h, error: ((k - g) * h).abs() }
}

/// `∫_a^b f` to `max(abs_tol, rel_tol·|value|)`, bisecting the piece with
/// the largest error estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_evaluations: usize) -> Result<Quadrature> {
    let first = kronrod(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::from([first]);
    while error > abs_tol.max(rel_tol * value.abs()) {
        if evaluations + 30 > max_evaluations {
            return Err(Error::QuadratureBudget { tolerance: abs_tol.max(rel_tol * value.abs()), evaluations });
        }
        let worst = heap.pop().expect("non-empty");
        let m = 0.5 * (worst.a + worst.b);
        let (l, r) = (kronrod(&f, worst.a, m), kronrod(&f, m, worst.b));
        evaluations += 30;
        value += l.value + r.value - worst.value;
        error += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        // re-sum occasionally so the running totals do not drift
        if evaluations % 3000 == 15 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    value = heap.iter().map(|p| p.value).sum();
    Ok(Quadrature { value, error, evaluations })
}

/// `∫₀¹ ε^{t−1} g(ε) dε = (1/t) ∫₀¹ g(u^{1/t}) du`, removing the weight's
/// singularity at zero.
fn weighted_unit_integral(t: f64, g: impl Fn(f64) -> f64, rel_tol: f64) -> Result<Quadrature> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("the weight ε^(t−1) needs t > 0, got {t}")));
    }
    let q = integrate(|u| g(u.powf(1.0 / t)), 0.0, 1.0, 0.0, rel_tol, DEFAULT_MAX_EVALUATIONS)?;
    Ok(Quadrature { value: q.value / t, error: q.error / t, ..q })
}

/// `∫₀¹ y^{t−1}(1−y)^d dy` by quadrature.
pub fn bernoulli_quadrature(t: f64, d: usize, rel_tol: f64) -> Result<Quadrature> {
    weighted_unit_integral(t, |y| (1.0 - y).powi(d as i32), rel_tol)
}

/// `∫₀¹ ε^{t−1} vol_n(𝓖_ε) dε` where `vol_n` is the lower neighbourhood
/// volume over the holes of words of length at most `depth`.
pub fn quadrature_laplace(system: &IfsSystem, t: f64, depth: usize, rel_tol: f64) -> Result<Quadrature> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("the transform needs t > 0, got {t}")));
    }
    let table = HoleTable::collect(system, PruningPolicy::MaxDepth(depth), Execution::Sequential)?;
    weighted_unit_integral(t, |e| table.neighborhood_lower(e), rel_tol)
}
