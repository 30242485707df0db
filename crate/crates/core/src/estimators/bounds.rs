//! Dimension bounds and the norm–volume comparisons behind them.

use serde::Serialize;

use crate::error::Result;
use crate::ifs::{enumerate_holes, times_hole, HoleNode, HoleVisitor, IfsSystem};
use crate::words::{Execution, HoleMatrix, PruningPolicy};

use super::series::{hole_series, singular_series, SingularVariant};
use super::ExponentEstimate;

/// A value with a bracket `lo ≤ point ≤ hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bracketed {
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Bracketed {
    pub fn exact(x: f64) -> Self {
        Self { point: x, lo: x, hi: x }
    }

    fn map(self, f: impl Fn(f64) -> f64) -> Self {
        Self { point: f(self.point), lo: f(self.lo), hi: f(self.hi) }
    }
}

impl From<&ExponentEstimate> for Bracketed {
    fn from(e: &ExponentEstimate) -> Self {
        Self { point: e.point, lo: e.lo, hi: e.hi }
    }
}

/// `max(d − 1, d·ρ/(d + 1))`.
pub fn de_leo_value(d: usize, rho: f64) -> f64 {
    let d = d as f64;
    (d - 1.0).max(d * rho / (d + 1.0))
}

/// The lower bound applied to every end of a bracketed ρ̂; the map is
/// non-decreasing so the bracket carries over.
pub fn de_leo_lower_bound(d: usize, rho: Bracketed) -> Bracketed {
    rho.map(|r| de_leo_value(d, r))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub dimension: usize,
    /// `d + σ̂`.
    pub box_dimension: Option<Bracketed>,
    pub de_leo_lower: Option<Bracketed>,
}

impl DimensionEstimate {
    pub fn new(dimension: usize, sigma: Option<&ExponentEstimate>, rho: Option<&ExponentEstimate>) -> Self {
        let d = dimension as f64;
        Self {
            dimension,
            box_dimension: sigma.map(|s| Bracketed::from(s).map(|x| d + x)),
            de_leo_lower: rho.map(|r| de_leo_lower_bound(dimension, r.into())),
        }
    }

    /// Whether the lower bound stays under the box estimate's upper end.
    pub fn sandwich_holds(&self) -> Option<bool> {
        Some(self.de_leo_lower?.lo <= self.box_dimension?.hi)
    }
}

/// Holes checked against `area(∇_i)·‖N_i M_k‖³`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormVolumeReport {
    pub depth: usize,
    /// `vol(∇_k)/vol(∇_k)·‖M_k‖³` on the empty word.
    pub normalization: f64,
    /// Extremes of `vol(∇_i)·‖N_i M_k‖³` over all holes.
    pub c1: f64,
    pub c2: f64,
    /// Words using every generator.
    pub case_one_words: u64,
    /// Largest `(vol(∇_i)/vol(∇_k)) / (4·normalization·‖N_i M_k‖⁻³)` over them.
    pub case_one_max_ratio: f64,
    pub violations: u64,
    /// Letters (0-based) of the first few violating words.
    pub violating_words: Vec<Vec<u16>>,
}

struct NormVolume<'a> {
    holes: &'a [HoleMatrix],
    main_log_volume: &'a [f64],
    alphabet: usize,
    normalization: f64,
    c1: f64,
    c2: f64,
    case_one: u64,
    max_ratio: f64,
    violations: u64,
    words: Vec<Vec<u16>>,
}

const KEPT_WORDS: usize = 16;
const BOUND_SLACK: f64 = 1e-12;

impl HoleVisitor for NormVolume<'_> {
    fn visit(&mut self, h: &HoleNode<'_>) {
        let n = self.holes[h.hole].dim();
        let nm = times_hole(h.matrix, &self.holes[h.hole]);
        let norm = (0..n).map(|c| (0..n).map(|r| nm[r * n + c]).sum::<f64>()).fold(0.0, f64::max);
        let scaled = (h.log_volume + (n as f64) * norm.ln()).exp();
        self.c1 = self.c1.min(scaled);
        self.c2 = self.c2.max(scaled);
        if h.word.distinct_letters() == self.alphabet {
            self.case_one += 1;
            let area = (h.log_volume - self.main_log_volume[h.hole]).exp();
            let bound = 4.0 * self.normalization * norm.powi(-(n as i32));
            let ratio = area / bound;
            self.max_ratio = self.max_ratio.max(ratio);
            if ratio > 1.0 + BOUND_SLACK {
                self.violations += 1;
                if self.words.len() < KEPT_WORDS {
                    self.words.push(h.word.letters().to_vec());
                }
            }
        }
    }

    fn split(&self) -> Self {
        Self {
            c1: f64::INFINITY,
            c2: 0.0,
            case_one: 0,
            max_ratio: 0.0,
            violations: 0,
            words: Vec::new(),
            ..*self
        }
    }

    fn merge(&mut self, o: Self) {
        self.c1 = self.c1.min(o.c1);
        self.c2 = self.c2.max(o.c2);
        self.case_one += o.case_one;
        self.max_ratio = self.max_ratio.max(o.max_ratio);
        self.violations += o.violations;
        let room = KEPT_WORDS.saturating_sub(self.words.len());
        self.words.extend(o.words.into_iter().take(room));
    }
}

/// Compares hole volumes with `‖N_i M_k‖^{-(d+1)}` for every hole to `depth`,
/// checking the factor-4 bound on words that use every generator.
pub fn norm_volume_comparison(system: &IfsSystem, depth: usize, execution: Execution) -> Result<NormVolumeReport> {
    let main: Vec<f64> = system.main_holes()?.iter().map(|h| h.log_volume()).collect();
    let n = system.dimension() + 1;
    // the constant of the empty word: area ratio 1 against ‖M_k‖^{d+1}
    let normalization = system
        .holes()
        .iter()
        .map(|m| {
            let e = m.entries();
            (0..n).map(|c| (0..n).map(|r| e[r * n + c]).sum::<f64>()).fold(0.0, f64::max).powi(n as i32)
        })
        .fold(0.0, f64::max);
    let mut v = NormVolume {
        holes: system.holes(),
        main_log_volume: &main,
        alphabet: system.generators().len(),
        normalization,
        c1: f64::INFINITY,
        c2: 0.0,
        case_one: 0,
        max_ratio: 0.0,
        violations: 0,
        words: Vec::new(),
    };
    enumerate_holes(system, PruningPolicy::MaxDepth(depth), &mut v, execution)?;
    Ok(NormVolumeReport {
        depth,
        normalization,
        c1: v.c1,
        c2: v.c2,
        case_one_words: v.case_one,
        case_one_max_ratio: v.max_ratio,
        violations: v.violations,
        violating_words: v.words,
    })
}

/// `max_n a_n^{hole}(s − 2) / a_n^{sing}(s)`: a measured constant for the
/// level-wise domination of the hole series by the singular series.
pub fn comparability_constant(
    system: &IfsSystem,
    s: f64,
    variant: SingularVariant,
    depth: usize,
    execution: Execution,
) -> Result<f64> {
    let policy = PruningPolicy::MaxDepth(depth);
    let holes = hole_series(system, s - 2.0, policy, execution)?;
    let sing = singular_series(system, s, variant, policy, execution)?;
    Ok(holes
        .level_sums_log
        .iter()
        .zip(&sing.level_sums_log)
        .map(|(h, g)| (h - g).exp())
        .fold(0.0, f64::max))
}
