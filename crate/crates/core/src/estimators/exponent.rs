//! Critical exponents from truncated series.
//!
//! Every truncated series converges, so the exponents are read off growth
//! rates: the root of the per-level slope for σ and s, a log-log regression
//! of the counting function for ρ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{enumerate_holes, HoleNode, HoleVisitor, IfsSystem};
use crate::words::{count_norm_cap, enumerate_words, Execution, GeneratorSet, PruningPolicy, WordNode, WordVisitor};

use super::series::{require_three_by_three, singular_logs, SingularVariant, Truncation};
use super::LogSum;

pub const MIN_GROWTH_DEPTH: usize = 6;
pub const MIN_SCHEDULE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    LevelGrowthRoot,
    CountingRegression,
}

/// A critical exponent with a heuristic bracket.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
    pub method: EstimateMethod,
    pub truncation: Truncation,
    /// The same estimate from a shallower truncation (depth − 2, or the
    /// schedule without its last point), when it exists.
    pub shallower: Option<f64>,
    /// `(parameter, g)` for level growth, `(ln T, ln count)` for counting.
    pub samples: Vec<(f64, f64)>,
}

impl ExponentEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn shifted(&self, by: f64) -> Self {
        Self {
            point: self.point + by,
            lo: self.lo + by,
            hi: self.hi + by,
            shallower: self.shallower.map(|x| x + by),
            ..self.clone()
        }
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthOptions {
    /// Fraction of the computed levels used by the slope.
    pub top_fraction: f64,
    /// Bisection stops once the interval is this narrow.
    pub tolerance: f64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self { top_fraction: 1.0 / 3.0, tolerance: 1e-6 }
    }
}

impl GrowthOptions {
    fn window(&self, depth: usize) -> usize {
        let drop = ((depth as f64) * self.top_fraction).floor() as usize;
        depth - drop.min(depth.saturating_sub(1)).max(1)
    }
}

/// Terms `exp(a + p·b)` grouped by level, from `first` upward.
#[derive(Clone, Debug, Default)]
pub struct LevelTerms {
    first: usize,
    levels: Vec<Vec<(f64, f64)>>,
}

impl LevelTerms {
    fn new(first: usize) -> Self {
        Self { first, levels: Vec::new() }
    }

    fn push(&mut self, level: usize, a: f64, b: f64) {
        if level < self.first {
            return;
        }
        let i = level - self.first;
        if self.levels.len() <= i {
            self.levels.resize(i + 1, Vec::new());
        }
        self.levels[i].push((a, b));
    }

    fn append(&mut self, other: Self) {
        if self.levels.len() < other.levels.len() {
            self.levels.resize(other.levels.len(), Vec::new());
        }
        for (x, y) in self.levels.iter_mut().zip(other.levels) {
            x.extend(y);
        }
    }

    pub fn deepest(&self) -> usize {
        self.first + self.levels.len() - 1
    }

    pub fn level_log_sum(&self, level: usize, p: f64) -> f64 {
        self.levels[level - self.first].iter().map(|&(a, b)| a + p * b).collect::<LogSum>().ln()
    }

    /// Least-squares slope of `ln a_n(p)` over levels `lo..=hi`.
    pub fn growth(&self, lo: usize, hi: usize, p: f64) -> f64 {
        let pts: Vec<(f64, f64)> = (lo..=hi).map(|n| (n as f64, self.level_log_sum(n, p))).collect();
        least_squares(&pts).0
    }
}

/// `(slope, intercept)`.
pub(crate) fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Root of a decreasing `g` on `[lo, hi]` by bisection.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, g: impl Fn(f64) -> f64) -> Result<(f64, f64, Vec<(f64, f64)>)> {
    let (g_lo, g_hi) = (g(lo), g(hi));
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::NonBracketing { lo, hi, g_lo, g_hi });
    }
    let mut samples = vec![(lo, g_lo), (hi, g_hi)];
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        samples.push((mid, gm));
        if gm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi, samples))
}

fn growth_root(terms: &LevelTerms, interval: (f64, f64), depth: usize, opts: &GrowthOptions) -> Result<ExponentEstimate> {
    let window = |n: usize| (opts.window(n), n);
    let (lo, hi) = window(depth);
    let (a, b, samples) = bisect(interval.0, interval.1, opts.tolerance, |p| terms.growth(lo, hi, p))?;
    let point = 0.5 * (a + b);
    let (slo, shi) = window(depth - 2);
    let shallower = bisect(interval.0, interval.1, opts.tolerance, |p| terms.growth(slo, shi, p))
        .ok()
        .map(|(a, b, _)| 0.5 * (a + b));
    let spread = shallower.unwrap_or(point);
    Ok(ExponentEstimate {
        point,
        lo: point.min(spread) - opts.tolerance,
        hi: point.max(spread) + opts.tolerance,
        method: EstimateMethod::LevelGrowthRoot,
        truncation: Truncation::Depth(depth),
        shallower,
        samples,
    })
}

fn check_growth_request(interval: (f64, f64), depth: usize, within: (f64, f64), closed: bool, opts: &GrowthOptions) -> Result<()> {
    if depth < MIN_GROWTH_DEPTH {
        return Err(Error::DepthTooSmall { depth, min: MIN_GROWTH_DEPTH });
    }
    let (lo, hi) = interval;
    let inside = if closed { lo >= within.0 && hi <= within.1 } else { lo > within.0 && hi < within.1 };
    if !(lo < hi) || !inside {
        return Err(Error::InvalidArgument(format!(
            "search interval [{lo}, {hi}] must be increasing and inside ({}, {})",
            within.0, within.1
        )));
    }
    if !(opts.top_fraction > 0.0 && opts.top_fraction < 1.0) || !(opts.tolerance > 0.0) {
        return Err(Error::InvalidArgument("growth options need 0 < top_fraction < 1 and tolerance > 0".into()));
    }
    Ok(())
}

struct HoleTerms(LevelTerms);

impl HoleVisitor for HoleTerms {
    fn visit(&mut self, h: &HoleNode<'_>) {
        self.0.push(h.depth(), h.log_volume, h.log_inradius);
    }
    fn split(&self) -> Self {
        Self(LevelTerms::new(self.0.first))
    }
    fn merge(&mut self, other: Self) {
        self.0.append(other.0);
    }
}

/// Terms `vol(∇)·In(∇)^t` stored as `(ln vol, ln In)` for levels from the
/// start of the depth − 2 window up to `depth`.
pub fn hole_terms(system: &IfsSystem, depth: usize, opts: &GrowthOptions, execution: Execution) -> Result<LevelTerms> {
    let mut v = HoleTerms(LevelTerms::new(opts.window(depth.saturating_sub(2))));
    enumerate_holes(system, PruningPolicy::MaxDepth(depth), &mut v, execution)?;
    Ok(v.0)
}

struct SingularTerms {
    offset: f64,
    terms: LevelTerms,
    failed: bool,
}

impl WordVisitor for SingularTerms {
    fn visit(&mut self, node: &WordNode<'_>) {
        if node.depth() < self.terms.first {
            return;
        }
        match singular_logs(node) {
            Ok((l2, l3)) => self.terms.push(node.depth(), l2 - self.offset * l3, l3),
            Err(_) => self.failed = true,
        }
    }
    fn split(&self) -> Self {
        Self { offset: self.offset, terms: LevelTerms::new(self.terms.first), failed: false }
    }
    fn merge(&mut self, other: Self) {
        self.terms.append(other.terms);
        self.failed |= other.failed;
    }
}

/// Terms `(σ₂/σ₁)(σ₃/σ₁)^{s−c}` stored as `(ln σ₂/σ₁ − c ln σ₃/σ₁, ln σ₃/σ₁)`.
pub fn singular_terms(
    system: &IfsSystem,
    depth: usize,
    variant: SingularVariant,
    opts: &GrowthOptions,
    execution: Execution,
) -> Result<LevelTerms> {
    require_three_by_three(system)?;
    let mut v = SingularTerms {
        offset: variant.offset(),
        terms: LevelTerms::new(opts.window(depth.saturating_sub(2))),
        failed: false,
    };
    enumerate_words(system.generators(), PruningPolicy::MaxDepth(depth), &mut v, execution)?;
    if v.failed {
        return Err(Error::SvdFailure);
    }
    Ok(v.terms)
}

/// σ̂: the root of the level-growth slope of the hole series.
pub fn estimate_sigma(
    system: &IfsSystem,
    interval: (f64, f64),
    depth: usize,
    opts: &GrowthOptions,
    execution: Execution,
) -> Result<ExponentEstimate> {
    check_growth_request(interval, depth, (-1.0, 0.0), true, opts)?;
    let terms = hole_terms(system, depth, opts, execution)?;
    growth_root(&terms, interval, depth, opts)
}

/// ŝ: the root of the level-growth slope of the singular-value series.
pub fn estimate_hausdorff(
    system: &IfsSystem,
    interval: (f64, f64),
    depth: usize,
    variant: SingularVariant,
    opts: &GrowthOptions,
    execution: Execution,
) -> Result<ExponentEstimate> {
    check_growth_request(interval, depth, (1.0, 2.0), false, opts)?;
    let terms = singular_terms(system, depth, variant, opts, execution)?;
    growth_root(&terms, interval, depth, opts)
}

fn tail_slope(pts: &[(f64, f64)]) -> (f64, usize) {
    let k = (pts.len() / 2).max(3).min(pts.len());
    (least_squares(&pts[pts.len() - k..]).0, k)
}

/// ρ̂ from `ln #{‖N_i‖ ≤ T}` against `ln T` over an increasing schedule.
pub fn counting_exponent(gens: &GeneratorSet, schedule: &[u64]) -> Result<ExponentEstimate> {
    if schedule.len() < MIN_SCHEDULE || schedule.windows(2).any(|w| w[0] >= w[1]) || schedule[0] < 1 {
        return Err(Error::ScheduleTooShort);
    }
    let pts = schedule
        .iter()
        .map(|&t| Ok(((t as f64).ln(), (count_norm_cap(gens, t)? as f64).ln())))
        .collect::<Result<Vec<_>>>()?;
    counting_exponent_from(&pts, schedule)
}

/// Same as [`counting_exponent`] on precomputed `(ln T, ln count)` points.
pub fn counting_exponent_from(pts: &[(f64, f64)], schedule: &[u64]) -> Result<ExponentEstimate> {
    if pts.len() < MIN_SCHEDULE || pts.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::ScheduleTooShort);
    }
    let (point, k) = tail_slope(pts);
    let tail = &pts[pts.len() - k..];
    let pair = tail.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0));
    let (lo, hi) = pair.fold((point, point), |(l, h), s| (l.min(s), h.max(s)));
    let shallower = (pts.len() > MIN_SCHEDULE).then(|| tail_slope(&pts[..pts.len() - 1]).0);
    Ok(ExponentEstimate {
        point,
        lo,
        hi,
        method: EstimateMethod::CountingRegression,
        truncation: Truncation::Schedule(schedule.to_vec()),
        shallower,
        samples: pts.to_vec(),
    })
}

/// Caps `10^a, 10^{a+½}, …, 10^b` rounded to integers.
pub fn half_decade_schedule(from_exp: u32, to_exp: u32) -> Vec<u64> {
    (2 * from_exp..=2 * to_exp).map(|h| 10f64.powf(h as f64 / 2.0).round() as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::series::{hole_series, singular_series};
    use crate::words::GeneratorMatrix;

    #[test]
    fn least_squares_recovers_a_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 2.5 * i as f64 - 1.0)).collect();
        let (m, c) = least_squares(&pts);
        assert!((m - 2.5).abs() < 1e-12 && (c + 1.0).abs() < 1e-12);
    }

    #[test]
    fn windows_take_the_top_third() {
        let o = GrowthOptions::default();
        assert_eq!(o.window(14), 10);
        assert_eq!(o.window(12), 8);
        assert_eq!(o.window(6), 4);
    }

    #[test]
    fn level_terms_match_hole_series() {
        let s = IfsSystem::rauzy();
        let o = GrowthOptions::default();
        let terms = hole_terms(&s, 8, &o, Execution::Sequential).unwrap();
        assert_eq!(terms.deepest(), 8);
        for t in [-0.7, -0.2, 0.0] {
            let r = hole_series(&s, t, PruningPolicy::MaxDepth(8), Execution::Sequential).unwrap();
            for n in o.window(6)..=8 {
                assert!((terms.level_log_sum(n, t) - r.level_sums_log[n]).abs() < 1e-12);
            }
        }
        let terms = singular_terms(&s, 8, SingularVariant::SMinusOne, &o, Execution::Sequential).unwrap();
        let r = singular_series(&s, 1.6, SingularVariant::SMinusOne, PruningPolicy::MaxDepth(8), Execution::Sequential)
            .unwrap();
        for n in 4..=8 {
            assert!((terms.level_log_sum(n, 1.6) - r.level_sums_log[n]).abs() < 1e-12);
        }
    }

    #[test]
    fn growth_sign_follows_the_critical_exponent() {
        let s = IfsSystem::rauzy();
        let terms = hole_terms(&s, 10, &GrowthOptions::default(), Execution::Sequential).unwrap();
        assert!(terms.growth(7, 10, -1.0) > 0.0);
        assert!(terms.growth(7, 10, 0.0) < 0.0);
        let g: Vec<f64> = [-1.0, -0.6, -0.3, 0.0].iter().map(|&t| terms.growth(7, 10, t)).collect();
        assert!(g.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn sigma_at_moderate_depth() {
        let s = IfsSystem::rauzy();
        let e = estimate_sigma(&s, (-1.0, 0.0), 10, &GrowthOptions::default(), Execution::Parallel).unwrap();
        assert!(e.lo <= e.point && e.point <= e.hi);
        assert!(e.shallower.is_some());
        assert!((1.19..=1.7415).contains(&(2.0 + e.point)), "{e:?}");
    }

    #[test]
    fn growth_requests_are_checked() {
        let s = IfsSystem::rauzy();
        let o = GrowthOptions::default();
        assert!(matches!(
            estimate_sigma(&s, (-1.0, 0.0), 3, &o, Execution::Sequential),
            Err(Error::DepthTooSmall { depth: 3, .. })
        ));
        assert!(estimate_sigma(&s, (-1.5, 0.0), 8, &o, Execution::Sequential).is_err());
        assert!(estimate_hausdorff(&s, (1.0, 1.9), 8, SingularVariant::SMinusOne, &o, Execution::Sequential).is_err());
        assert!(matches!(
            estimate_hausdorff(&s, (1.9, 1.95), 8, SingularVariant::SMinusOne, &o, Execution::Sequential),
            Err(Error::NonBracketing { .. })
        ));
    }

    #[test]
    fn single_parabolic_generator_has_exponent_one() {
        let n1 = GeneratorSet::rauzy().generators()[0].matrix().rows_i64().unwrap();
        let gens = GeneratorSet::new(vec![GeneratorMatrix::new(&n1, 0).unwrap()]).unwrap();
        let e = counting_exponent(&gens, &[10, 100, 1000, 10000]).unwrap();
        assert!((e.point - 1.0).abs() < 0.02, "{e:?}");
        assert!(e.lo <= e.point && e.point <= e.hi);
    }

    #[test]
    fn schedule_checks() {
        let g = GeneratorSet::rauzy();
        assert!(matches!(counting_exponent(&g, &[10, 10, 10, 10]), Err(Error::ScheduleTooShort)));
        assert!(matches!(counting_exponent(&g, &[10, 20, 30]), Err(Error::ScheduleTooShort)));
        assert_eq!(half_decade_schedule(2, 3), vec![100, 316, 1000]);
    }

    #[test]
    fn norm_series_divergence_agrees_with_counting_slope() {
        use crate::estimators::series::norm_series;
        let g = GeneratorSet::rauzy();
        let schedule = half_decade_schedule(1, 3);
        let rho = counting_exponent(&g, &schedule).unwrap().point;
        // below ρ the dyadic shells grow, above it they shrink
        let grows = |r: f64| {
            let sh = norm_series(&g, r, 1 << 9).unwrap().shells_log;
            let n = sh.len() - 1;
            sh[n - 1] - sh[n - 4]
        };
        assert!(grows(rho - 0.2) > 0.0);
        assert!(grows(rho + 0.2) < 0.0);
    }
}
