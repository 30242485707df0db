//! Per-level partial sums of the dimension series, in log space.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{enumerate_holes, HoleNode, HoleVisitor, IfsSystem};
use crate::words::{
    count_norm_cap, enumerate_words, for_each_norm, singular_values, Execution, GeneratorSet, PruningPolicy,
    WordNode, WordVisitor,
};

use super::LogSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    /// `Σ vol(∇) In(∇)^t` by word length.
    HoleSeries,
    /// `Σ ‖N_i‖^{-r}` by word length.
    NormSeries,
    /// `Σ φ_s(N_i)` by word length.
    SingularSeries,
    /// `#{‖N_i‖ ≤ T}` increments between consecutive caps.
    CountingFunction,
}

impl SeriesKind {
    pub fn tag(self) -> &'static str {
        match self {
            Self::HoleSeries => "hole-series",
            Self::NormSeries => "norm-series",
            Self::SingularSeries => "singular-series",
            Self::CountingFunction => "counting-function",
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truncation {
    Depth(usize),
    NormCap(f64),
    VolumeFloor(f64),
    Schedule(Vec<u64>),
}

impl From<PruningPolicy> for Truncation {
    fn from(p: PruningPolicy) -> Self {
        match p {
            PruningPolicy::MaxDepth(n) => Self::Depth(n),
            PruningPolicy::NormCap(t) => Self::NormCap(t),
            PruningPolicy::VolumeFloor(v) => Self::VolumeFloor(v),
        }
    }
}

/// Exponent in `φ_s = (σ₂/σ₁)(σ₃/σ₁)^{s−c}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularVariant {
    /// `c = 2`. On Rauzy its level sums grow for every `s` in `(1, 2)`, so
    /// the growth estimator has no root to find and needs `SMinusOne`.
    #[default]
    #[serde(rename = "s-2")]
    SMinusTwo,
    /// `c = 1`.
    #[serde(rename = "s-1")]
    SMinusOne,
}

impl SingularVariant {
    pub fn offset(self) -> f64 {
        match self {
            Self::SMinusTwo => 2.0,
            Self::SMinusOne => 1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Self::SMinusTwo => "s-2",
            Self::SMinusOne => "s-1",
        }
    }
}

/// Level sums of one series at one parameter value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub parameter: f64,
    /// `ln a_n`, `-∞` for an empty level.
    pub level_sums_log: Vec<f64>,
    /// `Σ_{k ≤ n} a_k`.
    pub cumulative: Vec<f64>,
    pub truncation: Truncation,
    /// Dyadic shells `2^{n−1} ≤ ‖N‖ < 2^n`, n = 1, 2, … (norm series only).
    pub shells_log: Vec<f64>,
}

impl SeriesReport {
    fn from_levels(kind: SeriesKind, parameter: f64, levels: &[LogSum], truncation: Truncation) -> Self {
        let cumulative = levels
            .iter()
            .scan(LogSum::new(), |acc, l| {
                acc.merge(l);
                Some(acc.value())
            })
            .collect();
        Self {
            kind,
            parameter,
            level_sums_log: levels.iter().map(LogSum::ln).collect(),
            cumulative,
            truncation,
            shells_log: Vec::new(),
        }
    }

    /// The full partial sum.
    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub const CSV_HEADER: &'static str = "kind,parameter,level,level_sum_log,cumulative";

    /// Rows `kind,parameter,level,level_sum_log,cumulative`, header included.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        self.write_csv_rows(&mut out);
        out
    }

    pub fn write_csv_rows(&self, out: &mut String) {
        for (n, (l, c)) in self.level_sums_log.iter().zip(&self.cumulative).enumerate() {
            let _ = writeln!(out, "{},{},{},{},{}", self.kind, self.parameter, n, l, c);
        }
    }
}

fn merge_levels(a: &mut Vec<LogSum>, b: &[LogSum]) {
    if a.len() < b.len() {
        a.resize(b.len(), LogSum::new());
    }
    for (x, y) in a.iter_mut().zip(b) {
        x.merge(y);
    }
}

fn at_level(v: &mut Vec<LogSum>, n: usize) -> &mut LogSum {
    if v.len() <= n {
        v.resize(n + 1, LogSum::new());
    }
    &mut v[n]
}

struct HoleLevels {
    t: f64,
    levels: Vec<LogSum>,
}

impl HoleVisitor for HoleLevels {
    fn visit(&mut self, h: &HoleNode<'_>) {
        at_level(&mut self.levels, h.depth()).add(h.log_volume + self.t * h.log_inradius);
    }
    fn split(&self) -> Self {
        Self { t: self.t, levels: Vec::new() }
    }
    fn merge(&mut self, other: Self) {
        merge_levels(&mut self.levels, &other.levels);
    }
}

/// `a_n(t) = Σ_{|i| = n, k} vol(∇_{(i,k)}) In(∇_{(i,k)})^t`.
pub fn hole_series(system: &IfsSystem, t: f64, policy: PruningPolicy, execution: Execution) -> Result<SeriesReport> {
    if !(t >= -1.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("hole series needs t ≥ -1, got {t}")));
    }
    let mut v = HoleLevels { t, levels: Vec::new() };
    enumerate_holes(system, policy, &mut v, execution)?;
    Ok(SeriesReport::from_levels(SeriesKind::HoleSeries, t, &v.levels, policy.into()))
}

/// `Σ_{‖N_i‖ ≤ cap} ‖N_i‖^{-r}` by word length and by dyadic shell.
pub fn norm_series(gens: &GeneratorSet, r: f64, cap: u64) -> Result<SeriesReport> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("norm series needs r ≥ 0, got {r}")));
    }
    if cap < 1 {
        return Err(Error::Policy("norm cap must be at least 1".into()));
    }
    let mut levels: Vec<LogSum> = Vec::new();
    let mut shells: Vec<LogSum> = Vec::new();
    for_each_norm(gens, cap, |depth, norm| {
        let term = -r * (norm as f64).ln();
        at_level(&mut levels, depth).add(term);
        at_level(&mut shells, norm.ilog2() as usize).add(term);
    })?;
    Ok(SeriesReport {
        shells_log: shells.iter().map(LogSum::ln).collect(),
        ..SeriesReport::from_levels(SeriesKind::NormSeries, r, &levels, Truncation::NormCap(cap as f64))
    })
}

/// Counting function on an increasing schedule of caps; level `i` holds the
/// increment between caps `i − 1` and `i`, so the cumulative column is the
/// count itself.
pub fn counting_function(gens: &GeneratorSet, schedule: &[u64]) -> Result<SeriesReport> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) || schedule[0] < 1 {
        return Err(Error::ScheduleTooShort);
    }
    let mut prev = 0u64;
    let mut levels = Vec::with_capacity(schedule.len());
    let mut cumulative = Vec::with_capacity(schedule.len());
    for &cap in schedule {
        let c = count_norm_cap(gens, cap)?;
        levels.push(((c - prev) as f64).ln());
        cumulative.push(c as f64);
        prev = c;
    }
    Ok(SeriesReport {
        kind: SeriesKind::CountingFunction,
        parameter: 0.0,
        level_sums_log: levels,
        cumulative,
        truncation: Truncation::Schedule(schedule.to_vec()),
        shells_log: Vec::new(),
    })
}

/// `ln(σ₂/σ₁)` and `ln(σ₃/σ₁)` of a 3×3 product.
pub(crate) fn singular_logs(node: &WordNode<'_>) -> Result<(f64, f64)> {
    let s = singular_values(node.matrix)?;
    Ok(((s[1] / s[0]).ln(), (s[2] / s[0]).ln()))
}

struct SingularLevels {
    s: f64,
    offset: f64,
    levels: Vec<LogSum>,
    failed: bool,
}

impl WordVisitor for SingularLevels {
    fn visit(&mut self, node: &WordNode<'_>) {
        match singular_logs(node) {
            Ok((l2, l3)) => at_level(&mut self.levels, node.depth()).add(l2 + (self.s - self.offset) * l3),
            Err(_) => self.failed = true,
        }
    }
    fn split(&self) -> Self {
        Self { s: self.s, offset: self.offset, levels: Vec::new(), failed: false }
    }
    fn merge(&mut self, other: Self) {
        merge_levels(&mut self.levels, &other.levels);
        self.failed |= other.failed;
    }
}

pub(crate) fn require_three_by_three(system: &IfsSystem) -> Result<()> {
    if system.generators().matrix_size() != 3 {
        return Err(Error::Unsupported(format!(
            "the singular-value series is defined for 3×3 generators, got {}×{}",
            system.generators().matrix_size(),
            system.generators().matrix_size()
        )));
    }
    Ok(())
}

/// `Σ_i (σ₂/σ₁)(σ₃/σ₁)^{s−c}` over the words admitted by `policy`.
pub fn singular_series(
    system: &IfsSystem,
    s: f64,
    variant: SingularVariant,
    policy: PruningPolicy,
    execution: Execution,
) -> Result<SeriesReport> {
    if !(s > 1.0 && s < 2.0) {
        return Err(Error::InvalidArgument(format!("singular series needs s in (1, 2), got {s}")));
    }
    require_three_by_three(system)?;
    let mut v = SingularLevels { s, offset: variant.offset(), levels: Vec::new(), failed: false };
    enumerate_words(system.generators(), policy, &mut v, execution)?;
    if v.failed {
        return Err(Error::SvdFailure);
    }
    Ok(SeriesReport::from_levels(SeriesKind::SingularSeries, s, &v.levels, policy.into()))
}
