//! Enumeration of the holes `∇_{(i,k)} = T_i(∇_k)`.
//!
//! Hole volumes are chained from the main hole with the product formula
//! `vol(T(Ω)) = vol(Ω)·∏_e |N e|₁⁻¹`, never recomputed from a determinant.
//! Everything is kept in log space so thin deep holes do not underflow.

use crate::error::Result;
use crate::geometry::{facet_measures_of, Simplex};
use crate::words::{
    enumerate_words, Execution, ExactMatrix, ExtendedWord, PruningPolicy, TraversalSummary, Word, WordNode,
    WordVisitor,
};

use super::IfsSystem;

/// A hole handed to a [`HoleVisitor`], borrowing traversal buffers.
#[derive(Clone, Copy, Debug)]
pub struct HoleNode<'a> {
    pub word: &'a Word,
    /// 0-based hole index `k`.
    pub hole: usize,
    /// `N_i`.
    pub matrix: &'a ExactMatrix,
    pub vertices: &'a [Vec<f64>],
    pub log_volume: f64,
    pub log_inradius: f64,
}

impl HoleNode<'_> {
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn volume(&self) -> f64 {
        self.log_volume.exp()
    }

    pub fn inradius(&self) -> f64 {
        self.log_inradius.exp()
    }

    pub fn to_record(&self, holes: usize) -> HoleRecord {
        HoleRecord {
            word: ExtendedWord::new(self.word.clone(), self.hole, holes).expect("hole index in range"),
            vertices: self.vertices.to_vec(),
            log_volume: self.log_volume,
            log_inradius: self.log_inradius,
        }
    }
}

/// Owned copy of a hole.
#[derive(Clone, Debug, PartialEq)]
pub struct HoleRecord {
    pub word: ExtendedWord,
    pub vertices: Vec<Vec<f64>>,
    pub log_volume: f64,
    pub log_inradius: f64,
}

impl HoleRecord {
    pub fn volume(&self) -> f64 {
        self.log_volume.exp()
    }

    pub fn inradius(&self) -> f64 {
        self.log_inradius.exp()
    }

    /// The hole as a [`Simplex`], with volume recomputed from its vertices.
    pub fn simplex(&self) -> Result<Simplex<f64>> {
        Simplex::new(self.vertices.clone())
    }
}

/// Accumulator over holes; same split/merge contract as [`WordVisitor`].
pub trait HoleVisitor: Send + Sized {
    fn visit(&mut self, hole: &HoleNode<'_>);
    fn split(&self) -> Self;
    fn merge(&mut self, other: Self);
}

impl HoleVisitor for () {
    fn visit(&mut self, _: &HoleNode<'_>) {}
    fn split(&self) -> Self {}
    fn merge(&mut self, _: Self) {}
}

#[derive(Clone, Debug, Default)]
pub struct HoleSummary {
    pub words: TraversalSummary,
    pub holes: u64,
    /// Total hole volume per word length.
    pub level_volume: Vec<f64>,
}

impl HoleSummary {
    pub fn cumulative_volume(&self) -> Vec<f64> {
        self.level_volume
            .iter()
            .scan(0.0, |acc, &v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }
}

struct MainHole {
    unit_vertices: Vec<Vec<f64>>,
    log_volume: f64,
}

struct Adapter<'s, V> {
    main: &'s [MainHole],
    d: usize,
    inner: V,
    holes: u64,
    level_volume: Vec<f64>,
    vertices: Vec<Vec<f64>>,
}

impl<V: HoleVisitor> WordVisitor for Adapter<'_, V> {
    fn visit(&mut self, node: &WordNode<'_>) {
        let n = self.d + 1;
        let p: Vec<f64> = node.matrix.to_real();
        let depth = node.depth();
        if self.level_volume.len() <= depth {
            self.level_volume.resize(depth + 1, 0.0);
        }
        for (k, main) in self.main.iter().enumerate() {
            let mut log_ratio = 0.0;
            for (u, out) in main.unit_vertices.iter().zip(self.vertices.iter_mut()) {
                let mut s = 0.0;
                for (r, o) in out.iter_mut().enumerate() {
                    let y: f64 = (0..n).map(|c| p[r * n + c] * u[c]).sum();
                    *o = y;
                    s += y;
                }
                for o in out.iter_mut() {
                    *o /= s;
                }
                log_ratio -= s.ln();
            }
            let log_volume = main.log_volume + log_ratio;
            let perimeter: f64 = facet_measures_of(&self.vertices).iter().sum();
            let log_inradius = (self.d as f64).ln() + log_volume - perimeter.ln();
            self.inner.visit(&HoleNode {
                word: node.word,
                hole: k,
                matrix: node.matrix,
                vertices: &self.vertices,
                log_volume,
                log_inradius,
            });
            self.holes += 1;
            self.level_volume[depth] += log_volume.exp();
        }
    }

    fn split(&self) -> Self {
        Self {
            main: self.main,
            d: self.d,
            inner: self.inner.split(),
            holes: 0,
            level_volume: Vec::new(),
            vertices: self.vertices.clone(),
        }
    }

    fn merge(&mut self, other: Self) {
        self.inner.merge(other.inner);
        self.holes += other.holes;
        if self.level_volume.len() < other.level_volume.len() {
            self.level_volume.resize(other.level_volume.len(), 0.0);
        }
        for (a, b) in self.level_volume.iter_mut().zip(other.level_volume) {
            *a += b;
        }
    }

    // a hole lies inside T_i(Δ), whose volume only shrinks along a branch
    fn volume_monotone(&self) -> bool {
        true
    }
}

/// Visits every hole `∇_{(i,k)}` with `i` admitted by `policy`, each once.
pub fn enumerate_holes<V: HoleVisitor>(
    system: &IfsSystem,
    policy: PruningPolicy,
    visitor: &mut V,
    execution: Execution,
) -> Result<HoleSummary> {
    let d = system.dimension();
    let main = system
        .main_holes()?
        .into_iter()
        .zip(system.holes())
        .map(|(s, m)| MainHole { unit_vertices: m.vertices(), log_volume: s.log_volume() })
        .collect::<Vec<_>>();
    let mut adapter = Adapter {
        main: &main,
        d,
        inner: visitor.split(),
        holes: 0,
        level_volume: Vec::new(),
        vertices: vec![vec![0.0; d + 1]; d + 1],
    };
    let words = enumerate_words(system.generators(), policy, &mut adapter, execution)?;
    visitor.merge(adapter.inner);
    Ok(HoleSummary { words, holes: adapter.holes, level_volume: adapter.level_volume })
}
