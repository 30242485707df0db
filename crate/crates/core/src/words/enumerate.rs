//! Depth-first traversal of the word tree under a pruning policy.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::{ExactMatrix, GeneratorSet, Word};

/// Which words a traversal visits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PruningPolicy {
    /// All words of length at most `n`.
    MaxDepth(usize),
    /// Exactly the words with `‖N_i‖ ≤ T`.
    NormCap(f64),
    /// Words whose image simplex `T_i(Δ)` has volume at least the floor.
    /// Only valid for visitors that declare volume-monotone use.
    VolumeFloor(f64),
}

impl PruningPolicy {
    pub(crate) fn validate(&self, gens: &GeneratorSet, volume_monotone: bool) -> Result<()> {
        match *self {
            Self::MaxDepth(_) => Ok(()),
            Self::NormCap(t) => {
                if !(t > 0.0) || !t.is_finite() {
                    return Err(Error::Policy(format!("norm cap must be positive, got {t}")));
                }
                if !gens.supports_norm_cap() {
                    return Err(Error::Policy(
                        "norm-cap pruning needs generators that strictly grow the norm (no permutation matrices)".into(),
                    ));
                }
                Ok(())
            }
            Self::VolumeFloor(v) => {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::Policy(format!("volume floor must be positive, got {v}")));
                }
                if !volume_monotone {
                    return Err(Error::Policy("volume-floor pruning needs a volume-monotone visitor".into()));
                }
                Ok(())
            }
        }
    }

    /// Whether `matrix` at `depth` stays in the visit set. Admission is
    /// monotone along every branch, so a rejected node prunes its subtree.
    fn admits(&self, matrix: &ExactMatrix, depth: usize, cap: &Option<BigInt>) -> bool {
        match *self {
            Self::MaxDepth(n) => depth <= n,
            Self::NormCap(t) => match matrix.column_sums_u64() {
                Some(s) => (s.into_iter().max().unwrap_or(0) as f64) <= t.floor(),
                None => cap.as_ref().is_some_and(|c| matrix.max_column_sum() <= *c),
            },
            Self::VolumeFloor(v) => {
                let d = matrix.dim() - 1;
                let log_ratio: f64 = matrix.column_sums_f64().iter().map(|s| s.ln()).sum();
                crate::geometry::standard_simplex_log_volume(d) - log_ratio >= v.ln()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    /// Single thread, fixed visit order. Use for golden values.
    #[default]
    Sequential,
    /// First-level subtrees on the rayon pool, merged in letter order.
    Parallel,
}

/// A visited node of the word tree.
#[derive(Debug)]
pub struct WordNode<'a> {
    pub word: &'a Word,
    pub matrix: &'a ExactMatrix,
}

impl WordNode<'_> {
    pub fn depth(&self) -> usize {
        self.word.len()
    }
}

/// Accumulator folded over a traversal.
///
/// `split` produces an empty accumulator with the same parameters, and
/// `merge` must be commutative and associative up to floating point
/// reassociation, since parallel shards merge in unspecified grouping.
pub trait WordVisitor: Send + Sized {
    fn visit(&mut self, node: &WordNode<'_>);
    fn split(&self) -> Self;
    fn merge(&mut self, other: Self);

    /// Declares that the visitor only needs words whose image volume is
    /// above a floor, enabling [`PruningPolicy::VolumeFloor`].
    fn volume_monotone(&self) -> bool {
        false
    }
}

/// Counts per depth and the largest entry seen.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraversalSummary {
    pub visited: u64,
    pub per_depth: Vec<u64>,
    max_small: u64,
    max_big: Option<BigInt>,
}

impl TraversalSummary {
    fn record(&mut self, depth: usize, matrix: &ExactMatrix) {
        self.visited += 1;
        if self.per_depth.len() <= depth {
            self.per_depth.resize(depth + 1, 0);
        }
        self.per_depth[depth] += 1;
        if matrix.is_promoted() {
            let m = matrix.max_abs_entry();
            if self.max_big.as_ref().is_none_or(|b| m > *b) {
                self.max_big = Some(m);
            }
        } else {
            let m = matrix.max_abs_entry().to_u64().unwrap_or(u64::MAX);
            self.max_small = self.max_small.max(m);
        }
    }

    pub fn merge(&mut self, other: Self) {
        self.visited += other.visited;
        if self.per_depth.len() < other.per_depth.len() {
            self.per_depth.resize(other.per_depth.len(), 0);
        }
        for (a, b) in self.per_depth.iter_mut().zip(other.per_depth) {
            *a += b;
        }
        self.max_small = self.max_small.max(other.max_small);
        if let Some(b) = other.max_big {
            if self.max_big.as_ref().is_none_or(|a| b > *a) {
                self.max_big = Some(b);
            }
        }
    }

    /// Largest absolute matrix entry over all visited products.
    pub fn max_entry(&self) -> BigInt {
        self.max_big.clone().unwrap_or_else(|| BigInt::from(self.max_small))
    }

    pub fn max_depth(&self) -> Option<usize> {
        self.per_depth.len().checked_sub(1)
    }
}

/// Depth-first traversal delivering every admitted `(word, N_word)` pair to
/// the visitor exactly once. The empty word is included.
pub fn enumerate_words<V: WordVisitor>(
    gens: &GeneratorSet,
    policy: PruningPolicy,
    visitor: &mut V,
    execution: Execution,
) -> Result<TraversalSummary> {
    policy.validate(gens, visitor.volume_monotone())?;
    let cap = match policy {
        PruningPolicy::NormCap(t) => Some(BigInt::from(t.floor() as u128)),
        _ => None,
    };
    let root = ExactMatrix::identity(gens.matrix_size());
    let mut summary = TraversalSummary::default();
    match execution {
        Execution::Sequential => {
            dfs(gens, &policy, &cap, Word::empty(), root, visitor, &mut summary);
        }
        Execution::Parallel => {
            if !policy.admits(&root, 0, &cap) {
                return Ok(summary);
            }
            let word = Word::empty();
            visitor.visit(&WordNode { word: &word, matrix: &root });
            summary.record(0, &root);
            let seeds: Vec<(usize, V)> = (0..gens.len()).map(|j| (j, visitor.split())).collect();
            let shards: Vec<(V, TraversalSummary)> = seeds
                .into_par_iter()
                .map(|(j, mut v)| {
                    let mut s = TraversalSummary::default();
                    let mut w = Word::empty();
                    w.push(j as u16);
                    let m = gens.generators()[j].matrix().clone();
                    dfs(gens, &policy, &cap, w, m, &mut v, &mut s);
                    (v, s)
                })
                .collect();
            for (v, s) in shards {
                visitor.merge(v);
                summary.merge(s);
            }
        }
    }
    Ok(summary)
}

fn dfs<V: WordVisitor>(
    gens: &GeneratorSet,
    policy: &PruningPolicy,
    cap: &Option<BigInt>,
    mut word: Word,
    root: ExactMatrix,
    visitor: &mut V,
    summary: &mut TraversalSummary,
) {
    let base = word.len();
    if !policy.admits(&root, base, cap) {
        return;
    }
    visitor.visit(&WordNode { word: &word, matrix: &root });
    summary.record(base, &root);
    let m = gens.len();
    let mut stack: Vec<(ExactMatrix, usize)> = vec![(root, 0)];
    while let Some((matrix, next)) = stack.last_mut() {
        if *next == m {
            stack.pop();
            if !stack.is_empty() {
                word.pop();
            }
            continue;
        }
        let j = *next;
        *next += 1;
        let child = matrix.mul(gens.generators()[j].matrix());
        let depth = base + stack.len();
        if policy.admits(&child, depth, cap) {
            word.push(j as u16);
            visitor.visit(&WordNode { word: &word, matrix: &child });
            summary.record(depth, &child);
            stack.push((child, 0));
        }
    }
    word.truncate(base);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{l1_operator_norm, MatrixProduct};

    #[derive(Default)]
    struct Collect(Vec<Word>);

    impl WordVisitor for Collect {
        fn visit(&mut self, node: &WordNode<'_>) {
            self.0.push(node.word.clone());
        }
        fn split(&self) -> Self {
            Self::default()
        }
        fn merge(&mut self, other: Self) {
            self.0.extend(other.0);
        }
    }

    fn all_words(m: u16, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for j in 0..m {
                    let mut v = w.clone();
                    v.push(j);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn max_depth_two_visits_thirteen() {
        let g = GeneratorSet::rauzy();
        let mut c = Collect::default();
        let s = enumerate_words(&g, PruningPolicy::MaxDepth(2), &mut c, Execution::Sequential).unwrap();
        assert_eq!(c.0.len(), 13);
        assert_eq!(s.per_depth, vec![1, 3, 9]);
        assert_eq!(s.max_entry(), BigInt::from(2));
    }

    #[test]
    fn norm_cap_one_visits_only_empty_word() {
        let g = GeneratorSet::rauzy();
        let mut c = Collect::default();
        enumerate_words(&g, PruningPolicy::NormCap(1.0), &mut c, Execution::Sequential).unwrap();
        assert_eq!(c.0, vec![Word::empty()]);
    }

    #[test]
    fn norm_cap_matches_brute_force() {
        let g = GeneratorSet::rauzy();
        let cap = 10.0;
        let mut c = Collect::default();
        enumerate_words(&g, PruningPolicy::NormCap(cap), &mut c, Execution::Sequential).unwrap();
        // norms grow by at least one per letter, so length ≤ cap suffices;
        // both length caps give the same count here
        let brute = |len: usize| -> Vec<Word> {
            all_words(3, len)
                .into_iter()
                .filter(|w| {
                    let p = MatrixProduct::of_word(&g, w).unwrap();
                    l1_operator_norm(&p) <= BigInt::from(10)
                })
                .collect()
        };
        let mut got = c.0.clone();
        got.sort();
        let mut want = brute(9);
        want.sort();
        assert_eq!(got, want);
        let mut short: Vec<Word> = got.iter().filter(|w| w.len() <= 4).cloned().collect();
        short.sort();
        let mut want4 = brute(4);
        want4.sort();
        assert_eq!(short, want4);
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = GeneratorSet::rauzy();
        let mut a = Collect::default();
        let mut b = Collect::default();
        let sa = enumerate_words(&g, PruningPolicy::MaxDepth(6), &mut a, Execution::Sequential).unwrap();
        let sb = enumerate_words(&g, PruningPolicy::MaxDepth(6), &mut b, Execution::Parallel).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(sa, sb);
    }

    #[test]
    fn rejects_bad_policies() {
        let g = GeneratorSet::rauzy();
        let mut c = Collect::default();
        assert!(enumerate_words(&g, PruningPolicy::NormCap(0.0), &mut c, Execution::Sequential).is_err());
        assert!(enumerate_words(&g, PruningPolicy::NormCap(-3.0), &mut c, Execution::Sequential).is_err());
        assert!(enumerate_words(&g, PruningPolicy::VolumeFloor(1e-3), &mut c, Execution::Sequential).is_err());
    }
}
