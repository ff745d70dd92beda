//! Clopen graphs presented as prefix-pair oracles, membership on points,
//! canonical labelings by truncated tree ranks, and graphs induced by
//! labelings.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::{Label, Ordinal};
use crate::seqspace::{all_seqs_of_len, FinSeq, Nat};
use crate::universal::AlphaTree;

/// Oracle verdict on a rectangle of same-length distinct prefixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairVerdict {
    In,
    Out,
    Undecided,
}

/// A settled edge verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeVerdict {
    In,
    Out,
}

impl From<EdgeVerdict> for PairVerdict {
    fn from(v: EdgeVerdict) -> Self {
        match v {
            EdgeVerdict::In => PairVerdict::In,
            EdgeVerdict::Out => PairVerdict::Out,
        }
    }
}

/// A clopen graph as a decision function on same-length distinct prefix
/// pairs. Implementations must be symmetric and coherent: a decided verdict
/// persists on coordinate-wise extensions.
pub trait GraphOracle {
    fn decide_rect(&self, s: &[Nat], t: &[Nat]) -> PairVerdict;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("points agree on the first {fuel} coordinates; inequality not detectable")]
    NoDivergence { fuel: usize },
    #[error("no decision within fuel {fuel} (diverging at {split}); fuel too small or oracle not clopen")]
    Diverged { split: usize, fuel: usize },
}

/// A point of Baire space given by a lazily evaluated coordinate function.
#[derive(Clone)]
pub struct Point {
    gen: Arc<dyn Fn(usize) -> Nat + Send + Sync>,
    cache: Arc<Mutex<Vec<Nat>>>,
}

impl Point {
    pub fn from_fn(f: impl Fn(usize) -> Nat + Send + Sync + 'static) -> Self {
        Point { gen: Arc::new(f), cache: Arc::new(Mutex::new(Vec::new())) }
    }

    /// Eventually periodic point: `head` then `period` repeated. An empty
    /// period repeats zero.
    pub fn periodic(head: Vec<Nat>, period: Vec<Nat>) -> Self {
        Self::from_fn(move |i| {
            if i < head.len() {
                head[i]
            } else if period.is_empty() {
                0
            } else {
                period[(i - head.len()) % period.len()]
            }
        })
    }

    pub fn coord(&self, i: usize) -> Nat {
        // Coordinate functions are deterministic, so skipping the cache for
        // huge indices (reachable through pointer-chasing procedures) is safe
        // and avoids unbounded memory.
        const CACHE_LIMIT: usize = 1 << 16;
        if i >= CACHE_LIMIT {
            return (self.gen)(i);
        }
        let mut cache = self.cache.lock().unwrap();
        while cache.len() <= i {
            let k = cache.len();
            let v = (self.gen)(k);
            cache.push(v);
        }
        cache[i]
    }

    pub fn prefix(&self, n: usize) -> FinSeq {
        (0..n).map(|i| self.coord(i)).collect()
    }
}

/// Decision on a pair of points together with the prefix length at which the
/// oracle settled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDecision {
    pub verdict: EdgeVerdict,
    pub depth: usize,
}

/// Runs a graph oracle on two points: finds the first divergence, then the
/// least prefix length at which the rectangle is decided.
pub fn decide_pair(
    g: &dyn GraphOracle,
    x: &Point,
    y: &Point,
    fuel: usize,
) -> Result<PairDecision, DecideError> {
    let split = (0..fuel)
        .find(|&i| x.coord(i) != y.coord(i))
        .ok_or(DecideError::NoDivergence { fuel })?;
    for n in split + 1..=fuel {
        match g.decide_rect(&x.prefix(n), &y.prefix(n)) {
            PairVerdict::In => return Ok(PairDecision { verdict: EdgeVerdict::In, depth: n }),
            PairVerdict::Out => return Ok(PairDecision { verdict: EdgeVerdict::Out, depth: n }),
            PairVerdict::Undecided => {}
        }
    }
    Err(DecideError::Diverged { split: split + 1, fuel })
}

// ---------------------------------------------------------------------------
// Labelings and the graphs they induce

/// A (possibly partial) labeling of same-length distinct prefix pairs.
pub trait PairLabeling {
    /// `None` means the pair lies outside the labeled universe.
    fn label_of(&self, s: &[Nat], t: &[Nat]) -> Option<Label>;
}

impl<F: Fn(&[Nat], &[Nat]) -> Option<Label>> PairLabeling for F {
    fn label_of(&self, s: &[Nat], t: &[Nat]) -> Option<Label> {
        self(s, t)
    }
}

/// The clopen graph associated with a labeling: a pair of points is In/Out
/// according to the first verdict-valued label along their common prefixes.
pub struct LabelingGraph<L> {
    labeling: L,
}

pub fn graph_from_labeling<L: PairLabeling>(labeling: L) -> LabelingGraph<L> {
    LabelingGraph { labeling }
}

impl<L: PairLabeling> GraphOracle for LabelingGraph<L> {
    fn decide_rect(&self, s: &[Nat], t: &[Nat]) -> PairVerdict {
        debug_assert_eq!(s.len(), t.len());
        let split = match s.iter().zip(t).position(|(a, b)| a != b) {
            Some(d) => d + 1,
            None => return PairVerdict::Undecided,
        };
        for k in split..=s.len() {
            match self.labeling.label_of(&s[..k], &t[..k]) {
                Some(Label::In) => return PairVerdict::In,
                Some(Label::Out) => return PairVerdict::Out,
                Some(Label::Ord(_)) => {}
                None => return PairVerdict::Undecided,
            }
        }
        PairVerdict::Undecided
    }
}

// ---------------------------------------------------------------------------
// Canonical labeling of a graph oracle

fn norm_pair(s: &[Nat], t: &[Nat]) -> (FinSeq, FinSeq) {
    if s <= t {
        (s.to_vec(), t.to_vec())
    } else {
        (t.to_vec(), s.to_vec())
    }
}

/// The canonical labeling of a clopen graph on the bounded universe:
/// decided pairs carry their verdict, undecided pairs carry the rank of
/// their node in the truncated tree of undecided rectangles below the
/// divergence of the two branches.
pub struct CanonicalLabeling<'g> {
    graph: &'g dyn GraphOracle,
    pub branch_bound: Nat,
    pub depth_bound: usize,
    memo: RefCell<HashMap<(FinSeq, FinSeq), Label>>,
    truncated: RefCell<Vec<(FinSeq, FinSeq)>>,
}

impl<'g> CanonicalLabeling<'g> {
    pub fn new(graph: &'g dyn GraphOracle, branch_bound: Nat, depth_bound: usize) -> Self {
        CanonicalLabeling {
            graph,
            branch_bound,
            depth_bound,
            memo: RefCell::new(HashMap::new()),
            truncated: RefCell::new(Vec::new()),
        }
    }

    /// Pairs whose undecided-rectangle tree was cut by the depth bound; their
    /// ordinal labels are lower bounds only.
    pub fn truncated_pairs(&self) -> Vec<(FinSeq, FinSeq)> {
        self.truncated.borrow().clone()
    }

    fn compute(&self, s: &[Nat], t: &[Nat]) -> Label {
        let key = norm_pair(s, t);
        if let Some(l) = self.memo.borrow().get(&key) {
            return l.clone();
        }
        let label = match self.graph.decide_rect(s, t) {
            PairVerdict::In => Label::In,
            PairVerdict::Out => Label::Out,
            PairVerdict::Undecided => {
                if s.len() >= self.depth_bound {
                    self.truncated.borrow_mut().push(key.clone());
                    Label::Ord(Ordinal::zero())
                } else {
                    // Rank within the tree of undecided rectangles: terminal
                    // nodes (all children decided) get 0.
                    let mut best: Option<u64> = None;
                    for i in 0..self.branch_bound {
                        for j in 0..self.branch_bound {
                            let mut s2 = s.to_vec();
                            s2.push(i);
                            let mut t2 = t.to_vec();
                            t2.push(j);
                            if let Label::Ord(r) = self.compute(&s2, &t2) {
                                let r = r.as_nat().expect("truncated ranks are finite");
                                best = Some(best.map_or(r, |b| b.max(r)));
                            }
                        }
                    }
                    Label::Ord(Ordinal::nat(best.map_or(0, |b| b + 1)))
                }
            }
        };
        self.memo.borrow_mut().insert(key, label.clone());
        label
    }
}

impl PairLabeling for CanonicalLabeling<'_> {
    fn label_of(&self, s: &[Nat], t: &[Nat]) -> Option<Label> {
        if s.len() != t.len() || s == t {
            return None;
        }
        if s.len() > self.depth_bound
            || s.iter().chain(t).any(|&a| a >= self.branch_bound)
        {
            return None;
        }
        Some(self.compute(s, t))
    }
}

/// Materializes the canonical labeling of the bounded universe as a finite
/// labeled tree, together with the list of truncated pairs.
pub fn canonical_alpha_tree(
    g: &dyn GraphOracle,
    branch_bound: Nat,
    depth_bound: usize,
) -> (AlphaTree, Vec<(FinSeq, FinSeq)>) {
    let labeling = CanonicalLabeling::new(g, branch_bound, depth_bound);
    let mut tree = AlphaTree::new(Ordinal::omega());
    for len in 0..=depth_bound {
        let level = all_seqs_of_len(branch_bound, len);
        for s in &level {
            tree.insert_node(s.clone());
        }
        for (i, s) in level.iter().enumerate() {
            for t in &level[i + 1..] {
                let label = labeling.label_of(s, t).expect("within bounds");
                tree.set_label(s.clone(), t.clone(), label);
            }
        }
    }
    (tree, labeling.truncated_pairs())
}

// ---------------------------------------------------------------------------
// Statistical oracle checks

/// A sampled violation of the graph-oracle contract, with a witness.
#[derive(Debug, Clone, Serialize)]
pub enum OracleViolation {
    Asymmetry { s: FinSeq, t: FinSeq },
    Incoherence { s: FinSeq, t: FinSeq, i: Nat, j: Nat },
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub pairs_checked: usize,
    pub violations: Vec<OracleViolation>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples prefix pairs and checks symmetry and one-step coherence.
pub fn check_graph(
    g: &dyn GraphOracle,
    branch_bound: Nat,
    depth_bound: usize,
    samples: usize,
    rng: &mut impl Rng,
) -> CheckReport {
    let mut violations = Vec::new();
    let mut checked = 0;
    while checked < samples {
        let len = rng.random_range(1..=depth_bound);
        let s: FinSeq = (0..len).map(|_| rng.random_range(0..branch_bound)).collect();
        let t: FinSeq = (0..len).map(|_| rng.random_range(0..branch_bound)).collect();
        if s == t {
            continue;
        }
        checked += 1;
        let v = g.decide_rect(&s, &t);
        if v != g.decide_rect(&t, &s) {
            violations.push(OracleViolation::Asymmetry { s: s.clone(), t: t.clone() });
        }
        if v != PairVerdict::Undecided {
            for i in 0..branch_bound {
                for j in 0..branch_bound {
                    let mut s2 = s.clone();
                    s2.push(i);
                    let mut t2 = t.clone();
                    t2.push(j);
                    if g.decide_rect(&s2, &t2) != v {
                        violations.push(OracleViolation::Incoherence {
                            s: s.clone(),
                            t: t.clone(),
                            i,
                            j,
                        });
                    }
                }
            }
        }
    }
    CheckReport { pairs_checked: checked, violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Complete graph: In as soon as the prefixes differ.
    pub struct CompleteGraph;
    impl GraphOracle for CompleteGraph {
        fn decide_rect(&self, s: &[Nat], t: &[Nat]) -> PairVerdict {
            if s != t {
                PairVerdict::In
            } else {
                PairVerdict::Undecided
            }
        }
    }

    struct EmptyGraph;
    impl GraphOracle for EmptyGraph {
        fn decide_rect(&self, s: &[Nat], t: &[Nat]) -> PairVerdict {
            if s != t {
                PairVerdict::Out
            } else {
                PairVerdict::Undecided
            }
        }
    }

    /// Decided (as In) exactly one level past the divergence.
    struct LateGraph;
    impl GraphOracle for LateGraph {
        fn decide_rect(&self, s: &[Nat], t: &[Nat]) -> PairVerdict {
            match s.iter().zip(t).position(|(a, b)| a != b) {
                Some(d) if d + 1 < s.len() => PairVerdict::In,
                _ => PairVerdict::Undecided,
            }
        }
    }

    #[test]
    fn decide_pair_on_complete_and_empty() {
        let x = Point::periodic(vec![0, 5], vec![0]);
        let y = Point::periodic(vec![1, 5], vec![0]);
        let d = decide_pair(&CompleteGraph, &x, &y, 16).unwrap();
        assert_eq!(d.verdict, EdgeVerdict::In);
        assert_eq!(d.depth, 1, "decided right at the divergence prefix");
        let d = decide_pair(&EmptyGraph, &x, &y, 16).unwrap();
        assert_eq!(d.verdict, EdgeVerdict::Out);
    }

    #[test]
    fn decide_pair_requires_divergence() {
        let x = Point::periodic(vec![], vec![7]);
        let y = Point::periodic(vec![], vec![7]);
        assert_eq!(
            decide_pair(&CompleteGraph, &x, &y, 8),
            Err(DecideError::NoDivergence { fuel: 8 })
        );
    }

    #[test]
    fn canonical_labels_complete_graph() {
        let (tree, truncated) = canonical_alpha_tree(&CompleteGraph, 2, 3);
        assert!(truncated.is_empty());
        for (_, _, l) in tree.labels() {
            assert_eq!(*l, Label::In);
        }
    }

    #[test]
    fn canonical_labels_late_graph_rank_zero_at_divergence() {
        let (tree, truncated) = canonical_alpha_tree(&LateGraph, 2, 3);
        // only pairs diverging at the deepest level are cut off undecided
        for (s, t) in &truncated {
            assert_eq!(s.len(), 3);
            assert_eq!(s[..2], t[..2]);
        }
        // pairs diverging at their last coordinate are undecided with all
        // children decided: rank 0
        assert_eq!(
            tree.label(&[0], &[1]).unwrap(),
            Label::Ord(Ordinal::zero())
        );
        assert_eq!(
            tree.label(&[0, 0], &[0, 1]).unwrap(),
            Label::Ord(Ordinal::zero())
        );
        assert_eq!(tree.label(&[0, 0], &[1, 0]).unwrap(), Label::In);
    }

    #[test]
    fn labeling_graph_first_q_label_decides() {
        // one ordinal level at the divergence, Out one level deeper
        let labeling = |s: &[Nat], t: &[Nat]| -> Option<Label> {
            let d = s.iter().zip(t).position(|(a, b)| a != b)?;
            if s.len() == d + 1 {
                Some(Label::Ord(Ordinal::nat(1)))
            } else {
                Some(Label::Out)
            }
        };
        let g = graph_from_labeling(labeling);
        assert_eq!(g.decide_rect(&[0], &[1]), PairVerdict::Undecided);
        assert_eq!(g.decide_rect(&[0, 0], &[1, 0]), PairVerdict::Out);
        let constant_in = |s: &[Nat], t: &[Nat]| -> Option<Label> {
            s.iter().zip(t).position(|(a, b)| a != b).map(|_| Label::In)
        };
        let g = graph_from_labeling(constant_in);
        assert_eq!(g.decide_rect(&[4, 1], &[4, 2]), PairVerdict::In);
    }

    #[test]
    fn check_graph_flags_asymmetric_oracle() {
        struct Biased;
        impl GraphOracle for Biased {
            fn decide_rect(&self, s: &[Nat], t: &[Nat]) -> PairVerdict {
                if s < t {
                    PairVerdict::In
                } else {
                    PairVerdict::Out
                }
            }
        }
        let mut rng = crate::verify::rng(7);
        let report = check_graph(&Biased, 3, 4, 50, &mut rng);
        assert!(!report.ok());
        let report = check_graph(&CompleteGraph, 3, 4, 50, &mut rng);
        assert!(report.ok());
    }
}
