//! Labeled level trees and the incrementally constructed universal labeling:
//! a tree over ω^<ω whose edge labels descend in the ⊲ order, built by a fair
//! schedule of extension requests so that every consistent finite request is
//! realized by infinitely many fresh children.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::{
    enumerate_below, index_below, pair, triangle_lt, unpair, Label, Ordinal, OrdinalError,
};
use crate::seqspace::{FinSeq, Nat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniversalError {
    #[error("alpha must be a limit notation, got {0}")]
    NotLimit(String),
    #[error("node {0:?} is not in the tree")]
    UnknownNode(FinSeq),
    #[error("request inconsistent: {0}")]
    Inconsistent(String),
    #[error("horizon {horizon} exhausted with {got} of {want} witnesses")]
    HorizonExhausted { horizon: usize, got: usize, want: usize },
    #[error("invalid tree data: {0}")]
    InvalidTree(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

fn norm_pair(s: &[Nat], t: &[Nat]) -> (FinSeq, FinSeq) {
    if s <= t {
        (s.to_vec(), t.to_vec())
    } else {
        (t.to_vec(), s.to_vec())
    }
}

// ---------------------------------------------------------------------------
// Finite labeled trees

/// A finite parent-closed subtree of ω^<ω with labels on same-length
/// distinct node pairs. Labels are stored symmetrically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AlphaTreeRepr", into = "AlphaTreeRepr")]
pub struct AlphaTree {
    alpha: Ordinal,
    nodes: Vec<FinSeq>,
    node_set: HashMap<FinSeq, usize>,
    labels: HashMap<(FinSeq, FinSeq), Label>,
}

impl AlphaTree {
    pub fn new(alpha: Ordinal) -> Self {
        let mut t = AlphaTree {
            alpha,
            nodes: Vec::new(),
            node_set: HashMap::new(),
            labels: HashMap::new(),
        };
        t.insert_node(Vec::new());
        t
    }

    pub fn alpha(&self) -> &Ordinal {
        &self.alpha
    }

    /// Nodes in insertion order (root first).
    pub fn nodes(&self) -> &[FinSeq] {
        &self.nodes
    }

    pub fn contains(&self, s: &[Nat]) -> bool {
        self.node_set.contains_key(s)
    }

    pub fn children_of(&self, p: &[Nat]) -> Vec<FinSeq> {
        self.nodes
            .iter()
            .filter(|n| n.len() == p.len() + 1 && n[..p.len()] == *p)
            .cloned()
            .collect()
    }

    /// Inserts a node; the parent must already be present. Idempotent.
    pub fn insert_node(&mut self, s: FinSeq) {
        if self.node_set.contains_key(&s) {
            return;
        }
        if !s.is_empty() {
            assert!(
                self.node_set.contains_key(&s[..s.len() - 1]),
                "parent of {s:?} missing"
            );
        }
        self.node_set.insert(s.clone(), self.nodes.len());
        self.nodes.push(s);
    }

    pub fn set_label(&mut self, s: FinSeq, t: FinSeq, label: Label) {
        assert_eq!(s.len(), t.len(), "labels live on same-length pairs");
        assert_ne!(s, t, "labels live on distinct pairs");
        assert!(self.contains(&s) && self.contains(&t), "label on unknown node");
        self.labels.insert(norm_pair(&s, &t), label);
    }

    pub fn label(&self, s: &[Nat], t: &[Nat]) -> Option<Label> {
        self.labels.get(&norm_pair(s, t)).cloned()
    }

    pub fn labels(&self) -> impl Iterator<Item = (&FinSeq, &FinSeq, &Label)> {
        self.labels.iter().map(|((s, t), l)| (s, t, l))
    }
}

#[derive(Serialize, Deserialize)]
struct LabelEntry {
    s: FinSeq,
    t: FinSeq,
    label: Label,
}

#[derive(Serialize, Deserialize)]
struct AlphaTreeRepr {
    alpha: String,
    nodes: Vec<FinSeq>,
    labels: Vec<LabelEntry>,
}

impl From<AlphaTree> for AlphaTreeRepr {
    fn from(t: AlphaTree) -> Self {
        let mut labels: Vec<LabelEntry> = t
            .labels
            .iter()
            .map(|((s, u), l)| LabelEntry { s: s.clone(), t: u.clone(), label: l.clone() })
            .collect();
        labels.sort_by(|a, b| (&a.s, &a.t).cmp(&(&b.s, &b.t)));
        AlphaTreeRepr {
            alpha: t.alpha.to_string(),
            nodes: t.nodes.clone(),
            labels,
        }
    }
}

impl TryFrom<AlphaTreeRepr> for AlphaTree {
    type Error = UniversalError;

    fn try_from(r: AlphaTreeRepr) -> Result<Self, Self::Error> {
        let alpha: Ordinal = r
            .alpha
            .parse()
            .map_err(|e: OrdinalError| UniversalError::InvalidTree(e.to_string()))?;
        let mut tree = AlphaTree::new(alpha);
        let mut nodes = r.nodes;
        nodes.sort_by_key(|n| n.len());
        for n in nodes {
            if !n.is_empty() && !tree.contains(&n[..n.len() - 1]) {
                return Err(UniversalError::InvalidTree(format!(
                    "node {n:?} has no parent in the tree"
                )));
            }
            tree.insert_node(n);
        }
        for e in r.labels {
            if e.s.len() != e.t.len() || e.s == e.t || !tree.contains(&e.s) || !tree.contains(&e.t)
            {
                return Err(UniversalError::InvalidTree(format!(
                    "bad label entry ({:?},{:?})",
                    e.s, e.t
                )));
            }
            tree.set_label(e.s, e.t, e.label);
        }
        Ok(tree)
    }
}

/// A violation of the labeled-tree conditions, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TreeViolation {
    MissingLabel { s: FinSeq, t: FinSeq },
    /// child-pair label fails to ⊲-descend below the parent-pair label
    Descent { s: FinSeq, t: FinSeq, child: Label, parent: Label },
}

/// Checks every same-length distinct node pair: a label must exist, and when
/// the two parents differ, it must lie ⊲-below the parents' label. Sibling
/// pairs are unconstrained.
pub fn validate_alpha_tree(tree: &AlphaTree) -> Vec<TreeViolation> {
    let mut by_level: HashMap<usize, Vec<&FinSeq>> = HashMap::new();
    for n in tree.nodes() {
        by_level.entry(n.len()).or_default().push(n);
    }
    let mut violations = Vec::new();
    for level in by_level.values() {
        for (i, s) in level.iter().enumerate() {
            for t in &level[i + 1..] {
                let Some(l) = tree.label(s, t) else {
                    violations.push(TreeViolation::MissingLabel { s: (*s).clone(), t: (*t).clone() });
                    continue;
                };
                if s.is_empty() {
                    continue;
                }
                let (ps, pt) = (&s[..s.len() - 1], &t[..t.len() - 1]);
                if ps == pt {
                    continue;
                }
                let Some(pl) = tree.label(ps, pt) else {
                    violations.push(TreeViolation::MissingLabel { s: ps.to_vec(), t: pt.to_vec() });
                    continue;
                };
                if !triangle_lt(&l, &pl) {
                    violations.push(TreeViolation::Descent {
                        s: (*s).clone(),
                        t: (*t).clone(),
                        child: l,
                        parent: pl,
                    });
                }
            }
        }
    }
    violations
}

// ---------------------------------------------------------------------------
// Filler rules

/// Default label for a pair nobody asked about: propagate a settled parent
/// label, otherwise Out (keeping the graph sparse and runs reproducible).
pub fn plain_filler(parent_label: Option<&Label>) -> Label {
    match parent_label {
        Some(Label::In) => Label::In,
        Some(Label::Out) => Label::Out,
        _ => Label::Out,
    }
}

/// Filler for the true-clopen variant: distinct same-length pairs below
/// level 1 that share their first coordinate are forced Out.
pub fn lprime_filler(s: &[Nat], t: &[Nat], parent_label: Option<&Label>) -> Label {
    if s.len() > 1 && !t.is_empty() && s[0] == t[0] {
        Label::Out
    } else {
        plain_filler(parent_label)
    }
}

// ---------------------------------------------------------------------------
// The universal construction

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Plain,
    TrueClopen,
}

/// An extension request: attach a fresh child to `p` whose labels against
/// the listed same-level nodes are prescribed by `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestTriple {
    pub p: FinSeq,
    /// (node, required label) pairs; nodes must sit at level |p|+1
    pub f: Vec<(FinSeq, Label)>,
}

/// Incrementally built universal labeling. Only explicitly requested labels
/// are stored; every other pair's label is derived: sibling pairs and
/// ordinal-parented pairs read Out, settled parent labels propagate, and the
/// true-clopen variant forces Out across same-first-coordinate pairs.
pub struct UniversalTree {
    alpha: Ordinal,
    variant: Variant,
    nodes: Vec<FinSeq>,
    node_index: HashMap<FinSeq, usize>,
    child_count: HashMap<FinSeq, Nat>,
    stored: HashMap<(FinSeq, FinSeq), Label>,
    step: u64,
    cursor: u64,
}

impl UniversalTree {
    pub fn new(alpha: Ordinal, variant: Variant) -> Result<Self, UniversalError> {
        if !alpha.is_limit() {
            return Err(UniversalError::NotLimit(alpha.to_string()));
        }
        let mut u = UniversalTree {
            alpha,
            variant,
            nodes: Vec::new(),
            node_index: HashMap::new(),
            child_count: HashMap::new(),
            stored: HashMap::new(),
            step: 0,
            cursor: 0,
        };
        u.push_node(Vec::new());
        Ok(u)
    }

    pub fn alpha(&self) -> &Ordinal {
        &self.alpha
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    pub fn nodes(&self) -> &[FinSeq] {
        &self.nodes
    }

    pub fn contains(&self, s: &[Nat]) -> bool {
        self.node_index.contains_key(s)
    }

    pub fn children_of(&self, p: &[Nat]) -> Vec<FinSeq> {
        let count = self.child_count.get(p).copied().unwrap_or(0);
        (0..count)
            .map(|i| {
                let mut c = p.to_vec();
                c.push(i);
                c
            })
            .collect()
    }

    fn push_node(&mut self, s: FinSeq) {
        self.node_index.insert(s.clone(), self.nodes.len());
        self.child_count.insert(s.clone(), 0);
        self.nodes.push(s);
    }

    /// The label of a pair of constructed nodes; None off the tree or on
    /// non-pairs.
    pub fn label(&self, s: &[Nat], t: &[Nat]) -> Option<Label> {
        if s.len() != t.len() || s == t || !self.contains(s) || !self.contains(t) {
            return None;
        }
        Some(self.label_inner(s, t))
    }

    fn label_inner(&self, s: &[Nat], t: &[Nat]) -> Label {
        if let Some(l) = self.stored.get(&norm_pair(s, t)) {
            return l.clone();
        }
        if self.variant == Variant::TrueClopen && s.len() > 1 && s[0] == t[0] {
            return Label::Out;
        }
        if s.len() == 1 {
            return plain_filler(None);
        }
        let (ps, pt) = (&s[..s.len() - 1], &t[..t.len() - 1]);
        if ps == pt {
            return plain_filler(None);
        }
        plain_filler(Some(&self.label_inner(ps, pt)))
    }

    /// Checks a request against the current labeling; Err describes the
    /// first problem found.
    pub fn check_request(&self, req: &RequestTriple) -> Result<(), UniversalError> {
        if !self.contains(&req.p) {
            return Err(UniversalError::UnknownNode(req.p.clone()));
        }
        let mut seen: Vec<&FinSeq> = Vec::new();
        for (s, l) in &req.f {
            if !self.contains(s) {
                return Err(UniversalError::UnknownNode(s.clone()));
            }
            if s.len() != req.p.len() + 1 {
                return Err(UniversalError::Inconsistent(format!(
                    "{s:?} is not one level below the parent"
                )));
            }
            if seen.contains(&s) {
                return Err(UniversalError::Inconsistent(format!("{s:?} listed twice")));
            }
            seen.push(s);
            let sp = &s[..s.len() - 1];
            if sp == req.p.as_slice() {
                // sibling of the new child: unconstrained, except that the
                // true-clopen variant forces Out below level 1
                if self.variant == Variant::TrueClopen
                    && !req.p.is_empty()
                    && *l != Label::Out
                {
                    return Err(UniversalError::Inconsistent(format!(
                        "sibling {s:?} below level 1 must be Out in the true-clopen variant"
                    )));
                }
            } else {
                let pl = self.label(&req.p, sp).expect("parents are tree nodes");
                if !triangle_lt(l, &pl) {
                    return Err(UniversalError::Inconsistent(format!(
                        "label {l} for {s:?} does not sit below {pl} at the parents"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Attaches a fresh child realizing the request. Callers must have
    /// checked consistency.
    fn apply_request(&mut self, req: &RequestTriple) -> FinSeq {
        let idx = self.child_count.get_mut(&req.p).expect("parent exists");
        let mut child = req.p.clone();
        child.push(*idx);
        *idx += 1;
        self.push_node(child.clone());
        for (s, l) in &req.f {
            self.stored.insert(norm_pair(&child, s), l.clone());
        }
        child
    }

    /// One schedule step: decode the triple at the cursor, apply it if it is
    /// applicable (nodes exist, labels consistent), advance. Returns the
    /// created node, if any.
    pub fn build_step(&mut self) -> Option<FinSeq> {
        let cur = self.cursor;
        self.cursor += 1;
        self.step += 1;
        let req = self.scheduled_at(cur)?;
        if self.check_request(&req).is_err() {
            return None;
        }
        Some(self.apply_request(&req))
    }

    pub fn build_steps(&mut self, n: usize) -> usize {
        (0..n).filter(|_| self.build_step().is_some()).count()
    }

    /// Returns up to `count` distinct children of the request's parent whose
    /// labels match the request, first scanning existing children and then
    /// growing the tree (each new child costs one unit of horizon).
    pub fn find_witnesses(
        &mut self,
        req: &RequestTriple,
        count: usize,
        horizon: usize,
    ) -> Result<Vec<FinSeq>, UniversalError> {
        self.check_request(req)?;
        let mut found: Vec<FinSeq> = self
            .children_of(&req.p)
            .into_iter()
            .filter(|c| {
                req.f
                    .iter()
                    .all(|(s, l)| self.label(c, s).as_ref() == Some(l))
            })
            .take(count)
            .collect();
        let mut used = 0;
        while found.len() < count && used < horizon {
            let child = self.apply_request(req);
            debug_assert!(req
                .f
                .iter()
                .all(|(s, l)| self.label(&child, s).as_ref() == Some(l)));
            found.push(child);
            used += 1;
        }
        if found.len() < count {
            return Err(UniversalError::HorizonExhausted {
                horizon,
                got: found.len(),
                want: count,
            });
        }
        Ok(found)
    }

    /// Freezes the constructed region into a finite tree with every pair
    /// label materialized.
    pub fn snapshot(&self) -> AlphaTree {
        let mut tree = AlphaTree::new(self.alpha.clone());
        for n in &self.nodes {
            tree.insert_node(n.clone());
        }
        let mut by_level: HashMap<usize, Vec<&FinSeq>> = HashMap::new();
        for n in &self.nodes {
            by_level.entry(n.len()).or_default().push(n);
        }
        for level in by_level.values() {
            for (i, s) in level.iter().enumerate() {
                for t in &level[i + 1..] {
                    let l = self.label(s, t).expect("same-level pair");
                    tree.set_label((*s).clone(), (*t).clone(), l);
                }
            }
        }
        tree
    }

    // -- the schedule ------------------------------------------------------

    /// The g-th entry of the fixed label list: In, Out, then the enumeration
    /// of notations below alpha.
    pub fn label_list(&self, i: u64) -> Label {
        match i {
            0 => Label::In,
            1 => Label::Out,
            k => Label::Ord(
                enumerate_below(&self.alpha, k - 2).expect("limit alpha has notations below it"),
            ),
        }
    }

    fn label_index(&self, l: &Label) -> Result<u64, UniversalError> {
        Ok(match l {
            Label::In => 0,
            Label::Out => 1,
            Label::Ord(b) => 2 + index_below(&self.alpha, b)?,
        })
    }

    /// Candidate F-members for parent index `pi` at grade `g`: creation
    /// indices below g whose node sits one level below the parent.
    fn grade_candidates(&self, g: usize, pi: usize) -> Vec<usize> {
        let plen = self.nodes[pi].len();
        (0..g).filter(|&i| self.nodes[i].len() == plen + 1).collect()
    }

    /// Decodes the triple scheduled at a cursor position, if any. The cursor
    /// unpairs into (repetition, body) and the body into (grade-1, index);
    /// grade g ranges over the first g created nodes, subsets of size ≤ g
    /// ordered by size then lexicographic rank, and label assignments in
    /// mixed radix over the first g list labels. Positions whose grade
    /// exceeds the current node count, or whose index runs past the grade's
    /// triple count, schedule nothing.
    pub fn scheduled_at(&self, cursor: u64) -> Option<RequestTriple> {
        let (_rep, body) = unpair(cursor);
        let (g0, j) = unpair(body);
        let g = (g0 + 1) as usize;
        if self.nodes.len() < g {
            return None;
        }
        let mut j = j as u128;
        for pi in 0..g {
            let cands = self.grade_candidates(g, pi);
            for k in 0..=g.min(cands.len()) {
                let combs = binom(cands.len() as u64, k as u64);
                let assigns = pow_sat(g as u128, k as u32);
                let block = combs.saturating_mul(assigns);
                if j < block {
                    let (comb_rank, mut f_rank) = if assigns == u128::MAX {
                        (0, j)
                    } else {
                        (j / assigns, j % assigns)
                    };
                    let subset = unrank_combination(cands.len(), k, comb_rank);
                    let mut f = Vec::with_capacity(k);
                    // digits most-significant-first, one per chosen slot
                    let mut digits = vec![0u64; k];
                    for slot in (0..k).rev() {
                        digits[slot] = (f_rank % g as u128) as u64;
                        f_rank /= g as u128;
                    }
                    for (slot, &ci) in subset.iter().enumerate() {
                        let node = self.nodes[cands[ci]].clone();
                        f.push((node, self.label_list(digits[slot])));
                    }
                    return Some(RequestTriple { p: self.nodes[pi].clone(), f });
                }
                j -= block;
            }
        }
        None
    }

    /// The grade of a request: the least g admitting it (parent and F drawn
    /// from the first g created nodes, |F| ≤ g, labels among the first g
    /// list entries).
    pub fn grade_of(&self, req: &RequestTriple) -> Result<usize, UniversalError> {
        let pi = *self
            .node_index
            .get(&req.p)
            .ok_or_else(|| UniversalError::UnknownNode(req.p.clone()))?;
        let mut g = pi + 1;
        g = g.max(req.f.len().max(1));
        for (s, l) in &req.f {
            let si = *self
                .node_index
                .get(s)
                .ok_or_else(|| UniversalError::UnknownNode(s.clone()))?;
            g = g.max(si + 1);
            g = g.max(self.label_index(l)? as usize + 1);
        }
        Ok(g)
    }

    /// A cursor position at which this exact request is scheduled; distinct
    /// `rep` values give distinct positions, realizing "infinitely many
    /// repetitions".
    pub fn position_of(&self, req: &RequestTriple, rep: u64) -> Result<u64, UniversalError> {
        let g = self.grade_of(req)?;
        let pi_target = self.node_index[&req.p];
        let mut j: u128 = 0;
        for pi in 0..g {
            let cands = self.grade_candidates(g, pi);
            // F slots sorted by candidate order
            let mut chosen: Vec<(usize, u64)> = Vec::new(); // (cand position, label digit)
            if pi == pi_target {
                for (s, l) in &req.f {
                    let si = self.node_index[s];
                    let ci = cands
                        .iter()
                        .position(|&c| c == si)
                        .ok_or_else(|| {
                            UniversalError::Inconsistent(format!(
                                "{s:?} is not one level below the parent"
                            ))
                        })?;
                    chosen.push((ci, self.label_index(l)?));
                }
                chosen.sort();
            }
            for k in 0..=g.min(cands.len()) {
                let combs = binom(cands.len() as u64, k as u64);
                let assigns = pow_sat(g as u128, k as u32);
                if pi == pi_target && k == req.f.len() {
                    let positions: Vec<usize> = chosen.iter().map(|&(c, _)| c).collect();
                    let comb_rank = rank_combination(cands.len(), &positions);
                    let mut f_rank: u128 = 0;
                    for &(_, d) in &chosen {
                        f_rank = f_rank * g as u128 + d as u128;
                    }
                    j = j.saturating_add(comb_rank.saturating_mul(assigns) + f_rank);
                    let j64 = u64::try_from(j).map_err(|_| OrdinalError::Overflow)?;
                    let body = pair(g as u64 - 1, j64)?;
                    return Ok(pair(rep, body)?);
                }
                j = j.saturating_add(combs.saturating_mul(assigns));
            }
        }
        unreachable!("grade_of guarantees the parent index is below g")
    }
}

impl Serialize for UniversalTree {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut labels: Vec<LabelEntry> = self
            .stored
            .iter()
            .map(|((s, t), l)| LabelEntry { s: s.clone(), t: t.clone(), label: l.clone() })
            .collect();
        labels.sort_by(|a, b| (&a.s, &a.t).cmp(&(&b.s, &b.t)));
        let mut st = ser.serialize_struct("UniversalTree", 6)?;
        st.serialize_field("alpha", &self.alpha.to_string())?;
        st.serialize_field("nodes", &self.nodes)?;
        st.serialize_field("labels", &labels)?;
        st.serialize_field("step", &self.step)?;
        st.serialize_field("cursor", &self.cursor)?;
        st.serialize_field("variant", &self.variant)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for UniversalTree {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            alpha: String,
            nodes: Vec<FinSeq>,
            labels: Vec<LabelEntry>,
            step: u64,
            cursor: u64,
            variant: Variant,
        }
        let r = Repr::deserialize(de)?;
        let alpha: Ordinal = r.alpha.parse().map_err(serde::de::Error::custom)?;
        let mut u = UniversalTree::new(alpha, r.variant).map_err(serde::de::Error::custom)?;
        for n in r.nodes {
            if n.is_empty() {
                continue;
            }
            let p = n[..n.len() - 1].to_vec();
            if !u.contains(&p) {
                return Err(serde::de::Error::custom(format!(
                    "node {n:?} has no parent in the snapshot"
                )));
            }
            let expected = {
                let c = u.child_count.get_mut(&p).unwrap();
                let idx = *c;
                *c += 1;
                idx
            };
            if n[n.len() - 1] != expected {
                return Err(serde::de::Error::custom(format!(
                    "node {n:?} breaks the fresh-child naming order"
                )));
            }
            u.push_node(n);
        }
        for e in r.labels {
            if !u.contains(&e.s) || !u.contains(&e.t) || e.s.len() != e.t.len() || e.s == e.t {
                return Err(serde::de::Error::custom(format!(
                    "bad label entry ({:?},{:?})",
                    e.s, e.t
                )));
            }
            u.stored.insert(norm_pair(&e.s, &e.t), e.label);
        }
        u.step = r.step;
        u.cursor = r.cursor;
        Ok(u)
    }
}

// ---------------------------------------------------------------------------
// Combinatorial helpers (saturating: huge grades only need ordering, not
// exact counts)

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128);
        acc /= (i + 1) as u128;
    }
    acc
}

fn pow_sat(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// The r-th k-subset of {0..m} in lexicographic order.
fn unrank_combination(m: usize, k: usize, mut r: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0usize;
    let mut k_left = k;
    while k_left > 0 {
        let rest = binom((m - next - 1) as u64, (k_left - 1) as u64);
        if r < rest {
            out.push(next);
            k_left -= 1;
            next += 1;
        } else {
            r -= rest;
            next += 1;
        }
    }
    out
}

fn rank_combination(m: usize, items: &[usize]) -> u128 {
    let mut r: u128 = 0;
    let mut prev = 0usize;
    let k = items.len();
    for (slot, &item) in items.iter().enumerate() {
        for skipped in prev..item {
            r = r.saturating_add(binom((m - skipped - 1) as u64, (k - slot - 1) as u64));
        }
        prev = item + 1;
    }
    r
}
