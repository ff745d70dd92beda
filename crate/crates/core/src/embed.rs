//! Embedding labeled trees into the universal tree: the breadth-first
//! request-driven construction of σ, lazy embeddings of infinite tree
//! oracles, the induced point map, and reduction verification.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::ser::SerializeSeq;
use serde::Serialize;
use thiserror::Error;

use crate::clopen::{decide_pair, graph_from_labeling, DecideError, Point};
use crate::ordinal::Label;
use crate::seqspace::{FinSeq, Nat};
use crate::universal::{
    validate_alpha_tree, AlphaTree, RequestTriple, TreeViolation, UniversalError, UniversalTree,
};

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("source tree is not a valid labeled tree ({0} violations)")]
    InvalidSource(usize),
    #[error("source has no label for pair ({0:?}, {1:?})")]
    MissingLabel(FinSeq, FinSeq),
    #[error("prefix {0:?} is not a node of the source tree")]
    DomainViolation(FinSeq),
    #[error("embedded labels disagree at ({s:?}, {t:?}): expected {want}, found {got}")]
    PairMismatch { s: FinSeq, t: FinSeq, want: String, got: String },
    #[error(transparent)]
    Universal(#[from] UniversalError),
}

/// A finished embedding: source nodes paired with their images, in the
/// order they were embedded.
#[derive(Debug, Clone)]
pub struct Embedding {
    pairs: Vec<(FinSeq, FinSeq)>,
    map: HashMap<FinSeq, FinSeq>,
}

impl Embedding {
    pub fn pairs(&self) -> &[(FinSeq, FinSeq)] {
        &self.pairs
    }

    pub fn image(&self, s: &[Nat]) -> Option<&FinSeq> {
        self.map.get(s)
    }
}

impl Serialize for Embedding {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            source_node: &'a FinSeq,
            target_node: &'a FinSeq,
        }
        let mut seq = ser.serialize_seq(Some(self.pairs.len()))?;
        for (s, t) in &self.pairs {
            seq.serialize_element(&Entry { source_node: s, target_node: t })?;
        }
        seq.end()
    }
}

/// Source nodes in embedding order: level first, then lexicographic.
fn bfs_order(tree: &AlphaTree) -> Vec<FinSeq> {
    let mut nodes: Vec<FinSeq> = tree.nodes().to_vec();
    nodes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    nodes
}

/// Embeds a finite labeled tree into the universal tree, one node at a time
/// in breadth-first order, realizing each node as a fresh witness for the
/// request "attach a child of σ(parent) whose labels against the already
/// embedded level mates are the source labels". All invariants are
/// re-checked exhaustively before returning.
pub fn embed_tree(
    tree: &AlphaTree,
    u: &mut UniversalTree,
    horizon: usize,
) -> Result<Embedding, EmbedError> {
    let violations = validate_alpha_tree(tree);
    if !violations.is_empty() {
        // missing labels surface as a dedicated error for better diagnosis
        if let Some(TreeViolation::MissingLabel { s, t }) = violations
            .iter()
            .find(|v| matches!(v, TreeViolation::MissingLabel { .. }))
        {
            return Err(EmbedError::MissingLabel(s.clone(), t.clone()));
        }
        return Err(EmbedError::InvalidSource(violations.len()));
    }
    let order = bfs_order(tree);
    let mut emb = Embedding { pairs: Vec::new(), map: HashMap::new() };
    for r in &order {
        if r.is_empty() {
            emb.map.insert(Vec::new(), Vec::new());
            emb.pairs.push((Vec::new(), Vec::new()));
            continue;
        }
        let p = emb.map[&r[..r.len() - 1]].clone();
        let mut f = Vec::new();
        for s in &order {
            if s.len() == r.len() && s < r {
                let label = tree
                    .label(r, s)
                    .ok_or_else(|| EmbedError::MissingLabel(r.clone(), s.clone()))?;
                f.push((emb.map[s].clone(), label));
            }
        }
        let witness = u
            .find_witnesses(&RequestTriple { p, f }, 1, horizon)?
            .pop()
            .expect("find_witnesses returns the requested count");
        emb.map.insert(r.clone(), witness.clone());
        emb.pairs.push((r.clone(), witness));
    }
    check_embedding(tree, u, &emb)?;
    Ok(emb)
}

/// Exhaustive post-verification: injectivity, level and prefix-order
/// preservation, and label agreement on every same-length distinct pair.
fn check_embedding(
    tree: &AlphaTree,
    u: &UniversalTree,
    emb: &Embedding,
) -> Result<(), EmbedError> {
    let nodes = tree.nodes();
    for (i, s) in nodes.iter().enumerate() {
        let img_s = &emb.map[s];
        if img_s.len() != s.len() {
            return Err(EmbedError::PairMismatch {
                s: s.clone(),
                t: s.clone(),
                want: "level".into(),
                got: format!("{}", img_s.len()),
            });
        }
        if !s.is_empty() {
            let pimg = &emb.map[&s[..s.len() - 1]];
            if img_s[..img_s.len() - 1] != **pimg {
                return Err(EmbedError::PairMismatch {
                    s: s.clone(),
                    t: s[..s.len() - 1].to_vec(),
                    want: "prefix order".into(),
                    got: "broken".into(),
                });
            }
        }
        for t in &nodes[i + 1..] {
            let img_t = &emb.map[t];
            if img_s == img_t {
                return Err(EmbedError::PairMismatch {
                    s: s.clone(),
                    t: t.clone(),
                    want: "injectivity".into(),
                    got: format!("{img_s:?}"),
                });
            }
            if s.len() != t.len() {
                continue;
            }
            let want = tree
                .label(s, t)
                .ok_or_else(|| EmbedError::MissingLabel(s.clone(), t.clone()))?;
            let got = u.label(img_s, img_t);
            if got.as_ref() != Some(&want) {
                return Err(EmbedError::PairMismatch {
                    s: s.clone(),
                    t: t.clone(),
                    want: want.to_string(),
                    got: got.map_or("<none>".into(), |l| l.to_string()),
                });
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Lazy sources

/// A possibly infinite, finitely branching labeled tree given as an oracle.
pub trait TreeSource {
    fn children(&self, s: &[Nat]) -> Vec<FinSeq>;
    /// label of a same-length distinct node pair; panics off the tree
    fn label(&self, s: &[Nat], t: &[Nat]) -> Label;
    fn contains(&self, s: &[Nat]) -> bool;
}

/// A finite tree completed to an infinite one: every leaf grows a single
/// chain of 0-children. Labels beyond the stored pairs propagate a settled
/// parent label and otherwise read Out.
pub struct Completion {
    base: AlphaTree,
}

impl Completion {
    pub fn new(base: AlphaTree) -> Self {
        Completion { base }
    }

    pub fn base(&self) -> &AlphaTree {
        &self.base
    }
}

impl TreeSource for Completion {
    fn children(&self, s: &[Nat]) -> Vec<FinSeq> {
        let kids = if self.base.contains(s) { self.base.children_of(s) } else { Vec::new() };
        if kids.is_empty() {
            let mut c = s.to_vec();
            c.push(0);
            vec![c]
        } else {
            kids
        }
    }

    fn label(&self, s: &[Nat], t: &[Nat]) -> Label {
        if self.base.contains(s) && self.base.contains(t) {
            if let Some(l) = self.base.label(s, t) {
                return l;
            }
        }
        let (ps, pt) = (&s[..s.len() - 1], &t[..t.len() - 1]);
        if ps == pt {
            return Label::Out;
        }
        match self.label(ps, pt) {
            Label::In => Label::In,
            _ => Label::Out,
        }
    }

    fn contains(&self, s: &[Nat]) -> bool {
        if self.base.contains(s) {
            return true;
        }
        // a chain node: some proper prefix is a base leaf, the rest zeros
        (0..s.len()).rev().find_map(|k| {
            if self.base.contains(&s[..k]) {
                Some(
                    self.base.children_of(&s[..k]).is_empty()
                        && s[k..].iter().all(|&v| v == 0),
                )
            } else {
                None
            }
        }) == Some(true)
    }
}

/// An embedding of a lazy tree source, extended level by level on demand.
/// Needed levels of the source are embedded via the same request mechanism
/// as the finite case; deeper levels are never queried.
pub struct LazyEmbedding<S: TreeSource> {
    source: S,
    u: UniversalTree,
    sigma: HashMap<FinSeq, FinSeq>,
    /// source nodes per embedded level, in embedding order
    levels: Vec<Vec<FinSeq>>,
    horizon: usize,
    /// injected label faults, for harness self-tests
    overrides: HashMap<(FinSeq, FinSeq), Label>,
}

fn norm_pair(s: &[Nat], t: &[Nat]) -> (FinSeq, FinSeq) {
    if s <= t {
        (s.to_vec(), t.to_vec())
    } else {
        (t.to_vec(), s.to_vec())
    }
}

impl<S: TreeSource> LazyEmbedding<S> {
    pub fn new(source: S, u: UniversalTree, horizon: usize) -> Self {
        let mut sigma = HashMap::new();
        sigma.insert(Vec::new(), Vec::new());
        LazyEmbedding {
            source,
            u,
            sigma,
            levels: vec![vec![Vec::new()]],
            horizon,
            overrides: HashMap::new(),
        }
    }

    pub fn universal(&self) -> &UniversalTree {
        &self.u
    }

    pub fn source_ref(&self) -> &S {
        &self.source
    }

    /// Replaces the source label of one pair, leaving σ as built — the
    /// verification harness must notice.
    pub fn inject_fault(&mut self, s: FinSeq, t: FinSeq, label: Label) {
        self.overrides.insert(norm_pair(&s, &t), label);
    }

    fn source_label(&self, s: &[Nat], t: &[Nat]) -> Label {
        if let Some(l) = self.overrides.get(&norm_pair(s, t)) {
            return l.clone();
        }
        self.source.label(s, t)
    }

    pub fn ensure_level(&mut self, n: usize) -> Result<(), EmbedError> {
        while self.levels.len() <= n {
            let prev = self.levels.last().unwrap().clone();
            let mut level: Vec<FinSeq> = Vec::new();
            for p in &prev {
                for r in self.source.children(p) {
                    let img_p = self.sigma[p].clone();
                    let mut f = Vec::new();
                    for s in &level {
                        // the fault overrides do not steer σ: they are a
                        // post-hoc corruption of the source
                        f.push((self.sigma[s].clone(), self.source.label(&r, s)));
                    }
                    let witness = self
                        .u
                        .find_witnesses(&RequestTriple { p: img_p, f }, 1, self.horizon)?
                        .pop()
                        .expect("requested one witness");
                    self.sigma.insert(r.clone(), witness);
                    level.push(r);
                }
            }
            self.levels.push(level);
        }
        Ok(())
    }

    /// σ of a source prefix, embedding levels as needed.
    pub fn image_prefix(&mut self, x: &[Nat]) -> Result<FinSeq, EmbedError> {
        if !self.source.contains(x) {
            return Err(EmbedError::DomainViolation(x.to_vec()));
        }
        self.ensure_level(x.len())?;
        self.sigma
            .get(x)
            .cloned()
            .ok_or_else(|| EmbedError::DomainViolation(x.to_vec()))
    }
}

/// The continuous map induced by an embedding: coordinate k of the image is
/// read off σ(x↾k+1). Panics if the point leaves the source tree.
pub fn induced_point_map<S: TreeSource + Send + 'static>(
    emb: Arc<Mutex<LazyEmbedding<S>>>,
    x: Point,
) -> Point {
    Point::from_fn(move |k| {
        let mut e = emb.lock().unwrap();
        let prefix = x.prefix(k + 1);
        let img = e
            .image_prefix(&prefix)
            .unwrap_or_else(|err| panic!("induced point map: {err}"));
        img[k]
    })
}

// ---------------------------------------------------------------------------
// Reduction verification

#[derive(Debug, Clone, Serialize)]
pub struct Disagreement {
    pub x: FinSeq,
    pub y: FinSeq,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub sampled: usize,
    /// pairs whose verdict did not settle within the fuel on either side
    pub undecided: usize,
    pub disagreements: Vec<Disagreement>,
}

impl ReductionReport {
    pub fn ok(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn describe(r: &Result<crate::clopen::PairDecision, DecideError>) -> String {
    match r {
        Ok(d) => format!("{:?}@{}", d.verdict, d.depth),
        Err(e) => format!("{e}"),
    }
}

/// Samples random branch pairs of the source, maps them through σ, and
/// compares the two graphs: the one the source labels define on its
/// branches, and the universal labeling on the images. Also checks that
/// images diverge exactly where the sources do.
pub fn verify_reduction<S: TreeSource>(
    emb: &mut LazyEmbedding<S>,
    samples: usize,
    depth: usize,
    rng: &mut impl Rng,
) -> Result<ReductionReport, EmbedError> {
    let mut report = ReductionReport { sampled: 0, undecided: 0, disagreements: Vec::new() };
    for _ in 0..samples {
        let x = random_branch(&emb.source, depth, rng);
        let y = random_branch(&emb.source, depth, rng);
        if x == y {
            continue;
        }
        let img_x = emb.image_prefix(&x)?;
        let img_y = emb.image_prefix(&y)?;
        report.sampled += 1;
        let split = x.iter().zip(&y).position(|(a, b)| a != b);
        let img_split = img_x.iter().zip(&img_y).position(|(a, b)| a != b);
        if split != img_split {
            report.disagreements.push(Disagreement {
                x,
                y,
                source: format!("diverges at {split:?}"),
                target: format!("images diverge at {img_split:?}"),
            });
            continue;
        }
        let src_graph = graph_from_labeling(|s: &[Nat], t: &[Nat]| -> Option<Label> {
            if s.len() != t.len() || s == t || !emb.source.contains(s) || !emb.source.contains(t)
            {
                return None;
            }
            Some(emb.source_label(s, t))
        });
        let tgt_graph = graph_from_labeling(|s: &[Nat], t: &[Nat]| -> Option<Label> {
            emb.u.label(s, t)
        });
        let xp = Point::periodic(x.clone(), vec![0]);
        let yp = Point::periodic(y.clone(), vec![0]);
        let ixp = Point::periodic(img_x, vec![0]);
        let iyp = Point::periodic(img_y, vec![0]);
        let src = decide_pair(&src_graph, &xp, &yp, depth);
        let tgt = decide_pair(&tgt_graph, &ixp, &iyp, depth);
        match (&src, &tgt) {
            (Ok(a), Ok(b)) if a.verdict == b.verdict => {}
            (Err(_), Err(_)) => report.undecided += 1,
            _ => report.disagreements.push(Disagreement {
                x,
                y,
                source: describe(&src),
                target: describe(&tgt),
            }),
        }
    }
    Ok(report)
}

/// A uniform random path of the given length through a finitely branching
/// source.
pub fn random_branch<S: TreeSource>(source: &S, depth: usize, rng: &mut impl Rng) -> FinSeq {
    let mut node: FinSeq = Vec::new();
    for _ in 0..depth {
        let kids = source.children(&node);
        if kids.is_empty() {
            break;
        }
        node = kids[rng.random_range(0..kids.len())].clone();
    }
    node
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::Ordinal;
    use crate::universal::Variant;
    use crate::verify::rng;

    fn w2() -> Ordinal {
        Ordinal::term(Ordinal::nat(2), 1)
    }

    fn fresh_universal() -> UniversalTree {
        UniversalTree::new(w2(), Variant::Plain).unwrap()
    }

    #[test]
    fn embed_single_node_tree() {
        let tree = AlphaTree::new(w2());
        let mut u = fresh_universal();
        let e = embed_tree(&tree, &mut u, 100).unwrap();
        assert_eq!(e.image(&[]), Some(&vec![]));
        assert_eq!(e.pairs().len(), 1);
    }

    #[test]
    fn embed_two_siblings_preserves_label() {
        let mut tree = AlphaTree::new(w2());
        tree.insert_node(vec![0]);
        tree.insert_node(vec![1]);
        tree.set_label(vec![0], vec![1], Label::Ord(Ordinal::nat(2)));
        let mut u = fresh_universal();
        let e = embed_tree(&tree, &mut u, 100).unwrap();
        let a = e.image(&[0]).unwrap();
        let b = e.image(&[1]).unwrap();
        assert_eq!(u.label(a, b), Some(Label::Ord(Ordinal::nat(2))));
    }

    #[test]
    fn embed_descending_chain_tree() {
        let mut tree = AlphaTree::new(w2());
        tree.insert_node(vec![0]);
        tree.insert_node(vec![1]);
        tree.insert_node(vec![0, 0]);
        tree.insert_node(vec![1, 0]);
        tree.set_label(vec![0], vec![1], Label::Ord(Ordinal::omega()));
        tree.set_label(vec![0, 0], vec![1, 0], Label::Ord(Ordinal::nat(4)));
        let mut u = fresh_universal();
        let e = embed_tree(&tree, &mut u, 100).unwrap();
        assert_eq!(
            u.label(e.image(&[0, 0]).unwrap(), e.image(&[1, 0]).unwrap()),
            Some(Label::Ord(Ordinal::nat(4)))
        );
    }

    #[test]
    fn embed_rejects_invalid_source() {
        let mut tree = AlphaTree::new(w2());
        tree.insert_node(vec![0]);
        tree.insert_node(vec![1]);
        tree.insert_node(vec![0, 0]);
        tree.insert_node(vec![1, 0]);
        tree.set_label(vec![0], vec![1], Label::Ord(Ordinal::nat(1)));
        // ascending: 3 is not below 1
        tree.set_label(vec![0, 0], vec![1, 0], Label::Ord(Ordinal::nat(3)));
        let mut u = fresh_universal();
        assert!(matches!(
            embed_tree(&tree, &mut u, 100),
            Err(EmbedError::InvalidSource(_))
        ));
    }

    #[test]
    fn completion_extends_leaves_with_chains() {
        let mut tree = AlphaTree::new(w2());
        tree.insert_node(vec![0]);
        tree.insert_node(vec![1]);
        tree.set_label(vec![0], vec![1], Label::In);
        let c = Completion::new(tree);
        assert_eq!(c.children(&[0]), vec![vec![0, 0]]);
        assert!(c.contains(&[0, 0, 0]));
        assert!(!c.contains(&[0, 1]));
        // settled labels propagate down the chains
        assert_eq!(c.label(&[0, 0], &[1, 0]), Label::In);
        assert_eq!(c.label(&[0, 0, 0], &[1, 0, 0]), Label::In);
    }

    #[test]
    fn lazy_embedding_reduction_clean() {
        let mut tree = AlphaTree::new(w2());
        tree.insert_node(vec![0]);
        tree.insert_node(vec![1]);
        tree.insert_node(vec![0, 0]);
        tree.insert_node(vec![1, 0]);
        tree.set_label(vec![0], vec![1], Label::Ord(Ordinal::nat(1)));
        tree.set_label(vec![0, 0], vec![1, 0], Label::Out);
        let mut emb = LazyEmbedding::new(Completion::new(tree), fresh_universal(), 1000);
        let mut r = rng(3);
        let report = verify_reduction(&mut emb, 100, 8, &mut r).unwrap();
        assert!(report.ok(), "{:?}", report.disagreements);
        assert!(report.sampled > 0);
    }

    #[test]
    fn lazy_embedding_detects_injected_fault() {
        let mut tree = AlphaTree::new(w2());
        tree.insert_node(vec![0]);
        tree.insert_node(vec![1]);
        tree.set_label(vec![0], vec![1], Label::In);
        let mut emb = LazyEmbedding::new(Completion::new(tree), fresh_universal(), 1000);
        emb.ensure_level(1).unwrap();
        emb.inject_fault(vec![0], vec![1], Label::Out);
        let mut r = rng(5);
        let report = verify_reduction(&mut emb, 50, 6, &mut r).unwrap();
        assert!(!report.ok(), "fault went unnoticed");
    }

    #[test]
    fn induced_points_follow_sigma() {
        let mut tree = AlphaTree::new(w2());
        tree.insert_node(vec![0]);
        tree.insert_node(vec![1]);
        tree.set_label(vec![0], vec![1], Label::Out);
        let mut emb = LazyEmbedding::new(Completion::new(tree), fresh_universal(), 1000);
        let expected = emb.image_prefix(&[1, 0, 0]).unwrap();
        let shared = Arc::new(Mutex::new(emb));
        let x = Point::periodic(vec![1], vec![0]);
        let fx = induced_point_map(shared.clone(), x);
        assert_eq!(fx.prefix(3), expected);
        // divergence level is preserved
        let y = Point::periodic(vec![0], vec![0]);
        let fy = induced_point_map(shared, y);
        assert_ne!(fx.coord(0), fy.coord(0));
    }

    #[test]
    fn image_prefix_rejects_off_tree_points() {
        let tree = AlphaTree::new(w2());
        let mut emb = LazyEmbedding::new(Completion::new(tree), fresh_universal(), 1000);
        assert!(matches!(
            emb.image_prefix(&[7]),
            Err(EmbedError::DomainViolation(_))
        ));
    }

    #[test]
    fn embedding_serializes_as_pair_list() {
        let mut tree = AlphaTree::new(w2());
        tree.insert_node(vec![0]);
        let mut u = fresh_universal();
        let e = embed_tree(&tree, &mut u, 100).unwrap();
        let v: serde_json::Value = serde_json::to_value(&e).unwrap();
        assert_eq!(v[0]["source_node"], serde_json::json!([]));
        assert!(v[1]["target_node"].is_array());
    }
}
