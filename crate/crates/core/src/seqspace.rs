//! Finite sequences of naturals, the prefix tree order, and bounded
//! decompositions of clopen sets into antichains of cylinders.
//!
//! Clopen sets are always intensional here: a predicate answers on prefixes
//! and promises coherence (a decided verdict persists on extensions).
//! Exploration is bounded and reports whether anything was left undecided.

use thiserror::Error;

/// A coordinate of a point in Baire space.
pub type Nat = u64;

/// An element of the space of finite sequences over the naturals.
pub type FinSeq = Vec<Nat>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("the empty sequence has no parent")]
    NoParent,
    #[error("sequences are comparable: {0:?} and {1:?}")]
    Comparable(FinSeq, FinSeq),
}

/// Verdict of a clopen-set predicate on a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetVerdict {
    Inside,
    Outside,
    Undecided,
}

/// Verdict of a two-sided separation predicate on a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SepVerdict {
    A,
    B,
    Mixed,
}

/// A clopen subset of Baire space, presented as a coherent decision
/// function on prefixes.
pub trait PrefixPredicate {
    fn decide(&self, s: &[Nat]) -> SetVerdict;
}

impl<F: Fn(&[Nat]) -> SetVerdict> PrefixPredicate for F {
    fn decide(&self, s: &[Nat]) -> SetVerdict {
        self(s)
    }
}

/// Drops the last entry.
pub fn parent(s: &[Nat]) -> Result<FinSeq, SeqError> {
    if s.is_empty() {
        return Err(SeqError::NoParent);
    }
    Ok(s[..s.len() - 1].to_vec())
}

/// True if one sequence is a prefix of the other.
pub fn comparable(s: &[Nat], t: &[Nat]) -> bool {
    let n = s.len().min(t.len());
    s[..n] == t[..n]
}

/// The least `n` with `s|n != t|n`, for incomparable `s`, `t`.
pub fn split_level(s: &[Nat], t: &[Nat]) -> Result<usize, SeqError> {
    if comparable(s, t) {
        return Err(SeqError::Comparable(s.to_vec(), t.to_vec()));
    }
    let d = s.iter().zip(t.iter()).position(|(a, b)| a != b).expect("incomparable");
    Ok(d + 1)
}

/// A pairwise-incomparable family of prefixes, in the canonical order
/// (length first, then entries), plus a completeness flag. The flag is
/// clear when undecided prefixes were cut off by the exploration bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntichainResult {
    pub elements: Vec<FinSeq>,
    pub complete: bool,
}

fn canonical_sort(elements: &mut Vec<FinSeq>) {
    elements.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

/// Writes the bounded part of an open set as a disjoint union of cylinders:
/// the minimal Inside prefixes with entries below `branch_bound` and length
/// at most `depth_bound`.
pub fn decompose_open(
    p: &dyn PrefixPredicate,
    branch_bound: Nat,
    depth_bound: usize,
) -> AntichainResult {
    let mut elements = Vec::new();
    let mut complete = true;
    let mut stack: Vec<FinSeq> = vec![Vec::new()];
    while let Some(s) = stack.pop() {
        match p.decide(&s) {
            SetVerdict::Inside => elements.push(s),
            SetVerdict::Outside => {}
            SetVerdict::Undecided => {
                // Branches at or beyond the bounds stay unexplored.
                complete = false;
                if s.len() < depth_bound {
                    for i in 0..branch_bound {
                        let mut child = s.clone();
                        child.push(i);
                        stack.push(child);
                    }
                }
            }
        }
    }
    canonical_sort(&mut elements);
    AntichainResult { elements, complete }
}

/// The minimal prefixes on which a separation predicate gives a pure
/// verdict, restricted to the bounded universe.
pub fn sigma_antichain<F: Fn(&[Nat]) -> SepVerdict>(
    sep: F,
    branch_bound: Nat,
    depth_bound: usize,
) -> AntichainResult {
    let mut elements = Vec::new();
    let mut complete = true;
    let mut stack: Vec<FinSeq> = vec![Vec::new()];
    while let Some(s) = stack.pop() {
        match sep(&s) {
            SepVerdict::A | SepVerdict::B => elements.push(s),
            SepVerdict::Mixed => {
                complete = false;
                if s.len() < depth_bound {
                    for i in 0..branch_bound {
                        let mut child = s.clone();
                        child.push(i);
                        stack.push(child);
                    }
                }
            }
        }
    }
    canonical_sort(&mut elements);
    AntichainResult { elements, complete }
}

/// All sequences with entries below `branch_bound` and length exactly `len`.
pub fn all_seqs_of_len(branch_bound: Nat, len: usize) -> Vec<FinSeq> {
    let mut out: Vec<FinSeq> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * branch_bound as usize);
        for s in &out {
            for i in 0..branch_bound {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out = next;
    }
    out
}
