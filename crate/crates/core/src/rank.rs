//! Rank machinery: the tree of undecided prefix rectangles with its standard
//! rank (a computable upper bound on homogenization rank), clopen-partition
//! pullbacks, and the adversary game certifying lower bounds for the
//! ordinal-descent graphs.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clopen::{GraphOracle, PairVerdict, Point};
use crate::hierarchy::{
    encode_gamma, r_alpha_decide, r_alpha_rect, HierarchyError, Need, RectState, RectVerdict,
};
use crate::ordinal::{enumerate_below, Label, Ordinal};
use crate::seqspace::{comparable, decompose_open, AntichainResult, FinSeq, Nat, SetVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("rectangle sides must be distinct")]
    DegenerateRectangle,
    #[error("challenger claim {claim} does not sit below the pending ordinal {pending}")]
    InvalidClaim { claim: String, pending: String },
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("prover stuck: {0}")]
    Stuck(String),
    #[error("state is not an undecided descent rectangle: {0}")]
    NotPending(String),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}

// ---------------------------------------------------------------------------
// The tree of undecided rectangles

#[derive(Debug, Clone, Serialize)]
pub struct TStarNode {
    pub s: FinSeq,
    pub t: FinSeq,
    pub verdict: PairVerdict,
    /// child node indices; empty on terminal (decided) and truncated nodes
    pub children: Vec<usize>,
    /// undecided but cut off by the depth bound
    pub truncated: bool,
}

/// The tree of prefix rectangles that are still inhomogeneous, rooted at a
/// given pair, together with the decided terminal layer. Node 0 is the root.
#[derive(Debug, Clone, Serialize)]
pub struct TStar {
    pub nodes: Vec<TStarNode>,
    pub branch_bound: Nat,
    pub depth_bound: usize,
    /// clear when some undecided rectangle hit the depth bound
    pub complete: bool,
}

/// Extends the shorter side with zeros so both prefixes have equal length.
fn align(s: &[Nat], t: &[Nat]) -> (FinSeq, FinSeq) {
    let n = s.len().max(t.len());
    let mut s = s.to_vec();
    let mut t = t.to_vec();
    s.resize(n, 0);
    t.resize(n, 0);
    (s, t)
}

pub fn tstar_build(
    g: &dyn GraphOracle,
    s0: &[Nat],
    t0: &[Nat],
    branch_bound: Nat,
    depth_bound: usize,
) -> Result<TStar, RankError> {
    let (s0, t0) = align(s0, t0);
    if s0 == t0 {
        return Err(RankError::DegenerateRectangle);
    }
    let mut nodes = vec![TStarNode {
        s: s0,
        t: t0,
        verdict: PairVerdict::Undecided,
        children: Vec::new(),
        truncated: false,
    }];
    let mut complete = true;
    let mut cursor = 0;
    while cursor < nodes.len() {
        let (s, t) = (nodes[cursor].s.clone(), nodes[cursor].t.clone());
        let verdict = g.decide_rect(&s, &t);
        nodes[cursor].verdict = verdict;
        if verdict == PairVerdict::Undecided {
            if s.len() >= depth_bound {
                nodes[cursor].truncated = true;
                complete = false;
            } else {
                for i in 0..branch_bound {
                    for j in 0..branch_bound {
                        let mut s2 = s.clone();
                        s2.push(i);
                        let mut t2 = t.clone();
                        t2.push(j);
                        let idx = nodes.len();
                        nodes.push(TStarNode {
                            s: s2,
                            t: t2,
                            verdict: PairVerdict::Undecided,
                            children: Vec::new(),
                            truncated: false,
                        });
                        nodes[cursor].children.push(idx);
                    }
                }
            }
        }
        cursor += 1;
    }
    Ok(TStar { nodes, branch_bound, depth_bound, complete })
}

/// The standard rank of the truncation: decided nodes have rank 0, an
/// undecided node is the max of its children's ranks plus one. Truncated
/// undecided leaves count as 0, so on incomplete trees the value is a lower
/// bound of the truncation rank.
pub fn tree_rank(t: &TStar) -> Ordinal {
    fn rec(t: &TStar, i: usize) -> u64 {
        let node = &t.nodes[i];
        if node.children.is_empty() {
            return 0;
        }
        1 + node.children.iter().map(|&c| rec(t, c)).max().unwrap()
    }
    Ordinal::nat(rec(t, 0))
}

/// Truncation upper bound on the homogenization rank of the rectangle:
/// the standard rank of the bounded undecided-rectangle tree. The flag is
/// clear when the truncation was cut while still undecided.
pub fn rank_upper(
    g: &dyn GraphOracle,
    s: &[Nat],
    t: &[Nat],
    branch_bound: Nat,
    depth_bound: usize,
) -> Result<(Ordinal, bool), RankError> {
    let tree = tstar_build(g, s, t, branch_bound, depth_bound)?;
    Ok((tree_rank(&tree), tree.complete))
}

// ---------------------------------------------------------------------------
// Clopen-partition pullbacks

/// Pulls a cylinder partition back through a length-monotone prefix map:
/// piece i of the result is the antichain of minimal domain prefixes whose
/// image cylinder lands inside piece i.
pub fn pullback_partition<F: Fn(&[Nat]) -> FinSeq>(
    prefix_map: F,
    pieces: &[Vec<FinSeq>],
    branch_bound: Nat,
    depth_bound: usize,
) -> Vec<AntichainResult> {
    pieces
        .iter()
        .map(|piece| {
            let pred = |s: &[Nat]| -> SetVerdict {
                let img = prefix_map(s);
                if piece.iter().any(|c| img.len() >= c.len() && img[..c.len()] == **c) {
                    SetVerdict::Inside
                } else if piece.iter().any(|c| comparable(&img, c)) {
                    SetVerdict::Undecided
                } else {
                    SetVerdict::Outside
                }
            };
            decompose_open(&pred, branch_bound, depth_bound)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// The adversary game

/// A pending descent rectangle: the run on (s,t) has produced a strictly
/// descending chain ending at `pending`, and the next label cell t(m_n) has
/// not been written yet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub s: FinSeq,
    /// gamma-code side prefix
    pub t: FinSeq,
    /// index of the unwritten label cell; always >= |t|
    pub m_n: Nat,
    pub pending: Ordinal,
    pub round: usize,
}

/// Builds the canonical starting rectangle with pending ordinal `gamma`:
/// s = (0, 1) and t carrying the single label (1, gamma).
pub fn initial_game_state(alpha: &Ordinal, gamma: &Ordinal) -> Result<GameState, RankError> {
    let s = vec![0, 1];
    let t = vec![encode_gamma(alpha, 1, &Label::Ord(gamma.clone()))?];
    match r_alpha_rect(alpha, &s, &t)? {
        RectVerdict::Undecided(state) => game_state_from_rect(&state, s, t),
        other => Err(RankError::NotPending(format!("{other:?}"))),
    }
}

/// Converts an undecided finite-prefix run into a game state.
pub fn game_state_from_rect(
    state: &RectState,
    s: FinSeq,
    t: FinSeq,
) -> Result<GameState, RankError> {
    let Need::YCoord(m_n) = state.need else {
        return Err(RankError::NotPending(
            "the run stalled on the x side, not on an unwritten label".into(),
        ));
    };
    let Some(pending) = state.pending.clone() else {
        return Err(RankError::NotPending("no ordinal has been read yet".into()));
    };
    Ok(GameState { s, t, m_n, pending, round: 0 })
}

/// A clopen partition of one side, as the challenger presents it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Partition {
    /// all cylinders of the given depth
    Level(usize),
    /// explicit pieces, each a union of the listed cylinders
    Pieces(Vec<Vec<FinSeq>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChallengerMove {
    /// claimed rank bound; 0 asserts the rectangle is homogeneous
    pub claim: Ordinal,
    pub c_partition: Partition,
    pub d_partition: Partition,
}

pub trait Challenger {
    fn make_move(&mut self, state: &GameState) -> ChallengerMove;
    fn name(&self) -> &'static str;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProverMove {
    #[serde(rename = "s'")]
    pub s_prime: FinSeq,
    #[serde(rename = "t'")]
    pub t_prime: FinSeq,
    #[serde(rename = "s''")]
    pub s_dprime: FinSeq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub claim: Ordinal,
    pub c_partition: Partition,
    pub d_partition: Partition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prover_move: Option<ProverMove>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub new_state: Option<GameState>,
}

/// Witness that the current rectangle is inhomogeneous: one completion of
/// the label stream makes the pair an edge, another a non-edge. Both are
/// re-checked against the full descent procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub s: FinSeq,
    pub t_in: FinSeq,
    pub t_out: FinSeq,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// the challenger's zero claim was refuted
    Refuted(Certificate),
    /// max_rounds elapsed with the prover still alive
    MaxRounds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub initial: GameState,
    pub rounds: Vec<Round>,
    pub outcome: Outcome,
}

fn filler(alpha: &Ordinal) -> Nat {
    encode_gamma(alpha, 0, &Label::Out).expect("Out always encodes")
}

/// Rejects piece lists with comparable cylinders (overlap) across or within
/// pieces.
fn check_pieces(pieces: &[Vec<FinSeq>]) -> Result<(), RankError> {
    let all: Vec<&FinSeq> = pieces.iter().flatten().collect();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            if comparable(a, b) {
                return Err(RankError::MalformedPartition(format!(
                    "cylinders {a:?} and {b:?} overlap"
                )));
            }
        }
    }
    Ok(())
}

/// Picks the prover's x-side extension: any cylinder of the partition that
/// is compatible with the current prefix.
fn extend_in_partition_x(s: &[Nat], part: &Partition) -> Result<FinSeq, RankError> {
    match part {
        Partition::Level(d) => {
            let mut s2 = s.to_vec();
            if s2.len() < *d {
                s2.resize(*d, 0);
            }
            Ok(s2)
        }
        Partition::Pieces(pieces) => {
            check_pieces(pieces)?;
            for piece in pieces {
                for c in piece {
                    if comparable(s, c) {
                        return Ok(if c.len() > s.len() { c.clone() } else { s.to_vec() });
                    }
                }
            }
            Err(RankError::MalformedPartition(format!(
                "no piece covers the cylinder of {s:?}"
            )))
        }
    }
}

/// Builds the prover's label-side extension: it must agree with `t`, write
/// `code` at position `m_n`, and land inside one piece of the partition.
/// Free positions take the filler label.
fn extend_in_partition_y(
    t: &[Nat],
    m_n: Nat,
    code: Nat,
    fill: Nat,
    part: &Partition,
) -> Result<FinSeq, RankError> {
    let m = m_n as usize;
    let target = |i: usize| -> Nat {
        if i < t.len() {
            t[i]
        } else if i == m {
            code
        } else {
            fill
        }
    };
    let build = |len: usize| -> FinSeq { (0..len.max(m + 1)).map(target).collect() };
    match part {
        Partition::Level(d) => Ok(build(*d)),
        Partition::Pieces(pieces) => {
            check_pieces(pieces)?;
            for piece in pieces {
                for c in piece {
                    if c.iter().enumerate().all(|(i, &v)| v == target(i)) {
                        return Ok(build(c.len()));
                    }
                }
            }
            Err(RankError::MalformedPartition(format!(
                "no piece covers the intended label extension of {t:?}"
            )))
        }
    }
}

fn refutation_certificate(alpha: &Ordinal, state: &GameState) -> Result<Certificate, RankError> {
    let fill = filler(alpha);
    let m = state.m_n as usize;
    let mut base = state.t.clone();
    base.resize(m + 1, fill);
    let mut t_in = base.clone();
    t_in[m] = encode_gamma(alpha, 0, &Label::In)?;
    let mut t_out = base;
    t_out[m] = encode_gamma(alpha, 0, &Label::Out)?;
    let x = Point::periodic(state.s.clone(), vec![0]);
    let verdict_in = r_alpha_decide(alpha, &x, &Point::periodic(t_in.clone(), vec![fill]))?;
    let verdict_out = r_alpha_decide(alpha, &x, &Point::periodic(t_out.clone(), vec![fill]))?;
    Ok(Certificate {
        s: state.s.clone(),
        t_in,
        t_out,
        verified: verdict_in.verdict == crate::clopen::EdgeVerdict::In
            && verdict_out.verdict == crate::clopen::EdgeVerdict::Out,
    })
}

/// Plays the lower-bound game: each round the challenger claims a smaller
/// rank bound with clopen partitions of both sides, and the prover extends
/// the rectangle inside single pieces, writing the claimed ordinal into the
/// next label cell, so the rectangle stays inhomogeneous with pending value
/// equal to the claim. A zero claim is answered with an explicit In/Out
/// completion pair.
pub fn rank_game_play(
    alpha: &Ordinal,
    initial: GameState,
    challenger: &mut dyn Challenger,
    max_rounds: usize,
) -> Result<Transcript, RankError> {
    let fill = filler(alpha);
    let mut state = initial.clone();
    let mut rounds = Vec::new();
    for _ in 0..max_rounds {
        let mv = challenger.make_move(&state);
        if !(mv.claim < state.pending) {
            // a zero claim against an exhausted descent asserts the
            // rectangle is homogeneous; the prover shows it is not
            if mv.claim.is_zero() && state.pending.is_zero() {
                let cert = refutation_certificate(alpha, &state)?;
                if !cert.verified {
                    return Err(RankError::Stuck(
                        "refutation certificate failed re-verification".into(),
                    ));
                }
                rounds.push(Round {
                    claim: mv.claim,
                    c_partition: mv.c_partition,
                    d_partition: mv.d_partition,
                    prover_move: None,
                    new_state: None,
                });
                return Ok(Transcript { initial, rounds, outcome: Outcome::Refuted(cert) });
            }
            return Err(RankError::InvalidClaim {
                claim: mv.claim.to_string(),
                pending: state.pending.to_string(),
            });
        }
        // x side: settle into one piece
        let s_prime = extend_in_partition_x(&state.s, &mv.c_partition)?;
        // label side: write (|s'|, claim) at the pending cell, inside a piece
        let code = encode_gamma(alpha, s_prime.len() as Nat, &Label::Ord(mv.claim.clone()))?;
        let t_prime = extend_in_partition_y(&state.t, state.m_n, code, fill, &mv.d_partition)?;
        // point the next read past the new label prefix
        let mut s_dprime = s_prime.clone();
        s_dprime.push(t_prime.len() as Nat);
        // the extended rectangle must again be a pending descent rectangle
        let next = match r_alpha_rect(alpha, &s_dprime, &t_prime)? {
            RectVerdict::Undecided(rect) => {
                let mut gs = game_state_from_rect(&rect, s_dprime.clone(), t_prime.clone())?;
                gs.round = state.round + 1;
                gs
            }
            other => {
                return Err(RankError::Stuck(format!(
                    "extension unexpectedly decided the rectangle: {other:?}"
                )))
            }
        };
        if next.pending != mv.claim || next.m_n != t_prime.len() as Nat {
            return Err(RankError::Stuck(format!(
                "descent did not land on the claim: pending {}, cell {}",
                next.pending, next.m_n
            )));
        }
        rounds.push(Round {
            claim: mv.claim,
            c_partition: mv.c_partition,
            d_partition: mv.d_partition,
            prover_move: Some(ProverMove {
                s_prime,
                t_prime: t_prime.clone(),
                s_dprime: s_dprime.clone(),
            }),
            new_state: Some(next.clone()),
        });
        state = next;
    }
    Ok(Transcript { initial, rounds, outcome: Outcome::MaxRounds })
}

// ---------------------------------------------------------------------------
// Shipped challengers

/// Seeded random level partitions and claims drawn from the enumeration of
/// notations below the pending value.
pub struct RandomChallenger<R: Rng> {
    pub rng: R,
}

impl<R: Rng> Challenger for RandomChallenger<R> {
    fn make_move(&mut self, state: &GameState) -> ChallengerMove {
        let claim = if state.pending.is_zero() {
            Ordinal::zero()
        } else {
            // finite pending has only that many notations below it
            let span = state.pending.as_nat().unwrap_or(16).min(16);
            let k = self.rng.random_range(0..span);
            enumerate_below(&state.pending, k).expect("nonzero pending")
        };
        ChallengerMove {
            claim,
            c_partition: Partition::Level(self.rng.random_range(1..4)),
            d_partition: Partition::Level(self.rng.random_range(1..4)),
        }
    }

    fn name(&self) -> &'static str {
        "random"
    }
}

/// Descends as fast as it can: claims pending−1 when the pending value is a
/// successor, otherwise the largest notation among the first 31 enumerated
/// below it; partitions are the finest levels touched so far.
pub struct GreedyChallenger;

impl Challenger for GreedyChallenger {
    fn make_move(&mut self, state: &GameState) -> ChallengerMove {
        let claim = if state.pending.is_zero() {
            Ordinal::zero()
        } else {
            let (head, n) = state.pending.split_finite();
            if n > 0 {
                head.plus_nat(n - 1)
            } else {
                (0..=30u64)
                    .map(|k| enumerate_below(&state.pending, k).expect("nonzero pending"))
                    .max()
                    .unwrap()
            }
        };
        ChallengerMove {
            claim,
            c_partition: Partition::Level(state.s.len() + 1),
            d_partition: Partition::Level(state.t.len() + 1),
        }
    }

    fn name(&self) -> &'static str {
        "greedy"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::e_alpha;
    use crate::verify::rng;

    /// Oracle decided exactly when the prefixes have length >= `depth`.
    struct DecideAt {
        depth: usize,
    }
    impl GraphOracle for DecideAt {
        fn decide_rect(&self, s: &[Nat], _t: &[Nat]) -> PairVerdict {
            if s.len() >= self.depth {
                PairVerdict::In
            } else {
                PairVerdict::Undecided
            }
        }
    }

    #[test]
    fn tstar_decided_root_is_single_terminal() {
        let t = tstar_build(&DecideAt { depth: 0 }, &[0], &[1], 2, 4).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert!(t.complete);
        assert_eq!(tree_rank(&t), Ordinal::zero());
    }

    #[test]
    fn tstar_one_level_has_four_terminal_children() {
        let t = tstar_build(&DecideAt { depth: 2 }, &[0], &[1], 2, 4).unwrap();
        assert_eq!(t.nodes.len(), 5);
        assert!(t.complete);
        assert_eq!(tree_rank(&t), Ordinal::nat(1));
    }

    #[test]
    fn tstar_rank_three_levels() {
        let t = tstar_build(&DecideAt { depth: 3 }, &[0], &[1], 2, 6).unwrap();
        assert_eq!(tree_rank(&t), Ordinal::nat(2));
        assert!(t.complete);
    }

    #[test]
    fn tstar_truncation_is_lower_bound() {
        let t = tstar_build(&DecideAt { depth: 10 }, &[0], &[1], 2, 3).unwrap();
        assert!(!t.complete);
        let (r3, _) = rank_upper(&DecideAt { depth: 10 }, &[0], &[1], 2, 3).unwrap();
        let (r5, _) = rank_upper(&DecideAt { depth: 10 }, &[0], &[1], 2, 5).unwrap();
        assert!(r3 < r5);
    }

    #[test]
    fn rank_upper_monotone_in_branch_bound() {
        let g = e_alpha(&Ordinal::omega()).unwrap();
        let (r2, _) = rank_upper(&g, &[0, 0], &[1, 0], 2, 3).unwrap();
        let (r4, _) = rank_upper(&g, &[0, 0], &[1, 0], 4, 3).unwrap();
        assert!(r2 <= r4);
    }

    #[test]
    fn pullback_of_identity_is_identity() {
        let pieces = vec![vec![vec![0]], vec![vec![1]]];
        let out = pullback_partition(|s: &[Nat]| s.to_vec(), &pieces, 2, 3);
        assert_eq!(out[0].elements, vec![vec![0]]);
        assert_eq!(out[1].elements, vec![vec![1]]);
    }

    #[test]
    fn pullback_through_parity_collapse() {
        // map first coordinate to its parity
        let f = |s: &[Nat]| -> FinSeq {
            s.iter().map(|&v| v % 2).collect()
        };
        let pieces = vec![vec![vec![0]], vec![vec![1]]];
        let out = pullback_partition(f, &pieces, 4, 2);
        assert_eq!(out[0].elements, vec![vec![0], vec![2]]);
        assert_eq!(out[1].elements, vec![vec![1], vec![3]]);
    }

    #[test]
    fn game_zero_claim_refuted_immediately() {
        let a = Ordinal::omega();
        let initial = initial_game_state(&a, &Ordinal::zero());
        // pending 0 is fine as a state; the challenger must claim 0
        let initial = initial.unwrap();
        let mut ch = GreedyChallenger;
        let tr = rank_game_play(&a, initial, &mut ch, 10).unwrap();
        match tr.outcome {
            Outcome::Refuted(cert) => assert!(cert.verified),
            other => panic!("expected refutation, got {other:?}"),
        }
        assert_eq!(tr.rounds.len(), 1);
    }

    #[test]
    fn game_survives_finite_descent() {
        let a = Ordinal::omega();
        let initial = initial_game_state(&a, &Ordinal::nat(5)).unwrap();
        let mut ch = GreedyChallenger;
        let tr = rank_game_play(&a, initial, &mut ch, 100).unwrap();
        // greedy claims 4,3,2,1,0 (five survived rounds), then the exhausted
        // zero claim is refuted
        assert_eq!(tr.rounds.len(), 6);
        assert_eq!(tr.rounds.iter().filter(|r| r.prover_move.is_some()).count(), 5);
        assert!(matches!(tr.outcome, Outcome::Refuted(c) if c.verified));
        // pending ordinals strictly descend
        let pendings: Vec<_> = tr
            .rounds
            .iter()
            .filter_map(|r| r.new_state.as_ref().map(|s| s.pending.clone()))
            .collect();
        for w in pendings.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn game_limit_pending_reduces_to_finite() {
        let a = Ordinal::term(Ordinal::nat(2), 1); // w^2
        let initial = initial_game_state(&a, &Ordinal::omega()).unwrap();
        let mut ch = GreedyChallenger;
        let tr = rank_game_play(&a, initial, &mut ch, 100).unwrap();
        assert!(matches!(tr.outcome, Outcome::Refuted(c) if c.verified));
        // first claim is finite (the enumeration of notations below w is ω
        // itself), then pure finite descent
        let first = &tr.rounds[0].claim;
        assert!(first.as_nat().is_some());
        assert!(first.as_nat().unwrap() <= 30);
    }

    #[test]
    fn game_random_challenger_terminates() {
        let a = Ordinal::term(Ordinal::nat(2), 1);
        for seed in 0..5 {
            let initial = initial_game_state(&a, &Ordinal::omega()).unwrap();
            let mut ch = RandomChallenger { rng: rng(seed) };
            let tr = rank_game_play(&a, initial, &mut ch, 10_000).unwrap();
            assert!(matches!(tr.outcome, Outcome::Refuted(c) if c.verified), "seed {seed}");
        }
    }

    #[test]
    fn game_rejects_overlapping_pieces() {
        struct Bad;
        impl Challenger for Bad {
            fn make_move(&mut self, _state: &GameState) -> ChallengerMove {
                ChallengerMove {
                    claim: Ordinal::nat(1),
                    c_partition: Partition::Pieces(vec![vec![vec![0]], vec![vec![0, 1]]]),
                    d_partition: Partition::Level(1),
                }
            }
            fn name(&self) -> &'static str {
                "bad"
            }
        }
        let a = Ordinal::omega();
        let initial = initial_game_state(&a, &Ordinal::nat(3)).unwrap();
        assert!(matches!(
            rank_game_play(&a, initial, &mut Bad, 10),
            Err(RankError::MalformedPartition(_))
        ));
    }

    #[test]
    fn game_rejects_non_descending_claim() {
        struct Up;
        impl Challenger for Up {
            fn make_move(&mut self, state: &GameState) -> ChallengerMove {
                ChallengerMove {
                    claim: state.pending.plus_nat(1),
                    c_partition: Partition::Level(1),
                    d_partition: Partition::Level(1),
                }
            }
            fn name(&self) -> &'static str {
                "up"
            }
        }
        let a = Ordinal::omega();
        let initial = initial_game_state(&a, &Ordinal::nat(3)).unwrap();
        assert!(matches!(
            rank_game_play(&a, initial, &mut Up, 10),
            Err(RankError::InvalidClaim { .. })
        ));
    }

    #[test]
    fn transcript_serializes_prover_keys() {
        let a = Ordinal::omega();
        let initial = initial_game_state(&a, &Ordinal::nat(1)).unwrap();
        let tr = rank_game_play(&a, initial, &mut GreedyChallenger, 10).unwrap();
        let v: serde_json::Value = serde_json::to_value(&tr).unwrap();
        let mv = &v["rounds"][0]["prover_move"];
        assert!(mv.get("s'").is_some());
        assert!(mv.get("t'").is_some());
        assert!(mv.get("s''").is_some());
    }
}
