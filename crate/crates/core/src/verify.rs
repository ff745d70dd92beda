//! Parameterized verification suites shared by the CLI and the test
//! harness, plus the project-wide seeded RNG and random generators for
//! points and labeled trees.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clopen::{
    graph_from_labeling, CanonicalLabeling, GraphOracle, PairVerdict, Point,
};
use crate::embed::{
    embed_tree, verify_reduction, Completion, LazyEmbedding, TreeSource,
};
use crate::hierarchy::{
    e_alpha, encode_gamma, r_alpha_decide, region_of, witness_neighbor, DescentTrace, Region,
};
use crate::ordinal::{enumerate_below, Label, Ordinal};
use crate::rank::{
    initial_game_state, rank_game_play, rank_upper, tree_rank, Challenger, GreedyChallenger,
    Outcome, RandomChallenger, TStar, TStarNode, Transcript,
};
use crate::seqspace::{FinSeq, Nat};
use crate::universal::{AlphaTree, RequestTriple, UniversalTree, Variant};

/// All randomness in suites and samplers flows from this, so runs are
/// reproducible from a single seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One checked property: a stable name, a verdict, and a short summary of
/// what was measured.
#[derive(Debug, Clone)]
pub struct PropertyOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl PropertyOutcome {
    fn pass(name: &str, detail: String) -> Self {
        PropertyOutcome { name: name.into(), pass: true, detail }
    }

    fn fail(name: &str, detail: String) -> Self {
        PropertyOutcome { name: name.into(), pass: false, detail }
    }
}

impl fmt::Display for PropertyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} — {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

// ---------------------------------------------------------------------------
// Random inputs

/// An eventually periodic point with small random head and period.
pub fn random_plain_point(rng: &mut impl Rng) -> Point {
    let head: Vec<Nat> = (0..rng.random_range(1..6)).map(|_| rng.random_range(0..8)).collect();
    let period: Vec<Nat> = (0..rng.random_range(1..5)).map(|_| rng.random_range(0..8)).collect();
    Point::periodic(head, period)
}

/// An eventually periodic stream of (pointer, label) codes with labels drawn
/// from Q and the enumeration below alpha, biased toward ordinals so
/// descents actually happen.
pub fn random_gamma_point(alpha: &Ordinal, rng: &mut impl Rng) -> Point {
    let code = |rng: &mut dyn rand::RngCore| -> Nat {
        let n = rng.random_range(0..8u64);
        let label = match rng.random_range(0..10u32) {
            0 => Label::In,
            1 => Label::Out,
            _ => Label::Ord(enumerate_below(alpha, rng.random_range(0..30)).unwrap()),
        };
        encode_gamma(alpha, n, &label).unwrap()
    };
    let head: Vec<Nat> = (0..rng.random_range(1..6)).map(|_| code(rng)).collect();
    let period: Vec<Nat> = (0..rng.random_range(1..5)).map(|_| code(rng)).collect();
    Point::periodic(head, period)
}

/// A random valid labeled tree: labels strictly below `alpha`, descending in
/// the ⊲ order along non-sibling pairs.
pub fn random_alpha_tree(
    alpha: &Ordinal,
    max_nodes: usize,
    max_depth: usize,
    rng: &mut impl Rng,
) -> AlphaTree {
    let mut tree = AlphaTree::new(alpha.clone());
    let target = rng.random_range(3.min(max_nodes)..=max_nodes);
    if max_depth >= 1 && max_nodes >= 3 {
        // guarantee at least two branches
        tree.insert_node(vec![0]);
        tree.insert_node(vec![1]);
    }
    while tree.nodes().len() < target {
        let parents: Vec<FinSeq> = tree
            .nodes()
            .iter()
            .filter(|n| n.len() < max_depth)
            .cloned()
            .collect();
        if parents.is_empty() {
            break;
        }
        let p = parents[rng.random_range(0..parents.len())].clone();
        let idx = tree.children_of(&p).len() as Nat;
        let mut child = p;
        child.push(idx);
        tree.insert_node(child);
    }
    // labels, level by level so parents are already labeled
    let mut nodes = tree.nodes().to_vec();
    nodes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let random_below = |bound: &Ordinal, rng: &mut dyn rand::RngCore| -> Label {
        match rng.random_range(0..4u32) {
            0 => Label::In,
            1 => Label::Out,
            _ => {
                if bound.is_zero() {
                    if rng.random_bool(0.5) { Label::In } else { Label::Out }
                } else {
                    let span = bound.as_nat().unwrap_or(40).min(40);
                    Label::Ord(enumerate_below(bound, rng.random_range(0..span)).unwrap())
                }
            }
        }
    };
    for (i, s) in nodes.iter().enumerate() {
        for t in &nodes[i + 1..] {
            if t.len() != s.len() || s.is_empty() {
                continue;
            }
            let (ps, pt) = (&s[..s.len() - 1], &t[..t.len() - 1]);
            let label = if ps == pt {
                random_below(alpha, rng)
            } else {
                match tree.label(ps, pt).expect("parents labeled first") {
                    Label::In => Label::In,
                    Label::Out => Label::Out,
                    Label::Ord(b) => random_below(&b, rng),
                }
            };
            tree.set_label(s.clone(), t.clone(), label);
        }
    }
    tree
}

// ---------------------------------------------------------------------------
// Descent procedure properties

/// Structural soundness of a finished trace: strict ordinal descent before
/// the stopping index, a correct stopping condition, and the verdict rule.
pub fn check_trace(trace: &DescentTrace) -> Result<(), String> {
    if trace.i0 + 1 != trace.steps.len() {
        return Err(format!("i0 {} is not the last step index", trace.i0));
    }
    let mut prev: Option<&Ordinal> = None;
    for (i, step) in trace.steps.iter().enumerate() {
        match (&step.label, i == trace.i0) {
            (Label::Ord(b), false) => {
                if let Some(p) = prev {
                    if !(b < p) {
                        return Err(format!("no strict descent at step {i}: {b} vs {p}"));
                    }
                }
                prev = Some(b);
            }
            (Label::Ord(b), true) => {
                let ok = i > 0 && prev.is_some_and(|p| !(b < p));
                if !ok {
                    return Err(format!("stopped at step {i} without a stopping reason"));
                }
            }
            (_, false) => return Err(format!("Q label before the stopping index at {i}")),
            (_, true) => {}
        }
    }
    let expected_in = matches!(trace.steps[trace.i0].label, Label::In);
    let got_in = trace.verdict == crate::clopen::EdgeVerdict::In;
    if expected_in != got_in {
        return Err("verdict does not match the stopping label".into());
    }
    Ok(())
}

/// Runs the descent on random point pairs; passes when every run halts with
/// a structurally sound trace.
pub fn descent_soundness(
    alpha: &Ordinal,
    samples: usize,
    rng: &mut impl Rng,
) -> PropertyOutcome {
    let name = "descent-soundness";
    for i in 0..samples {
        let x = random_plain_point(rng);
        let y = random_gamma_point(alpha, rng);
        let trace = match r_alpha_decide(alpha, &x, &y) {
            Ok(t) => t,
            Err(e) => return PropertyOutcome::fail(name, format!("sample {i}: {e}")),
        };
        if let Err(e) = check_trace(&trace) {
            return PropertyOutcome::fail(name, format!("sample {i}: {e}"));
        }
    }
    PropertyOutcome::pass(name, format!("{samples} traces halted soundly (alpha {alpha})"))
}

/// The coordinates a finished trace actually read, as prefix lengths.
fn read_depths(trace: &DescentTrace) -> (usize, usize) {
    let mut x_depth = 1; // x(0) is always read
    let mut y_depth = 0;
    for (i, step) in trace.steps.iter().enumerate() {
        y_depth = y_depth.max(step.m as usize + 1);
        if i < trace.i0 {
            x_depth = x_depth.max(step.n as usize + 1);
        }
    }
    (x_depth, y_depth)
}

/// Every pair of points sharing the read prefixes of a decided trace gets
/// the same verdict.
pub fn prefix_determinacy(
    alpha: &Ordinal,
    traces: usize,
    extensions: usize,
    rng: &mut impl Rng,
) -> PropertyOutcome {
    let name = "prefix-determinacy";
    for i in 0..traces {
        let x = random_plain_point(rng);
        let y = random_gamma_point(alpha, rng);
        let trace = match r_alpha_decide(alpha, &x, &y) {
            Ok(t) => t,
            Err(e) => return PropertyOutcome::fail(name, format!("sample {i}: {e}")),
        };
        let (xd, yd) = read_depths(&trace);
        let xp = x.prefix(xd);
        let yp = y.prefix(yd);
        for e in 0..extensions {
            let xt = random_plain_point(rng);
            let yt = random_gamma_point(alpha, rng);
            let (xp2, yp2) = (xp.clone(), yp.clone());
            let x2 = Point::from_fn(move |k| {
                if k < xp2.len() { xp2[k] } else { xt.coord(k) }
            });
            let y2 = Point::from_fn(move |k| {
                if k < yp2.len() { yp2[k] } else { yt.coord(k) }
            });
            match r_alpha_decide(alpha, &x2, &y2) {
                Ok(t2) if t2.verdict == trace.verdict => {}
                Ok(t2) => {
                    return PropertyOutcome::fail(
                        name,
                        format!(
                            "sample {i} extension {e}: verdict flipped {:?} -> {:?}",
                            trace.verdict, t2.verdict
                        ),
                    )
                }
                Err(err) => return PropertyOutcome::fail(name, format!("{err}")),
            }
        }
    }
    PropertyOutcome::pass(
        name,
        format!("{traces} traces x {extensions} extensions agreed (alpha {alpha})"),
    )
}

/// Same-side prefix pairs never connect, and every sampled point gets a
/// verified cross-side neighbor.
pub fn bipartite_structure(
    alpha: &Ordinal,
    pair_samples: usize,
    point_samples: usize,
    rng: &mut impl Rng,
) -> PropertyOutcome {
    let name = "bipartite-structure";
    let g = match e_alpha(alpha) {
        Ok(g) => g,
        Err(e) => return PropertyOutcome::fail(name, e.to_string()),
    };
    let side_a = |r: Region| matches!(r, Region::C | Region::C1);
    for i in 0..pair_samples {
        let len = rng.random_range(1..6usize);
        let mut s: FinSeq = (0..len).map(|_| rng.random_range(0..6)).collect();
        let mut t: FinSeq = (0..len).map(|_| rng.random_range(0..6)).collect();
        // force both prefixes onto the same side
        let a = rng.random_bool(0.5);
        s[0] = if a { [0, 2][rng.random_range(0..2usize)] } else { [1, 3][rng.random_range(0..2usize)] };
        t[0] = if a { [0, 2][rng.random_range(0..2usize)] } else { [1, 3][rng.random_range(0..2usize)] };
        if s == t {
            continue;
        }
        debug_assert_eq!(side_a(region_of(s[0])), side_a(region_of(t[0])));
        if g.decide_rect(&s, &t) == PairVerdict::In {
            return PropertyOutcome::fail(name, format!("sample {i}: same-side pair connected"));
        }
    }
    for i in 0..point_samples {
        let x = random_plain_point(rng);
        if let Err(e) = witness_neighbor(alpha, &x, 64) {
            return PropertyOutcome::fail(name, format!("point {i}: no neighbor: {e}"));
        }
    }
    PropertyOutcome::pass(
        name,
        format!("{pair_samples} same-side pairs disconnected, {point_samples} neighbors verified"),
    )
}

// ---------------------------------------------------------------------------
// Game properties

/// Transcript invariants: pending values strictly descend, the game ends in
/// a verified refutation.
pub fn check_transcript(tr: &Transcript) -> Result<(), String> {
    let mut pending = tr.initial.pending.clone();
    for (i, round) in tr.rounds.iter().enumerate() {
        if let Some(st) = &round.new_state {
            if !(st.pending < pending) {
                return Err(format!("round {i}: pending did not descend"));
            }
            pending = st.pending.clone();
        }
    }
    match &tr.outcome {
        Outcome::Refuted(cert) if cert.verified => Ok(()),
        Outcome::Refuted(_) => Err("refutation certificate failed".into()),
        Outcome::MaxRounds => Err("game hit the round limit without refuting".into()),
    }
}

/// Greedy and seeded-random challengers against every starting value up to
/// `max_gamma`; the prover must survive to a verified refutation each time.
pub fn game_lower_bounds(
    alpha: &Ordinal,
    max_gamma: u64,
    random_seeds: u64,
) -> PropertyOutcome {
    let name = "game-lower-bounds";
    let mut games = 0;
    for gamma in 0..=max_gamma {
        let gamma = Ordinal::nat(gamma);
        let mut challengers: Vec<Box<dyn Challenger>> = vec![Box::new(GreedyChallenger)];
        for seed in 0..random_seeds {
            challengers.push(Box::new(RandomChallenger { rng: rng(seed) }));
        }
        for mut ch in challengers {
            let initial = match initial_game_state(alpha, &gamma) {
                Ok(s) => s,
                Err(e) => return PropertyOutcome::fail(name, e.to_string()),
            };
            let rounds = 10 * (gamma.as_nat().unwrap() as usize + 2);
            match rank_game_play(alpha, initial, ch.as_mut(), rounds) {
                Ok(tr) => {
                    if let Err(e) = check_transcript(&tr) {
                        return PropertyOutcome::fail(
                            name,
                            format!("gamma {gamma}, {}: {e}", ch.name()),
                        );
                    }
                    games += 1;
                }
                Err(e) => {
                    return PropertyOutcome::fail(
                        name,
                        format!("gamma {gamma}, {}: {e}", ch.name()),
                    )
                }
            }
        }
    }
    PropertyOutcome::pass(name, format!("{games} games refuted (gamma <= {max_gamma})"))
}

/// Starting from a limit pending value, the first claim collapses the game
/// to the finite case and it still completes.
pub fn game_limit_case(alpha: &Ordinal, gamma: &Ordinal, seeds: u64) -> PropertyOutcome {
    let name = "game-limit-case";
    let mut challengers: Vec<Box<dyn Challenger>> = vec![Box::new(GreedyChallenger)];
    for seed in 0..seeds {
        challengers.push(Box::new(RandomChallenger { rng: rng(seed) }));
    }
    for mut ch in challengers {
        let initial = match initial_game_state(alpha, gamma) {
            Ok(s) => s,
            Err(e) => return PropertyOutcome::fail(name, e.to_string()),
        };
        match rank_game_play(alpha, initial, ch.as_mut(), 100_000) {
            Ok(tr) => {
                if let Err(e) = check_transcript(&tr) {
                    return PropertyOutcome::fail(name, format!("{}: {e}", ch.name()));
                }
                if ch.name() == "greedy" {
                    let first = &tr.rounds[0].claim;
                    if first.as_nat().is_none_or(|n| n > 30) {
                        return PropertyOutcome::fail(
                            name,
                            format!("greedy first claim too large: {first}"),
                        );
                    }
                }
            }
            Err(e) => return PropertyOutcome::fail(name, format!("{}: {e}", ch.name())),
        }
    }
    PropertyOutcome::pass(name, format!("limit pending {gamma} collapsed and refuted"))
}

// ---------------------------------------------------------------------------
// Rank machinery properties

/// A random finite rectangle tree in the same shape tstar_build produces.
pub fn random_tstar(max_nodes: usize, rng: &mut impl Rng) -> TStar {
    let mut nodes = vec![TStarNode {
        s: vec![0],
        t: vec![1],
        verdict: PairVerdict::Undecided,
        children: Vec::new(),
        truncated: false,
    }];
    let mut queue = vec![0usize];
    while let Some(i) = queue.pop() {
        if nodes.len() + 4 > max_nodes {
            nodes[i].verdict = PairVerdict::Out;
            continue;
        }
        for _ in 0..4 {
            let idx = nodes.len();
            let internal = rng.random_bool(0.35);
            let (s, t) = (nodes[i].s.clone(), nodes[i].t.clone());
            nodes.push(TStarNode {
                s,
                t,
                verdict: if internal { PairVerdict::Undecided } else { PairVerdict::In },
                children: Vec::new(),
                truncated: false,
            });
            nodes[i].children.push(idx);
            if internal {
                queue.push(idx);
            }
        }
    }
    TStar { nodes, branch_bound: 2, depth_bound: 64, complete: true }
}

/// An independent evaluator: iterate rank assignments to a fixpoint instead
/// of recursing.
fn naive_rank(t: &TStar) -> u64 {
    let n = t.nodes.len();
    let mut rank: Vec<Option<u64>> = vec![None; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            if rank[i].is_some() {
                continue;
            }
            let node = &t.nodes[i];
            if node.children.is_empty() {
                rank[i] = Some(0);
                changed = true;
            } else if node.children.iter().all(|&c| rank[c].is_some()) {
                rank[i] = Some(1 + node.children.iter().map(|&c| rank[c].unwrap()).max().unwrap());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    rank[0].expect("finite trees reach a fixpoint")
}

pub fn tree_rank_oracle(count: usize, max_nodes: usize, rng: &mut impl Rng) -> PropertyOutcome {
    let name = "tree-rank-oracle";
    for i in 0..count {
        let t = random_tstar(max_nodes, rng);
        let got = tree_rank(&t);
        let want = Ordinal::nat(naive_rank(&t));
        if got != want {
            return PropertyOutcome::fail(
                name,
                format!("tree {i} ({} nodes): {got} vs naive {want}", t.nodes.len()),
            );
        }
    }
    PropertyOutcome::pass(name, format!("{count} random trees matched the naive evaluator"))
}

fn random_rectangle(rng: &mut impl Rng) -> (FinSeq, FinSeq) {
    loop {
        let len = rng.random_range(1..3usize);
        let s: FinSeq = (0..len).map(|_| rng.random_range(0..4)).collect();
        let t: FinSeq = (0..len).map(|_| rng.random_range(0..4)).collect();
        if s != t {
            return (s, t);
        }
    }
}

/// Truncation rank bounds grow with the branch bound.
pub fn rank_monotonicity(
    rect_count: usize,
    branch_bounds: &[Nat],
    rng: &mut impl Rng,
) -> PropertyOutcome {
    let name = "rank-monotonicity";
    let g = e_alpha(&Ordinal::omega()).expect("omega is a limit");
    for i in 0..rect_count {
        let (s, t) = random_rectangle(rng);
        let depth = s.len() + 2;
        let mut prev: Option<Ordinal> = None;
        for &b in branch_bounds {
            let (r, _) = match rank_upper(&g, &s, &t, b, depth) {
                Ok(v) => v,
                Err(e) => return PropertyOutcome::fail(name, e.to_string()),
            };
            if let Some(p) = &prev {
                if &r < p {
                    return PropertyOutcome::fail(
                        name,
                        format!("rect {i} ({s:?},{t:?}): bound {b} gave {r} < {p}"),
                    );
                }
            }
            prev = Some(r);
        }
    }
    PropertyOutcome::pass(
        name,
        format!("{rect_count} rectangles nondecreasing over bounds {branch_bounds:?}"),
    )
}

/// Truncation form of subset monotonicity: a sub-rectangle never has larger
/// rank at equal bounds.
pub fn prop1_nested(samples: usize, rng: &mut impl Rng) -> PropertyOutcome {
    let name = "nested-rectangle-monotonicity";
    let g = e_alpha(&Ordinal::omega()).expect("omega is a limit");
    for i in 0..samples {
        let (s, t) = random_rectangle(rng);
        let ext = rng.random_range(1..3usize);
        let mut s2 = s.clone();
        let mut t2 = t.clone();
        for _ in 0..ext {
            s2.push(rng.random_range(0..4));
            t2.push(rng.random_range(0..4));
        }
        let depth = s2.len() + 2;
        let outer = rank_upper(&g, &s, &t, 3, depth);
        let inner = rank_upper(&g, &s2, &t2, 3, depth);
        match (outer, inner) {
            (Ok((ro, _)), Ok((ri, _))) => {
                if ri > ro {
                    return PropertyOutcome::fail(
                        name,
                        format!("sample {i}: inner {ri} > outer {ro}"),
                    );
                }
            }
            (Err(e), _) | (_, Err(e)) => return PropertyOutcome::fail(name, e.to_string()),
        }
    }
    PropertyOutcome::pass(name, format!("{samples} nested rectangles monotone"))
}

// ---------------------------------------------------------------------------
// Universal tree properties

/// Streaming validity check: every non-sibling same-level pair is labeled
/// below its parent pair in the ⊲ order, checked exhaustively; sibling
/// pairs carry no constraint, so only a bounded sample is probed for label
/// existence (it is structurally total). This avoids materializing the
/// quadratically many sibling labels of a wide tree.
pub fn universal_violations(u: &UniversalTree, sibling_sample: usize) -> usize {
    let mut by_level: std::collections::BTreeMap<usize, Vec<&FinSeq>> =
        std::collections::BTreeMap::new();
    for n in u.nodes() {
        by_level.entry(n.len()).or_default().push(n);
    }
    let mut violations = 0;
    for (level, nodes) in &by_level {
        if *level == 0 {
            continue;
        }
        for (i, s) in nodes.iter().enumerate() {
            for (j, t) in nodes.iter().enumerate().skip(i + 1) {
                let (ps, pt) = (&s[..s.len() - 1], &t[..t.len() - 1]);
                if ps == pt {
                    if i < sibling_sample && j < sibling_sample && u.label(s, t).is_none() {
                        violations += 1;
                    }
                    continue;
                }
                let ok = match (u.label(s, t), u.label(ps, pt)) {
                    (Some(l), Some(pl)) => crate::ordinal::triangle_lt(&l, &pl),
                    _ => false,
                };
                if !ok {
                    violations += 1;
                }
            }
        }
    }
    violations
}

/// Builds for `steps` schedule steps, validating the labeling at every
/// checkpoint.
pub fn universal_construction(
    alpha: &Ordinal,
    steps: usize,
    checkpoint: usize,
    variant: Variant,
) -> PropertyOutcome {
    let name = "universal-construction";
    let mut u = match UniversalTree::new(alpha.clone(), variant) {
        Ok(u) => u,
        Err(e) => return PropertyOutcome::fail(name, e.to_string()),
    };
    let mut done = 0;
    while done < steps {
        let burst = checkpoint.min(steps - done);
        u.build_steps(burst);
        done += burst;
        let violations = universal_violations(&u, 200);
        if violations != 0 {
            return PropertyOutcome::fail(
                name,
                format!("step {done} ({variant:?}): {violations} violations"),
            );
        }
    }
    PropertyOutcome::pass(
        name,
        format!(
            "{steps} steps ({variant:?}), {} nodes, valid at every {checkpoint}-step checkpoint",
            u.nodes().len()
        ),
    )
}

/// A random consistent request touching only the first three constructed
/// nodes and the first three list labels (grade ≤ 3).
fn random_small_request(u: &UniversalTree, rng: &mut impl Rng) -> Option<RequestTriple> {
    let n = u.nodes().len().min(3);
    for _ in 0..50 {
        let p = u.nodes()[rng.random_range(0..n)].clone();
        let cands: Vec<FinSeq> = u.nodes()[..n]
            .iter()
            .filter(|c| c.len() == p.len() + 1)
            .cloned()
            .collect();
        let mut f = Vec::new();
        for c in cands {
            if rng.random_bool(0.5) {
                let label = match rng.random_range(0..3u32) {
                    0 => Label::In,
                    1 => Label::Out,
                    _ => Label::Ord(Ordinal::zero()),
                };
                f.push((c, label));
            }
        }
        let req = RequestTriple { p, f };
        if u.check_request(&req).is_ok() {
            return Some(req);
        }
    }
    None
}

/// Random grade-≤3 requests each get the asked number of distinct fresh
/// witnesses, and their schedule positions decode back to the same triple
/// (the computable face of "infinitely many repetitions").
pub fn universal_witnesses(
    alpha: &Ordinal,
    requests: usize,
    witnesses_each: usize,
    rng: &mut impl Rng,
) -> PropertyOutcome {
    let name = "universal-witnesses";
    let mut u = match UniversalTree::new(alpha.clone(), Variant::Plain) {
        Ok(u) => u,
        Err(e) => return PropertyOutcome::fail(name, e.to_string()),
    };
    u.build_steps(200); // populate the first few schedule grades
    for i in 0..requests {
        let Some(req) = random_small_request(&u, rng) else {
            return PropertyOutcome::fail(name, format!("request {i}: no consistent sample"));
        };
        let horizon = witnesses_each + 4;
        match u.find_witnesses(&req, witnesses_each, horizon) {
            Ok(ws) => {
                let mut sorted = ws.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != witnesses_each {
                    return PropertyOutcome::fail(name, format!("request {i}: duplicate witnesses"));
                }
            }
            Err(e) => return PropertyOutcome::fail(name, format!("request {i}: {e}")),
        }
        for rep in 0..3 {
            match u.position_of(&req, rep) {
                Ok(pos) => {
                    if u.scheduled_at(pos).as_ref() != Some(&req) {
                        return PropertyOutcome::fail(
                            name,
                            format!("request {i}: schedule position {pos} decodes differently"),
                        );
                    }
                }
                Err(e) => return PropertyOutcome::fail(name, format!("request {i}: {e}")),
            }
        }
    }
    PropertyOutcome::pass(
        name,
        format!("{requests} requests honored with {witnesses_each} witnesses and stable schedule positions"),
    )
}

/// Exhaustive check of the true-clopen constraint on a constructed tree.
pub fn lprime_scan(alpha: &Ordinal, steps: usize) -> PropertyOutcome {
    let name = "true-clopen-scan";
    let mut u = match UniversalTree::new(alpha.clone(), Variant::TrueClopen) {
        Ok(u) => u,
        Err(e) => return PropertyOutcome::fail(name, e.to_string()),
    };
    u.build_steps(steps);
    let mut groups: std::collections::BTreeMap<(usize, Nat), Vec<FinSeq>> =
        std::collections::BTreeMap::new();
    for n in u.nodes() {
        if n.len() > 1 {
            groups.entry((n.len(), n[0])).or_default().push(n.clone());
        }
    }
    let mut checked = 0;
    for nodes in groups.values() {
        for (i, s) in nodes.iter().enumerate() {
            for t in &nodes[i + 1..] {
                checked += 1;
                if u.label(s, t) != Some(Label::Out) {
                    return PropertyOutcome::fail(name, format!("pair ({s:?},{t:?}) not Out"));
                }
            }
        }
    }
    PropertyOutcome::pass(name, format!("{checked} same-first-coordinate pairs all Out"))
}

// ---------------------------------------------------------------------------
// Embedding properties

/// Random valid trees embed with exact invariant checks, and sampled point
/// pairs reduce correctly through the induced map.
pub fn embedding_correctness(
    alpha: &Ordinal,
    tree_count: usize,
    max_nodes: usize,
    max_depth: usize,
    samples_per_tree: usize,
    rng: &mut impl Rng,
) -> PropertyOutcome {
    let name = "embedding-correctness";
    let label_alpha = Ordinal::term(Ordinal::nat(2), 1); // labels below w^2
    for i in 0..tree_count {
        let tree = random_alpha_tree(&label_alpha, max_nodes, max_depth, rng);
        let mut u = match UniversalTree::new(alpha.clone(), Variant::Plain) {
            Ok(u) => u,
            Err(e) => return PropertyOutcome::fail(name, e.to_string()),
        };
        if let Err(e) = embed_tree(&tree, &mut u, 10 * max_nodes) {
            return PropertyOutcome::fail(name, format!("tree {i}: {e}"));
        }
        let u2 = UniversalTree::new(alpha.clone(), Variant::Plain).expect("limit alpha");
        let mut lazy = LazyEmbedding::new(Completion::new(tree), u2, 10 * max_nodes);
        match verify_reduction(&mut lazy, samples_per_tree, max_depth + 2, rng) {
            Ok(report) => {
                if !report.ok() {
                    return PropertyOutcome::fail(
                        name,
                        format!("tree {i}: {} disagreements", report.disagreements.len()),
                    );
                }
            }
            Err(e) => return PropertyOutcome::fail(name, format!("tree {i}: {e}")),
        }
    }
    PropertyOutcome::pass(
        name,
        format!("{tree_count} trees embedded; {samples_per_tree} point pairs each agreed"),
    )
}

/// Corrupts one source label after the embedding is built; the verification
/// harness must flag a disagreement. `count` independent rounds.
pub fn fault_detection(
    alpha: &Ordinal,
    count: usize,
    max_nodes: usize,
    max_depth: usize,
    rng: &mut impl Rng,
) -> PropertyOutcome {
    let name = "fault-detection";
    let label_alpha = Ordinal::term(Ordinal::nat(2), 1);
    let mut detected = 0;
    for i in 0..count {
        let tree = random_alpha_tree(&label_alpha, max_nodes, max_depth, rng);
        let u = UniversalTree::new(alpha.clone(), Variant::Plain).expect("limit alpha");
        let mut lazy = LazyEmbedding::new(Completion::new(tree), u, 10 * max_nodes);
        let depth = max_depth + 2;
        // pick the branch pair that the verifier will sample first, and
        // corrupt the label that decides it
        let replay_seed: u64 = rng.random();
        let mut probe = self::rng(replay_seed);
        let mut draws = 0;
        let (x, y) = loop {
            let x = crate::embed::random_branch(lazy_source(&lazy), depth, &mut probe);
            let y = crate::embed::random_branch(lazy_source(&lazy), depth, &mut probe);
            draws += 1;
            if x != y {
                break (x, y);
            }
            if draws > 50 {
                return PropertyOutcome::fail(name, format!("round {i}: no distinct branches"));
            }
        };
        let split = x.iter().zip(&y).position(|(a, b)| a != b).unwrap();
        let mut faulted = false;
        for k in split + 1..=depth.min(x.len()).min(y.len()) {
            let (s, t) = (&x[..k], &y[..k]);
            match lazy_source(&lazy).label(s, t) {
                Label::In => {
                    lazy.inject_fault(s.to_vec(), t.to_vec(), Label::Out);
                    faulted = true;
                    break;
                }
                Label::Out => {
                    lazy.inject_fault(s.to_vec(), t.to_vec(), Label::In);
                    faulted = true;
                    break;
                }
                Label::Ord(_) => {}
            }
        }
        if !faulted {
            // no settled label within reach: force a spurious edge right
            // after the divergence
            let k = split + 1;
            lazy.inject_fault(x[..k].to_vec(), y[..k].to_vec(), Label::In);
        }
        let mut replay = self::rng(replay_seed);
        match verify_reduction(&mut lazy, draws, depth, &mut replay) {
            Ok(report) => {
                if !report.ok() {
                    detected += 1;
                } else {
                    return PropertyOutcome::fail(
                        name,
                        format!("round {i}: injected fault went unnoticed"),
                    );
                }
            }
            Err(e) => return PropertyOutcome::fail(name, format!("round {i}: {e}")),
        }
    }
    PropertyOutcome::pass(name, format!("{detected}/{count} injected faults detected"))
}

fn lazy_source<'a, S: TreeSource>(lazy: &'a LazyEmbedding<S>) -> &'a S {
    lazy.source_ref()
}

// ---------------------------------------------------------------------------
// Round trip

/// The graph induced by the canonical labeling of E agrees with E itself on
/// every same-length distinct pair within the bounds.
pub fn round_trip(alpha: &Ordinal, branch: Nat, depth: usize) -> PropertyOutcome {
    let name = "canonical-round-trip";
    let g = match e_alpha(alpha) {
        Ok(g) => g,
        Err(e) => return PropertyOutcome::fail(name, e.to_string()),
    };
    let canonical = CanonicalLabeling::new(&g, branch, depth);
    let g2 = graph_from_labeling(canonical);
    let mut checked = 0usize;
    for len in 1..=depth {
        let level = crate::seqspace::all_seqs_of_len(branch, len);
        for (i, s) in level.iter().enumerate() {
            for t in &level[i + 1..] {
                checked += 1;
                let want = g.decide_rect(s, t);
                let got = g2.decide_rect(s, t);
                if want != got {
                    return PropertyOutcome::fail(
                        name,
                        format!("pair ({s:?},{t:?}): direct {want:?} vs labeled {got:?}"),
                    );
                }
            }
        }
    }
    PropertyOutcome::pass(name, format!("{checked} pairs agreed at bounds ({branch},{depth})"))
}

// ---------------------------------------------------------------------------
// Named suites (CLI-scale parameters)

pub const SUITE_NAMES: &[&str] = &["hierarchy", "rank", "universal", "embed", "roundtrip"];

/// Runs one named suite (or "all") with CLI-scale parameters. Deterministic
/// in (name, seed).
pub fn run_suite(name: &str, seed: u64) -> Option<Vec<PropertyOutcome>> {
    let w = Ordinal::omega();
    let w2 = Ordinal::term(Ordinal::nat(2), 1);
    let mut out = Vec::new();
    let mut matched = false;
    if name == "hierarchy" || name == "all" {
        matched = true;
        for (i, alpha) in [w.clone(), w2.clone()].iter().enumerate() {
            out.push(descent_soundness(alpha, 1000, &mut rng(seed + i as u64)));
        }
        out.push(prefix_determinacy(&w, 100, 20, &mut rng(seed + 10)));
        out.push(bipartite_structure(&w, 300, 100, &mut rng(seed + 11)));
    }
    if name == "rank" || name == "all" {
        matched = true;
        out.push(tree_rank_oracle(30, 200, &mut rng(seed + 20)));
        out.push(rank_monotonicity(15, &[2, 4, 8], &mut rng(seed + 21)));
        out.push(prop1_nested(50, &mut rng(seed + 22)));
        out.push(game_lower_bounds(&w, 15, 3));
        out.push(game_limit_case(&w2, &w, 3));
    }
    if name == "universal" || name == "all" {
        matched = true;
        out.push(universal_construction(&w2, 2000, 500, Variant::Plain));
        out.push(universal_construction(&w2, 2000, 500, Variant::TrueClopen));
        out.push(universal_witnesses(&w2, 50, 3, &mut rng(seed + 30)));
        out.push(lprime_scan(&w2, 2000));
    }
    if name == "embed" || name == "all" {
        matched = true;
        out.push(embedding_correctness(&w2, 10, 20, 4, 50, &mut rng(seed + 40)));
        out.push(fault_detection(&w2, 10, 12, 4, &mut rng(seed + 41)));
    }
    if name == "roundtrip" || name == "all" {
        matched = true;
        out.push(round_trip(&w, 3, 5));
    }
    if matched { Some(out) } else { None }
}
