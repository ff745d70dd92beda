//! The ordinal-descent graphs: R_alpha as a pointer-chasing procedure over
//! labeled points, its finite-prefix form, the padded bipartite graphs
//! S/P/E, neighbor witnesses, and the point-spec input grammar.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clopen::{decide_pair, DecideError, EdgeVerdict, GraphOracle, PairVerdict, Point};
use crate::ordinal::{
    enumerate_below, index_below, pair, parse_ordinal, unpair, Label, Ordinal, OrdinalError,
};
use crate::seqspace::Nat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("alpha must be a limit notation, got {0}")]
    NotLimit(String),
    #[error("label {label} at coordinate {index} is not below alpha")]
    LabelOutOfDomain { index: Nat, label: String },
    #[error("point spec error at byte {pos}: {msg}")]
    Spec { pos: usize, msg: String },
    #[error("no edge decision within fuel {fuel}")]
    Fuel { fuel: usize },
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Decide(#[from] DecideError),
}

fn require_limit(alpha: &Ordinal) -> Result<(), HierarchyError> {
    if alpha.is_limit() {
        Ok(())
    } else {
        Err(HierarchyError::NotLimit(alpha.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Gamma codes: naturals standing for (pointer, label) pairs

/// Packs (n, label) into a single natural. Label code 0 is In, 1 is Out,
/// 2+k is the k-th notation below alpha.
pub fn encode_gamma(alpha: &Ordinal, n: Nat, label: &Label) -> Result<Nat, HierarchyError> {
    let lc = match label {
        Label::In => 0,
        Label::Out => 1,
        Label::Ord(b) => 2u64
            .checked_add(index_below(alpha, b)?)
            .ok_or(OrdinalError::Overflow)?,
    };
    Ok(pair(n, lc)?)
}

pub fn decode_gamma(alpha: &Ordinal, code: Nat) -> Result<(Nat, Label), HierarchyError> {
    let (n, lc) = unpair(code);
    let label = match lc {
        0 => Label::In,
        1 => Label::Out,
        k => Label::Ord(enumerate_below(alpha, k - 2)?),
    };
    Ok((n, label))
}

// ---------------------------------------------------------------------------
// The descent procedure on full points

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub m: Nat,
    pub n: Nat,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentTrace {
    pub steps: Vec<TraceStep>,
    pub i0: usize,
    pub verdict: EdgeVerdict,
}

/// Runs the pointer-chasing descent: m_0 = x(0), then y(m_i) = (n_i, a_i)
/// and m_{i+1} = x(n_i), stopping at the first i where a_i lies in Q or the
/// ordinal fails to strictly decrease. Termination is forced by
/// well-foundedness of the notations, so no fuel parameter is needed.
pub fn r_alpha_decide(
    alpha: &Ordinal,
    x: &Point,
    y: &Point,
) -> Result<DescentTrace, HierarchyError> {
    require_limit(alpha)?;
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut prev: Option<Ordinal> = None;
    let mut next_x_index: Nat = 0;
    loop {
        let m = if steps.is_empty() {
            x.coord(0)
        } else {
            x.coord(next_x_index as usize)
        };
        let (n, label) = decode_gamma(alpha, y.coord(m as usize))?;
        steps.push(TraceStep { m, n, label: label.clone() });
        let i = steps.len() - 1;
        match label {
            Label::In => {
                return Ok(DescentTrace { steps, i0: i, verdict: EdgeVerdict::In });
            }
            Label::Out => {
                return Ok(DescentTrace { steps, i0: i, verdict: EdgeVerdict::Out });
            }
            Label::Ord(b) => {
                if let Some(p) = &prev {
                    if !(b < *p) {
                        return Ok(DescentTrace { steps, i0: i, verdict: EdgeVerdict::Out });
                    }
                }
                prev = Some(b);
                next_x_index = n;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The descent procedure on finite prefixes

/// Which missing coordinate blocked the run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Need {
    XCoord(Nat),
    /// The index m_N with m_N >= |t|: the next label has not been written yet.
    YCoord(Nat),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectState {
    pub steps: Vec<TraceStep>,
    pub need: Need,
    /// The last ordinal seen before the run stalled (None if it stalled
    /// before any ordinal label).
    pub pending: Option<Ordinal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RectVerdict {
    In,
    Out,
    Undecided(RectState),
}

impl RectVerdict {
    pub fn as_pair_verdict(&self) -> PairVerdict {
        match self {
            RectVerdict::In => PairVerdict::In,
            RectVerdict::Out => PairVerdict::Out,
            RectVerdict::Undecided(_) => PairVerdict::Undecided,
        }
    }
}

/// Runs the descent as far as the prefixes allow. `s` holds plain naturals,
/// `t` holds gamma codes.
pub fn r_alpha_rect(alpha: &Ordinal, s: &[Nat], t: &[Nat]) -> Result<RectVerdict, HierarchyError> {
    require_limit(alpha)?;
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut prev: Option<Ordinal> = None;
    let mut next_x_index: Nat = 0;
    loop {
        let xi = if steps.is_empty() { 0 } else { next_x_index };
        if xi >= s.len() as Nat {
            return Ok(RectVerdict::Undecided(RectState {
                steps,
                need: Need::XCoord(xi),
                pending: prev,
            }));
        }
        let m = s[xi as usize];
        if m >= t.len() as Nat {
            return Ok(RectVerdict::Undecided(RectState {
                steps,
                need: Need::YCoord(m),
                pending: prev,
            }));
        }
        let (n, label) = decode_gamma(alpha, t[m as usize])?;
        steps.push(TraceStep { m, n, label: label.clone() });
        match label {
            Label::In => return Ok(RectVerdict::In),
            Label::Out => return Ok(RectVerdict::Out),
            Label::Ord(b) => {
                if let Some(p) = &prev {
                    if !(b < *p) {
                        return Ok(RectVerdict::Out);
                    }
                }
                prev = Some(b);
                next_x_index = n;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The padded bipartite graphs

// Region layout by first coordinate: C = [<0>], D = [<1>], C1 = [<2>],
// D1 = everything with first coordinate >= 3. A = C u C1, B = D u D1.

fn p_rect(alpha: &Ordinal, s: &[Nat], t: &[Nat]) -> PairVerdict {
    if s.is_empty() || t.is_empty() {
        return PairVerdict::Undecided;
    }
    match (s[0], t[0]) {
        (0, 1) => r_alpha_rect(alpha, &s[1..], &t[1..])
            .expect("limit alpha decodes every gamma code")
            .as_pair_verdict(),
        (2, 1) => PairVerdict::In,
        (0, d) if d >= 3 => PairVerdict::In,
        _ => PairVerdict::Out,
    }
}

/// The copy of the descent graph living on [<0>] x [<1>] (one-sided).
pub struct SAlpha {
    alpha: Ordinal,
}

pub fn s_alpha(alpha: &Ordinal) -> Result<SAlpha, HierarchyError> {
    require_limit(alpha)?;
    Ok(SAlpha { alpha: alpha.clone() })
}

impl GraphOracle for SAlpha {
    fn decide_rect(&self, s: &[Nat], t: &[Nat]) -> PairVerdict {
        if s.is_empty() || t.is_empty() {
            return PairVerdict::Undecided;
        }
        if (s[0], t[0]) == (0, 1) {
            r_alpha_rect(&self.alpha, &s[1..], &t[1..])
                .expect("limit alpha decodes every gamma code")
                .as_pair_verdict()
        } else {
            PairVerdict::Out
        }
    }
}

/// S padded with the full rectangles C1 x D and C x D1 (one-sided).
pub struct PAlpha {
    alpha: Ordinal,
}

pub fn p_alpha(alpha: &Ordinal) -> Result<PAlpha, HierarchyError> {
    require_limit(alpha)?;
    Ok(PAlpha { alpha: alpha.clone() })
}

impl GraphOracle for PAlpha {
    fn decide_rect(&self, s: &[Nat], t: &[Nat]) -> PairVerdict {
        p_rect(&self.alpha, s, t)
    }
}

/// The symmetrization of P: an edge whenever either orientation is in P.
pub struct EAlpha {
    alpha: Ordinal,
}

pub fn e_alpha(alpha: &Ordinal) -> Result<EAlpha, HierarchyError> {
    require_limit(alpha)?;
    Ok(EAlpha { alpha: alpha.clone() })
}

impl EAlpha {
    pub fn alpha(&self) -> &Ordinal {
        &self.alpha
    }
}

impl GraphOracle for EAlpha {
    fn decide_rect(&self, s: &[Nat], t: &[Nat]) -> PairVerdict {
        match (p_rect(&self.alpha, s, t), p_rect(&self.alpha, t, s)) {
            (PairVerdict::In, _) | (_, PairVerdict::In) => PairVerdict::In,
            (PairVerdict::Out, PairVerdict::Out) => PairVerdict::Out,
            _ => PairVerdict::Undecided,
        }
    }
}

/// Region of a point, read off its first coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    C,
    D,
    C1,
    D1,
}

pub fn region_of(first: Nat) -> Region {
    match first {
        0 => Region::C,
        1 => Region::D,
        2 => Region::C1,
        _ => Region::D1,
    }
}

/// Produces a neighbor of x across the bipartition: every point on side A
/// has one on side B and vice versa, in the fully connected padding
/// rectangles. The witness is zero after its first coordinate.
pub fn witness_neighbor(
    alpha: &Ordinal,
    x: &Point,
    fuel: usize,
) -> Result<Point, HierarchyError> {
    require_limit(alpha)?;
    let head = match region_of(x.coord(0)) {
        Region::C => 3,  // C x D1
        Region::C1 => 1, // C1 x D
        Region::D => 2,  // D x C1 via symmetry
        Region::D1 => 0, // D1 x C via symmetry
    };
    let y = Point::periodic(vec![head], vec![]);
    let g = e_alpha(alpha)?;
    match decide_pair(&g, x, &y, fuel) {
        Ok(d) if d.verdict == EdgeVerdict::In => Ok(y),
        Ok(_) => Err(HierarchyError::Fuel { fuel }),
        Err(e) => Err(e.into()),
    }
}

// ---------------------------------------------------------------------------
// Point specs: `a,b,(c,d)*` with gamma entries `(n|in)`, `(n|out)`, `(n|w+1)`

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecEntry {
    Num(Nat),
    Gamma(Nat, Label),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSpec {
    pub head: Vec<SpecEntry>,
    pub period: Vec<SpecEntry>,
}

fn spec_err(pos: usize, msg: impl Into<String>) -> HierarchyError {
    HierarchyError::Spec { pos, msg: msg.into() }
}

/// Splits `text` on commas that sit outside parentheses; returns (offset,
/// piece) pairs for error reporting.
fn split_top_commas(text: &str, base: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push((base + start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((base + start, &text[start..]));
    out
}

fn parse_entry(pos: usize, raw: &str) -> Result<SpecEntry, HierarchyError> {
    let mut piece = raw.trim();
    let mut off = pos + (raw.len() - raw.trim_start().len());
    if piece.starts_with('(') && piece.ends_with(')') {
        piece = &piece[1..piece.len() - 1];
        off += 1;
    }
    if piece.is_empty() {
        return Err(spec_err(off, "empty entry"));
    }
    // a `|` outside nested parens marks a gamma entry
    let mut depth = 0usize;
    let mut bar = None;
    for (i, c) in piece.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '|' if depth == 0 => {
                bar = Some(i);
                break;
            }
            _ => {}
        }
    }
    match bar {
        None => piece
            .parse::<Nat>()
            .map(SpecEntry::Num)
            .map_err(|e| spec_err(off, format!("bad number {piece:?}: {e}"))),
        Some(b) => {
            let n = piece[..b]
                .trim()
                .parse::<Nat>()
                .map_err(|e| spec_err(off, format!("bad pointer {:?}: {e}", &piece[..b])))?;
            let label_text = piece[b + 1..].trim();
            let label = match label_text {
                "in" => Label::In,
                "out" => Label::Out,
                other => Label::Ord(
                    parse_ordinal(other).map_err(|e| spec_err(off + b + 1, e.to_string()))?,
                ),
            };
            Ok(SpecEntry::Gamma(n, label))
        }
    }
}

pub fn parse_point_spec(text: &str) -> Result<PointSpec, HierarchyError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(spec_err(0, "empty point spec"));
    }
    // the period is a trailing depth-0 `(...)` group followed by `*`
    let (head_text, period_text, period_base) = if trimmed.ends_with('*') {
        let body = &trimmed[..trimmed.len() - 1];
        if !body.ends_with(')') {
            return Err(spec_err(trimmed.len() - 1, "`*` must follow a `(...)` group"));
        }
        // the period group is the depth-0 `(...)` whose close is the final `)`
        let mut depth = 0usize;
        let mut current_open = None;
        let mut open = None;
        for (i, c) in body.char_indices() {
            match c {
                '(' => {
                    if depth == 0 {
                        current_open = Some(i);
                    }
                    depth += 1;
                }
                ')' => {
                    depth = depth.saturating_sub(1);
                    if depth == 0 && i == body.len() - 1 {
                        open = current_open;
                    }
                }
                _ => {}
            }
        }
        let open = open.filter(|_| depth == 0);
        let open = open.ok_or_else(|| spec_err(0, "unbalanced parentheses in period"))?;
        let head = body[..open].trim_end().trim_end_matches(',');
        (head, Some(&body[open + 1..body.len() - 1]), open + 1)
    } else {
        (trimmed, None, 0)
    };
    let mut head = Vec::new();
    if !head_text.trim().is_empty() {
        for (pos, piece) in split_top_commas(head_text, 0) {
            head.push(parse_entry(pos, piece)?);
        }
    }
    let mut period = Vec::new();
    if let Some(p) = period_text {
        for (pos, piece) in split_top_commas(p, period_base) {
            period.push(parse_entry(pos, piece)?);
        }
    }
    if head.is_empty() && period.is_empty() {
        return Err(spec_err(0, "point spec has no entries"));
    }
    Ok(PointSpec { head, period })
}

impl PointSpec {
    fn coords(&self, alpha: Option<&Ordinal>) -> Result<(Vec<Nat>, Vec<Nat>), HierarchyError> {
        let conv = |e: &SpecEntry| -> Result<Nat, HierarchyError> {
            match e {
                SpecEntry::Num(n) => Ok(*n),
                SpecEntry::Gamma(n, l) => match alpha {
                    Some(a) => encode_gamma(a, *n, l),
                    None => Err(spec_err(0, "gamma entry in a plain point spec")),
                },
            }
        };
        let head = self.head.iter().map(conv).collect::<Result<Vec<_>, _>>()?;
        let period = self.period.iter().map(conv).collect::<Result<Vec<_>, _>>()?;
        Ok((head, period))
    }

    /// A plain point; gamma entries are rejected.
    pub fn to_point(&self) -> Result<Point, HierarchyError> {
        let (head, period) = self.coords(None)?;
        Ok(Point::periodic(head, period))
    }

    /// A label-stream point: gamma entries are encoded against `alpha`,
    /// plain numbers pass through as raw codes.
    pub fn to_gamma_point(&self, alpha: &Ordinal) -> Result<Point, HierarchyError> {
        let (head, period) = self.coords(Some(alpha))?;
        Ok(Point::periodic(head, period))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clopen::decide_pair;
    use crate::ordinal::Ordinal;

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    fn gamma_point(alpha: &Ordinal, entries: Vec<(Nat, Label)>) -> Point {
        let codes: Vec<Nat> = entries
            .iter()
            .map(|(n, l)| encode_gamma(alpha, *n, l).unwrap())
            .collect();
        Point::periodic(codes, vec![encode_gamma(alpha, 0, &Label::Out).unwrap()])
    }

    #[test]
    fn gamma_codes_round_trip() {
        let a = Ordinal::term(Ordinal::nat(2), 1); // w^2
        for n in 0..20 {
            for label in [
                Label::In,
                Label::Out,
                Label::Ord(Ordinal::nat(7)),
                Label::Ord(Ordinal::omega()),
            ] {
                let code = encode_gamma(&a, n, &label).unwrap();
                assert_eq!(decode_gamma(&a, code).unwrap(), (n, label));
            }
        }
    }

    #[test]
    fn decide_immediate_in() {
        let x = Point::periodic(vec![0], vec![0]);
        let y = gamma_point(&w(), vec![(1, Label::In)]);
        let tr = r_alpha_decide(&w(), &x, &y).unwrap();
        assert_eq!(tr.i0, 0);
        assert_eq!(tr.verdict, EdgeVerdict::In);
    }

    #[test]
    fn decide_non_descent_is_out() {
        // x(0)=0, y(0)=(1, 3); x(1)=2, y(2)=(4, 7): 7 is not < 3
        let x = Point::periodic(vec![0, 2], vec![0]);
        let y = gamma_point(
            &w(),
            vec![
                (1, Label::Ord(Ordinal::nat(3))),
                (0, Label::Out),
                (4, Label::Ord(Ordinal::nat(7))),
            ],
        );
        let tr = r_alpha_decide(&w(), &x, &y).unwrap();
        assert_eq!(tr.i0, 1);
        assert_eq!(tr.verdict, EdgeVerdict::Out);
        assert_eq!(tr.steps[0].label, Label::Ord(Ordinal::nat(3)));
        assert_eq!(tr.steps[1].label, Label::Ord(Ordinal::nat(7)));
    }

    #[test]
    fn decide_descends_then_q() {
        // labels 5 > 2 then Out
        let x = Point::periodic(vec![0, 1, 2], vec![0]);
        let y = gamma_point(
            &w(),
            vec![
                (1, Label::Ord(Ordinal::nat(5))),
                (2, Label::Ord(Ordinal::nat(2))),
                (0, Label::Out),
            ],
        );
        let tr = r_alpha_decide(&w(), &x, &y).unwrap();
        assert_eq!(tr.i0, 2);
        assert_eq!(tr.verdict, EdgeVerdict::Out);
    }

    #[test]
    fn decide_requires_limit_alpha() {
        let x = Point::periodic(vec![0], vec![0]);
        let y = Point::periodic(vec![0], vec![0]);
        assert!(matches!(
            r_alpha_decide(&Ordinal::nat(4), &x, &y),
            Err(HierarchyError::NotLimit(_))
        ));
    }

    #[test]
    fn rect_stalls_with_pending_state() {
        let beta = Ordinal::nat(3);
        let t = vec![encode_gamma(&w(), 1, &Label::Ord(beta.clone())).unwrap()];
        match r_alpha_rect(&w(), &[0, 1], &t).unwrap() {
            RectVerdict::Undecided(st) => {
                assert_eq!(st.need, Need::YCoord(1));
                assert_eq!(st.pending, Some(beta));
                assert_eq!(st.steps.len(), 1);
            }
            other => panic!("expected stall, got {other:?}"),
        }
    }

    #[test]
    fn rect_immediate_q() {
        let t = vec![encode_gamma(&w(), 9, &Label::In).unwrap()];
        assert_eq!(r_alpha_rect(&w(), &[0], &t).unwrap(), RectVerdict::In);
    }

    #[test]
    fn rect_agrees_with_decide_on_completions() {
        let a = w();
        let codes: Vec<Nat> = [
            (0, Label::In),
            (1, Label::Out),
            (2, Label::Ord(Ordinal::nat(1))),
            (0, Label::Ord(Ordinal::nat(2))),
        ]
        .iter()
        .map(|(n, l)| encode_gamma(&a, *n, l).unwrap())
        .collect();
        let out_code = encode_gamma(&a, 0, &Label::Out).unwrap();
        for s0 in 0..3u64 {
            for s1 in 0..3u64 {
                for &c0 in &codes {
                    for &c1 in &codes {
                        let s = vec![s0, s1];
                        let t = vec![c0, c1];
                        let rect = r_alpha_rect(&a, &s, &t).unwrap();
                        // any completion: zeros on x, Out labels on y
                        let x = Point::periodic(s.clone(), vec![0]);
                        let y = Point::periodic(t.clone(), vec![out_code]);
                        let tr = r_alpha_decide(&a, &x, &y).unwrap();
                        match rect {
                            RectVerdict::In => assert_eq!(tr.verdict, EdgeVerdict::In),
                            RectVerdict::Out => assert_eq!(tr.verdict, EdgeVerdict::Out),
                            RectVerdict::Undecided(_) => {}
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn e_alpha_region_rectangles() {
        let g = e_alpha(&w()).unwrap();
        // C1 x D
        assert_eq!(g.decide_rect(&[2], &[1]), PairVerdict::In);
        // C x D1
        assert_eq!(g.decide_rect(&[0], &[3]), PairVerdict::In);
        assert_eq!(g.decide_rect(&[0], &[7]), PairVerdict::In);
        // same side never connects
        assert_eq!(g.decide_rect(&[0, 1], &[0, 2]), PairVerdict::Out);
        assert_eq!(g.decide_rect(&[0], &[2]), PairVerdict::Out);
        assert_eq!(g.decide_rect(&[1], &[4]), PairVerdict::Out);
        // symmetry across the two orientations
        assert_eq!(g.decide_rect(&[1], &[2]), PairVerdict::In);
        assert_eq!(g.decide_rect(&[3], &[0]), PairVerdict::In);
    }

    #[test]
    fn witness_neighbor_all_regions() {
        let a = w();
        for first in [0u64, 1, 2, 3, 9] {
            let x = Point::periodic(vec![first, 5], vec![1]);
            let y = witness_neighbor(&a, &x, 64).unwrap();
            let g = e_alpha(&a).unwrap();
            let d = decide_pair(&g, &x, &y, 64).unwrap();
            assert_eq!(d.verdict, EdgeVerdict::In, "region of first coord {first}");
        }
    }

    #[test]
    fn spec_parses_plain_and_periodic() {
        let p = parse_point_spec("0,1,(3)*").unwrap();
        assert_eq!(
            p,
            PointSpec {
                head: vec![SpecEntry::Num(0), SpecEntry::Num(1)],
                period: vec![SpecEntry::Num(3)],
            }
        );
        let pt = p.to_point().unwrap();
        assert_eq!(pt.prefix(5), vec![0, 1, 3, 3, 3]);
        // head-only spec: constant zero after the listed entries
        let pt = parse_point_spec("4,2").unwrap().to_point().unwrap();
        assert_eq!(pt.prefix(4), vec![4, 2, 0, 0]);
    }

    #[test]
    fn spec_parses_gamma_entries() {
        let a = w();
        let p = parse_point_spec("(1|in)*").unwrap();
        assert_eq!(p.head, vec![]);
        assert_eq!(p.period, vec![SpecEntry::Gamma(1, Label::In)]);
        let pt = p.to_gamma_point(&a).unwrap();
        assert_eq!(pt.coord(3), encode_gamma(&a, 1, &Label::In).unwrap());

        let p = parse_point_spec("(2|w+1),(0|out)*").unwrap();
        assert_eq!(
            p.head,
            vec![SpecEntry::Gamma(2, Label::Ord(parse_ordinal("w+1").unwrap()))]
        );
        assert_eq!(p.period, vec![SpecEntry::Gamma(0, Label::Out)]);

        // ordinals with parenthesized exponents survive the comma splitter
        let big = Ordinal::term(Ordinal::omega(), 1);
        let p = parse_point_spec("(3|w^(w)),(1|in)").unwrap();
        assert_eq!(
            p.head,
            vec![
                SpecEntry::Gamma(3, Label::Ord(big)),
                SpecEntry::Gamma(1, Label::In)
            ]
        );
    }

    #[test]
    fn spec_rejects_garbage() {
        assert!(matches!(parse_point_spec(""), Err(HierarchyError::Spec { .. })));
        assert!(matches!(parse_point_spec("1,,2"), Err(HierarchyError::Spec { .. })));
        assert!(matches!(parse_point_spec("x"), Err(HierarchyError::Spec { .. })));
        assert!(matches!(parse_point_spec("(1|wot)"), Err(HierarchyError::Spec { .. })));
        // gamma entries are not valid plain coordinates
        assert!(parse_point_spec("(1|in)").unwrap().to_point().is_err());
    }

    #[test]
    fn trace_serializes_with_named_fields() {
        let x = Point::periodic(vec![0], vec![0]);
        let y = gamma_point(&w(), vec![(1, Label::In)]);
        let tr = r_alpha_decide(&w(), &x, &y).unwrap();
        let v: serde_json::Value = serde_json::to_value(&tr).unwrap();
        assert_eq!(v["i0"], 0);
        assert_eq!(v["verdict"], "in");
        assert_eq!(v["steps"][0]["m"], 0);
        assert_eq!(v["steps"][0]["label"]["q"], "in");
    }
}
