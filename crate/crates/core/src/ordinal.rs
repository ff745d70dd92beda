//! Ordinal notations below epsilon-zero in Cantor normal form, the label
//! alphabet `{in, out}` ∪ ordinals with its descending order, and a fixed
//! enumeration of the notations below a given bound.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Index into an enumeration of notations.
pub type Index = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("not a valid CNF notation: {0}")]
    InvalidCnf(String),
    #[error("no notations below zero")]
    EmptyDomain,
    #[error("index {index} out of range: only {size} notations below {bound}")]
    IndexOutOfRange { index: Index, size: u64, bound: String },
    #[error("{value} is not below {bound}")]
    NotBelow { value: String, bound: String },
    #[error("index arithmetic overflow")]
    Overflow,
}

/// An ordinal below epsilon-zero, written as a sum of terms `w^e * c` with
/// strictly decreasing exponents and positive coefficients. The empty sum
/// is zero.
///
/// The derived `Ord` is the ordinal order: CNF comparison is exactly
/// lexicographic comparison of the term sequences.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(Self::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Self::term(Self::nat(1), 1)
    }

    /// The single term `w^e * c`. A zero coefficient yields zero.
    pub fn term(exponent: Ordinal, coeff: u64) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(exponent, coeff)] }
        }
    }

    /// Builds a notation from raw terms, validating the CNF invariants.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        for (i, (e, c)) in terms.iter().enumerate() {
            if *c == 0 {
                return Err(OrdinalError::InvalidCnf("zero coefficient".into()));
            }
            if i > 0 && terms[i - 1].0 <= *e {
                return Err(OrdinalError::InvalidCnf(
                    "exponents must strictly decrease".into(),
                ));
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    /// Nonzero with no finite part, i.e. a multiple of omega.
    pub fn is_limit(&self) -> bool {
        match self.terms.last() {
            None => false,
            Some((e, _)) => !e.is_zero(),
        }
    }

    /// Splits `self` into its limit part and finite part.
    pub fn split_finite(&self) -> (Ordinal, u64) {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => {
                let head = Ordinal { terms: self.terms[..self.terms.len() - 1].to_vec() };
                (head, *c)
            }
            _ => (self.clone(), 0),
        }
    }

    /// `self + n` for a natural `n`.
    pub fn plus_nat(&self, n: u64) -> Ordinal {
        if n == 0 {
            return self.clone();
        }
        let (head, m) = self.split_finite();
        let mut terms = head.terms;
        terms.push((Self::zero(), m + n));
        Ordinal { terms }
    }

    /// `self = delta + w^e` with `e` the last exponent; requires a limit.
    fn peel_last_unit(&self) -> (Ordinal, Ordinal) {
        debug_assert!(self.is_limit());
        let mut terms = self.terms.clone();
        let (e, c) = terms.pop().expect("nonzero");
        if c > 1 {
            terms.push((e.clone(), c - 1));
        }
        (Ordinal { terms }, e)
    }

    /// Concatenation `self + suffix` where every exponent of `suffix` is
    /// strictly below every exponent of `self`.
    fn concat(&self, suffix: &Ordinal) -> Ordinal {
        if let (Some((e_last, _)), Some((e_first, _))) = (self.terms.last(), suffix.terms.first()) {
            debug_assert!(e_first < e_last, "concat would break CNF");
        }
        let mut terms = self.terms.clone();
        terms.extend(suffix.terms.iter().cloned());
        Ordinal { terms }
    }
}

/// Three-way CNF comparison; a total order extending the order on naturals.
pub fn cmp_ordinal(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

/// A label: an ordinal, or one of the two graph verdicts `in` / `out`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Label {
    In,
    Out,
    Ord(Ordinal),
}

impl Label {
    pub fn is_q(&self) -> bool {
        matches!(self, Label::In | Label::Out)
    }

    pub fn as_ordinal(&self) -> Option<&Ordinal> {
        match self {
            Label::Ord(o) => Some(o),
            _ => None,
        }
    }
}

/// The descending label order: ordinals compare by `<`, the two verdicts sit
/// below every ordinal, and each verdict is related only to itself.
pub fn triangle_lt(x: &Label, y: &Label) -> bool {
    match (x, y) {
        (Label::Ord(a), Label::Ord(b)) => a < b,
        (Label::In, Label::Ord(_)) | (Label::Out, Label::Ord(_)) => true,
        (Label::In, Label::In) | (Label::Out, Label::Out) => true,
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Pairing

/// Cantor pairing, errors on u64 overflow.
pub fn pair(a: u64, b: u64) -> Result<u64, OrdinalError> {
    let s = a.checked_add(b).ok_or(OrdinalError::Overflow)?;
    let s1 = s.checked_add(1).ok_or(OrdinalError::Overflow)?;
    let tri = if s % 2 == 0 { (s / 2).checked_mul(s1) } else { s.checked_mul(s1 / 2) };
    tri.ok_or(OrdinalError::Overflow)?.checked_add(b).ok_or(OrdinalError::Overflow)
}

/// Inverse of `pair`.
pub fn unpair(n: u64) -> (u64, u64) {
    // Largest w with w(w+1)/2 <= n, found by integer sqrt then adjusting.
    let mut w = (((8.0 * n as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    loop {
        let tri = w * (w + 1) / 2;
        if tri > n {
            w -= 1;
            continue;
        }
        if (w + 1) * (w + 2) / 2 <= n {
            w += 1;
            continue;
        }
        let b = n - tri;
        return (w - b, b);
    }
}

// ---------------------------------------------------------------------------
// Enumeration below a bound

enum Card {
    Finite(u64),
    Infinite,
}

fn card_below(a: &Ordinal) -> Card {
    match a.as_nat() {
        Some(m) => Card::Finite(m),
        None => Card::Infinite,
    }
}

/// The `k`-th notation strictly below `alpha`, in a fixed injective
/// enumeration that covers every notation below `alpha`.
///
/// The scheme is structural: finite bounds enumerate in natural order;
/// a bound with finite part `H + m` lists `H, H+1, ..., H+m-1` first and
/// then recurses into `H`; a limit `delta + w^e` interleaves the notations
/// below `delta` (even indices) with `delta + (below w^e)` (odd indices);
/// and below `w^e` the leading term and remainder are Cantor-paired.
pub fn enumerate_below(alpha: &Ordinal, k: Index) -> Result<Ordinal, OrdinalError> {
    if alpha.is_zero() {
        return Err(OrdinalError::EmptyDomain);
    }
    if let Some(m) = alpha.as_nat() {
        if k < m {
            return Ok(Ordinal::nat(k));
        }
        return Err(OrdinalError::IndexOutOfRange { index: k, size: m, bound: alpha.to_string() });
    }
    let (head, m) = alpha.split_finite();
    if m > 0 {
        if k < m {
            return Ok(head.plus_nat(k));
        }
        return enumerate_below(&head, k - m);
    }
    // alpha is a limit: alpha = delta + w^e
    let (delta, e) = alpha.peel_last_unit();
    if delta.is_zero() {
        enum_below_pow(&e, k)
    } else if k % 2 == 0 {
        enumerate_below(&delta, k / 2)
    } else {
        Ok(delta.concat(&enum_below_pow(&e, k / 2)?))
    }
}

/// The `k`-th notation below `w^e`, for `e >= 1`.
fn enum_below_pow(e: &Ordinal, k: Index) -> Result<Ordinal, OrdinalError> {
    debug_assert!(!e.is_zero());
    if k == 0 {
        return Ok(Ordinal::zero());
    }
    let k1 = k - 1;
    let (a, j) = match card_below(e) {
        Card::Finite(m) => (k1 % m, k1 / m),
        Card::Infinite => unpair(k1),
    };
    let e1 = enumerate_below(e, a)?;
    if e1.is_zero() {
        return Ok(Ordinal::nat(j.checked_add(1).ok_or(OrdinalError::Overflow)?));
    }
    let (u, v) = unpair(j);
    let rest = enum_below_pow(&e1, v)?;
    Ok(Ordinal::term(e1, u + 1).concat(&rest))
}

/// Inverse of `enumerate_below`: the index of `beta` in the enumeration
/// below `alpha`. Errors unless `beta < alpha`.
pub fn index_below(alpha: &Ordinal, beta: &Ordinal) -> Result<Index, OrdinalError> {
    if beta >= alpha {
        return Err(OrdinalError::NotBelow {
            value: beta.to_string(),
            bound: alpha.to_string(),
        });
    }
    if let Some(_m) = alpha.as_nat() {
        return Ok(beta.as_nat().expect("below a finite bound"));
    }
    let (head, m) = alpha.split_finite();
    if m > 0 {
        if *beta >= head {
            let (bh, bm) = beta.split_finite();
            debug_assert!(bh == head && bm < m);
            return Ok(bm);
        }
        return Ok(index_below(&head, beta)?.checked_add(m).ok_or(OrdinalError::Overflow)?);
    }
    let (delta, e) = alpha.peel_last_unit();
    if delta.is_zero() {
        return index_below_pow(&e, beta);
    }
    if *beta < delta {
        return index_below(&delta, beta)?.checked_mul(2).ok_or(OrdinalError::Overflow);
    }
    // beta = delta + rest with rest < w^e: the CNF of beta extends delta's.
    debug_assert!(beta.terms.starts_with(&delta.terms));
    let rest = Ordinal { terms: beta.terms[delta.terms.len()..].to_vec() };
    let idx = index_below_pow(&e, &rest)?;
    idx.checked_mul(2).and_then(|x| x.checked_add(1)).ok_or(OrdinalError::Overflow)
}

fn index_below_pow(e: &Ordinal, beta: &Ordinal) -> Result<Index, OrdinalError> {
    if beta.is_zero() {
        return Ok(0);
    }
    let (e1, c) = beta.terms[0].clone();
    let rest = Ordinal { terms: beta.terms[1..].to_vec() };
    let a = index_below(e, &e1)?;
    let j = if e1.is_zero() {
        debug_assert!(rest.is_zero());
        c - 1
    } else {
        pair(c - 1, index_below_pow(&e1, &rest)?)?
    };
    let k1 = match card_below(e) {
        Card::Finite(m) => j.checked_mul(m).and_then(|x| x.checked_add(a)).ok_or(OrdinalError::Overflow)?,
        Card::Infinite => pair(a, j)?,
    };
    k1.checked_add(1).ok_or(OrdinalError::Overflow)
}

// ---------------------------------------------------------------------------
// Text grammar

/// Grammar: `0`, `w`, `w*c`, `w^E`, `w^E*c`, `c`, and `+`-separated sums with
/// strictly decreasing exponents. `E` is a natural, `w`, or a parenthesized
/// notation.
pub fn parse_ordinal(text: &str) -> Result<Ordinal, OrdinalError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let o = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    Ok(o)
}

pub fn format_ordinal(o: &Ordinal) -> String {
    o.to_string()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> OrdinalError {
        OrdinalError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, OrdinalError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| OrdinalError::Parse { pos: start, msg: "number too large".into() })
    }

    fn expr(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut terms: Vec<(Ordinal, u64)> = Vec::new();
        loop {
            let term_pos = self.pos;
            let (e, c) = self.term()?;
            if c == 0 {
                // "0" is only valid standing alone.
                if !terms.is_empty() || self.peek() == Some(b'+') {
                    return Err(OrdinalError::Parse {
                        pos: term_pos,
                        msg: "zero term in a sum".into(),
                    });
                }
                return Ok(Ordinal::zero());
            }
            if let Some((prev, _)) = terms.last() {
                if *prev <= e {
                    return Err(OrdinalError::Parse {
                        pos: term_pos,
                        msg: "not CNF: exponents must strictly decrease".into(),
                    });
                }
            }
            terms.push((e, c));
            self.skip_ws();
            if !self.eat(b'+') {
                break;
            }
            self.skip_ws();
        }
        Ok(Ordinal { terms })
    }

    /// One `w^E*c` style term, returned as (exponent, coefficient).
    fn term(&mut self) -> Result<(Ordinal, u64), OrdinalError> {
        if self.eat(b'w') {
            let exponent = if self.eat(b'^') { self.atom()? } else { Ordinal::nat(1) };
            let coeff = if self.eat(b'*') {
                let cpos = self.pos;
                let c = self.number()?;
                if c == 0 {
                    return Err(OrdinalError::Parse { pos: cpos, msg: "zero coefficient".into() });
                }
                c
            } else {
                1
            };
            Ok((exponent, coeff))
        } else if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let n = self.number()?;
            Ok((Ordinal::zero(), n))
        } else {
            Err(self.err("expected 'w' or a number"))
        }
    }

    fn atom(&mut self) -> Result<Ordinal, OrdinalError> {
        if self.eat(b'(') {
            self.skip_ws();
            let o = self.expr()?;
            self.skip_ws();
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            Ok(o)
        } else if self.eat(b'w') {
            Ok(Ordinal::omega())
        } else {
            let n = self.number()?;
            Ok(Ordinal::nat(n))
        }
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            if let Some(n) = e.as_nat() {
                if n >= 2 {
                    write!(f, "^{n}")?;
                }
            } else if *e == Ordinal::omega() {
                write!(f, "^w")?;
            } else {
                write!(f, "^({e})")?;
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordinal(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_ordinal(&text).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LabelRepr {
    Q { q: String },
    Ord { ord: String },
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Label::In => LabelRepr::Q { q: "in".into() },
            Label::Out => LabelRepr::Q { q: "out".into() },
            Label::Ord(o) => LabelRepr::Ord { ord: o.to_string() },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match LabelRepr::deserialize(d)? {
            LabelRepr::Q { q } => match q.as_str() {
                "in" => Ok(Label::In),
                "out" => Ok(Label::Out),
                other => Err(D::Error::custom(format!("unknown verdict {other:?}"))),
            },
            LabelRepr::Ord { ord } => parse_ordinal(&ord).map(Label::Ord).map_err(D::Error::custom),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::In => write!(f, "in"),
            Label::Out => write!(f, "out"),
            Label::Ord(o) => write!(f, "{o}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn o(s: &str) -> Ordinal {
        parse_ordinal(s).unwrap()
    }

    #[test]
    fn cmp_examples() {
        assert_eq!(cmp_ordinal(&Ordinal::zero(), &Ordinal::zero()), Ordering::Equal);
        assert_eq!(cmp_ordinal(&Ordinal::omega(), &Ordinal::nat(3)), Ordering::Greater);
        assert_eq!(cmp_ordinal(&o("w^2*2+1"), &o("w^2*3")), Ordering::Less);
    }

    #[test]
    fn triangle_examples() {
        assert!(triangle_lt(&Label::Ord(Ordinal::nat(3)), &Label::Ord(Ordinal::nat(5))));
        assert!(triangle_lt(&Label::In, &Label::Ord(Ordinal::zero())));
        assert!(!triangle_lt(&Label::In, &Label::Out));
        assert!(triangle_lt(&Label::Out, &Label::Out));
        assert!(!triangle_lt(&Label::Ord(Ordinal::zero()), &Label::In));
    }

    #[test]
    fn parse_format_examples() {
        for s in ["w^2*3+w+5", "0", "w", "w*2", "w^w", "w^(w+1)*4+w^3+2"] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(o("0").terms().len(), 0);
        let err = parse_ordinal("w+w").unwrap_err();
        assert!(matches!(err, OrdinalError::Parse { .. }), "{err}");
        assert!(parse_ordinal("w^2*0").is_err());
        assert!(parse_ordinal("3+w").is_err());
        assert!(parse_ordinal("").is_err());
    }

    #[test]
    fn pair_round_trip() {
        for n in 0..10_000u64 {
            let (a, b) = unpair(n);
            assert_eq!(pair(a, b).unwrap(), n);
        }
    }

    #[test]
    fn enumerate_below_omega_is_identity() {
        for k in 0..200 {
            assert_eq!(enumerate_below(&Ordinal::omega(), k).unwrap(), Ordinal::nat(k));
        }
    }

    #[test]
    fn enumerate_below_finite() {
        assert_eq!(enumerate_below(&Ordinal::nat(3), 2).unwrap(), Ordinal::nat(2));
        assert!(matches!(
            enumerate_below(&Ordinal::nat(3), 3),
            Err(OrdinalError::IndexOutOfRange { .. })
        ));
        assert!(matches!(enumerate_below(&Ordinal::zero(), 0), Err(OrdinalError::EmptyDomain)));
    }

    #[test]
    fn enumerate_injective_below_and_invertible() {
        for alpha in ["w", "w*2", "w^2", "w^3+w", "w^2+w*2+4", "w^w"] {
            let alpha = o(alpha);
            let mut seen = std::collections::HashSet::new();
            for k in 0..500u64 {
                let beta = enumerate_below(&alpha, k).unwrap();
                assert!(beta < alpha, "{beta} not below {alpha}");
                assert!(seen.insert(beta.clone()), "duplicate {beta} below {alpha}");
                assert_eq!(index_below(&alpha, &beta).unwrap(), k);
            }
        }
    }

    #[test]
    fn enumeration_covers_small_notations() {
        // Every notation below w^2 with small parts shows up at some index.
        let alpha = o("w^2");
        for a in 0..4u64 {
            for b in 0..4u64 {
                let beta = if a == 0 { Ordinal::nat(b) } else { Ordinal::term(Ordinal::nat(1), a).plus_nat(b) };
                let k = index_below(&alpha, &beta).unwrap();
                assert_eq!(enumerate_below(&alpha, k).unwrap(), beta);
            }
        }
    }

    #[test]
    fn label_json_round_trip() {
        let labels = [Label::In, Label::Out, Label::Ord(o("w^2+1"))];
        let texts: Vec<String> =
            labels.iter().map(|l| serde_json::to_string(l).unwrap()).collect();
        assert_eq!(texts[0], r#"{"q":"in"}"#);
        assert_eq!(texts[1], r#"{"q":"out"}"#);
        assert_eq!(texts[2], r#"{"ord":"w^2+1"}"#);
        for (l, t) in labels.iter().zip(&texts) {
            let back: Label = serde_json::from_str(t).unwrap();
            assert_eq!(&back, l);
        }
    }

    /// Strategy for ordinals below w^3 with small coefficients.
    fn small_ordinal() -> impl Strategy<Value = Ordinal> {
        (0u64..4, 0u64..4, 0u64..4).prop_map(|(a, b, c)| {
            let mut terms = Vec::new();
            if a > 0 {
                terms.push((Ordinal::nat(2), a));
            }
            if b > 0 {
                terms.push((Ordinal::nat(1), b));
            }
            if c > 0 {
                terms.push((Ordinal::zero(), c));
            }
            Ordinal { terms }
        })
    }

    proptest! {
        #[test]
        fn order_is_total_and_transitive(a in small_ordinal(), b in small_ordinal(), c in small_ordinal()) {
            let ab = cmp_ordinal(&a, &b);
            prop_assert_eq!(ab, cmp_ordinal(&b, &a).reverse());
            if ab == Ordering::Less && cmp_ordinal(&b, &c) == Ordering::Less {
                prop_assert_eq!(cmp_ordinal(&a, &c), Ordering::Less);
            }
        }

        #[test]
        fn format_parse_identity(a in small_ordinal()) {
            prop_assert_eq!(parse_ordinal(&a.to_string()).unwrap(), a);
        }

        #[test]
        fn descent_chains_terminate(a in small_ordinal(), ks in proptest::collection::vec(0u64..64, 64)) {
            // Repeatedly pick a notation below the current one; the chain
            // strictly decreases and must die out well within the fuel.
            let mut cur = a;
            let mut steps = 0usize;
            while !cur.is_zero() {
                let k = ks[steps % ks.len()];
                let next = match enumerate_below(&cur, k) {
                    Ok(n) => n,
                    Err(OrdinalError::IndexOutOfRange { .. }) => enumerate_below(&cur, 0).unwrap(),
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                };
                prop_assert!(next < cur);
                cur = next;
                steps += 1;
                prop_assert!(steps < 10_000, "descent chain did not terminate");
            }
        }
    }
}
