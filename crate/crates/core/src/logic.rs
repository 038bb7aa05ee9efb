//! Formulas, sequents and natural-deduction proofs in sequent form, with
//! explicit structural rules.
//!
//! Contexts are ordered lists. Conjunction introduction and implication
//! elimination concatenate the contexts of their premises; implication
//! introduction discharges the last hypothesis; exchange and contraction act
//! on adjacent positions `i, i+1`; weakening appends its formula.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    And(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::And(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, x: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::And(a, b) => {
                side(f, a, matches!(**a, Formula::Imp(..)))?;
                f.write_str(" & ")?;
                side(f, b, !matches!(**b, Formula::Atom(_)))
            }
            Formula::Imp(a, b) => {
                side(f, a, matches!(**a, Formula::Imp(..)))?;
                f.write_str(" -> ")?;
                side(f, b, false)
            }
        }
    }
}

impl FromStr for Formula {
    type Err = crate::io::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::io::parse_formula(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// `Γ ⊢ A` with an ordered context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub hyps: Vec<Formula>,
    pub concl: Formula,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.hyps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{h}")?;
        }
        if !self.hyps.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.concl)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Proof {
    Ax(Formula),
    /// Swaps hypotheses `i` and `i+1`.
    Ex(usize, Box<Proof>),
    /// Appends a hypothesis.
    W(Formula, Box<Proof>),
    /// Merges equal hypotheses `i` and `i+1`.
    C(usize, Box<Proof>),
    AndI(Box<Proof>, Box<Proof>),
    AndE1(Box<Proof>),
    AndE2(Box<Proof>),
    /// Discharges the last hypothesis.
    ImpI(Box<Proof>),
    ImpE(Box<Proof>, Box<Proof>),
}

impl Proof {
    pub fn ax(a: Formula) -> Self {
        Proof::Ax(a)
    }
    pub fn ex(i: usize, p: Proof) -> Self {
        Proof::Ex(i, Box::new(p))
    }
    pub fn w(a: Formula, p: Proof) -> Self {
        Proof::W(a, Box::new(p))
    }
    pub fn c(i: usize, p: Proof) -> Self {
        Proof::C(i, Box::new(p))
    }
    pub fn and_i(p: Proof, q: Proof) -> Self {
        Proof::AndI(Box::new(p), Box::new(q))
    }
    pub fn and_e1(p: Proof) -> Self {
        Proof::AndE1(Box::new(p))
    }
    pub fn and_e2(p: Proof) -> Self {
        Proof::AndE2(Box::new(p))
    }
    pub fn imp_i(p: Proof) -> Self {
        Proof::ImpI(Box::new(p))
    }
    pub fn imp_e(p: Proof, q: Proof) -> Self {
        Proof::ImpE(Box::new(p), Box::new(q))
    }

    /// Rule name as used in the text syntax.
    pub fn rule_name(&self) -> &'static str {
        match self {
            Proof::Ax(_) => "ax",
            Proof::Ex(..) => "ex",
            Proof::W(..) => "w",
            Proof::C(..) => "c",
            Proof::AndI(..) => "andI",
            Proof::AndE1(_) => "andE1",
            Proof::AndE2(_) => "andE2",
            Proof::ImpI(_) => "impI",
            Proof::ImpE(..) => "impE",
        }
    }

    pub fn premises(&self) -> Vec<&Proof> {
        match self {
            Proof::Ax(_) => vec![],
            Proof::Ex(_, p) | Proof::W(_, p) | Proof::C(_, p) => vec![p],
            Proof::AndE1(p) | Proof::AndE2(p) | Proof::ImpI(p) => vec![p],
            Proof::AndI(p, q) | Proof::ImpE(p, q) => vec![p, q],
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.premises().iter().map(|p| p.depth()).max().unwrap_or(0)
    }

    /// Depth counting only logical rules; exchange, weakening and
    /// contraction steps add no height.
    pub fn logical_depth(&self) -> usize {
        let above = self.premises().iter().map(|p| p.logical_depth()).max().unwrap_or(0);
        match self {
            Proof::Ex(..) | Proof::W(..) | Proof::C(..) => above,
            _ => 1 + above,
        }
    }

    pub fn rule_count(&self) -> usize {
        1 + self.premises().iter().map(|p| p.rule_count()).sum::<usize>()
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proof::Ax(a) => write!(f, "ax({a})"),
            Proof::Ex(i, p) => write!(f, "ex({i}, {p})"),
            Proof::W(a, p) => write!(f, "w({a}, {p})"),
            Proof::C(i, p) => write!(f, "c({i}, {p})"),
            Proof::AndI(p, q) => write!(f, "andI({p}, {q})"),
            Proof::AndE1(p) => write!(f, "andE1({p})"),
            Proof::AndE2(p) => write!(f, "andE2({p})"),
            Proof::ImpI(p) => write!(f, "impI({p})"),
            Proof::ImpE(p, q) => write!(f, "impE({p}, {q})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule}: {reason} in `{subtree}`")]
pub struct ProofError {
    pub rule: &'static str,
    pub reason: String,
    pub subtree: String,
}

fn fail<T>(p: &Proof, reason: impl Into<String>) -> Result<T, ProofError> {
    Err(ProofError { rule: p.rule_name(), reason: reason.into(), subtree: p.to_string() })
}

/// Computes the end-sequent of a proof, rejecting ill-formed steps.
pub fn check_proof(p: &Proof) -> Result<Sequent, ProofError> {
    match p {
        Proof::Ax(a) => Ok(Sequent { hyps: vec![a.clone()], concl: a.clone() }),
        Proof::Ex(i, q) => {
            let mut s = check_proof(q)?;
            if i + 1 >= s.hyps.len() {
                return fail(p, format!("positions {i},{} out of range for {} hypotheses", i + 1, s.hyps.len()));
            }
            s.hyps.swap(*i, i + 1);
            Ok(s)
        }
        Proof::W(a, q) => {
            let mut s = check_proof(q)?;
            s.hyps.push(a.clone());
            Ok(s)
        }
        Proof::C(i, q) => {
            let mut s = check_proof(q)?;
            if i + 1 >= s.hyps.len() {
                return fail(p, format!("positions {i},{} out of range for {} hypotheses", i + 1, s.hyps.len()));
            }
            if s.hyps[*i] != s.hyps[i + 1] {
                return fail(p, format!("hypotheses `{}` and `{}` differ", s.hyps[*i], s.hyps[i + 1]));
            }
            s.hyps.remove(i + 1);
            Ok(s)
        }
        Proof::AndI(a, b) => {
            let (sa, sb) = (check_proof(a)?, check_proof(b)?);
            let mut hyps = sa.hyps;
            hyps.extend(sb.hyps);
            Ok(Sequent { hyps, concl: Formula::and(sa.concl, sb.concl) })
        }
        Proof::AndE1(q) | Proof::AndE2(q) => {
            let s = check_proof(q)?;
            match s.concl {
                Formula::And(l, r) => {
                    let concl = if matches!(p, Proof::AndE1(_)) { *l } else { *r };
                    Ok(Sequent { hyps: s.hyps, concl })
                }
                other => fail(p, format!("conclusion `{other}` is not a conjunction")),
            }
        }
        Proof::ImpI(q) => {
            let mut s = check_proof(q)?;
            match s.hyps.pop() {
                Some(a) => Ok(Sequent { hyps: s.hyps, concl: Formula::imp(a, s.concl) }),
                None => fail(p, "no hypothesis to discharge"),
            }
        }
        Proof::ImpE(a, b) => {
            let (sa, sb) = (check_proof(a)?, check_proof(b)?);
            match sa.concl {
                Formula::Imp(dom, cod) if *dom == sb.concl => {
                    let mut hyps = sa.hyps;
                    hyps.extend(sb.hyps);
                    Ok(Sequent { hyps, concl: *cod })
                }
                Formula::Imp(dom, _) => fail(p, format!("argument proves `{}`, expected `{dom}`", sb.concl)),
                other => fail(p, format!("conclusion `{other}` is not an implication")),
            }
        }
    }
}

/// Rule occurrences by name, and the number of nodes the translation
/// produces: exchange and axioms produce none, an implication introduction
/// produces one node, or two when it leaves hypotheses open.
pub fn proof_size_stats(p: &Proof) -> Result<(BTreeMap<&'static str, usize>, usize), ProofError> {
    fn walk(p: &Proof, rules: &mut BTreeMap<&'static str, usize>) -> Result<usize, ProofError> {
        *rules.entry(p.rule_name()).or_insert(0) += 1;
        let own = match p {
            Proof::Ax(_) | Proof::Ex(..) => 0,
            Proof::ImpI(q) => 1 + usize::from(check_proof(q)?.hyps.len() > 1),
            _ => 1,
        };
        let mut total = own;
        for q in p.premises() {
            total += walk(q, rules)?;
        }
        Ok(total)
    }
    check_proof(p)?;
    let mut rules = BTreeMap::new();
    let nodes = walk(p, &mut rules)?;
    Ok((rules, nodes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::atom("A")
    }
    fn b() -> Formula {
        Formula::atom("B")
    }

    /// `A & B |- B & A` by contraction over the two projections.
    pub(crate) fn commutativity() -> Proof {
        let ab = Formula::and(a(), b());
        Proof::c(0, Proof::and_i(Proof::and_e2(Proof::ax(ab.clone())), Proof::and_e1(Proof::ax(ab))))
    }

    #[test]
    fn axiom_sequent() {
        assert_eq!(check_proof(&Proof::ax(a())).unwrap().to_string(), "A |- A");
    }

    #[test]
    fn commutativity_sequent_and_size() {
        let p = commutativity();
        assert_eq!(check_proof(&p).unwrap().to_string(), "A & B |- B & A");
        let (rules, nodes) = proof_size_stats(&p).unwrap();
        assert_eq!(nodes, 4);
        assert_eq!(rules.values().sum::<usize>(), 6);
    }

    #[test]
    fn k_combinator_has_four_nodes() {
        let p = Proof::imp_i(Proof::imp_i(Proof::w(b(), Proof::ax(a()))));
        assert_eq!(check_proof(&p).unwrap().to_string(), "|- A -> B -> A");
        assert_eq!(proof_size_stats(&p).unwrap().1, 4);
    }

    #[test]
    fn projection_of_atom_is_rejected() {
        let err = check_proof(&Proof::and_e1(Proof::ax(a()))).unwrap_err();
        assert_eq!(err.rule, "andE1");
        assert!(err.subtree.contains("ax(A)"));
    }

    #[test]
    fn contraction_needs_equal_neighbours() {
        let p = Proof::c(0, Proof::and_i(Proof::ax(a()), Proof::ax(b())));
        assert!(check_proof(&p).is_err());
        assert!(check_proof(&Proof::ex(1, Proof::ax(a()))).is_err());
        assert!(check_proof(&Proof::imp_i(Proof::imp_i(Proof::ax(a())))).is_err());
    }

    #[test]
    fn formula_printing() {
        let f = Formula::imp(Formula::imp(a(), b()), Formula::and(a(), Formula::and(b(), a())));
        assert_eq!(f.to_string(), "(A -> B) -> A & (B & A)");
        assert_eq!(Formula::imp(a(), Formula::imp(b(), a())).to_string(), "A -> B -> A");
    }
}
