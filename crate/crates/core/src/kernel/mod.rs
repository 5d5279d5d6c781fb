//! Proof trees of the single-succedent sequent system, with checked
//! construction and a bottom-up re-audit.
//!
//! A [`Proof`] node stores a [`Rule`] (the rule name plus its explicit
//! position data), its premises and its cached conclusion. Every constructor
//! checks the side conditions of the schema, so a `Proof` value is valid by
//! construction; [`validate`] recomputes everything from the leaves and is
//! used on proofs coming from outside.

pub mod ancestry;
pub mod generate;
pub mod normal;
pub mod search;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::logic::{splice, Formula, FormulaKind, Sequent};

pub use ancestry::{
    ancestors, classify_contraction, cluster_of, descendant, ties, ties_all, trace_down, w_paths,
    ContractionStatus, OccurrenceRef, Slot,
};
pub use generate::generate_proof;
pub use normal::{is_tailless, is_w_normal};
pub use search::search_cutfree;

/// Which component of a binary formula a rule works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn from_index(n: u64) -> Option<Side> {
        match n {
            1 => Some(Side::First),
            2 => Some(Side::Second),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }
}

/// A rule application without its premises.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `f ⊢ f`
    Ax(Formula),
    /// `⊥ ⊢ f`
    BotAx(Formula),
    /// Interchange of antecedent positions `pos` and `pos + 1`.
    C(usize),
    /// Contraction of the equal formulas at `pos` and `pos + 1`.
    W(usize),
    /// Thinning: inserts the formula at `pos`.
    K(usize, Formula),
    /// Cut on the right premise's antecedent position.
    Cut(usize),
    /// `X` at `pos` becomes `X ∧ other` (first) or `other ∧ X` (second).
    AndL(usize, Side, Formula),
    AndR,
    /// The premises differ only at `pos`.
    OrL(usize),
    /// Succedent `X` becomes `X ∨ other` (first) or `other ∨ X` (second).
    OrR(Side, Formula),
    /// `Δ ⊢ A` and `Θ, B, Γ ⊢ C` with `B` at `pos` give `Θ, Δ, A→B, Γ ⊢ C`.
    ImpL(usize),
    /// Discharges antecedent position 0.
    ImpR,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Ax(_) => "ax",
            Rule::BotAx(_) => "botax",
            Rule::C(_) => "c",
            Rule::W(_) => "w",
            Rule::K(..) => "k",
            Rule::Cut(_) => "cut",
            Rule::AndL(..) => "andl",
            Rule::AndR => "andr",
            Rule::OrL(_) => "orl",
            Rule::OrR(..) => "orr",
            Rule::ImpL(_) => "impl",
            Rule::ImpR => "impr",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::Ax(_) | Rule::BotAx(_) => 0,
            Rule::C(_)
            | Rule::W(_)
            | Rule::K(..)
            | Rule::AndL(..)
            | Rule::OrR(..)
            | Rule::ImpR => 1,
            Rule::Cut(_) | Rule::AndR | Rule::OrL(_) | Rule::ImpL(_) => 2,
        }
    }

    pub fn is_axiom(&self) -> bool {
        self.arity() == 0
    }
}

/// Path from the root to a node: the sequence of premise indices taken.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> NodePath {
        NodePath(Vec::new())
    }

    pub fn child(&self, i: usize) -> NodePath {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }

    pub fn parent(&self) -> Option<NodePath> {
        if self.0.is_empty() {
            None
        } else {
            Some(NodePath(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("{rule} expects {expected} premises, got {got}")]
    Arity { rule: &'static str, expected: usize, got: usize },
    #[error("{rule} position {pos} out of range for premise antecedent of length {len}")]
    Position { rule: &'static str, pos: usize, len: usize },
    #[error("W premise formulas at {pos}, {} differ: {a} vs {b}", pos + 1)]
    WMismatch { pos: usize, a: Formula, b: Formula },
    #[error("cut formula {found} at {pos} differs from left succedent {expected}")]
    CutMismatch { pos: usize, expected: Formula, found: Formula },
    #[error("AndR contexts differ: {left} vs {right}")]
    AndRContexts { left: Sequent, right: Sequent },
    #[error("OrL premises differ outside position {pos}: {left} vs {right}")]
    OrLContexts { pos: usize, left: Sequent, right: Sequent },
    #[error("OrL premise antecedents have different lengths")]
    OrLLength,
    #[error("ImpR premise antecedent is empty")]
    ImpREmpty,
    #[error("cached endsequent {cached} differs from recomputed {computed}")]
    CacheMismatch { cached: Sequent, computed: Sequent },
    #[error("at {path}: {source}")]
    At { path: NodePath, source: Box<KernelError> },
    #[error("path {0} does not address a node")]
    BadPath(NodePath),
    #[error("path {path} addresses a {found} node, expected {expected}")]
    WrongRule { path: NodePath, found: &'static str, expected: &'static str },
    #[error("occurrence {0} is out of range")]
    BadOccurrence(String),
    #[error("proof is not W-normal")]
    NotWNormal,
}

impl KernelError {
    /// The innermost error, with any path wrappers removed.
    pub fn root_cause(&self) -> &KernelError {
        match self {
            KernelError::At { source, .. } => source.root_cause(),
            e => e,
        }
    }
}

/// Counts cached on every node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub nodes: u64,
    pub cuts: u64,
    /// Maximal degree of a cut formula, 0 if cut-free.
    pub degree: usize,
    pub w: u64,
    pub c: u64,
    pub k: u64,
    pub height: usize,
    /// Some formula anywhere in the tree contains `->`.
    pub has_imp: bool,
}

#[derive(Debug)]
struct Node {
    rule: Rule,
    premises: Vec<Proof>,
    end: Sequent,
    stats: Stats,
}

/// An immutable, cheaply clonable proof tree.
#[derive(Clone)]
pub struct Proof(Arc<Node>);

impl PartialEq for Proof {
    fn eq(&self, other: &Proof) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.stats == other.0.stats
                && self.0.rule == other.0.rule
                && self.0.end == other.0.end
                && self.0.premises == other.0.premises)
    }
}

impl Eq for Proof {}

impl fmt::Debug for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::io::print_proof_compact(self))
    }
}

/// Computes the conclusion of `rule` from premise conclusions.
pub fn conclude(rule: &Rule, prem: &[&Sequent]) -> Result<Sequent, KernelError> {
    let name = rule.name();
    if prem.len() != rule.arity() {
        return Err(KernelError::Arity { rule: name, expected: rule.arity(), got: prem.len() });
    }
    let pos_err = |pos: usize, len: usize| KernelError::Position { rule: name, pos, len };
    match rule {
        Rule::Ax(f) => Ok(Sequent::new(vec![f.clone()], f.clone())),
        Rule::BotAx(f) => Ok(Sequent::new(vec![Formula::bot()], f.clone())),
        Rule::C(pos) => {
            let s = prem[0];
            if pos + 1 >= s.ant.len() {
                return Err(pos_err(*pos, s.ant.len()));
            }
            let mut ant = s.ant.clone();
            ant.swap(*pos, pos + 1);
            Ok(Sequent::new(ant, s.succ.clone()))
        }
        Rule::W(pos) => {
            let s = prem[0];
            if pos + 1 >= s.ant.len() {
                return Err(pos_err(*pos, s.ant.len()));
            }
            if s.ant[*pos] != s.ant[pos + 1] {
                return Err(KernelError::WMismatch {
                    pos: *pos,
                    a: s.ant[*pos].clone(),
                    b: s.ant[pos + 1].clone(),
                });
            }
            let mut ant = s.ant.clone();
            ant.remove(pos + 1);
            Ok(Sequent::new(ant, s.succ.clone()))
        }
        Rule::K(pos, f) => {
            let s = prem[0];
            if *pos > s.ant.len() {
                return Err(pos_err(*pos, s.ant.len()));
            }
            let mut ant = s.ant.clone();
            ant.insert(*pos, f.clone());
            Ok(Sequent::new(ant, s.succ.clone()))
        }
        Rule::Cut(pos) => {
            let (l, r) = (prem[0], prem[1]);
            if *pos >= r.ant.len() {
                return Err(pos_err(*pos, r.ant.len()));
            }
            if r.ant[*pos] != l.succ {
                return Err(KernelError::CutMismatch {
                    pos: *pos,
                    expected: l.succ.clone(),
                    found: r.ant[*pos].clone(),
                });
            }
            let ant = splice(&r.ant, *pos, &l.ant, 1).expect("checked range");
            Ok(Sequent::new(ant, r.succ.clone()))
        }
        Rule::AndL(pos, side, other) => {
            let s = prem[0];
            if *pos >= s.ant.len() {
                return Err(pos_err(*pos, s.ant.len()));
            }
            let x = s.ant[*pos].clone();
            let mut ant = s.ant.clone();
            ant[*pos] = match side {
                Side::First => Formula::and(x, other.clone()),
                Side::Second => Formula::and(other.clone(), x),
            };
            Ok(Sequent::new(ant, s.succ.clone()))
        }
        Rule::AndR => {
            let (l, r) = (prem[0], prem[1]);
            if l.ant != r.ant {
                return Err(KernelError::AndRContexts { left: l.clone(), right: r.clone() });
            }
            Ok(Sequent::new(l.ant.clone(), Formula::and(l.succ.clone(), r.succ.clone())))
        }
        Rule::OrL(pos) => {
            let (l, r) = (prem[0], prem[1]);
            if l.ant.len() != r.ant.len() {
                return Err(KernelError::OrLLength);
            }
            if *pos >= l.ant.len() {
                return Err(pos_err(*pos, l.ant.len()));
            }
            let same_ctx = l.ant[..*pos] == r.ant[..*pos] && l.ant[pos + 1..] == r.ant[pos + 1..];
            if !same_ctx || l.succ != r.succ {
                return Err(KernelError::OrLContexts {
                    pos: *pos,
                    left: l.clone(),
                    right: r.clone(),
                });
            }
            let mut ant = l.ant.clone();
            ant[*pos] = Formula::or(l.ant[*pos].clone(), r.ant[*pos].clone());
            Ok(Sequent::new(ant, l.succ.clone()))
        }
        Rule::OrR(side, other) => {
            let s = prem[0];
            let succ = match side {
                Side::First => Formula::or(s.succ.clone(), other.clone()),
                Side::Second => Formula::or(other.clone(), s.succ.clone()),
            };
            Ok(Sequent::new(s.ant.clone(), succ))
        }
        Rule::ImpL(pos) => {
            let (l, r) = (prem[0], prem[1]);
            if *pos >= r.ant.len() {
                return Err(pos_err(*pos, r.ant.len()));
            }
            let b = r.ant[*pos].clone();
            let mut ins = l.ant.clone();
            ins.push(Formula::imp(l.succ.clone(), b));
            let ant = splice(&r.ant, *pos, &ins, 1).expect("checked range");
            Ok(Sequent::new(ant, r.succ.clone()))
        }
        Rule::ImpR => {
            let s = prem[0];
            if s.ant.is_empty() {
                return Err(KernelError::ImpREmpty);
            }
            Ok(Sequent::new(s.ant[1..].to_vec(), Formula::imp(s.ant[0].clone(), s.succ.clone())))
        }
    }
}

fn stats_for(rule: &Rule, premises: &[Proof], end: &Sequent) -> Stats {
    let mut st = Stats { nodes: 1, ..Stats::default() };
    for p in premises {
        let s = p.stats();
        st.nodes = st.nodes.saturating_add(s.nodes);
        st.cuts = st.cuts.saturating_add(s.cuts);
        st.w = st.w.saturating_add(s.w);
        st.c = st.c.saturating_add(s.c);
        st.k = st.k.saturating_add(s.k);
        st.degree = st.degree.max(s.degree);
        st.height = st.height.max(s.height);
        st.has_imp |= s.has_imp;
    }
    st.height += 1;
    st.has_imp |= end.contains_imp();
    match rule {
        Rule::Cut(_) => {
            st.cuts += 1;
            st.degree = st.degree.max(premises[0].end().succ.degree());
            st.has_imp |= premises[0].end().succ.contains_imp();
        }
        Rule::W(_) => st.w += 1,
        Rule::C(_) => st.c += 1,
        Rule::K(..) => st.k += 1,
        _ => {}
    }
    st
}

impl Proof {
    /// Builds a node, checking the schema's side conditions.
    pub fn build(rule: Rule, premises: Vec<Proof>) -> Result<Proof, KernelError> {
        let end = {
            let seqs: Vec<&Sequent> = premises.iter().map(|p| p.end()).collect();
            conclude(&rule, &seqs)?
        };
        let stats = stats_for(&rule, &premises, &end);
        Ok(Proof(Arc::new(Node { rule, premises, end, stats })))
    }

    pub fn ax(f: Formula) -> Proof {
        Proof::build(Rule::Ax(f), vec![]).expect("axiom")
    }

    pub fn botax(f: Formula) -> Proof {
        Proof::build(Rule::BotAx(f), vec![]).expect("axiom")
    }

    pub fn c(pos: usize, sub: Proof) -> Result<Proof, KernelError> {
        Proof::build(Rule::C(pos), vec![sub])
    }

    pub fn w(pos: usize, sub: Proof) -> Result<Proof, KernelError> {
        Proof::build(Rule::W(pos), vec![sub])
    }

    pub fn k(pos: usize, f: Formula, sub: Proof) -> Result<Proof, KernelError> {
        Proof::build(Rule::K(pos, f), vec![sub])
    }

    pub fn cut(pos: usize, left: Proof, right: Proof) -> Result<Proof, KernelError> {
        Proof::build(Rule::Cut(pos), vec![left, right])
    }

    pub fn and_l(pos: usize, side: Side, other: Formula, sub: Proof) -> Result<Proof, KernelError> {
        Proof::build(Rule::AndL(pos, side, other), vec![sub])
    }

    pub fn and_r(left: Proof, right: Proof) -> Result<Proof, KernelError> {
        Proof::build(Rule::AndR, vec![left, right])
    }

    pub fn or_l(pos: usize, left: Proof, right: Proof) -> Result<Proof, KernelError> {
        Proof::build(Rule::OrL(pos), vec![left, right])
    }

    pub fn or_r(side: Side, other: Formula, sub: Proof) -> Result<Proof, KernelError> {
        Proof::build(Rule::OrR(side, other), vec![sub])
    }

    pub fn imp_l(pos: usize, left: Proof, right: Proof) -> Result<Proof, KernelError> {
        Proof::build(Rule::ImpL(pos), vec![left, right])
    }

    pub fn imp_r(sub: Proof) -> Result<Proof, KernelError> {
        Proof::build(Rule::ImpR, vec![sub])
    }

    pub fn rule(&self) -> &Rule {
        &self.0.rule
    }

    pub fn premises(&self) -> &[Proof] {
        &self.0.premises
    }

    pub fn premise(&self, i: usize) -> &Proof {
        &self.0.premises[i]
    }

    pub fn end(&self) -> &Sequent {
        &self.0.end
    }

    pub fn stats(&self) -> &Stats {
        &self.0.stats
    }

    pub fn degree(&self) -> usize {
        self.0.stats.degree
    }

    pub fn is_cut_free(&self) -> bool {
        self.0.stats.cuts == 0
    }

    pub fn ptr_eq(&self, other: &Proof) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Same rule, new premises.
    pub fn with_premises(&self, premises: Vec<Proof>) -> Result<Proof, KernelError> {
        Proof::build(self.rule().clone(), premises)
    }

    pub fn subproof_at(&self, path: &NodePath) -> Result<&Proof, KernelError> {
        let mut cur = self;
        for &i in &path.0 {
            cur = cur.premises().get(i).ok_or_else(|| KernelError::BadPath(path.clone()))?;
        }
        Ok(cur)
    }

    /// Replaces the subproof at `path`, rebuilding (and rechecking) the spine.
    pub fn replace_at(&self, path: &NodePath, new: Proof) -> Result<Proof, KernelError> {
        fn go(p: &Proof, path: &[usize], new: Proof, full: &NodePath) -> Result<Proof, KernelError> {
            match path.split_first() {
                None => Ok(new),
                Some((&i, rest)) => {
                    let child = p.premises().get(i).ok_or_else(|| KernelError::BadPath(full.clone()))?;
                    let mut prem = p.premises().to_vec();
                    prem[i] = go(child, rest, new, full)?;
                    p.with_premises(prem)
                }
            }
        }
        go(self, &path.0, new, path)
    }

    /// Paths of all nodes, in pre-order.
    pub fn paths(&self) -> Vec<NodePath> {
        let mut out = Vec::new();
        let mut stack = vec![(self, NodePath::root())];
        while let Some((p, path)) = stack.pop() {
            for (i, q) in p.premises().iter().enumerate().rev() {
                stack.push((q, path.child(i)));
            }
            out.push(path);
        }
        out
    }

    /// Paths of all cut nodes, in post-order (premises before conclusions,
    /// left before right).
    pub fn cut_paths(&self) -> Vec<NodePath> {
        fn go(p: &Proof, path: NodePath, out: &mut Vec<NodePath>) {
            if p.stats().cuts == 0 {
                return;
            }
            for (i, q) in p.premises().iter().enumerate() {
                go(q, path.child(i), out);
            }
            if matches!(p.rule(), Rule::Cut(_)) {
                out.push(path);
            }
        }
        let mut out = Vec::new();
        go(self, NodePath::root(), &mut out);
        out
    }

    /// Leaf axioms, left to right.
    pub fn leaves(&self) -> Vec<Rule> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            if p.rule().is_axiom() {
                out.push(p.rule().clone());
            }
            for q in p.premises().iter().rev() {
                stack.push(q);
            }
        }
        out
    }
}

/// Re-audits a proof bottom-up: every node must instantiate its schema and
/// its cached conclusion must equal the recomputed one.
pub fn validate(p: &Proof) -> Result<&Proof, KernelError> {
    fn go(p: &Proof, path: &NodePath) -> Result<(), KernelError> {
        for (i, q) in p.premises().iter().enumerate() {
            go(q, &path.child(i))?;
        }
        let seqs: Vec<&Sequent> = p.premises().iter().map(|q| q.end()).collect();
        let wrap = |e: KernelError| KernelError::At { path: path.clone(), source: Box::new(e) };
        let computed = conclude(p.rule(), &seqs).map_err(wrap)?;
        if &computed != p.end() {
            return Err(wrap(KernelError::CacheMismatch { cached: p.end().clone(), computed }));
        }
        Ok(())
    }
    go(p, &NodePath::root())?;
    Ok(p)
}

/// The formula `A` of `A → B`, if `f` is an implication.
pub fn imp_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f.kind() {
        FormulaKind::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn axiom_endsequent() {
        let a = Proof::ax(p());
        assert_eq!(a.end().to_string(), "p |- p");
        assert!(validate(&a).is_ok());
    }

    #[test]
    fn w_on_short_antecedent_is_rejected() {
        let e = Proof::w(0, Proof::ax(p())).unwrap_err();
        assert!(matches!(e, KernelError::Position { rule: "w", pos: 0, len: 1 }));
    }

    #[test]
    fn w_on_different_formulas_is_rejected() {
        let pr = Proof::k(0, q(), Proof::ax(p())).unwrap();
        assert!(matches!(Proof::w(0, pr), Err(KernelError::WMismatch { .. })));
    }

    #[test]
    fn cut_of_axioms() {
        let c = Proof::cut(0, Proof::ax(p()), Proof::ax(p())).unwrap();
        assert_eq!(c.end().to_string(), "p |- p");
        assert_eq!(c.stats().cuts, 1);
        assert_eq!(c.degree(), 0);
    }

    #[test]
    fn cut_mismatch() {
        assert!(matches!(
            Proof::cut(0, Proof::ax(p()), Proof::ax(q())),
            Err(KernelError::CutMismatch { .. })
        ));
    }

    #[test]
    fn connective_rules() {
        let and_l = Proof::and_l(0, Side::Second, q(), Proof::ax(p())).unwrap();
        assert_eq!(and_l.end().to_string(), "(q & p) |- p");
        let left = Proof::and_l(0, Side::Second, p(), Proof::ax(q())).unwrap();
        let right = Proof::and_l(0, Side::First, q(), Proof::ax(p())).unwrap();
        let andr = Proof::and_r(left, right).unwrap();
        assert_eq!(andr.end().to_string(), "(p & q) |- (q & p)");
        assert!(matches!(
            Proof::and_r(Proof::ax(p()), Proof::ax(q())),
            Err(KernelError::AndRContexts { .. })
        ));
        let imp = Proof::imp_r(Proof::ax(p())).unwrap();
        assert_eq!(imp.end().to_string(), "|- (p -> p)");
        let il = Proof::imp_l(0, Proof::ax(p()), Proof::ax(q())).unwrap();
        assert_eq!(il.end().to_string(), "p, (p -> q) |- q");
        let orl = Proof::or_l(
            0,
            Proof::or_r(Side::First, q(), Proof::ax(p())).unwrap(),
            Proof::or_r(Side::Second, p(), Proof::ax(q())).unwrap(),
        )
        .unwrap();
        assert_eq!(orl.end().to_string(), "(p | q) |- (p | q)");
    }

    #[test]
    fn imp_r_needs_antecedent() {
        let pr = Proof::imp_r(Proof::imp_r(Proof::ax(p())).unwrap());
        assert!(matches!(pr, Err(KernelError::ImpREmpty)));
    }

    #[test]
    fn replace_at_rechecks() {
        let c = Proof::cut(0, Proof::ax(p()), Proof::ax(p())).unwrap();
        let path = NodePath(vec![1]);
        let ok = c.replace_at(&path, Proof::ax(p())).unwrap();
        assert_eq!(ok, c);
        assert!(c.replace_at(&path, Proof::ax(q())).is_err());
        assert!(matches!(c.subproof_at(&NodePath(vec![2])), Err(KernelError::BadPath(_))));
    }

    #[test]
    fn stats_and_paths() {
        let c = Proof::cut(0, Proof::ax(p()), Proof::k(1, q(), Proof::ax(p())).unwrap()).unwrap();
        assert_eq!(c.stats().nodes, 4);
        assert_eq!(c.stats().k, 1);
        assert_eq!(c.paths().len(), 4);
        assert_eq!(c.cut_paths(), vec![NodePath::root()]);
        assert_eq!(c.leaves().len(), 2);
    }
}
