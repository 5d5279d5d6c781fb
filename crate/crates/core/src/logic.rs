//! Formulas, sequents and the degree measure.
//!
//! Formulas are immutable and reference counted, so cloning one is a pointer
//! copy. Equality is syntactic.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaKind {
    Atom(Arc<str>),
    Bottom,
    And(Formula, Formula),
    Or(Formula, Formula),
    Imp(Formula, Formula),
}

/// A propositional formula over atoms, `bot`, `&`, `|` and `->`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Formula(Arc<FormulaKind>);

impl Formula {
    pub fn atom(name: &str) -> Formula {
        debug_assert!(is_atom_name(name), "bad atom name {name:?}");
        Formula(Arc::new(FormulaKind::Atom(Arc::from(name))))
    }

    pub fn bot() -> Formula {
        Formula(Arc::new(FormulaKind::Bottom))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula(Arc::new(FormulaKind::And(a, b)))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula(Arc::new(FormulaKind::Or(a, b)))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula(Arc::new(FormulaKind::Imp(a, b)))
    }

    /// `a -> bot`.
    pub fn negation(a: Formula) -> Formula {
        Formula::imp(a, Formula::bot())
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0
    }

    pub fn is_bot(&self) -> bool {
        matches!(*self.0, FormulaKind::Bottom)
    }

    /// Number of binary connectives.
    pub fn degree(&self) -> usize {
        formula_degree(self)
    }

    pub fn contains_imp(&self) -> bool {
        match self.kind() {
            FormulaKind::Atom(_) | FormulaKind::Bottom => false,
            FormulaKind::Imp(_, _) => true,
            FormulaKind::And(a, b) | FormulaKind::Or(a, b) => a.contains_imp() || b.contains_imp(),
        }
    }

    /// Collects atom names occurring in the formula into `out`.
    pub fn collect_atoms(&self, out: &mut std::collections::BTreeSet<Arc<str>>) {
        match self.kind() {
            FormulaKind::Atom(n) => {
                out.insert(n.clone());
            }
            FormulaKind::Bottom => {}
            FormulaKind::And(a, b) | FormulaKind::Or(a, b) | FormulaKind::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

/// Atom names follow `[a-z][a-z0-9_]*`, and `bot` is reserved.
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    name != "bot" && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

pub fn formula_degree(f: &Formula) -> usize {
    match f.kind() {
        FormulaKind::Atom(_) | FormulaKind::Bottom => 0,
        FormulaKind::And(a, b) | FormulaKind::Or(a, b) | FormulaKind::Imp(a, b) => {
            1 + formula_degree(a) + formula_degree(b)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FormulaKind::Atom(n) => write!(f, "{n}"),
            FormulaKind::Bottom => write!(f, "bot"),
            FormulaKind::And(a, b) => write!(f, "({a} & {b})"),
            FormulaKind::Or(a, b) => write!(f, "({a} | {b})"),
            FormulaKind::Imp(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("splice at {at} dropping {drop} exceeds antecedent length {len}")]
    SpliceOutOfRange { at: usize, drop: usize, len: usize },
}

/// `Γ ⊢ A`: a sequence antecedent and exactly one succedent formula.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub ant: Vec<Formula>,
    pub succ: Formula,
}

impl Sequent {
    pub fn new(ant: Vec<Formula>, succ: Formula) -> Sequent {
        Sequent { ant, succ }
    }

    /// Removes `drop` formulas at `at` and puts `insert` in their place.
    pub fn antecedent_splice(
        &self,
        at: usize,
        insert: &[Formula],
        drop: usize,
    ) -> Result<Sequent, LogicError> {
        Ok(Sequent { ant: splice(&self.ant, at, insert, drop)?, succ: self.succ.clone() })
    }

    pub fn degree(&self) -> usize {
        self.ant.iter().chain(std::iter::once(&self.succ)).map(Formula::degree).max().unwrap_or(0)
    }

    pub fn atoms(&self) -> std::collections::BTreeSet<Arc<str>> {
        let mut out = std::collections::BTreeSet::new();
        for f in self.ant.iter().chain(std::iter::once(&self.succ)) {
            f.collect_atoms(&mut out);
        }
        out
    }

    pub fn contains_imp(&self) -> bool {
        self.ant.iter().chain(std::iter::once(&self.succ)).any(Formula::contains_imp)
    }
}

pub fn antecedent_splice(
    s: &Sequent,
    at: usize,
    insert: &[Formula],
    drop: usize,
) -> Result<Sequent, LogicError> {
    s.antecedent_splice(at, insert, drop)
}

/// Vector form of [`antecedent_splice`], shared by the proof kernel.
pub fn splice(
    ant: &[Formula],
    at: usize,
    insert: &[Formula],
    drop: usize,
) -> Result<Vec<Formula>, LogicError> {
    if at + drop > ant.len() {
        return Err(LogicError::SpliceOutOfRange { at, drop, len: ant.len() });
    }
    let mut out = Vec::with_capacity(ant.len() - drop + insert.len());
    out.extend_from_slice(&ant[..at]);
    out.extend_from_slice(insert);
    out.extend_from_slice(&ant[at + drop..]);
    Ok(out)
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.ant.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        if self.ant.is_empty() {
            write!(f, "|- {}", self.succ)
        } else {
            write!(f, " |- {}", self.succ)
        }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
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
    fn r() -> Formula {
        Formula::atom("r")
    }

    #[test]
    fn degree_examples() {
        assert_eq!(formula_degree(&p()), 0);
        assert_eq!(formula_degree(&Formula::imp(Formula::and(p(), q()), r())), 2);
        assert_eq!(formula_degree(&Formula::negation(p())), 1);
        assert_eq!(formula_degree(&Formula::bot()), 0);
    }

    #[test]
    fn splice_examples() {
        let s = Sequent::new(vec![p(), q()], r());
        assert_eq!(s.antecedent_splice(1, &[], 1).unwrap(), Sequent::new(vec![p()], r()));
        let s = Sequent::new(vec![p()], r());
        assert_eq!(
            s.antecedent_splice(0, &[q(), q()], 0).unwrap(),
            Sequent::new(vec![q(), q(), p()], r())
        );
        let s = Sequent::new(vec![p(), q()], r());
        assert_eq!(
            s.antecedent_splice(0, &[q(), p()], 2).unwrap(),
            Sequent::new(vec![q(), p()], r())
        );
    }

    #[test]
    fn splice_out_of_range() {
        let s = Sequent::new(vec![p()], r());
        assert!(matches!(
            s.antecedent_splice(1, &[], 1),
            Err(LogicError::SpliceOutOfRange { at: 1, drop: 1, len: 1 })
        ));
    }

    #[test]
    fn atom_names() {
        assert!(is_atom_name("p"));
        assert!(is_atom_name("a1_b"));
        assert!(!is_atom_name("bot"));
        assert!(!is_atom_name("P"));
        assert!(!is_atom_name("1a"));
        assert!(!is_atom_name(""));
    }

    #[test]
    fn display_is_grammar_form() {
        let f = Formula::imp(Formula::and(p(), q()), Formula::bot());
        assert_eq!(f.to_string(), "((p & q) -> bot)");
        assert_eq!(Sequent::new(vec![], p()).to_string(), "|- p");
        assert_eq!(Sequent::new(vec![p(), q()], r()).to_string(), "p, q |- r");
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn arb_formula() -> impl Strategy<Value = Formula> {
            let leaf = prop_oneof![
                Just(Formula::bot()),
                prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::atom),
            ];
            leaf.prop_recursive(4, 24, 2, |inner| {
                (inner.clone(), inner, 0..3u8).prop_map(|(a, b, k)| match k {
                    0 => Formula::and(a, b),
                    1 => Formula::or(a, b),
                    _ => Formula::imp(a, b),
                })
            })
        }

        proptest! {
            #[test]
            fn degree_is_additive(a in arb_formula(), b in arb_formula()) {
                let d = formula_degree(&a) + formula_degree(&b) + 1;
                prop_assert_eq!(formula_degree(&Formula::and(a.clone(), b.clone())), d);
                prop_assert_eq!(formula_degree(&Formula::or(a.clone(), b.clone())), d);
                prop_assert_eq!(formula_degree(&Formula::imp(a, b)), d);
            }

            #[test]
            fn splice_length(
                ant in prop::collection::vec(arb_formula(), 0..6),
                ins in prop::collection::vec(arb_formula(), 0..4),
                at in 0usize..7,
                drop in 0usize..4,
            ) {
                let s = Sequent::new(ant.clone(), Formula::bot());
                match s.antecedent_splice(at, &ins, drop) {
                    Ok(out) => prop_assert_eq!(out.ant.len(), ant.len() - drop + ins.len()),
                    Err(_) => prop_assert!(at + drop > ant.len()),
                }
            }
        }
    }
}
