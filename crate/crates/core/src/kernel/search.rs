//! Bounded backward search for cut-free proofs.
//!
//! The search runs over sequents whose antecedent is a set, applying the
//! invertible rules eagerly, and translates a derivation it finds into a
//! proof of the exact input sequent with interchange, contraction and
//! thinning.

use std::collections::{BTreeSet, HashMap};

use super::{Proof, Side};
use crate::logic::{Formula, FormulaKind, Sequent};
use crate::structural::adapt;

type Ctx = BTreeSet<Formula>;

enum Deriv {
    Ax(Formula),
    Bot(Formula),
    AndR(Box<Deriv>, Box<Deriv>),
    ImpR(Formula, Box<Deriv>),
    AndL(Formula, Formula, Box<Deriv>),
    OrL(Formula, Formula, Box<Deriv>, Box<Deriv>),
    OrR(Side, Formula, Box<Deriv>),
    ImpL(Formula, Box<Deriv>, Box<Deriv>),
}

struct Searcher {
    /// Largest depth at which a goal is known to fail.
    failed: HashMap<(Ctx, Formula), usize>,
}

impl Searcher {
    fn prove(&mut self, ctx: &Ctx, goal: &Formula, depth: usize) -> Option<Deriv> {
        if ctx.contains(goal) {
            return Some(Deriv::Ax(goal.clone()));
        }
        if ctx.contains(&Formula::bot()) {
            return Some(Deriv::Bot(goal.clone()));
        }
        if depth == 0 {
            return None;
        }
        let key = (ctx.clone(), goal.clone());
        if self.failed.get(&key).is_some_and(|&d| d >= depth) {
            return None;
        }
        let res = self.prove_inner(ctx, goal, depth);
        if res.is_none() {
            let e = self.failed.entry(key).or_insert(0);
            *e = (*e).max(depth);
        }
        res
    }

    fn prove_inner(&mut self, ctx: &Ctx, goal: &Formula, depth: usize) -> Option<Deriv> {
        let d = depth - 1;
        // Invertible rules, one at a time.
        match goal.kind() {
            FormulaKind::And(a, b) => {
                let l = self.prove(ctx, a, d)?;
                let r = self.prove(ctx, b, d)?;
                return Some(Deriv::AndR(Box::new(l), Box::new(r)));
            }
            FormulaKind::Imp(a, b) => {
                let mut c2 = ctx.clone();
                c2.insert(a.clone());
                let sub = self.prove(&c2, b, d)?;
                return Some(Deriv::ImpR(a.clone(), Box::new(sub)));
            }
            _ => {}
        }
        for f in ctx {
            match f.kind() {
                FormulaKind::And(a, b) => {
                    let mut c2 = ctx.clone();
                    c2.remove(f);
                    c2.insert(a.clone());
                    c2.insert(b.clone());
                    let sub = self.prove(&c2, goal, d)?;
                    return Some(Deriv::AndL(a.clone(), b.clone(), Box::new(sub)));
                }
                FormulaKind::Or(a, b) => {
                    let mut c1 = ctx.clone();
                    c1.remove(f);
                    let mut c2 = c1.clone();
                    c1.insert(a.clone());
                    c2.insert(b.clone());
                    let l = self.prove(&c1, goal, d)?;
                    let r = self.prove(&c2, goal, d)?;
                    return Some(Deriv::OrL(a.clone(), b.clone(), Box::new(l), Box::new(r)));
                }
                _ => {}
            }
        }
        // Choices.
        if let FormulaKind::Or(a, b) = goal.kind() {
            if let Some(sub) = self.prove(ctx, a, d) {
                return Some(Deriv::OrR(Side::First, b.clone(), Box::new(sub)));
            }
            if let Some(sub) = self.prove(ctx, b, d) {
                return Some(Deriv::OrR(Side::Second, a.clone(), Box::new(sub)));
            }
        }
        for f in ctx {
            if let FormulaKind::Imp(a, b) = f.kind() {
                if ctx.contains(b) {
                    continue;
                }
                let Some(l) = self.prove(ctx, a, d) else { continue };
                let mut c2 = ctx.clone();
                c2.remove(f);
                c2.insert(b.clone());
                if let Some(r) = self.prove(&c2, goal, d) {
                    return Some(Deriv::ImpL(b.clone(), Box::new(l), Box::new(r)));
                }
            }
        }
        None
    }
}

fn dedup(fs: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for f in fs {
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

fn without(fs: &[Formula], x: &Formula) -> Vec<Formula> {
    fs.iter().filter(|f| *f != x).cloned().collect()
}

/// Translates a derivation into a proof whose antecedent formulas all occur
/// in the derivation's context.
fn translate(d: &Deriv) -> Proof {
    let fix = |p: Proof, t: &[Formula]| adapt(p, t).expect("translation keeps contexts");
    match d {
        Deriv::Ax(f) => Proof::ax(f.clone()),
        Deriv::Bot(f) => Proof::botax(f.clone()),
        Deriv::AndR(l, r) => {
            let (pl, pr) = (translate(l), translate(r));
            let ctx = dedup(pl.end().ant.iter().chain(&pr.end().ant).cloned());
            Proof::and_r(fix(pl, &ctx), fix(pr, &ctx)).expect("equal contexts")
        }
        Deriv::ImpR(a, sub) => {
            let p = translate(sub);
            let mut t = vec![a.clone()];
            t.extend(without(&dedup(p.end().ant.clone()), a));
            Proof::imp_r(fix(p, &t)).expect("nonempty")
        }
        Deriv::AndL(a, b, sub) => {
            let p = translate(sub);
            let (ha, hb) = (p.end().ant.contains(a), p.end().ant.contains(b));
            let rest = without(&without(&dedup(p.end().ant.clone()), a), b);
            let mk = |head: Vec<Formula>| -> Vec<Formula> { head.into_iter().chain(rest.clone()).collect() };
            match (ha, hb) {
                (false, false) => p,
                (true, false) => Proof::and_l(0, Side::First, b.clone(), fix(p, &mk(vec![a.clone()])))
                    .expect("andl"),
                (false, true) => Proof::and_l(0, Side::Second, a.clone(), fix(p, &mk(vec![b.clone()])))
                    .expect("andl"),
                (true, true) if a == b => {
                    Proof::and_l(0, Side::First, b.clone(), fix(p, &mk(vec![a.clone()]))).expect("andl")
                }
                (true, true) => {
                    let q = fix(p, &mk(vec![a.clone(), b.clone()]));
                    let q = Proof::and_l(0, Side::First, b.clone(), q).expect("andl");
                    let q = Proof::and_l(1, Side::Second, a.clone(), q).expect("andl");
                    Proof::w(0, q).expect("equal pair")
                }
            }
        }
        Deriv::OrL(a, b, l, r) => {
            let (pl, pr) = (translate(l), translate(r));
            if !pl.end().ant.contains(a) {
                return pl;
            }
            if !pr.end().ant.contains(b) {
                return pr;
            }
            let rest = dedup(
                without(&pl.end().ant, a).into_iter().chain(without(&pr.end().ant, b)),
            );
            let tl: Vec<Formula> = std::iter::once(a.clone()).chain(rest.clone()).collect();
            let tr: Vec<Formula> = std::iter::once(b.clone()).chain(rest).collect();
            Proof::or_l(0, fix(pl, &tl), fix(pr, &tr)).expect("orl")
        }
        Deriv::OrR(side, other, sub) => {
            Proof::or_r(*side, other.clone(), translate(sub)).expect("orr")
        }
        Deriv::ImpL(b, l, r) => {
            let (pl, pr) = (translate(l), translate(r));
            if !pr.end().ant.contains(b) {
                return pr;
            }
            let mut t = vec![b.clone()];
            t.extend(without(&dedup(pr.end().ant.clone()), b));
            Proof::imp_l(0, pl, fix(pr, &t)).expect("impl")
        }
    }
}

/// Searches for a cut-free proof of `s` whose derivation height, counted in
/// logical rules, is at most `depth`.
pub fn search_cutfree(s: &Sequent, depth: usize) -> Option<Proof> {
    let ctx: Ctx = s.ant.iter().cloned().collect();
    let mut searcher = Searcher { failed: HashMap::new() };
    let deriv = (0..=depth).find_map(|d| searcher.prove(&ctx, &s.succ, d))?;
    let p = translate(&deriv);
    Some(adapt(p, &s.ant).expect("translation keeps contexts"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::validate;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }
    fn r() -> Formula {
        Formula::atom("r")
    }

    fn check(s: &Sequent, depth: usize) -> Option<Proof> {
        let out = search_cutfree(s, depth)?;
        validate(&out).unwrap();
        assert_eq!(out.end(), s);
        assert!(out.is_cut_free());
        Some(out)
    }

    #[test]
    fn axiom() {
        let pr = check(&Sequent::new(vec![p()], p()), 1).unwrap();
        assert!(pr.rule().is_axiom());
    }

    #[test]
    fn atom_unprovable() {
        assert!(check(&Sequent::new(vec![], p()), 10).is_none());
    }

    #[test]
    fn and_commutes() {
        let s = Sequent::new(vec![Formula::and(p(), q())], Formula::and(q(), p()));
        check(&s, 4).unwrap();
    }

    #[test]
    fn harder() {
        let s = Sequent::new(
            vec![Formula::or(p(), q()), Formula::imp(p(), r()), Formula::imp(q(), r()), p()],
            r(),
        );
        check(&s, 6).unwrap();
        let peirce = Sequent::new(
            vec![],
            Formula::imp(Formula::imp(Formula::imp(p(), q()), p()), p()),
        );
        assert!(check(&peirce, 8).is_none());
        let dn = Sequent::new(vec![], Formula::negation(Formula::negation(Formula::or(p(), Formula::negation(p())))));
        check(&dn, 8).unwrap();
        let dup = Sequent::new(vec![p(), p(), q()], p());
        check(&dup, 1).unwrap();
    }
}
