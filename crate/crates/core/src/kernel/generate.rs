//! Seeded random generation of valid proofs, used to build test corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Proof, Side};
use crate::logic::{Formula, FormulaKind};

struct Gen<'a> {
    rng: ChaCha8Rng,
    atoms: &'a [Formula],
    allow_imp: bool,
}

/// Generates a valid proof with at most `budget` nodes. The same arguments
/// always give the same proof. With `allow_imp` off, no implication occurs
/// anywhere in the tree.
pub fn generate_proof(seed: u64, budget: usize, atoms: &[&str], allow_imp: bool) -> Proof {
    let atoms: Vec<Formula> = if atoms.is_empty() {
        vec![Formula::atom("p")]
    } else {
        atoms.iter().map(|a| Formula::atom(a)).collect()
    };
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), atoms: &atoms, allow_imp };
    let p = g.gen(budget.max(1));
    debug_assert!(p.stats().nodes as usize <= budget.max(1));
    p
}

impl Gen<'_> {
    fn formula(&mut self, depth: usize) -> Formula {
        let roll = self.rng.gen_range(0..100);
        if depth == 0 || roll < 55 {
            if self.rng.gen_range(0..12) == 0 {
                return Formula::bot();
            }
            return self.atoms.choose(&mut self.rng).expect("atoms").clone();
        }
        let a = self.formula(depth - 1);
        let b = self.formula(depth - 1);
        let n = if self.allow_imp { 3 } else { 2 };
        match self.rng.gen_range(0..n) {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            _ => Formula::imp(a, b),
        }
    }

    fn side(&mut self) -> Side {
        if self.rng.gen_bool(0.5) {
            Side::First
        } else {
            Side::Second
        }
    }

    fn axiom(&mut self) -> Proof {
        let f = self.formula(2);
        if self.rng.gen_range(0..10) == 0 {
            Proof::botax(f)
        } else {
            Proof::ax(f)
        }
    }

    fn gen(&mut self, budget: usize) -> Proof {
        if budget <= 1 {
            return self.axiom();
        }
        let roll = self.rng.gen_range(0..100);
        if budget >= 3 && roll < 30 {
            return self.gen_cut(budget);
        }
        if budget >= 3 && roll < 55 {
            return match self.rng.gen_range(0..3) {
                0 => self.gen_and_r(budget),
                1 => self.gen_or_l(budget),
                _ if self.allow_imp => self.gen_imp_l(budget),
                _ => self.gen_and_r(budget),
            };
        }
        let sub = self.gen(budget - 1);
        self.unary(sub)
    }

    /// Applies one random unary rule, or returns `sub` when none fits.
    fn unary(&mut self, sub: Proof) -> Proof {
        let ant = sub.end().ant.clone();
        let n = ant.len();
        let pairs: Vec<usize> = (0..n.saturating_sub(1)).filter(|&i| ant[i] == ant[i + 1]).collect();
        let roll = self.rng.gen_range(0..100);
        let res = if !pairs.is_empty() && roll < 35 {
            let i = *pairs.choose(&mut self.rng).expect("nonempty");
            Proof::w(i, sub.clone())
        } else if roll < 60 {
            let pos = self.rng.gen_range(0..=n);
            let f = if n > 0 && self.rng.gen_bool(0.6) {
                ant[pos.min(n - 1)].clone()
            } else {
                self.formula(1)
            };
            Proof::k(pos, f, sub.clone())
        } else if roll < 70 && n >= 2 {
            let pos = self.rng.gen_range(0..n - 1);
            Proof::c(pos, sub.clone())
        } else if roll < 82 && n >= 1 {
            let pos = self.rng.gen_range(0..n);
            let side = self.side();
            let other = self.formula(1);
            Proof::and_l(pos, side, other, sub.clone())
        } else if roll < 92 || !self.allow_imp || n == 0 {
            let side = self.side();
            let other = self.formula(1);
            Proof::or_r(side, other, sub.clone())
        } else {
            Proof::imp_r(sub.clone())
        };
        res.unwrap_or(sub)
    }

    fn split(&mut self, budget: usize) -> (usize, usize) {
        let rest = budget - 1;
        let a = self.rng.gen_range(1..rest);
        (a, rest - a)
    }

    fn gen_cut(&mut self, budget: usize) -> Proof {
        let (bl, br) = self.split(budget);
        let right = self.gen(br);
        if right.end().ant.is_empty() {
            return right;
        }
        let pos = self.rng.gen_range(0..right.end().ant.len());
        let d = right.end().ant[pos].clone();
        let left = self.gen_succ(&d, bl);
        fit(Proof::cut(pos, left, right.clone()).ok(), budget).unwrap_or(right)
    }

    fn gen_and_r(&mut self, budget: usize) -> Proof {
        let (bl, br) = self.split(budget);
        let l = self.gen(bl);
        let r = self.gen(br);
        let l2 = pad_right(l.clone(), &r.end().ant);
        let r2 = pad_left(r, &l.end().ant);
        fit(Proof::and_r(l2, r2).ok(), budget).unwrap_or(l)
    }

    fn gen_or_l(&mut self, budget: usize) -> Proof {
        let left = self.gen(budget - 1);
        let n = left.end().ant.len();
        if n == 0 {
            return left;
        }
        let pos = self.rng.gen_range(0..n);
        let c = left.end().succ.clone();
        let ant = &left.end().ant;
        let in_ctx = ant.iter().enumerate().any(|(i, f)| i != pos && *f == c);
        let b = if in_ctx && self.rng.gen_bool(0.5) {
            self.formula(1)
        } else if self.rng.gen_bool(0.7) {
            c.clone()
        } else {
            Formula::bot()
        };
        let mut target = ant.clone();
        target[pos] = b.clone();
        let right = if b.is_bot() {
            thin_to(Proof::botax(c), &target, pos)
        } else if b == c {
            thin_to(Proof::ax(c), &target, pos)
        } else {
            let j = (0..n).find(|&i| i != pos && ant[i] == c).expect("in context");
            thin_to(Proof::ax(c), &target, j)
        };
        fit(right.and_then(|r| Proof::or_l(pos, left.clone(), r).ok()), budget).unwrap_or(left)
    }

    fn gen_imp_l(&mut self, budget: usize) -> Proof {
        let (bl, br) = self.split(budget);
        let l = self.gen(bl);
        let r = self.gen(br);
        if r.end().ant.is_empty() {
            return r;
        }
        let pos = self.rng.gen_range(0..r.end().ant.len());
        Proof::imp_l(pos, l, r.clone()).unwrap_or(r)
    }

    /// A proof with succedent `d`.
    fn gen_succ(&mut self, d: &Formula, budget: usize) -> Proof {
        let roll = self.rng.gen_range(0..100);
        let fallback = Proof::ax(d.clone());
        let res = match d.kind() {
            FormulaKind::And(a, b) if budget >= 3 && roll < 50 => {
                let (bl, br) = self.split(budget);
                let l = self.gen_succ(a, bl);
                let r = self.gen_succ(b, br);
                let l2 = pad_right(l.clone(), &r.end().ant);
                let r2 = pad_left(r, &l.end().ant);
                Proof::and_r(l2, r2).ok()
            }
            FormulaKind::Or(a, b) if budget >= 2 && roll < 50 => {
                let side = self.side();
                let (x, other) = match side {
                    Side::First => (a, b),
                    Side::Second => (b, a),
                };
                let sub = self.gen_succ(x, budget - 1);
                Proof::or_r(side, other.clone(), sub).ok()
            }
            FormulaKind::Imp(a, b) if budget >= 2 && roll < 60 => {
                let sub = self.gen_succ(b, budget - 1);
                let ant = &sub.end().ant;
                let moved = match ant.iter().position(|f| f == a) {
                    Some(j) => (0..j).rev().try_fold(sub.clone(), |acc, i| Proof::c(i, acc)).ok(),
                    None => Proof::k(0, a.clone(), sub).ok(),
                };
                moved.and_then(|m| Proof::imp_r(m).ok())
            }
            _ if budget >= 3 && roll < 70 => {
                let (bl, br) = self.split(budget);
                let right = self.gen_succ(d, br);
                if right.end().ant.is_empty() {
                    Some(right)
                } else {
                    let pos = self.rng.gen_range(0..right.end().ant.len());
                    let e = right.end().ant[pos].clone();
                    let left = self.gen_succ(&e, bl);
                    Proof::cut(pos, left, right).ok()
                }
            }
            _ if roll < 80 => {
                let mut p = if self.rng.gen_range(0..6) == 0 {
                    Proof::botax(d.clone())
                } else {
                    Proof::ax(d.clone())
                };
                for _ in 1..budget.min(4) {
                    p = self.unary_left(p);
                }
                Some(p)
            }
            _ => None,
        };
        fit(res, budget).unwrap_or(fallback)
    }

    /// A unary rule that keeps the succedent.
    fn unary_left(&mut self, sub: Proof) -> Proof {
        let ant = sub.end().ant.clone();
        let n = ant.len();
        let roll = self.rng.gen_range(0..100);
        let res = if roll < 40 {
            let pos = self.rng.gen_range(0..=n);
            let f = if n > 0 && self.rng.gen_bool(0.5) {
                ant[pos.min(n - 1)].clone()
            } else {
                self.formula(1)
            };
            Proof::k(pos, f, sub.clone())
        } else if roll < 60 && n >= 2 {
            let pairs: Vec<usize> =
                (0..n - 1).filter(|&i| ant[i] == ant[i + 1]).collect();
            match pairs.choose(&mut self.rng) {
                Some(&i) => Proof::w(i, sub.clone()),
                None => Proof::c(self.rng.gen_range(0..n - 1), sub.clone()),
            }
        } else if n >= 1 {
            let pos = self.rng.gen_range(0..n);
            let side = self.side();
            let other = self.formula(1);
            Proof::and_l(pos, side, other, sub.clone())
        } else {
            Ok(sub.clone())
        };
        res.unwrap_or(sub)
    }
}

fn fit(p: Option<Proof>, budget: usize) -> Option<Proof> {
    p.filter(|p| p.stats().nodes as usize <= budget)
}

/// Appends `extra` at the end of the antecedent with K.
fn pad_right(p: Proof, extra: &[Formula]) -> Proof {
    let mut cur = p;
    for f in extra {
        let n = cur.end().ant.len();
        cur = Proof::k(n, f.clone(), cur).expect("K at end");
    }
    cur
}

/// Prepends `extra` at the front of the antecedent with K.
fn pad_left(p: Proof, extra: &[Formula]) -> Proof {
    let mut cur = p;
    for (i, f) in extra.iter().enumerate() {
        cur = Proof::k(i, f.clone(), cur).expect("K in range");
    }
    cur
}

/// Thins a one-formula proof up to antecedent `target`, where the proof's
/// single antecedent formula must land at `keep`.
fn thin_to(p: Proof, target: &[Formula], keep: usize) -> Option<Proof> {
    if p.end().ant.len() != 1 || target.get(keep) != p.end().ant.first() {
        return None;
    }
    let mut cur = p;
    for (i, f) in target.iter().enumerate() {
        if i != keep {
            cur = Proof::k(i, f.clone(), cur).ok()?;
        }
    }
    Some(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{validate, Rule};

    const ATOMS: [&str; 3] = ["p", "q", "r"];

    #[test]
    fn budget_one_is_an_axiom() {
        let p = generate_proof(1, 1, &ATOMS, true);
        assert!(p.rule().is_axiom());
    }

    #[test]
    fn corpus_validates_within_budget() {
        for seed in 0..300 {
            for budget in [2, 5, 12, 30] {
                let p = generate_proof(seed, budget, &ATOMS, true);
                validate(&p).unwrap();
                assert!(p.stats().nodes as usize <= budget);
            }
        }
    }

    #[test]
    fn deterministic() {
        for seed in 0..20 {
            assert_eq!(generate_proof(seed, 25, &ATOMS, true), generate_proof(seed, 25, &ATOMS, true));
        }
    }

    #[test]
    fn no_implication_when_disallowed() {
        for seed in 0..300 {
            let p = generate_proof(seed, 40, &ATOMS, false);
            assert!(!p.stats().has_imp);
            for path in p.paths() {
                let n = p.subproof_at(&path).unwrap();
                assert!(!matches!(n.rule(), Rule::ImpL(_) | Rule::ImpR));
            }
        }
    }

    #[test]
    fn corpus_has_cuts_and_contractions() {
        let ps: Vec<Proof> = (0..200).map(|s| generate_proof(s, 30, &ATOMS, true)).collect();
        assert!(ps.iter().filter(|p| p.stats().cuts > 0).count() > 50);
        assert!(ps.iter().filter(|p| p.stats().w > 0).count() > 30);
    }
}
