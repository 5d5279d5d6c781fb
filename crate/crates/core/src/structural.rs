//! Blocks of structural rules and the position arithmetic behind them.

use crate::kernel::{KernelError, Proof, Rule};
use crate::logic::Formula;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructOp {
    C(usize),
    W(usize),
    K(usize, Formula),
}

impl StructOp {
    pub fn apply(&self, p: Proof) -> Result<Proof, KernelError> {
        match self {
            StructOp::C(i) => Proof::c(*i, p),
            StructOp::W(i) => Proof::w(*i, p),
            StructOp::K(i, f) => Proof::k(*i, f.clone(), p),
        }
    }

    /// The op as a rule, if it is a structural rule node.
    pub fn from_rule(r: &Rule) -> Option<StructOp> {
        match r {
            Rule::C(i) => Some(StructOp::C(*i)),
            Rule::W(i) => Some(StructOp::W(*i)),
            Rule::K(i, f) => Some(StructOp::K(*i, f.clone())),
            _ => None,
        }
    }
}

/// Applies `ops` top to bottom.
pub fn apply_ops(p: Proof, ops: &[StructOp]) -> Result<Proof, KernelError> {
    ops.iter().try_fold(p, |acc, op| op.apply(acc))
}

pub fn apply_cs(p: Proof, cs: &[usize]) -> Result<Proof, KernelError> {
    cs.iter().try_fold(p, |acc, &i| Proof::c(i, acc))
}

pub fn apply_ws(p: Proof, ws: &[usize]) -> Result<Proof, KernelError> {
    ws.iter().try_fold(p, |acc, &i| Proof::w(i, acc))
}

/// C positions moving the element at `from` to `to`.
pub fn move_elem(from: usize, to: usize) -> Vec<usize> {
    if from > to {
        (to..from).rev().collect()
    } else {
        (from..to).collect()
    }
}

/// C positions moving the block `[start, start + len)` so that it starts at
/// `to`.
pub fn move_block(start: usize, len: usize, to: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if to < start {
        for i in 0..len {
            out.extend(move_elem(start + i, to + i));
        }
    } else if to > start {
        for i in (0..len).rev() {
            out.extend(move_elem(start + i, to + i));
        }
    }
    out
}

/// Contracts `X, Γ, Γ, Y` to `X, Γ, Y` where `Γ` has length `k` and starts
/// at `offset`, working leftmost first.
pub fn dup_block_contraction(offset: usize, k: usize) -> Vec<StructOp> {
    let mut out = Vec::new();
    for i in 0..k {
        for c in ((offset + i + 1)..(offset + k)).rev() {
            out.push(StructOp::C(c));
        }
        out.push(StructOp::W(offset + i));
    }
    out
}

/// For a W-block applied to an antecedent of length `n`, the number of
/// premise occurrences each conclusion position collects.
pub fn block_sizes(n: usize, ws: &[usize]) -> Vec<usize> {
    let mut sizes = vec![1; n];
    for &w in ws {
        sizes[w] += sizes[w + 1];
        sizes.remove(w + 1);
    }
    sizes
}

/// The canonical W-block contracting adjacent runs of the given sizes:
/// `s_t - 1` contractions at position `t`, leftmost first.
pub fn canonical_tail(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for (t, &s) in sizes.iter().enumerate() {
        out.extend(std::iter::repeat_n(t, s.saturating_sub(1)));
    }
    out
}

/// Expands a conclusion sequence into the premise sequence of a W-block with
/// the given run sizes.
pub fn expand(ant: &[Formula], sizes: &[usize]) -> Vec<Formula> {
    ant.iter()
        .zip(sizes)
        .flat_map(|(f, &s)| std::iter::repeat_n(f.clone(), s))
        .collect()
}

/// Turns a proof of `L ⊢ C` into a proof of `target ⊢ C` using C, W and K,
/// provided every formula of `L` occurs in `target`.
pub fn adapt(p: Proof, target: &[Formula]) -> Result<Proof, KernelError> {
    let mut cur = p;
    // Merge repeated formulas.
    loop {
        let ant = &cur.end().ant;
        let dup = (0..ant.len())
            .find_map(|j| (0..j).find(|&i| ant[i] == ant[j]).map(|i| (i, j)));
        let Some((i, j)) = dup else { break };
        cur = apply_cs(cur, &move_elem(j, i + 1))?;
        cur = Proof::w(i, cur)?;
    }
    let ant = cur.end().ant.clone();
    let mut slot: Vec<usize> = Vec::with_capacity(ant.len());
    for f in &ant {
        let k = target.iter().position(|t| t == f).ok_or_else(|| {
            KernelError::BadOccurrence(format!("{f} does not occur in the target antecedent"))
        })?;
        slot.push(k);
    }
    // Bubble sort into target order.
    let n = slot.len();
    for a in 0..n {
        for b in 0..n - 1 - a {
            if slot[b] > slot[b + 1] {
                slot.swap(b, b + 1);
                cur = Proof::c(b, cur)?;
            }
        }
    }
    for (k, f) in target.iter().enumerate() {
        if !slot.contains(&k) {
            cur = Proof::k(k, f.clone(), cur)?;
        }
    }
    Ok(cur)
}

/// Peels structural nodes off the bottom of `p`: returns the top proof and
/// the ops listed top to bottom.
pub fn peel<F: Fn(&Rule) -> bool>(p: &Proof, keep: F) -> (Proof, Vec<StructOp>) {
    let mut ops = Vec::new();
    let mut cur = p.clone();
    while keep(cur.rule()) {
        match StructOp::from_rule(cur.rule()) {
            Some(op) => ops.push(op),
            None => break,
        }
        cur = cur.premise(0).clone();
    }
    ops.reverse();
    (cur, ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Sequent;

    fn atoms(names: &str) -> Vec<Formula> {
        names.chars().map(|c| Formula::atom(&c.to_string())).collect()
    }

    /// A proof of exactly `ant ⊢ last(ant)` built from K's.
    fn thin(ant: &[Formula]) -> Proof {
        let last = ant.len() - 1;
        let mut p = Proof::ax(ant[last].clone());
        for (i, f) in ant[..last].iter().enumerate() {
            p = Proof::k(i, f.clone(), p).unwrap();
        }
        p
    }

    #[test]
    fn dup_block_example() {
        let ops = dup_block_contraction(0, 2);
        assert_eq!(ops, vec![StructOp::C(1), StructOp::W(0), StructOp::W(1)]);
        let p = thin(&atoms("bcbcd"));
        let out = apply_ops(p, &ops).unwrap();
        assert_eq!(out.end(), &Sequent::new(atoms("bcd"), Formula::atom("d")));
    }

    #[test]
    fn dup_block_with_offset() {
        let p = thin(&atoms("xabcabcy"));
        let out = apply_ops(p, &dup_block_contraction(1, 3)).unwrap();
        assert_eq!(out.end().ant, atoms("xabcy"));
    }

    #[test]
    fn block_sizes_and_tail() {
        assert_eq!(block_sizes(4, &[0, 0]), vec![3, 1]);
        assert_eq!(block_sizes(4, &[2, 0]), vec![2, 2]);
        assert_eq!(canonical_tail(&[3, 1, 2]), vec![0, 0, 2]);
        assert_eq!(block_sizes(6, &canonical_tail(&[3, 1, 2])), vec![3, 1, 2]);
    }

    #[test]
    fn moves() {
        let p = thin(&atoms("abcd"));
        let out = apply_cs(p.clone(), &move_elem(3, 0)).unwrap();
        assert_eq!(out.end().ant, atoms("dabc"));
        let out = apply_cs(p.clone(), &move_block(2, 2, 0)).unwrap();
        assert_eq!(out.end().ant, atoms("cdab"));
        let out = apply_cs(p, &move_block(0, 2, 1)).unwrap();
        assert_eq!(out.end().ant, atoms("cabd"));
    }

    #[test]
    fn adapt_reorders_thins_and_contracts() {
        let p = thin(&atoms("abab"));
        let out = adapt(p, &atoms("cbaab")).unwrap();
        assert_eq!(out.end().ant, atoms("cbaab"));
        assert!(adapt(thin(&atoms("ab")), &atoms("a")).is_err());
    }
}
