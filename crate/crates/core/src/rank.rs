//! Rank indices and the rank of a cut.
//!
//! [`annotate_ranks`] replays the indexed rules node by node.
//! [`rank_by_ancestry`] computes the same numbers from the ancestor relation
//! alone and serves as an independent check.

use crate::kernel::{ancestors, KernelError, NodePath, OccurrenceRef, Proof, Rule, Slot};

/// Rank indices of every occurrence, mirroring the proof tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTree {
    pub ant: Vec<u64>,
    pub succ: u64,
    pub children: Vec<RankTree>,
}

impl RankTree {
    pub fn at(&self, path: &NodePath) -> Option<&RankTree> {
        let mut cur = self;
        for &i in &path.0 {
            cur = cur.children.get(i)?;
        }
        Some(cur)
    }

    pub fn index(&self, slot: Slot) -> Option<u64> {
        match slot {
            Slot::Ant(i) => self.ant.get(i).copied(),
            Slot::Succ => Some(self.succ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutRank {
    pub left: u64,
    pub right: u64,
    pub total: u64,
}

fn inc(v: &[u64]) -> Vec<u64> {
    v.iter().map(|x| x + 1).collect()
}

fn merge(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x.max(y) + 1).collect()
}

/// Annotates every occurrence with its rank index.
pub fn annotate_ranks(p: &Proof) -> RankTree {
    let children: Vec<RankTree> = p.premises().iter().map(annotate_ranks).collect();
    let (ant, succ) = match *p.rule() {
        Rule::Ax(_) | Rule::BotAx(_) => (vec![1], 1),
        Rule::C(pos) => {
            let mut a = inc(&children[0].ant);
            a.swap(pos, pos + 1);
            (a, children[0].succ + 1)
        }
        Rule::W(pos) => {
            let c = &children[0].ant;
            let mut a = inc(c);
            a[pos] = c[pos].max(c[pos + 1]) + 1;
            a.remove(pos + 1);
            (a, children[0].succ + 1)
        }
        Rule::K(pos, _) => {
            let mut a = inc(&children[0].ant);
            a.insert(pos, 1);
            (a, children[0].succ + 1)
        }
        Rule::Cut(pos) | Rule::ImpL(pos) => {
            let (l, r) = (&children[0], &children[1]);
            let mut a = inc(&r.ant[..pos]);
            a.extend(inc(&l.ant));
            if matches!(p.rule(), Rule::ImpL(_)) {
                a.push(1);
            }
            a.extend(inc(&r.ant[pos + 1..]));
            (a, r.succ + 1)
        }
        Rule::AndL(pos, ..) => {
            let mut a = inc(&children[0].ant);
            a[pos] = 1;
            (a, children[0].succ + 1)
        }
        Rule::AndR => (merge(&children[0].ant, &children[1].ant), 1),
        Rule::OrL(pos) => {
            let mut a = merge(&children[0].ant, &children[1].ant);
            a[pos] = 1;
            (a, children[0].succ.max(children[1].succ) + 1)
        }
        Rule::OrR(..) => (inc(&children[0].ant), 1),
        Rule::ImpR => (inc(&children[0].ant[1..]), 1),
    };
    RankTree { ant, succ, children }
}

/// Rank of the cut at `path`: the left premise's succedent index and the
/// right premise's index at the cut position.
pub fn cut_rank(p: &Proof, path: &NodePath) -> Result<CutRank, KernelError> {
    let node = p.subproof_at(path)?;
    rank_of_cut(node).ok_or_else(|| KernelError::WrongRule {
        path: path.clone(),
        found: node.rule().name(),
        expected: "cut",
    })
}

/// Rank of a cut node, `None` if `cut` is not a cut.
pub fn rank_of_cut(cut: &Proof) -> Option<CutRank> {
    let Rule::Cut(pos) = cut.rule() else { return None };
    let left = succ_rank(cut.premise(0));
    let right = ant_rank(cut.premise(1), *pos);
    Some(CutRank { left, right, total: left + right })
}

/// Succedent rank index of a proof's conclusion, without a full annotation.
pub fn succ_rank(p: &Proof) -> u64 {
    match p.rule() {
        Rule::C(_) | Rule::W(_) | Rule::K(..) | Rule::AndL(..) => succ_rank(p.premise(0)) + 1,
        Rule::Cut(_) | Rule::ImpL(_) => succ_rank(p.premise(1)) + 1,
        Rule::OrL(_) => succ_rank(p.premise(0)).max(succ_rank(p.premise(1))) + 1,
        _ => 1,
    }
}

/// Rank index of antecedent position `i` of a proof's conclusion.
/// Only the ancestors of the occurrence are visited.
pub fn ant_rank(p: &Proof, i: usize) -> u64 {
    walk(p, Slot::Ant(i)).expect("position in range")
}

/// Largest total rank over all cuts, 0 if cut-free.
pub fn max_cut_rank(p: &Proof) -> u64 {
    if p.is_cut_free() {
        return 0;
    }
    let t = annotate_ranks(p);
    let mut best = 0;
    for path in p.cut_paths() {
        let node = p.subproof_at(&path).expect("cut path");
        let tn = t.at(&path).expect("same shape");
        if let Rule::Cut(pos) = node.rule() {
            best = best.max(tn.children[0].succ + tn.children[1].ant[*pos]);
        }
    }
    best
}

/// All cuts with their ranks, in post-order.
pub fn cut_ranks(p: &Proof) -> Vec<(NodePath, CutRank)> {
    let t = annotate_ranks(p);
    p.cut_paths()
        .into_iter()
        .map(|path| {
            let node = p.subproof_at(&path).expect("cut path");
            let tn = t.at(&path).expect("same shape");
            let Rule::Cut(pos) = node.rule() else { unreachable!("cut path") };
            let (left, right) = (tn.children[0].succ, tn.children[1].ant[*pos]);
            (path, CutRank { left, right, total: left + right })
        })
        .collect()
}

/// Index of one occurrence by walking its ancestors: 1 without ancestors,
/// otherwise one more than the largest ancestor index.
pub fn rank_by_ancestry(p: &Proof, o: &OccurrenceRef) -> Result<u64, KernelError> {
    let node = p.subproof_at(&o.node)?;
    walk(node, o.slot)
}

fn walk(node: &Proof, slot: Slot) -> Result<u64, KernelError> {
    let mut best = 0;
    for (k, s) in ancestors(node, slot)? {
        best = best.max(walk(node.premise(k), s)?);
    }
    Ok(best + 1)
}

/// The full table of [`rank_by_ancestry`] values, built bottom-up.
pub fn rank_table_by_ancestry(p: &Proof) -> RankTree {
    let children: Vec<RankTree> = p.premises().iter().map(rank_table_by_ancestry).collect();
    let lookup = |slot: Slot| -> u64 {
        ancestors(p, slot)
            .expect("valid slot")
            .into_iter()
            .map(|(k, s)| children[k].index(s).expect("ancestor in range"))
            .max()
            .map_or(1, |m| m + 1)
    };
    let ant = (0..p.end().ant.len()).map(|i| lookup(Slot::Ant(i))).collect();
    let succ = lookup(Slot::Succ);
    RankTree { ant, succ, children }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_proof;
    use crate::kernel::generate_proof;

    #[test]
    fn axiom_indices() {
        let t = annotate_ranks(&parse_proof("(ax p)").unwrap());
        assert_eq!((t.ant.clone(), t.succ), (vec![1], 1));
    }

    #[test]
    fn k_and_c_examples() {
        let k = parse_proof("(k 0 p (ax q))").unwrap();
        let t = annotate_ranks(&k);
        assert_eq!((t.ant.clone(), t.succ), (vec![1, 2], 2));
        let c = parse_proof("(c 0 (k 0 p (ax q)))").unwrap();
        let t = annotate_ranks(&c);
        assert_eq!((t.ant.clone(), t.succ), (vec![3, 2], 3));
    }

    #[test]
    fn cut_rank_examples() {
        let c = parse_proof("(cut 0 (ax p) (ax p))").unwrap();
        assert_eq!(cut_rank(&c, &NodePath::root()).unwrap(), CutRank { left: 1, right: 1, total: 2 });
        let c = parse_proof("(cut 1 (ax p) (c 0 (k 0 p (ax q))))").unwrap();
        assert_eq!(cut_rank(&c, &NodePath::root()).unwrap(), CutRank { left: 1, right: 2, total: 3 });
        assert!(matches!(
            cut_rank(&parse_proof("(ax p)").unwrap(), &NodePath::root()),
            Err(KernelError::WrongRule { .. })
        ));
    }

    #[test]
    fn unary_chain() {
        let p = parse_proof("(k 0 r (k 0 q (k 0 p (ax s))))").unwrap();
        let o = OccurrenceRef { node: NodePath::root(), slot: Slot::Succ };
        assert_eq!(rank_by_ancestry(&p, &o).unwrap(), 4);
        let o = OccurrenceRef::ant(NodePath(vec![0, 0, 0]), 0);
        assert_eq!(rank_by_ancestry(&p, &o).unwrap(), 1);
    }

    #[test]
    fn agreement_on_corpus() {
        for seed in 0..300 {
            let p = generate_proof(seed, 30, &["p", "q", "r"], true);
            let a = annotate_ranks(&p);
            assert_eq!(a, rank_table_by_ancestry(&p));
            for path in p.paths().into_iter().step_by(3) {
                let node = a.at(&path).unwrap();
                let o = OccurrenceRef { node: path.clone(), slot: Slot::Succ };
                assert_eq!(rank_by_ancestry(&p, &o).unwrap(), node.succ);
                for i in 0..node.ant.len() {
                    let o = OccurrenceRef::ant(path.clone(), i);
                    assert_eq!(rank_by_ancestry(&p, &o).unwrap(), node.ant[i]);
                }
            }
            for (path, r) in cut_ranks(&p) {
                assert_eq!(cut_rank(&p, &path).unwrap(), r);
                assert!(r.total >= 2);
            }
        }
    }

    /// For a topmost cut, the left index is the length of the longest chain
    /// of sequents on the left branch that carry the cut formula as
    /// succedent.
    #[test]
    fn topmost_left_rank_counts_branch() {
        fn chain(p: &Proof) -> u64 {
            let succ = &p.end().succ;
            1 + p
                .premises()
                .iter()
                .enumerate()
                .filter(|(k, q)| {
                    &q.end().succ == succ
                        && crate::kernel::descendant(p, *k, Slot::Succ) == Some(Slot::Succ)
                })
                .map(|(_, q)| chain(q))
                .max()
                .unwrap_or(0)
        }
        for seed in 0..300 {
            let p = generate_proof(seed, 30, &["p", "q", "r"], false);
            for (path, r) in cut_ranks(&p) {
                let node = p.subproof_at(&path).unwrap();
                if node.premise(0).is_cut_free() && node.premise(1).is_cut_free() {
                    assert_eq!(chain(node.premise(0)), r.left);
                }
            }
        }
    }
}
