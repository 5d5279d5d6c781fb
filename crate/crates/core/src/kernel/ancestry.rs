//! Occurrence ancestry, clusters and the classification of contractions.
//!
//! Ancestry only links occurrences of the same formula across one rule
//! application. Axioms do not link their antecedent and succedent, and the
//! principal formula of a connective rule has no ancestors.

use std::collections::BTreeSet;
use std::fmt;

use super::{KernelError, NodePath, Proof, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Ant(usize),
    Succ,
}

/// A formula occurrence in the conclusion of the node at `node`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccurrenceRef {
    pub node: NodePath,
    pub slot: Slot,
}

impl OccurrenceRef {
    pub fn ant(node: NodePath, i: usize) -> OccurrenceRef {
        OccurrenceRef { node, slot: Slot::Ant(i) }
    }
}

impl fmt::Display for OccurrenceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slot {
            Slot::Ant(i) => write!(f, "{}@ant{}", self.node, i),
            Slot::Succ => write!(f, "{}@succ", self.node),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionStatus {
    DirectlyEngaged(NodePath),
    Engaged(NodePath),
    Neutral,
}

fn check_slot(p: &Proof, slot: Slot) -> Result<(), KernelError> {
    match slot {
        Slot::Ant(i) if i >= p.end().ant.len() => Err(KernelError::BadOccurrence(format!(
            "antecedent {i} of {}",
            p.end()
        ))),
        _ => Ok(()),
    }
}

/// Ancestors of a conclusion occurrence of `p` as `(premise index, slot)`.
pub fn ancestors(p: &Proof, slot: Slot) -> Result<Vec<(usize, Slot)>, KernelError> {
    use Slot::{Ant, Succ};
    check_slot(p, slot)?;
    let i = match slot {
        Succ => {
            return Ok(match p.rule() {
                Rule::C(_) | Rule::W(_) | Rule::K(..) | Rule::AndL(..) => vec![(0, Succ)],
                Rule::OrL(_) => vec![(0, Succ), (1, Succ)],
                Rule::Cut(_) | Rule::ImpL(_) => vec![(1, Succ)],
                _ => vec![],
            })
        }
        Ant(i) => i,
    };
    let out = match *p.rule() {
        Rule::Ax(_) | Rule::BotAx(_) => vec![],
        Rule::C(pos) => {
            let j = if i == pos {
                pos + 1
            } else if i == pos + 1 {
                pos
            } else {
                i
            };
            vec![(0, Ant(j))]
        }
        Rule::W(pos) => {
            if i < pos {
                vec![(0, Ant(i))]
            } else if i == pos {
                vec![(0, Ant(pos)), (0, Ant(pos + 1))]
            } else {
                vec![(0, Ant(i + 1))]
            }
        }
        Rule::K(pos, _) => {
            if i == pos {
                vec![]
            } else if i < pos {
                vec![(0, Ant(i))]
            } else {
                vec![(0, Ant(i - 1))]
            }
        }
        Rule::Cut(pos) => {
            let l = p.premise(0).end().ant.len();
            if i < pos {
                vec![(1, Ant(i))]
            } else if i < pos + l {
                vec![(0, Ant(i - pos))]
            } else {
                vec![(1, Ant(i + 1 - l))]
            }
        }
        Rule::AndL(pos, ..) | Rule::OrL(pos) if i == pos => vec![],
        Rule::AndL(..) | Rule::OrR(..) => vec![(0, Ant(i))],
        Rule::AndR | Rule::OrL(_) => vec![(0, Ant(i)), (1, Ant(i))],
        Rule::ImpL(pos) => {
            let d = p.premise(0).end().ant.len();
            if i < pos {
                vec![(1, Ant(i))]
            } else if i < pos + d {
                vec![(0, Ant(i - pos))]
            } else if i == pos + d {
                vec![]
            } else {
                vec![(1, Ant(i - d))]
            }
        }
        Rule::ImpR => vec![(0, Ant(i + 1))],
    };
    Ok(out)
}

/// The conclusion occurrence of `p` that descends from `slot` in premise `k`,
/// or `None` if the occurrence is consumed by the rule.
pub fn descendant(p: &Proof, k: usize, slot: Slot) -> Option<Slot> {
    use Slot::{Ant, Succ};
    let j = match slot {
        Succ => {
            return match (p.rule(), k) {
                (Rule::C(_) | Rule::W(_) | Rule::K(..) | Rule::AndL(..) | Rule::OrL(_), _) => {
                    Some(Succ)
                }
                (Rule::Cut(_) | Rule::ImpL(_), 1) => Some(Succ),
                _ => None,
            }
        }
        Ant(j) => j,
    };
    match *p.rule() {
        Rule::Ax(_) | Rule::BotAx(_) => None,
        Rule::C(pos) => Some(Ant(if j == pos {
            pos + 1
        } else if j == pos + 1 {
            pos
        } else {
            j
        })),
        Rule::W(pos) => Some(Ant(if j <= pos {
            j
        } else if j == pos + 1 {
            pos
        } else {
            j - 1
        })),
        Rule::K(pos, _) => Some(Ant(if j < pos { j } else { j + 1 })),
        Rule::Cut(pos) => {
            let l = p.premise(0).end().ant.len();
            if k == 0 {
                Some(Ant(pos + j))
            } else if j < pos {
                Some(Ant(j))
            } else if j == pos {
                None
            } else {
                Some(Ant(j + l - 1))
            }
        }
        Rule::AndL(pos, ..) | Rule::OrL(pos) => (j != pos).then_some(Ant(j)),
        Rule::AndR | Rule::OrR(..) => Some(Ant(j)),
        Rule::ImpL(pos) => {
            let d = p.premise(0).end().ant.len();
            if k == 0 {
                Some(Ant(pos + j))
            } else if j < pos {
                Some(Ant(j))
            } else if j == pos {
                None
            } else {
                Some(Ant(j + d))
            }
        }
        Rule::ImpR => (j > 0).then(|| Ant(j - 1)),
    }
}

/// Upward closure of `g` under the ancestor relation.
pub fn cluster_of(p: &Proof, g: &OccurrenceRef) -> Result<BTreeSet<OccurrenceRef>, KernelError> {
    if !matches!(g.slot, Slot::Ant(_)) {
        return Err(KernelError::BadOccurrence(format!("{g} is not an antecedent occurrence")));
    }
    let node = p.subproof_at(&g.node)?;
    check_slot(node, g.slot)?;
    let mut out = BTreeSet::new();
    let mut stack = vec![(node, g.clone())];
    while let Some((n, occ)) = stack.pop() {
        if !out.insert(occ.clone()) {
            continue;
        }
        for (k, s) in ancestors(n, occ.slot)? {
            stack.push((n.premise(k), OccurrenceRef { node: occ.node.child(k), slot: s }));
        }
    }
    Ok(out)
}

/// Follows an occurrence down towards the root. Returns the list of
/// `(node path, slot)` it passes through, starting with the given one, and
/// ends either at the root or where the occurrence is consumed.
pub fn trace_down(p: &Proof, occ: &OccurrenceRef) -> Result<Vec<OccurrenceRef>, KernelError> {
    let mut nodes = vec![p];
    for &i in &occ.node.0 {
        let last = *nodes.last().expect("nonempty");
        nodes.push(last.premises().get(i).ok_or_else(|| KernelError::BadPath(occ.node.clone()))?);
    }
    check_slot(nodes.last().expect("nonempty"), occ.slot)?;
    let mut out = vec![occ.clone()];
    let mut path = occ.node.0.clone();
    let mut slot = occ.slot;
    while let Some(k) = path.pop() {
        let parent = nodes[path.len()];
        match descendant(parent, k, slot) {
            Some(s) => {
                slot = s;
                out.push(OccurrenceRef { node: NodePath(path.clone()), slot });
            }
            None => break,
        }
    }
    Ok(out)
}

/// The cut (if any) whose right-premise cut formula has the occurrence in
/// its cluster.
fn engaging_cut(p: &Proof, occ: &OccurrenceRef) -> Result<Option<NodePath>, KernelError> {
    let chain = trace_down(p, occ)?;
    let last = chain.last().expect("nonempty");
    let Some(parent) = last.node.parent() else {
        return Ok(None);
    };
    let k = last.node.last().expect("not root");
    let parent_node = p.subproof_at(&parent)?;
    if let (Rule::Cut(pos), 1, Slot::Ant(i)) = (parent_node.rule(), k, last.slot) {
        if *pos == i {
            return Ok(Some(parent));
        }
    }
    Ok(None)
}

/// Engagement status of the W application at `w`.
pub fn classify_contraction(p: &Proof, w: &NodePath) -> Result<ContractionStatus, KernelError> {
    let node = p.subproof_at(w)?;
    let Rule::W(pos) = node.rule() else {
        return Err(KernelError::WrongRule {
            path: w.clone(),
            found: node.rule().name(),
            expected: "w",
        });
    };
    let occ = OccurrenceRef::ant(w.clone(), *pos);
    Ok(match engaging_cut(p, &occ)? {
        Some(cut) if Some(&cut) == w.parent().as_ref() => ContractionStatus::DirectlyEngaged(cut),
        Some(cut) => ContractionStatus::Engaged(cut),
        None => ContractionStatus::Neutral,
    })
}

/// Paths of all W nodes, in pre-order.
pub fn w_paths(p: &Proof) -> Vec<NodePath> {
    p.paths()
        .into_iter()
        .filter(|path| matches!(p.subproof_at(path).map(|n| n.rule()), Ok(Rule::W(_))))
        .collect()
}

/// Number of W applications tied to endsequent antecedent position `pos`.
pub fn ties(p: &Proof, pos: usize) -> Result<usize, KernelError> {
    let cluster = cluster_of(p, &OccurrenceRef::ant(NodePath::root(), pos))?;
    let mut n = 0;
    for occ in &cluster {
        if let (Rule::W(wp), Slot::Ant(i)) = (p.subproof_at(&occ.node)?.rule(), occ.slot) {
            if *wp == i {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Tie counts for every endsequent antecedent position, computed by walking
/// each W principal down to the root.
pub fn ties_all(p: &Proof) -> Vec<usize> {
    let mut out = vec![0; p.end().ant.len()];
    count_ties(p, &mut Vec::new(), &mut out, p);
    out
}

fn count_ties(root: &Proof, path: &mut Vec<usize>, out: &mut [usize], node: &Proof) {
    if node.stats().w == 0 {
        return;
    }
    if let Rule::W(pos) = node.rule() {
        let occ = OccurrenceRef::ant(NodePath(path.clone()), *pos);
        let chain = trace_down(root, &occ).expect("valid occurrence");
        let last = chain.last().expect("nonempty");
        if let (true, Slot::Ant(i)) = (last.node.is_empty(), last.slot) {
            out[i] += 1;
        }
    }
    for (i, q) in node.premises().iter().enumerate() {
        path.push(i);
        count_ties(root, path, out, q);
        path.pop();
    }
}
