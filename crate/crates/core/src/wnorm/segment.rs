//! Chains of W and C nodes, and the rewriting that moves every W below
//! every C.

use crate::kernel::{conclude, Proof, Rule};
use crate::logic::Sequent;
use crate::session::{EngineError, Session};
use crate::structural::{apply_ops, StructOp};

/// A chain of W and C applications below `top`, listed top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralSegment {
    pub top: Proof,
    pub ops: Vec<StructOp>,
}

impl StructuralSegment {
    pub fn new(top: Proof, ops: Vec<StructOp>) -> Result<StructuralSegment, EngineError> {
        let seg = StructuralSegment { top, ops };
        seg.bottom()?;
        Ok(seg)
    }

    /// The upper endpoint.
    pub fn top_sequent(&self) -> &Sequent {
        self.top.end()
    }

    /// The lower endpoint, checking every op along the way.
    pub fn bottom(&self) -> Result<Sequent, EngineError> {
        let mut cur = self.top.end().clone();
        for op in &self.ops {
            let rule = match op {
                StructOp::C(i) => Rule::C(*i),
                StructOp::W(i) => Rule::W(*i),
                StructOp::K(..) => {
                    return Err(EngineError::Precondition("segment contains a K application".into()))
                }
            };
            cur = conclude(&rule, &[&cur])?;
        }
        Ok(cur)
    }

    pub fn to_proof(&self) -> Result<Proof, EngineError> {
        Ok(apply_ops(self.top.clone(), &self.ops)?)
    }

    pub fn w_count(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, StructOp::W(_))).count()
    }

    /// True when no W sits above a C.
    pub fn is_sorted(&self) -> bool {
        let first_w = self.ops.iter().position(|o| matches!(o, StructOp::W(_)));
        first_w.is_none_or(|i| self.ops[i..].iter().all(|o| matches!(o, StructOp::W(_))))
    }
}

/// Minimal C-block with the same net permutation as `cs` on `n` elements,
/// moving the leftmost target first.
pub fn compress_cs(n: usize, cs: &[usize]) -> Vec<usize> {
    let mut arr: Vec<usize> = (0..n).collect();
    for &c in cs {
        arr.swap(c, c + 1);
    }
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for (t, &want) in arr.iter().enumerate() {
        let s = cur.iter().position(|&x| x == want).expect("permutation");
        for j in (t..s).rev() {
            cur.swap(j, j + 1);
            out.push(j);
        }
    }
    out
}

/// Antecedent length before each op.
fn lengths(n0: usize, ops: &[StructOp]) -> Vec<usize> {
    let mut out = Vec::with_capacity(ops.len() + 1);
    let mut n = n0;
    out.push(n);
    for op in ops {
        if matches!(op, StructOp::W(_)) {
            n -= 1;
        }
        out.push(n);
    }
    out
}

/// The W count, then for each W from the bottom up the number of C's below
/// it. Every rewrite of [`sort_ops`] lowers this lexicographically.
fn sort_measure(ops: &[StructOp]) -> Vec<u64> {
    let mut below = 0;
    let mut per_w = Vec::new();
    for op in ops.iter().rev() {
        match op {
            StructOp::C(_) => below += 1,
            _ => per_w.push(below),
        }
    }
    let mut out = vec![per_w.len() as u64];
    out.extend(per_w);
    out
}

/// One W immediately above one C, rewritten with the C moved above.
fn swap_w_c(w: usize, c: usize) -> (Vec<StructOp>, &'static str) {
    use StructOp::{C, W};
    if c + 1 < w {
        (vec![C(c), W(w)], "L5.1b")
    } else if c > w {
        (vec![C(c + 1), W(w)], "L5.1b")
    } else if c == w {
        // The contracted formula moves right past its neighbour.
        (vec![C(w + 1), C(w), W(w + 1)], "L5.1a")
    } else {
        // The contracted formula moves left past its neighbour.
        (vec![C(w - 1), C(w), W(w - 1)], "L5.1a")
    }
}

/// Rewrites a W/C chain into C's followed by W's with the same endpoints.
/// Returns the C positions and W positions, top to bottom.
pub(crate) fn sort_ops(
    top: &Proof,
    mut ops: Vec<StructOp>,
    s: &mut Session,
) -> Result<(Vec<usize>, Vec<usize>), EngineError> {
    let n0 = top.end().ant.len();
    let w_before = ops.iter().filter(|o| matches!(o, StructOp::W(_))).count();
    let is_c = |o: &StructOp| matches!(o, StructOp::C(_));
    loop {
        let found = (0..ops.len().saturating_sub(1))
            .rev()
            .find(|&i| matches!(ops[i], StructOp::W(_)) && is_c(&ops[i + 1]));
        let Some(i) = found else { break };
        let (StructOp::W(w), StructOp::C(c)) = (&ops[i], &ops[i + 1]) else { unreachable!() };
        let (new, label) = swap_w_c(*w, *c);
        let before = if s.auditing() { Some(sort_measure(&ops)) } else { None };
        let added = new.len() - 1;
        ops.splice(i..i + 2, new);
        // Compress the C-run that now ends just above the W.
        let end = i + added;
        let mut start = i;
        while start > 0 && is_c(&ops[start - 1]) {
            start -= 1;
        }
        let n = lengths(n0, &ops)[start];
        let run: Vec<usize> = ops[start..end]
            .iter()
            .map(|o| match o {
                StructOp::C(c) => *c,
                _ => unreachable!("C-run"),
            })
            .collect();
        let compressed = compress_cs(n, &run);
        ops.splice(start..end, compressed.into_iter().map(StructOp::C));
        if let Some(before) = before {
            s.measure("L5.1", before, sort_measure(&ops));
        }
        s.step_with(label, None, || apply_ops(top.clone(), &ops))?;
    }
    let split = ops.iter().position(|o| !is_c(o)).unwrap_or(ops.len());
    let cs = ops[..split]
        .iter()
        .map(|o| match o {
            StructOp::C(c) => *c,
            _ => unreachable!(),
        })
        .collect();
    let ws: Vec<usize> = ops[split..]
        .iter()
        .map(|o| match o {
            StructOp::W(w) => *w,
            other => unreachable!("sorted segment has {other:?} after the C-block"),
        })
        .collect();
    s.w_count(w_before, ws.len());
    Ok((cs, ws))
}

/// Moves every W of the segment below every C. The endpoints and the number
/// of W's stay the same, and each W keeps the endsequent occurrence it is
/// tied to.
pub fn permute_w_below_c(seg: &StructuralSegment, s: &mut Session) -> Result<StructuralSegment, EngineError> {
    let bottom = seg.bottom()?;
    let (cs, ws) = sort_ops(&seg.top, seg.ops.clone(), s)?;
    let ops: Vec<StructOp> =
        cs.into_iter().map(StructOp::C).chain(ws.into_iter().map(StructOp::W)).collect();
    let out = StructuralSegment { top: seg.top.clone(), ops };
    if out.bottom()? != bottom {
        return Err(EngineError::Invariant("segment endpoint changed".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_proof;
    use crate::kernel::ties_all;
    use proptest::prelude::*;
    use StructOp::{C, W};

    fn seg(top: &str, ops: Vec<StructOp>) -> StructuralSegment {
        StructuralSegment::new(parse_proof(top).unwrap(), ops).unwrap()
    }

    /// p, p, q, r |- p
    const TOP: &str = "(k 3 r (k 2 q (k 1 p (ax p))))";

    #[test]
    fn empty_c_block_unchanged() {
        let sg = seg(TOP, vec![W(0)]);
        let out = permute_w_below_c(&sg, &mut Session::default()).unwrap();
        assert_eq!(out, sg);
    }

    #[test]
    fn disjoint_commute() {
        // W on the p pair, then swap q and r.
        let sg = seg(TOP, vec![W(0), C(1)]);
        let out = permute_w_below_c(&sg, &mut Session::default()).unwrap();
        assert_eq!(out.ops, vec![C(2), W(0)]);
    }

    #[test]
    fn overlap_three_step() {
        // p, p, q, r: W gives p, q, r; C 0 gives q, p, r.
        let sg = seg(TOP, vec![W(0), C(0)]);
        let mut s = Session::default().recording();
        let out = permute_w_below_c(&sg, &mut s).unwrap();
        assert_eq!(out.ops, vec![C(1), C(0), W(1)]);
        assert_eq!(out.bottom().unwrap(), sg.bottom().unwrap());
        assert_eq!(s.trace()[0].label, "L5.1a");
    }

    #[test]
    fn compress_is_minimal() {
        assert_eq!(compress_cs(3, &[0, 0]), Vec::<usize>::new());
        assert_eq!(compress_cs(3, &[1, 0]), vec![1, 0]);
        assert_eq!(compress_cs(4, &[2, 1, 0, 2]), vec![2, 1, 0, 2]);
    }

    fn arb_ops() -> impl Strategy<Value = Vec<(bool, usize)>> {
        prop::collection::vec((any::<bool>(), 0usize..8), 0..14)
    }

    proptest! {
        /// Random chains over an antecedent with repeated formulas: the
        /// sorted chain has the same endpoints, the same W count and the same
        /// tie counts.
        #[test]
        fn sorting_preserves_endpoints_and_ties(raw in arb_ops()) {
            // a, a, b, a, b, a |- a
            let top = parse_proof(
                "(k 5 a (k 4 b (k 3 a (k 2 b (k 0 a (ax a))))))"
            ).unwrap();
            let mut ops = Vec::new();
            let mut cur = top.end().clone();
            for (is_w, k) in raw {
                let n = cur.ant.len();
                if n < 2 { break; }
                let i = k % (n - 1);
                let (rule, op) = if is_w && cur.ant[i] == cur.ant[i + 1] {
                    (Rule::W(i), W(i))
                } else {
                    (Rule::C(i), C(i))
                };
                cur = conclude(&rule, &[&cur]).unwrap();
                ops.push(op);
            }
            let sg = StructuralSegment::new(top, ops).unwrap();
            let out = permute_w_below_c(&sg, &mut Session::default()).unwrap();
            prop_assert!(out.is_sorted());
            prop_assert_eq!(out.bottom().unwrap(), sg.bottom().unwrap());
            prop_assert_eq!(out.w_count(), sg.w_count());
            prop_assert_eq!(
                ties_all(&out.to_proof().unwrap()),
                ties_all(&sg.to_proof().unwrap())
            );
            let mut s = Session::default().audited();
            permute_w_below_c(&sg, &mut s).unwrap();
            prop_assert!(s.audit().unwrap().measures.iter().all(|m| m.decreased() && m.before[0] == m.after[0]));
        }
    }
}
