//! Two-premise rules over W-normal premises: the tails of contractions are
//! merged below a single application of the rule.

use crate::kernel::{ties_all, Proof};
use crate::logic::Formula;
use crate::session::{EngineError, Session};
use crate::structural::{apply_cs, apply_ws, block_sizes, canonical_tail, dup_block_contraction, StructOp};

use super::segment::sort_ops;
use super::{pad, split_tail};

fn incompatible(m: &str) -> EngineError {
    EngineError::Precondition(format!("premise shapes incompatible: {m}"))
}

/// Merges `left` (proving Θ, A, Γ ⊢ C) and `right` (proving Θ, B, Γ ⊢ C)
/// into a W-normal proof of Θ, A∨B, Γ ⊢ C. For every context occurrence the
/// tail carries the larger of the two tie counts.
pub fn merge_or_l(left: &Proof, right: &Proof, pos: usize, s: &mut Session) -> Result<Proof, EngineError> {
    let (l, r) = (left.end(), right.end());
    if l.ant.len() != r.ant.len() || pos >= l.ant.len() || l.succ != r.succ {
        return Err(incompatible("∨L premises differ in length or succedent"));
    }
    if (0..l.ant.len()).any(|i| i != pos && l.ant[i] != r.ant[i]) {
        return Err(incompatible("∨L contexts differ"));
    }
    let out = or_l(left, right, pos, s)?;
    if s.auditing() {
        let (tl, tr, to) = (ties_all(left), ties_all(right), ties_all(&out));
        let ctx = |t: &[usize]| -> Vec<usize> {
            t.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, x)| *x).collect()
        };
        let expected: Vec<usize> = ctx(&tl).iter().zip(ctx(&tr)).map(|(a, b)| (*a).max(b)).collect();
        s.tie("L5.3", expected, ctx(&to));
    }
    Ok(out)
}

fn or_l(left: &Proof, right: &Proof, pos: usize, s: &mut Session) -> Result<Proof, EngineError> {
    let (c1, ws1) = split_tail(left);
    let (c2, ws2) = split_tail(right);
    let s1 = block_sizes(c1.end().ant.len(), &ws1);
    let s2 = block_sizes(c2.end().ant.len(), &ws2);
    let mut merged: Vec<usize> = s1.iter().zip(&s2).map(|(a, b)| *a.max(b)).collect();
    let (mut t1, mut t2) = (merged.clone(), merged.clone());
    t1[pos] = s1[pos];
    t2[pos] = s2[pos];
    let ctx = &left.end().ant;
    let c1 = pad(c1, &s1, &t1, ctx)?;
    let c2 = pad(c2, &s2, &t2, &right.end().ant)?;
    merged[pos] = 1;
    let tail = canonical_tail(&merged);
    let a_start: usize = merged[..pos].iter().sum();
    let (n, m) = (s1[pos] - 1, s2[pos] - 1);
    let (a, b) = (left.end().ant[pos].clone(), right.end().ant[pos].clone());
    let ab = Formula::or(a.clone(), b.clone());
    let out = if n + m == 0 {
        apply_ws(Proof::or_l(a_start, c1, c2)?, &tail)?
    } else if n > 0 {
        // Θ', A, A, Γ' with every copy but the last collected by the first A.
        let ll = apply_ws(c1.clone(), &vec![a_start; n - 1])?;
        let lr = apply_ws(Proof::k(a_start, a.clone(), c2.clone())?, &vec![a_start + 1; m])?;
        let inner = or_l(&ll, &lr, a_start + 1, s)?;
        let rr = apply_ws(Proof::k(a_start + m + 1, ab, c2)?, &vec![a_start; m])?;
        let outer = or_l(&inner, &rr, a_start, s)?;
        apply_ws(Proof::w(a_start, outer)?, &tail)?
    } else {
        let rr = apply_ws(c2.clone(), &vec![a_start; m - 1])?;
        let rl = Proof::k(a_start, b.clone(), c1.clone())?;
        let inner = or_l(&rl, &rr, a_start + 1, s)?;
        let ll = Proof::k(a_start + 1, ab, c1)?;
        let outer = or_l(&ll, &inner, a_start, s)?;
        apply_ws(Proof::w(a_start, outer)?, &tail)?
    };
    s.step("L5.3", &out, None)?;
    Ok(out)
}

/// Merges `left` (proving Δ ⊢ A) and `right` (proving Θ, B, Γ ⊢ C with B at
/// `pos`) into a W-normal proof of Θ, Δ, A→B, Γ ⊢ C. Tie counts of Θ and Γ
/// are those of `right`.
pub fn merge_imp_l(left: &Proof, right: &Proof, pos: usize, s: &mut Session) -> Result<Proof, EngineError> {
    if pos >= right.end().ant.len() {
        return Err(incompatible("→L position out of range"));
    }
    let out = imp_l(left, right, pos, s)?;
    if s.auditing() {
        let (tr, to) = (ties_all(right), ties_all(&out));
        let dl = left.end().ant.len();
        let mut expected = tr[..pos].to_vec();
        expected.extend_from_slice(&tr[pos + 1..]);
        let mut actual = to[..pos].to_vec();
        actual.extend_from_slice(&to[pos + dl + 1..]);
        s.tie("L5.4", expected, actual);
    }
    Ok(out)
}

fn imp_l(left: &Proof, right: &Proof, pos: usize, s: &mut Session) -> Result<Proof, EngineError> {
    let (c1, ws1) = split_tail(left);
    let (c2, ws2) = split_tail(right);
    let s1 = block_sizes(c1.end().ant.len(), &ws1);
    let s2 = block_sizes(c2.end().ant.len(), &ws2);
    let dl = c1.end().ant.len();
    let b_start: usize = s2[..pos].iter().sum();
    let n = s2[pos] - 1;
    let mut sizes = s2[..pos].to_vec();
    sizes.extend_from_slice(&s1);
    sizes.push(1);
    sizes.extend_from_slice(&s2[pos + 1..]);
    let tail = canonical_tail(&sizes);
    let out = if n == 0 {
        apply_ws(Proof::imp_l(b_start, c1, c2)?, &tail)?
    } else {
        // Θ', B, B, Γ' with every copy but the last collected by the first B.
        let r1 = apply_ws(c2, &vec![b_start; n - 1])?;
        let inner = imp_l(&c1, &r1, b_start, s)?;
        let outer = imp_l(&c1, &inner, b_start + dl + 1, s)?;
        let (core, ws) = split_tail(&outer);
        let mut ops: Vec<StructOp> = ws.into_iter().map(StructOp::W).collect();
        ops.extend(dup_block_contraction(b_start, dl + 1));
        ops.extend(tail.into_iter().map(StructOp::W));
        let (cs, ws) = sort_ops(&core, ops, s)?;
        apply_ws(apply_cs(core, &cs)?, &ws)?
    };
    s.step("L5.4", &out, None)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_proof;
    use crate::kernel::{is_w_normal, validate};

    fn check(p: &Proof) {
        validate(p).unwrap();
        assert!(is_w_normal(p));
    }

    #[test]
    fn or_no_ties() {
        let l = parse_proof("(k 1 q (ax p))").unwrap();
        let out = merge_or_l(&l, &l, 0, &mut Session::default()).unwrap();
        check(&out);
        assert_eq!(out.end().to_string(), "(p | p), q |- p");
        // One ∨L over the two unchanged premises.
        assert_eq!(out.stats().nodes, 5);
    }

    #[test]
    fn or_context_ties_take_max() {
        // s, q |- q with two contractions on q; r, q |- q with one.
        let l = parse_proof("(w 1 (w 1 (k 0 s (k 1 q (k 1 q (ax q))))))").unwrap();
        let r = parse_proof("(w 1 (k 0 r (k 1 q (ax q))))").unwrap();
        assert_eq!(ties_all(&l), vec![0, 2]);
        assert_eq!(ties_all(&r), vec![0, 1]);
        let mut s = Session::default().audited();
        let out = merge_or_l(&l, &r, 0, &mut s).unwrap();
        check(&out);
        assert_eq!(out.end().to_string(), "(s | r), q |- q");
        assert_eq!(ties_all(&out)[1], 2);
        let t = &s.audit().unwrap().ties[0];
        assert_eq!(t.expected, t.actual);
        // Swapping the premises gives the same counts.
        let out2 = merge_or_l(&r, &l, 0, &mut Session::default()).unwrap();
        assert_eq!(ties_all(&out2)[1], 2);
    }

    #[test]
    fn or_principal_ties() {
        let l = parse_proof("(w 0 (k 0 s (k 0 s (ax q))))").unwrap();
        let r = parse_proof("(w 0 (w 0 (k 0 r (k 0 r (k 0 r (ax q))))))").unwrap();
        let mut s = Session::default().recording();
        let out = merge_or_l(&l, &r, 0, &mut s).unwrap();
        check(&out);
        assert_eq!(out.end().to_string(), "(s | r), q |- q");
        assert!(s.trace().len() > 1);
        assert!(s.trace().iter().all(|t| t.label == "L5.3"));
    }

    #[test]
    fn or_rejects_mismatch() {
        let l = parse_proof("(k 1 q (ax p))").unwrap();
        let r = parse_proof("(k 1 r (ax p))").unwrap();
        assert!(matches!(merge_or_l(&l, &r, 0, &mut Session::default()), Err(EngineError::Precondition(_))));
    }

    #[test]
    fn imp_base_case() {
        let l = parse_proof("(ax a)").unwrap();
        let r = parse_proof("(k 0 q (ax b))").unwrap();
        let out = merge_imp_l(&l, &r, 1, &mut Session::default()).unwrap();
        check(&out);
        assert_eq!(out.end().to_string(), "q, a, (a -> b) |- b");
        assert_eq!(out.stats().nodes, 4);
    }

    #[test]
    fn imp_duplicates_left() {
        let l = parse_proof("(w 0 (k 0 c (k 0 c (ax a))))").unwrap();
        let r = parse_proof("(w 1 (k 1 b (k 0 q (ax b))))").unwrap();
        let mut s = Session::default().audited();
        let out = merge_imp_l(&l, &r, 1, &mut s).unwrap();
        check(&out);
        assert_eq!(out.end().to_string(), "q, c, a, (a -> b) |- b");
        assert_eq!(out.stats().cuts, 0);
        // Two →L nodes: the left premise was duplicated.
        let impls = out.paths().iter().filter(|p| matches!(out.subproof_at(p).unwrap().rule(), crate::kernel::Rule::ImpL(_))).count();
        assert_eq!(impls, 2);
        let t = &s.audit().unwrap().ties[0];
        assert_eq!(t.expected, t.actual);
    }
}
