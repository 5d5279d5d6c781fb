//! Second and third phases. Every cut of a W-normal proof is made maximal
//! (rank 2, neither premise an axiom), and then principal reductions lower
//! the degree. [`eliminate_cuts`] repeats the three phases until no cut is
//! left.

use serde::Serialize;

use crate::kernel::{is_w_normal, validate, KernelError, NodePath, Proof, Rule, Side};
use crate::rank::{cut_ranks, max_cut_rank, rank_of_cut, CutRank};
use crate::session::{EngineError, Session};
use crate::structural::{apply_cs, apply_ws, move_elem};
use crate::wnorm::{split_tail, w_normalize};
use crate::zucker::shift;

/// Summary of the proof after one phase of [`eliminate_cuts`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseTraceRecord {
    pub phase: String,
    pub label: String,
    pub endsequent: String,
    pub nodes: u64,
    pub cuts: u64,
    pub degree: usize,
    pub max_rank: u64,
}

impl PhaseTraceRecord {
    fn of(phase: &str, label: &str, p: &Proof) -> PhaseTraceRecord {
        let st = p.stats();
        PhaseTraceRecord {
            phase: phase.to_string(),
            label: label.to_string(),
            endsequent: p.end().to_string(),
            nodes: st.nodes,
            cuts: st.cuts,
            degree: st.degree,
            max_rank: max_cut_rank(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutReport {
    pub path: NodePath,
    pub rank: CutRank,
    pub left_axiom: bool,
    pub right_axiom: bool,
    pub maximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityReport {
    pub cuts: Vec<CutReport>,
}

impl MaximalityReport {
    pub fn all_maximal(&self) -> bool {
        self.cuts.iter().all(|c| c.maximal)
    }
}

fn maximal_root(cut: &Proof) -> bool {
    rank_of_cut(cut).is_some_and(|r| r.total == 2)
        && !cut.premise(0).rule().is_axiom()
        && !cut.premise(1).rule().is_axiom()
}

/// Whether the cut at `path` has rank 2 and no axiom premise.
pub fn is_maximal_cut(p: &Proof, path: &NodePath) -> Result<bool, KernelError> {
    let node = p.subproof_at(path)?;
    if !matches!(node.rule(), Rule::Cut(_)) {
        return Err(KernelError::WrongRule { path: path.clone(), found: node.rule().name(), expected: "cut" });
    }
    Ok(maximal_root(node))
}

/// Every cut with its rank and maximality, in post-order.
pub fn maximality_report(p: &Proof) -> MaximalityReport {
    let cuts = cut_ranks(p)
        .into_iter()
        .map(|(path, rank)| {
            let node = p.subproof_at(&path).expect("cut path");
            let left_axiom = node.premise(0).rule().is_axiom();
            let right_axiom = node.premise(1).rule().is_axiom();
            let maximal = rank.total == 2 && !left_axiom && !right_axiom;
            CutReport { path, rank, left_axiom, right_axiom, maximal }
        })
        .collect();
    MaximalityReport { cuts }
}

/// A cut whose left premise is a cut, rewritten so that the lower cut takes
/// the upper left proof and the upper cut feeds the right premise.
/// `None` unless the root and its left premise are cuts.
pub fn lift_left_cut(p: &Proof) -> Option<Proof> {
    let Rule::Cut(pos) = *p.rule() else { return None };
    let (pi, rho) = (p.premise(0), p.premise(1));
    let Rule::Cut(q) = *pi.rule() else { return None };
    let upper = Proof::cut(pos, pi.premise(1).clone(), rho.clone()).ok()?;
    Proof::cut(pos + q, pi.premise(0).clone(), upper).ok()
}

/// The converse of [`lift_left_cut`]: the right premise is a cut and the
/// cut formula comes from its left premise. `None` otherwise.
pub fn lower_right_cut(p: &Proof) -> Option<Proof> {
    let Rule::Cut(pos) = *p.rule() else { return None };
    let (pi, rho) = (p.premise(0), p.premise(1));
    let Rule::Cut(q) = *rho.rule() else { return None };
    let n1 = rho.premise(0).end().ant.len();
    if pos < q || pos >= q + n1 {
        return None;
    }
    let upper = Proof::cut(pos - q, pi.clone(), rho.premise(0).clone()).ok()?;
    Proof::cut(q, upper, rho.premise(1).clone()).ok()
}

fn not_w_normal(what: &str) -> EngineError {
    EngineError::Precondition(format!("contraction directly above a cut ({what}); input is not W-normal"))
}

/// Builds new cuts, checks that their rank lies below the rank of the cut
/// being rewritten, and maximalizes them.
struct Builder {
    old: u64,
}

impl Builder {
    fn cut(&self, s: &mut Session, pos: usize, left: &Proof, right: &Proof) -> Result<Proof, EngineError> {
        let c = Proof::cut(pos, left.clone(), right.clone())?;
        let r = rank_of_cut(&c).expect("cut").total;
        s.measure("M", vec![self.old], vec![r]);
        if r >= self.old {
            return Err(EngineError::Invariant(format!("new cut rank {r} is not below {}", self.old)));
        }
        settle(&c, s)
    }
}

fn expect_maximal(lower: Proof, label: &str) -> Result<Proof, EngineError> {
    if !maximal_root(&lower) {
        return Err(EngineError::Invariant(format!("{label} left the lower cut nonmaximal")));
    }
    Ok(lower)
}

/// Makes the root cut maximal, given maximalized premises. The result is
/// maximalized and W-normal and never ends with a W.
fn settle(cut: &Proof, s: &mut Session) -> Result<Proof, EngineError> {
    let Rule::Cut(pos) = *cut.rule() else { return Ok(cut.clone()) };
    if maximal_root(cut) {
        return Ok(cut.clone());
    }
    let rank = rank_of_cut(cut).expect("cut");
    let (pi, rho) = (cut.premise(0), cut.premise(1));
    let dl = pi.end().ant.len();
    let b = Builder { old: rank.total };
    let no_case = || EngineError::Invariant(format!("no maximalization case matches {}", cut.end()));

    let (out, label) = if rank.total == 2 {
        match (pi.rule(), rho.rule()) {
            (Rule::Ax(_), _) => (rho.clone(), "M-1.1"),
            (Rule::BotAx(_), _) => {
                let ant = &rho.end().ant;
                let mut q = Proof::botax(rho.end().succ.clone());
                for (i, f) in ant[..pos].iter().enumerate() {
                    q = Proof::k(i, f.clone(), q)?;
                }
                for (j, f) in ant[pos + 1..].iter().enumerate() {
                    q = Proof::k(pos + 1 + j, f.clone(), q)?;
                }
                (q, "M-1.2")
            }
            (_, Rule::Ax(_)) => (pi.clone(), "M-1.3"),
            _ => return Err(no_case()),
        }
    } else if rank.left > 1 {
        match *pi.rule() {
            Rule::W(_) => return Err(not_w_normal("left premise")),
            Rule::C(q) => (Proof::c(q + pos, b.cut(s, pos, pi.premise(0), rho)?)?, "M-2.1"),
            Rule::K(q, ref f) => (Proof::k(q + pos, f.clone(), b.cut(s, pos, pi.premise(0), rho)?)?, "M-2.1"),
            Rule::AndL(q, side, ref f) => {
                (Proof::and_l(q + pos, side, f.clone(), b.cut(s, pos, pi.premise(0), rho)?)?, "M-2.1")
            }
            Rule::OrL(q) => {
                let l = b.cut(s, pos, pi.premise(0), rho)?;
                let r = b.cut(s, pos, pi.premise(1), rho)?;
                (Proof::or_l(q + pos, l, r)?, "M-2.2")
            }
            Rule::ImpL(q) => {
                let r = b.cut(s, pos, pi.premise(1), rho)?;
                (Proof::imp_l(q + pos, pi.premise(0).clone(), r)?, "M-2.3")
            }
            Rule::Cut(q) => {
                let upper = b.cut(s, pos, pi.premise(1), rho)?;
                let lower = Proof::cut(pos + q, pi.premise(0).clone(), upper)?;
                (expect_maximal(lower, "M-2.4")?, "M-2.4")
            }
            _ => return Err(no_case()),
        }
    } else {
        match *rho.rule() {
            Rule::W(_) => return Err(not_w_normal("right premise")),
            Rule::OrR(side, ref f) => (Proof::or_r(side, f.clone(), b.cut(s, pos, pi, rho.premise(0))?)?, "M-3.1"),
            Rule::K(q, ref f) => {
                let p0 = if pos < q { pos } else { pos - 1 };
                (Proof::k(shift(q, pos, dl), f.clone(), b.cut(s, p0, pi, rho.premise(0))?)?, "M-3.1")
            }
            Rule::AndL(q, side, ref f) => {
                let inner = b.cut(s, pos, pi, rho.premise(0))?;
                (Proof::and_l(shift(q, pos, dl), side, f.clone(), inner)?, "M-3.1")
            }
            Rule::C(q) if pos == q => (apply_cs(b.cut(s, q + 1, pi, rho.premise(0))?, &move_elem(q, q + dl))?, "M-3.1"),
            Rule::C(q) if pos == q + 1 => {
                (apply_cs(b.cut(s, q, pi, rho.premise(0))?, &move_elem(q + dl, q))?, "M-3.1")
            }
            Rule::C(q) => (Proof::c(shift(q, pos, dl), b.cut(s, pos, pi, rho.premise(0))?)?, "M-3.1"),
            Rule::AndR => {
                let l = b.cut(s, pos, pi, rho.premise(0))?;
                let r = b.cut(s, pos, pi, rho.premise(1))?;
                (Proof::and_r(l, r)?, "M-3.2")
            }
            Rule::OrL(q) => {
                let l = b.cut(s, pos, pi, rho.premise(0))?;
                let r = b.cut(s, pos, pi, rho.premise(1))?;
                (Proof::or_l(shift(q, pos, dl), l, r)?, "M-3.3")
            }
            Rule::ImpL(q) => {
                let (r1, r2) = (rho.premise(0), rho.premise(1));
                let n1 = r1.end().ant.len();
                let out = if pos < q {
                    Proof::imp_l(q + dl - 1, r1.clone(), b.cut(s, pos, pi, r2)?)?
                } else if pos < q + n1 {
                    Proof::imp_l(q, b.cut(s, pos - q, pi, r1)?, r2.clone())?
                } else if pos > q + n1 {
                    Proof::imp_l(q, r1.clone(), b.cut(s, pos - n1, pi, r2)?)?
                } else {
                    return Err(no_case());
                };
                (out, "M-3.5")
            }
            Rule::ImpR => {
                // Carry the cut above the contractions of the discharged
                // formula, tracking the cut formula upward.
                let (core, ws) = split_tail(rho.premise(0));
                let mut x = pos + 1;
                let mut new_ws = Vec::with_capacity(ws.len());
                for &w in ws.iter().rev() {
                    if x == w {
                        return Err(EngineError::Precondition(
                            "contraction above →R is tied to the cut formula".into(),
                        ));
                    }
                    new_ws.push(if w < x { w } else { w + dl - 1 });
                    if x > w {
                        x += 1;
                    }
                }
                new_ws.reverse();
                let inner = b.cut(s, x, pi, &core)?;
                (Proof::imp_r(apply_ws(inner, &new_ws)?)?, "M-3.6")
            }
            Rule::Cut(q) => {
                let (r1, r2) = (rho.premise(0), rho.premise(1));
                let n1 = r1.end().ant.len();
                if pos >= q && pos < q + n1 {
                    let upper = b.cut(s, pos - q, pi, r1)?;
                    let lower = Proof::cut(q, upper, r2.clone())?;
                    (expect_maximal(lower, "M-3.7")?, "M-3.7")
                } else {
                    let (upos, lpos) = if pos < q { (pos, q + dl - 1) } else { (pos - n1 + 1, q) };
                    let upper = b.cut(s, upos, pi, r2)?;
                    let lower = Proof::cut(lpos, r1.clone(), upper)?;
                    (expect_maximal(lower, "M-3.8")?, "M-3.8")
                }
            }
            _ => return Err(no_case()),
        }
    };
    s.step(label, &out, Some(format!("rank {}", rank.total)))?;
    Ok(out)
}

fn maxim(p: &Proof, s: &mut Session) -> Result<Proof, EngineError> {
    if p.is_cut_free() {
        return Ok(p.clone());
    }
    let premises = p.premises().iter().map(|q| maxim(q, s)).collect::<Result<Vec<_>, _>>()?;
    let q = p.with_premises(premises)?;
    settle(&q, s)
}

/// Maximalized W-normal proof of the same endsequent and of the same or a
/// lower degree. Nonmaximal cuts are treated innermost first.
pub fn maximalize(p: &Proof, s: &mut Session) -> Result<Proof, EngineError> {
    if !is_w_normal(p) {
        return Err(EngineError::Precondition("input is not W-normal".into()));
    }
    let out = maxim(p, s)?;
    if out.end() != p.end() {
        return Err(EngineError::Invariant(format!("endsequent changed from {} to {}", p.end(), out.end())));
    }
    if out.degree() > p.degree() {
        return Err(EngineError::Invariant("degree grew".into()));
    }
    if !is_w_normal(&out) {
        return Err(EngineError::Invariant("output is not W-normal".into()));
    }
    if let Some(c) = maximality_report(&out).cuts.into_iter().find(|c| !c.maximal) {
        return Err(EngineError::Invariant(format!("cut at {} is not maximal", c.path)));
    }
    Ok(out)
}

fn principal(cut: &Proof, s: &mut Session) -> Result<Proof, EngineError> {
    let Rule::Cut(pos) = *cut.rule() else { return Ok(cut.clone()) };
    let (pi, rho) = (cut.premise(0), cut.premise(1));
    let not_maximal = || EngineError::Precondition(format!("cut proving {} is not maximal", cut.end()));
    if !maximal_root(cut) {
        return Err(not_maximal());
    }
    let (out, label) = match (pi.rule(), rho.rule()) {
        (_, Rule::K(q, _)) if *q == pos => {
            let mut out = rho.premise(0).clone();
            for (j, f) in pi.end().ant.iter().enumerate() {
                out = Proof::k(pos + j, f.clone(), out)?;
            }
            (out, "D-K")
        }
        (Rule::AndR, Rule::AndL(q, side, _)) if *q == pos => {
            let src = match side {
                Side::First => pi.premise(0),
                Side::Second => pi.premise(1),
            };
            (Proof::cut(pos, src.clone(), rho.premise(0).clone())?, "D-∧")
        }
        (Rule::OrR(side, _), Rule::OrL(q)) if *q == pos => {
            let r = match side {
                Side::First => rho.premise(0),
                Side::Second => rho.premise(1),
            };
            (Proof::cut(pos, pi.premise(0).clone(), r.clone())?, "D-∨")
        }
        (Rule::ImpR, Rule::ImpL(q)) if q + rho.premise(0).end().ant.len() == pos => {
            let inner = Proof::cut(0, rho.premise(0).clone(), pi.premise(0).clone())?;
            (Proof::cut(*q, inner, rho.premise(1).clone())?, "D-→")
        }
        _ => return Err(not_maximal()),
    };
    s.step(label, &out, None)?;
    Ok(out)
}

fn reduce(p: &Proof, s: &mut Session) -> Result<Proof, EngineError> {
    if p.is_cut_free() {
        return Ok(p.clone());
    }
    let premises = p.premises().iter().map(|q| reduce(q, s)).collect::<Result<Vec<_>, _>>()?;
    principal(&p.with_premises(premises)?, s)
}

/// Applies a principal reduction to every cut of a maximalized proof, top
/// down. The degree strictly decreases.
pub fn reduce_degree(p: &Proof, s: &mut Session) -> Result<Proof, EngineError> {
    if p.degree() == 0 {
        return Err(EngineError::Precondition("proof degree is 0".into()));
    }
    let out = reduce(p, s)?;
    if out.end() != p.end() {
        return Err(EngineError::Invariant(format!("endsequent changed from {} to {}", p.end(), out.end())));
    }
    if out.degree() >= p.degree() {
        return Err(EngineError::Invariant(format!("degree {} did not drop below {}", out.degree(), p.degree())));
    }
    Ok(out)
}

/// Cut-free proof of the same endsequent, by repeating W-normalization,
/// maximalization and degree reduction.
pub fn eliminate_cuts(p: &Proof, s: &mut Session) -> Result<(Proof, Vec<PhaseTraceRecord>), EngineError> {
    validate(p)?;
    let bound = p.degree() + 2;
    let mut cur = p.clone();
    let mut records = Vec::new();
    let mut rounds = 0;
    while !cur.is_cut_free() {
        rounds += 1;
        if rounds > bound {
            return Err(EngineError::Invariant(format!("more than {bound} rounds")));
        }
        s.set_phase("P1");
        cur = w_normalize(&cur, s)?;
        records.push(PhaseTraceRecord::of("P1", "T5.5", &cur));
        s.set_phase("P2");
        cur = maximalize(&cur, s)?;
        records.push(PhaseTraceRecord::of("P2", "T6.1", &cur));
        if cur.is_cut_free() {
            break;
        }
        s.set_phase("P3");
        cur = reduce_degree(&cur, s)?;
        records.push(PhaseTraceRecord::of("P3", "T6.2", &cur));
    }
    if cur.end() != p.end() {
        return Err(EngineError::Invariant(format!("endsequent changed from {} to {}", p.end(), cur.end())));
    }
    Ok((cur, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_proof;
    use crate::kernel::generate_proof;
    use crate::rank::cut_rank;

    fn parse(t: &str) -> Proof {
        parse_proof(t).unwrap()
    }

    #[test]
    fn maximal_examples() {
        let root = NodePath::root();
        assert!(!is_maximal_cut(&parse("(cut 0 (ax p) (ax p))"), &root).unwrap());
        // p∧p against ∧L: both premises introduce the cut formula.
        let c = parse("(cut 0 (andr (ax p) (ax p)) (andl 0 1 p (ax p)))");
        assert_eq!(cut_rank(&c, &root).unwrap().total, 2);
        assert!(is_maximal_cut(&c, &root).unwrap());
        // A K on the right raises the index of the cut formula.
        let c = parse("(cut 0 (andr (ax p) (ax p)) (k 1 q (andl 0 1 p (ax p))))");
        assert!(!is_maximal_cut(&c, &root).unwrap());
        assert!(is_maximal_cut(&parse("(ax p)"), &root).is_err());
    }

    #[test]
    fn axiom_cut_removed() {
        let mut s = Session::default().recording();
        let out = maximalize(&parse("(cut 0 (ax p) (ax p))"), &mut s).unwrap();
        assert_eq!(out, parse("(ax p)"));
        assert_eq!(s.trace()[0].label, "M-1.1");
        let w = parse("(w 0 (k 0 p (ax p)))");
        assert_eq!(maximalize(&w, &mut Session::default()).unwrap(), w);
    }

    #[test]
    fn rejects_non_w_normal() {
        let p = parse("(cut 0 (ax p) (w 0 (k 0 p (ax p))))");
        assert!(matches!(maximalize(&p, &mut Session::default()), Err(EngineError::Precondition(_))));
    }

    #[test]
    fn impr_with_contraction_block() {
        // The right premise discharges r after contracting two copies of it;
        // the cut formula p∧p sits in the context.
        let pi = parse("(andr (ax p) (ax p))");
        let rho = parse("(impr (w 0 (k 0 r (k 0 r (k 1 q (ax (p & p)))))))");
        assert_eq!(rho.end().to_string(), "(p & p), q |- (r -> (p & p))");
        let c = Proof::cut(0, pi, rho).unwrap();
        let mut s = Session::default().recording().audited();
        let out = maximalize(&c, &mut s).unwrap();
        validate(&out).unwrap();
        assert!(s.trace().iter().any(|r| r.label == "M-3.6"));
        assert!(matches!(out.rule(), Rule::ImpR));
        assert!(matches!(out.premise(0).rule(), Rule::W(0)));
        assert_eq!(out.end(), c.end());
    }

    #[test]
    fn principal_reductions() {
        let mut s = Session::default().recording();
        let c = parse("(cut 0 (andr (ax p) (ax p)) (andl 0 1 p (ax p)))");
        let out = reduce_degree(&c, &mut s).unwrap();
        assert_eq!(out, parse("(cut 0 (ax p) (ax p))"));
        assert_eq!(s.trace()[0].label, "D-∧");
        // (p → q) against →L: a cut on p feeding a cut on q.
        let c = parse("(cut 1 (impr (k 0 p (ax q))) (impl 0 (ax p) (ax q)))");
        assert_eq!(c.end().to_string(), "p, q |- q");
        let out = reduce_degree(&c, &mut s).unwrap();
        validate(&out).unwrap();
        assert!(matches!(out.rule(), Rule::Cut(0)));
        assert!(matches!(out.premise(0).rule(), Rule::Cut(0)));
        assert_eq!(out.degree(), 0);
    }

    #[test]
    fn reassociation_round_trip() {
        let a = parse("(andr (ax p) (ax p))");
        let b = parse("(andl 0 1 p (k 1 q (ax p)))");
        let c = parse("(k 0 r (ax p))");
        let p = Proof::cut(1, Proof::cut(0, a, b).unwrap(), c).unwrap();
        let lifted = lift_left_cut(&p).unwrap();
        assert_eq!(lifted.end(), p.end());
        assert_eq!(lower_right_cut(&lifted).unwrap(), p);
    }

    #[test]
    fn golden_example() {
        let p = parse("(cut 0 (impl 0 (ax a) (ax a)) (impl 0 (ax a) (ax a)))");
        assert_eq!(p.end().to_string(), "a, (a -> a), (a -> a) |- a");
        let (out, recs) = eliminate_cuts(&p, &mut Session::default()).unwrap();
        validate(&out).unwrap();
        assert!(out.is_cut_free());
        assert_eq!(out.end(), p.end());
        assert!(!recs.is_empty());
        let (ax, recs) = eliminate_cuts(&parse("(ax p)"), &mut Session::default()).unwrap();
        assert_eq!(ax, parse("(ax p)"));
        assert!(recs.is_empty());
    }

    #[test]
    fn corpus() {
        for seed in 0..300 {
            let p = generate_proof(seed, 30, &["p", "q", "r"], seed % 2 == 0);
            let mut s = Session::default().audited();
            let (out, recs) = eliminate_cuts(&p, &mut s).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            validate(&out).unwrap();
            assert!(out.is_cut_free());
            assert_eq!(out.end(), p.end());
            let rounds = recs.iter().filter(|r| r.phase == "P1").count();
            assert!(rounds <= p.degree() + 2, "seed {seed}");
            let a = s.audit().unwrap();
            assert!(a.measures.iter().all(|m| m.decreased()), "seed {seed}");
        }
    }
}
