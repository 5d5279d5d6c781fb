//! First phase: every proof becomes W-normal, keeping its endsequent and
//! degree. Contractions end up either in the tail of the proof or directly
//! above an implication introduction that discharges them.

pub mod cclass;
pub mod merge;
pub mod segment;

use crate::kernel::{is_w_normal, KernelError, Proof, Rule};
use crate::logic::Formula;
use crate::session::{EngineError, Session};
use crate::structural::{apply_cs, apply_ws, block_sizes, canonical_tail, peel, StructOp};

pub use cclass::{normalize_cclass, CClass, CClassLayer, WNormMeasure};
pub use merge::{merge_imp_l, merge_or_l};
pub use segment::{permute_w_below_c, StructuralSegment};

/// Splits off the W's at the bottom: the core and the W positions, top to
/// bottom.
pub(crate) fn split_tail(p: &Proof) -> (Proof, Vec<usize>) {
    let (core, ops) = peel(p, |r| matches!(r, Rule::W(_)));
    let ws = ops
        .into_iter()
        .map(|o| match o {
            StructOp::W(w) => w,
            _ => unreachable!("peeled only W"),
        })
        .collect();
    (core, ws)
}

/// Thins runs of a block-structured antecedent up to the target sizes,
/// adding copies at the end of each run.
pub(crate) fn pad(core: Proof, sizes: &[usize], target: &[usize], ctx: &[Formula]) -> Result<Proof, KernelError> {
    let mut cur = core;
    for i in (0..sizes.len()).rev() {
        let end: usize = sizes[..=i].iter().sum();
        for _ in sizes[i]..target[i] {
            cur = Proof::k(end, ctx[i].clone(), cur)?;
        }
    }
    Ok(cur)
}

/// W-normal proof of the same endsequent with the same degree.
pub fn w_normalize(p: &Proof, s: &mut Session) -> Result<Proof, EngineError> {
    let out = normalize(p, s)?;
    if out.end() != p.end() {
        return Err(EngineError::Invariant(format!("endsequent changed from {} to {}", p.end(), out.end())));
    }
    if out.degree() != p.degree() {
        return Err(EngineError::Invariant(format!("degree changed from {} to {}", p.degree(), out.degree())));
    }
    if !is_w_normal(&out) {
        return Err(EngineError::Invariant("output is not W-normal".into()));
    }
    Ok(out)
}

fn normalize(p: &Proof, s: &mut Session) -> Result<Proof, EngineError> {
    if p.stats().w == 0 {
        return Ok(p.clone());
    }
    let sub = |i: usize, s: &mut Session| normalize(p.premise(i), s);
    let (out, label) = match p.rule().clone() {
        Rule::Ax(_) | Rule::BotAx(_) => unreachable!("axioms contain no W"),
        Rule::C(q) => {
            let (core, ws) = split_tail(&sub(0, s)?);
            let mut ops: Vec<StructOp> = ws.into_iter().map(StructOp::W).collect();
            ops.push(StructOp::C(q));
            let (cs, ws) = segment::sort_ops(&core, ops, s)?;
            (apply_ws(apply_cs(core, &cs)?, &ws)?, "T5.5-C")
        }
        Rule::W(q) => (Proof::w(q, sub(0, s)?)?, "T5.5-W"),
        Rule::K(q, f) => {
            let (core, ws) = split_tail(&sub(0, s)?);
            // Move the thinning above each W, bottom first.
            let mut k = q;
            let mut shifted = Vec::with_capacity(ws.len());
            for &w in ws.iter().rev() {
                if k <= w {
                    shifted.push(w + 1);
                } else {
                    shifted.push(w);
                    k += 1;
                }
            }
            shifted.reverse();
            (apply_ws(Proof::k(k, f, core)?, &shifted)?, "T5.5-K")
        }
        Rule::Cut(pos) => {
            let (left, ws1) = split_tail(&sub(0, s)?);
            let (base, ws2) = split_tail(&sub(1, s)?);
            let mut layers: Vec<CClassLayer> = ws2.into_iter().map(CClassLayer::MobileW).collect();
            layers.push(CClassLayer::CutLayer { pos, left: left.clone(), cs: Vec::new() });
            layers.extend(ws1.into_iter().map(|w| CClassLayer::MobileW(w + pos)));
            let witness = CClass { base, left, layers };
            let q = witness.to_proof()?;
            (normalize_cclass(&q, &witness, s)?, "T5.5-cut")
        }
        Rule::AndL(q, side, other) => {
            let (core, ws) = split_tail(&sub(0, s)?);
            let sizes = block_sizes(core.end().ant.len(), &ws);
            let start: usize = sizes[..q].iter().sum();
            let mut cur = core;
            for j in start..start + sizes[q] {
                cur = Proof::and_l(j, side, other.clone(), cur)?;
            }
            (apply_ws(cur, &ws)?, "T5.5-AndL")
        }
        Rule::AndR => {
            let (c1, ws1) = split_tail(&sub(0, s)?);
            let (c2, ws2) = split_tail(&sub(1, s)?);
            let s1 = block_sizes(c1.end().ant.len(), &ws1);
            let s2 = block_sizes(c2.end().ant.len(), &ws2);
            let m: Vec<usize> = s1.iter().zip(&s2).map(|(a, b)| *a.max(b)).collect();
            let ctx = &p.end().ant;
            let c2 = pad(c2, &s2, &m, ctx)?;
            let c1 = pad(c1, &s1, &m, ctx)?;
            (apply_ws(Proof::and_r(c1, c2)?, &canonical_tail(&m))?, "T5.5-AndR")
        }
        Rule::OrL(pos) => {
            let (l, r) = (sub(0, s)?, sub(1, s)?);
            (merge_or_l(&l, &r, pos, s)?, "T5.5-OrL")
        }
        Rule::OrR(side, f) => {
            let (core, ws) = split_tail(&sub(0, s)?);
            (apply_ws(Proof::or_r(side, f, core)?, &ws)?, "T5.5-OrR")
        }
        Rule::ImpL(pos) => {
            let (l, r) = (sub(0, s)?, sub(1, s)?);
            (merge_imp_l(&l, &r, pos, s)?, "T5.5-ImpL")
        }
        Rule::ImpR => {
            // Contractions of the discharged formula stay above, the rest go
            // below.
            let (core, ws) = split_tail(&sub(0, s)?);
            let sizes = block_sizes(core.end().ant.len(), &ws);
            let above = apply_ws(core, &vec![0; sizes[0] - 1])?;
            (apply_ws(Proof::imp_r(above)?, &canonical_tail(&sizes[1..]))?, "T5.5-ImpR")
        }
    };
    s.step(label, &out, None)?;
    Ok(out)
}
