//! Direct cut elimination for implication-free proofs, driven by the
//! lexicographic measure ⟨degree, contraction index, rank⟩.
//!
//! Contraction indices sit on antecedent occurrences only: contraction adds
//! them, a cut multiplies the left context by the index of the cut formula,
//! and the two-premise rules take positionwise maxima.

use std::fmt;

use crate::kernel::{NodePath, Proof, Rule, Side};
use crate::rank::rank_of_cut;
use crate::session::{EngineError, Session};
use crate::structural::{apply_cs, apply_ops, dup_block_contraction, move_elem};

/// Contraction indices of the antecedent of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexTree {
    pub ant: Vec<u128>,
    pub children: Vec<IndexTree>,
}

/// An implication-free proof together with its contraction indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZProof {
    proof: Proof,
    indices: IndexTree,
}

impl ZProof {
    pub fn proof(&self) -> &Proof {
        &self.proof
    }

    pub fn indices(&self) -> &IndexTree {
        &self.indices
    }

    /// Endsequent indices.
    pub fn end_indices(&self) -> &[u128] {
        &self.indices.ant
    }
}

impl fmt::Display for ZProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.proof.end();
        for (i, (a, n)) in s.ant.iter().zip(&self.indices.ant).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}^{n}")?;
        }
        if !s.ant.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "|- {}", s.succ)
    }
}

/// The lexicographically ordered measure of a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZMeasure {
    pub d: usize,
    pub z: u128,
    pub r: u64,
}

impl fmt::Display for ZMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{}>", self.d, self.z, self.r)
    }
}

fn implication_at(path: &NodePath) -> EngineError {
    EngineError::Precondition(format!("implication found at {path}"))
}

fn indices(p: &Proof, path: &mut Vec<usize>) -> Result<IndexTree, EngineError> {
    if p.end().contains_imp() {
        return Err(implication_at(&NodePath(path.clone())));
    }
    let mut children = Vec::with_capacity(p.premises().len());
    for (i, q) in p.premises().iter().enumerate() {
        path.push(i);
        children.push(indices(q, path)?);
        path.pop();
    }
    let max = |a: &[u128], b: &[u128]| -> Vec<u128> { a.iter().zip(b).map(|(x, y)| *x.max(y)).collect() };
    let ant = match *p.rule() {
        Rule::Ax(_) | Rule::BotAx(_) => vec![1],
        Rule::C(pos) => {
            let mut a = children[0].ant.clone();
            a.swap(pos, pos + 1);
            a
        }
        Rule::W(pos) => {
            let mut a = children[0].ant.clone();
            a[pos] = a[pos].saturating_add(a[pos + 1]);
            a.remove(pos + 1);
            a
        }
        Rule::K(pos, _) => {
            let mut a = children[0].ant.clone();
            a.insert(pos, 1);
            a
        }
        Rule::Cut(pos) => {
            if p.premise(0).end().succ.contains_imp() {
                return Err(implication_at(&NodePath(path.clone())));
            }
            let (l, r) = (&children[0].ant, &children[1].ant);
            let alpha = r[pos];
            let mut a = r[..pos].to_vec();
            a.extend(l.iter().map(|x| x.saturating_mul(alpha)));
            a.extend_from_slice(&r[pos + 1..]);
            a
        }
        Rule::AndL(..) | Rule::OrR(..) => children[0].ant.clone(),
        Rule::AndR | Rule::OrL(_) => max(&children[0].ant, &children[1].ant),
        Rule::ImpL(_) | Rule::ImpR => return Err(implication_at(&NodePath(path.clone()))),
    };
    Ok(IndexTree { ant, children })
}

/// Computes contraction indices for an implication-free proof.
pub fn to_zucker(p: &Proof) -> Result<ZProof, EngineError> {
    let indices = indices(p, &mut Vec::new())?;
    Ok(ZProof { proof: p.clone(), indices })
}

/// Drops the indices.
pub fn erase_indices(z: &ZProof) -> Proof {
    z.proof.clone()
}

fn end_indices(p: &Proof) -> Result<Vec<u128>, EngineError> {
    Ok(indices(p, &mut Vec::new())?.ant)
}

/// Measure of a cut node.
pub fn cut_measure(cut: &Proof) -> Result<ZMeasure, EngineError> {
    let Rule::Cut(pos) = cut.rule() else {
        return Err(EngineError::Precondition(format!("root is {}, not a cut", cut.rule().name())));
    };
    let rank = rank_of_cut(cut).expect("cut");
    let z = end_indices(cut.premise(1))?[*pos];
    Ok(ZMeasure { d: cut.premise(0).end().succ.degree(), z, r: rank.total })
}

/// Measure of the cut at the root of `z`.
pub fn z_measure(z: &ZProof) -> Result<ZMeasure, EngineError> {
    cut_measure(&z.proof)
}

/// Builds new cuts and checks each against the measure of the cut being
/// rewritten.
struct Builder<'a> {
    old: ZMeasure,
    session: &'a mut Session,
}

impl Builder<'_> {
    fn cut(&mut self, pos: usize, left: &Proof, right: &Proof) -> Result<Proof, EngineError> {
        let c = Proof::cut(pos, left.clone(), right.clone())?;
        let m = cut_measure(&c)?;
        let as_vec = |m: ZMeasure| vec![m.d as u64, m.z as u64, m.r];
        self.session.measure("Z", as_vec(self.old), as_vec(m));
        if m >= self.old {
            return Err(EngineError::Invariant(format!(
                "new cut measure {m} does not lie below {}",
                self.old
            )));
        }
        Ok(c)
    }
}

/// Position in the conclusion of a cut at `pos` with a left antecedent of
/// length `dl`, of the occurrence at `q` (not `pos`) of the right premise.
pub(crate) fn shift(q: usize, pos: usize, dl: usize) -> usize {
    if q < pos {
        q
    } else {
        q + dl - 1
    }
}

/// Rewrites a cut whose premises are cut-free. Returns the new proof and
/// the case label.
fn step(cut: &Proof, s: &mut Session) -> Result<(Proof, &'static str), EngineError> {
    let Rule::Cut(pos) = *cut.rule() else {
        return Err(EngineError::Precondition("root is not a cut".into()));
    };
    let (pi, rho) = (cut.premise(0), cut.premise(1));
    if !pi.is_cut_free() || !rho.is_cut_free() {
        return Err(EngineError::Precondition("cut premises must be cut-free".into()));
    }
    let old = cut_measure(cut)?;
    let rank = rank_of_cut(cut).expect("cut");
    let dl = pi.end().ant.len();
    let mut b = Builder { old, session: s };
    let no_case = || EngineError::Invariant(format!("no reduction case matches {}", cut.end()));

    if rank.total == 2 {
        return match (pi.rule(), rho.rule()) {
            (Rule::Ax(_), _) => Ok((rho.clone(), "Z-1.1")),
            (Rule::BotAx(_), _) => {
                let ant = &rho.end().ant;
                let mut q = Proof::botax(rho.end().succ.clone());
                for (i, f) in ant[..pos].iter().enumerate() {
                    q = Proof::k(i, f.clone(), q)?;
                }
                for (j, f) in ant[pos + 1..].iter().enumerate() {
                    q = Proof::k(pos + 1 + j, f.clone(), q)?;
                }
                Ok((q, "Z-1.2"))
            }
            (_, Rule::Ax(_)) => Ok((pi.clone(), "Z-1.3")),
            (_, Rule::K(q, _)) if *q == pos => {
                let mut out = rho.premise(0).clone();
                for (j, f) in pi.end().ant.iter().enumerate() {
                    out = Proof::k(pos + j, f.clone(), out)?;
                }
                Ok((out, "Z-1.4"))
            }
            (Rule::AndR, Rule::AndL(q, side, _)) if *q == pos => {
                let src = match side {
                    Side::First => pi.premise(0),
                    Side::Second => pi.premise(1),
                };
                Ok((b.cut(pos, src, rho.premise(0))?, "Z-1.5"))
            }
            (Rule::OrR(side, _), Rule::OrL(q)) if *q == pos => {
                let r = match side {
                    Side::First => rho.premise(0),
                    Side::Second => rho.premise(1),
                };
                Ok((b.cut(pos, pi.premise(0), r)?, "Z-1.6"))
            }
            _ => Err(no_case()),
        };
    }

    if rank.left > 1 {
        let lifted = match pi.rule() {
            Rule::C(q) => Rule::C(q + pos),
            Rule::W(q) => Rule::W(q + pos),
            Rule::K(q, f) => Rule::K(q + pos, f.clone()),
            Rule::AndL(q, side, f) => Rule::AndL(q + pos, *side, f.clone()),
            Rule::OrL(q) => {
                let l = b.cut(pos, pi.premise(0), rho)?;
                let r = b.cut(pos, pi.premise(1), rho)?;
                return Ok((Proof::or_l(q + pos, l, r)?, "Z-2.2"));
            }
            _ => return Err(no_case()),
        };
        let inner = b.cut(pos, pi.premise(0), rho)?;
        return Ok((Proof::build(lifted, vec![inner])?, "Z-2.1"));
    }

    let out = match *rho.rule() {
        Rule::W(q) if q == pos => {
            let rho0 = rho.premise(0);
            let upper = b.cut(pos, pi, rho0)?;
            let reduced = eliminate(&upper, b.session)?;
            let outer = b.cut(pos + dl, pi, &reduced)?;
            let repaired = apply_ops(outer, &dup_block_contraction(pos, dl))?;
            return Ok((repaired, "Z-3.4"));
        }
        Rule::OrR(side, ref f) => Proof::or_r(side, f.clone(), b.cut(pos, pi, rho.premise(0))?)?,
        Rule::K(q, ref f) => {
            let p0 = if pos < q { pos } else { pos - 1 };
            Proof::k(shift(q, pos, dl), f.clone(), b.cut(p0, pi, rho.premise(0))?)?
        }
        Rule::AndL(q, side, ref f) => {
            Proof::and_l(shift(q, pos, dl), side, f.clone(), b.cut(pos, pi, rho.premise(0))?)?
        }
        Rule::W(q) => {
            let p0 = if pos < q { pos } else { pos + 1 };
            Proof::w(shift(q, pos, dl), b.cut(p0, pi, rho.premise(0))?)?
        }
        Rule::C(q) if pos == q => apply_cs(b.cut(q + 1, pi, rho.premise(0))?, &move_elem(q, q + dl))?,
        Rule::C(q) if pos == q + 1 => apply_cs(b.cut(q, pi, rho.premise(0))?, &move_elem(q + dl, q))?,
        Rule::C(q) => Proof::c(shift(q, pos, dl), b.cut(pos, pi, rho.premise(0))?)?,
        Rule::AndR => {
            let l = b.cut(pos, pi, rho.premise(0))?;
            let r = b.cut(pos, pi, rho.premise(1))?;
            return Ok((Proof::and_r(l, r)?, "Z-3.2"));
        }
        Rule::OrL(q) => {
            let l = b.cut(pos, pi, rho.premise(0))?;
            let r = b.cut(pos, pi, rho.premise(1))?;
            return Ok((Proof::or_l(shift(q, pos, dl), l, r)?, "Z-3.3"));
        }
        _ => return Err(no_case()),
    };
    Ok((out, "Z-3.1"))
}

/// One reduction step on a cut with cut-free premises.
pub fn z_step(z: &ZProof, s: &mut Session) -> Result<(ZProof, &'static str), EngineError> {
    let (p, label) = step(&z.proof, s)?;
    Ok((to_zucker(&p)?, label))
}

/// Eliminates every cut, leftmost topmost first.
fn eliminate(p: &Proof, s: &mut Session) -> Result<Proof, EngineError> {
    if p.is_cut_free() {
        return Ok(p.clone());
    }
    let premises = p.premises().iter().map(|q| eliminate(q, s)).collect::<Result<Vec<_>, _>>()?;
    let q = p.with_premises(premises)?;
    if !matches!(q.rule(), Rule::Cut(_)) {
        return Ok(q);
    }
    let m = cut_measure(&q)?;
    let (r, label) = step(&q, s)?;
    s.step(label, &r, Some(m.to_string()))?;
    eliminate(&r, s)
}

/// Cut-free proof of the same formulas with pointwise smaller or equal
/// indices.
pub fn eliminate_cut_z(z: &ZProof, s: &mut Session) -> Result<ZProof, EngineError> {
    s.set_phase("Z");
    let out = to_zucker(&eliminate(&z.proof, s)?)?;
    if out.proof.end() != z.proof.end() {
        return Err(EngineError::Invariant(format!(
            "endsequent changed from {} to {}",
            z.proof.end(),
            out.proof.end()
        )));
    }
    if out.end_indices().iter().zip(z.end_indices()).any(|(j, i)| j > i) {
        return Err(EngineError::Invariant(format!("indices grew: {z} became {out}")));
    }
    Ok(out)
}
