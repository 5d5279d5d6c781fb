//! Proofs built from a tailless base by cuts against a fixed tailless left
//! proof and by trailing contractions, and their W-normalization.

use std::fmt;

use crate::kernel::{
    classify_contraction, cluster_of, is_tailless, w_paths, ContractionStatus, KernelError, NodePath,
    OccurrenceRef, Proof,
};
use crate::session::{EngineError, Session};
use crate::structural::{apply_cs, dup_block_contraction, StructOp};

use super::segment::sort_ops;

/// One construction step above the base, listed top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CClassLayer {
    /// A cut with the tailless left proof at `pos`, followed by C's.
    CutLayer { pos: usize, left: Proof, cs: Vec<usize> },
    /// A trailing contraction.
    MobileW(usize),
}

/// Witness that a proof belongs to the class generated by `left` and `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CClass {
    pub base: Proof,
    pub left: Proof,
    pub layers: Vec<CClassLayer>,
}

/// Engaged contractions, then the summed heights of mobile contractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct WNormMeasure {
    pub kappa: usize,
    pub lambda: usize,
}

impl fmt::Display for WNormMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.kappa, self.lambda)
    }
}

impl CClass {
    pub fn to_proof(&self) -> Result<Proof, KernelError> {
        let mut cur = self.base.clone();
        for layer in &self.layers {
            cur = match layer {
                CClassLayer::CutLayer { pos, left, cs } => apply_cs(Proof::cut(*pos, left.clone(), cur)?, cs)?,
                CClassLayer::MobileW(w) => Proof::w(*w, cur)?,
            };
        }
        Ok(cur)
    }

    /// Sum over mobile W's of the W and cut layers below them.
    pub fn lambda(&self) -> usize {
        let mut total = 0;
        for (below, layer) in self.layers.iter().rev().enumerate() {
            if let CClassLayer::MobileW(_) = layer {
                total += below;
            }
        }
        total
    }

    pub fn measure(&self) -> Result<WNormMeasure, EngineError> {
        let p = self.to_proof()?;
        let mut kappa = 0;
        for w in w_paths(&p) {
            if classify_contraction(&p, &w)? != ContractionStatus::Neutral {
                kappa += 1;
            }
        }
        Ok(WNormMeasure { kappa, lambda: self.lambda() })
    }

    /// Checks the witness against `p`: same proof, tailless base and left
    /// proof, and no cut formula cluster reaching into an earlier copy of
    /// the left proof.
    pub fn check(&self, p: &Proof) -> Result<(), EngineError> {
        let bad = |m: String| EngineError::Precondition(format!("membership witness: {m}"));
        if !is_tailless(&self.base).unwrap_or(false) {
            return Err(bad("base is not tailless".into()));
        }
        if !is_tailless(&self.left).unwrap_or(false) {
            return Err(bad("left proof is not tailless".into()));
        }
        let mut cur = self.base.clone();
        // Paths of the left-proof copies added by cut layers.
        let mut copies: Vec<Vec<usize>> = Vec::new();
        let prefix = |copies: &mut Vec<Vec<usize>>, k: usize| {
            for c in copies.iter_mut() {
                c.insert(0, k);
            }
        };
        for layer in &self.layers {
            match layer {
                CClassLayer::CutLayer { pos, left, cs } => {
                    if left != &self.left {
                        return Err(bad("cut layer with a different left proof".into()));
                    }
                    let cluster = cluster_of(&cur, &OccurrenceRef::ant(NodePath::root(), *pos))
                        .map_err(|e| bad(e.to_string()))?;
                    if cluster.iter().any(|o| copies.iter().any(|c| o.node.0.starts_with(c))) {
                        return Err(bad("cut formula cluster reaches a copy of the left proof".into()));
                    }
                    cur = apply_cs(Proof::cut(*pos, left.clone(), cur)?, cs)?;
                    prefix(&mut copies, 1);
                    copies.push(vec![0]);
                    for _ in cs {
                        prefix(&mut copies, 0);
                    }
                }
                CClassLayer::MobileW(w) => {
                    cur = Proof::w(*w, cur)?;
                    prefix(&mut copies, 0);
                }
            }
        }
        if &cur != p {
            return Err(bad("witness does not rebuild the proof".into()));
        }
        Ok(())
    }
}

/// Pushes every mobile W that sits directly above a cut below that cut,
/// until none is left. The result is W-normal with the same endsequent and
/// degree.
pub fn normalize_cclass(p: &Proof, witness: &CClass, s: &mut Session) -> Result<Proof, EngineError> {
    witness.check(p)?;
    let mut c = witness.clone();
    loop {
        let found = c
            .layers
            .windows(2)
            .position(|w| matches!((&w[0], &w[1]), (CClassLayer::MobileW(_), CClassLayer::CutLayer { .. })));
        let Some(i) = found else { break };
        let before = if s.auditing() { Some(c.measure()?) } else { None };
        let CClassLayer::MobileW(w) = c.layers[i] else { unreachable!() };
        let CClassLayer::CutLayer { pos, ref left, ref cs } = c.layers[i + 1] else { unreachable!() };
        let (left, cs) = (left.clone(), cs.clone());
        let dl = left.end().ant.len();
        let mut j = i + 2;
        let mut tail_ws = Vec::new();
        while let Some(CClassLayer::MobileW(x)) = c.layers.get(j) {
            tail_ws.push(*x);
            j += 1;
        }
        // Proof above the contraction.
        let above = CClass { base: c.base.clone(), left: c.left.clone(), layers: c.layers[..i].to_vec() }.to_proof()?;
        let (mut cuts, head, label) = if w == pos {
            // Directly engaged: cut twice and contract the duplicated context.
            let inner = Proof::cut(pos, left.clone(), above)?;
            let outer = Proof::cut(pos + dl, left.clone(), inner)?;
            let cuts = vec![(pos, Vec::new()), (pos + dl, Vec::new())];
            (cuts, (outer, dup_block_contraction(pos, dl)), "L5.2a")
        } else {
            let p0 = if pos < w { pos } else { pos + 1 };
            let w2 = if w < pos { w } else { w + dl - 1 };
            let cut = Proof::cut(p0, left.clone(), above)?;
            (vec![(p0, Vec::new())], (cut, vec![StructOp::W(w2)]), "L5.2b")
        };
        let (top, mut ops) = head;
        ops.extend(cs.iter().map(|&x| StructOp::C(x)));
        ops.extend(tail_ws.iter().map(|&x| StructOp::W(x)));
        let (new_cs, new_ws) = sort_ops(&top, ops, s)?;
        cuts.last_mut().expect("nonempty").1 = new_cs;
        let mut layers = c.layers[..i].to_vec();
        layers.extend(cuts.into_iter().map(|(pos, cs)| CClassLayer::CutLayer { pos, left: left.clone(), cs }));
        layers.extend(new_ws.into_iter().map(CClassLayer::MobileW));
        layers.extend_from_slice(&c.layers[j..]);
        c.layers = layers;
        if let Some(before) = before {
            let after = c.measure()?;
            s.measure(
                "L5.2",
                vec![before.kappa as u64, before.lambda as u64],
                vec![after.kappa as u64, after.lambda as u64],
            );
            if after >= before {
                return Err(EngineError::Invariant(format!("measure {after} does not lie below {before}")));
            }
        }
        let snapshot = c.clone();
        s.step_with(label, None, || snapshot.to_proof())?;
    }
    Ok(c.to_proof()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_proof;
    use crate::kernel::{is_w_normal, validate};

    fn layers_for(right_tail: &[usize], pos: usize, left: &Proof) -> Vec<CClassLayer> {
        let mut l: Vec<CClassLayer> = right_tail.iter().map(|&w| CClassLayer::MobileW(w)).collect();
        l.push(CClassLayer::CutLayer { pos, left: left.clone(), cs: vec![] });
        l
    }

    #[test]
    fn already_normal_unchanged() {
        let left = parse_proof("(ax p)").unwrap();
        let base = parse_proof("(k 1 q (ax p))").unwrap();
        let c = CClass { base, left: left.clone(), layers: layers_for(&[], 0, &left) };
        let p = c.to_proof().unwrap();
        assert_eq!(normalize_cclass(&p, &c, &mut Session::default()).unwrap(), p);
    }

    #[test]
    fn directly_engaged() {
        // q, r |- p & p ... left proves q, r |- p; right contracts p.
        let left = parse_proof("(k 1 r (k 0 q (ax p)))").unwrap();
        let base = parse_proof("(k 0 p (ax p))").unwrap();
        let c = CClass { base, left: left.clone(), layers: layers_for(&[0], 0, &left) };
        let p = c.to_proof().unwrap();
        assert!(!is_w_normal(&p));
        let before = c.measure().unwrap();
        assert_eq!(before, WNormMeasure { kappa: 1, lambda: 1 });
        let mut s = Session::default().recording().audited();
        let out = normalize_cclass(&p, &c, &mut s).unwrap();
        validate(&out).unwrap();
        assert!(is_w_normal(&out));
        assert_eq!(out.end(), p.end());
        assert_eq!(out.stats().cuts, 2);
        assert!(s.trace().iter().any(|r| r.label == "L5.2a"));
        let m = s.audit().unwrap().measures.iter().find(|m| m.kind == "L5.2").unwrap();
        assert_eq!(m.after[0] + 1, m.before[0]);
    }

    #[test]
    fn neutral_pushed() {
        let left = parse_proof("(ax q)").unwrap();
        // p, p, q |- p with the p's contracted, cut on q.
        let base = parse_proof("(k 2 q (k 0 p (ax p)))").unwrap();
        let c = CClass { base, left: left.clone(), layers: layers_for(&[0], 1, &left) };
        let p = c.to_proof().unwrap();
        let mut s = Session::default().recording().audited();
        let out = normalize_cclass(&p, &c, &mut s).unwrap();
        assert!(is_w_normal(&out));
        assert_eq!(out.end(), p.end());
        assert_eq!(s.trace().iter().filter(|r| r.label == "L5.2b").count(), 1);
    }

    #[test]
    fn bad_witness() {
        let left = parse_proof("(ax p)").unwrap();
        let base = parse_proof("(k 1 q (ax p))").unwrap();
        let c = CClass { base, left: left.clone(), layers: layers_for(&[], 0, &left) };
        let other = parse_proof("(ax p)").unwrap();
        assert!(matches!(
            normalize_cclass(&other, &c, &mut Session::default()),
            Err(EngineError::Precondition(_))
        ));
    }
}
