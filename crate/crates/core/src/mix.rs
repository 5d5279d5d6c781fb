//! Gentzen's mix rule and its two uniform reconstructions: many cuts
//! followed by contractions, or contractions followed by one cut.

use serde::Serialize;

use crate::kernel::Proof;
use crate::logic::{Formula, Sequent};
use crate::session::EngineError;
use crate::structural::{apply_cs, apply_ws, canonical_tail, move_elem};

/// From Γ ⊢ A and Δ ⊢ C, conclude Γ, Δ* ⊢ C where Δ* drops every
/// occurrence of A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixApp {
    left: Proof,
    right: Proof,
    formula: Formula,
}

impl MixApp {
    pub fn new(left: Proof, right: Proof, formula: Formula) -> Result<MixApp, EngineError> {
        if left.end().succ != formula {
            return Err(EngineError::Precondition(format!(
                "left premise proves {}, not the mix formula {formula}",
                left.end().succ
            )));
        }
        if !right.end().ant.contains(&formula) {
            return Err(EngineError::Precondition(format!("mix formula {formula} does not occur in {}", right.end())));
        }
        Ok(MixApp { left, right, formula })
    }

    pub fn left(&self) -> &Proof {
        &self.left
    }

    pub fn right(&self) -> &Proof {
        &self.right
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// Number of occurrences of the mix formula in Δ.
    pub fn occurrences(&self) -> usize {
        self.right.end().ant.iter().filter(|f| **f == self.formula).count()
    }

    pub fn conclusion(&self) -> Sequent {
        let mut ant = self.left.end().ant.clone();
        ant.extend(self.right.end().ant.iter().filter(|f| **f != self.formula).cloned());
        Sequent { ant, succ: self.right.end().succ.clone() }
    }
}

/// One cut per occurrence, leftmost first, each on an occurrence moved to
/// the front. The copies of Γ are then gathered and contracted.
pub fn reconstruct_polytomic(m: &MixApp) -> Result<Proof, EngineError> {
    let g = m.left.end().ant.len();
    let n = m.occurrences();
    let mut cur = m.right.clone();
    for k in 0..n {
        let j = (k * g..cur.end().ant.len())
            .find(|&j| cur.end().ant[j] == m.formula)
            .expect("an occurrence is left");
        cur = Proof::cut(0, m.left.clone(), apply_cs(cur, &move_elem(j, 0))?)?;
    }
    // Copy b (newest first) of element e sits at b * g + e; bring all copies
    // of element e together at e * n.
    let mut keys: Vec<(usize, usize)> = (0..n).flat_map(|b| (0..g).map(move |e| (e, b))).collect();
    let mut cs = Vec::new();
    for t in 0..n * g {
        let want = (t / n, t % n);
        let from = keys.iter().position(|k| *k == want).expect("key present");
        cs.extend(move_elem(from, t));
        let k = keys.remove(from);
        keys.insert(t, k);
    }
    let out = apply_ws(apply_cs(cur, &cs)?, &canonical_tail(&vec![n; g]))?;
    check(m, out)
}

/// Every occurrence gathered next to the first and contracted, then moved
/// to the front for a single cut.
pub fn reconstruct_monotomic(m: &MixApp) -> Result<Proof, EngineError> {
    let ant = &m.right.end().ant;
    let at: Vec<usize> = (0..ant.len()).filter(|&i| ant[i] == m.formula).collect();
    let first = at[0];
    let mut cs = Vec::new();
    for (k, &j) in at.iter().enumerate().skip(1) {
        cs.extend(move_elem(j, first + k));
    }
    let gathered = apply_cs(m.right.clone(), &cs)?;
    let contracted = apply_ws(gathered, &vec![first; at.len() - 1])?;
    let front = apply_cs(contracted, &move_elem(first, 0))?;
    check(m, Proof::cut(0, m.left.clone(), front)?)
}

fn check(m: &MixApp, out: Proof) -> Result<Proof, EngineError> {
    if *out.end() != m.conclusion() {
        return Err(EngineError::Invariant(format!("reconstruction proves {}, not {}", out.end(), m.conclusion())));
    }
    Ok(out)
}

/// Rule counts of a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReconstructionStats {
    pub cuts: u64,
    pub w: u64,
    pub c: u64,
    pub k: u64,
    pub nodes: u64,
}

pub fn reconstruction_stats(p: &Proof) -> ReconstructionStats {
    let st = p.stats();
    ReconstructionStats { cuts: st.cuts, w: st.w, c: st.c, k: st.k, nodes: st.nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_proof;
    use crate::kernel::{generate_proof, validate};
    use crate::maximal::eliminate_cuts;
    use crate::session::Session;
    use proptest::prelude::*;

    /// B, C ⊢ A and A, A, D, A ⊢ E with A = b ∧ c and E = d.
    fn example() -> MixApp {
        let left = parse_proof("(andr (k 1 c (ax b)) (k 0 b (ax c)))").unwrap();
        let right = parse_proof("(k 3 (b & c) (k 0 (b & c) (k 0 (b & c) (ax d))))").unwrap();
        assert_eq!(left.end().to_string(), "b, c |- (b & c)");
        assert_eq!(right.end().to_string(), "(b & c), (b & c), d, (b & c) |- d");
        let a = left.end().succ.clone();
        MixApp::new(left, right, a).unwrap()
    }

    #[test]
    fn polytomic_example() {
        let p = reconstruct_polytomic(&example()).unwrap();
        validate(&p).unwrap();
        assert_eq!(p.end().to_string(), "b, c, d |- d");
        let st = reconstruction_stats(&p);
        assert_eq!(st.cuts, 3);
        // Two surplus copies of a two-formula context.
        assert_eq!(st.w, 4);
    }

    #[test]
    fn monotomic_example() {
        let p = reconstruct_monotomic(&example()).unwrap();
        validate(&p).unwrap();
        assert_eq!(p.end().to_string(), "b, c, d |- d");
        let st = reconstruction_stats(&p);
        assert_eq!((st.cuts, st.w), (1, 2));
    }

    #[test]
    fn single_occurrence_is_a_cut() {
        let left = parse_proof("(k 0 b (ax a))").unwrap();
        let right = parse_proof("(k 0 d (ax a))").unwrap();
        let m = MixApp::new(left, right, Formula::atom("a")).unwrap();
        let p = reconstruct_polytomic(&m).unwrap();
        assert_eq!(reconstruction_stats(&p).cuts, 1);
        assert_eq!(reconstruction_stats(&p).w, 0);
        assert_eq!(p, reconstruct_monotomic(&m).unwrap());
        assert_eq!(p.end().to_string(), "b, a, d |- a");
    }

    #[test]
    fn absent_formula_rejected() {
        let left = parse_proof("(ax a)").unwrap();
        let right = parse_proof("(ax b)").unwrap();
        assert!(matches!(MixApp::new(left, right, Formula::atom("a")), Err(EngineError::Precondition(_))));
    }

    #[test]
    fn stats_of_axiom() {
        let st = reconstruction_stats(&parse_proof("(ax p)").unwrap());
        assert_eq!(st, ReconstructionStats { cuts: 0, w: 0, c: 0, k: 0, nodes: 1 });
    }

    #[test]
    fn both_eliminate() {
        let m = example();
        for p in [reconstruct_polytomic(&m).unwrap(), reconstruct_monotomic(&m).unwrap()] {
            let (out, _) = eliminate_cuts(&p, &mut Session::default()).unwrap();
            assert!(out.is_cut_free());
            assert_eq!(out.end().to_string(), "b, c, d |- d");
        }
    }

    proptest! {
        /// Mixes of generated proofs: both reconstructions validate, prove
        /// the mix conclusion, and have the closed-form cut and W counts.
        #[test]
        fn generated_mixes(seed in 0u64..400, extra in prop::collection::vec((0usize..6, any::<bool>()), 0..4)) {
            let left = generate_proof(seed, 12, &["p", "q"], seed % 3 == 0);
            let a = left.end().succ.clone();
            let mut right = Proof::k(0, a.clone(), generate_proof(seed + 1000, 12, &["p", "q"], false)).unwrap();
            for (i, is_a) in extra {
                let pos = i % (right.end().ant.len() + 1);
                let f = if is_a { a.clone() } else { Formula::atom("r") };
                right = Proof::k(pos, f, right).unwrap();
            }
            let m = MixApp::new(left.clone(), right, a).unwrap();
            let n = m.occurrences() as u64;
            let g = left.end().ant.len() as u64;
            let base = reconstruction_stats(&left).cuts + reconstruction_stats(m.right()).cuts;
            let base_w = reconstruction_stats(&left).w + reconstruction_stats(m.right()).w;
            let poly = reconstruct_polytomic(&m).unwrap();
            let mono = reconstruct_monotomic(&m).unwrap();
            validate(&poly).unwrap();
            validate(&mono).unwrap();
            prop_assert_eq!(poly.end(), mono.end());
            prop_assert_eq!(poly.end(), &m.conclusion());
            let ps = reconstruction_stats(&poly);
            prop_assert_eq!(ps.cuts, n + n * reconstruction_stats(&left).cuts + reconstruction_stats(m.right()).cuts);
            prop_assert_eq!(ps.w, (n - 1) * g + n * reconstruction_stats(&left).w + reconstruction_stats(m.right()).w);
            let ms = reconstruction_stats(&mono);
            prop_assert_eq!(ms.cuts, 1 + base);
            prop_assert_eq!(ms.w, n - 1 + base_w);
        }
    }
}
