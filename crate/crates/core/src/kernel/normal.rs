//! W-normality and taillessness.

use super::{KernelError, Proof, Rule};

/// Every W is the root, or sits immediately above another W or above ImpR.
pub fn is_w_normal(p: &Proof) -> bool {
    fn go(p: &Proof, parent: Option<&Rule>) -> bool {
        if p.stats().w == 0 {
            return true;
        }
        if let Rule::W(_) = p.rule() {
            if !matches!(parent, None | Some(Rule::W(_)) | Some(Rule::ImpR)) {
                return false;
            }
        }
        p.premises().iter().all(|q| go(q, Some(p.rule())))
    }
    go(p, None)
}

/// A W-normal proof is tailless when its last rule is not W.
pub fn is_tailless(p: &Proof) -> Result<bool, KernelError> {
    if !is_w_normal(p) {
        return Err(KernelError::NotWNormal);
    }
    Ok(!matches!(p.rule(), Rule::W(_)))
}
