//! Sequent-calculus kernel for intuitionistic propositional logic with cut
//! elimination procedures that permute cut with contraction.

pub mod io;
pub mod kernel;
pub mod logic;
pub mod maximal;
pub mod mix;
pub mod rank;
pub mod session;
pub mod structural;
pub mod wnorm;
pub mod zucker;

pub use kernel::{validate, KernelError, NodePath, Proof, Rule, Side};
pub use logic::{formula_degree, Formula, Sequent};
pub use session::{EngineError, Session, TraceRecord};
