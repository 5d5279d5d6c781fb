//! Step accounting, traces and measure audits shared by the engines.

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{KernelError, Proof};
use crate::rank::max_cut_rank;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("step budget of {0} exceeded")]
    Budget(u64),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// One reduction step. Counts describe the subproof the step produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub step: u64,
    pub phase: String,
    pub label: String,
    pub endsequent: String,
    pub nodes: u64,
    pub cuts: u64,
    pub degree: usize,
    pub max_rank: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
}

/// A measure observed before and after one rewrite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureEvent {
    pub kind: &'static str,
    pub before: Vec<u64>,
    pub after: Vec<u64>,
}

impl MeasureEvent {
    pub fn decreased(&self) -> bool {
        self.after < self.before
    }
}

/// Tie counts expected and found at a merge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieEvent {
    pub kind: &'static str,
    pub expected: Vec<usize>,
    pub actual: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Audit {
    pub measures: Vec<MeasureEvent>,
    pub ties: Vec<TieEvent>,
    /// Counts of W applications before and after an L5.1 sort.
    pub w_counts: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub max_steps: u64,
    steps: u64,
    phase: &'static str,
    record: bool,
    trace: Vec<TraceRecord>,
    audit: Option<Audit>,
}

pub const DEFAULT_MAX_STEPS: u64 = 5_000_000;

impl Default for Session {
    fn default() -> Session {
        Session::new(DEFAULT_MAX_STEPS)
    }
}

impl Session {
    pub fn new(max_steps: u64) -> Session {
        Session { max_steps, steps: 0, phase: "-", record: false, trace: Vec::new(), audit: None }
    }

    pub fn recording(mut self) -> Session {
        self.record = true;
        self
    }

    pub fn audited(mut self) -> Session {
        self.audit = Some(Audit::default());
        self
    }

    pub fn set_phase(&mut self, phase: &'static str) {
        self.phase = phase;
    }

    pub fn phase(&self) -> &'static str {
        self.phase
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn take_trace(&mut self) -> Vec<TraceRecord> {
        std::mem::take(&mut self.trace)
    }

    pub fn audit(&self) -> Option<&Audit> {
        self.audit.as_ref()
    }

    pub fn auditing(&self) -> bool {
        self.audit.is_some()
    }

    /// Counts one step and records it.
    pub fn step(&mut self, label: &str, result: &Proof, measure: Option<String>) -> Result<(), EngineError> {
        self.step_with(label, measure, || Ok(result.clone()))
    }

    /// Like [`Session::step`], but only builds the result when recording.
    pub fn step_with(
        &mut self,
        label: &str,
        measure: Option<String>,
        result: impl FnOnce() -> Result<Proof, KernelError>,
    ) -> Result<(), EngineError> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(EngineError::Budget(self.max_steps));
        }
        if self.record {
            let result = result()?;
            let st = result.stats();
            self.trace.push(TraceRecord {
                step: self.steps,
                phase: self.phase.to_string(),
                label: label.to_string(),
                endsequent: result.end().to_string(),
                nodes: st.nodes,
                cuts: st.cuts,
                degree: st.degree,
                max_rank: max_cut_rank(&result),
                measure,
            });
        }
        Ok(())
    }

    pub fn measure(&mut self, kind: &'static str, before: Vec<u64>, after: Vec<u64>) {
        if let Some(a) = &mut self.audit {
            a.measures.push(MeasureEvent { kind, before, after });
        }
    }

    pub fn tie(&mut self, kind: &'static str, expected: Vec<usize>, actual: Vec<usize>) {
        if let Some(a) = &mut self.audit {
            a.ties.push(TieEvent { kind, expected, actual });
        }
    }

    pub fn w_count(&mut self, before: usize, after: usize) {
        if let Some(a) = &mut self.audit {
            a.w_counts.push((before, after));
        }
    }
}
