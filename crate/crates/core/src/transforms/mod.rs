//! Rewrites on the pendant representation that never decrease the number of
//! Laplacian eigenvalues above the average degree, and the pipeline that uses
//! them to turn any tree into the extremal prototype of its order.

mod ops;
mod pipeline;
mod prototype;
mod trace;

use thiserror::Error;

use crate::gpp::GppError;

pub use ops::{apply_op, Applied};
pub use pipeline::{transform, transform_with, Options};
pub use prototype::{closed_form_f, prototype, star_of_suns, zero_index_bound};
pub use trace::{read_jsonl, replay, ParsedTrace, StepKind, StepOp, Trace, TraceRecord, TransformStep};

/// Smallest order the rewrites are defined for.
pub const MIN_ORDER: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("order {n} is below the minimum of {MIN_ORDER}")]
    TooSmall { n: usize },
    #[error("{op} at vertex {vertex}: {reason}")]
    Precondition {
        op: &'static str,
        vertex: usize,
        reason: String,
    },
    #[error("step {} ({:?}) lowered sigma from {sigma_before} to {sigma_after}", step.step_index, step.kind)]
    Improper {
        sigma_before: usize,
        sigma_after: usize,
        step: Box<TransformStep>,
        trace: Box<Trace>,
    },
    #[error("reduction stalled: {0}")]
    Stalled(String),
    #[error("unexpected configuration {config}: {reason}")]
    Unexpected { config: String, reason: String },
    #[error("pipeline ended at {0}, which is not the prototype")]
    NotPrototype(String),
    #[error("replay diverged at step {step_index}: expected {expected}, got {got}")]
    ReplayMismatch {
        step_index: usize,
        expected: String,
        got: String,
    },
    #[error("trace line {line}: {msg}")]
    TraceFormat { line: usize, msg: String },
    #[error("alpha must be 0, 2 or 3 for the closed form, got {0}")]
    BadAlpha(usize),
    #[error(transparent)]
    Gpp(#[from] GppError),
}
