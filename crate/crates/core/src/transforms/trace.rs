use serde::{Deserialize, Serialize};

use super::{apply_op, TransformError};
use crate::gpp::GppTree;
use crate::tree::{Tree, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    StarUp,
    StarDown,
    StarStarRegroup,
    StarStar11,
    StarStar10,
    /// Summary emitted after reducing a starlike vertex.
    Reduce,
    Collapse,
    Rebase,
    /// Two suns of `2r + 1` rays total on one vertex become `P_1*S_r ⊕ P_1*S_r`.
    PathCase,
    /// Summary emitted when the single-starlike-vertex finish begins.
    OneStarCase,
}

impl StepKind {
    pub fn is_marker(self) -> bool {
        matches!(self, StepKind::Reduce | StepKind::OneStarCase)
    }
}

/// Operation parameters, enough to replay a step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum StepOp {
    StarUp {
        gpp: usize,
    },
    StarDown {
        sun: usize,
        from: usize,
    },
    StarStar {
        first: usize,
        second: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        regroup: Option<(usize, usize)>,
    },
    Collapse,
    Rebase {
        q: Vec<usize>,
    },
    MergeSuns,
    Marker {
        label: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformStep {
    pub step_index: usize,
    pub kind: StepKind,
    pub vertex: VertexId,
    pub before: String,
    pub after: String,
    pub sigma_before: Option<usize>,
    pub sigma_after: Option<usize>,
    #[serde(flatten)]
    pub op: StepOp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub initial: Tree,
    pub steps: Vec<TransformStep>,
    pub result: GppTree,
}

/// One line of the JSONL trace format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum TraceRecord {
    Initial {
        n: usize,
        edges: Vec<(usize, usize)>,
    },
    Step(TransformStep),
    Final {
        n: usize,
        edges: Vec<(usize, usize)>,
        summary: String,
    },
}

impl Trace {
    /// Weights of the starlike vertices at the start and after each
    /// completed reduction, lightest first.
    pub fn starlike_milestones(&self) -> Vec<Vec<usize>> {
        let mut rep = GppTree::from_tree(&self.initial).expect("initial tree was accepted");
        let mut out = vec![weights(&rep)];
        for s in &self.steps {
            if s.kind == StepKind::Reduce {
                out.push(weights(&rep));
            } else if !s.kind.is_marker() {
                rep = apply_op(&rep, s.vertex, &s.op).expect("recorded step replays").rep;
            }
        }
        out
    }

    /// Representation after the last reduction of the many-starlike phase,
    /// i.e. where the one-vertex finish takes over.
    pub fn after_reductions(&self) -> GppTree {
        let last = self.steps.iter().rposition(|s| s.kind == StepKind::Reduce);
        let upto = last.map_or(0, |i| i + 1);
        replay(&self.initial, &self.steps[..upto]).expect("recorded steps replay")
    }

    pub fn to_jsonl(&self) -> String {
        let mut lines = Vec::with_capacity(self.steps.len() + 2);
        let push = |lines: &mut Vec<String>, r: &TraceRecord| {
            lines.push(serde_json::to_string(r).expect("trace records serialize"));
        };
        push(
            &mut lines,
            &TraceRecord::Initial {
                n: self.initial.n(),
                edges: self.initial.edges().to_vec(),
            },
        );
        for s in &self.steps {
            push(&mut lines, &TraceRecord::Step(s.clone()));
        }
        let fin = self.result.to_tree();
        push(
            &mut lines,
            &TraceRecord::Final {
                n: fin.n(),
                edges: fin.edges().to_vec(),
                summary: self.result.to_string(),
            },
        );
        lines.join("\n") + "\n"
    }
}

fn weights(rep: &GppTree) -> Vec<usize> {
    rep.starlike_vertices().into_iter().map(|(_, w)| w).collect()
}

/// A trace read back from JSONL.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTrace {
    pub initial: Tree,
    pub steps: Vec<TransformStep>,
    pub final_tree: Option<Tree>,
    pub final_summary: Option<String>,
}

/// Parse the output of [`Trace::to_jsonl`]. Blank lines are skipped.
pub fn read_jsonl(text: &str) -> Result<ParsedTrace, TransformError> {
    let bad = |line: usize, msg: String| TransformError::TraceFormat { line, msg };
    let mut initial = None;
    let mut steps = Vec::new();
    let mut fin = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let rec: TraceRecord = serde_json::from_str(raw).map_err(|e| bad(line, e.to_string()))?;
        match rec {
            TraceRecord::Initial { n, edges } => {
                if initial.is_some() {
                    return Err(bad(line, "second initial record".into()));
                }
                let t = Tree::from_edge_list(n, &edges).map_err(|e| bad(line, e.to_string()))?;
                initial = Some(t);
            }
            TraceRecord::Step(s) => {
                if initial.is_none() {
                    return Err(bad(line, "step before initial record".into()));
                }
                if fin.is_some() {
                    return Err(bad(line, "step after final record".into()));
                }
                steps.push(s);
            }
            TraceRecord::Final { n, edges, summary } => {
                if fin.is_some() {
                    return Err(bad(line, "second final record".into()));
                }
                let t = Tree::from_edge_list(n, &edges).map_err(|e| bad(line, e.to_string()))?;
                fin = Some((t, summary));
            }
        }
    }
    let initial = initial.ok_or_else(|| bad(0, "missing initial record".into()))?;
    let (final_tree, final_summary) = match fin {
        Some((t, s)) => (Some(t), Some(s)),
        None => (None, None),
    };
    Ok(ParsedTrace {
        initial,
        steps,
        final_tree,
        final_summary,
    })
}

/// Re-apply recorded steps to `initial`, checking each step's `after` summary.
pub fn replay(initial: &Tree, steps: &[TransformStep]) -> Result<GppTree, TransformError> {
    let mut rep = GppTree::from_tree(initial)?;
    for s in steps.iter().filter(|s| !s.kind.is_marker()) {
        let applied = apply_op(&rep, s.vertex, &s.op)?;
        let got = applied.rep.summary(applied.focus);
        if got != s.after || applied.kind != s.kind {
            return Err(TransformError::ReplayMismatch {
                step_index: s.step_index,
                expected: format!("{:?} {}", s.kind, s.after),
                got: format!("{:?} {}", applied.kind, got),
            });
        }
        rep = applied.rep;
    }
    Ok(rep)
}
