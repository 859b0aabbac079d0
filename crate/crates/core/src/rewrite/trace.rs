//! Replayable move traces with per-step state hashes.

use super::state::{ColoredState, Move, MoveError};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub mv: Move,
    pub image_after: Vec<u32>,
    pub hash_after: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RewriteTrace {
    pub initial_hash: String,
    pub steps: Vec<TraceStep>,
}

impl RewriteTrace {
    pub fn new(initial: &ColoredState) -> Self {
        RewriteTrace {
            initial_hash: initial.state_hash(),
            steps: Vec::new(),
        }
    }

    pub fn record(&mut self, mv: Move, state: &ColoredState) {
        self.steps.push(TraceStep {
            mv,
            image_after: state.image(),
            hash_after: state.state_hash(),
        });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-apply every move to a copy of `initial` and check all hashes.
    pub fn replay(&self, initial: &ColoredState) -> Result<ColoredState, MoveError> {
        if initial.state_hash() != self.initial_hash {
            return Err(MoveError::Precondition(
                "initial state does not match trace".into(),
            ));
        }
        let mut st = initial.clone();
        for (i, step) in self.steps.iter().enumerate() {
            st.apply(&step.mv)?;
            if st.state_hash() != step.hash_after {
                return Err(MoveError::Precondition(format!(
                    "replay hash mismatch at step {i}"
                )));
            }
            if st.image() != step.image_after {
                return Err(MoveError::Precondition(format!(
                    "replay image mismatch at step {i}"
                )));
            }
        }
        Ok(st)
    }
}
