//! Colored Reidemeister move calculus with verified traces, plus the phase
//! pipeline reducing 11-colored diagrams to five-color palettes.

mod detour;
mod gadgets;
mod moves;
mod phases;
mod state;
mod trace;

pub use phases::*;
pub use state::{ColoredState, Move, MoveError, SDart};
pub use trace::{RewriteTrace, TraceStep};
