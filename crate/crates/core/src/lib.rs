//! Fox p-colorings of knot diagrams, palette graphs of color sets over `Z/p`,
//! and verified colored Reidemeister rewriting.
//!
//! The crate has four layers:
//!
//! - [`modp`]: exact arithmetic in `Z/p` (halving, affine maps);
//! - [`palette`]: palette graphs, connectivity, affine classification and the
//!   spanning-tree determinant machinery;
//! - [`diagram`] and [`coloring`]: PD-code knot diagrams and the coloring
//!   linear algebra (kernel rank, knot determinant, enumeration);
//! - [`rewrite`]: colored Reidemeister moves with verified traces and the
//!   phase pipeline that reduces 11-colored diagrams to five colors.
//!
//! [`verify`] bundles the exhaustive self-checks behind one report type used
//! by both the CLI and the acceptance tests.

pub mod coloring;
pub mod diagram;
pub mod modp;
pub mod palette;
pub mod rewrite;
pub mod verify;

pub use coloring::{ColoringSpace, FoxColoring};
pub use diagram::Diagram;
pub use modp::{AffineMap, Prime, Residue};
pub use palette::PaletteGraph;
