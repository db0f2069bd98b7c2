//! Quiver loci for type A quivers: exact linear algebra, quiver rank arrays,
//! the Zelevinsky map, Zelevinsky permutations, degeneration posets,
//! orientation reduction and a brute-force orbit oracle over small fields.

pub mod error;
pub mod linalg;
pub mod quiver;
pub mod rep;
pub mod zelevinsky;
pub mod perm;
pub mod poset;
pub mod reduction;
pub mod oracle;

pub use error::{Error, Result};
pub use linalg::{ExactMatrix, Field, Scalar};
pub use quiver::{
    ArrowLabel, BipartiteQuiver, DimensionVector, Interval, Orientation, Quiver, TypeAQuiver,
    VertexLabel,
};
