//! Shared numerical kernels.

pub mod dd;
pub mod dedupe;
pub mod linalg;
pub mod newton;
pub mod ode;
pub mod poly;
pub mod root1d;

pub use dedupe::{canonicalize, dedupe, Cluster, Symmetry};
pub use newton::{newton_multistart, newton_solve, FnSystem, NewtonOptions, NewtonRoot, NonlinearSystem};
pub use poly::{interpolate_integer_nodes, poly_roots, ComplexPoly};
