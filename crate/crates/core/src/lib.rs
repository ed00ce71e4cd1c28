//! Exact computation of Veech groups, symplectic monodromy and Lyapunov
//! exponents of rank-two pieces for square-tiled surfaces.

pub mod analysis;
pub mod commensurability;
pub mod error;
pub mod exact;
pub mod exec;
pub mod lyapunov;
pub mod modular;
pub mod monodromy;
pub mod origami;
pub mod rational;
pub mod splitting;
pub mod veech;

pub use error::{Error, ErrorClass, Result};
pub use exec::Exec;
pub use origami::Origami;
