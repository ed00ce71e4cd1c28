//! Exact integer/rational linear algebra, permutations and free-group words.

pub mod cyclotomic;
pub mod form;
pub mod matrix;
pub mod perm;
pub mod word;

pub use cyclotomic::{cyclotomic_kernel, cyclotomic_poly};
pub use form::{
    scaled_symplectic_basis_rank2, symplectic_reduce, AlternatingForm, SymplecticBasis,
};
pub use matrix::{kernel_q, MatQ, MatZ, Matrix, Q};
pub use perm::{is_transitive, simultaneous_conjugacy, Permutation};
pub use word::{FreeWord, Letter};
