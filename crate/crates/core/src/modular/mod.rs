//! Finite-index subgroups of the modular group: words, coset tables, cusps,
//! membership, rewriting and element classification.

pub mod classify;
pub(crate) mod coset;
pub mod mat2;
pub mod subgroup;
pub mod word;

pub use classify::{classify, translation_exponent, ElementType};
pub use mat2::{Cusp, Mat2Z};
pub use subgroup::{
    coset_enumerate, coset_enumerate_with_images, stabilizer_of_action, CuspClass, ModularSubgroup,
    SchreierGen, SubgroupJson, Syllable, DEFAULT_MAX_COSETS,
};
pub use word::{matrix_to_word, word_to_matrix, StLetter, WordST};
