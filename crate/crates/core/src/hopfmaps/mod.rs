//! Linear maps from a conilpotent bialgebra to an algebra: convolution,
//! inverses, Bogoliubov's recursion, closed Birkhoff formulas and the
//! semigroup `⊙`.

mod birkhoff;
mod maps;
mod model;
mod semigroup;

use thiserror::Error;

use crate::qsh::QshError;
use crate::rings::RingError;

pub use birkhoff::{
    birkhoff_closed_qsh, birkhoff_closed_words, birkhoff_closed_words_pair, birkhoff_recursive, bogoliubov_prepare,
    j_split_map, nested_projection, BirkhoffPair,
};
pub use maps::{
    convolution_inverse, convolve, eval_j, j_inverse_map, j_map, ring_product, unit_map, Map, MapRule, Valuation,
};
pub use model::{
    antipode_recursive, coproduct_lin, increasing_injections, iota_general, is_coassociative_at,
    is_multiplicative_coproduct_at, iterated_coproduct, iterated_coproduct_split, product_lin, reduced_iterate,
    satisfies_antipode_axiom, tensor_product, Bialgebra, WordBialgebra,
};
pub use semigroup::{
    on_words, semigroup_act, semigroup_compose, word_convolve, ClosureWordMap, JInverseWord, JSplitWord, JWord,
    SharedWordMap, WordMap,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Qsh(#[from] QshError),
    #[error("reduced iterate of order {k} does not vanish on an element of degree {degree}")]
    Conilpotency { degree: usize, k: usize },
    #[error("model hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("value undefined: {0}")]
    Undefined(String),
}
