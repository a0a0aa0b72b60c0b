//! The quasi-shuffle Hopf algebra `QSh(A)` of words over an associative
//! algebra `A` given on a basis of letters.

mod algebra;
mod ops;
mod word;

use thiserror::Error;

pub use algebra::{
    is_associative_on, is_commutative_on, AlgebraElement, LetterAlgebra, Monomial, MonomialAlgebra, MzvAlgebra,
    MzvLetter, ShuffleAlgebra, StructureConstants,
};
pub use ops::{
    algebra_mul, all_factorizations, antipode, antipode_axiom_lhs, antipode_word, antipode_word_with, counit,
    deconcat, deconcat_word, factorizations, half_product, iota_word, qsh_product, qsh_product_with, qsh_words,
    reduced_coproduct_iter, tensor_qsh, HalfProduct,
};
pub use word::{words_up_to, QShElement, TensorElement, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QshError {
    #[error("half products are undefined when an operand contains the empty word")]
    EmptyHalfProduct,
    #[error("expected a combination of length-one words, found a word of length {0}")]
    NotLengthOne(usize),
    #[error("iterated reduced coproduct needs k >= 1, got {0}")]
    InvalidIterate(usize),
    #[error("element is not in the kernel of the counit")]
    NotInCounitKernel,
}
