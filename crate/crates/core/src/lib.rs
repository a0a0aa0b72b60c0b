//! Exact quasi-shuffle Hopf algebras, Rota-Baxter Laurent series and
//! Birkhoff decompositions of characters.
//!
//! * [`rings`]: rationals, truncated polynomials, windowed Laurent series and
//!   the minimal-subtraction splitting.
//! * [`qsh`]: words, quasi-shuffle and tridendriform products,
//!   deconcatenation, antipode.
//! * [`hopfmaps`]: convolution, inverses, Bogoliubov recursion, closed
//!   Birkhoff formulas and the semigroup `⊙`.
//! * [`fdb`]: the Faà di Bruno Hopf algebra and formal diffeomorphisms.

pub mod fdb;
pub mod hopfmaps;
pub mod linear;
pub mod par;
pub mod qsh;
pub mod random;
pub mod rings;
