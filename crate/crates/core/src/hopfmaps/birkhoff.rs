use std::sync::Arc;

use super::maps::{Map, MapRule, Valuation};
use super::model::{Bialgebra, WordBialgebra};
use super::MapError;
use crate::qsh::{all_factorizations, LetterAlgebra, QshError, Word};
use crate::rings::{RotaBaxter, Split};

/// The factors `φ₋` (counterterm, values in `A₋` on `H⁺`) and `φ₊`
/// (renormalized, values in `A₊`) with `φ₋ ∗ φ = φ₊`.
pub struct BirkhoffPair<M: Bialgebra, R: RotaBaxter> {
    pub minus: Map<M, R>,
    pub plus: Map<M, R>,
}

impl<M: Bialgebra, R: RotaBaxter> Clone for BirkhoffPair<M, R> {
    fn clone(&self) -> Self {
        Self {
            minus: self.minus.clone(),
            plus: self.plus.clone(),
        }
    }
}

impl<M: Bialgebra, R: RotaBaxter> BirkhoffPair<M, R> {
    pub fn side(&self, side: Split) -> &Map<M, R> {
        match side {
            Split::Minus => &self.minus,
            Split::Plus => &self.plus,
        }
    }
}

/// Bogoliubov preparation `φ̄(h) = φ(h) - Σ p₋(φ̄(h'))·φ(h'')` over `Δ'(h)`.
pub fn bogoliubov_prepare<M: Bialgebra, R: RotaBaxter>(phi: &Map<M, R>) -> Map<M, R> {
    let phi = phi.clone();
    let model = phi.model().clone();
    MapRule::new(&model, phi.one().clone(), move |bar, b| {
        let mut acc = phi.eval(b)?;
        for (t, c) in bar.model().reduced_coproduct(b).iter() {
            let [l, r] = t.slots() else { unreachable!("coproduct has degree 2") };
            let term = bar.eval(l)?.p_minus().try_mul(&phi.eval(r)?)?;
            acc = acc.try_add(&term.scale(&-c))?;
        }
        Ok(acc)
    })
}

/// Birkhoff decomposition by Bogoliubov's recursion:
/// `φ₊ = p₊ ∘ φ̄` and `φ₋ = -p₋ ∘ φ̄` on `H⁺`.
pub fn birkhoff_recursive<M: Bialgebra, R: RotaBaxter>(phi: &Map<M, R>) -> BirkhoffPair<M, R> {
    let bar = bogoliubov_prepare(phi);
    let model = phi.model().clone();
    let one = phi.one().clone();
    let character = phi.is_character() && one.is_commutative();
    let build = |side: Split| {
        let bar = bar.clone();
        let rule = move |_: &MapRule<M, R>, b: &M::Basis| {
            let v = bar.eval(b)?;
            Ok(match side {
                Split::Minus => v.p_minus().neg(),
                Split::Plus => v.p_plus(),
            })
        };
        if character {
            MapRule::new_character(&model, one.clone(), rule)
        } else {
            MapRule::new(&model, one.clone(), rule)
        }
    };
    BirkhoffPair {
        minus: build(Split::Minus),
        plus: build(Split::Plus),
    }
}

/// `p_side(p₋(…p₋(p₋(v₁)·v₂)…)·v_t)` with no sign.
pub fn nested_projection<R: RotaBaxter>(values: &[R], side: Split) -> Result<R, MapError> {
    let (first, rest) = values.split_first().ok_or(QshError::NotInCounitKernel)?;
    let mut acc = first.clone();
    for v in rest {
        acc = acc.p_minus().try_mul(v)?;
    }
    Ok(acc.project(side))
}

fn side_sign(side: Split, t: usize) -> bool {
    // true when the term carries a minus sign
    match side {
        Split::Minus => t % 2 == 1,
        Split::Plus => t.is_multiple_of(2),
    }
}

fn signed<R: RotaBaxter>(v: R, negative: bool) -> R {
    if negative {
        v.neg()
    } else {
        v
    }
}

/// Closed form for `j±` on a word with letter values `a₁ … a_r`:
/// `j₊ = (-1)^{r-1} p₊(p₋(…(p₋(a₁)a₂)…)a_r)` and
/// `j₋ = (-1)^r p₋(p₋(…(p₋(a₁)a₂)…)a_r)`.
pub fn birkhoff_closed_qsh<R: RotaBaxter>(values: &[R], side: Split) -> Result<R, MapError> {
    Ok(signed(nested_projection(values, side)?, side_sign(side, values.len())))
}

/// `j±` composed with a letter valuation, as rules on words.
pub fn j_split_map<A: LetterAlgebra + 'static, R: RotaBaxter>(
    model: &Arc<WordBialgebra<A>>,
    valuation: Valuation<A::Letter, R>,
    one: R,
    side: Split,
) -> Map<WordBialgebra<A>, R> {
    let character = one.is_commutative();
    let rule = move |_: &MapRule<WordBialgebra<A>, R>, w: &Word<A::Letter>| {
        let values: Vec<R> = w.letters().iter().map(|l| valuation(l)).collect();
        birkhoff_closed_qsh(&values, side)
    };
    if character {
        MapRule::new_character(model, one, rule)
    } else {
        MapRule::new(model, one, rule)
    }
}

/// Closed form on a deconcatenation coalgebra: the sum over factorizations
/// `x = x¹⋯xᵗ` of `(-1)^t p₋(p₋(…p₋(φ(x¹))φ(x²)…)φ(xᵗ))` for `φ₋`, and of
/// `(-1)^{t-1} p₊(…)` for `φ₊`.
pub fn birkhoff_closed_words<A: LetterAlgebra + 'static, R: RotaBaxter>(
    phi: &Map<WordBialgebra<A>, R>,
    w: &Word<A::Letter>,
    side: Split,
) -> Result<R, MapError> {
    if w.is_empty() {
        return Ok(phi.one().clone());
    }
    let mut acc = phi.zero();
    for blocks in all_factorizations(w) {
        let values = blocks.iter().map(|b| phi.eval(b)).collect::<Result<Vec<_>, _>>()?;
        let term = signed(nested_projection(&values, side)?, side_sign(side, blocks.len()));
        acc = acc.try_add(&term)?;
    }
    Ok(acc)
}

/// Both closed-form factors as maps.
pub fn birkhoff_closed_words_pair<A: LetterAlgebra + 'static, R: RotaBaxter>(
    phi: &Map<WordBialgebra<A>, R>,
) -> BirkhoffPair<WordBialgebra<A>, R> {
    let character = phi.is_character() && phi.one().is_commutative();
    let build = |side: Split| {
        let (model, one) = (phi.model().clone(), phi.one().clone());
        let phi = phi.clone();
        let rule = move |_: &MapRule<WordBialgebra<A>, R>, w: &Word<A::Letter>| birkhoff_closed_words(&phi, w, side);
        if character {
            MapRule::new_character(&model, one, rule)
        } else {
            MapRule::new(&model, one, rule)
        }
    };
    BirkhoffPair {
        minus: build(Split::Minus),
        plus: build(Split::Plus),
    }
}
