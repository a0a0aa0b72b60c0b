//! The semigroup `𝒰(QSh(A), A)` under `f ⊙ g = f ∘ QSh(g) ∘ ι` and its
//! action `f ⊙ φ = f ∘ QSh(φ) ∘ ι` on `𝒰(H, A)`.
//!
//! An element of `𝒰(QSh(A), A)` is a [`WordMap`]: a rule evaluating a word
//! whose letters are elements of `A`, linear in each letter.

use std::sync::Arc;

use super::birkhoff::birkhoff_closed_qsh;
use super::maps::{ring_product, Map, MapRule, Valuation};
use super::model::{iota_general, Bialgebra, WordBialgebra};
use super::MapError;
use crate::linear::{compositions, cut, Lin};
use crate::qsh::LetterAlgebra;
use crate::rings::{Ring, RotaBaxter, Split};

pub trait WordMap<R: Ring>: Send + Sync {
    /// Value on the word `v₁…v_s` of target-ring letters; the empty word
    /// must map to `one`.
    fn eval_letters(&self, letters: &[R], one: &R) -> Result<R, MapError>;
}

pub type SharedWordMap<R> = Arc<dyn WordMap<R>>;

/// `j`: identity on letters, zero on longer words.
pub struct JWord;

impl<R: Ring> WordMap<R> for JWord {
    fn eval_letters(&self, letters: &[R], one: &R) -> Result<R, MapError> {
        Ok(match letters {
            [] => one.clone(),
            [a] => a.clone(),
            _ => one.zero_like(),
        })
    }
}

/// `j^{∗-1}(v₁…v_s) = (-1)^s v₁⋯v_s`.
pub struct JInverseWord;

impl<R: Ring> WordMap<R> for JInverseWord {
    fn eval_letters(&self, letters: &[R], one: &R) -> Result<R, MapError> {
        let p = ring_product(one, letters)?;
        Ok(if letters.len().is_multiple_of(2) { p } else { p.neg() })
    }
}

/// `j₋` or `j₊` by the nested-projection formula.
pub struct JSplitWord(pub Split);

impl<R: RotaBaxter> WordMap<R> for JSplitWord {
    fn eval_letters(&self, letters: &[R], one: &R) -> Result<R, MapError> {
        if letters.is_empty() {
            return Ok(one.clone());
        }
        birkhoff_closed_qsh(letters, self.0)
    }
}

/// A word map from a closure.
pub struct ClosureWordMap<R: Ring>(#[allow(clippy::type_complexity)] pub Arc<dyn Fn(&[R], &R) -> Result<R, MapError> + Send + Sync>);

impl<R: Ring> WordMap<R> for ClosureWordMap<R> {
    fn eval_letters(&self, letters: &[R], one: &R) -> Result<R, MapError> {
        if letters.is_empty() {
            return Ok(one.clone());
        }
        (self.0)(letters, one)
    }
}

/// `(f ∗ g)(v) = Σ f(v₁…v_r) g(v_{r+1}…v_s)` over deconcatenation.
struct WordConvolution<R: Ring> {
    f: SharedWordMap<R>,
    g: SharedWordMap<R>,
}

impl<R: Ring> WordMap<R> for WordConvolution<R> {
    fn eval_letters(&self, letters: &[R], one: &R) -> Result<R, MapError> {
        let mut acc = one.zero_like();
        for r in 0..=letters.len() {
            let (l, rt) = letters.split_at(r);
            acc = acc.try_add(&self.f.eval_letters(l, one)?.try_mul(&self.g.eval_letters(rt, one)?)?)?;
        }
        Ok(acc)
    }
}

/// `(f ⊙ g)(v) = Σ f(g(v¹)…g(vᵗ))` over factorizations `v = v¹⋯vᵗ`.
struct WordComposition<R: Ring> {
    f: SharedWordMap<R>,
    g: SharedWordMap<R>,
}

impl<R: Ring> WordMap<R> for WordComposition<R> {
    fn eval_letters(&self, letters: &[R], one: &R) -> Result<R, MapError> {
        if letters.is_empty() {
            return Ok(one.clone());
        }
        let mut acc = one.zero_like();
        for sizes in compositions(letters.len()) {
            let inner = cut(letters, &sizes)
                .into_iter()
                .map(|b| self.g.eval_letters(b, one))
                .collect::<Result<Vec<_>, _>>()?;
            acc = acc.try_add(&self.f.eval_letters(&inner, one)?)?;
        }
        Ok(acc)
    }
}

pub fn word_convolve<R: Ring>(f: &SharedWordMap<R>, g: &SharedWordMap<R>) -> SharedWordMap<R> {
    Arc::new(WordConvolution {
        f: f.clone(),
        g: g.clone(),
    })
}

/// `f ⊙ g` in `𝒰(QSh(A), A)`; the unit is [`JWord`].
pub fn semigroup_compose<R: Ring>(f: &SharedWordMap<R>, g: &SharedWordMap<R>) -> SharedWordMap<R> {
    Arc::new(WordComposition {
        f: f.clone(),
        g: g.clone(),
    })
}

/// `f ⊙ φ = f ∘ QSh(φ) ∘ ι`: sum over the terms `h¹⊗…⊗hᵏ` of `ι(h)` of
/// `f(φ(h¹)…φ(hᵏ))`.
pub fn semigroup_act<M: Bialgebra, R: Ring>(f: &SharedWordMap<R>, phi: &Map<M, R>) -> Map<M, R> {
    let (f, phi) = (f.clone(), phi.clone());
    let model = phi.model().clone();
    MapRule::new(&model, phi.one().clone(), move |m, b| {
        let iota = iota_general(m.model().as_ref(), &Lin::basis(b.clone()))?;
        let mut acc = m.zero();
        for (t, c) in iota.iter() {
            let values = t.slots().iter().map(|s| phi.eval(s)).collect::<Result<Vec<_>, _>>()?;
            acc = acc.try_add(&f.eval_letters(&values, phi.one())?.scale(c))?;
        }
        Ok(acc)
    })
}

/// A word map read on a symbol-word bialgebra through a letter valuation,
/// i.e. `f ∘ QSh(v)`.
pub fn on_words<A: LetterAlgebra + 'static, R: Ring>(
    model: &Arc<WordBialgebra<A>>,
    valuation: Valuation<A::Letter, R>,
    one: R,
    f: &SharedWordMap<R>,
) -> Map<WordBialgebra<A>, R> {
    let f = f.clone();
    let unit = one.clone();
    MapRule::from_fn(model, one, move |w| {
        let values: Vec<R> = w.letters().iter().map(|l| valuation(l)).collect();
        f.eval_letters(&values, &unit)
    })
}
