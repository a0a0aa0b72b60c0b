use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use super::model::{reduced_iterate, Bialgebra, WordBialgebra};
use super::MapError;
use crate::linear::Lin;
use crate::par::Execution;
use crate::qsh::{LetterAlgebra, Word};
use crate::rings::{Rational, Ring};

type Rule<M, R> =
    dyn Fn(&MapRule<M, R>, &<M as Bialgebra>::Basis) -> Result<R, MapError> + Send + Sync;

/// A unital linear map `H -> A` given by a rule on the non-unit basis
/// elements, evaluated lazily and memoized per basis element.
///
/// The rule receives the map itself so that recursive definitions can call
/// back into the memo table.
pub struct MapRule<M: Bialgebra, R: Ring> {
    model: Arc<M>,
    one: R,
    rule: Box<Rule<M, R>>,
    memo: RwLock<HashMap<M::Basis, R>>,
    character: bool,
}

/// Shared handle to a [`MapRule`].
pub type Map<M, R> = Arc<MapRule<M, R>>;

/// Values of letters in the target ring.
pub type Valuation<L, R> = Arc<dyn Fn(&L) -> R + Send + Sync>;

impl<M: Bialgebra, R: Ring> MapRule<M, R> {
    pub fn new(
        model: &Arc<M>,
        one: R,
        rule: impl Fn(&MapRule<M, R>, &M::Basis) -> Result<R, MapError> + Send + Sync + 'static,
    ) -> Map<M, R> {
        Self::build(model, one, false, rule)
    }

    /// A map flagged as an algebra morphism.
    pub fn new_character(
        model: &Arc<M>,
        one: R,
        rule: impl Fn(&MapRule<M, R>, &M::Basis) -> Result<R, MapError> + Send + Sync + 'static,
    ) -> Map<M, R> {
        Self::build(model, one, true, rule)
    }

    fn build(
        model: &Arc<M>,
        one: R,
        character: bool,
        rule: impl Fn(&MapRule<M, R>, &M::Basis) -> Result<R, MapError> + Send + Sync + 'static,
    ) -> Map<M, R> {
        Arc::new(Self {
            model: model.clone(),
            one,
            rule: Box::new(rule),
            memo: RwLock::new(HashMap::new()),
            character,
        })
    }

    /// A non-recursive rule.
    pub fn from_fn(
        model: &Arc<M>,
        one: R,
        f: impl Fn(&M::Basis) -> Result<R, MapError> + Send + Sync + 'static,
    ) -> Map<M, R> {
        Self::new(model, one, move |_, b| f(b))
    }

    /// Values given by a table; basis elements missing from it map to zero.
    pub fn from_table(model: &Arc<M>, one: R, table: HashMap<M::Basis, R>) -> Map<M, R> {
        let zero = one.zero_like();
        Self::from_fn(model, one, move |b| Ok(table.get(b).cloned().unwrap_or_else(|| zero.clone())))
    }

    pub fn model(&self) -> &Arc<M> {
        &self.model
    }

    pub fn one(&self) -> &R {
        &self.one
    }

    pub fn zero(&self) -> R {
        self.one.zero_like()
    }

    pub fn is_character(&self) -> bool {
        self.character
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    pub fn eval(&self, b: &M::Basis) -> Result<R, MapError> {
        if self.model.is_unit(b) {
            return Ok(self.one.clone());
        }
        if let Some(v) = self.memo.read().expect("memo lock").get(b) {
            return Ok(v.clone());
        }
        let v = (self.rule)(self, b)?;
        self.memo.write().expect("memo lock").insert(b.clone(), v.clone());
        Ok(v)
    }

    pub fn eval_lin(&self, x: &Lin<M::Basis>) -> Result<R, MapError> {
        let mut acc = self.zero();
        for (b, c) in x.iter() {
            acc = acc.try_add(&self.eval(b)?.scale(c))?;
        }
        Ok(acc)
    }

    /// Evaluates independent basis elements, in parallel when `exec` allows.
    pub fn eval_many(&self, exec: Execution, items: &[M::Basis]) -> Vec<Result<R, MapError>> {
        exec.map(items, |b| self.eval(b))
    }
}

impl<M: Bialgebra, R: Ring> fmt::Debug for MapRule<M, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapRule")
            .field("one", &self.one)
            .field("character", &self.character)
            .field("memoized", &self.memo_len())
            .finish()
    }
}

/// Ordered product `v₁·v₂·…·v_k` in the target ring.
pub fn ring_product<R: Ring>(one: &R, values: &[R]) -> Result<R, MapError> {
    let mut acc = one.clone();
    for v in values {
        acc = acc.try_mul(v)?;
    }
    Ok(acc)
}

/// The convolution unit `u_A ∘ η`.
pub fn unit_map<M: Bialgebra, R: Ring>(model: &Arc<M>, one: R) -> Map<M, R> {
    MapRule::new_character(model, one, |m, _| Ok(m.zero()))
}

/// `f ∗ g = m_A ∘ (f ⊗ g) ∘ Δ`.
pub fn convolve<M: Bialgebra, R: Ring>(f: &Map<M, R>, g: &Map<M, R>) -> Result<Map<M, R>, MapError> {
    f.one().compatible(g.one())?;
    let (f, g) = (f.clone(), g.clone());
    let model = f.model().clone();
    Ok(MapRule::new(&model, f.one().clone(), move |m, b| {
        let mut acc = m.zero();
        for (t, c) in m.model().coproduct(b).iter() {
            let [l, r] = t.slots() else { unreachable!("coproduct has degree 2") };
            acc = acc.try_add(&f.eval(l)?.try_mul(&g.eval(r)?)?.scale(c))?;
        }
        Ok(acc)
    }))
}

/// Value of `Σ_k c_k · m^{[k]} ∘ f^{⊗k}` on `Δ'^{[k]}(b)` with signs `(-1)^k`.
fn geometric_series_at<M: Bialgebra, R: Ring>(f: &MapRule<M, R>, b: &M::Basis) -> Result<R, MapError> {
    let model = f.model();
    let degree = model.degree(b);
    let x = Lin::basis(b.clone());
    let mut acc = f.zero();
    for k in 1..=degree + 1 {
        let iterate = reduced_iterate(model.as_ref(), &x, k)?;
        if k == degree + 1 {
            if !iterate.is_zero() {
                return Err(MapError::Conilpotency { degree, k });
            }
            break;
        }
        let sign = Rational::from_integer(if k % 2 == 0 { 1.into() } else { (-1).into() });
        for (t, c) in iterate.iter() {
            let values = t.slots().iter().map(|s| f.eval(s)).collect::<Result<Vec<_>, _>>()?;
            acc = acc.try_add(&ring_product(f.one(), &values)?.scale(&(c * &sign)))?;
        }
    }
    Ok(acc)
}

/// `f^{∗-1} = Σ_{k≥0} (u_A∘η - f)^{∗k}`, finite by conilpotency.
pub fn convolution_inverse<M: Bialgebra, R: Ring>(f: &Map<M, R>) -> Map<M, R> {
    let f = f.clone();
    let model = f.model().clone();
    let one = f.one().clone();
    let character = f.is_character() && one.is_commutative();
    let rule = move |_: &MapRule<M, R>, b: &M::Basis| geometric_series_at(&f, b);
    MapRule::build(&model, one, character, rule)
}

/// `j(1) = 1`, `j(a) = v(a)`, `j(a₁…a_r) = 0` for `r ≥ 2`, for a letter
/// valuation `v`.
pub fn eval_j<L: Clone, R: Ring>(valuation: &Valuation<L, R>, one: &R, w: &Word<L>) -> R {
    match w.letters() {
        [] => one.clone(),
        [a] => valuation(a),
        _ => one.zero_like(),
    }
}

/// The map `j` composed with a letter valuation, as a rule on words.
pub fn j_map<A: LetterAlgebra + 'static, R: Ring>(
    model: &Arc<WordBialgebra<A>>,
    valuation: Valuation<A::Letter, R>,
    one: R,
) -> Map<WordBialgebra<A>, R> {
    let unit = one.clone();
    MapRule::new_character(model, one, move |_, w| Ok(eval_j(&valuation, &unit, w)))
}

/// `j^{∗-1}(a₁…a_s) = (-1)^s v(a₁)…v(a_s)`.
pub fn j_inverse_map<A: LetterAlgebra + 'static, R: Ring>(
    model: &Arc<WordBialgebra<A>>,
    valuation: Valuation<A::Letter, R>,
    one: R,
) -> Map<WordBialgebra<A>, R> {
    let unit = one.clone();
    let character = one.is_commutative();
    MapRule::build(model, one, character, move |_, w| {
        let values: Vec<R> = w.letters().iter().map(|l| valuation(l)).collect();
        let p = ring_product(&unit, &values)?;
        Ok(if w.len() % 2 == 0 { p } else { p.neg() })
    })
}
