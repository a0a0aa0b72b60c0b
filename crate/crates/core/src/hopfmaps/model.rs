use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use super::MapError;
use crate::linear::{Lin, Tensor};
use crate::qsh::{deconcat_word, factorizations, qsh_words, LetterAlgebra, QshError, Word};
use crate::rings::rat_int;

/// A graded connected (hence conilpotent) bialgebra given on a basis.
pub trait Bialgebra: Send + Sync + 'static {
    type Basis: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static;

    fn unit(&self) -> Self::Basis;

    fn is_unit(&self, b: &Self::Basis) -> bool {
        *b == self.unit()
    }

    /// Grading; the unit is the only basis element of degree 0.
    fn degree(&self, b: &Self::Basis) -> usize;

    fn product(&self, a: &Self::Basis, b: &Self::Basis) -> Lin<Self::Basis>;

    fn coproduct(&self, b: &Self::Basis) -> Lin<Tensor<Self::Basis>>;

    /// `Δ'(h) = Δ(h) - h⊗1 - 1⊗h`, zero on the unit.
    fn reduced_coproduct(&self, b: &Self::Basis) -> Lin<Tensor<Self::Basis>> {
        if self.is_unit(b) {
            return Lin::zero();
        }
        let u = self.unit();
        let mut d = self.coproduct(b);
        d.add_term(Tensor::pair(b.clone(), u.clone()), rat_int(-1));
        d.add_term(Tensor::pair(u, b.clone()), rat_int(-1));
        d
    }

    fn basis_of_degree(&self, n: usize) -> Vec<Self::Basis>;
}

/// `QSh(A)` (or any deconcatenation bialgebra on words) with a finite
/// alphabet used for basis enumeration.
pub struct WordBialgebra<A: LetterAlgebra> {
    alg: Arc<A>,
    alphabet: Vec<A::Letter>,
}

impl<A: LetterAlgebra> WordBialgebra<A> {
    pub fn new(alg: Arc<A>, alphabet: Vec<A::Letter>) -> Self {
        Self { alg, alphabet }
    }

    pub fn algebra(&self) -> &Arc<A> {
        &self.alg
    }

    pub fn alphabet(&self) -> &[A::Letter] {
        &self.alphabet
    }
}

impl<A: LetterAlgebra + 'static> Bialgebra for WordBialgebra<A>
where
    A::Letter: 'static,
{
    type Basis = Word<A::Letter>;

    fn unit(&self) -> Self::Basis {
        Word::empty()
    }

    fn is_unit(&self, b: &Self::Basis) -> bool {
        b.is_empty()
    }

    fn degree(&self, b: &Self::Basis) -> usize {
        b.len()
    }

    fn product(&self, a: &Self::Basis, b: &Self::Basis) -> Lin<Self::Basis> {
        qsh_words(self.alg.as_ref(), a.letters(), b.letters())
    }

    fn coproduct(&self, b: &Self::Basis) -> Lin<Tensor<Self::Basis>> {
        deconcat_word(b)
    }

    fn reduced_coproduct(&self, b: &Self::Basis) -> Lin<Tensor<Self::Basis>> {
        factorizations(b, 2).into_iter().map(|f| (Tensor(f), rat_int(1))).collect()
    }

    fn basis_of_degree(&self, n: usize) -> Vec<Self::Basis> {
        let mut layer = vec![Word::empty()];
        for _ in 0..n {
            layer = layer
                .iter()
                .flat_map(|w| self.alphabet.iter().map(move |l| w.concat(&Word::letter(l.clone()))))
                .collect();
        }
        layer.sort();
        layer
    }
}

pub fn product_lin<M: Bialgebra>(model: &M, x: &Lin<M::Basis>, y: &Lin<M::Basis>) -> Lin<M::Basis> {
    x.bilinear(y, |a, b| model.product(a, b))
}

pub fn coproduct_lin<M: Bialgebra>(model: &M, x: &Lin<M::Basis>) -> Lin<Tensor<M::Basis>> {
    x.flat_map(|b| model.coproduct(b))
}

/// Slotwise product on `H^{⊗n}`.
pub fn tensor_product<M: Bialgebra>(
    model: &M,
    x: &Lin<Tensor<M::Basis>>,
    y: &Lin<Tensor<M::Basis>>,
) -> Lin<Tensor<M::Basis>> {
    x.bilinear(y, |s, t| {
        let mut acc: Lin<Tensor<M::Basis>> = Lin::basis(Tensor(Vec::new()));
        for (a, b) in s.slots().iter().zip(t.slots()) {
            let p = model.product(a, b);
            acc = acc.bilinear(&p, |pre, m| {
                let mut v = pre.0.clone();
                v.push(m.clone());
                Lin::basis(Tensor(v))
            });
        }
        acc
    })
}

fn check_augmentation<M: Bialgebra>(model: &M, x: &Lin<M::Basis>) -> Result<(), MapError> {
    if x.keys().any(|b| model.is_unit(b)) {
        return Err(QshError::NotInCounitKernel.into());
    }
    Ok(())
}

fn expand_first_slot<M: Bialgebra>(x: &Lin<Tensor<M::Basis>>, f: impl Fn(&M::Basis) -> Lin<Tensor<M::Basis>>) -> Lin<Tensor<M::Basis>> {
    x.flat_map(|t| {
        let (head, tail) = t.slots().split_first().expect("nonempty tensor");
        let rest = Tensor(tail.to_vec());
        f(head).map_basis(|s| s.concat(&rest))
    })
}

/// `Δ'^{[k]}(x)` for `x` in the augmentation ideal.
pub fn reduced_iterate<M: Bialgebra>(model: &M, x: &Lin<M::Basis>, k: usize) -> Result<Lin<Tensor<M::Basis>>, MapError> {
    if k == 0 {
        return Err(QshError::InvalidIterate(k).into());
    }
    check_augmentation(model, x)?;
    let mut cur = x.map_basis(|b| Tensor(vec![b.clone()]));
    for _ in 1..k {
        if cur.is_zero() {
            break;
        }
        cur = expand_first_slot::<M>(&cur, |b| model.reduced_coproduct(b));
    }
    Ok(cur)
}

/// `ι(x) = Σ_{k≥1} Δ'^{[k]}(x)`; fails if the iterates do not vanish past
/// the grading bound.
pub fn iota_general<M: Bialgebra>(model: &M, x: &Lin<M::Basis>) -> Result<Lin<Tensor<M::Basis>>, MapError> {
    check_augmentation(model, x)?;
    let bound = x.keys().map(|b| model.degree(b)).max().unwrap_or(0);
    let mut out = Lin::zero();
    let mut cur = x.map_basis(|b| Tensor(vec![b.clone()]));
    for _ in 0..bound {
        out.add_assign(&cur);
        cur = expand_first_slot::<M>(&cur, |b| model.reduced_coproduct(b));
    }
    if !cur.is_zero() {
        return Err(MapError::Conilpotency { degree: bound, k: bound + 1 });
    }
    Ok(out)
}

/// `Δ^{[n]}` computed directly as `(Δ ⊗ Id^{⊗(n-2)}) ∘ Δ^{[n-1]}`.
pub fn iterated_coproduct<M: Bialgebra>(model: &M, x: &Lin<M::Basis>, n: usize) -> Result<Lin<Tensor<M::Basis>>, MapError> {
    if n == 0 {
        return Err(QshError::InvalidIterate(n).into());
    }
    let mut cur = x.map_basis(|b| Tensor(vec![b.clone()]));
    for _ in 1..n {
        cur = expand_first_slot::<M>(&cur, |b| model.coproduct(b));
    }
    Ok(cur)
}

/// Increasing injections `{1..i} -> {1..n}`, as sorted position lists.
pub fn increasing_injections(i: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, left: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in start..=(n - left) {
            cur.push(p);
            rec(p + 1, left - 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if i <= n {
        rec(0, i, n, &mut Vec::new(), &mut out);
    }
    out
}

/// `Δ^{[n]}(x) = Σ_i Σ_{f ∈ Inj(i,n)} f_*(Δ'^{[i]}(x))`: the reduced iterates
/// with units inserted at the positions missed by `f`.
pub fn iterated_coproduct_split<M: Bialgebra>(model: &M, x: &Lin<M::Basis>, n: usize) -> Result<Lin<Tensor<M::Basis>>, MapError> {
    if n == 0 {
        return Err(QshError::InvalidIterate(n).into());
    }
    let unit = model.unit();
    let mut out = Lin::zero();
    for i in 1..=n {
        let red = reduced_iterate(model, x, i)?;
        if red.is_zero() {
            break;
        }
        for inj in increasing_injections(i, n) {
            out.add_assign(&red.map_basis(|t| {
                let mut slots = vec![unit.clone(); n];
                for (pos, b) in inj.iter().zip(t.slots()) {
                    slots[*pos] = b.clone();
                }
                Tensor(slots)
            }));
        }
    }
    Ok(out)
}

/// Antipode by the recursion `S(h) = -h - Σ S(h')h''` over `Δ'(h)`.
pub fn antipode_recursive<M: Bialgebra>(model: &M, b: &M::Basis) -> Lin<M::Basis> {
    if model.is_unit(b) {
        return Lin::basis(b.clone());
    }
    let mut out = Lin::term(b.clone(), rat_int(-1));
    for (t, c) in model.reduced_coproduct(b).iter() {
        let [l, r] = t.slots() else { unreachable!("coproduct has degree 2") };
        let s = antipode_recursive(model, l);
        out.add_scaled(&product_lin(model, &s, &Lin::basis(r.clone())), &-c);
    }
    out
}

/// `(Δ ⊗ Id)Δ(b) = (Id ⊗ Δ)Δ(b)`.
pub fn is_coassociative_at<M: Bialgebra>(model: &M, b: &M::Basis) -> bool {
    let d = model.coproduct(b);
    let left = d.flat_map(|t| {
        let [l, r] = t.slots() else { unreachable!() };
        model.coproduct(l).map_basis(|s| s.concat(&Tensor(vec![r.clone()])))
    });
    let right = d.flat_map(|t| {
        let [l, r] = t.slots() else { unreachable!() };
        model.coproduct(r).map_basis(|s| Tensor(vec![l.clone()]).concat(s))
    });
    left == right
}

/// `Δ(ab) = Δ(a)Δ(b)`.
pub fn is_multiplicative_coproduct_at<M: Bialgebra>(model: &M, a: &M::Basis, b: &M::Basis) -> bool {
    let lhs = coproduct_lin(model, &model.product(a, b));
    let rhs = tensor_product(model, &model.coproduct(a), &model.coproduct(b));
    lhs == rhs
}

/// `m ∘ (S ⊗ Id) ∘ Δ(b) = ε(b)·1` with the given antipode.
pub fn satisfies_antipode_axiom<M: Bialgebra>(model: &M, b: &M::Basis, antipode: impl Fn(&M::Basis) -> Lin<M::Basis>) -> bool {
    let lhs = model.coproduct(b).flat_map(|t| {
        let [l, r] = t.slots() else { unreachable!() };
        product_lin(model, &antipode(l), &Lin::basis(r.clone()))
    });
    let expected = if model.is_unit(b) { Lin::basis(model.unit()) } else { Lin::zero() };
    lhs == expected
}
