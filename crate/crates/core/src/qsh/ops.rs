use num::Zero;

use super::{LetterAlgebra, QShElement, QshError, TensorElement, Word};
use crate::linear::{compositions, compositions_into, cut, Lin, Tensor};
use crate::par::Execution;
use crate::rings::{rat_int, Rational};

type WordPair<'a, L> = (&'a Word<L>, &'a Word<L>, Rational);

fn prepend_all<L: Clone + Ord>(x: &QShElement<L>, l: &L) -> QShElement<L> {
    x.map_basis(|w| w.prepend(l.clone()))
}

/// Product `·_A` on length-one elements.
pub fn algebra_mul<A: LetterAlgebra>(
    alg: &A,
    a: &QShElement<A::Letter>,
    b: &QShElement<A::Letter>,
) -> Result<QShElement<A::Letter>, QshError> {
    let letters = |x: &QShElement<A::Letter>| -> Result<Lin<A::Letter>, QshError> {
        x.iter()
            .map(|(w, c)| match w.letters() {
                [l] => Ok((l.clone(), c.clone())),
                _ => Err(QshError::NotLengthOne(w.len())),
            })
            .collect()
    };
    let prod = alg.mul_lin(&letters(a)?, &letters(b)?);
    Ok(prod.map_basis(|l| Word::letter(l.clone())))
}

/// Quasi-shuffle of two words, by the first-letter recursion
/// `av ⧢ bw = a(v ⧢ bw) + b(av ⧢ w) + (a·b)(v ⧢ w)` over all suffix pairs.
pub fn qsh_words<A: LetterAlgebra>(alg: &A, u: &[A::Letter], v: &[A::Letter]) -> QShElement<A::Letter> {
    let (n, m) = (u.len(), v.len());
    let mut table: Vec<Vec<QShElement<A::Letter>>> = vec![vec![Lin::zero(); m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            let cell = if i == n {
                Lin::basis(Word::from_slice(&v[j..]))
            } else if j == m {
                Lin::basis(Word::from_slice(&u[i..]))
            } else {
                let (a, b) = (&u[i], &v[j]);
                let mut acc = prepend_all(&table[i + 1][j], a);
                acc.add_assign(&prepend_all(&table[i][j + 1], b));
                for (c, coef) in alg.mul(a, b).iter() {
                    acc.add_scaled(&prepend_all(&table[i + 1][j + 1], c), coef);
                }
                acc
            };
            table[i][j] = cell;
        }
    }
    table.swap_remove(0).swap_remove(0)
}

pub fn qsh_product<A: LetterAlgebra>(
    alg: &A,
    u: &QShElement<A::Letter>,
    v: &QShElement<A::Letter>,
) -> QShElement<A::Letter> {
    qsh_product_with(Execution::default(), alg, u, v)
}

/// Bilinear quasi-shuffle; independent word pairs are expanded under `exec`.
pub fn qsh_product_with<A: LetterAlgebra>(
    exec: Execution,
    alg: &A,
    u: &QShElement<A::Letter>,
    v: &QShElement<A::Letter>,
) -> QShElement<A::Letter> {
    let pairs: Vec<WordPair<'_, A::Letter>> = u
        .iter()
        .flat_map(|(a, ca)| v.iter().map(move |(b, cb)| (a, b, ca * cb)))
        .collect();
    exec.map(&pairs, |(a, b, c)| qsh_words(alg, a.letters(), b.letters()).scaled(c))
        .into_iter()
        .sum()
}

/// The three half products splitting `⧢ = ≺ + ≻ + •`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfProduct {
    /// `av ≺ bw = a(v ⧢ bw)`
    Left,
    /// `av ≻ bw = b(av ⧢ w)`
    Right,
    /// `av • bw = (a·b)(v ⧢ w)`
    Dot,
}

fn half_words<A: LetterAlgebra>(
    alg: &A,
    u: &Word<A::Letter>,
    v: &Word<A::Letter>,
    which: HalfProduct,
) -> Result<QShElement<A::Letter>, QshError> {
    let (Some((a, ut)), Some((b, vt))) = (u.letters().split_first(), v.letters().split_first()) else {
        return Err(QshError::EmptyHalfProduct);
    };
    Ok(match which {
        HalfProduct::Left => prepend_all(&qsh_words(alg, ut, v.letters()), a),
        HalfProduct::Right => prepend_all(&qsh_words(alg, u.letters(), vt), b),
        HalfProduct::Dot => {
            let tail = qsh_words(alg, ut, vt);
            alg.mul(a, b).flat_map(|c| prepend_all(&tail, c))
        }
    })
}

/// Tridendriform half product; both operands must avoid the empty word.
pub fn half_product<A: LetterAlgebra>(
    alg: &A,
    u: &QShElement<A::Letter>,
    v: &QShElement<A::Letter>,
    which: HalfProduct,
) -> Result<QShElement<A::Letter>, QshError> {
    let mut out = Lin::zero();
    for (a, ca) in u.iter() {
        for (b, cb) in v.iter() {
            out.add_scaled(&half_words(alg, a, b, which)?, &(ca * cb));
        }
    }
    Ok(out)
}

pub fn counit<L: Clone + Ord>(u: &QShElement<L>) -> Rational {
    u.coeff(&Word::empty())
}

/// Deconcatenation `Δ(a₁…aₛ) = Σ_{r=0}^{s} a₁…a_r ⊗ a_{r+1}…aₛ`.
pub fn deconcat_word<L: Clone + Ord>(w: &Word<L>) -> TensorElement<L> {
    (0..=w.len())
        .map(|r| {
            let (l, rgt) = w.letters().split_at(r);
            (Tensor::pair(Word::from_slice(l), Word::from_slice(rgt)), rat_int(1))
        })
        .collect()
}

pub fn deconcat<L: Clone + Ord>(u: &QShElement<L>) -> TensorElement<L> {
    u.flat_map(deconcat_word)
}

/// Ordered factorizations of a word into `k` nonempty blocks.
pub fn factorizations<L: Clone>(w: &Word<L>, k: usize) -> Vec<Vec<Word<L>>> {
    compositions_into(w.len(), k)
        .into_iter()
        .map(|sizes| cut(w.letters(), &sizes).into_iter().map(Word::from_slice).collect())
        .collect()
}

/// Every ordered factorization into nonempty blocks.
pub fn all_factorizations<L: Clone>(w: &Word<L>) -> Vec<Vec<Word<L>>> {
    compositions(w.len())
        .into_iter()
        .map(|sizes| cut(w.letters(), &sizes).into_iter().map(Word::from_slice).collect())
        .collect()
}

/// `Δ'^{[k]}` on the counit kernel: sum over factorizations into `k`
/// nonempty blocks (zero once `k` exceeds the length).
pub fn reduced_coproduct_iter<L: Clone + Ord>(u: &QShElement<L>, k: usize) -> Result<TensorElement<L>, QshError> {
    if k < 1 {
        return Err(QshError::InvalidIterate(k));
    }
    if !counit(u).is_zero() {
        return Err(QshError::NotInCounitKernel);
    }
    Ok(u.flat_map(|w| {
        factorizations(w, k)
            .into_iter()
            .map(|blocks| (Tensor(blocks), rat_int(1)))
            .collect()
    }))
}

/// `ι(w) = Σ` over all factorizations, one block per tensor slot.
pub fn iota_word<L: Clone + Ord>(w: &Word<L>) -> TensorElement<L> {
    if w.is_empty() {
        return Lin::basis(Tensor(Vec::new()));
    }
    all_factorizations(w)
        .into_iter()
        .map(|blocks| (Tensor(blocks), rat_int(1)))
        .collect()
}

pub fn antipode_word<A: LetterAlgebra>(alg: &A, w: &Word<A::Letter>) -> QShElement<A::Letter> {
    antipode_word_with(Execution::default(), alg, w)
}

/// `S(w) = Σ_k (-1)^k Σ_{w = w¹⋯wᵏ} w¹ ⧢ … ⧢ wᵏ`.
pub fn antipode_word_with<A: LetterAlgebra>(
    exec: Execution,
    alg: &A,
    w: &Word<A::Letter>,
) -> QShElement<A::Letter> {
    if w.is_empty() {
        return Lin::basis(Word::empty());
    }
    let facts = all_factorizations(w);
    exec.map(&facts, |blocks| {
        let mut acc: QShElement<A::Letter> = Lin::basis(Word::empty());
        for b in blocks {
            acc = qsh_product_with(Execution::Sequential, alg, &acc, &Lin::basis(b.clone()));
        }
        let sign = if blocks.len() % 2 == 0 { 1 } else { -1 };
        acc.scaled(&rat_int(sign))
    })
    .into_iter()
    .sum()
}

pub fn antipode<A: LetterAlgebra>(alg: &A, u: &QShElement<A::Letter>) -> QShElement<A::Letter> {
    u.flat_map(|w| antipode_word(alg, w))
}

/// `m ∘ (S ⊗ Id) ∘ Δ`, which must equal `η(u)·1`.
pub fn antipode_axiom_lhs<A: LetterAlgebra>(alg: &A, u: &QShElement<A::Letter>) -> QShElement<A::Letter> {
    deconcat(u).flat_map(|t| {
        let [l, r] = t.slots() else { unreachable!("coproduct has degree 2") };
        qsh_product(alg, &antipode_word(alg, l), &Lin::basis(r.clone()))
    })
}

/// Componentwise quasi-shuffle on `QSh(A) ⊗ QSh(A)`.
pub fn tensor_qsh<A: LetterAlgebra>(
    alg: &A,
    x: &TensorElement<A::Letter>,
    y: &TensorElement<A::Letter>,
) -> TensorElement<A::Letter> {
    x.bilinear(y, |s, t| {
        let mut acc: Lin<Tensor<Word<A::Letter>>> = Lin::basis(Tensor(Vec::new()));
        for (a, b) in s.slots().iter().zip(t.slots()) {
            let p = qsh_words(alg, a.letters(), b.letters());
            acc = acc.bilinear(&p, |pre, w| {
                let mut v = pre.0.clone();
                v.push(w.clone());
                Lin::basis(Tensor(v))
            });
        }
        acc
    })
}
