use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::linear::Lin;
use crate::rings::{format_rational, rat_int, Rational, Ring, RingError};

/// An associative (possibly non-unital) algebra given on a basis of letters.
pub trait LetterAlgebra: Send + Sync {
    type Letter: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync;

    /// Product of two basis letters as a linear combination of letters.
    fn mul(&self, a: &Self::Letter, b: &Self::Letter) -> Lin<Self::Letter>;

    fn is_commutative(&self) -> bool;

    /// Bilinear extension of [`LetterAlgebra::mul`].
    fn mul_lin(&self, a: &Lin<Self::Letter>, b: &Lin<Self::Letter>) -> Lin<Self::Letter> {
        a.bilinear(b, |x, y| self.mul(x, y))
    }
}

/// Checks `(ab)c = a(bc)` on every triple of the given letters.
pub fn is_associative_on<A: LetterAlgebra>(alg: &A, letters: &[A::Letter]) -> bool {
    letters.iter().all(|a| {
        letters.iter().all(|b| {
            letters.iter().all(|c| {
                let left = alg.mul_lin(&alg.mul(a, b), &Lin::basis(c.clone()));
                let right = alg.mul_lin(&Lin::basis(a.clone()), &alg.mul(b, c));
                left == right
            })
        })
    })
}

/// Checks `ab = ba` on every pair of the given letters.
pub fn is_commutative_on<A: LetterAlgebra>(alg: &A, letters: &[A::Letter]) -> bool {
    letters
        .iter()
        .all(|a| letters.iter().all(|b| alg.mul(a, b) == alg.mul(b, a)))
}

/// Finite-dimensional algebra on named symbols given by a structure-constant
/// table. Missing entries multiply to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    symbols: Vec<String>,
    table: BTreeMap<(String, String), Lin<String>>,
    commutative: bool,
}

impl StructureConstants {
    pub fn new(symbols: &[&str], table: BTreeMap<(String, String), Lin<String>>) -> Self {
        let mut alg = Self {
            symbols: symbols.iter().map(|s| s.to_string()).collect(),
            table,
            commutative: false,
        };
        let letters = alg.symbols.clone();
        alg.commutative = is_commutative_on(&alg, &letters);
        alg
    }

    /// All products vanish: the quasi-shuffle becomes the shuffle product.
    pub fn trivial(symbols: &[&str]) -> Self {
        Self::new(symbols, BTreeMap::new())
    }

    /// One letter with `x·x = x`.
    pub fn one_letter_idempotent(name: &str) -> Self {
        let mut table = BTreeMap::new();
        table.insert((name.to_string(), name.to_string()), Lin::basis(name.to_string()));
        Self::new(&[name], table)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn has_symbol(&self, s: &str) -> bool {
        self.symbols.iter().any(|x| x == s)
    }
}

impl LetterAlgebra for StructureConstants {
    type Letter = String;

    fn mul(&self, a: &String, b: &String) -> Lin<String> {
        self.table
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_default()
    }

    fn is_commutative(&self) -> bool {
        self.commutative
    }
}

/// Zero product on any letter type (shuffle algebras).
#[derive(Clone, Debug, Default)]
pub struct ShuffleAlgebra<L>(std::marker::PhantomData<L>);

impl<L> ShuffleAlgebra<L> {
    pub fn new() -> Self {
        Self(std::marker::PhantomData)
    }
}

impl<L> LetterAlgebra for ShuffleAlgebra<L>
where
    L: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync,
{
    type Letter = L;

    fn mul(&self, _a: &L, _b: &L) -> Lin<L> {
        Lin::zero()
    }

    fn is_commutative(&self) -> bool {
        true
    }
}

/// Commutative monomial `Π g^k` in generators `G`; the empty monomial is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial<G: Ord>(BTreeMap<G, u32>);

impl<G: Ord + Clone> Monomial<G> {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn generator(g: G) -> Self {
        Monomial::power(g, 1)
    }

    pub fn power(g: G, k: u32) -> Self {
        let mut m = BTreeMap::new();
        if k > 0 {
            m.insert(g, k);
        }
        Monomial(m)
    }

    pub fn from_factors(factors: impl IntoIterator<Item = G>) -> Self {
        let mut m = Monomial::one();
        for g in factors {
            *m.0.entry(g).or_insert(0) += 1;
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (g, k) in &other.0 {
            *m.entry(g.clone()).or_insert(0) += k;
        }
        Monomial(m)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&G, u32)> {
        self.0.iter().map(|(g, k)| (g, *k))
    }

    /// Total number of generator factors.
    pub fn factor_count(&self) -> u32 {
        self.0.values().sum()
    }

    /// Factors with multiplicity, in generator order.
    pub fn factors(&self) -> Vec<G> {
        self.0
            .iter()
            .flat_map(|(g, k)| std::iter::repeat_n(g.clone(), *k as usize))
            .collect()
    }
}

impl<G: Ord + fmt::Display> fmt::Display for Monomial<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, k)| if *k == 1 { g.to_string() } else { format!("{g}^{k}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Free commutative (non-unital) monomial algebra on generators `G`.
#[derive(Clone, Debug, Default)]
pub struct MonomialAlgebra<G>(std::marker::PhantomData<G>);

impl<G> MonomialAlgebra<G> {
    pub fn new() -> Self {
        Self(std::marker::PhantomData)
    }
}

impl<G> LetterAlgebra for MonomialAlgebra<G>
where
    G: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync,
{
    type Letter = Monomial<G>;

    fn mul(&self, a: &Monomial<G>, b: &Monomial<G>) -> Lin<Monomial<G>> {
        Lin::basis(a.times(b))
    }

    fn is_commutative(&self) -> bool {
        true
    }
}

/// Letter `[s;r]` of the additive semigroup `ℤ × ℚ_{>0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MzvLetter {
    pub s: i64,
    pub r: Rational,
}

impl MzvLetter {
    pub fn new(s: i64, r: Rational) -> Self {
        Self { s, r }
    }
}

impl fmt::Display for MzvLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{}]", self.s, format_rational(&self.r))
    }
}

/// `[s₁;r₁]·[s₂;r₂] = [s₁+s₂; r₁+r₂]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MzvAlgebra;

impl LetterAlgebra for MzvAlgebra {
    type Letter = MzvLetter;

    fn mul(&self, a: &MzvLetter, b: &MzvLetter) -> Lin<MzvLetter> {
        Lin::basis(MzvLetter::new(a.s + b.s, &a.r + &b.r))
    }

    fn is_commutative(&self) -> bool {
        true
    }
}

/// Element `λ·1 + a` of the unitization `k ⊕ A` of a letter algebra.
///
/// Used as the target ring of maps such as `j` that land in `A` itself.
pub struct AlgebraElement<A: LetterAlgebra> {
    alg: Arc<A>,
    scalar: Rational,
    part: Lin<A::Letter>,
}

impl<A: LetterAlgebra> Clone for AlgebraElement<A> {
    fn clone(&self) -> Self {
        Self {
            alg: self.alg.clone(),
            scalar: self.scalar.clone(),
            part: self.part.clone(),
        }
    }
}

impl<A: LetterAlgebra> AlgebraElement<A> {
    pub fn new(alg: &Arc<A>, scalar: Rational, part: Lin<A::Letter>) -> Self {
        Self {
            alg: alg.clone(),
            scalar,
            part,
        }
    }

    pub fn letter(alg: &Arc<A>, l: A::Letter) -> Self {
        Self::new(alg, rat_int(0), Lin::basis(l))
    }

    pub fn from_lin(alg: &Arc<A>, part: Lin<A::Letter>) -> Self {
        Self::new(alg, rat_int(0), part)
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn part(&self) -> &Lin<A::Letter> {
        &self.part
    }

    pub fn algebra(&self) -> &Arc<A> {
        &self.alg
    }
}

impl<A: LetterAlgebra> fmt::Debug for AlgebraElement<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({self})")
    }
}

impl<A: LetterAlgebra> PartialEq for AlgebraElement<A> {
    fn eq(&self, other: &Self) -> bool {
        self.scalar == other.scalar && self.part == other.part
    }
}

impl<A: LetterAlgebra> fmt::Display for AlgebraElement<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (num::Zero::is_zero(&self.scalar), self.part.is_zero()) {
            (true, _) => write!(f, "{}", self.part),
            (false, true) => write!(f, "{}", format_rational(&self.scalar)),
            (false, false) => write!(f, "{} + {}", format_rational(&self.scalar), self.part),
        }
    }
}

impl<A: LetterAlgebra + 'static> Ring for AlgebraElement<A> {
    fn zero_like(&self) -> Self {
        Self::new(&self.alg, rat_int(0), Lin::zero())
    }

    fn one_like(&self) -> Self {
        Self::new(&self.alg, rat_int(1), Lin::zero())
    }

    fn try_add(&self, rhs: &Self) -> Result<Self, RingError> {
        self.compatible(rhs)?;
        Ok(Self::new(&self.alg, &self.scalar + &rhs.scalar, self.part.plus(&rhs.part)))
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self, RingError> {
        self.compatible(rhs)?;
        let mut part = self.alg.mul_lin(&self.part, &rhs.part);
        part.add_scaled(&rhs.part, &self.scalar);
        part.add_scaled(&self.part, &rhs.scalar);
        Ok(Self::new(&self.alg, &self.scalar * &rhs.scalar, part))
    }

    fn neg(&self) -> Self {
        self.scale(&rat_int(-1))
    }

    fn scale(&self, c: &Rational) -> Self {
        Self::new(&self.alg, &self.scalar * c, self.part.scaled(c))
    }

    fn is_zero(&self) -> bool {
        num::Zero::is_zero(&self.scalar) && self.part.is_zero()
    }

    fn agrees(&self, other: &Self) -> bool {
        self == other
    }

    fn compatible(&self, other: &Self) -> Result<(), RingError> {
        if Arc::ptr_eq(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(RingError::Mismatch("elements of different letter algebras".into()))
        }
    }

    fn is_commutative(&self) -> bool {
        self.alg.is_commutative()
    }
}
