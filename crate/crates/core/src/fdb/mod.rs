//! The Faà di Bruno Hopf algebra `ℋ_FdB = k[a₁, a₂, …]` and formal
//! identity-tangent diffeomorphisms `f(x) = x + Σ f_n x^{n+1}`.

mod diffeo;
mod dynamics;

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num::BigUint;
use thiserror::Error;

use crate::hopfmaps::{Bialgebra, MapError};
use crate::linear::{compositions, compositions_into, Lin, Tensor};
use crate::qsh::Monomial;
use crate::rings::{rat_int, Rational, RingError};

pub use diffeo::{
    diffeo_birkhoff, diffeo_birkhoff_recursive, diffeo_compose, diffeo_inverse, fdb_character, inverse_coefficients,
    Diffeo,
};
pub use dynamics::{mobius_diffeo, regularized_a};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FdbError {
    #[error("inadmissible decomposition: {0}")]
    Inadmissible(String),
    #[error("diffeomorphisms of different orders {0} and {1}")]
    OrderMismatch(usize, usize),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// The coordinate `a_n`, reading off the coefficient of `x^{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FdbGen(pub u32);

impl fmt::Display for FdbGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

pub type FdbMonomial = Monomial<FdbGen>;

/// `a_n` as a monomial, with `a₀ = 1`.
pub fn gen(n: u32) -> FdbMonomial {
    if n == 0 {
        Monomial::one()
    } else {
        Monomial::generator(FdbGen(n))
    }
}

/// Grading `gr(a_n) = n`, extended additively.
pub fn monomial_degree(m: &FdbMonomial) -> usize {
    m.exponents().map(|(g, e)| g.0 as usize * e as usize).sum()
}

/// A sequence `𝐧 = (n₁, …, n_s)` of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexComposition(Vec<u32>);

impl IndexComposition {
    pub fn new(parts: Vec<u32>) -> Result<Self, FdbError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(FdbError::Inadmissible(format!("{parts:?} is not a sequence of positive integers")));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `‖𝐧‖ = n₁ + … + n_s`.
    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `ℓ(𝐧) = s`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a_𝐧 = a_{n₁}⋯a_{n_s}`.
    pub fn monomial(&self) -> FdbMonomial {
        Monomial::from_factors(self.0.iter().map(|&n| FdbGen(n)))
    }
}

impl fmt::Display for IndexComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `𝒩_n`: all sequences of positive integers summing to `n`.
pub fn index_compositions(n: u32) -> Vec<IndexComposition> {
    compositions(n as usize)
        .into_iter()
        .map(|c| IndexComposition(c.into_iter().map(|p| p as u32).collect()))
        .collect()
}

/// Splittings `𝐧 = 𝐧¹⋯𝐧ᵗ` into consecutive nonempty blocks with `ℓ(𝐧¹) = 1`.
pub fn admissible_decompositions(n: &IndexComposition) -> Vec<Vec<IndexComposition>> {
    let (first, rest) = n.0.split_first().expect("nonempty composition");
    let head = IndexComposition(vec![*first]);
    if rest.is_empty() {
        return vec![vec![head]];
    }
    compositions(rest.len())
        .into_iter()
        .map(|sizes| {
            let mut blocks = vec![head.clone()];
            let mut start = 0;
            for s in sizes {
                blocks.push(IndexComposition(rest[start..start + s].to_vec()));
                start += s;
            }
            blocks
        })
        .collect()
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    num::integer::binomial(BigUint::from(n), BigUint::from(k))
}

fn big_to_rational(b: BigUint) -> Rational {
    Rational::from_integer(b.into())
}

/// `λ(𝐧¹, …, 𝐧ᵗ) = Π_{i=2}^{t} binom(‖𝐧¹⋯𝐧^{i-1}‖ + 1, ℓ(𝐧ⁱ))`.
pub fn lambda_coeff(blocks: &[IndexComposition]) -> Result<BigUint, FdbError> {
    let Some(first) = blocks.first() else {
        return Err(FdbError::Inadmissible("empty decomposition".into()));
    };
    if first.len() != 1 {
        return Err(FdbError::Inadmissible(format!("first block {first} must have length 1")));
    }
    let mut prefix = first.norm() as u64;
    let mut acc = BigUint::from(1u32);
    for b in &blocks[1..] {
        if b.is_empty() {
            return Err(FdbError::Inadmissible("empty block".into()));
        }
        acc *= binomial(prefix + 1, b.len() as u64);
        prefix += b.norm() as u64;
    }
    Ok(acc)
}

fn tensor_monomial_product(x: &Lin<Tensor<FdbMonomial>>, y: &Lin<Tensor<FdbMonomial>>) -> Lin<Tensor<FdbMonomial>> {
    x.bilinear(y, |s, t| {
        Lin::basis(Tensor(s.slots().iter().zip(t.slots()).map(|(a, b)| a.times(b)).collect()))
    })
}

/// `Δ(a_n) = Σ_{k=0}^{n} Σ_{l₀+…+l_k = n-k} a_k ⊗ a_{l₀}⋯a_{l_k}`.
pub fn fdb_coproduct(n: u32) -> Lin<Tensor<FdbMonomial>> {
    let mut out = Lin::zero();
    for k in 0..=n {
        // weak compositions of n - k into k + 1 parts
        for parts in compositions_into((n + 1) as usize, (k + 1) as usize) {
            let right = Monomial::from_factors(parts.iter().filter(|&&p| p > 1).map(|&p| FdbGen(p as u32 - 1)));
            out.add_term(Tensor::pair(gen(k), right), rat_int(1));
        }
    }
    out
}

/// `Δ'(a_n) = Σ_{k=1}^{n-1} Σ_{𝐧 ∈ 𝒩_{n-k}} binom(k+1, ℓ(𝐧)) a_k ⊗ a_𝐧`.
pub fn fdb_reduced_coproduct(n: u32) -> Lin<Tensor<FdbMonomial>> {
    let mut out = Lin::zero();
    for k in 1..n {
        for c in index_compositions(n - k) {
            let b = binomial(k as u64 + 1, c.len() as u64);
            out.add_term(Tensor::pair(gen(k), c.monomial()), big_to_rational(b));
        }
    }
    out
}

/// `ι(a_n) = Σ_{𝐧 ∈ 𝒩_n} Σ λ(𝐧¹,…,𝐧ᵗ) a_{𝐧¹} ⊗ … ⊗ a_{𝐧ᵗ}` over admissible
/// decompositions.
pub fn fdb_iota(n: u32) -> Lin<Tensor<FdbMonomial>> {
    let mut out = Lin::zero();
    for c in index_compositions(n) {
        for blocks in admissible_decompositions(&c) {
            let lambda = lambda_coeff(&blocks).expect("admissible by construction");
            out.add_term(
                Tensor(blocks.iter().map(IndexComposition::monomial).collect()),
                big_to_rational(lambda),
            );
        }
    }
    out
}

/// The Faà di Bruno bialgebra on monomials in the `a_n`.
#[derive(Default)]
pub struct FaaDiBruno {
    generator_coproducts: RwLock<HashMap<u32, Lin<Tensor<FdbMonomial>>>>,
}

impl FaaDiBruno {
    pub fn new() -> Self {
        Self::default()
    }

    fn generator_coproduct(&self, n: u32) -> Lin<Tensor<FdbMonomial>> {
        if let Some(d) = self.generator_coproducts.read().expect("cache lock").get(&n) {
            return d.clone();
        }
        let d = fdb_coproduct(n);
        self.generator_coproducts.write().expect("cache lock").insert(n, d.clone());
        d
    }
}

impl Bialgebra for FaaDiBruno {
    type Basis = FdbMonomial;

    fn unit(&self) -> FdbMonomial {
        Monomial::one()
    }

    fn is_unit(&self, b: &FdbMonomial) -> bool {
        b.is_one()
    }

    fn degree(&self, b: &FdbMonomial) -> usize {
        monomial_degree(b)
    }

    fn product(&self, a: &FdbMonomial, b: &FdbMonomial) -> Lin<FdbMonomial> {
        Lin::basis(a.times(b))
    }

    fn coproduct(&self, b: &FdbMonomial) -> Lin<Tensor<FdbMonomial>> {
        let mut acc = Lin::basis(Tensor::pair(Monomial::one(), Monomial::one()));
        for g in b.factors() {
            acc = tensor_monomial_product(&acc, &self.generator_coproduct(g.0));
        }
        acc
    }

    fn basis_of_degree(&self, n: usize) -> Vec<FdbMonomial> {
        fn partitions(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if n == 0 {
                out.push(cur.clone());
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                partitions(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut parts = Vec::new();
        partitions(n as u32, n as u32, &mut Vec::new(), &mut parts);
        let mut out: Vec<FdbMonomial> = parts
            .into_iter()
            .map(|p| Monomial::from_factors(p.into_iter().map(FdbGen)))
            .collect();
        out.sort();
        out
    }
}
