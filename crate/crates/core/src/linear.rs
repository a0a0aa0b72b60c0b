//! Finite rational linear combinations and tensors.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::rings::{format_rational, rat_int, Rational};

/// A finite linear combination `Σ c_k · k` with nonzero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, rat_int(1))
    }

    pub fn term(k: K, c: Rational) -> Self {
        let mut l = Self::zero();
        l.add_term(k, c);
        l
    }

    pub fn add_term(&mut self, k: K, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Lin<K>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (k, x) in &other.terms {
            self.add_term(k.clone(), x * c);
        }
    }

    pub fn add_assign(&mut self, other: &Lin<K>) {
        self.add_scaled(other, &rat_int(1));
    }

    pub fn plus(&self, other: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out.add_scaled(other, &rat_int(-1));
        out
    }

    pub fn scaled(&self, c: &Rational) -> Lin<K> {
        let mut out = Lin::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn coeff(&self, k: &K) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Relabels basis elements (coefficients of colliding labels are summed).
    pub fn map_basis<J: Ord + Clone>(&self, f: impl Fn(&K) -> J) -> Lin<J> {
        let mut out = Lin::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Linear extension of a basis map `K -> Lin<J>`.
    pub fn flat_map<J: Ord + Clone>(&self, f: impl Fn(&K) -> Lin<J>) -> Lin<J> {
        let mut out = Lin::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Bilinear extension of `f` to `self × other`.
    pub fn bilinear<J: Ord + Clone, M: Ord + Clone>(
        &self,
        other: &Lin<J>,
        f: impl Fn(&K, &J) -> Lin<M>,
    ) -> Lin<M> {
        let mut out = Lin::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_scaled(&f(a, b), &(ca * cb));
            }
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&K) -> bool) -> Lin<K> {
        Lin {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        let mut out = Lin::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + Clone> std::iter::Sum for Lin<K> {
    fn sum<I: Iterator<Item = Lin<K>>>(iter: I) -> Self {
        let mut out = Lin::zero();
        for l in iter {
            out.add_assign(&l);
        }
        out
    }
}

impl<K: Ord + fmt::Display> fmt::Display for Lin<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if abs.is_one() {
                write!(f, "{k}")?;
            } else {
                write!(f, "{}*{k}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

/// An element of a tensor power `K^{⊗n}`; the empty tensor is the scalar 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor<K>(pub Vec<K>);

impl<K: Ord> PartialOrd for Tensor<K> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<K: Ord> Ord for Tensor<K> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl<K> Tensor<K> {
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn slots(&self) -> &[K] {
        &self.0
    }
}

impl<K: Clone> Tensor<K> {
    pub fn pair(a: K, b: K) -> Self {
        Tensor(vec![a, b])
    }

    pub fn concat(&self, other: &Tensor<K>) -> Tensor<K> {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Tensor(v)
    }
}

impl<K: fmt::Display> fmt::Display for Tensor<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

/// Ordered compositions of `n` into exactly `k` positive parts.
pub fn compositions_into(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if n < k {
            return;
        }
        for first in 1..=(n - k + 1) {
            prefix.push(first);
            rec(n - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// All ordered compositions of `n` (every number of parts).
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    (1..=n).flat_map(|k| compositions_into(n, k)).collect()
}

/// Cuts `items` into consecutive blocks of the given sizes.
pub fn cut<'a, T>(items: &'a [T], sizes: &[usize]) -> Vec<&'a [T]> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &s in sizes {
        out.push(&items[start..start + s]);
        start += s;
    }
    out
}
