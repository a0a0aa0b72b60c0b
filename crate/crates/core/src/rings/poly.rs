use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::rational::{format_rational, is_negative, rat_int};
use super::{Rational, Ring, RingError};

/// Multivariate polynomial truncated at total degree `max_degree`.
///
/// Terms beyond the bound are dropped by every operation; the bound is the
/// precision of the element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPoly {
    vars: Arc<[String]>,
    max_degree: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn degree(exps: &[u32]) -> u32 {
    exps.iter().sum()
}

impl TruncatedPoly {
    pub fn zero(vars: &[&str], max_degree: u32) -> Self {
        Self {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], max_degree: u32, c: Rational) -> Self {
        let mut p = Self::zero(vars, max_degree);
        let exps = vec![0; p.vars.len()];
        p.insert(exps, c);
        p
    }

    /// The `index`-th variable.
    pub fn var(vars: &[&str], max_degree: u32, index: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[index] = 1;
        Self::zero(vars, max_degree).with_term(exps, rat_int(1))
    }

    pub fn with_term(mut self, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), self.vars.len(), "exponent vector length");
        let cur = self.terms.remove(&exps).unwrap_or_else(|| rat_int(0));
        self.insert(exps, cur + c);
        self
    }

    fn insert(&mut self, exps: Vec<u32>, c: Rational) {
        if degree(&exps) <= self.max_degree && !num::Zero::is_zero(&c) {
            self.terms.insert(exps, c);
        }
    }

    fn same_shape(&self, other: &Self) -> Result<(), RingError> {
        if self.vars != other.vars {
            return Err(RingError::Mismatch(format!(
                "polynomial variables {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(|| rat_int(0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no term involves variable `index`.
    pub fn is_free_of(&self, index: usize) -> bool {
        self.terms.keys().all(|e| e[index] == 0)
    }

    /// Constant term, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(rat_int(0)),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                (degree(e) == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        let max_degree = max_degree.min(self.max_degree);
        Self {
            vars: self.vars.clone(),
            max_degree,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree(e) <= max_degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    fn ordered_terms(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| degree(a.0).cmp(&degree(b.0)).then(b.0.cmp(a.0)));
        v
    }
}

impl Ring for TruncatedPoly {
    fn zero_like(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            max_degree: self.max_degree,
            terms: BTreeMap::new(),
        }
    }

    fn one_like(&self) -> Self {
        let mut p = self.zero_like();
        p.insert(vec![0; self.vars.len()], rat_int(1));
        p
    }

    fn try_add(&self, rhs: &Self) -> Result<Self, RingError> {
        self.same_shape(rhs)?;
        let mut out = self.truncate(rhs.max_degree);
        for (e, c) in &rhs.terms {
            let cur = out.terms.remove(e).unwrap_or_else(|| rat_int(0));
            out.insert(e.clone(), cur + c);
        }
        Ok(out)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self, RingError> {
        self.same_shape(rhs)?;
        let max_degree = self.max_degree.min(rhs.max_degree);
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = degree(ea);
            for (eb, cb) in &rhs.terms {
                if da + degree(eb) > max_degree {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(|| rat_int(0)) += ca * cb;
            }
        }
        acc.retain(|_, c| !num::Zero::is_zero(c));
        Ok(Self {
            vars: self.vars.clone(),
            max_degree,
            terms: acc,
        })
    }

    fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            max_degree: self.max_degree,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    fn scale(&self, c: &Rational) -> Self {
        if num::Zero::is_zero(c) {
            return self.zero_like();
        }
        Self {
            vars: self.vars.clone(),
            max_degree: self.max_degree,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn agrees(&self, other: &Self) -> bool {
        if self.vars != other.vars {
            return false;
        }
        let m = self.max_degree.min(other.max_degree);
        self.truncate(m).terms == other.truncate(m).terms
    }

    fn compatible(&self, other: &Self) -> Result<(), RingError> {
        self.same_shape(other)
    }
}

impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, c)) in self.ordered_terms().into_iter().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(exps)
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let one = num::One::is_one(&abs);
            match (mono.is_empty(), one) {
                (true, _) => write!(f, "{}", format_rational(&abs))?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{}*{}", format_rational(&abs), mono.join("*"))?,
            }
        }
        Ok(())
    }
}
