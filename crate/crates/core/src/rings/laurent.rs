use std::collections::BTreeMap;
use std::fmt;

use super::rational::rat_int;
use super::{Rational, Ring, RingError, RotaBaxter, Split};

/// Laurent series in ε with a validity window.
///
/// Coefficients of exponents above `high` are unknown; `high == None` marks
/// an exact (finite) Laurent polynomial. Stored coefficients are never zero.
#[derive(Clone, Debug)]
pub struct LaurentSeries<C: Ring> {
    proto: C,
    coeffs: BTreeMap<i32, C>,
    high: Option<i32>,
}

impl<C: Ring> LaurentSeries<C> {
    /// Zero known up to `high` (exact when `None`). `proto` is any element of
    /// the coefficient ring.
    pub fn zero(proto: &C, high: Option<i32>) -> Self {
        Self {
            proto: proto.zero_like(),
            coeffs: BTreeMap::new(),
            high,
        }
    }

    pub fn monomial(c: C, exp: i32, high: Option<i32>) -> Self {
        Self::from_terms(&c.clone(), [(exp, c)], high)
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, None)
    }

    pub fn from_terms(proto: &C, terms: impl IntoIterator<Item = (i32, C)>, high: Option<i32>) -> Self {
        let mut s = Self::zero(proto, high);
        for (e, c) in terms {
            s.add_term(e, &c);
        }
        s
    }

    fn add_term(&mut self, e: i32, c: &C) {
        if self.high.is_some_and(|h| e > h) {
            return;
        }
        let next = match self.coeffs.remove(&e) {
            Some(cur) => cur.add(c),
            None => c.clone(),
        };
        if !next.is_zero() {
            self.coeffs.insert(e, next);
        }
    }

    pub fn high(&self) -> Option<i32> {
        self.high
    }

    /// Smallest stored exponent.
    pub fn low(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_exact(&self) -> bool {
        self.high.is_none()
    }

    pub fn proto(&self) -> &C {
        &self.proto
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Coefficient of ε^exp; errors outside the validity window.
    pub fn coeff(&self, exp: i32) -> Result<C, RingError> {
        self.require_known_through(exp)?;
        Ok(self.coeffs.get(&exp).cloned().unwrap_or_else(|| self.proto.zero_like()))
    }

    pub fn require_known_through(&self, exp: i32) -> Result<(), RingError> {
        match self.high {
            Some(h) if exp > h => Err(RingError::OutOfWindow {
                requested: exp as i64,
                high: h as i64,
            }),
            _ => Ok(()),
        }
    }

    /// Lower bound for the ε-adic valuation; `None` is +∞ (exact zero).
    fn valuation_bound(&self) -> Option<i64> {
        match (self.low(), self.high) {
            (Some(l), _) => Some(l as i64),
            (None, Some(h)) => Some(h as i64 + 1),
            (None, None) => None,
        }
    }

    /// Multiplies by ε^k.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            proto: self.proto.clone(),
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            high: self.high.map(|h| h + k),
        }
    }

    pub fn with_high(&self, high: i32) -> Self {
        let high = self.high.map_or(high, |h| h.min(high));
        Self::from_terms(&self.proto, self.coeffs.iter().map(|(e, c)| (*e, c.clone())), Some(high))
    }

    pub fn map_coeffs<D: Ring>(&self, proto: &D, f: impl Fn(&C) -> D) -> LaurentSeries<D> {
        LaurentSeries::from_terms(proto, self.coeffs.iter().map(|(e, c)| (*e, f(c))), self.high)
    }

    /// Keeps the exponents on one side of the minimal-subtraction split.
    pub fn split_part(&self, side: Split) -> Self {
        let keep = |e: i32| match side {
            Split::Minus => e < 0,
            Split::Plus => e >= 0,
        };
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(e, _)| keep(**e))
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        // The pole part is complete as soon as every negative exponent is known.
        let high = match (side, self.high) {
            (Split::Minus, Some(h)) if h >= -1 => None,
            (_, h) => h,
        };
        Self {
            proto: self.proto.clone(),
            coeffs,
            high,
        }
    }
}

impl<C: Ring> Ring for LaurentSeries<C> {
    fn zero_like(&self) -> Self {
        Self::zero(&self.proto, None)
    }

    fn one_like(&self) -> Self {
        Self::constant(self.proto.one_like())
    }

    fn try_add(&self, rhs: &Self) -> Result<Self, RingError> {
        self.compatible(rhs)?;
        let high = match (self.high, rhs.high) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut out = Self::zero(&self.proto, high);
        for (e, c) in self.coeffs.iter().chain(&rhs.coeffs) {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self, RingError> {
        self.compatible(rhs)?;
        let bound = |h: Option<i32>, v: Option<i64>| match (h, v) {
            (Some(h), Some(v)) => Some(h as i64 + v),
            _ => None,
        };
        let high = match (
            bound(self.high, rhs.valuation_bound()),
            bound(rhs.high, self.valuation_bound()),
        ) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
        .map(|h| h.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
        let mut out = Self::zero(&self.proto, high);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                let e = ea + eb;
                if high.is_some_and(|h| e > h) {
                    continue;
                }
                out.add_term(e, &ca.try_mul(cb)?);
            }
        }
        Ok(out)
    }

    fn neg(&self) -> Self {
        Self {
            proto: self.proto.clone(),
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect(),
            high: self.high,
        }
    }

    fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(&self.proto, self.coeffs.iter().map(|(e, x)| (*e, x.scale(c))), self.high)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn agrees(&self, other: &Self) -> bool {
        let high = match (self.high, other.high) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let exps: std::collections::BTreeSet<i32> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .filter(|e| high.is_none_or(|h| *e <= h))
            .collect();
        exps.into_iter().all(|e| match (self.coeffs.get(&e), other.coeffs.get(&e)) {
            (Some(a), Some(b)) => a.agrees(b),
            (Some(a), None) | (None, Some(a)) => a.agrees(&a.zero_like()),
            (None, None) => true,
        })
    }

    fn compatible(&self, other: &Self) -> Result<(), RingError> {
        self.proto.compatible(&other.proto)
    }

    fn is_commutative(&self) -> bool {
        self.proto.is_commutative()
    }
}

impl<C: Ring> RotaBaxter for LaurentSeries<C> {
    fn project(&self, side: Split) -> Self {
        self.split_part(side)
    }

    fn determines(&self, side: Split) -> Result<(), RingError> {
        match side {
            Split::Minus => self.require_known_through(-1),
            Split::Plus => self.require_known_through(0),
        }
    }
}

impl<C: Ring> PartialEq for LaurentSeries<C> {
    /// Structural equality: same window and same coefficients.
    fn eq(&self, other: &Self) -> bool {
        self.high == other.high && self.agrees(other)
    }
}

fn needs_parens(s: &str) -> bool {
    s.get(1..).is_some_and(|rest| rest.contains(" + ") || rest.contains(" - "))
}

impl<C: Ring> fmt::Display for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in &self.coeffs {
            let cs = c.to_string();
            let term = if *e == 0 {
                if needs_parens(&cs) {
                    format!("({cs})")
                } else {
                    cs
                }
            } else {
                let mono = if *e == 1 { "e".to_string() } else { format!("e^{e}") };
                match cs.as_str() {
                    "1" => mono,
                    "-1" => format!("-{mono}"),
                    _ if needs_parens(&cs) => format!("({cs})*{mono}"),
                    _ => format!("{cs}*{mono}"),
                }
            };
            parts.push(term);
        }
        if let Some(h) = self.high {
            parts.push(format!("O(e^{})", h + 1));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (i, p) in parts.iter().enumerate() {
            match (i, p.strip_prefix('-')) {
                (0, _) => write!(f, "{p}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {p}")?,
            }
        }
        Ok(())
    }
}

/// `exp(c·ε^e)` truncated at exponent `high`.
pub fn laurent_exp<C: Ring>(c: &C, e: i32, high: i32) -> Result<LaurentSeries<C>, RingError> {
    if e < 0 {
        return Err(RingError::EssentialSingularity);
    }
    let mut out = LaurentSeries::zero(c, Some(high));
    let mut power = c.one_like();
    let mut factorial = rat_int(1);
    let mut k: i32 = 0;
    loop {
        if e > 0 && e * k > high {
            break;
        }
        if power.is_zero() {
            break;
        }
        if e == 0 && k > 256 {
            return Err(RingError::NonTerminating);
        }
        out.add_term(e * k, &power.scale(&(rat_int(1) / &factorial)));
        k += 1;
        power = power.mul(c);
        factorial *= rat_int(k as i64);
    }
    Ok(out)
}

/// Checks the weight -1 Rota-Baxter identity for the pole projection on
/// the pair `(x, y)`.
pub fn rb_identity_check<C: Ring>(x: &LaurentSeries<C>, y: &LaurentSeries<C>) -> bool {
    let pm = |s: &LaurentSeries<C>| s.split_part(Split::Minus);
    let lhs = pm(x).mul(&pm(y));
    let rhs = pm(&x.mul(&pm(y))).add(&pm(&pm(x).mul(y))).sub(&pm(&x.mul(y)));
    lhs.agrees(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{rat, TruncatedPoly};

    fn series(terms: &[(i32, i64)], high: Option<i32>) -> LaurentSeries<Rational> {
        LaurentSeries::from_terms(&rat_int(0), terms.iter().map(|(e, c)| (*e, rat_int(*c))), high)
    }

    #[test]
    fn difference_of_squares() {
        let a = series(&[(-1, 1), (0, 1)], Some(2));
        let b = series(&[(-1, 1), (0, -1)], Some(2));
        let p = a.mul(&b);
        assert!(p.agrees(&series(&[(-2, 1), (0, -1)], None)));
        assert_eq!(p.high(), Some(1));
    }

    #[test]
    fn projections_split_the_window() {
        let s = series(&[(-2, 3), (0, 1), (1, 1)], Some(4));
        let m = s.project(Split::Minus);
        let p = s.project(Split::Plus);
        assert_eq!(m, series(&[(-2, 3)], None));
        assert_eq!(p, series(&[(0, 1), (1, 1)], Some(4)));
        assert_eq!(m.add(&p), s);
        let zero = series(&[], None);
        assert!(zero.project(Split::Minus).is_zero());
    }

    #[test]
    fn exp_of_linear_term() {
        let l = TruncatedPoly::var(&["L"], 4, 0);
        let s = laurent_exp(&l.neg(), 1, 2).unwrap();
        let expected = LaurentSeries::from_terms(
            &l,
            [
                (0, l.one_like()),
                (1, l.neg()),
                (2, l.mul(&l).scale(&rat(1, 2))),
            ],
            Some(2),
        );
        assert_eq!(s, expected);
        assert!(laurent_exp(&rat_int(0), 0, 3).unwrap().agrees(&series(&[(0, 1)], None)));
        assert_eq!(laurent_exp(&rat_int(1), -1, 3).unwrap_err(), RingError::EssentialSingularity);
        assert_eq!(laurent_exp(&rat_int(2), 0, 3).unwrap_err(), RingError::NonTerminating);
    }

    #[test]
    fn one_over_eps_times_exp_has_simple_pole_part() {
        let l = TruncatedPoly::var(&["L"], 6, 0);
        let f1 = laurent_exp(&l.neg(), 1, 4).unwrap().shift(-1);
        let pole = f1.project(Split::Minus);
        assert_eq!(pole, LaurentSeries::monomial(l.one_like(), -1, None));
    }

    #[test]
    fn rb_identity_examples() {
        assert!(rb_identity_check(&series(&[(-1, 1)], None), &series(&[(1, 1)], None)));
        let z = series(&[(-1, 1), (0, 1)], None);
        assert!(rb_identity_check(&z, &z));
    }

    #[test]
    fn coefficient_outside_window_errors() {
        let s = series(&[(0, 1)], Some(2));
        assert!(s.coeff(2).is_ok());
        assert!(matches!(s.coeff(3), Err(RingError::OutOfWindow { .. })));
    }

    #[test]
    fn rendering_is_ascending() {
        let s = series(&[(1, 1), (-2, 3), (0, 1)], None);
        assert_eq!(s.to_string(), "3*e^-2 + 1 + e");
        let t = series(&[(-1, -1)], Some(2));
        assert_eq!(t.to_string(), "-e^-1 + O(e^3)");
    }
}
