use std::fmt;
use std::sync::Arc;

use super::{admissible_decompositions, big_to_rational, gen, index_compositions, lambda_coeff, FaaDiBruno, FdbError, FdbMonomial};
use crate::hopfmaps::{birkhoff_recursive, nested_projection, Map, MapError, MapRule};
use crate::rings::{format_rational, rat_int, Rational, Ring, RotaBaxter, Split};

/// `f(x) = x + Σ_{n=1}^{N} f_n x^{n+1}`, truncated at order `N`.
#[derive(Clone, Debug)]
pub struct Diffeo<C: Ring> {
    one: C,
    coeffs: Vec<C>,
}

impl<C: Ring> Diffeo<C> {
    pub fn identity(one: &C, order: usize) -> Self {
        Self {
            one: one.one_like(),
            coeffs: vec![one.zero_like(); order],
        }
    }

    /// From `f₁, …, f_N`.
    pub fn new(one: &C, coeffs: Vec<C>) -> Self {
        Self {
            one: one.one_like(),
            coeffs,
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn one(&self) -> &C {
        &self.one
    }

    /// `f_n`, with `f₀ = 1`.
    pub fn coeff(&self, n: usize) -> &C {
        if n == 0 {
            &self.one
        } else {
            &self.coeffs[n - 1]
        }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn agrees(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.agrees(b))
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    /// Power-series coefficients of `x^0 … x^{N+1}`.
    fn series(&self) -> Vec<C> {
        let mut s = vec![self.one.zero_like(), self.one.clone()];
        s.extend(self.coeffs.iter().cloned());
        s
    }
}

impl<C: Ring> fmt::Display for Diffeo<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            write!(f, " + ({c})*x^{}", i + 2)?;
        }
        Ok(())
    }
}

fn truncated_mul<C: Ring>(a: &[C], b: &[C], len: usize) -> Result<Vec<C>, FdbError> {
    let zero = a[0].zero_like();
    let mut out = vec![zero; len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] = out[i + j].try_add(&x.try_mul(y)?)?;
        }
    }
    Ok(out)
}

/// `f ∘ g` by substituting `g` into `f` power by power.
pub fn diffeo_compose<C: Ring>(f: &Diffeo<C>, g: &Diffeo<C>) -> Result<Diffeo<C>, FdbError> {
    if f.order() != g.order() {
        return Err(FdbError::OrderMismatch(f.order(), g.order()));
    }
    f.one.compatible(&g.one)?;
    let len = f.order() + 2;
    let fs = f.series();
    let gs = g.series();
    let mut power = gs.clone();
    let mut out = vec![f.one.zero_like(); len];
    for fk in fs.iter().skip(1) {
        for (o, p) in out.iter_mut().zip(&power) {
            *o = o.try_add(&fk.try_mul(p)?)?;
        }
        power = truncated_mul(&power, &gs, len)?;
    }
    Ok(Diffeo::new(&f.one, out[2..].to_vec()))
}

/// Integer weights `Σ (-1)^t λ(𝐧¹,…,𝐧ᵗ)` of each `𝐧 ∈ 𝒩_n` in the
/// composition-inverse formula.
pub fn inverse_coefficients(n: u32) -> Vec<(Vec<u32>, Rational)> {
    index_compositions(n)
        .into_iter()
        .map(|c| {
            let mut w = rat_int(0);
            for blocks in admissible_decompositions(&c) {
                let l = big_to_rational(lambda_coeff(&blocks).expect("admissible by construction"));
                if blocks.len() % 2 == 0 {
                    w += l;
                } else {
                    w -= l;
                }
            }
            (c.parts().to_vec(), w)
        })
        .collect()
}

/// Composition inverse `g_n = Σ_{𝐧 ∈ 𝒩_n} (Σ (-1)^t λ) f_{n₁}⋯f_{n_s}`.
pub fn diffeo_inverse<C: Ring>(f: &Diffeo<C>) -> Result<Diffeo<C>, FdbError> {
    let mut out = Vec::with_capacity(f.order());
    for n in 1..=f.order() as u32 {
        let mut acc = f.one.zero_like();
        for (parts, w) in inverse_coefficients(n) {
            if num::Zero::is_zero(&w) {
                continue;
            }
            let mut p = f.one.clone();
            for &k in &parts {
                p = p.try_mul(f.coeff(k as usize))?;
            }
            acc = acc.try_add(&p.scale(&w))?;
        }
        out.push(acc);
    }
    Ok(Diffeo::new(&f.one, out))
}

/// The character `φ(a_n) = f_n` on `ℋ_FdB`, multiplicative on monomials.
pub fn fdb_character<C: Ring>(model: &Arc<FaaDiBruno>, f: &Diffeo<C>) -> Map<FaaDiBruno, C> {
    let f = f.clone();
    MapRule::new_character(model, f.one.clone(), move |_, m: &FdbMonomial| {
        let mut acc = f.one.clone();
        for g in m.factors() {
            let n = g.0 as usize;
            if n > f.order() {
                return Err(MapError::Undefined(format!("{g} lies beyond truncation order {}", f.order())));
            }
            acc = acc.try_mul(f.coeff(n))?;
        }
        Ok(acc)
    })
}

fn require_commutative<C: Ring>(one: &C) -> Result<(), FdbError> {
    if one.is_commutative() {
        Ok(())
    } else {
        Err(MapError::Hypothesis("Faà di Bruno characters need a commutative target".into()).into())
    }
}

fn split_value<C: RotaBaxter>(f: &Diffeo<C>, n: u32, side: Split) -> Result<C, FdbError> {
    let mut acc = f.one.zero_like();
    for c in index_compositions(n) {
        for blocks in admissible_decompositions(&c) {
            let lambda = big_to_rational(lambda_coeff(&blocks)?);
            let values = blocks
                .iter()
                .map(|b| {
                    b.parts()
                        .iter()
                        .try_fold(f.one.clone(), |p, &k| p.try_mul(f.coeff(k as usize)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let t = blocks.len();
            let negative = match side {
                Split::Minus => t % 2 == 1,
                Split::Plus => t % 2 == 0,
            };
            let v = nested_projection(&values, side)?;
            let sign = if negative { rat_int(-1) } else { rat_int(1) };
            acc = acc.try_add(&v.scale(&(lambda * sign)))?;
        }
    }
    Ok(acc)
}

fn checked<C: RotaBaxter>(d: Diffeo<C>, side: Split) -> Result<Diffeo<C>, FdbError> {
    for c in d.coeffs() {
        c.determines(side)?;
    }
    Ok(d)
}

/// Birkhoff factors `(f₋, f₊)` with `f₋ ∘ f = f₊` by the closed
/// λ-weighted nested-projection formula.
pub fn diffeo_birkhoff<C: RotaBaxter>(f: &Diffeo<C>) -> Result<(Diffeo<C>, Diffeo<C>), FdbError> {
    require_commutative(&f.one)?;
    let side = |s: Split| -> Result<Diffeo<C>, FdbError> {
        let coeffs = (1..=f.order() as u32).map(|n| split_value(f, n, s)).collect::<Result<Vec<_>, _>>()?;
        checked(Diffeo::new(&f.one, coeffs), s)
    };
    Ok((side(Split::Minus)?, side(Split::Plus)?))
}

/// The same factors through Bogoliubov's recursion on the associated
/// character.
pub fn diffeo_birkhoff_recursive<C: RotaBaxter>(f: &Diffeo<C>) -> Result<(Diffeo<C>, Diffeo<C>), FdbError> {
    require_commutative(&f.one)?;
    let model = Arc::new(FaaDiBruno::new());
    let pair = birkhoff_recursive(&fdb_character(&model, f));
    let read = |m: &Map<FaaDiBruno, C>, s: Split| -> Result<Diffeo<C>, FdbError> {
        let coeffs = (1..=f.order() as u32).map(|n| m.eval(&gen(n))).collect::<Result<Vec<_>, _>>()?;
        checked(Diffeo::new(&f.one, coeffs), s)
    };
    Ok((read(&pair.minus, Split::Minus)?, read(&pair.plus, Split::Plus)?))
}

impl Diffeo<Rational> {
    /// Renders `x - x^2 + 2*x^3`.
    pub fn to_poly_string(&self) -> String {
        let mut s = String::from("x");
        for (i, c) in self.coeffs.iter().enumerate() {
            if num::Zero::is_zero(c) {
                continue;
            }
            let neg = c < &rat_int(0);
            let abs = if neg { -c.clone() } else { c.clone() };
            s.push_str(if neg { " - " } else { " + " });
            if !num::One::is_one(&abs) {
                s.push_str(&format_rational(&abs));
                s.push('*');
            }
            s.push_str(&format!("x^{}", i + 2));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::rat;

    fn d(c: &[i64]) -> Diffeo<Rational> {
        Diffeo::new(&rat_int(1), c.iter().map(|&x| rat_int(x)).collect())
    }

    #[test]
    fn composition_by_substitution() {
        let f = d(&[1, 0, 0]);
        assert!(diffeo_compose(&f, &Diffeo::identity(&rat_int(1), 3)).unwrap().agrees(&f));
        let ff = diffeo_compose(&f, &f).unwrap();
        assert_eq!(ff.coeffs(), &[rat_int(2), rat_int(2), rat_int(1)]);
        assert!(matches!(diffeo_compose(&f, &d(&[1])), Err(FdbError::OrderMismatch(3, 1))));
    }

    #[test]
    fn inverse_of_x_plus_x_squared() {
        let g = diffeo_inverse(&d(&[1, 0, 0, 0])).unwrap();
        assert_eq!(g.coeffs(), &[rat_int(-1), rat_int(2), rat_int(-5), rat_int(14)]);
        assert_eq!(g.to_poly_string(), "x - x^2 + 2*x^3 - 5*x^4 + 14*x^5");
    }

    #[test]
    fn g2_weights() {
        // g₂ = -f₂ + 2f₁²
        let mut w = inverse_coefficients(2);
        w.sort();
        assert_eq!(w, vec![(vec![1, 1], rat_int(2)), (vec![2], rat_int(-1))]);
        let f = Diffeo::new(&rat_int(1), vec![rat(1, 3), rat(5, 7)]);
        let g = diffeo_inverse(&f).unwrap();
        assert_eq!(g.coeff(2), &(rat(2, 9) - rat(5, 7)));
    }
}
