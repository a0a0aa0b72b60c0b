//! The regularized linearization example `ẋ = (1+ε)x`, `ż = εz + b(x)z²`.

use super::Diffeo;
use crate::rings::{rat, rat_int, LaurentSeries, Rational, Ring, TruncatedPoly};

/// `a(x; ε) = -b₀/ε - Σ_{n≥1} b_n xⁿ / (n(1+ε) + ε)` with coefficients in
/// `ℚ[x]` truncated at `x_degree`, known through `ε^{eps_high}`.
pub fn regularized_a(b: &[Rational], x_degree: u32, eps_high: i32) -> LaurentSeries<TruncatedPoly> {
    let proto = TruncatedPoly::zero(&["x"], x_degree);
    let mut a = LaurentSeries::zero(&proto, Some(eps_high));
    if let Some(b0) = b.first() {
        let c = TruncatedPoly::constant(&["x"], x_degree, -b0.clone());
        a = a.add(&LaurentSeries::monomial(c, -1, None));
    }
    for (n, bn) in b.iter().enumerate().skip(1) {
        if n as u32 > x_degree || num::Zero::is_zero(bn) {
            continue;
        }
        // 1/(n + (n+1)ε) = (1/n) Σ_k (-(n+1)ε/n)^k
        let ratio = -rat(n as i64 + 1, n as i64);
        let mut power = rat_int(1);
        let monomial = TruncatedPoly::zero(&["x"], x_degree).with_term(vec![n as u32], rat_int(1));
        for k in 0..=eps_high.max(-1) {
            let c = -(bn * &power) / rat_int(n as i64);
            a = a.add(&LaurentSeries::monomial(monomial.scale(&c), k, None));
            power *= &ratio;
        }
    }
    a
}

/// `z/(1 - a z) = z + Σ aⁿ z^{n+1}` truncated at order `N`.
pub fn mobius_diffeo<C: Ring>(a: &C, order: usize) -> Diffeo<C> {
    let mut coeffs = Vec::with_capacity(order);
    let mut p = a.one_like();
    for _ in 0..order {
        p = p.mul(a);
        coeffs.push(p.clone());
    }
    Diffeo::new(&a.one_like(), coeffs)
}
