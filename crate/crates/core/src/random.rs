//! Seeded random instances for property tests, acceptance runs and
//! benchmarks.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fdb::Diffeo;
use crate::hopfmaps::{ClosureWordMap, SharedWordMap};
use crate::linear::Lin;
use crate::qsh::{StructureConstants, Word};
use crate::rings::{rat, rat_int, LaurentSeries, Rational, Ring, RotaBaxter, Split};

pub type Laurent = LaurentSeries<Rational>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ max_abs` and `1 ≤ q ≤ max_den`.
pub fn random_rational(rng: &mut impl Rng, max_abs: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(-max_abs..=max_abs), rng.gen_range(1..=max_den))
}

/// Exact Laurent polynomial with up to `terms` monomials in `[lo, hi]`.
pub fn random_laurent(rng: &mut impl Rng, lo: i32, hi: i32, terms: usize) -> Laurent {
    let proto = rat_int(1);
    let t: Vec<(i32, Rational)> = (0..terms)
        .map(|_| (rng.gen_range(lo..=hi), random_rational(rng, 9, 3)))
        .collect();
    LaurentSeries::from_terms(&proto, t, None)
}

/// A random identity-tangent diffeomorphism with rational coefficients.
pub fn random_diffeo(rng: &mut impl Rng, order: usize, max_abs: i64) -> Diffeo<Rational> {
    let coeffs = (0..order).map(|_| random_rational(rng, max_abs, 3)).collect();
    Diffeo::new(&rat_int(1), coeffs)
}

type Matrix = [[Rational; 3]; 3];

fn invert(m: &Matrix) -> Option<Matrix> {
    let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.to_vec()).collect();
    let mut inv: Vec<Vec<Rational>> = (0..3)
        .map(|i| (0..3).map(|j| rat_int((i == j) as i64)).collect())
        .collect();
    for col in 0..3 {
        let pivot = (col..3).find(|&r| !Zero::is_zero(&a[r][col]))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..3 {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..3 {
            if r != col && !Zero::is_zero(&a[r][col]) {
                let factor = a[r][col].clone();
                for j in 0..3 {
                    let (x, y) = (&a[col][j] * &factor, &inv[col][j] * &factor);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(std::array::from_fn(|i| std::array::from_fn(|j| inv[i][j].clone())))
}

/// Structure constants `e_i e_j = Σ c_{ij}^k e_k` of three model algebras:
/// `k³`, `k[t]/t³` and upper-triangular `2×2` matrices.
fn model_algebra(kind: usize) -> [[[i64; 3]; 3]; 3] {
    let mut c = [[[0; 3]; 3]; 3];
    match kind {
        0 => {
            for (i, row) in c.iter_mut().enumerate() {
                row[i][i] = 1;
            }
        }
        1 => {
            for (i, row) in c.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    if i + j < 3 {
                        cell[i + j] = 1;
                    }
                }
            }
        }
        _ => {
            // E11, E12, E22
            c[0][0][0] = 1;
            c[0][1][1] = 1;
            c[1][2][1] = 1;
            c[2][2][2] = 1;
        }
    }
    c
}

/// A random associative algebra on three symbols: one of the model algebras
/// in a random rational basis.
pub fn random_associative_algebra(rng: &mut impl Rng, names: [&str; 3]) -> StructureConstants {
    let kind = rng.gen_range(0..3);
    let base = model_algebra(kind);
    let (p, q) = loop {
        let p: Matrix = std::array::from_fn(|_| std::array::from_fn(|_| rat_int(rng.gen_range(-2..=2))));
        if let Some(q) = invert(&p) {
            break (p, q);
        }
    };
    let mut table = BTreeMap::new();
    for a in 0..3 {
        for b in 0..3 {
            let mut prod: Lin<String> = Lin::zero();
            for i in 0..3 {
                for j in 0..3 {
                    let pij = &p[i][a] * &p[j][b];
                    if Zero::is_zero(&pij) {
                        continue;
                    }
                    for k in 0..3 {
                        if base[i][j][k] == 0 {
                            continue;
                        }
                        for (m, name) in names.iter().enumerate() {
                            prod.add_term(name.to_string(), &pij * rat_int(base[i][j][k]) * &q[m][k]);
                        }
                    }
                }
            }
            if !prod.is_zero() {
                table.insert((names[a].to_string(), names[b].to_string()), prod);
            }
        }
    }
    StructureConstants::new(&names, table)
}

/// Random Laurent values on every word of length `1..=max_len`.
pub fn random_word_values(
    rng: &mut impl Rng,
    alphabet: &[String],
    max_len: usize,
    lo: i32,
    hi: i32,
) -> HashMap<Word<String>, Laurent> {
    crate::qsh::words_up_to(alphabet, max_len)
        .into_iter()
        .map(|w| {
            let terms = rng.gen_range(1..=3);
            let v = random_laurent(rng, lo, hi, terms);
            (w, v)
        })
        .collect()
}

/// A random element of `𝒰(QSh(A), A)` for `A` the Laurent series: on words
/// of length `s` it is `Σ c · Π_i q_i(v_i)` with each `q_i` one of `Id`,
/// `p₋`, `p₊`, so it is linear in every letter.
pub fn random_word_map(seed: u64) -> SharedWordMap<Laurent> {
    Arc::new(ClosureWordMap(Arc::new(move |letters: &[Laurent], one: &Laurent| {
        let mut r = rng(seed ^ (letters.len() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut acc = one.zero_like();
        for _ in 0..r.gen_range(1..=2) {
            let mut term = random_laurent(&mut r, -1, 1, 2);
            for v in letters {
                let factor = match r.gen_range(0..3) {
                    0 => v.clone(),
                    1 => v.project(Split::Minus),
                    _ => v.project(Split::Plus),
                };
                term = term.try_mul(&factor)?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsh::{is_associative_on, LetterAlgebra};

    #[test]
    fn random_algebras_are_associative() {
        let mut r = rng(7);
        let letters: Vec<String> = ["p", "q", "r"].iter().map(|s| s.to_string()).collect();
        for _ in 0..20 {
            let alg = random_associative_algebra(&mut r, ["p", "q", "r"]);
            assert!(is_associative_on(&alg, &letters));
        }
    }

    #[test]
    fn noncommutative_instances_occur() {
        let mut r = rng(11);
        let found = (0..40).any(|_| !random_associative_algebra(&mut r, ["p", "q", "r"]).is_commutative());
        assert!(found);
    }

    #[test]
    fn word_maps_are_deterministic() {
        let f = random_word_map(3);
        let one = Laurent::constant(rat_int(1));
        let v = vec![random_laurent(&mut rng(1), -2, 2, 3); 2];
        assert_eq!(f.eval_letters(&v, &one).unwrap(), f.eval_letters(&v, &one).unwrap());
    }
}
