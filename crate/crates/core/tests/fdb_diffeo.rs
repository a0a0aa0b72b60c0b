use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use qshalg::fdb::{
    diffeo_birkhoff, diffeo_birkhoff_recursive, diffeo_compose, diffeo_inverse, fdb_character, fdb_coproduct,
    fdb_iota, fdb_reduced_coproduct, gen, mobius_diffeo, regularized_a, Diffeo, FaaDiBruno, FdbError,
};
use qshalg::hopfmaps::{convolution_inverse, convolve, iota_general, is_coassociative_at, Bialgebra, MapError};
use qshalg::linear::{Lin, Tensor};
use qshalg::qsh::{AlgebraElement, StructureConstants};
use qshalg::random::{random_diffeo, random_laurent, rng};
use qshalg::rings::{rat, rat_int, LaurentSeries, Rational, Ring, RotaBaxter, TruncatedPoly};

/// Composition inverse solved order by order from `g ∘ f = x`, using only
/// substitution.
fn inverse_by_substitution(f: &Diffeo<Rational>) -> Diffeo<Rational> {
    let n = f.order();
    let mut g = vec![rat_int(0); n];
    for k in 0..n {
        let trial = Diffeo::new(&rat_int(1), g.clone());
        let c = diffeo_compose(&trial, f).unwrap().coeff(k + 1).clone();
        g[k] = -c;
    }
    Diffeo::new(&rat_int(1), g)
}

#[test]
fn coproduct_structure() {
    let fdb = FaaDiBruno::new();
    for n in 0..=6 {
        assert!(is_coassociative_at(&fdb, &gen(n)));
        assert_eq!(fdb.coproduct(&gen(n)), fdb_coproduct(n));
        if n >= 1 {
            let mut generic = fdb_coproduct(n);
            generic.add_term(Tensor::pair(gen(n), gen(0)), rat_int(-1));
            generic.add_term(Tensor::pair(gen(0), gen(n)), rat_int(-1));
            assert_eq!(fdb_reduced_coproduct(n), generic, "Δ'(a{n})");
        }
    }
}

#[test]
fn iota_formula_matches_iteration() {
    let fdb = FaaDiBruno::new();
    for n in 1..=6 {
        assert_eq!(fdb_iota(n), iota_general(&fdb, &Lin::basis(gen(n))).unwrap(), "ι(a{n})");
    }
}

#[test]
fn signed_catalan_inverse() {
    let f = Diffeo::new(&rat_int(1), vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)]);
    let oracle = inverse_by_substitution(&f);
    assert_eq!(oracle.to_poly_string(), "x - x^2 + 2*x^3 - 5*x^4 + 14*x^5");
    assert!(diffeo_inverse(&f).unwrap().agrees(&oracle));
}

#[test]
fn composition_examples() {
    let f = Diffeo::new(&rat_int(1), vec![rat_int(1), rat_int(0), rat_int(0)]);
    assert_eq!(diffeo_compose(&f, &f).unwrap().to_poly_string(), "x + 2*x^2 + 2*x^3 + x^4");
    let id = Diffeo::identity(&rat_int(1), 3);
    assert_eq!(diffeo_inverse(&id).unwrap().to_poly_string(), "x");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn inverse_formula_matches_substitution(seed in any::<u64>()) {
        let f = random_diffeo(&mut rng(seed), 8, 6);
        let g = diffeo_inverse(&f).unwrap();
        prop_assert!(g.agrees(&inverse_by_substitution(&f)));
        prop_assert!(diffeo_compose(&f, &g).unwrap().is_identity());
        prop_assert!(diffeo_inverse(&g).unwrap().agrees(&f));
    }

    #[test]
    fn composition_is_convolution_of_characters(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_diffeo(&mut r, 6, 5);
        let g = random_diffeo(&mut r, 6, 5);
        let fg = diffeo_compose(&f, &g).unwrap();
        prop_assert_eq!(fg.coeff(2), &(f.coeff(2) + rat_int(2) * f.coeff(1) * g.coeff(1) + g.coeff(2)));
        let model = Arc::new(FaaDiBruno::new());
        let conv = convolve(&fdb_character(&model, &f), &fdb_character(&model, &g)).unwrap();
        let inv = convolution_inverse(&fdb_character(&model, &f));
        let finv = diffeo_inverse(&f).unwrap();
        for n in 1..=6 {
            prop_assert_eq!(&conv.eval(&gen(n)).unwrap(), fg.coeff(n as usize));
            prop_assert_eq!(&inv.eval(&gen(n)).unwrap(), finv.coeff(n as usize));
        }
    }

    #[test]
    fn birkhoff_of_laurent_diffeos(seed in any::<u64>()) {
        let mut r = rng(seed);
        let one = LaurentSeries::constant(rat_int(1));
        let f = Diffeo::new(&one, (0..4).map(|_| random_laurent(&mut r, -3, 4, 3)).collect());
        let (minus, plus) = diffeo_birkhoff(&f).unwrap();
        let (rminus, rplus) = diffeo_birkhoff_recursive(&f).unwrap();
        prop_assert!(minus.agrees(&rminus));
        prop_assert!(plus.agrees(&rplus));
        prop_assert!(diffeo_compose(&minus, &f).unwrap().agrees(&plus));
        for c in minus.coeffs() {
            prop_assert!(c.p_plus().is_zero());
        }
        for c in plus.coeffs() {
            prop_assert!(c.p_minus().is_zero());
        }
    }
}

#[test]
fn regular_diffeo_is_its_own_plus_part() {
    let mut r = rng(4);
    let one = LaurentSeries::constant(rat_int(1));
    let f = Diffeo::new(&one, (0..4).map(|_| random_laurent(&mut r, 0, 4, 3)).collect());
    let (minus, plus) = diffeo_birkhoff(&f).unwrap();
    assert!(minus.is_identity());
    assert!(plus.agrees(&f));
}

fn x_poly(c: Rational, deg: u32, max: u32) -> TruncatedPoly {
    TruncatedPoly::zero(&["x"], max).with_term(vec![deg], c)
}

#[test]
fn constant_b_is_purely_polar() {
    // f_n = (-b₀/ε)^n: f₊ is the identity and f₋ is the composition inverse
    let b0 = rat(3, 2);
    let a = regularized_a(std::slice::from_ref(&b0), 3, 4);
    let f = mobius_diffeo(&a, 4);
    let (minus, plus) = diffeo_birkhoff(&f).unwrap();
    assert!(plus.is_identity());
    assert!(minus.agrees(&diffeo_inverse(&f).unwrap()));
    let expected = mobius_diffeo(&LaurentSeries::monomial(x_poly(b0, 0, 3), -1, None), 4);
    assert!(minus.agrees(&expected));
}

#[test]
fn linear_b_regular_part() {
    // b = b₀ + b₁x: a₊ = -b₁x/(1+2ε), f₊ = z/(1 - a₊z), f₋ = z/(1 + a₋z)
    let (b0, b1) = (rat_int(1), rat(2, 3));
    let a = regularized_a(&[b0.clone(), b1.clone()], 3, 4);
    let a_plus = a.p_plus();
    let one_plus_2e = LaurentSeries::from_terms(&x_poly(rat_int(1), 0, 3), [(0, x_poly(rat_int(1), 0, 3)), (1, x_poly(rat_int(2), 0, 3))], None);
    let target = LaurentSeries::monomial(x_poly(-b1.clone(), 1, 3), 0, None);
    assert!(a_plus.mul(&one_plus_2e).agrees(&target));
    let f = mobius_diffeo(&a, 4);
    let (minus, plus) = diffeo_birkhoff(&f).unwrap();
    assert!(plus.agrees(&mobius_diffeo(&a_plus, 4)));
    assert!(minus.agrees(&mobius_diffeo(&a.p_minus().neg(), 4)));
    let (rminus, rplus) = diffeo_birkhoff_recursive(&f).unwrap();
    assert!(rminus.agrees(&minus) && rplus.agrees(&plus));
}

#[test]
fn window_too_small_is_reported() {
    let a = regularized_a(&[rat_int(1), rat_int(1)], 2, 0);
    let f = mobius_diffeo(&a, 4);
    let err = diffeo_birkhoff(&f).unwrap_err();
    assert!(matches!(err, FdbError::Ring(_)), "{err}");
}

#[test]
fn noncommutative_targets_are_rejected() {
    let mut table = BTreeMap::new();
    for (x, y, z) in [("e11", "e11", "e11"), ("e11", "e12", "e12"), ("e12", "e22", "e12"), ("e22", "e22", "e22")] {
        table.insert((x.to_string(), y.to_string()), Lin::basis(z.to_string()));
    }
    let alg = Arc::new(StructureConstants::new(&["e11", "e12", "e22"], table));
    let unit = AlgebraElement::new(&alg, rat_int(1), Lin::zero());
    let one = LaurentSeries::constant(unit.clone());
    let f = Diffeo::new(&one, vec![LaurentSeries::monomial(AlgebraElement::letter(&alg, "e12".into()), -1, None)]);
    let err = diffeo_birkhoff(&f).unwrap_err();
    assert!(matches!(err, FdbError::Map(MapError::Hypothesis(_))));
}
