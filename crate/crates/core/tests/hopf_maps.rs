use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;

use qshalg::fdb::{fdb_character, gen, FaaDiBruno, FdbGen, FdbMonomial};
use qshalg::hopfmaps::{
    antipode_recursive, birkhoff_closed_qsh, birkhoff_closed_words, birkhoff_recursive, bogoliubov_prepare,
    convolution_inverse, convolve, iota_general, is_coassociative_at, is_multiplicative_coproduct_at, iterated_coproduct,
    iterated_coproduct_split, j_inverse_map, j_map, j_split_map, on_words, satisfies_antipode_axiom, semigroup_act,
    semigroup_compose, unit_map, word_convolve, Bialgebra, JInverseWord, JSplitWord, JWord, Map, MapRule,
    SharedWordMap, Valuation, WordBialgebra,
};
use qshalg::linear::{Lin, Tensor};
use qshalg::qsh::{
    antipode_word, iota_word, qsh_product, AlgebraElement, Monomial, MonomialAlgebra, ShuffleAlgebra,
    StructureConstants, Word,
};
use qshalg::random::{random_associative_algebra, random_laurent, random_word_map, rng, Laurent};
use qshalg::rings::{rat_int, LaurentSeries, Rational, Ring, RotaBaxter, Split};

type Words = WordBialgebra<ShuffleAlgebra<String>>;

fn one() -> Laurent {
    LaurentSeries::constant(rat_int(1))
}

fn eps(c: i64, e: i32) -> Laurent {
    LaurentSeries::monomial(rat_int(c), e, None)
}

fn words_model(letters: &[&str]) -> Arc<Words> {
    Arc::new(WordBialgebra::new(
        Arc::new(ShuffleAlgebra::new()),
        letters.iter().map(|s| s.to_string()).collect(),
    ))
}

fn w(s: &str) -> Word<String> {
    if s.is_empty() {
        Word::empty()
    } else {
        Word(s.split('.').map(str::to_string).collect())
    }
}

fn random_map(model: &Arc<Words>, seed: u64, max_len: usize) -> Map<Words, Laurent> {
    let mut r = rng(seed);
    let table = qshalg::random::random_word_values(&mut r, model.alphabet(), max_len, -3, 6);
    MapRule::from_table(model, one(), table)
}

fn basis_up_to<M: Bialgebra>(model: &M, n: usize) -> Vec<M::Basis> {
    (1..=n).flat_map(|d| model.basis_of_degree(d)).collect()
}

#[test]
fn convolution_unit_and_j_squared() {
    let model = words_model(&["a", "b"]);
    let f = random_map(&model, 1, 3);
    let e = unit_map(&model, one());
    let uf = convolve(&e, &f).unwrap();
    for b in basis_up_to(model.as_ref(), 3) {
        assert_eq!(uf.eval(&b).unwrap(), f.eval(&b).unwrap());
    }
    // j ∗ j on ab with the zero product on letters: only the split a ⊗ b survives
    let trivial = Arc::new(WordBialgebra::new(
        Arc::new(StructureConstants::trivial(&["a", "b"])),
        vec!["a".to_string(), "b".to_string()],
    ));
    let alg = trivial.algebra().clone();
    let v: Valuation<String, AlgebraElement<StructureConstants>> = {
        let alg = alg.clone();
        Arc::new(move |l: &String| AlgebraElement::letter(&alg, l.clone()))
    };
    let unit = AlgebraElement::new(&alg, rat_int(1), Lin::zero());
    let j = j_map(&trivial, v, unit);
    assert!(convolve(&j, &j).unwrap().eval(&w("a.b")).unwrap().is_zero());
}

#[test]
fn j_squared_with_free_product() {
    let alg = Arc::new(MonomialAlgebra::<String>::new());
    let x = Monomial::generator("x".to_string());
    let y = Monomial::generator("y".to_string());
    let model = Arc::new(WordBialgebra::new(alg.clone(), vec![x.clone(), y.clone()]));
    let v: Valuation<Monomial<String>, AlgebraElement<MonomialAlgebra<String>>> = {
        let alg = alg.clone();
        Arc::new(move |l: &Monomial<String>| AlgebraElement::letter(&alg, l.clone()))
    };
    let j = j_map(&model, v, AlgebraElement::new(&alg, rat_int(1), Lin::zero()));
    let jj = convolve(&j, &j).unwrap();
    let got = jj.eval(&Word(vec![x.clone(), y.clone()])).unwrap();
    assert_eq!(got, AlgebraElement::letter(&alg, x.times(&y)));
}

#[test]
fn convolution_rejects_mismatched_rings() {
    let fdb = Arc::new(FaaDiBruno::new());
    let p1 = qshalg::rings::TruncatedPoly::zero(&["x"], 3).one_like();
    let p2 = qshalg::rings::TruncatedPoly::zero(&["L"], 3).one_like();
    assert!(convolve(&unit_map(&fdb, p1), &unit_map(&fdb, p2)).is_err());
}

#[test]
fn group_axioms_on_words_and_fdb() {
    let model = words_model(&["a", "b"]);
    for seed in 0..4 {
        let f = random_map(&model, seed, 5);
        let inv = convolution_inverse(&f);
        let prod = convolve(&f, &inv).unwrap();
        let prod2 = convolve(&inv, &f).unwrap();
        assert_eq!(inv.eval(&Word::empty()).unwrap(), one());
        for b in basis_up_to(model.as_ref(), 5) {
            assert!(prod.eval(&b).unwrap().is_zero(), "f ∗ f⁻¹ at {b}");
            assert!(prod2.eval(&b).unwrap().is_zero(), "f⁻¹ ∗ f at {b}");
        }
    }
    let fdb = Arc::new(FaaDiBruno::new());
    for seed in 0..4 {
        let mut r = rng(seed);
        let table: HashMap<FdbMonomial, Rational> = basis_up_to(fdb.as_ref(), 5)
            .into_iter()
            .map(|m| (m, qshalg::random::random_rational(&mut r, 5, 3)))
            .collect();
        let f = MapRule::from_table(&fdb, rat_int(1), table);
        let prod = convolve(&f, &convolution_inverse(&f)).unwrap();
        for b in basis_up_to(fdb.as_ref(), 5) {
            assert!(prod.eval(&b).unwrap().is_zero());
        }
    }
}

#[test]
fn inverse_matches_recursive_oracle() {
    // g(h) = -f(h) - Σ g(h')f(h'') over Δ'(h)
    let model = words_model(&["a", "b"]);
    let f = random_map(&model, 9, 4);
    let inv = convolution_inverse(&f);
    let f2 = f.clone();
    let oracle = MapRule::new(&model, one(), move |g, b| {
        let mut acc = f2.eval(b)?.neg();
        for (t, c) in g.model().reduced_coproduct(b).iter() {
            acc = acc.sub(&g.eval(&t.slots()[0])?.mul(&f2.eval(&t.slots()[1])?).scale(c));
        }
        Ok(acc)
    });
    for b in basis_up_to(model.as_ref(), 4) {
        assert_eq!(inv.eval(&b).unwrap(), oracle.eval(&b).unwrap());
    }
}

#[test]
fn inverse_of_j_in_random_algebras() {
    for seed in 0..3 {
        let alg = Arc::new(random_associative_algebra(&mut rng(seed), ["p", "q", "r"]));
        let letters: Vec<String> = alg.symbols().to_vec();
        let model = Arc::new(WordBialgebra::new(alg.clone(), letters));
        let v: Valuation<String, AlgebraElement<StructureConstants>> = {
            let alg = alg.clone();
            Arc::new(move |l: &String| AlgebraElement::letter(&alg, l.clone()))
        };
        let unit = AlgebraElement::new(&alg, rat_int(1), Lin::zero());
        let j = j_map(&model, v.clone(), unit.clone());
        let inv = convolution_inverse(&j);
        let closed = j_inverse_map(&model, v, unit);
        for b in basis_up_to(model.as_ref(), 4) {
            assert_eq!(inv.eval(&b).unwrap(), closed.eval(&b).unwrap(), "word {b}");
        }
    }
}

fn laurent_letters(seed: u64, letters: &[&str]) -> Valuation<String, Laurent> {
    let mut r = rng(seed);
    let values: HashMap<String, Laurent> = letters
        .iter()
        .map(|l| (l.to_string(), random_laurent(&mut r, -3, 6, 3)))
        .collect();
    Arc::new(move |l: &String| values[l].clone())
}

#[test]
fn bogoliubov_on_j() {
    let model = words_model(&["a", "b", "c"]);
    let v = laurent_letters(4, &["a", "b", "c"]);
    let j = j_map(&model, v.clone(), one());
    let bar = bogoliubov_prepare(&j);
    let (a, b, c) = (v(&"a".into()), v(&"b".into()), v(&"c".into()));
    assert_eq!(bar.eval(&w("a")).unwrap(), a);
    assert_eq!(bar.eval(&w("a.b")).unwrap(), a.p_minus().mul(&b).neg());
    assert_eq!(bar.eval(&w("a.b.c")).unwrap(), a.p_minus().mul(&b).p_minus().mul(&c));
}

#[test]
fn closed_j_formulas() {
    let a = eps(1, -1).add(&eps(2, 0));
    let b = eps(3, -2).add(&eps(1, 1));
    assert_eq!(birkhoff_closed_qsh(std::slice::from_ref(&a), Split::Minus).unwrap(), a.p_minus().neg());
    assert_eq!(birkhoff_closed_qsh(std::slice::from_ref(&a), Split::Plus).unwrap(), a.p_plus());
    assert_eq!(
        birkhoff_closed_qsh(&[a.clone(), b.clone()], Split::Minus).unwrap(),
        a.p_minus().mul(&b).p_minus()
    );
}

#[test]
fn birkhoff_factorizes_and_lands_in_subalgebras() {
    let model = words_model(&["a", "b"]);
    let phi = random_map(&model, 3, 4);
    let pair = birkhoff_recursive(&phi);
    let lhs = convolve(&pair.minus, &phi).unwrap();
    for b in basis_up_to(model.as_ref(), 4) {
        let m = pair.minus.eval(&b).unwrap();
        let p = pair.plus.eval(&b).unwrap();
        assert_eq!(m.p_minus(), m);
        assert_eq!(p.p_plus(), p);
        assert_eq!(lhs.eval(&b).unwrap(), p);
        assert_eq!(birkhoff_closed_words(&phi, &b, Split::Minus).unwrap(), m);
        assert_eq!(birkhoff_closed_words(&phi, &b, Split::Plus).unwrap(), p);
    }
    assert_eq!(pair.minus.eval(&Word::empty()).unwrap(), one());
}

#[test]
fn trivial_decomposition_of_the_unit() {
    let model = words_model(&["a"]);
    let pair = birkhoff_recursive(&unit_map(&model, one()));
    for b in basis_up_to(model.as_ref(), 3) {
        assert!(pair.minus.eval(&b).unwrap().is_zero());
        assert!(pair.plus.eval(&b).unwrap().is_zero());
    }
}

#[test]
fn birkhoff_is_unique() {
    let model = words_model(&["a", "b"]);
    let phi = random_map(&model, 21, 3);
    let pair = birkhoff_recursive(&phi);
    for target in basis_up_to(model.as_ref(), 3) {
        let minus = pair.minus.clone();
        let t = target.clone();
        let perturbed = MapRule::from_fn(&model, one(), move |b| {
            let v = minus.eval(b)?;
            Ok(if *b == t { v.add(&eps(1, -1)) } else { v })
        });
        let prod = convolve(&perturbed, &phi).unwrap();
        let broken = basis_up_to(model.as_ref(), 3)
            .iter()
            .any(|b| !prod.eval(b).unwrap().p_minus().is_zero());
        assert!(broken, "perturbation at {target} went unnoticed");
    }
}

#[test]
fn j_split_and_closed_words_agree() {
    let model = words_model(&["a", "b"]);
    let v = laurent_letters(12, &["a", "b"]);
    let j = j_map(&model, v.clone(), one());
    let pair = birkhoff_recursive(&j);
    for side in [Split::Minus, Split::Plus] {
        let closed = j_split_map(&model, v.clone(), one(), side);
        for b in basis_up_to(model.as_ref(), 5) {
            let r = pair.side(side).eval(&b).unwrap();
            assert_eq!(closed.eval(&b).unwrap(), r);
            assert_eq!(birkhoff_closed_words(&j, &b, side).unwrap(), r);
        }
    }
}

type MonomialModel = (Arc<WordBialgebra<MonomialAlgebra<String>>>, Valuation<Monomial<String>, Laurent>);

fn monomial_model() -> MonomialModel {
    let alg = Arc::new(MonomialAlgebra::<String>::new());
    let gens: Vec<Monomial<String>> = ["x", "y"].iter().map(|g| Monomial::generator(g.to_string())).collect();
    let model = Arc::new(WordBialgebra::new(alg, gens));
    let mut r = rng(77);
    let values: HashMap<String, Laurent> =
        ["x", "y"].iter().map(|g| (g.to_string(), random_laurent(&mut r, -2, 3, 2))).collect();
    let v: Valuation<Monomial<String>, Laurent> = Arc::new(move |m: &Monomial<String>| {
        m.exponents().fold(one(), |acc, (g, e)| acc.mul(&values[g].pow(e)))
    });
    (model, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn birkhoff_factors_are_characters(u in prop::collection::vec(0..2usize, 1..=2), v in prop::collection::vec(0..2usize, 1..=2)) {
        let (model, val) = monomial_model();
        let gens = model.alphabet().to_vec();
        let word = |ix: &[usize]| Word(ix.iter().map(|&i| gens[i].clone()).collect());
        let (u, v) = (word(&u), word(&v));
        let phi = j_map(&model, val, one());
        let pair = birkhoff_recursive(&phi);
        let uv = qsh_product(model.algebra().as_ref(), &Lin::basis(u.clone()), &Lin::basis(v.clone()));
        for side in [Split::Minus, Split::Plus] {
            let m = pair.side(side);
            prop_assert_eq!(m.eval_lin(&uv).unwrap(), m.eval(&u).unwrap().mul(&m.eval(&v).unwrap()));
        }
        prop_assert_eq!(phi.eval_lin(&uv).unwrap(), phi.eval(&u).unwrap().mul(&phi.eval(&v).unwrap()));
    }
}

fn fdb_phi(seed: u64) -> (Arc<FaaDiBruno>, Map<FaaDiBruno, Laurent>) {
    let fdb = Arc::new(FaaDiBruno::new());
    let mut r = rng(seed);
    let coeffs = (0..5).map(|_| random_laurent(&mut r, -2, 3, 3)).collect();
    let f = qshalg::fdb::Diffeo::new(&one(), coeffs);
    let phi = fdb_character(&fdb, &f);
    (fdb, phi)
}

#[test]
fn semigroup_identity_and_inverse() {
    let (fdb, phi) = fdb_phi(5);
    let j: SharedWordMap<Laurent> = Arc::new(JWord);
    let jinv: SharedWordMap<Laurent> = Arc::new(JInverseWord);
    let acted = semigroup_act(&j, &phi);
    let inv = semigroup_act(&jinv, &phi);
    let geo = convolution_inverse(&phi);
    let pair = birkhoff_recursive(&phi);
    for b in basis_up_to(fdb.as_ref(), 5) {
        assert_eq!(acted.eval(&b).unwrap(), phi.eval(&b).unwrap());
        assert_eq!(inv.eval(&b).unwrap(), geo.eval(&b).unwrap());
        for side in [Split::Minus, Split::Plus] {
            let js: SharedWordMap<Laurent> = Arc::new(JSplitWord(side));
            assert_eq!(semigroup_act(&js, &phi).eval(&b).unwrap(), pair.side(side).eval(&b).unwrap());
        }
    }
}

#[test]
fn semigroup_laws() {
    let (fdb, phi) = fdb_phi(8);
    let j: SharedWordMap<Laurent> = Arc::new(JWord);
    for seed in 0..3 {
        let f = random_word_map(seed);
        let g = random_word_map(seed + 100);
        let conv_then_act = semigroup_act(&word_convolve(&f, &g), &phi);
        let act_then_conv = convolve(&semigroup_act(&f, &phi), &semigroup_act(&g, &phi)).unwrap();
        let assoc_left = semigroup_act(&semigroup_compose(&f, &g), &phi);
        let assoc_right = semigroup_act(&f, &semigroup_act(&g, &phi));
        for b in basis_up_to(fdb.as_ref(), 3) {
            assert_eq!(conv_then_act.eval(&b).unwrap(), act_then_conv.eval(&b).unwrap());
            assert_eq!(assoc_left.eval(&b).unwrap(), assoc_right.eval(&b).unwrap());
        }
        let mut r = rng(seed);
        for len in 0..=3 {
            let letters: Vec<Laurent> = (0..len).map(|_| random_laurent(&mut r, -2, 2, 2)).collect();
            let o = one();
            assert_eq!(
                semigroup_compose(&f, &j).eval_letters(&letters, &o).unwrap(),
                f.eval_letters(&letters, &o).unwrap()
            );
            assert_eq!(
                semigroup_compose(&j, &f).eval_letters(&letters, &o).unwrap(),
                f.eval_letters(&letters, &o).unwrap()
            );
        }
    }
}

#[test]
fn act_on_words_matches_compose() {
    let model = words_model(&["a", "b"]);
    let v = laurent_letters(31, &["a", "b"]);
    let f = random_word_map(1);
    let g = random_word_map(2);
    let g_on = on_words(&model, v.clone(), one(), &g);
    let left = semigroup_act(&f, &g_on);
    let right = on_words(&model, v, one(), &semigroup_compose(&f, &g));
    for b in basis_up_to(model.as_ref(), 3) {
        assert_eq!(left.eval(&b).unwrap(), right.eval(&b).unwrap());
    }
}

fn tensor_to_word(t: &Tensor<FdbMonomial>) -> Word<Monomial<FdbGen>> {
    Word(t.slots().to_vec())
}

#[test]
fn iota_is_multiplicative_on_fdb() {
    let fdb = FaaDiBruno::new();
    let alg = MonomialAlgebra::<FdbGen>::new();
    let basis = basis_up_to(&fdb, 3);
    for h in &basis {
        for k in &basis {
            if fdb.degree(h) + fdb.degree(k) > 4 {
                continue;
            }
            let hk = Lin::basis(h.times(k));
            let lhs = iota_general(&fdb, &hk).unwrap().map_basis(tensor_to_word);
            let ih = iota_general(&fdb, &Lin::basis(h.clone())).unwrap().map_basis(tensor_to_word);
            let ik = iota_general(&fdb, &Lin::basis(k.clone())).unwrap().map_basis(tensor_to_word);
            assert_eq!(lhs, qsh_product(&alg, &ih, &ik), "ι({h}·{k})");
        }
    }
}

#[test]
fn iterated_coproduct_from_reduced_iterates() {
    let fdb = FaaDiBruno::new();
    for m in basis_up_to(&fdb, 4) {
        for n in 1..=4 {
            let x = Lin::basis(m.clone());
            assert_eq!(iterated_coproduct_split(&fdb, &x, n).unwrap(), iterated_coproduct(&fdb, &x, n).unwrap());
        }
    }
    let words = words_model(&["a", "b"]);
    let ab = Lin::basis(w("a.b"));
    let expected: Lin<Tensor<Word<String>>> = [
        (Tensor::pair(w("a.b"), w("")), rat_int(1)),
        (Tensor::pair(w(""), w("a.b")), rat_int(1)),
        (Tensor::pair(w("a"), w("b")), rat_int(1)),
    ]
    .into_iter()
    .collect();
    assert_eq!(iterated_coproduct_split(words.as_ref(), &ab, 2).unwrap(), expected);
    let prim = Lin::basis(gen(1));
    let expected: Lin<Tensor<FdbMonomial>> = [
        (Tensor::pair(gen(1), gen(0)), rat_int(1)),
        (Tensor::pair(gen(0), gen(1)), rat_int(1)),
    ]
    .into_iter()
    .collect();
    assert_eq!(iterated_coproduct_split(&fdb, &prim, 2).unwrap(), expected);
    for b in basis_up_to(words.as_ref(), 4) {
        assert_eq!(iota_general(words.as_ref(), &Lin::basis(b.clone())).unwrap(), iota_word(&b));
    }
}

#[test]
fn hopf_axioms_on_both_models() {
    let fdb = FaaDiBruno::new();
    for n in 0..=6u32 {
        let a = gen(n);
        assert!(is_coassociative_at(&fdb, &a));
        assert!(satisfies_antipode_axiom(&fdb, &a, |b| antipode_recursive(&fdb, b)));
        for k in 1..=3u32 {
            assert!(is_multiplicative_coproduct_at(&fdb, &a, &gen(k)));
        }
    }
    let alg = Arc::new(random_associative_algebra(&mut rng(2), ["p", "q", "r"]));
    let words = WordBialgebra::new(alg.clone(), alg.symbols().to_vec());
    for b in basis_up_to(&words, 4) {
        assert!(is_coassociative_at(&words, &b));
        assert!(satisfies_antipode_axiom(&words, &b, |x| antipode_word(alg.as_ref(), x)));
        assert_eq!(antipode_recursive(&words, &b), antipode_word(alg.as_ref(), &b));
    }
    for a in basis_up_to(&words, 2) {
        for b in basis_up_to(&words, 2) {
            assert!(is_multiplicative_coproduct_at(&words, &a, &b));
        }
    }
}

#[test]
fn character_flags() {
    let (fdb, phi) = fdb_phi(1);
    assert!(phi.is_character());
    assert!(birkhoff_recursive(&phi).minus.is_character());
    let table = MapRule::from_table(&fdb, one(), HashMap::new());
    assert!(!table.is_character());
}
