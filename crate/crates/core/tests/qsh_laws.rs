use proptest::prelude::*;

use qshalg::linear::{Lin, Tensor};
use qshalg::qsh::{
    antipode, antipode_axiom_lhs, deconcat, half_product, qsh_product, tensor_qsh, HalfProduct, LetterAlgebra,
    QShElement, StructureConstants, Word,
};
use qshalg::random::{random_associative_algebra, rng};
use qshalg::rings::{rat_int, Rational};

const NAMES: [&str; 3] = ["p", "q", "r"];

fn algebra(seed: u64) -> StructureConstants {
    random_associative_algebra(&mut rng(seed), NAMES)
}

fn word_strategy(min: usize, max: usize) -> impl Strategy<Value = Word<String>> {
    prop::collection::vec(0..3usize, min..=max).prop_map(|v| Word(v.into_iter().map(|i| NAMES[i].to_string()).collect()))
}

fn element_strategy(min: usize, max: usize) -> impl Strategy<Value = QShElement<String>> {
    prop::collection::vec((word_strategy(min, max), -3i64..=3), 1..=2)
        .prop_map(|terms| terms.into_iter().map(|(w, c)| (w, rat_int(c))).collect())
}

fn e(w: &Word<String>) -> QShElement<String> {
    Lin::basis(w.clone())
}

fn star(alg: &StructureConstants, x: &QShElement<String>, y: &QShElement<String>) -> QShElement<String> {
    qsh_product(alg, x, y)
}

fn half(alg: &StructureConstants, x: &QShElement<String>, y: &QShElement<String>, h: HalfProduct) -> QShElement<String> {
    half_product(alg, x, y, h).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quasi_shuffle_is_associative(seed in any::<u64>(), u in word_strategy(0, 3), v in word_strategy(0, 3), w in word_strategy(0, 3)) {
        let alg = algebra(seed);
        let left = star(&alg, &star(&alg, &e(&u), &e(&v)), &e(&w));
        let right = star(&alg, &e(&u), &star(&alg, &e(&v), &e(&w)));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutative_algebras_give_commutative_products(seed in any::<u64>(), u in word_strategy(0, 3), v in word_strategy(0, 3)) {
        let alg = algebra(seed);
        prop_assume!(alg.is_commutative());
        prop_assert_eq!(star(&alg, &e(&u), &e(&v)), star(&alg, &e(&v), &e(&u)));
    }

    #[test]
    fn length_filtration(seed in any::<u64>(), u in word_strategy(0, 3), v in word_strategy(0, 3)) {
        let alg = algebra(seed);
        let (r, s) = (u.len(), v.len());
        for w in star(&alg, &e(&u), &e(&v)).keys() {
            prop_assert!(w.len() >= r.max(s) && w.len() <= r + s);
        }
    }

    #[test]
    fn coproduct_is_multiplicative(seed in any::<u64>(), u in word_strategy(0, 3), v in word_strategy(0, 3)) {
        let alg = algebra(seed);
        let lhs = deconcat(&star(&alg, &e(&u), &e(&v)));
        let rhs = tensor_qsh(&alg, &deconcat(&e(&u)), &deconcat(&e(&v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tridendriform_axioms(seed in any::<u64>(), x in element_strategy(1, 2), y in element_strategy(1, 2), z in element_strategy(1, 2)) {
        use HalfProduct::{Dot, Left, Right};
        let alg = algebra(seed);
        let h = |a: &QShElement<String>, b: &QShElement<String>, k| half(&alg, a, b, k);
        let s = |a: &QShElement<String>, b: &QShElement<String>| star(&alg, a, b);
        prop_assert_eq!(h(&x, &y, Left).plus(&h(&x, &y, Right)).plus(&h(&x, &y, Dot)), s(&x, &y));
        prop_assert_eq!(h(&h(&x, &y, Left), &z, Left), h(&x, &s(&y, &z), Left));
        prop_assert_eq!(h(&h(&x, &y, Right), &z, Left), h(&x, &h(&y, &z, Left), Right));
        prop_assert_eq!(h(&s(&x, &y), &z, Right), h(&x, &h(&y, &z, Right), Right));
        prop_assert_eq!(h(&h(&x, &y, Left), &z, Dot), h(&x, &h(&y, &z, Right), Dot));
        prop_assert_eq!(h(&h(&x, &y, Right), &z, Dot), h(&x, &h(&y, &z, Dot), Right));
        prop_assert_eq!(h(&h(&x, &y, Dot), &z, Left), h(&x, &h(&y, &z, Left), Dot));
        prop_assert_eq!(h(&h(&x, &y, Dot), &z, Dot), h(&x, &h(&y, &z, Dot), Dot));
    }

    #[test]
    fn antipode_axiom(seed in any::<u64>(), w in word_strategy(0, 4)) {
        let alg = algebra(seed);
        let expected = if w.is_empty() { e(&w) } else { Lin::zero() };
        prop_assert_eq!(antipode_axiom_lhs(&alg, &e(&w)), expected);
    }

    #[test]
    fn deconcatenation_is_coassociative(w in word_strategy(0, 5)) {
        let d = deconcat(&e(&w));
        let left: Lin<Tensor<Word<String>>> = d.flat_map(|t| deconcat(&Lin::basis(t.slots()[0].clone())).map_basis(|s| s.concat(&Tensor(vec![t.slots()[1].clone()]))));
        let right: Lin<Tensor<Word<String>>> = d.flat_map(|t| deconcat(&Lin::basis(t.slots()[1].clone())).map_basis(|s| Tensor(vec![t.slots()[0].clone()]).concat(s)));
        prop_assert_eq!(left, right);
    }
}

#[test]
fn antipode_of_two_letters_in_random_algebra() {
    let alg = algebra(5);
    let ab = Word(vec!["p".to_string(), "q".to_string()]);
    let mut expected: QShElement<String> = Lin::basis(Word(vec!["q".to_string(), "p".to_string()]));
    for (l, c) in alg.mul(&"p".to_string(), &"q".to_string()).iter() {
        expected.add_term(Word::letter(l.clone()), c.clone());
    }
    assert_eq!(antipode(&alg, &Lin::basis(ab)), expected);
    let one: Rational = rat_int(1);
    assert_eq!(antipode(&alg, &Lin::basis(Word::empty())), Lin::term(Word::empty(), one));
}
