use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qshalg::hopfmaps::{birkhoff_recursive, MapRule, WordBialgebra};
use qshalg::par::Execution;
use qshalg::qsh::{antipode_word_with, qsh_product_with, words_up_to, QShElement, ShuffleAlgebra, Word};
use qshalg::random::{random_associative_algebra, random_word_values, rng};
use qshalg::rings::{rat_int, LaurentSeries};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn element(words: &[Word<String>], offset: usize) -> QShElement<String> {
    words
        .iter()
        .skip(offset)
        .step_by(3)
        .take(12)
        .enumerate()
        .map(|(i, w)| (w.clone(), rat_int(i as i64 + 1)))
        .collect()
}

fn quasi_shuffle(c: &mut Criterion) {
    let alg = random_associative_algebra(&mut rng(1), ["p", "q", "r"]);
    let letters: Vec<String> = alg.symbols().to_vec();
    let words: Vec<Word<String>> = words_up_to(&letters, 4).into_iter().filter(|w| w.len() >= 3).collect();
    let (u, v) = (element(&words, 0), element(&words, 1));
    let mut group = c.benchmark_group("qsh_product");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| qsh_product_with(exec, &alg, black_box(&u), black_box(&v)))
        });
    }
    group.finish();
}

fn antipode(c: &mut Criterion) {
    let alg = random_associative_algebra(&mut rng(2), ["p", "q", "r"]);
    let w = Word("pqrpqrp".chars().map(|c| c.to_string()).collect());
    let mut group = c.benchmark_group("antipode_len7");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| antipode_word_with(exec, &alg, black_box(&w)))
        });
    }
    group.finish();
}

fn birkhoff_batch(c: &mut Criterion) {
    let letters: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    let model = Arc::new(WordBialgebra::new(Arc::new(ShuffleAlgebra::new()), letters.clone()));
    let table = random_word_values(&mut rng(3), &letters, 5, -3, 6);
    let words: Vec<Word<String>> = words_up_to(&letters, 5).into_iter().filter(|w| w.len() == 5).collect();
    let one = LaurentSeries::constant(rat_int(1));
    let mut group = c.benchmark_group("birkhoff_len5_batch");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let phi = MapRule::from_table(&model, one.clone(), table.clone());
                let pair = birkhoff_recursive(&phi);
                pair.plus.eval_many(exec, black_box(&words))
            })
        });
    }
    group.finish();
}

criterion_group!(kernels, quasi_shuffle, antipode, birkhoff_batch);
criterion_main!(kernels);
