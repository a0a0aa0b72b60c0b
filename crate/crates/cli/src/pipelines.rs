//! Typed pipelines behind the subcommands. Every Birkhoff computation is
//! carried out by Bogoliubov's recursion and by the closed formula, and the
//! two are compared before anything is emitted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::Zero;
use qshalg::fdb::{
    diffeo_birkhoff, diffeo_birkhoff_recursive, diffeo_compose, diffeo_inverse, fdb_character, gen, mobius_diffeo,
    regularized_a, Diffeo, FaaDiBruno,
};
use qshalg::hopfmaps::{
    antipode_recursive, birkhoff_closed_qsh, birkhoff_closed_words, birkhoff_recursive, convolution_inverse, convolve,
    j_inverse_map, j_map, nested_projection, Map, MapRule, Valuation, WordBialgebra,
};
use qshalg::linear::Lin;
use qshalg::qsh::{
    all_factorizations, antipode_word, qsh_words, AlgebraElement, LetterAlgebra, Monomial, MonomialAlgebra,
    MzvAlgebra, MzvLetter, ShuffleAlgebra, Word,
};
use qshalg::random::{random_laurent, rng, Laurent};
use qshalg::rings::{
    format_rational, laurent_exp, rat, rat_int, LaurentSeries, Rational, Ring, RotaBaxter, Split, TruncatedPoly,
};
use serde_json::{json, Value};

use crate::doc::{diffeo_json, rational_json, series_json, words_json, ResultDocument};
use crate::error::CliError;
use crate::parse::{series_vars, DiffeoLiteral, Symbolic, WordLiteral};

type Result<T> = std::result::Result<T, CliError>;

/// Which Birkhoff algorithm the document reports; both always run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Algorithm {
    Recursive,
    Closed,
    #[default]
    Both,
}

impl Algorithm {
    fn label(self) -> &'static str {
        match self {
            Algorithm::Recursive => "recursive",
            Algorithm::Closed => "closed",
            Algorithm::Both => "closed = recursive",
        }
    }
}

/// Range `[low, high]` of ε-exponents: no term below `low` is accepted and
/// generated series are known through `ε^high`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpsWindow {
    pub low: i32,
    pub high: i32,
}

impl Default for EpsWindow {
    fn default() -> Self {
        Self { low: -qshalg::rings::DEFAULT_EPS_HIGH, high: qshalg::rings::DEFAULT_EPS_HIGH }
    }
}

impl FromStr for EpsWindow {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, found `{s}`"))?;
        let low: i32 = lo.trim().parse().map_err(|_| format!("malformed window start `{lo}`"))?;
        let high: i32 = hi.trim().parse().map_err(|_| format!("malformed window end `{hi}`"))?;
        if low > high {
            return Err(format!("empty window {low}:{high}"));
        }
        Ok(Self { low, high })
    }
}

impl fmt::Display for EpsWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.low, self.high)
    }
}

/// Product used on symbolic letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum AlgebraChoice {
    /// Letters multiply as commuting monomials, `a·b = a*b`.
    #[default]
    Monomial,
    /// Zero product: the quasi-shuffle is the shuffle.
    Shuffle,
}

impl AlgebraChoice {
    fn name(self) -> &'static str {
        match self {
            AlgebraChoice::Monomial => "monomial",
            AlgebraChoice::Shuffle => "shuffle",
        }
    }
}

fn window_low<C: Ring>(name: &str, s: &LaurentSeries<C>, w: EpsWindow) -> Result<()> {
    match s.low() {
        Some(l) if l < w.low => Err(CliError::window(format!(
            "{name} has a term in e^{l}, below the window start e^{}",
            w.low
        ))),
        _ => Ok(()),
    }
}

fn determined<C: RotaBaxter>(name: &str, s: &C, side: Split) -> Result<()> {
    s.determines(side)
        .map_err(|_| CliError::window(format!("the ε-window is too small to determine the {} part of {name}", side.name())))
}

fn same<C: Ring>(name: &str, a: &C, b: &C) -> Result<()> {
    if a.agrees(b) {
        Ok(())
    } else {
        Err(CliError::internal(format!("the algorithms disagree on {name}: {a} vs {b}")))
    }
}

fn base_provenance(doc: &mut ResultDocument, algorithm: Algorithm) {
    doc.provenance("algorithm", algorithm.label());
    doc.provenance("cross_checked", true);
    doc.provenance("tool", concat!("qsh ", env!("CARGO_PKG_VERSION")));
}

fn monomial_word(w: &Word<String>) -> Word<Monomial<String>> {
    Word(w.letters().iter().map(|l| Monomial::generator(l.clone())).collect())
}

fn alphabet_of<L: Clone + Ord>(words: &[&Word<L>]) -> Vec<L> {
    let set: BTreeSet<L> = words.iter().flat_map(|w| w.letters().iter().cloned()).collect();
    set.into_iter().collect()
}

fn word_strings<L: fmt::Display>(w: &Word<L>) -> Value {
    Value::Array(w.letters().iter().map(|l| Value::String(l.to_string())).collect())
}

fn literal_string(w: &WordLiteral) -> String {
    match w {
        WordLiteral::Symbols(w) => w.to_string(),
        WordLiteral::Mzv(w) => w.to_string(),
    }
}

/// `u ⧢ v` as a canonical term list.
pub fn run_qsh_product(u: &WordLiteral, v: &WordLiteral, algebra: AlgebraChoice) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("qsh-product");
    doc.input("u", literal_string(u));
    doc.input("v", literal_string(v));
    let (terms, alg_name) = match (u, v) {
        (WordLiteral::Mzv(a), WordLiteral::Mzv(b)) => (words_json(&qsh_words(&MzvAlgebra, a.letters(), b.letters())), "mzv"),
        (WordLiteral::Symbols(a), WordLiteral::Symbols(b)) => match algebra {
            AlgebraChoice::Monomial => {
                let (a, b) = (monomial_word(a), monomial_word(b));
                (words_json(&qsh_words(&MonomialAlgebra::new(), a.letters(), b.letters())), algebra.name())
            }
            AlgebraChoice::Shuffle => {
                (words_json(&qsh_words(&ShuffleAlgebra::<String>::new(), a.letters(), b.letters())), algebra.name())
            }
        },
        (WordLiteral::Symbols(w), _) | (_, WordLiteral::Symbols(w)) if w.is_empty() => {
            let other = if matches!(u, WordLiteral::Mzv(_)) { u } else { v };
            let WordLiteral::Mzv(m) = other else { unreachable!() };
            (words_json(&Lin::basis(m.clone())), "mzv")
        }
        _ => return Err(CliError::parse("cannot multiply [s;r] words with symbol words")),
    };
    doc.input("algebra", alg_name);
    doc.output("product", terms);
    doc.provenance("formula", "first-letter recursion");
    doc.provenance("tool", concat!("qsh ", env!("CARGO_PKG_VERSION")));
    Ok(doc)
}

fn antipode_value<A: LetterAlgebra + 'static>(alg: Arc<A>, w: &Word<A::Letter>) -> Result<Value>
where
    A::Letter: 'static,
{
    let closed = antipode_word(alg.as_ref(), w);
    let model = WordBialgebra::new(alg, alphabet_of(&[w]));
    let recursive = antipode_recursive(&model, w);
    if closed != recursive {
        return Err(CliError::internal(format!("antipode disagreement: {closed} vs {recursive}")));
    }
    Ok(words_json(&closed))
}

/// `S(w)` by the closed sum over factorizations and by the recursion
/// `S(w) = -w - Σ S(w′) ⧢ w″`.
pub fn run_antipode(w: &WordLiteral, algebra: AlgebraChoice, algorithm: Algorithm) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("antipode");
    doc.input("word", literal_string(w));
    let (value, name) = match w {
        WordLiteral::Mzv(m) => (antipode_value(Arc::new(MzvAlgebra), m)?, "mzv"),
        WordLiteral::Symbols(s) => match algebra {
            AlgebraChoice::Monomial => (antipode_value(Arc::new(MonomialAlgebra::new()), &monomial_word(s))?, algebra.name()),
            AlgebraChoice::Shuffle => (antipode_value(Arc::new(ShuffleAlgebra::<String>::new()), s)?, algebra.name()),
        },
    };
    doc.input("algebra", name);
    doc.output("antipode", value);
    base_provenance(&mut doc, algorithm);
    Ok(doc)
}

fn inverse_value<A: LetterAlgebra + 'static>(alg: Arc<A>, w: &Word<A::Letter>) -> Result<String>
where
    A::Letter: 'static,
{
    let model = Arc::new(WordBialgebra::new(alg.clone(), alphabet_of(&[w])));
    let one = AlgebraElement::new(&alg, rat_int(1), Lin::zero());
    let a = alg.clone();
    let valuation: Valuation<A::Letter, AlgebraElement<A>> = Arc::new(move |l| AlgebraElement::letter(&a, l.clone()));
    let j = j_map(&model, valuation.clone(), one.clone());
    let recursive = convolution_inverse(&j).eval(w)?;
    let closed = j_inverse_map(&model, valuation, one).eval(w)?;
    same("j^{*-1}", &recursive, &closed)?;
    Ok(closed.to_string())
}

/// `j^{∗-1}(w)` by the geometric series and by `(-1)^s a₁⋯a_s`.
pub fn run_inverse(w: &WordLiteral, algebra: AlgebraChoice, algorithm: Algorithm) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("inverse");
    doc.input("word", literal_string(w));
    let (value, name) = match w {
        WordLiteral::Mzv(m) => (inverse_value(Arc::new(MzvAlgebra), m)?, "mzv"),
        WordLiteral::Symbols(s) => match algebra {
            AlgebraChoice::Monomial => (inverse_value(Arc::new(MonomialAlgebra::new()), &monomial_word(s))?, algebra.name()),
            AlgebraChoice::Shuffle => (inverse_value(Arc::new(ShuffleAlgebra::<String>::new()), s)?, algebra.name()),
        },
    };
    doc.input("algebra", name);
    doc.output("j_inverse", value);
    base_provenance(&mut doc, algorithm);
    Ok(doc)
}

/// `(j₋(w), j₊(w))` for a letter valuation, by the recursion, by the
/// closed sum over factorizations and by the nested-projection formula,
/// all three compared.
pub fn j_birkhoff<R: RotaBaxter>(w: &Word<String>, values: &BTreeMap<String, R>, one: R) -> Result<(R, R)> {
    for l in w.letters() {
        if !values.contains_key(l) {
            return Err(CliError::parse(format!("no value given for letter `{l}`")));
        }
    }
    let alphabet: Vec<String> = values.keys().cloned().collect();
    let model = Arc::new(WordBialgebra::new(Arc::new(ShuffleAlgebra::<String>::new()), alphabet));
    let table = values.clone();
    let valuation: Valuation<String, R> = Arc::new(move |l| table[l].clone());
    let j = j_map(&model, valuation, one);
    let pair = birkhoff_recursive(&j);
    let letters: Vec<R> = w.letters().iter().map(|l| values[l].clone()).collect();
    let mut out = Vec::new();
    for side in [Split::Minus, Split::Plus] {
        let recursive = pair.side(side).eval(w)?;
        let closed = birkhoff_closed_words(&j, w, side)?;
        same(&format!("j_{}({w})", side.name()), &recursive, &closed)?;
        if !w.is_empty() {
            same(&format!("j_{}({w})", side.name()), &closed, &birkhoff_closed_qsh(&letters, side)?)?;
        }
        determined(&format!("j_{}({w})", side.name()), &closed, side)?;
        out.push(closed);
    }
    let plus = out.pop().expect("two sides");
    let minus = out.pop().expect("two sides");
    Ok((minus, plus))
}

fn birkhoff_outputs<C: Ring>(
    doc: &mut ResultDocument,
    w: &Word<String>,
    values: &BTreeMap<String, LaurentSeries<C>>,
    window: EpsWindow,
) -> Result<()>
where
    LaurentSeries<C>: RotaBaxter,
{
    for (l, v) in values {
        window_low(&format!("the value of `{l}`"), v, window)?;
    }
    let proto = values.values().next().map(|v| v.proto().one_like());
    let one = match proto {
        Some(p) => LaurentSeries::constant(p),
        None => return Err(CliError::parse("no letter values given")),
    };
    let (minus, plus) = j_birkhoff(w, values, one)?;
    doc.output("j_minus", series_json(&minus));
    doc.output("j_plus", series_json(&plus));
    Ok(())
}

/// Birkhoff factors of `j` on a word, for letter values given as series.
pub fn run_birkhoff(
    w: &Word<String>,
    values: &BTreeMap<String, Symbolic>,
    window: EpsWindow,
    x_degree: u32,
    algorithm: Algorithm,
) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("birkhoff");
    doc.input("word", w.to_string());
    let rational: Option<BTreeMap<String, LaurentSeries<Rational>>> =
        values.iter().map(|(k, v)| v.to_rational_series().map(|s| (k.clone(), s))).collect();
    match rational {
        Some(vals) => {
            doc.input("values", json!(vals.iter().map(|(k, v)| (k.clone(), v.to_string())).collect::<BTreeMap<_, _>>()));
            birkhoff_outputs(&mut doc, w, &vals, window)?;
        }
        None => {
            let uses_x = values.values().any(|v| v.to_poly_series(&["L"], x_degree).is_none());
            let uses_log = values.values().any(|v| v.to_poly_series(&["x"], x_degree).is_none());
            let vars = series_vars(uses_x, uses_log);
            let vals: BTreeMap<String, LaurentSeries<TruncatedPoly>> = values
                .iter()
                .map(|(k, v)| (k.clone(), v.to_poly_series(&vars, x_degree).expect("variables cover the values")))
                .collect();
            doc.input("values", json!(vals.iter().map(|(k, v)| (k.clone(), v.to_string())).collect::<BTreeMap<_, _>>()));
            birkhoff_outputs(&mut doc, w, &vals, window)?;
            doc.provenance("x_degree", x_degree);
        }
    }
    base_provenance(&mut doc, algorithm);
    doc.provenance("eps_window", window.to_string());
    Ok(doc)
}

/// Composition inverse by the λ-weighted closed formula and by the
/// convolution inverse of the associated character, checked by
/// substitution.
pub fn diffeo_inverse_checked<C: Ring>(f: &Diffeo<C>) -> Result<Diffeo<C>> {
    let closed = diffeo_inverse(f)?;
    let model = Arc::new(FaaDiBruno::new());
    let inv = convolution_inverse(&fdb_character(&model, f));
    let recursive =
        Diffeo::new(f.one(), (1..=f.order() as u32).map(|n| inv.eval(&gen(n))).collect::<std::result::Result<Vec<_>, _>>()?);
    if !closed.agrees(&recursive) {
        return Err(CliError::internal(format!("inverse disagreement: {closed} vs {recursive}")));
    }
    let id = Diffeo::identity(f.one(), f.order());
    if !diffeo_compose(f, &closed)?.agrees(&id) || !diffeo_compose(&closed, f)?.agrees(&id) {
        return Err(CliError::internal("the inverse fails the substitution check"));
    }
    Ok(closed)
}

fn string_value<C: fmt::Display>(c: &C) -> Value {
    Value::String(c.to_string())
}

pub fn run_fdb_invert(f: &DiffeoLiteral, algorithm: Algorithm) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("fdb-invert");
    doc.input("order", f.order());
    if let Some(r) = f.to_rational() {
        doc.input("diffeo", r.to_poly_string());
        let g = diffeo_inverse_checked(&r)?;
        doc.output("inverse", diffeo_json(&g, rational_json));
        doc.output("inverse_series", g.to_poly_string());
    } else if let Some(l) = f.to_laurent() {
        doc.input("diffeo", l.to_string());
        let g = diffeo_inverse_checked(&l)?;
        doc.output("inverse", diffeo_json(&g, series_json));
    } else {
        let l = f.to_log_laurent(f.order() as u32 + 8);
        doc.input("diffeo", l.to_string());
        let g = diffeo_inverse_checked(&l)?;
        doc.output("inverse", diffeo_json(&g, series_json));
    }
    base_provenance(&mut doc, algorithm);
    doc.provenance("formula", "signed λ-weighted sum over admissible decompositions");
    Ok(doc)
}

/// `(f₋, f₊)` by the closed λ-weighted formula and by Bogoliubov's
/// recursion, checked against `f₋ ∘ f = f₊`.
pub fn diffeo_birkhoff_checked<C: RotaBaxter>(f: &Diffeo<C>) -> Result<(Diffeo<C>, Diffeo<C>)> {
    let (minus, plus) = diffeo_birkhoff(f)?;
    let (rm, rp) = diffeo_birkhoff_recursive(f)?;
    if !minus.agrees(&rm) || !plus.agrees(&rp) {
        return Err(CliError::internal("Birkhoff factors of the diffeomorphism disagree"));
    }
    if !diffeo_compose(&minus, f)?.agrees(&plus) {
        return Err(CliError::internal("f₋ ∘ f ≠ f₊"));
    }
    Ok((minus, plus))
}

fn fdb_birkhoff_outputs<C: Ring>(doc: &mut ResultDocument, f: &Diffeo<LaurentSeries<C>>, window: EpsWindow) -> Result<()>
where
    LaurentSeries<C>: RotaBaxter,
{
    for (i, c) in f.coeffs().iter().enumerate() {
        window_low(&format!("f_{}", i + 1), c, window)?;
    }
    doc.input("diffeo", f.to_string());
    let (minus, plus) = diffeo_birkhoff_checked(f)?;
    doc.output("f_minus", diffeo_json(&minus, series_json));
    doc.output("f_plus", diffeo_json(&plus, series_json));
    let at0 = plus.coeffs().iter().map(|c| c.coeff(0)).collect::<std::result::Result<Vec<_>, _>>()?;
    doc.output("f_plus_at_0", diffeo_json(&Diffeo::new(&f.one().proto().one_like(), at0), string_value));
    Ok(())
}

pub fn run_fdb_birkhoff(f: &DiffeoLiteral, window: EpsWindow, algorithm: Algorithm) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("fdb-birkhoff");
    doc.input("order", f.order());
    if let Some(l) = f.to_laurent() {
        fdb_birkhoff_outputs(&mut doc, &l, window)?;
    } else {
        fdb_birkhoff_outputs(&mut doc, &f.to_log_laurent(f.order() as u32 + 8), window)?;
    }
    base_provenance(&mut doc, algorithm);
    doc.provenance("eps_window", window.to_string());
    Ok(doc)
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(rat_int(1), |acc, k| acc * rat_int(k))
}

/// `ψ(t_n) = e^{-nεL} / (n! εⁿ)` known through `ε^{eps_high}`, with
/// coefficients in `ℚ[L]` truncated at `log_degree`.
pub fn ladder_value(n: usize, eps_high: i32, log_degree: u32) -> Result<LaurentSeries<TruncatedPoly>> {
    let one = TruncatedPoly::constant(&["L"], log_degree, rat_int(1));
    if n == 0 {
        return Ok(LaurentSeries::constant(one));
    }
    let c = TruncatedPoly::var(&["L"], log_degree, 0).scale(&rat_int(-(n as i64)));
    let e = laurent_exp(&c, 1, eps_high + n as i32)?;
    Ok(e.shift(-(n as i32)).scale(&(rat_int(1) / factorial(n))))
}

/// Ladder values and both Birkhoff factors for `n = 1..=n_max`.
pub struct LadderResult {
    pub psi: Vec<LaurentSeries<TruncatedPoly>>,
    pub minus: Vec<LaurentSeries<TruncatedPoly>>,
    pub plus: Vec<LaurentSeries<TruncatedPoly>>,
}

pub fn ladder(n_max: usize, window: EpsWindow) -> Result<LadderResult> {
    if n_max < 1 {
        return Err(CliError::parse("the ladder needs n_max >= 1"));
    }
    if -(n_max as i64) < window.low as i64 {
        return Err(CliError::window(format!(
            "ψ(t_{n_max}) has a pole of order {n_max}, below the window start e^{}",
            window.low
        )));
    }
    let log_degree = (window.high.max(0) as u32) + n_max as u32 + 1;
    let values = (0..=n_max).map(|n| ladder_value(n, window.high, log_degree)).collect::<Result<Vec<_>>>()?;
    let one = values[0].clone();
    let model = Arc::new(WordBialgebra::new(Arc::new(ShuffleAlgebra::<String>::new()), vec!["t".to_string()]));
    let table = values.clone();
    let psi: Map<WordBialgebra<ShuffleAlgebra<String>>, LaurentSeries<TruncatedPoly>> =
        MapRule::new_character(&model, one, move |_, w: &Word<String>| {
            table.get(w.len()).cloned().ok_or_else(|| qshalg::hopfmaps::MapError::Undefined(format!("t_{}", w.len())))
        });
    let pair = birkhoff_recursive(&psi);
    let (mut minus, mut plus) = (Vec::new(), Vec::new());
    for n in 1..=n_max {
        let w = Word(vec!["t".to_string(); n]);
        for side in [Split::Minus, Split::Plus] {
            let name = format!("ψ_{}(t_{n})", side.name());
            let recursive = pair.side(side).eval(&w)?;
            let closed = birkhoff_closed_words(&psi, &w, side)?;
            determined(&name, &recursive, side)?;
            determined(&name, &closed, side)?;
            same(&name, &recursive, &closed)?;
            match side {
                Split::Minus => minus.push(closed),
                Split::Plus => plus.push(closed),
            }
        }
    }
    Ok(LadderResult { psi: values[1..].to_vec(), minus, plus })
}

/// True when no coefficient involves `L`.
pub fn is_local(s: &LaurentSeries<TruncatedPoly>) -> bool {
    s.terms().all(|(_, c)| c.vars().iter().position(|v| v == "L").is_none_or(|i| c.is_free_of(i)))
}

pub fn run_ladder(n_max: usize, window: EpsWindow, algorithm: Algorithm) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("ladder");
    doc.input("n_max", n_max);
    let r = ladder(n_max, window)?;
    let keyed = |v: &[LaurentSeries<TruncatedPoly>]| -> Value {
        Value::Object(v.iter().enumerate().map(|(i, s)| (format!("t{}", i + 1), series_json(s))).collect())
    };
    let local = r.minus.iter().all(is_local);
    if !local {
        return Err(CliError::internal("a ladder counterterm depends on L"));
    }
    doc.output("psi", keyed(&r.psi));
    doc.output("psi_minus", keyed(&r.minus));
    doc.output("psi_plus", keyed(&r.plus));
    doc.output("locality", local);
    base_provenance(&mut doc, algorithm);
    doc.provenance("eps_window", window.to_string());
    Ok(doc)
}

/// Results of the regularized linearization example.
pub struct Linearization {
    pub a: LaurentSeries<TruncatedPoly>,
    pub a_minus: LaurentSeries<TruncatedPoly>,
    pub a_plus: LaurentSeries<TruncatedPoly>,
    pub f: Diffeo<LaurentSeries<TruncatedPoly>>,
    pub f_minus: Diffeo<LaurentSeries<TruncatedPoly>>,
    pub f_plus: Diffeo<LaurentSeries<TruncatedPoly>>,
    pub a_plus_at_0: TruncatedPoly,
    pub f_plus_at_0: Diffeo<TruncatedPoly>,
    /// `x·a₊′(x) + b(x) - b₀` at `ε = 0`.
    pub residual: TruncatedPoly,
}

pub fn linearize(b: &[Rational], x_degree: u32, z_order: usize, window: EpsWindow) -> Result<Linearization> {
    if b.is_empty() || x_degree < 1 || z_order < 1 {
        return Err(CliError::parse("linearize needs b, x-degree >= 1 and order >= 1"));
    }
    let a = regularized_a(b, x_degree, window.high);
    let f = mobius_diffeo(&a, z_order);
    for (i, c) in f.coeffs().iter().enumerate() {
        window_low(&format!("f_{}", i + 1), c, window)?;
    }
    let (f_minus, f_plus) = diffeo_birkhoff_checked(&f)?;
    let (a_minus, a_plus) = (a.p_minus(), a.p_plus());
    if !f_plus.agrees(&mobius_diffeo(&a_plus, z_order)) || !f_minus.agrees(&mobius_diffeo(&a_minus.neg(), z_order)) {
        return Err(CliError::internal("the factors differ from z/(1 - a₊z) and z/(1 + a₋z)"));
    }
    let a_plus_at_0 = a_plus.coeff(0)?;
    let at0 = f_plus.coeffs().iter().map(|c| c.coeff(0)).collect::<std::result::Result<Vec<_>, _>>()?;
    let f_plus_at_0 = Diffeo::new(&a_plus_at_0.one_like(), at0);
    let mut residual = TruncatedPoly::zero(&["x"], x_degree);
    for n in 1..=x_degree {
        let c = a_plus_at_0.coeff(&[n]) * rat_int(n as i64) + b.get(n as usize).cloned().unwrap_or_else(Rational::zero);
        residual = residual.with_term(vec![n], c);
    }
    Ok(Linearization { a, a_minus, a_plus, f, f_minus, f_plus, a_plus_at_0, f_plus_at_0, residual })
}

pub fn run_linearize(
    b: &[Rational],
    x_degree: u32,
    z_order: usize,
    window: EpsWindow,
    algorithm: Algorithm,
) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("linearize");
    doc.input("b", Value::Array(b.iter().map(rational_json).collect()));
    let r = linearize(b, x_degree, z_order, window)?;
    doc.output("a", series_json(&r.a));
    doc.output("a_minus", series_json(&r.a_minus));
    doc.output("a_plus", series_json(&r.a_plus));
    doc.output("a_plus_at_0", r.a_plus_at_0.to_string());
    doc.output("f", diffeo_json(&r.f, series_json));
    doc.output("f_minus", diffeo_json(&r.f_minus, series_json));
    doc.output("f_plus", diffeo_json(&r.f_plus, series_json));
    doc.output("f_plus_at_0", diffeo_json(&r.f_plus_at_0, string_value));
    let b0 = b.first().cloned().unwrap_or_else(Rational::zero);
    doc.output("target", format!("x' = x, y' = {}*y^2", format_rational(&b0)));
    doc.output("conjugacy_residual", r.residual.to_string());
    base_provenance(&mut doc, algorithm);
    doc.provenance("eps_window", window.to_string());
    doc.provenance("x_degree", x_degree);
    doc.provenance("z_order", z_order);
    Ok(doc)
}

/// The exponent `d` of the mould, a natural number or the regulator ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MouldExponent {
    Integer(u32),
    Epsilon,
}

impl FromStr for MouldExponent {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "e" | "eps" | "epsilon" => Ok(MouldExponent::Epsilon),
            t => t.parse().map(MouldExponent::Integer).map_err(|_| format!("expected a natural number or `eps`, found `{t}`")),
        }
    }
}

impl fmt::Display for MouldExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MouldExponent::Integer(d) => write!(f, "{d}"),
            MouldExponent::Epsilon => write!(f, "eps"),
        }
    }
}

/// `V_d(n₁…n_s) = (-1)^s x^{n₁+…+n_s+sd} / Π (ň_i + i d)` with
/// `ň_i = n₁+…+n_i`, as a Laurent series in ε over `ℚ[x, L]` truncated at
/// total degree `max_degree`; for `d = ε`, `x^{sε} = exp(sεL)`.
pub fn mould_value(word: &[u32], d: MouldExponent, max_degree: u32, eps_high: i32) -> Result<LaurentSeries<TruncatedPoly>> {
    let vars = ["x", "L"];
    let one = TruncatedPoly::constant(&vars, max_degree, rat_int(1));
    let s = word.len() as u32;
    let total: u32 = word.iter().sum();
    let sign = if s.is_multiple_of(2) { rat_int(1) } else { rat_int(-1) };
    let partial: Vec<u32> = word.iter().scan(0, |acc, &n| {
        *acc += n;
        Some(*acc)
    }).collect();
    match d {
        MouldExponent::Integer(d) => {
            let mut denom = rat_int(1);
            for (i, &c) in partial.iter().enumerate() {
                let f = c + (i as u32 + 1) * d;
                if f == 0 {
                    return Err(CliError::hypothesis(format!(
                        "unremovable resonance: the factor ň_{} + {}d vanishes",
                        i + 1,
                        i + 1
                    )));
                }
                denom *= rat_int(f as i64);
            }
            let mono = TruncatedPoly::zero(&vars, max_degree).with_term(vec![total + s * d, 0], sign / denom);
            Ok(LaurentSeries::constant(mono))
        }
        MouldExponent::Epsilon => {
            let high = eps_high + s as i32;
            let xpow = TruncatedPoly::zero(&vars, max_degree).with_term(vec![total, 0], sign);
            let log = TruncatedPoly::var(&vars, max_degree, 1).scale(&rat_int(s as i64));
            let mut acc = laurent_exp(&log, 1, high)?.mul(&LaurentSeries::constant(xpow));
            for (i, &c) in partial.iter().enumerate() {
                let i = i as i64 + 1;
                let factor = if c == 0 {
                    LaurentSeries::monomial(one.scale(&rat(1, i)), -1, None)
                } else {
                    let c = c as i64;
                    let terms = (0..=high.max(0)).map(|k| {
                        let mut r = rat(1, c);
                        for _ in 0..k {
                            r *= rat(-i, c);
                        }
                        (k, one.scale(&r))
                    });
                    LaurentSeries::from_terms(&one, terms, Some(high))
                };
                acc = acc.try_mul(&factor)?;
            }
            Ok(acc)
        }
    }
}

/// Mould values and Birkhoff factors on a word.
pub struct MouldResult {
    pub value: LaurentSeries<TruncatedPoly>,
    pub minus: LaurentSeries<TruncatedPoly>,
    pub plus: LaurentSeries<TruncatedPoly>,
    pub plus_at_0: TruncatedPoly,
    /// `V(u)V(v) = Σ_{w ∈ sh(u,v)} V(w)` for every cut `word = uv`.
    pub shuffle_character: bool,
}

/// The mould `V_d` as a character on the shuffle algebra over `0..n_letters`.
pub fn mould_map(
    n_letters: u32,
    d: MouldExponent,
    max_degree: u32,
    eps_high: i32,
) -> Map<WordBialgebra<ShuffleAlgebra<u32>>, LaurentSeries<TruncatedPoly>> {
    let model = Arc::new(WordBialgebra::new(Arc::new(ShuffleAlgebra::new()), (0..n_letters).collect()));
    let one = LaurentSeries::constant(TruncatedPoly::constant(&["x", "L"], max_degree, rat_int(1)));
    MapRule::new_character(&model, one, move |_, w: &Word<u32>| {
        mould_value(w.letters(), d, max_degree, eps_high)
            .map_err(|e| qshalg::hopfmaps::MapError::Hypothesis(e.message))
    })
}

pub fn mould(n_letters: u32, word: &[u32], d: MouldExponent, window: EpsWindow, xlog_degree: u32) -> Result<MouldResult> {
    if word.len() > 6 {
        return Err(CliError::parse("mould words are limited to 6 letters"));
    }
    if let Some(&l) = word.iter().find(|&&l| l >= n_letters) {
        return Err(CliError::parse(format!("letter {l} is outside the alphabet 0..{n_letters}")));
    }
    let s = word.len() as u32;
    let total: u32 = word.iter().sum();
    let max_degree = match d {
        MouldExponent::Integer(d) => total + s * d,
        MouldExponent::Epsilon => total + xlog_degree,
    };
    let value = mould_value(word, d, max_degree, window.high)?;
    window_low("V(word)", &value, window)?;
    let v = mould_map(n_letters, d, max_degree, window.high);
    let w = Word(word.to_vec());
    let pair = birkhoff_recursive(&v);
    let mut sides = Vec::new();
    for side in [Split::Minus, Split::Plus] {
        let name = format!("V_{}({w})", side.name());
        let recursive = pair.side(side).eval(&w)?;
        let closed = birkhoff_closed_words(&v, &w, side)?;
        determined(&name, &recursive, side)?;
        same(&name, &recursive, &closed)?;
        sides.push(closed);
    }
    let plus = sides.pop().expect("two sides");
    let minus = sides.pop().expect("two sides");
    let plus_at_0 = plus.coeff(0)?;
    let mut shuffle_character = true;
    for cut in 1..word.len() {
        let (u, t) = word.split_at(cut);
        let lhs = v.eval(&Word(u.to_vec()))?.try_mul(&v.eval(&Word(t.to_vec()))?)?;
        let rhs = v.eval_lin(&qsh_words(&ShuffleAlgebra::<u32>::new(), u, t))?;
        shuffle_character &= lhs.agrees(&rhs);
    }
    Ok(MouldResult { value, minus, plus, plus_at_0, shuffle_character })
}

pub fn run_mould(
    n_letters: u32,
    word: &[u32],
    d: MouldExponent,
    window: EpsWindow,
    xlog_degree: u32,
    algorithm: Algorithm,
) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("mould");
    doc.input("n_letters", n_letters);
    doc.input("word", Value::Array(word.iter().map(|&n| json!(n)).collect()));
    doc.input("d", d.to_string());
    let r = mould(n_letters, word, d, window, xlog_degree)?;
    if !r.shuffle_character {
        return Err(CliError::internal("the mould fails the shuffle character check"));
    }
    doc.output("value", series_json(&r.value));
    doc.output("minus", series_json(&r.minus));
    doc.output("plus", series_json(&r.plus));
    doc.output("plus_at_0", r.plus_at_0.to_string());
    doc.output("shuffle_character", r.shuffle_character);
    base_provenance(&mut doc, algorithm);
    doc.provenance("eps_window", window.to_string());
    doc.provenance("xlog_degree", xlog_degree);
    Ok(doc)
}

/// One term `sign · p±(p₋(…p₋(Z(x¹))Z(x²)…)Z(xᵗ))` of the closed Birkhoff
/// expansion of an opaque character `Z` on a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionTerm<L> {
    pub sign: i32,
    pub blocks: Vec<Word<L>>,
}

impl<L: fmt::Display> ExpansionTerm<L> {
    pub fn render(&self, side: Split) -> String {
        let mut s = String::new();
        for (i, b) in self.blocks.iter().enumerate() {
            s = if i == 0 { format!("Z({b})") } else { format!("p-({s})*Z({b})") };
        }
        let outer = match side {
            Split::Minus => "p-",
            Split::Plus => "p+",
        };
        let sign = if self.sign < 0 { "-" } else { "+" };
        format!("{sign}{outer}({s})")
    }
}

pub fn symbolic_expansion<L: Clone>(w: &Word<L>, side: Split) -> Vec<ExpansionTerm<L>> {
    all_factorizations(w)
        .into_iter()
        .map(|blocks| {
            let t = blocks.len();
            let negative = match side {
                Split::Minus => t % 2 == 1,
                Split::Plus => t % 2 == 0,
            };
            ExpansionTerm { sign: if negative { -1 } else { 1 }, blocks }
        })
        .collect()
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Evaluates the symbolic expansion of `w` for a pseudo-random character
/// and compares it with Bogoliubov's recursion.
fn check_expansion(w: &Word<MzvLetter>) -> Result<()> {
    let model = Arc::new(WordBialgebra::new(Arc::new(MzvAlgebra), alphabet_of(&[w])));
    let value = |b: &Word<MzvLetter>| -> Laurent {
        let mut r = rng(fnv(&b.to_string()));
        random_laurent(&mut r, -2, 2, 3)
    };
    let z: Map<WordBialgebra<MzvAlgebra>, Laurent> =
        MapRule::from_fn(&model, LaurentSeries::constant(rat_int(1)), move |b| Ok(value(b)));
    let pair = birkhoff_recursive(&z);
    for side in [Split::Minus, Split::Plus] {
        let mut acc = z.zero();
        for term in symbolic_expansion(w, side) {
            let values = term.blocks.iter().map(|b| z.eval(b)).collect::<std::result::Result<Vec<_>, _>>()?;
            let v = nested_projection(&values, side)?;
            acc = acc.try_add(&if term.sign < 0 { v.neg() } else { v })?;
        }
        same(&format!("Z_{}({w})", side.name()), &acc, &pair.side(side).eval(w)?)?;
    }
    let inverse = convolution_inverse(&z);
    let unit = convolve(&z, &inverse)?;
    if !unit.eval(w)?.is_zero() && !w.is_empty() {
        return Err(CliError::internal("Z ∗ Z^{∗-1} is not the unit"));
    }
    Ok(())
}

/// Quasi-shuffle over the `[s;r]` alphabet and the symbolic Birkhoff
/// expansion of an opaque character `Z`.
pub fn run_mzv_demo(u: &Word<MzvLetter>, v: Option<&Word<MzvLetter>>, algorithm: Algorithm) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("mzv-demo");
    doc.input("u", u.to_string());
    if let Some(v) = v {
        doc.input("v", v.to_string());
        doc.output("stuffle", words_json(&qsh_words(&MzvAlgebra, u.letters(), v.letters())));
    }
    if !u.is_empty() {
        check_expansion(u)?;
    }
    for (side, key) in [(Split::Minus, "z_minus"), (Split::Plus, "z_plus")] {
        let terms: Vec<Value> = symbolic_expansion(u, side).iter().map(|t| Value::String(t.render(side))).collect();
        doc.output(key, Value::Array(terms));
    }
    doc.output("word", word_strings(u));
    base_provenance(&mut doc, algorithm);
    doc.provenance("character", "opaque Z, checked on a pseudo-random Laurent instance");
    Ok(doc)
}
