//! Expression grammar for words, series and diffeomorphisms.
//!
//! Series: sums and products of rationals and the symbols `e` (the
//! regulator ε), `x` and `L` (log), with `^` to signed integer powers,
//! division by constants, parentheses and `O(e^k)` precision terms.
//! Words: dot-separated letters `a1.a2.b` or `[s;r]`; `1` is the empty word.
//! Diffeomorphisms: `x + (1/2)*x^2 + …` with series coefficients, or
//! `{"coeffs": [...], "order": N}`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Zero};
use qshalg::fdb::Diffeo;
use qshalg::qsh::{MzvLetter, Word};
use qshalg::rings::{parse_rational, rat_int, LaurentSeries, Rational, TruncatedPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Word,
    Series,
    Diffeo,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn error_at(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

fn tokenize(text: &str, symbols: &str) -> PResult<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            let n: BigInt = s.parse().map_err(|_| error_at(l, col, format!("malformed rational `{s}`")))?;
            out.push(Token { tok: Tok::Int(n), line: l, column: col });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: l, column: col });
            continue;
        }
        if symbols.contains(c) {
            chars.next();
            column += 1;
            out.push(Token { tok: Tok::Sym(c), line: l, column: col });
            continue;
        }
        return Err(error_at(l, col, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

/// Laurent polynomial in `e` with coefficients in `ℚ[L]`, known through
/// `ε^high` (`None` for exact).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Part {
    terms: BTreeMap<(i32, u32), Rational>,
    high: Option<i32>,
}

impl Part {
    fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.high.is_none()
    }

    fn low(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.0).min().or(self.high.map(|h| h + 1))
    }

    fn add_term(&mut self, key: (i32, u32), c: Rational) {
        if self.high.is_some_and(|h| key.0 > h) || c.is_zero() {
            return;
        }
        let next = self.terms.remove(&key).unwrap_or_else(Rational::zero) + c;
        if !next.is_zero() {
            self.terms.insert(key, next);
        }
    }

    fn truncate(&mut self) {
        if let Some(h) = self.high {
            self.terms.retain(|k, _| k.0 <= h);
        }
    }

    fn add(&self, other: &Part) -> Part {
        let mut out = Part { terms: self.terms.clone(), high: min_high(self.high, other.high) };
        out.truncate();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    fn mul(&self, other: &Part) -> Part {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Part::default();
        }
        let mut high = None;
        if let (Some(h), Some(l)) = (self.high, other.low()) {
            high = min_high(high, Some(h + l));
        }
        if let (Some(h), Some(l)) = (other.high, self.low()) {
            high = min_high(high, Some(h + l));
        }
        let mut out = Part { terms: BTreeMap::new(), high };
        for ((ea, la), ca) in &self.terms {
            for ((eb, lb), cb) in &other.terms {
                out.add_term((ea + eb, la + lb), ca * cb);
            }
        }
        out
    }
}

fn min_high(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Parsed symbolic value: a polynomial in `x` whose coefficients are
/// [`Part`]s.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Symbolic {
    parts: BTreeMap<u32, Part>,
}

impl Symbolic {
    fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0, 0)
    }

    fn monomial(c: Rational, e: i32, x: u32, l: u32) -> Self {
        let mut p = Part::default();
        p.add_term((e, l), c);
        let mut s = Symbolic::default();
        s.insert(x, p);
        s
    }

    fn big_o(high: i32) -> Self {
        let mut s = Symbolic::default();
        s.insert(0, Part { terms: BTreeMap::new(), high: Some(high) });
        s
    }

    fn insert(&mut self, x: u32, p: Part) {
        if p.is_exact_zero() {
            self.parts.remove(&x);
        } else {
            self.parts.insert(x, p);
        }
    }

    fn add(&self, other: &Symbolic) -> Symbolic {
        let mut out = self.clone();
        for (x, p) in &other.parts {
            let next = match out.parts.get(x) {
                Some(cur) => cur.add(p),
                None => p.clone(),
            };
            out.insert(*x, next);
        }
        out
    }

    fn neg(&self) -> Symbolic {
        self.scale(&rat_int(-1))
    }

    fn scale(&self, c: &Rational) -> Symbolic {
        let mut out = self.clone();
        for p in out.parts.values_mut() {
            for v in p.terms.values_mut() {
                *v *= c;
            }
            p.terms.retain(|_, v| !v.is_zero());
        }
        out
    }

    fn mul(&self, other: &Symbolic) -> Symbolic {
        let mut out = Symbolic::default();
        for (xa, pa) in &self.parts {
            for (xb, pb) in &other.parts {
                let prod = pa.mul(pb);
                let next = match out.parts.get(&(xa + xb)) {
                    Some(cur) => cur.add(&prod),
                    None => prod,
                };
                out.insert(xa + xb, next);
            }
        }
        out
    }

    /// The single exact term `(c, e, x, L)`, if the value is a monomial.
    fn as_monomial(&self) -> Option<(Rational, i32, u32, u32)> {
        if self.parts.len() != 1 {
            return None;
        }
        let (x, p) = self.parts.iter().next()?;
        if p.high.is_some() || p.terms.len() != 1 {
            return None;
        }
        let ((e, l), c) = p.terms.iter().next()?;
        Some((c.clone(), *e, *x, *l))
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.parts.is_empty() {
            return Some(Rational::zero());
        }
        match self.as_monomial()? {
            (c, 0, 0, 0) => Some(c),
            _ => None,
        }
    }

    fn uses_x(&self) -> bool {
        self.parts.keys().any(|&x| x > 0)
    }

    fn uses_log(&self) -> bool {
        self.parts.values().any(|p| p.terms.keys().any(|k| k.1 > 0))
    }

    fn high(&self) -> Option<i32> {
        self.parts.values().fold(None, |h, p| min_high(h, p.high))
    }
}

/// The ring a parsed series lives in.
#[derive(Debug, Clone)]
pub enum SeriesValue {
    Rational(LaurentSeries<Rational>),
    Poly(LaurentSeries<TruncatedPoly>),
}

impl SeriesValue {
    pub fn render(&self) -> String {
        match self {
            SeriesValue::Rational(s) => s.to_string(),
            SeriesValue::Poly(s) => s.to_string(),
        }
    }
}

/// Variables of the coefficient ring of a parsed series, in canonical order.
pub fn series_vars(uses_x: bool, uses_log: bool) -> Vec<&'static str> {
    let mut v = Vec::new();
    if uses_x {
        v.push("x");
    }
    if uses_log {
        v.push("L");
    }
    v
}

impl Symbolic {
    /// Converts to a Laurent series with rational coefficients; fails when
    /// `x` or `L` occurs.
    pub fn to_rational_series(&self) -> Option<LaurentSeries<Rational>> {
        if self.uses_x() || self.uses_log() {
            return None;
        }
        let p = self.parts.get(&0).cloned().unwrap_or_default();
        Some(part_to_rational(&p))
    }

    /// Converts to a Laurent series with coefficients in `ℚ[vars]`
    /// truncated at total degree `max_degree`; `vars` is a subset of
    /// `["x", "L"]` covering the symbols used.
    pub fn to_poly_series(&self, vars: &[&str], max_degree: u32) -> Option<LaurentSeries<TruncatedPoly>> {
        let xi = vars.iter().position(|v| *v == "x");
        let li = vars.iter().position(|v| *v == "L");
        if (self.uses_x() && xi.is_none()) || (self.uses_log() && li.is_none()) {
            return None;
        }
        let proto = TruncatedPoly::zero(vars, max_degree);
        let mut by_eps: BTreeMap<i32, TruncatedPoly> = BTreeMap::new();
        for (x, p) in &self.parts {
            for ((e, l), c) in &p.terms {
                let mut exps = vec![0; vars.len()];
                if let Some(i) = xi {
                    exps[i] = *x;
                }
                if let Some(i) = li {
                    exps[i] = *l;
                }
                let cur = by_eps.remove(e).unwrap_or_else(|| proto.clone());
                by_eps.insert(*e, cur.with_term(exps, c.clone()));
            }
        }
        Some(LaurentSeries::from_terms(&proto, by_eps, self.high()))
    }

    pub fn to_series(&self, max_degree: u32) -> SeriesValue {
        match self.to_rational_series() {
            Some(s) => SeriesValue::Rational(s),
            None => {
                let vars = series_vars(self.uses_x(), self.uses_log());
                SeriesValue::Poly(self.to_poly_series(&vars, max_degree).expect("variables cover the value"))
            }
        }
    }
}

fn part_to_rational(p: &Part) -> LaurentSeries<Rational> {
    LaurentSeries::from_terms(&rat_int(1), p.terms.iter().map(|((e, _), c)| (*e, c.clone())), p.high)
}

fn part_to_poly(p: &Part, max_degree: u32) -> LaurentSeries<TruncatedPoly> {
    let proto = TruncatedPoly::zero(&["L"], max_degree);
    let mut by_eps: BTreeMap<i32, TruncatedPoly> = BTreeMap::new();
    for ((e, l), c) in &p.terms {
        let cur = by_eps.remove(e).unwrap_or_else(|| proto.clone());
        by_eps.insert(*e, cur.with_term(vec![*l], c.clone()));
    }
    LaurentSeries::from_terms(&proto, by_eps, p.high)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn fail<T>(&self, message: impl Into<String>) -> PResult<T> {
        let t = self.peek();
        Err(error_at(t.line, t.column, message))
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.is_sym(c) {
            self.next();
            Ok(())
        } else {
            let found = self.peek().tok.to_string();
            self.fail(format!("expected `{c}`, found {found}"))
        }
    }

    fn expect_end(&self) -> PResult<()> {
        match &self.peek().tok {
            Tok::End => Ok(()),
            t => self.fail(format!("unexpected {t}")),
        }
    }

    fn expr(&mut self) -> PResult<Symbolic> {
        let mut acc = if self.is_sym('-') {
            self.next();
            self.term()?.neg()
        } else {
            if self.is_sym('+') {
                self.next();
            }
            self.term()?
        };
        loop {
            if self.is_sym('+') {
                self.next();
                acc = acc.add(&self.term()?);
            } else if self.is_sym('-') {
                self.next();
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Symbolic> {
        let mut acc = self.power()?;
        loop {
            if self.is_sym('*') {
                self.next();
                acc = acc.mul(&self.power()?);
            } else if self.is_sym('/') {
                let at = self.next();
                let d = self.power()?;
                if d.as_rational().is_some_and(|c| c.is_zero()) {
                    return Err(error_at(at.line, at.column, "malformed rational: zero denominator"));
                }
                let Some((c, e, 0, 0)) = d.as_monomial() else {
                    return Err(error_at(at.line, at.column, "division by a non-monomial or by x or L"));
                };
                acc = acc.mul(&Symbolic::monomial(Rational::one() / c, -e, 0, 0));
            } else {
                return Ok(acc);
            }
        }
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let negative = if self.is_sym('-') {
            self.next();
            true
        } else {
            if self.is_sym('+') {
                self.next();
            }
            false
        };
        let t = self.next();
        let Tok::Int(n) = t.tok else {
            return Err(error_at(t.line, t.column, format!("expected an integer exponent, found {}", t.tok)));
        };
        let n: i64 = n.try_into().map_err(|_| error_at(t.line, t.column, "exponent out of range"))?;
        Ok(if negative { -n } else { n })
    }

    fn power(&mut self) -> PResult<Symbolic> {
        let start = self.peek().clone();
        let base = self.atom()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.next();
        let k = self.signed_int()?;
        if k.unsigned_abs() > 4096 {
            return Err(error_at(start.line, start.column, "exponent out of range"));
        }
        if k >= 0 {
            let mut acc = Symbolic::constant(rat_int(1));
            for _ in 0..k {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        match base.as_monomial() {
            Some((c, e, 0, 0)) => {
                let k = (-k) as i32;
                let inv = Rational::one() / c;
                let mut coeff = rat_int(1);
                for _ in 0..k {
                    coeff *= &inv;
                }
                Ok(Symbolic::monomial(coeff, -e * k, 0, 0))
            }
            _ => Err(error_at(start.line, start.column, "negative powers apply only to monomials in e")),
        }
    }

    fn atom(&mut self) -> PResult<Symbolic> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok(Symbolic::constant(Rational::from_integer(n))),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Tok::Ident(ref s) if s == "O" => {
                self.expect_sym('(')?;
                let arg = self.expr()?;
                self.expect_sym(')')?;
                match arg.as_monomial() {
                    Some((c, e, 0, 0)) if c.is_one() => Ok(Symbolic::big_o(e - 1)),
                    _ => Err(error_at(t.line, t.column, "O(...) takes a power of e")),
                }
            }
            Tok::Ident(ref s) => match s.as_str() {
                "e" => Ok(Symbolic::monomial(rat_int(1), 1, 0, 0)),
                "x" => Ok(Symbolic::monomial(rat_int(1), 0, 1, 0)),
                "L" => Ok(Symbolic::monomial(rat_int(1), 0, 0, 1)),
                _ => Err(error_at(t.line, t.column, format!("unknown symbol `{s}`"))),
            },
            other => Err(error_at(t.line, t.column, format!("unexpected {other}"))),
        }
    }
}

fn parse_symbolic(text: &str) -> PResult<Symbolic> {
    let mut p = Parser { tokens: tokenize(text, "+-*/^()")?, pos: 0 };
    let v = p.expr()?;
    p.expect_end()?;
    Ok(v)
}

/// Parses a series literal such as `3*e^-2 + 1 + e`.
pub fn parse_series(text: &str) -> PResult<Symbolic> {
    parse_symbolic(text)
}

/// Parses a series that may only involve `e`.
pub fn parse_rational_series(text: &str) -> PResult<LaurentSeries<Rational>> {
    let v = parse_symbolic(text)?;
    v.to_rational_series()
        .ok_or_else(|| error_at(1, 1, "expected a series in e with rational coefficients"))
}

/// Parses a rational literal `p`, `-p` or `p/q`.
pub fn parse_rational_literal(text: &str) -> PResult<Rational> {
    parse_rational(text).map_err(|_| error_at(1, 1, format!("malformed rational `{}`", text.trim())))
}

/// A word over named symbols or over the `[s;r]` alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordLiteral {
    Symbols(Word<String>),
    Mzv(Word<MzvLetter>),
}

/// Parses `a1.a2.b`, `[2;1].[1;1/2]`, or `1` for the empty word.
pub fn parse_word(text: &str) -> PResult<WordLiteral> {
    let tokens = tokenize(text, ".[];/-")?;
    if let [Token { tok: Tok::Int(n), .. }, Token { tok: Tok::End, .. }] = tokens.as_slice() {
        if n.is_one() {
            return Ok(WordLiteral::Symbols(Word::empty()));
        }
    }
    let mut p = Parser { tokens, pos: 0 };
    let mut symbols = Vec::new();
    let mut mzv = Vec::new();
    loop {
        let t = p.peek().clone();
        match &t.tok {
            Tok::Sym('[') => {
                p.next();
                let s = p.signed_int()?;
                p.expect_sym(';')?;
                let r = p.word_rational()?;
                p.expect_sym(']')?;
                if r <= Rational::zero() {
                    return Err(error_at(t.line, t.column, "MZV letters need r > 0"));
                }
                mzv.push(MzvLetter::new(s, r));
            }
            Tok::Ident(s) => {
                p.next();
                symbols.push(s.clone());
            }
            Tok::Int(n) => {
                p.next();
                symbols.push(n.to_string());
            }
            other => return p.fail(format!("expected a letter, found {other}")),
        }
        if !symbols.is_empty() && !mzv.is_empty() {
            return Err(error_at(t.line, t.column, "cannot mix [s;r] letters with symbols"));
        }
        if p.is_sym('.') {
            p.next();
            continue;
        }
        p.expect_end()?;
        break;
    }
    Ok(if mzv.is_empty() {
        WordLiteral::Symbols(Word(symbols))
    } else {
        WordLiteral::Mzv(Word(mzv))
    })
}

impl Parser {
    fn word_rational(&mut self) -> PResult<Rational> {
        let n = self.signed_int()?;
        if !self.is_sym('/') {
            return Ok(rat_int(n));
        }
        let at = self.next();
        let d = self.signed_int()?;
        if d == 0 {
            return Err(error_at(at.line, at.column, "malformed rational: zero denominator"));
        }
        Ok(Rational::new(n.into(), d.into()))
    }
}

/// Parses a word of natural-number letters `2.0.1` or `2,0,1`.
pub fn parse_index_word(text: &str) -> PResult<Vec<u32>> {
    if text.trim().is_empty() || text.trim() == "()" {
        return Ok(Vec::new());
    }
    let mut p = Parser { tokens: tokenize(text, ".,")?, pos: 0 };
    let mut out = Vec::new();
    loop {
        let t = p.next();
        match t.tok {
            Tok::Int(n) => {
                out.push(u32::try_from(n).map_err(|_| error_at(t.line, t.column, "letter out of range"))?);
            }
            other => return Err(error_at(t.line, t.column, format!("expected a natural number, found {other}"))),
        }
        if p.is_sym('.') || p.is_sym(',') {
            p.next();
            continue;
        }
        p.expect_end()?;
        return Ok(out);
    }
}

/// Coefficients `f₁ … f_N` of `x + Σ f_n x^{n+1}`, each a series in `e`
/// and `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffeoLiteral {
    coeffs: Vec<Symbolic>,
}

impl DiffeoLiteral {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_rational().is_some())
    }

    pub fn uses_log(&self) -> bool {
        self.coeffs.iter().any(|c| c.uses_log())
    }

    /// Pads with zeros or truncates to order `n`.
    pub fn with_order(&self, n: usize) -> DiffeoLiteral {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, Symbolic::default());
        DiffeoLiteral { coeffs }
    }

    pub fn to_rational(&self) -> Option<Diffeo<Rational>> {
        let c = self.coeffs.iter().map(|c| c.as_rational()).collect::<Option<Vec<_>>>()?;
        Some(Diffeo::new(&rat_int(1), c))
    }

    pub fn to_laurent(&self) -> Option<Diffeo<LaurentSeries<Rational>>> {
        let c = self.coeffs.iter().map(|c| c.to_rational_series()).collect::<Option<Vec<_>>>()?;
        Some(Diffeo::new(&LaurentSeries::constant(rat_int(1)), c))
    }

    /// Coefficients in `ℚ[L]` truncated at `max_degree`.
    pub fn to_log_laurent(&self, max_degree: u32) -> Diffeo<LaurentSeries<TruncatedPoly>> {
        let c = self
            .coeffs
            .iter()
            .map(|c| part_to_poly(c.parts.get(&0).unwrap_or(&Part::default()), max_degree))
            .collect();
        let one = TruncatedPoly::constant(&["L"], max_degree, rat_int(1));
        Diffeo::new(&LaurentSeries::constant(one), c)
    }
}

/// Parses `x + (1/2)*x^2 + …` or `{"coeffs": [...], "order": N}`.
pub fn parse_diffeo(text: &str) -> PResult<DiffeoLiteral> {
    if text.trim_start().starts_with('{') {
        return parse_diffeo_json(text);
    }
    let v = parse_symbolic(text)?;
    let mut coeffs = Vec::new();
    for (&x, p) in &v.parts {
        match x {
            0 => return Err(error_at(1, 1, "a diffeomorphism has no constant term")),
            1 => {
                let lin = Symbolic { parts: [(0, p.clone())].into_iter().collect() };
                if lin.as_rational() != Some(rat_int(1)) {
                    return Err(error_at(1, 1, "a diffeomorphism must be tangent to the identity"));
                }
            }
            _ => {
                let n = x as usize - 1;
                if coeffs.len() < n {
                    coeffs.resize(n, Symbolic::default());
                }
                coeffs[n - 1] = Symbolic { parts: [(0, p.clone())].into_iter().collect() };
            }
        }
    }
    if !v.parts.contains_key(&1) {
        return Err(error_at(1, 1, "a diffeomorphism must be tangent to the identity"));
    }
    Ok(DiffeoLiteral { coeffs })
}

fn parse_diffeo_json(text: &str) -> PResult<DiffeoLiteral> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| error_at(e.line(), e.column(), e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| error_at(1, 1, "expected a JSON object"))?;
    let raw = obj
        .get("coeffs")
        .and_then(|c| c.as_array())
        .ok_or_else(|| error_at(1, 1, "missing `coeffs` array"))?;
    let mut coeffs = Vec::with_capacity(raw.len());
    for (i, c) in raw.iter().enumerate() {
        let s = match c {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) if n.is_i64() => n.to_string(),
            _ => return Err(error_at(1, 1, format!("coefficient {} must be a string or integer", i + 1))),
        };
        let v = parse_symbolic(&s).map_err(|e| error_at(1, 1, format!("coefficient {}: {}", i + 1, e)))?;
        if v.uses_x() {
            return Err(error_at(1, 1, format!("coefficient {} involves x", i + 1)));
        }
        coeffs.push(v);
    }
    let lit = DiffeoLiteral { coeffs };
    match obj.get("order") {
        None => Ok(lit),
        Some(o) => {
            let n = o.as_u64().ok_or_else(|| error_at(1, 1, "`order` must be a natural number"))?;
            Ok(lit.with_order(n as usize))
        }
    }
}

/// A parsed value of any kind.
#[derive(Debug, Clone)]
pub enum Parsed {
    Word(WordLiteral),
    Series(Symbolic),
    Diffeo(DiffeoLiteral),
}

pub fn parse_expression(text: &str, kind: Kind) -> PResult<Parsed> {
    match kind {
        Kind::Word => parse_word(text).map(Parsed::Word),
        Kind::Series => parse_series(text).map(Parsed::Series),
        Kind::Diffeo => parse_diffeo(text).map(Parsed::Diffeo),
    }
}
