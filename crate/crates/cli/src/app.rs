//! Argument parsing and subcommand dispatch.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qshalg::rings::DEFAULT_X_DEGREE;

use crate::doc::{emit, Format, ResultDocument};
use crate::error::CliError;
use crate::parse::{parse_diffeo, parse_index_word, parse_rational_literal, parse_series, parse_word, WordLiteral};
use crate::pipelines::{
    run_antipode, run_birkhoff, run_fdb_birkhoff, run_fdb_invert, run_inverse, run_ladder, run_linearize, run_mould,
    run_mzv_demo, run_qsh_product, Algorithm, AlgebraChoice, EpsWindow, MouldExponent,
};

pub const DEFAULT_LADDER_ORDER: usize = 5;
pub const DEFAULT_Z_ORDER: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "qsh", version, about = "Exact quasi-shuffle algebra and Birkhoff decompositions")]
pub struct Cli {
    /// Truncation order (ladder length, diffeomorphism order).
    #[arg(long, global = true, env = "QSH_DEFAULT_ORDER")]
    pub order: Option<usize>,
    /// Accepted ε-exponents LO:HI; generated series are known through ε^HI.
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "LO:HI")]
    pub eps_window: Option<EpsWindow>,
    /// Total-degree bound for polynomial coefficients in x and L.
    #[arg(long, global = true)]
    pub x_degree: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Birkhoff algorithm reported; both are always run and compared.
    #[arg(long, global = true, value_enum, default_value_t = Algorithm::Both)]
    pub algorithm: Algorithm,
    /// Reads further expression arguments from a file, one per line.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasi-shuffle product of two words.
    QshProduct {
        #[arg(long, value_enum, default_value_t)]
        algebra: AlgebraChoice,
        exprs: Vec<String>,
    },
    /// Antipode of a word.
    Antipode {
        #[arg(long, value_enum, default_value_t)]
        algebra: AlgebraChoice,
        exprs: Vec<String>,
    },
    /// Convolution inverse of j on a word.
    Inverse {
        #[arg(long, value_enum, default_value_t)]
        algebra: AlgebraChoice,
        exprs: Vec<String>,
    },
    /// Birkhoff factors of j on a word: WORD letter=SERIES ...
    Birkhoff {
        exprs: Vec<String>,
    },
    /// Composition inverse of a diffeomorphism.
    FdbInvert {
        exprs: Vec<String>,
    },
    /// Birkhoff decomposition of a diffeomorphism with Laurent coefficients.
    FdbBirkhoff {
        exprs: Vec<String>,
    },
    /// Counterterms of the ladder trees t_1 … t_N.
    Ladder,
    /// Regularized linearization with b(x) = b0 + b1 x + …: B0 B1 ...
    Linearize {
        exprs: Vec<String>,
    },
    /// The mould V_d on a word of natural numbers.
    Mould {
        /// Alphabet size.
        #[arg(long, default_value_t = 4)]
        letters: u32,
        /// A natural number or `eps`.
        #[arg(long, default_value = "eps")]
        d: MouldExponent,
        exprs: Vec<String>,
    },
    /// Stuffle over [s;r] letters and the symbolic Birkhoff expansion.
    MzvDemo {
        exprs: Vec<String>,
    },
}

fn gather(cli: &Cli, exprs: &[String]) -> Result<Vec<String>, CliError> {
    let mut all = exprs.to_vec();
    if let Some(path) = &cli.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
        all.extend(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_string),
        );
    }
    Ok(all)
}

fn arity(args: &[String], min: usize, max: usize, usage: &str) -> Result<(), CliError> {
    if args.len() < min || args.len() > max {
        return Err(CliError::parse(format!("expected {usage}, got {} argument(s)", args.len())));
    }
    Ok(())
}

fn with_context<T>(r: Result<T, crate::parse::ParseError>, what: &str) -> Result<T, CliError> {
    r.map_err(|e| CliError::parse(format!("{what}: {e}")))
}

fn symbol_word(text: &str) -> Result<qshalg::qsh::Word<String>, CliError> {
    match with_context(parse_word(text), "word")? {
        WordLiteral::Symbols(w) => Ok(w),
        WordLiteral::Mzv(_) => Err(CliError::parse("expected a word of symbols")),
    }
}

fn mzv_word(text: &str) -> Result<qshalg::qsh::Word<qshalg::qsh::MzvLetter>, CliError> {
    match with_context(parse_word(text), "word")? {
        WordLiteral::Mzv(w) => Ok(w),
        WordLiteral::Symbols(w) if w.is_empty() => Ok(qshalg::qsh::Word::empty()),
        WordLiteral::Symbols(_) => Err(CliError::parse("expected a word of [s;r] letters")),
    }
}

/// Validates the options of `cli`, runs the subcommand and renders its
/// document.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    run_document(cli).map(|doc| emit(&doc, cli.format))
}

pub fn run_document(cli: &Cli) -> Result<ResultDocument, CliError> {
    if cli.order == Some(0) {
        return Err(CliError::parse("--order must be at least 1"));
    }
    let window = cli.eps_window.unwrap_or_default();
    let x_degree = cli.x_degree.unwrap_or(DEFAULT_X_DEGREE);
    let algorithm = cli.algorithm;
    let mut doc = match &cli.command {
        Command::QshProduct { algebra, exprs } => {
            let args = gather(cli, exprs)?;
            arity(&args, 2, 2, "two words")?;
            let u = with_context(parse_word(&args[0]), "first word")?;
            let v = with_context(parse_word(&args[1]), "second word")?;
            run_qsh_product(&u, &v, *algebra)?
        }
        Command::Antipode { algebra, exprs } => {
            let args = gather(cli, exprs)?;
            arity(&args, 1, 1, "one word")?;
            run_antipode(&with_context(parse_word(&args[0]), "word")?, *algebra, algorithm)?
        }
        Command::Inverse { algebra, exprs } => {
            let args = gather(cli, exprs)?;
            arity(&args, 1, 1, "one word")?;
            run_inverse(&with_context(parse_word(&args[0]), "word")?, *algebra, algorithm)?
        }
        Command::Birkhoff { exprs } => {
            let args = gather(cli, exprs)?;
            arity(&args, 2, usize::MAX, "WORD letter=SERIES ...")?;
            let w = symbol_word(&args[0])?;
            let mut values = BTreeMap::new();
            for a in &args[1..] {
                let (name, series) =
                    a.split_once('=').ok_or_else(|| CliError::parse(format!("expected letter=SERIES, found `{a}`")))?;
                let v = with_context(parse_series(series), &format!("value of `{}`", name.trim()))?;
                values.insert(name.trim().to_string(), v);
            }
            run_birkhoff(&w, &values, window, x_degree, algorithm)?
        }
        Command::FdbInvert { exprs } => {
            let args = gather(cli, exprs)?;
            arity(&args, 1, 1, "one diffeomorphism")?;
            let mut f = with_context(parse_diffeo(&args[0]), "diffeomorphism")?;
            if let Some(n) = cli.order {
                f = f.with_order(n);
            }
            if f.order() == 0 {
                return Err(CliError::parse("the diffeomorphism has order 0; pass --order"));
            }
            run_fdb_invert(&f, algorithm)?
        }
        Command::FdbBirkhoff { exprs } => {
            let args = gather(cli, exprs)?;
            arity(&args, 1, 1, "one diffeomorphism")?;
            let mut f = with_context(parse_diffeo(&args[0]), "diffeomorphism")?;
            if let Some(n) = cli.order {
                f = f.with_order(n);
            }
            if f.order() == 0 {
                return Err(CliError::parse("the diffeomorphism has order 0; pass --order"));
            }
            run_fdb_birkhoff(&f, window, algorithm)?
        }
        Command::Ladder => run_ladder(cli.order.unwrap_or(DEFAULT_LADDER_ORDER), window, algorithm)?,
        Command::Linearize { exprs } => {
            let args = gather(cli, exprs)?;
            arity(&args, 1, usize::MAX, "the coefficients b0 b1 ...")?;
            let b = args
                .iter()
                .map(|a| with_context(parse_rational_literal(a), "coefficient of b"))
                .collect::<Result<Vec<_>, _>>()?;
            run_linearize(&b, x_degree, cli.order.unwrap_or(DEFAULT_Z_ORDER), window, algorithm)?
        }
        Command::Mould { letters, d, exprs } => {
            let args = gather(cli, exprs)?;
            arity(&args, 1, 1, "one word of natural numbers")?;
            let w = with_context(parse_index_word(&args[0]), "word")?;
            run_mould(*letters, &w, *d, window, x_degree, algorithm)?
        }
        Command::MzvDemo { exprs } => {
            let args = gather(cli, exprs)?;
            arity(&args, 1, 2, "one or two [s;r] words")?;
            let u = mzv_word(&args[0])?;
            let v = args.get(1).map(|a| mzv_word(a)).transpose()?;
            run_mzv_demo(&u, v.as_ref(), algorithm)?
        }
    };
    if let Some(n) = cli.order {
        doc.provenance("order", n);
    }
    Ok(doc)
}
