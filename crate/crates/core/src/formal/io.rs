//! Plain-text series format: one term per line,
//! `re im : a1 a2 b1 b2 m l` in the `z` basis, `#` starts a comment.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::series::{FormalSeries, Monomial};
use crate::error::{Error, Result};

/// Serializes in canonical (graded-lex) order.
pub fn write_series(s: &FormalSeries) -> String {
    let mut out = String::new();
    for (m, c) in s.terms() {
        let _ = writeln!(
            out,
            "{:e} {:e} : {} {} {} {} {} {}",
            c.re, c.im, m.alpha[0], m.alpha[1], m.beta[0], m.beta[1], m.eps, m.hbar
        );
    }
    out
}

pub fn parse_series(text: &str) -> Result<FormalSeries> {
    let mut s = FormalSeries::zero();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| Error::Parse {
            line: idx + 1,
            message: message.to_string(),
        };
        let (coef, exps) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let coef: Vec<f64> = coef
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err("bad coefficient"))?;
        let exps: Vec<u32> = exps
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err("bad exponent"))?;
        let [re, im] = coef[..] else {
            return Err(err("expected `re im` before ':'"));
        };
        let [a1, a2, b1, b2, m, l] = exps[..] else {
            return Err(err("expected six exponents after ':'"));
        };
        s.add_term(Monomial::new([a1, a2], [b1, b2], m, l), Complex64::new(re, im));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let s = FormalSeries::from_terms([
            (Monomial::new([2, 0], [0, 1], 0, 0), Complex64::new(0.125, 0.0)),
            (Monomial::new([1, 0], [1, 0], 1, 0), Complex64::new(0.5, -1e-20)),
            (Monomial::new([0, 0], [0, 0], 0, 2), Complex64::new(-3.25, 7.0)),
        ]);
        let text = write_series(&s);
        assert_eq!(parse_series(&text).unwrap(), s);
        // canonical order: lowest degree first
        assert!(text.lines().next().unwrap().ends_with(": 1 0 1 0 1 0"));
    }

    #[test]
    fn comments_and_errors() {
        let s = parse_series("# header\n1 0 : 1 0 0 0 0 0  # z1\n\n").unwrap();
        assert_eq!(s.len(), 1);
        assert!(matches!(parse_series("1 0 1 0 0 0 0 0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_series("#\n1 : 1 0 0 0 0 0"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_series("1 0 : 1 0 0 0 0").is_err());
    }
}
