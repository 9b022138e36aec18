//! Text grammar for polynomials, shared by the univariate and multivariate
//! parsers and the CLI.
//!
//! A polynomial is a sequence of terms joined by `+` or `-`. A term is a
//! decimal coefficient, a monomial, or `coeff*monomial`; a monomial is a
//! product of variables with optional `^k` exponents, `*` being optional
//! between factors. Whitespace is ignored. Variables are matched greedily
//! against the declared names, so `xy` reads as `x*y` when `x` and `y` are
//! declared.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {position}: expected {expected}")]
pub struct GrammarError {
    /// Byte offset into the input.
    pub position: usize,
    pub expected: String,
}

/// One parsed term with its coefficient already reduced modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedTerm {
    pub coeff: u64,
    pub exponents: Vec<u32>,
    /// Byte range of the term in the input, sign excluded.
    pub span: (usize, usize),
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, expected: &str) -> Result<T, GrammarError> {
        Err(GrammarError { position: self.pos, expected: expected.to_string() })
    }

    /// Decimal digits; returns `(value mod modulus, value as u64 if it fits)`.
    fn number(&mut self, modulus: u64) -> Option<(u64, Option<u64>)> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        let mut reduced: u128 = 0;
        let mut exact: Option<u64> = Some(0);
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            let d = u64::from(bytes[self.pos] - b'0');
            reduced = (reduced * 10 + u128::from(d)) % u128::from(modulus);
            exact = exact.and_then(|e| e.checked_mul(10)).and_then(|e| e.checked_add(d));
            self.pos += 1;
        }
        (self.pos > start).then_some((reduced as u64, exact))
    }

    /// Checks that a variable follows without consuming it.
    fn expect_variable(&mut self, vars: &[String]) -> Result<(), GrammarError> {
        let save = self.pos;
        if self.variable(vars).is_none() {
            return self.err("variable");
        }
        self.pos = save;
        Ok(())
    }

    fn variable(&mut self, vars: &[String]) -> Option<usize> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let best = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty() && rest.starts_with(v.as_str()))
            .max_by_key(|(_, v)| v.len())?;
        self.pos += best.1.len();
        Some(best.0)
    }
}

/// Parses `text` into terms over the given variables, reducing coefficients
/// modulo `p`. Terms are returned in input order; equal monomials are not
/// merged.
pub fn parse_terms(text: &str, vars: &[String], p: u64) -> Result<Vec<ParsedTerm>, GrammarError> {
    let mut cur = Cursor { text, pos: 0 };
    let mut terms = Vec::new();
    let mut negative = false;
    if cur.eat('-') {
        negative = true;
    } else {
        cur.eat('+');
    }
    loop {
        cur.skip_ws();
        let start = cur.pos;
        let mut exponents = vec![0u32; vars.len()];
        let coeff = cur.number(p).map(|(c, _)| c);
        let mut saw_factor = false;
        if coeff.is_some() && cur.eat('*') {
            cur.expect_variable(vars)?;
        }
        loop {
            let before = cur.pos;
            match cur.variable(vars) {
                Some(i) => {
                    let mut k = 1u64;
                    if cur.eat('^') {
                        match cur.number(u64::MAX) {
                            Some((_, Some(e))) if e >= 1 && e <= u64::from(u32::MAX) => k = e,
                            _ => return cur.err("exponent k >= 1"),
                        }
                    }
                    let slot = &mut exponents[i];
                    *slot = slot.checked_add(k as u32).ok_or(GrammarError { position: before, expected: "smaller exponent".into() })?;
                    saw_factor = true;
                    if cur.eat('*') {
                        cur.expect_variable(vars)?;
                    }
                }
                None => {
                    cur.pos = before;
                    break;
                }
            }
        }
        if coeff.is_none() && !saw_factor {
            return cur.err(if vars.is_empty() { "coefficient" } else { "coefficient or variable" });
        }
        let mut c = coeff.unwrap_or(1 % p);
        if negative {
            c = (p - c) % p;
        }
        terms.push(ParsedTerm { coeff: c, exponents, span: (start, cur.pos) });
        match cur.peek() {
            None => break,
            Some('+') => {
                cur.eat('+');
                negative = false;
            }
            Some('-') => {
                cur.eat('-');
                negative = true;
            }
            Some(_) => return cur.err("'+' or '-'"),
        }
    }
    Ok(terms)
}
