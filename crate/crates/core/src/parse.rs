//! Text grammars for polynomials, exponential sums and inline matrices.
//!
//! Polynomials: terms `coeff * x1^e1 * x2^e2 ...` joined by `+`/`-`, with
//! variables `x1..xn` and nonnegative integer exponents.
//!
//! Exponential sums: terms `[+|-] coeff [* x ^ exponent]` where the exponent
//! is a signed decimal or `p/q`, e.g. `47*x^2.53 - 10.3*x^0.9 - 10*x^-3`.

use std::collections::BTreeMap;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::ParseError;
use crate::ksum::KSum;
use crate::system::SparsePolynomial;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::new(self.pos, expected, self.peek())
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    /// Unsigned decimal (optionally with fraction and exponent) or `p/q`.
    fn number(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let value = self
            .decimal()
            .ok_or_else(|| ParseError::new(start, "a number", self.peek()))?;
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.bump();
            self.skip_ws();
            let at = self.pos;
            let den = self.decimal().ok_or_else(|| self.error("a denominator"))?;
            if den == 0 {
                return Err(ParseError::new(at, "a nonzero denominator", Some('0')));
            }
            return Ok(value / den);
        }
        self.pos = save;
        Ok(value)
    }

    fn decimal(&mut self) -> Option<Rational> {
        let int_part = self.digits();
        let mut frac_part = "";
        if self.peek() == Some('.') {
            self.bump();
            frac_part = self.digits();
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let mut mantissa = Integer::from_str(&format!("{int_part}{frac_part}0")).ok()?;
        mantissa /= 10;
        let mut value = Rational::from((mantissa, Integer::from(10).pow(frac_part.len() as u32)));
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.pos;
            self.bump();
            let negative = match self.peek() {
                Some('-') => {
                    self.bump();
                    true
                }
                Some('+') => {
                    self.bump();
                    false
                }
                _ => false,
            };
            let exp = self.digits();
            match exp.parse::<u32>() {
                Ok(e) => {
                    let scale = Rational::from(Integer::from(10).pow(e));
                    if negative {
                        value /= scale;
                    } else {
                        value *= scale;
                    }
                }
                Err(_) => self.pos = save,
            }
        }
        Some(value)
    }

    fn uint(&mut self, expected: &str) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let d = self.digits();
        if d.is_empty() {
            return Err(ParseError::new(start, expected, self.peek()));
        }
        d.parse::<u64>()
            .map_err(|_| ParseError::new(start, "an exponent that fits in 64 bits", None))
    }

    /// Optional leading sign, `true` when negative.
    fn sign(&mut self) -> Option<bool> {
        self.skip_ws();
        match self.peek() {
            Some('+') => {
                self.bump();
                Some(false)
            }
            Some('-') => {
                self.bump();
                Some(true)
            }
            _ => None,
        }
    }
}

/// Parses a decimal, scientific or `p/q` literal with an optional sign.
pub fn parse_real_literal(text: &str) -> Option<Rational> {
    let mut c = Cursor::new(text);
    let negative = c.sign().unwrap_or(false);
    let v = c.number().ok()?;
    if !c.at_end() {
        return None;
    }
    Some(if negative { -v } else { v })
}

/// Parses a polynomial in `x1..xn`, inferring `n` from the largest index used.
pub fn parse_polynomial(text: &str) -> Result<SparsePolynomial, ParseError> {
    let (terms, max_var) = polynomial_terms(text)?;
    Ok(SparsePolynomial::from_terms(
        max_var.max(1),
        terms.into_iter().map(|(e, c)| (pad(e, max_var.max(1)), c)),
    ))
}

/// Parses a polynomial with a fixed number of variables.
pub fn parse_polynomial_in(text: &str, n: usize) -> Result<SparsePolynomial, ParseError> {
    let (terms, max_var) = polynomial_terms(text)?;
    if max_var > n {
        let at = text.find(&format!("x{max_var}")).unwrap_or(0);
        return Err(ParseError::new(
            at,
            format!("a variable among x1..x{n}"),
            Some('x'),
        ));
    }
    Ok(SparsePolynomial::from_terms(
        n,
        terms.into_iter().map(|(e, c)| (pad(e, n), c)),
    ))
}

fn pad(mut e: Vec<u32>, n: usize) -> Vec<u32> {
    e.resize(n, 0);
    e
}

type RawTerms = Vec<(Vec<u32>, Rational)>;

fn polynomial_terms(text: &str) -> Result<(RawTerms, usize), ParseError> {
    let mut c = Cursor::new(text);
    let mut terms = Vec::new();
    let mut max_var = 0usize;
    let mut negative = c.sign().unwrap_or(false);
    loop {
        let (mut exps, mut coeff) = polynomial_term(&mut c, &mut max_var)?;
        if negative {
            coeff = -coeff;
        }
        exps.resize(max_var, 0);
        terms.push((exps, coeff));
        if c.at_end() {
            break;
        }
        negative = c.sign().ok_or_else(|| c.error("'+' or '-'"))?;
    }
    Ok((terms, max_var))
}

fn polynomial_term(
    c: &mut Cursor<'_>,
    max_var: &mut usize,
) -> Result<(Vec<u32>, Rational), ParseError> {
    let mut coeff = Rational::from(1);
    let mut exps: BTreeMap<usize, u64> = BTreeMap::new();
    loop {
        c.skip_ws();
        match c.peek() {
            Some('x') => {
                c.bump();
                let at = c.pos;
                let index = c.uint("a variable index")?;
                if index == 0 {
                    return Err(ParseError::new(
                        at,
                        "a variable index of at least 1",
                        Some('0'),
                    ));
                }
                let e = if c.eat('^') {
                    c.skip_ws();
                    if c.peek() == Some('-') {
                        return Err(c.error("a nonnegative integer exponent"));
                    }
                    c.uint("a nonnegative integer exponent")?
                } else {
                    1
                };
                *exps.entry(index as usize).or_insert(0) += e;
                *max_var = (*max_var).max(index as usize);
            }
            Some(ch) if ch.is_ascii_digit() || ch == '.' => {
                coeff *= c.number()?;
            }
            _ => return Err(c.error("a coefficient or a variable x<i>")),
        }
        if !c.eat('*') {
            break;
        }
    }
    let mut out = vec![0u32; *max_var];
    for (i, e) in exps {
        out[i - 1] =
            u32::try_from(e).map_err(|_| ParseError::new(c.pos, "an exponent below 2^32", None))?;
    }
    Ok((out, coeff))
}

/// Parses a univariate exponential sum in the variable `x`.
pub fn parse_ksum(text: &str) -> Result<KSum, ParseError> {
    let mut c = Cursor::new(text);
    let mut terms = Vec::new();
    let mut negative = c.sign().unwrap_or(false);
    loop {
        let (exp, mut coeff) = ksum_term(&mut c)?;
        if negative {
            coeff = -coeff;
        }
        terms.push((exp, coeff));
        if c.at_end() {
            break;
        }
        negative = c.sign().ok_or_else(|| c.error("'+' or '-'"))?;
    }
    Ok(KSum::new(terms))
}

fn ksum_term(c: &mut Cursor<'_>) -> Result<(Rational, Rational), ParseError> {
    c.skip_ws();
    let coeff = match c.peek() {
        Some('x') => Rational::from(1),
        Some(ch) if ch.is_ascii_digit() || ch == '.' => {
            let v = c.number()?;
            if !c.eat('*') {
                return Ok((Rational::new(), v));
            }
            v
        }
        _ => return Err(c.error("a coefficient or 'x'")),
    };
    c.skip_ws();
    if c.peek() != Some('x') {
        return Err(c.error("'x'"));
    }
    c.bump();
    if !c.eat('^') {
        return Ok((Rational::from(1), coeff));
    }
    let paren = c.eat('(');
    let negative = c.sign().unwrap_or(false);
    let e = c.number()?;
    if paren && !c.eat(')') {
        return Err(c.error("')'"));
    }
    Ok((if negative { -e } else { e }, coeff))
}

/// Parses an inline integer matrix: rows separated by `;` or newlines,
/// entries by whitespace or commas.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<Integer>>, ParseError> {
    let mut rows = Vec::new();
    let mut offset = 0usize;
    for line in text.split([';', '\n']) {
        let mut row = Vec::new();
        let mut local = 0usize;
        for tok in line.split(|ch: char| ch.is_whitespace() || ch == ',') {
            if tok.is_empty() {
                local += 1;
                continue;
            }
            let at = offset + line[local..].find(tok).map_or(local, |i| i + local);
            let v = Integer::from_str(tok)
                .map_err(|_| ParseError::new(at, "an integer entry", tok.chars().next()))?;
            row.push(v);
            local = at - offset + tok.len();
        }
        if !row.is_empty() {
            rows.push(row);
        }
        offset += line.len() + 1;
    }
    if rows.is_empty() {
        return Err(ParseError::new(
            0,
            "at least one matrix row",
            text.chars().next(),
        ));
    }
    Ok(rows)
}
