//! Sparse multivariate polynomials and semi-algebraic systems.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::Rational;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::parse::parse_polynomial_in;

/// Polynomial in `n` variables with exact rational coefficients.
///
/// Terms are keyed by exponent vector; zero coefficients are never stored,
/// so the zero polynomial is the one with no terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    n: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl SparsePolynomial {
    pub fn zero(n: usize) -> Self {
        SparsePolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: impl Into<Rational>) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn monomial(exponent: Vec<u32>, c: impl Into<Rational>) -> Self {
        let n = exponent.len();
        Self::from_terms(n, [(exponent, c.into())])
    }

    /// The variable `x_{i+1}` (zero-based `i`).
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    /// Sums like terms and drops zeros.
    ///
    /// # Panics
    /// If an exponent vector does not have length `n`.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = SparsePolynomial::zero(n);
        for (e, c) in terms {
            assert_eq!(
                e.len(),
                n,
                "exponent vector length differs from the number of variables"
            );
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: &[u32]) -> Option<&Rational> {
        self.terms.get(exponent)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn support(&self) -> impl Iterator<Item = &[u32]> {
        self.terms.keys().map(Vec::as_slice)
    }

    /// Largest coordinate sum over the support; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u64 {
        self.support()
            .map(|e| e.iter().map(|&x| u64::from(x)).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.n, 1);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Embeds into `m >= n` variables, shifting variable indices by `offset`.
    pub fn embed(&self, m: usize, offset: usize) -> Self {
        assert!(offset + self.n <= m);
        Self::from_terms(
            m,
            self.terms.iter().map(|(e, c)| {
                let mut big = vec![0; m];
                big[offset..offset + self.n].copy_from_slice(e);
                (big, c.clone())
            }),
        )
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.n);
        let mut acc = Rational::new();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    t *= Rational::from(xi.pow(ei));
                }
            }
            acc += t;
        }
        acc
    }
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        self + &(-rhs)
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        SparsePolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), Rational::from(-c)))
                .collect(),
        }
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.n, rhs.n);
        let mut out = SparsePolynomial::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, Rational::from(ca * cb));
            }
        }
        out
    }
}

/// Writes the polynomial in the grammar accepted by the parser, terms in
/// descending exponent order.
impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = *c < 0;
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = Rational::from(c.abs_ref());
            let is_const = e.iter().all(|&x| x == 0);
            let mut first = true;
            if abs != 1 || is_const {
                write!(f, "{abs}")?;
                first = false;
            }
            for (j, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{}", j + 1)?;
                if x > 1 {
                    write!(f, "^{x}")?;
                }
            }
        }
        Ok(())
    }
}

/// Equations `f_i = 0` and strict inequalities `g_j > 0` in `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseSystem {
    n: usize,
    equations: Vec<SparsePolynomial>,
    inequalities: Vec<SparsePolynomial>,
}

impl SparseSystem {
    pub fn new(
        n: usize,
        equations: Vec<SparsePolynomial>,
        inequalities: Vec<SparsePolynomial>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid(
                "a system needs at least one variable".into(),
            ));
        }
        if equations.is_empty() && inequalities.is_empty() {
            return Err(Error::EmptySystem);
        }
        if let Some(bad) = equations.iter().chain(&inequalities).find(|f| f.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.n(),
            });
        }
        Ok(SparseSystem {
            n,
            equations,
            inequalities,
        })
    }

    /// Reads `{"n": 2, "equations": ["x1^5 + x2^3 - 1"], "inequalities": []}`.
    /// `n` defaults to the largest variable index used.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Invalid("system must be a JSON object".into()))?;
        let strings = |key: &str| -> Result<Vec<String>> {
            match obj.get(key) {
                None | Some(Value::Null) => Ok(Vec::new()),
                Some(Value::Array(items)) => items
                    .iter()
                    .map(|s| {
                        s.as_str()
                            .map(str::to_owned)
                            .ok_or_else(|| Error::Invalid(format!("\"{key}\" must hold strings")))
                    })
                    .collect(),
                Some(_) => Err(Error::Invalid(format!("\"{key}\" must be an array"))),
            }
        };
        let eqs = strings("equations")?;
        let ineqs = strings("inequalities")?;
        let n = match obj.get("n") {
            Some(v) => v
                .as_u64()
                .and_then(|n| usize::try_from(n).ok())
                .ok_or_else(|| Error::Invalid("\"n\" must be a positive integer".into()))?,
            None => eqs
                .iter()
                .chain(&ineqs)
                .map(|s| max_var_index(s))
                .max()
                .unwrap_or(0)
                .max(1),
        };
        let parse_all = |v: &[String]| -> Result<Vec<SparsePolynomial>> {
            v.iter()
                .map(|s| parse_polynomial_in(s, n).map_err(Error::from))
                .collect()
        };
        SparseSystem::new(n, parse_all(&eqs)?, parse_all(&ineqs)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn equations(&self) -> &[SparsePolynomial] {
        &self.equations
    }

    pub fn inequalities(&self) -> &[SparsePolynomial] {
        &self.inequalities
    }

    /// Number of equations.
    pub fn p(&self) -> usize {
        self.equations.len()
    }

    /// Number of strict inequalities.
    pub fn s(&self) -> usize {
        self.inequalities.len()
    }

    pub fn polynomials(&self) -> impl Iterator<Item = &SparsePolynomial> {
        self.equations.iter().chain(&self.inequalities)
    }

    /// Distinct exponent vectors over all polynomials; a constant term counts as the origin.
    pub fn distinct_monomials(&self) -> BTreeSet<Vec<u32>> {
        self.polynomials()
            .flat_map(|f| f.support().map(<[u32]>::to_vec))
            .collect()
    }

    pub fn max_total_degree(&self) -> u64 {
        self.polynomials()
            .map(SparsePolynomial::total_degree)
            .max()
            .unwrap_or(0)
    }
}

fn max_var_index(s: &str) -> usize {
    let bytes = s.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(v) = s[start..j].parse::<usize>() {
                best = best.max(v);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}
