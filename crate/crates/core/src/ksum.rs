//! Univariate exponential sums `f(x) = Σ c_a x^a` with real exponents.
//!
//! Exponents and coefficients are exact rationals; decimal input such as
//! `x^2.53` is parsed exactly. Evaluation uses MPFR with directed rounding,
//! so every value comes with a guaranteed enclosure.

use std::fmt;

use rug::float::Round;
use rug::ops::{AddAssignRound, MulAssignRound};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::pow_rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub exponent: Rational,
    pub coeff: Rational,
}

/// A finite sum of real powers of `x`, terms sorted by increasing exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSum {
    terms: Vec<Term>,
}

/// Guaranteed enclosure `lo <= f(x) <= hi`.
#[derive(Debug, Clone)]
pub struct Enclosure {
    pub lo: Float,
    pub hi: Float,
}

impl Enclosure {
    /// `Some(sign)` when the enclosure excludes zero or is exactly zero.
    pub fn sign(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        if self.lo > 0 {
            Some(Greater)
        } else if self.hi < 0 {
            Some(Less)
        } else if self.lo == 0 && self.hi == 0 {
            Some(Equal)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn midpoint(&self) -> Float {
        let mut m = Float::with_val(self.lo.prec(), &self.lo + &self.hi);
        m /= 2u32;
        m
    }
}

impl KSum {
    /// Merges equal exponents, drops zero coefficients and sorts.
    pub fn new(terms: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut raw: Vec<(Rational, Rational)> = terms.into_iter().collect();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<Term> = Vec::with_capacity(raw.len());
        for (exponent, coeff) in raw {
            match out.last_mut() {
                Some(last) if last.exponent == exponent => last.coeff += coeff,
                _ => out.push(Term { exponent, coeff }),
            }
        }
        out.retain(|t| t.coeff != 0);
        KSum { terms: out }
    }

    pub fn from_i64(terms: &[(i64, i64)]) -> Self {
        KSum::new(
            terms
                .iter()
                .map(|&(e, c)| (Rational::from(e), Rational::from(c))),
        )
    }

    /// `x^d - c`.
    pub fn binomial(d: impl Into<Rational>, c: impl Into<Rational>) -> Self {
        let c: Rational = c.into();
        KSum::new([(d.into(), Rational::from(1)), (Rational::new(), -c)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether every exponent is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|t| *t.exponent.denom() == 1)
    }

    pub fn min_exponent(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.exponent)
    }

    pub fn max_exponent(&self) -> Option<&Rational> {
        self.terms.last().map(|t| &t.exponent)
    }

    /// `max a - min a` for integral sums; otherwise that spread divided by
    /// `min{1, smallest gap}`. A monomial has degree 0.
    pub fn degree(&self) -> Rational {
        if self.terms.len() < 2 {
            return Rational::new();
        }
        let spread = Rational::from(self.max_exponent().unwrap() - self.min_exponent().unwrap());
        if self.is_integral() {
            return spread;
        }
        let gap = self
            .terms
            .windows(2)
            .map(|w| Rational::from(&w[1].exponent - &w[0].exponent))
            .min()
            .expect("at least two terms");
        spread / gap.min(Rational::from(1))
    }

    /// Adjacent exponent pairs whose coefficients have opposite signs.
    pub fn sign_alternations(&self) -> usize {
        self.terms
            .windows(2)
            .filter(|w| (w[0].coeff < 0) != (w[1].coeff < 0))
            .count()
    }

    pub fn derivative(&self) -> KSum {
        KSum::new(self.terms.iter().filter(|t| t.exponent != 0).map(|t| {
            (
                Rational::from(&t.exponent - 1u32),
                Rational::from(&t.coeff * &t.exponent),
            )
        }))
    }

    /// `c * f`.
    pub fn scale(&self, c: &Rational) -> KSum {
        KSum::new(
            self.terms
                .iter()
                .map(|t| (t.exponent.clone(), Rational::from(&t.coeff * c))),
        )
    }

    /// `x^t * f`.
    pub fn shift(&self, t: &Rational) -> KSum {
        KSum::new(
            self.terms
                .iter()
                .map(|u| (Rational::from(&u.exponent + t), u.coeff.clone())),
        )
    }

    /// `f(x^s)` for `s > 0`.
    pub fn substitute_power(&self, s: &Rational) -> KSum {
        assert!(*s > 0);
        KSum::new(
            self.terms
                .iter()
                .map(|u| (Rational::from(&u.exponent * s), u.coeff.clone())),
        )
    }

    /// Guaranteed bounds on `f(x)` for `x > 0`, computed at `prec` bits.
    pub fn enclose(&self, x: &Float, prec: u32) -> Result<Enclosure> {
        if *x <= 0 || x.is_nan() {
            return Err(Error::Domain(format!(
                "k-sums are evaluated at positive x, got {}",
                x.to_f64()
            )));
        }
        let mut lo = Float::new(prec);
        let mut hi = Float::new(prec);
        for t in &self.terms {
            let (tlo, thi) = term_enclosure(t, x, prec);
            lo.add_assign_round(&tlo, Round::Down);
            hi.add_assign_round(&thi, Round::Up);
        }
        Ok(Enclosure { lo, hi })
    }

    /// `f(x)` to about `prec` bits.
    pub fn evaluate(&self, x: &Float, prec: u32) -> Result<Float> {
        Ok(self.enclose(x, prec + 16)?.midpoint())
    }

    pub fn evaluate_f64(&self, x: f64) -> Result<f64> {
        Ok(self.evaluate(&Float::with_val(64, x), 64)?.to_f64())
    }

    /// `f(x)` together with `f'(x)`, sharing one power per term.
    pub(crate) fn value_and_slope(&self, x: &Float, prec: u32) -> Result<(Enclosure, Float)> {
        if *x <= 0 {
            return Err(Error::Domain("k-sums are evaluated at positive x".into()));
        }
        let mut lo = Float::new(prec);
        let mut hi = Float::new(prec);
        let mut slope = Float::new(prec);
        for t in &self.terms {
            let (tlo, thi) = term_enclosure(t, x, prec);
            lo.add_assign_round(&tlo, Round::Down);
            hi.add_assign_round(&thi, Round::Up);
            if t.exponent != 0 {
                // a c x^a / x
                let mut d = Float::with_val(prec, &tlo + &thi);
                d /= 2u32;
                d *= Float::with_val(prec, &t.exponent);
                d /= x;
                slope += d;
            }
        }
        Ok((Enclosure { lo, hi }, slope))
    }
}

fn term_enclosure(t: &Term, x: &Float, prec: u32) -> (Float, Float) {
    let plo = pow_rational(x, &t.exponent, prec, Round::Down);
    let phi = pow_rational(x, &t.exponent, prec, Round::Up);
    // For c < 0 the smallest product pairs the most negative c with the largest power.
    let (mut lo, mut hi) = if t.coeff > 0 { (plo, phi) } else { (phi, plo) };
    lo.mul_assign_round(
        &Float::with_val_round(prec, &t.coeff, Round::Down).0,
        Round::Down,
    );
    hi.mul_assign_round(
        &Float::with_val_round(prec, &t.coeff, Round::Up).0,
        Round::Up,
    );
    (lo, hi)
}

impl fmt::Display for KSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().rev().enumerate() {
            let negative = t.coeff < 0;
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = Rational::from(t.coeff.abs_ref());
            if t.exponent == 0 {
                write!(f, "{abs}")?;
                continue;
            }
            if abs != 1 {
                write!(f, "{abs}*")?;
            }
            write!(f, "x")?;
            if t.exponent != 1 {
                if *t.exponent.denom() == 1 {
                    write!(f, "^{}", t.exponent)?;
                } else {
                    write!(f, "^({})", t.exponent)?;
                }
            }
        }
        Ok(())
    }
}

/// How a one-alternation sum was brought to normalized form.
///
/// With `σ = ±1`, the normalized sum is `g(y) = σ y^(-m/S) f(y^(1/S))`, so
/// positive roots correspond through `x = y^(1/S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationRecord {
    /// Whether `f` was negated to make the leading coefficient positive.
    pub sign_flip: bool,
    /// Smallest exponent carrying a positive coefficient after the sign fix.
    pub m: Rational,
    /// Largest exponent of `f`.
    pub big_m: Rational,
    /// The power `S` in `y = x^S`.
    pub scale: Rational,
}

impl NormalizationRecord {
    /// `y = x^S`.
    pub fn forward(&self, x: &Float, prec: u32, round: Round) -> Float {
        pow_rational(x, &self.scale, prec, round)
    }

    /// `x = y^(1/S)`.
    pub fn inverse(&self, y: &Float, prec: u32, round: Round) -> Float {
        pow_rational(y, &Rational::from(self.scale.recip_ref()), prec, round)
    }
}

/// Negates, divides by `x^m` and substitutes `x = y^(1/S)` so that the result
/// is strictly increasing on `(0, ∞)`: every positive coefficient sits on an
/// exponent in `[0, 1]` and every negative one on an exponent below 0.
///
/// `S = M - m` when the positive part has more than one term; otherwise the
/// distance from `m` to the nearest negative exponent, which puts that term
/// at `y^-1`.
pub fn normalize(f: &KSum) -> Result<(KSum, NormalizationRecord)> {
    if f.len() < 2 {
        return Err(Error::SingleTerm);
    }
    let alternations = f.sign_alternations();
    if alternations > 1 {
        return Err(Error::TooManyAlternations(alternations));
    }
    let sign_flip = f.terms.last().unwrap().coeff < 0;
    let h = if sign_flip {
        f.scale(&Rational::from(-1))
    } else {
        f.clone()
    };
    let m = h
        .terms
        .iter()
        .find(|t| t.coeff > 0)
        .expect("leading coefficient is positive")
        .exponent
        .clone();
    let big_m = h.max_exponent().unwrap().clone();
    let scale = if big_m > m {
        Rational::from(&big_m - &m)
    } else {
        let below = h
            .terms
            .iter()
            .rev()
            .find(|t| t.coeff < 0)
            .expect("two terms with one sign change");
        Rational::from(&m - &below.exponent)
    };
    let g = KSum::new(
        h.terms
            .iter()
            .map(|t| (Rational::from(&t.exponent - &m) / &scale, t.coeff.clone())),
    );
    Ok((
        g,
        NormalizationRecord {
            sign_flip,
            m,
            big_m,
            scale,
        },
    ))
}

/// Whether `g` has the shape produced by [`normalize`].
pub fn is_normalized(g: &KSum) -> bool {
    g.len() >= 2
        && g.terms.iter().all(|t| {
            if t.coeff > 0 {
                t.exponent >= 0 && t.exponent <= 1
            } else {
                t.exponent < 0
            }
        })
}

/// Per-power constant: `⌈|r|⌉` for `|r| >= 1`, 2 on `(0,1)`, 1 on `(-1,0)`, 0 at 0.
pub fn power_gamma(r: &Rational) -> Integer {
    let abs = Rational::from(r.abs_ref());
    if abs >= 1 {
        abs.ceil().into_numer_denom().0
    } else if *r > 0 {
        Integer::from(2)
    } else if *r < 0 {
        Integer::from(1)
    } else {
        Integer::new()
    }
}

/// A constant `γ >= 1` such that Newton's method on `g` converges
/// quadratically from any `y` within relative distance about `1/(8γ)` of the
/// root: the largest per-term constant, capped by the degree of `g`.
pub fn gamma_bound(g: &KSum) -> Result<Integer> {
    if !is_normalized(g) {
        return Err(Error::NotNormalized(
            "expected positive terms on [0, 1] and negative terms below 0",
        ));
    }
    let per_term = g
        .terms
        .iter()
        .map(|t| power_gamma(&t.exponent))
        .max()
        .unwrap_or_default();
    let degree_cap = g.degree().ceil().into_numer_denom().0.max(Integer::from(1));
    Ok(per_term.min(degree_cap).max(Integer::from(1)))
}
