//! Certified approximation of the positive root of a one-alternation k-sum.
//!
//! The sum is normalized to a strictly increasing `g(y)` (see
//! [`crate::ksum::normalize`]). A bracket `g(lo) < 0 < g(hi)` is then shrunk
//! in two phases:
//!
//! 1. geometric bisection (`mid = sqrt(lo * hi)`, i.e. bisection in `log y`)
//!    until the relative width is at most `1/(8γ)`;
//! 2. safeguarded Newton. Each step evaluates `g` and `g'` at `t`, moves to
//!    `t - Δ`, and probes `t - 2Δ`, which lies on the other side of the root
//!    once convergence is quadratic. Both points tighten the bracket.
//!    Steps leaving the bracket, or failing to halve it, fall back to one
//!    geometric bisection.
//!
//! All signs come from directed-rounding enclosures. A sign that cannot be
//! decided at the current precision restarts the solve at twice the bits.
//!
//! The iteration budget asserted by [`SolveRequest::budget_check`] is
//! `BUDGET_CONSTANT * k * (⌈log2 d⌉ + ⌈log2 log2(R/ε)⌉ + 1)` oracle calls,
//! where an oracle call is one power `y^r` of one term.

use std::cmp::Ordering;

use rug::float::Round;
use rug::ops::{AssignRound, Pow, SubAssignRound};
use rug::{Float, Integer, Rational};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::json::ball_numbers;
use crate::ksum::{gamma_bound, normalize, Enclosure, KSum, NormalizationRecord};
use crate::numeric::{ceil_log2, pow_uint};

/// The constant `C` of the oracle-call budget
/// `C k (log2 d + log2 log2(R/ε) + 1)`. The measured worst case over the
/// planted-root and binomial suites is about 2.4.
pub const BUDGET_CONSTANT: u64 = 8;

/// Default precision floor in bits.
pub const MIN_PRECISION: u32 = 128;

/// Highest precision tried, as a multiple of the starting precision.
pub const PRECISION_CAP_FACTOR: u32 = 16;

const MAX_ITERATIONS: u32 = 100_000;

#[derive(Debug, Clone)]
pub struct SolveRequest {
    pub f: KSum,
    /// Right end of the search interval `(0, R)`.
    pub r: Rational,
    /// Absolute accuracy of the returned value.
    pub epsilon: Rational,
    /// Fail with [`Error::BudgetExceeded`] when the oracle-call budget is exceeded.
    pub budget_check: bool,
    /// Overrides the starting working precision.
    pub precision_bits: Option<u32>,
}

impl SolveRequest {
    pub fn new(f: KSum, r: impl Into<Rational>, epsilon: impl Into<Rational>) -> Self {
        SolveRequest {
            f,
            r: r.into(),
            epsilon: epsilon.into(),
            budget_check: false,
            precision_bits: None,
        }
    }

    pub fn with_budget_check(mut self) -> Self {
        self.budget_check = true;
        self
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = Some(bits);
        self
    }
}

/// An interval `[value - radius, value + radius]` containing the root.
#[derive(Debug, Clone)]
pub struct RootApprox {
    pub value: Float,
    pub radius: Float,
    /// The root was hit exactly (radius 0).
    pub exact: bool,
    /// The root lies in `(0, ε/2]` and is reported as `ε/2 ± ε/2`.
    pub below_epsilon: bool,
    pub bisection_steps: u32,
    pub newton_steps: u32,
    /// Evaluations of `g` and of `g'`, counted separately.
    pub evaluations: u64,
    /// Term powers computed.
    pub oracle_calls: u64,
    pub precision_bits: u32,
    /// Restarts at higher precision before success.
    pub precision_retries: u32,
    /// Relative bracket width after each Newton step.
    pub newton_widths: Vec<f64>,
}

impl RootApprox {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius.to_f64_round(Round::Up)
    }

    pub fn lower(&self) -> Float {
        Float::with_val_round(
            self.value.prec() + 8,
            &self.value - &self.radius,
            Round::Down,
        )
        .0
    }

    pub fn upper(&self) -> Float {
        Float::with_val_round(self.value.prec() + 8, &self.value + &self.radius, Round::Up).0
    }

    /// Exact test `|x - value| <= radius`.
    pub fn contains(&self, x: &Rational) -> bool {
        let v = self.value.to_rational().expect("finite");
        let r = self.radius.to_rational().expect("finite");
        Rational::from(x - &v).abs() <= r
    }
}

impl Serialize for RootApprox {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (value, radius) = ball_numbers(&self.value, &self.radius);
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("value", &value)?;
        map.serialize_entry("radius", &radius)?;
        map.serialize_entry("exact", &self.exact)?;
        map.serialize_entry("below_epsilon", &self.below_epsilon)?;
        map.serialize_entry("bisection_steps", &self.bisection_steps)?;
        map.serialize_entry("newton_steps", &self.newton_steps)?;
        map.serialize_entry("evaluations", &self.evaluations)?;
        map.serialize_entry("oracle_calls", &self.oracle_calls)?;
        map.serialize_entry("precision_bits", &self.precision_bits)?;
        map.serialize_entry("precision_retries", &self.precision_retries)?;
        map.end()
    }
}

/// An increasing function on `(0, ∞)` as seen by the engine.
trait Increasing {
    fn enclose(&self, t: &Float, prec: u32) -> Result<Enclosure>;
    fn value_and_slope(&self, t: &Float, prec: u32) -> Result<(Enclosure, Float)>;
    /// Oracle calls per evaluation.
    fn cost(&self) -> u64;
}

struct NormalizedSum<'a>(&'a KSum);

impl Increasing for NormalizedSum<'_> {
    fn enclose(&self, t: &Float, prec: u32) -> Result<Enclosure> {
        self.0.enclose(t, prec)
    }

    fn value_and_slope(&self, t: &Float, prec: u32) -> Result<(Enclosure, Float)> {
        self.0.value_and_slope(t, prec)
    }

    fn cost(&self) -> u64 {
        self.0.len() as u64
    }
}

/// `x^n - c` with exact rational `c > 0`.
struct PowerMinus {
    n: u64,
    c: Rational,
}

impl Increasing for PowerMinus {
    fn enclose(&self, t: &Float, prec: u32) -> Result<Enclosure> {
        let mut lo = pow_uint(t, self.n, prec, Round::Down);
        let mut hi = pow_uint(t, self.n, prec, Round::Up);
        lo.sub_assign_round(
            &Float::with_val_round(prec, &self.c, Round::Up).0,
            Round::Down,
        );
        hi.sub_assign_round(
            &Float::with_val_round(prec, &self.c, Round::Down).0,
            Round::Up,
        );
        Ok(Enclosure { lo, hi })
    }

    fn value_and_slope(&self, t: &Float, prec: u32) -> Result<(Enclosure, Float)> {
        let e = self.enclose(t, prec)?;
        let mut slope = pow_uint(t, self.n - 1, prec, Round::Nearest);
        slope *= self.n;
        Ok((e, slope))
    }

    fn cost(&self) -> u64 {
        0
    }
}

#[derive(Debug, Default, Clone)]
struct Stats {
    bisection_steps: u32,
    newton_steps: u32,
    evaluations: u64,
    oracle_calls: u64,
    newton_widths: Vec<f64>,
}

enum Outcome {
    Bracket(Float, Float),
    Exact(Float),
}

enum Failure {
    NeedPrecision,
    Fatal(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Fatal(e)
    }
}

fn relative_width(lo: &Float, hi: &Float) -> Float {
    let mut w = Float::with_val(64, hi - lo);
    w /= lo;
    w
}

fn geometric_mid(lo: &Float, hi: &Float, prec: u32) -> Option<Float> {
    let mut m = Float::with_val(prec, lo * hi);
    m.sqrt_mut();
    (m > *lo && m < *hi).then_some(m)
}

struct Engine<'a, F: Increasing> {
    f: &'a F,
    prec: u32,
    stats: &'a mut Stats,
}

impl<F: Increasing> Engine<'_, F> {
    fn sign(&mut self, t: &Float) -> Result<Option<Ordering>> {
        self.stats.evaluations += 1;
        self.stats.oracle_calls += self.f.cost();
        Ok(self.f.enclose(t, self.prec)?.sign())
    }

    /// Brackets a root near `t` whose sign could not be decided.
    fn resolve_near(
        &mut self,
        t: &Float,
        lo: &Float,
        hi: &Float,
        tol: &Float,
    ) -> Result<Outcome, Failure> {
        let mut delta = Float::with_val(64, tol);
        delta /= 4u32;
        let mut a = Float::with_val(self.prec, 1u32);
        a -= &delta;
        a *= t;
        let mut b = Float::with_val(self.prec, 1u32);
        b += &delta;
        b *= t;
        let a = if a < *lo { lo.clone() } else { a };
        let b = if b > *hi { hi.clone() } else { b };
        if a >= *t || b <= *t {
            return Err(Failure::NeedPrecision);
        }
        let sa = self.sign(&a)?;
        let sb = self.sign(&b)?;
        match (sa, sb) {
            (Some(Ordering::Less), Some(Ordering::Greater)) => Ok(Outcome::Bracket(a, b)),
            (Some(Ordering::Equal), _) => Ok(Outcome::Exact(a)),
            (_, Some(Ordering::Equal)) => Ok(Outcome::Exact(b)),
            _ => Err(Failure::NeedPrecision),
        }
    }

    /// Shrinks `g(lo) < 0 < g(hi)` to relative width `tol`.
    fn run(
        &mut self,
        mut lo: Float,
        mut hi: Float,
        gamma: &Integer,
        tol: &Float,
    ) -> Result<Outcome, Failure> {
        let mut switch = Float::with_val(64, gamma);
        switch *= 8u32;
        switch.recip_mut();

        let mut iterations = 0u32;
        while relative_width(&lo, &hi) > switch && relative_width(&lo, &hi) > *tol {
            iterations += 1;
            if iterations > MAX_ITERATIONS {
                return Err(Failure::NeedPrecision);
            }
            let mid = geometric_mid(&lo, &hi, self.prec).ok_or(Failure::NeedPrecision)?;
            self.stats.bisection_steps += 1;
            match self.sign(&mid)? {
                Some(Ordering::Less) => lo = mid,
                Some(Ordering::Greater) => hi = mid,
                Some(Ordering::Equal) => return Ok(Outcome::Exact(mid)),
                None => return self.resolve_near(&mid, &lo, &hi, tol),
            }
        }

        let mut t = match geometric_mid(&lo, &hi, self.prec) {
            Some(m) => m,
            None if relative_width(&lo, &hi) <= *tol => return Ok(Outcome::Bracket(lo, hi)),
            None => return Err(Failure::NeedPrecision),
        };
        while relative_width(&lo, &hi) > *tol {
            iterations += 1;
            if iterations > MAX_ITERATIONS {
                return Err(Failure::NeedPrecision);
            }
            let before = relative_width(&lo, &hi);
            self.stats.newton_steps += 1;
            self.stats.evaluations += 2;
            self.stats.oracle_calls += self.f.cost();
            let (enc, slope) = self.f.value_and_slope(&t, self.prec)?;
            let side = match enc.sign() {
                Some(Ordering::Less) => {
                    lo = t.clone();
                    Ordering::Less
                }
                Some(Ordering::Greater) => {
                    hi = t.clone();
                    Ordering::Greater
                }
                Some(Ordering::Equal) => return Ok(Outcome::Exact(t)),
                None => return self.resolve_near(&t, &lo, &hi, tol),
            };
            if relative_width(&lo, &hi) <= *tol {
                self.stats
                    .newton_widths
                    .push(relative_width(&lo, &hi).to_f64());
                break;
            }

            let mut delta = enc.midpoint();
            delta /= &slope;
            let next = Float::with_val(self.prec, &t - &delta);
            let mut accepted = slope > 0 && next > lo && next < hi;
            if accepted {
                t = next;
                let probe = Float::with_val(self.prec, &t - &delta);
                if probe > lo && probe < hi {
                    match self.sign(&probe)? {
                        Some(Ordering::Less) => lo = probe.clone(),
                        Some(Ordering::Greater) => hi = probe.clone(),
                        Some(Ordering::Equal) => return Ok(Outcome::Exact(probe)),
                        None => return self.resolve_near(&probe, &lo, &hi, tol),
                    }
                    // The probe did not cross the root: the root lies beyond it.
                    let crossed = if side == Ordering::Less {
                        hi == probe
                    } else {
                        lo == probe
                    };
                    if !crossed {
                        t = probe;
                    }
                }
                // Too little progress for Newton's regime: bisect instead.
                let mut half = before.clone();
                half /= 2u32;
                if relative_width(&lo, &hi) > half {
                    accepted = false;
                }
            }
            if !accepted || !(t > lo && t < hi) {
                t = geometric_mid(&lo, &hi, self.prec).ok_or(Failure::NeedPrecision)?;
            }
            self.stats
                .newton_widths
                .push(relative_width(&lo, &hi).to_f64());
        }
        Ok(Outcome::Bracket(lo, hi))
    }
}

fn validate_interval(r: &Rational, epsilon: &Rational) -> Result<()> {
    if *r <= 0 {
        return Err(Error::Invalid(format!("R must be positive, got {r}")));
    }
    if *epsilon <= 0 {
        return Err(Error::Invalid(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if *epsilon >= *r {
        return Err(Error::Invalid("epsilon must be smaller than R".into()));
    }
    Ok(())
}

fn starting_precision(r: &Rational, epsilon: &Rational, requested: Option<u32>) -> u32 {
    requested.unwrap_or_else(|| {
        let ratio = Float::with_val(64, r) / Float::with_val(64, epsilon);
        MIN_PRECISION.max(4 * ratio.log2().to_f64().max(1.0).ceil() as u32)
    })
}

/// The oracle-call budget for a request.
pub fn oracle_budget(f: &KSum, r: &Rational, epsilon: &Rational) -> u64 {
    let d = f.degree().to_f64().max(2.0);
    let ratio = (Float::with_val(64, r) / Float::with_val(64, epsilon))
        .log2()
        .to_f64()
        .max(2.0);
    BUDGET_CONSTANT * f.len() as u64 * (u64::from(ceil_log2(d)) + u64::from(ceil_log2(ratio)) + 1)
}

/// Number of roots (0 or 1) of `f` in `(0, R)`.
pub fn count_roots(f: &KSum, r: &Rational) -> Result<usize> {
    if *r <= 0 {
        return Err(Error::Invalid(format!("R must be positive, got {r}")));
    }
    let alternations = f.sign_alternations();
    if alternations > 1 {
        return Err(Error::TooManyAlternations(alternations));
    }
    if alternations == 0 {
        return Ok(0);
    }
    let (g, rec) = normalize(f)?;
    let mut prec = MIN_PRECISION;
    while prec <= MIN_PRECISION * PRECISION_CAP_FACTOR {
        let y_hi = rec.forward(
            &Float::with_val_round(prec, r, Round::Down).0,
            prec,
            Round::Down,
        );
        match g.enclose(&y_hi, prec)?.sign() {
            Some(Ordering::Greater) => return Ok(1),
            Some(_) => return Ok(0),
            None => prec *= 2,
        }
    }
    // A root within 2^-2048 relative of R is treated as lying at R.
    Ok(0)
}

/// Approximates the unique root of a one-alternation k-sum in `(0, R)` to
/// absolute accuracy `ε`. Returns `None` when there is no root there.
pub fn solve_one_alternation(req: &SolveRequest) -> Result<Option<RootApprox>> {
    validate_interval(&req.r, &req.epsilon)?;
    let f = &req.f;
    let alternations = f.sign_alternations();
    if alternations > 1 {
        return Err(Error::TooManyAlternations(alternations));
    }
    if alternations == 0 {
        return Ok(None);
    }
    let (g, rec) = normalize(f)?;
    let gamma = gamma_bound(&g)?;
    let start = starting_precision(&req.r, &req.epsilon, req.precision_bits);
    let cap = start * PRECISION_CAP_FACTOR;
    let mut prec = start;
    let mut retries = 0;
    while prec <= cap {
        match solve_normalized(f, &g, &rec, &gamma, &req.r, &req.epsilon, prec) {
            Ok(mut found) => {
                if let Some(root) = found.as_mut() {
                    root.precision_retries = retries;
                    if req.budget_check {
                        let budget = oracle_budget(f, &req.r, &req.epsilon);
                        if root.oracle_calls > budget {
                            return Err(Error::BudgetExceeded {
                                used: root.oracle_calls,
                                budget,
                            });
                        }
                    }
                }
                return Ok(found);
            }
            Err(Failure::NeedPrecision) => {
                prec *= 2;
                retries += 1;
            }
            Err(Failure::Fatal(e)) => return Err(e),
        }
    }
    Err(Error::PrecisionExhausted { bits: cap })
}

fn below_epsilon_report(epsilon: &Rational, prec: u32, stats: Stats) -> RootApprox {
    let half = Float::with_val(prec, Rational::from(epsilon / 2u32));
    RootApprox {
        value: half.clone(),
        radius: half,
        exact: false,
        below_epsilon: true,
        bisection_steps: stats.bisection_steps,
        newton_steps: stats.newton_steps,
        evaluations: stats.evaluations,
        oracle_calls: stats.oracle_calls,
        precision_bits: prec,
        precision_retries: 0,
        newton_widths: stats.newton_widths,
    }
}

/// Midpoint and outward-rounded radius of `[lo, hi]`.
fn center_radius(lo: &Float, hi: &Float, prec: u32) -> (Float, Float) {
    let mut value = Float::with_val(prec, lo + hi);
    value /= 2u32;
    let mut a = Float::new(prec);
    a.assign_round(&value - lo, Round::Up);
    let mut b = Float::new(prec);
    b.assign_round(hi - &value, Round::Up);
    (value, a.max(&b))
}

#[allow(clippy::too_many_arguments)]
fn solve_normalized(
    f: &KSum,
    g: &KSum,
    rec: &NormalizationRecord,
    gamma: &Integer,
    r: &Rational,
    epsilon: &Rational,
    prec: u32,
) -> Result<Option<RootApprox>, Failure> {
    let mut stats = Stats::default();
    let g_fn = NormalizedSum(g);
    let mut engine = Engine {
        f: &g_fn,
        prec,
        stats: &mut stats,
    };

    let y_hi = rec.forward(
        &Float::with_val_round(prec, r, Round::Down).0,
        prec,
        Round::Down,
    );
    match engine.sign(&y_hi)? {
        Some(Ordering::Greater) => {}
        Some(_) => return Ok(None),
        None => return Err(Failure::NeedPrecision),
    }
    let half_eps = Rational::from(epsilon / 2u32);
    let y_lo = rec.forward(
        &Float::with_val_round(prec, &half_eps, Round::Up).0,
        prec,
        Round::Up,
    );
    match engine.sign(&y_lo)? {
        Some(Ordering::Less) => {}
        Some(_) => return Ok(Some(below_epsilon_report(epsilon, prec, stats))),
        None => return Err(Failure::NeedPrecision),
    }

    // Relative width in y giving absolute width about ε in x = y^(1/S).
    let eps_f = Float::with_val_round(64, epsilon, Round::Down).0;
    let mut tol = Float::with_val(
        64,
        &eps_f * Float::with_val_round(64, &rec.scale, Round::Down).0,
    );
    tol /= Float::with_val_round(64, r, Round::Up).0;
    tol /= 2u32;

    let (mut lo, mut hi) = (y_lo, y_hi);
    let (value, radius, exact) = loop {
        let outcome = engine.run(lo.clone(), hi.clone(), gamma, &tol)?;
        let (x_lo, x_hi, exact) = match &outcome {
            Outcome::Exact(y) => (
                rec.inverse(y, prec, Round::Down),
                rec.inverse(y, prec, Round::Up),
                true,
            ),
            Outcome::Bracket(a, b) => (
                rec.inverse(a, prec, Round::Down),
                rec.inverse(b, prec, Round::Up),
                false,
            ),
        };
        let (value, radius) = center_radius(&x_lo, &x_hi, prec);
        if radius <= *epsilon {
            break (value, radius, exact && x_lo == x_hi);
        }
        match outcome {
            Outcome::Bracket(a, b) => {
                lo = a;
                hi = b;
                tol /= 4u32;
            }
            // y is exact but its root is not representable.
            Outcome::Exact(_) => return Err(Failure::NeedPrecision),
        }
    };

    certify_ksum(f, rec, &value, &radius, 2 * prec)?;
    Ok(Some(RootApprox {
        value,
        radius,
        exact,
        below_epsilon: false,
        bisection_steps: stats.bisection_steps,
        newton_steps: stats.newton_steps,
        evaluations: stats.evaluations,
        oracle_calls: stats.oracle_calls,
        precision_bits: prec,
        precision_retries: 0,
        newton_widths: stats.newton_widths,
    }))
}

/// Checks that `f` changes sign across `value ± radius`.
fn certify_ksum(
    f: &KSum,
    rec: &NormalizationRecord,
    value: &Float,
    radius: &Float,
    prec: u32,
) -> Result<(), Failure> {
    // f = σ x^m g(x^S): below the root σ f < 0, above it σ f > 0.
    let oriented = |e: Enclosure| -> Option<Ordering> {
        let s = e.sign()?;
        Some(if rec.sign_flip { s.reverse() } else { s })
    };
    if *radius == 0 {
        return if f.enclose(value, prec)?.contains_zero() {
            Ok(())
        } else {
            Err(Failure::NeedPrecision)
        };
    }
    let left = Float::with_val(prec, value - radius);
    let right = Float::with_val(prec, value + radius);
    if left <= 0 {
        return Err(Failure::NeedPrecision);
    }
    let sl = oriented(f.enclose(&left, prec)?);
    let sr = oriented(f.enclose(&right, prec)?);
    match (sl, sr) {
        (Some(Ordering::Less | Ordering::Equal), Some(Ordering::Greater | Ordering::Equal)) => {
            Ok(())
        }
        _ => Err(Failure::NeedPrecision),
    }
}

/// Approximates the positive solution of `x^a = c` in `(0, R)` to absolute
/// accuracy `ε`, using only integer powers: `x^(p/q) = c` is solved as
/// `x^|p| = c^(±q)`. Returns `None` when the solution is `>= R`.
pub fn solve_binomial(
    a: &Rational,
    c: &Rational,
    r: &Rational,
    epsilon: &Rational,
    precision_bits: Option<u32>,
) -> Result<Option<RootApprox>> {
    if *c <= 0 {
        return Err(Error::Domain(format!("x^a = c needs c > 0, got {c}")));
    }
    if *a == 0 {
        return Err(Error::Domain("exponent must be nonzero".into()));
    }
    validate_interval(r, epsilon)?;
    let n = a
        .numer()
        .clone()
        .abs()
        .to_u64()
        .ok_or_else(|| Error::Domain("exponent numerator too large".into()))?;
    let q = a
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Domain("exponent denominator too large".into()))?;
    let mut target = Rational::from(c.pow(q));
    if *a < 0 {
        target.recip_mut();
    }
    let n32 = u32::try_from(n).map_err(|_| Error::Domain("exponent numerator too large".into()))?;

    // Exact placement of the root c^(1/a) relative to the interval.
    if target >= Rational::from(r.pow(n32)) {
        return Ok(None);
    }
    let half_eps = Rational::from(epsilon / 2u32);
    let start = starting_precision(r, epsilon, precision_bits);
    if target <= Rational::from((&half_eps).pow(n32)) {
        return Ok(Some(below_epsilon_report(epsilon, start, Stats::default())));
    }

    let h = PowerMinus { n, c: target };
    let gamma = Integer::from(n);
    let mut tol = Float::with_val_round(64, epsilon, Round::Down).0;
    tol /= Float::with_val_round(64, r, Round::Up).0;

    let cap = start * PRECISION_CAP_FACTOR;
    let mut prec = start;
    let mut retries = 0;
    while prec <= cap {
        let mut stats = Stats::default();
        let mut engine = Engine {
            f: &h,
            prec,
            stats: &mut stats,
        };
        let lo = Float::with_val_round(prec, &half_eps, Round::Down).0;
        let hi = Float::with_val_round(prec, r, Round::Up).0;
        let result = engine.run(lo, hi, &gamma, &tol).and_then(|outcome| {
            let (value, radius, exact) = match outcome {
                Outcome::Exact(x) => (x, Float::new(prec), true),
                Outcome::Bracket(a, b) => {
                    let (v, rad) = center_radius(&a, &b, prec);
                    (v, rad, false)
                }
            };
            if radius > *epsilon {
                return Err(Failure::NeedPrecision);
            }
            certify_power(&h, &value, &radius, 2 * prec)?;
            Ok((value, radius, exact))
        });
        match result {
            Ok((value, radius, exact)) => {
                return Ok(Some(RootApprox {
                    value,
                    radius,
                    exact,
                    below_epsilon: false,
                    bisection_steps: stats.bisection_steps,
                    newton_steps: stats.newton_steps,
                    evaluations: stats.evaluations,
                    oracle_calls: stats.oracle_calls,
                    precision_bits: prec,
                    precision_retries: retries,
                    newton_widths: stats.newton_widths,
                }))
            }
            Err(Failure::NeedPrecision) => {
                prec *= 2;
                retries += 1;
            }
            Err(Failure::Fatal(e)) => return Err(e),
        }
    }
    Err(Error::PrecisionExhausted { bits: cap })
}

/// `left^n <= c <= right^n` with directed rounding against the exact `c`.
fn certify_power(h: &PowerMinus, value: &Float, radius: &Float, prec: u32) -> Result<(), Failure> {
    let left = Float::with_val_round(prec, value - radius, Round::Down).0;
    let right = Float::with_val_round(prec, value + radius, Round::Up).0;
    let upper_left = pow_uint(&left, h.n, prec, Round::Up)
        .to_rational()
        .expect("finite");
    let lower_right = pow_uint(&right, h.n, prec, Round::Down)
        .to_rational()
        .expect("finite");
    if upper_left <= h.c && h.c <= lower_right {
        Ok(())
    } else {
        Err(Failure::NeedPrecision)
    }
}
