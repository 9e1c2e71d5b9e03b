//! Positive roots of binomial systems `x^(D_i) + c_i = 0`, `i = 1..n`.
//!
//! With `b = -c > 0` and a Smith form `U D V = Δ`, the substitution
//! `x_j = Π_i y_i^(V_ji)` turns the system into the decoupled equations
//! `y_i^(Δ_ii) = Π_j b_j^(U_ij)`. Each is solved by
//! [`crate::roots1d::solve_binomial`] and mapped back with outward rounding,
//! so every reported coordinate box contains the true root. When the
//! transform entries make the exact targets too large to form, the same map
//! is evaluated on logarithms in interval arithmetic.

use rug::float::Round;
use rug::ops::{AddAssignRound, DivAssignRound, MulAssignRound, Pow};
use rug::{Float, Integer, Rational};
use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json::{ball_numbers, integer_number, parse_rational_value, SCHEMA_VERSION};
use crate::lattice::{determinant, smith_normal_form, IntMatrix};
use crate::numeric::{ceil_log2, pow_rational};
use crate::roots1d::{solve_binomial, MIN_PRECISION};

#[derive(Debug, Clone)]
pub struct BinomialSystem {
    /// Exponent matrix; row `i` is the monomial of equation `i`.
    pub d: IntMatrix,
    pub c: Vec<Rational>,
    /// Wedge radius.
    pub r: Rational,
    /// Per-coordinate absolute accuracy.
    pub epsilon: Rational,
}

impl BinomialSystem {
    pub fn new(d: IntMatrix, c: Vec<Rational>, r: Rational, epsilon: Rational) -> Result<Self> {
        if !d.is_square() {
            return Err(Error::NotSquare {
                rows: d.rows(),
                cols: d.cols(),
            });
        }
        if c.len() != d.rows() {
            return Err(Error::DimensionMismatch {
                expected: d.rows(),
                found: c.len(),
            });
        }
        if (0..d.rows()).any(|i| d.row(i).iter().any(|x| *x < 0)) {
            return Err(Error::Invalid("exponents must be nonnegative".into()));
        }
        if c.iter().any(|x| *x == 0) {
            return Err(Error::Invalid("coefficients must be nonzero".into()));
        }
        if r <= 0 || epsilon <= 0 {
            return Err(Error::Invalid("R and epsilon must be positive".into()));
        }
        Ok(BinomialSystem { d, c, r, epsilon })
    }

    /// Reads `{"D": [[2,1],[1,1]], "c": [-12, -6], "R": 10, "epsilon": 1e-10}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Invalid(format!("missing field \"{k}\"")))
        };
        let rows = field("D")?
            .as_array()
            .ok_or_else(|| Error::Invalid("\"D\" must be an array of rows".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Invalid("\"D\" rows must be arrays".into()))?
                    .iter()
                    .map(|x| match x {
                        Value::Number(n) => n
                            .to_string()
                            .parse::<Integer>()
                            .map_err(|_| Error::Invalid(format!("exponent {n} is not an integer"))),
                        _ => Err(Error::Invalid("exponents must be integers".into())),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let rational = |x: &Value, what: &str| {
            parse_rational_value(x)
                .ok_or_else(|| Error::Invalid(format!("{what} must be a number or \"p/q\"")))
        };
        let c = field("c")?
            .as_array()
            .ok_or_else(|| Error::Invalid("\"c\" must be an array".into()))?
            .iter()
            .map(|x| rational(x, "coefficient"))
            .collect::<Result<Vec<_>>>()?;
        let r = rational(field("R")?, "R")?;
        let epsilon = match v.get("epsilon").or_else(|| v.get("eps")) {
            Some(e) => rational(e, "epsilon")?,
            None => return Err(Error::Invalid("missing field \"epsilon\"".into())),
        };
        BinomialSystem::new(IntMatrix::new(rows)?, c, r, epsilon)
    }

    pub fn n(&self) -> usize {
        self.d.rows()
    }
}

/// Number of roots in `(C*)^n`: `|det D|`, or 0 for a degenerate system.
pub fn complex_root_count(d: &IntMatrix) -> Result<Integer> {
    Ok(determinant(d)?.abs())
}

/// A positive root inside the wedge, coordinate `j` in `coords[j] ± radii[j]`.
#[derive(Debug, Clone)]
pub struct WedgeRoot {
    pub coords: Vec<Float>,
    pub radii: Vec<Float>,
}

impl WedgeRoot {
    pub fn coords_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Float::to_f64).collect()
    }

    /// Exact test that every coordinate of `x` lies in its interval.
    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.coords.len()
            && x.iter()
                .zip(self.coords.iter().zip(&self.radii))
                .all(|(xi, (c, r))| {
                    let c = c.to_rational().expect("finite");
                    Rational::from(xi - &c).abs() <= r.to_rational().expect("finite")
                })
    }
}

impl Serialize for WedgeRoot {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let balls: Vec<_> = self
            .coords
            .iter()
            .zip(&self.radii)
            .map(|(c, r)| ball_numbers(c, r))
            .collect();
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("coords", &balls.iter().map(|b| &b.0).collect::<Vec<_>>())?;
        map.serialize_entry("radii", &balls.iter().map(|b| &b.1).collect::<Vec<_>>())?;
        map.end()
    }
}

#[derive(Debug, Clone)]
pub struct WedgeSolution {
    pub complex_root_count: Integer,
    pub snf_diagonal: Vec<Integer>,
    /// Zero or one root.
    pub roots: Vec<WedgeRoot>,
    /// Some `c_i > 0`, so no root has all coordinates positive.
    pub sign_obstruction: bool,
    /// The positive root exists but lies outside the wedge.
    pub outside_wedge: bool,
    pub precision_bits: u32,
    /// Evaluations spent in the one-dimensional solves.
    pub evaluations: u64,
}

impl Serialize for WedgeSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Ints<'a>(&'a [Integer]);
        impl Serialize for Ints<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for x in self.0 {
                    seq.serialize_element(&integer_number(x))?;
                }
                seq.end()
            }
        }
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("schema", SCHEMA_VERSION)?;
        map.serialize_entry(
            "complex_root_count",
            &integer_number(&self.complex_root_count),
        )?;
        map.serialize_entry("snf_diagonal", &Ints(&self.snf_diagonal))?;
        map.serialize_entry("roots", &self.roots)?;
        map.serialize_entry("sign_obstruction", &self.sign_obstruction)?;
        map.serialize_entry("outside_wedge", &self.outside_wedge)?;
        map.serialize_entry("precision_bits", &self.precision_bits)?;
        map.serialize_entry("evaluations", &self.evaluations)?;
        map.end()
    }
}

fn small_exponent(x: &Integer) -> Result<u32> {
    x.clone()
        .abs()
        .to_u32()
        .ok_or_else(|| Error::Invalid("unimodular transform entry too large".into()))
}

/// `Π_j b_j^(U_ij)`, exact.
fn transformed_target(u: &IntMatrix, b: &[Rational], i: usize) -> Result<Rational> {
    let mut acc = Rational::from(1);
    for (bj, uij) in b.iter().zip(u.row(i)) {
        if *uij == 0 {
            continue;
        }
        let p = Rational::from(bj.pow(small_exponent(uij)?));
        if *uij > 0 {
            acc *= p;
        } else {
            acc /= p;
        }
    }
    Ok(acc)
}

/// The unique root with all coordinates positive when it lies in the wedge
/// `{x >= 0, |x| <= R}`; nothing otherwise.
pub fn solve_wedge(sys: &BinomialSystem, precision_bits: Option<u32>) -> Result<WedgeSolution> {
    let n = sys.n();
    let count = complex_root_count(&sys.d)?;
    if count == 0 {
        return Err(Error::DegenerateSystem);
    }
    let snf = smith_normal_form(&sys.d)?;
    let mut solution = WedgeSolution {
        complex_root_count: count,
        snf_diagonal: snf.diagonal(),
        roots: Vec::new(),
        sign_obstruction: false,
        outside_wedge: false,
        precision_bits: 0,
        evaluations: 0,
    };
    if sys.c.iter().any(|c| *c > 0) {
        solution.sign_obstruction = true;
        return Ok(solution);
    }
    let b: Vec<Rational> = sys.c.iter().map(|c| Rational::from(-c)).collect();
    let ratio = Float::with_val(64, &sys.r) / Float::with_val(64, &sys.epsilon);
    let base = precision_bits
        .unwrap_or_else(|| MIN_PRECISION.max(4 * ratio.log2().to_f64().max(1.0).ceil() as u32));
    let extra = (snf.h_u.max(snf.h_v) / std::f64::consts::LN_2).ceil() as u32;
    let mut prec = base + extra;

    // Exact targets Π b_j^(U_ij) have about Σ|U_ij|·bits(b_j) bits. When that
    // (or the magnitude of the mapped-back powers) is unreasonable, the whole
    // map is evaluated on logarithms instead.
    let target_bits = (0..n)
        .map(|i| {
            snf.u
                .row(i)
                .iter()
                .zip(&b)
                .map(|(u, bj)| u.to_f64().abs() * rational_bits(bj))
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    let v_max = (0..n)
        .flat_map(|j| snf.v.row(j).iter().map(|e| e.to_f64().abs()))
        .fold(0.0, f64::max);
    let exact = target_bits <= EXACT_TARGET_BITS && target_bits * v_max <= EXACT_POWER_BITS;
    let targets = if exact {
        (0..n)
            .map(|i| transformed_target(&snf.u, &b, i))
            .collect::<Result<Vec<_>>>()?
    } else {
        prec += ceil_log2(1.0 + target_bits) + ceil_log2(1.0 + n as f64 * v_max);
        Vec::new()
    };

    // Relative accuracy of each y_i; tightened until every x box is within ε.
    let mut eta =
        Rational::from((1, Integer::from(1) << 64u32)).min(Rational::from(&sys.epsilon / 4u32));
    for _ in 0..16 {
        solution.precision_bits = prec;
        let (x_lo, x_hi) = if exact {
            let (lo, hi, evals) = solve_transformed(&snf.d.diagonal(), &targets, &eta, prec)?;
            solution.evaluations += evals;
            map_back(&snf.v, &lo, &hi, prec)
        } else {
            log_domain_box(&snf.u, &snf.d.diagonal(), &snf.v, &b, prec)
        };
        let mut coords = Vec::with_capacity(n);
        let mut radii = Vec::with_capacity(n);
        let mut worst = Float::new(64);
        for (a, z) in x_lo.iter().zip(&x_hi) {
            let mut c = Float::with_val(prec, a + z);
            c /= 2u32;
            let r = Float::with_val_round(prec, z - &c, Round::Up)
                .0
                .max(&Float::with_val_round(prec, &c - a, Round::Up).0);
            if r > worst {
                worst = Float::with_val_round(64, &r, Round::Up).0;
            }
            coords.push(c);
            radii.push(r);
        }
        if worst > sys.epsilon {
            if exact {
                let shrink = Float::with_val(64, &sys.epsilon) / (worst * 4u32);
                eta *= shrink.to_rational().expect("finite");
            } else {
                prec *= 2;
            }
            continue;
        }
        if !residual_brackets_targets(&sys.d, &b, &x_lo, &x_hi, prec) {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        let norm2: Rational = coords
            .iter()
            .map(|c| c.to_rational().expect("finite").square())
            .sum();
        if norm2 <= Rational::from(sys.r.square_ref()) {
            solution.roots.push(WedgeRoot { coords, radii });
        } else {
            solution.outside_wedge = true;
        }
        return Ok(solution);
    }
    Err(Error::PrecisionExhausted { bits: prec })
}

const EXACT_TARGET_BITS: f64 = 8192.0;
const EXACT_POWER_BITS: f64 = (1u64 << 24) as f64;

fn power_of_two(k: i64) -> Rational {
    let p = Integer::from(1) << k.unsigned_abs() as u32;
    if k >= 0 {
        Rational::from(p)
    } else {
        Rational::from((1, p))
    }
}

fn rational_bits(q: &Rational) -> f64 {
    (q.numer().significant_bits() + q.denom().significant_bits()) as f64
}

/// `[lo, hi] * k` for an integer `k`, rounded outward.
fn scale_interval(lo: &Float, hi: &Float, k: &Integer, prec: u32) -> (Float, Float) {
    let kf = Float::with_val(k.significant_bits().max(1), k);
    let (a, z) = if *k >= 0 { (lo, hi) } else { (hi, lo) };
    let mut a = Float::with_val(prec, a);
    let mut z = Float::with_val(prec, z);
    a.mul_assign_round(&kf, Round::Down);
    z.mul_assign_round(&kf, Round::Up);
    (a, z)
}

/// Enclosures of `x_j = exp(Σ_i V_ji (Σ_k U_ik ln b_k) / Δ_ii)`, all in
/// outward-rounded interval arithmetic.
fn log_domain_box(
    u: &IntMatrix,
    delta: &[Integer],
    v: &IntMatrix,
    b: &[Rational],
    prec: u32,
) -> (Vec<Float>, Vec<Float>) {
    let n = b.len();
    let ln_b: Vec<(Float, Float)> = b
        .iter()
        .map(|bj| {
            let mut lo = Float::with_val_round(prec, bj, Round::Down).0;
            lo.ln_round(Round::Down);
            let mut hi = Float::with_val_round(prec, bj, Round::Up).0;
            hi.ln_round(Round::Up);
            (lo, hi)
        })
        .collect();
    let ln_y: Vec<(Float, Float)> = (0..n)
        .map(|i| {
            let mut lo = Float::with_val(prec, 0);
            let mut hi = Float::with_val(prec, 0);
            for (k, uik) in u.row(i).iter().enumerate() {
                if *uik == 0 {
                    continue;
                }
                let (a, z) = scale_interval(&ln_b[k].0, &ln_b[k].1, uik, prec);
                lo.add_assign_round(&a, Round::Down);
                hi.add_assign_round(&z, Round::Up);
            }
            let d = Float::with_val(delta[i].significant_bits().max(1), &delta[i]);
            lo.div_assign_round(&d, Round::Down);
            hi.div_assign_round(&d, Round::Up);
            (lo, hi)
        })
        .collect();
    let mut x_lo = Vec::with_capacity(n);
    let mut x_hi = Vec::with_capacity(n);
    for j in 0..n {
        let mut lo = Float::with_val(prec, 0);
        let mut hi = Float::with_val(prec, 0);
        for (i, vji) in v.row(j).iter().enumerate() {
            if *vji == 0 {
                continue;
            }
            let (a, z) = scale_interval(&ln_y[i].0, &ln_y[i].1, vji, prec);
            lo.add_assign_round(&a, Round::Down);
            hi.add_assign_round(&z, Round::Up);
        }
        lo.exp_round(Round::Down);
        hi.exp_round(Round::Up);
        x_lo.push(lo);
        x_hi.push(hi);
    }
    (x_lo, x_hi)
}

/// Solves `y_i^(Δ_ii) = γ_i` to relative accuracy `eta`, returning enclosures.
fn solve_transformed(
    delta: &[Integer],
    targets: &[Rational],
    eta: &Rational,
    prec: u32,
) -> Result<(Vec<Float>, Vec<Float>, u64)> {
    let mut lo = Vec::with_capacity(targets.len());
    let mut hi = Vec::with_capacity(targets.len());
    let mut evals = 0;
    for (d, g) in delta.iter().zip(targets) {
        // g lies in [2^(e-1), 2^(e+1)), so y = g^(1/d) is bracketed by powers of two.
        let e = g.numer().significant_bits() as i64 - g.denom().significant_bits() as i64;
        let d64 = d
            .to_i64()
            .ok_or_else(|| Error::Invalid("Smith diagonal entry too large".into()))?;
        let r = power_of_two((e + 1).div_euclid(d64) + 2);
        let eps = eta * power_of_two((e - 1).div_euclid(d64)) / 2u32;
        let root = solve_binomial(&Rational::from(d), g, &r, &eps, Some(prec))?
            .ok_or_else(|| Error::Invalid("transformed root outside its bracket".into()))?;
        evals += root.evaluations;
        let a = Float::with_val_round(prec, &root.value - &root.radius, Round::Down).0;
        let b = Float::with_val_round(prec, &root.value + &root.radius, Round::Up).0;
        lo.push(a);
        hi.push(b);
    }
    Ok((lo, hi, evals))
}

/// Enclosures of `x_j = Π_i y_i^(V_ji)` from enclosures of the `y_i > 0`.
fn map_back(v: &IntMatrix, lo: &[Float], hi: &[Float], prec: u32) -> (Vec<Float>, Vec<Float>) {
    let n = v.rows();
    let mut x_lo = Vec::with_capacity(n);
    let mut x_hi = Vec::with_capacity(n);
    for j in 0..n {
        let mut a = Float::with_val(prec, 1);
        let mut z = Float::with_val(prec, 1);
        for (i, e) in v.row(j).iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let e = Rational::from(e);
            let (small, large) = if e > 0 {
                (&lo[i], &hi[i])
            } else {
                (&hi[i], &lo[i])
            };
            a.mul_assign_round(&pow_rational(small, &e, prec, Round::Down), Round::Down);
            z.mul_assign_round(&pow_rational(large, &e, prec, Round::Up), Round::Up);
        }
        x_lo.push(a);
        x_hi.push(z);
    }
    (x_lo, x_hi)
}

/// Each monomial is increasing in every coordinate, so over the box it ranges
/// from its value at the low corner to its value at the high corner. Checks
/// that this range contains `b_i`.
fn residual_brackets_targets(
    d: &IntMatrix,
    b: &[Rational],
    x_lo: &[Float],
    x_hi: &[Float],
    prec: u32,
) -> bool {
    (0..d.rows()).all(|i| {
        let mut low = Float::with_val(2 * prec, 1);
        let mut high = Float::with_val(2 * prec, 1);
        for (j, e) in d.row(i).iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let e = Rational::from(e);
            low.mul_assign_round(
                &pow_rational(&x_lo[j], &e, 2 * prec, Round::Down),
                Round::Down,
            );
            high.mul_assign_round(&pow_rational(&x_hi[j], &e, 2 * prec, Round::Up), Round::Up);
        }
        let (low, high) = (
            low.to_rational().expect("finite"),
            high.to_rational().expect("finite"),
        );
        low <= b[i] && b[i] <= high
    })
}
