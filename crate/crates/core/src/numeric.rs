//! Multiprecision power evaluation with directed rounding.

use rug::float::Round;
use rug::ops::{AssignRound, DivAssignRound, MulAssignRound};
use rug::{Float, Integer, Rational};

fn opposite(round: Round) -> Round {
    match round {
        Round::Up => Round::Down,
        Round::Down => Round::Up,
        other => other,
    }
}

fn guard_bits(e: u64) -> u32 {
    2 * (64 - e.leading_zeros()) + 8
}

/// `x^e` for `x > 0` by repeated squaring. With `Round::Down` (`Round::Up`)
/// the result is a lower (upper) bound on the exact power.
pub(crate) fn pow_uint(x: &Float, e: u64, prec: u32, round: Round) -> Float {
    let work = prec + guard_bits(e);
    let mut acc = Float::with_val(work, 1);
    let mut base = Float::with_val_round(work, x, round).0;
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc.mul_assign_round(&base, round);
        }
        k >>= 1;
        if k > 0 {
            let sq = base.clone();
            base.mul_assign_round(&sq, round);
        }
    }
    Float::with_val_round(prec, &acc, round).0
}

/// `x^r` for `x > 0` and rational `r`.
///
/// Exponents `p/q` with `q` fitting in 32 bits use `(x^|p|)^(1/q)`, each
/// step rounded in the requested direction, so directed rounding yields
/// a true bound. Larger denominators fall back to MPFR's general power.
pub(crate) fn pow_rational(x: &Float, r: &Rational, prec: u32, round: Round) -> Float {
    let num = r.numer();
    let den = r.denom();
    let negative = *num < 0;
    let abs_num = Integer::from(num.abs_ref());
    // A reciprocal flips the rounding direction of its argument.
    let inner_round = if negative { opposite(round) } else { round };
    let work = prec + 16;

    let magnitude = match (abs_num.to_u64(), den.to_u32()) {
        (Some(p), Some(q)) => {
            let powed = pow_uint(x, p, work, inner_round);
            if q == 1 {
                powed
            } else {
                let mut out = Float::new(work);
                out.assign_round(powed.root_ref(q), inner_round);
                out
            }
        }
        _ => {
            let exponent = Float::with_val(work + 64, Rational::from(r.abs_ref()));
            let mut out = Float::new(work);
            out.assign_round(rug::ops::Pow::pow(x, &exponent), inner_round);
            // The exponent itself was rounded; its effect on x^r is far below
            // one ulp unless |ln x| exceeds 2^60, so one extra ulp covers it.
            match inner_round {
                Round::Up => out.next_up(),
                Round::Down => out.next_down(),
                _ => {}
            }
            out
        }
    };
    if negative {
        let mut one = Float::with_val(work, 1);
        one.div_assign_round(&magnitude, round);
        Float::with_val_round(prec, &one, round).0
    } else {
        Float::with_val_round(prec, &magnitude, round).0
    }
}

/// Smallest number of bits `b` with `2^b >= v`, for `v >= 1`.
pub(crate) fn ceil_log2(v: f64) -> u32 {
    if v <= 1.0 {
        0
    } else {
        v.log2().ceil() as u32
    }
}
