//! Upper bounds on the number of connected components of semi-algebraic sets.
//!
//! The central quantity is the normalized volume of `Q`, the convex hull of
//! the origin, the standard basis vectors and every exponent vector that
//! appears in the system. The fewnomial calculators depend only on `n`, `s`
//! and the number `k` of distinct monomials. Two classical degree-based
//! bounds are included for comparison.

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json::{serialize_rational, SCHEMA_VERSION};
use crate::polytope::{convex_hull, Point, Polytope};
use crate::system::{SparsePolynomial, SparseSystem};

/// Hull of `{O, e_1, ..., e_n}` together with the support of every polynomial.
pub fn support_hull(sys: &SparseSystem) -> Result<Polytope> {
    let n = sys.n();
    let mut pts: Vec<Point> = vec![Point::origin(n)];
    pts.extend((0..n).map(|i| Point::unit(n, i)));
    pts.extend(sys.distinct_monomials().iter().map(|e| exponent_point(e)));
    convex_hull(&pts, n)
}

fn exponent_point(e: &[u32]) -> Point {
    Point::new(e.iter().map(|&x| Rational::from(x)).collect())
}

fn pow2(e: u64) -> Integer {
    Integer::from(1) << u32::try_from(e).expect("exponent fits in 32 bits")
}

fn ipow(base: u64, e: u64) -> Integer {
    Integer::from(base).pow(u32::try_from(e).expect("exponent fits in 32 bits"))
}

/// Multiplier of the hull volume in the component bound: `2^(n-1)` when
/// `s = 0`, otherwise `min{n+1, (s+1)/(s-1)} * 2^n * s^n`, with the ratio
/// read as infinite at `s = 1`.
pub fn volume_multiplier(n: usize, s: usize) -> Rational {
    let n64 = n as u64;
    if s == 0 {
        return Rational::from(pow2(n64 - 1));
    }
    let s64 = s as u64;
    let factor = if s == 1 {
        Rational::from(n64 + 1)
    } else {
        Rational::from(n64 + 1).min(Rational::from((s64 + 1, s64 - 1)))
    };
    factor * Rational::from(pow2(n64) * ipow(s64, n64))
}

/// Component bound for `p` equations and `s` strict inequalities in terms of
/// the normalized volume of [`support_hull`].
pub fn polytope_volume_bound(sys: &SparseSystem) -> Result<Rational> {
    let q = support_hull(sys)?;
    Ok(volume_multiplier(sys.n(), sys.s()) * q.volume().value())
}

/// Hull of `{O}` and the support of `f`, without the unit simplex.
pub fn origin_support_hull(f: &SparsePolynomial) -> Result<Polytope> {
    let n = f.n();
    let mut pts = vec![Point::origin(n)];
    pts.extend(f.support().map(exponent_point));
    convex_hull(&pts, n)
}

/// `Vol(Q') / min{2, n}` for a compact hypersurface `{f = 0}` without
/// isolated points. The hypotheses are not checked.
pub fn compact_hypersurface_bound(f: &SparsePolynomial) -> Result<Rational> {
    let q = origin_support_hull(f)?;
    Ok(Rational::from(q.volume().value()) / f.n().min(2) as u64)
}

/// `2^(n-1) Vol(Q)` for a real algebraic set (no inequalities).
pub fn real_variety_bound(sys: &SparseSystem) -> Result<Rational> {
    if sys.s() > 0 {
        return Err(Error::HasInequalities(sys.s()));
    }
    polytope_volume_bound(sys)
}

fn check_counts(n: u64, k: u64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidCount(format!(
            "n must be at least 1, got {n}"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidCount(format!(
            "k must be at least 1, got {k}"
        )));
    }
    Ok(())
}

/// `2^(n-1) (n+1)^(k+1) 2^(k(k+1)/2)` for a smooth compact hypersurface with
/// `k` monomial terms.
pub fn knomial_smooth_compact_bound(n: u64, k: u64) -> Result<Integer> {
    check_counts(n, k)?;
    Ok(pow2(n - 1) * ipow(n + 1, k + 1) * pow2(k * (k + 1) / 2))
}

/// `(1/2) (n+1)^k 2^(k(k-1)/2)` for the components of a smooth compact
/// `k`-nomial hypersurface lying in the open positive orthant.
pub fn knomial_positive_orthant_bound(n: u64, k: u64) -> Result<Rational> {
    check_counts(n, k)?;
    Ok(Rational::from((ipow(n + 1, k) * pow2(k * (k - 1) / 2), 2)))
}

/// `4^(n-1/2) (2n+1)^(k+1) 2^(k(k+1)/2)` for any real algebraic set defined
/// with `k` distinct monomials.
pub fn knomial_variety_bound(n: u64, k: u64) -> Result<Integer> {
    check_counts(n, k)?;
    Ok(pow2(2 * n - 1) * ipow(2 * n + 1, k + 1) * pow2(k * (k + 1) / 2))
}

/// `4^(n-1/2) (s+1)^n (2(n+1)(s+1)+1)^(k+1) 2^(k(k+1)/2)` for a semi-algebraic
/// set with `s` strict inequalities and `k` distinct monomials.
pub fn knomial_semialgebraic_bound(n: u64, s: u64, k: u64) -> Result<Integer> {
    check_counts(n, k)?;
    Ok(pow2(2 * n - 1)
        * ipow(s + 1, n)
        * ipow(2 * (n + 1) * (s + 1) + 1, k + 1)
        * pow2(k * (k + 1) / 2))
}

/// Degree-based comparison values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalBounds {
    /// `(sd+1)(2sd+1)^n` for `s > 0`, `d(2d-1)^n` for `s = 0`.
    pub milnor_thom: Integer,
    /// `(p+s)^n d^n`: the asymptotic form `(p+s)^n O(d)^n` with its
    /// unspecified constant set to 1.
    pub basu_form: Integer,
}

pub fn classical_bounds(sys: &SparseSystem) -> ClassicalBounds {
    let n = sys.n() as u64;
    let d = sys.max_total_degree();
    let s = sys.s() as u64;
    let p = sys.p() as u64;
    let milnor_thom = if s > 0 {
        Integer::from(s * d + 1) * ipow(2 * s * d + 1, n)
    } else {
        // d = 0 only for constant systems, where 2d - 1 would be negative.
        let base: Integer = 2 * Integer::from(d) - 1;
        Integer::from(d) * base.pow(n as u32)
    };
    ClassicalBounds {
        milnor_thom,
        basu_form: ipow(p + s, n) * ipow(d, n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    PolytopeVolume,
    CompactHypersurface,
    RealVariety,
    KnomialSmoothCompact,
    KnomialPositiveOrthant,
    KnomialVariety,
    KnomialSemialgebraic,
    ClassicalMilnorThom,
    ClassicalBasuForm,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::PolytopeVolume => "polytope_volume",
            BoundKind::CompactHypersurface => "compact_hypersurface",
            BoundKind::RealVariety => "real_variety",
            BoundKind::KnomialSmoothCompact => "knomial_smooth_compact",
            BoundKind::KnomialPositiveOrthant => "knomial_positive_orthant",
            BoundKind::KnomialVariety => "knomial_variety",
            BoundKind::KnomialSemialgebraic => "knomial_semialgebraic",
            BoundKind::ClassicalMilnorThom => "classical_milnor_thom",
            BoundKind::ClassicalBasuForm => "classical_basu_form",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub name: BoundKind,
    /// `None` when the bound does not apply to this system's shape.
    #[serde(serialize_with = "crate::json::serialize_opt_rational")]
    pub value: Option<Rational>,
    pub applicable: bool,
    /// True when the value holds only under hypotheses that are not checked.
    pub conditional: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemSummary {
    pub n: usize,
    pub p: usize,
    pub s: usize,
    /// Distinct monomials over all polynomials.
    pub k: usize,
    pub max_degree: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HullSummary {
    #[serde(serialize_with = "serialize_points")]
    pub vertices: Vec<Point>,
    #[serde(serialize_with = "serialize_rational")]
    pub normalized_volume: Rational,
}

fn serialize_points<S: serde::Serializer>(
    pts: &[Point],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for p in pts {
        let coords: Vec<serde_json::Value> = p
            .coords()
            .iter()
            .map(|c| {
                if *c.denom() == 1 {
                    serde_json::Value::Number(crate::json::integer_number(c.numer()))
                } else {
                    crate::json::rational_value(c)
                }
            })
            .collect();
        seq.serialize_element(&coords)?;
    }
    seq.end()
}

/// Every bound evaluated on one system.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub schema: &'static str,
    pub system: SystemSummary,
    pub hull: HullSummary,
    pub bounds: Vec<BoundEntry>,
    /// Smallest applicable bound that holds without unchecked hypotheses.
    pub smallest: BoundKind,
}

impl BoundReport {
    pub fn get(&self, kind: BoundKind) -> Option<&BoundEntry> {
        self.bounds.iter().find(|b| b.name == kind)
    }

    pub fn value(&self, kind: BoundKind) -> Option<&Rational> {
        self.get(kind).and_then(|b| b.value.as_ref())
    }
}

const HYPOTHESES_NOTE: &str = "conditional on unchecked hypotheses";

pub fn compare_bounds(sys: &SparseSystem) -> Result<BoundReport> {
    let n = sys.n();
    let (p, s) = (sys.p(), sys.s());
    let k = sys.distinct_monomials().len();
    let q = support_hull(sys)?;
    let main = volume_multiplier(n, s) * q.volume().value();
    let mut bounds = Vec::new();

    let entry = |name, value: Option<Rational>, conditional, note: Option<String>| BoundEntry {
        name,
        applicable: value.is_some(),
        value,
        conditional,
        note,
    };

    bounds.push(entry(
        BoundKind::PolytopeVolume,
        Some(main.clone()),
        false,
        None,
    ));

    let single_hypersurface = p == 1 && s == 0;
    if single_hypersurface {
        let f = &sys.equations()[0];
        let hull = origin_support_hull(f)?;
        let value = Rational::from(hull.volume().value()) / n.min(2) as u64;
        let note = if hull.is_full_dimensional() {
            HYPOTHESES_NOTE.to_owned()
        } else {
            format!(
                "{HYPOTHESES_NOTE}; degenerate: hull of origin and support is lower-dimensional"
            )
        };
        bounds.push(entry(
            BoundKind::CompactHypersurface,
            Some(value),
            true,
            Some(note),
        ));
    } else {
        bounds.push(entry(
            BoundKind::CompactHypersurface,
            None,
            true,
            Some("needs one equation and no inequalities".into()),
        ));
    }

    if s == 0 {
        bounds.push(entry(
            BoundKind::RealVariety,
            Some(main.clone()),
            false,
            None,
        ));
    } else {
        bounds.push(entry(
            BoundKind::RealVariety,
            None,
            false,
            Some("system has strict inequalities".into()),
        ));
    }

    let (n64, k64, s64) = (n as u64, k as u64, s as u64);
    if single_hypersurface {
        let smooth = Rational::from(knomial_smooth_compact_bound(n64, k64)?);
        let orthant = knomial_positive_orthant_bound(n64, k64)?;
        bounds.push(entry(
            BoundKind::KnomialSmoothCompact,
            Some(smooth),
            true,
            Some(HYPOTHESES_NOTE.into()),
        ));
        bounds.push(entry(
            BoundKind::KnomialPositiveOrthant,
            Some(orthant),
            true,
            Some(format!(
                "{HYPOTHESES_NOTE}; counts only components inside the open positive orthant"
            )),
        ));
    } else {
        for kind in [
            BoundKind::KnomialSmoothCompact,
            BoundKind::KnomialPositiveOrthant,
        ] {
            bounds.push(entry(
                kind,
                None,
                true,
                Some("needs one equation and no inequalities".into()),
            ));
        }
    }

    if s == 0 {
        bounds.push(entry(
            BoundKind::KnomialVariety,
            Some(knomial_variety_bound(n64, k64)?.into()),
            false,
            None,
        ));
    } else {
        bounds.push(entry(
            BoundKind::KnomialVariety,
            None,
            false,
            Some("system has strict inequalities".into()),
        ));
    }
    bounds.push(entry(
        BoundKind::KnomialSemialgebraic,
        Some(knomial_semialgebraic_bound(n64, s64, k64)?.into()),
        false,
        None,
    ));

    let classical = classical_bounds(sys);
    bounds.push(entry(
        BoundKind::ClassicalMilnorThom,
        Some(classical.milnor_thom.into()),
        false,
        None,
    ));
    bounds.push(entry(
        BoundKind::ClassicalBasuForm,
        Some(classical.basu_form.into()),
        true,
        Some("constant not specified; reported with constant 1".into()),
    ));

    let smallest = bounds
        .iter()
        .filter(|b| !b.conditional)
        .filter_map(|b| b.value.as_ref().map(|v| (v, b.name)))
        .min()
        .map(|(_, name)| name)
        .expect("the volume bound is always present");

    Ok(BoundReport {
        schema: SCHEMA_VERSION,
        system: SystemSummary {
            n,
            p,
            s,
            k,
            max_degree: sys.max_total_degree(),
        },
        hull: HullSummary {
            vertices: q.vertices().to_vec(),
            normalized_volume: q.volume().value().clone(),
        },
        bounds,
        smallest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial_in;

    fn system(n: usize, eqs: &[&str], ineqs: &[&str]) -> SparseSystem {
        let parse = |v: &[&str]| {
            v.iter()
                .map(|s| parse_polynomial_in(s, n).unwrap())
                .collect()
        };
        SparseSystem::new(n, parse(eqs), parse(ineqs)).unwrap()
    }

    #[test]
    fn trinomial_triangle_hull_and_bound() {
        let sys = system(2, &["2 + 3*x1^5 - x2^3"], &[]);
        let q = support_hull(&sys).unwrap();
        assert_eq!(
            q.vertices(),
            [
                Point::from_ints(&[0, 0]),
                Point::from_ints(&[0, 3]),
                Point::from_ints(&[5, 0])
            ]
        );
        assert_eq!(polytope_volume_bound(&sys).unwrap(), 30);
        assert_eq!(real_variety_bound(&sys).unwrap(), 30);
    }

    #[test]
    fn one_variable_inequality() {
        let sys = system(1, &[], &["x1 - 2"]);
        let q = support_hull(&sys).unwrap();
        assert_eq!(
            q.vertices(),
            [Point::from_ints(&[0]), Point::from_ints(&[1])]
        );
        assert_eq!(polytope_volume_bound(&sys).unwrap(), 4);
        assert_eq!(
            real_variety_bound(&sys).unwrap_err(),
            Error::HasInequalities(1)
        );
    }

    #[test]
    fn multiplier_resolves_the_min() {
        assert_eq!(volume_multiplier(2, 0), 2);
        assert_eq!(volume_multiplier(2, 1), 3 * 4);
        // s = 2: min{3, 3} = 3
        assert_eq!(volume_multiplier(2, 2), 3 * 4 * 4);
        // s = 5: min{3, 6/4} = 3/2
        assert_eq!(volume_multiplier(2, 5), Rational::from(3 * 4 * 25) / 2);
    }

    #[test]
    fn compact_hypersurface_values() {
        let f = parse_polynomial_in("1 + x1^5 + x2^3", 2).unwrap();
        assert_eq!(
            compact_hypersurface_bound(&f).unwrap(),
            Rational::from((15, 2))
        );
        let g = parse_polynomial_in("x1^4 - 3", 1).unwrap();
        assert_eq!(compact_hypersurface_bound(&g).unwrap(), 4);
        let mono = parse_polynomial_in("x1^2*x2", 2).unwrap();
        assert_eq!(compact_hypersurface_bound(&mono).unwrap(), 0);
    }

    #[test]
    fn variety_of_cubic() {
        let sys = system(1, &["x1^3 - 1"], &[]);
        assert_eq!(real_variety_bound(&sys).unwrap(), 3);
    }

    #[test]
    fn knomial_formulas() {
        assert_eq!(knomial_smooth_compact_bound(1, 2).unwrap(), 64);
        assert_eq!(knomial_smooth_compact_bound(2, 2).unwrap(), 432);
        assert_eq!(
            knomial_positive_orthant_bound(2, 1).unwrap(),
            Rational::from((3, 2))
        );
        assert_eq!(knomial_variety_bound(1, 1).unwrap(), 36);
        assert_eq!(knomial_variety_bound(1, 2).unwrap(), 432);
        assert_eq!(knomial_variety_bound(2, 1).unwrap(), 400);
        assert_eq!(knomial_semialgebraic_bound(1, 0, 1).unwrap(), 100);
        assert_eq!(knomial_semialgebraic_bound(1, 1, 1).unwrap(), 648);
        assert_eq!(knomial_semialgebraic_bound(2, 0, 1).unwrap(), 784);
        assert!(matches!(
            knomial_variety_bound(0, 1),
            Err(Error::InvalidCount(_))
        ));
        assert!(matches!(
            knomial_semialgebraic_bound(1, 0, 0),
            Err(Error::InvalidCount(_))
        ));
    }

    #[test]
    fn classical_values() {
        assert_eq!(
            classical_bounds(&system(1, &["x1^3 - 1"], &[])).milnor_thom,
            15
        );
        let c = classical_bounds(&system(2, &[], &["x1^2 + x2 - 1"]));
        assert_eq!(c.milnor_thom, 75);
        assert_eq!(c.basu_form, 4);
    }

    #[test]
    fn report_on_trinomial() {
        let sys = system(2, &["1 + x1^5 + x2^3"], &[]);
        let r = compare_bounds(&sys).unwrap();
        assert_eq!(r.value(BoundKind::PolytopeVolume).unwrap(), &30);
        // d(2d-1)^n with d = 5, n = 2
        assert_eq!(r.value(BoundKind::ClassicalMilnorThom).unwrap(), &405);
        assert_eq!(r.smallest, BoundKind::PolytopeVolume);
        assert!(r.get(BoundKind::CompactHypersurface).unwrap().conditional);
    }

    #[test]
    fn report_on_monomial_equation() {
        let sys = system(2, &["x1^2*x2^3"], &[]);
        let r = compare_bounds(&sys).unwrap();
        let compact = r.get(BoundKind::CompactHypersurface).unwrap();
        assert_eq!(compact.value.as_ref().unwrap(), &0);
        assert!(compact.note.as_ref().unwrap().contains("degenerate"));
        assert!(r
            .bounds
            .iter()
            .all(|b| b.value.as_ref().map_or(true, |v| *v >= 0)));
    }

    #[test]
    fn report_json_shape() {
        let sys = system(2, &["1 + x1^5 + x2^3"], &[]);
        let v = serde_json::to_value(compare_bounds(&sys).unwrap()).unwrap();
        assert_eq!(v["schema"], "1");
        assert_eq!(v["bounds"][0]["name"], "polytope_volume");
        assert_eq!(v["bounds"][0]["value"]["num"].to_string(), "30");
        assert_eq!(v["hull"]["vertices"][2][0].to_string(), "5");
    }
}
