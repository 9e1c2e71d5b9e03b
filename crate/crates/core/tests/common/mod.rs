//! Independent oracles and instance generators shared by the integration tests.
//!
//! The oracles avoid the library's own geometry and root-finding code:
//! hulls use Andrew's monotone chain or facet enumeration over all point
//! triples, powers use `exp(ln 2 / d)`, determinants use the Leibniz formula.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use sparsereal::ksum::KSum;
use sparsereal::lattice::IntMatrix;
use sparsereal::polytope::Point;
use sparsereal::system::{SparsePolynomial, SparseSystem};

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

pub fn points(raw: &[Vec<i64>]) -> Vec<Point> {
    raw.iter().map(|p| Point::from_ints(p)).collect()
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    i128::from(a.0 - o.0) * i128::from(b.1 - o.1) - i128::from(a.1 - o.1) * i128::from(b.0 - o.0)
}

/// Strict convex hull vertices in counter-clockwise order.
pub fn monotone_chain(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p: Vec<_> = pts
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if p.len() < 3 {
        return p;
    }
    p.sort();
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the Euclidean area of the hull, i.e. its normalized area.
pub fn shoelace_normalized_area(pts: &[(i64, i64)]) -> Integer {
    let h = monotone_chain(pts);
    if h.len() < 3 {
        return Integer::new();
    }
    let mut twice = 0i128;
    for i in 0..h.len() {
        let (a, b) = (h[i], h[(i + 1) % h.len()]);
        twice += i128::from(a.0) * i128::from(b.1) - i128::from(b.0) * i128::from(a.1);
    }
    Integer::from(twice.abs())
}

type V3 = [i128; 3];

fn sub3(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: V3, b: V3) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Normalized volume (6 × Euclidean) of the hull of integer points in R^3.
///
/// Every triple spanning a plane with all points on one side gives a facet.
/// Each facet polygon is fan-triangulated and coned to the centroid of the
/// point set, which lies in the interior of a full-dimensional hull.
pub fn brute_force_normalized_volume_3d(raw: &[[i64; 3]]) -> Rational {
    let pts: Vec<V3> = raw
        .iter()
        .map(|p| [i128::from(p[0]), i128::from(p[1]), i128::from(p[2])])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let m = pts.len();
    let big_n = m as i128;
    let sum = pts
        .iter()
        .fold([0i128; 3], |s, p| [s[0] + p[0], s[1] + p[1], s[2] + p[2]]);
    let mut planes: BTreeSet<(V3, i128)> = BTreeSet::new();
    let mut total = Integer::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let nrm = cross3(sub3(pts[j], pts[i]), sub3(pts[k], pts[i]));
                if nrm == [0, 0, 0] {
                    continue;
                }
                let side: Vec<i128> = pts.iter().map(|p| dot3(nrm, sub3(*p, pts[i]))).collect();
                if !(side.iter().all(|&s| s >= 0) || side.iter().all(|&s| s <= 0)) {
                    continue;
                }
                if side.iter().all(|&s| s == 0) {
                    return Rational::new();
                }
                let g = gcd(gcd(nrm[0], nrm[1]), nrm[2]);
                let mut key = [nrm[0] / g, nrm[1] / g, nrm[2] / g];
                if key.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                    key = [-key[0], -key[1], -key[2]];
                }
                let offset = dot3(key, pts[i]);
                if !planes.insert((key, offset)) {
                    continue;
                }
                // Project the facet onto the two coordinates not dominated by its normal.
                let drop = (0..3).max_by_key(|&a| nrm[a].abs()).unwrap();
                let keep: Vec<usize> = (0..3).filter(|&a| a != drop).collect();
                let on: Vec<V3> = pts
                    .iter()
                    .zip(&side)
                    .filter(|(_, &s)| s == 0)
                    .map(|(p, _)| *p)
                    .collect();
                let flat: Vec<(i64, i64)> = on
                    .iter()
                    .map(|p| (p[keep[0]] as i64, p[keep[1]] as i64))
                    .collect();
                let poly = monotone_chain(&flat);
                let lift = |q: (i64, i64)| -> V3 {
                    let p = on
                        .iter()
                        .find(|p| (p[keep[0]] as i64, p[keep[1]] as i64) == q)
                        .unwrap();
                    [
                        big_n * p[0] - sum[0],
                        big_n * p[1] - sum[1],
                        big_n * p[2] - sum[2],
                    ]
                };
                for t in 1..poly.len().saturating_sub(1) {
                    let (a, b, c) = (lift(poly[0]), lift(poly[t]), lift(poly[t + 1]));
                    total += Integer::from(dot3(a, cross3(b, c)).abs());
                }
            }
        }
    }
    Rational::from((total, Integer::from(big_n).pow(3)))
}

/// `2^(1/d)` as `exp(ln 2 / d)` at `prec` bits.
pub fn root_of_two(d: u64, prec: u32) -> Float {
    let mut x = Float::with_val(prec, 2).ln();
    x /= d;
    x.exp()
}

/// Leibniz expansion over all permutations.
pub fn leibniz_det(a: &IntMatrix) -> Integer {
    let n = a.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Integer::new();
    permute(&mut perm, 0, &mut |p| {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let mut term = Integer::from(1);
        for (i, &j) in p.iter().enumerate() {
            term *= &a[(i, j)];
        }
        if inversions % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

pub fn gcd_int(a: &Integer, b: &Integer) -> Integer {
    Integer::from(a.gcd_ref(b))
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> IntMatrix {
    let rows: Vec<Vec<Integer>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Integer::from(rng.gen_range(lo..=hi)))
                .collect()
        })
        .collect();
    IntMatrix::new(rows).unwrap()
}

/// A one-alternation k-sum with a known root `ρ = t^q`.
pub struct PlantedKSum {
    pub f: KSum,
    pub root: Rational,
}

/// Exponents are `p/q` with `q ≤ 4` and distinct integers `p ∈ [-20, 20]`,
/// so every term is exactly rational at `ρ = t^q`. The lower block of
/// exponents carries one sign and the upper block the other; the lower
/// block is rescaled so the sum vanishes at `ρ`.
pub fn planted_ksum<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> PlantedKSum {
    let q = rng.gen_range(1..=4i64);
    let t = loop {
        let t = rat(rng.gen_range(1..=40), rng.gen_range(1..=12));
        let rho = t.to_f64().powi(q as i32);
        if rho > lo && rho < hi {
            break t;
        }
    };
    let k_low = rng.gen_range(1..=3);
    let k_high = rng.gen_range(1..=3);
    let mut ps = BTreeSet::new();
    while ps.len() < k_low + k_high {
        ps.insert(rng.gen_range(-20..=20i64));
    }
    let ps: Vec<i64> = ps.into_iter().collect();
    let value_at_root = |p: i64| -> Rational {
        if p >= 0 {
            t.clone().pow(p as u32)
        } else {
            t.clone().pow(p.unsigned_abs() as u32).recip()
        }
    };
    let coeffs: Vec<Rational> = ps
        .iter()
        .map(|_| Rational::from(rng.gen_range(1..=50)))
        .collect();
    let low_sum: Rational = ps[..k_low]
        .iter()
        .zip(&coeffs)
        .map(|(&p, c)| c * value_at_root(p))
        .sum();
    let high_sum: Rational = ps[k_low..]
        .iter()
        .zip(&coeffs[k_low..])
        .map(|(&p, c)| c * value_at_root(p))
        .sum();
    let flip = if rng.gen_bool(0.5) { -1 } else { 1 };
    let ratio = Rational::from(&high_sum / &low_sum);
    let terms = ps.iter().zip(&coeffs).enumerate().map(|(i, (&p, c))| {
        let c = if i < k_low {
            -Rational::from(c * &ratio)
        } else {
            c.clone()
        };
        (rat(p, q), c * flip)
    });
    PlantedKSum {
        f: KSum::new(terms),
        root: t.pow(q as u32),
    }
}

/// A random k-sum with arbitrary signs and rational exponents.
pub fn random_ksum<R: Rng>(rng: &mut R, max_terms: usize) -> KSum {
    let k = rng.gen_range(1..=max_terms);
    let terms: Vec<(Rational, Rational)> = (0..k)
        .map(|_| {
            let c = loop {
                let c = rng.gen_range(-30..=30i64);
                if c != 0 {
                    break c;
                }
            };
            (
                rat(rng.gen_range(-40..=40), rng.gen_range(1..=5)),
                rat(c, rng.gen_range(1..=7)),
            )
        })
        .collect();
    KSum::new(terms)
}

/// A binomial system with all-positive planted root.
pub struct PlantedBinomial {
    pub d: IntMatrix,
    pub c: Vec<Rational>,
    pub root: Vec<Rational>,
}

pub fn planted_binomial<R: Rng>(rng: &mut R, n: usize, max_entry: i64) -> PlantedBinomial {
    let d = loop {
        let d = random_matrix(rng, n, 0, max_entry);
        if leibniz_det(&d) != 0 {
            break d;
        }
    };
    let root: Vec<Rational> = (0..n)
        .map(|_| rat(rng.gen_range(1..=12), rng.gen_range(1..=6)))
        .collect();
    let c = (0..n)
        .map(|i| {
            let mut m = Rational::from(1);
            for (j, x) in root.iter().enumerate() {
                m *= Rational::from(x.pow(d[(i, j)].to_u32().unwrap()));
            }
            -m
        })
        .collect();
    PlantedBinomial { d, c, root }
}

pub fn x(n: usize, i: usize) -> SparsePolynomial {
    SparsePolynomial::var(n, i)
}

pub fn k(n: usize, c: i64) -> SparsePolynomial {
    SparsePolynomial::constant(n, c)
}

/// `Σ (x_i - a_i)^2 - r2` over the given variables.
fn sphere(n: usize, center: &[i64], r2: i64) -> SparsePolynomial {
    let mut p = k(n, -r2);
    for (i, &a) in center.iter().enumerate() {
        let t = &x(n, i) - &k(n, a);
        p = &p + &(&t * &t);
    }
    p
}

/// Single-polynomial varieties with a known number of connected components.
pub fn component_suite() -> Vec<(&'static str, SparseSystem, u64)> {
    let sys = |n, f| SparseSystem::new(n, vec![f], vec![]).unwrap();
    let circle = sphere(2, &[0, 0], 1);
    let big_circle = sphere(2, &[0, 0], 4);
    let four_points = {
        let a = &(&x(2, 0) * &x(2, 0)) - &k(2, 1);
        let b = &(&x(2, 1) * &x(2, 1)) - &k(2, 1);
        &(&a * &a) + &(&b * &b)
    };
    let cube_corners = {
        let mut p = SparsePolynomial::zero(3);
        for i in 0..3 {
            let a = &(&x(3, i) * &x(3, i)) - &k(3, 1);
            p = &p + &(&a * &a);
        }
        p
    };
    let three_roots = &(&(&x(1, 0) - &k(1, 1)) * &(&x(1, 0) - &k(1, 2))) * &(&x(1, 0) - &k(1, 3));
    let hyperbola = &(&x(2, 0) * &x(2, 1)) - &k(2, 1);
    let two_spheres = &sphere(3, &[3, 0, 0], 1) * &sphere(3, &[-3, 0, 0], 1);
    let torus = {
        let a = &(&(&x(4, 0) * &x(4, 0)) + &(&x(4, 1) * &x(4, 1))) - &k(4, 1);
        let b = &(&(&x(4, 2) * &x(4, 2)) + &(&x(4, 3) * &x(4, 3))) - &k(4, 1);
        &(&a * &a) + &(&b * &b)
    };
    vec![
        ("unit circle", sys(2, circle.clone()), 1),
        ("concentric circles", sys(2, &circle * &big_circle), 2),
        ("hyperbola", sys(2, hyperbola), 2),
        ("four points", sys(2, four_points), 4),
        ("three real roots", sys(1, three_roots), 3),
        ("eight cube corners", sys(3, cube_corners), 8),
        ("two disjoint spheres", sys(3, two_spheres), 2),
        ("product of two circles", sys(4, torus), 1),
    ]
}

/// Support `{1, x_1, ..., x_{n-1}} ∪ {(x_1⋯x_n)^j : 1 ≤ j ≤ D}`.
pub fn spikes_system(n: usize, big_d: u32, s: usize) -> SparseSystem {
    let mut f = SparsePolynomial::constant(n, 1);
    for i in 0..n - 1 {
        f = &f + &x(n, i);
    }
    for j in 1..=big_d {
        f = &f + &SparsePolynomial::monomial(vec![j; n], if j % 2 == 0 { -2 } else { 3 });
    }
    if s == 0 {
        SparseSystem::new(n, vec![f], vec![]).unwrap()
    } else {
        SparseSystem::new(n, vec![], vec![f; s]).unwrap()
    }
}

/// `c_0 + c_1 x^a + c_2 y^b`.
pub fn planar_trinomial(a: u32, b: u32) -> SparseSystem {
    let f = SparsePolynomial::from_terms(
        2,
        [
            (vec![0, 0], rat(3, 1)),
            (vec![a, 0], rat(2, 1)),
            (vec![0, b], rat(-7, 1)),
        ],
    );
    SparseSystem::new(2, vec![f], vec![]).unwrap()
}

/// `c_0 + c_1 x_1^{a_1} + ... + c_n x_n^{a_n}`.
pub fn axis_powers(a: &[u32]) -> SparseSystem {
    let n = a.len();
    let mut terms = vec![(vec![0; n], rat(-1, 1))];
    for (i, &ai) in a.iter().enumerate() {
        let mut e = vec![0; n];
        e[i] = ai;
        terms.push((e, rat(i as i64 + 2, 1)));
    }
    SparseSystem::new(n, vec![SparsePolynomial::from_terms(n, terms)], vec![]).unwrap()
}

/// `c_0 + c_1 x + c_2 y + c_3 (xy)^a`.
pub fn trinomial_with_diagonal(a: u32) -> SparseSystem {
    let f = SparsePolynomial::from_terms(
        2,
        [
            (vec![0, 0], rat(1, 1)),
            (vec![1, 0], rat(-2, 1)),
            (vec![0, 1], rat(5, 1)),
            (vec![a, a], rat(1, 3)),
        ],
    );
    SparseSystem::new(2, vec![f], vec![]).unwrap()
}

/// `(c_0 + c_1 x^a + c_2 y^b, c_3 + c_4 x^b + c_5 y^b + c_6 (xy)^b)`.
pub fn square_support_pair(a: u32, b: u32) -> SparseSystem {
    let f = SparsePolynomial::from_terms(
        2,
        [
            (vec![0, 0], rat(1, 1)),
            (vec![a, 0], rat(1, 1)),
            (vec![0, b], rat(-1, 1)),
        ],
    );
    let g = SparsePolynomial::from_terms(
        2,
        [
            (vec![0, 0], rat(2, 1)),
            (vec![b, 0], rat(-3, 1)),
            (vec![0, b], rat(5, 1)),
            (vec![b, b], rat(1, 1)),
        ],
    );
    SparseSystem::new(2, vec![f, g], vec![]).unwrap()
}
