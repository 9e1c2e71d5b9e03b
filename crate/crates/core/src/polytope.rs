//! Exact convex hulls and normalized volumes of rational point sets.
//!
//! Hulls are built incrementally with a placing triangulation: points are
//! inserted in lexicographic order, and every boundary facet a new point sees
//! strictly contributes the simplex spanned by that facet and the point. The
//! simplices tile the hull, so their determinants sum to the normalized volume
//! (`n!` times the Euclidean volume, the standard simplex having volume 1).
//!
//! Everything is computed with [`rug::Rational`]; there are no tolerances.

use std::collections::HashMap;
use std::fmt;

use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det, EchelonBasis};

/// A point of Q^n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![Rational::new(); n])
    }

    /// The `i`-th standard basis vector of Q^n (zero based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut p = Point::origin(n);
        p.0[i] = Rational::from(1);
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    fn add(&self, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| Rational::from(a + b))
                .collect(),
        )
    }

    fn scaled(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|a| Rational::from(a * s)).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Normalized volume: multiples of the volume of the standard simplex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct NormalizedVolume(#[serde(serialize_with = "crate::json::serialize_rational")] Rational);

impl NormalizedVolume {
    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

/// Convex hull of a finite point set, with its extreme points and volume.
#[derive(Debug, Clone)]
pub struct Polytope {
    ambient_dim: usize,
    generators: Vec<Point>,
    vertices: Vec<Point>,
    affine_dim: usize,
    volume: NormalizedVolume,
}

impl Polytope {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Input points exactly as given to [`convex_hull`].
    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    /// Extreme points, in lexicographic order.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.ambient_dim
    }

    pub fn volume(&self) -> &NormalizedVolume {
        &self.volume
    }
}

/// Builds the convex hull of `points` in Q^n.
pub fn convex_hull(points: &[Point], n: usize) -> Result<Polytope> {
    if n == 0 {
        return Err(Error::Invalid(
            "ambient dimension must be at least 1".into(),
        ));
    }
    if points.is_empty() {
        return Err(Error::Empty("point set"));
    }
    if let Some(bad) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }

    let mut unique: Vec<Point> = points.to_vec();
    unique.sort();
    unique.dedup();

    // Affine basis: greedy over the sorted points.
    let base = &unique[0];
    let mut basis = EchelonBasis::new();
    let mut simplex = vec![0usize];
    for (i, p) in unique.iter().enumerate().skip(1) {
        if basis.rank() == n {
            break;
        }
        let diff: Vec<Rational> =
            p.0.iter()
                .zip(&base.0)
                .map(|(a, b)| Rational::from(a - b))
                .collect();
        if basis.insert(diff) {
            simplex.push(i);
        }
    }
    let d = basis.rank();

    let (vertex_ids, volume) = if d == 0 {
        (vec![0], Rational::new())
    } else {
        // Coordinates on which the affine hull projects injectively.
        let cols = basis.pivot_columns();
        let projected: Vec<Vec<Rational>> = unique
            .iter()
            .map(|p| cols.iter().map(|&c| p.0[c].clone()).collect())
            .collect();
        let mut hull = PlacingHull::new(&projected, d, &simplex);
        for i in 0..projected.len() {
            if !simplex.contains(&i) {
                hull.insert(i);
            }
        }
        let vol = if d == n {
            hull.volume.clone()
        } else {
            Rational::new()
        };
        (hull.extreme_points(), vol)
    };

    let mut vertices: Vec<Point> = vertex_ids.into_iter().map(|i| unique[i].clone()).collect();
    vertices.sort();

    Ok(Polytope {
        ambient_dim: n,
        generators: points.to_vec(),
        vertices,
        affine_dim: d,
        volume: NormalizedVolume(volume),
    })
}

/// `n!` times the Euclidean volume of the hull; zero when the hull is flat.
pub fn normalized_volume(p: &Polytope) -> NormalizedVolume {
    p.volume.clone()
}

pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    if p.ambient_dim != q.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim,
            found: q.ambient_dim,
        });
    }
    let sums: Vec<Point> = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| a.add(b)))
        .collect();
    convex_hull(&sums, p.ambient_dim)
}

/// Dilates `p` about the origin by `s >= 0`.
pub fn scale(p: &Polytope, s: &Rational) -> Result<Polytope> {
    if *s < 0 {
        return Err(Error::Domain(format!("scale factor {s} is negative")));
    }
    let pts: Vec<Point> = p.vertices.iter().map(|v| v.scaled(s)).collect();
    convex_hull(&pts, p.ambient_dim)
}

/// Closed-hull membership, exact.
pub fn contains(p: &Polytope, x: &Point) -> Result<bool> {
    if x.dim() != p.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim,
            found: x.dim(),
        });
    }
    if p.vertices.binary_search(x).is_ok() {
        return Ok(true);
    }
    // A point outside the hull is always extreme in the enlarged hull.
    let mut pts = p.vertices.clone();
    pts.push(x.clone());
    let enlarged = convex_hull(&pts, p.ambient_dim)?;
    Ok(enlarged.vertices.binary_search(x).is_err())
}

struct Facet {
    verts: Vec<usize>,
    /// Sign of `orient` for points strictly outside.
    outward_positive: bool,
    alive: bool,
}

/// Boundary triangulation of a full-dimensional hull in Q^d.
struct PlacingHull<'a> {
    pts: &'a [Vec<Rational>],
    d: usize,
    facets: Vec<Facet>,
    interior: Vec<Rational>,
    volume: Rational,
}

impl<'a> PlacingHull<'a> {
    fn new(pts: &'a [Vec<Rational>], d: usize, simplex: &[usize]) -> Self {
        debug_assert_eq!(simplex.len(), d + 1);
        let mut interior = vec![Rational::new(); d];
        for &i in simplex {
            for (c, x) in interior.iter_mut().zip(&pts[i]) {
                *c += x;
            }
        }
        let k = Rational::from(simplex.len() as u64);
        for c in interior.iter_mut() {
            *c /= &k;
        }

        let mut hull = PlacingHull {
            pts,
            d,
            facets: Vec::new(),
            interior,
            volume: Rational::new(),
        };
        let mut first: Vec<usize> = simplex[..d].to_vec();
        first.sort_unstable();
        hull.volume = hull.orient(&first, &pts[simplex[d]]).abs();
        for skip in 0..simplex.len() {
            let mut verts: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != skip)
                .map(|(_, &v)| v)
                .collect();
            verts.sort_unstable();
            hull.push_facet(verts);
        }
        hull
    }

    /// Signed determinant of the simplex `verts ∪ {p}`.
    fn orient(&self, verts: &[usize], p: &[Rational]) -> Rational {
        let base = &self.pts[verts[0]];
        let mut rows: Vec<Vec<Rational>> = verts[1..]
            .iter()
            .map(|&v| {
                self.pts[v]
                    .iter()
                    .zip(base)
                    .map(|(a, b)| Rational::from(a - b))
                    .collect()
            })
            .collect();
        rows.push(
            p.iter()
                .zip(base)
                .map(|(a, b)| Rational::from(a - b))
                .collect(),
        );
        det(rows)
    }

    fn push_facet(&mut self, verts: Vec<usize>) {
        let o = self.orient(&verts, &self.interior);
        debug_assert!(o != 0, "interior point lies on a facet hyperplane");
        self.facets.push(Facet {
            verts,
            outward_positive: o < 0,
            alive: true,
        });
    }

    fn insert(&mut self, idx: usize) {
        let p = &self.pts[idx];
        let mut visible = Vec::new();
        for (fi, f) in self.facets.iter().enumerate() {
            if !f.alive {
                continue;
            }
            let o = self.orient(&f.verts, p);
            let beyond = if f.outward_positive { o > 0 } else { o < 0 };
            if beyond {
                self.volume += o.abs();
                visible.push(fi);
            }
        }
        if visible.is_empty() {
            return;
        }

        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for &fi in &visible {
            let verts = &self.facets[fi].verts;
            for skip in 0..verts.len() {
                let ridge: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        for &fi in &visible {
            self.facets[fi].alive = false;
        }
        let mut horizon: Vec<Vec<usize>> = ridges
            .into_iter()
            .filter(|(_, count)| *count == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort();
        for mut ridge in horizon {
            ridge.push(idx);
            ridge.sort_unstable();
            self.push_facet(ridge);
        }
        self.facets.retain(|f| f.alive);
    }

    /// Boundary vertices whose incident facet normals span Q^d.
    fn extreme_points(&self) -> Vec<usize> {
        let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
        for (fi, f) in self.facets.iter().enumerate() {
            for &v in &f.verts {
                incident.entry(v).or_default().push(fi);
            }
        }
        let normals: Vec<Vec<Rational>> =
            self.facets.iter().map(|f| self.normal(&f.verts)).collect();
        let mut out: Vec<usize> = incident
            .into_iter()
            .filter(|(_, fs)| {
                let mut basis = EchelonBasis::new();
                for &fi in fs {
                    basis.insert(normals[fi].clone());
                    if basis.rank() == self.d {
                        return true;
                    }
                }
                false
            })
            .map(|(v, _)| v)
            .collect();
        out.sort_unstable();
        out
    }

    fn normal(&self, verts: &[usize]) -> Vec<Rational> {
        let base = &self.pts[verts[0]];
        (0..self.d)
            .map(|j| {
                let mut probe = base.clone();
                probe[j] += 1;
                self.orient(verts, &probe)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[&[i64]]) -> Vec<Point> {
        raw.iter().map(|c| Point::from_ints(c)).collect()
    }

    fn simplex(n: usize) -> Polytope {
        let mut v = vec![Point::origin(n)];
        v.extend((0..n).map(|i| Point::unit(n, i)));
        convex_hull(&v, n).unwrap()
    }

    #[test]
    fn hull_drops_interior_and_edge_points() {
        let p = convex_hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[5, 0], &[0, 3]]), 2).unwrap();
        assert_eq!(p.vertices(), pts(&[&[0, 0], &[0, 3], &[5, 0]]).as_slice());
        assert_eq!(*normalized_volume(&p).value(), 15);
    }

    #[test]
    fn single_point_and_segment() {
        let p = convex_hull(&pts(&[&[0, 0]]), 2).unwrap();
        assert_eq!(p.vertices(), pts(&[&[0, 0]]).as_slice());
        assert_eq!(p.affine_dim(), 0);
        assert!(normalized_volume(&p).is_zero());

        let s = convex_hull(&pts(&[&[0, 0], &[1, 1], &[2, 2]]), 2).unwrap();
        assert_eq!(s.vertices(), pts(&[&[0, 0], &[2, 2]]).as_slice());
        assert_eq!(s.affine_dim(), 1);
        assert!(normalized_volume(&s).is_zero());
    }

    #[test]
    fn flat_polygon_in_space_keeps_its_corners() {
        let p = convex_hull(
            &pts(&[&[0, 0, 1], &[2, 0, 1], &[0, 2, 1], &[2, 2, 1], &[1, 1, 1]]),
            3,
        )
        .unwrap();
        assert_eq!(p.affine_dim(), 2);
        assert_eq!(p.vertices().len(), 4);
        assert!(normalized_volume(&p).is_zero());
    }

    #[test]
    fn standard_simplex_has_unit_volume() {
        for n in 1..=6 {
            assert_eq!(*normalized_volume(&simplex(n)).value(), 1, "n = {n}");
        }
    }

    #[test]
    fn cube_volume_is_n_factorial() {
        let mut cube = Vec::new();
        for mask in 0..8i64 {
            cube.push(Point::from_ints(&[
                mask & 1,
                (mask >> 1) & 1,
                (mask >> 2) & 1,
            ]));
        }
        let p = convex_hull(&cube, 3).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(*p.volume().value(), 6);
    }

    #[test]
    fn rational_coordinates() {
        let half = Rational::from((1, 2));
        let p = convex_hull(
            &[
                Point::origin(2),
                Point::new(vec![half.clone(), Rational::new()]),
                Point::new(vec![Rational::new(), half]),
            ],
            2,
        )
        .unwrap();
        assert_eq!(*p.volume().value(), Rational::from((1, 4)));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = convex_hull(&pts(&[&[0, 0], &[1, 0, 0]]), 2).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
        assert_eq!(convex_hull(&[], 2).unwrap_err(), Error::Empty("point set"));
    }

    #[test]
    fn minkowski_of_segments_is_a_square() {
        let a = convex_hull(&pts(&[&[0, 0], &[1, 0]]), 2).unwrap();
        let b = convex_hull(&pts(&[&[0, 0], &[0, 1]]), 2).unwrap();
        let sq = minkowski_sum(&a, &b).unwrap();
        assert_eq!(
            sq.vertices(),
            pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]).as_slice()
        );
        assert_eq!(*sq.volume().value(), 2);
    }

    #[test]
    fn minkowski_with_point_translates() {
        let t = convex_hull(&pts(&[&[3, -1]]), 2).unwrap();
        let s = simplex(2);
        let moved = minkowski_sum(&s, &t).unwrap();
        assert_eq!(
            moved.vertices(),
            pts(&[&[3, -1], &[3, 0], &[4, -1]]).as_slice()
        );
        assert_eq!(moved.volume(), s.volume());
    }

    #[test]
    fn doubled_simplex() {
        let s = simplex(2);
        let twice = minkowski_sum(&s, &s).unwrap();
        assert_eq!(*twice.volume().value(), 4);
        assert_eq!(
            twice.vertices(),
            scale(&s, &Rational::from(2)).unwrap().vertices()
        );
    }

    #[test]
    fn scaling() {
        let s = simplex(2);
        let three = scale(&s, &Rational::from(3)).unwrap();
        assert_eq!(
            three.vertices(),
            pts(&[&[0, 0], &[0, 3], &[3, 0]]).as_slice()
        );
        assert_eq!(*three.volume().value(), 9);
        assert_eq!(
            scale(&s, &Rational::from(1)).unwrap().vertices(),
            s.vertices()
        );
        let zero = scale(&s, &Rational::new()).unwrap();
        assert_eq!(zero.vertices(), pts(&[&[0, 0]]).as_slice());
        assert!(scale(&s, &Rational::from(-1)).is_err());
    }

    #[test]
    fn membership() {
        let s = simplex(2);
        let third = Rational::from((1, 3));
        assert!(contains(&s, &Point::new(vec![third.clone(), third])).unwrap());
        assert!(!contains(&s, &Point::from_ints(&[1, 1])).unwrap());
        assert!(contains(
            &s,
            &Point::new(vec![Rational::from((1, 2)), Rational::from((1, 2))])
        )
        .unwrap());
        for v in s.vertices() {
            assert!(contains(&s, v).unwrap());
        }
        assert!(contains(&s, &Point::from_ints(&[1, 1, 1])).is_err());

        let seg = convex_hull(&pts(&[&[0, 0], &[2, 2]]), 2).unwrap();
        assert!(contains(&seg, &Point::from_ints(&[1, 1])).unwrap());
        assert!(!contains(&seg, &Point::from_ints(&[1, 0])).unwrap());
        assert!(!contains(&seg, &Point::from_ints(&[3, 3])).unwrap());
    }

    #[test]
    fn duplicates_and_order_do_not_matter() {
        let a = pts(&[
            &[0, 0, 0],
            &[4, 0, 1],
            &[0, 3, 0],
            &[1, 1, 5],
            &[1, 1, 1],
            &[2, 2, 0],
        ]);
        let mut b = a.clone();
        b.reverse();
        b.extend(a.iter().cloned());
        let pa = convex_hull(&a, 3).unwrap();
        let pb = convex_hull(&b, 3).unwrap();
        assert_eq!(pa.vertices(), pb.vertices());
        assert_eq!(pa.volume(), pb.volume());
    }
}
