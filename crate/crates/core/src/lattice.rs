//! Integer matrices, exact determinants and Smith normal form.

use std::fmt;

use rug::Integer;
use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::json::integer_number;

/// Dense rectangular matrix of big integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Integer>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<Integer>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::Empty("matrix"));
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(Error::Empty("matrix row"));
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// # Panics
    /// If the rows are empty or ragged.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Integer::from(x)).collect())
                .collect(),
        )
        .expect("rectangular nonempty matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Integer::new(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Integer::from(1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Integer] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Integer>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if *a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += Integer::from(a * &other[(k, j)]);
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> Integer {
        self.data
            .iter()
            .map(|x| Integer::from(x.abs_ref()))
            .max()
            .unwrap_or_default()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == 0))
    }

    pub fn diagonal(&self) -> Vec<Integer> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, k: &Integer) {
        for j in 0..self.cols {
            let delta = Integer::from(k * &self.data[src * self.cols + j]);
            self.data[dst * self.cols + j] += delta;
        }
    }

    /// `col[dst] += k * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, k: &Integer) {
        for i in 0..self.rows {
            let delta = Integer::from(k * &self.data[i * self.cols + src]);
            self.data[i * self.cols + dst] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = Integer::from(-&*x);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Integer;
    fn index(&self, (i, j): (usize, usize)) -> &Integer {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Integer {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<_> = self.row(i).iter().map(integer_number).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

fn require_square(a: &IntMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        })
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> Result<Integer> {
    require_square(a)?;
    let n = a.rows;
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if m[(k, k)] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[(i, k)] != 0) else {
                return Ok(Integer::new());
            };
            m.swap_rows(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v =
                    Integer::from(&m[(i, j)] * &m[(k, k)]) - Integer::from(&m[(i, k)] * &m[(k, j)]);
                m[(i, j)] = v.div_exact(&prev);
            }
        }
        prev = m[(k, k)].clone();
    }
    let det = if n == 0 {
        Integer::from(1)
    } else {
        m[(n - 1, n - 1)].clone()
    };
    Ok(if negate { -det } else { det })
}

/// `ln(2n + max |a_ij|)` with `n` the larger dimension.
pub fn entry_size(a: &IntMatrix) -> f64 {
    let n = a.rows.max(a.cols);
    let v = a.max_abs() + 2 * n as u64;
    // ln of a big integer through its binary length
    let bits = v.significant_bits();
    if bits <= 1000 {
        v.to_f64().ln()
    } else {
        let shifted = Integer::from(&v >> (bits - 64));
        shifted.to_f64().ln() + f64::from(bits - 64) * std::f64::consts::LN_2
    }
}

/// `U A V = D` with unimodular `U`, `V` and `D` diagonal, nonnegative, and
/// each diagonal entry dividing the next.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub h_a: f64,
    pub h_u: f64,
    pub h_v: f64,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<Integer> {
        self.d.diagonal()
    }

    /// Product of the diagonal, which equals `|det A|` for square `A`.
    pub fn diagonal_product(&self) -> Integer {
        self.diagonal().iter().product()
    }

    /// `n^3 (h_A + ln n)^2`, the size the transforms stay within for the
    /// asymptotically fast algorithms. Reported for comparison only.
    pub fn size_reference(&self) -> f64 {
        let n = self.d.rows().max(1) as f64;
        n.powi(3) * (self.h_a + n.ln()).powi(2)
    }

    /// Exact check of every defining property against `a`.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let Ok(uav) = self.u.mul(a).and_then(|ua| ua.mul(&self.v)) else {
            return false;
        };
        let unimodular = |m: &IntMatrix| determinant(m).is_ok_and(|d| d.abs() == 1);
        let diag = self.diagonal();
        uav == self.d
            && self.d.is_diagonal()
            && unimodular(&self.u)
            && unimodular(&self.v)
            && diag.iter().all(|x| *x >= 0)
            && diag.windows(2).all(|w| {
                if w[0] == 0 {
                    w[1] == 0
                } else {
                    w[1].is_divisible(&w[0])
                }
            })
    }
}

impl Serialize for SnfDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let diag: Vec<_> = self.diagonal().iter().map(integer_number).collect();
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("U", &self.u)?;
        map.serialize_entry("D", &diag)?;
        map.serialize_entry("D_matrix", &self.d)?;
        map.serialize_entry("V", &self.v)?;
        map.serialize_entry("h_A", &self.h_a)?;
        map.serialize_entry("h_U", &self.h_u)?;
        map.serialize_entry("h_V", &self.h_v)?;
        map.serialize_entry("size_reference", &self.size_reference())?;
        map.end()
    }
}

/// Smith normal form by pivoting on the smallest nonzero entry (ties broken by
/// position) and Euclidean row and column reduction. Deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SnfDecomposition> {
    require_square(a)?;
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| d[(i, j)] != 0)
                .min_by(|&(i1, j1), &(i2, j2)| {
                    d[(i1, j1)]
                        .cmp_abs(&d[(i2, j2)])
                        .then((i1, j1).cmp(&(i2, j2)))
                });
            let Some((pi, pj)) = pivot else {
                // Remaining block is zero.
                return finish(a, u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)] != 0 {
                    let q = -Integer::from(&d[(i, t)] / &d[(t, t)]);
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    clean &= d[(i, t)] == 0;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)] != 0 {
                    let q = -Integer::from(&d[(t, j)] / &d[(t, t)]);
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    clean &= d[(t, j)] == 0;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and retry.
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_divisible(&d[(t, t)])));
            match offender {
                Some(i) => {
                    let one = Integer::from(1);
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, d, v)
}

fn finish(a: &IntMatrix, u: IntMatrix, d: IntMatrix, v: IntMatrix) -> Result<SnfDecomposition> {
    Ok(SnfDecomposition {
        h_a: entry_size(a),
        h_u: entry_size(&u),
        h_v: entry_size(&v),
        u,
        d,
        v,
    })
}
