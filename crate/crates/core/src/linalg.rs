//! Small exact linear algebra over the rationals.

use rug::Rational;

/// Determinant by Gaussian elimination. Consumes the matrix.
pub(crate) fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut sign_negative = false;
    let mut acc = Rational::from(1);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else {
            return Rational::new();
        };
        if pivot != col {
            m.swap(pivot, col);
            sign_negative = !sign_negative;
        }
        let (top, rest) = m.split_at_mut(col + 1);
        let prow = &top[col];
        for row in rest.iter_mut() {
            if row[col] == 0 {
                continue;
            }
            let factor = Rational::from(&row[col] / &prow[col]);
            for k in col..n {
                let delta = Rational::from(&factor * &prow[k]);
                row[k] -= delta;
            }
        }
        acc *= &prow[col];
    }
    if sign_negative {
        -acc
    } else {
        acc
    }
}

/// Incrementally maintained row-echelon basis of a subspace of Q^n.
#[derive(Debug, Clone, Default)]
pub(crate) struct EchelonBasis {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonBasis {
    pub(crate) fn new() -> Self {
        EchelonBasis { rows: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` to the basis if it is independent of the current span.
    pub(crate) fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        for (pivot, row) in &self.rows {
            if v[*pivot] == 0 {
                continue;
            }
            let factor = Rational::from(&v[*pivot] / &row[*pivot]);
            for (x, r) in v.iter_mut().zip(row) {
                if *r != 0 {
                    *x -= Rational::from(&factor * r);
                }
            }
        }
        match v.iter().position(|x| *x != 0) {
            Some(pivot) => {
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }

    /// Pivot columns, sorted ascending.
    pub(crate) fn pivot_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        cols.sort_unstable();
        cols
    }
}
