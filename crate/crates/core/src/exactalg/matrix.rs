use std::fmt;

use num_traits::{One, Zero};

use super::rational::{self, Rational};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    /// Nonzero rows of the reduced row-echelon form.
    pub matrix: QMatrix,
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        QMatrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rational::q(v)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn echelon(&self) -> Echelon {
        let (rows, pivots) = rref_rows(self.row_vecs(), self.cols);
        Echelon {
            matrix: QMatrix::from_rows(rows, self.cols),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{v : self * v = 0}` as the rows of a matrix in reduced
    /// row-echelon form.
    pub fn kernel_basis(&self) -> QMatrix {
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let mut vecs = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (r, &p) in ech.pivots.iter().enumerate() {
                let e = &ech.matrix[(r, f)];
                if !e.is_zero() {
                    v[p] = -e.clone();
                }
            }
            vecs.push(v);
        }
        let (rows, _) = rref_rows(vecs, self.cols);
        QMatrix::from_rows(rows, self.cols)
    }

    /// Some solution of `self * x = b`, or `None` when the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let aug: Vec<Vec<Rational>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let (rows, pivots) = rref_rows(aug, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rows[r][self.cols].clone();
        }
        Some(x)
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.row_vecs();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let piv = m[c][c].clone();
            det *= &piv;
            let (upper, lower) = m.split_at_mut(c + 1);
            let pivot_row = &upper[c];
            for row in lower {
                if row[c].is_zero() {
                    continue;
                }
                let f = &row[c] / &piv;
                for (k, pk) in pivot_row.iter().enumerate().skip(c) {
                    if !pk.is_zero() {
                        row[k] -= &f * pk;
                    }
                }
            }
        }
        det
    }
}

/// Gauss-Jordan elimination on owned rows. Returns the nonzero rows of the
/// reduced row-echelon form and their pivot columns.
pub(crate) fn rref_rows(mut rows: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|e| !e.is_zero()));
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        if top == rows.len() {
            break;
        }
        // sparsest candidate limits fill-in
        let Some(p) = (top..rows.len())
            .filter(|&r| !rows[r][c].is_zero())
            .min_by_key(|&r| rows[r].iter().filter(|e| !e.is_zero()).count())
        else {
            continue;
        };
        rows.swap(top, p);
        let inv = rows[top][c].recip();
        let support: Vec<usize> = (c..cols).filter(|&k| !rows[top][k].is_zero()).collect();
        for &k in &support {
            rows[top][k] *= &inv;
        }
        let (before, rest) = rows.split_at_mut(top);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row");
        for r in before.iter_mut().chain(after.iter_mut()) {
            if r[c].is_zero() {
                continue;
            }
            let f = r[c].clone();
            for &k in &support {
                let d = &f * &pivot_row[k];
                r[k] -= d;
            }
        }
        pivots.push(c);
        top += 1;
    }
    rows.truncate(top);
    (rows, pivots)
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(rational::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
