use crate::error::{Error, Result};
use crate::exactalg::{CommRing, QMatrix};

/// Skew-symmetric matrix over a commutative ring, stored by its strictly
/// upper-triangular entries. The diagonal is zero and `m[j][i] = -m[i][j]`
/// by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix<R> {
    n: usize,
    upper: Vec<R>,
}

/// Sign attached to the entry `(a, b)` in the first-order expansion of the
/// Pfaffian: `d Pf(M + eN) / de = sum_{a<b} laplace_sign(a, b) N[a][b] q_ab(M)`,
/// where `q_ab` is the Pfaffian of `M` with rows and columns `a`, `b`
/// removed. Restricted to `a = 0` this is the expansion along the first row.
pub fn laplace_sign(a: usize, b: usize) -> i64 {
    if (a + b + 1).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl<R: CommRing> SkewMatrix<R> {
    pub fn zeros(n: usize) -> Self {
        SkewMatrix {
            n,
            upper: vec![R::ring_zero(); n * n.saturating_sub(1) / 2],
        }
    }

    /// Builds from a function evaluated at `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                upper.push(f(i, j));
            }
        }
        SkewMatrix { n, upper }
    }

    /// Checks skew-symmetry of a full square matrix and keeps its upper part.
    pub fn from_full(rows: &[Vec<R>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSkew(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if !row[i].is_ring_zero() {
                return Err(Error::NotSkew(format!("nonzero diagonal entry at {i}")));
            }
            for j in i + 1..n {
                if rows[j][i] != row[j].negate() {
                    return Err(Error::NotSkew(format!(
                        "entries ({i},{j}) and ({j},{i}) are not opposite"
                    )));
                }
            }
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j].clone()))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)` for any `i, j`.
    pub fn get(&self, i: usize, j: usize) -> R {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[upper_index(self.n, i, j)].clone(),
            Greater => self.upper[upper_index(self.n, j, i)].negate(),
            Equal => R::ring_zero(),
        }
    }

    /// Borrow of the stored entry at `i < j`.
    pub fn upper(&self, i: usize, j: usize) -> &R {
        &self.upper[upper_index(self.n, i, j)]
    }

    /// Sets `(i, j)` and, implicitly, `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: R) {
        assert_ne!(i, j, "diagonal of a skew matrix is fixed at zero");
        if i < j {
            let k = upper_index(self.n, i, j);
            self.upper[k] = v;
        } else {
            let k = upper_index(self.n, j, i);
            self.upper[k] = v.negate();
        }
    }

    pub fn map<S: CommRing>(&self, f: impl Fn(&R) -> S) -> SkewMatrix<S> {
        SkewMatrix {
            n: self.n,
            upper: self.upper.iter().map(f).collect(),
        }
    }

    pub fn full(&self) -> Vec<Vec<R>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        SkewMatrix {
            n: self.n,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn scale_by(&self, c: &R) -> Self {
        self.map(|e| e.times(c))
    }

    /// `B^T M B` for a constant matrix `B`.
    pub fn congruence(&self, b: &QMatrix) -> Self {
        assert_eq!((b.rows(), b.cols()), (self.n, self.n));
        let full = self.full();
        // mb = M * B
        let mb: Vec<Vec<R>> = (0..self.n)
            .map(|k| {
                (0..self.n)
                    .map(|j| {
                        let mut acc = R::ring_zero();
                        for l in 0..self.n {
                            if !full[k][l].is_ring_zero() && !num_traits::Zero::is_zero(&b[(l, j)]) {
                                acc = acc.plus(&full[k][l].scale(&b[(l, j)]));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Self::from_fn(self.n, |i, j| {
            let mut acc = R::ring_zero();
            for k in 0..self.n {
                if !num_traits::Zero::is_zero(&b[(k, i)]) && !mb[k][j].is_ring_zero() {
                    acc = acc.plus(&mb[k][j].scale(&b[(k, i)]));
                }
            }
            acc
        })
    }

    /// Pfaffian by Laplace expansion along the first row.
    pub fn pfaffian(&self) -> Result<R> {
        if self.n % 2 == 1 {
            return Err(Error::OddSize(self.n));
        }
        let idx: Vec<usize> = (0..self.n).collect();
        Ok(self.pfaffian_of(&idx))
    }

    /// Pfaffian of the principal submatrix on `idx` (sorted, even length).
    pub fn pfaffian_of(&self, idx: &[usize]) -> R {
        let Some((&first, rest)) = idx.split_first() else {
            return R::ring_one();
        };
        let mut acc: Option<R> = None;
        for (pos, &j) in rest.iter().enumerate() {
            let e = self.get(first, j);
            if e.is_ring_zero() {
                continue;
            }
            let minor: Vec<usize> = rest
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &v)| v)
                .collect();
            let sub = self.pfaffian_of(&minor);
            if sub.is_ring_zero() {
                continue;
            }
            let term = e.times(&sub);
            acc = Some(match (acc, pos % 2 == 0) {
                (None, true) => term,
                (None, false) => term.negate(),
                (Some(a), true) => a.plus(&term),
                (Some(a), false) => a.minus(&term),
            });
        }
        acc.unwrap_or_else(R::ring_zero)
    }

    /// Pfaffian of the matrix with rows and columns `a` and `b` removed.
    pub fn sub_pfaffian(&self, a: usize, b: usize) -> R {
        let idx: Vec<usize> = (0..self.n).filter(|&k| k != a && k != b).collect();
        self.pfaffian_of(&idx)
    }

    /// All `q_ab`, `a < b`, in the order (0,1), (0,2), ..., (n-2,n-1).
    pub fn sub_pfaffians(&self) -> Vec<R> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                out.push(self.sub_pfaffian(a, b));
            }
        }
        out
    }

    /// `sum_{a<b} laplace_sign(a,b) * other[a][b] * q_ab(self)`: the first
    /// order change of the Pfaffian of `self` in the direction `other`.
    pub fn pfaffian_derivative(&self, other: &SkewMatrix<R>) -> R {
        assert_eq!(self.n, other.n);
        let mut acc = R::ring_zero();
        for a in 0..self.n {
            for b in a + 1..self.n {
                let l = other.upper(a, b);
                if l.is_ring_zero() {
                    continue;
                }
                let term = l.times(&self.sub_pfaffian(a, b));
                acc = if laplace_sign(a, b) > 0 {
                    acc.plus(&term)
                } else {
                    acc.minus(&term)
                };
            }
        }
        acc
    }
}
