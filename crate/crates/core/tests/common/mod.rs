//! Random inputs and independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_traits::{One, Zero};
use pfaff_core::exactalg::{frac, q, DegreePiece, Polynomial, QMatrix, Rational};
use pfaff_core::pfaffcalc::{LinearForm, SkewLinMatrix, SkewMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 20_240_611;

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Numerator in [-5, 5], denominator in [1, 3].
pub fn small_rational(r: &mut impl Rng) -> Rational {
    frac(r.gen_range(-5..=5), r.gen_range(1..=3))
}

pub fn nonzero_rational(r: &mut impl Rng) -> Rational {
    loop {
        let v = small_rational(r);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn random_form(r: &mut impl Rng) -> LinearForm {
    std::array::from_fn(|_| small_rational(r))
}

pub fn random_skew_lin(r: &mut impl Rng) -> SkewLinMatrix {
    SkewLinMatrix::from_fn(6, |_, _| random_form(r))
}

pub fn random_skew_scalar(r: &mut impl Rng, n: usize) -> SkewMatrix<Rational> {
    SkewMatrix::from_fn(n, |_, _| small_rational(r))
}

/// Small-integer invertible matrix.
pub fn random_invertible(r: &mut impl Rng, n: usize) -> QMatrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| q(r.gen_range(-2..=2))).collect())
            .collect();
        let m = QMatrix::from_rows(rows, n);
        if !bareiss_det(&m).is_zero() {
            return m;
        }
    }
}

pub fn random_cubic(r: &mut impl Rng) -> Polynomial {
    let basis = pfaff_core::exactalg::MonomialBasis::x(3);
    let coords: Vec<Rational> = (0..basis.len()).map(|_| small_rational(r)).collect();
    basis.polynomial(&coords)
}

pub fn random_in_piece(r: &mut impl Rng, piece: &DegreePiece) -> Polynomial {
    piece
        .polynomials()
        .into_iter()
        .fold(Polynomial::zero(), |acc, p| acc + p.scale(&small_rational(r)))
}

/// Fraction-free determinant.
pub fn bareiss_det(m: &QMatrix) -> Rational {
    let n = m.rows();
    let mut a = m.row_vecs();
    let mut sign = Rational::one();
    let mut prev = Rational::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Rational::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return Rational::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank by fraction-free elimination.
pub fn bareiss_rank(m: &QMatrix) -> usize {
    let mut a = m.row_vecs();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (upper, lower) = a.split_at_mut(rank + 1);
        let pivot = &upper[rank];
        for row in lower {
            if row[c].is_zero() {
                continue;
            }
            let (f, g) = (pivot[c].clone(), row[c].clone());
            for j in c..cols {
                row[j] = &row[j] * &f - &pivot[j] * &g;
            }
        }
        rank += 1;
    }
    rank
}

/// Pfaffian as a signed sum over perfect matchings; the sign is the parity
/// of the number of crossing pairs.
pub fn matching_pfaffian(a: &[Vec<Rational>]) -> Rational {
    fn go(a: &[Vec<Rational>], free: &mut Vec<usize>, pairs: &mut Vec<(usize, usize)>, acc: &mut Rational) {
        if free.is_empty() {
            let crossings = pairs
                .iter()
                .enumerate()
                .flat_map(|(k, p)| pairs[k + 1..].iter().map(move |r| (*p, *r)))
                .filter(|&((i, j), (k, l))| (i < k && k < j && j < l) || (k < i && i < l && l < j))
                .count();
            let mut term = Rational::one();
            for &(i, j) in pairs.iter() {
                term *= &a[i][j];
            }
            if crossings % 2 == 1 {
                term = -term;
            }
            *acc += term;
            return;
        }
        let i = free.remove(0);
        for k in 0..free.len() {
            let j = free.remove(k);
            pairs.push((i, j));
            go(a, free, pairs, acc);
            pairs.pop();
            free.insert(k, j);
        }
        free.insert(0, i);
    }
    let mut acc = Rational::zero();
    go(a, &mut (0..a.len()).collect(), &mut Vec::new(), &mut acc);
    acc
}

pub fn full_qmatrix(m: &SkewMatrix<Rational>) -> QMatrix {
    let n = m.size();
    QMatrix::from_rows(m.full(), n)
}
