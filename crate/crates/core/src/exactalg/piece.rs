use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::matrix::{rref_rows, Echelon, QMatrix};
use super::monomial::{Monomial, Var};
use super::poly::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// The monomials of one degree in a fixed set of variables, in decreasing
/// graded reverse-lexicographic order. Serves as the coordinate system of a
/// [`DegreePiece`].
#[derive(Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    vars: Vec<Var>,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(vars: &[Var], degree: u32) -> Arc<Self> {
        let mut vars = vars.to_vec();
        vars.sort();
        vars.dedup();
        let monomials = Monomial::all_of_degree(&vars, degree);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Arc::new(MonomialBasis {
            vars,
            degree,
            monomials,
            index,
        })
    }

    /// Degree-`d` monomials in `x0..x4`.
    pub fn x(degree: u32) -> Arc<Self> {
        Self::new(&Var::xs(), degree)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn coordinates(&self, p: &Polynomial) -> Result<Vec<Rational>> {
        p.coordinates(&self.index, self.len())
            .ok_or_else(|| Error::NonHomogeneous {
                degree: self.degree,
                poly: p.to_string(),
            })
    }

    pub fn polynomial(&self, coords: &[Rational]) -> Polynomial {
        assert_eq!(coords.len(), self.len());
        Polynomial::from_terms(
            self.monomials
                .iter()
                .zip(coords)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    fn same_space(&self, other: &MonomialBasis) -> bool {
        self.degree == other.degree && self.vars == other.vars
    }
}

impl fmt::Debug for MonomialBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MonomialBasis(deg {}, {} vars, {} monomials)",
            self.degree,
            self.vars.len(),
            self.len()
        )
    }
}

/// A linear subspace of the degree-`d` polynomials in some variables, held
/// as the reduced row-echelon basis of coefficient vectors. Two pieces are
/// equal exactly when these bases coincide.
#[derive(Clone)]
pub struct DegreePiece {
    basis: Arc<MonomialBasis>,
    echelon: Echelon,
}

/// Selector for [`piece_ops`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PieceOp {
    Sum,
    Intersection,
    Contains,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PieceOutcome {
    Piece(DegreePiece),
    Contains(bool),
}

impl DegreePiece {
    pub fn zero(basis: Arc<MonomialBasis>) -> Self {
        let cols = basis.len();
        DegreePiece {
            basis,
            echelon: Echelon {
                matrix: QMatrix::zeros(0, cols),
                pivots: Vec::new(),
            },
        }
    }

    pub fn full(basis: Arc<MonomialBasis>) -> Self {
        let n = basis.len();
        Self::from_rows(basis, QMatrix::identity(n).row_vecs())
    }

    /// Span of coordinate vectors.
    pub fn from_rows(basis: Arc<MonomialBasis>, rows: Vec<Vec<Rational>>) -> Self {
        let cols = basis.len();
        let (rows, pivots) = rref_rows(rows, cols);
        DegreePiece {
            basis,
            echelon: Echelon {
                matrix: QMatrix::from_rows(rows, cols),
                pivots,
            },
        }
    }

    /// Span of polynomials, each homogeneous of the basis degree in the basis
    /// variables.
    pub fn span<'a>(basis: Arc<MonomialBasis>, polys: impl IntoIterator<Item = &'a Polynomial>) -> Result<Self> {
        let rows = polys
            .into_iter()
            .map(|p| basis.coordinates(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rows(basis, rows))
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree
    }

    pub fn dim(&self) -> usize {
        self.echelon.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.echelon.matrix
    }

    pub fn pivots(&self) -> &[usize] {
        &self.echelon.pivots
    }

    /// Canonical basis polynomials (rows of the reduced echelon form).
    pub fn polynomials(&self) -> Vec<Polynomial> {
        (0..self.dim())
            .map(|r| self.basis.polynomial(self.echelon.matrix.row(r)))
            .collect()
    }

    fn check_compatible(&self, other: &DegreePiece) -> Result<()> {
        if self.basis.same_space(&other.basis) {
            Ok(())
        } else {
            Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            })
        }
    }

    pub fn sum(&self, other: &DegreePiece) -> Result<DegreePiece> {
        self.check_compatible(other)?;
        let mut rows = self.echelon.matrix.row_vecs();
        rows.extend(other.echelon.matrix.row_vecs());
        Ok(Self::from_rows(self.basis.clone(), rows))
    }

    pub fn intersection(&self, other: &DegreePiece) -> Result<DegreePiece> {
        self.check_compatible(other)?;
        let (ra, rb) = (self.dim(), other.dim());
        if ra == 0 || rb == 0 {
            return Ok(Self::zero(self.basis.clone()));
        }
        // (lambda, mu) with lambda^T A = mu^T B
        let n = self.ambient_dim();
        let mut sys = QMatrix::zeros(n, ra + rb);
        for c in 0..n {
            for r in 0..ra {
                sys[(c, r)] = self.echelon.matrix[(r, c)].clone();
            }
            for r in 0..rb {
                sys[(c, ra + r)] = -other.echelon.matrix[(r, c)].clone();
            }
        }
        let ker = sys.kernel_basis();
        let rows = (0..ker.rows())
            .map(|k| {
                let mut v = vec![Rational::zero(); n];
                for r in 0..ra {
                    let l = &ker[(k, r)];
                    if l.is_zero() {
                        continue;
                    }
                    for (c, e) in self.echelon.matrix.row(r).iter().enumerate() {
                        if !e.is_zero() {
                            v[c] += l * e;
                        }
                    }
                }
                v
            })
            .collect();
        Ok(Self::from_rows(self.basis.clone(), rows))
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &DegreePiece) -> Result<bool> {
        self.check_compatible(other)?;
        Ok((0..other.dim()).all(|r| self.residue(other.echelon.matrix.row(r)).iter().all(Zero::is_zero)))
    }

    pub fn contains_poly(&self, p: &Polynomial) -> Result<bool> {
        let v = self.basis.coordinates(p)?;
        Ok(self.residue(&v).iter().all(Zero::is_zero))
    }

    /// Reduces a coordinate vector by the echelon basis. The result vanishes
    /// at pivot columns and is zero exactly when `v` lies in the piece.
    pub fn residue(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ambient_dim());
        let mut out = v.to_vec();
        for (r, &p) in self.echelon.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (c, e) in self.echelon.matrix.row(r).iter().enumerate() {
                if !e.is_zero() {
                    out[c] -= &f * e;
                }
            }
        }
        out
    }

    /// Residue of a vector whose coordinates are polynomials in auxiliary
    /// variables (the piece itself has rational coefficients). Returns the
    /// coordinates at the non-pivot columns.
    pub fn residue_symbolic(&self, v: &[Polynomial]) -> Vec<Polynomial> {
        assert_eq!(v.len(), self.ambient_dim());
        let pivots = &self.echelon.pivots;
        (0..self.ambient_dim())
            .filter(|c| !pivots.contains(c))
            .map(|c| {
                let mut acc = v[c].clone();
                for (r, &p) in pivots.iter().enumerate() {
                    let w = &self.echelon.matrix[(r, c)];
                    if !w.is_zero() && !v[p].is_zero() {
                        acc = acc - v[p].scale(w);
                    }
                }
                acc
            })
            .collect()
    }

    /// Coefficients of `p` in the canonical basis, if `p` lies in the piece.
    pub fn coordinates_of(&self, p: &Polynomial) -> Result<Option<Vec<Rational>>> {
        let v = self.basis.coordinates(p)?;
        if !self.residue(&v).iter().all(Zero::is_zero) {
            return Ok(None);
        }
        Ok(Some(self.echelon.pivots.iter().map(|&c| v[c].clone()).collect()))
    }
}

/// Sum, intersection or containment of two pieces of the same degree.
pub fn piece_ops(a: &DegreePiece, b: &DegreePiece, op: PieceOp) -> Result<PieceOutcome> {
    Ok(match op {
        PieceOp::Sum => PieceOutcome::Piece(a.sum(b)?),
        PieceOp::Intersection => PieceOutcome::Piece(a.intersection(b)?),
        PieceOp::Contains => PieceOutcome::Contains(a.contains(b)?),
    })
}

/// Canonical span of homogeneous degree-`d` polynomials in `x0..x4`.
pub fn piece_span(polys: &[Polynomial], d: u32) -> Result<DegreePiece> {
    DegreePiece::span(MonomialBasis::x(d), polys)
}

impl PartialEq for DegreePiece {
    fn eq(&self, other: &Self) -> bool {
        self.basis.same_space(&other.basis) && self.echelon.matrix == other.echelon.matrix
    }
}

impl Eq for DegreePiece {}

impl fmt::Debug for DegreePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DegreePiece(deg {}, dim {}/{}) [",
            self.degree(),
            self.dim(),
            self.ambient_dim()
        )?;
        for (n, p) in self.polynomials().iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: usize) -> Polynomial {
        Polynomial::x(k)
    }

    #[test]
    fn duplicate_input_collapses() {
        let sq = &x(0) * &x(0);
        assert_eq!(piece_span(&[sq.clone(), sq], 2).unwrap().dim(), 1);
    }

    #[test]
    fn empty_span() {
        assert_eq!(piece_span(&[], 3).unwrap().dim(), 0);
    }

    #[test]
    fn all_quadric_monomials_fill_r2() {
        let basis = MonomialBasis::x(2);
        let polys: Vec<_> = basis
            .monomials()
            .iter()
            .map(|m| Polynomial::term(m.clone(), crate::exactalg::rational::q(1)))
            .collect();
        let piece = piece_span(&polys, 2).unwrap();
        assert_eq!(piece.dim(), 15);
        assert_eq!(piece, DegreePiece::full(basis));
    }

    #[test]
    fn mixed_degree_rejected() {
        let p = &(&x(0) * &x(0)) + &x(1);
        assert!(matches!(piece_span(&[p], 2), Err(Error::NonHomogeneous { .. })));
    }

    #[test]
    fn intersection_cases() {
        let v = piece_span(&[&x(0) * &x(1), &x(2) * &x(3)], 2).unwrap();
        assert_eq!(v.intersection(&v).unwrap(), v);
        let a = piece_span(&[&x(0) * &x(1)], 2).unwrap();
        let b = piece_span(&[&x(2) * &x(3)], 2).unwrap();
        assert_eq!(a.intersection(&b).unwrap().dim(), 0);
        assert!(v.contains(&a).unwrap());
        assert!(!a.contains(&v).unwrap());
    }

    #[test]
    fn degree_mismatch() {
        let a = piece_span(&[x(0)], 1).unwrap();
        let b = piece_span(&[&x(0) * &x(1)], 2).unwrap();
        assert!(matches!(a.sum(&b), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(
            piece_ops(&a, &b, PieceOp::Intersection),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn order_independent() {
        let p = [
            &x(0) * &x(1) + &x(2) * &x(2),
            &x(0) * &x(1) - &x(3) * &x(4),
            &x(2) * &x(2),
        ];
        let mut r = p.clone();
        r.reverse();
        assert_eq!(piece_span(&p, 2).unwrap(), piece_span(&r, 2).unwrap());
    }
}
