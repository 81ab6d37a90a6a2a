use num_traits::Zero;

use super::linear::{form_poly, LinearForm, SkewLinMatrix};
use crate::error::{Error, Result};
use crate::exactalg::{DegreePiece, Monomial, MonomialBasis, Polynomial, QMatrix, Rational, Var, NX};

/// Default iteration cap for [`saturate_piece`].
pub const DEFAULT_COLON_CAP: usize = 10;

/// Homogeneous ideal in `x0..x4` given by generators, with its graded pieces
/// computed on demand. `I_d` is built from `I_{d-1}` times the variables plus
/// the generators of degree `d`.
#[derive(Clone, Debug)]
pub struct GradedIdeal {
    gens: Vec<Polynomial>,
    pieces: Vec<DegreePiece>,
}

impl GradedIdeal {
    /// Zero generators are dropped; the rest must be homogeneous in `x`.
    pub fn new(gens: &[Polynomial]) -> Result<Self> {
        let mut kept = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            if g.homogeneous_degree_in(|_| true).is_none() || !g.vars().iter().all(|v| v.is_x()) {
                return Err(Error::NonHomogeneous {
                    degree: g.degree().unwrap_or(0),
                    poly: g.to_string(),
                });
            }
            kept.push(g.clone());
        }
        Ok(GradedIdeal {
            gens: kept,
            pieces: Vec::new(),
        })
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn piece(&mut self, d: u32) -> &DegreePiece {
        while self.pieces.len() <= d as usize {
            let e = self.pieces.len() as u32;
            let basis = MonomialBasis::x(e);
            let mut rows = Vec::new();
            if let Some(prev) = e.checked_sub(1).map(|p| &self.pieces[p as usize]) {
                for b in prev.polynomials() {
                    for k in 0..NX {
                        let p = b.mul_monomial(&Monomial::var(Var::x(k)));
                        rows.push(basis.coordinates(&p).expect("degree matches"));
                    }
                }
            }
            for g in self.gens.iter().filter(|g| g.degree() == Some(e)) {
                rows.push(basis.coordinates(g).expect("degree matches"));
            }
            self.pieces.push(DegreePiece::from_rows(basis, rows));
        }
        &self.pieces[d as usize]
    }
}

/// Degree-`d` piece of the ideal generated by `gens`: the span of all
/// products of a generator with a monomial of complementary degree.
pub fn ideal_piece(gens: &[Polynomial], d: u32) -> Result<DegreePiece> {
    Ok(GradedIdeal::new(gens)?.piece(d).clone())
}

/// A reduced point of P^4 given by four independent linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointIdeal {
    forms: Vec<LinearForm>,
}

impl PointIdeal {
    pub fn new(forms: Vec<LinearForm>) -> Result<Self> {
        let rank = QMatrix::from_rows(forms.iter().map(|f| f.to_vec()).collect(), NX).rank();
        if forms.len() != 4 || rank != 4 {
            return Err(Error::WrongSpanDimension(rank));
        }
        Ok(PointIdeal { forms })
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.forms.iter().map(form_poly).collect()
    }

    /// Homogeneous coordinates, scaled so the last nonzero one is 1.
    pub fn point(&self) -> Vec<Rational> {
        let m = QMatrix::from_rows(self.forms.iter().map(|f| f.to_vec()).collect(), NX);
        let ker = m.kernel_basis();
        let mut v = ker.row(0).to_vec();
        let last = v
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .cloned()
            .expect("nonzero kernel vector");
        for c in &mut v {
            *c /= &last;
        }
        v
    }
}

/// The point where `m` vanishes identically, i.e. the common zero of its
/// entries. Requires the entries to span a 4-dimensional space of forms.
pub fn rank0_point(m: &SkewLinMatrix) -> Result<PointIdeal> {
    let span = m.entry_span();
    if span.dim() != 4 {
        return Err(Error::WrongSpanDimension(span.dim()));
    }
    let forms = (0..4)
        .map(|r| {
            let mut f: LinearForm = Default::default();
            f.clone_from_slice(span.matrix().row(r));
            f
        })
        .collect();
    PointIdeal::new(forms)
}

/// Degree-`d` piece of the saturation of `(gens)` at the point `p`.
///
/// Step `k` computes `(I : m_p^k)_d`, the forms `f` of degree `d` with
/// `f * mu` in `I_{d+k}` for every product `mu` of `k` of the point's forms.
/// These pieces increase with `k`; the iteration stops once the dimension has
/// stayed the same for two consecutive steps and fails with
/// `NonStabilizing` if that has not happened by step `cap`.
pub fn saturate_piece(gens: &[Polynomial], p: &PointIdeal, d: u32, cap: usize) -> Result<DegreePiece> {
    let mut ideal = GradedIdeal::new(gens)?;
    let basis = MonomialBasis::x(d);
    let forms = p.polynomials();
    let mut current = ideal.piece(d).clone();
    let mut dims = vec![current.dim()];
    for k in 1..=cap {
        let target = ideal.piece(d + k as u32).clone();
        let free: Vec<usize> = (0..target.ambient_dim())
            .filter(|c| !target.pivots().contains(c))
            .collect();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for exps in Monomial::all_of_degree(&Var::xs()[..4], k as u32) {
            // mu = product of the point's forms with these exponents
            let mut mu = Polynomial::constant(crate::exactalg::q(1));
            for (v, e) in exps.factors() {
                mu = &mu * &forms[v.0 as usize].pow(e as u32);
            }
            let residues: Vec<Vec<Rational>> = basis
                .monomials()
                .iter()
                .map(|m| {
                    let prod = mu.mul_monomial(m);
                    let v = target.basis().coordinates(&prod).expect("degree matches");
                    target.residue(&v)
                })
                .collect();
            for &c in &free {
                if residues.iter().any(|r| !r[c].is_zero()) {
                    rows.push(residues.iter().map(|r| r[c].clone()).collect());
                }
            }
        }
        let kernel = QMatrix::from_rows(rows, basis.len()).kernel_basis();
        current = DegreePiece::from_rows(basis.clone(), kernel.row_vecs());
        dims.push(current.dim());
        if k >= 2 && dims[k] == dims[k - 1] && dims[k - 1] == dims[k - 2] {
            return Ok(current);
        }
    }
    Err(Error::NonStabilizing { cap, dims })
}
