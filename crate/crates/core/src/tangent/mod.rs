//! Tangent spaces to the Pfaffian-zero locus, degree-2 parts of its tangent
//! cones, the parametric 2-jet test for types (c)/(e), and orbit dimensions.
//!
//! Coordinates on the space of skew matrices of linear forms are `a_ijk`, the
//! coefficient of `x_k` in entry `(i, j)`, `i < j`, all 0-based. Column `c`
//! of every 75-column system is `a_ijk` with `(i, j)` the `c / 5`-th pair and
//! `k = c % 5`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::classify::{classify, Label};
use crate::error::{Error, Result};
use crate::exactalg::{
    pair_of, CommRing, DegreePiece, Echelon, MonomialBasis, Polynomial, QMatrix, Rational, Var, NPAIRS, NX,
};
use crate::jets::Jet;
use crate::pfaffcalc::{laplace_sign, rank0_point, saturate_piece, SkewLinMatrix, SkewMatrix};

/// Number of coordinates `a_ijk`.
pub const NCOORDS: usize = NPAIRS * NX;

pub fn a_var(c: usize) -> Var {
    let (i, j) = pair_of(c / NX);
    Var::a(i, j, c % NX)
}

pub fn b_var(c: usize) -> Var {
    let (i, j) = pair_of(c / NX);
    Var::b(i, j, c % NX)
}

/// The generic skew matrix `(sum_k v_ijk x_k)` in the variables `var(c)`.
pub fn symbolic_matrix(var: impl Fn(usize) -> Var) -> SkewMatrix<Polynomial> {
    let mut m: SkewMatrix<Polynomial> = SkewMatrix::zeros(6);
    for c in 0..NCOORDS {
        let (i, j) = pair_of(c / NX);
        let t = &Polynomial::var(var(c)) * &Polynomial::x(c % NX);
        let e = m.upper(i, j).plus(&t);
        m.set(i, j, e);
    }
    m
}

/// Coefficients of `eps` and `eps^2` in `Pf(M + eps A + eps^2 B)` for
/// skew matrices over the polynomial ring.
pub fn pfaffian_jet2(
    m: &SkewMatrix<Polynomial>,
    a: &SkewMatrix<Polynomial>,
    b: &SkewMatrix<Polynomial>,
) -> (Polynomial, Polynomial) {
    let j = SkewMatrix::from_fn(m.size(), |i, k| {
        Jet::new(
            2,
            vec![m.upper(i, k).clone(), a.upper(i, k).clone(), b.upper(i, k).clone()],
        )
    });
    let pf = j.pfaffian().expect("even size");
    (pf.coeff(1), pf.coeff(2))
}

/// The linear map `M' -> F'` taking a tangent direction to the first-order
/// change of the Pfaffian, together with its kernel.
#[derive(Clone, Debug)]
pub struct TangentSystem {
    base: SkewLinMatrix,
    cubics: Arc<MonomialBasis>,
    matrix: QMatrix,
    echelon: Echelon,
    free: Vec<usize>,
    param: Vec<Polynomial>,
}

impl TangentSystem {
    /// Column `(i, j, k)` holds the cubic `laplace_sign(i, j) x_k q_ij(M)`.
    pub fn new(m: &SkewLinMatrix) -> Result<Self> {
        m.require_pfaffian_zero()?;
        let cubics = MonomialBasis::x(3);
        let q = m.sub_pfaffians();
        let mut matrix = QMatrix::zeros(cubics.len(), NCOORDS);
        for c in 0..NCOORDS {
            let (i, j) = pair_of(c / NX);
            let col = Polynomial::x(c % NX) * q[c / NX].scale(&Rational::from_integer(laplace_sign(i, j).into()));
            for (r, v) in cubics.coordinates(&col)?.into_iter().enumerate() {
                matrix[(r, c)] = v;
            }
        }
        let echelon = matrix.echelon();
        let free: Vec<usize> = (0..NCOORDS).filter(|c| !echelon.pivots.contains(c)).collect();
        let mut param: Vec<Polynomial> = (0..NCOORDS).map(|c| Polynomial::var(a_var(c))).collect();
        for (r, &p) in echelon.pivots.iter().enumerate() {
            let mut v = Polynomial::zero();
            for &f in &free {
                let e = &echelon.matrix[(r, f)];
                if !e.is_zero() {
                    v = v - Polynomial::var(a_var(f)).scale(e);
                }
            }
            param[p] = v;
        }
        Ok(TangentSystem {
            base: m.clone(),
            cubics,
            matrix,
            echelon,
            free,
            param,
        })
    }

    pub fn base(&self) -> &SkewLinMatrix {
        &self.base
    }

    /// The 35 x 75 matrix.
    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn cubic_basis(&self) -> &Arc<MonomialBasis> {
        &self.cubics
    }

    /// Codimension of the tangent space in the 75-dimensional space.
    pub fn codim(&self) -> usize {
        self.echelon.pivots.len()
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Coordinates kept as parameters of the tangent space.
    pub fn free_vars(&self) -> Vec<Var> {
        self.free.iter().map(|&c| a_var(c)).collect()
    }

    /// Each `a_ijk` written as a linear form in [`Self::free_vars`].
    pub fn parametrization(&self) -> &[Polynomial] {
        &self.param
    }

    /// Tangent direction as a symbolic skew matrix in the free parameters.
    pub fn symbolic_tangent(&self) -> SkewMatrix<Polynomial> {
        let mut m: SkewMatrix<Polynomial> = SkewMatrix::zeros(6);
        for c in 0..NCOORDS {
            let (i, j) = pair_of(c / NX);
            let e = m.upper(i, j).plus(&(&self.param[c] * &Polynomial::x(c % NX)));
            m.set(i, j, e);
        }
        m
    }

    /// The tangent vector with the given values of the free parameters.
    pub fn tangent_vector(&self, free_values: &[Rational]) -> SkewLinMatrix {
        assert_eq!(free_values.len(), self.free.len());
        let mut v = vec![Rational::zero(); NCOORDS];
        for (&f, val) in self.free.iter().zip(free_values) {
            v[f] = val.clone();
        }
        for (r, &p) in self.echelon.pivots.iter().enumerate() {
            let mut s = Rational::zero();
            for (&f, val) in self.free.iter().zip(free_values) {
                s -= &self.echelon.matrix[(r, f)] * val;
            }
            v[p] = s;
        }
        SkewLinMatrix::from_coefficient_vector(6, &v)
    }

    pub fn is_tangent(&self, m1: &SkewLinMatrix) -> bool {
        self.matrix.mul_vec(&m1.coefficient_vector()).iter().all(Zero::is_zero)
    }

    /// Substitutes the parametrization for every `a_ijk` in `p`.
    pub fn restrict(&self, p: &Polynomial) -> Polynomial {
        let map: HashMap<Var, Polynomial> = self
            .echelon
            .pivots
            .iter()
            .map(|&c| (a_var(c), self.param[c].clone()))
            .collect();
        p.substitute(&map)
    }

    /// Canonical span of quadrics in the `a_ijk` after restriction to the
    /// tangent space.
    pub fn restricted_span(&self, quadrics: &[Polynomial]) -> Result<DegreePiece> {
        let basis = MonomialBasis::new(&self.free_vars(), 2);
        let restricted: Vec<Polynomial> = quadrics.iter().map(|q| self.restrict(q)).collect();
        DegreePiece::span(basis, &restricted)
    }

    /// A second-order term `M2` with `Pf(M + eps m1 + eps^2 M2) = 0` modulo
    /// `eps^3`, if one exists. `m1` must be tangent.
    pub fn lift(&self, m1: &SkewLinMatrix) -> Option<SkewLinMatrix> {
        let zero = SkewMatrix::zeros(6);
        let (first, second) = pfaffian_jet2(&self.base.to_skew(), &m1.to_skew(), &zero);
        if !first.is_zero() {
            return None;
        }
        let rhs = self.cubics.coordinates(&-second).expect("cubic");
        self.matrix
            .solve(&rhs)
            .map(|b| SkewLinMatrix::from_coefficient_vector(6, &b))
    }
}

pub fn tangent_codim(m: &SkewLinMatrix) -> Result<usize> {
    Ok(TangentSystem::new(m)?.codim())
}

/// Quadrics in the tangent coordinates lying in the degree-2 part of the
/// tangent cone's ideal.
#[derive(Clone, Debug)]
pub struct ConeQuadrics {
    pub system: TangentSystem,
    /// Canonical span, over [`TangentSystem::free_vars`].
    pub piece: DegreePiece,
}

impl ConeQuadrics {
    pub fn dim(&self) -> usize {
        self.piece.dim()
    }

    /// Whether the given quadrics in the `a_ijk` span the same space after
    /// restriction to the tangent space.
    pub fn equals_span(&self, quadrics: &[Polynomial]) -> Result<bool> {
        Ok(self.system.restricted_span(quadrics)? == self.piece)
    }
}

/// Degree-2 part of the tangent cone ideal.
///
/// With `M'` the generic tangent vector and `M''` generic in the `b_ijk`, the
/// `eps^2` coefficient of `Pf(M + eps M' + eps^2 M'')` has cubic coefficients
/// `q_m(a) + l_m(b)`. The combinations free of `b` are the quadrics returned.
pub fn cone_deg2(m: &SkewLinMatrix) -> Result<ConeQuadrics> {
    let system = TangentSystem::new(m)?;
    let (_, second) = pfaffian_jet2(&m.to_skew(), &symbolic_matrix(a_var), &symbolic_matrix(b_var));
    let by_x = second.coefficients_in(Var::is_x);
    let cubics = system.cubic_basis().clone();
    let mut a_part = vec![Polynomial::zero(); cubics.len()];
    let mut b_coeffs = QMatrix::zeros(cubics.len(), NCOORDS);
    let b_index: HashMap<Var, usize> = (0..NCOORDS).map(|c| (b_var(c), c)).collect();
    for (mono, coeff) in by_x {
        let r = cubics.position(&mono).expect("cubic coefficient");
        for (inner, c) in coeff.terms() {
            let mut bs = inner.factors().filter(|(v, _)| v.is_b());
            match bs.next() {
                Some((v, 1)) if bs.next().is_none() && inner.degree() == 1 => b_coeffs[(r, b_index[&v])] += c,
                Some(_) => unreachable!("b enters linearly"),
                None => a_part[r].add_term(inner.clone(), c.clone()),
            }
        }
    }
    let lambdas = b_coeffs.transpose().kernel_basis();
    let quadrics: Vec<Polynomial> = (0..lambdas.rows())
        .map(|k| {
            let mut acc = Polynomial::zero();
            for (r, l) in lambdas.row(k).iter().enumerate() {
                if !l.is_zero() {
                    acc = acc + a_part[r].scale(l);
                }
            }
            acc
        })
        .collect();
    let piece = system.restricted_span(&quadrics)?;
    Ok(ConeQuadrics { system, piece })
}

/// `a_ijk` from its three digits, as in `a054`.
pub fn a_named(i: usize, j: usize, k: usize) -> Polynomial {
    Polynomial::var(Var::a(i, j, k))
}

/// The degree-2 tangent cone data printed for each type, as quadrics in the
/// `a_ijk`.
#[derive(Clone, Debug)]
pub enum PrintedCone {
    Zero,
    Span(Vec<Polynomial>),
    /// Degree-2 part of `minors_2(N1 | N2)` intersected with
    /// `minors_2(N1 over N2)`.
    MinorsIntersection {
        n1: Box<[[Polynomial; 2]; 3]>,
        n2: Box<[[Polynomial; 2]; 3]>,
    },
}

pub fn printed_cone(label: Label) -> PrintedCone {
    let a = a_named;
    match label {
        Label::A | Label::B | Label::D => PrintedCone::Zero,
        Label::C => PrintedCone::Span(vec![
            &(a(1, 2, 4) - a(3, 5, 4)) * &a(0, 5, 4),
            &(a(0, 2, 4) - a(3, 4, 4)) * &a(0, 5, 4),
        ]),
        Label::E => PrintedCone::Span(vec![&a(4, 5, 4) * &a(0, 1, 4), &a(3, 5, 4) * &a(0, 1, 4)]),
        Label::F => PrintedCone::MinorsIntersection {
            n1: Box::new([
                [a(1, 2, 4), a(4, 5, 4)],
                [a(0, 2, 4), a(3, 5, 4)],
                [a(0, 1, 4), a(3, 4, 4)],
            ]),
            n2: Box::new([
                [a(1, 2, 3), a(4, 5, 3)],
                [a(0, 2, 3), a(3, 5, 3)],
                [a(0, 1, 3), a(3, 4, 3)],
            ]),
        },
    }
}

fn minors2(rows: &[Vec<Polynomial>]) -> Vec<Polynomial> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for r0 in 0..rows.len() {
        for r1 in r0 + 1..rows.len() {
            for c0 in 0..cols {
                for c1 in c0 + 1..cols {
                    out.push(&rows[r0][c0] * &rows[r1][c1] - &rows[r0][c1] * &rows[r1][c0]);
                }
            }
        }
    }
    out
}

impl PrintedCone {
    /// Generators of the printed degree-2 span, in the `a_ijk`.
    pub fn quadrics(&self) -> Result<Vec<Polynomial>> {
        Ok(match self {
            PrintedCone::Zero => Vec::new(),
            PrintedCone::Span(q) => q.clone(),
            PrintedCone::MinorsIntersection { n1, n2 } => {
                let horizontal: Vec<Vec<Polynomial>> =
                    (0..3).map(|i| n1[i].iter().chain(&n2[i]).cloned().collect()).collect();
                let vertical: Vec<Vec<Polynomial>> = n1.iter().chain(n2.iter()).map(|r| r.to_vec()).collect();
                let mut vars: Vec<Var> = n1
                    .iter()
                    .chain(n2.iter())
                    .flatten()
                    .flat_map(Polynomial::vars)
                    .collect();
                vars.sort();
                vars.dedup();
                let basis = MonomialBasis::new(&vars, 2);
                let h = DegreePiece::span(basis.clone(), &minors2(&horizontal))?;
                let v = DegreePiece::span(basis, &minors2(&vertical))?;
                h.intersection(&v)?.polynomials()
            }
        })
    }
}

/// Outcome of [`parametric_2jet_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoJetReport {
    pub label: Label,
    pub ideal_dim: usize,
    pub saturated_dim: usize,
    /// `F'` vanishes identically on the tangent parametrization.
    pub first_order_vanishes: bool,
    /// Number of residue coordinates of `G` that are nonzero polynomials.
    pub nonzero_residues: usize,
}

impl TwoJetReport {
    pub fn passed(&self) -> bool {
        self.first_order_vanishes && self.nonzero_residues == 0
    }
}

/// For `M` of type (c) or (e): writes `Pf(M + eps M1 + eps^2 M2) = eps^2 G`
/// with `M1` the generic tangent vector and `M2` generic, and tests whether
/// every coefficient of `G` vanishes modulo the saturated degree-3 piece of
/// the sub-Pfaffian ideal, as a polynomial identity in all parameters.
pub fn parametric_2jet_check(m: &SkewLinMatrix, colon_cap: usize) -> Result<TwoJetReport> {
    let label = classify(m)?.label;
    if !matches!(label, Label::C | Label::E) {
        return Err(Error::WrongType(label));
    }
    let system = TangentSystem::new(m)?;
    let (first, second) = pfaffian_jet2(&m.to_skew(), &symbolic_matrix(a_var), &symbolic_matrix(b_var));
    let first_order_vanishes = system.restrict(&first).is_zero();

    let gens = m.sub_pfaffians();
    let ideal_dim = crate::pfaffcalc::ideal_piece(&gens, 3)?.dim();
    let sat = saturate_piece(&gens, &rank0_point(m)?, 3, colon_cap)?;
    let by_x = second.coefficients_in(Var::is_x);
    let mut coords = vec![Polynomial::zero(); sat.ambient_dim()];
    for (mono, coeff) in by_x {
        coords[sat.basis().position(&mono).expect("cubic coefficient")] = coeff;
    }
    // residues are linear in the coordinates, so restriction to the tangent
    // space can follow the reduction
    let nonzero_residues = sat
        .residue_symbolic(&coords)
        .iter()
        .filter(|r| !system.restrict(r).is_zero())
        .count();
    Ok(TwoJetReport {
        label,
        ideal_dim,
        saturated_dim: sat.dim(),
        first_order_vanishes,
        nonzero_residues,
    })
}

/// Rank of the infinitesimal action `(g, h) -> g^T M + M g + M(h x)` of
/// `gl6 + gl5`, a 75 x 61 matrix.
pub fn orbit_rank(m: &SkewLinMatrix) -> usize {
    QMatrix::from_rows(action_columns(m), NCOORDS).rank()
}

fn action_columns(m: &SkewLinMatrix) -> Vec<Vec<Rational>> {
    let full = m.lin_matrix();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(61);
    for r in 0..6 {
        for s in 0..6 {
            // g = E_rs: (g^T M)_ij = [i = s] M_rj and (M g)_ij = [j = s] M_ir
            let img = SkewLinMatrix::from_fn(6, |i, j| {
                let mut f = crate::pfaffcalc::zero_form();
                if i == s {
                    for (o, v) in f.iter_mut().zip(full.form(r, j)) {
                        *o += v;
                    }
                }
                if j == s {
                    for (o, v) in f.iter_mut().zip(full.form(i, r)) {
                        *o += v;
                    }
                }
                f
            });
            cols.push(img.coefficient_vector());
        }
    }
    for k in 0..NX {
        for l in 0..NX {
            let mut h = QMatrix::zeros(NX, NX);
            h[(k, l)] = crate::exactalg::q(1);
            cols.push(m.change_coordinates(&h).coefficient_vector());
        }
    }
    cols
}

/// Codimension of the orbit of `[M]` in `P(S)`, the projective space of
/// dimension 74.
///
/// The affine image of the action contains `M` itself (take `g` scalar), so
/// the projective orbit has dimension `rank - 1` and codimension
/// `74 - (rank - 1) = 75 - rank`.
pub fn orbit_codim(m: &SkewLinMatrix) -> usize {
    NCOORDS - orbit_rank(m)
}
