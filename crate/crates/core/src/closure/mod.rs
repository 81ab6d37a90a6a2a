//! Membership of a pair (matrix, cubic) in the closure of the incidence
//! correspondence, with 1-jet witnesses where the matrix has type (a), (b)
//! or (d).

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::classify::{classify, Label};
use crate::error::{Error, Result};
use crate::exactalg::poly::parse_exponent_key;
use crate::exactalg::{rational, DegreePiece, MonomialBasis, Polynomial, QMatrix, Rational, Var, NX};
use crate::jets::{jet_pfaffian, JetMatrix};
use crate::pfaffcalc::{ideal_piece, rank0_point, saturate_piece, SkewLinMatrix, DEFAULT_COLON_CAP};
use crate::tangent::TangentSystem;

/// A nonzero cubic form in `x0..x4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForm(Polynomial);

impl CubicForm {
    pub fn new(p: Polynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroCubic);
        }
        if !p.vars().iter().all(|v| v.is_x()) || p.homogeneous_degree_in(Var::is_x) != Some(3) {
            return Err(Error::NonHomogeneous {
                degree: 3,
                poly: p.to_string(),
            });
        }
        Ok(CubicForm(p))
    }

    pub fn poly(&self) -> &Polynomial {
        &self.0
    }

    pub fn into_poly(self) -> Polynomial {
        self.0
    }

    /// Coordinates in the basis of the 35 cubic monomials.
    pub fn coordinates(&self) -> Vec<Rational> {
        MonomialBasis::x(3).coordinates(&self.0).expect("cubic")
    }

    pub fn change_coordinates(&self, c: &QMatrix) -> CubicForm {
        CubicForm(self.0.change_coordinates(c))
    }

    /// Parses a map from exponent vectors such as `"3,0,0,0,0"` to rational
    /// strings. Two keys naming the same monomial are rejected.
    pub fn from_exponent_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut p = Polynomial::zero();
        let mut seen = std::collections::HashSet::new();
        for (key, value) in map {
            let mono = parse_exponent_key(key)?;
            if mono.degree() != 3 {
                return Err(Error::Parse(format!("exponent vector {key:?} must sum to 3")));
            }
            if !seen.insert(mono.clone()) {
                return Err(Error::Parse(format!("monomial {key:?} given twice")));
            }
            p.add_term(mono, rational::parse(value)?);
        }
        CubicForm::new(p)
    }

    pub fn to_exponent_map(&self) -> BTreeMap<String, String> {
        self.0
            .terms()
            .map(|(m, c)| {
                let key: Vec<String> = m.exponents(NX).iter().take(NX).map(u16::to_string).collect();
                (key.join(","), rational::to_string(c))
            })
            .collect()
    }
}

impl Serialize for CubicForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_exponent_map().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubicForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, String>::deserialize(d)?;
        CubicForm::from_exponent_map(&map).map_err(serde::de::Error::custom)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    PfaffianNonzero,
    TypeAbd,
    TypeCe,
    TypeF,
}

impl Branch {
    pub fn of(label: Label) -> Branch {
        match label {
            Label::A | Label::B | Label::D => Branch::TypeAbd,
            Label::C | Label::E => Branch::TypeCe,
            Label::F => Branch::TypeF,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// `F = c Pf(M)`.
    Factor(#[serde(with = "rational::serde_str")] Rational),
    /// A 1-jet `M + e M1` with `Pf = e F`.
    Witness(JetMatrix),
    /// Coordinates of `F` in the row basis of the test piece.
    Coordinates(#[serde(with = "rational::serde_vec")] Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureVerdict {
    pub answer: Answer,
    pub branch: Branch,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl ClosureVerdict {
    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

/// Degree-3 piece of the ideal of the degree-2 curve attached to `m`.
pub fn test_piece(m: &SkewLinMatrix) -> Result<DegreePiece> {
    test_piece_with(m, DEFAULT_COLON_CAP)
}

pub fn test_piece_with(m: &SkewLinMatrix, colon_cap: usize) -> Result<DegreePiece> {
    let label = classify(m)?.label;
    piece_for(m, label, colon_cap)
}

fn piece_for(m: &SkewLinMatrix, label: Label, colon_cap: usize) -> Result<DegreePiece> {
    let subpf = m.sub_pfaffians();
    match Branch::of(label) {
        Branch::TypeAbd => ideal_piece(&subpf, 3),
        Branch::TypeCe => saturate_piece(&subpf, &rank0_point(m)?, 3, colon_cap),
        _ => ideal_piece(&m.entry_span().polynomials(), 3),
    }
}

/// `sum_{a<b} (-1)^(a+b+1) N[a][b] q_ab(M)`, the first-order change of the
/// Pfaffian along `N`.
pub fn laplace_cubic(m: &SkewLinMatrix, n: &SkewLinMatrix) -> Polynomial {
    m.to_skew().pfaffian_derivative(&n.to_skew())
}

/// A 1-jet `M + e M1` whose Pfaffian is exactly `e F`.
pub fn witness_jet(m: &SkewLinMatrix, f: &CubicForm) -> Result<JetMatrix> {
    let sys = TangentSystem::new(m)?;
    let v = sys.matrix().solve(&f.coordinates()).ok_or(Error::NotInPiece)?;
    let m1 = SkewLinMatrix::from_coefficient_vector(m.size(), &v);
    Ok(JetMatrix::new(1, vec![m.clone(), m1]))
}

/// Whether `jet_pfaffian(j)` starts with `e c F` for some `c != 0`.
pub fn witness_is_valid(j: &JetMatrix, f: &CubicForm) -> bool {
    let Ok(pf) = jet_pfaffian(j) else {
        return false;
    };
    match pf.first_nonzero() {
        Some((1, g)) => proportional(&g, f.poly()).is_some_and(|c| !c.is_zero()),
        _ => false,
    }
}

/// `c` with `p = c g`, if any; `g` must be nonzero.
fn proportional(p: &Polynomial, g: &Polynomial) -> Option<Rational> {
    let (m, c) = g.terms().next()?;
    let factor = p.coefficient(m) / c;
    (p == &g.scale(&factor)).then_some(factor)
}

pub fn in_closure(m: &SkewLinMatrix, f: &CubicForm) -> Result<ClosureVerdict> {
    in_closure_with(m, f, DEFAULT_COLON_CAP)
}

pub fn in_closure_with(m: &SkewLinMatrix, f: &CubicForm, colon_cap: usize) -> Result<ClosureVerdict> {
    let pf = m.pfaffian()?;
    if !pf.is_zero() {
        // F = c Pf with c != 0, because F is nonzero
        let c = proportional(f.poly(), &pf);
        return Ok(ClosureVerdict {
            answer: if c.is_some() { Answer::Yes } else { Answer::No },
            branch: Branch::PfaffianNonzero,
            label: None,
            certificate: c.map(Certificate::Factor),
        });
    }
    let label = classify(m)?.label;
    let branch = Branch::of(label);
    let piece = piece_for(m, label, colon_cap)?;
    let coords = piece.coordinates_of(f.poly())?;
    let certificate = match (branch, coords) {
        (_, None) => None,
        (Branch::TypeAbd, Some(_)) => Some(Certificate::Witness(witness_jet(m, f)?)),
        (_, Some(c)) => Some(Certificate::Coordinates(c)),
    };
    Ok(ClosureVerdict {
        answer: if certificate.is_some() { Answer::Yes } else { Answer::No },
        branch,
        label: Some(label),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::catalog;
    use crate::exactalg::q;

    fn x(k: usize) -> Polynomial {
        Polynomial::x(k)
    }

    #[test]
    fn cubic_rejects_zero_and_quadrics() {
        assert!(matches!(CubicForm::new(Polynomial::zero()), Err(Error::ZeroCubic)));
        assert!(CubicForm::new(&x(0) * &x(1)).is_err());
        assert!(CubicForm::new(x(0).pow(3) + x(1)).is_err());
    }

    #[test]
    fn exponent_map_roundtrip() {
        let f = CubicForm::new(x(3).pow(3) - (&(&x(0) * &x(1)) * &x(4)).scale(&crate::exactalg::frac(2, 3))).unwrap();
        let map = f.to_exponent_map();
        assert_eq!(map.get("0,0,0,3,0").map(String::as_str), Some("1"));
        assert_eq!(map.get("1,1,0,0,1").map(String::as_str), Some("-2/3"));
        assert_eq!(CubicForm::from_exponent_map(&map).unwrap(), f);
        let mut bad = BTreeMap::new();
        bad.insert("2,0,0,0,0".to_string(), "1".to_string());
        assert!(matches!(CubicForm::from_exponent_map(&bad), Err(Error::Parse(_))));
        let mut twice = BTreeMap::new();
        twice.insert("3,0,0,0,0".to_string(), "1".to_string());
        twice.insert("[3, 0, 0, 0, 0]".to_string(), "0".to_string());
        assert!(matches!(CubicForm::from_exponent_map(&twice), Err(Error::Parse(_))));
    }

    #[test]
    fn f_type_rejects_x3_cubed() {
        let m = catalog(Label::F).m;
        let v = in_closure(&m, &CubicForm::new(x(3).pow(3)).unwrap()).unwrap();
        assert_eq!((v.answer, v.branch), (Answer::No, Branch::TypeF));
        let v = in_closure(&m, &CubicForm::new(&x(0) * &(&x(3) * &x(4))).unwrap()).unwrap();
        assert!(v.is_yes());
    }

    #[test]
    fn f_piece_has_dimension_31() {
        assert_eq!(test_piece(&catalog(Label::F).m).unwrap().dim(), 31);
    }

    #[test]
    fn nonzero_pfaffian_branch() {
        let mut m = SkewLinMatrix::zeros(6);
        for (i, j, k) in [(0, 1, 0), (2, 3, 1), (4, 5, 2)] {
            m.set(i, j, crate::pfaffcalc::unit_form(k));
        }
        let pf = m.pfaffian().unwrap();
        let yes = in_closure(&m, &CubicForm::new(pf.scale(&q(-4))).unwrap()).unwrap();
        assert_eq!(yes.certificate, Some(Certificate::Factor(q(-4))));
        let no = in_closure(&m, &CubicForm::new(x(3).pow(3)).unwrap()).unwrap();
        assert_eq!((no.answer, no.branch), (Answer::No, Branch::PfaffianNonzero));
    }

    #[test]
    fn laplace_cubic_has_a_witness() {
        let m = catalog(Label::D).m;
        let q = m.sub_pfaffians();
        let f = CubicForm::new(&x(4) * &q.iter().find(|p| !p.is_zero()).unwrap().clone()).unwrap();
        let v = in_closure(&m, &f).unwrap();
        let Some(Certificate::Witness(j)) = &v.certificate else {
            panic!("expected a witness, got {v:?}");
        };
        assert!(witness_is_valid(j, &f));
        assert_eq!(laplace_cubic(&m, &j.coeffs()[1]), f.poly().clone());
    }
}
