//! Truncated jets: `f0 + f1 e + ... + fn e^n` with `e^(n+1) = 0`.
//!
//! A [`Jet`] carries its order as a value. Ring operations on jets of
//! different orders work in the smaller order. The constants produced by
//! `CommRing::zero`/`one` have unbounded order ([`EXACT`]), so they can be
//! mixed with jets of any order.

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{CommRing, Polynomial, QMatrix, Rational};
use crate::pfaffcalc::{SkewLinMatrix, SkewMatrix};

/// Order of jets that are exact (no truncation).
pub const EXACT: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct Jet<R> {
    order: usize,
    /// Coefficients up to the last nonzero one; missing ones are zero.
    coeffs: Vec<R>,
}

pub type JetPolynomial = Jet<Polynomial>;
pub type ScalarJet = Jet<Rational>;

impl<R: CommRing> Jet<R> {
    pub fn new(order: usize, mut coeffs: Vec<R>) -> Self {
        if order != EXACT {
            coeffs.truncate(order + 1);
        }
        while coeffs.last().is_some_and(R::is_ring_zero) {
            coeffs.pop();
        }
        Jet { order, coeffs }
    }

    pub fn constant(c: R, order: usize) -> Self {
        Self::new(order, vec![c])
    }

    pub fn zero_of_order(order: usize) -> Self {
        Jet {
            order,
            coeffs: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::ring_zero)
    }

    /// Coefficients `f0..fn`, padded with zeros to the full order (or to
    /// the last nonzero one for exact jets).
    pub fn coeffs(&self) -> Vec<R> {
        let len = if self.order == EXACT {
            self.coeffs.len()
        } else {
            self.order + 1
        };
        (0..len).map(|k| self.coeff(k)).collect()
    }

    /// Same coefficients, reinterpreted at order `m`. Lowering drops terms,
    /// raising pads with zeros; used where an exact value meets a jet order.
    pub fn with_order(&self, m: usize) -> Self {
        Self::new(m, self.coeffs.clone())
    }

    /// Drops the coefficients above `m`.
    pub fn truncate(&self, m: usize) -> Result<Self> {
        if m > self.order {
            return Err(Error::OrderTooLarge {
                order: self.order,
                requested: m,
            });
        }
        Ok(Self::new(m, self.coeffs.clone()))
    }

    /// Substitutes `e -> s^r`: the result has order `r n` and the
    /// coefficient of `s^k` is `f_{k/r}` when `r` divides `k`, else zero.
    pub fn cover(&self, r: usize) -> Self {
        assert!(r >= 1, "covering multiplicity must be positive");
        let order = if self.order == EXACT { EXACT } else { self.order * r };
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * r);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                coeffs.extend(std::iter::repeat_with(R::ring_zero).take(r - 1));
            }
            coeffs.push(c.clone());
        }
        Self::new(order, coeffs)
    }

    /// Smallest index with a nonzero coefficient, with that coefficient;
    /// `None` for the zero jet.
    pub fn first_nonzero(&self) -> Option<(usize, R)> {
        self.coeffs
            .iter()
            .position(|c| !c.is_ring_zero())
            .map(|k| (k, self.coeffs[k].clone()))
    }

    pub fn map<S: CommRing>(&self, f: impl Fn(&R) -> S) -> Jet<S> {
        Jet::new(self.order, self.coeffs.iter().map(f).collect())
    }
}

impl<R: CommRing> PartialEq for Jet<R> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.coeffs == other.coeffs
    }
}

impl<R: CommRing> CommRing for Jet<R> {
    fn ring_zero() -> Self {
        Jet::zero_of_order(EXACT)
    }
    fn ring_one() -> Self {
        Jet::constant(R::ring_one(), EXACT)
    }
    fn is_ring_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Jet::new(
            self.order.min(other.order),
            (0..n).map(|k| self.coeff(k).plus(&other.coeff(k))).collect(),
        )
    }
    fn minus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Jet::new(
            self.order.min(other.order),
            (0..n).map(|k| self.coeff(k).minus(&other.coeff(k))).collect(),
        )
    }
    fn times(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Jet::zero_of_order(order);
        }
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if order != EXACT {
            len = len.min(order + 1);
        }
        let mut out = vec![R::ring_zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_ring_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_ring_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Jet::new(order, out)
    }
    fn negate(&self) -> Self {
        Jet::new(self.order, self.coeffs.iter().map(R::negate).collect())
    }
    fn from_rational(r: &Rational) -> Self {
        Jet::constant(R::from_rational(r), EXACT)
    }
    fn scale(&self, r: &Rational) -> Self {
        Jet::new(self.order, self.coeffs.iter().map(|c| c.scale(r)).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct JetJson<T> {
    order: usize,
    coeffs: Vec<T>,
}

/// `{"order": n, "coeffs": [f0, ..., fn]}` with polynomials in their usual
/// list-of-terms form.
impl Serialize for JetPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let order = if self.order == EXACT {
            self.coeffs.len().saturating_sub(1)
        } else {
            self.order
        };
        JetJson {
            order,
            coeffs: self.with_order(order).coeffs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JetPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = JetJson::<Polynomial>::deserialize(d)?;
        if raw.coeffs.len() > raw.order + 1 {
            return Err(serde::de::Error::custom(format!(
                "jet of order {} has {} coefficients",
                raw.order,
                raw.coeffs.len()
            )));
        }
        Ok(Jet::new(raw.order, raw.coeffs))
    }
}

/// `M0 + e M1 + ... + e^n Mn` with skew matrices of linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetMatrix {
    order: usize,
    coeffs: Vec<SkewLinMatrix>,
}

impl JetMatrix {
    /// `coeffs` may be shorter than `order + 1`; missing terms are zero.
    pub fn new(order: usize, coeffs: Vec<SkewLinMatrix>) -> Self {
        assert!(!coeffs.is_empty(), "a jet matrix needs its centre");
        let n = coeffs[0].size();
        assert!(
            coeffs.iter().all(|c| c.size() == n),
            "jet coefficients of different sizes"
        );
        let mut coeffs = coeffs;
        coeffs.truncate(order + 1);
        while coeffs.len() < order + 1 {
            coeffs.push(SkewLinMatrix::zeros(n));
        }
        JetMatrix { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.coeffs[0].size()
    }

    pub fn coeffs(&self) -> &[SkewLinMatrix] {
        &self.coeffs
    }

    pub fn centre(&self) -> &SkewLinMatrix {
        &self.coeffs[0]
    }

    pub fn truncate(&self, m: usize) -> Result<Self> {
        if m > self.order {
            return Err(Error::OrderTooLarge {
                order: self.order,
                requested: m,
            });
        }
        Ok(JetMatrix::new(m, self.coeffs[..=m].to_vec()))
    }

    /// Truncates or zero-extends to order `m`.
    pub fn with_order(&self, m: usize) -> Self {
        JetMatrix::new(m, self.coeffs[..self.coeffs.len().min(m + 1)].to_vec())
    }

    pub fn cover(&self, r: usize) -> Self {
        assert!(r >= 1, "covering multiplicity must be positive");
        let n = self.size();
        let mut coeffs = vec![SkewLinMatrix::zeros(n); self.order * r + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * r] = c.clone();
        }
        JetMatrix::new(self.order * r, coeffs)
    }

    /// Entry-wise jets of polynomials.
    pub fn to_skew(&self) -> SkewMatrix<JetPolynomial> {
        SkewMatrix::from_fn(self.size(), |i, j| {
            Jet::new(self.order, self.coeffs.iter().map(|c| c.entry(i, j)).collect())
        })
    }

    /// `B^T J B` coefficient-wise.
    pub fn congruence(&self, b: &QMatrix) -> Self {
        JetMatrix::new(self.order, self.coeffs.iter().map(|c| c.congruence(b)).collect())
    }
}

/// `{"order": n, "coeffs": [M0, ..., Mn]}` with matrices in the entries format.
impl Serialize for JetMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JetJson {
            order: self.order,
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JetMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = JetJson::<SkewLinMatrix>::deserialize(d)?;
        if raw.coeffs.is_empty() {
            return Err(D::Error::custom("jet matrix without coefficients"));
        }
        if raw.coeffs.len() > raw.order + 1 {
            return Err(D::Error::custom(format!(
                "jet of order {} has {} coefficients",
                raw.order,
                raw.coeffs.len()
            )));
        }
        if raw.coeffs.iter().any(|c| c.size() != raw.coeffs[0].size()) {
            return Err(D::Error::custom("jet coefficients of different sizes"));
        }
        Ok(JetMatrix::new(raw.order, raw.coeffs))
    }
}

/// Pfaffian of a jet matrix, computed in the truncated ring.
pub fn jet_pfaffian(j: &JetMatrix) -> Result<JetPolynomial> {
    Ok(j.to_skew().pfaffian()?.with_order(j.order))
}

/// Outcome of [`proportionality_check`].
#[derive(Clone, Debug, PartialEq)]
pub enum Proportionality {
    /// `jP = u jF` with `u` invertible (nonzero constant term).
    Unit(ScalarJet),
    /// `jP = u jF` only for `u` with vanishing constant term.
    NonUnit(ScalarJet),
    NotProportional,
}

impl Proportionality {
    pub fn is_unit(&self) -> bool {
        matches!(self, Proportionality::Unit(_))
    }

    pub fn factor(&self) -> Option<&ScalarJet> {
        match self {
            Proportionality::Unit(u) | Proportionality::NonUnit(u) => Some(u),
            Proportionality::NotProportional => None,
        }
    }
}

/// Solves `jP = u jF` for a scalar jet `u`, coefficient by coefficient, in
/// the common order of the two jets. A unit factor is returned whenever one
/// exists.
pub fn proportionality_check(jp: &JetPolynomial, jf: &JetPolynomial) -> Proportionality {
    let order = jp.order().min(jf.order());
    let n = if order == EXACT {
        jp.coeffs.len().max(jf.coeffs.len())
    } else {
        order + 1
    };
    if n == 0 {
        return Proportionality::Unit(Jet::constant(crate::exactalg::q(1), order));
    }
    // one equation per (power of e, monomial); unknowns u_0..u_{n-1}
    let mut monos = std::collections::BTreeSet::new();
    for k in 0..n {
        for p in [jp.coeff(k), jf.coeff(k)] {
            monos.extend(p.terms().map(|(m, _)| m.clone()));
        }
    }
    let monos: Vec<_> = monos.into_iter().collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for k in 0..n {
        for m in &monos {
            rows.push(
                (0..n)
                    .map(|i| {
                        if i <= k {
                            jf.coeff(k - i).coefficient(m)
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect(),
            );
            rhs.push(jp.coeff(k).coefficient(m));
        }
    }
    let sys = QMatrix::from_rows(rows, n);
    let Some(mut u) = sys.solve(&rhs) else {
        return Proportionality::NotProportional;
    };
    if u[0].is_zero() {
        let ker = sys.kernel_basis();
        if let Some(r) = (0..ker.rows()).find(|&r| !ker[(r, 0)].is_zero()) {
            for (ui, ki) in u.iter_mut().zip(ker.row(r)) {
                *ui += ki;
            }
        }
    }
    let unit = !u[0].is_zero();
    let u = Jet::new(order, u);
    if unit {
        Proportionality::Unit(u)
    } else {
        Proportionality::NonUnit(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;
    use crate::pfaffcalc::unit_form;

    fn x(k: usize) -> Polynomial {
        Polynomial::x(k)
    }

    fn cube(k: usize) -> Polynomial {
        x(k).pow(3)
    }

    #[test]
    fn truncate_identity_and_drop() {
        let j = Jet::new(2, vec![x(0), x(1), x(2)]);
        assert_eq!(j.truncate(2).unwrap(), j);
        assert_eq!(j.truncate(1).unwrap(), Jet::new(1, vec![x(0), x(1)]));
        assert_eq!(j.truncate(3), Err(Error::OrderTooLarge { order: 2, requested: 3 }));
    }

    #[test]
    fn cover_doubles() {
        let j = Jet::new(1, vec![x(0), x(1)]);
        assert_eq!(j.cover(1), j);
        assert_eq!(j.cover(2), Jet::new(2, vec![x(0), Polynomial::zero(), x(1)]));
    }

    #[test]
    fn product_truncates() {
        let e = Jet::new(1, vec![Polynomial::zero(), x(0)]);
        assert!(e.times(&e).is_zero());
        assert_eq!(e.times(&e).order(), 1);
    }

    #[test]
    fn exact_constants_adopt_order() {
        let j = Jet::new(2, vec![x(0), x(1)]);
        assert_eq!(j.plus(&Jet::ring_zero()).order(), 2);
        assert_eq!(j.times(&Jet::ring_one()), j);
    }

    #[test]
    fn first_nonzero_cases() {
        assert_eq!(JetPolynomial::zero_of_order(3).first_nonzero(), None);
        let j = Jet::new(2, vec![Polynomial::zero(), Polynomial::zero(), cube(0)]);
        assert_eq!(j.first_nonzero(), Some((2, cube(0))));
    }

    #[test]
    fn proportional_identity() {
        let jf = Jet::new(1, vec![cube(0), cube(1)]);
        match proportionality_check(&jf, &jf) {
            Proportionality::Unit(u) => assert_eq!(u, Jet::constant(q(1), 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn proportional_unit_factor() {
        let jf = Jet::new(1, vec![cube(0), cube(1)]);
        let u: ScalarJet = Jet::new(1, vec![q(2), q(3)]);
        let jp = jf.times(&u.map(|c| Polynomial::constant(c.clone())));
        assert_eq!(proportionality_check(&jp, &jf), Proportionality::Unit(u));
    }

    #[test]
    fn not_proportional() {
        let jp = Jet::new(1, vec![Polynomial::zero(), cube(0)]);
        let jf = Jet::new(1, vec![cube(1), &x(2) * &x(3).pow(2)]);
        assert_eq!(proportionality_check(&jp, &jf), Proportionality::NotProportional);
    }

    #[test]
    fn non_unit_factor() {
        // e F0 = e (F0 + e F1) in order 1
        let jf = Jet::new(1, vec![cube(0), cube(1)]);
        let jp = Jet::new(1, vec![Polynomial::zero(), cube(0)]);
        match proportionality_check(&jp, &jf) {
            Proportionality::NonUnit(u) => assert_eq!(u, Jet::new(1, vec![q(0), q(1)])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn jet_pfaffian_of_pfaffian_zero_centre() {
        let mut m = SkewLinMatrix::zeros(6);
        m.set(0, 1, unit_form(0));
        m.set(0, 2, unit_form(1));
        m.set(1, 2, unit_form(2));
        let j = JetMatrix::new(0, vec![m]);
        let pf = jet_pfaffian(&j).unwrap();
        assert!(pf.is_zero());
        assert_eq!(pf.order(), 0);
    }

    #[test]
    fn json_roundtrip() {
        let jf = Jet::new(2, vec![cube(0), Polynomial::zero(), cube(1)]);
        let s = serde_json::to_string(&jf).unwrap();
        let back: JetPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, jf);
        let mut m = SkewLinMatrix::zeros(6);
        m.set(0, 1, unit_form(0));
        let jm = JetMatrix::new(1, vec![m.clone(), m]);
        let back: JetMatrix = serde_json::from_str(&serde_json::to_string(&jm).unwrap()).unwrap();
        assert_eq!(back, jm);
    }
}
