use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::{Monomial, Var, NX};
use super::rational::{self, Rational};

use crate::error::{Error, Result};

/// Sparse polynomial with rational coefficients. Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn x(k: usize) -> Self {
        Self::var(Var::x(k))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// `sum_k coeffs[k] * x_k`.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        Self::linear_in(&Var::xs()[..coeffs.len()], coeffs)
    }

    pub fn linear_in(vars: &[Var], coeffs: &[Rational]) -> Self {
        assert_eq!(vars.len(), coeffs.len());
        Self::from_terms(vars.iter().zip(coeffs).map(|(&v, c)| (Monomial::var(v), c.clone())))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v) as u32).max().unwrap_or(0)
    }

    /// The common degree in the variables selected by `pred`, if every term
    /// has the same one. The zero polynomial is homogeneous of any degree and
    /// reports `None` here, so callers treat it separately.
    pub fn homogeneous_degree_in(&self, pred: impl Fn(Var) -> bool + Copy) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree_in(pred));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, d: u32, pred: impl Fn(Var) -> bool + Copy) -> bool {
        self.terms.keys().all(|m| m.degree_in(pred) == d)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().map(|(v, _)| v).collect::<Vec<_>>())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Polynomial::constant(Rational::one());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Groups terms by their part in the variables selected by `pred`: the
    /// result maps each such monomial to its coefficient polynomial in the
    /// remaining variables.
    pub fn coefficients_in(&self, pred: impl Fn(Var) -> bool + Copy) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inside, rest) = m.split(pred);
            out.entry(inside).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Simultaneous substitution `v -> map[v]`; unmapped variables stay.
    pub fn substitute(&self, map: &HashMap<Var, Polynomial>) -> Polynomial {
        let mut powers: HashMap<(Var, u16), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            let mut kept = Vec::new();
            for (v, e) in m.factors() {
                match map.get(&v) {
                    Some(p) => {
                        let pe = powers.entry((v, e)).or_insert_with(|| p.pow(e as u32));
                        term = &term * pe;
                    }
                    None => kept.push((v, e)),
                }
            }
            if !kept.is_empty() {
                term = term.mul_monomial(&Monomial::from_pairs(kept));
            }
            out = out + term;
        }
        out
    }

    /// Substitutes a rational value for one variable.
    pub fn specialize(&self, v: Var, value: &Rational) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let (_, rest) = m.split(|w| w == v);
            let mut coeff = c.clone();
            for _ in 0..e {
                coeff *= value;
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// Linear change of the coordinates: `x_k -> sum_l c[k][l] x_l`.
    pub fn change_coordinates(&self, c: &super::matrix::QMatrix) -> Polynomial {
        assert_eq!((c.rows(), c.cols()), (NX, NX));
        let map: HashMap<Var, Polynomial> = (0..NX)
            .map(|k| (Var::x(k), Polynomial::linear_form(c.row(k))))
            .collect();
        self.substitute(&map)
    }

    /// Coefficients of a linear form in `x0..x4`; `None` if `self` has other
    /// terms.
    pub fn linear_coefficients(&self) -> Option<[Rational; NX]> {
        let mut out: [Rational; NX] = Default::default();
        for (m, c) in &self.terms {
            let f: Vec<_> = m.factors().collect();
            match f.as_slice() {
                [(v, 1)] if v.is_x() => out[v.0 as usize] = c.clone(),
                _ => return None,
            }
        }
        Some(out)
    }

    /// Coordinates in an explicit monomial list; `None` if a term is missing
    /// from it.
    pub fn coordinates(&self, index: &HashMap<Monomial, usize>, len: usize) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); len];
        for (m, c) in &self.terms {
            v[*index.get(m)?] = c.clone();
        }
        Some(v)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        if self.terms.len() < rhs.terms.len() {
            return rhs + self;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -self.clone()
    }
}

impl super::ring::CommRing for Polynomial {
    fn ring_zero() -> Self {
        Polynomial::zero()
    }
    fn ring_one() -> Self {
        Polynomial::constant(Rational::one())
    }
    fn is_ring_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        Polynomial::constant(r.clone())
    }
    fn scale(&self, r: &Rational) -> Self {
        Polynomial::scale(self, r)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized as a list of `[exponent-vector, "p/q"]` pairs in decreasing
/// monomial order; exponent vectors have at least the five `x` slots.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(Vec<u16>, String)> = self
            .terms()
            .map(|(m, c)| (m.exponents(NX), rational::to_string(c)))
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<(Vec<u16>, String)>::deserialize(d)?;
        let mut p = Polynomial::zero();
        for (e, c) in v {
            let c = rational::parse(&c).map_err(serde::de::Error::custom)?;
            p.add_term(Monomial::from_exponents(&e), c);
        }
        Ok(p)
    }
}

/// Parses an exponent key such as `"3,0,0,0,0"` or `"[3, 0, 0, 0, 0]"`.
pub fn parse_exponent_key(key: &str) -> Result<Monomial> {
    let inner = key.trim().trim_start_matches('[').trim_end_matches(']');
    let exps: std::result::Result<Vec<u16>, _> = inner.split(',').map(|s| s.trim().parse::<u16>()).collect();
    let exps = exps.map_err(|_| Error::Parse(format!("invalid exponent vector {key:?}")))?;
    if exps.len() != NX {
        return Err(Error::Parse(format!("exponent vector {key:?} must have {NX} entries")));
    }
    Ok(Monomial::from_exponents(&exps))
}
