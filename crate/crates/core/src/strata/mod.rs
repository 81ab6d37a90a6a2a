//! One-parameter families degenerating one stratum into another, and the
//! block-conjugation family that deforms a type-(e) matrix.
//!
//! A family is a skew matrix whose entries are linear in `x` and polynomial
//! in the parameter `t`; `t = 0` is the special member.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::classify::{catalog, classify, Label};
use crate::error::{Error, Result};
use crate::exactalg::{q, CommRing, DegreePiece, Monomial, MonomialBasis, Polynomial, QMatrix, Rational, Var};
use crate::jets::Jet;
use crate::pfaffcalc::{SkewLinMatrix, SkewMatrix};
use crate::report::{all_passed, Check};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Arrow {
    #[serde(rename = "b->c")]
    BC,
    #[serde(rename = "d->e")]
    DE,
    #[serde(rename = "e->f")]
    EF,
    #[serde(rename = "a->c")]
    AC,
    #[serde(rename = "b->d")]
    BD,
    #[serde(rename = "c->e")]
    CE,
    #[serde(rename = "case3")]
    Case3,
}

impl Arrow {
    /// The six arrows of the stratification diagram.
    pub const STRATIFICATION: [Arrow; 6] = [Arrow::AC, Arrow::BC, Arrow::BD, Arrow::CE, Arrow::DE, Arrow::EF];
    pub const ALL: [Arrow; 7] = [
        Arrow::AC,
        Arrow::BC,
        Arrow::BD,
        Arrow::CE,
        Arrow::DE,
        Arrow::EF,
        Arrow::Case3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Arrow::BC => "b->c",
            Arrow::DE => "d->e",
            Arrow::EF => "e->f",
            Arrow::AC => "a->c",
            Arrow::BD => "b->d",
            Arrow::CE => "c->e",
            Arrow::Case3 => "case3",
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Arrow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .replace('→', "->")
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect();
        Arrow::ALL
            .into_iter()
            .find(|a| a.as_str() == norm || a.as_str().replace("->", "") == norm)
            .ok_or_else(|| Error::UnknownArrow(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct DeformationFamily {
    pub arrow: Arrow,
    /// Entries linear in `x`, polynomial in `t`.
    pub matrix: SkewMatrix<Polynomial>,
    /// Type for `t != 0`, when the construction pins it down.
    pub generic: Option<Label>,
    pub special: Label,
    /// Ideals (generators in `x`, `t`) each of which must contain every
    /// sub-Pfaffian of the family. Empty where nothing is printed.
    pub ideals: Vec<Vec<Polynomial>>,
    /// A constant matrix `P` with `P^T catalog(generic) P = M_1`, for
    /// families written in a conjugate form.
    pub conjugator: Option<QMatrix>,
}

fn x(k: usize) -> Polynomial {
    Polynomial::x(k)
}

fn t() -> Polynomial {
    Polynomial::var(Var::t())
}

fn lift(m: &SkewLinMatrix) -> SkewMatrix<Polynomial> {
    m.to_skew()
}

impl DeformationFamily {
    /// The member at `t = value`.
    pub fn at(&self, value: &Rational) -> SkewLinMatrix {
        let m = self.matrix.map(|e| e.specialize(Var::t(), value));
        SkewLinMatrix::from_skew(&m).expect("family entries are linear in x")
    }

    pub fn special_member(&self) -> SkewLinMatrix {
        self.at(&Rational::zero())
    }
}

/// The printed family of an arrow with `l_i = x_i`.
pub fn family(arrow: Arrow) -> DeformationFamily {
    match arrow {
        Arrow::AC => {
            let mut m = lift(&catalog(Label::A).m);
            m.set(3, 4, x(3) + &x(4) * &t());
            let conic = &x(0) * &x(0) - &x(3) * &x(3) - &(&x(3) * &x(4)) * &t();
            DeformationFamily {
                arrow,
                matrix: m,
                generic: Some(Label::A),
                special: Label::C,
                ideals: vec![vec![x(1), x(2), conic]],
                conjugator: None,
            }
        }
        Arrow::BD => {
            let mut m = lift(&catalog(Label::D).m);
            m.set(0, 1, &x(3) * &t().pow(2));
            m.set(0, 2, &x(4) * &t().pow(2));
            let line = |s: i64| {
                let st = t().scale(&q(s));
                vec![x(2), x(1) + &st * &x(4), x(0) + &st * &x(3)]
            };
            DeformationFamily {
                arrow,
                matrix: m,
                generic: Some(Label::B),
                special: Label::D,
                ideals: vec![line(1), line(-1)],
                conjugator: None,
            }
        }
        Arrow::CE => {
            let mut m = lift(&catalog(Label::E).m);
            m.set(0, 1, &x(3) * &t().pow(2));
            let conic = &x(0) * &x(0) - &(&x(3) * &x(3)) * &t().pow(2);
            DeformationFamily {
                arrow,
                matrix: m,
                generic: Some(Label::C),
                special: Label::E,
                ideals: vec![vec![x(1), x(2), conic]],
                conjugator: None,
            }
        }
        Arrow::BC => {
            // (b) with its second block conjugated so that the form l4 sits
            // where (c) has l1, then l4 -> l1 linearly in t
            let mut m = lift(&catalog(Label::C).m);
            m.set(3, 4, &t() * &x(4) + &(Polynomial::constant(q(1)) - t()) * &x(1));
            DeformationFamily {
                arrow,
                matrix: m,
                generic: Some(Label::B),
                special: Label::C,
                ideals: Vec::new(),
                conjugator: Some(bc_conjugator()),
            }
        }
        Arrow::DE => {
            let mut m = lift(&catalog(Label::D).m);
            m.set(3, 5, &t() * &x(4));
            DeformationFamily {
                arrow,
                matrix: m,
                generic: Some(Label::D),
                special: Label::E,
                ideals: Vec::new(),
                conjugator: None,
            }
        }
        Arrow::EF => {
            let mut m = lift(&catalog(Label::E).m);
            m.set(3, 4, &t() * &x(3));
            DeformationFamily {
                arrow,
                matrix: m,
                generic: Some(Label::E),
                special: Label::F,
                ideals: Vec::new(),
                conjugator: None,
            }
        }
        Arrow::Case3 => {
            let (a, b) = case3_blocks();
            let (m, _) = case3_matrix(&a, &b);
            DeformationFamily {
                arrow,
                matrix: m,
                generic: None,
                special: Label::E,
                ideals: Vec::new(),
                conjugator: None,
            }
        }
    }
}

/// Signed permutation of rows/columns 3, 4, 5 taking the second block of
/// `catalog(b)` (entries l2, l3, l4 at (3,4), (3,5), (4,5)) to the entries
/// l4, l2, l3 of the b->c family at `t = 1`.
fn bc_conjugator() -> QMatrix {
    let mut p = QMatrix::zeros(6, 6);
    for i in 0..3 {
        p[(i, i)] = q(1);
    }
    // new basis vector e_{3+c} = s_c * old e_{3+sigma(c)}
    let sigma = [1, 2, 0];
    let sign = [1, 1, -1];
    for c in 0..3 {
        p[(3 + sigma[c], 3 + c)] = q(sign[c]);
    }
    p
}

/// Whether every `p` is a `Q[t]`-combination of `(monomial) * g` over the
/// generators, with coefficient polynomials of bounded `t`-degree. A `true`
/// answer exhibits such a combination, so it proves membership.
pub fn member_over_t(p: &Polynomial, gens: &[Polynomial]) -> bool {
    if p.is_zero() {
        return true;
    }
    let xdeg = p.terms().map(|(m, _)| m.degree_in(Var::is_x)).max().unwrap_or(0);
    let tdeg = |f: &Polynomial| f.degree_in(Var::t());
    let max_g = gens.iter().map(tdeg).max().unwrap_or(0);
    let bound = tdeg(p) + max_g;
    let mut products: Vec<Polynomial> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let e = g.terms().map(|(m, _)| m.degree_in(Var::is_x)).max().unwrap_or(0);
        if e > xdeg {
            continue;
        }
        for mono in Monomial::all_of_degree(&Var::xs(), xdeg - e) {
            for s in 0..=bound {
                products.push(g.mul_monomial(&mono.mul(&Monomial::power(Var::t(), s as u16))));
            }
        }
    }
    let mut monos = std::collections::BTreeSet::new();
    for f in products.iter().chain(std::iter::once(p)) {
        monos.extend(f.terms().map(|(m, _)| m.clone()));
    }
    let monos: Vec<Monomial> = monos.into_iter().collect();
    let rows: Vec<Vec<Rational>> = monos
        .iter()
        .map(|m| products.iter().map(|f| f.coefficient(m)).collect())
        .collect();
    let rhs: Vec<Rational> = monos.iter().map(|m| p.coefficient(m)).collect();
    QMatrix::from_rows(rows, products.len()).solve(&rhs).is_some()
}

/// Vectors with entries in `Q[t]`, stored by powers of `t`.
#[derive(Clone, Debug)]
struct TVector {
    powers: Vec<Vec<Rational>>,
}

impl TVector {
    fn from_poly(p: &Polynomial, basis: &MonomialBasis) -> TVector {
        let deg = p.degree_in(Var::t()) as usize;
        let mut powers = vec![vec![Rational::zero(); basis.len()]; deg + 1];
        for (mono, coeff) in p.coefficients_in(|v| v == Var::t()) {
            let e = mono.exponent(Var::t()) as usize;
            powers[e] = basis.coordinates(&coeff).expect("homogeneous in x");
        }
        TVector { powers }
    }

    fn at(&self, value: &Rational) -> Vec<Rational> {
        let n = self.powers[0].len();
        let mut out = vec![Rational::zero(); n];
        let mut pw = Rational::one();
        for row in &self.powers {
            for (o, c) in out.iter_mut().zip(row) {
                *o += c * &pw;
            }
            pw *= value;
        }
        out
    }

    fn combine(vs: &[TVector], coeffs: &[Rational]) -> TVector {
        let n = vs[0].powers[0].len();
        let len = vs.iter().map(|v| v.powers.len()).max().unwrap_or(1);
        let mut powers = vec![vec![Rational::zero(); n]; len];
        for (v, c) in vs.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (e, row) in v.powers.iter().enumerate() {
                for (o, x) in powers[e].iter_mut().zip(row) {
                    *o += x * c;
                }
            }
        }
        TVector { powers }
    }
}

/// Limit at `t = 0` of the span of homogeneous polynomials in `x` with
/// coefficients in `Q[t]`: the set of lowest-order terms of all elements of
/// the span over `Q(t)` with polynomial coefficients.
///
/// Starting from a basis over `Q(t)`, any relation among the values at
/// `t = 0` gives a combination divisible by `t`; replacing one basis member
/// by that combination divided by `t` keeps a basis, and the process ends
/// when the values at `t = 0` are independent.
pub fn flat_limit(polys: &[Polynomial], degree: u32) -> DegreePiece {
    let basis = MonomialBasis::x(degree);
    let vs: Vec<TVector> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| TVector::from_poly(p, &basis))
        .collect();
    if vs.is_empty() {
        return DegreePiece::zero(basis);
    }
    // a basis over Q(t): rows independent at a sample value are independent
    let sample = crate::exactalg::frac(7919, 13);
    let mut chosen: Vec<TVector> = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for v in vs {
        rows.push(v.at(&sample));
        if QMatrix::from_rows(rows.clone(), basis.len()).rank() == rows.len() {
            chosen.push(v);
        } else {
            rows.pop();
        }
    }
    loop {
        let at0: Vec<Vec<Rational>> = chosen.iter().map(|v| v.powers[0].clone()).collect();
        // relations among the rows: kernel of the transpose
        let rel = QMatrix::from_rows(at0.clone(), basis.len()).transpose().kernel_basis();
        if rel.rows() == 0 {
            return DegreePiece::from_rows(basis, at0);
        }
        let lambda = rel.row(0).to_vec();
        let i = lambda.iter().rposition(|c| !c.is_zero()).expect("nonzero relation");
        let mut comb = TVector::combine(&chosen, &lambda);
        debug_assert!(comb.powers[0].iter().all(Zero::is_zero));
        comb.powers.remove(0);
        if comb.powers.is_empty() {
            comb.powers.push(vec![Rational::zero(); basis.len()]);
        }
        chosen[i] = comb;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub arrow: Arrow,
    /// The sample parameter value used for the generic member.
    pub t0: String,
    pub generic_type: Option<Label>,
    pub special_type: Option<Label>,
    pub checks: Vec<Check>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Checks a family: `Pf(M_t) = 0` identically; every sub-Pfaffian lies in
/// each printed ideal over `Q[t]`; the member at `t0 != 0` and at `t = 0`
/// classify as claimed; the flat limit of the sub-Pfaffian span contains the
/// span at `t = 0`; and the conjugator, where given, is exact.
pub fn verify_family(arrow: Arrow, t0: &Rational) -> FamilyReport {
    assert!(!t0.is_zero(), "the generic member needs t0 != 0");
    let fam = family(arrow);
    let mut checks = Vec::new();

    let pf = fam.matrix.pfaffian().expect("6x6");
    checks.push(Check::new("pfaffian", pf.is_zero(), format!("Pf(M_t) = {pf}")));

    let subpf = fam.matrix.sub_pfaffians();
    if fam.ideals.is_empty() {
        checks.push(Check::skipped("ideal membership", "no printed ideal"));
    } else {
        let missing: usize = fam
            .ideals
            .iter()
            .map(|gens| subpf.iter().filter(|p| !member_over_t(p, gens)).count())
            .sum();
        checks.push(Check::new(
            "ideal membership",
            missing == 0,
            format!("{} ideal(s), {missing} sub-Pfaffian memberships fail", fam.ideals.len()),
        ));
    }

    let generic = fam.at(t0);
    let special = fam.special_member();
    let generic_type = classify(&generic).ok().map(|m| m.label);
    let special_type = classify(&special).ok().map(|m| m.label);
    match fam.generic {
        Some(want) => checks.push(Check::new(
            "generic type",
            generic_type == Some(want),
            format!("t = {t0}: {}, expected {want}", label_name(generic_type)),
        )),
        None => checks.push(Check::skipped(
            "generic type",
            format!("t = {t0}: {} (not prescribed)", label_name(generic_type)),
        )),
    }
    checks.push(Check::new(
        "special type",
        special_type == Some(fam.special),
        format!("t = 0: {}, expected {}", label_name(special_type), fam.special),
    ));

    let limit = flat_limit(&subpf, 2);
    let at0 = crate::exactalg::piece_span(&special.sub_pfaffians(), 2).expect("quadrics");
    let contains = limit.contains(&at0).unwrap_or(false);
    checks.push(Check::new(
        "specialization",
        contains,
        format!("limit span dim {}, span at t = 0 dim {}", limit.dim(), at0.dim()),
    ));

    if let Some(p) = &fam.conjugator {
        let want = fam.generic.expect("conjugate forms name their type");
        let ok = catalog(want).m.congruence(p) == fam.at(&Rational::one());
        checks.push(Check::new("conjugator", ok, format!("P^T catalog({want}) P = M_1")));
    }

    FamilyReport {
        arrow,
        t0: t0.to_string(),
        generic_type,
        special_type,
        checks,
    }
}

fn label_name(l: Option<Label>) -> String {
    l.map_or_else(|| "unclassified".to_string(), |l| l.to_string())
}

/// Full 3x3 or 6x6 matrices of polynomials.
type Full = Vec<Vec<Polynomial>>;

fn mat_mul(a: &Full, b: &Full) -> Full {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Polynomial::zero();
                    for l in 0..k {
                        if !a[i][l].is_zero() && !b[l][j].is_zero() {
                            acc = acc + &a[i][l] * &b[l][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn transpose(a: &Full) -> Full {
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

fn blocks(tl: &Full, tr: &Full, bl: &Full, br: &Full) -> Full {
    let mut out = Vec::new();
    for (l, r) in tl.iter().zip(tr) {
        out.push(l.iter().chain(r).cloned().collect());
    }
    for (l, r) in bl.iter().zip(br) {
        out.push(l.iter().chain(r).cloned().collect());
    }
    out
}

fn scalar_block(c: &Polynomial) -> Full {
    (0..3)
        .map(|i| {
            (0..3)
                .map(|j| if i == j { c.clone() } else { Polynomial::zero() })
                .collect()
        })
        .collect()
}

fn map_full(a: &Full, f: impl Fn(&Polynomial) -> Polynomial) -> Full {
    a.iter().map(|r| r.iter().map(&f).collect()).collect()
}

fn check_skew_linear(a: &Full, name: &str) -> Result<()> {
    if a.len() != 3 || a.iter().any(|r| r.len() != 3) {
        return Err(Error::NotSkew(format!("{name} must be 3x3")));
    }
    for (i, row) in a.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if *e != -&a[j][i] {
                return Err(Error::NotSkew(format!("{name}[{i}][{j}] != -{name}[{j}][{i}]")));
            }
            if !e.is_zero() && e.linear_coefficients().is_none() {
                return Err(Error::NotSkew(format!("{name}[{i}][{j}] is not a linear form")));
            }
        }
    }
    Ok(())
}

/// The blocks `A`, `B` read off `catalog(e) = [[0, 2A], [2A, -B]]`.
pub fn case3_blocks() -> (Full, Full) {
    let m = catalog(Label::E).m;
    let half = crate::exactalg::frac(1, 2);
    let a = (0..3)
        .map(|i| (0..3).map(|j| m.entry(i, j + 3).scale(&half)).collect())
        .collect();
    let b = (0..3)
        .map(|i| (0..3).map(|j| -m.entry(i + 3, j + 3)).collect())
        .collect();
    (a, b)
}

/// `M_t = [[-t^2 B, A + A_t], [A + A_t, -B]]` with `A_t = A + t B`, and
/// the block-diagonal `diag(A, -A_t)`.
fn case3_matrix(a: &Full, b: &Full) -> (SkewMatrix<Polynomial>, Full) {
    let tb = map_full(b, |e| &t() * e);
    let at: Full = a
        .iter()
        .zip(&tb)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect();
    let sum: Full = a
        .iter()
        .zip(&at)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect();
    let t2 = t().pow(2);
    let tl = map_full(b, |e| -(&t2 * e));
    let br = map_full(b, |e| -e.clone());
    let full = blocks(&tl, &sum, &sum, &br);
    let m = SkewMatrix::from_fn(6, |i, j| full[i][j].clone());
    let zero = scalar_block(&Polynomial::zero());
    let diag = blocks(a, &zero, &zero, &map_full(&at, |e| -e.clone()));
    (m, diag)
}

fn truncate_t(p: &Polynomial, order: usize) -> Polynomial {
    Polynomial::from_terms(
        p.terms()
            .filter(|(m, _)| (m.exponent(Var::t()) as usize) <= order)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct Case3Report {
    pub order: usize,
    pub generic_type: Option<Label>,
    pub checks: Vec<Check>,
}

impl Case3Report {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Builds the Case-3 family from 3x3 skew blocks `A`, `B` of linear forms
/// and checks, modulo `t^(order+1)`:
/// - `M_0 = [[0, 2A], [2A, -B]]`;
/// - `C2 C diag(A, -A_t) C^T C2^T = t M_t` for `C = [[I, -I], [I, I]]` and
///   `C2 = diag(t I, I)`;
/// - `Pf(M_t) = 0`;
/// - every 4x4 sub-Pfaffian of `[[0, -2 e B], [-2 e B, -B]]` vanishes modulo
///   `e^2`.
pub fn case3_family(a: &Full, b: &Full, order: usize, t0: &Rational) -> Result<Case3Report> {
    check_skew_linear(a, "A")?;
    check_skew_linear(b, "B")?;
    let (m, diag) = case3_matrix(a, b);
    let mut checks = Vec::new();

    let zero = scalar_block(&Polynomial::zero());
    let two_a = map_full(a, |e| e.scale(&q(2)));
    let expect0 = blocks(&zero, &two_a, &two_a, &map_full(b, |e| -e.clone()));
    let m0 = m.map(|e| e.specialize(Var::t(), &Rational::zero()));
    let ok = (0..6).all(|i| (0..6).all(|j| m0.get(i, j) == expect0[i][j]));
    checks.push(Check::new("special member", ok, "M_0 = [[0, 2A], [2A, -B]]"));

    let one = Polynomial::constant(q(1));
    let c = blocks(
        &scalar_block(&one),
        &scalar_block(&-&one),
        &scalar_block(&one),
        &scalar_block(&one),
    );
    let c2 = blocks(&scalar_block(&t()), &zero, &zero, &scalar_block(&one));
    let conj = mat_mul(
        &mat_mul(&c2, &c),
        &mat_mul(&mat_mul(&diag, &transpose(&c)), &transpose(&c2)),
    );
    let ok =
        (0..6).all(|i| (0..6).all(|j| truncate_t(&conj[i][j], order) == truncate_t(&(&t() * &m.get(i, j)), order)));
    checks.push(Check::new(
        "conjugation",
        ok,
        format!("C2 C diag(A, -A_t) C^T C2^T = t M_t mod t^{}", order + 1),
    ));

    let pf = truncate_t(&m.pfaffian()?, order);
    checks.push(Check::new("pfaffian", pf.is_zero(), format!("Pf(M_t) = {pf}")));

    let jet = SkewMatrix::from_fn(6, |i, j| {
        let (bi, bj) = (i % 3, j % 3);
        let (top, left) = (i < 3, j < 3);
        match (top, left) {
            (true, true) => Jet::zero_of_order(1),
            (false, false) => Jet::new(1, vec![-b[bi][bj].clone()]),
            _ => Jet::new(1, vec![Polynomial::zero(), b[bi][bj].scale(&q(-2))]),
        }
    });
    let nonzero = jet.sub_pfaffians().iter().filter(|p| !p.is_ring_zero()).count();
    checks.push(Check::new(
        "rank 2 mod e^2",
        nonzero == 0,
        format!("{nonzero} sub-Pfaffians nonzero mod e^2"),
    ));

    let generic = SkewLinMatrix::from_skew(&m.map(|e| e.specialize(Var::t(), t0)))?;
    let generic_type = classify(&generic).ok().map(|x| x.label);
    Ok(Case3Report {
        order,
        generic_type,
        checks,
    })
}
