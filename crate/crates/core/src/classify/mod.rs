//! The six normal forms of semistable Pfaffian-zero matrices, their kernel
//! matrices, and a classifier by linear-algebra invariants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{DegreePiece, MonomialBasis, Polynomial, Var, NX};
use crate::pfaffcalc::{
    form_from_i64, linear_syzygies, rank0_point, transpose_syzygies, GradedIdeal, LinMatrix, LinearForm, SkewLinMatrix,
};
use crate::report::Check;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Label {
    pub const ALL: [Label; 6] = [Label::A, Label::B, Label::C, Label::D, Label::E, Label::F];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::A => "a",
            Label::B => "b",
            Label::C => "c",
            Label::D => "d",
            Label::E => "e",
            Label::F => "f",
        }
    }

    pub fn stability(self) -> Stability {
        match self {
            Label::A | Label::B | Label::C => Stability::Stable,
            Label::D | Label::E => Stability::StrictlySemistable,
            Label::F => Stability::Polystable,
        }
    }

    pub fn geometry(self) -> Geometry {
        match self {
            Label::A => Geometry::SmoothConic,
            Label::B => Geometry::SkewLines,
            Label::C => Geometry::MeetingLinesWithEmbeddedPoint,
            Label::D => Geometry::DoubleLineOnQuadric,
            Label::E => Geometry::PlaneDoubleLineWithEmbeddedPoint,
            Label::F => Geometry::LineWithFirstOrderNeighbourhood,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        Label::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    #[serde(rename = "stable")]
    Stable,
    #[serde(rename = "strictly-semistable-not-polystable")]
    StrictlySemistable,
    #[serde(rename = "polystable")]
    Polystable,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::StrictlySemistable => "strictly-semistable-not-polystable",
            Stability::Polystable => "polystable",
        })
    }
}

/// The rank-2 locus of the normal form.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    SmoothConic,
    SkewLines,
    MeetingLinesWithEmbeddedPoint,
    DoubleLineOnQuadric,
    PlaneDoubleLineWithEmbeddedPoint,
    LineWithFirstOrderNeighbourhood,
}

impl Geometry {
    /// Projective dimension of the locus where the matrix vanishes; `None`
    /// when it is empty.
    pub fn rank0_dim(self) -> Option<usize> {
        match self {
            Geometry::SmoothConic | Geometry::SkewLines | Geometry::DoubleLineOnQuadric => None,
            Geometry::MeetingLinesWithEmbeddedPoint | Geometry::PlaneDoubleLineWithEmbeddedPoint => Some(0),
            Geometry::LineWithFirstOrderNeighbourhood => Some(1),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixType {
    pub label: Label,
    pub stability: Stability,
}

/// A catalog entry with `l_i = x_i`.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub label: Label,
    pub m: SkewLinMatrix,
    /// Generators of the kernel of `m`, one per column.
    pub s: LinMatrix,
    pub geometry: Geometry,
}

fn l(k: usize, sign: i64) -> LinearForm {
    let mut c = [0; NX];
    c[k] = sign;
    form_from_i64(c)
}

fn skew(entries: &[((usize, usize), usize, i64)]) -> SkewLinMatrix {
    let mut m = SkewLinMatrix::zeros(6);
    for &((i, j), k, sign) in entries {
        m.set(i, j, l(k, sign));
    }
    m
}

/// `rows[i][c] = (k, sign)` for `sign * l_k`, sign 0 for a zero entry.
fn kernel(rows: [[(usize, i64); 2]; 6]) -> LinMatrix {
    LinMatrix::from_fn(6, 2, |i, c| l(rows[i][c].0, rows[i][c].1))
}

/// The three forms of the (d)/(e)/(f) family; `e34`, `e35` are the variable
/// indices in entries (3,4), (3,5), if present.
fn def_family(e34: Option<usize>, e35: Option<usize>) -> SkewLinMatrix {
    let mut entries = vec![
        ((0, 4), 0, 1),
        ((0, 5), 1, 1),
        ((1, 3), 0, -1),
        ((1, 5), 2, 1),
        ((2, 3), 1, -1),
        ((2, 4), 2, -1),
    ];
    if let Some(k) = e34 {
        entries.push(((3, 4), k, 1));
    }
    if let Some(k) = e35 {
        entries.push(((3, 5), k, 1));
    }
    skew(&entries)
}

pub fn catalog(label: Label) -> NormalForm {
    let (m, s) = match label {
        Label::A => (
            skew(&[
                ((0, 1), 3, 1),
                ((0, 4), 0, 1),
                ((0, 5), 1, 1),
                ((1, 3), 0, -1),
                ((1, 5), 2, 1),
                ((2, 3), 1, -1),
                ((2, 4), 2, -1),
                ((3, 4), 4, 1),
            ]),
            kernel([
                [(2, 1), (0, 0)],
                [(1, -1), (0, 0)],
                [(0, 1), (4, 1)],
                [(0, 0), (2, 1)],
                [(0, 0), (1, -1)],
                [(3, 1), (0, 1)],
            ]),
        ),
        Label::B => (
            skew(&[
                ((0, 1), 0, 1),
                ((0, 2), 1, 1),
                ((1, 2), 2, 1),
                ((3, 4), 2, 1),
                ((3, 5), 3, 1),
                ((4, 5), 4, 1),
            ]),
            kernel([
                [(2, 1), (0, 0)],
                [(1, -1), (0, 0)],
                [(0, 1), (0, 0)],
                [(0, 0), (4, 1)],
                [(0, 0), (3, -1)],
                [(0, 0), (2, 1)],
            ]),
        ),
        Label::C => (
            skew(&[
                ((0, 1), 0, 1),
                ((0, 2), 1, 1),
                ((1, 2), 2, 1),
                ((3, 4), 1, 1),
                ((3, 5), 2, 1),
                ((4, 5), 3, 1),
            ]),
            kernel([
                [(2, 1), (0, 0)],
                [(1, -1), (0, 0)],
                [(0, 1), (0, 0)],
                [(0, 0), (3, 1)],
                [(0, 0), (2, -1)],
                [(0, 0), (1, 1)],
            ]),
        ),
        Label::D => (
            def_family(Some(3), Some(4)),
            kernel([
                [(2, 1), (0, 0)],
                [(1, -1), (4, -1)],
                [(0, 1), (3, 1)],
                [(0, 0), (2, 1)],
                [(0, 0), (1, -1)],
                [(0, 0), (0, 1)],
            ]),
        ),
        Label::E => (
            def_family(Some(3), None),
            kernel([
                [(2, 1), (0, 0)],
                [(1, -1), (0, 0)],
                [(0, 1), (3, 1)],
                [(0, 0), (2, 1)],
                [(0, 0), (1, -1)],
                [(0, 0), (0, 1)],
            ]),
        ),
        Label::F => (
            def_family(None, None),
            kernel([
                [(2, 1), (0, 0)],
                [(1, -1), (0, 0)],
                [(0, 1), (0, 0)],
                [(0, 0), (2, 1)],
                [(0, 0), (1, -1)],
                [(0, 0), (0, 1)],
            ]),
        ),
    };
    NormalForm {
        label,
        m,
        s,
        geometry: label.geometry(),
    }
}

pub fn catalog_by_name(name: &str) -> Result<NormalForm> {
    Ok(catalog(name.parse()?))
}

/// Invariants of `[M]` under `M -> B^T M B` and linear changes of the
/// coordinates.
///
/// With `I` the ideal of the 15 sub-Pfaffians: `d1` is the dimension of the
/// entry span, `e2..e4` are `dim I_d`, `s` counts linear syzygies, and `j3`
/// is `dim (I + J)_3` where `J` is generated by the 3x3 minors of the
/// Jacobian matrix of a basis of `I_2`. The ideal `J` does not depend on the
/// basis chosen, so `j3` is invariant as well; it separates (b) from (d) and
/// (c) from (e), which the other entries do not.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub d1: usize,
    pub e2: usize,
    pub e3: usize,
    pub e4: usize,
    pub s: usize,
    pub j3: usize,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d1={} e2={} e3={} e4={} s={} j3={}",
            self.d1, self.e2, self.e3, self.e4, self.s, self.j3
        )
    }
}

/// Fingerprints of the six normal forms, computed once from the catalog and
/// kept as regression data.
pub const FINGERPRINTS: [(Label, Fingerprint); 6] = [
    (
        Label::A,
        Fingerprint {
            d1: 5,
            e2: 10,
            e3: 28,
            e4: 61,
            s: 2,
            j3: 35,
        },
    ),
    (
        Label::B,
        Fingerprint {
            d1: 5,
            e2: 9,
            e3: 27,
            e4: 60,
            s: 2,
            j3: 35,
        },
    ),
    (
        Label::C,
        Fingerprint {
            d1: 4,
            e2: 8,
            e3: 26,
            e4: 59,
            s: 2,
            j3: 28,
        },
    ),
    (
        Label::D,
        Fingerprint {
            d1: 5,
            e2: 9,
            e3: 27,
            e4: 60,
            s: 2,
            j3: 31,
        },
    ),
    (
        Label::E,
        Fingerprint {
            d1: 4,
            e2: 8,
            e3: 26,
            e4: 59,
            s: 2,
            j3: 27,
        },
    ),
    (
        Label::F,
        Fingerprint {
            d1: 3,
            e2: 6,
            e3: 22,
            e4: 53,
            s: 2,
            j3: 22,
        },
    ),
];

fn det3(m: [[&Polynomial; 3]; 3]) -> Polynomial {
    let t = |a: &Polynomial, b: &Polynomial, c: &Polynomial| &(a * b) * c;
    t(m[0][0], m[1][1], m[2][2]) + t(m[0][1], m[1][2], m[2][0]) + t(m[0][2], m[1][0], m[2][1])
        - t(m[0][2], m[1][1], m[2][0])
        - t(m[0][0], m[1][2], m[2][1])
        - t(m[0][1], m[1][0], m[2][2])
}

fn derivative(p: &Polynomial, k: usize) -> Polynomial {
    let v = Var::x(k);
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let e = m.exponent(v);
        if e == 0 {
            continue;
        }
        let rest: Vec<(Var, u16)> = m
            .factors()
            .filter_map(|(w, f)| {
                if w == v {
                    (f > 1).then_some((w, f - 1))
                } else {
                    Some((w, f))
                }
            })
            .collect();
        out.add_term(
            crate::exactalg::Monomial::from_pairs(rest),
            c * crate::exactalg::q(e as i64),
        );
    }
    out
}

/// `(I + minors_3(Jacobian of I_2))_3` for the given `I_3` and quadric basis.
fn jacobian_piece(i3: &DegreePiece, quadrics: &[Polynomial]) -> DegreePiece {
    let jac: Vec<Vec<Polynomial>> = quadrics
        .iter()
        .map(|q| (0..NX).map(|k| derivative(q, k)).collect())
        .collect();
    let basis = MonomialBasis::x(3);
    let mut acc = i3.clone();
    let r = jac.len();
    for r0 in 0..r {
        for r1 in r0 + 1..r {
            for r2 in r1 + 1..r {
                let mut batch = Vec::new();
                for c0 in 0..NX {
                    for c1 in c0 + 1..NX {
                        for c2 in c1 + 1..NX {
                            let rows = [r0, r1, r2].map(|ri| [&jac[ri][c0], &jac[ri][c1], &jac[ri][c2]]);
                            let d = det3(rows);
                            if !d.is_zero() {
                                batch.push(basis.coordinates(&d).expect("cubic minor"));
                            }
                        }
                    }
                }
                if batch.is_empty() {
                    continue;
                }
                let mut rows = acc.matrix().row_vecs();
                rows.extend(batch);
                acc = DegreePiece::from_rows(basis.clone(), rows);
                if acc.dim() == acc.ambient_dim() {
                    return acc;
                }
            }
        }
    }
    acc
}

pub fn fingerprint(m: &SkewLinMatrix) -> Result<Fingerprint> {
    m.require_pfaffian_zero()?;
    let mut ideal = GradedIdeal::new(&m.sub_pfaffians())?;
    let i2 = ideal.piece(2).clone();
    let i3 = ideal.piece(3).clone();
    let e4 = ideal.piece(4).dim();
    Ok(Fingerprint {
        d1: m.entry_span().dim(),
        e2: i2.dim(),
        e3: i3.dim(),
        e4,
        s: linear_syzygies(m)?.cols(),
        j3: jacobian_piece(&i3, &i2.polynomials()).dim(),
    })
}

/// Labels whose catalog fingerprint coincides with another one. Empty for
/// the frozen table; a non-empty result means the invariants no longer
/// separate the orbits.
pub fn fingerprint_collisions() -> Vec<(Label, Label)> {
    let mut out = Vec::new();
    for (n, (la, fa)) in FINGERPRINTS.iter().enumerate() {
        for (lb, fb) in &FINGERPRINTS[n + 1..] {
            if fa == fb {
                out.push((*la, *lb));
            }
        }
    }
    out
}

pub fn label_of(fp: &Fingerprint) -> Option<Label> {
    FINGERPRINTS.iter().find(|(_, f)| f == fp).map(|(l, _)| *l)
}

/// Type and stability of a Pfaffian-zero matrix, by fingerprint lookup.
pub fn classify(m: &SkewLinMatrix) -> Result<MatrixType> {
    let fp = fingerprint(m)?;
    let collisions = fingerprint_collisions();
    assert!(collisions.is_empty(), "catalog fingerprints collide: {collisions:?}");
    let label = label_of(&fp).ok_or_else(|| Error::Unclassified(fp.to_string()))?;
    Ok(MatrixType {
        label,
        stability: label.stability(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Report {
    pub label: Label,
    pub checks: Vec<Check>,
}

impl Table1Report {
    pub fn passed(&self) -> bool {
        crate::report::all_passed(&self.checks)
    }
}

/// Checks a catalog entry: `M S = 0`; the linear syzygies of `M` span the
/// columns of `S`; `minors_2(S)` and the sub-Pfaffians span the same
/// quadrics; the rank-0 locus has the dimension of the geometric tag. Also
/// checks that `M` lies in the 6-dimensional space of linear syzygies of
/// `S^T`.
pub fn verify_table1(label: Label) -> Table1Report {
    let nf = catalog(label);
    let mut checks = Vec::new();

    let prod = nf.m.lin_matrix().mul(&nf.s);
    let ms_zero = prod.iter().flatten().all(Polynomial::is_zero);
    checks.push(Check::new(
        "M*S=0",
        ms_zero,
        format!(
            "{} nonzero entries",
            prod.iter().flatten().filter(|p| !p.is_zero()).count()
        ),
    ));

    let (passed, detail) = match linear_syzygies(&nf.m) {
        Ok(syz) => (
            syz.column_space() == nf.s.column_space(),
            format!(
                "{} syzygy columns, S has rank {}",
                syz.cols(),
                nf.s.column_space().rows()
            ),
        ),
        Err(e) => (false, e.to_string()),
    };
    checks.push(Check::new("syzygy span", passed, detail));

    let minors = crate::exactalg::piece_span(&nf.s.minors2(), 2);
    let subpf = crate::exactalg::piece_span(&nf.m.sub_pfaffians(), 2);
    let (passed, detail) = match (minors, subpf) {
        (Ok(a), Ok(b)) => (a == b, format!("dims {} and {}", a.dim(), b.dim())),
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    };
    checks.push(Check::new("minors vs sub-Pfaffians", passed, detail));

    let d1 = nf.m.entry_span().dim();
    let rank0 = (d1 < NX).then(|| NX - 1 - d1);
    let mut passed = rank0 == nf.geometry.rank0_dim();
    if rank0 == Some(0) {
        passed &= rank0_point(&nf.m).is_ok();
    }
    checks.push(Check::new(
        "rank-0 locus",
        passed,
        match rank0 {
            None => "empty".to_string(),
            Some(d) => format!("linear space of dimension {d}"),
        },
    ));

    let tsyz = transpose_syzygies(&nf.s);
    let full = nf.m.lin_matrix();
    let contains = (0..6).all(|j| tsyz.column_space_contains(&full.column(j)));
    checks.push(Check::new(
        "syzygies of S^T",
        tsyz.cols() == 6 && contains,
        format!("{} columns, contains M: {contains}", tsyz.cols()),
    ));

    Table1Report { label, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_parse() {
        assert_eq!("c".parse::<Label>().unwrap(), Label::C);
        assert_eq!("(E)".parse::<Label>().unwrap(), Label::E);
        assert!(matches!("g".parse::<Label>(), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn stability_column() {
        use Stability::*;
        let got: Vec<_> = Label::ALL.iter().map(|l| l.stability()).collect();
        assert_eq!(
            got,
            [
                Stable,
                Stable,
                Stable,
                StrictlySemistable,
                StrictlySemistable,
                Polystable
            ]
        );
    }

    #[test]
    fn catalog_a_entries() {
        let m = catalog(Label::A).m;
        assert_eq!(m.entry(0, 1), Polynomial::x(3));
        assert_eq!(m.entry(0, 4), Polynomial::x(0));
    }

    #[test]
    fn catalog_f_is_block_antidiagonal() {
        let m = catalog(Label::F).m;
        for i in 0..3 {
            for j in 0..3 {
                assert!(m.entry(i, j).is_zero());
                assert!(m.entry(i + 3, j + 3).is_zero());
            }
        }
    }

    #[test]
    fn catalog_pfaffians_vanish() {
        for l in Label::ALL {
            assert!(catalog(l).m.pfaffian().unwrap().is_zero(), "{l}");
        }
    }

    #[test]
    fn frozen_fingerprints_distinct() {
        assert!(fingerprint_collisions().is_empty());
    }

    #[test]
    fn serde_names() {
        assert_eq!(serde_json::to_string(&Label::F).unwrap(), "\"f\"");
        assert_eq!(
            serde_json::to_string(&Stability::StrictlySemistable).unwrap(),
            "\"strictly-semistable-not-polystable\""
        );
    }
}
