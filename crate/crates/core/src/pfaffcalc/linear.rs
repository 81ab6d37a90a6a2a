use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::skew::SkewMatrix;
use crate::error::{Error, Result};
use crate::exactalg::rational::{self, Rational};
use crate::exactalg::{DegreePiece, Monomial, MonomialBasis, Polynomial, QMatrix, Var, NX};

/// Coefficients of `c0*x0 + ... + c4*x4`.
pub type LinearForm = [Rational; NX];

pub fn zero_form() -> LinearForm {
    Default::default()
}

/// `x_k` as a coefficient array.
pub fn unit_form(k: usize) -> LinearForm {
    let mut f = zero_form();
    f[k] = rational::q(1);
    f
}

pub fn form_from_i64(c: [i64; NX]) -> LinearForm {
    c.map(rational::q)
}

pub fn form_poly(f: &LinearForm) -> Polynomial {
    Polynomial::linear_form(f)
}

pub fn form_is_zero(f: &LinearForm) -> bool {
    f.iter().all(Zero::is_zero)
}

fn form_neg(f: &LinearForm) -> LinearForm {
    f.clone().map(|c| -c)
}

fn form_from_poly(p: &Polynomial) -> Result<LinearForm> {
    p.linear_coefficients().ok_or_else(|| Error::NonHomogeneous {
        degree: 1,
        poly: p.to_string(),
    })
}

/// Skew-symmetric matrix whose entries are linear forms in `x0..x4`. Only the
/// entries above the diagonal are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SkewLinMatrix {
    n: usize,
    forms: Vec<LinearForm>,
}

fn upper_index(n: usize, i: usize, j: usize) -> usize {
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl SkewLinMatrix {
    pub fn zeros(n: usize) -> Self {
        SkewLinMatrix {
            n,
            forms: vec![zero_form(); n * n.saturating_sub(1) / 2],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> LinearForm) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                m.forms[upper_index(n, i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from polynomial entries at `i < j`; each must be a linear form
    /// in `x0..x4`.
    pub fn from_polys(n: usize, f: impl Fn(usize, usize) -> Polynomial) -> Result<Self> {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                m.forms[upper_index(n, i, j)] = form_from_poly(&f(i, j))?;
            }
        }
        Ok(m)
    }

    /// Inverse of [`SkewLinMatrix::to_skew`]; fails on non-linear entries.
    pub fn from_skew(m: &SkewMatrix<Polynomial>) -> Result<Self> {
        Self::from_polys(m.size(), |i, j| m.upper(i, j).clone())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)` for any indices.
    pub fn form(&self, i: usize, j: usize) -> LinearForm {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.forms[upper_index(self.n, i, j)].clone(),
            Greater => form_neg(&self.forms[upper_index(self.n, j, i)]),
            Equal => zero_form(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, f: LinearForm) {
        assert_ne!(i, j);
        if i < j {
            let k = upper_index(self.n, i, j);
            self.forms[k] = f;
        } else {
            let k = upper_index(self.n, j, i);
            self.forms[k] = form_neg(&f);
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        form_poly(&self.form(i, j))
    }

    pub fn to_skew(&self) -> SkewMatrix<Polynomial> {
        SkewMatrix::from_fn(self.n, |i, j| self.entry(i, j))
    }

    pub fn pfaffian(&self) -> Result<Polynomial> {
        self.to_skew().pfaffian()
    }

    /// The quadrics `q_ab` for `a < b` in pair order.
    pub fn sub_pfaffians(&self) -> Vec<Polynomial> {
        self.to_skew().sub_pfaffians()
    }

    /// Fails with `PfaffianNonZero` unless the Pfaffian vanishes.
    pub fn require_pfaffian_zero(&self) -> Result<()> {
        let pf = self.pfaffian()?;
        if pf.is_zero() {
            Ok(())
        } else {
            Err(Error::PfaffianNonZero(pf.to_string()))
        }
    }

    /// `B^T M B` for a constant square matrix `B`.
    pub fn congruence(&self, b: &QMatrix) -> Self {
        let out = self.to_skew().congruence(b);
        Self::from_skew(&out).expect("congruence keeps entries linear")
    }

    /// Substitutes `x_k -> sum_l c[k][l] x_l` in every entry.
    pub fn change_coordinates(&self, c: &QMatrix) -> Self {
        assert_eq!((c.rows(), c.cols()), (NX, NX));
        let map = |f: &LinearForm| -> LinearForm {
            let mut out = zero_form();
            for (k, fk) in f.iter().enumerate() {
                if fk.is_zero() {
                    continue;
                }
                for (l, o) in out.iter_mut().enumerate() {
                    *o += fk * &c[(k, l)];
                }
            }
            out
        };
        SkewLinMatrix {
            n: self.n,
            forms: self.forms.iter().map(map).collect(),
        }
    }

    /// The stored coefficients, pair-major then variable: index `5*p + k`
    /// holds the coefficient of `x_k` in the `p`-th upper entry.
    pub fn coefficient_vector(&self) -> Vec<Rational> {
        self.forms.iter().flat_map(|f| f.iter().cloned()).collect()
    }

    pub fn from_coefficient_vector(n: usize, v: &[Rational]) -> Self {
        let mut m = Self::zeros(n);
        assert_eq!(v.len(), m.forms.len() * NX);
        for (p, f) in m.forms.iter_mut().enumerate() {
            f.clone_from_slice(&v[p * NX..(p + 1) * NX]);
        }
        m
    }

    pub fn upper_forms(&self) -> &[LinearForm] {
        &self.forms
    }

    /// The full matrix as a [`LinMatrix`].
    pub fn lin_matrix(&self) -> LinMatrix {
        LinMatrix::from_fn(self.n, self.n, |i, j| self.form(i, j))
    }

    /// Span of the entries: the linear forms vanishing on the rank-0 locus.
    pub fn entry_span(&self) -> DegreePiece {
        DegreePiece::from_rows(MonomialBasis::x(1), self.forms.iter().map(|f| f.to_vec()).collect())
    }
}

impl fmt::Debug for SkewLinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SkewLinMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    i: usize,
    j: usize,
    coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SkewJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    size: Option<usize>,
    entries: Vec<EntryJson>,
}

/// `{"entries": [{"i": 0, "j": 1, "coeffs": ["0", "1", ...]}, ...]}`, with
/// 0-based `i < j` and five coefficient strings. Entries left out are zero;
/// the size is 6 unless an explicit `"size"` field says otherwise.
impl Serialize for SkewLinMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = Vec::with_capacity(self.forms.len());
        for i in 0..self.n {
            for j in i + 1..self.n {
                if form_is_zero(&self.form(i, j)) {
                    continue;
                }
                entries.push(EntryJson {
                    i,
                    j,
                    coeffs: self.form(i, j).iter().map(rational::to_string).collect(),
                });
            }
        }
        SkewJson {
            size: (self.n != 6).then_some(self.n),
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SkewLinMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SkewJson::deserialize(d)?;
        let n = raw.size.unwrap_or(6);
        if n % 2 == 1 {
            return Err(D::Error::custom(format!("matrix size {n} is odd")));
        }
        let mut m = SkewLinMatrix::zeros(n);
        let mut seen = vec![false; m.forms.len()];
        for e in raw.entries {
            if e.i >= e.j || e.j >= n {
                return Err(D::Error::custom(format!(
                    "entry ({}, {}) is not above the diagonal of a {n}x{n} matrix",
                    e.i, e.j
                )));
            }
            if e.coeffs.len() != NX {
                return Err(D::Error::custom(format!(
                    "entry ({}, {}) needs {NX} coefficients, got {}",
                    e.i,
                    e.j,
                    e.coeffs.len()
                )));
            }
            let k = upper_index(n, e.i, e.j);
            if std::mem::replace(&mut seen[k], true) {
                return Err(D::Error::custom(format!("entry ({}, {}) given twice", e.i, e.j)));
            }
            for (slot, c) in m.forms[k].iter_mut().zip(&e.coeffs) {
                *slot = rational::parse(c).map_err(D::Error::custom)?;
            }
        }
        Ok(m)
    }
}

/// Rectangular matrix of linear forms.
#[derive(Clone, PartialEq, Eq)]
pub struct LinMatrix {
    rows: usize,
    cols: usize,
    forms: Vec<LinearForm>,
}

/// Matrix whose columns are linear syzygies.
pub type SyzygyMatrix = LinMatrix;

impl LinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LinMatrix {
            rows,
            cols,
            forms: vec![zero_form(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LinearForm) -> Self {
        let mut forms = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                forms.push(f(i, j));
            }
        }
        LinMatrix { rows, cols, forms }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<LinearForm>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn form(&self, i: usize, j: usize) -> &LinearForm {
        &self.forms[i * self.cols + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        form_poly(self.form(i, j))
    }

    pub fn column(&self, j: usize) -> Vec<LinearForm> {
        (0..self.rows).map(|i| self.form(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> LinMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.form(j, i).clone())
    }

    /// The product as a matrix of quadrics.
    pub fn mul(&self, other: &LinMatrix) -> Vec<Vec<Polynomial>> {
        assert_eq!(self.cols, other.rows);
        (0..self.rows)
            .map(|i| {
                (0..other.cols)
                    .map(|j| {
                        let mut acc = Polynomial::zero();
                        for k in 0..self.cols {
                            let (a, b) = (self.form(i, k), other.form(k, j));
                            if !form_is_zero(a) && !form_is_zero(b) {
                                acc = acc + &form_poly(a) * &form_poly(b);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// All 2x2 minors, rows and columns in lexicographic order.
    pub fn minors2(&self) -> Vec<Polynomial> {
        let mut out = Vec::new();
        for r0 in 0..self.rows {
            for r1 in r0 + 1..self.rows {
                for c0 in 0..self.cols {
                    for c1 in c0 + 1..self.cols {
                        let m = &self.entry(r0, c0) * &self.entry(r1, c1) - &self.entry(r0, c1) * &self.entry(r1, c0);
                        out.push(m);
                    }
                }
            }
        }
        out
    }

    /// A column as a vector in `Q^(5*rows)`, row-major then variable.
    fn column_vector(col: &[LinearForm]) -> Vec<Rational> {
        col.iter().flat_map(|f| f.iter().cloned()).collect()
    }

    /// Reduced row-echelon basis of the span of the columns, each flattened
    /// by [`LinMatrix::column_vector`]. Equal spans give equal matrices.
    pub fn column_space(&self) -> QMatrix {
        let rows: Vec<Vec<Rational>> = (0..self.cols).map(|j| Self::column_vector(&self.column(j))).collect();
        QMatrix::from_rows(rows, self.rows * NX).echelon().matrix
    }

    pub fn column_space_contains(&self, col: &[LinearForm]) -> bool {
        assert_eq!(col.len(), self.rows);
        let mut rows: Vec<Vec<Rational>> = (0..self.cols).map(|j| Self::column_vector(&self.column(j))).collect();
        let before = QMatrix::from_rows(rows.clone(), self.rows * NX).rank();
        rows.push(Self::column_vector(col));
        QMatrix::from_rows(rows, self.rows * NX).rank() == before
    }

    /// All vectors `v` of linear forms with `self * v = 0`, as the columns of
    /// the result (reduced echelon order). This is the kernel of a rational
    /// linear system in the `5 * cols` coefficients of `v`, one equation per
    /// row of `self` and quadric monomial.
    pub fn linear_kernel(&self) -> SyzygyMatrix {
        let quad = MonomialBasis::x(2);
        let unknowns = self.cols * NX;
        let mut sys = QMatrix::zeros(self.rows * quad.len(), unknowns);
        for i in 0..self.rows {
            for r in 0..self.cols {
                let a = self.form(i, r);
                for (l, al) in a.iter().enumerate() {
                    if al.is_zero() {
                        continue;
                    }
                    for k in 0..NX {
                        let m = Monomial::var(Var::x(l)).mul(&Monomial::var(Var::x(k)));
                        let row = i * quad.len() + quad.position(&m).expect("quadric monomial");
                        sys[(row, r * NX + k)] += al;
                    }
                }
            }
        }
        let ker = sys.kernel_basis();
        Self::from_fn(self.cols, ker.rows(), |r, c| {
            let mut f = zero_form();
            f.clone_from_slice(&ker.row(c)[r * NX..(r + 1) * NX]);
            f
        })
    }
}

impl fmt::Debug for LinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinMatrix({}x{})", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rows of entries, each entry a list of five `"p/q"` coefficients.
impl Serialize for LinMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Vec<String>>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.form(i, j).iter().map(rational::to_string).collect())
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

/// Kernel of `m` acting on vectors of linear forms. Requires `Pf(m) = 0`.
pub fn linear_syzygies(m: &SkewLinMatrix) -> Result<SyzygyMatrix> {
    m.require_pfaffian_zero()?;
    Ok(m.lin_matrix().linear_kernel())
}

/// Linear syzygies of `s^T`, i.e. vectors `w` with `s^T w = 0`.
pub fn transpose_syzygies(s: &LinMatrix) -> SyzygyMatrix {
    s.transpose().linear_kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;

    fn sample() -> SkewLinMatrix {
        // entries l0, l1, l2 in the top 3x3 block and l3 elsewhere
        let mut m = SkewLinMatrix::zeros(6);
        m.set(0, 1, unit_form(0));
        m.set(0, 2, unit_form(1));
        m.set(1, 2, unit_form(2));
        m.set(3, 4, unit_form(3));
        m
    }

    #[test]
    fn json_roundtrip() {
        let m = sample();
        let s = serde_json::to_string(&m).unwrap();
        let back: SkewLinMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(s.starts_with(r#"{"entries":[{"i":0,"j":1,"coeffs":["1","0","0","0","0"]}"#));
    }

    #[test]
    fn json_rejects_bad_entries() {
        let lower = r#"{"entries":[{"i":2,"j":1,"coeffs":["1","0","0","0","0"]}]}"#;
        assert!(serde_json::from_str::<SkewLinMatrix>(lower).is_err());
        let short = r#"{"entries":[{"i":0,"j":1,"coeffs":["1"]}]}"#;
        assert!(serde_json::from_str::<SkewLinMatrix>(short).is_err());
        let zero_den = r#"{"entries":[{"i":0,"j":1,"coeffs":["1/0","0","0","0","0"]}]}"#;
        assert!(serde_json::from_str::<SkewLinMatrix>(zero_den).is_err());
    }

    #[test]
    fn lower_entries_negate() {
        let m = sample();
        assert_eq!(m.entry(1, 0), -Polynomial::x(0));
        assert_eq!(m.entry(2, 2), Polynomial::zero());
    }

    #[test]
    fn coefficient_vector_roundtrip() {
        let m = sample();
        let v = m.coefficient_vector();
        assert_eq!(v.len(), 75);
        assert_eq!(v[0], q(1));
        assert_eq!(SkewLinMatrix::from_coefficient_vector(6, &v), m);
    }

    #[test]
    fn entry_span_dimension() {
        assert_eq!(sample().entry_span().dim(), 4);
    }

    #[test]
    fn kernel_of_a_row() {
        // (x0, x1) v = 0 has the single linear solution v = (x1, -x0)
        let a = LinMatrix::from_fn(1, 2, |_, j| unit_form(j));
        let k = a.linear_kernel();
        assert_eq!(k.cols(), 1);
        let prod = a.mul(&k);
        assert!(prod[0][0].is_zero());
    }

    #[test]
    fn block_matrix_syzygies() {
        // Pf = 0 since the (4,5),(2,5),... pairings vanish
        let m = sample();
        assert!(m.pfaffian().unwrap().is_zero());
        let s = linear_syzygies(&m).unwrap();
        for row in m.lin_matrix().mul(&s) {
            assert!(row.iter().all(Polynomial::is_zero));
        }
    }

    #[test]
    fn syzygies_need_vanishing_pfaffian() {
        let mut m = SkewLinMatrix::zeros(6);
        m.set(0, 1, unit_form(0));
        m.set(2, 3, unit_form(1));
        m.set(4, 5, unit_form(2));
        assert!(matches!(linear_syzygies(&m), Err(Error::PfaffianNonZero(_))));
    }

    #[test]
    fn change_coordinates_substitutes() {
        let m = sample();
        // swap x0 and x3
        let mut c = QMatrix::identity(5);
        c[(0, 0)] = q(0);
        c[(3, 3)] = q(0);
        c[(0, 3)] = q(1);
        c[(3, 0)] = q(1);
        let s = m.change_coordinates(&c);
        assert_eq!(s.entry(0, 1), Polynomial::x(3));
        assert_eq!(s.entry(3, 4), Polynomial::x(0));
    }
}
