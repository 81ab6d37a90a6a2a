use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Number of projective coordinates `x0..x4`.
pub const NX: usize = 5;
/// Number of strictly upper-triangular positions of a 6x6 matrix.
pub const NPAIRS: usize = 15;

const A_BASE: u16 = NX as u16;
const B_BASE: u16 = A_BASE + (NPAIRS * NX) as u16;
const T_INDEX: u16 = B_BASE + (NPAIRS * NX) as u16;

/// A polynomial variable. The table is fixed: the coordinates `x0..x4`, the
/// first-order deformation coordinates `a_ijk` (coefficient of `x_k` in entry
/// `(i, j)`, `i < j`), the second-order ones `b_ijk`, and a curve parameter
/// `t`. The numeric index is also the position in the monomial order, with
/// `x0` the largest variable.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u16);

/// Position of `(i, j)`, `i < j < 6`, in the order (0,1), (0,2), ..., (4,5).
pub fn pair_index(i: usize, j: usize) -> usize {
    assert!(i < j && j < 6, "pair ({i}, {j}) is not strictly upper triangular");
    i * (11 - i) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_of(p: usize) -> (usize, usize) {
    PAIRS[p]
}

pub const PAIRS: [(usize, usize); NPAIRS] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VarKind {
    X(usize),
    A(usize, usize, usize),
    B(usize, usize, usize),
    T,
}

impl Var {
    pub fn x(k: usize) -> Var {
        assert!(k < NX);
        Var(k as u16)
    }

    pub fn a(i: usize, j: usize, k: usize) -> Var {
        assert!(k < NX);
        Var(A_BASE + (pair_index(i, j) * NX + k) as u16)
    }

    pub fn b(i: usize, j: usize, k: usize) -> Var {
        assert!(k < NX);
        Var(B_BASE + (pair_index(i, j) * NX + k) as u16)
    }

    pub fn t() -> Var {
        Var(T_INDEX)
    }

    pub fn kind(self) -> VarKind {
        let v = self.0;
        if v < A_BASE {
            VarKind::X(v as usize)
        } else if v < B_BASE {
            let r = (v - A_BASE) as usize;
            let (i, j) = pair_of(r / NX);
            VarKind::A(i, j, r % NX)
        } else if v < T_INDEX {
            let r = (v - B_BASE) as usize;
            let (i, j) = pair_of(r / NX);
            VarKind::B(i, j, r % NX)
        } else {
            VarKind::T
        }
    }

    pub fn is_x(self) -> bool {
        self.0 < A_BASE
    }

    pub fn is_a(self) -> bool {
        (A_BASE..B_BASE).contains(&self.0)
    }

    pub fn is_b(self) -> bool {
        (B_BASE..T_INDEX).contains(&self.0)
    }

    pub fn xs() -> Vec<Var> {
        (0..NX).map(Var::x).collect()
    }

    /// All 75 `a_ijk` in index order.
    pub fn all_a() -> Vec<Var> {
        (0..NPAIRS * NX).map(|r| Var(A_BASE + r as u16)).collect()
    }

    pub fn all_b() -> Vec<Var> {
        (0..NPAIRS * NX).map(|r| Var(B_BASE + r as u16)).collect()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            VarKind::X(k) => write!(f, "x{k}"),
            VarKind::A(i, j, k) => write!(f, "a{i}{j}{k}"),
            VarKind::B(i, j, k) => write!(f, "b{i}{j}{k}"),
            VarKind::T => write!(f, "t"),
        }
    }
}

/// Sparse exponent vector: `(variable, exponent)` pairs sorted by variable,
/// exponents nonzero. Ordered graded reverse-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u16); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: Var, e: u16) -> Self {
        let mut m = Monomial::one();
        if e > 0 {
            m.0.push((v, e));
        }
        m
    }

    /// From a dense exponent vector indexed by variable number.
    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (Var(i as u16), e))
                .collect(),
        )
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u16)>) -> Self {
        pairs.sort();
        let mut out: SmallVec<[(Var, u16); 6]> = SmallVec::new();
        for (v, e) in pairs {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    /// Dense exponent vector of length `max(min_len, highest variable + 1)`.
    pub fn exponents(&self, min_len: usize) -> Vec<u16> {
        let len = self.0.last().map_or(0, |(v, _)| v.0 as usize + 1).max(min_len);
        let mut out = vec![0; len];
        for &(v, e) in &self.0 {
            out[v.0 as usize] = e;
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn degree_in(&self, pred: impl Fn(Var) -> bool) -> u32 {
        self.0.iter().filter(|(v, _)| pred(*v)).map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, e)| e)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Splits into the part in variables satisfying `pred` and the rest.
    pub fn split(&self, pred: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let (a, b): (SmallVec<_>, SmallVec<_>) = self.0.iter().copied().partition(|(v, _)| pred(*v));
        (Monomial(a), Monomial(b))
    }

    /// All monomials of total degree `d` in `vars`, in decreasing order.
    pub fn all_of_degree(vars: &[Var], d: u32) -> Vec<Monomial> {
        let mut sorted = vars.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(vars: &[Var], d: u32, current: &mut Vec<(Var, u16)>, out: &mut Vec<Monomial>) {
            if d == 0 {
                out.push(Monomial::from_pairs(current.clone()));
                return;
            }
            let Some((&v, rest)) = vars.split_first() else {
                return;
            };
            for e in (0..=d).rev() {
                if rest.is_empty() && e != d {
                    continue;
                }
                if e > 0 {
                    current.push((v, e as u16));
                }
                rec(rest, d - e, current, out);
                if e > 0 {
                    current.pop();
                }
            }
        }
        rec(&sorted, d, &mut current, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }
}

impl Ord for Monomial {
    /// Graded reverse lexicographic: higher degree first; on ties the
    /// monomial with the smaller exponent in the last differing variable is
    /// larger.
    fn cmp(&self, other: &Self) -> Ordering {
        let (da, db) = (self.degree(), other.degree());
        if da != db {
            return da.cmp(&db);
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 && j > 0 {
            let (va, ea) = a[i - 1];
            let (vb, eb) = b[j - 1];
            match va.cmp(&vb) {
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    i -= 1;
                    j -= 1;
                }
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
            }
        }
        // equal degree forces both to be exhausted here
        debug_assert!(i == 0 && j == 0);
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, &(v, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
