//! Pfaffians, sub-Pfaffians, linear syzygies and graded ideal pieces of skew
//! matrices of linear forms.
//!
//! Sign convention: `q_ab` is the Pfaffian of the matrix with rows and
//! columns `a` and `b` deleted (no sign). It enters the expansion of the
//! Pfaffian with the sign `(-1)^(a+b+1)` (0-based), so that
//!
//! - `Pf(M) = sum_b (-1)^(b+1) M[0][b] q_0b(M)` (first row), and
//! - the `eps` coefficient of `Pf(M + eps N)` is
//!   `sum_{a<b} (-1)^(a+b+1) N[a][b] q_ab(M)`.
//!
//! Taking `N = M` in the second line gives `3 Pf(M)` for a 6x6 matrix.

pub mod ideal;
pub mod linear;
pub mod skew;

pub use ideal::{ideal_piece, rank0_point, saturate_piece, GradedIdeal, PointIdeal, DEFAULT_COLON_CAP};
pub use linear::{
    form_from_i64, form_is_zero, form_poly, linear_syzygies, transpose_syzygies, unit_form, zero_form, LinMatrix,
    LinearForm, SkewLinMatrix, SyzygyMatrix,
};
pub use skew::{laplace_sign, SkewMatrix};

use crate::exactalg::{DegreePiece, Polynomial};

/// Span of the entries of `m` in degree 1.
pub fn entry_span(m: &SkewLinMatrix) -> DegreePiece {
    m.entry_span()
}

pub fn pfaffian(m: &SkewLinMatrix) -> crate::Result<Polynomial> {
    m.pfaffian()
}

pub fn sub_pfaffians(m: &SkewLinMatrix) -> Vec<Polynomial> {
    m.sub_pfaffians()
}
