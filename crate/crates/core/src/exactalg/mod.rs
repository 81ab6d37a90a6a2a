//! Exact arithmetic: rationals, dense rational matrices, sparse polynomials
//! and canonical subspaces of graded pieces.

pub mod matrix;
pub mod monomial;
pub mod piece;
pub mod poly;
pub mod rational;
pub mod ring;

pub use matrix::{Echelon, QMatrix};
pub use monomial::{pair_index, pair_of, Monomial, Var, VarKind, NPAIRS, NX, PAIRS};
pub use piece::{piece_ops, piece_span, DegreePiece, MonomialBasis, PieceOp, PieceOutcome};
pub use poly::Polynomial;
pub use rational::{frac, q, Rational};
pub use ring::CommRing;
