//! Mask/defect combinatorics for Kazhdan-Lusztig polynomials of Deodhar
//! elements in finite Weyl groups.
//!
//! The crate is organized around Deodhar's observation that for a *bounded*
//! (equivalently, Deodhar) element `w`, the Kazhdan-Lusztig polynomial
//! `P_{x,w}(q)` is the generating function of masks on a reduced word of `w`
//! that evaluate to `x`, graded by defect count. The modules:
//!
//! - [`coxeter`]: finite Weyl group kernel for types A, B, D, E6-E8, F4, G2
//!   (elements, lengths, descents, reduced words, Bruhat order, enumeration).
//! - [`patterns`]: classical pattern containment and the `{3412, 4231}`
//!   smoothness test for type A.
//! - [`poly`]: integer polynomials in `q`.
//! - [`masks`]: mask evaluation, defect classification, the Deodhar
//!   statistic `D`, boundedness, and mu-mask enumeration.
//! - [`heaps`]: heap posets with lattice coordinates, coalescing, string
//!   overlays, shape detection, type D convexity, critical zeros, defect
//!   graphs, and the D-to-A projection for three-entry first columns.
//! - [`kl`]: Kazhdan-Lusztig polynomials by classical recursion and by the
//!   mask generating function, mu-coefficients, and whole-group 0-1
//!   verification sweeps.

pub mod coxeter;
pub mod error;
pub mod heaps;
pub mod kl;
pub mod masks;
pub mod patterns;
pub mod poly;

pub use coxeter::{build_system, CoxeterSystem, Element, Family, Side, Word};
pub use error::Error;
pub use heaps::{DecoratedHeap, Decoration, DefectGraph, Heap, StringDiagram};
pub use kl::{kl_deodhar, kl_recursive, mu, verify_zero_one, MuReport, VerifyOptions};
pub use masks::{DefectProfile, Mask, PositionStatus};
pub use patterns::Pattern;
pub use poly::QPolynomial;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
