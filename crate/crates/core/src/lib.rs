//! Cover-free families from polynomials over finite-field towers and from
//! packing arrays.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! verification and the command-line tool live in the `cff` crate.
//!
//! * [`field`] and [`poly`]: GF(p^m) and its iterated quadratic extensions,
//!   with an element order in which every subfield is a prefix.
//! * [`cff`]: the polynomial construction `C_{q,k}`, block restriction,
//!   cover-free verification and the non-adaptive group-testing decoder.
//! * [`embedding`]: nested sequences of such matrices and checkers for the
//!   embedding, nested and monotone family conditions.
//! * [`designs`]: orthogonal and packing arrays, separating hash families
//!   and the conversion chain down to incidence matrices.
//! * [`metrics`]: exact big-integer parameters, compression ratios and the
//!   reference tables.

#![no_std]

extern crate alloc;

pub mod cff;
mod cover;
pub mod designs;
pub mod embedding;
pub mod field;
pub mod fixtures;
pub mod matrix;
pub mod metrics;
pub mod poly;

pub use cover::Work;
pub use field::{Field, FieldDescriptor, FieldElement, FieldError};
pub use matrix::{IncidenceMatrix, Provenance};
pub use poly::DensePolynomial;
