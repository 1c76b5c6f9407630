//! Exact-arithmetic core of the TFT workbench.
//!
//! Everything here works over the rationals with arbitrary-precision
//! integers; there are no floating point values anywhere in the crate.
//! The crate is `no_std` and only needs `alloc`.
//!
//! - [`exactlin`]: rationals, multivariate polynomials, dense matrices and
//!   fraction-free elimination.
//! - [`frobenius`]: commutative Frobenius algebras and closed partition
//!   functions.
//! - [`bordism`]: the layered word calculus for oriented 2d bordisms and its
//!   evaluation functor.
//! - [`mfcat`]: matrix factorizations, truncated Hom cohomology, composition
//!   and the tensor (fusion) product with explicit associators.
//! - [`deformation`]: dg Lie algebras, the Maurer-Cartan residual, first order
//!   gauge action, truncated Poisson models and the Schouten bracket.
//! - [`statespace`]: genus-g state space dimensions from cohomology data.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod bordism;
pub mod deformation;
pub mod exactlin;
pub mod frobenius;
pub mod mfcat;
pub mod statespace;

pub use exactlin::{LinError, Poly, PolyMatrix, Rat, RatMatrix};
