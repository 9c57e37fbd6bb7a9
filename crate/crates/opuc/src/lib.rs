//! Numerical toolkit for orthogonal polynomials on the unit circle (OPUC).
//!
//! A probability measure `μ` on the unit circle with infinite support is
//! encoded — exactly, not approximately — by each of several families of
//! data, and the point of this crate is to make the translations between
//! them computable and testable:
//!
//! * **moments** `c_n = ∫ e^{-inθ} dμ`,
//! * **monic orthogonal polynomials** `Φ_n` produced by the Szegő recursion,
//! * **Verblunsky coefficients** `α_n ∈ 𝔻`, the recursion parameters,
//! * **Schur parameters** `γ_n` of the Schur function attached to `μ`
//!   (these coincide with the `α_n` — Geronimus' theorem),
//! * **CMV matrices**, the five-diagonal unitary canonical form whose
//!   spectral measure for `δ_0` is `μ`,
//! * and, for measures invariant under complex conjugation, **Jacobi
//!   parameters** of the image measure on `[-2, 2]` under `θ ↦ 2 cos θ`.
//!
//! Everything here is dense, double-precision, desk-scale numerics: grids of
//! a few thousand points, polynomial degrees up to a few dozen, matrices up
//! to 64×64. The goal is correctness of the correspondences to tight,
//! documented tolerances rather than asymptotic performance.
//!
//! # Module map
//!
//! * [`poly`], [`series`] — complex polynomial and truncated power-series
//!   arithmetic used throughout.
//! * [`measure`] — grid-sampled measures on the circle, moments,
//!   Carathéodory and Schur transforms, Toeplitz inner products.
//! * [`szego`] — the Szegő recursion, forward and inverted, Verblunsky
//!   extraction from moments, the CD kernel.
//! * [`schur`] — the Schur algorithm, Wall-polynomial approximants,
//!   Khrushchev products.
//! * [`cmv`] — CMV matrices, characteristic polynomials, zero sets,
//!   spectral measures, Haar sampling.
//! * [`transfer`] — transfer matrices, second-kind polynomials, Weyl
//!   solutions, Lyapunov exponents, Thouless-type integrals.
//! * [`synthesis`] — Bernstein–Szegő measures and Aleksandrov families.
//! * [`asymptotics`] — Toeplitz determinants, Szegő's theorem and its
//!   strong form, the Szegő function, Baxter/Nevai–Totik diagnostics.
//! * [`periodic`] — discriminants and band structure for periodic
//!   coefficient sequences.
//! * [`szego_map`] — the unit-circle ↔ interval correspondence and the
//!   Geronimus relations to Jacobi parameters.
//! * [`suites`] — named verification suites used by the `opuc` CLI.

pub mod asymptotics;
pub mod cmv;
pub mod eigen;
pub mod error;
pub mod measure;
pub mod periodic;
pub mod poly;
pub mod schur;
pub mod series;
pub mod suites;
pub mod synthesis;
pub mod szego;
pub mod szego_map;
pub mod transfer;

mod serde_util;

pub use error::{Error, Result};
pub use measure::{CircleMeasure, MomentSeq, PointMass};
pub use poly::ComplexPoly;
pub use series::PowerSeries;
pub use szego::{OpucFamily, VerblunskySeq};

/// The complex scalar type used throughout the crate.
pub type C64 = num_complex::Complex64;
