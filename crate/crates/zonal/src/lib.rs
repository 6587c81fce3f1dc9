//! Positive definite zonal kernels on compact two-point homogeneous spaces.
//!
//! A continuous kernel on a sphere or projective space that is invariant under
//! the isometry group is determined by a single radial profile on `[-1, 1]`,
//! and that profile by its Fourier-Jacobi coefficient sequence at the space's
//! `(alpha, beta)` indices.  This crate provides:
//!
//! * evaluation of Jacobi polynomials and their normalized forms
//!   ([`jacobi`]), including the three-term derivative relation used
//!   throughout the derivative calculus;
//! * coefficient sequences with optional geometric tails, Gauss-Jacobi
//!   expansion, the index-raising transforms, re-expansion between index
//!   pairs, and the nonnegativity/summability test for positive definiteness
//!   ([`coeffs`]);
//! * convergence diagnostics for the comparison sequences that control the
//!   derivative series ([`analysis`]);
//! * the derivative decomposition `(1 - t^2) K' = scale * (f1 - f2)` with
//!   `f1`, `f2` again nonnegative-coefficient profiles on a smaller space,
//!   and its iteration for higher-order derivatives ([`derivative`]);
//! * the catalog of spheres, real/complex/quaternionic projective spaces and
//!   the Cayley plane: index pairs, descent structure, smoothness orders,
//!   embeddings, point models and Gram matrices ([`spaces`], [`kernels`]).
//!
//! Gram assembly and batch evaluation are data-parallel via `rayon` when the
//! default `parallel` feature is enabled; sequential fallbacks are always
//! available and produce identical results.
//!
//! # Example
//!
//! ```
//! use zonal::coeffs::{CoeffSeq, Tail};
//! use zonal::jacobi::JacobiParams;
//! use zonal::kernels::ZonalKernel;
//! use zonal::spaces::Space;
//!
//! // A positive definite kernel on S^3 with geometrically decaying
//! // coefficients a_n = 2^{-n}.
//! let space = Space::Sphere(3);
//! let params = space.jacobi_params().unwrap();
//! let coeffs = CoeffSeq::with_tail(
//!     params,
//!     vec![1.0],
//!     Tail::Geometric { ratio: 0.5, scale: 1.0 },
//! )
//! .unwrap();
//! let kernel = ZonalKernel::new(space, coeffs).unwrap();
//! assert!(kernel.coeffs().pd_check().is_pd);
//!
//! // First derivative of the radial profile, witnessed by two
//! // nonnegative-coefficient profiles at the indices of S^1.
//! let derivative = kernel.differentiate(1).unwrap();
//! let sample = derivative.eval(0.25).unwrap();
//! assert!(sample.value.is_finite() && !sample.near_endpoint);
//! ```

pub mod analysis;
pub mod coeffs;
pub mod derivative;
mod dd;
mod error;
pub mod jacobi;
pub mod kernels;
pub mod quad;
pub mod spaces;

pub use error::{Error, Result};

// Gram matrices are returned as `nalgebra` types; re-export the crate so
// downstream users can name them without pinning their own copy.
pub use nalgebra;
