//! Zonal kernels on catalog spaces: evaluation, Gram matrices, derivatives.
//!
//! A [`ZonalKernel`] pairs a [`Space`] with a coefficient sequence at that
//! space's Jacobi indices.  It evaluates radially in the invariant variable
//! `t` or directly on point pairs of the coordinate model, assembles Gram
//! matrices over point sets (data-parallel via `rayon` under the default
//! `parallel` feature, with a sequential fallback that produces bit-identical
//! results), and differentiates through the descent chain, yielding a
//! [`KernelDerivative`] that evaluates any order up to the space's guaranteed
//! smoothness class.

use crate::coeffs::{eval_series, CoeffSeq, TAIL_TERM_FLOOR};
use crate::derivative::{chain, DerivSample, DerivativeChain};
use crate::error::{Error, Result};
use crate::spaces::{Point, Space};
use nalgebra::DMatrix;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A zonal kernel: coefficients at the Jacobi indices of a catalog space.
#[derive(Clone, Debug, PartialEq)]
pub struct ZonalKernel {
    space: Space,
    coeffs: CoeffSeq,
}

#[derive(Serialize, Deserialize)]
struct KernelDoc {
    space: String,
    coeffs: CoeffSeq,
}

impl ZonalKernel {
    /// Pairs a space with coefficients, requiring the indices to match.
    pub fn new(space: Space, coeffs: CoeffSeq) -> Result<Self> {
        let want = space.jacobi_params()?;
        if coeffs.params() != want {
            return Err(Error::SpaceParamsMismatch {
                space: space.to_string(),
                want_alpha: want.alpha(),
                want_beta: want.beta(),
                got_alpha: coeffs.params().alpha(),
                got_beta: coeffs.params().beta(),
            });
        }
        Ok(Self { space, coeffs })
    }

    /// The space the kernel lives on.
    pub fn space(&self) -> Space {
        self.space
    }

    /// The coefficient sequence.
    pub fn coeffs(&self) -> &CoeffSeq {
        &self.coeffs
    }

    /// Radial evaluation `K(t)` for `t` in `[-1, 1]`.
    pub fn eval_radial(&self, t: f64) -> Result<f64> {
        self.coeffs.eval(t)
    }

    /// Evaluation on a point pair of the coordinate model.
    pub fn eval_pair(&self, x: &Point, y: &Point) -> Result<f64> {
        let t = self.space.zonal_argument(x, y)?;
        self.eval_radial(t)
    }

    /// Gram matrix `[K(x_j, x_k)]` over a point set.
    ///
    /// Rows are computed data-parallel when the `parallel` feature (default)
    /// is enabled; every entry is evaluated independently, so the result is
    /// bit-identical to [`ZonalKernel::gram_serial`].
    pub fn gram(&self, points: &[Point]) -> Result<DMatrix<f64>> {
        #[cfg(feature = "parallel")]
        {
            self.gram_parallel(points)
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.gram_serial(points)
        }
    }

    /// Sequential Gram matrix assembly.
    pub fn gram_serial(&self, points: &[Point]) -> Result<DMatrix<f64>> {
        let (finite, mass) = self.gram_setup(points)?;
        let n = points.len();
        let mut data = vec![0.0f64; n * n];
        for (j, row) in data.chunks_mut(n).enumerate() {
            self.gram_row(&finite, mass, points, j, row)?;
        }
        Ok(DMatrix::from_row_slice(n, n, &data))
    }

    #[cfg(feature = "parallel")]
    fn gram_parallel(&self, points: &[Point]) -> Result<DMatrix<f64>> {
        let (finite, mass) = self.gram_setup(points)?;
        let n = points.len();
        let mut data = vec![0.0f64; n * n];
        data.par_chunks_mut(n)
            .enumerate()
            .try_for_each(|(j, row)| self.gram_row(&finite, mass, points, j, row))?;
        Ok(DMatrix::from_row_slice(n, n, &data))
    }

    fn gram_setup(&self, points: &[Point]) -> Result<(CoeffSeq, f64)> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let expected = self.space.point_len()?;
        for p in points {
            if p.coords().len() != expected {
                return Err(Error::PointDimensionMismatch {
                    space: self.space.to_string(),
                    expected,
                    got: p.coords().len(),
                });
            }
        }
        Ok((self.coeffs.materialize(TAIL_TERM_FLOOR), self.coeffs.total_mass()))
    }

    fn gram_row(
        &self,
        finite: &CoeffSeq,
        mass: f64,
        points: &[Point],
        j: usize,
        row: &mut [f64],
    ) -> Result<()> {
        for (k, slot) in row.iter_mut().enumerate() {
            let t = self.space.zonal_argument(&points[j], &points[k])?;
            *slot = if t == 1.0 {
                mass
            } else {
                eval_series(finite.params(), finite.values(), t)
            };
        }
        Ok(())
    }

    /// Differentiates the kernel `order` times through the descent chain.
    ///
    /// Requires a positive definite coefficient sequence and
    /// `1 <= order <= space.smoothness_order()`.
    pub fn differentiate(&self, order: u32) -> Result<KernelDerivative> {
        Ok(KernelDerivative {
            chain: chain(self.space, &self.coeffs, order)?,
        })
    }

    /// Serializes to the structured kernel document.
    pub fn to_json_string(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("kernel document is serializable");
        text.push('\n');
        text
    }

    /// Parses the structured kernel document.
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Serialize for ZonalKernel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        KernelDoc {
            space: self.space.to_string(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ZonalKernel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = KernelDoc::deserialize(deserializer)?;
        let space: Space = doc
            .space
            .parse()
            .map_err(|e: Error| D::Error::custom(e.to_string()))?;
        ZonalKernel::new(space, doc.coeffs).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Derivatives of a kernel, backed by its descent chain.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelDerivative {
    chain: DerivativeChain,
}

impl KernelDerivative {
    /// The space whose kernel was differentiated.
    pub fn space(&self) -> Space {
        self.chain.space()
    }

    /// Highest derivative order available.
    pub fn order(&self) -> u32 {
        self.chain.order()
    }

    /// The underlying descent chain with its per-level decompositions.
    pub fn chain(&self) -> &DerivativeChain {
        &self.chain
    }

    /// Evaluates the full-order derivative at `t` strictly inside `(-1, 1)`.
    pub fn eval(&self, t: f64) -> Result<DerivSample> {
        self.chain.eval(t)
    }

    /// Evaluates a lower-order derivative from the same chain.
    pub fn eval_order(&self, order: u32, t: f64) -> Result<DerivSample> {
        self.chain.eval_order(order, t)
    }
}

/// Eigenvalues of a symmetric matrix, sorted ascending.
pub fn symmetric_eigenvalues(matrix: &DMatrix<f64>) -> Vec<f64> {
    let mut eigs: Vec<f64> = matrix
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}
