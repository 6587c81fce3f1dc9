//! Gauss-Jacobi quadrature via the Golub-Welsch eigenvalue method.
//!
//! Nodes are the eigenvalues of the symmetric tridiagonal recurrence matrix of
//! the orthonormal Jacobi polynomials; weights are the squared first
//! eigenvector components scaled by the total weight mass.  A rule with `k`
//! nodes integrates polynomials up to degree `2k - 1` exactly, so callers pick
//! `floor(D/2) + 1` nodes for degree-`D` integrands.

use crate::error::{Error, Result};
use crate::jacobi::{weight_mass, JacobiParams};
use nalgebra::DMatrix;

/// A Gauss-Jacobi rule: ascending nodes in `(-1, 1)` with positive weights.
#[derive(Clone, Debug)]
pub struct Quadrature {
    params: JacobiParams,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Diagonal entries of the symmetric recurrence matrix.
pub(crate) fn recurrence_diagonal(p: JacobiParams, len: usize) -> Vec<f64> {
    let (al, be) = (p.alpha(), p.beta());
    let mut d = Vec::with_capacity(len);
    if len == 0 {
        return d;
    }
    d.push((be - al) / (al + be + 2.0));
    for idx in 0..len - 1 {
        let i1 = (idx + 1) as f64;
        let den = 2.0 * i1 + al + be;
        d.push((be * be - al * al) / (den * (den + 2.0)));
    }
    d
}

/// Off-diagonal entries of the symmetric recurrence matrix.
///
/// The generic entry contains the factor `(i)(i+alpha+beta)` under the square
/// root; for the first entry (`i = 1`) that factor collides with the
/// `den - 1 = alpha + beta + 1` divisor when `alpha + beta = -1`, so the
/// cancelled closed form is used there instead.
pub(crate) fn recurrence_offdiagonal(p: JacobiParams, len: usize) -> Vec<f64> {
    let (al, be) = (p.alpha(), p.beta());
    let mut e = Vec::with_capacity(len);
    for idx in 0..len {
        let i1 = (idx + 1) as f64;
        let den = 2.0 * i1 + al + be;
        let value = if idx == 0 {
            (2.0 / den) * ((1.0 + al) * (1.0 + be) / (den + 1.0)).sqrt()
        } else {
            (2.0 / den)
                * (i1 * (i1 + al) * (i1 + be) * (i1 + al + be) / ((den + 1.0) * (den - 1.0)))
                    .sqrt()
        };
        e.push(value);
    }
    e
}

impl Quadrature {
    /// Builds the `k`-node Gauss-Jacobi rule for the given parameters.
    pub fn gauss_jacobi(params: JacobiParams, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::QuadratureFailure);
        }
        let d = recurrence_diagonal(params, k);
        let e = recurrence_offdiagonal(params, k.saturating_sub(1));
        let mut m = DMatrix::<f64>::zeros(k, k);
        for (i, di) in d.iter().enumerate() {
            m[(i, i)] = *di;
        }
        for (i, ei) in e.iter().enumerate() {
            m[(i, i + 1)] = *ei;
            m[(i + 1, i)] = *ei;
        }
        let eig = m.symmetric_eigen();
        let mass = weight_mass(params);
        let mut rule: Vec<(f64, f64)> = (0..k)
            .map(|j| {
                let node = eig.eigenvalues[j];
                let first = eig.eigenvectors[(0, j)];
                (node, mass * first * first)
            })
            .collect();
        rule.sort_by(|a, b| a.0.total_cmp(&b.0));
        let nodes: Vec<f64> = rule.iter().map(|r| r.0).collect();
        let weights: Vec<f64> = rule.iter().map(|r| r.1).collect();
        if nodes.iter().chain(weights.iter()).any(|v| !v.is_finite()) {
            return Err(Error::QuadratureFailure);
        }
        Ok(Self {
            params,
            nodes,
            weights,
        })
    }

    /// Parameters of the underlying weight.
    pub fn params(&self) -> JacobiParams {
        self.params
    }

    /// Nodes in ascending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights matching [`Quadrature::nodes`] by position.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` against the Jacobi weight.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}
