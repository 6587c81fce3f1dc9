//! Jacobi polynomials, their normalized forms and the derivative relation.
//!
//! For parameters `alpha, beta > -1` the Jacobi polynomials `P_n` are
//! orthogonal on `[-1, 1]` against the weight `(1-t)^alpha (1+t)^beta`.  The
//! kernel calculus in this crate works throughout with the normalized form
//! `R_n = P_n / P_n(1)`, which satisfies `R_n(1) = 1` and, for `n >= 1`, the
//! three-term derivative relation
//!
//! ```text
//! (1 - t^2) R_n'(t) = A_n R_{n-1}(t) + B_n R_n(t) + C_n R_{n+1}(t)
//! ```
//!
//! with closed-form coefficients returned by [`deriv_triple`].  Everything is
//! evaluated by ascending-degree recurrences; gamma-function ratios are
//! computed as running products so that degrees past `n ~ 170` do not
//! overflow.

use crate::error::{Error, Result};

/// Validated Jacobi parameter pair `(alpha, beta)`, both `> -1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    /// Builds a parameter pair, rejecting non-finite values and values
    /// outside the open half-line `(-1, infinity)`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() || alpha <= -1.0 || beta <= -1.0 {
            return Err(Error::InvalidParams { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// First index.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Second index.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Convenience accessor for `alpha + beta`.
    pub fn sum(&self) -> f64 {
        self.alpha + self.beta
    }
}

impl std::fmt::Display for JacobiParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// Coefficients of the three-term derivative relation for degree `n >= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivTriple {
    /// Degree the relation is stated for.
    pub n: usize,
    /// Coefficient `A_n` multiplying `R_{n-1}`.
    pub a: f64,
    /// Coefficient `B_n` multiplying `R_n`; zero whenever `alpha == beta`.
    pub b: f64,
    /// Coefficient `C_n` multiplying `R_{n+1}`; strictly negative for `n >= 1`.
    pub c: f64,
}

fn check_t_closed(t: f64) -> Result<()> {
    if t.is_nan() {
        return Err(Error::NonFinite { what: "t", value: t });
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::OutsideClosedInterval { t });
    }
    Ok(())
}

fn check_t_open(t: f64) -> Result<()> {
    if t.is_nan() {
        return Err(Error::NonFinite { what: "t", value: t });
    }
    if t <= -1.0 || t >= 1.0 {
        return Err(Error::OutsideOpenInterval { t });
    }
    Ok(())
}

/// Unvalidated ascending-degree recurrence for `P_n^{alpha,beta}(t)`.
///
/// Callers are responsible for having validated `t`; the recurrence itself is
/// well defined for every `t` and every valid parameter pair.
pub(crate) fn eval_p_unchecked(p: JacobiParams, n: usize, t: f64) -> f64 {
    let (al, be) = (p.alpha, p.beta);
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * ((al + be + 2.0) * t + (al - be));
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + al + be;
        let c1 = 2.0 * kf * (kf + al + be) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * t + al * al - be * be);
        let c3 = 2.0 * (kf + al - 1.0) * (kf + be - 1.0) * s;
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Evaluates the Jacobi polynomial `P_n^{alpha,beta}(t)` for `t` in `[-1, 1]`.
pub fn eval_p(p: JacobiParams, n: usize, t: f64) -> Result<f64> {
    check_t_closed(t)?;
    Ok(eval_p_unchecked(p, n, t))
}

/// Value at the right endpoint, `P_n^{alpha,beta}(1)`.
///
/// Computed as the running product `prod_{j=1..n} (alpha + j) / j`, which is
/// strictly positive and avoids gamma-function overflow at large degree.
pub fn p_at_one(p: JacobiParams, n: usize) -> f64 {
    let mut acc = 1.0;
    for j in 1..=n {
        let jf = j as f64;
        acc *= (p.alpha + jf) / jf;
    }
    acc
}

/// Total mass of the Jacobi weight, `int_{-1}^{1} (1-t)^alpha (1+t)^beta dt`.
///
/// Equals `2^{alpha+beta+1} Gamma(alpha+1) Gamma(beta+1) / Gamma(alpha+beta+2)`;
/// every gamma argument is positive, so this stays finite on the whole valid
/// parameter range, including `alpha + beta = -1`.
pub fn weight_mass(p: JacobiParams) -> f64 {
    use statrs::function::gamma::gamma;
    2f64.powf(p.alpha + p.beta + 1.0) * gamma(p.alpha + 1.0) * gamma(p.beta + 1.0)
        / gamma(p.alpha + p.beta + 2.0)
}

/// Squared weighted L2 norm `h_n` of `P_n^{alpha,beta}`.
///
/// The degree-0 value is the weight mass itself; higher degrees are reached by
/// the running-product form
/// `h_n = h_0 * (alpha+1)(beta+1)/(2n+alpha+beta+1) *
/// prod_{j=2..n} (alpha+j)(beta+j) / (j (alpha+beta+j))`,
/// which never evaluates a gamma function at a large argument and stays
/// finite at `alpha + beta = -1`.
pub fn norm_h(p: JacobiParams, n: usize) -> f64 {
    let h0 = weight_mass(p);
    if n == 0 {
        return h0;
    }
    let (al, be) = (p.alpha, p.beta);
    let nf = n as f64;
    let mut acc = h0 * (al + 1.0) * (be + 1.0) / (2.0 * nf + al + be + 1.0);
    for j in 2..=n {
        let jf = j as f64;
        acc *= (al + jf) * (be + jf) / (jf * (al + be + jf));
    }
    acc
}

/// Evaluates the normalized polynomial `R_n^{alpha,beta}(t) = P_n(t)/P_n(1)`.
///
/// At `t = 1` the normalization makes the value exactly 1, which is returned
/// directly rather than as a quotient of two separately rounded evaluations.
pub fn eval_r(p: JacobiParams, n: usize, t: f64) -> Result<f64> {
    check_t_closed(t)?;
    if t == 1.0 {
        return Ok(1.0);
    }
    Ok(eval_p_unchecked(p, n, t) / p_at_one(p, n))
}

/// Closed-form coefficients of `(1-t^2) R_n' = A_n R_{n-1} + B_n R_n + C_n R_{n+1}`.
///
/// The relation is stated for `n >= 1`; requesting the constant term is an
/// error because its derivative vanishes identically and the caller must
/// handle that case explicitly.
pub fn deriv_triple(p: JacobiParams, n: usize) -> Result<DerivTriple> {
    if n == 0 {
        return Err(Error::TripleDegreeZero);
    }
    let (al, be) = (p.alpha, p.beta);
    let nf = n as f64;
    let s = 2.0 * nf + al + be;
    let a = 2.0 * nf * (nf + be) * (nf + al + be + 1.0) / (s * (s + 1.0));
    let b = (al - be) * 2.0 * nf * (nf + al + be + 1.0) / (s * (s + 2.0));
    let c = -2.0 * nf * (nf + al + 1.0) * (nf + al + be + 1.0) / ((s + 1.0) * (s + 2.0));
    Ok(DerivTriple { n, a, b, c })
}

/// Derivative of the normalized polynomial, `d/dt R_n^{alpha,beta}(t)`.
///
/// Uses the standard degree-lowering identity
/// `d/dt P_n^{alpha,beta} = (n+alpha+beta+1)/2 * P_{n-1}^{alpha+1,beta+1}`,
/// independent of the three-term relation, which makes it a useful
/// cross-check oracle.  Only interior arguments are accepted.
pub fn eval_dr(p: JacobiParams, n: usize, t: f64) -> Result<f64> {
    check_t_open(t)?;
    if n == 0 {
        return Ok(0.0);
    }
    let shifted = JacobiParams {
        alpha: p.alpha + 1.0,
        beta: p.beta + 1.0,
    };
    let nf = n as f64;
    let dp = 0.5 * (nf + p.alpha + p.beta + 1.0) * eval_p_unchecked(shifted, n - 1, t);
    Ok(dp / p_at_one(p, n))
}
