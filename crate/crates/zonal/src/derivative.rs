//! Derivative decompositions of positive definite radial profiles.
//!
//! For a profile `f(t) = sum a_n R_n(t)` with nonnegative coefficients at
//! indices in the region `2*alpha >= alpha + beta >= -1`, the weighted
//! derivative splits as
//!
//! ```text
//! (1 - t^2) f'(t) = scale * (f1(t) - f2(t)),        scale = 2,
//! ```
//!
//! where `f1` and `f2` are again profiles at the same indices and, for
//! kernels arriving through a descent step, inherit nonnegative coefficients.
//! Two variants of the split are provided: [`Route::Alpha`] raises the first
//! index inside its correction series and serves the real and complex
//! projective families, while [`Route::Dual`] raises both indices and serves
//! spheres, the quaternionic family and the octonionic plane.
//!
//! [`decompose_on_descent`] performs the full step for a kernel on a catalog
//! space — re-expand at the descended indices, clamp re-expansion dust,
//! split — and [`chain`] iterates it, cross-combining the two halves at each
//! level, up to the space's guaranteed smoothness order.  The resulting
//! [`DerivativeChain`] evaluates any derivative up to its order through a
//! polynomial weight table.

use crate::analysis::check_parameter_region;
use crate::coeffs::{eval_series, CoeffSeq};
use crate::error::{Error, Result};
use crate::jacobi::{eval_dr, JacobiParams};
use crate::spaces::Space;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Constant factor in `(1 - t^2) f'(t) = scale * (f1 - f2)`.
pub const DECOMPOSITION_SCALE: f64 = 2.0;

/// Arguments within this distance of the endpoints are flagged as
/// numerically delicate when evaluating derivatives.
const NEAR_ENDPOINT: f64 = 1e-6;

/// Re-expanded coefficients may dip this far below zero before the chain
/// refuses to continue.
const REEXPANSION_FLOOR: f64 = 1e-10;

/// Tail truncation threshold of the termwise derivative oracle.
const RADIAL_TAIL_FLOOR: f64 = 1e-13;

/// Which index-raising transform the derivative split routes through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// Correction series raise the first index only.
    Alpha,
    /// Correction series raise both indices.
    Dual,
}

impl Route {
    /// Splits `(1 - t^2) f'` along this route.
    pub fn decompose(&self, c: &CoeffSeq) -> Result<DerivativeDecomposition> {
        match self {
            Route::Alpha => decompose_alpha_route(c),
            Route::Dual => decompose_dual_route(c),
        }
    }
}

/// Route used when differentiating kernels on `space`.
pub fn route_for(space: Space) -> Route {
    match space {
        Space::RealProjective(_) | Space::ComplexProjective(_) => Route::Alpha,
        Space::Sphere(_) | Space::QuaternionicProjective(_) | Space::Cayley => Route::Dual,
    }
}

/// A derivative value together with a conditioning flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivSample {
    /// The derivative value.
    pub value: f64,
    /// True when the argument is within `1e-6` of an endpoint, where the
    /// `(1 - t^2)` division amplifies rounding.
    pub near_endpoint: bool,
}

/// One split `(1 - t^2) f'(t) = scale * (f1(t) - f2(t))`.
///
/// All three stored sequences live at the same indices; `source` is the
/// materialized input that was decomposed.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeDecomposition {
    f1: CoeffSeq,
    f2: CoeffSeq,
    scale: f64,
    source: CoeffSeq,
}

#[derive(Serialize, Deserialize)]
struct DecompositionDoc {
    f1: CoeffSeq,
    f2: CoeffSeq,
    scale: f64,
    source: CoeffSeq,
}

impl DerivativeDecomposition {
    /// Positive half of the split.
    pub fn f1(&self) -> &CoeffSeq {
        &self.f1
    }

    /// Negative half of the split.
    pub fn f2(&self) -> &CoeffSeq {
        &self.f2
    }

    /// Constant factor applied to the difference.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The materialized sequence that was decomposed.
    pub fn source(&self) -> &CoeffSeq {
        &self.source
    }

    /// Indices shared by `f1`, `f2` and `source`.
    pub fn params(&self) -> JacobiParams {
        self.f1.params()
    }

    /// The weighted derivative `scale * (f1(t) - f2(t))`, defined on the
    /// closed interval.
    pub fn difference(&self, t: f64) -> Result<f64> {
        if t.is_nan() {
            return Err(Error::NonFinite { what: "t", value: t });
        }
        if !(-1.0..=1.0).contains(&t) {
            return Err(Error::OutsideClosedInterval { t });
        }
        Ok(self.scale
            * (eval_series(self.f1.params(), self.f1.values(), t)
                - eval_series(self.f2.params(), self.f2.values(), t)))
    }

    /// The derivative `f'(t) = scale * (f1(t) - f2(t)) / (1 - t^2)`.
    ///
    /// Requires `t` strictly inside `(-1, 1)`; values within `1e-6` of the
    /// endpoints are still computed but flagged.
    pub fn eval(&self, t: f64) -> Result<DerivSample> {
        if t.is_nan() {
            return Err(Error::NonFinite { what: "t", value: t });
        }
        if t.abs() >= 1.0 {
            return Err(Error::OutsideOpenInterval { t });
        }
        let diff = self.difference(t)?;
        Ok(DerivSample {
            value: diff / (1.0 - t * t),
            near_endpoint: t.abs() > 1.0 - NEAR_ENDPOINT,
        })
    }

    /// Serializes to the structured decomposition document.
    pub fn to_json_string(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("decomposition document is serializable");
        text.push('\n');
        text
    }

    /// Parses the structured decomposition document.
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Serialize for DerivativeDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionDoc {
            f1: self.f1.clone(),
            f2: self.f2.clone(),
            scale: self.scale,
            source: self.source.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DerivativeDecomposition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = DecompositionDoc::deserialize(deserializer)?;
        if doc.f1.params() != doc.f2.params() || doc.f1.params() != doc.source.params() {
            return Err(D::Error::custom(
                "decomposition halves and source must share one set of indices",
            ));
        }
        if !doc.scale.is_finite() || doc.scale <= 0.0 {
            return Err(D::Error::custom("decomposition scale must be positive"));
        }
        Ok(DerivativeDecomposition {
            f1: doc.f1,
            f2: doc.f2,
            scale: doc.scale,
            source: doc.source,
        })
    }
}

/// Skew correction coefficient shared by both routes (degree `n >= 1`).
///
/// Multiplies `a_n` inside `f1`; proportional to `alpha - beta`, so it
/// vanishes identically at sphere indices.
pub fn skew_coefficient(params: JacobiParams, n: usize) -> f64 {
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    let nf = n as f64;
    (al - be) * nf * (nf + s + 1.0) / ((2.0 * nf + s) * (2.0 * nf + s + 2.0))
}

/// Second skew coefficient of the double-raise route (degree `n >= 2`).
pub fn dual_skew_coefficient(params: JacobiParams, n: usize) -> f64 {
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    let nf = n as f64;
    (al - be) * nf * (nf - 1.0) / ((2.0 * nf + s) * (2.0 * nf + s + 2.0))
}

/// Main correction coefficient of the single-raise route (degree `n >= 2`).
///
/// Nonnegative throughout the parameter region; multiplies `a_n` inside
/// `f1`.
pub fn alpha_route_q(params: JacobiParams, n: usize) -> f64 {
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    let nf = n as f64;
    (nf + al + 1.0) * (nf + s + 1.0) * (nf + s + 2.0)
        / ((2.0 * nf + s + 2.0) * (2.0 * nf + s + 1.0))
        - nf * (nf - 1.0) * (nf + be) / ((2.0 * nf + s) * (2.0 * nf + s + 1.0))
}

/// Main correction coefficient of the double-raise route (degree `n >= 2`).
///
/// Nonnegative throughout the parameter region; multiplies `a_{n+1}` inside
/// `f1`.
pub fn dual_route_q(params: JacobiParams, n: usize) -> f64 {
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    let nf = n as f64;
    (nf + 1.0) * (nf + be + 1.0) / ((2.0 * nf + s + 2.0) * (2.0 * nf + s + 3.0))
        * ((nf + s + 2.0) - nf * (nf - 1.0) / (nf + s + 1.0))
}

/// Validates the decomposition hypotheses and returns the finite input.
fn checked_input(c: &CoeffSeq) -> Result<CoeffSeq> {
    check_parameter_region(c.params())?;
    let finite = c.materialize(crate::coeffs::TAIL_TERM_FLOOR);
    if let Some((index, &value)) = finite.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeCoefficient { index, value });
    }
    Ok(finite)
}

/// Low-order contributions to `f1[0]` and `f1[1]`, shared by both routes.
fn add_low_order_terms(params: JacobiParams, a: &CoeffSeq, f1: &mut [f64]) {
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    let n = a.degree();
    if n >= 1 {
        f1[0] += (be + 1.0) / (s + 3.0) * a.value_at(1);
    }
    if n >= 2 {
        f1[1] += 2.0 * (be + 2.0) * (s + 3.0) / ((s + 4.0) * (s + 5.0)) * a.value_at(2);
    }
}

/// Splits `(1 - t^2) f'` raising the first index inside the corrections.
///
/// Requires indices in the region `2*alpha >= alpha + beta >= -1` and
/// nonnegative coefficients.  `f1` collects the low-order, skew and main
/// correction series of the input itself; `f2` is assembled from the
/// alpha-raised sequence.  Both halves live at the input indices and have
/// support two degrees longer.
pub fn decompose_alpha_route(c: &CoeffSeq) -> Result<DerivativeDecomposition> {
    let finite = checked_input(c)?;
    let params = finite.params();
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    let n_max = finite.degree();
    let len = n_max + 2;

    let mut f1 = vec![0.0; len];
    add_low_order_terms(params, &finite, &mut f1);
    for (n, slot) in f1.iter_mut().enumerate().take(n_max + 1).skip(1) {
        *slot += skew_coefficient(params, n) * finite.value_at(n);
        if n >= 2 {
            *slot += alpha_route_q(params, n) * finite.value_at(n);
        }
    }

    let raised = finite.lift_alpha();
    let mut f2 = vec![0.0; len];
    for (n, slot) in f2.iter_mut().enumerate().take(n_max + 2).skip(2) {
        let nf = n as f64;
        *slot = (al + 1.0)
            * ((nf + s + 2.0) / (2.0 * nf + s + 2.0) * raised.value_at(n)
                + (nf - 1.0) / (2.0 * nf + s) * raised.value_at(n - 1));
    }

    Ok(DerivativeDecomposition {
        f1: CoeffSeq::new(params, f1)?,
        f2: CoeffSeq::new(params, f2)?,
        scale: DECOMPOSITION_SCALE,
        source: finite,
    })
}

/// Splits `(1 - t^2) f'` raising both indices inside the corrections.
///
/// Same hypotheses and output shape as [`decompose_alpha_route`]; the
/// corrections use both skew series and a main series acting on `a_{n+1}`,
/// and `f2` is assembled from the doubly raised sequence.
pub fn decompose_dual_route(c: &CoeffSeq) -> Result<DerivativeDecomposition> {
    let finite = checked_input(c)?;
    let params = finite.params();
    let (al, _be) = (params.alpha(), params.beta());
    let s = al + params.beta();
    let n_max = finite.degree();
    let len = n_max + 2;

    let mut f1 = vec![0.0; len];
    add_low_order_terms(params, &finite, &mut f1);
    for (n, slot) in f1.iter_mut().enumerate().take(n_max + 1).skip(1) {
        *slot += skew_coefficient(params, n) * finite.value_at(n);
        if n >= 2 {
            *slot += dual_skew_coefficient(params, n) * finite.value_at(n);
        }
        if n >= 2 && n < n_max {
            *slot += dual_route_q(params, n) * finite.value_at(n + 1);
        }
    }

    let raised = finite.lift_both();
    let mut f2 = vec![0.0; len];
    for (n, slot) in f2.iter_mut().enumerate().take(n_max + 2).skip(2) {
        let nf = n as f64;
        *slot = (al + 1.0) * (nf - 1.0) / (nf + s + 1.0) * raised.value_at(n - 1);
    }

    Ok(DerivativeDecomposition {
        f1: CoeffSeq::new(params, f1)?,
        f2: CoeffSeq::new(params, f2)?,
        scale: DECOMPOSITION_SCALE,
        source: finite,
    })
}

/// Termwise derivative oracle `f'(t) = sum a_n (R_n)'(t)`.
///
/// Independent of the decomposition machinery: each basis derivative is
/// evaluated directly, so this is the reference the split is tested against.
/// Requires `t` strictly inside `(-1, 1)`; geometric tails are truncated at
/// the `1e-13` term floor.
pub fn radial_derivative(c: &CoeffSeq, t: f64) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::NonFinite { what: "t", value: t });
    }
    if t.abs() >= 1.0 {
        return Err(Error::OutsideOpenInterval { t });
    }
    let finite = c.materialize(RADIAL_TAIL_FLOOR);
    let params = finite.params();
    let mut acc = 0.0;
    for (n, &a) in finite.values().iter().enumerate().skip(1) {
        if a != 0.0 {
            acc += a * eval_dr(params, n, t)?;
        }
    }
    Ok(acc)
}

/// Flushes re-expansion dust and rejects genuinely negative values.
///
/// Values in `[-1e-10, 0)` are rounding residue of the basis change and are
/// set to zero; anything below the floor means the input was not the descent
/// re-expansion of a positive definite kernel, which is reported as an
/// internal consistency error rather than silently clamped.
fn clamp_reexpanded(c: CoeffSeq) -> Result<CoeffSeq> {
    let mut values = c.values().to_vec();
    for (index, v) in values.iter_mut().enumerate() {
        if *v < -REEXPANSION_FLOOR {
            return Err(Error::ReexpansionInconsistent {
                index,
                value: *v,
            });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    CoeffSeq::new(c.params(), values)
}

/// One level of a descent chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainLevel {
    source_space: Space,
    decomposition_space: Space,
    half_radius: bool,
    f1: CoeffSeq,
    f2: CoeffSeq,
    scale: f64,
}

impl ChainLevel {
    /// Space whose kernel (or difference profile) was differentiated here.
    pub fn source_space(&self) -> Space {
        self.source_space
    }

    /// Space carrying this level's decomposition.
    pub fn decomposition_space(&self) -> Space {
        self.decomposition_space
    }

    /// Whether the descent step reads the target at half radius.
    pub fn half_radius(&self) -> bool {
        self.half_radius
    }

    /// Positive half at this level.
    pub fn f1(&self) -> &CoeffSeq {
        &self.f1
    }

    /// Negative half at this level.
    pub fn f2(&self) -> &CoeffSeq {
        &self.f2
    }

    /// Scale factor contributed by this level.
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Iterated derivative decomposition of a kernel on a catalog space.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeChain {
    space: Space,
    levels: Vec<ChainLevel>,
}

/// Splits the first derivative of a kernel on `space` at the descended
/// indices.
///
/// Re-expands the coefficients at the indices of `space.descend()`, flushes
/// re-expansion dust, and applies the route assigned to `space`.  The input
/// must live at the indices of `space`.
pub fn decompose_on_descent(space: Space, c: &CoeffSeq) -> Result<DerivativeDecomposition> {
    let want = space.jacobi_params()?;
    check_space_params(space, c.params(), want)?;
    let descent = space.descend()?;
    let target = descent.space.jacobi_params()?;
    let reexpanded = clamp_reexpanded(c.reexpand(target)?)?;
    route_for(space).decompose(&reexpanded)
}

fn check_space_params(space: Space, got: JacobiParams, want: JacobiParams) -> Result<()> {
    if got != want {
        return Err(Error::SpaceParamsMismatch {
            space: space.to_string(),
            want_alpha: want.alpha(),
            want_beta: want.beta(),
            got_alpha: got.alpha(),
            got_beta: got.beta(),
        });
    }
    Ok(())
}

/// Builds the full descent chain for derivatives of order `1 ..= order`.
///
/// Requires coefficients at the indices of `space` that pass the positive
/// definiteness test, and `1 <= order <= space.smoothness_order()`.  Level 1
/// splits the kernel on the descended space; each further level re-expands
/// the previous halves one descent further, splits both with the route of the
/// space just differentiated, and cross-combines (`f1' = g1 + h2`,
/// `f2' = g2 + h1`, where `g` splits the previous `f1` and `h` the previous
/// `f2`), so every level is again a difference of profiles with nonnegative
/// coefficients.
pub fn chain(space: Space, c: &CoeffSeq, order: u32) -> Result<DerivativeChain> {
    let want = space.jacobi_params()?;
    check_space_params(space, c.params(), want)?;
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let max_order = space.smoothness_order()?;
    if order > max_order {
        return Err(Error::OrderBeyondSmoothness {
            requested: order,
            max_order,
            space: space.to_string(),
        });
    }
    let report = c.pd_check();
    if let Some(index) = report.first_negative_index {
        return Err(Error::NotPositiveDefinite { index });
    }

    let mut levels: Vec<ChainLevel> = Vec::with_capacity(order as usize);
    let descent = space.descend()?;
    let target = descent.space.jacobi_params()?;
    let first = route_for(space).decompose(&clamp_reexpanded(c.reexpand(target)?)?)?;
    levels.push(ChainLevel {
        source_space: space,
        decomposition_space: descent.space,
        half_radius: descent.half_radius,
        f1: first.f1,
        f2: first.f2,
        scale: DECOMPOSITION_SCALE,
    });

    for _ in 1..order {
        let prev = levels.last().expect("chain has at least one level");
        let s = prev.decomposition_space;
        let descent = s.descend()?;
        let target = descent.space.jacobi_params()?;
        let route = route_for(s);
        let g = route.decompose(&clamp_reexpanded(prev.f1.reexpand(target)?)?)?;
        let h = route.decompose(&clamp_reexpanded(prev.f2.reexpand(target)?)?)?;
        let f1 = add_values(g.f1.values(), h.f2.values());
        let f2 = add_values(g.f2.values(), h.f1.values());
        levels.push(ChainLevel {
            source_space: s,
            decomposition_space: descent.space,
            half_radius: descent.half_radius,
            f1: CoeffSeq::new(target, f1)?,
            f2: CoeffSeq::new(target, f2)?,
            scale: DECOMPOSITION_SCALE,
        });
    }

    Ok(DerivativeChain { space, levels })
}

fn add_values(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
        .collect()
}

impl DerivativeChain {
    /// The space whose kernel the chain differentiates.
    pub fn space(&self) -> Space {
        self.space
    }

    /// Highest derivative order the chain covers.
    pub fn order(&self) -> u32 {
        self.levels.len() as u32
    }

    /// All levels, outermost derivative first.
    pub fn levels(&self) -> &[ChainLevel] {
        &self.levels
    }

    /// Weighted difference `W_i(t) = (prod of scales through level i) *
    /// (f1_i(t) - f2_i(t))` for `i = 1 ..= order`.
    fn weighted_difference(&self, i: usize, t: f64) -> f64 {
        let mut scale = 1.0;
        for level in &self.levels[..i] {
            scale *= level.scale;
        }
        let level = &self.levels[i - 1];
        scale
            * (eval_series(level.f1.params(), level.f1.values(), t)
                - eval_series(level.f2.params(), level.f2.values(), t))
    }

    /// Evaluates the derivative of order `order` (defaulting to the chain's
    /// full order) at `t` strictly inside `(-1, 1)`.
    ///
    /// Uses `K^(j)(t) = (1 - t^2)^{-j} * sum_{i=1..j} p_{j,i}(t) W_i(t)`
    /// with the polynomial weights from the chain rule of repeated
    /// differentiation.
    pub fn eval_order(&self, order: u32, t: f64) -> Result<DerivSample> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        if order > self.order() {
            return Err(Error::OrderBeyondSmoothness {
                requested: order,
                max_order: self.order(),
                space: self.space.to_string(),
            });
        }
        if t.is_nan() {
            return Err(Error::NonFinite { what: "t", value: t });
        }
        if t.abs() >= 1.0 {
            return Err(Error::OutsideOpenInterval { t });
        }
        let j = order as usize;
        let polys = weight_polys(j);
        let mut acc = 0.0;
        for i in 1..=j {
            acc += eval_poly(&polys[i - 1], t) * self.weighted_difference(i, t);
        }
        Ok(DerivSample {
            value: acc / (1.0 - t * t).powi(j as i32),
            near_endpoint: t.abs() > 1.0 - NEAR_ENDPOINT,
        })
    }

    /// Evaluates the chain's full-order derivative at `t`.
    pub fn eval(&self, t: f64) -> Result<DerivSample> {
        self.eval_order(self.order(), t)
    }
}

/// Polynomial weights `p_{j,i}` for derivative order `j = order`.
///
/// Entry `i - 1` holds the ascending coefficients of `p_{j,i}` (degree
/// `j - i`).  They satisfy `p_{1,1} = 1` and
/// `p_{j+1,i} = (1 - t^2) p_{j,i}' + 2 j t p_{j,i} + p_{j,i-1}`, which is
/// what falls out of differentiating `K^(j)` once more.
fn weight_polys(order: usize) -> Vec<Vec<f64>> {
    let mut table: Vec<Vec<f64>> = vec![vec![1.0]];
    for j in 1..order {
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(j + 1);
        for i in 1..=j + 1 {
            let mut poly = vec![0.0; j + 2 - i];
            if i <= j {
                let p = &table[i - 1];
                let dp = poly_derivative(p);
                // (1 - t^2) p'
                add_shifted(&mut poly, &dp, 0, 1.0);
                add_shifted(&mut poly, &dp, 2, -1.0);
                // 2 j t p
                add_shifted(&mut poly, p, 1, 2.0 * j as f64);
            }
            if i >= 2 {
                add_shifted(&mut poly, &table[i - 2], 0, 1.0);
            }
            while poly.len() > 1 && poly.last() == Some(&0.0) {
                poly.pop();
            }
            next.push(poly);
        }
        table = next;
    }
    table
}

fn poly_derivative(p: &[f64]) -> Vec<f64> {
    if p.len() <= 1 {
        return vec![0.0];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

fn add_shifted(acc: &mut Vec<f64>, src: &[f64], shift: usize, k: f64) {
    if acc.len() < src.len() + shift {
        acc.resize(src.len() + shift, 0.0);
    }
    for (idx, &c) in src.iter().enumerate() {
        acc[idx + shift] += k * c;
    }
}

fn eval_poly(p: &[f64], t: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Tail;
    use approx::assert_abs_diff_eq;

    fn params(al: f64, be: f64) -> JacobiParams {
        JacobiParams::new(al, be).unwrap()
    }

    fn seq(al: f64, be: f64, values: &[f64]) -> CoeffSeq {
        CoeffSeq::new(params(al, be), values.to_vec()).unwrap()
    }

    fn grid() -> Vec<f64> {
        (1..40).map(|i| -0.975 + 0.05 * i as f64).collect()
    }

    #[test]
    fn alpha_route_reproduces_the_weighted_derivative() {
        for (al, be) in [(0.5, -0.5), (1.0, 0.0), (2.0, 0.0), (0.0, -0.5)] {
            let c = seq(al, be, &[0.9, 0.55, 0.31, 0.17, 0.08, 0.03, 0.01]);
            let d = decompose_alpha_route(&c).unwrap();
            assert_eq!(d.scale(), 2.0);
            assert_eq!(d.f1().values().len(), c.values().len() + 1);
            for &t in &grid() {
                let lhs = (1.0 - t * t) * radial_derivative(&c, t).unwrap();
                let rhs = d.difference(t).unwrap();
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn dual_route_reproduces_the_weighted_derivative() {
        for (al, be) in [(0.0, 0.0), (2.5, 2.5), (3.0, 1.0), (7.0, 3.0), (0.5, 0.5)] {
            let c = seq(al, be, &[1.1, 0.44, 0.29, 0.21, 0.12, 0.05, 0.02, 0.008]);
            let d = decompose_dual_route(&c).unwrap();
            for &t in &grid() {
                let lhs = (1.0 - t * t) * radial_derivative(&c, t).unwrap();
                let rhs = d.difference(t).unwrap();
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn halves_carry_equal_mass() {
        // (1 - t^2) f'(t) vanishes at t = 1, so the halves agree there.
        let c = seq(1.5, 0.5, &[0.8, 0.3, 0.25, 0.12, 0.04]);
        for d in [decompose_alpha_route(&c).unwrap(), decompose_dual_route(&c).unwrap()] {
            assert_abs_diff_eq!(
                d.f1().total_mass(),
                d.f2().total_mass(),
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn decompose_validates_hypotheses() {
        let negative = seq(1.0, 0.0, &[1.0, -0.2]);
        assert!(matches!(
            decompose_alpha_route(&negative),
            Err(Error::NegativeCoefficient { index: 1, .. })
        ));
        let outside = seq(0.0, 0.5, &[1.0, 0.5]);
        assert!(matches!(
            decompose_dual_route(&outside),
            Err(Error::ParameterRegion { .. })
        ));
        let too_negative_sum = seq(-0.75, -0.5, &[1.0]);
        assert!(decompose_alpha_route(&too_negative_sum).is_err());
    }

    #[test]
    fn constant_profile_has_zero_derivative() {
        let c = seq(1.0, 0.0, &[5.0]);
        let d = decompose_alpha_route(&c).unwrap();
        for &t in &grid() {
            assert_abs_diff_eq!(d.eval(t).unwrap().value, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn eval_divides_and_flags_endpoints() {
        let c = seq(0.0, 0.0, &[1.0, 0.6, 0.3]);
        let d = decompose_dual_route(&c).unwrap();
        let s = d.eval(0.5).unwrap();
        assert!(!s.near_endpoint);
        assert_abs_diff_eq!(
            s.value,
            radial_derivative(&c, 0.5).unwrap(),
            epsilon = 1e-12
        );
        assert!(d.eval(1.0 - 1e-8).unwrap().near_endpoint);
        assert!(matches!(d.eval(1.0), Err(Error::OutsideOpenInterval { .. })));
        assert!(matches!(d.eval(-1.2), Err(Error::OutsideOpenInterval { .. })));
        assert!(d.eval(f64::NAN).is_err());
    }

    #[test]
    fn radial_derivative_handles_tails_and_domain() {
        let c = CoeffSeq::with_tail(
            params(2.5, 2.5),
            vec![1.0],
            Tail::Geometric {
                ratio: 0.5,
                scale: 1.0,
            },
        )
        .unwrap();
        // Finite difference of the evaluated series.
        let h = 1e-5;
        for &t in &[-0.6, 0.0, 0.45] {
            let fd = (c.eval(t + h).unwrap() - c.eval(t - h).unwrap()) / (2.0 * h);
            assert_abs_diff_eq!(radial_derivative(&c, t).unwrap(), fd, epsilon = 1e-5);
        }
        assert!(radial_derivative(&c, 1.0).is_err());
    }

    #[test]
    fn skew_coefficients_vanish_at_sphere_indices() {
        let p = params(1.5, 1.5);
        for n in 1..200 {
            assert_eq!(skew_coefficient(p, n), 0.0);
            assert_eq!(dual_skew_coefficient(p, n), 0.0);
        }
    }

    #[test]
    fn correction_coefficients_are_nonnegative_on_samples() {
        for (al, be) in [(0.0, 0.0), (0.5, -0.5), (2.5, 2.5), (7.0, 3.0), (3.0, 1.0)] {
            let p = params(al, be);
            for n in 2..500 {
                assert!(alpha_route_q(p, n) >= 0.0, "alpha q < 0 at ({al},{be}), n={n}");
                assert!(dual_route_q(p, n) >= 0.0, "dual q < 0 at ({al},{be}), n={n}");
            }
        }
    }

    #[test]
    fn descent_split_matches_oracle_on_catalog_spaces() {
        for space in [
            Space::Sphere(5),
            Space::RealProjective(4),
            Space::ComplexProjective(6),
            Space::QuaternionicProjective(8),
            Space::Cayley,
        ] {
            let p = space.jacobi_params().unwrap();
            let c = CoeffSeq::new(p, vec![1.0, 0.5, 0.3, 0.15, 0.07, 0.02]).unwrap();
            let d = decompose_on_descent(space, &c).unwrap();
            let source = d.source().clone();
            for &t in &grid() {
                let lhs = (1.0 - t * t) * radial_derivative(&source, t).unwrap();
                let rhs = d.difference(t).unwrap();
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn descent_split_checks_the_space_indices() {
        let c = seq(0.0, 0.0, &[1.0, 0.5]);
        assert!(matches!(
            decompose_on_descent(Space::Sphere(7), &c),
            Err(Error::SpaceParamsMismatch { .. })
        ));
    }

    #[test]
    fn chain_validates_preconditions() {
        let p = Space::Sphere(7).jacobi_params().unwrap();
        let good = CoeffSeq::new(p, vec![1.0, 0.4, 0.2]).unwrap();
        assert!(matches!(
            chain(Space::Sphere(7), &good, 0),
            Err(Error::ZeroOrder)
        ));
        assert!(matches!(
            chain(Space::Sphere(7), &good, 4),
            Err(Error::OrderBeyondSmoothness {
                requested: 4,
                max_order: 3,
                ..
            })
        ));
        let p3 = Space::Sphere(3).jacobi_params().unwrap();
        let c3 = CoeffSeq::new(p3, vec![1.0, 0.4]).unwrap();
        assert!(matches!(
            chain(Space::Sphere(3), &c3, 2),
            Err(Error::OrderBeyondSmoothness { max_order: 1, .. })
        ));
        let indefinite = CoeffSeq::new(p, vec![1.0, -0.5]).unwrap();
        assert!(matches!(
            chain(Space::Sphere(7), &indefinite, 1),
            Err(Error::NotPositiveDefinite { index: 1 })
        ));
        let misplaced = seq(0.0, 0.0, &[1.0]);
        assert!(matches!(
            chain(Space::Sphere(7), &misplaced, 1),
            Err(Error::SpaceParamsMismatch { .. })
        ));
    }

    #[test]
    fn chain_level_one_is_the_descent_split() {
        let space = Space::QuaternionicProjective(12);
        let p = space.jacobi_params().unwrap();
        let c = CoeffSeq::new(p, vec![1.0, 0.45, 0.2, 0.08, 0.02]).unwrap();
        let ch = chain(space, &c, 1).unwrap();
        let single = decompose_on_descent(space, &c).unwrap();
        assert_eq!(ch.levels()[0].f1(), single.f1());
        assert_eq!(ch.levels()[0].f2(), single.f2());
        assert_eq!(ch.levels()[0].decomposition_space(), Space::ComplexProjective(6));
        assert!(!ch.levels()[0].half_radius());
    }

    #[test]
    fn chain_first_order_matches_oracle() {
        for space in [
            Space::Sphere(7),
            Space::RealProjective(5),
            Space::ComplexProjective(6),
            Space::QuaternionicProjective(12),
            Space::Cayley,
        ] {
            let p = space.jacobi_params().unwrap();
            let c = CoeffSeq::new(p, vec![1.0, 0.5, 0.28, 0.11, 0.04, 0.01]).unwrap();
            let ch = chain(space, &c, 1).unwrap();
            for &t in &[-0.7, -0.2, 0.0, 0.35, 0.8] {
                assert_abs_diff_eq!(
                    ch.eval(t).unwrap().value,
                    radial_derivative(&c, t).unwrap(),
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn chain_higher_orders_match_finite_differences() {
        let space = Space::Sphere(7);
        let p = space.jacobi_params().unwrap();
        let c = CoeffSeq::with_tail(
            p,
            vec![1.0],
            Tail::Geometric {
                ratio: 0.5,
                scale: 1.0,
            },
        )
        .unwrap();
        let ch = chain(space, &c, 3).unwrap();
        assert_eq!(ch.order(), 3);
        let h = 1e-3;
        for order in 2..=3u32 {
            for &t in &[-0.5, 0.0, 0.5] {
                // Five-point first-derivative stencil applied one order down.
                let lower = |x: f64| ch.eval_order(order - 1, x).unwrap().value;
                let fd = (-lower(t + 2.0 * h) + 8.0 * lower(t + h) - 8.0 * lower(t - h)
                    + lower(t - 2.0 * h))
                    / (12.0 * h);
                let exact = ch.eval_order(order, t).unwrap().value;
                assert!(
                    (exact - fd).abs() <= 1e-5 * (1.0 + exact.abs()),
                    "order {order} at t={t}: exact {exact}, fd {fd}"
                );
            }
        }
        assert!(ch.eval_order(4, 0.0).is_err());
        assert!(ch.eval_order(0, 0.0).is_err());
    }

    #[test]
    fn chain_runs_to_full_smoothness_across_the_catalog() {
        let mut spaces = vec![Space::Cayley];
        for d in 3..=20 {
            spaces.push(Space::Sphere(d));
            spaces.push(Space::RealProjective(d));
            if d % 2 == 0 {
                spaces.push(Space::ComplexProjective(d));
            }
            if d % 4 == 0 && d >= 8 {
                spaces.push(Space::QuaternionicProjective(d));
            }
        }
        for space in spaces {
            let order = space.smoothness_order().unwrap();
            if order == 0 {
                continue;
            }
            let p = space.jacobi_params().unwrap();
            let c = CoeffSeq::new(p, vec![1.0, 0.3, 0.1, 0.03]).unwrap();
            let ch = chain(space, &c, order).unwrap();
            assert_eq!(ch.order(), order);
            assert!(ch.eval(0.3).unwrap().value.is_finite());
        }
    }

    #[test]
    fn weight_poly_table_small_orders() {
        assert_eq!(weight_polys(1), vec![vec![1.0]]);
        assert_eq!(weight_polys(2), vec![vec![0.0, 2.0], vec![1.0]]);
        assert_eq!(
            weight_polys(3),
            vec![vec![2.0, 0.0, 6.0], vec![0.0, 6.0], vec![1.0]]
        );
    }

    #[test]
    fn decomposition_document_round_trip() {
        let c = seq(1.0, 0.0, &[1.0, 0.5, 0.25]);
        let d = decompose_alpha_route(&c).unwrap();
        let text = d.to_json_string();
        let back = DerivativeDecomposition::from_json_str(&text).unwrap();
        assert_eq!(back, d);

        let mismatched = r#"{
            "f1": {"alpha": 1.0, "beta": 0.0, "values": [1.0], "tail": {"type": "zero"}},
            "f2": {"alpha": 2.0, "beta": 0.0, "values": [1.0], "tail": {"type": "zero"}},
            "scale": 2.0,
            "source": {"alpha": 1.0, "beta": 0.0, "values": [1.0], "tail": {"type": "zero"}}
        }"#;
        assert!(DerivativeDecomposition::from_json_str(mismatched).is_err());
    }
}
