//! Convergence diagnostics for derivative decompositions.
//!
//! The derivative of a positive definite zonal kernel is controlled through a
//! comparison argument: a sequence `b_n` built from the kernel coefficients
//! satisfies the one-sided recurrence `b_n >= lambda_n * b_{n+gap} - xi_n`,
//! where the ratio sequence `lambda_n` depends only on the expansion indices
//! and `xi_n` collects the nonnegative defects.  Summability of the original
//! coefficients then follows from summability of `n * xi_n` together with
//! `lambda_n` increasing to a limit below the critical rate.
//!
//! This module provides the two ratio sequences ([`alpha_route_lambda`],
//! [`dual_route_lambda`]) with their `lambda_n^n` limits, builders that
//! assemble the full comparison data ([`alpha_route_triple`],
//! [`dual_route_triple`]) from a coefficient sequence, and
//! [`comparison_report`], which checks every hypothesis of the comparison
//! argument over a finite horizon and reports each verdict separately.

use crate::coeffs::{CoeffSeq, TAIL_TERM_FLOOR};
use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;

/// Tail flatness threshold: a series is accepted as convergent when its
/// partial sums move by less than this over the trailing half of the horizon.
const FLATNESS_TOL: f64 = 1e-9;

/// Floating-point slack granted to the one-sided recurrence check.
const RECURRENCE_SLACK: f64 = 1e-12;

/// Comparison data `(b, lambda, xi)` with the recurrence gap.
///
/// All three sequences are indexed by polynomial degree starting at 1: the
/// stored entry `b[i]` is the value at degree `i + 1`.  The recurrence under
/// test couples degrees `n` and `n + gap`; consequently `b` must extend `gap`
/// entries past the horizon covered by `lambda` and `xi`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTriple {
    /// Comparison sequence, nonnegative.
    pub b: Vec<f64>,
    /// Ratio sequence, nonnegative and expected to increase toward 1.
    pub lambda: Vec<f64>,
    /// Defect sequence, nonnegative.
    pub xi: Vec<f64>,
    /// Degree offset in the recurrence `b_n >= lambda_n * b_{n+gap} - xi_n`.
    pub gap: usize,
}

/// Hypothesis-by-hypothesis verdict from [`comparison_report`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonReport {
    /// Horizon (largest degree) covered by the checks.
    pub horizon: usize,
    /// `lambda_n` is strictly increasing up to the horizon.
    pub lambda_increasing: bool,
    /// `lambda_n < 1` up to the horizon.
    pub lambda_below_one: bool,
    /// Smallest `lambda_n^n` observed; must stay positive.
    pub min_lambda_power: f64,
    /// Partial sums of `n * xi_n` are flat over the trailing half.
    pub xi_series_flat: bool,
    /// Increment of `sum n * xi_n` accumulated over the trailing half.
    pub xi_tail_increment: f64,
    /// Partial sums of `b_n` are flat over the trailing half.
    pub b_series_flat: bool,
    /// Increment of `sum b_n` accumulated over the trailing half.
    pub b_tail_increment: f64,
    /// The recurrence `b_n >= lambda_n * b_{n+gap} - xi_n` holds throughout.
    pub recurrence_holds: bool,
    /// Most negative recurrence residual observed (0 when none is negative).
    pub recurrence_worst: f64,
    /// Largest `n * b_n` over the trailing half of the horizon.
    pub tail_peak: f64,
    /// Conjunction of every hypothesis verdict.
    pub all_pass: bool,
}

/// Checks the decomposition parameter region `2*alpha >= alpha + beta >= -1`.
pub(crate) fn check_parameter_region(params: JacobiParams) -> Result<()> {
    let (al, be) = (params.alpha(), params.beta());
    if al + be < -1.0 || al < be {
        return Err(Error::ParameterRegion {
            alpha: al,
            beta: be,
        });
    }
    Ok(())
}

fn check_degree(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::TripleDegreeZero);
    }
    Ok(n as f64)
}

/// Ratio sequence of the single-raise decomposition route.
///
/// `lambda_n = n (n+beta) (2n+alpha+beta+2) /
///  ((n+alpha+1)(n+alpha+beta+1)(2n+alpha+beta))` for degrees `n >= 1`,
/// with parameters in the region `2*alpha >= alpha + beta >= -1`.  The
/// sequence increases strictly to 1 and `lambda_n^n` converges to
/// [`alpha_route_power_limit`].
pub fn alpha_route_lambda(params: JacobiParams, n: usize) -> Result<f64> {
    check_parameter_region(params)?;
    let nf = check_degree(n)?;
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    Ok(nf * (nf + be) * (2.0 * nf + s + 2.0)
        / ((nf + al + 1.0) * (nf + s + 1.0) * (2.0 * nf + s)))
}

/// Limit of `lambda_n^n` for the single-raise route: `exp(-2*alpha - 1)`.
pub fn alpha_route_power_limit(params: JacobiParams) -> f64 {
    (-2.0 * params.alpha() - 1.0).exp()
}

/// Ratio sequence of the double-raise decomposition route.
///
/// `lambda_n = n (n+1) (n+beta+1) (2n+alpha+beta+4) /
///  ((n+alpha+2)(n+alpha+beta+1)(n+alpha+beta+2)(2n+alpha+beta+2))` for
/// degrees `n >= 1`, same parameter region as [`alpha_route_lambda`];
/// `lambda_n^n` converges to [`dual_route_power_limit`].
pub fn dual_route_lambda(params: JacobiParams, n: usize) -> Result<f64> {
    check_parameter_region(params)?;
    let nf = check_degree(n)?;
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    Ok(
        nf * (nf + 1.0) * (nf + be + 1.0) * (2.0 * nf + s + 4.0)
            / ((nf + al + 2.0) * (nf + s + 1.0) * (nf + s + 2.0) * (2.0 * nf + s + 2.0)),
    )
}

/// Limit of `lambda_n^n` for the double-raise route:
/// `exp(-3*alpha - beta - 2)`.
///
/// The exponent is the first-order coefficient of `log lambda_n`: expanding
/// each linear factor gives `n log lambda_n -> (1 + (beta+1) + (s+4)/2)
/// - ((alpha+2) + (s+1) + (s+2) + (s+2)/2) = -3*alpha - beta - 2` with
/// `s = alpha + beta`.
pub fn dual_route_power_limit(params: JacobiParams) -> f64 {
    (-3.0 * params.alpha() - params.beta() - 2.0).exp()
}

/// Comparison weight `b_n` attached to coefficient `a_{n-1}`.
///
/// `b_n = (n+alpha) r_n / (2n+alpha+beta) * a_{n-1}` with
/// `r_1 = 1` exactly (identical numerator and denominator) and
/// `r_n = (n+alpha+beta)/(2n+alpha+beta-1)` afterwards.
fn comparison_weight(params: JacobiParams, n: usize, coeff: f64) -> f64 {
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    let nf = n as f64;
    let r = if n == 1 {
        1.0
    } else {
        (nf + s) / (2.0 * nf + s - 1.0)
    };
    (nf + al) * r / (2.0 * nf + s) * coeff
}

fn checked_nonnegative(c: &CoeffSeq) -> Result<CoeffSeq> {
    let finite = c.materialize(TAIL_TERM_FLOOR);
    if let Some((index, &value)) = finite.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeCoefficient { index, value });
    }
    Ok(finite)
}

/// Assembles the comparison triple of the single-raise route (gap 1).
///
/// Requires nonnegative coefficients and parameters in the decomposition
/// region.  The defect `xi_n` is the negative part of
/// `(alpha+1)/(2n+alpha+beta)` times entry `n-1` of the alpha-raised
/// sequence; for the assembled data the recurrence
/// `b_n >= lambda_n * b_{n+1} - xi_n` holds up to rounding.
pub fn alpha_route_triple(c: &CoeffSeq, horizon: usize) -> Result<ConvergenceTriple> {
    check_parameter_region(c.params())?;
    if horizon < 2 {
        return Err(Error::HorizonTooSmall { horizon });
    }
    let finite = checked_nonnegative(c)?;
    let params = finite.params();
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    let gap = 1usize;
    let b: Vec<f64> = (1..=horizon + gap)
        .map(|n| comparison_weight(params, n, finite.value_at(n - 1)))
        .collect();
    let lifted = finite.lift_alpha();
    let mut lambda = Vec::with_capacity(horizon);
    let mut xi = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let nf = n as f64;
        lambda.push(alpha_route_lambda(params, n)?);
        let signed = (al + 1.0) / (2.0 * nf + s) * lifted.value_at(n - 1);
        xi.push((-signed).max(0.0));
    }
    Ok(ConvergenceTriple { b, lambda, xi, gap })
}

/// Assembles the comparison triple of the double-raise route (gap 2).
///
/// Same hypotheses as [`alpha_route_triple`]; the defect is the negative part
/// of `(alpha+1)/(n+alpha+beta+1)` times entry `n-1` of the doubly raised
/// sequence minus a skew correction proportional to `alpha - beta`, and the
/// recurrence couples degrees two apart.
pub fn dual_route_triple(c: &CoeffSeq, horizon: usize) -> Result<ConvergenceTriple> {
    check_parameter_region(c.params())?;
    if horizon < 2 {
        return Err(Error::HorizonTooSmall { horizon });
    }
    let finite = checked_nonnegative(c)?;
    let params = finite.params();
    let (al, be) = (params.alpha(), params.beta());
    let s = al + be;
    let gap = 2usize;
    let b: Vec<f64> = (1..=horizon + gap)
        .map(|n| comparison_weight(params, n, finite.value_at(n - 1)))
        .collect();
    let lifted = finite.lift_both();
    let mut lambda = Vec::with_capacity(horizon);
    let mut xi = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let nf = n as f64;
        lambda.push(dual_route_lambda(params, n)?);
        let signed = (al + 1.0) / (nf + s + 1.0) * lifted.value_at(n - 1)
            - (al - be) * nf / ((2.0 * nf + s + 2.0) * (2.0 * nf + s)) * finite.value_at(n);
        xi.push((-signed).max(0.0));
    }
    Ok(ConvergenceTriple { b, lambda, xi, gap })
}

/// Checks every hypothesis of the comparison argument up to `horizon`.
///
/// Verifies, over degrees `n = 1 ..= horizon`: `lambda` strictly increasing
/// and below 1, `lambda_n^n` bounded away from 0, partial sums of
/// `n * xi_n` and of `b_n` flat over the trailing half (increment below
/// `1e-9`), and the recurrence `b_n >= lambda_n * b_{n+gap} - xi_n` within
/// floating-point slack.  Sequences must be finite and nonnegative and long
/// enough for the horizon; failures of those input contracts are errors, while
/// failures of the hypotheses themselves are verdicts in the report.
pub fn comparison_report(triple: &ConvergenceTriple, horizon: usize) -> Result<ComparisonReport> {
    if horizon < 2 {
        return Err(Error::HorizonTooSmall { horizon });
    }
    let gap = triple.gap;
    if gap == 0
        || triple.b.len() < horizon + gap
        || triple.lambda.len() < horizon
        || triple.xi.len() < horizon
    {
        return Err(Error::TripleLength {
            b_len: triple.b.len(),
            lambda_len: triple.lambda.len(),
            xi_len: triple.xi.len(),
            gap,
        });
    }
    for (what, seq, needed) in [
        ("b", &triple.b, horizon + gap),
        ("lambda", &triple.lambda, horizon),
        ("xi", &triple.xi, horizon),
    ] {
        if let Some((index, &value)) = seq[..needed]
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::TripleEntry {
                what,
                index,
                value,
                constraint: "entries must be finite and nonnegative",
            });
        }
    }

    let lambda = &triple.lambda;
    let lambda_increasing = (1..horizon).all(|i| lambda[i] > lambda[i - 1]);
    let lambda_below_one = lambda[..horizon].iter().all(|&l| l < 1.0);
    let min_lambda_power = (1..=horizon)
        .map(|n| lambda[n - 1].powf(n as f64))
        .fold(f64::INFINITY, f64::min);

    let half = horizon / 2;
    let xi_tail_increment: f64 = (half + 1..=horizon)
        .map(|n| n as f64 * triple.xi[n - 1])
        .sum();
    let b_tail_increment: f64 = (half + 1..=horizon).map(|n| triple.b[n - 1]).sum();
    let xi_series_flat = xi_tail_increment < FLATNESS_TOL;
    let b_series_flat = b_tail_increment < FLATNESS_TOL;

    let mut recurrence_worst = 0.0f64;
    let mut recurrence_holds = true;
    for n in 1..=horizon {
        let residual = triple.b[n - 1] - (lambda[n - 1] * triple.b[n - 1 + gap] - triple.xi[n - 1]);
        recurrence_worst = recurrence_worst.min(residual);
        let slack = RECURRENCE_SLACK * (1.0 + triple.b[n - 1].abs() + triple.b[n - 1 + gap].abs());
        if residual < -slack {
            recurrence_holds = false;
        }
    }

    let tail_peak = (half + 1..=horizon)
        .map(|n| n as f64 * triple.b[n - 1])
        .fold(0.0f64, f64::max);

    let all_pass = lambda_increasing
        && lambda_below_one
        && min_lambda_power > 0.0
        && xi_series_flat
        && b_series_flat
        && recurrence_holds;

    Ok(ComparisonReport {
        horizon,
        lambda_increasing,
        lambda_below_one,
        min_lambda_power,
        xi_series_flat,
        xi_tail_increment,
        b_series_flat,
        b_tail_increment,
        recurrence_holds,
        recurrence_worst,
        tail_peak,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Tail;
    use approx::assert_abs_diff_eq;

    fn params(al: f64, be: f64) -> JacobiParams {
        JacobiParams::new(al, be).unwrap()
    }

    #[test]
    fn lambda_small_degree_values() {
        let p = params(0.0, 0.0);
        assert_abs_diff_eq!(alpha_route_lambda(p, 1).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            alpha_route_lambda(p, 2).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(dual_route_lambda(p, 1).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn lambda_rejects_bad_inputs() {
        let p = params(0.0, 0.0);
        assert!(alpha_route_lambda(p, 0).is_err());
        assert!(dual_route_lambda(p, 0).is_err());
        // alpha < beta violates the region.
        assert!(alpha_route_lambda(params(0.0, 0.5), 3).is_err());
        // alpha + beta < -1 violates the region.
        assert!(dual_route_lambda(params(-0.5, -0.75), 3).is_err());
    }

    #[test]
    fn lambda_increases_strictly_below_one() {
        for (al, be) in [(0.0, 0.0), (0.5, -0.5), (2.5, 2.5), (7.0, 3.0), (1.0, 0.0)] {
            let p = params(al, be);
            for (route, name) in [
                (alpha_route_lambda as fn(JacobiParams, usize) -> Result<f64>, "alpha"),
                (dual_route_lambda, "dual"),
            ] {
                let mut prev = 0.0;
                for n in 1..=3000usize {
                    let l = route(p, n).unwrap();
                    assert!(l > prev, "{name} route not increasing at n={n} for ({al},{be})");
                    assert!(l < 1.0, "{name} route reached 1 at n={n} for ({al},{be})");
                    prev = l;
                }
            }
        }
    }

    #[test]
    fn lambda_powers_approach_their_limits() {
        let p = params(0.0, 0.0);
        let n = 100_000usize;
        let a = alpha_route_lambda(p, n).unwrap().powf(n as f64);
        assert!((a - alpha_route_power_limit(p)).abs() <= 2e-3);
        assert_abs_diff_eq!(alpha_route_power_limit(p), (-1.0f64).exp(), epsilon = 1e-15);
        let d = dual_route_lambda(p, n).unwrap().powf(n as f64);
        assert!((d - dual_route_power_limit(p)).abs() <= 2e-3);
        assert_abs_diff_eq!(dual_route_power_limit(p), (-2.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn report_accepts_geometric_comparison_data() {
        let horizon = 100usize;
        let b: Vec<f64> = (1..=horizon + 1).map(|n| 0.5f64.powi(n as i32)).collect();
        let lambda: Vec<f64> = (1..=horizon).map(|n| n as f64 / (n as f64 + 1.0)).collect();
        let xi = vec![0.0; horizon];
        let triple = ConvergenceTriple {
            b,
            lambda,
            xi,
            gap: 1,
        };
        let report = comparison_report(&triple, horizon).unwrap();
        assert!(report.all_pass);
        assert!(report.lambda_increasing);
        assert!(report.lambda_below_one);
        assert!(report.min_lambda_power > 0.0);
        assert!(report.xi_series_flat);
        assert!(report.b_series_flat);
        assert!(report.recurrence_holds);
        assert!(report.tail_peak > 0.0);
    }

    #[test]
    fn report_flags_slowly_decaying_b() {
        let horizon = 100usize;
        let b: Vec<f64> = (1..=horizon + 1).map(|n| 1.0 / (n as f64 + 1.0)).collect();
        let lambda: Vec<f64> = (1..=horizon).map(|n| n as f64 / (n as f64 + 1.0)).collect();
        let xi = vec![0.0; horizon];
        let triple = ConvergenceTriple {
            b,
            lambda,
            xi,
            gap: 1,
        };
        let report = comparison_report(&triple, horizon).unwrap();
        assert!(!report.b_series_flat);
        assert!(report.b_tail_increment > 0.5);
        assert!(report.recurrence_holds);
        assert!(report.lambda_increasing);
        assert!(!report.all_pass);
    }

    #[test]
    fn report_validates_inputs() {
        let triple = ConvergenceTriple {
            b: vec![1.0, 0.5],
            lambda: vec![0.5, 0.6],
            xi: vec![0.0, -0.1],
            gap: 1,
        };
        assert!(matches!(
            comparison_report(&triple, 2),
            Err(Error::TripleLength { .. })
        ));
        let triple = ConvergenceTriple {
            b: vec![1.0, 0.5, 0.25],
            lambda: vec![0.5, 0.6],
            xi: vec![0.0, -0.1],
            gap: 1,
        };
        assert!(matches!(
            comparison_report(&triple, 2),
            Err(Error::TripleEntry { what: "xi", .. })
        ));
        assert!(matches!(
            comparison_report(&triple, 1),
            Err(Error::HorizonTooSmall { horizon: 1 })
        ));
    }

    #[test]
    fn constant_kernel_triple_closes_exactly() {
        // For a_0 = 1 and nothing else, b_1 equals the signed defect term, so
        // xi vanishes and the recurrence is an identity.
        let c = CoeffSeq::new(params(1.0, 0.0), vec![1.0, 0.0, 0.0]).unwrap();
        let triple = alpha_route_triple(&c, 6).unwrap();
        assert_abs_diff_eq!(triple.b[0], 2.0 / 3.0, epsilon = 1e-15);
        assert!(triple.b[1..].iter().all(|&v| v == 0.0));
        assert!(triple.xi.iter().all(|&v| v == 0.0));
        let report = comparison_report(&triple, 6).unwrap();
        assert!(report.recurrence_holds);
        assert_abs_diff_eq!(report.recurrence_worst, 0.0, epsilon = 1e-15);

        let c = CoeffSeq::new(params(0.0, 0.0), vec![1.0, 0.0, 0.0]).unwrap();
        let triple = dual_route_triple(&c, 6).unwrap();
        assert_abs_diff_eq!(triple.b[0], 0.5, epsilon = 1e-15);
        assert!(triple.xi.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn route_triples_satisfy_their_recurrences() {
        let values = vec![0.9, 0.7, 0.32, 0.18, 0.075, 0.031, 0.012, 0.004];
        for (al, be) in [(0.0, 0.0), (1.5, 0.5), (7.0, 3.0), (0.5, -0.5), (2.5, 2.5)] {
            let c = CoeffSeq::new(params(al, be), values.clone()).unwrap();
            for builder in [
                alpha_route_triple as fn(&CoeffSeq, usize) -> Result<ConvergenceTriple>,
                dual_route_triple,
            ] {
                let triple = builder(&c, 40).unwrap();
                let report = comparison_report(&triple, 40).unwrap();
                assert!(
                    report.recurrence_holds,
                    "recurrence failed for ({al},{be}): worst {}",
                    report.recurrence_worst
                );
                assert!(report.recurrence_worst >= -1e-12);
                assert!(report.lambda_increasing && report.lambda_below_one);
                assert!(report.xi_series_flat && report.b_series_flat);
                assert!(report.all_pass);
            }
        }
    }

    #[test]
    fn geometric_tail_triples_also_close() {
        let c = CoeffSeq::with_tail(
            params(2.5, 2.5),
            vec![1.0],
            Tail::Geometric {
                ratio: 0.5,
                scale: 1.0,
            },
        )
        .unwrap();
        for builder in [
            alpha_route_triple as fn(&CoeffSeq, usize) -> Result<ConvergenceTriple>,
            dual_route_triple,
        ] {
            // The horizon must be long enough that the trailing half of the
            // geometric series sinks below the flatness threshold.
            let triple = builder(&c, 100).unwrap();
            let report = comparison_report(&triple, 100).unwrap();
            assert!(report.all_pass, "report: {report:?}");
        }
    }

    #[test]
    fn triple_builders_validate_inputs() {
        let c = CoeffSeq::new(params(1.0, 0.0), vec![1.0, -0.25]).unwrap();
        assert!(matches!(
            alpha_route_triple(&c, 10),
            Err(Error::NegativeCoefficient { index: 1, .. })
        ));
        let c = CoeffSeq::new(params(0.0, 0.5), vec![1.0]).unwrap();
        assert!(matches!(
            dual_route_triple(&c, 10),
            Err(Error::ParameterRegion { .. })
        ));
        let c = CoeffSeq::new(params(1.0, 0.0), vec![1.0]).unwrap();
        assert!(matches!(
            alpha_route_triple(&c, 1),
            Err(Error::HorizonTooSmall { .. })
        ));
    }
}
