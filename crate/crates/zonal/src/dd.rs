//! Minimal double-double arithmetic for the refined quadrature rule.
//!
//! The plain Gauss-Jacobi rule carries the eigenvalue solver's rounding into
//! every expansion coefficient (about `1e-9` at degree 24), which is too
//! coarse for verifying the coefficient transforms at `1e-10`.  This module
//! re-polishes the nodes with Newton steps on the orthonormal recurrence and
//! rebuilds the weights from the Christoffel function, all in unevaluated
//! `hi + lo` double pairs, pushing the rule's error to the `1e-13` range
//! while the public quadrature stays ordinary `f64`.

use crate::error::Result;
use crate::jacobi::{p_at_one, weight_mass, JacobiParams};
use crate::quad::{recurrence_diagonal, recurrence_offdiagonal, Quadrature};

/// Unevaluated sum of two doubles with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + other.lo);
        Dd { hi, lo }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add_f64(self, x: f64) -> Dd {
        self.add(Dd::from_f64(x))
    }

    pub fn sub_f64(self, x: f64) -> Dd {
        self.add(Dd::from_f64(-x))
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * other.lo + self.lo * other.hi);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        let (hi, lo) = quick_two_sum(p, e + self.lo * x);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r1 = self.sub(other.mul_f64(q1));
        let q2 = r1.hi / other.hi;
        let r2 = r1.sub(other.mul_f64(q2));
        let q3 = r2.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }

    pub fn div_f64(self, x: f64) -> Dd {
        self.div(Dd::from_f64(x))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Evaluates the normalized polynomial `R_n` at a double-double argument.
///
/// The degree recurrence runs in double-double with `f64` scalar
/// coefficients; the endpoint normalizer is the `f64` running product, whose
/// rounding cancels from the coefficient quotients assembled by the caller.
pub(crate) fn dd_eval_r(p: JacobiParams, n: usize, x: Dd) -> Dd {
    let (al, be) = (p.alpha(), p.beta());
    if n == 0 {
        return Dd::from_f64(1.0);
    }
    let mut prev = Dd::from_f64(1.0);
    let mut cur = x.mul_f64(0.5 * (al + be + 2.0)).add_f64(0.5 * (al - be));
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + al + be;
        let c1 = 2.0 * kf * (kf + al + be) * (s - 2.0);
        let c3 = 2.0 * (kf + al - 1.0) * (kf + be - 1.0) * s;
        let c2 = x
            .mul_f64(s * (s - 2.0))
            .add_f64(al * al - be * be)
            .mul_f64(s - 1.0);
        let next = c2.mul(cur).sub(prev.mul_f64(c3)).div_f64(c1);
        prev = cur;
        cur = next;
    }
    cur.div_f64(p_at_one(p, n))
}

/// Newton-polished Gauss-Jacobi rule in double-double precision.
///
/// Starts from the eigenvalue nodes, applies three Newton corrections on the
/// orthonormal-recurrence polynomial of degree `k`, and rebuilds each weight
/// as the reciprocal Christoffel sum `1 / sum_{j<k} p_j(x)^2`.
pub(crate) fn refined_rule(params: JacobiParams, k: usize) -> Result<(Vec<Dd>, Vec<Dd>)> {
    let start = Quadrature::gauss_jacobi(params, k)?;
    let diag = recurrence_diagonal(params, k);
    let off = recurrence_offdiagonal(params, k);
    let p0 = 1.0 / weight_mass(params).sqrt();

    // Evaluates the orthonormal polynomials p_0..p_k at x, returning
    // (p_k, p_k', sum of squares of p_0..p_{k-1}).
    let eval = |x: Dd| -> (Dd, Dd, Dd) {
        let mut pj = Dd::from_f64(p0);
        let mut dj = Dd::ZERO;
        let mut pj_prev = Dd::ZERO;
        let mut dj_prev = Dd::ZERO;
        let mut sum_sq = pj.mul(pj);
        for j in 0..k {
            let xm = x.sub_f64(diag[j]);
            let mut num = xm.mul(pj);
            let mut dnum = xm.mul(dj).add(pj);
            if j >= 1 {
                num = num.sub(pj_prev.mul_f64(off[j - 1]));
                dnum = dnum.sub(dj_prev.mul_f64(off[j - 1]));
            }
            let pn = num.div_f64(off[j]);
            let dn = dnum.div_f64(off[j]);
            pj_prev = pj;
            dj_prev = dj;
            pj = pn;
            dj = dn;
            if j + 1 < k {
                sum_sq = sum_sq.add(pj.mul(pj));
            }
        }
        (pj, dj, sum_sq)
    };

    let mut nodes = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    for &x0 in start.nodes() {
        let mut x = Dd::from_f64(x0);
        for _ in 0..3 {
            let (pk, dk, _) = eval(x);
            x = x.sub(pk.div(dk));
        }
        let (_, _, sum_sq) = eval(x);
        nodes.push(x);
        weights.push(Dd::from_f64(1.0).div(sum_sq));
    }
    Ok((nodes, weights))
}
