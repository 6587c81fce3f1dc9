//! Compact two-point homogeneous spaces and their point models.
//!
//! The catalog covers the five families — spheres and the projective spaces
//! over the reals, complexes, quaternions and octonions — each carrying the
//! pair of Jacobi indices under which zonal kernels expand, a guaranteed
//! smoothness class for positive definite kernels, and a descent step mapping
//! derivative data to a smaller space.  Spheres and the real, complex and
//! quaternionic projective spaces additionally have concrete coordinate
//! models (unit vectors over the base field, up to a scalar gauge), which
//! support point sampling and Gram-matrix experiments; the octonionic plane
//! is coefficient-only.

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

/// Compact two-point homogeneous space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// Unit sphere `S^d`, any real dimension `d >= 1`.
    Sphere(u32),
    /// Real projective space of real dimension `d >= 2`.
    RealProjective(u32),
    /// Complex projective space of even real dimension `d >= 4`.
    ComplexProjective(u32),
    /// Quaternionic projective space of real dimension `d >= 8`, `d` a
    /// multiple of 4.
    QuaternionicProjective(u32),
    /// The octonionic projective plane, real dimension 16.
    Cayley,
}

/// One descent step: the target space, plus whether the step identifies the
/// source geodesics with half-length circles of the target.
///
/// The `half_radius` flag is purely informational bookkeeping about the
/// isometry type — coefficient re-expansion and evaluation are unaffected,
/// since both work in the variable `t` directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Descent {
    /// Space on which the derivative decomposition lives.
    pub space: Space,
    /// True when the target is to be read at half radius.
    pub half_radius: bool,
}

/// Point of a coordinate model, stored as its real ambient vector.
///
/// Constructed only through [`Space::point`] or [`Space::sample_points`], so
/// a `Point` is always unit length in its ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Real ambient coordinates.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

impl Space {
    /// Checks the dimension constraints of the family.
    fn validate(&self) -> Result<()> {
        match *self {
            Space::Sphere(d) if d < 1 => Err(Error::InvalidDimension {
                kind: "sphere",
                dim: d,
                constraint: "dimension must be at least 1",
            }),
            Space::RealProjective(d) if d < 2 => Err(Error::InvalidDimension {
                kind: "real projective space",
                dim: d,
                constraint: "dimension must be at least 2",
            }),
            Space::ComplexProjective(d) if d < 4 || d % 2 != 0 => Err(Error::InvalidDimension {
                kind: "complex projective space",
                dim: d,
                constraint: "real dimension must be even and at least 4",
            }),
            Space::QuaternionicProjective(d) if d < 8 || d % 4 != 0 => {
                Err(Error::InvalidDimension {
                    kind: "quaternionic projective space",
                    dim: d,
                    constraint: "real dimension must be a multiple of 4 and at least 8",
                })
            }
            _ => Ok(()),
        }
    }

    /// Real dimension of the space.
    pub fn dimension(&self) -> u32 {
        match *self {
            Space::Sphere(d)
            | Space::RealProjective(d)
            | Space::ComplexProjective(d)
            | Space::QuaternionicProjective(d) => d,
            Space::Cayley => 16,
        }
    }

    /// Jacobi indices `(alpha, beta)` of the zonal expansion basis.
    ///
    /// `alpha = (d-2)/2` throughout; `beta` is `alpha` on spheres and
    /// `-1/2, 0, 1, 3` on the projective spaces over the reals, complexes,
    /// quaternions and octonions respectively.
    pub fn jacobi_params(&self) -> Result<JacobiParams> {
        self.validate()?;
        let alpha = (self.dimension() as f64 - 2.0) / 2.0;
        let beta = match *self {
            Space::Sphere(_) => alpha,
            Space::RealProjective(_) => -0.5,
            Space::ComplexProjective(_) => 0.0,
            Space::QuaternionicProjective(_) => 1.0,
            Space::Cayley => 3.0,
        };
        JacobiParams::new(alpha, beta)
    }

    /// Largest derivative order guaranteed for continuous positive definite
    /// kernels on this space.
    pub fn smoothness_order(&self) -> Result<u32> {
        self.validate()?;
        Ok(match *self {
            Space::Sphere(d) | Space::RealProjective(d) => (d - 1) / 2,
            Space::ComplexProjective(d) => (d - 2) / 2,
            Space::QuaternionicProjective(d) => {
                if d % 8 == 0 {
                    (d - 4) / 4
                } else {
                    d / 4
                }
            }
            Space::Cayley => 1,
        })
    }

    /// The space on which first-derivative decompositions of kernels on
    /// `self` live.
    ///
    /// Spheres drop two dimensions; the projective families descend within
    /// their family, into complex projective space, or onto a sphere when the
    /// chain bottoms out.  The one-dimensional and two-dimensional spaces
    /// admit no descent, matching their smoothness order 0.
    pub fn descend(&self) -> Result<Descent> {
        self.validate()?;
        let plain = |space| Descent {
            space,
            half_radius: false,
        };
        let halved = |space| Descent {
            space,
            half_radius: true,
        };
        match *self {
            Space::Sphere(d) if d >= 3 => Ok(plain(Space::Sphere(d - 2))),
            Space::RealProjective(3) => Ok(halved(Space::Sphere(1))),
            Space::RealProjective(d) if d >= 4 => Ok(plain(Space::RealProjective(d - 2))),
            Space::ComplexProjective(4) => Ok(halved(Space::Sphere(2))),
            Space::ComplexProjective(d) if d >= 6 => Ok(plain(Space::ComplexProjective(d - 2))),
            Space::QuaternionicProjective(8) => Ok(halved(Space::Sphere(2))),
            Space::QuaternionicProjective(d) if d % 8 == 4 => {
                Ok(plain(Space::ComplexProjective(d / 2)))
            }
            Space::QuaternionicProjective(d) => Ok(plain(Space::ComplexProjective(d / 2 - 2))),
            Space::Cayley => Ok(plain(Space::Sphere(2))),
            other => Err(Error::NoDescent {
                space: other.to_string(),
            }),
        }
    }

    /// Whether `self` embeds isometrically (up to scaling) into `other`.
    ///
    /// Computed as the reflexive-transitive closure of the elementary
    /// inclusions: spheres and real projective spaces into the next
    /// dimension, complex and quaternionic projective spaces two and four
    /// real dimensions up, real into complex and complex into quaternionic
    /// projective space at doubled real dimension, and the quaternionic plane
    /// into the octonionic plane.
    pub fn embeds_in(&self, other: &Space) -> bool {
        if self.validate().is_err() || other.validate().is_err() {
            return false;
        }
        let target_dim = other.dimension();
        let mut queue = vec![*self];
        let mut seen: HashSet<Space> = HashSet::new();
        while let Some(cur) = queue.pop() {
            if cur == *other {
                return true;
            }
            if cur.dimension() >= target_dim || !seen.insert(cur) {
                continue;
            }
            let mut push = |s: Space| {
                if s.validate().is_ok() && s.dimension() <= target_dim {
                    queue.push(s);
                }
            };
            match cur {
                Space::Sphere(d) => push(Space::Sphere(d + 1)),
                Space::RealProjective(d) => {
                    push(Space::RealProjective(d + 1));
                    push(Space::ComplexProjective(2 * d));
                }
                Space::ComplexProjective(d) => {
                    push(Space::ComplexProjective(d + 2));
                    push(Space::QuaternionicProjective(2 * d));
                }
                Space::QuaternionicProjective(d) => {
                    push(Space::QuaternionicProjective(d + 4));
                    if d == 8 {
                        push(Space::Cayley);
                    }
                }
                Space::Cayley => {}
            }
        }
        false
    }

    /// Length of the real ambient coordinate vector of the point model.
    pub fn point_len(&self) -> Result<usize> {
        self.validate()?;
        match *self {
            Space::Sphere(d) | Space::RealProjective(d) => Ok(d as usize + 1),
            Space::ComplexProjective(d) => Ok(d as usize + 2),
            Space::QuaternionicProjective(d) => Ok(d as usize + 4),
            Space::Cayley => Err(Error::NoPointModel {
                space: self.to_string(),
            }),
        }
    }

    /// Width of one base-field block in the ambient vector (1, 1, 2 or 4).
    fn block_len(&self) -> usize {
        match *self {
            Space::Sphere(_) | Space::RealProjective(_) => 1,
            Space::ComplexProjective(_) => 2,
            Space::QuaternionicProjective(_) => 4,
            Space::Cayley => 1,
        }
    }

    /// Wraps raw coordinates as a point of this space's model.
    ///
    /// The vector must have the model's ambient length and unit Euclidean
    /// norm within `1e-12`.
    pub fn point(&self, coords: Vec<f64>) -> Result<Point> {
        let expected = self.point_len()?;
        if coords.len() != expected {
            return Err(Error::PointDimensionMismatch {
                space: self.to_string(),
                expected,
                got: coords.len(),
            });
        }
        if let Some(bad) = coords.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "point coordinate",
                value: *bad,
            });
        }
        let norm = coords.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::PointNotUnit { norm });
        }
        Ok(Point { coords })
    }

    /// Draws `count` independent uniform points, deterministically in `seed`.
    ///
    /// Coordinates are standard normal vectors scaled to the unit sphere of
    /// the ambient space; on projective models the scalar gauge is then fixed
    /// by rotating the first nonnegligible base-field block to the positive
    /// real axis, so equal seeds give byte-identical representatives.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<Point>> {
        let len = self.point_len()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(count);
        while points.len() < count {
            let mut coords: Vec<f64> =
                (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm = coords.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue;
            }
            for c in &mut coords {
                *c /= norm;
            }
            self.fix_gauge(&mut coords);
            // Renormalize once more so the unit test in `point` is met to
            // full precision even after the gauge rotation.
            let norm = coords.iter().map(|v| v * v).sum::<f64>().sqrt();
            for c in &mut coords {
                *c /= norm;
            }
            points.push(Point { coords });
        }
        Ok(points)
    }

    /// Rotates the overall scalar gauge to a canonical representative.
    fn fix_gauge(&self, coords: &mut [f64]) {
        let block = self.block_len();
        let pivot = match coords
            .chunks(block)
            .position(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt() > 1e-12)
        {
            Some(i) => i,
            None => return,
        };
        match *self {
            Space::Sphere(_) | Space::Cayley => {}
            Space::RealProjective(_) => {
                if coords[pivot] < 0.0 {
                    for c in coords.iter_mut() {
                        *c = -*c;
                    }
                }
            }
            Space::ComplexProjective(_) => {
                let (zr, zi) = (coords[2 * pivot], coords[2 * pivot + 1]);
                let mag = (zr * zr + zi * zi).sqrt();
                let (wr, wi) = (zr / mag, -zi / mag);
                for pair in coords.chunks_mut(2) {
                    let (re, im) = (pair[0], pair[1]);
                    pair[0] = re * wr - im * wi;
                    pair[1] = re * wi + im * wr;
                }
            }
            Space::QuaternionicProjective(_) => {
                let q = &coords[4 * pivot..4 * pivot + 4];
                let mag = q.iter().map(|v| v * v).sum::<f64>().sqrt();
                // w = conj(q)/|q|; right multiplication keeps the pairing's
                // magnitude and sends the pivot block to (|q|, 0, 0, 0).
                let w = [q[0] / mag, -q[1] / mag, -q[2] / mag, -q[3] / mag];
                for quad in coords.chunks_mut(4) {
                    let p = quat_mul([quad[0], quad[1], quad[2], quad[3]], w);
                    quad.copy_from_slice(&p);
                }
            }
        }
    }

    /// Invariant zonal argument `t` of a point pair, in `[-1, 1]`.
    ///
    /// On spheres this is the Euclidean inner product; on the projective
    /// models it is `2 |<x, y>|^2 - 1` with the inner product taken over the
    /// base field, which is invariant under the scalar gauge.
    pub fn zonal_argument(&self, x: &Point, y: &Point) -> Result<f64> {
        let expected = self.point_len()?;
        for p in [x, y] {
            if p.coords.len() != expected {
                return Err(Error::PointDimensionMismatch {
                    space: self.to_string(),
                    expected,
                    got: p.coords.len(),
                });
            }
        }
        let t = match *self {
            Space::Sphere(_) => x
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| a * b)
                .sum::<f64>(),
            Space::RealProjective(_) => {
                let inner: f64 = x
                    .coords
                    .iter()
                    .zip(&y.coords)
                    .map(|(a, b)| a * b)
                    .sum();
                2.0 * inner * inner - 1.0
            }
            Space::ComplexProjective(_) => {
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for (xp, yp) in x.coords.chunks(2).zip(y.coords.chunks(2)) {
                    re += xp[0] * yp[0] + xp[1] * yp[1];
                    im += xp[0] * yp[1] - xp[1] * yp[0];
                }
                2.0 * (re * re + im * im) - 1.0
            }
            Space::QuaternionicProjective(_) => {
                let mut acc = [0.0f64; 4];
                for (xq, yq) in x.coords.chunks(4).zip(y.coords.chunks(4)) {
                    let conj_x = [xq[0], -xq[1], -xq[2], -xq[3]];
                    let p = quat_mul(conj_x, [yq[0], yq[1], yq[2], yq[3]]);
                    for (a, b) in acc.iter_mut().zip(p) {
                        *a += b;
                    }
                }
                2.0 * acc.iter().map(|v| v * v).sum::<f64>() - 1.0
            }
            Space::Cayley => unreachable!("point_len rejects the octonionic plane"),
        };
        Ok(t.clamp(-1.0, 1.0))
    }
}

/// Hamilton product of two quaternions in `(1, i, j, k)` coordinates.
fn quat_mul(p: [f64; 4], q: [f64; 4]) -> [f64; 4] {
    let [a, b, c, d] = p;
    let [e, f, g, h] = q;
    [
        a * e - b * f - c * g - d * h,
        a * f + b * e + c * h - d * g,
        a * g - b * h + c * e + d * f,
        a * h + b * g - c * f + d * e,
    ]
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Space::Sphere(d) => write!(f, "sphere:{d}"),
            Space::RealProjective(d) => write!(f, "rp:{d}"),
            Space::ComplexProjective(d) => write!(f, "cp:{d}"),
            Space::QuaternionicProjective(d) => write!(f, "hp:{d}"),
            Space::Cayley => write!(f, "cayley"),
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        if text == "cayley" {
            return Ok(Space::Cayley);
        }
        let unknown = || Error::UnknownSpace {
            text: text.to_string(),
        };
        let (family, dim) = text.split_once(':').ok_or_else(unknown)?;
        let dim: u32 = dim.parse().map_err(|_| unknown())?;
        let space = match family {
            "sphere" => Space::Sphere(dim),
            "rp" => Space::RealProjective(dim),
            "cp" => Space::ComplexProjective(dim),
            "hp" => Space::QuaternionicProjective(dim),
            _ => return Err(unknown()),
        };
        space.validate()?;
        Ok(space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn catalog_indices() {
        let check = |space: Space, al: f64, be: f64| {
            let p = space.jacobi_params().unwrap();
            assert_eq!(p.alpha(), al, "{space}");
            assert_eq!(p.beta(), be, "{space}");
        };
        check(Space::Sphere(2), 0.0, 0.0);
        check(Space::Sphere(7), 2.5, 2.5);
        check(Space::RealProjective(3), 0.5, -0.5);
        check(Space::ComplexProjective(4), 1.0, 0.0);
        check(Space::QuaternionicProjective(8), 3.0, 1.0);
        check(Space::Cayley, 7.0, 3.0);
    }

    #[test]
    fn dimension_constraints() {
        assert!(Space::Sphere(0).jacobi_params().is_err());
        assert!(Space::Sphere(1).jacobi_params().is_ok());
        assert!(Space::RealProjective(1).jacobi_params().is_err());
        assert!(Space::ComplexProjective(3).jacobi_params().is_err());
        assert!(Space::ComplexProjective(2).jacobi_params().is_err());
        assert!(Space::QuaternionicProjective(6).jacobi_params().is_err());
        assert!(Space::QuaternionicProjective(4).jacobi_params().is_err());
        assert!(Space::QuaternionicProjective(12).jacobi_params().is_ok());
    }

    #[test]
    fn smoothness_examples() {
        assert_eq!(Space::Sphere(3).smoothness_order().unwrap(), 1);
        assert_eq!(Space::Sphere(2).smoothness_order().unwrap(), 0);
        assert_eq!(Space::RealProjective(2).smoothness_order().unwrap(), 0);
        assert_eq!(Space::QuaternionicProjective(8).smoothness_order().unwrap(), 1);
        assert_eq!(Space::ComplexProjective(6).smoothness_order().unwrap(), 2);
        assert_eq!(Space::QuaternionicProjective(12).smoothness_order().unwrap(), 3);
        assert_eq!(Space::Cayley.smoothness_order().unwrap(), 1);
    }

    #[test]
    fn descent_steps() {
        let step = |s: Space| s.descend().unwrap();
        assert_eq!(
            step(Space::Sphere(5)),
            Descent {
                space: Space::Sphere(3),
                half_radius: false
            }
        );
        assert_eq!(
            step(Space::RealProjective(3)),
            Descent {
                space: Space::Sphere(1),
                half_radius: true
            }
        );
        assert_eq!(step(Space::RealProjective(4)).space, Space::RealProjective(2));
        assert_eq!(
            step(Space::ComplexProjective(4)),
            Descent {
                space: Space::Sphere(2),
                half_radius: true
            }
        );
        assert_eq!(step(Space::ComplexProjective(6)).space, Space::ComplexProjective(4));
        assert_eq!(
            step(Space::QuaternionicProjective(8)),
            Descent {
                space: Space::Sphere(2),
                half_radius: true
            }
        );
        assert_eq!(
            step(Space::QuaternionicProjective(12)).space,
            Space::ComplexProjective(6)
        );
        assert_eq!(
            step(Space::QuaternionicProjective(16)).space,
            Space::ComplexProjective(6)
        );
        assert_eq!(
            step(Space::QuaternionicProjective(20)).space,
            Space::ComplexProjective(10)
        );
        assert_eq!(
            step(Space::Cayley),
            Descent {
                space: Space::Sphere(2),
                half_radius: false
            }
        );
        for s in [Space::Sphere(1), Space::Sphere(2), Space::RealProjective(2)] {
            assert!(matches!(s.descend(), Err(Error::NoDescent { .. })));
        }
    }

    #[test]
    fn descent_strictly_shrinks_alpha() {
        let mut spaces = vec![Space::Cayley];
        for d in 3..=24 {
            spaces.push(Space::Sphere(d));
            spaces.push(Space::RealProjective(d));
            if d >= 4 && d % 2 == 0 {
                spaces.push(Space::ComplexProjective(d));
            }
            if d >= 8 && d % 4 == 0 {
                spaces.push(Space::QuaternionicProjective(d));
            }
        }
        for s in spaces {
            let down = s.descend().unwrap();
            let src = s.jacobi_params().unwrap();
            let dst = down.space.jacobi_params().unwrap();
            assert!(
                dst.alpha() < src.alpha(),
                "descent from {s} to {} does not shrink alpha",
                down.space
            );
        }
    }

    #[test]
    fn embedding_closure() {
        assert!(Space::Sphere(3).embeds_in(&Space::Sphere(5)));
        assert!(Space::Sphere(3).embeds_in(&Space::Sphere(3)));
        assert!(!Space::Sphere(5).embeds_in(&Space::Sphere(3)));
        assert!(Space::RealProjective(3).embeds_in(&Space::ComplexProjective(6)));
        assert!(!Space::ComplexProjective(6).embeds_in(&Space::RealProjective(8)));
        assert!(Space::ComplexProjective(4).embeds_in(&Space::QuaternionicProjective(8)));
        assert!(Space::QuaternionicProjective(8).embeds_in(&Space::Cayley));
        assert!(Space::RealProjective(3).embeds_in(&Space::QuaternionicProjective(12)));
        assert!(!Space::Sphere(3).embeds_in(&Space::RealProjective(5)));
        assert!(!Space::Cayley.embeds_in(&Space::QuaternionicProjective(16)));
    }

    #[test]
    fn descriptor_round_trip() {
        for s in [
            Space::Sphere(7),
            Space::RealProjective(2),
            Space::ComplexProjective(10),
            Space::QuaternionicProjective(8),
            Space::Cayley,
        ] {
            let text = s.to_string();
            assert_eq!(text.parse::<Space>().unwrap(), s);
        }
        assert!("torus:2".parse::<Space>().is_err());
        assert!("sphere".parse::<Space>().is_err());
        assert!("sphere:x".parse::<Space>().is_err());
        assert!(matches!(
            "cp:5".parse::<Space>(),
            Err(Error::InvalidDimension { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic_unit_and_gauged() {
        for s in [
            Space::Sphere(4),
            Space::RealProjective(3),
            Space::ComplexProjective(4),
            Space::QuaternionicProjective(8),
        ] {
            let a = s.sample_points(5, 42).unwrap();
            let b = s.sample_points(5, 42).unwrap();
            assert_eq!(a, b, "{s} sampling not deterministic");
            let c = s.sample_points(5, 43).unwrap();
            assert_ne!(a, c, "{s} seed ignored");
            for p in &a {
                let norm: f64 = p.coords().iter().map(|v| v * v).sum::<f64>().sqrt();
                assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
                match s {
                    Space::RealProjective(_) => assert!(p.coords()[0] > 0.0),
                    Space::ComplexProjective(_) => {
                        assert!(p.coords()[0] > 0.0);
                        assert_abs_diff_eq!(p.coords()[1], 0.0, epsilon = 1e-13);
                    }
                    Space::QuaternionicProjective(_) => {
                        assert!(p.coords()[0] > 0.0);
                        for k in 1..4 {
                            assert_abs_diff_eq!(p.coords()[k], 0.0, epsilon = 1e-13);
                        }
                    }
                    _ => {}
                }
            }
        }
        assert!(matches!(
            Space::Cayley.sample_points(3, 0),
            Err(Error::NoPointModel { .. })
        ));
    }

    #[test]
    fn zonal_argument_properties() {
        for s in [
            Space::Sphere(3),
            Space::RealProjective(4),
            Space::ComplexProjective(6),
            Space::QuaternionicProjective(8),
        ] {
            let pts = s.sample_points(6, 7).unwrap();
            for x in &pts {
                // Self-pairing gives the endpoint t = 1 in every model.
                assert_abs_diff_eq!(s.zonal_argument(x, x).unwrap(), 1.0, epsilon = 1e-12);
                for y in &pts {
                    let t = s.zonal_argument(x, y).unwrap();
                    assert!((-1.0..=1.0).contains(&t));
                    let t_rev = s.zonal_argument(y, x).unwrap();
                    assert_abs_diff_eq!(t, t_rev, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn complex_gauge_invariance_of_argument() {
        let s = Space::ComplexProjective(4);
        let pts = s.sample_points(2, 11).unwrap();
        let (x, y) = (&pts[0], &pts[1]);
        let t = s.zonal_argument(x, y).unwrap();
        // Multiply y by the unit complex scalar exp(i*0.7) by hand.
        let (wr, wi) = (0.7f64.cos(), 0.7f64.sin());
        let rotated: Vec<f64> = y
            .coords()
            .chunks(2)
            .flat_map(|p| [p[0] * wr - p[1] * wi, p[0] * wi + p[1] * wr])
            .collect();
        let y2 = s.point(rotated).unwrap();
        assert_abs_diff_eq!(s.zonal_argument(x, &y2).unwrap(), t, epsilon = 1e-12);
    }

    #[test]
    fn point_validation() {
        let s = Space::Sphere(2);
        assert!(matches!(
            s.point(vec![1.0, 0.0]),
            Err(Error::PointDimensionMismatch { .. })
        ));
        assert!(matches!(
            s.point(vec![1.0, 1.0, 0.0]),
            Err(Error::PointNotUnit { .. })
        ));
        assert!(s.point(vec![0.0, 0.0, 1.0]).is_ok());
        assert!(s.point(vec![f64::NAN, 0.0, 1.0]).is_err());
    }
}
