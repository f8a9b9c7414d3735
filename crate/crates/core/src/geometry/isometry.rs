//! Isometries of the three models as 3×3 matrices.
//!
//! Planar isometries act projectively on homogeneous coordinates (x, y, 1);
//! in the Klein model they are the projective maps preserving the unit disc,
//! in the Euclidean plane rigid motions. Spherical isometries act linearly
//! on unit vectors.

use nalgebra::{Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::geometry::{planar_in, sphere_in, Geometry, Point};

/// A distance-preserving transformation of one of the model planes.
#[derive(Clone, Debug)]
pub struct Isometry {
    geometry: Geometry,
    m: Matrix3<f64>,
    m_inv: Matrix3<f64>,
    orientation_preserving: bool,
}

impl Isometry {
    fn new(geometry: Geometry, m: Matrix3<f64>, m_inv: Matrix3<f64>, orient: bool) -> Isometry {
        Isometry {
            geometry,
            m,
            m_inv,
            orientation_preserving: orient,
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn orientation_preserving(&self) -> bool {
        self.orientation_preserving
    }

    pub fn identity(g: Geometry) -> Isometry {
        Isometry::new(g, Matrix3::identity(), Matrix3::identity(), true)
    }

    /// Rotation by `theta` about the planar origin, or about the pole
    /// (0,0,1) for the sphere.
    pub fn rotation(g: Geometry, theta: f64) -> Result<Isometry> {
        if !theta.is_finite() {
            return Err(Error::InvalidArgument("non-finite angle".into()));
        }
        let (s, c) = theta.sin_cos();
        let m = Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0);
        let m_inv = Matrix3::new(c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0);
        Ok(Isometry::new(g, m, m_inv, true))
    }

    /// Translation moving the origin (pole) to the point at distance `t`
    /// along the positive x-axis.
    ///
    /// In the Klein model this is the projective map
    /// (x, y) ↦ ((x+τ)/(1+τx), y√(1-τ²)/(1+τx)) with τ = tanh t; on the
    /// sphere a rotation about the y-axis.
    pub fn translation_along_x(g: Geometry, t: f64) -> Result<Isometry> {
        if !t.is_finite() {
            return Err(Error::InvalidArgument("non-finite distance".into()));
        }
        let m = match g {
            Geometry::Euclidean => Matrix3::new(1.0, 0.0, t, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
            Geometry::Hyperbolic => {
                let tau = t.tanh();
                let s = (1.0 - tau * tau).sqrt();
                Matrix3::new(1.0, 0.0, tau, 0.0, s, 0.0, tau, 0.0, 1.0)
            }
            Geometry::Spherical => {
                let (s, c) = t.sin_cos();
                Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
            }
        };
        let m_inv = match g {
            Geometry::Euclidean => Matrix3::new(1.0, 0.0, -t, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
            Geometry::Hyperbolic => {
                let tau = (-t).tanh();
                let s = (1.0 - tau * tau).sqrt();
                Matrix3::new(1.0, 0.0, tau, 0.0, s, 0.0, tau, 0.0, 1.0)
            }
            Geometry::Spherical => {
                let (s, c) = t.sin_cos();
                Matrix3::new(c, 0.0, -s, 0.0, 1.0, 0.0, s, 0.0, c)
            }
        };
        Ok(Isometry::new(g, m, m_inv, true))
    }

    /// Reflection across the x-axis (the plane y = 0 on the sphere).
    pub fn reflection_x(g: Geometry) -> Isometry {
        let m = Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0);
        Isometry::new(g, m, m, false)
    }

    /// Isometry taking `p` to the origin (pole), composed from a rotation
    /// and an axis translation.
    pub fn to_origin(g: Geometry, p: &Point) -> Result<Isometry> {
        match g {
            Geometry::Euclidean | Geometry::Hyperbolic => {
                let v = planar_in(g, p)?;
                let r = v.norm();
                if r == 0.0 {
                    return Ok(Isometry::identity(g));
                }
                let phi = v.y.atan2(v.x);
                let d = match g {
                    Geometry::Euclidean => r,
                    _ => r.atanh(),
                };
                Ok(Isometry::translation_along_x(g, -d)? * Isometry::rotation(g, -phi)?)
            }
            Geometry::Spherical => {
                let v = sphere_in(g, p)?;
                let phi = v.y.atan2(v.x);
                let theta = v.xy().norm().atan2(v.z);
                Ok(Isometry::translation_along_x(g, -theta)? * Isometry::rotation(g, -phi)?)
            }
        }
    }

    /// Inverse of the isometry taking `p` to the origin.
    pub fn from_origin(g: Geometry, p: &Point) -> Result<Isometry> {
        Ok(Isometry::to_origin(g, p)?.inverse())
    }

    pub fn inverse(&self) -> Isometry {
        Isometry::new(
            self.geometry,
            self.m_inv,
            self.m,
            self.orientation_preserving,
        )
    }

    /// Apply to a point. Spherical images are renormalized to the unit
    /// sphere; planar images are the projective action on (x, y, 1).
    pub fn apply(&self, p: &Point) -> Result<Point> {
        match self.geometry {
            Geometry::Euclidean | Geometry::Hyperbolic => {
                let v = planar_in(self.geometry, p)?;
                let h = self.m * Vector3::new(v.x, v.y, 1.0);
                Ok(Point::Planar(Vector2::new(h.x / h.z, h.y / h.z)))
            }
            Geometry::Spherical => {
                let v = sphere_in(self.geometry, p)?;
                let w = self.m * v;
                Ok(Point::Spherical(w / w.norm()))
            }
        }
    }

    pub fn apply_inverse(&self, p: &Point) -> Result<Point> {
        self.inverse().apply(p)
    }

    /// Apply to a point together with a curve velocity at that point.
    pub fn apply_with_velocity(&self, p: &Point, v: &[f64; 3]) -> Result<(Point, [f64; 3])> {
        match self.geometry {
            Geometry::Euclidean | Geometry::Hyperbolic => {
                let w = planar_in(self.geometry, p)?;
                let (q, dq) = apply_planar_with_velocity(&self.m, w, Vector2::new(v[0], v[1]));
                Ok((Point::Planar(q), [dq.x, dq.y, 0.0]))
            }
            Geometry::Spherical => {
                let w = sphere_in(self.geometry, p)?;
                let q = self.m * w;
                let n = q.norm();
                let q = q / n;
                let dv = self.m * Vector3::new(v[0], v[1], v[2]);
                // Project out any radial component picked up by rounding.
                let dv = dv - q * q.dot(&dv);
                Ok((Point::Spherical(q), [dv.x, dv.y, dv.z]))
            }
        }
    }

    /// Raw matrix, mostly for tests.
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }
}

impl std::ops::Mul for Isometry {
    type Output = Isometry;

    fn mul(self, rhs: Isometry) -> Isometry {
        assert_eq!(
            self.geometry, rhs.geometry,
            "composing isometries of different geometries"
        );
        Isometry::new(
            self.geometry,
            self.m * rhs.m,
            rhs.m_inv * self.m_inv,
            self.orientation_preserving == rhs.orientation_preserving,
        )
    }
}

/// Projective action on a planar point and a velocity attached to it.
pub(crate) fn apply_planar_with_velocity(
    m: &Matrix3<f64>,
    p: Vector2<f64>,
    v: Vector2<f64>,
) -> (Vector2<f64>, Vector2<f64>) {
    let h = m * Vector3::new(p.x, p.y, 1.0);
    let dh = m * Vector3::new(v.x, v.y, 0.0);
    let q = Vector2::new(h.x / h.z, h.y / h.z);
    let dq = Vector2::new(
        (dh.x * h.z - h.x * dh.z) / (h.z * h.z),
        (dh.y * h.z - h.y * dh.z) / (h.z * h.z),
    );
    (q, dq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::distance;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(g: Geometry, rng: &mut ChaCha8Rng) -> Point {
        match g {
            Geometry::Euclidean => {
                Point::planar(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
            }
            Geometry::Hyperbolic => loop {
                let x = rng.gen_range(-0.95..0.95);
                let y = rng.gen_range(-0.95..0.95);
                if x * x + y * y < 0.9 {
                    return Point::planar(x, y);
                }
            },
            Geometry::Spherical => {
                let z: f64 = rng.gen_range(-1.0..1.0);
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = (1.0 - z * z).sqrt();
                Point::spherical(r * phi.cos(), r * phi.sin(), z).unwrap()
            }
        }
    }

    fn random_isometry(g: Geometry, rng: &mut ChaCha8Rng) -> Isometry {
        let a = Isometry::rotation(g, rng.gen_range(0.0..std::f64::consts::TAU)).unwrap();
        let t = Isometry::translation_along_x(g, rng.gen_range(-1.2..1.2)).unwrap();
        let b = Isometry::rotation(g, rng.gen_range(0.0..std::f64::consts::TAU)).unwrap();
        let m = a * t * b;
        if rng.gen_bool(0.25) {
            m * Isometry::reflection_x(g)
        } else {
            m
        }
    }

    #[test]
    fn translation_maps_origin_to_axis_point() {
        let g = Geometry::Hyperbolic;
        let t = 0.5f64.atanh();
        let iso = Isometry::translation_along_x(g, t).unwrap();
        let img = iso.apply(&Point::origin(g)).unwrap();
        let Point::Planar(v) = img else { panic!() };
        assert_abs_diff_eq!(v.x, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(v.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            distance(g, &Point::origin(g), &img).unwrap(),
            t,
            epsilon = 1e-14
        );

        let e = Isometry::translation_along_x(Geometry::Euclidean, 2.0).unwrap();
        assert_eq!(
            e.apply(&Point::planar(1.0, 1.0)).unwrap(),
            Point::planar(3.0, 1.0)
        );

        let s = Isometry::translation_along_x(Geometry::Spherical, 0.7).unwrap();
        let img = s.apply(&Point::origin(Geometry::Spherical)).unwrap();
        assert_abs_diff_eq!(
            distance(Geometry::Spherical, &Point::origin(Geometry::Spherical), &img).unwrap(),
            0.7,
            epsilon = 1e-14
        );
    }

    #[test]
    fn zero_translation_is_identity() {
        let iso = Isometry::translation_along_x(Geometry::Hyperbolic, 0.0).unwrap();
        let p = Point::planar(0.3, -0.2);
        assert_eq!(iso.apply(&p).unwrap(), p);
    }

    #[test]
    fn isometries_preserve_distance_and_invert() {
        for g in [Geometry::Euclidean, Geometry::Hyperbolic, Geometry::Spherical] {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..1000 {
                let p = random_point(g, &mut rng);
                let q = random_point(g, &mut rng);
                let iso = random_isometry(g, &mut rng);
                let (ip, iq) = (iso.apply(&p).unwrap(), iso.apply(&q).unwrap());
                let d0 = distance(g, &p, &q).unwrap();
                let d1 = distance(g, &ip, &iq).unwrap();
                assert!(
                    (d0 - d1).abs() <= 1e-10,
                    "{g:?}: distance drifted by {}",
                    (d0 - d1).abs()
                );
                let back = iso.apply_inverse(&ip).unwrap();
                let err = distance(g, &p, &back).unwrap();
                assert!(err <= 1e-12, "{g:?}: round trip error {err}");
            }
        }
    }

    #[test]
    fn to_origin_sends_point_home() {
        for g in [Geometry::Euclidean, Geometry::Hyperbolic, Geometry::Spherical] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..50 {
                let p = random_point(g, &mut rng);
                let iso = Isometry::to_origin(g, &p).unwrap();
                let img = iso.apply(&p).unwrap();
                let d = distance(g, &img, &Point::origin(g)).unwrap();
                assert!(d <= 1e-12, "{g:?}: |to_origin(p)| = {d}");
            }
        }
    }

    #[test]
    fn reflection_flips_orientation_flag() {
        let r = Isometry::reflection_x(Geometry::Euclidean);
        assert!(!r.orientation_preserving());
        let rr = r.clone() * r;
        assert!(rr.orientation_preserving());
    }
}
