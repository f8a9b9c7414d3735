//! Euclidean support functions given by finite trigonometric polynomials.
//!
//! A smooth convex curve in the plane can be described by its support
//! function h(φ): the signed distance from the origin to the tangent line
//! with outward normal (cos φ, sin φ). The boundary point with normal angle
//! φ is p(φ) = h·u + h'·u⊥ and the Euclidean curvature radius is h + h''.
//! With positive h + h'' the curve is C²₊. Contained in the open unit disc,
//! such curves are exactly the smooth hyperbolically convex discs of the
//! Klein model.

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::scalar::{golden_max, golden_min};

/// Grid used for validation and for seeding 1-D searches on the boundary.
const SCAN: usize = 512;

/// Support function h(φ) = a0 + Σ_k (a_k cos kφ + b_k sin kφ).
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSupport {
    a0: f64,
    cos_coeffs: Vec<f64>,
    sin_coeffs: Vec<f64>,
}

impl TrigSupport {
    /// Build and validate: requires h + h'' > 0 (strict convexity) and the
    /// whole curve strictly inside the open unit disc.
    pub fn new(a0: f64, mut cos_coeffs: Vec<f64>, mut sin_coeffs: Vec<f64>) -> Result<TrigSupport> {
        let degree = cos_coeffs.len().max(sin_coeffs.len());
        cos_coeffs.resize(degree, 0.0);
        sin_coeffs.resize(degree, 0.0);
        let s = TrigSupport {
            a0,
            cos_coeffs,
            sin_coeffs,
        };
        if !s.a0.is_finite()
            || s.cos_coeffs.iter().chain(&s.sin_coeffs).any(|c| !c.is_finite())
        {
            return Err(Error::Domain("non-finite support coefficient".into()));
        }
        let mut max_norm = 0.0f64;
        for j in 0..SCAN {
            let phi = std::f64::consts::TAU * j as f64 / SCAN as f64;
            let radius = s.h(phi) + s.d2h(phi);
            if radius <= 0.0 {
                return Err(Error::Domain(format!(
                    "support function not strictly convex: h + h'' = {radius} at φ = {phi}"
                )));
            }
            max_norm = max_norm.max(s.boundary(phi).norm());
        }
        if max_norm >= 1.0 {
            return Err(Error::Domain(format!(
                "support curve leaves the open unit disc (max |p| = {max_norm})"
            )));
        }
        Ok(s)
    }

    /// Circle of Euclidean radius `c` about the origin.
    pub fn circle(c: f64) -> Result<TrigSupport> {
        TrigSupport::new(c, Vec::new(), Vec::new())
    }

    /// Least-degree trigonometric interpolant of a sampled support
    /// function, projected onto `harmonics` frequencies from a uniform
    /// grid of `samples` values.
    pub fn fit<F: Fn(f64) -> f64>(h: F, harmonics: usize, samples: usize) -> Result<TrigSupport> {
        if samples < 2 * harmonics + 1 {
            return Err(Error::InvalidArgument(
                "need more samples than coefficients".into(),
            ));
        }
        let vals: Vec<f64> = (0..samples)
            .map(|j| h(std::f64::consts::TAU * j as f64 / samples as f64))
            .collect();
        let a0 = vals.iter().sum::<f64>() / samples as f64;
        let mut cos_coeffs = vec![0.0; harmonics];
        let mut sin_coeffs = vec![0.0; harmonics];
        for (k, (ak, bk)) in cos_coeffs.iter_mut().zip(sin_coeffs.iter_mut()).enumerate() {
            let k1 = (k + 1) as f64;
            let (mut sa, mut sb) = (0.0, 0.0);
            for (j, v) in vals.iter().enumerate() {
                let ang = k1 * std::f64::consts::TAU * j as f64 / samples as f64;
                sa += v * ang.cos();
                sb += v * ang.sin();
            }
            *ak = 2.0 * sa / samples as f64;
            *bk = 2.0 * sb / samples as f64;
        }
        TrigSupport::new(a0, cos_coeffs, sin_coeffs)
    }

    pub fn coefficients(&self) -> (f64, &[f64], &[f64]) {
        (self.a0, &self.cos_coeffs, &self.sin_coeffs)
    }

    pub fn h(&self, phi: f64) -> f64 {
        let mut v = self.a0;
        for (k, (a, b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let ang = (k + 1) as f64 * phi;
            v += a * ang.cos() + b * ang.sin();
        }
        v
    }

    pub fn dh(&self, phi: f64) -> f64 {
        let mut v = 0.0;
        for (k, (a, b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let k1 = (k + 1) as f64;
            let ang = k1 * phi;
            v += k1 * (b * ang.cos() - a * ang.sin());
        }
        v
    }

    pub fn d2h(&self, phi: f64) -> f64 {
        let mut v = 0.0;
        for (k, (a, b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let k1 = (k + 1) as f64;
            let ang = k1 * phi;
            v -= k1 * k1 * (a * ang.cos() + b * ang.sin());
        }
        v
    }

    /// Boundary point with outward normal angle φ.
    pub fn boundary(&self, phi: f64) -> Vector2<f64> {
        let (s, c) = phi.sin_cos();
        let u = Vector2::new(c, s);
        let n = Vector2::new(-s, c);
        u * self.h(phi) + n * self.dh(phi)
    }

    /// Velocity of the boundary parametrization: (h + h'')·u⊥.
    pub fn boundary_velocity(&self, phi: f64) -> Vector2<f64> {
        let (s, c) = phi.sin_cos();
        Vector2::new(-s, c) * (self.h(phi) + self.d2h(phi))
    }

    /// Signed support residual max_φ (q·u(φ) - h(φ)): negative inside the
    /// curve, zero on it, positive outside. For convex curves this equals
    /// the Euclidean distance to the boundary outside and minus the
    /// distance to the nearest support line inside.
    pub fn residual(&self, q: Vector2<f64>) -> f64 {
        let g = |phi: f64| {
            let (s, c) = phi.sin_cos();
            q.x * c + q.y * s - self.h(phi)
        };
        let (best_phi, _) = scan_extremum(&g, true);
        let w = std::f64::consts::TAU / SCAN as f64;
        let (_, v) = golden_max(g, best_phi - w, best_phi + w, 1e-13);
        v
    }

    /// Parameter of the boundary point nearest to `q` in the Euclidean
    /// metric, together with that distance.
    pub fn nearest_param(&self, q: Vector2<f64>) -> (f64, f64) {
        let g = |phi: f64| (self.boundary(phi) - q).norm();
        let (best_phi, _) = scan_extremum(&g, false);
        let w = std::f64::consts::TAU / SCAN as f64;
        let (phi, d) = golden_min(g, best_phi - w, best_phi + w, 1e-13);
        (phi.rem_euclid(std::f64::consts::TAU), d)
    }
}

/// Coarse scan over [0, 2π) for the extremum seed of a periodic function.
fn scan_extremum<F: Fn(f64) -> f64>(g: &F, maximize: bool) -> (f64, f64) {
    let mut best_phi = 0.0;
    let mut best = if maximize { f64::NEG_INFINITY } else { f64::INFINITY };
    for j in 0..SCAN {
        let phi = std::f64::consts::TAU * j as f64 / SCAN as f64;
        let v = g(phi);
        if (maximize && v > best) || (!maximize && v < best) {
            best = v;
            best_phi = phi;
        }
    }
    (best_phi, best)
}
