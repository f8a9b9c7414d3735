//! Convex discs and their primitive queries.
//!
//! A disc is a geodesic circle, a smooth Klein-model disc given by a
//! trigonometric support function, or a convex polygon. Queries cover
//! perimeter, point containment, intersection of the boundary with a
//! geodesic chord, boundary arc length between boundary points, and
//! geodesic curvature.

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::geometry::{distance, planar_in, sphere_in, Geometry, Isometry, Point};
use crate::quadrature::{curve_length, DEFAULT_TOL};
use crate::scalar::{bisect, golden_min};

mod polygon;
mod support;

pub use polygon::{Polygon, PolygonArc};
pub use support::TrigSupport;

pub(crate) use polygon::{planar_segment_intersection, sphere_segment_intersection};

/// Classification of a point against a disc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// Sense of travel along a disc boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcOrientation {
    Ccw,
    Cw,
    /// The whole boundary loop, regardless of the endpoints.
    Full,
}

/// A point where a geodesic chord meets a disc boundary.
#[derive(Clone, Copy, Debug)]
pub struct ChordCrossing {
    pub point: Point,
    /// Arc-length fraction along the chord, in [0, 1].
    pub param: f64,
    /// True for single-point tangential contact.
    pub tangential: bool,
}

/// Default boundary band for containment classification.
pub const CONTAINS_TOL: f64 = 1e-10;

/// Residual band below which a chord is reported as tangent.
pub const TANGENCY_TOL: f64 = 1e-9;

/// Tolerance on chord parameters when deduplicating crossings.
pub const PARAM_DEDUP_TOL: f64 = 1e-9;

/// How far a point may sit from the boundary and still be accepted by
/// boundary-anchored queries.
pub const ON_BOUNDARY_TOL: f64 = 1e-8;

/// A convex disc in one of the three model geometries.
#[derive(Clone, Debug)]
pub enum ConvexDisc {
    /// Geodesic circle. On the sphere the radius must stay below π/2 so the
    /// disc is convex (contained in an open hemisphere).
    Circle {
        geometry: Geometry,
        center: Point,
        radius: f64,
    },
    /// Smooth hyperbolically convex disc in the Klein model, described by
    /// the Euclidean support function of its boundary.
    KleinSmooth { support: TrigSupport },
    /// A convex polygon regarded as a disc.
    PolygonDisc { polygon: Polygon },
}

impl ConvexDisc {
    pub fn circle(geometry: Geometry, center: Point, radius: f64) -> Result<ConvexDisc> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Domain(format!("radius must be positive: {radius}")));
        }
        match geometry {
            Geometry::Euclidean | Geometry::Hyperbolic => {
                planar_in(geometry, &center)?;
            }
            Geometry::Spherical => {
                sphere_in(geometry, &center)?;
                if radius >= std::f64::consts::FRAC_PI_2 {
                    return Err(Error::Domain(format!(
                        "spherical circle radius must be < π/2 for convexity: {radius}"
                    )));
                }
            }
        }
        Ok(ConvexDisc::Circle {
            geometry,
            center,
            radius,
        })
    }

    pub fn klein_smooth(support: TrigSupport) -> ConvexDisc {
        ConvexDisc::KleinSmooth { support }
    }

    pub fn polygon(polygon: Polygon) -> ConvexDisc {
        ConvexDisc::PolygonDisc { polygon }
    }

    pub fn geometry(&self) -> Geometry {
        match self {
            ConvexDisc::Circle { geometry, .. } => *geometry,
            ConvexDisc::KleinSmooth { .. } => Geometry::Hyperbolic,
            ConvexDisc::PolygonDisc { polygon } => polygon.geometry(),
        }
    }

    /// Isometry taking the origin (pole) to the circle center.
    fn center_frame(&self) -> Result<Isometry> {
        match self {
            ConvexDisc::Circle {
                geometry, center, ..
            } => Isometry::from_origin(*geometry, center),
            _ => Err(Error::Unsupported(
                "center frame exists only for circles".into(),
            )),
        }
    }

    /// Euclidean radius of the circle image in its center frame.
    fn frame_radius(&self) -> f64 {
        match self {
            ConvexDisc::Circle {
                geometry, radius, ..
            } => match geometry {
                Geometry::Euclidean => *radius,
                Geometry::Hyperbolic => radius.tanh(),
                Geometry::Spherical => radius.sin(),
            },
            _ => unreachable!("frame_radius is only called on circles"),
        }
    }

    /// Boundary perimeter: closed form for circles, quadrature of the
    /// first fundamental form for smooth discs, side sum for polygons.
    pub fn perimeter(&self) -> f64 {
        match self {
            ConvexDisc::Circle {
                geometry, radius, ..
            } => geometry.circle_perimeter(*radius),
            ConvexDisc::KleinSmooth { .. } => self
                .boundary_quadrature_length(0.0, std::f64::consts::TAU, DEFAULT_TOL)
                .expect("validated smooth disc stays inside the model"),
            ConvexDisc::PolygonDisc { polygon } => polygon.perimeter(),
        }
    }

    /// An interior point of the disc.
    pub fn interior_point(&self) -> Point {
        match self {
            ConvexDisc::Circle { center, .. } => *center,
            ConvexDisc::KleinSmooth { support } => {
                let mut c = Vector2::zeros();
                for j in 0..64 {
                    c += support.boundary(std::f64::consts::TAU * j as f64 / 64.0);
                }
                Point::Planar(c / 64.0)
            }
            ConvexDisc::PolygonDisc { polygon } => polygon.interior_point(),
        }
    }

    pub fn contains(&self, p: &Point) -> Result<Containment> {
        self.contains_with_tol(p, CONTAINS_TOL)
    }

    /// Classify `p` with boundary band `tol`: geodesic distance to the
    /// boundary for circles and polygons, Euclidean support residual for
    /// smooth Klein discs.
    pub fn contains_with_tol(&self, p: &Point, tol: f64) -> Result<Containment> {
        match self {
            ConvexDisc::Circle {
                geometry,
                center,
                radius,
            } => {
                let d = distance(*geometry, center, p)?;
                Ok(if d < radius - tol {
                    Containment::Inside
                } else if d > radius + tol {
                    Containment::Outside
                } else {
                    Containment::Boundary
                })
            }
            ConvexDisc::KleinSmooth { support } => {
                let q = planar_in(Geometry::Hyperbolic, p)?;
                let r = support.residual(q);
                Ok(if r < -tol {
                    Containment::Inside
                } else if r > tol {
                    Containment::Outside
                } else {
                    Containment::Boundary
                })
            }
            ConvexDisc::PolygonDisc { polygon } => polygon.contains(p, tol),
        }
    }

    /// Boundary point for parameter `t`: the central angle for circles,
    /// the support normal angle for smooth discs.
    pub fn boundary_point(&self, t: f64) -> Result<Point> {
        Ok(self.boundary_point_velocity(t)?.0)
    }

    /// Boundary point and parameter velocity at `t`. The parametrization is
    /// counter-clockwise.
    pub fn boundary_point_velocity(&self, t: f64) -> Result<(Point, [f64; 3])> {
        match self {
            ConvexDisc::Circle { geometry, .. } => {
                let frame = self.center_frame()?;
                let r = self.frame_radius();
                let (s, c) = t.sin_cos();
                match geometry {
                    Geometry::Euclidean | Geometry::Hyperbolic => frame.apply_with_velocity(
                        &Point::planar(r * c, r * s),
                        &[-r * s, r * c, 0.0],
                    ),
                    Geometry::Spherical => {
                        let ConvexDisc::Circle { radius, .. } = self else {
                            unreachable!()
                        };
                        let z = radius.cos();
                        frame.apply_with_velocity(
                            &Point::Spherical(nalgebra::Vector3::new(r * c, r * s, z)),
                            &[-r * s, r * c, 0.0],
                        )
                    }
                }
            }
            ConvexDisc::KleinSmooth { support } => {
                let p = support.boundary(t);
                let v = support.boundary_velocity(t);
                Ok((Point::Planar(p), [v.x, v.y, 0.0]))
            }
            ConvexDisc::PolygonDisc { .. } => Err(Error::Unsupported(
                "smooth boundary parametrization of a polygon disc".into(),
            )),
        }
    }

    /// Boundary parameter of a point on the boundary (within
    /// [`ON_BOUNDARY_TOL`]).
    pub fn boundary_param_of(&self, p: &Point) -> Result<f64> {
        match self {
            ConvexDisc::Circle {
                geometry,
                center,
                radius,
            } => {
                let residual = (distance(*geometry, center, p)? - radius).abs();
                if residual > ON_BOUNDARY_TOL {
                    return Err(Error::NotOnBoundary { residual });
                }
                let q = self.center_frame()?.apply_inverse(p)?;
                let t = match q {
                    Point::Planar(v) => v.y.atan2(v.x),
                    Point::Spherical(v) => v.y.atan2(v.x),
                };
                Ok(t.rem_euclid(std::f64::consts::TAU))
            }
            ConvexDisc::KleinSmooth { support } => {
                let q = planar_in(Geometry::Hyperbolic, p)?;
                let (phi, residual) = support.nearest_param(q);
                if residual > ON_BOUNDARY_TOL {
                    return Err(Error::NotOnBoundary { residual });
                }
                Ok(phi)
            }
            ConvexDisc::PolygonDisc { .. } => Err(Error::Unsupported(
                "smooth boundary parametrization of a polygon disc".into(),
            )),
        }
    }

    /// Arc length along the boundary between parameters, by adaptive
    /// quadrature of the metric line element.
    pub fn boundary_quadrature_length(&self, t0: f64, t1: f64, tol: f64) -> Result<f64> {
        match self {
            ConvexDisc::Circle { geometry, .. } => {
                let g = *geometry;
                let curve = |t: f64| {
                    self.boundary_point_velocity(t)
                        .expect("circle boundary is total")
                };
                curve_length(g, &curve, t0, t1, tol)
            }
            ConvexDisc::KleinSmooth { support } => {
                let curve = |t: f64| {
                    let p = support.boundary(t);
                    let v = support.boundary_velocity(t);
                    (Point::Planar(p), [v.x, v.y, 0.0])
                };
                curve_length(Geometry::Hyperbolic, &curve, t0, t1, tol)
            }
            ConvexDisc::PolygonDisc { .. } => Err(Error::Unsupported(
                "quadrature along a polygon boundary".into(),
            )),
        }
    }

    /// Length of the boundary arc from `p` to `q` in the given
    /// orientation. Both points must lie on the boundary.
    pub fn boundary_arc_length(
        &self,
        p: &Point,
        q: &Point,
        orientation: ArcOrientation,
    ) -> Result<f64> {
        if matches!(orientation, ArcOrientation::Full) {
            return Ok(self.perimeter());
        }
        match self {
            ConvexDisc::Circle {
                geometry, radius, ..
            } => {
                let tp = self.boundary_param_of(p)?;
                let tq = self.boundary_param_of(q)?;
                let swept = match orientation {
                    ArcOrientation::Ccw => (tq - tp).rem_euclid(std::f64::consts::TAU),
                    ArcOrientation::Cw => (tp - tq).rem_euclid(std::f64::consts::TAU),
                    ArcOrientation::Full => unreachable!(),
                };
                Ok(swept * geometry.circumference_factor(*radius))
            }
            ConvexDisc::KleinSmooth { .. } => {
                let tp = self.boundary_param_of(p)?;
                let tq = self.boundary_param_of(q)?;
                let (from, span) = match orientation {
                    ArcOrientation::Ccw => (tp, (tq - tp).rem_euclid(std::f64::consts::TAU)),
                    ArcOrientation::Cw => (tq, (tp - tq).rem_euclid(std::f64::consts::TAU)),
                    ArcOrientation::Full => unreachable!(),
                };
                self.boundary_quadrature_length(from, from + span, DEFAULT_TOL)
            }
            ConvexDisc::PolygonDisc { polygon } => {
                let arc = polygon.arc_param();
                let (_, _, sp) = arc.locate(p, ON_BOUNDARY_TOL)?;
                let (_, _, sq) = arc.locate(q, ON_BOUNDARY_TOL)?;
                let total = arc.total();
                Ok(match orientation {
                    ArcOrientation::Ccw => (sq - sp).rem_euclid(total),
                    ArcOrientation::Cw => (sp - sq).rem_euclid(total),
                    ArcOrientation::Full => unreachable!(),
                })
            }
        }
    }

    /// Geodesic curvature of the boundary at a boundary point.
    ///
    /// Circles have the classical values 1/r, coth ρ and cot r. For smooth
    /// Klein discs the point is translated to the origin, where the metric
    /// is Euclidean to second order, and the Euclidean curvature of the
    /// image curve is measured by central differences.
    pub fn geodesic_curvature(&self, p: &Point) -> Result<f64> {
        match self {
            ConvexDisc::Circle {
                geometry, radius, ..
            } => {
                self.boundary_param_of(p)?; // on-boundary check
                Ok(match geometry {
                    Geometry::Euclidean => 1.0 / radius,
                    Geometry::Hyperbolic => 1.0 / radius.tanh(),
                    Geometry::Spherical => 1.0 / radius.tan(),
                })
            }
            ConvexDisc::KleinSmooth { support } => {
                let phi0 = self.boundary_param_of(p)?;
                let anchor = Point::Planar(support.boundary(phi0));
                let to_origin = Isometry::to_origin(Geometry::Hyperbolic, &anchor)?;
                let image = |phi: f64| -> Vector2<f64> {
                    let q = to_origin
                        .apply(&Point::Planar(support.boundary(phi)))
                        .expect("boundary stays inside the disc");
                    match q {
                        Point::Planar(v) => v,
                        _ => unreachable!(),
                    }
                };
                // Five-point stencils; h balances truncation against the
                // 1/h² rounding amplification in the second derivative.
                let h = 1e-4;
                let c = [
                    image(phi0 - 2.0 * h),
                    image(phi0 - h),
                    image(phi0),
                    image(phi0 + h),
                    image(phi0 + 2.0 * h),
                ];
                let d1 = (c[0] - 8.0 * c[1] + 8.0 * c[3] - c[4]) / (12.0 * h);
                let d2 = (-c[0] + 16.0 * c[1] - 30.0 * c[2] + 16.0 * c[3] - c[4]) / (12.0 * h * h);
                let speed = d1.norm();
                if speed < 1e-12 {
                    return Err(Error::Numerical("stationary boundary point".into()));
                }
                Ok((d1.perp(&d2)).abs() / (speed * speed * speed))
            }
            ConvexDisc::PolygonDisc { .. } => Err(Error::Unsupported(
                "geodesic curvature of a polygon boundary".into(),
            )),
        }
    }

    /// Intersections of the boundary with the geodesic segment from `a` to
    /// `b`, sorted by arc-length fraction along the segment. Tangential
    /// contact is reported as a single flagged point.
    pub fn chord_intersections(&self, a: &Point, b: &Point) -> Result<Vec<ChordCrossing>> {
        let g = self.geometry();
        let chord_len = distance(g, a, b)?;
        if chord_len == 0.0 {
            return Err(Error::DegenerateGeodesic("chord endpoints coincide".into()));
        }
        let mut hits: Vec<ChordCrossing> = match self {
            ConvexDisc::Circle { geometry, .. } => match geometry {
                Geometry::Euclidean | Geometry::Hyperbolic => {
                    self.circle_chord_planar(a, b, chord_len)?
                }
                Geometry::Spherical => self.circle_chord_sphere(a, b, chord_len)?,
            },
            ConvexDisc::KleinSmooth { support } => {
                klein_smooth_chord(support, g, a, b, chord_len)?
            }
            ConvexDisc::PolygonDisc { polygon } => polygon_chord(polygon, a, b, chord_len)?,
        };
        hits.sort_by(|x, y| x.param.partial_cmp(&y.param).expect("finite params"));
        hits.dedup_by(|x, y| {
            if (x.param - y.param).abs() <= PARAM_DEDUP_TOL {
                y.tangential &= x.tangential;
                true
            } else {
                false
            }
        });
        Ok(hits)
    }

    fn circle_chord_planar(
        &self,
        a: &Point,
        b: &Point,
        chord_len: f64,
    ) -> Result<Vec<ChordCrossing>> {
        let g = self.geometry();
        let frame = self.center_frame()?;
        let radius = self.frame_radius();
        let qa = match frame.apply_inverse(a)? {
            Point::Planar(v) => v,
            _ => unreachable!(),
        };
        let qb = match frame.apply_inverse(b)? {
            Point::Planar(v) => v,
            _ => unreachable!(),
        };
        let d = qb - qa;
        let aa = d.norm_squared();
        let bb = 2.0 * qa.dot(&d);
        let cc = qa.norm_squared() - radius * radius;
        let u_star = -bb / (2.0 * aa);
        // h2 = R² - dist(line, center)²; tangency band on this residual.
        let h2 = u_star * u_star * aa - cc;
        let band = TANGENCY_TOL * radius.max(1e-3);
        let mut out = Vec::new();
        let slack = 1e-9;
        if h2 < -band {
            return Ok(out);
        }
        if h2 <= band {
            if (-slack..=1.0 + slack).contains(&u_star) {
                let u = u_star.clamp(0.0, 1.0);
                let point = frame.apply(&Point::Planar(qa + u * d))?;
                out.push(ChordCrossing {
                    point,
                    param: distance(g, a, &point)? / chord_len,
                    tangential: true,
                });
            }
            return Ok(out);
        }
        let half = (h2 / aa).sqrt();
        for u in [u_star - half, u_star + half] {
            if (-slack..=1.0 + slack).contains(&u) {
                let u = u.clamp(0.0, 1.0);
                let point = frame.apply(&Point::Planar(qa + u * d))?;
                out.push(ChordCrossing {
                    point,
                    param: distance(g, a, &point)? / chord_len,
                    tangential: false,
                });
            }
        }
        Ok(out)
    }

    fn circle_chord_sphere(
        &self,
        a: &Point,
        b: &Point,
        chord_len: f64,
    ) -> Result<Vec<ChordCrossing>> {
        let ConvexDisc::Circle {
            geometry,
            center,
            radius,
        } = self
        else {
            unreachable!()
        };
        let g = *geometry;
        let c = sphere_in(g, center)?;
        let va = sphere_in(g, a)?;
        let vb = sphere_in(g, b)?;
        let w = vb - va * va.dot(&vb);
        let w = w / w.norm();
        let (ca, cw) = (c.dot(&va), c.dot(&w));
        let amp = ca.hypot(cw);
        let mut out = Vec::new();
        if amp < 1e-15 {
            // Chord runs along a great circle equidistant from the center:
            // no transversal crossing.
            return Ok(out);
        }
        let ratio = radius.cos() / amp;
        if !(-1.0 - TANGENCY_TOL..=1.0 + TANGENCY_TOL).contains(&ratio) {
            return Ok(out);
        }
        let phi0 = cw.atan2(ca);
        let tangent = ratio.abs() >= 1.0 - TANGENCY_TOL;
        let delta = ratio.clamp(-1.0, 1.0).acos();
        let slack = 1e-9;
        let offsets: &[f64] = if tangent { &[0.0] } else { &[-1.0, 1.0] };
        for &sign in offsets {
            for k in [-1.0f64, 0.0, 1.0] {
                let s = phi0 + sign * delta + k * std::f64::consts::TAU;
                if s >= -slack && s <= chord_len + slack {
                    let s = s.clamp(0.0, chord_len);
                    let v = va * s.cos() + w * s.sin();
                    out.push(ChordCrossing {
                        point: Point::Spherical(v / v.norm()),
                        param: s / chord_len,
                        tangential: tangent,
                    });
                }
            }
        }
        Ok(out)
    }
}

fn klein_smooth_chord(
    support: &TrigSupport,
    g: Geometry,
    a: &Point,
    b: &Point,
    chord_len: f64,
) -> Result<Vec<ChordCrossing>> {
    let va = planar_in(g, a)?;
    let vb = planar_in(g, b)?;
    let residual = |u: f64| support.residual(va + u * (vb - va));
    let f0 = residual(0.0);
    let f1 = residual(1.0);
    // The support residual is convex along the segment, so a golden-section
    // minimum brackets the (at most two) sign changes.
    let (um, fm) = golden_min(residual, 0.0, 1.0, 1e-12);
    let band = TANGENCY_TOL;
    let mut out = Vec::new();
    let mut push = |u: f64, tangential: bool| -> Result<()> {
        let point = Point::Planar(va + u * (vb - va));
        out.push(ChordCrossing {
            point,
            param: distance(g, a, &point)? / chord_len,
            tangential,
        });
        Ok(())
    };
    if fm > band {
        return Ok(out);
    }
    if fm >= -band {
        push(um, true)?;
        return Ok(out);
    }
    if f0 > band {
        push(bisect(residual, 0.0, um, 1e-12)?, false)?;
    } else if f0 >= -band {
        push(0.0, false)?;
    }
    if f1 > band {
        push(bisect(residual, um, 1.0, 1e-12)?, false)?;
    } else if f1 >= -band {
        push(1.0, false)?;
    }
    Ok(out)
}

fn polygon_chord(
    polygon: &Polygon,
    a: &Point,
    b: &Point,
    chord_len: f64,
) -> Result<Vec<ChordCrossing>> {
    let g = polygon.geometry();
    let mut out = Vec::new();
    match g {
        Geometry::Euclidean | Geometry::Hyperbolic => {
            let va = planar_in(g, a)?;
            let vb = planar_in(g, b)?;
            for i in 0..polygon.len() {
                let (c, d) = polygon.edge(i);
                let vc = planar_in(g, &c)?;
                let vd = planar_in(g, &d)?;
                if let Some((u, _)) = planar_segment_intersection(va, vb, vc, vd, 1e-9) {
                    let point = Point::Planar(va + u * (vb - va));
                    out.push(ChordCrossing {
                        point,
                        param: distance(g, a, &point)? / chord_len,
                        tangential: false,
                    });
                }
            }
        }
        Geometry::Spherical => {
            let va = sphere_in(g, a)?;
            let vb = sphere_in(g, b)?;
            for i in 0..polygon.len() {
                let (c, d) = polygon.edge(i);
                let vc = sphere_in(g, &c)?;
                let vd = sphere_in(g, &d)?;
                if let Some((s, _, v)) = sphere_segment_intersection(va, vb, vc, vd, 1e-9) {
                    out.push(ChordCrossing {
                        point: Point::Spherical(v),
                        param: s / chord_len,
                        tangential: false,
                    });
                }
            }
        }
    }
    Ok(out)
}
