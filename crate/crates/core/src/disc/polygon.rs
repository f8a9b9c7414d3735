//! Geodesically convex polygons in the three models.
//!
//! In the Euclidean plane and the Klein disc geodesic convexity coincides
//! with Euclidean convexity of the vertex polygon; on the sphere a convex
//! polygon must lie in an open hemisphere and keep every vertex on the
//! inner side of every edge's great circle.

use nalgebra::{Vector2, Vector3};

use crate::error::{Error, Result};
use crate::geometry::{distance, geodesic_point, planar_in, sphere_in, Geometry, Point};

use super::Containment;

/// An ordered, counter-clockwise, strictly convex polygon with at least
/// three pairwise-distinct consecutive vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    geometry: Geometry,
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn try_new(geometry: Geometry, vertices: Vec<Point>) -> Result<Polygon> {
        if vertices.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let n = vertices.len();
        match geometry {
            Geometry::Euclidean | Geometry::Hyperbolic => {
                let vs: Vec<Vector2<f64>> = vertices
                    .iter()
                    .map(|p| planar_in(geometry, p))
                    .collect::<Result<_>>()?;
                for i in 0..n {
                    let a = vs[i];
                    let b = vs[(i + 1) % n];
                    let c = vs[(i + 2) % n];
                    if (b - a).norm() < 1e-14 {
                        return Err(Error::Domain("consecutive vertices coincide".into()));
                    }
                    let cross = (b - a).perp(&(c - b));
                    if cross <= 0.0 {
                        return Err(Error::Domain(format!(
                            "vertices are not in strictly convex counter-clockwise position \
                             (turn {cross:e} at vertex {})",
                            (i + 1) % n
                        )));
                    }
                }
            }
            Geometry::Spherical => {
                let vs: Vec<Vector3<f64>> = vertices
                    .iter()
                    .map(|p| sphere_in(geometry, p))
                    .collect::<Result<_>>()?;
                let mut centre = Vector3::zeros();
                for v in &vs {
                    centre += v;
                }
                if centre.norm() < 1e-12 {
                    return Err(Error::Domain("polygon not in an open hemisphere".into()));
                }
                centre /= centre.norm();
                for (i, v) in vs.iter().enumerate() {
                    if centre.dot(v) <= 0.0 {
                        return Err(Error::Domain(format!(
                            "vertex {i} leaves the open hemisphere of the polygon"
                        )));
                    }
                }
                for i in 0..n {
                    let a = vs[i];
                    let b = vs[(i + 1) % n];
                    let pole = a.cross(&b);
                    if pole.norm() < 1e-14 {
                        return Err(Error::Domain(
                            "consecutive vertices coincide or are antipodal".into(),
                        ));
                    }
                    let pole = pole / pole.norm();
                    for (j, w) in vs.iter().enumerate() {
                        if j == i || j == (i + 1) % n {
                            continue;
                        }
                        if pole.dot(w) <= 0.0 {
                            return Err(Error::Domain(format!(
                                "vertices are not in strictly convex counter-clockwise \
                                 position (vertex {j} beyond edge {i})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Polygon { geometry, vertices })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge i runs from vertex i to vertex i+1 (cyclically).
    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn side_length(&self, i: usize) -> f64 {
        let (a, b) = self.edge(i);
        distance(self.geometry, &a, &b).expect("validated vertices")
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.len()).map(|i| self.side_length(i)).sum()
    }

    /// An interior point: planar vertex mean, or the normalized vertex sum
    /// on the sphere.
    pub fn interior_point(&self) -> Point {
        match self.geometry {
            Geometry::Euclidean | Geometry::Hyperbolic => {
                let mut c = Vector2::zeros();
                for p in &self.vertices {
                    c += planar_in(self.geometry, p).expect("validated");
                }
                Point::Planar(c / self.vertices.len() as f64)
            }
            Geometry::Spherical => {
                let mut c = Vector3::zeros();
                for p in &self.vertices {
                    c += sphere_in(self.geometry, p).expect("validated");
                }
                Point::Spherical(c / c.norm())
            }
        }
    }

    /// Classify a point against the polygon with boundary band `tol`,
    /// measured as distance to the nearest edge geodesic.
    pub fn contains(&self, p: &Point, tol: f64) -> Result<Containment> {
        let m = self.signed_edge_distance(p)?;
        Ok(if m > tol {
            Containment::Inside
        } else if m < -tol {
            Containment::Outside
        } else {
            Containment::Boundary
        })
    }

    /// Minimum over edges of the signed distance to the edge geodesic,
    /// positive on the interior side. Positive iff strictly inside.
    pub fn signed_edge_distance(&self, p: &Point) -> Result<f64> {
        let n = self.len();
        match self.geometry {
            Geometry::Euclidean | Geometry::Hyperbolic => {
                let q = planar_in(self.geometry, p)?;
                let mut min = f64::INFINITY;
                for i in 0..n {
                    let a = planar_in(self.geometry, &self.vertex(i))?;
                    let b = planar_in(self.geometry, &self.vertex(i + 1))?;
                    let e = b - a;
                    min = min.min(e.perp(&(q - a)) / e.norm());
                }
                Ok(min)
            }
            Geometry::Spherical => {
                let q = sphere_in(self.geometry, p)?;
                let mut min = f64::INFINITY;
                for i in 0..n {
                    let a = sphere_in(self.geometry, &self.vertex(i))?;
                    let b = sphere_in(self.geometry, &self.vertex(i + 1))?;
                    let pole = a.cross(&b);
                    let pole = pole / pole.norm();
                    min = min.min(pole.dot(&q).clamp(-1.0, 1.0).asin());
                }
                Ok(min)
            }
        }
    }

    /// Arc-length parametrization of the boundary.
    pub fn arc_param(&self) -> PolygonArc<'_> {
        let mut cum = Vec::with_capacity(self.len() + 1);
        cum.push(0.0);
        let mut total = 0.0;
        for i in 0..self.len() {
            total += self.side_length(i);
            cum.push(total);
        }
        PolygonArc { poly: self, cum }
    }
}

/// Cumulative arc-length view of a polygon boundary.
pub struct PolygonArc<'a> {
    poly: &'a Polygon,
    cum: Vec<f64>,
}

impl PolygonArc<'_> {
    pub fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// Arc-length position of vertex `i`.
    pub fn vertex_position(&self, i: usize) -> f64 {
        self.cum[i % self.poly.len()]
    }

    /// Arc-length position of the point at fraction `u` along edge `i`.
    pub fn edge_position(&self, i: usize, u: f64) -> f64 {
        let i = i % self.poly.len();
        self.cum[i] + u * (self.cum[i + 1] - self.cum[i])
    }

    /// Boundary point at arc length `s` (taken modulo the perimeter).
    pub fn point_at(&self, s: f64) -> Result<Point> {
        let total = self.total();
        let s = s.rem_euclid(total);
        // Last index with cum[i] <= s.
        let i = match self
            .cum
            .binary_search_by(|c| c.partial_cmp(&s).expect("finite"))
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let i = i.min(self.poly.len() - 1);
        let (a, b) = self.poly.edge(i);
        let seg = self.cum[i + 1] - self.cum[i];
        let t = ((s - self.cum[i]) / seg).clamp(0.0, 1.0);
        if t == 0.0 {
            return Ok(a);
        }
        geodesic_point(self.poly.geometry(), &a, &b, t)
    }

    /// Locate a boundary point: returns (edge index, fraction along edge,
    /// arc-length position). Errors if `p` is farther than `tol` from the
    /// boundary.
    pub fn locate(&self, p: &Point, tol: f64) -> Result<(usize, f64, f64)> {
        let g = self.poly.geometry();
        let mut best: Option<(usize, f64, f64, f64)> = None;
        for i in 0..self.poly.len() {
            let (a, b) = self.poly.edge(i);
            let side = distance(g, &a, &b)?;
            let da = distance(g, &a, p)?;
            let db = distance(g, &b, p)?;
            // Residual of the triangle inequality measures off-edge error
            // in every geometry.
            let residual = da + db - side;
            let u = (da / side).clamp(0.0, 1.0);
            if best.map_or(true, |(.., r)| residual < r) {
                best = Some((i, u, self.edge_position(i, u), residual));
            }
        }
        let (i, u, s, residual) = best.expect("polygon has edges");
        if residual > tol {
            return Err(Error::NotOnBoundary { residual });
        }
        Ok((i, u, s))
    }
}

/// Intersection of the geodesic segments `a..b` and `c..d` in planar
/// geometry: parameters (u, w) on each segment. Parallel or collinear pairs
/// yield `None`.
pub(crate) fn planar_segment_intersection(
    a: Vector2<f64>,
    b: Vector2<f64>,
    c: Vector2<f64>,
    d: Vector2<f64>,
    slack: f64,
) -> Option<(f64, f64)> {
    let r = b - a;
    let s = d - c;
    let denom = r.perp(&s);
    if denom.abs() < 1e-15 * r.norm() * s.norm() {
        return None;
    }
    let q = c - a;
    let u = q.perp(&s) / denom;
    let w = q.perp(&r) / denom;
    if u < -slack || u > 1.0 + slack || w < -slack || w > 1.0 + slack {
        return None;
    }
    Some((u.clamp(0.0, 1.0), w.clamp(0.0, 1.0)))
}

/// Intersection of two great-circle segments on the sphere: parameters
/// (arc length along a..b, arc length along c..d).
pub(crate) fn sphere_segment_intersection(
    a: Vector3<f64>,
    b: Vector3<f64>,
    c: Vector3<f64>,
    d: Vector3<f64>,
    slack: f64,
) -> Option<(f64, f64, Vector3<f64>)> {
    let n1 = a.cross(&b);
    let n2 = c.cross(&d);
    let dir = n1.cross(&n2);
    if dir.norm() < 1e-15 {
        return None;
    }
    let dir = dir / dir.norm();
    for v in [dir, -dir] {
        let s1 = arc_position(a, b, v);
        let s2 = arc_position(c, d, v);
        let l1 = a.cross(&b).norm().atan2(a.dot(&b));
        let l2 = c.cross(&d).norm().atan2(c.dot(&d));
        if s1 >= -slack && s1 <= l1 + slack && s2 >= -slack && s2 <= l2 + slack {
            return Some((s1.clamp(0.0, l1), s2.clamp(0.0, l2), v));
        }
    }
    None
}

/// Signed arc-length coordinate of `v` along the great circle through a, b
/// (0 at a, increasing towards b). `v` must lie on that great circle.
pub(crate) fn arc_position(a: Vector3<f64>, b: Vector3<f64>, v: Vector3<f64>) -> f64 {
    let w = b - a * a.dot(&b);
    let w = w / w.norm();
    v.dot(&w).atan2(v.dot(&a))
}
