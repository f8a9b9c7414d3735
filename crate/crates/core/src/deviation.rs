//! Perimeter deviation between a convex disc and a convex polygon.
//!
//! `dev(K, P) = per(K ∪ P) - per(K ∩ P)`. For convex K and P every
//! boundary point of one set is on exactly one side of the other, so
//! `per(K ∪ P) = per(K) + per(P) - per(K ∩ P)` and the deviation reduces
//! to `per(K) + per(P) - 2·per(K ∩ P)`. The intersection perimeter comes
//! from an explicit decomposition of `∂(K ∩ P)` into polygon-edge portions
//! inside K alternating with boundary arcs of K inside P, so the possibly
//! non-convex union boundary never needs to be constructed. When the
//! interiors are disjoint the intersection is empty and the deviation
//! degenerates to `per(K) + per(P)`.

use crate::disc::{ArcOrientation, Containment, ConvexDisc, Polygon};
use crate::error::{Error, Result};
use crate::geometry::{distance, Point};

/// Tolerance on boundary coordinates (fractions of the polygon perimeter)
/// when merging near-duplicate crossings.
const CROSSING_DEDUP: f64 = 1e-9;

/// One piece of the boundary of K ∩ P.
#[derive(Clone, Debug)]
pub enum Piece {
    /// Portion of ∂P inside K: a crossing, any polygon vertices passed, and
    /// the next crossing, as a geodesic polyline.
    EdgeChain { points: Vec<Point> },
    /// Counter-clockwise arc of ∂K inside P.
    Arc { from: Point, to: Point },
    /// The whole boundary of K (the K ⊆ P case).
    FullBoundary,
}

/// How the two bodies sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overlap {
    /// Boundaries cross transversally.
    Crossing,
    /// P ⊆ K.
    PolygonInDisc,
    /// K ⊆ P.
    DiscInPolygon,
    /// Interiors are disjoint.
    Disjoint,
}

/// Ordered cyclic decomposition of ∂(K ∩ P).
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub pieces: Vec<Piece>,
    pub crossing_count: usize,
    pub overlap: Overlap,
    /// Length of ∂(K ∩ P), zero for disjoint interiors.
    pub intersection_perimeter: f64,
}

/// Deviation value together with the decomposition that produced it.
#[derive(Clone, Debug)]
pub struct DeviationResult {
    pub dev: f64,
    pub per_k: f64,
    pub per_p: f64,
    pub per_intersection: f64,
    pub decomposition: Decomposition,
}

/// A crossing of ∂P with ∂K, indexed by the arc-length coordinate along ∂P.
#[derive(Clone, Copy, Debug)]
struct Crossing {
    s: f64,
    point: Point,
}

/// Compute the cyclic decomposition of ∂(K ∩ P).
pub fn intersection_boundary(disc: &ConvexDisc, poly: &Polygon) -> Result<Decomposition> {
    if disc.geometry() != poly.geometry() {
        return Err(Error::GeometryMismatch {
            expected: disc.geometry(),
            got: poly.geometry(),
        });
    }
    let arc = poly.arc_param();
    let total = arc.total();

    let mut crossings: Vec<Crossing> = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        for hit in disc.chord_intersections(&a, &b)? {
            if hit.tangential {
                continue;
            }
            crossings.push(Crossing {
                s: arc.edge_position(i, hit.param),
                point: hit.point,
            });
        }
    }
    crossings.sort_by(|x, y| x.s.partial_cmp(&y.s).expect("finite"));
    dedup_cyclic(&mut crossings, CROSSING_DEDUP * total, total);

    if crossings.len() >= 2 {
        // Classify the portion of ∂P after each crossing, then drop
        // crossings that do not separate inside from outside (vertex
        // touches, duplicated near-tangencies).
        let mut inside: Vec<bool> = Vec::with_capacity(crossings.len());
        for j in 0..crossings.len() {
            let s0 = crossings[j].s;
            let s1 = if j + 1 < crossings.len() {
                crossings[j + 1].s
            } else {
                crossings[0].s + total
            };
            let mid = arc.point_at(0.5 * (s0 + s1))?;
            inside.push(disc.contains(&mid)? != Containment::Outside);
        }
        loop {
            let n = crossings.len();
            if n < 2 {
                break;
            }
            // Crossing j separates portion j-1 (before) from portion j.
            let spurious = (0..n).find(|&j| inside[(j + n - 1) % n] == inside[j]);
            match spurious {
                Some(j) => {
                    crossings.remove(j);
                    inside.remove(j);
                }
                None => break,
            }
        }
        if crossings.len() >= 2 {
            return build_crossing_decomposition(disc, poly, &crossings, &inside);
        }
    }

    containment_decomposition(disc, poly)
}

/// Deviation of the polygon from the disc.
pub fn dev(disc: &ConvexDisc, poly: &Polygon) -> Result<DeviationResult> {
    let decomposition = intersection_boundary(disc, poly)?;
    let per_k = disc.perimeter();
    let per_p = poly.perimeter();
    let per_intersection = decomposition.intersection_perimeter;
    Ok(DeviationResult {
        dev: per_k + per_p - 2.0 * per_intersection,
        per_k,
        per_p,
        per_intersection,
        decomposition,
    })
}

fn dedup_cyclic(crossings: &mut Vec<Crossing>, tol: f64, total: f64) {
    crossings.dedup_by(|b, a| (b.s - a.s).abs() <= tol);
    if crossings.len() >= 2 {
        let first = crossings[0].s;
        let last = crossings[crossings.len() - 1].s;
        if (first + total - last).abs() <= tol {
            crossings.pop();
        }
    }
}

fn build_crossing_decomposition(
    disc: &ConvexDisc,
    poly: &Polygon,
    crossings: &[Crossing],
    inside: &[bool],
) -> Result<Decomposition> {
    let arc = poly.arc_param();
    let total = arc.total();
    let n = crossings.len();
    let mut pieces = Vec::with_capacity(n);
    let mut per_int = 0.0;

    for j in 0..n {
        let from = crossings[j];
        let to = crossings[(j + 1) % n];
        if inside[j] {
            // Portion of ∂P inside K, possibly running through vertices.
            let span = (to.s - from.s).rem_euclid(total);
            let mut interior: Vec<(f64, Point)> = Vec::new();
            for k in 0..poly.len() {
                let rel = (arc.vertex_position(k) - from.s).rem_euclid(total);
                if rel > 0.0 && rel < span {
                    interior.push((rel, poly.vertex(k)));
                }
            }
            interior.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
            let mut chain = vec![from.point];
            chain.extend(interior.into_iter().map(|(_, p)| p));
            chain.push(to.point);
            for w in chain.windows(2) {
                per_int += distance(poly.geometry(), &w[0], &w[1])?;
            }
            pieces.push(Piece::EdgeChain { points: chain });
        } else {
            // ∂P is outside K here; ∂(K ∩ P) follows ∂K counter-clockwise
            // from the leave crossing to the re-entry crossing.
            let len = disc.boundary_arc_length(&from.point, &to.point, ArcOrientation::Ccw)?;
            per_int += len;
            pieces.push(Piece::Arc {
                from: from.point,
                to: to.point,
            });
        }
    }

    Ok(Decomposition {
        pieces,
        crossing_count: n,
        overlap: Overlap::Crossing,
        intersection_perimeter: per_int,
    })
}

fn containment_decomposition(disc: &ConvexDisc, poly: &Polygon) -> Result<Decomposition> {
    let polygon_in_disc = poly
        .vertices()
        .iter()
        .map(|v| disc.contains(v))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|c| *c != Containment::Outside);
    if polygon_in_disc {
        let pieces: Vec<Piece> = (0..poly.len())
            .map(|i| Piece::EdgeChain {
                points: vec![poly.vertex(i), poly.vertex(i + 1)],
            })
            .collect();
        return Ok(Decomposition {
            pieces,
            crossing_count: 0,
            overlap: Overlap::PolygonInDisc,
            intersection_perimeter: poly.perimeter(),
        });
    }

    let disc_in_polygon = boundary_probes(disc)?
        .iter()
        .map(|p| poly.contains(p, crate::disc::CONTAINS_TOL))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|c| *c != Containment::Outside);
    if disc_in_polygon {
        return Ok(Decomposition {
            pieces: vec![Piece::FullBoundary],
            crossing_count: 0,
            overlap: Overlap::DiscInPolygon,
            intersection_perimeter: disc.perimeter(),
        });
    }

    Ok(Decomposition {
        pieces: Vec::new(),
        crossing_count: 0,
        overlap: Overlap::Disjoint,
        intersection_perimeter: 0.0,
    })
}

/// A few boundary points of the disc; with no boundary crossings, K ⊆ P
/// holds exactly when they are all inside P.
fn boundary_probes(disc: &ConvexDisc) -> Result<Vec<Point>> {
    match disc {
        ConvexDisc::PolygonDisc { polygon } => Ok(polygon.vertices().to_vec()),
        _ => (0..4)
            .map(|j| disc.boundary_point(std::f64::consts::FRAC_PI_2 * j as f64))
            .collect(),
    }
}

/// Intersection perimeter computed from independent classification of both
/// boundaries (the ∂K-side route): the edge portions of ∂P inside K are
/// re-derived per edge, and the arcs of ∂K inside P are classified by
/// their own midpoints rather than taken from the ∂P walk.
pub fn per_intersection_dual(disc: &ConvexDisc, poly: &Polygon) -> Result<f64> {
    if disc.geometry() != poly.geometry() {
        return Err(Error::GeometryMismatch {
            expected: disc.geometry(),
            got: poly.geometry(),
        });
    }
    let g = poly.geometry();

    // Edge portions of ∂P inside K.
    let mut edge_len = 0.0;
    let mut crossing_points: Vec<Point> = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        let side = distance(g, &a, &b)?;
        let mut params = vec![0.0];
        for hit in disc.chord_intersections(&a, &b)? {
            if !hit.tangential {
                params.push(hit.param);
                crossing_points.push(hit.point);
            }
        }
        params.push(1.0);
        for w in params.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let mid = crate::geometry::geodesic_point(g, &a, &b, 0.5 * (w[0] + w[1]))?;
            if disc.contains(&mid)? != Containment::Outside {
                edge_len += (w[1] - w[0]) * side;
            }
        }
    }

    // Arcs of ∂K inside P.
    let arc_len = match disc {
        ConvexDisc::PolygonDisc { polygon: kp } => {
            let arc = kp.arc_param();
            let mut positions: Vec<f64> = crossing_points
                .iter()
                .map(|p| arc.locate(p, 1e-7).map(|(_, _, s)| s))
                .collect::<Result<_>>()?;
            positions.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            let total = arc.total();
            if positions.is_empty() {
                let probe = arc.point_at(0.0)?;
                if poly.contains(&probe, crate::disc::CONTAINS_TOL)? != Containment::Outside {
                    total
                } else {
                    0.0
                }
            } else {
                let mut sum = 0.0;
                let n = positions.len();
                for j in 0..n {
                    let s0 = positions[j];
                    let s1 = if j + 1 < n {
                        positions[j + 1]
                    } else {
                        positions[0] + total
                    };
                    let mid = arc.point_at(0.5 * (s0 + s1))?;
                    if poly.contains(&mid, crate::disc::CONTAINS_TOL)? != Containment::Outside {
                        sum += s1 - s0;
                    }
                }
                sum
            }
        }
        _ => {
            let mut params: Vec<f64> = crossing_points
                .iter()
                .map(|p| disc.boundary_param_of(p))
                .collect::<Result<_>>()?;
            params.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            if params.is_empty() {
                let probe = disc.boundary_point(0.0)?;
                if poly.contains(&probe, crate::disc::CONTAINS_TOL)? != Containment::Outside {
                    disc.perimeter()
                } else {
                    0.0
                }
            } else {
                let mut sum = 0.0;
                let n = params.len();
                for j in 0..n {
                    let t0 = params[j];
                    let t1 = if j + 1 < n {
                        params[j + 1]
                    } else {
                        params[0] + std::f64::consts::TAU
                    };
                    let mid = disc.boundary_point(0.5 * (t0 + t1))?;
                    if poly.contains(&mid, crate::disc::CONTAINS_TOL)? != Containment::Outside {
                        let p0 = disc.boundary_point(t0)?;
                        let p1 = disc.boundary_point(t1)?;
                        sum += disc.boundary_arc_length(&p0, &p1, ArcOrientation::Ccw)?;
                    }
                }
                sum
            }
        }
    };

    Ok(edge_len + arc_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::TrigSupport;
    use crate::geometry::Geometry;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, TAU};

    fn unit_circle() -> ConvexDisc {
        ConvexDisc::circle(Geometry::Euclidean, Point::planar(0.0, 0.0), 1.0).unwrap()
    }

    fn regular_inscribed(g: Geometry, circumradius: f64, n: usize) -> Polygon {
        let scale = match g {
            Geometry::Euclidean => circumradius,
            Geometry::Hyperbolic => circumradius.tanh(),
            Geometry::Spherical => unreachable!("use spherical_regular"),
        };
        let vertices = (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                Point::planar(scale * t.cos(), scale * t.sin())
            })
            .collect();
        Polygon::try_new(g, vertices).unwrap()
    }

    fn spherical_regular(circumradius: f64, n: usize) -> Polygon {
        let vertices = (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                Point::spherical(
                    circumradius.sin() * t.cos(),
                    circumradius.sin() * t.sin(),
                    circumradius.cos(),
                )
                .unwrap()
            })
            .collect();
        Polygon::try_new(Geometry::Spherical, vertices).unwrap()
    }

    #[test]
    fn polygon_inside_disc_decomposes_to_edges() {
        let k = unit_circle();
        let p = regular_inscribed(Geometry::Euclidean, 0.5, 4);
        let d = intersection_boundary(&k, &p).unwrap();
        assert_eq!(d.overlap, Overlap::PolygonInDisc);
        assert_eq!(d.crossing_count, 0);
        assert_eq!(d.pieces.len(), 4);
        assert_abs_diff_eq!(d.intersection_perimeter, p.perimeter(), epsilon = 1e-12);
    }

    #[test]
    fn disc_inside_polygon_decomposes_to_full_boundary() {
        let k = unit_circle();
        let p = regular_inscribed(Geometry::Euclidean, 3.0, 5);
        let d = intersection_boundary(&k, &p).unwrap();
        assert_eq!(d.overlap, Overlap::DiscInPolygon);
        assert!(matches!(d.pieces[..], [Piece::FullBoundary]));
        assert_abs_diff_eq!(d.intersection_perimeter, TAU, epsilon = 1e-12);
        let r = dev(&k, &p).unwrap();
        assert_abs_diff_eq!(r.dev, p.perimeter() - TAU, epsilon = 1e-10);
    }

    #[test]
    fn rotated_square_has_eight_crossings() {
        let k = unit_circle();
        let p = Polygon::try_new(
            Geometry::Euclidean,
            vec![
                Point::planar(1.2, 0.0),
                Point::planar(0.0, 1.2),
                Point::planar(-1.2, 0.0),
                Point::planar(0.0, -1.2),
            ],
        )
        .unwrap();
        let d = intersection_boundary(&k, &p).unwrap();
        assert_eq!(d.overlap, Overlap::Crossing);
        assert_eq!(d.crossing_count, 8);
        let edges = d
            .pieces
            .iter()
            .filter(|p| matches!(p, Piece::EdgeChain { .. }))
            .count();
        let arcs = d
            .pieces
            .iter()
            .filter(|p| matches!(p, Piece::Arc { .. }))
            .count();
        assert_eq!(edges, 4);
        assert_eq!(arcs, 4);
    }

    #[test]
    fn euclidean_inscribed_triangle_dev() {
        let k = unit_circle();
        let p = regular_inscribed(Geometry::Euclidean, 1.0, 3);
        let r = dev(&k, &p).unwrap();
        assert_abs_diff_eq!(r.dev, TAU - 3.0 * 3f64.sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(r.dev, 1.0870328844729542, epsilon = 1e-9);
    }

    #[test]
    fn hyperbolic_inscribed_triangle_dev() {
        let k = ConvexDisc::circle(
            Geometry::Hyperbolic,
            Point::origin(Geometry::Hyperbolic),
            1.0,
        )
        .unwrap();
        let p = regular_inscribed(Geometry::Hyperbolic, 1.0, 3);
        let side = (1f64.cosh().powi(2) + 0.5 * 1f64.sinh().powi(2)).acosh();
        let expected = TAU * 1f64.sinh() - 3.0 * side;
        let r = dev(&k, &p).unwrap();
        assert_abs_diff_eq!(r.dev, expected, epsilon = 1e-10);
    }

    #[test]
    fn spherical_concentric_triangle_dev_matches_closed_form() {
        let r = std::f64::consts::FRAC_PI_2 - 0.1;
        let k = ConvexDisc::circle(Geometry::Spherical, Point::origin(Geometry::Spherical), r)
            .unwrap();
        // Inscribed regular triangle: P ⊆ K, so dev = 2π sin r - 3 l.
        let p = spherical_regular(r, 3);
        let l = (r.cos().powi(2) + r.sin().powi(2) * (TAU / 3.0).cos()).acos();
        let expected = TAU * r.sin() - 3.0 * l;
        let got = dev(&k, &p).unwrap();
        assert_abs_diff_eq!(got.dev, expected, epsilon = 1e-10);
        assert!(got.dev > 0.019 && got.dev < 0.021, "dev = {}", got.dev);
    }

    #[test]
    fn identical_polygon_disc_has_zero_dev() {
        for g in [Geometry::Euclidean, Geometry::Hyperbolic] {
            let p = regular_inscribed(g, 0.8, 5);
            let k = ConvexDisc::polygon(p.clone());
            let r = dev(&k, &p).unwrap();
            assert_abs_diff_eq!(r.dev, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn disjoint_interiors_sum_perimeters() {
        let k = unit_circle();
        let p = Polygon::try_new(
            Geometry::Euclidean,
            vec![
                Point::planar(3.0, 0.0),
                Point::planar(4.0, 0.0),
                Point::planar(3.5, 1.0),
            ],
        )
        .unwrap();
        let r = dev(&k, &p).unwrap();
        assert_eq!(r.decomposition.overlap, Overlap::Disjoint);
        assert_abs_diff_eq!(r.dev, r.per_k + r.per_p, epsilon = 1e-12);
    }

    #[test]
    fn structural_identity_and_dual_route() {
        let k = unit_circle();
        let p = Polygon::try_new(
            Geometry::Euclidean,
            vec![
                Point::planar(1.5, -0.4),
                Point::planar(1.2, 0.9),
                Point::planar(-0.6, 0.7),
                Point::planar(-0.8, -0.8),
            ],
        )
        .unwrap();
        let r = dev(&k, &p).unwrap();
        assert_abs_diff_eq!(
            r.dev,
            r.per_k + r.per_p - 2.0 * r.per_intersection,
            epsilon = 1e-12
        );
        assert!(r.dev >= -1e-10);
        assert_eq!(r.decomposition.crossing_count % 2, 0);
        let dual = per_intersection_dual(&k, &p).unwrap();
        assert_abs_diff_eq!(r.per_intersection, dual, epsilon = 1e-9);
    }

    #[test]
    fn half_overlapping_circle_square_known_value() {
        // Square [0,2]×[-2,2] over the unit disc: K ∩ P is the right
        // half-disc, so per(K∩P) = π + 2.
        let k = unit_circle();
        let p = Polygon::try_new(
            Geometry::Euclidean,
            vec![
                Point::planar(0.0, -2.0),
                Point::planar(2.0, -2.0),
                Point::planar(2.0, 2.0),
                Point::planar(0.0, 2.0),
            ],
        )
        .unwrap();
        let r = dev(&k, &p).unwrap();
        assert_abs_diff_eq!(r.per_intersection, PI + 2.0, epsilon = 1e-9);
        assert_eq!(r.decomposition.crossing_count, 2);
    }

    #[test]
    fn inscribed_polygon_with_boundary_vertices_is_contained() {
        // Vertices exactly on ∂K: edges touch the boundary at their ends
        // but the cleanup pass must not leave crossings behind.
        let k = unit_circle();
        let p = regular_inscribed(Geometry::Euclidean, 1.0, 6);
        let d = intersection_boundary(&k, &p).unwrap();
        assert_eq!(d.overlap, Overlap::PolygonInDisc);
        assert_abs_diff_eq!(d.intersection_perimeter, p.perimeter(), epsilon = 1e-10);
    }

    #[test]
    fn klein_smooth_disc_against_crossing_square() {
        let k = ConvexDisc::klein_smooth(TrigSupport::new(0.5, vec![0.0, 0.1], vec![]).unwrap());
        let s = 0.45;
        let p = Polygon::try_new(
            Geometry::Hyperbolic,
            vec![
                Point::planar(s, s),
                Point::planar(-s, s),
                Point::planar(-s, -s),
                Point::planar(s, -s),
            ],
        )
        .unwrap();
        let r = dev(&k, &p).unwrap();
        assert!(r.dev > 0.0);
        let dual = per_intersection_dual(&k, &p).unwrap();
        assert_abs_diff_eq!(r.per_intersection, dual, epsilon = 1e-8);
    }

    #[test]
    fn geometry_mismatch_rejected() {
        let k = unit_circle();
        let p = regular_inscribed(Geometry::Hyperbolic, 0.5, 3);
        assert!(matches!(dev(&k, &p), Err(Error::GeometryMismatch { .. })));
    }
}
