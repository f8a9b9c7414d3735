//! Best-approximating polygons under perimeter deviation.
//!
//! Two searches are provided. `best_inscribed` keeps the vertices on the
//! disc boundary and maximizes the inscribed perimeter by cyclic coordinate
//! ascent, each vertex re-optimized on its boundary arc by golden-section
//! search; for a polygon inside the disc the deviation is
//! `per(K) - per(P)`, so maximal perimeter is minimal deviation.
//! `best_free` minimizes the deviation itself over free vertex coordinates
//! with a derivative-free simplex search; candidates that fail convexity,
//! orientation or hemisphere validity are rejected with an infinite
//! objective. Both are multi-start and fully determined by a 64-bit seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::deviation;
use crate::disc::{Containment, ConvexDisc, Polygon};
use crate::error::{Error, Result};
use crate::geometry::{distance, sphere_in, Geometry, Point};
use crate::scalar::{golden_max, golden_min};

/// Which vertex regime a report was produced under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Inscribed,
    Free,
}

/// Result of a polygon search.
#[derive(Clone, Debug)]
pub struct ApproxReport {
    pub best_polygon: Polygon,
    pub dev_value: f64,
    pub mode: Mode,
    /// Geodesic distance of each vertex to ∂K, positive outside the disc.
    pub vertex_signed_distances: Vec<f64>,
    pub starts: usize,
    pub converged: bool,
    /// Objective after every sweep (inscribed: perimeter, non-decreasing)
    /// or iteration (free: best deviation so far, non-increasing) of the
    /// winning restart.
    pub trace: Vec<f64>,
}

pub const INSCRIBED_STARTS: usize = 8;
pub const FREE_STARTS: usize = 16;
pub const DEFAULT_INSCRIBED_TOL: f64 = 1e-12;
pub const DEFAULT_FREE_TOL: f64 = 1e-10;

fn smooth_boundary_disc(disc: &ConvexDisc) -> Result<()> {
    match disc {
        ConvexDisc::PolygonDisc { .. } => Err(Error::Unsupported(
            "polygon approximation targets must have a smooth boundary".into(),
        )),
        _ => Ok(()),
    }
}

/// Geodesic distance from `p` to ∂K, positive outside K.
pub fn signed_boundary_distance(disc: &ConvexDisc, p: &Point) -> Result<f64> {
    match disc {
        ConvexDisc::Circle {
            geometry,
            center,
            radius,
        } => Ok(distance(*geometry, center, p)? - radius),
        ConvexDisc::KleinSmooth { .. } => {
            let g = Geometry::Hyperbolic;
            let metric = |t: f64| {
                let q = disc.boundary_point(t).expect("total parametrization");
                distance(g, p, &q).expect("interior points")
            };
            let mut best_t = 0.0;
            let mut best = f64::INFINITY;
            for j in 0..128 {
                let t = std::f64::consts::TAU * j as f64 / 128.0;
                let d = metric(t);
                if d < best {
                    best = d;
                    best_t = t;
                }
            }
            let w = std::f64::consts::TAU / 128.0;
            let (_, d) = golden_min(metric, best_t - w, best_t + w, 1e-12);
            let sign = match disc.contains_with_tol(p, 0.0)? {
                Containment::Outside => 1.0,
                _ => -1.0,
            };
            Ok(sign * d)
        }
        ConvexDisc::PolygonDisc { .. } => Err(Error::Unsupported(
            "signed distance to a polygon boundary".into(),
        )),
    }
}

/// Sorted boundary angles: one regular start plus random starts.
fn inscribed_starts(n: usize, starts: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(starts);
    let regular: Vec<f64> = (0..n)
        .map(|k| std::f64::consts::TAU * k as f64 / n as f64)
        .collect();
    out.push(regular);
    while out.len() < starts {
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let distinct = angles.windows(2).all(|w| w[1] - w[0] > 1e-3)
            && (angles[0] + std::f64::consts::TAU - angles[n - 1]) > 1e-3;
        if distinct {
            out.push(angles);
        }
    }
    out
}

fn polygon_from_angles(disc: &ConvexDisc, angles: &[f64]) -> Result<Polygon> {
    let vertices: Vec<Point> = angles
        .iter()
        .map(|&t| disc.boundary_point(t))
        .collect::<Result<_>>()?;
    Polygon::try_new(disc.geometry(), vertices)
}

fn inscribed_perimeter(disc: &ConvexDisc, angles: &[f64]) -> f64 {
    let g = disc.geometry();
    let n = angles.len();
    let pts: Vec<Point> = angles
        .iter()
        .map(|&t| disc.boundary_point(t).expect("boundary is total"))
        .collect();
    (0..n)
        .map(|i| distance(g, &pts[i], &pts[(i + 1) % n]).expect("valid points"))
        .sum()
}

struct AscentOutcome {
    angles: Vec<f64>,
    perimeter: f64,
    converged: bool,
    trace: Vec<f64>,
}

/// Cyclic coordinate ascent on boundary angles, maximizing the inscribed
/// perimeter until a full sweep gains less than `tol`.
fn coordinate_ascent(disc: &ConvexDisc, mut angles: Vec<f64>, tol: f64) -> AscentOutcome {
    let g = disc.geometry();
    let n = angles.len();
    let max_sweeps = 400;
    let mut per = inscribed_perimeter(disc, &angles);
    let mut trace = vec![per];
    let mut converged = false;
    for _ in 0..max_sweeps {
        for i in 0..n {
            let prev = if i == 0 {
                angles[n - 1] - std::f64::consts::TAU
            } else {
                angles[i - 1]
            };
            let next = if i == n - 1 {
                angles[0] + std::f64::consts::TAU
            } else {
                angles[i + 1]
            };
            let vp = disc
                .boundary_point(prev)
                .expect("boundary parametrization is total");
            let vn = disc.boundary_point(next).expect("total");
            let local = |t: f64| {
                let v = disc.boundary_point(t).expect("total");
                distance(g, &vp, &v).expect("valid") + distance(g, &v, &vn).expect("valid")
            };
            let current = local(angles[i]);
            let margin = 1e-7 * (next - prev);
            let (t_best, f_best) = golden_max(local, prev + margin, next - margin, 1e-12);
            if f_best > current {
                angles[i] = t_best;
            }
        }
        let new_per = inscribed_perimeter(disc, &angles);
        trace.push(new_per);
        let gain = new_per - per;
        per = new_per;
        if gain.abs() < tol {
            converged = true;
            break;
        }
    }
    AscentOutcome {
        angles,
        perimeter: per,
        converged,
        trace,
    }
}

/// Collapse adjacent vertices that met during the search ("at most n"
/// semantics), keeping the polygon valid.
fn collapse_angles(mut angles: Vec<f64>) -> Vec<f64> {
    let mut i = 0;
    while angles.len() > 3 && i < angles.len() {
        let n = angles.len();
        let a = angles[i];
        let b = angles[(i + 1) % n];
        let gap = (b - a).rem_euclid(std::f64::consts::TAU);
        if gap < 1e-9 {
            angles.remove((i + 1) % n);
        } else {
            i += 1;
        }
    }
    angles
}

/// Best inscribed n-gon: vertices constrained to ∂K, perimeter maximized
/// by multi-start cyclic coordinate ascent.
pub fn best_inscribed(disc: &ConvexDisc, n: usize, seed: u64, tol: f64) -> Result<ApproxReport> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "polygon needs n >= 3 vertices, got {n}"
        )));
    }
    smooth_boundary_disc(disc)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts = inscribed_starts(n, INSCRIBED_STARTS, &mut rng);
    let outcomes: Vec<AscentOutcome> = starts
        .into_par_iter()
        .map(|angles| coordinate_ascent(disc, angles, tol))
        .collect();
    let best = outcomes
        .into_iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| {
            a.perimeter
                .partial_cmp(&b.perimeter)
                .expect("finite")
                .then(j.cmp(i))
        })
        .map(|(_, o)| o)
        .expect("at least one start");

    let angles = collapse_angles(best.angles);
    let poly = polygon_from_angles(disc, &angles)?;
    let result = deviation::dev(disc, &poly)?;
    let vertex_signed_distances = poly
        .vertices()
        .iter()
        .map(|v| signed_boundary_distance(disc, v))
        .collect::<Result<_>>()?;
    Ok(ApproxReport {
        best_polygon: poly,
        dev_value: result.dev,
        mode: Mode::Inscribed,
        vertex_signed_distances,
        starts: INSCRIBED_STARTS,
        converged: best.converged,
        trace: best.trace,
    })
}

/// Chart between vertex coordinate vectors and polygons. On the sphere the
/// vertices live in the exponential chart at the disc center.
struct VertexChart {
    geometry: Geometry,
    sphere_frame: Option<(
        nalgebra::Vector3<f64>,
        nalgebra::Vector3<f64>,
        nalgebra::Vector3<f64>,
    )>,
}

impl VertexChart {
    fn for_disc(disc: &ConvexDisc) -> Result<VertexChart> {
        let geometry = disc.geometry();
        let sphere_frame = match geometry {
            Geometry::Spherical => {
                let c = sphere_in(geometry, &disc.interior_point())?;
                let helper = if c.z.abs() < 0.9 {
                    nalgebra::Vector3::new(0.0, 0.0, 1.0)
                } else {
                    nalgebra::Vector3::new(1.0, 0.0, 0.0)
                };
                let e1 = (helper - c * c.dot(&helper)).normalize();
                let e2 = c.cross(&e1);
                Some((c, e1, e2))
            }
            _ => None,
        };
        Ok(VertexChart {
            geometry,
            sphere_frame,
        })
    }

    fn pack(&self, points: &[Point]) -> Vec<f64> {
        let mut x = Vec::with_capacity(2 * points.len());
        for p in points {
            match (self.geometry, p) {
                (Geometry::Spherical, Point::Spherical(v)) => {
                    let (c, e1, e2) = self.sphere_frame.expect("spherical chart");
                    let theta = v.cross(&c).norm().atan2(v.dot(&c));
                    let t = v - c * c.dot(v);
                    let (u1, u2) = if t.norm() < 1e-15 {
                        (0.0, 0.0)
                    } else {
                        let t = t / t.norm();
                        (theta * t.dot(&e1), theta * t.dot(&e2))
                    };
                    x.push(u1);
                    x.push(u2);
                }
                (_, Point::Planar(v)) => {
                    x.push(v.x);
                    x.push(v.y);
                }
                _ => unreachable!("chart matches geometry"),
            }
        }
        x
    }

    fn unpack(&self, x: &[f64]) -> Result<Vec<Point>> {
        let mut points = Vec::with_capacity(x.len() / 2);
        for pair in x.chunks_exact(2) {
            match self.geometry {
                Geometry::Spherical => {
                    let (c, e1, e2) = self.sphere_frame.expect("spherical chart");
                    let theta = pair[0].hypot(pair[1]);
                    if theta >= std::f64::consts::PI {
                        return Err(Error::Domain("chart coordinate out of range".into()));
                    }
                    let v = if theta == 0.0 {
                        c
                    } else {
                        let dir = (e1 * pair[0] + e2 * pair[1]) / theta;
                        c * theta.cos() + dir * theta.sin()
                    };
                    points.push(Point::Spherical(v / v.norm()));
                }
                _ => points.push(Point::planar(pair[0], pair[1])),
            }
        }
        Ok(points)
    }
}

/// Model-scale of the disc, used to size simplex steps and perturbations.
fn chart_scale(disc: &ConvexDisc) -> f64 {
    match disc {
        ConvexDisc::Circle {
            geometry, radius, ..
        } => match geometry {
            Geometry::Euclidean => *radius,
            Geometry::Hyperbolic => radius.tanh(),
            Geometry::Spherical => *radius,
        },
        ConvexDisc::KleinSmooth { support } => support.h(0.0).abs().max(0.1),
        ConvexDisc::PolygonDisc { .. } => 1.0,
    }
}

struct SimplexOutcome {
    x: Vec<f64>,
    value: f64,
    converged: bool,
    trace: Vec<f64>,
}

/// Nelder-Mead on the vertex chart. The objective is guarded: it returns
/// +∞ for invalid polygons, so the simplex simply backs away from them.
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    step: f64,
    tol: f64,
    max_iter: usize,
) -> SimplexOutcome {
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for j in 0..dim {
        let mut v = x0.to_vec();
        v[j] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut trace = Vec::new();
    let mut converged = false;

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("no NaN objective"));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];
        trace.push(values[best]);

        if values[best].is_finite()
            && values[worst].is_finite()
            && (values[worst] - values[best]).abs() < tol
        {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; dim];
        for &i in order.iter().take(dim) {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v / dim as f64;
            }
        }
        let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
        };

        let reflected = blend(&centroid, &simplex[worst], -1.0);
        let fr = f(&reflected);
        if fr < values[best] {
            let expanded = blend(&centroid, &simplex[worst], -2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let contracted = if fr < values[worst] {
                blend(&centroid, &simplex[worst], -0.5)
            } else {
                blend(&centroid, &simplex[worst], 0.5)
            };
            let fc = f(&contracted);
            if fc < values[worst].min(fr) {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                // Shrink towards the best vertex.
                let anchor = simplex[best].clone();
                for i in 0..=dim {
                    if i == best {
                        continue;
                    }
                    simplex[i] = blend(&anchor, &simplex[i], 0.5);
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let (best_idx, _) = values
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).expect("no NaN"))
        .expect("non-empty simplex");
    SimplexOutcome {
        x: simplex[best_idx].clone(),
        value: values[best_idx],
        converged,
        trace,
    }
}

/// Best n-gon with free vertices: minimizes dev(K, P) over 2n chart
/// coordinates with multi-start Nelder-Mead, warm-started from the
/// inscribed optimum.
pub fn best_free(disc: &ConvexDisc, n: usize, seed: u64, tol: f64) -> Result<ApproxReport> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "polygon needs n >= 3 vertices, got {n}"
        )));
    }
    smooth_boundary_disc(disc)?;
    let chart = VertexChart::for_disc(disc)?;
    let scale = chart_scale(disc);

    let objective = |x: &[f64]| -> f64 {
        let Ok(points) = chart.unpack(x) else {
            return f64::INFINITY;
        };
        let Ok(poly) = Polygon::try_new(disc.geometry(), points) else {
            return f64::INFINITY;
        };
        match deviation::dev(disc, &poly) {
            Ok(r) => r.dev,
            Err(_) => f64::INFINITY,
        }
    };

    let inscribed = best_inscribed(disc, n, seed, DEFAULT_INSCRIBED_TOL)?;
    let warm = chart.pack(inscribed.best_polygon.vertices());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<Vec<f64>> = vec![warm.clone()];
    while starts.len() < FREE_STARTS / 2 {
        let jitter: Vec<f64> = warm
            .iter()
            .map(|x| x + 0.02 * scale * rng.gen_range(-1.0..1.0))
            .collect();
        starts.push(jitter);
    }
    while starts.len() < FREE_STARTS {
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let ok = angles.windows(2).all(|w| w[1] - w[0] > 0.05)
            && angles[0] + std::f64::consts::TAU - angles[n - 1] > 0.05;
        if !ok {
            continue;
        }
        if let Ok(p) = polygon_from_angles(disc, &angles) {
            starts.push(chart.pack(p.vertices()));
        }
    }

    let max_iter = 2000 * n;
    let outcomes: Vec<SimplexOutcome> = starts
        .into_par_iter()
        .map(|x0| nelder_mead(&objective, &x0, 0.05 * scale, tol, max_iter))
        .collect();
    let best = outcomes
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| {
            a.value
                .partial_cmp(&b.value)
                .expect("finite")
                .then(i.cmp(j))
        })
        .map(|(_, o)| o)
        .expect("at least one start");

    if !best.value.is_finite() {
        return Err(Error::Numerical(
            "free search found no valid polygon".into(),
        ));
    }
    let poly = Polygon::try_new(disc.geometry(), chart.unpack(&best.x)?)?;
    let result = deviation::dev(disc, &poly)?;
    let vertex_signed_distances = poly
        .vertices()
        .iter()
        .map(|v| signed_boundary_distance(disc, v))
        .collect::<Result<_>>()?;
    Ok(ApproxReport {
        best_polygon: poly,
        dev_value: result.dev,
        mode: Mode::Free,
        vertex_signed_distances,
        starts: FREE_STARTS,
        converged: best.converged,
        trace: best.trace,
    })
}

/// One row of a Dowker table.
#[derive(Clone, Copy, Debug)]
pub struct DowkerRow {
    pub n: usize,
    /// Maximal inscribed perimeter p(n).
    pub inscribed_perimeter: f64,
    /// δ(n) = per(K) - p(n), the minimal deviation over inscribed n-gons.
    pub delta: f64,
    /// Second difference p(n+1) - 2p(n) + p(n-1), for interior n.
    pub d2_perimeter: Option<f64>,
    /// Second difference of δ(n), reported without a sign assertion.
    pub d2_delta: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct DowkerTable {
    pub disc_perimeter: f64,
    pub rows: Vec<DowkerRow>,
}

/// Maximal inscribed perimeter and minimal inscribed deviation for each
/// n in [n_min, n_max], with second differences of both sequences.
pub fn dowker_table(
    disc: &ConvexDisc,
    n_min: usize,
    n_max: usize,
    seed: u64,
) -> Result<DowkerTable> {
    if !(3..=12).contains(&n_min) || !(3..=12).contains(&n_max) || n_min >= n_max {
        return Err(Error::InvalidArgument(format!(
            "need 3 <= n_min < n_max <= 12, got [{n_min}, {n_max}]"
        )));
    }
    let per_k = disc.perimeter();
    let perims: Vec<f64> = (n_min..=n_max)
        .map(|n| {
            best_inscribed(disc, n, seed, DEFAULT_INSCRIBED_TOL)
                .map(|r| r.best_polygon.perimeter())
        })
        .collect::<Result<_>>()?;
    let rows = (0..perims.len())
        .map(|i| {
            let d2 = (i > 0 && i + 1 < perims.len())
                .then(|| perims[i + 1] - 2.0 * perims[i] + perims[i - 1]);
            DowkerRow {
                n: n_min + i,
                inscribed_perimeter: perims[i],
                delta: per_k - perims[i],
                d2_perimeter: d2,
                // δ = per(K) - p is affine in p, so Δ²δ = -Δ²p.
                d2_delta: d2.map(|v| -v),
            }
        })
        .collect();
    Ok(DowkerTable {
        disc_perimeter: per_k,
        rows,
    })
}
