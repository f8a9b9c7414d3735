//! Adaptive Gauss-Kronrod quadrature and metric arc length.
//!
//! Arc lengths are integrals of the metric speed of a parametric curve;
//! the curve supplies positions and parameter velocities, the geometry
//! supplies the line element (see [`crate::geometry::metric_speed`]).

use crate::error::{Error, Result};
use crate::geometry::{metric_speed, Geometry, Point};

/// Default absolute tolerance for arc-length quadrature.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A parametric curve with analytic velocity. Velocities use three
/// components; planar curves leave the third at zero.
pub trait ParametricCurve {
    fn eval(&self, t: f64) -> (Point, [f64; 3]);
}

impl<F> ParametricCurve for F
where
    F: Fn(f64) -> (Point, [f64; 3]),
{
    fn eval(&self, t: f64) -> (Point, [f64; 3]) {
        self(t)
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One G7/K15 evaluation on [a, b]: returns (kronrod, |kronrod - gauss|).
fn gk15<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(mid - dx)? + f(mid + dx)?;
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    Ok((kronrod, (kronrod - gauss).abs()))
}

fn adaptive<F: Fn(f64) -> Result<f64>>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let (value, err) = gk15(f, a, b)?;
    if err <= tol || depth >= 48 {
        if depth >= 48 && err > tol.max(1e-14) {
            return Err(Error::Numerical(format!(
                "quadrature failed to reach tolerance {tol:e} on [{a}, {b}] (err {err:e})"
            )));
        }
        return Ok(value);
    }
    let mid = 0.5 * (a + b);
    Ok(adaptive(f, a, mid, 0.5 * tol, depth + 1)? + adaptive(f, mid, b, 0.5 * tol, depth + 1)?)
}

/// Definite integral of `f` on [a, b] to absolute tolerance `tol` by
/// bisected Gauss-Kronrod quadrature.
pub fn integrate<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument("non-finite interval".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    adaptive(&f, a, b, tol.max(1e-15), 0)
}

/// Arc length of `curve` over [t0, t1] in the metric of `g`, to absolute
/// tolerance `tol` (pass [`DEFAULT_TOL`] when in doubt).
///
/// Fails with a domain error if the curve leaves the model domain.
pub fn curve_length<C: ParametricCurve>(
    g: Geometry,
    curve: &C,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<f64> {
    integrate(
        |t| {
            let (p, v) = curve.eval(t);
            metric_speed(g, &p, &v)
        },
        t0,
        t1,
        tol,
    )
}
