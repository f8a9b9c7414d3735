//! Regular spherical triangles concentric with a spherical circle.
//!
//! For a circle K(r) centred at the pole and the concentric regular
//! triangle T(d) of circumradius d, the perimeter deviation has the closed
//! form
//!
//! ```text
//! f(r, d) = 6 (2 α sin r - 2 s + l/2) - 2π sin r
//! ```
//!
//! built from the spherical trigonometry of the configuration: the side
//! length l, the inradius m, the arc s of the side between its circle
//! crossing and its midpoint, and the central angle α subtended by that
//! arc. Scanning f over d exhibits a minimum strictly between the
//! inscribed member (d = r) and the circumscribed one (m(d) = r): the best
//! approximating triangle is neither inscribed nor circumscribed.

use crate::disc::Polygon;
use crate::error::{Error, Result};
use crate::geometry::{Geometry, Point};
use crate::scalar::{bisect, golden_min};

/// Scan configuration: circle radius, circumradius interval and grid size.
#[derive(Clone, Copy, Debug)]
pub struct CexConfig {
    pub r: f64,
    pub d_min: f64,
    pub d_max: f64,
    pub steps: usize,
}

impl CexConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Domain(format!(
                "circle radius must be in (0, π/2): {}",
                self.r
            )));
        }
        if self.d_min < self.r - 1e-12 {
            return Err(Error::Domain(format!(
                "scan starts below the inscribed member: d_min = {} < r = {}",
                self.d_min, self.r
            )));
        }
        if !(self.d_min < self.d_max && self.d_max < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Domain(format!(
                "need d_min < d_max < π/2, got [{}, {}]",
                self.d_min, self.d_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidArgument("need at least 2 scan steps".into()));
        }
        Ok(())
    }
}

/// Trigonometric data of one triangle of the family.
#[derive(Clone, Copy, Debug)]
pub struct TriangleMetrics {
    /// Side length.
    pub l: f64,
    /// Inradius.
    pub m: f64,
    /// Arc of the side between the circle crossing and the side midpoint.
    pub s: f64,
    /// Central angle between the side midpoint and the crossing.
    pub alpha: f64,
    /// Perimeter deviation of T(d) from K(r).
    pub f: f64,
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Side length of the regular triangle of circumradius `d`.
pub fn side_length(d: f64) -> f64 {
    let c = d.cos().powi(2) + d.sin().powi(2) * (2.0 * std::f64::consts::PI / 3.0).cos();
    clamp_unit(c).acos()
}

/// Inradius of the regular triangle of circumradius `d`.
pub fn inradius(d: f64) -> f64 {
    let d_cos = d.cos();
    let half_side_cos = (side_length(d) / 2.0).cos();
    clamp_unit(d_cos / half_side_cos).acos()
}

/// Deviation in the circumscribed regime (the side clears the circle):
/// per(T) - per(K) = 3l - 2π sin r.
pub fn circumscribed_f(r: f64, d: f64) -> f64 {
    3.0 * side_length(d) - std::f64::consts::TAU * r.sin()
}

/// All five quantities for the triangle T(d) against K(r).
///
/// Requires r ≤ d and m(d) ≤ r (the side must meet the circle); when the
/// inradius exceeds r the configuration has become circumscribed and a
/// regime error carrying both radii is returned — the caller should use
/// [`circumscribed_f`] there.
pub fn metrics(r: f64, d: f64) -> Result<TriangleMetrics> {
    if !(r > 0.0 && r < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!("radius out of (0, π/2): {r}")));
    }
    if d < r - 1e-12 || d >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!(
            "circumradius must satisfy r <= d < π/2: d = {d}, r = {r}"
        )));
    }
    let l = side_length(d);
    let m = inradius(d);
    // cos s = cos r / cos m; the ratio exceeds 1 exactly when m > r.
    let s_ratio = r.cos() / m.cos();
    if s_ratio > 1.0 + 1e-12 {
        return Err(Error::Regime {
            inradius: m,
            radius: r,
        });
    }
    let s = clamp_unit(s_ratio).acos();
    let alpha_ratio = (s.cos() - m.cos() * r.cos()) / (m.sin() * r.sin());
    let alpha = clamp_unit(alpha_ratio).acos();
    let f = 6.0 * (2.0 * alpha * r.sin() - 2.0 * s + l / 2.0) - std::f64::consts::TAU * r.sin();
    Ok(TriangleMetrics { l, m, s, alpha, f })
}

/// f(r, d) with the circumscribed fallback applied past m(d) = r.
pub fn deviation_value(r: f64, d: f64) -> Result<f64> {
    match metrics(r, d) {
        Ok(t) => Ok(t.f),
        Err(Error::Regime { .. }) => Ok(circumscribed_f(r, d)),
        Err(e) => Err(e),
    }
}

/// Row of the scan table.
#[derive(Clone, Copy, Debug)]
pub struct ScanRow {
    pub d: f64,
    pub metrics: TriangleMetrics,
}

/// Grid scan of f(r, ·) with a golden-section refinement of the minimum.
#[derive(Clone, Debug)]
pub struct ScanResult {
    pub config: CexConfig,
    pub rows: Vec<ScanRow>,
    /// Refined argmin of f over the interval.
    pub d_star: f64,
    pub f_star: f64,
    /// True when the minimum sits more than one grid step away from both
    /// interval endpoints.
    pub interior_minimum: bool,
}

fn row(r: f64, d: f64) -> Result<ScanRow> {
    let metrics = match metrics(r, d) {
        Ok(t) => t,
        Err(Error::Regime { .. }) => TriangleMetrics {
            l: side_length(d),
            m: inradius(d),
            s: 0.0,
            alpha: 0.0,
            f: circumscribed_f(r, d),
        },
        Err(e) => return Err(e),
    };
    Ok(ScanRow { d, metrics })
}

/// Evaluate f on a uniform grid and refine the minimizer to 1e-10 in d.
pub fn f_scan(config: CexConfig) -> Result<ScanResult> {
    config.validate()?;
    let CexConfig {
        r,
        d_min,
        d_max,
        steps,
    } = config;
    let h = (d_max - d_min) / steps as f64;
    let rows: Vec<ScanRow> = (0..=steps)
        .map(|j| row(r, d_min + j as f64 * h))
        .collect::<Result<_>>()?;
    let (imin, _) = rows
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.metrics.f.partial_cmp(&b.metrics.f).expect("finite"))
        .expect("non-empty grid");
    let lo = if imin == 0 { d_min } else { rows[imin - 1].d };
    let hi = if imin == steps { d_max } else { rows[imin + 1].d };
    let objective = |d: f64| deviation_value(r, d).expect("scan interval validated");
    let (d_star, f_star) = golden_min(objective, lo, hi, 1e-10);
    let interior_minimum = d_star - d_min > h && d_max - d_star > h;
    Ok(ScanResult {
        config,
        rows,
        d_star,
        f_star,
        interior_minimum,
    })
}

/// The regular triangle T(d) concentric with the pole-centred circle.
pub fn concentric_triangle(d: f64) -> Result<Polygon> {
    if !(d > 0.0 && d < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "circumradius must be in (0, π/2): {d}"
        )));
    }
    let vertices = (0..3)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 3.0;
            Point::spherical(d.sin() * t.cos(), d.sin() * t.sin(), d.cos())
        })
        .collect::<Result<Vec<_>>>()?;
    Polygon::try_new(Geometry::Spherical, vertices)
}

/// Inscribed / circumscribed / minimal deviation values for K(r).
#[derive(Clone, Copy, Debug)]
pub struct Comparison {
    pub d_inscribed: f64,
    pub f_inscribed: f64,
    pub d_circumscribed: f64,
    pub f_circumscribed: f64,
    pub d_star: f64,
    pub f_min: f64,
}

/// Compare the inscribed and circumscribed members of the family with the
/// interior minimum. The circumscribed circumradius solves m(d) = r by
/// bisection.
pub fn compare(r: f64) -> Result<Comparison> {
    if !(r > 0.0 && r < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!("radius out of (0, π/2): {r}")));
    }
    let hi = std::f64::consts::FRAC_PI_2 - 1e-9;
    if inradius(hi) <= r {
        return Err(Error::Domain(format!(
            "circumscribed member not bracketed for r = {r}"
        )));
    }
    let d_circumscribed = bisect(|d| inradius(d) - r, r, hi, 1e-12)?;
    let f_inscribed = metrics(r, r)?.f;
    let f_circumscribed = circumscribed_f(r, d_circumscribed);

    // All family members considered live inside the open hemisphere about
    // the pole; constructing the extreme triangles checks this.
    concentric_triangle(r)?;
    concentric_triangle(d_circumscribed)?;

    let scan = f_scan(CexConfig {
        r,
        d_min: r,
        d_max: d_circumscribed,
        steps: 2000,
    })?;
    Ok(Comparison {
        d_inscribed: r,
        f_inscribed,
        d_circumscribed,
        f_circumscribed,
        d_star: scan.d_star,
        f_min: scan.f_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deviation;
    use crate::disc::ConvexDisc;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, TAU};

    const R: f64 = FRAC_PI_2 - 0.1;

    #[test]
    fn trig_identities_hold_on_the_interval() {
        for j in 0..=50 {
            let d = R + (1.52 - R) * j as f64 / 50.0;
            let Ok(t) = metrics(R, d) else { continue };
            assert_abs_diff_eq!(
                t.l.cos(),
                d.cos().powi(2) + d.sin().powi(2) * (TAU / 3.0).cos(),
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(t.m.cos(), d.cos() / (t.l / 2.0).cos(), epsilon = 1e-14);
            assert!(t.s >= 0.0 && t.s <= t.l / 2.0 + 1e-12, "s out of range");
            assert!(t.alpha >= 0.0 && t.alpha <= FRAC_PI_3 + 1e-12, "α out of range");
        }
    }

    #[test]
    fn inscribed_endpoint_identities() {
        let t = metrics(R, R).unwrap();
        assert_abs_diff_eq!(t.s, t.l / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.alpha, FRAC_PI_3, epsilon = 1e-10);
        assert_abs_diff_eq!(t.f, TAU * R.sin() - 3.0 * t.l, epsilon = 1e-12);
    }

    #[test]
    fn circumscribed_endpoint_identities() {
        let cmp = compare(R).unwrap();
        assert_abs_diff_eq!(inradius(cmp.d_circumscribed), R, epsilon = 1e-11);
        let t = metrics(R, cmp.d_circumscribed).unwrap();
        assert_abs_diff_eq!(t.s, 0.0, epsilon = 1e-5);
        assert_abs_diff_eq!(t.alpha, 0.0, epsilon = 1e-5);
        assert_abs_diff_eq!(
            cmp.f_circumscribed,
            3.0 * side_length(cmp.d_circumscribed) - TAU * R.sin(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn small_radius_inscribed_deviation_is_positive() {
        let r = 0.3;
        let t = metrics(r, r).unwrap();
        let l = (r.cos().powi(2) - 0.5 * r.sin().powi(2)).acos();
        assert_abs_diff_eq!(t.f, TAU * r.sin() - 3.0 * l, epsilon = 1e-12);
        assert!(t.f > 0.0);
    }

    #[test]
    fn regime_error_past_circumscription() {
        let cmp = compare(R).unwrap();
        let beyond = cmp.d_circumscribed + 1e-3;
        assert!(matches!(
            metrics(R, beyond),
            Err(crate::Error::Regime { .. })
        ));
        // The fallback is continuous across the regime switch.
        let before = deviation_value(R, cmp.d_circumscribed - 1e-9).unwrap();
        let after = deviation_value(R, cmp.d_circumscribed + 1e-9).unwrap();
        assert_abs_diff_eq!(before, after, epsilon = 1e-6);
    }

    #[test]
    fn scan_finds_interior_minimum_on_figure_interval() {
        let scan = f_scan(CexConfig {
            r: R,
            d_min: R,
            d_max: 1.52,
            steps: 2000,
        })
        .unwrap();
        assert!(scan.interior_minimum, "minimum not interior");
        let f_left = scan.rows.first().unwrap().metrics.f;
        let f_right = scan.rows.last().unwrap().metrics.f;
        assert!(scan.f_star < f_left - 1e-4);
        assert!(scan.f_star < f_right - 1e-5);
    }

    #[test]
    fn ordering_min_then_circumscribed_then_inscribed() {
        let cmp = compare(R).unwrap();
        assert!(
            cmp.f_min < cmp.f_circumscribed && cmp.f_circumscribed < cmp.f_inscribed,
            "ordering violated: {cmp:?}"
        );
        // The circumscribed member sits just past the figure interval end.
        assert_abs_diff_eq!(cmp.d_circumscribed, 1.5207, epsilon = 2e-3);
    }

    #[test]
    fn small_radius_report_runs_without_ordering_assertions() {
        let cmp = compare(0.2).unwrap();
        assert!(cmp.f_inscribed.is_finite());
        assert!(cmp.f_circumscribed.is_finite());
        assert!(cmp.f_min.is_finite());
    }

    #[test]
    fn monotone_s_and_alpha_along_scan() {
        let cmp = compare(R).unwrap();
        let scan = f_scan(CexConfig {
            r: R,
            d_min: R,
            d_max: cmp.d_circumscribed,
            steps: 400,
        })
        .unwrap();
        for w in scan.rows.windows(2) {
            assert!(w[1].metrics.s <= w[0].metrics.s + 1e-12, "s not decreasing");
            assert!(
                w[1].metrics.alpha <= w[0].metrics.alpha + 1e-12,
                "α not decreasing"
            );
        }
    }

    #[test]
    fn closed_form_matches_deviation_engine() {
        let k = ConvexDisc::circle(Geometry::Spherical, Point::origin(Geometry::Spherical), R)
            .unwrap();
        for j in 0..=10 {
            let d = R + (1.52 - R) * j as f64 / 10.0;
            let f = deviation_value(R, d).unwrap();
            let tri = concentric_triangle(d).unwrap();
            let via_engine = deviation::dev(&k, &tri).unwrap().dev;
            assert_abs_diff_eq!(f, via_engine, epsilon = 1e-8);
        }
    }

    #[test]
    fn config_validation() {
        assert!(f_scan(CexConfig {
            r: R,
            d_min: R - 0.2,
            d_max: 1.52,
            steps: 100
        })
        .is_err());
        assert!(f_scan(CexConfig {
            r: R,
            d_min: R,
            d_max: FRAC_PI_2,
            steps: 100
        })
        .is_err());
        assert!(metrics(R, R - 0.01).is_err());
    }
}
