//! Integral-curve tracing through unit vector fields.

use thiserror::Error;

use crate::field::{Field3, FieldError, Vec3};
use crate::twistor::UnitVec3;

/// Failure while tracing an integral curve.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CurveError {
    /// The field could not be evaluated at a stage point.
    #[error(transparent)]
    Field(#[from] FieldError),
    /// The requested trace is ill-posed.
    #[error("invalid curve parameters: {reason}")]
    BadParams {
        /// Human-readable cause.
        reason: String,
    },
}

fn offset(x: Vec3, d: [f64; 3], h: f64) -> Vec3 {
    [x[0] + h * d[0], x[1] + h * d[1], x[2] + h * d[2]]
}

/// Traces an integral curve of a unit field by classical fourth-order
/// Runge-Kutta with fixed step. Returns the `n + 1` points visited,
/// starting with `start` itself.
///
/// Fails if the field cannot be evaluated at any stage point (for
/// solver-backed fields, that includes Newton failures along the way).
pub fn integrate_curve<F>(
    field: &F,
    start: Vec3,
    step: f64,
    n: usize,
) -> Result<Vec<Vec3>, CurveError>
where
    F: Field3<UnitVec3> + ?Sized,
{
    if !step.is_finite() || step == 0.0 {
        return Err(CurveError::BadParams {
            reason: format!("step must be finite and nonzero, got {step}"),
        });
    }
    let eval = |p: Vec3| -> Result<[f64; 3], CurveError> { Ok(field.at(p)?.as_array()) };
    let mut points = Vec::with_capacity(n + 1);
    let mut x = start;
    points.push(x);
    for _ in 0..n {
        let k1 = eval(x)?;
        let k2 = eval(offset(x, k1, step / 2.0))?;
        let k3 = eval(offset(x, k2, step / 2.0))?;
        let k4 = eval(offset(x, k3, step))?;
        for i in 0..3 {
            x[i] += step / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        points.push(x);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::hopf::{hopf_map, hopf_unit};

    #[test]
    fn constant_field_traces_a_straight_segment() {
        let f = |_: Vec3| UnitVec3::new(0.0, 0.0, 1.0).map_err(|_| unreachable!());
        let pts = integrate_curve(&f, [0.0, 0.0, 0.0], 0.1, 10).unwrap();
        assert_eq!(pts.len(), 11);
        let end = pts[10];
        assert!(end[0].abs() < 1e-15 && end[1].abs() < 1e-15);
        assert!((end[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_step_is_rejected() {
        let f = |_: Vec3| UnitVec3::new(0.0, 0.0, 1.0).map_err(|_| unreachable!());
        assert!(matches!(
            integrate_curve(&f, [0.0; 3], 0.0, 5),
            Err(CurveError::BadParams { .. })
        ));
    }

    #[test]
    fn first_integral_is_constant_along_the_flow() {
        let f = |p: Vec3| Ok(hopf_unit(p));
        let pts = integrate_curve(&f, [0.0, 1.0, 0.0], 0.02, 100).unwrap();
        let m0 = hopf_map(pts[0]).unwrap();
        for p in &pts {
            let m = hopf_map(*p).unwrap();
            assert!(
                (m[0] - m0[0]).abs() < 1e-6 && (m[1] - m0[1]).abs() < 1e-6,
                "drift at {p:?}: {m:?} vs {m0:?}"
            );
        }
    }

    #[test]
    fn step_halving_shows_fourth_order() {
        let f = |p: Vec3| Ok(hopf_unit(p));
        let start = [0.0, 1.0, 0.0];
        let end = |h: f64, n: usize| *integrate_curve(&f, start, h, n).unwrap().last().unwrap();
        let a = end(0.1, 8);
        let b = end(0.05, 16);
        let c = end(0.025, 32);
        let d1 = dist(a, b);
        let d2 = dist(b, c);
        let order = (d1 / d2).log2();
        assert!(order > 3.5, "observed order {order}");
    }

    fn dist(a: Vec3, b: Vec3) -> f64 {
        (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
    }
}
