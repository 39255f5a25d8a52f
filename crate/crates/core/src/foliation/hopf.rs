//! The Hopf-fibration field in closed form.
//!
//! The level surface `z1 = 1` admits an explicit solution of the incidence
//! equation, an explicit unit field, and an explicit first integral (the map
//! whose fibres are the field's integral curves). These serve as the
//! independent reference values for the Newton solver and the residual tests.

use crate::field::{C64, FieldError, Vec3};
use crate::twistor::UnitVec3;

const AXIS_EPS: f64 = 1e-300;

/// Fibre-chart value `z = (1 + iq)(r − is)/(r² + s²)`.
///
/// Fails on the axis `r = s = 0`, where the field hits the chart pole.
pub fn hopf_z(point: Vec3) -> Result<C64, FieldError> {
    let [q, r, s] = point;
    let rs2 = r * r + s * s;
    if rs2 < AXIS_EPS {
        return Err(FieldError::Pole { at: point });
    }
    Ok(C64::new(1.0, q) * C64::new(r, -s) / rs2)
}

/// Unit field
/// `U = (1 + q² − r² − s², 2(qr − s), 2(qs + r)) / (1 + q² + r² + s²)`,
/// defined everywhere (equal to `(1, 0, 0)` on the axis `r = s = 0`).
pub fn hopf_unit(point: Vec3) -> UnitVec3 {
    let [q, r, s] = point;
    let d = 1.0 + q * q + r * r + s * s;
    UnitVec3::normalized(
        (1.0 + q * q - r * r - s * s) / d,
        2.0 * (q * r - s) / d,
        2.0 * (q * s + r) / d,
    )
    .expect("closed form is unit for every (q, r, s)")
}

/// First integral of the field:
/// `((1 − q² − r² − s²) r + 2qs, (1 − q² − r² − s²) s − 2qr) / (r² + s²)`.
///
/// Constant along integral curves of [`hopf_unit`]; undefined on the axis.
pub fn hopf_map(point: Vec3) -> Result<[f64; 2], FieldError> {
    let [q, r, s] = point;
    let rs2 = r * r + s * s;
    if rs2 < AXIS_EPS {
        return Err(FieldError::Pole { at: point });
    }
    let m = 1.0 - q * q - r * r - s * s;
    Ok([(m * r + 2.0 * q * s) / rs2, (m * s - 2.0 * q * r) / rs2])
}

/// Unit field and first integral together.
pub fn hopf_closed_form(point: Vec3) -> Result<(UnitVec3, [f64; 2]), FieldError> {
    Ok((hopf_unit(point), hopf_map(point)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FdStep;
    use crate::foliation::field_from_z;
    use crate::foliation::residuals::{
        conformal_pde_residual, conformality_frame_residual, cr_tangency_residual,
    };

    #[test]
    fn marked_values() {
        let (u, m) = hopf_closed_form([0.0, 1.0, 0.0]).unwrap();
        assert!((u.u, u.v, u.w) == (0.0, 0.0, 1.0));
        assert!(m[0].abs() < 1e-15 && m[1].abs() < 1e-15);

        let u = hopf_unit([1.0, 1.0, 0.0]);
        assert!((u.u - 1.0 / 3.0).abs() < 1e-15);
        assert!((u.v - 2.0 / 3.0).abs() < 1e-15);
        assert!((u.w - 2.0 / 3.0).abs() < 1e-15);

        let m = hopf_map([0.0, 0.5, 0.0]).unwrap();
        assert!((m[0] - 1.5).abs() < 1e-15 && m[1].abs() < 1e-15);
    }

    #[test]
    fn chart_value_carries_the_unit_field() {
        let pts = [
            [0.0, 1.0, 0.0],
            [0.4, -0.3, 0.7],
            [-1.2, 0.5, 0.1],
            [2.0, 0.2, -0.9],
        ];
        for p in pts {
            let via_chart = field_from_z(hopf_z(p).unwrap());
            let direct = hopf_unit(p);
            let d = [
                via_chart.u - direct.u,
                via_chart.v - direct.v,
                via_chart.w - direct.w,
            ];
            let err = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(err < 1e-13, "at {p:?}: {err}");
        }
    }

    #[test]
    fn axis_is_reported_as_a_pole() {
        assert!(matches!(
            hopf_z([0.3, 0.0, 0.0]),
            Err(FieldError::Pole { .. })
        ));
        assert!(matches!(
            hopf_map([0.3, 0.0, 0.0]),
            Err(FieldError::Pole { .. })
        ));
        let u = hopf_unit([0.3, 0.0, 0.0]);
        assert!((u.u - 1.0).abs() < 1e-15);
    }

    #[test]
    fn all_three_conformality_tests_pass_off_the_axis() {
        let fd = FdStep::default();
        let zf = |p: Vec3| hopf_z(p);
        let uf = |p: Vec3| Ok(hopf_unit(p));
        let pts = [[0.0, 1.0, 0.0], [0.5, 0.4, -0.3], [-0.7, -0.2, 0.8]];
        for p in pts {
            let pde = conformal_pde_residual(&zf, p, fd).unwrap();
            assert!(pde.norm() < 1e-6, "pde at {p:?}: {pde}");
            let (a, b) = conformality_frame_residual(&uf, p, fd).unwrap();
            assert!(a.abs() < 1e-6 && b.abs() < 1e-6, "frame at {p:?}: {a}, {b}");
            let cr = cr_tangency_residual(&uf, p, fd).unwrap();
            assert!(cr < 1e-6, "cr at {p:?}: {cr}");
        }
    }

    #[test]
    fn first_integral_is_killed_by_the_field() {
        // Directional derivative of the map along U vanishes.
        let pts = [[0.0, 1.0, 0.0], [0.5, 0.4, -0.3], [-0.7, -0.2, 0.8]];
        let h = 1e-5;
        for p in pts {
            let u = hopf_unit(p);
            let dir = u.as_array();
            let plus = hopf_map([p[0] + h * dir[0], p[1] + h * dir[1], p[2] + h * dir[2]]).unwrap();
            let minus =
                hopf_map([p[0] - h * dir[0], p[1] - h * dir[1], p[2] - h * dir[2]]).unwrap();
            for c in 0..2 {
                let d = (plus[c] - minus[c]) / (2.0 * h);
                assert!(d.abs() < 1e-8, "at {p:?} component {c}: {d}");
            }
        }
    }
}
