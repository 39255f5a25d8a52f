//! Path-integral reconstruction of the potential `h` with `dh = ω` for a
//! closed form field, plus the loop-closure and horizontal-conformality
//! diagnostics that validate it.

use super::closedness_residual;
use crate::field::{central_diff3, C64, FdStep, Field3, FieldError, Vec3};

/// Intervals per Simpson leg. Fixed (rather than scaled with length) so the
/// quadrature error varies smoothly with the endpoint and differencing the
/// potential stays clean; 64 keeps the per-unit-length error near 3e-10,
/// well inside the loop-closure budget.
const SIMPSON_INTERVALS: usize = 64;

/// Composite Simpson integral of the `axis` component of `omega` along the
/// axis-parallel segment from `from` to the point with `from[axis]`
/// replaced by `to_coord`.
fn simpson_leg<F>(omega: &F, from: Vec3, axis: usize, to_coord: f64) -> Result<C64, FieldError>
where
    F: Field3<[C64; 3]> + ?Sized,
{
    let a = from[axis];
    if a == to_coord {
        return Ok(C64::new(0.0, 0.0));
    }
    let n = SIMPSON_INTERVALS;
    let h = (to_coord - a) / n as f64;
    let mut total = C64::new(0.0, 0.0);
    for i in 0..=n {
        let mut p = from;
        p[axis] = a + i as f64 * h;
        let weight = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        total += weight * omega.at(p)?[axis];
    }
    Ok(total * (h / 3.0))
}

/// A potential for a closed form field: `value(x) = ∫ ω` along the
/// axis-ordered path from the base point (first along `q`, then `r`,
/// then `s`). Built by [`potential_from_closed_form`], which refuses
/// visibly non-closed inputs; for a closed form the value is
/// path-independent and satisfies `dh = ω`.
#[derive(Debug, Clone, Copy)]
pub struct PathPotential<'a, F: ?Sized> {
    omega: &'a F,
    base: Vec3,
}

impl<'a, F> PathPotential<'a, F>
where
    F: Field3<[C64; 3]> + ?Sized,
{
    /// The base point where the potential vanishes.
    pub fn base(&self) -> Vec3 {
        self.base
    }

    /// `∫ ω` from the base point to `target` along the axis-ordered path.
    pub fn value(&self, target: Vec3) -> Result<C64, FieldError> {
        let leg_q_end = [target[0], self.base[1], self.base[2]];
        let leg_r_end = [target[0], target[1], self.base[2]];
        let mut h = simpson_leg(self.omega, self.base, 0, target[0])?;
        h += simpson_leg(self.omega, leg_q_end, 1, target[1])?;
        h += simpson_leg(self.omega, leg_r_end, 2, target[2])?;
        Ok(h)
    }
}

impl<'a, F> Field3<C64> for PathPotential<'a, F>
where
    F: Field3<[C64; 3]> + ?Sized,
{
    fn at(&self, p: Vec3) -> Result<C64, FieldError> {
        self.value(p)
    }
}

/// Builds a path potential for `omega` over the box `domain = (lo, hi)`,
/// based at `base`, after checking closedness at 27 interior probe points
/// (fractions 1/4, 1/2, 3/4 along each axis). Rejects the field with the
/// worst probe when any curl component exceeds `closedness_threshold`:
/// integrating a non-closed form would silently depend on the path.
pub fn potential_from_closed_form<'a, F>(
    omega: &'a F,
    domain: (Vec3, Vec3),
    base: Vec3,
    fd: FdStep,
    closedness_threshold: f64,
) -> Result<PathPotential<'a, F>, FieldError>
where
    F: Field3<[C64; 3]> + ?Sized,
{
    let (lo, hi) = domain;
    let fractions = [0.25, 0.5, 0.75];
    for &fq in &fractions {
        for &fr in &fractions {
            for &fs in &fractions {
                let p = [
                    lo[0] + fq * (hi[0] - lo[0]),
                    lo[1] + fr * (hi[1] - lo[1]),
                    lo[2] + fs * (hi[2] - lo[2]),
                ];
                let res = closedness_residual(omega, p, fd)?;
                if res > closedness_threshold {
                    return Err(FieldError::OutsideDomain {
                        at: p,
                        reason: format!(
                            "form is not closed: curl {res:.3e} exceeds {closedness_threshold:.3e}"
                        ),
                    });
                }
            }
        }
    }
    Ok(PathPotential { omega, base })
}

/// `∮ ω` around the axis-aligned rectangle with one corner at `corner`,
/// spanned by `lengths.0` along axis `axes.0` and `lengths.1` along axis
/// `axes.1`. Near zero (quadrature error) iff the form is closed over the
/// rectangle.
pub fn loop_closure_defect<F>(
    omega: &F,
    corner: Vec3,
    axes: (usize, usize),
    lengths: (f64, f64),
) -> Result<C64, FieldError>
where
    F: Field3<[C64; 3]> + ?Sized,
{
    assert!(axes.0 < 3 && axes.1 < 3 && axes.0 != axes.1, "need two distinct axes");
    let (i, j) = axes;
    let p0 = corner;
    let mut p1 = p0;
    p1[i] += lengths.0;
    let mut p2 = p1;
    p2[j] += lengths.1;
    let mut p3 = p2;
    p3[i] -= lengths.0;
    let mut total = simpson_leg(omega, p0, i, p1[i])?;
    total += simpson_leg(omega, p1, j, p2[j])?;
    total += simpson_leg(omega, p2, i, p3[i])?;
    total += simpson_leg(omega, p3, j, p0[j])?;
    Ok(total)
}

/// Horizontal-conformality residuals of a complex map `h = f + ig`:
/// `(‖∇f‖ − ‖∇g‖, ⟨∇f, ∇g⟩)` by central differences. Both vanish iff the
/// real and imaginary parts have orthogonal gradients of equal length.
pub fn horizontal_conformality_check<F>(
    h: &F,
    point: Vec3,
    fd: FdStep,
) -> Result<(f64, f64), FieldError>
where
    F: Field3<C64> + ?Sized,
{
    let mut grad_f = [0.0f64; 3];
    let mut grad_g = [0.0f64; 3];
    for axis in 0..3 {
        let d: C64 = central_diff3(h, point, axis, fd)?;
        grad_f[axis] = d.re;
        grad_g[axis] = d.im;
    }
    let nf = grad_f.iter().map(|x| x * x).sum::<f64>().sqrt();
    let ng = grad_g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot = (0..3).map(|k| grad_f[k] * grad_g[k]).sum::<f64>();
    Ok((nf - ng, dot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nullform::make_omega;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    const BOX: (Vec3, Vec3) = ([-0.4, -0.4, -0.4], [0.4, 0.4, 0.4]);

    #[test]
    fn constant_form_integrates_to_the_linear_potential() {
        // ω = i dr + ds, so h = ir + s.
        let omega = |_p: Vec3| Ok([c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]);
        let h =
            potential_from_closed_form(&omega, BOX, [0.0, 0.0, 0.0], FdStep::default(), 1e-8)
                .unwrap();
        for p in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.1], [1.0, 2.0, -0.5]] {
            let got = h.value(p).unwrap();
            let want = c(p[2], p[1]);
            assert!((got - want).norm() < 1e-12, "{p:?}: {got} vs {want}");
        }
    }

    #[test]
    fn rescaled_form_integrates_to_the_quadratic_potential() {
        // ω = (1 + ir + s)(i dr + ds) = d((ir+s) + ½(ir+s)²).
        let omega = |p: Vec3| {
            let t = c(p[2], p[1]) + 1.0;
            Ok([c(0.0, 0.0), t * c(0.0, 1.0), t])
        };
        let h =
            potential_from_closed_form(&omega, BOX, [0.0, 0.0, 0.0], FdStep::default(), 1e-8)
                .unwrap();
        for p in [[0.0, 0.3, 0.1], [0.5, -0.25, 0.3], [-0.2, 0.1, -0.4]] {
            let u = c(p[2], p[1]);
            let want = u + 0.5 * u * u;
            let got = h.value(p).unwrap();
            assert!((got - want).norm() < 1e-12, "{p:?}: {got} vs {want}");
        }
    }

    #[test]
    fn differencing_the_potential_recovers_the_form() {
        let omega = |p: Vec3| {
            let t = c(p[2], p[1]) + 1.0;
            Ok([c(0.0, 0.0), t * c(0.0, 1.0), t])
        };
        let h =
            potential_from_closed_form(&omega, BOX, [0.0, 0.0, 0.0], FdStep::default(), 1e-8)
                .unwrap();
        let p = [0.1, 0.15, -0.2];
        let want: [C64; 3] = omega(p).unwrap();
        for (axis, want_c) in want.iter().enumerate() {
            let d: C64 = central_diff3(&h, p, axis, FdStep::default()).unwrap();
            assert!((d - want_c).norm() < 1e-6, "axis {axis}: {d}");
        }
    }

    #[test]
    fn non_closed_form_is_refused() {
        // (z, w) = (q, 1) gives a null form with curl 2q.
        let omega = |p: Vec3| Ok(make_omega(C64::new(p[0], 0.0), c(1.0, 0.0)).coefficients());
        let err = match potential_from_closed_form(
            &omega,
            ([0.5, -0.4, -0.4], [1.3, 0.4, 0.4]),
            [0.9, 0.0, 0.0],
            FdStep::default(),
            1e-8,
        ) {
            Ok(_) => panic!("non-closed form was accepted"),
            Err(e) => e,
        };
        assert!(matches!(err, FieldError::OutsideDomain { .. }), "{err}");
    }

    #[test]
    fn loop_integrals_vanish_only_for_closed_forms() {
        let closed = |p: Vec3| {
            let t = c(p[2], p[1]) + 1.0;
            Ok([c(0.0, 0.0), t * c(0.0, 1.0), t])
        };
        let defect = loop_closure_defect(&closed, [0.05, -0.1, 0.0], (1, 2), (0.3, 0.25))
            .unwrap()
            .norm();
        assert!(defect < 1e-12, "closed: {defect}");

        let open = |p: Vec3| Ok(make_omega(C64::new(p[0], 0.0), c(1.0, 0.0)).coefficients());
        let defect = loop_closure_defect(&open, [0.5, 0.0, 0.0], (0, 1), (0.4, 0.4))
            .unwrap()
            .norm();
        assert!(defect > 1e-2, "open: {defect}");
    }

    #[test]
    fn conformality_check_marked_values() {
        let flat = |p: Vec3| Ok(c(p[1], p[2]));
        let (diff, dot) = horizontal_conformality_check(&flat, [0.2, -0.1, 0.3], FdStep::default())
            .unwrap();
        assert!(diff.abs() < 1e-10 && dot.abs() < 1e-10);

        let skew = |p: Vec3| Ok(c(p[0], 2.0 * p[1]));
        let (diff, dot) = horizontal_conformality_check(&skew, [0.0, 0.0, 0.0], FdStep::default())
            .unwrap();
        assert!((diff + 1.0).abs() < 1e-10, "difference: {diff}");
        assert!(dot.abs() < 1e-10, "dot: {dot}");
    }

    #[test]
    fn solved_family_potential_matches_the_closed_form() {
        use crate::nullform::{XiMap, XiSolver, ZwSolve};
        // Inverse-cubic family: ω = (1 + ir + s)(i dr + ds).
        let solver = XiSolver::new(XiMap::InverseCubic, crate::foliation::SolverConfig::default());
        let seed = (c(0.0, 0.0), c(1.0, 0.0));
        let omega = |p: Vec3| {
            let s = solver.solve_zw(p, seed);
            if s.status.is_ok() {
                Ok(s.omega().coefficients())
            } else {
                Err(FieldError::OutsideDomain {
                    at: p,
                    reason: "no solve".into(),
                })
            }
        };
        let h = potential_from_closed_form(
            &omega,
            ([-0.3, -0.3, -0.3], [0.3, 0.3, 0.3]),
            [0.0, 0.0, 0.0],
            FdStep::default(),
            1e-6,
        )
        .unwrap();
        let p = [0.1, 0.2, -0.1];
        let u = c(p[2], p[1]);
        let want = u + 0.5 * u * u;
        let got = h.value(p).unwrap();
        assert!((got - want).norm() < 1e-8, "{got} vs {want}");
        let (diff, dot) = horizontal_conformality_check(&h, p, FdStep::default()).unwrap();
        assert!(diff.abs() < 1e-6 && dot.abs() < 1e-6, "({diff}, {dot})");
    }
}
