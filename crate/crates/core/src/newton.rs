//! Damped Newton iterations on ℂ and ℂ², shared by the implicit solvers.
//!
//! Both drivers use the same policy: full Newton step first, then up to
//! [`MAX_HALVINGS`] step halvings if the residual does not decrease.
//! Iteration stops on residual below tolerance, on a (near-)singular
//! derivative, or after the iteration budget.

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Derivative magnitudes below this are treated as singular (branch point
/// for scalar solves, singular Jacobian for systems).
pub const SINGULAR_TOL: f64 = 1e-12;

/// Maximum number of step halvings in the damped line search.
pub const MAX_HALVINGS: u32 = 10;

/// Outcome of a pointwise solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleStatus {
    /// Residual below tolerance.
    Ok,
    /// Iteration budget exhausted without meeting tolerance.
    NoConverge,
    /// Derivative vanished along the way (branch point of the implicit
    /// function).
    BranchPoint,
    /// Iterate left the chart (|z| above the configured pole radius).
    NearPole,
    /// Jacobian of a 2×2 system was numerically singular.
    SingularJacobian,
}

impl SampleStatus {
    /// True when the sample converged.
    pub fn is_ok(&self) -> bool {
        matches!(self, SampleStatus::Ok)
    }

    /// Stable lowercase name, used in exports.
    pub fn name(&self) -> &'static str {
        match self {
            SampleStatus::Ok => "ok",
            SampleStatus::NoConverge => "no-converge",
            SampleStatus::BranchPoint => "branch-point",
            SampleStatus::NearPole => "near-pole",
            SampleStatus::SingularJacobian => "singular-jacobian",
        }
    }
}

/// Failure of a pointwise Newton solve.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SolveError {
    /// Did not reach tolerance within the iteration budget.
    #[error("no convergence after {iters} iterations (residual {residual:.3e})")]
    NoConverge {
        /// Iterations performed.
        iters: usize,
        /// Final residual magnitude.
        residual: f64,
    },
    /// Scalar derivative vanished.
    #[error("branch point: derivative magnitude {deriv:.3e} below tolerance")]
    BranchPoint {
        /// Magnitude of the derivative at the failing iterate.
        deriv: f64,
    },
    /// System Jacobian was numerically singular.
    #[error("singular Jacobian (|det| = {det:.3e})")]
    SingularJacobian {
        /// Magnitude of the Jacobian determinant.
        det: f64,
    },
    /// Iterate left the chart.
    #[error("iterate left the chart (|z| = {magnitude:.3e})")]
    NearPole {
        /// Magnitude of the runaway iterate.
        magnitude: f64,
    },
    /// The expression could not be evaluated at an iterate.
    #[error("expression evaluation failed: {0}")]
    Eval(String),
}

impl SolveError {
    /// The status this error corresponds to.
    pub fn status(&self) -> SampleStatus {
        match self {
            SolveError::NoConverge { .. } | SolveError::Eval(_) => SampleStatus::NoConverge,
            SolveError::BranchPoint { .. } => SampleStatus::BranchPoint,
            SolveError::SingularJacobian { .. } => SampleStatus::SingularJacobian,
            SolveError::NearPole { .. } => SampleStatus::NearPole,
        }
    }
}

/// Result of a scalar Newton run that carries the last iterate even on
/// failure, so grid continuation can decide what to do with it.
#[derive(Debug, Clone, Copy)]
pub struct Newton1Result {
    /// Final iterate.
    pub z: C64,
    /// Outcome.
    pub status: SampleStatus,
    /// Iterations performed.
    pub iters: usize,
}

/// Damped Newton on a holomorphic scalar equation `g(z) = 0`.
///
/// `g` returns `(g(z), g'(z))`. `pole_radius` aborts with
/// [`SampleStatus::NearPole`] when the iterate's modulus exceeds it.
pub fn newton_c1<G>(
    g: G,
    seed: C64,
    tol: f64,
    max_iters: usize,
    pole_radius: f64,
) -> Newton1Result
where
    G: Fn(C64) -> Result<(C64, C64), String>,
{
    let mut z = seed;
    for it in 0..max_iters {
        if z.norm() > pole_radius {
            return Newton1Result {
                z,
                status: SampleStatus::NearPole,
                iters: it,
            };
        }
        let (val, deriv) = match g(z) {
            Ok(pair) => pair,
            Err(_) => {
                return Newton1Result {
                    z,
                    status: SampleStatus::NoConverge,
                    iters: it,
                }
            }
        };
        let res = val.norm();
        if res < tol {
            return Newton1Result {
                z,
                status: SampleStatus::Ok,
                iters: it,
            };
        }
        if deriv.norm() < SINGULAR_TOL {
            return Newton1Result {
                z,
                status: SampleStatus::BranchPoint,
                iters: it,
            };
        }
        let full = -val / deriv;
        let mut step = full;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let cand = z + step;
            if let Ok((cval, _)) = g(cand) {
                if cval.norm() < res {
                    z = cand;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            // Take the smallest damped step anyway; the next pass will
            // re-evaluate convergence.
            z += step;
        }
    }
    let status = match g(z) {
        Ok((val, _)) if val.norm() < tol => SampleStatus::Ok,
        _ => {
            if z.norm() > pole_radius {
                SampleStatus::NearPole
            } else {
                SampleStatus::NoConverge
            }
        }
    };
    Newton1Result {
        z,
        status,
        iters: max_iters,
    }
}

/// Result of a 2×2 Newton run.
#[derive(Debug, Clone, Copy)]
pub struct Newton2Result {
    /// Final iterate.
    pub zw: (C64, C64),
    /// Outcome.
    pub status: SampleStatus,
    /// Iterations performed.
    pub iters: usize,
}

/// Damped Newton on a holomorphic system `R(z, w) = 0`, `R: ℂ² → ℂ²`.
///
/// `sys` returns the residual pair and the analytic Jacobian rows
/// `[[∂R₁/∂z, ∂R₁/∂w], [∂R₂/∂z, ∂R₂/∂w]]`. The 2×2 solve is by Cramer's
/// rule; a determinant smaller than [`SINGULAR_TOL`] relative to the
/// Jacobian scale reports [`SampleStatus::SingularJacobian`].
pub fn newton_c2<S>(sys: S, seed: (C64, C64), tol: f64, max_iters: usize) -> Newton2Result
where
    S: Fn(C64, C64) -> Result<([C64; 2], [[C64; 2]; 2]), String>,
{
    let norm = |r: &[C64; 2]| r[0].norm().max(r[1].norm());
    let mut zw = seed;
    for it in 0..max_iters {
        let (res, jac) = match sys(zw.0, zw.1) {
            Ok(pair) => pair,
            Err(_) => {
                return Newton2Result {
                    zw,
                    status: SampleStatus::NoConverge,
                    iters: it,
                }
            }
        };
        let rnorm = norm(&res);
        if rnorm < tol {
            return Newton2Result {
                zw,
                status: SampleStatus::Ok,
                iters: it,
            };
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let scale = jac[0][0]
            .norm()
            .max(jac[0][1].norm())
            .max(jac[1][0].norm())
            .max(jac[1][1].norm())
            .max(1.0);
        if det.norm() < SINGULAR_TOL * scale * scale {
            return Newton2Result {
                zw,
                status: SampleStatus::SingularJacobian,
                iters: it,
            };
        }
        let dz = (-res[0] * jac[1][1] + res[1] * jac[0][1]) / det;
        let dw = (-jac[0][0] * res[1] + jac[1][0] * res[0]) / det;
        let mut step = (dz, dw);
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let cand = (zw.0 + step.0, zw.1 + step.1);
            if let Ok((cres, _)) = sys(cand.0, cand.1) {
                if norm(&cres) < rnorm {
                    zw = cand;
                    accepted = true;
                    break;
                }
            }
            step = (step.0 * 0.5, step.1 * 0.5);
        }
        if !accepted {
            zw = (zw.0 + step.0, zw.1 + step.1);
        }
    }
    let status = match sys(zw.0, zw.1) {
        Ok((res, _)) if norm(&res) < tol => SampleStatus::Ok,
        _ => SampleStatus::NoConverge,
    };
    Newton2Result {
        zw,
        status,
        iters: max_iters,
    }
}
