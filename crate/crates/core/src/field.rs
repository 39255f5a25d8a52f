//! Field abstractions and finite-difference helpers.
//!
//! Every residual test in this crate consumes a *field*: something that can
//! be evaluated at an arbitrary point of ℝ³ (or ℝ⁴), not just on a stored
//! grid. Solver-backed fields re-solve at the requested point seeded from a
//! nearby known value; closed-form fields are plain closures. Both are
//! covered by the [`Field3`] / [`Field4`] traits, which are blanket-implemented
//! for closures so tests can pass `|p| Ok(...)` directly.

use num_complex::Complex64;
use thiserror::Error;

use crate::newton::SolveError;

/// Complex double-precision scalar used throughout.
pub type C64 = Complex64;

/// Point of ℝ³ in the affine chart coordinates `(q, r, s)`.
pub type Vec3 = [f64; 3];

/// Point of ℝ⁴ in coordinates `(p, q, r, s)`.
pub type Vec4 = [f64; 4];

/// Failure while evaluating a field at a point.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum FieldError {
    /// The underlying implicit solve failed.
    #[error("solver failure at ({at:?}): {source}")]
    Solve {
        /// Point of the attempted evaluation.
        at: Vec3,
        /// Underlying Newton failure.
        source: SolveError,
    },
    /// The field has a pole or chart degeneracy at the point.
    #[error("field pole at ({at:?})")]
    Pole {
        /// Point of the attempted evaluation.
        at: Vec3,
    },
    /// The point lies outside the field's validated domain.
    #[error("point ({at:?}) outside field domain: {reason}")]
    OutsideDomain {
        /// Point of the attempted evaluation.
        at: Vec3,
        /// Human-readable cause.
        reason: String,
    },
}

/// A field on ℝ³ with values of type `T`.
pub trait Field3<T> {
    /// Evaluates the field at `p = (q, r, s)`.
    fn at(&self, p: Vec3) -> Result<T, FieldError>;
}

impl<T, F> Field3<T> for F
where
    F: Fn(Vec3) -> Result<T, FieldError>,
{
    fn at(&self, p: Vec3) -> Result<T, FieldError> {
        self(p)
    }
}

/// A field on ℝ⁴ with values of type `T`.
pub trait Field4<T> {
    /// Evaluates the field at `p = (p, q, r, s)`.
    fn at4(&self, p: Vec4) -> Result<T, FieldError>;
}

impl<T, F> Field4<T> for F
where
    F: Fn(Vec4) -> Result<T, FieldError>,
{
    fn at4(&self, p: Vec4) -> Result<T, FieldError> {
        self(p)
    }
}

/// Central-difference step policy: the step along an axis is
/// `base * (1 + |coordinate|)`, balancing truncation against cancellation
/// at the 1e-6 residual scale the verification suite targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdStep {
    /// Base step; scaled by `1 + |coordinate|` per axis.
    pub base: f64,
}

impl FdStep {
    /// Step to use along one axis at coordinate value `x`.
    pub fn along(&self, x: f64) -> f64 {
        self.base * (1.0 + x.abs())
    }
}

impl Default for FdStep {
    fn default() -> Self {
        FdStep { base: 1e-5 }
    }
}

/// Value types that support the central-difference combination
/// `(a - b) * inv2h`.
pub trait CentralDiff: Copy {
    /// Computes `(a - b) * inv2h` componentwise.
    fn central(a: Self, b: Self, inv2h: f64) -> Self;
}

impl CentralDiff for f64 {
    fn central(a: Self, b: Self, inv2h: f64) -> Self {
        (a - b) * inv2h
    }
}

impl CentralDiff for C64 {
    fn central(a: Self, b: Self, inv2h: f64) -> Self {
        (a - b) * inv2h
    }
}

impl<const N: usize> CentralDiff for [f64; N] {
    fn central(a: Self, b: Self, inv2h: f64) -> Self {
        std::array::from_fn(|i| (a[i] - b[i]) * inv2h)
    }
}

impl<const N: usize> CentralDiff for [C64; N] {
    fn central(a: Self, b: Self, inv2h: f64) -> Self {
        std::array::from_fn(|i| (a[i] - b[i]) * inv2h)
    }
}

impl CentralDiff for (C64, C64) {
    fn central(a: Self, b: Self, inv2h: f64) -> Self {
        ((a.0 - b.0) * inv2h, (a.1 - b.1) * inv2h)
    }
}

/// Central difference of a field on ℝ³ along `axis` at `p`.
pub fn central_diff3<T, F>(field: &F, p: Vec3, axis: usize, fd: FdStep) -> Result<T, FieldError>
where
    T: CentralDiff,
    F: Field3<T> + ?Sized,
{
    let h = fd.along(p[axis]);
    let mut hi = p;
    let mut lo = p;
    hi[axis] += h;
    lo[axis] -= h;
    let a = field.at(hi)?;
    let b = field.at(lo)?;
    Ok(T::central(a, b, 0.5 / h))
}

/// Central difference of a field on ℝ⁴ along `axis` at `p`.
pub fn central_diff4<T, F>(field: &F, p: Vec4, axis: usize, fd: FdStep) -> Result<T, FieldError>
where
    T: CentralDiff,
    F: Field4<T> + ?Sized,
{
    let h = fd.along(p[axis]);
    let mut hi = p;
    let mut lo = p;
    hi[axis] += h;
    lo[axis] -= h;
    let a = field.at4(hi)?;
    let b = field.at4(lo)?;
    Ok(T::central(a, b, 0.5 / h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_diff_matches_derivative_of_polynomial() {
        let f = |p: Vec3| Ok(p[0] * p[0] + 3.0 * p[1] - p[2] * p[1]);
        let d0: f64 = central_diff3(&f, [2.0, 1.0, 1.0], 0, FdStep::default()).unwrap();
        let d1: f64 = central_diff3(&f, [2.0, 1.0, 1.0], 1, FdStep::default()).unwrap();
        let d2: f64 = central_diff3(&f, [2.0, 1.0, 1.0], 2, FdStep::default()).unwrap();
        assert!((d0 - 4.0).abs() < 1e-9);
        assert!((d1 - 2.0).abs() < 1e-9);
        assert!((d2 + 1.0).abs() < 1e-9);
    }

    #[test]
    fn step_scales_with_coordinate() {
        let fd = FdStep { base: 1e-5 };
        assert_eq!(fd.along(0.0), 1e-5);
        assert_eq!(fd.along(-3.0), 4e-5);
    }

    #[test]
    fn errors_propagate_from_either_side() {
        let f = |p: Vec3| {
            if p[0] > 1.0 {
                Err(FieldError::Pole { at: p })
            } else {
                Ok(p[0])
            }
        };
        let err = central_diff3::<f64, _>(&f, [1.0, 0.0, 0.0], 0, FdStep::default());
        assert!(matches!(err, Err(FieldError::Pole { .. })));
    }
}
