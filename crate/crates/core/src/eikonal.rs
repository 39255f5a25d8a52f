//! Signed distance to a planar curve and the foliation it induces.
//!
//! For a profile `φ` the curve `Γ = {s = φ(r)}` has a signed distance
//! function `ρ` solving the eikonal equation `‖∇ρ‖ = 1` on a tubular
//! neighbourhood. The submersion `(q, r, s) ↦ (q, ρ(r, s))` is then
//! horizontally conformal, and the unit field tangent to its fibres,
//! `U = (0, −ρ_s, ρ_r)`, spans a conformal foliation. With a bump profile
//! this produces a smooth foliation that is not real-analytic across the
//! bump's support boundary, while still passing every conformality test in
//! [`crate::foliation::residuals`].

use thiserror::Error;

use crate::field::{FdStep, FieldError, Vec3};
use crate::grid::Axis;
use crate::twistor::UnitVec3;

/// Profile functions `φ(t)` for the curve `{s = φ(r)}`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileFn {
    /// `φ(t) = Σ cᵢ tⁱ` with the listed coefficients (empty means zero).
    Polynomial {
        /// Coefficients `c₀, c₁, …` in ascending degree.
        coefficients: Vec<f64>,
    },
    /// `φ(t) = amplitude · sin(frequency · t)`.
    Sine {
        /// Peak height.
        amplitude: f64,
        /// Angular frequency.
        frequency: f64,
    },
    /// `φ(t) = amplitude · exp(−1 / (1 − (t/radius)²))` for `|t| < radius`,
    /// extended by zero: smooth everywhere, analytic nowhere on
    /// `|t| = radius`.
    Bump {
        /// Scale factor (the peak value is `amplitude / e`).
        amplitude: f64,
        /// Half-width of the support.
        radius: f64,
    },
}

impl ProfileFn {
    fn validate(&self) -> Result<(), EikonalError> {
        let bad = |reason: String| Err(EikonalError::BadProfile { reason });
        match self {
            ProfileFn::Polynomial { coefficients } => {
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return bad("polynomial coefficients must be finite".to_string());
                }
            }
            ProfileFn::Sine {
                amplitude,
                frequency,
            } => {
                if !amplitude.is_finite() || !frequency.is_finite() {
                    return bad("sine parameters must be finite".to_string());
                }
            }
            ProfileFn::Bump { amplitude, radius } => {
                if !amplitude.is_finite() || !radius.is_finite() || *radius <= 0.0 {
                    return bad(format!("bump needs finite amplitude and radius > 0, got radius {radius}"));
                }
            }
        }
        Ok(())
    }

    /// `φ(t)`.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            ProfileFn::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c)
            }
            ProfileFn::Sine {
                amplitude,
                frequency,
            } => amplitude * (frequency * t).sin(),
            ProfileFn::Bump { amplitude, radius } => {
                let u = t / radius;
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * (-1.0 / (1.0 - u * u)).exp()
                }
            }
        }
    }

    /// `φ'(t)`.
    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            ProfileFn::Polynomial { coefficients } => coefficients
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * t + k as f64 * c),
            ProfileFn::Sine {
                amplitude,
                frequency,
            } => amplitude * frequency * (frequency * t).cos(),
            ProfileFn::Bump { amplitude, radius } => {
                let u = t / radius;
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    let m = 1.0 - u * u;
                    amplitude * (-1.0 / m).exp() * (-2.0 * u / (m * m)) / radius
                }
            }
        }
    }

    /// `φ''(t)`.
    pub fn second_derivative(&self, t: f64) -> f64 {
        match self {
            ProfileFn::Polynomial { coefficients } => coefficients
                .iter()
                .enumerate()
                .skip(2)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * t + (k * (k - 1)) as f64 * c),
            ProfileFn::Sine {
                amplitude,
                frequency,
            } => -amplitude * frequency * frequency * (frequency * t).sin(),
            ProfileFn::Bump { amplitude, radius } => {
                let u = t / radius;
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    let m = 1.0 - u * u;
                    let g = (-1.0 / m).exp();
                    let u2 = u * u;
                    amplitude * g * (-2.0 / (m * m) - 8.0 * u2 / (m * m * m)
                        + 4.0 * u2 / (m * m * m * m))
                        / (radius * radius)
                }
            }
        }
    }
}

/// Failure while evaluating the signed distance.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum EikonalError {
    /// Two distinct nearest points tie: the query lies outside the tubular
    /// neighbourhood on which the distance is smooth.
    #[error("nearest point on the curve is not unique at (r, s) = ({at:?}): t = {t_first} and t = {t_second} tie")]
    NonUniqueNearestPoint {
        /// Query point `(r, s)`.
        at: [f64; 2],
        /// One minimizing parameter.
        t_first: f64,
        /// A distinct minimizing parameter at the same distance.
        t_second: f64,
    },
    /// The profile parameters are unusable.
    #[error("invalid profile: {reason}")]
    BadProfile {
        /// Human-readable cause.
        reason: String,
    },
}

impl From<EikonalError> for FieldError {
    fn from(e: EikonalError) -> Self {
        let at = match &e {
            EikonalError::NonUniqueNearestPoint { at, .. } => [0.0, at[0], at[1]],
            EikonalError::BadProfile { .. } => [0.0, 0.0, 0.0],
        };
        FieldError::OutsideDomain {
            at,
            reason: e.to_string(),
        }
    }
}

/// Half squared distance from `(r, s)` to the graph point `(t, φ(t))` and
/// its first two `t`-derivatives.
fn objective(profile: &ProfileFn, r: f64, s: f64, t: f64) -> (f64, f64, f64) {
    let f = profile.value(t);
    let f1 = profile.derivative(t);
    let f2 = profile.second_derivative(t);
    let dr = r - t;
    let ds = s - f;
    let val = 0.5 * (dr * dr + ds * ds);
    let d1 = -dr - ds * f1;
    let d2 = 1.0 + f1 * f1 - ds * f2;
    (val, d1, d2)
}

/// Signed distance from `(r, s)` to the curve `{s = φ(r)}`, together with
/// the nearest parameter `t*`.
///
/// Positive strictly above the curve, negative strictly below, zero on it.
/// The minimizing parameter is found by a coarse scan over the window that
/// must contain every near-minimal foot point, then polished by Newton on
/// the distance derivative. Fails when two distinct minimizers tie within
/// `1e−6` in distance, which marks the query as outside the neighbourhood
/// where the distance is smooth.
pub fn signed_distance(profile: &ProfileFn, point: [f64; 2]) -> Result<(f64, f64), EikonalError> {
    profile.validate()?;
    let [r, s] = point;
    let side = s - profile.value(r);

    // Every t with distance within 1e−6 of optimal satisfies
    // |t − r| ≤ |side| + 1e−6, so this window sees all contenders.
    let half_width = 1.05 * side.abs() + 0.5;
    let lo = r - half_width;
    let n = 2000usize;
    let dt = 2.0 * half_width / n as f64;

    let vals: Vec<f64> = (0..=n)
        .map(|i| objective(profile, r, s, lo + i as f64 * dt).0)
        .collect();

    // Local minima of the sampled objective, endpoints included.
    let mut candidates: Vec<f64> = Vec::new();
    for i in 0..=n {
        let here = vals[i];
        let left_ok = i == 0 || vals[i - 1] >= here;
        let right_ok = i == n || vals[i + 1] >= here;
        if left_ok && right_ok {
            candidates.push(lo + i as f64 * dt);
        }
    }

    // Newton polish on the derivative of the squared distance.
    let mut minima: Vec<(f64, f64)> = Vec::new();
    for start in candidates {
        let mut t = start;
        for _ in 0..60 {
            let (_, d1, d2) = objective(profile, r, s, t);
            if d2.abs() < 1e-12 {
                break;
            }
            let step = d1 / d2;
            t -= step;
            if step.abs() < 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        // Keep only genuine interior minima; a polish that wandered off a
        // shoulder sample ends at the same minimum as its neighbour and is
        // deduplicated below.
        let (val, _, _) = objective(profile, r, s, t);
        let dist = (2.0 * val).sqrt();
        if minima
            .iter()
            .any(|(t0, _)| (t - t0).abs() <= 1e-5 * (1.0 + t0.abs()))
        {
            continue;
        }
        minima.push((t, dist));
    }

    let (t_best, d_best) = minima
        .iter()
        .copied()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .expect("scan always yields at least one sample");

    for (t, d) in &minima {
        if (t - t_best).abs() > 1e-5 * (1.0 + t_best.abs()) && (d - d_best).abs() < 1e-6 {
            return Err(EikonalError::NonUniqueNearestPoint {
                at: point,
                t_first: t_best,
                t_second: *t,
            });
        }
    }

    let rho = if side > 0.0 {
        d_best
    } else if side < 0.0 {
        -d_best
    } else {
        0.0
    };
    Ok((rho, t_best))
}

/// A signed-distance solution sampled over a rectangle, keeping the profile
/// so residuals can re-evaluate it exactly rather than interpolate.
#[derive(Debug, Clone)]
pub struct SignedDistanceField {
    profile: ProfileFn,
    axes: [Axis; 2],
    rho: Vec<f64>,
    foot: Vec<f64>,
}

impl SignedDistanceField {
    /// Samples the signed distance over the `(r, s)` rectangle. Fails if any
    /// grid point leaves the neighbourhood of unique nearest points.
    pub fn sample(profile: ProfileFn, axes: [Axis; 2]) -> Result<Self, EikonalError> {
        profile.validate()?;
        let (nr, ns) = (axes[0].count, axes[1].count);
        let mut rho = Vec::with_capacity(nr * ns);
        let mut foot = Vec::with_capacity(nr * ns);
        for i in 0..nr {
            for j in 0..ns {
                let (d, t) = signed_distance(&profile, [axes[0].at(i), axes[1].at(j)])?;
                rho.push(d);
                foot.push(t);
            }
        }
        Ok(SignedDistanceField {
            profile,
            axes,
            rho,
            foot,
        })
    }

    /// The profile the field was built from.
    pub fn profile(&self) -> &ProfileFn {
        &self.profile
    }

    /// The sampling rectangle.
    pub fn axes(&self) -> &[Axis; 2] {
        &self.axes
    }

    /// Stored `ρ` samples, row-major in `(r, s)`.
    pub fn rho_samples(&self) -> &[f64] {
        &self.rho
    }

    /// Stored nearest-parameter samples, row-major in `(r, s)`.
    pub fn foot_samples(&self) -> &[f64] {
        &self.foot
    }

    /// Exact re-evaluation at an arbitrary point (not interpolation).
    pub fn rho_at(&self, point: [f64; 2]) -> Result<(f64, f64), EikonalError> {
        signed_distance(&self.profile, point)
    }
}

/// `|‖∇ρ‖ − 1|` at a point, by central differences of the exact field.
pub fn eikonal_residual(
    field: &SignedDistanceField,
    point: [f64; 2],
    fd: FdStep,
) -> Result<f64, EikonalError> {
    let [r, s] = point;
    let hr = fd.along(r);
    let hs = fd.along(s);
    let rr = (field.rho_at([r + hr, s])?.0 - field.rho_at([r - hr, s])?.0) / (2.0 * hr);
    let rs = (field.rho_at([r, s + hs])?.0 - field.rho_at([r, s - hs])?.0) / (2.0 * hs);
    Ok(((rr * rr + rs * rs).sqrt() - 1.0).abs())
}

/// Unit field `U = (0, −ρ_s, ρ_r)` tangent to the fibres of the submersion
/// `(q, r, s) ↦ (q, ρ(r, s))`.
///
/// The gradient of a signed distance is the upward unit normal at the foot
/// point, on both sides of the curve, so it is evaluated in closed form
/// from the nearest parameter rather than by differencing: avoiding
/// derivative noise here matters because the conformality tests
/// differentiate this field once more.
pub fn distance_foliation_field(
    field: &SignedDistanceField,
    point: Vec3,
) -> Result<UnitVec3, FieldError> {
    let [_, r, s] = point;
    let (_, t) = field
        .rho_at([r, s])
        .map_err(FieldError::from)?;
    let f1 = field.profile().derivative(t);
    let scale = (1.0 + f1 * f1).sqrt();
    let rho_r = -f1 / scale;
    let rho_s = 1.0 / scale;
    UnitVec3::normalized(0.0, -rho_s, rho_r).map_err(|_| FieldError::OutsideDomain {
        at: point,
        reason: "degenerate distance gradient".to_string(),
    })
}
