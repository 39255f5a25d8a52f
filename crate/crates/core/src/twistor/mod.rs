//! The projective side: ℂP₃ over the 4-sphere, charts, and the complex
//! structures parametrised by a unit vector.
//!
//! Points of ℂP₃ are held in a canonical homogeneous representative (the
//! component of largest modulus scaled to exactly 1). [`tau_project`] sends
//! a point to the unit sphere in ℝ ⊕ ℂ², [`stereo`] is stereographic
//! projection from the pole `t = 1`, and the two coordinate maps
//! [`coords_convenient`] / [`coords_explicit`] produce the fibre-bundle
//! coordinates `(p, q, r, s, u, v, w)` with `(u, v, w)` a unit vector. The
//! hyperquadric that cuts out the CR side exists in two conventions
//! (modulus and hermitian), exchanged by an explicit unitary change of
//! representative.
//!
//! [`jmat`] and [`big_j`] build the orthogonal complex structure on ℝ⁴ and
//! its lift to ℝ⁴ × S²; both square to minus the identity on the relevant
//! tangent directions, which the verification suite checks at 1e-13.

mod subspace;

pub use subspace::{classify_subspace, max_principal_angle_sin, SubspaceClass, SubspaceLabel};

use nalgebra::{Matrix3, Matrix4, SMatrix};
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Tolerance on the unit-norm invariants of [`UnitVec3`] and
/// [`Sphere4Point`].
pub const UNIT_TOL: f64 = 1e-12;

/// Errors from the chart maps and the subspace classifier.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum TwistorError {
    /// All four homogeneous components were zero.
    #[error("zero vector is not a projective point")]
    ZeroVector,
    /// A vector expected to be unit was not.
    #[error("vector ({x}, {y}, {z}) is off the unit sphere by {defect:.3e}")]
    OffUnitSphere {
        /// First component.
        x: f64,
        /// Second component.
        y: f64,
        /// Third component.
        z: f64,
        /// |norm - 1|.
        defect: f64,
    },
    /// Stereographic projection from the pole it is centred on.
    #[error("stereographic projection undefined at the pole t = 1")]
    ProjectionPole,
    /// The point lies on the line at infinity (Z₃ = Z₄ = 0).
    #[error("point on the line at infinity: |Z3|^2 + |Z4|^2 = 0")]
    LineAtInfinity,
    /// Basis vectors passed to the classifier are linearly dependent.
    #[error("spanning vectors are linearly dependent (rank {rank} < {count})")]
    DependentBasis {
        /// Numerical rank found.
        rank: usize,
        /// Vectors supplied.
        count: usize,
    },
    /// The classifier supports real codimension 1, 2 and 3 only.
    #[error("unsupported codimension {codim} (need a subspace of real dimension 3, 4 or 5)")]
    UnsupportedCodimension {
        /// 6 minus the subspace dimension.
        codim: isize,
    },
    /// Rank decisions straddled the SVD threshold; the input is too close
    /// to a degenerate configuration to label reliably.
    #[error("rank decision ambiguous: intersection dimension {dim} is odd")]
    AmbiguousRank {
        /// The (odd) real dimension computed for T ∩ JT.
        dim: usize,
    },
}

/// Unit vector in ℝ³, the `(u, v, w)` factor of the fibre-bundle chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec3 {
    /// First component.
    pub u: f64,
    /// Second component.
    pub v: f64,
    /// Third component.
    pub w: f64,
}

impl UnitVec3 {
    /// Wraps components that are already unit within [`UNIT_TOL`].
    pub fn new(u: f64, v: f64, w: f64) -> Result<Self, TwistorError> {
        let norm = (u * u + v * v + w * w).sqrt();
        let defect = (norm - 1.0).abs();
        if !defect.is_finite() || defect > UNIT_TOL {
            return Err(TwistorError::OffUnitSphere {
                x: u,
                y: v,
                z: w,
                defect,
            });
        }
        Ok(UnitVec3 { u, v, w })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self, TwistorError> {
        let norm = (x * x + y * y + z * z).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(TwistorError::OffUnitSphere {
                x,
                y,
                z,
                defect: f64::INFINITY,
            });
        }
        Ok(UnitVec3 {
            u: x / norm,
            v: y / norm,
            w: z / norm,
        })
    }

    /// Components as an array `[u, v, w]`.
    pub fn as_array(&self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }

    /// Antipodal vector (same line field, opposite orientation).
    pub fn flipped(&self) -> UnitVec3 {
        UnitVec3 {
            u: -self.u,
            v: -self.v,
            w: -self.w,
        }
    }
}

/// Point of ℂP₃ held as a canonical homogeneous representative: the
/// component of largest modulus equals exactly 1, ties broken by the lowest
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    z: [C64; 4],
}

impl ProjPoint {
    /// Canonicalizes a homogeneous representative.
    pub fn new(z: [C64; 4]) -> Result<Self, TwistorError> {
        let mut best = 0;
        for k in 1..4 {
            if z[k].norm_sqr() > z[best].norm_sqr() {
                best = k;
            }
        }
        let pivot = z[best];
        if pivot == C64::new(0.0, 0.0) {
            return Err(TwistorError::ZeroVector);
        }
        let mut out = z;
        for c in &mut out {
            *c /= pivot;
        }
        out[best] = C64::new(1.0, 0.0);
        Ok(ProjPoint { z: out })
    }

    /// The canonical representative.
    pub fn coords(&self) -> &[C64; 4] {
        &self.z
    }
}

/// Point on the unit sphere of ℝ ⊕ ℂ² ≅ ℝ⁵.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere4Point {
    /// The real coordinate.
    pub t: f64,
    /// First complex coordinate.
    pub zeta1: C64,
    /// Second complex coordinate.
    pub zeta2: C64,
}

impl Sphere4Point {
    /// Wraps coordinates that are unit within [`UNIT_TOL`].
    pub fn new(t: f64, zeta1: C64, zeta2: C64) -> Result<Self, TwistorError> {
        let norm = (t * t + zeta1.norm_sqr() + zeta2.norm_sqr()).sqrt();
        let defect = (norm - 1.0).abs();
        if !defect.is_finite() || defect > UNIT_TOL {
            return Err(TwistorError::OffUnitSphere {
                x: t,
                y: zeta1.norm(),
                z: zeta2.norm(),
                defect,
            });
        }
        Ok(Sphere4Point { t, zeta1, zeta2 })
    }
}

/// Fibre-bundle coordinates `(p, q, r, s)` with the sphere factor
/// `(u, v, w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistorCoords {
    /// First base coordinate.
    pub p: f64,
    /// Second base coordinate.
    pub q: f64,
    /// Third base coordinate.
    pub r: f64,
    /// Fourth base coordinate.
    pub s: f64,
    /// Sphere factor.
    pub unit: UnitVec3,
}

/// Projection of ℂP₃ onto the unit sphere in ℝ ⊕ ℂ².
pub fn tau_project(point: &ProjPoint) -> Sphere4Point {
    let [z1, z2, z3, z4] = point.coords();
    let n = z1.norm_sqr() + z2.norm_sqr() + z3.norm_sqr() + z4.norm_sqr();
    let t = (z1.norm_sqr() + z2.norm_sqr() - z3.norm_sqr() - z4.norm_sqr()) / n;
    let zeta1 = 2.0 * (z2 * z3.conj() + z4 * z1.conj()) / n;
    let zeta2 = 2.0 * (z1 * z3.conj() - z4 * z2.conj()) / n;
    Sphere4Point { t, zeta1, zeta2 }
}

/// Stereographic projection ℝ ⊕ ℂ² ⊃ S⁴ → ℂ² from the pole `t = 1`.
pub fn stereo(point: &Sphere4Point) -> Result<[C64; 2], TwistorError> {
    let denom = 1.0 - point.t;
    if denom.abs() < 1e-15 {
        return Err(TwistorError::ProjectionPole);
    }
    Ok([point.zeta1 / denom, point.zeta2 / denom])
}

/// Inverse stereographic projection; always lands on the sphere, with the
/// pole `t = 1` as the image of infinity.
pub fn stereo_inv(zeta: [C64; 2]) -> Sphere4Point {
    let n = zeta[0].norm_sqr() + zeta[1].norm_sqr();
    let denom = n + 1.0;
    Sphere4Point {
        t: (n - 1.0) / denom,
        zeta1: 2.0 * zeta[0] / denom,
        zeta2: 2.0 * zeta[1] / denom,
    }
}

/// Chart adapted to the fibration: `(p + iq, r + is, u, v + iw)` from a
/// homogeneous representative. Fails on the line at infinity
/// `Z₃ = Z₄ = 0`.
pub fn coords_convenient(point: &ProjPoint) -> Result<TwistorCoords, TwistorError> {
    let [z1, z2, z3, z4] = point.coords();
    let n = z3.norm_sqr() + z4.norm_sqr();
    if n == 0.0 {
        return Err(TwistorError::LineAtInfinity);
    }
    let pq = (z2 * z3.conj() + z4 * z1.conj()) / n;
    let rs = (z1 * z3.conj() - z4 * z2.conj()) / n;
    let u = (z3.norm_sqr() - z4.norm_sqr()) / n;
    let vw = 2.0 * C64::i() * z4 * z3.conj() / n;
    Ok(TwistorCoords {
        p: pq.re,
        q: pq.im,
        r: rs.re,
        s: rs.im,
        unit: UnitVec3::new(u, vw.re, vw.im).expect("chart output is unit by construction"),
    })
}

/// The same chart on the affine slice `Z₄ = 1`, written out in real
/// arithmetic: `z_k = x_k + i y_k`.
pub fn coords_explicit(z1: C64, z2: C64, z3: C64) -> TwistorCoords {
    let (x1, y1) = (z1.re, z1.im);
    let (x2, y2) = (z2.re, z2.im);
    let (x3, y3) = (z3.re, z3.im);
    let denom = x3 * x3 + y3 * y3 + 1.0;
    let p = (x2 * x3 + y2 * y3 + x1) / denom;
    let q = (x3 * y2 - x2 * y3 - y1) / denom;
    let r = (x1 * x3 + y1 * y3 - x2) / denom;
    let s = (x3 * y1 - x1 * y3 + y2) / denom;
    let u = (x3 * x3 + y3 * y3 - 1.0) / denom;
    let v = 2.0 * y3 / denom;
    let w = 2.0 * x3 / denom;
    TwistorCoords {
        p,
        q,
        r,
        s,
        unit: UnitVec3::new(u, v, w).expect("chart output is unit by construction"),
    }
}

/// The two ways the invariant hyperquadric is presented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadricConvention {
    /// `|Z₁|² + |Z₂|² = |Z₃|² + |Z₄|²`.
    Modulus,
    /// `Z₁ Z̄₄ + Z₂ Z̄₃ + Z₃ Z̄₂ + Z₄ Z̄₁ = 0`.
    Hermitian,
}

/// Value of the chosen hermitian form on a raw representative (no
/// canonicalization). Real in both conventions.
pub fn hyperquadric_form(z: &[C64; 4], convention: QuadricConvention) -> f64 {
    match convention {
        QuadricConvention::Modulus => {
            z[0].norm_sqr() + z[1].norm_sqr() - z[2].norm_sqr() - z[3].norm_sqr()
        }
        QuadricConvention::Hermitian => 2.0 * (z[0] * z[3].conj() + z[1] * z[2].conj()).re,
    }
}

/// Membership residual of the hyperquadric, evaluated on the canonical
/// representative. Zero exactly on the quadric.
pub fn hyperquadric_residual(point: &ProjPoint, convention: QuadricConvention) -> f64 {
    hyperquadric_form(point.coords(), convention)
}

/// Unitary change of representative taking the hermitian convention to the
/// modulus convention: the form value is preserved exactly.
pub fn hermitian_to_modulus(z: &[C64; 4]) -> [C64; 4] {
    let f = std::f64::consts::FRAC_1_SQRT_2;
    [
        f * (z[0] + z[3]),
        f * (z[1] + z[2]),
        f * (z[1] - z[2]),
        f * (z[0] - z[3]),
    ]
}

/// Inverse of [`hermitian_to_modulus`].
pub fn modulus_to_hermitian(a: &[C64; 4]) -> [C64; 4] {
    let f = std::f64::consts::FRAC_1_SQRT_2;
    [
        f * (a[0] + a[3]),
        f * (a[1] + a[2]),
        f * (a[1] - a[2]),
        f * (a[0] - a[3]),
    ]
}

/// Orthogonal complex structure on ℝ⁴ = (p, q, r, s) determined by a unit
/// vector: the first column is `(0, u, v, w)` and the lower-right block is
/// the cross-product matrix.
pub fn jmat(unit: UnitVec3) -> Matrix4<f64> {
    let (u, v, w) = (unit.u, unit.v, unit.w);
    Matrix4::new(
        0.0, -u, -v, -w, //
        u, 0.0, -w, v, //
        v, w, 0.0, -u, //
        w, -v, u, 0.0,
    )
}

/// Cross-product matrix of a unit vector: the complex structure on the
/// tangent plane of S² at that point.
pub fn hat(unit: UnitVec3) -> Matrix3<f64> {
    let (u, v, w) = (unit.u, unit.v, unit.w);
    Matrix3::new(
        0.0, -w, v, //
        w, 0.0, -u, //
        -v, u, 0.0,
    )
}

/// Complex structure on ℝ⁴ × S² ⊂ ℝ⁷: block diagonal, [`jmat`] on the base
/// and the cross-product matrix on the sphere factor. Squares to minus the
/// identity on ℝ⁴ ⊕ T S².
pub fn big_j(unit: UnitVec3) -> SMatrix<f64, 7, 7> {
    let mut out = SMatrix::<f64, 7, 7>::zeros();
    out.fixed_view_mut::<4, 4>(0, 0).copy_from(&jmat(unit));
    out.fixed_view_mut::<3, 3>(4, 4).copy_from(&hat(unit));
    out
}

/// The contact form and complex structure at a point of the CR
/// hyperquadric, expressed in the fibre-bundle chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactData {
    /// Coefficients of θ = u dq + v dr + w ds.
    pub theta: [f64; 3],
    /// The complex structure on ℝ⁴ × S² at the point.
    pub big_j: SMatrix<f64, 7, 7>,
}

impl ContactData {
    /// Contact data attached to a sphere direction.
    pub fn from_unit(unit: UnitVec3) -> ContactData {
        ContactData {
            theta: unit.as_array(),
            big_j: big_j(unit),
        }
    }

    /// Contact data at a point of the hyperquadric (hermitian convention).
    /// Fails off the quadric's chart (line at infinity).
    pub fn at_point(point: &ProjPoint) -> Result<ContactData, TwistorError> {
        let coords = coords_convenient(point)?;
        Ok(ContactData::from_unit(coords.unit))
    }

    /// Value of θ on a tangent vector of ℝ³ = (q, r, s).
    pub fn theta_on(&self, x: [f64; 3]) -> f64 {
        self.theta[0] * x[0] + self.theta[1] * x[1] + self.theta[2] * x[2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pp(z: [C64; 4]) -> ProjPoint {
        ProjPoint::new(z).unwrap()
    }

    #[test]
    fn canonical_representative_scales_largest_component_to_one() {
        let p = pp([c(0.0, 2.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.coords()[0], c(1.0, 0.0));
        assert_eq!(p.coords()[1], c(0.0, -0.5));
    }

    #[test]
    fn canonical_representative_breaks_ties_by_lowest_index() {
        let p = pp([c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)]);
        // Components 1 and 2 tie in modulus; index 1 wins.
        assert_eq!(p.coords()[1], c(1.0, 0.0));
        assert_eq!(p.coords()[2], c(0.0, -1.0));
    }

    #[test]
    fn zero_vector_is_rejected() {
        let z = [c(0.0, 0.0); 4];
        assert_eq!(ProjPoint::new(z).unwrap_err(), TwistorError::ZeroVector);
    }

    #[test]
    fn tau_project_basis_points() {
        let south = tau_project(&pp([c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        assert!((south.t + 1.0).abs() < 1e-15);
        assert!(south.zeta1.norm() < 1e-15 && south.zeta2.norm() < 1e-15);

        let mixed = tau_project(&pp([c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]));
        assert!(mixed.t.abs() < 1e-15);
        assert!(mixed.zeta1.norm() < 1e-15);
        assert!((mixed.zeta2 - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tau_image_is_unit_for_generic_points() {
        let p = pp([c(0.3, -1.2), c(0.7, 0.1), c(-0.4, 0.9), c(1.1, 0.2)]);
        let s = tau_project(&p);
        let norm = s.t * s.t + s.zeta1.norm_sqr() + s.zeta2.norm_sqr();
        assert!((norm - 1.0).abs() < 1e-14);
        Sphere4Point::new(s.t, s.zeta1, s.zeta2).unwrap();
    }

    #[test]
    fn stereo_fixes_equator_and_fails_at_pole() {
        let south = Sphere4Point::new(-1.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let img = stereo(&south).unwrap();
        assert!(img[0].norm() < 1e-15 && img[1].norm() < 1e-15);

        let equator = Sphere4Point::new(0.0, c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let img = stereo(&equator).unwrap();
        assert!((img[1] - c(1.0, 0.0)).norm() < 1e-15);

        let pole = Sphere4Point::new(1.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(stereo(&pole).unwrap_err(), TwistorError::ProjectionPole);
    }

    #[test]
    fn stereo_round_trips_off_the_pole() {
        let zeta = [c(0.3, -0.8), c(1.4, 0.2)];
        let sphere = stereo_inv(zeta);
        Sphere4Point::new(sphere.t, sphere.zeta1, sphere.zeta2).unwrap();
        let back = stereo(&sphere).unwrap();
        assert!((back[0] - zeta[0]).norm() < 1e-14);
        assert!((back[1] - zeta[1]).norm() < 1e-14);
    }

    #[test]
    fn convenient_chart_basis_points() {
        let z4 = coords_convenient(&pp([c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]))
            .unwrap();
        assert_eq!(
            [z4.p, z4.q, z4.r, z4.s],
            [0.0, 0.0, 0.0, 0.0]
        );
        assert!((z4.unit.u + 1.0).abs() < 1e-15);

        let z3 = coords_convenient(&pp([c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]))
            .unwrap();
        assert!((z3.unit.u - 1.0).abs() < 1e-15);

        let mix = coords_convenient(&pp([c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]))
            .unwrap();
        assert_eq!([mix.p, mix.q, mix.r, mix.s], [0.0, 0.0, 1.0, 0.0]);
        assert!((mix.unit.u - 1.0).abs() < 1e-15);
    }

    #[test]
    fn line_at_infinity_is_rejected() {
        let err =
            coords_convenient(&pp([c(1.0, 0.0), c(0.5, 0.5), c(0.0, 0.0), c(0.0, 0.0)]))
                .unwrap_err();
        assert_eq!(err, TwistorError::LineAtInfinity);
    }

    #[test]
    fn explicit_chart_matches_convenient_chart() {
        let samples = [
            (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
            (c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
            (c(0.3, -0.4), c(1.2, 0.7), c(-0.5, 0.8)),
            (c(-1.1, 2.0), c(0.05, -0.3), c(0.9, -1.7)),
        ];
        for (z1, z2, z3) in samples {
            let direct = coords_explicit(z1, z2, z3);
            let via = coords_convenient(&pp([z1, z2, z3, c(1.0, 0.0)])).unwrap();
            assert!((direct.p - via.p).abs() < 1e-13);
            assert!((direct.q - via.q).abs() < 1e-13);
            assert!((direct.r - via.r).abs() < 1e-13);
            assert!((direct.s - via.s).abs() < 1e-13);
            assert!((direct.unit.u - via.unit.u).abs() < 1e-13);
            assert!((direct.unit.v - via.unit.v).abs() < 1e-13);
            assert!((direct.unit.w - via.unit.w).abs() < 1e-13);
        }
    }

    #[test]
    fn explicit_chart_basis_point() {
        let coords = coords_explicit(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(
            [coords.p, coords.q, coords.r, coords.s],
            [1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(coords.unit.as_array(), [-1.0, 0.0, 0.0]);
    }

    #[test]
    fn quadric_conventions_related_by_unitary_change() {
        let samples = [
            [c(0.4, -0.2), c(1.0, 0.3), c(-0.7, 0.6), c(0.2, 0.9)],
            [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            [c(0.0, 1.0), c(0.5, 0.5), c(0.5, -0.5), c(0.0, -1.0)],
        ];
        for z in samples {
            let a = hermitian_to_modulus(&z);
            let lhs = hyperquadric_form(&z, QuadricConvention::Hermitian);
            let rhs = hyperquadric_form(&a, QuadricConvention::Modulus);
            assert!((lhs - rhs).abs() < 1e-13, "{lhs} vs {rhs}");
            let back = modulus_to_hermitian(&a);
            for k in 0..4 {
                assert!((back[k] - z[k]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn modulus_quadric_contains_balanced_points() {
        let on = pp([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(hyperquadric_residual(&on, QuadricConvention::Modulus).abs() < 1e-15);
        let off = pp([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(hyperquadric_residual(&off, QuadricConvention::Modulus) > 0.5);
    }

    #[test]
    fn jmat_squares_to_minus_identity() {
        let samples = [
            UnitVec3::new(1.0, 0.0, 0.0).unwrap(),
            UnitVec3::normalized(1.0, -2.0, 0.5).unwrap(),
            UnitVec3::normalized(-0.3, 0.1, 0.94).unwrap(),
        ];
        for unit in samples {
            let j = jmat(unit);
            let defect = (j * j + Matrix4::identity()).norm();
            assert!(defect < 1e-15, "defect {defect}");
        }
    }

    #[test]
    fn big_j_squares_to_minus_identity_on_tangent_directions() {
        let unit = UnitVec3::normalized(0.2, -0.7, 0.4).unwrap();
        let jj = big_j(unit) * big_j(unit);
        // On the R^4 factor J^2 = -Id outright.
        for k in 0..4 {
            let mut e = nalgebra::SVector::<f64, 7>::zeros();
            e[k] = 1.0;
            assert!((jj * e + e).norm() < 1e-15);
        }
        // On the sphere factor J^2 = -Id on vectors tangent to S² at the
        // unit vector.
        let tangent = {
            let mut t = nalgebra::SVector::<f64, 7>::zeros();
            // Gram-Schmidt e_u against the unit vector.
            let u = unit.as_array();
            let cand = [1.0 - u[0] * u[0], -u[0] * u[1], -u[0] * u[2]];
            let norm = (cand[0] * cand[0] + cand[1] * cand[1] + cand[2] * cand[2]).sqrt();
            for k in 0..3 {
                t[4 + k] = cand[k] / norm;
            }
            t
        };
        assert!((jj * tangent + tangent).norm() < 1e-13);
    }

    #[test]
    fn contact_form_evaluates_on_tangent_vectors() {
        let data = ContactData::from_unit(UnitVec3::new(1.0, 0.0, 0.0).unwrap());
        assert_eq!(data.theta_on([1.0, 0.0, 0.0]), 1.0);
        assert_eq!(data.theta_on([0.0, 5.0, -2.0]), 0.0);
    }
}
