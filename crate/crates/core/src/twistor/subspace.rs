//! Classification of real-linear subspaces of ℂ³ by their interaction with
//! multiplication by i.
//!
//! A subspace `T ⊆ ℝ⁶ ≅ ℂ³` of real codimension 1, 2 or 3 is labelled by
//! the complex dimension of `H = T ∩ JT`, the largest complex subspace it
//! contains. Rank decisions use an SVD with threshold 1e-9 relative to the
//! largest singular value; inputs are expected to be far from degenerate,
//! and borderline ranks are reported as errors rather than guessed.

use nalgebra::DMatrix;

use super::TwistorError;

/// Relative SVD threshold for rank decisions.
pub(crate) const RANK_TOL: f64 = 1e-9;

/// Labels for subspaces of ℝ⁶ ≅ ℂ³ by codimension and complex content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceLabel {
    /// Codimension 1; always contains a complex plane.
    Hypersurface,
    /// Codimension 2 containing a complex line but not a complex plane.
    Generic,
    /// Codimension 2 equal to a complex plane.
    Complex,
    /// Codimension 3 meeting its rotation only at the origin.
    TotallyReal,
    /// Codimension 3 containing a complex line.
    CrDimOne,
}

impl SubspaceLabel {
    /// Stable lowercase name, used in exports.
    pub fn name(&self) -> &'static str {
        match self {
            SubspaceLabel::Hypersurface => "hypersurface",
            SubspaceLabel::Generic => "generic",
            SubspaceLabel::Complex => "complex",
            SubspaceLabel::TotallyReal => "totally-real",
            SubspaceLabel::CrDimOne => "cr-dim-1",
        }
    }
}

/// Result of classifying a subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubspaceClass {
    /// The label.
    pub label: SubspaceLabel,
    /// Complex dimension of `T ∩ JT`.
    pub hdim: usize,
}

/// Multiplication by i on ℝ⁶ with coordinates `(x₁, y₁, x₂, y₂, x₃, y₃)`.
fn rotate(v: &[f64; 6]) -> [f64; 6] {
    [-v[1], v[0], -v[3], v[2], -v[5], v[4]]
}

fn rank(m: &DMatrix<f64>) -> usize {
    if m.ncols() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > RANK_TOL * max)
        .count()
}

/// Classifies the span of `vectors` inside ℝ⁶ ≅ ℂ³.
///
/// Accepts 3, 4 or 5 spanning vectors (codimension 3, 2, 1). The vectors
/// must be linearly independent.
pub fn classify_subspace(vectors: &[[f64; 6]]) -> Result<SubspaceClass, TwistorError> {
    let n = vectors.len();
    if !(3..=5).contains(&n) {
        return Err(TwistorError::UnsupportedCodimension {
            codim: 6 - n as isize,
        });
    }
    let t = DMatrix::from_fn(6, n, |i, j| vectors[j][i]);
    let t_rank = rank(&t);
    if t_rank < n {
        return Err(TwistorError::DependentBasis {
            rank: t_rank,
            count: n,
        });
    }
    let mut both = DMatrix::zeros(6, 2 * n);
    for j in 0..n {
        let jv = rotate(&vectors[j]);
        for i in 0..6 {
            both[(i, j)] = vectors[j][i];
            both[(i, n + j)] = jv[i];
        }
    }
    let span_rank = rank(&both).min(6);
    let h_dim_real = 2 * n - span_rank;
    if !h_dim_real.is_multiple_of(2) {
        return Err(TwistorError::AmbiguousRank { dim: h_dim_real });
    }
    let hdim = h_dim_real / 2;
    let label = match (6 - n, hdim) {
        (1, 2) => SubspaceLabel::Hypersurface,
        (2, 2) => SubspaceLabel::Complex,
        (2, 1) => SubspaceLabel::Generic,
        (3, 1) => SubspaceLabel::CrDimOne,
        (3, 0) => SubspaceLabel::TotallyReal,
        (_, dim) => {
            // Codimension 1 forces hdim 2; anything else means the rank
            // computation contradicted itself.
            return Err(TwistorError::AmbiguousRank { dim: 2 * dim });
        }
    };
    Ok(SubspaceClass { label, hdim })
}

/// Sine of the largest principal angle between two subspaces of ℝⁿ given by
/// spanning sets (columns are orthonormalized internally). Zero exactly
/// when the spans coincide; 1 when some direction of one is orthogonal to
/// all of the other.
pub fn max_principal_angle_sin(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let qa = orthonormal_basis(a);
    let qb = orthonormal_basis(b);
    if qa.ncols() == 0 || qb.ncols() == 0 || qa.ncols() != qb.ncols() {
        return 1.0;
    }
    // Largest singular value of (I - Qa Qaᵀ) Qb: the sines of the
    // principal angles directly, with full precision near zero where
    // √(1 - cos²) would lose half the digits.
    let proj = &qa * (qa.transpose() * &qb);
    let resid = qb - proj;
    let svd = resid.svd(false, false);
    svd.singular_values
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max)
        .clamp(0.0, 1.0)
}

fn orthonormal_basis(vectors: &[Vec<f64>]) -> DMatrix<f64> {
    if vectors.is_empty() {
        return DMatrix::zeros(0, 0);
    }
    let dim = vectors[0].len();
    let m = DMatrix::from_fn(dim, vectors.len(), |i, j| vectors[j][i]);
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let keep = svd
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_TOL * max.max(f64::MIN_POSITIVE))
        .count();
    u.columns(0, keep).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Coordinates on R^6 are (x1, y1, x2, y2, x3, y3).
    fn e(idx: usize) -> [f64; 6] {
        let mut v = [0.0; 6];
        v[idx] = 1.0;
        v
    }

    #[test]
    fn hypersurface_has_hdim_two() {
        let class = classify_subspace(&[e(0), e(1), e(2), e(3), e(4)]).unwrap();
        assert_eq!(class.label, SubspaceLabel::Hypersurface);
        assert_eq!(class.hdim, 2);
    }

    #[test]
    fn complex_plane_is_detected() {
        let class = classify_subspace(&[e(0), e(1), e(2), e(3)]).unwrap();
        assert_eq!(class.label, SubspaceLabel::Complex);
        assert_eq!(class.hdim, 2);
    }

    #[test]
    fn generic_codim_two_has_hdim_one() {
        let class = classify_subspace(&[e(0), e(1), e(2), e(4)]).unwrap();
        assert_eq!(class.label, SubspaceLabel::Generic);
        assert_eq!(class.hdim, 1);
    }

    #[test]
    fn totally_real_three_space() {
        let class = classify_subspace(&[e(0), e(2), e(4)]).unwrap();
        assert_eq!(class.label, SubspaceLabel::TotallyReal);
        assert_eq!(class.hdim, 0);
    }

    #[test]
    fn three_space_with_complex_line() {
        let class = classify_subspace(&[e(0), e(1), e(2)]).unwrap();
        assert_eq!(class.label, SubspaceLabel::CrDimOne);
        assert_eq!(class.hdim, 1);
    }

    #[test]
    fn labels_survive_a_complex_linear_change_of_frame() {
        // The shear (z1, z2, z3) -> (z1 + i z3, z2, z3 + (1-i) z1) is
        // complex-linear, so it preserves every label.
        let shear = |v: &[f64; 6]| -> [f64; 6] {
            let (x1, y1, x2, y2, x3, y3) = (v[0], v[1], v[2], v[3], v[4], v[5]);
            // z1' = z1 + i z3, z3' = z3 + (1 - i) z1.
            [
                x1 - y3,
                y1 + x3,
                x2,
                y2,
                x3 + x1 + y1,
                y3 + y1 - x1,
            ]
        };
        let cases: [(Vec<[f64; 6]>, SubspaceLabel); 3] = [
            (vec![e(0), e(2), e(4)], SubspaceLabel::TotallyReal),
            (vec![e(0), e(1), e(2)], SubspaceLabel::CrDimOne),
            (vec![e(0), e(1), e(2), e(3)], SubspaceLabel::Complex),
        ];
        for (basis, label) in cases {
            let sheared: Vec<[f64; 6]> = basis.iter().map(shear).collect();
            let class = classify_subspace(&sheared).unwrap();
            assert_eq!(class.label, label);
        }
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let doubled = [e(0), e(0), e(2)];
        assert!(matches!(
            classify_subspace(&doubled),
            Err(TwistorError::DependentBasis { .. })
        ));
    }

    #[test]
    fn unsupported_codimension_is_rejected() {
        assert!(matches!(
            classify_subspace(&[e(0), e(1)]),
            Err(TwistorError::UnsupportedCodimension { codim: 4 })
        ));
        let six = [e(0), e(1), e(2), e(3), e(4), e(5)];
        assert!(matches!(
            classify_subspace(&six),
            Err(TwistorError::UnsupportedCodimension { codim: 0 })
        ));
    }

    #[test]
    fn principal_angle_zero_for_equal_spans() {
        let a = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        // Same plane, different spanning set.
        let b = vec![vec![1.0, 1.0, 0.0], vec![1.0, -1.0, 0.0]];
        assert!(max_principal_angle_sin(&a, &b) < 1e-14);
    }

    #[test]
    fn principal_angle_detects_tilt() {
        let a = vec![vec![1.0, 0.0, 0.0]];
        let theta: f64 = 0.3;
        let b = vec![vec![theta.cos(), theta.sin(), 0.0]];
        let got = max_principal_angle_sin(&a, &b);
        assert!((got - theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn principal_angle_one_for_orthogonal_lines() {
        let a = vec![vec![1.0, 0.0, 0.0]];
        let b = vec![vec![0.0, 0.0, 1.0]];
        assert!((max_principal_angle_sin(&a, &b) - 1.0).abs() < 1e-14);
    }
}
