//! Pointwise tests that a unit vector field is tangent to a conformal
//! foliation, in four independent formulations.
//!
//! All of them consume a field abstractly (anything implementing
//! [`Field3`]/[`Field4`]) and differentiate it by central differences, so the
//! same code tests closed-form fields, Newton-solved fields, and deliberately
//! broken controls.

use nalgebra::{Matrix3, Vector3};

use crate::field::{
    central_diff3, central_diff4, C64, FdStep, Field3, Field4, FieldError, Vec3, Vec4,
};
use crate::twistor::{big_j, hat, max_principal_angle_sin, UnitVec3};

/// First-order test `2z z_q + i(1+z²) z_r + (1−z²) z_s` on a fibre-chart
/// scalar field, with partials by central differences.
///
/// Vanishes iff the unit field carried by `z` is tangent to a conformal
/// foliation wherever the chart applies.
pub fn conformal_pde_residual<F>(zfield: &F, point: Vec3, fd: FdStep) -> Result<C64, FieldError>
where
    F: Field3<C64> + ?Sized,
{
    let z = zfield.at(point)?;
    let zq: C64 = central_diff3(zfield, point, 0, fd)?;
    let zr: C64 = central_diff3(zfield, point, 1, fd)?;
    let zs: C64 = central_diff3(zfield, point, 2, fd)?;
    let i = C64::i();
    Ok(2.0 * z * zq + i * (1.0 + z * z) * zr + (1.0 - z * z) * zs)
}

/// One application of the cyclic shift `(a, b, c) -> (b, c, a)`, iterated
/// `k` times. `cyc3(x, 3 - k)` inverts `cyc3(x, k)`.
fn cyc3(x: [f64; 3], k: usize) -> [f64; 3] {
    match k % 3 {
        0 => x,
        1 => [x[1], x[2], x[0]],
        _ => [x[2], x[0], x[1]],
    }
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Second-order frame test: returns
/// `(⟨U, ∇_X Y + ∇_Y X⟩, ⟨U, ∇_X X − ∇_Y Y⟩)` for the frame
/// `X = (−v, u, 0)`, `Y = (−uw, −vw, u²+v²)` spanning the orthogonal
/// complement of `U = (u, v, w)`.
///
/// Both components vanish iff the field is tangent to a conformal foliation
/// at the point. The frame degenerates where `u² + v² ≤ 1e−6`; there the
/// domain and range coordinates are permuted cyclically (a joint rotation,
/// which preserves conformality) until the permuted frame is usable.
pub fn conformality_frame_residual<F>(
    field: &F,
    point: Vec3,
    fd: FdStep,
) -> Result<(f64, f64), FieldError>
where
    F: Field3<UnitVec3> + ?Sized,
{
    let base = field.at(point)?.as_array();
    let mut shift = 0;
    for k in 0..3 {
        let b = cyc3(base, k);
        if b[0] * b[0] + b[1] * b[1] > 1e-6 {
            shift = k;
            break;
        }
    }
    let y0 = cyc3(point, shift);
    let u0 = cyc3(base, shift);

    // Permuted field: g = cyc^k ∘ U ∘ cyc^{3−k}, so g(y0) = u0.
    let g = |y: [f64; 3]| -> Result<[f64; 3], FieldError> {
        Ok(cyc3(field.at(cyc3(y, 3 - shift))?.as_array(), shift))
    };
    let xvec = |m: [f64; 3]| [-m[1], m[0], 0.0];
    let yvec = |m: [f64; 3]| [-m[0] * m[2], -m[1] * m[2], m[0] * m[0] + m[1] * m[1]];
    let x0 = xvec(u0);
    let yv0 = yvec(u0);

    let h = fd.base * (1.0 + point.iter().fold(0.0f64, |m, c| m.max(c.abs())));
    // Directional central difference of `frame ∘ g` along `dir` at y0.
    let deriv = |frame: &dyn Fn([f64; 3]) -> [f64; 3],
                 dir: [f64; 3]|
     -> Result<[f64; 3], FieldError> {
        let plus = [y0[0] + h * dir[0], y0[1] + h * dir[1], y0[2] + h * dir[2]];
        let minus = [y0[0] - h * dir[0], y0[1] - h * dir[1], y0[2] - h * dir[2]];
        let a = frame(g(plus)?);
        let b = frame(g(minus)?);
        Ok(std::array::from_fn(|i| (a[i] - b[i]) / (2.0 * h)))
    };

    let dx_y = deriv(&yvec, x0)?;
    let dy_x = deriv(&xvec, yv0)?;
    let dx_x = deriv(&xvec, x0)?;
    let dy_y = deriv(&yvec, yv0)?;

    let sum: [f64; 3] = std::array::from_fn(|i| dx_y[i] + dy_x[i]);
    let diff: [f64; 3] = std::array::from_fn(|i| dx_x[i] - dy_y[i]);
    Ok((dot3(u0, sum), dot3(u0, diff)))
}

fn skew(v: Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Rotation taking unit `a` to unit `b`, trig-free:
/// `R = I + [a×b]ₓ + [a×b]ₓ² / (1 + a·b)`. Requires `a·b > −1`.
fn rotation_between(a: Vector3<f64>, b: Vector3<f64>) -> Matrix3<f64> {
    let v = a.cross(&b);
    let c = a.dot(&b);
    let vx = skew(v);
    Matrix3::identity() + vx + vx * vx / (1.0 + c)
}

/// Rotation taking unit `c` to `e₁`, well-conditioned for every `c`.
/// Near `c = −e₁` the direct formula blows up, so a half-turn about `e₂`
/// is applied first.
fn rotation_to_e1(c: [f64; 3]) -> Matrix3<f64> {
    let cv = Vector3::new(c[0], c[1], c[2]);
    let e1 = Vector3::new(1.0, 0.0, 0.0);
    if cv.x >= -0.5 {
        rotation_between(cv, e1)
    } else {
        let half_turn = Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, -1.0));
        rotation_between(half_turn * cv, e1) * half_turn
    }
}

/// Integrability test for the almost-complex structure determined by a
/// field `(u, v, w)(p, q, r, s)` over a slab of ℝ⁴.
///
/// The four defining equations are stated at `(u, v, w) = (1, 0, 0)`; at a
/// general point the coordinates of `(q, r, s)` and the values are rotated
/// jointly (leaving `p` alone) by the rotation carrying the base value to
/// `(1, 0, 0)`, and the equations are evaluated there by central
/// differences. Returns the largest absolute violation of
/// `ṽ_p = w̃_q`, `ṽ_q = −w̃_p`, `ṽ_r = w̃_s`, `ṽ_s = −w̃_r`.
pub fn nijenhuis_residual<F>(field: &F, point: Vec4, fd: FdStep) -> Result<f64, FieldError>
where
    F: Field4<UnitVec3> + ?Sized,
{
    let base = field.at4(point)?.as_array();
    let rot = rotation_to_e1(base);
    let rot_t = rot.transpose();

    // Rotated field in offset coordinates: y = (dp, b) with b the rotated
    // displacement of (q, r, s) from the base point.
    let tilde = |y: Vec4| -> Result<[f64; 3], FieldError> {
        let b = rot_t * Vector3::new(y[1], y[2], y[3]);
        let x = [point[0] + y[0], point[1] + b.x, point[2] + b.y, point[3] + b.z];
        let m = field.at4(x)?.as_array();
        let r = rot * Vector3::new(m[0], m[1], m[2]);
        Ok([r.x, r.y, r.z])
    };

    let h = fd.base * (1.0 + point.iter().fold(0.0f64, |m, c| m.max(c.abs())));
    let fd_local = FdStep { base: h };
    // Offset coordinates vanish at the base point, so `along(0) = h` exactly.
    let d = |axis: usize| -> Result<[f64; 3], FieldError> {
        central_diff4(&tilde, [0.0; 4], axis, fd_local)
    };
    let dp = d(0)?;
    let dq = d(1)?;
    let dr = d(2)?;
    let ds = d(3)?;

    let violations = [
        dp[1] - dq[2], // ṽ_p − w̃_q
        dq[1] + dp[2], // ṽ_q + w̃_p
        dr[1] - ds[2], // ṽ_r − w̃_s
        ds[1] + dr[2], // ṽ_s + w̃_r
    ];
    Ok(violations.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Measures how far the graph of a field over a slab of ℝ⁴ is from being a
/// complex submanifold of the 7-dimensional twistor chart.
///
/// Builds the four tangent vectors `e_a ⊕ ∂_a U` of the graph, applies the
/// chart's almost-complex structure at the base value, and returns the
/// largest principal-angle sine between the tangent span and its image.
/// Zero iff the tangent space is invariant.
pub fn section_complex_tangency<F>(field: &F, point: Vec4, fd: FdStep) -> Result<f64, FieldError>
where
    F: Field4<UnitVec3> + ?Sized,
{
    let base = field.at4(point)?;
    let comp = |x: Vec4| -> Result<[f64; 3], FieldError> { Ok(field.at4(x)?.as_array()) };

    let mut tangent: Vec<Vec<f64>> = Vec::with_capacity(4);
    for axis in 0..4 {
        let du: [f64; 3] = central_diff4(&comp, point, axis, fd)?;
        let mut g = vec![0.0; 7];
        g[axis] = 1.0;
        g[4] = du[0];
        g[5] = du[1];
        g[6] = du[2];
        tangent.push(g);
    }

    let jj = big_j(base);
    let rotated: Vec<Vec<f64>> = tangent
        .iter()
        .map(|g| {
            let gv = nalgebra::SVector::<f64, 7>::from_iterator(g.iter().copied());
            let jg = jj * gv;
            jg.iter().copied().collect()
        })
        .collect();

    Ok(max_principal_angle_sin(&tangent, &rotated))
}

/// Measures how far the graph of a unit field over ℝ³ is from being a CR
/// submanifold of the 6-dimensional chart carrying the contact structure.
///
/// The graph's tangent space meets the contact distribution (the kernel of
/// `u dq + v dr + w ds`) in the plane of combinations `Σ aᵢ (e_i ⊕ ∂_i U)`
/// with `a ⊥ U`; the structure acts on that plane as `[U]ₓ` on both blocks.
/// Returns the largest principal-angle sine between the plane and its
/// image. Zero iff the field is tangent to a conformal foliation.
pub fn cr_tangency_residual<F>(field: &F, point: Vec3, fd: FdStep) -> Result<f64, FieldError>
where
    F: Field3<UnitVec3> + ?Sized,
{
    let base = field.at(point)?;
    let u0 = base.as_array();
    let comp = |x: Vec3| -> Result<[f64; 3], FieldError> { Ok(field.at(x)?.as_array()) };

    let mut du = [[0.0; 3]; 3];
    for (axis, slot) in du.iter_mut().enumerate() {
        *slot = central_diff3(&comp, point, axis, fd)?;
    }

    // Orthonormal pair spanning the plane normal to U, deterministically:
    // project out U from the coordinate axis least aligned with it.
    let k = (0..3)
        .min_by(|&i, &j| u0[i].abs().partial_cmp(&u0[j].abs()).unwrap())
        .unwrap();
    let mut a1 = [0.0; 3];
    a1[k] = 1.0;
    for i in 0..3 {
        a1[i] -= u0[k] * u0[i];
    }
    let n = dot3(a1, a1).sqrt();
    for x in &mut a1 {
        *x /= n;
    }
    let a2 = cross3(u0, a1);

    // E_i = a^i ⊕ Σ_j a^i_j ∂_j U, in coordinates (q, r, s, u, v, w).
    let span_vec = |a: [f64; 3]| -> Vec<f64> {
        let mut g = vec![0.0; 6];
        g[..3].copy_from_slice(&a);
        for j in 0..3 {
            for c in 0..3 {
                g[3 + c] += a[j] * du[j][c];
            }
        }
        g
    };
    let plane = vec![span_vec(a1), span_vec(a2)];

    let hv = hat(base);
    let apply = |g: &Vec<f64>| -> Vec<f64> {
        let top = hv * Vector3::new(g[0], g[1], g[2]);
        let bot = hv * Vector3::new(g[3], g[4], g[5]);
        vec![top.x, top.y, top.z, bot.x, bot.y, bot.z]
    };
    let image: Vec<Vec<f64>> = plane.iter().map(apply).collect();

    Ok(max_principal_angle_sin(&plane, &image))
}
