//! Randomized algebraic properties of the chart maps, the structure
//! matrices, the expression jets, and the null-form factory.

use proptest::prelude::*;

use twistleaf::expr::parse;
use twistleaf::nullform::make_omega;
use twistleaf::twistor::{
    big_j, coords_convenient, hat, hermitian_to_modulus, hyperquadric_form, jmat,
    modulus_to_hermitian, stereo, tau_project, ProjPoint, QuadricConvention, UnitVec3,
};
use twistleaf::C64;

fn cx() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn homogeneous() -> impl Strategy<Value = [C64; 4]> {
    [cx(), cx(), cx(), cx()].prop_filter("representative must not be tiny", |z| {
        z.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-2
    })
}

fn unit() -> impl Strategy<Value = UnitVec3> {
    [(-1.0..1.0f64), (-1.0..1.0f64), (-1.0..1.0f64)]
        .prop_filter_map("direction must have usable length", |[x, y, z]| {
            UnitVec3::normalized(x, y, z).ok()
        })
}

proptest! {
    #[test]
    fn projection_lands_on_the_unit_sphere(z in homogeneous()) {
        let p = ProjPoint::new(z).unwrap();
        let s = tau_project(&p);
        let n = s.t * s.t + s.zeta1.norm_sqr() + s.zeta2.norm_sqr();
        prop_assert!((n - 1.0).abs() < 1e-12, "norm {n}");
    }

    #[test]
    fn stereographic_projection_commutes_with_the_chart(z in homogeneous()) {
        let n34 = z[2].norm_sqr() + z[3].norm_sqr();
        let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>();
        // Away from the line at infinity both maps are well conditioned.
        prop_assume!(n34 > 1e-3 * n);
        let p = ProjPoint::new(z).unwrap();
        let via_sphere = stereo(&tau_project(&p)).unwrap();
        let chart = coords_convenient(&p).unwrap();
        let direct = [C64::new(chart.p, chart.q), C64::new(chart.r, chart.s)];
        prop_assert!((via_sphere[0] - direct[0]).norm() < 1e-10);
        prop_assert!((via_sphere[1] - direct[1]).norm() < 1e-10);
    }

    #[test]
    fn quadric_conventions_agree_through_the_unitary(z in homogeneous()) {
        let scale = z.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let moved = hermitian_to_modulus(&z);
        let a = hyperquadric_form(&z, QuadricConvention::Hermitian);
        let b = hyperquadric_form(&moved, QuadricConvention::Modulus);
        prop_assert!((a - b).abs() < 1e-12 * scale.max(1.0), "{a} vs {b}");
        let back = modulus_to_hermitian(&moved);
        for k in 0..4 {
            prop_assert!((back[k] - z[k]).norm() < 1e-13 * scale.sqrt().max(1.0));
        }
    }

    #[test]
    fn structure_matrices_square_to_minus_identity(u in unit()) {
        let j = jmat(u);
        let jj = j * j;
        for a in 0..4 {
            for b in 0..4 {
                let want = if a == b { -1.0 } else { 0.0 };
                prop_assert!((jj[(a, b)] - want).abs() < 1e-13);
            }
        }
        // The cross-product matrix squares to −Id on the tangent plane.
        let h = hat(u);
        let hh = h * h;
        let udir = nalgebra::Vector3::new(u.u, u.v, u.w);
        for t in [
            nalgebra::Vector3::new(1.0, 0.0, 0.0),
            nalgebra::Vector3::new(0.0, 1.0, 0.0),
            nalgebra::Vector3::new(0.0, 0.0, 1.0),
        ] {
            let tang = t - udir * udir.dot(&t);
            let got = hh * tang;
            prop_assert!((got + tang).norm() < 1e-13);
        }
    }

    #[test]
    fn ambient_structure_squares_to_minus_identity_on_tangents(
        u in unit(),
        x in prop::array::uniform7(-2.0..2.0f64),
    ) {
        // Project the sphere part onto the tangent plane at u.
        let mut v = x;
        let dot = x[4] * u.u + x[5] * u.v + x[6] * u.w;
        v[4] -= dot * u.u;
        v[5] -= dot * u.v;
        v[6] -= dot * u.w;
        let j = big_j(u);
        let xv = nalgebra::SVector::<f64, 7>::from_row_slice(&v);
        let got = j * (j * xv);
        prop_assert!((got + xv).norm() < 1e-12);
    }

    #[test]
    fn factory_forms_are_null(z in cx(), w in cx()) {
        let om = make_omega(z, w);
        let scale = (z.norm() + w.norm()).powi(4).max(1.0);
        prop_assert!(om.nullity().norm() < 1e-13 * scale);
    }

    #[test]
    fn factory_forms_are_homogeneous_of_degree_two(z in cx(), w in cx()) {
        prop_assume!(w.norm() > 0.1);
        let zeta = z / w;
        prop_assume!(zeta.norm() < 1e3);
        let om = make_omega(z, w).coefficients();
        let chart = make_omega(zeta, C64::new(1.0, 0.0)).coefficients();
        let w2 = w * w;
        let scale = (1.0 + zeta.norm()).powi(2);
        for k in 0..3 {
            prop_assert!((om[k] / w2 - chart[k]).norm() < 1e-10 * scale);
        }
    }

    #[test]
    fn companion_forms_annihilate_the_null_form(z in cx(), w in cx()) {
        // σ₁ = z dq + iw dr + w ds and σ₂ = w dq + iz dr − z ds pair to
        // zero with ω under the complex-bilinear dot.
        let i = C64::i();
        let om = make_omega(z, w).coefficients();
        let s1 = [z, i * w, w];
        let s2 = [w, i * z, -z];
        let scale = (z.norm() + w.norm()).powi(3).max(1.0);
        let dot1: C64 = (0..3).map(|k| s1[k] * om[k]).sum();
        let dot2: C64 = (0..3).map(|k| s2[k] * om[k]).sum();
        prop_assert!(dot1.norm() < 1e-13 * scale);
        prop_assert!(dot2.norm() < 1e-13 * scale);
    }

    #[test]
    fn tangent_vector_of_the_chart_is_orthogonal_to_the_direction(z in cx()) {
        // Z = (2z, i(1+z²), 1−z²) pairs to zero with the unit direction of
        // the chart value z.
        let i = C64::i();
        let big = [2.0 * z, i * (1.0 + z * z), 1.0 - z * z];
        let u = twistleaf::foliation::field_from_z(z).as_array();
        let dot: C64 = (0..3).map(|k| big[k] * u[k]).sum();
        let scale = (1.0 + z.norm()).powi(3);
        prop_assert!(dot.norm() < 1e-13 * scale, "dot {dot}");
    }
}

const JET_POOL: [&str; 6] = [
    "z1^2*z2 - 3*z2",
    "exp(z1) - 1",
    "sin(z1*z2)",
    "(z1 + 2*z2)^3/7",
    "1/(1 + z1/4)",
    "z1*cos(z2) + i*z1^2",
];

proptest! {
    #[test]
    fn jet_partials_match_finite_differences(
        idx in 0usize..JET_POOL.len(),
        re1 in -0.7..0.7f64, im1 in -0.7..0.7f64,
        re2 in -0.7..0.7f64, im2 in -0.7..0.7f64,
    ) {
        let expr = parse(JET_POOL[idx], &["z1", "z2"]).unwrap();
        let p = [C64::new(re1, im1), C64::new(re2, im2)];
        let jet = expr.eval_jet2(&p).unwrap();
        let f = |x: [C64; 2]| expr.eval(&x).unwrap();

        let h = 1e-5;
        for v in 0..2 {
            let mut hi = p;
            let mut lo = p;
            hi[v] += h;
            lo[v] -= h;
            let fd = (f(hi) - f(lo)) / (2.0 * h);
            let want = jet.d(v);
            prop_assert!(
                (fd - want).norm() < 1e-7 * (1.0 + want.norm()),
                "d{v}: {fd} vs {want}"
            );
        }

        let h2 = 1e-4;
        for v in 0..2 {
            let mut hi = p;
            let mut lo = p;
            hi[v] += h2;
            lo[v] -= h2;
            let fd = (f(hi) - 2.0 * f(p) + f(lo)) / (h2 * h2);
            let want = jet.d2(v, v);
            prop_assert!(
                (fd - want).norm() < 1e-5 * (1.0 + want.norm()),
                "d2({v},{v}): {fd} vs {want}"
            );
        }
        let mut pp = p;
        let mut pm = p;
        let mut mp = p;
        let mut mm = p;
        pp[0] += h2; pp[1] += h2;
        pm[0] += h2; pm[1] -= h2;
        mp[0] -= h2; mp[1] += h2;
        mm[0] -= h2; mm[1] -= h2;
        let fd = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h2 * h2);
        let want = jet.d2(0, 1);
        prop_assert!(
            (fd - want).norm() < 1e-5 * (1.0 + want.norm()),
            "d2(0,1): {fd} vs {want}"
        );
        prop_assert_eq!(jet.d2(0, 1), jet.d2(1, 0));
    }

    #[test]
    fn printed_expressions_reparse_to_the_same_function(
        idx in 0usize..JET_POOL.len(),
        re1 in -0.6..0.6f64, im1 in -0.6..0.6f64,
        re2 in -0.6..0.6f64, im2 in -0.6..0.6f64,
    ) {
        let expr = parse(JET_POOL[idx], &["z1", "z2"]).unwrap();
        let reparsed = parse(&expr.to_text(), &["z1", "z2"]).unwrap();
        let p = [C64::new(re1, im1), C64::new(re2, im2)];
        let a = expr.eval(&p).unwrap();
        let b = reparsed.eval(&p).unwrap();
        prop_assert!((a - b).norm() < 1e-13 * (1.0 + a.norm()), "{a} vs {b}");
    }
}
