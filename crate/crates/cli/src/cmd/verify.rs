//! `verify-all`: a fixed battery covering every construction the tool
//! exposes, with pinned grids, seeds, and thresholds. The output carries
//! no samples, only the report set, and is byte-for-byte reproducible.

use clap::Args;
use nalgebra::{Matrix4, SVector};

use twistleaf::eikonal::{eikonal_residual, ProfileFn, SignedDistanceField};
use twistleaf::expr::{parse, parse_surface};
use twistleaf::field::{FdStep, FieldError, Vec3, Vec4};
use twistleaf::foliation::curves::integrate_curve;
use twistleaf::foliation::hopf::{hopf_closed_form, hopf_map, hopf_unit, hopf_z};
use twistleaf::foliation::residuals::{
    conformality_frame_residual, cr_tangency_residual, nijenhuis_residual,
};
use twistleaf::foliation::{grid_field, ImplicitSolver, SolverConfig, SurfaceFn};
use twistleaf::grid::{Axis, GridSpec3};
use twistleaf::newton::SolveError;
use twistleaf::nullform::{
    dzdw_degeneracy, grid_zw, jacobian_duality_check, make_omega, NurowskiSolver, XiMap,
    XiSolver, ZwSolve,
};
use twistleaf::twistor::{
    big_j, classify_subspace, coords_convenient, jmat, stereo, tau_project, ProjPoint,
    SubspaceLabel, UnitVec3,
};
use twistleaf::C64;

use crate::args::{CliError, CmdResult, OutputArgs, SolverArgs};
use crate::cmd::eikonal::oracle_distance;
use crate::cmd::form::{verify_form, FormThresholds};
use crate::output::{Document, Meta, Sample};
use crate::report::{all_pass, Accumulator, ResidualReport};

#[derive(Args, Debug)]
pub struct VerifyAllArgs {
    #[command(flatten)]
    pub solver: SolverArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

/// Deterministic 64-bit generator (splitmix64), so the battery needs no
/// external randomness and repeats exactly.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let unit = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * unit
    }
}

fn cube(lo: f64, hi: f64, n: usize) -> GridSpec3 {
    let axis = Axis::new(lo, hi, n).expect("fixed axis is valid");
    GridSpec3 {
        axes: [axis, axis, axis],
    }
}

pub fn run(args: VerifyAllArgs) -> CmdResult {
    let config = args.solver.config()?;
    let threads = args.solver.threads()?;
    let fd = FdStep {
        base: config.fd_step,
    };
    let mut reports: Vec<ResidualReport> = Vec::new();

    hopf_checks(config, threads, &mut reports)?;
    chart_checks(&mut reports);
    algebra_checks(&mut reports);
    graph_checks(config, threads, fd, &mut reports)?;
    slab_check(config, fd, &mut reports);
    pair_checks(config, threads, fd, &mut reports)?;
    worked_example_checks(config, threads, fd, &mut reports)?;
    duality_checks(config, threads, &mut reports)?;
    distance_checks(fd, &mut reports);
    classification_check(&mut reports);

    let meta = Meta::new("verify-all").arg("battery", "default");
    let passed = all_pass(&reports);
    Document {
        meta,
        grid: None,
        samples: Vec::new(),
        reports,
    }
    .write(&args.output)?;
    Ok(passed)
}

/// Closed-form field against the generic level-set solver, off the polar
/// axis, plus constancy of the first integral along an integral curve.
fn hopf_checks(
    config: SolverConfig,
    threads: usize,
    reports: &mut Vec<ResidualReport>,
) -> Result<(), CliError> {
    let spec = cube(-1.0, 1.0, 7);
    let expr = parse_surface("z1 - 1").expect("fixed expression parses");
    let solver = ImplicitSolver::new(SurfaceFn::Level(expr), config);
    let seed_point = [0.0, 1.0, 0.0];
    let seed = hopf_z(seed_point).expect("seed point is off the axis");
    let grid = grid_field(&solver, &spec, seed_point, seed, threads)
        .map_err(|e| CliError::Run(format!("level-surface seed solve failed: {e}")))?;

    let mut agreement = Accumulator::new("hopf-field-agreement", 1e-9);
    for idx in spec.indices() {
        let p = spec.point(idx);
        if p[1] * p[1] + p[2] * p[2] < 0.1 {
            continue;
        }
        let solved = grid.sample(idx);
        if !solved.status.is_ok() {
            agreement.poison(&p);
            continue;
        }
        match hopf_closed_form(p) {
            Ok((unit, _)) => {
                let a = unit.as_array();
                let b = solved.unit.as_array();
                let gap = (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0f64, f64::max);
                agreement.observe(gap, &p);
            }
            Err(_) => agreement.poison(&p),
        }
    }
    reports.push(agreement.finish());

    let mut drift = Accumulator::new("hopf-first-integral", 1e-6);
    let field = |p: Vec3| -> Result<UnitVec3, FieldError> { Ok(hopf_unit(p)) };
    let start = [0.0, 1.0, 0.0];
    match integrate_curve(&field, start, 0.02, 100) {
        Ok(points) => match hopf_map(points[0]) {
            Ok(base) => {
                for p in &points {
                    match hopf_map(*p) {
                        Ok(m) => drift.observe(
                            (m[0] - base[0]).abs().max((m[1] - base[1]).abs()),
                            p,
                        ),
                        Err(_) => drift.poison(p),
                    }
                }
            }
            Err(_) => drift.poison(&start),
        },
        Err(_) => drift.poison(&start),
    }
    reports.push(drift.finish());
    Ok(())
}

/// Projection to the sphere followed by the stereographic chart agrees
/// with the rational coordinate formulas, away from the polar line.
fn chart_checks(reports: &mut Vec<ResidualReport>) {
    let mut rng = SplitMix64(0x5EED_0001);
    let mut acc = Accumulator::new("chart-commutation", 1e-12);
    let mut made = 0usize;
    while made < 200 {
        let z: [C64; 4] =
            std::array::from_fn(|_| C64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
        let n: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        let n34 = z[2].norm_sqr() + z[3].norm_sqr();
        if n < 1e-2 || n34 < 1e-3 * n {
            continue;
        }
        let Ok(point) = ProjPoint::new(z) else { continue };
        let Ok(tc) = coords_convenient(&point) else {
            continue;
        };
        let Ok(chart) = stereo(&tau_project(&point)) else {
            continue;
        };
        let want = [C64::new(tc.p, tc.q), C64::new(tc.r, tc.s)];
        let gap = (chart[0] - want[0]).norm().max((chart[1] - want[1]).norm());
        acc.observe(gap, &[]);
        made += 1;
    }
    reports.push(acc.finish());
}

/// The two almost-complex structures square to minus the identity (the
/// ambient one on tangent vectors of the sphere factor), and factory
/// forms are algebraically null.
fn algebra_checks(reports: &mut Vec<ResidualReport>) {
    let mut rng = SplitMix64(0x5EED_0002);
    let mut chart = Accumulator::new("chart-structure-squares", 1e-13);
    let mut ambient = Accumulator::new("ambient-structure-squares", 1e-13);
    let mut made = 0usize;
    while made < 200 {
        let (x, y, z) = (
            rng.uniform(-1.0, 1.0),
            rng.uniform(-1.0, 1.0),
            rng.uniform(-1.0, 1.0),
        );
        let Ok(unit) = UnitVec3::normalized(x, y, z) else {
            continue;
        };
        let u = unit.as_array();

        let jm = jmat(unit);
        let sq = jm * jm + Matrix4::identity();
        let defect = sq.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        chart.observe(defect, &u);

        let mut t = [0.0f64; 7];
        for slot in t.iter_mut() {
            *slot = rng.uniform(-1.0, 1.0);
        }
        let dot = t[4] * u[0] + t[5] * u[1] + t[6] * u[2];
        for i in 0..3 {
            t[4 + i] -= dot * u[i];
        }
        let tv = SVector::<f64, 7>::from_row_slice(&t);
        let big = big_j(unit);
        let back = big * (big * tv);
        let defect = (0..7).map(|i| (back[i] + tv[i]).abs()).fold(0.0f64, f64::max);
        ambient.observe(defect, &u);

        made += 1;
    }
    reports.push(chart.finish());
    reports.push(ambient.finish());

    let mut rng = SplitMix64(0x5EED_0003);
    let mut nullity = Accumulator::new("nullity", 1e-13);
    for _ in 0..200 {
        let z = C64::new(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
        let w = C64::new(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
        nullity.observe(make_omega(z, w).nullity().norm(), &[]);
    }
    reports.push(nullity.finish());
}

/// The simplest graph surface: conformality of the solved field by all
/// three tests, and agreement of the two residual routes.
fn graph_checks(
    config: SolverConfig,
    threads: usize,
    fd: FdStep,
    reports: &mut Vec<ResidualReport>,
) -> Result<(), CliError> {
    let spec = cube(-0.4, 0.4, 5);
    let expr = parse("z1", &["z1", "z2"]).expect("fixed expression parses");
    let solver = ImplicitSolver::new(SurfaceFn::Graph(expr), config);
    let grid = grid_field(&solver, &spec, [0.0; 3], C64::new(0.0, 0.0), threads)
        .map_err(|e| CliError::Run(format!("graph-surface seed solve failed: {e}")))?;

    let mut pde = Accumulator::new("graph-pde", 1e-5);
    let mut route = Accumulator::new("graph-route-gap", 1e-5);
    let mut frame = Accumulator::new("graph-frame", 1e-5);
    let mut cr = Accumulator::new("graph-cr", 1e-5);
    for idx in spec.indices() {
        let fs = grid.sample(idx);
        if !fs.status.is_ok() || !spec.is_interior(idx) {
            continue;
        }
        let seed = fs.z;
        let uf = |p: Vec3| solver.solve_ok(p, seed).map(|s| s.unit);
        match solver.pde_residual_fd(fs.point, seed) {
            Ok(v) => {
                pde.observe(v.norm(), &fs.point);
                match solver.pde_residual_implicit(fs.point, seed) {
                    Ok(w) => route.observe((w - v).norm(), &fs.point),
                    Err(_) => route.poison(&fs.point),
                }
            }
            Err(_) => {
                pde.poison(&fs.point);
                route.poison(&fs.point);
            }
        }
        match conformality_frame_residual(&uf, fs.point, fd) {
            Ok((a, b)) => frame.observe(a.abs().max(b.abs()), &fs.point),
            Err(_) => frame.poison(&fs.point),
        }
        match cr_tangency_residual(&uf, fs.point, fd) {
            Ok(v) => cr.observe(v, &fs.point),
            Err(_) => cr.poison(&fs.point),
        }
    }
    reports.push(pde.finish());
    reports.push(route.finish());
    reports.push(frame.finish());
    reports.push(cr.finish());
    Ok(())
}

/// Integrability of the almost-complex structure built from the extended
/// field over a slab of R^4.
fn slab_check(config: SolverConfig, fd: FdStep, reports: &mut Vec<ResidualReport>) {
    let expr = parse("z1", &["z1", "z2"]).expect("fixed expression parses");
    let solver = ImplicitSolver::new(SurfaceFn::Graph(expr), config);
    let f4 = |p: Vec4| -> Result<UnitVec3, FieldError> {
        let s = solver.solve_at4(p, C64::new(0.0, 0.0));
        if s.status.is_ok() {
            Ok(s.unit)
        } else {
            Err(FieldError::OutsideDomain {
                at: [p[1], p[2], p[3]],
                reason: "slab solve failed".to_string(),
            })
        }
    };
    let mut acc = Accumulator::new("slab-integrability", 1e-5);
    let axis = Axis::new(-0.3, 0.3, 5).expect("fixed axis is valid");
    for a in 1..4 {
        for b in 1..4 {
            for c in 1..4 {
                for d in 1..4 {
                    let p = [axis.at(a), axis.at(b), axis.at(c), axis.at(d)];
                    match nijenhuis_residual(&f4, p, fd) {
                        Ok(v) => acc.observe(v, &p),
                        Err(_) => acc.poison(&p),
                    }
                }
            }
        }
    }
    reports.push(acc.finish());
}

/// The full form battery for a quadratic Lagrangian potential, through the
/// same code path the `xi-form` command uses.
fn pair_checks(
    config: SolverConfig,
    threads: usize,
    fd: FdStep,
    reports: &mut Vec<ResidualReport>,
) -> Result<(), CliError> {
    let spec = cube(-0.25, 0.25, 5);
    let expr = parse("z1^2/2 - z2", &["z1", "z2"]).expect("fixed expression parses");
    let solver = XiSolver::new(XiMap::Potential(expr), config);
    let seed = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    let grid = grid_zw(&solver, &spec, [0.0; 3], seed, threads)
        .map_err(|e| CliError::Run(format!("pair seed solve failed: {e}")))?;

    let t = FormThresholds {
        closedness: 1e-6,
        key_operator: 1e-6,
        nullity: 1e-13,
        loop_closure: 1e-8,
        potential: 1e-6,
        conformality: 1e-6,
    };
    let mut scratch: Vec<Sample> = spec
        .indices()
        .map(|idx| Sample::at(&spec.point(idx)))
        .collect();
    let mut sub = Vec::new();
    verify_form(&solver, &spec, &grid, seed, fd, &t, &mut scratch, &mut sub);
    for mut report in sub {
        report.name = format!("pair-{}", report.name);
        reports.push(report);
    }
    Ok(())
}

/// The inverse-cubic family has a closed-form solution and form; the
/// solved field must reproduce both, and its graph (like the reciprocal
/// family's) must be degenerate as a graph over the pair coordinates.
fn worked_example_checks(
    config: SolverConfig,
    threads: usize,
    fd: FdStep,
    reports: &mut Vec<ResidualReport>,
) -> Result<(), CliError> {
    let spec = cube(-0.3, 0.3, 5);
    let solver = XiSolver::new(XiMap::InverseCubic, config);
    let seed = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    let grid = grid_zw(&solver, &spec, [0.0; 3], seed, threads)
        .map_err(|e| CliError::Run(format!("inverse-cubic seed solve failed: {e}")))?;

    let mut pair = Accumulator::new("worked-example-pair", 1e-9);
    let mut form = Accumulator::new("worked-example-form", 1e-9);
    for idx in spec.indices() {
        let fs = grid.sample(idx);
        if !fs.status.is_ok() {
            pair.poison(&fs.point);
            continue;
        }
        let [_, r, s] = fs.point;
        let square = C64::new(1.0 + s, r);
        let want_w = square.sqrt();
        pair.observe(fs.z.norm().max((fs.w - want_w).norm()), &fs.point);

        let om = fs.omega();
        let want = [
            C64::new(0.0, 0.0),
            C64::i() * square,
            square,
        ];
        let gap = (om.a - want[0])
            .norm()
            .max((om.b - want[1]).norm())
            .max((om.c - want[2]).norm());
        form.observe(gap, &fs.point);
    }
    reports.push(pair.finish());
    reports.push(form.finish());

    let mut flat = Accumulator::new("degeneracy-flatness", 1e-9);
    let solved = |p: Vec3| {
        let near = grid.sample(spec.nearest(p));
        let sd = if near.status.is_ok() {
            (near.z, near.w)
        } else {
            seed
        };
        solver.solve_zw_ok(p, sd).map(|s| (s.z, s.w))
    };
    match dzdw_degeneracy(&solved, [0.0; 3], fd) {
        Ok(v) => flat.observe(v, &[0.0; 3]),
        Err(_) => flat.poison(&[0.0; 3]),
    }
    let reciprocal = |p: Vec3| -> Result<(C64, C64), FieldError> {
        let [_, r, s] = p;
        Ok((C64::new(0.0, 0.0), 1.0 / C64::new(1.0 + s, r)))
    };
    match dzdw_degeneracy(&reciprocal, [0.0; 3], fd) {
        Ok(v) => flat.observe(v, &[0.0; 3]),
        Err(_) => flat.poison(&[0.0; 3]),
    }
    reports.push(flat.finish());
    Ok(())
}

/// Hessian duality between the Lagrangian and graph potentials: the
/// quadratic pair agrees pointwise and passes the independent Jacobian
/// check; a linear surface datum is rejected as singular.
fn duality_checks(
    config: SolverConfig,
    threads: usize,
    reports: &mut Vec<ResidualReport>,
) -> Result<(), CliError> {
    let xi = parse("z1^2/2 + z2^2/2 - z2", &["z1", "z2"]).expect("fixed expression parses");
    let dual = parse("-z^2/2 - w^2/2 + w", &["z", "w"]).expect("fixed expression parses");

    let mut residual = Accumulator::new("duality-residual", 1e-8);
    let probes = [
        [C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.2, 0.05), C64::new(-0.1, 0.02)],
        [C64::new(-0.15, -0.03), C64::new(0.12, -0.08)],
        [C64::new(0.05, 0.1), C64::new(0.2, 0.1)],
        [C64::new(-0.2, 0.08), C64::new(-0.15, 0.05)],
    ];
    for probe in probes {
        match jacobian_duality_check(&xi, probe) {
            Ok(v) => residual.observe(v, &[]),
            Err(_) => residual.poison(&[]),
        }
    }
    reports.push(residual.finish());

    let spec = cube(-0.25, 0.25, 5);
    let seed = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    let xi_solver = XiSolver::new(XiMap::Potential(xi), config);
    let f_solver = NurowskiSolver::new(dual, config);
    let xi_grid = grid_zw(&xi_solver, &spec, [0.0; 3], seed, threads)
        .map_err(|e| CliError::Run(format!("duality seed solve failed: {e}")))?;
    let f_grid = grid_zw(&f_solver, &spec, [0.0; 3], seed, threads)
        .map_err(|e| CliError::Run(format!("duality seed solve failed: {e}")))?;
    let mut agreement = Accumulator::new("duality-route-agreement", 1e-7);
    for idx in spec.indices() {
        let a = xi_grid.sample(idx);
        let b = f_grid.sample(idx);
        match (a.status.is_ok(), b.status.is_ok()) {
            (true, true) => {
                agreement.observe((a.z - b.z).norm().max((a.w - b.w).norm()), &a.point)
            }
            (false, false) => {}
            _ => agreement.poison(&a.point),
        }
    }
    reports.push(agreement.finish());

    let mut singular = Accumulator::new("duality-singular-rejected", 0.5);
    let linear = parse("z2", &["z1", "z2"]).expect("fixed expression parses");
    let verdict = match jacobian_duality_check(&linear, [C64::new(0.0, 0.0); 2]) {
        Err(SolveError::SingularJacobian { .. }) => 0.0,
        _ => 1.0,
    };
    singular.observe(verdict, &[]);
    reports.push(singular.finish());
    Ok(())
}

/// Signed distance to the bump curve: unit gradient, conformality of the
/// lifted field, and agreement with the derivative-free oracle.
fn distance_checks(fd: FdStep, reports: &mut Vec<ResidualReport>) {
    let profile = ProfileFn::Bump {
        amplitude: 1.0,
        radius: 1.0,
    };
    let axes = [
        Axis::new(-1.5, 1.5, 13).expect("fixed axis is valid"),
        Axis::new(0.4, 1.2, 7).expect("fixed axis is valid"),
    ];
    let mut unit_gradient = Accumulator::new("distance-eikonal", 1e-6);
    let mut frame = Accumulator::new("distance-frame", 1e-5);
    let mut cr = Accumulator::new("distance-cr", 1e-5);
    let mut oracle = Accumulator::new("distance-oracle", 1e-8);

    match SignedDistanceField::sample(profile, axes) {
        Ok(field) => {
            let uf = |p: Vec3| twistleaf::eikonal::distance_foliation_field(&field, p);
            for i in 1..axes[0].count - 1 {
                for j in 1..axes[1].count - 1 {
                    let (r, s) = (axes[0].at(i), axes[1].at(j));
                    match eikonal_residual(&field, [r, s], fd) {
                        Ok(v) => unit_gradient.observe(v, &[r, s]),
                        Err(_) => unit_gradient.poison(&[r, s]),
                    }
                    match conformality_frame_residual(&uf, [0.0, r, s], fd) {
                        Ok((a, b)) => frame.observe(a.abs().max(b.abs()), &[r, s]),
                        Err(_) => frame.poison(&[r, s]),
                    }
                    match cr_tangency_residual(&uf, [0.0, r, s], fd) {
                        Ok(v) => cr.observe(v, &[r, s]),
                        Err(_) => cr.poison(&[r, s]),
                    }
                }
            }
            for &fr in &[0.25, 0.5, 0.75] {
                for &fs in &[0.25, 0.5, 0.75] {
                    let probe = [
                        axes[0].min + fr * (axes[0].max - axes[0].min),
                        axes[1].min + fs * (axes[1].max - axes[1].min),
                    ];
                    match field.rho_at(probe) {
                        Ok((rho, _)) => {
                            let brute = oracle_distance(field.profile(), probe);
                            oracle.observe((rho.abs() - brute).abs(), &probe);
                        }
                        Err(_) => oracle.poison(&probe),
                    }
                }
            }
        }
        Err(_) => {
            unit_gradient.poison(&[0.0, 0.0]);
            frame.poison(&[0.0, 0.0]);
            cr.poison(&[0.0, 0.0]);
            oracle.poison(&[0.0, 0.0]);
        }
    }
    reports.push(unit_gradient.finish());
    reports.push(frame.finish());
    reports.push(cr.finish());
    reports.push(oracle.finish());
}

/// Hand-built subspaces of known class, four per codimension; the observed
/// value is 1 for a mislabel and 0 otherwise.
fn classification_check(reports: &mut Vec<ResidualReport>) {
    let mut acc = Accumulator::new("subspace-classification", 0.5);
    for (k, (vectors, label, hdim)) in classification_corpus().iter().enumerate() {
        let verdict = match classify_subspace(vectors) {
            Ok(class) if class.label == *label && class.hdim == *hdim => 0.0,
            _ => 1.0,
        };
        acc.observe(verdict, &[k as f64]);
    }
    reports.push(acc.finish());
}

type Fixture = (Vec<[f64; 6]>, SubspaceLabel, usize);

/// Coordinates are `(x1, y1, x2, y2, x3, y3)`.
pub(crate) fn classification_corpus() -> Vec<Fixture> {
    let ex1 = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let ey1 = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
    let ex2 = [0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    let ey2 = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0];
    let ex3 = [0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    let ey3 = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    let diag3 = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0];
    let mix23 = [0.0, 0.0, 0.0, 1.0, 1.0, 0.0];
    let a12 = [1.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    let ja12 = [0.0, 1.0, 0.0, 1.0, 0.0, 0.0];
    let mix12 = [0.0, 1.0, 1.0, 0.0, 0.0, 0.0];
    vec![
        (
            vec![ex1, ey1, ex2, ey2, ex3],
            SubspaceLabel::Hypersurface,
            2,
        ),
        (
            vec![ey1, ex2, ey2, ex3, ey3],
            SubspaceLabel::Hypersurface,
            2,
        ),
        (
            vec![ex1, ey1, ex2, ey2, diag3],
            SubspaceLabel::Hypersurface,
            2,
        ),
        (
            vec![ex1, ey1, ex2, mix23, ey3],
            SubspaceLabel::Hypersurface,
            2,
        ),
        (vec![ex1, ey1, ex2, ey2], SubspaceLabel::Complex, 2),
        (vec![a12, ja12, ex3, ey3], SubspaceLabel::Complex, 2),
        (vec![ex1, ey1, ex2, ex3], SubspaceLabel::Generic, 1),
        (vec![ex1, ey1, ex2, mix23], SubspaceLabel::Generic, 1),
        (vec![ex1, ex2, ex3], SubspaceLabel::TotallyReal, 0),
        (vec![ex1, mix12, ex3], SubspaceLabel::TotallyReal, 0),
        (vec![ex1, ey1, ex2], SubspaceLabel::CrDimOne, 1),
        (vec![a12, ja12, diag3], SubspaceLabel::CrDimOne, 1),
    ]
}
