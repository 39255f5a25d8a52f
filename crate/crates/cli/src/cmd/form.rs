//! `xi-form` and `nurowski-form`: pair fields `(z, w)` and their null
//! forms, from Lagrangian surface data on the incidence coordinates or
//! from a graph potential over the pair itself, with closedness, key
//! operator, loop, potential, and conformality verification.

use clap::Args;

use twistleaf::expr::parse;
use twistleaf::field::{FdStep, FieldError, Vec3};
use twistleaf::grid::GridSpec3;
use twistleaf::nullform::potential::{
    horizontal_conformality_check, loop_closure_defect, potential_from_closed_form,
};
use twistleaf::nullform::{
    closedness_residual, grid_zw, jacobian_duality_check, key_operator_residual,
    lagrangian_residual, NurowskiSolver, XiMap, XiSolver, ZwGrid, ZwSolve,
};
use twistleaf::C64;

use crate::args::{
    check_fraction, check_threshold, invalid, parse_complex, parse_grid3, parse_point3,
    require_interior, CliError, CmdResult, OutputArgs, SolverArgs,
};
use crate::output::{Document, GridMeta, Meta, Sample};
use crate::report::{all_pass, Accumulator, ResidualReport};

#[derive(Args, Debug)]
pub struct FormCoreArgs {
    /// Grid "q:min:max:count,r:min:max:count,s:min:max:count".
    #[arg(long)]
    pub grid: String,

    /// Newton seed for z, "re" or "re,im".
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub seed_z: String,

    /// Newton seed for w, "re" or "re,im".
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub seed_w: String,

    /// The grid point nearest this location is solved first, "q,r,s".
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true)]
    pub seed_point: String,

    /// Evaluate residual reports over the solved grid.
    #[arg(long)]
    pub verify: bool,

    /// Pass threshold for the largest curl component of the form.
    #[arg(long, default_value_t = 1e-6)]
    pub closedness_threshold: f64,

    /// Pass threshold for the first-order operator applied to (z, w).
    #[arg(long, default_value_t = 1e-6)]
    pub key_operator_threshold: f64,

    /// Pass threshold for the algebraic nullity of the form.
    #[arg(long, default_value_t = 1e-13)]
    pub nullity_threshold: f64,

    /// Pass threshold for rectangle loop integrals of the form.
    #[arg(long, default_value_t = 1e-8)]
    pub loop_threshold: f64,

    /// Pass threshold for the gap between the differenced path potential
    /// and the form itself.
    #[arg(long, default_value_t = 1e-6)]
    pub potential_threshold: f64,

    /// Pass threshold for horizontal conformality of the path potential.
    #[arg(long, default_value_t = 1e-6)]
    pub conformality_threshold: f64,

    /// Tolerated fraction of non-converged grid samples.
    #[arg(long, default_value_t = 0.0)]
    pub allow_fail: f64,

    #[command(flatten)]
    pub solver: SolverArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct XiFormArgs {
    /// Lagrangian potential Xi(z1, z2); the surface components are its
    /// partial derivatives.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["xi1", "xi2", "inverse_cubic"])]
    pub xi: Option<String>,

    /// First surface component Xi1(z1, z2); requires --xi2.
    #[arg(long, allow_hyphen_values = true, requires = "xi2")]
    pub xi1: Option<String>,

    /// Second surface component Xi2(z1, z2); requires --xi1.
    #[arg(long, allow_hyphen_values = true, requires = "xi1")]
    pub xi2: Option<String>,

    /// Use the built-in inverse-cubic family instead of expressions.
    #[arg(long, conflicts_with_all = ["xi1", "xi2"])]
    pub inverse_cubic: bool,

    /// Pass threshold for the Lagrangian (cross-partial) defect of
    /// explicitly given components.
    #[arg(long, default_value_t = 1e-8)]
    pub lagrangian_threshold: f64,

    #[command(flatten)]
    pub core: FormCoreArgs,
}

#[derive(Args, Debug)]
pub struct NurowskiFormArgs {
    /// Graph potential F(z, w) defining the surface as a graph over the
    /// pair coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,

    /// Lagrangian potential Xi(z1, z2) believed dual to F; adds Hessian
    /// duality and route-agreement reports.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,

    /// Pass threshold for the Hessian duality defect against --xi.
    #[arg(long, default_value_t = 1e-8)]
    pub duality_threshold: f64,

    /// Pass threshold for pointwise agreement with the --xi route.
    #[arg(long, default_value_t = 1e-7)]
    pub agreement_threshold: f64,

    #[command(flatten)]
    pub core: FormCoreArgs,
}

/// Incidence coordinates of a solved pair at a base point:
/// `z1 = (r+is) z - i q w`, `z2 = i q z - (r-is) w`.
pub fn incidence(point: Vec3, z: C64, w: C64) -> (C64, C64) {
    let [q, r, s] = point;
    let alpha = C64::new(r, s);
    let beta = C64::new(0.0, -q);
    (alpha * z + beta * w, -beta * z - alpha.conj() * w)
}

pub(crate) struct FormThresholds {
    pub(crate) closedness: f64,
    pub(crate) key_operator: f64,
    pub(crate) nullity: f64,
    pub(crate) loop_closure: f64,
    pub(crate) potential: f64,
    pub(crate) conformality: f64,
}

impl FormCoreArgs {
    fn thresholds(&self) -> Result<FormThresholds, CliError> {
        for (name, value) in [
            ("--closedness-threshold", self.closedness_threshold),
            ("--key-operator-threshold", self.key_operator_threshold),
            ("--nullity-threshold", self.nullity_threshold),
            ("--loop-threshold", self.loop_threshold),
            ("--potential-threshold", self.potential_threshold),
            ("--conformality-threshold", self.conformality_threshold),
        ] {
            check_threshold(name, value)?;
        }
        Ok(FormThresholds {
            closedness: self.closedness_threshold,
            key_operator: self.key_operator_threshold,
            nullity: self.nullity_threshold,
            loop_closure: self.loop_threshold,
            potential: self.potential_threshold,
            conformality: self.conformality_threshold,
        })
    }
}

/// Probe points for path-potential checks: box centre plus the corners of
/// the inner 0.3..0.7 sub-box, all well inside the grid.
fn box_probes(spec: &GridSpec3) -> Vec<Vec3> {
    let lo: Vec3 = std::array::from_fn(|i| spec.axes[i].min);
    let hi: Vec3 = std::array::from_fn(|i| spec.axes[i].max);
    let at = |f: [f64; 3]| -> Vec3 {
        std::array::from_fn(|i| lo[i] + f[i] * (hi[i] - lo[i]))
    };
    let mut probes = vec![at([0.5, 0.5, 0.5])];
    for &fq in &[0.3, 0.7] {
        for &fr in &[0.3, 0.7] {
            for &fs in &[0.3, 0.7] {
                probes.push(at([fq, fr, fs]));
            }
        }
    }
    probes
}

/// The shared verification battery over a solved pair grid. Auxiliary
/// evaluations seed from the nearest grid sample so every Newton solve
/// stays on the branch the continuation chose.
#[allow(clippy::too_many_arguments)]
pub(crate) fn verify_form<S>(
    solver: &S,
    spec: &GridSpec3,
    grid: &ZwGrid,
    global_seed: (C64, C64),
    fd: FdStep,
    t: &FormThresholds,
    samples: &mut [Sample],
    reports: &mut Vec<ResidualReport>,
) where
    S: ZwSolve + ?Sized,
{
    let seeded = |p: Vec3| {
        let near = grid.sample(spec.nearest(p));
        let seed = if near.status.is_ok() {
            (near.z, near.w)
        } else {
            global_seed
        };
        solver.solve_zw_ok(p, seed)
    };
    let zwf = |p: Vec3| seeded(p).map(|s| (s.z, s.w));
    let omf = |p: Vec3| -> Result<[C64; 3], FieldError> {
        seeded(p).map(|s| {
            let om = s.omega();
            [om.a, om.b, om.c]
        })
    };

    let mut nullity = Accumulator::new("nullity", t.nullity);
    let mut closed = Accumulator::new("closedness", t.closedness);
    let mut keyop = Accumulator::new("key-operator", t.key_operator);
    for idx in spec.indices() {
        let fs = grid.sample(idx);
        if !fs.status.is_ok() {
            continue;
        }
        nullity.observe(fs.omega().nullity().norm(), &fs.point);
        if !spec.is_interior(idx) {
            continue;
        }
        let sample = &mut samples[spec.linear(idx)];
        match closedness_residual(&omf, fs.point, fd) {
            Ok(v) => {
                closed.observe(v, &fs.point);
                sample.residuals.insert("closedness".to_string(), v);
            }
            Err(_) => closed.poison(&fs.point),
        }
        match key_operator_residual(&zwf, fs.point, fd) {
            Ok((a, b)) => {
                let v = a.norm().max(b.norm());
                keyop.observe(v, &fs.point);
                sample.residuals.insert("key-operator".to_string(), v);
            }
            Err(_) => keyop.poison(&fs.point),
        }
    }
    reports.push(nullity.finish());
    reports.push(closed.finish());
    reports.push(keyop.finish());

    let lo: Vec3 = std::array::from_fn(|i| spec.axes[i].min);
    let hi: Vec3 = std::array::from_fn(|i| spec.axes[i].max);
    let ext: Vec3 = std::array::from_fn(|i| hi[i] - lo[i]);
    let mut loops = Accumulator::new("loop-closure", t.loop_closure);
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let corner: Vec3 = std::array::from_fn(|k| lo[k] + 0.25 * ext[k]);
        match loop_closure_defect(&omf, corner, (i, j), (0.5 * ext[i], 0.5 * ext[j])) {
            Ok(v) => loops.observe(v.norm(), &corner),
            Err(_) => loops.poison(&corner),
        }
    }
    reports.push(loops.finish());

    let mut potential = Accumulator::new("potential-gradient", t.potential);
    let mut conformality = Accumulator::new("horizontal-conformality", t.conformality);
    match potential_from_closed_form(&omf, (lo, hi), lo, fd, t.closedness) {
        Ok(h) => {
            let hf = |p: Vec3| h.value(p);
            for probe in box_probes(spec) {
                let gap = (|| -> Result<f64, FieldError> {
                    let mut dh = [C64::new(0.0, 0.0); 3];
                    for (axis, slot) in dh.iter_mut().enumerate() {
                        *slot = twistleaf::field::central_diff3(&hf, probe, axis, fd)?;
                    }
                    let om = omf(probe)?;
                    Ok(dh
                        .iter()
                        .zip(&om)
                        .map(|(d, o)| (d - o).norm())
                        .fold(0.0f64, f64::max))
                })();
                match gap {
                    Ok(v) => potential.observe(v, &probe),
                    Err(_) => potential.poison(&probe),
                }
                match horizontal_conformality_check(&hf, probe, fd) {
                    Ok((a, b)) => conformality.observe(a.abs().max(b.abs()), &probe),
                    Err(_) => conformality.poison(&probe),
                }
            }
        }
        Err(_) => {
            // The form failed its closedness gate; integrating it would be
            // path-dependent, so both potential checks fail at the base.
            potential.poison(&lo);
            conformality.poison(&lo);
        }
    }
    reports.push(potential.finish());
    reports.push(conformality.finish());
}

/// Grid solve plus the export samples every form command shares.
fn solve_and_sample<S>(
    solver: &S,
    spec: &GridSpec3,
    seed_point: Vec3,
    seed: (C64, C64),
    threads: usize,
) -> Result<(ZwGrid, Vec<Sample>), CliError>
where
    S: ZwSolve + ?Sized,
{
    let grid = grid_zw(solver, spec, seed_point, seed, threads)
        .map_err(|e| CliError::Run(format!("grid solve failed: {e}")))?;
    let mut samples = Vec::with_capacity(spec.len());
    for idx in spec.indices() {
        let fs = grid.sample(idx);
        let mut sample = Sample::at(&fs.point);
        sample.z = Some(Sample::complex(fs.z));
        sample.w = Some(Sample::complex(fs.w));
        sample.status = Some(fs.status.name().to_string());
        sample.iters = Some(fs.iters);
        sample.degenerate = Some(fs.degenerate);
        samples.push(sample);
    }
    Ok((grid, samples))
}

pub fn run_xi(args: XiFormArgs) -> CmdResult {
    let (map, meta) = match (&args.xi, &args.xi1, &args.xi2, args.inverse_cubic) {
        (Some(xi), None, None, false) => {
            let expr =
                parse(xi, &["z1", "z2"]).map_err(|e| invalid(format!("bad --xi: {e}")))?;
            (XiMap::Potential(expr), Meta::new("xi-form").arg("xi", xi))
        }
        (None, Some(x1), Some(x2), false) => {
            let xi1 =
                parse(x1, &["z1", "z2"]).map_err(|e| invalid(format!("bad --xi1: {e}")))?;
            let xi2 =
                parse(x2, &["z1", "z2"]).map_err(|e| invalid(format!("bad --xi2: {e}")))?;
            (
                XiMap::Components { xi1, xi2 },
                Meta::new("xi-form").arg("xi1", x1).arg("xi2", x2),
            )
        }
        (None, None, None, true) => (
            XiMap::InverseCubic,
            Meta::new("xi-form").arg("family", "inverse-cubic"),
        ),
        _ => {
            return Err(invalid(
                "give exactly one of --xi, --xi1 with --xi2, or --inverse-cubic",
            ))
        }
    };
    check_threshold("--lagrangian-threshold", args.lagrangian_threshold)?;

    let core = &args.core;
    let spec = parse_grid3(&core.grid)?;
    check_fraction("--allow-fail", core.allow_fail)?;
    let t = core.thresholds()?;
    if core.verify {
        require_interior(&spec)?;
    }
    let seed = (parse_complex(&core.seed_z)?, parse_complex(&core.seed_w)?);
    let seed_point = parse_point3(&core.seed_point)?;
    let config = core.solver.config()?;
    let threads = core.solver.threads()?;

    let solver = XiSolver::new(map, config);
    let (grid, mut samples) = solve_and_sample(&solver, &spec, seed_point, seed, threads)?;

    let mut reports = Vec::new();
    if core.verify {
        let fd = FdStep {
            base: config.fd_step,
        };
        verify_form(
            &solver,
            &spec,
            &grid,
            seed,
            fd,
            &t,
            &mut samples,
            &mut reports,
        );
        // Components given explicitly are only surface data when the
        // cross-partials agree; the potential routes carry this for free.
        if let XiMap::Components { xi1, xi2 } = solver.map() {
            let mut lagr = Accumulator::new("lagrangian", args.lagrangian_threshold);
            for idx in spec.indices() {
                let fs = grid.sample(idx);
                if !fs.status.is_ok() || !spec.is_interior(idx) {
                    continue;
                }
                let (z1, z2) = incidence(fs.point, fs.z, fs.w);
                match lagrangian_residual(xi1, xi2, [z1, z2]) {
                    Ok(v) => lagr.observe(v.norm(), &fs.point),
                    Err(_) => lagr.poison(&fs.point),
                }
            }
            reports.push(lagr.finish());
        }
    }

    finish_form(meta, core, &spec, &grid, samples, reports)
}

pub fn run_nurowski(args: NurowskiFormArgs) -> CmdResult {
    let potential =
        parse(&args.f, &["z", "w"]).map_err(|e| invalid(format!("bad --f: {e}")))?;
    let dual = match &args.xi {
        Some(text) => Some(
            parse(text, &["z1", "z2"]).map_err(|e| invalid(format!("bad --xi: {e}")))?,
        ),
        None => None,
    };
    check_threshold("--duality-threshold", args.duality_threshold)?;
    check_threshold("--agreement-threshold", args.agreement_threshold)?;

    let core = &args.core;
    let spec = parse_grid3(&core.grid)?;
    check_fraction("--allow-fail", core.allow_fail)?;
    let t = core.thresholds()?;
    if core.verify {
        require_interior(&spec)?;
    }
    let seed = (parse_complex(&core.seed_z)?, parse_complex(&core.seed_w)?);
    let seed_point = parse_point3(&core.seed_point)?;
    let config = core.solver.config()?;
    let threads = core.solver.threads()?;

    let solver = NurowskiSolver::new(potential, config);
    let (grid, mut samples) = solve_and_sample(&solver, &spec, seed_point, seed, threads)?;

    let mut meta = Meta::new("nurowski-form").arg("f", &args.f);
    let mut reports = Vec::new();
    if core.verify {
        let fd = FdStep {
            base: config.fd_step,
        };
        verify_form(
            &solver,
            &spec,
            &grid,
            seed,
            fd,
            &t,
            &mut samples,
            &mut reports,
        );
        if let Some(xi) = &dual {
            meta = meta.arg("xi", args.xi.as_deref().unwrap_or_default());

            let mut duality = Accumulator::new("duality", args.duality_threshold);
            for probe in box_probes(&spec) {
                let near = grid.sample(spec.nearest(probe));
                let seed_here = if near.status.is_ok() {
                    (near.z, near.w)
                } else {
                    seed
                };
                match solver.solve_zw_ok(probe, seed_here) {
                    Ok(fs) => {
                        let (z1, z2) = incidence(probe, fs.z, fs.w);
                        match jacobian_duality_check(xi, [z1, z2]) {
                            Ok(v) => duality.observe(v, &probe),
                            Err(_) => duality.poison(&probe),
                        }
                    }
                    Err(_) => duality.poison(&probe),
                }
            }
            reports.push(duality.finish());

            let xi_solver = XiSolver::new(XiMap::Potential(xi.clone()), config);
            let mut agreement = Accumulator::new("route-agreement", args.agreement_threshold);
            match grid_zw(&xi_solver, &spec, seed_point, seed, threads) {
                Ok(xi_grid) => {
                    for idx in spec.indices() {
                        let a = grid.sample(idx);
                        let b = xi_grid.sample(idx);
                        match (a.status.is_ok(), b.status.is_ok()) {
                            (true, true) => {
                                let gap = (a.z - b.z).norm().max((a.w - b.w).norm());
                                agreement.observe(gap, &a.point);
                            }
                            (false, false) => {}
                            _ => agreement.poison(&a.point),
                        }
                    }
                }
                Err(_) => agreement.poison(&seed_point),
            }
            reports.push(agreement.finish());
        }
    }

    finish_form(meta, core, &spec, &grid, samples, reports)
}

fn finish_form(
    meta: Meta,
    core: &FormCoreArgs,
    spec: &GridSpec3,
    grid: &ZwGrid,
    samples: Vec<Sample>,
    reports: Vec<ResidualReport>,
) -> CmdResult {
    let coverage_ok = 1.0 - grid.ok_fraction() <= core.allow_fail;
    let meta = meta
        .arg("grid", &core.grid)
        .arg("seed-z", &core.seed_z)
        .arg("seed-w", &core.seed_w)
        .arg("seed-point", &core.seed_point)
        .arg("verify", core.verify)
        .arg("allow-fail", core.allow_fail);
    let passed = all_pass(&reports) && coverage_ok;
    Document {
        meta,
        grid: Some(GridMeta::from_spec3(spec)),
        samples,
        reports,
    }
    .write(&core.output)?;
    if !coverage_ok {
        eprintln!(
            "note: {:.1}% of samples failed to converge, above --allow-fail",
            (1.0 - grid.ok_fraction()) * 100.0
        );
    }
    Ok(passed)
}
