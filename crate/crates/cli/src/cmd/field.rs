//! `phi-field` and `f-field`: fibre fields of holomorphic surfaces, solved
//! over a grid by Newton continuation, with optional residual verification
//! at every interior converged sample.

use clap::Args;

use twistleaf::expr::{parse, parse_surface};
use twistleaf::field::Vec3;
use twistleaf::foliation::residuals::{conformality_frame_residual, cr_tangency_residual};
use twistleaf::foliation::{grid_field, ImplicitSolver, SurfaceFn};

use crate::args::{
    check_fraction, check_threshold, invalid, parse_complex, parse_grid3, parse_point3,
    require_interior, CliError, CmdResult, OutputArgs, SolverArgs,
};
use crate::output::{Document, GridMeta, Meta, Sample};
use crate::report::{all_pass, Accumulator};

#[derive(Args, Debug)]
pub struct FieldCoreArgs {
    /// Grid "q:min:max:count,r:min:max:count,s:min:max:count".
    #[arg(long)]
    pub grid: String,

    /// Newton seed for the fibre coordinate, "re" or "re,im".
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub seed: String,

    /// The grid point nearest this location is solved first, "q,r,s".
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true)]
    pub seed_point: String,

    /// Evaluate residual reports at interior converged samples.
    #[arg(long)]
    pub verify: bool,

    /// Pass threshold for the first-order conformality residual.
    #[arg(long, default_value_t = 1e-5)]
    pub pde_threshold: f64,

    /// Pass threshold for the gap between the implicit-derivative and
    /// finite-difference routes to that residual.
    #[arg(long, default_value_t = 1e-5)]
    pub route_threshold: f64,

    /// Pass threshold for the orthonormal-frame residuals.
    #[arg(long, default_value_t = 1e-5)]
    pub frame_threshold: f64,

    /// Pass threshold for the chart-graph tangency residual.
    #[arg(long, default_value_t = 1e-5)]
    pub cr_threshold: f64,

    /// Tolerated fraction of non-converged grid samples.
    #[arg(long, default_value_t = 0.0)]
    pub allow_fail: f64,

    #[command(flatten)]
    pub solver: SolverArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PhiFieldArgs {
    /// Graph potential Phi(z1, z2); the surface is z3 = Phi(z1, z2).
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,

    #[command(flatten)]
    pub core: FieldCoreArgs,
}

#[derive(Args, Debug)]
pub struct FFieldArgs {
    /// Level function f(z1, z2, z3); the surface is f = 0.
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,

    #[command(flatten)]
    pub core: FieldCoreArgs,
}

pub fn run_phi(args: PhiFieldArgs) -> CmdResult {
    let expr =
        parse(&args.phi, &["z1", "z2"]).map_err(|e| invalid(format!("bad --phi: {e}")))?;
    let meta = Meta::new("phi-field").arg("phi", &args.phi);
    run_field(SurfaceFn::Graph(expr), meta, args.core)
}

pub fn run_f(args: FFieldArgs) -> CmdResult {
    let expr = parse_surface(&args.f).map_err(|e| invalid(format!("bad --f: {e}")))?;
    let meta = Meta::new("f-field").arg("f", &args.f);
    run_field(SurfaceFn::Level(expr), meta, args.core)
}

fn run_field(surface: SurfaceFn, meta: Meta, core: FieldCoreArgs) -> CmdResult {
    let spec = parse_grid3(&core.grid)?;
    check_fraction("--allow-fail", core.allow_fail)?;
    for (name, value) in [
        ("--pde-threshold", core.pde_threshold),
        ("--route-threshold", core.route_threshold),
        ("--frame-threshold", core.frame_threshold),
        ("--cr-threshold", core.cr_threshold),
    ] {
        check_threshold(name, value)?;
    }
    if core.verify {
        require_interior(&spec)?;
    }
    let seed = parse_complex(&core.seed)?;
    let seed_point = parse_point3(&core.seed_point)?;
    let config = core.solver.config()?;
    let threads = core.solver.threads()?;

    let solver = ImplicitSolver::new(surface, config);
    let grid = grid_field(&solver, &spec, seed_point, seed, threads)
        .map_err(|e| CliError::Run(format!("grid solve failed: {e}")))?;
    let fd = solver.fd();

    let mut pde = Accumulator::new("pde", core.pde_threshold);
    let mut route = Accumulator::new("route-gap", core.route_threshold);
    let mut frame = Accumulator::new("frame", core.frame_threshold);
    let mut cr = Accumulator::new("cr", core.cr_threshold);

    let mut samples = Vec::with_capacity(spec.len());
    for idx in spec.indices() {
        let fs = grid.sample(idx);
        let mut sample = Sample::at(&fs.point);
        sample.z = Some(Sample::complex(fs.z));
        sample.unit = Some(fs.unit.as_array());
        sample.status = Some(fs.status.name().to_string());
        sample.iters = Some(fs.iters);

        if core.verify && fs.status.is_ok() && spec.is_interior(idx) {
            let seed_z = fs.z;
            let uf = |p: Vec3| solver.solve_ok(p, seed_z).map(|s| s.unit);
            match solver.pde_residual_fd(fs.point, seed_z) {
                Ok(v) => {
                    pde.observe(v.norm(), &fs.point);
                    sample.residuals.insert("pde".to_string(), v.norm());
                    match solver.pde_residual_implicit(fs.point, seed_z) {
                        Ok(w) => {
                            let gap = (w - v).norm();
                            route.observe(gap, &fs.point);
                            sample.residuals.insert("route-gap".to_string(), gap);
                        }
                        Err(_) => route.poison(&fs.point),
                    }
                }
                Err(_) => {
                    pde.poison(&fs.point);
                    route.poison(&fs.point);
                }
            }
            match conformality_frame_residual(&uf, fs.point, fd) {
                Ok((a, b)) => {
                    let v = a.abs().max(b.abs());
                    frame.observe(v, &fs.point);
                    sample.residuals.insert("frame".to_string(), v);
                }
                Err(_) => frame.poison(&fs.point),
            }
            match cr_tangency_residual(&uf, fs.point, fd) {
                Ok(v) => {
                    cr.observe(v, &fs.point);
                    sample.residuals.insert("cr".to_string(), v);
                }
                Err(_) => cr.poison(&fs.point),
            }
        }
        samples.push(sample);
    }

    let reports = if core.verify {
        vec![pde.finish(), route.finish(), frame.finish(), cr.finish()]
    } else {
        Vec::new()
    };

    let coverage_ok = 1.0 - grid.ok_fraction() <= core.allow_fail;
    let meta = meta
        .arg("grid", &core.grid)
        .arg("seed", &core.seed)
        .arg("seed-point", &core.seed_point)
        .arg("verify", core.verify)
        .arg("allow-fail", core.allow_fail);
    let passed = all_pass(&reports) && coverage_ok;
    Document {
        meta,
        grid: Some(GridMeta::from_spec3(&spec)),
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
