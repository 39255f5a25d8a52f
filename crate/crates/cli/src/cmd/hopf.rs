//! `hopf`: the closed-form fibre field of the complex-linear level surface,
//! its first integral, and an optional comparison against the generic
//! level-set solver on the same grid.

use clap::Args;

use twistleaf::expr::parse_surface;
use twistleaf::foliation::hopf::{hopf_closed_form, hopf_unit, hopf_z};
use twistleaf::foliation::{grid_field, ImplicitSolver, SurfaceFn};

use crate::args::{
    check_threshold, invalid, parse_grid3, CliError, CmdResult, OutputArgs, SolverArgs,
};
use crate::output::{Document, GridMeta, Meta, Sample};
use crate::report::{all_pass, Accumulator};

#[derive(Args, Debug)]
pub struct HopfArgs {
    /// Grid "q:min:max:count,r:min:max:count,s:min:max:count".
    #[arg(long)]
    pub grid: String,

    /// Also solve the level surface z1 = 1 with the generic Newton route
    /// and report the largest field disagreement.
    #[arg(long)]
    pub compare_implicit: bool,

    /// Pass threshold for the field agreement (largest component gap).
    #[arg(long, default_value_t = 1e-9)]
    pub agreement_threshold: f64,

    /// Points with r^2 + s^2 below this are excluded from the comparison;
    /// the chart degenerates on the axis.
    #[arg(long, default_value_t = 0.1)]
    pub axis_exclusion: f64,

    #[command(flatten)]
    pub solver: SolverArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(args: HopfArgs) -> CmdResult {
    let spec = parse_grid3(&args.grid)?;
    check_threshold("--agreement-threshold", args.agreement_threshold)?;
    if !(args.axis_exclusion.is_finite() && args.axis_exclusion >= 0.0) {
        return Err(invalid(format!(
            "--axis-exclusion must be non-negative, got {}",
            args.axis_exclusion
        )));
    }
    let config = args.solver.config()?;
    let threads = args.solver.threads()?;

    let mut samples = Vec::with_capacity(spec.len());
    for idx in spec.indices() {
        let p = spec.point(idx);
        let mut sample = Sample::at(&p);
        match hopf_closed_form(p) {
            Ok((unit, map)) => {
                sample.z = hopf_z(p).ok().map(Sample::complex);
                sample.unit = Some(unit.as_array());
                sample.map = Some(map);
                sample.status = Some("ok".to_string());
            }
            Err(_) => {
                sample.unit = Some(hopf_unit(p).as_array());
                sample.status = Some("pole".to_string());
            }
        }
        samples.push(sample);
    }

    let mut reports = Vec::new();
    if args.compare_implicit {
        // Seed the Newton continuation at the grid point farthest from the
        // polar axis, where the closed form is best conditioned.
        let seed_idx = spec
            .indices()
            .max_by(|a, b| {
                let da = dist2_axis(spec.point(*a));
                let db = dist2_axis(spec.point(*b));
                da.partial_cmp(&db).expect("grid points are finite")
            })
            .ok_or_else(|| invalid("grid is empty"))?;
        let seed_point = spec.point(seed_idx);
        let seed_z = hopf_z(seed_point).map_err(|_| {
            CliError::Run("every grid point lies on the polar axis r = s = 0".to_string())
        })?;

        let expr = parse_surface("z1 - 1").expect("fixed expression parses");
        let solver = ImplicitSolver::new(SurfaceFn::Level(expr), config);
        let grid = grid_field(&solver, &spec, seed_point, seed_z, threads)
            .map_err(|e| CliError::Run(format!("grid solve failed: {e}")))?;

        let mut agreement = Accumulator::new("closed-form-agreement", args.agreement_threshold);
        for idx in spec.indices() {
            let p = spec.point(idx);
            if dist2_axis(p) < args.axis_exclusion {
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
                    samples[spec.linear(idx)]
                        .residuals
                        .insert("closed-form-gap".to_string(), gap);
                }
                Err(_) => agreement.poison(&p),
            }
        }
        reports.push(agreement.finish());
    }

    let meta = Meta::new("hopf")
        .arg("grid", &args.grid)
        .arg("compare-implicit", args.compare_implicit)
        .arg("axis-exclusion", args.axis_exclusion);
    let passed = all_pass(&reports);
    Document {
        meta,
        grid: Some(GridMeta::from_spec3(&spec)),
        samples,
        reports,
    }
    .write(&args.output)?;
    Ok(passed)
}

fn dist2_axis(p: [f64; 3]) -> f64 {
    p[1] * p[1] + p[2] * p[2]
}
