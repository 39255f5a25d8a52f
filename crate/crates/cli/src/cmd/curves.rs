//! `curves`: integrate one field line by fixed-step Runge-Kutta and export
//! the polyline, optionally checking that the first integral of the
//! closed-form field stays constant along it.

use std::cell::Cell;

use clap::{Args, ValueEnum};

use twistleaf::expr::parse;
use twistleaf::field::Vec3;
use twistleaf::foliation::curves::{integrate_curve, CurveError};
use twistleaf::foliation::hopf::{hopf_map, hopf_unit};
use twistleaf::foliation::{ImplicitSolver, SurfaceFn};
use twistleaf::twistor::UnitVec3;

use crate::args::{
    check_threshold, invalid, parse_complex, parse_point3, CliError, CmdResult, OutputArgs,
    SolverArgs,
};
use crate::output::{Document, Meta, Sample};
use crate::report::{all_pass, Accumulator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldKind {
    /// Closed-form fibre field of the level surface z1 = 1.
    Hopf,
    /// Newton-solved fibre field of a graph surface z3 = Phi(z1, z2).
    Phi,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    /// Which field to integrate.
    #[arg(long, value_enum, default_value_t = FieldKind::Hopf)]
    pub field: FieldKind,

    /// Graph potential Phi(z1, z2); required with --field phi.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,

    /// Start point "q,r,s".
    #[arg(long, allow_hyphen_values = true)]
    pub start: String,

    /// Signed step length.
    #[arg(long, default_value_t = 0.02)]
    pub step: f64,

    /// Number of steps (the polyline has one more point).
    #[arg(long, default_value_t = 100)]
    pub steps: usize,

    /// Newton seed for the fibre coordinate with --field phi.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub seed: String,

    /// Check the first integral stays constant along the curve
    /// (closed-form field only).
    #[arg(long)]
    pub verify: bool,

    /// Pass threshold for the first-integral drift.
    #[arg(long, default_value_t = 1e-6)]
    pub drift_threshold: f64,

    #[command(flatten)]
    pub solver: SolverArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(args: CurvesArgs) -> CmdResult {
    let start = parse_point3(&args.start)?;
    check_threshold("--drift-threshold", args.drift_threshold)?;
    if args.steps == 0 {
        return Err(invalid("--steps must be at least 1"));
    }
    if args.verify && args.field != FieldKind::Hopf {
        return Err(invalid(
            "--verify checks the closed-form first integral; use --field hopf",
        ));
    }
    let config = args.solver.config()?;

    let curve_err = |e: CurveError| match e {
        CurveError::BadParams { reason } => invalid(reason),
        CurveError::Field(f) => CliError::Run(format!("field evaluation failed: {f}")),
    };

    let (points, field_name) = match args.field {
        FieldKind::Hopf => {
            let f = |p: Vec3| -> Result<UnitVec3, twistleaf::field::FieldError> {
                Ok(hopf_unit(p))
            };
            (
                integrate_curve(&f, start, args.step, args.steps).map_err(curve_err)?,
                "hopf",
            )
        }
        FieldKind::Phi => {
            let text = args
                .phi
                .as_deref()
                .ok_or_else(|| invalid("--field phi requires --phi"))?;
            let expr =
                parse(text, &["z1", "z2"]).map_err(|e| invalid(format!("bad --phi: {e}")))?;
            let solver = ImplicitSolver::new(SurfaceFn::Graph(expr), config);
            // The previous solution seeds the next stage point; RK stages
            // are evaluated in a fixed order, so this is deterministic.
            let last = Cell::new(parse_complex(&args.seed)?);
            let f = |p: Vec3| {
                let s = solver.solve_ok(p, last.get())?;
                last.set(s.z);
                Ok(s.unit)
            };
            (
                integrate_curve(&f, start, args.step, args.steps).map_err(curve_err)?,
                "phi",
            )
        }
    };

    let mut samples = Vec::with_capacity(points.len());
    for (k, p) in points.iter().enumerate() {
        let mut sample = Sample::at(p);
        sample.step = Some(k);
        samples.push(sample);
    }

    let mut reports = Vec::new();
    if args.verify {
        let mut drift = Accumulator::new("first-integral-drift", args.drift_threshold);
        match hopf_map(points[0]) {
            Ok(base) => {
                for p in &points {
                    match hopf_map(*p) {
                        Ok(m) => {
                            let gap = (m[0] - base[0]).abs().max((m[1] - base[1]).abs());
                            drift.observe(gap, p);
                        }
                        Err(_) => drift.poison(p),
                    }
                }
            }
            Err(_) => drift.poison(&points[0]),
        }
        reports.push(drift.finish());
    }

    let meta = Meta::new("curves")
        .arg("field", field_name)
        .arg("start", &args.start)
        .arg("step", args.step)
        .arg("steps", args.steps)
        .arg("verify", args.verify);
    let passed = all_pass(&reports);
    Document {
        meta,
        grid: None,
        samples,
        reports,
    }
    .write(&args.output)?;
    Ok(passed)
}
