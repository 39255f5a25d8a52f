//! `eikonal`: signed distance to a profile curve over a planar grid, the
//! foliation it induces, and its verification: unit gradient, conformality
//! of the lifted field, and agreement with a derivative-free oracle.

use clap::Args;

use twistleaf::eikonal::{
    distance_foliation_field, eikonal_residual, EikonalError, ProfileFn, SignedDistanceField,
};
use twistleaf::field::{FdStep, Vec3};
use twistleaf::foliation::residuals::{conformality_frame_residual, cr_tangency_residual};
use twistleaf::grid::Axis;

use crate::args::{
    check_threshold, invalid, parse_grid2, parse_profile, CliError, CmdResult, OutputArgs,
    SolverArgs,
};
use crate::output::{Document, GridMeta, Meta, Sample};
use crate::report::{all_pass, Accumulator};

#[derive(Args, Debug)]
pub struct EikonalArgs {
    /// Curve profile: "poly:c0,c1,...", "sine:amplitude,frequency", or
    /// "bump:amplitude,radius".
    #[arg(long, allow_hyphen_values = true)]
    pub profile: String,

    /// Planar grid "r:min:max:count,s:min:max:count".
    #[arg(long)]
    pub grid: String,

    /// Evaluate residual reports at interior grid points.
    #[arg(long)]
    pub verify: bool,

    /// Pass threshold for the unit-gradient defect of the distance.
    #[arg(long, default_value_t = 1e-6)]
    pub eikonal_threshold: f64,

    /// Pass threshold for the orthonormal-frame residuals of the lifted
    /// field.
    #[arg(long, default_value_t = 1e-5)]
    pub frame_threshold: f64,

    /// Pass threshold for the chart-graph tangency residual of the lifted
    /// field.
    #[arg(long, default_value_t = 1e-5)]
    pub cr_threshold: f64,

    /// Pass threshold for agreement with the scan-and-refine distance
    /// oracle.
    #[arg(long, default_value_t = 1e-8)]
    pub oracle_threshold: f64,

    #[command(flatten)]
    pub solver: SolverArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(args: EikonalArgs) -> CmdResult {
    let profile = parse_profile(&args.profile)?;
    let axes = parse_grid2(&args.grid)?;
    for (name, value) in [
        ("--eikonal-threshold", args.eikonal_threshold),
        ("--frame-threshold", args.frame_threshold),
        ("--cr-threshold", args.cr_threshold),
        ("--oracle-threshold", args.oracle_threshold),
    ] {
        check_threshold(name, value)?;
    }
    if args.verify && axes.iter().any(|a| a.count < 3) {
        return Err(invalid(
            "--verify needs at least 3 points per axis for interior residuals",
        ));
    }
    let config = args.solver.config()?;
    let fd = FdStep {
        base: config.fd_step,
    };

    let field = SignedDistanceField::sample(profile, axes).map_err(|e| match e {
        EikonalError::BadProfile { .. } => invalid(e.to_string()),
        EikonalError::NonUniqueNearestPoint { .. } => CliError::Run(format!(
            "grid leaves the smooth tubular neighbourhood: {e}"
        )),
    })?;

    let (nr, ns) = (axes[0].count, axes[1].count);
    let mut samples = Vec::with_capacity(nr * ns);
    for i in 0..nr {
        for j in 0..ns {
            let point = [axes[0].at(i), axes[1].at(j)];
            let mut sample = Sample::at(&point);
            sample.rho = Some(field.rho_samples()[i * ns + j]);
            sample.foot = Some(field.foot_samples()[i * ns + j]);
            samples.push(sample);
        }
    }

    let mut reports = Vec::new();
    if args.verify {
        let mut unit_gradient = Accumulator::new("eikonal", args.eikonal_threshold);
        let mut frame = Accumulator::new("frame", args.frame_threshold);
        let mut cr = Accumulator::new("cr", args.cr_threshold);
        let uf = |p: Vec3| distance_foliation_field(&field, p);
        for i in 1..nr - 1 {
            for j in 1..ns - 1 {
                let (r, s) = (axes[0].at(i), axes[1].at(j));
                let planar = [r, s];
                let lifted = [0.0, r, s];
                match eikonal_residual(&field, planar, fd) {
                    Ok(v) => {
                        unit_gradient.observe(v, &planar);
                        samples[i * ns + j]
                            .residuals
                            .insert("eikonal".to_string(), v);
                    }
                    Err(_) => unit_gradient.poison(&planar),
                }
                match conformality_frame_residual(&uf, lifted, fd) {
                    Ok((a, b)) => frame.observe(a.abs().max(b.abs()), &planar),
                    Err(_) => frame.poison(&planar),
                }
                match cr_tangency_residual(&uf, lifted, fd) {
                    Ok(v) => cr.observe(v, &planar),
                    Err(_) => cr.poison(&planar),
                }
            }
        }
        reports.push(unit_gradient.finish());
        reports.push(frame.finish());
        reports.push(cr.finish());

        let mut oracle = Accumulator::new("distance-oracle", args.oracle_threshold);
        for probe in probe_points(&axes) {
            match field.rho_at(probe) {
                Ok((rho, _)) => {
                    let brute = oracle_distance(field.profile(), probe);
                    oracle.observe((rho.abs() - brute).abs(), &probe);
                }
                Err(_) => oracle.poison(&probe),
            }
        }
        reports.push(oracle.finish());
    }

    let meta = Meta::new("eikonal")
        .arg("profile", &args.profile)
        .arg("grid", &args.grid)
        .arg("verify", args.verify);
    let passed = all_pass(&reports);
    Document {
        meta,
        grid: Some(GridMeta::from_axes2(&axes)),
        samples,
        reports,
    }
    .write(&args.output)?;
    Ok(passed)
}

/// Nine probes at the 1/4, 1/2, 3/4 fractions of both axes.
fn probe_points(axes: &[Axis; 2]) -> Vec<[f64; 2]> {
    let fractions = [0.25, 0.5, 0.75];
    let mut out = Vec::with_capacity(9);
    for &fr in &fractions {
        for &fs in &fractions {
            out.push([
                axes[0].min + fr * (axes[0].max - axes[0].min),
                axes[1].min + fs * (axes[1].max - axes[1].min),
            ]);
        }
    }
    out
}

/// Unsigned distance to the curve by dense scan plus golden-section
/// refinement; shares no code with the Newton route it cross-checks.
pub fn oracle_distance(profile: &ProfileFn, point: [f64; 2]) -> f64 {
    let [r, s] = point;
    let dist = |t: f64| {
        let dr = r - t;
        let ds = s - profile.value(t);
        (dr * dr + ds * ds).sqrt()
    };
    // Any nearest parameter t* satisfies |t* - r| <= dist(r), because the
    // point (r, phi(r)) is already that close.
    let radius = dist(r) + 1.0;
    let (lo, hi) = (r - radius, r + radius);
    let n = 4000;
    let width = (hi - lo) / n as f64;
    let mut best_k = 0usize;
    let mut best = f64::INFINITY;
    for k in 0..=n {
        let d = dist(lo + k as f64 * width);
        if d < best {
            best = d;
            best_k = k;
        }
    }
    let mut a = lo + best_k.saturating_sub(1) as f64 * width;
    let mut b = (lo + (best_k + 1) as f64 * width).min(hi);
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd_val) = (dist(c), dist(d));
    for _ in 0..200 {
        if fc < fd_val {
            b = d;
            d = c;
            fd_val = fc;
            c = b - inv_phi * (b - a);
            fc = dist(c);
        } else {
            a = c;
            c = d;
            fc = fd_val;
            d = a + inv_phi * (b - a);
            fd_val = dist(d);
        }
    }
    dist(0.5 * (a + b))
}
