//! Shared argument groups and the small parsers for the flag grammars.

use std::path::PathBuf;

use clap::{Args, ValueEnum};

use twistleaf::eikonal::ProfileFn;
use twistleaf::foliation::SolverConfig;
use twistleaf::grid::{Axis, GridSpec3};
use twistleaf::C64;

/// Failure of a command, split by who is at fault.
#[derive(Debug)]
pub enum CliError {
    /// The request was malformed; nothing was computed or written (exit 2).
    Invalid(String),
    /// The computation or an output write failed (exit 1).
    Run(String),
}

/// `Ok(passed)` carries whether every requested check passed.
pub type CmdResult = Result<bool, CliError>;

pub fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// Newton and finite-difference knobs, mirrored onto `SolverConfig`.
#[derive(Args, Debug)]
pub struct SolverArgs {
    /// Residual magnitude below which a Newton solve counts as converged.
    #[arg(long, default_value_t = 1e-12)]
    pub newton_tol: f64,

    /// Iteration budget per point.
    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,

    /// Base step for finite-difference residuals (scaled by 1+|coordinate|).
    #[arg(long, default_value_t = 1e-5)]
    pub fd_step: f64,

    /// Iterate magnitude treated as a chart pole.
    #[arg(long, default_value_t = 1e6)]
    pub pole_radius: f64,

    /// Worker threads for grid solves (0 = all cores). Falls back to the
    /// TWISTLEAF_THREADS environment variable, then to 0.
    #[arg(long)]
    pub threads: Option<usize>,
}

impl SolverArgs {
    pub fn config(&self) -> Result<SolverConfig, CliError> {
        if !(self.newton_tol.is_finite() && self.newton_tol > 0.0) {
            return Err(invalid(format!(
                "--newton-tol must be positive and finite, got {}",
                self.newton_tol
            )));
        }
        if self.max_iters == 0 {
            return Err(invalid("--max-iters must be at least 1"));
        }
        if !(self.fd_step.is_finite() && self.fd_step > 0.0) {
            return Err(invalid(format!(
                "--fd-step must be positive and finite, got {}",
                self.fd_step
            )));
        }
        if !(self.pole_radius.is_finite() && self.pole_radius > 0.0) {
            return Err(invalid(format!(
                "--pole-radius must be positive and finite, got {}",
                self.pole_radius
            )));
        }
        Ok(SolverConfig {
            newton_tol: self.newton_tol,
            max_iters: self.max_iters,
            fd_step: self.fd_step,
            pole_radius: self.pole_radius,
        })
    }

    pub fn threads(&self) -> Result<usize, CliError> {
        if let Some(n) = self.threads {
            return Ok(n);
        }
        match std::env::var("TWISTLEAF_THREADS") {
            Ok(text) => text.trim().parse::<usize>().map_err(|_| {
                invalid(format!(
                    "TWISTLEAF_THREADS must be a non-negative integer, got {text:?}"
                ))
            }),
            Err(_) => Ok(0),
        }
    }
}

/// Where and how to write the export document.
#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Export encoding.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn parse_axis(part: &str, name: &str) -> Result<Axis, CliError> {
    let fields: Vec<&str> = part.split(':').collect();
    if fields.len() != 4 || fields[0] != name {
        return Err(invalid(format!(
            "axis {part:?} must look like \"{name}:min:max:count\""
        )));
    }
    let min: f64 = fields[1]
        .parse()
        .map_err(|_| invalid(format!("bad axis minimum {:?}", fields[1])))?;
    let max: f64 = fields[2]
        .parse()
        .map_err(|_| invalid(format!("bad axis maximum {:?}", fields[2])))?;
    let count: usize = fields[3]
        .parse()
        .map_err(|_| invalid(format!("bad axis count {:?}", fields[3])))?;
    Axis::new(min, max, count).map_err(invalid)
}

/// Parses `"q:min:max:count,r:...,s:..."` into a grid over `(q, r, s)`.
pub fn parse_grid3(text: &str) -> Result<GridSpec3, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(invalid(format!(
            "grid {text:?} must list the three axes \"q:min:max:count,r:...,s:...\""
        )));
    }
    Ok(GridSpec3 {
        axes: [
            parse_axis(parts[0], "q")?,
            parse_axis(parts[1], "r")?,
            parse_axis(parts[2], "s")?,
        ],
    })
}

/// Parses `"r:min:max:count,s:min:max:count"` into the two planar axes.
pub fn parse_grid2(text: &str) -> Result<[Axis; 2], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(invalid(format!(
            "grid {text:?} must list the two axes \"r:min:max:count,s:min:max:count\""
        )));
    }
    Ok([parse_axis(parts[0], "r")?, parse_axis(parts[1], "s")?])
}

/// Requires at least three points per axis so interior finite differences
/// have room; verification passes need this, plain exports do not.
pub fn require_interior(spec: &GridSpec3) -> Result<(), CliError> {
    for axis in &spec.axes {
        if axis.count < 3 {
            return Err(invalid(format!(
                "--verify needs at least 3 points per axis for interior residuals, got {}",
                axis.count
            )));
        }
    }
    Ok(())
}

/// Parses `"re"` or `"re,im"` into a complex number.
pub fn parse_complex(text: &str) -> Result<C64, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || invalid(format!("complex value {text:?} must be \"re\" or \"re,im\""));
    match parts.as_slice() {
        [re] => {
            let re: f64 = re.trim().parse().map_err(|_| bad())?;
            Ok(C64::new(re, 0.0))
        }
        [re, im] => {
            let re: f64 = re.trim().parse().map_err(|_| bad())?;
            let im: f64 = im.trim().parse().map_err(|_| bad())?;
            Ok(C64::new(re, im))
        }
        _ => Err(bad()),
    }
}

/// Parses `"q,r,s"` into a point of the base space.
pub fn parse_point3(text: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(invalid(format!("point {text:?} must be \"q,r,s\"")));
    }
    let mut out = [0.0f64; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| invalid(format!("bad coordinate {part:?} in point {text:?}")))?;
    }
    if out.iter().any(|c| !c.is_finite()) {
        return Err(invalid(format!("point {text:?} must be finite")));
    }
    Ok(out)
}

/// Parses a curve profile: `"poly:c0,c1,..."`, `"sine:amplitude,frequency"`,
/// or `"bump:amplitude,radius"`.
pub fn parse_profile(text: &str) -> Result<ProfileFn, CliError> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| invalid(format!("profile {text:?} must be \"kind:params\"")))?;
    let nums: Vec<f64> = if rest.trim().is_empty() {
        Vec::new()
    } else {
        rest.split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("bad profile parameter {p:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    match kind {
        "poly" => Ok(ProfileFn::Polynomial { coefficients: nums }),
        "sine" => {
            if nums.len() != 2 {
                return Err(invalid("sine profile needs exactly \"sine:amplitude,frequency\""));
            }
            Ok(ProfileFn::Sine {
                amplitude: nums[0],
                frequency: nums[1],
            })
        }
        "bump" => {
            if nums.len() != 2 {
                return Err(invalid("bump profile needs exactly \"bump:amplitude,radius\""));
            }
            Ok(ProfileFn::Bump {
                amplitude: nums[0],
                radius: nums[1],
            })
        }
        other => Err(invalid(format!(
            "unknown profile kind {other:?}; expected poly, sine, or bump"
        ))),
    }
}

/// Parses spanning vectors of a subspace of R^6: six comma-separated reals
/// per vector, vectors separated by semicolons.
pub fn parse_vectors(text: &str) -> Result<Vec<[f64; 6]>, CliError> {
    let mut out = Vec::new();
    for chunk in text.split(';') {
        let parts: Vec<&str> = chunk.split(',').collect();
        if parts.len() != 6 {
            return Err(invalid(format!(
                "vector {chunk:?} must have six comma-separated components"
            )));
        }
        let mut v = [0.0f64; 6];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad component {part:?} in vector {chunk:?}")))?;
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(invalid(format!("vector {chunk:?} must be finite")));
        }
        out.push(v);
    }
    Ok(out)
}

/// Threshold flags shared by every `--verify` pass: each must be positive.
pub fn check_threshold(name: &str, value: f64) -> Result<(), CliError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(invalid(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

/// Fraction flags in `[0, 1]`.
pub fn check_fraction(name: &str, value: f64) -> Result<(), CliError> {
    if !(value.is_finite() && (0.0..=1.0).contains(&value)) {
        return Err(invalid(format!(
            "{name} must lie in [0, 1], got {value}"
        )));
    }
    Ok(())
}
