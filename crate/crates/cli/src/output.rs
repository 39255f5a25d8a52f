//! The export document and its JSON/CSV encodings.
//!
//! Exports are deterministic: samples appear in grid (or step) order,
//! residual keys are sorted, and nothing time- or path-dependent is
//! recorded, so identical invocations produce identical bytes.

use std::collections::BTreeMap;
use std::io::Write as _;

use serde::Serialize;

use twistleaf::grid::{Axis, GridSpec3};
use twistleaf::C64;

use crate::args::{CliError, Format, OutputArgs};
use crate::report::ResidualReport;

#[derive(Debug, Clone, Serialize)]
pub struct AxisMeta {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridMeta {
    pub axes: Vec<AxisMeta>,
}

impl GridMeta {
    pub fn from_spec3(spec: &GridSpec3) -> Self {
        let names = ["q", "r", "s"];
        GridMeta {
            axes: spec
                .axes
                .iter()
                .zip(names)
                .map(|(a, name)| AxisMeta {
                    name: name.to_string(),
                    min: a.min,
                    max: a.max,
                    count: a.count,
                })
                .collect(),
        }
    }

    pub fn from_axes2(axes: &[Axis; 2]) -> Self {
        let names = ["r", "s"];
        GridMeta {
            axes: axes
                .iter()
                .zip(names)
                .map(|(a, name)| AxisMeta {
                    name: name.to_string(),
                    min: a.min,
                    max: a.max,
                    count: a.count,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub args: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
}

impl Meta {
    pub fn new(command: &str) -> Self {
        Meta {
            tool: "twistleaf".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            args: BTreeMap::new(),
            result: None,
        }
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.args.insert(key.to_string(), value.to_string());
        self
    }
}

/// One exported point. Fields not meaningful for the command are omitted;
/// within one document every sample populates the same fields.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Sample {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    pub point: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<[f64; 2]>,
    #[serde(rename = "U", skip_serializing_if = "Option::is_none")]
    pub unit: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub foot: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub residuals: BTreeMap<String, f64>,
}

impl Sample {
    pub fn at(point: &[f64]) -> Self {
        Sample {
            point: point.to_vec(),
            ..Sample::default()
        }
    }

    pub fn complex(value: C64) -> [f64; 2] {
        [value.re, value.im]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub meta: Meta,
    pub grid: Option<GridMeta>,
    pub samples: Vec<Sample>,
    pub reports: Vec<ResidualReport>,
}

impl Document {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => serde_json::to_string_pretty(self)
                .map(|mut s| {
                    s.push('\n');
                    s
                })
                .map_err(|e| CliError::Run(format!("JSON encoding failed: {e}"))),
            Format::Csv => Ok(to_csv(self)),
        }
    }

    pub fn write(&self, output: &OutputArgs) -> Result<(), CliError> {
        let text = self.render(output.format)?;
        match &output.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Run(format!("cannot write to stdout: {e}"))),
        }
    }
}

/// Full-precision decimal for CSV cells: 17 significant digits round-trip
/// every f64 exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn push_pair(cells: &mut Vec<String>, value: Option<[f64; 2]>, on: bool) {
    if !on {
        return;
    }
    match value {
        Some([a, b]) => {
            cells.push(fmt_float(a));
            cells.push(fmt_float(b));
        }
        None => {
            cells.push(String::new());
            cells.push(String::new());
        }
    }
}

fn point_headers(dim: usize) -> &'static [&'static str] {
    match dim {
        2 => &["r", "s"],
        _ => &["q", "r", "s"],
    }
}

/// Flat table encoding. Columns come in a fixed global order and are
/// included when the first sample populates them; residual columns are the
/// sorted union over all samples, blank where a sample has no value.
fn to_csv(doc: &Document) -> String {
    let mut out = String::new();
    let Some(first) = doc.samples.first() else {
        return out;
    };

    let mut headers: Vec<String> = Vec::new();
    if first.step.is_some() {
        headers.push("step".to_string());
    }
    for name in point_headers(first.point.len()) {
        headers.push(name.to_string());
    }
    if first.z.is_some() {
        headers.extend(["z_re".to_string(), "z_im".to_string()]);
    }
    if first.w.is_some() {
        headers.extend(["w_re".to_string(), "w_im".to_string()]);
    }
    if first.unit.is_some() {
        headers.extend(["u".to_string(), "v".to_string(), "w".to_string()]);
    }
    if first.map.is_some() {
        headers.extend(["map1".to_string(), "map2".to_string()]);
    }
    if first.rho.is_some() {
        headers.push("rho".to_string());
    }
    if first.foot.is_some() {
        headers.push("foot".to_string());
    }
    if first.status.is_some() {
        headers.push("status".to_string());
    }
    if first.iters.is_some() {
        headers.push("iters".to_string());
    }
    if first.degenerate.is_some() {
        headers.push("degenerate".to_string());
    }
    let mut res_keys: Vec<String> = doc
        .samples
        .iter()
        .flat_map(|s| s.residuals.keys().cloned())
        .collect();
    res_keys.sort();
    res_keys.dedup();
    for key in &res_keys {
        headers.push(format!("res:{key}"));
    }
    out.push_str(&headers.join(","));
    out.push('\n');

    for sample in &doc.samples {
        let mut cells: Vec<String> = Vec::with_capacity(headers.len());
        if first.step.is_some() {
            cells.push(sample.step.map_or_else(String::new, |k| k.to_string()));
        }
        for c in &sample.point {
            cells.push(fmt_float(*c));
        }
        push_pair(&mut cells, sample.z, first.z.is_some());
        push_pair(&mut cells, sample.w, first.w.is_some());
        if first.unit.is_some() {
            match sample.unit {
                Some(u) => cells.extend(u.iter().map(|c| fmt_float(*c))),
                None => cells.extend([String::new(), String::new(), String::new()]),
            }
        }
        push_pair(&mut cells, sample.map, first.map.is_some());
        if first.rho.is_some() {
            cells.push(sample.rho.map_or_else(String::new, fmt_float));
        }
        if first.foot.is_some() {
            cells.push(sample.foot.map_or_else(String::new, fmt_float));
        }
        if first.status.is_some() {
            cells.push(sample.status.clone().unwrap_or_default());
        }
        if first.iters.is_some() {
            cells.push(sample.iters.map_or_else(String::new, |k| k.to_string()));
        }
        if first.degenerate.is_some() {
            cells.push(
                sample
                    .degenerate
                    .map_or_else(String::new, |d| d.to_string()),
            );
        }
        for key in &res_keys {
            cells.push(
                sample
                    .residuals
                    .get(key)
                    .map_or_else(String::new, |v| fmt_float(*v)),
            );
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
