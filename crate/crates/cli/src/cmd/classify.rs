//! `classify`: label a real-linear subspace of C^3 by codimension and
//! complex content.

use clap::Args;

use twistleaf::twistor::classify_subspace;

use crate::args::{invalid, parse_vectors, CmdResult, OutputArgs};
use crate::output::{Document, Meta};

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Spanning vectors "x1,y1,x2,y2,x3,y3;..." (three to five vectors,
    /// semicolon-separated).
    #[arg(long, allow_hyphen_values = true)]
    pub vectors: String,

    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(args: ClassifyArgs) -> CmdResult {
    let vectors = parse_vectors(&args.vectors)?;
    let class = classify_subspace(&vectors).map_err(|e| invalid(e.to_string()))?;

    let mut meta = Meta::new("classify").arg("vectors", &args.vectors);
    meta.result = Some(serde_json::json!({
        "label": class.label.name(),
        "hdim": class.hdim,
        "codimension": 6 - vectors.len(),
    }));
    Document {
        meta,
        grid: None,
        samples: Vec::new(),
        reports: Vec::new(),
    }
    .write(&args.output)?;
    Ok(true)
}
