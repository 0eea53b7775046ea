//! Flat key/value rendering of reports as text, JSON or CSV.

use std::str::FromStr;

use serde_json::{json, Map, Value};

use super::{BoundCheck, PipelineReport, RainbowReport, SubsetPairStats, Witness};
use crate::coloring::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!(
                "unknown format `{other}` (expected text, json or csv)"
            )),
        }
    }
}

/// Anything that can be flattened into ordered (name, value) pairs.
pub trait Report {
    fn fields(&self) -> Vec<(&'static str, Value)>;
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "none".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// One report: `key=value` lines, a single JSON object, or a header plus one CSV row.
pub fn render(report: &dyn Report, format: OutputFormat) -> String {
    render_table(&[report], format)
}

/// Several reports of the same shape. Text blocks are separated by blank lines,
/// JSON is one object per line, CSV shares a single header.
pub fn render_table(reports: &[&dyn Report], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            for (i, r) in reports.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                for (k, v) in r.fields() {
                    out.push_str(&format!("{k}={}\n", scalar(&v)));
                }
            }
        }
        OutputFormat::Json => {
            for r in reports {
                let obj: Map<String, Value> = r
                    .fields()
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v))
                    .collect();
                out.push_str(&Value::Object(obj).to_string());
                out.push('\n');
            }
        }
        OutputFormat::Csv => {
            if let Some(first) = reports.first() {
                let header: Vec<&str> = first.fields().iter().map(|(k, _)| *k).collect();
                out.push_str(&header.join(","));
                out.push('\n');
            }
            for r in reports {
                let row: Vec<String> = r.fields().iter().map(|(_, v)| scalar(v)).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
    }
    out
}

pub(crate) fn rational(r: Rational) -> Value {
    if *r.denom() == 1 {
        json!(r.numer())
    } else {
        json!(format!("{}/{}", r.numer(), r.denom()))
    }
}

fn witness(w: &Option<Witness>) -> Value {
    match w {
        Some(w) => json!(w.triangle.indices()),
        None => Value::Null,
    }
}

fn witness_colors(w: &Option<Witness>) -> Value {
    match w {
        Some(w) => json!(w.colors),
        None => Value::Null,
    }
}

impl Report for RainbowReport {
    fn fields(&self) -> Vec<(&'static str, Value)> {
        vec![
            ("total_triangles", json!(self.total_triangles)),
            ("rainbow_count", json!(self.rainbow_count)),
            ("mono_pairs", json!(self.mono_pairs)),
            ("witness", witness(&self.witness)),
            ("witness_colors", witness_colors(&self.witness)),
        ]
    }
}

impl Report for PipelineReport {
    fn fields(&self) -> Vec<(&'static str, Value)> {
        vec![
            ("original_colors", json!(self.original.class_count())),
            ("t", json!(self.t)),
            ("k", json!(self.k)),
            ("u", rational(self.u)),
            ("merges", json!(self.merges.len())),
            (
                "coarsen_branch",
                json!(format!("{:?}", self.coarsen_trace.branch).to_lowercase()),
            ),
            ("witness", witness(&self.witness)),
            ("witness_colors", witness_colors(&self.witness)),
            ("refinement_chain", json!(self.refinement_chain)),
            ("k_within_bound", json!(self.k_within_bound)),
            ("max_class_fraction", rational(self.max_class_fraction)),
            (
                "class_size_hypothesis_violated",
                json!(self.class_size_hypothesis_violated),
            ),
            ("too_few_coarse_classes", json!(self.too_few_coarse_classes)),
        ]
    }
}

impl Report for BoundCheck {
    fn fields(&self) -> Vec<(&'static str, Value)> {
        vec![
            ("total_triangles", json!(self.total_triangles)),
            ("rainbow_count", json!(self.rainbow_count)),
            ("mono_pairs", json!(self.mono_pairs)),
            ("bound_holds", json!(self.bound_holds)),
        ]
    }
}

impl Report for SubsetPairStats {
    fn fields(&self) -> Vec<(&'static str, Value)> {
        vec![
            ("q", json!(self.q)),
            ("subset_size", json!(self.subset_size)),
            ("ordered_pairs", json!(self.ordered_pairs)),
            (
                "ratio",
                json!(format!("{}/{}", self.ratio.numer(), self.ratio.denom())),
            ),
            ("ratio_decimal", json!(format!("{:.6}", self.ratio_f64()))),
        ]
    }
}

/// Ad-hoc reports built from literal fields.
impl Report for Vec<(&'static str, Value)> {
    fn fields(&self) -> Vec<(&'static str, Value)> {
        self.clone()
    }
}
