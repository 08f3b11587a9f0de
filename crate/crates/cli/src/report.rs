//! Report envelope and output formats.

use serde::Serialize;
use serde_json::{json, Value};

use ulrich_core::bridgeland::Convention;
use ulrich_core::variety::VarietyModel;

#[derive(Copy, Clone, Debug)]
pub enum Format {
    Json,
    Tsv,
}

pub struct Report {
    command: Vec<String>,
    variety: Option<String>,
    convention: Option<Convention>,
}

impl Report {
    pub fn new(argv: &[String]) -> Report {
        Report {
            command: argv.to_vec(),
            variety: None,
            convention: None,
        }
    }

    pub fn variety(mut self, model: &VarietyModel) -> Report {
        self.variety = Some(model.to_string());
        self
    }

    pub fn convention(mut self, conv: Convention) -> Report {
        self.convention = Some(conv);
        self
    }

    /// Renders the report. `tsv` overrides the flattened rendering of `result`.
    pub fn finish<T: Serialize>(self, format: Format, result: &T, tsv: Option<String>, passed: Option<bool>) -> String {
        let result = serde_json::to_value(result).expect("results serialize");
        match format {
            Format::Json => {
                let envelope = json!({
                    "tool": "ulrich-kit",
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": self.command,
                    "variety": self.variety,
                    "convention": self.convention,
                    "passed": passed,
                    "result": result,
                });
                let mut out = serde_json::to_string_pretty(&envelope).expect("json");
                out.push('\n');
                out
            }
            Format::Tsv => tsv.unwrap_or_else(|| {
                let mut lines = Vec::new();
                flatten("", &result, &mut lines);
                lines.iter().map(|l| format!("{l}\n")).collect()
            }),
        }
    }
}

/// `path\tvalue` lines for every leaf of a JSON value.
pub fn flatten(prefix: &str, value: &Value, out: &mut Vec<String>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) => {
            for (k, v) in items.iter().enumerate() {
                flatten(&join(&k.to_string()), v, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}\t{s}")),
        other => out.push(format!("{prefix}\t{other}")),
    }
}
