//! Emitted documents and their text forms.

use serde::Serialize;
use serde_json::Value;

use crate::config::OutputFormat;

/// A command result: JSON always, plus table renderings where they make sense.
#[derive(Clone, Debug)]
pub struct Document {
    pub json: Value,
    pub markdown: Option<String>,
    pub csv: Option<String>,
}

impl Document {
    pub fn new<T: Serialize>(value: &T) -> Self {
        let json = serde_json::to_value(value).expect("result types serialize");
        Document { json, markdown: None, csv: None }
    }

    pub fn with_markdown(mut self, md: String) -> Self {
        self.markdown = Some(md);
        self
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    /// None when the format has no rendering for this document.
    pub fn render(&self, format: OutputFormat) -> Option<String> {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json");
                s.push('\n');
                Some(s)
            }
            OutputFormat::Markdown => {
                Some(self.markdown.clone().unwrap_or_else(|| markdown_fields(&self.json)))
            }
            OutputFormat::Csv => self.csv.clone(),
        }
    }
}

fn cell(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    s.replace('|', "\\|")
}

/// Two-column field/value table of a JSON object.
pub fn markdown_fields(v: &Value) -> String {
    let mut s = String::from("| field | value |\n|---|---|\n");
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                s.push_str(&format!("| {} | {} |\n", k, cell(x)));
            }
        }
        other => s.push_str(&format!("| value | {} |\n", cell(other))),
    }
    s
}

/// Markdown table with the given header over rows of cells.
pub fn markdown_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
        s.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    s
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let quote = |c: &str| {
        if c.contains([',', '"', '\n']) {
            format!("\"{}\"", c.replace('"', "\"\""))
        } else {
            c.to_string()
        }
    };
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| quote(c)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}
