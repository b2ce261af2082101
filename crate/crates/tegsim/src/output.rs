//! Tabular output rendering.
//!
//! Two formats: `csv` writes `#`-prefixed comment lines (config hash,
//! optional timestamp, caller-provided metadata) followed by a header row
//! and comma-separated data; `plot` writes bare whitespace-separated
//! columns with no comments, ready for gnuplot-style tools.

use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Plot,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "plot" => Ok(OutputFormat::Plot),
            other => Err(Error::Config(format!(
                "output format must be \"csv\" or \"plot\", got \"{other}\""
            ))),
        }
    }
}

/// One result table with its provenance comments.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Comment lines (without the leading `#`), emitted only in CSV.
    pub comments: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn comment<S: Into<String>>(&mut self, line: S) {
        self.comments.push(line.into());
    }

    /// Append the config hash and, unless suppressed, a generation
    /// timestamp (unix seconds). Suppressing it makes reruns byte-identical.
    pub fn stamp(&mut self, config_hash: &str, timestamp: bool) {
        self.comments.push(format!("config_sha256: {config_hash}"));
        if timestamp {
            let now = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            self.comments.push(format!("generated_unix_time: {now}"));
        }
    }

    /// Embed the full resolved config as comment lines.
    pub fn embed_config(&mut self, config_toml: &str) {
        self.comments.push("resolved config:".into());
        for line in config_toml.lines() {
            self.comments.push(format!("  {line}"));
        }
    }

    pub fn push_row<S: Into<String>>(&mut self, row: Vec<S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the column count"
        );
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Csv => {
                for c in &self.comments {
                    out.push_str("# ");
                    out.push_str(c);
                    out.push('\n');
                }
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
            }
            OutputFormat::Plot => {
                for row in &self.rows {
                    out.push_str(&row.join(" "));
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Render a float with enough digits to round-trip.
pub fn fmt_f64(v: f64) -> String {
    // Without an explicit precision Rust prints the shortest
    // representation that parses back to the same value.
    format!("{v:e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(vec!["x", "y"]);
        t.comment("meta: sweep");
        t.push_row(vec!["1", "2"]);
        t.push_row(vec!["3", "4"]);
        t
    }

    #[test]
    fn csv_has_comments_and_header() {
        let mut t = sample();
        t.stamp("abc123", false);
        let text = t.render(OutputFormat::Csv);
        assert!(text.starts_with("# meta: sweep\n# config_sha256: abc123\n"));
        assert!(text.contains("x,y\n1,2\n3,4\n"));
        assert!(!text.contains("generated_unix_time"));
    }

    #[test]
    fn timestamp_only_when_enabled() {
        let mut t = sample();
        t.stamp("abc", true);
        assert!(t.render(OutputFormat::Csv).contains("generated_unix_time"));
    }

    #[test]
    fn plot_is_bare_columns() {
        let mut t = sample();
        t.stamp("abc", true);
        let text = t.render(OutputFormat::Plot);
        assert_eq!(text, "1 2\n3 4\n");
    }

    #[test]
    fn render_without_timestamp_is_deterministic() {
        let make = || {
            let mut t = sample();
            t.stamp("deadbeef", false);
            t.render(OutputFormat::Csv)
        };
        assert_eq!(make(), make());
    }

    #[test]
    fn embedded_config_lines_are_comments() {
        let mut t = sample();
        t.embed_config("[a]\nb = 1");
        let text = t.render(OutputFormat::Csv);
        assert!(text.contains("#   [a]\n#   b = 1\n"));
    }

    #[test]
    fn float_formatting_round_trips() {
        let v = 2.579_913e5_f64 / 3.0;
        let s = fmt_f64(v);
        assert_eq!(s.parse::<f64>().unwrap(), v);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert_eq!("plot".parse::<OutputFormat>().unwrap(), OutputFormat::Plot);
        assert!("json".parse::<OutputFormat>().is_err());
    }
}
