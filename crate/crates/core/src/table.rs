//! CSV tables with `#`-prefixed provenance lines.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

/// Bumped whenever a pinned header changes.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    /// Provenance lines, written without the leading `# `.
    pub comments: Vec<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(headers: &[S]) -> Self {
        Table {
            comments: Vec::new(),
            headers: headers.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.headers.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i].parse().ok()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Shortest round-trip representation; empty for missing or non-finite values.
pub fn num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:?}"),
        _ => String::new(),
    }
}

pub fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

/// Standard provenance block: tool version, schema, and a timestamp line.
pub fn provenance(kind: &str) -> Vec<String> {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    vec![
        format!("optosqueeze {kind}"),
        format!("version: {}", env!("CARGO_PKG_VERSION")),
        format!("schema: {kind}-v{SCHEMA_VERSION}"),
        format!("timestamp: {secs}"),
    ]
}
