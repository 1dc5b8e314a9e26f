//! Tabular results rendered as CSV, JSON or aligned text.

use std::fmt::Write as _;

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Txt,
}

/// A table of results together with the property it checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub title: String,
    /// The property the rows are checked against.
    pub claim: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub passed: bool,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, claim: impl Into<String>, columns: &[&str]) -> Self {
        Report {
            title: title.into(),
            claim: claim.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            passed: true,
            notes: Vec::new(),
        }
    }

    pub fn row(&mut self, values: Vec<Value>) {
        assert_eq!(values.len(), self.columns.len(), "row width");
        self.rows.push(values);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn fail_if(&mut self, violated: bool) {
        self.passed &= !violated;
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
            Format::Txt => self.to_txt(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(plain).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    /// An array with one object per row, each carrying the checked claim.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    obj.insert(c.clone(), v.clone());
                }
                obj.insert("claim".into(), Value::String(self.claim.clone()));
                Value::Object(obj)
            })
            .collect();
        let mut out = serde_json::to_string_pretty(&Value::Array(rows)).expect("values serialize");
        out.push('\n');
        out
    }

    pub fn to_txt(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(plain).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| cells.iter().map(|r| r[j].len()).chain([self.columns[j].len()]).max().unwrap_or(0))
            .collect();
        let line = |values: &[String]| {
            values
                .iter()
                .zip(&widths)
                .map(|(v, w)| format!("{v:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        let _ = writeln!(out, "claim: {}", self.claim);
        let _ = writeln!(out, "{}", line(&self.columns));
        for r in &cells {
            let _ = writeln!(out, "{}", line(r));
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

/// A JSON value as a bare CSV/text cell.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new("complexity", "rho(n) = 2n+1", &["n", "value"]);
        r.row(vec![json!(1), json!(3)]);
        r.row(vec![json!(2), json!(5)]);
        r
    }

    #[test]
    fn csv_and_txt() {
        let r = sample();
        assert_eq!(r.to_csv(), "n,value\n1,3\n2,5\n");
        let txt = r.to_txt();
        assert!(txt.contains("claim: rho(n) = 2n+1"));
        assert!(txt.ends_with("result: PASS\n"));
    }

    #[test]
    fn json_rows_carry_claim() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1]["value"], json!(5));
        assert_eq!(rows[0]["claim"], json!("rho(n) = 2n+1"));
    }
}
