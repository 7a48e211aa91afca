use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::args::Format;

/// One table cell. Floats are written with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// A table with metadata and a summary, rendered as CSV or JSON.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub meta: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Value,
}

impl Report {
    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// `#` metadata lines, a header row, data rows and a `#` JSON footer.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}: {}", compact(v));
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        let _ = writeln!(s, "# {}", compact(&self.summary));
        s
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        for (k, v) in &self.meta {
            root.insert(k.clone(), v.clone());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        root.insert("rows".into(), Value::Array(rows));
        root.insert("summary".into(), self.summary.clone());
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("values are serializable");
        s.push('\n');
        s
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("values are serializable")
}

/// JSON number, or null for non-finite values.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::default();
        r.meta("command", "profile");
        r.meta("tol", 1e-6);
        r.columns = vec!["idx".into(), "H".into(), "converged".into()];
        r.rows = vec![vec![Cell::Int(0), Cell::Num(0.1), Cell::Bool(true)]];
        r.summary = json!({ "mean": 0.1 });
        r
    }

    #[test]
    fn csv_layout() {
        let text = sample().to_csv();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# command: \"profile\"");
        assert_eq!(lines[2], "idx,H,converged");
        assert_eq!(lines[3], "0,1.0000000000000001e-1,true");
        assert_eq!(lines[4], "# {\"mean\":0.1}");
    }

    #[test]
    fn csv_numbers_round_trip() {
        for x in [std::f64::consts::PI, 1e-300, -2.5e17, 0.1 + 0.2] {
            let s = Cell::Num(x).csv();
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn json_rows_are_keyed_by_column() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["rows"][0]["H"], json!(0.1));
        assert_eq!(v["summary"]["mean"], json!(0.1));
        assert_eq!(num(f64::NAN), Value::Null);
    }
}
