//! Dataset container and the CSV/JSON writers.
//!
//! CSV layout: a `# key=value …` parameter line, a column-name line, then
//! data rows. Floats are printed with 17 significant digits so re-running a
//! command with the recorded parameters reproduces the bytes exactly.

use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub enum Value {
    Float(f64),
    Int(i64),
    Str(String),
    Empty,
}

impl Value {
    fn to_csv_field(&self) -> String {
        match self {
            Value::Float(x) => format_float(*x),
            Value::Int(i) => i.to_string(),
            Value::Str(s) => {
                if s.contains(',') || s.contains('"') {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            Value::Empty => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Float(x) => serde_json::json!(x),
            Value::Int(i) => serde_json::json!(i),
            Value::Str(s) => serde_json::json!(s),
            Value::Empty => serde_json::Value::Null,
        }
    }
}

/// 17 significant digits, locale-independent.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, Default)]
pub struct Dataset {
    params: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Dataset {
    pub fn new(columns: &[&str]) -> Self {
        Dataset {
            params: Vec::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn param_float(&mut self, key: &str, value: f64) -> &mut Self {
        self.params.push((key.to_string(), format_float(value)));
        self
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row arity mismatch");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(out, "# {}", header.join(" "));
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Value::to_csv_field).collect();
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let params: serde_json::Map<String, serde_json::Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::json!(v)))
            .collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| serde_json::Value::Array(row.iter().map(Value::to_json).collect()))
            .collect();
        let doc = serde_json::json!({
            "params": params,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("static structure");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut d = Dataset::new(&["a", "b"]);
        d.param("cmd", "demo").param("p", 3);
        d.push_row(vec![Value::Int(1), Value::Float(0.5)]);
        let csv = d.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "# cmd=demo p=3");
        assert_eq!(lines.next().unwrap(), "a,b");
        assert_eq!(lines.next().unwrap(), "1,5.0000000000000000e-1");
    }

    #[test]
    fn float_formatting_round_trips() {
        for x in [1.0, -0.333_333_333_333_333_3, 1.8936059182615588e-3, 1e300] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn json_is_valid() {
        let mut d = Dataset::new(&["x"]);
        d.param("cmd", "demo");
        d.push_row(vec![Value::Empty]);
        let parsed: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
        assert!(parsed["rows"][0][0].is_null());
    }
}
