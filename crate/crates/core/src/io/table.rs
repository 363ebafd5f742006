use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// First line of every emitted file.
pub const HEADER: &str = concat!("kerr-mzi v", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    /// Library call that produced the values.
    pub provenance: String,
    pub values: Vec<f64>,
}

/// Named, equal-length numeric columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub table_id: String,
    columns: Vec<Column>,
}

impl FigureTable {
    pub fn new(table_id: impl Into<String>) -> Self {
        Self {
            table_id: table_id.into(),
            columns: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, provenance: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if let Some(first) = self.columns.first() {
            if first.values.len() != values.len() {
                return Err(Error::invalid(
                    "columns",
                    format!("`{name}` has {} rows, expected {}", values.len(), first.values.len()),
                ));
            }
        }
        if self.columns.iter().any(|c| c.name == name) {
            return Err(Error::invalid("columns", format!("duplicate column `{name}`")));
        }
        self.columns.push(Column {
            name,
            provenance: provenance.into(),
            values,
        });
        Ok(())
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    /// `# kerr-mzi v<version>`, a header row, then one line per row with
    /// every value printed to 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# {HEADER}\n");
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in 0..self.rows() {
            for (i, column) in self.columns.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{:.16e}", column.values[row]).expect("writing to a String");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let columns: Vec<Value> = self.columns.iter().map(|c| Value::from(c.name.clone())).collect();
        let provenance: Map<String, Value> = self
            .columns
            .iter()
            .map(|c| (c.name.clone(), Value::from(c.provenance.clone())))
            .collect();
        let rows: Vec<Value> = (0..self.rows())
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .map(|c| (c.name.clone(), number(c.values[row])))
                        .collect(),
                )
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("header".into(), Value::from(HEADER));
        doc.insert("table".into(), Value::from(self.table_id.clone()));
        doc.insert("columns".into(), Value::Array(columns));
        doc.insert("provenance".into(), Value::Object(provenance));
        doc.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values always serialize");
        text.push('\n');
        text
    }
}

// JSON has no NaN or infinity; those become null.
fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FigureTable {
        let mut table = FigureTable::new("demo");
        table.push("x", "grid", vec![0.0, 0.5]).unwrap();
        table.push("y", "f(x)", vec![1.0, -0.1]).unwrap();
        table
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], format!("# kerr-mzi v{}", env!("CARGO_PKG_VERSION")));
        assert_eq!(lines[1], "x,y");
        assert_eq!(lines[2], "0.0000000000000000e0,1.0000000000000000e0");
        assert_eq!(lines[3], "5.0000000000000000e-1,-1.0000000000000001e-1");
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn csv_values_round_trip() {
        let mut table = FigureTable::new("rt");
        let values = vec![std::f64::consts::PI, 1e-300, -2.5e17, 0.1 + 0.2];
        table.push("v", "", values.clone()).unwrap();
        let parsed: Vec<f64> = table.to_csv().lines().skip(2).map(|l| l.parse().unwrap()).collect();
        assert_eq!(parsed, values);
    }

    #[test]
    fn json_mirrors_csv() {
        let doc: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(doc["table"], "demo");
        assert_eq!(doc["columns"], serde_json::json!(["x", "y"]));
        assert_eq!(doc["provenance"]["y"], "f(x)");
        assert_eq!(doc["rows"][1]["y"].as_f64(), Some(-0.1));
        let keys: Vec<&String> = doc["rows"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["x", "y"]);
    }

    #[test]
    fn ragged_columns_are_rejected() {
        let mut table = sample();
        assert!(table.push("z", "", vec![1.0]).is_err());
        assert!(table.push("x", "", vec![1.0, 2.0]).is_err());
    }
}
