use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::HarnessError;

/// How an expected value was obtained, independently of the code under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// Closed-form classical integral.
    Analytic,
    /// The identity holds by definition and must be exact.
    Definitional,
    /// Independent brute-force or quadrature oracle.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classical {
    pub value: f64,
    pub reference: Reference,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Vec<&Value> {
        let Some(i) = self.columns.iter().position(|c| c == name) else {
            return vec![];
        };
        self.rows.iter().map(|r| &r[i]).collect()
    }

    pub fn column_f64(&self, name: &str) -> Vec<f64> {
        self.column(name)
            .into_iter()
            .filter_map(|v| v.as_f64())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub description: String,
    pub classical: Option<Classical>,
    pub table: Table,
    pub checks: Vec<Check>,
    /// Informational observations that do not affect the verdict.
    pub notes: Vec<String>,
    /// Serialized counterexample chains, if any check failed on random input.
    pub counterexamples: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>, description: impl Into<String>, table: Table) -> Self {
        Report {
            name: name.into(),
            description: description.into(),
            classical: None,
            table,
            checks: vec![],
            notes: vec![],
            counterexamples: vec![],
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, pass, detail));
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(vec![]);
        let err = |e: csv::Error| HarnessError::Output(e.to_string());
        w.write_record(&self.table.columns).map_err(err)?;
        for row in &self.table.rows {
            w.write_record(row.iter().map(cell)).map_err(err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| HarnessError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| HarnessError::Output(e.to_string()))
    }

    /// JSON summary: everything but the table rows.
    pub fn summary_json(&self) -> Value {
        serde_json::json!({
            "name": self.name,
            "description": self.description,
            "classical": self.classical,
            "rows": self.table.rows.len(),
            "checks": self.checks,
            "notes": self.notes,
            "counterexamples": self.counterexamples,
            "pass": self.pass(),
        })
    }

    /// Writes `<name>.csv` and `<name>.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(), HarnessError> {
        fs::create_dir_all(dir)
            .map_err(|e| HarnessError::Output(format!("{}: {e}", dir.display())))?;
        let write = |ext: &str, body: String| {
            let path = dir.join(format!("{}.{ext}", self.name));
            fs::write(&path, body)
                .map_err(|e| HarnessError::Output(format!("{}: {e}", path.display())))
        };
        write("csv", self.to_csv()?)?;
        let json = serde_json::to_string_pretty(&self.summary_json())
            .map_err(|e| HarnessError::Output(e.to_string()))?;
        write("json", json + "\n")
    }
}

/// Fixed-precision text for floats so outputs are stable across runs.
fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(x) if x.is_f64() => format!("{:.15e}", x.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    }
}

/// `Value` for a float, `null` for non-finite input.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_summary() {
        let mut t = Table::new(&["level", "value", "label"]);
        t.push(vec![Value::from(1), num(0.5), Value::from("a")]);
        t.push(vec![Value::from(2), num(f64::NAN), Value::from("b,c")]);
        let mut r = Report::new("demo", "demo report", t);
        r.check("ok", true, "");
        assert!(r.pass());
        assert_eq!(
            r.to_csv().unwrap(),
            "level,value,label\n1,5.000000000000000e-1,a\n2,,\"b,c\"\n"
        );
        assert_eq!(r.table.column_f64("value"), vec![0.5]);
        r.check("bad", false, "x");
        assert_eq!(r.summary_json()["pass"], Value::Bool(false));
        assert_eq!(r.failed_checks().len(), 1);
    }
}
