//! CSV and JSON writers. Both carry the config echo and the same numbers:
//! CSV prints 12 significant digits and JSON holds those digits parsed back.

use std::collections::BTreeMap;
use std::io::Write;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use super::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Value::Missing, Value::Num)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

fn sci(v: f64) -> String {
    format!("{v:.11e}")
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(v) if v.is_nan() => "nan".into(),
            Value::Num(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Value::Num(v) => sci(*v),
            Value::Int(v) => v.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Missing => String::new(),
            Value::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Value::Text(s) => s.clone(),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            // round through the CSV digits so both formats agree exactly
            Value::Num(v) if v.is_finite() => {
                s.serialize_f64(sci(*v).parse().expect("formatted float"))
            }
            Value::Num(_) | Value::Missing => s.serialize_none(),
            Value::Int(v) => s.serialize_i64(*v),
            Value::Bool(b) => s.serialize_bool(*b),
            Value::Text(t) => s.serialize_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width for {}", self.name);
        self.rows.push(row);
    }
}

/// Column-keyed arrays in schema order.
struct Columns<'a>(&'a Table);

impl Serialize for Columns<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let t = self.0;
        let mut m = s.serialize_map(Some(t.columns.len()))?;
        for (i, c) in t.columns.iter().enumerate() {
            let col: Vec<&Value> = t.rows.iter().map(|r| &r[i]).collect();
            m.serialize_entry(c, &col)?;
        }
        m.end()
    }
}

struct Tables<'a>(&'a [Table]);

impl Serialize for Tables<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for t in self.0 {
            m.serialize_entry(t.name, &Columns(t))?;
        }
        m.end()
    }
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    qcat: &'static str,
    config: &'a BTreeMap<String, String>,
    tables: Tables<'a>,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn write_csv(
    w: &mut dyn Write,
    config: &BTreeMap<String, String>,
    tables: &[Table],
) -> std::io::Result<()> {
    writeln!(w, "# qcat {VERSION}")?;
    for (k, v) in config {
        writeln!(w, "# config {k}={v}")?;
    }
    for t in tables {
        writeln!(w, "# table {}", t.name)?;
        writeln!(w, "{}", t.columns.join(","))?;
        for r in &t.rows {
            let cells: Vec<String> = r.iter().map(Value::csv).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
    }
    Ok(())
}

pub fn write_json(
    w: &mut dyn Write,
    config: &BTreeMap<String, String>,
    tables: &[Table],
) -> std::io::Result<()> {
    let doc = JsonDoc {
        qcat: VERSION,
        config,
        tables: Tables(tables),
    };
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}

pub fn write(
    w: &mut dyn Write,
    format: Format,
    config: &BTreeMap<String, String>,
    tables: &[Table],
) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(w, config, tables),
        Format::Json => write_json(w, config, tables),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Table> {
        let mut t = Table::new("demo", &["a", "b", "note"]);
        t.push(vec![0.1.into(), Value::Missing, "x,y".into()]);
        t.push(vec![(1.0 / 3.0).into(), 2usize.into(), "plain".into()]);
        vec![t]
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(
            &mut buf,
            &BTreeMap::from([("j".into(), "25".into())]),
            &sample(),
        )
        .unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("# config j=25\n# table demo\na,b,note\n"));
        assert!(s.contains("1.00000000000e-1,,\"x,y\"\n"));
        assert!(s.contains("3.33333333333e-1,2,plain\n"));
    }

    #[test]
    fn json_matches_csv_digits() {
        let mut buf = Vec::new();
        write_json(&mut buf, &BTreeMap::new(), &sample()).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let a = v["tables"]["demo"]["a"][1].as_f64().unwrap();
        assert_eq!(a, "3.33333333333e-1".parse::<f64>().unwrap());
        assert!(v["tables"]["demo"]["b"][0].is_null());
    }
}
