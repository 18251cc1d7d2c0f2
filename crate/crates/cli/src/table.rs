//! Column tables and their CSV / JSON encodings.

use std::io::Write;

use serde_json::{Map, Value};

#[derive(Debug, Clone)]
pub enum Column {
    Int(Vec<i64>),
    Float(Vec<f64>),
    OptFloat(Vec<Option<f64>>),
    Bool(Vec<bool>),
    Text(Vec<String>),
}

impl Column {
    fn len(&self) -> usize {
        match self {
            Column::Int(v) => v.len(),
            Column::Float(v) => v.len(),
            Column::OptFloat(v) => v.len(),
            Column::Bool(v) => v.len(),
            Column::Text(v) => v.len(),
        }
    }

    fn cell(&self, row: usize) -> String {
        match self {
            Column::Int(v) => v[row].to_string(),
            Column::Float(v) => float(v[row]),
            Column::OptFloat(v) => v[row].map(float).unwrap_or_default(),
            Column::Bool(v) => v[row].to_string(),
            Column::Text(v) => v[row].clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Column::Int(v) => v.as_slice().into(),
            Column::Float(v) => v.as_slice().into(),
            Column::OptFloat(v) => v
                .iter()
                .map(|x| x.map_or(Value::Null, Value::from))
                .collect(),
            Column::Bool(v) => v.as_slice().into(),
            Column::Text(v) => v.as_slice().into(),
        }
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    names: Vec<&'static str>,
    columns: Vec<Column>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &'static str, column: Column) -> Self {
        debug_assert!(self
            .columns
            .first()
            .map_or(true, |c| c.len() == column.len()));
        self.names.push(name);
        self.columns.push(column);
        self
    }

    fn rows(&self) -> usize {
        self.columns.first().map_or(0, Column::len)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        writer.write_record(&self.names)?;
        for row in 0..self.rows() {
            writer.write_record(self.columns.iter().map(|c| c.cell(row)))?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_json(&self, meta: Map<String, Value>) -> Value {
        let data: Map<String, Value> = self
            .names
            .iter()
            .zip(&self.columns)
            .map(|(n, c)| (n.to_string(), c.to_json()))
            .collect();
        let mut doc = Map::new();
        doc.insert("meta".into(), Value::Object(meta));
        doc.insert("data".into(), Value::Object(data));
        Value::Object(doc)
    }
}
