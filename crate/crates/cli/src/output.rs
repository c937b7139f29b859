//! CSV and JSON rendering of result tables.

use mirror_dd::experiments::Table;
use mirror_dd::TimeSeries;
use serde_json::{Map, Value};

use crate::args::RunConfig;

/// Column-named numeric output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub table: Table,
    /// Render single-row tables as scalars in JSON.
    pub scalar: bool,
}

impl Output {
    pub fn rows(table: Table) -> Self {
        Self {
            table,
            scalar: false,
        }
    }

    pub fn scalar(table: Table) -> Self {
        Self {
            table,
            scalar: true,
        }
    }

    /// `t` followed by every channel; channels carrying standard errors get an
    /// extra `<name>_se` column.
    pub fn from_series(series: &TimeSeries) -> Self {
        let mut columns = vec!["t".to_string()];
        let mut data: Vec<&[f64]> = vec![&series.times];
        for ch in &series.channels {
            columns.push(ch.name.clone());
            data.push(&ch.values);
            if let Some(se) = &ch.stderr {
                columns.push(format!("{}_se", ch.name));
                data.push(se);
            }
        }
        let rows = (0..series.times.len())
            .map(|i| data.iter().map(|col| col[i]).collect())
            .collect();
        Self::rows(Table { columns, rows })
    }
}

fn fmt_f64(buf: &mut ryu::Buffer, v: f64) -> &str {
    if v.is_finite() {
        buf.format_finite(v)
    } else if v.is_nan() {
        "nan"
    } else if v > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

pub fn render_csv(out: &Output) -> String {
    let mut s = out.table.columns.join(",");
    s.push('\n');
    let mut buf = ryu::Buffer::new();
    for row in &out.table.rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(fmt_f64(&mut buf, *v));
        }
        s.push('\n');
    }
    s
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn render_json(out: &Output, run: &RunConfig) -> String {
    let mut obj = Map::new();
    obj.insert("command".into(), Value::String(run.command.name().into()));
    for (j, name) in out.table.columns.iter().enumerate() {
        let value = if out.scalar && out.table.rows.len() == 1 {
            number(out.table.rows[0][j])
        } else {
            Value::Array(out.table.rows.iter().map(|r| number(r[j])).collect())
        };
        obj.insert(name.clone(), value);
    }
    let config: Map<String, Value> = run
        .echo()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    obj.insert("config".into(), Value::Object(config));
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serialisable");
    s.push('\n');
    s
}
