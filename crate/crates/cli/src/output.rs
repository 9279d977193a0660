use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::config_hash;
use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Provenance written at the top of every output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub config_sha256: String,
    pub config: Value,
}

impl Header {
    pub fn new<T: Serialize>(command: &str, seed: Option<u64>, cfg: &T) -> Self {
        Header {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            config_sha256: config_hash(cfg),
            config: serde_json::to_value(cfg).expect("configurations serialize"),
        }
    }
}

/// Renders the header and records. JSON output is newline-delimited with the
/// header first; CSV output carries the header as `#` comment lines.
pub fn render(header: &Header, records: &[Value], format: Format) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    match format {
        Format::Json => {
            let h = serde_json::json!({ "header": header });
            writeln!(out, "{h}").unwrap();
            for r in records {
                writeln!(out, "{r}").unwrap();
            }
        }
        Format::Csv => {
            writeln!(out, "# tool: {} {}", header.tool, header.version).unwrap();
            writeln!(out, "# command: {}", header.command).unwrap();
            match header.seed {
                Some(s) => writeln!(out, "# seed: {s}").unwrap(),
                None => writeln!(out, "# seed: none").unwrap(),
            }
            writeln!(out, "# config_sha256: {}", header.config_sha256).unwrap();
            writeln!(out, "# config: {}", header.config).unwrap();
            let rows: Vec<Vec<(String, String)>> = records.iter().map(flatten).collect();
            let mut w = csv::Writer::from_writer(Vec::new());
            if let Some(first) = rows.first() {
                let keys: Vec<&str> = first.iter().map(|(k, _)| k.as_str()).collect();
                w.write_record(&keys).map_err(|e| CliError::config(e.to_string()))?;
                for row in &rows {
                    let cells: Vec<&str> = keys
                        .iter()
                        .map(|k| row.iter().find(|(rk, _)| rk == k).map_or("", |(_, v)| v.as_str()))
                        .collect();
                    w.write_record(&cells).map_err(|e| CliError::config(e.to_string()))?;
                }
            }
            out.extend(w.into_inner().map_err(|e| CliError::config(e.to_string()))?);
        }
    }
    Ok(out)
}

/// Writes to `path`, or to stdout when it is `None`.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let io = |source| CliError::Io { path: p.to_path_buf(), source };
            let mut f = BufWriter::new(File::create(p).map_err(io)?);
            f.write_all(bytes).map_err(io)?;
            f.flush().map_err(io)
        }
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(bytes).and_then(|_| s.flush()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

/// Nested objects become dotted column names, arrays get index suffixes.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| go(&key(k), x, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| go(&key(&i.to_string()), x, out)),
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            Value::Null => out.push((prefix.to_string(), String::new())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    go("", v, &mut out);
    out
}

/// Serializes records for [`render`].
pub fn to_values<T: Serialize>(items: &[T]) -> Vec<Value> {
    items.iter().map(|x| serde_json::to_value(x).expect("records serialize")).collect()
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}
