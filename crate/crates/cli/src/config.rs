use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::error::CliError;

/// Flags shared by every subcommand; each overrides the key of the same name.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    /// `key=value` pairs; dotted keys reach into tables, values are TOML.
    pub set: Vec<String>,
}

/// Resolves a command configuration: defaults, then the TOML file, then the
/// flags. Unknown keys are rejected.
pub fn resolve<T>(file: Option<&Path>, ov: &Overrides) -> Result<T, CliError>
where
    T: Default + Serialize + DeserializeOwned,
{
    let mut table = Table::try_from(T::default()).map_err(|e| CliError::config(e.to_string()))?;
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        let file_table: Table =
            text.parse().map_err(|e: toml::de::Error| CliError::config(format!("{}: {e}", path.display())))?;
        merge(&mut table, file_table);
    }
    if let Some(seed) = ov.seed {
        let seed = i64::try_from(seed).map_err(|_| CliError::config("seed must be below 2^63"))?;
        set_existing(&mut table, "seed", Value::Integer(seed))?;
    }
    if let Some(trials) = ov.trials {
        set_existing(&mut table, "trials", Value::Integer(trials as i64))?;
    }
    for kv in &ov.set {
        let (key, raw) = kv.split_once('=').ok_or_else(|| CliError::config(format!("expected key=value, got `{kv}`")))?;
        set_path(&mut table, key.trim(), parse_value(raw.trim()))?;
    }
    T::deserialize(Value::Table(table)).map_err(|e| CliError::config(e.to_string()))
}

fn parse_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

fn merge(base: &mut Table, over: Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn set_existing(table: &mut Table, key: &str, v: Value) -> Result<(), CliError> {
    if !table.contains_key(key) {
        return Err(CliError::config(format!("this command has no `{key}` setting")));
    }
    table.insert(key.to_string(), v);
    Ok(())
}

fn set_path(table: &mut Table, key: &str, v: Value) -> Result<(), CliError> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| CliError::config("empty key"))?;
    let mut cur = table;
    for p in parts {
        cur = match cur.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new())) {
            Value::Table(t) => t,
            _ => return Err(CliError::config(format!("`{p}` is not a table"))),
        };
    }
    cur.insert(last.to_string(), v);
    Ok(())
}

/// SHA-256 of the canonical JSON form of a resolved configuration.
pub fn config_hash<T: Serialize>(cfg: &T) -> String {
    let json = serde_json::to_string(cfg).expect("configurations serialize");
    hex::encode(Sha256::digest(json.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Default, PartialEq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields, default)]
    struct Inner {
        a: f64,
    }

    #[derive(Debug, Default, PartialEq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields, default)]
    struct Cfg {
        seed: u64,
        trials: usize,
        grid: Vec<f64>,
        inner: Inner,
    }

    #[test]
    fn layering() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "seed = 4\ngrid = [1.0, 2.0]\n[inner]\na = 0.5\n").unwrap();
        let ov = Overrides { seed: Some(9), trials: None, set: vec!["inner.a = 2".into()] };
        let c: Cfg = resolve(Some(&p), &ov).unwrap();
        assert_eq!(c, Cfg { seed: 9, trials: 0, grid: vec![1.0, 2.0], inner: Inner { a: 2.0 } });
    }

    #[test]
    fn unknown_keys_rejected() {
        let ov = Overrides { set: vec!["bogus=1".into()], ..Default::default() };
        assert!(matches!(resolve::<Cfg>(None, &ov), Err(CliError::Config(_))));
        let ov = Overrides { set: vec!["grid = \"x\"".into()], ..Default::default() };
        assert!(matches!(resolve::<Cfg>(None, &ov), Err(CliError::Config(_))));
    }

    #[test]
    fn hash_is_stable() {
        let a = config_hash(&Cfg::default());
        assert_eq!(a, config_hash(&Cfg::default()));
        assert_ne!(a, config_hash(&Cfg { seed: 1, ..Default::default() }));
        assert_eq!(a.len(), 64);
    }
}
