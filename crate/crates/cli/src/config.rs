//! Flag/config-file merging. Flags win; the config file fills whatever the
//! flags left unset; the resolved struct supplies the remaining defaults.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use std::path::Path;

pub fn load_config(path: Option<&Path>) -> Result<Map<String, Value>, String> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(format!("config {} must hold a JSON object", path.display())),
        Err(e) => Err(format!("config {} is not valid JSON: {e}", path.display())),
    }
}

/// Overlay the set flags on the config map and deserialise the result.
pub fn resolve<F: Serialize, R: DeserializeOwned>(
    flags: &F,
    seed: Option<u64>,
    config: &Map<String, Value>,
) -> Result<R, String> {
    let mut merged = config.clone();
    match serde_json::to_value(flags).map_err(|e| e.to_string())? {
        Value::Object(f) => {
            for (k, v) in f {
                if !v.is_null() {
                    merged.insert(k, v);
                }
            }
        }
        Value::Null => {}
        other => return Err(format!("unexpected flag encoding {other}")),
    }
    if let Some(s) = seed {
        merged.insert("seed".into(), Value::from(s));
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| format!("invalid configuration: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Serialize)]
    struct Flags {
        d: Option<usize>,
        points: Option<usize>,
    }

    #[derive(Deserialize, Debug, PartialEq)]
    #[serde(default, deny_unknown_fields)]
    struct Resolved {
        d: usize,
        points: usize,
        seed: u64,
    }

    impl Default for Resolved {
        fn default() -> Self {
            Resolved { d: 3, points: 10, seed: 0 }
        }
    }

    #[test]
    fn flags_override_config_and_defaults_fill_the_rest() {
        let cfg: Map<String, Value> = serde_json::from_str(r#"{"d": 5, "seed": 9}"#).unwrap();
        let r: Resolved = resolve(&Flags { d: Some(4), points: None }, None, &cfg).unwrap();
        assert_eq!(r, Resolved { d: 4, points: 10, seed: 9 });
        let r: Resolved = resolve(&Flags { d: None, points: None }, Some(1), &cfg).unwrap();
        assert_eq!(r, Resolved { d: 5, points: 10, seed: 1 });
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let cfg: Map<String, Value> = serde_json::from_str(r#"{"dd": 5}"#).unwrap();
        assert!(resolve::<_, Resolved>(&Flags { d: None, points: None }, None, &cfg).is_err());
    }
}
