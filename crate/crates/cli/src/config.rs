use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use gvdc::bounds::PaperConstants;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Flat config document. Top-level keys mirror the command-line flags;
/// `[constants]` overrides any `PaperConstants` field. Flags win.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub m: Option<u32>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub mode: Option<String>,
    pub effort: Option<usize>,
    pub exhaustive: Option<bool>,
    pub max_trials: Option<u64>,
    pub w: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, toml::Value>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn load_opt(path: Option<&Path>) -> CliResult<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    /// Constant overrides as strings, config first, then `key=value` flags.
    pub fn constant_overrides(&self, flags: &[String]) -> CliResult<BTreeMap<String, String>> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.constants {
            let s = match v {
                toml::Value::String(s) => s.clone(),
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                other => return Err(CliError::Usage(format!("constant {k}: unsupported value {other}"))),
            };
            out.insert(k.clone(), s);
        }
        for f in flags {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got {f:?}")))?;
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(out)
    }
}

pub fn constants_with(overrides: &BTreeMap<String, String>) -> CliResult<PaperConstants> {
    let mut c = PaperConstants::default();
    for (k, v) in overrides {
        c.set(k, v)?;
    }
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_rejects_unknown_keys() {
        let c = ExperimentConfig::parse("p = 13\nexhaustive = true\n[constants]\nb = 0.2\nkappa = \"7/100\"\n").unwrap();
        assert_eq!(c.p, Some(13));
        let o = c.constant_overrides(&["t=15".into()]).unwrap();
        assert_eq!(o["b"], "0.2");
        assert_eq!(o["kappa"], "7/100");
        assert_eq!(o["t"], "15");
        assert!(ExperimentConfig::parse("trails = 3").is_err());
        assert!(ExperimentConfig::parse("[output]\npath = \"x\"").is_err());
    }

    #[test]
    fn unknown_constant_rejected() {
        let o = BTreeMap::from([("zeta".to_string(), "1".to_string())]);
        assert!(constants_with(&o).is_err());
        let o = BTreeMap::from([("b".to_string(), "0.2".to_string())]);
        assert_eq!(constants_with(&o).unwrap().b.to_string(), "0.2");
    }
}
