//! Settings resolution: command-line flags, then the TOML file named by
//! `ANHARMONIA_CONFIG`, then built-in defaults.

use std::path::Path;

use serde::Deserialize;

use anharmonia::suite::SuiteOptions;

pub const CONFIG_ENV: &str = "ANHARMONIA_CONFIG";

/// Keys accepted in the config file; all optional.
#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub cases: Option<usize>,
    pub order: Option<u32>,
    pub tol: Option<f64>,
    pub steps: Option<usize>,
    pub json: Option<bool>,
    pub timing: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    pub fn from_env() -> Result<Self, String> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}

/// Flag values as parsed; `None` means "not given".
#[derive(Debug, Default, Clone)]
pub struct FlagValues {
    pub seed: Option<u64>,
    pub cases: Option<usize>,
    pub order: Option<u32>,
    pub tol: Option<f64>,
    pub steps: Option<usize>,
    pub json: bool,
    pub timing: bool,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub suite: SuiteOptions,
    pub json: bool,
}

pub fn resolve(flags: &FlagValues, file: &FileConfig) -> Settings {
    let d = SuiteOptions::default();
    let suite = SuiteOptions {
        seed: flags.seed.or(file.seed).unwrap_or(d.seed),
        cases: flags.cases.or(file.cases).unwrap_or(d.cases),
        order: flags.order.or(file.order).or(d.order),
        tol: flags.tol.or(file.tol).or(d.tol),
        steps: flags.steps.or(file.steps).unwrap_or(d.steps),
        timing: flags.timing || file.timing.unwrap_or(d.timing),
        explore: d.explore,
    };
    Settings { suite, json: flags.json || file.json.unwrap_or(false) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file: FileConfig = toml::from_str("seed = 7\ncases = 5\norder = 40").unwrap();
        let flags = FlagValues { seed: Some(3), ..FlagValues::default() };
        let s = resolve(&flags, &file);
        assert_eq!(s.suite.seed, 3);
        assert_eq!(s.suite.cases, 5);
        assert_eq!(s.suite.order, Some(40));
        assert_eq!(s.suite.steps, SuiteOptions::default().steps);
        assert!(!s.json);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<FileConfig>("sead = 1").is_err());
    }
}
