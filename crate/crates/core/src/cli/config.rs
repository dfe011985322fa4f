//! Declarative TOML configuration.
//!
//! ```toml
//! [fringe]
//! preset = "fig3"
//! points = 601
//!
//! [validate]
//! r = [0.1, 0.3, 0.8]
//! cutoff = 32
//! ```
//!
//! Keys match the long flag names.

use std::path::Path;

use serde::Deserialize;

use super::{CliError, FringeOptions, MomentsOptions, Result, ValidateOptions, VisibilityOptions};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub fringe: Option<FringeOptions>,
    pub visibility: Option<VisibilityOptions>,
    pub validate: Option<ValidateOptions>,
    pub moments: Option<MomentsOptions>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        Self::parse(&text).map_err(|message| CliError::Config {
            path: path.to_owned(),
            message,
        })
    }

    pub fn load_opt(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fringe::{FringePreset, Method, ScanVariable, StateKind};

    #[test]
    fn parses_every_table() {
        let cfg = ConfigFile::parse(
            r#"
            [fringe]
            preset = "fig3"
            state = "coherent-paper"
            scan = "deltaT"
            lo = -1.5
            method = "numeric"

            [visibility]
            r-hi = 1.0

            [validate]
            r = [0.3]
            cutoff = 28

            [moments]
            r = 0.8
            "#,
        )
        .unwrap();
        let fringe = cfg.fringe.unwrap();
        assert_eq!(fringe.preset, Some(FringePreset::Fig3));
        assert_eq!(fringe.state, Some(StateKind::CoherentPaper));
        assert_eq!(fringe.scan, Some(ScanVariable::DeltaT));
        assert_eq!(fringe.method, Some(Method::Numeric));
        assert_eq!(fringe.lo, Some(-1.5));
        assert_eq!(cfg.visibility.unwrap().r_hi, Some(1.0));
        assert_eq!(cfg.validate.unwrap().cutoff, Some(28));
        assert_eq!(cfg.moments.unwrap().r, Some(0.8));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ConfigFile::parse("[fringe]\nbogus = 1\n").is_err());
        assert!(ConfigFile::parse("[nonsense]\n").is_err());
    }

    #[test]
    fn missing_file_is_config_error() {
        let err = ConfigFile::load(Path::new("/nonexistent/cfg.toml")).unwrap_err();
        assert!(matches!(err, CliError::Config { .. }));
    }
}
