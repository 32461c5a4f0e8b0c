use std::fs;
use std::path::{Path, PathBuf};

use chirosat::ProblemMode;
use serde::Deserialize;

use crate::error::CliError;

/// Job file. Every key is optional; command-line flags take precedence.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub d: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub mode: Option<ProblemMode>,
    pub m: Option<usize>,
    pub symmetry_breaking: Option<bool>,
    /// `"a..b"` (inclusive) for `bound` and `pipeline`.
    pub range: Option<String>,
    pub solver: Option<PathBuf>,
    #[serde(default)]
    pub solver_args: Vec<String>,
    pub checker: Option<PathBuf>,
    #[serde(default)]
    pub checker_args: Vec<String>,
    pub verify: Option<bool>,
    pub out_dir: Option<PathBuf>,
    /// Wall-clock seconds per instance.
    pub timeout: Option<f64>,
    pub keep_proofs: Option<bool>,
    pub keep_cnf: Option<bool>,
    pub jobs: Option<usize>,
    pub stop_early: Option<bool>,
    /// Point file for `frompoints`.
    pub points_file: Option<PathBuf>,
    /// Inline points for `frompoints`, one integer list per point.
    pub points: Option<Vec<Vec<i64>>>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<JobConfig, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn load_opt(path: Option<&Path>) -> Result<JobConfig, CliError> {
        path.map(JobConfig::load).transpose().map(Option::unwrap_or_default)
    }
}

/// Parses `a..b` or `a..=b` (both inclusive) or a single `a`.
pub fn parse_range(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Config(format!("bad range {s:?}; expected a..b"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let a = num(s)?;
            (a, a)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..5").unwrap(), vec![4, 5]);
        assert_eq!(parse_range("9..=11").unwrap(), vec![9, 10, 11]);
        assert_eq!(parse_range("7").unwrap(), vec![7]);
        assert!(parse_range("5..4").is_err());
        assert!(parse_range("x..4").is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = toml::from_str::<JobConfig>("d = 2\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"));
        let ok: JobConfig = toml::from_str("d = 2\nmode = \"hull_frame_hole\"\npoints = [[0, 1], [2, 3]]\n").unwrap();
        assert_eq!(ok.mode, Some(ProblemMode::HullFrameHole));
        assert_eq!(ok.points.unwrap().len(), 2);
    }
}
