//! Config assembly: defaults, then a key=value file, then command-line flags.

use std::fs;
use std::path::Path;

use clap::{Args, ValueEnum};
use mixed3::config::Config;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Flags shared by every subcommand; each mirrors a `Config` field.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Quaternionic dimension parameter (ambient dimension 4n+3).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Sample points per example and check.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Sample points for the axiom sweeps.
    #[arg(long, global = true)]
    pub axiom_points: Option<usize>,
    #[arg(long, global = true)]
    pub fd_step1: Option<f64>,
    #[arg(long, global = true)]
    pub fd_step2: Option<f64>,
    #[arg(long, global = true)]
    pub tol_alg: Option<f64>,
    #[arg(long, global = true)]
    pub tol_d1: Option<f64>,
    #[arg(long, global = true)]
    pub tol_d2: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Halve every tolerance tier.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// key=value file; flags take precedence over it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<std::path::PathBuf>,
}

pub struct Settings {
    pub config: Config,
    pub format: Format,
}

impl Overrides {
    pub fn resolve(&self) -> Result<Settings, CliError> {
        let mut cfg = Config::default();
        let mut format = Format::Text;
        if let Some(path) = &self.config {
            apply_file(path, &mut cfg, &mut format)?;
        }
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        set!(n, seed, points, axiom_points, fd_step1, fd_step2, tol_alg, tol_d1, tol_d2);
        if self.strict {
            cfg.strict = true;
        }
        if self.sequential {
            cfg.parallel = false;
        }
        if let Some(f) = self.format {
            format = f;
        }
        cfg.validate()?;
        Ok(Settings { config: cfg, format })
    }
}

fn apply_file(path: &Path, cfg: &mut Config, format: &mut Format) -> Result<(), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| CliError::Usage(format!("{}:{}: {msg}", path.display(), lineno + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let num = |what: &str| bad(&format!("invalid {what} value `{value}` for {key}"));
        match key.as_str() {
            "n" => cfg.n = value.parse().map_err(|_| num("integer"))?,
            "seed" => cfg.seed = value.parse().map_err(|_| num("integer"))?,
            "points" => cfg.points = value.parse().map_err(|_| num("integer"))?,
            "axiom_points" => cfg.axiom_points = value.parse().map_err(|_| num("integer"))?,
            "fd_step1" => cfg.fd_step1 = value.parse().map_err(|_| num("float"))?,
            "fd_step2" => cfg.fd_step2 = value.parse().map_err(|_| num("float"))?,
            "tol_alg" => cfg.tol_alg = value.parse().map_err(|_| num("float"))?,
            "tol_d1" => cfg.tol_d1 = value.parse().map_err(|_| num("float"))?,
            "tol_d2" => cfg.tol_d2 = value.parse().map_err(|_| num("float"))?,
            "strict" => cfg.strict = value.parse().map_err(|_| num("bool"))?,
            "parallel" => cfg.parallel = value.parse().map_err(|_| num("bool"))?,
            "format" => *format = Format::from_str(value, true).map_err(|_| num("format"))?,
            _ => return Err(bad(&format!("unknown key `{key}`"))),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(name: &str, body: &str) -> std::path::PathBuf {
        let p = std::env::temp_dir().join(format!("mixed3-{}-{name}", std::process::id()));
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let p = write_tmp("prec.cfg", "seed = 7\npoints=3 # comment\ntol-d2 = 1e-3\nformat = json\n");
        let o = Overrides { config: Some(p.clone()), seed: Some(9), ..Default::default() };
        let s = o.resolve().unwrap();
        assert_eq!(s.config.seed, 9);
        assert_eq!(s.config.points, 3);
        assert_eq!(s.config.tol_d2, 1e-3);
        assert_eq!(s.config.tol_d1, 1e-6);
        assert_eq!(s.format, Format::Json);
        fs::remove_file(p).ok();
    }

    #[test]
    fn unknown_key_rejected() {
        let p = write_tmp("bad.cfg", "colour = blue\n");
        let o = Overrides { config: Some(p.clone()), ..Default::default() };
        assert!(matches!(o.resolve(), Err(CliError::Usage(_))));
        fs::remove_file(p).ok();
    }

    #[test]
    fn invalid_ordering_rejected() {
        let o = Overrides { tol_alg: Some(1.0), ..Default::default() };
        assert!(o.resolve().is_err());
    }
}
