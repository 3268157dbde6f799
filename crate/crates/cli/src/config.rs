//! Settings resolved from flags, `BIHARM_*` environment variables, a
//! `key = value` file and built-in defaults, in that order.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub const ENV_PREFIX: &str = "BIHARM_";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (table, json, csv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Table => "table",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub format: Format,
    pub seed: u64,
    /// Verification threshold.
    pub tau: f64,
    /// Absolute and relative quadrature tolerance.
    pub quad_tol: f64,
    pub sample_count: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            format: Format::Table,
            seed: 20240101,
            tau: 1e-6,
            quad_tol: 1e-10,
            sample_count: 50,
        }
    }
}

/// Values given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub tau: Option<f64>,
    pub quad_tol: Option<f64>,
    pub sample_count: Option<usize>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_file(text: &str) -> Result<HashMap<String, String>, String> {
    let mut out = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
        out.insert(k.trim().replace('-', "_").to_ascii_lowercase(), v.trim().to_string());
    }
    Ok(out)
}

fn pick<T: FromStr>(
    key: &str,
    flag: Option<T>,
    env: &dyn Fn(&str) -> Option<String>,
    file: &HashMap<String, String>,
    default: T,
) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    let var = format!("{ENV_PREFIX}{}", key.to_ascii_uppercase());
    if let Some(s) = env(&var) {
        return s.parse().map_err(|e| format!("{var}={s}: {e}"));
    }
    if let Some(s) = file.get(key) {
        return s.parse().map_err(|e| format!("config {key} = {s}: {e}"));
    }
    Ok(default)
}

impl Config {
    pub fn resolve(
        flags: &Overrides,
        env: &dyn Fn(&str) -> Option<String>,
        file: &HashMap<String, String>,
    ) -> Result<Config, String> {
        const KEYS: [&str; 5] = ["format", "seed", "tau", "quad_tol", "sample_count"];
        if let Some(k) = file.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(format!("unknown config key '{k}'"));
        }
        let d = Config::default();
        let cfg = Config {
            format: pick("format", flags.format, env, file, d.format)?,
            seed: pick("seed", flags.seed, env, file, d.seed)?,
            tau: pick("tau", flags.tau, env, file, d.tau)?,
            quad_tol: pick("quad_tol", flags.quad_tol, env, file, d.quad_tol)?,
            sample_count: pick("sample_count", flags.sample_count, env, file, d.sample_count)?,
        };
        if !(cfg.tau > 0.0 && cfg.quad_tol > 0.0) {
            return Err("tolerances must be positive".into());
        }
        if cfg.sample_count == 0 {
            return Err("sample_count must be positive".into());
        }
        Ok(cfg)
    }

    /// Resolution against the process environment and an optional file.
    pub fn load(flags: &Overrides, path: Option<&Path>) -> Result<Config, String> {
        let env = |k: &str| std::env::var(k).ok();
        let path = path
            .map(Path::to_path_buf)
            .or_else(|| env(&format!("{ENV_PREFIX}CONFIG")).map(Into::into));
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
                parse_file(&text)?
            }
            None => HashMap::new(),
        };
        Config::resolve(flags, &env, &file)
    }

    pub fn quadrature(&self) -> biharm::quadrature::QuadratureConfig {
        biharm::quadrature::QuadratureConfig {
            abs_tol: self.quad_tol,
            rel_tol: self.quad_tol,
            ..Default::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env_of(pairs: &'static [(&'static str, &'static str)]) -> impl Fn(&str) -> Option<String> {
        move |k| pairs.iter().find(|(n, _)| *n == k).map(|(_, v)| v.to_string())
    }

    #[test]
    fn precedence_flag_env_file_default() {
        let file = parse_file("tau = 1e-5\nseed=3 # comment\nformat = csv\n").unwrap();
        let env = env_of(&[("BIHARM_TAU", "1e-7"), ("BIHARM_FORMAT", "json")]);
        let flags = Overrides {
            format: Some(Format::Table),
            ..Default::default()
        };
        let c = Config::resolve(&flags, &env, &file).unwrap();
        assert_eq!(c.format, Format::Table);
        assert_eq!(c.tau, 1e-7);
        assert_eq!(c.seed, 3);
        assert_eq!(c.quad_tol, 1e-10);
        let none = |_: &str| None;
        assert_eq!(Config::resolve(&Overrides::default(), &none, &HashMap::new()).unwrap(), Config::default());
    }

    #[test]
    fn bad_values_are_rejected() {
        let none = |_: &str| None;
        assert!(parse_file("tau 3").is_err());
        assert!(Config::resolve(&Overrides::default(), &none, &parse_file("colour = red").unwrap()).is_err());
        assert!(Config::resolve(&Overrides::default(), &none, &parse_file("tau = -1").unwrap()).is_err());
        let env = env_of(&[("BIHARM_SEED", "x")]);
        assert!(Config::resolve(&Overrides::default(), &env, &HashMap::new()).is_err());
    }
}
