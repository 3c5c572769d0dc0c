use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Defaults read from a `key = value` file. Lines starting with `#` are comments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    pub e_max: Option<u32>,
    pub k_max: Option<u32>,
    pub output_dir: Option<PathBuf>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|err| Error::InvalidArgument(format!("cannot read config {}: {err}", path.display())))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let number = || {
                value
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("config line {}: {key} needs an integer", lineno + 1)))
            };
            match key {
                "e_max" => cfg.e_max = Some(number()?),
                "k_max" => cfg.k_max = Some(number()?),
                "output_dir" => cfg.output_dir = Some(PathBuf::from(value)),
                other => return Err(Error::Parse(format!("config line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        Ok(cfg)
    }

    /// Places relative output paths under `output_dir`.
    pub fn output_path(&self, path: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys() {
        let cfg = Config::parse("# defaults\ne_max = 12\nk_max=3\noutput_dir = out\n").unwrap();
        assert_eq!(cfg.e_max, Some(12));
        assert_eq!(cfg.k_max, Some(3));
        assert_eq!(cfg.output_path(Path::new("a.csv")), PathBuf::from("out/a.csv"));
        assert_eq!(cfg.output_path(Path::new("/tmp/a.csv")), PathBuf::from("/tmp/a.csv"));
    }

    #[test]
    fn rejects_garbage() {
        assert!(Config::parse("e_max 12").is_err());
        assert!(Config::parse("colour = blue").is_err());
        assert!(Config::parse("e_max = many").is_err());
    }
}
