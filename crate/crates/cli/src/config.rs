//! Plain-text `key = value` configuration with flag > file > default precedence.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        FileConfig::parse(&text)
    }

    pub fn parse(text: &str) -> Result<FileConfig, CliError> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Invalid(format!("config line {}: expected key = value", no + 1)));
            };
            let key = k.trim().replace('-', "_");
            if key.is_empty() {
                return Err(CliError::Invalid(format!("config line {}: empty key", no + 1)));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.values.keys()
    }
}

/// Resolves settings and records every resolved value for the artifacts.
pub struct Resolver {
    file: FileConfig,
    used: Vec<&'static str>,
    pub resolved: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(file: FileConfig) -> Resolver {
        Resolver {
            file,
            used: Vec::new(),
            resolved: BTreeMap::new(),
        }
    }

    pub fn get<T>(&mut self, key: &'static str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display + Clone,
        T::Err: Display,
    {
        self.used.push(key);
        let value = match flag {
            Some(v) => v,
            None => match self.file.values.get(key) {
                Some(s) => s
                    .parse()
                    .map_err(|e| CliError::Invalid(format!("config key {key}: {e}")))?,
                None => default,
            },
        };
        self.resolved.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// Rejects file keys that the command never asked for.
    pub fn finish(&self) -> Result<(), CliError> {
        for k in self.file.keys() {
            if !self.used.contains(&k.as_str()) {
                return Err(CliError::Invalid(format!("unknown config key {k}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let f = FileConfig::parse("beta = 0.25\n# comment\nn0=4\n").unwrap();
        let mut r = Resolver::new(f);
        assert_eq!(r.get("beta", Some(0.5), 0.75).unwrap(), 0.5);
        assert_eq!(r.get("n0", None, 3usize).unwrap(), 4);
        assert_eq!(r.get("seed", None, 7u64).unwrap(), 7);
        r.finish().unwrap();
    }

    #[test]
    fn rejects_garbage() {
        assert!(FileConfig::parse("novalue\n").is_err());
        let f = FileConfig::parse("bogus = 1").unwrap();
        let r = Resolver::new(f);
        assert!(r.finish().is_err());
    }
}
