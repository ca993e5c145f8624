//! Run manifests: flat `key=value` text, keys sorted.
//!
//! Apart from `command` and `version`, every key is the long name of a flag
//! and every value its resolved setting, so a manifest replays as a command
//! line.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const VERSION: &str = concat!("tsstyle ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    entries: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert("command".to_string(), command.to_string());
        entries.insert("version".to_string(), VERSION.to_string());
        Self { entries }
    }

    pub fn set(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.entries.insert(key.to_string(), value.to_string());
        self
    }

    /// Records `None` as an empty value.
    pub fn set_opt<T: Display>(&mut self, key: &str, value: Option<T>) -> &mut Self {
        let v = value.map(|v| v.to_string()).unwrap_or_default();
        self.entries.insert(key.to_string(), v);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn command(&self) -> &str {
        self.get("command").unwrap_or_default()
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                row: i + 1,
                message: format!("expected key=value, got {line:?}"),
            })?;
            entries.insert(k.trim().to_string(), v.to_string());
        }
        if !entries.contains_key("command") {
            return Err(Error::Parse {
                row: 1,
                message: "manifest has no command".into(),
            });
        }
        Ok(Self { entries })
    }

    pub fn read(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::FileNotFound(path.to_path_buf()));
        }
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render())?;
        Ok(())
    }

    /// Command line equivalent to this manifest, without the program name.
    /// Empty values are left out.
    pub fn to_args(&self) -> Vec<String> {
        let mut args: Vec<String> = self.command().split_whitespace().map(str::to_string).collect();
        for (k, v) in &self.entries {
            if k == "command" || k == "version" || v.is_empty() {
                continue;
            }
            args.push(format!("--{k}"));
            args.push(v.clone());
        }
        args
    }
}

/// `out/data.csv` -> `out/data.manifest`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    output.with_file_name(format!("{stem}.manifest"))
}
