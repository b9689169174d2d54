use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;

use crate::args::{Format, Global};

/// What a command produced: a report, and possibly an artifact for `--out`.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
    pub artifact: Option<String>,
    /// The command ran but its check failed; exit with status 1.
    pub failed: bool,
}

impl Output {
    pub fn new(text: String, json: Value) -> Self {
        Self { text, json, csv: None, artifact: None, failed: false }
    }

    pub fn artifact(mut self, contents: String) -> Self {
        self.artifact = Some(contents);
        self
    }

    pub fn failed(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn emit(global: &Global, out: &Output) -> Result<()> {
    if let Some(path) = &global.out {
        let contents = match &out.artifact {
            Some(a) => a.clone(),
            None => serde_json::to_string_pretty(&out.json)? + "\n",
        };
        write_atomic(path, &contents)?;
    }
    let text = match global.format {
        Format::Text => out.text.clone(),
        Format::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        Format::Csv => match &out.csv {
            Some(c) => c.clone(),
            None => bail!("--format csv is only available for region tables"),
        },
    };
    print!("{text}");
    Ok(())
}
