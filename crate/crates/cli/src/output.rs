//! File emission shared by the subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};

/// Write `contents` to `dir/name`, creating `dir` if needed.
pub fn write_in(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Metadata sidecar: the command, its settings and the tool version.
pub fn meta(command: &str, settings: Value) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "settings": settings,
    })
}

pub fn write_json(dir: &Path, name: &str, value: &Value) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_in(dir, name, &text)
}
