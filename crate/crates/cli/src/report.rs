//! Output plumbing shared by the subcommands: the one-line provenance
//! comment, file writing, and stable number formatting.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

pub const TOOL: &str = "sriplab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Run provenance carried at the top of every CSV file (as a `#` comment) and
/// inside every JSON/SVG output: tool version, canonical command line, master
/// seed. Deliberately free of timestamps and output paths, so repeated runs of
/// the same command produce byte-identical files.
#[derive(Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub master_seed: Option<u64>,
}

impl Provenance {
    pub fn new(command: String, master_seed: Option<u64>) -> Self {
        Provenance {
            tool: TOOL,
            version: VERSION,
            command,
            master_seed,
        }
    }

    pub fn text(&self) -> String {
        let seed = match self.master_seed {
            Some(s) => s.to_string(),
            None => "none".to_string(),
        };
        format!(
            "{} {} | command: {} | master_seed: {}",
            self.tool, self.version, self.command, seed
        )
    }

    pub fn comment_line(&self) -> String {
        format!("# {}", self.text())
    }
}

/// Shortest decimal that reparses to the same f64, so downstream consumers can
/// recompute statistics from CSV without rounding drift.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).context("serializing json")?;
    text.push('\n');
    write_text(path, &text)
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).context("serializing json")?;
    text.push('\n');
    Ok(text)
}
