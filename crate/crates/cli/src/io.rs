//! File output, config hashing, and run metadata.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// FNV-1a over the canonical JSON of a resolved config. Stable across runs
/// of the same build, embedded in every output file.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in canonical.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// `git describe` of the working tree, for provenance; "unknown" when git or
/// the repository is unavailable.
pub fn git_describe() -> String {
    std::process::Command::new("git")
        .args(["describe", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .unwrap_or_else(|| "unknown".to_string())
}

/// Seconds since the Unix epoch; lives only in metadata sidecars so that
/// data files stay byte-identical across reruns.
pub fn timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub struct OutDir {
    path: Option<PathBuf>,
}

impl OutDir {
    pub fn new(path: Option<PathBuf>) -> Result<Self> {
        if let Some(p) = &path {
            fs::create_dir_all(p).with_context(|| format!("creating {}", p.display()))?;
        }
        Ok(Self { path })
    }

    pub fn file(&self, name: &str) -> Option<PathBuf> {
        self.path.as_ref().map(|p| p.join(name))
    }

    pub fn write_text(&self, name: &str, content: &str) -> Result<()> {
        if let Some(path) = self.file(name) {
            let mut f =
                fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            f.write_all(content.as_bytes())?;
        }
        Ok(())
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        if let Some(path) = self.file(name) {
            let text = serde_json::to_string_pretty(value)?;
            fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

/// CSV with a `# config_hash=... seed=...` comment line before the header.
pub struct CsvBuilder {
    buf: String,
}

impl CsvBuilder {
    pub fn new(config_hash: &str, seed: Option<u64>, header: &str) -> Self {
        let mut buf = String::new();
        match seed {
            Some(s) => buf.push_str(&format!("# config_hash={config_hash} seed={s}\n")),
            None => buf.push_str(&format!("# config_hash={config_hash}\n")),
        }
        buf.push_str(header);
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, fields: std::fmt::Arguments<'_>) {
        use std::fmt::Write as _;
        let _ = writeln!(self.buf, "{fields}");
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Reads a CSV-ish file: skips `#` comments and a header line whose first
/// field is not numeric; splits remaining lines on commas.
pub fn read_numeric_csv(path: &Path, fields: usize) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(|s| s.trim()).collect();
        if parts.len() != fields {
            anyhow::bail!(
                "{}:{}: expected {} fields, found {}",
                path.display(),
                lineno + 1,
                fields,
                parts.len()
            );
        }
        match parts
            .iter()
            .map(|p| p.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
        {
            Ok(nums) => rows.push(nums),
            Err(_) if rows.is_empty() => continue, // header line
            Err(e) => anyhow::bail!("{}:{}: {}", path.display(), lineno + 1, e),
        }
    }
    Ok(rows)
}
