//! Artifact writers. Every file starts with the toolkit version and the
//! config digest; floats are written with 17 significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::error::ToolError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

/// `{:.16e}` for finite values, `NaN`/`inf`/`-inf` otherwise.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// Writes artifacts into one directory and remembers what it wrote.
pub struct Emitter {
    dir: PathBuf,
    digest: String,
    written: Vec<PathBuf>,
}

impl Emitter {
    pub fn new(dir: &Path, digest: String) -> Result<Self, ToolError> {
        fs::create_dir_all(dir).map_err(|e| ToolError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Emitter {
            dir: dir.to_path_buf(),
            digest,
            written: Vec::new(),
        })
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn into_written(self) -> Vec<PathBuf> {
        self.written
    }

    fn save(&mut self, name: &str, bytes: Vec<u8>) -> Result<(), ToolError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| ToolError::Io(format!("{}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<Cell>]) -> Result<(), ToolError> {
        let mut bytes = format!("# ndde {VERSION} config-sha256 {}\n", self.digest).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut bytes);
            w.write_record(header)?;
            for row in rows {
                w.write_record(row.iter().map(Cell::render))?;
            }
            w.flush()?;
        }
        self.save(name, bytes)
    }

    /// Writes `body` (an object) with `version` and `config_sha256` added.
    pub fn json(&mut self, name: &str, body: Value) -> Result<(), ToolError> {
        let mut map = match body {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("data".into(), other);
                m
            }
        };
        map.insert("version".into(), Value::from(VERSION));
        map.insert("config_sha256".into(), Value::from(self.digest.clone()));
        let mut text = serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values serialize");
        text.push('\n');
        self.save(name, text.into_bytes())
    }
}
