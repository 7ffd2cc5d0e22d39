//! Artifact files: CSV with a `#` header block, JSON mirrors, the run
//! manifest and the raw sample dump.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use pumprecoil_core::{Complex64, RecoilShiftSample};
use serde::Serialize;
use serde_json::{json, Value};

/// Ordered `key: value` pairs written before the column header.
pub type Meta = Vec<(String, String)>;

pub fn meta(pairs: &[(&str, String)]) -> Meta {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// A plot-ready table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Meta,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(meta: Meta, columns: &[&str]) -> Self {
        Table { meta, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}: {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|x| format!("{x}")).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    /// Non-finite cells become `null`.
    pub fn to_json(&self) -> Value {
        let meta: serde_json::Map<String, Value> =
            self.meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        json!({ "meta": meta, "columns": self.columns, "rows": self.rows })
    }
}

/// Output directory that remembers what it wrote.
#[derive(Debug)]
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> io::Result<Self> {
        fs::create_dir_all(root)?;
        Ok(OutDir { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        fs::write(self.path(name), bytes)?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// `<stem>.csv` plus its `<stem>.json` mirror.
    pub fn write_table(&mut self, stem: &str, table: &Table) -> io::Result<()> {
        self.write_bytes(&format!("{stem}.csv"), table.to_csv().as_bytes())?;
        self.write_json(&format!("{stem}.json"), &table.to_json())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    pub fn write_raw(&mut self, name: &str, samples: &[RecoilShiftSample]) -> io::Result<()> {
        let f = fs::File::create(self.path(name))?;
        let mut w = BufWriter::new(f);
        write_raw(&mut w, samples)?;
        w.flush()?;
        self.written.push(name.to_string());
        Ok(())
    }
}

/// Written by every command, also when it fails.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub workers: Option<usize>,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config: BTreeMap::new(),
            seed: None,
            samples: None,
            workers: None,
            wall_time_s: 0.0,
            outputs: Vec::new(),
            status: "ok",
            notes: Vec::new(),
            error: None,
        }
    }
}

/// File magic of the raw dump; the trailing digits are the format version.
pub const RAW_MAGIC: &[u8; 8] = b"PRSHIFT1";

/// Little-endian: magic, `u64` count, then per sample `Re α`, `Im α` (f64),
/// emission count (u64) and final emission time (f64).
pub fn write_raw<W: Write>(w: &mut W, samples: &[RecoilShiftSample]) -> io::Result<()> {
    w.write_all(RAW_MAGIC)?;
    w.write_all(&(samples.len() as u64).to_le_bytes())?;
    for s in samples {
        w.write_all(&s.alpha.re.to_le_bytes())?;
        w.write_all(&s.alpha.im.to_le_bytes())?;
        w.write_all(&s.n_emissions.to_le_bytes())?;
        w.write_all(&s.t_final.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_raw<R: Read>(r: &mut R) -> io::Result<Vec<RecoilShiftSample>> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != RAW_MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "not a raw recoil-shift dump (bad magic)"));
    }
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    let n = u64::from_le_bytes(b);
    let mut out = Vec::with_capacity(n.min(1 << 24) as usize);
    for _ in 0..n {
        let mut rec = [0u8; 32];
        r.read_exact(&mut rec)?;
        let f = |i: usize| f64::from_le_bytes(rec[i..i + 8].try_into().expect("8 bytes"));
        out.push(RecoilShiftSample {
            alpha: Complex64::new(f(0), f(8)),
            n_emissions: u64::from_le_bytes(rec[16..24].try_into().expect("8 bytes")),
            t_final: f(24),
        });
    }
    Ok(out)
}
