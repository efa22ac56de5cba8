use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::Serialize;

use crate::error::CliError;

/// Writes result files into one directory, stamping each with the master
/// seed and the config hash.
///
/// CSV files open with two `#` comment lines (`# seed: …`,
/// `# config_sha256: …`) followed by the header row. JSON files carry
/// `seed` and `config_hash` as top-level keys.
pub struct Output {
    dir: PathBuf,
    seed: u64,
    hash: String,
    files: Vec<String>,
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    seed: u64,
    config_hash: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Shortest representation that round-trips; empty for missing values.
pub fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Output {
    pub fn create(dir: &Path, seed: u64, hash: &str) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), seed, hash: hash.to_string(), files: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    fn write(&mut self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn csv(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut buf = format!("# seed: {}\n# config_sha256: {}\n", self.seed, self.hash).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let io = |e: csv::Error| CliError::io(name, std::io::Error::other(e));
            w.write_record(header).map_err(io)?;
            for row in rows {
                w.write_record(row).map_err(io)?;
            }
            w.flush().map_err(|e| CliError::io(name, e))?;
        }
        self.write(name, &buf)
    }

    /// Time column followed by one column `r<d>` per distance; `values` is
    /// (distance × time).
    pub fn series_csv(&mut self, name: &str, times: &[f64], distances: &[i64], values: &Array2<f64>) -> Result<(), CliError> {
        let header: Vec<String> =
            std::iter::once("time".to_string()).chain(distances.iter().map(|d| format!("r{d}"))).collect();
        let rows: Vec<Vec<String>> = times
            .iter()
            .enumerate()
            .map(|(k, &t)| std::iter::once(cell(Some(t))).chain(values.column(k).iter().map(|&v| cell(Some(v)))).collect())
            .collect();
        self.csv(name, &header, &rows)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, body: &T) -> Result<(), CliError> {
        let stamped = Stamped { seed: self.seed, config_hash: &self.hash, body };
        let mut text = serde_json::to_string_pretty(&stamped).map_err(|e| CliError::io(name, e.into()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        self.write(name, contents.as_bytes())
    }
}
