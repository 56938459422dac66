//! JSONL persistence for search records: one record per line.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::SearchRecord;
use crate::error::{Error, Result};

/// Append records, creating the file if needed.
pub fn append_records(path: &Path, records: &[SearchRecord]) -> Result<()> {
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    write_lines(file, records)
}

/// Replace the file with exactly these records.
pub fn write_records(path: &Path, records: &[SearchRecord]) -> Result<()> {
    write_lines(File::create(path)?, records)
}

fn write_lines(file: File, records: &[SearchRecord]) -> Result<()> {
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Read and validate every record. Blank lines are skipped.
pub fn read_records(path: &Path) -> Result<Vec<SearchRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SearchRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Input(format!("{}:{}: {e}", path.display(), n + 1)))?;
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}

pub fn find_record(path: &Path, id: &str) -> Result<SearchRecord> {
    read_records(path)?
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::Input(format!("no record {id} in {}", path.display())))
}
