//! Labeled corpora on disk: JSONL (one record per line) or CSV with a header.
//!
//! Both formats carry the fields `id`, `text`, `label` (`relevant` or
//! `not_relevant`) and `split` (`training` or `validation`). File order is
//! preserved.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use predcode_core::corpus::{Corpus, Document, Label, Split};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
}

impl Format {
    /// `.csv` means CSV; anything else is read as JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Jsonl,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "jsonl" | "json" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown dataset format `{other}` (expected jsonl or csv)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}, line {line}: malformed record: {message}")]
    Malformed { path: PathBuf, line: u64, message: String },
    #[error("{path}, line {line}: field `{field}`: {message}")]
    Field {
        path: PathBuf,
        line: u64,
        field: &'static str,
        message: String,
    },
    #[error("{path}: {source}")]
    Corpus {
        path: PathBuf,
        #[source]
        source: predcode_core::Error,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    id: String,
    text: String,
    label: String,
    split: String,
}

fn to_document(path: &Path, line: u64, r: Record) -> Result<Document, DatasetError> {
    let field = |field, e: predcode_core::Error| DatasetError::Field {
        path: path.to_path_buf(),
        line,
        field,
        message: e.to_string(),
    };
    let label = Label::from_str(&r.label).map_err(|e| field("label", e))?;
    let split = Split::from_str(&r.split).map_err(|e| field("split", e))?;
    if r.id.is_empty() {
        return Err(field("id", predcode_core::Error::EmptyId));
    }
    Ok(Document::new(r.id, r.text, label, split))
}

/// Loads a corpus, choosing the format from the extension unless given.
/// The corpus is named after the file stem.
pub fn load_dataset(path: &Path, format: Option<Format>) -> Result<Corpus, DatasetError> {
    let io = |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io)?;
    let docs = match format.unwrap_or_else(|| Format::from_path(path)) {
        Format::Jsonl => read_jsonl(path, BufReader::new(file))?,
        Format::Csv => read_csv(path, file)?,
    };
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Corpus::new(name, docs).map_err(|source| DatasetError::Corpus {
        path: path.to_path_buf(),
        source,
    })
}

fn read_jsonl(path: &Path, reader: impl BufRead) -> Result<Vec<Document>, DatasetError> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(|source| DatasetError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line).map_err(|e| DatasetError::Malformed {
            path: path.to_path_buf(),
            line: line_no,
            message: e.to_string(),
        })?;
        docs.push(to_document(path, line_no, record)?);
    }
    Ok(docs)
}

fn read_csv(path: &Path, file: File) -> Result<Vec<Document>, DatasetError> {
    let mut reader = csv::Reader::from_reader(file);
    let mut docs = Vec::new();
    let headers = reader.headers().cloned().map_err(|e| DatasetError::Malformed {
        path: path.to_path_buf(),
        line: 1,
        message: e.to_string(),
    })?;
    for result in reader.records() {
        let malformed = |e: csv::Error| DatasetError::Malformed {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        };
        let row = result.map_err(malformed)?;
        let line = row.position().map_or(0, |p| p.line());
        let record: Record = row.deserialize(Some(&headers)).map_err(malformed)?;
        docs.push(to_document(path, line, record)?);
    }
    Ok(docs)
}

/// Writes a corpus in the given format.
pub fn write_dataset(corpus: &Corpus, path: &Path, format: Format) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let records = corpus.documents().iter().map(|d| Record {
        id: d.id.clone(),
        text: d.text.clone(),
        label: d.label.as_str().to_owned(),
        split: d.split.as_str().to_owned(),
    });
    match format {
        Format::Jsonl => {
            for r in records {
                serde_json::to_writer(&mut out, &r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    out.flush()
}
