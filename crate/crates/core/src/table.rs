//! Labeled sample tables and their CSV form.
//!
//! CSV layout: optional `#`-prefixed comment lines, one header row, then one
//! row per sample. Missing samples are empty fields, numbers use Rust's
//! shortest round-trip formatting, lines end in LF.

use std::io::{self, Read, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("row has {got} cells, table has {expected} columns")]
    RowLength { expected: usize, got: usize },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("cell `{0}` is not a number")]
    BadCell(String),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeriesTable {
    comments: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

impl SeriesTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        SeriesTable {
            comments: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_comment(&mut self, comment: impl Into<String>) {
        self.comments.push(comment.into());
    }

    pub fn push_row(&mut self, row: Vec<Option<f64>>) -> Result<(), TableError> {
        if row.len() != self.columns.len() {
            return Err(TableError::RowLength { expected: self.columns.len(), got: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Option<f64>>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of the named column, `None` if no such column.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let index = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|row| row[index]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), TableError> {
        for comment in &self.comments {
            writeln!(out, "# {comment}")?;
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(|cell| cell.map(|v| v.to_string()).unwrap_or_default()))?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buffer = Vec::new();
        self.write_csv(&mut buffer).expect("writing to a Vec cannot fail");
        String::from_utf8(buffer).expect("csv output is UTF-8")
    }

    pub fn read_csv<R: Read>(mut input: R) -> Result<Self, TableError> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        let mut comments = Vec::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            match line.strip_prefix('#') {
                Some(comment) => {
                    comments.push(comment.trim_start_matches(' ').trim_end_matches(['\r', '\n']).to_string());
                    body_start += line.len();
                }
                None => break,
            }
        }
        let mut reader = csv::ReaderBuilder::new().from_reader(&text.as_bytes()[body_start..]);
        let columns: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        let mut table = SeriesTable { comments, columns, rows: Vec::new() };
        for record in reader.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse().map(Some).map_err(|_| TableError::BadCell(cell.to_string()))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.push_row(row)?;
        }
        Ok(table)
    }
}
