//! Table rendering shared by every command.
//!
//! CSV is the reference format; JSON carries the same columns as object keys
//! (`{"rows": [...], "notes": [...]}`) and plain text aligns them for reading.
//! Integers of any size are written in full decimal.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    /// A JSON-safe numeric literal (integer or decimal).
    Number(String),
    Text(String),
    Empty,
}

impl Cell {
    pub fn int(v: impl ToString) -> Self {
        Cell::Number(v.to_string())
    }

    pub fn text(v: impl ToString) -> Self {
        Cell::Text(v.to_string())
    }

    fn raw(&self) -> &str {
        match self {
            Cell::Number(s) | Cell::Text(s) => s,
            Cell::Empty => "",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Keeps the first `limit` rows, noting the cut if anything was dropped.
    pub fn limit(&mut self, limit: Option<u64>) {
        let Some(limit) = limit else { return };
        if self.rows.len() as u64 > limit {
            self.rows.truncate(limit as usize);
            self.notes
                .insert(0, format!("truncated after {limit} items"));
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
            Format::Plain => self.plain(),
        }
    }

    fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| csv_field(c.raw())).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        for note in &self.notes {
            let _ = writeln!(out, "# {note}");
        }
        out
    }

    fn json(&self) -> String {
        let quote = |s: &str| serde_json::to_string(s).expect("strings serialize");
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                let fields: Vec<String> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(col, cell)| {
                        let value = match cell {
                            Cell::Number(s) => s.clone(),
                            Cell::Text(s) => quote(s),
                            Cell::Empty => "null".to_string(),
                        };
                        format!("{}:{}", quote(col), value)
                    })
                    .collect();
                format!("{{{}}}", fields.join(","))
            })
            .collect();
        let notes: Vec<String> = self.notes.iter().map(|n| quote(n)).collect();
        format!(
            "{{\"rows\":[{}],\"notes\":[{}]}}\n",
            rows.join(","),
            notes.join(",")
        )
    }

    fn plain(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.raw().len());
            }
        }
        let mut out = String::new();
        let line = |cells: Vec<&str>| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        out.push_str(&line(self.columns.clone()));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row.iter().map(Cell::raw).collect()));
            out.push('\n');
        }
        for note in &self.notes {
            let _ = writeln!(out, "{note}");
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
