use std::fmt::Display;
use std::process::ExitCode;

use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub enum Format {
    Json,
    Table,
}

/// A rendered report: JSON with a leading `schema` field, and a table.
pub struct Report {
    json: String,
    table: String,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

impl Report {
    pub fn new<T: Serialize>(schema: &str, body: &T, table: String) -> Self {
        let json = serde_json::to_string_pretty(&Envelope { schema, body }).expect("report serializes");
        Report { json, table }
    }

    pub fn render(self, format: Format) -> String {
        match format {
            Format::Json => self.json,
            Format::Table => self.table.trim_end().to_string(),
        }
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![line(header.iter().map(|h| h.to_string()).collect())];
    out.extend(rows.iter().map(|r| line(r.clone())));
    out.join("\n")
}

pub fn key_values(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs
        .iter()
        .map(|(k, v)| format!("{k:<width$}  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn opt<T: Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

#[derive(Debug)]
pub struct CliError {
    code: &'static str,
    message: String,
    exit: u8,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: &'a str,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

impl CliError {
    /// Precondition violation inside a computation.
    pub fn domain(code: &'static str, message: impl Display) -> Self {
        CliError {
            code,
            message: message.to_string(),
            exit: 1,
        }
    }

    pub fn io(message: impl Display) -> Self {
        CliError {
            code: "io_error",
            message: message.to_string(),
            exit: 2,
        }
    }

    pub fn parse(message: impl Display) -> Self {
        CliError {
            code: "parse_error",
            message: message.to_string(),
            exit: 2,
        }
    }

    pub fn usage(message: impl Display) -> Self {
        CliError {
            code: "usage_error",
            message: message.to_string(),
            exit: 2,
        }
    }

    pub fn report(&self) -> ExitCode {
        let doc = ErrorDoc {
            error: ErrorBody {
                code: self.code,
                message: self.message.trim_end(),
            },
        };
        eprintln!("{}", serde_json::to_string(&doc).expect("error serializes"));
        ExitCode::from(self.exit)
    }
}
