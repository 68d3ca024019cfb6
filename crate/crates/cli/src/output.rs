use std::io::Write;

use chromobath::units::constants::TABLE_VERSION;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Empty, Field::Num)
    }
}

/// One header row, rows of equal width, and `#` notes printed above.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Table::default()
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[i] {
                    Field::Num(v) => v,
                    _ => f64::NAN,
                })
                .collect(),
        )
    }
}

/// Writes the provenance header, the notes and the CSV body.
pub fn write_table(
    out: &mut dyn Write,
    command: &str,
    config_hash: &str,
    table: &Table,
) -> Result<(), CliError> {
    for (i, row) in table.rows.iter().enumerate() {
        if row.len() != table.columns.len() {
            return Err(CliError::Numeric(format!(
                "row {i} has {} fields, expected {}",
                row.len(),
                table.columns.len()
            )));
        }
        if let Some(j) = row
            .iter()
            .position(|f| matches!(f, Field::Num(v) if !v.is_finite()))
        {
            return Err(CliError::Numeric(format!(
                "non-finite value in column `{}` of row {i}",
                table.columns[j]
            )));
        }
    }
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    writeln!(out, "# command: {command}").map_err(io)?;
    writeln!(out, "# config_sha256: {config_hash}").map_err(io)?;
    writeln!(out, "# constants: {TABLE_VERSION}").map_err(io)?;
    for n in &table.notes {
        writeln!(out, "# {n}").map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(&table.columns).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|f| match f {
            Field::Num(v) => format!("{v:.10e}"),
            Field::Text(s) => s.clone(),
            Field::Empty => String::new(),
        }))
        .map_err(csv_err)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}
