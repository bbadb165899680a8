use std::fmt::Display;

use clap::ValueEnum;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `key: value` lines.
    #[default]
    Text,
    /// Comma-separated records with a header row.
    Csv,
}

/// Buffered report output. Key-value reports become `quantity,value`
/// records in CSV mode; tables are written as they are.
pub struct Report {
    format: Format,
    text: String,
    csv: Option<csv::Writer<Vec<u8>>>,
}

impl Report {
    pub fn new(format: Format) -> Self {
        Report {
            format,
            text: String::new(),
            csv: None,
        }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    fn record<I, S>(&mut self, header: &[&str], fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let writer = match &mut self.csv {
            Some(w) => w,
            None => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(header).map_err(|e| CliError::Output(e.to_string()))?;
                self.csv.insert(w)
            }
        };
        writer.write_record(fields).map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn kv(&mut self, key: &str, value: impl Display) -> Result<(), CliError> {
        match self.format {
            Format::Text => {
                self.text.push_str(&format!("{key}: {value}\n"));
                Ok(())
            }
            Format::Csv => self.record(&["quantity", "value"], [key.to_string(), value.to_string()]),
        }
    }

    /// A free-standing line in text mode. CSV mode drops it.
    pub fn line(&mut self, line: impl Display) {
        if self.format == Format::Text {
            self.text.push_str(&format!("{line}\n"));
        }
    }

    /// A table row; `header` is written once, before the first row, in CSV mode only.
    pub fn row(&mut self, header: &[&str], fields: &[String]) -> Result<(), CliError> {
        match self.format {
            Format::Text => {
                self.text.push_str(&fields.join(" "));
                self.text.push('\n');
                Ok(())
            }
            Format::Csv => self.record(header, fields),
        }
    }

    pub fn finish(self) -> Result<String, CliError> {
        let mut out = self.text;
        if let Some(w) = self.csv {
            let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))?);
        }
        Ok(out)
    }
}
