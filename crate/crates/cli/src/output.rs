use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use gandhi_core::Rational;
use serde::Serialize;

use crate::config::OutputFormat;

/// Writes records to stdout in the chosen format and, optionally, appends
/// them as JSON lines to a log file.
pub struct Emitter<W: Write> {
    format: OutputFormat,
    out: Sink<W>,
    log: Option<File>,
}

enum Sink<W: Write> {
    Csv(csv::Writer<W>),
    Raw(W),
}

/// A record that can also render itself as one plain-text line.
pub trait Record: Serialize {
    fn plain(&self) -> String;
}

impl<W: Write> Emitter<W> {
    pub fn new(format: OutputFormat, out: W, log: Option<&Path>) -> io::Result<Self> {
        let log = log
            .map(|p| OpenOptions::new().create(true).append(true).open(p))
            .transpose()?;
        let out = match format {
            OutputFormat::Csv => Sink::Csv(csv::Writer::from_writer(out)),
            OutputFormat::Json | OutputFormat::Plain => Sink::Raw(out),
        };
        Ok(Emitter { format, out, log })
    }

    pub fn emit<R: Record>(&mut self, record: &R) -> io::Result<()> {
        match (&mut self.out, self.format) {
            (Sink::Csv(w), _) => {
                w.serialize(record).map_err(io::Error::other)?;
                w.flush()?;
            }
            (Sink::Raw(w), OutputFormat::Json) => {
                serde_json::to_writer(&mut *w, record)?;
                writeln!(w)?;
            }
            (Sink::Raw(w), _) => writeln!(w, "{}", record.plain())?,
        }
        if let Some(log) = &mut self.log {
            serde_json::to_writer(&mut *log, record)?;
            writeln!(log)?;
        }
        Ok(())
    }

    pub fn finish(self) -> io::Result<W> {
        match self.out {
            Sink::Csv(w) => w.into_inner().map_err(|e| e.into_error()),
            Sink::Raw(w) => Ok(w),
        }
    }
}

/// `num/den` as decimal strings, never floats.
pub fn fraction(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}
