use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use crate::mc::{EventRecord, Role};
use crate::{Error, Result, Vec3};

/// Header line of an event file.
pub const EVENT_HEADER: [&str; 6] = ["event_id", "role", "channel", "nx", "ny", "nz"];

/// Decimal places written for direction components.
const DIGITS: usize = 9;

/// Largest accepted `| |n| − 1 |` when reading.
const NORM_TOL: f64 = 1e-9;

/// Buffered event-file writer; the header is written on construction.
pub struct EventWriter<W: Write> {
    inner: csv::Writer<W>,
    label: String,
    written: u64,
}

impl EventWriter<BufWriter<File>> {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|source| Error::Io {
            context: format!("creating {}", path.display()),
            source,
        })?;
        Self::new(BufWriter::new(file), &path.display().to_string())
    }
}

impl<W: Write> EventWriter<W> {
    pub fn new(sink: W, label: &str) -> Result<Self> {
        let mut w = Self {
            inner: csv::WriterBuilder::new().from_writer(sink),
            label: label.to_string(),
            written: 0,
        };
        w.inner
            .write_record(EVENT_HEADER)
            .map_err(|e| w.io_error(e, "writing header"))?;
        Ok(w)
    }

    fn io_error(&self, e: csv::Error, what: &str) -> Error {
        let source = match e.into_kind() {
            csv::ErrorKind::Io(io) => io,
            other => std::io::Error::other(format!("{other:?}")),
        };
        Error::Io {
            context: format!("{}: {what}", self.label),
            source,
        }
    }

    pub fn write(&mut self, records: &[EventRecord]) -> Result<()> {
        let mut buf = fields::Fields::default();
        for r in records {
            buf.fill(r);
            if let Err(e) = self.inner.write_record(buf.as_slice()) {
                return Err(self.io_error(e, &format!("writing event {}", r.event_id)));
            }
            self.written += 1;
        }
        Ok(())
    }

    /// Records written so far.
    pub fn written(&self) -> u64 {
        self.written
    }

    pub fn finish(mut self) -> Result<W> {
        if let Err(e) = self.inner.flush() {
            return Err(Error::Io {
                context: format!("{}: flushing", self.label),
                source: e,
            });
        }
        let label = self.label.clone();
        self.inner.into_inner().map_err(|e| Error::Io {
            context: format!("{label}: flushing"),
            source: std::io::Error::other(e.to_string()),
        })
    }
}

mod fields {
    use std::fmt::Write;

    use super::{EventRecord, DIGITS};

    /// Reusable field buffers for one record.
    #[derive(Default)]
    pub struct Fields([String; 6]);

    impl Fields {
        pub fn fill(&mut self, r: &EventRecord) {
            for f in &mut self.0 {
                f.clear();
            }
            let _ = write!(self.0[0], "{}", r.event_id);
            self.0[1].push_str(r.role.as_str());
            self.0[2].push_str(&r.channel);
            for i in 0..3 {
                let _ = write!(self.0[3 + i], "{:.*}", DIGITS, r.n[i]);
            }
        }

        pub fn as_slice(&self) -> &[String; 6] {
            &self.0
        }
    }
}

/// Writes `records` with header to `path`.
pub fn write_events(path: impl AsRef<Path>, records: &[EventRecord]) -> Result<()> {
    let mut w = EventWriter::create(path)?;
    w.write(records)?;
    w.finish().map(drop)
}

/// Streaming event-file reader yielding records in file order.
pub struct EventReader<R: Read> {
    records: csv::StringRecordsIntoIter<R>,
    label: String,
    last_good: Option<u64>,
    channel: Option<Arc<str>>,
    failed: bool,
}

impl EventReader<BufReader<File>> {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| Error::Io {
            context: format!("opening {}", path.display()),
            source,
        })?;
        Self::new(BufReader::new(file), &path.display().to_string())
    }
}

impl<R: Read> EventReader<R> {
    pub fn new(source: R, label: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(source);
        let header = reader.headers().map_err(|e| Error::MalformedEvent {
            path: label.to_string(),
            line: 1,
            last_good: None,
            message: e.to_string(),
        })?;
        if header.iter().ne(EVENT_HEADER.iter().copied()) {
            return Err(Error::MalformedEvent {
                path: label.to_string(),
                line: 1,
                last_good: None,
                message: format!("expected header `{}`", EVENT_HEADER.join(",")),
            });
        }
        Ok(Self {
            records: reader.into_records(),
            label: label.to_string(),
            last_good: None,
            channel: None,
            failed: false,
        })
    }

    fn malformed(&self, line: u64, message: String) -> Error {
        Error::MalformedEvent {
            path: self.label.clone(),
            line,
            last_good: self.last_good,
            message,
        }
    }

    fn decode(&mut self, rec: &csv::StringRecord) -> Result<EventRecord> {
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != EVENT_HEADER.len() {
            return Err(self.malformed(
                line,
                format!("expected {} fields, found {}", EVENT_HEADER.len(), rec.len()),
            ));
        }
        let event_id: u64 = rec[0]
            .parse()
            .map_err(|_| self.malformed(line, format!("bad event id `{}`", &rec[0])))?;
        let role = Role::parse(&rec[1])
            .ok_or_else(|| self.malformed(line, format!("unknown role `{}`", &rec[1])))?;
        if rec[2].is_empty() {
            return Err(self.malformed(line, "empty channel".into()));
        }
        let channel = match &self.channel {
            Some(c) if **c == rec[2] => c.clone(),
            _ => {
                let c: Arc<str> = rec[2].into();
                self.channel = Some(c.clone());
                c
            }
        };
        let mut n = Vec3::zeros();
        for i in 0..3 {
            n[i] = rec[3 + i]
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| {
                    self.malformed(line, format!("bad {} `{}`", EVENT_HEADER[3 + i], &rec[3 + i]))
                })?;
        }
        let norm = n.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(self.malformed(line, format!("direction norm {norm} is not 1")));
        }
        Ok(EventRecord {
            event_id,
            role,
            channel,
            n,
        })
    }
}

impl<R: Read> Iterator for EventReader<R> {
    type Item = Result<EventRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let item = match self.records.next()? {
            Ok(rec) => self.decode(&rec),
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                Err(self.malformed(line, e.to_string()))
            }
        };
        match &item {
            Ok(r) => self.last_good = Some(r.event_id),
            Err(_) => self.failed = true,
        }
        Some(item)
    }
}

/// Reads a whole event file.
pub fn read_events(path: impl AsRef<Path>) -> Result<Vec<EventRecord>> {
    EventReader::open(path)?.collect()
}
