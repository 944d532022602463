//! Append-only persistence of replication events and step summaries: the
//! interchange format between the simulation engines and the analysis tools.
//!
//! A log file is JSON Lines: a header record followed by event and summary
//! records in emission order. Record lines are written with a fixed key
//! order and no whitespace, and fitness is serialized as a fixed 8-digit
//! decimal, so identical runs produce byte-identical files.
//!
//! ```text
//! {"k":"h","version":"hashchem-log/1","model":"nonspatial","seed":1,"run_id":0,"config":{...}}
//! {"k":"r","t":3,"ms":[1,1,3],"f":0.25000000}
//! {"k":"s","t":3,"n":12,"matches":5,"births":5,"deaths":3}
//! ```
//!
//! Files are named `<model>_<seed>_<run_id>.jsonl`, with a `.gz` suffix when
//! gzip-on-write is enabled for batch runs.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::{FitnessValue, FIXED_POINT_DENOMINATOR};
use crate::nonspatial::StepSummary;
use crate::types::Multiset;

/// Format version carried in every header.
pub const FORMAT_VERSION: &str = "hashchem-log/1";

/// Which engine produced a log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Nonspatial,
    Spatial,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Nonspatial => "nonspatial",
            ModelKind::Spatial => "spatial",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonspatial" => Ok(ModelKind::Nonspatial),
            "spatial" => Ok(ModelKind::Spatial),
            other => Err(Error::Parse {
                line: 0,
                reason: format!("unknown model {other:?}"),
            }),
        }
    }
}

/// One successful replication: the content that was inserted and the fitness
/// that won the match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicationEvent {
    pub run_id: u64,
    /// 1-based iteration index.
    pub t: u32,
    pub multiset: Multiset,
    pub fitness: FitnessValue,
}

/// A step summary as it appears on the wire. `StepSummary` carries one extra
/// in-memory field (`mutated_multisets`) that is not serialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SummaryLine {
    pub t: u32,
    pub n: u64,
    pub matches: u64,
    pub births: u64,
    pub deaths: u64,
}

impl From<&StepSummary> for SummaryLine {
    fn from(s: &StepSummary) -> Self {
        SummaryLine {
            t: s.t,
            n: s.population_size as u64,
            matches: s.matches as u64,
            births: s.births as u64,
            deaths: s.deaths as u64,
        }
    }
}

/// File-level metadata. The config echo is complete: re-running the recorded
/// model with the recorded config reproduces the log byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub version: String,
    pub model: ModelKind,
    pub seed: u64,
    pub run_id: u64,
    pub config: serde_json::Value,
}

impl Header {
    pub fn new<C: Serialize>(model: ModelKind, seed: u64, run_id: u64, config: &C) -> Result<Self> {
        Ok(Header {
            version: FORMAT_VERSION.to_string(),
            model,
            seed,
            run_id,
            config: serde_json::to_value(config).map_err(|e| Error::Parse {
                line: 0,
                reason: format!("config not serializable: {e}"),
            })?,
        })
    }

    /// `s_max` from the config echo, used to validate multisets on read.
    pub fn s_max(&self) -> Option<u32> {
        self.config.get("s_max").and_then(|v| v.as_u64()).map(|v| v as u32)
    }
}

/// Everything a log can contain, in file order.
#[derive(Debug, Clone, PartialEq)]
pub enum Record {
    Header(Header),
    Replication(ReplicationEvent),
    Summary(SummaryLine),
}

/// Consumer of the engines' output stream. One sink serves one run.
pub trait Sink {
    fn event(&mut self, ev: &ReplicationEvent) -> Result<()>;
    fn summary(&mut self, s: &StepSummary) -> Result<()>;
}

/// Discards everything; used by the benchmark harness, where logging is
/// disabled by methodology.
#[derive(Debug, Default)]
pub struct NullSink;

impl Sink for NullSink {
    fn event(&mut self, _: &ReplicationEvent) -> Result<()> {
        Ok(())
    }
    fn summary(&mut self, _: &StepSummary) -> Result<()> {
        Ok(())
    }
}

/// Collects records in memory.
#[derive(Debug, Default)]
pub struct VecSink {
    pub events: Vec<ReplicationEvent>,
    pub summaries: Vec<StepSummary>,
}

impl Sink for VecSink {
    fn event(&mut self, ev: &ReplicationEvent) -> Result<()> {
        self.events.push(ev.clone());
        Ok(())
    }
    fn summary(&mut self, s: &StepSummary) -> Result<()> {
        self.summaries.push(s.clone());
        Ok(())
    }
}

/// Appends one event line with fixed key order and 8-digit fitness.
pub fn write_event<W: Write>(out: &mut W, ev: &ReplicationEvent) -> Result<()> {
    write!(out, "{{\"k\":\"r\",\"t\":{},\"ms\":[", ev.t)?;
    for (i, v) in ev.multiset.values().enumerate() {
        if i > 0 {
            out.write_all(b",")?;
        }
        write!(out, "{v}")?;
    }
    writeln!(out, "],\"f\":0.{:08}}}", ev.fitness.to_fixed8())?;
    Ok(())
}

/// Appends one summary line.
pub fn write_summary<W: Write>(out: &mut W, s: &StepSummary) -> Result<()> {
    let line = SummaryLine::from(s);
    writeln!(
        out,
        "{{\"k\":\"s\",\"t\":{},\"n\":{},\"matches\":{},\"births\":{},\"deaths\":{}}}",
        line.t, line.n, line.matches, line.births, line.deaths
    )?;
    Ok(())
}

fn write_header<W: Write>(out: &mut W, header: &Header) -> Result<()> {
    #[derive(Serialize)]
    struct HeaderLine<'a> {
        k: &'static str,
        version: &'a str,
        model: ModelKind,
        seed: u64,
        run_id: u64,
        config: &'a serde_json::Value,
    }
    let line = serde_json::to_string(&HeaderLine {
        k: "h",
        version: &header.version,
        model: header.model,
        seed: header.seed,
        run_id: header.run_id,
        config: &header.config,
    })
    .map_err(|e| Error::Parse {
        line: 0,
        reason: format!("header not serializable: {e}"),
    })?;
    writeln!(out, "{line}")?;
    Ok(())
}

/// JSON-lines writer over any byte sink.
#[derive(Debug)]
pub struct JsonlWriter<W: Write> {
    out: W,
}

impl<W: Write> JsonlWriter<W> {
    pub fn new(out: W) -> Self {
        JsonlWriter { out }
    }

    pub fn header(&mut self, header: &Header) -> Result<()> {
        write_header(&mut self.out, header)
    }

    pub fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> Sink for JsonlWriter<W> {
    fn event(&mut self, ev: &ReplicationEvent) -> Result<()> {
        write_event(&mut self.out, ev)
    }
    fn summary(&mut self, s: &StepSummary) -> Result<()> {
        write_summary(&mut self.out, s)
    }
}

enum FileOut {
    Plain(BufWriter<File>),
    Gzip(flate2::write::GzEncoder<BufWriter<File>>),
}

impl Write for FileOut {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        match self {
            FileOut::Plain(w) => w.write(buf),
            FileOut::Gzip(w) => w.write(buf),
        }
    }
    fn flush(&mut self) -> std::io::Result<()> {
        match self {
            FileOut::Plain(w) => w.flush(),
            FileOut::Gzip(w) => w.flush(),
        }
    }
}

/// A log writer bound to a file, gzip-compressing when the path ends in
/// `.gz`.
pub struct LogFileWriter {
    inner: JsonlWriter<FileOut>,
}

impl LogFileWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = BufWriter::new(File::create(path)?);
        let out = if path.extension().is_some_and(|e| e == "gz") {
            FileOut::Gzip(flate2::write::GzEncoder::new(
                file,
                flate2::Compression::default(),
            ))
        } else {
            FileOut::Plain(file)
        };
        Ok(LogFileWriter {
            inner: JsonlWriter::new(out),
        })
    }

    pub fn header(&mut self, header: &Header) -> Result<()> {
        self.inner.header(header)
    }

    /// Flushes and finalizes the file (writes the gzip trailer when
    /// compressing). Must be called; dropping without finishing may lose the
    /// trailer.
    pub fn finish(self) -> Result<()> {
        match self.inner.into_inner() {
            FileOut::Plain(mut w) => w.flush()?,
            FileOut::Gzip(gz) => {
                gz.finish()?.flush()?;
            }
        }
        Ok(())
    }
}

impl Sink for LogFileWriter {
    fn event(&mut self, ev: &ReplicationEvent) -> Result<()> {
        self.inner.event(ev)
    }
    fn summary(&mut self, s: &StepSummary) -> Result<()> {
        self.inner.summary(s)
    }
}

/// Canonical log file name for a run.
pub fn log_file_name(model: ModelKind, seed: u64, run_id: u64, gzip: bool) -> String {
    let suffix = if gzip { ".jsonl.gz" } else { ".jsonl" };
    format!("{model}_{seed}_{run_id}{suffix}")
}

/// Canonical log path inside `dir`.
pub fn log_file_path(dir: &Path, model: ModelKind, seed: u64, run_id: u64, gzip: bool) -> PathBuf {
    dir.join(log_file_name(model, seed, run_id, gzip))
}

/// Streaming reader: yields the header, then records in file order,
/// validating schema and invariants per record.
pub struct LogReader<B: BufRead> {
    lines: std::io::Lines<B>,
    line_no: usize,
    header: Option<Header>,
    s_max: u32,
    run_id: u64,
    last_t: u32,
    done: bool,
}

impl<B: BufRead> LogReader<B> {
    pub fn new(source: B) -> Self {
        LogReader {
            lines: source.lines(),
            line_no: 0,
            header: None,
            s_max: u32::MAX,
            run_id: 0,
            last_t: 0,
            done: false,
        }
    }

    /// The header, if it has been read yet.
    pub fn header(&self) -> Option<&Header> {
        self.header.as_ref()
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line_no,
            reason: reason.into(),
        }
    }

    fn parse_line(&mut self, line: &str) -> Result<Record> {
        let value: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| self.err(format!("malformed JSON: {e}")))?;
        let kind = value
            .get("k")
            .and_then(|k| k.as_str())
            .ok_or_else(|| self.err("missing record kind \"k\""))?;

        if self.header.is_none() {
            if kind != "h" {
                return Err(self.err("first record must be the header"));
            }
        } else if kind == "h" {
            return Err(self.err("duplicate header"));
        }

        match kind {
            "h" => {
                let header: Header = serde_json::from_value(value)
                    .map_err(|e| self.err(format!("bad header: {e}")))?;
                if header.version != FORMAT_VERSION {
                    return Err(self.err(format!(
                        "unsupported format version {:?} (expected {FORMAT_VERSION:?})",
                        header.version
                    )));
                }
                if let Some(s_max) = header.s_max() {
                    self.s_max = s_max;
                }
                self.run_id = header.run_id;
                self.header = Some(header.clone());
                Ok(Record::Header(header))
            }
            "r" => {
                let t = self.field_u64(&value, "t")? as u32;
                self.check_t(t)?;
                let ms = value
                    .get("ms")
                    .and_then(|m| m.as_array())
                    .ok_or_else(|| self.err("missing multiset \"ms\""))?;
                if ms.is_empty() {
                    return Err(self.err("empty multiset"));
                }
                let mut values = Vec::with_capacity(ms.len());
                for v in ms {
                    let v = v
                        .as_u64()
                        .ok_or_else(|| self.err("non-integer multiset element"))?;
                    values.push(u32::try_from(v).map_err(|_| self.err("element out of range"))?);
                }
                if values.windows(2).any(|w| w[0] > w[1]) {
                    return Err(self.err("multiset not sorted ascending"));
                }
                let multiset = Multiset::from_values(&values, self.s_max)
                    .map_err(|e| self.err(format!("invalid multiset: {e}")))?;
                let f = value
                    .get("f")
                    .and_then(|f| f.as_f64())
                    .ok_or_else(|| self.err("missing fitness \"f\""))?;
                if !(0.0..1.0).contains(&f) {
                    return Err(self.err(format!("fitness {f} outside [0, 1)")));
                }
                let f8 = (f * FIXED_POINT_DENOMINATOR as f64).round() as u64;
                if f8 as f64 / FIXED_POINT_DENOMINATOR as f64 != f {
                    return Err(self.err(format!("fitness {f} is not an 8-digit fixed point")));
                }
                let fitness = FitnessValue::from_fixed8(f8)
                    .map_err(|e| self.err(format!("invalid fitness: {e}")))?;
                Ok(Record::Replication(ReplicationEvent {
                    run_id: self.run_id,
                    t,
                    multiset,
                    fitness,
                }))
            }
            "s" => {
                let t = self.field_u64(&value, "t")? as u32;
                self.check_t(t)?;
                Ok(Record::Summary(SummaryLine {
                    t,
                    n: self.field_u64(&value, "n")?,
                    matches: self.field_u64(&value, "matches")?,
                    births: self.field_u64(&value, "births")?,
                    deaths: self.field_u64(&value, "deaths")?,
                }))
            }
            other => Err(self.err(format!("unknown record kind {other:?}"))),
        }
    }

    fn field_u64(&self, value: &serde_json::Value, key: &str) -> Result<u64> {
        value
            .get(key)
            .and_then(|v| v.as_u64())
            .ok_or_else(|| self.err(format!("missing or non-integer field {key:?}")))
    }

    fn check_t(&mut self, t: u32) -> Result<()> {
        if t < self.last_t {
            return Err(self.err(format!(
                "step index decreased: t={t} after t={}",
                self.last_t
            )));
        }
        self.last_t = t;
        Ok(())
    }
}

impl<B: BufRead> Iterator for LogReader<B> {
    type Item = Result<Record>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            self.line_no += 1;
            match self.lines.next() {
                None => {
                    self.done = true;
                    if self.header.is_none() {
                        return Some(Err(Error::Parse {
                            line: self.line_no,
                            reason: "log contains no header".into(),
                        }));
                    }
                    return None;
                }
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
                Some(Ok(line)) => {
                    if line.trim().is_empty() {
                        continue;
                    }
                    let record = self.parse_line(&line);
                    if record.is_err() {
                        self.done = true;
                    }
                    return Some(record);
                }
            }
        }
    }
}

/// Reads a log from any buffered source.
pub fn read_log<B: BufRead>(source: B) -> LogReader<B> {
    LogReader::new(source)
}

/// Opens a log file, transparently decompressing `.gz`.
pub fn open_log(path: &Path) -> Result<LogReader<Box<dyn BufRead>>> {
    let file = File::open(path)?;
    let source: Box<dyn BufRead> = if path.extension().is_some_and(|e| e == "gz") {
        Box::new(BufReader::new(flate2::read::GzDecoder::new(file)))
    } else {
        Box::new(BufReader::new(file))
    };
    Ok(LogReader::new(source))
}

/// Convenience: reads a whole log, returning the header, events, and
/// summaries.
pub fn read_log_file(path: &Path) -> Result<(Header, Vec<ReplicationEvent>, Vec<SummaryLine>)> {
    let reader = open_log(path)?;
    let mut header = None;
    let mut events = Vec::new();
    let mut summaries = Vec::new();
    for record in reader {
        match record? {
            Record::Header(h) => header = Some(h),
            Record::Replication(ev) => events.push(ev),
            Record::Summary(s) => summaries.push(s),
        }
    }
    let header = header.ok_or(Error::Parse {
        line: 0,
        reason: "log contains no header".into(),
    })?;
    Ok((header, events, summaries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SimConfig;

    fn ms(values: &[u32]) -> Multiset {
        Multiset::from_values(values, 1000).unwrap()
    }

    fn event(t: u32, values: &[u32], f8: u64) -> ReplicationEvent {
        ReplicationEvent {
            run_id: 0,
            t,
            multiset: ms(values),
            fitness: FitnessValue::from_fixed8(f8).unwrap(),
        }
    }

    fn summary(t: u32, n: usize, matches: usize, births: usize, deaths: usize) -> StepSummary {
        StepSummary {
            t,
            population_size: n,
            matches,
            births,
            deaths,
            mutated_multisets: 0,
        }
    }

    #[test]
    fn event_line_matches_format_exactly() {
        let mut buf = Vec::new();
        write_event(&mut buf, &event(3, &[1, 1, 3], 25_000_000)).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"k\":\"r\",\"t\":3,\"ms\":[1,1,3],\"f\":0.25000000}\n"
        );
    }

    #[test]
    fn summary_line_matches_format_exactly() {
        let mut buf = Vec::new();
        write_summary(&mut buf, &summary(1, 10, 5, 5, 3)).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"k\":\"s\",\"t\":1,\"n\":10,\"matches\":5,\"births\":5,\"deaths\":3}\n"
        );
    }

    #[test]
    fn max_fitness_round_trips_exactly() {
        let mut buf = Vec::new();
        write_event(&mut buf, &event(1, &[5], 99_999_999)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"f\":0.99999999"));

        let full = format!("{}{}", header_line(), text);
        let records: Vec<_> = read_log(full.as_bytes()).collect::<Result<_>>().unwrap();
        match &records[1] {
            Record::Replication(ev) => assert_eq!(ev.fitness.to_fixed8(), 99_999_999),
            other => panic!("unexpected record {other:?}"),
        }
    }

    fn header_line() -> String {
        let header = Header::new(
            ModelKind::Nonspatial,
            7,
            0,
            &SimConfig::<f64>::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_header(&mut buf, &header).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn written_records_parse_back_equal() {
        let mut w = JsonlWriter::new(Vec::new());
        let header = Header::new(ModelKind::Nonspatial, 7, 0, &SimConfig::<f64>::default())
            .unwrap();
        w.header(&header).unwrap();
        let ev = event(2, &[4, 9, 9], 12_345_678);
        let su = summary(2, 11, 5, 5, 4);
        w.event(&ev).unwrap();
        w.summary(&su).unwrap();
        let bytes = w.into_inner();

        let records: Vec<_> = read_log(bytes.as_slice()).collect::<Result<_>>().unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[0], Record::Header(header));
        assert_eq!(records[1], Record::Replication(ev));
        assert_eq!(records[2], Record::Summary(SummaryLine::from(&su)));
    }

    #[test]
    fn unsorted_multiset_is_a_schema_error_with_line_number() {
        let text = format!(
            "{}{}",
            header_line(),
            "{\"k\":\"r\",\"t\":1,\"ms\":[3,1],\"f\":0.10000000}\n"
        );
        let err = read_log(text.as_bytes())
            .collect::<Result<Vec<_>>>()
            .unwrap_err();
        match err {
            Error::Parse { line, reason } => {
                assert_eq!(line, 2);
                assert!(reason.contains("sorted"), "reason: {reason}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn truncated_final_line_reports_its_line_number() {
        let text = format!("{}{}", header_line(), "{\"k\":\"r\",\"t\":1,\"ms\":[1,");
        let err = read_log(text.as_bytes())
            .collect::<Result<Vec<_>>>()
            .unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn missing_header_is_rejected() {
        let text = "{\"k\":\"r\",\"t\":1,\"ms\":[1],\"f\":0.10000000}\n";
        let err = read_log(text.as_bytes())
            .collect::<Result<Vec<_>>>()
            .unwrap_err();
        match err {
            Error::Parse { line, reason } => {
                assert_eq!(line, 1);
                assert!(reason.contains("header"), "reason: {reason}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn decreasing_t_is_rejected() {
        let text = format!(
            "{}{}{}",
            header_line(),
            "{\"k\":\"s\",\"t\":5,\"n\":1,\"matches\":0,\"births\":0,\"deaths\":0}\n",
            "{\"k\":\"s\",\"t\":4,\"n\":1,\"matches\":0,\"births\":0,\"deaths\":0}\n"
        );
        let err = read_log(text.as_bytes())
            .collect::<Result<Vec<_>>>()
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn nine_digit_fitness_is_rejected() {
        let text = format!(
            "{}{}",
            header_line(),
            "{\"k\":\"r\",\"t\":1,\"ms\":[1],\"f\":0.123456789}\n"
        );
        let err = read_log(text.as_bytes())
            .collect::<Result<Vec<_>>>()
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn file_names_follow_the_convention() {
        assert_eq!(
            log_file_name(ModelKind::Nonspatial, 42, 3, false),
            "nonspatial_42_3.jsonl"
        );
        assert_eq!(
            log_file_name(ModelKind::Spatial, 1, 0, true),
            "spatial_1_0.jsonl.gz"
        );
    }

    #[test]
    fn gzip_round_trip_preserves_records() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nonspatial_7_0.jsonl.gz");
        let header = Header::new(ModelKind::Nonspatial, 7, 0, &SimConfig::<f64>::default())
            .unwrap();
        let mut w = LogFileWriter::create(&path).unwrap();
        w.header(&header).unwrap();
        let ev = event(1, &[1, 2], 42);
        w.event(&ev).unwrap();
        w.finish().unwrap();

        let (h, events, _) = read_log_file(&path).unwrap();
        assert_eq!(h, header);
        assert_eq!(events, vec![ev]);
    }

    #[test]
    fn identical_content_produces_identical_bytes() {
        let write_once = || {
            let mut w = JsonlWriter::new(Vec::new());
            let header =
                Header::new(ModelKind::Nonspatial, 7, 0, &SimConfig::<f64>::default()).unwrap();
            w.header(&header).unwrap();
            for t in 1..50 {
                w.event(&event(t, &[t, t + 1], (t as u64) * 999)).unwrap();
                w.summary(&summary(t as u32, 10, 5, 5, 2)).unwrap();
            }
            w.into_inner()
        };
        assert_eq!(write_once(), write_once());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn event_round_trip(
                t in 1u32..5000,
                values in proptest::collection::vec(1u32..=1000, 1..10),
                f8 in 0u64..100_000_000,
            ) {
                let ev = ReplicationEvent {
                    run_id: 0,
                    t,
                    multiset: ms(&values),
                    fitness: FitnessValue::from_fixed8(f8).unwrap(),
                };
                let text = format!("{}{}", header_line(), {
                    let mut buf = Vec::new();
                    write_event(&mut buf, &ev).unwrap();
                    String::from_utf8(buf).unwrap()
                });
                let records: Vec<_> = read_log(text.as_bytes()).collect::<Result<_>>().unwrap();
                prop_assert_eq!(&records[1], &Record::Replication(ev));
            }
        }
    }
}
