//! Paired search-count datasets: schema, validation, persistence and query
//! construction.
//!
//! Each record holds two result counts for one head of state: `count_a1` for
//! the plain query `<head_name> <title> of <country>` and `count_a2` for the
//! same text wrapped in double quotes.
//!
//! CSV schema (header required, comma-delimited, RFC 4180 quoting):
//!
//! ```text
//! country,head_name,title,count_a1,count_a2,collected_at
//! ```
//!
//! `collected_at` is ISO-8601 (RFC 3339; a timestamp without offset is read
//! as UTC). JSON is an array of objects with the same keys.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, FixedOffset, NaiveDateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const HEADER: [&str; 6] = [
    "country",
    "head_name",
    "title",
    "count_a1",
    "count_a2",
    "collected_at",
];

/// Longest collection window, in hours, before a dataset carries a warning.
pub const MAX_COLLECTION_HOURS: i64 = 12;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}, column {column}: {reason}")]
    Parse {
        row: usize,
        column: String,
        reason: String,
    },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("row {row}: duplicate record for {head_name} ({country})")]
    Duplicate {
        row: usize,
        country: String,
        head_name: String,
    },
    #[error("dataset has no records")]
    Empty,
    #[error("{0} must not be empty")]
    EmptyField(&'static str),
    #[error("no count recorded for query {0:?}")]
    UnknownQuery(String),
    #[error("count provider unavailable: {0}")]
    ProviderUnavailable(String),
}

pub type Result<T> = std::result::Result<T, IngestError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Json,
}

impl DataFormat {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => DataFormat::Json,
            _ => DataFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Accept digit groups separated by commas or spaces, e.g. `93 500 000`.
    pub thousands_separators: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRecord {
    pub country: String,
    pub head_name: String,
    pub title: String,
    pub count_a1: u64,
    pub count_a2: u64,
    pub collected_at: DateTime<FixedOffset>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetWarning {
    /// The quoted query returned more results than the unquoted one.
    QuotedExceedsUnquoted {
        row: usize,
        country: String,
        count_a1: u64,
        count_a2: u64,
    },
    /// Records were collected over a window longer than `MAX_COLLECTION_HOURS`.
    LongCollectionWindow { hours: f64 },
}

impl fmt::Display for DatasetWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetWarning::QuotedExceedsUnquoted {
                row,
                country,
                count_a1,
                count_a2,
            } => write!(
                f,
                "row {row} ({country}): count_a2 {count_a2} exceeds count_a1 {count_a1}"
            ),
            DatasetWarning::LongCollectionWindow { hours } => write!(
                f,
                "collection window spans {hours:.2} h (more than {MAX_COLLECTION_HOURS} h)"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedDataset {
    pub records: Vec<CountRecord>,
    pub source: String,
    pub collection_window: (DateTime<FixedOffset>, DateTime<FixedOffset>),
    pub warnings: Vec<DatasetWarning>,
}

impl PairedDataset {
    /// Validate records and derive the collection window and warnings.
    pub fn new(records: Vec<CountRecord>, source: impl Into<String>) -> Result<Self> {
        Self::with_row_numbers(records, source.into(), |i| i + 1)
    }

    fn with_row_numbers(
        records: Vec<CountRecord>,
        source: String,
        row_of: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(IngestError::Empty);
        }
        let mut seen = HashSet::new();
        let mut warnings = Vec::new();
        for (i, r) in records.iter().enumerate() {
            if !seen.insert((r.country.as_str(), r.head_name.as_str())) {
                return Err(IngestError::Duplicate {
                    row: row_of(i),
                    country: r.country.clone(),
                    head_name: r.head_name.clone(),
                });
            }
            if r.count_a2 > r.count_a1 {
                warnings.push(DatasetWarning::QuotedExceedsUnquoted {
                    row: row_of(i),
                    country: r.country.clone(),
                    count_a1: r.count_a1,
                    count_a2: r.count_a2,
                });
            }
        }
        let start = records.iter().map(|r| r.collected_at).min().expect("non-empty");
        let end = records.iter().map(|r| r.collected_at).max().expect("non-empty");
        let span = end - start;
        if span > chrono::Duration::hours(MAX_COLLECTION_HOURS) {
            warnings.push(DatasetWarning::LongCollectionWindow {
                hours: span.num_seconds() as f64 / 3600.0,
            });
        }
        Ok(PairedDataset {
            records,
            source,
            collection_window: (start, end),
            warnings,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn counts_a1(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.count_a1).collect()
    }

    pub fn counts_a2(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.count_a2).collect()
    }

    /// Length of the collection window.
    pub fn collection_span(&self) -> chrono::Duration {
        self.collection_window.1 - self.collection_window.0
    }
}

/// Parse a result count: plain ASCII digits, or with `thousands_separators`
/// digit groups of three separated consistently by `,`, space, no-break space
/// or narrow no-break space.
pub fn parse_count(text: &str, thousands_separators: bool) -> std::result::Result<u64, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty count".into());
    }
    if text.bytes().all(|b| b.is_ascii_digit()) {
        return text.parse().map_err(|_| format!("count {text:?} exceeds 64 bits"));
    }
    if !thousands_separators {
        return Err(format!("{text:?} is not a non-negative integer"));
    }
    let separator = text
        .chars()
        .find(|c| !c.is_ascii_digit())
        .expect("non-digit present");
    if ![',', ' ', '\u{a0}', '\u{202f}'].contains(&separator) {
        return Err(format!("{text:?} is not a non-negative integer"));
    }
    let groups: Vec<&str> = text.split(separator).collect();
    let well_formed = groups.iter().all(|g| g.bytes().all(|b| b.is_ascii_digit()))
        && (1..=3).contains(&groups[0].len())
        && groups[1..].iter().all(|g| g.len() == 3);
    if !well_formed {
        return Err(format!("{text:?} has malformed digit groups"));
    }
    groups
        .concat()
        .parse()
        .map_err(|_| format!("count {text:?} exceeds 64 bits"))
}

/// Parse an ISO-8601 timestamp; one without an offset is taken as UTC.
pub fn parse_timestamp(text: &str) -> std::result::Result<DateTime<FixedOffset>, String> {
    let text = text.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(text) {
        return Ok(t);
    }
    for layout in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(text, layout) {
            return Ok(DateTime::<Utc>::from_naive_utc_and_offset(naive, Utc).fixed_offset());
        }
    }
    Err(format!("{text:?} is not an ISO-8601 timestamp"))
}

fn format_timestamp(t: &DateTime<FixedOffset>) -> String {
    t.to_rfc3339_opts(SecondsFormat::AutoSi, true)
}

/// One record as it appears on disk.
#[derive(Debug, Serialize, Deserialize)]
struct RawRecord {
    country: String,
    head_name: String,
    title: String,
    count_a1: RawCount,
    count_a2: RawCount,
    collected_at: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawCount {
    Number(u64),
    Text(String),
}

impl RawRecord {
    fn from_record(r: &CountRecord) -> Self {
        RawRecord {
            country: r.country.clone(),
            head_name: r.head_name.clone(),
            title: r.title.clone(),
            count_a1: RawCount::Number(r.count_a1),
            count_a2: RawCount::Number(r.count_a2),
            collected_at: format_timestamp(&r.collected_at),
        }
    }

    fn into_record(self, row: usize, options: LoadOptions) -> Result<CountRecord> {
        let parse_err = |column: &str, reason: String| IngestError::Parse {
            row,
            column: column.to_string(),
            reason,
        };
        let text_field = |column: &str, value: String| -> Result<String> {
            let value = value.trim().to_string();
            if value.is_empty() {
                Err(parse_err(column, "empty value".into()))
            } else {
                Ok(value)
            }
        };
        let count_field = |column: &str, value: RawCount| -> Result<u64> {
            match value {
                RawCount::Number(n) => Ok(n),
                RawCount::Text(s) => parse_count(&s, options.thousands_separators)
                    .map_err(|reason| parse_err(column, reason)),
            }
        };
        Ok(CountRecord {
            country: text_field("country", self.country)?,
            head_name: text_field("head_name", self.head_name)?,
            title: text_field("title", self.title)?,
            count_a1: count_field("count_a1", self.count_a1)?,
            count_a2: count_field("count_a2", self.count_a2)?,
            collected_at: parse_timestamp(&self.collected_at)
                .map_err(|reason| parse_err("collected_at", reason))?,
        })
    }
}

/// Read a CSV dataset. Row numbers in errors are file line numbers (the
/// header is line 1).
pub fn read_csv<R: Read>(reader: R, source: &str, options: LoadOptions) -> Result<PairedDataset> {
    let mut csv = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| IngestError::Malformed(e.to_string()))?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(IngestError::Empty);
    }
    if headers.iter().map(str::trim).ne(HEADER) {
        return Err(IngestError::Malformed(format!(
            "expected header {:?}, found {:?}",
            HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut records = Vec::new();
    let mut lines = Vec::new();
    for row in csv.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            IngestError::Parse {
                row: line,
                column: String::new(),
                reason: e.to_string(),
            }
        })?;
        let line = row.position().map_or(records.len() + 2, |p| p.line() as usize);
        let raw = RawRecord {
            country: row[0].to_string(),
            head_name: row[1].to_string(),
            title: row[2].to_string(),
            count_a1: RawCount::Text(row[3].to_string()),
            count_a2: RawCount::Text(row[4].to_string()),
            collected_at: row[5].to_string(),
        };
        records.push(raw.into_record(line, options)?);
        lines.push(line);
    }
    PairedDataset::with_row_numbers(records, source.to_string(), |i| lines[i])
}

/// Read a JSON dataset. Row numbers in errors are 1-based array positions.
pub fn read_json<R: Read>(reader: R, source: &str, options: LoadOptions) -> Result<PairedDataset> {
    let raw: Vec<RawRecord> =
        serde_json::from_reader(reader).map_err(|e| IngestError::Malformed(e.to_string()))?;
    let records = raw
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.into_record(i + 1, options))
        .collect::<Result<Vec<_>>>()?;
    PairedDataset::new(records, source)
}

pub fn load_dataset(path: &Path, format: DataFormat, options: LoadOptions) -> Result<PairedDataset> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let source = path.display().to_string();
    match format {
        DataFormat::Csv => read_csv(file, &source, options),
        DataFormat::Json => read_json(file, &source, options),
    }
}

pub fn write_csv<W: Write>(dataset: &PairedDataset, writer: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    for r in &dataset.records {
        csv.serialize(RawRecord::from_record(r))
            .map_err(|e| IngestError::Malformed(e.to_string()))?;
    }
    csv.flush().map_err(|e| IngestError::Malformed(e.to_string()))
}

pub fn write_json<W: Write>(dataset: &PairedDataset, writer: W) -> Result<()> {
    let rows: Vec<RawRecord> = dataset.records.iter().map(RawRecord::from_record).collect();
    serde_json::to_writer_pretty(writer, &rows).map_err(|e| IngestError::Malformed(e.to_string()))
}

pub fn save_dataset(dataset: &PairedDataset, path: &Path, format: DataFormat) -> Result<()> {
    let io_err = |source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = File::create(path).map_err(io_err)?;
    match format {
        DataFormat::Csv => write_csv(dataset, &mut file)?,
        DataFormat::Json => write_json(dataset, &mut file)?,
    }
    file.flush().map_err(io_err)
}

/// The unquoted (A1) and quoted (A2) query texts for one record.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryPair {
    pub a1: String,
    pub a2: String,
}

impl QueryPair {
    /// `a1 = "<head_name> <title> of <country>"`, `a2 = a1` in double quotes.
    /// The title is used verbatim (president, king, emir, ...).
    pub fn new(head_name: &str, title: &str, country: &str) -> Result<Self> {
        for (field, value) in [("head_name", head_name), ("title", title), ("country", country)] {
            if value.trim().is_empty() {
                return Err(IngestError::EmptyField(field));
            }
        }
        let a1 = format!("{head_name} {title} of {country}");
        let a2 = format!("\"{a1}\"");
        Ok(QueryPair { a1, a2 })
    }
}

pub fn build_query(record: &CountRecord) -> Result<QueryPair> {
    QueryPair::new(&record.head_name, &record.title, &record.country)
}

/// Source of search-result counts. Calls within one collection session are
/// made sequentially.
pub trait CountProvider {
    fn count(&mut self, query: &str) -> Result<u64>;
}

/// Counts looked up from a local `query,count` table.
#[derive(Debug, Clone, Default)]
pub struct FixtureProvider {
    counts: HashMap<String, u64>,
}

impl FixtureProvider {
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        FixtureProvider {
            counts: pairs.into_iter().map(|(q, c)| (q.into(), c)).collect(),
        }
    }

    /// Read a two-column CSV with header `query,count`.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::Reader::from_reader(reader);
        let headers = csv
            .headers()
            .map_err(|e| IngestError::Malformed(e.to_string()))?
            .clone();
        if headers.iter().map(str::trim).ne(["query", "count"]) {
            return Err(IngestError::Malformed(
                "fixture header must be \"query,count\"".into(),
            ));
        }
        let mut counts = HashMap::new();
        for row in csv.records() {
            let row = row.map_err(|e| IngestError::Malformed(e.to_string()))?;
            let line = row.position().map_or(0, |p| p.line() as usize);
            let count = parse_count(&row[1], false).map_err(|reason| IngestError::Parse {
                row: line,
                column: "count".into(),
                reason,
            })?;
            counts.insert(row[0].to_string(), count);
        }
        Ok(FixtureProvider { counts })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| {
            IngestError::ProviderUnavailable(format!("{}: {e}", path.display()))
        })?;
        Self::from_reader(file)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl CountProvider for FixtureProvider {
    fn count(&mut self, query: &str) -> Result<u64> {
        self.counts
            .get(query)
            .copied()
            .ok_or_else(|| IngestError::UnknownQuery(query.to_string()))
    }
}

/// Counts for both queries of a pair, A1 first.
pub fn fetch_counts<P: CountProvider + ?Sized>(provider: &mut P, query: &QueryPair) -> Result<(u64, u64)> {
    let a1 = provider.count(&query.a1)?;
    let a2 = provider.count(&query.a2)?;
    Ok((a1, a2))
}

/// Build the queries for one head of state, fetch both counts, and stamp the
/// record with the session timestamp.
pub fn collect_record<P: CountProvider + ?Sized>(
    provider: &mut P,
    country: &str,
    head_name: &str,
    title: &str,
    session_at: DateTime<FixedOffset>,
) -> Result<CountRecord> {
    let query = QueryPair::new(head_name, title, country)?;
    let (count_a1, count_a2) = fetch_counts(provider, &query)?;
    Ok(CountRecord {
        country: country.to_string(),
        head_name: head_name.to_string(),
        title: title.to_string(),
        count_a1,
        count_a2,
        collected_at: session_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "country,head_name,title,count_a1,count_a2,collected_at\n";

    fn csv(body: &str, options: LoadOptions) -> Result<PairedDataset> {
        read_csv(format!("{HEAD}{body}").as_bytes(), "test", options)
    }

    #[test]
    fn query_texts() {
        let q = QueryPair::new("Barack Obama", "president", "United States").unwrap();
        assert_eq!(q.a1, "Barack Obama president of United States");
        let q = QueryPair::new("Ram Baran Yadav", "president", "Nepal").unwrap();
        assert_eq!(q.a2, "\"Ram Baran Yadav president of Nepal\"");
        assert_eq!(q.a2.trim_matches('"'), q.a1);
        assert_eq!(q.a2.len(), q.a1.len() + 2);
        assert!(matches!(
            QueryPair::new("", "king", "Morocco"),
            Err(IngestError::EmptyField("head_name"))
        ));
    }

    #[test]
    fn three_rows() {
        let d = csv(
            "A,a,president,10,1,2016-03-01T08:00:00Z\n\
             B,b,king,20,2,2016-03-01T09:00:00Z\n\
             C,c,emir,30,3,2016-03-01T10:30:00+02:00\n",
            LoadOptions::default(),
        )
        .unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.warnings.is_empty());
        assert_eq!(d.counts_a1(), [10, 20, 30]);
    }

    #[test]
    fn thousands_separators_need_the_flag() {
        let body = "United States,Barack Obama,president,\"93,500,000\",1,2016-03-01T08:00:00Z\n";
        let err = csv(body, LoadOptions::default()).unwrap_err();
        assert!(matches!(err, IngestError::Parse { row: 2, ref column, .. } if column == "count_a1"));
        let d = csv(body, LoadOptions { thousands_separators: true }).unwrap();
        assert_eq!(d.records[0].count_a1, 93_500_000);
        assert_eq!(parse_count("93 500 000", true), Ok(93_500_000));
        assert!(parse_count("93,50,000", true).is_err());
        assert!(parse_count("93,500 000", true).is_err());
        assert!(parse_count("-5", true).is_err());
        assert!(parse_count("1.5", false).is_err());
    }

    #[test]
    fn quoted_above_unquoted_is_a_warning() {
        let d = csv("A,a,president,5,9,2016-03-01T08:00:00Z\n", LoadOptions::default()).unwrap();
        assert_eq!(
            d.warnings,
            vec![DatasetWarning::QuotedExceedsUnquoted {
                row: 2,
                country: "A".into(),
                count_a1: 5,
                count_a2: 9
            }]
        );
    }

    #[test]
    fn long_window_is_a_warning() {
        let d = csv(
            "A,a,president,5,1,2016-03-01T08:00:00Z\nB,b,president,5,1,2016-03-01T20:00:01Z\n",
            LoadOptions::default(),
        )
        .unwrap();
        assert!(matches!(
            d.warnings.as_slice(),
            [DatasetWarning::LongCollectionWindow { hours }] if *hours > 12.0
        ));
    }

    #[test]
    fn errors() {
        let dup = csv(
            "A,a,president,5,1,2016-03-01T08:00:00Z\nA,a,president,6,1,2016-03-01T08:00:00Z\n",
            LoadOptions::default(),
        );
        assert!(matches!(dup, Err(IngestError::Duplicate { row: 3, .. })));
        assert!(matches!(csv("", LoadOptions::default()), Err(IngestError::Empty)));
        assert!(matches!(
            read_csv("".as_bytes(), "t", LoadOptions::default()),
            Err(IngestError::Empty)
        ));
        let bad_time = csv("A,a,president,5,1,yesterday\n", LoadOptions::default());
        assert!(matches!(bad_time, Err(IngestError::Parse { ref column, .. }) if column == "collected_at"));
        let bad_header = read_csv("a,b\n1,2\n".as_bytes(), "t", LoadOptions::default());
        assert!(matches!(bad_header, Err(IngestError::Malformed(_))));
        let short_row = csv("A,a,president,5\n", LoadOptions::default());
        assert!(matches!(short_row, Err(IngestError::Parse { row: 2, .. })));
    }

    #[test]
    fn json_accepts_numbers_and_strings() {
        let text = r#"[
            {"country":"Laos","head_name":"Choummaly Sayasone","title":"president",
             "count_a1":1540,"count_a2":0,"collected_at":"2016-03-01T08:00:00Z"},
            {"country":"X","head_name":"Y","title":"king",
             "count_a1":"1 000","count_a2":"12","collected_at":"2016-03-01T08:00:00"}
        ]"#;
        let d = read_json(text.as_bytes(), "t", LoadOptions { thousands_separators: true }).unwrap();
        assert_eq!(d.counts_a2(), [0, 12]);
        assert_eq!(d.counts_a1(), [1540, 1000]);
        assert!(read_json(text.as_bytes(), "t", LoadOptions::default()).is_err());
        assert!(matches!(
            read_json("[]".as_bytes(), "t", LoadOptions::default()),
            Err(IngestError::Empty)
        ));
    }

    #[test]
    fn fixture_provider() {
        let mut p = FixtureProvider::from_reader(
            "query,count\nBarack Obama president of United States,93500000\n\"\"\"Choummaly Sayasone president of Laos\"\"\",0\n"
                .as_bytes(),
        )
        .unwrap();
        let q = QueryPair::new("Barack Obama", "president", "United States").unwrap();
        assert_eq!(p.count(&q.a1).unwrap(), 93_500_000);
        assert!(matches!(fetch_counts(&mut p, &q), Err(IngestError::UnknownQuery(_))));
        let laos = QueryPair::new("Choummaly Sayasone", "president", "Laos").unwrap();
        assert_eq!(p.count(&laos.a2).unwrap(), 0);
        assert!(matches!(
            FixtureProvider::from_path(Path::new("/nonexistent/fixture.csv")),
            Err(IngestError::ProviderUnavailable(_))
        ));
    }

    #[test]
    fn collect_stamps_one_session() {
        let mut p = FixtureProvider::from_pairs([
            ("K president of N", 40u64),
            ("\"K president of N\"", 4),
        ]);
        let at = parse_timestamp("2016-03-01T08:00:00Z").unwrap();
        let r = collect_record(&mut p, "N", "K", "president", at).unwrap();
        assert_eq!((r.count_a1, r.count_a2, r.collected_at), (40, 4, at));
    }
}
