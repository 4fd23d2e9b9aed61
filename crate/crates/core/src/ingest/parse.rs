//! Readers for the supported bibliographic export formats.

use std::collections::HashSet;
use std::io::{self, Read};

use super::record::{Corpus, CorpusRecord, InputFormat, Provenance, MAX_YEAR, MIN_YEAR};
use crate::error::{Result, TomError};

/// Parses records from `source`. Malformed rows are skipped and counted in
/// the corpus provenance.
pub fn parse_records(mut source: impl Read, format: InputFormat, source_name: &str) -> Result<Corpus> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let text = String::from_utf8(bytes).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(&text);

    let mut sink = RecordSink::default();
    match format {
        InputFormat::Csv => parse_csv(text, &mut sink),
        InputFormat::Jsonl => parse_jsonl(text, &mut sink),
        InputFormat::WosTab => parse_wos(text, &mut sink),
    }

    if sink.records.is_empty() {
        return Err(TomError::EmptyCorpus { source_name: source_name.to_string(), skipped: sink.skipped });
    }
    if sink.skipped > 0 {
        log::warn!("{source_name}: skipped {} malformed record(s)", sink.skipped);
    }
    let accepted = sink.records.len();
    Ok(Corpus {
        records: sink.records,
        provenance: Provenance { source: source_name.to_string(), format, accepted, skipped: sink.skipped },
    })
}

#[derive(Default)]
struct RecordSink {
    records: Vec<CorpusRecord>,
    ids: HashSet<String>,
    skipped: usize,
}

impl RecordSink {
    fn accept(&mut self, record: Option<CorpusRecord>) {
        match record {
            Some(r) if !r.id.is_empty() && valid_year(r.year) && !self.ids.contains(&r.id) => {
                self.ids.insert(r.id.clone());
                self.records.push(r);
            }
            _ => self.skipped += 1,
        }
    }
}

fn valid_year(year: Option<i32>) -> bool {
    year.is_none_or(|y| (MIN_YEAR..=MAX_YEAR).contains(&y))
}

/// `None` marks an unparseable year; an empty field is `Some(None)`.
fn parse_year(field: &str) -> Option<Option<i32>> {
    let field = field.trim();
    if field.is_empty() {
        return Some(None);
    }
    field.parse::<i32>().ok().map(Some)
}

fn split_list(field: &str) -> Vec<String> {
    field.split(';').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

struct Columns {
    width: usize,
    id: Option<usize>,
    year: Option<usize>,
    title: Option<usize>,
    keywords: Option<usize>,
    references: Option<usize>,
    abstract_text: Option<usize>,
}

impl Columns {
    fn locate(header: &csv::StringRecord, names: [&[&str]; 6]) -> Self {
        let find = |aliases: &[&str]| header.iter().position(|h| aliases.iter().any(|a| h.trim().eq_ignore_ascii_case(a)));
        Columns {
            width: header.len(),
            id: find(names[0]),
            year: find(names[1]),
            title: find(names[2]),
            keywords: find(names[3]),
            references: find(names[4]),
            abstract_text: find(names[5]),
        }
    }

    fn record(&self, row: &csv::StringRecord, harvest_reference: fn(&str) -> String) -> Option<CorpusRecord> {
        let get = |col: Option<usize>| col.and_then(|c| row.get(c)).unwrap_or("");
        let id = get(self.id).trim().to_string();
        let year = parse_year(get(self.year))?;
        let abstract_text = Some(get(self.abstract_text).trim()).filter(|s| !s.is_empty()).map(String::from);
        Some(CorpusRecord {
            id,
            year,
            title: get(self.title).trim().to_string(),
            author_keywords: split_list(get(self.keywords)),
            reference_titles: split_list(get(self.references)).iter().map(|r| harvest_reference(r)).collect(),
            abstract_text,
        })
    }
}

fn parse_csv(text: &str, sink: &mut RecordSink) {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let Ok(header) = reader.headers().cloned() else {
        return;
    };
    let cols = Columns::locate(
        &header,
        [&["id"], &["year"], &["title"], &["keywords"], &["references"], &["abstract"]],
    );
    for row in reader.records() {
        let record = match row {
            Ok(row) if row.len() == cols.width => cols.record(&row, |r| r.to_string()),
            _ => None,
        };
        sink.accept(record);
    }
}

fn parse_jsonl(text: &str, sink: &mut RecordSink) {
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        sink.accept(serde_json::from_str::<CorpusRecord>(line).ok());
    }
}

/// Web of Science tab-delimited export: a header row of field tags followed
/// by one tab-separated row per record.
fn parse_wos(text: &str, sink: &mut RecordSink) {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let Ok(header) = reader.headers().cloned() else {
        return;
    };
    let header = trim_trailing_empty(&header);
    let cols = Columns::locate(&header, [&["UT"], &["PY"], &["TI"], &["DE"], &["CR"], &["AB"]]);
    for row in reader.records() {
        let record = match row {
            Ok(row) => {
                let row = trim_trailing_empty(&row);
                if row.len() == cols.width || row.len() + 1 == cols.width {
                    cols.record(&row, cited_reference_title)
                } else {
                    None
                }
            }
            Err(_) => None,
        };
        sink.accept(record);
    }
}

fn trim_trailing_empty(rec: &csv::StringRecord) -> csv::StringRecord {
    let mut fields: Vec<&str> = rec.iter().collect();
    while fields.last().is_some_and(|f| f.trim().is_empty()) && fields.len() > 1 {
        fields.pop();
    }
    csv::StringRecord::from(fields)
}

/// Title segment of a cited-reference entry (`Author, Year, Source, Vol, Page`):
/// the third comma-separated field when present, else the entry verbatim.
pub fn cited_reference_title(entry: &str) -> String {
    let fields: Vec<&str> = entry.split(',').collect();
    if fields.len() >= 3 {
        fields[2].trim().to_string()
    } else {
        entry.trim().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows_in_file_order() {
        let data = "id,year,title,keywords\nd1,1999,On species,species concept;taxonomy\nd2,2001,Second,\nd3,1987,Third,a;b\n";
        let c = parse_records(data.as_bytes(), InputFormat::Csv, "t.csv").unwrap();
        assert_eq!(c.len(), 3);
        let ids: Vec<_> = c.records.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["d1", "d2", "d3"]);
        assert_eq!(c.records[0].author_keywords, ["species concept", "taxonomy"]);
        assert_eq!(c.records[1].year, Some(2001));
        assert!(c.records[1].author_keywords.is_empty());
    }

    #[test]
    fn missing_year_is_absent_not_skipped() {
        let data = "id,year,title,keywords,references\nd1,,Untitled,x,\n";
        let c = parse_records(data.as_bytes(), InputFormat::Csv, "t.csv").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.records[0].year, None);

        let no_year_column = "id,title\nd1,Untitled\n";
        let c = parse_records(no_year_column.as_bytes(), InputFormat::Csv, "t.csv").unwrap();
        assert_eq!(c.records[0].year, None);
    }

    #[test]
    fn wrong_column_count_is_skipped_and_counted() {
        let data = "id,year,title,keywords\nd1,1999,A,x\nd2,2000,B,y,extra\nd3,2001,C,z\n";
        let c = parse_records(data.as_bytes(), InputFormat::Csv, "t.csv").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.provenance.accepted, 2);
        assert_eq!(c.provenance.skipped, 1);
    }

    #[test]
    fn bad_years_and_duplicate_ids_are_skipped() {
        let data = "id,year,title\nd1,1999,A\nd1,2000,B\nd2,abc,C\nd3,1200,D\nd4,2010,E\n";
        let c = parse_records(data.as_bytes(), InputFormat::Csv, "t.csv").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.provenance.skipped, 3);
    }

    #[test]
    fn empty_and_invalid_sources() {
        let err = parse_records("id,year\n".as_bytes(), InputFormat::Csv, "e.csv").unwrap_err();
        assert!(matches!(err, TomError::EmptyCorpus { .. }));
        let err = parse_records(&[0xff, 0xfe, 0x00][..], InputFormat::Csv, "bin").unwrap_err();
        assert!(matches!(err, TomError::Io(_)));
        assert!(matches!("marc".parse::<InputFormat>(), Err(TomError::Config(_))));
    }

    #[test]
    fn jsonl_records() {
        let data = r#"{"id":"a","year":2000,"title":"T","author_keywords":["k"]}

{"id":"b"}
not json
"#;
        let c = parse_records(data.as_bytes(), InputFormat::Jsonl, "x.jsonl").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.provenance.skipped, 1);
        assert_eq!(c.records[1].year, None);
    }

    #[test]
    fn wos_tab_delimited() {
        let data = "PT\tAU\tTI\tDE\tPY\tCR\tUT\t\n\
J\tMayr, E\tThe species problem\tspecies concept; speciation\t1957\tDARWIN C, 1859, ORIGIN SPECIES; Mayr E, 1942, SYSTEMATICS ORIGIN SPE, P1\tWOS:1\t\n\
J\tHull, D\tIndividuality\t\t1978\t\tWOS:2\t\n\
J\tbroken row\n";
        let c = parse_records(data.as_bytes(), InputFormat::WosTab, "wos.txt").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.provenance.skipped, 1);
        let r = &c.records[0];
        assert_eq!(r.id, "WOS:1");
        assert_eq!(r.year, Some(1957));
        assert_eq!(r.author_keywords, ["species concept", "speciation"]);
        assert_eq!(r.reference_titles, ["ORIGIN SPECIES", "SYSTEMATICS ORIGIN SPE"]);
        assert!(c.records[1].author_keywords.is_empty());
    }

    #[test]
    fn reference_title_segment() {
        assert_eq!(cited_reference_title("Hey J, 2001, TRENDS ECOL EVOL, V16, P326"), "TRENDS ECOL EVOL");
        assert_eq!(cited_reference_title("Anonymous note"), "Anonymous note");
    }
}
