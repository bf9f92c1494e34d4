//! Bibliographic records to co-authorship and citation networks.
//!
//! Records are CSV with header `record_id,date,authors,cited_authors`.
//! `date` is `YYYY` or `YYYY-MM`; both name fields are `;`-joined lists.
//! Alias maps are lines of `canonical<TAB>alias1;alias2;...` with `#`
//! comments.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::temporal_net::{Resolution, TemporalNetwork, Time};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RecordDate {
    pub year: i32,
    pub month: Option<u8>,
}

impl RecordDate {
    pub fn parse(s: &str) -> Option<RecordDate> {
        let digits = |p: &str, n: usize| p.len() == n && p.bytes().all(|b| b.is_ascii_digit());
        match s.split_once('-') {
            None if digits(s, 4) => Some(RecordDate {
                year: s.parse().ok()?,
                month: None,
            }),
            Some((y, m)) if digits(y, 4) && digits(m, 2) => {
                let month: u8 = m.parse().ok()?;
                (1..=12).contains(&month).then_some(RecordDate {
                    year: y.parse().ok()?,
                    month: Some(month),
                })
            }
            _ => None,
        }
    }
}

impl fmt::Display for RecordDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.month {
            Some(m) => write!(f, "{:04}-{:02}", self.year, m),
            None => write!(f, "{:04}", self.year),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiblioRecord {
    pub record_id: String,
    pub date: RecordDate,
    pub authors: Vec<String>,
    pub cited_authors: Vec<String>,
}

fn split_names(field: &str) -> Vec<String> {
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

pub fn parse_records(path: &Path) -> Result<Vec<BiblioRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_records_str(&text, &path.display().to_string())
}

/// Parses record CSV text; `source` names the input in error messages.
pub fn parse_records_str(text: &str, source: &str) -> Result<Vec<BiblioRecord>> {
    let err = |line: u64, msg: String| Error::Parse {
        path: source.to_string(),
        line,
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    let mut header_seen = false;
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            err(line, e.to_string())
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if !header_seen {
            let fields: Vec<&str> = row.iter().map(str::trim).collect();
            if fields != ["record_id", "date", "authors", "cited_authors"] {
                return Err(err(
                    line,
                    "expected header record_id,date,authors,cited_authors".into(),
                ));
            }
            header_seen = true;
            continue;
        }
        if row.len() == 1 && row[0].trim().is_empty() {
            continue;
        }
        if row.len() != 4 {
            return Err(err(
                line,
                format!("expected 4 columns, found {}", row.len()),
            ));
        }
        let record_id = row[0].trim().to_string();
        if record_id.is_empty() {
            return Err(err(line, "empty record_id".into()));
        }
        let date = RecordDate::parse(row[1].trim()).ok_or_else(|| {
            err(
                line,
                format!("bad date {:?}: expected YYYY or YYYY-MM", &row[1]),
            )
        })?;
        let authors = split_names(&row[2]);
        if authors.is_empty() {
            return Err(err(line, "record has no authors".into()));
        }
        records.push(BiblioRecord {
            record_id,
            date,
            authors,
            cited_authors: split_names(&row[3]),
        });
    }
    if !header_seen {
        return Err(err(1, "missing header".into()));
    }
    Ok(records)
}

/// Canonical name for each alias.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AliasMap {
    aliases: BTreeMap<String, Vec<String>>,
    canonical_of: HashMap<String, String>,
}

impl AliasMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical_of.is_empty()
    }

    pub fn alias_count(&self) -> usize {
        self.canonical_of.len()
    }

    pub fn insert<S: AsRef<str>>(&mut self, canonical: &str, aliases: &[S]) -> Result<()> {
        if self.canonical_of.contains_key(canonical) {
            return Err(Error::AliasConflict(format!(
                "canonical {canonical:?} is also an alias"
            )));
        }
        for alias in aliases {
            let alias = alias.as_ref();
            if alias == canonical {
                continue;
            }
            if self.aliases.contains_key(alias) {
                return Err(Error::AliasConflict(format!(
                    "alias {alias:?} is also a canonical name"
                )));
            }
            match self.canonical_of.get(alias) {
                Some(c) if c != canonical => {
                    return Err(Error::AliasConflict(format!(
                        "alias {alias:?} maps to both {c:?} and {canonical:?}"
                    )))
                }
                Some(_) => {}
                None => {
                    self.canonical_of
                        .insert(alias.to_string(), canonical.to_string());
                    self.aliases
                        .entry(canonical.to_string())
                        .or_default()
                        .push(alias.to_string());
                }
            }
        }
        self.aliases.entry(canonical.to_string()).or_default();
        Ok(())
    }

    pub fn parse(text: &str, source: &str) -> Result<AliasMap> {
        let mut map = AliasMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (canonical, rest) = line.split_once('\t').ok_or_else(|| Error::Parse {
                path: source.to_string(),
                line: i as u64 + 1,
                msg: "expected canonical<TAB>aliases".into(),
            })?;
            map.insert(canonical.trim(), &split_names(rest))?;
        }
        Ok(map)
    }

    pub fn from_file(path: &Path) -> Result<AliasMap> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn resolve<'a>(&'a self, name: &'a str) -> &'a str {
        self.canonical_of
            .get(name)
            .map(String::as_str)
            .unwrap_or(name)
    }
}

/// Replaces every alias by its canonical name and drops repeated authors
/// within a record. Cited names keep their multiplicity.
pub fn apply_aliases(records: &[BiblioRecord], map: &AliasMap) -> Vec<BiblioRecord> {
    records
        .iter()
        .map(|r| {
            let mut seen = HashSet::new();
            let authors = r
                .authors
                .iter()
                .map(|a| map.resolve(a).to_string())
                .filter(|a| seen.insert(a.clone()))
                .collect();
            let cited_authors = r
                .cited_authors
                .iter()
                .map(|a| map.resolve(a).to_string())
                .collect();
            BiblioRecord {
                record_id: r.record_id.clone(),
                date: r.date,
                authors,
                cited_authors,
            }
        })
        .collect()
}

fn start_year(records: &[BiblioRecord]) -> Option<i32> {
    records.iter().map(|r| r.date.year).min()
}

fn sorted_by_time<'a>(
    records: &'a [BiblioRecord],
    time: impl Fn(&BiblioRecord) -> Time,
) -> Vec<(Time, &'a BiblioRecord)> {
    let mut out: Vec<_> = records.iter().map(|r| (time(r), r)).collect();
    out.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.record_id.cmp(&b.1.record_id))
    });
    out
}

/// Undirected monthly network: one event per author pair per record, and
/// every author born at their first record.
pub fn build_coauthorship(records: &[BiblioRecord]) -> Result<TemporalNetwork> {
    let mut net = TemporalNetwork::new(Resolution::Monthly, false);
    let Some(start) = start_year(records) else {
        return Ok(net);
    };
    net.set_origin_year(Some(start));
    let missing = records.iter().filter(|r| r.date.month.is_none()).count();
    if missing > 0 {
        log::warn!("{missing} record(s) have no month; placed in January");
    }
    let month_index = |r: &BiblioRecord| {
        ((r.date.year - start) * 12 + r.date.month.unwrap_or(1) as i32 - 1) as Time
    };
    for (t, r) in sorted_by_time(records, month_index) {
        let ids: Vec<_> = r.authors.iter().map(|a| net.add_node(a, t)).collect();
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                net.connect(t, ids[i], ids[j])?;
            }
        }
    }
    Ok(net)
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct CitationOptions {
    /// Keep only cited names that author some record.
    pub restrict: bool,
    /// Skip citations of a record's own authors.
    pub drop_self_citations: bool,
}

/// Directed yearly network from each record (as a non-selectable source)
/// to every cited author, one event per occurrence. A cited author is born
/// at their first citation.
pub fn build_citation(
    records: &[BiblioRecord],
    options: CitationOptions,
) -> Result<TemporalNetwork> {
    let mut net = TemporalNetwork::new(Resolution::Yearly, true);
    let Some(start) = start_year(records) else {
        return Ok(net);
    };
    net.set_origin_year(Some(start));
    let authors: HashSet<&str> = records
        .iter()
        .flat_map(|r| r.authors.iter().map(String::as_str))
        .collect();
    for (t, r) in sorted_by_time(records, |r| (r.date.year - start) as Time) {
        let own: HashSet<&str> = r.authors.iter().map(String::as_str).collect();
        let cited: Vec<&str> = r
            .cited_authors
            .iter()
            .map(String::as_str)
            .filter(|c| !options.restrict || authors.contains(c))
            .filter(|c| !options.drop_self_citations || !own.contains(c))
            .collect();
        if cited.is_empty() {
            continue;
        }
        let source = net.add_source_node(&r.record_id, t);
        for c in cited {
            let target = net.add_node(c, t);
            net.connect(t, source, target)?;
        }
    }
    Ok(net)
}
