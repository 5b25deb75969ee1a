//! Wikidata link table: a two-column TSV mapping class IRIs to entity ids.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::triple::is_valid_qname;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WikidataError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

/// Parsed `classIRI<TAB>Qid` rows. The table ships as an editable data file;
/// nothing in the code asserts specific entity ids.
#[derive(Debug, Clone, Default)]
pub struct WikidataLinkTable {
    entries: BTreeMap<String, String>,
}

impl WikidataLinkTable {
    /// Parses TSV text: one `classIRI<TAB>Qid` row per line, `#` comments
    /// and blank lines allowed.
    pub fn parse_tsv(text: &str) -> Result<WikidataLinkTable, WikidataError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut cols = content.split('\t').map(str::trim).filter(|c| !c.is_empty());
            let (Some(class_iri), Some(qid), None) = (cols.next(), cols.next(), cols.next())
            else {
                return Err(WikidataError::Line {
                    line,
                    message: format!("expected two tab-separated columns, got '{content}'"),
                });
            };
            if !is_valid_qname(class_iri) {
                return Err(WikidataError::Line {
                    line,
                    message: format!("'{class_iri}' is not a qualified class IRI"),
                });
            }
            let valid_qid = qid.len() > 1
                && qid.starts_with('Q')
                && qid[1..].chars().all(|c| c.is_ascii_digit());
            if !valid_qid {
                return Err(WikidataError::Line {
                    line,
                    message: format!("'{qid}' is not a Wikidata entity id (Q + digits)"),
                });
            }
            entries.insert(class_iri.to_string(), qid.to_string());
        }
        Ok(WikidataLinkTable { entries })
    }

    pub fn get(&self, class_iri: &str) -> Option<&str> {
        self.entries.get(class_iri).map(|s| s.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
