//! Frequency tables as two-column TSV: `label<TAB>count`, `#` comments.

use thiserror::Error;

use crate::rank::FrequencyTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TsvError {
    pub line: usize,
    pub message: String,
}

pub fn parse_frequency_table(text: &str) -> Result<FrequencyTable, TsvError> {
    let mut table = FrequencyTable::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| TsvError { line, message };
        let row = raw.trim_end_matches('\r');
        if row.trim().is_empty() || row.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = row.split('\t').collect();
        let [label, count] = fields.as_slice() else {
            return Err(err(format!("expected 2 tab-separated columns, found {}", fields.len())));
        };
        let label = label.trim();
        if label.is_empty() {
            return Err(err("empty label".into()));
        }
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| err(format!("count `{}` is not a nonnegative integer", count.trim())))?;
        if table.get(label).is_some() {
            return Err(err(format!("label \"{label}\" appears twice")));
        }
        table.insert(label, count);
    }
    Ok(table)
}
