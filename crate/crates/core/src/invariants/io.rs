//! JSON table files.
//!
//! ```json
//! { "kind": "W", "N": 8, "k": 8,
//!   "entries": [ { "d": 1, "a": 2, "b": 2, "insertions": [2], "value": "83871744" } ] }
//! ```
//!
//! GW entries omit `a` and `b`. Insertions are written sorted descending and
//! values as `"p"` or `"p/q"`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Context, GwKey, InsertionMultiset, InvariantKey, InvariantTable, TableKind, WKey};
use crate::error::{Error, Result};
use crate::scalar;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    kind: String,
    #[serde(rename = "N")]
    n: i64,
    k: i64,
    entries: Vec<EntryFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    d: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<i64>,
    insertions: Vec<i64>,
    value: String,
}

fn field_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn exponent(v: i64, location: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| field_error(location, format!("expected a nonnegative integer, got {v}")))
}

/// Parses and validates a table document.
pub fn parse_table(text: &str) -> Result<InvariantTable> {
    let file: TableFile = serde_json::from_str(text).map_err(|e| {
        field_error(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })?;
    let kind = match file.kind.as_str() {
        "W" => TableKind::W,
        "GW" => TableKind::Gw,
        other => return Err(field_error("kind", format!("expected \"W\" or \"GW\", got {other:?}"))),
    };
    let n = exponent(file.n, "N")?;
    let k = exponent(file.k, "k")?;
    let context = Context::new(n, k).map_err(|e| field_error("N/k", e.to_string()))?;

    let mut parsed = Vec::with_capacity(file.entries.len());
    for (i, entry) in file.entries.iter().enumerate() {
        let at = |f: &str| format!("entries[{i}].{f}");
        let d = u32::try_from(entry.d)
            .map_err(|_| field_error(at("d"), format!("negative degree {}", entry.d)))?;
        let insertions = entry
            .insertions
            .iter()
            .enumerate()
            .map(|(j, &c)| exponent(c, &at(&format!("insertions[{j}]"))))
            .collect::<Result<Vec<_>>>()?;
        let insertions = InsertionMultiset::from_exponents(insertions);
        let key = match kind {
            TableKind::W => {
                let a = entry.a.ok_or_else(|| field_error(at("a"), "W entries need \"a\""))?;
                let b = entry.b.ok_or_else(|| field_error(at("b"), "W entries need \"b\""))?;
                let a = exponent(a, &at("a"))?;
                let b = exponent(b, &at("b"))?;
                InvariantKey::W(WKey::new(context, a, b, insertions, d))
            }
            TableKind::Gw => {
                if entry.a.is_some() || entry.b.is_some() {
                    return Err(field_error(at("a"), "GW entries carry no boundary exponents"));
                }
                InvariantKey::Gw(GwKey::new(context, insertions, d))
            }
        };
        let value = scalar::parse(&entry.value).map_err(|m| field_error(at("value"), m))?;
        parsed.push((i, key, value));
    }

    let mut table = InvariantTable::new(kind, context);
    let mut problems = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for (i, key, value) in parsed {
        if let Some(reason) = table.storage_problem(&key) {
            problems.push(format!("entries[{i}] {key}: {reason}"));
            continue;
        }
        if let Some(first) = seen.insert(key.clone(), i) {
            problems.push(format!("entries[{i}] {key}: duplicate of entries[{first}]"));
            continue;
        }
        table.set_unchecked(key, value);
    }
    if !problems.is_empty() {
        return Err(Error::Rejected(problems));
    }
    Ok(table)
}

/// Loads and validates a table file.
pub fn load_table(path: impl AsRef<Path>) -> Result<InvariantTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_table(&text)
}

/// Canonical JSON text of a table; byte-identical for equal tables.
pub fn render_table(table: &InvariantTable) -> String {
    let entries = table
        .entries()
        .map(|(key, value)| {
            let (d, a, b, insertions) = match key {
                InvariantKey::W(w) => (w.d, Some(w.a as i64), Some(w.b as i64), &w.insertions),
                InvariantKey::Gw(g) => (g.d, None, None, &g.insertions),
            };
            EntryFile {
                d: d as i64,
                a,
                b,
                insertions: insertions.descending().into_iter().map(i64::from).collect(),
                value: scalar::format(value),
            }
        })
        .collect();
    let file = TableFile {
        kind: table.kind().to_string(),
        n: table.context().n as i64,
        k: table.context().k as i64,
        entries,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("table serializes");
    text.push('\n');
    text
}

pub fn store_table(table: &InvariantTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_table(table)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
