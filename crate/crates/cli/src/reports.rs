//! CSV and JSON forms of dimension tables and check reports.

use std::io::{Read, Write};

use qci_tate::engine::{CrossCheck, TableEntry};
use qci_tate::{Coefficient, DimensionTable, Error, Method, Variant};
use serde::{Deserialize, Serialize};

use crate::error::CliResult;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub degree: i64,
    pub dimension: Option<usize>,
    pub method: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    pub variant: String,
    pub coefficient: String,
    pub entries: Vec<EntryDoc>,
}

fn entry_doc(e: &TableEntry) -> EntryDoc {
    EntryDoc {
        degree: e.degree,
        dimension: e.value,
        method: e.method.label(),
        source: e.method.source_text(),
    }
}

fn entry_from_doc(d: &EntryDoc) -> qci_tate::Result<TableEntry> {
    let method = Method::from_parts(&d.method, &d.source)?;
    if d.dimension.is_none() != matches!(method, Method::Unavailable(_)) {
        return Err(Error::Parse(format!(
            "degree {}: dimension and method disagree",
            d.degree
        )));
    }
    Ok(TableEntry {
        degree: d.degree,
        value: d.dimension,
        method,
    })
}

pub fn table_doc(t: &DimensionTable) -> TableDoc {
    TableDoc {
        variant: t.variant.to_string(),
        coefficient: t.coefficient.to_string(),
        entries: t.entries.iter().map(entry_doc).collect(),
    }
}

pub fn table_from_doc(doc: &TableDoc) -> qci_tate::Result<DimensionTable> {
    Ok(DimensionTable {
        variant: doc.variant.parse()?,
        coefficient: doc.coefficient.parse()?,
        entries: doc
            .entries
            .iter()
            .map(entry_from_doc)
            .collect::<qci_tate::Result<_>>()?,
    })
}

/// Columns `degree,dimension,method,source`; an unavailable dimension is empty.
pub fn write_csv<W: Write>(t: &DimensionTable, w: W) -> CliResult<()> {
    let mut out = csv::Writer::from_writer(w);
    for e in &t.entries {
        out.serialize(entry_doc(e))?;
    }
    out.flush().map_err(|e| crate::error::CliError::io("<csv>", e))?;
    Ok(())
}

/// CSV carries only the per-degree columns, so the variant and coefficient
/// are supplied by the caller.
pub fn read_csv<R: Read>(r: R, variant: Variant, coefficient: Coefficient) -> CliResult<DimensionTable> {
    let mut reader = csv::Reader::from_reader(r);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["degree", "dimension", "method", "source"] {
        return Err(Error::Parse(format!("unexpected csv header {headers:?}")).into());
    }
    let mut entries = Vec::new();
    for row in reader.deserialize() {
        let doc: EntryDoc = row?;
        entries.push(entry_from_doc(&doc)?);
    }
    Ok(DimensionTable {
        variant,
        coefficient,
        entries,
    })
}

pub fn write_json<W: Write>(t: &DimensionTable, mut w: W) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut w, &table_doc(t))?;
    writeln!(w).map_err(|e| crate::error::CliError::io("<json>", e))?;
    Ok(())
}

pub fn read_json<R: Read>(r: R) -> CliResult<DimensionTable> {
    let doc: TableDoc = serde_json::from_reader(r)?;
    Ok(table_from_doc(&doc)?)
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub lhs: serde_json::Value,
    pub rhs: serde_json::Value,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckRecord {
    pub fn compare<T: Serialize + PartialEq>(check: impl Into<String>, lhs: T, rhs: T) -> Self {
        CheckRecord {
            check: check.into(),
            pass: lhs == rhs,
            lhs: serde_json::to_value(&lhs).expect("plain data"),
            rhs: serde_json::to_value(&rhs).expect("plain data"),
            error: None,
        }
    }

    pub fn failed(check: impl Into<String>, err: &Error) -> Self {
        CheckRecord {
            check: check.into(),
            lhs: serde_json::Value::Null,
            rhs: serde_json::Value::Null,
            pass: false,
            error: Some(err.to_string()),
        }
    }

    pub fn is_resource_failure(&self) -> bool {
        !self.pass && self.error.as_deref().is_some_and(|e| e.starts_with(RESOURCE_PREFIX))
    }
}

/// Prefix of the resource error's display text.
const RESOURCE_PREFIX: &str = "resource";

pub fn cross_check_records(checks: &[CrossCheck]) -> Vec<CheckRecord> {
    checks
        .iter()
        .map(|c| {
            let values: Vec<serde_json::Value> = c
                .attempts
                .iter()
                .map(|a| match &a.value {
                    Ok(v) => serde_json::json!({"route": a.route, "dimension": v}),
                    Err(e) => serde_json::json!({"route": a.route, "error": e}),
                })
                .collect();
            let dumps: Vec<String> = c.dumps.iter().map(|p| p.display().to_string()).collect();
            let mut distinct: Vec<usize> = c.attempts.iter().filter_map(|a| a.value.clone().ok()).collect();
            distinct.sort_unstable();
            distinct.dedup();
            CheckRecord {
                check: format!("degree {}", c.degree),
                lhs: serde_json::Value::Array(values),
                rhs: serde_json::json!({"distinct": distinct, "dumps": dumps}),
                pass: c.agree,
                error: None,
            }
        })
        .collect()
}

pub fn write_records<W: Write>(records: &[CheckRecord], mut w: W) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut w, records)?;
    writeln!(w).map_err(|e| crate::error::CliError::io("<json>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qci_tate::{FieldSpec, Policy, QciSpec, TateRequest};

    fn sample() -> DimensionTable {
        let a = QciSpec::codim2(FieldSpec::Rational, 2, 2, FieldSpec::Rational.from_i64(2)).unwrap();
        let req = TateRequest::new(a, Variant::Cohomology, -3, 4)
            .with_policy(Policy::BarOnly)
            .with_budget(2000);
        qci_tate::tate_dims(&req).unwrap()
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        assert!(t.entries.iter().any(|e| e.value.is_none()));
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("degree,dimension,method,source\n"), "{text}");
        assert!(text.contains("-3,0,duality,homology|2|nu:-1|oracle"), "{text}");
        assert_eq!(read_csv(&buf[..], t.variant, t.coefficient).unwrap(), t);
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let mut buf = Vec::new();
        write_json(&t, &mut buf).unwrap();
        assert_eq!(read_json(&buf[..]).unwrap(), t);
    }

    #[test]
    fn inconsistent_rows_are_rejected() {
        let text = "degree,dimension,method,source\n1,,oracle,\n";
        assert!(read_csv(text.as_bytes(), Variant::Homology, Coefficient::Regular).is_err());
        let text = "degree,dim,method,source\n";
        assert!(read_csv(text.as_bytes(), Variant::Homology, Coefficient::Regular).is_err());
    }

    #[test]
    fn resource_records() {
        let err = Error::Resource {
            degree: 3,
            needed: 10,
            budget: 5,
        };
        assert!(CheckRecord::failed("x", &err).is_resource_failure());
        assert!(!CheckRecord::failed("x", &Error::Usage("u".into())).is_resource_failure());
        assert!(!CheckRecord::compare("x", 1, 2).pass);
    }
}
