//! The JSON algebra specification:
//!
//! ```json
//! {"field": {"type": "prime", "p": 3}, "c": 2, "exponents": [2, 2],
//!  "q": [["1", "2"], ["1/2", "1"]]}
//! ```
//!
//! Indices in error messages are 1-based, matching `q_12`.

use qci_tate::{Error, FieldSpec, QciSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliResult;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldDoc {
    Rational,
    Prime { p: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub field: FieldDoc,
    pub c: usize,
    pub exponents: Vec<usize>,
    pub q: Vec<Vec<String>>,
}

pub fn parse_spec(text: &str) -> CliResult<QciSpec> {
    let doc: SpecDoc = serde_json::from_str(text)?;
    Ok(spec_from_doc(&doc)?)
}

pub fn spec_from_doc(doc: &SpecDoc) -> qci_tate::Result<QciSpec> {
    let field = match doc.field {
        FieldDoc::Rational => FieldSpec::Rational,
        FieldDoc::Prime { p } => FieldSpec::prime(p)?,
    };
    let c = doc.c;
    if c == 0 {
        return Err(Error::Validation("c must be at least 1".into()));
    }
    if doc.exponents.len() != c {
        return Err(Error::Validation(format!(
            "{} exponents given for c = {c}",
            doc.exponents.len()
        )));
    }
    if let Some(i) = doc.exponents.iter().position(|&a| a < 2) {
        return Err(Error::Validation(format!(
            "exponent a_{} = {} is below 2",
            i + 1,
            doc.exponents[i]
        )));
    }
    if doc.q.len() != c || doc.q.iter().any(|row| row.len() != c) {
        return Err(Error::Validation(format!("q must be a {c}x{c} matrix")));
    }
    let mut q = Vec::with_capacity(c);
    for (i, row) in doc.q.iter().enumerate() {
        let mut parsed = Vec::with_capacity(c);
        for (j, text) in row.iter().enumerate() {
            let x = field
                .parse(text)
                .map_err(|e| Error::Parse(format!("q[{}][{}]: {e}", i + 1, j + 1)))?;
            if x.is_zero() {
                return Err(Error::Validation(format!("q_{}{} is zero", i + 1, j + 1)));
            }
            parsed.push(x);
        }
        q.push(parsed);
    }
    for i in 0..c {
        if !q[i][i].is_one() {
            return Err(Error::Validation(format!("q_{}{} must be 1", i + 1, i + 1)));
        }
        for j in i + 1..c {
            if !(&q[i][j] * &q[j][i]).is_one() {
                return Err(Error::Validation(format!(
                    "q_{i1}{j1} * q_{j1}{i1} != 1 at ({i1},{j1})",
                    i1 = i + 1,
                    j1 = j + 1
                )));
            }
        }
    }
    QciSpec::new(field, doc.exponents.clone(), q)
}

/// The document describing `a`, with scalars written exactly.
pub fn spec_to_doc(a: &QciSpec) -> SpecDoc {
    let field = match a.field() {
        FieldSpec::Rational => FieldDoc::Rational,
        FieldSpec::Prime(p) => FieldDoc::Prime { p },
    };
    SpecDoc {
        field,
        c: a.num_generators(),
        exponents: a.exponents().to_vec(),
        q: a.q_matrix()
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect())
            .collect(),
    }
}
