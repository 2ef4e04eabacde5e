use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

use super::eliminate;

/// An exact sparse matrix in coordinate form.
///
/// Entries are kept sorted by `(row, col)` with no duplicates and no stored
/// zeros, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Scalar)>,
}

impl SparseMatrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            field,
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        SparseMatrix {
            field,
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i, field.one())).collect(),
        }
    }

    /// Build from unordered triplets; duplicates are summed and zeros dropped.
    pub fn from_triplets<I>(field: FieldSpec, rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut raw: Vec<(usize, usize, Scalar)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Usage(format!("entry ({r}, {c}) outside a {rows}x{cols} matrix")));
            }
            if !field.contains(&v) {
                return Err(Error::Usage(format!("entry {v} is not in {field}")));
            }
            raw.push((r, c, v));
        }
        raw.sort_by_key(|a| (a.0, a.1));
        let mut entries: Vec<(usize, usize, Scalar)> = Vec::with_capacity(raw.len());
        for (r, c, v) in raw {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = &last.2 + &v,
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| !e.2.is_zero());
        Ok(SparseMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// Build from per-column lists of `(row, value)`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: Vec<Vec<(usize, Scalar)>>) -> Result<Self> {
        let cols = columns.len();
        let triplets = columns
            .into_iter()
            .enumerate()
            .flat_map(|(c, col)| col.into_iter().map(move |(r, v)| (r, c, v)));
        Self::from_triplets(field, rows, cols, triplets)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        match self.entries.binary_search_by(|e| (e.0, e.1).cmp(&(row, col))) {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_by_key(|a| (a.0, a.1));
        SparseMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.field, self.rows, self.cols);
        }
        SparseMatrix {
            entries: self.entries.iter().map(|(r, c, v)| (*r, *c, v * s)).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Usage("adding matrices of different shapes".into()));
        }
        Self::from_triplets(
            self.field,
            self.rows,
            self.cols,
            self.entries.iter().chain(&other.entries).cloned(),
        )
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in &other.entries {
            by_row[*r].push((*c, v));
        }
        let mut acc: HashMap<(usize, usize), Scalar> = HashMap::new();
        for (i, k, a) in &self.entries {
            for (j, b) in &by_row[*k] {
                let term = a * *b;
                acc.entry((*i, *j)).and_modify(|s| *s = &*s + &term).or_insert(term);
            }
        }
        Self::from_triplets(
            self.field,
            self.rows,
            other.cols,
            acc.into_iter().map(|((i, j), v)| (i, j, v)),
        )
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.rows];
        for (r, c, x) in &self.entries {
            out[*r] = &out[*r] + &(x * &v[*c]);
        }
        out
    }

    /// Entries grouped by column, rows ascending.
    pub fn columns(&self) -> Vec<Vec<(usize, Scalar)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, c, v) in &self.entries {
            cols[*c].push((*r, v.clone()));
        }
        cols
    }

    /// Exact rank over the matrix's field.
    pub fn rank(&self) -> usize {
        eliminate::rank(self)
    }

    /// Coordinate text dump: header `rows cols nnz`, then `row col value` lines.
    pub fn write_coordinate<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut buf = String::new();
        writeln!(buf, "{} {} {}", self.rows, self.cols, self.entries.len()).unwrap();
        for (r, c, v) in &self.entries {
            writeln!(buf, "{r} {c} {v}").unwrap();
        }
        w.write_all(buf.as_bytes())
    }

    pub fn read_coordinate<R: BufRead>(field: FieldSpec, r: R) -> Result<Self> {
        let mut lines = r.lines().map(|l| l.map_err(|e| Error::Parse(e.to_string())));
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix dump".into()))??;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [rows, cols, nnz] = nums[..] else {
            return Err(Error::Parse(format!("bad header {header:?}")));
        };
        let mut triplets = Vec::with_capacity(nnz);
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected `row col value`", lineno + 2)));
            }
            let r = parts[0]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad row", lineno + 2)))?;
            let c = parts[1]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad col", lineno + 2)))?;
            triplets.push((r, c, field.parse(parts[2])?));
        }
        if triplets.len() != nnz {
            return Err(Error::Parse(format!(
                "header says {nnz} entries, found {}",
                triplets.len()
            )));
        }
        Self::from_triplets(field, rows, cols, triplets)
    }
}
