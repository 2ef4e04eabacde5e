use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldSpec;

use super::SparseMatrix;

/// A finite stretch `C_top -> C_{top-1} -> ... -> C_bottom` of a chain complex.
///
/// `maps[j]` is the differential out of degree `top - j`, a matrix with
/// `dims[j]` columns and `dims[j + 1]` rows. Homology is only defined at the
/// interior degrees, where both adjacent maps are known.
#[derive(Debug)]
pub struct ChainComplexWindow {
    field: FieldSpec,
    top: i64,
    dims: Vec<usize>,
    maps: Vec<SparseMatrix>,
    ranks: Vec<OnceLock<usize>>,
}

impl ChainComplexWindow {
    /// Validates shapes, fields and that consecutive maps compose to zero.
    pub fn new(field: FieldSpec, top: i64, dims: Vec<usize>, maps: Vec<SparseMatrix>) -> Result<Self> {
        if dims.len() != maps.len() + 1 {
            return Err(Error::Validation(format!(
                "{} dimensions need {} maps, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (j, m) in maps.iter().enumerate() {
            let n = top - j as i64;
            if m.field() != field {
                return Err(Error::Validation(format!(
                    "map out of degree {n} is over {}",
                    m.field()
                )));
            }
            if m.cols() != dims[j] || m.rows() != dims[j + 1] {
                return Err(Error::Validation(format!(
                    "map out of degree {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[j + 1],
                    dims[j]
                )));
            }
        }
        for (j, pair) in maps.windows(2).enumerate() {
            if !pair[1].mul(&pair[0])?.is_zero() {
                return Err(Error::Consistency(format!(
                    "differentials out of degrees {} and {} do not compose to zero",
                    top - j as i64,
                    top - j as i64 - 1
                )));
            }
        }
        let ranks = maps.iter().map(|_| OnceLock::new()).collect();
        Ok(ChainComplexWindow {
            field,
            top,
            dims,
            maps,
            ranks,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn top_degree(&self) -> i64 {
        self.top
    }

    pub fn bottom_degree(&self) -> i64 {
        self.top - self.maps.len() as i64
    }

    fn slot(&self, n: i64) -> Option<usize> {
        (n <= self.top && n >= self.bottom_degree()).then(|| (self.top - n) as usize)
    }

    pub fn dim(&self, n: i64) -> Option<usize> {
        self.slot(n).map(|j| self.dims[j])
    }

    /// The differential out of degree `n`.
    pub fn map_from(&self, n: i64) -> Option<&SparseMatrix> {
        self.slot(n).and_then(|j| self.maps.get(j))
    }

    pub fn rank_from(&self, n: i64) -> Option<usize> {
        let j = self.slot(n)?;
        let m = self.maps.get(j)?;
        Some(*self.ranks[j].get_or_init(|| m.rank()))
    }

    /// `dim C_n - rank d_n - rank d_{n+1}` at an interior degree.
    pub fn homology_dim(&self, n: i64) -> Result<usize> {
        if n >= self.top || n <= self.bottom_degree() {
            return Err(Error::Usage(format!(
                "degree {n} is not interior to the window [{}, {}]",
                self.bottom_degree(),
                self.top
            )));
        }
        let out = self.rank_from(n).unwrap();
        let inc = self.rank_from(n + 1).unwrap();
        Ok(self.dim(n).unwrap() - out - inc)
    }

    /// Homology at every interior degree, descending; ranks computed in parallel.
    pub fn homology_dims(&self) -> Vec<(i64, usize)> {
        (0..self.maps.len()).into_par_iter().for_each(|j| {
            self.rank_from(self.top - j as i64);
        });
        (self.bottom_degree() + 1..self.top)
            .rev()
            .map(|n| (n, self.homology_dim(n).unwrap()))
            .collect()
    }
}
