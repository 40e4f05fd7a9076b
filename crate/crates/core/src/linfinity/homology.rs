use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// A bounded cochain complex `C_0 → C_1 → ⋯`, with `diffs[i]: C_i → C_{i+1}`
/// as a `dims[i+1] × dims[i]` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    diffs: Vec<SparseMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
}

impl ChainComplex {
    /// Checks shapes and `d ∘ d = 0`.
    pub fn new(dims: Vec<usize>, diffs: Vec<SparseMatrix>) -> Result<Self> {
        if diffs.len() + 1 != dims.len() {
            return Err(Error::NotAComplex(format!(
                "{} spaces need {} differentials",
                dims.len(),
                dims.len().saturating_sub(1)
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.cols() != dims[i] || d.rows() != dims[i + 1] {
                return Err(Error::NotAComplex(format!(
                    "d_{i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for i in 1..diffs.len() {
            if !diffs[i].matmul(&diffs[i - 1])?.is_zero() {
                return Err(Error::NotAComplex(format!("d_{i} ∘ d_{} ≠ 0", i - 1)));
            }
        }
        Ok(ChainComplex { dims, diffs })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn diffs(&self) -> &[SparseMatrix] {
        &self.diffs
    }

    pub fn homology(&self) -> Homology {
        let ranks: Vec<usize> = self.diffs.iter().map(SparseMatrix::rank).collect();
        let betti = (0..self.dims.len())
            .map(|i| {
                let out = ranks.get(i).copied().unwrap_or(0);
                let inc = if i == 0 { 0 } else { ranks[i - 1] };
                self.dims[i] - out - inc
            })
            .collect();
        Homology {
            dims: self.dims.clone(),
            ranks,
            betti,
        }
    }
}

pub fn homology(c: &ChainComplex) -> Homology {
    c.homology()
}
