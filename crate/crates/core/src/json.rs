//! JSON wire format for states and operators.
//!
//! `{ "dim": N, "entries": [[re, im], ...] }`, row-major. A ket has `N`
//! entries and a square matrix `N * N`. Rectangular matrices (isometries)
//! add `"cols": M` and carry `N * M` entries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{Ket, Matrix, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    pub entries: Vec<[f64; 2]>,
}

fn pack(data: &[C64]) -> Vec<[f64; 2]> {
    // -0.0 is written as 0.0 so reports do not depend on sign-of-zero noise
    data.iter().map(|z| [z.re + 0.0, z.im + 0.0]).collect()
}

fn unpack(entries: &[[f64; 2]]) -> Result<Vec<C64>> {
    entries
        .iter()
        .map(|&[re, im]| {
            if re.is_finite() && im.is_finite() {
                Ok(C64::new(re, im))
            } else {
                Err(Error::Json("non-finite entry".into()))
            }
        })
        .collect()
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> Self {
        Self {
            dim: m.rows(),
            cols: (!m.is_square()).then_some(m.cols()),
            entries: pack(m.data()),
        }
    }

    pub fn from_ket(v: &Ket) -> Self {
        Self {
            dim: v.dim(),
            cols: None,
            entries: pack(v.amplitudes()),
        }
    }

    pub fn is_ket(&self) -> bool {
        self.cols.is_none() && self.entries.len() == self.dim && self.dim != 1
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        let cols = self.cols.unwrap_or(self.dim);
        Matrix::from_vec(self.dim, cols, unpack(&self.entries)?)
    }

    pub fn to_ket(&self) -> Result<Ket> {
        if self.entries.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: self.entries.len(),
            });
        }
        Ket::new(unpack(&self.entries)?)
    }
}

pub fn matrix_to_string(m: &Matrix) -> Result<String> {
    Ok(serde_json::to_string(&MatrixJson::from_matrix(m))?)
}

pub fn matrix_from_str(s: &str) -> Result<Matrix> {
    serde_json::from_str::<MatrixJson>(s)?.to_matrix()
}
