use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::frame::CurveletIndex;
use crate::{Error, Result};

/// Coefficients in decreasing order of magnitude; ties broken by index order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSeq {
    pub entries: Vec<(f64, CurveletIndex)>,
}

impl CoefficientSeq {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn head(&self, m: usize) -> &[(f64, CurveletIndex)] {
        &self.entries[..m.min(self.entries.len())]
    }

    pub fn tail(&self, m: usize) -> &[(f64, CurveletIndex)] {
        &self.entries[m.min(self.entries.len())..]
    }
}

pub fn rearrange(raw: &[(f64, CurveletIndex)]) -> Result<CoefficientSeq> {
    let mut seen = HashSet::with_capacity(raw.len());
    for (w, i) in raw {
        if !w.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite coefficient at {i}")));
        }
        if !seen.insert(*i) {
            return Err(Error::DuplicateIndex(i.to_string()));
        }
    }
    let mut entries = raw.to_vec();
    entries.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()).then(a.1.cmp(&b.1)));
    Ok(CoefficientSeq { entries })
}

/// `sup_n n^alpha |omega_n|` over the finite sequence.
pub fn class_norm(seq: &CoefficientSeq, alpha: f64) -> f64 {
    seq.entries
        .iter()
        .enumerate()
        .map(|(n, (w, _))| ((n + 1) as f64).powf(alpha) * w.abs())
        .fold(0.0, f64::max)
}
