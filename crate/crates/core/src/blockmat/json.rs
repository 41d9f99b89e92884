use serde::{Deserialize, Serialize};

use super::{BlockError, CMatrix, HermitianBlockMatrix, Result, C64};

/// Wire format of a block matrix instance: entries are `[re, im]` pairs,
/// row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub n1: usize,
    pub n2: usize,
    pub t11: Vec<[f64; 2]>,
    pub t12: Vec<[f64; 2]>,
    pub t22: Vec<[f64; 2]>,
}

impl InstanceJson {
    pub fn into_matrix(self) -> Result<HermitianBlockMatrix> {
        let t11 = to_matrix("t11", &self.t11, self.n1, self.n1)?;
        let t12 = to_matrix("t12", &self.t12, self.n1, self.n2)?;
        let t22 = to_matrix("t22", &self.t22, self.n2, self.n2)?;
        HermitianBlockMatrix::new(t11, t12, t22)
    }
}

fn to_matrix(name: &str, entries: &[[f64; 2]], rows: usize, cols: usize) -> Result<CMatrix> {
    if entries.len() != rows * cols {
        return Err(BlockError::Malformed(format!(
            "{name} has {} entries, expected {}",
            entries.len(),
            rows * cols
        )));
    }
    Ok(CMatrix::from_row_iterator(
        rows,
        cols,
        entries.iter().map(|[re, im]| C64::new(*re, *im)),
    ))
}

fn from_matrix(m: &CMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

impl From<&HermitianBlockMatrix> for InstanceJson {
    fn from(m: &HermitianBlockMatrix) -> Self {
        Self {
            n1: m.n1(),
            n2: m.n2(),
            t11: from_matrix(m.t11()),
            t12: from_matrix(m.t12()),
            t22: from_matrix(m.t22()),
        }
    }
}

impl HermitianBlockMatrix {
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: InstanceJson =
            serde_json::from_str(s).map_err(|e| BlockError::Malformed(e.to_string()))?;
        raw.into_matrix()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&InstanceJson::from(self)).expect("instance serialises")
    }
}
