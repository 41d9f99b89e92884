use std::f64::consts::PI;

use serde::Serialize;

use super::diagnostics::Diagnostics;
use crate::angular::{AngularParams, IndexedEigenvalues};

/// Number of interior sample points `θ_i = iπ/(GRID_POINTS + 1)`.
pub const GRID_POINTS: usize = 513;

pub(crate) fn grid() -> Vec<f64> {
    (1..=GRID_POINTS)
        .map(|i| PI * i as f64 / (GRID_POINTS + 1) as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenfunction {
    pub theta: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl Eigenfunction {
    /// Unit ℓ² norm on the grid; the first component that is not negligible
    /// at the first significant sample is made positive.
    pub(crate) fn normalised(theta: Vec<f64>, mut f: Vec<f64>, mut g: Vec<f64>) -> Self {
        let norm = f.iter().chain(&g).map(|v| v * v).sum::<f64>().sqrt();
        let peak = f.iter().chain(&g).fold(0.0f64, |m, v| m.max(v.abs()));
        let cut = 1e-6 * peak;
        let lead = f.iter().zip(&g).find_map(|(a, b)| {
            if a.abs() > cut {
                Some(*a)
            } else if b.abs() > cut {
                Some(*b)
            } else {
                None
            }
        });
        let s = if lead.unwrap_or(1.0) < 0.0 { -1.0 } else { 1.0 } / norm;
        f.iter_mut().chain(g.iter_mut()).for_each(|v| *v *= s);
        Self { theta, f, g }
    }

    pub fn sup_norm(&self) -> f64 {
        self.f
            .iter()
            .chain(&self.g)
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    /// Continuation index, `None` before enumeration.
    pub n: Option<i32>,
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub efun: Option<Eigenfunction>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub params: AngularParams,
    pub entries: Vec<SpectrumEntry>,
    pub m_minus: Option<i32>,
    pub m_plus: Option<i32>,
    pub interval_count: Option<usize>,
}

pub const SPECTRUM_CSV_HEADER: &str = "k,am,aomega,n,lambda,residual,symmetry_defect";

impl Spectrum {
    pub(crate) fn unlabelled(params: AngularParams, entries: Vec<SpectrumEntry>) -> Self {
        Self {
            params,
            entries,
            m_minus: None,
            m_plus: None,
            interval_count: None,
        }
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.lambda).collect()
    }

    pub fn get(&self, n: i32) -> Option<&SpectrumEntry> {
        self.entries.iter().find(|e| e.n == Some(n))
    }

    pub fn lambda(&self, n: i32) -> Option<f64> {
        self.get(n).map(|e| e.lambda)
    }

    /// Labelled eigenvalues in the form the index-shift criteria accept.
    pub fn hint(&self) -> IndexedEigenvalues {
        IndexedEigenvalues {
            entries: self
                .entries
                .iter()
                .filter_map(|e| e.n.map(|n| (n, e.lambda)))
                .collect(),
        }
    }

    /// Drops the eigenfunction samples, e.g. before serialising a summary.
    pub fn without_samples(mut self) -> Self {
        self.entries.iter_mut().for_each(|e| e.efun = None);
        self
    }

    pub fn csv_rows(&self) -> Vec<String> {
        let p = &self.params;
        self.entries
            .iter()
            .map(|e| {
                let n = e.n.map(|n| n.to_string()).unwrap_or_default();
                let (r, s) = e
                    .diagnostics
                    .map(|d| {
                        (
                            format!("{:.3e}", d.residual),
                            format!("{:.3e}", d.symmetry_defect),
                        )
                    })
                    .unwrap_or_default();
                format!(
                    "{},{:.8},{:.8},{},{:.12},{},{}",
                    p.k,
                    p.am(),
                    p.aomega(),
                    n,
                    e.lambda,
                    r,
                    s
                )
            })
            .collect()
    }
}
