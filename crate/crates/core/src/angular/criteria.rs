use serde::Serialize;

use super::bounds::{nu_enclosure, variational_bounds};
use super::AngularParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tristate {
    Yes,
    No,
    Unknown,
}

/// Continuation-indexed eigenvalues `(n, λ_n)`, as produced by the solver.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IndexedEigenvalues {
    pub entries: Vec<(i32, f64)>,
}

impl IndexedEigenvalues {
    /// Index of the first eigenvalue above `|am|`. It equals `m₊ + 1` in plain
    /// integer arithmetic.
    pub fn first_above(&self, am: f64) -> Option<i32> {
        let mut sorted = self.entries.clone();
        sorted.sort_by_key(|e| e.0);
        sorted.into_iter().find(|&(_, l)| l > am.abs()).map(|e| e.0)
    }

    /// `m₊`, one less than [`first_above`](Self::first_above).
    pub fn m_plus(&self, am: f64) -> Option<i32> {
        self.first_above(am).map(|p| p - 1)
    }

    fn get(&self, n: i32) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == n).map(|e| e.1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexShiftCriteria {
    pub n0_zero: Tristate,
    pub n0_equals_mplus: Tristate,
    pub n0_ge_one: Tristate,
    pub reasons: Vec<String>,
}

impl IndexShiftCriteria {
    /// The index shift if it is certified, `None` otherwise.
    pub fn certified_n0(&self) -> Option<u32> {
        match (self.n0_zero, self.n0_ge_one) {
            (Tristate::Yes, _) => Some(0),
            _ => None,
        }
    }
}

/// Highest index used when scanning for consecutive certified gaps.
const GAP_SCAN_MAX: u32 = 12;

/// Sufficient conditions for `n0 = 0`, `n0 = m₊` and `n0 ≥ 1`.
pub fn index_shift_criteria(
    p: &AngularParams,
    hint: Option<&IndexedEigenvalues>,
) -> IndexShiftCriteria {
    let am = p.am().abs();
    let mut reasons = Vec::new();

    // n0 = 0 and m₊ = 0.
    let root = nu_enclosure(p, 1).lo.sqrt();
    let check1 = variational_bounds(p, 1, 0)
        .map(|b| b.0)
        .unwrap_or(f64::NEG_INFINITY);
    let n0_zero = if root > 2.0 * am {
        reasons.push(format!("n0 = 0: √ν₁ ≥ {root:.6} > 2|am| = {:.6}", 2.0 * am));
        Tristate::Yes
    } else if check1 > am {
        reasons.push(format!("n0 = 0: λ̌₁ = {check1:.6} > |am| = {am:.6}"));
        Tristate::Yes
    } else {
        reasons.push(format!(
            "n0 = 0 not certified: √ν₁ ≥ {root:.6} ≤ 2|am|, λ̌₁ = {check1:.6} ≤ |am|"
        ));
        Tristate::Unknown
    };

    // n0 = m₊: the gaps λ̌_{i+1} - λ̂_i tend to 1 - 2|am|.
    let n0_equals_mplus = if am < 0.5 {
        reasons.push(format!("n0 = m₊: |am| = {am:.6} < 1/2"));
        Tristate::Yes
    } else {
        let gap = |i: u32| -> f64 {
            let lo = variational_bounds(p, i + 1, 0)
                .map(|b| b.0)
                .unwrap_or(f64::NEG_INFINITY);
            let hi = variational_bounds(p, i, 0)
                .map(|b| b.1)
                .unwrap_or(f64::INFINITY);
            lo - hi
        };
        if (2..=GAP_SCAN_MAX).all(|i| gap(i) > 0.0) {
            reasons.push(format!("n0 = m₊: λ̌_(i+1) > λ̂_i for i = 2..{GAP_SCAN_MAX}"));
            Tristate::Yes
        } else {
            reasons.push("n0 = m₊ not certified: consecutive variational intervals overlap".into());
            Tristate::Unknown
        }
    };

    // n0 ≥ 1 from an eigenvalue μ with 2|am| - λ_{m₊+1} < μ < λ_{m₊+1}.
    let mut n0_ge_one = if n0_zero == Tristate::Yes {
        Tristate::No
    } else {
        Tristate::Unknown
    };
    if let Some(h) = hint {
        if let Some(next) = h.first_above(am) {
            if let Some(top) = h.get(next) {
                let witness = h
                    .entries
                    .iter()
                    .find(|&&(_, mu)| 2.0 * am - top < mu && mu < top);
                if let Some(&(j, mu)) = witness {
                    reasons.push(format!(
                        "n0 ≥ 1: μ = λ_{j} = {mu:.6} lies in ({:.6}, {top:.6})",
                        2.0 * am - top
                    ));
                    n0_ge_one = Tristate::Yes;
                }
            }
        }
    }

    IndexShiftCriteria {
        n0_zero,
        n0_equals_mplus,
        n0_ge_one,
        reasons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(am: f64, aw: f64, k: i32) -> AngularParams {
        AngularParams::from_products(am, aw, k)
    }

    #[test]
    fn small_coupling_has_no_shift() {
        let c = index_shift_criteria(&p(0.005, 0.015, 0), None);
        assert_eq!(c.n0_zero, Tristate::Yes);
        assert_eq!(c.certified_n0(), Some(0));
    }

    #[test]
    fn small_coupling_only_certifies_n0_equals_mplus() {
        let c = index_shift_criteria(&p(0.25, 0.75, -1), None);
        assert_eq!(c.n0_zero, Tristate::Unknown);
        assert_eq!(c.n0_equals_mplus, Tristate::Yes);
    }

    #[test]
    fn large_wave_number_has_no_shift() {
        let c = index_shift_criteria(&p(0.25, 0.75, -5), None);
        assert_eq!(c.n0_zero, Tristate::Yes);
        assert!(c.reasons[0].contains("4.18"));
    }

    #[test]
    fn witness_from_hint() {
        // Hypothetical spectrum with an eigenvalue inside [-|am|, |am|].
        let h = IndexedEigenvalues {
            entries: vec![(-2, -3.0), (-1, -0.5), (1, 0.9), (2, 2.5)],
        };
        assert_eq!(h.m_plus(1.0), Some(1));
        let c = index_shift_criteria(&p(1.0, 0.1, -1), Some(&h));
        assert_eq!(c.n0_ge_one, Tristate::Yes);
    }

    #[test]
    fn m_plus_conventions() {
        let h = IndexedEigenvalues {
            entries: vec![(-1, -1.0), (1, 1.0)],
        };
        assert_eq!(h.m_plus(0.005), Some(0));
        let h = IndexedEigenvalues {
            entries: vec![(-1, -0.1), (1, 0.2), (2, 1.0)],
        };
        assert_eq!(h.m_plus(0.5), Some(1));
    }
}
