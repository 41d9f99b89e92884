//! Seeded random instances for the property suites.

use rand::Rng;

use super::{CMatrix, HermitianBlockMatrix, C64};

fn uniform_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| uniform_c64(rng))
}

/// Random Hermitian matrix with spectral norm exactly `norm` (or zero).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: f64) -> CMatrix {
    let a = random_matrix(rng, n, n);
    let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    let e = h.clone().symmetric_eigen();
    let current = e.eigenvalues.amax();
    if current == 0.0 {
        return h;
    }
    h * C64::new(norm / current, 0.0)
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    random_matrix(rng, n, n).qr().q()
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> super::CVector {
    super::CVector::from_fn(n, |_, _| uniform_c64(rng))
}

/// `T12 = U diag(s) V*` with singular values drawn from `[s_min, s_max]`.
pub fn random_nonsingular<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    s_min: f64,
    s_max: f64,
) -> CMatrix {
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let s = CMatrix::from_diagonal(&super::CVector::from_fn(n, |_, _| {
        C64::new(rng.gen_range(s_min..s_max), 0.0)
    }));
    u * s * v.adjoint()
}

/// Square instance with nonsingular `T12` and diagonal blocks of arbitrary
/// size; `n0` may be positive.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianBlockMatrix {
    let t11 = {
        let nrm = rng.gen_range(0.1..3.0);
        random_hermitian(rng, n, nrm)
    };
    let t22 = {
        let nrm = rng.gen_range(0.1..3.0);
        random_hermitian(rng, n, nrm)
    };
    let t12 = random_nonsingular(rng, n, 0.3, 3.0);
    HermitianBlockMatrix::new(t11, t12, t22).expect("generated blocks are Hermitian")
}

/// Off-diagonally dominant instance: `‖T11‖, ‖T22‖ ≤ 0.3` and
/// `T12 = Q diag(1, …, n) Q*`.
pub fn dominant_instance<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianBlockMatrix {
    let t11 = {
        let nrm = rng.gen_range(0.0..0.3);
        random_hermitian(rng, n, nrm)
    };
    let t22 = {
        let nrm = rng.gen_range(0.0..0.3);
        random_hermitian(rng, n, nrm)
    };
    let q = random_unitary(rng, n);
    let d = CMatrix::from_diagonal(&super::CVector::from_fn(n, |i, _| {
        C64::new((i + 1) as f64, 0.0)
    }));
    let t12 = &q * d * q.adjoint();
    HermitianBlockMatrix::new(t11, t12, t22).expect("generated blocks are Hermitian")
}
