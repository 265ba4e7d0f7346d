//! Dense complex-Hermitian eigensolver: cyclic Jacobi rotations.
//!
//! Each rotation zeroes one off-diagonal pair (k, l) with the unitary that
//! diagonalizes the 2x2 principal submatrix; sweeps repeat until the
//! off-diagonal Frobenius mass falls below a relative tolerance. Eigenvectors
//! are accumulated only to report a residual check against the input matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Inputs must be Hermitian within this bound on max |a_ij - conj(a_ji)|.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Convergence: off-diagonal Frobenius mass <= this times ||M||_F.
const OFFDIAG_REL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix, plus the worst eigenpair residual
/// max_i ||M v_i - lambda_i v_i|| observed during verification.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
}

/// Zeroes entry (k, l), k < l, by the unitary J that is the identity outside
/// rows/columns k, l and acts there as [[c, s], [-s*conj(phi), c*conj(phi)]]
/// with phi = g/|g| for g = A[k][l]. A <- J^* A J keeps A Hermitian by
/// construction; V <- V J accumulates eigenvectors.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, k: usize, l: usize) {
    let g = a.get(k, l);
    let abs_g = g.norm();
    if abs_g == 0.0 {
        return;
    }
    let alpha = a.get(k, k).re;
    let beta = a.get(l, l).re;
    let phi = g / abs_g;
    let tau = (beta - alpha) / (2.0 * abs_g);
    // Smaller root of t^2 + 2*tau*t - 1 = 0: the rotation angle stays <= pi/4.
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_phi_conj = s * phi.conj();
    let c_phi_conj = c * phi.conj();

    let n = a.n();
    for i in 0..n {
        if i == k || i == l {
            continue;
        }
        let aik = a.get(i, k);
        let ail = a.get(i, l);
        let new_ik = c * aik - s_phi_conj * ail;
        let new_il = s * aik + c_phi_conj * ail;
        a.set(i, k, new_ik);
        a.set(i, l, new_il);
        a.set(k, i, new_ik.conj());
        a.set(l, i, new_il.conj());
    }
    a.set(k, k, Complex64::new(alpha - t * abs_g, 0.0));
    a.set(l, l, Complex64::new(beta + t * abs_g, 0.0));
    a.set(k, l, Complex64::new(0.0, 0.0));
    a.set(l, k, Complex64::new(0.0, 0.0));

    for i in 0..n {
        let vik = v.get(i, k);
        let vil = v.get(i, l);
        v.set(i, k, c * vik - s_phi_conj * vil);
        v.set(i, l, s * vik + c_phi_conj * vil);
    }
}

/// All eigenvalues of a Hermitian matrix, sorted ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<EigenResult> {
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let n = m.n();
    let target = OFFDIAG_REL_TOL * m.frobenius_norm();

    let mut a = m.clone();
    // Force exact Hermitian symmetry so the rotation algebra sees real
    // diagonals and conjugate-mirrored entries regardless of input rounding.
    for i in 0..n {
        a.set(i, i, Complex64::new(a.get(i, i).re, 0.0));
        for j in (i + 1)..n {
            let avg = 0.5 * (a.get(i, j) + a.get(j, i).conj());
            a.set(i, j, avg);
            a.set(j, i, avg.conj());
        }
    }
    let mut v = CMatrix::identity(n);

    let mut sweeps = 0;
    let mut offdiag = a.offdiag_frobenius();
    while offdiag > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                offdiag_mass: offdiag,
                target,
            });
        }
        for k in 0..n {
            for l in (k + 1)..n {
                rotate(&mut a, &mut v, k, l);
            }
        }
        sweeps += 1;
        offdiag = a.offdiag_frobenius();
    }

    let lambda: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();

    // Residual against the original input, while eigenpairs are still aligned.
    let mut residual: f64 = 0.0;
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for (r, slot) in col.iter_mut().enumerate() {
            *slot = v.get(r, i);
        }
        let mv = m.matvec(&col);
        let r_sq: f64 = mv
            .iter()
            .zip(col.iter())
            .map(|(x, y)| (x - lambda[i] * y).norm_sqr())
            .sum();
        residual = residual.max(r_sq.sqrt());
    }

    let mut eigenvalues = lambda;
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(EigenResult {
        eigenvalues,
        residual,
    })
}
