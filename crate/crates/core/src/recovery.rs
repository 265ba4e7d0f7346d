//! Orthogonal matching pursuit over the resolution map: greedy atom
//! selection with a least-squares refit on the selected set at every step.
//! Illustrates how low coherence turns into sparse recovery; not a recovery
//! study.

use num_complex::Complex64;

use crate::dictionary::{inner_product, vec_norm, AtomId, Dictionary};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Pivot floor for the normal-equations Cholesky factorization.
const CHOLESKY_PIVOT_MIN: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct RecoveryResult {
    /// Selected atoms, in selection order.
    pub support_found: Vec<AtomId>,
    /// Least-squares coefficients aligned with `support_found`.
    pub coefficients: Vec<Complex64>,
    /// Norm of y minus the reconstruction.
    pub residual_norm: f64,
    /// Number of greedy selections performed.
    pub iterations: usize,
}

/// Solves the Hermitian positive-definite system M c = b by Cholesky
/// factorization M = L L^*. Fails when a pivot collapses, which is how a
/// (numerically) dependent selected set surfaces.
pub(crate) fn solve_normal_equations(m: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = m.n();
    debug_assert_eq!(b.len(), n);
    let mut l = CMatrix::zeros(n);
    for j in 0..n {
        let mut d = m.get(j, j).re;
        for k in 0..j {
            d -= l.get(j, k).norm_sqr();
        }
        if d <= CHOLESKY_PIVOT_MIN {
            return Err(Error::SingularNormalEquations { selected: n });
        }
        let piv = d.sqrt();
        l.set(j, j, Complex64::new(piv, 0.0));
        for i in (j + 1)..n {
            let mut v = m.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, v / piv);
        }
    }
    // Forward substitution L z = b.
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= l.get(i, k) * z[k];
        }
        z[i] = v / l.get(i, i).re;
    }
    // Back substitution L^* c = z, using (L^*)[i][k] = conj(L[k][i]).
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut v = z[i];
        for k in (i + 1)..n {
            v -= l.get(k, i).conj() * c[k];
        }
        c[i] = v / l.get(i, i).re;
    }
    Ok(c)
}

/// Standard OMP: repeatedly select the atom most correlated with the
/// residual (ties broken by smallest AtomId), refit by least squares on the
/// selected set, and stop after k selections or once the residual norm
/// reaches `tol`.
pub fn omp(d: &Dictionary, y: &[Complex64], k: usize, tol: f64) -> Result<RecoveryResult> {
    let p = d.p().as_usize();
    if y.len() != p {
        return Err(Error::DimensionMismatch {
            got: y.len(),
            expected: p,
        });
    }
    if k < 1 || k > p {
        return Err(Error::SparsityOutOfRange { k, p: d.p().get() });
    }
    if tol < 0.0 {
        return Err(Error::Config {
            field: "tol",
            message: format!("must be nonnegative, got {tol}"),
        });
    }

    let total = d.num_atoms();
    let mut residual = y.to_vec();
    let mut residual_norm = vec_norm(&residual);
    let mut selected_ids: Vec<AtomId> = Vec::new();
    let mut selected_atoms: Vec<Vec<Complex64>> = Vec::new();
    let mut taken = vec![false; total];
    let mut coefficients: Vec<Complex64> = Vec::new();

    while selected_ids.len() < k && residual_norm > tol {
        // Ascending ordinal scan with strict comparison keeps the smallest
        // AtomId among ties.
        let mut best: Option<(usize, f64)> = None;
        for ordinal in 0..total {
            if taken[ordinal] {
                continue;
            }
            let id = d.id_from_ordinal(ordinal);
            let atom = d.atom(id)?;
            let corr = inner_product(&residual, atom.coords()).norm_sqr();
            if best.map_or(true, |(_, c)| corr > c) {
                best = Some((ordinal, corr));
            }
        }
        let (ordinal, _) = best.expect("k <= p < total atoms leaves candidates");
        taken[ordinal] = true;
        let id = d.id_from_ordinal(ordinal);
        selected_ids.push(id);
        selected_atoms.push(d.atom(id)?.coords().to_vec());

        // Least squares on the selected set: the residual must come out
        // orthogonal to every selected atom, i.e. for each i
        // sum_j c_j <phi_j, phi_i> = <y, phi_i>.
        let m = selected_ids.len();
        let mut normal = CMatrix::zeros(m);
        for i in 0..m {
            for j in 0..m {
                normal.set(i, j, inner_product(&selected_atoms[j], &selected_atoms[i]));
            }
        }
        let rhs: Vec<Complex64> = selected_atoms
            .iter()
            .map(|a| inner_product(y, a))
            .collect();
        coefficients = solve_normal_equations(&normal, &rhs).map_err(|e| match e {
            Error::SingularNormalEquations { .. } => Error::SingularNormalEquations { selected: m },
            other => other,
        })?;

        residual.copy_from_slice(y);
        for (c, atom) in coefficients.iter().zip(selected_atoms.iter()) {
            for (r, &a) in residual.iter_mut().zip(atom.iter()) {
                *r -= c * a;
            }
        }
        residual_norm = vec_norm(&residual);
    }

    Ok(RecoveryResult {
        iterations: selected_ids.len(),
        support_found: selected_ids,
        coefficients,
        residual_norm,
    })
}
