//! Gram matrices of atom subsets and their restricted-isometry deviations.
//!
//! The deviation of a support S is the spectral norm of G(S) - Id, the
//! worst-case relative distortion the subdictionary applies to coefficient
//! norms. `rip_exact_check` enumerates every support up to a size bound and
//! is the ground-truth (but tiny-scale-only) counterpart of the Monte Carlo
//! statistics module.

use num_complex::Complex64;

use crate::dictionary::{inner_product, AtomId, Dictionary};
use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Default cap on the number of subsets `rip_exact_check` may enumerate.
pub const DEFAULT_ENUM_BUDGET: u64 = 2_000_000;

/// An ordered list of pairwise-distinct atom ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    ids: Vec<AtomId>,
}

impl Support {
    pub fn new(ids: Vec<AtomId>) -> Result<Support> {
        if ids.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut seen = ids.clone();
        seen.sort();
        for w in seen.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateAtomId { id: w[0] });
            }
        }
        Ok(Support { ids })
    }

    pub fn ids(&self) -> &[AtomId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }
}

/// The Gram matrix of a support: entry (i, j) is <atom_i, atom_j>.
/// Hermitian with unit diagonal since atoms are unit norm.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    m: CMatrix,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m.get(i, j)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }
}

/// Gram matrix of materialized atom rows: entry (i, j) = <row_i, row_j>,
/// computed for i <= j and mirrored conjugate so the result is Hermitian
/// bit for bit.
fn gram_of_rows(rows: &[&[Complex64]]) -> CMatrix {
    let n = rows.len();
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = inner_product(rows[i], rows[j]);
            m.set(i, j, v);
            if i != j {
                m.set(j, i, v.conj());
            }
        }
    }
    m
}

pub fn gram(d: &Dictionary, s: &Support) -> Result<GramMatrix> {
    let atoms = d.materialize(s.ids())?;
    let rows: Vec<&[Complex64]> = atoms.iter().map(|a| a.as_slice()).collect();
    Ok(GramMatrix {
        m: gram_of_rows(&rows),
    })
}

/// max |lambda - 1| over the eigenvalues, the spectral norm of G - Id.
fn deviation_of(g: &CMatrix) -> Result<f64> {
    let eig = hermitian_eigenvalues(g)?;
    Ok(eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, l| acc.max((l - 1.0).abs())))
}

/// Spectral norm of G(S) - Id for one support.
pub fn rip_deviation(d: &Dictionary, s: &Support) -> Result<f64> {
    deviation_of(gram(d, s)?.matrix())
}

/// Worst deviation over exhaustive enumeration, with a witness support.
/// `delta_upper` / `delta_lower` are the worst signed excursions
/// max(lambda) - 1 and 1 - min(lambda), so both one-sided isometry constants
/// are recoverable alongside their maximum `delta`.
#[derive(Debug, Clone)]
pub struct RipReport {
    pub n_max: usize,
    pub delta: f64,
    pub delta_upper: f64,
    pub delta_lower: f64,
    pub argmax_support: Support,
}

/// Number of subsets of sizes 1..=n_max from a ground set of `total`,
/// saturating once it passes `cap`.
fn subset_count_capped(total: usize, n_max: usize, cap: u128) -> u128 {
    let mut sum: u128 = 0;
    let mut binom: u128 = 1;
    for k in 1..=n_max.min(total) {
        binom = match binom.checked_mul((total - k + 1) as u128) {
            Some(v) => v / k as u128,
            None => return cap.saturating_add(1),
        };
        sum = sum.saturating_add(binom);
        if sum > cap {
            return sum;
        }
    }
    sum
}

fn for_each_combination(
    n: usize,
    k: usize,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + (i - 1) {
            i -= 1;
        }
        if i == 0 {
            return Ok(());
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Enumerates every support of size 1..=n_max and reports the worst deviation
/// with a witness. Refuses to start when the subset count exceeds `budget`.
pub fn rip_exact_check(d: &Dictionary, n_max: usize, budget: u64) -> Result<RipReport> {
    if n_max < 2 {
        return Err(Error::Config {
            field: "n_max",
            message: "exhaustive check needs n_max >= 2 (singletons always have deviation 0)"
                .to_string(),
        });
    }
    let total = d.num_atoms();
    let count = subset_count_capped(total, n_max, budget as u128);
    if count > budget as u128 {
        return Err(Error::EnumerationBudgetExceeded {
            subsets: count,
            budget,
            n_max,
        });
    }

    let ids: Vec<AtomId> = (0..total).map(|o| d.id_from_ordinal(o)).collect();
    let atoms = d.materialize(&ids)?;

    let mut delta = f64::NEG_INFINITY;
    let mut delta_upper: f64 = 0.0;
    let mut delta_lower: f64 = 0.0;
    let mut argmax: Vec<AtomId> = Vec::new();
    let mut rows: Vec<&[Complex64]> = Vec::with_capacity(n_max);
    for k in 1..=n_max.min(total) {
        for_each_combination(total, k, &mut |subset| {
            rows.clear();
            rows.extend(subset.iter().map(|&i| atoms[i].as_slice()));
            let g = gram_of_rows(&rows);
            let eig = hermitian_eigenvalues(&g)?;
            let lo = eig.eigenvalues.first().copied().expect("k >= 1");
            let hi = eig.eigenvalues.last().copied().expect("k >= 1");
            delta_upper = delta_upper.max(hi - 1.0);
            delta_lower = delta_lower.max(1.0 - lo);
            let dev = (hi - 1.0).max(1.0 - lo).max(0.0);
            if dev > delta {
                delta = dev;
                argmax = subset.iter().map(|&i| ids[i]).collect();
            }
            Ok(())
        })?;
    }

    Ok(RipReport {
        n_max,
        delta: delta.max(0.0),
        delta_upper: delta_upper.max(0.0),
        delta_lower: delta_lower.max(0.0),
        argmax_support: Support::new(argmax).expect("witness subset is distinct and nonempty"),
    })
}
