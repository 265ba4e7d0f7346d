//! Dictionaries over the p-dimensional signal space: disjoint unions of
//! orthonormal bases, with the chirp (Heisenberg) construction as the main
//! deterministic family and seeded random ONB unions as the baseline.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Orthonormality tolerance for bases we construct ourselves.
pub const ORTHO_TOL_CONSTRUCTED: f64 = 1e-10;
/// Looser tolerance for bases read from files produced by other tools.
pub const ORTHO_TOL_LOADED: f64 = 1e-8;

/// A validated odd prime, the dimension of the signal space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime(u64);

impl Prime {
    /// Accepts odd primes p >= 3. Trial division keeps the check deterministic.
    pub fn new(value: u64) -> Result<Prime> {
        if value < 3 {
            return Err(Error::InvalidPrime {
                value,
                reason: "must be an odd prime >= 3",
            });
        }
        if value % 2 == 0 {
            return Err(Error::InvalidPrime {
                value,
                reason: "must be odd (quadratic sums degenerate at p = 2)",
            });
        }
        let mut d = 3u64;
        while d * d <= value {
            if value % d == 0 {
                return Err(Error::InvalidPrime {
                    value,
                    reason: "must be prime",
                });
            }
            d += 2;
        }
        Ok(Prime(value))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of an atom: which basis, which vector inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId {
    pub basis_index: usize,
    pub vector_index: usize,
}

impl AtomId {
    pub fn new(basis_index: usize, vector_index: usize) -> Self {
        AtomId {
            basis_index,
            vector_index,
        }
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.basis_index, self.vector_index)
    }
}

/// A unit-norm vector materialized from a dictionary.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    coords: Vec<Complex64>,
}

impl Atom {
    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `sum_t f(t) * conj(g(t))`, the standard inner product on the signal space.
pub fn inner_product(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    debug_assert_eq!(f.len(), g.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b) in f.iter().zip(g.iter()) {
        acc += a * b.conj();
    }
    acc
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

enum BasisKind {
    /// Standard basis: vector t is the indicator of position t.
    Delta,
    /// Chirp basis with quadratic coefficient a: vector t has entries
    /// p^{-1/2} * omega^(a*x^2 + t*x) at position x, omega the primitive p-th root.
    Chirp { a: u64 },
    /// Explicit column-stored basis (random unions, loaded files).
    Explicit(Vec<Vec<Complex64>>),
}

struct Basis {
    kind: BasisKind,
    label: String,
}

/// A disjoint union of orthonormal bases of the p-dimensional signal space.
///
/// Structured bases (delta, chirp) are materialized per atom on demand from a
/// shared root-of-unity table, so large-p dictionaries stay cheap to hold; the
/// atom values are identical on every materialization.
pub struct Dictionary {
    p: Prime,
    bases: Vec<Basis>,
    /// roots[k] = exp(2*pi*i*k/p), k in 0..p.
    roots: Vec<Complex64>,
}

fn root_table(p: u64) -> Vec<Complex64> {
    (0..p)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64))
        .collect()
}

impl Dictionary {
    /// The chirp dictionary: the delta basis plus the p chirp bases, p+1 bases
    /// and p(p+1) atoms in all. Every cross-basis inner product has magnitude
    /// p^{-1/2}, so the coherence coefficient is 1.
    pub fn build_heisenberg(p: Prime) -> Dictionary {
        let mut bases = Vec::with_capacity(p.as_usize() + 1);
        bases.push(Basis {
            kind: BasisKind::Delta,
            label: "delta".to_string(),
        });
        for a in 0..p.get() {
            bases.push(Basis {
                kind: BasisKind::Chirp { a },
                label: format!("chirp a={a}"),
            });
        }
        Dictionary {
            p,
            bases,
            roots: root_table(p.get()),
        }
    }

    /// m orthonormal bases obtained by orthonormalizing seeded complex
    /// Gaussian matrices. Pure function of (p, m, seed).
    pub fn build_random_onb_union(p: Prime, m: usize, seed: u64) -> Result<Dictionary> {
        if m == 0 {
            return Err(Error::NoBases);
        }
        let n = p.as_usize();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bases = Vec::with_capacity(m);
        for basis_index in 0..m {
            let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
            for vector_index in 0..n {
                let mut v: Vec<Complex64> = (0..n)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(re, im)
                    })
                    .collect();
                // Modified Gram-Schmidt, applied twice to push the
                // orthogonality defect to rounding level.
                for _ in 0..2 {
                    for prev in &cols {
                        let c = inner_product(&v, prev);
                        for (x, y) in v.iter_mut().zip(prev.iter()) {
                            *x -= c * y;
                        }
                    }
                }
                let norm = vec_norm(&v);
                if norm < 1e-8 {
                    return Err(Error::OrthogonalizationBreakdown {
                        basis_index,
                        vector_index,
                    });
                }
                for x in v.iter_mut() {
                    *x /= norm;
                }
                cols.push(v);
            }
            bases.push(Basis {
                kind: BasisKind::Explicit(cols),
                label: format!("random u={basis_index}"),
            });
        }
        Ok(Dictionary {
            p,
            bases,
            roots: root_table(p.get()),
        })
    }

    /// Assembles a dictionary from explicit labeled bases, validating
    /// orthonormality at the given tolerance.
    pub fn from_explicit_bases(
        p: Prime,
        labeled: Vec<(String, Vec<Vec<Complex64>>)>,
        ortho_tol: f64,
    ) -> Result<Dictionary> {
        if labeled.is_empty() {
            return Err(Error::NoBases);
        }
        let n = p.as_usize();
        for (basis_index, (_, cols)) in labeled.iter().enumerate() {
            if cols.len() != n {
                return Err(Error::BasisSizeMismatch {
                    basis_index,
                    got: cols.len(),
                    expected: n,
                });
            }
            for (vector_index, col) in cols.iter().enumerate() {
                if col.len() != n {
                    return Err(Error::BasisSizeMismatch {
                        basis_index,
                        got: col.len(),
                        expected: n,
                    });
                }
                let _ = vector_index;
            }
        }
        let d = Dictionary {
            p,
            bases: labeled
                .into_iter()
                .map(|(label, cols)| Basis {
                    kind: BasisKind::Explicit(cols),
                    label,
                })
                .collect(),
            roots: root_table(p.get()),
        };
        d.validate(ortho_tol)?;
        Ok(d)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn num_atoms(&self) -> usize {
        self.bases.len() * self.p.as_usize()
    }

    pub fn label(&self, basis_index: usize) -> &str {
        &self.bases[basis_index].label
    }

    pub fn check_id(&self, id: AtomId) -> Result<()> {
        if id.basis_index >= self.bases.len() || id.vector_index >= self.p.as_usize() {
            return Err(Error::InvalidAtomId {
                id,
                num_bases: self.bases.len(),
                p: self.p.get(),
            });
        }
        Ok(())
    }

    /// Flat enumeration order: basis-major, vector ascending. Matches the
    /// ordering of `AtomId` itself.
    pub fn id_from_ordinal(&self, ordinal: usize) -> AtomId {
        let p = self.p.as_usize();
        AtomId::new(ordinal / p, ordinal % p)
    }

    pub fn ordinal(&self, id: AtomId) -> usize {
        id.basis_index * self.p.as_usize() + id.vector_index
    }

    /// Materializes one atom.
    pub fn atom(&self, id: AtomId) -> Result<Atom> {
        self.check_id(id)?;
        let mut coords = vec![Complex64::new(0.0, 0.0); self.p.as_usize()];
        self.write_atom(id, &mut coords);
        Ok(Atom { coords })
    }

    fn write_atom(&self, id: AtomId, out: &mut [Complex64]) {
        let p = self.p.get();
        match &self.bases[id.basis_index].kind {
            BasisKind::Delta => {
                out.fill(Complex64::new(0.0, 0.0));
                out[id.vector_index] = Complex64::new(1.0, 0.0);
            }
            BasisKind::Chirp { a } => {
                let t = id.vector_index as u64;
                let scale = 1.0 / (p as f64).sqrt();
                for (x, slot) in out.iter_mut().enumerate() {
                    let x = x as u64;
                    let e = (a * x % p * x % p + t * x % p) % p;
                    *slot = scale * self.roots[e as usize];
                }
            }
            BasisKind::Explicit(cols) => {
                out.copy_from_slice(&cols[id.vector_index]);
            }
        }
    }

    /// Materializes the atoms of several ids as rows of a flat buffer.
    pub fn materialize(&self, ids: &[AtomId]) -> Result<Vec<Vec<Complex64>>> {
        ids.iter().map(|&id| self.atom(id).map(|a| a.coords)).collect()
    }

    /// Checks every invariant: unit norms and pairwise orthogonality within
    /// each basis, at the given tolerance.
    pub fn validate(&self, ortho_tol: f64) -> Result<()> {
        let n = self.p.as_usize();
        let mut cols: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for (basis_index, _) in self.bases.iter().enumerate() {
            for v in 0..n {
                let (head, tail) = cols.split_at_mut(v);
                self.write_atom(AtomId::new(basis_index, v), &mut tail[0]);
                let norm = vec_norm(&tail[0]);
                if (norm - 1.0).abs() > ortho_tol {
                    return Err(Error::BasisNotOrthonormal {
                        basis_index,
                        detail: format!("vector {v} has norm {norm:.12}"),
                    });
                }
                for (u, prev) in head.iter().enumerate() {
                    let ip = inner_product(prev, &tail[0]).norm();
                    if ip > ortho_tol {
                        return Err(Error::BasisNotOrthonormal {
                            basis_index,
                            detail: format!("|<v{u}, v{v}>| = {ip:.3e} exceeds {ortho_tol:.1e}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Inner product of two atoms by id.
    pub fn atom_inner(&self, a: AtomId, b: AtomId) -> Result<Complex64> {
        let fa = self.atom(a)?;
        let fb = self.atom(b)?;
        Ok(inner_product(fa.coords(), fb.coords()))
    }
}

/// Coherence coefficient: sqrt(p) times the largest inner-product magnitude
/// over all distinct atom pairs, by exhaustive scan.
pub fn coherence(d: &Dictionary) -> f64 {
    let total = d.num_atoms();
    if total < 2 {
        return 0.0;
    }
    let ids: Vec<AtomId> = (0..total).map(|o| d.id_from_ordinal(o)).collect();
    let atoms = d
        .materialize(&ids)
        .expect("enumerated ids are always valid");
    let mut worst: f64 = 0.0;
    for i in 0..total {
        for j in (i + 1)..total {
            let ip = inner_product(&atoms[i], &atoms[j]).norm();
            worst = worst.max(ip);
        }
    }
    worst * (d.p().get() as f64).sqrt()
}

/// Number of unordered distinct atom pairs a coherence scan would visit.
pub fn coherence_pair_count(d: &Dictionary) -> u128 {
    let n = d.num_atoms() as u128;
    n * (n - 1) / 2
}

/// A sparse coefficient assignment on dictionary atoms. Zero entries are not
/// stored, so the support is exactly the key set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoefficientVector {
    entries: BTreeMap<AtomId, Complex64>,
}

impl CoefficientVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (AtomId, Complex64)>) -> Self {
        let mut cv = Self::new();
        for (id, c) in entries {
            cv.set(id, c);
        }
        cv
    }

    /// Setting an entry to zero removes it.
    pub fn set(&mut self, id: AtomId, c: Complex64) {
        if c.norm() > 0.0 {
            self.entries.insert(id, c);
        } else {
            self.entries.remove(&id);
        }
    }

    pub fn get(&self, id: AtomId) -> Complex64 {
        self.entries
            .get(&id)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn support(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, Complex64)> + '_ {
        self.entries.iter().map(|(&id, &c)| (id, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The resolution map: sends coefficients to the weighted sum of their atoms.
pub fn resolution_apply(d: &Dictionary, f: &CoefficientVector) -> Result<Vec<Complex64>> {
    let mut out = vec![Complex64::new(0.0, 0.0); d.p().as_usize()];
    for (id, c) in f.iter() {
        let atom = d.atom(id)?;
        for (slot, &a) in out.iter_mut().zip(atom.coords()) {
            *slot += c * a;
        }
    }
    Ok(out)
}

/// |sum_x exp(2*pi*i*(a*x^2 + b*x)/p)| by direct summation. Test oracle for
/// the cross-basis magnitude of the chirp construction; requires a != 0 mod p.
pub fn gauss_sum_magnitude(a: u64, b: u64, p: Prime) -> Result<f64> {
    let pv = p.get();
    let a = a % pv;
    let b = b % pv;
    if a == 0 {
        return Err(Error::ZeroQuadraticCoefficient);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 0..pv {
        let e = (a * x % pv * x % pv + b * x % pv) % pv;
        acc += Complex64::from_polar(1.0, 2.0 * PI * e as f64 / pv as f64);
    }
    Ok(acc.norm())
}
