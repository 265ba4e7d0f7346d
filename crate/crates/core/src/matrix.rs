//! Dense square complex matrices, just enough for the Gram/eigen machinery.

use num_complex::Complex64;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_data(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n, "data length must be n*n");
        CMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius mass of the strictly off-diagonal part.
    pub fn offdiag_frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// Sum over i != j of |a_ij|^2.
    pub fn offdiag_abs_sq_sum(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).norm_sqr();
                }
            }
        }
        s
    }

    /// Largest deviation from Hermitian symmetry, max |a_ij - conj(a_ji)|.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            y[i] = acc;
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_trace_per_dim() {
        let m = CMatrix::identity(4);
        assert_eq!(m.trace(), Complex64::new(4.0, 0.0));
        assert_eq!(m.frobenius_norm(), 2.0);
        assert_eq!(m.offdiag_frobenius(), 0.0);
    }

    #[test]
    fn hermitian_defect_detects_asymmetry() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 1, Complex64::new(1.0, 2.0));
        m.set(1, 0, Complex64::new(1.0, -2.0));
        assert_eq!(m.hermitian_defect(), 0.0);
        m.set(1, 0, Complex64::new(1.0, -1.0));
        assert!((m.hermitian_defect() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matvec_matches_hand_expansion() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, Complex64::new(1.0, 0.0));
        m.set(0, 1, Complex64::new(0.0, 1.0));
        m.set(1, 0, Complex64::new(2.0, 0.0));
        m.set(1, 1, Complex64::new(0.0, -1.0));
        let y = m.matvec(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)]);
        assert_eq!(y[0], Complex64::new(-1.0, 0.0));
        assert_eq!(y[1], Complex64::new(4.0, 0.0));
    }
}
