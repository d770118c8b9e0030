//! Truncated single-mode Fock space: ladder matrices and number states.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::float;
use crate::{Error, Result};

/// Dense row-major `N × N` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Matrix {
        Matrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Matrix {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * o.get(k, c);
                }
            }
        }
        out
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        Matrix { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim).map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, o: &Matrix) -> Matrix {
        self.mul(o).sub(&o.mul(self))
    }
}

/// Annihilation and creation matrices on `|0⟩..|N−1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderPair {
    pub a: Matrix,
    pub a_dag: Matrix,
}

impl LadderPair {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

pub fn ladder_pair(dim: usize) -> Result<LadderPair> {
    if dim < 2 {
        return Err(Error::Domain("ladder truncation needs N >= 2"));
    }
    let mut a = Matrix::zeros(dim);
    for n in 1..dim {
        a.set(n - 1, n, Complex64::new(float::sqrt(n as f64), 0.0));
    }
    let a_dag = a.adjoint();
    Ok(LadderPair { a, a_dag })
}

/// `|n⟩ = (a†)ⁿ|0⟩ / √n!`.
pub fn n_photon_state(lp: &LadderPair, n: usize) -> Result<Vec<Complex64>> {
    let dim = lp.dim();
    if n >= dim {
        return Err(Error::TruncationEdge { n, dim });
    }
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[0] = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        v = lp.a_dag.apply(&v);
        let s = float::sqrt(k as f64);
        v.iter_mut().for_each(|c| *c /= s);
    }
    let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    debug_assert!((norm - 1.0).abs() < 1e-12);
    Ok(v)
}

/// `⟨ψ|M|ψ⟩`.
pub fn expectation(m: &Matrix, psi: &[Complex64]) -> Complex64 {
    let mv = m.apply(psi);
    psi.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
}

/// `⟨n|a a† − a† a|n⟩`, defined below the truncation edge.
pub fn commutator_expectation(lp: &LadderPair, n: usize) -> Result<f64> {
    let dim = lp.dim();
    if n + 1 >= dim {
        return Err(Error::TruncationEdge { n, dim });
    }
    let psi = n_photon_state(lp, n)?;
    let c = lp.a.commutator(&lp.a_dag);
    Ok(expectation(&c, &psi).re)
}
