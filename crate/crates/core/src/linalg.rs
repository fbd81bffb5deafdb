//! Small dense linear algebra: a square real matrix, the cyclic Jacobi
//! eigensolver for symmetric matrices and a Lanczos ground-state solver for
//! large Hermitian operators.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Jacobi sweeps before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Square real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// # Panics
    /// If the rows are not all of length `rows.len()`.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            data.extend_from_slice(row);
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &RealMatrix) -> RealMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = RealMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    fn off_diagonal_sqr(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self[(i, j)] * self[(i, j)];
                }
            }
        }
        s
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.n + c]
    }
}

/// Eigenvalues in ascending order; column `k` of `vectors` pairs with
/// `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: RealMatrix,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.n).map(|r| self.vectors[(r, k)]).collect()
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Only the upper
/// triangle's symmetric part is trusted; callers check symmetry first.
pub fn jacobi_eigen(matrix: &RealMatrix) -> Result<SymmetricEigen> {
    let (values, vectors) = jacobi(matrix, true)?;
    Ok(SymmetricEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only, ascending.
pub fn jacobi_eigenvalues(matrix: &RealMatrix) -> Result<Vec<f64>> {
    jacobi(matrix, false).map(|(values, _)| values)
}

fn jacobi(matrix: &RealMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<RealMatrix>)> {
    let n = matrix.n;
    let mut a = matrix.clone();
    let mut v = want_vectors.then(|| RealMatrix::identity(n));
    let scale = a.frobenius_sqr();
    // Off-diagonal mass at or below 1e-12 of the Frobenius norm.
    let threshold = 1e-24 * scale;

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off = a.off_diagonal_sqr();
        if off <= threshold || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                let theta = 0.5 * (aqq - app) / apq;
                let t = {
                    let t = 1.0 / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                let tau = s / (1.0 + c);

                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp;
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq;
                }
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = vrp - s * (vrq + tau * vrp);
                        v[(r, q)] = vrq + s * (vrp - tau * vrq);
                    }
                }
            }
        }
    }
    if !converged && a.off_diagonal_sqr() > threshold {
        return Err(Error::NotConverged {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = v.map(|v| {
        let mut sorted = RealMatrix::zeros(n);
        for (k, &src) in order.iter().enumerate() {
            for r in 0..n {
                sorted[(r, k)] = v[(r, src)];
            }
        }
        sorted
    });
    Ok((values, vectors))
}

/// Dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermitian_residue(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// `v† M v`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.n {
            let row: Complex64 = (0..self.n).map(|j| self[(i, j)] * v[j]).sum();
            acc += v[i].conj() * row;
        }
        acc
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Real matrices go straight
    /// to Jacobi; genuinely complex ones through the real embedding
    /// `[[A, -B], [B, A]]`, whose spectrum is that of `A + iB` doubled.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let residue = self.hermitian_residue();
        if residue > 1e-10 {
            return Err(Error::NonHermitian(residue));
        }
        let n = self.n;
        if self.max_imag() == 0.0 {
            let mut real = RealMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    real[(i, j)] = self[(i, j)].re;
                }
            }
            return jacobi_eigenvalues(&real);
        }
        let mut embedded = RealMatrix::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                embedded[(i, j)] = z.re;
                embedded[(i + n, j + n)] = z.re;
                embedded[(i, j + n)] = -z.im;
                embedded[(i + n, j)] = z.im;
            }
        }
        let doubled = jacobi_eigenvalues(&embedded)?;
        Ok(doubled.into_iter().step_by(2).collect())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.n + c]
    }
}

/// Smallest eigenvalue of the Hermitian operator `apply` on `C^dim`, by
/// Lanczos with full reorthogonalization. The start vector is a fixed
/// pseudo-random Gaussian so no symmetry sector is excluded.
pub fn lanczos_ground_energy(
    dim: usize,
    max_iter: usize,
    mut apply: impl FnMut(&[Complex64]) -> Vec<Complex64>,
) -> Result<f64> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_1a9c);
    let mut q: Vec<Complex64> = (0..dim)
        .map(|_| {
            Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        })
        .collect();
    normalize(&mut q);

    let max_iter = max_iter.min(dim).max(1);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(max_iter);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    loop {
        let mut w = apply(&q);
        let alpha = dot(&q, &w).re;
        for (wi, qi) in w.iter_mut().zip(&q) {
            *wi -= qi * alpha;
        }
        if let (Some(prev), Some(&beta)) = (basis.last(), betas.last()) {
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= pi * beta;
            }
        }
        basis.push(q);
        alphas.push(alpha);
        // Two passes of Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for v in &basis {
                let overlap = dot(v, &w);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= vi * overlap;
                }
            }
        }
        let beta = libm::sqrt(w.iter().map(|z| z.norm_sqr()).sum::<f64>());

        let m = alphas.len();
        let exhausted = beta < 1e-14 || m >= max_iter;
        if exhausted || m.is_multiple_of(8) {
            let mut tri = RealMatrix::zeros(m);
            for i in 0..m {
                tri[(i, i)] = alphas[i];
                if i + 1 < m {
                    tri[(i, i + 1)] = betas[i];
                    tri[(i + 1, i)] = betas[i];
                }
            }
            let ritz = jacobi_eigen(&tri)?;
            let residual = beta * ritz.vectors[(m - 1, 0)].abs();
            if exhausted || residual < 1e-10 {
                return Ok(ritz.values[0]);
            }
        }
        betas.push(beta);
        q = w.into_iter().map(|z| z / beta).collect();
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn normalize(v: &mut [Complex64]) {
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    for z in v {
        *z /= norm;
    }
}
