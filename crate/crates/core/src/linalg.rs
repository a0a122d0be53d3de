//! Dense complex linear algebra on square matrices.
//!
//! Everything here is self-contained: Hermitian eigenproblems are solved with
//! cyclic complex Jacobi rotations, and the SVD and polar decomposition are
//! built on top of the eigendecomposition of `A*A`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default relative tolerance for every "equals zero" decision.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Hard cap on Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Singular values below this fraction of the largest one get their left
/// singular vectors from basis completion instead of `A v / sigma`.
const RANK_CUTOFF: f64 = 1e-12;

#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense square complex matrix, stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from rows, rejecting ragged, non-square or non-finite input.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::MalformedMatrix(format!(
                    "row {i} has length {} but the matrix has {dim} rows",
                    row.len()
                )));
            }
            data.extend(row);
        }
        let m = Self { dim, data };
        if !m.is_finite() {
            return Err(Error::MalformedMatrix("non-finite entry".into()));
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// Matrix unit `e_ij`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(i, j)] = C64::new(1.0, 0.0);
        m
    }

    /// Rank-one `u v*`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    /// Row-major vectorization in the matrix-unit basis.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let src = &other.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance `||self - other||_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `||A - A*||_F`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `||AB - BA||_F`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        (&(self * other) - &(other * self)).frobenius_norm()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Wire format: `{"dim": n, "re": [[...]], "im": [[...]]}`.
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        let n = m.dim;
        let re = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].im).collect())
            .collect();
        MatrixJson { dim: n, re, im }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let n = j.dim;
        if j.re.len() != n || j.im.len() != n {
            return Err(Error::MalformedMatrix(format!(
                "dim is {n} but re has {} rows and im has {} rows",
                j.re.len(),
                j.im.len()
            )));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, (re, im)) in j.re.into_iter().zip(j.im).enumerate() {
            if re.len() != n || im.len() != n {
                return Err(Error::MalformedMatrix(format!(
                    "row {i} is not of length {n}"
                )));
            }
            rows.push(
                re.into_iter()
                    .zip(im)
                    .map(|(a, b)| C64::new(a, b))
                    .collect(),
            );
        }
        ComplexMatrix::from_rows(rows)
    }
}

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix
/// (eigenvectors are the columns).
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lam: Vec<C64> = self.eigenvalues.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.spectral_sum(|i| lam[i])
    }

    /// `sum_i f(i) v_i v_i*`.
    pub fn spectral_sum(&self, mut f: impl FnMut(usize) -> C64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let w = f(k);
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Orthogonal projection onto the span of the eigenvectors selected by `keep`.
    pub fn projection(&self, mut keep: impl FnMut(f64) -> bool) -> ComplexMatrix {
        let lam = self.eigenvalues.clone();
        self.spectral_sum(|k| {
            if keep(lam[k]) {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

/// Sum of squared moduli of the strictly off-diagonal entries.
fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// `tol` bounds the admissible asymmetry `||H - H*||_F <= tol ||H||_F`; the
/// input is symmetrized before iterating.
pub fn hermitian_eig(h: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let n = h.dim();
    let scale = h.frobenius_norm();
    let defect = h.hermitian_defect();
    if defect > tol * scale {
        return Err(Error::NotHermitian(defect / scale));
    }
    let mut a = h.hermitian_part();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);

    let mut converged = scale == 0.0 || n <= 1;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweep += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm(&a) <= f64::EPSILON * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One unitary rotation annihilating `a[p][q]`; accumulates into `v`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let modulus = apq.norm();
    // Subnormal entries carry too few bits for a unit-modulus phase.
    if modulus < f64::MIN_POSITIVE {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * modulus);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = apq / modulus;
    let phase = phase / phase.norm();
    // R = [[c, s e^{i arg}], [-s e^{-i arg}, c]] in the (p, q) plane.
    let r_pq = phase * s;
    let r_qp = -phase.conj() * s;
    let n = a.dim();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * r_qp;
        a[(k, q)] = akp * r_pq + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * r_qp.conj();
        a[(q, k)] = apk * r_pq.conj() + aqk * c;
    }
    a[(p, p)] = C64::new(app - t * modulus, 0.0);
    a[(q, q)] = C64::new(aqq + t * modulus, 0.0);
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * r_qp;
        v[(k, q)] = vkp * r_pq + vkq * c;
    }
}

/// `A = U diag(sigma) V*` with `sigma` descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.sigma.len();
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let s = self.sigma[k];
            for i in 0..n {
                let uik = self.u[(i, k)] * s;
                for j in 0..n {
                    out[(i, j)] += uik * self.v[(j, k)].conj();
                }
            }
        }
        out
    }
}

fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(u: &[C64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Removes the components of `x` along `basis` (two passes).
fn orthogonalize(x: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for b in basis {
            let proj = dot(b, x);
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= proj * bi;
            }
        }
    }
}

/// Singular value decomposition through the Hermitian eigenproblem of `A*A`.
///
/// Singular values are recomputed as `||A v_i||`, which stays accurate for
/// small values where `sqrt(lambda_i)` would not.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let n = a.dim();
    let gram = &a.adjoint() * a;
    let eig = hermitian_eig(&gram, 1e-6)?;
    let order: Vec<usize> = (0..n).rev().collect();
    let v = ComplexMatrix::from_fn(n, |i, k| eig.eigenvectors[(i, order[k])]);

    let images: Vec<Vec<C64>> = (0..n).map(|k| a.mul_vec(&v.column(k))).collect();
    let mut sigma: Vec<f64> = images.iter().map(|c| norm(c)).collect();
    let smax = sigma.iter().cloned().fold(0.0, f64::max);

    let mut ucols: Vec<Option<Vec<C64>>> = vec![None; n];
    let mut accepted: Vec<Vec<C64>> = Vec::with_capacity(n);
    for k in 0..n {
        if sigma[k] > RANK_CUTOFF * smax && sigma[k] > 0.0 {
            let mut col: Vec<C64> = images[k].iter().map(|z| z / sigma[k]).collect();
            orthogonalize(&mut col, &accepted);
            let nrm = norm(&col);
            if nrm > 0.5 {
                col.iter_mut().for_each(|z| *z /= nrm);
                accepted.push(col.clone());
                ucols[k] = Some(col);
            }
        }
    }
    for slot in ucols.iter_mut() {
        if slot.is_some() {
            continue;
        }
        let mut best: Option<(f64, Vec<C64>)> = None;
        for e in 0..n {
            let mut col = vec![C64::new(0.0, 0.0); n];
            col[e] = C64::new(1.0, 0.0);
            orthogonalize(&mut col, &accepted);
            let nrm = norm(&col);
            if best.as_ref().is_none_or(|(b, _)| nrm > *b) {
                best = Some((nrm, col));
            }
        }
        let (nrm, mut col) = best.expect("n > 0 when completing a basis");
        col.iter_mut().for_each(|z| *z /= nrm);
        accepted.push(col.clone());
        *slot = Some(col);
    }

    let mut u = ComplexMatrix::zeros(n);
    for (k, col) in ucols.into_iter().enumerate() {
        u.set_column(k, &col.expect("every column assigned"));
    }
    // Enforce descending order after the recomputation.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    if idx.iter().enumerate().any(|(k, &i)| k != i) {
        let u2 = ComplexMatrix::from_fn(n, |i, k| u[(i, idx[k])]);
        let v2 = ComplexMatrix::from_fn(n, |i, k| v[(i, idx[k])]);
        sigma = idx.iter().map(|&i| sigma[i]).collect();
        return Ok(Svd {
            u: u2,
            sigma,
            v: v2,
        });
    }
    Ok(Svd { u, sigma, v })
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let eig = hermitian_eig(&(&a.adjoint() * a), 1e-6)?;
    let mut sigma: Vec<f64> = (0..a.dim())
        .map(|k| norm(&a.mul_vec(&eig.eigenvectors.column(k))))
        .collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    Ok(sigma)
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `(w * sum_i sigma_i^p)^(1/p)`, the Schatten norm for the trace `w * tr`.
pub fn schatten_norm(a: &ComplexMatrix, p: f64, trace_weight: f64) -> Result<f64> {
    check_exponent(p)?;
    if !trace_weight.is_finite() || trace_weight <= 0.0 {
        return Err(Error::InvalidTraceWeight(trace_weight));
    }
    let sigma = singular_values(a)?;
    Ok(schatten_from_singular_values(&sigma, p, trace_weight))
}

pub(crate) fn schatten_from_singular_values(sigma: &[f64], p: f64, trace_weight: f64) -> f64 {
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return smax;
    }
    let sum: f64 = sigma.iter().map(|s| (s / smax).powf(p)).sum();
    smax * (trace_weight * sum).powf(1.0 / p)
}

/// `A = w B` with `B >= 0` and `w` a partial isometry whose initial
/// projection `w*w` is the support of `B`.
#[derive(Clone, Debug)]
pub struct Polar {
    pub w: ComplexMatrix,
    pub b: ComplexMatrix,
}

/// Polar decomposition; singular values below `tol * sigma_max` count as zero.
pub fn polar_decompose(a: &ComplexMatrix, tol: f64) -> Result<Polar> {
    let n = a.dim();
    let d = svd(a)?;
    let smax = d.sigma.first().copied().unwrap_or(0.0);
    let mut w = ComplexMatrix::zeros(n);
    let mut b = ComplexMatrix::zeros(n);
    for k in 0..n {
        let s = d.sigma[k];
        if s <= tol * smax || s == 0.0 {
            continue;
        }
        for i in 0..n {
            let uik = d.u[(i, k)];
            let vik = d.v[(i, k)];
            for j in 0..n {
                let vjk = d.v[(j, k)].conj();
                w[(i, j)] += uik * vjk;
                b[(i, j)] += vik * vjk * s;
            }
        }
    }
    Ok(Polar {
        w,
        b: b.hermitian_part(),
    })
}

/// Projection onto the range of a positive semidefinite `B`. Eigenvalues
/// below `tol * ||B||` are treated as zero.
pub fn support_projection(b: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(b, tol)?;
    let radius = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol * radius {
        return Err(Error::NotPositive(min));
    }
    Ok(eig.projection(|lam| lam > tol * radius).hermitian_part())
}

/// Moore-Penrose inverse of a positive semidefinite matrix on its support.
pub fn positive_pseudo_inverse(b: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(b, tol)?;
    let radius = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let lam = eig.eigenvalues.clone();
    Ok(eig.spectral_sum(|k| {
        if lam[k] > tol * radius {
            C64::new(1.0 / lam[k], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Spectral projections of a Hermitian matrix, one per eigenvalue cluster.
/// Eigenvalues closer than `tol * spectral_radius` share a cluster.
pub fn spectral_projections(h: &ComplexMatrix, tol: f64) -> Result<Vec<(f64, ComplexMatrix)>> {
    let eig = hermitian_eig(h, tol)?;
    let radius = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let gap = tol * radius.max(f64::MIN_POSITIVE);
    let lam = &eig.eigenvalues;
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=lam.len() {
        if k == lam.len() || lam[k] - lam[k - 1] > gap {
            clusters.push((start, k));
            start = k;
        }
    }
    Ok(clusters
        .into_iter()
        .map(|(lo, hi)| {
            let mean = lam[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
            let proj = eig.spectral_sum(|k| {
                if (lo..hi).contains(&k) {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            (mean, proj)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_matrix, random_unitary, rng_from_seed};

    #[test]
    fn diagonal_input_is_already_solved() {
        let h = ComplexMatrix::from_real_diag(&[2.0, -1.0]);
        let e = hermitian_eig(&h, DEFAULT_TOL).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 2.0]);
        // a permutation of the identity
        for k in 0..2 {
            let col = e.eigenvectors.column(k);
            assert_eq!(
                col.iter()
                    .filter(|z| (z.norm() - 1.0).abs() < 1e-15)
                    .count(),
                1
            );
        }
    }

    #[test]
    fn swap_matrix_eigenvalues() {
        let h = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = hermitian_eig(&h, DEFAULT_TOL).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conjugated_diagonal_round_trip() {
        let mut rng = rng_from_seed(7);
        let v = random_unitary(&mut rng, 3);
        let h = &(&v * &ComplexMatrix::from_real_diag(&[1.0, 2.0, 3.0])) * &v.adjoint();
        let e = hermitian_eig(&h, DEFAULT_TOL).unwrap();
        for (got, want) in e.eigenvalues.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        assert!(e.reconstruct().distance(&h) < 1e-12 * h.frobenius_norm());
        let vv = &e.eigenvectors.adjoint() * &e.eigenvectors;
        assert!(vv.distance(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eig(&a, DEFAULT_TOL),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn eigenvectors_stay_unitary_on_degenerate_spectra() {
        // regular-representation elements of S_4 have eigenvalues of multiplicity up to 3
        let g = crate::groups::symmetric(4).unwrap();
        for seed in 0..200 {
            let mut rng = rng_from_seed(crate::sample::derive_seed(0, seed));
            let coeffs = crate::sample::gaussian_vec(&mut rng, 24);
            let x = crate::vna::realize(&g, &coeffs);
            let v = hermitian_eig(&(&x.adjoint() * &x), 1e-9)
                .unwrap()
                .eigenvectors;
            assert!(
                (&v.adjoint() * &v).distance(&ComplexMatrix::identity(24)) < 1e-12,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn svd_of_identity_and_nilpotent() {
        let s = svd(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(s.sigma, vec![1.0, 1.0, 1.0]);
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let s = svd(&a).unwrap();
        assert_eq!(s.sigma, vec![2.0, 0.0]);
        assert!(s.reconstruct().distance(&a) < 1e-15);
    }

    #[test]
    fn svd_singular_values_match_gram_eigenvalues() {
        let mut rng = rng_from_seed(11);
        for n in 1..8 {
            let a = random_matrix(&mut rng, n);
            let s = svd(&a).unwrap();
            let g = hermitian_eig(&(&a.adjoint() * &a), 1e-9).unwrap();
            for (k, lam) in g.eigenvalues.iter().rev().enumerate() {
                assert!((s.sigma[k] - lam.max(0.0).sqrt()).abs() < 1e-10);
            }
            assert!(s.reconstruct().distance(&a) < 1e-12 * a.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn schatten_examples() {
        let a = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
        assert!((schatten_norm(&a, 2.0, 1.0).unwrap() - 5.0).abs() < 1e-14);
        for n in 1..5 {
            for p in [1.0, 1.5, 2.0, 7.0] {
                let v = schatten_norm(&ComplexMatrix::identity(n), p, 1.0 / n as f64).unwrap();
                assert!((v - 1.0).abs() < 1e-14);
            }
        }
        assert!(matches!(
            schatten_norm(&a, 0.5, 1.0),
            Err(Error::InvalidExponent(_))
        ));
        assert!(matches!(
            schatten_norm(&a, f64::NAN, 1.0),
            Err(Error::InvalidExponent(_))
        ));
        assert!(matches!(
            schatten_norm(&a, 2.0, 0.0),
            Err(Error::InvalidTraceWeight(_))
        ));
    }

    #[test]
    fn schatten_matches_direct_formula() {
        let mut rng = rng_from_seed(3);
        let a = random_matrix(&mut rng, 5);
        let sigma = svd(&a).unwrap().sigma;
        for p in [1.0, 2.0, 4.0] {
            let direct = (0.2 * sigma.iter().map(|s| s.powf(p)).sum::<f64>()).powf(1.0 / p);
            let got = schatten_norm(&a, p, 0.2).unwrap();
            assert!((got - direct).abs() < 1e-12 * direct);
        }
    }

    #[test]
    fn polar_of_positive_definite_is_trivial() {
        let mut rng = rng_from_seed(5);
        let x = random_matrix(&mut rng, 4);
        let a = &(&x * &x.adjoint()) + &ComplexMatrix::identity(4);
        let pd = polar_decompose(&a, DEFAULT_TOL).unwrap();
        assert!(pd.w.distance(&ComplexMatrix::identity(4)) < 1e-10);
        assert!(pd.b.distance(&a) < 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn polar_of_rank_one() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let pd = polar_decompose(&a, DEFAULT_TOL).unwrap();
        assert!(pd.b.distance(&ComplexMatrix::from_real_diag(&[0.0, 2.0])) < 1e-15);
        let w = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(pd.w.distance(&w) < 1e-15);
    }

    #[test]
    fn polar_initial_space_is_support() {
        let mut rng = rng_from_seed(9);
        let u = random_unitary(&mut rng, 4);
        let a = &(&u * &ComplexMatrix::from_real_diag(&[0.0, 1.0, 0.0, 5.0]))
            * &random_unitary(&mut rng, 4);
        let pd = polar_decompose(&a, DEFAULT_TOL).unwrap();
        let s = support_projection(&pd.b, DEFAULT_TOL).unwrap();
        assert!((&pd.w.adjoint() * &pd.w).distance(&s) < 1e-10);
        assert!((&pd.w * &pd.b).distance(&a) < 1e-10);
    }

    #[test]
    fn support_projection_examples() {
        let b = ComplexMatrix::from_real_diag(&[0.0, 2.0]);
        assert!(
            support_projection(&b, DEFAULT_TOL)
                .unwrap()
                .distance(&ComplexMatrix::from_real_diag(&[0.0, 1.0]))
                < 1e-15
        );
        assert_eq!(
            support_projection(&ComplexMatrix::zeros(3), DEFAULT_TOL).unwrap(),
            ComplexMatrix::zeros(3)
        );

        let mut rng = rng_from_seed(1);
        let v = random_unitary(&mut rng, 3);
        let b = &(&v * &ComplexMatrix::from_real_diag(&[0.0, 1e-15, 3.0])) * &v.adjoint();
        let p = support_projection(&b, 1e-9).unwrap();
        assert!((p.trace().re - 1.0).abs() < 1e-12);
        assert!((&p * &p).distance(&p) < 1e-12);
        assert!(p.hermitian_defect() < 1e-12);
    }

    #[test]
    fn support_projection_rejects_indefinite() {
        let b = ComplexMatrix::from_real_diag(&[-1.0, 2.0]);
        assert!(matches!(
            support_projection(&b, DEFAULT_TOL),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c64(1.0, 2.0), c64(0.0, -1.0)],
            vec![c64(3.5, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(
            s,
            r#"{"dim":2,"re":[[1.0,0.0],[3.5,0.0]],"im":[[2.0,-1.0],[0.0,0.0]]}"#
        );
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let bad = r#"{"dim":2,"re":[[1.0,0.0,0.0],[3.5,0.0,1.0]],"im":[[2.0,-1.0],[0.0,0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
    }
}
