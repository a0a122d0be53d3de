//! Schur multipliers on `n x n` matrices and their rank-one unimodular
//! factorizations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Character, FiniteGroup};
use crate::linalg::{ComplexMatrix, C64};
use crate::wire;

/// Symbol `m` of the Schur multiplier `[x_ij] -> [m_ij x_ij]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SchurSymbol {
    m: ComplexMatrix,
}

impl SchurSymbol {
    pub fn new(m: ComplexMatrix) -> Self {
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        schur_apply(self, x)
    }

    /// Norm of the multiplier on `S^2`, `max_ij |m_ij|`.
    pub fn l2_operator_norm(&self) -> f64 {
        self.m.max_abs()
    }

    /// `max |m_ij m_kl - m_il m_kj|` over all 2x2 minors; zero iff rank <= 1.
    pub fn minor_defect(&self) -> f64 {
        let n = self.dim();
        let m = &self.m;
        let mut worst = 0.0f64;
        for i in 0..n {
            for k in i + 1..n {
                for j in 0..n {
                    for l in j + 1..n {
                        let d = m[(i, j)] * m[(k, l)] - m[(i, l)] * m[(k, j)];
                        worst = worst.max(d.norm());
                    }
                }
            }
        }
        worst
    }
}

/// Entrywise product `m o x`.
pub fn schur_apply(m: &SchurSymbol, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.m.hadamard(x)
}

/// `m_ij = c alpha_i beta_j` with unimodular `alpha`, `beta` and gauge `alpha_0 = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankOneCertificate {
    #[serde(with = "wire::complex")]
    pub c: C64,
    #[serde(with = "wire::complex_vec")]
    pub alpha: Vec<C64>,
    #[serde(with = "wire::complex_vec")]
    pub beta: Vec<C64>,
}

impl RankOneCertificate {
    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |i, j| self.c * self.alpha[i] * self.beta[j])
    }

    /// `max_ij |m_ij - c alpha_i beta_j|`.
    pub fn residual(&self, m: &SchurSymbol) -> f64 {
        let r = self.reconstruct();
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((r[(i, j)] - m.entry(i, j)).norm());
            }
        }
        worst
    }

    /// Largest deviation of any `|alpha_i|` or `|beta_j|` from 1.
    pub fn unimodularity_defect(&self) -> f64 {
        self.alpha
            .iter()
            .chain(&self.beta)
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Factors `m_ij = c alpha_i beta_j` with unimodular `alpha`, `beta`.
///
/// Moduli must agree within `tol * max|m_ij|`. Then `c = m_00`,
/// `alpha_i = m_i0 / m_00` and `beta_j = m_0j / c`, each normalized to the
/// unit circle, and the factorization is checked against every entry.
/// The zero symbol yields `c = 0` with all-ones vectors.
pub fn rank_one_unimodular_factor(m: &SchurSymbol, tol: f64) -> Option<RankOneCertificate> {
    let n = m.dim();
    if n == 0 {
        return None;
    }
    let top = m.l2_operator_norm();
    let ones = vec![C64::new(1.0, 0.0); n];
    if top == 0.0 {
        return Some(RankOneCertificate {
            c: C64::new(0.0, 0.0),
            alpha: ones.clone(),
            beta: ones,
        });
    }
    for i in 0..n {
        for j in 0..n {
            if (m.entry(i, j).norm() - top).abs() > tol * top {
                return None;
            }
        }
    }
    let c = m.entry(0, 0);
    let unit = |z: C64| z / z.norm();
    let alpha: Vec<C64> = (0..n)
        .map(|i| {
            if i == 0 {
                C64::new(1.0, 0.0)
            } else {
                unit(m.entry(i, 0) / c)
            }
        })
        .collect();
    let beta: Vec<C64> = (0..n).map(|j| unit(m.entry(0, j) / c)).collect();
    let cert = RankOneCertificate { c, alpha, beta };
    (cert.residual(m) <= tol * top).then_some(cert)
}

/// `m(s, t) = phi(s^-1 t)`.
pub fn herz_schur_symbol(group: &FiniteGroup, phi: &[C64]) -> Result<SchurSymbol> {
    if phi.len() != group.order() {
        return Err(Error::SymbolLength {
            expected: group.order(),
            got: phi.len(),
        });
    }
    Ok(SchurSymbol::new(ComplexMatrix::from_fn(
        group.order(),
        |s, t| phi[group.mul(group.inv(s), t)],
    )))
}

/// A scalar and character recovered from a Herz-Schur certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecoveredCharacter {
    #[serde(with = "wire::complex")]
    pub c: C64,
    pub character: Character,
}

/// Reads `psi(r) = beta(r t) / beta(t)` at `t = e` off a certificate of a
/// Herz-Schur symbol, and checks that `c alpha(s) beta(t) = c' psi(s^-1 t)`
/// with `c' = c alpha(e) beta(e)`. Returns `None` when either check fails.
pub fn recover_character(
    group: &FiniteGroup,
    cert: &RankOneCertificate,
    tol: f64,
) -> Option<RecoveredCharacter> {
    let n = group.order();
    if cert.alpha.len() != n || cert.beta.len() != n {
        return None;
    }
    if cert.c.norm() == 0.0 {
        return Some(RecoveredCharacter {
            c: cert.c,
            character: Character::trivial(group),
        });
    }
    let e = group.identity();
    let psi: Vec<C64> = (0..n)
        .map(|r| cert.beta[group.mul(r, e)] / cert.beta[e])
        .collect();
    let character = Character::new(group, psi, tol).ok()?;
    let c = cert.c * cert.alpha[e] * cert.beta[e];
    let scale = cert.c.norm();
    for s in 0..n {
        for t in 0..n {
            let lhs = cert.c * cert.alpha[s] * cert.beta[t];
            let rhs = c * character.value(group.mul(group.inv(s), t));
            if (lhs - rhs).norm() > tol * scale {
                return None;
            }
        }
    }
    Some(RecoveredCharacter { c, character })
}
