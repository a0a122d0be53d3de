//! The group von Neumann algebra of a finite group.
//!
//! `VN(G)` is realized on `l^2(G)` through the left regular representation
//! `lambda(s) e_t = e_{st}`. An element `lambda(f) = sum_s f(s) lambda(s)` is
//! stored by its coefficient vector `f`, which is authoritative, together with
//! a cached matrix used for spectral computations. The trace is the
//! normalized one, `tau(lambda(f)) = f(e)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::{hermitian_eig, schatten_norm, ComplexMatrix, C64};
use crate::sample::{derive_seed, gaussian_vec, rng_from_seed, SampleRng};

/// Minimal relative gap for splitting a spectrum.
const SPLIT_GAP: f64 = 1e-6;
const PROJECTION_ATTEMPTS: usize = 16;
const DISJOINT_ATTEMPTS: usize = 32;

/// Permutation matrix of left translation by `s`.
pub fn regular_representation(group: &FiniteGroup, s: usize) -> ComplexMatrix {
    let n = group.order();
    let mut m = ComplexMatrix::zeros(n);
    for t in 0..n {
        m[(group.mul(s, t), t)] = C64::new(1.0, 0.0);
    }
    m
}

/// Permutation matrix of right translation `e_t -> e_{t s^-1}`; `VN(G)` is its commutant.
pub fn right_translation(group: &FiniteGroup, s: usize) -> ComplexMatrix {
    let n = group.order();
    let mut m = ComplexMatrix::zeros(n);
    let s_inv = group.inv(s);
    for t in 0..n {
        m[(group.mul(t, s_inv), t)] = C64::new(1.0, 0.0);
    }
    m
}

/// Matrix of `lambda(f)`: entry `(u, t)` is `f(u t^-1)`.
pub fn realize(group: &FiniteGroup, coeffs: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(group.order(), |u, t| coeffs[group.mul(u, group.inv(t))])
}

/// Coefficients `tau(lambda(s)* x)` of the orthogonal projection of `x` onto `VN(G)`.
pub fn project_coefficients(group: &FiniteGroup, x: &ComplexMatrix) -> Vec<C64> {
    let n = group.order();
    (0..n)
        .map(|s| (0..n).map(|t| x[(group.mul(s, t), t)]).sum::<C64>() / n as f64)
        .collect()
}

/// `max_s ||x rho(s) - rho(s) x||_F / ||x||_F`; zero for members of `VN(G)`.
pub fn membership_defect(group: &FiniteGroup, x: &ComplexMatrix) -> f64 {
    let scale = x.frobenius_norm();
    if scale == 0.0 {
        return 0.0;
    }
    (0..group.order())
        .map(|s| x.commutator_norm(&right_translation(group, s)) / scale)
        .fold(0.0, f64::max)
}

/// Membership test by commutation with right translations.
pub fn in_group_algebra(group: &FiniteGroup, x: &ComplexMatrix, tol: f64) -> bool {
    x.dim() == group.order() && membership_defect(group, x) <= tol
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// `lambda(f)` for a coefficient vector `f` on a finite group.
#[derive(Clone, Debug)]
pub struct GroupAlgebraElement {
    group: Arc<FiniteGroup>,
    coeffs: Vec<C64>,
    matrix: ComplexMatrix,
}

impl GroupAlgebraElement {
    pub fn new(group: Arc<FiniteGroup>, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::SymbolLength {
                expected: group.order(),
                got: coeffs.len(),
            });
        }
        let matrix = realize(&group, &coeffs);
        Ok(Self {
            group,
            coeffs,
            matrix,
        })
    }

    /// Projects an arbitrary matrix onto `VN(G)`.
    pub fn from_matrix(group: Arc<FiniteGroup>, x: &ComplexMatrix) -> Result<Self> {
        if x.dim() != group.order() {
            return Err(Error::DimMismatch(x.dim(), group.order()));
        }
        let coeffs = project_coefficients(&group, x);
        Self::new(group, coeffs)
    }

    /// `lambda(s)`.
    pub fn basis(group: Arc<FiniteGroup>, s: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); group.order()];
        coeffs[s] = C64::new(1.0, 0.0);
        Self::new(group, coeffs).expect("length matches")
    }

    pub fn unit(group: Arc<FiniteGroup>) -> Self {
        let e = group.identity();
        Self::basis(group, e)
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        Self::new(group, vec![C64::new(0.0, 0.0); n]).expect("length matches")
    }

    /// `lambda(f)` with standard complex Gaussian `f`.
    pub fn random(group: Arc<FiniteGroup>, rng: &mut SampleRng) -> Self {
        let f = gaussian_vec(rng, group.order());
        Self::new(group, f).expect("length matches")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `lambda(f)* = lambda(f*)` with `f*(s) = conj f(s^-1)`.
    pub fn adjoint(&self) -> Self {
        let g = &self.group;
        let coeffs = (0..g.order())
            .map(|s| self.coeffs[g.inv(s)].conj())
            .collect();
        Self::new(self.group.clone(), coeffs).expect("length matches")
    }

    /// Product in `VN(G)`, i.e. convolution of coefficients.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let g = &self.group;
        let n = g.order();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for s in 0..n {
            let fs = self.coeffs[s];
            if fs == C64::new(0.0, 0.0) {
                continue;
            }
            for t in 0..n {
                out[g.mul(s, t)] += fs * other.coeffs[t];
            }
        }
        Self::new(self.group.clone(), out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.group.clone(), coeffs)
    }

    pub fn scale(&self, c: C64) -> Self {
        let coeffs = self.coeffs.iter().map(|z| z * c).collect();
        Self::new(self.group.clone(), coeffs).expect("length matches")
    }
}

/// `tau(x) = f(e)`.
pub fn plancherel_trace(x: &GroupAlgebraElement) -> C64 {
    x.coeffs[x.group.identity()]
}

/// `tau(|x|^p)^(1/p)` for the normalized trace.
pub fn lp_norm(x: &GroupAlgebraElement, p: f64) -> Result<f64> {
    schatten_norm(&x.matrix, p, 1.0 / x.group.order() as f64)
}

/// The map `lambda(f) -> lambda(phi f)`.
#[derive(Clone, Debug)]
pub struct FourierMultiplier {
    group: Arc<FiniteGroup>,
    symbol: Vec<C64>,
}

impl FourierMultiplier {
    pub fn new(group: Arc<FiniteGroup>, symbol: Vec<C64>) -> Result<Self> {
        if symbol.len() != group.order() {
            return Err(Error::SymbolLength {
                expected: group.order(),
                got: symbol.len(),
            });
        }
        Ok(Self { group, symbol })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn symbol(&self) -> &[C64] {
        &self.symbol
    }

    pub fn apply(&self, x: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
        apply_fourier(self, x)
    }

    /// `M_phi M_chi = M_{phi chi}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let symbol = self
            .symbol
            .iter()
            .zip(&other.symbol)
            .map(|(a, b)| a * b)
            .collect();
        Self::new(self.group.clone(), symbol)
    }

    /// Norm on `L^2(VN(G))`, which is `max_s |phi(s)|`.
    pub fn l2_operator_norm(&self) -> f64 {
        self.symbol.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn apply_fourier(
    m: &FourierMultiplier,
    x: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement> {
    if !same_group(&m.group, &x.group) {
        return Err(Error::GroupMismatch);
    }
    let coeffs = m.symbol.iter().zip(&x.coeffs).map(|(a, b)| a * b).collect();
    GroupAlgebraElement::new(x.group.clone(), coeffs)
}

/// Splits the spectrum of a self-adjoint `x` at the midpoint of its largest
/// gap; returns the spectral projections above and below the cut.
pub fn spectral_split(
    x: &GroupAlgebraElement,
) -> Result<(GroupAlgebraElement, GroupAlgebraElement)> {
    let eig = hermitian_eig(x.matrix(), 1e-8)?;
    let lam = &eig.eigenvalues;
    let radius = lam.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let (k, gap) = lam.windows(2).map(|w| w[1] - w[0]).enumerate().fold(
        (0, f64::NEG_INFINITY),
        |best, (k, g)| if g > best.1 { (k, g) } else { best },
    );
    if lam.len() < 2 || radius == 0.0 || gap <= SPLIT_GAP * radius {
        return Err(Error::DegenerateSpectrum(1));
    }
    let cut = 0.5 * (lam[k] + lam[k + 1]);
    let upper = eig.projection(|v| v > cut);
    let lower = eig.projection(|v| v < cut);
    Ok((
        GroupAlgebraElement::from_matrix(x.group.clone(), &upper)?,
        GroupAlgebraElement::from_matrix(x.group.clone(), &lower)?,
    ))
}

/// Two orthogonal projections `p, q` in `VN(G)` with `pq = 0`, taken as
/// spectral projections of a random self-adjoint element.
pub fn random_projection_pair(
    group: &Arc<FiniteGroup>,
    seed: u64,
) -> Result<(GroupAlgebraElement, GroupAlgebraElement)> {
    if group.order() == 1 {
        let one = GroupAlgebraElement::unit(group.clone());
        let zero = GroupAlgebraElement::zero(group.clone());
        return Ok(if seed.is_multiple_of(2) {
            (one, zero)
        } else {
            (zero, one)
        });
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..PROJECTION_ATTEMPTS {
        let f = GroupAlgebraElement::random(group.clone(), &mut rng);
        let h = f.add(&f.adjoint())?.scale(C64::new(0.5, 0.0));
        match spectral_split(&h) {
            Ok(pair) => return Ok(pair),
            Err(Error::DegenerateSpectrum(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateSpectrum(PROJECTION_ATTEMPTS))
}

/// A nonzero disjoint pair `a = p x r`, `b = q y s` with `pq = rs = 0`.
pub fn random_disjoint_pair(
    group: &Arc<FiniteGroup>,
    seed: u64,
) -> Result<(GroupAlgebraElement, GroupAlgebraElement)> {
    if group.order() < 2 {
        return Err(Error::TrivialAlgebra);
    }
    for attempt in 0..DISJOINT_ATTEMPTS as u64 {
        let (p, q) = random_projection_pair(group, derive_seed(seed, 3 * attempt))?;
        let (r, s) = random_projection_pair(group, derive_seed(seed, 3 * attempt + 1))?;
        let mut rng = rng_from_seed(derive_seed(seed, 3 * attempt + 2));
        let x = GroupAlgebraElement::random(group.clone(), &mut rng);
        let y = GroupAlgebraElement::random(group.clone(), &mut rng);
        let a = p.mul(&x)?.mul(&r)?;
        let b = q.mul(&y)?.mul(&s)?;
        let floor = 1e-8 * x.matrix().frobenius_norm().max(y.matrix().frobenius_norm());
        if a.matrix().frobenius_norm() > floor && b.matrix().frobenius_norm() > floor {
            return Ok((a, b));
        }
    }
    Err(Error::ExhaustedRetries(DISJOINT_ATTEMPTS))
}

/// `max(||a*b||_F, ||ab*||_F) / (||a||_F ||b||_F)`, zero when either operand vanishes.
pub fn disjointness_violation(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(a.dim(), b.dim()));
    }
    let scale = a.frobenius_norm() * b.frobenius_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let left = (&a.adjoint() * b).frobenius_norm();
    let right = (a * &b.adjoint()).frobenius_norm();
    Ok(left.max(right) / scale)
}

/// `a*b = ab* = 0` up to `tol` relative to `||a||_F ||b||_F`.
pub fn is_disjoint(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(disjointness_violation(a, b)? <= tol)
}
