//! Decision procedures for separating maps.
//!
//! A map is reported separating only when an algebraic certificate exists
//! (a scalar-character fit for Fourier symbols, a rank-one unimodular
//! factorization for Schur symbols). Sampling is used one-sidedly: a disjoint
//! pair whose images are not disjoint refutes separation, while the absence
//! of such a pair only cross-checks a certificate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groups::{enumerate_characters, fit_scalar_character, CharacterFit, FiniteGroup};
use crate::linalg::{
    hermitian_eig, polar_decompose, positive_pseudo_inverse, schatten_norm, spectral_projections,
    support_projection, ComplexMatrix, C64,
};
use crate::sample::{derive_seed, random_matrix, random_unitary, rng_from_seed, SampleRng};
use crate::schur::{
    herz_schur_symbol, rank_one_unimodular_factor, RankOneCertificate, SchurSymbol,
};
use crate::vna::{self, project_coefficients, realize, FourierMultiplier, GroupAlgebraElement};

/// Singular values of `B` below this fraction of `||B||` are dropped by the pseudo-inverse.
pub const PSEUDO_INVERSE_CUTOFF: f64 = 1e-9;

const MATRIX_PAIR_ATTEMPTS: usize = 32;

/// Matrix entries kept in the disjoint-pair memo before it is flushed.
const PAIR_CACHE_ENTRIES: usize = 1 << 22;

type DisjointPair = Arc<(ComplexMatrix, ComplexMatrix)>;

#[derive(Default)]
struct PairCache {
    pairs: HashMap<(Algebra, u64), DisjointPair>,
    entries: usize,
}

/// Disjoint pairs are pure functions of `(algebra, seed)` and are shared by
/// every symbol and exponent tested against the same seed.
fn cached_pair(alg: &Algebra, seed: u64) -> Result<DisjointPair> {
    static CACHE: OnceLock<Mutex<PairCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (alg.clone(), seed);
    if let Some(pair) = cache.lock().expect("pair cache poisoned").pairs.get(&key) {
        return Ok(pair.clone());
    }
    let pair = Arc::new(alg.random_disjoint_pair(seed)?);
    let mut guard = cache.lock().expect("pair cache poisoned");
    let size = 2 * alg.size() * alg.size();
    if guard.entries + size > PAIR_CACHE_ENTRIES {
        guard.pairs.clear();
        guard.entries = 0;
    }
    guard.entries += size;
    guard.pairs.insert(key, pair.clone());
    Ok(pair)
}

/// The finite-dimensional algebra a map acts on, with a fixed linear basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Algebra {
    /// `M_n` with matrix units `e_ij` (row-major) and the usual trace.
    Matrix(usize),
    /// `VN(G)` with basis `lambda(s)` and the normalized trace.
    GroupVn(Arc<FiniteGroup>),
}

impl Algebra {
    /// Dimension of the algebra as a vector space.
    pub fn dim(&self) -> usize {
        match self {
            Algebra::Matrix(n) => n * n,
            Algebra::GroupVn(g) => g.order(),
        }
    }

    /// Size of the matrices realizing elements.
    pub fn size(&self) -> usize {
        match self {
            Algebra::Matrix(n) => *n,
            Algebra::GroupVn(g) => g.order(),
        }
    }

    pub fn trace_weight(&self) -> f64 {
        match self {
            Algebra::Matrix(_) => 1.0,
            Algebra::GroupVn(g) => 1.0 / g.order() as f64,
        }
    }

    pub fn coordinates(&self, x: &ComplexMatrix) -> Vec<C64> {
        match self {
            Algebra::Matrix(_) => x.as_slice().to_vec(),
            Algebra::GroupVn(g) => project_coefficients(g, x),
        }
    }

    pub fn element(&self, coords: &[C64]) -> ComplexMatrix {
        match self {
            Algebra::Matrix(n) => ComplexMatrix::from_vec(*n, coords.to_vec()),
            Algebra::GroupVn(g) => realize(g, coords),
        }
    }

    pub fn basis_element(&self, k: usize) -> ComplexMatrix {
        let mut coords = vec![C64::new(0.0, 0.0); self.dim()];
        coords[k] = C64::new(1.0, 0.0);
        self.element(&coords)
    }

    pub fn unit(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.size())
    }

    pub fn random_element(&self, rng: &mut SampleRng) -> ComplexMatrix {
        match self {
            Algebra::Matrix(n) => random_matrix(rng, *n),
            Algebra::GroupVn(g) => GroupAlgebraElement::random(g.clone(), rng).into_matrix(),
        }
    }

    pub fn lp_norm(&self, x: &ComplexMatrix, p: f64) -> Result<f64> {
        schatten_norm(x, p, self.trace_weight())
    }

    /// A nonzero disjoint pair drawn as a pure function of `seed`.
    pub fn random_disjoint_pair(&self, seed: u64) -> Result<(ComplexMatrix, ComplexMatrix)> {
        match self {
            Algebra::GroupVn(g) => {
                let (a, b) = vna::random_disjoint_pair(g, seed)?;
                Ok((a.into_matrix(), b.into_matrix()))
            }
            Algebra::Matrix(n) => random_matrix_disjoint_pair(*n, seed),
        }
    }

    /// Deterministic disjoint pairs that random draws can miss at small sizes.
    ///
    /// For `M_n`: DFT-conjugated diagonal units `F e_ii F*, F e_jj F*` (the
    /// Hadamard pair when `n = 2`), the units `e_ii, e_jj`, and `e_ij, e_ji`.
    /// For `VN(G)`: pairs of distinct spectral projections of each `lambda(s)`,
    /// one family per cyclic subgroup; for `s` of order two these are
    /// `(lambda(e) + lambda(s)) / 2` and `(lambda(e) - lambda(s)) / 2`.
    pub fn probe_pairs(&self) -> Vec<(ComplexMatrix, ComplexMatrix)> {
        match self {
            Algebra::Matrix(n) => matrix_probe_pairs(*n),
            Algebra::GroupVn(g) => group_probe_pairs(g),
        }
    }
}

fn random_matrix_disjoint_pair(n: usize, seed: u64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if n < 2 {
        return Err(Error::TrivialAlgebra);
    }
    let mut rng = rng_from_seed(seed);
    let splitting = |rng: &mut SampleRng| {
        let u = random_unitary(rng, n);
        let mask: Vec<bool> = loop {
            let m: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            if m.iter().any(|&b| b) && m.iter().any(|&b| !b) {
                break m;
            }
        };
        let diag = |keep: bool| {
            let d: Vec<f64> = mask
                .iter()
                .map(|&b| if b == keep { 1.0 } else { 0.0 })
                .collect();
            &(&u * &ComplexMatrix::from_real_diag(&d)) * &u.adjoint()
        };
        (diag(true), diag(false))
    };
    for _ in 0..MATRIX_PAIR_ATTEMPTS {
        let (p, q) = splitting(&mut rng);
        let (r, s) = splitting(&mut rng);
        let x = random_matrix(&mut rng, n);
        let y = random_matrix(&mut rng, n);
        let a = &(&p * &x) * &r;
        let b = &(&q * &y) * &s;
        let floor = 1e-8 * x.frobenius_norm().max(y.frobenius_norm());
        if a.frobenius_norm() > floor && b.frobenius_norm() > floor {
            return Ok((a, b));
        }
    }
    Err(Error::ExhaustedRetries(MATRIX_PAIR_ATTEMPTS))
}

/// Unitary DFT matrix `F_jk = w^{jk} / sqrt(n)`.
pub fn dft_unitary(n: usize) -> ComplexMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, |j, k| {
        C64::from_polar(
            scale,
            std::f64::consts::TAU * ((j * k) % n) as f64 / n as f64,
        )
    })
}

fn matrix_probe_pairs(n: usize) -> Vec<(ComplexMatrix, ComplexMatrix)> {
    let f = dft_unitary(n);
    let fa = f.adjoint();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let a = &(&f * &ComplexMatrix::unit(n, i, i)) * &fa;
            let b = &(&f * &ComplexMatrix::unit(n, j, j)) * &fa;
            out.push((a, b));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push((ComplexMatrix::unit(n, i, i), ComplexMatrix::unit(n, j, j)));
            out.push((ComplexMatrix::unit(n, i, j), ComplexMatrix::unit(n, j, i)));
        }
    }
    out
}

fn group_probe_pairs(g: &Arc<FiniteGroup>) -> Vec<(ComplexMatrix, ComplexMatrix)> {
    let n = g.order();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for s in 0..n {
        if s == g.identity() {
            continue;
        }
        let m = g.element_order(s);
        let mut powers = Vec::with_capacity(m);
        let mut x = g.identity();
        for _ in 0..m {
            powers.push(x);
            x = g.mul(x, s);
        }
        let mut key = powers.clone();
        key.sort_unstable();
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let projections: Vec<ComplexMatrix> = (0..m)
            .map(|k| {
                let mut coeffs = vec![C64::new(0.0, 0.0); n];
                for (j, &sj) in powers.iter().enumerate() {
                    let angle = -std::f64::consts::TAU * ((j * k) % m) as f64 / m as f64;
                    coeffs[sj] += C64::from_polar(1.0 / m as f64, angle);
                }
                realize(g, &coeffs)
            })
            .collect();
        for j in 0..m {
            for k in j + 1..m {
                out.push((projections[j].clone(), projections[k].clone()));
            }
        }
    }
    out
}

/// A linear map on an [`Algebra`], stored as its matrix in the algebra's basis.
#[derive(Clone, Debug)]
pub struct LinearMap {
    algebra: Algebra,
    action: ComplexMatrix,
}

impl LinearMap {
    /// Tabulates `f` on the basis.
    pub fn from_fn(algebra: Algebra, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let d = algebra.dim();
        let mut action = ComplexMatrix::zeros(d);
        for k in 0..d {
            let image = algebra.coordinates(&f(&algebra.basis_element(k)));
            action.set_column(k, &image);
        }
        Self { algebra, action }
    }

    pub fn from_action(algebra: Algebra, action: ComplexMatrix) -> Result<Self> {
        if action.dim() != algebra.dim() {
            return Err(Error::DimMismatch(action.dim(), algebra.dim()));
        }
        Ok(Self { algebra, action })
    }

    pub fn identity(algebra: Algebra) -> Self {
        let d = algebra.dim();
        Self {
            algebra,
            action: ComplexMatrix::identity(d),
        }
    }

    pub fn fourier(m: &FourierMultiplier) -> Self {
        Self {
            algebra: Algebra::GroupVn(m.group().clone()),
            action: ComplexMatrix::from_diag(m.symbol()),
        }
    }

    pub fn schur(m: &SchurSymbol) -> Self {
        Self {
            algebra: Algebra::Matrix(m.dim()),
            action: ComplexMatrix::from_diag(m.matrix().as_slice()),
        }
    }

    pub fn transpose(n: usize) -> Self {
        Self::from_fn(Algebra::Matrix(n), |x| x.transpose())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn action(&self) -> &ComplexMatrix {
        &self.action
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.dim() != self.algebra.size() {
            return Err(Error::DimMismatch(x.dim(), self.algebra.size()));
        }
        let coords = self.algebra.coordinates(x);
        Ok(self.algebra.element(&self.action.mul_vec(&coords)))
    }

    /// Largest basis image norm, a cheap scale for relative residuals.
    fn basis_scale(&self) -> f64 {
        (0..self.algebra.dim())
            .map(|k| {
                let b = self.algebra.basis_element(k);
                self.algebra
                    .element(&self.action.column(k))
                    .frobenius_norm()
                    / b.frobenius_norm()
            })
            .fold(0.0, f64::max)
    }
}

impl Serialize for Algebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Tag<'a> {
            kind: &'a str,
            size: usize,
        }
        match self {
            Algebra::Matrix(n) => Tag {
                kind: "matrix",
                size: *n,
            }
            .serialize(s),
            Algebra::GroupVn(g) => Tag {
                kind: "group-von-neumann",
                size: g.order(),
            }
            .serialize(s),
        }
    }
}

impl Serialize for LinearMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            algebra: &'a Algebra,
            action: &'a ComplexMatrix,
        }
        Raw {
            algebra: &self.algebra,
            action: &self.action,
        }
        .serialize(s)
    }
}

/// Returns the symbol when `T` is a Schur multiplier, i.e. `T(e_ij) = m_ij e_ij`.
pub fn as_schur_multiplier(map: &LinearMap, tol: f64) -> Option<SchurSymbol> {
    let Algebra::Matrix(n) = map.algebra else {
        return None;
    };
    let a = &map.action;
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if i != j && a[(i, j)].norm() > tol * scale {
                return None;
            }
        }
    }
    Some(SchurSymbol::new(ComplexMatrix::from_vec(n, a.diagonal())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Separating,
    NotSeparating,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "index")]
pub enum WitnessSource {
    Trial(usize),
    Probe(usize),
}

/// A disjoint pair whose images are not disjoint.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub source: WitnessSource,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub image_a: ComplexMatrix,
    pub image_b: ComplexMatrix,
    /// Relative disjointness violation of the input pair.
    pub input_violation: f64,
    /// Relative disjointness violation of the images.
    pub violation: f64,
    /// `||a||_p, ||b||_p, ||T a||_p, ||T b||_p` at the verdict's exponent.
    pub lp_norms: [f64; 4],
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Certificate {
    ScalarCharacter(CharacterFit),
    RankOne(RankOneCertificate),
}

#[derive(Clone, Debug, Serialize)]
pub struct Seeds {
    pub base: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_trial: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub trials: usize,
    pub p: f64,
    pub max_deviation: Option<f64>,
    pub seeds: Seeds,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    fn new(status: Status, trials: usize, p: f64, seed: u64) -> Self {
        Self {
            status,
            certificate: None,
            witness: None,
            trials,
            p,
            max_deviation: None,
            seeds: Seeds {
                base: seed,
                witness_trial: None,
            },
            note: None,
        }
    }

    fn with_witness(mut self, w: Witness) -> Self {
        if let WitnessSource::Trial(t) = w.source {
            self.seeds.witness_trial = Some(derive_seed(self.seeds.base, t as u64));
        }
        self.witness = Some(w);
        self
    }
}

fn check_args(p: f64, trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidTrials);
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

fn make_witness(
    map: &LinearMap,
    source: WitnessSource,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    p: f64,
    tol: f64,
) -> Result<Option<Witness>> {
    let image_a = map.apply(a)?;
    let image_b = map.apply(b)?;
    let violation = vna::disjointness_violation(&image_a, &image_b)?;
    if violation <= tol {
        return Ok(None);
    }
    let alg = map.algebra();
    let lp_norms = [
        alg.lp_norm(a, p)?,
        alg.lp_norm(b, p)?,
        alg.lp_norm(&image_a, p)?,
        alg.lp_norm(&image_b, p)?,
    ];
    let input_violation = vna::disjointness_violation(a, b)?;
    Ok(Some(Witness {
        source,
        a: a.clone(),
        b: b.clone(),
        image_a,
        image_b,
        input_violation,
        violation,
        lp_norms,
    }))
}

/// First witness over `trials` random pairs, then (optionally) the probe family.
fn search_witness(
    map: &LinearMap,
    p: f64,
    trials: usize,
    seed: u64,
    tol: f64,
    probes: bool,
) -> Result<Option<Witness>> {
    let alg = map.algebra();
    if alg.size() < 2 {
        return Ok(None);
    }
    for t in 0..trials {
        let pair = cached_pair(alg, derive_seed(seed, t as u64))?;
        if let Some(w) = make_witness(map, WitnessSource::Trial(t), &pair.0, &pair.1, p, tol)? {
            return Ok(Some(w));
        }
    }
    if probes {
        for (k, (a, b)) in alg.probe_pairs().into_iter().enumerate() {
            if let Some(w) = make_witness(map, WitnessSource::Probe(k), &a, &b, p, tol)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Sampled separation test: `trials` random disjoint pairs; the first pair
/// whose images violate disjointness by more than `tol` is the witness.
///
/// Without a witness the status is `Separating`, which is a sampled claim
/// and not a certificate. `p` only affects the norms reported with a witness.
pub fn separating_test(
    map: &LinearMap,
    p: f64,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Verdict> {
    check_args(p, trials)?;
    Ok(match search_witness(map, p, trials, seed, tol, false)? {
        Some(w) => Verdict::new(Status::NotSeparating, trials, p, seed).with_witness(w),
        None => Verdict::new(Status::Separating, trials, p, seed),
    })
}

/// Witness search over the deterministic probe family only.
pub fn probe_witness(map: &LinearMap, p: f64, tol: f64) -> Result<Option<Witness>> {
    let alg = map.algebra();
    for (k, (a, b)) in alg.probe_pairs().into_iter().enumerate() {
        if let Some(w) = make_witness(map, WitnessSource::Probe(k), &a, &b, p, tol)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IsometryReport {
    pub passed: bool,
    pub max_deviation: f64,
}

/// Compares `||T x||_p` with `||x||_p` on `trials` random elements.
pub fn isometry_test(
    map: &LinearMap,
    p: f64,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<IsometryReport> {
    check_args(p, trials)?;
    let alg = map.algebra();
    let mut max_deviation = 0.0f64;
    for t in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, t as u64));
        let x = alg.random_element(&mut rng);
        let nx = alg.lp_norm(&x, p)?;
        if nx == 0.0 {
            continue;
        }
        let ntx = alg.lp_norm(&map.apply(&x)?, p)?;
        max_deviation = max_deviation.max((ntx - nx).abs() / nx);
    }
    Ok(IsometryReport {
        passed: max_deviation <= tol,
        max_deviation,
    })
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct YeadonResiduals {
    /// `w*w = s(B) = J(1)`.
    pub support: f64,
    /// `T(a) = w B J(a)` on the basis.
    pub reconstruction: f64,
    /// `J(ab + ba) = J(a)J(b) + J(b)J(a)` on basis pairs and random elements.
    pub jordan: f64,
    /// `J(a*) = J(a)*`.
    pub adjoint: f64,
    /// `J(ab) = J(a)J(b)` for commuting `a, b = a^2`.
    pub commuting: f64,
    /// Spectral projections of `B` commute with `J(a)`.
    pub commutation: f64,
}

impl YeadonResiduals {
    pub fn max(&self) -> f64 {
        [
            self.support,
            self.reconstruction,
            self.jordan,
            self.adjoint,
            self.commuting,
            self.commutation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `T(a) = w B J(a)` with `w` a partial isometry, `B >= 0`, `J` a Jordan *-homomorphism.
#[derive(Clone, Debug, Serialize)]
pub struct YeadonTriple {
    pub w: ComplexMatrix,
    pub b: ComplexMatrix,
    pub j: LinearMap,
    pub residuals: YeadonResiduals,
}

impl YeadonTriple {
    /// The map `a -> w B J(a)`.
    pub fn compose(&self) -> LinearMap {
        let wb = &self.w * &self.b;
        LinearMap::from_fn(self.j.algebra().clone(), |a| {
            &wb * &self.j.apply(a).expect("basis element has algebra size")
        })
    }

    /// Largest Frobenius distance between corresponding components.
    pub fn distance(&self, other: &YeadonTriple) -> f64 {
        self.w
            .distance(&other.w)
            .max(self.b.distance(&other.b))
            .max(self.j.action().distance(other.j.action()))
    }
}

/// Extracts the Yeadon triple of a map on a finite-dimensional algebra.
///
/// `T(1) = w B` is the polar decomposition of `T(1)`, and
/// `J(a) = B^+ w* T(a)` with `B^+` the pseudo-inverse on the support of `B`.
/// Every defining property is then verified; a residual above `tol` means the
/// map is not separating and is reported as [`Error::NotSeparating`].
pub fn yeadon_extract(map: &LinearMap, tol: f64) -> Result<YeadonTriple> {
    let alg = map.algebra().clone();
    let t1 = map.apply(&alg.unit())?;
    let polar = polar_decompose(&t1, PSEUDO_INVERSE_CUTOFF)?;
    let (w, b) = (polar.w, polar.b);
    let b_pinv = positive_pseudo_inverse(&b, PSEUDO_INVERSE_CUTOFF)?;
    let left = &b_pinv * &w.adjoint();
    let j = LinearMap::from_fn(alg.clone(), |a| {
        &left * &map.apply(a).expect("algebra-sized input")
    });

    let d = alg.dim();
    let basis: Vec<ComplexMatrix> = (0..d).map(|k| alg.basis_element(k)).collect();
    let j_basis: Vec<ComplexMatrix> = basis.iter().map(|a| j.apply(a)).collect::<Result<_>>()?;
    let mut r = YeadonResiduals::default();

    let support = if b.frobenius_norm() == 0.0 {
        ComplexMatrix::zeros(alg.size())
    } else {
        support_projection(&b, PSEUDO_INVERSE_CUTOFF)?
    };
    let j_one = j.apply(&alg.unit())?;
    let s_scale = support.frobenius_norm().max(1.0);
    r.support = (&w.adjoint() * &w)
        .distance(&support)
        .max(j_one.distance(&support))
        / s_scale;

    let t_scale = map.basis_scale().max(f64::MIN_POSITIVE);
    let wb = &w * &b;
    for (a, ja) in basis.iter().zip(&j_basis) {
        let ta = map.apply(a)?;
        let err = ta.distance(&(&wb * ja)) / (a.frobenius_norm() * t_scale);
        r.reconstruction = r.reconstruction.max(err);
        let err = j.apply(&a.adjoint())?.distance(&ja.adjoint()) / a.frobenius_norm();
        r.adjoint = r.adjoint.max(err);
    }

    let jordan = |a: &ComplexMatrix,
                  ja: &ComplexMatrix,
                  c: &ComplexMatrix,
                  jc: &ComplexMatrix|
     -> Result<f64> {
        let lhs = j.apply(&(&(a * c) + &(c * a)))?;
        let rhs = &(ja * jc) + &(jc * ja);
        let scale = a.frobenius_norm() * c.frobenius_norm();
        Ok(if scale > 0.0 {
            lhs.distance(&rhs) / scale
        } else {
            0.0
        })
    };
    for k in 0..d {
        for l in k..d {
            r.jordan = r
                .jordan
                .max(jordan(&basis[k], &j_basis[k], &basis[l], &j_basis[l])?);
        }
    }
    let mut rng = rng_from_seed(0x5eed);
    for _ in 0..4 {
        let a = alg.random_element(&mut rng);
        let c = alg.random_element(&mut rng);
        let (ja, jc) = (j.apply(&a)?, j.apply(&c)?);
        r.jordan = r.jordan.max(jordan(&a, &ja, &c, &jc)?);
        let a2 = &a * &a;
        let err = j.apply(&(&a * &a2))?.distance(&(&ja * &j.apply(&a2)?));
        r.commuting = r
            .commuting
            .max(err / (a.frobenius_norm() * a2.frobenius_norm()));
    }

    if b.frobenius_norm() > 0.0 {
        for (_, proj) in spectral_projections(&b, 1e-8)? {
            for (a, ja) in basis.iter().zip(&j_basis) {
                r.commutation = r
                    .commutation
                    .max(proj.commutator_norm(ja) / a.frobenius_norm());
            }
        }
    }

    if r.max() > tol {
        return Err(Error::NotSeparating(format!(
            "Yeadon residuals exceed {tol:.1e}: support {:.3e}, reconstruction {:.3e}, jordan {:.3e}, adjoint {:.3e}, commuting {:.3e}, commutation {:.3e}",
            r.support, r.reconstruction, r.jordan, r.adjoint, r.commuting, r.commutation
        )));
    }
    Ok(YeadonTriple {
        w,
        b,
        j,
        residuals: r,
    })
}

/// Outcome of the finite-group positive definiteness test.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PositiveDefiniteReport {
    pub positive: bool,
    /// Smallest eigenvalue of `[phi(s^-1 t)]`. When that matrix is not
    /// Hermitian this is `min(lambda_min(Re M), -||Im M||)`, where
    /// `Re M`, `Im M` are its Hermitian and skew-Hermitian parts; it is
    /// negative exactly when the matrix fails to be positive semidefinite.
    pub min_eigenvalue: f64,
    /// Spectral norm of the skew-Hermitian part.
    pub hermitian_defect: f64,
}

/// `phi` is positive definite iff `[phi(s^-1 t)]_{s,t}` is positive semidefinite.
pub fn positive_definite_test(
    group: &FiniteGroup,
    phi: &[C64],
    tol: f64,
) -> Result<PositiveDefiniteReport> {
    let m = herz_schur_symbol(group, phi)?.matrix().clone();
    let sup = phi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = (sup * group.order() as f64).max(f64::MIN_POSITIVE);
    let re = m.hermitian_part();
    let im = ComplexMatrix::from_fn(m.dim(), |i, j| {
        (m[(i, j)] - m[(j, i)].conj()) * C64::new(0.0, -0.5)
    });
    let lam_min = hermitian_eig(&re, 1e-8)?
        .eigenvalues
        .first()
        .copied()
        .unwrap_or(0.0);
    let skew = if im.max_abs() == 0.0 {
        0.0
    } else {
        hermitian_eig(&im, 1e-8)?
            .eigenvalues
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    };
    let min_eigenvalue = if skew <= tol * scale {
        lam_min
    } else {
        lam_min.min(-skew)
    };
    Ok(PositiveDefiniteReport {
        positive: min_eigenvalue >= -tol * scale,
        min_eigenvalue,
        hermitian_defect: skew,
    })
}

/// Classification of the Fourier multiplier with symbol `phi`.
///
/// With a scalar-character fit the verdict is `Separating`, cross-checked by
/// witness search and, for `|c| = 1`, by the isometry test; a failed
/// cross-check downgrades it to `Inconclusive`. Without a fit, a witness from
/// random pairs or the probe family gives `NotSeparating`; if none is found
/// the verdict is `Inconclusive`.
pub fn classify_fourier(
    group: &Arc<FiniteGroup>,
    phi: &[C64],
    p: f64,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Verdict> {
    check_args(p, trials)?;
    let fit = fit_scalar_character(group, phi, tol)?;
    let map = LinearMap::fourier(&FourierMultiplier::new(group.clone(), phi.to_vec())?);
    match fit {
        Some(fit) => {
            let modulus = fit.c.norm();
            let verdict = certified(
                &map,
                Certificate::ScalarCharacter(fit),
                modulus,
                p,
                trials,
                seed,
                tol,
            )?;
            Ok(verdict)
        }
        None => refuted(&map, p, trials, seed, tol),
    }
}

/// Classification of the Schur multiplier with symbol `m`; mirrors [`classify_fourier`].
pub fn classify_schur(
    m: &SchurSymbol,
    p: f64,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Verdict> {
    check_args(p, trials)?;
    let map = LinearMap::schur(m);
    match rank_one_unimodular_factor(m, tol) {
        Some(cert) => {
            let modulus = cert.c.norm();
            certified(
                &map,
                Certificate::RankOne(cert),
                modulus,
                p,
                trials,
                seed,
                tol,
            )
        }
        None => refuted(&map, p, trials, seed, tol),
    }
}

fn certified(
    map: &LinearMap,
    certificate: Certificate,
    modulus: f64,
    p: f64,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Verdict> {
    let mut verdict = Verdict::new(Status::Separating, trials, p, seed);
    verdict.certificate = Some(certificate);
    if let Some(w) = search_witness(map, p, trials, seed, tol, false)? {
        verdict.status = Status::Inconclusive;
        verdict.note = Some("certificate contradicted by a sampled witness".into());
        verdict = verdict.with_witness(w);
    }
    if (modulus - 1.0).abs() <= tol {
        let iso = isometry_test(map, p, trials, seed, tol)?;
        verdict.max_deviation = Some(iso.max_deviation);
        if !iso.passed {
            verdict.status = Status::Inconclusive;
            verdict.note = Some(format!(
                "unimodular certificate but isometry deviation {:.3e}",
                iso.max_deviation
            ));
        }
    }
    Ok(verdict)
}

fn refuted(map: &LinearMap, p: f64, trials: usize, seed: u64, tol: f64) -> Result<Verdict> {
    Ok(match search_witness(map, p, trials, seed, tol, true)? {
        Some(w) => Verdict::new(Status::NotSeparating, trials, p, seed).with_witness(w),
        None => {
            let mut v = Verdict::new(Status::Inconclusive, trials, p, seed);
            v.note = Some("no certificate and no witness".into());
            v
        }
    })
}

/// Every character of `group` scaled by each of `scalars`.
pub fn scaled_characters(group: &FiniteGroup, scalars: &[C64]) -> Result<Vec<Vec<C64>>> {
    Ok(enumerate_characters(group)?
        .iter()
        .flat_map(|psi| {
            scalars
                .iter()
                .map(move |&c| psi.values().iter().map(|v| c * v).collect())
        })
        .collect())
}
