//! Theorem-verification suite: seeded symbol generators and a runner that
//! evaluates every property cell for a configured set of groups, matrix sizes
//! and exponents.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::classify::{
    classify_fourier, classify_schur, isometry_test, positive_definite_test, separating_test,
    yeadon_extract, Certificate, LinearMap, Status,
};
use crate::error::{Error, Result};
use crate::groups::{
    character_residual, commutator_subgroup, enumerate_characters, fit_scalar_character,
    load_group, FiniteGroup,
};
use crate::linalg::{c64, ComplexMatrix, C64, DEFAULT_TOL};
use crate::sample::{derive_seed, gaussian_vec, random_matrix, rng_from_seed, unimodular};
use crate::schur::{herz_schur_symbol, rank_one_unimodular_factor, recover_character, SchurSymbol};
use crate::vna::FourierMultiplier;
use crate::wire;

use rand::Rng;

/// Scalars `c` multiplying characters in the forward checks.
pub const FORWARD_SCALARS: [C64; 5] = [
    c64(0.0, 0.0),
    c64(1.0, 0.0),
    c64(2.0, 0.0),
    c64(0.0, 1.0),
    c64(1.0, 1.0),
];

/// Symbols within this distance of a scaled character are not used as non-characters.
pub const NON_CHARACTER_MARGIN: f64 = 1e-6;

/// Minimum relative image violation a witness must show.
pub const WITNESS_MARGIN: f64 = 1e-6;

/// Bound on Yeadon residuals, reconstruction and re-extraction distance.
pub const YEADON_TOL: f64 = 1e-8;

/// Lower bound on character Gram eigenvalues.
pub const PSD_FLOOR: f64 = -1e-10;

/// Non-character Gram matrices must have an eigenvalue below this.
pub const NON_PSD_CEILING: f64 = -1e-9;

const GENERATOR_ATTEMPTS: usize = 64;

/// Number of random-symbol families used by the generators.
pub const SYMBOL_FAMILIES: usize = 3;

/// A symbol with no scalar-character fit at [`NON_CHARACTER_MARGIN`].
///
/// Families: `0` Gaussian entries, `1` unimodular entries, `2` a unimodular
/// multiple of a character with one entry moved by `1e-2`. Returns `None` for
/// the trivial group, where every symbol is a scaled character.
pub fn random_non_character_symbol(
    group: &FiniteGroup,
    seed: u64,
    family: usize,
) -> Result<Option<Vec<C64>>> {
    let n = group.order();
    if n < 2 {
        return Ok(None);
    }
    let characters = enumerate_characters(group)?;
    let mut rng = rng_from_seed(seed);
    for _ in 0..GENERATOR_ATTEMPTS {
        let phi = match family % SYMBOL_FAMILIES {
            0 => gaussian_vec(&mut rng, n),
            1 => (0..n).map(|_| unimodular(&mut rng)).collect(),
            _ => {
                let psi = &characters[rng.random_range(0..characters.len())];
                let c = unimodular(&mut rng);
                let mut phi: Vec<C64> = psi.values().iter().map(|v| c * v).collect();
                phi[rng.random_range(0..n)] += unimodular(&mut rng) * 1e-2;
                phi
            }
        };
        if fit_scalar_character(group, &phi, NON_CHARACTER_MARGIN)?.is_none() {
            return Ok(Some(phi));
        }
    }
    Ok(None)
}

/// A unimodular symbol with `phi(e) = 1` that is not a character.
///
/// With `hermitian` the symbol also satisfies `phi(s^-1) = conj phi(s)`, so
/// its Gram matrix is Hermitian and positivity hinges on the spectrum alone;
/// involutions then take values `+-1`. Returns `None` when the class has no
/// non-character member within the attempt budget (e.g. `hermitian` on `C_2`).
pub fn random_unimodular_non_character(
    group: &FiniteGroup,
    seed: u64,
    hermitian: bool,
) -> Result<Option<Vec<C64>>> {
    let n = group.order();
    let mut rng = rng_from_seed(seed);
    for _ in 0..GENERATOR_ATTEMPTS {
        let mut phi = vec![c64(1.0, 0.0); n];
        for s in 0..n {
            let inv = group.inv(s);
            if s == group.identity() || (hermitian && inv < s) {
                continue;
            }
            if hermitian && inv == s {
                phi[s] = if rng.random_bool(0.5) {
                    c64(1.0, 0.0)
                } else {
                    c64(-1.0, 0.0)
                };
            } else {
                phi[s] = unimodular(&mut rng);
                if hermitian {
                    phi[inv] = phi[s].conj();
                }
            }
        }
        if fit_scalar_character(group, &phi, NON_CHARACTER_MARGIN)?.is_none() {
            return Ok(Some(phi));
        }
    }
    Ok(None)
}

/// `m_ij = c alpha_i beta_j` with random unimodular `alpha`, `beta`.
pub fn random_rank_one_symbol(n: usize, seed: u64, c: C64) -> SchurSymbol {
    let mut rng = rng_from_seed(seed);
    let alpha: Vec<C64> = (0..n).map(|_| unimodular(&mut rng)).collect();
    let beta: Vec<C64> = (0..n).map(|_| unimodular(&mut rng)).collect();
    SchurSymbol::new(ComplexMatrix::from_fn(n, |i, j| c * alpha[i] * beta[j]))
}

/// A Schur symbol with no rank-one unimodular factorization.
///
/// Families: `0` Gaussian entries, `1` unimodular entries, `2` a unimodular
/// rank-one symbol with one entry rotated by `0.1` rad. `None` when `n < 2`.
pub fn random_non_factorable_symbol(n: usize, seed: u64, family: usize) -> Option<SchurSymbol> {
    if n < 2 {
        return None;
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..GENERATOR_ATTEMPTS {
        let m = match family % SYMBOL_FAMILIES {
            0 => random_matrix(&mut rng, n),
            1 => ComplexMatrix::from_fn(n, |_, _| unimodular(&mut rng)),
            _ => {
                let mut m = random_rank_one_symbol(n, rng.random(), unimodular(&mut rng))
                    .matrix()
                    .clone();
                let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
                m[(i, j)] *= C64::from_polar(1.0, 0.1);
                m
            }
        };
        let m = SchurSymbol::new(m);
        if rank_one_unimodular_factor(&m, NON_CHARACTER_MARGIN).is_none() {
            return Some(m);
        }
    }
    None
}

/// A user-supplied symbol with its expected verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolCase {
    pub name: String,
    /// Group spec for a Fourier symbol; absent for a Schur symbol.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Fourier symbol as `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<Vec<[f64; 2]>>,
    /// Schur symbol.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<ComplexMatrix>,
    pub expect: Status,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_groups")]
    pub groups: Vec<String>,
    #[serde(default = "default_p_values")]
    pub p_values: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default = "default_schur_dims")]
    pub schur_dims: Vec<usize>,
    /// Random symbols drawn per group, size and exponent.
    #[serde(default = "default_random_symbols")]
    pub random_symbols: usize,
    #[serde(default)]
    pub symbols: Vec<SymbolCase>,
}

fn default_groups() -> Vec<String> {
    [
        "cyclic(2)",
        "cyclic(3)",
        "cyclic(4)",
        "cyclic(5)",
        "cyclic(6)",
        "cyclic(7)",
        "cyclic(8)",
        "cyclic(2)^2",
        "cyclic(2)^3",
        "cyclic(2)xcyclic(4)",
        "symmetric(3)",
        "dihedral(4)",
        "quaternion8",
    ]
    .map(String::from)
    .to_vec()
}

fn default_p_values() -> Vec<f64> {
    vec![1.0, 2.0, 4.0]
}

fn default_trials() -> usize {
    200
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_schur_dims() -> Vec<usize> {
    vec![2, 3, 5]
}

fn default_random_symbols() -> usize {
    20
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            groups: default_groups(),
            p_values: default_p_values(),
            trials: default_trials(),
            seed: 0,
            tol: default_tol(),
            output: None,
            schur_dims: default_schur_dims(),
            random_symbols: default_random_symbols(),
            symbols: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidTrials);
        }
        if self.p_values.is_empty() {
            return Err(Error::InvalidConfig("p_values is empty".into()));
        }
        if let Some(&p) = self
            .p_values
            .iter()
            .find(|p| !(**p >= 1.0 && p.is_finite()))
        {
            return Err(Error::InvalidExponent(p));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        for case in &self.symbols {
            match (&case.group, &case.symbol, &case.matrix) {
                (Some(_), Some(_), None) | (None, None, Some(_)) => {}
                _ => {
                    return Err(Error::InvalidConfig(format!(
                        "symbol '{}' needs either group and symbol, or matrix",
                        case.name
                    )))
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Passed,
    Failed,
    /// No groups were configured; nothing verified is not success.
    Empty,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseFailure {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub theorem: String,
    pub subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub cases: usize,
    pub passed: bool,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub failures: Vec<CaseFailure>,
    pub wall_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: SuiteConfig,
    pub outcome: Outcome,
    pub failed_cells: usize,
    pub cells: Vec<CellReport>,
}

impl SuiteReport {
    /// 0 when every cell passes, 1 on any failure, 2 when nothing was configured.
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Passed => 0,
            Outcome::Failed => 1,
            Outcome::Empty => 2,
        }
    }

    /// One line per cell.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            let p = c.p.map(|p| format!(" p={p}")).unwrap_or_default();
            out.push_str(&format!(
                "{} {} {}{} cases={} max_residual={:.2e} {}ms\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.theorem,
                c.subject,
                p,
                c.cases,
                c.max_residual,
                c.wall_ms
            ));
            for f in &c.failures {
                out.push_str(&format!("    case {}: {}\n", f.index, f.detail));
            }
        }
        let verdict = match self.outcome {
            Outcome::Passed => "all cells passed",
            Outcome::Failed => "some cells failed",
            Outcome::Empty => "no groups configured",
        };
        out.push_str(&format!(
            "{} cells, {} failed: {verdict}\n",
            self.cells.len(),
            self.failed_cells
        ));
        out
    }
}

struct Cell {
    report: CellReport,
    start: Instant,
}

impl Cell {
    fn new(theorem: &str, subject: &str, p: Option<f64>) -> Self {
        Self {
            report: CellReport {
                theorem: theorem.into(),
                subject: subject.into(),
                p,
                cases: 0,
                passed: true,
                max_residual: 0.0,
                note: None,
                failures: Vec::new(),
                wall_ms: 0,
            },
            start: Instant::now(),
        }
    }

    fn case(&mut self, residual: f64) {
        self.report.cases += 1;
        if residual.is_nan() {
            self.report.max_residual = f64::NAN;
        } else {
            self.report.max_residual = self.report.max_residual.max(residual);
        }
    }

    fn fail(&mut self, index: usize, seed: Option<u64>, detail: impl Into<String>) {
        self.report.passed = false;
        self.report.failures.push(CaseFailure {
            index,
            seed,
            detail: detail.into(),
        });
    }

    fn check(
        &mut self,
        ok: bool,
        index: usize,
        seed: Option<u64>,
        detail: impl FnOnce() -> String,
    ) {
        if !ok {
            self.fail(index, seed, detail());
        }
    }

    fn note(&mut self, note: impl Into<String>) {
        self.report.note = Some(note.into());
    }

    fn finish(mut self) -> CellReport {
        self.report.wall_ms = self.start.elapsed().as_millis();
        self.report
    }
}

/// Runs every configured cell. Cells are sorted by theorem, subject and `p`.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let mut cells = Vec::new();
    if config.groups.is_empty() {
        return Ok(SuiteReport {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config: config.clone(),
            outcome: Outcome::Empty,
            failed_cells: 0,
            cells,
        });
    }
    let groups: Vec<(String, Arc<FiniteGroup>)> = config
        .groups
        .iter()
        .map(|spec| Ok((spec.clone(), Arc::new(load_group(spec)?))))
        .collect::<Result<_>>()?;

    let results: Vec<Result<Vec<CellReport>>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (name, g) in &groups {
            handles.push(scope.spawn(move || group_cells(config, name, g)));
        }
        for &n in &config.schur_dims {
            handles.push(scope.spawn(move || schur_cells(config, n)));
        }
        handles.push(scope.spawn(move || symbol_cells(config)));
        handles
            .into_iter()
            .map(|h| h.join().expect("suite worker panicked"))
            .collect()
    });
    for r in results {
        cells.extend(r?);
    }
    cells.sort_by(|a, b| {
        (a.theorem.as_str(), a.subject.as_str())
            .cmp(&(b.theorem.as_str(), b.subject.as_str()))
            .then(a.p.unwrap_or(0.0).total_cmp(&b.p.unwrap_or(0.0)))
    });
    let failed_cells = cells.iter().filter(|c| !c.passed).count();
    Ok(SuiteReport {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        outcome: if failed_cells == 0 {
            Outcome::Passed
        } else {
            Outcome::Failed
        },
        failed_cells,
        cells,
    })
}

fn group_cells(cfg: &SuiteConfig, name: &str, g: &Arc<FiniteGroup>) -> Result<Vec<CellReport>> {
    let mut out = vec![characters_cell(name, g)?];
    for &p in &cfg.p_values {
        out.push(fourier_forward_cell(cfg, name, g, p)?);
        out.push(fourier_converse_cell(cfg, name, g, p)?);
    }
    out.push(fourier_cross_p_cell(cfg, name, g)?);
    out.push(fourier_yeadon_cell(cfg, name, g)?);
    out.push(positive_definite_cell(cfg, name, g)?);
    out.push(herz_schur_cell(cfg, name, g)?);
    Ok(out)
}

fn schur_cells(cfg: &SuiteConfig, n: usize) -> Result<Vec<CellReport>> {
    let subject = format!("M_{n}");
    let mut out = Vec::new();
    for &p in &cfg.p_values {
        out.push(schur_forward_cell(cfg, &subject, n, p)?);
        out.push(schur_converse_cell(cfg, &subject, n, p)?);
    }
    out.push(schur_cross_p_cell(cfg, &subject, n)?);
    out.push(schur_yeadon_cell(cfg, &subject, n)?);
    Ok(out)
}

fn characters_cell(name: &str, g: &FiniteGroup) -> Result<CellReport> {
    let mut cell = Cell::new("characters", name, None);
    let chars = enumerate_characters(g)?;
    let expected = g.order() / commutator_subgroup(g).len();
    for (k, psi) in chars.iter().enumerate() {
        let r = character_residual(g, psi.values());
        cell.case(r);
        cell.check(r < 1e-12, k, None, || {
            format!("character {k} residual {r:.3e}")
        });
    }
    cell.check(chars.len() == expected, chars.len(), None, || {
        format!(
            "found {} characters, expected |G/[G,G]| = {expected}",
            chars.len()
        )
    });
    Ok(cell.finish())
}

fn scaled(psi: &[C64], c: C64) -> Vec<C64> {
    psi.iter().map(|v| c * v).collect()
}

fn fourier_forward_cell(
    cfg: &SuiteConfig,
    name: &str,
    g: &Arc<FiniteGroup>,
    p: f64,
) -> Result<CellReport> {
    let mut cell = Cell::new("fourier-forward", name, Some(p));
    let chars = enumerate_characters(g)?;
    for (ci, &c) in FORWARD_SCALARS.iter().enumerate() {
        for (k, psi) in chars.iter().enumerate() {
            let index = ci * chars.len() + k;
            let phi = scaled(psi.values(), c);
            let v = classify_fourier(g, &phi, p, cfg.trials, cfg.seed, cfg.tol)?;
            cell.case(v.max_deviation.unwrap_or(0.0));
            let certified = match &v.certificate {
                Some(Certificate::ScalarCharacter(fit)) => {
                    (fit.c - c).norm() < 1e-12
                        && (c.norm() == 0.0 || fit.character.distance(psi) < 1e-9)
                }
                _ => false,
            };
            cell.check(
                v.status == Status::Separating && certified,
                index,
                Some(cfg.seed),
                || {
                    format!(
                        "c={c} character {k}: status {:?}, note {:?}",
                        v.status, v.note
                    )
                },
            );
            if c.norm() != 0.0 && (c.norm() - 1.0).abs() > 1e-12 && p != 2.0 {
                let iso = isometry_test(
                    &LinearMap::fourier(&FourierMultiplier::new(g.clone(), phi)?),
                    p,
                    cfg.trials.min(20),
                    cfg.seed,
                    cfg.tol,
                )?;
                cell.check(!iso.passed, index, Some(cfg.seed), || {
                    format!("c={c} character {k}: isometry passed although |phi| != 1")
                });
            }
        }
    }
    Ok(cell.finish())
}

fn fourier_converse_cell(
    cfg: &SuiteConfig,
    name: &str,
    g: &Arc<FiniteGroup>,
    p: f64,
) -> Result<CellReport> {
    let mut cell = Cell::new("fourier-converse", name, Some(p));
    if g.order() < 2 {
        cell.note("vacuous: every symbol on the trivial group is a scaled character");
        return Ok(cell.finish());
    }
    for k in 0..cfg.random_symbols {
        let seed = derive_seed(cfg.seed, k as u64);
        let Some(phi) = random_non_character_symbol(g, seed, k)? else {
            cell.fail(k, Some(seed), "no non-character symbol drawn");
            continue;
        };
        let v = classify_fourier(g, &phi, p, cfg.trials, cfg.seed, cfg.tol)?;
        match &v.witness {
            Some(w) if v.status == Status::NotSeparating => {
                cell.case(w.input_violation);
                cell.check(
                    w.violation > WITNESS_MARGIN && w.input_violation <= cfg.tol,
                    k,
                    Some(seed),
                    || {
                        format!(
                            "weak witness: image violation {:.3e}, input violation {:.3e}",
                            w.violation, w.input_violation
                        )
                    },
                );
            }
            _ => {
                cell.case(f64::NAN);
                cell.fail(
                    k,
                    Some(seed),
                    format!(
                        "status {:?} for symbol {:?}",
                        v.status,
                        wire::symbol_to_pairs(&phi)
                    ),
                );
            }
        }
    }
    Ok(cell.finish())
}

fn cross_p_statuses(cfg: &SuiteConfig, map: &LinearMap) -> Result<Vec<Status>> {
    cfg.p_values
        .iter()
        .map(|&p| Ok(separating_test(map, p, cfg.trials, cfg.seed, cfg.tol)?.status))
        .collect()
}

fn fourier_cross_p_cell(cfg: &SuiteConfig, name: &str, g: &Arc<FiniteGroup>) -> Result<CellReport> {
    let mut cell = Cell::new("cross-p", name, None);
    let mut symbols: Vec<(Option<u64>, Vec<C64>)> = Vec::new();
    for psi in enumerate_characters(g)? {
        for c in [c64(1.0, 0.0), c64(2.0, 0.0)] {
            symbols.push((None, scaled(psi.values(), c)));
        }
    }
    for k in 0..cfg.random_symbols.min(10) {
        let seed = derive_seed(cfg.seed, k as u64);
        if let Some(phi) = random_non_character_symbol(g, seed, k)? {
            symbols.push((Some(seed), phi));
        }
    }
    for (index, (seed, phi)) in symbols.into_iter().enumerate() {
        let map = LinearMap::fourier(&FourierMultiplier::new(g.clone(), phi)?);
        let statuses = cross_p_statuses(cfg, &map)?;
        cell.case(0.0);
        cell.check(
            statuses.windows(2).all(|w| w[0] == w[1]),
            index,
            seed,
            || format!("statuses differ across p: {statuses:?}"),
        );
    }
    Ok(cell.finish())
}

fn yeadon_case(cell: &mut Cell, index: usize, seed: Option<u64>, map: &LinearMap) -> Result<()> {
    match yeadon_extract(map, YEADON_TOL) {
        Ok(y) => {
            let scale = map.action().max_abs().max(1.0);
            let rebuilt = y.compose();
            let recon = rebuilt.action().distance(map.action()) / scale;
            let again = yeadon_extract(&rebuilt, YEADON_TOL)?;
            let drift = y.distance(&again);
            cell.case(y.residuals.max().max(recon).max(drift));
            cell.check(
                recon < YEADON_TOL && drift < YEADON_TOL,
                index,
                seed,
                || format!("reconstruction {recon:.3e}, re-extraction drift {drift:.3e}"),
            );
        }
        Err(Error::NotSeparating(msg)) => {
            cell.case(f64::NAN);
            cell.fail(index, seed, msg);
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn yeadon_rejects(cell: &mut Cell, index: usize, seed: Option<u64>, map: &LinearMap) -> Result<()> {
    cell.case(0.0);
    match yeadon_extract(map, YEADON_TOL) {
        Err(Error::NotSeparating(_)) => Ok(()),
        Ok(y) => {
            cell.fail(
                index,
                seed,
                format!(
                    "non-separating map produced a triple (max residual {:.3e})",
                    y.residuals.max()
                ),
            );
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn fourier_yeadon_cell(cfg: &SuiteConfig, name: &str, g: &Arc<FiniteGroup>) -> Result<CellReport> {
    let mut cell = Cell::new("yeadon", name, None);
    let mut index = 0;
    for psi in enumerate_characters(g)? {
        for c in [c64(1.0, 0.0), c64(2.0, 0.0), c64(0.0, 1.0)] {
            let map =
                LinearMap::fourier(&FourierMultiplier::new(g.clone(), scaled(psi.values(), c))?);
            yeadon_case(&mut cell, index, None, &map)?;
            index += 1;
        }
    }
    for k in 0..cfg.random_symbols.min(5) {
        let seed = derive_seed(cfg.seed, k as u64);
        if let Some(phi) = random_non_character_symbol(g, seed, k)? {
            let map = LinearMap::fourier(&FourierMultiplier::new(g.clone(), phi)?);
            yeadon_rejects(&mut cell, index, Some(seed), &map)?;
        }
        index += 1;
    }
    Ok(cell.finish())
}

fn positive_definite_cell(
    cfg: &SuiteConfig,
    name: &str,
    g: &Arc<FiniteGroup>,
) -> Result<CellReport> {
    let mut cell = Cell::new("positive-definite", name, None);
    let mut index = 0;
    for psi in enumerate_characters(g)? {
        let r = positive_definite_test(g, psi.values(), cfg.tol)?;
        cell.case(-r.min_eigenvalue.min(0.0));
        cell.check(
            r.positive && r.min_eigenvalue >= PSD_FLOOR,
            index,
            None,
            || {
                format!(
                    "character Gram matrix has eigenvalue {:.3e}",
                    r.min_eigenvalue
                )
            },
        );
        index += 1;
    }
    let mut hermitian_drawn = 0;
    for hermitian in [false, true] {
        for k in 0..cfg.random_symbols {
            let seed = derive_seed(
                cfg.seed,
                (k + if hermitian { cfg.random_symbols } else { 0 }) as u64,
            );
            let Some(phi) = random_unimodular_non_character(g, seed, hermitian)? else {
                continue;
            };
            hermitian_drawn += hermitian as usize;
            let r = positive_definite_test(g, &phi, cfg.tol)?;
            cell.case(0.0);
            if r.min_eigenvalue < 0.0 && r.min_eigenvalue >= NON_PSD_CEILING {
                cell.fail(
                    index,
                    Some(seed),
                    format!(
                        "min eigenvalue {:.3e} flagged for tolerance review",
                        r.min_eigenvalue
                    ),
                );
            } else {
                cell.check(
                    !r.positive && r.min_eigenvalue < NON_PSD_CEILING,
                    index,
                    Some(seed),
                    || {
                        format!(
                            "non-character symbol reported positive, min eigenvalue {:.3e}",
                            r.min_eigenvalue
                        )
                    },
                );
            }
            index += 1;
        }
    }
    if hermitian_drawn == 0 && cfg.random_symbols > 0 {
        cell.note(
            "no Hermitian unimodular non-character exists; only non-Hermitian symbols checked",
        );
    }
    Ok(cell.finish())
}

fn herz_schur_cell(cfg: &SuiteConfig, name: &str, g: &Arc<FiniteGroup>) -> Result<CellReport> {
    let mut cell = Cell::new("herz-schur", name, None);
    let mut index = 0;
    for psi in enumerate_characters(g)? {
        for c in [c64(1.0, 0.0), c64(0.0, 2.0)] {
            let m = herz_schur_symbol(g, &scaled(psi.values(), c))?;
            let recovered = rank_one_unimodular_factor(&m, cfg.tol)
                .and_then(|cert| recover_character(g, &cert, cfg.tol));
            match recovered {
                Some(rec) => {
                    let err = (rec.c - c).norm().max(rec.character.distance(&psi));
                    cell.case(err);
                    cell.check(err < 1e-9, index, None, || {
                        format!("recovered with error {err:.3e}")
                    });
                }
                None => {
                    cell.case(f64::NAN);
                    cell.fail(index, None, "no certificate recovered");
                }
            }
            index += 1;
        }
    }
    Ok(cell.finish())
}

fn schur_forward_cell(cfg: &SuiteConfig, subject: &str, n: usize, p: f64) -> Result<CellReport> {
    let mut cell = Cell::new("schur-forward", subject, Some(p));
    for k in 0..cfg.random_symbols {
        let seed = derive_seed(cfg.seed, k as u64);
        let c = FORWARD_SCALARS[k % FORWARD_SCALARS.len()];
        let m = random_rank_one_symbol(n, seed, c);
        let v = classify_schur(&m, p, cfg.trials, cfg.seed, cfg.tol)?;
        let recon = match &v.certificate {
            Some(Certificate::RankOne(cert)) => cert.residual(&m),
            _ => f64::INFINITY,
        };
        cell.case(recon.max(v.max_deviation.unwrap_or(0.0)));
        cell.check(
            v.status == Status::Separating && recon < 1e-10 * c.norm().max(1.0),
            k,
            Some(seed),
            || {
                format!(
                    "c={c}: status {:?}, reconstruction {recon:.3e}, note {:?}",
                    v.status, v.note
                )
            },
        );
    }
    Ok(cell.finish())
}

fn schur_converse_cell(cfg: &SuiteConfig, subject: &str, n: usize, p: f64) -> Result<CellReport> {
    let mut cell = Cell::new("schur-converse", subject, Some(p));
    if n < 2 {
        cell.note("vacuous: every 1x1 symbol factors");
        return Ok(cell.finish());
    }
    for k in 0..cfg.random_symbols {
        let seed = derive_seed(cfg.seed, k as u64);
        let Some(m) = random_non_factorable_symbol(n, seed, k) else {
            cell.fail(k, Some(seed), "no non-factorable symbol drawn");
            continue;
        };
        let v = classify_schur(&m, p, cfg.trials, cfg.seed, cfg.tol)?;
        match &v.witness {
            Some(w) if v.status == Status::NotSeparating => {
                cell.case(w.input_violation);
                cell.check(
                    w.violation > WITNESS_MARGIN && w.input_violation <= cfg.tol,
                    k,
                    Some(seed),
                    || format!("weak witness: image violation {:.3e}", w.violation),
                );
            }
            _ => {
                cell.case(f64::NAN);
                cell.fail(k, Some(seed), format!("status {:?}", v.status));
            }
        }
    }
    Ok(cell.finish())
}

fn schur_cross_p_cell(cfg: &SuiteConfig, subject: &str, n: usize) -> Result<CellReport> {
    let mut cell = Cell::new("cross-p", subject, None);
    let count = cfg.random_symbols.min(10);
    for k in 0..count {
        let seed = derive_seed(cfg.seed, k as u64);
        let mut symbols = vec![random_rank_one_symbol(
            n,
            seed,
            FORWARD_SCALARS[k % FORWARD_SCALARS.len()],
        )];
        symbols.extend(random_non_factorable_symbol(n, seed, k));
        for (j, m) in symbols.iter().enumerate() {
            let statuses = cross_p_statuses(cfg, &LinearMap::schur(m))?;
            cell.case(0.0);
            cell.check(
                statuses.windows(2).all(|w| w[0] == w[1]),
                2 * k + j,
                Some(seed),
                || format!("statuses differ across p: {statuses:?}"),
            );
        }
    }
    Ok(cell.finish())
}

fn schur_yeadon_cell(cfg: &SuiteConfig, subject: &str, n: usize) -> Result<CellReport> {
    let mut cell = Cell::new("yeadon", subject, None);
    yeadon_case(&mut cell, 0, None, &LinearMap::transpose(n))?;
    let count = cfg.random_symbols.min(10);
    for k in 0..count {
        let seed = derive_seed(cfg.seed, k as u64);
        let c = FORWARD_SCALARS[1 + k % (FORWARD_SCALARS.len() - 1)];
        yeadon_case(
            &mut cell,
            1 + k,
            Some(seed),
            &LinearMap::schur(&random_rank_one_symbol(n, seed, c)),
        )?;
    }
    for k in 0..count.min(5) {
        let seed = derive_seed(cfg.seed, k as u64);
        if let Some(m) = random_non_factorable_symbol(n, seed, k) {
            yeadon_rejects(&mut cell, 1 + count + k, Some(seed), &LinearMap::schur(&m))?;
        }
    }
    Ok(cell.finish())
}

fn symbol_cells(cfg: &SuiteConfig) -> Result<Vec<CellReport>> {
    let mut out = Vec::new();
    for (index, case) in cfg.symbols.iter().enumerate() {
        for &p in &cfg.p_values {
            let mut cell = Cell::new("custom-symbol", &case.name, Some(p));
            let verdict = match (&case.group, &case.symbol, &case.matrix) {
                (Some(group), Some(pairs), _) => {
                    let g = Arc::new(load_group(group)?);
                    classify_fourier(
                        &g,
                        &wire::symbol_from_pairs(pairs)?,
                        p,
                        cfg.trials,
                        cfg.seed,
                        cfg.tol,
                    )?
                }
                (_, _, Some(m)) => classify_schur(
                    &SchurSymbol::new(m.clone()),
                    p,
                    cfg.trials,
                    cfg.seed,
                    cfg.tol,
                )?,
                _ => unreachable!("validated config"),
            };
            cell.case(verdict.witness.as_ref().map_or(0.0, |w| w.violation));
            cell.check(verdict.status == case.expect, index, Some(cfg.seed), || {
                format!(
                    "symbol '{}' expected {:?}, got {:?}",
                    case.name, case.expect, verdict.status
                )
            });
            out.push(cell.finish());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::builtin_group;

    #[test]
    fn generators_respect_their_classes() {
        let g = builtin_group("symmetric(3)").unwrap();
        for k in 0..9 {
            let phi = random_non_character_symbol(&g, k, k as usize)
                .unwrap()
                .unwrap();
            assert!(fit_scalar_character(&g, &phi, NON_CHARACTER_MARGIN)
                .unwrap()
                .is_none());
            let phi = random_unimodular_non_character(&g, k, true)
                .unwrap()
                .unwrap();
            assert_eq!(phi[g.identity()], c64(1.0, 0.0));
            for s in 0..6 {
                assert!((phi[s].norm() - 1.0).abs() < 1e-12);
                assert!((phi[g.inv(s)] - phi[s].conj()).norm() < 1e-12);
            }
            let m = random_non_factorable_symbol(3, k, k as usize).unwrap();
            assert!(rank_one_unimodular_factor(&m, NON_CHARACTER_MARGIN).is_none());
        }
        let c2 = builtin_group("cyclic(2)").unwrap();
        assert!(random_unimodular_non_character(&c2, 0, true)
            .unwrap()
            .is_none());
        assert!(random_unimodular_non_character(&c2, 0, false)
            .unwrap()
            .is_some());
        assert!(
            random_non_character_symbol(&builtin_group("trivial").unwrap(), 0, 0)
                .unwrap()
                .is_none()
        );
        assert!(random_non_factorable_symbol(1, 0, 0).is_none());
    }

    fn small_config() -> SuiteConfig {
        SuiteConfig {
            groups: vec!["cyclic(2)".into(), "symmetric(3)".into()],
            p_values: vec![1.0, 2.0],
            trials: 20,
            schur_dims: vec![2],
            random_symbols: 4,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn small_suite_passes() {
        let report = run_suite(&small_config()).unwrap();
        assert_eq!(report.outcome, Outcome::Passed, "{}", report.summary());
        assert_eq!(report.exit_code(), 0);
        let mut sorted = report.cells.clone();
        sorted.sort_by(|a, b| (&a.theorem, &a.subject).cmp(&(&b.theorem, &b.subject)));
        assert_eq!(
            sorted
                .iter()
                .map(|c| (&c.theorem, &c.subject))
                .collect::<Vec<_>>(),
            report
                .cells
                .iter()
                .map(|c| (&c.theorem, &c.subject))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn bad_expectation_fails() {
        let mut cfg = small_config();
        cfg.groups = vec!["cyclic(2)".into()];
        cfg.schur_dims.clear();
        cfg.symbols.push(SymbolCase {
            name: "hadamard".into(),
            group: None,
            symbol: None,
            matrix: Some(ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).unwrap()),
            expect: Status::Separating,
        });
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.exit_code(), 1);
        assert!(report
            .summary()
            .contains("symbol 'hadamard' expected Separating"));
    }

    #[test]
    fn empty_groups_exit_two() {
        let cfg = SuiteConfig {
            groups: vec![],
            ..SuiteConfig::default()
        };
        assert_eq!(run_suite(&cfg).unwrap().exit_code(), 2);
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            SuiteConfig::from_json(r#"{"trials":0}"#),
            Err(Error::InvalidTrials)
        ));
        assert!(matches!(
            SuiteConfig::from_json(r#"{"p_values":[0.5]}"#),
            Err(Error::InvalidExponent(_))
        ));
        assert!(SuiteConfig::from_json(r#"{"bogus":1}"#).is_err());
        let cfg = SuiteConfig::from_json(r#"{"groups":["cyclic(3)"]}"#).unwrap();
        assert_eq!(cfg.trials, 200);
        assert_eq!(cfg.p_values, vec![1.0, 2.0, 4.0]);
    }
}
