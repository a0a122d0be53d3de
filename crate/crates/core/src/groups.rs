//! Finite groups given by Cayley tables, and their one-dimensional characters.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::wire;

/// Largest order for which associativity is checked on load and characters
/// are enumerated.
pub const MAX_ENUMERATION_ORDER: usize = 64;

/// A finite group presented by its multiplication table.
///
/// Elements are the indices `0..order`. The table is validated on
/// construction, so every accessor may assume a genuine group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a Cayley table and derives the identity and inverses.
    pub fn from_table(mul: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!(
                    "entry {bad} out of range in row {i}"
                )));
            }
            flat.extend_from_slice(row);
        }
        // Latin square
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                let r = flat[i * n + j];
                let c = flat[j * n + i];
                if row_seen[r] || col_seen[c] {
                    return Err(Error::InvalidGroup(format!(
                        "not a Latin square at index {i}"
                    )));
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] == x && flat[x * n + e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let inv: Vec<usize> = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| flat[x * n + y] == identity)
                    .expect("Latin square row contains identity")
            })
            .collect();
        if n <= MAX_ENUMERATION_ORDER {
            for a in 0..n {
                for b in 0..n {
                    let ab = flat[a * n + b];
                    for c in 0..n {
                        if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails for ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        let names = match names {
            Some(names) if names.len() == n => names,
            Some(names) => {
                return Err(Error::InvalidGroup(format!(
                    "{} names for {n} elements",
                    names.len()
                )))
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(Self {
            order: n,
            mul: flat,
            inv,
            identity,
            names,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GroupJson = serde_json::from_str(text)?;
        if raw.order != raw.mul.len() {
            return Err(Error::InvalidGroup(format!(
                "order is {} but the table has {} rows",
                raw.order,
                raw.mul.len()
            )));
        }
        Self::from_table(raw.mul, raw.names)
    }

    pub fn to_json(&self) -> String {
        let raw = GroupJson {
            order: self.order,
            mul: (0..self.order)
                .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
                .collect(),
            names: Some(self.names.clone()),
        };
        serde_json::to_string(&raw).expect("group table serializes")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        inside
    }

    /// Direct product with lexicographic element order `(a, b) -> a * |H| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        let (n, m) = (self.order, other.order);
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        let names = (0..n * m)
            .map(|x| format!("({},{})", self.name(x / m), other.name(x % m)))
            .collect();
        FiniteGroup::from_table(table, Some(names))
    }
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnknownFamily("cyclic(0)".into()));
    }
    let table = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    FiniteGroup::from_table(table, Some((0..n).map(|k| k.to_string()).collect()))
}

/// Symmetries of the regular `n`-gon, order `2n`. Element `f * n + k` is `s^f r^k`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnknownFamily("dihedral(0)".into()));
    }
    let decode = |x: usize| (x / n, x % n);
    let table = (0..2 * n)
        .map(|x| {
            (0..2 * n)
                .map(|y| {
                    let (f, a) = decode(x);
                    let (g, b) = decode(y);
                    // s^f r^a s^g r^b = s^(f+g) r^((-1)^g a + b)
                    let k = if g == 0 { (a + b) % n } else { (n - a + b) % n };
                    ((f + g) % 2) * n + k
                })
                .collect()
        })
        .collect();
    let names = (0..2 * n)
        .map(|x| {
            let (f, k) = decode(x);
            if f == 0 {
                format!("r{k}")
            } else {
                format!("sr{k}")
            }
        })
        .collect();
    FiniteGroup::from_table(table, Some(names))
}

pub fn quaternion8() -> Result<FiniteGroup> {
    const UNITS: [[i32; 4]; 8] = [
        [1, 0, 0, 0],
        [-1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, -1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, -1, 0],
        [0, 0, 0, 1],
        [0, 0, 0, -1],
    ];
    let qmul = |a: [i32; 4], b: [i32; 4]| {
        [
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ]
    };
    let table = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let p = qmul(UNITS[x], UNITS[y]);
                    UNITS
                        .iter()
                        .position(|&u| u == p)
                        .expect("unit quaternions are closed")
                })
                .collect()
        })
        .collect();
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table(table, Some(names))
}

/// All permutations of `0..n` in lexicographic order; `(s t)(i) = s(t(i))`.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 5 {
        return Err(Error::UnknownFamily(format!("symmetric({n})")));
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    permutations(&mut (0..n).collect::<Vec<_>>(), 0, &mut perms);
    perms.sort();
    let index = |p: &Vec<usize>| {
        perms
            .binary_search(p)
            .expect("composition is a permutation")
    };
    let table = perms
        .iter()
        .map(|s| {
            perms
                .iter()
                .map(|t| index(&(0..n).map(|i| s[t[i]]).collect()))
                .collect()
        })
        .collect();
    let names = perms
        .iter()
        .map(|p| {
            format!(
                "[{}]",
                p.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect();
    FiniteGroup::from_table(table, Some(names))
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Parses a builtin family name.
///
/// Accepted: `trivial`, `cyclic(n)`, `dihedral(n)`, `quaternion8`,
/// `symmetric(n)`, optional `^k` powers, and direct products joined by
/// `x`, `*` or `×`, e.g. `cyclic(2)^2` or `symmetric(3) x cyclic(2)`.
pub fn builtin_group(name: &str) -> Result<FiniteGroup> {
    let cleaned: String = name
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    if cleaned.is_empty() {
        return Err(Error::UnknownFamily(name.to_string()));
    }
    let mut group: Option<FiniteGroup> = None;
    for factor in cleaned.split(['x', '*', '×']) {
        let g = parse_power(factor).map_err(|_| Error::UnknownFamily(name.to_string()))?;
        group = Some(match group {
            None => g,
            Some(acc) => acc.direct_product(&g)?,
        });
    }
    group.ok_or_else(|| Error::UnknownFamily(name.to_string()))
}

fn parse_power(factor: &str) -> Result<FiniteGroup> {
    let (base, power) = match factor.split_once('^') {
        Some((b, k)) => (
            b,
            k.parse::<usize>()
                .map_err(|_| Error::UnknownFamily(factor.into()))?,
        ),
        None => (factor, 1),
    };
    if power == 0 {
        return Err(Error::UnknownFamily(factor.into()));
    }
    let g = parse_family(base)?;
    let mut acc = g.clone();
    for _ in 1..power {
        acc = acc.direct_product(&g)?;
    }
    Ok(acc)
}

fn parse_family(base: &str) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownFamily(base.to_string());
    match base {
        "trivial" => return cyclic(1),
        "quaternion8" | "q8" => return quaternion8(),
        _ => {}
    }
    let (family, arg) = base
        .strip_suffix(')')
        .and_then(|s| s.split_once('('))
        .ok_or_else(unknown)?;
    let n: usize = arg.parse().map_err(|_| unknown())?;
    match family {
        "cyclic" => cyclic(n),
        "dihedral" => dihedral(n),
        "symmetric" => symmetric(n),
        _ => Err(unknown()),
    }
}

/// Loads a group from a JSON file if `spec` names an existing file, otherwise
/// parses it as a builtin family.
pub fn load_group(spec: &str) -> Result<FiniteGroup> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        FiniteGroup::from_json(&text)
    } else if spec.ends_with(".json") {
        Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("group file {spec} not found"),
        )))
    } else {
        builtin_group(spec)
    }
}

/// Sorted elements of `[G, G]`, the subgroup generated by all commutators.
pub fn commutator_subgroup(group: &FiniteGroup) -> Vec<usize> {
    let n = group.order();
    let mut commutators = BTreeSet::new();
    for s in 0..n {
        for t in 0..n {
            let st = group.mul(s, t);
            let ts = group.mul(t, s);
            commutators.insert(group.mul(st, group.inv(ts)));
        }
    }
    let gens: Vec<usize> = commutators.into_iter().collect();
    group
        .closure(&gens)
        .into_iter()
        .enumerate()
        .filter_map(|(x, inside)| inside.then_some(x))
        .collect()
}

/// A homomorphism `G -> T`, stored by its values in element order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character {
    #[serde(with = "wire::complex_vec")]
    values: Vec<C64>,
}

impl Character {
    /// Validates the character laws within `tol`.
    pub fn new(group: &FiniteGroup, values: Vec<C64>, tol: f64) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::SymbolLength {
                expected: group.order(),
                got: values.len(),
            });
        }
        let r = character_residual(group, &values);
        if r > tol {
            return Err(Error::InvalidGroup(format!(
                "values are not a character (residual {r:.3e})"
            )));
        }
        Ok(Self { values })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Self {
            values: vec![C64::new(1.0, 0.0); group.order()],
        }
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn value(&self, s: usize) -> C64 {
        self.values[s]
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.values.iter().all(|z| (z - 1.0).norm() <= tol)
    }

    /// `max_s |a(s) - b(s)|`.
    pub fn distance(&self, other: &Character) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Largest violation among `psi(e) = 1`, `|psi| = 1` and `psi(st) = psi(s) psi(t)`.
pub fn character_residual(group: &FiniteGroup, values: &[C64]) -> f64 {
    let n = group.order();
    let mut r = (values[group.identity()] - 1.0).norm();
    for s in 0..n {
        r = r.max((values[s].norm() - 1.0).abs());
        for t in 0..n {
            r = r.max((values[group.mul(s, t)] - values[s] * values[t]).norm());
        }
    }
    r
}

/// Every character of `group`, without duplicates, trivial character first.
///
/// Generators are chosen greedily; each assignment of `e`-th roots of unity
/// to the generators (`e` the exponent of `G/[G,G]`) is propagated over the
/// Cayley table and dropped at the first conflict. Values are tracked as
/// integer exponents so consistency checks are exact.
pub fn enumerate_characters(group: &FiniteGroup) -> Result<Vec<Character>> {
    let n = group.order();
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::GroupTooLarge(n, MAX_ENUMERATION_ORDER));
    }
    let mut in_commutator = vec![false; n];
    for x in commutator_subgroup(group) {
        in_commutator[x] = true;
    }
    let exponent = (0..n)
        .map(|g| {
            let mut x = g;
            let mut k = 1;
            while !in_commutator[x] {
                x = group.mul(x, g);
                k += 1;
            }
            k
        })
        .fold(1, lcm);

    let mut gens = Vec::new();
    let mut span = group.closure(&[]);
    for g in 0..n {
        if !span[g] {
            gens.push(g);
            span = group.closure(&gens);
        }
    }

    let total = exponent.pow(gens.len() as u32);
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut assignment = vec![0usize; gens.len()];
    for code in 0..total {
        let mut c = code;
        for slot in assignment.iter_mut() {
            *slot = c % exponent;
            c /= exponent;
        }
        if let Some(exps) = propagate(group, &gens, &assignment, exponent) {
            found.insert(exps);
        }
    }

    Ok(found
        .into_iter()
        .map(|exps| Character {
            values: exps
                .iter()
                .map(|&k| {
                    if k == 0 {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::from_polar(1.0, TAU * k as f64 / exponent as f64)
                    }
                })
                .collect(),
        })
        .collect())
}

/// Spreads generator exponents over the group; `None` on any inconsistency.
fn propagate(
    group: &FiniteGroup,
    gens: &[usize],
    assignment: &[usize],
    e: usize,
) -> Option<Vec<usize>> {
    let n = group.order();
    let mut value: Vec<Option<usize>> = vec![None; n];
    value[group.identity()] = Some(0);
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        let vx = value[x].expect("queued elements are assigned");
        for (&g, &a) in gens.iter().zip(assignment) {
            let y = group.mul(x, g);
            let vy = (vx + a) % e;
            match value[y] {
                None => {
                    value[y] = Some(vy);
                    queue.push_back(y);
                }
                Some(old) if old != vy => return None,
                Some(_) => {}
            }
        }
    }
    let exps: Vec<usize> = value
        .into_iter()
        .map(|v| v.expect("generators span the group"))
        .collect();
    for s in 0..n {
        for t in 0..n {
            if exps[group.mul(s, t)] != (exps[s] + exps[t]) % e {
                return None;
            }
        }
    }
    Some(exps)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A factorization `phi = c * psi`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterFit {
    #[serde(with = "wire::complex")]
    pub c: C64,
    pub character: Character,
    /// Position of `character` in [`enumerate_characters`] order.
    pub index: usize,
    pub residual: f64,
}

/// Looks for `c` and a character `psi` with `phi = c * psi`, taking
/// `c = phi(e)`. The tolerance is absolute for symbols of sup-norm at most 1
/// and relative to the sup-norm above that. The zero symbol fits with
/// `(0, trivial)`.
pub fn fit_scalar_character(
    group: &FiniteGroup,
    phi: &[C64],
    tol: f64,
) -> Result<Option<CharacterFit>> {
    if phi.len() != group.order() {
        return Err(Error::SymbolLength {
            expected: group.order(),
            got: phi.len(),
        });
    }
    let scale = phi.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let c = phi[group.identity()];
    for (index, psi) in enumerate_characters(group)?.into_iter().enumerate() {
        let residual = phi
            .iter()
            .zip(psi.values())
            .map(|(p, v)| (p - c * v).norm())
            .fold(0.0, f64::max);
        if residual <= tol * scale {
            return Ok(Some(CharacterFit {
                c,
                character: psi,
                index,
                residual,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    /// Independent oracle: every function `G -> mu_m` with value 1 at the
    /// identity, kept when multiplicative. Exponential, tiny groups only.
    fn brute_force_characters(g: &FiniteGroup, m: usize) -> Vec<Vec<usize>> {
        let n = g.order();
        let others: Vec<usize> = (0..n).filter(|&x| x != g.identity()).collect();
        let mut out = Vec::new();
        let total = m.pow(others.len() as u32);
        for code in 0..total {
            let mut exps = vec![0usize; n];
            let mut c = code;
            for &x in &others {
                exps[x] = c % m;
                c /= m;
            }
            if (0..n).all(|s| (0..n).all(|t| exps[g.mul(s, t)] == (exps[s] + exps[t]) % m)) {
                out.push(exps);
            }
        }
        out
    }

    fn as_values(exps: &[usize], m: usize) -> Vec<C64> {
        exps.iter()
            .map(|&k| C64::from_polar(1.0, TAU * k as f64 / m as f64))
            .collect()
    }

    fn matches_oracle(g: &FiniteGroup, m: usize) {
        let oracle = brute_force_characters(g, m);
        let got = enumerate_characters(g).unwrap();
        assert_eq!(got.len(), oracle.len());
        for exps in &oracle {
            let want = as_values(exps, m);
            assert!(
                got.iter().any(|c| c
                    .values()
                    .iter()
                    .zip(&want)
                    .all(|(a, b)| (a - b).norm() < 1e-12)),
                "missing character {exps:?}"
            );
        }
    }

    #[test]
    fn builtin_orders() {
        let t = builtin_group("cyclic(1)").unwrap();
        assert_eq!(t.order(), 1);
        let c4 = builtin_group("cyclic(4)").unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        let s3 = builtin_group("symmetric(3)").unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(builtin_group("dihedral(4)").unwrap().order(), 8);
        assert!(!builtin_group("dihedral(4)").unwrap().is_abelian());
        assert_eq!(builtin_group("quaternion8").unwrap().order(), 8);
        assert_eq!(builtin_group("symmetric(4)").unwrap().order(), 24);
        assert_eq!(builtin_group("cyclic(2)^2").unwrap().order(), 4);
        assert_eq!(
            builtin_group("symmetric(3) x cyclic(2)").unwrap().order(),
            12
        );
        assert_eq!(builtin_group("trivial").unwrap().order(), 1);
        assert!(matches!(
            builtin_group("klein"),
            Err(Error::UnknownFamily(_))
        ));
        assert!(matches!(
            builtin_group("cyclic(0)"),
            Err(Error::UnknownFamily(_))
        ));
        assert!(matches!(builtin_group(""), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn invalid_tables_are_rejected() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![0, 1]], None).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 2], vec![1, 0]], None).is_err());
        // Latin square with identity 0 that is not associative
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(loop5, None).unwrap_err();
        assert!(err.to_string().contains("associativity"), "{err}");
    }

    #[test]
    fn json_round_trip() {
        let g = builtin_group("dihedral(3)").unwrap();
        let back = FiniteGroup::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let text = r#"{"order": 2, "mul": [[0,1],[1,0]]}"#;
        let c2 = FiniteGroup::from_json(text).unwrap();
        assert_eq!(c2.inv(1), 1);
        assert!(FiniteGroup::from_json(r#"{"order": 3, "mul": [[0,1],[1,0]]}"#).is_err());
    }

    #[test]
    fn commutator_subgroups() {
        for name in ["cyclic(5)", "cyclic(2)^2", "cyclic(2) x cyclic(4)"] {
            let g = builtin_group(name).unwrap();
            assert_eq!(commutator_subgroup(&g), vec![g.identity()]);
        }
        let s3 = symmetric(3).unwrap();
        let k = commutator_subgroup(&s3);
        assert_eq!(k.len(), 3);
        // A_3: identity and the two 3-cycles
        assert!(k.iter().all(|&x| s3.element_order(x) != 2));
        let q8 = quaternion8().unwrap();
        let k = commutator_subgroup(&q8);
        assert_eq!(
            k.iter().map(|&x| q8.name(x)).collect::<Vec<_>>(),
            vec!["1", "-1"]
        );
    }

    #[test]
    fn characters_match_brute_force() {
        matches_oracle(&cyclic(4).unwrap(), 4);
        matches_oracle(&symmetric(3).unwrap(), 6);
        matches_oracle(&builtin_group("cyclic(2)^2").unwrap(), 2);
        matches_oracle(&cyclic(6).unwrap(), 6);
        matches_oracle(&dihedral(4).unwrap(), 4);
    }

    #[test]
    fn cyclic_four_characters_are_powers_of_i() {
        let chars = enumerate_characters(&cyclic(4).unwrap()).unwrap();
        assert_eq!(chars.len(), 4);
        for j in 0..4 {
            let want: Vec<C64> = (0..4).map(|k| C64::i().powu((j * k) as u32)).collect();
            assert!(chars.iter().any(|c| c
                .values()
                .iter()
                .zip(&want)
                .all(|(a, b)| (a - b).norm() < 1e-12)));
        }
    }

    #[test]
    fn trivial_group_has_one_character() {
        let chars = enumerate_characters(&cyclic(1).unwrap()).unwrap();
        assert_eq!(
            chars,
            vec![Character {
                values: vec![c64(1.0, 0.0)]
            }]
        );
    }

    #[test]
    fn character_counts_and_gaps() {
        for name in [
            "cyclic(8)",
            "symmetric(4)",
            "quaternion8",
            "dihedral(4)",
            "dihedral(5)",
            "cyclic(3)^2",
        ] {
            let g = builtin_group(name).unwrap();
            let chars = enumerate_characters(&g).unwrap();
            assert_eq!(
                chars.len(),
                g.order() / commutator_subgroup(&g).len(),
                "{name}"
            );
            assert!(chars[0].is_trivial(0.0));
            for (i, a) in chars.iter().enumerate() {
                assert!(character_residual(&g, a.values()) < 1e-12);
                for b in &chars[i + 1..] {
                    assert!(a.distance(b) > 0.5);
                }
            }
        }
    }

    #[test]
    fn characters_are_constant_on_commutator_cosets() {
        let g = symmetric(4).unwrap();
        let k = commutator_subgroup(&g);
        for psi in enumerate_characters(&g).unwrap() {
            for s in 0..g.order() {
                for &x in &k {
                    assert!((psi.value(g.mul(s, x)) - psi.value(s)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn too_large_for_enumeration() {
        let g = symmetric(5).unwrap();
        assert!(matches!(
            enumerate_characters(&g),
            Err(Error::GroupTooLarge(120, 64))
        ));
    }

    #[test]
    fn scalar_character_fits() {
        let s3 = symmetric(3).unwrap();
        let sign = enumerate_characters(&s3).unwrap().remove(1);
        let phi: Vec<C64> = sign.values().iter().map(|v| v * 2.0).collect();
        let fit = fit_scalar_character(&s3, &phi, 1e-9).unwrap().unwrap();
        assert!((fit.c - 2.0).norm() < 1e-15);
        assert_eq!(fit.character, sign);

        let c2 = cyclic(2).unwrap();
        assert!(
            fit_scalar_character(&c2, &[c64(1.0, 0.0), c64(0.0, 0.0)], 1e-9)
                .unwrap()
                .is_none()
        );

        let fit = fit_scalar_character(&s3, &[c64(0.0, 0.0); 6], 1e-9)
            .unwrap()
            .unwrap();
        assert_eq!(fit.c, c64(0.0, 0.0));
        assert!(fit.character.is_trivial(0.0));

        assert!(matches!(
            fit_scalar_character(&s3, &[c64(1.0, 0.0)], 1e-9),
            Err(Error::SymbolLength {
                expected: 6,
                got: 1
            })
        ));
    }
}
