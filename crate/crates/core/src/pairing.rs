//! The restricted steepness pairing and a general Morse-matching validator.
//!
//! Pairs only join simplices of the same word length in adjacent
//! dimensions. Faces never lengthen a word, so every question about a pair
//! can be answered inside one `(dim, length)` stratum and its neighbour one
//! dimension up.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, MorseError, Result};
use crate::simplicial::{enumerate_stratum, is_degenerate, Simplex, StratumKey};

/// Default cap on the number of words in a single stratum.
pub const DEFAULT_STRATUM_LIMIT: u128 = 20_000_000;

/// Truncation bounds: simplices of dimension `≤ max_dim` and word length
/// `≤ max_length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scope {
    pub max_dim: usize,
    pub max_length: usize,
}

impl Scope {
    pub fn new(max_dim: usize, max_length: usize) -> Self {
        Self { max_dim, max_length }
    }

    pub fn contains(&self, x: &Simplex) -> bool {
        x.dim() <= self.max_dim && x.len() <= self.max_length
    }

    /// Whether the pairing status of `x` is fully decided in this scope.
    /// Cells in the top dimension can only be seen as upper members.
    pub fn decides(&self, x: &Simplex) -> bool {
        x.dim() < self.max_dim && x.len() <= self.max_length
    }

    pub(crate) fn out_of_scope(&self, x: &Simplex) -> MorseError {
        MorseError::OutOfScope {
            cell: format!("{} (dim {})", x, x.dim()),
            max_dim: self.max_dim,
            max_length: self.max_length,
        }
    }
}

/// Which faces of a candidate coface must sit below the paired face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceScope {
    /// Every same-length face, regular or not.
    #[default]
    All,
    /// Only same-length regular faces.
    Regular,
}

/// Which cofaces of a face compete for the lex-minimal slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CofaceScope {
    /// Same-length cofaces having the face as a regular face.
    #[default]
    Regular,
    /// Every same-length coface.
    All,
}

/// Treatment of degenerate simplices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegeneratePolicy {
    /// Degenerate simplices never join a pair; they still block as faces.
    #[default]
    Critical,
    /// Degenerate simplices are paired like any other simplex.
    Allowed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairingFlags {
    pub face_scope: FaceScope,
    pub coface_scope: CofaceScope,
    pub degenerate_policy: DegeneratePolicy,
    /// Under [`DegeneratePolicy::Critical`], whether degenerate cofaces still
    /// compete in the coface-minimality test.
    pub degenerate_cofaces_block: bool,
}

impl Default for PairingFlags {
    fn default() -> Self {
        Self {
            face_scope: FaceScope::All,
            coface_scope: CofaceScope::Regular,
            degenerate_policy: DegeneratePolicy::Critical,
            degenerate_cofaces_block: false,
        }
    }
}

impl PairingFlags {
    fn may_pair(&self, x: &Simplex) -> bool {
        self.degenerate_policy == DegeneratePolicy::Allowed || !is_degenerate(x)
    }
}

/// Every same-length coface of `sigma` together with the face indices at
/// which `sigma` appears, in increasing coface order.
///
/// The face map acts letter by letter, so a coface at index `i` is any word
/// whose letters are preimages of `sigma`'s letters under `d_i`.
pub fn same_length_cofaces(sigma: &Simplex) -> BTreeMap<Simplex, Vec<usize>> {
    let n = sigma.dim();
    let mut out: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
    if n + 1 > crate::simplicial::MAX_DIM {
        return out;
    }
    for i in 0..=n + 1 {
        let choices: Vec<(u8, Option<u8>)> = sigma
            .word()
            .iter()
            .map(|&k| {
                let cut = n + 1 - k as usize;
                match i.cmp(&cut) {
                    std::cmp::Ordering::Less => (k, None),
                    std::cmp::Ordering::Greater => (k + 1, None),
                    std::cmp::Ordering::Equal => (k, Some(k + 1)),
                }
            })
            .collect();
        let branching: Vec<usize> = (0..choices.len()).filter(|&p| choices[p].1.is_some()).collect();
        let base: Vec<u8> = choices.iter().map(|c| c.0).collect();
        for mask in 0u64..(1u64 << branching.len()) {
            let mut word = base.clone();
            for (bit, &p) in branching.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    word[p] = choices[p].1.unwrap();
                }
            }
            out.entry(Simplex::from_raw(n + 1, word)).or_default().push(i);
        }
    }
    out
}

/// Same-length `(dim+1)`-simplices having `sigma` as a regular face, with the
/// unique face index, in increasing order.
pub fn regular_cofaces(sigma: &Simplex) -> Vec<(Simplex, usize)> {
    same_length_cofaces(sigma)
        .into_iter()
        .filter_map(|(tau, idx)| (idx.len() == 1).then(|| (tau, idx[0])))
        .collect()
}

/// Face indices at which `sigma` occurs in `tau`.
pub fn face_indices(tau: &Simplex, sigma: &Simplex) -> Vec<usize> {
    if tau.dim() != sigma.dim() + 1 {
        return Vec::new();
    }
    (0..=tau.dim()).filter(|&i| tau.face_unchecked(i) == *sigma).collect()
}

/// Checks that every other same-length face of `tau` sits strictly below
/// `sigma`, which is assumed to be the face at index `at`.
fn is_top_face(tau: &Simplex, sigma: &Simplex, at: usize, flags: &PairingFlags) -> bool {
    let faces: Vec<Simplex> = (0..=tau.dim()).map(|i| tau.face_unchecked(i)).collect();
    faces.iter().enumerate().all(|(i, f)| {
        if i == at || f.len() != sigma.len() {
            return true;
        }
        if flags.face_scope == FaceScope::Regular && faces.iter().filter(|g| *g == f).count() != 1 {
            return true;
        }
        f < sigma
    })
}

/// The steepness partner of `sigma` one dimension up, if any.
pub fn steepness_pair(sigma: &Simplex, flags: &PairingFlags) -> Option<Simplex> {
    if !flags.may_pair(sigma) {
        return None;
    }
    let cofaces = same_length_cofaces(sigma);
    let (tau, idx) = cofaces.iter().find(|(tau, idx)| {
        let eligible_scope = flags.coface_scope == CofaceScope::All || idx.len() == 1;
        let competes = flags.degenerate_policy == DegeneratePolicy::Allowed
            || flags.degenerate_cofaces_block
            || !is_degenerate(tau);
        eligible_scope && competes
    })?;
    if idx.len() != 1 || !flags.may_pair(tau) || !is_top_face(tau, sigma, idx[0], flags) {
        return None;
    }
    Some(tau.clone())
}

/// The lower partner of `tau`, if `tau` is the upper member of a pair.
///
/// Only the largest same-length face can pair with `tau`, so this is a local
/// test.
pub fn steepness_lower(tau: &Simplex, flags: &PairingFlags) -> Option<Simplex> {
    if tau.dim() == 0 {
        return None;
    }
    let top = (0..=tau.dim())
        .map(|i| tau.face_unchecked(i))
        .filter(|f| f.len() == tau.len())
        .max()?;
    (steepness_pair(&top, flags).as_ref() == Some(tau)).then_some(top)
}

/// A set of pairs `σ ≺ τ` with lookups in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    scope: Scope,
    flags: PairingFlags,
    up: HashMap<Simplex, Simplex>,
    down: HashMap<Simplex, Simplex>,
}

impl Matching {
    /// Builds a matching from explicit pairs. Repeated cells are rejected.
    pub fn from_pairs(
        scope: Scope,
        flags: PairingFlags,
        pairs: impl IntoIterator<Item = (Simplex, Simplex)>,
    ) -> Result<Self> {
        let mut m = Self {
            scope,
            flags,
            up: HashMap::new(),
            down: HashMap::new(),
        };
        for (sigma, tau) in pairs {
            m.insert(sigma, tau)?;
        }
        Ok(m)
    }

    fn insert(&mut self, sigma: Simplex, tau: Simplex) -> Result<()> {
        for cell in [&sigma, &tau] {
            if self.up.contains_key(cell) || self.down.contains_key(cell) {
                return Err(MorseError::InvalidMatching(format!("{} (dim {}) is used twice", cell, cell.dim())));
            }
        }
        if sigma == tau {
            return Err(MorseError::InvalidMatching(format!("{sigma} paired with itself")));
        }
        self.up.insert(sigma.clone(), tau.clone());
        self.down.insert(tau, sigma);
        Ok(())
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn flags(&self) -> PairingFlags {
        self.flags
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    /// The partner one dimension up.
    pub fn upper(&self, sigma: &Simplex) -> Option<&Simplex> {
        self.up.get(sigma)
    }

    /// The partner one dimension down.
    pub fn lower(&self, tau: &Simplex) -> Option<&Simplex> {
        self.down.get(tau)
    }

    pub fn is_matched(&self, x: &Simplex) -> bool {
        self.up.contains_key(x) || self.down.contains_key(x)
    }

    /// Whether `x` is critical. Only meaningful when the scope decides `x`.
    pub fn is_critical(&self, x: &Simplex) -> bool {
        !self.is_matched(x)
    }

    /// Pairs sorted by the lower member.
    pub fn pairs(&self) -> Vec<(Simplex, Simplex)> {
        let mut v: Vec<_> = self.up.iter().map(|(s, t)| (s.clone(), t.clone())).collect();
        v.sort();
        v
    }

    /// Pairs whose lower member lies in the given stratum.
    pub fn pairs_in(&self, key: StratumKey) -> Vec<(Simplex, Simplex)> {
        self.pairs().into_iter().filter(|(s, _)| s.stratum() == key).collect()
    }

    /// Critical cells of one dimension with word length `≤ max_length`,
    /// in increasing order.
    pub fn critical_cells(&self, dim: usize, max_length: usize) -> Result<Vec<Simplex>> {
        if dim >= self.scope.max_dim || max_length > self.scope.max_length {
            return Err(domain(format!(
                "critical {dim}-cells up to length {max_length} are not decided by scope (max_dim {}, max_length {})",
                self.scope.max_dim, self.scope.max_length
            )));
        }
        Ok((0..=max_length)
            .flat_map(|len| enumerate_stratum(StratumKey::new(dim, len)))
            .filter(|x| !self.is_matched(x))
            .collect())
    }

    pub fn to_file(&self) -> MatchingFile {
        MatchingFile {
            scope: self.scope,
            flags: self.flags,
            pairs: self
                .pairs()
                .into_iter()
                .map(|(sigma, tau)| PairRecord {
                    stratum: sigma.stratum(),
                    sigma,
                    tau,
                })
                .collect(),
        }
    }

    pub fn from_file(file: MatchingFile) -> Result<Self> {
        Self::from_pairs(file.scope, file.flags, file.pairs.into_iter().map(|p| (p.sigma, p.tau)))
    }
}

/// JSON form of one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub sigma: Simplex,
    pub tau: Simplex,
    pub stratum: StratumKey,
}

/// JSON form of a matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingFile {
    pub scope: Scope,
    pub flags: PairingFlags,
    pub pairs: Vec<PairRecord>,
}

/// Why a cell was left critical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalReason {
    Degenerate,
    Unmatched,
}

/// Critical cells of every decided stratum.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CriticalReport {
    pub strata: BTreeMap<StratumKey, StratumCriticals>,
    /// Degenerate cells that would otherwise have won a steepness pair.
    pub suppressed_degenerate: Vec<(Simplex, Simplex)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StratumCriticals {
    pub degenerate: Vec<Simplex>,
    pub unmatched: Vec<Simplex>,
}

impl CriticalReport {
    /// All critical cells, with their reason, in stratum order.
    pub fn rows(&self) -> Vec<(StratumKey, Simplex, CriticalReason)> {
        let mut out = Vec::new();
        for (key, s) in &self.strata {
            let mut cells: Vec<_> = s
                .degenerate
                .iter()
                .map(|x| (x.clone(), CriticalReason::Degenerate))
                .chain(s.unmatched.iter().map(|x| (x.clone(), CriticalReason::Unmatched)))
                .collect();
            cells.sort();
            out.extend(cells.into_iter().map(|(x, r)| (*key, x, r)));
        }
        out
    }

    pub fn critical_in(&self, key: StratumKey) -> Vec<Simplex> {
        self.strata
            .get(&key)
            .map(|s| {
                let mut v: Vec<_> = s.degenerate.iter().chain(&s.unmatched).cloned().collect();
                v.sort();
                v
            })
            .unwrap_or_default()
    }

    /// CSV table with columns `dim,length,simplex,degenerate,reason`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| MorseError::Domain(e.to_string());
        w.write_record(["dim", "length", "simplex", "degenerate", "reason"]).map_err(err)?;
        for (key, x, reason) in self.rows() {
            w.write_record([
                key.dim.to_string(),
                key.length.to_string(),
                x.to_string(),
                (reason == CriticalReason::Degenerate).to_string(),
                match reason {
                    CriticalReason::Degenerate => "degenerate".to_string(),
                    CriticalReason::Unmatched => "unmatched".to_string(),
                },
            ])
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| MorseError::Domain(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Pairs whose lower member lies in `key`, in increasing order.
pub fn pair_stratum(key: StratumKey, flags: &PairingFlags) -> Vec<(Simplex, Simplex)> {
    enumerate_stratum(key)
        .filter_map(|sigma| steepness_pair(&sigma, flags).map(|tau| (sigma, tau)))
        .collect()
}

fn suppressed_in_stratum(key: StratumKey, flags: &PairingFlags) -> Vec<(Simplex, Simplex)> {
    if flags.degenerate_policy == DegeneratePolicy::Allowed {
        return Vec::new();
    }
    let open = PairingFlags {
        degenerate_policy: DegeneratePolicy::Allowed,
        ..*flags
    };
    enumerate_stratum(key)
        .filter_map(|sigma| {
            let tau = steepness_pair(&sigma, &open)?;
            (is_degenerate(&sigma) || is_degenerate(&tau)).then_some((sigma, tau))
        })
        .collect()
}

type StratumPairs = (StratumKey, Vec<(Simplex, Simplex)>, Vec<(Simplex, Simplex)>);

pub fn build_matching(scope: Scope, flags: PairingFlags) -> Result<(Matching, CriticalReport)> {
    build_matching_with_limit(scope, flags, DEFAULT_STRATUM_LIMIT)
}

/// Runs the steepness test on every simplex of dimension `< max_dim` and
/// length `≤ max_length`. Strata are processed in parallel and merged in
/// stratum order.
pub fn build_matching_with_limit(
    scope: Scope,
    flags: PairingFlags,
    limit: u128,
) -> Result<(Matching, CriticalReport)> {
    if scope.max_dim < 1 || scope.max_length < 1 {
        return Err(domain("scope bounds must be at least 1"));
    }
    let keys: Vec<StratumKey> = (0..scope.max_dim)
        .flat_map(|dim| (0..=scope.max_length).map(move |length| StratumKey::new(dim, length)))
        .collect();
    for key in &keys {
        let upper = StratumKey::new(key.dim + 1, key.length);
        for k in [*key, upper] {
            if k.size() > limit {
                return Err(MorseError::ResourceLimit {
                    stratum: k,
                    size: k.size(),
                    limit,
                });
            }
        }
    }

    let per_stratum: Vec<StratumPairs> = keys
        .par_iter()
        .map(|&key| (key, pair_stratum(key, &flags), suppressed_in_stratum(key, &flags)))
        .collect();

    let mut matching = Matching::from_pairs(scope, flags, std::iter::empty())?;
    let mut suppressed = Vec::new();
    for (_, pairs, supp) in &per_stratum {
        for (sigma, tau) in pairs {
            matching.insert(sigma.clone(), tau.clone())?;
        }
        suppressed.extend(supp.iter().cloned());
    }

    let mut report = CriticalReport {
        strata: BTreeMap::new(),
        suppressed_degenerate: suppressed,
    };
    for key in keys {
        let mut entry = StratumCriticals::default();
        for x in enumerate_stratum(key) {
            if matching.is_matched(&x) {
                continue;
            }
            if is_degenerate(&x) {
                entry.degenerate.push(x);
            } else {
                entry.unmatched.push(x);
            }
        }
        report.strata.insert(key, entry);
    }
    Ok((matching, report))
}

/// A single failed condition found by the validator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    NotAFace { sigma: Simplex, tau: Simplex },
    NotRegular { sigma: Simplex, tau: Simplex, indices: Vec<usize> },
    LengthMismatch { sigma: Simplex, tau: Simplex },
    ReusedCell { cell: Simplex },
    /// `σ_0 ≺ τ_0 > σ_1 ≺ τ_1 > … > σ_0`, listed as alternating cells.
    Cycle { cells: Vec<Simplex> },
}

/// Outcome of [`validate_matching`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub pairs_checked: usize,
    pub strata_checked: usize,
    pub degenerate_members: usize,
    pub violations: Vec<Violation>,
    /// Pairs never leave a word-length stratum and faces never lengthen a
    /// word, so acyclicity inside every stratum gives global acyclicity and
    /// finite gradient paths.
    pub per_stratum_reduction: bool,
}

/// Checks regularity, injectivity and acyclicity of a set of pairs.
pub fn validate_matching(pairs: &[(Simplex, Simplex)], scope: Scope) -> Result<Verdict> {
    let mut violations = Vec::new();
    let mut seen: HashSet<&Simplex> = HashSet::new();
    let mut degenerate_members = 0;
    for (sigma, tau) in pairs {
        for cell in [sigma, tau] {
            if !scope.contains(cell) {
                return Err(scope.out_of_scope(cell));
            }
            if !seen.insert(cell) {
                violations.push(Violation::ReusedCell { cell: cell.clone() });
            }
            if is_degenerate(cell) {
                degenerate_members += 1;
            }
        }
        if tau.dim() != sigma.dim() + 1 {
            return Err(domain(format!(
                "pair {sigma} ≺ {tau} does not join adjacent dimensions"
            )));
        }
        if sigma.len() != tau.len() {
            violations.push(Violation::LengthMismatch {
                sigma: sigma.clone(),
                tau: tau.clone(),
            });
        }
        let idx = face_indices(tau, sigma);
        match idx.len() {
            0 => violations.push(Violation::NotAFace {
                sigma: sigma.clone(),
                tau: tau.clone(),
            }),
            1 => {}
            _ => violations.push(Violation::NotRegular {
                sigma: sigma.clone(),
                tau: tau.clone(),
                indices: idx,
            }),
        }
    }

    // Gradient-path digraph on lower members: σ → σ' when σ' ≠ σ is a face of c(σ).
    let up: HashMap<&Simplex, &Simplex> = pairs.iter().map(|(s, t)| (s, t)).collect();
    let mut by_stratum: BTreeMap<StratumKey, Vec<&Simplex>> = BTreeMap::new();
    for (sigma, _) in pairs {
        by_stratum.entry(sigma.stratum()).or_default().push(sigma);
    }
    let strata_checked = by_stratum.len();
    for (key, nodes) in by_stratum {
        if let Some(cycle) = find_cycle(key, &nodes, &up) {
            violations.push(Violation::Cycle { cells: cycle });
        }
    }

    Ok(Verdict {
        valid: violations.is_empty(),
        pairs_checked: pairs.len(),
        strata_checked,
        degenerate_members,
        violations,
        per_stratum_reduction: true,
    })
}

/// Kahn's algorithm on one stratum; on failure, walks the leftover nodes to
/// recover an explicit alternating cycle.
fn find_cycle(
    key: StratumKey,
    nodes: &[&Simplex],
    up: &HashMap<&Simplex, &Simplex>,
) -> Option<Vec<Simplex>> {
    let index: HashMap<&Simplex, usize> = nodes.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, sigma) in nodes.iter().enumerate() {
        let tau = up[sigma];
        if tau.dim() != sigma.dim() + 1 {
            continue;
        }
        let mut targets = BTreeSet::new();
        for f in 0..=tau.dim() {
            let face = tau.face_unchecked(f);
            if face.stratum() != key || face == **sigma {
                continue;
            }
            if let Some(&j) = index.get(&face) {
                targets.insert(j);
            }
        }
        succ[i] = targets.into_iter().collect();
    }

    let mut indeg = vec![0usize; nodes.len()];
    for targets in &succ {
        for &j in targets {
            indeg[j] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..nodes.len()).filter(|&i| indeg[i] == 0).collect();
    let mut removed = vec![false; nodes.len()];
    while let Some(i) = queue.pop() {
        removed[i] = true;
        for &j in &succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                queue.push(j);
            }
        }
    }
    let start = (0..nodes.len()).find(|&i| !removed[i])?;

    // every leftover node keeps a leftover successor; follow until a repeat
    let mut order = Vec::new();
    let mut pos: HashMap<usize, usize> = HashMap::new();
    let mut cur = start;
    while !pos.contains_key(&cur) {
        pos.insert(cur, order.len());
        order.push(cur);
        cur = *succ[cur]
            .iter()
            .find(|&&j| !removed[j])
            .expect("leftover node without a leftover successor");
    }
    let cycle = &order[pos[&cur]..];
    let mut cells = Vec::new();
    for &i in cycle {
        cells.push(nodes[i].clone());
        cells.push(up[nodes[i]].clone());
    }
    cells.push(nodes[cur].clone());
    Some(cells)
}

/// DOT rendering of the modified Hasse diagram of every stratum in scope:
/// face edges point down, matched edges are reversed and drawn bold.
pub fn to_dot(matching: &Matching) -> String {
    let scope = matching.scope();
    let mut out = String::from("digraph restricted_steepness {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n");
    for dim in 0..scope.max_dim {
        for length in 0..=scope.max_length {
            let key = StratumKey::new(dim, length);
            let _ = writeln!(out, "  subgraph \"cluster_{dim}_{length}\" {{");
            let _ = writeln!(out, "    label=\"stratum ({dim},{length}) to ({},{length})\";", dim + 1);
            let node = |x: &Simplex| format!("\"{}:{}\"", x.dim(), x);
            for x in enumerate_stratum(key).chain(enumerate_stratum(StratumKey::new(dim + 1, length))) {
                let critical = !matching.is_matched(&x) && scope.decides(&x);
                let style = if critical { ", style=filled, fillcolor=lightgoldenrod" } else { "" };
                let _ = writeln!(out, "    {} [label=\"{}\"{}];", node(&x), x.pretty(), style);
            }
            for tau in enumerate_stratum(StratumKey::new(dim + 1, length)) {
                let mut targets = BTreeSet::new();
                for i in 0..=tau.dim() {
                    let f = tau.face_unchecked(i);
                    if f.len() == length {
                        targets.insert(f);
                    }
                }
                for f in targets {
                    if matching.upper(&f) == Some(&tau) {
                        let _ = writeln!(out, "    {} -> {} [color=red, penwidth=2.5];", node(&f), node(&tau));
                    } else {
                        let _ = writeln!(out, "    {} -> {};", node(&tau), node(&f));
                    }
                }
            }
            out.push_str("  }\n");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(dim: usize, word: &[usize]) -> Simplex {
        Simplex::new(dim, word.iter().copied()).unwrap()
    }

    fn flags() -> PairingFlags {
        PairingFlags::default()
    }

    #[test]
    fn regular_cofaces_of_y2() {
        let got = regular_cofaces(&Simplex::y_power(2));
        assert_eq!(got, vec![(s(2, &[1, 2]), 1), (s(2, &[2, 1]), 1)]);
    }

    #[test]
    fn regular_cofaces_agree_with_brute_force() {
        for dim in 1..=3 {
            for len in 0..=3 {
                for sigma in enumerate_stratum(StratumKey::new(dim, len)) {
                    let brute: Vec<(Simplex, usize)> = enumerate_stratum(StratumKey::new(dim + 1, len))
                        .filter_map(|tau| {
                            let idx = face_indices(&tau, &sigma);
                            (idx.len() == 1).then(|| (tau, idx[0]))
                        })
                        .collect();
                    assert_eq!(regular_cofaces(&sigma), brute, "{sigma}");
                }
            }
        }
    }

    #[test]
    fn sigma2_has_no_regular_coface() {
        assert!(regular_cofaces(&s(2, &[2, 1])).is_empty());
    }

    #[test]
    fn printed_pairs() {
        let f = flags();
        assert_eq!(steepness_pair(&Simplex::y_power(2), &f), Some(s(2, &[1, 2])));
        assert_eq!(steepness_pair(&Simplex::y_power(3), &f), Some(s(2, &[1, 1, 2])));
        assert_eq!(steepness_pair(&s(2, &[1, 2, 2]), &f), Some(s(3, &[1, 2, 3])));
        assert_eq!(steepness_pair(&s(2, &[2, 2, 1]), &f), Some(s(3, &[2, 3, 1])));
        assert_eq!(steepness_pair(&s(2, &[2, 1, 2]), &f), Some(s(3, &[2, 1, 3])));
        assert_eq!(steepness_pair(&s(2, &[1, 2, 1]), &f), None);
        assert_eq!(steepness_pair(&s(2, &[2, 1, 1]), &f), None);
        assert_eq!(steepness_lower(&s(3, &[1, 2, 3]), &f), Some(s(2, &[1, 2, 2])));
        assert_eq!(steepness_lower(&s(3, &[3, 2, 1]), &f), None);
    }

    #[test]
    fn small_matching() {
        let (m, report) = build_matching(Scope::new(3, 2), flags()).unwrap();
        assert_eq!(m.upper(&Simplex::y_power(2)), Some(&s(2, &[1, 2])));
        let crit = report.critical_in(StratumKey::new(2, 2));
        assert!(crit.contains(&s(2, &[2, 1])));
        assert!(report.critical_in(StratumKey::new(0, 0)).contains(&Simplex::identity(0)));
        assert!(report.critical_in(StratumKey::new(1, 1)).contains(&Simplex::y_power(1)));
    }

    #[test]
    fn built_matching_validates() {
        let (m, _) = build_matching(Scope::new(4, 4), flags()).unwrap();
        let v = validate_matching(&m.pairs(), m.scope()).unwrap();
        assert!(v.valid, "{:?}", v.violations);
        assert_eq!(v.degenerate_members, 0);
    }

    #[test]
    fn validator_rejects_non_faces_and_reuse() {
        let scope = Scope::new(3, 3);
        let v = validate_matching(&[(Simplex::y_power(1), s(2, &[1, 1]))], scope).unwrap();
        assert!(!v.valid);
        assert!(matches!(v.violations[0], Violation::LengthMismatch { .. }));
        assert!(v.violations.iter().any(|x| matches!(x, Violation::NotAFace { .. })));

        let pairs = vec![
            (Simplex::y_power(2), s(2, &[1, 2])),
            (Simplex::y_power(2), s(2, &[2, 1])),
        ];
        let v = validate_matching(&pairs, scope).unwrap();
        assert!(v.violations.iter().any(|x| matches!(x, Violation::ReusedCell { .. })));

        let v = validate_matching(&[(Simplex::y_power(2), s(2, &[2, 2]))], scope).unwrap();
        assert!(matches!(&v.violations[0], Violation::NotRegular { indices, .. } if indices == &vec![1, 2]));

        assert!(validate_matching(&[(Simplex::y_power(5), s(2, &[1, 1, 1, 1, 2]))], scope).is_err());
    }

    #[test]
    fn validator_finds_alternating_cycle() {
        // three regular pairs in stratum (2,4) whose gradient paths close up
        let pairs = vec![
            (s(2, &[1, 1, 1, 2]), s(3, &[1, 1, 2, 3])),
            (s(2, &[1, 1, 2, 2]), s(3, &[1, 2, 3, 3])),
            (s(2, &[1, 2, 2, 2]), s(3, &[1, 2, 2, 3])),
        ];
        for (i, (sigma, tau)) in pairs.iter().enumerate() {
            assert_eq!(face_indices(tau, sigma).len(), 1);
            let next = &pairs[(i + 1) % 3].0;
            assert!(!face_indices(tau, next).is_empty());
        }
        let v = validate_matching(&pairs, Scope::new(3, 4)).unwrap();
        assert!(!v.valid);
        let Violation::Cycle { cells } = &v.violations[0] else {
            panic!("expected a cycle, got {:?}", v.violations);
        };
        assert_eq!(cells.len(), 7);
        assert_eq!(cells.first(), cells.last());
        // a proper subset is acyclic
        assert!(validate_matching(&pairs[..2], Scope::new(3, 4)).unwrap().valid);
    }

    #[test]
    fn matching_json_round_trip() {
        let (m, _) = build_matching(Scope::new(3, 3), flags()).unwrap();
        let json = serde_json::to_string(&m.to_file()).unwrap();
        let back = Matching::from_file(serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, m);
        assert!(json.contains(r#""stratum":{"dim":1,"length":2}"#));
    }

    #[test]
    fn resource_limit_names_the_stratum() {
        let err = build_matching_with_limit(Scope::new(3, 4), flags(), 50).unwrap_err();
        assert!(matches!(err, MorseError::ResourceLimit { stratum, .. } if stratum == StratumKey::new(3, 4)));
    }

    #[test]
    fn csv_and_dot_exports() {
        let (m, report) = build_matching(Scope::new(3, 3), flags()).unwrap();
        let csv = report.to_csv().unwrap();
        assert!(csv.starts_with("dim,length,simplex,degenerate,reason\n"));
        assert!(csv.contains("2,3,a1.a2.a1,false,unmatched\n"));
        let dot = to_dot(&m);
        assert_eq!(dot.matches("color=red").count(), m.len());
    }
}
