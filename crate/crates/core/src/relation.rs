//! Relations on the naturals given by stage-monotone decidable approximations.
//!
//! A [`StagedRelation`] answers `holds_at(a, b, s)`; the relation it presents
//! is `a ≺ b :⇔ ∃s holds_at(a, b, s)`. Every relation in the crate, built-in
//! or derived, is required to be monotone in the stage.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::encoding::{
    finset_decode, finset_encode, finset_subset, nat, pair_encode, seq_strict_prefix,
    seq_strict_prefixes,
};
use crate::error::{Error, Result};
use crate::Nat;

type HoldsFn = dyn Fn(&Nat, &Nat, u64) -> bool + Send + Sync;
type LowerFn = dyn Fn(&Nat, u64) -> Vec<Nat> + Send + Sync;

/// Outcome of a fuel-bounded semidecision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "answer", rename_all = "lowercase")]
pub enum QueryResult {
    Yes { witness_stage: u64 },
    Unknown,
}

impl QueryResult {
    pub fn is_yes(&self) -> bool {
        matches!(self, QueryResult::Yes { .. })
    }

    pub fn from_bool(holds: bool, stage: u64) -> Self {
        if holds {
            QueryResult::Yes {
                witness_stage: stage,
            }
        } else {
            QueryResult::Unknown
        }
    }
}

impl fmt::Display for QueryResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryResult::Yes { witness_stage } => write!(f, "Yes (stage {witness_stage})"),
            QueryResult::Unknown => write!(f, "Unknown"),
        }
    }
}

/// Finds the least stage in `0..=fuel` where a monotone predicate becomes true.
pub fn least_stage(fuel: u64, mut at: impl FnMut(u64) -> bool) -> QueryResult {
    if !at(fuel) {
        return QueryResult::Unknown;
    }
    let (mut lo, mut hi) = (0u64, fuel);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if at(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    QueryResult::Yes { witness_stage: lo }
}

#[derive(Clone)]
pub struct StagedRelation {
    name: Arc<str>,
    holds: Arc<HoldsFn>,
    lower: Option<Arc<LowerFn>>,
    decidable: bool,
}

impl fmt::Debug for StagedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StagedRelation")
            .field("name", &self.name)
            .field("decidable", &self.decidable)
            .finish()
    }
}

impl StagedRelation {
    pub fn new<F>(name: impl Into<String>, holds: F) -> Self
    where
        F: Fn(&Nat, &Nat, u64) -> bool + Send + Sync + 'static,
    {
        StagedRelation {
            name: Arc::from(name.into()),
            holds: Arc::new(holds),
            lower: None,
            decidable: false,
        }
    }

    /// Marks the relation as decided already at stage 0.
    pub fn decidable(mut self) -> Self {
        self.decidable = true;
        self
    }

    /// Installs a cheaper enumerator of predecessors. `lower(b, s)` must be
    /// monotone in `s`, contain only predecessors of `b`, and include every
    /// `a <= s` with `holds_at(a, b, s)`.
    pub fn with_lower<F>(mut self, lower: F) -> Self
    where
        F: Fn(&Nat, u64) -> Vec<Nat> + Send + Sync + 'static,
    {
        self.lower = Some(Arc::new(lower));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_decidable(&self) -> bool {
        self.decidable
    }

    pub fn same_as(&self, other: &StagedRelation) -> bool {
        Arc::ptr_eq(&self.holds, &other.holds) || self.name == other.name
    }

    pub fn ensure_same(&self, other: &StagedRelation) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::RelationMismatch {
                expected: self.name().to_string(),
                found: other.name().to_string(),
            })
        }
    }

    pub fn holds_at(&self, a: &Nat, b: &Nat, stage: u64) -> bool {
        (self.holds)(a, b, stage)
    }

    /// Fuel-bounded semidecision of `a ≺ b`, reporting the least witnessing stage.
    pub fn holds(&self, a: &Nat, b: &Nat, fuel: u64) -> QueryResult {
        if self.decidable {
            return QueryResult::from_bool(self.holds_at(a, b, 0), 0);
        }
        least_stage(fuel, |s| self.holds_at(a, b, s))
    }

    /// Predecessors of `b` discovered by stage `s`.
    pub fn lower_at(&self, b: &Nat, stage: u64) -> Vec<Nat> {
        match &self.lower {
            Some(lower) => lower(b, stage),
            None => (0..=stage)
                .map(nat)
                .filter(|a| self.holds_at(a, b, stage))
                .collect(),
        }
    }

    /// Every pair `(a, b)` with `a, b <= bound` related at `stage`.
    pub fn enumerate_pairs(&self, stage: u64, bound: u64) -> Vec<(Nat, Nat)> {
        let mut out = Vec::new();
        for a in 0..=bound {
            let a = nat(a);
            for b in 0..=bound {
                let b = nat(b);
                if self.holds_at(&a, &b, stage) {
                    out.push((a.clone(), b));
                }
            }
        }
        out
    }

    /// Triples `(a, b, c)` below `bound` with `a ≺ b ≺ c` at `fuel` whose
    /// composite `a ≺ c` is still unknown at `fuel²`. An empty answer is
    /// evidence, not proof.
    pub fn check_transitivity(&self, bound: u64, fuel: u64) -> Vec<(Nat, Nat, Nat)> {
        let elems: Vec<Nat> = (0..=bound).map(nat).collect();
        self.transitivity_violations(&elems, fuel)
    }

    /// [`Self::check_transitivity`] over an explicit element list.
    pub fn transitivity_violations(&self, elems: &[Nat], fuel: u64) -> Vec<(Nat, Nat, Nat)> {
        let size = elems.len();
        let mut matrix = vec![false; size * size];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                matrix[i * size + j] = self.holds_at(a, b, fuel);
            }
        }
        let long_fuel = fuel.saturating_mul(fuel).max(fuel);
        let mut out = Vec::new();
        for i in 0..size {
            for j in 0..size {
                if !matrix[i * size + j] {
                    continue;
                }
                for k in 0..size {
                    if matrix[j * size + k]
                        && !matrix[i * size + k]
                        && !self.holds_at(&elems[i], &elems[k], long_fuel)
                    {
                        out.push((elems[i].clone(), elems[j].clone(), elems[k].clone()));
                    }
                }
            }
        }
        out
    }
}

pub const BUILTIN_NAMES: [&str; 4] = ["equality", "strict_prefix", "finite_subset", "less_than"];

pub fn builtin(name: &str) -> Result<StagedRelation> {
    match name {
        "equality" => Ok(equality()),
        "strict_prefix" => Ok(strict_prefix()),
        "finite_subset" => Ok(finite_subset()),
        "less_than" => Ok(less_than()),
        other => Err(Error::UnknownRelation(other.to_string())),
    }
}

pub fn equality() -> StagedRelation {
    StagedRelation::new("equality", |a, b, _| a == b)
        .decidable()
        .with_lower(|b, _| vec![b.clone()])
}

pub fn less_than() -> StagedRelation {
    StagedRelation::new("less_than", |a, b, _| a < b)
        .decidable()
        .with_lower(|b, s| {
            let top = match b.to_u64() {
                Some(b) => b.min(s.saturating_add(1)),
                None => s.saturating_add(1),
            };
            (0..top).map(nat).collect()
        })
}

/// Strict prefix order on sequence codes.
pub fn strict_prefix() -> StagedRelation {
    StagedRelation::new("strict_prefix", |a, b, _| seq_strict_prefix(a, b))
        .decidable()
        .with_lower(|b, _| seq_strict_prefixes(b))
}

/// Inclusion on finite-set codes (reflexive).
pub fn finite_subset() -> StagedRelation {
    StagedRelation::new("finite_subset", |a, b, _| finset_subset(a, b))
        .decidable()
        .with_lower(|b, s| {
            let elems = finset_decode(b);
            subsets_visible(&elems, s, true)
        })
}

/// Codes of the subsets of `elems` visible at stage `s`: singletons and the
/// empty set always, every subset whose code is at most `s`, and all subsets
/// outright when `small_all` and there are at most ten elements.
pub fn subsets_visible(elems: &[u64], s: u64, small_all: bool) -> Vec<Nat> {
    let mut out = BTreeSet::new();
    if small_all && elems.len() <= 10 {
        for mask in 0u32..(1 << elems.len()) {
            out.insert(finset_encode(
                elems
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, e)| *e),
            ));
        }
        return out.into_iter().collect();
    }
    out.insert(Nat::zero());
    for e in elems {
        out.insert(finset_encode([*e]));
    }
    // subsets with code <= s only use elements below log2(s) + 1
    let small: Vec<u64> = elems.iter().copied().filter(|e| *e < 64 && (1u64 << e) <= s).collect();
    if small.len() <= 20 {
        for mask in 0u64..(1 << small.len()) {
            let code = finset_encode(
                small
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, e)| *e),
            );
            if code <= nat(s) {
                out.insert(code);
            }
        }
    }
    out.into_iter().collect()
}

/// A relation given by finitely many pairs, each tagged with the stage at
/// which it is enumerated.
pub fn finite(name: impl Into<String>, pairs: &[(Nat, Nat, u64)]) -> StagedRelation {
    let mut table: BTreeMap<(Nat, Nat), u64> = BTreeMap::new();
    for (a, b, s) in pairs {
        let entry = table.entry((a.clone(), b.clone())).or_insert(*s);
        *entry = (*entry).min(*s);
    }
    let mut preds: BTreeMap<Nat, Vec<(Nat, u64)>> = BTreeMap::new();
    for ((a, b), s) in &table {
        preds.entry(b.clone()).or_default().push((a.clone(), *s));
    }
    let decidable = table.values().all(|s| *s == 0);
    let table = Arc::new(table);
    let preds = Arc::new(preds);
    let rel = StagedRelation::new(name, move |a, b, s| {
        table
            .get(&(a.clone(), b.clone()))
            .is_some_and(|appear| *appear <= s)
    })
    .with_lower(move |b, s| {
        preds
            .get(b)
            .map(|ps| {
                ps.iter()
                    .filter(|(_, appear)| *appear <= s)
                    .map(|(a, _)| a.clone())
                    .collect()
            })
            .unwrap_or_default()
    });
    if decidable {
        rel.decidable()
    } else {
        rel
    }
}

/// Transitive closure of a staged finite pair list. A derived pair appears at
/// the least stage bounding every link of some path.
pub fn transitive_closure(pairs: &[(Nat, Nat, u64)]) -> Vec<(Nat, Nat, u64)> {
    let mut best: BTreeMap<(Nat, Nat), u64> = BTreeMap::new();
    for (a, b, s) in pairs {
        let e = best.entry((a.clone(), b.clone())).or_insert(*s);
        *e = (*e).min(*s);
    }
    loop {
        let mut changed = false;
        let snapshot: Vec<((Nat, Nat), u64)> = best.iter().map(|(k, v)| (k.clone(), *v)).collect();
        for ((a, b), s1) in &snapshot {
            for ((b2, c), s2) in &snapshot {
                if b != b2 {
                    continue;
                }
                let s = (*s1).max(*s2);
                let e = best.entry((a.clone(), c.clone())).or_insert(u64::MAX);
                if s < *e {
                    *e = s;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    best.into_iter().map(|((a, b), s)| (a, b, s)).collect()
}

/// Delays each pair of `rel` by a deterministic per-pair offset below
/// `spread`. Turns a decidable relation into a genuinely staged one without
/// changing its semantics; used to exercise stage monotonicity.
pub fn staggered(rel: &StagedRelation, spread: u64) -> StagedRelation {
    let inner = rel.clone();
    let spread = spread.max(1);
    let delay = move |a: &Nat, b: &Nat| -> u64 {
        let h = pair_encode(a, b) % nat(spread);
        h.to_u64().unwrap_or(0)
    };
    let lower_inner = rel.clone();
    StagedRelation::new(format!("staggered({},{spread})", rel.name()), move |a, b, s| {
        let d = delay(a, b);
        s >= d && inner.holds_at(a, b, s - d)
    })
    .with_lower(move |b, s| {
        lower_inner
            .lower_at(b, s)
            .into_iter()
            .filter(|a| {
                let d = pair_encode(a, b) % nat(spread);
                let d = d.to_u64().unwrap_or(0);
                s >= d && lower_inner.holds_at(a, b, s - d)
            })
            .collect()
    })
}
