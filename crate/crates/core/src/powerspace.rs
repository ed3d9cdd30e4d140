//! Lower and upper powerspaces of a space of ideals.
//!
//! Closed sets and saturated compacts of `I(≺)` correspond to ideals of the
//! relations `≺_L` and `≺_U` on finite-set codes:
//!
//! ```text
//! F ≺_L G  iff  ∀m∈F ∃n∈G  m ≺ n
//! F ≺_U G  iff  ∀n∈G ∃m∈F  m ≺ n
//! ```
//!
//! A closed set is handed to [`f_lower`] as a countable family of ideals
//! (its closure is meant), a compact set to [`f_upper`] as a finite list.
//! The reverse maps are exposed through their basic-open behaviour:
//! [`g_lower_meets`], [`g_upper_covered`], plus a point constructor
//! [`g_lower_witness`] and a refuter [`g_upper_refute_member`]. Membership of
//! a point in `g_U(J)` is a `Π` statement and has no positive test.
//!
//! [`FiniteSpace`] is an independent brute-force model for finite relations.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;

use crate::encoding::{finset_decode, finset_encode, nat, MAX_FINSET_ELEMENT};
use crate::error::{Error, Result};
use crate::ideal::{chain_from_ideal_starting, ideal_from_chain, stage_schedule, Chain, IdealStream};
use crate::relation::{self, least_stage, subsets_visible, QueryResult, StagedRelation};
use crate::staged::StagedSet;
use crate::Nat;

/// Number of earliest-discovered elements whose subsets are all listed.
const DISCOVERY_LIMIT: usize = 10;

fn small_elems(code: &Nat) -> Vec<u64> {
    finset_decode(code)
}

fn as_element(n: &Nat) -> Option<u64> {
    n.to_u64().filter(|v| *v <= MAX_FINSET_ELEMENT)
}

pub fn lower_relation(rel: &StagedRelation) -> StagedRelation {
    let r = rel.clone();
    let r2 = rel.clone();
    let out = StagedRelation::new(format!("lower({})", rel.name()), move |f, g, s| {
        let gs = small_elems(g);
        small_elems(f)
            .into_iter()
            .all(|m| gs.iter().any(|n| r.holds_at(&nat(m), &nat(*n), s)))
    })
    .with_lower(move |g, s| {
        let mut union = BTreeSet::new();
        for n in small_elems(g) {
            union.extend(r2.lower_at(&nat(n), s).iter().filter_map(|a| listable(a, s)));
        }
        let union: Vec<u64> = union.into_iter().collect();
        subsets_visible(&union, s, false)
    });
    if rel.is_decidable() {
        out.decidable()
    } else {
        out
    }
}

/// `≺_U`. Predecessors are found by scanning codes, since every superset of
/// a predecessor is one too.
pub fn upper_relation(rel: &StagedRelation) -> StagedRelation {
    let r = rel.clone();
    let out = StagedRelation::new(format!("upper({})", rel.name()), move |f, g, s| {
        let fs = small_elems(f);
        small_elems(g)
            .into_iter()
            .all(|n| fs.iter().any(|m| r.holds_at(&nat(*m), &nat(n), s)))
    });
    if rel.is_decidable() {
        out.decidable()
    } else {
        out
    }
}

type FamilyFn = dyn Fn(u64) -> Option<IdealStream> + Send + Sync;

/// A countable family of ideals `i ↦ I_i`; `None` marks an absent index.
#[derive(Clone)]
pub struct IdealFamily {
    name: Arc<str>,
    get: Arc<FamilyFn>,
    len: Option<u64>,
}

impl fmt::Debug for IdealFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdealFamily({})", self.name)
    }
}

impl IdealFamily {
    pub fn new<F>(name: impl Into<String>, get: F) -> Self
    where
        F: Fn(u64) -> Option<IdealStream> + Send + Sync + 'static,
    {
        IdealFamily {
            name: Arc::from(name.into()),
            get: Arc::new(get),
            len: None,
        }
    }

    pub fn listed(ideals: Vec<IdealStream>) -> Self {
        let name = ideals
            .iter()
            .map(|i| i.label().to_string())
            .collect::<Vec<_>>()
            .join(", ");
        let len = ideals.len() as u64;
        let ideals = Arc::new(ideals);
        IdealFamily {
            name: Arc::from(format!("[{name}]")),
            get: Arc::new(move |i| ideals.get(i as usize).cloned()),
            len: Some(len),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn get(&self, i: u64) -> Option<IdealStream> {
        (self.get)(i)
    }

    /// Members with index at most `s`.
    fn visible(&self, s: u64) -> Vec<IdealStream> {
        let top = self.len.map_or(s, |n| n.min(s.saturating_add(1)).saturating_sub(1));
        if self.len == Some(0) {
            return Vec::new();
        }
        (0..=top).filter_map(|i| self.get(i)).collect()
    }
}

/// Elements below `max(s, 64)`: the ones whose singleton codes are listed
/// at stage `s`.
fn listable(n: &Nat, s: u64) -> Option<u64> {
    n.to_u64().filter(|v| *v < s.max(64))
}

/// Listable elements of the union at stage `s`.
fn union_at(ideals: &[IdealStream], s: u64) -> BTreeSet<u64> {
    ideals
        .iter()
        .flat_map(|i| i.approx(s).iter().filter_map(|n| listable(n, s)).collect::<Vec<_>>())
        .collect()
}

/// The first `DISCOVERY_LIMIT` elements in order of discovery along the
/// stages `0, 1, 2, 4, ...` up to the largest power of two at most `s`. The
/// list at a stage is a prefix of the list at every later stage.
fn discovery_prefix(union: impl Fn(u64) -> BTreeSet<u64>, s: u64) -> Vec<u64> {
    let top = if s == 0 { 0 } else { 1u64 << (63 - s.leading_zeros()) };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in stage_schedule(top) {
        for e in union(t) {
            if seen.insert(e) {
                out.push(e);
                if out.len() == DISCOVERY_LIMIT {
                    return out;
                }
            }
        }
    }
    out
}

fn all_subsets(elems: &[u64]) -> impl Iterator<Item = Nat> + '_ {
    (0u32..(1 << elems.len())).map(move |mask| {
        finset_encode(
            elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| *e),
        )
    })
}

/// Finite sets built from what `family` has shown by stage `s`.
fn candidate_sets(family: &IdealFamily, s: u64) -> BTreeSet<Nat> {
    let now = family.visible(s);
    let union: Vec<u64> = union_at(&now, s).into_iter().collect();
    let mut out: BTreeSet<Nat> = subsets_visible(&union, s, false).into_iter().collect();
    let fam = family.clone();
    let prefix = discovery_prefix(move |t| union_at(&fam.visible(t), t), s);
    out.extend(all_subsets(&prefix));
    out
}

/// `f_L(A) = {F | ∀m∈F ∃I∈A m∈I}` for the closure `A` of `family`. An empty
/// family presents the empty closed set, sent to `{∅}`.
pub fn f_lower(rel: &StagedRelation, family: &IdealFamily) -> Result<IdealStream> {
    if let Some(first) = family.get(0) {
        rel.ensure_same(first.relation())?;
    }
    let (fam, fam2) = (family.clone(), family.clone());
    Ok(IdealStream::new(
        lower_relation(rel),
        format!("f_L({})", family.name()),
        move |s| candidate_sets(&fam, s),
        move |f, s| {
            let now = fam2.visible(s);
            small_elems(f)
                .into_iter()
                .all(|m| now.iter().any(|i| i.member_at(&nat(m), s)))
        },
    ))
}

fn meets_all(ideals: &[IdealStream], f: &Nat, s: u64) -> bool {
    let elems = small_elems(f);
    ideals
        .iter()
        .all(|i| elems.iter().any(|m| i.member_at(&nat(*m), s)))
}

/// `f_U(K) = {F | ∀I∈K ∃m∈F m∈I}` for a nonempty finite list `K`.
pub fn f_upper(rel: &StagedRelation, ideals: &[IdealStream]) -> Result<IdealStream> {
    let first = ideals.first().ok_or(Error::EmptyCompact)?;
    rel.ensure_same(first.relation())?;
    for i in ideals {
        rel.ensure_same(i.relation())?;
    }
    let list: Arc<Vec<IdealStream>> = Arc::new(ideals.to_vec());
    let family = IdealFamily::listed(ideals.to_vec());
    let (l1, l2) = (list.clone(), list);
    Ok(IdealStream::new(
        upper_relation(rel),
        format!("f_U({})", family.name()),
        move |s| {
            let mut cands = candidate_sets(&family, s);
            cands.extend((0..=s).map(nat));
            cands.into_iter().filter(|f| meets_all(&l1, f, s)).collect()
        },
        move |f, s| meets_all(&l2, f, s),
    ))
}

/// `f_U(∅)`: every finite set, the empty one included.
pub fn f_upper_of_empty(rel: &StagedRelation) -> IdealStream {
    IdealStream::new(
        upper_relation(rel),
        "f_U(∅)",
        |s| (0..=s).map(nat).collect(),
        |_, _| true,
    )
}

/// Semidecides `g_L(J) ∩ [m] ≠ ∅`, which holds iff `{m} ∈ J`.
pub fn g_lower_meets(j: &IdealStream, m: &Nat, fuel: u64) -> QueryResult {
    match as_element(m) {
        Some(m) => j.member(&finset_encode([m]), fuel),
        None => QueryResult::Unknown,
    }
}

struct LiftedChain {
    base: StagedRelation,
    sets: Chain,
    picked: Mutex<Vec<Nat>>,
}

impl LiftedChain {
    /// `m_{i+1} ∈ F_{i+1}` above `m_i`; exists because `F_i ≺_L F_{i+1}`.
    fn elem(&self, i: u64) -> Nat {
        let mut picked = self.picked.lock().expect("lifted chain poisoned");
        while picked.len() as u64 <= i {
            let prev = picked.last().expect("seeded").clone();
            let next = small_elems(&self.sets.elem(picked.len() as u64));
            let mut s = 0u64;
            let found = loop {
                if let Some(n) = next.iter().find(|n| self.base.holds_at(&prev, &nat(**n), s)) {
                    break nat(*n);
                }
                s += 1;
            };
            picked.push(found);
        }
        picked[i as usize].clone()
    }
}

/// A point of `g_L(J)` containing `m`: the down-closure of a chain
/// `m = m_0 ≺ m_1 ≺ ...` threaded through a cofinal chain of `J` that starts
/// at `{m}`. Requires `{m} ∈ J`; otherwise element lookups never return.
pub fn g_lower_witness(rel: &StagedRelation, j: &IdealStream, m: &Nat) -> Result<IdealStream> {
    lower_relation(rel).ensure_same(j.relation())?;
    let m_small = as_element(m).ok_or_else(|| Error::ElementTooLarge(m.to_string()))?;
    let lifted = Arc::new(LiftedChain {
        base: rel.clone(),
        sets: chain_from_ideal_starting(j, finset_encode([m_small])),
        picked: Mutex::new(vec![m.clone()]),
    });
    let chain = Chain::new(rel.clone(), format!("witness({}, {m})", j.label()), move |i| {
        lifted.elem(i)
    });
    Ok(ideal_from_chain(&chain).relabel(format!("g_L({})∋{m}", j.label())))
}

/// Semidecides `g_U(J) ⊆ ⋃_{m∈S} [m]`, i.e. some finite `F ⊆ S` lies in `J`.
/// At stage `s` the search looks at sets `J` has listed that `S` covers and
/// at the subsets of `S` visible at `s`.
pub fn g_upper_covered(j: &IdealStream, cover: &StagedSet, fuel: u64) -> QueryResult {
    least_stage(fuel, |s| {
        let covered = |f: &Nat| {
            small_elems(f)
                .into_iter()
                .all(|m| cover.contains_at(&nat(m), s))
        };
        if j.approx(s).iter().any(covered) {
            return true;
        }
        let elems: Vec<u64> = cover.approx(s).iter().filter_map(|n| listable(n, s)).collect();
        subsets_visible(&elems, s, false)
            .iter()
            .any(|f| j.member_at(f, s))
    })
}

/// Some `F ∈ J` listed by `fuel` that `I` is not seen to meet at `fuel`.
/// `None` means no refutation at this fuel; it never certifies membership.
pub fn g_upper_refute_member(j: &IdealStream, point: &IdealStream, fuel: u64) -> Option<Nat> {
    j.approx(fuel)
        .iter()
        .find(|f| {
            !small_elems(f)
                .into_iter()
                .any(|m| point.member_at(&nat(m), fuel))
        })
        .cloned()
}

/// A transitive relation on `{0, ..., size-1}` with all powerspace objects
/// computed by exhaustive enumeration. Subsets of the carrier are bitmasks;
/// sets of ideals are bitmasks over [`FiniteSpace::ideals`].
#[derive(Clone, Debug)]
pub struct FiniteSpace {
    name: String,
    size: usize,
    matrix: Vec<bool>,
}

/// Outcome of [`FiniteSpace::verify`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteReport {
    pub name: String,
    pub ideals: usize,
    pub closed: usize,
    pub compact: usize,
    pub lower_ideals: usize,
    pub upper_ideals: usize,
    pub failures: Vec<String>,
}

impl FiniteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl FiniteSpace {
    /// Transitive closure of `pairs` on `size <= 5` points.
    pub fn new(name: impl Into<String>, size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if size > 5 {
            return Err(Error::Invalid(format!("finite space of size {size} exceeds 5")));
        }
        let mut matrix = vec![false; size * size];
        for (a, b) in pairs {
            if *a >= size || *b >= size {
                return Err(Error::Invalid(format!("pair ({a},{b}) outside carrier of size {size}")));
            }
            matrix[a * size + b] = true;
        }
        for k in 0..size {
            for i in 0..size {
                for j in 0..size {
                    if matrix[i * size + k] && matrix[k * size + j] {
                        matrix[i * size + j] = true;
                    }
                }
            }
        }
        Ok(FiniteSpace {
            name: name.into(),
            size,
            matrix,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn holds(&self, a: usize, b: usize) -> bool {
        self.matrix[a * self.size + b]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in 0..self.size {
                if self.holds(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The relation as a decidable staged relation on ℕ.
    pub fn staged_relation(&self) -> StagedRelation {
        let pairs: Vec<(Nat, Nat, u64)> = self
            .pairs()
            .into_iter()
            .map(|(a, b)| (nat(a as u64), nat(b as u64), 0))
            .collect();
        relation::finite(self.name.clone(), &pairs)
    }

    fn subsets(&self) -> std::ops::Range<u32> {
        0..(1u32 << self.size)
    }

    fn elements(&self, set: u32) -> impl Iterator<Item = usize> {
        (0..self.size).filter(move |i| set & (1 << i) != 0)
    }

    /// Every nonempty, lower, directed subset of the carrier.
    pub fn ideals(&self) -> Vec<u32> {
        self.subsets()
            .filter(|&set| {
                if set == 0 {
                    return false;
                }
                let lower = self
                    .elements(set)
                    .all(|b| (0..self.size).all(|a| !self.holds(a, b) || set & (1 << a) != 0));
                let directed = self.elements(set).all(|a| {
                    self.elements(set).all(|b| {
                        self.elements(set)
                            .any(|c| self.holds(a, c) && self.holds(b, c))
                    })
                });
                lower && directed
            })
            .collect()
    }

    fn lower_holds(&self, f: u32, g: u32) -> bool {
        self.elements(f)
            .all(|m| self.elements(g).any(|n| self.holds(m, n)))
    }

    fn upper_holds(&self, f: u32, g: u32) -> bool {
        self.elements(g)
            .all(|n| self.elements(f).any(|m| self.holds(m, n)))
    }

    /// Ideals of a transitive relation on the finite sets of the carrier,
    /// as bitmasks over set codes. Every such ideal is `{F | F ≺ U}` for some
    /// `U ≺ U`; candidates are checked against the axioms anyway.
    fn finite_ideals(&self, holds: impl Fn(u32, u32) -> bool) -> Vec<u64> {
        let sets: Vec<u32> = self.subsets().collect();
        let mut out = BTreeSet::new();
        for &u in &sets {
            if !holds(u, u) {
                continue;
            }
            let down: u64 = sets
                .iter()
                .filter(|&&f| holds(f, u))
                .fold(0, |acc, &f| acc | 1 << f);
            out.insert(down);
        }
        let members = |j: u64| sets.iter().copied().filter(move |f| j & (1 << f) != 0);
        out.into_iter()
            .filter(|&j| {
                let lower = members(j).all(|g| sets.iter().all(|&f| !holds(f, g) || j & (1 << f) != 0));
                let directed = members(j)
                    .all(|a| members(j).all(|b| members(j).any(|c| holds(a, c) && holds(b, c))));
                j != 0 && lower && directed
            })
            .collect()
    }

    pub fn lower_ideals(&self) -> Vec<u64> {
        self.finite_ideals(|f, g| self.lower_holds(f, g))
    }

    pub fn upper_ideals(&self) -> Vec<u64> {
        self.finite_ideals(|f, g| self.upper_holds(f, g))
    }

    /// `{I | I ∩ n ≠ ∅}` as a bitmask over `ideals`.
    fn open(&self, ideals: &[u32], n: u32) -> u64 {
        ideals
            .iter()
            .enumerate()
            .filter(|(_, i)| *i & n != 0)
            .fold(0, |acc, (k, _)| acc | 1 << k)
    }

    /// Complements of the open sets, distinct.
    pub fn closed_sets(&self) -> Vec<u64> {
        let ideals = self.ideals();
        let all = full_mask(ideals.len());
        let set: BTreeSet<u64> = self
            .subsets()
            .map(|n| all & !self.open(&ideals, n))
            .collect();
        set.into_iter().collect()
    }

    /// Up-sets under inclusion of ideals. Every subset of a finite space is
    /// compact.
    pub fn saturated_compacts(&self) -> Vec<u64> {
        let ideals = self.ideals();
        (0..=full_mask(ideals.len()))
            .filter(|k| {
                (0..ideals.len()).all(|a| {
                    k & (1 << a) == 0
                        || (0..ideals.len())
                            .all(|b| ideals[a] & !ideals[b] != 0 || k & (1 << b) != 0)
                })
            })
            .collect()
    }

    pub fn f_l(&self, ideals: &[u32], a: u64) -> u64 {
        self.subsets()
            .filter(|&f| {
                self.elements(f)
                    .all(|m| in_mask(ideals, a).any(|i| i & (1 << m) != 0))
            })
            .fold(0, |acc, f| acc | 1 << f)
    }

    pub fn g_l(&self, ideals: &[u32], j: u64) -> u64 {
        let covered: u32 = self.subsets().filter(|f| j & (1 << f) != 0).fold(0, |a, f| a | f);
        ideals
            .iter()
            .enumerate()
            .filter(|(_, i)| *i & !covered == 0)
            .fold(0, |acc, (k, _)| acc | 1 << k)
    }

    pub fn f_u(&self, ideals: &[u32], k: u64) -> u64 {
        self.subsets()
            .filter(|&f| in_mask(ideals, k).all(|i| i & f != 0))
            .fold(0, |acc, f| acc | 1 << f)
    }

    pub fn g_u(&self, ideals: &[u32], j: u64) -> u64 {
        ideals
            .iter()
            .enumerate()
            .filter(|(_, i)| self.subsets().all(|f| j & (1 << f) == 0 || *i & f != 0))
            .fold(0, |acc, (k, _)| acc | 1 << k)
    }

    /// Checks both homeomorphisms and both basic-open characterizations by
    /// enumeration.
    pub fn verify(&self) -> FiniteReport {
        let ideals = self.ideals();
        let closed = self.closed_sets();
        let compact = self.saturated_compacts();
        let lower = self.lower_ideals();
        let upper = self.upper_ideals();
        let mut failures = Vec::new();
        let lower_set: BTreeSet<u64> = lower.iter().copied().collect();
        let upper_set: BTreeSet<u64> = upper.iter().copied().collect();

        for &a in &closed {
            let j = self.f_l(&ideals, a);
            if !lower_set.contains(&j) {
                failures.push(format!("f_L({a:#b}) is not an ideal of ≺_L"));
            }
            if self.g_l(&ideals, j) != a {
                failures.push(format!("g_L(f_L({a:#b})) ≠ {a:#b}"));
            }
        }
        for &j in &lower {
            let a = self.g_l(&ideals, j);
            if !closed.contains(&a) {
                failures.push(format!("g_L({j:#x}) is not closed"));
            }
            if self.f_l(&ideals, a) != j {
                failures.push(format!("f_L(g_L({j:#x})) ≠ {j:#x}"));
            }
            for f in self.subsets() {
                let meets_all = self
                    .elements(f)
                    .all(|m| in_mask(&ideals, a).any(|i| i & (1 << m) != 0));
                if meets_all != (j & (1 << f) != 0) {
                    failures.push(format!("lower basic-open characterization fails for J={j:#x}, F={f:#b}"));
                }
            }
        }
        for &k in &compact {
            let j = self.f_u(&ideals, k);
            if !upper_set.contains(&j) {
                failures.push(format!("f_U({k:#b}) is not an ideal of ≺_U"));
            }
            if self.g_u(&ideals, j) != k {
                failures.push(format!("g_U(f_U({k:#b})) ≠ {k:#b}"));
            }
        }
        for &j in &upper {
            let k = self.g_u(&ideals, j);
            if !compact.contains(&k) {
                failures.push(format!("g_U({j:#x}) is not saturated"));
            }
            if self.f_u(&ideals, k) != j {
                failures.push(format!("f_U(g_U({j:#x})) ≠ {j:#x}"));
            }
            for cover in self.subsets() {
                let inside = in_mask(&ideals, k).all(|i| i & cover != 0);
                let witness = self
                    .subsets()
                    .any(|f| f & !cover == 0 && j & (1 << f) != 0);
                if inside != witness {
                    failures.push(format!("upper basic-open characterization fails for J={j:#x}, S={cover:#b}"));
                }
            }
        }
        FiniteReport {
            name: self.name.clone(),
            ideals: ideals.len(),
            closed: closed.len(),
            compact: compact.len(),
            lower_ideals: lower.len(),
            upper_ideals: upper.len(),
            failures,
        }
    }

    /// Runs the executable maps on every object of the model and compares
    /// them with the enumerated answers. Returns one line per disagreement.
    pub fn cross_check(&self, fuel: u64) -> Vec<String> {
        let rel = self.staged_relation();
        let lower_rel = lower_relation(&rel);
        let upper_rel = upper_relation(&rel);
        let ideals = self.ideals();
        let streams: Vec<IdealStream> = ideals
            .iter()
            .map(|&i| constant_stream(&rel, self.elements(i).map(|e| nat(e as u64)).collect()))
            .collect();
        let outside = finset_encode([self.size as u64]);
        let mut out = Vec::new();

        for &a in &self.closed_sets() {
            let listed: Vec<IdealStream> = picked(&streams, a);
            let Ok(stream) = f_lower(&rel, &IdealFamily::listed(listed)) else {
                out.push(format!("f_lower rejected closed set {a:#b}"));
                continue;
            };
            let expected = self.f_l(&ideals, a);
            for f in self.subsets() {
                let got = stream.member(&nat(f as u64), fuel).is_yes();
                if got != (expected & (1 << f) != 0) {
                    out.push(format!("f_lower({a:#b}) at {f:#b}: got {got}"));
                }
            }
            if stream.member(&outside, fuel).is_yes() {
                out.push(format!("f_lower({a:#b}) contains a set outside the carrier"));
            }
        }

        for &j in &self.lower_ideals() {
            let stream = constant_stream(&lower_rel, codes_of(j, self.size));
            let a = self.g_l(&ideals, j);
            for m in 0..self.size {
                let expected = in_mask(&ideals, a).any(|i| i & (1 << m) != 0);
                let got = g_lower_meets(&stream, &nat(m as u64), fuel).is_yes();
                if got != expected {
                    out.push(format!("g_lower_meets({j:#x}, {m}): got {got}"));
                }
                if expected {
                    let Ok(point) = g_lower_witness(&rel, &stream, &nat(m as u64)) else {
                        out.push(format!("g_lower_witness({j:#x}, {m}) rejected"));
                        continue;
                    };
                    let seen = (0..self.size)
                        .filter(|e| point.member_at(&nat(*e as u64), fuel))
                        .fold(0u32, |acc, e| acc | 1 << e);
                    let index = ideals.iter().position(|&i| i == seen);
                    let ok = seen & (1 << m) != 0 && index.is_some_and(|k| a & (1 << k) != 0);
                    if !ok {
                        out.push(format!("g_lower_witness({j:#x}, {m}) gave {seen:#b}"));
                    }
                }
            }
        }

        for &k in &self.saturated_compacts() {
            let stream = if k == 0 {
                f_upper_of_empty(&rel)
            } else {
                match f_upper(&rel, &picked(&streams, k)) {
                    Ok(s) => s,
                    Err(e) => {
                        out.push(format!("f_upper({k:#b}): {e}"));
                        continue;
                    }
                }
            };
            let expected = self.f_u(&ideals, k);
            for f in self.subsets() {
                let got = stream.member(&nat(f as u64), fuel).is_yes();
                if got != (expected & (1 << f) != 0) {
                    out.push(format!("f_upper({k:#b}) at {f:#b}: got {got}"));
                }
            }
        }

        for &j in &self.upper_ideals() {
            let stream = constant_stream(&upper_rel, codes_of(j, self.size));
            let k = self.g_u(&ideals, j);
            for cover in self.subsets() {
                let expected = in_mask(&ideals, k).all(|i| i & cover != 0);
                let set = StagedSet::finite(self.elements(cover).map(|e| nat(e as u64)));
                let got = g_upper_covered(&stream, &set, fuel).is_yes();
                if got != expected {
                    out.push(format!("g_upper_covered({j:#x}, {cover:#b}): got {got}"));
                }
            }
            for (idx, point) in streams.iter().enumerate() {
                let refuted = g_upper_refute_member(&stream, point, fuel).is_some();
                if refuted == (k & (1 << idx) != 0) {
                    out.push(format!("g_upper_refute_member({j:#x}, ideal {idx}): got {refuted}"));
                }
            }
        }
        out
    }
}

fn full_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

fn in_mask(ideals: &[u32], mask: u64) -> impl Iterator<Item = u32> + '_ {
    ideals
        .iter()
        .enumerate()
        .filter(move |(k, _)| mask & (1 << k) != 0)
        .map(|(_, i)| *i)
}

fn picked(streams: &[IdealStream], mask: u64) -> Vec<IdealStream> {
    streams
        .iter()
        .enumerate()
        .filter(|(k, _)| mask & (1 << k) != 0)
        .map(|(_, s)| s.clone())
        .collect()
}

fn codes_of(j: u64, size: usize) -> Vec<Nat> {
    (0..1u64 << size).filter(|f| j & (1 << f) != 0).map(nat).collect()
}

fn constant_stream(rel: &StagedRelation, elems: Vec<Nat>) -> IdealStream {
    let label = format!(
        "{{{}}}",
        elems.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    );
    let set: BTreeSet<Nat> = elems.into_iter().collect();
    IdealStream::from_approx(rel.clone(), label, move |_| set.clone())
}

/// Twenty small preorders and strict orders, fixed once and for all.
pub fn finite_catalogue() -> Vec<FiniteSpace> {
    let refl = |n: usize| (0..n).map(|i| (i, i)).collect::<Vec<_>>();
    let chain_strict = |n: usize| (1..n).map(|i| (i - 1, i)).collect::<Vec<_>>();
    let with = |mut a: Vec<(usize, usize)>, b: &[(usize, usize)]| {
        a.extend_from_slice(b);
        a
    };
    let specs: Vec<(&str, usize, Vec<(usize, usize)>)> = vec![
        ("point", 1, refl(1)),
        ("empty-relation-1", 1, vec![]),
        ("discrete-3", 3, refl(3)),
        ("discrete-5", 5, refl(5)),
        ("strict-chain-4", 4, chain_strict(4)),
        ("chain-3", 3, with(refl(3), &chain_strict(3))),
        ("chain-5", 5, with(refl(5), &chain_strict(5))),
        ("vee", 3, with(refl(3), &[(0, 2), (1, 2)])),
        ("wedge", 3, with(refl(3), &[(0, 1), (0, 2)])),
        ("diamond", 4, with(refl(4), &[(0, 1), (0, 2), (1, 3), (2, 3)])),
        ("n-shape", 4, with(refl(4), &[(0, 2), (1, 2), (1, 3)])),
        ("two-cycle", 2, vec![(0, 1), (1, 0)]),
        ("cycle-plus-tail", 4, vec![(0, 1), (1, 2), (2, 1), (3, 3)]),
        ("full-3", 3, vec![(0, 1), (1, 2), (2, 0)]),
        ("loop-top", 3, vec![(0, 2), (1, 2), (2, 2)]),
        ("strict-above-loop", 4, vec![(0, 1), (1, 1), (2, 3)]),
        ("antichain-top", 5, with(refl(5), &[(0, 4), (1, 4), (2, 4), (3, 4)])),
        ("two-chains", 5, with(refl(5), &[(0, 1), (1, 2), (3, 4)])),
        ("binary-tree", 5, with(refl(5), &[(1, 0), (2, 0), (3, 1), (4, 1)])),
        ("crown", 5, with(refl(5), &[(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)])),
    ];
    specs
        .into_iter()
        .map(|(name, size, pairs)| FiniteSpace::new(name, size, &pairs).expect("catalogue entry"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::finset_encode;
    use crate::ideal::{validate_prefix, FinGenSpec};
    use crate::relation::{equality, less_than, strict_prefix};

    fn set(xs: &[u64]) -> Nat {
        finset_encode(xs.iter().copied())
    }

    #[test]
    fn relation_examples() {
        let l = lower_relation(&less_than());
        let u = upper_relation(&less_than());
        assert!(l.holds_at(&set(&[1, 3]), &set(&[5]), 0));
        assert!(u.holds_at(&set(&[1, 3]), &set(&[5]), 0));
        assert!(!u.holds_at(&set(&[5]), &set(&[1]), 0));
        assert!(l.holds_at(&set(&[]), &set(&[7]), 0));
        assert!(!l.holds_at(&set(&[7]), &set(&[]), 0));
        assert!(u.holds_at(&set(&[7]), &set(&[]), 0));
        assert!(!u.holds_at(&set(&[]), &set(&[7]), 0));
    }

    #[test]
    fn transitive_on_small_sets() {
        let codes: Vec<Nat> = (0u64..64).map(nat).collect();
        for rel in [less_than(), equality()] {
            assert!(lower_relation(&rel).transitivity_violations(&codes, 0).is_empty());
            assert!(upper_relation(&rel).transitivity_violations(&codes, 0).is_empty());
        }
        // sequence codes 0..=5 are (), (0), (1), (0,0), (2), (1,0)
        let sp = strict_prefix();
        assert!(lower_relation(&sp).transitivity_violations(&codes, 0).is_empty());
        assert!(upper_relation(&sp).transitivity_violations(&codes, 0).is_empty());
    }

    #[test]
    fn lower_predecessors_cover_small_codes() {
        let l = lower_relation(&less_than());
        let g = set(&[2, 6]);
        for s in [0u64, 5, 40, 100] {
            let listed: BTreeSet<Nat> = l.lower_at(&g, s).into_iter().collect();
            for f in 0..=s {
                let f = nat(f);
                if l.holds_at(&f, &g, s) {
                    assert!(listed.contains(&f), "{f} missing at {s}");
                }
            }
            assert!(listed.iter().all(|f| l.holds_at(f, &g, s)));
        }
    }

    fn point(n: u64) -> IdealStream {
        FinGenSpec::singleton(nat(n)).stream()
    }

    #[test]
    fn f_lower_examples() {
        let rel = equality();
        let j = f_lower(&rel, &IdealFamily::listed(vec![point(5)])).unwrap();
        assert!(j.member(&set(&[]), 0).is_yes());
        assert!(j.member(&set(&[5]), 10).is_yes());
        assert!(!j.member(&set(&[4]), 200).is_yes());

        let j = f_lower(&rel, &IdealFamily::listed(vec![point(3), point(7)])).unwrap();
        for code in 0u64..256 {
            let f = nat(code);
            let want = finset_decode(&f).iter().all(|e| *e == 3 || *e == 7);
            assert_eq!(j.member(&f, 64).is_yes(), want, "{code}");
        }
        assert!(validate_prefix(&j, 6, 64).is_clean());
    }

    #[test]
    fn f_lower_over_a_countable_family() {
        let fam = IdealFamily::new("points", |i| Some(point(2 * i)));
        let j = f_lower(&equality(), &fam).unwrap();
        assert!(j.member(&set(&[0, 4, 8]), 64).is_yes());
        assert!(!j.member(&set(&[0, 3]), 256).is_yes());
        let d = validate_prefix(&j, 12, 256);
        assert!(d.is_clean(), "{d:?}");
    }

    #[test]
    fn g_lower_examples() {
        let rel = equality();
        let j = f_lower(&rel, &IdealFamily::listed(vec![point(5)])).unwrap();
        assert!(g_lower_meets(&j, &nat(5), 16).is_yes());
        assert!(!g_lower_meets(&j, &nat(4), 1000).is_yes());
        let w = g_lower_witness(&rel, &j, &nat(5)).unwrap();
        assert!(w.member(&nat(5), 8).is_yes());
        assert!(!w.member(&nat(4), 200).is_yes());

        // the chain {0} ≺_L {1} ≺_L ... over <
        let lt = less_than();
        let lower = lower_relation(&lt);
        let chain = Chain::new(lower, "singletons", |i| finset_encode([i]));
        let j = ideal_from_chain(&chain);
        for m in 0..6u64 {
            assert!(g_lower_meets(&j, &nat(m), 64).is_yes());
        }
        let w = g_lower_witness(&lt, &j, &nat(0)).unwrap();
        for n in 0..10u64 {
            assert!(w.member(&nat(n), 64).is_yes());
            assert!(g_lower_meets(&j, &nat(n), 64).is_yes());
        }
    }

    #[test]
    fn f_upper_examples() {
        let rel = equality();
        assert_eq!(f_upper(&rel, &[]).unwrap_err(), Error::EmptyCompact);

        let j = f_upper(&rel, &[point(5)]).unwrap();
        for code in 0u64..128 {
            let f = nat(code);
            let want = finset_decode(&f).contains(&5);
            assert_eq!(j.member(&f, 128).is_yes(), want, "{code}");
        }
        let j = f_upper(&rel, &[point(3), point(7)]).unwrap();
        for code in 0u64..512 {
            let f = nat(code);
            let d = finset_decode(&f);
            assert_eq!(j.member(&f, 600).is_yes(), d.contains(&3) && d.contains(&7));
        }
        assert!(validate_prefix(&j, 6, 256).is_clean());

        let lt = less_than();
        let j = f_upper(&lt, &[FinGenSpec::naturals().stream()]).unwrap();
        assert!(!j.member(&set(&[]), 500).is_yes());
        assert!(j.member(&set(&[40]), 64).is_yes());
        assert!(validate_prefix(&j, 8, 128).is_clean());

        let all = f_upper_of_empty(&rel);
        assert!(all.member(&set(&[]), 0).is_yes());
    }

    #[test]
    fn g_upper_examples() {
        let rel = equality();
        let j = f_upper(&rel, &[point(5)]).unwrap();
        assert!(g_upper_covered(&j, &StagedSet::finite([nat(5)]), 64).is_yes());
        assert!(!g_upper_covered(&j, &StagedSet::finite([nat(4)]), 500).is_yes());
        assert_eq!(g_upper_refute_member(&j, &point(4), 64), Some(set(&[5])));
        assert_eq!(g_upper_refute_member(&j, &point(5), 500), None);

        let lt = less_than();
        let j = f_upper(&lt, &[FinGenSpec::naturals().stream()]).unwrap();
        assert!(g_upper_covered(&j, &StagedSet::finite([nat(17)]), 64).is_yes());
    }

    #[test]
    fn catalogue_has_twenty_spaces_with_small_carriers() {
        let cat = finite_catalogue();
        assert_eq!(cat.len(), 20);
        assert!(cat.iter().all(|s| s.size() <= 5));
    }

    #[test]
    fn ideals_of_small_spaces() {
        let cat = finite_catalogue();
        let by_name = |n: &str| cat.iter().find(|s| s.name() == n).unwrap().clone();
        assert_eq!(by_name("discrete-3").ideals(), vec![0b001, 0b010, 0b100]);
        assert!(by_name("strict-chain-4").ideals().is_empty());
        assert_eq!(by_name("chain-3").ideals(), vec![0b001, 0b011, 0b111]);
        assert_eq!(by_name("vee").ideals(), vec![0b001, 0b010, 0b111]);
        assert_eq!(by_name("two-cycle").ideals(), vec![0b11]);
    }

    #[test]
    fn finite_model_verifies() {
        for space in finite_catalogue() {
            let r = space.verify();
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
        }
    }

    #[test]
    fn executable_maps_match_the_model() {
        for space in finite_catalogue() {
            let bad = space.cross_check(16);
            assert!(bad.is_empty(), "{}: {:?}", space.name(), bad);
        }
    }
}
