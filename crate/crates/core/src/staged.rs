//! Computably enumerable subsets of the naturals and families of them.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::encoding::nat;
use crate::Nat;

type ContainsFn = dyn Fn(&Nat, u64) -> bool + Send + Sync;
type FamilyFn = dyn Fn(u64, &Nat, u64) -> bool + Send + Sync;

/// A c.e. set: `n ∈ U :⇔ ∃s contains_at(n, s)`, monotone in `s`.
#[derive(Clone)]
pub struct StagedSet {
    name: Arc<str>,
    contains: Arc<ContainsFn>,
}

impl fmt::Debug for StagedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StagedSet({})", self.name)
    }
}

impl StagedSet {
    pub fn new<F>(name: impl Into<String>, contains: F) -> Self
    where
        F: Fn(&Nat, u64) -> bool + Send + Sync + 'static,
    {
        StagedSet {
            name: Arc::from(name.into()),
            contains: Arc::new(contains),
        }
    }

    pub fn empty() -> Self {
        StagedSet::new("empty", |_, _| false)
    }

    pub fn finite(elements: impl IntoIterator<Item = Nat>) -> Self {
        let set: BTreeSet<Nat> = elements.into_iter().collect();
        let name = format!(
            "{{{}}}",
            set.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
        );
        StagedSet::new(name, move |n, _| set.contains(n))
    }

    /// Elements listed with the stage at which each is enumerated.
    pub fn staged_list(elements: impl IntoIterator<Item = (Nat, u64)>) -> Self {
        let list: Vec<(Nat, u64)> = elements.into_iter().collect();
        StagedSet::new("staged-list", move |n, s| {
            list.iter().any(|(e, appear)| e == n && *appear <= s)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains_at(&self, n: &Nat, stage: u64) -> bool {
        (self.contains)(n, stage)
    }

    /// Elements `n <= stage` enumerated by `stage`.
    pub fn approx(&self, stage: u64) -> BTreeSet<Nat> {
        (0..=stage)
            .map(nat)
            .filter(|n| self.contains_at(n, stage))
            .collect()
    }
}

/// A uniformly c.e. family `i ↦ U_i`.
#[derive(Clone)]
pub struct StagedFamily {
    name: Arc<str>,
    contains: Arc<FamilyFn>,
}

impl fmt::Debug for StagedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StagedFamily({})", self.name)
    }
}

impl StagedFamily {
    pub fn new<F>(name: impl Into<String>, contains: F) -> Self
    where
        F: Fn(u64, &Nat, u64) -> bool + Send + Sync + 'static,
    {
        StagedFamily {
            name: Arc::from(name.into()),
            contains: Arc::new(contains),
        }
    }

    /// Family whose members are given explicitly; indices past the list are empty.
    pub fn listed(sets: Vec<StagedSet>) -> Self {
        StagedFamily::new("listed", move |i, n, s| {
            sets.get(i as usize).is_some_and(|u| u.contains_at(n, s))
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains_at(&self, index: u64, n: &Nat, stage: u64) -> bool {
        (self.contains)(index, n, stage)
    }

    pub fn member(&self, index: u64) -> StagedSet {
        let fam = self.clone();
        StagedSet::new(format!("{}[{index}]", self.name), move |n, s| {
            fam.contains_at(index, n, s)
        })
    }
}
