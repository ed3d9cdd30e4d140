//! Codes for partial maps between spaces of ideals.
//!
//! A code is a c.e. set `R` of pair codes `<m, n>`; it denotes the map
//! `⟦R⟧(I) = { n | ∃m ∈ I, <m,n> ∈ R }`, defined wherever the result is an
//! ideal of the target relation. Domain membership is Π⁰₂ and is never
//! checked when a code is applied; run [`crate::ideal::validate_prefix`] on
//! the output instead.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::encoding::nat;
use crate::error::Result;
use crate::ideal::IdealStream;
use crate::relation::StagedRelation;
use crate::staged::{StagedFamily, StagedSet};
use crate::Nat;

type PairFn = dyn Fn(&Nat, &Nat, u64) -> bool + Send + Sync;
type ImageFn = dyn Fn(&BTreeSet<Nat>, u64) -> BTreeSet<Nat> + Send + Sync;

#[derive(Clone)]
pub struct FnCode {
    name: Arc<str>,
    source: StagedRelation,
    target: StagedRelation,
    contains: Arc<PairFn>,
    image: Arc<ImageFn>,
}

impl fmt::Debug for FnCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FnCode({}: {} -> {})",
            self.name,
            self.source.name(),
            self.target.name()
        )
    }
}

impl FnCode {
    /// A code given by its staged pair membership; forward images scan
    /// `n <= stage`.
    pub fn new<F>(
        name: impl Into<String>,
        source: StagedRelation,
        target: StagedRelation,
        contains: F,
    ) -> Self
    where
        F: Fn(&Nat, &Nat, u64) -> bool + Send + Sync + 'static,
    {
        let contains: Arc<PairFn> = Arc::new(contains);
        let c2 = contains.clone();
        FnCode {
            name: Arc::from(name.into()),
            source,
            target,
            contains,
            image: Arc::new(move |ms, s| {
                (0..=s)
                    .map(nat)
                    .filter(|n| ms.iter().any(|m| c2(m, n, s)))
                    .collect()
            }),
        }
    }

    /// Replaces the forward-image enumerator. `image(ms, s)` must list only
    /// `n` with `<m,n>` in the code at stage `s` for some `m ∈ ms`, be
    /// monotone, and exhaust the image in the limit.
    pub fn with_image<F>(mut self, image: F) -> Self
    where
        F: Fn(&BTreeSet<Nat>, u64) -> BTreeSet<Nat> + Send + Sync + 'static,
    {
        self.image = Arc::new(image);
        self
    }

    /// Explicit staged pairs `(m, n, stage)`.
    pub fn from_pairs(
        name: impl Into<String>,
        source: StagedRelation,
        target: StagedRelation,
        pairs: &[(Nat, Nat, u64)],
    ) -> Self {
        let mut by_source: BTreeMap<Nat, Vec<(Nat, u64)>> = BTreeMap::new();
        for (m, n, s) in pairs {
            by_source.entry(m.clone()).or_default().push((n.clone(), *s));
        }
        let table = Arc::new(by_source);
        let t2 = table.clone();
        FnCode::new(name, source, target, move |m, n, s| {
            table
                .get(m)
                .is_some_and(|ns| ns.iter().any(|(x, at)| x == n && *at <= s))
        })
        .with_image(move |ms, s| {
            ms.iter()
                .filter_map(|m| t2.get(m))
                .flatten()
                .filter(|(_, at)| *at <= s)
                .map(|(n, _)| n.clone())
                .collect()
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &StagedRelation {
        &self.source
    }

    pub fn target(&self) -> &StagedRelation {
        &self.target
    }

    pub fn contains_at(&self, m: &Nat, n: &Nat, stage: u64) -> bool {
        (self.contains)(m, n, stage)
    }

    pub fn image_at(&self, ms: &BTreeSet<Nat>, stage: u64) -> BTreeSet<Nat> {
        (self.image)(ms, stage)
    }
}

/// `⟦R⟧(I)`, enumerated as the forward image of `I`'s approximations.
pub fn apply_code(code: &FnCode, ideal: &IdealStream) -> Result<IdealStream> {
    code.source.ensure_same(ideal.relation())?;
    let (c1, c2) = (code.clone(), code.clone());
    let (i1, i2) = (ideal.clone(), ideal.clone());
    Ok(IdealStream::new(
        code.target.clone(),
        format!("{}({})", code.name(), ideal.label()),
        move |s| c1.image_at(&i1.approx(s), s),
        move |n, s| i2.approx(s).iter().any(|m| c2.contains_at(m, n, s)),
    ))
}

/// `<m, n> ∈ R` iff `n ≺ m`. On every ideal `⟦R⟧(I) = I`: the lower-set
/// axiom gives `⊆`, directedness gives `⊇`.
pub fn identity_code(rel: &StagedRelation) -> FnCode {
    let r = rel.clone();
    let r2 = rel.clone();
    FnCode::new(
        format!("id[{}]", rel.name()),
        rel.clone(),
        rel.clone(),
        move |m, n, s| r.holds_at(n, m, s),
    )
    .with_image(move |ms, s| {
        let mut out = BTreeSet::new();
        for m in ms {
            for n in r2.lower_at(m, s) {
                if r2.holds_at(&n, m, s) {
                    out.insert(n);
                }
            }
        }
        out
    })
}

/// The code `{<m, n> | m ∈ U_n}` of a map with `f⁻¹([n]) = ⋃_{m ∈ U_n} [m]`.
pub fn code_from_preimage_family(
    family: &StagedFamily,
    source: &StagedRelation,
    target: &StagedRelation,
) -> FnCode {
    let (f1, f2) = (family.clone(), family.clone());
    FnCode::new(
        format!("preimage[{}]", family.name()),
        source.clone(),
        target.clone(),
        move |m, n, s| n.to_u64().is_some_and(|i| f1.contains_at(i, m, s)),
    )
    .with_image(move |ms, s| {
        (0..=s)
            .filter(|i| ms.iter().any(|m| f2.contains_at(*i, m, s)))
            .map(nat)
            .collect()
    })
}

/// `<m, k> ∈ T` iff `∃n, <m,n> ∈ R ∧ <n,k> ∈ S`; denotes `⟦S⟧ ∘ ⟦R⟧`.
pub fn compose_codes(first: &FnCode, second: &FnCode) -> Result<FnCode> {
    first.target.ensure_same(&second.source)?;
    let (r1, s1) = (first.clone(), second.clone());
    let (r2, s2) = (first.clone(), second.clone());
    Ok(FnCode::new(
        format!("{}∘{}", second.name(), first.name()),
        first.source.clone(),
        second.target.clone(),
        move |m, k, s| {
            let single: BTreeSet<Nat> = [m.clone()].into_iter().collect();
            r1.image_at(&single, s)
                .iter()
                .any(|n| s1.contains_at(n, k, s))
        },
    )
    .with_image(move |ms, s| s2.image_at(&r2.image_at(ms, s), s)))
}

/// The empty code: defined nowhere.
pub fn empty_code(source: &StagedRelation, target: &StagedRelation) -> FnCode {
    FnCode::new("empty", source.clone(), target.clone(), |_, _, _| false)
        .with_image(|_, _| BTreeSet::new())
}

/// A Π⁰₂ subset `{ I | ∀i, I ∈ ⟦U_i⟧ ⇒ I ∈ ⟦V_i⟧ }` of `I(rel)`, where
/// `⟦U⟧ = ⋃_{n ∈ U} [n]`.
#[derive(Clone, Debug)]
pub struct Pi2Code {
    name: Arc<str>,
    rel: StagedRelation,
    u: StagedFamily,
    v: StagedFamily,
    indices: Option<u64>,
}

impl Pi2Code {
    pub fn new(name: impl Into<String>, rel: StagedRelation, u: StagedFamily, v: StagedFamily) -> Self {
        Pi2Code {
            name: Arc::from(name.into()),
            rel,
            u,
            v,
            indices: None,
        }
    }

    /// Declares that every `U_i` with `i >= count` is empty.
    pub fn with_index_count(mut self, count: u64) -> Self {
        self.indices = Some(count);
        self
    }

    /// Number of indices that may carry a non-vacuous implication, if finite.
    pub fn index_count(&self) -> Option<u64> {
        self.indices
    }

    /// The empty family: the whole space.
    pub fn trivial(rel: StagedRelation) -> Self {
        Pi2Code::new(
            "trivial",
            rel,
            StagedFamily::new("none", |_, _, _| false),
            StagedFamily::new("none", |_, _, _| false),
        )
        .with_index_count(0)
    }

    /// Finitely many explicit implications `U_i ⇒ V_i`.
    pub fn listed(name: impl Into<String>, rel: StagedRelation, pairs: Vec<(StagedSet, StagedSet)>) -> Self {
        let count = pairs.len() as u64;
        let (us, vs): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Pi2Code::new(name, rel, StagedFamily::listed(us), StagedFamily::listed(vs))
            .with_index_count(count)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn relation(&self) -> &StagedRelation {
        &self.rel
    }

    pub fn u(&self) -> &StagedFamily {
        &self.u
    }

    pub fn v(&self) -> &StagedFamily {
        &self.v
    }

    pub fn u_contains(&self, i: u64, n: &Nat, stage: u64) -> bool {
        self.u.contains_at(i, n, stage)
    }

    pub fn v_contains(&self, i: u64, n: &Nat, stage: u64) -> bool {
        self.v.contains_at(i, n, stage)
    }

    /// First index `i <= index_bound` whose premise `I ∈ ⟦U_i⟧` is witnessed
    /// by `fuel` while the conclusion `I ∈ ⟦V_i⟧` is not. Only evidence: the
    /// conclusion may still appear at a later stage.
    pub fn violation(&self, members: &BTreeSet<Nat>, index_bound: u64, fuel: u64) -> Option<u64> {
        let top = match self.indices {
            Some(count) => index_bound.min(count.saturating_sub(1)),
            None => index_bound,
        };
        if self.indices == Some(0) {
            return None;
        }
        (0..=top).find(|&i| {
            members.iter().any(|n| self.u_contains(i, n, fuel))
                && !members.iter().any(|n| self.v_contains(i, n, fuel))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{equal_below, validate_prefix, FinGenSpec};
    use crate::relation::{equality, less_than, strict_prefix};

    fn n(v: u64) -> Nat {
        nat(v)
    }

    fn halving() -> FnCode {
        // U_n = {2n}
        let fam = StagedFamily::new("2n", |i, m, _| *m == nat(2 * i));
        code_from_preimage_family(&fam, &equality(), &equality())
    }

    fn doubling() -> FnCode {
        // U_n = {n/2} for even n
        let fam = StagedFamily::new("n/2", |i, m, _| i % 2 == 0 && *m == nat(i / 2));
        code_from_preimage_family(&fam, &equality(), &equality())
    }

    #[test]
    fn identity_code_examples() {
        let eq = FinGenSpec::singleton(n(4)).stream();
        let out = apply_code(&identity_code(&equality()), &eq).unwrap();
        assert!(equal_below(&eq, &out, 40, 40));

        let all = FinGenSpec::naturals().stream();
        let out = apply_code(&identity_code(&less_than()), &all).unwrap();
        assert!(equal_below(&all, &out, 64, 128));

        let p = FinGenSpec::baire_point(vec![1, 2], vec![0]).stream();
        let out = apply_code(&identity_code(&strict_prefix()), &p).unwrap();
        assert!(equal_below(&p, &out, 200, 200));
    }

    #[test]
    fn empty_code_gives_empty_enumeration() {
        let all = FinGenSpec::naturals().stream();
        let out = apply_code(&empty_code(&less_than(), &less_than()), &all).unwrap();
        assert!(out.approx(500).is_empty());
        assert!(validate_prefix(&out, 5, 100).empty);
    }

    #[test]
    fn successor_code_leaves_the_domain() {
        let succ = FnCode::new("succ", less_than(), less_than(), |m, n, _| *n == m + 1u32);
        let all = FinGenSpec::naturals().stream();
        let out = apply_code(&succ, &all).unwrap();
        assert!(!out.member_at(&n(0), 500));
        assert!(out.member_at(&n(1), 500));
        let diag = validate_prefix(&out, 8, 64);
        assert!(diag.not_lower.iter().any(|(missing, _)| *missing == n(0)));
    }

    #[test]
    fn preimage_family_examples() {
        let id = code_from_preimage_family(
            &StagedFamily::new("n", |i, m, _| *m == nat(i)),
            &equality(),
            &equality(),
        );
        let seven = FinGenSpec::singleton(n(7)).stream();
        assert!(equal_below(&apply_code(&id, &seven).unwrap(), &seven, 30, 30));

        for k in 0..20u64 {
            let even = FinGenSpec::singleton(n(2 * k)).stream();
            let half = apply_code(&halving(), &even).unwrap();
            let want = FinGenSpec::singleton(n(k)).stream();
            assert!(equal_below(&half, &want, 50, 50), "k = {k}");
        }

        let nothing = code_from_preimage_family(
            &StagedFamily::new("none", |_, _, _| false),
            &equality(),
            &equality(),
        );
        assert!(apply_code(&nothing, &seven).unwrap().approx(100).is_empty());
    }

    #[test]
    fn compose_examples() {
        let id = identity_code(&equality());
        let idid = compose_codes(&id, &id).unwrap();
        let round = compose_codes(&doubling(), &halving()).unwrap();
        let empty = compose_codes(&id, &empty_code(&equality(), &equality())).unwrap();
        for k in 0..20u64 {
            let point = FinGenSpec::singleton(n(k)).stream();
            assert!(equal_below(&apply_code(&idid, &point).unwrap(), &point, 50, 50));
            assert!(equal_below(&apply_code(&round, &point).unwrap(), &point, 50, 50));
            assert!(apply_code(&empty, &point).unwrap().approx(60).is_empty());
        }
        assert!(compose_codes(&id, &identity_code(&less_than())).is_err());
    }

    #[test]
    fn apply_checks_source_relation() {
        let all = FinGenSpec::naturals().stream();
        assert!(apply_code(&identity_code(&equality()), &all).is_err());
    }

    #[test]
    fn pi2_violation_reports_first_index() {
        let code = Pi2Code::listed(
            "zero-forbidden",
            equality(),
            vec![(StagedSet::finite([n(0)]), StagedSet::empty())],
        );
        let zero: BTreeSet<Nat> = [n(0)].into_iter().collect();
        let one: BTreeSet<Nat> = [n(1)].into_iter().collect();
        assert_eq!(code.violation(&zero, 3, 10), Some(0));
        assert_eq!(code.violation(&one, 3, 10), None);
    }
}
