//! Complete computable topological spaces.
//!
//! A c.e. set `S ⊆ ℕ³` of intersection witnesses determines a Π⁰₂ subspace
//! `X` of `𝒫(ℕ)`, realized here over `finite_subset`:
//!
//! * (i) `x ≠ ∅`;
//! * (ii) `k ∈ x` and `<n,m,k> ∈ S` imply `{n, m} ⊆ x`;
//! * (iii) `{n, m} ⊆ x` implies `k ∈ x` for some `<n,m,k> ∈ S`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use crate::codes::{FnCode, Pi2Code};
use crate::constructions::{pi2_subspace, Pi2Subspace};
use crate::encoding::{
    finset_decode, finset_encode, nat, pair_decode_u64, triple_decode, triple_encode,
    MAX_FINSET_ELEMENT,
};
use crate::error::Result;
use crate::ideal::FinGenSpec;
use crate::relation::{finite_subset, subsets_visible, StagedRelation};
use crate::staged::{StagedFamily, StagedSet};
use crate::Nat;

type TripleFn = dyn Fn(&Nat, &Nat, &Nat, u64) -> bool + Send + Sync;

/// A c.e. set of triples `<n, m, k>`.
#[derive(Clone)]
pub struct TripleSet {
    name: Arc<str>,
    contains: Arc<TripleFn>,
}

impl fmt::Debug for TripleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TripleSet({})", self.name)
    }
}

impl TripleSet {
    pub fn new<F>(name: impl Into<String>, contains: F) -> Self
    where
        F: Fn(&Nat, &Nat, &Nat, u64) -> bool + Send + Sync + 'static,
    {
        TripleSet {
            name: Arc::from(name.into()),
            contains: Arc::new(contains),
        }
    }

    pub fn empty() -> Self {
        TripleSet::new("empty", |_, _, _, _| false)
    }

    /// Explicit triples `(n, m, k, stage)`.
    pub fn listed(triples: Vec<(Nat, Nat, Nat, u64)>) -> Self {
        TripleSet::new("listed", move |n, m, k, s| {
            triples
                .iter()
                .any(|(a, b, c, at)| a == n && b == m && c == k && *at <= s)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains_at(&self, n: &Nat, m: &Nat, k: &Nat, stage: u64) -> bool {
        (self.contains)(n, m, k, stage)
    }

    pub fn contains_code_at(&self, code: &Nat, stage: u64) -> bool {
        let (n, m, k) = triple_decode(code);
        self.contains_at(&n, &m, &k, stage)
    }
}

/// `S = {<n,m,k> | n ≺ k and m ≺ k}`.
pub fn s_from_relation(rel: &StagedRelation) -> TripleSet {
    let r = rel.clone();
    TripleSet::new(format!("S({})", rel.name()), move |n, m, k, s| {
        r.holds_at(n, k, s) && r.holds_at(m, k, s)
    })
}

fn is_singleton_of(code: &Nat, k: u64) -> bool {
    code.count_ones() == 1 && code.bit(k)
}

fn decoded_set(code: &Nat) -> BTreeSet<u64> {
    finset_decode(code).into_iter().collect()
}

/// Where each condition lives in the index space of [`x_pi2_code`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XIndex {
    /// (i), index 0.
    NonEmpty,
    /// (ii) for the triple with this code, index `1 + 3t`.
    Closed(u64),
    /// (iii) for the pair `<n, m>`, index `2 + 3p`.
    Joined(u64, u64),
    /// The overtness axiom for `n`, index `3 + 3n`.
    Overt(u64),
}

pub fn x_index(i: u64) -> XIndex {
    if i == 0 {
        return XIndex::NonEmpty;
    }
    let (j, kind) = ((i - 1) / 3, (i - 1) % 3);
    match kind {
        0 => XIndex::Closed(j),
        1 => {
            let (n, m) = pair_decode_u64(j);
            XIndex::Joined(n, m)
        }
        _ => XIndex::Overt(j),
    }
}

/// The Π⁰₂ code of `X` over `finite_subset`, with the overtness axiom
/// `n ∈ x ⇒ n ∈ E` added when `overt` is given.
pub fn x_pi2_code(s: &TripleSet, overt: Option<&StagedSet>) -> Pi2Code {
    let (s_u, s_v) = (s.clone(), s.clone());
    let (e_u, e_v) = (overt.cloned(), overt.cloned());
    let u = StagedFamily::new("x-u", move |i, c, stage| match x_index(i) {
        // ∅ ⊆ x for every x, so (i) is unconditional
        XIndex::NonEmpty => c.is_zero(),
        XIndex::Closed(t) => {
            let (n, m, k) = triple_decode(&nat(t));
            k.to_u64()
                .is_some_and(|k| is_singleton_of(c, k) && s_u.contains_at(&n, &m, &nat(k), stage))
        }
        XIndex::Joined(n, m) => decoded_set(c) == BTreeSet::from([n, m]),
        XIndex::Overt(n) => e_u.is_some() && is_singleton_of(c, n),
    });
    let v = StagedFamily::new("x-v", move |i, c, stage| match x_index(i) {
        XIndex::NonEmpty => c.count_ones() == 1,
        XIndex::Closed(t) => {
            let (n, m, _) = triple_decode(&nat(t));
            let want: BTreeSet<Nat> = [n, m].into_iter().collect();
            finset_decode(c).into_iter().map(nat).collect::<BTreeSet<Nat>>() == want
        }
        XIndex::Joined(n, m) => {
            let set = decoded_set(c);
            if !set.contains(&n) || !set.contains(&m) {
                return false;
            }
            let extra: Vec<u64> = set.iter().copied().filter(|e| *e != n && *e != m).collect();
            let candidates: Vec<u64> = match extra.as_slice() {
                [] => vec![n, m],
                [k] => vec![*k],
                _ => vec![],
            };
            candidates
                .into_iter()
                .any(|k| s_v.contains_at(&nat(n), &nat(m), &nat(k), stage))
        }
        XIndex::Overt(n) => e_v
            .as_ref()
            .is_some_and(|e| is_singleton_of(c, n) && e.contains_at(&nat(n), stage)),
    });
    let name = match overt {
        Some(e) => format!("X({},{})", s.name(), e.name()),
        None => format!("X({})", s.name()),
    };
    Pi2Code::new(name, finite_subset(), u, v)
}

/// `pi2_subspace(finite_subset, x_pi2_code(S, E))`.
pub fn complete_space(s: &TripleSet, overt: Option<&StagedSet>) -> Result<Pi2Subspace> {
    pi2_subspace(&finite_subset(), &x_pi2_code(s, overt))
}

/// The code of `e(y) = {n | y ∈ ψ(n)}` with `ψ(n) = ⋃_{j ∈ W_n} [j]`:
/// `{<m, F> | ∀n ∈ F ∃j ∈ W_n, j ≺ m}`. On an ideal `I` this lists exactly
/// the finite subsets of `e(I)`: a single `m ∈ I` above all the witnesses
/// exists by directedness.
pub fn embedding_code(rel: &StagedRelation, basis: &StagedFamily) -> FnCode {
    let (r1, w1) = (rel.clone(), basis.clone());
    let (r2, w2) = (rel.clone(), basis.clone());
    let covered = move |r: &StagedRelation, w: &StagedFamily, m: &Nat, n: u64, s: u64| {
        r.lower_at(m, s)
            .iter()
            .any(|j| r.holds_at(j, m, s) && w.contains_at(n, j, s))
    };
    let covered2 = covered;
    FnCode::new(
        format!("embed[{}]", basis.name()),
        rel.clone(),
        finite_subset(),
        move |m, c, s| {
            finset_decode(c)
                .into_iter()
                .all(|n| covered(&r1, &w1, m, n, s))
        },
    )
    .with_image(move |ms, s| {
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut out = BTreeSet::new();
        for m in ms {
            let ns: Vec<u64> = (0..=s.min(MAX_FINSET_ELEMENT))
                .filter(|n| covered2(&r2, &w2, m, *n, s))
                .collect();
            if seen.insert(ns.clone()) {
                out.extend(subsets_visible(&ns, s, true));
            }
        }
        if ms.is_empty() {
            return out;
        }
        out.insert(finset_encode([]));
        out
    })
}

/// Result of checking (i)–(iii) on one sampled set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct XReport {
    pub label: String,
    pub nonempty: bool,
    /// (ii) failures `<n, m, k>`: `k ∈ x` but `n` or `m` missing.
    pub not_closed: Vec<(Nat, Nat, Nat)>,
    /// (iii) failures `(n, m)`: no witness `k ∈ x` found.
    pub not_joined: Vec<(Nat, Nat)>,
}

impl XReport {
    pub fn in_x(&self) -> bool {
        self.nonempty && self.not_closed.is_empty() && self.not_joined.is_empty()
    }
}

type MemberPred = dyn Fn(&Nat) -> bool + Send + Sync;

/// A subset of `ℕ` to test against (i)–(iii): a membership predicate, the
/// elements to inspect, and a pool of candidate witnesses for (iii).
#[derive(Clone)]
pub struct PointSample {
    pub label: String,
    member: Arc<MemberPred>,
    pub window: Vec<Nat>,
    pub pool: Vec<Nat>,
}

impl fmt::Debug for PointSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSample({})", self.label)
    }
}

impl PointSample {
    pub fn finite(label: impl Into<String>, set: BTreeSet<Nat>) -> Self {
        let elems: Vec<Nat> = set.iter().cloned().collect();
        PointSample {
            label: label.into(),
            member: Arc::new(move |n| set.contains(n)),
            window: elems.clone(),
            pool: elems,
        }
    }

    /// The members of `spec` up to `bound`, with witnesses searched among
    /// members up to `fuel` and the first cofinal chain elements.
    pub fn ideal(spec: &FinGenSpec, bound: u64, fuel: u64) -> Self {
        let window: Vec<Nat> = (0..=bound).map(nat).filter(|n| spec.contains(n)).collect();
        let mut pool: BTreeSet<Nat> = (0..=fuel).map(nat).filter(|n| spec.contains(n)).collect();
        pool.extend(spec.cofinal().window(fuel));
        let s = spec.clone();
        PointSample {
            label: spec.label().to_string(),
            member: Arc::new(move |n| s.contains(n)),
            window,
            pool: pool.into_iter().collect(),
        }
    }

    pub fn contains(&self, n: &Nat) -> bool {
        (self.member)(n)
    }
}

/// Checks (i)–(iii) for `x` against `S` at stage `fuel`. Triples for (ii)
/// are scanned with `n, m <= max(k, bound)`.
pub fn x_conditions(s: &TripleSet, x: &PointSample, bound: u64, fuel: u64) -> XReport {
    let mut report = XReport {
        label: x.label.clone(),
        nonempty: !x.window.is_empty() || x.pool.iter().any(|n| x.contains(n)),
        ..Default::default()
    };
    for k in &x.window {
        let top = k.to_u64().unwrap_or(bound).max(bound);
        for n in 0..=top {
            for m in n..=top {
                let (n, m) = (nat(n), nat(m));
                if s.contains_at(&n, &m, k, fuel) && !(x.contains(&n) && x.contains(&m)) {
                    report.not_closed.push((n, m, k.clone()));
                }
            }
        }
    }
    for (i, n) in x.window.iter().enumerate() {
        for m in &x.window[i..] {
            let joined = x
                .pool
                .iter()
                .any(|k| x.contains(k) && s.contains_at(n, m, k, fuel));
            if !joined {
                report.not_joined.push((n.clone(), m.clone()));
            }
        }
    }
    report
}

/// Runs [`x_conditions`] with `S = s_from_relation(rel)` on each sample.
/// `in_x()` should hold exactly for the samples that are ideals.
pub fn verify_x_equals_ideals(
    rel: &StagedRelation,
    samples: &[PointSample],
    bound: u64,
    fuel: u64,
) -> Vec<XReport> {
    let s = s_from_relation(rel);
    samples
        .iter()
        .map(|x| x_conditions(&s, x, bound, fuel))
        .collect()
}

/// Encodes a triple for [`TripleSet`] listings.
pub fn triple(n: u64, m: u64, k: u64) -> Nat {
    triple_encode(&nat(n), &nat(m), &nat(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::apply_code;
    use crate::encoding::pair_encode;
    use crate::ideal::{basis_witness, equal_below, validate_prefix};
    use crate::relation::{equality, less_than, strict_prefix};

    fn n(v: u64) -> Nat {
        nat(v)
    }

    fn set(items: &[u64]) -> BTreeSet<Nat> {
        items.iter().copied().map(nat).collect()
    }

    fn finset_members(x: &[u64], upto: u64) -> BTreeSet<Nat> {
        (0..upto)
            .map(nat)
            .filter(|c| finset_decode(c).iter().all(|e| x.contains(e)))
            .collect()
    }

    #[test]
    fn s_from_relation_examples() {
        let s = s_from_relation(&less_than());
        assert!(s.contains_at(&n(1), &n(2), &n(5), 0));
        assert!(!s.contains_at(&n(1), &n(2), &n(2), 0));
        let e = s_from_relation(&equality());
        for a in 0..6u64 {
            for b in 0..6u64 {
                for c in 0..6u64 {
                    assert_eq!(e.contains_at(&n(a), &n(b), &n(c), 0), a == b && b == c);
                }
            }
        }
        assert!(s.contains_code_at(&triple(1, 2, 5), 0));
    }

    #[test]
    fn x_index_layout() {
        assert_eq!(x_index(0), XIndex::NonEmpty);
        assert_eq!(x_index(1), XIndex::Closed(0));
        assert_eq!(x_index(2), XIndex::Joined(0, 0));
        assert_eq!(x_index(3), XIndex::Overt(0));
        assert_eq!(x_index(5), XIndex::Joined(1, 0));
    }

    #[test]
    fn x_of_equality_is_the_singletons() {
        let code = x_pi2_code(&s_from_relation(&equality()), None);
        let bound = 3 * 2500;
        for k in 0..5u64 {
            assert_eq!(code.violation(&finset_members(&[k], 64), bound, 16), None);
        }
        assert!(code.violation(&finset_members(&[1, 3], 64), bound, 16).is_some());
        assert_eq!(code.violation(&finset_members(&[], 64), bound, 16), Some(0));
    }

    #[test]
    fn x_of_empty_triples_is_empty() {
        let code = x_pi2_code(&TripleSet::empty(), None);
        for x in [&[0u64][..], &[2], &[0, 1]] {
            assert!(code.violation(&finset_members(x, 64), 200, 16).is_some());
        }
    }

    #[test]
    fn empty_overt_witness_empties_x() {
        let e = StagedSet::empty();
        let code = x_pi2_code(&s_from_relation(&equality()), Some(&e));
        assert!(code.violation(&finset_members(&[2], 64), 200, 16).is_some());
        let all = StagedSet::new("all", |_, _| true);
        let code = x_pi2_code(&s_from_relation(&equality()), Some(&all));
        assert_eq!(code.violation(&finset_members(&[2], 64), 7000, 16), None);
    }

    #[test]
    fn complete_space_of_equality_round_trips_singletons() {
        let space = complete_space(&s_from_relation(&equality()), None).unwrap();
        for k in 0..4u64 {
            let x = FinGenSpec::subsets_of(format!("{{{k}}}"), move |e| e == k).stream();
            let gx = apply_code(&space.g, &x).unwrap();
            let d = validate_prefix(&gx, 8, 64);
            assert!(d.is_clean(), "{d:?}");
            let back = apply_code(&space.f, &gx).unwrap();
            assert!(equal_below(&back, &x, 40, 256));
        }
    }

    #[test]
    fn complete_space_of_empty_triples_has_no_points() {
        let space = complete_space(&TripleSet::empty(), None).unwrap();
        let x = FinGenSpec::subsets_of("{1}", |e| e == 1).stream();
        let gx = apply_code(&space.g, &x).unwrap();
        // (iii) for the pair <1,1> sits at index 14 and has no witness
        let stuck = pair_encode(&finset_encode([2]), &n(14));
        assert!(gx.member_at(&stuck, 64));
        assert!(basis_witness(&gx, &stuck, &stuck, 20_000).is_none());
    }

    #[test]
    fn embedding_examples() {
        let eq = equality();
        let ident = StagedFamily::new("n", |i, j, _| *j == nat(i));
        let e = embedding_code(&eq, &ident);
        let three = FinGenSpec::singleton(n(3)).stream();
        let out = apply_code(&e, &three).unwrap();
        let want = FinGenSpec::subsets_of("{3}", |x| x == 3).stream();
        assert!(equal_below(&out, &want, 64, 64));

        let nothing = embedding_code(&eq, &StagedFamily::new("none", |_, _, _| false));
        let out = apply_code(&nothing, &three).unwrap();
        assert_eq!(out.approx(64).iter().cloned().collect::<Vec<_>>(), vec![n(0)]);
    }

    #[test]
    fn embedding_equation_on_baire_points() {
        let sp = strict_prefix();
        let cylinders = StagedFamily::new("cyl", |i, j, _| *j == nat(i));
        let e = embedding_code(&sp, &cylinders);
        let p = FinGenSpec::baire_point(vec![1, 2], vec![0]);
        let out = apply_code(&e, &p.stream()).unwrap();
        for k in 0..=32u64 {
            let single = finset_encode([k]);
            assert_eq!(out.member_at(&single, 64), p.contains(&n(k)), "n = {k}");
        }
    }

    #[test]
    fn verify_examples() {
        let lt = less_than();
        let reports = verify_x_equals_ideals(
            &lt,
            &[
                PointSample::ideal(&FinGenSpec::naturals(), 32, 64),
                PointSample::finite("{0,2}", set(&[0, 2])),
                PointSample::finite("{0}", set(&[0])),
            ],
            32,
            64,
        );
        assert!(reports[0].in_x());
        assert!(reports[1].not_closed.contains(&(n(1), n(1), n(2))));
        assert!(reports[2].not_joined.contains(&(n(0), n(0))));
        assert!(reports[2].not_closed.is_empty());
    }
}
