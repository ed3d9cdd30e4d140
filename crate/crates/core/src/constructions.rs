//! Products, coproducts, Π⁰₂ subspaces and equalizers of spaces of ideals.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use crate::codes::{FnCode, Pi2Code};
use crate::encoding::{
    finset_decode, finset_encode, finset_subset, nat, pair_decode, pair_encode,
};
use crate::error::Result;
use crate::ideal::IdealStream;
use crate::relation::StagedRelation;
use crate::staged::StagedFamily;
use crate::Nat;

/// `<a,b> ≺× <a',b'>` iff `a ≺₁ a'` and `b ≺₂ b'`.
pub fn product_relation(r1: &StagedRelation, r2: &StagedRelation) -> StagedRelation {
    let (h1, h2) = (r1.clone(), r2.clone());
    let (l1, l2) = (r1.clone(), r2.clone());
    let rel = StagedRelation::new(
        format!("product({},{})", r1.name(), r2.name()),
        move |x, y, s| {
            let (a, b) = pair_decode(x);
            let (a2, b2) = pair_decode(y);
            h1.holds_at(&a, &a2, s) && h2.holds_at(&b, &b2, s)
        },
    )
    .with_lower(move |y, s| {
        let (a2, b2) = pair_decode(y);
        let firsts: Vec<Nat> = l1
            .lower_at(&a2, s)
            .into_iter()
            .filter(|a| l1.holds_at(a, &a2, s))
            .collect();
        let seconds: Vec<Nat> = l2
            .lower_at(&b2, s)
            .into_iter()
            .filter(|b| l2.holds_at(b, &b2, s))
            .collect();
        let mut out = Vec::with_capacity(firsts.len() * seconds.len());
        for a in &firsts {
            for b in &seconds {
                out.push(pair_encode(a, b));
            }
        }
        out
    });
    if r1.is_decidable() && r2.is_decidable() {
        rel.decidable()
    } else {
        rel
    }
}

/// `⟨I₁, I₂⟩ = {<a,b> | a ∈ I₁, b ∈ I₂}`.
pub fn pair_ideals(first: &IdealStream, second: &IdealStream) -> IdealStream {
    let rel = product_relation(first.relation(), second.relation());
    let (a1, b1) = (first.clone(), second.clone());
    let (a2, b2) = (first.clone(), second.clone());
    IdealStream::new(
        rel,
        format!("<{},{}>", first.label(), second.label()),
        move |s| {
            let (xs, ys) = (a1.approx(s), b1.approx(s));
            let mut out = BTreeSet::new();
            for x in xs.iter() {
                for y in ys.iter() {
                    out.insert(pair_encode(x, y));
                }
            }
            out
        },
        move |n, s| {
            let (x, y) = pair_decode(n);
            a2.member_at(&x, s) && b2.member_at(&y, s)
        },
    )
}

fn projection_code(r1: &StagedRelation, r2: &StagedRelation, second: bool) -> FnCode {
    let pick = move |m: &Nat| {
        let (a, b) = pair_decode(m);
        if second {
            b
        } else {
            a
        }
    };
    let target = if second { r2 } else { r1 };
    FnCode::new(
        format!("proj{}", if second { 2 } else { 1 }),
        product_relation(r1, r2),
        target.clone(),
        move |m, n, _| pick(m) == *n,
    )
    .with_image(move |ms, _| ms.iter().map(pick).collect())
}

/// `π₁(I) = {a | ∃b <a,b> ∈ I}`, as the code `{<<a,b>, a>}`.
pub fn proj1_code(r1: &StagedRelation, r2: &StagedRelation) -> FnCode {
    projection_code(r1, r2, false)
}

pub fn proj2_code(r1: &StagedRelation, r2: &StagedRelation) -> FnCode {
    projection_code(r1, r2, true)
}

/// Coproduct over tags `0, 1, 2, ...`: `<a,i> ≺ <a',j>` iff `i = j` and
/// `a ≺_i a'`. `summand(i)` is `None` past the end of a finite list.
pub fn countable_coproduct_relation<F>(name: impl Into<String>, summand: F) -> StagedRelation
where
    F: Fn(u64) -> Option<StagedRelation> + Send + Sync + 'static,
{
    let summand = Arc::new(summand);
    let lower_summand = summand.clone();
    StagedRelation::new(name, move |x, y, s| {
        let (a, i) = pair_decode(x);
        let (a2, j) = pair_decode(y);
        i == j
            && i.to_u64()
                .and_then(|i| summand(i))
                .is_some_and(|r| r.holds_at(&a, &a2, s))
    })
    .with_lower(move |y, s| {
        let (a2, j) = pair_decode(y);
        let Some(r) = j.to_u64().and_then(|j| lower_summand(j)) else {
            return Vec::new();
        };
        r.lower_at(&a2, s)
            .into_iter()
            .filter(|a| r.holds_at(a, &a2, s))
            .map(|a| pair_encode(&a, &j))
            .collect()
    })
}

/// Binary coproduct with tags 1 and 2.
pub fn coproduct_relation(r1: &StagedRelation, r2: &StagedRelation) -> StagedRelation {
    let (a, b) = (r1.clone(), r2.clone());
    let rel = countable_coproduct_relation(
        format!("coproduct({},{})", r1.name(), r2.name()),
        move |i| match i {
            1 => Some(a.clone()),
            2 => Some(b.clone()),
            _ => None,
        },
    );
    if r1.is_decidable() && r2.is_decidable() {
        rel.decidable()
    } else {
        rel
    }
}

/// `{<a, <a,tag>>}`: the inclusion of the summand tagged `tag`.
pub fn inj_code(summand: &StagedRelation, coproduct: &StagedRelation, tag: u64) -> FnCode {
    let t = nat(tag);
    let t2 = t.clone();
    FnCode::new(
        format!("inj{tag}"),
        summand.clone(),
        coproduct.clone(),
        move |m, n, _| *n == pair_encode(m, &t),
    )
    .with_image(move |ms, _| ms.iter().map(|m| pair_encode(m, &t2)).collect())
}

pub fn inj1_code(r1: &StagedRelation, r2: &StagedRelation) -> FnCode {
    inj_code(r1, &coproduct_relation(r1, r2), 1)
}

pub fn inj2_code(r1: &StagedRelation, r2: &StagedRelation) -> FnCode {
    inj_code(r2, &coproduct_relation(r1, r2), 2)
}

/// A relation `⊏` whose ideals are the points of a Π⁰₂ subset of `I(≺)`,
/// with the homeomorphism `f: I(⊏) → A` and its inverse `g`.
#[derive(Clone, Debug)]
pub struct Pi2Subspace {
    pub relation: StagedRelation,
    pub f: FnCode,
    pub g: FnCode,
}

/// Decodes `<F, k>` into the elements of `F`, its code and `k`.
fn decode_fk(code: &Nat) -> Option<(Vec<u64>, Nat, u64)> {
    let (f, k) = pair_decode(code);
    let k = k.to_u64()?;
    Some((finset_decode(&f), f, k))
}

pub fn fk_encode(elems: impl IntoIterator<Item = u64>, k: u64) -> Nat {
    pair_encode(&finset_encode(elems), &nat(k))
}

fn subspace_holds(rel: &StagedRelation, a: &Pi2Code, x: &Nat, y: &Nat, s: u64) -> bool {
    let (Some((f1, f1_code, k1)), Some((f2, f2_code, k2))) = (decode_fk(x), decode_fk(y)) else {
        return false;
    };
    // 1. k1 < k2   2. F1 ⊆ F2   3. F2 ≠ ∅
    if k1 >= k2 || !finset_subset(&f1_code, &f2_code) || f2_code.is_zero() {
        return false;
    }
    let in_f2 = |m: &Nat| m.to_u64().is_some_and(|m| f2.binary_search(&m).is_ok());
    let f1_nats: Vec<Nat> = f1.iter().copied().map(nat).collect();
    let f2_nats: Vec<Nat> = f2.iter().copied().map(nat).collect();
    // 4. every m <= k1 below some n ∈ F1 at stage k1 lies in F2
    let bound = nat(k1);
    for n in &f1_nats {
        for m in rel.lower_at(n, k1) {
            if m <= bound && rel.holds_at(&m, n, k1) && !in_f2(&m) {
                return false;
            }
        }
    }
    // 5. any two elements of F1 have an upper bound in F2
    for (i, p) in f1_nats.iter().enumerate() {
        for q in &f1_nats[i..] {
            if !f2_nats
                .iter()
                .any(|c| rel.holds_at(p, c, s) && rel.holds_at(q, c, s))
            {
                return false;
            }
        }
    }
    // 6. for i <= k1: F1 meets U_i at stage k1 ⇒ F2 meets V_i
    let top = match a.index_count() {
        Some(0) => return true,
        Some(count) => k1.min(count - 1),
        None => k1,
    };
    (0..=top).all(|i| {
        !f1_nats.iter().any(|n| a.u_contains(i, n, k1))
            || f2_nats.iter().any(|n| a.v_contains(i, n, s))
    })
}

/// `⟨F₁,k₁⟩ ⊏ ⟨F₂,k₂⟩` by the six conditions, with `≺^(k)` and `U_i^(k)`
/// read as stage-`k` approximations.
pub fn pi2_relation(rel: &StagedRelation, a: &Pi2Code) -> Result<StagedRelation> {
    rel.ensure_same(a.relation())?;
    let (r, code) = (rel.clone(), a.clone());
    Ok(StagedRelation::new(
        format!("pi2({},{})", rel.name(), a.name()),
        move |x, y, s| subspace_holds(&r, &code, x, y, s),
    ))
}

/// Bit length of `s`: how many `k` values the image of `g` lists at stage `s`.
fn visible_k(s: u64) -> u64 {
    64 - u64::from(s.leading_zeros())
}

/// Submasks of `mask` whose value is at most `s`.
fn submasks_upto(mask: u64, s: u64, out: &mut BTreeSet<u64>) {
    let mut sub = mask;
    loop {
        if sub <= s {
            out.insert(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
}

const WHOLE_LOWER_LIMIT: usize = 16;

pub fn pi2_subspace(rel: &StagedRelation, a: &Pi2Code) -> Result<Pi2Subspace> {
    let sub = pi2_relation(rel, a)?;

    // f(I) = ⋃ {F | <F,k> ∈ I}
    let f = FnCode::new("f", sub.clone(), rel.clone(), |c, n, _| {
        let (fc, _) = pair_decode(c);
        crate::encoding::finset_contains(&fc, n)
    })
    .with_image(|cs, _| {
        cs.iter()
            .flat_map(|c| finset_decode(&pair_decode(c).0))
            .map(nat)
            .collect()
    });

    // g(I) = {<F,k> | F ⊆ I finite}. The code asks for one m ∈ I strictly
    // above every a ∈ F. On an ideal that is the same set: such an m lies in
    // I and I is a lower set, so F ⊆ I; conversely directedness gives an
    // upper bound in I for the finitely many elements of F.
    let r = rel.clone();
    let r2 = rel.clone();
    let g = FnCode::new("g", rel.clone(), sub.clone(), move |m, c, s| {
        let (fc, _) = pair_decode(c);
        finset_decode(&fc)
            .into_iter()
            .all(|a| r.holds_at(&nat(a), m, s))
    })
    .with_image(move |ms, s| {
        // sets listed at stage s: ∅, singletons, subsets with code <= s, and
        // the stage-0 lower set of each m when it is small. Elements must be
        // below max(s, 64) so that codes stay short.
        let cap = s.max(64);
        let mut singles = BTreeSet::new();
        let mut masks = BTreeSet::new();
        let mut wholes = BTreeSet::new();
        for m in ms {
            let mut low = 0u64;
            for a in r2.lower_at(m, s) {
                if !r2.holds_at(&a, m, s) {
                    continue;
                }
                let Some(a) = a.to_u64().filter(|a| *a < cap) else {
                    continue;
                };
                singles.insert(a);
                if a < 63 && (1u64 << a) <= s {
                    low |= 1 << a;
                }
            }
            masks.insert(low);
            let whole: Option<Vec<u64>> = r2
                .lower_at(m, 0)
                .iter()
                .filter(|a| r2.holds_at(a, m, 0))
                .map(|a| a.to_u64().filter(|a| *a < cap))
                .collect();
            if let Some(whole) = whole.filter(|w| w.len() <= WHOLE_LOWER_LIMIT) {
                wholes.insert(finset_encode(whole));
            }
        }
        let mut small = BTreeSet::new();
        for mask in masks {
            submasks_upto(mask, s, &mut small);
        }
        let mut sets: BTreeSet<Nat> = small.into_iter().map(nat).collect();
        sets.insert(Nat::zero());
        sets.extend(singles.into_iter().map(|a| finset_encode([a])));
        sets.extend(wholes);
        let mut out = BTreeSet::new();
        for fcode in &sets {
            for k in 0..=visible_k(s) {
                out.insert(pair_encode(fcode, &nat(k)));
            }
        }
        out
    });

    Ok(Pi2Subspace {
        relation: sub,
        f,
        g,
    })
}

/// The Π⁰₂ set `{I | ⟦R⟧(I) = ⟦S⟧(I)}`. Index `2n` asks `n ∈ ⟦R⟧(I) ⇒
/// n ∈ ⟦S⟧(I)` and index `2n+1` the converse.
pub fn equalizer_pi2(r: &FnCode, s: &FnCode) -> Result<Pi2Code> {
    r.source().ensure_same(s.source())?;
    r.target().ensure_same(s.target())?;
    let side = |first: &FnCode, second: &FnCode| {
        let (a, b) = (first.clone(), second.clone());
        move |i: u64, m: &Nat, stage: u64| {
            let n = nat(i / 2);
            if i % 2 == 0 {
                a.contains_at(m, &n, stage)
            } else {
                b.contains_at(m, &n, stage)
            }
        }
    };
    Ok(Pi2Code::new(
        format!("equalizer({},{})", r.name(), s.name()),
        r.source().clone(),
        StagedFamily::new("eq-u", side(r, s)),
        StagedFamily::new("eq-v", side(s, r)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{apply_code, code_from_preimage_family, identity_code};
    use crate::ideal::{equal_below, validate_prefix, FinGenSpec};
    use crate::relation::{equality, less_than, strict_prefix};
    use crate::staged::StagedSet;

    fn n(v: u64) -> Nat {
        nat(v)
    }

    #[test]
    fn product_of_singletons() {
        let (e1, e2) = (equality(), equality());
        let i1 = FinGenSpec::singleton(n(3)).stream();
        let i2 = FinGenSpec::singleton(n(7)).stream();
        let p = pair_ideals(&i1, &i2);
        let seven = pair_encode(&n(3), &n(7));
        assert!(p.member_at(&seven, 0));
        assert_eq!(p.approx(10).iter().cloned().collect::<Vec<_>>(), vec![seven]);
        let back = apply_code(&proj1_code(&e1, &e2), &p).unwrap();
        assert!(equal_below(&back, &i1, 64, 64));
    }

    #[test]
    fn product_of_baire_points() {
        let p = FinGenSpec::baire_point(vec![1], vec![0]);
        let q = FinGenSpec::baire_point(vec![], vec![2]);
        let pq = pair_ideals(&p.stream(), &q.stream());
        for a in 0..40u64 {
            for b in 0..40u64 {
                let code = pair_encode(&n(a), &n(b));
                assert_eq!(
                    pq.member_at(&code, 0),
                    p.contains(&n(a)) && q.contains(&n(b)),
                    "{a} {b}"
                );
            }
        }
    }

    #[test]
    fn projection_of_product_ideal_is_lower() {
        let (lt, sp) = (less_than(), strict_prefix());
        let p = pair_ideals(
            &FinGenSpec::naturals().stream(),
            &FinGenSpec::baire_point(vec![], vec![1]).stream(),
        );
        let pi1 = apply_code(&proj1_code(&lt, &sp), &p).unwrap();
        assert!(validate_prefix(&pi1, 12, 64).is_clean());
    }

    #[test]
    fn coproduct_injections_and_tags() {
        let (e, lt) = (equality(), less_than());
        let co = coproduct_relation(&e, &lt);
        let three = FinGenSpec::singleton(n(3)).stream();
        let out = apply_code(&inj1_code(&e, &lt), &three).unwrap();
        let want = pair_encode(&n(3), &n(1));
        assert!(out.member_at(&want, 0));
        assert_eq!(out.approx(5).len(), 1);

        let mixed = IdealStream::enum_script(
            co.clone(),
            vec![vec![pair_encode(&n(3), &n(1)), pair_encode(&n(0), &n(2))]],
        );
        let diag = validate_prefix(&mixed, 4, 64);
        assert!(!diag.not_directed.is_empty());
    }

    #[test]
    fn countable_coproduct_tags_over_naturals() {
        let co = countable_coproduct_relation("tags", |_| Some(less_than()));
        let x = pair_encode(&n(1), &n(9));
        let y = pair_encode(&n(4), &n(9));
        assert!(co.holds_at(&x, &y, 0));
        assert!(!co.holds_at(&x, &pair_encode(&n(4), &n(8)), 0));
        assert!(co.lower_at(&y, 10).contains(&x));
    }

    fn zero_forbidden() -> Pi2Code {
        Pi2Code::listed(
            "zero-forbidden",
            equality(),
            vec![(StagedSet::finite([n(0)]), StagedSet::empty())],
        )
    }

    #[test]
    fn subspace_relation_is_transitive_on_small_codes() {
        let codes: Vec<Nat> = (0..64u64)
            .flat_map(|f| (0..=5u64).map(move |k| pair_encode(&n(f), &n(k))))
            .collect();
        for (rel, a) in [
            (equality(), zero_forbidden()),
            (less_than(), Pi2Code::trivial(less_than())),
        ] {
            let sub = pi2_relation(&rel, &a).unwrap();
            assert!(sub.transitivity_violations(&codes, 64).is_empty());
        }
    }

    #[test]
    fn subspace_relation_is_antimonotone_on_the_left() {
        let sub = pi2_relation(&less_than(), &Pi2Code::trivial(less_than())).unwrap();
        let mut checked = 0;
        for f1 in 0..32u64 {
            for k1 in 0..4u64 {
                for f2 in 0..32u64 {
                    for k2 in 0..6u64 {
                        let x = pair_encode(&n(f1), &n(k1));
                        let y = pair_encode(&n(f2), &n(k2));
                        if !sub.holds_at(&x, &y, 32) {
                            continue;
                        }
                        for f in (0..=f1).filter(|f| f & f1 == *f) {
                            for k in 0..=k1 {
                                checked += 1;
                                let z = pair_encode(&n(f), &n(k));
                                assert!(sub.holds_at(&z, &y, 32));
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn trivial_code_over_less_than_round_trips() {
        let lt = less_than();
        let sp = pi2_subspace(&lt, &Pi2Code::trivial(lt.clone())).unwrap();
        let all = FinGenSpec::naturals().stream();
        let g_all = apply_code(&sp.g, &all).unwrap();
        let back = apply_code(&sp.f, &g_all).unwrap();
        assert!(equal_below(&back, &all, 64, 256));
    }

    #[test]
    fn zero_forbidden_subspace() {
        let eq = equality();
        let sp = pi2_subspace(&eq, &zero_forbidden()).unwrap();
        let one = FinGenSpec::singleton(n(1)).stream();
        let g1 = apply_code(&sp.g, &one).unwrap();
        assert!(validate_prefix(&g1, 10, 64).is_clean());
        let back = apply_code(&sp.f, &g1).unwrap();
        assert!(equal_below(&back, &one, 64, 256));

        let zero = FinGenSpec::singleton(n(0)).stream();
        let g0 = apply_code(&sp.g, &zero).unwrap();
        assert!(!validate_prefix(&g0, 10, 64).is_clean());
    }

    #[test]
    fn subspace_pairs_extend_to_longer_chains() {
        let sub = pi2_relation(&less_than(), &Pi2Code::trivial(less_than())).unwrap();
        let x = fk_encode([0], 0);
        let y = fk_encode([0, 1], 1);
        assert!(sub.holds_at(&x, &y, 16));
        let z = (0..2000u64)
            .map(n)
            .find(|z| sub.holds_at(&y, z, 16))
            .expect("chain extends");
        assert!(sub.holds_at(&x, &z, 16));
    }

    #[test]
    fn equalizer_of_identity_and_constant_zero() {
        let eq = equality();
        let id = identity_code(&eq);
        let zero = FnCode::new("const0", eq.clone(), eq.clone(), |_, k, _| k.is_zero());
        let code = equalizer_pi2(&id, &zero).unwrap();
        for k in 0..20u64 {
            let members: BTreeSet<Nat> = [n(k)].into_iter().collect();
            assert_eq!(code.violation(&members, 60, 64).is_none(), k == 0, "k = {k}");
        }
        let same = equalizer_pi2(&id, &id).unwrap();
        for k in 0..20u64 {
            let members: BTreeSet<Nat> = [n(k)].into_iter().collect();
            assert!(same.violation(&members, 60, 64).is_none());
        }
    }

    #[test]
    fn equalizer_rejects_mismatched_codes() {
        let a = identity_code(&equality());
        let b = identity_code(&less_than());
        assert!(equalizer_pi2(&a, &b).is_err());
    }

    #[test]
    fn equalizer_of_doubling_and_halving() {
        let eq = equality();
        let halving = code_from_preimage_family(
            &StagedFamily::new("2n", |i, m, _| *m == nat(2 * i)),
            &eq,
            &eq,
        );
        let doubling = code_from_preimage_family(
            &StagedFamily::new("n/2", |i, m, _| i % 2 == 0 && *m == nat(i / 2)),
            &eq,
            &eq,
        );
        let code = equalizer_pi2(&doubling, &halving).unwrap();
        for k in 0..64u64 {
            let d: BTreeSet<u64> = [2 * k].into_iter().collect();
            let h: BTreeSet<u64> = if k % 2 == 0 { [k / 2].into_iter().collect() } else { BTreeSet::new() };
            let members: BTreeSet<Nat> = [n(k)].into_iter().collect();
            assert_eq!(code.violation(&members, 300, 300).is_none(), d == h, "k = {k}");
        }
    }
}
