//! Points of a space of ideals.
//!
//! An [`IdealStream`] presents an ideal as a monotone sequence of finite
//! approximations `approx(0) ⊆ approx(1) ⊆ ...` whose union is the ideal,
//! together with a stage-monotone membership semidecision. A [`Chain`] is
//! the second representation: a cofinal ascending sequence.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};


use crate::encoding::{nat, seq_encode};
use crate::error::{Error, Result};
use crate::relation::{self, least_stage, QueryResult, StagedRelation};
use crate::Nat;

type ApproxFn = dyn Fn(u64) -> BTreeSet<Nat> + Send + Sync;
type MemberFn = dyn Fn(&Nat, u64) -> bool + Send + Sync;

const CACHE_SLOTS: usize = 48;

#[derive(Default)]
struct StageCache {
    entries: HashMap<u64, Arc<BTreeSet<Nat>>>,
    order: Vec<u64>,
}

impl StageCache {
    fn get(&self, stage: u64) -> Option<Arc<BTreeSet<Nat>>> {
        self.entries.get(&stage).cloned()
    }

    fn put(&mut self, stage: u64, set: Arc<BTreeSet<Nat>>) {
        if self.entries.insert(stage, set).is_none() {
            self.order.push(stage);
            if self.order.len() > CACHE_SLOTS {
                let evict = self.order.remove(0);
                self.entries.remove(&evict);
            }
        }
    }
}

#[derive(Clone)]
pub struct IdealStream {
    rel: StagedRelation,
    label: Arc<str>,
    approx: Arc<ApproxFn>,
    member: Arc<MemberFn>,
    cache: Arc<Mutex<StageCache>>,
}

impl fmt::Debug for IdealStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdealStream")
            .field("label", &self.label)
            .field("relation", &self.rel.name())
            .finish()
    }
}

impl IdealStream {
    /// `approx` must be monotone with union equal to the ideal; `member` must
    /// be monotone, accept everything `approx` lists at the same stage, and
    /// accept exactly the ideal's elements in the limit.
    pub fn new<A, M>(rel: StagedRelation, label: impl Into<String>, approx: A, member: M) -> Self
    where
        A: Fn(u64) -> BTreeSet<Nat> + Send + Sync + 'static,
        M: Fn(&Nat, u64) -> bool + Send + Sync + 'static,
    {
        IdealStream {
            rel,
            label: Arc::from(label.into()),
            approx: Arc::new(approx),
            member: Arc::new(member),
            cache: Arc::new(Mutex::new(StageCache::default())),
        }
    }

    /// Stream whose membership test is read off its own approximations.
    pub fn from_approx<A>(rel: StagedRelation, label: impl Into<String>, approx: A) -> Self
    where
        A: Fn(u64) -> BTreeSet<Nat> + Send + Sync + 'static,
    {
        let approx: Arc<ApproxFn> = Arc::new(approx);
        let cache: Arc<Mutex<StageCache>> = Arc::new(Mutex::new(StageCache::default()));
        let (a2, c2) = (approx.clone(), cache.clone());
        IdealStream {
            rel,
            label: Arc::from(label.into()),
            approx,
            member: Arc::new(move |n, s| cached_approx(&c2, &a2, s).contains(n)),
            cache,
        }
    }

    /// An explicit enumeration, one finite batch per stage; the last batch
    /// repeats forever. Used for hand-written (possibly non-ideal) inputs.
    pub fn enum_script(rel: StagedRelation, stages: Vec<Vec<Nat>>) -> Self {
        let label = format!("enum-script({} stages)", stages.len());
        IdealStream::from_approx(rel, label, move |s| {
            let upto = (s as usize).min(stages.len().saturating_sub(1));
            stages
                .iter()
                .take(upto + 1)
                .flat_map(|b| b.iter().cloned())
                .collect()
        })
    }

    pub fn relation(&self) -> &StagedRelation {
        &self.rel
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = Arc::from(label.into());
        self
    }

    pub fn approx(&self, stage: u64) -> Arc<BTreeSet<Nat>> {
        cached_approx(&self.cache, &self.approx, stage)
    }

    pub fn member_at(&self, n: &Nat, stage: u64) -> bool {
        (self.member)(n, stage)
    }

    /// Semidecides `n ∈ I` within `fuel` stages.
    pub fn member(&self, n: &Nat, fuel: u64) -> QueryResult {
        least_stage(fuel, |s| self.member_at(n, s))
    }

    /// The first `count` elements in discovery order, looking no further than
    /// `max_stage`. Stages are visited on a doubling schedule; elements new at
    /// a visited stage come out in ascending order.
    pub fn enumerate(&self, count: usize, max_stage: u64) -> Vec<(u64, Nat)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in stage_schedule(max_stage) {
            for n in self.approx(s).iter() {
                if seen.insert(n.clone()) {
                    out.push((s, n.clone()));
                    if out.len() >= count {
                        return out;
                    }
                }
            }
        }
        out
    }
}

fn cached_approx(
    cache: &Mutex<StageCache>,
    approx: &Arc<ApproxFn>,
    stage: u64,
) -> Arc<BTreeSet<Nat>> {
    if let Some(hit) = cache.lock().expect("stage cache poisoned").get(stage) {
        return hit;
    }
    let set = Arc::new(approx(stage));
    cache
        .lock()
        .expect("stage cache poisoned")
        .put(stage, set.clone());
    set
}

/// `0, 1, 2, 4, 8, ...` capped by and ending at `max_stage`.
pub fn stage_schedule(max_stage: u64) -> Vec<u64> {
    let mut out = vec![0];
    let mut s = 1u64;
    while s < max_stage {
        out.push(s);
        s = s.saturating_mul(2);
    }
    if max_stage > 0 {
        out.push(max_stage);
    }
    out
}

type ElemFn = dyn Fn(u64) -> Nat + Send + Sync;

/// An ascending chain `elem(0) ≺ elem(1) ≺ ...`.
#[derive(Clone)]
pub struct Chain {
    rel: StagedRelation,
    label: Arc<str>,
    elem: Arc<ElemFn>,
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chain")
            .field("label", &self.label)
            .field("relation", &self.rel.name())
            .finish()
    }
}

impl Chain {
    pub fn new<F>(rel: StagedRelation, label: impl Into<String>, elem: F) -> Self
    where
        F: Fn(u64) -> Nat + Send + Sync + 'static,
    {
        Chain {
            rel,
            label: Arc::from(label.into()),
            elem: Arc::new(elem),
        }
    }

    /// Caches elements so expensive steps run once.
    pub fn memoized<F>(rel: StagedRelation, label: impl Into<String>, elem: F) -> Self
    where
        F: Fn(u64) -> Nat + Send + Sync + 'static,
    {
        let memo: Mutex<HashMap<u64, Nat>> = Mutex::new(HashMap::new());
        Chain::new(rel, label, move |i| {
            if let Some(v) = memo.lock().expect("chain memo poisoned").get(&i) {
                return v.clone();
            }
            let v = elem(i);
            memo.lock().expect("chain memo poisoned").insert(i, v.clone());
            v
        })
    }

    pub fn constant(rel: StagedRelation, n: Nat) -> Self {
        Chain::new(rel, format!("constant({n})"), move |_| n.clone())
    }

    /// `0, 1, 2, ...` over `less_than`.
    pub fn naturals() -> Self {
        Chain::new(relation::less_than(), "naturals", nat)
    }

    /// Strict prefixes of the eventually periodic sequence `prefix cycle cycle ...`
    /// over `strict_prefix`, by increasing length.
    pub fn baire_point(prefix: Vec<u64>, cycle: Vec<u64>) -> Self {
        let label = format!("baire({prefix:?},{cycle:?})");
        let point = EventuallyPeriodic::new(prefix, cycle);
        Chain::memoized(relation::strict_prefix(), label, move |i| point.code_of_prefix(i))
    }

    pub fn relation(&self) -> &StagedRelation {
        &self.rel
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn elem(&self, i: u64) -> Nat {
        (self.elem)(i)
    }

    /// Indices consulted at stage `s`: the longest run `0..=w` with `w <= s`
    /// whose codes stay within `max(s, 64)` bits.
    pub fn window(&self, stage: u64) -> Vec<Nat> {
        let cap = stage.max(64);
        let mut out = Vec::new();
        for i in 0..=stage {
            let e = self.elem(i);
            if e.bits() > cap {
                break;
            }
            out.push(e);
        }
        out
    }

    /// Checks `elem(i) ≺ elem(i+1)` for `i < len` within `fuel`; returns the
    /// first index whose link is not witnessed.
    pub fn first_unwitnessed_link(&self, len: u64, fuel: u64) -> Option<u64> {
        (0..len).find(|&i| !self.rel.holds(&self.elem(i), &self.elem(i + 1), fuel).is_yes())
    }
}

/// The sequence `prefix · cycle^ω` (or just `prefix` repeated on its last
/// element when the cycle is empty).
#[derive(Clone, Debug)]
pub struct EventuallyPeriodic {
    prefix: Vec<u64>,
    cycle: Vec<u64>,
}

impl EventuallyPeriodic {
    pub fn new(prefix: Vec<u64>, cycle: Vec<u64>) -> Self {
        let cycle = if cycle.is_empty() {
            vec![prefix.last().copied().unwrap_or(0)]
        } else {
            cycle
        };
        EventuallyPeriodic { prefix, cycle }
    }

    pub fn at(&self, i: usize) -> u64 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn code_of_prefix(&self, len: u64) -> Nat {
        let items: Vec<Nat> = (0..len as usize).map(|i| nat(self.at(i))).collect();
        seq_encode(&items)
    }

    /// `code` is a finite prefix of this sequence (any length).
    pub fn has_prefix(&self, code: &Nat) -> bool {
        let items = crate::encoding::seq_decode(code);
        items
            .iter()
            .enumerate()
            .all(|(i, x)| *x == nat(self.at(i)))
    }
}

type PredFn = dyn Fn(&Nat) -> bool + Send + Sync;

/// Desk-scale test point: an ideal over a decidable relation with decidable
/// membership and a known cofinal chain.
#[derive(Clone)]
pub struct FinGenSpec {
    rel: StagedRelation,
    label: Arc<str>,
    pred: Arc<PredFn>,
    cofinal: Chain,
}

impl fmt::Debug for FinGenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinGenSpec({} over {})", self.label, self.rel.name())
    }
}

impl FinGenSpec {
    /// The ideal generated by a finite ascending list of generators: `n` is a
    /// member iff `n ≺ g` for some generator (or `n = g` when `reflexive`).
    /// The last generator must bound the others and, unless `reflexive`,
    /// satisfy `g ≺ g`.
    pub fn generators(rel: StagedRelation, gens: Vec<Nat>, reflexive: bool) -> Result<Self> {
        if !rel.is_decidable() {
            return Err(Error::Invalid(format!(
                "finitely generated ideals need a decidable relation, got {}",
                rel.name()
            )));
        }
        let Some(top) = gens.last().cloned() else {
            return Err(Error::Invalid("no generators given".into()));
        };
        let label = format!(
            "gen[{}]{}",
            gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","),
            if reflexive { "=" } else { "" }
        );
        let r = rel.clone();
        let pred = move |n: &Nat| {
            gens.iter()
                .any(|g| r.holds_at(n, g, 0) || (reflexive && n == g))
        };
        let cofinal = Chain::constant(rel.clone(), top);
        Ok(FinGenSpec {
            rel,
            label: Arc::from(label),
            pred: Arc::new(pred),
            cofinal,
        })
    }

    pub fn singleton(n: Nat) -> Self {
        FinGenSpec::generators(relation::equality(), vec![n], false).expect("equality is decidable")
    }

    /// The unique ideal of `less_than`: all of ℕ.
    pub fn naturals() -> Self {
        FinGenSpec {
            rel: relation::less_than(),
            label: Arc::from("naturals"),
            pred: Arc::new(|_| true),
            cofinal: Chain::naturals(),
        }
    }

    /// The Baire-space point `prefix · cycle^ω`: all of its finite prefixes.
    pub fn baire_point(prefix: Vec<u64>, cycle: Vec<u64>) -> Self {
        let point = EventuallyPeriodic::new(prefix.clone(), cycle.clone());
        let chain = Chain::baire_point(prefix, cycle);
        FinGenSpec {
            rel: relation::strict_prefix(),
            label: Arc::from(chain.label().to_string()),
            pred: Arc::new(move |n| point.has_prefix(n)),
            cofinal: chain,
        }
    }

    /// The point `X ⊆ ℕ` of the powerset space, as the ideal of finite subsets
    /// of `X` over `finite_subset`.
    pub fn subsets_of<F>(label: impl Into<String>, in_x: F) -> Self
    where
        F: Fn(u64) -> bool + Send + Sync + 'static,
    {
        let in_x = Arc::new(in_x);
        let p = in_x.clone();
        let pred = move |code: &Nat| crate::encoding::finset_decode(code).into_iter().all(|e| p(e));
        let q = in_x.clone();
        let cofinal = Chain::memoized(relation::finite_subset(), "subsets", move |i| {
            crate::encoding::finset_encode((0..i).filter(|e| q(*e)))
        });
        FinGenSpec {
            rel: relation::finite_subset(),
            label: Arc::from(label.into()),
            pred: Arc::new(pred),
            cofinal,
        }
    }

    pub fn relation(&self) -> &StagedRelation {
        &self.rel
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn contains(&self, n: &Nat) -> bool {
        (self.pred)(n)
    }

    pub fn cofinal(&self) -> &Chain {
        &self.cofinal
    }

    pub fn stream(&self) -> IdealStream {
        let pred = self.pred.clone();
        let pred2 = self.pred.clone();
        let chain = self.cofinal.clone();
        IdealStream::new(
            self.rel.clone(),
            self.label.to_string(),
            move |s| {
                let mut out: BTreeSet<Nat> = (0..=s).map(nat).filter(|n| pred(n)).collect();
                out.extend(chain.window(s));
                out
            },
            move |n, _| pred2(n),
        )
    }
}

/// The down-closure `{n | ∃i n ≺ c(i)}` of an ascending chain.
pub fn ideal_from_chain(chain: &Chain) -> IdealStream {
    let rel = chain.relation().clone();
    let (c1, c2) = (chain.clone(), chain.clone());
    let (r1, r2) = (rel.clone(), rel.clone());
    IdealStream::new(
        rel,
        format!("down({})", chain.label()),
        move |s| {
            let window = c1.window(s);
            let mut out: BTreeSet<Nat> = BTreeSet::new();
            for top in &window {
                out.extend(r1.lower_at(top, s));
            }
            // chain elements are members: each lies below its successor
            out.extend(window);
            out
        },
        move |n, s| {
            c2.window(s)
                .iter()
                .any(|top| n == top || r2.holds_at(n, top, s))
        },
    )
}

/// Searches `I` for an element above `head` and every element of `window`,
/// starting at `from_stage` and giving up after `max_stage`. Least stage
/// first, then least element.
fn upper_bound_search(
    ideal: &IdealStream,
    head: Option<&Nat>,
    window: &BTreeSet<Nat>,
    from_stage: u64,
    max_stage: Option<u64>,
) -> Option<(Nat, u64)> {
    let rel = ideal.relation();
    let mut s = from_stage;
    loop {
        if let Some(max) = max_stage {
            if s > max {
                return None;
            }
        }
        let candidates = ideal.approx(s);
        for c in candidates.iter() {
            let above_head = head.is_none_or(|h| rel.holds_at(h, c, s));
            if above_head && window.iter().all(|x| rel.holds_at(x, c, s)) {
                return Some((c.clone(), s));
            }
        }
        s += 1;
    }
}

struct ChainExtraction {
    ideal: IdealStream,
    found: Mutex<Vec<(Nat, u64)>>,
}

impl ChainExtraction {
    fn elem(&self, i: u64, max_stage: Option<u64>) -> Option<Nat> {
        let mut found = self.found.lock().expect("extraction poisoned");
        while found.len() as u64 <= i {
            let step = found.len() as u64;
            let next = match found.last() {
                None => upper_bound_search(&self.ideal, None, &BTreeSet::new(), 0, max_stage),
                Some((head, at)) => {
                    let window = self.ideal.approx(step - 1);
                    upper_bound_search(&self.ideal, Some(head), &window, *at, max_stage)
                }
            };
            found.push(next?);
        }
        Some(found[i as usize].0.clone())
    }
}

/// A cofinal ascending chain inside `I`: `elem(i+1)` is the least-stage,
/// least-valued element of `I` above `elem(i)` and above everything `I`
/// enumerated by stage `i`. Each step searches without bound; it terminates
/// whenever `I` is a genuine ideal.
pub fn chain_from_ideal(ideal: &IdealStream) -> Chain {
    let ex = Arc::new(ChainExtraction {
        ideal: ideal.clone(),
        found: Mutex::new(Vec::new()),
    });
    Chain::new(
        ideal.relation().clone(),
        format!("chain({})", ideal.label()),
        move |i| ex.elem(i, None).expect("unbounded search returns"),
    )
}

/// Like [`chain_from_ideal`], but starting from a given member `start`.
/// Every later element lies above `start`.
pub fn chain_from_ideal_starting(ideal: &IdealStream, start: Nat) -> Chain {
    let ex = Arc::new(ChainExtraction {
        ideal: ideal.clone(),
        found: Mutex::new(vec![(start, 0)]),
    });
    Chain::new(
        ideal.relation().clone(),
        format!("chain({})", ideal.label()),
        move |i| ex.elem(i, None).expect("unbounded search returns"),
    )
}

/// The first `len` elements of [`chain_from_ideal`], aborting once a step
/// would need a stage beyond `max_stage`.
pub fn extract_chain(ideal: &IdealStream, len: u64, max_stage: u64) -> Result<Vec<Nat>> {
    let ex = ChainExtraction {
        ideal: ideal.clone(),
        found: Mutex::new(Vec::new()),
    };
    (0..len)
        .map(|i| {
            ex.elem(i, Some(max_stage)).ok_or_else(|| Error::BudgetExhausted {
                budget: max_stage,
                context: format!("no upper bound for chain step {i} in {}", ideal.label()),
            })
        })
        .collect()
}

/// Some `c ∈ I` with `a ≺ c` and `b ≺ c`, found by stage `fuel`.
pub fn basis_witness(ideal: &IdealStream, a: &Nat, b: &Nat, fuel: u64) -> Option<Nat> {
    let rel = ideal.relation();
    for s in stage_schedule(fuel) {
        let found = ideal
            .approx(s)
            .iter()
            .find(|c| rel.holds_at(a, c, s) && rel.holds_at(b, c, s))
            .cloned();
        if found.is_some() {
            return found;
        }
    }
    None
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub inspected: Vec<Nat>,
    pub empty: bool,
    /// Pairs with no common upper bound found.
    pub not_directed: Vec<(Nat, Nat)>,
    /// `(n, a)` with `n ≺ a`, `a` enumerated, `n` not.
    pub not_lower: Vec<(Nat, Nat)>,
}

impl Diagnostics {
    pub fn is_clean(&self) -> bool {
        !self.empty && self.not_directed.is_empty() && self.not_lower.is_empty()
    }
}

/// Best-effort falsifier for the ideal axioms on the first `depth` elements.
pub fn validate_prefix(ideal: &IdealStream, depth: usize, fuel: u64) -> Diagnostics {
    let rel = ideal.relation();
    let inspected: Vec<Nat> = ideal
        .enumerate(depth, fuel)
        .into_iter()
        .map(|(_, n)| n)
        .collect();
    let pool = ideal.approx(fuel);
    let mut diag = Diagnostics {
        empty: inspected.is_empty(),
        ..Default::default()
    };
    for (i, a) in inspected.iter().enumerate() {
        for b in &inspected[i..] {
            let bounded = pool
                .iter()
                .any(|c| rel.holds_at(a, c, fuel) && rel.holds_at(b, c, fuel));
            if !bounded {
                diag.not_directed.push((a.clone(), b.clone()));
            }
        }
        for n in rel.lower_at(a, fuel) {
            if !ideal.member_at(&n, fuel) {
                diag.not_lower.push((n, a.clone()));
            }
        }
    }
    diag.inspected = inspected;
    diag
}

/// Membership agreement on `0..=bound` at `fuel`.
pub fn equal_below(a: &IdealStream, b: &IdealStream, bound: u64, fuel: u64) -> bool {
    first_disagreement(a, b, bound, fuel).is_none()
}

pub fn first_disagreement(a: &IdealStream, b: &IdealStream, bound: u64, fuel: u64) -> Option<Nat> {
    (0..=bound)
        .map(nat)
        .find(|n| a.member_at(n, fuel) != b.member_at(n, fuel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::seq_encode_u64;
    use crate::relation::{equality, less_than};

    fn n(v: u64) -> Nat {
        nat(v)
    }

    #[test]
    fn member_examples() {
        let five = FinGenSpec::singleton(n(5)).stream();
        assert!(five.member(&n(5), 4).is_yes());
        assert_eq!(five.member(&n(4), 10_000), QueryResult::Unknown);

        let c = Chain::new(relation::strict_prefix(), "p", |i| {
            let items: Vec<u64> = [1u64, 0, 0, 0, 0, 0][..i.min(6) as usize].to_vec();
            seq_encode_u64(&items)
        });
        let ideal = ideal_from_chain(&c);
        assert!(ideal.member(&seq_encode_u64(&[1]), 64).is_yes());
    }

    #[test]
    fn ideal_from_chain_examples() {
        let constant = ideal_from_chain(&Chain::constant(equality(), n(9)));
        assert!(constant.member_at(&n(9), 0));
        assert!((0..40).filter(|&k| k != 9).all(|k| !constant.member_at(&n(k), 200)));

        let all = ideal_from_chain(&Chain::naturals());
        assert!((0..50).all(|k| all.member_at(&n(k), 100)));

        let p = ideal_from_chain(&Chain::baire_point(vec![2, 0], vec![1]));
        assert!(p.member_at(&seq_encode_u64(&[2, 0, 1]), 16));
        assert!(!p.member_at(&seq_encode_u64(&[2, 1]), 64));
    }

    #[test]
    fn chain_from_ideal_examples() {
        let five = FinGenSpec::singleton(n(5)).stream();
        let c = chain_from_ideal(&five);
        assert!((0..6).all(|i| c.elem(i) == n(5)));

        let p = FinGenSpec::baire_point(vec![1], vec![0]).stream();
        let c = chain_from_ideal(&p);
        let lens: Vec<usize> = (0..5)
            .map(|i| crate::encoding::seq_decode(&c.elem(i)).len())
            .collect();
        assert!(lens.windows(2).all(|w| w[0] < w[1]), "{lens:?}");
        assert_eq!(c.first_unwitnessed_link(4, 1), None);

        let all = FinGenSpec::naturals().stream();
        let back = ideal_from_chain(&chain_from_ideal(&all));
        assert!(equal_below(&all, &back, 40, 128));
    }

    #[test]
    fn extract_chain_respects_budget() {
        let empty = IdealStream::enum_script(less_than(), vec![vec![]]);
        assert!(matches!(
            extract_chain(&empty, 2, 50),
            Err(Error::BudgetExhausted { budget: 50, .. })
        ));
        let not_directed = IdealStream::enum_script(less_than(), vec![vec![n(0)]]);
        assert!(extract_chain(&not_directed, 1, 50).is_ok());
        assert!(extract_chain(&not_directed, 2, 50).is_err());
    }

    #[test]
    fn basis_witness_examples() {
        let all = FinGenSpec::naturals().stream();
        let c = basis_witness(&all, &n(2), &n(7), 64).unwrap();
        assert!(c >= n(8));
        let five = FinGenSpec::singleton(n(5)).stream();
        assert_eq!(basis_witness(&five, &n(5), &n(5), 8), Some(n(5)));
        assert_eq!(basis_witness(&five, &n(4), &n(5), 4096), None);
    }

    #[test]
    fn validate_prefix_examples() {
        let all = FinGenSpec::naturals().stream();
        assert!(validate_prefix(&all, 10, 64).is_clean());
        let gap = IdealStream::enum_script(less_than(), vec![vec![n(0), n(2)]]);
        let d = validate_prefix(&gap, 10, 64);
        assert!(d.not_lower.contains(&(n(1), n(2))));
        let zero = IdealStream::enum_script(less_than(), vec![vec![n(0)]]);
        let d = validate_prefix(&zero, 10, 64);
        assert!(d.not_directed.contains(&(n(0), n(0))));
        let empty = IdealStream::enum_script(less_than(), vec![vec![]]);
        assert!(validate_prefix(&empty, 10, 64).empty);
    }

    #[test]
    fn equal_below_examples() {
        let five = FinGenSpec::singleton(n(5)).stream();
        let four = FinGenSpec::singleton(n(4)).stream();
        assert!(equal_below(&five, &five, 10, 10));
        assert!(!equal_below(&five, &four, 10, 10));
    }

    #[test]
    fn enumerate_is_discovery_ordered() {
        let all = FinGenSpec::naturals().stream();
        let first: Vec<Nat> = all.enumerate(5, 64).into_iter().map(|(_, v)| v).collect();
        assert_eq!(first, vec![n(0), n(1), n(2), n(3), n(4)]);
    }

    #[test]
    fn generators_need_decidable_relation() {
        let slow = relation::staggered(&less_than(), 3);
        assert!(FinGenSpec::generators(slow, vec![n(1)], true).is_err());
        assert!(FinGenSpec::generators(equality(), vec![], false).is_err());
    }
}
