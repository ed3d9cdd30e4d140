//! Named property suites over sampled and exhaustive inputs.
//!
//! Every suite is deterministic given its [`CheckConfig`]: sampling uses a
//! ChaCha stream seeded from the configured seed and the suite name, so a
//! suite reports the same lines whether run alone or as part of `all`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::{apply_code, identity_code, FnCode, Pi2Code};
use crate::comptop::{s_from_relation, x_conditions, x_pi2_code, PointSample};
use crate::constructions::{
    coproduct_relation, equalizer_pi2, fk_encode, pair_ideals, pi2_relation, pi2_subspace,
    product_relation, proj1_code, proj2_code,
};
use crate::encoding::{
    finset_decode, finset_encode, nat, pair_decode, pair_encode, seq_decode, seq_encode_u64,
};
use crate::error::{Error, Result};
use crate::ideal::{basis_witness, equal_below, first_disagreement, FinGenSpec, IdealStream};
use crate::metric::{
    ball_encode, ball_relation, dyadic, ideal_from_cauchy, rational, rational_index, FastCauchy,
    IntervalOracle, MetricOracle, RationalsOracle, RealPoint,
};
use crate::powerspace::{finite_catalogue, lower_relation, upper_relation};
use crate::relation::{equality, finite_subset, less_than, staggered, strict_prefix, StagedRelation};
use crate::staged::StagedSet;
use crate::Nat;

pub const SUITES: [&str; 10] = [
    "encoding",
    "transitivity",
    "basis",
    "identity",
    "product",
    "pi2-roundtrip",
    "metric",
    "comptop",
    "powerspace-finite",
    "monotonicity",
];

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    /// Overrides a suite's sample count.
    pub samples: Option<usize>,
    /// Overrides a suite's element bound.
    pub bound: Option<u64>,
    /// Overrides a suite's fuel.
    pub fuel: Option<u64>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            samples: None,
            bound: None,
            fuel: None,
        }
    }
}

impl CheckConfig {
    fn samples(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn bound(&self, default: u64) -> u64 {
        self.bound.unwrap_or(default)
    }

    fn fuel(&self, default: u64) -> u64 {
        self.fuel.unwrap_or(default)
    }

    fn rng(&self, suite: &str) -> ChaCha8Rng {
        let salt = suite
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub property: String,
    pub checked: u64,
    pub failed: u64,
    /// The first failing input, if any.
    pub example: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }

    /// One line per property, `pass`/`FAIL` first.
    pub fn lines(&self) -> Vec<String> {
        self.properties
            .iter()
            .map(|p| {
                let verdict = if p.passed() { "pass" } else { "FAIL" };
                let mut line = format!(
                    "{verdict} {}/{}: {} checked, {} failed",
                    self.suite, p.property, p.checked, p.failed
                );
                if let Some(e) = &p.example {
                    line.push_str(&format!(" (first: {e})"));
                }
                line
            })
            .collect()
    }
}

/// Accumulates one property's counters.
struct Tally {
    property: String,
    checked: u64,
    failed: u64,
    example: Option<String>,
}

impl Tally {
    fn new(property: impl Into<String>) -> Self {
        Tally {
            property: property.into(),
            checked: 0,
            failed: 0,
            example: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.example.is_none() {
                self.example = Some(what());
            }
        }
    }

    fn done(self) -> PropertyResult {
        PropertyResult {
            property: self.property,
            checked: self.checked,
            failed: self.failed,
            example: self.example,
        }
    }
}

/// Runs `name`, or every suite for `all`.
pub fn run(name: &str, config: &CheckConfig) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, config)).collect();
    }
    run_one(name, config).map(|r| vec![r])
}

fn run_one(name: &str, config: &CheckConfig) -> Result<SuiteReport> {
    let properties = match name {
        "encoding" => encoding_suite(config),
        "transitivity" => transitivity_suite(config),
        "basis" => basis_suite(config),
        "identity" => identity_suite(config),
        "product" => product_suite(config),
        "pi2-roundtrip" => pi2_suite(config),
        "metric" => metric_suite(config),
        "comptop" => comptop_suite(config),
        "powerspace-finite" => powerspace_suite(config),
        "monotonicity" => monotonicity_suite(config),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        properties,
    })
}

/// A random finitely generated ideal over `=`, `<` or `strict_prefix`
/// (`which` modulo 3).
pub fn sample_fingen(rng: &mut ChaCha8Rng, which: usize, below: u64) -> FinGenSpec {
    match which % 3 {
        0 => FinGenSpec::singleton(nat(rng.gen_range(0..below.max(1)))),
        1 => FinGenSpec::naturals(),
        _ => {
            let prefix: Vec<u64> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..3)).collect();
            let cycle: Vec<u64> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..3)).collect();
            FinGenSpec::baire_point(prefix, cycle)
        }
    }
}

fn encoding_suite(_: &CheckConfig) -> Vec<PropertyResult> {
    let mut pairing = Tally::new("pairing bijection below 100000");
    for n in 0..100_000u64 {
        let (a, b) = pair_decode(&nat(n));
        let (a64, b64) = (a.to_u64().unwrap_or(u64::MAX), b.to_u64().unwrap_or(u64::MAX));
        let cantor = (a64 as u128 + b64 as u128) * (a64 as u128 + b64 as u128 + 1) / 2 + b64 as u128;
        let ok = pair_encode(&a, &b) == nat(n) && cantor == n as u128;
        pairing.record(ok, || n.to_string());
    }
    let mut sets = Tally::new("finite-set bijection below 2^16");
    for c in 0..(1u64 << 16) {
        let elems = finset_decode(&nat(c));
        let mask = elems.iter().fold(0u64, |m, e| m | 1 << e);
        sets.record(finset_encode(elems) == nat(c) && mask == c, || c.to_string());
    }
    let mut seqs = Tally::new("sequence codes injective, length <= 6 over 0..5");
    let mut seen = BTreeSet::new();
    let mut stack: Vec<Vec<u64>> = vec![vec![]];
    while let Some(s) = stack.pop() {
        let code = seq_encode_u64(&s);
        let back: Vec<u64> = seq_decode(&code).iter().map(|x| x.to_u64().unwrap_or(u64::MAX)).collect();
        let fresh = seen.insert(code);
        seqs.record(back == s && fresh, || format!("{s:?}"));
        if s.len() < 6 {
            for x in 0..6 {
                let mut t = s.clone();
                t.push(x);
                stack.push(t);
            }
        }
    }
    vec![pairing.done(), sets.done(), seqs.done()]
}

fn transitivity_suite(config: &CheckConfig) -> Vec<PropertyResult> {
    let bound = config.bound(5);
    let fuel = config.fuel(16);
    let plain: Vec<Nat> = (0..=bound).map(nat).collect();
    let sets: Vec<Nat> = (0..1u64 << (bound + 1).min(8)).map(nat).collect();
    let pairs: Vec<Nat> = (0..=bound)
        .flat_map(|a| (0..=bound).map(move |b| pair_encode(&nat(a), &nat(b))))
        .collect();
    let tagged: Vec<Nat> = (1..=2u64)
        .flat_map(|t| (0..=bound).map(move |x| pair_encode(&nat(t), &nat(x))))
        .collect();
    let mut cases: Vec<(StagedRelation, Vec<Nat>)> = vec![
        (equality(), plain.clone()),
        (less_than(), plain.clone()),
        (strict_prefix(), plain.clone()),
        (finite_subset(), sets.clone()),
        (product_relation(&less_than(), &strict_prefix()), pairs),
        (coproduct_relation(&equality(), &less_than()), tagged),
        (staggered(&less_than(), 5), plain),
    ];
    for base in [less_than(), equality(), strict_prefix()] {
        cases.push((lower_relation(&base), sets.clone()));
        cases.push((upper_relation(&base), sets.clone()));
    }
    let mut out: Vec<PropertyResult> = cases
        .into_iter()
        .map(|(rel, elems)| {
            let mut t = Tally::new(format!("{} transitive", rel.name()));
            let bad = rel.transitivity_violations(&elems, fuel);
            t.checked = (elems.len() as u64).pow(3);
            t.failed = bad.len() as u64;
            t.example = bad.first().map(|(a, b, c)| format!("{a} ≺ {b} ≺ {c}"));
            t.done()
        })
        .collect();
    for inst in pi2_instances().into_iter().take(2) {
        let Ok(rel) = pi2_relation(&inst.base, &inst.code) else {
            continue;
        };
        let elems = fk_elements(bound);
        let mut t = Tally::new(format!("⊏ of {} transitive", inst.name));
        let bad = rel.transitivity_violations(&elems, config.fuel(256));
        t.checked = (elems.len() as u64).pow(3);
        t.failed = bad.len() as u64;
        t.example = bad.first().map(|(a, b, c)| format!("{a} ⊏ {b} ⊏ {c}"));
        out.push(t.done());
    }
    out
}

/// Every `<F, k>` with `F ⊆ {0..bound}` and `k <= bound`.
pub fn fk_elements(bound: u64) -> Vec<Nat> {
    let width = (bound + 1).min(8);
    (0..1u64 << width)
        .flat_map(|mask| {
            let elems: Vec<u64> = (0..width).filter(|i| mask & (1 << i) != 0).collect();
            (0..=bound).map(move |k| fk_encode(elems.clone(), k))
        })
        .collect()
}

fn basis_suite(config: &CheckConfig) -> Vec<PropertyResult> {
    let mut rng = config.rng("basis");
    let bound = config.bound(32);
    let fuel = config.fuel(256);
    let mut t = Tally::new(format!("basis witnesses below {bound}"));
    for i in 0..config.samples(200) {
        let spec = sample_fingen(&mut rng, i, bound);
        let ideal = spec.stream();
        let members: Vec<Nat> = (0..bound).map(nat).filter(|n| spec.contains(n)).collect();
        for (j, a) in members.iter().enumerate() {
            for b in &members[j..] {
                let ok = basis_witness(&ideal, a, b, fuel).is_some();
                t.record(ok, || format!("{} ∋ {a}, {b}", spec.label()));
            }
        }
    }
    vec![t.done()]
}

fn identity_suite(config: &CheckConfig) -> Vec<PropertyResult> {
    let mut rng = config.rng("identity");
    let bound = config.bound(64);
    let fuel = config.fuel(128);
    let mut t = Tally::new("identity code fixes points");
    for i in 0..config.samples(100) {
        let spec = sample_fingen(&mut rng, i, bound);
        let ideal = spec.stream();
        let out = apply_code(&identity_code(spec.relation()), &ideal);
        let ok = out.is_ok_and(|o| equal_below(&o, &ideal, bound, fuel));
        t.record(ok, || spec.label().to_string());
    }
    vec![t.done()]
}

fn product_suite(config: &CheckConfig) -> Vec<PropertyResult> {
    let mut rng = config.rng("product");
    let bound = config.bound(64);
    let fuel = config.fuel(128);
    let mut proj = Tally::new("projections of a pair");
    let mut pairing = Tally::new("pair of projections");
    for i in 0..config.samples(100) {
        let a = sample_fingen(&mut rng, i, 16);
        let which = rng.gen_range(0..3);
        let b = sample_fingen(&mut rng, which, 16);
        let (ia, ib) = (a.stream(), b.stream());
        let p = pair_ideals(&ia, &ib);
        let (r1, r2) = (a.relation(), b.relation());
        let label = || format!("<{}, {}>", a.label(), b.label());
        let p1 = apply_code(&proj1_code(r1, r2), &p).ok();
        let p2 = apply_code(&proj2_code(r1, r2), &p).ok();
        let ok = p1.as_ref().is_some_and(|x| equal_below(x, &ia, bound, fuel))
            && p2.as_ref().is_some_and(|x| equal_below(x, &ib, bound, fuel));
        proj.record(ok, label);
        let ok = match (p1, p2) {
            (Some(x), Some(y)) => equal_below(&pair_ideals(&x, &y), &p, bound, fuel),
            _ => false,
        };
        pairing.record(ok, label);
    }
    vec![proj.done(), pairing.done()]
}

/// A Π⁰₂ subspace together with a way to sample its points.
pub struct Pi2Instance {
    pub name: &'static str,
    pub base: StagedRelation,
    pub code: Pi2Code,
    pub sample: Arc<dyn Fn(&mut ChaCha8Rng) -> IdealStream + Send + Sync>,
}

fn letter_code(j: usize) -> FnCode {
    FnCode::new(format!("letter{j}"), strict_prefix(), equality(), move |m, n, _| {
        seq_decode(m).get(j) == Some(n)
    })
    .with_image(move |ms, _| ms.iter().filter_map(|m| seq_decode(m).get(j).cloned()).collect())
}

fn baire_with(rng: &mut ChaCha8Rng, fix: impl Fn(&mut Vec<u64>)) -> IdealStream {
    let mut prefix: Vec<u64> = (0..rng.gen_range(2..4)).map(|_| rng.gen_range(0..3)).collect();
    fix(&mut prefix);
    let cycle: Vec<u64> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..3)).collect();
    FinGenSpec::baire_point(prefix, cycle).stream()
}

/// Three fixed subspaces: Baire points that continue `0` with `0`, the
/// equalizer of the first two letters, and the complete space of `=`.
pub fn pi2_instances() -> Vec<Pi2Instance> {
    let sp = strict_prefix();
    let zero_zero = Pi2Code::listed(
        "0⇒00",
        sp.clone(),
        vec![(
            StagedSet::finite([seq_encode_u64(&[0])]),
            StagedSet::finite([seq_encode_u64(&[0, 0])]),
        )],
    );
    let eq = equalizer_pi2(&letter_code(0), &letter_code(1)).expect("same relations");
    let complete = x_pi2_code(&s_from_relation(&equality()), None);
    vec![
        Pi2Instance {
            name: "baire-0-then-0",
            base: sp.clone(),
            code: zero_zero,
            sample: Arc::new(|rng| {
                baire_with(rng, |p| {
                    if p[0] == 0 {
                        p[1] = 0;
                    }
                })
            }),
        },
        Pi2Instance {
            name: "equal-first-letters",
            base: sp,
            code: eq,
            sample: Arc::new(|rng| baire_with(rng, |p| p[1] = p[0])),
        },
        Pi2Instance {
            name: "complete-equality",
            base: finite_subset(),
            code: complete,
            sample: Arc::new(|rng| {
                let k = rng.gen_range(0..6u64);
                FinGenSpec::subsets_of(format!("{{{k}}}"), move |e| e == k).stream()
            }),
        },
    ]
}

fn pi2_suite(config: &CheckConfig) -> Vec<PropertyResult> {
    let mut rng = config.rng("pi2-roundtrip");
    let bound = config.bound(64);
    let fuel = config.fuel(1024);
    let mut out = Vec::new();
    for inst in pi2_instances() {
        let mut fg = Tally::new(format!("{}: f∘g = id", inst.name));
        let mut gf = Tally::new(format!("{}: g∘f = id", inst.name));
        let Ok(space) = pi2_subspace(&inst.base, &inst.code) else {
            fg.record(false, || "construction failed".into());
            out.push(fg.done());
            continue;
        };
        for _ in 0..config.samples(50) {
            let x = (inst.sample)(&mut rng);
            let label = x.label().to_string();
            let Ok(gx) = apply_code(&space.g, &x) else {
                fg.record(false, || label.clone());
                continue;
            };
            let back = apply_code(&space.f, &gx);
            let diff = back.as_ref().ok().map(|b| first_disagreement(b, &x, bound, fuel));
            fg.record(diff == Some(None), || format!("{label} at {diff:?}"));
            let again = back.and_then(|b| apply_code(&space.g, &b));
            let diff = again.as_ref().ok().map(|a| first_disagreement(a, &gx, bound, fuel));
            gf.record(diff == Some(None), || format!("g({label}) at {diff:?}"));
        }
        out.push(fg.done());
        out.push(gf.done());
    }
    out
}

fn metric_suite(config: &CheckConfig) -> Vec<PropertyResult> {
    let fuel = config.fuel(256);
    let oracle: Arc<dyn MetricOracle> = Arc::new(RationalsOracle);
    let mut grid = Tally::new("ball membership matches distance");
    let limits = [rational(1, 3), rational(-2, 7), rational(5, 4)];
    for (li, limit) in limits.iter().enumerate() {
        let ideal = ideal_from_cauchy(oracle.clone(), &FastCauchy::approaching(limit.clone()));
        for (c, n) in metric_grid(li) {
            let expect = (&c - limit).abs() < dyadic(n);
            let got = ideal.member(&ball_encode(&rational_index(&c), n), fuel).is_yes();
            grid.record(got == expect, || format!("<{c}, {n}> against {limit}"));
        }
    }
    let mut sqrt = Tally::new("√2 ball tests");
    let two = ideal_from_cauchy(oracle, &FastCauchy::sqrt2());
    let ball = |n| ball_encode(&rational_index(&rational(7, 5)), n);
    sqrt.record(two.member(&ball(2), fuel).is_yes(), || "<7/5, 2>".into());
    sqrt.record(!two.member(&ball(7), fuel).is_yes(), || "<7/5, 7>".into());
    let interval: Arc<dyn MetricOracle> = Arc::new(IntervalOracle::new(vec![
        RealPoint::Sqrt(rational(2, 1)),
        RealPoint::Rational(rational(7, 5)),
    ]));
    let rel = ball_relation(interval);
    let (root, seven_fifths) = (nat(0), nat(1));
    sqrt.record(
        rel.holds(&ball_encode(&seven_fifths, 1), &ball_encode(&root, 3), fuel).is_yes(),
        || "interval <7/5,1> ≺ <√2,3>".into(),
    );
    vec![grid.done(), sqrt.done()]
}

/// Fifty `(centre, exponent)` pairs: centres `k/16` and exponents `0..=6`.
pub fn metric_grid(offset: usize) -> Vec<(BigRational, u64)> {
    (0..50)
        .map(|i| {
            let k = (i * 7 + offset * 3) as i64 % 48 - 24;
            (rational(k, 16), ((i + offset) % 7) as u64)
        })
        .collect()
}

/// Finite sets that are not ideals of `rel` (`which` picks the relation as
/// in [`sample_fingen`]).
pub fn sample_non_ideal(rng: &mut ChaCha8Rng, which: usize) -> PointSample {
    let set: BTreeSet<Nat> = match (which % 3, rng.gen_range(0..3)) {
        (_, 0) => BTreeSet::new(),
        (0, _) => {
            let a = rng.gen_range(0..30u64);
            let b = a + rng.gen_range(1..30u64);
            [nat(a), nat(b)].into_iter().collect()
        }
        (1, 1) => (0..=rng.gen_range(0..20u64)).map(nat).collect(),
        (1, _) => {
            let a = rng.gen_range(1..40u64);
            [nat(a)].into_iter().collect()
        }
        (_, 1) => {
            let len = rng.gen_range(0..4usize);
            let s: Vec<u64> = (0..len).map(|_| rng.gen_range(0..3)).collect();
            (0..=len).map(|l| seq_encode_u64(&s[..l])).collect()
        }
        _ => {
            let mut fork = [rng.gen_range(0..3u64), 0];
            fork[1] = (fork[0] + 1) % 3;
            [nat(0), seq_encode_u64(&fork[..1]), seq_encode_u64(&fork[1..])]
                .into_iter()
                .collect()
        }
    };
    let label = format!("{set:?}");
    PointSample::finite(label, set)
}

fn comptop_suite(config: &CheckConfig) -> Vec<PropertyResult> {
    let mut rng = config.rng("comptop");
    let bound = config.bound(24);
    let fuel = config.fuel(128);
    let mut ideals = Tally::new("ideals satisfy (i)-(iii)");
    let mut others = Tally::new("non-ideals violate (i)-(iii)");
    for i in 0..config.samples(100) {
        let spec = sample_fingen(&mut rng, i, bound);
        let s = s_from_relation(spec.relation());
        let x = PointSample::ideal(&spec, bound, fuel);
        let r = x_conditions(&s, &x, bound, fuel);
        ideals.record(r.in_x(), || format!("{}: {r:?}", spec.label()));

        let rel = [equality(), less_than(), strict_prefix()][i % 3].clone();
        let y = sample_non_ideal(&mut rng, i);
        let r = x_conditions(&s_from_relation(&rel), &y, bound, fuel);
        others.record(!r.in_x(), || format!("{} over {}", y.label, rel.name()));
    }
    vec![ideals.done(), others.done()]
}

fn powerspace_suite(config: &CheckConfig) -> Vec<PropertyResult> {
    let fuel = config.fuel(16);
    let mut model = Tally::new("homeomorphisms and basic opens on the finite model");
    let mut maps = Tally::new("executable maps agree with the model");
    for space in finite_catalogue() {
        let r = space.verify();
        model.record(r.passed(), || format!("{}: {}", r.name, r.failures[0]));
        let bad = space.cross_check(fuel);
        maps.record(bad.is_empty(), || format!("{}: {}", space.name(), bad[0]));
    }
    vec![model.done(), maps.done()]
}

/// Relations whose stage behaviour is exercised by [`monotonicity_suite`],
/// each with a sampler for its elements.
pub fn staged_relations() -> Vec<(StagedRelation, fn(&mut ChaCha8Rng) -> Nat)> {
    fn small(rng: &mut ChaCha8Rng) -> Nat {
        nat(rng.gen_range(0..200))
    }
    fn set(rng: &mut ChaCha8Rng) -> Nat {
        nat(rng.gen_range(0..256))
    }
    fn fk(rng: &mut ChaCha8Rng) -> Nat {
        let elems: Vec<u64> = (0..6).filter(|_| rng.gen_bool(0.4)).collect();
        fk_encode(elems, rng.gen_range(0..6))
    }
    fn ball(rng: &mut ChaCha8Rng) -> Nat {
        ball_encode(&nat(rng.gen_range(0..3)), rng.gen_range(0..7))
    }
    let lt = staggered(&less_than(), 7);
    let sp = staggered(&strict_prefix(), 5);
    let base_pi2 = pi2_instances().remove(0);
    let pi2 = pi2_relation(&sp, &Pi2Code::new(
        "staged",
        sp.clone(),
        base_pi2.code.u().clone(),
        base_pi2.code.v().clone(),
    ).with_index_count(1))
    .expect("same relation");
    let interval: Arc<dyn MetricOracle> = Arc::new(IntervalOracle::new(vec![
        RealPoint::Sqrt(rational(2, 1)),
        RealPoint::Rational(rational(7, 5)),
        RealPoint::Sqrt(rational(3, 1)),
    ]));
    vec![
        (product_relation(&lt, &sp), small),
        (coproduct_relation(&lt, &sp), small),
        (pi2, fk),
        (ball_relation(interval), ball),
        (lower_relation(&lt), set),
        (upper_relation(&lt), set),
    ]
}

fn monotonicity_suite(config: &CheckConfig) -> Vec<PropertyResult> {
    let mut rng = config.rng("monotonicity");
    let count = config.samples(10_000);
    let fuel = config.fuel(64);
    let mut out = Vec::new();
    for (rel, sample) in staged_relations() {
        let mut t = Tally::new(format!("{} never regresses", rel.name()));
        for _ in 0..count {
            let (a, b) = (sample(&mut rng), sample(&mut rng));
            let s = rng.gen_range(0..fuel);
            let later = s + rng.gen_range(0..fuel);
            let ok = !rel.holds_at(&a, &b, s) || rel.holds_at(&a, &b, later);
            t.record(ok, || format!("({a}, {b}) at {s} then {later}"));
        }
        out.push(t.done());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(name: &str, samples: usize) -> SuiteReport {
        let config = CheckConfig {
            seed: 7,
            samples: Some(samples),
            ..Default::default()
        };
        run(name, &config).unwrap().remove(0)
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert_eq!(
            run("nope", &CheckConfig::default()).unwrap_err(),
            Error::UnknownSuite("nope".into())
        );
    }

    #[test]
    fn small_suites_pass() {
        for name in ["basis", "identity", "product", "comptop", "monotonicity", "powerspace-finite"] {
            let r = quick(name, 12);
            assert!(r.passed(), "{:?}", r.lines());
        }
    }

    #[test]
    fn metric_suite_passes() {
        let r = quick("metric", 1);
        assert!(r.passed(), "{:?}", r.lines());
    }

    #[test]
    fn pi2_suite_passes_on_a_few_points() {
        let config = CheckConfig {
            seed: 3,
            samples: Some(4),
            fuel: Some(256),
            ..Default::default()
        };
        let r = run("pi2-roundtrip", &config).unwrap().remove(0);
        assert!(r.passed(), "{:?}", r.lines());
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(quick("comptop", 10), quick("comptop", 10));
    }

    #[test]
    fn non_ideal_samples_are_not_ideals() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 0..60 {
            let x = sample_non_ideal(&mut rng, i);
            let rel = [equality(), less_than(), strict_prefix()][i % 3].clone();
            let elems: Vec<Nat> = x.window.clone();
            let lower = elems
                .iter()
                .all(|b| rel.lower_at(b, 1000).iter().all(|a| x.contains(a)));
            let directed = elems.iter().all(|a| {
                elems
                    .iter()
                    .all(|b| elems.iter().any(|c| rel.holds_at(a, c, 0) && rel.holds_at(b, c, 0)))
            });
            assert!(elems.is_empty() || !(lower && directed), "{}", x.label);
        }
    }
}
