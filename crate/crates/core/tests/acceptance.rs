//! Acceptance criteria, one line each. Expected values come from oracles
//! written here, independently of the library code under test.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ideal_spaces::check::{metric_grid, pi2_instances, sample_non_ideal, staged_relations};
use ideal_spaces::codes::{apply_code, identity_code};
use ideal_spaces::comptop::{s_from_relation, x_conditions, PointSample};
use ideal_spaces::constructions::{fk_encode, pair_ideals, pi2_relation, pi2_subspace, proj1_code, proj2_code};
use ideal_spaces::encoding::{
    finset_decode, finset_encode, nat, pair_decode, pair_encode, seq_decode, seq_encode_u64,
};
use ideal_spaces::ideal::{basis_witness, FinGenSpec, IdealStream};
use ideal_spaces::metric::{
    ball_encode, ideal_from_cauchy, rational, rational_index, FastCauchy, MetricOracle,
    RationalsOracle,
};
use ideal_spaces::powerspace::finite_catalogue;
use ideal_spaces::relation::{equality, less_than, strict_prefix, StagedRelation};
use ideal_spaces::Nat;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cantor(a: u128, b: u128) -> u128 {
    (a + b) * (a + b + 1) / 2 + b
}

fn cantor_big(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

fn seq_code(s: &[u64]) -> BigUint {
    match s.split_first() {
        None => BigUint::from(0u32),
        Some((x, rest)) => cantor_big(&BigUint::from(*x), &seq_code(rest)) + 1u32,
    }
}

/// A point of `=`, `<` or Baire space with a membership oracle.
#[derive(Clone, Debug)]
enum Point {
    Single(u64),
    Naturals,
    Baire(Vec<u64>, Vec<u64>),
}

impl Point {
    fn sample(rng: &mut ChaCha8Rng, which: usize) -> Point {
        match which % 3 {
            0 => Point::Single(rng.gen_range(0..40)),
            1 => Point::Naturals,
            _ => {
                let p = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..3)).collect();
                let c = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..3)).collect();
                Point::Baire(p, c)
            }
        }
    }

    fn spec(&self) -> FinGenSpec {
        match self {
            Point::Single(n) => FinGenSpec::singleton(nat(*n)),
            Point::Naturals => FinGenSpec::naturals(),
            Point::Baire(p, c) => FinGenSpec::baire_point(p.clone(), c.clone()),
        }
    }

    fn relation(&self) -> StagedRelation {
        match self {
            Point::Single(_) => equality(),
            Point::Naturals => less_than(),
            Point::Baire(..) => strict_prefix(),
        }
    }

    fn letter(&self, i: usize) -> u64 {
        match self {
            Point::Baire(p, _) if i < p.len() => p[i],
            Point::Baire(p, c) => c[(i - p.len()) % c.len()],
            _ => unreachable!(),
        }
    }

    fn contains_nat(&self, n: &Nat) -> bool {
        match self {
            Point::Single(m) => *n == nat(*m),
            Point::Naturals => true,
            Point::Baire(..) => {
                let s = seq_decode(n);
                s.iter().enumerate().all(|(i, x)| *x == nat(self.letter(i)))
            }
        }
    }

    fn contains(&self, n: u64) -> bool {
        self.contains_nat(&nat(n))
    }

    fn related(&self, a: &Nat, b: &Nat) -> bool {
        match self {
            Point::Single(_) => a == b,
            Point::Naturals => a < b,
            Point::Baire(..) => {
                let (x, y) = (seq_decode(a), seq_decode(b));
                x.len() < y.len() && y[..x.len()] == x[..]
            }
        }
    }
}

/// Agreement of `ideal` with a membership oracle on `0..bound` at `fuel`.
fn agrees(ideal: &IdealStream, oracle: impl Fn(u64) -> bool, bound: u64, fuel: u64) -> bool {
    (0..bound).all(|n| ideal.member(&nat(n), fuel).is_yes() == oracle(n))
}

fn criterion_1() -> Result<String, String> {
    for n in 0..100_000u64 {
        let (a, b) = pair_decode(&nat(n));
        let (a, b) = (a.to_u64().unwrap() as u128, b.to_u64().unwrap() as u128);
        if cantor(a, b) != n as u128 || pair_encode(&nat(a as u64), &nat(b as u64)) != nat(n) {
            return Err(format!("pairing fails at {n}"));
        }
    }
    for c in 0..1u64 << 16 {
        let elems = finset_decode(&nat(c));
        let mask = elems.iter().fold(0u64, |m, e| m | 1 << e);
        if mask != c || finset_encode(elems) != nat(c) {
            return Err(format!("finite sets fail at {c}"));
        }
    }
    let mut count = 0u64;
    let mut seen = BTreeSet::new();
    let mut todo: Vec<Vec<u64>> = vec![vec![]];
    while let Some(s) = todo.pop() {
        let code = seq_encode_u64(&s);
        let back: Vec<u64> = seq_decode(&code).iter().map(|x| x.to_u64().unwrap()).collect();
        if code != seq_code(&s) || back != s || !seen.insert(code) {
            return Err(format!("sequences fail at {s:?}"));
        }
        count += 1;
        if s.len() < 6 {
            todo.extend((0..6).map(|x| [s.clone(), vec![x]].concat()));
        }
    }
    Ok(format!("pairs < 10^5, sets < 2^16, {count} sequences"))
}

fn criterion_2() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for i in 0..200 {
        let point = Point::sample(&mut rng, i);
        let ideal = point.spec().stream();
        let members: Vec<Nat> = (0..32).filter(|n| point.contains(*n)).map(nat).collect();
        for a in &members {
            for b in &members {
                let c = basis_witness(&ideal, a, b, 256)
                    .ok_or_else(|| format!("no witness for {a}, {b} in {point:?}"))?;
                if !(point.related(a, &c) && point.related(b, &c) && point.contains_nat(&c)) {
                    return Err(format!("bad witness {c} for {a}, {b} in {point:?}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} pairs in 200 ideals"))
}

fn criterion_3() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        let point = Point::sample(&mut rng, i);
        let ideal = point.spec().stream();
        let out = apply_code(&identity_code(&point.relation()), &ideal).map_err(|e| e.to_string())?;
        if !agrees(&out, |n| point.contains(n), 64, 256) {
            return Err(format!("identity moves {point:?}"));
        }
    }
    Ok("100 samples below 64".into())
}

fn criterion_4() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100 {
        let p = Point::sample(&mut rng, i);
        let which = rng.gen_range(0..3);
        let q = Point::sample(&mut rng, which);
        let (ip, iq) = (p.spec().stream(), q.spec().stream());
        let (rp, rq) = (p.relation(), q.relation());
        let pair = pair_ideals(&ip, &iq);
        let in_pair = |n: u64| {
            let (a, b) = pair_decode(&nat(n));
            p.contains(a.to_u64().unwrap()) && q.contains(b.to_u64().unwrap())
        };
        let first = apply_code(&proj1_code(&rp, &rq), &pair).map_err(|e| e.to_string())?;
        let second = apply_code(&proj2_code(&rp, &rq), &pair).map_err(|e| e.to_string())?;
        if !agrees(&first, |n| p.contains(n), 64, 128) || !agrees(&second, |n| q.contains(n), 64, 128) {
            return Err(format!("projections of <{p:?}, {q:?}>"));
        }
        if !agrees(&pair, in_pair, 64, 128) || !agrees(&pair_ideals(&first, &second), in_pair, 64, 128) {
            return Err(format!("pairing of {p:?}, {q:?}"));
        }
    }
    Ok("100 pairs below 64".into())
}

fn criterion_5() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let elems: Vec<Nat> = (0..64u64)
        .flat_map(|mask| {
            let f: Vec<u64> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
            (0..=5).map(move |k| fk_encode(f.clone(), k))
        })
        .collect();
    let mut triples = 0u64;
    for inst in pi2_instances() {
        let rel = pi2_relation(&inst.base, &inst.code).map_err(|e| e.to_string())?;
        let size = elems.len();
        let m: Vec<bool> = elems
            .iter()
            .flat_map(|a| elems.iter().map(|b| rel.holds_at(a, b, 256)).collect::<Vec<_>>())
            .collect();
        for i in 0..size {
            for j in (0..size).filter(|j| m[i * size + j]) {
                for k in (0..size).filter(|k| m[j * size + k]) {
                    triples += 1;
                    if !m[i * size + k] {
                        return Err(format!("{}: {} ⊏ {} ⊏ {}", inst.name, elems[i], elems[j], elems[k]));
                    }
                }
            }
        }
        let space = pi2_subspace(&inst.base, &inst.code).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let x = (inst.sample)(&mut rng);
            let gx = apply_code(&space.g, &x).map_err(|e| e.to_string())?;
            let back = apply_code(&space.f, &gx).map_err(|e| e.to_string())?;
            let again = apply_code(&space.g, &back).map_err(|e| e.to_string())?;
            for n in (0..64).map(nat) {
                if back.member_at(&n, 1024) != x.member_at(&n, 1024) {
                    return Err(format!("{}: f(g({})) differs at {n}", inst.name, x.label()));
                }
                if again.member_at(&n, 1024) != gx.member_at(&n, 1024) {
                    return Err(format!("{}: g(f(g({}))) differs at {n}", inst.name, x.label()));
                }
            }
        }
    }
    Ok(format!("3 instances, {triples} composable triples, 150 round trips"))
}

fn criterion_6() -> Result<String, String> {
    let oracle: std::sync::Arc<dyn MetricOracle> = std::sync::Arc::new(RationalsOracle);
    let two = BigRational::from_integer(2.into());
    let mut checked = 0;
    for (li, limit) in [rational(1, 3), rational(-5, 6), rational(3, 2)].iter().enumerate() {
        let ideal = ideal_from_cauchy(oracle.clone(), &FastCauchy::approaching(limit.clone()));
        for (c, n) in metric_grid(li) {
            let radius = BigRational::one() / BigRational::from_integer((1u64 << n).into());
            let expect = (&c - limit).abs() < radius;
            let got = ideal.member(&ball_encode(&rational_index(&c), n), 512).is_yes();
            if got != expect {
                return Err(format!("<{c}, {n}> around {limit}: got {got}"));
            }
            checked += 1;
        }
    }
    // |7/5 - √2| < 1/4 iff (7/5 - 1/4)² < 2 < (7/5 + 1/4)²
    let q = rational(7, 5);
    let within = |r: BigRational| {
        let (lo, hi) = (&q - &r, &q + &r);
        &lo * &lo < two && two < &hi * &hi
    };
    let sqrt2 = ideal_from_cauchy(oracle, &FastCauchy::sqrt2());
    let ball = |n| ball_encode(&rational_index(&q), n);
    let expect_2 = within(rational(1, 4));
    let expect_7 = within(rational(1, 128));
    if !expect_2 || expect_7 {
        return Err("interval oracle disagrees with the stated distances".into());
    }
    if !sqrt2.member(&ball(2), 512).is_yes() || sqrt2.member(&ball(7), 4096).is_yes() {
        return Err("√2 ball tests".into());
    }
    Ok(format!("{checked} grid balls, √2 at exponents 2 and 7"))
}

/// Ideals of `=`, `<` or strict prefix among finite sets, decided directly.
fn is_ideal(set: &BTreeSet<Nat>, which: usize) -> bool {
    let below = |b: &Nat| -> Vec<Nat> {
        match which {
            0 => vec![b.clone()],
            1 => (0..b.to_u64().unwrap()).map(nat).collect(),
            _ => {
                let s: Vec<u64> = seq_decode(b).iter().map(|x| x.to_u64().unwrap()).collect();
                (0..s.len()).map(|l| seq_code(&s[..l])).collect()
            }
        }
    };
    let rel = |a: &Nat, c: &Nat| below(c).contains(a);
    let lower = set.iter().all(|b| below(b).iter().all(|a| set.contains(a)));
    let directed = set
        .iter()
        .all(|a| set.iter().all(|b| set.iter().any(|c| rel(a, c) && rel(b, c))));
    !set.is_empty() && lower && directed
}

fn criterion_7() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (which, rel) in [equality(), less_than(), strict_prefix()].into_iter().enumerate() {
        let s = s_from_relation(&rel);
        for _ in 0..100 {
            let point = Point::sample(&mut rng, which);
            let x = PointSample::ideal(&point.spec(), 24, 128);
            if !x_conditions(&s, &x, 24, 128).in_x() {
                return Err(format!("{point:?} fails (i)-(iii) over {}", rel.name()));
            }
            let y = sample_non_ideal(&mut rng, which);
            let set: BTreeSet<Nat> = y.window.iter().cloned().collect();
            if is_ideal(&set, which) {
                return Err(format!("sampler produced an ideal {}", y.label));
            }
            if x_conditions(&s, &y, 24, 128).in_x() {
                return Err(format!("{} passes (i)-(iii) over {}", y.label, rel.name()));
            }
        }
    }
    Ok("300 ideals accepted, 300 non-ideals rejected".into())
}

fn criterion_8() -> Result<String, String> {
    let catalogue = finite_catalogue();
    if catalogue.len() != 20 {
        return Err(format!("catalogue has {} spaces", catalogue.len()));
    }
    let mut objects = 0;
    for space in &catalogue {
        let n = space.size();
        let holds = |a: usize, b: usize| space.holds(a, b);
        let brute: Vec<u32> = (1u32..1 << n)
            .filter(|&set| {
                let has = |i: usize| set & (1 << i) != 0;
                let lower = (0..n).all(|b| !has(b) || (0..n).all(|a| !holds(a, b) || has(a)));
                let directed = (0..n).filter(|&a| has(a)).all(|a| {
                    (0..n)
                        .filter(|&b| has(b))
                        .all(|b| (0..n).any(|c| has(c) && holds(a, c) && holds(b, c)))
                });
                lower && directed
            })
            .collect();
        if brute != space.ideals() {
            return Err(format!("{}: ideals differ", space.name()));
        }
        let report = space.verify();
        if !report.passed() {
            return Err(format!("{}: {}", space.name(), report.failures[0]));
        }
        let bad = space.cross_check(32);
        if let Some(first) = bad.first() {
            return Err(format!("{}: {first}", space.name()));
        }
        objects += report.closed + report.compact + report.lower_ideals + report.upper_ideals;
    }
    Ok(format!("20 finite spaces, {objects} closed/compact/ideal objects"))
}

fn criterion_9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut names = Vec::new();
    for (rel, sample) in staged_relations() {
        for _ in 0..10_000 {
            let (a, b) = (sample(&mut rng), sample(&mut rng));
            let f1 = rng.gen_range(0..48u64);
            let f2 = f1 + rng.gen_range(0..48u64);
            if rel.holds(&a, &b, f1).is_yes() && !rel.holds(&a, &b, f2).is_yes() {
                return Err(format!("{}: ({a}, {b}) Yes at {f1}, Unknown at {f2}", rel.name()));
            }
        }
        names.push(rel.name().to_string());
    }
    Ok(format!("10^4 triples for each of {} relations", names.len()))
}

type Criterion = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion, u64); 9] = [
        ("encoding round trips", criterion_1, 2),
        ("basis property", criterion_2, 5),
        ("identity-code law", criterion_3, 5),
        ("product laws", criterion_4, 10),
        ("Π⁰₂ subspace", criterion_5, 30),
        ("metric characterization", criterion_6, 5),
        ("X equals the ideals", criterion_7, 10),
        ("powerspace homeomorphisms", criterion_8, 60),
        ("stage monotonicity", criterion_9, 10),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(*limit) => {
                Err(format!("{detail}; took {took:.2?}, limit {limit}s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{took:.2?} < {limit}s]", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failures == 0 {
        println!("acceptance: 9/9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
