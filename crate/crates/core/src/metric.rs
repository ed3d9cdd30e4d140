//! Completions of separable metric spaces as spaces of formal balls.
//!
//! A ball is a pair code `<i, n>`: centre `α(i)`, radius `2^-n`. All
//! comparisons use exact rationals.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::encoding::{nat, pair_decode, pair_encode};
use crate::ideal::{chain_from_ideal, ideal_from_chain, Chain, IdealStream};
use crate::relation::StagedRelation;
use crate::Nat;

/// Radius exponents above this are treated as unrelated by the ball relation.
pub const MAX_RADIUS_EXPONENT: u64 = 1 << 20;

/// A metric presentation: dense points `α(i)` and a c.e. set of facts
/// `q < d(α(i), α(j)) < r`, split into its lower and upper halves.
pub trait MetricOracle: Send + Sync {
    fn name(&self) -> String;

    /// `None` for countably many points.
    fn point_count(&self) -> Option<u64>;

    /// `d(α(i), α(j)) < r` established by stage `s`.
    fn distance_below(&self, i: &Nat, j: &Nat, r: &BigRational, s: u64) -> bool;

    /// `q < d(α(i), α(j))` established by stage `s`.
    fn distance_above(&self, i: &Nat, j: &Nat, q: &BigRational, s: u64) -> bool;

    /// Facts do not depend on the stage.
    fn is_exact(&self) -> bool {
        false
    }

    fn fact_at(&self, q: &BigRational, r: &BigRational, i: &Nat, j: &Nat, s: u64) -> bool {
        self.distance_above(i, j, q, s) && self.distance_below(i, j, r, s)
    }

    fn is_point(&self, i: &Nat) -> bool {
        match self.point_count() {
            None => true,
            Some(count) => i.to_u64().is_some_and(|i| i < count),
        }
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^-n`.
pub fn dyadic(n: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << n as usize)
}

fn zigzag(z: &BigInt) -> Nat {
    let m = z.magnitude().clone();
    if z.sign() == Sign::Minus {
        (m << 1) - 1u32
    } else {
        m << 1
    }
}

fn unzigzag(n: &Nat) -> BigInt {
    let half = BigInt::from(n >> 1);
    if n.bit(0) {
        -half - 1
    } else {
        half
    }
}

/// Point `i` of the rationals: `<z, d>` names `z'/(d+1)` where `z'` is `z`
/// read through the zigzag order `0, -1, 1, -2, ...`. Every rational has
/// many indices.
pub fn rational_at(index: &Nat) -> BigRational {
    let (z, d) = pair_decode(index);
    BigRational::new(unzigzag(&z), BigInt::from(d) + 1)
}

/// The index of `q` in lowest terms.
pub fn rational_index(q: &BigRational) -> Nat {
    let den = q.denom().magnitude() - 1u32;
    pair_encode(&zigzag(q.numer()), &den)
}

/// `ℚ` with its exact metric; facts are decided outright.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalsOracle;

impl MetricOracle for RationalsOracle {
    fn name(&self) -> String {
        "rationals".into()
    }

    fn point_count(&self) -> Option<u64> {
        None
    }

    fn distance_below(&self, i: &Nat, j: &Nat, r: &BigRational, _: u64) -> bool {
        (rational_at(i) - rational_at(j)).abs() < *r
    }

    fn distance_above(&self, i: &Nat, j: &Nat, q: &BigRational, _: u64) -> bool {
        *q < (rational_at(i) - rational_at(j)).abs()
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// A real given exactly or as a square root.
#[derive(Clone, Debug, PartialEq)]
pub enum RealPoint {
    Rational(BigRational),
    /// `√q` for `q >= 0`.
    Sqrt(BigRational),
}

impl RealPoint {
    /// A rational enclosure of width at most `2^-s`; enclosures at later
    /// stages are nested inside earlier ones.
    pub fn enclosure(&self, s: u64) -> (BigRational, BigRational) {
        match self {
            RealPoint::Rational(q) => (q.clone(), q.clone()),
            RealPoint::Sqrt(q) => sqrt_enclosure(q, s),
        }
    }
}

/// `[⌊√q·2^s⌋ / 2^s, (⌊√q·2^s⌋ + 1) / 2^s]`.
pub fn sqrt_enclosure(q: &BigRational, s: u64) -> (BigRational, BigRational) {
    let scale = BigInt::one() << (2 * s) as usize;
    let scaled = (q.numer() * &scale) / q.denom();
    let root = if scaled.sign() == Sign::Minus {
        BigInt::zero()
    } else {
        scaled.sqrt()
    };
    let den = BigInt::one() << s as usize;
    (
        BigRational::new(root.clone(), den.clone()),
        BigRational::new(root + 1, den),
    )
}

/// Finitely many real points whose distances are learnt from nested
/// interval enclosures: stage `s` sees width `2^-s`.
#[derive(Clone, Debug)]
pub struct IntervalOracle {
    points: Vec<RealPoint>,
}

impl IntervalOracle {
    pub fn new(points: Vec<RealPoint>) -> Self {
        IntervalOracle { points }
    }

    pub fn points(&self) -> &[RealPoint] {
        &self.points
    }

    fn point(&self, i: &Nat) -> Option<&RealPoint> {
        i.to_usize().and_then(|i| self.points.get(i))
    }

    /// Enclosure of `|α(i) - α(j)|` at stage `s`.
    pub fn distance_enclosure(&self, i: &Nat, j: &Nat, s: u64) -> Option<(BigRational, BigRational)> {
        let (x, y) = (self.point(i)?, self.point(j)?);
        if i == j {
            return Some((BigRational::zero(), BigRational::zero()));
        }
        let (xl, xh) = x.enclosure(s);
        let (yl, yh) = y.enclosure(s);
        let lo = &xl - &yh;
        let hi = &xh - &yl;
        let upper = lo.abs().max(hi.abs());
        let lower = if lo.is_positive() {
            lo
        } else if hi.is_negative() {
            -hi
        } else {
            BigRational::zero()
        };
        Some((lower, upper))
    }
}

impl MetricOracle for IntervalOracle {
    fn name(&self) -> String {
        format!("intervals({})", self.points.len())
    }

    fn point_count(&self) -> Option<u64> {
        Some(self.points.len() as u64)
    }

    fn distance_below(&self, i: &Nat, j: &Nat, r: &BigRational, s: u64) -> bool {
        self.distance_enclosure(i, j, s).is_some_and(|(_, hi)| hi < *r)
    }

    fn distance_above(&self, i: &Nat, j: &Nat, q: &BigRational, s: u64) -> bool {
        self.distance_enclosure(i, j, s).is_some_and(|(lo, _)| *q < lo)
    }

    fn is_exact(&self) -> bool {
        self.points.iter().all(|p| matches!(p, RealPoint::Rational(_)))
    }
}

pub fn ball_encode(center: &Nat, exponent: u64) -> Nat {
    pair_encode(center, &nat(exponent))
}

/// `(centre, exponent)`, or `None` for an exponent past [`MAX_RADIUS_EXPONENT`].
pub fn ball_decode(code: &Nat) -> Option<(Nat, u64)> {
    let (i, n) = pair_decode(code);
    let n = n.to_u64().filter(|n| *n <= MAX_RADIUS_EXPONENT)?;
    Some((i, n))
}

/// `<x,n> ≺ <y,m>` iff `d(x,y) < 2^-n - 2^-m`.
pub fn ball_relation(oracle: Arc<dyn MetricOracle>) -> StagedRelation {
    let exact = oracle.is_exact();
    let rel = StagedRelation::new(format!("balls({})", oracle.name()), move |x, y, s| {
        let (Some((i, n)), Some((j, m))) = (ball_decode(x), ball_decode(y)) else {
            return false;
        };
        if n >= m || !oracle.is_point(&i) || !oracle.is_point(&j) {
            return false;
        }
        let r = dyadic(n) - dyadic(m);
        oracle.distance_below(&i, &j, &r, s)
    });
    if exact {
        rel.decidable()
    } else {
        rel
    }
}

type SeqFn = dyn Fn(u64) -> Nat + Send + Sync;

/// A sequence of point indices with `d(x_i, x_{i+1}) < 2^-(i+1)`.
#[derive(Clone)]
pub struct FastCauchy {
    label: Arc<str>,
    seq: Arc<SeqFn>,
    memo: Arc<Mutex<Vec<Nat>>>,
}

impl fmt::Debug for FastCauchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FastCauchy({})", self.label)
    }
}

impl FastCauchy {
    pub fn new<F>(label: impl Into<String>, seq: F) -> Self
    where
        F: Fn(u64) -> Nat + Send + Sync + 'static,
    {
        FastCauchy {
            label: Arc::from(label.into()),
            seq: Arc::new(seq),
            memo: Arc::new(Mutex::new(Vec::new())),
        }
    }

    pub fn constant(index: Nat) -> Self {
        FastCauchy::new(format!("const({index})"), move |_| index.clone())
    }

    /// `q + 2^-(i+3)` over the rationals: converges to `q` from above.
    pub fn approaching(q: BigRational) -> Self {
        let label = format!("approach({q})");
        FastCauchy::new(label, move |i| rational_index(&(&q + dyadic(i + 3))))
    }

    /// Pell convergents of `√2` over the rationals: slot `i` takes the first
    /// `p/q` with `q(p+q) > 2^(i+2)`, so its error is below `2^-(i+2)`.
    pub fn sqrt2() -> Self {
        FastCauchy::new("sqrt2", |i| {
            let (mut p, mut q) = (BigInt::one(), BigInt::one());
            let target = BigInt::one() << (i + 2) as usize;
            while &q * (&p + &q) <= target {
                let next_p = &p + &q * 2;
                q = &p + &q;
                p = next_p;
            }
            rational_index(&BigRational::new(p, q))
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn at(&self, i: u64) -> Nat {
        let mut memo = self.memo.lock().expect("sequence memo poisoned");
        while memo.len() as u64 <= i {
            let next = (self.seq)(memo.len() as u64);
            memo.push(next);
        }
        memo[i as usize].clone()
    }

    /// First `i < upto` whose promise `d(x_i, x_{i+1}) < 2^-(i+1)` is not
    /// witnessed by stage `fuel`.
    pub fn promise_violation(&self, oracle: &dyn MetricOracle, upto: u64, fuel: u64) -> Option<u64> {
        (0..upto).find(|&i| {
            !oracle.distance_below(&self.at(i), &self.at(i + 1), &dyadic(i + 1), fuel)
        })
    }
}

/// The ideal generated by the chain `<x_i, i>`.
pub fn ideal_from_cauchy(oracle: Arc<dyn MetricOracle>, seq: &FastCauchy) -> IdealStream {
    let rel = ball_relation(oracle);
    let s = seq.clone();
    let chain = Chain::memoized(rel, format!("balls({})", seq.label()), move |i| {
        ball_encode(&s.at(i), i)
    });
    ideal_from_chain(&chain)
}

/// A fast Cauchy sequence converging to the point of `I`: slot `i` is the
/// centre of the first chain ball with exponent at least `i + 2`.
pub fn cauchy_from_ideal(ideal: &IdealStream) -> FastCauchy {
    let chain = chain_from_ideal(ideal);
    let cursor = Arc::new(Mutex::new(0u64));
    FastCauchy::new(format!("cauchy({})", ideal.label()), move |i| {
        let mut k = cursor.lock().expect("cursor poisoned");
        loop {
            let (centre, n) = ball_decode(&chain.elem(*k)).expect("chain balls decode");
            if n >= i + 2 {
                return centre;
            }
            *k += 1;
        }
    })
}

/// Exponents of the first `len` balls of [`chain_from_ideal`].
pub fn chain_exponents(ideal: &IdealStream, len: u64) -> Vec<u64> {
    let chain = chain_from_ideal(ideal);
    (0..len)
        .map(|k| ball_decode(&chain.elem(k)).map_or(u64::MAX, |(_, n)| n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::equal_below;

    fn q(a: i64, b: i64) -> BigRational {
        rational(a, b)
    }

    fn ball(x: BigRational, n: u64) -> Nat {
        ball_encode(&rational_index(&x), n)
    }

    fn rationals() -> Arc<dyn MetricOracle> {
        Arc::new(RationalsOracle)
    }

    #[test]
    fn rational_indexing_examples() {
        let firsts: Vec<BigRational> = (0..6u64).map(|i| rational_at(&nat(i))).collect();
        assert_eq!(firsts, vec![q(0, 1), q(-1, 1), q(0, 2), q(1, 1), q(-1, 2), q(0, 3)]);
        for num in -40..=40 {
            for den in 1..=40 {
                let x = q(num, den);
                assert_eq!(rational_at(&rational_index(&x)), x);
            }
        }
        for idx in 0..3000u64 {
            let x = rational_at(&nat(idx));
            assert!(rational_index(&x) <= nat(idx));
        }
    }

    #[test]
    fn ball_relation_examples() {
        let rel = ball_relation(rationals());
        assert!(rel.holds_at(&ball(q(0, 1), 1), &ball(q(1, 4), 3), 0));
        assert!(rel.holds_at(&ball(q(0, 1), 1), &ball(q(0, 1), 2), 0));
        let b = ball(q(1, 2), 3);
        assert!(!rel.holds_at(&b, &b, 0));
        assert!(!rel.holds_at(&ball(q(0, 1), 1), &ball(q(1, 2), 3), 0));
    }

    #[test]
    fn rationals_oracle_facts() {
        let o = RationalsOracle;
        let half = rational_index(&q(1, 2));
        assert!(o.fact_at(&q(-1, 1), &q(1, 100), &half, &half, 0));
        assert!(!o.distance_above(&half, &half, &q(0, 1), 0));
        let (zero, third) = (rational_index(&q(0, 1)), rational_index(&q(1, 3)));
        assert!(o.fact_at(&q(1, 4), &q(1, 2), &zero, &third, 0));
        assert!(o.fact_at(&q(1, 4), &q(1, 2), &third, &zero, 0));
    }

    #[test]
    fn sqrt_enclosures_are_nested() {
        let two = q(2, 1);
        let mut prev = sqrt_enclosure(&two, 0);
        for s in 1..60 {
            let cur = sqrt_enclosure(&two, s);
            assert!(prev.0 <= cur.0 && cur.1 <= prev.1);
            assert!(&cur.0 * &cur.0 <= two && two < &cur.1 * &cur.1);
            prev = cur;
        }
    }

    #[test]
    fn interval_oracle_is_monotone() {
        let o = IntervalOracle::new(vec![
            RealPoint::Sqrt(q(2, 1)),
            RealPoint::Rational(q(7, 5)),
            RealPoint::Rational(q(3, 2)),
        ]);
        let (a, b) = (nat(0), nat(1));
        let r = q(3, 200);
        let first = (0..64).find(|s| o.distance_below(&a, &b, &r, *s)).unwrap();
        assert!(first > 0);
        assert!((first..80).all(|s| o.distance_below(&a, &b, &r, s)));
        assert!(!o.distance_above(&a, &a, &q(0, 1), 50));
    }

    #[test]
    fn sqrt2_ideal_examples() {
        let seq = FastCauchy::sqrt2();
        assert_eq!(seq.promise_violation(&RationalsOracle, 16, 0), None);
        let sqrt2 = ideal_from_cauchy(rationals(), &seq);
        assert!(sqrt2.member(&ball(q(7, 5), 2), 64).is_yes());
        assert!(!sqrt2.member(&ball(q(7, 5), 7), 512).is_yes());
    }

    #[test]
    fn constant_ideal_membership() {
        let centre = q(1, 3);
        let ideal = ideal_from_cauchy(rationals(), &FastCauchy::constant(rational_index(&centre)));
        for (num, den, n) in [(1, 3, 0), (1, 2, 2), (1, 2, 3), (0, 1, 1), (0, 1, 2), (3, 8, 4)] {
            let x = q(num, den);
            let expect = (&x - &centre).abs() < dyadic(n);
            assert_eq!(ideal.member_at(&ball(x, n), 96), expect, "{num}/{den} at {n}");
        }
    }

    #[test]
    fn cauchy_round_trip() {
        let seq = FastCauchy::approaching(q(1, 4));
        let ideal = ideal_from_cauchy(rationals(), &seq);
        let exps = chain_exponents(&ideal, 8);
        assert!(exps.windows(2).all(|w| w[0] < w[1]), "{exps:?}");
        let back = cauchy_from_ideal(&ideal);
        assert_eq!(back.promise_violation(&RationalsOracle, 16, 0), None);
        let again = ideal_from_cauchy(rationals(), &back);
        assert!(equal_below(&ideal, &again, 200, 128));
    }
}
