//! Bit-exact codes for pairs, finite sets and finite sequences of naturals.
//!
//! * pairs use the Cantor pairing `<a,b> = (a+b)(a+b+1)/2 + b`;
//! * a finite set `F` is the bitmask `sum of 2^n for n in F`;
//! * the empty sequence is `0` and `x::rest` is `<x, code(rest)> + 1`.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Nat;

/// Largest element a finite-set code may contain. A set holding this element
/// already needs a 2 MiB bitmask.
pub const MAX_FINSET_ELEMENT: u64 = (1 << 24) - 1;

pub fn nat(n: u64) -> Nat {
    BigUint::from(n)
}

pub fn pair_encode(a: &Nat, b: &Nat) -> Nat {
    let s: Nat = a + b;
    let t: Nat = &s * (&s + 1u32) >> 1;
    t + b
}

pub fn pair_decode(n: &Nat) -> (Nat, Nat) {
    if let Some(small) = n.to_u64() {
        let (a, b) = pair_decode_u64(small);
        return (nat(a), nat(b));
    }
    // w = floor((sqrt(8n+1) - 1) / 2), the diagonal index.
    let disc: Nat = (n << 3) + 1u32;
    let root = disc.sqrt();
    let mut w: Nat = (root - 1u32) >> 1;
    // guard against any off-by-one from the integer square root
    while triangle(&(&w + 1u32)) <= *n {
        w += 1u32;
    }
    while triangle(&w) > *n {
        w -= 1u32;
    }
    let b: Nat = n - triangle(&w);
    let a: Nat = &w - &b;
    (a, b)
}

fn triangle(w: &Nat) -> Nat {
    (w * (w + 1u32)) >> 1
}

pub fn pair_encode_u64(a: u64, b: u64) -> Nat {
    pair_encode(&nat(a), &nat(b))
}

/// Pair decoding for indices known to fit in a machine word.
pub fn pair_decode_u64(n: u64) -> (u64, u64) {
    let w = (((8u128 * n as u128 + 1).sqrt() - 1) / 2) as u64;
    let mut w = w;
    while tri64(w + 1) <= n as u128 {
        w += 1;
    }
    while tri64(w) > n as u128 {
        w -= 1;
    }
    let b = (n as u128 - tri64(w)) as u64;
    (w - b, b)
}

fn tri64(w: u64) -> u128 {
    let w = w as u128;
    w * (w + 1) / 2
}

/// Triple code `<n, <m, k>>`.
pub fn triple_encode(n: &Nat, m: &Nat, k: &Nat) -> Nat {
    pair_encode(n, &pair_encode(m, k))
}

pub fn triple_decode(code: &Nat) -> (Nat, Nat, Nat) {
    let (n, rest) = pair_decode(code);
    let (m, k) = pair_decode(&rest);
    (n, m, k)
}

pub fn finset_encode<I: IntoIterator<Item = u64>>(elements: I) -> Nat {
    let mut code = BigUint::zero();
    for e in elements {
        code.set_bit(e, true);
    }
    code
}

/// Encodes a set given as naturals, rejecting elements past [`MAX_FINSET_ELEMENT`].
pub fn finset_encode_nats<'a, I: IntoIterator<Item = &'a Nat>>(elements: I) -> Result<Nat> {
    let mut code = BigUint::zero();
    for e in elements {
        let bit = element_index(e)?;
        code.set_bit(bit, true);
    }
    Ok(code)
}

fn element_index(e: &Nat) -> Result<u64> {
    match e.to_u64() {
        Some(v) if v <= MAX_FINSET_ELEMENT => Ok(v),
        _ => Err(Error::ElementTooLarge(e.to_string())),
    }
}

/// Elements of the set coded by `code`, ascending.
pub fn finset_decode(code: &Nat) -> Vec<u64> {
    let mut out = Vec::with_capacity(code.count_ones() as usize);
    for (word_index, word) in code.iter_u64_digits().enumerate() {
        let mut w = word;
        while w != 0 {
            let tz = w.trailing_zeros() as u64;
            out.push(word_index as u64 * 64 + tz);
            w &= w - 1;
        }
    }
    out
}

pub fn finset_decode_nats(code: &Nat) -> Vec<Nat> {
    finset_decode(code).into_iter().map(nat).collect()
}

pub fn finset_contains(code: &Nat, n: &Nat) -> bool {
    match n.to_u64() {
        Some(bit) => code.bit(bit),
        None => false,
    }
}

pub fn finset_len(code: &Nat) -> u64 {
    code.count_ones()
}

/// `F ⊆ G` on codes: every bit of `f` is set in `g`.
pub fn finset_subset(f: &Nat, g: &Nat) -> bool {
    (f & g) == *f
}

pub fn seq_encode(seq: &[Nat]) -> Nat {
    let mut code = BigUint::zero();
    for x in seq.iter().rev() {
        code = pair_encode(x, &code) + 1u32;
    }
    code
}

pub fn seq_encode_u64(seq: &[u64]) -> Nat {
    let v: Vec<Nat> = seq.iter().copied().map(nat).collect();
    seq_encode(&v)
}

pub fn seq_decode(code: &Nat) -> Vec<Nat> {
    let mut out = Vec::new();
    let mut cur = code.clone();
    while !cur.is_zero() {
        let (head, rest) = pair_decode(&(cur - BigUint::one()));
        out.push(head);
        cur = rest;
    }
    out
}

/// `a` codes a strict prefix of the sequence coded by `b`.
pub fn seq_strict_prefix(a: &Nat, b: &Nat) -> bool {
    // codes of strict prefixes are strictly smaller, so walk b down
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        if a >= b {
            return false;
        }
        if a.is_zero() {
            return true;
        }
        let (ha, ra) = pair_decode(&(a - BigUint::one()));
        let (hb, rb) = pair_decode(&(b - BigUint::one()));
        if ha != hb {
            return false;
        }
        a = ra;
        b = rb;
    }
}

/// Codes of all strict prefixes of the sequence coded by `b`, shortest first.
pub fn seq_strict_prefixes(b: &Nat) -> Vec<Nat> {
    let items = seq_decode(b);
    (0..items.len()).map(|len| seq_encode(&items[..len])).collect()
}
