//! Bit-packed polynomials over F₂.
//!
//! A polynomial is a `u128` (a pair of them for products) whose bit `i` is the
//! coefficient of `x^i`. Everything here is branch-light shift-and-xor code.

use std::collections::BTreeMap;
use std::sync::Mutex;

/// Largest supported extension degree. A modulus must fit in a `u128`.
pub const MAX_DEGREE: u32 = 127;

/// Fixed moduli for F_{2^k}, k = 1..=32: the lexicographically least
/// irreducible polynomial of degree k with nonzero constant term.
/// Degrees above 32 follow the same rule and are computed on first use.
pub const MODULUS_TABLE: [u64; 32] = [
    0x3,
    0x7,
    0xb,
    0x13,
    0x25,
    0x43,
    0x83,
    0x11b,
    0x203,
    0x409,
    0x805,
    0x1009,
    0x201b,
    0x4021,
    0x8003,
    0x1002b,
    0x20009,
    0x40009,
    0x80027,
    0x100009,
    0x200005,
    0x400003,
    0x800021,
    0x100001b,
    0x2000009,
    0x400001b,
    0x8000027,
    0x10000003,
    0x20000005,
    0x40000003,
    0x80000009,
    0x10000008d,
];

#[inline]
pub fn degree(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

#[inline]
fn clmul64(a: u64, b: u64) -> u128 {
    let (a, mut b) = if a.count_ones() < b.count_ones() { (b, a) } else { (a, b) };
    let wide = a as u128;
    let mut acc: u128 = 0;
    while b != 0 {
        acc ^= wide << b.trailing_zeros();
        b &= b - 1;
    }
    acc
}

/// Carry-less product as `(high, low)` halves of a 256-bit result.
#[inline]
pub fn clmul(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64, (a >> 64) as u64);
    let (b0, b1) = (b as u64, (b >> 64) as u64);
    let lo = clmul64(a0, b0);
    if a1 == 0 && b1 == 0 {
        return (0, lo);
    }
    let mid = clmul64(a0, b1) ^ clmul64(a1, b0);
    let hi = clmul64(a1, b1);
    (hi ^ (mid >> 64), lo ^ (mid << 64))
}

/// Reduce a 256-bit product modulo `modulus` of degree `k`.
#[inline]
pub fn reduce(mut hi: u128, mut lo: u128, modulus: u128, k: u32) -> u128 {
    while hi != 0 {
        // k <= 127 < bit index, so the shift is positive
        let s = 128 + degree(hi) as u32 - k;
        if s >= 128 {
            hi ^= modulus << (s - 128);
        } else {
            hi ^= modulus >> (128 - s);
            lo ^= modulus << s;
        }
    }
    while degree(lo) >= k as i32 {
        lo ^= modulus << (degree(lo) as u32 - k);
    }
    lo
}

#[inline]
pub fn mulmod(a: u128, b: u128, modulus: u128, k: u32) -> u128 {
    let (hi, lo) = clmul(a, b);
    reduce(hi, lo, modulus, k)
}

pub fn powmod(mut base: u128, mut exp: u128, modulus: u128, k: u32) -> u128 {
    let mut acc = 1u128;
    if k == 0 {
        return 0;
    }
    base = reduce(0, base, modulus, k);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, modulus, k);
        }
        base = mulmod(base, base, modulus, k);
        exp >>= 1;
    }
    acc
}

/// Remainder of general F₂[x] division.
pub fn rem(mut a: u128, b: u128) -> u128 {
    assert!(b != 0, "division by the zero polynomial");
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Inverse of `a` modulo `modulus` by the extended Euclidean algorithm.
pub fn invmod(a: u128, modulus: u128) -> Option<u128> {
    if a == 0 {
        return None;
    }
    // Invariants: s_i * a ≡ r_i (mod modulus), deg s_i < deg modulus.
    let (mut r0, mut r1) = (modulus, rem(a, modulus));
    let (mut s0, mut s1) = (0u128, 1u128);
    while r1 != 0 {
        let mut q = 0u128;
        let mut r = r0;
        let d1 = degree(r1);
        while r != 0 && degree(r) >= d1 {
            let sh = (degree(r) - d1) as u32;
            q ^= 1u128 << sh;
            r ^= r1 << sh;
        }
        let s = s0 ^ clmul(q, s1).1;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0 != 1 {
        return None;
    }
    Some(rem(s0, modulus))
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// x^(2^e) mod m.
fn frobenius_x(m: u128, k: u32, e: u32) -> u128 {
    let mut r = reduce(0, 2, m, k);
    for _ in 0..e {
        r = mulmod(r, r, m, k);
    }
    r
}

/// Rabin's irreducibility test for a polynomial of degree `k`.
pub fn is_irreducible(m: u128) -> bool {
    let k = degree(m);
    if k < 1 || k as u32 > MAX_DEGREE {
        return false;
    }
    let k = k as u32;
    if k == 1 {
        return true;
    }
    let x = reduce(0, 2, m, k);
    if frobenius_x(m, k, k) != x {
        return false;
    }
    prime_divisors(k)
        .into_iter()
        .all(|q| gcd(m, frobenius_x(m, k, k / q) ^ x) == 1)
}

fn least_irreducible(k: u32) -> u128 {
    let mut c = (1u128 << k) | 1;
    loop {
        if is_irreducible(c) {
            return c;
        }
        c += 2;
    }
}

/// The fixed modulus for F_{2^k}.
pub fn fixed_modulus(k: u32) -> u128 {
    assert!((1..=MAX_DEGREE).contains(&k), "extension degree {k} out of range");
    if k <= 32 {
        return MODULUS_TABLE[k as usize - 1] as u128;
    }
    static EXTRA: Mutex<BTreeMap<u32, u128>> = Mutex::new(BTreeMap::new());
    if let Some(&m) = EXTRA.lock().expect("modulus cache").get(&k) {
        return m;
    }
    let m = least_irreducible(k);
    EXTRA.lock().expect("modulus cache").insert(k, m);
    m
}
