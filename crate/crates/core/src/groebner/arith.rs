//! Coefficient arithmetic used inside the Buchberger engine.
//!
//! Finite fields run on plain `u64` residues. ℚ runs fraction-free on
//! integers: reductions are pseudo-reductions followed by content stripping.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::polyring::{Field, Monomial, MonomialOrder, Polynomial, Scalar};

pub(crate) type ITerm<C> = (Monomial, C);
/// Terms sorted by decreasing monomial order; leading term first.
pub(crate) type IPoly<C> = Vec<ITerm<C>>;

pub(crate) trait Arith: Sync {
    type C: Clone + PartialEq + Debug + Send + Sync;

    fn is_zero(&self, c: &Self::C) -> bool;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    /// a − b
    fn sub(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn neg(&self, a: &Self::C) -> Self::C;

    /// Scalars `(a, b)` with `a·lc_f − b·lc_g = 0`; `a = None` means 1.
    fn elimination_factors(&self, lc_f: &Self::C, lc_g: &Self::C) -> (Option<Self::C>, Self::C);

    /// Scale to a canonical representative (monic, or primitive with positive
    /// leading coefficient). Returns the factor the polynomial was multiplied by
    /// as a rational number.
    fn normalize(&self, p: &mut IPoly<Self::C>) -> BigRational;

    /// Content stripping hook for long reductions. Returns the factor applied.
    fn strip(&self, _f: &mut IPoly<Self::C>, _rem: &mut IPoly<Self::C>) -> BigRational {
        BigRational::one()
    }

    /// Integer scalars as rationals; only the fraction-free arithmetic needs it.
    fn to_rational(&self, _a: &Self::C) -> BigRational {
        BigRational::one()
    }

    fn scale(&self, p: &mut IPoly<Self::C>, a: &Self::C) {
        for (_, c) in p.iter_mut() {
            *c = self.mul(c, a);
        }
    }
}

/// F_p or F_{2^k} on raw residues.
#[derive(Clone, Copy, Debug)]
pub(crate) struct FiniteArith {
    pub field: Field,
}

impl Arith for FiniteArith {
    type C = u128;

    #[inline]
    fn is_zero(&self, c: &u128) -> bool {
        *c == 0
    }

    #[inline]
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        match self.field {
            Field::Prime(p) => (*a as u64 * *b as u64 % p) as u128,
            Field::Binary(bf) => bf.mul(*a, *b),
            Field::Rationals => unreachable!(),
        }
    }

    #[inline]
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        match self.field {
            Field::Prime(p) => ((*a as u64 + p - *b as u64) % p) as u128,
            Field::Binary(_) => a ^ b,
            Field::Rationals => unreachable!(),
        }
    }

    #[inline]
    fn neg(&self, a: &u128) -> u128 {
        match self.field {
            Field::Prime(p) if *a != 0 => (p - *a as u64) as u128,
            _ => *a,
        }
    }

    fn elimination_factors(&self, lc_f: &u128, lc_g: &u128) -> (Option<u128>, u128) {
        if *lc_g == 1 {
            return (None, *lc_f);
        }
        let inv = self.field.inv(&Scalar::Small(*lc_g)).expect("nonzero").small();
        (None, self.mul(lc_f, &inv))
    }

    fn normalize(&self, p: &mut IPoly<u128>) -> BigRational {
        if let Some((_, lc)) = p.first() {
            if *lc != 1 {
                let inv = self.field.inv(&Scalar::Small(*lc)).expect("nonzero").small();
                self.scale(p, &inv);
            }
        }
        // the factor is only meaningful over ℚ
        BigRational::one()
    }
}

/// ℚ, represented fraction-free by integer polynomials.
#[derive(Clone, Copy, Debug)]
pub(crate) struct IntArith;

fn content(p: &IPoly<BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

impl Arith for IntArith {
    type C = BigInt;

    fn is_zero(&self, c: &BigInt) -> bool {
        c.is_zero()
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn to_rational(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }

    fn elimination_factors(&self, lc_f: &BigInt, lc_g: &BigInt) -> (Option<BigInt>, BigInt) {
        let d = lc_f.gcd(lc_g);
        let a = lc_g / &d;
        let b = lc_f / &d;
        if a.is_one() {
            (None, b)
        } else {
            (Some(a), b)
        }
    }

    fn normalize(&self, p: &mut IPoly<BigInt>) -> BigRational {
        if p.is_empty() {
            return BigRational::one();
        }
        let mut g = content(p);
        if p[0].1.is_negative() {
            g = -g;
        }
        if g.is_one() {
            return BigRational::one();
        }
        for (_, c) in p.iter_mut() {
            *c = &*c / &g;
        }
        BigRational::new(BigInt::one(), g)
    }

    fn strip(&self, f: &mut IPoly<BigInt>, rem: &mut IPoly<BigInt>) -> BigRational {
        let g = content(f).gcd(&content(rem));
        if g.is_zero() || g.is_one() {
            return BigRational::one();
        }
        for (_, c) in f.iter_mut().chain(rem.iter_mut()) {
            *c = &*c / &g;
        }
        BigRational::new(BigInt::one(), g)
    }
}

pub(crate) fn sort_desc<C>(p: &mut IPoly<C>, order: MonomialOrder, weights: &[u32]) {
    p.sort_by(|a, b| order.cmp(&b.0, &a.0, weights));
}

pub(crate) fn to_finite(p: &Polynomial, order: MonomialOrder) -> IPoly<u128> {
    let mut out: IPoly<u128> = p.terms().iter().map(|(m, c)| (*m, c.small())).collect();
    sort_desc(&mut out, order, p.ring().weights());
    out
}

/// Integer multiple of `p` with coprime coefficients.
pub(crate) fn to_integer(p: &Polynomial, order: MonomialOrder) -> (IPoly<BigInt>, BigRational) {
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        den = den.lcm(c.rational().denom());
    }
    let mut out: IPoly<BigInt> = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let q = c.rational();
            (*m, q.numer() * (&den / q.denom()))
        })
        .collect();
    sort_desc(&mut out, order, p.ring().weights());
    let g = content(&out);
    if !g.is_zero() && !g.is_one() {
        for (_, c) in out.iter_mut() {
            *c = &*c / &g;
        }
    }
    (out, BigRational::new(den, if g.is_zero() { BigInt::one() } else { g }))
}

/// Merge `f − b·q·g`, where `q` multiplies every monomial of `g`.
pub(crate) fn sub_mul<A: Arith>(
    arith: &A,
    f: &[ITerm<A::C>],
    b: &A::C,
    q: &Monomial,
    g: &[ITerm<A::C>],
    order: MonomialOrder,
    weights: &[u32],
) -> IPoly<A::C> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut i = 0;
    for (m, c) in g {
        let gm = m.mul(q);
        let gc = arith.mul(c, b);
        while i < f.len() && order.cmp(&f[i].0, &gm, weights) == Ordering::Greater {
            out.push(f[i].clone());
            i += 1;
        }
        if i < f.len() && f[i].0 == gm {
            let c = arith.sub(&f[i].1, &gc);
            if !arith.is_zero(&c) {
                out.push((gm, c));
            }
            i += 1;
        } else {
            out.push((gm, arith.neg(&gc)));
        }
    }
    out.extend(f[i..].iter().cloned());
    out
}
