use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Maximum number of ring variables.
pub const MAX_VARS: usize = 16;

/// Exponent vector. Lanes past the ring's variable count stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; MAX_VARS] };

    pub fn from_exponents(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::ONE;
        for (lane, &e) in m.exps.iter_mut().zip(exps) {
            *lane = u16::try_from(e).expect("exponent overflow");
        }
        m
    }

    pub fn variable(i: usize, e: u32) -> Monomial {
        let mut m = Monomial::ONE;
        m.exps[i] = u16::try_from(e).expect("exponent overflow");
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    #[inline]
    pub fn set_exp(&mut self, i: usize, e: u32) {
        self.exps[i] = u16::try_from(e).expect("exponent overflow");
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    #[inline]
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    #[inline]
    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.exps.iter().zip(weights).map(|(&e, &w)| e as u32 * w).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        out
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut out = *other;
        for (a, b) in out.exps.iter_mut().zip(self.exps.iter()) {
            *a -= b;
        }
        Some(out)
    }

    #[inline]
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = (*a).max(*b);
        }
        out
    }

    #[inline]
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Bit `i` set iff variable `i` occurs.
    #[inline]
    pub fn support_mask(&self) -> u32 {
        self.exps
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &e)| if e > 0 { acc | 1 << i } else { acc })
    }

    /// Variable index if this is a pure power x_i^e with e ≥ 1.
    pub fn pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e as u32));
            }
        }
        found
    }
}

/// Monomial orders. Graded orders use the ring's variable weights.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// x0 > x1 > … lexicographically.
    Lex,
    /// Weighted degree, ties broken reverse-lexicographically.
    DegRevLex,
    /// Block order eliminating the first `k` variables: weighted DegRevLex on
    /// the first block, ties broken by weighted DegRevLex on the rest.
    Elimination(usize),
}

fn revlex(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            // smaller exponent in the last differing variable is larger
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

fn wdeg(a: &[u16], w: &[u32]) -> u32 {
    a.iter().zip(w).map(|(&e, &w)| e as u32 * w).sum()
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial, weights: &[u32]) -> Ordering {
        match *self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::DegRevLex => {
                let n = weights.len();
                wdeg(&a.exps[..n], weights)
                    .cmp(&wdeg(&b.exps[..n], weights))
                    .then_with(|| revlex(&a.exps[..n], &b.exps[..n]))
            }
            MonomialOrder::Elimination(k) => {
                let n = weights.len();
                let k = k.min(n);
                wdeg(&a.exps[..k], &weights[..k])
                    .cmp(&wdeg(&b.exps[..k], &weights[..k]))
                    .then_with(|| revlex(&a.exps[..k], &b.exps[..k]))
                    .then_with(|| wdeg(&a.exps[k..n], &weights[k..]).cmp(&wdeg(&b.exps[k..n], &weights[k..])))
                    .then_with(|| revlex(&a.exps[k..n], &b.exps[k..n]))
            }
        }
    }

    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::DegRevLex)
    }
}
