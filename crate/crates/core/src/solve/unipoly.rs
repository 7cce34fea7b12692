//! Dense univariate polynomials over F_{2^k} and their factorization.

use std::fmt;

use crate::polyring::{format_binary, BinaryField};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly {
    field: BinaryField,
    coeffs: Vec<u128>,
}

impl UniPoly {
    pub fn new(field: BinaryField, mut coeffs: Vec<u128>) -> UniPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: BinaryField) -> UniPoly {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: BinaryField) -> UniPoly {
        UniPoly { field, coeffs: vec![1] }
    }

    /// x + c
    pub fn linear(field: BinaryField, c: u128) -> UniPoly {
        UniPoly { field, coeffs: vec![c, 1] }
    }

    pub fn x(field: BinaryField) -> UniPoly {
        UniPoly::linear(field, 0)
    }

    pub fn field(&self) -> BinaryField {
        self.field
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial has degree `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().expect("nonzero polynomial")
    }

    pub fn leading(&self) -> u128 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&0) ^ other.coeffs.get(i).unwrap_or(&0))
            .collect();
        UniPoly::new(self.field, c)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut c = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] ^= self.field.mul(a, b);
            }
        }
        UniPoly::new(self.field, c)
    }

    pub fn scale(&self, s: u128) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.iter().map(|&c| self.field.mul(c, s)).collect())
    }

    pub fn monic(&self) -> UniPoly {
        match self.field.inv(self.leading()) {
            Some(inv) if inv != 1 => self.scale(inv),
            _ => self.clone(),
        }
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.deg();
        let inv = self.field.inv(d.leading()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(self.field), self.clone());
        }
        let mut q = vec![0u128; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let t = self.field.mul(c, inv);
            q[i - dd] = t;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] ^= self.field.mul(t, dc);
            }
        }
        r.truncate(dd);
        (UniPoly::new(self.field, q), UniPoly::new(self.field, r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).1
    }

    /// Exact quotient; panics if `d` does not divide.
    pub fn div_exact(&self, d: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> UniPoly {
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| if i % 2 == 1 { c } else { 0 }).collect();
        UniPoly::new(self.field, c)
    }

    /// Square root of a polynomial with zero derivative.
    fn sqrt(&self) -> UniPoly {
        let c = self.coeffs.iter().step_by(2).map(|&c| self.field.sqrt(c)).collect();
        UniPoly::new(self.field, c)
    }

    pub fn eval(&self, x: u128) -> u128 {
        self.coeffs.iter().rev().fold(0, |acc, &c| self.field.mul(acc, x) ^ c)
    }

    /// self² mod m.
    fn square_mod(&self, m: &UniPoly) -> UniPoly {
        let mut c = vec![0u128; self.coeffs.len() * 2];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[2 * i] = self.field.square(a);
        }
        UniPoly::new(self.field, c).rem(m)
    }

    /// self^(2^e) mod m.
    pub fn frobenius_mod(&self, e: u32, m: &UniPoly) -> UniPoly {
        let mut r = self.rem(m);
        for _ in 0..e {
            r = r.square_mod(m);
        }
        r
    }

    /// Absolute trace Σ_{i<k} self^(2^i) mod m, with k the field degree.
    fn trace_mod(&self, m: &UniPoly) -> UniPoly {
        let mut t = self.rem(m);
        let mut acc = t.clone();
        for _ in 1..self.field.degree() {
            t = t.square_mod(m);
            acc = acc.add(&t);
        }
        acc
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{i}"),
            };
            let coeff = format_binary(&self.field, c);
            let coeff = if coeff.contains('+') { format!("({coeff})") } else { coeff };
            match (coeff.as_str(), mono.is_empty()) {
                (c, true) => write!(out, "{c}")?,
                ("1", false) => write!(out, "{mono}")?,
                (c, false) => write!(out, "{c}*{mono}")?,
            }
        }
        Ok(())
    }
}

/// Square-free decomposition: pairs (square-free part, multiplicity) of the
/// monic associate.
pub fn squarefree_decomposition(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let d = f.derivative();
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        for (g, j) in squarefree_decomposition(&c.sqrt()) {
            out.push((g, j * 2));
        }
    }
    out.sort_by_key(|(g, j)| (*j, g.deg(), g.coeffs.clone()));
    out
}

/// Row-reduce and return a basis of the null space of `rows` (n columns).
pub(crate) fn null_space(field: BinaryField, mut rows: Vec<Vec<u128>>, n: usize) -> Vec<Vec<u128>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, p);
        let inv = field.inv(rows[r][col]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let t = rows[i][col];
                for j in 0..n {
                    let v = field.mul(t, rows[r][j]);
                    rows[i][j] ^= v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u128; n];
        v[free] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = rows[ri][free];
        }
        basis.push(v);
    }
    basis
}

/// Basis of the Berlekamp subalgebra {v : v^q ≡ v mod f} of a square-free
/// monic `f`, q the field order.
fn berlekamp_basis(f: &UniPoly) -> Vec<UniPoly> {
    let field = f.field;
    let n = f.deg();
    let xq = UniPoly::x(field).frobenius_mod(field.degree(), f);
    let mut q_rows = Vec::with_capacity(n);
    let mut cur = UniPoly::one(field);
    for _ in 0..n {
        let mut row = cur.coeffs.clone();
        row.resize(n, 0);
        q_rows.push(row);
        cur = cur.mul(&xq).rem(f);
    }
    // v·(Q − I) = 0, i.e. (Q − I)ᵀ vᵀ = 0
    let a: Vec<Vec<u128>> = (0..n)
        .map(|l| (0..n).map(|j| q_rows[j][l] ^ u128::from(j == l)).collect())
        .collect();
    null_space(field, a, n).into_iter().map(|v| UniPoly::new(field, v)).collect()
}

/// Number of irreducible factors of a square-free polynomial.
pub fn berlekamp_rank(f: &UniPoly) -> usize {
    berlekamp_basis(&f.monic()).len()
}

/// Split a square-free monic `f` into its monic irreducible factors.
fn split_squarefree(f: &UniPoly) -> Vec<UniPoly> {
    let basis = berlekamp_basis(f);
    let r = basis.len();
    let mut factors = vec![f.clone()];
    let field = f.field;
    'outer: for b in basis.iter().filter(|b| b.deg() > 0) {
        let mut wj = 1u128;
        for _ in 0..field.degree() {
            if factors.len() == r {
                break 'outer;
            }
            let t = b.scale(wj).trace_mod(f);
            let mut next = Vec::with_capacity(factors.len() + 1);
            for h in factors {
                if h.deg() <= 1 {
                    next.push(h);
                    continue;
                }
                let g = h.gcd(&t.rem(&h));
                if g.is_zero() || g.deg() == 0 || g.deg() == h.deg() {
                    next.push(h);
                } else {
                    let other = h.div_exact(&g);
                    next.push(g);
                    next.push(other);
                }
            }
            factors = next;
            wj = field.mul(wj, field.generator());
        }
    }
    debug_assert_eq!(factors.len(), r);
    factors
}

fn factor_key(p: &UniPoly) -> (usize, Vec<u128>) {
    (p.deg(), p.coeffs.iter().rev().copied().collect())
}

/// Irreducible factorization of the monic associate of `u`, as
/// (monic irreducible factor, multiplicity) sorted by degree then coefficients.
pub fn berlekamp_factor(u: &UniPoly) -> Vec<(UniPoly, u32)> {
    assert!(!u.is_zero(), "factoring the zero polynomial");
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(u) {
        for h in split_squarefree(&part) {
            out.push((h, mult));
        }
    }
    out.sort_by(|a, b| factor_key(&a.0).cmp(&factor_key(&b.0)).then(a.1.cmp(&b.1)));
    out
}

/// Distinct roots of `u` in its coefficient field, ascending.
pub fn roots(u: &UniPoly) -> Vec<u128> {
    let field = u.field;
    let f = u.monic();
    if f.deg() == 0 {
        return Vec::new();
    }
    let x = UniPoly::x(field);
    // product of the distinct linear factors
    let lin = f.gcd(&x.frobenius_mod(field.degree(), &f).add(&x));
    if lin.is_zero() || lin.deg() == 0 {
        return Vec::new();
    }
    let mut parts = vec![lin.clone()];
    let mut wj = 1u128;
    for _ in 0..field.degree() {
        if parts.iter().all(|p| p.deg() == 1) {
            break;
        }
        let t = x.scale(wj).trace_mod(&lin);
        let mut next = Vec::new();
        for h in parts {
            if h.deg() <= 1 {
                next.push(h);
                continue;
            }
            let g = h.gcd(&t.rem(&h));
            if g.is_zero() || g.deg() == 0 || g.deg() == h.deg() {
                next.push(h);
            } else {
                next.push(h.div_exact(&g));
                next.push(g);
            }
        }
        parts = next;
        wj = field.mul(wj, field.generator());
    }
    let mut out: Vec<u128> = parts.iter().map(|p| p.coeffs[0]).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2(c: &[u128]) -> UniPoly {
        UniPoly::new(BinaryField::f2(), c.to_vec())
    }

    #[test]
    fn factor_x2_plus_x() {
        let fs = berlekamp_factor(&f2(&[0, 1, 1]));
        assert_eq!(fs, vec![(f2(&[0, 1]), 1), (f2(&[1, 1]), 1)]);
    }

    #[test]
    fn x2_x_1_is_irreducible() {
        let u = f2(&[1, 1, 1]);
        assert_eq!(berlekamp_factor(&u), vec![(u.clone(), 1)]);
        assert_eq!(berlekamp_rank(&u), 1);
        assert!(roots(&u).is_empty());
    }

    #[test]
    fn squares_and_multiplicities() {
        // (x+1)^4 · x^3
        let x1 = f2(&[1, 1]);
        let x = f2(&[0, 1]);
        let u = x1.mul(&x1).mul(&x1).mul(&x1).mul(&x).mul(&x).mul(&x);
        assert_eq!(berlekamp_factor(&u), vec![(x, 3), (x1, 4)]);
    }

    #[test]
    fn roots_of_f4_modulus_in_f4() {
        let f4 = BinaryField::new(2).unwrap();
        let u = UniPoly::new(f4, vec![1, 1, 1]);
        let w = f4.generator();
        assert_eq!(roots(&u), vec![w, w ^ 1]);
    }

    #[test]
    fn all_elements_are_roots_of_field_polynomial() {
        let f16 = BinaryField::new(4).unwrap();
        let mut c = vec![0u128; 17];
        c[1] = 1;
        c[16] = 1;
        assert_eq!(roots(&UniPoly::new(f16, c)), (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn display() {
        let f4 = BinaryField::new(2).unwrap();
        assert_eq!(UniPoly::new(f4, vec![3, 0, 1]).to_string(), "z^2+(w+1)");
    }
}
