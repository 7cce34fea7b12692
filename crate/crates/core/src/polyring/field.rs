use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gf2x;
use crate::error::{Error, Result};

/// F_{2^k} presented as F₂[w]/(modulus). Elements are bit-packed residues.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct BinaryField {
    degree: u32,
    modulus: u128,
}

impl BinaryField {
    /// F_{2^k} with the fixed modulus for degree `k`.
    pub fn new(k: u32) -> Result<Self> {
        if !(1..=gf2x::MAX_DEGREE).contains(&k) {
            return Err(Error::InvalidField(format!(
                "extension degree {k} outside 1..={}",
                gf2x::MAX_DEGREE
            )));
        }
        Ok(BinaryField { degree: k, modulus: gf2x::fixed_modulus(k) })
    }

    /// F₂[w]/(modulus) for a caller-supplied modulus, checked for irreducibility.
    pub fn with_modulus(modulus: u128) -> Result<Self> {
        if !gf2x::is_irreducible(modulus) {
            return Err(Error::InvalidField(format!("modulus {modulus:#x} is not irreducible over F2")));
        }
        Ok(BinaryField { degree: gf2x::degree(modulus) as u32, modulus })
    }

    pub fn f2() -> Self {
        BinaryField { degree: 1, modulus: 0b11 }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn order(&self) -> u128 {
        1u128 << self.degree
    }

    /// The class of `w`, the fixed generator.
    pub fn generator(&self) -> u128 {
        gf2x::reduce(0, 2, self.modulus, self.degree)
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        if self.degree == 1 {
            return a & b;
        }
        gf2x::mulmod(a, b, self.modulus, self.degree)
    }

    #[inline]
    pub fn square(&self, a: u128) -> u128 {
        self.mul(a, a)
    }

    pub fn inv(&self, a: u128) -> Option<u128> {
        if self.degree == 1 {
            return (a == 1).then_some(1);
        }
        gf2x::invmod(a, self.modulus)
    }

    pub fn pow(&self, a: u128, e: u128) -> u128 {
        gf2x::powmod(a, e, self.modulus, self.degree)
    }

    /// a^(2^j).
    pub fn frobenius(&self, mut a: u128, j: u32) -> u128 {
        for _ in 0..(j % self.degree) {
            a = self.square(a);
        }
        a
    }

    /// The unique square root, a^(2^(k-1)).
    pub fn sqrt(&self, a: u128) -> u128 {
        self.frobenius(a, self.degree - 1)
    }

    /// Absolute trace to F₂.
    pub fn trace(&self, a: u128) -> u128 {
        let mut acc = 0;
        let mut t = a;
        for _ in 0..self.degree {
            acc ^= t;
            t = self.square(t);
        }
        acc
    }

    /// Smallest d dividing the degree with a^(2^d) = a.
    pub fn element_degree(&self, a: u128) -> u32 {
        (1..=self.degree)
            .filter(|d| self.degree.is_multiple_of(*d))
            .find(|&d| self.frobenius(a, d) == a)
            .unwrap_or(self.degree)
    }
}

/// Exact coefficient fields.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Field {
    Rationals,
    /// F_p for an odd prime p < 2^32.
    Prime(u64),
    Binary(BinaryField),
}

/// A coefficient value. The field it belongs to is carried separately
/// (by the ring of the polynomial or by a [`FieldElement`]).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    /// Residue in F_p or bit-packed element of F_{2^k}.
    Small(u128),
    Rational(Box<BigRational>),
}

impl Scalar {
    #[inline]
    pub fn small(&self) -> u128 {
        match self {
            Scalar::Small(v) => *v,
            Scalar::Rational(_) => panic!("rational scalar used in a finite field"),
        }
    }

    pub fn rational(&self) -> &BigRational {
        match self {
            Scalar::Rational(q) => q,
            Scalar::Small(_) => panic!("finite-field scalar used in the rationals"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// F_p. `p = 2` gives the binary field of degree 1.
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Ok(Field::Binary(BinaryField::f2()));
        }
        if !is_prime(p) || p >= 1 << 32 {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn f2() -> Field {
        Field::Binary(BinaryField::f2())
    }

    pub fn binary(k: u32) -> Result<Field> {
        Ok(Field::Binary(BinaryField::new(k)?))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
            Field::Binary(_) => 2,
        }
    }

    pub fn as_binary(&self) -> Option<BinaryField> {
        match self {
            Field::Binary(b) => Some(*b),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Field::Rationals)
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(Box::new(BigRational::zero())),
            _ => Scalar::Small(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(Box::new(BigRational::one())),
            _ => Scalar::Small(1),
        }
    }

    #[inline]
    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Small(v) => *v == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    #[inline]
    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Small(v) => *v == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    #[inline]
    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(Box::new(a.rational() + b.rational())),
            Field::Prime(p) => Scalar::Small(((a.small() as u64 + b.small() as u64) % p) as u128),
            Field::Binary(_) => Scalar::Small(a.small() ^ b.small()),
        }
    }

    #[inline]
    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(Box::new(-a.rational())),
            Field::Prime(p) => {
                let v = a.small();
                Scalar::Small(if v == 0 { 0 } else { (*p - v as u64) as u128 })
            }
            Field::Binary(_) => a.clone(),
        }
    }

    #[inline]
    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(Box::new(a.rational() - b.rational())),
            Field::Prime(p) => Scalar::Small(((a.small() as u64 + p - b.small() as u64) % p) as u128),
            Field::Binary(_) => Scalar::Small(a.small() ^ b.small()),
        }
    }

    #[inline]
    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(Box::new(a.rational() * b.rational())),
            Field::Prime(p) => Scalar::Small((a.small() as u64 * b.small() as u64 % p) as u128),
            Field::Binary(bf) => Scalar::Small(bf.mul(a.small(), b.small())),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match self {
            Field::Rationals => Some(Scalar::Rational(Box::new(a.rational().recip()))),
            Field::Prime(p) => Some(Scalar::Small(prime_inv(a.small() as u64, *p) as u128)),
            Field::Binary(bf) => bf.inv(a.small()).map(Scalar::Small),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(Box::new(BigRational::from_integer(BigInt::from(n)))),
            Field::Prime(p) => Scalar::Small(n.rem_euclid(*p as i64) as u128),
            Field::Binary(_) => Scalar::Small(n.rem_euclid(2) as u128),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(Box::new(BigRational::from_integer(n.clone()))),
            Field::Prime(p) => Scalar::Small(n.mod_floor(&BigInt::from(*p)).to_u128().unwrap()),
            Field::Binary(_) => Scalar::Small(n.mod_floor(&BigInt::from(2)).to_u128().unwrap()),
        }
    }

    /// Image of a rational number; fails when the denominator vanishes.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        if let Field::Rationals = self {
            return Ok(Scalar::Rational(Box::new(q.clone())));
        }
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        self.div(&num, &den)
            .ok_or_else(|| Error::NotRepresentable(format!("{q} has no image in {self}")))
    }

    /// Integer lift of a prime-field residue in {0, …, p−1}; rationals pass through.
    pub fn lift_to_rational(&self, a: &Scalar) -> Result<BigRational> {
        match self {
            Field::Rationals => Ok(a.rational().clone()),
            Field::Prime(_) => Ok(BigRational::from_integer(BigInt::from(a.small()))),
            Field::Binary(bf) if bf.degree() == 1 => Ok(BigRational::from_integer(BigInt::from(a.small()))),
            Field::Binary(_) => Err(Error::NotRepresentable(format!(
                "elements of {self} have no integer lift"
            ))),
        }
    }

    pub fn element(&self, value: Scalar) -> FieldElement {
        FieldElement { field: *self, value }
    }

    pub fn sqrt_char2(&self, a: &Scalar) -> Result<Scalar> {
        match self {
            Field::Binary(bf) => Ok(Scalar::Small(bf.sqrt(a.small()))),
            _ => Err(Error::WrongField(format!("square root via Frobenius needs a binary field, got {self}"))),
        }
    }
}

fn prime_inv(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i64) as u64
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Binary(b) if b.degree == 1 => write!(f, "F2"),
            Field::Binary(b) => write!(f, "F2^{}", b.degree),
        }
    }
}

/// A value together with its field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    pub field: Field,
    pub value: Scalar,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    fn check(&self, other: &FieldElement) {
        assert_eq!(self.field, other.field, "field mismatch");
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.check(other);
        self.field.element(self.field.add(&self.value, &other.value))
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.check(other);
        self.field.element(self.field.sub(&self.value, &other.value))
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.check(other);
        self.field.element(self.field.mul(&self.value, &other.value))
    }

    pub fn neg(&self) -> FieldElement {
        self.field.element(self.field.neg(&self.value))
    }

    pub fn inv(&self) -> Option<FieldElement> {
        self.field.inv(&self.value).map(|v| self.field.element(v))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.element(self.field.pow(&self.value, e))
    }
}

/// Square root in a binary field: c^(2^(k−1)).
pub fn sqrt_char2(c: &FieldElement) -> Result<FieldElement> {
    Ok(c.field.element(c.field.sqrt_char2(&c.value)?))
}

/// Write a binary-field element as a sum of powers of the generator `w`.
pub fn format_binary(bf: &BinaryField, v: u128) -> String {
    if bf.degree() == 1 || v <= 1 {
        return v.to_string();
    }
    let mut parts = Vec::new();
    for i in (0..bf.degree()).rev() {
        if v >> i & 1 == 1 {
            parts.push(match i {
                0 => "1".to_string(),
                1 => "w".to_string(),
                _ => format!("w^{i}"),
            });
        }
    }
    parts.join("+")
}

/// Positive-denominator canonical rational. `BigRational` already keeps this form.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn rational_is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_elements(bf: BinaryField) -> impl Iterator<Item = u128> {
        0..(1u128 << bf.degree())
    }

    #[test]
    fn sqrt_examples() {
        let f2 = Field::f2();
        let one = f2.element(Scalar::Small(1));
        assert_eq!(sqrt_char2(&one).unwrap(), one);

        // F4 = F2(w), w^2 = w + 1: sqrt(w) = w + 1.
        let f4 = Field::binary(2).unwrap();
        let w = f4.element(Scalar::Small(0b10));
        assert_eq!(sqrt_char2(&w).unwrap().value, Scalar::Small(0b11));
    }

    #[test]
    fn sqrt_exhaustive_small_degrees() {
        for k in 1..=4 {
            let bf = BinaryField::new(k).unwrap();
            for a in all_elements(bf) {
                assert_eq!(bf.square(bf.sqrt(a)), a);
            }
        }
    }

    #[test]
    fn sqrt_rejects_odd_characteristic() {
        let f3 = Field::prime(3).unwrap();
        assert!(sqrt_char2(&f3.element(Scalar::Small(1))).is_err());
    }

    #[test]
    fn field_axioms_f16_exhaustive() {
        let f = Field::binary(4).unwrap();
        for a in 0..16u128 {
            for b in 0..16u128 {
                let (sa, sb) = (Scalar::Small(a), Scalar::Small(b));
                assert_eq!(f.mul(&sa, &sb), f.mul(&sb, &sa));
                for c in 0..16u128 {
                    let sc = Scalar::Small(c);
                    let lhs = f.mul(&sa, &f.add(&sb, &sc));
                    let rhs = f.add(&f.mul(&sa, &sb), &f.mul(&sa, &sc));
                    assert_eq!(lhs, rhs);
                    assert_eq!(f.mul(&f.mul(&sa, &sb), &sc), f.mul(&sa, &f.mul(&sb, &sc)));
                }
            }
            if a != 0 {
                let sa = Scalar::Small(a);
                assert!(f.is_one(&f.mul(&sa, &f.inv(&sa).unwrap())));
            }
        }
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(101).unwrap();
        for a in 1..101 {
            let s = Scalar::Small(a);
            assert!(f.is_one(&f.mul(&s, &f.inv(&s).unwrap())));
        }
        assert!(Field::prime(9).is_err());
        assert_eq!(Field::prime(2).unwrap(), Field::f2());
    }

    #[test]
    fn rational_images() {
        let f5 = Field::prime(5).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f5.from_rational(&half).unwrap(), Scalar::Small(3));
        assert!(Field::f2().from_rational(&half).is_err());
        assert_eq!(f5.from_i64(-1), Scalar::Small(4));
    }

    #[test]
    fn element_degree_detects_subfields() {
        let bf = BinaryField::new(6).unwrap();
        let mut seen = [0usize; 7];
        for a in 0..64 {
            seen[bf.element_degree(a) as usize] += 1;
        }
        // F64 has 2 elements of degree 1, 2 of degree 2, 6 of degree 3, 54 of degree 6.
        assert_eq!(seen, [0, 2, 2, 6, 0, 0, 54]);
    }

    #[test]
    fn binary_formatting() {
        let bf = BinaryField::new(3).unwrap();
        assert_eq!(format_binary(&bf, 0b110), "w^2+w");
        assert_eq!(format_binary(&bf, 1), "1");
    }
}
