use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::field::{Field, Scalar};
use super::monomial::{Monomial, MonomialOrder, MAX_VARS};
use crate::error::{Error, Result};

/// Variables, their weights, and the coefficient field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ring {
    vars: Vec<String>,
    weights: Vec<u32>,
    field: Field,
}

impl Ring {
    pub fn new(vars: Vec<String>, weights: Vec<u32>, field: Field) -> Result<Arc<Ring>> {
        if vars.len() != weights.len() {
            return Err(Error::InvalidInput("one weight per variable required".into()));
        }
        if vars.len() > MAX_VARS {
            return Err(Error::InvalidInput(format!("at most {MAX_VARS} variables are supported")));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate variable {v}")));
            }
        }
        Ok(Arc::new(Ring { vars, weights, field }))
    }

    /// x0, …, x_{n−1}, all of weight 1.
    pub fn standard(n: usize, field: Field) -> Arc<Ring> {
        Ring::new((0..n).map(|i| format!("x{i}")).collect(), vec![1; n], field).expect("valid ring")
    }

    /// x0, …, x_{n−1} of weight 1 followed by y of weight `a`.
    pub fn weighted_projective(n: usize, a: u32, field: Field) -> Arc<Ring> {
        let mut vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        vars.push("y".into());
        let mut weights = vec![1; n];
        weights.push(a);
        Ring::new(vars, weights, field).expect("valid ring")
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_field(&self, field: Field) -> Arc<Ring> {
        Arc::new(Ring { field, ..self.clone() })
    }

    /// Same variables with all weights set to 1.
    pub fn unweighted(&self) -> Arc<Ring> {
        Arc::new(Ring { weights: vec![1; self.vars.len()], ..self.clone() })
    }

    /// The ring with one more variable appended.
    pub fn extended(&self, name: &str, weight: u32) -> Result<Arc<Ring>> {
        let mut vars = self.vars.clone();
        vars.push(name.to_string());
        let mut weights = self.weights.clone();
        weights.push(weight);
        Ring::new(vars, weights, self.field)
    }

    /// The ring with the listed variables removed (in their original order).
    pub fn without(&self, drop: &[usize]) -> Arc<Ring> {
        let keep: Vec<usize> = (0..self.nvars()).filter(|i| !drop.contains(i)).collect();
        Arc::new(Ring {
            vars: keep.iter().map(|&i| self.vars[i].clone()).collect(),
            weights: keep.iter().map(|&i| self.weights[i]).collect(),
            field: self.field,
        })
    }

    pub(crate) fn cmp_canonical(&self, a: &Monomial, b: &Monomial) -> Ordering {
        MonomialOrder::DegRevLex.cmp(a, b, &self.weights)
    }
}

pub type Term = (Monomial, Scalar);

/// Sparse polynomial, terms sorted by decreasing weighted DegRevLex order,
/// no zero coefficients stored.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Clone, Debug)]
pub enum ArithOp<'a> {
    Add(&'a Polynomial),
    Sub(&'a Polynomial),
    Mul(&'a Polynomial),
    Pow(u32),
}

/// Checked ring arithmetic.
pub fn poly_arith(lhs: &Polynomial, op: ArithOp<'_>) -> Result<Polynomial> {
    match op {
        ArithOp::Add(r) => lhs.checked_add(r),
        ArithOp::Sub(r) => lhs.checked_sub(r),
        ArithOp::Mul(r) => lhs.checked_mul(r),
        ArithOp::Pow(e) => Ok(lhs.pow(e)),
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Polynomial {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Polynomial {
        Polynomial::from_terms(ring, vec![(Monomial::ONE, c)])
    }

    pub fn one(ring: &Arc<Ring>) -> Polynomial {
        Polynomial::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &Arc<Ring>, n: i64) -> Polynomial {
        Polynomial::constant(ring, ring.field().from_i64(n))
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Polynomial {
        assert!(i < ring.nvars(), "variable index out of range");
        Polynomial::monomial(ring, Monomial::variable(i, 1), ring.field().one())
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Scalar) -> Polynomial {
        Polynomial::from_terms(ring, vec![(m, c)])
    }

    /// Collects like terms, drops zeros and sorts.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = Term>) -> Polynomial {
        let field = ring.field();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(old) => *old = field.add(old, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        terms.sort_by(|a, b| ring.cmp_canonical(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field().zero())
    }

    fn same_ring(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring.vars, other.ring.vars)))
        }
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let field = self.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        let sign = |c: &Scalar| if negate_other { field.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match self.ring.cmp_canonical(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { field.sub(&a[i].1, &b[j].1) } else { field.add(&a[i].1, &b[j].1) };
                    if !field.is_zero(&c) {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (*m, sign(c))));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_ring(other)?;
        let field = self.field();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = field.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(old) => *old = field.add(old, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        terms.sort_by(|a, b| self.ring.cmp_canonical(&b.0, &a.0));
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let field = self.field();
        if field.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, field.mul(a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        // multiplication by a monomial preserves the order
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative; integer multiples are reduced in the field.
    pub fn derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.ring.nvars() {
            return Err(Error::InvalidVariable(var));
        }
        let field = self.field();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(var);
            if e == 0 {
                return None;
            }
            let mut d = *m;
            d.set_exp(var, e - 1);
            Some((d, field.mul(c, &field.from_i64(e as i64))))
        });
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    /// Largest weighted degree of a term and whether every term has it.
    /// The zero polynomial reports `None` and is homogeneous.
    pub fn weighted_degree_and_homogeneity(&self) -> (Option<u32>, bool) {
        let w = self.ring.weights();
        let mut degs = self.terms.iter().map(|(m, _)| m.weighted_degree(w));
        let Some(first) = degs.next() else {
            return (None, true);
        };
        let (mut max, mut homog) = (first, true);
        for d in degs {
            if d != first {
                homog = false;
            }
            max = max.max(d);
        }
        (Some(max), homog)
    }

    pub fn weighted_degree(&self) -> Option<u32> {
        self.weighted_degree_and_homogeneity().0
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weighted_degree_and_homogeneity().1
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<&Term> {
        let w = self.ring.weights();
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0, w))
    }

    /// Terms of total (unweighted) degree ≤ `max`.
    pub fn truncate(&self, max: u32) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.total_degree() <= max).cloned().collect(),
        }
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.total_degree() == d).cloned().collect(),
        }
    }

    /// Evaluate at a point given as one scalar per variable.
    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.ring.nvars(), "point has wrong length");
        let field = self.field();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    t = field.mul(&t, &field.pow(x, e as u64));
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    /// Substitute `subs[i]` for variable `i`. All substitutes share the target
    /// ring, which must have the same field. Terms of total degree above
    /// `truncate_at` are dropped along the way when it is given.
    pub fn compose(&self, subs: &[Polynomial], truncate_at: Option<u32>) -> Result<Polynomial> {
        if subs.len() != self.ring.nvars() {
            return Err(Error::InvalidInput("one substitute per variable required".into()));
        }
        let target = match subs.first() {
            Some(s) => s.ring.clone(),
            None => return Ok(self.clone()),
        };
        if target.field() != self.field() {
            return Err(Error::RingMismatch("substitution changes the field".into()));
        }
        let trunc = |p: Polynomial| match truncate_at {
            Some(d) => p.truncate(d),
            None => p,
        };
        let mut cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut power = |i: usize, e: u32| -> Polynomial {
            if let Some(p) = cache.get(&(i, e)) {
                return p.clone();
            }
            let mut p = Polynomial::one(&target);
            for _ in 0..e {
                p = trunc(&p * &subs[i]);
            }
            cache.insert((i, e), p.clone());
            p
        };
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for i in 0..self.ring.nvars() {
                let e = m.exp(i);
                if e > 0 {
                    t = trunc(&t * &power(i, e));
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Same terms, read in another ring with the same variable count.
    pub fn reinterpret(&self, ring: &Arc<Ring>) -> Polynomial {
        assert_eq!(ring.nvars(), self.ring.nvars());
        Polynomial::from_terms(ring, self.terms.iter().cloned())
    }

    /// Apply a coefficient map into `ring` (which must have the same number of variables).
    pub fn map_coefficients(&self, ring: &Arc<Ring>, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Polynomial> {
        if ring.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch("variable count differs".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((*m, f(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_terms(ring, terms))
    }

    /// Relabel variable `i` as `map[i]` in `ring`.
    pub fn rename_vars(&self, ring: &Arc<Ring>, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.ring.nvars());
        let terms = self.terms.iter().map(|(m, c)| {
            let mut out = Monomial::ONE;
            for (i, &j) in map.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    out.set_exp(j, out.exp(j) + e);
                }
            }
            (out, c.clone())
        });
        Polynomial::from_terms(ring, terms)
    }

    /// Set variable `var` to the constant `value`, landing in `ring` = this
    /// ring without `var`.
    pub fn specialize(&self, var: usize, value: &Scalar, ring: &Arc<Ring>) -> Polynomial {
        let field = self.field();
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.exp(var);
            let c = if e > 0 { field.mul(c, &field.pow(value, e as u64)) } else { c.clone() };
            let mut out = Monomial::ONE;
            let mut j = 0;
            for i in 0..self.ring.nvars() {
                if i != var {
                    out.set_exp(j, m.exp(i));
                    j += 1;
                }
            }
            (out, c)
        });
        Polynomial::from_terms(ring, terms)
    }

    pub fn is_monic(&self, order: MonomialOrder) -> bool {
        self.leading_term(order).is_some_and(|(_, c)| self.field().is_one(c))
    }

    pub fn make_monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field().inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Set of variables that occur.
    pub fn support(&self) -> Vec<usize> {
        let mask = self.terms.iter().fold(0u32, |acc, (m, _)| acc | m.support_mask());
        (0..self.ring.nvars()).filter(|i| mask >> i & 1 == 1).collect()
    }

    /// Coefficients as integers when the field is ℚ and all are integral.
    pub fn is_integral(&self) -> bool {
        match self.field() {
            Field::Rationals => self.terms.iter().all(|(_, c)| c.rational().is_integer()),
            _ => true,
        }
    }

    /// Coefficient-wise image in `field` (ℚ → F_p requires p-integral
    /// coefficients; F_p → F_p is the identity).
    pub fn reduce_to(&self, field: Field) -> Result<Polynomial> {
        let src = self.field();
        let ring = self.ring.with_field(field);
        match src {
            Field::Rationals => self.map_coefficients(&ring, |c| {
                field.from_rational(c.rational()).map_err(|_| {
                    Error::NotRepresentable(format!("coefficient {} is not {}-integral", c.rational(), field.characteristic()))
                })
            }),
            _ if src == field => Ok(self.clone()),
            _ => Err(Error::WrongField(format!("cannot reduce from {src} to {field}"))),
        }
    }

    /// Lift F_p coefficients to ℚ using representatives in {0, …, p−1}.
    pub fn lift_to_rationals(&self) -> Result<Polynomial> {
        let src = self.field();
        let ring = self.ring.with_field(Field::Rationals);
        self.map_coefficients(&ring, |c| Ok(Scalar::Rational(Box::new(src.lift_to_rational(c)?))))
    }

    /// Coefficients of a ℚ-polynomial have a common denominator of 1.
    pub(crate) fn rational_content_is_divisible_by(&self, p: u64) -> bool {
        use num_bigint::BigInt;
        use num_integer::Integer;
        let p = BigInt::from(p);
        self.terms.iter().all(|(_, c)| {
            let q = c.rational();
            q.is_integer() && q.numer().mod_floor(&p).is_zero()
        })
    }
}

/// Coefficient-wise reduction or lift between ℚ and a prime field.
pub fn lift_reduce(p: &Polynomial, target: Field) -> Result<Polynomial> {
    match (p.field(), target) {
        (Field::Rationals, Field::Rationals) => Ok(p.clone()),
        (Field::Rationals, _) => p.reduce_to(target),
        (_, Field::Rationals) => p.lift_to_rationals(),
        (a, b) if a == b => Ok(p.clone()),
        (a, b) => Err(Error::WrongField(format!("no coefficient map from {a} to {b}"))),
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::print_poly(self))
    }
}
