//! Gröbner bases and the ideal-theoretic predicates built on them.

mod arith;
mod engine;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use engine::GbLimits;

pub(crate) use arith::{FiniteArith, IPoly};
use arith::{to_finite, to_integer, IntArith};
use engine::{all_s_polynomials_reduce, Engine, Entry, Reducer};

use crate::error::{Error, Result};
use crate::polyring::{Field, Monomial, MonomialOrder, Polynomial, Ring, Scalar};

/// Ideal given by generators in a common ring. Zero generators are dropped,
/// so the zero ideal has an empty generator list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(ring: &Arc<Ring>, generators: Vec<Polynomial>) -> Result<Ideal> {
        for g in &generators {
            if g.ring() != ring {
                return Err(Error::RingMismatch("ideal generator outside the ring".into()));
            }
        }
        Ok(Ideal { ring: ring.clone(), generators: generators.into_iter().filter(|g| !g.is_zero()).collect() })
    }

    /// Ideal from a nonempty list, taking the ring of the first element.
    pub fn from_generators(generators: Vec<Polynomial>) -> Result<Ideal> {
        let ring = generators
            .first()
            .ok_or_else(|| Error::InvalidInput("an ideal needs at least one generator".into()))?
            .ring()
            .clone();
        Ideal::new(&ring, generators)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }
}

/// A reduced Gröbner basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    basis: Vec<Polynomial>,
    order: MonomialOrder,
    reduced: bool,
}

impl GroebnerBasis {
    /// Wrap polynomials known to form a reduced basis, e.g. the image of one
    /// under a field embedding.
    pub(crate) fn from_reduced_unchecked(ring: &Arc<Ring>, basis: Vec<Polynomial>, order: MonomialOrder) -> GroebnerBasis {
        GroebnerBasis { ring: ring.clone(), basis, order, reduced: true }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|p| !p.is_zero() && p.is_constant())
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|p| p.leading_term(self.order).expect("nonzero").0).collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        normal_form(f, &self.basis, self.order)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn s_polynomials_reduce_to_zero(&self) -> Result<bool> {
        let weights = self.ring.weights();
        Ok(match self.ring.field() {
            Field::Rationals => {
                let entries: Vec<Entry<BigInt>> =
                    self.basis.iter().map(|b| Entry::new(to_integer(b, self.order).0)).collect();
                all_s_polynomials_reduce(&IntArith, self.order, weights, &entries)
            }
            field => {
                let entries = self.finite_entries();
                all_s_polynomials_reduce(&FiniteArith { field }, self.order, weights, &entries)
            }
        })
    }

    /// Reduced-basis shape: monic, and no term of an element divisible by
    /// another element's leading monomial.
    pub fn satisfies_reduced_shape(&self) -> bool {
        let lms = self.leading_monomials();
        self.basis.iter().enumerate().all(|(i, p)| {
            p.is_monic(self.order)
                && p.terms().iter().all(|(m, _)| lms.iter().enumerate().all(|(j, l)| i == j || !l.divides(m)))
        })
    }

    /// Pure-power leading monomial for every variable.
    pub fn is_zero_dimensional(&self) -> bool {
        if self.is_unit() {
            return true;
        }
        let n = self.ring.nvars();
        let mut seen = vec![false; n];
        for m in self.leading_monomials() {
            if let Some((i, _)) = m.pure_power() {
                seen[i] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Monomials outside the leading-term ideal, in increasing order; `None`
    /// when the quotient is infinite-dimensional.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        if !self.is_zero_dimensional() {
            return None;
        }
        if self.is_unit() {
            return Some(Vec::new());
        }
        let lms = self.leading_monomials();
        let n = self.ring.nvars();
        let mut out = Vec::new();
        let standard = |m: &Monomial| !lms.iter().any(|l| l.divides(m));
        fn walk(var: usize, n: usize, m: Monomial, standard: &dyn Fn(&Monomial) -> bool, out: &mut Vec<Monomial>) {
            if var == n {
                out.push(m);
                return;
            }
            let mut cur = m;
            while standard(&cur) {
                walk(var + 1, n, cur, standard, out);
                cur.set_exp(var, cur.exp(var) + 1);
            }
        }
        walk(0, n, Monomial::ONE, &standard, &mut out);
        let w = self.ring.weights().to_vec();
        out.sort_by(|a, b| self.order.cmp(a, b, &w));
        Some(out)
    }

    pub fn quotient_dimension(&self) -> Option<usize> {
        self.standard_monomials().map(|s| s.len())
    }

    pub(crate) fn finite_entries(&self) -> Vec<Entry<u128>> {
        self.basis.iter().map(|p| Entry::new(to_finite(p, self.order))).collect()
    }
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Result<Polynomial> {
    let ring = f.ring().clone();
    if g.ring() != &ring {
        return Err(Error::RingMismatch("S-polynomial operands".into()));
    }
    let field = ring.field();
    let (mf, cf) = f.leading_term(order).ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?.clone();
    let (mg, cg) = g.leading_term(order).ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?.clone();
    let l = mf.lcm(&mg);
    let a = f.mul_monomial(&mf.quotient_of(&l).expect("lcm")).scale(&field.inv(&cf).expect("nonzero"));
    let b = g.mul_monomial(&mg.quotient_of(&l).expect("lcm")).scale(&field.inv(&cg).expect("nonzero"));
    a.checked_sub(&b)
}

fn from_finite(ring: &Arc<Ring>, p: IPoly<u128>) -> Polynomial {
    Polynomial::from_terms(ring, p.into_iter().map(|(m, c)| (m, Scalar::Small(c))))
}

fn from_integer(ring: &Arc<Ring>, p: IPoly<BigInt>, factor: &BigRational) -> Polynomial {
    Polynomial::from_terms(
        ring,
        p.into_iter().map(|(m, c)| (m, Scalar::Rational(Box::new(BigRational::from_integer(c) / factor)))),
    )
}

/// Multivariate division remainder. Divisors are tried in list order; the
/// result has no term divisible by any divisor's leading monomial.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Result<Polynomial> {
    let ring = f.ring().clone();
    if basis.iter().any(|b| b.ring() != &ring) {
        return Err(Error::RingMismatch("normal form operands".into()));
    }
    let weights = ring.weights();
    match ring.field() {
        Field::Rationals => {
            let arith = IntArith;
            let entries: Vec<Entry<BigInt>> =
                basis.iter().filter(|b| !b.is_zero()).map(|b| Entry::new(to_integer(b, order).0)).collect();
            let (fi, ffac) = to_integer(f, order);
            let red = Reducer { arith: &arith, order, weights }.reduce(fi, &entries, None);
            // rem = μ · (fi − …) and fi = ffac · f
            Ok(from_integer(&ring, red.rem, &(red.multiplier * ffac)))
        }
        field => {
            let arith = FiniteArith { field };
            let entries: Vec<Entry<u128>> =
                basis.iter().filter(|b| !b.is_zero()).map(|b| Entry::new(to_finite(b, order))).collect();
            let red = Reducer { arith: &arith, order, weights }.reduce(to_finite(f, order), &entries, None);
            Ok(from_finite(&ring, red.rem))
        }
    }
}

/// Fast repeated reduction modulo a fixed Gröbner basis over a finite field.
pub(crate) struct FiniteNormalForm {
    arith: FiniteArith,
    order: MonomialOrder,
    weights: Vec<u32>,
    entries: Vec<Entry<u128>>,
}

impl FiniteNormalForm {
    pub fn new(gb: &GroebnerBasis) -> FiniteNormalForm {
        FiniteNormalForm {
            arith: FiniteArith { field: gb.ring.field() },
            order: gb.order,
            weights: gb.ring.weights().to_vec(),
            entries: gb.finite_entries(),
        }
    }

    pub fn reduce(&self, f: IPoly<u128>) -> IPoly<u128> {
        Reducer { arith: &self.arith, order: self.order, weights: &self.weights }.reduce(f, &self.entries, None).rem
    }
}

fn run_engine(
    ring: &Arc<Ring>,
    seed: &[Polynomial],
    gens: &[Polynomial],
    order: MonomialOrder,
    limits: &GbLimits,
) -> Result<Vec<Polynomial>> {
    let weights = ring.weights();
    match ring.field() {
        Field::Rationals => {
            let arith = IntArith;
            let mut engine = Engine::new(&arith, order, weights, *limits);
            engine.seed(seed.iter().map(|p| to_integer(p, order).0).collect());
            let out = engine.run(gens.iter().map(|p| to_integer(p, order).0).collect())?;
            Ok(out
                .into_iter()
                .map(|p| {
                    let lc = BigRational::from_integer(p[0].1.clone());
                    from_integer(ring, p, &lc)
                })
                .collect())
        }
        field => {
            let arith = FiniteArith { field };
            let mut engine = Engine::new(&arith, order, weights, *limits);
            engine.seed(seed.iter().map(|p| to_finite(p, order)).collect());
            let out = engine.run(gens.iter().map(|p| to_finite(p, order)).collect())?;
            Ok(out.into_iter().map(|p| from_finite(ring, p)).collect())
        }
    }
}

/// Reduced Gröbner basis of `ideal`.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder, limits: &GbLimits) -> Result<GroebnerBasis> {
    let basis = run_engine(&ideal.ring, &[], &ideal.generators, order, limits)?;
    Ok(GroebnerBasis { ring: ideal.ring.clone(), basis, order, reduced: true })
}

/// Reduced Gröbner basis of ⟨gb⟩ + ⟨extra⟩, reusing the fact that `gb` is
/// already a basis. `extra` must live in `gb`'s ring.
pub fn extend_basis(gb: &GroebnerBasis, extra: &[Polynomial], limits: &GbLimits) -> Result<GroebnerBasis> {
    let basis = run_engine(&gb.ring, &gb.basis, extra, gb.order, limits)?;
    // seeded elements may be superseded; the engine's interreduction covers them
    Ok(GroebnerBasis { ring: gb.ring.clone(), basis, order: gb.order, reduced: true })
}

pub fn ideal_membership(f: &Polynomial, ideal: &Ideal, limits: &GbLimits) -> Result<bool> {
    if f.ring() != ideal.ring() {
        return Err(Error::RingMismatch("membership operands".into()));
    }
    if f.is_zero() {
        return Ok(true);
    }
    buchberger(ideal, MonomialOrder::DegRevLex, limits)?.contains(f)
}

/// Rabinowitsch: f ∈ rad(I) iff 1 ∈ I + ⟨1 − T·f⟩ with a fresh variable T.
pub fn radical_membership(f: &Polynomial, ideal: &Ideal, limits: &GbLimits) -> Result<bool> {
    if f.ring() != ideal.ring() {
        return Err(Error::RingMismatch("membership operands".into()));
    }
    let (ext, lift) = rabinowitsch_ring(ideal.ring())?;
    let t = Polynomial::var(&ext, ext.nvars() - 1);
    let one = Polynomial::one(&ext);
    let mut gens: Vec<Polynomial> = ideal.generators.iter().map(&lift).collect();
    gens.push(&one - &(&t * &lift(f)));
    let gb = buchberger(&Ideal::new(&ext, gens)?, MonomialOrder::DegRevLex, limits)?;
    Ok(gb.is_unit())
}

/// Radical membership against an ideal whose Gröbner basis is known.
pub fn radical_membership_gb(f: &Polynomial, gb: &GroebnerBasis, limits: &GbLimits) -> Result<bool> {
    if gb.is_unit() {
        return Ok(true);
    }
    let (ext, lift) = rabinowitsch_ring(gb.ring())?;
    let t = Polynomial::var(&ext, ext.nvars() - 1);
    let one = Polynomial::one(&ext);
    let seeded = GroebnerBasis {
        ring: ext.clone(),
        basis: gb.basis.iter().map(&lift).collect(),
        order: gb.order,
        reduced: true,
    };
    // the extended order restricted to T-free monomials is the original one
    if gb.order != MonomialOrder::DegRevLex {
        return radical_membership(f, &Ideal::new(gb.ring(), gb.basis.clone())?, limits);
    }
    let extended = extend_basis(&seeded, &[&one - &(&t * &lift(f))], limits)?;
    Ok(extended.is_unit())
}

fn rabinowitsch_ring(ring: &Arc<Ring>) -> Result<(Arc<Ring>, impl Fn(&Polynomial) -> Polynomial)> {
    let mut name = "t".to_string();
    while ring.var_index(&name).is_some() {
        name.push('_');
    }
    // weight 1 keeps the extended order graded in T as well
    let ext = ring.extended(&name, 1)?;
    let ext2 = ext.clone();
    let lift = move |p: &Polynomial| Polynomial::from_terms(&ext2, p.terms().iter().cloned());
    Ok((ext, lift))
}

/// Zero-dimensionality and, if so, the number of standard monomials.
pub fn is_zero_dimensional(ideal: &Ideal, limits: &GbLimits) -> Result<(bool, Option<usize>)> {
    let gb = buchberger(ideal, MonomialOrder::DegRevLex, limits)?;
    let d = gb.quotient_dimension();
    Ok((d.is_some(), d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn ring(field: Field, n: usize) -> Arc<Ring> {
        Ring::standard(n, field)
    }

    fn p(r: &Arc<Ring>, s: &str) -> Polynomial {
        parse_poly(s, r).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(Field::Rationals, 2);
        let order = MonomialOrder::DegRevLex;
        assert!(normal_form(&p(&r, "x0^2"), &[p(&r, "x0")], order).unwrap().is_zero());
        assert_eq!(normal_form(&p(&r, "x0+x1"), &[p(&r, "x0")], order).unwrap(), p(&r, "x1"));
        let nf = normal_form(&p(&r, "x0^2*x1 + 3"), &[p(&r, "2*x0*x1 - 1")], order).unwrap();
        assert_eq!(nf, p(&r, "1/2*x0 + 3"));
    }

    #[test]
    fn gb_of_variables() {
        let r = ring(Field::Rationals, 2);
        let gb = buchberger(&Ideal::new(&r, vec![p(&r, "x0"), p(&r, "x1")]).unwrap(), MonomialOrder::DegRevLex, &GbLimits::default()).unwrap();
        assert_eq!(gb.basis(), &[p(&r, "x1"), p(&r, "x0")]);
    }

    #[test]
    fn gb_self_certifies_over_f2_lex() {
        // variables ordered y > x as x0 = y, x1 = x
        let r = ring(Field::f2(), 2);
        let ideal = Ideal::new(&r, vec![p(&r, "x1^2+x1"), p(&r, "x0+x1")]).unwrap();
        let gb = buchberger(&ideal, MonomialOrder::Lex, &GbLimits::default()).unwrap();
        assert!(gb.s_polynomials_reduce_to_zero().unwrap());
        assert!(gb.satisfies_reduced_shape());
        for g in ideal.generators() {
            assert!(gb.contains(g).unwrap());
        }
        assert_eq!(gb.quotient_dimension(), Some(2));
    }

    #[test]
    fn non_bases_fail_the_criterion() {
        for field in [Field::Rationals, Field::prime(5).unwrap(), Field::f2()] {
            let r = ring(field, 3);
            // {x² − y, xy − 1}: the S-pair gives y² − x, which does not reduce
            let fake = GroebnerBasis::from_reduced_unchecked(
                &r,
                vec![p(&r, "x0^2-x1"), p(&r, "x0*x1-1")],
                MonomialOrder::DegRevLex,
            );
            assert!(!fake.s_polynomials_reduce_to_zero().unwrap());
            // two of the three twisted-cubic quadrics
            let fake = GroebnerBasis::from_reduced_unchecked(
                &r,
                vec![p(&r, "x0*x1-x2^2"), p(&r, "x1^2-x0*x2")],
                MonomialOrder::DegRevLex,
            );
            assert!(!fake.s_polynomials_reduce_to_zero().unwrap());
        }
    }

    #[test]
    fn membership_examples() {
        let r = ring(Field::Rationals, 2);
        let lim = GbLimits::default();
        let x = Ideal::new(&r, vec![p(&r, "x0")]).unwrap();
        assert!(ideal_membership(&p(&r, "x0*x1"), &x, &lim).unwrap());
        assert!(!ideal_membership(&p(&r, "1"), &x, &lim).unwrap());
    }

    #[test]
    fn radical_examples() {
        let r = ring(Field::Rationals, 2);
        let lim = GbLimits::default();
        let sq = Ideal::new(&r, vec![p(&r, "x0^2")]).unwrap();
        assert!(radical_membership(&p(&r, "x0"), &sq, &lim).unwrap());
        let x = Ideal::new(&r, vec![p(&r, "x0")]).unwrap();
        assert!(!radical_membership(&p(&r, "x1"), &x, &lim).unwrap());
        let gb = buchberger(&sq, MonomialOrder::DegRevLex, &lim).unwrap();
        assert!(radical_membership_gb(&p(&r, "x0"), &gb, &lim).unwrap());
        assert!(!radical_membership_gb(&p(&r, "x1"), &gb, &lim).unwrap());
    }

    #[test]
    fn zero_dimensionality_examples() {
        let r = ring(Field::Rationals, 2);
        let lim = GbLimits::default();
        let both = Ideal::new(&r, vec![p(&r, "x0"), p(&r, "x1")]).unwrap();
        assert_eq!(is_zero_dimensional(&both, &lim).unwrap(), (true, Some(1)));
        let one = Ideal::new(&r, vec![p(&r, "x0")]).unwrap();
        assert_eq!(is_zero_dimensional(&one, &lim).unwrap(), (false, None));
    }

    #[test]
    fn euler_combination_is_member() {
        let r = ring(Field::Rationals, 3);
        let f = p(&r, "x0^3 + 2*x0*x1*x2 - x2^3 + 5*x1^2*x2");
        let partials: Vec<Polynomial> = (0..3).map(|i| f.derivative(i).unwrap()).collect();
        let mut euler = f.scale(&Field::Rationals.from_i64(-3));
        for (i, d) in partials.iter().enumerate() {
            euler = &euler + &(&Polynomial::var(&r, i) * d);
        }
        let ideal = Ideal::new(&r, partials).unwrap();
        assert!(ideal_membership(&euler, &ideal, &GbLimits::default()).unwrap());
    }

    #[test]
    fn budget_yields_inconclusive() {
        let r = ring(Field::prime(5).unwrap(), 3);
        let ideal = Ideal::new(&r, vec![p(&r, "x0^2*x1 + x2^3 + 1"), p(&r, "x0*x1^2 + x2^2"), p(&r, "x0*x1*x2 + x1")]).unwrap();
        let few_pairs = GbLimits { max_pairs: 0, max_degree: 100 };
        assert!(matches!(buchberger(&ideal, MonomialOrder::DegRevLex, &few_pairs), Err(Error::Inconclusive(_))));
        let low_degree = GbLimits { max_pairs: 1000, max_degree: 2 };
        assert!(matches!(buchberger(&ideal, MonomialOrder::DegRevLex, &low_degree), Err(Error::Inconclusive(_))));
    }
}
