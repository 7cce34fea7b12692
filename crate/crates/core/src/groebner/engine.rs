//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller installation of the product and chain criteria.

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use super::arith::{sub_mul, Arith, IPoly};
use crate::error::{Error, Result};
use crate::polyring::{Monomial, MonomialOrder};

/// Caps on a single Gröbner basis computation. Exceeding one yields
/// [`Error::Inconclusive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GbLimits {
    /// Maximum number of S-polynomials reduced.
    pub max_pairs: usize,
    /// Maximum weighted degree of a leading monomial in the basis.
    pub max_degree: u32,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits { max_pairs: 500_000, max_degree: 200 }
    }
}

pub(crate) struct Entry<C> {
    pub poly: IPoly<C>,
    pub lm: Monomial,
    mask: u32,
}

impl<C> Entry<C> {
    pub fn new(poly: IPoly<C>) -> Self {
        let lm = poly[0].0;
        Entry { mask: lm.support_mask(), lm, poly }
    }
}

/// Basis elements used as divisors, tried in list order.
pub(crate) struct Reducer<'a, A: Arith> {
    pub arith: &'a A,
    pub order: MonomialOrder,
    pub weights: &'a [u32],
}

pub(crate) struct Reduction<C> {
    pub rem: IPoly<C>,
    /// `rem = multiplier · (f − Σ qᵢ gᵢ)`; always 1 over fields.
    pub multiplier: BigRational,
}

impl<A: Arith> Reducer<'_, A> {
    fn find<'b>(&self, m: &Monomial, basis: &'b [Entry<A::C>], active: Option<&[bool]>) -> Option<&'b Entry<A::C>> {
        let mm = m.support_mask();
        basis.iter().enumerate().find_map(|(i, e)| {
            if active.is_some_and(|a| !a[i]) {
                return None;
            }
            (e.mask & !mm == 0 && e.lm.divides(m)).then_some(e)
        })
    }

    /// Full reduction of `f` modulo `basis`.
    pub fn reduce(&self, f: IPoly<A::C>, basis: &[Entry<A::C>], active: Option<&[bool]>) -> Reduction<A::C> {
        let mut f = f;
        let mut start = 0;
        let mut rem: IPoly<A::C> = Vec::new();
        let mut multiplier = BigRational::one();
        let mut steps = 0usize;
        while start < f.len() {
            let (m, c) = &f[start];
            match self.find(m, basis, active) {
                None => {
                    rem.push(f[start].clone());
                    start += 1;
                }
                Some(g) => {
                    let q = g.lm.quotient_of(m).expect("divides");
                    let (a, b) = self.arith.elimination_factors(c, &g.poly[0].1);
                    let mut tail: IPoly<A::C> = f.drain(start..).collect();
                    if let Some(a) = a {
                        self.arith.scale(&mut tail, &a);
                        self.arith.scale(&mut rem, &a);
                        multiplier *= self.arith.to_rational(&a);
                    }
                    f = sub_mul(self.arith, &tail[1..], &b, &q, &g.poly[1..], self.order, self.weights);
                    start = 0;
                    steps += 1;
                    if steps.is_multiple_of(8) {
                        multiplier *= self.arith.strip(&mut f, &mut rem);
                    }
                }
            }
        }
        Reduction { rem, multiplier }
    }

}

/// S-polynomial of two entries whose leading monomials divide `lcm`.
fn spoly<A: Arith>(
    arith: &A,
    order: MonomialOrder,
    weights: &[u32],
    f: &Entry<A::C>,
    g: &Entry<A::C>,
    lcm: &Monomial,
) -> IPoly<A::C> {
    let qf = f.lm.quotient_of(lcm).expect("lcm");
    let qg = g.lm.quotient_of(lcm).expect("lcm");
    let (a, b) = arith.elimination_factors(&f.poly[0].1, &g.poly[0].1);
    // s = (lc_g/d)·qf·f − (lc_f/d)·qg·g, leading terms cancel
    let mut fpart: IPoly<A::C> = f.poly[1..].iter().map(|(m, c)| (m.mul(&qf), c.clone())).collect();
    if let Some(a) = a {
        arith.scale(&mut fpart, &a);
    }
    sub_mul(arith, &fpart, &b, &qg, &g.poly[1..], order, weights)
}

/// Buchberger's criterion on a finished basis. Pairs are visited by
/// increasing lcm. A pair is settled without reduction when its leading
/// monomials are coprime, or when some lm_k divides its lcm and both pairs
/// with k were settled earlier; either way S_ij has an lcm-representation as
/// soon as the reduced pairs do. The remaining pairs are reduced in parallel.
pub(crate) fn all_s_polynomials_reduce<A: Arith>(
    arith: &A,
    order: MonomialOrder,
    weights: &[u32],
    basis: &[Entry<A::C>],
) -> bool {
    let n = basis.len();
    let mut pairs: Vec<(usize, usize, Monomial)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !basis[i].lm.coprime(&basis[j].lm))
        .map(|(i, j)| (i, j, basis[i].lm.lcm(&basis[j].lm)))
        .collect();
    pairs.sort_by(|a, b| order.cmp(&a.2, &b.2, weights).then((a.0, a.1).cmp(&(b.0, b.1))));
    let mut settled = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j && basis[i].lm.coprime(&basis[j].lm) {
                settled[i * n + j] = true;
            }
        }
    }
    let mut to_reduce = Vec::new();
    for (i, j, lcm) in pairs {
        let chain = (0..n).any(|k| k != i && k != j && settled[i * n + k] && settled[j * n + k] && basis[k].lm.divides(&lcm));
        if !chain {
            to_reduce.push((i, j, lcm));
        }
        settled[i * n + j] = true;
        settled[j * n + i] = true;
    }
    let reducer = Reducer { arith, order, weights };
    to_reduce.into_par_iter().all(|(i, j, lcm)| {
        let s = spoly(arith, order, weights, &basis[i], &basis[j], &lcm);
        reducer.reduce(s, basis, None).rem.is_empty()
    })
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

pub(crate) struct Engine<'a, A: Arith> {
    arith: &'a A,
    order: MonomialOrder,
    weights: &'a [u32],
    limits: GbLimits,
    store: Vec<Entry<A::C>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    pub spairs_reduced: usize,
}

impl<'a, A: Arith> Engine<'a, A> {
    pub fn new(arith: &'a A, order: MonomialOrder, weights: &'a [u32], limits: GbLimits) -> Self {
        Engine { arith, order, weights, limits, store: Vec::new(), active: Vec::new(), pairs: Vec::new(), spairs_reduced: 0 }
    }

    fn reducer(&self) -> Reducer<'a, A> {
        Reducer { arith: self.arith, order: self.order, weights: self.weights }
    }

    /// Install polynomials that already form a Gröbner basis.
    pub fn seed(&mut self, gb: Vec<IPoly<A::C>>) {
        for p in gb {
            if !p.is_empty() {
                self.store.push(Entry::new(p));
                self.active.push(true);
            }
        }
    }

    fn check_degree(&self, lm: &Monomial) -> Result<()> {
        let d = lm.weighted_degree(self.weights);
        if d > self.limits.max_degree {
            return Err(Error::Inconclusive(format!(
                "degree budget exceeded: basis element of degree {d} > {}",
                self.limits.max_degree
            )));
        }
        Ok(())
    }

    /// Gebauer–Möller update for a new element `h`.
    fn update(&mut self, h: IPoly<A::C>) -> Result<()> {
        let entry = Entry::new(h);
        self.check_degree(&entry.lm)?;
        let k = self.store.len();
        let lm_h = entry.lm;
        self.store.push(entry);
        self.active.push(false);

        let cands: Vec<(usize, Monomial)> = (0..k)
            .filter(|&i| self.active[i])
            .map(|i| (i, lm_h.lcm(&self.store[i].lm)))
            .collect();
        let mut in_c = vec![true; cands.len()];
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for idx in 0..cands.len() {
            in_c[idx] = false;
            let (i, l) = cands[idx];
            let keep = lm_h.coprime(&self.store[i].lm)
                || (!cands.iter().zip(&in_c).any(|((_, l2), &c)| c && l2.divides(&l))
                    && !kept.iter().any(|(_, l2)| l2.divides(&l)));
            if keep {
                kept.push((i, l));
            }
        }
        let store = &self.store;
        self.pairs.retain(|p| {
            !lm_h.divides(&p.lcm)
                || store[p.i].lm.lcm(&lm_h) == p.lcm
                || store[p.j].lm.lcm(&lm_h) == p.lcm
        });
        for (i, l) in kept {
            if !lm_h.coprime(&self.store[i].lm) {
                self.pairs.push(Pair { i, j: k, lcm: l });
            }
        }
        for i in 0..k {
            if self.active[i] && lm_h.divides(&self.store[i].lm) {
                self.active[i] = false;
            }
        }
        self.active[k] = true;
        Ok(())
    }

    fn select(&mut self) -> Option<Pair> {
        let (order, w) = (self.order, self.weights);
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                order.cmp(&a.lcm, &b.lcm, w).then((a.j, a.i).cmp(&(b.j, b.i)))
            })
            .map(|(idx, _)| idx)?;
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> IPoly<A::C> {
        spoly(self.arith, self.order, self.weights, &self.store[p.i], &self.store[p.j], &p.lcm)
    }

    /// Run to completion and return the reduced basis, sorted by increasing
    /// leading monomial.
    pub fn run(mut self, gens: Vec<IPoly<A::C>>) -> Result<Vec<IPoly<A::C>>> {
        for g in gens {
            let mut g = self.reducer().reduce(g, &self.store, Some(&self.active)).rem;
            if g.is_empty() {
                continue;
            }
            self.arith.normalize(&mut g);
            if g[0].0.is_one() {
                return Ok(vec![g]);
            }
            self.update(g)?;
        }
        while let Some(pair) = self.select() {
            self.spairs_reduced += 1;
            if self.spairs_reduced > self.limits.max_pairs {
                return Err(Error::Inconclusive(format!(
                    "pair budget exceeded: more than {} S-polynomials",
                    self.limits.max_pairs
                )));
            }
            let s = self.spoly(&pair);
            let mut h = self.reducer().reduce(s, &self.store, Some(&self.active)).rem;
            if h.is_empty() {
                continue;
            }
            self.arith.normalize(&mut h);
            if h[0].0.is_one() {
                return Ok(vec![h]);
            }
            self.update(h)?;
        }
        Ok(self.interreduce())
    }

    fn interreduce(self) -> Vec<IPoly<A::C>> {
        let idx: Vec<usize> = (0..self.store.len()).filter(|&i| self.active[i]).collect();
        let reducer = self.reducer();
        let mut out: Vec<IPoly<A::C>> = Vec::with_capacity(idx.len());
        for &i in &idx {
            let mut mask = self.active.clone();
            mask[i] = false;
            // lm(p) is irreducible modulo the others, so this only touches the tail
            let mut p = reducer.reduce(self.store[i].poly.clone(), &self.store, Some(&mask)).rem;
            self.arith.normalize(&mut p);
            out.push(p);
        }
        let (order, w) = (self.order, self.weights);
        out.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0, w));
        out
    }
}
