//! Seeded random search for covers with only prescribed singularities.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{verify_cover, CoverVerdict, VerifyOptions, WitnessReport};
use crate::error::{Error, Result};
use crate::geometry::{f2_ring, DoubleCoverDatum};
use crate::polyring::{Field, Monomial, Polynomial, Ring};

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct SearchOptions {
    pub verify: VerifyOptions,
    /// Terms in a sampled f; 2(n+2) when absent.
    pub f_terms: Option<usize>,
    /// Candidates tried before the random ones, in order.
    pub planted: Vec<(Polynomial, Polynomial)>,
}


fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> Monomial {
    let mut m = Monomial::ONE;
    for _ in 0..degree {
        let i = rng.gen_range(0..nvars);
        m.set_exp(i, m.exp(i) + 1);
    }
    m
}

fn sparse_form(ring: &std::sync::Arc<Ring>, rng: &mut ChaCha8Rng, degree: u32, terms: usize) -> Polynomial {
    let mut monos = BTreeSet::new();
    // bounded retries keep tiny rings from looping
    for _ in 0..terms * 20 {
        if monos.len() == terms {
            break;
        }
        monos.insert(random_monomial(rng, ring.nvars(), degree).exponents(ring.nvars()));
    }
    let one = Field::f2().one();
    Polynomial::from_terms(ring, monos.into_iter().map(|e| (Monomial::from_exponents(&e), one.clone())))
}

/// Candidate number `index` for seed `seed`: f with a bounded number of
/// terms and, for a = 2, g a sum of products of disjoint variable pairs
/// (plus a square when n+2 is odd).
pub fn sample_candidate(n: usize, a: u32, seed: u64, index: u64, f_terms: Option<usize>) -> (Polynomial, Polynomial) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let nvars = n + 2;
    let ring = f2_ring(nvars);
    let f = sparse_form(&ring, &mut rng, 2 * a, f_terms.unwrap_or(2 * nvars));
    let g = if a == 2 {
        let mut vars: Vec<usize> = (0..nvars).collect();
        vars.shuffle(&mut rng);
        let one = Field::f2().one();
        let terms = vars.chunks(2).map(|c| {
            let mut m = Monomial::variable(c[0], 1);
            let j = *c.get(1).unwrap_or(&c[0]);
            m.set_exp(j, m.exp(j) + 1);
            (m, one.clone())
        });
        Polynomial::from_terms(&ring, terms)
    } else {
        sparse_form(&ring, &mut rng, a, nvars)
    };
    (f, g)
}

/// Verify the planted candidates and then `tries` sampled ones; return the
/// AllPrescribed reports in candidate order. Parallel, with identical output
/// for any thread count.
pub fn search_witnesses(n: usize, a: u32, seed: u64, tries: usize, opts: &SearchOptions) -> Result<Vec<WitnessReport>> {
    if a < 2 {
        return Err(Error::InvalidInput(format!("search needs a >= 2, got {a}")));
    }
    let mut candidates: Vec<(Option<u64>, Polynomial, Polynomial)> =
        opts.planted.iter().map(|(f, g)| (None, f.clone(), g.clone())).collect();
    candidates.extend((0..tries as u64).map(|i| {
        let (f, g) = sample_candidate(n, a, seed, i, opts.f_terms);
        (Some(i), f, g)
    }));
    let outcomes: Vec<Result<Option<WitnessReport>>> = candidates
        .into_par_iter()
        .enumerate()
        .map(|(pos, (index, f, g))| {
            let y = match DoubleCoverDatum::new(n, a, f, Some(g)) {
                Ok(y) => y,
                Err(_) => return Ok(None),
            };
            let mut report = match verify_cover(&y, &opts.verify) {
                Ok(r) => r,
                Err(Error::Inconclusive(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            if report.verdict != CoverVerdict::AllPrescribed {
                return Ok(None);
            }
            report.seed = index.map(|_| seed);
            report.candidate = Some(index.map_or(pos, |i| i as usize));
            Ok(Some(report))
        })
        .collect();
    let mut hits = Vec::new();
    for o in outcomes {
        if let Some(r) = o? {
            hits.push(r);
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, print_poly};

    #[test]
    fn zero_tries_is_empty() {
        assert!(search_witnesses(3, 2, 7, 0, &SearchOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn sampling_is_seeded() {
        let a = sample_candidate(3, 2, 11, 4, None);
        let b = sample_candidate(3, 2, 11, 4, None);
        assert_eq!(a, b);
        assert_eq!(a.0.len(), 10);
        assert_eq!(a.1.len(), 3);
        assert!(a.0.is_homogeneous() && a.1.is_homogeneous());
        assert_ne!(print_poly(&a.0), print_poly(&sample_candidate(3, 2, 11, 5, None).0));
    }

    #[test]
    fn planted_pair_is_found() {
        let ring = f2_ring(5);
        let f = parse_poly("x0^3*x2+x1^3*x2+x0*x1^2*x4+x0*x2^2*x4+x3^3*x4", &ring).unwrap();
        let g = parse_poly("x0*x1+x2*x3+x4^2", &ring).unwrap();
        let opts = SearchOptions { planted: vec![(f, g)], ..SearchOptions::default() };
        let hits = search_witnesses(3, 2, 1, 0, &opts).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].candidate, Some(0));
        assert_eq!(hits[0].seed, None);
    }
}
