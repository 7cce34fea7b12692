//! Singular-point enumeration against brute force over small fields, and
//! smoothness certificates on known hypersurfaces.

use std::collections::BTreeSet;

use dblcover::geometry::{
    certify_over_rationals, enumerate_singular_points, f2_ring, is_smooth_projective_hypersurface,
    scan_critical_locus, smoothness_via_reduction, DoubleCoverDatum, SingularPoint, SmoothnessVerdict,
};
use dblcover::groebner::GbLimits;
use dblcover::pipeline::rosenberg_polynomial;
use dblcover::polyring::{parse_poly, BinaryField, Field, Monomial, Polynomial, Ring, Scalar};
use dblcover::solve::{Tower, DEFAULT_MAX_EXT_DEGREE};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const THREEFOLD_F: &str = "x0^3*x2+x1^3*x2+x0*x1^2*x4+x0*x2^2*x4+x3^3*x4";
const THREEFOLD_G: &str = "x0*x1+x2*x3+x4^2";

/// p over F₂ evaluated at a point of `big`.
fn eval(p: &Polynomial, x: &[u128], big: BinaryField) -> u128 {
    p.terms().iter().fold(0, |acc, (m, c)| {
        if c.small() == 0 {
            return acc;
        }
        acc ^ x.iter().enumerate().fold(1, |t, (i, &xi)| big.mul(t, big.pow(xi, m.exp(i) as u128)))
    })
}

/// Projective points of P^{nvars-1}(F_{2^k}), first nonzero coordinate 1.
fn projective_points(big: BinaryField, nvars: usize) -> Vec<Vec<u128>> {
    let q = big.order();
    let mut out = Vec::new();
    for lead in 0..nvars {
        let mut tails = vec![vec![]];
        for _ in lead + 1..nvars {
            tails = tails.into_iter().flat_map(|v: Vec<u128>| (0..q).map(move |a| [v.clone(), vec![a]].concat())).collect();
        }
        for t in tails {
            let mut p = vec![0; lead];
            p.push(1);
            p.extend(t);
            out.push(p);
        }
    }
    out
}

/// Singular points over F_{2^k} by the Jacobian rank condition: g = 0 and
/// df, dg linearly dependent (only df = 0 without g).
fn brute_singular(f: &Polynomial, g: Option<&Polynomial>, big: BinaryField) -> BTreeSet<Vec<u128>> {
    let n = f.ring().nvars();
    let df: Vec<Polynomial> = (0..n).map(|i| f.derivative(i).unwrap()).collect();
    let dg: Option<Vec<Polynomial>> = g.map(|g| (0..n).map(|i| g.derivative(i).unwrap()).collect());
    projective_points(big, n)
        .into_iter()
        .filter(|x| {
            let a: Vec<u128> = df.iter().map(|d| eval(d, x, big)).collect();
            match (g, &dg) {
                (Some(g), Some(dg)) => {
                    let b: Vec<u128> = dg.iter().map(|d| eval(d, x, big)).collect();
                    eval(g, x, big) == 0
                        && (0..n).all(|i| (0..n).all(|j| big.mul(a[i], b[j]) == big.mul(a[j], b[i])))
                }
                _ => a.iter().all(|&v| v == 0),
            }
        })
        .collect()
}

fn embedded_with_degree_dividing(points: &[SingularPoint], big: BinaryField) -> BTreeSet<Vec<u128>> {
    let tower = Tower::default();
    points
        .iter()
        .filter(|p| big.degree().is_multiple_of(p.field().degree()))
        .map(|p| p.coordinates.coordinates().iter().map(|&c| tower.embed(c, p.field(), big)).collect())
        .collect()
}

fn threefold() -> DoubleCoverDatum {
    let ring = f2_ring(5);
    DoubleCoverDatum::new(3, 2, parse_poly(THREEFOLD_F, &ring).unwrap(), Some(parse_poly(THREEFOLD_G, &ring).unwrap()))
        .unwrap()
}

#[test]
fn rosenberg_plane_points_match_brute_force() {
    let h = rosenberg_polynomial(2, 4).unwrap();
    let y = DoubleCoverDatum::new(2, 2, h.clone(), None).unwrap();
    let points = enumerate_singular_points(&y, DEFAULT_MAX_EXT_DEGREE, &GbLimits::default()).unwrap();
    assert_eq!(points.len(), 7);
    for k in 1..=6 {
        let big = BinaryField::new(k).unwrap();
        assert_eq!(embedded_with_degree_dividing(&points, big), brute_singular(&h, None, big), "k = {k}");
    }
    // every point shows up by k = 6
    let covered: usize = points.iter().filter(|p| 6 % p.field().degree() == 0).count();
    assert_eq!(covered, points.len());
}

#[test]
fn threefold_points_match_brute_force_in_small_fields() {
    let y = threefold();
    let points = enumerate_singular_points(&y, DEFAULT_MAX_EXT_DEGREE, &GbLimits::default()).unwrap();
    assert_eq!(points.len(), 30);
    for k in 1..=4 {
        let big = BinaryField::new(k).unwrap();
        assert_eq!(embedded_with_degree_dividing(&points, big), brute_singular(y.f(), y.g(), big), "k = {k}");
    }
}

#[test]
fn points_are_unique_galois_closed_and_in_their_chart() {
    let y = threefold();
    let points = enumerate_singular_points(&y, DEFAULT_MAX_EXT_DEGREE, &GbLimits::default()).unwrap();
    let keys: BTreeSet<(u32, Vec<u128>)> =
        points.iter().map(|p| (p.field().degree(), p.coordinates.coordinates().to_vec())).collect();
    assert_eq!(keys.len(), points.len());
    for p in &points {
        let c = p.coordinates.coordinates();
        assert!(c[..p.chart].iter().all(|&v| v == 0));
        assert_eq!(c[p.chart], 1);
        // the Frobenius image is listed too
        let bf = p.field();
        let frob: Vec<u128> = c.iter().map(|&v| bf.square(v)).collect();
        assert!(keys.contains(&(bf.degree(), frob)));
        // y² = f at the point
        assert_eq!(bf.square(p.y_value.1), eval(y.f(), c, bf));
    }
    // rerunning gives the same list
    let again = enumerate_singular_points(&y, DEFAULT_MAX_EXT_DEGREE, &GbLimits::default()).unwrap();
    assert_eq!(points, again);
    let scan = scan_critical_locus(&y, DEFAULT_MAX_EXT_DEGREE, &GbLimits::default()).unwrap();
    assert_eq!(scan.charts.len(), 5);
    assert!(scan.charts.iter().all(|c| c.zero_dimensional));
}

#[test]
fn solver_cap_is_reported() {
    let y = threefold();
    let err = enumerate_singular_points(&y, 2, &GbLimits::default()).unwrap_err();
    assert!(matches!(err, dblcover::Error::Inconclusive(_)), "{err}");
}

fn qpoly(n: usize, s: &str) -> Polynomial {
    parse_poly(s, &Ring::standard(n, Field::Rationals)).unwrap()
}

#[test]
fn fermat_hypersurfaces_are_smooth() {
    let limits = GbLimits::default();
    for (n, s) in [(3, "x0^3+x1^3+x2^3"), (4, "x0^4+x1^4+x2^4+x3^4"), (5, "x0^3+x1^3+x2^3+x3^3+x4^3")] {
        let f = qpoly(n, s);
        assert_eq!(is_smooth_projective_hypersurface(&f, &limits).unwrap().verdict, SmoothnessVerdict::Smooth);
        let cert = certify_over_rationals(&f, &[5, 7], false, &limits).unwrap();
        assert_eq!(cert.verdict, SmoothnessVerdict::Smooth, "{s}");
    }
    // in characteristic 3 the Fermat cubic is a triple plane
    let f3 = parse_poly("x0^3+x1^3+x2^3", &Ring::standard(3, Field::prime(3).unwrap())).unwrap();
    assert_eq!(is_smooth_projective_hypersurface(&f3, &limits).unwrap().verdict, SmoothnessVerdict::Singular);
}

#[test]
fn planted_cones_are_singular_with_a_witness() {
    let limits = GbLimits::default();
    // cones with vertex (0:…:0:1), and a nodal cubic with node at (0:0:1)
    for (n, s) in [(4, "x0^2+x1^2-x2^2"), (4, "x0^3+x1^3+x2^3"), (3, "x0^3+x1^3+x0*x1*x2")] {
        let f = qpoly(n, s);
        let cert = is_smooth_projective_hypersurface(&f, &limits).unwrap();
        assert_eq!(cert.verdict, SmoothnessVerdict::Singular, "{s}");
        let witness = cert.witness.expect("singular verdicts carry a witness");
        let point = witness.point.expect("a point with small coordinates exists");
        let coords: Vec<Scalar> = point.iter().map(|c| Field::Rationals.from_i64(c.parse().unwrap())).collect();
        assert!(Field::Rationals.is_zero(&f.evaluate(&coords)));
        for i in 0..n {
            assert!(Field::Rationals.is_zero(&f.derivative(i).unwrap().evaluate(&coords)));
        }
        // a singular reduction does not certify anything
        let cert = certify_over_rationals(&f, &[3, 5, 7], false, &limits).unwrap();
        assert_ne!(cert.verdict, SmoothnessVerdict::Smooth);
    }
}

#[test]
fn smooth_mod_p_implies_smooth_over_q() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xcb);
    let limits = GbLimits::default();
    let ring = Ring::standard(3, Field::Rationals);
    let mut certified = 0;
    for _ in 0..60 {
        let mut terms = Vec::new();
        for a in 0..=3u32 {
            for b in 0..=3 - a {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    let m = Monomial::from_exponents(&[a, b, 3 - a - b]);
                    terms.push((m, Scalar::Rational(Box::new(BigRational::from_integer(BigInt::from(c))))));
                }
            }
        }
        let f = Polynomial::from_terms(&ring, terms);
        if f.is_zero() {
            continue;
        }
        let direct = is_smooth_projective_hypersurface(&f, &limits).unwrap();
        for p in [3, 5, 7] {
            let cert = smoothness_via_reduction(&f, p, &limits).unwrap();
            assert_ne!(cert.verdict, SmoothnessVerdict::Singular);
            if cert.is_smooth() {
                certified += 1;
                assert_eq!(direct.verdict, SmoothnessVerdict::Smooth, "f = {f}, p = {p}");
            }
        }
    }
    assert!(certified > 20, "{certified}");
}
