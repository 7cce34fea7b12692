//! End-to-end reports: the worked examples, self-consistency of verdicts,
//! and independence from the thread count.

use dblcover::classify::{BadReason, SingularityClass};
use dblcover::geometry::{f2_ring, DoubleCoverDatum, SmoothnessVerdict};
use dblcover::pipeline::{
    lift_and_certify, recompute_conclusion, recompute_verdict, rosenberg_cover, search_witnesses, verify_cover,
    Conclusion, CoverVerdict, LiftChoice, SearchOptions, VerifyOptions, WitnessReport, DEFAULT_PRIMES,
};
use dblcover::polyring::{parse_poly, Field, Polynomial};

const F3: &str = "x0^3*x2+x1^3*x2+x0*x1^2*x4+x0*x2^2*x4+x3^3*x4";
const G3: &str = "x0*x1+x2*x3+x4^2";
const G3_LIFTED: &str = "x0^2*x1^2-4*x0^3*x2-4*x1^3*x2-8*x2^4+2*x0*x1*x2*x3+x2^2*x3^2\
    -4*x0*x1^2*x4-4*x0*x2^2*x4-4*x3^3*x4+2*x0*x1*x4^2+2*x2*x3*x4^2+x4^4";

fn threefold() -> DoubleCoverDatum {
    let ring = f2_ring(5);
    DoubleCoverDatum::new(3, 2, parse_poly(F3, &ring).unwrap(), Some(parse_poly(G3, &ring).unwrap())).unwrap()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn display_lift(y: &DoubleCoverDatum) -> LiftChoice {
    let qring = y.ring().with_field(Field::Rationals);
    LiftChoice {
        f_lift: Some(parse_poly(&format!("{F3}+2*x2^4"), &qring).unwrap()),
        g_lift: None,
        primes: DEFAULT_PRIMES.to_vec(),
        direct: false,
        force: false,
    }
}

fn check_self_consistent(report: &WitnessReport) {
    assert_eq!(recompute_verdict(report), report.verdict);
    assert_eq!(recompute_conclusion(report), report.lift.as_ref().map(|l| l.conclusion));
}

#[test]
fn threefold_example_is_a_witness() {
    let y = threefold();
    let report = lift_and_certify(&y, &display_lift(&y), &VerifyOptions::default()).unwrap();
    assert_eq!(report.verdict, CoverVerdict::AllPrescribed);
    assert_eq!(report.points.len(), 30);
    assert!(report.points.iter().all(|p| p.class == SingularityClass::OddNondegenerate));
    let lift = report.lift.as_ref().unwrap();
    let qring = y.ring().with_field(Field::Rationals);
    assert_eq!(parse_poly(&lift.hypersurface, &qring).unwrap(), parse_poly(G3_LIFTED, &qring).unwrap());
    assert!(lift.reduction_check);
    assert_eq!(lift.smoothness.verdict, SmoothnessVerdict::Smooth);
    assert_eq!(lift.conclusion, Conclusion::NotStablyRationalWitness);
    assert_eq!(report.exit_code(), 0);
    check_self_consistent(&report);
}

#[test]
fn tampered_reports_lose_their_verdict() {
    let y = threefold();
    let mut report = lift_and_certify(&y, &display_lift(&y), &VerifyOptions::default()).unwrap();
    report.points[7].class = SingularityClass::Bad(BadReason::CubicVanishes);
    assert!(matches!(recompute_verdict(&report), CoverVerdict::Bad { .. }));
    assert_eq!(recompute_conclusion(&report), Some(Conclusion::NoConclusion));

    let mut report = verify_cover(&y, &VerifyOptions::default()).unwrap();
    report.charts[3].zero_dimensional = false;
    assert!(matches!(recompute_verdict(&report), CoverVerdict::Bad { .. }));

    let mut report = verify_cover(&y, &VerifyOptions::default()).unwrap();
    report.solver_status = Some("cap".into());
    assert!(matches!(recompute_verdict(&report), CoverVerdict::Inconclusive { .. }));
}

#[test]
fn rosenberg_plane_quartic_cover() {
    let (_, report) = rosenberg_cover(2, 4, &VerifyOptions::default()).unwrap();
    assert_eq!(report.verdict, CoverVerdict::AllPrescribed);
    assert_eq!(report.points.len(), 7);
    check_self_consistent(&report);
}

#[test]
fn square_branch_locus_is_bad() {
    // x0²x1² + x2⁴ is a square, so dh vanishes everywhere
    let ring = f2_ring(3);
    let y = DoubleCoverDatum::new(2, 2, parse_poly("x0^2*x1^2+x2^4", &ring).unwrap(), None).unwrap();
    let report = verify_cover(&y, &VerifyOptions::default()).unwrap();
    assert!(matches!(report.verdict, CoverVerdict::Bad { .. }));
    assert_eq!(report.exit_code(), 1);
    check_self_consistent(&report);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let y = threefold();
    let one = in_pool(1, || lift_and_certify(&y, &display_lift(&y), &VerifyOptions::default()).unwrap().to_json());
    let four = in_pool(4, || lift_and_certify(&y, &display_lift(&y), &VerifyOptions::default()).unwrap().to_json());
    let again = lift_and_certify(&y, &display_lift(&y), &VerifyOptions::default()).unwrap().to_json();
    assert_eq!(one, four);
    assert_eq!(one, again);
}

#[test]
fn search_is_deterministic() {
    let ring = f2_ring(5);
    let planted: Vec<(Polynomial, Polynomial)> =
        vec![(parse_poly(F3, &ring).unwrap(), parse_poly(G3, &ring).unwrap())];
    let opts = SearchOptions { planted, ..SearchOptions::default() };
    let run = |threads| {
        in_pool(threads, || {
            let hits = search_witnesses(3, 2, 2024, 24, &opts).unwrap();
            serde_json::to_string(&hits).unwrap()
        })
    };
    let a = run(1);
    assert_eq!(a, run(3));
    assert_eq!(a, run(1));
    let hits = search_witnesses(3, 2, 2024, 24, &opts).unwrap();
    assert_eq!(hits[0].candidate, Some(0));
    assert!(hits.iter().all(|h| h.verdict == CoverVerdict::AllPrescribed));
    // sampled hits carry their seed and come in candidate order
    let sampled: Vec<usize> = hits[1..].iter().map(|h| h.candidate.unwrap()).collect();
    assert!(sampled.windows(2).all(|w| w[0] < w[1]));
    assert!(hits[1..].iter().all(|h| h.seed == Some(2024)));
}
