//! End-to-end verification of double covers, lifting to characteristic 0,
//! degree bounds and witness search.

mod search;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use search::{sample_candidate, search_witnesses, SearchOptions};

use crate::classify::{classify_point, SingularityClass};
use crate::error::{Error, Result};
use crate::geometry::{
    certify_over_rationals, g_hypersurface_is_smooth, scan_critical_locus, ChartSummary, DoubleCoverDatum,
    SingularPoint, SmoothnessCertificate, SmoothnessMethod, SmoothnessVerdict,
};
use crate::groebner::GbLimits;
use crate::polyring::{print_poly, Field, Monomial, Polynomial, Ring};
use crate::solve::DEFAULT_MAX_EXT_DEGREE;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Primes tried, in order, when certifying smoothness over ℚ.
pub const DEFAULT_PRIMES: [u64; 3] = [3, 5, 7];

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Degree thresholds for hypersurfaces in P^{n+1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBounds {
    pub n: usize,
    /// 2⌈(n+2)/3⌉: CH₀ of a very general hypersurface of this degree or more
    /// is not universally trivial.
    pub threshold: usize,
    /// 2⌈(n+3)/3⌉, the earlier bound.
    pub kollar_threshold: usize,
    /// Even degrees reached by the new bound but not by the earlier one.
    pub gap: Vec<usize>,
    pub applicable: bool,
}

pub fn degree_bounds(n: usize) -> DegreeBounds {
    let threshold = 2 * ceil_div(n + 2, 3);
    let kollar = 2 * ceil_div(n + 3, 3);
    DegreeBounds {
        n,
        threshold,
        kollar_threshold: kollar,
        gap: (threshold..kollar).filter(|d| d % 2 == 0).collect(),
        applicable: n >= 3,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Applicability {
    pub n_at_least_3: bool,
    /// a ≥ ⌈(n+2)/3⌉, i.e. 2a reaches the degree threshold.
    pub a_in_range: bool,
    pub theorem_applies: bool,
}

pub fn applicability(n: usize, a: u32) -> Applicability {
    let n_ok = n >= 3;
    let a_ok = a as usize >= ceil_div(n + 2, 3);
    Applicability { n_at_least_3: n_ok, a_in_range: a_ok, theorem_applies: n_ok && a_ok }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub n: usize,
    pub a: u32,
    pub f: String,
    pub g: Option<String>,
    pub characteristic: u64,
    pub field: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointReport {
    #[serde(flatten)]
    pub point: SingularPoint,
    pub class: SingularityClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum CoverVerdict {
    AllPrescribed,
    Bad { details: Vec<String> },
    Inconclusive { reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    NotStablyRationalWitness,
    NoConclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftSection {
    pub f_lift: String,
    pub g_lift: String,
    /// G = g_lift² − 4·f_lift, negated when its x0²x1² coefficient is negative.
    pub hypersurface: String,
    /// G mod 2 = g².
    pub reduction_check: bool,
    pub smoothness: SmoothnessCertificate,
    pub conclusion: Conclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Timings {
    pub scan_ms: u128,
    pub classify_ms: u128,
    pub total_ms: u128,
}

/// Machine-checkable summary of one verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub input: InputEcho,
    pub max_ext_degree: u32,
    pub charts: Vec<ChartSummary>,
    /// Set when a resource cap stopped the computation.
    pub solver_status: Option<String>,
    /// Smoothness of {g = 0}, only with the strict check.
    pub g_smoothness: Option<SmoothnessVerdict>,
    pub points: Vec<PointReport>,
    pub verdict: CoverVerdict,
    pub lift: Option<LiftSection>,
    pub degree_bounds: DegreeBounds,
    pub applicability: Applicability,
    pub engine_version: String,
    pub seed: Option<u64>,
    pub candidate: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl WitnessReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Process exit status: 0 success, 1 negative, 3 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match (&self.verdict, &self.lift) {
            (CoverVerdict::Inconclusive { .. }, _) => 3,
            (CoverVerdict::Bad { .. }, _) => 1,
            (CoverVerdict::AllPrescribed, None) => 0,
            (CoverVerdict::AllPrescribed, Some(l)) => match (l.conclusion, l.smoothness.verdict) {
                (Conclusion::NotStablyRationalWitness, _) => 0,
                (_, SmoothnessVerdict::Inconclusive) => 3,
                _ => 1,
            },
        }
    }
}

/// The cover verdict, re-derived from the report's own fields.
pub fn recompute_verdict(report: &WitnessReport) -> CoverVerdict {
    let mut details = Vec::new();
    for c in report.charts.iter().filter(|c| !c.zero_dimensional) {
        details.push(format!("chart {} ({}): critical locus is positive-dimensional", c.chart, c.variable));
    }
    if report.g_smoothness == Some(SmoothnessVerdict::Singular) {
        details.push("g = 0 is singular".into());
    }
    if !details.is_empty() {
        return CoverVerdict::Bad { details };
    }
    if let Some(reason) = &report.solver_status {
        return CoverVerdict::Inconclusive { reason: reason.clone() };
    }
    if report.g_smoothness == Some(SmoothnessVerdict::Inconclusive) {
        return CoverVerdict::Inconclusive { reason: "smoothness of g = 0 undecided".into() };
    }
    let n = report.input.n;
    for (i, p) in report.points.iter().enumerate() {
        if !p.class.is_prescribed_for(n) {
            details.push(format!("point {i} in chart {} {}: {:?}", p.point.chart, p.point.coordinates, p.class));
        }
    }
    if details.is_empty() {
        CoverVerdict::AllPrescribed
    } else {
        CoverVerdict::Bad { details }
    }
}

/// The lift conclusion, re-derived from the report.
pub fn recompute_conclusion(report: &WitnessReport) -> Option<Conclusion> {
    report.lift.as_ref().map(|l| {
        let ok = recompute_verdict(report) == CoverVerdict::AllPrescribed
            && l.reduction_check
            && l.smoothness.verdict == SmoothnessVerdict::Smooth
            && report.applicability.theorem_applies;
        if ok {
            Conclusion::NotStablyRationalWitness
        } else {
            Conclusion::NoConclusion
        }
    })
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_ext_degree: u32,
    pub limits: GbLimits,
    pub strict_g_smooth: bool,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_ext_degree: DEFAULT_MAX_EXT_DEGREE,
            limits: GbLimits::default(),
            strict_g_smooth: false,
            timings: false,
        }
    }
}

fn echo(y: &DoubleCoverDatum) -> InputEcho {
    InputEcho {
        n: y.n(),
        a: y.a(),
        f: print_poly(y.f()),
        g: y.g().map(print_poly),
        characteristic: 2,
        field: y.ring().field().to_string(),
    }
}

/// Find every singular point of the cover and classify it.
pub fn verify_cover(y: &DoubleCoverDatum, opts: &VerifyOptions) -> Result<WitnessReport> {
    if y.a() < 2 {
        return Err(Error::InvalidInput(format!("a = {} but the normal-form theory needs a >= 2", y.a())));
    }
    let start = Instant::now();
    let (charts, points, solver_status) = match scan_critical_locus(y, opts.max_ext_degree, &opts.limits) {
        Ok(scan) => match scan.points {
            Ok(p) => (scan.charts, p, None),
            Err(Error::Inconclusive(r)) => (scan.charts, Vec::new(), Some(r)),
            Err(Error::PositiveDimensionalCriticalLocus(_)) => (scan.charts, Vec::new(), None),
            Err(e) => return Err(e),
        },
        Err(Error::Inconclusive(r)) => (Vec::new(), Vec::new(), Some(r)),
        Err(e) => return Err(e),
    };
    let scanned = start.elapsed();
    let classes: Vec<SingularityClass> =
        points.par_iter().map(|p| classify_point(y, p)).collect::<Result<_>>()?;
    let classified = start.elapsed();
    let g_smoothness = if opts.strict_g_smooth {
        match g_hypersurface_is_smooth(y, &opts.limits) {
            Ok(c) => c.map(|c| c.verdict),
            Err(Error::Inconclusive(_)) => Some(SmoothnessVerdict::Inconclusive),
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let mut report = WitnessReport {
        input: echo(y),
        max_ext_degree: opts.max_ext_degree,
        charts,
        solver_status,
        g_smoothness,
        points: points.into_iter().zip(classes).map(|(point, class)| PointReport { point, class }).collect(),
        verdict: CoverVerdict::AllPrescribed,
        lift: None,
        degree_bounds: degree_bounds(y.n()),
        applicability: applicability(y.n(), y.a()),
        engine_version: ENGINE_VERSION.to_string(),
        seed: None,
        candidate: None,
        timings: opts.timings.then(|| Timings {
            scan_ms: scanned.as_millis(),
            classify_ms: (classified - scanned).as_millis(),
            total_ms: start.elapsed().as_millis(),
        }),
    };
    report.verdict = recompute_verdict(&report);
    Ok(report)
}

/// x0^{d−1}x1 + x1^{d−1}x2 + ⋯ + x_n^{d−1}x0 over F₂.
pub fn rosenberg_polynomial(n: usize, d: u32) -> Result<Polynomial> {
    if n < 2 || !n.is_multiple_of(2) || d < 4 || !d.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("Rosenberg covers need even n >= 2 and even d >= 4, got n = {n}, d = {d}")));
    }
    let ring = Ring::standard(n + 1, Field::f2());
    let one = Field::f2().one();
    let terms = (0..=n).map(|i| {
        let mut m = Monomial::variable(i, d - 1);
        m.set_exp((i + 1) % (n + 1), 1);
        (m, one.clone())
    });
    Ok(Polynomial::from_terms(&ring, terms))
}

/// The double cover of Pⁿ branched along the cyclic Rosenberg hypersurface.
pub fn rosenberg_cover(n: usize, d: u32, opts: &VerifyOptions) -> Result<(DoubleCoverDatum, WitnessReport)> {
    let y = DoubleCoverDatum::new(n, d / 2, rosenberg_polynomial(n, d)?, None)?;
    let report = verify_cover(&y, opts)?;
    Ok((y, report))
}

/// How to lift (f, g) to ℤ and certify G = g² − 4f.
#[derive(Clone, Debug)]
pub struct LiftChoice {
    /// Integer lift of f; the {0, 1} lift when absent.
    pub f_lift: Option<Polynomial>,
    pub g_lift: Option<Polynomial>,
    pub primes: Vec<u64>,
    pub direct: bool,
    /// Certify the lift even when the cover verdict is not AllPrescribed.
    pub force: bool,
}

impl Default for LiftChoice {
    fn default() -> Self {
        LiftChoice { f_lift: None, g_lift: None, primes: DEFAULT_PRIMES.to_vec(), direct: false, force: false }
    }
}

fn checked_lift(given: Option<&Polynomial>, target: &Polynomial, name: &str) -> Result<Polynomial> {
    let lift = match given {
        Some(p) => p.clone(),
        None => target.lift_to_rationals()?,
    };
    if lift.field() != Field::Rationals || lift.ring().nvars() != target.ring().nvars() {
        return Err(Error::InvalidInput(format!("{name} lift must be a polynomial over Q in the same variables")));
    }
    if !lift.is_integral() {
        return Err(Error::InvalidInput(format!("{name} lift has non-integral coefficients")));
    }
    let reduced = lift.reduce_to(Field::f2())?;
    if reduced.reinterpret(target.ring()) != *target {
        return Err(Error::InvalidInput(format!("{name} lift does not reduce to {name} mod 2")));
    }
    Ok(lift)
}

/// G = g_lift² − 4·f_lift, with the sign fixed by the x0²x1² coefficient.
pub fn lifted_hypersurface(f_lift: &Polynomial, g_lift: &Polynomial) -> Result<Polynomial> {
    let ring = f_lift.ring();
    let four = Polynomial::from_i64(ring, 4);
    let g = g_lift.reinterpret(ring);
    let big_g = &(&g * &g) - &(&four * f_lift);
    let mut key = Monomial::variable(0, 2);
    if ring.nvars() > 1 {
        key.set_exp(1, 2);
    }
    let c = big_g.coefficient(&key);
    Ok(if crate::polyring::field::rational_is_negative(c.rational()) { big_g.neg() } else { big_g })
}

/// Verify the cover, then lift to ℤ and certify that G = g² − 4f is smooth
/// over ℚ.
pub fn lift_and_certify(y: &DoubleCoverDatum, choice: &LiftChoice, opts: &VerifyOptions) -> Result<WitnessReport> {
    let g = y.g().ok_or_else(|| Error::InvalidInput("lifting needs a cover with g".into()))?;
    if y.field().degree() != 1 {
        return Err(Error::WrongField("lifting is defined for covers over F2".into()));
    }
    let mut report = verify_cover(y, opts)?;
    if report.verdict != CoverVerdict::AllPrescribed && !choice.force {
        return Ok(report);
    }
    let f_lift = checked_lift(choice.f_lift.as_ref(), y.f(), "f")?;
    let g_lift = checked_lift(choice.g_lift.as_ref(), g, "g")?;
    let big_g = lifted_hypersurface(&f_lift, &g_lift)?;
    let reduction_check = big_g.reduce_to(Field::f2())?.reinterpret(y.ring()) == g * g;
    if !reduction_check {
        return Err(Error::Internal("G does not reduce to g^2 mod 2".into()));
    }
    let smoothness = match certify_over_rationals(&big_g, &choice.primes, choice.direct, &opts.limits) {
        Ok(c) => c,
        Err(Error::Inconclusive(r)) => {
            let method = match choice.primes.first() {
                Some(&p) => SmoothnessMethod::ModPReduction(p),
                None => SmoothnessMethod::DirectChar0,
            };
            SmoothnessCertificate::inconclusive(method, r)
        }
        Err(e) => return Err(e),
    };
    report.lift = Some(LiftSection {
        f_lift: print_poly(&f_lift),
        g_lift: print_poly(&g_lift),
        hypersurface: print_poly(&big_g),
        reduction_check,
        smoothness,
        conclusion: Conclusion::NoConclusion,
    });
    let conclusion = recompute_conclusion(&report).expect("lift section present");
    if let Some(l) = report.lift.as_mut() {
        l.conclusion = conclusion;
    }
    Ok(report)
}
