//! Charts, Jacobian ideals, smoothness certificates and the critical scheme
//! of an inseparable double cover.

mod smooth;

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use smooth::{
    certify_over_rationals, is_smooth_projective_hypersurface, jacobian_ideal, smoothness_via_reduction,
    SingularWitness, SmoothnessCertificate, SmoothnessMethod, SmoothnessVerdict, VariableMembership,
};

use crate::error::{Error, Result};
use crate::groebner::{buchberger, extend_basis, GbLimits, Ideal};
use crate::polyring::{print_poly, BinaryField, Field, MonomialOrder, Polynomial, Ring, Scalar};
use crate::solve::{evaluate_at, solve_with_basis, PointOverExtension, Tower};

/// The characteristic-2 cover {y² = f, g = 0} in P(1^{n+2}, a), or the
/// double cover y² = f of Pⁿ when `g` is absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoverDatum {
    n: usize,
    a: u32,
    f: Polynomial,
    g: Option<Polynomial>,
}

impl DoubleCoverDatum {
    /// Checks characteristic 2, variable counts and degrees. The bound a ≥ 2
    /// is left to the pipeline so toy data can be studied here.
    pub fn new(n: usize, a: u32, f: Polynomial, g: Option<Polynomial>) -> Result<DoubleCoverDatum> {
        let ring = f.ring().clone();
        if ring.field().characteristic() != 2 {
            return Err(Error::WrongField(format!("double covers live in characteristic 2, got {}", ring.field())));
        }
        let want = if g.is_some() { n + 2 } else { n + 1 };
        if ring.nvars() != want {
            return Err(Error::InvalidInput(format!("expected {want} variables, the ring has {}", ring.nvars())));
        }
        if ring.weights().iter().any(|&w| w != 1) {
            return Err(Error::InvalidInput("f and g live in a standard-graded ring".into()));
        }
        if a == 0 {
            return Err(Error::InvalidInput("a must be positive".into()));
        }
        check_form(&f, 2 * a, "f")?;
        if let Some(g) = &g {
            if g.ring() != &ring {
                return Err(Error::RingMismatch("f and g must share a ring".into()));
            }
            check_form(g, a, "g")?;
        }
        Ok(DoubleCoverDatum { n, a, f, g })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn g(&self) -> Option<&Polynomial> {
        self.g.as_ref()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.f.ring()
    }

    pub fn field(&self) -> BinaryField {
        self.ring().field().as_binary().expect("characteristic 2")
    }

    /// Number of weight-one charts.
    pub fn chart_count(&self) -> usize {
        self.ring().nvars()
    }
}

fn check_form(p: &Polynomial, degree: u32, name: &str) -> Result<()> {
    if p.is_zero() {
        return Ok(());
    }
    match p.weighted_degree_and_homogeneity() {
        (Some(d), true) if d == degree => Ok(()),
        (d, h) => Err(Error::InvalidInput(format!(
            "{name} must be homogeneous of degree {degree} (degree {d:?}, homogeneous {h})"
        ))),
    }
}

/// Ring of chart `i`: the weight-one variables other than xᵢ.
pub fn chart_ring(ring: &Arc<Ring>, chart: usize) -> Arc<Ring> {
    ring.without(&[chart])
}

pub(crate) fn dehomogenize(p: &Polynomial, chart: usize, ring: &Arc<Ring>) -> Polynomial {
    p.specialize(chart, &p.field().one(), ring)
}

/// Critical ideal of `y` in the affine chart xᵢ = 1, in the chart's
/// variables: ⟨g, 2×2 minors of [∂f ; ∂g]⟩, or ⟨∂f/∂x₀, …⟩ without g.
pub fn double_cover_critical_scheme(y: &DoubleCoverDatum, chart: usize) -> Result<Ideal> {
    let ring = y.ring();
    if chart >= ring.nvars() {
        return Err(Error::InvalidVariable(chart));
    }
    let target = chart_ring(ring, chart);
    let df: Vec<Polynomial> = (0..ring.nvars()).map(|j| y.f.derivative(j)).collect::<Result<_>>()?;
    let mut gens = Vec::new();
    match &y.g {
        Some(g) => {
            let dg: Vec<Polynomial> = (0..ring.nvars()).map(|j| g.derivative(j)).collect::<Result<_>>()?;
            gens.push(dehomogenize(g, chart, &target));
            let vars: Vec<usize> = (0..ring.nvars()).filter(|&j| j != chart).collect();
            for (k, &j) in vars.iter().enumerate() {
                for &l in &vars[k + 1..] {
                    let minor = &(&df[j] * &dg[l]) - &(&df[l] * &dg[j]);
                    gens.push(dehomogenize(&minor, chart, &target));
                }
            }
        }
        None => gens.extend(df.iter().map(|d| dehomogenize(d, chart, &target))),
    }
    Ideal::new(&target, gens)
}

/// A singular point of a double cover, in projective coordinates with the
/// chart variable equal to 1 and all earlier coordinates 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularPoint {
    pub chart: usize,
    #[serde(flatten)]
    pub coordinates: PointOverExtension,
    #[serde(serialize_with = "serialize_y")]
    pub y_value: (BinaryField, u128),
    /// `None` when the cover has no g.
    pub dg_nonzero: Option<bool>,
}

fn serialize_y<S: serde::Serializer>(y: &(BinaryField, u128), s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::polyring::format_binary(&y.0, y.1))
}

impl SingularPoint {
    pub fn field(&self) -> BinaryField {
        self.coordinates.field()
    }
}

/// Summary of one chart's critical ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartSummary {
    pub chart: usize,
    pub variable: String,
    pub zero_dimensional: bool,
    pub quotient_dimension: Option<usize>,
}

/// Per-chart summaries and, when every chart is zero-dimensional, the
/// singular points found in each.
#[derive(Clone, Debug)]
pub struct CriticalScan {
    pub charts: Vec<ChartSummary>,
    pub points: Result<Vec<SingularPoint>>,
}

fn scan_chart(
    y: &DoubleCoverDatum,
    chart: usize,
    max_ext_degree: u32,
    limits: &GbLimits,
) -> Result<(ChartSummary, Result<Vec<SingularPoint>>)> {
    let ideal = double_cover_critical_scheme(y, chart)?;
    let gb = buchberger(&ideal, MonomialOrder::DegRevLex, limits)?;
    let dim = gb.quotient_dimension();
    let summary = ChartSummary {
        chart,
        variable: y.ring().var_name(chart).to_string(),
        zero_dimensional: dim.is_some(),
        quotient_dimension: dim,
    };
    if dim.is_none() {
        return Ok((summary, Err(Error::PositiveDimensionalCriticalLocus(chart))));
    }
    // points with an earlier nonzero coordinate belong to an earlier chart
    let target = ideal.ring().clone();
    let earlier: Vec<Polynomial> = (0..chart).map(|j| Polynomial::var(&target, j)).collect();
    let mut gens = ideal.generators().to_vec();
    gens.extend(earlier.iter().cloned());
    let restricted = Ideal::new(&target, gens)?;
    let gb = extend_basis(&gb, &earlier, limits)?;
    let points = solve_with_basis(&restricted, &gb, max_ext_degree, limits).map(|pts| {
        pts.into_iter().map(|p| lift_point(y, chart, &p)).collect::<Result<Vec<_>>>()
    });
    let points = match points {
        Ok(inner) => inner,
        Err(e) => Err(e),
    };
    Ok((summary, points))
}

fn lift_point(y: &DoubleCoverDatum, chart: usize, p: &PointOverExtension) -> Result<SingularPoint> {
    let field = p.field();
    let mut coords = p.coordinates().to_vec();
    coords.insert(chart, 1);
    let point = PointOverExtension::new(field, coords);
    let tower = Tower::default();
    let fx = evaluate_at(&y.f, &point, &tower)?;
    let dg_nonzero = match &y.g {
        Some(g) => {
            let mut any = false;
            for j in 0..y.ring().nvars() {
                if evaluate_at(&g.derivative(j)?, &point, &tower)? != 0 {
                    any = true;
                    break;
                }
            }
            Some(any)
        }
        None => None,
    };
    Ok(SingularPoint { chart, coordinates: point, y_value: (field, field.sqrt(fx)), dg_nonzero })
}

/// Run every chart (in parallel) and collect summaries and points in chart
/// order. Resource exhaustion in any chart is returned as an error.
pub fn scan_critical_locus(y: &DoubleCoverDatum, max_ext_degree: u32, limits: &GbLimits) -> Result<CriticalScan> {
    let per_chart: Vec<Result<(ChartSummary, Result<Vec<SingularPoint>>)>> =
        (0..y.chart_count()).into_par_iter().map(|i| scan_chart(y, i, max_ext_degree, limits)).collect();
    let mut charts = Vec::new();
    let mut points: Result<Vec<SingularPoint>> = Ok(Vec::new());
    for r in per_chart {
        let (summary, pts) = r?;
        charts.push(summary);
        match (&mut points, pts) {
            (Ok(all), Ok(p)) => all.extend(p),
            (Ok(_), Err(e)) => points = Err(e),
            (Err(_), _) => {}
        }
    }
    Ok(CriticalScan { charts, points })
}

/// Singular points of `y` over the algebraic closure, one entry per
/// geometric point, each in its minimal field.
pub fn enumerate_singular_points(
    y: &DoubleCoverDatum,
    max_ext_degree: u32,
    limits: &GbLimits,
) -> Result<Vec<SingularPoint>> {
    scan_critical_locus(y, max_ext_degree, limits)?.points
}

/// Whether the projective hypersurface {g = 0} is smooth, over the cover's
/// own field.
pub fn g_hypersurface_is_smooth(y: &DoubleCoverDatum, limits: &GbLimits) -> Result<Option<SmoothnessCertificate>> {
    match &y.g {
        Some(g) => Ok(Some(is_smooth_projective_hypersurface(g, limits)?)),
        None => Ok(None),
    }
}

/// Print a polynomial over any field; used by reports.
pub fn poly_text(p: &Polynomial) -> String {
    print_poly(p)
}

/// Standard ring x0..x_{n−1} over F₂.
pub fn f2_ring(nvars: usize) -> Arc<Ring> {
    Ring::standard(nvars, Field::f2())
}

/// Evaluate a polynomial over a standard binary field at a singular point.
pub fn value_at(p: &Polynomial, point: &SingularPoint) -> Result<Scalar> {
    Ok(Scalar::Small(evaluate_at(p, &point.coordinates, &Tower::default())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn datum(n: usize, a: u32, f: &str, g: Option<&str>) -> DoubleCoverDatum {
        let ring = f2_ring(if g.is_some() { n + 2 } else { n + 1 });
        let f = parse_poly(f, &ring).unwrap();
        let g = g.map(|g| parse_poly(g, &ring).unwrap());
        DoubleCoverDatum::new(n, a, f, g).unwrap()
    }

    #[test]
    fn toy_minors() {
        let y = datum(2, 1, "x0*x1", Some("x2"));
        let ideal = double_cover_critical_scheme(&y, 3).unwrap();
        let gb = buchberger(&ideal, MonomialOrder::DegRevLex, &GbLimits::default()).unwrap();
        let texts: Vec<String> = gb.basis().iter().map(print_poly).collect();
        assert_eq!(texts, vec!["x2", "x1", "x0"]);
    }

    #[test]
    fn rosenberg_partials() {
        let y = datum(2, 2, "x0^3*x1+x1^3*x2+x2^3*x0", None);
        let ring = y.ring().clone();
        let want = ["x0^2*x1+x2^3", "x1^2*x2+x0^3", "x2^2*x0+x1^3"];
        for (j, w) in want.iter().enumerate() {
            assert_eq!(y.f().derivative(j).unwrap(), parse_poly(w, &ring).unwrap());
        }
        let ideal = double_cover_critical_scheme(&y, 0).unwrap();
        assert_eq!(ideal.ring().var_names(), &["x1".to_string(), "x2".to_string()]);
        assert_eq!(ideal.generators().len(), 3);
    }

    #[test]
    fn square_branch_locus_is_positive_dimensional() {
        let y = datum(2, 2, "x0^2*x1^2+x2^2*x3^2", Some("x0*x1+x2*x3"));
        let scan = scan_critical_locus(&y, 24, &GbLimits::default()).unwrap();
        assert!(!scan.charts[0].zero_dimensional);
        assert!(matches!(scan.points, Err(Error::PositiveDimensionalCriticalLocus(0))));
    }

    #[test]
    fn rejects_wrong_degrees() {
        let ring = f2_ring(4);
        let f = parse_poly("x0^3", &ring).unwrap();
        assert!(DoubleCoverDatum::new(2, 2, f, None).is_err());
    }
}
