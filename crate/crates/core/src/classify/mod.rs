//! Local analysis at a singular point of a double cover.
//!
//! Local coordinates on {g = 0} come from a truncated implicit-function
//! series. The branch function is expanded to order 3 around the point, and
//! the verdict depends on the polar form of its quadratic part plus, in odd
//! dimension, the cubic part on the radical line.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{chart_ring, dehomogenize, DoubleCoverDatum, SingularPoint};
use crate::polyring::{BinaryField, Field, Monomial, Polynomial, Scalar};
use crate::solve::{null_space, Tower};

/// Order of every local expansion.
pub const TRUNCATION_ORDER: u32 = 3;

/// Why a point fails the normal-form test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BadReason {
    NonIsolated,
    RankDeficit,
    CubicVanishes,
    DgVanishes,
    SolverCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "verdict", content = "reason")]
pub enum SingularityClass {
    /// y² = x₁x₂ + x₃x₄ + ⋯ + (cubic), m even.
    EvenNondegenerate,
    /// y² = x₁³ + x₂x₃ + ⋯ + (cubic without x₁³), m odd.
    OddNondegenerate,
    Bad(BadReason),
}

impl SingularityClass {
    pub fn is_prescribed_for(&self, m: usize) -> bool {
        match self {
            SingularityClass::EvenNondegenerate => m.is_multiple_of(2),
            SingularityClass::OddNondegenerate => m % 2 == 1,
            SingularityClass::Bad(_) => false,
        }
    }
}

/// Quadratic and cubic parts of the branch function in local coordinates
/// centred at a singular point. Both live in one ring over F_{2^k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalModel {
    quadratic: Polynomial,
    cubic: Polynomial,
}

fn check_form(p: &Polynomial, d: u32, name: &str) -> Result<()> {
    if p.terms().iter().all(|(m, _)| m.total_degree() == d) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} part must be a form of degree {d}")))
    }
}

impl LocalModel {
    pub fn new(quadratic: Polynomial, cubic: Polynomial) -> Result<LocalModel> {
        if quadratic.ring() != cubic.ring() {
            return Err(Error::RingMismatch("quadratic and cubic parts must share a ring".into()));
        }
        if quadratic.field().as_binary().is_none() {
            return Err(Error::WrongField(format!("local models live over F_2^k, got {}", quadratic.field())));
        }
        check_form(&quadratic, 2, "quadratic")?;
        check_form(&cubic, 3, "cubic")?;
        Ok(LocalModel { quadratic, cubic })
    }

    /// Number of local variables.
    pub fn m(&self) -> usize {
        self.quadratic.ring().nvars()
    }

    pub fn quadratic(&self) -> &Polynomial {
        &self.quadratic
    }

    pub fn cubic(&self) -> &Polynomial {
        &self.cubic
    }

    pub fn field(&self) -> BinaryField {
        self.quadratic.field().as_binary().expect("checked in new")
    }

    pub fn truncation_order(&self) -> u32 {
        TRUNCATION_ORDER
    }
}

/// p(x + origin), optionally dropping terms above a total degree.
pub fn translate(p: &Polynomial, origin: &[Scalar], truncate_at: Option<u32>) -> Result<Polynomial> {
    let ring = p.ring();
    if origin.len() != ring.nvars() {
        return Err(Error::InvalidInput("origin has the wrong number of coordinates".into()));
    }
    let subs: Vec<Polynomial> = origin
        .iter()
        .enumerate()
        .map(|(i, c)| &Polynomial::var(ring, i) + &Polynomial::constant(ring, c.clone()))
        .collect();
    p.compose(&subs, truncate_at)
}

/// 1/u as a power series truncated at `order`; u(0) must be nonzero.
fn series_inverse(u: &Polynomial, order: u32) -> Result<Polynomial> {
    let field = u.field();
    let c = u.coefficient(&Monomial::ONE);
    let c_inv = field.inv(&c).ok_or_else(|| Error::Internal("series has no constant term".into()))?;
    // u = c(1 + t), 1/u = c⁻¹ Σ (−t)^j
    let t = &u.scale(&c_inv) - &Polynomial::one(u.ring());
    let neg_t = t.neg();
    let mut acc = Polynomial::one(u.ring());
    let mut power = Polynomial::one(u.ring());
    for _ in 0..order {
        power = (&power * &neg_t).truncate(order);
        acc = &acc + &power;
    }
    Ok(acc.scale(&c_inv))
}

/// Power series s in the variables other than `solve_var` with
/// g(x + origin)|_{x_v = s} ≡ 0 up to terms of degree > `order`.
///
/// The result lives in `g.ring().without(&[solve_var])`, in coordinates
/// centred at `origin`. Newton iteration on truncated series; the residual is
/// checked before returning.
pub fn implicit_series(g: &Polynomial, origin: &[Scalar], solve_var: usize, order: u32) -> Result<Polynomial> {
    let ring = g.ring();
    let field = g.field();
    if solve_var >= ring.nvars() {
        return Err(Error::InvalidVariable(solve_var));
    }
    let gl = translate(g, origin, Some(order))?;
    if !field.is_zero(&gl.coefficient(&Monomial::ONE)) {
        return Err(Error::InvalidInput("the point does not lie on g = 0".into()));
    }
    if field.is_zero(&gl.coefficient(&Monomial::variable(solve_var, 1))) {
        return Err(Error::DgVanishes);
    }
    let rest = ring.without(&[solve_var]);
    let subs = |s: &Polynomial| -> Vec<Polynomial> {
        (0..ring.nvars())
            .map(|i| match i.cmp(&solve_var) {
                std::cmp::Ordering::Less => Polynomial::var(&rest, i),
                std::cmp::Ordering::Equal => s.clone(),
                std::cmp::Ordering::Greater => Polynomial::var(&rest, i - 1),
            })
            .collect()
    };
    let dg = gl.derivative(solve_var)?;
    let mut s = Polynomial::zero(&rest);
    for _ in 0..=order {
        let residual = gl.compose(&subs(&s), Some(order))?;
        if residual.is_zero() {
            return Ok(s);
        }
        let slope = dg.compose(&subs(&s), Some(order))?;
        let step = (&residual * &series_inverse(&slope, order)?).truncate(order);
        s = (&s - &step).truncate(order);
    }
    Err(Error::Internal("implicit series did not converge".into()))
}

/// Coordinates of `point` in its chart, as scalars of the point's field.
fn chart_origin(point: &SingularPoint) -> Vec<Scalar> {
    point
        .coordinates
        .coordinates()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != point.chart)
        .map(|(_, &c)| Scalar::Small(c))
        .collect()
}

/// Expand the branch function at `point` to order 3 in local coordinates on
/// the cover's base, absorb the constant into y and check that the linear
/// part vanishes.
pub fn local_expansion(y: &DoubleCoverDatum, point: &SingularPoint) -> Result<LocalModel> {
    if point.dg_nonzero == Some(false) {
        return Err(Error::DgVanishes);
    }
    let k = point.field();
    let field = Field::Binary(k);
    let base = y.field();
    let tower = Tower::default();
    let plain = chart_ring(y.ring(), point.chart);
    let cring = plain.with_field(field);
    let lift = |p: &Polynomial| {
        dehomogenize(p, point.chart, &plain)
            .map_coefficients(&cring, |c| Ok(Scalar::Small(tower.embed(c.small(), base, k))))
    };
    let origin = chart_origin(point);
    let order = TRUNCATION_ORDER;
    let ft = translate(&lift(y.f())?, &origin, Some(order))?;
    let h = match y.g() {
        Some(g) => {
            let gl = lift(g)?;
            let gt = translate(&gl, &origin, Some(1))?;
            let v = (0..cring.nvars())
                .find(|&j| !field.is_zero(&gt.coefficient(&Monomial::variable(j, 1))))
                .ok_or(Error::DgVanishes)?;
            let s = implicit_series(&gl, &origin, v, order)?;
            let rest = s.ring().clone();
            let subs: Vec<Polynomial> = (0..cring.nvars())
                .map(|i| match i.cmp(&v) {
                    std::cmp::Ordering::Less => Polynomial::var(&rest, i),
                    std::cmp::Ordering::Equal => s.clone(),
                    std::cmp::Ordering::Greater => Polynomial::var(&rest, i - 1),
                })
                .collect();
            ft.compose(&subs, Some(order))?
        }
        None => ft,
    };
    let y0 = Scalar::Small(point.y_value.1);
    if h.coefficient(&Monomial::ONE) != field.mul(&y0, &y0) {
        return Err(Error::Internal("y-value does not square to f at the point".into()));
    }
    if h.terms().iter().any(|(m, _)| m.total_degree() == 1) {
        return Err(Error::Internal(format!(
            "linear part of the local expansion is nonzero at {}",
            point.coordinates
        )));
    }
    LocalModel::new(h.homogeneous_part(2), h.homogeneous_part(3))
}

/// Rank of the polar form B(u, v) = q(u+v) − q(u) − q(v) and a basis of its
/// radical. In characteristic 2 the form is alternating, so the rank is even.
pub fn polar_rank(q: &Polynomial) -> Result<(usize, Vec<Vec<u128>>)> {
    let bf = q.field().as_binary().ok_or_else(|| Error::WrongField("polar rank is computed over F_2^k".into()))?;
    check_form(q, 2, "quadratic")?;
    let m = q.ring().nvars();
    let mut b = vec![vec![0u128; m]; m];
    for (mono, c) in q.terms() {
        let support: Vec<usize> = (0..m).filter(|&i| mono.exp(i) > 0).collect();
        if let [i, j] = support[..] {
            b[i][j] = c.small();
            b[j][i] = c.small();
        }
    }
    let radical = null_space(bf, b, m);
    Ok((m - radical.len(), radical))
}

/// The normal-form decision: polar rank m for m even; for m odd, polar rank
/// m − 1 and a nonzero cubic on the radical line.
pub fn classify_singularity(local: &LocalModel) -> SingularityClass {
    let m = local.m();
    let (rank, radical) = polar_rank(local.quadratic()).expect("local models are char-2 forms");
    if m.is_multiple_of(2) {
        return if rank == m {
            SingularityClass::EvenNondegenerate
        } else {
            SingularityClass::Bad(BadReason::RankDeficit)
        };
    }
    if rank + 1 != m {
        return SingularityClass::Bad(BadReason::RankDeficit);
    }
    // q(r) r² is a square and is absorbed into y; cross terms with r vanish
    let r: Vec<Scalar> = radical[0].iter().map(|&c| Scalar::Small(c)).collect();
    let value = local.cubic().evaluate(&r);
    if local.cubic().field().is_zero(&value) {
        SingularityClass::Bad(BadReason::CubicVanishes)
    } else {
        SingularityClass::OddNondegenerate
    }
}

/// Classify one singular point of `y`. A vanishing dg is a verdict, not an
/// error; internal inconsistencies still propagate.
pub fn classify_point(y: &DoubleCoverDatum, point: &SingularPoint) -> Result<SingularityClass> {
    match local_expansion(y, point) {
        Ok(local) => Ok(classify_singularity(&local)),
        Err(Error::DgVanishes) => Ok(SingularityClass::Bad(BadReason::DgVanishes)),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::f2_ring;
    use crate::polyring::{parse_poly, print_poly, Ring};
    use crate::solve::PointOverExtension;
    use std::sync::Arc;

    fn f2(n: usize) -> Arc<Ring> {
        f2_ring(n)
    }

    fn local(q: &str, c: &str, ring: &Arc<Ring>) -> LocalModel {
        LocalModel::new(parse_poly(q, ring).unwrap(), parse_poly(c, ring).unwrap()).unwrap()
    }

    #[test]
    fn implicit_series_examples() {
        let ring = f2(3);
        let zero = vec![Scalar::Small(0); 3];
        let g = parse_poly("x0 + x1*x2", &ring).unwrap();
        assert_eq!(print_poly(&implicit_series(&g, &zero, 0, 3).unwrap()), "x1*x2");
        // x0(1 + x1) = x2², so x0 = x2² + x1x2² + …
        let g = parse_poly("x0 + x0*x1 + x2^2", &ring).unwrap();
        assert_eq!(print_poly(&implicit_series(&g, &zero, 0, 3).unwrap()), "x1*x2^2+x2^2");
        let g = parse_poly("x1*x2 + x0^2", &ring).unwrap();
        assert_eq!(implicit_series(&g, &zero, 0, 3), Err(Error::DgVanishes));
    }

    #[test]
    fn implicit_series_off_origin() {
        let ring = f2(3);
        let g = parse_poly("x0*x1 + x2^3 + 1", &ring).unwrap();
        let origin = vec![Scalar::Small(1), Scalar::Small(1), Scalar::Small(0)];
        let s = implicit_series(&g, &origin, 0, 3).unwrap();
        let rest = s.ring().clone();
        let subs = vec![s.clone(), Polynomial::var(&rest, 0), Polynomial::var(&rest, 1)];
        let residual = translate(&g, &origin, None).unwrap().compose(&subs, None).unwrap();
        assert!(residual.terms().iter().all(|(m, _)| m.total_degree() > 3));
    }

    #[test]
    fn polar_rank_examples() {
        let ring = f2(4);
        assert_eq!(polar_rank(&parse_poly("x0*x1 + x2*x3", &ring).unwrap()).unwrap(), (4, vec![]));
        let ring = f2(1);
        assert_eq!(polar_rank(&parse_poly("x0^2", &ring).unwrap()).unwrap(), (0, vec![vec![1]]));
        let ring = f2(3);
        assert_eq!(polar_rank(&parse_poly("x0^2 + x1*x2", &ring).unwrap()).unwrap(), (2, vec![vec![1, 0, 0]]));
    }

    #[test]
    fn classification_examples() {
        let r4 = f2(4);
        assert_eq!(
            classify_singularity(&local("x0*x1 + x2*x3", "x0^3 + x1*x2*x3", &r4)),
            SingularityClass::EvenNondegenerate
        );
        assert_eq!(classify_singularity(&local("x0*x1 + x2^2", "0", &r4)), SingularityClass::Bad(BadReason::RankDeficit));
        let r3 = f2(3);
        assert_eq!(classify_singularity(&local("x1*x2", "x0^3", &r3)), SingularityClass::OddNondegenerate);
        assert_eq!(classify_singularity(&local("x0^2 + x1*x2", "x0^3", &r3)), SingularityClass::OddNondegenerate);
        assert_eq!(classify_singularity(&local("x1*x2", "0", &r3)), SingularityClass::Bad(BadReason::CubicVanishes));
        assert_eq!(classify_singularity(&local("x1*x2", "x0*x1^2", &r3)), SingularityClass::Bad(BadReason::CubicVanishes));
        assert_eq!(classify_singularity(&local("x0^2", "x0^3", &r3)), SingularityClass::Bad(BadReason::RankDeficit));
    }

    #[test]
    fn local_model_rejects_mixed_degrees() {
        let ring = f2(2);
        let q = parse_poly("x0*x1 + x0", &ring).unwrap();
        assert!(LocalModel::new(q, Polynomial::zero(&ring)).is_err());
    }

    #[test]
    fn expansion_reads_off_quadratic_part() {
        // chart x0 = 1 of a quartic: 1 + x1x2 + x3x4 + x1³ + higher terms
        let ring = f2(5);
        let f = parse_poly("x0^4 + x0^2*x1*x2 + x0^2*x3*x4 + x0*x1^3 + x1*x2*x3*x4", &ring).unwrap();
        let y = DoubleCoverDatum::new(4, 2, f, None).unwrap();
        let point = SingularPoint {
            chart: 0,
            coordinates: PointOverExtension::new(BinaryField::f2(), vec![1, 0, 0, 0, 0]),
            y_value: (BinaryField::f2(), 1),
            dg_nonzero: None,
        };
        let l = local_expansion(&y, &point).unwrap();
        assert_eq!(l.m(), 4);
        assert_eq!(print_poly(l.quadratic()), "x1*x2+x3*x4");
        assert_eq!(print_poly(l.cubic()), "x1^3");
        assert_eq!(classify_singularity(&l), SingularityClass::EvenNondegenerate);
    }

    #[test]
    fn expansion_with_g_eliminates_a_variable() {
        // g = x0x1 + x2x3 + x4², chart x0 = 1: x1 = x2x3 + x4²
        let ring = f2(5);
        let f = parse_poly("x0^3*x1 + x0^2*x2*x3 + x0*x4^3 + x2^4", &ring).unwrap();
        let g = parse_poly("x0*x1 + x2*x3 + x4^2", &ring).unwrap();
        let y = DoubleCoverDatum::new(3, 2, f, Some(g)).unwrap();
        let point = SingularPoint {
            chart: 0,
            coordinates: PointOverExtension::new(BinaryField::f2(), vec![1, 0, 0, 0, 0]),
            y_value: (BinaryField::f2(), 0),
            dg_nonzero: Some(true),
        };
        let l = local_expansion(&y, &point).unwrap();
        assert_eq!(l.m(), 3);
        // x1 + x2x3 restricted: x2x3 + x2x3 + x4² = x4²
        assert_eq!(print_poly(l.quadratic()), "x4^2");
        assert_eq!(print_poly(l.cubic()), "x4^3");
        assert_eq!(classify_singularity(&l), SingularityClass::Bad(BadReason::RankDeficit));
    }

    #[test]
    fn nonzero_linear_part_is_reported() {
        let ring = f2(3);
        let f = parse_poly("x0^3*x1 + x2^4", &ring).unwrap();
        let y = DoubleCoverDatum::new(2, 2, f, None).unwrap();
        let point = SingularPoint {
            chart: 0,
            coordinates: PointOverExtension::new(BinaryField::f2(), vec![1, 0, 0]),
            y_value: (BinaryField::f2(), 0),
            dg_nonzero: None,
        };
        assert!(matches!(local_expansion(&y, &point), Err(Error::Internal(_))));
    }

    #[test]
    fn class_serializes_with_reason() {
        let s = serde_json::to_string(&SingularityClass::Bad(BadReason::CubicVanishes)).unwrap();
        assert_eq!(s, r#"{"verdict":"Bad","reason":"CubicVanishes"}"#);
        let s = serde_json::to_string(&SingularityClass::OddNondegenerate).unwrap();
        assert_eq!(s, r#"{"verdict":"OddNondegenerate"}"#);
    }
}
