//! Projective smoothness by the Jacobian criterion.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, radical_membership_gb, GbLimits, GroebnerBasis, Ideal};
use crate::polyring::{print_poly, Field, Monomial, MonomialOrder, Polynomial, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SmoothnessMethod {
    DirectChar0,
    ModPReduction(u64),
    DirectCharP(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SmoothnessVerdict {
    Smooth,
    Singular,
    Inconclusive,
}

/// Outcome of testing xᵢ ∈ rad(J).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableMembership {
    pub variable: String,
    pub in_radical: bool,
    /// An exponent e with xᵢ^e ∈ J, when one was exhibited.
    pub power: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularWitness {
    /// Reduced DegRevLex basis of the Jacobian ideal.
    pub jacobian_basis: Vec<String>,
    /// A point of the singular locus with small coordinates, when one exists.
    pub point: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessCertificate {
    pub verdict: SmoothnessVerdict,
    pub method: SmoothnessMethod,
    pub reason: Option<String>,
    pub transcript: Vec<VariableMembership>,
    pub witness: Option<SingularWitness>,
    /// Earlier attempts that did not settle the question.
    pub attempts: Vec<String>,
}

impl SmoothnessCertificate {
    pub fn inconclusive(method: SmoothnessMethod, reason: String) -> SmoothnessCertificate {
        SmoothnessCertificate {
            verdict: SmoothnessVerdict::Inconclusive,
            method,
            reason: Some(reason),
            transcript: Vec::new(),
            witness: None,
            attempts: Vec::new(),
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.verdict == SmoothnessVerdict::Smooth
    }
}

/// ⟨F, ∂F/∂x₀, …⟩. F is kept because Euler's relation fails when the
/// characteristic divides deg F.
pub fn jacobian_ideal(f: &Polynomial) -> Result<Ideal> {
    let mut gens = vec![f.clone()];
    for i in 0..f.ring().nvars() {
        gens.push(f.derivative(i)?);
    }
    Ideal::new(f.ring(), gens)
}

fn direct_method(field: Field) -> SmoothnessMethod {
    match field {
        Field::Rationals => SmoothnessMethod::DirectChar0,
        other => SmoothnessMethod::DirectCharP(other.characteristic()),
    }
}

fn check_hypersurface(f: &Polynomial) -> Result<()> {
    if f.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial defines no hypersurface".into()));
    }
    if f.ring().nvars() < 2 {
        return Err(Error::InvalidInput("a projective hypersurface needs at least two variables".into()));
    }
    if f.ring().weights().iter().any(|&w| w != 1) || !f.is_homogeneous() {
        return Err(Error::InvalidInput("F must be homogeneous in a standard-graded ring".into()));
    }
    Ok(())
}

/// Smallest e ≤ bound with xᵢ^e ∈ ⟨gb⟩.
fn nilpotency(gb: &GroebnerBasis, var: usize, bound: u32) -> Result<Option<u32>> {
    let ring = gb.ring();
    for e in 1..=bound {
        let p = Polynomial::monomial(ring, Monomial::variable(var, e), ring.field().one());
        if gb.normal_form(&p)?.is_zero() {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

fn box_values(field: Field) -> Vec<Scalar> {
    match field {
        Field::Binary(_) => vec![field.zero(), field.one()],
        _ => vec![field.zero(), field.one(), field.from_i64(-1)],
    }
}

/// A projective point with coordinates in {0, ±1} on which every
/// generator vanishes.
fn small_singular_point(ideal: &Ideal) -> Option<Vec<String>> {
    const BUDGET: usize = 20_000;
    let ring = ideal.ring();
    let field = ring.field();
    let values = box_values(field);
    let n = ring.nvars();
    let mut tried = 0;
    for lead in 0..n {
        let mut digits = vec![0usize; n - lead - 1];
        loop {
            tried += 1;
            if tried > BUDGET {
                return None;
            }
            let mut point = vec![field.zero(); n];
            point[lead] = field.one();
            for (k, &d) in digits.iter().enumerate() {
                point[lead + 1 + k] = values[d].clone();
            }
            if ideal.generators().iter().all(|g| field.is_zero(&g.evaluate(&point))) {
                let one_var = |c: &Scalar| print_poly(&Polynomial::constant(ring, c.clone()));
                return Some(point.iter().map(one_var).collect());
            }
            // next digit vector
            let mut k = 0;
            while k < digits.len() && digits[k] + 1 == values.len() {
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
            digits[k] += 1;
        }
    }
    None
}

/// Jacobian criterion in the polynomial's own field: smooth iff every
/// variable lies in the radical of the Jacobian ideal.
pub fn is_smooth_projective_hypersurface(f: &Polynomial, limits: &GbLimits) -> Result<SmoothnessCertificate> {
    check_hypersurface(f)?;
    let ring = f.ring().clone();
    let method = direct_method(ring.field());
    let ideal = jacobian_ideal(f)?;
    let gb = match buchberger(&ideal, MonomialOrder::DegRevLex, limits) {
        Ok(gb) => gb,
        Err(Error::Inconclusive(r)) => return Ok(SmoothnessCertificate::inconclusive(method, r)),
        Err(e) => return Err(e),
    };
    let mut transcript = Vec::new();
    if let Some(standard) = gb.standard_monomials() {
        // homogeneous with finite quotient: every form of degree > top vanishes
        let top = standard.iter().map(|m| m.total_degree()).max().unwrap_or(0);
        for i in 0..ring.nvars() {
            let power = nilpotency(&gb, i, top + 1)?;
            transcript.push(VariableMembership {
                variable: ring.var_name(i).to_string(),
                in_radical: power.is_some(),
                power,
            });
        }
    } else {
        for i in 0..ring.nvars() {
            let member = match radical_membership_gb(&Polynomial::var(&ring, i), &gb, limits) {
                Ok(m) => m,
                Err(Error::Inconclusive(r)) => return Ok(SmoothnessCertificate::inconclusive(method, r)),
                Err(e) => return Err(e),
            };
            transcript.push(VariableMembership { variable: ring.var_name(i).to_string(), in_radical: member, power: None });
        }
    }
    let smooth = transcript.iter().all(|t| t.in_radical);
    if smooth && gb.standard_monomials().is_none() {
        return Err(Error::Internal("all variables in the radical of a non-primary Jacobian ideal".into()));
    }
    let witness = (!smooth).then(|| SingularWitness {
        jacobian_basis: gb.basis().iter().map(print_poly).collect(),
        point: small_singular_point(&ideal),
    });
    Ok(SmoothnessCertificate {
        verdict: if smooth { SmoothnessVerdict::Smooth } else { SmoothnessVerdict::Singular },
        method,
        reason: None,
        transcript,
        witness,
        attempts: Vec::new(),
    })
}

/// Certify smoothness over ℚ from smoothness of the reduction mod an odd
/// prime. A singular reduction never yields a Singular verdict.
pub fn smoothness_via_reduction(f: &Polynomial, p: u64, limits: &GbLimits) -> Result<SmoothnessCertificate> {
    check_hypersurface(f)?;
    if f.field() != Field::Rationals {
        return Err(Error::WrongField("reduction starts from a polynomial over Q".into()));
    }
    if p == 2 {
        return Err(Error::InvalidInput("the reduction prime must be odd".into()));
    }
    let fp_field = Field::prime(p)?;
    let method = SmoothnessMethod::ModPReduction(p);
    if !f.is_integral() {
        return Ok(SmoothnessCertificate::inconclusive(method, "flatness: coefficients are not integers".into()));
    }
    if f.rational_content_is_divisible_by(p) {
        return Ok(SmoothnessCertificate::inconclusive(method, format!("flatness: content divisible by {p}")));
    }
    let reduced = f.reduce_to(fp_field)?;
    for i in 0..f.ring().nvars() {
        if reduced.degree_in(i) != f.degree_in(i) {
            return Ok(SmoothnessCertificate::inconclusive(
                method,
                format!("flatness: degree in {} drops mod {p}", f.ring().var_name(i)),
            ));
        }
    }
    let cert = is_smooth_projective_hypersurface(&reduced, limits)?;
    Ok(match cert.verdict {
        SmoothnessVerdict::Smooth => SmoothnessCertificate { method, ..cert },
        SmoothnessVerdict::Singular => SmoothnessCertificate {
            verdict: SmoothnessVerdict::Inconclusive,
            method,
            reason: Some(format!("reduction mod {p} is singular")),
            transcript: cert.transcript,
            witness: None,
            attempts: Vec::new(),
        },
        SmoothnessVerdict::Inconclusive => SmoothnessCertificate { method, ..cert },
    })
}

/// Try the primes in order until a reduction certifies smoothness; run the
/// direct characteristic-0 computation afterwards when `direct` is set.
pub fn certify_over_rationals(
    f: &Polynomial,
    primes: &[u64],
    direct: bool,
    limits: &GbLimits,
) -> Result<SmoothnessCertificate> {
    let mut attempts = Vec::new();
    for &p in primes {
        let cert = smoothness_via_reduction(f, p, limits)?;
        if cert.is_smooth() {
            return Ok(SmoothnessCertificate { attempts, ..cert });
        }
        attempts.push(format!("mod {p}: {}", cert.reason.unwrap_or_default()));
    }
    if direct {
        let cert = is_smooth_projective_hypersurface(f, limits)?;
        return Ok(SmoothnessCertificate { attempts, ..cert });
    }
    let last = *primes.last().unwrap_or(&0);
    Ok(SmoothnessCertificate {
        attempts,
        ..SmoothnessCertificate::inconclusive(
            SmoothnessMethod::ModPReduction(last),
            "no reduction certified smoothness and the direct method was not requested".into(),
        )
    })
}
