//! Solving zero-dimensional systems over the algebraic closure of F₂.
//!
//! For each variable in turn the minimal polynomial of that variable in the
//! quotient ring is factored; one root per irreducible factor is adjoined,
//! fixed by a linear generator, and the search recurses. The Frobenius orbit
//! of every representative is expanded at the end, so all conjugate points
//! are listed explicitly.

mod embed;
mod unipoly;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

pub use embed::Tower;
pub(crate) use unipoly::null_space;
pub use unipoly::{berlekamp_factor, berlekamp_rank, roots, squarefree_decomposition, UniPoly};

use crate::error::{Error, Result};
use crate::groebner::{buchberger, extend_basis, FiniteNormalForm, GbLimits, GroebnerBasis, IPoly, Ideal};
use crate::polyring::{format_binary, BinaryField, Field, Monomial, MonomialOrder, Polynomial, Ring, Scalar};

/// Default cap on the degree over F₂ of the fields the solver may build.
/// Critical loci of quartic double covers already need degrees 60 and 67,
/// so the default is the whole representable range.
pub const DEFAULT_MAX_EXT_DEGREE: u32 = crate::polyring::MAX_EXT_DEGREE;

/// A point with all coordinates in one F_{2^k}, the smallest field that
/// contains them and the base field of the system.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PointOverExtension {
    field: BinaryField,
    coordinates: Vec<u128>,
}

impl PointOverExtension {
    pub fn new(field: BinaryField, coordinates: Vec<u128>) -> PointOverExtension {
        PointOverExtension { field, coordinates }
    }

    pub fn field(&self) -> BinaryField {
        self.field
    }

    pub fn field_degree(&self) -> u32 {
        self.field.degree()
    }

    pub fn coordinates(&self) -> &[u128] {
        &self.coordinates
    }

    pub fn coordinate_strings(&self) -> Vec<String> {
        self.coordinates.iter().map(|&c| format_binary(&self.field, c)).collect()
    }

    fn sort_key(&self) -> (u32, Vec<u128>) {
        (self.field.degree(), self.coordinates.clone())
    }
}

impl fmt::Display for PointOverExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coordinate_strings().join(", "))
    }
}

impl Serialize for PointOverExtension {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PointOverExtension", 2)?;
        st.serialize_field("field_degree", &self.field.degree())?;
        st.serialize_field("coordinates", &self.coordinate_strings())?;
        st.end()
    }
}

fn binary_field_of(ring: &Ring) -> Result<BinaryField> {
    match ring.field() {
        Field::Binary(bf) if bf == BinaryField::new(bf.degree())? => Ok(bf),
        other => Err(Error::WrongField(format!("solver needs a standard binary field, got {other}"))),
    }
}

/// Minimal polynomial of variable `var` in the quotient by `gb`.
fn minimal_polynomial(gb: &GroebnerBasis, var: usize) -> Result<UniPoly> {
    let bf = binary_field_of(gb.ring())?;
    let standard = gb.standard_monomials().ok_or(Error::NotZeroDimensional)?;
    let index: HashMap<Monomial, usize> = standard.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let dim = standard.len();
    let nf = FiniteNormalForm::new(gb);
    let to_vec = |p: &IPoly<u128>| {
        let mut v = vec![0u128; dim];
        for (m, c) in p {
            v[index[m]] = *c;
        }
        v
    };
    let x = Monomial::variable(var, 1);
    // echelon rows: (vector, pivot, combination of powers)
    let mut rows: Vec<(Vec<u128>, usize, Vec<u128>)> = Vec::new();
    let mut cur: IPoly<u128> = nf.reduce(vec![(Monomial::ONE, 1)]);
    for j in 0..=dim {
        let mut v = to_vec(&cur);
        let mut comb = vec![0u128; dim + 1];
        comb[j] = 1;
        for (row, pivot, rc) in &rows {
            let t = v[*pivot];
            if t != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a ^= bf.mul(t, *b);
                }
                for (a, b) in comb.iter_mut().zip(rc) {
                    *a ^= bf.mul(t, *b);
                }
            }
        }
        match v.iter().position(|&c| c != 0) {
            None => return Ok(UniPoly::new(bf, comb).monic()),
            Some(p) => {
                let inv = bf.inv(v[p]).expect("nonzero");
                v.iter_mut().for_each(|a| *a = bf.mul(*a, inv));
                comb.iter_mut().for_each(|a| *a = bf.mul(*a, inv));
                rows.push((v, p, comb));
            }
        }
        let shifted: IPoly<u128> = cur.iter().map(|(m, c)| (m.mul(&x), *c)).collect();
        cur = nf.reduce(shifted);
    }
    Err(Error::Internal("minimal polynomial search exceeded the quotient dimension".into()))
}

fn embed_basis(gb: &GroebnerBasis, to: BinaryField, tower: &Tower) -> Result<GroebnerBasis> {
    let from = binary_field_of(gb.ring())?;
    let ring = gb.ring().with_field(Field::Binary(to));
    let basis = gb
        .basis()
        .iter()
        .map(|p| p.map_coefficients(&ring, |c| Ok(Scalar::Small(tower.embed(c.small(), from, to)))))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroebnerBasis::from_reduced_unchecked(&ring, basis, gb.order()))
}

struct Search<'a> {
    cap: u32,
    limits: &'a GbLimits,
    tower: Tower,
    found: Vec<(BinaryField, Vec<u128>)>,
}

impl Search<'_> {
    fn run(&mut self, gb: GroebnerBasis, var: usize, carried: Vec<u128>) -> Result<()> {
        if gb.is_unit() {
            return Ok(());
        }
        let field = binary_field_of(gb.ring())?;
        if var == gb.ring().nvars() {
            self.found.push((field, carried));
            return Ok(());
        }
        let mu = minimal_polynomial(&gb, var)?;
        for (h, _) in berlekamp_factor(&mu) {
            let e = h.degree().expect("nonconstant factor") as u32;
            let target = field.degree() * e;
            if target > self.cap.min(crate::polyring::MAX_EXT_DEGREE) {
                return Err(Error::Inconclusive(format!(
                    "extension degree {target} exceeds cap {}: irreducible factor {h} of the minimal polynomial of {} over F_2^{}",
                    self.cap,
                    gb.ring().var_name(var),
                    field.degree()
                )));
            }
            let (sub_gb, alpha, carried) = if e == 1 {
                (gb.clone(), h.coeffs()[0], carried.clone())
            } else {
                let big = BinaryField::new(target)?;
                let hb = UniPoly::new(big, h.coeffs().iter().map(|&c| self.tower.embed(c, field, big)).collect());
                let alpha = *roots(&hb)
                    .first()
                    .ok_or_else(|| Error::Internal(format!("factor {h} has no root in F_2^{target}")))?;
                let carried = carried.iter().map(|&c| self.tower.embed(c, field, big)).collect();
                (embed_basis(&gb, big, &self.tower)?, alpha, carried)
            };
            let ring = sub_gb.ring().clone();
            let fix = &Polynomial::var(&ring, var) - &Polynomial::constant(&ring, Scalar::Small(alpha));
            let next = extend_basis(&sub_gb, &[fix], self.limits)?;
            let mut carried = carried;
            carried.push(alpha);
            self.run(next, var + 1, carried)?;
        }
        Ok(())
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / num_integer::gcd(a, b) * b
}

/// Evaluate `p` (over a standard binary field) at a point of a larger field.
pub fn evaluate_at(p: &Polynomial, point: &PointOverExtension, tower: &Tower) -> Result<u128> {
    let from = binary_field_of(p.ring())?;
    let to = point.field;
    if !to.degree().is_multiple_of(from.degree()) {
        return Err(Error::WrongField(format!(
            "F_2^{} does not contain F_2^{}",
            to.degree(),
            from.degree()
        )));
    }
    let mut acc = 0u128;
    for (m, c) in p.terms() {
        let mut t = tower.embed(c.small(), from, to);
        for (i, &x) in point.coordinates.iter().enumerate() {
            let e = m.exp(i);
            if e > 0 {
                t = to.mul(t, to.pow(x, e as u128));
            }
        }
        acc ^= t;
    }
    Ok(acc)
}

/// All conjugates of a representative, each in its minimal field, that
/// satisfy `generators`.
fn expand_orbit(
    field: BinaryField,
    coords: &[u128],
    base: BinaryField,
    generators: &[Polynomial],
    tower: &Tower,
) -> Result<Vec<PointOverExtension>> {
    let d0 = coords.iter().fold(1, |acc, &c| lcm(acc, field.element_degree(c)));
    let d = lcm(d0, base.degree());
    let small = BinaryField::new(d)?;
    let rep: Vec<u128> = coords
        .iter()
        .map(|&c| {
            tower
                .descend(c, field, small)
                .ok_or_else(|| Error::Internal("coordinate outside its computed field".into()))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for j in 0..d {
        let p = PointOverExtension::new(small, rep.iter().map(|&c| small.frobenius(c, j)).collect());
        let mut ok = true;
        for g in generators {
            if evaluate_at(g, &p, tower)? != 0 {
                ok = false;
                break;
            }
        }
        if ok && !out.contains(&p) {
            out.push(p);
        }
    }
    if out.is_empty() {
        return Err(Error::Internal("solver produced a point that fails the equations".into()));
    }
    Ok(out)
}

/// All points of the zero set of `ideal` over the algebraic closure of F₂,
/// given a Gröbner basis of it. Every point is checked against the ideal's
/// generators before it is returned.
pub fn solve_with_basis(
    ideal: &Ideal,
    gb: &GroebnerBasis,
    max_ext_degree: u32,
    limits: &GbLimits,
) -> Result<Vec<PointOverExtension>> {
    let base = binary_field_of(ideal.ring())?;
    if !gb.is_zero_dimensional() {
        return Err(Error::NotZeroDimensional);
    }
    let mut search = Search { cap: max_ext_degree, limits, tower: Tower::default(), found: Vec::new() };
    search.run(gb.clone(), 0, Vec::new())?;
    let mut points = BTreeSet::new();
    for (field, coords) in &search.found {
        for p in expand_orbit(*field, coords, base, ideal.generators(), &search.tower)? {
            points.insert((p.sort_key(), p));
        }
    }
    Ok(points.into_iter().map(|(_, p)| p).collect())
}

/// All points of a zero-dimensional ideal over F₂ or F_{2^k} with
/// coordinates in fields of degree at most `max_ext_degree`, listed with all
/// their conjugates, sorted by field degree then coordinates.
pub fn solve_zero_dim(ideal: &Ideal, max_ext_degree: u32, limits: &GbLimits) -> Result<Vec<PointOverExtension>> {
    binary_field_of(ideal.ring())?;
    let gb = buchberger(ideal, MonomialOrder::DegRevLex, limits)?;
    solve_with_basis(ideal, &gb, max_ext_degree, limits)
}

/// Univariate polynomial in the single variable of `p`'s ring, or in
/// variable `var` when the others do not occur.
pub fn to_unipoly(p: &Polynomial, var: usize) -> Result<UniPoly> {
    let bf = binary_field_of(p.ring())?;
    let mut coeffs = vec![0u128; p.degree_in(var) as usize + 1];
    for (m, c) in p.terms() {
        if m.total_degree() != m.exp(var) {
            return Err(Error::InvalidInput(format!("polynomial is not univariate in {}", p.ring().var_name(var))));
        }
        coeffs[m.exp(var) as usize] = c.small();
    }
    Ok(UniPoly::new(bf, coeffs))
}

pub fn from_unipoly(u: &UniPoly, ring: &Arc<Ring>, var: usize) -> Polynomial {
    Polynomial::from_terms(
        ring,
        u.coeffs().iter().enumerate().map(|(i, &c)| (Monomial::variable(var, i as u32), Scalar::Small(c))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn ideal(field: Field, n: usize, gens: &[&str]) -> Ideal {
        let r = Ring::standard(n, field);
        Ideal::new(&r, gens.iter().map(|s| parse_poly(s, &r).unwrap()).collect()).unwrap()
    }

    fn strings(points: &[PointOverExtension]) -> Vec<String> {
        points.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn two_rational_points() {
        let i = ideal(Field::f2(), 2, &["x0^2+x0", "x1+x0"]);
        let pts = solve_zero_dim(&i, 24, &GbLimits::default()).unwrap();
        assert_eq!(strings(&pts), vec!["(0, 0)", "(1, 1)"]);
    }

    #[test]
    fn conjugate_pair_in_f4() {
        let i = ideal(Field::f2(), 1, &["x0^2+x0+1"]);
        let pts = solve_zero_dim(&i, 24, &GbLimits::default()).unwrap();
        assert_eq!(strings(&pts), vec!["(w)", "(w+1)"]);
        assert!(pts.iter().all(|p| p.field_degree() == 2));
    }

    #[test]
    fn mixed_degrees_meet_in_compositum() {
        // x0 in F4, x1 in F8: the points live in F64
        let i = ideal(Field::f2(), 2, &["x0^2+x0+1", "x1^3+x1+1"]);
        let pts = solve_zero_dim(&i, 24, &GbLimits::default()).unwrap();
        assert_eq!(pts.len(), 6);
        assert!(pts.iter().all(|p| p.field_degree() == 6));
    }

    #[test]
    fn cap_is_reported() {
        let i = ideal(Field::f2(), 1, &["x0^5+x0^2+1"]);
        let err = solve_zero_dim(&i, 4, &GbLimits::default()).unwrap_err();
        assert!(matches!(err, Error::Inconclusive(m) if m.contains("exceeds cap")));
    }

    #[test]
    fn base_field_f4() {
        // x0 = w and x0 = w + 1 are separate points over F4; x1^2 = x0 is
        // solved by the square root in F4
        let i = ideal(Field::binary(2).unwrap(), 2, &["x0 + w", "x1^2 + x0"]);
        let pts = solve_zero_dim(&i, 24, &GbLimits::default()).unwrap();
        assert_eq!(strings(&pts), vec!["(w, w+1)"]);
    }

    #[test]
    fn positive_dimensional_is_rejected() {
        let i = ideal(Field::f2(), 2, &["x0*x1"]);
        assert_eq!(solve_zero_dim(&i, 24, &GbLimits::default()), Err(Error::NotZeroDimensional));
    }

    #[test]
    fn unit_ideal_has_no_points() {
        let i = ideal(Field::f2(), 2, &["x0", "x0+1"]);
        assert!(solve_zero_dim(&i, 24, &GbLimits::default()).unwrap().is_empty());
    }
}
