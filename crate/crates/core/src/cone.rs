//! The closed PPD cone of a finite abelian group inside the even subspace.
//!
//! Coordinates are the values of `f` on the orbits `{x, -x}`. The cone is
//! cut out by `f(x) ≥ 0` for each orbit and `f̂(χ) ≥ 0` for each dual orbit;
//! goodness is membership in its interior. Rays are enumerated by double
//! description in exact arithmetic over the real subfield of `Q(ζ_e)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cyclotomic::{totient, Cyclotomic, RootSum};
use crate::error::{Error, Result};
use crate::fourier::{dft, GroupFunction};
use crate::group::FiniteAbelianGroup;
use crate::linalg;
use crate::scalar::{Scalar, FLOAT_EQ_TOL};

pub const DEFAULT_HREP_ORDER_BOUND: usize = 16;
pub const DEFAULT_DIMENSION_BOUND: usize = 10;

/// Coordinates on the even functions of a group, one per orbit `{x, -x}`.
#[derive(Clone, Debug)]
pub struct EvenBasis {
    group: FiniteAbelianGroup,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl EvenBasis {
    pub fn new(group: &FiniteAbelianGroup) -> Self {
        let orbits = group.inverse_orbits();
        let mut orbit_of = vec![0; group.order()];
        for (j, o) in orbits.iter().enumerate() {
            for &x in o {
                orbit_of[x] = j;
            }
        }
        EvenBasis {
            group: group.clone(),
            orbits,
            orbit_of,
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// Smallest member of each orbit.
    pub fn representatives(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o[0]).collect()
    }

    pub fn orbit_of(&self, x: usize) -> usize {
        self.orbit_of[x]
    }

    pub fn dim(&self) -> usize {
        self.orbits.len()
    }

    /// Orbit coordinates of an even function.
    pub fn coordinates<S: Scalar>(&self, f: &GroupFunction<S>) -> Result<Vec<S>> {
        self.group.ensure_same(f.group())?;
        let tol = FLOAT_EQ_TOL * f.max_magnitude().max(1.0);
        if !f.is_even(tol) {
            return Err(Error::Precondition("function is not even".into()));
        }
        Ok(self.orbits.iter().map(|o| f.value(o[0]).clone()).collect())
    }

    pub fn function<S: Scalar>(&self, coords: &[S]) -> Result<GroupFunction<S>> {
        if coords.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                found: coords.len(),
            });
        }
        Ok(GroupFunction::from_fn(&self.group, |x| coords[self.orbit_of[x]].clone()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InequalityKind {
    /// `f(x) ≥ 0` on an orbit of the group
    Point,
    /// `f̂(χ) ≥ 0` on an orbit of the dual
    Dual,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Inequality {
    pub kind: InequalityKind,
    pub orbit: usize,
    pub coeffs: Vec<Cyclotomic>,
}

impl Inequality {
    pub fn evaluate<S: Scalar>(&self, coords: &[S]) -> S {
        self.coeffs
            .iter()
            .zip(coords)
            .fold(S::zero(), |acc, (c, x)| acc.add(&S::from_exact(c).mul(x)))
    }

    fn evaluate_exact(&self, coords: &[Cyclotomic]) -> Cyclotomic {
        self.coeffs
            .iter()
            .zip(coords)
            .filter(|(c, x)| !c.is_zero() && !x.is_zero())
            .fold(Cyclotomic::zero(), |acc, (c, x)| acc.add(&c.mul(x)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ray {
    pub coords: Vec<Cyclotomic>,
    /// indices of the inequalities vanishing on the ray
    pub tight: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PolyhedralCone {
    pub basis: EvenBasis,
    pub inequalities: Vec<Inequality>,
    pub rays: Option<Vec<Ray>>,
}

impl PolyhedralCone {
    pub fn group(&self) -> &FiniteAbelianGroup {
        self.basis.group()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn rays(&self) -> Result<&[Ray]> {
        self.rays
            .as_deref()
            .ok_or_else(|| Error::Precondition("rays have not been computed".into()))
    }

    fn inequality_matrix(&self, rows: &[usize]) -> Vec<Vec<Cyclotomic>> {
        rows.iter().map(|&i| self.inequalities[i].coeffs.clone()).collect()
    }
}

/// The inequality description, point inequalities first, each block by orbit.
pub fn ppd_cone_hrep(group: &FiniteAbelianGroup) -> Result<PolyhedralCone> {
    ppd_cone_hrep_bounded(group, DEFAULT_HREP_ORDER_BOUND)
}

pub fn ppd_cone_hrep_bounded(group: &FiniteAbelianGroup, max_order: usize) -> Result<PolyhedralCone> {
    if group.order() > max_order {
        return Err(Error::BoundExceeded {
            what: "group order",
            actual: group.order(),
            bound: max_order,
        });
    }
    let basis = EvenBasis::new(group);
    let d = basis.dim();
    let mut inequalities = Vec::with_capacity(2 * d);
    for j in 0..d {
        let mut coeffs = vec![Cyclotomic::zero(); d];
        coeffs[j] = Cyclotomic::one();
        inequalities.push(Inequality {
            kind: InequalityKind::Point,
            orbit: j,
            coeffs,
        });
    }
    let e = group.conductor();
    let exp = group.exponent();
    for (j, dual_orbit) in basis.orbits().iter().enumerate() {
        let a = dual_orbit[0];
        let coeffs = basis
            .orbits()
            .iter()
            .map(|o| {
                let mut s = RootSum::new(e);
                for &x in o {
                    s.add_term((exp - group.pairing_exponent(a, x)) % exp, &Cyclotomic::one());
                }
                s.finish()
            })
            .collect();
        inequalities.push(Inequality {
            kind: InequalityKind::Dual,
            orbit: j,
            coeffs,
        });
    }
    Ok(PolyhedralCone {
        basis,
        inequalities,
        rays: None,
    })
}

fn sign(v: &Cyclotomic) -> Ordering {
    v.real_sign().expect("cone arithmetic stays real")
}

fn leading_normalized(v: Vec<Cyclotomic>) -> Vec<Cyclotomic> {
    let Some(lead) = v.iter().find(|c| !c.is_zero()) else {
        return v;
    };
    if lead.is_rational() && *lead == Cyclotomic::one() {
        return v;
    }
    let inv = lead.inv().expect("nonzero");
    v.iter().map(|c| c.mul(&inv)).collect()
}

struct Candidate {
    v: Vec<Cyclotomic>,
    zero: u128,
}

/// Fills the V-representation.
pub fn extremal_rays(cone: &PolyhedralCone) -> Result<PolyhedralCone> {
    extremal_rays_bounded(cone, DEFAULT_DIMENSION_BOUND)
}

pub fn extremal_rays_bounded(cone: &PolyhedralCone, max_dim: usize) -> Result<PolyhedralCone> {
    let d = cone.dim();
    if d > max_dim {
        return Err(Error::BoundExceeded {
            what: "cone dimension",
            actual: d,
            bound: max_dim,
        });
    }
    let n = cone.inequalities.len();
    if n > 128 {
        return Err(Error::BoundExceeded {
            what: "inequality count",
            actual: n,
            bound: 128,
        });
    }
    let point_block: Vec<usize> = (0..n)
        .filter(|&i| cone.inequalities[i].kind == InequalityKind::Point)
        .collect();
    if point_block != (0..d).collect::<Vec<_>>() {
        return Err(Error::Precondition("point inequalities must come first".into()));
    }
    let all_points: u128 = if d == 128 { u128::MAX } else { (1u128 << d) - 1 };
    let mut rays: Vec<Candidate> = (0..d)
        .map(|j| {
            let mut v = vec![Cyclotomic::zero(); d];
            v[j] = Cyclotomic::one();
            Candidate {
                v,
                zero: all_points & !(1u128 << j),
            }
        })
        .collect();
    for k in d..n {
        let ineq = &cone.inequalities[k];
        let values: Vec<Cyclotomic> = rays.iter().map(|r| ineq.evaluate_exact(&r.v)).collect();
        let signs: Vec<Ordering> = values.iter().map(sign).collect();
        let mut next = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            match signs[i] {
                Ordering::Greater => next.push(Candidate {
                    v: r.v.clone(),
                    zero: r.zero,
                }),
                Ordering::Equal => next.push(Candidate {
                    v: r.v.clone(),
                    zero: r.zero | (1u128 << k),
                }),
                Ordering::Less => {}
            }
        }
        for p in (0..rays.len()).filter(|&i| signs[i] == Ordering::Greater) {
            for q in (0..rays.len()).filter(|&i| signs[i] == Ordering::Less) {
                let common = rays[p].zero & rays[q].zero;
                if (common.count_ones() as usize) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, r)| t == p || t == q || r.zero & common != common);
                if !adjacent {
                    continue;
                }
                let (vp, vq) = (&values[p], &values[q]);
                let v: Vec<Cyclotomic> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| vp.mul(a).sub(&vq.mul(b)))
                    .collect();
                next.push(Candidate {
                    v: leading_normalized(v),
                    zero: common | (1u128 << k),
                });
            }
        }
        rays = next;
    }
    let mut out: Vec<Ray> = rays
        .into_iter()
        .map(|c| Ray {
            coords: canonical_ray(&c.v, cone.group().conductor()),
            tight: Vec::new(),
        })
        .collect();
    out.sort_by(|a, b| cmp_coords(&a.coords, &b.coords));
    out.dedup_by(|a, b| a.coords == b.coords);
    for r in &mut out {
        r.tight = tight_set(cone, &r.coords)?;
        let rank = linalg::rank(&cone.inequality_matrix(&r.tight), 0.0);
        if rank + 1 != d {
            return Err(Error::Postcondition(format!(
                "ray {:?} has tight rank {rank}, expected {}",
                r.coords,
                d - 1
            )));
        }
    }
    Ok(PolyhedralCone {
        basis: cone.basis.clone(),
        inequalities: cone.inequalities.clone(),
        rays: Some(out),
    })
}

fn tight_set(cone: &PolyhedralCone, coords: &[Cyclotomic]) -> Result<Vec<usize>> {
    let mut tight = Vec::new();
    for (i, ineq) in cone.inequalities.iter().enumerate() {
        match sign(&ineq.evaluate_exact(coords)) {
            Ordering::Equal => tight.push(i),
            Ordering::Greater => {}
            Ordering::Less => {
                return Err(Error::Postcondition(format!(
                    "ray {coords:?} violates inequality {i}"
                )))
            }
        }
    }
    Ok(tight)
}

/// Lexicographic comparison of real coordinates.
pub fn cmp_coords(a: &[Cyclotomic], b: &[Cyclotomic]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp_real(y).expect("real coordinates") {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Scale a nonzero vector with real entries in `Q(ζ_e)` so that its entries
/// have coprime integer coordinates in the basis `{1, 2cos(2πj/e)}` with a
/// positive leading entry. For rational vectors this is the primitive
/// integer vector.
pub fn canonical_ray(v: &[Cyclotomic], conductor: u32) -> Vec<Cyclotomic> {
    let Some(lead) = v.iter().find(|c| !c.is_zero()) else {
        return v.to_vec();
    };
    let inv = lead.inv().expect("nonzero");
    let unit: Vec<Cyclotomic> = v.iter().map(|c| c.mul(&inv)).collect();
    let basis = RealBasis::new(conductor);
    let expansions: Vec<Vec<BigRational>> = unit
        .iter()
        .map(|c| {
            basis
                .expand(c)
                .expect("ray entries lie in the real subfield")
        })
        .collect();
    let mut lcm = BigInt::one();
    for c in expansions.iter().flatten() {
        lcm = lcm.lcm(c.denom());
    }
    let mut gcd = BigInt::zero();
    for c in expansions.iter().flatten() {
        gcd = gcd.gcd(&(c.numer() * (&lcm / c.denom())));
    }
    if gcd.is_zero() {
        return unit;
    }
    let factor = Cyclotomic::from_rational(BigRational::new(lcm, gcd));
    unit.iter().map(|c| c.mul(&factor)).collect()
}

/// The basis `1, t_1, …, t_{m-1}` of `Z[2cos(2π/e)]` with `t_j = 2cos(2πj/e)`
/// and `m = φ(e)/2` (1 when `e ≤ 2`).
#[derive(Clone, Debug)]
pub struct RealBasis {
    conductor: u32,
    elements: Vec<Cyclotomic>,
}

impl RealBasis {
    pub fn new(conductor: u32) -> Self {
        let m = if conductor <= 2 {
            1
        } else {
            totient(conductor) as usize / 2
        };
        let mut elements = vec![Cyclotomic::one()];
        for j in 1..m {
            let z = Cyclotomic::root_of_unity(j as i64, conductor);
            elements.push(z.add(&z.conj()));
        }
        RealBasis { conductor, elements }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn elements(&self) -> &[Cyclotomic] {
        &self.elements
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.elements.len())
            .map(|j| {
                if j == 0 {
                    "1".to_string()
                } else {
                    format!("2cos(2pi*{j}/{})", self.conductor)
                }
            })
            .collect()
    }

    /// Rational coordinates of `x`, or `None` outside the span.
    pub fn expand(&self, x: &Cyclotomic) -> Option<Vec<BigRational>> {
        let e = self.conductor;
        let target = x.coeffs_at(e)?;
        let m = self.elements.len();
        let cols: Vec<Vec<BigRational>> = self
            .elements
            .iter()
            .map(|b| b.coeffs_at(e).expect("basis lives at the conductor"))
            .collect();
        let mut work: Vec<Vec<Cyclotomic>> = (0..target.len())
            .map(|r| {
                let mut row: Vec<Cyclotomic> = cols
                    .iter()
                    .map(|c| Cyclotomic::from_rational(c[r].clone()))
                    .collect();
                row.push(Cyclotomic::from_rational(target[r].clone()));
                row
            })
            .collect();
        let pivots = linalg::row_reduce(&mut work, 0.0);
        if pivots.contains(&m) {
            return None;
        }
        let mut out = vec![BigRational::zero(); m];
        for (r, &p) in pivots.iter().enumerate() {
            out[p] = work[r][m].to_rational().expect("rational system");
        }
        Some(out)
    }

    pub fn combine(&self, coords: &[BigRational]) -> Cyclotomic {
        self.elements
            .iter()
            .zip(coords)
            .fold(Cyclotomic::zero(), |acc, (b, c)| acc.add(&b.scale(c)))
    }
}

pub fn format_expansion(coords: &[BigRational], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, l) in coords.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        let term = match (l.as_str(), a.is_one()) {
            ("1", _) => a.to_string(),
            (_, true) => l.clone(),
            _ => format!("{a}*{l}"),
        };
        if out.is_empty() {
            out = if neg { format!("-{term}") } else { term };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn ensure_even_real<S: Scalar>(cone: &PolyhedralCone, f: &GroupFunction<S>) -> Result<(Vec<S>, f64)> {
    let tol = FLOAT_EQ_TOL * f.max_magnitude().max(f64::MIN_POSITIVE);
    if !f.is_real(tol) {
        return Err(Error::NonReal("cone membership needs a real function".into()));
    }
    Ok((cone.basis.coordinates(f)?, tol))
}

/// Every inequality strict at `f`.
pub fn is_interior<S: Scalar>(f: &GroupFunction<S>, cone: &PolyhedralCone) -> Result<bool> {
    let (x, tol) = ensure_even_real(cone, f)?;
    let tol = tol * cone.group().order() as f64;
    Ok(cone
        .inequalities
        .iter()
        .all(|i| i.evaluate(&x).real_sign(tol) == Some(Ordering::Greater)))
}

/// Every inequality holds at `f`.
pub fn is_member<S: Scalar>(f: &GroupFunction<S>, cone: &PolyhedralCone) -> Result<bool> {
    let (x, tol) = ensure_even_real(cone, f)?;
    let tol = tol * cone.group().order() as f64;
    Ok(cone.inequalities.iter().all(|i| {
        matches!(
            i.evaluate(&x).real_sign(tol),
            Some(Ordering::Greater | Ordering::Equal)
        )
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EntryLocation {
    Inequality { index: usize, coord: usize },
    Ray { index: usize, coord: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldEntry {
    pub location: EntryLocation,
    pub value: String,
    /// integer coordinates in the basis, when they exist
    pub expansion: Option<Vec<String>>,
    pub expression: String,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldReport {
    pub conductor: u32,
    pub basis: Vec<String>,
    pub entries: Vec<FieldEntry>,
    pub failures: usize,
    pub all_rational: bool,
}

/// Certifies that every coefficient and ray coordinate is an integer
/// combination of `1, 2cos(2πj/e)`, `e` the exponent of the group.
pub fn field_of_definition_check(cone: &PolyhedralCone) -> FieldReport {
    let basis = RealBasis::new(cone.group().conductor());
    let labels = basis.labels();
    let mut entries = Vec::new();
    let mut push = |location: EntryLocation, v: &Cyclotomic| {
        let expansion = basis.expand(v);
        let certified = expansion.as_ref().is_some_and(|c| {
            c.iter().all(BigRational::is_integer) && basis.combine(c) == *v
        });
        entries.push(FieldEntry {
            location,
            value: v.to_exact_string(),
            expression: expansion
                .as_ref()
                .map_or_else(|| "outside the real subfield".into(), |c| format_expansion(c, &labels)),
            expansion: expansion.map(|c| c.iter().map(ToString::to_string).collect()),
            certified,
        });
    };
    for (index, ineq) in cone.inequalities.iter().enumerate() {
        for (coord, c) in ineq.coeffs.iter().enumerate() {
            push(EntryLocation::Inequality { index, coord }, c);
        }
    }
    if let Some(rays) = &cone.rays {
        for (index, r) in rays.iter().enumerate() {
            for (coord, c) in r.coords.iter().enumerate() {
                push(EntryLocation::Ray { index, coord }, c);
            }
        }
    }
    let failures = entries.iter().filter(|e| !e.certified).count();
    let all_rational = cone
        .inequalities
        .iter()
        .flat_map(|i| i.coeffs.iter())
        .chain(cone.rays.iter().flatten().flat_map(|r| r.coords.iter()))
        .all(Cyclotomic::is_rational);
    FieldReport {
        conductor: basis.conductor(),
        basis: labels,
        entries,
        failures,
        all_rational,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RayImage {
    pub ray: usize,
    pub image: usize,
    /// `f̂ = scale · image` with `f̂` against counting measure
    pub scale: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfDualityReport {
    pub pairs: Vec<RayImage>,
    pub involution: bool,
}

/// Sends each ray to the ray of the dual cone spanned by its transform. The
/// dual group has the same moduli, so the dual cone has the same rays.
pub fn self_duality_check(cone: &PolyhedralCone) -> Result<SelfDualityReport> {
    let rays = cone.rays()?;
    let dual = extremal_rays(&ppd_cone_hrep_bounded(&cone.group().dual(), usize::MAX)?)?;
    let dual_rays = dual.rays()?;
    let e = cone.group().conductor();
    let mut pairs = Vec::with_capacity(rays.len());
    for (i, r) in rays.iter().enumerate() {
        let f = cone.basis.function(&r.coords)?;
        let coords = dual.basis.coordinates(&dft(&f))?;
        let canon = canonical_ray(&coords, e);
        let image = dual_rays
            .iter()
            .position(|d| d.coords == canon)
            .ok_or_else(|| Error::Postcondition(format!("transform of ray {i} is not a ray")))?;
        let lead = canon.iter().position(|c| !c.is_zero()).expect("nonzero ray");
        let scale = coords[lead].div(&canon[lead]).expect("nonzero");
        pairs.push(RayImage {
            ray: i,
            image,
            scale: scale.to_exact_string(),
        });
    }
    let involution = rays.len() == dual_rays.len()
        && pairs.iter().all(|p| pairs.get(p.image).is_some_and(|q| q.image == p.ray));
    Ok(SelfDualityReport { pairs, involution })
}
