//! Fourier analysis with explicit Haar measures.
//!
//! The transform of `f` with respect to `m = c · counting` is
//! `f̂(χ) = c Σ_x conj(χ(x)) f(x)`, and the inverse transform of a measure
//! `μ = d · (ĉ · counting)` on the dual is `μ̌(x) = ĉ Σ_χ χ(x) d(χ)`.
//! With `ĉ = 1 / (c |G|)` the two are mutually inverse.

use std::cmp::Ordering;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, Homomorphism};
use crate::scalar::Scalar;

/// A complex-valued function on a finite abelian group, dense by element index.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupFunction<S> {
    group: FiniteAbelianGroup,
    values: Vec<S>,
}

impl<S: Scalar> GroupFunction<S> {
    pub fn new(group: &FiniteAbelianGroup, values: Vec<S>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::LengthMismatch {
                expected: group.order(),
                found: values.len(),
            });
        }
        Ok(GroupFunction {
            group: group.clone(),
            values,
        })
    }

    pub fn from_fn(group: &FiniteAbelianGroup, f: impl FnMut(usize) -> S) -> Self {
        GroupFunction {
            group: group.clone(),
            values: group.elements().map(f).collect(),
        }
    }

    pub fn from_ints(group: &FiniteAbelianGroup, values: &[i64]) -> Result<Self> {
        Self::new(group, values.iter().map(|&v| S::from_i64(v)).collect())
    }

    pub fn constant(group: &FiniteAbelianGroup, value: S) -> Self {
        Self::from_fn(group, |_| value.clone())
    }

    /// Indicator of a single element.
    pub fn delta(group: &FiniteAbelianGroup, at: usize) -> Self {
        Self::from_fn(group, |x| if x == at { S::one() } else { S::zero() })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &S {
        &self.values[x]
    }

    pub fn at_identity(&self) -> &S {
        &self.values[0]
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        GroupFunction {
            group: self.group.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.mul(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.group.ensure_same(&other.group)?;
        Ok(GroupFunction {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    /// `x ↦ f(-x)`.
    pub fn reflect(&self) -> Self {
        Self::from_fn(&self.group, |x| self.values[self.group.neg(x)].clone())
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.is_real(tol))
    }

    pub fn is_even(&self, tol: f64) -> bool {
        self.group
            .elements()
            .all(|x| self.values[x].approx_eq(&self.values[self.group.neg(x)], tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.group == other.group
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Largest modulus of any value, used to scale float tolerances.
    pub fn max_magnitude(&self) -> f64 {
        self.values.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.sub(b).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn sum(&self) -> S {
        self.values.iter().fold(S::zero(), |acc, v| acc.add(v))
    }

    pub fn to_float(&self) -> GroupFunction<num_complex::Complex64> {
        GroupFunction {
            group: self.group.clone(),
            values: self.values.iter().map(Scalar::to_complex).collect(),
        }
    }
}

impl GroupFunction<Cyclotomic> {
    /// Values in the requested arithmetic.
    pub fn to_scalar<T: Scalar>(&self) -> GroupFunction<T> {
        GroupFunction {
            group: self.group.clone(),
            values: self.values.iter().map(T::from_exact).collect(),
        }
    }
}

/// A Haar measure on a finite group: `scale × counting measure`.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarScale<S> {
    group: FiniteAbelianGroup,
    scale: S,
}

impl<S: Scalar> HaarScale<S> {
    pub fn new(group: &FiniteAbelianGroup, scale: S) -> Result<Self> {
        if scale.real_sign(0.0) != Some(Ordering::Greater) {
            return Err(Error::NonPositiveScale);
        }
        Ok(HaarScale {
            group: group.clone(),
            scale,
        })
    }

    pub fn counting(group: &FiniteAbelianGroup) -> Self {
        HaarScale {
            group: group.clone(),
            scale: S::one(),
        }
    }

    /// The normalized Haar measure (total mass 1).
    pub fn probability(group: &FiniteAbelianGroup) -> Self {
        HaarScale {
            group: group.clone(),
            scale: S::from_i64(group.order() as i64).inv().expect("order ≥ 1"),
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn scale(&self) -> &S {
        &self.scale
    }

    /// The dual measure, scale `1 / (c |G|)`.
    pub fn dual(&self) -> HaarScale<S> {
        dual_haar(self)
    }
}

pub fn dual_haar<S: Scalar>(m: &HaarScale<S>) -> HaarScale<S> {
    let denom = m.scale.mul(&S::from_i64(m.group.order() as i64));
    HaarScale {
        group: m.group.dual(),
        scale: denom.inv().expect("positive scale"),
    }
}

/// A measure `density · haar`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledMeasure<S> {
    density: GroupFunction<S>,
    haar: HaarScale<S>,
}

impl<S: Scalar> ScaledMeasure<S> {
    pub fn new(density: GroupFunction<S>, haar: HaarScale<S>) -> Result<Self> {
        density.group.ensure_same(&haar.group)?;
        Ok(ScaledMeasure { density, haar })
    }

    /// Unit point mass at `at` (density 1 against counting measure).
    pub fn point_mass(group: &FiniteAbelianGroup, at: usize) -> Self {
        ScaledMeasure {
            density: GroupFunction::delta(group, at),
            haar: HaarScale::counting(group),
        }
    }

    pub fn uniform_probability(group: &FiniteAbelianGroup) -> Self {
        ScaledMeasure {
            density: GroupFunction::constant(group, S::one()),
            haar: HaarScale::probability(group),
        }
    }

    /// Measure assigning the given masses to points.
    pub fn from_masses(group: &FiniteAbelianGroup, masses: Vec<S>) -> Result<Self> {
        Ok(ScaledMeasure {
            density: GroupFunction::new(group, masses)?,
            haar: HaarScale::counting(group),
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.density.group
    }

    pub fn density(&self) -> &GroupFunction<S> {
        &self.density
    }

    pub fn haar(&self) -> &HaarScale<S> {
        &self.haar
    }

    /// Mass of the single point `x`.
    pub fn mass_at(&self, x: usize) -> S {
        self.density.values[x].mul(&self.haar.scale)
    }

    pub fn masses(&self) -> GroupFunction<S> {
        self.density.scale(&self.haar.scale)
    }

    pub fn total_mass(&self) -> S {
        self.density.sum().mul(&self.haar.scale)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.masses().approx_eq(&other.masses(), tol)
    }
}

/// `f̂(χ) = c Σ_x conj(χ(x)) f(x)` on the dual group.
pub fn fourier_transform<S: Scalar>(f: &GroupFunction<S>, m: &HaarScale<S>) -> Result<GroupFunction<S>> {
    f.group.ensure_same(&m.group)?;
    let g = &f.group;
    let e = g.conductor();
    let exp = g.exponent();
    let values = g
        .elements()
        .map(|a| {
            let terms = g
                .elements()
                .map(|x| ((exp - g.pairing_exponent(a, x)) % exp, &f.values[x]));
            S::root_sum(e, terms).mul(&m.scale)
        })
        .collect();
    Ok(GroupFunction {
        group: g.dual(),
        values,
    })
}

/// Transform with respect to counting measure.
pub fn dft<S: Scalar>(f: &GroupFunction<S>) -> GroupFunction<S> {
    fourier_transform(f, &HaarScale::counting(&f.group)).expect("same group")
}

/// `μ̌(x) = Σ_χ χ(x) μ({χ})`.
pub fn inverse_transform<S: Scalar>(mu: &ScaledMeasure<S>) -> GroupFunction<S> {
    let g = mu.group();
    let e = g.conductor();
    let values = g
        .elements()
        .map(|x| {
            let terms = g
                .elements()
                .map(|a| (g.pairing_exponent(a, x), &mu.density.values[a]));
            S::root_sum(e, terms).mul(&mu.haar.scale)
        })
        .collect();
    GroupFunction {
        group: g.dual(),
        values,
    }
}

/// `(μ * ν)({z}) = Σ_{x + y = z} μ({x}) ν({y})`, carried on the Haar scale of `μ`.
pub fn convolve<S: Scalar>(mu: &ScaledMeasure<S>, nu: &ScaledMeasure<S>) -> Result<ScaledMeasure<S>> {
    mu.group().ensure_same(nu.group())?;
    let g = mu.group();
    let nu_mass = nu.masses();
    let values = g
        .elements()
        .map(|z| {
            g.elements().fold(S::zero(), |acc, x| {
                acc.add(&mu.density.values[x].mul(&nu_mass.values[g.sub(z, x)]))
            })
        })
        .collect();
    Ok(ScaledMeasure {
        density: GroupFunction {
            group: g.clone(),
            values,
        },
        haar: mu.haar.clone(),
    })
}

/// `(φ* f)(x) = f(φ(x))`.
pub fn pullback<S: Scalar>(phi: &Homomorphism, f: &GroupFunction<S>) -> Result<GroupFunction<S>> {
    phi.target().ensure_same(&f.group)?;
    Ok(GroupFunction::from_fn(phi.source(), |x| {
        f.values[phi.apply_index(x)].clone()
    }))
}

/// Mass transported along `φ`; the source Haar scale is kept.
pub fn pushforward<S: Scalar>(phi: &Homomorphism, mu: &ScaledMeasure<S>) -> Result<ScaledMeasure<S>> {
    phi.source().ensure_same(mu.group())?;
    let target = phi.target();
    let mut values = vec![S::zero(); target.order()];
    for x in phi.source().elements() {
        let y = phi.apply_index(x);
        values[y] = values[y].add(&mu.density.values[x]);
    }
    Ok(ScaledMeasure {
        density: GroupFunction {
            group: target.clone(),
            values,
        },
        haar: HaarScale {
            group: target.clone(),
            scale: mu.haar.scale.clone(),
        },
    })
}

/// `| ‖f‖²_m − ‖f̂‖²_{m̂} |`, exactly zero in exact mode.
pub fn plancherel_residual<S: Scalar>(f: &GroupFunction<S>, m: &HaarScale<S>) -> Result<S> {
    let fhat = fourier_transform(f, m)?;
    let md = dual_haar(m);
    let sq = |g: &GroupFunction<S>, c: &S| {
        g.values
            .iter()
            .fold(S::zero(), |acc, v| acc.add(&v.mul(&v.conj())))
            .mul(c)
    };
    let diff = sq(f, &m.scale).sub(&sq(&fhat, &md.scale));
    Ok(match diff.real_sign(f64::INFINITY) {
        Some(Ordering::Less) => diff.neg(),
        _ => diff,
    })
}
