//! Membership tests for positive positive-definite (PPD) and good functions,
//! normalization, dual measures and descent along the stabilizer.
//!
//! On a finite group every function is integrable on every subgroup, so
//! goodness reduces to strict positivity of `f` and `f̂`. The integrability
//! conditions are still itemized in the verdict, marked vacuous.

use std::cmp::Ordering;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{dft, dual_haar, fourier_transform, GroupFunction, HaarScale, ScaledMeasure};
use crate::group::Subgroup;
use crate::linalg;
use crate::scalar::Scalar;

/// Float-mode tolerances. Exact mode ignores them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// equality and sign decisions, relative to the largest value involved
    pub eq: f64,
    /// a value counts as strictly positive only above `strict · f(0)`
    pub strict: f64,
    /// eigenvalue slack for the Gram-matrix test, relative to `‖M‖`
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eq: 1e-10,
            strict: 1e-12,
            psd: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_eq(eq: f64) -> Self {
        Tolerances {
            eq,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// values are real
    RealValued,
    /// `f ≥ 0`
    Nonnegative,
    /// positive-definite: `f̂ ≥ 0`
    PositiveType,
    /// `f ∈ L¹(G)`
    Integrable,
    /// `f̂` continuous and in `L¹(Ĝ)`
    TransformIntegrable,
    /// `f > 0` and `f̂ > 0`
    StrictlyPositive,
    /// integrable on every closed subgroup, on both sides
    SubgroupIntegrable,
}

impl Condition {
    pub const PPD: [Condition; 3] = [
        Condition::RealValued,
        Condition::Nonnegative,
        Condition::PositiveType,
    ];

    pub fn is_ppd_condition(self) -> bool {
        Self::PPD.contains(&self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Function,
    Transform,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub condition: Condition,
    pub side: Side,
    pub element: usize,
    pub residues: Vec<usize>,
    pub value: String,
    pub approx: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionStatus {
    pub condition: Condition,
    pub holds: bool,
    /// automatically satisfied on finite groups
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PpdVerdict {
    pub is_ppd: bool,
    pub is_good: bool,
    pub conditions: Vec<ConditionStatus>,
    pub witnesses: Vec<Witness>,
}

impl PpdVerdict {
    pub fn holds(&self, c: Condition) -> bool {
        self.conditions
            .iter()
            .find(|s| s.condition == c)
            .is_some_and(|s| s.holds)
    }

    pub fn witnesses_for(&self, c: Condition) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(move |w| w.condition == c)
    }
}

fn witness<S: Scalar>(f: &GroupFunction<S>, c: Condition, side: Side, x: usize) -> Witness {
    let v = f.value(x);
    let z = v.to_complex();
    Witness {
        condition: c,
        side,
        element: x,
        residues: f.group().residues(x),
        value: v.to_exact_string(),
        approx: [z.re, z.im],
    }
}

/// Full verdict for `f` covering both the PPD and the good conditions.
pub fn verdict<S: Scalar>(f: &GroupFunction<S>, tol: &Tolerances) -> PpdVerdict {
    let fhat = dft(f);
    let ref_f = f.max_magnitude().max(f64::MIN_POSITIVE);
    let ref_hat = f.values().iter().map(Scalar::magnitude).sum::<f64>().max(f64::MIN_POSITIVE);
    let abs_f = tol.eq * ref_f;
    let abs_hat = tol.eq * ref_hat;

    let mut witnesses = Vec::new();
    let mut real = true;
    let mut nonneg = true;
    let mut positive_type = true;
    let mut strict = true;

    let strict_f = tol.strict * f.at_identity().magnitude();
    let strict_hat = tol.strict * fhat.at_identity().magnitude();

    for x in f.group().elements() {
        match f.value(x).real_sign(abs_f) {
            None => {
                real = false;
                witnesses.push(witness(f, Condition::RealValued, Side::Function, x));
            }
            Some(Ordering::Less) => {
                nonneg = false;
                witnesses.push(witness(f, Condition::Nonnegative, Side::Function, x));
            }
            Some(_) => {}
        }
        if !is_strictly_positive(f.value(x), abs_f.max(strict_f)) {
            strict = false;
            witnesses.push(witness(f, Condition::StrictlyPositive, Side::Function, x));
        }
    }
    for a in fhat.group().elements() {
        match fhat.value(a).real_sign(abs_hat) {
            None | Some(Ordering::Less) => {
                positive_type = false;
                witnesses.push(witness(&fhat, Condition::PositiveType, Side::Transform, a));
            }
            Some(_) => {}
        }
        if !is_strictly_positive(fhat.value(a), abs_hat.max(strict_hat)) {
            strict = false;
            witnesses.push(witness(&fhat, Condition::StrictlyPositive, Side::Transform, a));
        }
    }
    let is_ppd = real && nonneg && positive_type;
    let is_good = is_ppd && strict;
    let status = |condition, holds, vacuous| ConditionStatus {
        condition,
        holds,
        vacuous,
    };
    PpdVerdict {
        is_ppd,
        is_good,
        conditions: vec![
            status(Condition::RealValued, real, false),
            status(Condition::Nonnegative, nonneg, false),
            status(Condition::PositiveType, positive_type, false),
            status(Condition::Integrable, true, true),
            status(Condition::TransformIntegrable, true, true),
            status(Condition::StrictlyPositive, strict, false),
            status(Condition::SubgroupIntegrable, true, true),
        ],
        witnesses,
    }
}

fn is_strictly_positive<S: Scalar>(v: &S, tol: f64) -> bool {
    v.real_sign(tol) == Some(Ordering::Greater)
}

/// PPD test by the spectral criterion: `f` real, `f ≥ 0`, `f̂ ≥ 0`.
pub fn is_ppd<S: Scalar>(f: &GroupFunction<S>) -> PpdVerdict {
    verdict(f, &Tolerances::default())
}

/// Goodness test; on finite groups `f > 0` and `f̂ > 0` on top of PPD.
pub fn is_good<S: Scalar>(f: &GroupFunction<S>) -> PpdVerdict {
    verdict(f, &Tolerances::default())
}

/// Positive semidefiniteness of the Gram matrix `M[x, y] = f(x - y)`,
/// decided without any Fourier transform.
pub fn bochner_oracle<S: Scalar>(f: &GroupFunction<S>) -> Result<bool> {
    bochner_oracle_with(f, &Tolerances::default())
}

pub fn bochner_oracle_with<S: Scalar>(f: &GroupFunction<S>, tol: &Tolerances) -> Result<bool> {
    let abs = tol.eq * f.max_magnitude().max(f64::MIN_POSITIVE);
    if !f.is_real(abs) {
        return Err(Error::NonReal("Gram-matrix test needs a real function".into()));
    }
    let g = f.group();
    let gram = |x: usize, y: usize| f.value(g.sub(x, y));
    if S::EXACT {
        let rational: Option<Vec<BigRational>> = f.values().iter().map(Scalar::to_rational).collect();
        if let Some(r) = rational {
            let m: Vec<Vec<BigRational>> = g
                .elements()
                .map(|x| g.elements().map(|y| r[g.sub(x, y)].clone()).collect())
                .collect();
            return Ok(linalg::is_psd_rational(&m));
        }
        let m: Vec<Vec<S>> = g
            .elements()
            .map(|x| g.elements().map(|y| gram(x, y).clone()).collect())
            .collect();
        return Ok(linalg::is_psd_hermitian(&m, 0.0));
    }
    let n = g.order();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| gram(i, j).to_complex().re);
    if (&m - m.transpose()).abs().max() > abs {
        return Ok(false);
    }
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min >= -tol.psd * m.norm().max(f64::MIN_POSITIVE))
}

/// `f / f(0)`.
pub fn normalize_function<S: Scalar>(f: &GroupFunction<S>) -> Result<GroupFunction<S>> {
    let abs = Tolerances::default().eq * f.max_magnitude().max(f64::MIN_POSITIVE);
    if !f.is_real(abs) {
        return Err(Error::NonReal("normalization needs a real function".into()));
    }
    let f0 = f.at_identity();
    if f0.real_sign(abs) != Some(Ordering::Greater) {
        return Err(Error::Precondition("f(0) must be positive".into()));
    }
    let inv = f0.inv().expect("positive value");
    Ok(f.scale(&inv))
}

/// Rescale the Haar measure so that the total mass is 1.
pub fn normalize_measure<S: Scalar>(mu: &ScaledMeasure<S>) -> Result<ScaledMeasure<S>> {
    let mass = mu.total_mass();
    let abs = Tolerances::default().eq * mu.masses().max_magnitude().max(f64::MIN_POSITIVE);
    if mass.real_sign(abs) != Some(Ordering::Greater) {
        return Err(Error::Precondition("total mass must be positive".into()));
    }
    let scale = mu.haar().scale().div(&mass).expect("positive mass");
    ScaledMeasure::new(mu.density().clone(), HaarScale::new(mu.group(), scale)?)
}

/// The unique measure `μ` on the dual with `μ̌ = f`, as `f̂ · m̂` for the
/// counting measure `m` on `G`.
pub fn dual_measure<S: Scalar>(f: &GroupFunction<S>) -> Result<ScaledMeasure<S>> {
    let v = is_ppd(f);
    if !v.is_ppd {
        return Err(Error::Precondition("dual measure requires a PPD function".into()));
    }
    let m = HaarScale::counting(f.group());
    ScaledMeasure::new(fourier_transform(f, &m)?, dual_haar(&m))
}

/// The transform taken with the Haar measure making `f · m` a probability
/// measure; its value at the trivial character is 1.
pub fn normalized_dual<S: Scalar>(f: &GroupFunction<S>, require_good: bool) -> Result<GroupFunction<S>> {
    let tol = Tolerances::default();
    let abs = tol.eq * f.max_magnitude().max(f64::MIN_POSITIVE);
    if require_good {
        if !verdict(f, &tol).is_good {
            return Err(Error::Precondition("normalized dual requires a good function".into()));
        }
        if !f.at_identity().approx_eq(&S::one(), abs) {
            return Err(Error::Precondition("normalized dual requires f(0) = 1".into()));
        }
    }
    let total = f.sum();
    if total.real_sign(abs) != Some(Ordering::Greater) {
        return Err(Error::Precondition("Σ f must be positive".into()));
    }
    let m = HaarScale::new(f.group(), total.inv().expect("positive sum"))?;
    fourier_transform(f, &m)
}

/// `{x : f(x) = f(0)}`, checked to be a subgroup under which `f` is invariant.
pub fn stabilizer_subgroup<S: Scalar>(f: &GroupFunction<S>) -> Result<Subgroup> {
    let tol = Tolerances::default();
    if !verdict(f, &tol).is_ppd {
        return Err(Error::Precondition("stabilizer requires a PPD function".into()));
    }
    let abs = tol.eq * f.max_magnitude().max(f64::MIN_POSITIVE);
    let f0 = f.at_identity();
    let elements: Vec<usize> = f
        .group()
        .elements()
        .filter(|&x| f.value(x).approx_eq(f0, abs))
        .collect();
    let h = Subgroup::from_elements(f.group(), &elements)
        .map_err(|e| Error::Postcondition(format!("level set of f(0) is not a subgroup: {e}")))?;
    if !is_invariant(f, &h, abs) {
        return Err(Error::Postcondition("f is not invariant under its stabilizer".into()));
    }
    Ok(h)
}

fn is_invariant<S: Scalar>(f: &GroupFunction<S>, h: &Subgroup, abs: f64) -> bool {
    let g = f.group();
    g.elements()
        .all(|x| h.elements().iter().all(|&y| f.value(g.add(x, y)).approx_eq(f.value(x), abs)))
}

/// The function `g` on `G/H` with `f = g ∘ π`.
pub fn descend_to_quotient<S: Scalar>(f: &GroupFunction<S>, h: &Subgroup) -> Result<GroupFunction<S>> {
    h.ensure_in(f.group())?;
    let abs = Tolerances::default().eq * f.max_magnitude().max(f64::MIN_POSITIVE);
    if !is_invariant(f, h, abs) {
        return Err(Error::Precondition(
            "subgroup is not contained in the stabilizer of f".into(),
        ));
    }
    let q = h.quotient();
    Ok(GroupFunction::from_fn(q.group(), |k| f.value(q.lift(k)).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::fourier::{inverse_transform, pullback};
    use crate::group::FiniteAbelianGroup;
    use num_complex::Complex64;

    type Q = Cyclotomic;

    fn g(m: &[usize]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(m.to_vec()).unwrap()
    }

    fn ints(grp: &FiniteAbelianGroup, v: &[i64]) -> GroupFunction<Q> {
        GroupFunction::from_ints(grp, v).unwrap()
    }

    #[test]
    fn constant_is_ppd_not_good() {
        let v = is_ppd(&ints(&g(&[4]), &[1, 1, 1, 1]));
        assert!(v.is_ppd);
        assert!(!v.is_good);
        assert!(is_good(&ints(&g(&[1]), &[1])).is_good);
    }

    #[test]
    fn indicator_of_subgroup() {
        let f = ints(&g(&[4]), &[1, 0, 1, 0]);
        assert_eq!(dft(&f), ints(&g(&[4]), &[2, 0, 2, 0]));
        let v = is_good(&f);
        assert!(v.is_ppd && !v.is_good);
        let fn_side: Vec<usize> = v
            .witnesses_for(Condition::StrictlyPositive)
            .filter(|w| w.side == Side::Function)
            .map(|w| w.element)
            .collect();
        let tr_side: Vec<usize> = v
            .witnesses_for(Condition::StrictlyPositive)
            .filter(|w| w.side == Side::Transform)
            .map(|w| w.element)
            .collect();
        assert_eq!(fn_side, vec![1, 3]);
        assert_eq!(tr_side, vec![1, 3]);
        assert!(v.holds(Condition::SubgroupIntegrable));
    }

    #[test]
    fn non_ppd_witness() {
        let v = is_ppd(&ints(&g(&[2]), &[1, 2]));
        assert!(!v.is_ppd);
        let w: Vec<&Witness> = v.witnesses_for(Condition::PositiveType).collect();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].element, 1);
        assert_eq!(w[0].value, "-1");
    }

    #[test]
    fn good_example() {
        let v = is_good(&ints(&g(&[4]), &[4, 2, 1, 2]));
        assert!(v.is_good);
        assert!(v.witnesses.is_empty());
        assert!(!is_good(&GroupFunction::<Q>::delta(&g(&[3]), 0)).is_good);
    }

    #[test]
    fn bochner_examples() {
        assert!(bochner_oracle(&GroupFunction::<Q>::delta(&g(&[5]), 0)).unwrap());
        assert!(bochner_oracle(&ints(&g(&[3]), &[1, 1, 1])).unwrap());
        assert!(!bochner_oracle(&ints(&g(&[2]), &[1, 2])).unwrap());
        let complex = GroupFunction::new(&g(&[4]), vec![Q::one(), Q::i(), Q::zero(), Q::i().neg()]).unwrap();
        assert!(bochner_oracle(&complex).is_err());
        // float route agrees on a boundary case
        let f = ints(&g(&[4]), &[1, 0, 1, 0]).to_float();
        assert!(bochner_oracle(&f).unwrap());
        let f = GroupFunction::new(&g(&[2]), vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]).unwrap();
        assert!(!bochner_oracle(&f).unwrap());
    }

    #[test]
    fn normalization() {
        let f = ints(&g(&[4]), &[4, 2, 1, 2]);
        let n = normalize_function(&f).unwrap();
        let expected = GroupFunction::new(
            f.group(),
            vec![Q::one(), Q::from_ratio(1, 2), Q::from_ratio(1, 4), Q::from_ratio(1, 2)],
        )
        .unwrap();
        assert_eq!(n, expected);
        assert_eq!(normalize_function(&n).unwrap(), n);
        assert!(normalize_function(&ints(&g(&[2]), &[0, 1])).is_err());

        let z3 = g(&[3]);
        let mu = ScaledMeasure::from_masses(&z3, vec![Q::from_int(3), Q::from_int(1), Q::from_int(1)]).unwrap();
        let p = normalize_measure(&mu).unwrap();
        assert_eq!(p.haar().scale(), &Q::from_ratio(1, 5));
        assert_eq!(p.total_mass(), Q::one());
        assert_eq!(normalize_measure(&p).unwrap(), p);
        assert_eq!(inverse_transform(&p).at_identity(), &Q::one());
        let zero = ScaledMeasure::from_masses(&z3, vec![Q::zero(); 3]).unwrap();
        assert!(normalize_measure(&zero).is_err());
    }

    #[test]
    fn dual_measure_examples() {
        let z4 = g(&[4]);
        let mu = dual_measure(&ints(&z4, &[1; 4])).unwrap();
        assert!(mu.approx_eq(&ScaledMeasure::point_mass(&z4, 0), 0.0));
        let mu = dual_measure(&GroupFunction::<Q>::delta(&z4, 0)).unwrap();
        assert!(mu.approx_eq(&ScaledMeasure::uniform_probability(&z4), 0.0));
        let f = ints(&z4, &[4, 2, 1, 2]);
        let mu = dual_measure(&f).unwrap();
        assert_eq!(inverse_transform(&mu), f);
        assert!(is_ppd(mu.density()).is_ppd);
        assert!(mu.density().is_even(0.0));
        assert!(dual_measure(&ints(&g(&[2]), &[1, 2])).is_err());
    }

    #[test]
    fn normalized_dual_examples() {
        let z2 = g(&[2]);
        // f = (1, t), t = 1/3: dual (1, (1 - t)/(1 + t)) = (1, 1/2)
        let f = GroupFunction::new(&z2, vec![Q::one(), Q::from_ratio(1, 3)]).unwrap();
        let d = normalized_dual(&f, true).unwrap();
        assert_eq!(d.values(), &[Q::one(), Q::from_ratio(1, 2)]);
        assert!(normalized_dual(&ints(&g(&[3]), &[1, 1, 1]), true).is_err());
        let z4 = g(&[4]);
        let f = normalize_function(&ints(&z4, &[4, 2, 1, 2])).unwrap();
        let d = normalized_dual(&f, true).unwrap();
        assert_eq!(normalized_dual(&d, true).unwrap(), f);
    }

    #[test]
    fn stabilizer_and_descent() {
        let z4 = g(&[4]);
        let f = ints(&z4, &[1, 0, 1, 0]);
        let h = stabilizer_subgroup(&f).unwrap();
        assert_eq!(h.elements(), &[0, 2]);
        let q = descend_to_quotient(&f, &h).unwrap();
        assert_eq!(q, ints(&g(&[2]), &[1, 0]));
        let pi = h.quotient().projection_hom();
        assert_eq!(pullback(&pi, &q).unwrap(), f);
        assert!(stabilizer_subgroup(&ints(&z4, &[4, 2, 1, 2])).unwrap().is_trivial());
        let one = ints(&z4, &[1; 4]);
        assert!(stabilizer_subgroup(&one).unwrap().is_whole());
        let top = descend_to_quotient(&one, &Subgroup::whole(&z4)).unwrap();
        assert_eq!(top, ints(&g(&[1]), &[1]));
        assert_eq!(descend_to_quotient(&f, &Subgroup::trivial(&z4)).unwrap().values(), f.values());
        assert!(descend_to_quotient(&ints(&z4, &[4, 2, 1, 2]), &h).is_err());
        assert!(stabilizer_subgroup(&ints(&g(&[2]), &[1, 2])).is_err());
    }
}
