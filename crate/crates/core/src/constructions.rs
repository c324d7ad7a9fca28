//! Restriction to subgroups, corestriction to quotients, and products.
//!
//! Functions on a subgroup `H` live on its presentation group; functions on
//! `G/H` live on the quotient presentation. A character of `G/H` is
//! identified with its pull-back along the projection, an element of `H⊥`.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{dft, inverse_transform, pushforward, GroupFunction, HaarScale, ScaledMeasure};
use crate::group::{FiniteAbelianGroup, Homomorphism, QuotientGroup, Subgroup};
use crate::ppd::{normalize_measure, normalized_dual, verdict, Condition, PpdVerdict, Tolerances};
use crate::scalar::Scalar;

fn abs_tol<S: Scalar>(f: &GroupFunction<S>) -> f64 {
    Tolerances::default().eq * f.max_magnitude().max(f64::MIN_POSITIVE)
}

fn failed_conditions(v: &PpdVerdict) -> String {
    let names: Vec<String> = v
        .conditions
        .iter()
        .filter(|c| !c.holds)
        .map(|c| serde_json::to_string(&c.condition).unwrap_or_default())
        .collect();
    names.join(", ")
}

fn require_good<S: Scalar>(f: &GroupFunction<S>, what: &str) -> Result<()> {
    let v = verdict(f, &Tolerances::default());
    if !v.is_good {
        return Err(Error::Precondition(format!(
            "{what} requires a good function; failed: {}",
            failed_conditions(&v)
        )));
    }
    Ok(())
}

fn require_normalized_good<S: Scalar>(f: &GroupFunction<S>, what: &str) -> Result<()> {
    require_good(f, what)?;
    if !f.at_identity().approx_eq(&S::one(), abs_tol(f)) {
        return Err(Error::Precondition(format!("{what} requires f(0) = 1")));
    }
    Ok(())
}

fn ensure_good_result<S: Scalar>(f: &GroupFunction<S>, what: &str) -> Result<()> {
    let v = verdict(f, &Tolerances::default());
    if !v.is_good {
        return Err(Error::Postcondition(format!(
            "{what} is not good; failed: {}",
            failed_conditions(&v)
        )));
    }
    Ok(())
}

fn normalize_at_identity<S: Scalar>(f: &GroupFunction<S>) -> Result<GroupFunction<S>> {
    let inv = f
        .at_identity()
        .inv()
        .ok_or_else(|| Error::ZeroDivision("value at the identity".into()))?;
    Ok(f.scale(&inv))
}

/// Values of `f` on `H`, with no preconditions.
pub fn restrict_values<S: Scalar>(f: &GroupFunction<S>, h: &Subgroup) -> Result<GroupFunction<S>> {
    h.ensure_in(f.group())?;
    let p = h.presentation();
    Ok(GroupFunction::from_fn(&p.group, |i| f.value(p.element_map[i]).clone()))
}

/// Restriction of a normalized good function; the result is normalized good on `H`.
pub fn restrict<S: Scalar>(f: &GroupFunction<S>, h: &Subgroup) -> Result<GroupFunction<S>> {
    require_normalized_good(f, "restriction")?;
    let r = restrict_values(f, h)?;
    ensure_good_result(&r, "restriction")?;
    Ok(r)
}

/// `u(x̄) = (1/|G/H|) Σ_{a ∈ H⊥} f̂(a) χ_a(x)` with `f̂` taken against counting measure.
fn corestrict_unnormalized<S: Scalar>(f: &GroupFunction<S>, q: &QuotientGroup) -> GroupFunction<S> {
    let fhat = dft(f);
    let dual_pi = q.projection_hom().dual();
    let qd = q.group().dual();
    let masses = GroupFunction::from_fn(&qd, |b| fhat.value(dual_pi.apply_index(b)).clone());
    let scale = S::from_i64(q.num_cosets() as i64).inv().expect("nonzero order");
    let mu = ScaledMeasure::new(masses, HaarScale::new(&qd, scale).expect("positive scale"))
        .expect("same group");
    inverse_transform(&mu)
}

/// Corestriction along `G → G/H`: restrict `f̂` to `H⊥`, transform back and
/// normalize at the identity coset.
pub fn corestrict<S: Scalar>(f: &GroupFunction<S>, h: &Subgroup) -> Result<GroupFunction<S>> {
    require_normalized_good(f, "corestriction")?;
    h.ensure_in(f.group())?;
    let out = normalize_at_identity(&corestrict_unnormalized(f, &h.quotient()))?;
    ensure_good_result(&out, "corestriction")?;
    Ok(out)
}

/// `v(x̄) = Σ_{y ∈ H} f(x + y)`.
fn coset_sums<S: Scalar>(f: &GroupFunction<S>, q: &QuotientGroup) -> GroupFunction<S> {
    let g = f.group();
    let h = q.subgroup();
    GroupFunction::from_fn(q.group(), |k| {
        let x = q.lift(k);
        h.elements()
            .iter()
            .fold(S::zero(), |acc, &y| acc.add(f.value(g.add(x, y))))
    })
}

/// `g(x̄) = Σ_{y∈H} f(x + y) / Σ_{y∈H} f(y)`.
pub fn coset_average<S: Scalar>(f: &GroupFunction<S>, h: &Subgroup) -> Result<GroupFunction<S>> {
    h.ensure_in(f.group())?;
    let q = h.quotient();
    let sums = coset_sums(f, &q);
    if sums.at_identity().is_zero_tol(abs_tol(f)) {
        return Err(Error::ZeroDivision("sum of f over the subgroup".into()));
    }
    normalize_at_identity(&sums)
}

#[derive(Clone, Debug)]
pub struct CorestrictionReport<S> {
    pub fourier_route: GroupFunction<S>,
    pub average_route: GroupFunction<S>,
    /// `(1/|G/H|) Σ_{H⊥} f̂ χ` before normalization
    pub fourier_unnormalized: GroupFunction<S>,
    /// `Σ_{y∈H} f(x+y)` before normalization
    pub average_unnormalized: GroupFunction<S>,
    pub max_abs_gap: f64,
    /// cosets, as quotient presentation elements, where the routes differ
    pub gap_positions: Vec<usize>,
    /// fourier ≥ average on every coset, before normalization
    pub inequality_holds: bool,
    pub identity_is_one: bool,
}

impl<S: Scalar> CorestrictionReport<S> {
    pub fn passed(&self) -> bool {
        self.gap_positions.is_empty() && self.inequality_holds && self.identity_is_one
    }
}

/// Both corestriction routes side by side. Exact mode ignores `tol`.
pub fn corestriction_consistency<S: Scalar>(
    f: &GroupFunction<S>,
    h: &Subgroup,
    tol: f64,
) -> Result<CorestrictionReport<S>> {
    require_normalized_good(f, "corestriction check")?;
    h.ensure_in(f.group())?;
    let q = h.quotient();
    let u = corestrict_unnormalized(f, &q);
    let v = coset_sums(f, &q);
    let scale = f.max_magnitude().max(1.0) * h.order() as f64;
    let inequality_holds = q.group().elements().all(|k| {
        matches!(
            u.value(k).sub(v.value(k)).real_sign(tol * scale),
            Some(Ordering::Greater | Ordering::Equal)
        )
    });
    let fourier_route = normalize_at_identity(&u)?;
    let average_route = normalize_at_identity(&v)?;
    let gap_positions = q
        .group()
        .elements()
        .filter(|&k| !fourier_route.value(k).approx_eq(average_route.value(k), tol))
        .collect();
    let one = S::one();
    let identity_is_one =
        fourier_route.at_identity().approx_eq(&one, tol) && average_route.at_identity().approx_eq(&one, tol);
    Ok(CorestrictionReport {
        max_abs_gap: fourier_route.max_abs_diff(&average_route),
        fourier_unnormalized: u,
        average_unnormalized: v,
        fourier_route,
        average_route,
        gap_positions,
        inequality_holds,
        identity_is_one,
    })
}

/// `w(x, y) = u(x) v(y)` on `G ⊕ H`.
pub fn external_product<S: Scalar>(u: &GroupFunction<S>, v: &GroupFunction<S>) -> Result<GroupFunction<S>> {
    let sum = u.group().direct_sum(v.group())?;
    let n = u.group().order();
    Ok(GroupFunction::from_fn(&sum, |i| u.value(i % n).mul(v.value(i / n))))
}

pub fn pointwise_product<S: Scalar>(u: &GroupFunction<S>, v: &GroupFunction<S>) -> Result<GroupFunction<S>> {
    u.group().ensure_same(v.group())?;
    Ok(GroupFunction::from_fn(u.group(), |x| u.value(x).mul(v.value(x))))
}

/// `x ↦ (x, x)` into `G ⊕ G`.
pub fn diagonal(g: &FiniteAbelianGroup) -> Result<Homomorphism> {
    let sum = g.direct_sum(g)?;
    let k = g.moduli().len();
    let matrix = (0..2 * k)
        .map(|i| (0..k).map(|j| i64::from(i % k == j)).collect())
        .collect();
    Homomorphism::new(g, &sum, matrix)
}

/// Whether the PPD, good and normalized properties shared by all inputs
/// survive in the output. `None` marks a claim that does not apply.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub ppd: Option<bool>,
    pub good: Option<bool>,
    pub normalized: Option<bool>,
}

impl ClosureReport {
    pub fn holds(&self) -> bool {
        [self.ppd, self.good, self.normalized]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

pub fn closure_report<S: Scalar>(inputs: &[&GroupFunction<S>], output: &GroupFunction<S>) -> ClosureReport {
    let tol = Tolerances::default();
    let vs: Vec<PpdVerdict> = inputs.iter().map(|f| verdict(f, &tol)).collect();
    let out = verdict(output, &tol);
    let normalized = |f: &GroupFunction<S>| f.at_identity().approx_eq(&S::one(), abs_tol(f));
    let claim = |all: bool, holds: bool| all.then_some(holds);
    ClosureReport {
        ppd: claim(vs.iter().all(|v| v.is_ppd), out.is_ppd),
        good: claim(vs.iter().all(|v| v.is_good), out.is_good),
        normalized: claim(inputs.iter().all(|f| normalized(f)), normalized(output)),
    }
}

/// `w = f g` for normalized PPD `f` and good `g`, with the full goodness
/// verdict of `w`. `w` can vanish where `f` does.
pub fn ppd_times_good<S: Scalar>(
    f: &GroupFunction<S>,
    g: &GroupFunction<S>,
) -> Result<(GroupFunction<S>, PpdVerdict)> {
    let tol = Tolerances::default();
    if !verdict(f, &tol).is_ppd || !f.at_identity().approx_eq(&S::one(), abs_tol(f)) {
        return Err(Error::Precondition("first factor must be normalized PPD".into()));
    }
    require_good(g, "second factor")?;
    let w = pointwise_product(f, g)?;
    let v = verdict(&w, &tol);
    Ok((w, v))
}

impl PpdVerdict {
    /// Whether `f > 0` fails somewhere on the function side.
    pub fn function_vanishes(&self) -> bool {
        self.witnesses_for(Condition::StrictlyPositive)
            .any(|w| w.side == crate::ppd::Side::Function)
    }
}

fn require_good_measure<S: Scalar>(mu: &ScaledMeasure<S>, what: &str) -> Result<()> {
    require_good(mu.density(), what)
}

/// Density restricted to `H`, carried on the Haar scale making it a probability measure.
pub fn restrict_measure<S: Scalar>(mu: &ScaledMeasure<S>, h: &Subgroup) -> Result<ScaledMeasure<S>> {
    require_good_measure(mu, "measure restriction")?;
    let d = restrict_values(mu.density(), h)?;
    let group = d.group().clone();
    normalize_measure(&ScaledMeasure::new(d, HaarScale::counting(&group))?)
}

/// Push-forward along `G → G/H`, renormalized to a probability measure.
pub fn corestrict_measure<S: Scalar>(mu: &ScaledMeasure<S>, h: &Subgroup) -> Result<ScaledMeasure<S>> {
    require_good_measure(mu, "measure corestriction")?;
    h.ensure_in(mu.group())?;
    let pi = h.quotient().projection_hom();
    normalize_measure(&pushforward(&pi, mu)?)
}

#[derive(Clone, Debug)]
pub struct DualitySquareReport<S> {
    /// normalized dual of the restriction, on the dual of `H`
    pub dual_of_restriction: GroupFunction<S>,
    /// corestriction of the normalized dual along `Ĝ → Ĝ/H⊥`, moved to the
    /// dual of `H` by restricting characters
    pub corestriction_of_dual: GroupFunction<S>,
    pub max_abs_gap: f64,
    pub commutes: bool,
}

/// Compares `normalized_dual(f|_H)` with the corestriction of
/// `normalized_dual(f)` along `H⊥`, using `Ĝ/H⊥ ≅ Ĥ`.
pub fn duality_square<S: Scalar>(f: &GroupFunction<S>, h: &Subgroup, tol: f64) -> Result<DualitySquareReport<S>> {
    require_normalized_good(f, "duality square")?;
    let left = normalized_dual(&restrict(f, h)?, true)?;
    let d = normalized_dual(f, true)?;
    let perp = h.annihilator();
    let core = corestrict(&d, &perp)?;
    let q = perp.quotient();
    let restrict_chars = h.presentation().embedding.dual();
    let mut right = vec![None; left.group().order()];
    for k in q.group().elements() {
        let b = restrict_chars.apply_index(q.lift(k));
        right[b] = Some(core.value(k).clone());
    }
    let right: Vec<S> = right
        .into_iter()
        .map(|v| v.ok_or_else(|| Error::Postcondition("character restriction is not onto".into())))
        .collect::<Result<_>>()?;
    let right = GroupFunction::new(left.group(), right)?;
    Ok(DualitySquareReport {
        max_abs_gap: left.max_abs_diff(&right),
        commutes: left.approx_eq(&right, tol),
        dual_of_restriction: left,
        corestriction_of_dual: right,
    })
}
