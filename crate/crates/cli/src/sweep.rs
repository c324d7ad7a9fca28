use std::cmp::Ordering;

use num_complex::Complex64;
use ppdlab::constructions::{
    closure_report, corestrict, corestriction_consistency, duality_square, external_product, pointwise_product,
    ppd_times_good, restrict,
};
use ppdlab::fourier::{dft, GroupFunction};
use ppdlab::group::{all_subgroups, groups_up_to, DEFAULT_SUBGROUP_BOUND};
use ppdlab::io::{format_generators, FunctionFile};
use ppdlab::ppd::{bochner_oracle_with, normalize_function, normalized_dual, stabilizer_subgroup, verdict, Witness};
use ppdlab::sample::{sample_good, sample_ppd};
use ppdlab::{Cyclotomic, FiniteAbelianGroup, Scalar, Subgroup};
use serde::Serialize;

use crate::commands::{mode_name, tolerances, with_mode};
use crate::output::{CliError, Report};
use crate::{Global, ModeArg};

pub const SWEEP_DEFAULT_ORDER: usize = 8;
const MAX_LISTED_FAILURES: usize = 20;

#[derive(Serialize)]
struct FailureCase {
    group: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    subgroup: Option<Vec<Vec<usize>>>,
    seed: u64,
    detail: String,
}

#[derive(Serialize)]
struct Tally {
    name: &'static str,
    cases: usize,
    passed: usize,
    failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_gap: Option<f64>,
    failures: Vec<FailureCase>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            passed: 0,
            failed: 0,
            max_gap: None,
            failures: Vec::new(),
        }
    }

    fn gap(&mut self, g: f64) {
        self.max_gap = Some(self.max_gap.map_or(g, |m| m.max(g)));
    }

    fn record(&mut self, group: &FiniteAbelianGroup, h: Option<&Subgroup>, seed: u64, outcome: Result<(), String>) {
        self.cases += 1;
        match outcome {
            Ok(()) => self.passed += 1,
            Err(detail) => {
                self.failed += 1;
                if self.failures.len() < MAX_LISTED_FAILURES {
                    self.failures.push(FailureCase {
                        group: group.to_string(),
                        subgroup: h.map(format_generators),
                        seed,
                        detail,
                    });
                }
            }
        }
    }
}

#[derive(Serialize)]
struct DiscrepancyPayload {
    group: String,
    subgroup: Vec<Vec<usize>>,
    seed: u64,
    f: FunctionFile,
    g: FunctionFile,
    w: FunctionFile,
    w_hat: FunctionFile,
    failed_conditions: Vec<String>,
    witnesses: Vec<Witness>,
}

#[derive(Serialize)]
struct DiscrepancyClass {
    name: &'static str,
    description: &'static str,
    cases: usize,
    product_not_good: usize,
    payloads: Vec<DiscrepancyPayload>,
}

#[derive(Serialize)]
struct SweepReport {
    mode: &'static str,
    seed: u64,
    cases_per_group: usize,
    groups: Vec<String>,
    theorems: Vec<Tally>,
    counterexamples: Vec<DiscrepancyClass>,
}

/// Replayable seed of case `i` in stream `stream` for the group at `gi`.
fn case_seed(base: u64, stream: u64, gi: usize, i: usize) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream << 48)
        .wrapping_add((gi as u64) << 24)
        .wrapping_add(i as u64)
}

fn normalized_good<S: Scalar>(g: &FiniteAbelianGroup, seed: u64) -> GroupFunction<S> {
    normalize_function(&sample_good(g, seed))
        .expect("good samples have f(0) > 0")
        .to_scalar()
}

fn err(e: ppdlab::Error) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn at_most_one<S: Scalar>(f: &GroupFunction<S>, tol: f64) -> bool {
    f.values()
        .iter()
        .all(|v| matches!(S::one().sub(v).real_sign(tol), Some(Ordering::Greater | Ordering::Equal)))
}

fn indicator<S: Scalar>(h: &Subgroup) -> GroupFunction<S> {
    GroupFunction::from_fn(h.parent(), |x| if h.contains(x) { S::one() } else { S::zero() })
}

struct Context<'a> {
    global: &'a Global,
    cases: usize,
}

fn good_suite<S: Scalar>(cx: &Context, t: &mut Tally, gi: usize, g: &FiniteAbelianGroup) {
    let tol = tolerances(cx.global);
    for i in 0..cx.cases {
        let seed = case_seed(cx.global.seed, 1, gi, i);
        let f = normalized_good::<S>(g, seed);
        let outcome = (|| {
            let v = verdict(&f, &tol);
            ensure(v.is_good, || "sample is not good".into())?;
            ensure(at_most_one(&f, cx.global.tol), || "a value exceeds f(0)".into())?;
            let stab = stabilizer_subgroup(&f).map_err(err)?;
            ensure(stab.is_trivial(), || "stabilizer is not trivial".into())?;
            let gram = bochner_oracle_with(&f, &tol).map_err(err)?;
            ensure(gram == v.is_ppd, || "Gram matrix test disagrees with the transform".into())
        })();
        t.record(g, None, seed, outcome);
    }
}

fn subgroup_suites<S: Scalar>(
    cx: &Context,
    [core, square]: [&mut Tally; 2],
    gi: usize,
    g: &FiniteAbelianGroup,
    subs: &[Subgroup],
) {
    let tol = cx.global.tol;
    for (hi, h) in subs.iter().enumerate() {
        for i in 0..cx.cases {
            let seed = case_seed(cx.global.seed, 2, gi, hi * cx.cases + i);
            let f = normalized_good::<S>(g, seed);
            let outcome = (|| {
                restrict(&f, h).map_err(err)?;
                corestrict(&f, h).map_err(err)?;
                let r = corestriction_consistency(&f, h, tol).map_err(err)?;
                core.gap(r.max_abs_gap);
                ensure(r.passed(), || format!("routes differ on cosets {:?}", r.gap_positions))?;
                ensure(at_most_one(&r.fourier_route, tol), || "corestriction exceeds 1".into())
            })();
            core.record(g, Some(h), seed, outcome);
            let outcome = duality_square(&f, h, tol).map_err(err).and_then(|r| {
                square.gap(r.max_abs_gap);
                ensure(r.commutes, || format!("square gap {:e}", r.max_abs_gap))
            });
            square.record(g, Some(h), seed, outcome);
        }
    }
}

fn double_dual<S: Scalar>(cx: &Context, t: &mut Tally, gi: usize, g: &FiniteAbelianGroup) {
    for i in 0..cx.cases {
        let seed = case_seed(cx.global.seed, 3, gi, i);
        let f = normalized_good::<S>(g, seed);
        let outcome = normalized_dual(&f, true)
            .and_then(|d| normalized_dual(&d, true))
            .map_err(err)
            .and_then(|back| {
                t.gap(back.max_abs_diff(&f));
                ensure(back.approx_eq(&f, cx.global.tol), || "double dual differs".into())
            });
        t.record(g, None, seed, outcome);
    }
}

fn closure<S: Scalar>(cx: &Context, t: &mut Tally, gi: usize, g: &FiniteAbelianGroup) {
    for i in 0..cx.cases {
        let seed = case_seed(cx.global.seed, 4, gi, i);
        let (u, v, w) = match i % 3 {
            0 => {
                let u = sample_ppd(g, seed).to_scalar::<S>();
                let v = sample_ppd(g, seed ^ 1).to_scalar::<S>();
                let w = pointwise_product(&u, &v).expect("same group");
                (u, v, w)
            }
            1 => {
                let u = normalized_good::<S>(g, seed);
                let v = normalized_good::<S>(g, seed ^ 1);
                let w = pointwise_product(&u, &v).expect("same group");
                (u, v, w)
            }
            _ => {
                let u = normalized_good::<S>(g, seed);
                let v = normalized_good::<S>(g, seed ^ 1);
                let w = external_product(&u, &v).expect("direct sum of valid groups");
                (u, v, w)
            }
        };
        let r = closure_report(&[&u, &v], &w);
        t.record(g, None, seed, ensure(r.holds(), || format!("closure {r:?}")));
    }
}

fn strict_products<S: Scalar>(cx: &Context, t: &mut Tally, gi: usize, g: &FiniteAbelianGroup) {
    for i in 0..cx.cases {
        let seed = case_seed(cx.global.seed, 5, gi, i);
        let base = sample_ppd(g, seed);
        let shifted = base
            .add(&GroupFunction::constant(g, Cyclotomic::one()))
            .expect("same group");
        let f = normalize_function(&shifted).expect("positive at 0").to_scalar::<S>();
        let h = sample_good(g, seed ^ 1).to_scalar::<S>();
        let outcome = ppd_times_good(&f, &h)
            .map_err(err)
            .and_then(|(_, v)| ensure(v.is_good, || "product is not good".into()));
        t.record(g, None, seed, outcome);
    }
}

fn vanishing_factor<S: Scalar>(
    cx: &Context,
    class: &mut DiscrepancyClass,
    gi: usize,
    g: &FiniteAbelianGroup,
    subs: &[Subgroup],
) -> Result<(), CliError> {
    let proper: Vec<&Subgroup> = subs.iter().filter(|h| !h.is_whole()).collect();
    let Some(largest) = proper.iter().map(|h| h.order()).max() else {
        return Ok(());
    };
    let mut listed = false;
    for (hi, h) in proper.iter().enumerate() {
        let seed = case_seed(cx.global.seed, 6, gi, hi);
        let f = indicator::<S>(h);
        let gg = sample_good(g, seed).to_scalar::<S>();
        let (w, v) = ppd_times_good(&f, &gg)?;
        class.cases += 1;
        if !v.is_good {
            class.product_not_good += 1;
        }
        if !listed && !v.is_good && h.order() == largest {
            listed = true;
            class.payloads.push(DiscrepancyPayload {
                group: g.to_string(),
                subgroup: format_generators(h),
                seed,
                f: FunctionFile::from_function(&f),
                g: FunctionFile::from_function(&gg),
                w_hat: FunctionFile::from_function(&dft(&w)),
                w: FunctionFile::from_function(&w),
                failed_conditions: v
                    .conditions
                    .iter()
                    .filter(|c| !c.holds)
                    .map(|c| serde_json::to_value(c.condition).unwrap().as_str().unwrap_or("").to_string())
                    .collect(),
                witnesses: v.witnesses.clone(),
            });
        }
    }
    Ok(())
}

fn sweep_in<S: Scalar>(global: &Global, groups: &[FiniteAbelianGroup], cases: usize) -> Result<Report, CliError> {
    let cx = Context { global, cases };
    let mut suite = Tally::new("good-function-suite");
    let mut core = Tally::new("restriction-corestriction");
    let mut square = Tally::new("duality-square");
    let mut dd = Tally::new("double-dual");
    let mut products = Tally::new("product-closure");
    let mut strict = Tally::new("strictly-positive-ppd-times-good");
    let mut class = DiscrepancyClass {
        name: "ppd-times-good-with-vanishing-factor",
        description: "subgroup indicator times a good function: PPD and integrable, but zero off the subgroup",
        cases: 0,
        product_not_good: 0,
        payloads: Vec::new(),
    };
    for (gi, g) in groups.iter().enumerate() {
        let subs = all_subgroups(g, DEFAULT_SUBGROUP_BOUND)?;
        good_suite::<S>(&cx, &mut suite, gi, g);
        subgroup_suites::<S>(&cx, [&mut core, &mut square], gi, g, &subs);
        double_dual::<S>(&cx, &mut dd, gi, g);
        closure::<S>(&cx, &mut products, gi, g);
        strict_products::<S>(&cx, &mut strict, gi, g);
        vanishing_factor::<S>(&cx, &mut class, gi, g, &subs)?;
    }
    let theorems: Vec<Tally> = [suite, core, square, dd, products, strict]
        .into_iter()
        .filter(|t| t.cases > 0)
        .collect();
    let ok = theorems.iter().all(|t| t.failed == 0);
    let report = SweepReport {
        mode: mode_name(global),
        seed: global.seed,
        cases_per_group: cases,
        groups: groups.iter().map(ToString::to_string).collect(),
        theorems,
        counterexamples: if class.cases > 0 { vec![class] } else { Vec::new() },
    };
    Report::new(report, ok)
}

pub fn sweep(global: &Global, groups: &[FiniteAbelianGroup], cases: usize) -> Result<Report, CliError> {
    with_mode!(global, sweep_in(global, groups, cases))
}

#[derive(Serialize)]
struct PairEntry {
    group: String,
    subgroup: Vec<Vec<usize>>,
    subgroup_order: usize,
    cases: usize,
    passed: usize,
    max_gap: f64,
    inequality_holds: bool,
    restriction_good: bool,
    corestriction_good: bool,
    identity_is_one: bool,
    failing_seeds: Vec<u64>,
}

#[derive(Serialize)]
struct VerifyReport {
    mode: &'static str,
    seed: u64,
    max_order: usize,
    cases_per_pair: usize,
    pairs: usize,
    cases: usize,
    failures: usize,
    max_gap: f64,
    entries: Vec<PairEntry>,
}

fn verify_in<S: Scalar>(global: &Global, cases: usize) -> Result<Report, CliError> {
    let max_order = global.order_bound(SWEEP_DEFAULT_ORDER);
    let mut entries = Vec::new();
    for (gi, g) in groups_up_to(max_order).iter().enumerate() {
        for (hi, h) in all_subgroups(g, DEFAULT_SUBGROUP_BOUND)?.iter().enumerate() {
            let mut e = PairEntry {
                group: g.to_string(),
                subgroup: format_generators(h),
                subgroup_order: h.order(),
                cases,
                passed: 0,
                max_gap: 0.0,
                inequality_holds: true,
                restriction_good: true,
                corestriction_good: true,
                identity_is_one: true,
                failing_seeds: Vec::new(),
            };
            for i in 0..cases {
                let seed = case_seed(global.seed, 7, gi, hi * cases + i);
                let f = normalized_good::<S>(g, seed);
                let rg = restrict(&f, h).is_ok();
                let cg = corestrict(&f, h).is_ok();
                let r = corestriction_consistency(&f, h, global.tol)?;
                e.max_gap = e.max_gap.max(r.max_abs_gap);
                e.inequality_holds &= r.inequality_holds;
                e.identity_is_one &= r.identity_is_one;
                e.restriction_good &= rg;
                e.corestriction_good &= cg;
                if r.passed() && rg && cg {
                    e.passed += 1;
                } else {
                    e.failing_seeds.push(seed);
                }
            }
            entries.push(e);
        }
    }
    let failures = entries.iter().map(|e| e.cases - e.passed).sum();
    let report = VerifyReport {
        mode: mode_name(global),
        seed: global.seed,
        max_order,
        cases_per_pair: cases,
        pairs: entries.len(),
        cases: entries.iter().map(|e| e.cases).sum(),
        failures,
        max_gap: entries.iter().map(|e| e.max_gap).fold(0.0, f64::max),
        entries,
    };
    Report::new(report, failures == 0)
}

pub fn verify(global: &Global, cases: usize) -> Result<Report, CliError> {
    with_mode!(global, verify_in(global, cases))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_distinct_across_streams() {
        let a = case_seed(7, 1, 0, 0);
        let b = case_seed(7, 2, 0, 0);
        let c = case_seed(7, 1, 1, 0);
        assert!(a != b && a != c && b != c);
        assert_eq!(case_seed(7, 1, 0, 0), a);
    }

    #[test]
    fn indicator_is_normalized_ppd() {
        let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
        let h = Subgroup::from_generators(&z4, &[z4.element(2)]).unwrap();
        let f = indicator::<Cyclotomic>(&h);
        assert_eq!(f, GroupFunction::from_ints(&z4, &[1, 0, 1, 0]).unwrap());
        assert!(verdict(&f, &Default::default()).is_ppd);
    }
}
