//! Acceptance gate. Prints one line per criterion and exits nonzero when any fails.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ppdlab::cone::{
    extremal_rays, extremal_rays_bounded, field_of_definition_check, is_interior, ppd_cone_hrep,
    ppd_cone_hrep_bounded, EvenBasis,
};
use ppdlab::constructions::{
    closure_report, corestriction_consistency, diagonal, duality_square, external_product,
    pointwise_product, ppd_times_good,
};
use ppdlab::fourier::{dft, dual_haar, pullback, GroupFunction, HaarScale};
use ppdlab::gaussian::{
    counterexample_probe, gaussian_corestriction_check, gaussian_fourier_closed_form,
    numeric_fourier, GridQuadrature, QuadraticFormSpd,
};
use ppdlab::group::{all_subgroups, groups_up_to};
use ppdlab::ppd::{
    bochner_oracle, descend_to_quotient, is_good, normalize_function, normalized_dual,
    stabilizer_subgroup, Condition, Side,
};
use ppdlab::sample::{random_even_integers, sample_good, sample_ppd};
use ppdlab::{Cyclotomic, FiniteAbelianGroup, Scalar, Subgroup};

type Q = Cyclotomic;
type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// naive transform of a real function, straight from the pairing formula
fn naive_dft(f: &GroupFunction<Q>) -> Vec<Complex64> {
    let g = f.group();
    let vals: Vec<f64> = f.values().iter().map(|v| v.to_complex().re).collect();
    g.elements()
        .map(|a| {
            let ra = g.residues(a);
            g.elements()
                .map(|x| {
                    let rx = g.residues(x);
                    let t: f64 = ra
                        .iter()
                        .zip(&rx)
                        .zip(g.moduli())
                        .map(|((&p, &q), &n)| ((p * q) % n) as f64 / n as f64)
                        .sum();
                    Complex64::from_polar(vals[x], -2.0 * PI * t)
                })
                .sum()
        })
        .collect()
}

fn nonneg(v: &Q) -> bool {
    matches!(v.real_sign(), Some(Ordering::Greater | Ordering::Equal))
}

fn positive(v: &Q) -> bool {
    v.real_sign() == Some(Ordering::Greater)
}

fn orbit_indicator(g: &FiniteAbelianGroup, x: usize) -> GroupFunction<Q> {
    GroupFunction::from_fn(g, |y| if y == x || y == g.neg(x) { Q::one() } else { Q::zero() })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let groups = groups_up_to(12);
    let (mut exact_bad, mut float_bad, mut cross_bad, mut psd_count, mut total) = (0, 0, 0, 0, 0);
    for g in &groups {
        for i in 0..1000u64 {
            let seed = (g.order() as u64) << 32 | i;
            let f = match i % 4 {
                0 => random_even_integers(g, seed, -3, 8),
                1 => sample_ppd(g, seed),
                2 => {
                    let x = (i as usize / 4) % g.order();
                    let eps = Q::from_ratio(1, 1 + (i as i64 % 5));
                    sample_ppd(g, seed).add(&orbit_indicator(g, x).scale(&eps.neg())).unwrap()
                }
                _ => {
                    let x = (i as usize / 4) % g.order();
                    sample_ppd(g, seed).add(&orbit_indicator(g, x)).unwrap()
                }
            };
            let fhat = dft(&f);
            let truth = fhat.values().iter().all(nonneg);
            let naive = naive_dft(&f);
            // independent float transform must agree with the exact one
            for (e, n) in fhat.values().iter().zip(&naive) {
                let z = e.to_complex();
                let ok = (z - n).norm() < 1e-8
                    && match e.real_sign() {
                        Some(Ordering::Equal) => n.re.abs() < 1e-8,
                        Some(Ordering::Greater) => n.re > -1e-8,
                        Some(Ordering::Less) => n.re < 1e-8,
                        None => false,
                    };
                if !ok {
                    cross_bad += 1;
                }
            }
            let exact = bochner_oracle(&f).map_err(|e| e.to_string())?;
            let float = bochner_oracle(&f.to_float()).map_err(|e| e.to_string())?;
            exact_bad += usize::from(exact != truth);
            float_bad += usize::from(float != truth);
            psd_count += usize::from(truth);
            total += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(cross_bad == 0, || format!("{cross_bad} transform entries disagree with the naive DFT"))?;
    ensure(exact_bad == 0, || format!("{exact_bad} exact disagreements"))?;
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!(
        "{} groups, {total} functions ({psd_count} PSD), exact disagreements 0, float disagreements {float_bad}, {secs:.1}s",
        groups.len()
    ))
}

fn is_subgroup_set(g: &FiniteAbelianGroup, s: &BTreeSet<usize>) -> bool {
    s.contains(&0) && s.iter().all(|&a| s.iter().all(|&b| s.contains(&g.sub(a, b))))
}

fn criterion_2() -> Outcome {
    let groups = groups_up_to(16);
    let mut checked = 0;
    for g in &groups {
        for i in 0..1000u64 {
            let f = sample_ppd(g, 7_000_000 + (g.order() as u64) * 10_000 + i);
            let f0 = f.at_identity().clone();
            for x in g.elements() {
                ensure(nonneg(&f0.sub(f.value(x))), || format!("{g}: f({x}) > f(0)"))?;
            }
            let h = stabilizer_subgroup(&f).map_err(|e| format!("{g}: {e}"))?;
            let level: BTreeSet<usize> = g.elements().filter(|&x| *f.value(x) == f0).collect();
            let hs: BTreeSet<usize> = h.elements().iter().copied().collect();
            ensure(hs == level, || format!("{g}: stabilizer differs from the level set"))?;
            ensure(is_subgroup_set(g, &level), || format!("{g}: level set is not a subgroup"))?;
            let down = descend_to_quotient(&f, &h).map_err(|e| e.to_string())?;
            let back = pullback(&h.quotient().projection_hom(), &down).map_err(|e| e.to_string())?;
            ensure(back == f, || format!("{g}: pullback of descent differs"))?;
            checked += 1;
        }
    }
    Ok(format!("{} groups, {checked} PPD samples, 0 failures", groups.len()))
}

fn normalized_good(g: &FiniteAbelianGroup, seed: u64) -> GroupFunction<Q> {
    normalize_function(&sample_good(g, seed)).expect("good samples have f(0) > 0")
}

fn criterion_3() -> Outcome {
    let (mut pairs, mut cases, mut worst) = (0, 0, 0.0f64);
    for g in &groups_up_to(12) {
        let subs = all_subgroups(g, 12).map_err(|e| e.to_string())?;
        for h in &subs {
            pairs += 1;
            let q = h.quotient();
            for i in 0..100u64 {
                let f = normalized_good(g, 3_000_000 + pairs * 1000 + i);
                let r = corestriction_consistency(&f, h, 0.0).map_err(|e| format!("{g} {h:?}: {e}"))?;
                ensure(r.passed(), || format!("{g} {h:?}: exact routes differ at {:?}", r.gap_positions))?;
                // coset averages recomputed directly
                let sums: Vec<Q> = q
                    .group()
                    .elements()
                    .map(|k| {
                        let x = q.lift(k);
                        h.elements().iter().fold(Q::zero(), |acc, &y| acc.add(f.value(g.add(x, y))))
                    })
                    .collect();
                let s0 = sums[0].inv().ok_or("zero subgroup sum")?;
                for (k, s) in sums.iter().enumerate() {
                    ensure(r.fourier_route.value(k) == &s.mul(&s0), || {
                        format!("{g} {h:?}: coset {k} differs from the direct average")
                    })?;
                }
                let rf = corestriction_consistency(&f.to_float(), h, 1e-10).map_err(|e| e.to_string())?;
                ensure(rf.passed(), || format!("{g} {h:?}: float gap {:e}", rf.max_abs_gap))?;
                worst = worst.max(rf.max_abs_gap);
                cases += 1;
            }
        }
    }
    Ok(format!("{pairs} (group, subgroup) pairs, {cases} cases, exact gap 0, float gap {worst:.1e}"))
}

fn transform_nonneg_float(f: &GroupFunction<Q>) -> bool {
    let scale: f64 = f.values().iter().map(|v| v.magnitude()).sum::<f64>().max(1.0);
    naive_dft(f).iter().all(|z| z.re >= -1e-9 * scale && z.im.abs() <= 1e-9 * scale)
}

fn criterion_4() -> Outcome {
    let small = groups_up_to(8);
    let mid = groups_up_to(12);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut counts = [0usize; 3];
    for case in 0..1000u64 {
        let kind = (case % 3) as usize;
        let seed = 4_000_000 + case * 4;
        let (u, v, out) = match kind {
            // PPD pair, pointwise
            0 => {
                let g = &mid[rng.gen_range(0..mid.len())];
                let (u, v) = (sample_ppd(g, seed), sample_ppd(g, seed + 1));
                let w = pointwise_product(&u, &v).map_err(|e| e.to_string())?;
                (u, v, w)
            }
            // normalized good pair, pointwise
            1 => {
                let g = &mid[rng.gen_range(0..mid.len())];
                let (u, v) = (normalized_good(g, seed), normalized_good(g, seed + 1));
                let w = pointwise_product(&u, &v).map_err(|e| e.to_string())?;
                (u, v, w)
            }
            // external product on G ⊕ H
            _ => {
                let g = &small[rng.gen_range(0..small.len())];
                let h = &small[rng.gen_range(0..small.len())];
                let (u, v) = if rng.gen_bool(0.5) {
                    (normalized_good(g, seed), normalized_good(h, seed + 1))
                } else {
                    (sample_ppd(g, seed), sample_ppd(h, seed + 1))
                };
                let w = external_product(&u, &v).map_err(|e| e.to_string())?;
                (u, v, w)
            }
        };
        let report = closure_report(&[&u, &v], &out);
        ensure(report.ppd == Some(true), || format!("case {case}: product lost PPD"))?;
        ensure(report.holds(), || format!("case {case}: closure failed {report:?}"))?;
        ensure(transform_nonneg_float(&out), || format!("case {case}: naive transform negative"))?;
        ensure(out.values().iter().all(nonneg), || format!("case {case}: negative value"))?;
        if kind == 1 || is_good(&u).is_good && is_good(&v).is_good {
            ensure(report.good == Some(true), || format!("case {case}: product lost goodness"))?;
        }
        if kind == 2 && u.group() == v.group() {
            let back = pullback(&diagonal(u.group()).unwrap(), &out).map_err(|e| e.to_string())?;
            let direct = pointwise_product(&u, &v).unwrap();
            ensure(back == direct, || format!("case {case}: diagonal restriction differs"))?;
        }
        counts[kind] += 1;
    }
    // diagonal consistency on every group of order ≤ 8
    for g in &small {
        let (u, v) = (sample_ppd(g, 41), normalized_good(g, 43));
        let back = pullback(&diagonal(g).unwrap(), &external_product(&u, &v).unwrap()).unwrap();
        ensure(back == pointwise_product(&u, &v).unwrap(), || format!("{g}: diagonal"))?;
    }
    Ok(format!(
        "{} PPD products, {} normalized good products, {} external products, diagonal restriction exact",
        counts[0], counts[1], counts[2]
    ))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for g in &groups_up_to(12) {
        for i in 0..40u64 {
            let base = sample_ppd(g, 5_000_000 + (g.order() as u64) * 1000 + i);
            let f = normalize_function(&base.add(&GroupFunction::constant(g, Q::one())).unwrap())
                .map_err(|e| e.to_string())?;
            ensure(f.values().iter().all(positive), || format!("{g}: f not strictly positive"))?;
            let gg = sample_good(g, 5_500_000 + i);
            let (w, v) = ppd_times_good(&f, &gg).map_err(|e| e.to_string())?;
            ensure(v.is_good, || format!("{g}: f·g not good"))?;
            ensure(transform_nonneg_float(&w), || format!("{g}: naive transform negative"))?;
            checked += 1;
        }
    }
    let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
    let f = GroupFunction::<Q>::from_ints(&z4, &[1, 0, 1, 0]).unwrap();
    let g = GroupFunction::<Q>::from_ints(&z4, &[4, 2, 1, 2]).unwrap();
    let (w, v) = ppd_times_good(&f, &g).map_err(|e| e.to_string())?;
    let expect_w = GroupFunction::<Q>::from_ints(&z4, &[4, 0, 1, 0]).unwrap();
    ensure(w == expect_w, || format!("w = {:?}", w.values()))?;
    let naive = naive_dft(&w);
    let direct: Vec<f64> = naive.iter().map(|z| z.re).collect();
    for (d, e) in direct.iter().zip([5.0, 3.0, 5.0, 3.0]) {
        ensure((d - e).abs() < 1e-12, || format!("naive ŵ = {direct:?}"))?;
    }
    let what = GroupFunction::<Q>::from_ints(&z4, &[5, 3, 5, 3]).unwrap();
    ensure(dft(&w).values() == what.values(), || "exact ŵ differs".into())?;
    ensure(v.is_ppd && !v.is_good, || format!("verdict {v:?}"))?;
    ensure(!v.holds(Condition::StrictlyPositive), || "strict positivity not flagged".into())?;
    for c in Condition::PPD {
        ensure(v.holds(c), || format!("{c:?} should hold"))?;
    }
    let flagged: Vec<usize> = v
        .witnesses_for(Condition::StrictlyPositive)
        .map(|w| {
            if w.side == Side::Function {
                Ok(w.element)
            } else {
                Err(())
            }
        })
        .collect::<Result<_, _>>()
        .map_err(|_| "a transform witness was flagged".to_string())?;
    ensure(flagged == vec![1, 3], || format!("flagged {flagged:?}"))?;
    Ok(format!(
        "{checked} strictly positive products good; Z4 discrepancy reproduced: w=(4,0,1,0), ŵ=(5,3,5,3), strict positivity fails at x=1,3"
    ))
}

// Brute force: every (d-1)-subset of inequalities whose common solution is a
// line, kept when one direction of the line satisfies every inequality.
fn brute_force_rays(g: &FiniteAbelianGroup) -> Vec<Vec<Q>> {
    let orbits = g.inverse_orbits();
    let d = orbits.len();
    let e = g.exponent() as u32;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for j in 0..d {
        rows.push((0..d).map(|k| if k == j { Q::one() } else { Q::zero() }).collect());
    }
    for a in orbits.iter().map(|o| o[0]) {
        let ra = g.residues(a);
        rows.push(
            orbits
                .iter()
                .map(|o| {
                    o.iter().fold(Q::zero(), |acc, &x| {
                        let rx = g.residues(x);
                        let k: usize = ra
                            .iter()
                            .zip(&rx)
                            .zip(g.moduli())
                            .map(|((&p, &q), &n)| (p * q % n) * (e as usize / n))
                            .sum();
                        acc.add(&Q::root_of_unity(-(k as i64), e))
                    })
                })
                .collect(),
        );
    }
    let m = rows.len();
    let mut found: Vec<Vec<Q>> = Vec::new();
    let mut subset: Vec<usize> = (0..d.saturating_sub(1)).collect();
    loop {
        if let Some(dir) = line_of(&subset.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>(), d) {
            for sign in [1i64, -1] {
                let v: Vec<Q> = dir.iter().map(|c| c.mul(&Q::from_int(sign))).collect();
                let ok = rows.iter().all(|r| nonneg(&dot(r, &v)));
                if ok {
                    let v = lead_normalized(&v);
                    if !found.contains(&v) {
                        found.push(v);
                    }
                }
            }
        }
        // next combination
        let k = subset.len();
        let mut i = k;
        loop {
            if i == 0 {
                return found;
            }
            i -= 1;
            if subset[i] < m - k + i {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            return found;
        }
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

fn lead_normalized(v: &[Q]) -> Vec<Q> {
    let lead = v.iter().find(|c| !c.is_zero()).expect("nonzero").inv().unwrap();
    v.iter().map(|c| c.mul(&lead)).collect()
}

// Kernel of the rows when it is one-dimensional.
fn line_of(rows: &[Vec<Q>], d: usize) -> Option<Vec<Q>> {
    let mut m = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..d {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        m[r] = m[r].iter().map(|x| x.mul(&inv)).collect();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let t = m[i][c].clone();
                m[i] = m[i].iter().zip(&m[r]).map(|(a, b)| a.sub(&t.mul(b))).collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() != d - 1 {
        return None;
    }
    let free = (0..d).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![Q::zero(); d];
    v[free] = Q::one();
    for (row, &c) in pivots.iter().enumerate() {
        v[c] = m[row][free].neg();
    }
    Some(v)
}

fn dd_rays(g: &FiniteAbelianGroup) -> Result<Vec<Vec<Q>>, String> {
    let cone = extremal_rays(&ppd_cone_hrep(g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    Ok(cone.rays.unwrap().iter().map(|r| lead_normalized(&r.coords)).collect())
}

fn same_set(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

fn criterion_6() -> Outcome {
    let mut counts = Vec::new();
    for n in [2, 3, 4] {
        let g = FiniteAbelianGroup::cyclic(n).unwrap();
        let (dd, bf) = (dd_rays(&g)?, brute_force_rays(&g));
        counts.push(dd.len());
        ensure(bf.len() == dd.len(), || format!("Z{n}: brute force found {}", bf.len()))?;
    }
    ensure(counts == [2, 2, 4], || format!("ray counts {counts:?}"))?;
    let mut matched = Vec::new();
    for n in 2..=6 {
        let g = FiniteAbelianGroup::cyclic(n).unwrap();
        let (dd, bf) = (dd_rays(&g)?, brute_force_rays(&g));
        ensure(same_set(&dd, &bf), || format!("Z{n}: ray sets differ"))?;
        matched.push(format!("Z{n}:{}", dd.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut points = 0;
    let groups = groups_up_to(8);
    for g in &groups {
        let cone = ppd_cone_hrep(g).map_err(|e| e.to_string())?;
        let basis = EvenBasis::new(g);
        for i in 0..1000u64 {
            let f = match i % 4 {
                0 | 1 => {
                    let coords: Vec<Q> = (0..basis.dim())
                        .map(|j| {
                            let den = rng.gen_range(1..=6);
                            let lo = if j == 0 { 0 } else { -den };
                            Q::from_ratio(rng.gen_range(lo..=4 * den), den)
                        })
                        .collect();
                    basis.function(&coords).unwrap()
                }
                2 => sample_ppd(g, 6_000_000 + i),
                _ => sample_good(g, 6_000_000 + i),
            };
            let inside = is_interior(&f, &cone).map_err(|e| e.to_string())?;
            let good = is_good(&f).is_good;
            ensure(inside == good, || format!("{g}: interior {inside} vs good {good} at {:?}", f.values()))?;
            points += 1;
        }
    }
    Ok(format!(
        "ray counts Z2,Z3,Z4 = 2,2,4; brute force matches {}; {points} points on {} groups agree",
        matched.join(" "),
        groups.len()
    ))
}

fn criterion_7() -> Outcome {
    let groups: Vec<_> = groups_up_to(16).into_iter().filter(|g| g.exponent() <= 12).collect();
    let (mut entries, mut rays, mut irrational) = (0, 0, 0);
    for g in &groups {
        let cone = ppd_cone_hrep_bounded(g, 16).map_err(|e| e.to_string())?;
        let cone = extremal_rays_bounded(&cone, 16).map_err(|e| format!("{g}: {e}"))?;
        let report = field_of_definition_check(&cone);
        ensure(report.failures == 0, || format!("{g}: {} uncertified entries", report.failures))?;
        ensure(report.entries.iter().all(|e| e.expansion.is_some()), || format!("{g}: missing expansion"))?;
        entries += report.entries.len();
        rays += cone.rays.as_ref().map_or(0, Vec::len);
        irrational += usize::from(!report.all_rational);
    }
    Ok(format!(
        "{} groups, {rays} rays, {entries} entries certified, {irrational} cones with irrational entries, 0 failures",
        groups.len()
    ))
}

fn criterion_8() -> Outcome {
    let q = GridQuadrature::new(8.0, 512).map_err(|e| e.to_string())?;
    let form = QuadraticFormSpd::identity(1);
    let closed = gaussian_fourier_closed_form(&form);
    let exact = |xi: &[f64]| closed.amplitude * closed.form.gaussian(xi);
    let points: Vec<Vec<f64>> = (-20..=20).map(|i| vec![i as f64 / 10.0]).collect();
    let f = |x: &[f64]| form.gaussian(x);
    let t = numeric_fourier(&f, 1, &q, &points, Some(&exact)).map_err(|e| e.to_string())?;
    let dev = t.max_deviation.unwrap();
    // closed form recomputed directly: exp(-π ξ²)
    let direct = points
        .iter()
        .zip(&t.values)
        .map(|(p, v)| (v[0] - (-PI * p[0] * p[0]).exp()).abs())
        .fold(0.0, f64::max);
    ensure(dev < 1e-8 && direct < 1e-8, || format!("transform deviation {dev:e}"))?;
    let a = QuadraticFormSpd::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).map_err(|e| e.to_string())?;
    let probe = gaussian_corestriction_check(&a, 1, &q).map_err(|e| e.to_string())?;
    let marginal = probe.marginal_form[0][0];
    ensure((marginal - 1.5).abs() < 1e-12, || format!("marginal form {marginal}"))?;
    ensure(probe.passed(1e-9), || format!("gap {:e}", probe.max_gap))?;
    Ok(format!(
        "transform deviation {dev:.1e}; marginal form {marginal}, route gap {:.1e}",
        probe.max_gap
    ))
}

fn criterion_9() -> Outcome {
    let q = GridQuadrature::default();
    let p = counterexample_probe(10, &q).map_err(|e| e.to_string())?;
    let h10: f64 = (1..=10).map(|n| 1.0 / n as f64).sum();
    let s10: f64 = (1..=10).map(|n| 1.0 / (n * n) as f64).sum();
    ensure((p.restricted_mass - h10).abs() < 1e-6, || format!("restricted mass {}", p.restricted_mass))?;
    ensure((p.total_mass - s10).abs() < 1e-6, || format!("total mass {}", p.total_mass))?;
    let ratios: Vec<f64> = [10, 30, 100]
        .iter()
        .map(|&n| counterexample_probe(n, &q).map(|p| p.ratio))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(ratios.windows(2).all(|w| w[1] > w[0]), || format!("ratios {ratios:?}"))?;
    Ok(format!(
        "restricted mass {:.10}, total mass {:.10}, ratios {:.4} < {:.4} < {:.4}",
        p.restricted_mass, p.total_mass, ratios[0], ratios[1], ratios[2]
    ))
}

fn criterion_10() -> Outcome {
    let mut duals = 0;
    for g in &groups_up_to(12) {
        for i in 0..50u64 {
            let f = normalized_good(g, 10_000_000 + (g.order() as u64) * 1000 + i);
            let once = normalized_dual(&f, true).map_err(|e| e.to_string())?;
            let twice = normalized_dual(&once, true).map_err(|e| e.to_string())?;
            ensure(twice.values() == f.values(), || format!("{g}: double dual differs"))?;
            duals += 1;
        }
    }
    let mut squares = 0;
    for g in &groups_up_to(12) {
        let subs: Vec<Subgroup> = all_subgroups(g, 12).map_err(|e| e.to_string())?;
        for (j, h) in subs.iter().enumerate() {
            for i in 0..5u64 {
                let f = normalized_good(g, 10_500_000 + (j as u64) * 100 + i);
                let r = duality_square(&f, h, 0.0).map_err(|e| format!("{g} {h:?}: {e}"))?;
                ensure(r.commutes, || format!("{g} {h:?}: square does not commute"))?;
                squares += 1;
            }
        }
    }
    let mut haar = 0;
    for g in &groups_up_to(12) {
        for (p, q) in [(1, 1), (1, 7), (3, 2), (5, 12)] {
            let m = HaarScale::new(g, Q::from_ratio(p, q)).map_err(|e| e.to_string())?;
            let d = dual_haar(&m);
            let expect = Q::from_ratio(q, p * g.order() as i64);
            ensure(d.scale() == &expect, || format!("{g}: dual scale {:?}", d.scale()))?;
            ensure(dual_haar(&d).scale() == m.scale(), || format!("{g}: dual_haar not an involution"))?;
            haar += 1;
        }
    }
    Ok(format!("{duals} double duals exact, {squares} duality squares commute, {haar} Haar scales involutive"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("bochner equivalence", criterion_1),
        ("maximum at identity and descent", criterion_2),
        ("corestriction routes agree", criterion_3),
        ("product closure", criterion_4),
        ("ppd times good", criterion_5),
        ("cone atlas", criterion_6),
        ("algebraicity", criterion_7),
        ("gaussian self-duality", criterion_8),
        ("counterexample masses", criterion_9),
        ("duality involutions", criterion_10),
    ];
    let only: Option<usize> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL {name} ({secs:.1}s): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
