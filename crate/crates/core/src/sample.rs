//! Seeded generators of functions that are PPD or good by construction.
//!
//! The main family synthesizes `f = Σ_a s(a) χ_a` from an even spectrum
//! dominated at the trivial character, `s(0) ≥ Σ_{a≠0} s(a)`, so that
//! `f ≥ s(0) - Σ s(a) ≥ 0` and `f̂ = |G| s ≥ 0`. The other family sums
//! positive multiples of subgroup indicators, whose transforms are
//! multiples of annihilator indicators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::fourier::{inverse_transform, GroupFunction, ScaledMeasure};
use crate::group::{FiniteAbelianGroup, GroupElement, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    Ppd,
    Good,
}

pub fn sample(group: &FiniteAbelianGroup, seed: u64, strictness: Strictness) -> GroupFunction<Cyclotomic> {
    match strictness {
        Strictness::Ppd => sample_ppd(group, seed),
        Strictness::Good => sample_good(group, seed),
    }
}

pub fn sample_ppd(group: &FiniteAbelianGroup, seed: u64) -> GroupFunction<Cyclotomic> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ppd_from(group, &mut rng)
}

pub fn sample_good(group: &FiniteAbelianGroup, seed: u64) -> GroupFunction<Cyclotomic> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dual = group.dual();
    let spectrum = dominated_spectrum(&dual, &Subgroup::whole(&dual), &mut rng, 1);
    let base = synthesize(&dual, spectrum);
    if rng.gen_bool(0.5) {
        base.add(&ppd_from(group, &mut rng)).expect("same group")
    } else {
        base
    }
}

/// Random even integer-valued function with values in `lo..=hi`.
pub fn random_even_integers(group: &FiniteAbelianGroup, seed: u64, lo: i64, hi: i64) -> GroupFunction<Cyclotomic> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![Cyclotomic::zero(); group.order()];
    for orbit in group.inverse_orbits() {
        let v = Cyclotomic::from_int(rng.gen_range(lo..=hi));
        for x in orbit {
            values[x] = v.clone();
        }
    }
    GroupFunction::new(group, values).expect("length matches")
}

/// Subgroup generated by up to `max_gens` uniformly random elements.
pub fn random_subgroup(group: &FiniteAbelianGroup, rng: &mut impl Rng, max_gens: usize) -> Subgroup {
    let k = rng.gen_range(0..=max_gens);
    let gens: Vec<GroupElement> = (0..k)
        .map(|_| group.element(rng.gen_range(0..group.order())))
        .collect();
    Subgroup::from_generators(group, &gens).expect("elements of the group")
}

fn ppd_from(group: &FiniteAbelianGroup, rng: &mut ChaCha8Rng) -> GroupFunction<Cyclotomic> {
    if rng.gen_bool(0.5) {
        let dual = group.dual();
        let support = random_subgroup(group, rng, 2).annihilator();
        let spectrum = dominated_spectrum(&dual, &support, rng, 0);
        synthesize(&dual, spectrum)
    } else {
        indicator_combination(group, rng)
    }
}

/// Even spectrum on `support`, zero elsewhere, with `s(0) = Σ_{a≠0} s(a) + t`
/// and `t ≥ min_slack`. With `min_slack ≥ 1` every entry is positive.
fn dominated_spectrum(
    dual: &FiniteAbelianGroup,
    support: &Subgroup,
    rng: &mut ChaCha8Rng,
    min_slack: i64,
) -> Vec<Cyclotomic> {
    let mut s = vec![0i64; dual.order()];
    let strict = min_slack > 0;
    let mut rest = 0;
    for orbit in dual.inverse_orbits() {
        if orbit[0] == 0 || !support.contains(orbit[0]) {
            continue;
        }
        let v = if strict {
            rng.gen_range(1..=4)
        } else if rng.gen_bool(1.0 / 3.0) {
            0
        } else {
            rng.gen_range(1..=3)
        };
        for &a in &orbit {
            s[a] = v;
            rest += v;
        }
    }
    let mut slack = rng.gen_range(min_slack..=min_slack + 2);
    if rest == 0 && slack == 0 {
        slack = 1;
    }
    s[0] = rest + slack;
    s.into_iter().map(Cyclotomic::from_int).collect()
}

fn synthesize(dual: &FiniteAbelianGroup, spectrum: Vec<Cyclotomic>) -> GroupFunction<Cyclotomic> {
    let mu = ScaledMeasure::from_masses(dual, spectrum).expect("length matches");
    inverse_transform(&mu)
}

fn indicator_combination(group: &FiniteAbelianGroup, rng: &mut ChaCha8Rng) -> GroupFunction<Cyclotomic> {
    let mut values = vec![0i64; group.order()];
    for _ in 0..rng.gen_range(1..=3) {
        let h = random_subgroup(group, rng, 2);
        let c = rng.gen_range(1..=3);
        for &x in h.elements() {
            values[x] += c;
        }
    }
    GroupFunction::from_ints(group, &values).expect("length matches")
}
