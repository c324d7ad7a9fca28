use ppdlab::constructions::{corestriction_consistency, diagonal, external_product, pointwise_product, restrict_values};
use ppdlab::fourier::{dft, inverse_transform, pullback, GroupFunction, ScaledMeasure};
use ppdlab::group::all_subgroups;
use ppdlab::ppd::{dual_measure, is_good, is_ppd, normalize_measure, stabilizer_subgroup};
use ppdlab::sample::sample_good;
use ppdlab::{Cyclotomic, FiniteAbelianGroup, Subgroup};

type Q = Cyclotomic;

fn g(m: &[usize]) -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(m.to_vec()).unwrap()
}

#[test]
fn point_mass_and_constant_are_dual() {
    for grp in [g(&[4]), g(&[3, 2]), g(&[2, 2, 2])] {
        let delta = GroupFunction::<Q>::delta(&grp, 0);
        assert!(dft(&delta).values().iter().all(|v| *v == Q::one()));
        let mu = ScaledMeasure::<Q>::point_mass(&grp, 0);
        assert!(inverse_transform(&mu).values().iter().all(|v| *v == Q::one()));
        let one = GroupFunction::constant(&grp, Q::one());
        assert!(is_ppd(&one).is_ppd);
        assert!(!is_good(&one).is_good);
    }
}

#[test]
fn normalized_measure_has_unit_inverse_at_zero() {
    let z6 = g(&[6]);
    let f = GroupFunction::<Q>::from_ints(&z6, &[6, 4, 3, 2, 3, 4]).unwrap();
    let mu = normalize_measure(&dual_measure(&f).unwrap()).unwrap();
    assert_eq!(inverse_transform(&mu).at_identity(), &Q::one());
}

#[test]
fn good_functions_have_trivial_stabilizer() {
    for grp in [g(&[5]), g(&[4, 2]), g(&[3, 3])] {
        for seed in 0..20 {
            let f = sample_good(&grp, seed);
            assert!(stabilizer_subgroup(&f).unwrap().is_trivial());
        }
    }
}

#[test]
fn identity_coset_is_one_on_both_routes() {
    let z4 = g(&[4]);
    let f = GroupFunction::<Q>::from_ints(&z4, &[4, 2, 1, 2]).unwrap().scale(&Q::from_ratio(1, 4));
    for h in all_subgroups(&z4, 4).unwrap() {
        let r = corestriction_consistency(&f, &h, 0.0).unwrap();
        assert_eq!(r.fourier_route.at_identity(), &Q::one());
        assert_eq!(r.average_route.at_identity(), &Q::one());
    }
}

#[test]
fn diagonal_restriction_of_external_product() {
    let grp = g(&[3, 2]);
    let u = GroupFunction::<Q>::from_ints(&grp, &[5, 1, 1, 2, 1, 1]).unwrap();
    let v = GroupFunction::<Q>::from_ints(&grp, &[3, 1, 1, 1, 0, 0]).unwrap();
    let w = external_product(&u, &v).unwrap();
    let back = pullback(&diagonal(&grp).unwrap(), &w).unwrap();
    assert_eq!(back, pointwise_product(&u, &v).unwrap());
}

#[test]
fn restriction_to_a_smaller_exponent_transforms() {
    // values from Q(ζ_10) restricted to the index two subgroup of Z10
    let z10 = g(&[10]);
    let f = sample_good(&z10, 3);
    let h = Subgroup::from_generators(&z10, &[z10.element(2)]).unwrap();
    let r = restrict_values(&f, &h).unwrap();
    assert_eq!(r.group().order(), 5);
    let fhat = dft(&r);
    assert!(fhat.values().iter().all(|v| v.real_sign().is_some()));
    assert!(is_good(&r).is_good);
}
