use proptest::prelude::*;

use lorenz_renorm::conjugacy::{conjugate_with, entropy_beta, kneading, ConjugacyOptions};
use lorenz_renorm::map::{LorenzMap, Membership, OneSidedPoint, Side, Symbol};
use lorenz_renorm::periodic::{admissible_points, minimal_period, minimal_periodic_orbit, Kappa};
use lorenz_renorm::renorm::{cascade, check_periodic_renormalizable, in_l2, reduce, renormalize, PeriodicVerdict};
use lorenz_renorm::scalar::{q, Exact, Scalar};

/// Valid maps on `[0, 1]` with parameters on the grid `k / 1000`.
fn unit_map() -> impl Strategy<Value = LorenzMap<Exact>> {
    (1i64..1000, 1i64..=1000, 1i64..=1000).prop_filter_map("not a self-map", |(c, sa, sb)| {
        let c = q(c, 1000);
        let one = Exact::one();
        // scale the slope draws onto (0, 1/c] and (0, 1/(1 - c)]
        let a = q(sa, 1000) / c.clone();
        let b = q(sb, 1000) / (one - c.clone());
        LorenzMap::new(a, b, c).ok()
    })
}

fn map_in_l() -> impl Strategy<Value = LorenzMap<Exact>> {
    unit_map().prop_filter("not in L", |f| f.classify_membership().in_l())
}

fn unit_point() -> impl Strategy<Value = Exact> {
    (0i64..=1 << 16).prop_map(|k| q(k, 1 << 16))
}

fn ordered_pair() -> impl Strategy<Value = (Exact, Exact)> {
    (unit_point(), unit_point()).prop_map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn preimages_contain_the_point(f in unit_map(), x in unit_point()) {
        prop_assume!(x != *f.c());
        let y = f.apply(&x).unwrap();
        prop_assert!(f.branch_preimages(&y).iter().any(|p| p.x == x));
    }

    #[test]
    fn image_length_is_slope_times_length(f in unit_map(), (u, v) in ordered_pair()) {
        prop_assume!(u < v);
        let c = f.c().clone();
        let left = Exact::max_of(Exact::min_of(v.clone(), c.clone()) - u.clone(), Exact::zero());
        let right = Exact::max_of(v.clone() - Exact::max_of(u.clone(), c.clone()), Exact::zero());
        let expected = f.a().clone() * left + f.b().clone() * right;
        let got = if u < c && c < v {
            f.interval_image(&u, &c).image.total_length() + f.interval_image(&c, &v).image.total_length()
        } else {
            f.interval_image(&u, &v).image.total_length()
        };
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn expanding_on_average_iff_f0_below_f1(f in unit_map()) {
        let f0 = f.eval(&OneSidedPoint::exact(Exact::zero())).unwrap();
        let f1 = f.eval(&OneSidedPoint::exact(Exact::one())).unwrap();
        prop_assert_eq!(f.classify_membership().in_l(), f0 < f1);
        if f.classify_membership() == Membership::L2 {
            prop_assert!(f0 < *f.c() && *f.c() < f1);
        }
    }

    #[test]
    fn rescaling_keeps_slopes(f in map_in_l(), t in 1i64..1000) {
        let (g, _) = f.rescale_to_unit();
        prop_assert_eq!(&g, &f);
        // a map on a subinterval comes back with the same slopes
        let lo = q(t, 1000) - Exact::one();
        let h = LorenzMap::on_domain(f.a().clone(), f.b().clone(), f.c().clone() + lo.clone(), lo.clone(), lo + Exact::one()).unwrap();
        let (k, _) = h.rescale_to_unit();
        prop_assert_eq!(k.a(), f.a());
        prop_assert_eq!(k.b(), f.b());
        prop_assert_eq!(k.c(), f.c());
        prop_assert_eq!(k.rescale_to_unit().0, k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multipliers_are_derivative_products(f in map_in_l(), n in 1usize..=6) {
        for p in admissible_points(&f, n) {
            let mut x = p.x.clone();
            let mut product = Exact::one();
            for s in p.itinerary.symbols() {
                let side = if *s == Symbol::L { Side::Minus } else { Side::Plus };
                product *= f.slope(*s).clone();
                x = f.eval(&OneSidedPoint { x, side }).unwrap();
            }
            prop_assert_eq!(&x, &p.x);
            prop_assert_eq!(product, p.multiplier);
        }
    }

    #[test]
    fn the_minimal_cycle_is_unique(f in map_in_l()) {
        if let Kappa::Finite(k) = minimal_period(&f, 12).unwrap().kappa {
            if k >= 2 {
                let orbit = minimal_periodic_orbit(&f, k).unwrap();
                prop_assert_eq!(orbit.points.len(), k);
                for j in 1..k {
                    prop_assert!(admissible_points(&f, j).iter().all(|p| p.period != j));
                }
            }
        }
    }

    #[test]
    fn trivial_steps_lower_the_period(f in map_in_l()) {
        if let Ok((_, chain)) = reduce(&f) {
            for s in chain {
                let before = minimal_period(&s.before, 64).unwrap().kappa.finite().unwrap();
                let after = minimal_period(&s.after, 64).unwrap().kappa.finite().unwrap();
                prop_assert!(after < before);
            }
        }
    }

    #[test]
    fn periodic_steps_have_equal_multipliers(f in map_in_l()) {
        let Ok((g, _)) = reduce(&f) else { return Ok(()) };
        if in_l2(&g) && check_periodic_renormalizable(&g).unwrap().verdict == PeriodicVerdict::RenormalizablePeriodic {
            let step = renormalize(&g).unwrap();
            let ab = g.a().clone() * g.b().clone();
            prop_assert_eq!(step.after.a(), &ab);
            prop_assert_eq!(step.after.b(), &ab);
            let m = ab - Exact::one();
            prop_assert!(m.clone() * m <= Exact::one());
        }
    }

    #[test]
    fn symmetric_slopes_square(k in 1i64..=950) {
        let a = q(1000 + k, 1000);
        let rep = cascade(&LorenzMap::new(a.clone(), a.clone(), q(1, 2)).unwrap()).unwrap();
        let mut slope = a;
        for step in rep.periodic_steps() {
            slope = slope.clone() * slope;
            prop_assert_eq!(step.after.a(), &slope);
            prop_assert_eq!(step.after.b(), &slope);
        }
    }

    #[test]
    fn slope_estimate_stays_in_range(f in map_in_l()) {
        if let Ok(e) = entropy_beta(&f, 20, 1e-12) {
            prop_assert!(e.beta > 1.0 && e.beta <= 2.0, "{}", e.beta);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn conjugate_kneading_matches(f in map_in_l()) {
        let opts = ConjugacyOptions { lap_depth: 60, ..ConjugacyOptions::default() };
        if let Ok(p) = conjugate_with(&f, &opts) {
            let n = p.certificate.kneading_match_length;
            let t = p.realization().unwrap();
            let (kt, kf) = (kneading(&t, n), kneading(&f, n));
            let m = n.min(kt.length).min(kf.length);
            prop_assert_eq!(kt.k_plus.common_prefix(&kf.k_plus).min(m), m);
            prop_assert_eq!(kt.k_minus.common_prefix(&kf.k_minus).min(m), m);
        }
    }
}
