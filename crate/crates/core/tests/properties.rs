mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropmod::intersect::{stable_intersection, stable_intersection_detailed, transversal_intersection};
use tropmod::modify::{modify_curve_stable, pullback_with_frozen};
use tropmod::momentum::{momentum_2d, momentum_3d, momentum_general};
use tropmod::random;
use tropmod::scalar::int;
use tropmod::weil::{is_admissible, make_admissible, pushforward_image, weil_difference};
use tropmod::{curve_from_polynomial, TropError};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn univariate_roots_match_slope_jumps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random::random_univariate(&mut r, -3, 5, 5);
        let roots = f.univariate_roots().unwrap().roots;
        prop_assert_eq!(roots.clone(), common::roots_by_slope_jump(&f));
        let (lo, hi) = f.extreme_coefficients().unwrap();
        let sum: tropmod::Rational = roots.iter().map(|&(x, m)| x * int(m as i64)).sum();
        prop_assert_eq!(sum, lo - hi);
    }

    #[test]
    fn bezout(seed in any::<u64>(), d1 in 1i64..=3, d2 in 1i64..=3) {
        let mut r = rng(seed);
        let c1 = curve_from_polynomial(&random::random_triangle_polynomial(&mut r, d1, 0.5, false)).unwrap();
        let c2 = curve_from_polynomial(&random::random_triangle_polynomial(&mut r, d2, 0.5, false)).unwrap();
        let s = stable_intersection_detailed(&c1, &c2).unwrap();
        prop_assert_eq!(s.divisor.degree(), d1 * d2);
        prop_assert_eq!(s.escaping, 0);
    }

    #[test]
    fn stable_intersection_is_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random::random_degenerate_pair(&mut r, 3);
        prop_assert_eq!(stable_intersection(&p.first, &p.second).unwrap(), stable_intersection(&p.second, &p.first).unwrap());
    }

    #[test]
    fn stable_agrees_with_transversal_when_generic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c1 = random::random_plane_curve(&mut r, 3);
        let c2 = random::random_plane_curve(&mut r, 3);
        if let Ok(d) = transversal_intersection(&c1, &c2) {
            prop_assert_eq!(stable_intersection(&c1, &c2).unwrap(), d);
        }
    }

    #[test]
    fn stable_is_the_perturbation_limit(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random::random_degenerate_pair(&mut r, 3);
        let limit = common::perturbation_limit(&p.first, &p.second, [3, 11]).expect("some small perturbation is generic");
        let stable = common::divisor_map(&stable_intersection(&p.first, &p.second).unwrap());
        prop_assert_eq!(&stable, &limit);
        match p.kind {
            random::DegenerateKind::Horizontal(c) => {
                prop_assert_eq!(&stable, &common::horizontal_restriction_divisor(&p.polynomial, c));
            }
            random::DegenerateKind::Vertical(c) => {
                prop_assert_eq!(&stable, &common::vertical_restriction_divisor(&p.polynomial, c));
            }
            _ => {}
        }
    }

    #[test]
    fn restriction_to_horizontal_lines(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.gen_range(1..=3);
        let f = random::random_triangle_polynomial(&mut r, d, 0.6, false);
        let c = curve_from_polynomial(&f).unwrap();
        let y = c.vertices()[r.gen_range(0..c.vertices().len())][1];
        let line = curve_from_polynomial(
            &tropmod::TropicalPolynomial::from_terms(2, &[(&[0, 0], y), (&[0, 1], int(0))]).unwrap(),
        ).unwrap();
        prop_assert_eq!(
            common::divisor_map(&stable_intersection(&c, &line).unwrap()),
            common::horizontal_restriction_divisor(&f, y)
        );
    }

    #[test]
    fn modification_balances_and_projects(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random::random_plane_curve(&mut r, 3);
        let d = r.gen_range(1..=2);
        let f = random::random_triangle_polynomial(&mut r, d, 0.5, false);
        match modify_curve_stable(&c, &f) {
            Ok(m) => {
                prop_assert!(m.check_balancing().is_ok());
                prop_assert_eq!(m.projected_support(), c.support());
                prop_assert!(momentum_3d(&m, &random::random_point(&mut r, 3)).unwrap().is_zero());
            }
            Err(TropError::SelfModification) => {
                prop_assert!(common::lies_in_corner_locus(&c, &f));
                prop_assert_eq!(pullback_with_frozen(&c, &f), Err(TropError::SelfModification));
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn momentum_closure(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random::random_plane_curve(&mut r, 4);
        for _ in 0..2 {
            let a = random::random_point(&mut r, 2);
            let m = momentum_2d(&c, &a).unwrap();
            prop_assert!(m.is_zero());
            prop_assert_eq!(m.total[0], -common::leg_cross_total(&c, &a)[0]);
        }
        let img = random::random_t4_image(&mut r, 3).unwrap();
        for _ in 0..2 {
            let a = random::random_point(&mut r, 4);
            prop_assert!(momentum_general(&img, &a).unwrap().is_zero());
            prop_assert!(common::leg_cross_total(&img, &a).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn weil_reciprocity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random::random_triple(&mut r);
        let adm = make_admissible(&t.graph, &t.f, &t.g).unwrap();
        let tt = &adm.triple;
        prop_assert!(is_admissible(&tt.graph, &tt.f, &tt.g));
        prop_assert_eq!(weil_difference(&tt.graph, &tt.f, &tt.g).unwrap(), tropmod::Rational::zero());
        // Reciprocity already holds before legs are attached.
        prop_assert_eq!(
            weil_difference(&t.graph, &t.f, &t.g).unwrap(),
            tropmod::Rational::zero()
        );
        match pushforward_image(&tt.graph, &tt.f, &tt.g) {
            Ok(image) => {
                prop_assert!(image.check_balancing().is_ok());
                prop_assert!(momentum_2d(&image, &random::random_point(&mut r, 2)).unwrap().is_zero());
            }
            // The image of a constant pair is a single point.
            Err(TropError::EmptyCurve) => {
                prop_assert!(common::is_constant(&tt.graph, &tt.f) && common::is_constant(&tt.graph, &tt.g));
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
