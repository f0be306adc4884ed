use std::sync::Arc;

use coarse_lip_core::lattice::sup_dist_values;
use coarse_lip_core::ml::{check_ml_defect, lambda_exchange_defect, lift, MlOracle, SampleConfig};
use coarse_lip_core::rough::{defect, MapPair};
use coarse_lip_core::sample::{self, lip_pool, random_instance, random_lipfn, random_radius, random_space, rng, DYADIC};
use coarse_lip_core::scaling::{lipschitzized_scaling, rescale_lipfn};
use coarse_lip_core::*;
use proptest::prelude::*;
use rand::Rng;

fn space(seed: u64, max_points: usize) -> Space {
    Arc::new(random_space(&mut rng(seed), max_points))
}

fn ext(v: f64) -> ExtReal {
    ExtReal::from_f64(v).unwrap()
}

fn ext_strategy() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        1 => Just(ExtReal::INF),
        6 => (0u32..64).prop_map(|k| ext(k as f64 / 4.0)),
    ]
}

proptest! {
    #[test]
    fn ext_dist_is_a_metric(a in ext_strategy(), b in ext_strategy(), c in ext_strategy()) {
        prop_assert_eq!(a.dist(a), ExtReal::ZERO);
        prop_assert_eq!(a.dist(b), b.dist(a));
        prop_assert!(a.dist(c) <= a.dist(b) + b.dist(c));
        if a.dist(b) == ExtReal::ZERO {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn monus_is_truncated_difference(a in ext_strategy(), b in ext_strategy()) {
        let m = a.monus(b);
        prop_assert!(m <= a);
        prop_assert!(m + b >= a);
        prop_assert!(m <= a.dist(b));
    }

    #[test]
    fn closed_lambda_distance_matches_realization(seed in any::<u64>()) {
        let s = space(seed, 10);
        let mut r = rng(seed ^ 1);
        let scale = s.max_finite_distance() + 2.0;
        for _ in 0..8 {
            let (x, y) = (r.random_range(0..s.len()), r.random_range(0..s.len()));
            let pick = |r: &mut sample::SeededRng| if r.random_bool(0.2) { ExtReal::INF } else { random_radius(r, scale) };
            let (a, b) = (pick(&mut r), pick(&mut r));
            let brute = sup_dist(&lambda_realize(&s, x, a).unwrap(), &lambda_realize(&s, y, b).unwrap()).unwrap();
            prop_assert_eq!(lambda_dist_closed(&s, x, a, y, b).unwrap(), brute);
        }
    }

    #[test]
    fn decomposition_rebuilds(seed in any::<u64>()) {
        let s = space(seed, 10);
        let f = random_lipfn(&mut rng(seed ^ 2), &s);
        prop_assert_eq!(join_cones(&s, &lambda_decompose(&f)).unwrap(), f);
    }

    #[test]
    fn lipschitzise_contract(seed in any::<u64>(), eps_units in 0u32..16) {
        let s = space(seed, 10);
        let mut r = rng(seed ^ 3);
        let eps = eps_units as f64 / DYADIC;
        let f = random_lipfn(&mut r, &s);
        let g: Vec<ExtReal> = f
            .values()
            .iter()
            .map(|&v| v + ext(r.random_range(0..=eps_units) as f64 / DYADIC))
            .collect();
        let out = lipschitzise(&s, &g, eps).unwrap();
        prop_assert!(is_k_eps_lipschitz(&s, out.values(), 1.0, 0.0));
        prop_assert!(g.iter().zip(out.values()).all(|(a, b)| a <= b));
        prop_assert!(sup_dist_values(&g, out.values()).le_tol(ext(eps), TOL));
    }

    #[test]
    fn lattice_operations_contract(seed in any::<u64>(), k in 0usize..6) {
        let s = space(seed, 8);
        let mut r = rng(seed ^ 4);
        let pool = lip_pool(&mut r, &s, 8);
        let fs: Vec<LipFn> = (0..k).map(|_| pool[r.random_range(0..pool.len())].clone()).collect();
        let gs: Vec<LipFn> = (0..k).map(|_| pool[r.random_range(0..pool.len())].clone()).collect();
        let worst = fs.iter().zip(&gs).map(|(f, g)| sup_dist(f, g).unwrap()).max().unwrap_or(ExtReal::ZERO);
        prop_assert!(sup_dist(&join(&s, &fs).unwrap(), &join(&s, &gs).unwrap()).unwrap() <= worst);
        prop_assert!(sup_dist(&meet(&s, &fs).unwrap(), &meet(&s, &gs).unwrap()).unwrap() <= worst);
    }

    #[test]
    fn nearest_lambda_beats_sampled_cones(seed in any::<u64>()) {
        let s = space(seed, 6);
        let mut r = rng(seed ^ 5);
        let g = random_lipfn(&mut r, &s);
        let best = nearest_lambda(&g);
        prop_assert_eq!(sup_dist(&lambda_realize(&s, best.center, best.radius).unwrap(), &g).unwrap(), best.distance);
        let scale = s.max_finite_distance() + 4.0;
        for y in 0..s.len() {
            for k in 0..=(scale * DYADIC) as u32 {
                let d = sup_dist(&lambda_realize(&s, y, ext(k as f64 / DYADIC)).unwrap(), &g).unwrap();
                prop_assert!(best.distance.le_tol(d, TOL));
            }
            let d = sup_dist(&lambda_realize(&s, y, ExtReal::INF).unwrap(), &g).unwrap();
            prop_assert!(best.distance.le_tol(d, TOL));
        }
    }

    #[test]
    fn cones_embed_the_cutoff(seed in any::<u64>(), r_units in 1u32..40) {
        let s = space(seed, 8);
        let radius = r_units as f64 / DYADIC;
        let cut = s.cutoff(ext(radius)).unwrap();
        for x in 0..s.len() {
            for y in 0..s.len() {
                let d = sup_dist(&lambda_realize(&s, x, ext(radius)).unwrap(), &lambda_realize(&s, y, ext(radius)).unwrap()).unwrap();
                prop_assert_eq!(d, cut.d(x, y));
            }
        }
    }

    #[test]
    fn alpha_outputs_are_lipschitz(seed in any::<u64>(), ell_units in 0u32..32) {
        let s = space(seed, 8);
        let f = random_lipfn(&mut rng(seed ^ 6), &s);
        let out = lipschitzized_scaling(&f, ell_units as f64 / 4.0).unwrap();
        prop_assert!(is_k_eps_lipschitz(&s, out.values(), 1.0, 0.0));
    }

    #[test]
    fn rescaling_is_a_dilation(seed in any::<u64>(), ell_units in 1u32..32) {
        let s = space(seed, 8);
        let mut r = rng(seed ^ 7);
        let ell = ell_units as f64 / 4.0;
        let (f, g) = (random_lipfn(&mut r, &s), random_lipfn(&mut r, &s));
        let (fs, gs) = (rescale_lipfn(&f, ell).unwrap(), rescale_lipfn(&g, ell).unwrap());
        prop_assert_eq!(sup_dist(&fs, &gs).unwrap(), sup_dist(&f, &g).unwrap().scale(ell).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lifted_pairs_stay_within_four_epsilon(seed in any::<u64>()) {
        let inst = random_instance(&mut rng(seed), 6);
        let (x, y) = (Arc::new(inst.x), Arc::new(inst.y));
        let oracle = lift(inst.pair.clone(), x.clone(), y.clone()).unwrap();
        let cfg = SampleConfig { seed, samples: 16, families_per_size: 8 };
        let report = check_ml_defect(&oracle, &cfg);
        prop_assert!(report.max_defect().le_tol(ext(oracle.epsilon()), TOL), "{report:?}");
        let eps = oracle.pair_defect().overall;
        for f in lip_pool(&mut rng(seed ^ 8), &y, 4) {
            prop_assert!(lambda_exchange_defect(&inst.pair, &x, &y, &f).unwrap().le_tol(eps, TOL));
        }
    }

    #[test]
    fn rough_distance_is_symmetric_and_scales(seed in any::<u64>(), ell_units in 1u32..8) {
        let mut r = rng(seed);
        let (x, y) = (random_space(&mut r, 3), random_space(&mut r, 3));
        let (d, pair) = rough_distance_exact(&x, &y, 5).unwrap();
        prop_assert_eq!(defect(&pair, &x, &y).unwrap().overall, d);
        prop_assert_eq!(rough_distance_exact(&y, &x, 5).unwrap().0, d);
        let ell = ell_units as f64 / 2.0;
        let scaled = rough_distance_exact(&x.scale(ell).unwrap(), &y.scale(ell).unwrap(), 5).unwrap().0;
        prop_assert!(scaled.approx_eq(d.scale(ell).unwrap(), TOL));
    }

    #[test]
    fn identity_pair_has_zero_defect(seed in any::<u64>()) {
        let s = space(seed, 8);
        prop_assert_eq!(defect(&MapPair::identity(s.len()), &s, &s).unwrap().overall, ExtReal::ZERO);
    }
}
