use num_traits::{One, Zero};
use proptest::prelude::*;

use cubeseeker::bounds::{phi_lower, transform_pair, upper_bound_sigma, PairPoint};
use cubeseeker::explorer::{verify_js_candidate, Verdict};
use cubeseeker::objective::{check_condition, f_ratio};
use cubeseeker::optimizer::bound::slab_fraction_range;
use cubeseeker::optimizer::{box_upper_bound, hull_upper_bound, optimize_grid_aligned, ParamBox, RectGrid};
use cubeseeker::rational::{pow10_neg, rat};
use cubeseeker::{optimize_certified, ConditionMode, CoupleConfig, Cube, GridSet, GridSpec, QuadSurd, Rational};

fn couple(max_d: usize) -> impl Strategy<Value = CoupleConfig> {
    (1..=max_d)
        .prop_flat_map(|d| {
            let top = if d == 1 { 5u64 } else { 3 };
            (Just(d), 1..=top)
        })
        .prop_flat_map(|(d, m)| {
            let n = m.pow(d as u32) as usize;
            (Just(d), Just(m), prop::collection::vec(0u8..3, n))
        })
        .prop_filter_map("needs both sets", |(d, m, labels)| {
            CoupleConfig::from_labels(GridSpec::new(d, m).unwrap(), &labels).ok()
        })
}

/// A cube in `[0,1]^d` with all coordinates over one denominator.
fn cube(d: usize, max_q: i64) -> impl Strategy<Value = Cube> {
    (1..=max_q)
        .prop_flat_map(move |q| (Just(q), 1..=q))
        .prop_flat_map(move |(q, k)| (Just(q), Just(k), prop::collection::vec(0..=q - k, d)))
        .prop_map(|(q, k, c)| Cube::new(c.into_iter().map(|x| rat(x, q)).collect(), rat(k, q)).unwrap())
}

fn couple_and_cube(max_d: usize) -> impl Strategy<Value = (CoupleConfig, Cube)> {
    couple(max_d).prop_flat_map(|cfg| {
        let d = cfg.spec().d();
        (Just(cfg), cube(d, 24))
    })
}

fn positive(max: i64) -> impl Strategy<Value = Rational> {
    (1..=max, 1..=max).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn overlap_is_bounded_and_additive((cfg, w) in couple_and_cube(3)) {
        let p = cfg.f_plus().overlap_volume(&w).unwrap();
        let m = cfg.f_minus().overlap_volume(&w).unwrap();
        for (set, v) in [(cfg.f_plus(), &p), (cfg.f_minus(), &m)] {
            prop_assert!(*v >= Rational::zero());
            prop_assert!(*v <= set.volume() && *v <= w.volume());
        }
        let both = cfg.f_plus().union(cfg.f_minus()).unwrap();
        prop_assert_eq!(both.overlap_volume(&w).unwrap(), &p + &m);
    }

    #[test]
    fn overlap_matches_cell_counting(cfg in couple(2), k in 1u64..=3, seed in any::<u64>()) {
        // cubes aligned to the refined grid: overlap is a count of whole cells
        let spec = cfg.spec();
        let n = (spec.m() * k) as i64;
        let side = 1 + (seed % n as u64) as i64;
        let corner: Vec<i64> = (0..spec.d()).map(|j| ((seed >> (8 * (j + 1))) % (n - side + 1) as u64) as i64).collect();
        let w = Cube::new(corner.iter().map(|&c| rat(c, n)).collect(), rat(side, n)).unwrap();
        let fine = cfg.f_plus().refine(k).unwrap();
        let inside = fine
            .cells()
            .filter(|c| c.iter().zip(&corner).all(|(&x, &lo)| x as i64 >= lo && (x as i64) < lo + side))
            .count() as i64;
        let cell = rat(1, n.pow(spec.d() as u32));
        prop_assert_eq!(cfg.f_plus().overlap_volume(&w).unwrap(), rat(inside, 1) * cell);
    }

    #[test]
    fn refine_and_lift_keep_volume(cfg in couple(2), k in 1u64..=3) {
        let r = cfg.refine(k).unwrap();
        prop_assert_eq!(r.vol_plus(), cfg.vol_plus());
        prop_assert_eq!(r.vol_minus(), cfg.vol_minus());
        let l: GridSet = cfg.f_minus().lift().unwrap();
        prop_assert_eq!(l.volume(), cfg.f_minus().volume());
    }

    #[test]
    fn ratio_never_exceeds_half((cfg, w) in couple_and_cube(3)) {
        prop_assert!(f_ratio(&cfg, &w).unwrap() <= rat(1, 2));
    }

    #[test]
    fn condition_is_monotone(cfg in couple(2), t in positive(12), shrink in positive(12)) {
        if check_condition(&cfg, &t, ConditionMode::Strict) {
            prop_assert!(check_condition(&cfg, &t, ConditionMode::Weak));
            let smaller = &t / (Rational::one() + shrink);
            prop_assert!(check_condition(&cfg, &smaller, ConditionMode::Strict));
        }
    }

    #[test]
    fn ratio_survives_refine_and_lift((cfg, w) in couple_and_cube(2), k in 1u64..=3, t in 0i64..=24) {
        let f = f_ratio(&cfg, &w).unwrap();
        prop_assert_eq!(f_ratio(&cfg.refine(k).unwrap(), &w).unwrap(), f.clone());
        let room = Rational::one() - w.side();
        let t = room * rat(t, 24);
        let lifted = cubeseeker::explorer::lift_config(&cfg).unwrap();
        prop_assert_eq!(f_ratio(&lifted, &w.lift(&t).unwrap()).unwrap(), f);
    }

    #[test]
    fn phi_stays_below_upper(p in 1i64..=200, q in 1i64..=100, d in 1usize..=4) {
        let x = rat(p, q);
        let phi = phi_lower(&QuadSurd::from_rational(x.clone()), d).unwrap();
        prop_assert!(phi.cmp_rational(&upper_bound_sigma(&x).unwrap()).is_le());
        let bigger = phi_lower(&QuadSurd::from_rational(&x + rat(1, q)), d).unwrap();
        prop_assert!(phi <= bigger);
        let deeper = phi_lower(&QuadSurd::from_rational(x), d + 1).unwrap();
        prop_assert!(deeper <= phi);
    }

    #[test]
    fn transform_strictly_decreases(q in 3i64..=200, sp in 1i64..=100, tp in 1i64..=100, frac in 1i64..=99) {
        let s = rat(sp.min(q / 2), q);
        let tau = rat(tp, 20);
        let theta = &s / (Rational::one() - &s) * rat(frac, 100);
        let p = PairPoint::new(tau.clone(), s.clone()).unwrap();
        let out = transform_pair(&p, &theta).unwrap();
        prop_assert!(out.s < s && out.tau < tau);
    }

    #[test]
    fn slab_fraction_range_encloses_samples(
        a in 0i64..=12, len in 1i64..=12, q in 1i64..=24,
        u0 in 0i64..=24, du in 0i64..=12, s0 in 1i64..=24, ds in 0i64..=12,
        samples in prop::collection::vec((0i64..=16, 0i64..=16), 8)
    ) {
        // odd denominators on purpose: s/2 is then not on the input lattice
        let (a, b) = (rat(a, 12), rat(a + len, 12));
        let (u0, u1) = (rat(u0, q), rat(u0 + du, q));
        let (s0, s1) = (rat(s0, 2 * q + 1), rat(s0 + ds, 2 * q + 1));
        let (lo, hi) = slab_fraction_range(&a, &b, &u0, &u1, &s0, &s1);
        let corners = [(0, 0), (16, 0), (0, 16), (16, 16)];
        for (i, j) in samples.into_iter().chain(corners) {
            let u = &u0 + (&u1 - &u0) * rat(i, 16);
            let s = &s0 + (&s1 - &s0) * rat(j, 16);
            let half = &s / rat(2, 1);
            let l = (&u + &half).min(b.clone()) - (&u - &half).max(a.clone());
            let f = if l > Rational::zero() { l / &s } else { Rational::zero() };
            prop_assert!(lo <= f && f <= hi, "{} not in [{}, {}]", f, lo, hi);
        }
    }

    #[test]
    fn box_bounds_are_ordered(cfg in couple(2), cuts in prop::collection::vec((0i64..=8, 0i64..=8), 3)) {
        let grid = RectGrid::compress(&cfg);
        let d = cfg.spec().d();
        let mut b = ParamBox::root(d, &(grid.min_slab_width() / rat(2, 1)));
        for (p, (i, j)) in cuts.into_iter().enumerate() {
            let p = p % (d + 1);
            let at = |x: i64| {
                let (lo, hi) = if p == d { (b.side_lo.clone(), b.side_hi.clone()) } else { (b.center_lo[p].clone(), b.center_hi[p].clone()) };
                &lo + (&hi - &lo) * rat(x, 8)
            };
            let (x, y) = (at(i.min(j)), at(i.max(j)));
            if x < y {
                let (_, right) = b.split_at(p, &x);
                b = right.split_at(p, &y).0;
            }
        }
        prop_assume!(b.tighten());
        let ub = box_upper_bound(&grid, &b);
        prop_assert!(ub <= hull_upper_bound(&grid, &b));
        for k in 0..=4 {
            let t = rat(k, 4);
            let center: Vec<Rational> = (0..d).map(|j| &b.center_lo[j] + (&b.center_hi[j] - &b.center_lo[j]) * &t).collect();
            let side = &b.side_lo + (&b.side_hi - &b.side_lo) * &t;
            let half = &side / rat(2, 1);
            if center.iter().all(|c| c >= &half && c + &half <= Rational::one()) {
                prop_assert!(grid.ratio(&center, &side) <= ub);
            }
        }
    }

    #[test]
    fn rescale_keeps_fractions(cfg in couple(2), seed in any::<u64>(), num in 1i64..=8) {
        let grid = RectGrid::compress(&cfg);
        let d = cfg.spec().d();
        let target = grid.min_slab_width() / rat(2, 1);
        let side = &target * rat(num, 8);
        let center: Vec<Rational> = (0..d)
            .map(|j| {
                let t = rat(((seed >> (16 * j)) % 1000) as i64, 1000);
                &side / rat(2, 1) + (Rational::one() - &side) * t
            })
            .collect();
        let moved = grid.rescale(&center, &side, &target);
        prop_assert_eq!(grid.fractions(&moved, &target), grid.fractions(&center, &side));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certified_enclosure_is_sound(cfg in couple(2), cubes in prop::collection::vec(any::<u64>(), 1000)) {
        let v = optimize_certified(&cfg, &pow10_neg(3)).unwrap();
        prop_assert!(v.converged);
        prop_assert!(f_ratio(&cfg, &v.witness).unwrap() >= v.lo);
        let d = cfg.spec().d();
        for seed in cubes {
            let q = 1 + (seed % 60) as i64;
            let k = 1 + ((seed >> 8) % q as u64) as i64;
            let corner = (0..d).map(|j| rat(((seed >> (16 + 12 * j)) % (q - k + 1) as u64) as i64, q)).collect();
            let w = Cube::new(corner, rat(k, q)).unwrap();
            prop_assert!(f_ratio(&cfg, &w).unwrap() <= v.hi);
        }
    }

    #[test]
    fn grid_scan_grows_with_nested_subdivision(cfg in couple(2)) {
        let v = optimize_certified(&cfg, &pow10_neg(3)).unwrap();
        let mut prev = Rational::zero();
        for k in [1u64, 2, 4] {
            let (g, w) = optimize_grid_aligned(&cfg, k).unwrap();
            prop_assert!(g >= prev && g <= v.hi);
            prop_assert_eq!(f_ratio(&cfg, &w).unwrap(), g.clone());
            prev = g;
        }
    }

    #[test]
    fn refined_enclosures_overlap(cfg in couple(2)) {
        let a = optimize_certified(&cfg, &pow10_neg(4)).unwrap();
        let b = optimize_certified(&cfg.refine(2).unwrap(), &pow10_neg(4)).unwrap();
        prop_assert!(a.overlaps(&b));
    }

    #[test]
    fn refutation_is_monotone_in_s(cfg in couple(2), sp in 1i64..=50, bump in 1i64..=50) {
        let tau = rat(1, 4);
        let s = rat(sp, 100);
        let eps = pow10_neg(6);
        let first = verify_js_candidate(&tau, &s, &cfg, ConditionMode::Weak, &eps).unwrap();
        if first.verdict == Verdict::Refuted {
            let later = verify_js_candidate(&tau, &(s + rat(bump, 100)), &cfg, ConditionMode::Weak, &eps).unwrap();
            prop_assert_eq!(later.verdict, Verdict::Refuted);
        }
    }
}
