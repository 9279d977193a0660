use gibbsfield::conditional::gaf_cond_logdensity;
use gibbsfield::ensembles::split_points;
use gibbsfield::manifold::{complete_configuration, Ball, Completion, Event};
use gibbsfield::numerics::{
    canonical_order, elem_sym_all, log_cross_vandermonde, log_vandermonde, newton_e_from_p, power_sums,
};
use gibbsfield::rigidity::{build_partition, smooth_step, FirstShell};
use gibbsfield::Complex64;
use proptest::prelude::*;

fn point(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(move |(u, t)| Complex64::from_polar(r * u.sqrt(), t))
}

fn points(r: f64, lo: usize, hi: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(point(r), lo..=hi)
}

fn brute_force_e(pts: &[Complex64]) -> Vec<Complex64> {
    let m = pts.len();
    let mut e = vec![Complex64::new(0.0, 0.0); m + 1];
    for mask in 0u32..(1 << m) {
        let mut prod = Complex64::new(1.0, 0.0);
        for (i, p) in pts.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod *= p;
            }
        }
        e[mask.count_ones() as usize] += prod;
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn newton_roundtrip(pts in points(1.5, 1, 12)) {
        let m = pts.len();
        let e = elem_sym_all(&pts);
        let back = newton_e_from_p(&power_sums(&pts, m));
        let scale = e[1..].iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        for k in 1..=m {
            prop_assert!((back[k - 1] - e[k]).norm() / scale < 1e-10);
        }
    }

    #[test]
    fn elem_sym_matches_brute_force(pts in points(2.0, 0, 8)) {
        let e = elem_sym_all(&pts);
        let b = brute_force_e(&pts);
        let scale = b.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for (x, y) in e.iter().zip(&b) {
            prop_assert!((x - y).norm() / scale < 1e-13);
        }
    }

    #[test]
    fn vandermonde_splits(a in points(1.0, 1, 10), b in points(3.0, 1, 10)) {
        let all: Vec<Complex64> = a.iter().chain(&b).copied().collect();
        let whole = log_vandermonde(&all).ln();
        let parts = log_vandermonde(&a).ln() + log_vandermonde(&b).ln() + log_cross_vandermonde(&a, &b).ln();
        prop_assert!((whole - parts).abs() <= 1e-12 * whole.abs().max(1.0));
    }

    #[test]
    fn conditional_density_is_permutation_invariant(
        inside in points(1.0, 1, 5),
        outside in prop::collection::vec((1.2..4.0f64, 0.0..6.28f64), 1..20),
        rot in 0usize..5,
    ) {
        let om: Vec<Complex64> = outside.iter().map(|&(r, t)| Complex64::from_polar(r, t)).collect();
        let all: Vec<Complex64> = inside.iter().chain(&om).copied().collect();
        let split = split_points(&all, 1.0).unwrap();
        let mut rotated = split.inside.clone();
        let k = rot % rotated.len();
        rotated.rotate_left(k);
        let a = gaf_cond_logdensity(&split, 1.0);
        let b = gaf_cond_logdensity(&split.with_inside(rotated), 1.0);
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn canonical_order_is_a_sorted_permutation(pts in points(2.0, 0, 12)) {
        let c = canonical_order(&pts);
        let mut rev = pts.clone();
        rev.reverse();
        prop_assert_eq!(&c, &canonical_order(&rev));
        prop_assert_eq!(c.len(), pts.len());
    }

    #[test]
    fn completion_hits_the_moments(target in points(0.8, 3, 6), k in 1usize..3) {
        let s = power_sums(&target, k);
        let free = &target[..target.len() - k];
        match complete_configuration(free, &s, 1.0).unwrap() {
            Completion::Accepted(c) => {
                let all: Vec<Complex64> = free.iter().chain(&c).copied().collect();
                for (x, y) in power_sums(&all, k).iter().zip(&s) {
                    prop_assert!((x - y).norm() < 1e-9);
                }
                prop_assert!(c.iter().all(|z| z.norm() < 1.0));
            }
            Completion::OutsideDisk => prop_assert!(false, "completion of a disk configuration left the disk"),
            Completion::Inaccurate(e) => prop_assert!(e > 1e-9),
        }
    }

    #[test]
    fn smooth_step_is_antisymmetric(x in 0.0..1.0f64, k in 0.1..5.0f64) {
        prop_assert!((smooth_step(x, k) + smooth_step(1.0 - x, k) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn partition_sums_to_one(u in 0.0..1.0f64, shells in 1usize..8, k in 0.2..4.0f64, tilde: bool) {
        let first = if tilde { FirstShell::PhiTilde } else { FirstShell::Phi };
        let pou = build_partition(1.3, shells, k).with_first_shell(first);
        let (a, b) = pou.asserted_range();
        let r = a + (b - a) * u;
        prop_assert!((pou.total(r) - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn product_events_ignore_ball_order(pts in points(1.0, 3, 3), perm in 0usize..6) {
        let balls = [
            Ball::new(Complex64::new(0.0, 0.0), 0.3),
            Ball::new(Complex64::new(0.6, 0.0), 0.3),
            Ball::new(Complex64::new(-0.3, 0.52), 0.3),
        ];
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let p: Vec<Ball> = orders[perm].iter().map(|&i| balls[i]).collect();
        prop_assert_eq!(Event::Product(balls.to_vec()).contains(&pts), Event::Product(p).contains(&pts));
    }
}
