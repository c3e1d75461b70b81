use ndde_core::problem::Interval;
use ndde_core::spectrum::{
    analytic_region, char_h, classify, count_roots_rectangle, find_roots, omega_asymptotic, quadrant3_expansion,
    Branch, Region,
};
use ndde_core::{Complex, LinearCoefficients, Neutral};
use proptest::prelude::*;
use std::f64::consts::PI;

fn k(a: f64, b: f64, c: Neutral) -> LinearCoefficients {
    LinearCoefficients::new(a, b, c)
}

fn residual_ok(z: Complex, r: f64) -> bool {
    r <= 1e-10 * (1.0 + z.norm())
}

#[test]
fn undamped_plus_spectrum_is_zero_and_odd_multiples_of_pi() {
    let set = find_roots(&k(0.0, 0.0, Neutral::Plus), 20).unwrap();
    assert!(set.is_complete());
    let zero: Vec<_> = set.roots.iter().filter(|r| r.branch == Branch::Zero).collect();
    assert_eq!(zero.len(), 1);
    assert_eq!(zero[0].multiplicity, 1);
    let others: Vec<_> = set.roots.iter().filter(|r| r.branch != Branch::Zero).collect();
    // Branches n = -21..=20 give (2n+1)π for |2n+1| <= 41.
    assert_eq!(others.len(), 42);
    for r in others {
        assert!(residual_ok(r.lambda, r.residual));
        assert_eq!(r.multiplicity, 1);
        assert!(r.lambda.re.abs() < 1e-12);
        let odd = r.lambda.im / PI;
        assert!((odd - odd.round()).abs() < 1e-12 && (odd.round() as i64).rem_euclid(2) == 1);
    }
}

#[test]
fn diagonal_plus_spectrum_adds_minus_a() {
    let set = find_roots(&k(2.0, 2.0, Neutral::Plus), 20).unwrap();
    assert!(set.is_complete());
    let real: Vec<_> = set.roots.iter().filter(|r| r.lambda.im == 0.0).collect();
    assert_eq!(real.len(), 1);
    assert!((real[0].lambda.re + 2.0).abs() < 1e-12);
}

#[test]
fn undamped_minus_spectrum_has_double_zero() {
    let set = find_roots(&k(0.0, 0.0, Neutral::Minus), 20).unwrap();
    assert!(set.is_complete());
    let zero = set.roots.iter().find(|r| r.branch == Branch::Zero).unwrap();
    assert_eq!(zero.multiplicity, 2);
    for r in set.roots.iter().filter(|r| r.branch != Branch::Zero) {
        let even = r.lambda.im / PI;
        assert!((even - even.round()).abs() < 1e-12 && (even.round() as i64).rem_euclid(2) == 0);
        assert_eq!(r.multiplicity, 1);
    }
}

#[test]
fn special_point_has_a_triple_zero_root() {
    // h(λ) = λ³/6 + O(λ⁴) at (a, b) = (-2, 2), c = +1.
    let set = find_roots(&k(-2.0, 2.0, Neutral::Plus), 10).unwrap();
    assert!(set.is_complete());
    let zero = set.roots.iter().find(|r| r.branch == Branch::Zero).unwrap();
    assert_eq!(zero.multiplicity, 3);
    let v = classify(&k(-2.0, 2.0, Neutral::Plus), 10).unwrap();
    assert_eq!(v.region, Region::DoubleRootEdgeCase);
}

#[test]
fn rectangle_count_matches_root_list() {
    let kk = k(2.0, 1.0, Neutral::Plus);
    let set = find_roots(&kk, 12).unwrap();
    let re = Interval::new(-10.0, 1.0).unwrap();
    let im = Interval::new(-10.0 * PI, 10.0 * PI).unwrap();
    let counted = count_roots_rectangle(&kk, re, im).unwrap();
    let listed: u64 = set
        .roots
        .iter()
        .filter(|r| re.contains(r.lambda.re) && im.contains(r.lambda.im))
        .map(|r| r.multiplicity as u64)
        .sum();
    assert_eq!(counted, listed);
    let right = count_roots_rectangle(&kk, Interval::new(1.0, 5.0).unwrap(), im).unwrap();
    assert_eq!(right, 0);
}

#[test]
fn stable_quadrant_never_vanishes_on_axis() {
    // h(iy) = e^{iy}(iy + 2) + (iy + 1), so |h(iy)| >= |iy + 2| - |iy + 1| > 0.
    let kk = k(2.0, 1.0, Neutral::Plus);
    for i in 0..=20000 {
        let y = i as f64 * 0.01;
        let lower = Complex::new(2.0, y).norm() - Complex::new(1.0, y).norm();
        assert!(char_h(Complex::new(0.0, y), &kk).norm() >= lower * (1.0 - 1e-9), "y = {y}");
    }
}

#[test]
fn sample_classifications() {
    assert_eq!(classify(&k(2.0, 1.0, Neutral::Plus), 8).unwrap().region, Region::QuadrantStable);
    assert_eq!(classify(&k(1.0, 2.0, Neutral::Plus), 8).unwrap().region, Region::QuadrantOneStableRoot);
    let v = classify(&k(2.0, 1.0, Neutral::Plus), 8).unwrap();
    assert!(v.roots.roots.iter().all(|r| r.lambda.re < 0.0));
}

#[test]
fn full_sweep_has_no_mismatch() {
    for c in [Neutral::Plus, Neutral::Minus] {
        for i in 0..25 {
            for j in 0..25 {
                let a = -3.0 + 0.25 * i as f64;
                let b = -3.0 + 0.25 * j as f64;
                let kk = k(a, b, c);
                match classify(&kk, 8) {
                    Ok(v) => assert_eq!(v.region, analytic_region(&kk)),
                    Err(e) => panic!("({a}, {b}, {c:?}): {e}"),
                }
            }
        }
    }
}

#[test]
fn expansion_gap_scales_cubically() {
    let m = PI;
    let mut gaps = Vec::new();
    for b in [0.05, 0.1, 0.2] {
        let set = find_roots(&k(0.0, b, Neutral::Plus), 4).unwrap();
        let root = set
            .roots
            .iter()
            .min_by(|p, q| (p.lambda - Complex::new(0.0, m)).norm().total_cmp(&(q.lambda - Complex::new(0.0, m)).norm()))
            .unwrap();
        assert!(root.lambda.re > 0.0);
        gaps.push((b, (root.lambda - quadrant3_expansion(b, m)).norm()));
    }
    let slope = ((gaps[2].1).ln() - (gaps[0].1).ln()) / (gaps[2].0.ln() - gaps[0].0.ln());
    assert!((2.7..=3.3).contains(&slope), "fitted exponent {slope}");
}

#[test]
fn branch_roots_approach_asymptotes() {
    let kk = k(1.5, -0.5, Neutral::Minus);
    let set = find_roots(&kk, 64).unwrap();
    let mut prev = f64::INFINITY;
    for n in 8..=64 {
        let om = omega_asymptotic(n, kk.c);
        let r = set.roots.iter().find(|r| r.branch == Branch::Index(n)).unwrap();
        let gap = (r.lambda - Complex::new(0.0, om)).norm();
        assert!(gap * n as f64 <= 1.0, "n = {n}");
        assert!(gap < prev);
        prev = gap;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn roots_respect_the_reflection_symmetry(a in -3.0f64..3.0, b in -3.0f64..3.0, plus in any::<bool>()) {
        let c = if plus { Neutral::Plus } else { Neutral::Minus };
        let kk = k(a, b, c);
        let mirror = k(-c.value() * b, -c.value() * a, c);
        let set = find_roots(&kk, 10).unwrap();
        prop_assert!(set.is_complete());
        for r in &set.roots {
            prop_assert!(residual_ok(r.lambda, r.residual));
            let m = char_h(-r.lambda, &mirror).norm();
            prop_assert!(m <= 1e-9 * (1.0 + r.lambda.norm()), "{m}");
        }
    }
}
