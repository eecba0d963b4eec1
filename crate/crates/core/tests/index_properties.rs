use proptest::prelude::*;
use spincalc_core::gring::{ahat_series, int, rat, BasisId, GradedClass, Rational};
use spincalc_core::index::{alpha_c, find_vanishing, index_polynomial, index_product, Classification};
use spincalc_core::mancat::{connected_sum, cp, point, product, reverse, sphere, synthetic_spin};
use spincalc_core::LineBundleClass;

// Independent oracle: a_j = (2 - 2^{2j}) B_{2j} / ((2j)! 4^j).
fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![int(1)];
    for m in 1..=n {
        let mut acc = int(0);
        let mut binom = int(1);
        for (k, bk) in b.iter().enumerate().take(m) {
            acc += &binom * bk;
            binom = binom * int((m + 1 - k) as i64) / int((k + 1) as i64);
        }
        b.push(-acc / int((m + 1) as i64));
    }
    b
}

#[test]
fn ahat_series_matches_bernoulli_formula() {
    let b = bernoulli(16);
    let series = ahat_series(9);
    let mut fact = int(1);
    for j in 0..9usize {
        if j > 0 {
            fact = fact * int((2 * j - 1) as i64) * int((2 * j) as i64);
        }
        let four_j = int(4i64.pow(j as u32));
        let two_2j = int(2i64.pow(2 * j as u32));
        let want = (int(2) - two_2j) * &b[2 * j] / (&fact * four_j);
        assert_eq!(series[j], want, "coefficient {j}");
    }
}

#[test]
fn frozen_index_tables() {
    let table = |n: usize, coords: &[i64]| -> Vec<Rational> {
        let m = cp(n).unwrap();
        coords
            .iter()
            .map(|&a| alpha_c(&m, &LineBundleClass(vec![a])).unwrap().value)
            .collect()
    };
    let even: Vec<i64> = (-3..=3).map(|k| 2 * k).collect();
    let odd: Vec<i64> = (-3..=3).map(|k| 2 * k + 1).collect();
    let ints = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
    assert_eq!(table(3, &even), ints(&[-4, -1, 0, 0, 0, 1, 4]));
    assert_eq!(table(5, &even), ints(&[-1, 0, 0, 0, 0, 0, 1]));
    assert_eq!(table(6, &odd), ints(&[0, 0, 0, 0, 0, 0, 1]));
    assert_eq!(table(2, &[-5, -3, -1, 1, 3, 5, 7]), ints(&[3, 1, 0, 0, 1, 3, 6]));
}

#[test]
fn cp3_ahat_degree_two() {
    let a = cp(3).unwrap().ahat().clone();
    assert_eq!(a.component(4), [rat(-1, 6)]);
}

#[test]
fn cp4_symmetry_under_dual() {
    // k ↦ -1-k sends (2k+1)x to -(2k+1)x.
    let m = cp(4).unwrap();
    for k in -15i64..=15 {
        let a = alpha_c(&m, &LineBundleClass(vec![2 * k + 1])).unwrap().value;
        let b = alpha_c(&m, &LineBundleClass(vec![2 * (-1 - k) + 1])).unwrap().value;
        assert_eq!(a, b);
    }
}

#[test]
fn connected_sum_with_sphere_is_neutral() {
    let m = cp(2).unwrap();
    let s = connected_sum(&m, &sphere(4).unwrap()).unwrap();
    // The sphere adds its own fundamental class, paired to 1 like the other.
    assert!(s.ring().pairing().iter().all(|p| *p == int(1)));
    assert_eq!(s.ring().labels(2), m.ring().labels(2));
    assert_eq!(s.ahat_genus(), m.ahat_genus());
    assert_eq!(index_polynomial(&s).unwrap(), index_polynomial(&m).unwrap());
}

#[test]
fn odd_dimension_vanishes_with_note() {
    let m = product(&cp(1).unwrap(), &sphere(3).unwrap()).unwrap();
    let v = alpha_c(&m, &LineBundleClass(vec![2])).unwrap();
    assert_eq!(v.value, int(0));
    assert!(v.notes.iter().any(|n| n.starts_with("odd-dimension")));
}

#[test]
fn inadmissible_class_is_flagged() {
    let v = alpha_c(&cp(2).unwrap(), &LineBundleClass(vec![2])).unwrap();
    assert!(!v.admissible);
    assert_eq!(v.value, rat(3, 8));
}

#[test]
fn blowup_witness_is_a_line_of_roots() {
    let m = connected_sum(&cp(2).unwrap(), &reverse(&cp(2).unwrap())).unwrap();
    let r = find_vanishing(&m, 9).unwrap();
    assert_eq!(r.classification, Classification::InfiniteFamilyWitness);
    let (base, step) = r.witness.unwrap();
    for s in -50..=50 {
        let c: Vec<i64> = base.0.iter().zip(&step.0).map(|(b, d)| b + s * d).collect();
        assert_eq!(alpha_c(&m, &LineBundleClass(c)).unwrap().value, int(0));
    }
}

#[test]
fn cp4_roots_are_finite() {
    let r = find_vanishing(&cp(4).unwrap(), 9).unwrap();
    let roots: Vec<i64> = r.roots.iter().map(|c| c.0[0]).collect();
    assert_eq!(roots, [-3, -1, 1, 3]);
    assert_eq!(r.classification, Classification::FiniteRoots);
}

fn odd() -> impl Strategy<Value = i64> {
    (-7i64..=7).prop_map(|k| 2 * k + 1)
}

proptest! {
    #[test]
    fn exp_half_is_additive(a in -15i64..=15, b in -15i64..=15) {
        let m = product(&cp(2).unwrap(), &cp(2).unwrap()).unwrap();
        let x = m.degree_two_class(&[a, 0]).unwrap();
        let y = m.degree_two_class(&[0, b]).unwrap();
        let lhs = x.add(&y).unwrap().exp_half().unwrap();
        let rhs = x.exp_half().unwrap().mul(&y.exp_half().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pairing_is_linear(a in -20i64..=20, b in -20i64..=20, s in -5i64..=5) {
        let m = cp(3).unwrap();
        let ring = m.ring().clone();
        let top = BasisId::new(6, 0);
        let u = GradedClass::monomial(&ring, top, int(a)).unwrap();
        let v = GradedClass::monomial(&ring, top, int(b)).unwrap();
        let lhs = u.scale(&int(s)).add(&v).unwrap().pair();
        prop_assert_eq!(lhs, int(s) * u.pair() + v.pair());
    }

    #[test]
    fn index_is_integral_for_admissible_classes(a in -15i64..=15, b in -15i64..=15) {
        let blow = connected_sum(&cp(2).unwrap(), &reverse(&cp(2).unwrap())).unwrap();
        let (a, b) = (2 * (a / 2) + 1, 2 * (b / 2) + 1);
        prop_assert!(alpha_c(&blow, &LineBundleClass(vec![a, b])).unwrap().value.is_integer());
        let prod = product(&cp(2).unwrap(), &cp(2).unwrap()).unwrap();
        prop_assert!(alpha_c(&prod, &LineBundleClass(vec![a, b])).unwrap().value.is_integer());
    }

    #[test]
    fn ahat_is_multiplicative(n1 in 1usize..=3, n2 in 1usize..=3) {
        let (m1, m2) = (cp(n1).unwrap(), cp(n2).unwrap());
        let prod = product(&m1, &m2).unwrap();
        prop_assert_eq!(prod.ahat_genus(), m1.ahat_genus() * m2.ahat_genus());
    }

    #[test]
    fn ahat_genus_is_additive(a in -5i64..=5, b in -5i64..=5) {
        let s = connected_sum(&synthetic_spin(8, a).unwrap(), &synthetic_spin(8, b).unwrap()).unwrap();
        prop_assert_eq!(s.ahat_genus(), int(a + b));
        let t = connected_sum(&cp(4).unwrap(), &synthetic_spin(8, a).unwrap()).unwrap();
        prop_assert_eq!(t.ahat_genus(), rat(3, 128) + int(a));
    }

    #[test]
    fn index_multiplies(a in odd(), b in odd()) {
        let p = index_product(&cp(2).unwrap(), &LineBundleClass(vec![a]), &cp(2).unwrap(), &LineBundleClass(vec![b]));
        prop_assert!(p.is_ok());
    }

    #[test]
    fn reversal_negates_index(a in odd()) {
        let m = cp(4).unwrap();
        let c = LineBundleClass(vec![a]);
        let lhs = alpha_c(&reverse(&m), &c).unwrap().value;
        prop_assert_eq!(lhs, -alpha_c(&m, &c).unwrap().value);
    }

    #[test]
    fn point_is_product_identity(a in odd()) {
        let m = cp(2).unwrap();
        let p = product(&point(), &m).unwrap();
        let c = LineBundleClass(vec![a]);
        prop_assert_eq!(alpha_c(&p, &c).unwrap().value, alpha_c(&m, &c).unwrap().value);
    }
}
