use dynline::arith::primes::{divisors, euler_phi};
use dynline::arith::rational::rat;
use dynline::{
    affine_conjugate, affine_order, cyclotomic_polynomial, is_root_of_unity, poly_compose,
    AffineMap, AffineOrder, CycloNumber, Polynomial, RootOfUnity,
};
use proptest::prelude::*;

fn arb_cyclo(n: u32) -> impl Strategy<Value = CycloNumber> {
    let deg = euler_phi(n as u64) as usize;
    prop::collection::vec((-6i64..6, 1i64..4), deg).prop_map(move |cs| {
        CycloNumber::from_coords(n, cs.into_iter().map(|(a, b)| rat(a, b)).collect())
    })
}

fn arb_poly(n: u32, max_len: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(arb_cyclo(n), 2..=max_len)
        .prop_map(move |cs| Polynomial::new(n, cs).unwrap())
        .prop_filter("nonconstant", |p| p.degree().unwrap_or(0) >= 1)
}

fn arb_affine(n: u32) -> impl Strategy<Value = AffineMap> {
    (arb_cyclo(n), arb_cyclo(n))
        .prop_filter("invertible", |(a, _)| !a.is_zero())
        .prop_map(|(a, b)| AffineMap::new(a, b).unwrap())
}

fn conductor() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![1u32, 3, 4, 5, 8])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative(
        (f, g, h) in conductor().prop_flat_map(|n| (arb_poly(n, 3), arb_poly(n, 3), arb_poly(n, 3)))
    ) {
        let left = poly_compose(&poly_compose(&f, &g).unwrap(), &h).unwrap();
        let right = poly_compose(&f, &poly_compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let fg = poly_compose(&f, &g).unwrap();
        prop_assert_eq!(fg.degree(), Some(f.degree().unwrap() * g.degree().unwrap()));
    }

    #[test]
    fn conjugation_round_trip(
        (f, s) in conductor().prop_flat_map(|n| (arb_poly(n, 4), arb_affine(n)))
    ) {
        let g = affine_conjugate(&f, &s).unwrap();
        prop_assert_eq!(affine_conjugate(&g, &s.inverse()).unwrap(), f);
    }

    #[test]
    fn finite_affine_order_is_exact(
        n in prop::sample::select(vec![1u32, 3, 4, 5, 8, 12]),
        k in 0i64..24,
        b in (-5i64..5, 1i64..3),
    ) {
        let s = AffineMap::new(CycloNumber::zeta_pow(n, k), CycloNumber::from_rational(n, rat(b.0, b.1))).unwrap();
        match affine_order(&s) {
            AffineOrder::Finite(r) => {
                prop_assert!(s.pow(r).is_identity());
                for m in 1..r {
                    prop_assert!(!s.pow(m).is_identity());
                }
            }
            AffineOrder::Infinite => {
                // Only nontrivial translations have infinite order here.
                prop_assert!(s.a().is_one() && !s.b().is_zero());
            }
        }
    }

    #[test]
    fn root_of_unity_order_is_minimal(x in conductor().prop_flat_map(arb_cyclo)) {
        if let RootOfUnity::Order(n) = is_root_of_unity(&x) {
            prop_assert!(x.pow(n).is_one());
            for m in 1..n {
                prop_assert!(!x.pow(m).is_one());
            }
        }
    }

    #[test]
    fn powers_of_zeta_are_detected(n in prop::sample::select(vec![3u32, 4, 5, 7, 8, 9, 12, 15]), k in 0i64..40) {
        let x = CycloNumber::zeta_pow(n, k);
        let expect = n as u64 / num_integer::gcd(k as u64 % n as u64, n as u64);
        prop_assert_eq!(is_root_of_unity(&x), RootOfUnity::Order(expect));
        prop_assert_eq!(is_root_of_unity(&-x.clone()), RootOfUnity::Order({
            let m = num_integer::lcm(expect, 2);
            if expect % 2 == 1 { m } else if expect % 4 == 2 { expect / 2 } else { expect }
        }));
    }
}

#[test]
fn cyclotomic_product_is_z_n_minus_one() {
    for n in 1..=30u32 {
        let product = divisors(n as u64)
            .into_iter()
            .map(|d| cyclotomic_polynomial(d as u32))
            .fold(Polynomial::from_ints(&[1]), |acc, p| acc.mul(&p).unwrap());
        let mut target = vec![0i64; n as usize + 1];
        target[0] = -1;
        target[n as usize] = 1;
        assert_eq!(product, Polynomial::from_ints(&target), "N = {n}");
    }
}
