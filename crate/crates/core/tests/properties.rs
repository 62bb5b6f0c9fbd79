use grouphull::group::{Perm, PermGroup};
use grouphull::linalg::{kernel_basis, rank, Matrix};
use grouphull::scalar::{Rational, Scalar, Sqrt2, Sqrt5};
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n, d).unwrap()),
        // Large enough to leave the i64 fast path under multiplication.
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rational::new(n, d).unwrap()),
    ]
}

fn sqrt5() -> impl Strategy<Value = Sqrt5> {
    (rational(), rational()).prop_map(|(a, b)| Sqrt5::new(a, b))
}

fn small_sqrt2() -> impl Strategy<Value = Sqrt2> {
    (-30i64..30, -30i64..30, 1i64..6).prop_map(|(a, b, d)| Sqrt2::new(Rational::new(a, d).unwrap(), Rational::new(b, d).unwrap()))
}

/// Sign of `a + b·√d` from an enclosure of √d with 256 fractional bits.
fn interval_sign(a: (i64, i64), b: (i64, i64), d: u32) -> Option<i8> {
    let k = 256u32;
    let scaled = BigInt::from(d) << (2 * k);
    let lo = scaled.sqrt();
    let hi = &lo + 1;
    // a + b·√d = (a_n·b_d·2^k + a_d·b_n·s) / (a_d·b_d·2^k) with s ∈ [lo, hi].
    let (an, ad) = (BigInt::from(a.0), BigInt::from(a.1));
    let (bn, bd) = (BigInt::from(b.0), BigInt::from(b.1));
    let base = (&an * &bd) << k;
    let x = &base + &ad * &bn * &lo;
    let y = &base + &ad * &bn * &hi;
    let den_sign = if (a.1 > 0) == (b.1 > 0) { 1 } else { -1 };
    let zero = BigInt::from(0);
    if x > zero && y > zero {
        Some(den_sign)
    } else if x < zero && y < zero {
        Some(-den_sign)
    } else {
        None
    }
}

proptest! {
    #[test]
    fn rational_field_axioms(x in rational(), y in rational(), z in rational()) {
        prop_assert_eq!(x.clone() + &y, y.clone() + &x);
        prop_assert_eq!(x.clone() * &y, y.clone() * &x);
        prop_assert_eq!((x.clone() + &y) + &z, x.clone() + &(y.clone() + &z));
        prop_assert_eq!((x.clone() * &y) * &z, x.clone() * &(y.clone() * &z));
        prop_assert_eq!(x.clone() * &(y.clone() + &z), x.clone() * &y + &(x.clone() * &z));
        prop_assert_eq!(x.clone() - &x, Rational::zero());
        if !x.is_zero() {
            prop_assert_eq!(x.clone() * &x.recip().unwrap(), Rational::one());
        } else {
            prop_assert!(x.recip().is_err());
        }
    }

    #[test]
    fn quadratic_field_axioms(x in sqrt5(), y in sqrt5(), z in sqrt5()) {
        prop_assert_eq!(x.clone() + &y, y.clone() + &x);
        prop_assert_eq!(x.clone() * &y, y.clone() * &x);
        prop_assert_eq!((x.clone() * &y) * &z, x.clone() * &(y.clone() * &z));
        prop_assert_eq!(x.clone() * &(y.clone() + &z), x.clone() * &y + &(x.clone() * &z));
        if !x.is_zero() {
            prop_assert_eq!(x.clone() * &x.recip().unwrap(), Sqrt5::one());
        }
    }

    #[test]
    fn sign_is_multiplicative_and_order_is_translation_invariant(x in sqrt5(), y in sqrt5(), z in sqrt5()) {
        prop_assert_eq!((x.clone() * &y).sign(), x.sign() * y.sign());
        prop_assert_eq!((-x.clone()).sign(), -x.sign());
        prop_assert_eq!(x.cmp(&y), (x.clone() + &z).cmp(&(y.clone() + &z)));
        prop_assert_eq!(x.cmp(&y), (x.clone() - &y).sign().cmp(&0));
    }

    #[test]
    fn sign_matches_interval_enclosure(an in -10_000i64..10_000, ad in 1i64..100, bn in -10_000i64..10_000, bd in 1i64..100) {
        let x = Sqrt5::new(Rational::new(an, ad).unwrap(), Rational::new(bn, bd).unwrap());
        if let Some(s) = interval_sign((an, ad), (bn, bd), 5) {
            prop_assert_eq!(x.sign(), s);
        } else {
            prop_assert_eq!(x.sign(), 0);
        }
    }

    #[test]
    fn text_round_trip(x in sqrt5(), q in rational(), s in small_sqrt2()) {
        prop_assert_eq!(x.to_string().parse::<Sqrt5>().unwrap(), x);
        prop_assert_eq!(q.to_string().parse::<Rational>().unwrap(), q);
        prop_assert_eq!(s.to_string().parse::<Sqrt2>().unwrap(), s);
    }

    #[test]
    fn rank_and_kernel(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-3i64..4, 36)) {
        let data: Vec<Rational> = seed[..rows * cols].iter().map(|&v| Rational::from(v)).collect();
        let m = Matrix::new(rows, cols, data).unwrap();
        let r = rank(&m);
        prop_assert_eq!(r, rank(&m.transpose()));
        let kernel = kernel_basis(&m);
        prop_assert_eq!(kernel.len(), cols - r);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn canonical_image_is_an_orbit_invariant(n in 3usize..8, set_bits in any::<u8>(), word in prop::collection::vec(0usize..2, 0..12)) {
        // The symmetric group S_n from a transposition and an n-cycle: the
        // canonical image of a k-set is {0, .., k-1}.
        let swap = Perm::from_images((0..n as u32).map(|i| match i { 0 => 1, 1 => 0, _ => i }).collect()).unwrap();
        let cycle = Perm::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).unwrap();
        let g = PermGroup::new(n, &[swap.clone(), cycle.clone()]);
        let set: Vec<u32> = (0..n as u32).filter(|i| set_bits >> i & 1 == 1).collect();
        let mut moved = set.clone();
        for w in word {
            moved = [&swap, &cycle][w].apply_set(&moved);
        }
        let c = g.canonical_image(&set);
        prop_assert_eq!(&c, &(0..set.len() as u32).collect::<Vec<_>>());
        prop_assert_eq!(g.canonical_image(&moved), c.clone());
        prop_assert_eq!(g.canonical_image(&c), c);
    }
}
