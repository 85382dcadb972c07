use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn random_elem(f: &FieldCtx, rng: &mut ChaCha8Rng) -> FieldElem {
    f.wrap(rng.gen_range(0..f.order()))
}

#[test]
fn prime_field_basics() {
    let f5 = FieldCtx::new(5, 1, None).unwrap();
    assert_eq!(f5.order(), 5);
    assert!(f5.modulus().is_empty());
    assert!(matches!(FieldCtx::new(4, 1, None), Err(Error::CompositeCharacteristic(4))));
    assert!(matches!(FieldCtx::new(5, 0, None), Err(Error::ZeroDegree)));
}

#[test]
fn explicit_modulus_f9() {
    // X^2 + 1 has no root mod 3: 1, 2, 5 ≡ 2 are all nonzero.
    for x in 0..3u64 {
        assert_ne!((x * x + 1) % 3, 0);
    }
    let f9 = FieldCtx::new(3, 2, Some(&[1, 0, 1])).unwrap();
    assert_eq!(f9.order(), 9);
    assert_eq!(f9.modulus(), &[1, 0, 1]);
    // X^2 + 2 = (X - 1)(X + 1) over F_3.
    assert!(matches!(FieldCtx::new(3, 2, Some(&[2, 0, 1])), Err(Error::ReducibleModulus(3))));
    assert!(matches!(FieldCtx::new(3, 2, Some(&[1, 1])), Err(Error::ModulusShape { .. })));
    assert!(matches!(FieldCtx::new(3, 2, Some(&[1, 0, 2])), Err(Error::ModulusShape { .. })));
}

#[test]
fn default_modulus_is_lexicographically_smallest() {
    assert_eq!(FieldCtx::new(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
    // Over F_2 the only irreducible quadratic is X^2 + X + 1.
    assert_eq!(FieldCtx::new(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
    // Cubics over F_2 in order (c0, c1, c2): [1,0,0] is X^3 + 1 with root 1,
    // then [1,0,1] is X^3 + X^2 + 1, irreducible.
    assert_eq!(FieldCtx::new(2, 3, None).unwrap().modulus(), &[1, 0, 1, 1]);
    let a = FieldCtx::new(3, 6, None).unwrap();
    let b = FieldCtx::new(3, 6, None).unwrap();
    assert_eq!(a.modulus(), b.modulus());
    assert!(a.same_field(&b));
}

#[test]
fn inverse_and_division() {
    let f5 = FieldCtx::prime(5).unwrap();
    assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
    assert!(matches!(f5.div(f5.one(), f5.zero()), Err(Error::DivisionByZero)));
    assert!(matches!(f5.inv(f5.zero()), Err(Error::DivisionByZero)));
    assert_eq!(f5.from_int(-1), f5.from_int(4));
    assert!(f5.elem(5).is_err());
}

#[test]
fn cross_field_operands_are_rejected() {
    let f5 = FieldCtx::prime(5).unwrap();
    let f7 = FieldCtx::prime(7).unwrap();
    let f9 = FieldCtx::new(3, 2, None).unwrap();
    assert!(matches!(f5.add(f5.one(), f7.one()), Err(Error::FieldMismatch)));
    assert!(matches!(f9.mul(f9.one(), f5.one()), Err(Error::FieldMismatch)));
}

#[test]
fn fermat_closure_in_f81() {
    let f = FieldCtx::new(3, 4, None).unwrap();
    let q = f.cardinality();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let a = random_elem(&f, &mut rng);
        assert_eq!(f.pow(a, &q).unwrap(), a);
    }
}

#[test]
fn frobenius_order_divides_degree() {
    let f9 = FieldCtx::new(3, 2, None).unwrap();
    for a in f9.elements() {
        assert_eq!(f9.frobenius(a, 2).unwrap(), a);
    }
}

#[test]
fn frobenius_is_additive() {
    let f = FieldCtx::new(3, 3, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let a = random_elem(&f, &mut rng);
        let b = random_elem(&f, &mut rng);
        let lhs = f.frobenius(f.add(a, b).unwrap(), 1).unwrap();
        let rhs = f.add(f.frobenius(a, 1).unwrap(), f.frobenius(b, 1).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn pth_root_in_f8() {
    let f8 = FieldCtx::new(2, 3, None).unwrap();
    let two = BigUint::from(2u32);
    for a in f8.elements() {
        let r = f8.frobenius(a, 2).unwrap();
        assert_eq!(f8.pow(r, &two).unwrap(), a);
    }
}

#[test]
fn euler_criterion() {
    let f5 = FieldCtx::prime(5).unwrap();
    assert!(f5.is_square(f5.from_int(4)).unwrap());
    assert!(!f5.is_square(f5.from_int(2)).unwrap());
    let f7 = FieldCtx::prime(7).unwrap();
    assert!(f7.is_square(f7.zero()).unwrap());
    let f8 = FieldCtx::new(2, 3, None).unwrap();
    assert!(matches!(f8.is_square(f8.one()), Err(Error::CharacteristicTwo)));
}

#[test]
fn is_square_matches_exhaustive_squares() {
    for f in [FieldCtx::prime(13).unwrap(), FieldCtx::new(3, 3, None).unwrap(), FieldCtx::new(5, 2, None).unwrap()] {
        let squares: std::collections::HashSet<u64> = f.elements().map(|a| f.raw_mul(a.value(), a.value())).collect();
        assert_eq!(squares.len() as u64, f.order().div_ceil(2));
        for a in f.elements() {
            assert_eq!(f.is_square(a).unwrap(), squares.contains(&a.value()), "a = {a}");
        }
    }
}

#[test]
fn log_tables_agree_with_schoolbook_multiplication() {
    let f = FieldCtx::new(3, 6, None).unwrap();
    assert!(f.tables.is_some());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let a = rng.gen_range(0..f.order());
        let b = rng.gen_range(0..f.order());
        assert_eq!(f.raw_mul(a, b), f.slow_mul(a, b));
    }
}

#[test]
fn field_axioms_on_random_triples() {
    let fields = [
        FieldCtx::prime(13).unwrap(),
        FieldCtx::prime(10007).unwrap(),
        FieldCtx::prime((1 << 61) - 1).unwrap(),
        FieldCtx::new(2, 8, None).unwrap(),
        FieldCtx::new(3, 6, None).unwrap(),
        // Above the table limit: exercises the slow multiplication path.
        FieldCtx::new(3, 13, None).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for f in &fields {
        for _ in 0..1000 {
            let a = random_elem(f, &mut rng);
            let b = random_elem(f, &mut rng);
            let c = random_elem(f, &mut rng);
            let add = |x, y| f.add(x, y).unwrap();
            let mul = |x, y| f.mul(x, y).unwrap();
            assert_eq!(add(a, add(b, c)), add(add(a, b), c));
            assert_eq!(mul(a, mul(b, c)), mul(mul(a, b), c));
            assert_eq!(add(a, b), add(b, a));
            assert_eq!(mul(a, b), mul(b, a));
            assert_eq!(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
            assert_eq!(add(a, f.neg(a).unwrap()), f.zero());
            assert_eq!(f.sub(add(a, b), b).unwrap(), a);
            if !a.is_zero() {
                assert_eq!(mul(a, f.inv(a).unwrap()), f.one());
                assert_eq!(f.div(mul(b, a), a).unwrap(), b);
            }
        }
    }
}
