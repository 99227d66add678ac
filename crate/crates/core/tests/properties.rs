use num_rational::BigRational;
use proptest::prelude::*;
use skewgal::ffield::FqField;
use skewgal::groups::{FiniteGroup, DEFAULT_ORDER_CAP};
use skewgal::orepoly::{ore_witness, OrePoly, OreRing};
use skewgal::quat::Quaternion;
use skewgal::splitcon::odd_prime_for_case_c;

const FIELDS: [(u64, usize); 4] = [(2, 2), (2, 4), (3, 3), (5, 2)];

fn ring(field: usize, twist: usize) -> OreRing {
    let (p, n) = FIELDS[field];
    let f = FqField::new(p, n, 0).unwrap();
    OreRing::new(f.frobenius((twist % n) as i64))
}

fn poly(r: &OreRing, idx: &[u64]) -> OrePoly {
    let f = r.base();
    r.from_coeffs(idx.iter().map(|&i| f.elem_from_index(i % f.size())).collect())
}

fn coeffs() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), 0..6)
}

proptest! {
    #[test]
    fn multiplication_is_associative(f in 0..4usize, t in 0..4usize, a in coeffs(), b in coeffs(), c in coeffs()) {
        let r = ring(f, t);
        let (a, b, c) = (poly(&r, &a), poly(&r, &b), poly(&r, &c));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn degrees_add(f in 0..4usize, t in 0..4usize, a in coeffs(), b in coeffs()) {
        let r = ring(f, t);
        let (a, b) = (poly(&r, &a), poly(&r, &b));
        let ab = a.mul(&b).unwrap();
        match (a.degree(), b.degree()) {
            (Some(x), Some(y)) => prop_assert_eq!(ab.degree(), Some(x + y)),
            _ => prop_assert!(ab.is_zero()),
        }
    }

    #[test]
    fn divisions_reconstruct(f in 0..4usize, t in 0..4usize, a in coeffs(), b in coeffs()) {
        let r = ring(f, t);
        let (a, b) = (poly(&r, &a), poly(&r, &b));
        prop_assume!(!b.is_zero());
        let d = a.right_divmod(&b).unwrap();
        prop_assert_eq!(d.quotient.mul(&b).unwrap().add(&d.remainder).unwrap(), a.clone());
        prop_assert!(d.remainder.degree() < b.degree());
        let d = a.left_divmod(&b).unwrap();
        prop_assert_eq!(b.mul(&d.quotient).unwrap().add(&d.remainder).unwrap(), a);
        prop_assert!(d.remainder.degree() < b.degree());
    }

    #[test]
    fn right_gcd_divides_both(f in 0..4usize, t in 0..4usize, a in coeffs(), b in coeffs()) {
        let r = ring(f, t);
        let (a, b) = (poly(&r, &a), poly(&r, &b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = a.right_gcd(&b).unwrap();
        prop_assert!(a.right_divmod(&g).unwrap().remainder.is_zero());
        prop_assert!(b.right_divmod(&g).unwrap().remainder.is_zero());
    }

    #[test]
    fn ore_condition(f in 0..4usize, t in 0..4usize, a in coeffs(), b in coeffs()) {
        let r = ring(f, t);
        let (x, y) = (poly(&r, &a), poly(&r, &b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (u, v) = ore_witness(&x, &y).unwrap();
        let xu = x.mul(&u).unwrap();
        prop_assert!(!xu.is_zero());
        prop_assert_eq!(xu, y.mul(&v).unwrap());
    }

    #[test]
    fn fitting_subgroup_is_normal_and_nilpotent(
        gens in prop::collection::vec(Just((1..=5u32).collect::<Vec<_>>()).prop_shuffle(), 1..3)
    ) {
        let cycles: Vec<Vec<Vec<u32>>> = gens.iter().map(|p| vec![p[..3].to_vec(), p[3..].to_vec()]).collect();
        let g = FiniteGroup::from_cycles(&cycles, DEFAULT_ORDER_CAP).unwrap();
        prop_assert_eq!(120 % g.order(), 0);
        let fit = g.fitting_subgroup();
        prop_assert!(g.is_normal(&fit));
        prop_assert!(g.is_nilpotent_subgroup(&fit));
    }

    #[test]
    fn quaternion_norm_is_multiplicative(a in prop::array::uniform4(-50i64..50), b in prop::array::uniform4(-50i64..50)) {
        let (x, y) = (Quaternion::from_ints(a), Quaternion::from_ints(b));
        let lhs = x.mul(&y).unwrap().norm();
        let (nx, ny) = (x.norm(), y.norm());
        prop_assert_eq!(lhs.a, nx.a * ny.a);
        prop_assert_eq!(lhs.b, BigRational::from_integer(0.into()));
    }

    #[test]
    fn case_c_prime_divides(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 31, 101]), k in 1u32..4) {
        let q = p.pow(k);
        let r = odd_prime_for_case_c(q).unwrap();
        prop_assert!(r % 2 == 1);
        prop_assert_eq!((q as u128).pow(3).wrapping_sub(1) % r as u128, 0);
    }
}
