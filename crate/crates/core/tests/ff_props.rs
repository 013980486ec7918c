use num_bigint::BigUint;
use proptest::prelude::*;

use cyclic_hw::ff::{self, binomial_mod_p, PrimeField, UniPoly};

const PRIMES: [u64; 6] = [5, 7, 11, 13, 29, 97];

fn field() -> impl Strategy<Value = PrimeField> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| PrimeField::new(p).unwrap())
}

fn poly_in(f: PrimeField, max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(0..f.p(), 0..=max_deg + 1).prop_map(move |c| UniPoly::from_coeffs(f, c))
}

fn two_polys() -> impl Strategy<Value = (UniPoly, UniPoly, UniPoly)> {
    field().prop_flat_map(|f| (poly_in(f, 8), poly_in(f, 8), poly_in(f, 8)))
}

fn exact_binom(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

proptest! {
    #[test]
    fn ring_laws((a, b, c) in two_polys()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.sub(&a), UniPoly::zero(a.field()));
    }

    #[test]
    fn division_and_gcd((a, b, _c) in two_polys()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a.clone());
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        let g = a.gcd(&b);
        prop_assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn field_inverse(f in field(), x in 1u64..1000) {
        let x = f.reduce(x);
        prop_assume!(x != 0);
        prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        prop_assert_eq!(f.pow(x, f.p() - 1), 1);
    }

    #[test]
    fn lucas_matches_exact(f in field(), n in 0u64..400, k in 0u64..400) {
        let want = exact_binom(n, k.min(n + 1)) % BigUint::from(f.p());
        let want: u64 = if k > n { 0 } else { want.try_into().unwrap() };
        prop_assert_eq!(binomial_mod_p(n, k, &f), want);
    }

    #[test]
    fn factorization_invariants(f in field().prop_flat_map(|f| poly_in(f, 10)), seed in any::<u64>()) {
        prop_assume!(!f.is_zero());
        let fac = ff::factor(&f, seed).unwrap();
        prop_assert_eq!(fac.expand(f.field()), f.clone());
        for (g, e) in &fac.factors {
            prop_assert!(*e >= 1);
            prop_assert_eq!(g.lead(), 1);
            prop_assert!(ff::is_irreducible(g));
        }
        let degs: usize = fac.factors.iter().map(|(g, e)| g.degree().unwrap() * *e as usize).sum();
        prop_assert_eq!(Some(degs), f.degree());
    }

    #[test]
    fn square_free_parts(f in field().prop_flat_map(|f| poly_in(f, 10))) {
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let parts = ff::square_free(&f);
        let mut acc = UniPoly::constant(f.field(), f.lead());
        for (g, e) in &parts {
            prop_assert!(g.gcd(&g.derivative()).is_constant());
            acc = acc.mul(&g.pow(*e as u64));
        }
        prop_assert_eq!(acc, f);
    }

    #[test]
    fn extension_roots_are_roots(f in field().prop_flat_map(|f| poly_in(f, 6)), seed in any::<u64>()) {
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        for (root, deg) in ff::ext_roots(&f, 3, seed).unwrap() {
            prop_assert!(deg <= 3);
            prop_assert!(root.eval(&f).is_zero());
        }
    }
}
