use proptest::prelude::*;

use cyclic_hw::ff;
use cyclic_hw::monodromy::Datum;
use cyclic_hw::strata::{basic, mu_ordinary, ord_polygon, polygon_sum, shimura_dim, NewtonPolygon, Slope};

fn datum() -> impl Strategy<Value = Datum> {
    (3u64..=12, 4usize..=6, prop::collection::vec(1u64..12, 6)).prop_filter_map("not a datum", |(m, r, a)| {
        let mut a: Vec<u64> = a.into_iter().take(r - 1).map(|x| 1 + x % (m - 1)).collect();
        let s: u64 = a.iter().sum();
        a.push((m - s % m) % m);
        Datum::new(m, a).ok()
    })
}

fn prime_for(m: u64, k: u64) -> u64 {
    (k..).find(|&p| ff::is_prime_u64(p) && m % p != 0).unwrap()
}

fn polygon() -> impl Strategy<Value = NewtonPolygon> {
    prop::collection::vec((0u64..=6, 1u64..=6, 1u64..=4), 0..4).prop_map(|parts| {
        parts.into_iter().fold(NewtonPolygon::empty(), |acc, (n, d, k)| {
            let n = n.min(d);
            acc.sum(&NewtonPolygon::slope(n, d, k * d))
        })
    })
}

proptest! {
    #[test]
    fn height_and_slope_sum(d in datum(), k in 3u64..200) {
        let p = prime_for(d.m(), k);
        let g = d.genus();
        for np in [mu_ordinary(&d, p).unwrap(), basic(&d, p).unwrap()] {
            prop_assert_eq!(np.height(), 2 * g);
            prop_assert_eq!(np.slope_sum(), Slope::from_integer(g));
            prop_assert!(np.is_symmetric());
        }
    }

    #[test]
    fn split_prime_gives_ordinary(d in datum(), k in 1u64..30) {
        // p = 1 mod m: every orbit is a singleton
        let m = d.m();
        let p = (1..).map(|i| i * m * k + 1).find(|&p| ff::is_prime_u64(p)).unwrap();
        prop_assert_eq!(mu_ordinary(&d, p).unwrap(), ord_polygon(d.genus()));
    }

    #[test]
    fn sum_is_associative(a in polygon(), b in polygon(), c in polygon()) {
        prop_assert_eq!(polygon_sum(&polygon_sum(&a, &b), &c), polygon_sum(&a, &polygon_sum(&b, &c)));
        prop_assert_eq!(polygon_sum(&a, &b), polygon_sum(&b, &a));
        prop_assert_eq!(polygon_sum(&a, &NewtonPolygon::empty()), a.clone());
        prop_assert_eq!(polygon_sum(&a, &b).height(), a.height() + b.height());
    }

    #[test]
    fn text_roundtrip(a in polygon()) {
        prop_assert_eq!(NewtonPolygon::parse(&a.to_text()).unwrap(), a);
    }
}

#[test]
fn family_dimension() {
    let d = Datum::new(7, vec![3, 1, 1, 2]).unwrap();
    assert_eq!(shimura_dim(&d), 2);
}
