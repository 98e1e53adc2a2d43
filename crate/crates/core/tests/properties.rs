use std::collections::HashMap;
use std::sync::OnceLock;

use proptest::prelude::*;
use trisparse::factor::{factor, is_irreducible};
use trisparse::orders::{ord_bruteforce, ord_general};
use trisparse::sparsity::{enumerate_sparse, factor_xn1_structured};
use trisparse::{FieldCtx, Level, Polynomial};

const ORDERS: [u64; 6] = [3, 5, 7, 9, 25, 27];

fn ctx(q: u64) -> FieldCtx {
    static CACHE: OnceLock<HashMap<u64, FieldCtx>> = OnceLock::new();
    CACHE.get_or_init(|| {
        ORDERS
            .iter()
            .map(|&q| (q, FieldCtx::from_order(q, None).unwrap()))
            .collect()
    })[&q]
        .clone()
}

fn poly(q: u64, codes: &[u64]) -> Polynomial {
    let c = ctx(q);
    let digits: Vec<Vec<u64>> = codes
        .iter()
        .map(|&x| c.digits(c.element(Level::Base, x % q).unwrap()))
        .collect();
    Polynomial::from_digit_vectors(&c, Level::Base, &digits).unwrap()
}

fn order() -> impl Strategy<Value = u64> {
    prop::sample::select(ORDERS.to_vec())
}

fn codes(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..1000, 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(q in order(), a in codes(7), b in codes(7), c in codes(7)) {
        let (a, b, c) = (poly(q, &a), poly(q, &b), poly(q, &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&(&a - &b) + &b) == a);
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn division_with_remainder(q in order(), a in codes(10), b in codes(6)) {
        let (a, b) = (poly(q, &a), poly(q, &b));
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&quo * &b) + &rem, a);
        prop_assert!(rem.is_zero() || rem.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_both(q in order(), a in codes(6), b in codes(6), c in codes(4)) {
        let (a, b, c) = (poly(q, &a), poly(q, &b), poly(q, &c));
        prop_assume!(!c.is_zero() && !(a.is_zero() && b.is_zero()));
        let (ac, bc) = (&a * &c, &b * &c);
        let g = ac.gcd(&bc).unwrap();
        prop_assert!(g.is_monic());
        prop_assert!(g.divides(&ac).unwrap() && g.divides(&bc).unwrap());
        prop_assert!(c.monic().divides(&g).unwrap());
    }

    #[test]
    fn inflation_keeps_weight_and_products(q in order(), a in codes(6), b in codes(6), t in 1usize..6) {
        let (a, b) = (poly(q, &a), poly(q, &b));
        prop_assert_eq!(a.inflate(t).weight(), a.weight());
        prop_assert_eq!((&a * &b).inflate(t), &a.inflate(t) * &b.inflate(t));
    }

    #[test]
    fn evaluation_is_a_homomorphism(q in order(), a in codes(6), b in codes(6), x in 0u64..1_000_000) {
        let c = ctx(q);
        let (a, b) = (poly(q, &a), poly(q, &b));
        for level in [Level::Base, Level::Tower] {
            let point = c.element(level, x % c.size(level)).unwrap();
            let sum = c.add(a.eval(point).unwrap(), b.eval(point).unwrap()).unwrap();
            let prod = c.mul(a.eval(point).unwrap(), b.eval(point).unwrap()).unwrap();
            prop_assert_eq!((&a + &b).eval(point).unwrap(), sum);
            prop_assert_eq!((&a * &b).eval(point).unwrap(), prod);
        }
    }

    #[test]
    fn embedding_is_a_homomorphism(q in order(), x in 0u64..1000, y in 0u64..1000) {
        let c = ctx(q);
        let x = c.element(Level::Base, x % q).unwrap();
        let y = c.element(Level::Base, y % q).unwrap();
        let (ex, ey) = (c.embed(x).unwrap(), c.embed(y).unwrap());
        prop_assert_eq!(c.embed(c.add(x, y).unwrap()).unwrap(), c.add(ex, ey).unwrap());
        prop_assert_eq!(c.embed(c.mul(x, y).unwrap()).unwrap(), c.mul(ex, ey).unwrap());
        prop_assert_eq!(c.project(c.embed(x).unwrap()), Some(x));
    }

    #[test]
    fn factorization_round_trips(q in order(), a in codes(9), seed in any::<u64>()) {
        let f = poly(q, &a);
        prop_assume!(!f.is_zero());
        let fac = factor(&f, seed).unwrap();
        prop_assert_eq!(fac.product(), f);
        for (g, m) in fac.factors() {
            prop_assert!(g.is_monic() && is_irreducible(g) && *m >= 1);
        }
        prop_assert_eq!(factor(&fac.product(), seed ^ 1).unwrap(), fac);
    }

    #[test]
    fn general_order_matches_iteration(q in 2u64..200, d in 2u64..5000) {
        prop_assume!(trisparse::orders::gcd(q, d) == 1);
        prop_assert_eq!(ord_general(q, d).unwrap(), ord_bruteforce(q, d).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn structured_matches_oracle(q in order(), pick in any::<prop::sample::Index>()) {
        let c = ctx(q);
        let sparse = enumerate_sparse(&c, 400).unwrap();
        let n = sparse[pick.index(sparse.len())];
        let structured = factor_xn1_structured(&c, n).unwrap();
        let oracle = factor(&Polynomial::x_pow_minus_one(&c, n as usize), 0).unwrap();
        prop_assert_eq!(&structured, &oracle);
        prop_assert!(structured.max_weight() <= 3);
    }
}
