use fclosure_core::ffield::{distinct_root_count, poly_gcd, squarefree_decomposition, Repr};
use fclosure_core::{FieldDescriptor, UniPoly};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn poly(k: &FieldDescriptor, coeffs: &[u64]) -> UniPoly {
    UniPoly::new(k, coeffs.iter().map(|&c| k.element_from_index(c % k.order().unwrap())).collect())
}

fn monic_of_degree(k: &FieldDescriptor, d: usize) -> Vec<UniPoly> {
    let q = k.order().unwrap();
    let mut out = Vec::new();
    for idx in 0..q.pow(d as u32) {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut i = idx;
        for _ in 0..d {
            coeffs.push(k.element_from_index(i % q));
            i /= q;
        }
        coeffs.push(k.one());
        out.push(UniPoly::new(k, coeffs));
    }
    out
}

fn naive_gcd(f: &UniPoly, g: &UniPoly) -> UniPoly {
    let k = f.field().clone();
    if f.is_zero() && g.is_zero() {
        return UniPoly::zero(&k);
    }
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    let top = f.degree().unwrap().min(g.degree().unwrap());
    for d in (0..=top).rev() {
        for c in monic_of_degree(&k, d) {
            if f.rem(&c).unwrap().is_zero() && g.rem(&c).unwrap().is_zero() {
                return c;
            }
        }
    }
    unreachable!("1 divides everything")
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, rng_seed: RngSeed::Fixed(0x5eed), ..ProptestConfig::default() })]

    #[test]
    fn squarefree_decomposition_reassembles(p in prop::sample::select(vec![2u64, 3, 5]),
                                           coeffs in prop::collection::vec(0u64..5, 1..13)) {
        let k = FieldDescriptor::prime(p).unwrap();
        let f = poly(&k, &coeffs);
        prop_assume!(!f.is_zero());
        let parts = squarefree_decomposition(&f).unwrap();
        let mut prod = UniPoly::one(&k);
        for (g, m) in &parts {
            prop_assert_eq!(g.monic(), g.clone());
            prop_assert!(g.degree().unwrap() >= 1);
            prop_assert!(poly_gcd(g, &g.derivative()).unwrap().is_one());
            prod = prod.mul(&g.pow(*m as u64)).unwrap();
        }
        prop_assert_eq!(prod, f.monic());
        for (i, (a, _)) in parts.iter().enumerate() {
            for (b, _) in &parts[i + 1..] {
                prop_assert!(poly_gcd(a, b).unwrap().is_one());
            }
        }
    }

    #[test]
    fn distinct_roots_add_over_coprime_products(p in prop::sample::select(vec![2u64, 3, 5]),
                                               a in prop::collection::vec(0u64..5, 2..7),
                                               b in prop::collection::vec(0u64..5, 2..7)) {
        let k = FieldDescriptor::prime(p).unwrap();
        let (f, g) = (poly(&k, &a), poly(&k, &b));
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assume!(poly_gcd(&f, &g).unwrap().is_one());
        let fg = f.mul(&g).unwrap();
        let count = |h: &UniPoly| if h.degree() == Some(0) { 0 } else { distinct_root_count(h).unwrap() };
        prop_assert_eq!(count(&fg), count(&f) + count(&g));
    }

    #[test]
    fn gcd_matches_divisor_enumeration(p in prop::sample::select(vec![2u64, 3]),
                                       a in prop::collection::vec(0u64..3, 0..5),
                                       b in prop::collection::vec(0u64..3, 0..5)) {
        let k = FieldDescriptor::prime(p).unwrap();
        let (f, g) = (poly(&k, &a), poly(&k, &b));
        prop_assert_eq!(poly_gcd(&f, &g).unwrap(), naive_gcd(&f, &g));
    }

    #[test]
    fn frob_root_inverts_frobenius_in_extensions(s in prop::sample::select(vec![(3u64, 2usize), (2, 3)]), idx in 0u64..9) {
        let k = FieldDescriptor::with_degree(s.0, s.1).unwrap();
        let c: Repr = k.element_from_index(idx % k.order().unwrap());
        prop_assert_eq!(k.pow(k.frob_root(c), s.0), c);
    }
}

#[test]
fn frob_root_exhaustive_over_small_primes() {
    for p in [2u64, 3, 5, 7] {
        let k = FieldDescriptor::prime(p).unwrap();
        for i in 0..p {
            let c = k.from_u64(i);
            assert_eq!(k.pow(k.frob_root(c), p), c);
        }
    }
}
