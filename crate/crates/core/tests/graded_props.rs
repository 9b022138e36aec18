use fclosure_core::ffield::Repr;
use fclosure_core::graded::{
    branch_count, closure_quotient_dim, find_linear_reduction, frobenius_closure_membership_capped, BranchOptions,
    ClosureMembership, Echelon, GradedQuotient, HomogPoly, Monomial,
};
use fclosure_core::FieldDescriptor;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn random_form(k: &FieldDescriptor, n: usize, d: u32, terms: usize, rng: &mut ChaCha8Rng) -> HomogPoly {
    let all = Monomial::all_of_degree(n, d);
    let q = k.order().unwrap();
    let picked = (0..terms).map(|_| {
        let m = all[rng.gen_range(0..all.len())].clone();
        (m, k.element_from_index(rng.gen_range(1..q)))
    });
    HomogPoly::from_terms(k, n, d, picked).unwrap()
}

fn random_ring(seed: u64, monomial: bool) -> GradedQuotient {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let k = FieldDescriptor::prime(p).unwrap();
    let n = rng.gen_range(2..=3);
    let count = rng.gen_range(1..=3);
    let rels = (0..count)
        .map(|_| {
            let d = rng.gen_range(1..=3);
            let terms = if monomial { 1 } else { rng.gen_range(1..=3) };
            random_form(&k, n, d, terms, &mut rng)
        })
        .collect();
    GradedQuotient::new(&k, names(n), rels).unwrap()
}

/// Every `m·g` of degree `d`, written in the monomial basis of degree `d`
/// (largest monomial first).
fn macaulay_rows(k: &FieldDescriptor, n: usize, gens: &[HomogPoly], d: u32) -> (Vec<Monomial>, Vec<Vec<Repr>>) {
    let cols = Monomial::all_of_degree(n, d);
    let mut rows = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero() && g.degree() <= d) {
        for m in Monomial::all_of_degree(n, d - g.degree()) {
            let prod = g.mul_monomial(&m);
            let row = cols.iter().map(|c| *prod.terms().find(|(t, _)| *t == c).map(|(_, v)| v).unwrap_or(&k.zero())).collect();
            rows.push(row);
        }
    }
    (cols, rows)
}

fn macaulay_basis(r: &GradedQuotient, d: u32) -> Vec<Monomial> {
    let k = r.field();
    let (cols, rows) = macaulay_rows(k, r.nvars(), r.relations(), d);
    let mut ech = Echelon::new(cols.len());
    for row in rows {
        ech.insert(k, row);
    }
    cols.into_iter().enumerate().filter(|(i, _)| !ech.pivots().contains(i)).map(|(_, m)| m).collect()
}

fn monomial_oracle_hf(r: &GradedQuotient, d: u32) -> usize {
    let gens: Vec<Monomial> = r.relations().iter().map(|g| g.terms().next().unwrap().0.clone()).collect();
    Monomial::all_of_degree(r.nvars(), d).into_iter().filter(|m| !gens.iter().any(|g| g.divides(m))).count()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, rng_seed: RngSeed::Fixed(0x5eed), ..ProptestConfig::default() })]

    #[test]
    fn slices_match_macaulay_matrices(seed in any::<u64>()) {
        let r = random_ring(seed, false);
        for d in 0..=6 {
            let (basis, rank) = r.degree_basis(d);
            prop_assert_eq!(&basis, &macaulay_basis(&r, d), "degree {} of {:?}", d, r);
            prop_assert_eq!(basis.len() as u128 + rank, fclosure_core::graded::monomial_count(r.nvars(), d));
        }
    }

    #[test]
    fn monomial_ideals_match_enumeration(seed in any::<u64>()) {
        let r = random_ring(seed, true);
        for d in 0..=6 {
            prop_assert_eq!(r.hilbert_function(d), monomial_oracle_hf(&r, d));
        }
    }

    #[test]
    fn ideal_membership_matches_macaulay(seed in any::<u64>()) {
        let r = random_ring(seed, false);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let k = r.field().clone();
        let n = r.nvars();
        let j: Vec<HomogPoly> = (0..2).map(|_| random_form(&k, n, rng.gen_range(1..=2), 2, &mut rng)).collect();
        let d = rng.gen_range(2..=4);
        let f = random_form(&k, n, d, 3, &mut rng);
        let mut gens = j.clone();
        gens.extend(r.relations().iter().cloned());
        let (cols, rows) = macaulay_rows(&k, n, &gens, d);
        let mut ech = Echelon::new(cols.len());
        for row in rows {
            ech.insert(&k, row);
        }
        let target: Vec<Repr> = cols.iter().map(|c| f.coefficient(c).repr()).collect();
        prop_assert_eq!(r.ideal_membership(&f, &j).unwrap(), ech.contains(&k, &target));
    }
}

fn parse(p: u64, vars: &[&str], rels: &[&str]) -> GradedQuotient {
    GradedQuotient::parse(&FieldDescriptor::prime(p).unwrap(), vars, rels).unwrap()
}

fn axes(p: u64, d: usize) -> GradedQuotient {
    let vars = names(d);
    let k = FieldDescriptor::prime(p).unwrap();
    let mut rels = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            rels.push(HomogPoly::monomial(&k, Monomial::var(d, i).mul(&Monomial::var(d, j)), k.one()));
        }
    }
    GradedQuotient::new(&k, vars, rels).unwrap()
}

fn example_rings() -> Vec<GradedQuotient> {
    let mut out = vec![parse(3, &["x", "y"], &["x^2+y^2"])];
    for d in 2..=4 {
        for p in [2, 3, 5] {
            out.push(axes(p, d));
        }
    }
    for (d, p) in [(2, 5), (3, 2), (4, 7), (5, 3)] {
        out.push(parse(p, &["x", "y"], &[&format!("x^{d}+y^{d}")]));
    }
    out
}

#[test]
fn containment_chain_and_reduction_slices() {
    for r in example_rings() {
        let red = find_linear_reduction(&r, 3).unwrap();
        let ring = &red.ring;
        let st = ring.multiplicity().unwrap();
        let n = st.index.max(red.index);
        let xn = red.form.pow(n);
        assert!(ring.ideal_membership(&xn, std::slice::from_ref(&xn)).unwrap());
        let dim = closure_quotient_dim(ring, &red.form, n).unwrap();
        assert_eq!(dim + 1, ring.hilbert_function(n), "{r:?}");
        let k = ring.field();
        let top: Vec<HomogPoly> =
            Monomial::all_of_degree(ring.nvars(), n + 1).into_iter().map(|m| HomogPoly::monomial(k, m, k.one())).collect();
        for b in ring.degree_basis(n + 1).0 {
            let b = HomogPoly::monomial(k, b, k.one());
            assert!(ring.ideal_membership(&b, std::slice::from_ref(&red.form)).unwrap());
        }
        // z·f for z a variable and f of degree n lands in m^(n+1)
        for b in ring.degree_basis(n).0 {
            for i in 0..ring.nvars() {
                let zf = HomogPoly::monomial(k, b.times_var(i), k.one());
                assert!(ring.ideal_membership(&zf, &top).unwrap());
            }
        }
    }
}

#[test]
fn frobenius_closure_of_power_matches_slice() {
    for r in example_rings() {
        let red = find_linear_reduction(&r, 3).unwrap();
        let ring = &red.ring;
        let n = ring.multiplicity().unwrap().index.max(red.index);
        let p = ring.field().characteristic();
        let cap = p.pow(3) * u64::from(n + 1);
        let xn = red.form.pow(n);
        let k = ring.field();
        let span_xn = {
            let mut e = Echelon::new(ring.hilbert_function(n));
            e.insert(k, ring.normal_form(&xn).unwrap());
            e
        };
        for b in ring.degree_basis(n).0 {
            let b = HomogPoly::monomial(k, b, k.one());
            let inside = span_xn.contains(k, &ring.normal_form(&b).unwrap());
            let got = frobenius_closure_membership_capped(ring, &b, std::slice::from_ref(&xn), 3, cap).unwrap();
            assert_eq!(matches!(got, ClosureMembership::In(_)), inside, "{b:?} in {r:?}");
        }
        for b in ring.degree_basis(n + 1).0 {
            let b = HomogPoly::monomial(k, b, k.one());
            let got = frobenius_closure_membership_capped(ring, &b, std::slice::from_ref(&xn), 3, cap).unwrap();
            assert!(matches!(got, ClosureMembership::In(_)), "{b:?} in {r:?}");
        }
    }
}

#[test]
fn branch_count_is_invariant_under_scalar_extension() {
    for r in example_rings() {
        let base = branch_count(&r, &BranchOptions::default()).unwrap();
        assert!(base.consistent, "{base:?}");
        for s in [2, 3] {
            let opts = BranchOptions { forced_extension: Some(s), ..BranchOptions::default() };
            let ext = branch_count(&r, &opts).unwrap();
            assert_eq!(ext.branches_formula, base.branches_formula);
            assert_eq!(ext.extension_degree % s, 0);
        }
    }
}
