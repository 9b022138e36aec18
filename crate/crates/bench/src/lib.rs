//! Fixtures shared by the benchmarks in `benches/`.

use fclosure_core::graded::{GradedQuotient, HomogPoly};
use fclosure_core::semigroup::{AffineSemigroup, IntMatrix};
use fclosure_core::FieldDescriptor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `k[x, y] / (f)` over GF(p).
pub fn plane_curve(p: u64, f: &str) -> GradedQuotient {
    let k = FieldDescriptor::prime(p).expect("prime");
    let vars = vec!["x".to_string(), "y".to_string()];
    let f = HomogPoly::parse(&k, &vars, f).expect("form");
    GradedQuotient::new(&k, vars, vec![f]).expect("ring")
}

/// The `d` coordinate axes: all `x_i x_j` with `i < j`.
pub fn axes(p: u64, d: usize) -> GradedQuotient {
    let k = FieldDescriptor::prime(p).expect("prime");
    let vars: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    let mut rels = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            rels.push(HomogPoly::parse(&k, &vars, &format!("x{}*x{}", i + 1, j + 1)).expect("monomial"));
        }
    }
    GradedQuotient::new(&k, vars, rels).expect("ring")
}

pub fn random_matrix(seed: u64, n: usize, bound: i64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(n, rows)
}

pub fn pinched_veronese() -> AffineSemigroup {
    AffineSemigroup::new(3, vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2], vec![1, 1, 0], vec![1, 0, 1]])
        .expect("semigroup")
}

/// A cone with four extremal rays and no interior generators.
pub fn square_cone() -> AffineSemigroup {
    AffineSemigroup::new(3, vec![vec![3, 0, 1], vec![3, 3, 0], vec![0, 2, 3], vec![2, 3, 0]]).expect("semigroup")
}
