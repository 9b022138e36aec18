//! Affine semigroups `A ⊂ N^n`: membership, lattice and cone data, the
//! saturation `Ā = group(A) ∩ cone(A)`, the weak normalization
//! `*A = {a ∈ Ā : p^e·a ∈ A for some e}`, F-nilpotence of `k[A]`, tight
//! closure of monomial ideals and Frobenius test exponents.

mod closure;
mod cone;
mod lattice;
mod parse;
mod exact;

use std::collections::{BinaryHeap, HashSet};
use std::sync::OnceLock;

use thiserror::Error;

pub use closure::{
    Certificate, ElementEvidence, EventualMembership, FNilpotencyReport, FVerdict, PureInseparability,
    Saturation, WeakNormalization, DEFAULT_BOX_FACTOR, DEFAULT_E_MAX,
};
pub use cone::{Cone, MAX_CONE_DIMENSION};
pub use lattice::{gcd, hermite_normal_form, integer_kernel, smith_normal_form, IntMatrix, IntMatrixNF, Lattice};
pub use parse::{parse_semigroup, parse_vectors};

/// States explored by a single membership search before giving up.
pub const DEFAULT_MEMBERSHIP_BUDGET: usize = 250_000;
/// Largest smallest-generator for which the Apéry table is built.
const APERY_LIMIT: i64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("integer overflow")]
    Overflow,
    #[error("ambient dimension {dim} exceeds the cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },
    #[error("saturation box {box_bound:?} is too small to certify the Hilbert basis")]
    BasisNotClosed { box_bound: Vec<i64> },
    #[error("enumeration box has {points} points, more than {cap}")]
    BoxTooLarge { points: u128, cap: u128 },
    #[error("membership search exceeded {0} states")]
    BudgetExhausted(usize),
    #[error("the ring is not known to be F-nilpotent")]
    NotFNilpotentRing,
    #[error("Frobenius test exponent search exceeded e = {0}")]
    CapExceeded(u32),
    #[error("Frobenius test exponent {fte} exceeds the pure inseparability index {e0}")]
    FteAboveIndex { fte: u32, e0: u32 },
    #[error("expected a numerical semigroup (one coordinate, coprime generators)")]
    NotNumerical,
    #[error("vector {0:?} is not in the semigroup")]
    NotInSemigroup(Vec<i64>),
    #[error("no generators")]
    Empty,
    #[error("generator {0:?} is zero")]
    ZeroGenerator(Vec<i64>),
    #[error("negative entry in {0:?}")]
    NegativeEntry(Vec<i64>),
    #[error("vector {got:?} has {} coordinates, expected {expected}", got.len())]
    DimensionMismatch { got: Vec<i64>, expected: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("parse error at offset {position}: expected {expected}")]
    Parse { position: usize, expected: String },
}

/// Smallest elements of a numerical semigroup in each residue class modulo
/// its smallest generator, after dividing out the gcd.
#[derive(Debug, Clone)]
struct Apery {
    gcd: i64,
    modulus: i64,
    table: Vec<i64>,
}

impl Apery {
    fn new(gens: &[i64]) -> Option<Apery> {
        let g = gens.iter().fold(0u64, |g, &x| gcd(g, x as u64)) as i64;
        let scaled: Vec<i64> = gens.iter().map(|&x| x / g).collect();
        let m = *scaled.iter().min()?;
        if m > APERY_LIMIT {
            return None;
        }
        let mut table = vec![i64::MAX; m as usize];
        table[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(std::cmp::Reverse((0i64, 0usize)));
        while let Some(std::cmp::Reverse((w, r))) = heap.pop() {
            if w > table[r] {
                continue;
            }
            for &s in &scaled {
                let nw = w.checked_add(s)?;
                let nr = ((r as i64 + s) % m) as usize;
                if nw < table[nr] {
                    table[nr] = nw;
                    heap.push(std::cmp::Reverse((nw, nr)));
                }
            }
        }
        Some(Apery { gcd: g, modulus: m, table })
    }

    fn contains(&self, a: i64) -> bool {
        if a < 0 || a % self.gcd != 0 {
            return false;
        }
        let b = a / self.gcd;
        b >= self.table[(b % self.modulus) as usize]
    }
}

#[derive(Debug, Clone)]
pub struct AffineSemigroup {
    n: usize,
    generators: Vec<Vec<i64>>,
    membership_budget: usize,
    box_factor: i64,
    lattice: OnceLock<Result<Lattice, SemigroupError>>,
    cone: OnceLock<Result<Cone, SemigroupError>>,
    apery: OnceLock<Option<Apery>>,
    saturation: OnceLock<Result<Saturation, SemigroupError>>,
}

impl PartialEq for AffineSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.generators == other.generators
    }
}

impl std::fmt::Display for AffineSemigroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> =
            self.generators.iter().map(|g| g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}: {}", self.n, gens.join("; "))
    }
}

pub(crate) fn check_prime(p: u64) -> Result<(), SemigroupError> {
    if crate::ffield::is_prime(p) {
        Ok(())
    } else {
        Err(SemigroupError::NotPrime(p))
    }
}

pub(crate) fn scale(q: i64, v: &[i64]) -> Result<Vec<i64>, SemigroupError> {
    v.iter().map(|&x| x.checked_mul(q).ok_or(SemigroupError::Overflow)).collect()
}

pub(crate) fn sub(a: &[i64], b: &[i64]) -> Result<Vec<i64>, SemigroupError> {
    a.iter().zip(b).map(|(&x, &y)| x.checked_sub(y).ok_or(SemigroupError::Overflow)).collect()
}

impl AffineSemigroup {
    /// Generators in `N^n`, none zero; repeats are dropped, first occurrence
    /// kept.
    pub fn new(n: usize, generators: Vec<Vec<i64>>) -> Result<Self, SemigroupError> {
        if generators.is_empty() || n == 0 {
            return Err(SemigroupError::Empty);
        }
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for g in generators {
            if g.len() != n {
                return Err(SemigroupError::DimensionMismatch { got: g, expected: n });
            }
            if g.iter().any(|&x| x < 0) {
                return Err(SemigroupError::NegativeEntry(g));
            }
            if g.iter().all(|&x| x == 0) {
                return Err(SemigroupError::ZeroGenerator(g));
            }
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(AffineSemigroup {
            n,
            generators: gens,
            membership_budget: DEFAULT_MEMBERSHIP_BUDGET,
            box_factor: DEFAULT_BOX_FACTOR,
            lattice: OnceLock::new(),
            cone: OnceLock::new(),
            apery: OnceLock::new(),
            saturation: OnceLock::new(),
        })
    }

    /// The numerical semigroup generated by `gens`.
    pub fn numerical(gens: &[i64]) -> Result<Self, SemigroupError> {
        Self::new(1, gens.iter().map(|&g| vec![g]).collect())
    }

    pub fn with_membership_budget(mut self, budget: usize) -> Self {
        self.membership_budget = budget;
        self
    }

    pub fn with_box_factor(mut self, factor: i64) -> Self {
        self.box_factor = factor.max(1);
        self.saturation = OnceLock::new();
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn box_factor(&self) -> i64 {
        self.box_factor
    }

    pub fn is_numerical(&self) -> bool {
        self.n == 1 && self.generators.iter().fold(0u64, |g, v| gcd(g, v[0] as u64)) == 1
    }

    pub(crate) fn check_vector(&self, a: &[i64]) -> Result<(), SemigroupError> {
        if a.len() != self.n {
            return Err(SemigroupError::DimensionMismatch { got: a.to_vec(), expected: self.n });
        }
        Ok(())
    }

    /// The group generated by `A`, in Hermite form.
    pub fn lattice(&self) -> Result<&Lattice, SemigroupError> {
        self.lattice.get_or_init(|| Lattice::spanned_by(self.n, &self.generators)).as_ref().map_err(Clone::clone)
    }

    pub fn cone(&self) -> Result<&Cone, SemigroupError> {
        self.cone.get_or_init(|| Cone::new(self.n, &self.generators)).as_ref().map_err(Clone::clone)
    }

    /// Irredundant facet inequalities `h·v >= 0` of the cone.
    pub fn cone_facets(&self) -> Result<Vec<Vec<i64>>, SemigroupError> {
        Ok(self.cone()?.facets().to_vec())
    }

    fn apery(&self) -> Option<&Apery> {
        self.apery
            .get_or_init(|| if self.n == 1 { Apery::new(&self.generators.iter().map(|g| g[0]).collect::<Vec<_>>()) } else { None })
            .as_ref()
    }

    /// Largest integer outside a numerical semigroup, `-1` for `N`.
    pub fn frobenius_number(&self) -> Result<i64, SemigroupError> {
        if !self.is_numerical() {
            return Err(SemigroupError::NotNumerical);
        }
        let ap = self.apery().ok_or(SemigroupError::Overflow)?;
        Ok(ap.table.iter().max().expect("nonempty") - ap.modulus)
    }

    /// Whether `a` is an `N`-combination of the generators.
    pub fn membership(&self, a: &[i64]) -> Result<bool, SemigroupError> {
        self.check_vector(a)?;
        if a.iter().any(|&x| x < 0) {
            return Ok(false);
        }
        if a.iter().all(|&x| x == 0) {
            return Ok(true);
        }
        if let Some(ap) = self.apery() {
            return Ok(ap.contains(a[0]));
        }
        self.search(a)
    }

    /// Only generators on the smallest face containing `a` can occur. With
    /// cone data the decision is exact and bounded; otherwise a depth-first
    /// search prunes remainders already shown to fail.
    fn search(&self, a: &[i64]) -> Result<bool, SemigroupError> {
        let cone = self.cone().ok();
        let gens: Vec<&Vec<i64>> = match &cone {
            Some(c) => {
                if !c.contains(a)? {
                    return Ok(false);
                }
                let face = c.face_of(a)?;
                let mut on = Vec::new();
                for g in &self.generators {
                    if c.on_face(&face, g)? {
                        on.push(g);
                    }
                }
                on
            }
            None => self.generators.iter().collect(),
        };
        let owned: Vec<Vec<i64>> = gens.iter().map(|g| (*g).clone()).collect();
        let lattice = Lattice::spanned_by(self.n, &owned)?;
        if owned.is_empty() || !lattice.contains(a)? {
            return Ok(false);
        }
        if let Some(c) = &cone {
            let extremal = |g: &[i64]| -> Result<bool, SemigroupError> {
                let face = c.face_of(g)?;
                for h in &owned {
                    if c.on_face(&face, h)? && !exact::parallel(g, h) {
                        return Ok(false);
                    }
                }
                Ok(true)
            };
            if let Some(v) = exact::decide(&owned, lattice.rank(), a, extremal, self.membership_budget)? {
                return Ok(v);
            }
        }
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut stack = vec![a.to_vec()];
        seen.insert(a.to_vec());
        while let Some(b) = stack.pop() {
            if b.iter().all(|&x| x == 0) {
                return Ok(true);
            }
            // children furthest from the boundary are tried first: holes sit
            // near the faces, so deep points almost always decompose
            let mut children = Vec::new();
            for g in &gens {
                if g.iter().zip(&b).any(|(x, y)| x > y) {
                    continue;
                }
                let rest = sub(&b, g)?;
                if seen.contains(&rest) {
                    continue;
                }
                let depth = match &cone {
                    Some(c) => {
                        if !c.contains(&rest)? {
                            continue;
                        }
                        c.depth(&rest)?
                    }
                    None => 0,
                };
                if seen.len() >= self.membership_budget {
                    return Err(SemigroupError::BudgetExhausted(self.membership_budget));
                }
                seen.insert(rest.clone());
                children.push((depth, rest));
            }
            children.sort_by_key(|(d, _)| *d);
            stack.extend(children.into_iter().map(|(_, r)| r));
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn pinched() -> AffineSemigroup {
        AffineSemigroup::new(3, vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 0, 2]]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let a = AffineSemigroup::numerical(&[2, 3]).unwrap();
        assert!(!a.membership(&[1]).unwrap());
        assert!(a.membership(&[5]).unwrap());
        assert!(!pinched().membership(&[0, 1, 1]).unwrap());
        assert!(pinched().membership(&[2, 1, 1]).unwrap());
        assert!(pinched().membership(&[0, 0, 0]).unwrap());
        assert!(pinched().membership(&[0, 64, 64]).unwrap());
    }

    #[test]
    fn numerical_helpers() {
        let a = AffineSemigroup::numerical(&[3, 5]).unwrap();
        assert_eq!(a.frobenius_number().unwrap(), 7);
        assert_eq!(AffineSemigroup::numerical(&[1]).unwrap().frobenius_number().unwrap(), -1);
        let even = AffineSemigroup::numerical(&[4, 6]).unwrap();
        assert!(!even.is_numerical());
        assert!(even.membership(&[10]).unwrap());
        assert!(!even.membership(&[2]).unwrap());
        assert!(!even.membership(&[7]).unwrap());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(AffineSemigroup::new(2, vec![]).unwrap_err(), SemigroupError::Empty);
        assert!(matches!(AffineSemigroup::new(2, vec![vec![0, 0]]), Err(SemigroupError::ZeroGenerator(_))));
        assert!(matches!(AffineSemigroup::new(2, vec![vec![1, -1]]), Err(SemigroupError::NegativeEntry(_))));
        assert_eq!(AffineSemigroup::numerical(&[2, 3, 2]).unwrap().generators().len(), 2);
    }

    #[test]
    fn budget_is_reported() {
        let a = pinched().with_membership_budget(1);
        assert_eq!(a.membership(&[4, 3, 3]), Err(SemigroupError::BudgetExhausted(1)));
        assert_eq!(pinched().membership(&[4, 3, 3]), Ok(true));
        // the face lattice rules this out before any search
        assert_eq!(a.membership(&[0, 41, 41]), Ok(false));
    }
}
