//! Branch counts for two families where they can be read off directly:
//! plane curves `k[x,y]/(f)` and the coordinate axes
//! `k[x_1..x_d]/(x_i x_j : i < j)`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{distinct_root_count, squarefree_decomposition, FieldDescriptor, Repr};
use crate::graded::{branch_count, BranchOptions, GradedError, GradedQuotient, HomogPoly, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("form is not squarefree")]
    NotSquarefree,
    #[error("expected a binary form of positive degree")]
    NotACurve,
}

/// A squarefree binary form.
#[derive(Debug, Clone)]
pub struct HypersurfaceCurve {
    f: HomogPoly,
}

impl HypersurfaceCurve {
    pub fn new(f: HomogPoly) -> Result<Self, OracleError> {
        if f.nvars() != 2 || f.degree() == 0 || f.is_zero() {
            return Err(OracleError::NotACurve);
        }
        for one in [0, 1] {
            let u = f.dehomogenize(one);
            if u.degree().unwrap_or(0) > 0 {
                let parts = squarefree_decomposition(&u).expect("nonzero");
                if parts.iter().any(|(_, m)| *m > 1) {
                    return Err(OracleError::NotSquarefree);
                }
            }
        }
        Ok(HypersurfaceCurve { f })
    }

    pub fn form(&self) -> &HomogPoly {
        &self.f
    }

    /// Points of `V(f)` over the algebraic closure: roots of `f(1,t)`, plus
    /// the point at `x = 0` when `x` divides `f`.
    pub fn branches(&self) -> usize {
        let affine = self.f.dehomogenize(0);
        let roots = if affine.degree().unwrap_or(0) == 0 { 0 } else { distinct_root_count(&affine).expect("nonzero") };
        let top = Monomial::new(vec![0, self.f.degree()]);
        roots + usize::from(self.f.coefficient(&top).is_zero())
    }
}

pub fn hypersurface_branches(f: &HomogPoly) -> Result<usize, OracleError> {
    Ok(HypersurfaceCurve::new(f.clone())?.branches())
}

/// Branches of the `d` coordinate axes in `d`-space.
pub fn axes_branches(d: usize) -> usize {
    d
}

fn is_axes(r: &GradedQuotient) -> bool {
    let n = r.nvars();
    let rels = r.relations();
    if n == 1 {
        return rels.is_empty();
    }
    let mut got: Vec<Monomial> = Vec::new();
    for g in rels {
        if g.term_count() != 1 {
            return false;
        }
        got.push(g.terms().next().expect("one term").0.clone());
    }
    got.sort();
    got.dedup();
    let mut want = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            want.push(Monomial::var(n, i).mul(&Monomial::var(n, j)));
        }
    }
    want.sort();
    got == want
}

/// The oracle's branch count when the presentation belongs to one of the two
/// families.
pub fn oracle_branches(r: &GradedQuotient) -> Option<usize> {
    if r.nvars() == 2 && r.relations().len() == 1 {
        if let Ok(b) = hypersurface_branches(&r.relations()[0]) {
            return Some(b);
        }
    }
    is_axes(r).then(|| axes_branches(r.nvars()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Crosscheck {
    Match { branches: usize },
    Mismatch { formula: usize, oracle: usize },
    NoOracle,
}

/// Runs the branch formula and compares it with the oracle.
pub fn crosscheck(r: &GradedQuotient) -> Result<Crosscheck, GradedError> {
    let Some(oracle) = oracle_branches(r) else { return Ok(Crosscheck::NoOracle) };
    let rep = branch_count(r, &BranchOptions { with_oracle: false, ..BranchOptions::default() })?;
    Ok(if rep.branches_formula == oracle {
        Crosscheck::Match { branches: oracle }
    } else {
        Crosscheck::Mismatch { formula: rep.branches_formula, oracle }
    })
}

/// Uniformly random coefficients, resampled until the binary form is
/// squarefree and nonzero.
pub fn random_squarefree_binary_form<R: Rng + ?Sized>(field: &FieldDescriptor, degree: u32, rng: &mut R) -> HomogPoly {
    assert!(degree >= 1, "degree must be positive");
    let q = field.order().expect("enumerable field");
    loop {
        let terms: Vec<(Monomial, Repr)> = (0..=degree)
            .map(|i| (Monomial::new(vec![degree - i, i]), field.element_from_index(rng.gen_range(0..q))))
            .collect();
        let f = HomogPoly::from_terms(field, 2, degree, terms).expect("homogeneous");
        if !f.is_zero() && HypersurfaceCurve::new(f.clone()).is_ok() {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn form(p: u64, s: &str) -> HomogPoly {
        let vars = vec!["x".to_string(), "y".to_string()];
        HomogPoly::parse(&FieldDescriptor::prime(p).unwrap(), &vars, s).unwrap()
    }

    fn ring(p: u64, vars: &[&str], rels: &[&str]) -> GradedQuotient {
        GradedQuotient::parse(&FieldDescriptor::prime(p).unwrap(), vars, rels).unwrap()
    }

    #[test]
    fn hypersurface_examples() {
        assert_eq!(hypersurface_branches(&form(3, "x^2+y^2")), Ok(2));
        assert_eq!(hypersurface_branches(&form(5, "xy")), Ok(2));
        assert_eq!(hypersurface_branches(&form(7, "x^4+y^4")), Ok(4));
        assert_eq!(hypersurface_branches(&form(5, "x")), Ok(1));
        assert_eq!(hypersurface_branches(&form(5, "y")), Ok(1));
        assert_eq!(hypersurface_branches(&form(5, "x^2y")), Err(OracleError::NotSquarefree));
        assert_eq!(hypersurface_branches(&form(2, "x^2+y^2")), Err(OracleError::NotSquarefree));
    }

    #[test]
    fn axes_examples() {
        assert_eq!([1, 3, 7].map(axes_branches), [1, 3, 7]);
    }

    #[test]
    fn crosscheck_examples() {
        assert_eq!(crosscheck(&ring(3, &["x", "y"], &["x^2+y^2"])), Ok(Crosscheck::Match { branches: 2 }));
        assert_eq!(crosscheck(&ring(2, &["x", "y", "z"], &["xy", "xz", "yz"])), Ok(Crosscheck::Match { branches: 3 }));
        assert_eq!(crosscheck(&ring(5, &["x", "y", "z"], &["x^2+yz"])), Ok(Crosscheck::NoOracle));
        assert_eq!(oracle_branches(&ring(5, &["x"], &[])), Some(1));
    }

    #[test]
    fn random_forms_are_squarefree() {
        let k = FieldDescriptor::prime(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in 1..=6 {
            let f = random_squarefree_binary_form(&k, d, &mut rng);
            assert_eq!(f.degree(), d);
            assert!(HypersurfaceCurve::new(f).is_ok());
        }
    }
}
