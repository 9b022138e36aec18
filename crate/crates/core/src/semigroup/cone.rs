//! Facets of the rational cone spanned by finitely many integer vectors.
//!
//! Each candidate normal is the generalized cross product of `r - 1`
//! linearly independent generators together with a basis of the equations
//! of their span, where `r` is the dimension of the cone. Candidates that
//! are nonnegative on every generator, after orientation, are facets.

use super::lattice::{gcd, integer_kernel, IntMatrix};
use super::SemigroupError;

/// Largest ambient dimension handled by [`Cone::new`].
pub const MAX_CONE_DIMENSION: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Cone {
    dim: usize,
    /// `h·v = 0` on the span of the cone.
    equations: Vec<Vec<i64>>,
    /// `h·v >= 0`, primitive and sorted.
    facets: Vec<Vec<i64>>,
}

fn dot(a: &[i64], b: &[i64]) -> Result<i64, SemigroupError> {
    let mut acc = 0i64;
    for (&x, &y) in a.iter().zip(b) {
        acc = x.checked_mul(y).and_then(|t| acc.checked_add(t)).ok_or(SemigroupError::Overflow)?;
    }
    Ok(acc)
}

fn primitive(v: &mut [i64]) {
    let g = v.iter().fold(0u64, |g, &x| gcd(g, x.unsigned_abs()));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g as i64;
        }
    }
}

/// Vector orthogonal to `n - 1` vectors in `Z^n`, by cofactor expansion.
fn cross(vectors: &[Vec<i64>], n: usize) -> Result<Vec<i64>, SemigroupError> {
    (0..n)
        .map(|i| {
            let minor: Vec<Vec<i64>> =
                vectors.iter().map(|v| v.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect()).collect();
            let d = IntMatrix::from_rows(n - 1, minor).det()?;
            Ok(if i % 2 == 0 { d } else { d.checked_neg().ok_or(SemigroupError::Overflow)? })
        })
        .collect()
}

fn combinations(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn go(start: usize, k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(i + 1, k, r, cur, out);
            cur.pop();
        }
    }
    go(0, k, r, &mut cur, &mut out);
    out
}

impl Cone {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Result<Self, SemigroupError> {
        if dim > MAX_CONE_DIMENSION {
            return Err(SemigroupError::DimensionCapExceeded { dim, cap: MAX_CONE_DIMENSION });
        }
        let m = IntMatrix::from_rows(dim, generators.to_vec());
        let equations = integer_kernel(&m)?;
        let r = dim - equations.len();
        let mut facets: Vec<Vec<i64>> = Vec::new();
        for subset in combinations(generators.len(), r.saturating_sub(1)) {
            let mut rows: Vec<Vec<i64>> = subset.iter().map(|&i| generators[i].clone()).collect();
            rows.extend(equations.iter().cloned());
            let mut h = cross(&rows, dim)?;
            if h.iter().all(|&x| x == 0) {
                continue;
            }
            let values = generators.iter().map(|g| dot(&h, g)).collect::<Result<Vec<_>, _>>()?;
            if values.iter().all(|&v| v <= 0) {
                for x in &mut h {
                    *x = -*x;
                }
            } else if values.iter().any(|&v| v < 0) {
                continue;
            }
            primitive(&mut h);
            if !facets.contains(&h) {
                facets.push(h);
            }
        }
        facets.sort();
        Ok(Cone { dim, equations, facets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn equations(&self) -> &[Vec<i64>] {
        &self.equations
    }

    pub fn facets(&self) -> &[Vec<i64>] {
        &self.facets
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool, SemigroupError> {
        for e in &self.equations {
            if dot(e, v)? != 0 {
                return Ok(false);
            }
        }
        for f in &self.facets {
            if dot(f, v)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices of the facets vanishing at `v`; they cut out the smallest
    /// face containing `v`.
    pub fn face_of(&self, v: &[i64]) -> Result<Vec<usize>, SemigroupError> {
        let mut out = Vec::new();
        for (i, f) in self.facets.iter().enumerate() {
            if dot(f, v)? == 0 {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Smallest facet value at `v`; zero on the boundary.
    pub fn depth(&self, v: &[i64]) -> Result<i64, SemigroupError> {
        let mut out = i64::MAX;
        for f in &self.facets {
            out = out.min(dot(f, v)?);
        }
        Ok(if self.facets.is_empty() { 0 } else { out })
    }

    pub fn on_face(&self, face: &[usize], v: &[i64]) -> Result<bool, SemigroupError> {
        for &i in face {
            if dot(&self.facets[i], v)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
