use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::linalg::Echelon;
use super::poly::{monomial_count, HomogPoly, Monomial};
use super::GradedError;
use crate::ffield::{Embedding, FieldDescriptor, FieldError, Repr};

/// One homogeneous slice `[R]_d` of a graded quotient.
///
/// `basis` holds the standard monomials of degree `d` under graded
/// reverse-lex order (largest first). `var_mult[i][b]` is the coordinate
/// vector of `x_i · basis_{d-1}[b]` in this slice, which is all that is
/// needed to take normal forms of anything of degree `d`.
#[derive(Debug)]
pub struct DegreeSlice {
    degree: u32,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    ideal_rank: u128,
    var_mult: Vec<Vec<Vec<Repr>>>,
}

impl DegreeSlice {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rank of the degree-`d` part of the defining ideal.
    pub fn ideal_rank(&self) -> u128 {
        self.ideal_rank
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Where the Hilbert function settles: `HF(d) = value` for every `d` in
/// `[index, index + window]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Stabilization {
    pub index: u32,
    pub value: usize,
    pub window: u32,
}

/// The standard-graded algebra `k[x_1..x_n]/I` with `I` generated by
/// homogeneous relations.
pub struct GradedQuotient {
    field: FieldDescriptor,
    vars: Vec<String>,
    relations: Vec<HomogPoly>,
    slices: RwLock<Vec<Arc<DegreeSlice>>>,
    stabilization: OnceLock<Stabilization>,
    hf_cap: Option<u32>,
}

impl Clone for GradedQuotient {
    fn clone(&self) -> Self {
        let slices = self.slices.read().expect("slice cache poisoned").clone();
        let stabilization = OnceLock::new();
        if let Some(s) = self.stabilization.get() {
            let _ = stabilization.set(*s);
        }
        GradedQuotient {
            field: self.field.clone(),
            vars: self.vars.clone(),
            relations: self.relations.clone(),
            slices: RwLock::new(slices),
            stabilization,
            hf_cap: self.hf_cap,
        }
    }
}

impl std::fmt::Debug for GradedQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl GradedQuotient {
    pub fn new(field: &FieldDescriptor, vars: Vec<String>, relations: Vec<HomogPoly>) -> Result<Self, GradedError> {
        if vars.is_empty() {
            return Err(GradedError::VariableCountMismatch);
        }
        for r in &relations {
            if r.field() != field {
                return Err(GradedError::Field(FieldError::FieldMismatch));
            }
            if r.nvars() != vars.len() {
                return Err(GradedError::VariableCountMismatch);
            }
        }
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(GradedQuotient {
            field: field.clone(),
            vars,
            relations,
            slices: RwLock::new(Vec::new()),
            stabilization: OnceLock::new(),
            hf_cap: None,
        })
    }

    /// Parses relations written in the shared grammar.
    pub fn parse(field: &FieldDescriptor, vars: &[&str], relations: &[&str]) -> Result<Self, GradedError> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = relations.iter().map(|r| HomogPoly::parse(field, &vars, r)).collect::<Result<Vec<_>, _>>()?;
        Self::new(field, vars, rels)
    }

    /// Overrides the degree searched by [`GradedQuotient::multiplicity`].
    pub fn with_hf_cap(mut self, cap: u32) -> Self {
        self.hf_cap = Some(cap);
        self
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn relations(&self) -> &[HomogPoly] {
        &self.relations
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations.iter().map(|r| r.degree()).max().unwrap_or(0)
    }

    pub fn describe(&self) -> String {
        let rels: Vec<String> = self.relations.iter().map(|r| r.format(&self.vars)).collect();
        format!("{}[{}]/({})", self.field, self.vars.join(","), rels.join(", "))
    }

    /// The slice of degree `d`, computing and caching all lower slices first.
    pub fn slice(&self, d: u32) -> Arc<DegreeSlice> {
        {
            let cache = self.slices.read().expect("slice cache poisoned");
            if let Some(s) = cache.get(d as usize) {
                return s.clone();
            }
        }
        let mut cache = self.slices.write().expect("slice cache poisoned");
        while cache.len() <= d as usize {
            let next = self.build_slice(&cache);
            cache.push(Arc::new(next));
        }
        cache[d as usize].clone()
    }

    /// Standard-monomial basis of `[R]_d` and the rank of `I_d`.
    pub fn degree_basis(&self, d: u32) -> (Vec<Monomial>, u128) {
        let s = self.slice(d);
        (s.basis.clone(), s.ideal_rank)
    }

    pub fn hilbert_function(&self, d: u32) -> usize {
        self.slice(d).dim()
    }

    fn build_slice(&self, lower: &[Arc<DegreeSlice>]) -> DegreeSlice {
        let n = self.nvars();
        let k = &self.field;
        let d = lower.len() as u32;
        if d == 0 {
            let unit = self.relations.iter().any(|r| r.degree() == 0);
            let basis = if unit { Vec::new() } else { vec![Monomial::one(n)] };
            let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            return DegreeSlice { degree: 0, ideal_rank: 1 - basis.len() as u128, basis, index, var_mult: Vec::new() };
        }
        let prev = &lower[d as usize - 1];
        // columns are pairs (i, b) standing for x_i · prev.basis[b]
        let mut columns: Vec<(Monomial, usize, usize)> = Vec::with_capacity(n * prev.dim());
        for i in 0..n {
            for (b, m) in prev.basis.iter().enumerate() {
                columns.push((m.times_var(i), i, b));
            }
        }
        columns.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut pos = vec![vec![0usize; prev.dim()]; n];
        for (c, (_, i, b)) in columns.iter().enumerate() {
            pos[*i][*b] = c;
        }
        let ncols = columns.len();
        let mut ech = Echelon::new(ncols);

        // x_i ⊗ x_j·m − x_j ⊗ x_i·m for m in the basis two degrees down
        if d >= 2 {
            for b2 in 0..lower[d as usize - 2].dim() {
                for i in 0..n {
                    for j in i + 1..n {
                        let mut row = vec![Repr::ZERO; ncols];
                        for (b, &c) in prev.var_mult[j][b2].iter().enumerate() {
                            if !c.is_zero() {
                                row[pos[i][b]] = k.add(row[pos[i][b]], c);
                            }
                        }
                        for (b, &c) in prev.var_mult[i][b2].iter().enumerate() {
                            if !c.is_zero() {
                                row[pos[j][b]] = k.sub(row[pos[j][b]], c);
                            }
                        }
                        ech.insert(k, row);
                    }
                }
            }
        }
        // relations of this degree, lifted through the previous slice
        for g in self.relations.iter().filter(|g| g.degree() == d) {
            let mut row = vec![Repr::ZERO; ncols];
            for (u, &c) in g.terms() {
                let i = u.exponents().iter().position(|&e| e > 0).expect("positive degree");
                let nf = normal_form_monomial(k, lower, &u.div_var(i).expect("divisible"));
                for (b, &v) in nf.iter().enumerate() {
                    if !v.is_zero() {
                        row[pos[i][b]] = k.add(row[pos[i][b]], k.mul(c, v));
                    }
                }
            }
            ech.insert(k, row);
        }

        // the non-pivot columns are the last representative of each
        // standard monomial
        let mut is_pivot = vec![false; ncols];
        for &p in ech.pivots() {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        let mut col_to_basis = vec![usize::MAX; ncols];
        for (c, (m, _, _)) in columns.iter().enumerate() {
            if !is_pivot[c] {
                col_to_basis[c] = basis.len();
                basis.push(m.clone());
            }
        }
        let dim = basis.len();
        let mut var_mult = vec![vec![Vec::new(); prev.dim()]; n];
        for (i, per_var) in var_mult.iter_mut().enumerate() {
            for (b, slot) in per_var.iter_mut().enumerate() {
                let c = pos[i][b];
                let mut v = vec![Repr::ZERO; dim];
                match ech.pivot_row(c) {
                    None => v[col_to_basis[c]] = k.one(),
                    Some(row) => {
                        for (cc, &x) in row.iter().enumerate() {
                            if !x.is_zero() && cc != c {
                                v[col_to_basis[cc]] = k.neg(x);
                            }
                        }
                    }
                }
                *slot = v;
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let ideal_rank = monomial_count(n, d) - dim as u128;
        DegreeSlice { degree: d, basis, index, ideal_rank, var_mult }
    }

    /// Coordinates of a monomial in the standard basis of its degree.
    pub fn normal_form_monomial(&self, m: &Monomial) -> Vec<Repr> {
        self.slice(m.degree());
        let cache = self.slices.read().expect("slice cache poisoned");
        normal_form_monomial(&self.field, &cache, m)
    }

    /// Coordinates of a homogeneous polynomial in the standard basis of its
    /// degree.
    pub fn normal_form(&self, f: &HomogPoly) -> Result<Vec<Repr>, GradedError> {
        self.check_poly(f)?;
        let k = &self.field;
        let s = self.slice(f.degree());
        let cache = self.slices.read().expect("slice cache poisoned");
        let mut out = vec![Repr::ZERO; s.dim()];
        for (m, &c) in f.terms() {
            let nf = normal_form_monomial(k, &cache, m);
            for (o, v) in out.iter_mut().zip(nf) {
                *o = k.add(*o, k.mul(c, v));
            }
        }
        Ok(out)
    }

    pub(crate) fn check_poly(&self, f: &HomogPoly) -> Result<(), GradedError> {
        if f.field() != &self.field {
            return Err(GradedError::Field(FieldError::FieldMismatch));
        }
        if f.nvars() != self.nvars() {
            return Err(GradedError::VariableCountMismatch);
        }
        Ok(())
    }

    /// Multiplies a degree-`d` vector by `x_i`.
    pub(crate) fn mul_var(&self, v: &[Repr], d: u32, i: usize) -> Vec<Repr> {
        let next = self.slice(d + 1);
        mul_var(&self.field, &next, v, i)
    }

    /// Multiplies a degree-`d` vector by a linear form.
    pub(crate) fn mul_linear(&self, v: &[Repr], d: u32, x: &HomogPoly) -> Vec<Repr> {
        let k = &self.field;
        let next = self.slice(d + 1);
        let mut out = vec![Repr::ZERO; next.dim()];
        for (m, &c) in x.terms() {
            let i = m.exponents().iter().position(|&e| e == 1).expect("linear form");
            for (o, w) in out.iter_mut().zip(mul_var(k, &next, v, i)) {
                *o = k.add(*o, k.mul(c, w));
            }
        }
        out
    }

    /// Whether `f ∈ J·R`, decided in degree `deg f` by building the slices
    /// of `J·R` upward from the lowest generator degree.
    pub fn ideal_membership(&self, f: &HomogPoly, ideal: &[HomogPoly]) -> Result<bool, GradedError> {
        self.check_poly(f)?;
        for g in ideal {
            self.check_poly(g)?;
        }
        if f.is_zero() {
            return Ok(true);
        }
        let target = f.degree();
        let nf = self.normal_form(f)?;
        if nf.iter().all(|c| c.is_zero()) {
            return Ok(true);
        }
        let gens: Vec<&HomogPoly> = ideal.iter().filter(|g| !g.is_zero() && g.degree() <= target).collect();
        let Some(start) = gens.iter().map(|g| g.degree()).min() else { return Ok(false) };
        let k = &self.field;
        let mut span = Echelon::new(self.slice(start).dim());
        for d in start..=target {
            if d > start {
                let mut next = Echelon::new(self.slice(d).dim());
                for row in span.rows() {
                    for i in 0..self.nvars() {
                        next.insert(k, self.mul_var(row, d - 1, i));
                    }
                }
                span = next;
            }
            for g in gens.iter().filter(|g| g.degree() == d) {
                span.insert(k, self.normal_form(g)?);
            }
        }
        Ok(span.contains(k, &nf))
    }

    /// The same presentation over the degree-`s` extension of the field.
    pub fn extend_scalars(&self, s: usize) -> Result<(GradedQuotient, Embedding), GradedError> {
        let (big, emb) = self.field.extend(s)?;
        let rels = self.relations.iter().map(|r| r.map_coefficients(&emb)).collect();
        let mut ring = GradedQuotient::new(&big, self.vars.clone(), rels)?;
        ring.hf_cap = self.hf_cap;
        Ok((ring, emb))
    }

    /// Smallest `N` at which the Hilbert function is constant over a
    /// window of `n + max relation degree` further degrees, and that value.
    pub fn multiplicity(&self) -> Result<Stabilization, GradedError> {
        if let Some(s) = self.stabilization.get() {
            return Ok(*s);
        }
        let n = self.nvars() as u32;
        let maxdeg = self.max_relation_degree().max(1);
        let window = n + maxdeg;
        let cap = self.hf_cap.unwrap_or(4 * maxdeg * n).max(window);
        let hf: Vec<usize> = (0..=cap).map(|d| self.hilbert_function(d)).collect();
        for start in 0..=(cap - window) {
            let value = hf[start as usize];
            if value > 0 && hf[start as usize..=(start + window) as usize].iter().all(|&h| h == value) {
                let st = Stabilization { index: start, value, window };
                let _ = self.stabilization.set(st);
                return Ok(st);
            }
        }
        Err(GradedError::NotOneDimensional { cap })
    }
}

fn mul_var(k: &FieldDescriptor, next: &DegreeSlice, v: &[Repr], i: usize) -> Vec<Repr> {
    let mut out = vec![Repr::ZERO; next.dim()];
    for (b, &c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (o, &w) in out.iter_mut().zip(&next.var_mult[i][b]) {
            if !w.is_zero() {
                *o = k.add(*o, k.mul(c, w));
            }
        }
    }
    out
}

/// Walks from `1` in degree 0 through the cached multiplication tables.
fn normal_form_monomial(k: &FieldDescriptor, slices: &[Arc<DegreeSlice>], m: &Monomial) -> Vec<Repr> {
    let mut v: Vec<Repr> = if slices[0].dim() == 0 { Vec::new() } else { vec![k.one()] };
    let mut d = 0usize;
    for (i, &e) in m.exponents().iter().enumerate() {
        for _ in 0..e {
            d += 1;
            v = mul_var(k, &slices[d], &v, i);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str], rels: &[&str]) -> GradedQuotient {
        GradedQuotient::parse(&FieldDescriptor::prime(p).unwrap(), vars, rels).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn axes(p: u64, d: usize) -> GradedQuotient {
        let vars: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
        let mut rels = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                rels.push(format!("{}*{}", vars[i], vars[j]));
            }
        }
        let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let r: Vec<&str> = rels.iter().map(|s| s.as_str()).collect();
        ring(p, &v, &r)
    }

    #[test]
    fn degree_basis_examples() {
        let r = ring(3, &["x", "y"], &["x^2+y^2"]);
        assert_eq!(r.degree_basis(2), (vec![mono(&[1, 1]), mono(&[0, 2])], 1));
        assert_eq!(r.degree_basis(0), (vec![mono(&[0, 0])], 0));
        let a = ring(2, &["x", "y", "z"], &["xy", "xz", "yz"]);
        assert_eq!(a.degree_basis(2), (vec![mono(&[2, 0, 0]), mono(&[0, 2, 0]), mono(&[0, 0, 2])], 3));
    }

    #[test]
    fn hilbert_function_examples() {
        let r = ring(3, &["x", "y"], &["x^2+y^2"]);
        assert_eq!((0..4).map(|d| r.hilbert_function(d)).collect::<Vec<_>>(), vec![1, 2, 2, 2]);
        let line = ring(5, &["x"], &[]);
        assert!((0..10).all(|d| line.hilbert_function(d) == 1));
        let a = axes(2, 3);
        assert!((1..10).all(|d| a.hilbert_function(d) == 3));
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(ring(3, &["x", "y"], &["x^2+y^2"]).multiplicity().unwrap().value, 2);
        assert_eq!(axes(2, 4).multiplicity().unwrap().value, 4);
        let st = ring(5, &["x"], &[]).multiplicity().unwrap();
        assert_eq!((st.value, st.index), (1, 0));
    }

    #[test]
    fn multiplicity_rejects_other_dimensions() {
        // the plane is two-dimensional, an Artinian ring has HF eventually 0
        assert!(matches!(ring(3, &["x", "y"], &[]).multiplicity(), Err(GradedError::NotOneDimensional { .. })));
        assert!(matches!(ring(3, &["x", "y"], &["x^2", "y^2"]).multiplicity(), Err(GradedError::NotOneDimensional { .. })));
    }

    #[test]
    fn ideal_membership_examples() {
        let k = FieldDescriptor::prime(3).unwrap();
        let r = ring(3, &["x", "y"], &["x^2+y^2"]);
        let v = r.vars().to_vec();
        let p = |s: &str| HomogPoly::parse(&k, &v, s).unwrap();
        assert!(r.ideal_membership(&p("x^3"), &[p("y^2")]).unwrap());
        assert!(r.ideal_membership(&HomogPoly::zero(&k, 2, 4), &[p("y^2")]).unwrap());
        assert!(!r.ideal_membership(&p("xy"), &[p("y^2")]).unwrap());
        let other = FieldDescriptor::prime(5).unwrap();
        let q = HomogPoly::parse(&other, &v, "x").unwrap();
        assert!(matches!(r.ideal_membership(&q, &[p("y")]), Err(GradedError::Field(FieldError::FieldMismatch))));
    }

    #[test]
    fn normal_forms_respect_relations() {
        let r = ring(3, &["x", "y"], &["x^2+y^2"]);
        // x^2 = -y^2
        let nf = r.normal_form_monomial(&mono(&[2, 0]));
        let k = r.field().clone();
        assert_eq!(nf, vec![Repr::ZERO, k.from_i64(-1)]);
        // x^3 = -x y^2, and y^2 · x = x y^2
        let nf3 = r.normal_form_monomial(&mono(&[3, 0]));
        let nf21 = r.normal_form_monomial(&mono(&[1, 2]));
        assert_eq!(nf3, nf21.iter().map(|&c| k.neg(c)).collect::<Vec<_>>());
    }

    #[test]
    fn slice_invariant_holds() {
        let r = ring(7, &["x", "y", "z"], &["x^2+yz", "xy-z^2"]);
        for d in 0..8 {
            let s = r.slice(d);
            assert_eq!(s.dim() as u128 + s.ideal_rank(), monomial_count(3, d));
        }
    }

    #[test]
    fn unit_relation_kills_everything() {
        let k = FieldDescriptor::prime(3).unwrap();
        let one = HomogPoly::monomial(&k, Monomial::one(2), k.one());
        let r = GradedQuotient::new(&k, vec!["x".into(), "y".into()], vec![one]).unwrap();
        assert_eq!(r.hilbert_function(0), 0);
        assert_eq!(r.hilbert_function(3), 0);
    }
}
