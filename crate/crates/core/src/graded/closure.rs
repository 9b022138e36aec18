use serde::{Deserialize, Serialize};

use super::linalg::Echelon;
use super::poly::{HomogPoly, Monomial};
use super::quotient::GradedQuotient;
use super::GradedError;
use crate::ffield::{squarefree_decomposition, FieldDescriptor, Repr};

/// Default largest extension degree tried by [`find_linear_reduction`].
pub const DEFAULT_S_MAX: usize = 3;
/// Default bound on the total degree reached by Frobenius-closure probes.
pub const DEFAULT_DEGREE_CAP: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "e")]
pub enum ClosureMembership {
    /// Smallest `e` with `f^(p^e) ∈ J^[p^e]`.
    In(u32),
    NotInUpTo(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reducedness {
    Verified,
    Unverified,
    NotReduced,
}

/// A linear form `x` with `m^(d+1) = x·m^d` for all `d >= index`.
#[derive(Debug, Clone)]
pub struct LinearReduction {
    pub form: HomogPoly,
    /// Degree of the scalar extension `form` lives over; 1 for the base field.
    pub extension_degree: usize,
    /// The ring over the field `form` lives over.
    pub ring: GradedQuotient,
    pub index: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchOptions {
    pub s_max: usize,
    /// Extend scalars by this degree before anything else.
    pub forced_extension: Option<usize>,
    pub with_oracle: bool,
}

impl Default for BranchOptions {
    fn default() -> Self {
        BranchOptions { s_max: DEFAULT_S_MAX, forced_extension: None, with_oracle: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    pub ring: String,
    pub field: String,
    pub dim_quotient: usize,
    pub branches_formula: usize,
    pub branches_multiplicity: usize,
    pub stabilization_index: u32,
    pub reduction: String,
    pub reduction_index: u32,
    pub extension_degree: usize,
    pub n_used: u32,
    pub oracle_branches: Option<usize>,
    pub consistent: bool,
    pub reducedness: Reducedness,
}

/// One standard monomial of degree `n`, with its position relative to
/// `(x^n) + m^(n+1)` and to the Frobenius closure of `(x^n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceProbe {
    pub monomial: String,
    pub in_slice: bool,
    pub closure: ClosureMembership,
}

impl SliceProbe {
    pub fn agrees(&self) -> bool {
        self.in_slice == matches!(self.closure, ClosureMembership::In(_))
    }
}

fn check_linear(r: &GradedQuotient, x: &HomogPoly) -> Result<(), GradedError> {
    r.check_poly(x)?;
    if x.degree() != 1 || x.is_zero() {
        return Err(GradedError::NotLinearForm);
    }
    Ok(())
}

fn unit_vector(k: &FieldDescriptor, dim: usize, b: usize) -> Vec<Repr> {
    let mut v = vec![Repr::ZERO; dim];
    v[b] = k.one();
    v
}

fn onto(r: &GradedQuotient, x: &HomogPoly, d: u32) -> bool {
    let k = r.field();
    let (lo, hi) = (r.hilbert_function(d), r.hilbert_function(d + 1));
    if lo < hi {
        return false;
    }
    let mut ech = Echelon::new(hi);
    for b in 0..lo {
        ech.insert(k, r.mul_linear(&unit_vector(k, lo, b), d, x));
        if ech.rank() == hi {
            return true;
        }
    }
    ech.rank() == hi
}

/// Whether multiplication by `x` carries `[R]_d` onto `[R]_(d+1)` from some
/// degree on, and the first degree where it does. Surjectivity in one
/// degree propagates to every higher degree, so the search stops at the end
/// of the window where the Hilbert function was seen to be constant.
pub fn is_linear_reduction(r: &GradedQuotient, x: &HomogPoly) -> Result<(bool, u32), GradedError> {
    check_linear(r, x)?;
    let st = r.multiplicity()?;
    let top = st.index + st.window;
    for d in 0..=top {
        if onto(r, x, d) {
            return Ok((true, d));
        }
    }
    Ok((false, st.index))
}

/// Normalized nonzero coefficient vectors (first nonzero entry 1), by
/// height, the largest element index among the entries after the leading
/// one: all `0/1` forms come first, so sparse small forms are found early
/// even over large fields. Within one height the leading position runs
/// from the last variable down and the tail counts up, last entry fastest.
fn normalized_forms(k: &FieldDescriptor, n: usize) -> impl Iterator<Item = Vec<Repr>> + '_ {
    let q = k.order().unwrap_or(u64::MAX);
    (0..q).flat_map(move |h| {
        (0..n).rev().flat_map(move |lead| {
            let tail = n - lead - 1;
            let mut digits = vec![0u64; tail];
            let mut done = h > 0 && tail == 0;
            std::iter::from_fn(move || loop {
                if done {
                    return None;
                }
                let current = digits.clone();
                // odometer over 0..=h, last digit fastest
                done = true;
                for dgt in digits.iter_mut().rev() {
                    *dgt += 1;
                    if *dgt <= h {
                        done = false;
                        break;
                    }
                    *dgt = 0;
                }
                if current.iter().copied().max().unwrap_or(0) != h {
                    continue;
                }
                let mut v = vec![Repr::ZERO; n];
                v[lead] = k.one();
                for (slot, &dgt) in v[lead + 1..].iter_mut().zip(&current) {
                    *slot = k.element_from_index(dgt);
                }
                return Some(v);
            })
        })
    })
}

/// First linear form that is a reduction, trying every normalized form over
/// the base field and then over extensions of degree `2..=s_max` (skipping
/// forms already defined over the base field).
pub fn find_linear_reduction(r: &GradedQuotient, s_max: usize) -> Result<LinearReduction, GradedError> {
    let n = r.nvars();
    r.multiplicity()?;
    for coeffs in normalized_forms(r.field(), n) {
        let x = HomogPoly::linear_form(r.field(), &coeffs);
        if let (true, index) = is_linear_reduction(r, &x)? {
            return Ok(LinearReduction { form: x, extension_degree: 1, ring: r.clone(), index });
        }
    }
    let base_degree = r.field().degree() as u32;
    for s in 2..=s_max {
        let big = match r.extend_scalars(s) {
            Ok((big, _)) => big,
            Err(GradedError::Field(crate::ffield::FieldError::UnsupportedDegree(_))) => break,
            Err(e) => return Err(e),
        };
        let k = big.field().clone();
        for coeffs in normalized_forms(&k, n) {
            if coeffs.iter().all(|&c| k.frobenius_iter(c, base_degree) == c) {
                continue;
            }
            let x = HomogPoly::linear_form(&k, &coeffs);
            if let (true, index) = is_linear_reduction(&big, &x)? {
                return Ok(LinearReduction { form: x, extension_degree: s, ring: big, index });
            }
        }
    }
    Err(GradedError::NoReductionFound(s_max))
}

/// Generators raised to the `p^e`-th power.
pub fn frobenius_power(j: &[HomogPoly], e: u32) -> Vec<HomogPoly> {
    j.iter().map(|g| g.frobenius_power(e)).collect()
}

/// [`frobenius_closure_membership_capped`] with the default degree cap.
pub fn frobenius_closure_membership(
    r: &GradedQuotient,
    f: &HomogPoly,
    j: &[HomogPoly],
    e_max: u32,
) -> Result<ClosureMembership, GradedError> {
    frobenius_closure_membership_capped(r, f, j, e_max, DEFAULT_DEGREE_CAP)
}

/// Smallest `e <= e_max` with `f^(p^e) ∈ J^[p^e]·R`. Refuses to start when
/// `p^e_max · max(deg f, 1)` exceeds `cap`.
pub fn frobenius_closure_membership_capped(
    r: &GradedQuotient,
    f: &HomogPoly,
    j: &[HomogPoly],
    e_max: u32,
    cap: u64,
) -> Result<ClosureMembership, GradedError> {
    r.check_poly(f)?;
    for g in j {
        r.check_poly(g)?;
    }
    if f.is_zero() {
        return Ok(ClosureMembership::In(0));
    }
    let p = r.field().characteristic();
    let degree = p
        .checked_pow(e_max)
        .and_then(|q| q.checked_mul(u64::from(f.degree().max(1))))
        .unwrap_or(u64::MAX);
    if degree > cap {
        return Err(GradedError::DegreeCapExceeded { degree, cap });
    }
    let target = |e: u32| p.pow(e) * u64::from(f.degree());
    for e in 0..=e_max {
        let je: Vec<HomogPoly> = j
            .iter()
            .filter(|g| p.pow(e) * u64::from(g.degree()) <= target(e))
            .map(|g| g.frobenius_power(e))
            .collect();
        if r.ideal_membership(&f.frobenius_power(e), &je)? {
            return Ok(ClosureMembership::In(e));
        }
    }
    Ok(ClosureMembership::NotInUpTo(e_max))
}

/// `dim_k [R]_n / k·x^n`, the length of `m^n / ((x^n) + m^(n+1))`.
pub fn closure_quotient_dim(r: &GradedQuotient, x: &HomogPoly, n: u32) -> Result<usize, GradedError> {
    let (ok, index) = is_linear_reduction(r, x)?;
    if !ok {
        return Err(GradedError::NotAReduction);
    }
    if n < index {
        return Err(GradedError::BelowReductionIndex { n, index });
    }
    let mut v = r.normal_form_monomial(&Monomial::one(r.nvars()));
    for d in 0..n {
        v = r.mul_linear(&v, d, x);
    }
    if v.iter().all(|c| c.is_zero()) {
        return Err(GradedError::PowerVanishes { n });
    }
    Ok(r.hilbert_function(n) - 1)
}

/// Classifies every standard monomial of degree `n` twice: by the slice
/// computation (is it a multiple of `x^n` in `[R]_n`?) and by a direct
/// Frobenius-closure search with `e <= e_max`.
pub fn probe_power_closure(
    r: &GradedQuotient,
    x: &HomogPoly,
    n: u32,
    e_max: u32,
    cap: u64,
) -> Result<Vec<SliceProbe>, GradedError> {
    check_linear(r, x)?;
    let k = r.field();
    let xn = x.pow(n);
    let mut span = Echelon::new(r.hilbert_function(n));
    span.insert(k, r.normal_form(&xn)?);
    let mut out = Vec::new();
    for b in r.degree_basis(n).0 {
        let monomial = b.format(r.vars());
        let b = HomogPoly::monomial(k, b, k.one());
        let in_slice = span.contains(k, &r.normal_form(&b)?);
        let closure = frobenius_closure_membership_capped(r, &b, std::slice::from_ref(&xn), e_max, cap)?;
        out.push(SliceProbe { monomial, in_slice, closure });
    }
    Ok(out)
}

/// Partial reducedness check: polynomial rings, monomial ideals and single
/// binary forms are decided, anything else is left unverified.
pub fn reducedness(r: &GradedQuotient) -> Reducedness {
    let rels = r.relations();
    if rels.is_empty() || rels.iter().any(|g| g.degree() == 0) {
        return Reducedness::Verified;
    }
    if rels.iter().all(|g| g.term_count() == 1) {
        let mut monos: Vec<Monomial> = rels.iter().map(|g| g.terms().next().expect("one term").0.clone()).collect();
        monos.sort();
        monos.dedup();
        let minimal = monos.iter().filter(|m| !monos.iter().any(|o| o != *m && o.divides(m)));
        return if minimal.clone().all(|m| m.exponents().iter().all(|&e| e <= 1)) {
            Reducedness::Verified
        } else {
            Reducedness::NotReduced
        };
    }
    if r.nvars() == 2 && rels.len() == 1 {
        let f = &rels[0];
        let squarefree = [0, 1].iter().all(|&one| {
            let u = f.dehomogenize(one);
            u.degree().unwrap_or(0) == 0
                || squarefree_decomposition(&u).map(|parts| parts.iter().all(|(_, m)| *m == 1)).unwrap_or(false)
        });
        return if squarefree { Reducedness::Verified } else { Reducedness::NotReduced };
    }
    Reducedness::Unverified
}

/// Branch count `dim_k m^n/((x^n)+m^(n+1)) + 1` for a reduced
/// one-dimensional graded ring, compared against the multiplicity and,
/// where one applies, the structural oracle.
pub fn branch_count(r: &GradedQuotient, options: &BranchOptions) -> Result<BranchReport, GradedError> {
    let st = r.multiplicity()?;
    let (base, forced) = match options.forced_extension {
        Some(s) if s > 1 => (r.extend_scalars(s)?.0, s),
        _ => (r.clone(), 1),
    };
    let red = find_linear_reduction(&base, options.s_max)?;
    let n_used = st.index.max(red.index);
    let dim = closure_quotient_dim(&red.ring, &red.form, n_used)?;
    let branches = dim + 1;
    let oracle_branches = if options.with_oracle { crate::oracle::oracle_branches(r) } else { None };
    let consistent = branches == st.value && oracle_branches.is_none_or(|o| o == branches);
    Ok(BranchReport {
        ring: r.describe(),
        field: red.ring.field().to_string(),
        dim_quotient: dim,
        branches_formula: branches,
        branches_multiplicity: st.value,
        stabilization_index: st.index,
        reduction: red.form.format(r.vars()),
        reduction_index: red.index,
        extension_degree: forced * red.extension_degree,
        n_used,
        oracle_branches,
        consistent,
        reducedness: reducedness(r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str], rels: &[&str]) -> GradedQuotient {
        GradedQuotient::parse(&FieldDescriptor::prime(p).unwrap(), vars, rels).unwrap()
    }

    fn poly(r: &GradedQuotient, s: &str) -> HomogPoly {
        HomogPoly::parse(r.field(), r.vars(), s).unwrap()
    }

    fn axes(p: u64, d: usize) -> GradedQuotient {
        let vars: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
        let mut rels = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                rels.push(format!("{}{}", vars[i], vars[j]));
            }
        }
        let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let r: Vec<&str> = rels.iter().map(|s| s.as_str()).collect();
        ring(p, &v, &r)
    }

    #[test]
    fn linear_reduction_examples() {
        let r = ring(5, &["x", "y"], &["x^2+y^2"]);
        assert!(is_linear_reduction(&r, &poly(&r, "y")).unwrap().0);
        let a = axes(3, 2);
        assert!(!is_linear_reduction(&a, &poly(&a, "x1")).unwrap().0);
        let line = ring(3, &["x"], &[]);
        assert_eq!(is_linear_reduction(&line, &poly(&line, "x")).unwrap(), (true, 0));
        assert_eq!(is_linear_reduction(&line, &poly(&line, "x^2")), Err(GradedError::NotLinearForm));
    }

    #[test]
    fn find_reduction_examples() {
        let r = ring(3, &["x", "y"], &["x^2+y^2"]);
        let red = find_linear_reduction(&r, 3).unwrap();
        assert_eq!((red.form.format(r.vars()), red.extension_degree), ("y".to_string(), 1));
        let r = ring(2, &["x", "y"], &["xy"]);
        let red = find_linear_reduction(&r, 3).unwrap();
        assert_eq!((red.form.format(r.vars()), red.extension_degree), ("x+y".to_string(), 1));
        let r = ring(5, &["x"], &[]);
        assert_eq!(find_linear_reduction(&r, 3).unwrap().form.format(r.vars()), "x");
    }

    #[test]
    fn reduction_needs_more_scalars() {
        // three lines over GF(2) leave no room for a base-field reduction
        let r = ring(2, &["x", "y"], &["x^2y+xy^2"]);
        assert!(matches!(find_linear_reduction(&r, 1), Err(GradedError::NoReductionFound(1))));
        let red = find_linear_reduction(&r, 3).unwrap();
        assert_eq!(red.extension_degree, 2);
        let rep = branch_count(&r, &BranchOptions::default()).unwrap();
        assert_eq!((rep.branches_formula, rep.extension_degree), (3, 2));
    }

    #[test]
    fn frobenius_power_examples() {
        let k3 = ring(3, &["x", "y"], &[]);
        assert_eq!(frobenius_power(&[poly(&k3, "y")], 1), vec![poly(&k3, "y^3")]);
        let k2 = ring(2, &["x", "y"], &[]);
        assert_eq!(frobenius_power(&[poly(&k2, "x+y")], 1), vec![poly(&k2, "x^2+y^2")]);
        assert_eq!(frobenius_power(&[poly(&k2, "x^2"), poly(&k2, "xy")], 2), vec![poly(&k2, "x^8"), poly(&k2, "x^4y^4")]);
    }

    #[test]
    fn frobenius_closure_examples() {
        let a = axes(2, 3);
        let got = frobenius_closure_membership(&a, &poly(&a, "x2^2"), &[poly(&a, "x1+x2+x3")], 3).unwrap();
        assert_eq!(got, ClosureMembership::In(0));
        let r = ring(3, &["x", "y"], &["x^2+y^2"]);
        let got = frobenius_closure_membership(&r, &poly(&r, "xy"), &[poly(&r, "y^2")], 3).unwrap();
        assert_eq!(got, ClosureMembership::NotInUpTo(3));
        let got = frobenius_closure_membership(&r, &poly(&r, "xy^2"), &[poly(&r, "y^2")], 2).unwrap();
        assert_eq!(got, ClosureMembership::In(0));
        assert!(matches!(
            frobenius_closure_membership(&r, &poly(&r, "xy"), &[poly(&r, "y^2")], 4),
            Err(GradedError::DegreeCapExceeded { degree: 162, cap: 64 })
        ));
    }

    #[test]
    fn probe_matches_slice_on_two_lines() {
        let r = ring(3, &["x", "y"], &["x^2+y^2"]);
        let probes = probe_power_closure(&r, &poly(&r, "y"), 1, 3, 27).unwrap();
        assert_eq!(probes.len(), 2);
        assert!(probes.iter().all(SliceProbe::agrees));
        assert_eq!(probes.iter().filter(|p| p.in_slice).count(), 1);
    }

    #[test]
    fn closure_quotient_examples() {
        let r = ring(3, &["x", "y"], &["x^2+y^2"]);
        assert_eq!(closure_quotient_dim(&r, &poly(&r, "y"), 2).unwrap(), 1);
        let a = axes(5, 3);
        assert_eq!(closure_quotient_dim(&a, &poly(&a, "x1+x2+x3"), 2).unwrap(), 2);
        let line = ring(5, &["x"], &[]);
        for n in 0..5 {
            assert_eq!(closure_quotient_dim(&line, &poly(&line, "x"), n).unwrap(), 0);
        }
        assert_eq!(closure_quotient_dim(&r, &poly(&r, "y"), 0), Err(GradedError::BelowReductionIndex { n: 0, index: 1 }));
        let a2 = axes(3, 2);
        assert_eq!(closure_quotient_dim(&a2, &poly(&a2, "x1"), 2), Err(GradedError::NotAReduction));
    }

    #[test]
    fn non_reduced_ring_still_has_a_reduction() {
        let r = ring(3, &["x", "y"], &["y^2"]);
        assert!(!is_linear_reduction(&r, &poly(&r, "y")).unwrap().0);
        assert_eq!(closure_quotient_dim(&r, &poly(&r, "x"), 1).unwrap(), 1);
        assert_eq!(reducedness(&r), Reducedness::NotReduced);
    }

    #[test]
    fn branch_count_examples() {
        let opts = BranchOptions::default();
        let rep = branch_count(&ring(3, &["x", "y"], &["x^2+y^2"]), &opts).unwrap();
        assert_eq!((rep.branches_formula, rep.branches_multiplicity, rep.consistent), (2, 2, true));
        assert_eq!(rep.oracle_branches, Some(2));
        let rep = branch_count(&ring(7, &["x", "y"], &["x^4+y^4"]), &opts).unwrap();
        assert_eq!(rep.branches_formula, 4);
        let rep = branch_count(&axes(2, 3), &opts).unwrap();
        assert_eq!((rep.branches_formula, rep.oracle_branches), (3, Some(3)));
        assert_eq!(rep.reducedness, Reducedness::Verified);
    }

    #[test]
    fn reducedness_checks() {
        assert_eq!(reducedness(&ring(3, &["x", "y"], &["x^2+y^2"])), Reducedness::Verified);
        assert_eq!(reducedness(&ring(3, &["x", "y"], &["x^2y"])), Reducedness::NotReduced);
        assert_eq!(reducedness(&ring(5, &["x", "y"], &["x^2+2xy+y^2"])), Reducedness::NotReduced);
        assert_eq!(reducedness(&ring(3, &["x", "y", "z"], &["xy", "x^2y"])), Reducedness::Verified);
        assert_eq!(reducedness(&ring(5, &["x", "y", "z"], &["x^2+yz"])), Reducedness::Unverified);
    }
}
