use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::GradedError;
use crate::ffield::{Embedding, FieldDescriptor, FieldElement, Repr, UniPoly};
use crate::grammar::parse_terms;

/// Exponent vector. Ordered by graded reverse-lexicographic order with the
/// variables in declaration order (`x_0 > x_1 > ...`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    /// `self / x_i`, if `x_i` divides.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        let mut e = self.0.clone();
        e[i] = e[i].checked_sub(1)?;
        Some(Monomial(e))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    /// All monomials of degree `d` in `n` variables, largest first.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fill(&mut cur, 0, d, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    pub fn format(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

fn fill(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Monomial>) {
    if cur.is_empty() {
        if left == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if i == cur.len() - 1 {
        cur[i] = left;
        out.push(Monomial(cur.clone()));
        return;
    }
    for e in 0..=left {
        cur[i] = e;
        fill(cur, i + 1, left - e, out);
    }
    cur[i] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                // smaller exponent in the last differing variable wins
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Number of monomials of degree `d` in `n` variables, `C(d+n-1, n-1)`.
pub fn monomial_count(n: usize, d: u32) -> u128 {
    if n == 0 {
        return u128::from(d == 0);
    }
    let k = (n - 1) as u128;
    let top = u128::from(d) + k;
    (0..k).fold(1u128, |acc, i| acc * (top - i) / (i + 1))
}

/// A homogeneous polynomial with an explicit degree tag, so that the zero
/// polynomial still has a degree.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogPoly {
    field: FieldDescriptor,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Repr>,
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{} (deg {}) over {}", self.format(&vars), self.degree, self.field)
    }
}

impl HomogPoly {
    pub fn zero(field: &FieldDescriptor, nvars: usize, degree: u32) -> Self {
        HomogPoly { field: field.clone(), nvars, degree, terms: BTreeMap::new() }
    }

    pub fn monomial(field: &FieldDescriptor, m: Monomial, c: Repr) -> Self {
        let mut p = Self::zero(field, m.nvars(), m.degree());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds from terms, merging repeats. Every monomial must have degree
    /// `degree` and `nvars` variables.
    pub fn from_terms(
        field: &FieldDescriptor,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, Repr)>,
    ) -> Result<Self, GradedError> {
        let mut p = Self::zero(field, nvars, degree);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(GradedError::VariableCountMismatch);
            }
            if m.degree() != degree {
                return Err(GradedError::NotHomogeneous { position: 0, term: format!("{m:?}"), expected: degree, found: m.degree() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// `Σ c_i x_i`.
    pub fn linear_form(field: &FieldDescriptor, coeffs: &[Repr]) -> Self {
        let n = coeffs.len();
        let terms = coeffs.iter().enumerate().map(|(i, &c)| (Monomial::var(n, i), c));
        Self::from_terms(field, n, 1, terms).expect("degree one terms")
    }

    /// Parses a homogeneous polynomial over the declared variables.
    /// Mixed-degree input is rejected, naming the first term whose degree
    /// differs from the first term's.
    pub fn parse(field: &FieldDescriptor, vars: &[String], text: &str) -> Result<Self, GradedError> {
        let terms = parse_terms(text, vars, field.characteristic())
            .map_err(|e| GradedError::Parse { position: e.position, expected: e.expected })?;
        let degree = terms.first().map(|t| t.exponents.iter().sum::<u32>()).unwrap_or(0);
        let mut p = Self::zero(field, vars.len(), degree);
        for t in terms {
            let d: u32 = t.exponents.iter().sum();
            if d != degree {
                return Err(GradedError::NotHomogeneous {
                    position: t.span.0,
                    term: text[t.span.0..t.span.1].trim().to_string(),
                    expected: degree,
                    found: d,
                });
            }
            p.add_term(Monomial(t.exponents), field.from_u64(t.coeff));
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Repr) {
        let k = &self.field;
        let entry = self.terms.entry(m).or_insert(Repr::ZERO);
        *entry = k.add(*entry, c);
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Repr)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.field.element(self.terms.get(m).copied().unwrap_or(Repr::ZERO))
    }

    fn check(&self, other: &HomogPoly) -> Result<(), GradedError> {
        if self.field != other.field {
            return Err(GradedError::Field(crate::ffield::FieldError::FieldMismatch));
        }
        if self.nvars != other.nvars {
            return Err(GradedError::VariableCountMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly, GradedError> {
        self.check(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(GradedError::NotHomogeneous {
                position: 0,
                term: format!("{other:?}"),
                expected: self.degree,
                found: other.degree,
            });
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut out = HomogPoly { degree, ..self.clone() };
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Repr) -> HomogPoly {
        let k = &self.field;
        let terms = self.terms.iter().map(|(m, &a)| (m.clone(), k.mul(a, c))).filter(|(_, a)| !a.is_zero()).collect();
        HomogPoly { terms, ..self.clone() }
    }

    pub fn mul(&self, other: &HomogPoly) -> Result<HomogPoly, GradedError> {
        self.check(other)?;
        let k = &self.field;
        let mut out = Self::zero(k, self.nvars, self.degree + other.degree);
        for (m, &a) in &self.terms {
            for (n, &b) in &other.terms {
                out.add_term(m.mul(n), k.mul(a, b));
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> HomogPoly {
        let terms = self.terms.iter().map(|(n, &c)| (n.mul(m), c)).collect();
        HomogPoly { degree: self.degree + m.degree(), terms, ..self.clone() }
    }

    pub fn pow(&self, k: u32) -> HomogPoly {
        let mut acc = Self::monomial(&self.field, Monomial::one(self.nvars), self.field.one());
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// `self^(p^e)`, computed term by term since the p-th power map is
    /// additive in characteristic p.
    pub fn frobenius_power(&self, e: u32) -> HomogPoly {
        let k = &self.field;
        let q = k.characteristic().pow(e) as u32;
        let terms = self.terms.iter().map(|(m, &c)| (m.scale(q), k.frobenius_iter(c, e))).collect();
        HomogPoly { degree: self.degree * q, terms, ..self.clone() }
    }

    pub fn map_coefficients(&self, embedding: &Embedding) -> HomogPoly {
        let terms = self.terms.iter().map(|(m, &c)| (m.clone(), embedding.apply(c))).collect();
        HomogPoly { field: embedding.target().clone(), terms, ..self.clone() }
    }

    /// For a binary form, the univariate polynomial obtained by setting
    /// variable `one` to 1 and naming the other one `t`.
    pub fn dehomogenize(&self, one: usize) -> UniPoly {
        assert_eq!(self.nvars, 2, "dehomogenize expects a binary form");
        let other = 1 - one;
        let k = &self.field;
        let mut coeffs = vec![Repr::ZERO; self.degree as usize + 1];
        for (m, &c) in &self.terms {
            let i = m.exponents()[other] as usize;
            coeffs[i] = k.add(coeffs[i], c);
        }
        UniPoly::new(k, coeffs)
    }

    /// Largest first, in the shared polynomial grammar.
    pub fn format(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let k = &self.field;
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, &c)| {
                let mono = m.format(vars);
                let coeff = k.format_repr(c);
                let coeff = if k.degree() > 1 && !k.is_in_prime_field(c) { format!("({coeff})") } else { coeff };
                match (c == k.one(), m.degree()) {
                    (_, 0) => coeff,
                    (true, _) => mono,
                    (false, _) => format!("{coeff}*{mono}"),
                }
            })
            .collect();
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn grevlex_order() {
        let m = |e: &[u32]| Monomial::new(e.to_vec());
        // degree 2 in x > y > z: x^2 > xy > y^2 > xz > yz > z^2
        let all = Monomial::all_of_degree(3, 2);
        let expected = vec![m(&[2, 0, 0]), m(&[1, 1, 0]), m(&[0, 2, 0]), m(&[1, 0, 1]), m(&[0, 1, 1]), m(&[0, 0, 2])];
        assert_eq!(all, expected);
        assert!(m(&[0, 0, 3]) > m(&[2, 0, 0]));
        assert_eq!(monomial_count(3, 2), 6);
        assert_eq!(monomial_count(5, 64), 814385);
        assert_eq!(Monomial::all_of_degree(4, 5).len() as u128, monomial_count(4, 5));
    }

    #[test]
    fn parse_rejects_mixed_degree() {
        let k = FieldDescriptor::prime(3).unwrap();
        let v = vars(&["x", "y"]);
        let err = HomogPoly::parse(&k, &v, "x^2 + y^3").unwrap_err();
        assert_eq!(err, GradedError::NotHomogeneous { position: 6, term: "y^3".into(), expected: 2, found: 3 });
        let f = HomogPoly::parse(&k, &v, "x^2 + y^2 - 4y^2").unwrap();
        assert_eq!(f.format(&v), "x^2");
    }

    #[test]
    fn frobenius_power_matches_repeated_multiplication() {
        let k = FieldDescriptor::prime(2).unwrap();
        let v = vars(&["x", "y"]);
        let f = HomogPoly::parse(&k, &v, "x+y").unwrap();
        assert_eq!(f.frobenius_power(1).format(&v), "x^2+y^2");
        let k3 = FieldDescriptor::with_degree(3, 2).unwrap();
        let u = k3.generator();
        let g = HomogPoly::linear_form(&k3, &[u, k3.one()]).add(&HomogPoly::linear_form(&k3, &[k3.one(), Repr::ZERO])).unwrap();
        for e in 0..3 {
            assert_eq!(g.frobenius_power(e), g.pow(3u32.pow(e)));
        }
    }

    #[test]
    fn dehomogenizations() {
        let k = FieldDescriptor::prime(5).unwrap();
        let v = vars(&["x", "y"]);
        let f = HomogPoly::parse(&k, &v, "x^3 + 2x y^2").unwrap();
        assert_eq!(f.dehomogenize(0).to_string(), "2*t^2+1");
        assert_eq!(f.dehomogenize(1).to_string(), "t^3+2*t");
    }
}
