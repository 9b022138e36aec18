use std::fmt;

use super::{FieldDescriptor, FieldError, Repr};

/// Dense univariate polynomial over a finite field, lowest degree first.
/// Trailing zeros are stripped; the empty vector is the zero polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: FieldDescriptor,
    coeffs: Vec<Repr>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

impl fmt::Display for UniPoly {
    /// Prints in the shared polynomial grammar (highest degree first).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let coeff = self.field.format_repr(c);
            let is_one = c == self.field.one();
            let coeff = if self.field.degree() > 1 && !is_one && i > 0 { format!("({coeff})") } else { coeff };
            match (i, is_one) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{coeff}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{coeff}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn new(field: &FieldDescriptor, mut coeffs: Vec<Repr>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field: field.clone(), coeffs }
    }

    /// Polynomial with prime-field coefficients given as integers.
    pub fn from_u64s(field: &FieldDescriptor, coeffs: &[u64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_u64(c)).collect())
    }

    pub fn zero(field: &FieldDescriptor) -> Self {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &FieldDescriptor, c: Repr) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: &FieldDescriptor) -> Self {
        Self::constant(field, field.one())
    }

    /// The monomial `c·t^k`.
    pub fn monomial(field: &FieldDescriptor, c: Repr, k: usize) -> Self {
        let mut coeffs = vec![Repr::ZERO; k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    /// The indeterminate `t`.
    pub fn t(field: &FieldDescriptor) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn parse(field: &FieldDescriptor, text: &str) -> Result<Self, FieldError> {
        super::parse::parse_univariate(field, text)
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn coeffs(&self) -> &[Repr] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> super::FieldElement {
        self.field.element(self.coeffs.get(i).copied().unwrap_or(Repr::ZERO))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Repr> {
        self.coeffs.last().copied()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.field.one()
    }

    fn check(&self, other: &UniPoly) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn eval(&self, x: Repr) -> Repr {
        self.coeffs.iter().rev().fold(Repr::ZERO, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    pub fn add(&self, other: &UniPoly) -> Result<UniPoly, FieldError> {
        self.check(other)?;
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(Repr::ZERO);
                let b = other.coeffs.get(i).copied().unwrap_or(Repr::ZERO);
                k.add(a, b)
            })
            .collect();
        Ok(UniPoly::new(k, coeffs))
    }

    pub fn neg(&self) -> UniPoly {
        let k = &self.field;
        UniPoly::new(k, self.coeffs.iter().map(|&c| k.neg(c)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> Result<UniPoly, FieldError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> Result<UniPoly, FieldError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(UniPoly::zero(&self.field));
        }
        let k = &self.field;
        let mut out = vec![Repr::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Ok(UniPoly::new(k, out))
    }

    pub fn scale(&self, c: Repr) -> UniPoly {
        let k = &self.field;
        UniPoly::new(k, self.coeffs.iter().map(|&a| k.mul(a, c)).collect())
    }

    pub fn pow(&self, mut e: u64) -> UniPoly {
        let mut base = self.clone();
        let mut acc = UniPoly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// Scales to leading coefficient one; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(self.field.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly), FieldError> {
        self.check(divisor)?;
        let k = &self.field;
        let lc = divisor.leading().ok_or(FieldError::DivisionByZero)?;
        let lc_inv = k.inv(lc).expect("nonzero");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((UniPoly::zero(k), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Repr::ZERO; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = k.mul(rem[i + dd], lc_inv);
            if c.is_zero() {
                continue;
            }
            quot[i] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = k.sub(rem[i + j], k.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((UniPoly::new(k, quot), UniPoly::new(k, rem)))
    }

    pub fn rem(&self, divisor: &UniPoly) -> Result<UniPoly, FieldError> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; callers guarantee divisibility.
    pub(crate) fn exact_div(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor).expect("same field, nonzero divisor");
        debug_assert!(r.is_zero());
        q
    }

    pub fn derivative(&self) -> UniPoly {
        let k = &self.field;
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| k.mul(k.from_u64(i as u64), c)).collect();
        UniPoly::new(k, coeffs)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &UniPoly) -> Result<UniPoly, FieldError> {
        let mut base = self.rem(modulus)?;
        let mut acc = UniPoly::one(&self.field).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?.rem(modulus)?;
            }
            base = base.mul(&base)?.rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// For `f = g(t^p)`, returns the p-th root `h` with `h^p = f`.
    fn pth_root(&self) -> UniPoly {
        let k = &self.field;
        let p = k.characteristic() as usize;
        let coeffs = self.coeffs.iter().step_by(p).map(|&c| k.frob_root(c)).collect();
        UniPoly::new(k, coeffs)
    }

    /// Irreducibility over GF(p) for a monic polynomial with prime-field
    /// coefficients: root test via `gcd(f, t^p - t)` for degree ≤ 3, the
    /// distinct-degree sieve `gcd(f, t^{p^i} - t) = 1` for `i ≤ deg/2`
    /// otherwise.
    pub(crate) fn is_irreducible_over_prime_field(&self) -> bool {
        let Some(deg) = self.degree() else { return false };
        if deg == 0 {
            return false;
        }
        if deg == 1 {
            return true;
        }
        let p = self.field.characteristic();
        let t = UniPoly::t(&self.field);
        let rounds = if deg <= 3 { 1 } else { deg / 2 };
        let mut h = t.clone();
        for _ in 0..rounds {
            h = h.pow_mod(p, self).expect("same field");
            let g = poly_gcd(self, &h.sub(&t).expect("same field")).expect("same field");
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    /// First monic irreducible of degree `s` over the prime field, counting
    /// the lower coefficients as a base-p number with the constant term
    /// least significant.
    pub(crate) fn first_irreducible(prime: &FieldDescriptor, s: usize) -> UniPoly {
        let p = prime.characteristic();
        let mut index = 0u64;
        loop {
            let mut coeffs = Vec::with_capacity(s + 1);
            let mut rest = index;
            for _ in 0..s {
                coeffs.push(rest % p);
                rest /= p;
            }
            coeffs.push(1);
            let f = UniPoly::from_u64s(prime, &coeffs);
            if f.is_irreducible_over_prime_field() {
                return f;
            }
            index += 1;
        }
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd(f: &UniPoly, g: &UniPoly) -> Result<UniPoly, FieldError> {
    f.check(g)?;
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = a.rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// Squarefree decomposition in characteristic p: pairwise coprime, monic,
/// squarefree `g_i` with `∏ g_i^{m_i} = f` up to a unit, sorted by
/// multiplicity.
pub fn squarefree_decomposition(f: &UniPoly) -> Result<Vec<(UniPoly, usize)>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    squarefree_into(&f.monic(), 1, &mut out);
    out.sort_by_key(|(_, m)| *m);
    Ok(out)
}

fn squarefree_into(f: &UniPoly, scale: usize, out: &mut Vec<(UniPoly, usize)>) {
    if f.degree() == Some(0) {
        return;
    }
    let p = f.field.characteristic() as usize;
    let mut c = poly_gcd(f, &f.derivative()).expect("same field");
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = poly_gcd(&w, &c).expect("same field");
        let z = w.exact_div(&y);
        if !z.is_one() {
            out.push((z, i * scale));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        // everything left has multiplicity divisible by p
        squarefree_into(&c.pth_root(), scale * p, out);
    }
}

/// Number of distinct roots in an algebraic closure: the sum of the degrees
/// of the squarefree factors.
pub fn distinct_root_count(f: &UniPoly) -> Result<usize, FieldError> {
    Ok(squarefree_decomposition(f)?.iter().map(|(g, _)| g.degree().unwrap_or(0)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldDescriptor {
        FieldDescriptor::prime(p).unwrap()
    }

    fn poly(k: &FieldDescriptor, s: &str) -> UniPoly {
        UniPoly::parse(k, s).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let k = gf(3);
        assert_eq!(poly_gcd(&poly(&k, "t^2+1"), &UniPoly::zero(&k)).unwrap(), poly(&k, "t^2+1"));
        assert!(poly_gcd(&poly(&k, "t^2+1"), &poly(&k, "2t")).unwrap().is_one());
        let k5 = gf(5);
        let f = poly(&k5, "t-1").pow(2);
        assert_eq!(poly_gcd(&f, &poly(&k5, "t-1")).unwrap(), poly(&k5, "t-1"));
        assert!(poly_gcd(&UniPoly::zero(&k), &UniPoly::zero(&k)).unwrap().is_zero());
        // non-monic input is normalized
        assert_eq!(poly_gcd(&poly(&k, "2t^2+2"), &UniPoly::zero(&k)).unwrap(), poly(&k, "t^2+1"));
        assert_eq!(poly_gcd(&poly(&k, "t"), &poly(&k5, "t")), Err(FieldError::FieldMismatch));
    }

    #[test]
    fn squarefree_examples() {
        let k = gf(3);
        let f = poly(&k, "t^2+1");
        assert_eq!(squarefree_decomposition(&f).unwrap(), vec![(f.clone(), 1)]);
        for p in [2u64, 3, 5, 7] {
            let k = gf(p);
            let f = UniPoly::t(&k).pow(p);
            assert_eq!(squarefree_decomposition(&f).unwrap(), vec![(UniPoly::t(&k), p as usize)]);
        }
        let f = poly(&k, "t").mul(&poly(&k, "t^2+1").pow(2)).unwrap();
        assert_eq!(squarefree_decomposition(&f).unwrap(), vec![(poly(&k, "t"), 1), (poly(&k, "t^2+1"), 2)]);
        assert_eq!(squarefree_decomposition(&UniPoly::zero(&k)), Err(FieldError::ZeroPolynomial));
        // constant polynomials have no factors
        assert!(squarefree_decomposition(&poly(&k, "2")).unwrap().is_empty());
    }

    #[test]
    fn squarefree_mixed_multiplicities_in_char_two() {
        // (t+1)^3 · t^4 · (t^2+t+1)^2 over GF(2)
        let k = gf(2);
        let f = poly(&k, "t+1").pow(3).mul(&poly(&k, "t").pow(4)).unwrap().mul(&poly(&k, "t^2+t+1").pow(2)).unwrap();
        let d = squarefree_decomposition(&f).unwrap();
        assert_eq!(d, vec![(poly(&k, "t^2+t+1"), 2), (poly(&k, "t+1"), 3), (poly(&k, "t"), 4)]);
        assert_eq!(distinct_root_count(&f).unwrap(), 4);
    }

    #[test]
    fn distinct_root_examples() {
        assert_eq!(distinct_root_count(&poly(&gf(3), "t^2+1")).unwrap(), 2);
        assert_eq!(distinct_root_count(&poly(&gf(3), "t^4+1")).unwrap(), 4);
        for p in [2u64, 3, 5, 7] {
            let k = gf(p);
            assert_eq!(distinct_root_count(&poly(&k, "t-1").pow(p)).unwrap(), 1);
        }
    }

    #[test]
    fn squarefree_over_extension_needs_frob_root() {
        // (t - u)^3 has vanishing derivative, so its coefficients go through
        // frob_root when the cube is extracted.
        let k = FieldDescriptor::with_degree(3, 2).unwrap();
        let u = k.generator();
        let lin = UniPoly::new(&k, vec![k.neg(u), k.one()]);
        let f = lin.pow(3).mul(&UniPoly::t(&k)).unwrap();
        let d = squarefree_decomposition(&f).unwrap();
        assert_eq!(d, vec![(UniPoly::t(&k), 1), (lin, 3)]);
    }

    #[test]
    fn div_rem_and_pow_mod() {
        let k = gf(5);
        let f = poly(&k, "t^5+3t^2+1");
        let g = poly(&k, "2t^2+1");
        let (q, r) = f.div_rem(&g).unwrap();
        assert_eq!(q.mul(&g).unwrap().add(&r).unwrap(), f);
        assert!(r.degree().unwrap() < 2);
        let t = UniPoly::t(&k);
        // t^5 ≡ t mod (t^5 - t)
        let m = poly(&k, "t^5-t");
        assert_eq!(t.pow_mod(5, &m).unwrap(), t);
        assert_eq!(f.div_rem(&UniPoly::zero(&k)), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn first_irreducibles() {
        assert_eq!(UniPoly::first_irreducible(&gf(3), 2).to_string(), "t^2+1");
        assert_eq!(UniPoly::first_irreducible(&gf(2), 2).to_string(), "t^2+t+1");
        assert_eq!(UniPoly::first_irreducible(&gf(2), 3).to_string(), "t^3+t+1");
        assert_eq!(UniPoly::first_irreducible(&gf(2), 4).to_string(), "t^4+t+1");
    }
}
