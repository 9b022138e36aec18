//! Exact arithmetic in GF(p) and GF(p^s).
//!
//! A [`FieldDescriptor`] is a cheap, shareable handle to the field. Elements
//! are stored as a fixed-size coefficient array ([`Repr`]) so that the linear
//! algebra kernels can work on plain `Copy` values; the public
//! [`FieldElement`] pairs a representation with its descriptor.

mod embed;
mod parse;
mod poly;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use embed::Embedding;
pub use poly::{distinct_root_count, poly_gcd, squarefree_decomposition, UniPoly};

/// Largest supported extension degree `s`.
pub const MAX_EXTENSION_DEGREE: usize = 8;

/// Largest supported characteristic.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("characteristic {0} exceeds 2^31")]
    CharacteristicTooLarge(u64),
    #[error("extension degree {0} is outside 1..=8")]
    UnsupportedDegree(usize),
    #[error("a modulus is required exactly when the extension degree exceeds 1")]
    ModulusMismatch,
    #[error("modulus must be monic of degree {expected} over GF({p})")]
    BadModulus { p: u64, expected: usize },
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u64),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at offset {position}: expected {expected}")]
    Parse { position: usize, expected: String },
}

/// Coefficient vector of an element of GF(p^s) over GF(p), lowest power first.
///
/// Unused slots beyond `s` are always zero, so derived equality is field
/// equality once the owning descriptor is fixed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Repr(pub(crate) [u32; MAX_EXTENSION_DEGREE]);

impl Repr {
    pub const ZERO: Repr = Repr([0; MAX_EXTENSION_DEGREE]);

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coefficients(&self) -> &[u32; MAX_EXTENSION_DEGREE] {
        &self.0
    }
}

impl fmt::Debug for Repr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).unwrap_or(0);
        f.debug_list().entries(&self.0[..=last]).finish()
    }
}

struct FieldInner {
    p: u64,
    s: usize,
    /// Monic modulus, lowest degree first, length `s + 1`. For the prime
    /// field this is `[0, 1]`.
    modulus: Vec<u64>,
}

/// The coefficient field GF(p^s) = GF(p)[u]/(modulus).
#[derive(Clone)]
pub struct FieldDescriptor(Arc<FieldInner>);

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.s == other.0.s && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldDescriptor {}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.s == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.s)
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldDescriptor {
    /// Builds GF(p^s). `modulus` must be present exactly when `s > 1` and must
    /// be a monic irreducible polynomial of degree `s` over GF(p).
    pub fn new(p: u64, s: usize, modulus: Option<&UniPoly>) -> Result<Self, FieldError> {
        let prime = Self::prime(p)?;
        match (s, modulus) {
            (1, None) => Ok(prime),
            (1, Some(_)) | (_, None) => {
                if s == 0 || s > MAX_EXTENSION_DEGREE {
                    Err(FieldError::UnsupportedDegree(s))
                } else {
                    Err(FieldError::ModulusMismatch)
                }
            }
            (s, Some(m)) => {
                if s > MAX_EXTENSION_DEGREE {
                    return Err(FieldError::UnsupportedDegree(s));
                }
                if m.field() != &prime || m.degree() != Some(s) || !m.leading().is_some_and(|c| c == prime.one()) {
                    return Err(FieldError::BadModulus { p, expected: s });
                }
                if !m.is_irreducible_over_prime_field() {
                    return Err(FieldError::ReducibleModulus(p));
                }
                let modulus = m.coeffs().iter().map(|c| u64::from(c.0[0])).collect();
                Ok(FieldDescriptor(Arc::new(FieldInner { p, s, modulus })))
            }
        }
    }

    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p > MAX_CHARACTERISTIC {
            return Err(FieldError::CharacteristicTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::CompositeCharacteristic(p));
        }
        Ok(FieldDescriptor(Arc::new(FieldInner { p, s: 1, modulus: vec![0, 1] })))
    }

    /// GF(p^s) with the first monic irreducible modulus in enumeration order
    /// (constant term varying fastest).
    pub fn with_degree(p: u64, s: usize) -> Result<Self, FieldError> {
        if s == 0 || s > MAX_EXTENSION_DEGREE {
            return Err(FieldError::UnsupportedDegree(s));
        }
        let prime = Self::prime(p)?;
        if s == 1 {
            return Ok(prime);
        }
        let modulus = UniPoly::first_irreducible(&prime, s);
        Self::new(p, s, Some(&modulus))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.s
    }

    /// The modulus as a polynomial over the prime field, if `s > 1`.
    pub fn modulus(&self) -> Option<UniPoly> {
        if self.0.s == 1 {
            return None;
        }
        let prime = Self::prime(self.0.p).expect("validated at construction");
        Some(UniPoly::from_u64s(&prime, &self.0.modulus))
    }

    /// Number of elements, when it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        let mut q = 1u64;
        for _ in 0..self.0.s {
            q = q.checked_mul(self.0.p)?;
        }
        Some(q)
    }

    pub fn zero(&self) -> Repr {
        Repr::ZERO
    }

    pub fn one(&self) -> Repr {
        self.from_u64(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_u64(&self, c: u64) -> Repr {
        let mut r = Repr::ZERO;
        r.0[0] = (c % self.0.p) as u32;
        r
    }

    pub fn from_i64(&self, c: i64) -> Repr {
        let p = self.0.p as i64;
        self.from_u64(c.rem_euclid(p) as u64)
    }

    /// Element with the given coefficients in the power basis `1, u, u^2, ...`.
    pub fn from_coefficients(&self, coeffs: &[u64]) -> Repr {
        let mut r = Repr::ZERO;
        for (i, &c) in coeffs.iter().enumerate() {
            if i < self.0.s {
                r.0[i] = (c % self.0.p) as u32;
            } else {
                // fold higher powers through the modulus
                let mut power = Repr::ZERO;
                power.0[0] = 1;
                let u = self.generator();
                for _ in 0..i {
                    power = self.mul(power, u);
                }
                r = self.add(r, self.mul(self.from_u64(c), power));
            }
        }
        r
    }

    /// The class of `u` in GF(p)[u]/(modulus); equals 0 for the prime field.
    pub fn generator(&self) -> Repr {
        if self.0.s == 1 {
            // u is the root of the modulus `t`, i.e. zero
            return Repr::ZERO;
        }
        let mut r = Repr::ZERO;
        r.0[1] = 1;
        r
    }

    /// Enumerates elements by index `Σ c_i p^i`.
    pub fn element_from_index(&self, mut index: u64) -> Repr {
        let mut r = Repr::ZERO;
        for i in 0..self.0.s {
            r.0[i] = (index % self.0.p) as u32;
            index /= self.0.p;
        }
        r
    }

    pub fn index_of(&self, a: Repr) -> u64 {
        let mut index = 0u64;
        for i in (0..self.0.s).rev() {
            index = index.saturating_mul(self.0.p).saturating_add(u64::from(a.0[i]));
        }
        index
    }

    pub fn is_in_prime_field(&self, a: Repr) -> bool {
        a.0[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: Repr, b: Repr) -> Repr {
        let p = self.0.p;
        let mut r = Repr::ZERO;
        for i in 0..self.0.s {
            r.0[i] = ((u64::from(a.0[i]) + u64::from(b.0[i])) % p) as u32;
        }
        r
    }

    pub fn neg(&self, a: Repr) -> Repr {
        let p = self.0.p;
        let mut r = Repr::ZERO;
        for i in 0..self.0.s {
            r.0[i] = ((p - u64::from(a.0[i])) % p) as u32;
        }
        r
    }

    pub fn sub(&self, a: Repr, b: Repr) -> Repr {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Repr, b: Repr) -> Repr {
        let p = self.0.p;
        let s = self.0.s;
        if s == 1 {
            let mut r = Repr::ZERO;
            r.0[0] = (u64::from(a.0[0]) * u64::from(b.0[0]) % p) as u32;
            return r;
        }
        let mut prod = [0u64; 2 * MAX_EXTENSION_DEGREE - 1];
        for i in 0..s {
            let ai = u64::from(a.0[i]);
            if ai == 0 {
                continue;
            }
            for j in 0..s {
                prod[i + j] = (prod[i + j] + ai * u64::from(b.0[j])) % p;
            }
        }
        let modulus = &self.0.modulus;
        for k in (s..2 * s - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            // u^s = -Σ m_j u^j
            for j in 0..s {
                let m = modulus[j];
                if m != 0 {
                    prod[k - s + j] = (prod[k - s + j] + c * (p - m)) % p;
                }
            }
        }
        let mut r = Repr::ZERO;
        for i in 0..s {
            r.0[i] = prod[i] as u32;
        }
        r
    }

    pub fn pow(&self, a: Repr, mut k: u64) -> Repr {
        let mut base = a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// The Frobenius map `a ↦ a^p`.
    pub fn frobenius(&self, a: Repr) -> Repr {
        if self.0.s == 1 {
            return a;
        }
        self.pow(a, self.0.p)
    }

    /// `a^(p^e)`.
    pub fn frobenius_iter(&self, a: Repr, e: u32) -> Repr {
        let e = e as usize % self.0.s;
        (0..e).fold(a, |acc, _| self.frobenius(acc))
    }

    /// The unique `d` with `d^p = a`; equals `a^(p^(s-1))`.
    pub fn frob_root(&self, a: Repr) -> Repr {
        (1..self.0.s).fold(a, |acc, _| self.frobenius(acc))
    }

    /// Multiplicative inverse, `a^(q-2)` written in base p so that no
    /// exponent exceeds `u64`.
    pub fn inv(&self, a: Repr) -> Option<Repr> {
        if a.is_zero() {
            return None;
        }
        let p = self.0.p;
        let mut acc = self.pow(a, p - 2);
        let mut frob = a;
        for _ in 1..self.0.s {
            frob = self.frobenius(frob);
            acc = self.mul(acc, self.pow(frob, p - 1));
        }
        Some(acc)
    }

    pub fn div(&self, a: Repr, b: Repr) -> Result<Repr, FieldError> {
        let inv = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    pub fn element(&self, repr: Repr) -> FieldElement {
        FieldElement { field: self.clone(), repr }
    }

    pub fn format_repr(&self, a: Repr) -> String {
        if self.0.s == 1 {
            return a.0[0].to_string();
        }
        let mut parts = Vec::new();
        for i in (0..self.0.s).rev() {
            let c = a.0[i];
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}u"),
                (i, 1) => format!("u^{i}"),
                (i, c) => format!("{c}u^{i}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// An element of a specific field. Equality is representational and
/// includes the field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldDescriptor,
    repr: Repr,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.field.format_repr(self.repr), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_repr(self.repr))
    }
}

impl FieldElement {
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.field.element(self.field.add(self.repr, other.repr)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.field.element(self.field.sub(self.repr, other.repr)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.field.element(self.field.mul(self.repr, other.repr)))
    }

    pub fn pow(&self, k: u64) -> FieldElement {
        self.field.element(self.field.pow(self.repr, k))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        let r = self.field.inv(self.repr).ok_or(FieldError::DivisionByZero)?;
        Ok(self.field.element(r))
    }
}

/// The p-th root of `c` in its (perfect) field.
pub fn frob_root(c: &FieldElement) -> FieldElement {
    c.field.element(c.field.frob_root(c.repr))
}
