use super::{FieldDescriptor, FieldError, Repr, UniPoly};

/// A field embedding GF(p^a) → GF(p^(a·s)), fixed by the image of the
/// generator `u` of the smaller field.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldDescriptor,
    target: FieldDescriptor,
    /// Powers `1, r, r^2, ..., r^(a-1)` of the image `r` of `u`.
    powers: Vec<Repr>,
}

impl Embedding {
    pub fn source(&self) -> &FieldDescriptor {
        &self.source
    }

    pub fn target(&self) -> &FieldDescriptor {
        &self.target
    }

    pub fn apply(&self, a: Repr) -> Repr {
        let t = &self.target;
        self.powers
            .iter()
            .enumerate()
            .fold(Repr::ZERO, |acc, (i, &rp)| t.add(acc, t.mul(t.from_u64(u64::from(a.0[i])), rp)))
    }
}

impl FieldDescriptor {
    /// The degree-`s` extension of this field together with an embedding.
    ///
    /// The target is GF(p^(a·s)) with its default modulus; when `a > 1` the
    /// embedding sends `u` to the first root of this field's modulus found
    /// by deterministic equal-degree splitting.
    pub fn extend(&self, s: usize) -> Result<(FieldDescriptor, Embedding), FieldError> {
        let a = self.degree();
        let total = a.checked_mul(s).filter(|&d| d >= 1 && d <= super::MAX_EXTENSION_DEGREE);
        let total = total.ok_or(FieldError::UnsupportedDegree(a * s))?;
        if s == 1 {
            let id = Embedding { source: self.clone(), target: self.clone(), powers: identity_powers(self) };
            return Ok((self.clone(), id));
        }
        let target = FieldDescriptor::with_degree(self.characteristic(), total)?;
        let root = match self.modulus() {
            None => Repr::ZERO,
            Some(m) => {
                let lifted = UniPoly::new(&target, m.coeffs().iter().map(|c| target.from_u64(u64::from(c.0[0]))).collect());
                find_root(&lifted)
            }
        };
        let mut powers = Vec::with_capacity(a);
        let mut acc = target.one();
        for _ in 0..a {
            powers.push(acc);
            acc = target.mul(acc, root);
        }
        Ok((target.clone(), Embedding { source: self.clone(), target, powers }))
    }
}

fn identity_powers(k: &FieldDescriptor) -> Vec<Repr> {
    (0..k.degree())
        .map(|i| {
            let mut r = Repr::ZERO;
            r.0[i] = 1;
            r
        })
        .collect()
}

/// A root of `f`, which must split into distinct linear factors over its
/// field.
fn find_root(f: &UniPoly) -> Repr {
    let k = f.field().clone();
    let mut h = f.monic();
    let t = UniPoly::t(&k);
    let p = k.characteristic();
    let m = k.degree();
    let mut delta_index = 0u64;
    while h.degree().unwrap_or(0) > 1 {
        let delta = k.element_from_index(delta_index);
        delta_index += 1;
        let split = if p == 2 {
            // absolute trace of δ·t
            let base = t.scale(if delta.is_zero() { k.one() } else { delta });
            let mut term = base.rem(&h).expect("same field");
            let mut trace = term.clone();
            for _ in 1..m {
                term = term.pow_mod(2, &h).expect("same field");
                trace = trace.add(&term).expect("same field");
            }
            trace
        } else {
            // (t + δ)^((q-1)/2) = (∏_i (t+δ)^(p^i))^((p-1)/2)
            let base = t.add(&UniPoly::constant(&k, delta)).expect("same field");
            let mut frob = base.rem(&h).expect("same field");
            let mut norm = frob.clone();
            for _ in 1..m {
                frob = frob.pow_mod(p, &h).expect("same field");
                norm = norm.mul(&frob).expect("same field").rem(&h).expect("same field");
            }
            norm.pow_mod((p - 1) / 2, &h).expect("same field").sub(&UniPoly::one(&k)).expect("same field")
        };
        let g = super::poly_gcd(&h, &split).expect("same field");
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < h.degree().unwrap_or(0) {
            let other = h.exact_div(&g);
            h = if dg <= other.degree().unwrap_or(0) { g } else { other.monic() };
        }
    }
    // h = t + c
    k.neg(h.coeffs()[0])
}
