use super::{FieldDescriptor, FieldError, Repr, UniPoly};
use crate::grammar::parse_terms;

/// Parses a polynomial in `t`; coefficients are integers reduced into the
/// prime subfield.
pub(super) fn parse_univariate(field: &FieldDescriptor, text: &str) -> Result<UniPoly, FieldError> {
    let vars = ["t".to_string()];
    let terms = parse_terms(text, &vars, field.characteristic())
        .map_err(|e| FieldError::Parse { position: e.position, expected: e.expected })?;
    let deg = terms.iter().map(|t| t.exponents[0] as usize).max().unwrap_or(0);
    let mut coeffs = vec![Repr::ZERO; deg + 1];
    for t in &terms {
        let slot = &mut coeffs[t.exponents[0] as usize];
        *slot = field.add(*slot, field.from_u64(t.coeff));
    }
    Ok(UniPoly::new(field, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let k = FieldDescriptor::prime(5).unwrap();
        let f = parse_univariate(&k, "3 t^4 - t + 7 + t").unwrap();
        assert_eq!(f.to_string(), "3*t^4+2");
        assert_eq!(parse_univariate(&k, &f.to_string()).unwrap(), f);
        assert!(parse_univariate(&k, "t^2 + x").is_err());
        assert!(parse_univariate(&k, "5t").unwrap().is_zero());
    }
}
