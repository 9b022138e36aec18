//! `n: a,b; c,d` lists of generators. Without the `n:` prefix a `;`-free
//! comma list such as `2,3` is read as a numerical semigroup.

use super::{AffineSemigroup, SemigroupError};

fn err<T>(position: usize, expected: &str) -> Result<T, SemigroupError> {
    Err(SemigroupError::Parse { position, expected: expected.to_string() })
}

/// Comma-separated integers in `text[start..end]`.
fn parse_vector(text: &str, start: usize, end: usize) -> Result<Vec<i64>, SemigroupError> {
    let mut out = Vec::new();
    let mut pos = start;
    for piece in text[start..end].split(',') {
        let lead = piece.len() - piece.trim_start().len();
        let body = piece.trim();
        let at = pos + lead;
        if body.is_empty() {
            return err(at, "integer");
        }
        if let Some(bad) = body.find(|c: char| !c.is_ascii_digit() && c != '-') {
            return err(at + bad, "digit");
        }
        match body.parse::<i64>() {
            Ok(v) => out.push(v),
            Err(_) => return err(at, "integer in range"),
        }
        pos += piece.len() + 1;
    }
    Ok(out)
}

pub fn parse_semigroup(text: &str) -> Result<AffineSemigroup, SemigroupError> {
    let (n, body_start) = match text.find(':') {
        Some(colon) => {
            let head = text[..colon].trim();
            let lead = text[..colon].len() - text[..colon].trim_start().len();
            match head.parse::<usize>() {
                Ok(n) if n >= 1 => (Some(n), colon + 1),
                _ => return err(lead, "dimension n >= 1"),
            }
        }
        None => (None, 0),
    };
    let body = &text[body_start..];
    let mut gens = Vec::new();
    if n.is_none() && !body.contains(';') {
        for v in parse_vector(text, body_start, text.len())? {
            gens.push(vec![v]);
        }
        return AffineSemigroup::new(1, gens);
    }
    let mut pos = body_start;
    for piece in body.split(';') {
        if !piece.trim().is_empty() || gens.is_empty() {
            gens.push(parse_vector(text, pos, pos + piece.len())?);
        }
        pos += piece.len() + 1;
    }
    let n = n.unwrap_or(gens[0].len());
    AffineSemigroup::new(n, gens)
}

/// Vectors of length `dim` separated by `;`. For `dim = 1` a `;`-free
/// comma list is read as one scalar per entry.
pub fn parse_vectors(text: &str, dim: usize) -> Result<Vec<Vec<i64>>, SemigroupError> {
    if dim == 1 && !text.contains(';') {
        return Ok(parse_vector(text, 0, text.len())?.into_iter().map(|v| vec![v]).collect());
    }
    let mut out = Vec::new();
    let mut pos = 0;
    for piece in text.split(';') {
        if !piece.trim().is_empty() || out.is_empty() {
            let v = parse_vector(text, pos, pos + piece.len())?;
            if v.len() != dim {
                return Err(SemigroupError::DimensionMismatch { got: v, expected: dim });
            }
            out.push(v);
        }
        pos += piece.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        let a = parse_semigroup("3: 2,0,0; 1,1,0; 1,0,1; 0,2,0; 0,0,2").unwrap();
        assert_eq!((a.dim(), a.generators().len()), (3, 5));
        assert_eq!(parse_semigroup("1: 2; 3").unwrap(), AffineSemigroup::numerical(&[2, 3]).unwrap());
        assert_eq!(parse_semigroup("2,3").unwrap(), AffineSemigroup::numerical(&[2, 3]).unwrap());
        assert_eq!(parse_semigroup("1,0; 1,2;").unwrap().dim(), 2);
        assert_eq!(a.to_string(), "3: 2,0,0; 1,1,0; 1,0,1; 0,2,0; 0,0,2");
    }

    #[test]
    fn reports_errors() {
        assert_eq!(parse_semigroup("2: 1,x").unwrap_err(), SemigroupError::Parse { position: 5, expected: "digit".into() });
        assert_eq!(parse_semigroup("2: 1,,2").unwrap_err(), SemigroupError::Parse { position: 5, expected: "integer".into() });
        assert!(matches!(parse_semigroup("z: 1"), Err(SemigroupError::Parse { position: 0, .. })));
        assert!(matches!(parse_semigroup("2: 1,0; 1"), Err(SemigroupError::DimensionMismatch { .. })));
    }

    #[test]
    fn vector_lists() {
        assert_eq!(parse_vectors("3, 4", 1).unwrap(), vec![vec![3], vec![4]]);
        assert_eq!(parse_vectors("0,1,1; 2,0,0", 3).unwrap(), vec![vec![0, 1, 1], vec![2, 0, 0]]);
        assert!(matches!(parse_vectors("1,2", 3), Err(SemigroupError::DimensionMismatch { .. })));
        assert_eq!(parse_vectors("1,2; 3,y", 2).unwrap_err(), SemigroupError::Parse { position: 7, expected: "digit".into() });
    }
}
