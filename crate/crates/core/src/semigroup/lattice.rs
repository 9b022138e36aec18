//! Integer matrices with checked 64-bit storage: Smith and Hermite normal
//! forms, determinants and lattice membership.

use super::SemigroupError;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<i64>>,
}

fn ck(v: Option<i64>) -> Result<i64, SemigroupError> {
    v.ok_or(SemigroupError::Overflow)
}

impl IntMatrix {
    /// All rows must have length `cols`.
    pub fn from_rows(cols: usize, data: Vec<Vec<i64>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: data.len(), cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![0; cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i][i] = 1;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i][j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.clone()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, SemigroupError> {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0i64;
                for t in 0..self.cols {
                    acc = ck(acc.checked_add(ck(self.data[i][t].checked_mul(other.data[t][j]))?))?;
                }
                out.data[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// Fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<i64, SemigroupError> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> = self.data.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(swap) = (k + 1..n).find(|&i| a[i][k] != 0) else { return Ok(0) };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                        .ok_or(SemigroupError::Overflow)?;
                    a[i][j] = num / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| SemigroupError::Overflow)
    }
}

/// Elimination workspace; entries of the transforms can outgrow `i64` on the
/// way even when the results fit.
#[derive(Debug, Clone)]
struct Work {
    rows: usize,
    cols: usize,
    data: Vec<Vec<i128>>,
}

impl Work {
    fn of(m: &IntMatrix) -> Self {
        Work { rows: m.rows, cols: m.cols, data: m.data.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect() }
    }

    fn identity(n: usize) -> Self {
        Work::of(&IntMatrix::identity(n))
    }

    fn narrow(&self) -> Result<IntMatrix, SemigroupError> {
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|&x| i64::try_from(x).map_err(|_| SemigroupError::Overflow)).collect())
            .collect::<Result<_, _>>()?;
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.data.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in &mut self.data {
            r.swap(i, j);
        }
    }

    /// row_i -= q·row_j
    fn sub_row(&mut self, i: usize, j: usize, q: i128) -> Result<(), SemigroupError> {
        if q == 0 {
            return Ok(());
        }
        for c in 0..self.cols {
            let d = self.data[j][c].checked_mul(q).ok_or(SemigroupError::Overflow)?;
            self.data[i][c] = self.data[i][c].checked_sub(d).ok_or(SemigroupError::Overflow)?;
        }
        Ok(())
    }

    /// col_i -= q·col_j
    fn sub_col(&mut self, i: usize, j: usize, q: i128) -> Result<(), SemigroupError> {
        if q == 0 {
            return Ok(());
        }
        for r in &mut self.data {
            let d = r[j].checked_mul(q).ok_or(SemigroupError::Overflow)?;
            r[i] = r[i].checked_sub(d).ok_or(SemigroupError::Overflow)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -*x;
        }
    }
}

/// A normal form `U·M·V = form` with `U`, `V` unimodular. For the Hermite
/// form `V` is the identity.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IntMatrixNF {
    pub original: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub form: IntMatrix,
}

impl IntMatrixNF {
    /// Diagonal entries of a Smith form, zeros included.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.form.rows.min(self.form.cols)).map(|i| self.form.data[i][i]).collect()
    }

    pub fn rank(&self) -> usize {
        self.form.data.iter().filter(|r| r.iter().any(|&x| x != 0)).count()
    }

    fn verify(&self) -> Result<(), SemigroupError> {
        let mul = |x: &Work, y: &Work| -> Result<Work, SemigroupError> {
            let mut out = Work { rows: x.rows, cols: y.cols, data: vec![vec![0; y.cols]; x.rows] };
            for i in 0..x.rows {
                for j in 0..y.cols {
                    let mut acc = 0i128;
                    for t in 0..x.cols {
                        acc = x.data[i][t]
                            .checked_mul(y.data[t][j])
                            .and_then(|v| acc.checked_add(v))
                            .ok_or(SemigroupError::Overflow)?;
                    }
                    out.data[i][j] = acc;
                }
            }
            Ok(out)
        };
        let prod = mul(&mul(&Work::of(&self.left), &Work::of(&self.original))?, &Work::of(&self.right))?;
        assert_eq!(prod.data, Work::of(&self.form).data, "normal form identity failed");
        assert_eq!(self.left.det()?.abs(), 1, "left transform not unimodular");
        assert_eq!(self.right.det()?.abs(), 1, "right transform not unimodular");
        Ok(())
    }
}

fn smallest_nonzero(d: &Work, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = d.data[i][j];
            if x != 0 && best.is_none_or(|(bi, bj)| x.unsigned_abs() < d.data[bi][bj].unsigned_abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<IntMatrixNF, SemigroupError> {
    let (k, n) = (m.rows, m.cols);
    let mut d = Work::of(m);
    let mut u = Work::identity(k);
    let mut v = Work::identity(n);
    for t in 0..k.min(n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, t) else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let piv = d.data[t][t];
            let mut clean = true;
            for i in t + 1..k {
                let q = d.data[i][t] / piv;
                d.sub_row(i, t, q)?;
                u.sub_row(i, t, q)?;
                clean &= d.data[i][t] == 0;
            }
            for j in t + 1..n {
                let q = d.data[t][j] / piv;
                d.sub_col(j, t, q)?;
                v.sub_col(j, t, q)?;
                clean &= d.data[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..k).find(|&i| (t + 1..n).any(|j| d.data[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    d.sub_row(t, i, -1)?;
                    u.sub_row(t, i, -1)?;
                }
                None => break,
            }
        }
        if t < k && t < n && d.data[t][t] < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    let nf = IntMatrixNF { original: m.clone(), left: u.narrow()?, right: v.narrow()?, form: d.narrow()? };
    nf.verify()?;
    Ok(nf)
}

/// Row-style Hermite form: `U·M = H` with `H` in echelon form, positive
/// pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<IntMatrixNF, SemigroupError> {
    let (k, n) = (m.rows, m.cols);
    let mut h = Work::of(m);
    let mut u = Work::identity(k);
    let mut r = 0;
    for c in 0..n {
        if r == k {
            break;
        }
        loop {
            let pick = (r..k).filter(|&i| h.data[i][c] != 0).min_by_key(|&i| h.data[i][c].unsigned_abs());
            let Some(i) = pick else { break };
            h.swap_rows(r, i);
            u.swap_rows(r, i);
            let piv = h.data[r][c];
            let mut clean = true;
            for i in r + 1..k {
                let q = h.data[i][c] / piv;
                h.sub_row(i, r, q)?;
                u.sub_row(i, r, q)?;
                clean &= h.data[i][c] == 0;
            }
            if clean {
                break;
            }
        }
        if h.data[r][c] == 0 {
            continue;
        }
        if h.data[r][c] < 0 {
            h.negate_row(r);
            u.negate_row(r);
        }
        let piv = h.data[r][c];
        for i in 0..r {
            let q = h.data[i][c].div_euclid(piv);
            h.sub_row(i, r, q)?;
            u.sub_row(i, r, q)?;
        }
        r += 1;
    }
    let nf = IntMatrixNF { original: m.clone(), left: u.narrow()?, right: IntMatrix::identity(n), form: h.narrow()? };
    nf.verify()?;
    Ok(nf)
}

/// A lattice in `Z^n` held by its Hermite basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn spanned_by(dim: usize, vectors: &[Vec<i64>]) -> Result<Self, SemigroupError> {
        let hnf = hermite_normal_form(&IntMatrix::from_rows(dim, vectors.to_vec()))?;
        let basis: Vec<Vec<i64>> = hnf.form.data.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
        let pivots = basis.iter().map(|r| r.iter().position(|&x| x != 0).expect("nonzero row")).collect();
        Ok(Lattice { dim, basis, pivots })
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool, SemigroupError> {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            if w[..c].iter().any(|&x| x != 0) {
                return Ok(false);
            }
            if w[c] % row[c] != 0 {
                return Ok(false);
            }
            let q = w[c] / row[c];
            for (x, &y) in w.iter_mut().zip(row) {
                *x = ck(x.checked_sub(ck(y.checked_mul(q))?))?;
            }
        }
        Ok(w.iter().all(|&x| x == 0))
    }

    /// Order of `v` modulo the lattice: the least `m > 0` with `m·v` in the
    /// lattice, or `None` if no multiple lies in it.
    pub fn order_of(&self, v: &[i64]) -> Result<Option<u64>, SemigroupError> {
        if self.basis.is_empty() {
            return Ok(v.iter().all(|&x| x == 0).then_some(1));
        }
        let snf = smith_normal_form(&IntMatrix::from_rows(self.dim, self.basis.clone()))?;
        let w = IntMatrix::from_rows(self.dim, vec![v.to_vec()]).mul(&snf.right)?;
        let w = w.row(0);
        let diag = snf.diagonal();
        let mut m: u64 = 1;
        for (i, &x) in w.iter().enumerate() {
            let d = diag.get(i).copied().unwrap_or(0);
            if d == 0 {
                if x != 0 {
                    return Ok(None);
                }
                continue;
            }
            let d = d.unsigned_abs();
            let need = d / gcd(d, x.unsigned_abs());
            m = lcm(m, need).ok_or(SemigroupError::Overflow)?;
        }
        Ok(Some(m))
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> Option<u64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// Integer basis of `{y : M·y = 0}`, as rows.
pub fn integer_kernel(m: &IntMatrix) -> Result<Vec<Vec<i64>>, SemigroupError> {
    let snf = smith_normal_form(m)?;
    let r = snf.rank();
    Ok((r..m.cols).map(|j| (0..m.cols).map(|i| snf.right.data[i][j]).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows[0].len(), rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_normal_form(&mat(&[&[2, 0], &[0, 3]])).unwrap().diagonal(), vec![1, 6]);
        assert_eq!(smith_normal_form(&IntMatrix::identity(3)).unwrap().form, IntMatrix::identity(3));
        assert_eq!(smith_normal_form(&mat(&[&[2]])).unwrap().diagonal(), vec![2]);
        let nf = smith_normal_form(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).unwrap();
        assert_eq!(nf.diagonal(), vec![2, 6, 12]);
    }

    #[test]
    fn hermite_and_membership() {
        let l = Lattice::spanned_by(2, &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
        assert_eq!(l.basis(), &[vec![1, 1], vec![0, 2]]);
        assert!(l.contains(&[3, 1]).unwrap());
        assert!(!l.contains(&[1, 0]).unwrap());
        assert_eq!(l.order_of(&[1, 0]).unwrap(), Some(2));
        assert_eq!(l.order_of(&[2, 2]).unwrap(), Some(1));
        let line = Lattice::spanned_by(2, &[vec![2, 2]]).unwrap();
        assert_eq!(line.order_of(&[1, 0]).unwrap(), None);
        assert_eq!(line.order_of(&[1, 1]).unwrap(), Some(2));
    }

    #[test]
    fn determinants_and_kernel() {
        assert_eq!(mat(&[&[2, 1], &[1, 1]]).det().unwrap(), 1);
        assert_eq!(mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).det().unwrap(), -5);
        let k = integer_kernel(&mat(&[&[1, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0] + k[0][1], 0);
        assert_eq!(k[0][2], 0);
    }

    #[test]
    fn overflow_is_an_error() {
        let m = mat(&[&[i64::MAX, 1], &[i64::MAX, 3]]);
        assert!(matches!(m.mul(&m), Err(SemigroupError::Overflow)));
    }
}
