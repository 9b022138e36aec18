//! Reduced row echelon forms over a finite field, with pivots chosen as the
//! first nonzero column.

use crate::ffield::{FieldDescriptor, Repr};

#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    /// Rows sorted by pivot column; each has a 1 at its pivot and zeros in
    /// every other pivot column.
    rows: Vec<Vec<Repr>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<Repr>] {
        &self.rows
    }

    pub fn pivot_row(&self, col: usize) -> Option<&[Repr]> {
        self.pivots.binary_search(&col).ok().map(|i| self.rows[i].as_slice())
    }

    /// Reduces `v` against the current rows in place.
    pub fn reduce(&self, k: &FieldDescriptor, v: &mut [Repr]) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = k.sub(*x, k.mul(c, r));
                }
            }
        }
    }

    pub fn contains(&self, k: &FieldDescriptor, v: &[Repr]) -> bool {
        let mut w = v.to_vec();
        self.reduce(k, &mut w);
        w.iter().all(|c| c.is_zero())
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, k: &FieldDescriptor, mut v: Vec<Repr>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        self.reduce(k, &mut v);
        let Some(piv) = v.iter().position(|c| !c.is_zero()) else { return false };
        let inv = k.inv(v[piv]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = k.mul(*x, inv);
        }
        for row in &mut self.rows {
            let c = row[piv];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = k.sub(*x, k.mul(c, r));
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
        true
    }
}
