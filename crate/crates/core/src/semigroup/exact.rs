//! Exact membership on the smallest face containing the target. With `E`
//! one generator per extremal ray and `D` the determinant of a maximal minor
//! of `E`, a simplicial face has every other generator `g` satisfying
//! `P_g·g ∈ N·E` for some `P_g | D`, so its coefficient only matters modulo
//! `P_g`. Other faces fall back to a bounded scan of the coefficients of the
//! generators outside a basis.

use super::SemigroupError;

pub(crate) fn parallel(a: &[i64], b: &[i64]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if i128::from(a[i]) * i128::from(b[j]) != i128::from(a[j]) * i128::from(b[i]) {
                return false;
            }
        }
    }
    true
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    go(0, n, r, &mut cur, &mut out);
    out
}

/// `gens` are the generators on the smallest face containing `a`, `rank`
/// the dimension of that face, and `extremal(g)` tells whether `g` spans an
/// extremal ray of it. `None` only when no basis can be chosen.
pub(crate) fn decide(
    gens: &[Vec<i64>],
    rank: usize,
    a: &[i64],
    extremal: impl Fn(&[i64]) -> Result<bool, SemigroupError>,
    budget: usize,
) -> Result<Option<bool>, SemigroupError> {
    let mut rays: Vec<&Vec<i64>> = Vec::new();
    for g in gens {
        if !extremal(g)? {
            continue;
        }
        match rays.iter().position(|r| parallel(r, g)) {
            Some(i) if rays[i].iter().sum::<i64>() > g.iter().sum::<i64>() => rays[i] = g,
            Some(_) => {}
            None => rays.push(g),
        }
    }
    if rank == 0 || rays.len() < rank {
        return Ok(None);
    }
    if rays.len() == rank {
        return Basis::new(&rays).map_or(Ok(None), |b| b.solve(gens, a, budget).map(Some));
    }
    // cheap first: a decomposition inside one simplicial subcone
    for pick in subsets(rays.len(), rank) {
        let sub: Vec<&Vec<i64>> = pick.iter().map(|&i| rays[i]).collect();
        let Some(b) = Basis::new(&sub) else { continue };
        let inside: Vec<Vec<i64>> = gens.iter().filter(|g| b.coords(g).iter().all(|&x| x >= 0)).cloned().collect();
        if b.solve(&inside, a, budget)? {
            return Ok(Some(true));
        }
    }
    enumerate(gens, rank, a, budget)
}

/// Exact search over the coefficients of the generators outside a basis:
/// all but the last are scanned up to their coordinate bounds, the last is
/// an interval intersected with a residue class. Linear in `|a|` when two
/// generators lie outside the basis.
fn enumerate(gens: &[Vec<i64>], rank: usize, a: &[i64], budget: usize) -> Result<Option<bool>, SemigroupError> {
    let mut order: Vec<&Vec<i64>> = gens.iter().collect();
    order.sort_by_key(|g| g.iter().sum::<i64>());
    let Some((pick, basis)) = subsets(order.len(), rank).into_iter().find_map(|pick| {
        let sub: Vec<&Vec<i64>> = pick.iter().map(|&i| order[i]).collect();
        Basis::new(&sub).map(|b| (pick, b))
    }) else {
        return Ok(None);
    };
    let mut free: Vec<&Vec<i64>> = (0..order.len()).filter(|i| !pick.contains(i)).map(|i| order[i]).collect();
    free.reverse();
    let search = Search {
        d: basis.d,
        free: free.iter().map(|g| ((*g).clone(), basis.coords(g))).collect(),
        budget,
        visited: std::cell::Cell::new(0),
    };
    search.level(0, a.to_vec(), basis.coords(a)).map(Some)
}

struct Search {
    d: i128,
    free: Vec<(Vec<i64>, Vec<i128>)>,
    budget: usize,
    visited: std::cell::Cell<usize>,
}

impl Search {
    fn tick(&self) -> Result<(), SemigroupError> {
        let v = self.visited.get() + 1;
        self.visited.set(v);
        if v > self.budget {
            return Err(SemigroupError::BudgetExhausted(self.budget));
        }
        Ok(())
    }

    /// `rest` is what remains of the target, `u` its scaled basis coordinates.
    fn level(&self, j: usize, rest: Vec<i64>, u: Vec<i128>) -> Result<bool, SemigroupError> {
        let d = self.d;
        if j == self.free.len() {
            return Ok(u.iter().all(|&x| x >= 0 && x % d == 0));
        }
        let (g, w) = &self.free[j];
        let cap = g.iter().zip(&rest).filter(|(x, _)| **x > 0).map(|(x, y)| y / x).min().unwrap_or(0);
        if j + 1 < self.free.len() {
            for t in 0..=cap {
                self.tick()?;
                let r: Vec<i64> = rest.iter().zip(g).map(|(x, y)| x - t * y).collect();
                let v: Vec<i128> = u.iter().zip(w).map(|(x, y)| x - i128::from(t) * y).collect();
                if self.level(j + 1, r, v)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        // u - t·w >= 0 and divisible by d
        let (mut lo, mut hi) = (0i128, i128::from(cap));
        for (&x, &y) in u.iter().zip(w) {
            match y.signum() {
                1 => hi = hi.min(x.div_euclid(y)),
                -1 => lo = lo.max(-x.div_euclid(-y)),
                _ if x < 0 => return Ok(false),
                _ => {}
            }
        }
        let mut t = lo;
        while t <= hi && t < lo + d {
            self.tick()?;
            if u.iter().zip(w).all(|(x, y)| (x - t * y) % d == 0) {
                return Ok(true);
            }
            t += 1;
        }
        Ok(false)
    }
}

struct Basis<'a> {
    rays: Vec<&'a Vec<i64>>,
    rows: Vec<usize>,
    adj: Vec<Vec<i128>>,
    d: i128,
}

impl<'a> Basis<'a> {
    /// `None` when the rays are linearly dependent.
    fn new(rays: &[&'a Vec<i64>]) -> Option<Self> {
        let rank = rays.len();
        let n = rays[0].len();
        let (rows, m, mut d) = subsets(n, rank).into_iter().find_map(|rows| {
            let m: Vec<Vec<i128>> = rows.iter().map(|&i| rays.iter().map(|r| i128::from(r[i])).collect()).collect();
            let d = det(&m);
            (d != 0).then_some((rows, m, d))
        })?;
        // adj[i][j] = (-1)^(i+j) det(m without row j, column i)
        let mut adj = vec![vec![0i128; rank]; rank];
        for (i, row) in adj.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let minor: Vec<Vec<i128>> = m
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| *r != j)
                    .map(|(_, r)| r.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, v)| *v).collect())
                    .collect();
                *x = if (i + j) % 2 == 0 { det(&minor) } else { -det(&minor) };
            }
        }
        if d < 0 {
            d = -d;
            adj.iter_mut().flatten().for_each(|x| *x = -*x);
        }
        Some(Basis { rays: rays.to_vec(), rows, adj, d })
    }

    /// `D` times the coordinates of `v` in the basis.
    fn coords(&self, v: &[i64]) -> Vec<i128> {
        self.adj.iter().map(|row| row.iter().zip(&self.rows).map(|(c, &i)| c * i128::from(v[i])).sum()).collect()
    }

    /// Whether `a` is an `N`-combination of `gens`, all of which lie in the
    /// cone of the basis, which must be among them. `a` is assumed to lie in
    /// the span of the basis.
    fn solve(&self, gens: &[Vec<i64>], a: &[i64], budget: usize) -> Result<bool, SemigroupError> {
        let d = self.d;
        let mut others: Vec<(Vec<i128>, i128)> = Vec::new();
        for g in gens {
            if self.rays.contains(&g) {
                continue;
            }
            let l = self.coords(g);
            let period = d / l.iter().fold(d, |acc, &x| gcd(acc, x));
            others.push((l, period));
        }
        let target = self.coords(a);
        if target.iter().any(|&x| x < 0) {
            return Ok(false);
        }
        let mut visited = 0usize;
        let mut stack: Vec<(usize, Vec<i128>)> = vec![(0, target)];
        while let Some((i, y)) = stack.pop() {
            visited += 1;
            if visited > budget {
                return Err(SemigroupError::BudgetExhausted(budget));
            }
            if i == others.len() {
                if y.iter().all(|x| x % d == 0) {
                    return Ok(true);
                }
                continue;
            }
            let (l, period) = &others[i];
            let mut cur = y;
            for _ in 0..*period {
                stack.push((i + 1, cur.clone()));
                cur = cur.iter().zip(l).map(|(x, y)| x - y).collect();
                if cur.iter().any(|&x| x < 0) {
                    break;
                }
            }
        }
        Ok(false)
    }
}
