//! Exact linear algebra over ℚ.
//!
//! Two flavours: an incremental sparse echelon form for the big
//! fixed-point and rank problems (thousands of columns, a handful of
//! nonzeros per row), and plain dense helpers for the small matrices
//! that carry algebra actions and basis changes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::rat::Rat;

/// Sorted `(column, value)` pairs with nonzero values.
pub type SparseVec = Vec<(usize, Rat)>;

/// Row-major dense matrix.
pub type Matrix = Vec<Vec<Rat>>;

pub fn sparse_from_dense(v: &[Rat]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Incrementally maintained row echelon form.
///
/// Every stored row has a leading 1 at its pivot column and nothing to
/// its left; new rows are reduced against all existing pivots before
/// they are stored.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    /// Reduce `v` against the stored pivots.
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        let mut work: BTreeMap<usize, Rat> = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        let mut cursor = 0usize;
        loop {
            let next = work.range(cursor..).next().map(|(c, _)| *c);
            let Some(c) = next else { break };
            cursor = c + 1;
            let Some(&r) = self.pivot_row.get(&c) else { continue };
            let coef = work.remove(&c).unwrap();
            for (col, val) in self.rows[r].iter().skip(1) {
                let e = work.entry(*col).or_insert_with(Rat::zero);
                *e -= &coef * val;
                if e.is_zero() {
                    work.remove(col);
                }
            }
        }
        work.into_iter().collect()
    }

    /// Add a row; returns `true` when it raised the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let red = self.reduce(v);
        let Some((pc, lead)) = red.first().cloned() else {
            return false;
        };
        let inv = Rat::one() / lead;
        let row: SparseVec = red.into_iter().map(|(c, x)| (c, x * &inv)).collect();
        self.pivot_row.insert(pc, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Fully reduce (every pivot column is zero in every other row).
    pub fn rref(&self) -> BTreeMap<usize, SparseVec> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&pc, &r) in self.pivot_row.iter().rev() {
            let mut work: BTreeMap<usize, Rat> = self.rows[r].iter().cloned().collect();
            let cols: Vec<usize> = work.keys().copied().filter(|c| *c > pc).collect();
            for c in cols {
                if let Some(other) = done.get(&c) {
                    let Some(coef) = work.remove(&c) else { continue };
                    for (col, val) in other.iter().skip(1) {
                        let e = work.entry(*col).or_insert_with(Rat::zero);
                        *e -= &coef * val;
                        if e.is_zero() {
                            work.remove(col);
                        }
                    }
                }
            }
            done.insert(pc, work.into_iter().collect());
        }
        done
    }

    /// Canonical nullspace basis of the row space's annihilator.
    ///
    /// One vector per free column `f`, with a 1 at `f` and zeros at every
    /// other free column; coordinates of any vector in the nullspace are
    /// therefore its entries at the free columns.
    pub fn nullspace(&self) -> (Vec<usize>, Vec<Vec<Rat>>) {
        let free: Vec<usize> = (0..self.ncols)
            .filter(|c| !self.pivot_row.contains_key(c))
            .collect();
        let slot: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut basis: Vec<Vec<Rat>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.ncols];
                v[f] = Rat::one();
                v
            })
            .collect();
        for (pc, row) in self.rref() {
            for (c, val) in row.iter().skip(1) {
                let k = slot[c];
                basis[k][pc] = -val.clone();
            }
        }
        (free, basis)
    }
}

/// Coordinates with respect to a linearly independent family.
///
/// Reads the family at a set of pivot columns where it is invertible;
/// membership is then confirmed by reconstruction.
#[derive(Clone, Debug)]
pub struct Frame {
    ncols: usize,
    basis: Vec<SparseVec>,
    pivots: Vec<usize>,
    inv: Matrix,
}

impl Frame {
    /// `None` when the vectors are dependent.
    pub fn new(ncols: usize, basis: Vec<SparseVec>) -> Option<Self> {
        let mut ech = Echelon::new(ncols);
        for b in &basis {
            if !ech.insert(b.clone()) {
                return None;
            }
        }
        let pivots: Vec<usize> = ech.pivots().collect();
        let pos: BTreeMap<usize, usize> = pivots.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let d = basis.len();
        let mut s = zeros(d, d);
        for (i, b) in basis.iter().enumerate() {
            for (c, v) in b {
                if let Some(&j) = pos.get(c) {
                    s[i][j] = v.clone();
                }
            }
        }
        let inv = inverse(&s)?;
        Some(Frame { ncols, basis, pivots, inv })
    }

    pub fn from_dense(basis: &[Vec<Rat>]) -> Option<Self> {
        let n = basis.first().map_or(0, |b| b.len());
        Frame::new(n, basis.iter().map(|b| sparse_from_dense(b)).collect())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    /// Coordinates assuming `x` lies in the span.
    pub fn coords_unchecked(&self, x: &SparseVec) -> Vec<Rat> {
        let pos: BTreeMap<usize, usize> =
            self.pivots.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut xp = vec![Rat::zero(); self.pivots.len()];
        for (c, v) in x {
            if let Some(&j) = pos.get(c) {
                xp[j] = v.clone();
            }
        }
        let d = self.basis.len();
        (0..d)
            .map(|i| {
                let mut acc = Rat::zero();
                for (j, v) in xp.iter().enumerate() {
                    if !v.is_zero() && !self.inv[j][i].is_zero() {
                        acc += v * &self.inv[j][i];
                    }
                }
                acc
            })
            .collect()
    }

    /// Coordinates of `x`, or `None` if it is outside the span.
    pub fn coords(&self, x: &SparseVec) -> Option<Vec<Rat>> {
        let a = self.coords_unchecked(x);
        (self.combine(&a) == canonical(x)).then_some(a)
    }

    pub fn coords_dense(&self, x: &[Rat]) -> Option<Vec<Rat>> {
        self.coords(&sparse_from_dense(x))
    }

    /// Σ aᵢ bᵢ as a sorted sparse vector.
    pub fn combine(&self, a: &[Rat]) -> SparseVec {
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (ai, b) in a.iter().zip(&self.basis) {
            if ai.is_zero() {
                continue;
            }
            for (c, v) in b {
                *acc.entry(*c).or_insert_with(Rat::zero) += ai * v;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// Coordinates in an independent family by sparse elimination with the
/// combination tracked in extra columns; no dense inverse is formed.
#[derive(Clone, Debug)]
pub struct Solver {
    ncols: usize,
    dim: usize,
    ech: Echelon,
}

impl Solver {
    /// `None` when the vectors are dependent.
    pub fn new(ncols: usize, basis: &[SparseVec]) -> Option<Self> {
        let dim = basis.len();
        let mut ech = Echelon::new(ncols + dim);
        for (i, b) in basis.iter().enumerate() {
            let mut row = canonical(b);
            row.push((ncols + i, Rat::one()));
            if !ech.insert(row) {
                return None;
            }
        }
        if ech.pivots().any(|c| c >= ncols) {
            return None;
        }
        Some(Solver { ncols, dim, ech })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self, x: &SparseVec) -> Option<Vec<Rat>> {
        let red = self.ech.reduce(canonical(x));
        if red.first().is_some_and(|(c, _)| *c < self.ncols) {
            return None;
        }
        let mut out = vec![Rat::zero(); self.dim];
        for (c, v) in red {
            out[c - self.ncols] = -v;
        }
        Some(out)
    }
}

/// Sorted, zero-free form of a sparse vector (duplicates summed).
pub fn canonical(x: &SparseVec) -> SparseVec {
    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
    for (c, v) in x {
        *acc.entry(*c).or_insert_with(Rat::zero) += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn rank_of_rows<I: IntoIterator<Item = SparseVec>>(ncols: usize, rows: I) -> usize {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(r);
        if ech.is_full() {
            break;
        }
    }
    ech.rank()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![Rat::zero(); c]; r]
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = zeros(n, m);
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] += aik * &b[k][j];
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, v: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(Rat::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn rank(a: &Matrix) -> usize {
    let ncols = a.first().map_or(0, |r| r.len());
    rank_of_rows(ncols, a.iter().map(|r| sparse_from_dense(r)))
}

/// Right nullspace of `a` (vectors `x` with `a x = 0`), canonical basis.
pub fn nullspace(a: &Matrix, ncols: usize) -> Vec<Vec<Rat>> {
    let mut ech = Echelon::new(ncols);
    for r in a {
        ech.insert(sparse_from_dense(r));
    }
    ech.nullspace().1
}

/// Gauss–Jordan inverse; `None` when singular.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = Rat::one() / &m[col][col];
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[col].clone();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `a x = b` for square or overdetermined consistent systems with a
/// unique solution; `None` if inconsistent or underdetermined.
pub fn solve(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut ech = Echelon::new(ncols + 1);
    for (row, rhs) in a.iter().zip(b) {
        let mut r = row.clone();
        r.push(rhs.clone());
        ech.insert(sparse_from_dense(&r));
    }
    let rref = ech.rref();
    if rref.contains_key(&ncols) || rref.len() != ncols {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (pc, row) in rref {
        x[pc] = row
            .iter()
            .find(|(c, _)| *c == ncols)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rat::zero);
    }
    Some(x)
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn axpy(y: &mut [Rat], a: &Rat, x: &[Rat]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += a * xi;
        }
    }
}

pub fn scale(v: &[Rat], a: &Rat) -> Vec<Rat> {
    v.iter().map(|x| x * a).collect()
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect()
    }

    #[test]
    fn solver_matches_frame() {
        let b = vec![
            vec![(0, int(1)), (2, int(3))],
            vec![(1, int(2)), (2, int(-1))],
        ];
        let s = Solver::new(3, &b).unwrap();
        let x = vec![(0, int(2)), (1, int(6)), (2, int(3))];
        assert_eq!(s.coords(&x), Some(vec![int(2), int(3)]));
        assert_eq!(s.coords(&vec![(0, int(1))]), None);
        assert!(Solver::new(3, &[b[0].clone(), b[0].clone()]).is_none());
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&mat_vec(&a, &ns[0])));
        // free column is the last one
        assert_eq!(ns[0][2], int(1));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn solve_overdetermined() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        let x = solve(&a, &[int(2), int(3), int(5)]).unwrap();
        assert_eq!(x, vec![int(2), int(3)]);
        assert!(solve(&a, &[int(2), int(3), int(6)]).is_none());
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new(3);
        assert!(e.insert(vec![(0, int(1)), (1, int(1))]));
        assert!(e.insert(vec![(1, int(1)), (2, int(1))]));
        assert!(!e.insert(vec![(0, int(1)), (2, int(-1))]));
        assert!(e.contains(vec![(0, int(2)), (1, int(4)), (2, int(2))]));
        assert_eq!(e.rank(), 2);
    }
}
