//! Finite-dimensional associative ℚ-algebras by structure constants.

use crate::exact::linalg::{self, Echelon, Frame, Matrix, SparseVec};
use crate::exact::rat::{self, Rat};
use crate::exact::Poly;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("{0} is not closed under multiplication")]
    NotClosed(String),
    #[error("axiom fails: {0}")]
    Axiom(String),
}

/// bᵢ·bⱼ = Σₖ mult[i][j][k] bₖ, with an explicit unit vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Algebra {
    dim: usize,
    #[serde(with = "sparse_table")]
    mult: Vec<Vec<SparseVec>>,
    #[serde(with = "rat::serde_rat_vec")]
    unit: Vec<Rat>,
}

mod sparse_table {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<SparseVec>], s: S) -> Result<S::Ok, S::Error> {
        let mut triples = Vec::new();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                for (k, x) in v {
                    triples.push((i, j, k, rat::to_text(x)));
                }
            }
        }
        s.collect_seq(triples)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<SparseVec>>, D::Error> {
        let triples: Vec<(usize, usize, usize, String)> = Vec::deserialize(d)?;
        let n = triples.iter().map(|t| t.0.max(t.1).max(t.2) + 1).max().unwrap_or(0);
        let mut m = vec![vec![Vec::new(); n]; n];
        for (i, j, k, x) in triples {
            m[i][j].push((k, rat::parse(&x).map_err(serde::de::Error::custom)?));
        }
        Ok(m)
    }
}

impl Algebra {
    pub fn new(dim: usize, mult: Vec<Vec<SparseVec>>, unit: Vec<Rat>) -> Result<Self, AlgebraError> {
        if mult.len() != dim || mult.iter().any(|r| r.len() != dim) || unit.len() != dim {
            return Err(AlgebraError::Shape(format!("expected a {dim}-dimensional table")));
        }
        if mult.iter().flatten().flatten().any(|(k, _)| *k >= dim) {
            return Err(AlgebraError::Shape("product index out of range".into()));
        }
        let mult = mult
            .into_iter()
            .map(|r| r.into_iter().map(|v| linalg::canonical(&v)).collect())
            .collect();
        Ok(Algebra { dim, mult, unit })
    }

    /// Restore the zero-dimensional shape after deserializing an empty
    /// table, and recheck shapes.
    pub fn validated(self, dim: usize) -> Result<Self, AlgebraError> {
        let mut mult = self.mult;
        if mult.len() < dim {
            mult.resize(dim, Vec::new());
        }
        for r in &mut mult {
            r.resize(dim, Vec::new());
        }
        Algebra::new(dim, mult, self.unit)
    }

    /// ℚ[x]/(f) in the basis 1, x, …, x^{n−1}.
    pub fn power_basis(f: &Poly) -> Self {
        let f = f.monic();
        let n = f.deg();
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let r = Poly::monomial(Rat::one(), i + j).rem(&f);
                        linalg::sparse_from_dense(&pad(r.coeffs(), n))
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![Rat::zero(); n];
        unit[0] = Rat::one();
        Algebra { dim: n, mult, unit }
    }

    /// ℚⁿ with the coordinate idempotents as basis.
    pub fn split(n: usize) -> Self {
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { vec![(i, Rat::one())] } else { vec![] })
                    .collect()
            })
            .collect();
        Algebra { dim: n, mult, unit: vec![Rat::one(); n] }
    }

    /// A₁ × ⋯ × Aₖ, bases concatenated.
    pub fn product(parts: &[&Algebra]) -> Self {
        let dim: usize = parts.iter().map(|a| a.dim).sum();
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        let mut unit = Vec::with_capacity(dim);
        let mut off = 0;
        for a in parts {
            for i in 0..a.dim {
                for j in 0..a.dim {
                    mult[off + i][off + j] =
                        a.mult[i][j].iter().map(|(k, x)| (off + k, x.clone())).collect();
                }
            }
            unit.extend(a.unit.iter().cloned());
            off += a.dim;
        }
        Algebra { dim, mult, unit }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Rat] {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        v[i] = Rat::one();
        v
    }

    pub fn mul(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, v) in &self.mult[i][j] {
                    out[*k] += &c * v;
                }
            }
        }
        out
    }

    pub fn mul_sparse(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out: std::collections::BTreeMap<usize, Rat> = Default::default();
        for (i, xi) in x {
            for (j, yj) in y {
                let c = xi * yj;
                for (k, v) in &self.mult[*i][*j] {
                    *out.entry(*k).or_insert_with(Rat::zero) += &c * v;
                }
            }
        }
        out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn pow(&self, x: &[Rat], e: usize) -> Vec<Rat> {
        (0..e).fold(self.unit.clone(), |acc, _| self.mul(&acc, x))
    }

    /// Matrix of y ↦ x·y (column j is x·bⱼ).
    pub fn left_matrix(&self, x: &[Rat]) -> Matrix {
        let cols: Vec<Vec<Rat>> = (0..self.dim).map(|j| self.mul(x, &self.basis_vector(j))).collect();
        linalg::transpose(&cols)
    }

    pub fn trace(&self, x: &[Rat]) -> Rat {
        let mut t = Rat::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, v) in &self.mult[i][j] {
                    if *k == j {
                        t += xi * v;
                    }
                }
            }
        }
        t
    }

    /// Rank of the trace form (x, y) ↦ tr(L_{xy}).
    pub fn trace_form_rank(&self) -> usize {
        let traces: Vec<Rat> = (0..self.dim).map(|k| self.trace(&self.basis_vector(k))).collect();
        let rows = (0..self.dim).map(|i| {
            (0..self.dim)
                .filter_map(|j| {
                    let t: Rat = self.mult[i][j].iter().map(|(k, v)| v * &traces[*k]).sum();
                    (!t.is_zero()).then_some((j, t))
                })
                .collect::<SparseVec>()
        });
        linalg::rank_of_rows(self.dim, rows)
    }

    /// In characteristic zero: semisimple iff the trace form is
    /// nondegenerate.
    pub fn is_semisimple(&self) -> bool {
        self.trace_form_rank() == self.dim
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.mult[i][j] == self.mult[j][i]))
    }

    pub fn check_associative(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let left = self.mul_sparse(&self.mult[i][j], &vec![(k, Rat::one())]);
                    let right = self.mul_sparse(&vec![(i, Rat::one())], &self.mult[j][k]);
                    if left != right {
                        return Err(AlgebraError::Axiom(format!("associativity at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_unit(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim {
            let b = self.basis_vector(i);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                return Err(AlgebraError::Axiom(format!("unit law at {i}")));
            }
        }
        Ok(())
    }

    /// ℚ-basis of the center (canonical nullspace basis).
    pub fn center(&self) -> Vec<Vec<Rat>> {
        let mut ech = Echelon::new(self.dim);
        // x central iff Σ x_i (b_i b_j − b_j b_i) = 0 for all j
        for j in 0..self.dim {
            let mut rows = vec![std::collections::BTreeMap::<usize, Rat>::new(); self.dim];
            for i in 0..self.dim {
                for (k, v) in &self.mult[i][j] {
                    *rows[*k].entry(i).or_insert_with(Rat::zero) += v;
                }
                for (k, v) in &self.mult[j][i] {
                    *rows[*k].entry(i).or_insert_with(Rat::zero) -= v;
                }
            }
            for r in rows {
                ech.insert(r.into_iter().filter(|(_, v)| !v.is_zero()).collect());
            }
        }
        ech.nullspace().1
    }

    /// Monic minimal polynomial of x, by Krylov iteration on powers.
    pub fn min_poly(&self, x: &[Rat]) -> Poly {
        let mut powers = vec![self.unit.clone()];
        let mut ech = Echelon::new(self.dim);
        ech.insert(linalg::sparse_from_dense(&self.unit));
        loop {
            let next = self.mul(powers.last().unwrap(), x);
            if !ech.insert(linalg::sparse_from_dense(&next)) {
                let cols = linalg::transpose(&powers);
                let c = linalg::solve(&cols, &next).expect("dependent power is in the span");
                let mut coeffs: Vec<Rat> = c.into_iter().map(|v| -v).collect();
                coeffs.push(Rat::one());
                return Poly::new(coeffs);
            }
            powers.push(next);
        }
    }

    pub fn eval_poly(&self, p: &Poly, x: &[Rat]) -> Vec<Rat> {
        let mut acc = vec![Rat::zero(); self.dim];
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            linalg::axpy(&mut acc, c, &self.unit);
        }
        acc
    }

    /// The subalgebra spanned by `basis` with unit `unit` (which must lie in
    /// the span), in coordinates of that basis.
    pub fn subalgebra(&self, basis: &[Vec<Rat>], unit: &[Rat]) -> Result<(Algebra, Frame), AlgebraError> {
        let frame = Frame::from_dense(basis)
            .ok_or_else(|| AlgebraError::Shape("subalgebra basis is dependent".into()))?;
        let d = basis.len();
        let mut mult = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let p = self.mul(&basis[i], &basis[j]);
                let c = frame
                    .coords_dense(&p)
                    .ok_or_else(|| AlgebraError::NotClosed("span".into()))?;
                mult[i][j] = linalg::sparse_from_dense(&c);
            }
        }
        let u = frame
            .coords_dense(unit)
            .ok_or_else(|| AlgebraError::NotClosed("unit".into()))?;
        Ok((Algebra { dim: d, mult, unit: u }, frame))
    }

    /// Is `x` invertible (L_x nonsingular)?
    pub fn is_unit(&self, x: &[Rat]) -> bool {
        linalg::rank(&self.left_matrix(x)) == self.dim
    }

    pub fn inverse(&self, x: &[Rat]) -> Option<Vec<Rat>> {
        linalg::solve(&self.left_matrix(x), &self.unit)
    }

    /// Is `m` (column j = image of bⱼ) an algebra automorphism?
    pub fn is_automorphism(&self, m: &Matrix) -> bool {
        if linalg::rank(m) != self.dim || linalg::mat_vec(m, &self.unit) != self.unit {
            return false;
        }
        let cols = linalg::transpose(m);
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let lhs = linalg::mat_vec(m, &linalg::dense_from_sparse(&self.mult[i][j], self.dim));
                lhs == self.mul(&cols[i], &cols[j])
            })
        })
    }
}

fn pad(c: &[Rat], n: usize) -> Vec<Rat> {
    let mut v = c.to_vec();
    v.resize(n, Rat::zero());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::int;

    #[test]
    fn power_basis_field() {
        let a = Algebra::power_basis(&Poly::from_ints(&[1, 1, 1]));
        a.check_associative().unwrap();
        a.check_unit().unwrap();
        assert!(a.is_commutative());
        assert!(a.is_semisimple());
        assert_eq!(a.min_poly(&[int(0), int(1)]), Poly::from_ints(&[1, 1, 1]));
        assert_eq!(a.center().len(), 2);
    }

    #[test]
    fn dual_numbers_are_not_semisimple() {
        let a = Algebra::power_basis(&Poly::from_ints(&[0, 0, 1]));
        assert!(!a.is_semisimple());
    }

    #[test]
    fn matrix_algebra_center_is_scalars() {
        // Mat₂(ℚ) with basis e11, e12, e21, e22
        let e = |r: usize, c: usize| 2 * r + c;
        let mut mult = vec![vec![Vec::new(); 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        if b == c {
                            mult[e(a, b)][e(c, d)] = vec![(e(a, d), Rat::one())];
                        }
                    }
                }
            }
        }
        let m = Algebra::new(4, mult, vec![int(1), int(0), int(0), int(1)]).unwrap();
        m.check_associative().unwrap();
        assert_eq!(m.center(), vec![vec![int(1), int(0), int(0), int(1)]]);
        assert!(m.is_semisimple());
        assert!(!m.is_commutative());
    }

    #[test]
    fn product_and_json() {
        let p = Algebra::product(&[&Algebra::split(2), &Algebra::power_basis(&Poly::from_ints(&[-2, 0, 1]))]);
        assert_eq!(p.dim(), 4);
        p.check_associative().unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: Algebra = serde_json::from_str(&s).unwrap();
        assert_eq!(back.validated(4).unwrap(), p);
    }
}
