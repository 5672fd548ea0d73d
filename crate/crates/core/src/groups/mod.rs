//! Finite groups by Cayley table, permutations of a group's underlying set,
//! automorphism groups, holomorphs and regular-subgroup enumeration.

mod iso;
mod perm;
mod presets;
mod regular;

pub use iso::{automorphism_group, find_isomorphism, holomorph, is_isomorphic, AutGroup, GroupHom};
pub use perm::{left_regular_rep, lambda_perms, right_regular_rep, PermSubgroup, Permutation};
pub use presets::{
    cyclic, dihedral, direct_product, elementary_abelian, general_linear, klein, make_group,
    quaternion8, symmetric, units_group,
};
pub use regular::{
    eta_st,
    centralizer_opp, compute_w, enumerate_regular_subgroups, quotient_embedding,
    QuotientEmbedding, SearchOptions,
};

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Largest group the isomorphism and automorphism searches accept.
pub const ISO_BOUND: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("unknown group preset {0:?}")]
    UnknownPreset(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("order {order} exceeds the {what} bound {bound}")]
    BoundExceeded { what: &'static str, order: usize, bound: usize },
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("subgroup is not normalized by the left regular representation")]
    NotNormalized,
    #[error("permutation group is not regular")]
    NotRegular,
}

/// A finite group given by its Cayley table. Index 0 is always the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
    #[serde(skip)]
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Build from a Cayley table, checking the group axioms. The identity
    /// must sit at index 0.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(GroupError::NotAGroup("table is not square".into()));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || seen[x] {
                    return Err(GroupError::NotAGroup("rows are not permutations".into()));
                }
                seen[x] = true;
            }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if seen[row[c]] {
                    return Err(GroupError::NotAGroup("columns are not permutations".into()));
                }
                seen[row[c]] = true;
            }
        }
        if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return Err(GroupError::NotAGroup("index 0 is not the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == 0).unwrap())
            .collect();
        Ok(FiniteGroup { order: n, table, preset: None, labels: None, inverses })
    }

    /// Re-derive cached data after deserializing.
    pub fn validated(self) -> Result<Self, GroupError> {
        let mut g = FiniteGroup::from_table(self.table)?;
        g.preset = self.preset;
        g.labels = self.labels;
        Ok(g)
    }

    pub fn with_preset(mut self, name: impl Into<String>) -> Self {
        self.preset = Some(name.into());
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn preset(&self) -> Option<&str> {
        self.preset.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => format!("g{a}"),
        }
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        (0..e.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order).any(|a| self.element_order(a) == self.order)
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = vec![0];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        queue.sort_unstable();
        queue
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        set.contains(&0)
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let mut comms = BTreeSet::new();
        for a in 0..self.order {
            for b in 0..self.order {
                comms.insert(self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))));
            }
        }
        self.closure(&comms.into_iter().collect::<Vec<_>>())
    }

    /// |G / [G, G]|
    pub fn abelianization_order(&self) -> usize {
        self.order / self.commutator_subgroup().len()
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for a in 0..self.order {
            if seen[a] {
                continue;
            }
            let cls: BTreeSet<usize> = (0..self.order).map(|g| self.conj(g, a)).collect();
            for &c in &cls {
                seen[c] = true;
            }
            out.push(cls.into_iter().collect());
        }
        out
    }

    /// A small generating set: elements of large order first.
    pub fn generators(&self) -> Vec<usize> {
        let mut cand: Vec<usize> = (1..self.order).collect();
        cand.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = vec![0];
        for a in cand {
            if span.len() == self.order {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Left cosets gH, each sorted; listed by smallest element index. The
    /// first element of each coset is its first-found representative.
    pub fn left_cosets(&self, h: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut c: Vec<usize> = h.iter().map(|&x| self.mul(g, x)).collect();
            c.sort_unstable();
            for &x in &c {
                seen[x] = true;
            }
            out.push(c);
        }
        out
    }

    /// Subgroup as its own group, plus the embedding indices.
    pub fn subgroup(&self, elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        if !self.is_subgroup(elems) {
            return Err(GroupError::NotAGroup("not a subgroup".into()));
        }
        let mut e: Vec<usize> = elems.to_vec();
        e.sort_unstable();
        e.dedup();
        let pos = |x: usize| e.binary_search(&x).unwrap();
        let table = e
            .iter()
            .map(|&a| e.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect();
        let mut g = FiniteGroup::from_table(table)?;
        if let Some(l) = &self.labels {
            g = g.with_labels(e.iter().map(|&a| l[a].clone()).collect());
        }
        Ok((g, e))
    }

    /// G/K for a normal subgroup K; cosets listed by smallest representative.
    pub fn quotient(&self, k: &[usize]) -> Result<(FiniteGroup, Vec<Vec<usize>>), GroupError> {
        if !self.is_subgroup(k)
            || !(0..self.order).all(|g| k.iter().all(|&x| k.contains(&self.conj(g, x))))
        {
            return Err(GroupError::NotAGroup("not a normal subgroup".into()));
        }
        let cosets = self.left_cosets(k);
        let mut which = vec![0; self.order];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                which[x] = i;
            }
        }
        let table = cosets
            .iter()
            .map(|a| cosets.iter().map(|b| which[self.mul(a[0], b[0])]).collect())
            .collect();
        Ok((FiniteGroup::from_table(table)?, cosets))
    }
}
