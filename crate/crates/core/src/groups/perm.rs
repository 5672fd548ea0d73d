//! Permutations of {0..n−1} and subgroups of Perm(G).

use super::{FiniteGroup, GroupError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// A bijection of {0..n−1}. Composition is right to left:
/// `a.compose(b)` is x ↦ a(b(x)).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(GroupError::NotAGroup("not a bijection".into()));
            }
            seen[x] = true;
        }
        if n > 255 {
            return Err(GroupError::BoundExceeded { what: "permutation degree", order: n, bound: 255 });
        }
        Ok(Permutation { images: images.into_iter().map(|x| x as u8).collect() })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u8).collect() }
    }

    /// Permutation from 1-based cycles, e.g. `[[1,3,2,4]]`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut img: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                let y = c[(i + 1) % c.len()];
                if x == 0 || y == 0 || x > n || y > n {
                    return Err(GroupError::InvalidParameters("cycle entry out of range".into()));
                }
                img[x - 1] = y - 1;
            }
        }
        Permutation::new(img)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// g η g⁻¹
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.compose(self).compose(&g.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i == x as usize).count()
    }

    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .fold(1, |acc, c| num_integer::lcm(acc, c.len()))
    }

    /// Cycles of length ≥ 2, 0-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// Sorted cycle lengths including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        v.extend(std::iter::repeat_n(1, self.fixed_points()));
        v.sort_unstable();
        v
    }

    /// Fixed-point free with all cycles of equal length (or the identity).
    pub fn is_semiregular(&self) -> bool {
        let t = self.cycle_type();
        t.iter().all(|&l| l == t[0])
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation, `(1)` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "(1)");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", s.join(","))?;
        }
        Ok(())
    }
}

/// A subgroup of Perm({0..n−1}), elements kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PermSubgroup {
    degree: usize,
    elements: Vec<Permutation>,
}

impl PermSubgroup {
    /// Closure of `gens` under composition.
    pub fn generated(degree: usize, gens: &[Permutation]) -> Self {
        let mut elems = vec![Permutation::identity(degree)];
        let mut seen: std::collections::HashSet<Permutation> = elems.iter().cloned().collect();
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let y = elems[i].compose(g);
                if seen.insert(y.clone()) {
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort();
        PermSubgroup { degree, elements: elems }
    }

    /// From a full element list; checks closure.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Result<Self, GroupError> {
        elements.sort();
        elements.dedup();
        let g = PermSubgroup { degree, elements };
        if g.elements.iter().any(|p| p.degree() != degree)
            || !g.contains(&Permutation::identity(degree))
            || !g
                .elements
                .iter()
                .all(|a| g.elements.iter().all(|b| g.contains(&a.compose(b))))
        {
            return Err(GroupError::NotAGroup("permutations not closed".into()));
        }
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    /// Transitive with |N| = degree; equivalently only the identity fixes
    /// a point.
    pub fn is_regular(&self) -> bool {
        self.order() == self.degree
            && self.elements.iter().all(|p| p.is_identity() || p.fixed_points() == 0)
    }

    /// For regular N: the element sending 0 to `p`.
    pub fn element_sending_zero_to(&self, p: usize) -> Option<&Permutation> {
        self.elements.iter().find(|e| e.apply(0) == p)
    }

    /// Abstract group on the sorted element list (identity is index 0).
    pub fn as_group(&self) -> FiniteGroup {
        let pos: HashMap<&Permutation, usize> =
            self.elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = self
            .elements
            .iter()
            .map(|a| self.elements.iter().map(|b| pos[&a.compose(b)]).collect())
            .collect();
        FiniteGroup::from_table(table)
            .expect("closed permutation set")
            .with_labels(self.elements.iter().map(|p| p.to_string()).collect())
    }

    /// Cycle strings of the elements, sorted.
    pub fn cycle_strings(&self) -> Vec<String> {
        let mut v: Vec<String> = self.elements.iter().map(|p| p.to_string()).collect();
        v.sort();
        v
    }

    pub fn is_normalized_by(&self, g: &Permutation) -> bool {
        self.elements.iter().all(|e| self.contains(&e.conjugate_by(g)))
    }
}

/// λ(g) for every g, indexed by g.
pub fn lambda_perms(g: &FiniteGroup) -> Vec<Permutation> {
    (0..g.order())
        .map(|a| Permutation::new((0..g.order()).map(|h| g.mul(a, h)).collect()).unwrap())
        .collect()
}

/// λ(G) = {h ↦ gh}.
pub fn left_regular_rep(g: &FiniteGroup) -> PermSubgroup {
    PermSubgroup::from_elements(g.order(), lambda_perms(g)).unwrap()
}

/// ρ(G) = {h ↦ hg⁻¹}.
pub fn right_regular_rep(g: &FiniteGroup) -> PermSubgroup {
    let elems = (0..g.order())
        .map(|a| Permutation::new((0..g.order()).map(|h| g.mul(h, g.inv(a))).collect()).unwrap())
        .collect();
    PermSubgroup::from_elements(g.order(), elems).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{klein, make_group};

    #[test]
    fn cycle_notation() {
        let p = Permutation::from_cycles(4, &[vec![1, 3, 2, 4]]).unwrap();
        assert_eq!(p.to_string(), "(1,3,2,4)");
        assert_eq!(p.order(), 4);
        assert_eq!(Permutation::identity(3).to_string(), "(1)");
        let a = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[vec![2, 3]]).unwrap();
        // a∘b sends 2 → 3 → 3 and 3 → 2 → 1
        assert_eq!(a.compose(&b).to_string(), "(1,2,3)");
    }

    #[test]
    fn lambda_of_klein_matches_labels() {
        let l = left_regular_rep(&klein());
        assert_eq!(
            l.cycle_strings(),
            vec!["(1)", "(1,2)(3,4)", "(1,3)(2,4)", "(1,4)(2,3)"]
        );
    }

    #[test]
    fn lambda_is_regular_and_isomorphic() {
        for name in ["C2", "Q8", "S3", "D4"] {
            let g = make_group(name).unwrap();
            let l = left_regular_rep(&g);
            assert!(l.is_regular());
            assert!(crate::groups::is_isomorphic(&l.as_group(), &g));
        }
    }
}
