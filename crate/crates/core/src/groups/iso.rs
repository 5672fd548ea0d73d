//! Homomorphisms, isomorphism search, automorphism groups, holomorphs.

use super::{FiniteGroup, GroupError, ISO_BOUND};
use crate::exact::cyclotomic::units_mod;
use serde::Serialize;
use std::collections::HashMap;

/// A homomorphism given by the image of every source element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupHom {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: FiniteGroup, target: FiniteGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        let h = GroupHom { source, target, images };
        if h.images.len() != h.source.order() || h.images.iter().any(|&x| x >= h.target.order()) {
            return Err(GroupError::InvalidParameters("image table has the wrong shape".into()));
        }
        if !h.respects_tables() {
            return Err(GroupError::InvalidParameters("map is not a homomorphism".into()));
        }
        Ok(h)
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn respects_tables(&self) -> bool {
        let n = self.source.order();
        (0..n).all(|a| {
            (0..n).all(|b| {
                self.images[self.source.mul(a, b)]
                    == self.target.mul(self.images[a], self.images[b])
            })
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.images.clone();
        v.sort_unstable();
        v.dedup();
        v.len() == self.images.len()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut v = self.images.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn invariants(g: &FiniteGroup) -> (usize, Vec<usize>, usize, usize) {
    (g.order(), g.order_profile(), g.center().len(), g.abelianization_order())
}

/// Extend generator images to a homomorphism along Cayley-graph edges.
/// `None` if some edge is inconsistent.
fn extend(src: &FiniteGroup, dst: &FiniteGroup, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
    let n = src.order();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut queue = vec![0];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (s, t) in gens.iter().zip(imgs) {
            let y = src.mul(x, *s);
            let fy = dst.mul(map[x], *t);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    (queue.len() == n).then_some(map)
}

fn search(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    bijective: bool,
    all: bool,
) -> Vec<Vec<usize>> {
    let gens = src.generators();
    let dst_orders: Vec<usize> = (0..dst.order()).map(|a| dst.element_order(a)).collect();
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = src.element_order(s);
            (0..dst.order())
                .filter(|&t| if bijective { dst_orders[t] == o } else { o.is_multiple_of(dst_orders[t]) })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    fn rec(
        k: usize,
        src: &FiniteGroup,
        dst: &FiniteGroup,
        gens: &[usize],
        cands: &[Vec<usize>],
        choice: &mut Vec<usize>,
        bijective: bool,
        all: bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !all && !out.is_empty() {
            return;
        }
        if k == gens.len() {
            if let Some(map) = extend(src, dst, gens, choice) {
                if !bijective || {
                    let mut s = map.clone();
                    s.sort_unstable();
                    s.dedup();
                    s.len() == map.len()
                } {
                    out.push(map);
                }
            }
            return;
        }
        for &t in &cands[k] {
            choice[k] = t;
            rec(k + 1, src, dst, gens, cands, choice, bijective, all, out);
        }
    }
    rec(0, src, dst, &gens, &cands, &mut choice, bijective, all, &mut out);
    out
}

/// An isomorphism src → dst as an image table, if one exists.
pub fn find_isomorphism(src: &FiniteGroup, dst: &FiniteGroup) -> Option<Vec<usize>> {
    if src.order() != dst.order() || invariants(src) != invariants(dst) {
        return None;
    }
    search(src, dst, true, false).into_iter().next()
}

pub fn is_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Aut(N): the automorphism list (identity first) and the group they form
/// under composition, with index i ↔ `maps[i]` and i·j ↔ maps[i] ∘ maps[j].
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub maps: Vec<Vec<usize>>,
    pub group: FiniteGroup,
}

impl AutGroup {
    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.maps.iter().position(|m| m == map)
    }

    pub fn order(&self) -> usize {
        self.maps.len()
    }
}

pub fn automorphism_group(n: &FiniteGroup) -> Result<AutGroup, GroupError> {
    if n.order() > ISO_BOUND {
        return Err(GroupError::BoundExceeded {
            what: "automorphism search",
            order: n.order(),
            bound: ISO_BOUND,
        });
    }
    let mut maps = search(n, n, true, true);
    maps.sort();
    // the identity map is lexicographically smallest
    debug_assert!(maps[0].iter().enumerate().all(|(i, &x)| i == x));
    let index: HashMap<Vec<usize>, usize> =
        maps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let table = maps
        .iter()
        .map(|a| {
            maps.iter()
                .map(|b| index[&b.iter().map(|&x| a[x]).collect::<Vec<_>>()])
                .collect()
        })
        .collect();
    let mut group = FiniteGroup::from_table(table)?;
    if let Some(p) = n.preset() {
        group = group.with_preset(format!("Aut({p})"));
    }
    Ok(AutGroup { maps, group })
}

/// Cₙ ⋊ Aut(Cₙ) with (a, u)(b, v) = (a + ub, uv); (a, u) has index
/// a + n·(position of u in ℤₙ*).
pub fn holomorph(c: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    if !c.is_cyclic() {
        return Err(GroupError::NotCyclic);
    }
    let n = c.order();
    if n == 1 {
        return Ok(c.clone());
    }
    let units = units_mod(n as u64);
    let upos: HashMap<u64, usize> = units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let m = units.len();
    let table = (0..n * m)
        .map(|x| {
            let (a, u) = ((x % n) as u64, units[x / n]);
            (0..n * m)
                .map(|y| {
                    let (b, v) = ((y % n) as u64, units[y / n]);
                    let s = (a + u * b) % n as u64;
                    s as usize + n * upos[&(u * v % n as u64)]
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, make_group};

    #[test]
    fn small_automorphism_groups() {
        assert_eq!(automorphism_group(&cyclic(3)).unwrap().order(), 2);
        assert_eq!(automorphism_group(&cyclic(8)).unwrap().order(), 4);
        assert_eq!(automorphism_group(&make_group("C2^2").unwrap()).unwrap().order(), 6);
        assert_eq!(automorphism_group(&make_group("C3^2").unwrap()).unwrap().order(), 48);
        let aq = automorphism_group(&make_group("Q8").unwrap()).unwrap();
        assert_eq!(aq.order(), 24);
        assert!(is_isomorphic(&aq.group, &make_group("S4").unwrap()));
    }

    #[test]
    fn aut_is_closed_and_all_are_automorphisms() {
        let n = make_group("D4").unwrap();
        let a = automorphism_group(&n).unwrap();
        for m in &a.maps {
            GroupHom::new(n.clone(), n.clone(), m.clone()).unwrap();
        }
        assert!(is_isomorphic(&a.group, &n));
    }

    #[test]
    fn holomorphs() {
        assert!(is_isomorphic(&holomorph(&cyclic(3)).unwrap(), &make_group("D3").unwrap()));
        assert!(is_isomorphic(&holomorph(&cyclic(4)).unwrap(), &make_group("D4").unwrap()));
        assert!(is_isomorphic(&holomorph(&cyclic(2)).unwrap(), &cyclic(2)));
        assert_eq!(holomorph(&make_group("C2xC2").unwrap()), Err(GroupError::NotCyclic));
    }

    #[test]
    fn non_isomorphic_pairs() {
        let pairs = [("C8", "C2xC4"), ("D4", "Q8"), ("C2^3", "C2xC4"), ("C6", "S3")];
        for (a, b) in pairs {
            assert!(!is_isomorphic(&make_group(a).unwrap(), &make_group(b).unwrap()));
        }
    }
}
