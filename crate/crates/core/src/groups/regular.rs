//! Regular subgroups of Perm(G) normalized by λ(G), the subgroup W, the
//! opposite N^opp, and the embedding λ(G)/W → Aut(N).

use super::iso::{automorphism_group, is_isomorphic, AutGroup, GroupHom};
use super::perm::{lambda_perms, PermSubgroup, Permutation};
use super::{FiniteGroup, GroupError};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashSet};

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Largest |G| searched exhaustively.
    pub max_order: usize,
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_order: 8, workers: 1 }
    }
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    // Heap's algorithm
    let mut c = vec![0usize; n];
    out.push(cur.clone());
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                cur.swap(0, i);
            } else {
                cur.swap(c[i], i);
            }
            out.push(cur.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

struct Ctx<'a> {
    n: usize,
    lambda: &'a [Permutation],
    /// per image of 0, candidate elements
    by_target: Vec<Vec<Permutation>>,
    /// allowed count per element order, when a type filter is set
    profile: Option<Vec<usize>>,
}

impl Ctx<'_> {
    /// Group generated by `gens` (assumed λ-stable), or `None` once it
    /// cannot lie in a regular subgroup of the wanted type.
    fn close(&self, gens: &[Permutation]) -> Option<Vec<Permutation>> {
        let mut elems = vec![Permutation::identity(self.n)];
        let mut seen: HashSet<Permutation> = elems.iter().cloned().collect();
        let mut counts = vec![0usize; self.n + 1];
        counts[1] = 1;
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let y = elems[i].compose(g);
                if seen.contains(&y) {
                    continue;
                }
                if y.fixed_points() != 0 || !y.is_semiregular() {
                    return None;
                }
                let o = y.order();
                counts[o] += 1;
                if let Some(p) = &self.profile {
                    if counts[o] > p[o] {
                        return None;
                    }
                }
                seen.insert(y.clone());
                elems.push(y);
                if elems.len() > self.n {
                    return None;
                }
            }
            i += 1;
        }
        if !self.n.is_multiple_of(elems.len()) {
            return None;
        }
        elems.sort();
        Some(elems)
    }

    fn with_conjugates(&self, eta: &Permutation) -> Vec<Permutation> {
        let mut v: Vec<Permutation> = self.lambda.iter().map(|l| eta.conjugate_by(l)).collect();
        v.sort();
        v.dedup();
        v
    }

    fn dfs(
        &self,
        gens: &[Permutation],
        elems: &[Permutation],
        visited: &mut HashSet<Vec<Permutation>>,
        found: &mut BTreeSet<Vec<Permutation>>,
    ) {
        if elems.len() == self.n {
            found.insert(elems.to_vec());
            return;
        }
        let covered: HashSet<usize> = elems.iter().map(|e| e.apply(0)).collect();
        let p = (1..self.n).find(|p| !covered.contains(p)).unwrap();
        for eta in &self.by_target[p] {
            let mut g = gens.to_vec();
            g.extend(self.with_conjugates(eta));
            if let Some(next) = self.close(&g) {
                if visited.insert(next.clone()) {
                    self.dfs(&g, &next, visited, found);
                }
            }
        }
    }
}

/// All regular subgroups N ≤ Perm(G) normalized by λ(G), optionally only
/// those isomorphic to `type_filter`. Sorted canonically.
pub fn enumerate_regular_subgroups(
    g: &FiniteGroup,
    type_filter: Option<&FiniteGroup>,
    opts: SearchOptions,
) -> Result<Vec<PermSubgroup>, GroupError> {
    let n = g.order();
    if n > opts.max_order {
        return Err(GroupError::BoundExceeded {
            what: "regular-subgroup search",
            order: n,
            bound: opts.max_order,
        });
    }
    if let Some(t) = type_filter {
        if t.order() != n {
            return Ok(vec![]);
        }
    }
    let lambda = lambda_perms(g);
    let profile = type_filter.map(|t| {
        let mut p = vec![0usize; n + 1];
        for o in t.order_profile() {
            p[o] += 1;
        }
        p
    });
    let mut by_target = vec![Vec::new(); n];
    for imgs in all_perms(n) {
        let p = Permutation::new(imgs).unwrap();
        if p.is_identity() || p.fixed_points() != 0 || !p.is_semiregular() {
            continue;
        }
        if let Some(pr) = &profile {
            if pr[p.order()] == 0 {
                continue;
            }
        }
        by_target[p.apply(0)].push(p);
    }
    for v in &mut by_target {
        v.sort();
    }
    let ctx = Ctx { n, lambda: &lambda, by_target, profile };

    let identity = vec![Permutation::identity(n)];
    let mut found = BTreeSet::new();
    if n == 1 {
        found.insert(identity);
    } else if opts.workers <= 1 {
        let mut visited = HashSet::new();
        ctx.dfs(&[], &identity, &mut visited, &mut found);
    } else {
        // split on the element sending 0 to 1
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| GroupError::InvalidParameters(e.to_string()))?;
        let parts: Vec<BTreeSet<Vec<Permutation>>> = pool.install(|| {
            ctx.by_target[1]
                .par_iter()
                .map(|eta| {
                    let mut local = BTreeSet::new();
                    let gens = ctx.with_conjugates(eta);
                    if let Some(next) = ctx.close(&gens) {
                        let mut visited = HashSet::new();
                        visited.insert(next.clone());
                        ctx.dfs(&gens, &next, &mut visited, &mut local);
                    }
                    local
                })
                .collect()
        });
        for p in parts {
            found.extend(p);
        }
    }

    let mut out: Vec<PermSubgroup> = found
        .into_iter()
        .map(|e| PermSubgroup::from_elements(n, e).unwrap())
        .filter(|s| s.is_regular())
        .filter(|s| type_filter.is_none_or(|t| is_isomorphic(&s.as_group(), t)))
        .collect();
    out.sort();
    Ok(out)
}

/// W = {λ(g) : λ(g) η λ(g)⁻¹ = η for all η ∈ N}.
pub fn compute_w(n: &PermSubgroup, g: &FiniteGroup) -> Result<PermSubgroup, GroupError> {
    if n.degree() != g.order() {
        return Err(GroupError::InvalidParameters("degree differs from |G|".into()));
    }
    let lambda = lambda_perms(g);
    if !lambda.iter().all(|l| n.is_normalized_by(l)) {
        return Err(GroupError::NotNormalized);
    }
    let w: Vec<Permutation> = lambda
        .into_iter()
        .filter(|l| n.elements().iter().all(|e| &e.conjugate_by(l) == e))
        .collect();
    PermSubgroup::from_elements(g.order(), w)
}

/// Centralizer of a regular N in Perm(G): c_x(η(0)) = η(x).
pub fn centralizer_opp(n: &PermSubgroup) -> Result<PermSubgroup, GroupError> {
    if !n.is_regular() {
        return Err(GroupError::NotRegular);
    }
    let d = n.degree();
    let mut sending = vec![None; d];
    for e in n.elements() {
        sending[e.apply(0)] = Some(e);
    }
    let elems = (0..d)
        .map(|x| {
            Permutation::new((0..d).map(|p| sending[p].unwrap().apply(x)).collect()).unwrap()
        })
        .collect();
    PermSubgroup::from_elements(d, elems)
}

/// η_{s,t}: the 8-cycle (1, s, t, t⁻¹s⁻¹, s², s⁻¹, t⁻¹, st) on Q₈, for
/// distinct s, t among i, j, k (element indices of the `Q8` preset).
pub fn eta_st(q8: &FiniteGroup, s: usize, t: usize) -> Result<Permutation, GroupError> {
    let units: Vec<usize> = ["i", "j", "k"].iter().filter_map(|l| q8.index_of_label(l)).collect();
    if q8.order() != 8 || units.len() != 3 || s == t || !units.contains(&s) || !units.contains(&t) {
        return Err(GroupError::InvalidParameters("s, t must be distinct among i, j, k in Q8".into()));
    }
    let cyc = [
        0,
        s,
        t,
        q8.mul(q8.inv(t), q8.inv(s)),
        q8.mul(s, s),
        q8.inv(s),
        q8.inv(t),
        q8.mul(s, t),
    ];
    Permutation::from_cycles(8, &[cyc.iter().map(|x| x + 1).collect()])
}

/// λ(G)/W → Aut(N) by conjugation.
#[derive(Clone, Debug)]
pub struct QuotientEmbedding {
    pub w: PermSubgroup,
    /// λ(G)/W; coset i has representatives `cosets[i]` (indices into G)
    pub quotient: FiniteGroup,
    pub cosets: Vec<Vec<usize>>,
    pub aut: AutGroup,
    pub hom: GroupHom,
    pub surjective: bool,
}

pub fn quotient_embedding(g: &FiniteGroup, n: &PermSubgroup) -> Result<QuotientEmbedding, GroupError> {
    let w = compute_w(n, g)?;
    let lambda = lambda_perms(g);
    let w_idx: Vec<usize> = (0..g.order()).filter(|&a| w.contains(&lambda[a])).collect();
    let (quotient, cosets) = g.quotient(&w_idx)?;
    let ng = n.as_group();
    let aut = automorphism_group(&ng)?;
    let images = cosets
        .iter()
        .map(|c| {
            let l = &lambda[c[0]];
            let map: Vec<usize> = n
                .elements()
                .iter()
                .map(|e| n.index_of(&e.conjugate_by(l)).unwrap())
                .collect();
            aut.index_of(&map).expect("conjugation is an automorphism")
        })
        .collect();
    let hom = GroupHom::new(quotient.clone(), aut.group.clone(), images)?;
    if !hom.is_injective() {
        return Err(GroupError::InvalidParameters("λ(G)/W does not embed".into()));
    }
    let surjective = hom.image().len() == aut.order();
    Ok(QuotientEmbedding { w, quotient, cosets, aut, hom, surjective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, klein, left_regular_rep, make_group};

    #[test]
    fn klein_c4_structures() {
        let g = klein();
        let found = enumerate_regular_subgroups(&g, Some(&cyclic(4)), SearchOptions::default()).unwrap();
        assert_eq!(found.len(), 3);
        let displayed = vec!["(1)", "(1,2)(3,4)", "(1,3,2,4)", "(1,4,2,3)"];
        assert!(found.iter().any(|n| n.cycle_strings() == displayed));
    }

    #[test]
    fn lambda_always_found() {
        for name in ["C3", "S3", "C2xC2", "C4"] {
            let g = make_group(name).unwrap();
            let found = enumerate_regular_subgroups(&g, Some(&g), SearchOptions::default()).unwrap();
            assert!(found.contains(&left_regular_rep(&g)), "{name}");
        }
    }

    #[test]
    fn w_matches_intersection_with_opposite() {
        let g = klein();
        for n in enumerate_regular_subgroups(&g, None, SearchOptions::default()).unwrap() {
            let w = compute_w(&n, &g).unwrap();
            let opp = centralizer_opp(&n).unwrap();
            let lam = left_regular_rep(&g);
            let inter: Vec<Permutation> =
                lam.elements().iter().filter(|x| opp.contains(x)).cloned().collect();
            assert_eq!(w.elements(), &inter[..]);
        }
    }

    #[test]
    fn parallel_matches_serial() {
        let g = make_group("S3").unwrap();
        let a = enumerate_regular_subgroups(&g, None, SearchOptions::default()).unwrap();
        let b = enumerate_regular_subgroups(&g, None, SearchOptions { workers: 3, ..Default::default() }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn q8_c8_structures_are_the_eta_family() {
        let q = make_group("Q8").unwrap();
        let found = enumerate_regular_subgroups(&q, Some(&cyclic(8)), SearchOptions::default()).unwrap();
        assert_eq!(found.len(), 6);
        let lam = lambda_perms(&q);
        let ix = |l: &str| q.index_of_label(l).unwrap();
        let units = ["i", "j", "k"];
        for s in units {
            for t in units {
                if s == t {
                    continue;
                }
                let (si, ti) = (ix(s), ix(t));
                let eta = eta_st(&q, si, ti).unwrap();
                let n = PermSubgroup::generated(8, std::slice::from_ref(&eta));
                assert!(found.contains(&n), "{s},{t}");
                let eta3 = eta.compose(&eta).compose(&eta);
                assert_eq!(eta.conjugate_by(&lam[si]), eta3);
                assert_eq!(eta.conjugate_by(&lam[ti]), eta);
                let w = compute_w(&n, &q).unwrap();
                assert_eq!(w.elements().len(), 4);
                assert!(w.contains(&lam[ti]));
                let qe = quotient_embedding(&q, &n).unwrap();
                assert_eq!(qe.quotient.order(), 2);
                assert!(!qe.surjective);
            }
        }
    }

    #[test]
    fn bound_enforced() {
        let g = make_group("C3^2").unwrap();
        assert!(matches!(
            enumerate_regular_subgroups(&g, None, SearchOptions::default()),
            Err(GroupError::BoundExceeded { .. })
        ));
    }
}
