//! The preset catalog.

use super::iso::holomorph;
use super::{FiniteGroup, GroupError};
use crate::exact::cyclotomic::units_mod;
use std::collections::HashMap;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(table)
        .unwrap()
        .with_preset(format!("C{n}"))
        .with_labels((0..n).map(|a| format!("s^{a}")).collect())
}

/// (ℤ/p)^m with index Σ aᵢ pⁱ.
pub fn elementary_abelian(p: usize, m: u32) -> Result<FiniteGroup, GroupError> {
    if !is_prime(p as u64) || m == 0 {
        return Err(GroupError::InvalidParameters(format!("C{p}^{m}")));
    }
    let n = p.pow(m);
    let digits = |mut a: usize| {
        (0..m)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect::<Vec<_>>()
    };
    let table = (0..n)
        .map(|a| {
            let da = digits(a);
            (0..n)
                .map(|b| {
                    digits(b)
                        .iter()
                        .zip(&da)
                        .enumerate()
                        .map(|(i, (x, y))| ((x + y) % p) * p.pow(i as u32))
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(FiniteGroup::from_table(table)?.with_preset(format!("C{p}^{m}")))
}

/// Dihedral group of order 2n; rᵃsᵇ has index a + n·b.
pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    if n < 2 {
        return Err(GroupError::InvalidParameters(format!("D{n}")));
    }
    let table = (0..2 * n)
        .map(|x| {
            let (a, b) = (x % n, x / n);
            (0..2 * n)
                .map(|y| {
                    let (c, d) = (y % n, y / n);
                    let e = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                    e + n * ((b + d) % 2)
                })
                .collect()
        })
        .collect();
    let labels = (0..2 * n)
        .map(|x| {
            let (a, b) = (x % n, x / n);
            match (a, b) {
                (0, 0) => "1".to_string(),
                (a, 0) => format!("r^{a}"),
                (0, _) => "s".to_string(),
                (a, _) => format!("r^{a}s"),
            }
        })
        .collect();
    Ok(FiniteGroup::from_table(table)?
        .with_preset(format!("D{n}"))
        .with_labels(labels))
}

/// Q₈ with indices in the order 1, −1, i, −i, j, −j, k, −k.
pub fn quaternion8() -> FiniteGroup {
    // unit products among 1, i, j, k as (sign, unit)
    let unit = |a: usize, b: usize| -> (bool, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (false, x),
            (x, y) if x == y => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    };
    let table = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (neg, u) = unit(x / 2, y / 2);
                    let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
                    2 * u + sign as usize
                })
                .collect()
        })
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table(table)
        .unwrap()
        .with_preset("Q8")
        .with_labels(labels)
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Symmetric group on n letters, lexicographic order of image arrays.
pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > 5 {
        return Err(GroupError::InvalidParameters(format!("S{n}")));
    }
    let perms = all_perms(n);
    let index: HashMap<Vec<usize>, usize> =
        perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let table = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| index[&b.iter().map(|&x| a[x]).collect::<Vec<_>>()])
                .collect()
        })
        .collect();
    let labels = perms
        .iter()
        .map(|p| super::Permutation::new(p.clone()).unwrap().to_string())
        .collect();
    Ok(FiniteGroup::from_table(table)?
        .with_preset(format!("S{n}"))
        .with_labels(labels))
}

/// C₂×C₂ with indices 0 = 1, 1 = σ, 2 = τ, 3 = τσ.
pub fn klein() -> FiniteGroup {
    let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    FiniteGroup::from_table(table)
        .unwrap()
        .with_preset("C2xC2")
        .with_labels(["1", "σ", "τ", "τσ"].iter().map(|s| s.to_string()).collect())
}

/// ℤₙ* with elements in increasing order.
pub fn units_group(n: u64) -> Result<FiniteGroup, GroupError> {
    if n < 2 {
        return Err(GroupError::InvalidParameters(format!("U{n}")));
    }
    let u = units_mod(n);
    let pos: HashMap<u64, usize> = u.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let table = u
        .iter()
        .map(|a| u.iter().map(|b| pos[&(a * b % n)]).collect())
        .collect();
    Ok(FiniteGroup::from_table(table)?
        .with_preset(format!("U{n}"))
        .with_labels(u.iter().map(|x| x.to_string()).collect()))
}

/// GL(m, p), identity first, the rest in lexicographic order of entries.
pub fn general_linear(m: usize, p: usize) -> Result<FiniteGroup, GroupError> {
    if !is_prime(p as u64) || m == 0 || p.pow((m * m) as u32) > 1 << 16 {
        return Err(GroupError::InvalidParameters(format!("GL{m}({p})")));
    }
    let det = |a: &[usize]| -> usize {
        // Gaussian elimination mod p
        let mut a: Vec<Vec<i64>> = (0..m)
            .map(|i| (0..m).map(|j| a[i * m + j] as i64).collect())
            .collect();
        let p = p as i64;
        let mut d = 1i64;
        for c in 0..m {
            let Some(r) = (c..m).find(|&r| a[r][c] % p != 0) else {
                return 0;
            };
            if r != c {
                a.swap(r, c);
                d = -d;
            }
            d = d * a[c][c] % p;
            let inv = (1..p).find(|x| a[c][c] * x % p == 1).unwrap();
            for r in c + 1..m {
                let f = a[r][c] * inv % p;
                for k in c..m {
                    a[r][k] = ((a[r][k] - f * a[c][k]) % p + p) % p;
                }
            }
        }
        (d.rem_euclid(p)) as usize
    };
    let total = p.pow((m * m) as u32);
    let ident: Vec<usize> = (0..m * m).map(|i| (i % (m + 1) == 0) as usize).collect();
    let mut mats: Vec<Vec<usize>> = vec![ident.clone()];
    for code in 0..total {
        let mut c = code;
        let a: Vec<usize> = (0..m * m)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .rev()
            .collect();
        if a != ident && det(&a) != 0 {
            mats.push(a);
        }
    }
    let index: HashMap<Vec<usize>, usize> =
        mats.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let mul = |a: &[usize], b: &[usize]| -> Vec<usize> {
        (0..m * m)
            .map(|ij| {
                let (i, j) = (ij / m, ij % m);
                (0..m).map(|k| a[i * m + k] * b[k * m + j]).sum::<usize>() % p
            })
            .collect()
    };
    let table = mats
        .iter()
        .map(|a| mats.iter().map(|b| index[&mul(a, b)]).collect())
        .collect();
    let labels = mats.iter().map(|a| format!("{a:?}")).collect();
    Ok(FiniteGroup::from_table(table)?
        .with_preset(format!("GL{m}({p})"))
        .with_labels(labels))
}

/// A × B with (a, b) at index a + |A|·b.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let table = (0..na * nb)
        .map(|x| {
            (0..na * nb)
                .map(|y| a.mul(x % na, y % na) + na * b.mul(x / na, y / na))
                .collect()
        })
        .collect();
    let mut g = FiniteGroup::from_table(table).unwrap();
    if let (Some(pa), Some(pb)) = (a.preset(), b.preset()) {
        g = g.with_preset(format!("{pa}x{pb}"));
    }
    g
}

/// Parse a preset name: `C6`, `C3^2`, `D4`, `Q8`, `S3`, `S4`, `C2xC2`,
/// `C2xC4`, `U8`, `GL2(3)`, `Hol(C4)`, `trivial`.
pub fn make_group(name: &str) -> Result<FiniteGroup, GroupError> {
    let bad = || GroupError::UnknownPreset(name.to_string());
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let name = name.trim();
    if name == "C2xC2" {
        return Ok(klein());
    }
    if name == "trivial" || name == "C1" {
        return Ok(cyclic(1).with_preset("C1"));
    }
    if name == "Q8" {
        return Ok(quaternion8());
    }
    if let Some(inner) = name.strip_prefix("Hol(").and_then(|s| s.strip_suffix(')')) {
        let c = make_group(inner)?;
        return Ok(holomorph(&c)?.with_preset(name));
    }
    if let Some(rest) = name.strip_prefix("GL") {
        let (m, p) = rest
            .strip_suffix(')')
            .and_then(|s| s.split_once('('))
            .ok_or_else(bad)?;
        return general_linear(num(m)?, num(p)?);
    }
    if name.contains('x') {
        let parts: Vec<&str> = name.split('x').collect();
        let mut g = make_group(parts[0])?;
        for p in &parts[1..] {
            g = direct_product(&g, &make_group(p)?);
        }
        return Ok(g.with_preset(name));
    }
    if let Some(rest) = name.strip_prefix('C') {
        if let Some((p, m)) = rest.split_once('^') {
            return elementary_abelian(num(p)?, num(m)? as u32);
        }
        let n = num(rest)?;
        if n == 0 {
            return Err(GroupError::InvalidParameters(name.into()));
        }
        return Ok(cyclic(n));
    }
    if let Some(rest) = name.strip_prefix('D') {
        return dihedral(num(rest)?);
    }
    if let Some(rest) = name.strip_prefix('S') {
        return symmetric(num(rest)?);
    }
    if let Some(rest) = name.strip_prefix('U') {
        return units_group(num(rest)? as u64);
    }
    Err(bad())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (name, n) in [
            ("C3", 3),
            ("C3^2", 9),
            ("D3", 6),
            ("D4", 8),
            ("Q8", 8),
            ("S3", 6),
            ("S4", 24),
            ("C2xC2", 4),
            ("C2xC4", 8),
            ("C2^3", 8),
            ("U8", 4),
            ("GL2(3)", 48),
            ("GL2(2)", 6),
            ("trivial", 1),
        ] {
            assert_eq!(make_group(name).unwrap().order(), n, "{name}");
        }
    }

    #[test]
    fn rejects_bad_names() {
        assert!(matches!(make_group("X7"), Err(GroupError::UnknownPreset(_))));
        assert!(matches!(make_group("C4^2"), Err(GroupError::InvalidParameters(_))));
        assert!(make_group("C0").is_err());
    }

    #[test]
    fn gl_order_formula() {
        // ∏ (p^m − p^i)
        for (m, p) in [(2usize, 2usize), (2, 3)] {
            let expect: usize = (0..m).map(|i| p.pow(m as u32) - p.pow(i as u32)).product();
            assert_eq!(general_linear(m, p).unwrap().order(), expect);
        }
    }

    #[test]
    fn dihedral_relations() {
        let d = dihedral(4).unwrap();
        let (r, s) = (1, 4);
        assert_eq!(d.element_order(r), 4);
        assert_eq!(d.element_order(s), 2);
        assert_eq!(d.mul(d.mul(s, r), s), d.inv(r));
    }
}
