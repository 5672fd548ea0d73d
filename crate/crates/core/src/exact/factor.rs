//! Factorization of rational polynomials.
//!
//! Squarefree decomposition (Yun), then for each squarefree part a small
//! Zassenhaus search: factor modulo a prime by Cantor–Zassenhaus, Hensel
//! lift past a coefficient bound, recombine subsets of lifted factors and
//! keep the ones that divide over ℤ. Degrees above `MAX_DEGREE` are refused.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use super::rat::{self, Rat};
use super::ExactError;

pub const MAX_DEGREE: usize = 16;

/// `constant · ∏ factorᵢ^{mᵢ}` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub constant: Rat,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.constant.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m as u32)
            })
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Yun's squarefree decomposition of a monic polynomial.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let fp = f.derivative();
    let a0 = Poly::gcd(&f, &fp);
    let mut b = f.exact_div(&a0).unwrap();
    let c = fp.exact_div(&a0).unwrap();
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.deg() > 0 {
        let a = Poly::gcd(&b, &d);
        let nb = b.exact_div(&a).unwrap();
        let nc = d.exact_div(&a).unwrap();
        d = &nc - &nb.derivative();
        b = nb;
        if a.deg() > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Complete factorization over ℚ into monic irreducibles.
pub fn factor_over_q(f: &Poly) -> Result<Factorization, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let constant = f.leading();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        if part.deg() > MAX_DEGREE {
            return Err(ExactError::DegreeTooLarge(part.deg(), MAX_DEGREE));
        }
        for g in factor_squarefree(&part) {
            factors.push((g, mult));
        }
    }
    factors.sort_by(|a, b| {
        (a.0.deg(), a.1, a.0.texts()).cmp(&(b.0.deg(), b.1, b.0.texts()))
    });
    Ok(Factorization { constant, factors })
}

type ZPoly = Vec<BigInt>;

fn to_primitive_integer(p: &Poly) -> ZPoly {
    let den = rat::common_denominator(p.coeffs());
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let sign = if ints.last().unwrap().is_negative() { -1 } else { 1 };
    ints.into_iter().map(|c| c / &content * sign).collect()
}

fn zpoly_to_poly(p: &ZPoly) -> Poly {
    Poly::new(p.iter().map(|c| Rat::from_integer(c.clone())).collect())
}

fn factor_squarefree(f: &Poly) -> Vec<Poly> {
    if f.deg() <= 1 {
        return vec![f.monic()];
    }
    let g = to_primitive_integer(f);
    zassenhaus(&g).iter().map(|z| zpoly_to_poly(z).monic()).collect()
}

fn small_primes(limit: u64) -> Vec<u64> {
    let mut sieve = vec![true; limit as usize + 1];
    let mut out = Vec::new();
    for i in 2..=limit as usize {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit as usize {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

// ---------------------------------------------------------------- 𝔽ₚ[x]

type FpPoly = Vec<u64>;

fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    modpow(a, p - 2, p)
}

fn fp_from_z(a: &ZPoly, p: u64) -> FpPoly {
    let bp = BigInt::from(p);
    trim(a.iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect())
}

fn fp_sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn fp_add(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fp_mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    trim(v)
}

fn fp_divrem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let db = b.len() - 1;
    let li = inv_mod(*b.last().unwrap(), p);
    let mut r = a.clone();
    if r.len() <= db {
        return (vec![], trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] * li % p;
        if c != 0 {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + p - c * y % p) % p;
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn fp_monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => vec![],
        Some(&l) => {
            let li = inv_mod(l, p);
            a.iter().map(|x| x * li % p).collect()
        }
    }
}

fn fp_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// `(s, t)` with `s·a + t·b = 1` for coprime `a`, `b`.
fn fp_bezout(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let li = inv_mod(r0[0], p);
    (
        s0.iter().map(|x| x * li % p).collect(),
        t0.iter().map(|x| x * li % p).collect(),
    )
}

fn fp_powmod(base: &FpPoly, e: &BigUint, m: &FpPoly, p: u64) -> FpPoly {
    let mut acc = vec![1u64];
    let base = fp_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        acc = fp_divrem(&fp_mul(&acc, &acc, p), m, p).1;
        if e.bit(i) {
            acc = fp_divrem(&fp_mul(&acc, &base, p), m, p).1;
        }
    }
    acc
}

fn fp_derivative(a: &FpPoly, p: u64) -> FpPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn fp_ddf(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    let pe = BigUint::from(p);
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            out.push((f.clone(), f.len() - 1));
            break;
        }
        h = fp_powmod(&h, &pe, &f, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            f = fp_divrem(&f, &g, p).0;
            h = fp_divrem(&h, &f, p).1;
            out.push((g, d));
        }
    }
    out
}

/// Equal-degree splitting (Cantor–Zassenhaus, odd p).
fn fp_edf(g: &FpPoly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = g.len() - 1;
    if n == d {
        return vec![g.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: FpPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &e, g, p), &vec![1u64], p);
        let c = fp_gcd(&b, g, p);
        if c.len() > 1 && c.len() < g.len() {
            let other = fp_divrem(g, &c, p).0;
            let mut out = fp_edf(&c, d, p, rng);
            out.extend(fp_edf(&fp_monic(&other, p), d, p, rng));
            return out;
        }
    }
}

// ---------------------------------------------------------------- Hensel

fn z_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    v
}

fn z_mod(a: &ZPoly, m: &BigInt) -> ZPoly {
    let mut v: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn z_from_fp(a: &FpPoly) -> ZPoly {
    a.iter().map(|c| BigInt::from(*c)).collect()
}

fn z_add_scaled(a: &ZPoly, b: &FpPoly, s: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_default() + BigInt::from(b.get(i).copied().unwrap_or(0)) * s
        })
        .collect()
}

/// Lift `t ≡ g·h (mod p)` to a factorization modulo `p^k` (g, h monic).
fn hensel_pair(t: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let bp = BigInt::from(p);
    let pk = bp.pow(k);
    let (s, tt) = fp_bezout(g, h, p);
    let mut big_g = z_from_fp(g);
    let mut big_h = z_from_fp(h);
    let mut pj = bp.clone();
    for _ in 1..k {
        let diff: ZPoly = {
            let prod = z_mul(&big_g, &big_h);
            let n = t.len().max(prod.len());
            (0..n)
                .map(|i| {
                    t.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default()
                })
                .collect()
        };
        let diff = z_mod(&diff, &pk);
        let e: FpPoly = trim(
            diff.iter()
                .map(|c| {
                    debug_assert!((c % &pj).is_zero());
                    (c / &pj).mod_floor(&bp).to_u64().unwrap()
                })
                .collect(),
        );
        let te = fp_mul(&tt, &e, p);
        let (q, dg) = fp_divrem(&te, g, p);
        let dh = fp_add(&fp_mul(&s, &e, p), &fp_mul(&q, h, p), p);
        big_g = z_mod(&z_add_scaled(&big_g, &dg, &pj), &pk);
        big_h = z_mod(&z_add_scaled(&big_h, &dh, &pj), &pk);
        pj *= &bp;
    }
    (big_g, big_h)
}

fn symmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half: BigInt = m / 2;
    let mut v: ZPoly = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn primitive_part(a: &ZPoly) -> ZPoly {
    let content = a.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if content.is_zero() {
        return a.clone();
    }
    let sign = if a.last().unwrap().is_negative() { -1 } else { 1 };
    a.iter().map(|c| c / &content * sign).collect()
}

/// Exact division over ℤ, `None` unless the quotient is integral.
fn z_exact_div(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let q = zpoly_to_poly(a).exact_div(&zpoly_to_poly(b))?;
    q.coeffs()
        .iter()
        .all(|c| c.is_integer())
        .then(|| q.coeffs().iter().map(|c| c.to_integer()).collect())
}

fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    let lc = f.last().unwrap().clone();
    let mut best: Option<(u64, Vec<(FpPoly, usize)>)> = None;
    let mut tried = 0;
    for p in small_primes(5000).into_iter().skip(1) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fp_monic(&fp_from_z(f, p), p);
        if fp.len() - 1 != n || fp_gcd(&fp, &fp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let ddf = fp_ddf(&fp, p);
        let count: usize = ddf.iter().map(|(g, d)| (g.len() - 1) / d).sum();
        if count == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| {
            count < b.iter().map(|(g, d)| (g.len() - 1) / d).sum::<usize>()
        }) {
            best = Some((p, ddf));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, ddf) = best.expect("a usable prime below 5000");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut modular: Vec<FpPoly> = Vec::new();
    for (g, d) in ddf {
        modular.extend(fp_edf(&g, d, p, &mut rng));
    }

    // coefficient bound for lc·(any factor)
    let norm: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = lc.abs() * norm * (BigInt::one() << n) * 2;
    let bp = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = bp.clone();
    while pk <= bound {
        pk *= &bp;
        k += 1;
    }

    // monic target modulo p^k
    let lc_inv = {
        let e = lc.mod_floor(&pk);
        let g = e.extended_gcd(&pk);
        g.x.mod_floor(&pk)
    };
    let mut target: ZPoly = z_mod(&f.iter().map(|c| c * &lc_inv).collect(), &pk);
    let mut lifted: Vec<ZPoly> = Vec::new();
    for i in 0..modular.len() - 1 {
        let rest = modular[i + 1..]
            .iter()
            .fold(vec![1u64], |acc, g| fp_mul(&acc, g, p));
        let (g, h) = hensel_pair(&target, &modular[i], &rest, p, k);
        lifted.push(g);
        target = h;
    }
    lifted.push(target);

    // recombination
    let mut remaining = lifted;
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        let lcr = rest.last().unwrap().clone();
        for subset in combinations(remaining.len(), size) {
            let prod = subset.iter().fold(vec![lcr.clone()], |acc, &i| {
                z_mod(&z_mul(&acc, &remaining[i]), &pk)
            });
            let cand = primitive_part(&symmetric(&prod, &pk));
            if cand.len() < 2 {
                continue;
            }
            if let Some(q) = z_exact_div(&rest, &cand) {
                out.push(cand);
                rest = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
                continue 'outer;
            }
        }
        size += 1;
    }
    if rest.len() > 1 {
        out.push(primitive_part(&rest));
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::cyclotomic::cyclotomic_polynomial;

    #[test]
    fn x3_minus_1() {
        let f = factor_over_q(&Poly::from_ints(&[-1, 0, 0, 1])).unwrap();
        assert_eq!(
            f.factors,
            vec![(Poly::from_ints(&[-1, 1]), 1), (Poly::from_ints(&[1, 1, 1]), 1)]
        );
    }

    #[test]
    fn swinnerton_dyer_quartic_is_irreducible() {
        // reducible modulo every prime, irreducible over ℚ
        let f = factor_over_q(&Poly::from_ints(&[1, 0, -10, 0, 1])).unwrap();
        assert!(f.is_irreducible());
    }

    #[test]
    fn x8_minus_1_matches_cyclotomic_product() {
        let f = factor_over_q(&Poly::from_ints(&[-1, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        let mut expect: Vec<(Poly, usize)> = [1, 2, 4, 8]
            .iter()
            .map(|d| (cyclotomic_polynomial(*d), 1))
            .collect();
        expect.sort_by_key(|a| (a.0.deg(), a.0.texts()));
        assert_eq!(f.factors, expect);
    }

    #[test]
    fn multiplicities_and_constant() {
        // 3 (x-1)^2 (x^2+1)
        let p = &(&Poly::from_ints(&[-1, 1]).pow(2) * &Poly::from_ints(&[1, 0, 1])).scale(&rat::int(3));
        let f = factor_over_q(p).unwrap();
        assert_eq!(f.constant, rat::int(3));
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.expand(), *p);
    }

    #[test]
    fn non_monic_integer_factors() {
        // (2x + 1)(3x^2 - 5)(x^3 + x + 7)
        let p = &(&Poly::from_ints(&[1, 2]) * &Poly::from_ints(&[-5, 0, 3]))
            * &Poly::from_ints(&[7, 1, 0, 1]);
        let f = factor_over_q(&p).unwrap();
        assert_eq!(f.factors.len(), 3);
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn zero_rejected() {
        assert_eq!(factor_over_q(&Poly::zero()), Err(ExactError::ZeroPolynomial));
    }
}
