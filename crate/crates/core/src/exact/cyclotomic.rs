//! Cyclotomic polynomials and arithmetic in ℚ(ζₙ).
//!
//! Elements are stored in the power basis 1, ζ, …, ζ^{φ(n)−1} and reduced
//! modulo Φₙ after every operation, so equality is coefficientwise.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg;
use super::poly::Poly;
use super::rat::{self, Rat};
use super::ExactError;

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Units of ℤ/n in increasing order (for n = 1 this is `[0]`, the trivial group).
pub fn units_mod(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|k| k.gcd(&n) == 1).collect()
}

/// Φₙ, by dividing xⁿ − 1 by Φ_d for every proper divisor d.
pub fn cyclotomic_polynomial(n: u64) -> Poly {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let mut p = &Poly::monomial(Rat::one(), n as usize) - &Poly::one();
    for d in divisors(n) {
        if d < n {
            p = p
                .exact_div(&cyclotomic_polynomial(d))
                .expect("Φ_d divides xⁿ − 1");
        }
    }
    p
}

/// The field ℚ(ζₙ) as a reusable context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycField {
    conductor: u64,
    modulus: Poly,
}

impl CycField {
    pub fn new(n: u64) -> Arc<CycField> {
        Arc::new(CycField {
            conductor: n,
            modulus: cyclotomic_polynomial(n),
        })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }
}

#[derive(Clone)]
pub struct CycElem {
    field: Arc<CycField>,
    coords: Vec<Rat>,
}

impl PartialEq for CycElem {
    fn eq(&self, o: &Self) -> bool {
        self.field.conductor == o.field.conductor && self.coords == o.coords
    }
}
impl Eq for CycElem {}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElem(n={}, {:?})", self.field.conductor, rat::texts(&self.coords))
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl CycElem {
    pub fn from_poly(field: &Arc<CycField>, p: &Poly) -> CycElem {
        let r = p.rem(field.modulus());
        let mut coords = r.coeffs().to_vec();
        coords.resize(field.degree(), Rat::zero());
        CycElem {
            field: field.clone(),
            coords,
        }
    }

    pub fn from_coords(field: &Arc<CycField>, coords: Vec<Rat>) -> Result<CycElem, ExactError> {
        if coords.len() != field.degree() {
            return Err(ExactError::Shape(format!(
                "ℚ(ζ_{}) needs {} coordinates, got {}",
                field.conductor,
                field.degree(),
                coords.len()
            )));
        }
        Ok(CycElem {
            field: field.clone(),
            coords,
        })
    }

    pub fn rational(field: &Arc<CycField>, q: Rat) -> CycElem {
        CycElem::from_poly(field, &Poly::constant(q))
    }

    pub fn zero(field: &Arc<CycField>) -> CycElem {
        CycElem::rational(field, Rat::zero())
    }

    pub fn one(field: &Arc<CycField>) -> CycElem {
        CycElem::rational(field, Rat::one())
    }

    /// ζₙ^k for any integer k.
    pub fn zeta_pow(field: &Arc<CycField>, k: i64) -> CycElem {
        let n = field.conductor as i64;
        let e = k.rem_euclid(n) as usize;
        CycElem::from_poly(field, &Poly::monomial(Rat::one(), e))
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rat> {
        self.coords[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| self.coords[0].clone())
    }

    fn check(&self, o: &CycElem) -> Result<(), ExactError> {
        if self.field.conductor != o.field.conductor {
            return Err(ExactError::ConductorMismatch(self.field.conductor, o.field.conductor));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &CycElem) -> Result<CycElem, ExactError> {
        self.check(o)?;
        Ok(CycElem {
            field: self.field.clone(),
            coords: linalg::add(&self.coords, &o.coords),
        })
    }

    pub fn try_sub(&self, o: &CycElem) -> Result<CycElem, ExactError> {
        self.check(o)?;
        Ok(CycElem {
            field: self.field.clone(),
            coords: linalg::sub(&self.coords, &o.coords),
        })
    }

    pub fn try_mul(&self, o: &CycElem) -> Result<CycElem, ExactError> {
        self.check(o)?;
        Ok(CycElem::from_poly(&self.field, &(&self.to_poly() * &o.to_poly())))
    }

    /// Inverse by the extended Euclidean algorithm against Φₙ.
    pub fn inv(&self) -> Result<CycElem, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let (g, s, _) = Poly::ext_gcd(&self.to_poly(), self.field.modulus());
        debug_assert!(g == Poly::one());
        Ok(CycElem::from_poly(&self.field, &s))
    }

    pub fn scale(&self, q: &Rat) -> CycElem {
        CycElem {
            field: self.field.clone(),
            coords: linalg::scale(&self.coords, q),
        }
    }

    pub fn neg(&self) -> CycElem {
        self.scale(&-Rat::one())
    }

    pub fn pow(&self, e: u64) -> CycElem {
        let mut acc = CycElem::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Apply ζ ↦ ζᵏ.
    pub fn galois_conjugate(&self, k: i64) -> Result<CycElem, ExactError> {
        let n = self.field.conductor as i64;
        if k.gcd(&n) != 1 {
            return Err(ExactError::NotCoprime(k, self.field.conductor));
        }
        let mut v = vec![Rat::zero(); self.field.conductor as usize];
        for (i, c) in self.coords.iter().enumerate() {
            let e = ((i as i64) * k).rem_euclid(n) as usize;
            v[e] += c;
        }
        Ok(CycElem::from_poly(&self.field, &Poly::new(v)))
    }

    /// Matrix of multiplication by `self` on the power basis (columns are images).
    pub fn mult_matrix(&self) -> linalg::Matrix {
        let d = self.field.degree();
        let cols: Vec<Vec<Rat>> = (0..d)
            .map(|j| (self * &CycElem::zeta_pow(&self.field, j as i64)).coords)
            .collect();
        linalg::transpose(&cols)
    }
}

impl std::ops::Add for &CycElem {
    type Output = CycElem;
    fn add(self, o: &CycElem) -> CycElem {
        self.try_add(o).expect("conductor mismatch")
    }
}

impl std::ops::Sub for &CycElem {
    type Output = CycElem;
    fn sub(self, o: &CycElem) -> CycElem {
        self.try_sub(o).expect("conductor mismatch")
    }
}

impl std::ops::Mul for &CycElem {
    type Output = CycElem;
    fn mul(self, o: &CycElem) -> CycElem {
        self.try_mul(o).expect("conductor mismatch")
    }
}

impl Serialize for CycElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            conductor: u64,
            coords: Vec<String>,
        }
        Repr {
            conductor: self.field.conductor,
            coords: rat::texts(&self.coords),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            conductor: u64,
            coords: Vec<String>,
        }
        let r = Repr::deserialize(d)?;
        if r.conductor == 0 {
            return Err(serde::de::Error::custom("conductor must be positive"));
        }
        let field = CycField::new(r.conductor);
        let coords: Result<Vec<Rat>, _> = r.coords.iter().map(|s| rat::parse(s)).collect();
        CycElem::from_coords(&field, coords.map_err(serde::de::Error::custom)?)
            .map_err(serde::de::Error::custom)
    }
}

/// Polynomial with coefficients in ℚ(ζ_m), lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycPoly {
    field: Arc<CycField>,
    coeffs: Vec<CycElem>,
}

impl CycPoly {
    pub fn new(field: &Arc<CycField>, mut coeffs: Vec<CycElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CycPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_rational(field: &Arc<CycField>, p: &Poly) -> Self {
        CycPoly::new(
            field,
            p.coeffs()
                .iter()
                .map(|c| CycElem::rational(field, c.clone()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[CycElem] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, o: &CycPoly) -> CycPoly {
        if self.is_zero() || o.is_zero() {
            return CycPoly::new(&self.field, vec![]);
        }
        let mut v = vec![CycElem::zero(&self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        CycPoly::new(&self.field, v)
    }

    pub fn div_rem(&self, d: &CycPoly) -> Result<(CycPoly, CycPoly), ExactError> {
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let dd = d.degree();
        let lead_inv = d.coeffs.last().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((CycPoly::new(&self.field, vec![]), self.clone()));
        }
        let mut q = vec![CycElem::zero(&self.field); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lead_inv;
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * dj);
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((CycPoly::new(&self.field, q), CycPoly::new(&self.field, r)))
    }
}

impl Serialize for CycPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter())
    }
}

/// Express an element of ℚ(ζₙ) lying in the subfield ℚ(ζ_m) in ℚ(ζ_m)'s power basis.
fn descend_to_subfield(
    x: &CycElem,
    sub: &Arc<CycField>,
) -> Result<CycElem, ExactError> {
    let n = x.conductor();
    let m = sub.conductor();
    let step = (n / m) as i64;
    let big = x.field().clone();
    let cols: Vec<Vec<Rat>> = (0..sub.degree())
        .map(|i| CycElem::zeta_pow(&big, step * i as i64).coords().to_vec())
        .collect();
    let a = linalg::transpose(&cols);
    let y = linalg::solve(&a, x.coords()).ok_or_else(|| {
        ExactError::Shape(format!("element does not lie in ℚ(ζ_{m})"))
    })?;
    CycElem::from_coords(sub, y)
}

/// Irreducible factors of Φₙ over ℚ(ζ_m), as orbit products
/// ∏_{k ∈ coset} (x − ζₙᵏ) over the cosets of {k ∈ ℤₙ*: k ≡ 1 mod m}.
pub fn factor_cyclotomic_over(n: u64, m: u64) -> Result<Vec<CycPoly>, ExactError> {
    if n == 0 || m == 0 || !n.is_multiple_of(m) {
        return Err(ExactError::NotDivisor(m, n));
    }
    let big = CycField::new(n);
    let sub = CycField::new(m);
    let units = units_mod(n);
    let fixing: Vec<u64> = units.iter().copied().filter(|k| k % m == 1 % m).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for &k in &units {
        if seen.contains(&k) {
            continue;
        }
        let coset: Vec<u64> = fixing.iter().map(|h| (h * k) % n.max(1)).collect();
        let mut f = CycPoly::new(&big, vec![CycElem::one(&big)]);
        for &c in &coset {
            seen.insert(c);
            let lin = CycPoly::new(
                &big,
                vec![CycElem::zeta_pow(&big, c as i64).neg(), CycElem::one(&big)],
            );
            f = f.mul(&lin);
        }
        let coeffs: Result<Vec<CycElem>, _> =
            f.coeffs().iter().map(|c| descend_to_subfield(c, &sub)).collect();
        out.push(CycPoly::new(&sub, coeffs?));
    }
    Ok(out)
}
