//! Hopf algebras over ℚ by structure constants, group rings L[N], the
//! duals (ℚ[Cₙ])*, the character isomorphism and group-like elements.

use crate::algebra::{Algebra, AlgebraError};
use crate::etale::FieldDesc;
use crate::exact::linalg::{self, Matrix, SparseVec};
use crate::exact::rat::{self, Rat};
use crate::groups::{self, FiniteGroup};
use crate::wedderburn::{self, WedderburnError};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// grouplikes solves over blocks of the dual up to this dimension.
pub const GROUPLIKE_MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HopfError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("Hopf axiom fails: {0}")]
    Axiom(String),
    #[error("dimension {0} exceeds the solver bound {GROUPLIKE_MAX_DIM}")]
    TooLarge(usize),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Wedderburn(#[from] WedderburnError),
}

type Tensor = BTreeMap<usize, Rat>;

fn add_into(t: &mut Tensor, k: usize, v: Rat) {
    if v.is_zero() {
        return;
    }
    let e = t.entry(k).or_insert_with(Rat::zero);
    *e += v;
    if e.is_zero() {
        t.remove(&k);
    }
}

/// A Hopf algebra over ℚ in a basis h₀, …, h_{d−1}:
/// Δ(h_k) = Σ comult[k][i·d+j] hᵢ⊗hⱼ, ε(h_k) = counit[k],
/// S(hⱼ) = column j of `antipode`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfPresentation {
    pub name: String,
    pub labels: Vec<String>,
    pub algebra: Algebra,
    pub comult: Vec<SparseVec>,
    pub counit: Vec<Rat>,
    pub antipode: Matrix,
}

#[derive(Serialize, Deserialize)]
struct HopfRepr {
    name: String,
    dim: usize,
    labels: Vec<String>,
    mult: Vec<(usize, usize, usize, String)>,
    unit: Vec<String>,
    comult: Vec<(usize, usize, usize, String)>,
    counit: Vec<String>,
    antipode: Vec<Vec<String>>,
}

impl Serialize for HopfPresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let d = self.dim();
        let mut mult = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, v) in self.algebra.basis_product(i, j) {
                    mult.push((i, j, *k, rat::to_text(v)));
                }
            }
        }
        let comult = self
            .comult
            .iter()
            .enumerate()
            .flat_map(|(k, t)| t.iter().map(move |(ij, v)| (k, ij / d, ij % d, rat::to_text(v))))
            .collect();
        HopfRepr {
            name: self.name.clone(),
            dim: d,
            labels: self.labels.clone(),
            mult,
            unit: rat::texts(self.algebra.unit()),
            comult,
            counit: rat::texts(&self.counit),
            antipode: self.antipode.iter().map(|r| rat::texts(r)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HopfPresentation {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = HopfRepr::deserialize(de)?;
        let p = |x: &str| rat::parse(x).map_err(D::Error::custom);
        let d = r.dim;
        let mut mult = vec![vec![Vec::new(); d]; d];
        for (i, j, k, x) in &r.mult {
            if *i >= d || *j >= d || *k >= d {
                return Err(D::Error::custom("mult index out of range"));
            }
            mult[*i][*j].push((*k, p(x)?));
        }
        let unit = r.unit.iter().map(|x| p(x)).collect::<Result<Vec<_>, _>>()?;
        let algebra = Algebra::new(d, mult, unit).map_err(D::Error::custom)?;
        let mut comult = vec![Vec::new(); d];
        for (k, i, j, x) in &r.comult {
            if *k >= d || *i >= d || *j >= d {
                return Err(D::Error::custom("comult index out of range"));
            }
            comult[*k].push((i * d + j, p(x)?));
        }
        for c in comult.iter_mut() {
            c.sort_by_key(|t| t.0);
        }
        let counit = r.counit.iter().map(|x| p(x)).collect::<Result<Vec<_>, _>>()?;
        let antipode = r
            .antipode
            .iter()
            .map(|row| row.iter().map(|x| p(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        HopfPresentation::new(r.name, r.labels, algebra, comult, counit, antipode).map_err(D::Error::custom)
    }
}

/// Outcome of the structure-constant checks.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HopfAxioms {
    pub associative: bool,
    pub unital: bool,
    pub coassociative: bool,
    pub counital: bool,
    pub multiplicative_comult: bool,
    pub multiplicative_counit: bool,
    pub antipode: bool,
}

impl HopfAxioms {
    pub fn all(&self) -> bool {
        self.associative
            && self.unital
            && self.coassociative
            && self.counital
            && self.multiplicative_comult
            && self.multiplicative_counit
            && self.antipode
    }
}

impl HopfPresentation {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        algebra: Algebra,
        comult: Vec<SparseVec>,
        counit: Vec<Rat>,
        antipode: Matrix,
    ) -> Result<Self, HopfError> {
        let d = algebra.dim();
        if labels.len() != d
            || comult.len() != d
            || counit.len() != d
            || antipode.len() != d
            || antipode.iter().any(|r| r.len() != d)
            || comult.iter().flatten().any(|(k, _)| *k >= d * d)
        {
            return Err(HopfError::Shape(format!("inconsistent data for dimension {d}")));
        }
        Ok(HopfPresentation { name: name.into(), labels, algebra, comult, counit, antipode })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Δ of an element.
    pub fn coproduct(&self, x: &[Rat]) -> Tensor {
        let mut t = Tensor::new();
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            for (ij, c) in &self.comult[k] {
                add_into(&mut t, *ij, xk * c);
            }
        }
        t
    }

    pub fn counit_of(&self, x: &[Rat]) -> Rat {
        x.iter().zip(&self.counit).map(|(a, b)| a * b).sum()
    }

    pub fn antipode_of(&self, x: &[Rat]) -> Vec<Rat> {
        linalg::mat_vec(&self.antipode, x)
    }

    pub fn tensor(&self, x: &[Rat], y: &[Rat]) -> Tensor {
        let d = self.dim();
        let mut t = Tensor::new();
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                add_into(&mut t, i * d + j, a * b);
            }
        }
        t
    }

    pub fn is_grouplike(&self, x: &[Rat]) -> bool {
        self.counit_of(x).is_one() && self.coproduct(x) == self.tensor(x, x)
    }

    pub fn check_axioms(&self) -> HopfAxioms {
        let d = self.dim();
        let a = &self.algebra;
        let associative = a.check_associative().is_ok();
        let unital = a.check_unit().is_ok();
        let sp = |k: usize| vec![(k, Rat::one())];

        let mut coassociative = true;
        let mut counital = true;
        let mut antipode = true;
        for k in 0..d {
            let mut left = Tensor::new();
            let mut right = Tensor::new();
            let mut l_counit = vec![Rat::zero(); d];
            let mut r_counit = vec![Rat::zero(); d];
            let mut s_left = vec![Rat::zero(); d];
            let mut s_right = vec![Rat::zero(); d];
            for (ij, c) in &self.comult[k] {
                let (i, j) = (ij / d, ij % d);
                for (ab, c2) in &self.comult[i] {
                    add_into(&mut left, ab * d + j, c * c2);
                }
                for (ab, c2) in &self.comult[j] {
                    add_into(&mut right, i * d * d + ab, c * c2);
                }
                l_counit[j] += c * &self.counit[i];
                r_counit[i] += c * &self.counit[j];
                let si = linalg::sparse_from_dense(&self.antipode.iter().map(|r| r[i].clone()).collect::<Vec<_>>());
                let sj = linalg::sparse_from_dense(&self.antipode.iter().map(|r| r[j].clone()).collect::<Vec<_>>());
                for (t, v) in a.mul_sparse(&si, &sp(j)) {
                    s_left[t] += c * v;
                }
                for (t, v) in a.mul_sparse(&sp(i), &sj) {
                    s_right[t] += c * v;
                }
            }
            coassociative &= left == right;
            let e = a.basis_vector(k);
            counital &= l_counit == e && r_counit == e;
            let target = linalg::scale(a.unit(), &self.counit[k]);
            antipode &= s_left == target && s_right == target;
        }

        let mut multiplicative_comult = self.coproduct(a.unit()) == self.tensor(a.unit(), a.unit());
        let mut multiplicative_counit = self.counit_of(a.unit()).is_one();
        for i in 0..d {
            for j in 0..d {
                let prod = a.basis_product(i, j);
                let prod_dense = linalg::dense_from_sparse(prod, d);
                multiplicative_counit &= self.counit_of(&prod_dense) == &self.counit[i] * &self.counit[j];
                if !multiplicative_comult {
                    continue;
                }
                let lhs = self.coproduct(&prod_dense);
                let mut rhs = Tensor::new();
                for (ab, c1) in &self.comult[i] {
                    let (p, q) = (ab / d, ab % d);
                    for (ab2, c2) in &self.comult[j] {
                        let (p2, q2) = (ab2 / d, ab2 % d);
                        let c = c1 * c2;
                        for (s, v1) in a.basis_product(p, p2) {
                            for (t, v2) in a.basis_product(q, q2) {
                                add_into(&mut rhs, s * d + t, &c * v1 * v2);
                            }
                        }
                    }
                }
                multiplicative_comult &= lhs == rhs;
            }
        }
        HopfAxioms {
            associative,
            unital,
            coassociative,
            counital,
            multiplicative_comult,
            multiplicative_counit,
            antipode,
        }
    }

    pub fn verify(&self) -> Result<(), HopfError> {
        let ax = self.check_axioms();
        if ax.all() {
            Ok(())
        } else {
            Err(HopfError::Axiom(format!("{ax:?}")))
        }
    }

    /// Checks that `p` (column i = image of hᵢ in `other`'s basis) is an
    /// isomorphism of Hopf algebras.
    pub fn check_iso_via(&self, other: &HopfPresentation, p: &Matrix) -> Result<(), String> {
        let d = self.dim();
        if other.dim() != d || p.len() != d || linalg::rank(p) != d {
            return Err("basis change is not invertible".into());
        }
        let img = |x: &[Rat]| linalg::mat_vec(p, x);
        if img(self.algebra.unit()) != other.algebra.unit() {
            return Err("unit not preserved".into());
        }
        let cols: Vec<Vec<Rat>> = (0..d).map(|i| p.iter().map(|r| r[i].clone()).collect()).collect();
        for i in 0..d {
            if other.counit_of(&cols[i]) != self.counit[i] {
                return Err(format!("counit differs on basis element {i}"));
            }
            for j in 0..d {
                let lhs = img(&linalg::dense_from_sparse(self.algebra.basis_product(i, j), d));
                if lhs != other.algebra.mul(&cols[i], &cols[j]) {
                    return Err(format!("product of basis elements {i}, {j} not preserved"));
                }
            }
            let mut mapped = Tensor::new();
            for (ab, c) in &self.comult[i] {
                for (k, v) in other.tensor(&cols[ab / d], &cols[ab % d]) {
                    add_into(&mut mapped, k, c * v);
                }
            }
            if mapped != other.coproduct(&cols[i]) {
                return Err(format!("coproduct of basis element {i} not preserved"));
            }
        }
        Ok(())
    }
}

/// ℚ[N]: Δ(η) = η⊗η, ε(η) = 1, S(η) = η⁻¹.
pub fn group_algebra(n: &FiniteGroup) -> HopfPresentation {
    let d = n.order();
    let mult = (0..d)
        .map(|i| (0..d).map(|j| vec![(n.mul(i, j), Rat::one())]).collect())
        .collect();
    let mut unit = vec![Rat::zero(); d];
    unit[0] = Rat::one();
    let algebra = Algebra::new(d, mult, unit).unwrap();
    let comult = (0..d).map(|k| vec![(k * d + k, Rat::one())]).collect();
    let mut antipode = linalg::zeros(d, d);
    for j in 0..d {
        antipode[n.inv(j)][j] = Rat::one();
    }
    let labels = (0..d).map(|i| n.label(i)).collect();
    let name = format!("Q[{}]", n.preset().unwrap_or("N"));
    HopfPresentation::new(name, labels, algebra, comult, vec![Rat::one(); d], antipode).unwrap()
}

/// (ℚ[Cₙ])* in the dual basis p₀, …, p_{n−1}: pᵢpⱼ = δᵢⱼpᵢ,
/// Δ(p_k) = Σ_{i+j≡k} pᵢ⊗pⱼ, ε(p_k) = δ_{k0}, S(p_k) = p_{−k}.
pub fn dual_cyclic(n: usize) -> Result<HopfPresentation, HopfError> {
    if n == 0 {
        return Err(HopfError::Invalid("n must be at least 1".into()));
    }
    let algebra = Algebra::split(n);
    let comult = (0..n)
        .map(|k| {
            let mut v: SparseVec = (0..n).map(|i| (i * n + (k + n - i) % n, Rat::one())).collect();
            v.sort_by_key(|t| t.0);
            v
        })
        .collect();
    let counit = (0..n).map(|k| if k == 0 { Rat::one() } else { Rat::zero() }).collect();
    let mut antipode = linalg::zeros(n, n);
    for k in 0..n {
        antipode[(n - k) % n][k] = Rat::one();
    }
    let labels = (0..n).map(|k| format!("p{k}")).collect();
    HopfPresentation::new(format!("Q[C{n}]*"), labels, algebra, comult, counit, antipode)
}

/// L[N] for a commutative ℚ-algebra L; element index η·dim L + b.
#[derive(Clone, Debug)]
pub struct GroupRing {
    pub base: Algebra,
    pub group: FiniteGroup,
}

/// An element of L[N], flat with index η·dim L + b.
pub type AlgElem = Vec<Rat>;

impl GroupRing {
    pub fn new(base: Algebra, group: FiniteGroup) -> Self {
        GroupRing { base, group }
    }

    pub fn dim(&self) -> usize {
        self.base.dim() * self.group.order()
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn zero(&self) -> AlgElem {
        vec![Rat::zero(); self.dim()]
    }

    pub fn one(&self) -> AlgElem {
        self.term(self.base.unit(), 0)
    }

    /// x·η
    pub fn term(&self, x: &[Rat], eta: usize) -> AlgElem {
        let l = self.base_dim();
        let mut v = self.zero();
        v[eta * l..(eta + 1) * l].clone_from_slice(x);
        v
    }

    pub fn coeff(&self, x: &AlgElem, eta: usize) -> Vec<Rat> {
        let l = self.base_dim();
        x[eta * l..(eta + 1) * l].to_vec()
    }

    /// Σ cᵢ ηᵢ with rational cᵢ.
    pub fn rational(&self, terms: &[(usize, Rat)]) -> AlgElem {
        let mut v = self.zero();
        for (eta, c) in terms {
            let t = self.term(&linalg::scale(self.base.unit(), c), *eta);
            linalg::axpy(&mut v, &Rat::one(), &t);
        }
        v
    }

    /// Multiplies every coefficient by x ∈ L.
    pub fn scale_by(&self, x: &[Rat], y: &AlgElem) -> AlgElem {
        let l = self.base_dim();
        let mut v = self.zero();
        for eta in 0..self.group.order() {
            let c = self.base.mul(x, &y[eta * l..(eta + 1) * l]);
            v[eta * l..(eta + 1) * l].clone_from_slice(&c);
        }
        v
    }

    pub fn mul(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        let l = self.base_dim();
        let n = self.group.order();
        let mut out = self.zero();
        for a in 0..n {
            let xa = &x[a * l..(a + 1) * l];
            if linalg::is_zero_vec(xa) {
                continue;
            }
            for b in 0..n {
                let yb = &y[b * l..(b + 1) * l];
                if linalg::is_zero_vec(yb) {
                    continue;
                }
                let c = self.group.mul(a, b);
                let p = self.base.mul(xa, yb);
                linalg::axpy(&mut out[c * l..(c + 1) * l], &Rat::one(), &p);
            }
        }
        out
    }

    /// Δ(x) in L[N×N], index (η·|N| + η′)·dim L + b.
    pub fn coproduct(&self, x: &AlgElem) -> Tensor {
        let l = self.base_dim();
        let n = self.group.order();
        let mut t = Tensor::new();
        for eta in 0..n {
            for b in 0..l {
                add_into(&mut t, (eta * n + eta) * l + b, x[eta * l + b].clone());
            }
        }
        t
    }

    /// x⊗y in L[N×N].
    pub fn tensor(&self, x: &AlgElem, y: &AlgElem) -> Tensor {
        let l = self.base_dim();
        let n = self.group.order();
        let mut t = Tensor::new();
        for a in 0..n {
            let xa = &x[a * l..(a + 1) * l];
            if linalg::is_zero_vec(xa) {
                continue;
            }
            for b in 0..n {
                let yb = &y[b * l..(b + 1) * l];
                if linalg::is_zero_vec(yb) {
                    continue;
                }
                for (k, v) in self.base.mul(xa, yb).into_iter().enumerate() {
                    add_into(&mut t, (a * n + b) * l + k, v);
                }
            }
        }
        t
    }

    /// Σ x_η ∈ L
    pub fn counit(&self, x: &AlgElem) -> Vec<Rat> {
        let l = self.base_dim();
        let mut v = vec![Rat::zero(); l];
        for eta in 0..self.group.order() {
            linalg::axpy(&mut v, &Rat::one(), &x[eta * l..(eta + 1) * l]);
        }
        v
    }

    /// Σ x_η η⁻¹
    pub fn antipode(&self, x: &AlgElem) -> AlgElem {
        let l = self.base_dim();
        let mut v = self.zero();
        for eta in 0..self.group.order() {
            let t = self.group.inv(eta);
            v[t * l..(t + 1) * l].clone_from_slice(&x[eta * l..(eta + 1) * l]);
        }
        v
    }

    /// g(x η) = act(x) φ(η), with `act` a ℚ-linear map on L given by its
    /// matrix (column j = image of bⱼ) and φ a map on N.
    pub fn twist(&self, x: &AlgElem, act: &Matrix, phi: &[usize]) -> AlgElem {
        let l = self.base_dim();
        let mut v = self.zero();
        for eta in 0..self.group.order() {
            let c = linalg::mat_vec(act, &x[eta * l..(eta + 1) * l]);
            let t = phi[eta];
            v[t * l..(t + 1) * l].clone_from_slice(&c);
        }
        v
    }
}

/// The image of each pⱼ under pⱼ ↦ (1/n) Σᵢ χⱼ(σ⁻ⁱ) σⁱ in ℚ(ζₙ)[Cₙ], with
/// the checks that the map respects the Hopf structure.
#[derive(Clone, Debug)]
pub struct CharacterIso {
    pub ring: GroupRing,
    pub images: Vec<AlgElem>,
    pub multiplicative: bool,
    pub unital: bool,
    pub comultiplicative: bool,
    pub counital: bool,
    pub antipodal: bool,
    pub bijective: bool,
}

impl CharacterIso {
    pub fn holds(&self) -> bool {
        self.multiplicative && self.unital && self.comultiplicative && self.counital && self.antipodal && self.bijective
    }
}

pub fn character_iso(n: usize) -> Result<CharacterIso, HopfError> {
    let dual = dual_cyclic(n)?;
    let field = FieldDesc::cyclotomic(n as u64).map_err(|e| HopfError::Invalid(e.to_string()))?;
    let ring = GroupRing::new(field.algebra.clone(), groups::cyclic(n));
    // ζ^e in the field basis, with ζ = −1 for n = 2 and ζ = 1 for n = 1
    let zeta_pow = |e: usize| -> Vec<Rat> {
        let e = e % n;
        match n {
            1 => vec![Rat::one()],
            2 => vec![if e == 0 { Rat::one() } else { -Rat::one() }],
            _ => {
                let f = crate::exact::CycField::new(n as u64);
                crate::exact::CycElem::zeta_pow(&f, e as i64).coords().to_vec()
            }
        }
    };
    let inv_n = Rat::new(1.into(), (n as i64).into());
    let images: Vec<AlgElem> = (0..n)
        .map(|j| {
            let mut v = ring.zero();
            for i in 0..n {
                // χⱼ(σ⁻ⁱ) = ζ^{−ij}
                let c = linalg::scale(&zeta_pow((n - (i * j) % n) % n), &inv_n);
                linalg::axpy(&mut v, &Rat::one(), &ring.term(&c, i));
            }
            v
        })
        .collect();
    let lin = |x: &[Rat]| -> AlgElem {
        let mut v = ring.zero();
        for (j, c) in x.iter().enumerate() {
            linalg::axpy(&mut v, c, &images[j]);
        }
        v
    };
    let multiplicative = (0..n).all(|i| {
        (0..n).all(|j| {
            let prod = linalg::dense_from_sparse(dual.algebra.basis_product(i, j), n);
            lin(&prod) == ring.mul(&images[i], &images[j])
        })
    });
    let unital = lin(dual.algebra.unit()) == ring.one();
    let comultiplicative = (0..n).all(|k| {
        let mut rhs = Tensor::new();
        for (ij, c) in &dual.comult[k] {
            for (t, v) in ring.tensor(&images[ij / n], &images[ij % n]) {
                add_into(&mut rhs, t, c * v);
            }
        }
        ring.coproduct(&images[k]) == rhs
    });
    let counital = (0..n).all(|k| ring.counit(&images[k]) == linalg::scale(ring.base.unit(), &dual.counit[k]));
    let antipodal = (0..n).all(|k| {
        let s = linalg::dense_from_sparse(
            &linalg::sparse_from_dense(&dual.antipode.iter().map(|r| r[k].clone()).collect::<Vec<_>>()),
            n,
        );
        ring.antipode(&images[k]) == lin(&s)
    });
    // nonzero orthogonal idempotents are ℚ(ζₙ)-independent
    let bijective = multiplicative && images.iter().all(|x| !linalg::is_zero_vec(x));
    Ok(CharacterIso { ring, images, multiplicative, unital, comultiplicative, counital, antipodal, bijective })
}

/// All group-like elements of H: the ℚ-points of the dual, i.e. the
/// one-dimensional ℚ-blocks of H*. Sorted canonically.
pub fn grouplikes(h: &HopfPresentation) -> Result<Vec<Vec<Rat>>, HopfError> {
    let d = h.dim();
    if d > GROUPLIKE_MAX_DIM {
        return Err(HopfError::TooLarge(d));
    }
    // H*: δⁱδʲ = Σ_k c_{k,i,j} δᵏ, unit ε
    let mut mult = vec![vec![Vec::new(); d]; d];
    for (k, t) in h.comult.iter().enumerate() {
        for (ij, c) in t {
            mult[ij / d][ij % d].push((k, c.clone()));
        }
    }
    for row in mult.iter_mut() {
        for v in row.iter_mut() {
            v.sort_by_key(|t| t.0);
        }
    }
    let dual = Algebra::new(d, mult, h.counit.clone())?;
    let split = wedderburn::central_idempotents(&dual, wedderburn::CENTER_SEED)?;
    let mut out = Vec::new();
    for (e, f) in split.idempotents.iter().zip(&split.polys) {
        if f.deg() != 1 {
            continue;
        }
        let frame = wedderburn::block_basis(&dual, e).expect("block basis");
        if frame.dim() != 1 {
            continue;
        }
        // χ(δᵏ): δᵏ·e = χ_k e
        let c = e.iter().position(|v| !v.is_zero()).unwrap();
        let g: Vec<Rat> = (0..d)
            .map(|k| {
                let p = dual.mul(&dual.basis_vector(k), e);
                &p[c] / &e[c]
            })
            .collect();
        debug_assert!(h.is_grouplike(&g));
        out.push(g);
    }
    out.sort();
    Ok(out)
}

/// The Kohl idempotents in ℚ(ζ_{pᵐ})[C_{pᵐ}] with their checks.
#[derive(Clone, Debug)]
pub struct KohlIdempotents {
    pub p: u64,
    pub m: u32,
    pub ring: GroupRing,
    pub elements: Vec<AlgElem>,
    pub orthogonal: bool,
    pub complete: bool,
    /// fixed under a ↦ (Galois action of k, σ ↦ σᵏ) for generators k of ℤ_{pᵐ}*
    pub fixed: bool,
}

pub fn kohl_idempotents(p: u64, m: u32) -> Result<KohlIdempotents, HopfError> {
    if p < 3 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
        return Err(HopfError::NotOddPrime(p));
    }
    if m == 0 {
        return Err(HopfError::Invalid("m must be at least 1".into()));
    }
    let n = p.pow(m) as usize;
    let iso = character_iso(n)?;
    let ring = iso.ring.clone();
    let elements = iso.images;
    let orthogonal = (0..n).all(|i| {
        (0..n).all(|j| {
            let prod = ring.mul(&elements[i], &elements[j]);
            if i == j {
                prod == elements[i]
            } else {
                linalg::is_zero_vec(&prod)
            }
        })
    });
    let mut sum = ring.zero();
    for e in &elements {
        linalg::axpy(&mut sum, &Rat::one(), e);
    }
    let complete = sum == ring.one();
    let field = FieldDesc::cyclotomic(n as u64).map_err(|e| HopfError::Invalid(e.to_string()))?;
    let units = crate::exact::cyclotomic::units_mod(n as u64);
    let fixed = field.galois.generators().into_iter().all(|g| {
        let k = units[g] as usize;
        let phi: Vec<usize> = (0..n).map(|a| a * k % n).collect();
        elements.iter().all(|e| &ring.twist(e, &field.autos[g], &phi) == e)
    });
    Ok(KohlIdempotents { p, m, ring, elements, orthogonal, complete, fixed })
}

/// The group-likes under multiplication, as a Cayley table (identity = the
/// unit, listed first).
pub fn grouplike_group(h: &HopfPresentation) -> Result<(Vec<Vec<Rat>>, FiniteGroup), HopfError> {
    let mut gl = grouplikes(h)?;
    let unit = h.algebra.unit().to_vec();
    if let Some(p) = gl.iter().position(|x| *x == unit) {
        gl.swap(0, p);
        gl[1..].sort();
    }
    let table: Option<Vec<Vec<usize>>> = gl
        .iter()
        .map(|a| gl.iter().map(|b| gl.iter().position(|c| *c == h.algebra.mul(a, b))).collect())
        .collect();
    let table = table.ok_or_else(|| HopfError::Invalid("group-likes not closed".into()))?;
    let g = FiniteGroup::from_table(table).map_err(|e| HopfError::Invalid(e.to_string()))?;
    Ok((gl, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::make_group;

    #[test]
    fn group_algebras_are_hopf() {
        for name in ["C2", "C3", "S3", "Q8", "C2xC2"] {
            let h = group_algebra(&make_group(name).unwrap());
            assert!(h.check_axioms().all(), "{name}");
            assert_eq!(grouplikes(&h).unwrap().len(), h.dim(), "{name}");
        }
    }

    #[test]
    fn antipode_squares_to_identity() {
        let h = group_algebra(&make_group("C4").unwrap());
        assert_eq!(linalg::mat_mul(&h.antipode, &h.antipode), linalg::identity(4));
    }

    #[test]
    fn duals_are_hopf() {
        for n in 1..=12 {
            let h = dual_cyclic(n).unwrap();
            assert!(h.check_axioms().all(), "n = {n}");
        }
        let h = dual_cyclic(8).unwrap();
        assert_eq!(h.comult[0].len(), 8);
        assert!(h.comult[0].iter().all(|(ij, _)| (ij / 8 + ij % 8) % 8 == 0));
    }

    /// Group-likes of (ℚ[Cₙ])*: Δx = x⊗x forces x_{i+j} = xᵢxⱼ, so x is a
    /// homomorphism Cₙ → ℚ*, with values ±1. Enumerate all sign vectors.
    fn brute_dual_grouplikes(n: usize) -> usize {
        let h = dual_cyclic(n).unwrap();
        (0..1u32 << n)
            .filter(|mask| {
                let x: Vec<Rat> = (0..n).map(|k| rat::int(if mask >> k & 1 == 1 { -1 } else { 1 })).collect();
                h.is_grouplike(&x)
            })
            .count()
    }

    #[test]
    fn dual_grouplikes_match_brute_force() {
        for n in 1..=10 {
            let found = grouplikes(&dual_cyclic(n).unwrap()).unwrap();
            assert_eq!(found.len(), brute_dual_grouplikes(n), "n = {n}");
        }
        let g3 = grouplikes(&dual_cyclic(3).unwrap()).unwrap();
        assert_eq!(g3, vec![vec![Rat::one(); 3]]);
        assert_eq!(grouplikes(&dual_cyclic(6).unwrap()).unwrap().len(), 2);
    }

    #[test]
    fn character_iso_small() {
        let c = character_iso(2).unwrap();
        assert!(c.holds());
        let half = rat::rat(1, 2);
        assert_eq!(c.images[0], vec![half.clone(), half.clone()]);
        assert_eq!(c.images[1], vec![half.clone(), -half]);
        for n in 1..=12 {
            assert!(character_iso(n).unwrap().holds(), "n = {n}");
        }
    }

    #[test]
    fn kohl_cases() {
        for (p, m) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let k = kohl_idempotents(p, m).unwrap();
            assert_eq!(k.elements.len() as u64, p.pow(m));
            assert!(k.orthogonal && k.complete && k.fixed, "({p},{m})");
        }
        let k = kohl_idempotents(3, 1).unwrap();
        let third = rat::rat(1, 3);
        assert_eq!(k.ring.coeff(&k.elements[0], 1), vec![third, Rat::zero()]);
        assert!(kohl_idempotents(2, 1).is_err());
        assert!(kohl_idempotents(9, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let h = dual_cyclic(4).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        let back: HopfPresentation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert!(back.check_axioms().all());
    }

    #[test]
    fn broken_comultiplication_detected() {
        let mut h = group_algebra(&make_group("C3").unwrap());
        h.comult[1] = vec![(4, Rat::one()), (5, Rat::one())];
        assert!(!h.check_axioms().all());
    }

    #[test]
    fn iso_via_identity() {
        let h = group_algebra(&make_group("C3").unwrap());
        assert!(h.check_iso_via(&h, &linalg::identity(3)).is_ok());
        let mut p = linalg::identity(3);
        p.swap(1, 2);
        assert!(h.check_iso_via(&h, &p).is_ok());
        let mut q = linalg::identity(3);
        q[0][0] = rat::int(2);
        assert!(h.check_iso_via(&h, &q).is_err());
    }
}
