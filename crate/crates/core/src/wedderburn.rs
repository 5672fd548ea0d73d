//! Wedderburn blocks of semisimple ℚ-algebras: center splitting by
//! idempotents, quaternion blocks by Hilbert symbols, and the comparison
//! with the block shape of ℂ[N].

use crate::algebra::Algebra;
use crate::exact::factor::factor_over_q;
use crate::exact::linalg::{self, Echelon, Frame};
use crate::exact::rat::{self, Rat};
use crate::exact::Poly;
use crate::etale::{self, EtaleAlgebra, FieldDesc};
use crate::groups::{self, FiniteGroup};
use crate::theta::{self, FixedRing, ThetaError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DECOMPOSE_MAX_DIM: usize = 16;
/// Seed for the random primitive central element.
pub const CENTER_SEED: u64 = 0xce7e;
/// complex_profile answers only when the constraints leave one solution, up
/// to this order.
pub const PROFILE_MAX_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WedderburnError {
    #[error("algebra of dimension {0} exceeds the bound {DECOMPOSE_MAX_DIM}")]
    TooLarge(usize),
    #[error("algebra is not semisimple (trace form rank {rank} < {dim})")]
    NotSemisimple { rank: usize, dim: usize },
    #[error("unsupported block: {0}")]
    Unsupported(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("Hilbert symbol of zero")]
    ZeroArgument,
    #[error("no unique block profile for a group of order {0}")]
    NoProfile(usize),
    #[error("dimension {0} does not match |N| = {1}")]
    DimensionMismatch(usize, usize),
    #[error("failed to find a primitive central element")]
    NoPrimitive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    /// Mat₁ over its center
    Field,
    /// Mat₂(ℚ)
    SplitQuaternion,
    /// a quaternion division algebra over ℚ
    DivisionQuaternion,
}

/// Quaternion basis u, v with u² = a, v² = b, uv = −vu, in ambient
/// coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct QuaternionWitness {
    #[serde(with = "rat::serde_rat_vec")]
    pub u: Vec<Rat>,
    #[serde(with = "rat::serde_rat_vec")]
    pub v: Vec<Rat>,
    #[serde(with = "rat::serde_rat")]
    pub a: Rat,
    #[serde(with = "rat::serde_rat")]
    pub b: Rat,
    /// (a,b)_v at ∞, 2 and the odd primes dividing ab
    pub local_symbols: Vec<(String, i8)>,
    /// x ≠ 0 with x² = 0, when one was found
    #[serde(serialize_with = "ser_opt_vec")]
    pub nilpotent: Option<Vec<Rat>>,
}

fn ser_opt_vec<S: serde::Serializer>(v: &Option<Vec<Rat>>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref().map(|x| rat::texts(x)).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct Block {
    pub k: usize,
    pub center: String,
    pub center_degree: usize,
    /// minimal polynomial of the primitive element's component in this block
    pub center_poly: Poly,
    pub kind: BlockKind,
    #[serde(with = "rat::serde_rat_vec")]
    pub idempotent: Vec<Rat>,
    pub dim: usize,
    pub quaternion: Option<QuaternionWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockProfile {
    pub blocks: Vec<Block>,
    pub seed: u64,
    /// Σ k²·[Z:ℚ] = dim, idempotents orthogonal, central, summing to 1
    pub checks_passed: bool,
}

impl BlockProfile {
    /// Sorted (k, center) pairs, division blocks marked.
    pub fn summary(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .blocks
            .iter()
            .map(|b| match b.kind {
                BlockKind::Field if b.k == 1 => b.center.clone(),
                BlockKind::SplitQuaternion => "Mat2(Q)".to_string(),
                BlockKind::DivisionQuaternion => "H".to_string(),
                _ => format!("Mat{}({})", b.k, b.center),
            })
            .collect();
        v.sort();
        v
    }

    pub fn count_rational_fields(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.k == 1 && b.center_degree == 1)
            .count()
    }
}

/// Central primitive idempotents with the minimal polynomial of the
/// primitive central element on each block.
pub struct CentralSplit {
    pub idempotents: Vec<Vec<Rat>>,
    pub polys: Vec<Poly>,
    pub primitive: Vec<Rat>,
}

/// Splits the center of a semisimple algebra into fields.
pub fn central_idempotents(a: &Algebra, seed: u64) -> Result<CentralSplit, WedderburnError> {
    let z = a.center();
    let zd = z.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prim = None;
    for attempt in 0..64 {
        let range = 3 + attempt / 8;
        let mut x = vec![Rat::zero(); a.dim()];
        for b in &z {
            linalg::axpy(&mut x, &rat::int(rng.gen_range(-range..=range)), b);
        }
        let m = a.min_poly(&x);
        if m.deg() == zd {
            prim = Some((x, m));
            break;
        }
    }
    let (x, m) = prim.ok_or(WedderburnError::NoPrimitive)?;
    let f = factor_over_q(&m).map_err(|e| WedderburnError::Unsupported(e.to_string()))?;
    if f.factors.iter().any(|(_, e)| *e > 1) {
        return Err(WedderburnError::NotSemisimple { rank: a.trace_form_rank(), dim: a.dim() });
    }
    let mut idempotents = Vec::new();
    let mut polys = Vec::new();
    for (fi, _) in &f.factors {
        let gi = m.exact_div(fi).expect("factor divides");
        let (d, s, _) = Poly::ext_gcd(&gi, fi);
        debug_assert!(d == Poly::one());
        let ei = (&s * &gi).rem(&m);
        idempotents.push(a.eval_poly(&ei, &x));
        polys.push(fi.monic());
    }
    Ok(CentralSplit { idempotents, polys, primitive: x })
}

fn center_name(f: &Poly) -> String {
    match f.deg() {
        1 => "Q".into(),
        2 => {
            let (c, b) = (f.coeff(0), f.coeff(1));
            let disc = &b * &b - rat::int(4) * c;
            let m = rat::square_class(&disc);
            match m.to_i64() {
                Some(-3) => "Q(z3)".into(),
                Some(-1) => "Q(z4)".into(),
                _ => format!("Q(sqrt({m}))"),
            }
        }
        _ => format!("Q[x]/({f})"),
    }
}

/// Square class of the discriminant for a quadratic block center.
pub fn quadratic_center_class(b: &Block) -> Option<BigInt> {
    if b.center_degree != 2 {
        return None;
    }
    let (c, l) = (b.center_poly.coeff(0), b.center_poly.coeff(1));
    Some(rat::square_class(&(&l * &l - rat::int(4) * c)))
}

pub fn decompose(a: &Algebra) -> Result<BlockProfile, WedderburnError> {
    if a.dim() > DECOMPOSE_MAX_DIM {
        return Err(WedderburnError::TooLarge(a.dim()));
    }
    let rank = a.trace_form_rank();
    if rank < a.dim() {
        return Err(WedderburnError::NotSemisimple { rank, dim: a.dim() });
    }
    let split = central_idempotents(a, CENTER_SEED)?;
    let mut blocks = Vec::new();
    for (e, f) in split.idempotents.iter().zip(&split.polys) {
        let span: Vec<Vec<Rat>> = (0..a.dim()).map(|j| a.mul(e, &a.basis_vector(j))).collect();
        let mut ech = Echelon::new(a.dim());
        let mut basis = Vec::new();
        for v in span {
            if ech.insert(linalg::sparse_from_dense(&v)) {
                basis.push(v);
            }
        }
        let m = basis.len();
        let c = f.deg();
        let k = (1..=m).find(|k| k * k * c >= m).unwrap();
        if k * k * c != m {
            return Err(WedderburnError::Unsupported(format!("block of dimension {m} over a degree {c} center")));
        }
        let (kind, quaternion) = match (k, c) {
            (1, _) => (BlockKind::Field, None),
            (2, 1) => {
                let w = quaternion_witness(a, &basis, e)?;
                let split = w.local_symbols.iter().all(|(_, s)| *s == 1);
                (
                    if split { BlockKind::SplitQuaternion } else { BlockKind::DivisionQuaternion },
                    Some(w),
                )
            }
            _ => {
                return Err(WedderburnError::Unsupported(format!(
                    "Mat{k} over a degree {c} center"
                )))
            }
        };
        blocks.push(Block {
            k,
            center: center_name(f),
            center_degree: c,
            center_poly: f.clone(),
            kind,
            idempotent: e.clone(),
            dim: m,
            quaternion,
        });
    }
    let checks_passed = check_profile(a, &blocks);
    Ok(BlockProfile { blocks, seed: CENTER_SEED, checks_passed })
}

fn check_profile(a: &Algebra, blocks: &[Block]) -> bool {
    let total: usize = blocks.iter().map(|b| b.k * b.k * b.center_degree).sum();
    let mut sum = vec![Rat::zero(); a.dim()];
    for b in blocks {
        linalg::axpy(&mut sum, &Rat::one(), &b.idempotent);
    }
    let central = blocks.iter().all(|b| {
        (0..a.dim()).all(|j| {
            let x = a.basis_vector(j);
            a.mul(&b.idempotent, &x) == a.mul(&x, &b.idempotent)
        })
    });
    let orthogonal = blocks.iter().enumerate().all(|(i, b)| {
        blocks.iter().enumerate().all(|(j, c)| {
            let p = a.mul(&b.idempotent, &c.idempotent);
            if i == j {
                p == b.idempotent
            } else {
                linalg::is_zero_vec(&p)
            }
        })
    });
    total == a.dim() && sum == a.unit() && central && orthogonal
}

fn quaternion_witness(a: &Algebra, basis: &[Vec<Rat>], e: &[Rat]) -> Result<QuaternionWitness, WedderburnError> {
    let (q, frame) = a
        .subalgebra(basis, e)
        .map_err(|err| WedderburnError::Unsupported(err.to_string()))?;
    let one = q.unit().to_vec();
    // pure quaternions: reduced trace zero
    let traces: Vec<Rat> = (0..4).map(|j| q.trace(&q.basis_vector(j))).collect();
    let pure = linalg::nullspace(&vec![traces], 4);
    let scalar_of = |x: &[Rat]| -> Option<Rat> {
        let s = q.mul(x, x);
        let c = one.iter().position(|v| !v.is_zero()).unwrap();
        let lam = &s[c] / &one[c];
        (linalg::scale(&one, &lam) == s).then_some(lam)
    };
    let lift = |x: &[Rat]| -> Vec<Rat> { linalg::dense_from_sparse(&frame.combine(x), a.dim()) };
    let mut nilpotent: Option<Vec<Rat>> = None;
    let u = pure
        .iter()
        .find(|x| scalar_of(x).is_some_and(|s| !s.is_zero()))
        .cloned()
        .or_else(|| {
            let (x, y) = (&pure[0], &pure[1]);
            Some(linalg::add(x, y))
        })
        .unwrap();
    for x in &pure {
        if scalar_of(x).is_some_and(|s| s.is_zero()) {
            nilpotent.get_or_insert_with(|| lift(x));
        }
    }
    let a_val = scalar_of(&u)
        .filter(|s| !s.is_zero())
        .ok_or_else(|| WedderburnError::Unsupported("no invertible pure quaternion".into()))?;
    // anticommutant of u inside the pure part
    let rows: Vec<Vec<Rat>> = {
        let m: Vec<Vec<Rat>> = pure
            .iter()
            .map(|x| linalg::add(&q.mul(&u, x), &q.mul(x, &u)))
            .collect();
        linalg::transpose(&m)
    };
    let anti: Vec<Vec<Rat>> = linalg::nullspace(&rows, pure.len())
        .into_iter()
        .map(|c| {
            let mut v = vec![Rat::zero(); 4];
            for (ci, p) in c.iter().zip(&pure) {
                linalg::axpy(&mut v, ci, p);
            }
            v
        })
        .collect();
    let v = anti
        .iter()
        .find(|x| scalar_of(x).is_some_and(|s| !s.is_zero()))
        .cloned()
        .unwrap_or_else(|| linalg::add(&anti[0], &anti[1]));
    for x in &anti {
        if scalar_of(x).is_some_and(|s| s.is_zero()) {
            nilpotent.get_or_insert_with(|| lift(x));
        }
    }
    let b_val = scalar_of(&v)
        .filter(|s| !s.is_zero())
        .ok_or_else(|| WedderburnError::Unsupported("no anticommuting pure quaternion".into()))?;
    let local_symbols = local_symbols(&a_val, &b_val)?;
    if nilpotent.is_none() && local_symbols.iter().all(|(_, s)| *s == 1) {
        nilpotent = split_nilpotent(&q, &u, &v, &a_val, &b_val).map(|x| lift(&x));
    }
    Ok(QuaternionWitness {
        u: lift(&u),
        v: lift(&v),
        a: a_val,
        b: b_val,
        local_symbols,
        nilpotent,
    })
}

fn rational_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rat::new(n, d))
}

/// For a split algebra: x = αu + βv + γuv with x² a square c², then
/// y(1 + x/c) for y anticommuting with x is nilpotent.
fn split_nilpotent(q: &Algebra, u: &[Rat], v: &[Rat], a: &Rat, b: &Rat) -> Option<Vec<Rat>> {
    let uv = q.mul(u, v);
    let one = q.unit().to_vec();
    for bound in 1..=12i64 {
        for al in -bound..=bound {
            for be in -bound..=bound {
                for ga in -bound..=bound {
                    if al.abs().max(be.abs()).max(ga.abs()) != bound {
                        continue;
                    }
                    let (al, be, ga) = (rat::int(al), rat::int(be), rat::int(ga));
                    let sq = &al * &al * a + &be * &be * b - &ga * &ga * a * b;
                    let Some(c) = rational_sqrt(&sq) else { continue };
                    let mut x = linalg::scale(u, &al);
                    linalg::axpy(&mut x, &be, v);
                    linalg::axpy(&mut x, &ga, &uv);
                    if c.is_zero() {
                        return Some(x);
                    }
                    // y anticommuting with x: pick among u, v, uv
                    for y in [u, v, &uv[..]] {
                        let anti = linalg::add(&q.mul(y, &x), &q.mul(&x, y));
                        if !linalg::is_zero_vec(&anti) {
                            continue;
                        }
                        let mut t = one.clone();
                        linalg::axpy(&mut t, &(Rat::one() / &c), &x);
                        let w = q.mul(y, &t);
                        if !linalg::is_zero_vec(&w) && linalg::is_zero_vec(&q.mul(&w, &w)) {
                            return Some(w);
                        }
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Integer in the square class of q, as (valuation at p, p-free part).
fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut e = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        e += 1;
    }
    (e, n)
}

fn legendre(u: &BigInt, p: u64) -> i8 {
    let pb = BigInt::from(p);
    let r = u.mod_floor(&pb).modpow(&BigInt::from((p - 1) / 2), &pb);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// The local Hilbert symbol (a, b)_v.
pub fn hilbert_symbol(a: &Rat, b: &Rat, place: Place) -> Result<i8, WedderburnError> {
    if a.is_zero() || b.is_zero() {
        return Err(WedderburnError::ZeroArgument);
    }
    let (ai, bi) = (a.numer() * a.denom(), b.numer() * b.denom());
    match place {
        Place::Infinity => Ok(if ai.is_negative() && bi.is_negative() { -1 } else { 1 }),
        Place::Prime(p) if !is_prime(p) => Err(WedderburnError::NotPrime(p)),
        Place::Prime(2) => {
            let (al, u) = split_valuation(&ai, 2);
            let (be, v) = split_valuation(&bi, 2);
            let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
            let eps = |x: &BigInt| ((m8(x) + 8 - 1) / 2) % 2;
            let omega = |x: &BigInt| {
                let r = m8(x);
                ((r * r - 1) / 8) % 2
            };
            let e = eps(&u) * eps(&v) + al * omega(&v) + be * omega(&u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Prime(p) => {
            let (al, u) = split_valuation(&ai, p);
            let (be, v) = split_valuation(&bi, p);
            let mut s: i8 = if (al * be) % 2 == 1 && (p % 4 == 3) { -1 } else { 1 };
            if be % 2 == 1 {
                s *= legendre(&u, p);
            }
            if al % 2 == 1 {
                s *= legendre(&v, p);
            }
            Ok(s)
        }
    }
}

/// Places where (a,b) can ramify: ∞, 2, and odd primes dividing ab.
pub fn relevant_places(a: &Rat, b: &Rat) -> Vec<Place> {
    let mut n = (a.numer() * a.denom() * b.numer() * b.denom()).abs();
    let mut primes = vec![2u64];
    let mut p = BigInt::from(3);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            primes.push(p.to_u64().unwrap());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 2;
    }
    while (&n % 2u32).is_zero() {
        n /= 2;
    }
    if n > BigInt::one() {
        primes.push(n.to_u64().expect("prime factor fits in u64"));
    }
    let mut places = vec![Place::Infinity];
    places.extend(primes.into_iter().map(Place::Prime));
    places
}

fn local_symbols(a: &Rat, b: &Rat) -> Result<Vec<(String, i8)>, WedderburnError> {
    relevant_places(a, b)
        .into_iter()
        .map(|v| Ok((v.to_string(), hilbert_symbol(a, b, v)?)))
        .collect()
}

/// (a,b)_ℚ ≅ Mat₂(ℚ)?
pub fn quaternion_splits(a: &Rat, b: &Rat) -> Result<bool, WedderburnError> {
    Ok(local_symbols(a, b)?.iter().all(|(_, s)| *s == 1))
}

/// Block sizes of ℂ[N] from class count, abelianization and Σnᵢ² = |N|,
/// provided those pin them down.
pub fn complex_profile(n: &FiniteGroup) -> Result<Vec<usize>, WedderburnError> {
    let order = n.order();
    if order > PROFILE_MAX_ORDER {
        return Err(WedderburnError::NoProfile(order));
    }
    let classes = n.conjugacy_classes().len();
    let ones = n.abelianization_order();
    let rest = classes - ones;
    let mut sols = Vec::new();
    fn rec(left: usize, slots: usize, min: usize, order: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut k = min;
        while k * k * slots <= left {
            if order.is_multiple_of(k) {
                cur.push(k);
                rec(left - k * k, slots - 1, k, order, cur, out);
                cur.pop();
            }
            k += 1;
        }
    }
    if order >= ones {
        rec(order - ones, rest, 2, order, &mut Vec::new(), &mut sols);
    }
    if sols.len() != 1 {
        return Err(WedderburnError::NoProfile(order));
    }
    let mut out = vec![1; ones];
    out.extend(sols.pop().unwrap());
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct AbssVerdict {
    pub absolutely_semisimple: bool,
    pub rational: Vec<String>,
    pub complex: Vec<usize>,
    pub profile: BlockProfile,
}

/// Blocks of the algebra over ℚ are Mat_{nᵢ}(ℚ) with nᵢ the block sizes of
/// ℂ[N].
pub fn is_absolutely_semisimple(h: &Algebra, n: &FiniteGroup) -> Result<AbssVerdict, WedderburnError> {
    if h.dim() != n.order() {
        return Err(WedderburnError::DimensionMismatch(h.dim(), n.order()));
    }
    let profile = decompose(h)?;
    let complex = complex_profile(n)?;
    let mut shapes: Vec<Option<usize>> = profile
        .blocks
        .iter()
        .map(|b| match b.kind {
            BlockKind::Field if b.center_degree == 1 => Some(1),
            BlockKind::SplitQuaternion => Some(2),
            _ => None,
        })
        .collect();
    shapes.sort();
    let want: Vec<Option<usize>> = complex.iter().map(|&k| Some(k)).collect();
    Ok(AbssVerdict {
        absolutely_semisimple: shapes == want,
        rational: profile.summary(),
        complex,
        profile,
    })
}

/// Frame coordinates helper shared with callers that need block bases.
pub fn block_basis(a: &Algebra, e: &[Rat]) -> Option<Frame> {
    let span: Vec<Vec<Rat>> = (0..a.dim()).map(|j| a.mul(e, &a.basis_vector(j))).collect();
    let mut ech = Echelon::new(a.dim());
    let basis: Vec<Vec<Rat>> = span
        .into_iter()
        .filter(|v| ech.insert(linalg::sparse_from_dense(v)))
        .collect();
    Frame::from_dense(&basis)
}

/// H(θ) = (ℚ(ζ₄)[Q₈])^{C₂}: the generator acts on ζ₄ by ζ ↦ −ζ and on Q₈
/// by conjugation with k.
#[derive(Clone, Debug, Serialize)]
pub struct GreitherForm {
    pub form: FixedRing,
    pub profile: BlockProfile,
    pub verdict: AbssVerdict,
    /// 1, ζv, ζu, w of the quaternion part, 1 meaning its unit (1 − z)/2
    pub quaternion_basis: Vec<String>,
    pub quaternion_basis_fixed: bool,
    pub zv_squared_is_one: bool,
    pub zu_squared_is_one: bool,
    pub zv_zu_is_w: bool,
    pub nilpotent_nonzero: bool,
    pub nilpotent_square_zero: bool,
    pub quaternion_block: Option<BlockKind>,
}

impl GreitherForm {
    pub fn holds(&self) -> bool {
        self.form.checks.all()
            && self.quaternion_basis_fixed
            && self.zv_squared_is_one
            && self.zu_squared_is_one
            && self.zv_zu_is_w
            && self.nilpotent_nonzero
            && self.nilpotent_square_zero
            && self.quaternion_block == Some(BlockKind::SplitQuaternion)
            && self.verdict.absolutely_semisimple
    }
}

fn conj_by(g: &FiniteGroup, k: usize) -> Vec<usize> {
    (0..g.order()).map(|x| g.conj(k, x)).collect()
}

pub fn greither_form() -> Result<GreitherForm, ThetaError> {
    let q8 = groups::quaternion8();
    let idx = |l: &str| q8.index_of_label(l).expect("Q8 label");
    let field = FieldDesc::cyclotomic(4)?;
    let l = EtaleAlgebra::from_field(&field)?;
    let phi = vec![(0..8).collect(), conj_by(&q8, idx("k"))];
    let form = theta::fixed_ring(&l, &q8, &phi, "H(theta)")?;
    let ring = &form.ring;
    let half = rat::rat(1, 2);
    let one = [Rat::one(), Rat::zero()];
    let zeta = [Rat::zero(), Rat::one()];
    let pair = |c: &[Rat; 2], a: &str, b: &str| {
        let mut x = ring.term(c, idx(a));
        linalg::axpy(&mut x, &-Rat::one(), &ring.term(c, idx(b)));
        linalg::scale(&x, &half)
    };
    let e = pair(&one, "1", "-1");
    let zu = pair(&zeta, "i", "-i");
    let zv = pair(&zeta, "j", "-j");
    let w = pair(&one, "k", "-k");
    let quaternion_basis_fixed = [&e, &zv, &zu, &w].iter().all(|x| form.coords(x).is_some());
    let nil = linalg::sub(&zu, &w);
    let profile = decompose(&form.hopf.algebra)?;
    let e_coords = form.coords(&e);
    let quaternion_block = profile
        .blocks
        .iter()
        .find(|b| Some(&b.idempotent) == e_coords.as_ref())
        .map(|b| b.kind.clone());
    let verdict = is_absolutely_semisimple(&form.hopf.algebra, &q8)?;
    Ok(GreitherForm {
        quaternion_basis: [&e, &zv, &zu, &w].iter().map(|x| form.describe(x)).collect(),
        quaternion_basis_fixed,
        zv_squared_is_one: ring.mul(&zv, &zv) == e,
        zu_squared_is_one: ring.mul(&zu, &zu) == e,
        zv_zu_is_w: ring.mul(&zv, &zu) == w,
        nilpotent_nonzero: !linalg::is_zero_vec(&nil),
        nilpotent_square_zero: linalg::is_zero_vec(&ring.mul(&nil, &nil)),
        quaternion_block,
        profile,
        verdict,
        form,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GreitherPreimage {
    pub l: EtaleAlgebra,
    pub components: usize,
    pub galois: bool,
    pub theta: FixedRing,
    pub blocks: Vec<String>,
    /// projection of Θ(L) to the component of the identity coset, in the
    /// basis of H(θ)
    pub basis_change: Vec<Vec<String>>,
    pub reproduces: bool,
    pub detail: String,
}

/// L = ℚ(ζ₄)¹² as an Aut(Q₈) ≅ S₄-Galois algebra from U = {1, conj_k}.
pub fn theta_preimage_greither() -> Result<GreitherPreimage, ThetaError> {
    let q8 = groups::quaternion8();
    let aut = groups::automorphism_group(&q8)?;
    let ck = conj_by(&q8, q8.index_of_label("k").expect("Q8 label"));
    let u = aut
        .maps
        .iter()
        .position(|m| *m == ck)
        .ok_or_else(|| ThetaError::Invalid("conjugation by k missing from Aut(Q8)".into()))?;
    let field = FieldDesc::cyclotomic(4)?;
    let l = etale::build_f_galois(&aut.group, &[0, u], &field, &[0, 1])?;
    let galois = etale::verify_galois(&l).bijective;
    let comps = l.components.as_ref().map_or(0, |c| c.count);
    let h = theta::theta(&l, &q8, &aut.maps)?;
    let target = greither_form()?.form;
    // component 0 is the coset of the identity
    let deg = field.degree();
    let dl = l.dim();
    let mut p = linalg::zeros(target.dim(), h.dim());
    let mut detail = String::from("projection preserves product, unit, coproduct and counit");
    let mut ok = l.components.as_ref().is_some_and(|c| c.transversal[0] == 0);
    for (i, x) in h.basis.iter().enumerate() {
        let proj: Vec<Rat> = (0..8).flat_map(|eta| x[eta * dl..eta * dl + deg].to_vec()).collect();
        match target.coords(&proj) {
            Some(c) => {
                for (r, v) in c.into_iter().enumerate() {
                    p[r][i] = v;
                }
            }
            None => {
                ok = false;
                detail = format!("basis element {i} projects outside H(theta)");
            }
        }
    }
    if ok {
        if let Err(e) = h.hopf.check_iso_via(&target.hopf, &p) {
            ok = false;
            detail = e;
        }
    }
    let blocks = decompose(&h.hopf.algebra)?.summary();
    Ok(GreitherPreimage {
        components: comps,
        galois,
        blocks,
        basis_change: p.iter().map(|r| rat::texts(r)).collect(),
        reproduces: ok,
        detail,
        theta: h,
        l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::make_group;

    fn group_algebra(name: &str) -> Algebra {
        let g = make_group(name).unwrap();
        let n = g.order();
        let mult = (0..n)
            .map(|i| (0..n).map(|j| vec![(g.mul(i, j), Rat::one())]).collect())
            .collect();
        let mut unit = vec![Rat::zero(); n];
        unit[0] = Rat::one();
        Algebra::new(n, mult, unit).unwrap()
    }

    #[test]
    fn q_c3_has_a_cyclotomic_block() {
        let p = decompose(&group_algebra("C3")).unwrap();
        assert!(p.checks_passed);
        assert_eq!(p.summary(), vec!["Q", "Q(z3)"]);
    }

    #[test]
    fn q_d3_and_q_q8() {
        let p = decompose(&group_algebra("D3")).unwrap();
        assert_eq!(p.summary(), vec!["Mat2(Q)", "Q", "Q"]);
        let p = decompose(&group_algebra("Q8")).unwrap();
        assert_eq!(p.summary(), vec!["H", "Q", "Q", "Q", "Q"]);
        let h = p.blocks.iter().find(|b| b.k == 2).unwrap();
        assert!(h.quaternion.as_ref().unwrap().nilpotent.is_none());
    }

    #[test]
    fn split_blocks_carry_nilpotents() {
        let a = group_algebra("D4");
        let p = decompose(&a).unwrap();
        for b in p.blocks.iter().filter(|b| b.k == 2) {
            let x = b.quaternion.as_ref().unwrap().nilpotent.clone().unwrap();
            assert!(!linalg::is_zero_vec(&x));
            assert!(linalg::is_zero_vec(&a.mul(&x, &x)));
        }
    }

    #[test]
    fn non_semisimple_rejected() {
        let dual = Algebra::power_basis(&Poly::from_ints(&[0, 0, 1]));
        assert!(matches!(decompose(&dual), Err(WedderburnError::NotSemisimple { .. })));
    }

    #[test]
    fn hilbert_examples() {
        let h = |a, b, p| hilbert_symbol(&rat::int(a), &rat::int(b), p).unwrap();
        for p in [2, 3, 5, 7] {
            assert_eq!(h(1, 1, Place::Prime(p)), 1);
        }
        assert_eq!(h(-1, -1, Place::Prime(2)), -1);
        assert_eq!(h(-1, -1, Place::Infinity), -1);
        assert_eq!(h(2, 3, Place::Prime(3)), -1);
        assert!(hilbert_symbol(&rat::int(2), &rat::int(3), Place::Prime(9)).is_err());
        assert!(!quaternion_splits(&rat::int(-1), &rat::int(-1)).unwrap());
        assert!(quaternion_splits(&rat::int(1), &rat::int(-7)).unwrap());
    }

    /// (a,b)_p = 1 iff ax² + by² = z² has a primitive solution p-adically;
    /// for v_p(a), v_p(b) ≤ 1 a primitive solution mod p³ (odd p) or mod 32
    /// (p = 2) lifts by Hensel.
    fn brute_hilbert(a: i64, b: i64, p: i64) -> i8 {
        let m = if p == 2 { 32 } else { p * p * p };
        let mut unit_root = vec![false; m as usize];
        let mut any_root = vec![false; m as usize];
        for z in 0..m {
            let s = (z * z % m) as usize;
            any_root[s] = true;
            if z % p != 0 {
                unit_root[s] = true;
            }
        }
        for x in 0..m {
            for y in 0..m {
                let t = ((a * x * x + b * y * y) % m + m) % m;
                let prim = x % p != 0 || y % p != 0;
                if (prim && any_root[t as usize]) || unit_root[t as usize] {
                    return 1;
                }
            }
        }
        -1
    }

    fn reduce(mut a: i64, p: i64) -> i64 {
        while a % (p * p) == 0 {
            a /= p * p;
        }
        a
    }

    #[test]
    fn hilbert_matches_brute_force() {
        for p in [2i64, 3, 5] {
            for a in -12i64..=12 {
                for b in -12i64..=12 {
                    if a == 0 || b == 0 {
                        continue;
                    }
                    let (ra, rb) = (reduce(a, p), reduce(b, p));
                    let want = brute_hilbert(ra, rb, p);
                    let got = hilbert_symbol(&rat::int(a), &rat::int(b), Place::Prime(p as u64)).unwrap();
                    assert_eq!(got, want, "({a},{b})_{p}");
                }
            }
        }
    }

    #[test]
    fn complex_profiles() {
        assert_eq!(complex_profile(&make_group("C5").unwrap()).unwrap(), vec![1; 5]);
        assert_eq!(complex_profile(&make_group("D3").unwrap()).unwrap(), vec![1, 1, 2]);
        assert_eq!(complex_profile(&make_group("Q8").unwrap()).unwrap(), vec![1, 1, 1, 1, 2]);
        assert_eq!(complex_profile(&make_group("D4").unwrap()).unwrap(), vec![1, 1, 1, 1, 2]);
        assert_eq!(complex_profile(&make_group("C3^2").unwrap()).unwrap(), vec![1; 9]);
    }

    #[test]
    fn abss_group_algebras() {
        let d3 = make_group("D3").unwrap();
        assert!(is_absolutely_semisimple(&group_algebra("D3"), &d3).unwrap().absolutely_semisimple);
        let q8 = make_group("Q8").unwrap();
        assert!(!is_absolutely_semisimple(&group_algebra("Q8"), &q8).unwrap().absolutely_semisimple);
        let c3 = make_group("C3").unwrap();
        assert!(!is_absolutely_semisimple(&group_algebra("C3"), &c3).unwrap().absolutely_semisimple);
    }

    #[test]
    fn greither_form_relations() {
        let g = greither_form().unwrap();
        assert!(g.holds(), "{:?}", g.quaternion_basis);
        assert_eq!(g.profile.summary(), vec!["Mat2(Q)", "Q", "Q", "Q", "Q"]);
    }

    #[test]
    fn greither_preimage() {
        let r = theta_preimage_greither().unwrap();
        assert_eq!(r.components, 12);
        assert!(r.galois);
        assert!(r.reproduces, "{}", r.detail);
    }
}
