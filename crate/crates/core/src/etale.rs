//! F-Galois extensions of ℚ: explicit fields with their Galois actions,
//! products Mⁿ with an induced F-action, and the Galois-map criterion.

use crate::algebra::{Algebra, AlgebraError};
use crate::exact::cyclotomic::{euler_phi, units_mod, CycElem, CycField};
use crate::exact::factor::factor_over_q;
use crate::exact::linalg::{self, Echelon, Frame, Matrix, SparseVec};
use crate::exact::rat::{self, Rat};
use crate::exact::Poly;
use crate::groups::{self, FiniteGroup, GroupError};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Seed for the random primitive elements used in field certificates.
pub const FIELD_SEED: u64 = 0x0f1e1d;

/// Above this ℚ-dimension `verify_galois` uses the per-component route
/// when the algebra has component data.
pub const DIRECT_ROUTE_MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EtaleError {
    #[error("not a field: {0}")]
    NotAField(String),
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("action is not valid: {0}")]
    BadAction(String),
    #[error("the field is not Galois for the given subgroup action: {0}")]
    NotUGalois(String),
    #[error("not a subgroup of the acting group")]
    NotSubgroup,
    #[error("Galois map is not bijective: rank {rank} of {expected}")]
    NotGalois { rank: usize, expected: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldKind {
    Rationals,
    Cyclotomic { n: u64 },
    Quadratic { d: i64 },
    /// ℚ(√a, √b)
    Biquadratic { a: i64, b: i64 },
    /// ℚ(ζ₃, ∛2)
    RadicalS3,
    /// a field met as a fixed subalgebra
    Derived,
}

/// A number field with explicit structure constants and its full Galois
/// group acting by basis-image matrices.
#[derive(Clone, Debug, Serialize)]
pub struct FieldDesc {
    pub kind: FieldKind,
    pub name: String,
    pub basis_labels: Vec<String>,
    pub algebra: Algebra,
    pub galois: FiniteGroup,
    /// `autos[g]`: column j is the image of basis element j.
    #[serde(serialize_with = "ser_mats")]
    pub autos: Vec<Matrix>,
    /// Minimal polynomial of a primitive element; irreducible of full degree.
    pub certificate: Poly,
}

fn ser_mats<S: serde::Serializer>(m: &[Matrix], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|a| a.iter().map(|r| rat::texts(r)).collect::<Vec<_>>()))
}

/// Irreducible minimal polynomial of full degree for a random element, if
/// the algebra is a field; `None` otherwise.
pub fn certify_field(a: &Algebra) -> Option<Poly> {
    if a.dim() == 0 || !a.is_commutative() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FIELD_SEED);
    for _ in 0..24 {
        let x: Vec<Rat> = (0..a.dim()).map(|_| rat::int(rng.gen_range(-4..=4))).collect();
        let m = a.min_poly(&x);
        if m.deg() == a.dim() {
            let f = factor_over_q(&m).ok()?;
            return f.is_irreducible().then_some(m);
        }
    }
    None
}

fn fixed_space_dim(dim: usize, mats: &[&Matrix]) -> usize {
    let mut ech = Echelon::new(dim);
    for m in mats {
        for r in 0..dim {
            let mut row = m[r].clone();
            row[r] -= Rat::one();
            ech.insert(linalg::sparse_from_dense(&row));
        }
    }
    dim - ech.rank()
}

impl FieldDesc {
    pub fn from_parts(
        kind: FieldKind,
        name: impl Into<String>,
        basis_labels: Vec<String>,
        algebra: Algebra,
        galois: FiniteGroup,
        autos: Vec<Matrix>,
    ) -> Result<Self, EtaleError> {
        let name = name.into();
        let d = algebra.dim();
        if autos.len() != galois.order() || basis_labels.len() != d {
            return Err(EtaleError::BadAction("one automorphism per group element".into()));
        }
        for (g, m) in autos.iter().enumerate() {
            if m.len() != d || !algebra.is_automorphism(m) {
                return Err(EtaleError::BadAction(format!("element {g} is not an automorphism")));
            }
        }
        for a in 0..galois.order() {
            for b in 0..galois.order() {
                if autos[galois.mul(a, b)] != linalg::mat_mul(&autos[a], &autos[b]) {
                    return Err(EtaleError::BadAction("action is not a homomorphism".into()));
                }
            }
        }
        let all: Vec<&Matrix> = autos.iter().collect();
        if galois.order() != d || fixed_space_dim(d, &all) != 1 {
            return Err(EtaleError::NotUGalois(format!("{name} is not Galois for the given group")));
        }
        let certificate = certify_field(&algebra).ok_or_else(|| EtaleError::NotAField(name.clone()))?;
        Ok(FieldDesc { kind, name, basis_labels, algebra, galois, autos, certificate })
    }

    pub fn degree(&self) -> usize {
        self.algebra.dim()
    }

    pub fn rationals() -> Self {
        FieldDesc::from_parts(
            FieldKind::Rationals,
            "Q",
            vec!["1".into()],
            Algebra::split(1),
            groups::cyclic(1),
            vec![linalg::identity(1)],
        )
        .unwrap()
    }

    /// ℚ(ζₙ) in the power basis, Galois group ℤₙ* (index order = increasing
    /// residues).
    pub fn cyclotomic(n: u64) -> Result<Self, EtaleError> {
        if n == 0 {
            return Err(EtaleError::InvalidField("conductor 0".into()));
        }
        if n <= 2 {
            let mut q = FieldDesc::rationals();
            q.kind = FieldKind::Cyclotomic { n };
            return Ok(q);
        }
        let field = CycField::new(n);
        let d = euler_phi(n) as usize;
        let powers: Vec<CycElem> = (0..d).map(|j| CycElem::zeta_pow(&field, j as i64)).collect();
        let mult = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| linalg::sparse_from_dense((&powers[i] * &powers[j]).coords()))
                    .collect()
            })
            .collect();
        let mut unit = vec![Rat::zero(); d];
        unit[0] = Rat::one();
        let algebra = Algebra::new(d, mult, unit)?;
        let galois = groups::units_group(n)?;
        let autos = units_mod(n)
            .iter()
            .map(|&k| {
                let cols: Vec<Vec<Rat>> = powers
                    .iter()
                    .map(|p| p.galois_conjugate(k as i64).unwrap().coords().to_vec())
                    .collect();
                linalg::transpose(&cols)
            })
            .collect();
        let labels = (0..d).map(|j| format!("z{n}^{j}")).collect();
        FieldDesc::from_parts(FieldKind::Cyclotomic { n }, format!("Q(z{n})"), labels, algebra, galois, autos)
    }

    /// ℚ(β), β² = d, basis 1, β; the nontrivial automorphism negates β.
    pub fn quadratic(d: i64) -> Result<Self, EtaleError> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(EtaleError::InvalidField(format!("d = {d} must be squarefree and not 0 or 1")));
        }
        let algebra = Algebra::power_basis(&Poly::from_ints(&[-d, 0, 1]));
        let autos = vec![
            linalg::identity(2),
            vec![vec![rat::int(1), rat::int(0)], vec![rat::int(0), rat::int(-1)]],
        ];
        FieldDesc::from_parts(
            FieldKind::Quadratic { d },
            format!("Q(sqrt({d}))"),
            vec!["1".into(), format!("sqrt({d})")],
            algebra,
            groups::cyclic(2),
            autos,
        )
    }

    /// ℚ(√a, √b) with basis 1, √a, √b, √(ab) and group C₂×C₂ labelled
    /// 1, σ, τ, τσ where σ fixes √a and negates √b, τ negates √a and fixes √b.
    pub fn biquadratic(a: i64, b: i64) -> Result<Self, EtaleError> {
        if [a, b, a * b].iter().any(|&x| !is_squarefree_class_nontrivial(x)) {
            return Err(EtaleError::InvalidField(format!("({a}, {b}) is not a biquadratic pair")));
        }
        let ab = a * b;
        let e = |k: usize, c: i64| vec![(k, rat::int(c))];
        let mut mult = vec![vec![Vec::new(); 4]; 4];
        for i in 0..4 {
            mult[0][i] = e(i, 1);
            mult[i][0] = e(i, 1);
        }
        mult[1][1] = e(0, a);
        mult[2][2] = e(0, b);
        mult[3][3] = e(0, ab);
        mult[1][2] = e(3, 1);
        mult[2][1] = e(3, 1);
        mult[1][3] = e(2, a);
        mult[3][1] = e(2, a);
        mult[2][3] = e(1, b);
        mult[3][2] = e(1, b);
        let algebra = Algebra::new(4, mult, vec![rat::int(1), rat::int(0), rat::int(0), rat::int(0)])?;
        let diag = |s: [i64; 4]| -> Matrix {
            (0..4)
                .map(|r| (0..4).map(|c| rat::int(if r == c { s[r] } else { 0 })).collect())
                .collect()
        };
        let autos = vec![
            diag([1, 1, 1, 1]),
            diag([1, 1, -1, -1]),
            diag([1, -1, 1, -1]),
            diag([1, -1, -1, 1]),
        ];
        FieldDesc::from_parts(
            FieldKind::Biquadratic { a, b },
            format!("Q(sqrt({a}),sqrt({b}))"),
            vec!["1".into(), format!("sqrt({a})"), format!("sqrt({b})"), format!("sqrt({ab})")],
            algebra,
            groups::klein(),
            autos,
        )
    }

    /// ℚ(ζ₃, θ), θ³ = 2, basis ζⁱθʲ at index i + 2j. The Galois group is the
    /// `S3` preset acting on the roots θ, ζθ, ζ²θ (root k ↦ p(k)).
    pub fn radical_s3() -> Result<Self, EtaleError> {
        // ζ^m in the basis 1, ζ
        let zeta_pow = |m: usize| -> [i64; 2] {
            match m % 3 {
                0 => [1, 0],
                1 => [0, 1],
                _ => [-1, -1],
            }
        };
        let mut mult = vec![vec![Vec::new(); 6]; 6];
        for x in 0..6 {
            for y in 0..6 {
                let (i, j, k, l) = (x % 2, x / 2, y % 2, y / 2);
                let z = zeta_pow(i + k);
                let (t, c) = if j + l >= 3 { (j + l - 3, 2) } else { (j + l, 1) };
                let mut v = Vec::new();
                for (a, za) in z.iter().enumerate() {
                    if *za != 0 {
                        v.push((a + 2 * t, rat::int(za * c)));
                    }
                }
                mult[x][y] = v;
            }
        }
        let mut unit = vec![Rat::zero(); 6];
        unit[0] = Rat::one();
        let algebra = Algebra::new(6, mult, unit)?;
        let s3 = groups::symmetric(3)?;
        let labels = s3.labels().unwrap().to_vec();
        let perms: Vec<groups::Permutation> = (0..6)
            .map(|g| {
                let mut img = vec![0usize; 3];
                for k in 0..3 {
                    // the preset orders S3 lexicographically; recover images
                    img[k] = perm_image(&s3, g, k);
                }
                groups::Permutation::new(img).unwrap()
            })
            .collect();
        let _ = labels;
        let autos = perms
            .iter()
            .map(|p| {
                let a = p.apply(0);
                let c = (p.apply(1) + 3 - a) % 3;
                // ζ^i θ^j ↦ ζ^{ci + aj} θ^j
                let cols: Vec<Vec<Rat>> = (0..6)
                    .map(|x| {
                        let (i, j) = (x % 2, x / 2);
                        let z = zeta_pow(c * i + a * j);
                        let mut col = vec![Rat::zero(); 6];
                        col[2 * j] = rat::int(z[0]);
                        col[2 * j + 1] = rat::int(z[1]);
                        col
                    })
                    .collect();
                linalg::transpose(&cols)
            })
            .collect();
        let names = ["1", "z3", "t", "z3*t", "t^2", "z3*t^2"];
        FieldDesc::from_parts(
            FieldKind::RadicalS3,
            "Q(z3,cbrt(2))",
            names.iter().map(|s| s.to_string()).collect(),
            algebra,
            s3,
            autos,
        )
    }
}

/// Image of point k under the S_n preset element g (elements are the
/// permutations in lexicographic order).
fn perm_image(sn: &FiniteGroup, g: usize, k: usize) -> usize {
    let n = (1..=5).find(|m| (1..=*m).product::<usize>() == sn.order()).unwrap();
    let mut perms = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                rec(n, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, &mut cur, &mut perms);
    perms[g][k]
}

fn is_squarefree(d: i64) -> bool {
    let d = d.unsigned_abs();
    (2..).take_while(|p| p * p <= d).all(|p| !d.is_multiple_of(p * p))
}

fn is_squarefree_class_nontrivial(x: i64) -> bool {
    let sq = rat::square_class(&rat::int(x));
    sq != num_bigint::BigInt::one() && x != 0
}

/// Data of an induced product L = Mⁿ.
#[derive(Clone, Debug, Serialize)]
pub struct Components {
    pub field: FieldDesc,
    pub count: usize,
    /// U as indices into F
    pub subgroup: Vec<usize>,
    /// for u ∈ F: the Galois element of M it acts by (only meaningful on U)
    #[serde(skip)]
    pub u_action: Vec<Option<usize>>,
    /// g₁, …, gₙ (indices into F); g₁ is the identity
    pub transversal: Vec<usize>,
    /// ρ(g)(i)
    pub rho: Vec<Vec<usize>>,
    /// g_{ρ(g)(i)}⁻¹ g gᵢ ∈ U
    pub twist: Vec<Vec<usize>>,
}

/// A commutative ℚ-algebra with an action of a finite group by algebra
/// automorphisms.
#[derive(Clone, Debug)]
pub struct EtaleAlgebra {
    pub name: String,
    pub algebra: Algebra,
    pub group: FiniteGroup,
    /// action[g][j]: image of basis element j under g
    pub action: Vec<Vec<SparseVec>>,
    pub components: Option<Components>,
}

#[derive(Serialize)]
struct EtaleRepr<'a> {
    name: &'a str,
    dim: usize,
    components: usize,
    field: Option<&'a FieldDesc>,
    group: &'a FiniteGroup,
    transversal: Option<&'a [usize]>,
    action: Vec<Vec<Vec<(usize, String)>>>,
}

impl Serialize for EtaleAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EtaleRepr {
            name: &self.name,
            dim: self.dim(),
            components: self.components.as_ref().map_or(1, |c| c.count),
            field: self.components.as_ref().map(|c| &c.field),
            group: &self.group,
            transversal: self.components.as_ref().map(|c| &c.transversal[..]),
            action: self
                .action
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|col| col.iter().map(|(k, v)| (*k, rat::to_text(v))).collect())
                        .collect()
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl EtaleAlgebra {
    /// A commutative algebra with a group action; checks the action axioms.
    pub fn from_action(
        name: impl Into<String>,
        algebra: Algebra,
        group: FiniteGroup,
        action: Vec<Vec<SparseVec>>,
    ) -> Result<Self, EtaleError> {
        let l = EtaleAlgebra { name: name.into(), algebra, group, action, components: None };
        l.check_action()?;
        Ok(l)
    }

    /// A Galois field extension with its own Galois group.
    pub fn from_field(m: &FieldDesc) -> Result<Self, EtaleError> {
        let all: Vec<usize> = (0..m.galois.order()).collect();
        build_f_galois(&m.galois, &all, m, &all)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn act(&self, g: usize, x: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (k, v) in &self.action[g][j] {
                out[*k] += xj * v;
            }
        }
        out
    }

    pub fn act_basis(&self, g: usize, j: usize) -> &SparseVec {
        &self.action[g][j]
    }

    pub fn action_matrix(&self, g: usize) -> Matrix {
        let cols: Vec<Vec<Rat>> = (0..self.dim())
            .map(|j| linalg::dense_from_sparse(&self.action[g][j], self.dim()))
            .collect();
        linalg::transpose(&cols)
    }

    /// Action is a homomorphism into ℚ-algebra automorphisms.
    pub fn check_action(&self) -> Result<(), EtaleError> {
        let d = self.dim();
        if self.action.len() != self.group.order() || self.action.iter().any(|a| a.len() != d) {
            return Err(EtaleError::BadAction("one image table per group element".into()));
        }
        if !self.algebra.is_commutative() {
            return Err(EtaleError::BadAction("algebra is not commutative".into()));
        }
        let mats: Vec<Matrix> = (0..self.group.order()).map(|g| self.action_matrix(g)).collect();
        for (g, m) in mats.iter().enumerate() {
            if !self.algebra.is_automorphism(m) {
                return Err(EtaleError::BadAction(format!("element {g} is not an automorphism")));
            }
        }
        for a in 0..self.group.order() {
            for b in 0..self.group.order() {
                if mats[self.group.mul(a, b)] != linalg::mat_mul(&mats[a], &mats[b]) {
                    return Err(EtaleError::BadAction("(gh)·x ≠ g·(h·x)".into()));
                }
            }
        }
        Ok(())
    }

    /// Component idempotents f₁, …, fₙ (when built from components).
    pub fn idempotents(&self) -> Vec<Vec<Rat>> {
        let Some(c) = &self.components else {
            return vec![self.algebra.unit().to_vec()];
        };
        let deg = c.field.degree();
        (0..c.count)
            .map(|i| {
                let mut v = vec![Rat::zero(); self.dim()];
                for (b, u) in c.field.algebra.unit().iter().enumerate() {
                    v[i * deg + b] = u.clone();
                }
                v
            })
            .collect()
    }

    /// Element m·fᵢ for m given in the field's basis.
    pub fn embed_in_component(&self, i: usize, m: &[Rat]) -> Vec<Rat> {
        let c = self.components.as_ref().expect("component data");
        let deg = c.field.degree();
        let mut v = vec![Rat::zero(); self.dim()];
        v[i * deg..(i + 1) * deg].clone_from_slice(m);
        v
    }
}

/// Induced construction: L = Mⁿ for U ≤ F with M U-Galois, n = [F:U],
/// g(m fᵢ) = (g_{ρ(g)(i)}⁻¹ g gᵢ)(m) f_{ρ(g)(i)}.
///
/// `u_to_gal[k]` is the Galois element of M by which `subgroup[k]` acts.
pub fn build_f_galois(
    f: &FiniteGroup,
    subgroup: &[usize],
    m: &FieldDesc,
    u_to_gal: &[usize],
) -> Result<EtaleAlgebra, EtaleError> {
    if !f.is_subgroup(subgroup) || subgroup.len() != u_to_gal.len() {
        return Err(EtaleError::NotSubgroup);
    }
    let mut u_action = vec![None; f.order()];
    for (u, g) in subgroup.iter().zip(u_to_gal) {
        if *g >= m.galois.order() {
            return Err(EtaleError::BadAction("Galois index out of range".into()));
        }
        u_action[*u] = Some(*g);
    }
    for &a in subgroup {
        for &b in subgroup {
            let ab = f.mul(a, b);
            if u_action[ab] != Some(m.galois.mul(u_action[a].unwrap(), u_action[b].unwrap())) {
                return Err(EtaleError::BadAction("U → Gal(M) is not a homomorphism".into()));
            }
        }
    }
    let u_mats: Vec<&Matrix> = subgroup.iter().map(|u| &m.autos[u_action[*u].unwrap()]).collect();
    if subgroup.len() != m.degree() || fixed_space_dim(m.degree(), &u_mats) != 1 {
        return Err(EtaleError::NotUGalois(format!(
            "{} under a subgroup of order {}",
            m.name,
            subgroup.len()
        )));
    }

    let cosets = f.left_cosets(subgroup);
    let n = cosets.len();
    let transversal: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    let mut which = vec![0; f.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &x in c {
            which[x] = i;
        }
    }
    let mut rho = vec![vec![0; n]; f.order()];
    let mut twist = vec![vec![0; n]; f.order()];
    for g in 0..f.order() {
        for i in 0..n {
            let ggi = f.mul(g, transversal[i]);
            let j = which[ggi];
            rho[g][i] = j;
            twist[g][i] = f.mul(f.inv(transversal[j]), ggi);
            debug_assert!(u_action[twist[g][i]].is_some());
        }
    }

    let deg = m.degree();
    let copies: Vec<&Algebra> = (0..n).map(|_| &m.algebra).collect();
    let algebra = Algebra::product(&copies);
    let action = (0..f.order())
        .map(|g| {
            let mut cols = Vec::with_capacity(n * deg);
            for i in 0..n {
                let j = rho[g][i];
                let auto = &m.autos[u_action[twist[g][i]].unwrap()];
                for b in 0..deg {
                    let col: SparseVec = (0..deg)
                        .filter(|&a| !auto[a][b].is_zero())
                        .map(|a| (j * deg + a, auto[a][b].clone()))
                        .collect();
                    cols.push(col);
                }
            }
            cols
        })
        .collect();
    let name = if n == 1 { m.name.clone() } else { format!("{}^{}", m.name, n) };
    let l = EtaleAlgebra {
        name,
        algebra,
        group: f.clone(),
        action,
        components: Some(Components {
            field: m.clone(),
            count: n,
            subgroup: subgroup.to_vec(),
            u_action,
            transversal,
            rho,
            twist,
        }),
    };
    l.check_action()?;
    let report = verify_galois(&l);
    if !report.bijective {
        return Err(EtaleError::NotGalois { rank: report.rank, expected: report.expected });
    }
    Ok(l)
}

/// Map(F, ℚ) with g·e_h = e_{gh}.
pub fn trivial_extension(f: &FiniteGroup) -> EtaleAlgebra {
    let mut l = build_f_galois(f, &[0], &FieldDesc::rationals(), &[0]).expect("Map(F, Q) is F-Galois");
    l.name = format!("Map({},Q)", f.preset().unwrap_or("F"));
    l
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisReport {
    pub bijective: bool,
    pub rank: usize,
    pub expected: usize,
    pub route: &'static str,
    pub diagnostic: String,
}

/// Rank of x⊗y ↦ (x·g(y))_g over ℚ on basis pairs.
pub fn galois_rank_direct(l: &EtaleAlgebra) -> (usize, usize) {
    let d = l.dim();
    let f = l.group.order();
    let mut ech = Echelon::new(f * d);
    for i in 0..d {
        let bi = vec![(i, Rat::one())];
        for j in 0..d {
            let mut v: SparseVec = Vec::new();
            for g in 0..f {
                let p = l.algebra.mul_sparse(&bi, l.act_basis(g, j));
                v.extend(p.into_iter().map(|(k, x)| (g * d + k, x)));
            }
            ech.insert(v);
        }
    }
    (ech.rank(), d * d)
}

/// Per component i: the |F|×dim matrix (πᵢ g(bⱼ)) over M, as a ℚ-matrix.
/// Returns the summed rank and the rank needed for bijectivity.
pub fn galois_rank_componentwise(l: &EtaleAlgebra) -> Option<(usize, usize)> {
    let c = l.components.as_ref()?;
    let deg = c.field.degree();
    let d = l.dim();
    let f = l.group.order();
    let mut total = 0;
    for comp in 0..c.count {
        let mut ech = Echelon::new(d * deg);
        for g in 0..f {
            // rows (g, a): entry at column (j, b) = a-th coordinate of πᵢ(g bⱼ)·m_b
            let mut rows = vec![Vec::new(); deg];
            for j in 0..d {
                let img = l.act_basis(g, j);
                let e: Vec<Rat> = (0..deg)
                    .map(|a| {
                        img.iter()
                            .find(|(k, _)| *k == comp * deg + a)
                            .map_or_else(Rat::zero, |(_, v)| v.clone())
                    })
                    .collect();
                if linalg::is_zero_vec(&e) {
                    continue;
                }
                for b in 0..deg {
                    let prod = c.field.algebra.mul(&e, &c.field.algebra.basis_vector(b));
                    for (a, v) in prod.into_iter().enumerate() {
                        if !v.is_zero() {
                            rows[a].push((j * deg + b, v));
                        }
                    }
                }
            }
            for r in rows {
                ech.insert(r);
            }
        }
        total += ech.rank();
    }
    Some((total, c.count * d * deg))
}

/// The Galois-map criterion: bijective iff dim L = |F| and full rank.
pub fn verify_galois(l: &EtaleAlgebra) -> GaloisReport {
    let d = l.dim();
    let f = l.group.order();
    let use_components = l.components.is_some() && d > DIRECT_ROUTE_MAX_DIM;
    let (rank, expected, route) = if use_components {
        let (r, e) = galois_rank_componentwise(l).unwrap();
        (r, e, "componentwise")
    } else {
        let (r, e) = galois_rank_direct(l);
        (r, e, "direct")
    };
    let bijective = d == f && rank == expected;
    let diagnostic = if d != f {
        format!("dimension {d} differs from |F| = {f}")
    } else if rank != expected {
        format!("rank deficiency {}", expected - rank)
    } else {
        String::new()
    };
    GaloisReport { bijective, rank, expected, route, diagnostic }
}

/// S-fixed elements of L with the induced multiplication.
#[derive(Clone, Debug)]
pub struct FixedSubalgebra {
    pub algebra: Algebra,
    /// basis in L-coordinates
    pub basis: Vec<Vec<Rat>>,
    pub frame: Frame,
}

pub fn fixed_subalgebra(l: &EtaleAlgebra, s: &[usize]) -> Result<FixedSubalgebra, EtaleError> {
    if !l.group.is_subgroup(s) {
        return Err(EtaleError::NotSubgroup);
    }
    let d = l.dim();
    let mut ech = Echelon::new(d);
    for &g in s {
        let m = l.action_matrix(g);
        for r in 0..d {
            let mut row = m[r].clone();
            row[r] -= Rat::one();
            ech.insert(linalg::sparse_from_dense(&row));
        }
    }
    let basis = ech.nullspace().1;
    let (algebra, frame) = l.algebra.subalgebra(&basis, l.algebra.unit())?;
    Ok(FixedSubalgebra { algebra, basis, frame })
}

/// L^K for a normal K ≤ F, as an F/K-algebra (cosets ordered by smallest
/// representative).
pub fn fixed_quotient(l: &EtaleAlgebra, k: &[usize]) -> Result<(EtaleAlgebra, FixedSubalgebra, Vec<Vec<usize>>), EtaleError> {
    let fs = fixed_subalgebra(l, k)?;
    let (q, cosets) = l.group.quotient(k)?;
    let action = cosets
        .iter()
        .map(|c| {
            fs.basis
                .iter()
                .map(|b| {
                    let img = l.act(c[0], b);
                    linalg::sparse_from_dense(&fs.frame.coords_dense(&img).expect("fixed ring is stable"))
                })
                .collect()
        })
        .collect();
    let e = EtaleAlgebra::from_action(format!("({})^K", l.name), fs.algebra.clone(), q, action)?;
    Ok((e, fs, cosets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_group, units_group};

    #[test]
    fn catalog_fields_certify() {
        for f in [
            FieldDesc::cyclotomic(3).unwrap(),
            FieldDesc::cyclotomic(8).unwrap(),
            FieldDesc::cyclotomic(9).unwrap(),
            FieldDesc::quadratic(2).unwrap(),
            FieldDesc::quadratic(-3).unwrap(),
            FieldDesc::biquadratic(2, 3).unwrap(),
            FieldDesc::radical_s3().unwrap(),
        ] {
            assert_eq!(f.certificate.deg(), f.degree(), "{}", f.name);
            assert_eq!(f.galois.order(), f.degree());
        }
        assert!(FieldDesc::quadratic(4).is_err());
        assert!(FieldDesc::biquadratic(2, 8).is_err());
    }

    #[test]
    fn biquadratic_is_the_splitting_field_of_the_quartic() {
        let e = FieldDesc::biquadratic(2, 3).unwrap();
        // √2 + √3 has minimal polynomial x⁴ − 10x² + 1
        let x = vec![rat::int(0), rat::int(1), rat::int(1), rat::int(0)];
        assert_eq!(e.algebra.min_poly(&x), Poly::from_ints(&[1, 0, -10, 0, 1]));
    }

    #[test]
    fn trivial_extension_of_c2() {
        let c2 = make_group("C2").unwrap();
        let l = trivial_extension(&c2);
        assert_eq!(l.dim(), 2);
        // g·e₁ = e_g
        assert_eq!(l.act_basis(1, 0), &vec![(1, Rat::one())]);
        assert!(verify_galois(&l).bijective);
        let t = trivial_extension(&make_group("trivial").unwrap());
        assert_eq!(t.dim(), 1);
        assert!(verify_galois(&t).bijective);
    }

    #[test]
    fn degenerate_action_is_not_galois() {
        let c2 = make_group("C2").unwrap();
        let id = vec![vec![(0, Rat::one())], vec![(1, Rat::one())]];
        let l = EtaleAlgebra::from_action("QxQ", Algebra::split(2), c2, vec![id.clone(), id]).unwrap();
        assert!(!verify_galois(&l).bijective);
    }

    #[test]
    fn z8_units_on_two_copies_of_q_beta() {
        let f = units_group(8).unwrap();
        // U = ⟨3⟩ = {1, 3}; 3 acts by β ↦ −β
        let m = FieldDesc::quadratic(2).unwrap();
        let l = build_f_galois(&f, &[0, 1], &m, &[0, 1]).unwrap();
        let c = l.components.as_ref().unwrap();
        assert_eq!(f.label(c.transversal[1]), "5");
        // x = (a0 + a1β)f1 + (b0 + b1β)f2 with (a0,a1,b0,b1) = (1,2,3,4)
        let x: Vec<Rat> = [1, 2, 3, 4].iter().map(|&v| rat::int(v)).collect();
        let expect = |v: [i64; 4]| v.iter().map(|&t| rat::int(t)).collect::<Vec<_>>();
        assert_eq!(l.act(1, &x), expect([1, -2, 3, -4])); // 3
        assert_eq!(l.act(2, &x), expect([3, 4, 1, 2])); // 5
        assert_eq!(l.act(3, &x), expect([3, -4, 1, -2])); // 7
        assert!(verify_galois(&l).bijective);
        assert_eq!(galois_rank_direct(&l), (16, 16));
    }

    #[test]
    fn routes_agree() {
        let s4 = make_group("S4").unwrap();
        let l = trivial_extension(&s4);
        let (r1, e1) = galois_rank_direct(&l);
        let (r2, e2) = galois_rank_componentwise(&l).unwrap();
        assert_eq!((r1 == e1), (r2 == e2));
        assert!(r1 == e1);
        let f = units_group(8).unwrap();
        let m = FieldDesc::quadratic(3).unwrap();
        let l = build_f_galois(&f, &[0, 1], &m, &[0, 1]).unwrap();
        let (r, e) = galois_rank_componentwise(&l).unwrap();
        assert_eq!(r, e);
    }

    #[test]
    fn wrong_subgroup_action_rejected() {
        let f = units_group(8).unwrap();
        let m = FieldDesc::quadratic(2).unwrap();
        // U acting trivially on ℚ(β) has fixed field ℚ(β), not ℚ
        assert!(matches!(build_f_galois(&f, &[0, 1], &m, &[0, 0]), Err(EtaleError::NotUGalois(_))));
        assert!(matches!(build_f_galois(&f, &[0, 3, 1], &m, &[0, 1, 1]), Err(EtaleError::NotSubgroup)));
    }

    #[test]
    fn fixed_fields_of_the_catalog() {
        let e = EtaleAlgebra::from_field(&FieldDesc::biquadratic(2, 3).unwrap()).unwrap();
        // W = ⟨σ⟩ fixes √2
        let fs = fixed_subalgebra(&e, &[0, 1]).unwrap();
        assert_eq!(fs.basis.len(), 2);
        assert!(fs.frame.coords_dense(&[rat::int(0), rat::int(1), rat::int(0), rat::int(0)]).is_some());
        let r = EtaleAlgebra::from_field(&FieldDesc::radical_s3().unwrap()).unwrap();
        let a3: Vec<usize> = (0..6).filter(|&g| r.group.element_order(g) != 2).collect();
        let fs = fixed_subalgebra(&r, &a3).unwrap();
        assert_eq!(fs.basis.len(), 2);
        let zeta = r.algebra.basis_vector(1);
        assert!(fs.frame.coords_dense(&zeta).is_some());
        let whole = fixed_subalgebra(&r, &[0]).unwrap();
        assert_eq!(whole.basis.len(), 6);
    }
}
