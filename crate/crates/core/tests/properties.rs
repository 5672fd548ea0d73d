use hopforms::algebra::Algebra;
use hopforms::etale::{self, build_f_galois, fixed_subalgebra, verify_galois, EtaleAlgebra, FieldDesc};
use hopforms::exact::cyclotomic::{divisors, euler_phi};
use hopforms::exact::linalg;
use hopforms::exact::rat::{self, Rat};
use hopforms::exact::{cyclotomic_polynomial, factor_cyclotomic_over, factor_over_q, CycElem, CycField, Poly};
use hopforms::groups::{self, automorphism_group, compute_w, lambda_perms, make_group, SearchOptions};
use hopforms::hopf::{dual_cyclic, group_algebra, grouplikes};
use hopforms::theta;
use hopforms::wedderburn::{self, complex_profile, hilbert_symbol, relevant_places, Place};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat::rat(n, d))
}

fn cyc_elem(n: u64) -> impl Strategy<Value = CycElem> {
    let deg = euler_phi(n) as usize;
    proptest::collection::vec(small_rat(), deg)
        .prop_map(move |c| CycElem::from_coords(&CycField::new(n), c).unwrap())
}

fn conductor_and_triple() -> impl Strategy<Value = (u64, CycElem, CycElem, CycElem)> {
    prop_oneof![Just(3u64), Just(4), Just(5), Just(8), Just(9), Just(12)]
        .prop_flat_map(|n| (Just(n), cyc_elem(n), cyc_elem(n), cyc_elem(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_field_axioms((_n, a, b, c) in conductor_and_triple()) {
        let ab_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let a_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let lhs = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let rhs = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        if !a.is_zero() {
            let one = CycElem::one(a.field());
            prop_assert_eq!(a.try_mul(&a.inv().unwrap()).unwrap(), one);
        }
    }

    #[test]
    fn galois_conjugates_compose((n, a, _b, _c) in conductor_and_triple(), i in 0usize..8, j in 0usize..8) {
        let units = hopforms::exact::cyclotomic::units_mod(n);
        let k = units[i % units.len()] as i64;
        let k2 = units[j % units.len()] as i64;
        let twice = a.galois_conjugate(k2).unwrap().galois_conjugate(k).unwrap();
        prop_assert_eq!(twice, a.galois_conjugate(k * k2 % n as i64).unwrap());
    }

    #[test]
    fn factorization_reproduces_input(roots in proptest::collection::vec(-4i64..=4, 1..4), extra in 0usize..3, lead in 1i64..4) {
        let mut f = Poly::from_ints(&[lead]);
        for r in &roots {
            f = &f * &Poly::from_ints(&[-r, 1]);
        }
        let irr = [Poly::from_ints(&[1, 0, 1]), Poly::from_ints(&[-2, 0, 1]), Poly::from_ints(&[1, 1, 1])];
        for q in irr.iter().take(extra) {
            f = &f * q;
        }
        let fac = factor_over_q(&f).unwrap();
        prop_assert_eq!(fac.expand(), f);
        prop_assert!(fac.factors.iter().all(|(p, _)| p.is_monic()));
    }

    #[test]
    fn hilbert_reciprocity(a in (-30i64..=30).prop_filter("nonzero", |x| *x != 0), b in (-30i64..=30).prop_filter("nonzero", |x| *x != 0)) {
        let (a, b) = (rat::int(a), rat::int(b));
        let prod: i64 = relevant_places(&a, &b)
            .into_iter()
            .map(|v| hilbert_symbol(&a, &b, v).unwrap() as i64)
            .product();
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_bilinear(a in 1i64..=30, s in any::<bool>(), b1 in 1i64..=30, b2 in 1i64..=30, t in any::<bool>(), p in prop_oneof![Just(0u64), Just(2), Just(3), Just(5), Just(7)]) {
        let a = rat::int(if s { -a } else { a });
        let b1 = rat::int(if t { -b1 } else { b1 });
        let b2 = rat::int(b2);
        let place = if p == 0 { Place::Infinity } else { Place::Prime(p) };
        let lhs = hilbert_symbol(&a, &(&b1 * &b2), place).unwrap();
        let rhs = hilbert_symbol(&a, &b1, place).unwrap() * hilbert_symbol(&a, &b2, place).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(hilbert_symbol(&a, &b1, place).unwrap(), hilbert_symbol(&b1, &a, place).unwrap());
    }
}

#[test]
fn cyclotomic_polynomials_multiply_to_xn_minus_1() {
    for n in 1..=60u64 {
        assert_eq!(cyclotomic_polynomial(n).deg() as u64, euler_phi(n), "n = {n}");
        let mut prod = Poly::one();
        for d in divisors(n) {
            prod = &prod * &cyclotomic_polynomial(d);
        }
        let mut c = vec![0i64; n as usize + 1];
        c[0] = -1;
        c[n as usize] = 1;
        assert_eq!(prod, Poly::from_ints(&c), "n = {n}");
    }
}

#[test]
fn cyclotomic_factors_over_subfields() {
    for (n, m) in [(12u64, 3u64), (12, 4), (8, 4), (9, 3), (15, 5), (15, 3)] {
        let fs = factor_cyclotomic_over(n, m).unwrap();
        let d = fs[0].degree();
        assert!(fs.iter().all(|f| f.degree() == d));
        assert_eq!(fs.len() * d, euler_phi(n) as usize);
        let field = CycField::new(m);
        let phi = hopforms::exact::CycPoly::from_rational(&field, &cyclotomic_polynomial(n));
        for f in &fs {
            assert!(phi.div_rem(f).unwrap().1.is_zero());
        }
    }
}

fn catalog_groups() -> Vec<&'static str> {
    vec!["C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "D4", "Q8", "C8", "C2xC4", "C2xC2xC2"]
}

#[test]
fn regular_subgroups_are_regular_and_normalized() {
    for name in ["C2xC2", "C4", "S3", "C6", "D4", "Q8"] {
        let g = make_group(name).unwrap();
        let lam = lambda_perms(&g);
        let found = groups::enumerate_regular_subgroups(&g, None, SearchOptions::default()).unwrap();
        assert!(!found.is_empty());
        for n in &found {
            assert!(n.is_regular() && n.order() == g.order(), "{name}");
            assert!(lam.iter().all(|l| n.is_normalized_by(l)), "{name}");
            // W = λ(G) ∩ N^opp, brute force
            let w = compute_w(n, &g).unwrap();
            let brute: Vec<_> = lam
                .iter()
                .filter(|l| n.elements().iter().all(|e| e.compose(l) == l.compose(e)))
                .cloned()
                .collect();
            assert_eq!(w.order(), brute.len());
            assert!(brute.iter().all(|b| w.contains(b)));
            assert!(lam.iter().all(|l| w.is_normalized_by(l)));
        }
    }
}

#[test]
fn automorphism_groups_are_closed_and_sized() {
    for name in catalog_groups() {
        let n = make_group(name).unwrap();
        let aut = automorphism_group(&n).unwrap();
        for a in &aut.maps {
            for b in &aut.maps {
                let c: Vec<usize> = (0..n.order()).map(|x| a[b[x]]).collect();
                assert!(aut.index_of(&c).is_some(), "{name}");
            }
            let mut inv = vec![0; n.order()];
            for (x, &y) in a.iter().enumerate() {
                inv[y] = x;
            }
            assert!(aut.index_of(&inv).is_some(), "{name}");
        }
    }
    assert_eq!(automorphism_group(&make_group("C2xC2").unwrap()).unwrap().order(), (4 - 1) * (4 - 2));
    assert_eq!(automorphism_group(&make_group("C3xC3").unwrap()).unwrap().order(), (9 - 1) * (9 - 3));
}

#[test]
fn complex_profiles_are_consistent() {
    for name in catalog_groups() {
        let n = make_group(name).unwrap();
        let prof = complex_profile(&n).unwrap();
        assert_eq!(prof.iter().map(|k| k * k).sum::<usize>(), n.order(), "{name}");
        assert_eq!(prof.iter().filter(|&&k| k == 1).count(), n.abelianization_order(), "{name}");
        assert_eq!(prof.len(), n.conjugacy_classes().len(), "{name}");
    }
}

#[test]
fn group_algebras_and_duals_are_hopf() {
    for name in catalog_groups() {
        let n = make_group(name).unwrap();
        let h = group_algebra(&n);
        assert!(h.check_axioms().all(), "{name}");
        let gl = grouplikes(&h).unwrap();
        assert_eq!(gl.len(), n.order(), "{name}");
        let mut ech = linalg::Echelon::new(h.dim());
        assert!(gl.iter().all(|x| ech.insert(linalg::sparse_from_dense(x))));
        assert!(gl.iter().all(|x| gl.iter().all(|y| gl.contains(&h.algebra.mul(x, y)))));
    }
    for n in 1..=12 {
        let d = dual_cyclic(n).unwrap();
        assert!(d.check_axioms().all(), "n = {n}");
        let v = wedderburn::is_absolutely_semisimple(&d.algebra, &groups::cyclic(n)).unwrap();
        assert!(v.absolutely_semisimple, "n = {n}");
    }
}

fn catalog_extensions() -> Vec<EtaleAlgebra> {
    let mut out = vec![
        EtaleAlgebra::from_field(&FieldDesc::biquadratic(2, 3).unwrap()).unwrap(),
        EtaleAlgebra::from_field(&FieldDesc::radical_s3().unwrap()).unwrap(),
        EtaleAlgebra::from_field(&FieldDesc::quadratic(-1).unwrap()).unwrap(),
        etale::trivial_extension(&make_group("S3").unwrap()),
    ];
    for n in [3, 4, 5, 7, 8, 9] {
        out.push(EtaleAlgebra::from_field(&FieldDesc::cyclotomic(n).unwrap()).unwrap());
    }
    let u8 = groups::units_group(8).unwrap();
    out.push(build_f_galois(&u8, &[0, 1], &FieldDesc::quadratic(2).unwrap(), &[0, 1]).unwrap());
    let s3 = make_group("S3").unwrap();
    let c2 = (0..6).find(|&g| g != 0 && s3.element_order(g) == 2).unwrap();
    out.push(build_f_galois(&s3, &[0, c2], &FieldDesc::quadratic(-3).unwrap(), &[0, 1]).unwrap());
    out
}

#[test]
fn etale_catalog_is_galois() {
    for l in catalog_extensions() {
        let a: &Algebra = &l.algebra;
        let f = l.idempotents();
        let mut sum = vec![Rat::zero(); a.dim()];
        for (i, fi) in f.iter().enumerate() {
            for (j, fj) in f.iter().enumerate() {
                let p = a.mul(fi, fj);
                assert_eq!(p, if i == j { fi.clone() } else { vec![Rat::zero(); a.dim()] }, "{}", l.name);
            }
            linalg::axpy(&mut sum, &Rat::one(), fi);
        }
        assert_eq!(&sum, a.unit(), "{}", l.name);
        assert!(l.check_action().is_ok(), "{}", l.name);
        assert!(verify_galois(&l).bijective, "{}", l.name);
        if let Some(c) = &l.components {
            assert_eq!(c.count * c.subgroup.len(), l.group.order(), "{}", l.name);
        }
        for s in l.group.conjugacy_classes() {
            let sub = l.group.closure(&s);
            let fs = fixed_subalgebra(&l, &sub).unwrap();
            assert_eq!(fs.algebra.dim() * sub.len(), l.dim(), "{}", l.name);
        }
    }
}

#[test]
fn theta_catalog_has_form_property() {
    for name in ["C3", "C4", "C2xC2", "S3", "D4", "Q8"] {
        let n = make_group(name).unwrap();
        let aut = automorphism_group(&n).unwrap();
        let l = etale::trivial_extension(&aut.group);
        let h = theta::theta(&l, &n, &aut.maps).unwrap();
        assert!(h.checks.all(), "{name}");
        assert_eq!(h.dim(), n.order());
        let (_, gl) = hopforms::hopf::grouplike_group(&h.hopf).unwrap();
        assert!(groups::is_isomorphic(&gl, &n), "{name}");
        let lhs = wedderburn::is_absolutely_semisimple(&h.hopf.algebra, &n).unwrap().absolutely_semisimple;
        let rhs = wedderburn::is_absolutely_semisimple(&group_algebra(&n).algebra, &n).unwrap().absolutely_semisimple;
        assert_eq!(lhs, rhs, "{name}");
    }
}

#[test]
fn descent_catalog_is_hopf_galois() {
    let cases = [theta::biquadratic_example().unwrap(), theta::s3_example().unwrap()];
    for (e, n) in cases {
        let h = theta::descend(&e, &n).unwrap();
        assert!(h.checks.all(), "{}", e.name);
        let j = theta::hopf_action_report(&h, &e).unwrap();
        assert!(j.bijective && j.identity_acts_trivially && j.counit_compatible, "{}", e.name);
    }
}

#[test]
fn decompositions_reassemble() {
    for name in catalog_groups() {
        let a = group_algebra(&make_group(name).unwrap()).algebra;
        let p = wedderburn::decompose(&a).unwrap();
        let total: usize = p.blocks.iter().map(|b| b.dim).sum();
        assert_eq!(total, a.dim(), "{name}");
        let mut sum = vec![Rat::zero(); a.dim()];
        for b in &p.blocks {
            assert_eq!(b.dim, b.k * b.k * b.center_degree, "{name}");
            linalg::axpy(&mut sum, &Rat::one(), &b.idempotent);
        }
        assert_eq!(&sum, a.unit(), "{name}");
    }
}
