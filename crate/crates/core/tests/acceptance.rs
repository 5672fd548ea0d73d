//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use hopforms::cli;
use hopforms::etale::{self, fixed_subalgebra, verify_galois, EtaleAlgebra, FieldDesc};
use hopforms::exact::linalg;
use hopforms::exact::rat::{self, Rat};
use hopforms::groups::{
    self, automorphism_group, enumerate_regular_subgroups, holomorph, is_isomorphic, lambda_perms, left_regular_rep,
    make_group, quotient_embedding, SearchOptions,
};
use hopforms::hopf::{self, dual_cyclic, group_algebra, grouplikes, kohl_idempotents, HopfPresentation};
use hopforms::theta;
use hopforms::wedderburn::{self, hilbert_symbol, relevant_places, BlockKind};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use std::time::{Duration, Instant};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn within(t: Duration, limit_s: f64, what: &str) -> Outcome {
    ensure(t.as_secs_f64() < limit_s, format!("{what} took {:.2}s, limit {limit_s}s", t.as_secs_f64()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (code, text) = cli::run(["hopforms", "theta", "--L", "trivial:C2", "--N", "C3"]);
    let elapsed = start.elapsed();
    ensure(code == 0, format!("exit status {code}"))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(e)?;
    ensure(v["result"]["grouplike_count"] == 3, format!("group-like count {}", v["result"]["grouplike_count"]))?;
    ensure(v["result"]["grouplike_group_is_n"] == true, "group-likes do not form C3")?;
    // the group-likes, recomputed and compared with the displayed elements
    let c2 = make_group("C2").map_err(e)?;
    let c3 = make_group("C3").map_err(e)?;
    let l = etale::trivial_extension(&c2);
    let phi = vec![(0..3).collect(), (0..3).map(|a| c3.inv(a)).collect::<Vec<_>>()];
    let h = theta::theta(&l, &c3, &phi).map_err(e)?;
    let found: Vec<Vec<Rat>> = theta::fixed_ring_grouplikes(&h).map_err(e)?;
    let r = &h.ring;
    let (one, z) = (Rat::one(), Rat::zero());
    let e1 = [one.clone(), z.clone()];
    let eg = [z.clone(), one.clone()];
    let add = |a: Vec<Rat>, b: Vec<Rat>| linalg::add(&a, &b);
    let expected = [r.one(), add(r.term(&e1, 1), r.term(&eg, 2)), add(r.term(&eg, 1), r.term(&e1, 2))];
    ensure(found.len() == 3 && expected.iter().all(|x| found.contains(x)), "group-likes differ from the displayed set")?;
    within(elapsed, 1.0, "theta --L trivial:C2 --N C3")
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for (p, m) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
        let k = kohl_idempotents(p, m).map_err(e)?;
        ensure(k.orthogonal && k.complete && k.fixed, format!("Kohl idempotents fail for ({p},{m})"))?;
        let n = p.pow(m) as usize;
        let h = theta::theta_cyclotomic(n).map_err(e)?;
        let prof = wedderburn::decompose(&h.hopf.algebra).map_err(e)?;
        ensure(
            prof.blocks.len() == n && prof.count_rational_fields() == n,
            format!("Θ(Q(z{n})) blocks {:?}", prof.summary()),
        )?;
    }
    within(start.elapsed(), 5.0, "Kohl suite")
}

fn criterion_3() -> Outcome {
    let opts = SearchOptions { workers: 1, ..Default::default() };
    for (g, t, want) in [("C2xC2", "C4", 3usize), ("S3", "C6", 3), ("Q8", "C8", 6)] {
        let start = Instant::now();
        let gg = make_group(g).map_err(e)?;
        let found = enumerate_regular_subgroups(&gg, Some(&make_group(t).map_err(e)?), opts).map_err(e)?;
        ensure(found.len() == want, format!("({g},{t}) count {} != {want}", found.len()))?;
        if g == "Q8" {
            within(start.elapsed(), 60.0, "Q8 search")?;
        }
    }
    let (_, n) = theta::biquadratic_example().map_err(e)?;
    let mut displayed = vec!["(1)", "(1,3,2,4)", "(1,2)(3,4)", "(1,4,2,3)"];
    displayed.sort();
    ensure(n.cycle_strings() == displayed, format!("biquadratic N {:?}", n.cycle_strings()))?;
    let v = enumerate_regular_subgroups(&groups::klein(), Some(&make_group("C4").map_err(e)?), opts).map_err(e)?;
    ensure(v.contains(&n), "displayed N is not among the enumerated structures")?;
    let mut lam = vec!["(1)", "(1,2)(3,4)", "(1,3)(2,4)", "(1,4)(2,3)"];
    lam.sort();
    let got = left_regular_rep(&groups::klein()).cycle_strings();
    ensure(got == lam, format!("λ(C2xC2) {got:?}"))
}

fn criterion_4() -> Outcome {
    // biquadratic
    let (e4, n4) = theta::biquadratic_example().map_err(e)?;
    let qe = quotient_embedding(&e4.group, &n4).map_err(e)?;
    ensure(qe.w.cycle_strings() == ["(1)", "(1,2)(3,4)"], format!("W = {:?}", qe.w.cycle_strings()))?;
    let aut_c4 = automorphism_group(&make_group("C4").map_err(e)?).map_err(e)?;
    ensure(qe.surjective && is_isomorphic(&qe.quotient, &aut_c4.group), "λ(G)/W is not Aut(C4)")?;
    let lam = lambda_perms(&e4.group);
    let w_idx: Vec<usize> = (0..4).filter(|&g| qe.w.contains(&lam[g])).collect();
    let fs = fixed_subalgebra(&e4, &w_idx).map_err(e)?;
    // E^W contains √2 (basis 1, √2, √3, √6) and has dimension 2
    let mut sqrt2 = vec![Rat::zero(); 4];
    sqrt2[1] = Rat::one();
    ensure(fs.algebra.dim() == 2 && fs.frame.coords_dense(&sqrt2).is_some(), "E^W is not Q(sqrt 2)")?;
    ensure(e4.algebra.mul(&sqrt2, &sqrt2) == linalg::scale(e4.algebra.unit(), &rat::int(2)), "basis element 1 is not √2")?;

    // S3
    let (e6, n6) = theta::s3_example().map_err(e)?;
    let qe = quotient_embedding(&e6.group, &n6).map_err(e)?;
    ensure(qe.w.order() == 3 && qe.w.as_group().is_cyclic(), "W is not C3")?;
    let lam = lambda_perms(&e6.group);
    let w_idx: Vec<usize> = (0..6).filter(|&g| qe.w.contains(&lam[g])).collect();
    let fs = fixed_subalgebra(&e6, &w_idx).map_err(e)?;
    let fields = wedderburn::decompose(&fs.algebra).map_err(e)?.summary();
    ensure(fields == ["Q(z3)"], format!("E^W = {fields:?}"))?;
    let h = theta::descend(&e6, &n6).map_err(e)?;
    let blocks = wedderburn::decompose(&h.hopf.algebra).map_err(e)?.summary();
    let dual_blocks = wedderburn::decompose(&dual_cyclic(6).map_err(e)?.algebra).map_err(e)?.summary();
    ensure(blocks == vec!["Q"; 6] && blocks == dual_blocks, format!("descent blocks {blocks:?}"))?;
    let count = grouplikes(&h.hopf).map_err(e)?.len();
    ensure(count == 1, format!("group-like count of descend(E, N_C6) is {count}, criterion states 1"))
}

fn criterion_5() -> Outcome {
    let (e4, n4) = theta::biquadratic_example().map_err(e)?;
    let h = theta::descend(&e4, &n4).map_err(e)?;
    let rep = theta::hopf_action_report(&h, &e4).map_err(e)?;
    // second route: dense 16×16 matrix of x⊗h_k ↦ (y ↦ x·(h_k·y)) and its rank
    let n = e4.dim();
    let mut rows = Vec::new();
    for hk in &h.basis {
        for a in 0..n {
            let mut row = vec![Rat::zero(); n * n];
            for y in 0..n {
                let img = theta::hopf_action(&h, &e4, hk, &e4.algebra.basis_vector(y)).map_err(e)?;
                let img = e4.algebra.mul(&e4.algebra.basis_vector(a), &img);
                for (r, v) in img.into_iter().enumerate() {
                    row[r * n + y] = v;
                }
            }
            rows.push(row);
        }
    }
    let rank = linalg::rank(&rows);
    ensure(rep.rank == 16 && rank == 16 && rep.bijective, format!("rank {} / {}", rep.rank, rank))
}

fn criterion_6() -> Outcome {
    let r = theta::q8_c8_preimage("i", "k", 2).map_err(e)?;
    ensure(r.theta.dim() == 8 && r.listed_span_matches, "listed basis does not span the fixed ring")?;
    ensure(r.listed_fixed, "a listed element is not fixed")?;
    ensure(r.psi_products_checked == 64 && r.psi_multiplicative, "ψ is not multiplicative on all 64 products")?;
    ensure(r.f_square_is_one, "(f2 - f1)^2 != 1")?;
    let same = theta::q8_c8_preimage("j", "k", 2).map_err(e)?;
    let other = theta::q8_c8_preimage("i", "j", 3).map_err(e)?;
    let rec = |x: &theta::Q8C8Report| theta::hopf_invariants(&x.theta.hopf).map_err(e);
    let (a, b, c) = (rec(&r)?, rec(&same)?, rec(&other)?);
    ensure(a == b, "same-t records differ")?;
    ensure(a.quadratic_classes != c.quadratic_classes, "different-t records agree on the square class")
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let g = wedderburn::greither_form().map_err(e)?;
    ensure(g.quaternion_basis_fixed, "quaternion basis not in H(θ)")?;
    ensure(g.zv_squared_is_one && g.zu_squared_is_one && g.zv_zu_is_w, "quaternion relations fail")?;
    ensure(g.nilpotent_nonzero && g.nilpotent_square_zero, "(ζu - w) is not a nonzero square-zero element")?;
    ensure(g.profile.summary() == ["Mat2(Q)", "Q", "Q", "Q", "Q"], format!("blocks {:?}", g.profile.summary()))?;
    ensure(g.quaternion_block == Some(BlockKind::SplitQuaternion), "quaternion block not split")?;
    ensure(g.verdict.absolutely_semisimple, "verdict false")?;
    let p = wedderburn::theta_preimage_greither().map_err(e)?;
    ensure(p.components == 12 && p.galois, format!("components {}", p.components))?;
    ensure(p.reproduces, p.detail.clone())?;
    within(start.elapsed(), 120.0, "Greither")
}

fn criterion_8() -> Outcome {
    let abss = |h: &HopfPresentation, n: &str| -> Result<bool, String> {
        Ok(wedderburn::is_absolutely_semisimple(&h.algebra, &make_group(n).map_err(e)?).map_err(e)?.absolutely_semisimple)
    };
    for (n, want) in [("D3", true), ("D4", true), ("Q8", false)] {
        let got = abss(&group_algebra(&make_group(n).map_err(e)?), n)?;
        ensure(got == want, format!("Q[{n}] verdict {got}"))?;
    }
    for n in 1..=12 {
        ensure(abss(&dual_cyclic(n).map_err(e)?, &format!("C{n}"))?, format!("(Q[C{n}])* verdict false"))?;
    }
    let (l, h) = theta::theta_gl(3, 2).map_err(e)?;
    ensure(l.components.as_ref().is_some_and(|c| c.count == 24), "L is not Q(z3)^24")?;
    let prof = wedderburn::decompose(&h.hopf.algebra).map_err(e)?;
    ensure(prof.count_rational_fields() == 9 && prof.blocks.len() == 9, format!("blocks {:?}", prof.summary()))?;
    ensure(abss(&h.hopf, "C3^2")?, "GL2(F3) form verdict false")
}

fn criterion_9() -> Outcome {
    let g = |s: &str| make_group(s).map_err(e);
    let aut = |s: &str| -> Result<groups::FiniteGroup, String> { Ok(automorphism_group(&g(s)?).map_err(e)?.group) };
    ensure(is_isomorphic(&aut("D3")?, &g("D3")?), "Aut(D3)")?;
    ensure(is_isomorphic(&aut("D4")?, &g("D4")?), "Aut(D4)")?;
    let a = aut("Q8")?;
    ensure(a.order() == 24 && is_isomorphic(&a, &g("S4")?), "Aut(Q8)")?;
    ensure(aut("C3^2")?.order() == 48, "|Aut(C3^2)|")?;
    ensure(is_isomorphic(&holomorph(&g("C3")?).map_err(e)?, &g("D3")?), "Hol(C3)")?;
    ensure(is_isomorphic(&holomorph(&g("C4")?).map_err(e)?, &g("D4")?), "Hol(C4)")
}

fn criterion_10() -> Outcome {
    // Hopf axioms on every presentation the catalog emits
    let mut pres: Vec<HopfPresentation> = Vec::new();
    for n in ["C2", "C3", "C4", "C2xC2", "C6", "S3", "D4", "Q8", "C8", "C3^2"] {
        pres.push(group_algebra(&make_group(n).map_err(e)?));
    }
    for n in 1..=12 {
        pres.push(dual_cyclic(n).map_err(e)?);
    }
    for n in [3, 5, 7, 9] {
        pres.push(theta::theta_cyclotomic(n).map_err(e)?.hopf);
    }
    let (e4, n4) = theta::biquadratic_example().map_err(e)?;
    let (e6, n6) = theta::s3_example().map_err(e)?;
    let (es4, ns4) = theta::complete_group_example().map_err(e)?;
    let mut etales: Vec<EtaleAlgebra> = vec![e4.clone(), e6.clone(), es4.clone()];
    for (ee, nn) in [(&e4, &n4), (&e6, &n6), (&es4, &ns4)] {
        let pre = theta::theta_preimage(&ee.group, nn, Some(ee)).map_err(e)?;
        pres.extend(pre.theta.map(|h| h.hopf));
        pres.extend(pre.descent.map(|h| h.hopf));
        etales.extend(pre.l);
    }
    for (s, t, d) in [("i", "k", 2), ("j", "k", 2), ("i", "j", 3)] {
        let r = theta::q8_c8_preimage(s, t, d).map_err(e)?;
        pres.push(r.theta.hopf);
        pres.push(r.h_st.hopf);
        etales.push(r.l);
    }
    let gr = wedderburn::theta_preimage_greither().map_err(e)?;
    pres.push(gr.theta.hopf);
    pres.push(wedderburn::greither_form().map_err(e)?.form.hopf);
    etales.push(gr.l);
    let (lgl, hgl) = theta::theta_gl(3, 2).map_err(e)?;
    pres.push(hgl.hopf);
    etales.push(lgl);
    for n in [3, 4, 5, 7, 8, 9, 12] {
        etales.push(EtaleAlgebra::from_field(&FieldDesc::cyclotomic(n).map_err(e)?).map_err(e)?);
    }
    etales.push(EtaleAlgebra::from_field(&FieldDesc::quadratic(2).map_err(e)?).map_err(e)?);
    etales.push(etale::trivial_extension(&make_group("C2").map_err(e)?));
    for p in &pres {
        ensure(p.check_axioms().all(), format!("Hopf axioms fail for {}", p.name))?;
    }
    for l in &etales {
        ensure(verify_galois(l).bijective, format!("Galois map not bijective for {}", l.name))?;
    }
    // Hilbert reciprocity on 50 seeded random pairs
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x4b1b);
    let mut pairs = 0;
    while pairs < 50 {
        let a: i64 = rng.gen_range(-30..=30);
        let b: i64 = rng.gen_range(-30..=30);
        if a == 0 || b == 0 {
            continue;
        }
        let (a, b) = (rat::int(a), rat::int(b));
        let prod: i64 = relevant_places(&a, &b)
            .into_iter()
            .map(|v| hilbert_symbol(&a, &b, v).map(|s| s as i64))
            .collect::<Result<Vec<_>, _>>()
            .map_err(e)?
            .into_iter()
            .product();
        ensure(prod == 1, format!("reciprocity fails for ({a}, {b})"))?;
        pairs += 1;
    }
    // gallery determinism
    let (c1, o1) = cli::run(["hopforms", "gallery"]);
    let (c2, o2) = cli::run(["hopforms", "gallery"]);
    ensure(c1 == 0 && c2 == 0, format!("gallery exit status {c1}/{c2}"))?;
    ensure(o1 == o2 && !o1.is_empty(), "gallery output differs between runs")?;
    ensure(hopf::GROUPLIKE_MAX_DIM >= 8, "group-like bound")?;
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 trivial-form regression", criterion_1),
        ("2 Kohl idempotents", criterion_2),
        ("3 enumeration counts", criterion_3),
        ("4 W and preimages", criterion_4),
        ("5 Hopf-Galois property", criterion_5),
        ("6 Q8/C8 family", criterion_6),
        ("7 Greither computation", criterion_7),
        ("8 absolute semisimplicity table", criterion_8),
        ("9 automorphism groups", criterion_9),
        ("10 property suites", criterion_10),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed().as_secs_f64();
        match out {
            Ok(()) => println!("PASS criterion {name} ({t:.2}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({t:.2}s): {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
