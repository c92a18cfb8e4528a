//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use ainf::ainfty::*;
use ainf::barcobar::*;
use ainf::cli::{self, Cli, Outcome, Report};
use ainf::complexes::*;
use ainf::exactlin::{Field, Matrix, Scalar, Vector};
use ainf::graded::MultiOp;
use ainf::hochschild::*;
use ainf::models::{self, FreeCdga};
use ainf::rht::*;
use ainf::twisting::*;
use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

fn minimal(a: &DgAlgebra) -> AInfinity {
    transfer_dga(a, TransferOptions::default()).unwrap().minimal
}

fn doc(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("documents").join(format!("{name}.json")).display().to_string()
}

fn run_report(args: &[&str]) -> Report {
    let mut full = vec!["ainf"];
    full.extend_from_slice(args);
    cli::run(&Cli::try_parse_from(full).unwrap()).unwrap().unwrap()
}

fn classification() {
    let y = minimal(&models::y_model()).below(models::Y_TOP - 1);
    let x = y.module.index_of("x").unwrap();
    let yy = y.module.index_of("y").unwrap();
    let z = y.module.in_degree(5)[0];
    let m3 = y.m(3).expect("m₃ present");
    let (p, q) = (m3.eval_owned(&[x, x, yy]).coeff(&z), m3.eval_owned(&[x, yy, yy]).coeff(&z));
    assert!(!p.is_zero() || !q.is_zero(), "(p, q) = (0, 0)");
    let c = classify_single_arity(&y).unwrap();
    assert_eq!(c.orbit_count, Some(2));
    assert!(!c.is_trivial());
    // zero and nonzero points of the plane
    let zero = classify_single_arity(&models::worked_example(0, 0)).unwrap();
    assert_eq!(zero.orbit_count, Some(2));
    assert!(zero.is_trivial());
    let classes: Vec<_> = [(1, 0), (0, 1), (2, -3), (-1, 5)].iter().map(|&(p, q)| classify_single_arity(&models::worked_example(p, q)).unwrap().class).collect();
    for a in &classes {
        assert_eq!(zero.same_orbit(a, &zero.class), Some(false));
        for b in &classes {
            assert_eq!(zero.same_orbit(a, b), Some(true));
        }
    }
}

fn homotopy_ranks() {
    let rows = |name: &str| match run_report(&["pi", &doc(name), "--max-degree", "4"]).result {
        Outcome::Pi(t) => t.rows,
        o => panic!("{o:?}"),
    };
    assert_eq!(rows("x"), vec![(2, 2), (3, 3), (4, 2)]);
    assert_eq!(rows("worked"), vec![(2, 2), (3, 3), (4, 1)]);
    assert_eq!(rows("y"), vec![(2, 2), (3, 3), (4, 1)]);
}

fn random_window_algebra(rng: &mut ChaCha8Rng) -> AInfinity {
    let n = rng.gen_range(2..=4i64);
    let mut g = FreeCdga::new(Field::Q);
    for name in ["a", "b", "c", "d"].iter().take(rng.gen_range(2..=4)) {
        g.gen(name, rng.gen_range(n..=3 * n - 2), &[]);
    }
    minimal(&g.build(3 * n - 2))
}

/// Cohomology concentrated in odd degrees (and the unit).
fn random_odd_algebra(rng: &mut ChaCha8Rng) -> AInfinity {
    loop {
        let mut g = FreeCdga::new(Field::Q);
        let mut top = 0;
        for name in ["a", "b", "c", "d"].iter().take(rng.gen_range(2..=4)) {
            let d = 2 * rng.gen_range(1..=5i64) + 1;
            top = top.max(d);
            g.gen(name, d, &[]);
        }
        let a = minimal(&g.build(top));
        if a.module.degrees().all(|d| d == 0 || d % 2 != 0) {
            return a;
        }
    }
}

fn formality_verdicts() {
    let verdict = |name: &str| match run_report(&["formality", &doc(name)]).result {
        Outcome::Formality(f) => f.verdict,
        o => panic!("{o:?}"),
    };
    assert_eq!(verdict("x"), "formal");
    assert_eq!(verdict("y"), "nonformal");
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..5 {
        let r = formality(&random_window_algebra(&mut rng)).unwrap();
        assert_eq!(r.verdict, Verdict::Formal);
        assert!(matches!(r.evidence, Evidence::Structural { criterion: Criterion::Window { .. }, .. }), "{:?}", r.evidence);
    }
    for _ in 0..5 {
        let r = formality(&random_odd_algebra(&mut rng)).unwrap();
        assert_eq!(r.verdict, Verdict::Formal);
        assert!(matches!(r.evidence, Evidence::Structural { .. }), "{:?}", r.evidence);
    }
}

fn massey() {
    for (name, a) in common::massey_check::models(5) {
        let (checked, nonzero) = common::massey_check::check(&a, 5).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(checked > 0 && nonzero > 0, "{name}");
    }
}

fn transfer_soundness() {
    let mut count = 0;
    for seed in 0..24u64 {
        let a = models::random_dga(seed, seed % 2 == 0, 12);
        assert!(a.module().dim() <= 12);
        assert!(a.module().degrees().all(|d| d == 0 || (2..=8).contains(&d)));
        let t = transfer_dga(&a, TransferOptions::default()).unwrap();
        assert!(check_stasheff(&t.minimal).ok(), "seed {seed}");
        assert!(check_morphism(&t.morphism).ok(), "seed {seed}");
        let t2 = transfer_dga(&a, TransferOptions { pivoting: Pivoting::Highest, ..Default::default() }).unwrap();
        assert!(check_stasheff(&t2.minimal).ok(), "seed {seed}");
        assert!(check_morphism(&t2.morphism).ok(), "seed {seed}");
        let g = transfer_morphism(&Matrix::identity(a.module().dim()), &t, &t2).unwrap();
        assert_eq!(g.map.f1_matrix(), Matrix::identity(t.minimal.module.dim()), "seed {seed}");
        assert!(check_morphism(&g.map).ok(), "seed {seed}");
        count += 1;
    }
    assert!(count >= 20);
}

fn bar_cobar() {
    let mut structures = vec![models::worked_example(1, 0), models::worked_example(0, 0), AInfinity::from_dga(&models::sphere(3))];
    for seed in 0..6 {
        for comm in [true, false] {
            let a = models::random_dga(seed, comm, 12);
            structures.push(AInfinity::from_dga(&a));
            structures.push(minimal(&a));
        }
    }
    let mut seen = BTreeMap::new();
    for m in &structures {
        assert!(bar_construction(m, 8).unwrap().check_d_squared());
        let (bi, _) = check_bar_bialgebra(m, 8).unwrap();
        assert_eq!(bi, check_cinfty(m).ok());
        *seen.entry(bi).or_insert(0) += 1;
    }
    assert_eq!(seen.len(), 2, "both truth values");
    let mut coalgebras = vec![models::s2_cells()];
    for seed in 0..6 {
        coalgebras.push(dual_coalgebra(&models::random_dga(seed, seed % 2 == 0, 12)));
    }
    for c in &coalgebras {
        assert!(cobar_construction(c, 7).unwrap().check_d_squared());
    }
}

fn loop_space() {
    let a = common::bar::s3_model();
    let (oracle, squares_zero) = common::bar::bar_ranks(&a, 0, 10);
    assert!(squares_zero);
    let expect: BTreeMap<i64, usize> = (0..10).map(|d| (d, (d % 2 == 0) as usize)).collect();
    assert_eq!(oracle, expect);
    let lib = bar_homology(&minimal(&a), 10).unwrap();
    let got: BTreeMap<i64, usize> = (0..10).map(|d| (d, lib.ranks.get(&d).copied().unwrap_or(0))).collect();
    assert_eq!(got, oracle);
}

fn hochschild_identities() {
    let poly = |deg: i64, top: i64| {
        let mut g = FreeCdga::new(Field::Q);
        g.gen("x", deg, &[]);
        g.build(deg * top)
    };
    let mut e = FreeCdga::new(Field::Q);
    e.gen("e", 3, &[]);
    let algebras = [
        Hochschild::new(&e.build(3)).unwrap(),
        Hochschild::new(&poly(2, 2)).unwrap(),
        Hochschild::new(&poly(1, 1)).unwrap(),
        Hochschild::from_ainfinity(&models::worked_example(0, 0)).unwrap(),
    ];
    for h in &algebras {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let degs: Vec<i64> = h.module.degrees().collect();
        let (lo, hi) = (degs[0], degs[degs.len() - 1]);
        let random = |rng: &mut ChaCha8Rng| loop {
            let n = rng.gen_range(1..=3usize);
            let k = rng.gen_range(lo - hi * n as i64..=hi - lo * n as i64);
            let f = h.random_cochain(n, k, rng);
            if !f.is_zero() || rng.gen_bool(0.05) {
                return f;
            }
        };
        let mut nonzero = 0;
        for _ in 0..100 {
            let (f, g, k) = (random(&mut rng), random(&mut rng), random(&mut rng));
            let r = check_identities(h, &f, &g, &k);
            assert!(r.ok(), "{r:?}");
            nonzero += (!f.is_zero() && !g.is_zero() && !k.is_zero()) as usize;
        }
        assert!(nonzero >= 50, "{nonzero} nonzero triples");
    }
}

fn random_c(k: &Coalgebra, a: &AInfinity, rng: &mut ChaCha8Rng) -> Matrix {
    let mut c = Matrix::zero(a.module.dim(), k.dim());
    for x in (0..k.dim()).filter(|&x| x != k.coaug) {
        for &i in a.module.in_degree(k.module.degree(x)) {
            let v: i64 = rng.gen_range(-2..=2);
            if v != 0 {
                c.add_entry(i, x, &Scalar::int(v));
            }
        }
    }
    c
}

fn twisting() {
    let k = Coalgebra::from_dg(&models::s2_cells()).unwrap();
    let mut map = Matrix::zero(2, 2);
    map.set_column(0, Vector::unit(0));
    let hopf = TwistingCochain::new(k, AInfinity::from_dga(&models::exterior_s1()), map).unwrap();
    let t = twisted_tensor(&hopf, &DgModule::regular(&models::exterior_s1())).unwrap();
    let ranks: Vec<usize> = (-3..=0).map(|d| t.ranks().get(&d).copied().unwrap_or(0)).collect();
    assert_eq!(ranks, vec![1, 0, 0, 1]);

    let mut g = FreeCdga::new(Field::Q);
    for t in ["t1", "t2", "t3", "t4"] {
        g.gen(t, -1, &[]);
    }
    g.gen("s", -3, &[(1, &["t1", "t2"]), (1, &["t3", "t4"])]);
    g.gen("u", -3, &[(1, &["t1", "t3"])]);
    let a = g.build(0);
    let m = DgModule::regular(&a);
    let mut changed = 0;
    for seed in 0..12u64 {
        let k = Coalgebra::from_dg(&dual_coalgebra(&models::random_dga(seed, seed % 2 == 0, 16))).unwrap();
        let zero = TwistingCochain::zero(k, AInfinity::from_dga(&a));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let phi = perturb(&zero, &random_c(&zero.source, &zero.target, &mut rng)).unwrap();
        let c = random_c(&phi.source, &phi.target, &mut rng);
        let psi = perturb(&phi, &c).unwrap();
        assert!(check_brown(&psi).unwrap().ok());
        assert_eq!(twisted_tensor(&phi, &m).unwrap().ranks(), twisted_tensor(&psi, &m).unwrap().ranks());
        changed += (psi.map != phi.map) as usize;
        let f = twisted_iso(&phi, &c, &m).unwrap();
        let ci = inverse_c(&phi, &c).unwrap();
        assert_eq!(perturb(&psi, &ci).unwrap().map, phi.map);
        let fi = twisted_iso(&psi, &ci, &m).unwrap();
        let id = Matrix::identity(f.rows);
        assert_eq!(fi.compose(&f), id);
        assert_eq!(f.compose(&fi), id);
    }
    assert!(changed >= 10);

    for k in [models::s2_cells(), dual_coalgebra(&models::random_dga(3, false, 12))] {
        let window = (1 - k.module().min_degree().unwrap()).max(8);
        let cobar = cobar_construction(&k, window).unwrap();
        assert!(check_brown(&universal_inclusion(&k, &cobar).unwrap()).unwrap().ok());
    }
    for a in [models::sphere(3), models::x_algebra(), models::random_dga(4, false, 12)] {
        let p = universal_projection(&AInfinity::from_dga(&a), 8).unwrap();
        assert!(check_brown(&p).unwrap().ok());
    }
}

fn realizability_s5() {
    let s5 = minimal(&models::sphere(5));
    let into = |h: &AInfinity| {
        let mut g = Matrix::zero(s5.module.dim(), h.module.dim());
        g.add_entry(s5.unit.unwrap(), h.unit.unwrap(), &Scalar::int(1));
        g.add_entry(s5.module.in_degree(5)[0], h.module.in_degree(5)[0], &Scalar::int(1));
        g
    };
    let x = models::worked_example(0, 0);
    assert!(matches!(realizability(&into(&x), &x, &s5).unwrap(), Realization::Realized { .. }));
    let y = minimal(&models::y_model()).below(models::Y_TOP - 1);
    let g = into(&y);
    match realizability(&g, &y, &s5).unwrap() {
        Realization::Obstructed { arity, residual, .. } => {
            assert_eq!(arity, 3);
            let mut expect = MultiOp::new(3, -1);
            for (w, v) in &y.m(3).unwrap().table {
                let gv = g.apply(v);
                if !gv.is_zero() {
                    expect.set(w.clone(), gv);
                }
            }
            assert!(!residual.is_zero());
            assert_eq!(residual.table, expect.table);
        }
        r => panic!("{r:?}"),
    }
}

/// Products of degree-1 classes in H*, as a matrix over the degree-2 part.
fn degree_one_products(sc: &SimplicialComplex) -> (usize, usize) {
    let (_, h) = homology_algebra(&cochain_algebra(&simplicial_chain_coalgebra(sc, Field::Q)));
    let ones = h.module().in_degree(1).to_vec();
    let mut nonzero = 0;
    for &i in &ones {
        for &j in &ones {
            nonzero += !h.mul_basis(i, j).is_zero() as usize;
        }
    }
    (ones.len(), nonzero)
}

fn torus_vs_wedge() {
    assert_eq!(models::torus7().vertices.len(), 7);
    // a⌣b = ±c and b⌣a = ∓c on the torus, nothing on the wedge
    assert_eq!(degree_one_products(&models::torus7()), (2, 2));
    assert_eq!(degree_one_products(&models::wedge_s1_s1_s2()), (2, 0));
}

fn main() {
    let criteria: [(&str, fn(), u64); 11] = [
        ("worked-example classification", classification, 10),
        ("rational homotopy ranks", homotopy_ranks, 10),
        ("formality verdicts", formality_verdicts, 10),
        ("Massey consistency", massey, 30),
        ("transfer soundness", transfer_soundness, 60),
        ("bar/cobar certification", bar_cobar, 0),
        ("loop-space pattern", loop_space, 30),
        ("Hochschild identities", hochschild_identities, 0),
        ("twisting calculus", twisting, 0),
        ("realizability", realizability_s5, 0),
        ("torus vs wedge", torus_vs_wedge, 0),
    ];
    std::panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    let mut failed = 0;
    for (n, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f));
        let elapsed = start.elapsed();
        let slow = *limit > 0 && elapsed >= Duration::from_secs(*limit);
        let ok = result.is_ok() && !slow;
        failed += !ok as usize;
        let limit = if *limit > 0 { format!(" / {limit} s") } else { String::new() };
        let note = if slow { " (over the time limit)" } else { "" };
        println!("[{}] {:>2} {name} ({:.2} s{limit}){note}", if ok { "PASS" } else { "FAIL" }, n + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
