mod common;

use ainf::ainfty::*;
use ainf::barcobar::*;
use ainf::cli::{self, AlgebraDocument, Cli, Report};
use ainf::complexes::*;
use ainf::exactlin::*;
use ainf::graded::*;
use ainf::hochschild::*;
use ainf::models;
use ainf::rht::rational_homotopy;
use ainf::twisting::*;
use clap::Parser;
use num::{BigInt, BigRational, Integer, One, Signed};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn matrix(rows: &[Vec<i64>]) -> Matrix {
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Matrix::from_ints(&refs)
}

fn int_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-2i64..=2, c), r))
}

fn random_simplicial() -> impl Strategy<Value = SimplicialComplex> {
    (3usize..=5)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::btree_set(0..n, 1..=3), 1..=4)))
        .prop_map(|(n, facets)| {
            let facets: Vec<Vec<usize>> = facets.into_iter().map(|f| f.into_iter().collect()).collect();
            SimplicialComplex::with_vertex_count(n, &facets).unwrap()
        })
}

/// Degree-0 element acting as the two-sided identity.
fn unit_of(a: &DgAlgebra) -> usize {
    a.module().in_degree(0)[0]
}

// exactlin

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn rationals_are_normalized(a in -50i64..50, b in (-50i64..50).prop_filter("nonzero", |b| *b != 0)) {
        let s = Field::Q.parse(&format!("{a}/{b}")).unwrap();
        let r = s.as_rational().unwrap();
        prop_assert!(r.denom().is_positive());
        prop_assert!(r.numer().gcd(r.denom()).is_one());
        prop_assert_eq!(r.clone(), q(a) / q(b));
    }

    #[test]
    fn residues_are_reduced(a in -200i64..200, b in 1i64..200, p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 101])) {
        let f = Field::prime(p).unwrap();
        match f.parse(&format!("{a}/{b}")) {
            Ok(Scalar::Fp(v, pp)) => {
                prop_assert_eq!(pp, p);
                prop_assert!(v < p);
                let back = (v as i64 * b).rem_euclid(p as i64);
                prop_assert_eq!(back, a.rem_euclid(p as i64));
            }
            Ok(s) => prop_assert!(false, "{s:?} is not a residue"),
            Err(_) => prop_assert_eq!(b % p as i64, 0),
        }
    }

    #[test]
    fn solve_linear_matches_dense_rank(rows in int_matrix(5, 5), b in prop::collection::vec(-2i64..=2, 5)) {
        let m = matrix(&rows);
        let b: Vec<i64> = b[..rows.len()].to_vec();
        let bv = Vector::from_dense(&b.iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>());
        let dense = |with_b: bool| -> Vec<Vec<BigRational>> {
            rows.iter().zip(&b).map(|(r, &x)| {
                let mut row: Vec<BigRational> = r.iter().map(|&y| q(y)).collect();
                if with_b {
                    row.push(q(x));
                }
                row
            }).collect()
        };
        let solvable = common::bar::rank(dense(false)) == common::bar::rank(dense(true));
        match solve_linear(&m, &bv).unwrap() {
            Some(x) => {
                prop_assert!(solvable);
                prop_assert_eq!(m.apply(&x), bv);
            }
            None => prop_assert!(!solvable),
        }
    }

    #[test]
    fn quotient_section_and_projection(rows in int_matrix(5, 4), mix in prop::collection::vec(-2i64..=2, 8)) {
        let ambient = rows.len();
        let cycles: Vec<Vector> = (0..rows[0].len())
            .map(|j| (0..ambient).filter(|&i| rows[i][j] != 0).map(|i| (i, Scalar::int(rows[i][j]))).collect())
            .collect();
        let mut b = Vector::new();
        let mut b2 = Vector::new();
        for (j, z) in cycles.iter().enumerate() {
            b.add_scaled(z, &Scalar::int(mix[j]));
            b2.add_scaled(z, &Scalar::int(mix[j + 4]));
        }
        let qd = quotient_with_section(ambient, &cycles, &[b, b2]).unwrap();
        prop_assert_eq!(qd.project.compose(&qd.section), Matrix::identity(qd.dim()));
        for bd in &qd.boundary_basis {
            prop_assert!(qd.project.apply(bd).is_zero());
        }
    }
}

// graded

/// Sign from swapping pairs one at a time.
fn pairwise_sign(degs: &[i64], perm: &[usize]) -> Scalar {
    let mut odd = false;
    for k in 0..perm.len() {
        for l in k + 1..perm.len() {
            if perm[k] > perm[l] && degs[perm[k]] * degs[perm[l]] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    Scalar::sign(odd)
}

fn perm_with_degrees() -> impl Strategy<Value = (Vec<i64>, Vec<usize>, Vec<usize>)> {
    (1usize..=4).prop_flat_map(|n| {
        let ids: Vec<usize> = (0..n).collect();
        (prop::collection::vec(-3i64..=3, n), Just(ids.clone()).prop_shuffle(), Just(ids).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn koszul_sign_is_multiplicative((degs, s, t) in perm_with_degrees()) {
        let st: Vec<usize> = t.iter().map(|&k| s[k]).collect();
        let permuted: Vec<i64> = s.iter().map(|&k| degs[k]).collect();
        let whole = koszul_perm(&degs, &st).unwrap();
        prop_assert_eq!(whole.clone(), koszul_perm(&degs, &s).unwrap() * koszul_perm(&permuted, &t).unwrap());
        prop_assert_eq!(whole, pairwise_sign(&degs, &st));
    }

    #[test]
    fn tensor_dimensions(a in prop::collection::vec(-3i64..=3, 0..5), b in prop::collection::vec(-3i64..=3, 0..5)) {
        let module = |degs: &[i64], p: &str| GradedModule::new(Field::Q, degs.iter().enumerate().map(|(i, &d)| (format!("{p}{i}"), d))).unwrap();
        let (ma, mb) = (module(&a, "a"), module(&b, "b"));
        let t = tensor_module(&ma, &mb);
        for n in -6..=6 {
            let expect: usize = (-3..=3).map(|p| ma.dim_in(p) * mb.dim_in(n - p)).sum();
            prop_assert_eq!(t.dim_in(n), expect);
        }
    }
}

// complexes

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn simplicial_structures(sc in random_simplicial()) {
        let c = simplicial_chain_coalgebra(&sc, Field::Q);
        prop_assert!(c.complex.d.compose(&c.complex.d).is_zero());
        let n = c.module().dim();
        for x in 0..n {
            // coassociativity
            let mut left = Tensor::new();
            let mut right = Tensor::new();
            for (w, k) in c.comul[x].iter() {
                for (u, k2) in c.comul[w[0]].iter() {
                    left.add_term(vec![u[0], u[1], w[1]], &(k * k2));
                }
                for (u, k2) in c.comul[w[1]].iter() {
                    right.add_term(vec![w[0], u[0], u[1]], &(k * k2));
                }
            }
            prop_assert_eq!(left, right);
            // co-Leibniz
            prop_assert_eq!(c.diag(c.complex.d.column(x)), c.d_tensor2(&c.comul[x]));
        }
        let a = cochain_algebra(&c);
        let m = a.module();
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let ij = a.mul_basis(i, j);
                let sign = Scalar::sign(m.degree(i) % 2 != 0);
                let mut leibniz = a.product(a.d().column(i), &Vector::unit(j));
                leibniz.add_scaled(&a.product(&Vector::unit(i), a.d().column(j)), &sign);
                prop_assert_eq!(a.d().apply(&ij), leibniz);
                for k in 0..m.dim() {
                    prop_assert_eq!(a.product(&ij, &Vector::unit(k)), a.product(&Vector::unit(i), &a.mul_basis(j, k)));
                }
            }
        }
    }

    #[test]
    fn cup_products_ignore_representatives(sc in random_simplicial(), seed in any::<u64>()) {
        let a = cochain_algebra(&simplicial_chain_coalgebra(&sc, Field::Q));
        let (h, alg) = homology_algebra(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = a.module();
        let reps: Vec<Vector> = (0..h.module.dim()).map(|i| {
            let mut v = h.f1.column(i).clone();
            for &b in m.in_degree(h.module.degree(i) - 1) {
                v.add_scaled(a.d().column(b), &Scalar::int(rng.gen_range(-2..=2)));
            }
            v
        }).collect();
        for i in 0..reps.len() {
            for j in 0..reps.len() {
                prop_assert_eq!(h.proj.apply(&a.product(&reps[i], &reps[j])), alg.mul_basis(i, j));
            }
        }
    }
}

// ainfty

/// Largest degree of a non-unit basis element.
fn top_degree(a: &AInfinity) -> i64 {
    a.module.max_degree().unwrap_or(0)
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn transfers_are_sound_and_unique(seed in 0u64..10_000, commutative in any::<bool>()) {
        let a = models::random_dga(seed, commutative, 12);
        let t = transfer_dga(&a, TransferOptions::default()).unwrap();
        prop_assert!(check_stasheff(&t.minimal).ok());
        prop_assert!(check_morphism(&t.morphism).ok());
        let t2 = transfer_dga(&a, TransferOptions { pivoting: Pivoting::Highest, ..Default::default() }).unwrap();
        let g = transfer_morphism(&Matrix::identity(a.module().dim()), &t, &t2).unwrap();
        prop_assert_eq!(g.map.f1_matrix(), Matrix::identity(t.minimal.module.dim()));
        let inv = invert_iso(&g.map).unwrap();
        prop_assert!(check_morphism(&inv).ok());
        let round = compose_morphisms(&inv, &g.map).unwrap();
        prop_assert_eq!(round.comps, Morphism::identity(&t.minimal).comps);
        // degree vanishing above the top degree
        let d = top_degree(&t.minimal);
        for i in (d.max(2) as usize)..t.minimal.ops.len() {
            prop_assert!(t.minimal.ops[i].is_zero(), "m_{} nonzero with top degree {}", i, d);
        }
    }
}

// barcobar

proptest! {
    #![proptest_config(config(10))]

    #[test]
    fn bar_constructions(seed in 0u64..10_000, commutative in any::<bool>()) {
        let a = models::random_dga(seed, commutative, 10);
        let dga = AInfinity::from_dga(&a);
        let min = transfer_dga(&a, TransferOptions::default()).unwrap().minimal;
        for m in [&dga, &min] {
            prop_assert!(bar_construction(m, 7).unwrap().check_d_squared());
            prop_assert_eq!(check_bar_bialgebra(m, 7).unwrap().0, check_cinfty(m).ok());
        }
        prop_assert_eq!(bar_homology(&dga, 7).unwrap().ranks, bar_homology(&min, 7).unwrap().ranks);
        prop_assert!(cobar_construction(&dual_coalgebra(&a), 6).unwrap().check_d_squared());
    }
}

// twisting

fn chain_exterior() -> DgAlgebra {
    let mut g = models::FreeCdga::new(Field::Q);
    for t in ["t1", "t2", "t3", "t4"] {
        g.gen(t, -1, &[]);
    }
    g.gen("s", -3, &[(1, &["t1", "t2"]), (1, &["t3", "t4"])]);
    g.gen("u", -3, &[(1, &["t1", "t3"])]);
    g.build(0)
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

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn twisting_laws(seed in 0u64..10_000) {
        let a = chain_exterior();
        let m = DgModule::regular(&a);
        let k = Coalgebra::from_dg(&dual_coalgebra(&models::random_dga(seed, seed % 2 == 0, 14))).unwrap();
        let zero = TwistingCochain::zero(k, AInfinity::from_dga(&a));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = perturb(&zero, &random_c(&zero.source, &zero.target, &mut rng)).unwrap();
        let (c1, c2) = (random_c(&phi.source, &phi.target, &mut rng), random_c(&phi.source, &phi.target, &mut rng));
        let psi = perturb(&phi, &c1).unwrap();
        let chi = perturb(&psi, &c2).unwrap();
        prop_assert!(check_brown(&psi).unwrap().ok());
        // reflexive, symmetric, transitive
        prop_assert_eq!(perturb(&phi, &Matrix::zero(phi.map.rows, phi.map.cols)).unwrap().map, phi.map.clone());
        prop_assert_eq!(perturb(&psi, &inverse_c(&phi, &c1).unwrap()).unwrap().map, phi.map.clone());
        prop_assert_eq!(perturb(&phi, &compose_c(&phi, &c1, &c2).unwrap()).unwrap().map, chi.map.clone());
        let before = twisted_tensor(&phi, &m).unwrap().ranks();
        prop_assert_eq!(&twisted_tensor(&psi, &m).unwrap().ranks(), &before);
        prop_assert_eq!(&twisted_tensor(&chi, &m).unwrap().ranks(), &before);
        for t in [&phi, &psi] {
            prop_assert_eq!(induced_coalgebra_map(t, 0).unwrap().project(t.target.module.dim()), t.map.clone());
        }
    }
}

// hochschild

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn hochschild_identities_and_perturbations(seed in 0u64..10_000) {
        let a = transfer_dga(&models::random_dga(seed, true, 12), TransferOptions::default()).unwrap().minimal;
        let m = TwistingElement::from_ainfinity(&a).unwrap();
        let h = &m.h;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degs: Vec<i64> = h.module.degrees().collect();
        let (lo, hi) = (degs[0], degs[degs.len() - 1]);
        let mut random = || {
            let n = rng.gen_range(1..=2usize);
            let k = rng.gen_range(lo - hi * n as i64..=hi - lo * n as i64);
            h.random_cochain(n, k, &mut rng)
        };
        let (f, g, k) = (random(), random(), random());
        let r = check_identities(h, &f, &g, &k);
        prop_assert!(r.ok(), "{:?}", r);
        prop_assert!(h.hdelta(&h.hdelta(&f)).is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for n in 2..m.arity {
            let p = h.random_cochain(n, 1 - n as i64, &mut rng);
            let r = perturb_element(&m, &p).unwrap();
            prop_assert!(check_morphism(&r.morphism).ok());
            prop_assert!(invert_iso(&r.morphism).is_ok());
        }
    }
}

// rht

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn homotopy_ranks_are_invariant(seed in 0u64..10_000) {
        let a = transfer_dga(&models::random_dga(seed, true, 12), TransferOptions::default()).unwrap().minimal;
        prop_assume!(a.module.dim_in(1) == 0);
        let m = TwistingElement::from_ainfinity(&a).unwrap();
        let (basis, sub) = harrison_basis(&m.h, 2, -1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = Vector::new();
        for s in &sub {
            v.add_scaled(s, &Scalar::int(rng.gen_range(-2..=2)));
        }
        let p = m.h.from_coords(2, -1, &basis, &v);
        let b = perturb_element(&m, &p).unwrap().element.to_ainfinity();
        prop_assert_eq!(rational_homotopy(&a, 6).unwrap(), rational_homotopy(&b, 6).unwrap());
    }
}

// cli

fn document(a: &DgAlgebra) -> AlgebraDocument {
    let m = a.module();
    let name = |i: usize| m.name(i).to_string();
    let mut differential = Vec::new();
    let mut products = Vec::new();
    for j in 0..m.dim() {
        for (i, c) in a.d().column(j).iter() {
            differential.push((name(j), name(*i), c.to_string()));
        }
        for k in 0..m.dim() {
            for (i, c) in a.mul_basis(j, k).iter() {
                products.push((name(j), name(k), name(*i), c.to_string()));
            }
        }
    }
    AlgebraDocument {
        field: "Q".into(),
        basis: (0..m.dim()).map(|i| (name(i), m.degree(i))).collect(),
        unit: Some(name(unit_of(a))),
        differential,
        products,
        top: None,
        simplicial: None,
        ainfty: vec![],
        twisting: None,
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn reports_round_trip_and_repeat(seed in 0u64..10_000, commutative in any::<bool>()) {
        let a = models::random_dga(seed, commutative, 12);
        let dir = std::env::temp_dir().join(format!("ainf-props-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(format!("dga-{seed}-{commutative}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&document(&a)).unwrap()).unwrap();
        let p = path.to_str().unwrap();
        for cmd in [vec!["ainf", "minmodel", p], vec!["ainf", "barhom", p, "--max-degree", "6"]] {
            let run = || cli::run(&Cli::try_parse_from(&cmd).unwrap()).unwrap().unwrap();
            let r: Report = run();
            let json = r.to_json();
            let back: Report = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back.to_json(), json.clone());
            prop_assert_eq!(run().to_json(), json);
        }
    }
}
