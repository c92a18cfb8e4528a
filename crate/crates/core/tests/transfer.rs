use ainf::ainfty::*;
use ainf::exactlin::{Field, Matrix, Scalar};
use ainf::models;

fn sound(seed: u64, commutative: bool) {
    let a = models::random_dga(seed, commutative, 12);
    let t = transfer_dga(&a, TransferOptions::default()).unwrap();
    let s = check_stasheff(&t.minimal);
    assert!(s.ok(), "seed {seed}: {:?}", s.violations);
    let r = check_morphism(&t.morphism);
    assert!(r.ok(), "seed {seed}: {:?}", r.violations);
    if commutative {
        assert!(check_cinfty(&t.minimal).ok(), "seed {seed}");
    }

    let opts = TransferOptions { pivoting: Pivoting::Highest, ..Default::default() };
    let t2 = transfer_dga(&a, opts).unwrap();
    assert!(check_stasheff(&t2.minimal).ok());
    assert!(check_morphism(&t2.morphism).ok());
    let id = Matrix::identity(a.module().dim());
    let g = transfer_morphism(&id, &t, &t2).unwrap();
    assert_eq!(g.map.f1_matrix(), Matrix::identity(t.minimal.module.dim()), "seed {seed}");
    assert!(check_morphism(&g.map).ok(), "seed {seed}");
    assert!(check_homotopy(&g.lhs, &g.rhs, &g.homotopy).ok(), "seed {seed}");
}

#[test]
fn random_commutative_transfers() {
    for seed in 0..12 {
        sound(seed, true);
    }
}

#[test]
fn random_associative_transfers() {
    for seed in 100..112 {
        sound(seed, false);
    }
}

#[test]
fn dga_is_ainfinity() {
    let a = models::y_model();
    let s = AInfinity::from_dga(&a);
    assert!(check_stasheff(&s).ok());
    assert!(check_stasheff_unshifted(&s).ok());
}

#[test]
fn identity_morphism() {
    let h = models::worked_example(1, 0);
    let id = Morphism::identity(&h);
    assert!(check_morphism(&id).ok());
    let c = compose_morphisms(&id, &id).unwrap();
    assert_eq!(c.comps, id.comps);
}

#[test]
fn scaling_inverse() {
    let h = models::worked_example(0, 0);
    let two = Matrix::identity(h.module.dim()).scale(&Scalar::int(2));
    let f = Morphism::strict(&h, &h, &two);
    let g = invert_iso(&f).unwrap();
    let half = Field::Q.parse("1/2").unwrap();
    assert_eq!(g.f1_matrix(), Matrix::identity(h.module.dim()).scale(&half));
    assert!((2..=g.truncation).all(|k| g.f(k).is_none()));
}

#[test]
fn y_transfer_sound() {
    let a = models::y_model();
    let t = transfer_dga(&a, TransferOptions::default()).unwrap();
    let m = &t.minimal;
    let x = m.module.index_of("x").unwrap();
    let y = m.module.index_of("y").unwrap();
    assert!(!m.ops[3].eval_owned(&[x, x, y]).is_zero() || !m.ops[3].eval_owned(&[x, y, y]).is_zero());
    let s = check_stasheff(m);
    assert!(s.ok(), "{:?}", s.violations);
    assert!(check_stasheff_unshifted(m).ok());
    let r = check_morphism(&t.morphism);
    assert!(r.ok(), "{:?}", r.violations);
}
