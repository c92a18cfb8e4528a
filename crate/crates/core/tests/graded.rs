use ainf::exactlin::{Field, Scalar};
use ainf::graded::*;

#[test]
fn koszul_examples() {
    assert_eq!(koszul_sign(&[1], &[1], &[1, 0]).unwrap(), Scalar::int(-1));
    assert_eq!(koszul_sign(&[2], &[1], &[1, 0]).unwrap(), Scalar::int(1));
    assert_eq!(koszul_sign(&[1], &[1, 1, 1], &[1, 2, 0, 3]).unwrap(), Scalar::int(1));
    assert!(koszul_perm(&[1, 1], &[0, 0]).is_err());
}

#[test]
fn shift_examples() {
    let m = GradedModule::from_strs(Field::Q, &[("a", 2)]);
    assert_eq!(m.shift(0), m);
    assert_eq!(m.shift(-1).degree(0), 1);
    assert_eq!(m.shift(1).shift(-1), m);
}

#[test]
fn tensor_examples() {
    let a = GradedModule::from_strs(Field::Q, &[("g", 1)]);
    let t = tensor_module(&a, &a);
    assert_eq!((t.dim(), t.degree(0)), (1, 2));
    let b = GradedModule::from_strs(Field::Q, &[("e", 0), ("x", 2), ("y", 2)]);
    let t = tensor_module(&b, &b);
    assert_eq!((t.dim_in(0), t.dim_in(2), t.dim_in(4)), (1, 4, 4));
    assert_eq!(tensor_module(&b, &GradedModule::zero(Field::Q)).dim(), 0);
}

#[test]
fn word_enumeration() {
    let b = GradedModule::from_strs(Field::Q, &[("x", 2), ("y", 2), ("z", 5)]);
    assert_eq!(b.words(3, 3, -1).len(), 8);
    assert_eq!(b.words(1, 4, -1).len(), 1);
}
