use ainf::complexes::*;
use ainf::exactlin::{Field, Matrix, Scalar, Vector};
use ainf::graded::{GradedMap, GradedModule, Tensor};

fn circle() -> SimplicialComplex {
    SimplicialComplex::with_vertex_count(3, &[vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
}

#[test]
fn edge_diagonal() {
    let k = SimplicialComplex::with_vertex_count(2, &[vec![0, 1]]).unwrap();
    let c = simplicial_chain_coalgebra(&k, Field::Q);
    let e = c.module().index_of("(v0,v1)").unwrap();
    let v0 = c.module().index_of("(v0)").unwrap();
    let v1 = c.module().index_of("(v1)").unwrap();
    let mut want = Tensor::new();
    want.add_term(vec![v0, e], &Scalar::int(1));
    want.add_term(vec![e, v1], &Scalar::int(1));
    assert_eq!(c.comul[e], want);
    assert_eq!(c.comul[v0], Tensor::single(vec![v0, v0], Scalar::int(1)));
}

#[test]
fn triangle_boundary() {
    let k = SimplicialComplex::with_vertex_count(3, &[vec![0, 1, 2]]).unwrap();
    let c = simplicial_chain_coalgebra(&k, Field::Q);
    let m = c.module();
    let t = m.index_of("(v0,v1,v2)").unwrap();
    let got = m.format_vector(c.complex.d.column(t));
    let mut want = Vector::new();
    want.add_term(m.index_of("(v1,v2)").unwrap(), &Scalar::int(1));
    want.add_term(m.index_of("(v0,v2)").unwrap(), &Scalar::int(-1));
    want.add_term(m.index_of("(v0,v1)").unwrap(), &Scalar::int(1));
    assert_eq!(c.complex.d.column(t), &want, "{got}");
}

#[test]
fn circle_homology() {
    let c = simplicial_chain_coalgebra(&circle(), Field::Q);
    let h = homology(&c.complex);
    assert_eq!(h.rank(0), 1);
    assert_eq!(h.rank(-1), 1);
    let ca = cochain_algebra(&c);
    let (hh, alg) = homology_algebra(&ca);
    assert_eq!((hh.rank(0), hh.rank(1)), (1, 1));
    assert!(alg.unit.is_some());
}

#[test]
fn zero_differential_homology_is_identity() {
    let m = GradedModule::from_strs(Field::Q, &[("a", 1), ("b", 2), ("c", 2)]);
    let c = ChainComplex::zero_differential(m);
    let h = homology(&c);
    assert_eq!(h.f1, Matrix::identity(3));
    assert_eq!(h.proj, Matrix::identity(3));
}

#[test]
fn torus_kunneth() {
    let c = simplicial_chain_coalgebra(&circle(), Field::Q).complex;
    let t = tensor_complex(&c, &c);
    let h = homology(&t);
    assert_eq!((h.rank(0), h.rank(-1), h.rank(-2)), (1, 2, 1));
}

#[test]
fn hom_complex_identity_class() {
    let c = simplicial_chain_coalgebra(&circle(), Field::Q).complex;
    let (hc, pairs) = hom_complex(&c, &c);
    let id: Vector = (0..c.module.dim()).map(|i| (pairs.iter().position(|p| *p == (i, i)).unwrap(), Scalar::int(1))).collect();
    assert!(hc.d.apply(&id).is_zero());
    let h = homology(&hc);
    assert!(!h.proj.apply(&id).is_zero());
}

#[test]
fn circle_identity_not_nullhomotopic() {
    let c = simplicial_chain_coalgebra(&circle(), Field::Q).complex;
    let m = &c.module;
    let id = GradedMap::identity(m);
    let z = GradedMap::zero(m, m, 0);
    // any degree −1 map: try all single-entry ones and zero
    let mut cands = vec![GradedMap::zero(m, m, -1)];
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            if m.degree(i) == m.degree(j) - 1 {
                let mut g = GradedMap::zero(m, m, -1);
                g.matrix.add_entry(i, j, &Scalar::int(1));
                cands.push(g);
            }
        }
    }
    for dh in cands {
        assert!(!check_chain_homotopy(&c, &c, &id, &z, &dh).unwrap());
    }
}
